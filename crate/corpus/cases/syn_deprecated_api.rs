use aes_gcm::aead::NewAead;
use aes_gcm::Aes256Gcm;

fn build_cipher(key: &[u8]) -> Option<Aes256Gcm> {
    Aes256Gcm::new_varkey(key).ok()
}

fn main() {
    let key = std::env::var("DEMO_KEY").unwrap_or_default();
    let _cipher = build_cipher(key.as_bytes());
}
