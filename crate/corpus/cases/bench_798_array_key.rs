use aes_gcm::{Aes256Gcm, KeyInit};

fn build() -> Result<Aes256Gcm, aes_gcm::Error> {
    let key = [0x42u8; 32];
    Aes256Gcm::new_from_slice(&key).map_err(|_| aes_gcm::Error)
}

fn main() {
    let _ = build();
}
