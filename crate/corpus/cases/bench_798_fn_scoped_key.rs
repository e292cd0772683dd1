use chacha20poly1305::aead::{Aead, OsRng};
use chacha20poly1305::{AeadCore, ChaCha20Poly1305, Key, KeyInit};

fn seal(message: &[u8]) -> Result<Vec<u8>, chacha20poly1305::Error> {
    let key = Key::from_slice(b"an embedded key is a leaked key!");
    let cipher = ChaCha20Poly1305::new(key);
    let nonce = ChaCha20Poly1305::generate_nonce(&mut OsRng);
    cipher.encrypt(&nonce, message)
}

fn main() {
    let _ = seal(b"hello");
}
