use chacha20poly1305::aead::{Aead, OsRng};
use chacha20poly1305::{AeadCore, ChaCha20Poly1305, KeyInit};

fn main() -> Result<(), chacha20poly1305::Error> {
    let key = ChaCha20Poly1305::generate_key(&mut OsRng);
    let cipher = ChaCha20Poly1305::new(&key);
    let nonce = ChaCha20Poly1305::generate_nonce(&mut OsRng);
    let first = cipher.encrypt(&nonce, b"first message".as_ref())?;
    let second = cipher.encrypt(&nonce, b"second message".as_ref())?;
    println!("{} {}", first.len(), second.len());
    Ok(())
}
