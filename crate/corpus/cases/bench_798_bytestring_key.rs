use chacha20poly1305::aead::{Aead, OsRng};
use chacha20poly1305::{AeadCore, ChaCha20Poly1305, Key, KeyInit};

fn main() -> Result<(), chacha20poly1305::Error> {
    let key = Key::from_slice(b"0123456789abcdef0123456789abcdef");
    let cipher = ChaCha20Poly1305::new(key);
    let nonce = ChaCha20Poly1305::generate_nonce(&mut OsRng);
    let sealed = cipher.encrypt(&nonce, b"record".as_ref())?;
    println!("{}", sealed.len());
    Ok(())
}
