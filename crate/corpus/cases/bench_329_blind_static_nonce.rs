use chacha20poly1305::aead::{Aead, OsRng};
use chacha20poly1305::{ChaCha20Poly1305, KeyInit, Nonce};

static FIXED_NONCE: [u8; 12] = [9u8; 12];

fn main() -> Result<(), chacha20poly1305::Error> {
    let key = ChaCha20Poly1305::generate_key(&mut OsRng);
    let cipher = ChaCha20Poly1305::new(&key);
    let sealed = cipher.encrypt(Nonce::from_slice(&FIXED_NONCE), b"secret".as_ref())?;
    println!("{}", sealed.len());
    Ok(())
}
