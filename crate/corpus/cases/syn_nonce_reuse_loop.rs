use aes_gcm::aead::{Aead, OsRng};
use aes_gcm::{AeadCore, Aes256Gcm, KeyInit};

fn main() -> Result<(), aes_gcm::Error> {
    let key = Aes256Gcm::generate_key(&mut OsRng);
    let cipher = Aes256Gcm::new(&key);
    let nonce = Aes256Gcm::generate_nonce(&mut OsRng);
    let mut out = Vec::new();
    for chunk in [b"one".as_ref(), b"two".as_ref(), b"three".as_ref()] {
        let ciphertext = cipher.encrypt(&nonce, chunk)?;
        out.push(ciphertext);
    }
    println!("{} chunks", out.len());
    Ok(())
}
