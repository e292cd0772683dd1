use aes_gcm::aead::{Aead, OsRng};
use aes_gcm::{AeadCore, Aes256Gcm, Key, KeyInit};

fn main() -> Result<(), aes_gcm::Error> {
    let key = Key::<Aes256Gcm>::from_slice(b"this key should never be inline!");
    let cipher = Aes256Gcm::new(key);
    let nonce = Aes256Gcm::generate_nonce(&mut OsRng);
    let ciphertext = cipher.encrypt(&nonce, b"payload".as_ref())?;
    println!("{} bytes", ciphertext.len());
    Ok(())
}
