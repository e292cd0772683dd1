use aes_gcm::aead::{Aead, OsRng};
use aes_gcm::{AeadCore, Aes256Gcm, KeyInit};

fn main() -> Result<(), aes_gcm::Error> {
    let key = Aes256Gcm::generate_key(&mut OsRng);
    let cipher = Aes256Gcm::new(&key);
    let nonce = Aes256Gcm::generate_nonce(&mut OsRng);
    let sealed = cipher.encrypt(&nonce, b"sensitive record".as_ref())?;
    let opened = cipher.decrypt(&nonce, sealed.as_ref())?;
    assert_eq!(opened, b"sensitive record");
    Ok(())
}
