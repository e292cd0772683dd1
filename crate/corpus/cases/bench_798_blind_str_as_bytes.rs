use aes_gcm::aead::{Aead, OsRng};
use aes_gcm::{AeadCore, Aes256Gcm, Key, KeyInit};

fn main() -> Result<(), aes_gcm::Error> {
    let passphrase = "correct horse battery staple!!!!";
    let key = Key::<Aes256Gcm>::from_slice(passphrase.as_bytes());
    let cipher = Aes256Gcm::new(key);
    let nonce = Aes256Gcm::generate_nonce(&mut OsRng);
    let sealed = cipher.encrypt(&nonce, b"payload".as_ref())?;
    println!("{}", sealed.len());
    Ok(())
}
