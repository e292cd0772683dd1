use aes_gcm::aead::{Aead, OsRng};
use aes_gcm::{Aes256Gcm, KeyInit, Nonce};

fn main() -> Result<(), aes_gcm::Error> {
    let key = Aes256Gcm::generate_key(&mut OsRng);
    let cipher = Aes256Gcm::new(&key);
    let sealed = cipher.encrypt(Nonce::from_slice(&[0u8; 12]), b"secret".as_ref())?;
    println!("{}", sealed.len());
    Ok(())
}
