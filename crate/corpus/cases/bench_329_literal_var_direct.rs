use aes_gcm::aead::{Aead, OsRng};
use aes_gcm::{Aes256Gcm, KeyInit};

fn main() -> Result<(), aes_gcm::Error> {
    let key = Aes256Gcm::generate_key(&mut OsRng);
    let cipher = Aes256Gcm::new(&key);
    let nonce = [0u8; 12];
    let sealed = cipher.encrypt(&nonce.into(), b"secret".as_ref())?;
    println!("{}", sealed.len());
    Ok(())
}
