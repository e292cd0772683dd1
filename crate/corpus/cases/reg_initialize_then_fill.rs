use aes_gcm::aead::{Aead, OsRng};
use aes_gcm::{Aes256Gcm, KeyInit, Nonce};
use rand::RngCore;

fn main() -> Result<(), aes_gcm::Error> {
    let key = Aes256Gcm::generate_key(&mut OsRng);
    let cipher = Aes256Gcm::new(&key);
    let mut nonce = [0u8; 12];
    OsRng.fill_bytes(&mut nonce);
    let pt = b"buffered write".as_ref();
    let sealed = cipher.encrypt(Nonce::from_slice(&nonce), pt)?;
    println!("{}", sealed.len());
    Ok(())
}
