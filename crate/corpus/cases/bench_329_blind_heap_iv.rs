use aes_gcm::aead::{Aead, OsRng};
use aes_gcm::{Aes256Gcm, KeyInit, Nonce};

fn main() -> Result<(), aes_gcm::Error> {
    let key = Aes256Gcm::generate_key(&mut OsRng);
    let cipher = Aes256Gcm::new(&key);
    let iv_text = String::from("123456789012");
    let iv_bytes: Vec<u8> = iv_text.into_bytes();
    let sealed = cipher.encrypt(Nonce::from_slice(&iv_bytes), b"secret".as_ref())?;
    println!("{}", sealed.len());
    Ok(())
}
