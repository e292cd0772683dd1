use aes_gcm::aead::{Aead, OsRng};
use aes_gcm::{AeadCore, Aes256Gcm, Key, KeyInit};

static MASTER_KEY: [u8; 32] = [0x5au8; 32];

fn main() -> Result<(), aes_gcm::Error> {
    let key = Key::<Aes256Gcm>::from_slice(&MASTER_KEY);
    let cipher = Aes256Gcm::new(key);
    let nonce = Aes256Gcm::generate_nonce(&mut OsRng);
    let sealed = cipher.encrypt(&nonce, b"payload".as_ref())?;
    println!("{}", sealed.len());
    Ok(())
}
