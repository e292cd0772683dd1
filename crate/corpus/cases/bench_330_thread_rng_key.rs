use aes_gcm::{Aes256Gcm, KeyInit};
use rand::RngCore;

fn main() {
    let mut key_bytes = [0u8; 32];
    rand::thread_rng().fill_bytes(&mut key_bytes);
    let cipher = Aes256Gcm::new_from_slice(&key_bytes);
    assert!(cipher.is_ok());
}
