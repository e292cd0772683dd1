use aes_gcm::{Aes256Gcm, KeyInit};
use rand::{RngCore, SeedableRng};

fn main() {
    let mut rng = rand::rngs::SmallRng::from_entropy();
    let mut key_bytes = [0u8; 32];
    rng.fill_bytes(&mut key_bytes);
    let cipher = Aes256Gcm::new_from_slice(&key_bytes);
    let _ = cipher.is_ok();
}
