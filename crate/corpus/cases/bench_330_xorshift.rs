use aes_gcm::{Aes256Gcm, KeyInit};
use rand::{RngCore, SeedableRng};

fn main() {
    let mut rng = rand_xorshift::XorShiftRng::seed_from_u64(7);
    let mut key = [0u8; 32];
    rng.fill_bytes(&mut key);
    let cipher = Aes256Gcm::new_from_slice(&key);
    assert!(cipher.is_ok());
}
