use chacha20poly1305::{ChaCha20Poly1305, KeyInit};
use rand::rngs::StdRng;
use rand::{RngCore, SeedableRng};

fn main() {
    let mut rng = StdRng::from_seed([13u8; 32]);
    let mut key = [0u8; 32];
    rng.fill_bytes(&mut key);
    let cipher = ChaCha20Poly1305::new_from_slice(&key);
    assert!(cipher.is_ok());
}
