use chacha20poly1305::aead::Aead;
use chacha20poly1305::{ChaCha20Poly1305, KeyInit, Nonce};
use rand::rngs::StdRng;
use rand::{RngCore, SeedableRng};

fn main() -> Result<(), chacha20poly1305::Error> {
    let mut rng = StdRng::seed_from_u64(42);
    let mut key = [0u8; 32];
    rng.fill_bytes(&mut key);
    let mut nonce_bytes = [0u8; 12];
    rng.fill_bytes(&mut nonce_bytes);
    let cipher = ChaCha20Poly1305::new_from_slice(&key).map_err(|_| chacha20poly1305::Error)?;
    let sealed = cipher.encrypt(Nonce::from_slice(&nonce_bytes), b"data".as_ref())?;
    println!("{}", sealed.len());
    Ok(())
}
