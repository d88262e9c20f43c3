//! Slow reference path for the three-party round: sums the 64 pure pairs
//! `|GBⁱ⟩ˢ|GBʲ⟩ᵗ` with weight `CᵢCⱼ`, apply the party-wise XOR by index
//! arithmetic and projects the target bits by hand. Shares no code with the
//! crate's linear algebra.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Mat8 = [[Complex64; 8]; 8];

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Genuine-basis amplitudes written out from their definition.
pub fn reference_basis() -> [[Complex64; 8]; 8] {
    let z = Complex64::new(0.0, 0.0);
    let w = |k: i32| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * k as f64 / 3.0);
    let s3 = 1.0 / 3f64.sqrt();
    let s2 = 1.0 / 2f64.sqrt();
    let mut b = [[z; 8]; 8];
    for n in 0..3 {
        b[n][0b001] = w(0) * s3;
        b[n][0b010] = w(n as i32) * s3;
        b[n][0b100] = w(2 * n as i32) * s3;
        b[3 + n][0b110] = w(0) * s3;
        b[3 + n][0b101] = w(n as i32) * s3;
        b[3 + n][0b011] = w(2 * n as i32) * s3;
    }
    b[6][0] = Complex64::new(s2, 0.0);
    b[6][7] = Complex64::new(s2, 0.0);
    b[7][0] = Complex64::new(s2, 0.0);
    b[7][7] = Complex64::new(-s2, 0.0);
    b
}

/// Unnormalized post-selected source blocks for all eight target outcomes.
pub fn sixty_four_term_round(c: &[f64]) -> [Mat8; 8] {
    let z = Complex64::new(0.0, 0.0);
    let basis = reference_basis();
    let mut blocks = [[[z; 8]; 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            let weight = c[i] * c[j];
            if weight == 0.0 {
                continue;
            }
            // |s⟩|t⟩ -> |s⟩|s xor t⟩
            let mut out = [[z; 8]; 8]; // out[s][t']
            for s in 0..8 {
                for t in 0..8 {
                    out[s][s ^ t] += basis[i][s] * basis[j][t];
                }
            }
            for (o, block) in blocks.iter_mut().enumerate() {
                for a in 0..8 {
                    for b2 in 0..8 {
                        block[a][b2] += out[a][o] * out[b2][o].conj() * weight;
                    }
                }
            }
        }
    }
    blocks
}

pub fn trace(m: &Mat8) -> f64 {
    (0..8).map(|i| m[i][i].re).sum()
}

/// `⟨v|m|v⟩ / Tr m`.
pub fn normalized_overlap(m: &Mat8, v: &[Complex64; 8]) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..8 {
        for b in 0..8 {
            acc += v[a].conj() * m[a][b] * v[b];
        }
    }
    acc.re / trace(m)
}
