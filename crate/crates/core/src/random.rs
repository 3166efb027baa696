//! Seeded randomness. Every stochastic step in the workspace draws from a
//! ChaCha8 stream so reports replay bit for bit.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::index::{Index, IndexScheme};
use crate::num::Q;
use crate::vec::FinVec;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform numerator in `-num..=num`, denominator in `1..=den`.
pub fn rational<R: Rng>(rng: &mut R, num: i64, den: i64) -> Q {
    let n = rng.random_range(-num..=num);
    let d = rng.random_range(1..=den);
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn nonzero_rational<R: Rng>(rng: &mut R, num: i64, den: i64) -> Q {
    loop {
        let x = rational(rng, num, den);
        if x != Q::from_integer(0.into()) {
            return x;
        }
    }
}

/// Random vector over the given indices; some coefficients may be zero.
pub fn vector_on<R: Rng>(rng: &mut R, scheme: IndexScheme, support: &[Index], num: i64, den: i64) -> FinVec {
    let mut v = FinVec::zero(scheme);
    for idx in support {
        v.set(idx.clone(), rational(rng, num, den));
    }
    v
}
