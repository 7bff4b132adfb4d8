//! Halton low-discrepancy sequences via radical inversion.

use crate::error::{Error, Result};

/// Prime bases assigned to dimensions in order.
const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Reverses the base-`b` digits of `i` across the radix point.
///
/// Numerator and denominator are built in exact integer arithmetic, so the
/// result is the correctly rounded value of the reversed fraction.
fn radical_inverse(base: u64, mut i: u64) -> f64 {
    let mut num = 0u64;
    let mut den = 1u64;
    while i > 0 {
        num = num * base + i % base;
        den *= base;
        i /= base;
    }
    num as f64 / den as f64
}

/// Points `skip+1 ..= skip+n` of the `dims`-dimensional Halton sequence,
/// returned as a flat buffer of length `n * dims`.
///
/// Deterministic: equal arguments always produce bitwise-equal output.
pub fn halton_sequence(n: usize, dims: usize, skip: usize) -> Result<Vec<f64>> {
    if dims == 0 || dims > PRIMES.len() {
        return Err(Error::UnsupportedDimension {
            dim: dims,
            max: PRIMES.len(),
        });
    }
    let mut out = Vec::with_capacity(n * dims);
    for i in 1..=n {
        let index = (skip + i) as u64;
        for &base in &PRIMES[..dims] {
            out.push(radical_inverse(base, index));
        }
    }
    Ok(out)
}
