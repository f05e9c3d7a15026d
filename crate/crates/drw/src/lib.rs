//! Exact arithmetic in the truncated de Rham-Witt complex of a polynomial
//! ring `F_p[X_1..X_n]`.
//!
//! Elements are finite sums of basic differentials `e(eta; a; I)` indexed by a
//! fractional weight `a` on the variables and a partition `I` of its support,
//! with Witt-vector coefficients `eta` taken mod `p^M`. The crate provides the
//! graded product, the differential, Frobenius and Verschiebung, the
//! overconvergence pseudovaluations built on them, and an independent oracle
//! that recomputes degree-zero products in raw Witt coordinates.
//!
//! All arithmetic is exact: weights are dyadic-style `p`-adic rationals,
//! intermediate product coefficients are rationals with denominator prime to
//! `p`, and truncation to `p^M` happens only when terms are collected.

pub mod element;
pub mod error;
pub mod oracle;
pub mod product;
pub mod pseudoval;
pub mod random;
pub mod weights;
pub mod witt;

pub use element::{BasicElement, DrwElement, SummandClass};
pub use error::DrwError;
pub use weights::{PadicRational, Partition, WeightFunction};
pub use witt::WittScalar;

/// Ambient parameters of a computation: the prime, the number of variables,
/// and the Witt truncation length.
///
/// Every element carries the context it was built in; operations on elements
/// from different contexts are refused rather than silently coerced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Context {
    /// The prime `p`.
    pub p: u32,
    /// Number of polynomial variables `n`.
    pub nvars: usize,
    /// Truncation length `M`: scalars live in `Z/p^M`.
    pub prec: u32,
}

impl Context {
    /// Builds a context, checking that `p` is prime, `prec >= 1`, and that
    /// the modulus `p^prec` fits comfortably in a machine word (products of
    /// two residues must fit in `u128`).
    pub fn new(p: u32, nvars: usize, prec: u32) -> Result<Self, DrwError> {
        if p < 2 || !is_prime(p) {
            return Err(DrwError::NotPrime(p));
        }
        if prec == 0 {
            return Err(DrwError::PrecisionOutOfRange(prec));
        }
        let mut modulus: u64 = 1;
        for _ in 0..prec {
            modulus = modulus
                .checked_mul(p as u64)
                .filter(|m| *m < (1u64 << 63))
                .ok_or(DrwError::PrecisionOutOfRange(prec))?;
        }
        Ok(Context { p, nvars, prec })
    }

    /// The modulus `p^prec`.
    pub fn modulus(&self) -> u64 {
        (self.p as u64).pow(self.prec)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn context_rejects_composites_and_huge_moduli() {
        assert!(Context::new(2, 2, 6).is_ok());
        assert!(Context::new(97, 1, 3).is_ok());
        assert!(Context::new(1, 2, 6).is_err());
        assert!(Context::new(4, 2, 6).is_err());
        assert!(Context::new(2, 2, 0).is_err());
        assert!(Context::new(2, 2, 64).is_err());
    }

    #[test]
    fn modulus_is_p_to_the_prec() {
        assert_eq!(Context::new(3, 2, 4).unwrap().modulus(), 81);
    }
}
