//! Scalars: truncated Witt vectors of the prime field.
//!
//! Over `F_p` the ring of length-`M` Witt vectors is just `Z/p^M`, with
//! Frobenius the identity and Verschiebung multiplication by `p`. Residues
//! are stored as machine words; the context guarantees `p^M < 2^63`, so a
//! product of two residues fits in `u128` before reduction.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::DrwError;
use crate::Context;

/// An element of `W_M(F_p) = Z/p^M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WittScalar {
    p: u32,
    prec: u32,
    residue: u64,
}

impl WittScalar {
    /// Reduces an integer into the ring.
    pub fn from_integer(ctx: Context, n: i128) -> Self {
        let m = ctx.modulus() as i128;
        WittScalar {
            p: ctx.p,
            prec: ctx.prec,
            residue: n.rem_euclid(m) as u64,
        }
    }

    pub fn from_big_int(ctx: Context, n: &BigInt) -> Self {
        let m = BigInt::from(ctx.modulus());
        let r = ((n % &m) + &m) % &m;
        let (_, digits) = r.to_u64_digits();
        WittScalar {
            p: ctx.p,
            prec: ctx.prec,
            residue: digits.first().copied().unwrap_or(0),
        }
    }

    pub fn zero(ctx: Context) -> Self {
        Self::from_integer(ctx, 0)
    }

    pub fn one(ctx: Context) -> Self {
        Self::from_integer(ctx, 1)
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn modulus(&self) -> u64 {
        (self.p as u64).pow(self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    fn check_same(&self, other: &Self) {
        assert!(
            self.p == other.p && self.prec == other.prec,
            "scalar arithmetic across different p or M"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same(other);
        let m = self.modulus() as u128;
        let r = (self.residue as u128 + other.residue as u128) % m;
        WittScalar { residue: r as u64, ..*self }
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus();
        WittScalar { residue: (m - self.residue) % m, ..*self }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same(other);
        let m = self.modulus() as u128;
        let r = (self.residue as u128 * other.residue as u128) % m;
        WittScalar { residue: r as u64, ..*self }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = WittScalar { residue: 1 % self.modulus(), ..*self };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Frobenius. On Witt vectors of the prime field this is the identity;
    /// kept as a named operation so the structural formulas read as written.
    pub fn frobenius(&self) -> Self {
        *self
    }

    /// Verschiebung: multiplication by `p`.
    pub fn verschiebung(&self) -> Self {
        let m = self.modulus() as u128;
        let r = (self.residue as u128 * self.p as u128) % m;
        WittScalar { residue: r as u64, ..*self }
    }

    /// `V`-adic valuation: the exact power of `p` dividing the residue.
    /// `None` is the sentinel for the zero residue, which is only known to
    /// have valuation `>= M`.
    pub fn val_v(&self) -> Option<u32> {
        if self.residue == 0 {
            return None;
        }
        let mut r = self.residue;
        let mut v = 0;
        while r % self.p as u64 == 0 {
            r /= self.p as u64;
            v += 1;
        }
        Some(v)
    }

    /// The Teichmueller representative of `c mod p`: the unique lift fixed by
    /// `x -> x^p`. Computed by iterating that map, which converges in at most
    /// `M` steps because agreement mod `p^k` propagates to `p^(k+1)`.
    pub fn teichmuller(ctx: Context, c: u64) -> Self {
        let mut x = Self::from_integer(ctx, c as i128);
        for _ in 0..ctx.prec {
            x = x.pow(ctx.p as u64);
        }
        x
    }

    /// Multiplies by an exact rational whose denominator is prime to `p`,
    /// via the denominator's inverse mod `p^M`.
    pub fn mul_zp_rational(&self, r: &BigRational) -> Result<Self, DrwError> {
        let m = BigInt::from(self.modulus());
        let den = reduce_mod(r.denom(), &m);
        let inv = invert_mod(den, self.modulus(), self.p)?;
        let num = reduce_mod(r.numer(), &m);
        let num_scalar = WittScalar { residue: num, ..*self };
        let inv_scalar = WittScalar { residue: inv, ..*self };
        Ok(self.mul(&num_scalar).mul(&inv_scalar))
    }
}

fn reduce_mod(n: &BigInt, m: &BigInt) -> u64 {
    let r = ((n % m) + m) % m;
    debug_assert!(!r.is_negative());
    let (_, digits) = r.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

fn invert_mod(x: u64, modulus: u64, p: u32) -> Result<u64, DrwError> {
    if x % p as u64 == 0 {
        return Err(DrwError::DenominatorDivisibleByP);
    }
    // Extended Euclid on (x, modulus); x is a unit because p does not divide it.
    let (mut r0, mut r1) = (modulus as i128, x as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    Ok(t0.rem_euclid(modulus as i128) as u64)
}

/// Converts an exact rational with denominator prime to `p` into a residue.
pub fn rational_to_scalar(ctx: Context, r: &BigRational) -> Result<WittScalar, DrwError> {
    if r.is_zero() {
        return Ok(WittScalar::zero(ctx));
    }
    WittScalar::from_big_int(ctx, r.numer()).mul_zp_rational(&BigRational::new(
        BigInt::from(1),
        r.denom().clone(),
    ))
}
