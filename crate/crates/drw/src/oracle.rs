//! Independent cross-check in raw Witt coordinates.
//!
//! Degree-zero elements live in the ring of truncated Witt vectors of the
//! polynomial ring. This module recomputes their arithmetic from first
//! principles: coordinates are exact multivariate integer polynomials, ring
//! operations go through ghost components, and recovering coordinates from
//! ghosts uses only exact divisions by powers of `p` (any failure there is a
//! bug, and aborts). Nothing here shares code with the structural product,
//! which is the point.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::element::DrwElement;
use crate::error::DrwError;
use crate::Context;

/// A multivariate polynomial with integer coefficients, stored sparsely by
/// exponent vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        IntPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    /// The monomial with the given exponent vector.
    pub fn monomial(exponents: Vec<u32>, c: BigInt) -> Self {
        let mut p = Self::zero(exponents.len());
        if !c.is_zero() {
            p.terms.insert(exponents, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// The coefficient of the constant monomial.
    pub fn constant_term(&self) -> BigInt {
        self.terms
            .get(&vec![0; self.nvars])
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    fn insert(&mut self, exps: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        IntPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exps: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(exps, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        IntPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(self.nvars, BigInt::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Divides every coefficient by `d`, aborting if any division is inexact.
    /// Inexactness can only come from a bug in the ghost bookkeeping, so it
    /// must not be silently absorbed.
    pub fn div_exact(&self, d: &BigInt) -> Self {
        IntPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let (q, r) = c.div_rem(d);
                    assert!(
                        r.is_zero(),
                        "inexact division by {d} in ghost inversion: coefficient {c}"
                    );
                    (e.clone(), q)
                })
                .collect(),
        }
    }

    /// Reduces coefficients into `0..p`, dropping what vanishes.
    pub fn reduce_mod(&self, p: u32) -> Self {
        let m = BigInt::from(p);
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.insert(e.clone(), c.mod_floor(&m));
        }
        out
    }
}

/// A truncated Witt vector over the polynomial ring: a list of integer
/// polynomial coordinates (index `i` is the `V^i` slot).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPolyWitt {
    p: u32,
    coords: Vec<IntPoly>,
}

impl IntPolyWitt {
    pub fn from_coords(p: u32, coords: Vec<IntPoly>) -> Self {
        IntPolyWitt { p, coords }
    }

    /// The Teichmueller lift `[f] = (f, 0, .., 0)` at the given length.
    pub fn teichmuller(p: u32, f: IntPoly, len: usize) -> Self {
        let nvars = f.nvars();
        let mut coords = vec![IntPoly::zero(nvars); len];
        if len > 0 {
            coords[0] = f;
        }
        IntPolyWitt { p, coords }
    }

    pub fn zero(p: u32, nvars: usize, len: usize) -> Self {
        IntPolyWitt { p, coords: vec![IntPoly::zero(nvars); len] }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[IntPoly] {
        &self.coords
    }

    pub fn truncate(&self, len: usize) -> Self {
        IntPolyWitt {
            p: self.p,
            coords: self.coords[..len.min(self.coords.len())].to_vec(),
        }
    }

    /// Ghost components `w_j = sum_{i<=j} p^i x_i^(p^(j-i))`.
    pub fn ghost(&self) -> Vec<IntPoly> {
        let p = self.p;
        let mut out = Vec::with_capacity(self.coords.len());
        for j in 0..self.coords.len() {
            let nvars = self.coords[j].nvars();
            let mut w = IntPoly::zero(nvars);
            for (i, x) in self.coords.iter().take(j + 1).enumerate() {
                let pk = BigInt::from(p).pow(i as u32);
                let e = p.pow((j - i) as u32);
                w = w.add(&x.pow(e).scale(&pk));
            }
            out.push(w);
        }
        out
    }

    /// Recovers coordinates from ghost components by the defining recursion;
    /// every division by `p^n` checks exactness.
    pub fn unghost(p: u32, ghost: &[IntPoly]) -> Self {
        let mut coords: Vec<IntPoly> = Vec::with_capacity(ghost.len());
        for (n, g) in ghost.iter().enumerate() {
            let mut acc = g.clone();
            for (i, x) in coords.iter().enumerate() {
                let pk = BigInt::from(p).pow(i as u32);
                let e = p.pow((n - i) as u32);
                acc = acc.sub(&x.pow(e).scale(&pk));
            }
            coords.push(acc.div_exact(&BigInt::from(p).pow(n as u32)));
        }
        IntPolyWitt { p, coords }
    }

    fn zip_ghost(&self, other: &Self, f: impl Fn(&IntPoly, &IntPoly) -> IntPoly) -> Self {
        assert_eq!(self.p, other.p, "mixed primes in Witt arithmetic");
        assert_eq!(self.len(), other.len(), "mixed lengths in Witt arithmetic");
        let ga = self.ghost();
        let gb = other.ghost();
        let ghost: Vec<IntPoly> = ga.iter().zip(&gb).map(|(a, b)| f(a, b)).collect();
        Self::unghost(self.p, &ghost)
    }

    pub fn witt_add(&self, other: &Self) -> Self {
        self.zip_ghost(other, IntPoly::add)
    }

    pub fn witt_mul(&self, other: &Self) -> Self {
        self.zip_ghost(other, IntPoly::mul)
    }

    /// Multiplication by an ordinary integer (the image of `k` in the Witt
    /// ring), done on ghosts.
    pub fn scale_int(&self, k: &BigInt) -> Self {
        let ghost: Vec<IntPoly> = self.ghost().iter().map(|g| g.scale(k)).collect();
        Self::unghost(self.p, &ghost)
    }

    /// Frobenius: shifts ghosts left; the result is one coordinate shorter.
    pub fn frobenius_w(&self) -> Result<Self, DrwError> {
        if self.len() < 2 {
            return Err(DrwError::TooFewCoordinates);
        }
        let ghost = self.ghost();
        Ok(Self::unghost(self.p, &ghost[1..]))
    }

    /// Verschiebung: shifts coordinates right, dropping the top one so the
    /// length is preserved.
    pub fn verschiebung_w(&self) -> Self {
        if self.coords.is_empty() {
            return self.clone();
        }
        let nvars = self.coords[0].nvars();
        let mut coords = Vec::with_capacity(self.len());
        coords.push(IntPoly::zero(nvars));
        coords.extend_from_slice(&self.coords[..self.len() - 1]);
        IntPolyWitt { p: self.p, coords }
    }

    /// Reduces every coordinate mod `p`: the honest value over `F_p`.
    pub fn reduce_mod_p(&self) -> Vec<IntPoly> {
        self.coords.iter().map(|c| c.reduce_mod(self.p)).collect()
    }
}

/// Coordinates of a scalar `eta in Z/p^M`: the base-`p` digit expansion
/// against Teichmueller representatives. The digits are the unique constants
/// in `0..p` with `eta = sum V^i([c_i]) mod p^M`.
pub fn scalar_to_coords(ctx: Context, eta: u64) -> IntPolyWitt {
    let p = ctx.p as i128;
    let modulus = ctx.modulus() as i128;
    let teich = |c: i128| -> i128 {
        let mut x = c.rem_euclid(modulus);
        for _ in 0..ctx.prec {
            let mut acc: i128 = 1;
            for _ in 0..ctx.p {
                acc = (acc * x).rem_euclid(modulus);
            }
            x = acc;
        }
        x
    };
    let mut digits = Vec::with_capacity(ctx.prec as usize);
    let mut r = eta as i128;
    for _ in 0..ctx.prec {
        let c = r.rem_euclid(p);
        digits.push(c);
        r = (r - teich(c)) / p;
    }
    IntPolyWitt {
        p: ctx.p,
        coords: digits
            .into_iter()
            .map(|c| IntPoly::constant(ctx.nvars, BigInt::from(c)))
            .collect(),
    }
}

/// Evaluates a degree-zero element into Witt coordinates: each term
/// `e(eta; a; {})` becomes `V^u(coords(eta) * [X^(p^u * a)])` and terms are
/// added with Witt addition.
pub fn eval_degree0(x: &DrwElement) -> Result<IntPolyWitt, DrwError> {
    let ctx = x.ctx();
    let len = ctx.prec as usize;
    let mut acc = IntPolyWitt::zero(ctx.p, ctx.nvars, len);
    for t in x.terms() {
        if t.degree() != 0 {
            return Err(DrwError::PositiveDegree);
        }
        let u = t.weight().u();
        let scaled = t.weight().scale_pow(u as i32);
        let mut exps = Vec::with_capacity(ctx.nvars);
        for i in 1..=ctx.nvars {
            let e = scaled.entry(i).to_natural(ctx.p).ok_or(DrwError::NotIntegral)?;
            exps.push(u32::try_from(e).map_err(|_| DrwError::NotIntegral)?);
        }
        let monomial = IntPoly::monomial(exps, BigInt::one());
        let mut term = scalar_to_coords(ctx, t.eta().residue())
            .witt_mul(&IntPolyWitt::teichmuller(ctx.p, monomial, len));
        for _ in 0..u {
            term = term.verschiebung_w();
        }
        acc = acc.witt_add(&term);
    }
    Ok(acc)
}

/// Equality of Witt vectors over `F_p`: coordinates compared mod `p`.
pub fn oracle_equal(a: &IntPolyWitt, b: &IntPolyWitt) -> bool {
    a.len() == b.len() && a.reduce_mod_p() == b.reduce_mod_p()
}
