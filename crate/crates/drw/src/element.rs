//! Elements of the truncated complex: basic differentials and their sums.
//!
//! A basic element `e(eta; a; I)` is determined by a scalar `eta`, a weight
//! `a`, and a partition `I` of the support of `a`; its degree is the size of
//! `I`. Writing `u = u(a)` and splitting the support into the blocks
//! `I_0, .., I_m` of `I`, the element denotes
//!
//! * `V^u(eta * [X^(p^u * a|I_0)]) * g(a|I_1) * .. * g(a|I_m)` when `I_0` is
//!   nonempty or `u = 0`, and
//! * `d(V^u(eta * [X^(p^u * a|I_1)])) * g(a|I_2) * .. * g(a|I_m)` when `I_0`
//!   is empty and `u > 0`,
//!
//! where `g(b) = F^(u(b)+val_p(b))(d(V^(u(b))([X^(p^(-val_p(b)) * b)])))` for
//! a nonzero weight `b`. Distinct `(a, I)` pairs are linearly independent, so
//! a sum of basic elements with collected coefficients is a canonical form.
//!
//! The differential, Frobenius, and Verschiebung act on basic elements by
//! closed-form case splits on `val_p(a)` and on whether the head block `I_0`
//! is empty; sums act termwise.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use crate::error::DrwError;
use crate::weights::{Partition, WeightFunction};
use crate::witt::WittScalar;
use crate::Context;

/// Which summand of the canonical decomposition a term belongs to.
///
/// `Integral` collects the terms with integral weight; the other two split
/// the fractional terms by whether the head block is empty, i.e. whether the
/// term is a `d`-image.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SummandClass {
    Integral,
    Fractional,
    DifferentialFractional,
}

/// A single basic element `e(eta; a; I)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicElement {
    eta: WittScalar,
    weight: WeightFunction,
    partition: Partition,
}

impl BasicElement {
    /// Validates the partition against the weight and sorts it.
    pub fn new(
        eta: WittScalar,
        weight: WeightFunction,
        indices: &[usize],
    ) -> Result<Self, DrwError> {
        let partition = weight.partition(indices)?;
        Ok(BasicElement { eta, weight, partition })
    }

    pub(crate) fn from_parts(
        eta: WittScalar,
        weight: WeightFunction,
        partition: Partition,
    ) -> Self {
        BasicElement { eta, weight, partition }
    }

    /// The scalar `eta` itself, as a degree-zero element of weight zero.
    pub fn scalar(ctx: Context, eta: WittScalar) -> Self {
        BasicElement {
            eta,
            weight: WeightFunction::zero(ctx.p, ctx.nvars),
            partition: Partition::empty(),
        }
    }

    /// The Teichmueller monomial `[X_i^k]`.
    pub fn teichmuller_monomial(ctx: Context, i: usize, k: u64) -> Result<Self, DrwError> {
        Ok(BasicElement {
            eta: WittScalar::one(ctx),
            weight: WeightFunction::monomial(ctx.p, ctx.nvars, i, k)?,
            partition: Partition::empty(),
        })
    }

    pub fn eta(&self) -> WittScalar {
        self.eta
    }

    pub fn weight(&self) -> &WeightFunction {
        &self.weight
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Cohomological degree: the number of partition indices.
    pub fn degree(&self) -> usize {
        self.partition.len()
    }

    /// Whether the head block `I_0` is empty: the partition either starts at
    /// the order-minimum of the support or the weight is zero.
    pub fn head_block_empty(&self) -> bool {
        match self.weight.min_index() {
            Err(_) => true,
            Ok(min) => self.partition.first() == Some(min),
        }
    }

    pub fn class(&self) -> SummandClass {
        if self.weight.u() == 0 {
            SummandClass::Integral
        } else if self.head_block_empty() {
            SummandClass::DifferentialFractional
        } else {
            SummandClass::Fractional
        }
    }
}

/// Key under which a term is stored: the weight together with the partition.
///
/// Ordered by degree, then total weight, then the entry list, then the
/// partition, which fixes one canonical serialization order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermKey {
    weight: WeightFunction,
    partition: Partition,
}

impl TermKey {
    pub fn weight(&self) -> &WeightFunction {
        &self.weight
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }
}

impl Ord for TermKey {
    fn cmp(&self, other: &Self) -> Ordering {
        let p = self.weight.p();
        self.partition
            .len()
            .cmp(&other.partition.len())
            .then_with(|| p.cmp(&other.weight.p()))
            .then_with(|| self.weight.total_weight().cmp(&other.weight.total_weight()))
            .then_with(|| {
                let xs = self.weight.entries();
                let ys = other.weight.entries();
                xs.len().cmp(&ys.len()).then_with(|| {
                    for (x, y) in xs.iter().zip(ys) {
                        match x.cmp_value(p, y) {
                            Ordering::Equal => continue,
                            ord => return ord,
                        }
                    }
                    Ordering::Equal
                })
            })
            .then_with(|| self.partition.indices().cmp(other.partition.indices()))
    }
}

impl PartialOrd for TermKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite sum of basic elements in canonical form: one entry per `(a, I)`
/// pair, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrwElement {
    ctx: Context,
    terms: BTreeMap<TermKey, WittScalar>,
}

impl DrwElement {
    pub fn zero(ctx: Context) -> Self {
        DrwElement { ctx, terms: BTreeMap::new() }
    }

    pub fn one(ctx: Context) -> Self {
        Self::from_terms(ctx, [BasicElement::scalar(ctx, WittScalar::one(ctx))])
            .expect("scalar term is always valid")
    }

    /// Collects terms into canonical form, merging equal `(a, I)` keys and
    /// dropping zero coefficients.
    pub fn from_terms(
        ctx: Context,
        terms: impl IntoIterator<Item = BasicElement>,
    ) -> Result<Self, DrwError> {
        let mut out = Self::zero(ctx);
        for t in terms {
            out.insert_term(t)?;
        }
        Ok(out)
    }

    fn insert_term(&mut self, t: BasicElement) -> Result<(), DrwError> {
        if t.weight.p() != self.ctx.p || t.weight.nvars() != self.ctx.nvars {
            return Err(DrwError::ContextMismatch("term weight"));
        }
        if t.eta.p() != self.ctx.p || t.eta.prec() != self.ctx.prec {
            return Err(DrwError::ContextMismatch("term coefficient"));
        }
        if t.eta.is_zero() {
            return Ok(());
        }
        let key = TermKey { weight: t.weight, partition: t.partition };
        let merged = match self.terms.get(&key) {
            Some(old) => old.add(&t.eta),
            None => t.eta,
        };
        if merged.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, merged);
        }
        Ok(())
    }

    pub fn ctx(&self) -> Context {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = BasicElement> + '_ {
        self.terms.iter().map(|(k, eta)| BasicElement {
            eta: *eta,
            weight: k.weight.clone(),
            partition: k.partition.clone(),
        })
    }

    fn check_ctx(&self, other: &Self) -> Result<(), DrwError> {
        if self.ctx != other.ctx {
            return Err(DrwError::ContextMismatch("element arithmetic"));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, DrwError> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for t in other.terms() {
            out.insert_term(t)?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(k, v)| (k.clone(), v.neg())).collect();
        DrwElement { ctx: self.ctx, terms }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, DrwError> {
        self.add(&other.neg())
    }

    /// Multiplies every coefficient by a fixed scalar. Pushing a scalar past
    /// the leading `V^u` would twist it by Frobenius, which is the identity
    /// here, so this is plain coefficient multiplication.
    pub fn scalar_mul(&self, c: WittScalar) -> Result<Self, DrwError> {
        if c.p() != self.ctx.p || c.prec() != self.ctx.prec {
            return Err(DrwError::ContextMismatch("scalar factor"));
        }
        let mut out = Self::zero(self.ctx);
        for t in self.terms() {
            out.insert_term(BasicElement { eta: t.eta.mul(&c), ..t })?;
        }
        Ok(out)
    }

    /// Multiplies every coefficient by an exact rational with denominator
    /// prime to `p`.
    pub fn mul_rational(&self, r: &BigRational) -> Result<Self, DrwError> {
        let mut out = Self::zero(self.ctx);
        for t in self.terms() {
            out.insert_term(BasicElement { eta: t.eta.mul_zp_rational(r)?, ..t })?;
        }
        Ok(out)
    }

    /// The degrees present, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self.terms.keys().map(|k| k.partition.len()).collect();
        ds.dedup();
        ds
    }

    /// `Some(d)` when every term has degree `d`; the zero element counts as
    /// homogeneous of every degree and reports `None`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let ds = self.degrees();
        if ds.len() == 1 {
            Some(ds[0])
        } else {
            None
        }
    }

    pub fn homogeneous_component(&self, degree: usize) -> Self {
        self.filter_terms(|t| t.degree() == degree)
    }

    fn filter_terms(&self, keep: impl Fn(&BasicElement) -> bool) -> Self {
        let mut out = Self::zero(self.ctx);
        for t in self.terms() {
            if keep(&t) {
                out.insert_term(t).expect("terms already validated");
            }
        }
        out
    }

    /// The differential, termwise:
    ///
    /// * head block empty: the term is already a `d`-image (or a scalar) and
    ///   dies;
    /// * otherwise the order-minimum of the support joins the partition, with
    ///   an extra factor `p^val_p(a)` when the weight is integral with
    ///   positive valuation.
    pub fn differential(&self) -> Self {
        let mut out = Self::zero(self.ctx);
        for t in self.terms() {
            if t.head_block_empty() {
                continue;
            }
            let min = t.weight.min_index().expect("nonzero weight");
            let val = t.weight.val_p().expect("nonzero weight");
            let eta = if val > 0 {
                let mut e = t.eta;
                for _ in 0..val {
                    e = e.verschiebung();
                }
                e
            } else {
                t.eta
            };
            let mut indices = vec![min];
            indices.extend_from_slice(t.partition.indices());
            out.insert_term(BasicElement {
                eta,
                weight: t.weight,
                partition: Partition::from_sorted(indices),
            })
            .expect("terms already validated");
        }
        out
    }

    /// Frobenius, termwise: the weight is multiplied by `p`; for fractional
    /// weights the coefficient picks up `p` exactly when the head block is
    /// nonempty (one `V` of the leading factor is undone), and for integral
    /// weights the scalar Frobenius applies.
    pub fn frobenius(&self) -> Self {
        let mut out = Self::zero(self.ctx);
        for t in self.terms() {
            let scaled = t.weight.scale_pow(1);
            let eta = match t.weight.val_p() {
                Some(v) if v < 0 => {
                    if t.head_block_empty() {
                        t.eta
                    } else {
                        t.eta.verschiebung()
                    }
                }
                _ => t.eta.frobenius(),
            };
            out.insert_term(BasicElement {
                eta,
                weight: scaled,
                partition: t.partition,
            })
            .expect("terms already validated");
        }
        out
    }

    /// Verschiebung, termwise: the weight is divided by `p`; the scalar `V`
    /// applies when that stays away from fresh denominators, otherwise the
    /// coefficient picks up `p` exactly when the head block is empty.
    pub fn verschiebung(&self) -> Self {
        let mut out = Self::zero(self.ctx);
        for t in self.terms() {
            let scaled = t.weight.scale_pow(-1);
            let eta = match t.weight.val_p() {
                Some(v) if v <= 0 => {
                    if t.head_block_empty() {
                        t.eta.verschiebung()
                    } else {
                        t.eta
                    }
                }
                _ => t.eta.verschiebung(),
            };
            out.insert_term(BasicElement {
                eta,
                weight: scaled,
                partition: t.partition,
            })
            .expect("terms already validated");
        }
        out
    }

    pub fn frobenius_pow(&self, m: u32) -> Self {
        (0..m).fold(self.clone(), |x, _| x.frobenius())
    }

    pub fn verschiebung_pow(&self, m: u32) -> Self {
        (0..m).fold(self.clone(), |x, _| x.verschiebung())
    }

    pub fn project(&self, class: SummandClass) -> Self {
        self.filter_terms(|t| t.class() == class)
    }

    /// Sum of the two fractional summands.
    pub fn project_fractional_part(&self) -> Self {
        self.filter_terms(|t| t.class() != SummandClass::Integral)
    }

    /// Strips the differential off an element of the `d`-of-fractional
    /// summand: every term must have fractional weight and empty head block;
    /// the head index is removed and reattaching `d` is exact (coefficient 1,
    /// because the valuation is negative).
    pub fn dfrp_preimage(&self) -> Result<Self, DrwError> {
        let mut out = Self::zero(self.ctx);
        for t in self.terms() {
            if t.class() != SummandClass::DifferentialFractional {
                return Err(DrwError::NotInDfrpImage);
            }
            let indices = t.partition.indices()[1..].to_vec();
            out.insert_term(BasicElement {
                eta: t.eta,
                weight: t.weight,
                partition: Partition::from_sorted(indices),
            })?;
        }
        Ok(out)
    }
}

impl fmt::Display for DrwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let p = self.ctx.p;
        for (n, t) in self.terms().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let entries: Vec<String> =
                t.weight().entries().iter().map(|e| e.render(p)).collect();
            let indices: Vec<String> =
                t.partition().indices().iter().map(|i| i.to_string()).collect();
            write!(
                f,
                "e({}; {}; {{{}}})",
                t.eta().residue(),
                entries.join(", "),
                indices.join(", ")
            )?;
        }
        Ok(())
    }
}
