//! Fractional weights on the variables and partitions of their support.
//!
//! A weight function assigns to each variable a nonnegative rational of the
//! form `m * p^(-v)`; it records which Teichmueller monomial a basic element
//! is built from. The support carries a total order: indices are compared by
//! the `p`-adic valuation of their entry first (more fractional is smaller)
//! and by position on ties. Partitions are subsets of the support, kept
//! sorted by that order, and split the support into consecutive blocks
//! (`intervals`) that drive every structural case split elsewhere.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::DrwError;

/// A nonnegative rational `mantissa * p^(-vexp)` whose denominator is a power
/// of `p`.
///
/// Kept normalized: `p` does not divide the mantissa, and the value zero is
/// always `(0, 0)`. The `p`-adic valuation of a nonzero value is therefore
/// `-vexp`, readable without arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PadicRational {
    mantissa: u64,
    vexp: i32,
}

impl PadicRational {
    /// Builds `mantissa * p^(-vexp)` and normalizes it.
    pub fn new(p: u32, mantissa: u64, vexp: i32) -> Self {
        let mut m = mantissa;
        let mut v = vexp;
        if m == 0 {
            return PadicRational { mantissa: 0, vexp: 0 };
        }
        while m % p as u64 == 0 {
            m /= p as u64;
            v -= 1;
        }
        PadicRational { mantissa: m, vexp: v }
    }

    pub fn zero() -> Self {
        PadicRational { mantissa: 0, vexp: 0 }
    }

    /// The integer `k` as a weight entry.
    pub fn integer(p: u32, k: u64) -> Self {
        Self::new(p, k, 0)
    }

    /// Builds `num/den`, requiring `den` to be a power of `p`.
    pub fn from_ratio(p: u32, num: u64, den: u64) -> Result<Self, DrwError> {
        let mut d = den;
        let mut v: i32 = 0;
        while d % p as u64 == 0 {
            d /= p as u64;
            v += 1;
        }
        if d != 1 {
            return Err(DrwError::DenominatorNotPPower(p));
        }
        Ok(Self::new(p, num, v))
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0
    }

    pub fn mantissa(&self) -> u64 {
        self.mantissa
    }

    pub fn vexp(&self) -> i32 {
        self.vexp
    }

    /// `p`-adic valuation; `None` encodes `+infinity` (the value zero).
    pub fn val_p(&self) -> Option<i32> {
        if self.is_zero() {
            None
        } else {
            Some(-self.vexp)
        }
    }

    pub fn add(&self, p: u32, other: &Self) -> Self {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        // Bring both to the larger vexp (finer denominator).
        let v = self.vexp.max(other.vexp);
        let lift = |x: &Self| -> u128 {
            (x.mantissa as u128) * (p as u128).pow((v - x.vexp) as u32)
        };
        let sum = lift(self) + lift(other);
        let m = u64::try_from(sum).expect("weight entry overflow");
        Self::new(p, m, v)
    }

    /// Multiplies by `p^k` (also for negative `k`; the result may pick up a
    /// denominator).
    pub fn scale_pow(&self, k: i32) -> Self {
        if self.is_zero() {
            *self
        } else {
            PadicRational { mantissa: self.mantissa, vexp: self.vexp - k }
        }
    }

    pub fn to_big_rational(&self, p: u32) -> BigRational {
        let m = BigInt::from(self.mantissa);
        if self.vexp <= 0 {
            BigRational::from_integer(m * BigInt::from(p).pow((-self.vexp) as u32))
        } else {
            BigRational::new(m, BigInt::from(p).pow(self.vexp as u32))
        }
    }

    /// The value as a natural number, when the entry is integral.
    pub fn to_natural(&self, p: u32) -> Option<u64> {
        if self.vexp > 0 {
            return None;
        }
        (p as u64)
            .checked_pow((-self.vexp) as u32)
            .and_then(|q| self.mantissa.checked_mul(q))
    }

    /// Numeric comparison (needs `p` to weigh the exponents).
    pub fn cmp_value(&self, p: u32, other: &Self) -> Ordering {
        let v = self.vexp.max(other.vexp);
        let lift = |x: &Self| -> u128 {
            if x.mantissa == 0 {
                0
            } else {
                (x.mantissa as u128) * (p as u128).pow((v - x.vexp) as u32)
            }
        };
        lift(self).cmp(&lift(other))
    }

    /// Renders the value as an ordinary fraction in lowest terms, e.g. `3/2`
    /// or `6`.
    pub fn render(&self, p: u32) -> String {
        if self.vexp <= 0 {
            match self.to_natural(p) {
                Some(k) => k.to_string(),
                None => format!("{}*{}^{}", self.mantissa, p, -self.vexp),
            }
        } else {
            format!("{}/{}", self.mantissa, (p as u64).pow(self.vexp as u32))
        }
    }
}

/// A weight `a: {1..n} -> N[1/p]`, one entry per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightFunction {
    p: u32,
    entries: Vec<PadicRational>,
}

impl WeightFunction {
    pub fn new(p: u32, entries: Vec<PadicRational>) -> Self {
        WeightFunction { p, entries }
    }

    pub fn zero(p: u32, nvars: usize) -> Self {
        WeightFunction { p, entries: vec![PadicRational::zero(); nvars] }
    }

    /// The weight of the single monomial `X_i^k` (1-based `i`).
    pub fn monomial(p: u32, nvars: usize, i: usize, k: u64) -> Result<Self, DrwError> {
        if i == 0 || i > nvars {
            return Err(DrwError::IndexOutOfRange(i));
        }
        let mut entries = vec![PadicRational::zero(); nvars];
        entries[i - 1] = PadicRational::integer(p, k);
        Ok(WeightFunction { p, entries })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.entries.len()
    }

    /// Entry at 1-based index `i`.
    pub fn entry(&self, i: usize) -> PadicRational {
        self.entries[i - 1]
    }

    pub fn entries(&self) -> &[PadicRational] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(PadicRational::is_zero)
    }

    /// Indices with nonzero entry, ascending by position.
    pub fn support(&self) -> Vec<usize> {
        (1..=self.nvars()).filter(|&i| !self.entry(i).is_zero()).collect()
    }

    /// Total weight `|a|`, the sum of all entries.
    pub fn total_weight(&self) -> BigRational {
        self.entries
            .iter()
            .fold(BigRational::zero(), |acc, e| acc + e.to_big_rational(self.p))
    }

    /// `min_i val_p(a_i)`; `None` encodes `+infinity` (the zero weight).
    pub fn val_p(&self) -> Option<i32> {
        self.entries.iter().filter_map(PadicRational::val_p).min()
    }

    /// Denominator exponent `u(a) = max(0, -val_p(a))`: the smallest `u` with
    /// `p^u * a` integral.
    pub fn u(&self) -> u32 {
        match self.val_p() {
            Some(v) if v < 0 => (-v) as u32,
            _ => 0,
        }
    }

    pub fn is_integral(&self) -> bool {
        self.u() == 0
    }

    /// The restriction `a|_J`: entries outside `J` are zeroed.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let mut entries = vec![PadicRational::zero(); self.nvars()];
        for &i in keep {
            if i >= 1 && i <= self.nvars() {
                entries[i - 1] = self.entry(i);
            }
        }
        WeightFunction { p: self.p, entries }
    }

    /// Pointwise sum (same `p`, same length).
    pub fn add(&self, other: &Self) -> Result<Self, DrwError> {
        if self.p != other.p || self.nvars() != other.nvars() {
            return Err(DrwError::ContextMismatch("weight addition"));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| x.add(self.p, y))
            .collect();
        Ok(WeightFunction { p: self.p, entries })
    }

    /// Pointwise multiplication by `p^k`.
    pub fn scale_pow(&self, k: i32) -> Self {
        WeightFunction {
            p: self.p,
            entries: self.entries.iter().map(|e| e.scale_pow(k)).collect(),
        }
    }

    /// The support order: `i` before `j` when `val_p(a_i) < val_p(a_j)`, ties
    /// broken by `i <= j`. Total on the support; both indices must lie in it.
    pub fn cmp_order(&self, i: usize, j: usize) -> Ordering {
        let vi = self.entry(i).val_p().expect("index outside support");
        let vj = self.entry(j).val_p().expect("index outside support");
        vi.cmp(&vj).then(i.cmp(&j))
    }

    /// `true` when `i` precedes-or-equals `j` in the support order.
    pub fn precede(&self, i: usize, j: usize) -> Result<bool, DrwError> {
        for ix in [i, j] {
            if ix == 0 || ix > self.nvars() {
                return Err(DrwError::IndexOutOfRange(ix));
            }
            if self.entry(ix).is_zero() {
                return Err(DrwError::IndexNotInSupport(ix));
            }
        }
        Ok(self.cmp_order(i, j) != Ordering::Greater)
    }

    /// The order-minimal element of the support.
    pub fn min_index(&self) -> Result<usize, DrwError> {
        self.support()
            .into_iter()
            .min_by(|&i, &j| self.cmp_order(i, j))
            .ok_or(DrwError::ZeroWeight)
    }

    /// The support sorted by the support order.
    pub fn sorted_support(&self) -> Vec<usize> {
        let mut s = self.support();
        s.sort_by(|&i, &j| self.cmp_order(i, j));
        s
    }

    /// Validates a set of indices as a partition: inside the support, no
    /// duplicates, stored sorted by the support order.
    pub fn partition(&self, indices: &[usize]) -> Result<Partition, DrwError> {
        let mut seen = vec![false; self.nvars() + 1];
        for &i in indices {
            if i == 0 || i > self.nvars() {
                return Err(DrwError::IndexOutOfRange(i));
            }
            if self.entry(i).is_zero() {
                return Err(DrwError::IndexNotInSupport(i));
            }
            if seen[i] {
                return Err(DrwError::DuplicateIndex(i));
            }
            seen[i] = true;
        }
        let mut sorted: Vec<usize> = indices.to_vec();
        sorted.sort_by(|&i, &j| self.cmp_order(i, j));
        Ok(Partition { indices: sorted })
    }

    /// Splits the support along a partition `{i_1 < .. < i_m}` into the
    /// consecutive blocks `I_0, I_1, .., I_m`: `I_0` is everything strictly
    /// before `i_1`, each `I_l` runs from `i_l` up to (excluding) `i_(l+1)`,
    /// and `I_m` runs from `i_m` to the end. Always returns `m + 1` blocks;
    /// `I_0` is empty exactly when the partition starts at the minimum.
    pub fn intervals(&self, part: &Partition) -> Vec<Vec<usize>> {
        let sorted = self.sorted_support();
        let mut cuts: Vec<usize> = Vec::with_capacity(part.len());
        for idx in part.indices() {
            let pos = sorted
                .iter()
                .position(|&s| s == *idx)
                .expect("partition index outside support");
            cuts.push(pos);
        }
        let mut blocks = Vec::with_capacity(part.len() + 1);
        let mut bounds = Vec::with_capacity(part.len() + 2);
        bounds.push(0);
        bounds.extend(cuts);
        bounds.push(sorted.len());
        for w in bounds.windows(2) {
            blocks.push(sorted[w[0]..w[1]].to_vec());
        }
        blocks
    }
}

/// A partition of the support: a subset `{i_1, .., i_m}` kept sorted by the
/// support order of the weight it belongs to.
///
/// The base weight is carried by context, not stored here; constructors on
/// [`WeightFunction`] enforce the sortedness invariant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    indices: Vec<usize>,
}

impl Partition {
    pub fn empty() -> Self {
        Partition { indices: Vec::new() }
    }

    /// Wraps indices already sorted by the support order of the intended base
    /// weight. Callers inside the crate use this on lists built sorted.
    pub(crate) fn from_sorted(indices: Vec<usize>) -> Self {
        Partition { indices }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.contains(&i)
    }

    /// The order-least index, if any.
    pub fn first(&self) -> Option<usize> {
        self.indices.first().copied()
    }

    /// The order-greatest index, if any.
    pub fn last(&self) -> Option<usize> {
        self.indices.last().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(p: u32, entries: &[(u64, i32)]) -> WeightFunction {
        WeightFunction::new(
            p,
            entries.iter().map(|&(m, v)| PadicRational::new(p, m, v)).collect(),
        )
    }

    #[test]
    fn normalization_strips_p_factors() {
        let x = PadicRational::new(2, 12, 3);
        assert_eq!((x.mantissa(), x.vexp()), (3, 1));
        assert_eq!(PadicRational::new(2, 0, 5), PadicRational::zero());
        assert_eq!(PadicRational::new(2, 4, 0).val_p(), Some(2));
    }

    #[test]
    fn from_ratio_requires_p_power_denominator() {
        let x = PadicRational::from_ratio(2, 3, 2).unwrap();
        assert_eq!((x.mantissa(), x.vexp()), (3, 1));
        assert!(PadicRational::from_ratio(2, 1, 6).is_err());
        assert!(PadicRational::from_ratio(3, 2, 9).is_ok());
    }

    #[test]
    fn valuation_and_u_on_examples() {
        // a = (1/2, 3) at p = 2.
        let a = w(2, &[(1, 1), (3, 0)]);
        assert_eq!(a.val_p(), Some(-1));
        assert_eq!(a.u(), 1);
        assert_eq!(
            a.total_weight(),
            BigRational::new(BigInt::from(7), BigInt::from(2))
        );
        let zero = WeightFunction::zero(2, 2);
        assert_eq!(zero.val_p(), None);
        assert_eq!(zero.u(), 0);
        assert!(zero.total_weight().is_zero());
    }

    #[test]
    fn restriction_zeroes_the_complement() {
        let a = w(2, &[(1, 1), (3, 0)]);
        let r = a.restrict(&[2]);
        assert!(r.entry(1).is_zero());
        assert_eq!(r.entry(2), PadicRational::integer(2, 3));
        assert_eq!(r.support(), vec![2]);
    }

    #[test]
    fn support_order_ranks_by_valuation_then_position() {
        // a = (1/2, 1/4, 1) at p = 2: valuations -1, -2, 0, so 2 < 1 < 3.
        let a = w(2, &[(1, 1), (1, 2), (1, 0)]);
        assert_eq!(a.sorted_support(), vec![2, 1, 3]);
        assert_eq!(a.min_index().unwrap(), 2);
        assert!(a.precede(2, 1).unwrap());
        assert!(!a.precede(3, 1).unwrap());
        assert!(a.precede(1, 1).unwrap());
        assert!(a.precede(42, 1).is_err());
        assert!(w(2, &[(1, 0), (0, 0)]).precede(1, 2).is_err());
    }

    #[test]
    fn partitions_sort_and_validate() {
        let a = w(2, &[(1, 1), (1, 2), (1, 0)]);
        let part = a.partition(&[1, 2]).unwrap();
        assert_eq!(part.indices(), &[2, 1]);
        assert!(a.partition(&[2, 2]).is_err());
        assert!(a.partition(&[4]).is_err());
        let b = w(2, &[(1, 0), (0, 0)]);
        assert!(b.partition(&[2]).is_err());
    }

    #[test]
    fn intervals_on_two_variables() {
        let a = w(2, &[(1, 0), (1, 0)]);
        let p2 = a.partition(&[2]).unwrap();
        assert_eq!(a.intervals(&p2), vec![vec![1], vec![2]]);
        let p1 = a.partition(&[1]).unwrap();
        assert_eq!(a.intervals(&p1), vec![vec![], vec![1, 2]]);
        let pe = a.partition(&[]).unwrap();
        assert_eq!(a.intervals(&pe), vec![vec![1, 2]]);
        let pb = a.partition(&[1, 2]).unwrap();
        assert_eq!(a.intervals(&pb), vec![vec![], vec![1], vec![2]]);
    }

    #[test]
    fn intervals_of_zero_weight() {
        let zero = WeightFunction::zero(2, 2);
        let pe = zero.partition(&[]).unwrap();
        assert_eq!(zero.intervals(&pe), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn scaling_shifts_valuation() {
        let a = w(2, &[(1, 1), (3, 0)]);
        let b = a.scale_pow(1);
        assert_eq!(b.entry(1), PadicRational::integer(2, 1));
        assert_eq!(b.entry(2), PadicRational::integer(2, 6));
        assert_eq!(b.u(), 0);
        assert_eq!(a.scale_pow(-1).val_p(), Some(-2));
    }

    #[test]
    fn rendering_round_figures() {
        assert_eq!(PadicRational::new(2, 3, 1).render(2), "3/2");
        assert_eq!(PadicRational::new(2, 3, -1).render(2), "6");
        assert_eq!(PadicRational::zero().render(2), "0");
    }

    fn arb_weight(p: u32, n: usize) -> impl Strategy<Value = WeightFunction> {
        proptest::collection::vec((0u64..6, -2i32..=3), n)
            .prop_map(move |es| w(p, &es))
    }

    proptest! {
        #[test]
        fn prop_order_is_total_and_transitive(a in arb_weight(2, 4)) {
            let s = a.support();
            for &i in &s {
                for &j in &s {
                    let ij = a.precede(i, j).unwrap();
                    let ji = a.precede(j, i).unwrap();
                    prop_assert!(ij || ji);
                    if ij && ji {
                        prop_assert_eq!(i, j);
                    }
                    for &k in &s {
                        if ij && a.precede(j, k).unwrap() {
                            prop_assert!(a.precede(i, k).unwrap());
                        }
                    }
                }
            }
        }

        #[test]
        fn prop_intervals_partition_the_support(
            a in arb_weight(2, 4),
            picks in proptest::collection::vec(any::<bool>(), 4),
        ) {
            let chosen: Vec<usize> = a
                .support()
                .into_iter()
                .filter(|&i| picks[i - 1])
                .collect();
            let part = a.partition(&chosen).unwrap();
            let blocks = a.intervals(&part);
            prop_assert_eq!(blocks.len(), part.len() + 1);
            let mut rebuilt: Vec<usize> = blocks.concat();
            let sorted = a.sorted_support();
            prop_assert_eq!(rebuilt.clone(), sorted);
            rebuilt.sort_unstable();
            let mut supp = a.support();
            supp.sort_unstable();
            prop_assert_eq!(rebuilt, supp);
            // Each block l >= 1 starts at the l-th partition index.
            for (l, idx) in part.indices().iter().enumerate() {
                prop_assert_eq!(blocks[l + 1].first(), Some(idx));
            }
        }

        #[test]
        fn prop_restriction_never_lowers_valuation(
            a in arb_weight(2, 4),
            picks in proptest::collection::vec(any::<bool>(), 4),
        ) {
            let keep: Vec<usize> =
                (1..=4).filter(|&i| picks[i - 1]).collect();
            let r = a.restrict(&keep);
            prop_assert!(r.u() <= a.u());
            match (a.val_p(), r.val_p()) {
                (Some(va), Some(vr)) => prop_assert!(vr >= va),
                (None, Some(_)) => prop_assert!(false),
                _ => {}
            }
        }

        #[test]
        fn prop_weight_addition_adds_totals(
            a in arb_weight(2, 3),
            b in arb_weight(2, 3),
        ) {
            let c = a.add(&b).unwrap();
            prop_assert_eq!(c.total_weight(), a.total_weight() + b.total_weight());
            let mut expect: Vec<usize> = a.support();
            for i in b.support() {
                if !expect.contains(&i) {
                    expect.push(i);
                }
            }
            expect.sort_unstable();
            prop_assert_eq!(c.support(), expect);
        }

        #[test]
        fn prop_scaling_preserves_the_order(a in arb_weight(2, 4), k in -2i32..=2) {
            let b = a.scale_pow(k);
            prop_assert_eq!(a.sorted_support(), b.sorted_support());
        }

        #[test]
        fn prop_cmp_value_matches_exact_rationals(
            x in (0u64..50, -3i32..=3),
            y in (0u64..50, -3i32..=3),
        ) {
            let (a, b) = (
                PadicRational::new(2, x.0, x.1),
                PadicRational::new(2, y.0, y.1),
            );
            prop_assert_eq!(
                a.cmp_value(2, &b),
                a.to_big_rational(2).cmp(&b.to_big_rational(2))
            );
        }
    }
}
