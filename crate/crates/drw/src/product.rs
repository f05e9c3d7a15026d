//! The graded product of elements.
//!
//! Products of basic elements are computed structurally, never by expanding
//! into Witt coordinates. The integral case is the engine: both factors are
//! expanded over choices of one index per partition block into `h`-elements
//! (a Teichmueller part times a product of single-index `g`-factors),
//! `h`-elements multiply by a closed formula, and the result is re-expressed
//! in the basic-element basis by a recursion on the top block. Fractional
//! factors are reduced to the integral case: a factor with nonempty head
//! block is a `V^u`-image of an integral one and the projection formula
//! `V(x)y = V(x F(y))` applies; a factor with empty head block is `d` of one
//! with nonempty head block and the Leibniz rule applies. Signs enter only
//! through reordering anticommuting degree-one factors, as the signature of
//! the sorting permutation.
//!
//! Intermediate coefficients are exact rationals with denominator prime to
//! `p` (denominators come from Teichmueller-power products, numerators carry
//! `p`-power bookkeeping); they become residues only when terms are
//! collected.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::element::{BasicElement, DrwElement};
use crate::error::DrwError;
use crate::weights::{Partition, WeightFunction};
use crate::witt::rational_to_scalar;
use crate::Context;

/// `[x]^m d([x]^m')` collapses to a multiple of an iterated-Frobenius image:
/// with `alpha = val_p(m + m')` and `b = (m + m') / p^alpha`,
///
/// `[x]^m d([x]^m') = (m'/b) * F^alpha(d([x]^b))`.
///
/// Returns `(alpha, b, m'/b)`. Requires `m + m' > 0`; the coefficient has
/// denominator prime to `p`.
pub fn teichmuller_product_coeff(p: u32, m: u64, m_prime: u64) -> (u32, u64, BigRational) {
    let s = m + m_prime;
    assert!(s > 0, "exponent sum must be positive");
    let mut alpha = 0u32;
    let mut b = s;
    while b % p as u64 == 0 {
        b /= p as u64;
        alpha += 1;
    }
    (alpha, b, BigRational::new(BigInt::from(m_prime), BigInt::from(b)))
}

/// An `h`-element over an integral weight `c`: the product of the
/// Teichmueller monomial with exponents `c` outside `K` and one `g`-factor
/// `g(c|_k)` per chosen index `k in K`, factors in support order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HElement {
    weight: WeightFunction,
    picks: Vec<usize>,
}

impl HElement {
    /// Validates integrality and pick membership; sorts picks into support
    /// order.
    pub fn new(weight: WeightFunction, picks: &[usize]) -> Result<Self, DrwError> {
        if !weight.is_integral() {
            return Err(DrwError::NotIntegral);
        }
        let part = weight.partition(picks)?;
        Ok(HElement { picks: part.indices().to_vec(), weight })
    }

    fn from_sorted(weight: WeightFunction, picks: Vec<usize>) -> Self {
        HElement { weight, picks }
    }

    pub fn weight(&self) -> &WeightFunction {
        &self.weight
    }

    pub fn picks(&self) -> &[usize] {
        &self.picks
    }

    pub fn degree(&self) -> usize {
        self.picks.len()
    }
}

/// Expands a single `g` over an integral nonzero weight into `h`-elements:
///
/// `g(a) = sum_j p^(val_p(a_j) - val_p(a)) h(a, {j})`,
///
/// summed over the support. Returned as `(p-power exponent, h)` pairs.
pub fn expand_g(a: &WeightFunction) -> Result<Vec<(u32, HElement)>, DrwError> {
    if !a.is_integral() {
        return Err(DrwError::NotIntegral);
    }
    let val = a.val_p().ok_or(DrwError::ZeroWeight)?;
    Ok(a.support()
        .into_iter()
        .map(|j| {
            let vj = a.entry(j).val_p().expect("support entry");
            (
                (vj - val) as u32,
                HElement::from_sorted(a.clone(), vec![j]),
            )
        })
        .collect())
}

/// Expands a basic element with integral weight over all choices of one
/// index per partition block:
///
/// `e(eta; a; I) = eta * sum p^(sum_l val_p(a_(j_l)) - val_p(a|I_l)) h(a, {j_1..j_m})`.
///
/// The head block contributes its Teichmueller part inside every `h`; the
/// chosen indices inherit support order from the blocks, so no signs appear.
fn expand_basic(t: &BasicElement) -> Vec<(u32, HElement)> {
    let a = t.weight();
    let blocks = a.intervals(t.partition());
    let mut acc: Vec<(u32, Vec<usize>)> = vec![(0, Vec::new())];
    for block in &blocks[1..] {
        let vblock = block
            .iter()
            .map(|&i| a.entry(i).val_p().expect("support entry"))
            .min()
            .expect("partition blocks past the head are nonempty");
        let mut next = Vec::with_capacity(acc.len() * block.len());
        for (exp, picks) in &acc {
            for &j in block {
                let vj = a.entry(j).val_p().expect("support entry");
                let mut picks = picks.clone();
                picks.push(j);
                next.push((exp + (vj - vblock) as u32, picks));
            }
        }
        acc = next;
    }
    acc.into_iter()
        .map(|(exp, picks)| (exp, HElement::from_sorted(a.clone(), picks)))
        .collect()
}

/// Multiplies two `h`-elements.
///
/// Zero when the picks overlap (a repeated `d[x_i]` factor). Otherwise the
/// product is a single `h` over the summed weight: each picked index `i`
/// contributes the unit-part ratio `unit(own_i) / unit(own_i + other_i)`
/// from absorbing the opposite Teichmueller power, and the merged picks are
/// sorted into the support order of the sum, with the permutation signature
/// as sign.
pub fn mul_h(
    h1: &HElement,
    h2: &HElement,
) -> Result<Option<(BigRational, HElement)>, DrwError> {
    if h1.picks.iter().any(|i| h2.picks.contains(i)) {
        return Ok(None);
    }
    let a = &h1.weight;
    let b = &h2.weight;
    let c = a.add(b)?;
    let mut coeff = BigRational::one();
    for (own, &i) in [(a, &h1.picks), (b, &h2.picks)]
        .into_iter()
        .flat_map(|(w, picks)| picks.iter().map(move |i| (w, i)))
    {
        coeff *= BigRational::new(
            BigInt::from(own.entry(i).mantissa()),
            BigInt::from(c.entry(i).mantissa()),
        );
    }
    let mut merged: Vec<usize> = h1.picks.iter().chain(&h2.picks).copied().collect();
    let mut inversions = 0usize;
    for x in 0..merged.len() {
        for y in x + 1..merged.len() {
            if c.cmp_order(merged[x], merged[y]) == std::cmp::Ordering::Greater {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 1 {
        coeff = -coeff;
    }
    merged.sort_by(|&x, &y| c.cmp_order(x, y));
    Ok(Some((coeff, HElement::from_sorted(c, merged))))
}

/// Rewrites an `h`-element in the basic-element basis:
///
/// `h(c, K) = sum_L s(L) e(s(L); c; L)` over partitions `L` of size `|K|`.
///
/// Recursion on the top pick `i_m` with top block `T = {i : i_m <= i}`:
/// the `g`-factors of `h` below `i_m` recurse on the restriction off `T`,
/// and the final factor `g(c|i_m)` is either the top block of the rebuilt
/// basic element (append `i_m`) or corrected by the expansion with `i_m`
/// moved into the Teichmueller part and the rest of `T` as top block
/// (append the least index of `T \ {i_m}`, coefficient
/// `-p^(val_p(c|T\{i_m}) - val_p(c_(i_m)))`). Coefficients are signed
/// integers times nonnegative `p`-powers.
pub fn expand_h(h: &HElement) -> Vec<(BigInt, Vec<usize>)> {
    expand_h_rec(&h.weight, &h.picks)
}

fn expand_h_rec(c: &WeightFunction, picks: &[usize]) -> Vec<(BigInt, Vec<usize>)> {
    let Some((&i_m, head)) = picks.split_last() else {
        return vec![(BigInt::one(), Vec::new())];
    };
    let sorted = c.sorted_support();
    let pos = sorted
        .iter()
        .position(|&i| i == i_m)
        .expect("pick outside support");
    let rest = &sorted[..pos];
    let top_rest = &sorted[pos + 1..];
    let mut out = Vec::new();
    for (s, mut l) in expand_h_rec(&c.restrict(rest), head) {
        l.push(i_m);
        out.push((s, l));
    }
    if let Some(&j_star) = top_rest.first() {
        let v_im = c.entry(i_m).val_p().expect("support entry");
        let v_rest = top_rest
            .iter()
            .map(|&i| c.entry(i).val_p().expect("support entry"))
            .min()
            .expect("nonempty");
        let factor = BigInt::from(c.p()).pow((v_rest - v_im) as u32);
        let mut keep = rest.to_vec();
        keep.push(i_m);
        for (s, mut l) in expand_h_rec(&c.restrict(&keep), head) {
            l.push(j_star);
            out.push((-(s * &factor), l));
        }
    }
    out
}

/// Product of two basic elements with integral weights (any partitions):
/// expand both into `h`-elements, multiply pairwise, re-expand, collect.
pub fn mul_e_integral(
    ctx: Context,
    t1: &BasicElement,
    t2: &BasicElement,
) -> Result<DrwElement, DrwError> {
    let eta = t1.eta().mul(&t2.eta());
    let ex1 = expand_basic(t1);
    let ex2 = expand_basic(t2);
    let mut terms = Vec::new();
    for (e1, h1) in &ex1 {
        for (e2, h2) in &ex2 {
            let Some((q, h3)) = mul_h(h1, h2)? else {
                continue;
            };
            let base = q * BigRational::from_integer(
                BigInt::from(ctx.p).pow(e1 + e2),
            );
            for (s, l) in expand_h(&h3) {
                let r = &base * BigRational::from_integer(s);
                let coeff = rational_to_scalar(ctx, &r)?.mul(&eta);
                terms.push(BasicElement::from_parts(
                    coeff,
                    h3.weight.clone(),
                    Partition::from_sorted(l),
                ));
            }
        }
    }
    DrwElement::from_terms(ctx, terms)
}

fn single(ctx: Context, t: &BasicElement) -> Result<DrwElement, DrwError> {
    DrwElement::from_terms(ctx, [t.clone()])
}

/// Product of two basic elements, by cases on the denominator exponents
/// `u1 = u(a)`, `u2 = u(b)`:
///
/// * either factor of weight zero: scalar multiplication;
/// * `u1 = u2 = 0`: the integral engine;
/// * `u1 < u2`: swap, with the graded-commutativity sign;
/// * `u1 >= u2 > 0` or `u1 > 0 = u2`, head block of `t1` nonempty: `t1` is
///   `V^u1` of an integral element with the same coefficient, and
///   `V(x)y = V(x F(y))` turns the product into `V^u1` of an integral one.
///   `F^u1` scales the weight of `t2` by `p^u1` and its coefficient by
///   `p^u2` exactly when the head block of `t2` is nonempty;
/// * head block of `t1` empty: `t1 = d(w)` exactly, where `w` drops the
///   head index, and `d(w) y = d(w y) - (-1)^deg(w) w d(y)` reduces both
///   summands to the previous case.
pub fn mul_e(
    ctx: Context,
    t1: &BasicElement,
    t2: &BasicElement,
) -> Result<DrwElement, DrwError> {
    if t1.weight().is_zero() {
        return single(ctx, t2)?.scalar_mul(t1.eta());
    }
    if t2.weight().is_zero() {
        return single(ctx, t1)?.scalar_mul(t2.eta());
    }
    let u1 = t1.weight().u();
    let u2 = t2.weight().u();
    if u1 == 0 && u2 == 0 {
        return mul_e_integral(ctx, t1, t2);
    }
    if u1 < u2 {
        let swapped = mul_e(ctx, t2, t1)?;
        return Ok(if t1.degree() * t2.degree() % 2 == 1 {
            swapped.neg()
        } else {
            swapped
        });
    }
    if !t1.head_block_empty() {
        let v = if t2.head_block_empty() { 0 } else { u2 };
        let mut eta2 = t2.eta();
        for _ in 0..v {
            eta2 = eta2.verschiebung();
        }
        let s1 = BasicElement::from_parts(
            t1.eta(),
            t1.weight().scale_pow(u1 as i32),
            t1.partition().clone(),
        );
        let s2 = BasicElement::from_parts(
            eta2,
            t2.weight().scale_pow(u1 as i32),
            t2.partition().clone(),
        );
        let inner = mul_e_integral(ctx, &s1, &s2)?;
        return Ok(inner.verschiebung_pow(u1));
    }
    // t1 = d(w): the head index of the partition is the support minimum and
    // the negative valuation makes d(w) = t1 with coefficient exactly 1.
    let w = BasicElement::from_parts(
        t1.eta(),
        t1.weight().clone(),
        Partition::from_sorted(t1.partition().indices()[1..].to_vec()),
    );
    let first = mul_e(ctx, &w, t2)?.differential();
    let mut second = DrwElement::zero(ctx);
    for s in single(ctx, t2)?.differential().terms() {
        second = second.add(&mul_e(ctx, &w, &s)?)?;
    }
    if t1.degree() % 2 == 1 {
        second = second.neg();
    }
    first.add(&second)
}

impl DrwElement {
    /// The graded product, bilinear over the basic-element products.
    pub fn mul(&self, other: &Self) -> Result<Self, DrwError> {
        if self.ctx() != other.ctx() {
            return Err(DrwError::ContextMismatch("element product"));
        }
        let mut out = DrwElement::zero(self.ctx());
        for t1 in self.terms() {
            for t2 in other.terms() {
                out = out.add(&mul_e(self.ctx(), &t1, &t2)?)?;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::SummandClass;
    use crate::random::{random_element, random_term, GenParams};
    use crate::weights::PadicRational;
    use crate::witt::WittScalar;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(n: usize) -> Context {
        Context::new(2, n, 6).unwrap()
    }

    fn weight(ctx: Context, entries: &[(u64, i32)]) -> WeightFunction {
        WeightFunction::new(
            ctx.p,
            entries
                .iter()
                .map(|&(m, v)| PadicRational::new(ctx.p, m, v))
                .collect(),
        )
    }

    fn term(
        ctx: Context,
        eta: i128,
        entries: &[(u64, i32)],
        part: &[usize],
    ) -> BasicElement {
        BasicElement::new(
            WittScalar::from_integer(ctx, eta),
            weight(ctx, entries),
            part,
        )
        .unwrap()
    }

    fn elem(ctx: Context, eta: i128, entries: &[(u64, i32)], part: &[usize]) -> DrwElement {
        DrwElement::from_terms(ctx, [term(ctx, eta, entries, part)]).unwrap()
    }

    #[test]
    fn teichmuller_coefficients() {
        let (a, b, c) = teichmuller_product_coeff(2, 1, 1);
        assert_eq!((a, b), (1, 1));
        assert_eq!(c, BigRational::one());
        let (a, b, c) = teichmuller_product_coeff(2, 1, 2);
        assert_eq!((a, b), (0, 3));
        assert_eq!(c, BigRational::new(BigInt::from(2), BigInt::from(3)));
        let (a, b, c) = teichmuller_product_coeff(2, 2, 2);
        assert_eq!((a, b), (2, 1));
        assert_eq!(c, BigRational::from_integer(BigInt::from(2)));
    }

    #[test]
    fn h_products_merge_or_vanish() {
        let c1 = ctx(1);
        let a = weight(c1, &[(1, 0)]);
        let dx = HElement::new(a.clone(), &[1]).unwrap();
        let tx = HElement::new(a, &[]).unwrap();
        let (q, h) = mul_h(&dx, &tx).unwrap().unwrap();
        assert_eq!(q, BigRational::one());
        assert_eq!(h.weight(), &weight(c1, &[(2, 0)]));
        assert_eq!(h.picks(), &[1]);
        assert!(mul_h(&dx, &dx).unwrap().is_none());
        assert!(HElement::new(weight(c1, &[(1, 1)]), &[]).is_err());
    }

    #[test]
    fn h_product_sign_tracks_the_merge_order() {
        let c2 = ctx(2);
        let h1 = HElement::new(weight(c2, &[(0, 0), (1, 0)]), &[2]).unwrap();
        let h2 = HElement::new(weight(c2, &[(1, 0), (0, 0)]), &[1]).unwrap();
        let (q, h) = mul_h(&h1, &h2).unwrap().unwrap();
        assert_eq!(q, -BigRational::one());
        assert_eq!(h.picks(), &[1, 2]);
    }

    #[test]
    fn g_expansion_weights_by_valuation_gaps() {
        let c2 = ctx(2);
        let a = weight(c2, &[(2, 0), (1, 0)]);
        let ex = expand_g(&a).unwrap();
        assert_eq!(ex.len(), 2);
        assert_eq!(ex[0].0, 1); // val_p(2) - val_p(a) = 1
        assert_eq!(ex[0].1.picks(), &[1]);
        assert_eq!(ex[1].0, 0);
        assert_eq!(ex[1].1.picks(), &[2]);
        assert!(expand_g(&weight(c2, &[(1, 1), (0, 0)])).is_err());
    }

    #[test]
    fn h_expansion_can_go_negative() {
        let c2 = ctx(2);
        // h((1,1), {1}) = [X2] d[X1] = d([X1 X2]) - [X1] d[X2].
        let h = HElement::new(weight(c2, &[(1, 0), (1, 0)]), &[1]).unwrap();
        let ex = expand_h(&h);
        assert_eq!(
            ex,
            vec![
                (BigInt::from(1), vec![1]),
                (BigInt::from(-1), vec![2]),
            ]
        );
        let top = HElement::new(weight(c2, &[(1, 0), (1, 0)]), &[2]).unwrap();
        assert_eq!(expand_h(&top), vec![(BigInt::from(1), vec![2])]);
    }

    #[test]
    fn integral_products_match_hand_results() {
        let c1 = ctx(1);
        // [X] * d[X] = F(d[X]).
        let lhs = mul_e_integral(c1, &term(c1, 1, &[(1, 0)], &[]), &term(c1, 1, &[(1, 0)], &[1]))
            .unwrap();
        assert_eq!(lhs, elem(c1, 1, &[(2, 0)], &[1]));
        // 3 * ([X]^2 * d[X]) = d([X]^3).
        let sq = mul_e_integral(c1, &term(c1, 1, &[(2, 0)], &[]), &term(c1, 1, &[(1, 0)], &[1]))
            .unwrap();
        let three = sq.scalar_mul(WittScalar::from_integer(c1, 3)).unwrap();
        assert_eq!(three, elem(c1, 1, &[(3, 0)], &[]).differential());
    }

    #[test]
    fn top_forms_anticommute() {
        let c2 = ctx(2);
        let dx1 = term(c2, 1, &[(1, 0), (0, 0)], &[1]);
        let dx2 = term(c2, 1, &[(0, 0), (1, 0)], &[2]);
        let fwd = mul_e(c2, &dx1, &dx2).unwrap();
        let bwd = mul_e(c2, &dx2, &dx1).unwrap();
        assert_eq!(fwd, elem(c2, 1, &[(1, 0), (1, 0)], &[1, 2]));
        assert_eq!(bwd, fwd.neg());
        assert!(mul_e(c2, &dx1, &dx1).unwrap().is_zero());
    }

    #[test]
    fn verschiebung_images_multiply_through_the_projection_formula() {
        let c2 = ctx(2);
        // V[X1] * V[X2] = p V([X1 X2]).
        let v1 = term(c2, 1, &[(1, 1), (0, 0)], &[]);
        let v2 = term(c2, 1, &[(0, 0), (1, 1)], &[]);
        assert_eq!(
            mul_e(c2, &v1, &v2).unwrap(),
            elem(c2, 2, &[(1, 1), (1, 1)], &[])
        );
        // V^m([X^(p^m - 1)]) * d(V^m([X])) = p^m d[X], the overconvergence
        // counterexample pair, here at m = 1.
        let c1 = ctx(1);
        let x = term(c1, 1, &[(1, 1)], &[]);
        let y = term(c1, 1, &[(1, 1)], &[1]);
        assert_eq!(mul_e(c1, &x, &y).unwrap(), elem(c1, 2, &[(1, 0)], &[1]));
    }

    #[test]
    fn mixed_head_blocks_go_through_leibniz() {
        let c2 = ctx(2);
        // d(V[X1]) * V[X2] = d(p V[X1 X2]) - V[X1] d(V[X2]).
        let t1 = term(c2, 1, &[(1, 1), (0, 0)], &[1]);
        let t2 = term(c2, 1, &[(0, 0), (1, 1)], &[]);
        let got = mul_e(c2, &t1, &t2).unwrap();
        let want = elem(c2, 2, &[(1, 1), (1, 1)], &[1])
            .add(&elem(c2, -1, &[(1, 1), (1, 1)], &[2]))
            .unwrap();
        assert_eq!(got, want);
        // A d-image squares to zero.
        assert!(mul_e(c2, &t1, &t1).unwrap().is_zero());
    }

    #[test]
    fn scalar_terms_multiply_by_coefficient() {
        let c2 = ctx(2);
        let s = term(c2, 5, &[(0, 0), (0, 0)], &[]);
        let x = term(c2, 3, &[(1, 1), (1, 0)], &[2]);
        assert_eq!(
            mul_e(c2, &s, &x).unwrap(),
            elem(c2, 15, &[(1, 1), (1, 0)], &[2])
        );
        assert_eq!(mul_e(c2, &x, &s).unwrap(), mul_e(c2, &s, &x).unwrap());
    }

    #[test]
    fn swapped_orders_agree_up_to_sign() {
        let c2 = ctx(2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let i = rng.gen_range(0..=2usize);
            let j = rng.gen_range(0..=2usize);
            let px = GenParams { max_terms: 3, degree: Some(i), ..Default::default() };
            let py = GenParams { max_terms: 3, degree: Some(j), ..Default::default() };
            let x = random_element(&mut rng, c2, &px);
            let y = random_element(&mut rng, c2, &py);
            let xy = x.mul(&y).unwrap();
            let yx = y.mul(&x).unwrap();
            let want = if i * j % 2 == 1 { yx.neg() } else { yx };
            assert_eq!(xy, want);
        }
    }

    #[test]
    fn product_is_associative_on_random_triples() {
        let c2 = ctx(2);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let params = GenParams { max_terms: 2, max_u: 2, ..Default::default() };
        for _ in 0..40 {
            let x = random_element(&mut rng, c2, &params);
            let y = random_element(&mut rng, c2, &params);
            let z = random_element(&mut rng, c2, &params);
            let left = x.mul(&y).unwrap().mul(&z).unwrap();
            let right = x.mul(&y.mul(&z).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn leibniz_rule_holds_degreewise() {
        let c2 = ctx(2);
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..60 {
            let i = rng.gen_range(0..=2usize);
            let j = rng.gen_range(0..=2usize);
            let params_x = GenParams { max_terms: 2, degree: Some(i), ..Default::default() };
            let params_y = GenParams { max_terms: 2, degree: Some(j), ..Default::default() };
            let x = random_element(&mut rng, c2, &params_x);
            let y = random_element(&mut rng, c2, &params_y);
            let lhs = x.mul(&y).unwrap().differential();
            let t1 = x.mul(&y.differential()).unwrap();
            let t2 = y.mul(&x.differential()).unwrap();
            let s1 = if i % 2 == 1 { t1.neg() } else { t1 };
            let s2 = if (i + 1) * j % 2 == 1 { t2.neg() } else { t2 };
            assert_eq!(lhs, s1.add(&s2).unwrap());
        }
    }

    #[test]
    fn fractional_products_obey_the_coefficient_bounds() {
        // For t1 with nonempty head block and u1 >= u2, every output term
        // satisfies a valuation bound depending on whether its own head
        // block is empty.
        let c2 = ctx(2);
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let frp = GenParams {
            max_terms: 1,
            class: Some(SummandClass::Fractional),
            ..Default::default()
        };
        let any = GenParams { max_terms: 1, ..Default::default() };
        let mut checked = 0;
        for _ in 0..400 {
            let t1 = random_term(&mut rng, c2, &frp);
            let t2 = random_term(&mut rng, c2, &any);
            let (u1, u2) = (t1.weight().u(), t2.weight().u());
            if u1 < u2 || u2 == 0 {
                continue;
            }
            let alpha = t1.eta().val_v().unwrap_or(c2.prec);
            let beta = t2.eta().val_v().unwrap_or(c2.prec);
            for out in mul_e(c2, &t1, &t2).unwrap().terms() {
                let got = out.eta().val_v().unwrap_or(c2.prec);
                let bound = if out.head_block_empty() {
                    alpha + beta + u1.min(u2)
                } else {
                    (alpha + beta + u1.max(u2)).saturating_sub(out.weight().u())
                };
                assert!(
                    got >= bound.min(c2.prec),
                    "term {:?} valuation {} below bound {}",
                    out,
                    got,
                    bound
                );
                assert_eq!(out.degree(), t1.degree() + t2.degree());
            }
            checked += 1;
        }
        assert!(checked > 50, "generator starved the bound check");
    }

    #[test]
    fn products_agree_with_the_coordinate_oracle() {
        use crate::oracle::{eval_degree0, oracle_equal};
        let ctx = Context::new(2, 2, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let params = GenParams {
            max_terms: 3,
            max_mantissa: 3,
            max_u: 2,
            degree: Some(0),
            ..Default::default()
        };
        for _ in 0..25 {
            let x = random_element(&mut rng, ctx, &params);
            let y = random_element(&mut rng, ctx, &params);
            let structural = eval_degree0(&x.mul(&y).unwrap()).unwrap();
            let coords = eval_degree0(&x).unwrap().witt_mul(&eval_degree0(&y).unwrap());
            assert!(oracle_equal(&structural, &coords));
        }
    }
}
