//! Pseudovaluations on elements.
//!
//! Two families of functions measure how deep an element sits in the
//! V-filtration relative to its weight, for a positive rational parameter
//! `eps`:
//!
//! * `gamma`: per term `val_V(eta) + u(a) - eps*|a|`, minimized;
//! * `zeta`: per term `2n*val_V(eta) + #I*u(a) - eps*|a|` when the head
//!   block is empty and `2n*val_V(eta) + (#I+1)*u(a) - eps*|a|` otherwise,
//!   minimized.
//!
//! Both send the zero element to plus infinity. `zeta` is a pseudovaluation
//! (additive lower bound by the minimum, multiplicative lower bound by the
//! sum) while `gamma` fails the product rule; this module provides the
//! evaluators, the axiom checker, the per-class product-margin table
//! checker, the two product-rule counterexamples for `gamma`, and the
//! comparison sandwich `2n*gamma_(eps/2n) >= zeta_eps >= gamma_eps`.
//!
//! Coefficients live in a ring truncated at V-depth `M`, so a coefficient
//! that vanishes there only bounds the valuation of any lift from below.
//! Canonical elements never store vanished coefficients, but every report
//! carries a flag that is set when such a bound attains the minimum, so a
//! strict comparison is never silently built on truncated data.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::element::{BasicElement, DrwElement, SummandClass};
use crate::error::DrwError;
use crate::Context;

/// A rational extended by the two infinities, totally ordered.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtendedRational {
    NegInf,
    Finite(BigRational),
    PosInf,
}

impl ExtendedRational {
    pub fn finite(q: BigRational) -> Self {
        ExtendedRational::Finite(q)
    }

    pub fn from_integer(n: i64) -> Self {
        ExtendedRational::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedRational::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&BigRational> {
        match self {
            ExtendedRational::Finite(q) => Some(q),
            _ => None,
        }
    }

    /// Sum with the usual conventions; opposite infinities are a caller bug.
    pub fn add(&self, other: &Self) -> Self {
        use ExtendedRational::*;
        match (self, other) {
            (PosInf, NegInf) | (NegInf, PosInf) => {
                panic!("indeterminate sum of opposite infinities")
            }
            (PosInf, _) | (_, PosInf) => PosInf,
            (NegInf, _) | (_, NegInf) => NegInf,
            (Finite(a), Finite(b)) => Finite(a + b),
        }
    }

    /// Multiplies by a nonnegative integer (infinities absorb it).
    pub fn scale(&self, k: u32) -> Self {
        match self {
            ExtendedRational::Finite(q) => {
                ExtendedRational::Finite(q * BigRational::from_integer(BigInt::from(k)))
            }
            other => other.clone(),
        }
    }

    /// `self - other` when both are finite; `None` otherwise.
    pub fn finite_difference(&self, other: &Self) -> Option<BigRational> {
        match (self, other) {
            (ExtendedRational::Finite(a), ExtendedRational::Finite(b)) => Some(a - b),
            _ => None,
        }
    }

    pub fn render(&self) -> String {
        match self {
            ExtendedRational::NegInf => "-inf".to_string(),
            ExtendedRational::Finite(q) => q.to_string(),
            ExtendedRational::PosInf => "inf".to_string(),
        }
    }
}

/// An evaluated pseudovaluation. `lower_bound_only` is set when the minimum
/// is attained by a term whose coefficient vanishes at the working
/// precision, so the true value of a lift could be larger.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudovalResult {
    pub value: ExtendedRational,
    pub lower_bound_only: bool,
}

impl PseudovalResult {
    fn infinite() -> Self {
        PseudovalResult { value: ExtendedRational::PosInf, lower_bound_only: false }
    }
}

fn require_positive(eps: &BigRational) -> Result<(), DrwError> {
    if eps.is_positive() {
        Ok(())
    } else {
        Err(DrwError::EpsilonNotPositive)
    }
}

fn coefficient_valuation(ctx: Context, t: &BasicElement) -> (u32, bool) {
    match t.eta().val_v() {
        Some(v) => (v, false),
        None => (ctx.prec, true),
    }
}

fn minimize(
    values: impl Iterator<Item = (BigRational, bool)>,
) -> PseudovalResult {
    let mut best: Option<(BigRational, bool)> = None;
    for (value, truncated) in values {
        best = Some(match best {
            None => (value, truncated),
            Some((b, f)) => {
                if value < b {
                    (value, truncated)
                } else if value == b {
                    (b, f || truncated)
                } else {
                    (b, f)
                }
            }
        });
    }
    match best {
        None => PseudovalResult::infinite(),
        Some((value, flag)) => PseudovalResult {
            value: ExtendedRational::Finite(value),
            lower_bound_only: flag,
        },
    }
}

/// `gamma_eps(x)`: the minimum over terms of `val_V(eta) + u(a) - eps*|a|`,
/// plus infinity on zero.
pub fn gamma(x: &DrwElement, eps: &BigRational) -> Result<PseudovalResult, DrwError> {
    require_positive(eps)?;
    let ctx = x.ctx();
    Ok(minimize(x.terms().map(|t| {
        let (val, truncated) = coefficient_valuation(ctx, &t);
        let base = BigInt::from(val + t.weight().u());
        (BigRational::from_integer(base) - eps * t.weight().total_weight(), truncated)
    })))
}

/// `zeta_eps(x)`: the minimum over terms of
/// `2n*val_V(eta) + #I*u(a) - eps*|a|`, with `#I` counted one higher when
/// the head block is nonempty; plus infinity on zero.
pub fn zeta(x: &DrwElement, eps: &BigRational) -> Result<PseudovalResult, DrwError> {
    require_positive(eps)?;
    let ctx = x.ctx();
    Ok(minimize(x.terms().map(|t| {
        let (val, truncated) = coefficient_valuation(ctx, &t);
        let factors = t.degree() as u32 + u32::from(!t.head_block_empty());
        let base = BigInt::from(2 * ctx.nvars as u32 * val + factors * t.weight().u());
        (BigRational::from_integer(base) - eps * t.weight().total_weight(), truncated)
    })))
}

/// One verified axiom: its margin is `value - bound` when both sides are
/// finite, absent when the comparison involved an infinity.
#[derive(Clone, Debug)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub holds: bool,
    pub margin: Option<BigRational>,
}

/// The five pseudovaluation axioms evaluated on a pair of elements.
#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
    pub lower_bound_only: bool,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Checks the pseudovaluation axioms for `zeta` on `x` and `y`:
/// zero maps to plus infinity, one maps to zero, negation is invisible,
/// sums are bounded by the minimum, products by the sum.
pub fn check_axioms(
    x: &DrwElement,
    y: &DrwElement,
    eps: &BigRational,
) -> Result<AxiomReport, DrwError> {
    require_positive(eps)?;
    let ctx = x.ctx();
    if ctx != y.ctx() {
        return Err(DrwError::ContextMismatch("axiom check"));
    }
    let zx = zeta(x, eps)?;
    let zy = zeta(y, eps)?;
    let zneg = zeta(&x.neg(), eps)?;
    let zsum = zeta(&x.add(y)?, eps)?;
    let zprod = zeta(&x.mul(y)?, eps)?;
    let zero = zeta(&DrwElement::zero(ctx), eps)?;
    let one = zeta(&DrwElement::one(ctx), eps)?;

    let mut checks = Vec::with_capacity(5);
    checks.push(AxiomCheck {
        name: "zeta(0) = +inf",
        holds: zero.value == ExtendedRational::PosInf,
        margin: None,
    });
    checks.push(AxiomCheck {
        name: "zeta(1) = 0",
        holds: one.value == ExtendedRational::from_integer(0),
        margin: one.value.finite_difference(&ExtendedRational::from_integer(0)),
    });
    checks.push(AxiomCheck {
        name: "zeta(-x) = zeta(x)",
        holds: zneg.value == zx.value,
        margin: zneg.value.finite_difference(&zx.value),
    });
    let add_bound = zx.value.clone().min(zy.value.clone());
    checks.push(AxiomCheck {
        name: "zeta(x+y) >= min(zeta(x), zeta(y))",
        holds: zsum.value >= add_bound,
        margin: zsum.value.finite_difference(&add_bound),
    });
    let mul_bound = zx.value.add(&zy.value);
    checks.push(AxiomCheck {
        name: "zeta(xy) >= zeta(x) + zeta(y)",
        holds: zprod.value >= mul_bound,
        margin: zprod.value.finite_difference(&mul_bound),
    });
    let lower_bound_only = [&zx, &zy, &zneg, &zsum, &zprod]
        .iter()
        .any(|r| r.lower_bound_only);
    Ok(AxiomReport { checks, lower_bound_only })
}

/// One cell of the product-margin table: the `zeta` of one projection of
/// `x*y` against `zeta(x) + zeta(y) + bonus`, or an exact-zero claim.
#[derive(Clone, Debug)]
pub struct TableCell {
    pub projection: SummandClass,
    pub expects_zero: bool,
    pub bonus: u32,
    pub holds: bool,
    pub margin: Option<BigRational>,
}

/// The three projection checks for one pair of pure-class operands.
#[derive(Clone, Debug)]
pub struct TableReport {
    pub x_class: SummandClass,
    pub y_class: SummandClass,
    pub cells: Vec<TableCell>,
    pub lower_bound_only: bool,
}

impl TableReport {
    pub fn all_hold(&self) -> bool {
        self.cells.iter().all(|c| c.holds)
    }
}

/// The class of a nonzero element all of whose terms agree on it.
pub fn pure_class(x: &DrwElement) -> Result<SummandClass, DrwError> {
    let mut class = None;
    for t in x.terms() {
        match class {
            None => class = Some(t.class()),
            Some(c) if c == t.class() => {}
            Some(_) => return Err(DrwError::MixedClass),
        }
    }
    class.ok_or(DrwError::MixedClass)
}

enum CellBound {
    Zero,
    Bonus(u32),
}

fn table_row(
    xc: SummandClass,
    yc: SummandClass,
) -> [CellBound; 3] {
    use CellBound::{Bonus, Zero};
    use SummandClass::{DifferentialFractional as Dfrp, Fractional as Frp, Integral as Int};
    match (xc, yc) {
        (Int, Int) => [Bonus(0), Zero, Zero],
        (Frp, Int) => [Zero, Bonus(0), Bonus(1)],
        (Dfrp, Int) => [Zero, Bonus(0), Bonus(0)],
        (Frp, Frp) => [Bonus(2), Bonus(1), Bonus(3)],
        (Dfrp, Frp) => [Bonus(0), Bonus(0), Bonus(1)],
        (Dfrp, Dfrp) => [Bonus(0), Zero, Bonus(0)],
        // The remaining orderings reduce to the rows above: the products
        // differ by a sign, which zeta does not see.
        (Int, Frp) | (Int, Dfrp) | (Frp, Dfrp) => table_row(yc, xc),
    }
}

/// Verifies the per-class product margins on one pair of pure operands:
/// for each projection of `x*y`, either exact vanishing or
/// `zeta(projection) >= zeta(x) + zeta(y) + bonus`.
pub fn check_product_table(
    x: &DrwElement,
    y: &DrwElement,
    eps: &BigRational,
) -> Result<TableReport, DrwError> {
    require_positive(eps)?;
    let x_class = pure_class(x)?;
    let y_class = pure_class(y)?;
    let zx = zeta(x, eps)?;
    let zy = zeta(y, eps)?;
    let product = x.mul(y)?;
    let row = table_row(x_class, y_class);
    let mut lower_bound_only = zx.lower_bound_only || zy.lower_bound_only;
    let mut cells = Vec::with_capacity(3);
    for (class, bound) in [
        SummandClass::Integral,
        SummandClass::Fractional,
        SummandClass::DifferentialFractional,
    ]
    .into_iter()
    .zip(row)
    {
        let projection = product.project(class);
        let cell = match bound {
            CellBound::Zero => TableCell {
                projection: class,
                expects_zero: true,
                bonus: 0,
                holds: projection.is_zero(),
                margin: None,
            },
            CellBound::Bonus(c) => {
                let zp = zeta(&projection, eps)?;
                lower_bound_only |= zp.lower_bound_only;
                let target = zx
                    .value
                    .add(&zy.value)
                    .add(&ExtendedRational::from_integer(c as i64));
                TableCell {
                    projection: class,
                    expects_zero: false,
                    bonus: c,
                    holds: zp.value >= target,
                    margin: zp.value.finite_difference(&target),
                }
            }
        };
        cells.push(cell);
    }
    Ok(TableReport { x_class, y_class, cells, lower_bound_only })
}

/// One evaluated product-rule counterexample for `gamma`.
#[derive(Clone, Debug)]
pub struct CounterexampleReport {
    pub gamma_x: BigRational,
    pub gamma_y: BigRational,
    pub gamma_product: BigRational,
    pub sum_bound: BigRational,
    /// All three values match their closed forms and the product value is
    /// strictly below the sum.
    pub holds: bool,
}

/// Builds the standard product-rule counterexample for `gamma` and checks
/// it end to end.
///
/// Both variants share `x = V^m([X1^(p^m - 1)])`. The first multiplies by
/// `y = d(V^m([X1]))`, where the product collapses to `p^m d([X1])`; the
/// second by `y = d(V^m([X2]))`, where it stays a single fractional basic
/// element. In both cases
///
/// `gamma(x) = m - eps(p^m - 1)/p^m`, `gamma(y) = m - eps/p^m`,
/// `gamma(xy) = m - eps < gamma(x) + gamma(y)`.
pub fn gamma_counterexample(
    ctx: Context,
    which: u8,
    m: u32,
    eps: &BigRational,
) -> Result<CounterexampleReport, DrwError> {
    require_positive(eps)?;
    if m < 1 || m >= ctx.prec {
        return Err(DrwError::VerschiebungDepthOutOfRange(m, ctx.prec - 1));
    }
    let needed = match which {
        1 => 1,
        2 => 2,
        _ => return Err(DrwError::IndexOutOfRange(which as usize)),
    };
    if ctx.nvars < needed {
        return Err(DrwError::NeedsVariables(needed));
    }
    let pm = (ctx.p as u64).pow(m);
    let x = DrwElement::from_terms(
        ctx,
        [BasicElement::teichmuller_monomial(ctx, 1, pm - 1)?],
    )?
    .verschiebung_pow(m);
    let y = DrwElement::from_terms(
        ctx,
        [BasicElement::teichmuller_monomial(ctx, needed, 1)?],
    )?
    .verschiebung_pow(m)
    .differential();
    let product = x.mul(&y)?;

    let gx = gamma(&x, eps)?;
    let gy = gamma(&y, eps)?;
    let gp = gamma(&product, eps)?;
    let rat = |n: u64| BigRational::from_integer(BigInt::from(n));
    let m_rat = rat(m as u64);
    let expected_x = &m_rat - eps * rat(pm - 1) / rat(pm);
    let expected_y = &m_rat - eps / rat(pm);
    let expected_p = &m_rat - eps;
    let (Some(gx), Some(gy), Some(gp)) = (
        gx.value.as_finite(),
        gy.value.as_finite(),
        gp.value.as_finite(),
    ) else {
        return Ok(CounterexampleReport {
            gamma_x: expected_x.clone(),
            gamma_y: expected_y,
            gamma_product: expected_p,
            sum_bound: expected_x,
            holds: false,
        });
    };
    let sum_bound = gx + gy;
    let holds = *gx == expected_x
        && *gy == expected_y
        && *gp == expected_p
        && *gp < sum_bound;
    Ok(CounterexampleReport {
        gamma_x: gx.clone(),
        gamma_y: gy.clone(),
        gamma_product: gp.clone(),
        sum_bound,
        holds,
    })
}

/// The two evaluations sandwiching `zeta` between scaled and plain `gamma`.
#[derive(Clone, Debug)]
pub struct SandwichReport {
    pub scaled_gamma: ExtendedRational,
    pub zeta: ExtendedRational,
    pub gamma: ExtendedRational,
    pub holds: bool,
    pub lower_bound_only: bool,
}

/// Checks `2n * gamma_(eps/2n)(x) >= zeta_eps(x) >= gamma_eps(x)` on one
/// element. Needs at least one variable.
pub fn compare_gamma_zeta(
    x: &DrwElement,
    eps: &BigRational,
) -> Result<SandwichReport, DrwError> {
    require_positive(eps)?;
    let ctx = x.ctx();
    if ctx.nvars == 0 {
        return Err(DrwError::NeedsVariables(1));
    }
    let two_n = 2 * ctx.nvars as u32;
    let shrunk = eps / BigRational::from_integer(BigInt::from(two_n));
    let g_small = gamma(x, &shrunk)?;
    let z = zeta(x, eps)?;
    let g = gamma(x, eps)?;
    let scaled = g_small.value.scale(two_n);
    let holds = scaled >= z.value && z.value >= g.value;
    Ok(SandwichReport {
        scaled_gamma: scaled,
        zeta: z.value,
        gamma: g.value,
        holds,
        lower_bound_only: g_small.lower_bound_only || z.lower_bound_only || g.lower_bound_only,
    })
}
