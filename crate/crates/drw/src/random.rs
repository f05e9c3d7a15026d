//! Seeded random elements for the randomized verification suites.
//!
//! The check commands and the test suites all draw elements through this one
//! generator so that a fixed seed reproduces a run exactly. Constraints
//! narrow the draw: a fixed degree, a fixed summand class, or both.

use rand::Rng;

use crate::element::{BasicElement, DrwElement, SummandClass};
use crate::weights::{PadicRational, WeightFunction};
use crate::witt::WittScalar;
use crate::Context;

/// Bounds and constraints for a random draw.
#[derive(Clone, Copy, Debug)]
pub struct GenParams {
    /// Terms per element, drawn uniformly from `1..=max_terms`.
    pub max_terms: usize,
    /// Weight entry mantissas are drawn from `1..=max_mantissa`.
    pub max_mantissa: u64,
    /// Largest denominator exponent a weight entry can carry.
    pub max_u: u32,
    /// Force every term to this degree.
    pub degree: Option<usize>,
    /// Force every term into this summand class.
    pub class: Option<SummandClass>,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            max_terms: 5,
            max_mantissa: 4,
            max_u: 3,
            degree: None,
            class: None,
        }
    }
}

/// One random basic element satisfying the constraints.
///
/// Panics if the constraints are unsatisfiable for the context (for example
/// a forced degree larger than the number of variables).
pub fn random_term(rng: &mut impl Rng, ctx: Context, params: &GenParams) -> BasicElement {
    for _ in 0..100_000 {
        if let Some(t) = try_term(rng, ctx, params) {
            return t;
        }
    }
    panic!("random draw constraints look unsatisfiable: {params:?} with {ctx:?}");
}

fn try_term(rng: &mut impl Rng, ctx: Context, params: &GenParams) -> Option<BasicElement> {
    let p = ctx.p;
    let fractional_required = matches!(
        params.class,
        Some(SummandClass::Fractional) | Some(SummandClass::DifferentialFractional)
    );
    let max_u = if matches!(params.class, Some(SummandClass::Integral)) {
        0
    } else {
        params.max_u
    };

    let mut entries = Vec::with_capacity(ctx.nvars);
    for _ in 0..ctx.nvars {
        if rng.gen_ratio(1, 3) {
            entries.push(PadicRational::zero());
        } else {
            let m = rng.gen_range(1..=params.max_mantissa);
            let v = rng.gen_range(-1..=max_u as i32);
            entries.push(PadicRational::new(p, m, v));
        }
    }
    if fractional_required && !entries.iter().any(|e| e.vexp() > 0) {
        let slot = rng.gen_range(0..ctx.nvars);
        let m = rng.gen_range(1..=params.max_mantissa);
        let v = rng.gen_range(1..=max_u.max(1) as i32);
        entries[slot] = PadicRational::new(p, m, v);
    }
    let weight = WeightFunction::new(p, entries);

    let degree = match params.degree {
        Some(d) => d,
        None => rng.gen_range(0..=weight.support().len()),
    };
    if weight.support().len() < degree {
        return None;
    }
    if weight.is_zero()
        && (fractional_required || degree > 0)
    {
        return None;
    }

    let picks = match params.class {
        Some(SummandClass::DifferentialFractional) => {
            // The partition must start at the order-minimum.
            if degree == 0 {
                return None;
            }
            let min = weight.min_index().ok()?;
            let mut pool: Vec<usize> =
                weight.support().into_iter().filter(|&i| i != min).collect();
            if pool.len() < degree - 1 {
                return None;
            }
            let mut picks = vec![min];
            for _ in 1..degree {
                let k = rng.gen_range(0..pool.len());
                picks.push(pool.swap_remove(k));
            }
            picks
        }
        Some(SummandClass::Fractional) => {
            // Keeping the order-minimum out of the partition keeps the head
            // block nonempty.
            let min = weight.min_index().ok()?;
            let mut pool: Vec<usize> =
                weight.support().into_iter().filter(|&i| i != min).collect();
            if pool.len() < degree {
                return None;
            }
            let mut picks = Vec::with_capacity(degree);
            for _ in 0..degree {
                let k = rng.gen_range(0..pool.len());
                picks.push(pool.swap_remove(k));
            }
            picks
        }
        _ => {
            let mut pool = weight.support();
            let mut picks = Vec::with_capacity(degree);
            for _ in 0..degree {
                let k = rng.gen_range(0..pool.len());
                picks.push(pool.swap_remove(k));
            }
            picks
        }
    };

    let eta = WittScalar::from_integer(ctx, rng.gen_range(1..ctx.modulus()) as i128);
    let term = BasicElement::new(eta, weight, &picks).ok()?;
    if let Some(class) = params.class {
        if term.class() != class {
            return None;
        }
    }
    Some(term)
}

/// A random element: `1..=max_terms` random terms, collected canonically.
/// Collisions may merge or cancel, so the term count is an upper bound.
/// A class-constrained draw redraws when everything cancels, since the zero
/// element belongs to no class.
pub fn random_element(rng: &mut impl Rng, ctx: Context, params: &GenParams) -> DrwElement {
    for _ in 0..1000 {
        let n = rng.gen_range(1..=params.max_terms);
        let terms: Vec<BasicElement> =
            (0..n).map(|_| random_term(rng, ctx, params)).collect();
        let element = DrwElement::from_terms(ctx, terms).expect("generated terms are valid");
        if params.class.is_some() && element.is_zero() {
            continue;
        }
        return element;
    }
    panic!("random draw constraints look unsatisfiable: {params:?} with {ctx:?}");
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constrained_draws_satisfy_their_constraints() {
        let ctx = Context::new(2, 3, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for class in [
            SummandClass::Integral,
            SummandClass::Fractional,
            SummandClass::DifferentialFractional,
        ] {
            let params = GenParams { class: Some(class), ..Default::default() };
            for _ in 0..50 {
                let t = random_term(&mut rng, ctx, &params);
                assert_eq!(t.class(), class);
            }
        }
        let params = GenParams { degree: Some(2), ..Default::default() };
        for _ in 0..50 {
            assert_eq!(random_term(&mut rng, ctx, &params).degree(), 2);
        }
    }

    #[test]
    fn same_seed_same_element() {
        let ctx = Context::new(3, 2, 4).unwrap();
        let params = GenParams::default();
        let a = random_element(&mut ChaCha8Rng::seed_from_u64(42), ctx, &params);
        let b = random_element(&mut ChaCha8Rng::seed_from_u64(42), ctx, &params);
        assert_eq!(a, b);
    }
}
