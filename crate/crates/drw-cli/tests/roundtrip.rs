//! The canonical text form and the JSON form both round-trip through the
//! parser for arbitrary elements.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use drw::random::{random_element, GenParams};
use drw::Context;
use drw_cli::expr::parse_element;
use drw_cli::json::{from_dto, to_dto, ElementDto};

fn contexts() -> Vec<Context> {
    vec![
        Context::new(2, 1, 6).unwrap(),
        Context::new(2, 2, 6).unwrap(),
        Context::new(3, 3, 4).unwrap(),
    ]
}

proptest! {
    #[test]
    fn text_rendering_round_trips(seed in any::<u64>(), pick in 0usize..3) {
        let ctx = contexts()[pick];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = GenParams { max_terms: 4, ..Default::default() };
        let x = random_element(&mut rng, ctx, &params);
        let back = parse_element(ctx, &x.to_string()).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn json_round_trips(seed in any::<u64>(), pick in 0usize..3) {
        let ctx = contexts()[pick];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = GenParams { max_terms: 4, ..Default::default() };
        let x = random_element(&mut rng, ctx, &params);
        let text = serde_json::to_string(&to_dto(&x)).unwrap();
        let dto: ElementDto = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(from_dto(&dto).unwrap(), x);
    }
}

#[test]
fn zero_renders_and_parses() {
    let ctx = Context::new(2, 2, 6).unwrap();
    let zero = drw::DrwElement::zero(ctx);
    assert_eq!(zero.to_string(), "0");
    assert_eq!(parse_element(ctx, "0").unwrap(), zero);
}
