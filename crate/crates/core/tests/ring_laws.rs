mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sgm_core::builders::{build_sphere, build_torus, connected_sum, kunneth_product};
use sgm_core::obstruction::{obstructed_max, random_element};
use sgm_core::{build, validate_ring, BuilderRecipe, CoefficientSpec, ManifoldModel};

use common::{betti, random_recipe};

fn corpus_model(seed: u64, mod2: bool) -> (BuilderRecipe, ManifoldModel) {
    let coeff = if mod2 { CoefficientSpec::MOD2 } else { CoefficientSpec::Rationals };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let recipe = random_recipe(&mut rng, coeff);
    let model = build(&recipe, coeff).expect("corpus recipes build");
    (recipe, model)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn builders_produce_valid_rings(seed in any::<u64>(), mod2 in any::<bool>()) {
        let (recipe, model) = corpus_model(seed, mod2);
        let report = validate_ring(model.ring());
        prop_assert!(report.is_valid(), "{recipe}: {:?}", report.violations);
        prop_assert_eq!(model.ring().basis().ranks(), betti(&recipe));
        prop_assert_eq!(model.dimension(), recipe.dimension());
    }

    #[test]
    fn cup_product_laws(seed in any::<u64>(), mod2 in any::<bool>()) {
        let (_, model) = corpus_model(seed, mod2);
        let ring = model.ring();
        let coeff = ring.coeff();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let top = ring.top_degree();
        for _ in 0..8 {
            let (p, q, r) = (rng.gen_range(0..=top), rng.gen_range(0..=top), rng.gen_range(0..=top));
            let x = random_element(ring, p, &mut rng);
            let x2 = random_element(ring, p, &mut rng);
            let y = random_element(ring, q, &mut rng);
            let z = random_element(ring, r, &mut rng);

            let xy = ring.cup(&x, &y).unwrap();
            let yx = ring.cup(&y, &x).unwrap();
            prop_assert_eq!(&xy, &ring.scale(&coeff.sign(p as u64 * q as u64), &yx).unwrap());

            let left = ring.cup(&xy, &z).unwrap();
            let right = ring.cup(&x, &ring.cup(&y, &z).unwrap()).unwrap();
            prop_assert_eq!(left, right);

            prop_assert_eq!(ring.cup(&ring.unit(), &x).unwrap(), x.clone());
            prop_assert_eq!(ring.cup(&x, &ring.unit()).unwrap(), x.clone());

            let sum_first = ring.cup(&ring.add(&x, &x2).unwrap(), &y).unwrap();
            let sum_after = ring.add(&xy, &ring.cup(&x2, &y).unwrap()).unwrap();
            prop_assert_eq!(sum_first, sum_after);
        }
    }

    #[test]
    fn euler_characteristic_is_multiplicative_and_additive(a in any::<u64>(), b in any::<u64>()) {
        let (_, m1) = corpus_model(a, true);
        let (_, m2) = corpus_model(b, true);
        if m1.dimension() + m2.dimension() <= 12 {
            let p = kunneth_product(&m1, &m2).unwrap();
            prop_assert_eq!(p.euler_characteristic(), m1.euler_characteristic() * m2.euler_characteristic());
        }
        let m = m1.dimension();
        let (_, m2) = corpus_model(b, true);
        if m2.dimension() == m {
            let s = connected_sum(&m1, &m2).unwrap();
            let sphere = 1 + if m % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(s.euler_characteristic(), m1.euler_characteristic() + m2.euler_characteristic() - sphere);
        }
    }

    #[test]
    fn product_order_does_not_change_invariants(a in any::<u64>(), b in any::<u64>(), mod2 in any::<bool>()) {
        let (_, m1) = corpus_model(a, mod2);
        let (_, m2) = corpus_model(b, mod2);
        prop_assume!(m1.dimension() + m2.dimension() <= 10);
        let p = kunneth_product(&m1, &m2).unwrap();
        let q = kunneth_product(&m2, &m1).unwrap();
        prop_assert_eq!(p.ring().basis().ranks(), q.ring().basis().ranks());
        prop_assert_eq!(obstructed_max(&p).unwrap(), obstructed_max(&q).unwrap());
    }
}

#[test]
fn torus_is_iterated_circle_product() {
    for coeff in [CoefficientSpec::Integers, CoefficientSpec::Rationals, CoefficientSpec::MOD2] {
        let circle = build_sphere(1, coeff).unwrap();
        let mut iterated = circle.clone();
        for k in 2..=6 {
            iterated = kunneth_product(&iterated, &circle).unwrap();
            assert_eq!(build_torus(k, coeff).unwrap().ring(), iterated.ring(), "T({k}) over {coeff}");
        }
    }
}

#[test]
fn sphere_products_have_example_rank_table() {
    let triple = build(
        &BuilderRecipe::product(BuilderRecipe::product(BuilderRecipe::Sphere(2), BuilderRecipe::Sphere(2)), BuilderRecipe::Sphere(2)),
        CoefficientSpec::Rationals,
    )
    .unwrap();
    assert_eq!(triple.ring().basis().ranks(), [1, 0, 3, 0, 3, 0, 1]);
}
