mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sgm_core::admissibility::{derive_sp, verify_derivation};
use sgm_core::obstruction::{cohp_check, obstructed_max, random_sampling_oracle, sample_with_degrees};
use sgm_core::{build, compute_spectrum, BasisClass, CoefficientSpec, ManifoldModel, Status};

use common::random_recipe;

fn corpus_model(seed: u64, mod2: bool) -> ManifoldModel {
    let coeff = if mod2 { CoefficientSpec::MOD2 } else { CoefficientSpec::Rationals };
    let recipe = random_recipe(&mut ChaCha8Rng::seed_from_u64(seed), coeff);
    build(&recipe, coeff).unwrap()
}

/// Largest n0 with a nonzero product of basis classes, found by trying every
/// multiset of positive-degree classes with degree sum at most m.
fn brute_force_n_max(model: &ManifoldModel) -> u32 {
    let ring = model.ring();
    let m = model.dimension();
    let classes: Vec<BasisClass> = ring.basis().classes().filter(|c| c.degree > 0).collect();
    let mut best = 0;
    let mut stack: Vec<(usize, Vec<BasisClass>)> = vec![(0, Vec::new())];
    while let Some((start, seq)) = stack.pop() {
        if !seq.is_empty() {
            let sum: u32 = seq.iter().map(|c| c.degree).sum();
            let max = seq.iter().map(|c| c.degree).max().unwrap();
            let elems: Vec<_> = seq.iter().map(|&c| ring.basis_element(c)).collect();
            if !ring.product_of_sequence(&elems).unwrap().is_zero() {
                // qualifies for every n0 <= min(sum, m - max)
                best = best.max(sum.min(m - max));
            }
        }
        let sum: u32 = seq.iter().map(|c| c.degree).sum();
        for i in start..classes.len() {
            if sum + classes[i].degree <= m {
                let mut next = seq.clone();
                next.push(classes[i]);
                stack.push((i, next));
            }
        }
    }
    best.min(m - 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn obstructed_max_matches_brute_force(seed in any::<u64>(), mod2 in any::<bool>()) {
        let model = corpus_model(seed, mod2);
        prop_assume!(model.ring().basis().total_rank() <= 16);
        prop_assert_eq!(obstructed_max(&model).unwrap(), brute_force_n_max(&model));
    }

    #[test]
    fn obstruction_is_monotone_and_replays(seed in any::<u64>(), mod2 in any::<bool>()) {
        let model = corpus_model(seed, mod2);
        let n_max = obstructed_max(&model).unwrap();
        for n0 in 1..model.dimension() {
            let w = cohp_check(&model, n0).unwrap();
            prop_assert_eq!(w.is_some(), n0 <= n_max);
            if let Some(w) = w {
                prop_assert!(w.replay(&model));
                prop_assert!(w.degrees().iter().all(|&d| d >= 1 && d <= model.dimension() - n0));
                prop_assert!(w.total_degree >= n0);
            }
        }
    }

    #[test]
    fn sampling_never_beats_the_exact_search(seed in any::<u64>(), mod2 in any::<bool>()) {
        let model = corpus_model(seed, mod2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n_max = obstructed_max(&model).unwrap();
        for n0 in n_max + 1..model.dimension() {
            prop_assert!(random_sampling_oracle(&model, n0, 50, &mut rng).unwrap().is_none());
        }
    }

    #[test]
    fn derivations_replay_and_never_overlap(seed in any::<u64>(), mod2 in any::<bool>()) {
        let coeff = if mod2 { CoefficientSpec::MOD2 } else { CoefficientSpec::Rationals };
        let recipe = random_recipe(&mut ChaCha8Rng::seed_from_u64(seed), coeff);
        if let Some(d) = derive_sp(&recipe, coeff).unwrap() {
            prop_assert!(verify_derivation(&d, coeff).is_ok(), "{recipe}");
        }
        let s = compute_spectrum(&recipe, coeff, true).unwrap();
        let obstructed = s.entries.iter().take_while(|e| matches!(e.status, Status::Obstructed(_))).count();
        prop_assert_eq!(obstructed as u32, s.n_max);
        let rest = &s.entries[obstructed..];
        let unknown = rest.iter().take_while(|e| e.status == Status::Unknown).count();
        prop_assert!(rest[unknown..].iter().all(|e| matches!(e.status, Status::Admits(_))));
    }
}

#[test]
fn sampling_finds_witness_degrees_on_atoms() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for m in 1..=8 {
        let mut atoms = vec![sgm_core::BuilderRecipe::Sphere(m), sgm_core::BuilderRecipe::Torus(m)];
        if m % 2 == 0 {
            atoms.push(sgm_core::BuilderRecipe::ComplexProjective(m / 2));
        }
        for recipe in atoms {
            let model = build(&recipe, CoefficientSpec::Rationals).unwrap();
            for n0 in 1..m {
                if let Some(w) = cohp_check(&model, n0).unwrap() {
                    let hit = sample_with_degrees(&model, &w.degrees(), n0, 1000, &mut rng);
                    assert!(hit.is_some(), "{recipe} at {n0}");
                }
            }
        }
    }
}
