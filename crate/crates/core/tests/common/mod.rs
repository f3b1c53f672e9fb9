//! Random well-formed recipes and a Betti-number oracle shared by test targets.

#![allow(dead_code)]

use rand::Rng;
use sgm_core::{BuilderRecipe, CoefficientSpec};

pub const MAX_DIM: u32 = 10;
pub const MAX_TOTAL_RANK: usize = 64;

/// Betti numbers computed from the recipe alone, without building a ring.
pub fn betti(recipe: &BuilderRecipe) -> Vec<usize> {
    use BuilderRecipe::*;
    match recipe {
        Sphere(k) => {
            let mut b = vec![0; *k as usize + 1];
            b[0] = 1;
            b[*k as usize] += 1;
            b
        }
        Torus(k) => {
            let k = *k as usize;
            let mut row = vec![1usize];
            for _ in 0..k {
                let mut next = vec![1; row.len() + 1];
                for i in 1..row.len() {
                    next[i] = row[i - 1] + row[i];
                }
                row = next;
            }
            row
        }
        RealProjective(m) => vec![1; *m as usize + 1],
        ComplexProjective(k) => (0..=2 * k).map(|d| usize::from(d % 2 == 0)).collect(),
        Product(a, b) => {
            let (ba, bb) = (betti(a), betti(b));
            let mut out = vec![0; ba.len() + bb.len() - 1];
            for (i, x) in ba.iter().enumerate() {
                for (j, y) in bb.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        }
        ConnectedSum(a, b) => {
            let (ba, bb) = (betti(a), betti(b));
            let top = ba.len() - 1;
            (0..=top).map(|d| if d == 0 || d == top { 1 } else { ba[d] + bb[d] }).collect()
        }
    }
}

fn atom<R: Rng>(rng: &mut R, d: u32, mod2: bool) -> BuilderRecipe {
    let mut options = vec![BuilderRecipe::Sphere(d)];
    if d <= 6 {
        options.push(BuilderRecipe::Torus(d));
    }
    if d % 2 == 0 {
        options.push(BuilderRecipe::ComplexProjective(d / 2));
    }
    if mod2 {
        options.push(BuilderRecipe::RealProjective(d));
    }
    options.swap_remove(rng.gen_range(0..options.len()))
}

fn recipe_of_dim<R: Rng>(rng: &mut R, d: u32, depth: u32, mod2: bool) -> BuilderRecipe {
    let choice = if depth == 0 { 0 } else { rng.gen_range(0..3) };
    match choice {
        1 if d >= 2 => {
            let a = rng.gen_range(1..d);
            BuilderRecipe::product(
                recipe_of_dim(rng, a, depth - 1, mod2),
                recipe_of_dim(rng, d - a, depth - 1, mod2),
            )
        }
        2 if d >= 2 => BuilderRecipe::connected_sum(
            recipe_of_dim(rng, d, depth - 1, mod2),
            recipe_of_dim(rng, d, depth - 1, mod2),
        ),
        _ => atom(rng, d, mod2),
    }
}

/// A random recipe of dimension `2..=MAX_DIM` that builds over `coeff`
/// (projective spaces `RP` only in characteristic 2) with bounded total rank.
pub fn random_recipe<R: Rng>(rng: &mut R, coeff: CoefficientSpec) -> BuilderRecipe {
    let mod2 = coeff == CoefficientSpec::MOD2;
    loop {
        let d = rng.gen_range(2..=MAX_DIM);
        let r = recipe_of_dim(rng, d, 3, mod2);
        if betti(&r).iter().sum::<usize>() <= MAX_TOTAL_RANK {
            return r;
        }
    }
}

pub fn coefficient_corpus() -> [CoefficientSpec; 2] {
    [CoefficientSpec::Rationals, CoefficientSpec::MOD2]
}
