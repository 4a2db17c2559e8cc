//! Seeded random tame words. The generator is ChaCha8 seeded with
//! `seed_from_u64`, so words are reproducible across platforms.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{Generator, TameWord};
use crate::linalg::invert3;
use crate::poly::{q, qf, Exp, Poly, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub seed: u64,
    pub length: usize,
    /// Cap on the total degree of each elementary `P`.
    pub max_elem_degree: u32,
    /// Integer coefficients lie in `[-coeff_bound, coeff_bound]`;
    /// denominators are at most `coeff_bound`.
    pub coeff_bound: i64,
    /// Cap on the total degree of the evaluated word; elementary degrees are
    /// lowered to respect it.
    pub max_total_degree: u32,
}

impl GeneratorSpec {
    pub fn new(seed: u64, length: usize) -> Self {
        GeneratorSpec { seed, length, max_elem_degree: 4, coeff_bound: 3, max_total_degree: 24 }
    }
}

fn coeff(rng: &mut ChaCha8Rng, bound: i64) -> Q {
    let bound = bound.max(1);
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-bound..=bound);
    }
    if bound > 1 && rng.gen_ratio(1, 4) {
        qf(n, rng.gen_range(2..=bound))
    } else {
        q(n)
    }
}

fn affine(rng: &mut ChaCha8Rng, bound: i64) -> Generator {
    loop {
        let mut perm = [0usize, 1, 2];
        perm.shuffle(rng);
        let mut m: [[Q; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| q((perm[i] == j) as i64)));
        if rng.gen_bool(0.5) {
            let i = rng.gen_range(0..3);
            let j = (i + rng.gen_range(1..3)) % 3;
            m[i][j] += coeff(rng, bound);
        }
        let t = std::array::from_fn(|_| if rng.gen_bool(0.5) { q(0) } else { q(rng.gen_range(-bound..=bound)) });
        if invert3(&m).is_some() {
            return Generator::Affine { matrix: m, translation: t };
        }
    }
}

fn monomial_of_degree(rng: &mut ChaCha8Rng, others: [usize; 2], d: u32) -> Exp {
    let a = rng.gen_range(0..=d);
    let mut e = [0u32; 3];
    e[others[0]] = a;
    e[others[1]] = d - a;
    Exp(e)
}

fn elementary(rng: &mut ChaCha8Rng, index: usize, degree: u32, bound: i64) -> Generator {
    let others = match index {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    };
    loop {
        let mut p = Poly::monomial(coeff(rng, bound), monomial_of_degree(rng, others, degree));
        for _ in 0..rng.gen_range(0..=2) {
            let d = rng.gen_range(1..=degree);
            p = p + Poly::monomial(coeff(rng, bound), monomial_of_degree(rng, others, d));
        }
        if !p.is_constant() {
            return Generator::Elementary { index, p };
        }
    }
}

fn total_degree(f: &[Poly; 3]) -> u64 {
    f.iter().map(|c| c.lead_exp().map_or(0, |e| e.total())).max().unwrap_or(0)
}

/// Alternates affine and elementary factors, starting with either.
pub fn gen_tame(spec: &GeneratorSpec) -> TameWord {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut factors = Vec::with_capacity(spec.length);
    let mut f = [Poly::var(0), Poly::var(1), Poly::var(2)];
    let mut elem_next = rng.gen_bool(0.5);
    for _ in 0..spec.length {
        let g = if elem_next {
            let index = rng.gen_range(0..3);
            let mut d = rng.gen_range(2..=spec.max_elem_degree.max(2));
            loop {
                let g = elementary(&mut rng, index, d, spec.coeff_bound);
                let m = g.as_map();
                let next = f.clone().map(|c| c.substitute(&m));
                if total_degree(&next) <= spec.max_total_degree as u64 || d == 1 {
                    break g;
                }
                d -= 1;
            }
        } else {
            affine(&mut rng, spec.coeff_bound)
        };
        let m = g.as_map();
        f = f.map(|c| c.substitute(&m));
        factors.push(g);
        elem_next = !elem_next;
    }
    TameWord::new(factors)
}
