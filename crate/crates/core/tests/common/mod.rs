#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tame3::analysis::{phi_over_components, PolyInY};
use tame3::forms::{differential, wedge11};
use tame3::complex::{eval_word, inner_resonance, spf_check, Automorphism, Line, Spf, Vertex3};
use tame3::reduction::{elementary_search, ReductionStep, SearchBudget};
use tame3::io::autfile::parse_automorphism;
use tame3::io::{gen_tame, GeneratorSpec};
use tame3::linalg::affine_coords;
use tame3::poly::{q, Exp, Poly, Q};

pub const CUBIC: &str = include_str!("../../fixtures/cubic_k.auto");
pub const QUINTIC: &str = include_str!("../../fixtures/quintic_k.auto");
pub const NAGATA: &str = include_str!("../../fixtures/nagata.auto");

pub fn fixture(src: &str) -> Automorphism {
    parse_automorphism(src).expect("fixture parses")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random word with length in `1..=8` and elementary degree at most 4.
pub fn random_automorphism(seed: u64) -> Automorphism {
    let len = 1 + (seed % 8) as usize;
    eval_word(&gen_tame(&GeneratorSpec::new(seed, len))).unwrap()
}

/// Random word whose components stay below total degree 6.
pub fn small_automorphism(seed: u64) -> Automorphism {
    let spec = GeneratorSpec { max_total_degree: 6, ..GeneratorSpec::new(seed, 1 + (seed % 6) as usize) };
    eval_word(&gen_tame(&spec)).unwrap()
}

pub fn random_poly(r: &mut ChaCha8Rng, max_deg: u32, terms: usize) -> Poly {
    let mut p = Poly::zero();
    for _ in 0..terms {
        let e = Exp([0, 1, 2].map(|_| r.gen_range(0..=max_deg)));
        if e.total() > max_deg as u64 {
            continue;
        }
        p.add_term(e, &q(r.gen_range(-4..=4)));
    }
    p
}

/// Dense product on exponent maps, used as an independent check of `Poly`
/// multiplication and substitution.
pub type Dense = BTreeMap<[u32; 3], Q>;

pub fn dense(p: &Poly) -> Dense {
    p.terms_asc().map(|(e, c)| (e.0, c.clone())).collect()
}

pub fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let mut out = Dense::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
            *out.entry(e).or_insert_with(Q::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn dense_add(a: &Dense, b: &Dense) -> Dense {
    let mut out = a.clone();
    for (e, c) in b {
        *out.entry(*e).or_insert_with(Q::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn dense_pow(a: &Dense, k: u32) -> Dense {
    let mut out: Dense = [([0, 0, 0], Q::one())].into_iter().collect();
    for _ in 0..k {
        out = dense_mul(&out, a);
    }
    out
}

/// `p(t1, t2, t3)` by summing monomials, one power at a time.
pub fn dense_substitute(p: &Poly, t: &[Poly; 3]) -> Dense {
    let dt = [dense(&t[0]), dense(&t[1]), dense(&t[2])];
    let mut out = Dense::new();
    for (e, c) in p.terms_asc() {
        let mut m: Dense = [([0, 0, 0], c.clone())].into_iter().collect();
        for i in 0..3 {
            m = dense_mul(&m, &dense_pow(&dt[i], e.0[i]));
        }
        out = dense_add(&out, &m);
    }
    out
}

/// Normal vector of `line` in the coordinates `(top, mid, low)` of `v`.
pub fn normal_of(v: &Vertex3, line: &Line) -> [Q; 3] {
    let t = v.triangle();
    let basis = [&t.top, &t.mid, &t.low];
    let [a, b] = line.rep().clone().map(|p| affine_coords(&p, &basis).expect("line lies in v"));
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub fn parallel(a: &[Q; 3], b: &[Q; 3]) -> bool {
    (0..3).all(|i| (0..3).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
}

/// Integer normals in `[-r, r]^3`, one per direction.
pub fn integer_normals(r: i64) -> Vec<[Q; 3]> {
    let mut out: Vec<[Q; 3]> = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                if (a, b, c) == (0, 0, 0) {
                    continue;
                }
                let n = [q(a), q(b), q(c)];
                if !out.iter().any(|m| parallel(m, &n)) {
                    out.push(n);
                }
            }
        }
    }
    out
}

/// `Π (y − r)` over the given roots.
pub fn from_roots(roots: &[Poly]) -> PolyInY {
    let mut coeffs: Vec<Poly> = vec![Poly::one()];
    for r in roots {
        let mut next = vec![Poly::zero(); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - &(c * r);
        }
        coeffs = next;
    }
    PolyInY::new(coeffs.into_iter().enumerate().map(|(i, c)| (i as u32, c)))
}

/// Order of `s = 1` as a root of `τ(s) = Σ a_i λ^i s^i`, where the top
/// component is `Σ a_i x^{μ_i} y^i` and `ḡ = λ x^e`. Repeated synthetic
/// division by `s − 1`.
pub fn root_order_oracle(top: &PolyInY, g: &Poly) -> u32 {
    let lam = g.top_term().unwrap().coeff;
    let n = top.y_degree().unwrap() as usize;
    let mut tau = vec![Q::zero(); n + 1];
    for (i, c) in top.coeffs() {
        let a = c.top_term().unwrap().coeff;
        tau[*i as usize] = a * num_traits::pow(lam.clone(), *i as usize);
    }
    let mut order = 0;
    loop {
        // Horner at 1 with the quotient kept
        let mut quot = vec![Q::zero(); tau.len().saturating_sub(1)];
        let mut acc = Q::zero();
        for k in (0..tau.len()).rev() {
            acc = &acc + &tau[k];
            if k > 0 {
                quot[k - 1] = acc.clone();
            }
        }
        if !acc.is_zero() || tau.len() <= 1 {
            return order;
        }
        order += 1;
        tau = quot;
    }
}

/// Instances for the parachute suite: `(components, φ, forced drop)`.
pub fn parachute_instances() -> Vec<(Vec<Poly>, PolyInY, bool)> {
    let mut r = rng(7);
    let mut out = Vec::new();
    // random words with a random φ(y, z, w)
    for seed in 0..250u64 {
        let f = small_automorphism(1000 + seed).components.to_vec();
        let phi_yzw = random_poly(&mut r, 3, 4) + Poly::var(0).pow(r.gen_range(1..=3));
        out.push((f.clone(), phi_over_components(&phi_yzw, &f), false));
    }
    // y² − z³ at (a³ + b, a² + c)
    for seed in 0..130u64 {
        let a = small_automorphism(2000 + seed).components[r.gen_range(0..3)].clone();
        let b = random_poly(&mut r, 2, 2);
        let c = random_poly(&mut r, 2, 2);
        let f = vec![a.pow(3) + b, a.pow(2) + c];
        if wedge11(&differential(&f[0]), &differential(&f[1])).is_zero() {
            continue;
        }
        let phi = phi_over_components(&(Poly::var(0).pow(2) - Poly::var(1).pow(3)), &f);
        out.push((f, phi, true));
    }
    // r = 3 with (F1³ + F2, F1² + F3, F2) and φ = y² − z³ + w·(…)
    for seed in 0..130u64 {
        let [a, b, c] = small_automorphism(3000 + seed).components;
        let f = vec![a.pow(3) + &b, a.pow(2) + &c, b];
        let extra = random_poly(&mut r, 2, 2).substitute(&[Poly::var(1), Poly::var(2), Poly::var(1)]);
        let phi_yzw = Poly::var(0).pow(2) - Poly::var(1).pow(3) + &Poly::var(2) * &extra;
        let phi = phi_over_components(&phi_yzw, &f);
        out.push((f, phi, true));
    }
    // (y − z^j)^k at (F1 + F2^j, F2) with deg F2^j > deg F1
    for seed in 0..60u64 {
        let [a, b, _] = small_automorphism(4000 + seed).components;
        let mut j = 1;
        while b.pow(j).deg() <= a.deg() {
            j += 1;
        }
        let f = vec![&a + &b.pow(j), b.clone()];
        let k = r.gen_range(1..=3);
        out.push((f, from_roots(&vec![b.pow(j); k]), true));
    }
    out.retain(|(_, phi, _)| !phi.is_zero());
    out
}


/// The four structural checks on an elementary K-reduction step.
#[derive(Debug)]
pub struct KChecks {
    pub spf: Option<Spf>,
    /// No elementary reduction of the source with another center, over the
    /// triangle lines and the lines with normals in `[-1, 1]^3`.
    pub unique_center: bool,
    /// No line with normal in `[-2, 2]^3` has inner resonance.
    pub no_inner_resonance: bool,
    /// `d` over the lines with normals in `[-2, 2]^3`: exactly three values,
    /// the minimum only at the center.
    pub three_d_values: bool,
}

impl KChecks {
    pub fn all(&self) -> bool {
        self.spf.is_some() && self.unique_center && self.no_inner_resonance && self.three_d_values
    }
}

pub fn k_checks(step: &ReductionStep) -> KChecks {
    let v = &step.source;
    let spf = spf_check(&step.pivot, &step.center, v).unwrap();
    let budget = SearchBudget::default();
    let mut others: Vec<Line> = v.triangle_lines().into_iter().map(|(l, _)| l).collect();
    others.extend(integer_normals(1).iter().map(|n| v.line_with_normal(n).unwrap()));
    let unique_center = others
        .iter()
        .filter(|l| **l != step.center)
        .all(|l| elementary_search(v, l, &budget).unwrap().is_none());
    let normals = integer_normals(2);
    let no_inner_resonance = normals.iter().all(|n| !inner_resonance(&v.line_with_normal(n).unwrap()));
    let nc = normal_of(v, &step.center);
    let mut values: Vec<_> = normals.iter().chain(std::iter::once(&nc)).map(|n| (v.d_with_normal(n), n.clone())).collect();
    values.sort_by(|a, b| a.0.cmp(&b.0));
    let mut distinct: Vec<_> = values.iter().map(|(d, _)| *d).collect();
    distinct.dedup();
    let min = distinct[0];
    let three_d_values = distinct.len() == 3
        && values.iter().filter(|(d, _)| *d == min).all(|(_, n)| parallel(n, &nc));
    KChecks { spf, unique_center, no_inner_resonance, three_d_values }
}
