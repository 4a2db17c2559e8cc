//! Virtual degrees, top components, multiplicity, and the degree
//! inequalities (Parachute, Two Maxima) as executable checks.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::forms::{differential, wedge11, wedge21, OneForm};
use crate::poly::{q, Exp, MultiDegree, Poly, SDeg, Q};

/// `φ = Σ P_i y^i` with polynomial coefficients in `x1, x2, x3`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PolyInY {
    coeffs: BTreeMap<u32, Poly>,
}

impl PolyInY {
    pub fn new<I: IntoIterator<Item = (u32, Poly)>>(it: I) -> Self {
        let mut s = PolyInY::default();
        for (i, p) in it {
            s.add_coeff(i, &p);
        }
        s
    }

    fn add_coeff(&mut self, i: u32, p: &Poly) {
        let e = self.coeffs.entry(i).or_default();
        *e = &*e + p;
        if e.is_zero() {
            self.coeffs.remove(&i);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, Poly> {
        &self.coeffs
    }

    pub fn y_degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn derivative(&self) -> PolyInY {
        PolyInY {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(i, _)| **i > 0)
                .map(|(i, p)| (i - 1, p.scale(&q(*i as i64))))
                .collect(),
        }
    }

    /// `φ(g)` by Horner's rule.
    pub fn eval(&self, g: &Poly) -> Poly {
        let Some(top) = self.y_degree() else { return Poly::zero() };
        let mut acc = Poly::zero();
        for i in (0..=top).rev() {
            acc = &acc * g;
            if let Some(p) = self.coeffs.get(&i) {
                acc = &acc + p;
            }
        }
        acc
    }
}

/// `φ = Σ c_{ij} y^i z^j` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct BiPoly {
    coeffs: BTreeMap<(u32, u32), Q>,
}

impl BiPoly {
    pub fn new<I: IntoIterator<Item = ((u32, u32), Q)>>(it: I) -> Self {
        let mut s = BiPoly::default();
        for (k, c) in it {
            s.add_term(k, &c);
        }
        s
    }

    pub fn add_term(&mut self, k: (u32, u32), c: &Q) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(k).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeffs(&self) -> &BTreeMap<(u32, u32), Q> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_affine(&self) -> bool {
        self.coeffs.keys().all(|(i, j)| i + j <= 1)
    }

    /// Reads `x1 ↦ y`, `x2 ↦ z` from a polynomial free of `x3`.
    pub fn from_poly(p: &Poly) -> Option<BiPoly> {
        let mut b = BiPoly::default();
        for (e, c) in p.terms_asc() {
            if e.0[2] != 0 {
                return None;
            }
            b.add_term((e.0[0], e.0[1]), c);
        }
        Some(b)
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_terms(self.coeffs.iter().map(|((i, j), c)| (Exp([*i, *j, 0]), c.clone())))
    }

    pub fn eval(&self, g: &Poly, h: &Poly) -> Poly {
        self.to_poly().substitute(&[g.clone(), h.clone(), Poly::zero()])
    }

    /// `φ(y, h)` as an element of `k[x][y]`.
    pub fn curry(&self, h: &Poly) -> PolyInY {
        let mut out = PolyInY::default();
        for ((i, j), c) in &self.coeffs {
            out.add_coeff(*i, &h.pow(*j).scale(c));
        }
        out
    }
}

impl std::fmt::Display for BiPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::poly::fmt_poly_in(&self.to_poly(), ["y", "z", "w"]))
    }
}

fn i_times(i: u32, d: &MultiDegree) -> MultiDegree {
    if i == 0 {
        MultiDegree::new(0, 0, 0)
    } else {
        d.times(i)
    }
}

pub fn virtual_degree_y(phi: &PolyInY, g: &Poly) -> Result<MultiDegree> {
    if phi.is_zero() {
        return Err(Error::EmptyInput);
    }
    let dg = g.deg();
    Ok(phi.coeffs.iter().map(|(i, p)| p.deg().plus(&i_times(*i, &dg))).max().unwrap())
}

pub fn virtual_degree_yz(phi: &BiPoly, g: &Poly, h: &Poly) -> Result<MultiDegree> {
    if phi.is_zero() {
        return Err(Error::EmptyInput);
    }
    let (dg, dh) = (g.deg(), h.deg());
    Ok(phi.coeffs.keys().map(|(i, j)| i_times(*i, &dg).plus(&i_times(*j, &dh))).max().unwrap())
}

pub fn top_component(phi: &PolyInY, g: &Poly) -> Result<PolyInY> {
    let v = virtual_degree_y(phi, g)?;
    let dg = g.deg();
    Ok(PolyInY::new(phi.coeffs.iter().filter_map(|(i, p)| {
        if p.deg().plus(&i_times(*i, &dg)) == v {
            let t = p.top_term().ok()?;
            Some((*i, Poly::monomial(t.coeff, t.exp)))
        } else {
            None
        }
    })))
}

/// Smallest `m` with `deg_virt φ^(m)(g) = deg φ^(m)(g)`.
pub fn multiplicity(phi: &PolyInY, g: &Poly) -> Result<u32> {
    if phi.is_zero() {
        return Err(Error::EmptyInput);
    }
    let mut cur = phi.clone();
    let mut m = 0;
    loop {
        let v = virtual_degree_y(&cur, g)?;
        if v == cur.eval(g).deg() {
            return Ok(m);
        }
        cur = cur.derivative();
        m += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParachuteReport {
    pub lhs: MultiDegree,
    pub rhs: SDeg,
    pub multiplicity: u32,
    pub virtual_degree: MultiDegree,
    pub holds: bool,
}

/// Substitutes `z ↦ f2`, `w ↦ f3` in the coefficients of a polynomial in
/// `(y, z, w)` (stored in the `x1, x2, x3` slots).
pub fn phi_over_components(phi_yzw: &Poly, f: &[Poly]) -> PolyInY {
    let z = f.get(1).cloned().unwrap_or_default();
    let w = f.get(2).cloned().unwrap_or_default();
    let mut by_i: BTreeMap<u32, Poly> = BTreeMap::new();
    for (e, c) in phi_yzw.terms_asc() {
        by_i.entry(e.0[0]).or_default().add_term(Exp([0, e.0[1], e.0[2]]), c);
    }
    PolyInY::new(
        by_i.into_iter().map(|(i, p)| (i, p.substitute(&[Poly::zero(), z.clone(), w.clone()]))),
    )
}

/// `deg φ(f1) ≥ deg_virt φ(f1) − m(φ,f1)(deg ω + deg f1 − deg df1∧ω)`, with
/// `ω = df2` (r = 2) or `df2∧df3` (r = 3). The coefficients of `φ` must lie
/// in `k[f2, …, fr]`.
pub fn parachute_check(f: &[Poly], phi: &PolyInY) -> Result<ParachuteReport> {
    if phi.is_zero() || !(f.len() == 2 || f.len() == 3) {
        return Err(Error::EmptyInput);
    }
    let df: Vec<OneForm> = f.iter().map(differential).collect();
    let (deg_omega, deg_top) = if f.len() == 2 {
        let w = &df[1];
        (w.deg(), wedge11(&df[0], w).deg())
    } else {
        let w = wedge11(&df[1], &df[2]);
        (w.deg(), wedge21(&w, &df[0]).deg())
    };
    if deg_top == MultiDegree::NegInfinity {
        return Err(Error::DependentInputs);
    }
    let virt = virtual_degree_y(phi, &f[0])?;
    let m = multiplicity(phi, &f[0])?;
    let lhs = phi.eval(&f[0]).deg();
    let sd = |d: MultiDegree| d.sdeg().expect("finite degree");
    let drop = sd(deg_omega) + sd(f[0].deg()) - sd(deg_top);
    let rhs = sd(virt) - drop.scale(m as i64);
    let holds = rhs.cmp_deg(&lhs) != std::cmp::Ordering::Greater;
    Ok(ParachuteReport { lhs, rhs, multiplicity: m, virtual_degree: virt, holds })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoMaximaReport {
    /// `deg f_i + deg df_j ∧ df_k` for i = 1, 2, 3.
    pub values: [MultiDegree; 3],
    pub max_count: usize,
    pub holds: bool,
}

pub fn two_maxima_check(f: &[Poly; 3]) -> TwoMaximaReport {
    let df: Vec<OneForm> = f.iter().map(differential).collect();
    let w = |a: usize, b: usize| wedge11(&df[a], &df[b]).deg();
    let values = [
        f[0].deg().plus(&w(1, 2)),
        f[1].deg().plus(&w(0, 2)),
        f[2].deg().plus(&w(0, 1)),
    ];
    let max = *values.iter().max().unwrap();
    let max_count = values.iter().filter(|v| **v == max).count();
    TwoMaximaReport { values, max_count, holds: max_count >= 2 }
}

/// For `d1 ≥ d2`: the coprime `p ≤ q` with `p·d1 = q·d2` and `δ` with
/// `d1 = qδ`, `d2 = pδ`, when the degrees are commensurable.
pub fn pq_resonance(d1: &MultiDegree, d2: &MultiDegree) -> Option<(u32, u32, Exp)> {
    let (a, b) = (d1.exp()?, d2.exp()?);
    let k = (0..3).find(|&k| a.0[k] != 0)?;
    if b.0[k] == 0 {
        return None;
    }
    let (ak, bk) = (a.0[k] as u64, b.0[k] as u64);
    let g = ak.gcd(&bk);
    let (p, qq) = (bk / g, ak / g);
    if (0..3).any(|i| p * a.0[i] as u64 != qq * b.0[i] as u64) {
        return None;
    }
    let delta = Exp([a.0[0] / qq as u32, a.0[1] / qq as u32, a.0[2] / qq as u32]);
    Some((p as u32, qq as u32, delta))
}

/// `d1, d2` pairwise Z-independent (not rationally proportional).
pub fn z_independent(d1: &Exp, d2: &Exp) -> bool {
    let (a, b) = (d1.0.map(|x| x as i64), d2.0.map(|x| x as i64));
    (0..3).any(|i| (0..3).any(|j| a[i] * b[j] != a[j] * b[i]))
}

/// `target ∈ N·d1 + N·d2`, enumerating on total degree.
pub fn in_nn_span(target: &Exp, d1: &Exp, d2: &Exp) -> Option<(u32, u32)> {
    let (t, t1, t2) = (target.total(), d1.total(), d2.total());
    if t1 == 0 || t2 == 0 {
        return None;
    }
    for m in 0..=t / t1 {
        let rest = t - m * t1;
        if rest % t2 != 0 {
            continue;
        }
        let n = rest / t2;
        if d1.scale(m as u32).add(&d2.scale(n as u32)) == *target {
            return Some((m as u32, n as u32));
        }
    }
    None
}

/// `target ∈ N·d`.
pub fn in_n_multiples(target: &Exp, d: &Exp) -> Option<u32> {
    let (t, td) = (target.total(), d.total());
    if td == 0 || t % td != 0 {
        return None;
    }
    let k = (t / td) as u32;
    (d.scale(k) == *target).then_some(k)
}

/// Lower bound `p·deg f1 − deg f1 − deg f2 + deg df1∧df2` on the degree of
/// any `φ(f1, f2)` with a strict virtual drop.
pub fn drop_lower_bound(d1: &MultiDegree, d2: &MultiDegree, d12: &MultiDegree, p: u32) -> Option<SDeg> {
    let (a, b, w) = (d1.sdeg()?, d2.sdeg()?, d12.sdeg()?);
    Some(a.scale(p as i64 - 1) - b + w)
}
