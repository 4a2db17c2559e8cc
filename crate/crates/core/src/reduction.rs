//! The reduction engine: bounded elementary search, K-reduction
//! classification, reduction paths to the identity vertex and the
//! non-tameness certificate for vertices whose degrees admit no reduction.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;

use crate::analysis::{drop_lower_bound, in_n_multiples, in_nn_span, pq_resonance, z_independent, BiPoly};
use crate::complex::{
    common_line, inner_resonance, line_attributes, outer_resonance, spf_check, Automorphism, Line, Point, Spf,
    Vertex3, VertexDegrees,
};
use crate::error::{Error, Result};
use crate::forms::{deg_dwedge, differential, independent3, wedge11, TwoForm};
use crate::linalg::{affine_coords, kill_descending, kill_from, reduce_fully};
use crate::poly::{Exp, MultiDegree, Poly, SDeg, Q};

/// Largest `virt_scale` reached by budget doubling.
pub const BUDGET_CEILING: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Candidate products `a^i b^j` are limited to virtual degree at most
    /// `virt_scale` times the top degree of the vertex.
    pub virt_scale: u32,
    /// Maximum number of products in one cancellation system.
    pub support_cap: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { virt_scale: 2, support_cap: 256 }
    }
}

impl SearchBudget {
    pub fn with_scale(virt_scale: u32) -> Self {
        SearchBudget { virt_scale: virt_scale.max(1), ..Default::default() }
    }

    /// Default budget, with `TAME3_BUDGET` overriding the scale.
    pub fn from_env() -> Self {
        match std::env::var("TAME3_BUDGET").ok().and_then(|s| s.trim().parse::<u32>().ok()) {
            Some(n) if n > 0 => SearchBudget::with_scale(n),
            _ => SearchBudget::default(),
        }
    }

    pub fn virt_bound(&self, v: &Vertex3) -> Exp {
        v.triangle().top.lead_exp().unwrap().scale(self.virt_scale)
    }

    fn doubled(&self) -> Self {
        SearchBudget { virt_scale: self.virt_scale * 2, support_cap: self.support_cap * 2 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionKind {
    Elementary,
    SimpleElementary,
    ElementaryK,
    ProperK,
}

impl ReductionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReductionKind::Elementary => "elementary",
            ReductionKind::SimpleElementary => "simple-elementary",
            ReductionKind::ElementaryK => "elementary-K",
            ReductionKind::ProperK => "proper-K",
        }
    }
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One step `source → target`. The target is
/// `⟦c1, c2, h + data(c1, c2)⟧` where `(c1, c2)` is the stored
/// representative of `center` and `h` completes it in the source (in the
/// auxiliary vertex for a proper K-reduction).
#[derive(Clone, Debug)]
pub struct ReductionStep {
    pub kind: ReductionKind,
    pub source: Vertex3,
    pub target: Vertex3,
    pub center: Line,
    pub pivot: Point,
    pub data: BiPoly,
    pub auxiliary: Option<Vertex3>,
}

#[derive(Clone, Debug)]
pub struct ReductionPath {
    pub steps: Vec<ReductionStep>,
    pub terminal: Vertex3,
}

#[derive(Clone, Debug)]
pub struct Attempt {
    pub center: Line,
    pub phase: &'static str,
    pub outcome: &'static str,
}

#[derive(Clone, Debug)]
pub struct NonReducibleReport {
    pub vertex: Vertex3,
    pub degrees: VertexDegrees,
    pub attempts: Vec<Attempt>,
    /// Some search stopped at the budget rather than at an exact obstruction.
    pub budget_limited: bool,
}

impl fmt::Display for NonReducibleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "no reduction found for {}", self.vertex)?;
        writeln!(f, "degrees: {}", self.degrees)?;
        for a in &self.attempts {
            writeln!(f, "  {} center {}: {}", a.phase, a.center, a.outcome)?;
        }
        write!(f, "budget limited: {}", self.budget_limited)
    }
}

#[derive(Clone, Debug)]
pub enum ReduceOutcome {
    Step(ReductionStep),
    NonReducible(NonReducibleReport),
}

#[derive(Clone, Debug)]
pub enum PathError {
    Invalid(Error),
    NonReducible { partial: ReductionPath, report: NonReducibleReport },
    BudgetExceeded { partial: ReductionPath, report: NonReducibleReport, scale: u32 },
}

impl From<Error> for PathError {
    fn from(e: Error) -> Self {
        PathError::Invalid(e)
    }
}

impl fmt::Display for PathError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathError::Invalid(e) => write!(f, "{}", e),
            PathError::NonReducible { partial, report } => {
                write!(f, "non-reducible after {} step(s)\n{}", partial.steps.len(), report)
            }
            PathError::BudgetExceeded { partial, report, scale } => write!(
                f,
                "budget exceeded at scale {} after {} step(s)\n{}",
                scale,
                partial.steps.len(),
                report
            ),
        }
    }
}

/// Cached products `a^i b^j` of a center representative.
struct Products<'a> {
    a: &'a Poly,
    b: &'a Poly,
    da: Exp,
    db: Exp,
    apow: Vec<Poly>,
    bpow: Vec<Poly>,
    cache: HashMap<(u32, u32), Poly>,
}

impl<'a> Products<'a> {
    fn new(a: &'a Poly, b: &'a Poly) -> Self {
        Products {
            a,
            b,
            da: a.lead_exp().unwrap(),
            db: b.lead_exp().unwrap(),
            apow: vec![Poly::one()],
            bpow: vec![Poly::one()],
            cache: HashMap::new(),
        }
    }

    fn virt(&self, i: u32, j: u32) -> Exp {
        self.da.scale(i).add(&self.db.scale(j))
    }

    fn ensure(&mut self, i: u32, j: u32) {
        while self.apow.len() <= i as usize {
            let n = self.apow.last().unwrap() * self.a;
            self.apow.push(n);
        }
        while self.bpow.len() <= j as usize {
            let n = self.bpow.last().unwrap() * self.b;
            self.bpow.push(n);
        }
        let (ap, bp) = (&self.apow, &self.bpow);
        self.cache.entry((i, j)).or_insert_with(|| &ap[i as usize] * &bp[j as usize]);
    }

    fn cached(&self, i: u32, j: u32) -> &Poly {
        &self.cache[&(i, j)]
    }

    fn get(&mut self, i: u32, j: u32) -> &Poly {
        self.ensure(i, j);
        self.cached(i, j)
    }

    /// `(i, j)` with `i·da + j·db = e`, largest `i` first.
    fn exact(&self, e: &Exp) -> Option<(u32, u32)> {
        let imax = if self.da.total() == 0 { 0 } else { e.total() / self.da.total() };
        (0..=imax as u32).rev().find_map(|i| {
            let rest = SDeg::from(*e) - SDeg::from(self.da.scale(i));
            let rest = rest.to_exp()?;
            let j = in_n_multiples(&rest, &self.db).or((rest == Exp::ZERO).then_some(0))?;
            (i + j >= 1).then_some((i, j))
        })
    }
}

/// State of a greedy cancellation `h + P(a, b)`.
struct Greedy {
    h: Poly,
    p: BiPoly,
    truncated: bool,
    budget_limited: bool,
}

/// Cancels the top term of `h` with a single product of exact degree.
fn no_drop_step(g: &mut Greedy, prod: &mut Products) -> bool {
    let Some(e) = g.h.lead_exp() else { return false };
    if e == Exp::ZERO {
        return false;
    }
    let Some((i, j)) = prod.exact(&e) else { return false };
    let lc = g.h.lead_coeff().unwrap().clone();
    let t = prod.get(i, j);
    let c = -(lc / t.lead_coeff().unwrap());
    g.h.add_scaled(t, &c);
    g.p.add_term((i, j), &c);
    true
}

/// Cancels every monomial of `h` of degree at least `deg h` with a
/// combination of products whose virtual degree exceeds `deg h`.
fn drop_step(g: &mut Greedy, prod: &mut Products, bound: &Exp, cap: usize) -> bool {
    let Some(e) = g.h.lead_exp() else { return false };
    let (hi, lo) = if prod.da > prod.db { (prod.da, prod.db) } else { (prod.db, prod.da) };
    let Some((p, _, _)) = pq_resonance(&MultiDegree::Finite(hi), &MultiDegree::Finite(lo)) else {
        return false;
    };
    // a strict virtual drop lands no lower than this
    let d12 = deg_dwedge(prod.a, prod.b);
    if let Some(lb) = drop_lower_bound(&MultiDegree::Finite(hi), &MultiDegree::Finite(lo), &d12, p) {
        if SDeg::from(e) < lb {
            return false;
        }
    }
    let mut support: Vec<(u32, u32)> = Vec::new();
    let imax = bound.total() / prod.da.total().max(1);
    let jmax = bound.total() / prod.db.total().max(1);
    for i in 0..=imax as u32 {
        for j in 0..=jmax as u32 {
            let v = prod.virt(i, j);
            if v > e && v <= *bound {
                support.push((i, j));
            }
        }
    }
    if support.is_empty() {
        g.budget_limited = true;
        return false;
    }
    support.sort_by_key(|&(i, j)| (prod.virt(i, j), i));
    if support.len() > cap {
        support.truncate(cap);
        g.truncated = true;
    }
    // grow the support one virtual degree at a time so that large products
    // are only built when the smaller ones cannot cancel the top
    let mut end = 0;
    while end < support.len() {
        let level = prod.virt(support[end].0, support[end].1);
        while end < support.len() && prod.virt(support[end].0, support[end].1) == level {
            prod.ensure(support[end].0, support[end].1);
            end += 1;
        }
        let sub = &support[..end];
        let maps: Vec<_> = sub.iter().map(|&(i, j)| prod.cached(i, j).terms_map()).collect();
        if let Some(c) = kill_from(g.h.terms_map(), &maps, |k| *k, &e) {
            for (&(i, j), c) in sub.iter().zip(&c) {
                if !c.is_zero() {
                    g.h.add_scaled(prod.cached(i, j), c);
                    g.p.add_term((i, j), c);
                }
            }
            debug_assert!(g.h.lead_exp().map_or(true, |n| n < e));
            return true;
        }
    }
    g.budget_limited = true;
    false
}

#[derive(Clone, Debug)]
pub struct ElementaryFound {
    /// Over the stored representative of the center.
    pub p: BiPoly,
    pub target: Vertex3,
    /// False when a cancellation system was truncated by the support cap.
    pub optimal: bool,
}

struct SearchResult {
    found: Option<ElementaryFound>,
    budget_limited: bool,
}

fn search(v: &Vertex3, center: &Line, budget: &SearchBudget, allow_drop: bool) -> Result<SearchResult> {
    let h = v.complement(center)?;
    let [a, b] = center.rep();
    let mut prod = Products::new(a, b);
    let mut g = Greedy { h: h.clone(), p: BiPoly::default(), truncated: false, budget_limited: false };
    let bound = budget.virt_bound(v);
    loop {
        if g.h.is_constant() {
            break;
        }
        if no_drop_step(&mut g, &mut prod) {
            continue;
        }
        if allow_drop && drop_step(&mut g, &mut prod, &bound, budget.support_cap) {
            continue;
        }
        break;
    }
    let budget_limited = g.budget_limited || g.truncated;
    if g.p.is_affine() || g.h.is_constant() {
        return Ok(SearchResult { found: None, budget_limited });
    }
    let target = Vertex3::new([a.clone(), b.clone(), g.h])?;
    Ok(SearchResult {
        found: Some(ElementaryFound { p: g.p, target, optimal: !g.truncated }),
        budget_limited,
    })
}

/// Greedy elementary reduction of `v` with the given center: top terms of
/// the complementary component are cancelled by products of the center,
/// first one exact-degree product at a time, then by a bounded linear
/// system over products of larger virtual degree.
pub fn elementary_search(v: &Vertex3, center: &Line, budget: &SearchBudget) -> Result<Option<ElementaryFound>> {
    Ok(search(v, center, budget, true)?.found)
}

/// Rewrites `g`, an affine combination of the center representative, as a
/// linear polynomial in `(y, z)`.
fn linear_in_center(center: &Line, g: &Poly) -> Option<Poly> {
    let [a, b] = center.rep();
    let c = affine_coords(g, &[a, b])?;
    let mut p = Poly::constant(c[2].clone());
    p.add_scaled(&Poly::var(0), &c[0]);
    p.add_scaled(&Poly::var(1), &c[1]);
    Some(p)
}

/// `(f2, f3)` for a simple center: the pivot and another point of the line.
fn simple_frame(center: &Line, pivot: &Point) -> Result<(Poly, Poly)> {
    if !center.contains(pivot) {
        return Err(Error::NotIncident(format!("{} is not on {}", pivot, center)));
    }
    let [a, b] = center.rep();
    let other = if Point::new(a.clone())? == *pivot { b } else { a };
    Ok((pivot.rep().clone(), other.clone()))
}

/// Simple elementary reduction `⟦f1 + P(f2) + a f3, f2, f3⟧` with simple
/// center `(⟦f2, f3⟧, [f2])`. At a collision between a power of `f2` and
/// `f3` the `a f3` term is used, except that `a = 0` is forced when `f3`
/// carries the top degree of `v`.
pub fn simple_search(v: &Vertex3, center: &Line, pivot: &Point) -> Result<Option<ReductionStep>> {
    let f1 = v.complement(center)?;
    let (f2, f3) = simple_frame(center, pivot)?;
    let d2 = f2.lead_exp().unwrap();
    let d3 = f3.lead_exp().unwrap();
    let a_allowed = f3.deg() != v.degrees().top;
    let mut h = f1.clone();
    let mut coeffs: Vec<(u32, Q)> = Vec::new();
    let mut a = Q::zero();
    let mut pows: Vec<Poly> = vec![Poly::one()];
    while let Some(e) = h.lead_exp() {
        if e == Exp::ZERO {
            break;
        }
        let lc = h.lead_coeff().unwrap().clone();
        if a_allowed && e == d3 {
            let c = -(lc / f3.lead_coeff().unwrap());
            h.add_scaled(&f3, &c);
            a += c;
            continue;
        }
        let Some(k) = in_n_multiples(&e, &d2) else { break };
        while pows.len() <= k as usize {
            let n = pows.last().unwrap() * &f2;
            pows.push(n);
        }
        let c = -(lc / pows[k as usize].lead_coeff().unwrap());
        h.add_scaled(&pows[k as usize], &c);
        coeffs.push((k, c));
    }
    if !coeffs.iter().any(|(k, c)| *k >= 2 && !c.is_zero()) || h.is_constant() {
        return Ok(None);
    }
    let mut pf2 = Poly::zero();
    for (k, c) in &coeffs {
        pf2.add_scaled(&pows[*k as usize], c);
    }
    let d1 = f1.deg();
    if !(d1 > (&f1 + &pf2).deg() && d1 > h.deg()) {
        return Ok(None);
    }
    let l2 = linear_in_center(center, &f2).expect("pivot on center");
    let l3 = linear_in_center(center, &f3).expect("point on center");
    let mut uni = Poly::zero();
    for (k, c) in &coeffs {
        uni.add_scaled(&Poly::var(0).pow(*k), c);
    }
    let mut data = uni.substitute(&[l2, Poly::zero(), Poly::zero()]);
    data.add_scaled(&l3, &a);
    let target = Vertex3::new([h, f2, f3])?;
    Ok(Some(ReductionStep {
        kind: ReductionKind::SimpleElementary,
        source: v.clone(),
        target,
        center: center.clone(),
        pivot: pivot.clone(),
        data: BiPoly::from_poly(&data).expect("linear data in two slots"),
        auxiliary: None,
    }))
}

/// Verdicts of (K0)–(K4) for the pair `v → u`.
#[derive(Clone, Debug)]
pub struct KEvidence {
    pub center: Line,
    pub pivot: Point,
    pub conditions: [bool; 5],
    pub spf: Option<Spf>,
}

impl KEvidence {
    pub fn holds(&self) -> bool {
        self.conditions.iter().all(|&c| c)
    }
}

pub fn elementary_k_conditions(v: &Vertex3, u: &Vertex3) -> Result<KEvidence> {
    let center = common_line(v, u)?;
    let pivot = center.minimal_vertex();
    let delta = line_attributes(&center).delta;
    let conditions = [
        v.total_degree() > u.total_degree(),
        !inner_resonance(&center),
        !outer_resonance(&center, v)?,
        center != v.minimal_line(),
        delta > SDeg::from(u.degree_outside(&center)?),
    ];
    let spf = spf_check(&pivot, &center, v)?;
    Ok(KEvidence { center, pivot, conditions, spf })
}

pub fn classify_elementary_k(v: &Vertex3, u: &Vertex3) -> Result<Option<KEvidence>> {
    let e = elementary_k_conditions(v, u)?;
    Ok(e.holds().then_some(e))
}

/// Verdicts of (K0′)–(K6′) for `v → u` via `w`.
#[derive(Clone, Debug)]
pub struct ProperKEvidence {
    /// Center of `w ∼ u`.
    pub center: Line,
    /// Center of `w ∼ v`.
    pub m2: Line,
    pub pivot: Point,
    pub conditions: [bool; 7],
    pub spf: Option<Spf>,
    /// `v` is not a weak simple reduction of `w` with center `(m2, pivot)`.
    pub normal: bool,
}

impl ProperKEvidence {
    pub fn holds(&self) -> bool {
        self.conditions.iter().all(|&c| c)
    }
}

pub fn proper_k_conditions(v: &Vertex3, w: &Vertex3, u: &Vertex3) -> Result<ProperKEvidence> {
    let center = common_line(w, u)?;
    let m2 = common_line(w, v)?;
    let pivot = center.minimal_vertex();
    let delta = line_attributes(&center).delta;
    let minimal = w.minimal_line();
    let conditions = [
        w.total_degree() > u.total_degree(),
        !inner_resonance(&center),
        !outer_resonance(&center, w)?,
        center != minimal,
        delta > SDeg::from(u.degree_outside(&center)?),
        w.total_degree() >= v.total_degree(),
        m2 == minimal,
    ];
    let spf = spf_check(&pivot, &center, w)?;
    let weak_simple = m2.contains(&pivot) && weak_simple_decomposition(w, v, &m2, &pivot)?.is_some();
    Ok(ProperKEvidence { center, m2, pivot, conditions, spf, normal: !weak_simple })
}

pub fn classify_proper_k(v: &Vertex3, w: &Vertex3, u: &Vertex3) -> Result<Option<ProperKEvidence>> {
    let e = proper_k_conditions(v, w, u)?;
    Ok(e.holds().then_some(e))
}

/// `v = ⟦f1 + P(f2) + a f3, f2, f3⟧` for `w = ⟦f1, f2, f3⟧`, center
/// `⟦f2, f3⟧` and pivot `[f2]`.
#[derive(Clone, Debug)]
pub struct WeakSimple {
    pub f1: Poly,
    pub f2: Poly,
    pub f3: Poly,
    /// `P(f2)` as a polynomial in `x1, x2, x3`.
    pub p_of_f2: Poly,
    pub a: Q,
}

pub fn weak_simple_decomposition(w: &Vertex3, v: &Vertex3, center: &Line, pivot: &Point) -> Result<Option<WeakSimple>> {
    if !v.contains_line(center) {
        return Err(Error::NotIncident(format!("{} is not a line of {}", center, v)));
    }
    let f1 = w.complement(center)?;
    let g = v.complement(center)?;
    let (f2, f3) = simple_frame(center, pivot)?;
    let d2 = f2.lead_exp().unwrap().total().max(1);
    let kmax = (g.lead_exp().unwrap().total().max(f1.lead_exp().unwrap().total()) / d2 + 1) as u32;
    let mut basis = vec![f1.clone(), f3.clone()];
    let mut pw = f2.clone();
    for _ in 1..=kmax {
        basis.push(pw.clone());
        pw = &pw * &f2;
    }
    let refs: Vec<&Poly> = basis.iter().collect();
    let Some(c) = affine_coords(&g, &refs) else { return Ok(None) };
    let lambda = c[0].clone();
    if lambda.is_zero() {
        return Ok(None);
    }
    let a = &c[1] / &lambda;
    let mut p = Poly::zero();
    let mut nonaffine = false;
    for (k, ck) in c[2..2 + kmax as usize].iter().enumerate() {
        if !ck.is_zero() {
            p.add_scaled(&basis[2 + k], &(ck / &lambda));
            nonaffine |= k >= 1;
        }
    }
    if !nonaffine {
        return Ok(None);
    }
    if !a.is_zero() && f3.deg() == w.degrees().top {
        return Ok(None);
    }
    let mut with_a = &f1 + &p;
    with_a.add_scaled(&f3, &a);
    let ok = f1.deg() >= (&f1 + &p).deg() && f1.deg() >= with_a.deg();
    // absorbing `a f3` into `f1` gives another good representative when
    // `f3` is below `f1`
    let absorbed = f1.deg() > f3.deg() && f1.deg() >= with_a.deg();
    Ok((ok || absorbed).then_some(WeakSimple { f1, f2, f3, p_of_f2: p, a }))
}

pub fn is_weak_simple_reduction(w: &Vertex3, v: &Vertex3, center: &Line, pivot: &Point) -> Result<bool> {
    Ok(weak_simple_decomposition(w, v, center, pivot)?.is_some())
}

/// For a non-normal proper K-reduction `v → u` via `w`, the vertex
/// `u′ = ⟦g1 − Q(f2), f2, g3⟧` that is an elementary K-reduction of `v`.
pub fn normalize_proper_k(v: &Vertex3, w: &Vertex3, u: &Vertex3) -> Result<Vertex3> {
    let e = proper_k_conditions(v, w, u)?;
    if e.normal {
        return Err(Error::HypothesesUnmet("the reduction is already normal".into()));
    }
    let ws = weak_simple_decomposition(w, v, &e.m2, &e.pivot)?
        .ok_or_else(|| Error::HypothesesUnmet("v is not a weak simple reduction of w".into()))?;
    let u1 = &ws.f1 + &ws.p_of_f2;
    let g3 = reduce_fully(&u.complement(&e.center)?, e.center.rep());
    Vertex3::new([u1, ws.f2, g3])
}

fn minimize_form(base: &TwoForm, dirs: &[TwoForm]) -> Vec<Q> {
    let base_e = base.weighted_entries();
    let dir_e: Vec<_> = dirs.iter().map(TwoForm::weighted_entries).collect();
    let refs: Vec<_> = dir_e.iter().collect();
    kill_descending(&base_e, &refs, |k| k.0).map_or_else(|| vec![Q::zero(); dirs.len()], |(c, _)| c)
}

/// Lines off the canonical triangle that minimize the differential degree
/// within the pencils `⟦t + c m, l⟧` and `⟦t + a l, m + b l⟧`.
fn pencil_candidates(v: &Vertex3) -> Vec<(Line, Point)> {
    let t = v.triangle();
    let df = [differential(&t.top), differential(&t.mid), differential(&t.low)];
    let w = |i: usize, j: usize| wedge11(&df[i], &df[j]);
    let mut out = Vec::new();
    let c = minimize_form(&w(0, 2), &[w(1, 2)]);
    if !c[0].is_zero() {
        let mut a = t.top.clone();
        a.add_scaled(&t.mid, &c[0]);
        if let Ok(l) = Line::new(a, t.low.clone()) {
            let p = l.minimal_vertex();
            out.push((l, p));
        }
    }
    // d(t + a l) ∧ d(m + b l) = ω_tm + b ω_tl + a ω_lm
    let ab = minimize_form(&w(0, 1), &[w(2, 1), w(0, 2)]);
    if ab.iter().any(|x| !x.is_zero()) {
        let mut p1 = t.top.clone();
        p1.add_scaled(&t.low, &ab[0]);
        let mut p2 = t.mid.clone();
        p2.add_scaled(&t.low, &ab[1]);
        if let Ok(l) = Line::new(p1, p2) {
            let p = l.minimal_vertex();
            out.push((l, p));
        }
    }
    out
}

fn classify_found(v: &Vertex3, center: &Line, pivot: &Point, f: ElementaryFound) -> Result<ReductionStep> {
    let mut step = ReductionStep {
        kind: ReductionKind::Elementary,
        source: v.clone(),
        target: f.target,
        center: center.clone(),
        pivot: pivot.clone(),
        data: f.p,
        auxiliary: None,
    };
    if let Some(e) = classify_elementary_k(v, &step.target)? {
        step.kind = ReductionKind::ElementaryK;
        step.pivot = e.pivot;
        return Ok(step);
    }
    // simple when the non-affine part of P is a polynomial in one slot
    let nonaffine: Vec<(u32, u32)> = step.data.coeffs().keys().copied().filter(|&(i, j)| i + j >= 2).collect();
    let [a, b] = center.rep();
    if nonaffine.iter().all(|&(_, j)| j == 0) {
        step.kind = ReductionKind::SimpleElementary;
        step.pivot = Point::new(a.clone())?;
    } else if nonaffine.iter().all(|&(i, _)| i == 0) {
        step.kind = ReductionKind::SimpleElementary;
        step.pivot = Point::new(b.clone())?;
    }
    Ok(step)
}

/// Proper K-reduction restricted to `w = ⟦f1 + a f3² + c f3, f2, f3⟧`
/// with `(a, c)` minimizing `deg dg1 ∧ df2`.
fn proper_k_search(v: &Vertex3, budget: &SearchBudget) -> Result<Option<ReductionStep>> {
    let t = v.triangle();
    let (f1, f2, f3) = (&t.top, &t.mid, &t.low);
    if f2.lead_exp().unwrap().0.iter().any(|x| x % 2 != 0) {
        return Ok(None);
    }
    let d1 = differential(f1);
    let d2 = differential(f2);
    let d3 = differential(f3);
    let w12 = wedge11(&d1, &d2);
    let w23 = wedge11(&d2, &d3);
    // dg1 ∧ df2 = ω12 − 2a f3 ω23 − c ω23
    let two = crate::poly::q(-2);
    let ac = minimize_form(&w12, &[w23.scale_by(&f3.scale(&two)), w23.scale_by(&Poly::constant(crate::poly::q(-1)))]);
    if ac[0].is_zero() {
        return Ok(None);
    }
    let mut g1 = f1.clone();
    g1.add_scaled(&f3.pow(2), &ac[0]);
    g1.add_scaled(f3, &ac[1]);
    let Ok(w) = Vertex3::new([g1.clone(), f2.clone(), f3.clone()]) else { return Ok(None) };
    if w.total_degree() < v.total_degree() {
        return Ok(None);
    }
    let Ok(w2) = Line::new(g1, f2.clone()) else { return Ok(None) };
    let Some(found) = elementary_search(&w, &w2, budget)? else { return Ok(None) };
    if classify_proper_k(v, &w, &found.target)?.is_none() {
        return Ok(None);
    }
    Ok(Some(ReductionStep {
        kind: ReductionKind::ProperK,
        source: v.clone(),
        target: found.target,
        pivot: w2.minimal_vertex(),
        center: w2,
        data: found.p,
        auxiliary: Some(w),
    }))
}

/// One reduction step from `v`, or a report of everything tried.
pub fn reduce_once(v: &Vertex3, budget: &SearchBudget) -> Result<ReduceOutcome> {
    if v.is_identity() {
        return Err(Error::IdentityVertex);
    }
    let mut attempts = Vec::new();
    let mut budget_limited = false;
    let lines = v.triangle_lines().to_vec();

    let mut best: Option<(Line, Point, ElementaryFound)> = None;
    for (l, p) in &lines {
        let r = search(v, l, budget, false)?;
        attempts.push(Attempt { center: l.clone(), phase: "no-drop", outcome: if r.found.is_some() { "found" } else { "none" } });
        if let Some(f) = r.found {
            if best.as_ref().map_or(true, |b| f.target.total_degree() < b.2.target.total_degree()) {
                best = Some((l.clone(), p.clone(), f));
            }
        }
    }
    if best.is_none() {
        let mut pencils: Option<Vec<(Line, Point)>> = None;
        let mut k = 0;
        loop {
            if k == lines.len() && pencils.is_none() {
                pencils = Some(pencil_candidates(v));
            }
            let Some((l, p)) = lines.get(k).or_else(|| pencils.as_ref()?.get(k - lines.len())) else { break };
            k += 1;
            let r = search(v, l, budget, true)?;
            budget_limited |= r.budget_limited;
            let outcome = match (&r.found, r.budget_limited) {
                (Some(_), _) => "found",
                (None, true) => "none within budget",
                (None, false) => "none",
            };
            attempts.push(Attempt { center: l.clone(), phase: "drop", outcome });
            if let Some(f) = r.found {
                best = Some((l.clone(), p.clone(), f));
                break;
            }
        }
    }
    if let Some((l, p, f)) = best {
        return Ok(ReduceOutcome::Step(classify_found(v, &l, &p, f)?));
    }
    if let Some(s) = proper_k_search(v, budget)? {
        return Ok(ReduceOutcome::Step(s));
    }
    attempts.push(Attempt { center: v.minimal_line(), phase: "proper-K", outcome: "none" });
    Ok(ReduceOutcome::NonReducible(NonReducibleReport {
        vertex: v.clone(),
        degrees: v.degrees(),
        attempts,
        budget_limited,
    }))
}

/// Repeated [`reduce_once`] down to the identity vertex. A miss is retried
/// with doubled budget up to [`BUDGET_CEILING`] when the search was budget
/// limited or the input carries a tame witness.
pub fn reduction_path(f: &Automorphism, budget: &SearchBudget) -> std::result::Result<ReductionPath, PathError> {
    let witnessed = f.witness.is_some();
    let mut v = f.vertex()?;
    let mut steps: Vec<ReductionStep> = Vec::new();
    while !v.is_identity() {
        let mut b = *budget;
        loop {
            match reduce_once(&v, &b)? {
                ReduceOutcome::Step(s) => {
                    debug_assert!(s.target.total_degree() < v.total_degree());
                    v = s.target.clone();
                    steps.push(s);
                    break;
                }
                ReduceOutcome::NonReducible(report) => {
                    let inconclusive = report.budget_limited || witnessed;
                    if inconclusive && b.virt_scale * 2 <= BUDGET_CEILING {
                        b = b.doubled();
                        continue;
                    }
                    let partial = ReductionPath { steps, terminal: v };
                    return Err(if inconclusive {
                        PathError::BudgetExceeded { partial, report, scale: b.virt_scale }
                    } else {
                        PathError::NonReducible { partial, report }
                    });
                }
            }
        }
    }
    Ok(ReductionPath { steps, terminal: v })
}

#[derive(Clone, Debug)]
pub struct NonTameCertificate {
    pub degrees: [Exp; 3],
    /// Each pair of degrees is not rationally proportional.
    pub pairwise_independent: [bool; 3],
    /// No degree lies in `N·δj + N·δk` of the other two.
    pub no_combination: [bool; 3],
    /// No ordered pair `(2δ, sδ)` with odd `s ≥ 3`.
    pub no_two_delta: bool,
    /// Indices of degrees with every coordinate even.
    pub even_components: Vec<usize>,
    /// Bounded elementary search on the canonical triangle lines.
    pub searched_centers: Vec<(Line, bool)>,
}

impl NonTameCertificate {
    pub fn valid(&self) -> bool {
        self.pairwise_independent.iter().all(|&b| b)
            && self.no_combination.iter().all(|&b| b)
            && self.no_two_delta
            && self.searched_centers.iter().all(|(_, found)| !found)
    }
}

fn spf_pair(lo: &Exp, hi: &Exp) -> bool {
    if lo.0.iter().any(|a| a % 2 != 0) || *lo == Exp::ZERO {
        return false;
    }
    let d = Exp(lo.0.map(|a| a / 2));
    matches!(in_n_multiples(hi, &d), Some(s) if s >= 3 && s % 2 == 1)
}

/// A non-identity vertex whose degrees rule out every elementary and
/// K-reduction is not tame. Returns `None` when the degree test does not
/// apply.
pub fn nontame_certificate(f: &Automorphism) -> Result<Option<NonTameCertificate>> {
    if !independent3(&f.components) {
        return Err(Error::DependentInputs);
    }
    let v = f.vertex()?;
    if v.is_identity() {
        return Ok(None);
    }
    let t = v.triangle();
    let degrees = [t.top.lead_exp().unwrap(), t.mid.lead_exp().unwrap(), t.low.lead_exp().unwrap()];
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let pairwise_independent = pairs.map(|(i, j)| z_independent(&degrees[i], &degrees[j]));
    let no_combination = [0, 1, 2].map(|i| {
        let o: Vec<usize> = (0..3).filter(|&k| k != i).collect();
        in_nn_span(&degrees[i], &degrees[o[0]], &degrees[o[1]]).is_none()
    });
    let no_two_delta = (0..3).all(|i| (0..3).all(|j| i == j || !spf_pair(&degrees[i], &degrees[j])));
    let even_components = (0..3).filter(|&i| degrees[i].0.iter().all(|a| a % 2 == 0)).collect();
    let budget = SearchBudget::default();
    let searched_centers = v
        .triangle_lines()
        .into_iter()
        .map(|(l, _)| {
            let found = elementary_search(&v, &l, &budget).map(|r| r.is_some()).unwrap_or(false);
            (l, found)
        })
        .collect();
    let cert = NonTameCertificate {
        degrees,
        pairwise_independent,
        no_combination,
        no_two_delta,
        even_components,
        searched_centers,
    };
    Ok(cert.valid().then_some(cert))
}

/// The lower corner `u` of the square built from two reductions of `v`.
#[derive(Clone, Debug)]
pub struct SquareRewrite {
    pub u: Vertex3,
    /// `⟦f2, f3 + P(f1, f2)⟧`, shared by `u` and the target of `prime`.
    pub via_prime: Line,
    /// `⟦f1 + Q(f2), f2⟧`, shared by `u` and the target of `second`.
    pub via_second: Line,
}

/// Square lemma: from `v → v′` (center `⟦f1, f2⟧`) and a simple
/// `v → v″` (simple center `⟦f2, f3⟧, [f2]`) builds
/// `u = [f1 + Q(f2), f2, f3 + P(f1, f2)]` below both.
pub fn square_rewrite(v: &Vertex3, prime: &ReductionStep, second: &ReductionStep) -> Result<SquareRewrite> {
    let unmet = |s: &str| Err(Error::HypothesesUnmet(s.to_string()));
    if prime.source != *v || second.source != *v {
        return unmet("both steps must start at v");
    }
    if prime.center == second.center {
        return unmet("centers must differ");
    }
    let (c1, c2) = (&prime.center, &second.center);
    if !(v.contains_line(c1) && v.contains_line(c2)) {
        return unmet("centers must be lines of v");
    }
    let m1 = v.minimal_vertex();
    let min = v.minimal_line();
    if !(*c1 == min || *c2 == min || c1.contains(&m1) != c2.contains(&m1)) {
        return unmet("centers are not part of a good triangle");
    }
    let common = crate::linalg::span_intersection(c1.rep(), c2.rep());
    let [f2]: [Poly; 1] = common.try_into().map_err(|_| Error::HypothesesUnmet("centers must meet in a point".into()))?;
    let pivot = Point::new(f2)?;
    let Some(ws) = weak_simple_decomposition(v, &second.target, c2, &pivot)? else {
        return unmet("second step is not a simple reduction with simple center through the common point");
    };
    let (dv, d1, d2) = (v.total_degree(), prime.target.total_degree(), second.target.total_degree());
    if !(dv >= d1 && dv >= d2 && (dv > d1 || dv > d2)) {
        return unmet("degrees must not increase and one drop must be strict");
    }
    // f1 must lie on the prime center
    let f1 = v.complement(c2)?;
    if !c1.rep().iter().any(|p| reduce_fully(p, &[ws.f2.clone()]).lead_exp() == f1.lead_exp()) && !c1.contains(&Point::new(f1.clone())?) {
        return unmet("the prime center must pass through the first component");
    }
    let u1 = &ws.f1 + &ws.p_of_f2;
    let g3 = prime.target.complement(c1)?;
    let u = Vertex3::new([u1.clone(), ws.f2.clone(), g3.clone()])?;
    if u.total_degree() >= dv {
        return unmet("no strict degree drop at u");
    }
    Ok(SquareRewrite { u, via_prime: Line::new(ws.f2.clone(), g3)?, via_second: Line::new(u1, ws.f2)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, x1, x2, x3};

    #[test]
    fn trivial_elementary() {
        let v = Vertex3::new([x1() + x2().pow(2), x2(), x3()]).unwrap();
        let c = Line::new(x2(), x3()).unwrap();
        let r = elementary_search(&v, &c, &SearchBudget::default()).unwrap().unwrap();
        assert_eq!(r.p, BiPoly::new([((2, 0), q(-1))]));
        assert!(r.target.is_identity());
    }

    #[test]
    fn trivial_simple() {
        let v = Vertex3::new([x1() + x2().pow(3), x2(), x3()]).unwrap();
        let c = Line::new(x2(), x3()).unwrap();
        let s = simple_search(&v, &c, &Point::new(x2()).unwrap()).unwrap().unwrap();
        assert!(s.target.is_identity());
        assert!(simple_search(&Vertex3::identity(), &c, &Point::new(x2()).unwrap()).unwrap().is_none());
    }

    #[test]
    fn reduce_once_simple() {
        let v = Vertex3::new([x1() + x2().pow(3), x2(), x3()]).unwrap();
        let ReduceOutcome::Step(s) = reduce_once(&v, &SearchBudget::default()).unwrap() else { panic!() };
        assert_eq!(s.kind, ReductionKind::SimpleElementary);
        assert!(s.target.is_identity());
        assert_eq!(reduce_once(&Vertex3::identity(), &SearchBudget::default()).unwrap_err(), Error::IdentityVertex);
    }
}
