//! Tame words and automorphisms, and the vertices of the complex on which
//! they act: points `[f]`, lines `⟦f1, f2⟧` and type-3 vertices
//! `⟦f1, f2, f3⟧`, each taken modulo affine post-composition.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;

use crate::analysis::{in_n_multiples, in_nn_span, BiPoly};
use crate::error::{Error, Result};
use crate::forms::{deg_dwedge, differential, independent3, wedge11, TwoForm};
use crate::linalg::{affine_coords, invert3, rank, reduce_by_leads, span_intersection};
use crate::poly::{Exp, MultiDegree, Poly, SDeg, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// `x ↦ A x + b`.
    Affine { matrix: [[Q; 3]; 3], translation: [Q; 3] },
    /// `x_i ↦ x_i + P`, with `P` free of `x_i`. `index` is 0-based.
    Elementary { index: usize, p: Poly },
}

impl Generator {
    pub fn affine(matrix: [[Q; 3]; 3], translation: [Q; 3]) -> Result<Generator> {
        invert3(&matrix).ok_or(Error::SingularAffine)?;
        Ok(Generator::Affine { matrix, translation })
    }

    pub fn elementary(index: usize, p: Poly) -> Result<Generator> {
        if index > 2 {
            return Err(Error::InvalidElementary(format!("index {} out of range", index + 1)));
        }
        if p.support_vars()[index] {
            return Err(Error::InvalidElementary(format!("P involves x{}", index + 1)));
        }
        Ok(Generator::Elementary { index, p })
    }

    pub fn as_map(&self) -> [Poly; 3] {
        match self {
            Generator::Affine { matrix, translation } => std::array::from_fn(|i| {
                let mut c = Poly::constant(translation[i].clone());
                for j in 0..3 {
                    c.add_scaled(&Poly::var(j), &matrix[i][j]);
                }
                c
            }),
            Generator::Elementary { index, p } => {
                let mut m = [Poly::var(0), Poly::var(1), Poly::var(2)];
                m[*index] = &m[*index] + p;
                m
            }
        }
    }

    pub fn inverse(&self) -> Result<Generator> {
        match self {
            Generator::Affine { matrix, translation } => {
                let inv = invert3(matrix).ok_or(Error::SingularAffine)?;
                let t = std::array::from_fn(|i| {
                    -(0..3).map(|j| &inv[i][j] * &translation[j]).sum::<Q>()
                });
                Ok(Generator::Affine { matrix: inv, translation: t })
            }
            Generator::Elementary { index, p } => Ok(Generator::Elementary { index: *index, p: -p }),
        }
    }
}

/// A word in affine and elementary generators, composed left to right.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TameWord {
    pub factors: Vec<Generator>,
}

impl TameWord {
    pub fn new(factors: Vec<Generator>) -> TameWord {
        TameWord { factors }
    }

    /// The word of the inverse automorphism.
    pub fn inverse(&self) -> Result<TameWord> {
        Ok(TameWord { factors: self.factors.iter().rev().map(Generator::inverse).collect::<Result<_>>()? })
    }

    pub fn concat(&self, other: &TameWord) -> TameWord {
        TameWord { factors: self.factors.iter().chain(&other.factors).cloned().collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    pub components: [Poly; 3],
    pub witness: Option<TameWord>,
}

impl Automorphism {
    /// Checks algebraic independence only; invertibility is not decided.
    pub fn new(components: [Poly; 3]) -> Result<Automorphism> {
        if !independent3(&components) {
            return Err(Error::DependentInputs);
        }
        Ok(Automorphism { components, witness: None })
    }

    pub fn identity() -> Automorphism {
        Automorphism { components: [Poly::var(0), Poly::var(1), Poly::var(2)], witness: Some(TameWord::default()) }
    }

    pub fn with_witness(components: [Poly; 3], word: TameWord) -> Result<Automorphism> {
        let f = eval_word(&word)?;
        if f.components != components {
            return Err(Error::WitnessMismatch);
        }
        Ok(f)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        let components = self.components.clone().map(|c| c.substitute(&other.components));
        let witness = match (&self.witness, &other.witness) {
            (Some(a), Some(b)) => Some(a.concat(b)),
            _ => None,
        };
        Automorphism { components, witness }
    }

    pub fn vertex(&self) -> Result<Vertex3> {
        Vertex3::new(self.components.clone())
    }
}

pub fn eval_word(w: &TameWord) -> Result<Automorphism> {
    let mut f = [Poly::var(0), Poly::var(1), Poly::var(2)];
    for g in &w.factors {
        if let Generator::Affine { matrix, .. } = g {
            invert3(matrix).ok_or(Error::SingularAffine)?;
        }
        let m = g.as_map();
        f = f.map(|c| c.substitute(&m));
    }
    Ok(Automorphism { components: f, witness: Some(w.clone()) })
}

/// Stratified degrees `δ1 < … < δr`, their sum and the top degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexDegrees {
    pub stratified: Vec<MultiDegree>,
    pub total: MultiDegree,
    pub top: MultiDegree,
}

impl fmt::Display for VertexDegrees {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.stratified.iter().map(|d| d.to_string()).collect();
        write!(f, "stratified {} total {}", s.join(" "), self.total)
    }
}

/// Index-order elimination: each component is reduced against the earlier
/// ones while its top monomial collides with theirs. Tuples that already
/// have distinct degrees come back unchanged.
pub fn good_representative(comps: &[Poly]) -> Result<Vec<Poly>> {
    let mut out: Vec<Poly> = Vec::with_capacity(comps.len());
    for (k, p) in comps.iter().enumerate() {
        let r = reduce_by_leads(p, &out);
        if r.is_constant() {
            return Err(Error::DegenerateTuple(format!(
                "component {} lies in the affine span of the others",
                k + 1
            )));
        }
        out.push(r);
    }
    Ok(out)
}

pub fn stratified_degrees(comps: &[Poly]) -> Result<VertexDegrees> {
    if comps.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut ds: Vec<MultiDegree> = good_representative(comps)?.iter().map(Poly::deg).collect();
    ds.sort();
    let total = ds.iter().fold(MultiDegree::new(0, 0, 0), |a, d| a.plus(d));
    Ok(VertexDegrees { top: *ds.last().unwrap(), total, stratified: ds })
}

/// Same orbit under affine post-composition: every component of `b` is an
/// affine combination of `a`, with invertible linear part.
pub fn same_affine_orbit(a: &[Poly], b: &[Poly]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let basis: Vec<&Poly> = a.iter().collect();
    let mut rows = Vec::with_capacity(b.len());
    for t in b {
        match affine_coords(t, &basis) {
            Some(c) => rows.push(c[..a.len()].to_vec()),
            None => return false,
        }
    }
    rank(&rows) == a.len()
}

fn in_affine_span(p: &Poly, comps: &[Poly]) -> bool {
    let basis: Vec<&Poly> = comps.iter().collect();
    affine_coords(p, &basis).is_some()
}

fn sort_desc(mut v: Vec<Poly>) -> Vec<Poly> {
    v.sort_by_key(|p| std::cmp::Reverse(p.deg()));
    v
}

fn fmt_tuple(f: &mut fmt::Formatter<'_>, open: &str, close: &str, ps: &[Poly]) -> fmt::Result {
    let s: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
    write!(f, "{}{}{}", open, s.join(", "), close)
}

/// Type-1 vertex `[f]`.
#[derive(Clone, Debug)]
pub struct Point {
    rep: Poly,
}

impl Point {
    pub fn new(p: Poly) -> Result<Point> {
        if p.is_constant() {
            return Err(Error::DegenerateTuple("constant point".into()));
        }
        Ok(Point { rep: p })
    }

    pub fn rep(&self) -> &Poly {
        &self.rep
    }

    pub fn deg(&self) -> MultiDegree {
        self.rep.deg()
    }
}

impl PartialEq for Point {
    fn eq(&self, o: &Point) -> bool {
        same_affine_orbit(std::slice::from_ref(&self.rep), std::slice::from_ref(&o.rep))
    }
}
impl Eq for Point {}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.rep)
    }
}

/// Type-2 vertex. The representative is good and stored with the higher
/// degree first.
#[derive(Clone, Debug)]
pub struct Line {
    rep: [Poly; 2],
}

impl Line {
    pub fn new(a: Poly, b: Poly) -> Result<Line> {
        let g = sort_desc(good_representative(&[a, b])?);
        let [hi, lo]: [Poly; 2] = g.try_into().unwrap();
        Ok(Line { rep: [hi, lo] })
    }

    pub fn rep(&self) -> &[Poly; 2] {
        &self.rep
    }

    /// `(ν1, ν2)` with `ν1 < ν2`.
    pub fn two_degree(&self) -> (Exp, Exp) {
        (self.rep[1].lead_exp().unwrap(), self.rep[0].lead_exp().unwrap())
    }

    pub fn deg(&self) -> Exp {
        let (a, b) = self.two_degree();
        a.add(&b)
    }

    pub fn contains(&self, p: &Point) -> bool {
        in_affine_span(p.rep(), &self.rep)
    }

    /// The point of least degree on the line.
    pub fn minimal_vertex(&self) -> Point {
        Point { rep: self.rep[1].clone() }
    }
}

impl PartialEq for Line {
    fn eq(&self, o: &Line) -> bool {
        same_affine_orbit(&self.rep, &o.rep)
    }
}
impl Eq for Line {}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_tuple(f, "[[", "]]", &self.rep)
    }
}

/// Type-3 vertex. The stored representative is good (distinct component
/// degrees) and keeps the input order.
#[derive(Clone, Debug)]
pub struct Vertex3 {
    rep: [Poly; 3],
}

/// Components of a good representative sorted by decreasing degree, so
/// that `m2 = ⟦mid, low⟧`, `v2 = ⟦top, low⟧` and `u2 = ⟦top, mid⟧`.
#[derive(Clone, Debug)]
pub struct Triangle {
    pub top: Poly,
    pub mid: Poly,
    pub low: Poly,
}

impl Vertex3 {
    pub fn new(comps: [Poly; 3]) -> Result<Vertex3> {
        let g = good_representative(&comps)?;
        Ok(Vertex3 { rep: g.try_into().unwrap() })
    }

    pub fn identity() -> Vertex3 {
        Vertex3 { rep: [Poly::var(0), Poly::var(1), Poly::var(2)] }
    }

    pub fn rep(&self) -> &[Poly; 3] {
        &self.rep
    }

    pub fn degrees(&self) -> VertexDegrees {
        stratified_degrees(&self.rep).expect("stored representative is good")
    }

    pub fn total_degree(&self) -> Exp {
        self.rep.iter().fold(Exp::ZERO, |a, p| a.add(&p.lead_exp().unwrap()))
    }

    pub fn is_identity(&self) -> bool {
        self.total_degree() == Exp([1, 1, 1])
    }

    pub fn triangle(&self) -> Triangle {
        let [top, mid, low]: [Poly; 3] = sort_desc(self.rep.to_vec()).try_into().unwrap();
        Triangle { top, mid, low }
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        in_affine_span(p.rep(), &self.rep)
    }

    pub fn contains_line(&self, l: &Line) -> bool {
        l.rep.iter().all(|p| in_affine_span(p, &self.rep))
    }

    /// A component completing `l` to a good representative of `self`: the
    /// one whose degree is `deg(v ∖ l)`.
    pub fn complement(&self, l: &Line) -> Result<Poly> {
        if !self.contains_line(l) {
            return Err(Error::NotIncident(format!("{} is not a line of {}", l, self)));
        }
        let (a, b) = l.two_degree();
        Ok(self.rep.iter().find(|p| !matches!(p.lead_exp(), Some(e) if e == a || e == b)).unwrap().clone())
    }

    /// `deg(v ∖ l) = deg v − deg l`.
    pub fn degree_outside(&self, l: &Line) -> Result<Exp> {
        Ok(self.complement(l)?.lead_exp().unwrap())
    }

    pub fn minimal_line(&self) -> Line {
        let t = self.triangle();
        Line { rep: [t.mid, t.low] }
    }

    pub fn minimal_vertex(&self) -> Point {
        Point { rep: self.triangle().low }
    }

    /// `m2, v2, u2` of the canonical good triangle, each with its minimal
    /// vertex.
    pub fn triangle_lines(&self) -> [(Line, Point); 3] {
        let t = self.triangle();
        [
            (Line { rep: [t.mid.clone(), t.low.clone()] }, Point { rep: t.low.clone() }),
            (Line { rep: [t.top.clone(), t.low.clone()] }, Point { rep: t.low.clone() }),
            (Line { rep: [t.top, t.mid.clone()] }, Point { rep: t.mid }),
        ]
    }

    /// The line `{Σ x_i t_i : n · x = 0}`, with `t = (top, mid, low)`.
    pub fn line_with_normal(&self, n: &[Q; 3]) -> Result<Line> {
        let t = self.triangle();
        let basis = [t.top, t.mid, t.low];
        let k = (0..3).find(|&i| !n[i].is_zero()).ok_or(Error::EmptyInput)?;
        let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
        let mk = |j: usize| {
            let mut p = basis[j].clone();
            p.add_scaled(&basis[k], &-(&n[j] / &n[k]));
            p
        };
        Line::new(mk(others[0]), mk(others[1]))
    }

    /// `d` of the line with normal `n`, from the three pairwise wedges.
    pub fn d_with_normal(&self, n: &[Q; 3]) -> MultiDegree {
        let t = self.triangle();
        let df = [differential(&t.top), differential(&t.mid), differential(&t.low)];
        let w12 = wedge11(&df[0], &df[1]);
        let w13 = wedge11(&df[0], &df[2]);
        let w23 = wedge11(&df[1], &df[2]);
        let z = TwoForm::default();
        z.add_scaled(&w12, &n[2]).add_scaled(&w13, &-n[1].clone()).add_scaled(&w23, &n[0]).deg()
    }
}

impl PartialEq for Vertex3 {
    fn eq(&self, o: &Vertex3) -> bool {
        same_affine_orbit(&self.rep, &o.rep)
    }
}
impl Eq for Vertex3 {}

impl fmt::Display for Vertex3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_tuple(f, "[[", "]]", &self.rep)
    }
}

pub fn vertex_equal(a: &Vertex3, b: &Vertex3) -> bool {
    a == b
}

pub fn minimal_line(v: &Vertex3) -> Line {
    v.minimal_line()
}

pub fn minimal_vertex(v: &Vertex3) -> Point {
    v.minimal_vertex()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineAttributes {
    /// `deg df1 ∧ df2`.
    pub d: MultiDegree,
    /// `deg f1 − deg f2 + d`.
    pub delta: SDeg,
}

pub fn line_attributes(l: &Line) -> LineAttributes {
    let d = deg_dwedge(&l.rep[0], &l.rep[1]);
    let (lo, hi) = l.two_degree();
    let delta = SDeg::from(hi) - SDeg::from(lo) + d.sdeg().expect("independent line");
    LineAttributes { d, delta }
}

pub fn inner_resonance(l: &Line) -> bool {
    let (lo, hi) = l.two_degree();
    in_n_multiples(&hi, &lo).is_some()
}

pub fn outer_resonance(l: &Line, v: &Vertex3) -> Result<bool> {
    let target = v.degree_outside(l)?;
    let (lo, hi) = l.two_degree();
    Ok(in_nn_span(&target, &lo, &hi).is_some())
}

/// `⟦c1, c2, h + P(c1, c2)⟧` where `(c1, c2)` is the stored representative
/// of `center` and `h` completes it in `v`.
pub fn neighbor(v: &Vertex3, center: &Line, p: &BiPoly) -> Result<Vertex3> {
    let h = v.complement(center)?;
    if p.is_affine() {
        return Err(Error::AffineP);
    }
    let [c1, c2] = center.rep().clone();
    let g = &h + &p.eval(&c1, &c2);
    Vertex3::new([c1, c2, g])
}

/// The line shared by two distinct neighbors.
pub fn common_line(a: &Vertex3, b: &Vertex3) -> Result<Line> {
    let i = span_intersection(a.rep(), b.rep());
    if i.len() != 2 {
        return Err(Error::NotNeighbors);
    }
    let [p, q]: [Poly; 2] = i.try_into().unwrap();
    Line::new(p, q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Spf {
    pub s: u32,
    pub delta: Exp,
}

/// Odd `s ≥ 3` and `δ` when the simplex `(point, line, v)` satisfies all
/// four strong pivotal form conditions.
pub fn spf_check(point: &Point, line: &Line, v: &Vertex3) -> Result<Option<Spf>> {
    if !line.contains(point) {
        return Err(Error::NotIncident(format!("{} is not on {}", point, line)));
    }
    if !v.contains_line(line) {
        return Err(Error::NotIncident(format!("{} is not a line of {}", line, v)));
    }
    let (lo, hi) = line.two_degree();
    if point.deg() != MultiDegree::Finite(lo) || lo.0.iter().any(|a| a % 2 != 0) {
        return Ok(None);
    }
    let delta = Exp(lo.0.map(|a| a / 2));
    let s = match in_n_multiples(&hi, &delta) {
        Some(s) if s >= 3 && s % 2 == 1 => s,
        _ => return Ok(None),
    };
    if outer_resonance(line, v)? || *line == v.minimal_line() {
        return Ok(None);
    }
    let outside = SDeg::from(v.degree_outside(line)?);
    if outside.cmp(&line_attributes(line).delta) == Ordering::Less {
        return Ok(None);
    }
    Ok(Some(Spf { s, delta }))
}

/// `p` is an affine combination of `comps`.
pub fn is_affine_combination(p: &Poly, comps: &[Poly]) -> bool {
    in_affine_span(p, comps)
}

/// `λ` with `p = λ q + const`, if any.
pub fn proportional_mod_constants(p: &Poly, q: &Poly) -> Option<Q> {
    let c = affine_coords(p, &[q])?;
    (!c[0].is_zero()).then(|| c[0].clone())
}
