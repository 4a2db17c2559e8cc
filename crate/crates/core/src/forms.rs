//! Differential forms on A^3 with polynomial coefficients.
//!
//! Two-forms use the basis `(dx1∧dx2, dx1∧dx3, dx2∧dx3)`.

use std::collections::BTreeMap;

use crate::poly::{Exp, MultiDegree, Poly, Q};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct OneForm(pub [Poly; 3]);

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TwoForm(pub [Poly; 3]);

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ThreeForm(pub Poly);

const ONE_WEIGHTS: [Exp; 3] = [Exp([1, 0, 0]), Exp([0, 1, 0]), Exp([0, 0, 1])];
const TWO_WEIGHTS: [Exp; 3] = [Exp([1, 1, 0]), Exp([1, 0, 1]), Exp([0, 1, 1])];
const THREE_WEIGHT: Exp = Exp([1, 1, 1]);

fn weighted_deg(coeffs: &[Poly], weights: &[Exp]) -> MultiDegree {
    coeffs
        .iter()
        .zip(weights)
        .map(|(c, w)| c.deg().plus(&MultiDegree::Finite(*w)))
        .max()
        .unwrap_or(MultiDegree::NegInfinity)
}

pub fn differential(p: &Poly) -> OneForm {
    OneForm([p.derivative(0), p.derivative(1), p.derivative(2)])
}

pub fn wedge11(a: &OneForm, b: &OneForm) -> TwoForm {
    let [a1, a2, a3] = &a.0;
    let [b1, b2, b3] = &b.0;
    TwoForm([a1 * b2 - a2 * b1, a1 * b3 - a3 * b1, a2 * b3 - a3 * b2])
}

pub fn wedge21(w: &TwoForm, c: &OneForm) -> ThreeForm {
    let [w12, w13, w23] = &w.0;
    let [c1, c2, c3] = &c.0;
    ThreeForm(w12 * c3 - w13 * c2 + w23 * c1)
}

impl OneForm {
    pub fn deg(&self) -> MultiDegree {
        weighted_deg(&self.0, &ONE_WEIGHTS)
    }
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Poly::is_zero)
    }
    pub fn scale_by(&self, g: &Poly) -> OneForm {
        OneForm([g * &self.0[0], g * &self.0[1], g * &self.0[2]])
    }
}

impl TwoForm {
    pub fn deg(&self) -> MultiDegree {
        weighted_deg(&self.0, &TWO_WEIGHTS)
    }
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Poly::is_zero)
    }
    pub fn scale_by(&self, g: &Poly) -> TwoForm {
        TwoForm([g * &self.0[0], g * &self.0[1], g * &self.0[2]])
    }
    pub fn add_scaled(&self, o: &TwoForm, c: &Q) -> TwoForm {
        let mut r = self.clone();
        for i in 0..3 {
            r.0[i].add_scaled(&o.0[i], c);
        }
        r
    }

    /// Flattens to entries keyed by (weighted monomial, basis index), so
    /// that the degree of the form is the largest key.
    pub fn weighted_entries(&self) -> BTreeMap<(Exp, usize), Q> {
        let mut m = BTreeMap::new();
        for (i, c) in self.0.iter().enumerate() {
            for (e, v) in c.terms_asc() {
                m.insert((e.add(&TWO_WEIGHTS[i]), i), v.clone());
            }
        }
        m
    }
}

impl ThreeForm {
    pub fn deg(&self) -> MultiDegree {
        self.0.deg().plus(&MultiDegree::Finite(THREE_WEIGHT))
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// `deg df ∧ dg`.
pub fn deg_dwedge(f: &Poly, g: &Poly) -> MultiDegree {
    wedge11(&differential(f), &differential(g)).deg()
}

/// `df1 ∧ df2 ∧ df3 ≠ 0`, i.e. the three polynomials are algebraically
/// independent (characteristic zero).
pub fn independent3(f: &[Poly; 3]) -> bool {
    let w = wedge11(&differential(&f[0]), &differential(&f[1]));
    !wedge21(&w, &differential(&f[2])).is_zero()
}

pub fn independent2(f: &Poly, g: &Poly) -> bool {
    !wedge11(&differential(f), &differential(g)).is_zero()
}
