//! Exact sparse linear algebra over Q: incremental row echelon form, particular
//! solutions and null spaces. Used for cancellation systems and span tests.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::poly::{Exp, Poly, Q};

pub type Row = BTreeMap<usize, Q>;

#[derive(Clone, Debug, Default)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<(Row, Q)>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds an equation `row · x = rhs`. Returns `false` when it contradicts
    /// the equations already present.
    pub fn insert(&mut self, mut row: Row, mut rhs: Q) -> bool {
        row.retain(|_, v| !v.is_zero());
        for t in 0..self.rows.len() {
            let p = self.pivots[t];
            if let Some(c) = row.get(&p).cloned() {
                let (prow, prhs) = &self.rows[t];
                for (j, v) in prow {
                    let e = row.entry(*j).or_insert_with(Q::zero);
                    *e -= &c * v;
                    if e.is_zero() {
                        row.remove(j);
                    }
                }
                rhs -= &c * prhs;
            }
        }
        match row.keys().next().copied() {
            None => rhs.is_zero(),
            Some(p) => {
                let inv = row[&p].recip();
                for v in row.values_mut() {
                    *v *= &inv;
                }
                rhs *= &inv;
                self.rows.push((row, rhs));
                self.pivots.push(p);
                true
            }
        }
    }

    fn back_substitute(&self, mut x: Vec<Q>) -> Vec<Q> {
        for t in (0..self.rows.len()).rev() {
            let p = self.pivots[t];
            let (row, rhs) = &self.rows[t];
            let mut v = rhs.clone();
            for (j, a) in row {
                if *j != p {
                    v -= a * &x[*j];
                }
            }
            x[p] = v;
        }
        x
    }

    /// A particular solution with every free variable set to zero.
    pub fn solution(&self) -> Vec<Q> {
        self.back_substitute(vec![Q::zero(); self.ncols])
    }

    /// Basis of the solution space of the homogeneous system.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let piv: BTreeSet<usize> = self.pivots.iter().copied().collect();
        let mut hom = self.clone();
        for r in &mut hom.rows {
            r.1 = Q::zero();
        }
        (0..self.ncols)
            .filter(|c| !piv.contains(c))
            .map(|f| {
                let mut x = vec![Q::zero(); self.ncols];
                x[f] = Q::one();
                hom.back_substitute(x)
            })
            .collect()
    }
}

/// Solves for `c` with `h + Σ c_i b_i` having every entry of class `>= floor`
/// equal to zero. `None` if infeasible.
pub fn kill_from<K: Ord + Clone, C: Ord>(
    h: &BTreeMap<K, Q>,
    basis: &[&BTreeMap<K, Q>],
    class: impl Fn(&K) -> C,
    floor: &C,
) -> Option<Vec<Q>> {
    let mut keys: BTreeSet<K> = BTreeSet::new();
    for k in h.keys() {
        if class(k) >= *floor {
            keys.insert(k.clone());
        }
    }
    for b in basis {
        for k in b.keys() {
            if class(k) >= *floor {
                keys.insert(k.clone());
            }
        }
    }
    let mut ech = Echelon::new(basis.len());
    for k in keys.iter().rev() {
        let row: Row = basis
            .iter()
            .enumerate()
            .filter_map(|(i, b)| b.get(k).map(|v| (i, v.clone())))
            .collect();
        let rhs = h.get(k).map(|v| -v.clone()).unwrap_or_else(Q::zero);
        if !ech.insert(row, rhs) {
            return None;
        }
    }
    Some(ech.solution())
}

/// Like [`kill_from`] with no floor: classes are processed from the top
/// down and the solution for the longest consistent prefix is returned,
/// together with the first class that could not be cleared. `None` when
/// even the top class cannot be cleared.
pub fn kill_descending<K: Ord + Clone, C: Ord + Clone>(
    h: &BTreeMap<K, Q>,
    basis: &[&BTreeMap<K, Q>],
    class: impl Fn(&K) -> C,
) -> Option<(Vec<Q>, Option<C>)> {
    let mut keys: BTreeMap<C, Vec<K>> = BTreeMap::new();
    for k in h.keys().chain(basis.iter().flat_map(|b| b.keys())) {
        let v = keys.entry(class(k)).or_default();
        if !v.contains(k) {
            v.push(k.clone());
        }
    }
    let mut ech = Echelon::new(basis.len());
    let mut first = true;
    for (c, ks) in keys.iter().rev() {
        let saved = (ks.len() > 1).then(|| ech.clone());
        for k in ks {
            let row: Row = basis
                .iter()
                .enumerate()
                .filter_map(|(i, b)| b.get(k).map(|v| (i, v.clone())))
                .collect();
            let rhs = h.get(k).map(|v| -v.clone()).unwrap_or_else(Q::zero);
            if !ech.insert(row, rhs) {
                if first {
                    return None;
                }
                if let Some(s) = saved {
                    ech = s;
                }
                return Some((ech.solution(), Some(c.clone())));
            }
        }
        first = false;
    }
    Some((ech.solution(), None))
}

/// Coefficients `c` (last entry is the constant) with
/// `target = Σ c_i basis_i + c_n`, if `target` lies in the affine span.
pub fn affine_coords(target: &Poly, basis: &[&Poly]) -> Option<Vec<Q>> {
    let one = Poly::one();
    let mut all: Vec<&Poly> = basis.to_vec();
    all.push(&one);
    let maps: Vec<&BTreeMap<Exp, Q>> = all.iter().map(|p| p.terms_map()).collect();
    let neg = -target;
    let floor = Exp::ZERO;
    let c = kill_from(neg.terms_map(), &maps, |e| *e, &floor)?;
    Some(c)
}

/// Echelon basis of the linear span modulo constants: pairwise distinct
/// leading monomials, each monic. Returns `None` if the inputs are dependent
/// modulo constants.
pub fn span_basis(polys: &[Poly]) -> Option<Vec<Poly>> {
    let mut basis: Vec<Poly> = Vec::new();
    for p in polys {
        let r = reduce_by_leads(&p.without_constant(), &basis);
        if r.is_zero() {
            return None;
        }
        basis.push(r.monic());
    }
    Some(basis)
}

/// Cancels the leading term of `p` against elements of `basis` while it
/// collides with one of their leading monomials.
pub fn reduce_by_leads(p: &Poly, basis: &[Poly]) -> Poly {
    let mut r = p.clone();
    loop {
        let Some(le) = r.lead_exp() else { return r };
        let Some(b) = basis.iter().find(|b| b.lead_exp() == Some(le)) else {
            return r;
        };
        let c = r.lead_coeff().unwrap() / b.lead_coeff().unwrap();
        r.add_scaled(b, &-c);
    }
}

/// Cancels every term of `p` that is the leading monomial of a basis
/// element (full reduction against an echelon basis).
pub fn reduce_fully(p: &Poly, basis: &[Poly]) -> Poly {
    let mut r = p.clone();
    let mut sorted: Vec<&Poly> = basis.iter().collect();
    sorted.sort_by_key(|b| std::cmp::Reverse(b.lead_exp()));
    for b in sorted {
        let le = b.lead_exp().unwrap();
        let c = r.coeff(&le);
        if !c.is_zero() {
            r.add_scaled(b, &-(c / b.lead_coeff().unwrap()));
        }
    }
    r
}

/// Inverse of a 3×3 rational matrix, `None` when singular.
pub fn invert3(m: &[[Q; 3]; 3]) -> Option<[[Q; 3]; 3]> {
    let mut a: Vec<Vec<Q>> = (0..3)
        .map(|i| {
            let mut r = m[i].to_vec();
            r.extend((0..3).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..3 {
        let piv = (col..3).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..3 {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..6 {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                }
            }
        }
    }
    Some(std::array::from_fn(|i| std::array::from_fn(|j| a[i][j + 3].clone())))
}

/// Basis of `span(a) ∩ span(b)` modulo constants, as elements written in
/// terms of `a` (constants dropped).
pub fn span_intersection(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let n = a.len() + b.len();
    let mut rows: BTreeMap<Exp, Row> = BTreeMap::new();
    for (i, p) in a.iter().chain(b).enumerate() {
        let sign = if i < a.len() { Q::one() } else { -Q::one() };
        for (e, c) in p.terms_asc() {
            if *e != Exp::ZERO {
                rows.entry(*e).or_default().insert(i, c * &sign);
            }
        }
    }
    let mut ech = Echelon::new(n);
    for (_, r) in rows {
        ech.insert(r, Q::zero());
    }
    ech.nullspace()
        .into_iter()
        .map(|x| {
            let mut p = Poly::zero();
            for (i, ai) in a.iter().enumerate() {
                p.add_scaled(ai, &x[i]);
            }
            p.without_constant()
        })
        .filter(|p| !p.is_zero())
        .collect()
}

/// Rank of a list of rows.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let n = rows.first().map_or(0, Vec::len);
    let mut ech = Echelon::new(n);
    for r in rows {
        ech.insert(r.iter().cloned().enumerate().collect(), Q::zero());
    }
    ech.rank()
}
