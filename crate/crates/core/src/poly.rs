//! Sparse polynomials in `x1, x2, x3` over exact rationals, ordered by
//! graded-lexicographic multidegree.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Exponent triple of a monomial. `Ord` is graded-lex.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Exp(pub [u32; 3]);

impl Exp {
    pub const ZERO: Exp = Exp([0, 0, 0]);

    pub fn unit(i: usize) -> Exp {
        let mut e = [0; 3];
        e[i] = 1;
        Exp(e)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&a| a as u64).sum()
    }

    pub fn add(&self, o: &Exp) -> Exp {
        let mut r = [0; 3];
        for i in 0..3 {
            r[i] = self.0[i].checked_add(o.0[i]).expect("exponent overflow");
        }
        Exp(r)
    }

    pub fn scale(&self, k: u32) -> Exp {
        let mut r = [0; 3];
        for i in 0..3 {
            r[i] = self.0[i].checked_mul(k).expect("exponent overflow");
        }
        Exp(r)
    }
}

impl Ord for Exp {
    fn cmp(&self, o: &Self) -> Ordering {
        self.total().cmp(&o.total()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Exp {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// `deg` of a polynomial: a graded-lex exponent triple, or `-inf` for zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum MultiDegree {
    NegInfinity,
    Finite(Exp),
}

impl MultiDegree {
    pub fn new(a: u32, b: u32, c: u32) -> Self {
        MultiDegree::Finite(Exp([a, b, c]))
    }

    pub fn exp(&self) -> Option<Exp> {
        match self {
            MultiDegree::Finite(e) => Some(*e),
            MultiDegree::NegInfinity => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, MultiDegree::Finite(_))
    }

    pub fn sdeg(&self) -> Option<SDeg> {
        self.exp().map(SDeg::from)
    }

    /// Component-wise sum; `-inf` absorbs.
    pub fn plus(&self, o: &MultiDegree) -> MultiDegree {
        match (self, o) {
            (MultiDegree::Finite(a), MultiDegree::Finite(b)) => MultiDegree::Finite(a.add(b)),
            _ => MultiDegree::NegInfinity,
        }
    }

    pub fn times(&self, k: u32) -> MultiDegree {
        match self {
            MultiDegree::Finite(a) => MultiDegree::Finite(a.scale(k)),
            MultiDegree::NegInfinity => MultiDegree::NegInfinity,
        }
    }
}

impl Ord for MultiDegree {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self, o) {
            (MultiDegree::NegInfinity, MultiDegree::NegInfinity) => Ordering::Equal,
            (MultiDegree::NegInfinity, _) => Ordering::Less,
            (_, MultiDegree::NegInfinity) => Ordering::Greater,
            (MultiDegree::Finite(a), MultiDegree::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for MultiDegree {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultiDegree::NegInfinity => write!(f, "-inf"),
            MultiDegree::Finite(Exp([a, b, c])) => write!(f, "({a},{b},{c})"),
        }
    }
}

pub fn mdeg_cmp(a: &MultiDegree, b: &MultiDegree) -> Ordering {
    a.cmp(b)
}

/// Signed degree in Z^3, for differences like `deg f1 - deg f2 + d`.
/// Compared graded-lex like `Exp`. Rational multiples are compared by
/// clearing denominators with [`SDeg::scale`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct SDeg(pub [i64; 3]);

impl SDeg {
    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn scale(&self, k: i64) -> SDeg {
        SDeg([self.0[0] * k, self.0[1] * k, self.0[2] * k])
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0, 0, 0]
    }

    /// Back to N^3 when every coordinate is non-negative.
    pub fn to_exp(&self) -> Option<Exp> {
        if self.0.iter().all(|&a| a >= 0) {
            Some(Exp([self.0[0] as u32, self.0[1] as u32, self.0[2] as u32]))
        } else {
            None
        }
    }

    /// Exact division by a positive integer, if it stays integral.
    pub fn div_exact(&self, k: i64) -> Option<SDeg> {
        if k == 0 || self.0.iter().any(|a| a % k != 0) {
            None
        } else {
            Some(SDeg([self.0[0] / k, self.0[1] / k, self.0[2] / k]))
        }
    }

    /// Compares `self` with a possibly infinite degree (`-inf` is least).
    pub fn cmp_deg(&self, d: &MultiDegree) -> Ordering {
        match d.sdeg() {
            None => Ordering::Greater,
            Some(s) => self.cmp(&s),
        }
    }
}

impl From<Exp> for SDeg {
    fn from(e: Exp) -> Self {
        SDeg([e.0[0] as i64, e.0[1] as i64, e.0[2] as i64])
    }
}

impl Add for SDeg {
    type Output = SDeg;
    fn add(self, o: SDeg) -> SDeg {
        SDeg([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for SDeg {
    type Output = SDeg;
    fn sub(self, o: SDeg) -> SDeg {
        SDeg([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Ord for SDeg {
    fn cmp(&self, o: &Self) -> Ordering {
        self.total().cmp(&o.total()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for SDeg {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for SDeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Term {
    pub coeff: Q,
    pub exp: Exp,
}

impl Term {
    pub fn deg(&self) -> MultiDegree {
        MultiDegree::Finite(self.exp)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Poly {
    terms: BTreeMap<Exp, Q>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Poly {
        Poly::monomial(c, Exp::ZERO)
    }

    pub fn var(i: usize) -> Poly {
        Poly::monomial(Q::one(), Exp::unit(i))
    }

    pub fn monomial(c: Q, e: Exp) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Exp, Q)>>(it: I) -> Poly {
        let mut p = Poly::zero();
        for (e, c) in it {
            p.add_term(e, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| *e == Exp::ZERO)
    }

    /// Total degree at most one.
    pub fn is_affine(&self) -> bool {
        self.terms.keys().all(|e| e.total() <= 1)
    }

    pub fn coeff(&self, e: &Exp) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Exp::ZERO)
    }

    pub fn without_constant(&self) -> Poly {
        let mut p = self.clone();
        p.terms.remove(&Exp::ZERO);
        p
    }

    /// Terms in descending graded-lex order.
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Exp, &Q)> {
        self.terms.iter().rev()
    }

    pub fn terms_asc(&self) -> impl Iterator<Item = (&Exp, &Q)> {
        self.terms.iter()
    }

    pub fn deg(&self) -> MultiDegree {
        match self.terms.keys().next_back() {
            Some(e) => MultiDegree::Finite(*e),
            None => MultiDegree::NegInfinity,
        }
    }

    pub fn top_term(&self) -> Result<Term> {
        self.terms
            .iter()
            .next_back()
            .map(|(e, c)| Term { coeff: c.clone(), exp: *e })
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn lead_exp(&self) -> Option<Exp> {
        self.terms.keys().next_back().copied()
    }

    pub fn lead_coeff(&self) -> Option<&Q> {
        self.terms.values().next_back()
    }

    pub fn add_term(&mut self, e: Exp, c: &Q) {
        if c.is_zero() {
            return;
        }
        let remove = match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                v.is_zero()
            }
            None => {
                self.terms.insert(e, c.clone());
                false
            }
        };
        if remove {
            self.terms.remove(&e);
        }
    }

    /// `self += c * other`, in place.
    pub fn add_scaled(&mut self, other: &Poly, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (e, v) in &other.terms {
            self.add_term(*e, &(v * c));
        }
    }

    /// `(L, [(e, L·c_e)])` with `L` the lcm of the denominators.
    fn integer_parts(&self) -> (BigInt, Vec<(Exp, BigInt)>) {
        let l = self.terms.values().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let n = self.terms.iter().map(|(e, c)| (*e, c.numer() * (&l / c.denom()))).collect();
        (l, n)
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    /// Scales so the top coefficient is 1; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.lead_coeff() {
            Some(c) => self.scale(&c.recip()),
            None => Poly::zero(),
        }
    }

    pub fn mul_term(&self, c: &Q, e: &Exp) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(f, v)| (f.add(e), v * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial derivative with respect to `x_{i+1}`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let a = e.0[i];
            if a == 0 {
                continue;
            }
            let mut f = *e;
            f.0[i] -= 1;
            out.terms.insert(f, c * q(a as i64));
        }
        out
    }

    /// Which variables occur.
    pub fn support_vars(&self) -> [bool; 3] {
        let mut s = [false; 3];
        for e in self.terms.keys() {
            for i in 0..3 {
                if e.0[i] > 0 {
                    s[i] = true;
                }
            }
        }
        s
    }

    /// Replaces `x1, x2, x3` by the three target polynomials.
    pub fn substitute(&self, target: &[Poly; 3]) -> Poly {
        let mut maxe = [0u32; 3];
        for e in self.terms.keys() {
            for i in 0..3 {
                maxe[i] = maxe[i].max(e.0[i]);
            }
        }
        let powers: Vec<Vec<Poly>> = (0..3)
            .map(|i| {
                let mut v = vec![Poly::one()];
                for k in 1..=maxe[i] as usize {
                    let next = &v[k - 1] * &target[i];
                    v.push(next);
                }
                v
            })
            .collect();
        let mut pair_cache: HashMap<(u32, u32), Poly> = HashMap::new();
        let mut acc: HashMap<Exp, Q> = HashMap::new();
        for (e, c) in &self.terms {
            let key = (e.0[0], e.0[1]);
            let pair = pair_cache
                .entry(key)
                .or_insert_with(|| &powers[0][key.0 as usize] * &powers[1][key.1 as usize]);
            let full = if e.0[2] == 0 { pair.clone() } else { &*pair * &powers[2][e.0[2] as usize] };
            for (f, v) in full.terms {
                *acc.entry(f).or_insert_with(Q::zero) += v * c;
            }
        }
        Poly { terms: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    /// Evaluation at a rational point.
    pub fn eval(&self, pt: &[Q; 3]) -> Q {
        let mut s = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..3 {
                for _ in 0..e.0[i] {
                    t *= &pt[i];
                }
            }
            s += t;
        }
        s
    }

    pub fn into_terms(self) -> BTreeMap<Exp, Q> {
        self.terms
    }

    pub fn terms_map(&self) -> &BTreeMap<Exp, Q> {
        &self.terms
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c);
        }
        r
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, &-c);
        }
        r
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        // integer products over a common denominator, reduced once per term
        let (d1, n1) = self.integer_parts();
        let (d2, n2) = o.integer_parts();
        let mut acc: HashMap<Exp, BigInt> = HashMap::with_capacity(self.len() * o.len());
        for (e1, c1) in &n1 {
            for (e2, c2) in &n2 {
                *acc.entry(e1.add(e2)).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        let den = d1 * d2;
        Poly {
            terms: acc.into_iter().filter(|(_, v)| !v.is_zero()).map(|(e, v)| (e, Q::new(v, den.clone()))).collect(),
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $m(self, o: &Poly) -> Poly {
                (&self).$m(o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

pub(crate) fn fmt_rational(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub(crate) fn fmt_poly_in(p: &Poly, names: [&str; 3]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (e, c)) in p.terms_desc().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        if !a.is_one() || *e == Exp::ZERO {
            factors.push(fmt_rational(&a));
        }
        for i in 0..3 {
            match e.0[i] {
                0 => {}
                1 => factors.push(names[i].to_string()),
                n => factors.push(format!("{}^{}", names[i], n)),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_poly_in(self, ["x1", "x2", "x3"]))
    }
}

pub fn x1() -> Poly {
    Poly::var(0)
}
pub fn x2() -> Poly {
    Poly::var(1)
}
pub fn x3() -> Poly {
    Poly::var(2)
}
