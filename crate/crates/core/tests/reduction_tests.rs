mod common;

use rand::Rng;

use common::{fixture, k_checks, random_poly, rng, small_automorphism, CUBIC, QUINTIC, NAGATA};
use tame3::analysis::BiPoly;
use tame3::complex::{
    eval_word, line_attributes, neighbor, spf_check, Automorphism, Line, Point, TameWord, Vertex3,
};
use tame3::error::Error;
use tame3::forms::{deg_dwedge, differential, wedge11};
use tame3::io::{gen_tame, GeneratorSpec};
use tame3::poly::{q, qf, x1, x2, x3, Exp, MultiDegree, Poly};
use tame3::reduction::{
    classify_elementary_k, classify_proper_k, elementary_search, nontame_certificate, normalize_proper_k,
    reduce_once, reduction_path, simple_search, square_rewrite, ReduceOutcome, ReductionKind, ReductionPath,
    ReductionStep, SearchBudget,
};

fn d(a: u32, b: u32, c: u32) -> MultiDegree {
    MultiDegree::new(a, b, c)
}

fn first_step(v: &Vertex3) -> ReductionStep {
    match reduce_once(v, &SearchBudget::default()).unwrap() {
        ReduceOutcome::Step(s) => s,
        ReduceOutcome::NonReducible(r) => panic!("{}", r),
    }
}

/// `[t1 ∘ t2]`: the fixture word without its first factor.
fn tail_vertex(f: &Automorphism) -> Vertex3 {
    let w = f.witness.as_ref().unwrap();
    eval_word(&TameWord::new(w.factors[1..].to_vec())).unwrap().vertex().unwrap()
}

fn assert_strictly_decreasing(p: &ReductionPath) {
    for s in &p.steps {
        assert!(s.target.total_degree() < s.source.total_degree(), "{} -> {}", s.source.degrees(), s.target.degrees());
    }
    for w in p.steps.windows(2) {
        assert_eq!(w[0].target, w[1].source);
    }
    assert!(p.terminal.is_identity());
}

#[test]
fn cubic_k_golden() {
    let f = fixture(CUBIC);
    let c = &f.components;
    assert_eq!([c[0].deg(), c[1].deg(), c[2].deg()], [d(9, 0, 0), d(6, 0, 0), d(7, 0, 1)]);
    let w = wedge11(&differential(&c[0]), &differential(&c[1]));
    assert_eq!(w.deg(), d(4, 0, 1));
    let dx13 = (&x1().pow(3).scale(&qf(-9, 4)) - &(&x1() * &x2()).scale(&qf(3, 2))) + x3().scale(&q(2));
    assert_eq!(w.0[1], dx13);
    // (2α − 3)s² − αu with u = x2 + x1², s the third entry of t2
    let dx23 = (x1().pow(2) + x2()).scale(&qf(-3, 2));
    assert_eq!(w.0[2], dx23);

    let v = f.vertex().unwrap();
    let s = first_step(&v);
    assert_eq!(s.kind, ReductionKind::ElementaryK);
    assert_eq!(s.target, tail_vertex(&f));
    let spf = spf_check(&s.pivot, &s.center, &v).unwrap().unwrap();
    assert_eq!((spf.s, spf.delta), (3, Exp([3, 0, 0])));
    let attrs = line_attributes(&s.center);
    assert_eq!(attrs.d, d(4, 0, 1));
    assert_eq!(attrs.delta.0, [7, 0, 1]);
    assert_eq!(v.degree_outside(&s.center).unwrap(), Exp([7, 0, 1]));
    assert_eq!(s.target.degree_outside(&s.center).unwrap(), Exp([3, 0, 0]));
    let e = classify_elementary_k(&v, &s.target).unwrap().unwrap();
    assert!(e.conditions.iter().all(|c| *c));

    let p = reduction_path(&f, &SearchBudget::default()).unwrap();
    assert_eq!(p.steps[0].kind, ReductionKind::ElementaryK);
    assert_strictly_decreasing(&p);
}

#[test]
fn quintic_k_golden() {
    let f = fixture(QUINTIC);
    let c = &f.components;
    assert_eq!([c[0].deg(), c[1].deg(), c[2].deg()], [d(25, 0, 0), d(10, 0, 0), d(20, 3, 0)]);
    assert_eq!(deg_dwedge(&c[0], &c[1]), d(5, 3, 0));
    let v = f.vertex().unwrap();
    let s = first_step(&v);
    assert_eq!(s.kind, ReductionKind::ElementaryK);
    assert_eq!(s.target, tail_vertex(&f));
    let t = s.target.degrees();
    assert_eq!(t.stratified, vec![d(5, 0, 0), d(10, 0, 0), d(25, 0, 0)]);
    let spf = spf_check(&s.pivot, &s.center, &v).unwrap().unwrap();
    assert_eq!((spf.s, spf.delta), (5, Exp([5, 0, 0])));
    let attrs = line_attributes(&s.center);
    assert_eq!((attrs.d, attrs.delta.0), (d(5, 3, 0), [20, 3, 0]));
}

#[test]
fn fixture_k_reductions_pass_cross_checks() {
    for src in [CUBIC, QUINTIC] {
        let v = fixture(src).vertex().unwrap();
        let s = first_step(&v);
        let k = k_checks(&s);
        assert!(k.all(), "{:?}", k);
    }
}

#[test]
fn non_normal_proper_k_is_normalized() {
    let f = fixture(QUINTIC);
    let [f1, f2, f3] = f.components.clone();
    let w = f.vertex().unwrap();
    let u = first_step(&w).target;
    let v = Vertex3::new([&f1 + &f2.pow(2), f2, f3]).unwrap();
    assert_eq!(v.total_degree(), w.total_degree());
    let e = classify_proper_k(&v, &w, &u).unwrap().expect("proper K-reduction");
    assert!(!e.normal);
    assert!(e.conditions.iter().all(|c| *c));
    let u2 = normalize_proper_k(&v, &w, &u).unwrap();
    assert!(u2.total_degree() < v.total_degree());
    let k = classify_elementary_k(&v, &u2).unwrap().expect("elementary K-reduction");
    assert!(k.holds());
}

#[test]
fn simple_reduction_needs_a_multiple_of_f3() {
    let f1 = x1() + x2().pow(2) + x2().pow(3);
    let f3 = x3() + x2().pow(2);
    let v = Vertex3::new([f1, x2(), f3.clone()]).unwrap();
    let center = Line::new(f3.clone(), x2()).unwrap();
    let s = simple_search(&v, &center, &Point::new(x2()).unwrap()).unwrap().unwrap();
    assert_eq!(s.target, Vertex3::new([x1() - x3(), x2(), f3]).unwrap());
    let [c1, c2] = center.rep().clone();
    let g = s.data.eval(&c1, &c2);
    assert_eq!(g, -x2().pow(3) - x3() - x2().pow(2));

    // with f3 on top, a must vanish and nothing is found
    let v = Vertex3::new([x1() + x2().pow(2), x2(), x3() + x2().pow(2) + x2().pow(3)]).unwrap();
    let center = Line::new(x3() + x2().pow(2) + x2().pow(3), x2()).unwrap();
    let s = simple_search(&v, &center, &Point::new(x2()).unwrap()).unwrap().unwrap();
    assert_eq!(s.target, Vertex3::new([x1(), x2(), x3() + x2().pow(2) + x2().pow(3)]).unwrap());
    let [c1, c2] = center.rep().clone();
    assert_eq!(s.data.eval(&c1, &c2), -x2().pow(2));
}

#[test]
fn square_of_two_reductions() {
    let f1 = x1() + x2().pow(3);
    let v = Vertex3::new([f1.clone(), x2(), x3() + f1.pow(2)]).unwrap();
    let c1 = Line::new(f1.clone(), x2()).unwrap();
    let found = elementary_search(&v, &c1, &SearchBudget::default()).unwrap().unwrap();
    let prime = ReductionStep {
        kind: ReductionKind::Elementary,
        source: v.clone(),
        target: found.target,
        pivot: c1.minimal_vertex(),
        center: c1,
        data: found.p,
        auxiliary: None,
    };
    let c2 = Line::new(x3() + f1.pow(2), x2()).unwrap();
    let second = simple_search(&v, &c2, &Point::new(x2()).unwrap()).unwrap().unwrap();
    let sq = square_rewrite(&v, &prime, &second).unwrap();
    assert!(sq.u.is_identity());
    assert!(prime.target.contains_line(&sq.via_prime) && sq.u.contains_line(&sq.via_prime));
    assert!(second.target.contains_line(&sq.via_second) && sq.u.contains_line(&sq.via_second));
    assert!(matches!(square_rewrite(&v, &prime, &prime), Err(Error::HypothesesUnmet(_))));
}

#[test]
fn nagata_is_certified() {
    let f = fixture(NAGATA);
    let c = nontame_certificate(&f).unwrap().unwrap();
    assert_eq!(c.degrees, [Exp([2, 0, 3]), Exp([1, 0, 2]), Exp([0, 0, 1])]);
    assert!(c.valid());
    assert!(nontame_certificate(&fixture(CUBIC)).unwrap().is_none());
    assert!(reduction_path(&f, &SearchBudget::default()).is_err());
}

/// A random non-affine `P` planted on a triangle line is undone by the
/// search, down to at least the planted degree.
#[test]
fn planted_reductions_are_recovered() {
    let mut r = rng(314);
    let budget = SearchBudget::default();
    let mut done = 0;
    let mut seed = 0;
    while done < 100 {
        seed += 1;
        let v = small_automorphism(5000 + seed).vertex().unwrap();
        let (center, _) = v.triangle_lines()[r.gen_range(0..3)].clone();
        let p = random_poly(&mut r, 3, 3);
        let Some(b) = BiPoly::from_poly(&p.substitute(&[x1(), x2(), Poly::zero()])) else { continue };
        if b.is_affine() {
            continue;
        }
        let u = neighbor(&v, &center, &b).unwrap();
        if u.total_degree() <= v.total_degree() {
            continue;
        }
        let found = elementary_search(&u, &center, &budget).unwrap().expect("planted reduction");
        assert!(found.target.total_degree() <= v.total_degree(), "seed {}", seed);
        done += 1;
    }
}

#[test]
fn random_words_reduce_to_identity() {
    for seed in 0..100 {
        let f = eval_word(&gen_tame(&GeneratorSpec::new(seed, 8))).unwrap();
        let p = reduction_path(&f, &SearchBudget::default()).unwrap_or_else(|e| panic!("seed {}: {}", seed, e));
        assert_strictly_decreasing(&p);
    }
}
