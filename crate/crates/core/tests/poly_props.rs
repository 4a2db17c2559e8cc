mod common;

use std::cmp::Ordering;

use proptest::prelude::*;

use common::{dense, dense_mul, dense_substitute};
use tame3::forms::{deg_dwedge, differential, wedge11, wedge21};
use tame3::io::parse::{parse_poly, print_poly};
use tame3::poly::{mdeg_cmp, q, qf, x1, x2, x3, Exp, MultiDegree, Poly};

fn poly_strategy(max_exp: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0..=max_exp, 0..=max_exp, 0..=max_exp), -6i64..=6, 1i64..=3), 0..=max_terms).prop_map(|ts| {
        Poly::from_terms(ts.into_iter().map(|((a, b, c), n, d)| (Exp([a, b, c]), qf(n, d))))
    })
}

fn exp_strategy() -> impl Strategy<Value = Exp> {
    (0u32..6, 0u32..6, 0u32..6).prop_map(|(a, b, c)| Exp([a, b, c]))
}

#[test]
fn degree_examples() {
    let d = MultiDegree::new;
    assert_eq!(mdeg_cmp(&d(1, 0, 0), &d(0, 1, 0)), Ordering::Greater);
    assert_eq!(mdeg_cmp(&d(0, 0, 3), &d(2, 0, 0)), Ordering::Greater);
    assert_eq!(mdeg_cmp(&MultiDegree::NegInfinity, &d(0, 0, 0)), Ordering::Less);
    assert_eq!((x1() + x2().pow(5)).deg(), d(0, 5, 0));
    let t = (x2().pow(3) - x2().pow(3) + x3()).top_term().unwrap();
    assert_eq!((t.exp, t.coeff), (Exp([0, 0, 1]), q(1)));
}

#[test]
fn nagata_top_term_against_dense_expansion() {
    let s = x2().pow(2) - &x1() * &x3();
    let f1 = x1() + (&x2() * &s).scale(&q(2)) + &x3() * &s.pow(2);
    let ds = dense(&s);
    let mut expected = dense_mul(&dense(&x3()), &dense_mul(&ds, &ds));
    for (e, c) in dense(&(x1() + (&x2() * &s).scale(&q(2)))) {
        *expected.entry(e).or_default() += c;
    }
    expected.retain(|_, c| *c != q(0));
    assert_eq!(dense(&f1), expected);
    let top = expected.keys().map(|e| Exp(*e)).max().unwrap();
    assert_eq!(top, Exp([2, 0, 3]));
    assert_eq!(f1.top_term().unwrap().coeff, q(1));
}

#[test]
fn square_expansion() {
    let s = x2().pow(2) - &x1() * &x3();
    let expected = x2().pow(4) - (&(&x1() * &x2().pow(2)) * &x3()).scale(&q(2)) + (&x1().pow(2) * &x3().pow(2));
    assert_eq!(s.pow(2), expected);
    assert_eq!(dense(&s.pow(2)), dense_mul(&dense(&s), &dense(&s)));
}

#[test]
fn first_substitution_of_cubic_word() {
    let a = qf(3, 2);
    let t1 = [
        x1() + (&x2() * &x3()).scale(&a) + x3().pow(3),
        x2() + x3().pow(2),
        x3(),
    ];
    let g3 = x3() + x1().pow(2) - x2().pow(3);
    let quad = (&x1() * &x3()).scale(&q(8)) - x2().pow(2).scale(&q(3));
    let printed = x3() + x1().pow(2) - x2().pow(3)
        + (&(&x1() * &x2()) * &x3()).scale(&q(3))
        + (&x3().pow(2) * &quad).scale(&qf(1, 4));
    assert_eq!(g3.substitute(&t1), printed);
    assert_eq!(dense(&printed), dense_substitute(&g3, &t1));
}

#[test]
fn form_examples() {
    let f = x3() + x1().pow(2);
    assert_eq!(differential(&f).0, [x1().scale(&q(2)), Poly::zero(), Poly::one()]);
    assert!(differential(&Poly::constant(q(7))).is_zero());
    let g = x2().pow(2) - &x1() * &x3();
    assert_eq!(differential(&g).0, [-x3(), x2().scale(&q(2)), -x1()]);
    let (d1, d2, d3) = (differential(&x1()), differential(&x2()), differential(&x3()));
    let w = wedge11(&d1, &d2);
    assert_eq!(w.0, [Poly::one(), Poly::zero(), Poly::zero()]);
    assert!(wedge11(&d1, &d1).is_zero());
    assert_eq!(wedge21(&w, &d3).0, Poly::one());
    assert!(wedge21(&w, &d1).is_zero());
    assert_eq!(differential(&f).deg(), MultiDegree::new(2, 0, 0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn grlex_is_a_total_order_compatible_with_addition(a in exp_strategy(), b in exp_strategy(), c in exp_strategy()) {
        let ord = a.cmp(&b);
        prop_assert_eq!(ord.reverse(), b.cmp(&a));
        prop_assert_eq!(a.add(&c).cmp(&b.add(&c)), ord);
        if a.total() != b.total() {
            prop_assert_eq!(ord, a.total().cmp(&b.total()));
        }
    }

    #[test]
    fn ring_laws(a in poly_strategy(3, 5), b in poly_strategy(3, 5), c in poly_strategy(2, 4)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(dense(&(&a * &b)), dense_mul(&dense(&a), &dense(&b)));
    }

    #[test]
    fn degree_of_product_is_sum(a in poly_strategy(4, 5), b in poly_strategy(4, 5)) {
        prop_assert_eq!((&a * &b).deg(), a.deg().plus(&b.deg()));
        prop_assert!((&a + &b).deg() <= a.deg().max(b.deg()));
    }

    #[test]
    fn substitution_is_a_homomorphism(
        a in poly_strategy(2, 4),
        b in poly_strategy(2, 4),
        t in prop::array::uniform3(poly_strategy(2, 3)),
    ) {
        prop_assert_eq!((&a * &b).substitute(&t), &a.substitute(&t) * &b.substitute(&t));
        prop_assert_eq!((&a + &b).substitute(&t), &a.substitute(&t) + &b.substitute(&t));
        prop_assert_eq!(dense(&a.substitute(&t)), dense_substitute(&a, &t));
        prop_assert_eq!(a.substitute(&[x1(), x2(), x3()]), a.clone());
    }

    #[test]
    fn print_then_parse_is_identity(a in poly_strategy(4, 6)) {
        prop_assert_eq!(parse_poly(&print_poly(&a)).unwrap(), a);
    }

    #[test]
    fn differential_keeps_degree(g in poly_strategy(4, 6)) {
        prop_assume!(!g.is_constant());
        prop_assert_eq!(differential(&g).deg(), g.without_constant().deg());
    }

    #[test]
    fn form_degree_laws(f in poly_strategy(3, 4), g in poly_strategy(3, 4), h in poly_strategy(3, 4)) {
        let (df, dg) = (differential(&f), differential(&g));
        let w = wedge11(&df, &dg);
        prop_assert!(df.deg().plus(&dg.deg()) >= w.deg());
        prop_assert_eq!(df.scale_by(&h).deg(), h.deg().plus(&df.deg()));
        prop_assert_eq!(w.scale_by(&h).deg(), h.deg().plus(&w.deg()));
        prop_assert_eq!(deg_dwedge(&f, &g), w.deg());
        prop_assert!(wedge11(&df, &df).is_zero());
    }
}
