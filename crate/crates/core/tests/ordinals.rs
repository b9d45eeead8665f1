mod common;

use std::cmp::Ordering;

use common::*;
use num_bigint::BigUint;
use ordlab::ordinal::{enumerate_ordinals, enumeration_count};
use ordlab::{Kind, Ordinal};
use rand::Rng;

#[test]
fn order_matches_repetition_form_oracle() {
    let all = small_enumeration();
    let reps: Vec<Rep> = all.iter().map(to_rep).collect();
    for (a, ra) in all.iter().zip(&reps) {
        for (b, rb) in all.iter().zip(&reps) {
            assert_eq!(a.cmp(b), rep_cmp(ra, rb), "{a} vs {b}");
        }
    }
}

#[test]
fn enumeration_is_sorted_distinct_and_counted() {
    for (h, t, c) in [(0, 2, 2), (1, 2, 2), (1, 3, 3), (2, 3, 3), (3, 2, 2)] {
        let v = enumerate_ordinals(h, t, c, &limits()).unwrap();
        assert_eq!(v.len() as u128, enumeration_count(h, t, c));
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        for a in &v {
            assert!(a.height() <= h);
            assert!(a.term_count() <= t);
            assert!(a.max_coefficient() <= BigUint::from(c.max(1)));
        }
    }
    // height 1: the naturals 0..=2
    assert_eq!(
        enumerate_ordinals(1, 2, 2, &limits()).unwrap(),
        (0..=2u64).map(Ordinal::from).collect::<Vec<_>>()
    );
    assert!(enumerate_ordinals(2, 2, 2, &limits()).unwrap().contains(&ord("w^2+w")));
}

#[test]
fn enumeration_cap_is_a_resource_limit() {
    let mut l = limits();
    l.max_enumeration = 10;
    assert!(matches!(
        enumerate_ordinals(2, 3, 3, &l),
        Err(ordlab::Error::ResourceLimit(_))
    ));
}

#[test]
fn canonical_form_invariants() {
    for a in tall_enumeration().iter().chain(&small_enumeration()) {
        let ts = a.terms();
        assert!(ts.windows(2).all(|w| w[0].exponent() > w[1].exponent()));
        assert!(ts.iter().all(|t| t.coefficient() >= &BigUint::from(1u32)));
    }
}

#[test]
fn addition_examples() {
    assert_eq!(&ord("w") + &ord("w^2"), ord("w^2"));
    assert_eq!((&ord("w^2") + &ord("w")).to_string(), ord("w^2+w").to_string());
    assert_eq!(ord("w").natural_sum(&ord("w^2")), ord("w^2+w"));
    assert_eq!(ord("w*2+1").natural_sum(&ord("w+3")), ord("w*3+4"));
    assert_eq!(&ord("w^3") * &ord("w+2"), ord("w^4+w^3*2"));
    assert_eq!(&ord("w^3") * &ord("w^2"), ord("w^5"));
}

#[test]
fn multiplication_by_naturals_is_repeated_addition() {
    for a in small_enumeration() {
        let mut acc = Ordinal::zero();
        for n in 0..5u64 {
            assert_eq!(&a * &Ordinal::from(n), acc, "{a} * {n}");
            acc = &acc + &a;
        }
    }
}

#[test]
fn multiplication_by_omega_powers_adds_exponents() {
    for a in small_enumeration().into_iter().filter(|a| !a.is_zero()) {
        let lead = a.leading_exponent().unwrap().clone();
        for e in small_enumeration().iter().filter(|e| !e.is_zero()).take(40) {
            let expect = Ordinal::omega_pow(&lead + e);
            assert_eq!(&a * &Ordinal::omega_pow(e.clone()), expect, "{a} * w^{e}");
        }
    }
}

#[test]
fn random_algebra_laws() {
    let mut r = rng(11);
    for _ in 0..20_000 {
        let (a, b, c) = (random_ordinal(&mut r, 2), random_ordinal(&mut r, 2), random_ordinal(&mut r, 2));
        assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        assert_eq!(a.natural_sum(&b), b.natural_sum(&a));
        assert!(a.natural_sum(&b) >= &a + &b);
        assert!(&a + &b >= b);
        assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        assert!(a.natural_sum(&b).max_coefficient() <= a.max_coefficient() + b.max_coefficient());
    }
}

#[test]
fn classification() {
    assert_eq!(Ordinal::zero().classify(), Kind::Zero);
    assert_eq!(ord("w+1").classify(), Kind::Successor);
    assert_eq!(ord("w^w").classify(), Kind::Limit);
    let mut r = rng(5);
    for _ in 0..1000 {
        let a = random_ordinal(&mut r, 2);
        let succ = &a + &Ordinal::one();
        assert_eq!(succ.classify(), Kind::Successor);
        assert_eq!(succ.fund(r.gen_range(0..9)), a);
    }
}

#[test]
fn max_coefficient_examples() {
    assert_eq!(Ordinal::zero().max_coefficient(), BigUint::from(0u32));
    assert_eq!(ord("w^(w*2)*5+w*3").max_coefficient(), BigUint::from(5u32));
    assert_eq!(ord("w").max_coefficient(), BigUint::from(1u32));
}

#[test]
fn towers() {
    let l = limits();
    assert_eq!(ord("w+1").omega_tower(0, &l).unwrap(), ord("w+1"));
    assert_eq!(Ordinal::one().omega_tower(1, &l).unwrap(), ord("w"));
    assert_eq!(Ordinal::one().omega_tower(2, &l).unwrap(), ord("w^w"));
    assert_eq!(Ordinal::omega_d(3, &l).unwrap(), ord("w^w^w"));
    let mut tight = l.clone();
    tight.max_tower = 2;
    assert!(Ordinal::omega_d(3, &tight).is_err());
}

#[test]
fn parse_render_round_trip() {
    for a in small_enumeration().iter().chain(&tall_enumeration()) {
        assert_eq!(ord(&a.to_string()), *a);
    }
    assert_eq!(ord("w+w^2"), ord("w^2"));
    assert_eq!(ord("w_2"), ord("w^w"));
    assert_eq!(ord("w + w + 1"), ord("w*2+1"));
    assert_eq!(ord("w*0"), Ordinal::zero());
    assert_eq!(ord("123456789012345678901234567890").to_string(), "123456789012345678901234567890");
    assert_eq!(ord("w").cmp(&ord("w^2")), Ordering::Less);
}

#[test]
fn parse_errors_carry_positions() {
    for bad in ["w^", "w+*2", "(w", "x", "w**2"] {
        match ordlab::syntax::parse(bad) {
            Err(ordlab::Error::Parse { pos, .. }) => assert!(pos <= bad.len(), "{bad}"),
            other => panic!("{bad}: {other:?}"),
        }
    }
}
