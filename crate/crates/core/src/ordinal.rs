//! Ordinals below ε₀ in Cantor normal form.
//!
//! An [`Ordinal`] is a finite sum `ω^e₀·k₀ + … + ω^eₙ·kₙ` with strictly
//! decreasing exponents `e₀ > … > eₙ` (themselves ordinals) and positive
//! coefficients. The empty sum is zero. Because the representation is
//! canonical, structural equality coincides with ordinal equality and the
//! derived `Hash` is sound.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;

/// Arbitrary-precision natural number.
pub type Nat = BigUint;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

/// One CNF summand `ω^exponent · coefficient`, coefficient ≥ 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term {
    exponent: Ordinal,
    coefficient: Nat,
}

impl Term {
    pub fn exponent(&self) -> &Ordinal {
        &self.exponent
    }

    pub fn coefficient(&self) -> &Nat {
        &self.coefficient
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    Zero,
    Successor,
    Limit,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Zero => "zero",
            Kind::Successor => "successor",
            Kind::Limit => "limit",
        })
    }
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::nat(1u32)
    }

    pub fn omega() -> Self {
        Self::omega_pow(Ordinal::one())
    }

    /// The finite ordinal `n`.
    pub fn nat(n: impl Into<Nat>) -> Self {
        Self::omega_pow_mul(Ordinal::zero(), n)
    }

    /// `ω^e`.
    pub fn omega_pow(e: Ordinal) -> Self {
        Self::omega_pow_mul(e, 1u32)
    }

    /// `ω^e · k`; zero when `k = 0`.
    pub fn omega_pow_mul(e: Ordinal, k: impl Into<Nat>) -> Self {
        let k = k.into();
        if k.is_zero() {
            return Ordinal::zero();
        }
        Ordinal {
            terms: vec![Term {
                exponent: e,
                coefficient: k,
            }],
        }
    }

    /// Builds an ordinal from CNF terms, rejecting non-canonical input
    /// (exponents not strictly decreasing, or a zero coefficient).
    pub fn from_terms(terms: impl IntoIterator<Item = (Ordinal, Nat)>) -> Result<Self> {
        let mut out: Vec<Term> = Vec::new();
        for (exponent, coefficient) in terms {
            if coefficient.is_zero() {
                return Err(Error::Domain("CNF coefficient must be positive".into()));
            }
            if let Some(prev) = out.last() {
                if prev.exponent <= exponent {
                    return Err(Error::Domain(format!(
                        "CNF exponents must strictly decrease ({} then {})",
                        prev.exponent, exponent
                    )));
                }
            }
            out.push(Term {
                exponent,
                coefficient,
            });
        }
        Ok(Ordinal { terms: out })
    }

    /// Accepts the repetition form `ω^e₀ + … + ω^eₙ` with `e₀ ≥ … ≥ eₙ` and
    /// collapses equal neighbours into coefficients.
    pub fn from_repetition(exponents: impl IntoIterator<Item = Ordinal>) -> Result<Self> {
        let mut out: Vec<Term> = Vec::new();
        for e in exponents {
            match out.last_mut() {
                Some(t) if t.exponent == e => t.coefficient += 1u32,
                Some(t) if t.exponent < e => {
                    return Err(Error::Domain(format!(
                        "repetition form requires non-increasing exponents ({} then {})",
                        t.exponent, e
                    )))
                }
                _ => out.push(Term {
                    exponent: e,
                    coefficient: Nat::one(),
                }),
            }
        }
        Ok(Ordinal { terms: out })
    }

    /// Ordinal sum of the given summands, left to right.
    pub fn sum<'a>(parts: impl IntoIterator<Item = &'a Ordinal>) -> Ordinal {
        parts
            .into_iter()
            .fold(Ordinal::zero(), |acc, p| &acc + p)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|t| t.exponent.is_zero())
    }

    /// The value as a natural number, if finite.
    pub fn as_nat(&self) -> Option<Nat> {
        match self.terms.as_slice() {
            [] => Some(Nat::zero()),
            [t] if t.exponent.is_zero() => Some(t.coefficient.clone()),
            _ => None,
        }
    }

    pub fn as_u64(&self) -> Option<u64> {
        self.as_nat().and_then(|n| n.to_u64())
    }

    pub fn leading_exponent(&self) -> Option<&Ordinal> {
        self.terms.first().map(|t| &t.exponent)
    }

    pub fn last_term(&self) -> Option<&Term> {
        self.terms.last()
    }

    pub fn classify(&self) -> Kind {
        match self.terms.last() {
            None => Kind::Zero,
            Some(t) if t.exponent.is_zero() => Kind::Successor,
            Some(_) => Kind::Limit,
        }
    }

    pub fn is_limit(&self) -> bool {
        self.classify() == Kind::Limit
    }

    pub fn is_successor(&self) -> bool {
        self.classify() == Kind::Successor
    }

    /// Exponent nesting depth: 0 for zero, otherwise one more than the
    /// deepest exponent. Finite ordinals have height 1, `ω` height 2.
    pub fn height(&self) -> usize {
        self.terms
            .iter()
            .map(|t| 1 + t.exponent.height())
            .max()
            .unwrap_or(0)
    }

    /// Total number of CNF terms at every nesting level.
    pub fn size(&self) -> usize {
        self.terms.iter().map(|t| 1 + t.exponent.size()).sum()
    }

    /// Maximal coefficient: the largest integer occurring anywhere in the
    /// CNF, recursively through exponents. `MC(0) = 0`.
    pub fn max_coefficient(&self) -> Nat {
        let mut best = Nat::zero();
        for t in &self.terms {
            if t.coefficient > best {
                best = t.coefficient.clone();
            }
            let inner = t.exponent.max_coefficient();
            if inner > best {
                best = inner;
            }
        }
        best
    }

    /// Hessenberg sum: merges the terms of both operands by exponent.
    pub fn natural_sum(&self, other: &Ordinal) -> Ordinal {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match a.exponent.cmp(&b.exponent) {
                Ordering::Greater => {
                    terms.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    terms.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    terms.push(Term {
                        exponent: a.exponent.clone(),
                        coefficient: &a.coefficient + &b.coefficient,
                    });
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&self.terms[i..]);
        terms.extend_from_slice(&other.terms[j..]);
        Ordinal { terms }
    }

    /// `ω_d(self)`: `ω_0(α) = α`, `ω_{d+1}(α) = ω^{ω_d(α)}`.
    pub fn omega_tower(&self, d: usize, limits: &Limits) -> Result<Ordinal> {
        if d > limits.max_tower {
            return Err(Error::limit(format!(
                "tower height {d} exceeds cap {}",
                limits.max_tower
            )));
        }
        let mut out = self.clone();
        for _ in 0..d {
            out = Ordinal::omega_pow(out);
        }
        Ok(out)
    }

    /// `ω_d = ω_d(1)`.
    pub fn omega_d(d: usize, limits: &Limits) -> Result<Ordinal> {
        Ordinal::one().omega_tower(d, limits)
    }

    pub(crate) fn push_term(&mut self, exponent: Ordinal, coefficient: Nat) {
        debug_assert!(!coefficient.is_zero());
        debug_assert!(self.terms.last().is_none_or(|t| t.exponent > exponent));
        self.terms.push(Term {
            exponent,
            coefficient,
        });
    }

    /// Removes one copy of the last term, dropping it when its coefficient
    /// reaches zero. Returns the removed exponent.
    pub(crate) fn pop_one(&mut self) -> Option<Ordinal> {
        let last = self.terms.last_mut()?;
        last.coefficient -= 1u32;
        if last.coefficient.is_zero() {
            self.terms.pop().map(|t| t.exponent)
        } else {
            Some(last.exponent.clone())
        }
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        // A coefficient k stands for k repetitions of the same exponent, so
        // comparing (exponent, coefficient) pairs lexicographically is the
        // repetition-form comparison.
        for (a, b) in self.terms.iter().zip(&other.terms) {
            match a.exponent.cmp(&b.exponent) {
                Ordering::Equal => {}
                o => return o,
            }
            match a.coefficient.cmp(&b.coefficient) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Ordinal {
    type Output = Ordinal;

    /// Ordinal addition. Terms of `self` below the leading exponent of `rhs`
    /// are absorbed.
    fn add(self, rhs: &Ordinal) -> Ordinal {
        let Some(lead) = rhs.terms.first() else {
            return self.clone();
        };
        let keep = self
            .terms
            .iter()
            .take_while(|t| t.exponent > lead.exponent)
            .count();
        let mut terms = Vec::with_capacity(keep + rhs.terms.len());
        terms.extend_from_slice(&self.terms[..keep]);
        terms.extend_from_slice(&rhs.terms);
        if let Some(t) = self.terms.get(keep) {
            if t.exponent == lead.exponent {
                terms[keep].coefficient += &t.coefficient;
            }
        }
        Ordinal { terms }
    }
}

impl Add for Ordinal {
    type Output = Ordinal;

    fn add(self, rhs: Ordinal) -> Ordinal {
        &self + &rhs
    }
}

impl Mul for &Ordinal {
    type Output = Ordinal;

    /// Ordinal product, right-distributive over the CNF of `rhs`:
    /// `α·ω^δ = ω^{e+δ}` for `δ > 0` (e the leading exponent of α) and
    /// `α·n` scales the leading coefficient of α.
    fn mul(self, rhs: &Ordinal) -> Ordinal {
        let Some(lead) = self.terms.first() else {
            return Ordinal::zero();
        };
        let mut out = Ordinal::zero();
        for t in &rhs.terms {
            let piece = if t.exponent.is_zero() {
                let mut terms = self.terms.clone();
                terms[0].coefficient *= &t.coefficient;
                Ordinal { terms }
            } else {
                Ordinal::omega_pow_mul(&lead.exponent + &t.exponent, t.coefficient.clone())
            };
            out = &out + &piece;
        }
        out
    }
}

impl Mul for Ordinal {
    type Output = Ordinal;

    fn mul(self, rhs: Ordinal) -> Ordinal {
        &self * &rhs
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::nat(n)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            if t.exponent.is_zero() {
                write!(f, "{}", t.coefficient)?;
                continue;
            }
            f.write_str("w")?;
            if t.exponent != Ordinal::one() {
                if t.exponent.is_finite() || t.exponent == Ordinal::omega() {
                    write!(f, "^{}", t.exponent)?;
                } else {
                    write!(f, "^({})", t.exponent)?;
                }
            }
            if !t.coefficient.is_one() {
                write!(f, "*{}", t.coefficient)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Serializes a natural number as its decimal string.
pub fn serialize_nat<S: serde::Serializer>(n: &Nat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(n)
}

impl Serialize for Ordinal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn binomial_saturating(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Number of ordinals [`enumerate_ordinals`] would produce, saturating.
pub fn enumeration_count(max_height: usize, max_terms: usize, max_coeff: u64) -> u128 {
    let mut level: u128 = 1;
    for _ in 0..max_height {
        let pool = usize::try_from(level).unwrap_or(usize::MAX);
        let mut next: u128 = 0;
        for k in 0..=max_terms.min(pool) {
            let ways = binomial_saturating(pool, k)
                .saturating_mul((max_coeff as u128).saturating_pow(k as u32));
            next = next.saturating_add(ways);
        }
        level = next;
    }
    level
}

/// Every ordinal of [`Ordinal::height`] at most `max_height`, with at most
/// `max_terms` CNF terms and coefficients at most `max_coeff` at every level,
/// in increasing order.
pub fn enumerate_ordinals(
    max_height: usize,
    max_terms: usize,
    max_coeff: u64,
    limits: &Limits,
) -> Result<Vec<Ordinal>> {
    let total = enumeration_count(max_height, max_terms, max_coeff);
    if total > limits.max_enumeration as u128 {
        return Err(Error::limit(format!(
            "enumeration would produce {total} ordinals (cap {})",
            limits.max_enumeration
        )));
    }
    let mut level = vec![Ordinal::zero()];
    for _ in 0..max_height {
        // descending pool so that combinations come out with decreasing exponents
        let pool: Vec<&Ordinal> = level.iter().rev().collect();
        let mut next = Vec::new();
        let mut chosen: Vec<usize> = Vec::new();
        extend_level(&pool, max_terms, max_coeff, 0, &mut chosen, &mut next);
        next.sort();
        level = next;
    }
    Ok(level)
}

fn extend_level(
    pool: &[&Ordinal],
    max_terms: usize,
    max_coeff: u64,
    start: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Ordinal>,
) {
    // emit every coefficient assignment for the current exponent choice
    let mut coeffs = vec![1u64; chosen.len()];
    loop {
        let terms = chosen
            .iter()
            .zip(&coeffs)
            .map(|(&i, &k)| Term {
                exponent: pool[i].clone(),
                coefficient: Nat::from(k),
            })
            .collect();
        out.push(Ordinal { terms });
        let mut pos = coeffs.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            if coeffs[pos] < max_coeff {
                coeffs[pos] += 1;
                coeffs[pos + 1..].fill(1);
                pos = usize::MAX;
                break;
            }
        }
        if pos != usize::MAX {
            break;
        }
    }
    if chosen.len() == max_terms || max_coeff == 0 {
        return;
    }
    for i in start..pool.len() {
        chosen.push(i);
        extend_level(pool, max_terms, max_coeff, i + 1, chosen, out);
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> Ordinal {
        Ordinal::omega()
    }

    fn wp(e: u64) -> Ordinal {
        Ordinal::omega_pow(Ordinal::nat(e))
    }

    fn n(k: u64) -> Ordinal {
        Ordinal::nat(k)
    }

    #[test]
    fn compare_examples() {
        assert_eq!(w().cmp(&wp(2)), Ordering::Less);
        assert_eq!(Ordinal::zero().cmp(&Ordinal::zero()), Ordering::Equal);
        assert_eq!((&wp(2) + &w()).cmp(&(&wp(2) + &n(1))), Ordering::Greater);
    }

    #[test]
    fn coefficient_comparison_matches_repetition_form() {
        // ω²·2+ω < ω²·3 and ω·2 > ω+5
        let a = &(&wp(2) * &n(2)) + &w();
        let b = &wp(2) * &n(3);
        assert!(a < b);
        assert!(&w() * &n(2) > &w() + &n(5));
    }

    #[test]
    fn addition_absorbs() {
        assert_eq!(&w() + &wp(2), wp(2));
        assert_eq!((&wp(2) + &w()).to_string(), "w^2+w");
        assert_eq!(&wp(3) + &Ordinal::zero(), wp(3));
        assert_eq!(&(&w() * &n(2)) + &(&w() + &n(1)), &(&w() * &n(3)) + &n(1));
    }

    #[test]
    fn natural_sum_keeps_terms() {
        assert_eq!(w().natural_sum(&wp(2)), &wp(2) + &w());
        let a = &(&w() * &n(2)) + &n(1);
        let b = &w() + &n(3);
        assert_eq!(a.natural_sum(&b).to_string(), "w*3+4");
        assert_eq!(a.natural_sum(&Ordinal::zero()), a);
    }

    #[test]
    fn multiplication_rules() {
        let r = &wp(3) * &(&w() + &n(2));
        assert_eq!(r.to_string(), "w^4+w^3*2");
        let a = &(&wp(2) * &n(3)) + &n(7);
        assert_eq!(&a * &n(1), a);
        assert_eq!(&wp(3) * &wp(2), wp(5));
        assert_eq!(&(&w() + &n(1)) * &n(2), &(&w() * &n(2)) + &n(1));
        assert_eq!(&(&w() + &n(1)) * &w(), wp(2));
        assert_eq!(&Ordinal::zero() * &w(), Ordinal::zero());
    }

    #[test]
    fn max_coefficient_examples() {
        assert_eq!(Ordinal::zero().max_coefficient(), Nat::zero());
        let e = &w() * &n(2);
        let a = &(&Ordinal::omega_pow(e) * &n(5)) + &(&w() * &n(3));
        assert_eq!(a.max_coefficient(), Nat::from(5u32));
        assert_eq!(w().max_coefficient(), Nat::one());
    }

    #[test]
    fn towers() {
        let l = Limits::default();
        let a = &w() + &n(1);
        assert_eq!(a.omega_tower(0, &l).unwrap(), a);
        assert_eq!(Ordinal::omega_d(1, &l).unwrap(), w());
        assert_eq!(Ordinal::omega_d(2, &l).unwrap(), Ordinal::omega_pow(w()));
        let tight = Limits {
            max_tower: 3,
            ..Limits::default()
        };
        assert!(matches!(
            Ordinal::omega_d(4, &tight),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn classification() {
        assert_eq!(Ordinal::zero().classify(), Kind::Zero);
        assert_eq!((&w() + &n(1)).classify(), Kind::Successor);
        assert_eq!(wp(2).classify(), Kind::Limit);
    }

    #[test]
    fn from_terms_rejects_non_canonical() {
        assert!(Ordinal::from_terms([(n(1), Nat::one()), (n(2), Nat::one())]).is_err());
        assert!(Ordinal::from_terms([(n(1), Nat::zero())]).is_err());
        let r = Ordinal::from_repetition([n(2), n(2), n(1), n(0)]).unwrap();
        assert_eq!(r.to_string(), "w^2*2+w+1");
        assert!(Ordinal::from_repetition([n(1), n(2)]).is_err());
    }

    #[test]
    fn enumeration_small_levels() {
        let l = Limits::default();
        // height 1 is the finite ordinals up to the coefficient bound
        let finite = enumerate_ordinals(1, 2, 2, &l).unwrap();
        assert_eq!(finite, vec![n(0), n(1), n(2)]);
        let h2 = enumerate_ordinals(2, 3, 3, &l).unwrap();
        assert!(h2.contains(&(&wp(2) + &w())));
        assert!(h2.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn enumeration_count_matches_brute_force() {
        // independent count: every strictly decreasing exponent sequence of
        // length <= t drawn from the previous level, times coefficient choices
        let l = Limits::default();
        for (h, t, c) in [(1, 3, 3), (2, 3, 3), (2, 2, 2), (3, 2, 2), (3, 1, 3)] {
            let v = enumerate_ordinals(h, t, c, &l).unwrap();
            assert_eq!(v.len() as u128, enumeration_count(h, t, c));
            let mut dedup = v.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), v.len());
            assert!(v.iter().all(|a| a.height() <= h
                && a.term_count() <= t
                && a.max_coefficient() <= Nat::from(c)));
        }
        assert_eq!(enumeration_count(2, 3, 3), 175);
        assert_eq!(enumeration_count(3, 2, 2), 723);
    }

    #[test]
    fn enumeration_cap() {
        let tight = Limits {
            max_enumeration: 100,
            ..Limits::default()
        };
        assert!(matches!(
            enumerate_ordinals(2, 3, 3, &tight),
            Err(Error::ResourceLimit(_))
        ));
    }
}
