//! Ordinals below ε₀ coded as natural numbers with the Cantor pairing
//! function.
//!
//! A non-zero code is `j(n, T)` where `T` packs the `n` exponents of the
//! repetition form `ω^{c₁} + … + ω^{cₙ}` (with `c₁ ⪰ … ⪰ cₙ`, each itself a
//! code) as `T = j(cₙ, j(cₙ₋₁, … j(c₂, c₁)…))`. The outermost slot of `T`
//! holds the last, smallest exponent, so dropping the last summand is a
//! single projection. `0` codes `0`.

use std::cmp::Ordering;

use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::ordinal::{Nat, Ordinal};

/// `j(x, y) = (x+y)(x+y+1)/2 + y`.
pub fn pair(x: &Nat, y: &Nat) -> Nat {
    let s = x + y;
    ((&s * (&s + 1u32)) >> 1) + y
}

/// Inverse of [`pair`]: `(j₁(z), j₂(z))`.
pub fn unpair(z: &Nat) -> (Nat, Nat) {
    let w = ((z * 8u32 + 1u32).sqrt() - 1u32) >> 1;
    let t = (&w * (&w + 1u32)) >> 1;
    let y = z - t;
    let x = w - &y;
    (x, y)
}

pub fn j1(z: &Nat) -> Nat {
    unpair(z).0
}

pub fn j2(z: &Nat) -> Nat {
    unpair(z).1
}

/// `π^n_i(x)`: component `i` (1 = innermost) of an `n`-tuple, so that
/// `j(π^n_n(x), j(π^n_{n−1}(x), … j(π^n_2(x), π^n_1(x))…)) = x`.
pub fn project(n: usize, i: usize, x: &Nat) -> Result<Nat> {
    if i == 0 || i > n {
        return Err(Error::Domain(format!(
            "projection index {i} outside 1..={n}"
        )));
    }
    let mut t = x.clone();
    for _ in 0..(n - i) {
        t = j2(&t);
    }
    Ok(if i > 1 { j1(&t) } else { t })
}

/// Packs components given largest first (`c₁, …, cₙ`); `n >= 1`.
pub fn pack(components: &[Nat]) -> Nat {
    let mut it = components.iter();
    let mut t = it.next().expect("at least one component").clone();
    for c in it {
        t = pair(c, &t);
    }
    t
}

/// Inverse of [`pack`] for a known width `n >= 1`.
pub fn unpack(t: &Nat, n: usize) -> Vec<Nat> {
    let mut out = Vec::with_capacity(n);
    let mut t = t.clone();
    for _ in 1..n {
        let (c, rest) = unpair(&t);
        out.push(c);
        t = rest;
    }
    out.push(t);
    out.reverse();
    out
}

/// `f(0, b, a) = j₂(j₂(a))`, `f(i+1, b, a) = j(b, f(i, b, a))`: pushes `i`
/// copies of `b` onto the tuple of `a` with its last slot removed.
pub fn expand(i: u64, b: &Nat, a: &Nat) -> Nat {
    let mut t = j2(&j2(a));
    for _ in 0..i {
        t = pair(b, &t);
    }
    t
}

fn width(a: &Nat, limits: &Limits) -> Result<(usize, Nat)> {
    let (n, t) = unpair(a);
    let n = n
        .to_usize()
        .filter(|&n| n <= limits.max_code_width)
        .ok_or_else(|| Error::limit(format!("code tuple width {n} exceeds the cap")))?;
    Ok((n, t))
}

/// Components of a non-zero natural read as a code (largest first), without
/// validating them. `None` for `0`; an error for `j₁(a) = 0`.
fn components(a: &Nat, limits: &Limits) -> Result<Option<Vec<Nat>>> {
    if a.is_zero() {
        return Ok(None);
    }
    let (n, t) = width(a, limits)?;
    if n == 0 {
        return Err(Error::InvalidCode(format!("{a} has j1 = 0 but is not 0")));
    }
    Ok(Some(unpack(&t, n)))
}

/// Whether `a` is the code of an ordinal.
pub fn is_code(a: &Nat, limits: &Limits) -> Result<bool> {
    is_code_at(a, 0, limits)
}

fn is_code_at(a: &Nat, depth: usize, limits: &Limits) -> Result<bool> {
    if depth > limits.max_code_depth {
        return Err(Error::limit("code nesting exceeds the depth cap"));
    }
    let comps = match components(a, limits) {
        Ok(None) => return Ok(true),
        Ok(Some(c)) => c,
        Err(Error::InvalidCode(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    for c in &comps {
        if !is_code_at(c, depth + 1, limits)? {
            return Ok(false);
        }
    }
    for w in comps.windows(2) {
        if cmp_valid(&w[0], &w[1], depth + 1, limits)? == Ordering::Less {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A natural number known to be the code of an ordinal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrdCode(Nat);

impl OrdCode {
    pub fn new(value: Nat, limits: &Limits) -> Result<Self> {
        if is_code(&value, limits)? {
            Ok(OrdCode(value))
        } else {
            Err(Error::InvalidCode(value.to_string()))
        }
    }

    pub fn zero() -> Self {
        OrdCode(Nat::zero())
    }

    pub fn value(&self) -> &Nat {
        &self.0
    }

    pub fn into_value(self) -> Nat {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `w₀ = j(1, 0)`, `w_{d+1} = j(1, w_d)`; the code of `ω_d`.
    pub fn w(d: usize) -> Self {
        let mut a = pair(&Nat::one(), &Nat::zero());
        for _ in 0..d {
            a = pair(&Nat::one(), &a);
        }
        OrdCode(a)
    }

    pub fn encode(alpha: &Ordinal, limits: &Limits) -> Result<Self> {
        encode_raw(alpha, limits).map(OrdCode)
    }

    pub fn decode(&self, limits: &Limits) -> Result<Ordinal> {
        decode_raw(&self.0, 0, limits)
    }

    /// The order `≺` on codes, computed on the codes themselves.
    pub fn cmp_code(&self, other: &OrdCode, limits: &Limits) -> Result<Ordering> {
        cmp_valid(&self.0, &other.0, 0, limits)
    }

    pub fn less(&self, other: &OrdCode, limits: &Limits) -> Result<bool> {
        Ok(self.cmp_code(other, limits)? == Ordering::Less)
    }

    /// Fundamental sequence on codes, computed on the codes themselves.
    pub fn fund(&self, x: u64, limits: &Limits) -> Result<OrdCode> {
        fund_raw(&self.0, x, 0, limits).map(OrdCode)
    }

    /// `a[x₀]…[x_k]`.
    pub fn fund_iterated(&self, xs: &[u64], limits: &Limits) -> Result<OrdCode> {
        let mut a = self.clone();
        for &x in xs {
            if a.is_zero() {
                break;
            }
            a = a.fund(x, limits)?;
        }
        Ok(a)
    }

    /// Largeness measured with the code-level fundamental sequence.
    pub fn is_large(&self, xs: &[u64], limits: &Limits) -> Result<bool> {
        Ok(self.fund_iterated(xs, limits)?.is_zero())
    }

    /// Maximal coefficient, read off the codes: the longest run of equal
    /// components at any level.
    pub fn max_coefficient(&self, limits: &Limits) -> Result<Nat> {
        mc_raw(&self.0, 0, limits)
    }

    /// Whether the coded ordinal is a limit, read off the codes.
    pub fn is_limit(&self, limits: &Limits) -> Result<bool> {
        let Some(comps) = components(&self.0, limits)? else {
            return Ok(false);
        };
        Ok(!comps.last().expect("non-empty").is_zero())
    }

    pub fn add(&self, other: &OrdCode, limits: &Limits) -> Result<OrdCode> {
        let s = &self.decode(limits)? + &other.decode(limits)?;
        OrdCode::encode(&s, limits)
    }

    pub fn natural_sum(&self, other: &OrdCode, limits: &Limits) -> Result<OrdCode> {
        let s = self.decode(limits)?.natural_sum(&other.decode(limits)?);
        OrdCode::encode(&s, limits)
    }

    pub fn multiply(&self, other: &OrdCode, limits: &Limits) -> Result<OrdCode> {
        let p = &self.decode(limits)? * &other.decode(limits)?;
        OrdCode::encode(&p, limits)
    }
}

impl std::fmt::Display for OrdCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn encode_raw(alpha: &Ordinal, limits: &Limits) -> Result<Nat> {
    if alpha.is_zero() {
        return Ok(Nat::zero());
    }
    let mut codes: Vec<Nat> = Vec::new();
    for t in alpha.terms() {
        let k = t
            .coefficient()
            .to_usize()
            .filter(|k| codes.len() + k <= limits.max_code_width)
            .ok_or_else(|| Error::limit("repetition form too long to encode"))?;
        let c = encode_raw(t.exponent(), limits)?;
        codes.extend(std::iter::repeat_n(c, k));
    }
    let out = pair_checked(&Nat::from(codes.len()), &pack_checked(&codes, limits)?, limits)?;
    if out.bits() > limits.max_bits {
        return Err(Error::limit("code exceeds the bit budget"));
    }
    Ok(out)
}

/// [`pair`], refusing results whose size estimate exceeds the bit budget.
fn pair_checked(x: &Nat, y: &Nat, limits: &Limits) -> Result<Nat> {
    // j(x, y) < (x+y+1)^2 has at most 2·(bits(max)+1) bits
    if 2 * (x.bits().max(y.bits()) + 1) > limits.max_bits {
        return Err(Error::limit("code exceeds the bit budget"));
    }
    Ok(pair(x, y))
}

fn pack_checked(components: &[Nat], limits: &Limits) -> Result<Nat> {
    let mut it = components.iter();
    let mut t = it.next().expect("at least one component").clone();
    for c in it {
        t = pair_checked(c, &t, limits)?;
    }
    Ok(t)
}

fn decode_raw(a: &Nat, depth: usize, limits: &Limits) -> Result<Ordinal> {
    if depth > limits.max_code_depth {
        return Err(Error::limit("code nesting exceeds the depth cap"));
    }
    let Some(comps) = components(a, limits)? else {
        return Ok(Ordinal::zero());
    };
    let mut exps = Vec::with_capacity(comps.len());
    for c in &comps {
        exps.push(decode_raw(c, depth + 1, limits)?);
    }
    Ordinal::from_repetition(exps)
        .map_err(|_| Error::InvalidCode(format!("{a}: components are not non-increasing")))
}

/// Lexicographic comparison of component lists, largest component first;
/// a proper prefix is smaller.
fn cmp_valid(a: &Nat, b: &Nat, depth: usize, limits: &Limits) -> Result<Ordering> {
    if a == b {
        return Ok(Ordering::Equal);
    }
    if depth > limits.max_code_depth {
        return Err(Error::limit("code nesting exceeds the depth cap"));
    }
    let (ca, cb) = match (components(a, limits)?, components(b, limits)?) {
        (None, _) => return Ok(Ordering::Less),
        (_, None) => return Ok(Ordering::Greater),
        (Some(x), Some(y)) => (x, y),
    };
    for (x, y) in ca.iter().zip(&cb) {
        match cmp_valid(x, y, depth + 1, limits)? {
            Ordering::Equal => {}
            o => return Ok(o),
        }
    }
    Ok(ca.len().cmp(&cb.len()))
}

fn mc_raw(a: &Nat, depth: usize, limits: &Limits) -> Result<Nat> {
    if depth > limits.max_code_depth {
        return Err(Error::limit("code nesting exceeds the depth cap"));
    }
    let Some(comps) = components(a, limits)? else {
        return Ok(Nat::zero());
    };
    let mut best = Nat::zero();
    let mut run = 0usize;
    for (i, c) in comps.iter().enumerate() {
        run = if i > 0 && comps[i - 1] == *c { run + 1 } else { 1 };
        best = best.max(Nat::from(run));
        if i == 0 || comps[i - 1] != *c {
            best = best.max(mc_raw(c, depth + 1, limits)?);
        }
    }
    Ok(best)
}

fn fund_raw(a: &Nat, x: u64, depth: usize, limits: &Limits) -> Result<Nat> {
    if depth > limits.max_code_depth {
        return Err(Error::limit("code nesting exceeds the depth cap"));
    }
    if a.is_zero() {
        return Ok(Nat::zero());
    }
    let (n, t) = width(a, limits)?;
    if n == 0 {
        return Err(Error::InvalidCode(a.to_string()));
    }
    // a_n sits in the outermost slot; for a single component the tuple is a_1 itself
    let (last, rest) = if n == 1 {
        (t.clone(), None)
    } else {
        let (l, r) = unpair(&t);
        (l, Some(r))
    };
    let drop_last = |rest: &Option<Nat>| match rest {
        None => Nat::zero(),
        Some(r) => pair(&Nat::from(n - 1), r),
    };
    if last.is_zero() {
        return Ok(drop_last(&rest));
    }
    let (m, tl) = width(&last, limits)?;
    if m == 0 {
        return Err(Error::InvalidCode(last.to_string()));
    }
    let last_of_last = if m == 1 { tl.clone() } else { j1(&tl) };
    let out = if last_of_last.is_zero() {
        // last exponent is a successor; b is its predecessor
        let b = if m == 1 {
            Nat::zero()
        } else {
            pair(&Nat::from(m - 1), &j2(&tl))
        };
        if x as usize > limits.max_code_width {
            return Err(Error::limit("fundamental-sequence argument exceeds the tuple cap"));
        }
        match (&rest, x) {
            (_, 0) => drop_last(&rest),
            (Some(_), _) => {
                let mut t = j2(&j2(a));
                for _ in 0..x {
                    t = pair_checked(&b, &t, limits)?;
                }
                pair_checked(&Nat::from(n as u64 + x - 1), &t, limits)?
            }
            (None, _) => {
                let mut t = b.clone();
                for _ in 1..x {
                    t = pair_checked(&b, &t, limits)?;
                }
                pair_checked(&Nat::from(x), &t, limits)?
            }
        }
    } else {
        let new_last = fund_raw(&last, x, depth + 1, limits)?;
        match &rest {
            Some(r) => pair_checked(&Nat::from(n), &pair_checked(&new_last, r, limits)?, limits)?,
            None => pair_checked(&Nat::one(), &new_last, limits)?,
        }
    };
    if out.bits() > limits.max_bits {
        return Err(Error::limit("code exceeds the bit budget"));
    }
    Ok(out)
}
