//! Exact handling of the thrice iterated exponential `E(x) = 2^(2^(2^x))`.
//!
//! `E(x)` cannot be materialised past `x = 4` in any reasonable memory, yet
//! the maximal-coefficient bounds compare ordinary numbers against it at
//! arguments far beyond that. [`PowerOfTwo`] keeps `2^k` symbolically (with
//! `k` itself exact) so such comparisons stay exact.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::ordinal::Nat;

/// The natural number `2^exponent`, held symbolically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PowerOfTwo {
    exponent: Nat,
}

impl PowerOfTwo {
    pub fn new(exponent: Nat) -> Self {
        PowerOfTwo { exponent }
    }

    pub fn exponent(&self) -> &Nat {
        &self.exponent
    }

    /// Materialises the value if it fits in `limits.max_bits`.
    pub fn value(&self, limits: &Limits) -> Result<Nat> {
        let bits = self
            .exponent
            .to_u64()
            .filter(|&e| e < limits.max_bits)
            .ok_or_else(|| {
                Error::limit(format!(
                    "2^{} exceeds the bit budget of {}",
                    self.exponent, limits.max_bits
                ))
            })?;
        Ok(Nat::one() << bits)
    }

    /// Exact comparison with an ordinary natural number.
    pub fn cmp_nat(&self, n: &Nat) -> Ordering {
        // 2^k has k+1 bits
        let bits = Nat::from(n.bits());
        let want = &self.exponent + 1u32;
        match bits.cmp(&want) {
            Ordering::Equal => {
                if n.count_ones() == 1 {
                    Ordering::Equal
                } else {
                    Ordering::Less
                }
            }
            o => o.reverse(),
        }
    }

    /// Exact test of `self > other + add`.
    pub fn exceeds_sum(&self, other: &PowerOfTwo, add: &Nat) -> bool {
        if self.exponent <= other.exponent {
            // 2^a <= 2^b <= 2^b + add, strictly unless add = 0 and a = b
            return false;
        }
        // 2^a - 2^b = 2^b (2^(a-b) - 1) >= 2^b
        let add_bits = Nat::from(add.bits());
        if other.exponent > add_bits {
            return true;
        }
        // here 2^b is small enough to build
        let b = other.exponent.to_u64().expect("bounded by add.bits()");
        let low = Nat::one() << b;
        let gap = &self.exponent - &other.exponent;
        if gap > &add_bits + 1u32 {
            return true;
        }
        let g = gap.to_u64().expect("bounded by add.bits()");
        let diff = low * ((Nat::one() << g) - 1u32);
        diff > *add
    }
}

impl fmt::Display for PowerOfTwo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{}", self.exponent)
    }
}

/// Largest argument accepted by [`e_symbolic`]; the symbolic exponent
/// `2^(2^x)` has `2^x + 1` bits.
fn check_arg(x: u64, limits: &Limits) -> Result<u32> {
    if x >= 63 || (1u64 << x) >= limits.max_bits {
        return Err(Error::limit(format!(
            "E({x}) cannot be represented even symbolically within {} bits",
            limits.max_bits
        )));
    }
    Ok(x as u32)
}

/// `E(x)` as `2^(2^(2^x))` with an exact (materialised) exponent.
pub fn e_symbolic(x: u64, limits: &Limits) -> Result<PowerOfTwo> {
    let x = check_arg(x, limits)?;
    Ok(PowerOfTwo::new(Nat::one() << (1u64 << x)))
}

/// `E(x)` materialised exactly. Feasible for `x <= 4` under default limits.
pub fn e_value(x: u64, limits: &Limits) -> Result<Nat> {
    e_symbolic(x, limits)?.value(limits)
}

/// Exact test of `n <= E(x)` without materialising `E(x)`; total for every `x`.
pub fn nat_le_e(n: &Nat, x: u64) -> bool {
    if x >= 6 {
        // E(x) >= 2^(2^64) while n has fewer than 2^64 bits
        return true;
    }
    let e = PowerOfTwo::new(Nat::one() << (1u64 << x));
    e.cmp_nat(n) != Ordering::Less
}

/// Exact test of `E(x+1) > E(x) + add`.
pub fn e_step_exceeds(x: u64, add: &Nat, limits: &Limits) -> Result<bool> {
    let lo = e_symbolic(x, limits)?;
    let hi = e_symbolic(x + 1, limits)?;
    Ok(hi.exceeds_sum(&lo, add))
}

/// `base^exp` materialised, refusing results beyond the bit budget.
pub fn checked_pow(base: &Nat, exp: &Nat, limits: &Limits) -> Result<Nat> {
    if base.is_zero() {
        return Ok(if exp.is_zero() { Nat::one() } else { Nat::zero() });
    }
    if base.is_one() {
        return Ok(Nat::one());
    }
    let budget = limits.max_bits;
    let e = exp
        .to_u64()
        .filter(|&e| e.saturating_mul(base.bits()) <= budget)
        .ok_or_else(|| Error::limit(format!("{base}^{exp} exceeds the bit budget of {budget}")))?;
    let e = u32::try_from(e).map_err(|_| Error::limit("exponent too large"))?;
    Ok(num_traits::pow::Pow::pow(base.clone(), e))
}

/// Exact test of `n <= base^exp` for exponents far too large to materialise.
pub fn nat_le_pow(n: &Nat, base: &Nat, exp: &Nat, limits: &Limits) -> Result<bool> {
    if base.is_zero() {
        return Ok(if exp.is_zero() { n <= &Nat::one() } else { n.is_zero() });
    }
    if base.is_one() || exp.is_zero() {
        return Ok(n <= &Nat::one());
    }
    // base >= 2^(bits-1), so base^exp >= 2^((bits-1)·exp) > n once that
    // exponent reaches n's bit length
    let floor_log = Nat::from(base.bits() - 1);
    if floor_log * exp >= Nat::from(n.bits()) {
        return Ok(true);
    }
    Ok(n <= &checked_pow(base, exp, limits)?)
}

/// `c^(2^x)`, the branching budget of a tree node whose last label is `x`.
pub fn color_budget(c: u64, x: u64, limits: &Limits) -> Result<Nat> {
    if x >= 63 {
        if c <= 1 {
            return Ok(Nat::from(c));
        }
        return Err(Error::limit(format!("{c}^(2^{x}) exceeds the bit budget")));
    }
    checked_pow(&BigUint::from(c), &(Nat::one() << x), limits)
}
