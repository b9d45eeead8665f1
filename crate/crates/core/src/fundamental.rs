//! Fundamental sequences, α-largeness of finite sets, descent traces, and the
//! check of the descent-length lemma behind `Φ(α) = ω³·α + ω³ + l + 2`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::growth::{self, nat_le_e};
use crate::limits::Limits;
use crate::ordinal::{Kind, Nat, Ordinal};

impl Ordinal {
    /// The fundamental sequence `α[x]`:
    /// `0[x] = 0`, `(β+1)[x] = β`, a last term `ω^{β+1}` becomes `ω^β·x`, and
    /// a last term `ω^λ` with λ a limit becomes `ω^{λ[x]}`.
    ///
    /// At `x = 0` the `ω^β·0` summand vanishes; the result stays canonical.
    pub fn fund(&self, x: u64) -> Ordinal {
        let mut out = self.clone();
        out.fund_in_place(x);
        out
    }

    pub(crate) fn fund_in_place(&mut self, x: u64) {
        let Some(last) = self.last_term() else {
            return;
        };
        match last.exponent().classify() {
            Kind::Zero => {
                self.pop_one();
            }
            Kind::Successor => {
                let mut pred = self.pop_one().expect("non-empty");
                pred.pop_one();
                if x > 0 {
                    self.push_term(pred, Nat::from(x));
                }
            }
            Kind::Limit => {
                let e = self.pop_one().expect("non-empty");
                self.push_term(e.fund(x), Nat::from(1u32));
            }
        }
    }

    /// `α[x₀]…[x_k]`, keeping only the final state.
    pub fn fund_iterated(&self, xs: &[u64], limits: &Limits) -> Result<Ordinal> {
        let mut state = self.clone();
        for &x in xs {
            if state.is_zero() {
                break;
            }
            state.fund_in_place(x);
            check_terms(&state, limits)?;
        }
        Ok(state)
    }
}

fn check_terms(state: &Ordinal, limits: &Limits) -> Result<()> {
    if state.term_count() > limits.max_terms {
        return Err(Error::limit(format!(
            "descent state has {} terms (cap {})",
            state.term_count(),
            limits.max_terms
        )));
    }
    Ok(())
}

/// A strictly increasing finite set of naturals, stored in order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct FiniteSet(Vec<u64>);

impl FiniteSet {
    pub fn new(elements: Vec<u64>) -> Result<Self> {
        if let Some(w) = elements.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Domain(format!(
                "set elements must strictly increase ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(FiniteSet(elements))
    }

    /// Sorts and deduplicates arbitrary input.
    pub fn from_unsorted(mut elements: Vec<u64>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        FiniteSet(elements)
    }

    /// The interval `[lo, hi]`; empty when `lo > hi`.
    pub fn interval(lo: u64, hi: u64) -> Self {
        FiniteSet((lo..=hi).collect())
    }

    pub fn elements(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> Option<u64> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.0.last().copied()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn index_of(&self, x: u64) -> Option<usize> {
        self.0.binary_search(&x).ok()
    }

    pub fn is_subset_of(&self, other: &FiniteSet) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }

    /// Relatively large: `|X| > min X`.
    pub fn is_relatively_large(&self) -> bool {
        match self.min() {
            None => false,
            Some(m) => self.len() as u64 > m,
        }
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }
}

impl TryFrom<Vec<u64>> for FiniteSet {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        FiniteSet::new(v)
    }
}

impl From<FiniteSet> for Vec<u64> {
    fn from(s: FiniteSet) -> Self {
        s.0
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

/// `states[0] = start`, `states[i+1] = states[i][inputs[i]]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescentTrace {
    start: Ordinal,
    inputs: FiniteSet,
    states: Vec<Ordinal>,
}

impl DescentTrace {
    pub fn start(&self) -> &Ordinal {
        &self.start
    }

    pub fn inputs(&self) -> &FiniteSet {
        &self.inputs
    }

    pub fn states(&self) -> &[Ordinal] {
        &self.states
    }

    pub fn terminal(&self) -> &Ordinal {
        self.states.last().expect("states always holds the start")
    }

    pub fn is_large(&self) -> bool {
        self.terminal().is_zero()
    }

    /// One line per state: `i <TAB> x_i <TAB> α_i`. The final state has no
    /// input and prints `-` in the middle column.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, state) in self.states.iter().enumerate() {
            let x = self
                .inputs
                .elements()
                .get(i)
                .map_or_else(|| "-".to_string(), |x| x.to_string());
            out.push_str(&format!("{i}\t{x}\t{state}\n"));
        }
        out
    }

    /// Parses the output of [`DescentTrace::to_text`] and re-validates every
    /// transition.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut inputs = Vec::new();
        let mut states = Vec::new();
        for (lineno, line) in text.lines().filter(|l| !l.trim().is_empty()).enumerate() {
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 || cols[0].trim() != lineno.to_string() {
                return Err(Error::Domain(format!("malformed trace line {lineno}: {line:?}")));
            }
            states.push(crate::syntax::parse(cols[2])?);
            if cols[1].trim() != "-" {
                let x = cols[1]
                    .trim()
                    .parse::<u64>()
                    .map_err(|e| Error::Domain(format!("trace line {lineno}: {e}")))?;
                inputs.push(x);
            }
        }
        if states.len() != inputs.len() + 1 {
            return Err(Error::Domain("trace must end with exactly one input-free state".into()));
        }
        let inputs = FiniteSet::new(inputs)?;
        for (i, &x) in inputs.elements().iter().enumerate() {
            if states[i].fund(x) != states[i + 1] {
                return Err(Error::Domain(format!("trace step {i} is not a fundamental-sequence step")));
            }
        }
        Ok(DescentTrace {
            start: states[0].clone(),
            inputs,
            states,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "format": "descent-trace/1",
            "start": self.start.to_string(),
            "inputs": self.inputs.elements(),
            "states": self.states.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "large": self.is_large(),
        })
    }
}

/// The full descent `α, α[x₀], α[x₀][x₁], …` over the elements of `xs`.
pub fn fund_iter(start: &Ordinal, xs: &FiniteSet, limits: &Limits) -> Result<DescentTrace> {
    let mut states = Vec::with_capacity(xs.len() + 1);
    states.push(start.clone());
    let mut state = start.clone();
    for &x in xs.elements() {
        state.fund_in_place(x);
        check_terms(&state, limits)?;
        states.push(state.clone());
    }
    Ok(DescentTrace {
        start: start.clone(),
        inputs: xs.clone(),
        states,
    })
}

/// `X` is α-large iff `α[x₀]…[x_{|X|−1}] = 0`.
pub fn is_large(alpha: &Ordinal, xs: &FiniteSet, limits: &Limits) -> Result<bool> {
    Ok(alpha.fund_iterated(xs.elements(), limits)?.is_zero())
}

/// Least `N <= cap` such that the interval `[x0, N]` is α-large.
pub fn minimal_large_endpoint(
    alpha: &Ordinal,
    x0: u64,
    cap: u64,
    limits: &Limits,
) -> Result<Option<u64>> {
    if x0 > cap {
        return Ok(None);
    }
    if alpha.is_zero() {
        return Ok(Some(x0));
    }
    let mut state = alpha.clone();
    for x in x0..=cap {
        state.fund_in_place(x);
        check_terms(&state, limits)?;
        if state.is_zero() {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// `Φ(α) = ω³·α + ω³ + l + 2`.
pub fn phi(alpha: &Ordinal, l: u64) -> Ordinal {
    let w3 = Ordinal::omega_pow(Ordinal::nat(3u32));
    let head = &w3 * alpha;
    let head = &head + &w3;
    &head + &Ordinal::nat(l + 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Largeness {
    Yes,
    No,
    /// The set has more elements than the iteration cap allows.
    Unknown,
}

/// Index `a_i` in the descent trace used as a witness for step `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Zero,
    /// `E(arg)`, exact but usually far too large to materialise.
    E(u64),
}

impl Witness {
    /// Whether the index is below `bound`, decided exactly.
    pub fn is_below(&self, bound: u64) -> bool {
        match self {
            Witness::Zero => bound > 0,
            // E(arg) < bound iff not (bound <= E(arg))
            Witness::E(arg) => !nat_le_e(&BigUint::from(bound), *arg),
        }
    }

    pub fn value(&self, limits: &Limits) -> Result<Nat> {
        match self {
            Witness::Zero => Ok(Nat::zero()),
            Witness::E(arg) => growth::e_value(*arg, limits),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Zero => f.write_str("0"),
            Witness::E(x) => write!(f, "E({x})"),
        }
    }
}

impl Serialize for Witness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "lowercase")]
pub enum ClaimStatus {
    /// `α_{a_i} > Φ(γ_i)` checked for every `0 < i <= j`.
    Verified,
    Skipped(String),
    /// The claim failed at this index although every premise held.
    Failed(usize),
}

/// Outcome of checking one instance of the descent-length lemma:
/// a `Φ(γ₀)`-large `X > 2` and a strictly decreasing `γ₀ > … > γ_j` with
/// `MC(γ_i) <= E(x_i + l)` force `j <= |X| − 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescentReport {
    pub phi: Ordinal,
    pub phi_large: Largeness,
    /// `min X > 2`.
    pub min_above_two: bool,
    /// Checked at every `i <= j` with `i < |X|`; `x_i` does not exist beyond.
    pub mc_bounds_hold: bool,
    pub strictly_decreasing: bool,
    /// `j + 1`, the length of the γ sequence.
    pub descent_length: usize,
    pub conclusion_holds: bool,
    pub witness_indices: Option<Vec<Witness>>,
    pub claim: ClaimStatus,
}

impl DescentReport {
    pub fn premises_hold(&self) -> bool {
        self.phi_large == Largeness::Yes
            && self.min_above_two
            && self.mc_bounds_hold
            && self.strictly_decreasing
    }

    /// True when the instance contradicts the lemma.
    pub fn is_falsification(&self) -> bool {
        self.premises_hold()
            && (!self.conclusion_holds || matches!(self.claim, ClaimStatus::Failed(_)))
    }
}

pub fn verify_descent(
    xs: &FiniteSet,
    l: u64,
    gammas: &[Ordinal],
    iter_cap: usize,
    limits: &Limits,
) -> Result<DescentReport> {
    if gammas.is_empty() {
        return Err(Error::precondition("the gamma sequence must be non-empty"));
    }
    let phi0 = phi(&gammas[0], l);
    let strictly_decreasing = gammas.windows(2).all(|w| w[0] > w[1]);
    let j = gammas.len() - 1;
    let xsv = xs.elements();
    let mc_bounds_hold = gammas
        .iter()
        .zip(xsv)
        .all(|(g, &x)| nat_le_e(&g.max_coefficient(), x.saturating_add(l)));
    let min_above_two = xs.min().is_none_or(|m| m > 2);

    let trace = if xs.len() <= iter_cap {
        Some(fund_iter(&phi0, xs, limits)?)
    } else {
        None
    };
    let phi_large = match &trace {
        None => Largeness::Unknown,
        Some(t) if t.is_large() => Largeness::Yes,
        Some(_) => Largeness::No,
    };

    // a_0 = 0, a_i = E(x_{i+l+1})
    let witness_indices: Option<Vec<Witness>> = (0..=j)
        .map(|i| {
            if i == 0 {
                Some(Witness::Zero)
            } else {
                let idx = (i as u64).checked_add(l)?.checked_add(1)?;
                let idx = usize::try_from(idx).ok()?;
                xsv.get(idx).map(|&x| Witness::E(x))
            }
        })
        .collect();

    let claim = match (&trace, &witness_indices) {
        (_, None) => ClaimStatus::Skipped("some x_{i+l+1} lies beyond X".into()),
        (None, _) => ClaimStatus::Skipped("trace not materialised (iteration cap)".into()),
        (Some(t), Some(ws)) => {
            let len = t.states().len() as u64;
            if j == 0 {
                ClaimStatus::Verified
            } else if let Some(w) = ws[1..].iter().find(|w| !w.is_below(len)) {
                ClaimStatus::Skipped(format!("witness index {w} lies beyond the trace"))
            } else {
                let mut status = ClaimStatus::Verified;
                for (i, w) in ws.iter().enumerate().skip(1) {
                    let a = w.value(limits)?.to_usize().expect("below trace length");
                    if t.states()[a] <= phi(&gammas[i], l) {
                        status = ClaimStatus::Failed(i);
                        break;
                    }
                }
                status
            }
        }
    };

    Ok(DescentReport {
        phi: phi0,
        phi_large,
        min_above_two,
        mc_bounds_hold,
        strictly_decreasing,
        descent_length: gammas.len(),
        conclusion_holds: j < xs.len(),
        witness_indices,
        claim,
    })
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

    fn set(v: &[u64]) -> FiniteSet {
        FiniteSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn fund_examples() {
        assert_eq!(w().fund(3), n(3));
        assert_eq!((&w() + &n(1)).fund(5), w());
        assert_eq!(Ordinal::omega_pow(w()).fund(3), wp(3));
        assert_eq!((&wp(2) + &w()).fund(4), &wp(2) + &n(4));
        assert_eq!(Ordinal::zero().fund(9), Ordinal::zero());
    }

    #[test]
    fn fund_at_zero_stays_canonical() {
        assert_eq!(w().fund(0), Ordinal::zero());
        assert_eq!((&wp(2) + &w()).fund(0), wp(2));
        assert_eq!((&w() * &n(3)).fund(0), &w() * &n(2));
        // ω^ω[0] = ω^0 = 1
        assert_eq!(Ordinal::omega_pow(w()).fund(0), n(1));
    }

    #[test]
    fn trace_examples() {
        let l = Limits::default();
        let t = fund_iter(&w(), &set(&[1, 2]), &l).unwrap();
        assert_eq!(t.states(), &[w(), n(1), n(0)]);
        let t = fund_iter(&w(), &FiniteSet::interval(3, 6), &l).unwrap();
        assert!(t.is_large());
        let t = fund_iter(&Ordinal::zero(), &FiniteSet::interval(3, 6), &l).unwrap();
        assert!(t.states().iter().all(Ordinal::is_zero));
    }

    #[test]
    fn largeness_examples() {
        let l = Limits::default();
        assert!(is_large(&w(), &set(&[1, 2]), &l).unwrap());
        assert!(!is_large(&w(), &set(&[3, 4, 5]), &l).unwrap());
        assert_eq!(w().fund_iterated(&[3, 4, 5], &l).unwrap(), n(1));
        assert!(is_large(&(&w() * &n(2)), &FiniteSet::interval(3, 14), &l).unwrap());
        assert!(!is_large(&(&w() * &n(2)), &FiniteSet::interval(3, 13), &l).unwrap());
    }

    #[test]
    fn minimal_endpoints() {
        let l = Limits::default();
        assert_eq!(minimal_large_endpoint(&w(), 4, 100, &l).unwrap(), Some(8));
        assert_eq!(minimal_large_endpoint(&n(1), 5, 100, &l).unwrap(), Some(5));
        assert_eq!(minimal_large_endpoint(&w(), 4, 7, &l).unwrap(), None);
        assert_eq!(minimal_large_endpoint(&Ordinal::zero(), 4, 7, &l).unwrap(), Some(4));
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&Ordinal::zero(), 0).to_string(), "w^3+2");
        assert_eq!(phi(&w(), 1).to_string(), "w^4+w^3+3");
        assert_eq!(phi(&n(1), 2).to_string(), "w^3*2+4");
    }

    #[test]
    fn trace_text_round_trip() {
        let l = Limits::default();
        let t = fund_iter(&(&wp(2) + &n(1)), &FiniteSet::interval(2, 9), &l).unwrap();
        let text = t.to_text();
        assert!(text.starts_with("0\t2\tw^2+1\n1\t3\tw^2\n"));
        assert_eq!(DescentTrace::from_text(&text).unwrap(), t);
        let bad = text.replace("w^2\n", "w^2+1\n");
        assert!(DescentTrace::from_text(&bad).is_err());
        let json = t.to_json();
        assert_eq!(json["states"].as_array().unwrap().len(), 9);
        assert_eq!(json["large"], serde_json::Value::Bool(t.is_large()));
    }

    #[test]
    fn verify_descent_premise_failure() {
        let l = Limits::default();
        let r = verify_descent(&FiniteSet::interval(3, 20), 0, &[n(5), n(4), n(3)], 1000, &l).unwrap();
        assert_eq!(r.phi_large, Largeness::No);
        assert!(r.strictly_decreasing && r.mc_bounds_hold && r.conclusion_holds);
        assert!(!r.is_falsification());
    }

    #[test]
    fn verify_descent_not_decreasing() {
        let l = Limits::default();
        let r = verify_descent(&FiniteSet::interval(3, 5), 0, &[n(1), n(2)], 1000, &l).unwrap();
        assert!(!r.strictly_decreasing);
        assert!(!r.is_falsification());
    }

    #[test]
    fn verify_descent_unknown_beyond_cap() {
        let l = Limits::default();
        let phi1 = phi(&n(1), 0);
        let cap = 200_000;
        let end = minimal_large_endpoint(&phi1, 3, cap, &l).unwrap();
        assert_eq!(end, None, "Φ(1)-large intervals from 3 are astronomically long");
        let r = verify_descent(&FiniteSet::interval(3, 60), 0, &[n(1), n(0)], 10, &l).unwrap();
        assert_eq!(r.phi_large, Largeness::Unknown);
        assert_eq!(
            r.witness_indices,
            Some(vec![Witness::Zero, Witness::E(5)])
        );
        assert!(matches!(r.claim, ClaimStatus::Skipped(_)));
    }

    #[test]
    fn verify_descent_rejects_empty_gammas() {
        let l = Limits::default();
        assert!(matches!(
            verify_descent(&FiniteSet::interval(3, 5), 0, &[], 10, &l),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn finite_set_validation() {
        assert!(FiniteSet::new(vec![1, 1]).is_err());
        assert!(FiniteSet::new(vec![2, 1]).is_err());
        assert_eq!(FiniteSet::from_unsorted(vec![5, 3, 5]).elements(), &[3, 5]);
        assert!(set(&[3, 4, 5, 6]).is_relatively_large());
        assert!(!set(&[3, 4, 5]).is_relatively_large());
    }
}
