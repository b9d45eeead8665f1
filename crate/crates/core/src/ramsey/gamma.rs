use num_bigint::BigUint;
use num_traits::{CheckedSub, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fundamental::FiniteSet;
use crate::growth::{checked_pow, color_budget, nat_le_e};
use crate::limits::Limits;
use crate::ordinal::{Nat, Ordinal};

use super::coloring::Coloring;
use super::tree::{build_er_tree, ErTree};

/// Per-node statistics of one tree `T_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeStat {
    pub node: usize,
    /// Seed ordinal pushed down the node's labels.
    pub state: Ordinal,
    pub branches: usize,
    /// Exponent of the node's summand: `d_σ` for pairs, the state itself in
    /// the general case.
    pub exponent: Ordinal,
    /// `r_σ`, pairs only.
    pub r: Option<u64>,
    /// `n_{σ,i}` for pairs, `m_{σ,i}` in the general case.
    #[serde(serialize_with = "crate::ordinal::serialize_nat")]
    pub multiplier: Nat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaStep {
    pub gamma: Ordinal,
    pub nodes: Vec<NodeStat>,
    /// A node of `T_i` whose state reached 0, i.e. whose label set is large
    /// for the seed.
    pub large_branch: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
pub enum GammaVariant {
    Pairs { c: u64 },
    General { alpha: Ordinal, c: u64 },
}

/// `γ_0, …, γ_{|X|}` with the statistics each was computed from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaTrace {
    pub variant: GammaVariant,
    pub xs: FiniteSet,
    pub tree: ErTree,
    pub steps: Vec<GammaStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateStep {
    pub i: usize,
    pub x: u64,
    pub decreased: bool,
    pub large_branch: bool,
    /// `MC(γ_i) ≤ E(x_i + k)` for the variant's additive constant `k`.
    pub mc_bound: bool,
}

impl CertificateStep {
    pub fn holds(&self) -> bool {
        (self.large_branch || self.decreased) && self.mc_bound
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescentCertificate {
    pub steps: Vec<CertificateStep>,
}

impl DescentCertificate {
    pub fn holds(&self) -> bool {
        self.steps.iter().all(CertificateStep::holds)
    }

    /// The first failing step as a falsification error.
    pub fn check(&self) -> Result<()> {
        match self.steps.iter().find(|s| !s.holds()) {
            None => Ok(()),
            Some(s) => Err(Error::Falsification(format!(
                "descent certificate fails at step {} (x = {}): decreased={}, large branch={}, MC bound={}",
                s.i, s.x, s.decreased, s.large_branch, s.mc_bound
            ))),
        }
    }
}

impl GammaTrace {
    pub fn gammas(&self) -> Vec<&Ordinal> {
        self.steps.iter().map(|s| &s.gamma).collect()
    }

    /// The additive constant in the coefficient bound `MC(γ_i) ≤ E(x_i + k)`.
    pub fn mc_offset(&self) -> u64 {
        match &self.variant {
            GammaVariant::Pairs { c } => *c,
            GammaVariant::General { alpha, c } => {
                let mc = alpha.max_coefficient().to_u64().unwrap_or(u64::MAX);
                (*c).max(mc).saturating_add(1)
            }
        }
    }

    /// At every step `i < |X|`: a large branch exists in `T_{i+1}` or
    /// `γ_{i+1} < γ_i`; and the coefficient bound holds for `γ_i`.
    pub fn certificate(&self) -> DescentCertificate {
        let k = self.mc_offset();
        let steps = self
            .xs
            .elements()
            .iter()
            .enumerate()
            .map(|(i, &x)| CertificateStep {
                i,
                x,
                decreased: self.steps[i + 1].gamma < self.steps[i].gamma,
                large_branch: self.steps[i + 1].large_branch.is_some(),
                mc_bound: nat_le_e(&self.steps[i].gamma.max_coefficient(), x.saturating_add(k)),
            })
            .collect();
        DescentCertificate { steps }
    }
}

fn check_common(x: &FiniteSet, col: &Coloring, c: u64) -> Result<()> {
    if x.min().is_some_and(|m| m < 3) {
        return Err(Error::precondition("the ground set must start at 3 or above"));
    }
    if c < u64::from(col.colors()) {
        return Err(Error::precondition(format!(
            "c = {c} is below the coloring's {} colors",
            col.colors()
        )));
    }
    Ok(())
}

/// Seed states of every node: the seed pushed through the node's labels.
fn node_states(tree: &ErTree, seed: &Ordinal) -> Vec<Ordinal> {
    let mut states: Vec<Ordinal> = Vec::with_capacity(tree.len());
    for node in &tree.nodes {
        let s = match (node.parent, node.label) {
            (Some(p), Some(l)) => states[p].fund(l),
            _ => seed.clone(),
        };
        states.push(s);
    }
    states
}

fn over_budget(branches: usize, budget: &Nat, node: usize) -> Error {
    Error::Falsification(format!(
        "node {node} has {branches} branches, above its bound {budget}"
    ))
}

/// γ-sequence for a coloring of pairs, seeded with `ω^c`. Each nonempty node
/// with `(ω·c)[σ_0]…[σ_last] = ω·d + r` contributes `ω^d · (c+1)^r · (c − branches)`.
pub fn gamma_sequence_pairs(
    x: &FiniteSet,
    col: &Coloring,
    c: u64,
    limits: &Limits,
) -> Result<GammaTrace> {
    if col.arity() != 2 {
        return Err(Error::precondition("gamma_sequence_pairs needs a coloring of pairs"));
    }
    check_common(x, col, c)?;
    let tree = build_er_tree(x, col, 1)?;
    let seed = Ordinal::omega() * Ordinal::from(c);
    let states = node_states(&tree, &seed);
    let big_c = Nat::from(c);
    let base = Nat::from(c + 1);

    let mut parts: Vec<(Ordinal, u64)> = Vec::with_capacity(tree.len());
    for (id, s) in states.iter().enumerate().skip(1) {
        let (d, r) = split_linear(s).ok_or_else(|| {
            Error::Falsification(format!("node {id}: state {s} is not below ω·{c}"))
        })?;
        if d >= c && c > 0 {
            return Err(Error::Falsification(format!("node {id}: d = {d} is not below c = {c}")));
        }
        parts.push((Ordinal::from(d), r));
    }

    let mut steps = Vec::with_capacity(tree.len());
    steps.push(GammaStep {
        gamma: Ordinal::omega_pow(Ordinal::from(c)),
        nodes: Vec::new(),
        large_branch: None,
    });
    for i in 1..tree.len() {
        let mut gamma = Ordinal::zero();
        let mut nodes = Vec::with_capacity(i);
        let mut large = None;
        for id in 1..=i {
            let (d, r) = &parts[id - 1];
            let b = tree.branches_at(id, i);
            let room = big_c
                .checked_sub(&Nat::from(b as u64))
                .ok_or_else(|| over_budget(b, &big_c, id))?;
            let n = checked_pow(&base, &Nat::from(*r), limits)? * room;
            if states[id].is_zero() && large.is_none() {
                large = Some(id);
            }
            gamma = gamma.natural_sum(&Ordinal::omega_pow_mul(d.clone(), n.clone()));
            nodes.push(NodeStat {
                node: id,
                state: states[id].clone(),
                branches: b,
                exponent: d.clone(),
                r: Some(*r),
                multiplier: n,
            });
        }
        steps.push(GammaStep {
            gamma,
            nodes,
            large_branch: large,
        });
    }
    Ok(GammaTrace {
        variant: GammaVariant::Pairs { c },
        xs: x.clone(),
        tree,
        steps,
    })
}

/// γ-sequence for a coloring of arity `d + 1`, seeded with `ω^alpha`. Each
/// nonempty node contributes `ω^{alpha[σ_0]…[σ_last]} · (c^(2^σ_last) − branches)`.
pub fn gamma_sequence_general(
    x: &FiniteSet,
    col: &Coloring,
    alpha: &Ordinal,
    c: u64,
    limits: &Limits,
) -> Result<GammaTrace> {
    if col.arity() < 2 {
        return Err(Error::precondition("gamma_sequence_general needs arity at least 2"));
    }
    check_common(x, col, c)?;
    let tree = build_er_tree(x, col, col.arity() - 1)?;
    let states = node_states(&tree, alpha);
    let mut budgets = vec![Nat::from(0u32)];
    for node in tree.nodes.iter().skip(1) {
        budgets.push(color_budget(c, node.label.expect("non-root"), limits)?);
    }

    let mut steps = Vec::with_capacity(tree.len());
    steps.push(GammaStep {
        gamma: Ordinal::omega_pow(alpha.clone()),
        nodes: Vec::new(),
        large_branch: None,
    });
    for i in 1..tree.len() {
        let mut gamma = Ordinal::zero();
        let mut nodes = Vec::with_capacity(i);
        let mut large = None;
        for id in 1..=i {
            let b = tree.branches_at(id, i);
            let m = budgets[id]
                .checked_sub(&BigUint::from(b as u64))
                .ok_or_else(|| over_budget(b, &budgets[id], id))?;
            if states[id].is_zero() && large.is_none() {
                large = Some(id);
            }
            gamma = gamma.natural_sum(&Ordinal::omega_pow_mul(states[id].clone(), m.clone()));
            if gamma.size() > limits.max_terms {
                return Err(Error::limit("γ has too many terms"));
            }
            nodes.push(NodeStat {
                node: id,
                state: states[id].clone(),
                branches: b,
                exponent: states[id].clone(),
                r: None,
                multiplier: m,
            });
        }
        steps.push(GammaStep {
            gamma,
            nodes,
            large_branch: large,
        });
    }
    Ok(GammaTrace {
        variant: GammaVariant::General {
            alpha: alpha.clone(),
            c,
        },
        xs: x.clone(),
        tree,
        steps,
    })
}

/// Splits `ω·d + r`; `None` if the ordinal has a term of degree above 1.
fn split_linear(a: &Ordinal) -> Option<(u64, u64)> {
    let mut d = 0;
    let mut r = 0;
    for t in a.terms() {
        match t.exponent().as_u64() {
            Some(1) => d = t.coefficient().to_u64()?,
            Some(0) => r = t.coefficient().to_u64()?,
            _ => return None,
        }
    }
    Some((d, r))
}
