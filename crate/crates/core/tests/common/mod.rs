#![allow(dead_code)]

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::One;
use ordlab::fundamental::is_large;
use ordlab::ordinal::enumerate_ordinals;
use ordlab::ramsey::{Coloring, GammaTrace};
use ordlab::{FiniteSet, Limits, Ordinal};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn limits() -> Limits {
    Limits::default()
}

pub fn ord(s: &str) -> Ordinal {
    ordlab::syntax::parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

/// Height ≤ 2, at most 3 terms, coefficients ≤ 3.
pub fn small_enumeration() -> Vec<Ordinal> {
    enumerate_ordinals(2, 3, 3, &limits()).unwrap()
}

/// Height ≤ 3, at most 2 terms, coefficients ≤ 2.
pub fn tall_enumeration() -> Vec<Ordinal> {
    enumerate_ordinals(3, 2, 2, &limits()).unwrap()
}

/// Random ordinal below ω^ω^2 built term by term.
pub fn random_ordinal(r: &mut impl Rng, depth: u32) -> Ordinal {
    let n = r.gen_range(0..=3);
    let mut parts = Vec::new();
    for _ in 0..n {
        let e = if depth == 0 || r.gen_bool(0.4) {
            Ordinal::from(r.gen_range(0..4u64))
        } else {
            random_ordinal(r, depth - 1)
        };
        parts.push(Ordinal::omega_pow_mul(e, r.gen_range(1..4u64)));
    }
    parts.sort();
    parts.reverse();
    Ordinal::sum(parts.iter())
}

/// Repetition form: a non-increasing list of exponents.
#[derive(Debug, Clone)]
pub enum Rep {
    Sum(Vec<Rep>),
}

pub fn to_rep(a: &Ordinal) -> Rep {
    let mut out = Vec::new();
    for t in a.terms() {
        let k: u64 = t.coefficient().try_into().expect("small coefficient");
        for _ in 0..k {
            out.push(to_rep(t.exponent()));
        }
    }
    Rep::Sum(out)
}

/// Lexicographic comparison of repetition forms, independent of the
/// library's `Ord`: compare the first differing exponent, else the length.
pub fn rep_cmp(a: &Rep, b: &Rep) -> Ordering {
    let (Rep::Sum(x), Rep::Sum(y)) = (a, b);
    for (p, q) in x.iter().zip(y) {
        match rep_cmp(p, q) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    x.len().cmp(&y.len())
}

/// Term-by-term CNF comparison: exponents recursively, then coefficients,
/// then the number of terms. Works for huge coefficients, unlike [`to_rep`].
pub fn cnf_cmp(a: &Ordinal, b: &Ordinal) -> Ordering {
    for (s, t) in a.terms().iter().zip(b.terms()) {
        let o = cnf_cmp(s.exponent(), t.exponent())
            .then_with(|| s.coefficient().cmp(t.coefficient()));
        if o != Ordering::Equal {
            return o;
        }
    }
    a.terms().len().cmp(&b.terms().len())
}

/// Least `N` with `[x, N]` ω²-large, by direct simulation on `(k, r)`
/// standing for `ω·k + r`.
pub fn omega_squared_endpoint(x: u64) -> u64 {
    // ω²[x] = ω·x
    let (mut k, mut r) = (x, 0u64);
    let mut y = x;
    loop {
        y += 1;
        if r > 0 {
            r -= 1;
        } else {
            k -= 1;
            r = y;
        }
        if k == 0 && r == 0 {
            return y;
        }
    }
}

/// Every subset of an `n`-element set, as an index mask.
pub fn subsets(n: usize) -> impl Iterator<Item = u32> {
    0..(1u32 << n)
}

/// Brute-force homogeneity: enumerate all `arity`-subsets of `ys` directly.
pub fn brute_homogeneous(ys: &[u64], c: &Coloring) -> bool {
    let k = c.arity();
    let mut first = None;
    let mut ok = true;
    combos(ys, k, &mut Vec::new(), 0, &mut |t| {
        let col = c.color(t).unwrap();
        if *first.get_or_insert(col) != col {
            ok = false;
        }
    });
    ok
}

pub fn combos(els: &[u64], k: usize, cur: &mut Vec<u64>, from: usize, f: &mut dyn FnMut(&[u64])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for i in from..els.len() {
        cur.push(els[i]);
        combos(els, k, cur, i + 1, f);
        cur.pop();
    }
}

/// Largest relatively large homogeneous subset size by brute force over
/// all subsets of `x` (small `x` only).
pub fn brute_best(x: &FiniteSet, c: &Coloring) -> Option<usize> {
    let els = x.elements();
    let mut best = None;
    for mask in subsets(els.len()) {
        let ys: Vec<u64> = (0..els.len()).filter(|i| mask >> i & 1 == 1).map(|i| els[i]).collect();
        if ys.is_empty() || ys.len() as u64 <= ys[0] {
            continue;
        }
        if brute_homogeneous(&ys, c) && best.is_none_or(|b| ys.len() > b) {
            best = Some(ys.len());
        }
    }
    best
}

pub fn random_coloring(r: &mut impl Rng, ground: &FiniteSet, arity: usize, colors: u32) -> Coloring {
    Coloring::from_fn(ground.clone(), arity, colors, |_| r.gen_range(0..colors)).unwrap()
}

pub fn random_set(r: &mut impl Rng, lo: u64, hi: u64, max_len: usize) -> FiniteSet {
    let len = r.gen_range(1..=max_len);
    let mut v: Vec<u64> = (0..len).map(|_| r.gen_range(lo..=hi)).collect();
    v.sort_unstable();
    v.dedup();
    FiniteSet::new(v).unwrap()
}

/// Direct reading of min_i-homogeneity: any two `k`-subsets of `ys` with the
/// same `i` smallest elements get the same color.
pub fn brute_min_homogeneous(ys: &[u64], c: &Coloring, i: usize) -> bool {
    let mut all = Vec::new();
    combos(ys, c.arity(), &mut Vec::new(), 0, &mut |t| all.push(t.to_vec()));
    all.iter().all(|s| {
        all.iter()
            .filter(|t| t[..i] == s[..i])
            .all(|t| c.color(t).unwrap() == c.color(s).unwrap())
    })
}

/// `(k, r)` standing for `ω·k + r`; true if the walk over `xs` reaches 0.
pub fn omega_times_large(k: u64, xs: &[u64]) -> bool {
    let (mut k, mut r) = (k, 0u64);
    if k == 0 {
        return true;
    }
    for &x in xs {
        if r > 0 {
            r -= 1;
        } else {
            k -= 1;
            r = x;
        }
        if k == 0 && r == 0 {
            return true;
        }
    }
    false
}

/// `n ≤ 2^(2^(2^x))` decided from the bit length alone.
pub fn le_e(n: &BigUint, x: u64) -> bool {
    if x >= 6 {
        return true;
    }
    let k = 1u64 << (1u64 << x);
    let bits = n.bits();
    bits <= k || (bits == k + 1 && n == &(BigUint::one() << k))
}

pub fn check_certificate_independently(t: &GammaTrace, c: &Coloring, seed: &Ordinal, level: usize) {
    let k = t.mc_offset();
    let xs = t.xs.elements();
    for i in 0..xs.len() {
        let (a, b) = (&t.steps[i].gamma, &t.steps[i + 1].gamma);
        let dec = cnf_cmp(b, a).is_lt();
        let large = t.steps[i + 1].large_branch.inspect(|&node| {
            assert!(node <= i + 1);
            let ys = t.tree.labels(node);
            assert!(is_large(seed, &FiniteSet::new(ys.clone()).unwrap(), &limits()).unwrap());
            assert!(brute_min_homogeneous(&ys, c, level));
        });
        assert!(dec || large.is_some(), "step {i}: {a} -> {b}");
        assert!(le_e(&a.max_coefficient(), xs[i] + k), "MC bound at step {i}");
    }
    assert!(t.certificate().holds());
}

/// Whether `cand` (a bitmask) contains a clique of `need - size` further
/// vertices, by plain branch and bound.
pub fn clique_reaches(adj: &[u64], cand: u64, size: u32, need: u32) -> bool {
    if size >= need {
        return true;
    }
    if size + cand.count_ones() < need {
        return false;
    }
    let mut rest = cand;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if clique_reaches(adj, rest & adj[v], size + 1, need) {
            return true;
        }
        if size + rest.count_ones() < need {
            return false;
        }
    }
    false
}

/// Independent check for pair colorings on at most 64 elements: whether
/// some color has a homogeneous `H` with `|H| > min H`, i.e. a clique of
/// `u` further vertices above some least element `u`.
pub fn pairs_have_large_homogeneous(c: &Coloring) -> bool {
    let els = c.ground().elements();
    let n = els.len();
    assert!(c.arity() == 2 && n <= 64);
    (0..c.colors()).any(|color| {
        let mut adj = vec![0u64; n];
        for i in 0..n {
            for j in i + 1..n {
                if c.color(&[els[i], els[j]]).unwrap() == color {
                    adj[i] |= 1 << j;
                    adj[j] |= 1 << i;
                }
            }
        }
        els.iter().enumerate().any(|(i, &u)| {
            let above = if i == 63 { 0 } else { adj[i] & !((2u64 << i) - 1) };
            clique_reaches(&adj, above, 0, u as u32)
        })
    })
}
