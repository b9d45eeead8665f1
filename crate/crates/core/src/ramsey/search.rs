use std::sync::atomic::{AtomicBool, AtomicU64, Ordering as AtomicOrdering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fundamental::{is_large, FiniteSet};
use crate::limits::Limits;
use crate::ordinal::Ordinal;

use super::coloring::{for_each_subset, Coloring};
use super::homogeneous::is_homogeneous;

/// For a coloring of singletons on an `(ω·c)`-large set, the first color
/// class (ordered by least element) that is ω-large.
pub fn php_homogeneous(x: &FiniteSet, col: &Coloring, limits: &Limits) -> Result<FiniteSet> {
    if col.arity() != 1 {
        return Err(Error::precondition("php_homogeneous needs a coloring of singletons"));
    }
    let c = col.colors();
    let seed = Ordinal::omega() * Ordinal::from(u64::from(c));
    if !is_large(&seed, x, limits)? {
        return Err(Error::precondition(format!("{x} is not (w*{c})-large")));
    }
    let mut classes: Vec<Vec<u64>> = vec![Vec::new(); c as usize];
    for &e in x.elements() {
        classes[col.color(&[e])? as usize].push(e);
    }
    classes.retain(|cl| !cl.is_empty());
    classes.sort_by_key(|cl| cl[0]);
    for cl in classes {
        let set = FiniteSet::new(cl).expect("increasing");
        if is_large(&Ordinal::omega(), &set, limits)? {
            return Ok(set);
        }
    }
    Err(Error::Falsification(format!(
        "no color class of the (w*{c})-large set {x} is w-large"
    )))
}

/// A largest homogeneous `H ⊆ X` with `|H| > min H`, or `None`. Ties go to
/// the lowest color, then the lexicographically least set.
pub fn find_homogeneous_exhaustive(
    x: &FiniteSet,
    col: &Coloring,
    limits: &Limits,
) -> Result<Option<FiniteSet>> {
    if x.len() > limits.max_search_ground.min(64) {
        return Err(Error::limit(format!(
            "exhaustive search over {} elements exceeds the cap of {}",
            x.len(),
            limits.max_search_ground.min(64)
        )));
    }
    let pos: Vec<usize> = x
        .elements()
        .iter()
        .map(|&e| {
            col.ground()
                .index_of(e)
                .ok_or_else(|| Error::precondition(format!("{e} is outside the coloring's ground set")))
        })
        .collect::<Result<_>>()?;
    let els = x.elements();
    let mut best: Option<Vec<usize>> = None;
    for color in 0..col.colors() {
        let mut s = Search {
            col,
            pos: &pos,
            els,
            color,
            cur: Vec::new(),
            best: best.as_ref().map_or(0, Vec::len),
            found: None,
        };
        if col.arity() == 2 {
            s.run_pairs();
        } else {
            s.run_generic();
        }
        if let Some(f) = s.found {
            best = Some(f);
        }
    }
    Ok(best.map(|idx| FiniteSet::new(idx.iter().map(|&i| els[i]).collect()).expect("increasing")))
}

struct Search<'a> {
    col: &'a Coloring,
    pos: &'a [usize],
    els: &'a [u64],
    color: u32,
    cur: Vec<usize>,
    /// Size to beat.
    best: usize,
    found: Option<Vec<usize>>,
}

impl Search<'_> {
    fn need(&self, min_idx: usize) -> usize {
        // |H| > min H and |H| > best
        let m = usize::try_from(self.els[min_idx]).unwrap_or(usize::MAX);
        m.max(self.best).saturating_add(1)
    }

    fn run_pairs(&mut self) {
        let n = self.pos.len();
        let mut adj = vec![0u64; n];
        for i in 0..n {
            for j in i + 1..n {
                if self.col.color_at(&[self.pos[i], self.pos[j]]) == self.color {
                    adj[i] |= 1 << j;
                }
            }
        }
        for v in 0..n {
            let need = self.need(v);
            let cand = adj[v];
            if 1 + cand.count_ones() as usize >= need {
                self.cur.push(v);
                self.clique(&adj, cand, v);
                self.cur.pop();
            }
        }
    }

    fn clique(&mut self, adj: &[u64], mut cand: u64, min_idx: usize) {
        let need = self.need(min_idx);
        if self.cur.len() >= need {
            self.best = self.cur.len();
            self.found = Some(self.cur.clone());
        }
        while cand != 0 {
            let need = self.need(min_idx);
            if self.cur.len() + (cand.count_ones() as usize) < need {
                return;
            }
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            self.cur.push(v);
            self.clique(adj, cand & adj[v], min_idx);
            self.cur.pop();
        }
    }

    fn run_generic(&mut self) {
        let n = self.pos.len();
        for v in 0..n {
            // with `cur` empty this only tests singletons, i.e. arity 1
            if n - v >= self.need(v) && self.fits(v) {
                self.cur.push(v);
                self.extend_generic(v);
                self.cur.pop();
            }
        }
    }

    fn extend_generic(&mut self, min_idx: usize) {
        if self.cur.len() >= self.need(min_idx) {
            self.best = self.cur.len();
            self.found = Some(self.cur.clone());
        }
        let n = self.pos.len();
        let last = *self.cur.last().expect("nonempty");
        for v in last + 1..n {
            if self.cur.len() + (n - v) < self.need(min_idx) {
                return;
            }
            if self.fits(v) {
                self.cur.push(v);
                self.extend_generic(min_idx);
                self.cur.pop();
            }
        }
    }

    /// Every `arity`-subset of `cur ∪ {v}` containing `v` has the color.
    fn fits(&self, v: usize) -> bool {
        let k = self.col.arity();
        let mut ok = true;
        let mut buf = vec![0usize; k];
        for_each_subset(self.cur.len(), k - 1, |idx| {
            if !ok {
                return;
            }
            for (slot, &i) in buf.iter_mut().zip(idx) {
                *slot = self.pos[self.cur[i]];
            }
            buf[k - 1] = self.pos[v];
            ok = self.col.color_at(&buf) == self.color;
        });
        ok
    }
}

/// Result of the tree-based extraction.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct PipelineReport {
    /// The branch set extracted at each arity, from the original arity down to 2.
    pub branches: Vec<FiniteSet>,
    /// The ground set of the final coloring of singletons.
    pub singleton_ground: Option<FiniteSet>,
    pub homogeneous: Option<FiniteSet>,
    /// Tree insertions performed.
    pub work: usize,
}

/// Extracts a homogeneous set by repeated tree construction: at arity `k`
/// the deepest branch `Y` of the tree is `min_{k-1}`-homogeneous, which
/// induces a coloring of `(k-1)`-sets on `Y` without its last element. At
/// arity 1 the color classes are searched for an ω-large one, and the
/// dropped branch tops are appended again. Any result is re-verified against
/// the original coloring.
pub fn ks_pipeline(
    x: &FiniteSet,
    col: &Coloring,
    budget: usize,
    limits: &Limits,
) -> Result<PipelineReport> {
    if x.min().is_some_and(|m| m < 3) {
        return Err(Error::precondition("the ground set must start at 3 or above"));
    }
    let mut report = PipelineReport {
        branches: Vec::new(),
        singleton_ground: None,
        homogeneous: None,
        work: 0,
    };
    let mut ground = x.clone();
    let mut cur = col.restrict(x)?;
    while cur.arity() > 1 {
        report.work += ground.len();
        if report.work > budget {
            return Err(Error::limit(format!("pipeline budget of {budget} insertions exhausted")));
        }
        let tree = super::tree::build_er_tree(&ground, &cur, cur.arity() - 1)?;
        let y = tree.label_set(tree.deepest());
        report.branches.push(y.clone());
        if y.is_empty() {
            return Ok(report);
        }
        let ys = y.elements();
        let next = FiniteSet::new(ys[..ys.len() - 1].to_vec()).expect("increasing");
        let k = cur.arity();
        let mut tuple = vec![0u64; k];
        let induced = Coloring::from_fn(next.clone(), k - 1, cur.colors(), |head| {
            let top = *head.last().expect("arity at least 1");
            let succ = ys[ys.partition_point(|&e| e <= top)];
            tuple[..k - 1].copy_from_slice(head);
            tuple[k - 1] = succ;
            cur.color(&tuple).expect("branch elements lie in the ground set")
        })?;
        ground = next;
        cur = induced;
    }
    report.singleton_ground = Some(ground.clone());
    // relabel to the colors actually used so the pigeonhole bound is tight
    let mut used: Vec<u32> = Vec::new();
    for &e in ground.elements() {
        let c = cur.color(&[e])?;
        if !used.contains(&c) {
            used.push(c);
        }
    }
    if used.is_empty() {
        return Ok(report);
    }
    let relabeled = Coloring::from_fn(ground.clone(), 1, used.len() as u32, |t| {
        let c = cur.color(t).expect("ground element");
        used.iter().position(|&u| u == c).expect("collected above") as u32
    })?;
    let seed = Ordinal::omega() * Ordinal::from(used.len() as u64);
    if !is_large(&seed, &ground, limits)? {
        return Ok(report);
    }
    let h = php_homogeneous(&ground, &relabeled, limits)?;
    // each branch's last element agrees with every successor, so it can be
    // put back on top
    let mut elements = h.into_vec();
    for y in report.branches.iter().rev() {
        elements.push(*y.elements().last().expect("nonempty branch"));
    }
    let h = FiniteSet::new(elements).map_err(|_| {
        Error::Falsification("branch tops are not above the homogeneous set".into())
    })?;
    if h.len() as u64 > h.min().unwrap_or(u64::MAX) {
        if !is_homogeneous(&h, col)? {
            return Err(Error::Falsification(format!(
                "pipeline produced {h}, which is not homogeneous"
            )));
        }
        report.homogeneous = Some(h);
    }
    Ok(report)
}

/// Counters for the threshold search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct SearchStats {
    pub nodes: u64,
}

/// Whether some coloring of the `arity`-subsets of `{lo, …, hi}` with
/// `colors` colors has no homogeneous `H` with `|H| > min H`; returns the
/// first such coloring in lexicographic order of color tables (tuples in
/// colex order).
///
/// With `symmetry` on, a tuple may only use a color at most one above the
/// largest color used so far. This is sound: permuting colors preserves
/// homogeneity, so every coloring is equivalent to exactly one whose colors
/// first appear in the order 0, 1, 2, …, and those are precisely the
/// tables the rule admits.
///
/// The first few tuples are enumerated sequentially; the remaining search
/// is split across rayon workers by that prefix and reduced by taking the
/// first prefix (in order) that yields a coloring, so the answer does not
/// depend on the number of workers.
pub fn bad_coloring_exists(
    arity: usize,
    colors: u32,
    lo: u64,
    hi: u64,
    symmetry: bool,
    limits: &Limits,
    stats: &mut SearchStats,
) -> Result<Option<Coloring>> {
    let never = AtomicBool::new(false);
    bad_coloring_exists_with(arity, colors, lo, hi, symmetry, limits, stats, &never)
}

/// [`bad_coloring_exists`] that also stops with a resource-limit error once
/// `cancel` is set.
#[allow(clippy::too_many_arguments)]
pub fn bad_coloring_exists_with(
    arity: usize,
    colors: u32,
    lo: u64,
    hi: u64,
    symmetry: bool,
    limits: &Limits,
    stats: &mut SearchStats,
    cancel: &AtomicBool,
) -> Result<Option<Coloring>> {
    if arity == 0 || colors == 0 {
        return Err(Error::precondition("arity and colors must be positive"));
    }
    if lo < 1 {
        return Err(Error::precondition("the ground set must start at 1 or above"));
    }
    let ground = FiniteSet::interval(lo, hi);
    let n = ground.len();
    if n > 64 {
        return Err(Error::limit("threshold search supports at most 64 ground elements"));
    }
    // sets smaller than the arity are homogeneous for every coloring
    let small = lo.saturating_add(1);
    if small < arity as u64 && (n as u64) >= small {
        return Ok(None);
    }
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    for_each_subset(n, arity, |idx| tuples.push(idx.to_vec()));
    let nodes = AtomicU64::new(stats.nodes);
    let fresh = || Backtrack {
        arity,
        colors,
        lo,
        symmetry,
        tuples: &tuples,
        assign: vec![0; tuples.len()],
        adj: vec![vec![0u64; if arity == 2 { n } else { 0 }]; colors as usize],
        budget: limits.max_search_nodes,
        nodes: &nodes,
        cancel,
    };

    let depth = tuples.len().min(PREFIX_DEPTH);
    let mut prefixes: Vec<(Vec<u32>, u32)> = Vec::new();
    let outcome = fresh().walk(0, 0, depth, &mut |bt, used| {
        prefixes.push((bt.assign[..depth].to_vec(), used));
        false
    });
    let result = outcome.and_then(|_| {
        prefixes
            .par_iter()
            .map(|(prefix, used)| {
                let mut bt = fresh();
                bt.replay(prefix);
                let found = bt.walk(depth, *used, tuples.len(), &mut |_, _| true)?;
                Ok(found.then(|| bt.assign.clone()))
            })
            .find_map_first(|r: Result<Option<Vec<u32>>>| r.transpose())
            .transpose()
    });
    stats.nodes = nodes.load(AtomicOrdering::Relaxed);
    match result? {
        Some(table) => Ok(Some(Coloring::from_table(ground, arity, colors, table)?)),
        None => Ok(None),
    }
}

/// Number of leading tuples enumerated before the search is split.
const PREFIX_DEPTH: usize = 10;

struct Backtrack<'a> {
    arity: usize,
    colors: u32,
    lo: u64,
    symmetry: bool,
    tuples: &'a [Vec<usize>],
    assign: Vec<u32>,
    /// Per color, adjacency bitsets over ground positions (pairs only).
    adj: Vec<Vec<u64>>,
    budget: u64,
    nodes: &'a AtomicU64,
    cancel: &'a AtomicBool,
}

impl Backtrack<'_> {
    fn set(&mut self, t: usize, color: u32) {
        self.assign[t] = color;
        if self.arity == 2 {
            let tup = &self.tuples[t];
            self.adj[color as usize][tup[0]] |= 1 << tup[1];
            self.adj[color as usize][tup[1]] |= 1 << tup[0];
        }
    }

    fn unset(&mut self, t: usize, color: u32) {
        if self.arity == 2 {
            let tup = &self.tuples[t];
            self.adj[color as usize][tup[0]] &= !(1 << tup[1]);
            self.adj[color as usize][tup[1]] &= !(1 << tup[0]);
        }
    }

    fn replay(&mut self, prefix: &[u32]) {
        for (t, &c) in prefix.iter().enumerate() {
            self.set(t, c);
        }
    }

    /// Depth-first over tuples `t..end`; calls `leaf` on every consistent
    /// assignment of tuples `..end` and stops as soon as it returns true.
    fn walk(
        &mut self,
        t: usize,
        used: u32,
        end: usize,
        leaf: &mut dyn FnMut(&Self, u32) -> bool,
    ) -> Result<bool> {
        if t == end {
            return Ok(leaf(self, used));
        }
        let top = if self.symmetry {
            (used + 1).min(self.colors)
        } else {
            self.colors
        };
        for color in 0..top {
            if self.nodes.fetch_add(1, AtomicOrdering::Relaxed) >= self.budget {
                return Err(Error::limit(format!(
                    "threshold search exceeded {} nodes",
                    self.budget
                )));
            }
            if self.cancel.load(AtomicOrdering::Relaxed) {
                return Err(Error::limit("threshold search interrupted"));
            }
            self.set(t, color);
            if !self.violates(t, color) && self.walk(t + 1, used.max(color + 1), end, leaf)? {
                return Ok(true);
            }
            self.unset(t, color);
        }
        Ok(false)
    }

    /// Whether assigning tuple `t` completes a homogeneous `H` with
    /// `|H| > min H`. Tuples are assigned in colex order, so for pairs the
    /// newly completed sets are those whose two largest elements form the
    /// tuple. For other arities every `H` with maximum `top` is checked once
    /// the last tuple with maximum `top` is assigned.
    fn violates(&self, t: usize, color: u32) -> bool {
        let tup = &self.tuples[t];
        if self.arity == 2 {
            return self.pair_violation(&self.adj[color as usize], tup[0], tup[1]);
        }
        let top = *tup.last().expect("arity positive");
        let last_with_top = tup
            .iter()
            .enumerate()
            .all(|(j, &i)| i + (self.arity - 1 - j) == top);
        last_with_top && self.generic_with_max(top)
    }

    fn need(&self, min_pos: usize) -> usize {
        usize::try_from(self.lo).unwrap_or(usize::MAX) + min_pos + 1
    }

    fn pair_violation(&self, adj: &[u64], x: usize, y: usize) -> bool {
        if 2 >= self.need(x) {
            return true;
        }
        let common = adj[x] & adj[y] & below(x);
        let mut us = common;
        while us != 0 {
            let u = us.trailing_zeros() as usize;
            us &= us - 1;
            let need = self.need(u);
            let rest = common & adj[u] & !below(u + 1);
            if 3 + rest.count_ones() as usize >= need && clique_at_least(adj, rest, need.saturating_sub(3)) {
                return true;
            }
        }
        false
    }

    fn generic_with_max(&self, top: usize) -> bool {
        (0..top).any(|u| {
            let need = self.need(u);
            top - u + 1 >= need && {
                let mut cur = vec![u];
                let mut color = None;
                self.add_ok(&[], u, &mut color) && self.grow(&mut cur, top, need, &mut color)
            }
        })
    }

    fn grow(&self, cur: &mut Vec<usize>, top: usize, need: usize, color: &mut Option<u32>) -> bool {
        if cur.len() + 1 >= need {
            let mut c = *color;
            if self.add_ok(cur, top, &mut c) {
                return true;
            }
        }
        let from = cur.last().expect("nonempty") + 1;
        for v in from..top {
            if cur.len() + 1 + (top - v) < need {
                break;
            }
            let mut c = *color;
            if self.add_ok(cur, v, &mut c) {
                cur.push(v);
                if self.grow(cur, top, need, &mut c) {
                    return true;
                }
                cur.pop();
            }
        }
        false
    }

    /// Checks the tuples made of `k-1` members of `cur` followed by `v`
    /// against the running color.
    fn add_ok(&self, cur: &[usize], v: usize, color: &mut Option<u32>) -> bool {
        let k = self.arity;
        let mut ok = true;
        let mut idx = vec![0usize; k];
        for_each_subset(cur.len(), k - 1, |sel| {
            if !ok {
                return;
            }
            for (slot, &s) in idx.iter_mut().zip(sel) {
                *slot = cur[s];
            }
            idx[k - 1] = v;
            let rank: usize = idx.iter().enumerate().map(|(j, &i)| binom(i, j + 1)).sum();
            let col = self.assign[rank];
            match *color {
                None => *color = Some(col),
                Some(c) if c != col => ok = false,
                _ => {}
            }
        });
        ok
    }
}

fn below(i: usize) -> u64 {
    if i >= 64 {
        u64::MAX
    } else {
        (1u64 << i) - 1
    }
}

/// Whether `cand` contains a clique of size `k` in `adj`.
fn clique_at_least(adj: &[u64], mut cand: u64, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    while cand.count_ones() as usize >= k {
        let v = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        if clique_at_least(adj, cand & adj[v], k - 1) {
            return true;
        }
    }
    false
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Least `N ≤ cap` such that every coloring of the `arity`-subsets of
/// `{min_elt, …, N}` with `colors` colors has a homogeneous `H` with
/// `|H| > min H`; `None` if no such `N` exists up to `cap`.
pub fn ph_threshold(
    arity: usize,
    colors: u32,
    min_elt: u64,
    cap: u64,
    limits: &Limits,
) -> Result<Option<u64>> {
    let never = AtomicBool::new(false);
    ph_threshold_with(arity, colors, min_elt, cap, limits, &never, &mut |_, _| {})
}

/// [`ph_threshold`] with cancellation and progress. `progress(n, stats)` is
/// called after each `n` for which a bad coloring was found, so the last
/// reported `n` is a proven lower bound when the search is cut short.
pub fn ph_threshold_with(
    arity: usize,
    colors: u32,
    min_elt: u64,
    cap: u64,
    limits: &Limits,
    cancel: &AtomicBool,
    progress: &mut dyn FnMut(u64, &SearchStats),
) -> Result<Option<u64>> {
    let mut stats = SearchStats::default();
    for n in min_elt..=cap {
        let found =
            bad_coloring_exists_with(arity, colors, min_elt, n, true, limits, &mut stats, cancel)?;
        if found.is_none() {
            return Ok(Some(n));
        }
        progress(n, &stats);
    }
    Ok(None)
}
