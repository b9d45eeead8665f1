use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fundamental::FiniteSet;

/// Binomial coefficients `C(n, k)` for `n <= max_n`, `k <= max_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Binomials {
    rows: Vec<Vec<usize>>,
}

impl Binomials {
    pub(crate) fn new(max_n: usize, max_k: usize) -> Self {
        let mut rows = vec![vec![0usize; max_k + 1]; max_n + 1];
        for n in 0..=max_n {
            rows[n][0] = 1;
            for k in 1..=max_k.min(n) {
                rows[n][k] = rows[n - 1][k - 1].saturating_add(rows[n - 1][k]);
            }
        }
        Binomials { rows }
    }

    pub(crate) fn get(&self, n: usize, k: usize) -> usize {
        if k > n {
            0
        } else {
            self.rows[n][k]
        }
    }
}

/// Colex rank of a strictly increasing index tuple.
pub(crate) fn colex_rank(binom: &Binomials, idx: &[usize]) -> usize {
    idx.iter()
        .enumerate()
        .map(|(j, &i)| binom.get(i, j + 1))
        .sum()
}

/// Calls `f` on every `k`-subset of `0..n` (as increasing index slices) in
/// colex order, so the position of a subset in the call sequence is its
/// [`colex_rank`].
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut j = 0;
        loop {
            if j == k {
                return;
            }
            let limit = if j + 1 < k { idx[j + 1] } else { n };
            if idx[j] + 1 < limit {
                break;
            }
            j += 1;
        }
        idx[j] += 1;
        for (t, slot) in idx.iter_mut().enumerate().take(j) {
            *slot = t;
        }
    }
}

/// A total map from the `arity`-element subsets of `ground` to colors
/// `0..colors`, stored as an explicit table in colex order of index tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    ground: FiniteSet,
    arity: usize,
    colors: u32,
    table: Vec<u32>,
    binom: Binomials,
}

impl Coloring {
    pub fn from_fn(
        ground: FiniteSet,
        arity: usize,
        colors: u32,
        mut f: impl FnMut(&[u64]) -> u32,
    ) -> Result<Self> {
        check_shape(arity, colors)?;
        let mut table = Vec::new();
        let mut buf = vec![0u64; arity];
        let els = ground.elements();
        for_each_subset(els.len(), arity, |idx| {
            for (slot, &i) in buf.iter_mut().zip(idx) {
                *slot = els[i];
            }
            table.push(f(&buf));
        });
        Self::from_table(ground, arity, colors, table)
    }

    /// `table[r]` colors the index tuple of colex rank `r`.
    pub fn from_table(ground: FiniteSet, arity: usize, colors: u32, table: Vec<u32>) -> Result<Self> {
        check_shape(arity, colors)?;
        let binom = Binomials::new(ground.len(), arity);
        let expected = binom.get(ground.len(), arity);
        if table.len() != expected {
            return Err(Error::Coloring(format!(
                "table has {} entries, expected {expected}",
                table.len()
            )));
        }
        if let Some(bad) = table.iter().find(|&&c| c >= colors) {
            return Err(Error::Coloring(format!("color {bad} outside 0..{colors}")));
        }
        Ok(Coloring {
            ground,
            arity,
            colors,
            table,
            binom,
        })
    }

    pub fn constant(ground: FiniteSet, arity: usize, colors: u32, color: u32) -> Result<Self> {
        Self::from_fn(ground, arity, colors, |_| color)
    }

    pub fn ground(&self) -> &FiniteSet {
        &self.ground
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn colors(&self) -> u32 {
        self.colors
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    /// Color of a tuple given by increasing positions in the ground set.
    pub fn color_at(&self, idx: &[usize]) -> u32 {
        debug_assert_eq!(idx.len(), self.arity);
        self.table[colex_rank(&self.binom, idx)]
    }

    /// Color of a tuple of ground elements, in increasing order.
    pub fn color(&self, tuple: &[u64]) -> Result<u32> {
        if tuple.len() != self.arity {
            return Err(Error::Coloring(format!(
                "tuple of length {} for a coloring of arity {}",
                tuple.len(),
                self.arity
            )));
        }
        let mut idx = Vec::with_capacity(tuple.len());
        for (j, &x) in tuple.iter().enumerate() {
            if j > 0 && tuple[j - 1] >= x {
                return Err(Error::Coloring("tuple must strictly increase".into()));
            }
            idx.push(
                self.ground
                    .index_of(x)
                    .ok_or_else(|| Error::Coloring(format!("{x} is not in the ground set")))?,
            );
        }
        Ok(self.color_at(&idx))
    }

    /// The coloring restricted to a subset of the ground set.
    pub fn restrict(&self, sub: &FiniteSet) -> Result<Coloring> {
        let pos: Vec<usize> = sub
            .elements()
            .iter()
            .map(|&x| {
                self.ground
                    .index_of(x)
                    .ok_or_else(|| Error::Coloring(format!("{x} is not in the ground set")))
            })
            .collect::<Result<_>>()?;
        let mut table = Vec::new();
        let mut buf = vec![0usize; self.arity];
        for_each_subset(pos.len(), self.arity, |idx| {
            for (slot, &i) in buf.iter_mut().zip(idx) {
                *slot = pos[i];
            }
            table.push(self.color_at(&buf));
        });
        Coloring::from_table(sub.clone(), self.arity, self.colors, table)
    }

    /// Fixture text: a header line `arity colors`, then one line
    /// `x1 … xk color` per tuple. Lines starting with `#` are comments.
    pub fn to_fixture(&self) -> String {
        let mut out = String::from("# coloring fixture v1\n");
        let _ = writeln!(out, "{} {}", self.arity, self.colors);
        let els = self.ground.elements();
        let mut i = 0;
        for_each_subset(els.len(), self.arity, |idx| {
            for &p in idx {
                let _ = write!(out, "{} ", els[p]);
            }
            let _ = writeln!(out, "{}", self.table[i]);
            i += 1;
        });
        out
    }

    /// Parses fixture text. The ground set is the union of all listed
    /// elements; every `arity`-subset of it must appear exactly once.
    pub fn from_fixture(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .enumerate()
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Coloring("missing header `arity colors`".into()))?;
        let head: Vec<u64> = parse_numbers(header, 0)?;
        let [arity, colors] = head[..] else {
            return Err(Error::Coloring("header must be `arity colors`".into()));
        };
        let arity = arity as usize;
        let colors = u32::try_from(colors).map_err(|_| Error::Coloring("too many colors".into()))?;
        check_shape(arity, colors)?;
        let mut rows: Vec<(Vec<u64>, u32)> = Vec::new();
        for (lineno, line) in lines {
            let nums = parse_numbers(line, lineno)?;
            if nums.len() != arity + 1 {
                return Err(Error::Coloring(format!(
                    "line {}: expected {} numbers, found {}",
                    lineno + 1,
                    arity + 1,
                    nums.len()
                )));
            }
            let tuple = nums[..arity].to_vec();
            if tuple.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Coloring(format!(
                    "line {}: tuple must strictly increase",
                    lineno + 1
                )));
            }
            let color = u32::try_from(nums[arity])
                .ok()
                .filter(|&c| c < colors)
                .ok_or_else(|| {
                    Error::Coloring(format!("line {}: color out of range", lineno + 1))
                })?;
            rows.push((tuple, color));
        }
        let ground = FiniteSet::from_unsorted(rows.iter().flat_map(|(t, _)| t.clone()).collect());
        let binom = Binomials::new(ground.len(), arity);
        let mut table = vec![u32::MAX; binom.get(ground.len(), arity)];
        for (tuple, color) in rows {
            let idx: Vec<usize> = tuple
                .iter()
                .map(|&x| ground.index_of(x).expect("collected above"))
                .collect();
            let r = colex_rank(&binom, &idx);
            if table[r] != u32::MAX {
                return Err(Error::Coloring(format!("tuple {tuple:?} listed twice")));
            }
            table[r] = color;
        }
        if table.contains(&u32::MAX) {
            return Err(Error::Coloring("coloring is not total on its ground set".into()));
        }
        Coloring::from_table(ground, arity, colors, table)
    }
}

fn check_shape(arity: usize, colors: u32) -> Result<()> {
    if arity == 0 {
        return Err(Error::Coloring("arity must be at least 1".into()));
    }
    if colors == 0 {
        return Err(Error::Coloring("at least one color is required".into()));
    }
    Ok(())
}

fn parse_numbers(line: &str, lineno: usize) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|w| {
            w.parse::<u64>()
                .map_err(|e| Error::Coloring(format!("line {}: {w:?}: {e}", lineno + 1)))
        })
        .collect()
}
