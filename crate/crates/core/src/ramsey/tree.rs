use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fundamental::FiniteSet;

use super::coloring::{for_each_subset, Coloring};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErNode {
    /// `None` for the root.
    pub label: Option<u64>,
    pub parent: Option<usize>,
    /// Children in insertion order.
    pub children: Vec<usize>,
    pub depth: usize,
}

/// Tree built by inserting the elements of `X` one at a time. Node `0` is
/// the root; node `k > 0` was created at step `k - 1`, so `T_i` consists of
/// nodes `0..=i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErTree {
    pub level: usize,
    pub nodes: Vec<ErNode>,
}

impl ErTree {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() <= 1
    }

    /// Number of inserted elements.
    pub fn steps(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Label sequence of the path from the root to `node`.
    pub fn labels(&self, node: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.nodes[node].depth);
        let mut cur = Some(node);
        while let Some(n) = cur {
            if let Some(l) = self.nodes[n].label {
                out.push(l);
            }
            cur = self.nodes[n].parent;
        }
        out.reverse();
        out
    }

    pub fn label_set(&self, node: usize) -> FiniteSet {
        FiniteSet::new(self.labels(node)).expect("labels increase along a path")
    }

    /// Children of `node` present in `T_step`.
    pub fn branches_at(&self, node: usize, step: usize) -> usize {
        self.nodes[node].children.iter().filter(|&&c| c <= step).count()
    }

    pub fn branches(&self, node: usize) -> usize {
        self.nodes[node].children.len()
    }

    pub fn max_branching(&self) -> usize {
        self.nodes.iter().map(|n| n.children.len()).max().unwrap_or(0)
    }

    /// Deepest node, leftmost in depth-first order among ties.
    pub fn deepest(&self) -> usize {
        let mut best = 0;
        for n in self.preorder() {
            if self.nodes[n].depth > self.nodes[best].depth {
                best = n;
            }
        }
        best
    }

    /// Depth-first order with children visited in insertion order.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![0usize];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend(self.nodes[n].children.iter().rev());
        }
        out
    }

    /// One line per node, indented by depth, with the branch count.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for n in self.preorder() {
            let node = &self.nodes[n];
            let label = node.label.map_or_else(|| "()".to_string(), |l| l.to_string());
            let _ = writeln!(
                out,
                "{}{} [branches={}]",
                "  ".repeat(node.depth),
                label,
                node.children.len()
            );
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("tree serializes")
    }
}

/// Inserts the elements of `x` in increasing order. Each element extends the
/// node of maximum depth (leftmost among ties) whose labels together with
/// the new element form a `min_level`-homogeneous set.
pub fn build_er_tree(x: &FiniteSet, c: &Coloring, level: usize) -> Result<ErTree> {
    let k = c.arity();
    if level + 1 != k {
        return Err(Error::precondition(format!(
            "tree level must be arity - 1 = {}, got {level}",
            k - 1
        )));
    }
    let pos: Vec<usize> = x
        .elements()
        .iter()
        .map(|&e| {
            c.ground()
                .index_of(e)
                .ok_or_else(|| Error::precondition(format!("{e} is outside the coloring's ground set")))
        })
        .collect::<Result<_>>()?;
    let mut tree = ErTree {
        level,
        nodes: vec![ErNode {
            label: None,
            parent: None,
            children: Vec::new(),
            depth: 0,
        }],
    };
    // ground positions of the labels, per node
    let mut paths: Vec<Vec<usize>> = vec![Vec::new()];
    for (step, &p) in pos.iter().enumerate() {
        let mut best = 0usize;
        let mut stack = vec![0usize];
        while let Some(n) = stack.pop() {
            if !extends(c, &paths[n], p) {
                continue;
            }
            if tree.nodes[n].depth > tree.nodes[best].depth {
                best = n;
            }
            stack.extend(tree.nodes[n].children.iter().rev());
        }
        let id = tree.nodes.len();
        debug_assert_eq!(id, step + 1);
        tree.nodes[best].children.push(id);
        tree.nodes.push(ErNode {
            label: Some(x.elements()[step]),
            parent: Some(best),
            children: Vec::new(),
            depth: tree.nodes[best].depth + 1,
        });
        let mut path = paths[best].clone();
        path.push(p);
        paths.push(path);
    }
    Ok(tree)
}

/// Whether `path ∪ {p}` stays `min_{k-1}`-homogeneous, given that `path` is.
/// Only heads avoiding the last label need checking: their tails are the
/// last label and `p`.
fn extends(c: &Coloring, path: &[usize], p: usize) -> bool {
    let k = c.arity();
    let Some((&last, rest)) = path.split_last() else {
        return true;
    };
    let mut ok = true;
    let mut a = vec![0usize; k];
    let mut b = vec![0usize; k];
    for_each_subset(rest.len(), k - 1, |head| {
        if !ok {
            return;
        }
        for (j, &h) in head.iter().enumerate() {
            a[j] = rest[h];
            b[j] = rest[h];
        }
        a[k - 1] = last;
        b[k - 1] = p;
        ok = c.color_at(&a) == c.color_at(&b);
    });
    ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ramsey::is_min_homogeneous;

    #[test]
    fn constant_coloring_gives_a_path() {
        let x = FiniteSet::interval(3, 12);
        let c = Coloring::constant(x.clone(), 2, 2, 1).unwrap();
        let t = build_er_tree(&x, &c, 1).unwrap();
        assert_eq!(t.max_branching(), 1);
        assert_eq!(t.label_set(t.deepest()), x);
        assert!(build_er_tree(&x, &c, 0).is_err());
    }

    #[test]
    fn siblings_disagree_on_the_last_label() {
        let x = FiniteSet::interval(3, 20);
        let c = Coloring::from_fn(x.clone(), 2, 3, |t| ((t[0] * t[1] + t[1]) % 3) as u32).unwrap();
        let t = build_er_tree(&x, &c, 1).unwrap();
        for (id, node) in t.nodes.iter().enumerate().skip(1) {
            assert!(is_min_homogeneous(&t.label_set(id), &c, 1).unwrap());
            assert!(node.children.len() <= 3);
            let last = node.label.unwrap();
            let cols: Vec<u32> = node
                .children
                .iter()
                .map(|&ch| c.color(&[last, t.nodes[ch].label.unwrap()]).unwrap())
                .collect();
            let mut dedup = cols.clone();
            dedup.sort_unstable();
            dedup.dedup();
            assert_eq!(dedup.len(), cols.len());
        }
        assert_eq!(t.branches(0), 1);
        assert!(t.to_text().starts_with("() [branches=1]\n  3 "));
    }

    #[test]
    fn leftmost_tie_break() {
        // 3,4 form a path; 5 cannot extend (3,4) but can extend 3 or the root
        let x = FiniteSet::new(vec![3, 4, 5, 6]).unwrap();
        let c = Coloring::from_fn(x.clone(), 2, 2, |t| match (t[0], t[1]) {
            (3, 5) => 1,
            (3, 6) => 1,
            (5, 6) => 0,
            (4, 6) => 1,
            _ => 0,
        })
        .unwrap();
        let t = build_er_tree(&x, &c, 1).unwrap();
        assert_eq!(t.labels(3), vec![3, 5]);
        // 6 fits under (3,5); (3,4) gives C(3,4)=0 ≠ C(3,6)=1
        assert_eq!(t.labels(4), vec![3, 5, 6]);
        assert_eq!(t.branches_at(1, 2), 1);
        assert_eq!(t.branches_at(1, 3), 2);
    }
}
