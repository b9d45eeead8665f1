use crate::error::{Error, Result};
use crate::fundamental::FiniteSet;

use super::coloring::{for_each_subset, Coloring};

fn positions(y: &FiniteSet, c: &Coloring) -> Result<Vec<usize>> {
    y.elements()
        .iter()
        .map(|&x| {
            c.ground().index_of(x).ok_or_else(|| {
                Error::precondition(format!("{x} is outside the coloring's ground set"))
            })
        })
        .collect()
}

/// Every `arity`-subset of `y` gets the same color.
pub fn is_homogeneous(y: &FiniteSet, c: &Coloring) -> Result<bool> {
    let pos = positions(y, c)?;
    let mut first = None;
    let mut ok = true;
    let mut buf = vec![0usize; c.arity()];
    for_each_subset(pos.len(), c.arity(), |idx| {
        if !ok {
            return;
        }
        for (slot, &i) in buf.iter_mut().zip(idx) {
            *slot = pos[i];
        }
        let col = c.color_at(&buf);
        match first {
            None => first = Some(col),
            Some(f) if f != col => ok = false,
            _ => {}
        }
    });
    Ok(ok)
}

/// The color of an `arity`-subset of `y` depends only on its `i` smallest
/// elements. `i = arity` is vacuous; `i = 0` is ordinary homogeneity.
pub fn is_min_homogeneous(y: &FiniteSet, c: &Coloring, i: usize) -> Result<bool> {
    let k = c.arity();
    if i > k {
        return Err(Error::precondition(format!(
            "min-homogeneity level {i} exceeds arity {k}"
        )));
    }
    if i == 0 {
        return is_homogeneous(y, c);
    }
    let pos = positions(y, c)?;
    let mut ok = true;
    let mut buf = vec![0usize; k];
    for_each_subset(pos.len(), i, |head| {
        if !ok {
            return;
        }
        let base = head[i - 1] + 1;
        if pos.len() - base < k - i {
            return;
        }
        for (slot, &h) in buf.iter_mut().zip(head) {
            *slot = pos[h];
        }
        let mut first = None;
        for_each_subset(pos.len() - base, k - i, |tail| {
            if !ok {
                return;
            }
            for (slot, &t) in buf[i..].iter_mut().zip(tail) {
                *slot = pos[base + t];
            }
            let col = c.color_at(&buf);
            match first {
                None => first = Some(col),
                Some(f) if f != col => ok = false,
                _ => {}
            }
        });
    });
    Ok(ok)
}
