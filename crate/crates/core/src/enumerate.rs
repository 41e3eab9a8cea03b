//! Canonical forms and exhaustive enumeration of small posets up to isomorphism.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::poset::Poset;

/// Largest size accepted by [`canonical_form`].
pub const MAX_CANONICAL_SIZE: usize = 8;
/// Largest size accepted by [`enumerate_posets`].
pub const MAX_ENUMERATION_SIZE: usize = 6;

/// Isomorphism-invariant code: the lexicographically smallest sequence of
/// successor rows over all relabelings that sort elements by
/// `(down-degree, up-degree)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode {
    size: usize,
    rows: Vec<u16>,
}

impl CanonicalCode {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rows(&self) -> &[u16] {
        &self.rows
    }

    /// The poset whose element `a` has successor row `rows[a]`.
    pub fn to_poset(&self) -> Poset {
        let rel: Vec<(usize, usize)> = (0..self.size)
            .flat_map(|a| {
                (0..self.size)
                    .filter(move |&b| self.rows[a] >> b & 1 == 1)
                    .map(move |b| (a, b))
            })
            .collect();
        Poset::from_relations(self.size, &rel).expect("canonical code of a valid poset")
    }
}

pub fn canonical_form(p: &Poset) -> Result<CanonicalCode> {
    let k = p.size();
    if k > MAX_CANONICAL_SIZE {
        return Err(Error::Size(format!(
            "canonical forms are limited to {MAX_CANONICAL_SIZE} elements"
        )));
    }
    let key = |i: usize| (p.down_count(i), p.up_count(i));
    let mut sorted: Vec<usize> = (0..k).collect();
    sorted.sort_by_key(|&i| key(i));
    // blocks[a] = elements allowed at position a.
    let blocks: Vec<Vec<usize>> = sorted
        .iter()
        .map(|&e| (0..k).filter(|&i| key(i) == key(e)).collect())
        .collect();

    let mut best: Option<Vec<u16>> = None;
    let mut assignment = Vec::with_capacity(k);
    let mut used = vec![false; k];
    search_labelings(p, &blocks, &mut assignment, &mut used, &mut best);
    Ok(CanonicalCode {
        size: k,
        rows: best.expect("at least one labeling"),
    })
}

fn search_labelings(
    p: &Poset,
    blocks: &[Vec<usize>],
    assignment: &mut Vec<usize>,
    used: &mut [bool],
    best: &mut Option<Vec<u16>>,
) {
    let pos = assignment.len();
    if pos == blocks.len() {
        let mut new_index = vec![0; blocks.len()];
        for (a, &e) in assignment.iter().enumerate() {
            new_index[e] = a;
        }
        let rows: Vec<u16> = assignment
            .iter()
            .map(|&e| p.up(e).iter().fold(0u16, |acc, j| acc | 1 << new_index[j]))
            .collect();
        if best.as_ref().is_none_or(|b| rows < *b) {
            *best = Some(rows);
        }
        return;
    }
    for &e in &blocks[pos] {
        if used[e] {
            continue;
        }
        used[e] = true;
        assignment.push(e);
        search_labelings(p, blocks, assignment, used, best);
        assignment.pop();
        used[e] = false;
    }
}

pub fn is_isomorphic(a: &Poset, b: &Poset) -> Result<bool> {
    Ok(a.size() == b.size() && canonical_form(a)? == canonical_form(b)?)
}

/// One representative per isomorphism class of `size`-element posets, in
/// ascending canonical-code order.
///
/// Every poset has a natural labeling, so it suffices to scan the
/// transitively closed upper-triangular relation matrices.
pub fn enumerate_posets(size: usize) -> Result<impl Iterator<Item = Poset>> {
    if size == 0 || size > MAX_ENUMERATION_SIZE {
        return Err(Error::Size(format!(
            "enumeration supports 1 <= size <= {MAX_ENUMERATION_SIZE}, got {size}"
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..size).flat_map(|i| (i + 1..size).map(move |j| (i, j))).collect();
    let mut classes = BTreeSet::new();
    for mask in 0u32..(1 << pairs.len()) {
        let mut rows = vec![0u16; size];
        for (bit, &(i, j)) in pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                rows[i] |= 1 << j;
            }
        }
        let closed = (0..size).all(|i| {
            (0..size)
                .filter(|&j| rows[i] >> j & 1 == 1)
                .all(|j| rows[j] & !rows[i] == 0)
        });
        if !closed {
            continue;
        }
        let code = CanonicalCode { size, rows };
        classes.insert(canonical_form(&code.to_poset())?);
    }
    Ok(classes.into_iter().map(|code| code.to_poset()))
}
