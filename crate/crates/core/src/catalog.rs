//! Named posets and seeded random posets.
//!
//! Element numbering per name:
//! - `chain:k`: `0 ≺ 1 ≺ … ≺ k-1`.
//! - `antichain:m`: `m` pairwise incomparable elements.
//! - `butterfly`: `0, 1 ≺ 2, 3`.
//! - `diamond`: `0 ≺ 1, 2 ≺ 3`.
//! - `fork`: `0 ≺ 1` and `0 ≺ 2` (one element below two incomparable ones).
//! - `stacked2:t`: levels `{0,1}, {2,3}, …`; every element of level `i`
//!   lies below every element of level `j > i`.
//! - `boolean:m`: the subsets of an `m`-set under inclusion, numbered in
//!   (size, colex) order.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cube::{layer_stream, SubsetMask};
use crate::error::{Error, Result};
use crate::poset::{Poset, MAX_POSET_SIZE};

pub const CATALOG_NAMES: &[&str] = &[
    "chain",
    "antichain",
    "butterfly",
    "diamond",
    "fork",
    "stacked2",
    "boolean",
];

pub fn catalog(name: &str, parameter: Option<usize>) -> Result<Poset> {
    let need = |p: Option<usize>| p.ok_or_else(|| Error::MissingParameter(name.to_string()));
    let positive = |v: usize| {
        if v == 0 {
            Err(Error::Range(format!("`{name}` needs a positive parameter")))
        } else {
            Ok(v)
        }
    };
    match name {
        "chain" => {
            let k = positive(need(parameter)?)?;
            let rel: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
            Poset::from_relations(k, &rel)
        }
        "antichain" => Poset::from_relations(positive(need(parameter)?)?, &[]),
        "butterfly" => Poset::from_relations(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]),
        "diamond" => Poset::from_relations(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]),
        "fork" => Poset::from_relations(3, &[(0, 1), (0, 2)]),
        "stacked2" => {
            let t = positive(need(parameter)?)?;
            let mut rel = Vec::new();
            for level in 1..t {
                for a in 0..2 {
                    for b in 0..2 {
                        rel.push((2 * (level - 1) + a, 2 * level + b));
                    }
                }
            }
            Poset::from_relations(2 * t, &rel)
        }
        "boolean" => {
            let m = need(parameter)?;
            if m > 6 {
                return Err(Error::Size(format!("boolean:{m} has more than 64 elements")));
            }
            let sets: Vec<SubsetMask> = layer_stream(m, 0..=m)?.collect();
            Poset::from_strict_order(sets.len(), |i, j| sets[i].strict_subset_of(sets[j]))
        }
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

/// Parses `name` or `name:param` and looks it up.
pub fn catalog_from_str(text: &str) -> Result<Poset> {
    let (name, param) = match text.split_once(':') {
        Some((n, p)) => {
            let v = p
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad catalog parameter `{p}`")))?;
            (n.trim(), Some(v))
        }
        None => (text.trim(), None),
    };
    catalog(name, param)
}

/// Samples a random DAG over a random linear extension, keeping each forward
/// edge with probability `edge_density`, and returns its closure.
pub fn random_poset(size: usize, edge_density: f64, seed: u64) -> Result<Poset> {
    if size == 0 || size > MAX_POSET_SIZE {
        return Err(Error::Size(format!(
            "random posets need 1 <= size <= {MAX_POSET_SIZE}, got {size}"
        )));
    }
    if !(0.0..=1.0).contains(&edge_density) {
        return Err(Error::Range(format!("edge density {edge_density} not in [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..size).collect();
    order.shuffle(&mut rng);
    let mut rel = Vec::new();
    for a in 0..size {
        for b in a + 1..size {
            if rng.gen_bool(edge_density) {
                rel.push((order[a], order[b]));
            }
        }
    }
    Poset::from_relations(size, &rel)
}
