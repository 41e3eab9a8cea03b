//! Shattering, VC-dimension and the Sauer–Shelah bound.

use std::collections::HashSet;

use num_bigint::BigUint;
use serde::Serialize;

use crate::cube::{binomial, SetFamily, SubsetMask};
use crate::embedding::cube_width;
use crate::error::{Error, Result};
use crate::poset::Poset;

/// Dimensions above this are not searched.
pub const MAX_VC_DIMENSION: usize = 20;
const MAX_CANDIDATES_PER_LEVEL: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VcReport {
    /// `None` for the empty family, which shatters nothing.
    pub dimension: Option<usize>,
    #[serde(serialize_with = "witness_text")]
    pub witness: Option<SubsetMask>,
    pub sauer_shelah_sum: u128,
    pub family_size: usize,
}

fn witness_text<S: serde::Serializer>(w: &Option<SubsetMask>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match w {
        Some(m) => s.serialize_str(&m.to_string()),
        None => s.serialize_none(),
    }
}

/// Whether the traces `{A ∩ s}` cover all `2^|s|` subsets of `s`.
pub fn shatters(fam: &SetFamily, s: SubsetMask) -> bool {
    let d = s.len();
    if d >= usize::BITS as usize - 1 || (1usize << d) > fam.len() {
        return false;
    }
    let coords: Vec<usize> = s.coordinates().collect();
    let mut seen = vec![false; 1 << d];
    let mut distinct = 0;
    for &a in fam.members() {
        let trace = coords
            .iter()
            .enumerate()
            .fold(0usize, |acc, (slot, &c)| acc | (a.has(c) as usize) << slot);
        if !seen[trace] {
            seen[trace] = true;
            distinct += 1;
            if distinct == 1 << d {
                return true;
            }
        }
    }
    false
}

/// Exact VC-dimension with the colex-first shattered witness.
///
/// Shattered sets are grown level by level: a `(d+1)`-set is only tested
/// when all of its `d`-subsets are shattered, and only coordinates that are
/// both present in and absent from some member are used.
pub fn vc_dimension(fam: &SetFamily) -> Result<VcReport> {
    let n = fam.ground();
    if fam.is_empty() {
        return Ok(VcReport {
            dimension: None,
            witness: None,
            sauer_shelah_sum: 0,
            family_size: 0,
        });
    }
    let union = fam.members().iter().fold(SubsetMask::EMPTY, |acc, &m| acc.union(m));
    let common = fam
        .members()
        .iter()
        .fold(SubsetMask::full(n), |acc, &m| acc.intersect(m));
    let support: Vec<usize> = union.minus(common).coordinates().collect();

    let mut level: Vec<SubsetMask> = vec![SubsetMask::EMPTY];
    let mut d = 0;
    loop {
        if (1usize << (d + 1)) > fam.len() {
            break;
        }
        if d + 1 > MAX_VC_DIMENSION {
            return Err(Error::Size(format!("VC-dimension search stops at {MAX_VC_DIMENSION}")));
        }
        let known: HashSet<SubsetMask> = level.iter().copied().collect();
        let mut candidates = Vec::new();
        for &s in &level {
            let top = if s.is_empty() {
                0
            } else {
                64 - s.bits().leading_zeros() as usize
            };
            for &x in support.iter().filter(|&&x| x >= top) {
                let c = SubsetMask(s.bits() | 1 << x);
                if c.coordinates()
                    .all(|y| known.contains(&SubsetMask(c.bits() & !(1 << y))))
                {
                    candidates.push(c);
                }
            }
            if candidates.len() > MAX_CANDIDATES_PER_LEVEL {
                return Err(Error::Size(format!(
                    "more than {MAX_CANDIDATES_PER_LEVEL} candidate sets at dimension {}",
                    d + 1
                )));
            }
        }
        let mut next: Vec<SubsetMask> = candidates.into_iter().filter(|&c| shatters(fam, c)).collect();
        if next.is_empty() {
            break;
        }
        next.sort();
        level = next;
        d += 1;
    }
    Ok(VcReport {
        dimension: Some(d),
        witness: level.first().copied(),
        sauer_shelah_sum: sauer_shelah_bound(n, d)?,
        family_size: fam.len(),
    })
}

/// `sum_{i=0}^{d} C(n, i)`.
pub fn sauer_shelah_bound(n: usize, d: usize) -> Result<u128> {
    if d > n || n > 64 {
        return Err(Error::Range(format!("need 0 <= d <= n <= 64, got d = {d}, n = {n}")));
    }
    Ok((0..=d).map(|i| binomial(n, i)).sum())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
    /// False when the step's hypothesis `n >= 2w*` fails.
    pub applicable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim31Report {
    pub vc: Option<usize>,
    pub w_star: usize,
    /// `vc < w*`.
    pub holds: bool,
    pub ground: usize,
    pub family_size: usize,
    pub size_chain: Vec<ChainStep>,
}

impl Claim31Report {
    /// Claim holds and every applicable step of the size chain holds.
    pub fn all_hold(&self) -> bool {
        self.holds && self.size_chain.iter().all(|s| !s.applicable || s.holds)
    }
}

pub fn claim31_check(p: &Poset, fam: &SetFamily) -> Result<Claim31Report> {
    let w_star = cube_width(p)?.cube_width;
    claim31_with_width(w_star, fam)
}

/// [`claim31_check`] with a precomputed cube-width.
pub fn claim31_with_width(w_star: usize, fam: &SetFamily) -> Result<Claim31Report> {
    let vc = vc_dimension(fam)?;
    let n = fam.ground();
    let holds = vc.dimension.is_none_or(|d| d < w_star);
    Ok(Claim31Report {
        vc: vc.dimension,
        w_star,
        holds,
        ground: n,
        family_size: fam.len(),
        size_chain: size_chain(fam.len(), n, w_star),
    })
}

/// `|F| <= sum_{i<w} C(n,i) <= w n^(w-1)/(w-1)! <= 2 n^(w-1)`, each step as
/// an exact integer comparison.
fn size_chain(family_size: usize, n: usize, w: usize) -> Vec<ChainStep> {
    let big = |v: u128| BigUint::from(v);
    let sum: BigUint = (0..w).map(|i| big(binomial(n, i))).sum();
    let step = |name: &str, lhs: BigUint, rhs: BigUint, applicable: bool| ChainStep {
        name: name.to_string(),
        holds: lhs <= rhs,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        applicable,
    };
    let mut steps = vec![step(
        "|F| <= sum_{i<w*} C(n,i)",
        big(family_size as u128),
        sum.clone(),
        true,
    )];
    if w == 0 {
        return steps;
    }
    let large_n = n >= 2 * w;
    let fact: BigUint = (1..w).map(|i| big(i as u128)).product();
    let power = big(n as u128).pow((w - 1) as u32);
    steps.push(step(
        "sum_{i<w*} C(n,i) * (w*-1)! <= w* n^(w*-1)",
        &sum * &fact,
        big(w as u128) * &power,
        large_n,
    ));
    steps.push(step("w* <= 2 (w*-1)!", big(w as u128), big(2) * &fact, large_n));
    steps.push(step(
        "|F| <= 2 n^(w*-1)",
        big(family_size as u128),
        big(2) * &power,
        large_n,
    ));
    steps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{first_layers_family, layer_stream};

    fn fam(n: usize, list: &[&[usize]]) -> SetFamily {
        SetFamily::new(n, list.iter().map(|e| SubsetMask::from_elements(e)).collect()).unwrap()
    }

    #[test]
    fn shatter_examples() {
        let q3 = SetFamily::new(3, layer_stream(3, 0..=3).unwrap().collect()).unwrap();
        assert!(shatters(&q3, SubsetMask::full(3)));
        let bottom = fam(3, &[&[]]);
        assert!(shatters(&bottom, SubsetMask::EMPTY));
        assert!(!shatters(&bottom, SubsetMask::from_elements(&[1])));
        let low = first_layers_family(6, 3).unwrap();
        for s in layer_stream(6, 3..=3).unwrap() {
            assert!(!shatters(&low, s));
        }
    }

    #[test]
    fn dimension_examples() {
        for n in 1..=6 {
            let q = SetFamily::new(n, layer_stream(n, 0..=n).unwrap().collect()).unwrap();
            let r = vc_dimension(&q).unwrap();
            assert_eq!(r.dimension, Some(n));
            assert_eq!(r.sauer_shelah_sum, 1 << n);
        }
        for (n, h) in [(5, 1), (6, 2), (7, 3)] {
            let r = vc_dimension(&first_layers_family(n, h + 1).unwrap()).unwrap();
            assert_eq!(r.dimension, Some(h));
            assert_eq!(r.witness, Some(SubsetMask::full(h)));
        }
        let r = vc_dimension(&fam(4, &[&[]])).unwrap();
        assert_eq!(r.dimension, Some(0));
        assert_eq!(r.witness, Some(SubsetMask::EMPTY));
        assert_eq!(vc_dimension(&SetFamily::empty(3).unwrap()).unwrap().dimension, None);
    }

    #[test]
    fn sauer_shelah_values() {
        assert_eq!(sauer_shelah_bound(3, 1).unwrap(), 4);
        assert_eq!(sauer_shelah_bound(10, 0).unwrap(), 1);
        assert_eq!(sauer_shelah_bound(8, 3).unwrap(), 93);
        assert_eq!(sauer_shelah_bound(64, 64).unwrap(), 1u128 << 64);
        assert!(sauer_shelah_bound(3, 4).is_err());
    }

    #[test]
    fn chain_has_dimension_one() {
        let chain = fam(8, &[&[], &[1], &[1, 2], &[1, 2, 3], &[1, 2, 3, 4]]);
        let r = claim31_with_width(2, &chain).unwrap();
        assert_eq!(r.vc, Some(1));
        assert!(r.all_hold());
    }

    #[test]
    fn size_chain_steps() {
        let steps = size_chain(9, 8, 2);
        assert_eq!(steps.len(), 4);
        assert_eq!(steps[0].rhs, "9");
        assert!(steps.iter().all(|s| s.holds && s.applicable));
        let small_n = size_chain(5, 3, 2);
        assert!(!small_n[1].applicable);
    }
}
