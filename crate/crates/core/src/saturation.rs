//! P-free testing, the layer-by-layer greedy saturated family, independent
//! saturation checks and a brute-force minimum for tiny cubes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cube::{layer_stream, SetFamily, SubsetMask};
use crate::embedding::{cube_width, separation_witnesses, SeparationReport};
use crate::error::{Error, Result};
use crate::poset::{check_search_size, Poset};
use crate::search::{find_in_index, HostIndex, ThroughFinder};

/// Largest ground accepted by the greedy builder.
pub const GREEDY_MAX_GROUND: usize = 24;
/// Largest ground for exhaustive saturation checks.
pub const FULL_VERIFY_MAX_GROUND: usize = 20;
/// Largest ground for [`exact_sat_oracle`].
pub const ORACLE_MAX_GROUND: usize = 4;
/// Sample count used when full verification is out of reach.
pub const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Full,
    Sample { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerTrace {
    pub size: usize,
    pub accepted: usize,
    pub rejected: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaturationReport {
    pub poset: String,
    pub ground: usize,
    #[serde(serialize_with = "family_as_masks")]
    pub family: SetFamily,
    pub family_size: usize,
    pub p_free: bool,
    pub saturated: bool,
    pub checked_external_sets: u64,
    pub sample_mode: bool,
    /// First external set (in layer order) whose addition creates no copy.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub greedy_trace: Option<Vec<LayerTrace>>,
    pub warnings: Vec<String>,
}

fn family_as_masks<S: serde::Serializer>(fam: &SetFamily, s: S) -> std::result::Result<S::Ok, S::Error> {
    fam.to_json_masks().serialize(s)
}

/// Member indices `w[i]` realizing an induced copy of `p`, if any.
pub fn contains_induced_copy(fam: &SetFamily, p: &Poset) -> Result<Option<Vec<usize>>> {
    check_search_size(p)?;
    find_in_index(p, &HostIndex::from_family(fam), None)
}

/// Starts from every set of size below the cube-height of `p` and sweeps the
/// remaining subsets in (size, colex) order, keeping a set whenever no
/// induced copy of `p` passes through it.
pub fn greedy_saturated_family(p: &Poset, n: usize) -> Result<(SetFamily, SaturationReport)> {
    check_search_size(p)?;
    if n == 0 || n > GREEDY_MAX_GROUND {
        return Err(Error::Size(format!(
            "greedy construction needs 1 <= n <= {GREEDY_MAX_GROUND}, got {n}"
        )));
    }
    let hw = cube_width(p)?;
    let h = hw.cube_height;
    let mut warnings = Vec::new();
    if n < 2 * hw.cube_width {
        warnings.push(format!(
            "n = {n} is below 2w* = {}; only the plain Sauer-Shelah sum applies",
            2 * hw.cube_width
        ));
    }
    if p.size() == 1 {
        warnings.push("single-element poset: the empty family is the saturated family".into());
    }

    let mut members: Vec<SubsetMask> = Vec::new();
    let mut trace = Vec::new();
    let base_top = h.min(n + 1);
    for size in 0..base_top {
        let layer: Vec<SubsetMask> = layer_stream(n, size..=size)?.collect();
        trace.push(LayerTrace {
            size,
            accepted: layer.len(),
            rejected: 0,
        });
        members.extend(layer);
    }
    let finder = ThroughFinder::new(p)?;
    let mut index = HostIndex::from_family(&SetFamily::new(n, members.clone())?);
    let mut rejected_total = 0u64;
    for size in base_top..=n {
        let mut layer = LayerTrace {
            size,
            accepted: 0,
            rejected: 0,
        };
        for set in layer_stream(n, size..=size)? {
            let v = index.push_set(set);
            if finder.find(&index, v)?.is_some() {
                index.pop_set();
                layer.rejected += 1;
            } else {
                members.push(set);
                layer.accepted += 1;
            }
        }
        rejected_total += layer.rejected as u64;
        trace.push(layer);
    }
    let family = SetFamily::new(n, members)?;
    let report = SaturationReport {
        poset: p.to_dsl(),
        ground: n,
        family_size: family.len(),
        family: family.clone(),
        p_free: true,
        saturated: true,
        checked_external_sets: rejected_total,
        sample_mode: false,
        counterexample: None,
        greedy_trace: Some(trace),
        warnings,
    };
    Ok((family, report))
}

/// Re-checks P-freeness and saturation of `fam` from scratch.
pub fn verify_saturated(p: &Poset, fam: &SetFamily, mode: VerifyMode) -> Result<SaturationReport> {
    check_search_size(p)?;
    let n = fam.ground();
    let externals: Vec<SubsetMask> = match mode {
        VerifyMode::Full => {
            if n > FULL_VERIFY_MAX_GROUND {
                return Err(Error::Size(format!(
                    "full verification is capped at n = {FULL_VERIFY_MAX_GROUND}, got {n}"
                )));
            }
            layer_stream(n, 0..=n)?.filter(|s| !fam.contains(*s)).collect()
        }
        VerifyMode::Sample { count, seed } => sample_externals(fam, count, seed),
    };
    let p_free = contains_induced_copy(fam, p)?.is_none();
    let index = HostIndex::from_family(fam);
    let finder = ThroughFinder::new(p)?;
    let failures: Vec<SubsetMask> = externals
        .par_iter()
        .map_init(
            || index.clone(),
            |idx, &set| {
                let v = idx.push_set(set);
                let hit = finder.find(idx, v);
                idx.pop_set();
                hit.map(|h| (h.is_none(), set))
            },
        )
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter_map(|(miss, set)| miss.then_some(set))
        .collect();
    let counterexample = failures.iter().min_by_key(|s| s.layer_key()).map(|s| s.to_string());
    Ok(SaturationReport {
        poset: p.to_dsl(),
        ground: n,
        family_size: fam.len(),
        family: fam.clone(),
        p_free,
        saturated: failures.is_empty(),
        checked_external_sets: externals.len() as u64,
        sample_mode: matches!(mode, VerifyMode::Sample { .. }),
        counterexample,
        greedy_trace: None,
        warnings: Vec::new(),
    })
}

fn sample_externals(fam: &SetFamily, count: usize, seed: u64) -> Vec<SubsetMask> {
    let n = fam.ground();
    let total: u128 = 1u128 << n;
    if fam.len() as u128 >= total {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full = SubsetMask::full(n).bits();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let set = SubsetMask(rng.gen::<u64>() & full);
        if !fam.contains(set) {
            out.push(set);
        }
    }
    out
}

/// Minimum size of a `p`-saturated family in the `n`-cube, with the first
/// witness found.
///
/// Iterative deepening on the family size; within a size, families are
/// built in index order over the cube and abandoned as soon as they stop
/// being P-free.
pub fn exact_sat_oracle(p: &Poset, n: usize) -> Result<(usize, SetFamily)> {
    check_search_size(p)?;
    if n == 0 || n > ORACLE_MAX_GROUND {
        return Err(Error::Size(format!(
            "exact saturation search needs 1 <= n <= {ORACLE_MAX_GROUND}, got {n}"
        )));
    }
    let cube: Vec<SubsetMask> = layer_stream(n, 0..=n)?.collect();
    let finder = ThroughFinder::new(p)?;
    for target in 0..=cube.len() {
        let mut index = HostIndex::from_family(&SetFamily::empty(n)?);
        let mut chosen = Vec::new();
        if oracle_dfs(&finder, &cube, target, 0, &mut index, &mut chosen)? {
            return Ok((target, SetFamily::new(n, chosen)?));
        }
    }
    Err(Error::Internal("the whole cube is always saturated".into()))
}

fn oracle_dfs(
    finder: &ThroughFinder,
    cube: &[SubsetMask],
    target: usize,
    start: usize,
    index: &mut HostIndex,
    chosen: &mut Vec<SubsetMask>,
) -> Result<bool> {
    if chosen.len() == target {
        return is_saturated_free_family(finder, cube, chosen, index);
    }
    let need = target - chosen.len();
    for i in start..=cube.len() - need {
        let v = index.push_set(cube[i]);
        if finder.find(index, v)?.is_none() {
            chosen.push(cube[i]);
            if oracle_dfs(finder, cube, target, i + 1, index, chosen)? {
                return Ok(true);
            }
            chosen.pop();
        }
        index.pop_set();
    }
    Ok(false)
}

fn is_saturated_free_family(
    finder: &ThroughFinder,
    cube: &[SubsetMask],
    chosen: &[SubsetMask],
    index: &mut HostIndex,
) -> Result<bool> {
    for &set in cube {
        if chosen.contains(&set) {
            continue;
        }
        let v = index.push_set(set);
        let hit = finder.find(index, v)?;
        index.pop_set();
        if hit.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether every ground coordinate is a singleton difference `A \ B` of two members.
pub fn separates_ground(fam: &SetFamily) -> SeparationReport {
    separation_witnesses(fam.ground(), fam.members())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;
    use crate::cube::first_layers_family;

    fn cat(name: &str, p: Option<usize>) -> Poset {
        catalog(name, p).unwrap()
    }

    fn fam(n: usize, list: &[&[usize]]) -> SetFamily {
        SetFamily::new(n, list.iter().map(|e| SubsetMask::from_elements(e)).collect()).unwrap()
    }

    #[test]
    fn containment_examples() {
        let chain = fam(2, &[&[], &[1], &[1, 2]]);
        assert_eq!(
            contains_induced_copy(&chain, &cat("chain", Some(3))).unwrap(),
            Some(vec![0, 1, 2])
        );
        let layers = first_layers_family(8, 3).unwrap();
        assert_eq!(contains_induced_copy(&layers, &cat("butterfly", None)).unwrap(), None);
        let q2 = fam(2, &[&[], &[1], &[2], &[1, 2]]);
        assert!(contains_induced_copy(&q2, &cat("diamond", None)).unwrap().is_some());
    }

    #[test]
    fn greedy_two_chain_is_bottom_only() {
        for n in [1, 4, 10] {
            let (f, report) = greedy_saturated_family(&cat("chain", Some(2)), n).unwrap();
            assert_eq!(f.members(), &[SubsetMask::EMPTY]);
            assert!(report.p_free && report.saturated);
        }
    }

    #[test]
    fn greedy_two_antichain_is_colex_first_chain() {
        let (f, report) = greedy_saturated_family(&cat("antichain", Some(2)), 5).unwrap();
        let expected = fam(5, &[&[], &[1], &[1, 2], &[1, 2, 3], &[1, 2, 3, 4], &[1, 2, 3, 4, 5]]);
        assert_eq!(f, expected);
        let trace = report.greedy_trace.unwrap();
        assert_eq!(trace.len(), 6);
        assert_eq!(
            trace[1],
            LayerTrace {
                size: 1,
                accepted: 1,
                rejected: 4
            }
        );
        let verified = verify_saturated(&cat("antichain", Some(2)), &f, VerifyMode::Full).unwrap();
        assert!(verified.p_free && verified.saturated);
        assert_eq!(verified.checked_external_sets, 32 - 6);
    }

    #[test]
    fn greedy_diamond_sizes() {
        let (f, _) = greedy_saturated_family(&cat("diamond", None), 8).unwrap();
        assert!(f.len() * f.len() >= 8);
        assert!(f.len() <= 2 * 8);
    }

    #[test]
    fn single_element_poset_gives_empty_family() {
        let (f, report) = greedy_saturated_family(&cat("chain", Some(1)), 3).unwrap();
        assert!(f.is_empty());
        assert!(!report.warnings.is_empty());
        let v = verify_saturated(&cat("chain", Some(1)), &f, VerifyMode::Full).unwrap();
        assert!(v.p_free && v.saturated);
    }

    #[test]
    fn greedy_caps() {
        assert!(matches!(
            greedy_saturated_family(&cat("chain", Some(2)), 25),
            Err(Error::Size(_))
        ));
        assert!(matches!(
            greedy_saturated_family(&cat("chain", Some(2)), 0),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn verify_examples() {
        let bottom = fam(4, &[&[]]);
        let r = verify_saturated(&cat("chain", Some(2)), &bottom, VerifyMode::Full).unwrap();
        assert!(r.p_free && r.saturated);
        assert_eq!(r.checked_external_sets, 15);

        let bottom3 = fam(3, &[&[]]);
        let r = verify_saturated(&cat("antichain", Some(2)), &bottom3, VerifyMode::Full).unwrap();
        assert!(r.p_free);
        assert!(!r.saturated);
        assert_eq!(r.counterexample.as_deref(), Some("{1}"));

        let big = SetFamily::empty(21).unwrap();
        assert!(matches!(
            verify_saturated(&cat("chain", Some(2)), &big, VerifyMode::Full),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn sample_mode_is_labeled_and_seeded() {
        let (f, _) = greedy_saturated_family(&cat("diamond", None), 10).unwrap();
        let mode = VerifyMode::Sample { count: 300, seed: 7 };
        let a = verify_saturated(&cat("diamond", None), &f, mode).unwrap();
        let b = verify_saturated(&cat("diamond", None), &f, mode).unwrap();
        assert_eq!(a, b);
        assert!(a.sample_mode && a.saturated);
        assert_eq!(a.checked_external_sets, 300);
    }

    #[test]
    fn oracle_examples() {
        let (c2, w) = exact_sat_oracle(&cat("chain", Some(2)), 3).unwrap();
        assert_eq!(c2, 1);
        assert_eq!(w.members(), &[SubsetMask::EMPTY]);
        assert_eq!(exact_sat_oracle(&cat("antichain", Some(2)), 3).unwrap().0, 4);
        assert_eq!(exact_sat_oracle(&cat("chain", Some(2)), 1).unwrap().0, 1);
        assert_eq!(exact_sat_oracle(&cat("chain", Some(1)), 2).unwrap().0, 0);
        assert!(matches!(
            exact_sat_oracle(&cat("chain", Some(2)), 5),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn separation_of_families() {
        let chain = fam(4, &[&[], &[1], &[1, 2], &[1, 2, 3], &[1, 2, 3, 4]]);
        assert!(separates_ground(&chain).separates);
        let bottom = fam(3, &[&[]]);
        let r = separates_ground(&bottom);
        assert!(!r.separates);
        assert_eq!(r.unwitnessed(), vec![0, 1, 2]);
        let (butterfly, _) = greedy_saturated_family(&cat("butterfly", None), 8).unwrap();
        assert!(separates_ground(&butterfly).separates);
    }
}
