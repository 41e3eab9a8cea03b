//! Embeddings of posets into the low layers of a hypercube: the recursive
//! down-set construction, exact cube-height and cube-width, and the
//! separation property of optimal embeddings.

use serde::{Deserialize, Serialize};

use crate::cube::{SubsetMask, MAX_GROUND};
use crate::error::{Error, Result};
use crate::poset::{check_search_size, Poset};

/// An assignment of one subset of `[ground]` per poset element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Embedding {
    pub ground: usize,
    pub images: Vec<SubsetMask>,
}

impl Embedding {
    /// Distinct images inside the ground that realize `p` by strict inclusion.
    pub fn is_valid_for(&self, p: &Poset) -> bool {
        let k = p.size();
        self.images.len() == k
            && self.ground <= MAX_GROUND
            && self.images.iter().all(|m| m.within(self.ground))
            && (0..k).all(|i| {
                (0..k).all(|j| {
                    i == j
                        || (self.images[i] != self.images[j]
                            && self.images[i].strict_subset_of(self.images[j]) == p.lt(i, j))
                })
            })
    }

    pub fn max_image_size(&self) -> usize {
        self.images.iter().map(|m| m.len()).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(EmbeddingDoc {
            ground: self.ground,
            images: self.images.iter().map(|m| m.to_string()).collect(),
        })
        .expect("embedding serializes")
    }

    pub fn from_json(text: &str) -> Result<Embedding> {
        let doc: EmbeddingDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let images = doc
            .images
            .iter()
            .map(|s| SubsetMask::parse(s))
            .collect::<Result<Vec<_>>>()?;
        if doc.ground > MAX_GROUND || images.iter().any(|m| !m.within(doc.ground)) {
            return Err(Error::Range(format!("images exceed ground {}", doc.ground)));
        }
        Ok(Embedding {
            ground: doc.ground,
            images,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct EmbeddingDoc {
    ground: usize,
    images: Vec<String>,
}

/// Exact cube-height and cube-width with an optimal witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightWidthResult {
    pub cube_height: usize,
    pub cube_width: usize,
    pub witness: Embedding,
}

/// The recursive construction into `[k]` with every image of size at most
/// `k - 1`.
///
/// With a unique maximal element, the rest is embedded recursively into
/// `[k - 1]` and the maximum gets all of `[k - 1]`; otherwise each element is
/// sent to its closed down-set, `A_j = {i : p_i ⪯ p_j}`.
pub fn construct_height_embedding(p: &Poset) -> Embedding {
    Embedding {
        ground: p.size(),
        images: construct_images(p),
    }
}

fn construct_images(p: &Poset) -> Vec<SubsetMask> {
    let k = p.size();
    if k == 1 {
        return vec![SubsetMask::EMPTY];
    }
    let maximal = p.maximal_elements();
    if let [top] = maximal[..] {
        let rest = p.without(top).expect("subposet of a valid poset");
        let mut inner = construct_images(&rest).into_iter();
        (0..k)
            .map(|i| {
                if i == top {
                    SubsetMask::full(k - 1)
                } else {
                    inner.next().expect("one image per remaining element")
                }
            })
            .collect()
    } else {
        (0..k)
            .map(|j| {
                let mut bits = 1u64 << j;
                for i in p.down(j).iter() {
                    bits |= 1 << i;
                }
                SubsetMask(bits)
            })
            .collect()
    }
}

/// Searches for an induced copy of `p` among the subsets of `[ground]` of
/// size at most `max_size`.
///
/// Coordinate symmetry is broken by requiring coordinates to appear in
/// order of first use: each image may introduce only the next unused
/// coordinates as a contiguous block. Every embedding can be relabeled into
/// this form, so the search is exact.
pub fn find_cube_embedding(p: &Poset, max_size: usize, ground: usize) -> Result<Option<Embedding>> {
    check_search_size(p)?;
    if ground > MAX_GROUND {
        return Err(Error::Size(format!("ground {ground} exceeds {MAX_GROUND}")));
    }
    let mut search = CubeSearch::new(p, max_size.min(ground), ground);
    let found = search.run();
    Ok(found.then_some(Embedding {
        ground,
        images: search.images,
    }))
}

struct CubeSearch<'a> {
    p: &'a Poset,
    max_size: usize,
    ground: usize,
    order: Vec<usize>,
    depth: Vec<usize>,
    above: Vec<usize>,
    images: Vec<SubsetMask>,
    placed: Vec<bool>,
}

impl<'a> CubeSearch<'a> {
    fn new(p: &'a Poset, max_size: usize, ground: usize) -> Self {
        let k = p.size();
        let degree = |i: usize| p.up_count(i) + p.down_count(i);
        // Next element: most comparabilities with placed elements, then
        // largest degree, then lowest index.
        let mut order = Vec::with_capacity(k);
        let mut placed = vec![false; k];
        for _ in 0..k {
            let next = (0..k)
                .filter(|&i| !placed[i])
                .max_by_key(|&i| {
                    let links = order.iter().filter(|&&q| p.comparable(i, q)).count();
                    (links, degree(i), std::cmp::Reverse(i))
                })
                .expect("unplaced element");
            placed[next] = true;
            order.push(next);
        }
        CubeSearch {
            p,
            max_size,
            ground,
            order,
            depth: p.depths_below(),
            above: p.heights_above(),
            images: vec![SubsetMask::EMPTY; k],
            placed: vec![false; k],
        }
    }

    fn run(&mut self) -> bool {
        self.extend(0, 0)
    }

    fn extend(&mut self, t: usize, used: usize) -> bool {
        if t == self.order.len() {
            return true;
        }
        let p = self.order[t];
        if self.depth[p] + self.above[p] > self.max_size {
            return false;
        }
        let mut lower = SubsetMask::EMPTY;
        let mut upper = SubsetMask::full(used);
        let mut has_above = false;
        let mut hi = self.max_size - self.above[p];
        for q in 0..self.p.size() {
            if !self.placed[q] {
                continue;
            }
            if self.p.lt(q, p) {
                lower = lower.union(self.images[q]);
            } else if self.p.lt(p, q) {
                has_above = true;
                upper = upper.intersect(self.images[q]);
                hi = hi.min(self.images[q].len().saturating_sub(1));
            }
        }
        if !lower.subset_of(upper) || lower.len() > hi {
            return false;
        }
        let lo = self.depth[p].max(lower.len());
        let free = upper.minus(lower);
        let free_len = free.len();
        let max_new = if has_above {
            0
        } else {
            (hi - lower.len()).min(self.ground - used)
        };
        for fresh in 0..=max_new {
            let block = SubsetMask(crate::cube::low_bits(used + fresh) & !crate::cube::low_bits(used));
            let base = lower.union(block);
            let min_old = lo.saturating_sub(base.len());
            let max_old = (hi - base.len()).min(free_len);
            for old in min_old..=max_old {
                let mut found = false;
                for_each_subset_of_size(free, old, |y| {
                    let x = base.union(y);
                    if self.consistent(p, x) {
                        self.images[p] = x;
                        self.placed[p] = true;
                        if self.extend(t + 1, used + fresh) {
                            found = true;
                            return true;
                        }
                        self.placed[p] = false;
                    }
                    false
                });
                if found {
                    return true;
                }
            }
        }
        false
    }

    fn consistent(&self, p: usize, x: SubsetMask) -> bool {
        (0..self.p.size()).all(|q| {
            if !self.placed[q] {
                return true;
            }
            let y = self.images[q];
            if self.p.lt(q, p) {
                y.strict_subset_of(x)
            } else if self.p.lt(p, q) {
                x.strict_subset_of(y)
            } else {
                !x.subset_of(y) && !y.subset_of(x)
            }
        })
    }
}

/// Calls `f` on every subset of `mask` with `size` elements, in colex order,
/// until `f` returns true.
fn for_each_subset_of_size(mask: SubsetMask, size: usize, mut f: impl FnMut(SubsetMask) -> bool) {
    let coords: Vec<usize> = mask.coordinates().collect();
    let n = coords.len();
    if size > n {
        return;
    }
    if size == 0 {
        f(SubsetMask::EMPTY);
        return;
    }
    let limit = 1u128 << n;
    let mut pattern = (1u128 << size) - 1;
    while pattern < limit {
        let mut x = 0u64;
        let mut bits = pattern;
        while bits != 0 {
            let t = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            x |= 1 << coords[t];
        }
        if f(SubsetMask(x)) {
            return;
        }
        let c = pattern & pattern.wrapping_neg();
        let r = pattern + c;
        pattern = (((r ^ pattern) >> 2) / c) | r;
    }
}

/// Ground size that any embedding of `p` with images of size `<= h` can be
/// compressed into: the union of the maximal elements' images, capped by the
/// universal cube-width bound `floor(k^2 / 4) + 2` (valid once `h` is the
/// least feasible height).
fn ground_bound(p: &Poset, h: usize) -> usize {
    let k = p.size();
    (h * p.maximal_elements().len()).min(k * k / 4 + 2)
}

/// Least `h` such that `p` embeds as an induced subposet of the sets of
/// size at most `h` in some cube.
pub fn cube_height(p: &Poset) -> Result<usize> {
    Ok(cube_height_with_witness(p)?.0)
}

fn cube_height_with_witness(p: &Poset) -> Result<(usize, Embedding)> {
    check_search_size(p)?;
    let k = p.size();
    // A chain of `height` elements needs `height` distinct set sizes.
    for h in p.height() - 1..k {
        let ground = ground_bound(p, h);
        if let Some(e) = find_cube_embedding(p, h, ground)? {
            return Ok((h, e));
        }
    }
    Err(Error::Internal(format!(
        "no embedding of height <= {} found for a {k}-element poset",
        k - 1
    )))
}

/// Exact cube-height, cube-width and an optimal witness over `[w*]`.
pub fn cube_width(p: &Poset) -> Result<HeightWidthResult> {
    let (h, at_bound) = cube_height_with_witness(p)?;
    let upper = at_bound.ground.min(h * p.width());
    for n in h..=upper {
        let found = if n == at_bound.ground {
            Some(at_bound.clone())
        } else {
            find_cube_embedding(p, h, n)?
        };
        if let Some(witness) = found {
            return Ok(HeightWidthResult {
                cube_height: h,
                cube_width: n,
                witness,
            });
        }
    }
    Err(Error::Internal(format!(
        "no embedding at height {h} within the proven ground bound {upper}"
    )))
}

/// Per-coordinate singleton-difference witnesses of an embedding or family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationReport {
    pub separates: bool,
    /// `witnesses[a] = Some((i, j))` with `images[i] \ images[j] = {a}` (0-indexed coordinate).
    pub witnesses: Vec<Option<(usize, usize)>>,
}

impl SeparationReport {
    pub fn unwitnessed(&self) -> Vec<usize> {
        self.witnesses
            .iter()
            .enumerate()
            .filter(|(_, w)| w.is_none())
            .map(|(a, _)| a)
            .collect()
    }
}

/// For each coordinate of `[ground]`, the first ordered pair `(i, j)` with
/// `sets[i] \ sets[j] = {a}`.
pub fn separation_witnesses(ground: usize, sets: &[SubsetMask]) -> SeparationReport {
    let mut witnesses: Vec<Option<(usize, usize)>> = vec![None; ground];
    for (i, &a) in sets.iter().enumerate() {
        for (j, &b) in sets.iter().enumerate() {
            let diff = a.minus(b);
            if diff.len() == 1 {
                let coord = diff.bits().trailing_zeros() as usize;
                if coord < ground && witnesses[coord].is_none() {
                    witnesses[coord] = Some((i, j));
                }
            }
        }
    }
    SeparationReport {
        separates: witnesses.iter().all(Option::is_some),
        witnesses,
    }
}

pub fn check_separation(e: &Embedding) -> SeparationReport {
    separation_witnesses(e.ground, &e.images)
}

/// Deletes unwitnessed coordinates (lowest first) until the embedding
/// separates its ground.
pub fn minimize_ground_set(e: &Embedding) -> Embedding {
    let mut out = e.clone();
    while let Some(&a) = check_separation(&out).unwitnessed().first() {
        for image in &mut out.images {
            *image = image.delete_coordinate(a);
        }
        out.ground -= 1;
    }
    out
}

/// The lower bound `2 * sqrt(w - 2)` on the size of a family separating `[w]`.
pub fn separation_lower_bound(w: usize) -> Result<f64> {
    if w < 2 {
        return Err(Error::Range(format!("separation bound needs w >= 2, got {w}")));
    }
    Ok(2.0 * ((w - 2) as f64).sqrt())
}
