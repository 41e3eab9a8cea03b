//! Induced-copy search: an exact backtracking matcher of a small pattern
//! poset into a host order, with bitset domains and forward checking.
//!
//! At each node the unplaced pattern element with the smallest domain is
//! assigned next (ties: larger `up + down` degree, then index); host
//! candidates are tried in ascending host index, so the witness returned is
//! the first one in that fixed order.

use rayon::prelude::*;

use crate::bits::BitRow;
use crate::cube::{SetFamily, SubsetMask};
use crate::error::{Error, Result};
use crate::poset::{check_search_size, Poset};

/// Host-side relation rows and the static data used for candidate filtering.
#[derive(Clone, Debug)]
pub struct HostIndex {
    up: Vec<BitRow>,
    down: Vec<BitRow>,
    up_deg: Vec<usize>,
    down_deg: Vec<usize>,
    /// Present for set-family hosts: the member masks and the ground size.
    sets: Option<(Vec<SubsetMask>, usize)>,
}

impl HostIndex {
    pub fn from_poset(host: &Poset) -> HostIndex {
        HostIndex {
            up: (0..host.size()).map(|i| host.up(i).clone()).collect(),
            down: (0..host.size()).map(|i| host.down(i).clone()).collect(),
            up_deg: (0..host.size()).map(|i| host.up_count(i)).collect(),
            down_deg: (0..host.size()).map(|i| host.down_count(i)).collect(),
            sets: None,
        }
    }

    pub fn from_family(fam: &SetFamily) -> HostIndex {
        let mut index = HostIndex {
            up: Vec::with_capacity(fam.len()),
            down: Vec::with_capacity(fam.len()),
            up_deg: Vec::with_capacity(fam.len()),
            down_deg: Vec::with_capacity(fam.len()),
            sets: Some((Vec::with_capacity(fam.len()), fam.ground())),
        };
        for &m in fam.members() {
            index.push_set(m);
        }
        index
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    /// Appends a set to a family host and returns its index.
    ///
    /// Panics on poset hosts.
    pub fn push_set(&mut self, set: SubsetMask) -> usize {
        let (masks, _) = self.sets.as_mut().expect("push_set needs a family host");
        let v = masks.len();
        let mut up_v = BitRow::with_len(v + 1);
        let mut down_v = BitRow::with_len(v + 1);
        for (w, &m) in masks.iter().enumerate() {
            if m.strict_subset_of(set) {
                down_v.insert(w);
                self.up[w].insert(v);
                self.up_deg[w] += 1;
            } else if set.strict_subset_of(m) {
                up_v.insert(w);
                self.down[w].insert(v);
                self.down_deg[w] += 1;
            }
        }
        masks.push(set);
        self.up_deg.push(up_v.count());
        self.down_deg.push(down_v.count());
        self.up.push(up_v);
        self.down.push(down_v);
        v
    }

    /// Removes the most recently pushed set.
    pub fn pop_set(&mut self) {
        let (masks, _) = self.sets.as_mut().expect("pop_set needs a family host");
        let v = masks.len() - 1;
        masks.pop();
        let up_v = self.up.pop().expect("nonempty host");
        let down_v = self.down.pop().expect("nonempty host");
        self.up_deg.pop();
        self.down_deg.pop();
        for w in up_v.iter() {
            self.down[w].remove(v);
            self.down_deg[w] -= 1;
        }
        for w in down_v.iter() {
            self.up[w].remove(v);
            self.up_deg[w] -= 1;
        }
    }

    /// Degree and rank filters: host `v` can stand for pattern element `p`.
    fn admits(&self, pat: &PatternInfo, p: usize, v: usize) -> bool {
        if self.up_deg[v] < pat.up_count[p] || self.down_deg[v] < pat.down_count[p] {
            return false;
        }
        match &self.sets {
            Some((masks, ground)) => {
                let size = masks[v].len();
                size >= pat.depth[p] && ground - size >= pat.above[p]
            }
            None => true,
        }
    }

    fn static_domain(&self, pat: &PatternInfo, p: usize) -> BitRow {
        let mut dom = BitRow::with_len(self.len());
        for v in 0..self.len() {
            if self.admits(pat, p, v) {
                dom.insert(v);
            }
        }
        dom
    }

    /// Domains with pattern element `a` fixed at `v` and every other element
    /// restricted to its relation with `v`; `None` if one is empty.
    fn anchored_domains(&self, pat: &PatternInfo, a: usize, v: usize) -> Option<Vec<BitRow>> {
        if !self.admits(pat, a, v) {
            return None;
        }
        let mut incomparable = BitRow::full(self.len());
        incomparable.and_not_assign(&self.up[v]);
        incomparable.and_not_assign(&self.down[v]);
        incomparable.remove(v);
        let mut domains = Vec::with_capacity(pat.k);
        for q in 0..pat.k {
            let mut dom = BitRow::with_len(self.len());
            if q == a {
                dom.insert(v);
            } else {
                let related = match pat.rel[a][q] {
                    Rel::Below => &self.down[v],
                    Rel::Above => &self.up[v],
                    Rel::Incomparable => &incomparable,
                };
                for w in related.iter() {
                    if self.admits(pat, q, w) {
                        dom.insert(w);
                    }
                }
                if dom.is_empty() {
                    return None;
                }
            }
            domains.push(dom);
        }
        Some(domains)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Rel {
    Below,
    Above,
    Incomparable,
}

struct PatternInfo {
    k: usize,
    /// rel[p][q]: how q relates to p.
    rel: Vec<Vec<Rel>>,
    twins: Vec<Vec<bool>>,
    up_count: Vec<usize>,
    down_count: Vec<usize>,
    depth: Vec<usize>,
    above: Vec<usize>,
    order: Vec<usize>,
}

impl PatternInfo {
    fn new(p: &Poset, anchor: Option<usize>) -> PatternInfo {
        let k = p.size();
        let rel = (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| {
                        if p.lt(b, a) {
                            Rel::Below
                        } else if p.lt(a, b) {
                            Rel::Above
                        } else {
                            Rel::Incomparable
                        }
                    })
                    .collect()
            })
            .collect();
        // The anchor keeps no order against its twins: swapping twin images
        // moves any copy through the anchor vertex onto the anchor.
        let twins = (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| p.twins(a, b) && anchor != Some(a) && anchor != Some(b))
                    .collect()
            })
            .collect();
        let up_count: Vec<usize> = (0..k).map(|i| p.up_count(i)).collect();
        let down_count: Vec<usize> = (0..k).map(|i| p.down_count(i)).collect();
        let mut order: Vec<usize> = (0..k).filter(|&i| Some(i) != anchor).collect();
        order.sort_by_key(|&i| (std::cmp::Reverse(up_count[i] + down_count[i]), i));
        if let Some(a) = anchor {
            order.insert(0, a);
        }
        PatternInfo {
            k,
            rel,
            twins,
            up_count,
            down_count,
            depth: p.depths_below(),
            above: p.heights_above(),
            order,
        }
    }
}

struct Matcher<'a> {
    pat: &'a PatternInfo,
    host: &'a HostIndex,
    image: Vec<usize>,
    /// levels[d][q]: domain of q with d elements placed.
    levels: Vec<Vec<BitRow>>,
    union: BitRow,
    nodes: u64,
    budget: Option<u64>,
}

impl<'a> Matcher<'a> {
    fn new(pat: &'a PatternInfo, host: &'a HostIndex, domains: &[BitRow], budget: Option<u64>) -> Self {
        let mut levels = vec![domains.to_vec(); pat.k + 1];
        levels[0] = domains.to_vec();
        Matcher {
            pat,
            host,
            image: vec![usize::MAX; pat.k],
            levels,
            union: BitRow::with_len(host.len()),
            nodes: 0,
            budget,
        }
    }

    /// Unplaced element with the smallest domain; ties go to the earlier
    /// element of the static order.
    fn choose(&self, depth: usize) -> usize {
        let doms = &self.levels[depth];
        self.pat
            .order
            .iter()
            .copied()
            .filter(|&q| self.image[q] == usize::MAX)
            .min_by_key(|&q| doms[q].count())
            .expect("unplaced element")
    }

    /// Places `p ↦ v` and derives the next level of domains; false if some
    /// domain becomes empty or their union is too small.
    fn place(&mut self, depth: usize, p: usize, v: usize) -> bool {
        self.image[p] = v;
        let (done, rest) = self.levels.split_at_mut(depth + 1);
        let (cur, next) = (&done[depth], &mut rest[0]);
        self.union.clear_from(0);
        let mut remaining = 0;
        for q in 0..self.pat.k {
            if self.image[q] != usize::MAX {
                continue;
            }
            remaining += 1;
            let dom = &mut next[q];
            dom.assign(&cur[q]);
            match self.pat.rel[p][q] {
                Rel::Below => dom.and_assign(&self.host.down[v]),
                Rel::Above => dom.and_assign(&self.host.up[v]),
                Rel::Incomparable => {
                    dom.and_not_assign(&self.host.up[v]);
                    dom.and_not_assign(&self.host.down[v]);
                }
            }
            dom.remove(v);
            if self.pat.twins[p][q] {
                if p < q {
                    dom.clear_through(v);
                } else {
                    dom.clear_from(v);
                }
            }
            if dom.is_empty() {
                return false;
            }
            self.union.or_assign(dom);
        }
        self.union.count() >= remaining
    }

    fn dfs(&mut self, depth: usize) -> Result<bool> {
        if depth == self.pat.k {
            return Ok(true);
        }
        let p = self.choose(depth);
        let candidates: Vec<usize> = self.levels[depth][p].iter().collect();
        for v in candidates {
            self.nodes += 1;
            if let Some(limit) = self.budget {
                if self.nodes > limit {
                    return Err(Error::BudgetExhausted(limit));
                }
            }
            if self.place(depth, p, v) && self.dfs(depth + 1)? {
                return Ok(true);
            }
            self.image[p] = usize::MAX;
        }
        Ok(false)
    }
}

fn initial_domains(pat: &PatternInfo, host: &HostIndex) -> Vec<BitRow> {
    (0..pat.k).map(|p| host.static_domain(pat, p)).collect()
}

/// Searches for an induced copy of `pattern` in `host`.
///
/// Returns `image[i]` = host element of pattern element `i`. With a budget,
/// exceeding it yields [`Error::BudgetExhausted`] instead of an answer.
pub fn find_induced_copy(pattern: &Poset, host: &Poset, budget: Option<u64>) -> Result<Option<Vec<usize>>> {
    find_in_index(pattern, &HostIndex::from_poset(host), budget)
}

/// [`find_induced_copy`] against a prepared host index.
///
/// Without a budget the first-level branches run on the current rayon pool;
/// the witness is the same as the sequential one.
pub fn find_in_index(pattern: &Poset, host: &HostIndex, budget: Option<u64>) -> Result<Option<Vec<usize>>> {
    check_search_size(pattern)?;
    if pattern.size() > host.len() {
        return Ok(None);
    }
    let pat = PatternInfo::new(pattern, None);
    let domains = initial_domains(&pat, host);
    let mut m = Matcher::new(&pat, host, &domains, budget);
    if budget.is_some() || rayon::current_num_threads() <= 1 {
        return Ok(m.dfs(0)?.then_some(m.image));
    }
    let first = m.choose(0);
    let candidates: Vec<usize> = domains[first].iter().collect();
    let found = candidates.par_iter().find_map_first(|&v| {
        let mut m = Matcher::new(&pat, host, &domains, None);
        m.nodes = 1;
        if !m.place(0, first, v) {
            return None;
        }
        match m.dfs(1) {
            Ok(true) => Some(m.image),
            _ => None,
        }
    });
    Ok(found)
}

/// Searches for a copy of `pattern` that uses host element `vertex`, trying
/// every pattern element as its preimage in index order.
pub fn find_copy_through(pattern: &Poset, host: &HostIndex, vertex: usize) -> Result<Option<Vec<usize>>> {
    ThroughFinder::new(pattern)?.find(host, vertex)
}

/// [`find_copy_through`] with the per-anchor pattern data prepared once.
pub struct ThroughFinder {
    k: usize,
    anchors: Vec<(usize, PatternInfo)>,
}

impl ThroughFinder {
    pub fn new(pattern: &Poset) -> Result<ThroughFinder> {
        check_search_size(pattern)?;
        let k = pattern.size();
        // A twin of an earlier anchor gives the same copies up to relabeling.
        let anchors = (0..k)
            .filter(|&a| !(0..a).any(|b| pattern.twins(a, b)))
            .map(|a| (a, PatternInfo::new(pattern, Some(a))))
            .collect();
        Ok(ThroughFinder { k, anchors })
    }

    pub fn find(&self, host: &HostIndex, vertex: usize) -> Result<Option<Vec<usize>>> {
        if self.k > host.len() {
            return Ok(None);
        }
        for (a, pat) in &self.anchors {
            let Some(domains) = host.anchored_domains(pat, *a, vertex) else {
                continue;
            };
            let mut m = Matcher::new(pat, host, &domains, None);
            if m.dfs(0)? {
                return Ok(Some(m.image));
            }
        }
        Ok(None)
    }
}

/// Whether `image` realizes an induced copy of `pattern` in `host`.
pub fn is_induced_copy(pattern: &Poset, host: &Poset, image: &[usize]) -> bool {
    let k = pattern.size();
    if image.len() != k || image.iter().any(|&v| v >= host.size()) {
        return false;
    }
    (0..k).all(|i| (0..k).all(|j| i == j || (image[i] != image[j] && pattern.lt(i, j) == host.lt(image[i], image[j]))))
}
