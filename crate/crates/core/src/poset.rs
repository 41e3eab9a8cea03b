//! Finite strict partial orders stored as closed relation matrices.
//!
//! Elements are `0..size`. Row `up[i]` holds every `j` with `i ≺ j` and
//! `down[i]` every `j` with `j ≺ i`; both are kept transitively closed.

use serde::{Deserialize, Serialize};

use crate::bits::BitRow;
use crate::error::{Error, Result};

/// Largest poset accepted by the embedding searches.
pub const MAX_POSET_SIZE: usize = 16;

/// Serialized poset description: a size and a list of `i ≺ j` pairs.
///
/// The pairs may be cover relations or any generating set; the transitive
/// closure is taken on construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetSpec {
    pub size: usize,
    #[serde(default)]
    pub relations: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poset {
    size: usize,
    up: Vec<BitRow>,
    down: Vec<BitRow>,
}

impl Poset {
    pub fn from_spec(spec: &PosetSpec) -> Result<Poset> {
        let pairs: Vec<(usize, usize)> = spec.relations.iter().map(|r| (r[0], r[1])).collect();
        Poset::from_relations(spec.size, &pairs)
    }

    /// Builds the transitive closure of `relations` on `size` elements.
    pub fn from_relations(size: usize, relations: &[(usize, usize)]) -> Result<Poset> {
        if size == 0 {
            return Err(Error::Size("a poset needs at least one element".into()));
        }
        let mut up = vec![BitRow::with_len(size); size];
        for &(i, j) in relations {
            for index in [i, j] {
                if index >= size {
                    return Err(Error::Index { index, size });
                }
            }
            up[i].insert(j);
        }
        // Warshall closure over successor rows.
        for k in 0..size {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.or_assign(&row_k);
                }
            }
        }
        if let Some(i) = (0..size).find(|&i| up[i].contains(i)) {
            return Err(Error::Cycle(format!("element {i} lies on a cycle")));
        }
        Ok(Poset::from_closed_rows(up))
    }

    /// Builds a poset from a strict-order predicate that is already known to
    /// be a partial order (e.g. strict inclusion of distinct sets).
    pub fn from_strict_order(size: usize, lt: impl Fn(usize, usize) -> bool) -> Result<Poset> {
        if size == 0 {
            return Err(Error::Size("a poset needs at least one element".into()));
        }
        let mut up = vec![BitRow::with_len(size); size];
        for (i, row) in up.iter_mut().enumerate() {
            for j in 0..size {
                if i != j && lt(i, j) {
                    row.insert(j);
                }
            }
        }
        let poset = Poset::from_closed_rows(up);
        poset.validate()?;
        Ok(poset)
    }

    fn from_closed_rows(up: Vec<BitRow>) -> Poset {
        let size = up.len();
        let mut down = vec![BitRow::with_len(size); size];
        for (i, row) in up.iter().enumerate() {
            for j in row.iter() {
                down[j].insert(i);
            }
        }
        Poset { size, up, down }
    }

    /// Checks irreflexivity, antisymmetry and transitivity.
    pub fn validate(&self) -> Result<()> {
        for i in 0..self.size {
            if self.lt(i, i) {
                return Err(Error::Cycle(format!("{i} ≺ {i}")));
            }
            for j in self.up[i].iter() {
                if self.lt(j, i) {
                    return Err(Error::Cycle(format!("{i} ≺ {j} ≺ {i}")));
                }
                for l in self.up[j].iter() {
                    if !self.lt(i, l) {
                        return Err(Error::Cycle(format!("{i} ≺ {j} ≺ {l} but not {i} ≺ {l}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    #[inline]
    pub fn comparable(&self, i: usize, j: usize) -> bool {
        i == j || self.lt(i, j) || self.lt(j, i)
    }

    pub fn up(&self, i: usize) -> &BitRow {
        &self.up[i]
    }

    pub fn down(&self, i: usize) -> &BitRow {
        &self.down[i]
    }

    pub fn up_count(&self, i: usize) -> usize {
        self.up[i].count()
    }

    pub fn down_count(&self, i: usize) -> usize {
        self.down[i].count()
    }

    /// Elements ordered by the size of their down-set; a linear extension.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.size).collect();
        order.sort_by_key(|&i| (self.down_count(i), i));
        order
    }

    /// Number of elements on the longest chain ending strictly below each element.
    pub fn depths_below(&self) -> Vec<usize> {
        let mut depth = vec![0; self.size];
        for i in self.linear_extension() {
            depth[i] = self.down[i].iter().map(|j| depth[j] + 1).max().unwrap_or(0);
        }
        depth
    }

    /// Number of elements on the longest chain starting strictly above each element.
    pub fn heights_above(&self) -> Vec<usize> {
        let mut above = vec![0; self.size];
        for i in self.linear_extension().into_iter().rev() {
            above[i] = self.up[i].iter().map(|j| above[j] + 1).max().unwrap_or(0);
        }
        above
    }

    /// Cardinality of the longest chain.
    pub fn height(&self) -> usize {
        self.depths_below().into_iter().max().map_or(0, |d| d + 1)
    }

    /// Cardinality of the largest antichain.
    ///
    /// Computed through Dilworth's theorem: the minimum chain cover equals
    /// `size - ` the maximum matching of the comparability bipartite graph.
    pub fn width(&self) -> usize {
        let n = self.size;
        let mut match_right: Vec<Option<usize>> = vec![None; n];
        let mut matched = 0;
        for left in 0..n {
            let mut seen = vec![false; n];
            if self.augment(left, &mut seen, &mut match_right) {
                matched += 1;
            }
        }
        n - matched
    }

    fn augment(&self, left: usize, seen: &mut [bool], match_right: &mut [Option<usize>]) -> bool {
        for right in self.up[left].iter() {
            if seen[right] {
                continue;
            }
            seen[right] = true;
            let free = match match_right[right] {
                None => true,
                Some(other) => self.augment(other, seen, match_right),
            };
            if free {
                match_right[right] = Some(left);
                return true;
            }
        }
        false
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.size).filter(|&i| self.up[i].is_empty()).collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.size).filter(|&i| self.down[i].is_empty()).collect()
    }

    /// All pairs `(i, j)` with `i ≺ j`, in row-major order.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        (0..self.size)
            .flat_map(|i| self.up[i].iter().map(move |j| (i, j)))
            .collect()
    }

    /// Pairs `(i, j)` where `j` covers `i`.
    pub fn cover_relations(&self) -> Vec<(usize, usize)> {
        self.relations()
            .into_iter()
            .filter(|&(i, j)| !self.up[i].iter().any(|m| self.lt(m, j)))
            .collect()
    }

    /// Elements with identical strict up- and down-sets.
    pub fn twins(&self, i: usize, j: usize) -> bool {
        i != j && self.up[i] == self.up[j] && self.down[i] == self.down[j]
    }

    /// The subposet with `element` removed; remaining elements keep their
    /// relative order.
    pub fn without(&self, element: usize) -> Result<Poset> {
        let keep: Vec<usize> = (0..self.size).filter(|&i| i != element).collect();
        Poset::from_strict_order(keep.len(), |a, b| self.lt(keep[a], keep[b]))
    }

    /// Relabels so that old element `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Poset {
        let mut up = vec![BitRow::with_len(self.size); self.size];
        for (i, j) in self.relations() {
            up[perm[i]].insert(perm[j]);
        }
        Poset::from_closed_rows(up)
    }

    pub fn to_spec(&self) -> PosetSpec {
        PosetSpec {
            size: self.size,
            relations: self.cover_relations().into_iter().map(|(i, j)| [i, j]).collect(),
        }
    }

    /// Text form `k; i<j i<j ...` listing cover relations.
    pub fn to_dsl(&self) -> String {
        let mut out = format!("{};", self.size);
        for (i, j) in self.cover_relations() {
            out.push_str(&format!(" {i}<{j}"));
        }
        out
    }

    pub fn parse_dsl(text: &str) -> Result<Poset> {
        let (head, rest) = text.split_once(';').unwrap_or((text, ""));
        let size: usize = head
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad poset size `{}`", head.trim())))?;
        let mut relations = Vec::new();
        for token in rest.split_whitespace() {
            let (a, b) = token
                .split_once('<')
                .ok_or_else(|| Error::Parse(format!("expected `i<j`, got `{token}`")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad element `{s}` in `{token}`")))
            };
            relations.push((parse(a)?, parse(b)?));
        }
        Poset::from_relations(size, &relations)
    }

    /// Accepts either the JSON [`PosetSpec`] or the text form.
    pub fn parse(text: &str) -> Result<Poset> {
        let trimmed = text.trim();
        if trimmed.starts_with('{') {
            let spec: PosetSpec = serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?;
            Poset::from_spec(&spec)
        } else {
            Poset::parse_dsl(trimmed)
        }
    }
}

/// Fails with [`Error::Size`] when `p` is larger than the search cap.
pub fn check_search_size(p: &Poset) -> Result<()> {
    if p.size() > MAX_POSET_SIZE {
        return Err(Error::Size(format!(
            "poset has {} elements; searches are capped at {MAX_POSET_SIZE}",
            p.size()
        )));
    }
    Ok(())
}
