//! Subsets of a ground set `[n]` as bit masks, layer-by-layer enumeration
//! and the [`SetFamily`] container.
//!
//! Ground element `i` (1-indexed, as printed) is stored in bit `i - 1`.
//! Within one layer, colex order coincides with numeric order of the masks.

use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::Poset;

pub const MAX_GROUND: usize = 64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask(pub u64);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    /// The set `{1, …, n}`.
    pub fn full(n: usize) -> SubsetMask {
        SubsetMask(low_bits(n))
    }

    /// Builds a mask from 1-indexed elements.
    pub fn from_elements(elements: &[usize]) -> SubsetMask {
        SubsetMask(elements.iter().fold(0, |acc, &e| acc | 1 << (e - 1)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Whether 0-indexed coordinate `bit` is present.
    pub fn has(self, bit: usize) -> bool {
        self.0 >> bit & 1 == 1
    }

    /// 1-indexed elements in ascending order.
    pub fn elements(self) -> Vec<usize> {
        self.coordinates().map(|b| b + 1).collect()
    }

    /// 0-indexed coordinates in ascending order.
    pub fn coordinates(self) -> impl Iterator<Item = usize> {
        let mut w = self.0;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(t)
            }
        })
    }

    #[inline]
    pub fn subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn strict_subset_of(self, other: SubsetMask) -> bool {
        self != other && self.subset_of(other)
    }

    #[inline]
    pub fn minus(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & !other.0)
    }

    #[inline]
    pub fn intersect(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & other.0)
    }

    #[inline]
    pub fn union(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 | other.0)
    }

    /// Whether every bit lies below `ground`.
    pub fn within(self, ground: usize) -> bool {
        self.0 & !low_bits(ground) == 0
    }

    /// Removes 0-indexed coordinate `bit` and shifts higher coordinates down.
    pub fn delete_coordinate(self, bit: usize) -> SubsetMask {
        let low = self.0 & low_bits(bit);
        let high = if bit >= 63 { 0 } else { (self.0 >> (bit + 1)) << bit };
        SubsetMask(low | high)
    }

    /// Sort key: size first, then colex.
    pub fn layer_key(self) -> (u32, u64) {
        (self.0.count_ones(), self.0)
    }

    pub fn to_hex(self) -> String {
        format!("{:#x}", self.0)
    }

    /// Parses `{1,3}` (1-indexed) or `0x5`.
    pub fn parse(text: &str) -> Result<SubsetMask> {
        let t = text.trim();
        if let Some(hex) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
            return u64::from_str_radix(hex, 16)
                .map(SubsetMask)
                .map_err(|_| Error::Parse(format!("bad hex mask `{t}`")));
        }
        let inner = t
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("expected `{{...}}` or `0x..`, got `{t}`")))?;
        let mut mask = 0u64;
        for part in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let e: usize = part
                .parse()
                .map_err(|_| Error::Parse(format!("bad set element `{part}`")))?;
            if e == 0 || e > MAX_GROUND {
                return Err(Error::Parse(format!("set element {e} outside 1..=64")));
            }
            mask |= 1 << (e - 1);
        }
        Ok(SubsetMask(mask))
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().into_iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

#[inline]
pub(crate) fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Every subset of `[n]` whose size lies in `sizes`, size ascending and colex
/// ascending within a size.
pub fn layer_stream(n: usize, sizes: RangeInclusive<usize>) -> Result<impl Iterator<Item = SubsetMask>> {
    if n > MAX_GROUND {
        return Err(Error::Range(format!("ground {n} exceeds {MAX_GROUND}")));
    }
    if !sizes.is_empty() && *sizes.end() > n {
        return Err(Error::Range(format!(
            "layer sizes {}..={} exceed ground {n}",
            sizes.start(),
            sizes.end()
        )));
    }
    Ok(sizes.flat_map(move |s| Layer::new(n, s)))
}

/// Subsets of `[n]` of size exactly `size`, in colex order (Gosper's hack).
struct Layer {
    next: Option<u64>,
    limit: u128,
}

impl Layer {
    fn new(n: usize, size: usize) -> Layer {
        Layer {
            next: (size <= n).then(|| low_bits(size)),
            limit: 1u128 << n,
        }
    }
}

impl Iterator for Layer {
    type Item = SubsetMask;

    fn next(&mut self) -> Option<SubsetMask> {
        let x = self.next?;
        self.next = if x == 0 {
            None
        } else {
            let x128 = x as u128;
            let c = x128 & x128.wrapping_neg();
            let r = x128 + c;
            let nxt = (((r ^ x128) >> 2) / c) | r;
            (nxt < self.limit).then_some(nxt as u64)
        };
        Some(SubsetMask(x))
    }
}

/// A duplicate-free family of subsets of `[ground]` kept in (size, colex) order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetFamily {
    ground: usize,
    members: Vec<SubsetMask>,
}

impl SetFamily {
    pub fn empty(ground: usize) -> Result<SetFamily> {
        check_ground(ground)?;
        Ok(SetFamily {
            ground,
            members: Vec::new(),
        })
    }

    /// Sorts `members` into canonical order; duplicates and out-of-ground
    /// members are rejected.
    pub fn new(ground: usize, mut members: Vec<SubsetMask>) -> Result<SetFamily> {
        check_ground(ground)?;
        if let Some(m) = members.iter().find(|m| !m.within(ground)) {
            return Err(Error::Range(format!("member {m} not within ground {ground}")));
        }
        members.sort_by_key(|m| m.layer_key());
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Parse(format!("duplicate member {}", w[0])));
        }
        Ok(SetFamily { ground, members })
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn members(&self) -> &[SubsetMask] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, set: SubsetMask) -> bool {
        self.members
            .binary_search_by_key(&set.layer_key(), |m| m.layer_key())
            .is_ok()
    }

    /// Inserts `set` at its canonical position; returns false if present.
    pub fn insert(&mut self, set: SubsetMask) -> Result<bool> {
        if !set.within(self.ground) {
            return Err(Error::Range(format!("{set} not within ground {}", self.ground)));
        }
        match self.members.binary_search_by_key(&set.layer_key(), |m| m.layer_key()) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.members.insert(pos, set);
                Ok(true)
            }
        }
    }

    pub fn to_json_members(&self) -> serde_json::Value {
        serde_json::to_value(FamilyDoc {
            ground: self.ground,
            members: Some(self.members.iter().map(|m| m.to_string()).collect()),
            masks: None,
        })
        .expect("family serializes")
    }

    pub fn to_json_masks(&self) -> serde_json::Value {
        serde_json::to_value(FamilyDoc {
            ground: self.ground,
            members: None,
            masks: Some(self.members.iter().map(|m| m.to_hex()).collect()),
        })
        .expect("family serializes")
    }

    /// Accepts either the `members` or the `masks` JSON form.
    pub fn from_json(text: &str) -> Result<SetFamily> {
        let doc: FamilyDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        SetFamily::from_doc(doc)
    }

    pub fn from_json_value(value: &serde_json::Value) -> Result<SetFamily> {
        let doc: FamilyDoc = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        SetFamily::from_doc(doc)
    }

    fn from_doc(doc: FamilyDoc) -> Result<SetFamily> {
        let entries = match (doc.members, doc.masks) {
            (Some(m), None) | (None, Some(m)) => m,
            _ => {
                return Err(Error::Parse(
                    "a family needs exactly one of `members` or `masks`".into(),
                ))
            }
        };
        let members = entries
            .iter()
            .map(|s| SubsetMask::parse(s))
            .collect::<Result<Vec<_>>>()?;
        SetFamily::new(doc.ground, members)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyDoc {
    ground: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    members: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    masks: Option<Vec<String>>,
}

fn check_ground(ground: usize) -> Result<()> {
    if ground == 0 || ground > MAX_GROUND {
        return Err(Error::Range(format!("ground size {ground} not in 1..=64")));
    }
    Ok(())
}

/// The inclusion order on `fam.members()`; element `i` is `members[i]`.
pub fn family_order(fam: &SetFamily) -> Result<Poset> {
    let m = fam.members();
    Poset::from_strict_order(m.len(), |i, j| m[i].strict_subset_of(m[j]))
}

/// All subsets of `[n]` of size at most `h - 1`: the first `h` layers.
pub fn first_layers_family(n: usize, h: usize) -> Result<SetFamily> {
    if h > n {
        return Err(Error::Range(format!("cannot take {h} layers of a {n}-cube")));
    }
    check_ground(n)?;
    let members = if h == 0 {
        Vec::new()
    } else {
        layer_stream(n, 0..=h - 1)?.collect()
    };
    Ok(SetFamily { ground: n, members })
}
