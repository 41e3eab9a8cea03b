//! Growable bit rows used for relation matrices and search domains.

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    pub fn with_len(len: usize) -> Self {
        BitRow {
            words: vec![0; words_for(len)],
        }
    }

    /// A row with bits `0..len` set.
    pub fn full(len: usize) -> Self {
        let mut row = Self::with_len(len);
        for (w, word) in row.words.iter_mut().enumerate() {
            let lo = w * 64;
            let hi = (lo + 64).min(len);
            *word = if hi - lo == 64 {
                u64::MAX
            } else {
                (1u64 << (hi - lo)) - 1
            };
        }
        row
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        let w = i / 64;
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        if let Some(w) = self.words.get_mut(i / 64) {
            *w &= !(1 << (i % 64));
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn words_mut(&mut self) -> &mut Vec<u64> {
        &mut self.words
    }

    /// Grows the backing storage so that bit `len - 1` is addressable.
    pub fn reserve_len(&mut self, len: usize) {
        let w = words_for(len);
        if w > self.words.len() {
            self.words.resize(w, 0);
        }
    }

    /// Overwrites `self` with `other`, keeping the allocation.
    pub fn assign(&mut self, other: &BitRow) {
        self.words.clear();
        self.words.extend_from_slice(&other.words);
    }

    pub fn and_assign(&mut self, other: &BitRow) {
        for (i, w) in self.words.iter_mut().enumerate() {
            *w &= other.words.get(i).copied().unwrap_or(0);
        }
    }

    pub fn and_not_assign(&mut self, other: &BitRow) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= !o;
        }
    }

    pub fn or_assign(&mut self, other: &BitRow) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + t)
                }
            })
        })
    }

    /// Clears every bit at or below `i`.
    pub fn clear_through(&mut self, i: usize) {
        let w = i / 64;
        for word in self.words.iter_mut().take(w) {
            *word = 0;
        }
        if let Some(word) = self.words.get_mut(w) {
            let b = i % 64;
            *word &= if b == 63 { 0 } else { !((1u64 << (b + 1)) - 1) };
        }
    }

    /// Clears every bit at or above `i`.
    pub fn clear_from(&mut self, i: usize) {
        let w = i / 64;
        if let Some(word) = self.words.get_mut(w) {
            *word &= (1u64 << (i % 64)) - 1;
        }
        for word in self.words.iter_mut().skip(w + 1) {
            *word = 0;
        }
    }
}

fn words_for(len: usize) -> usize {
    len.div_ceil(64).max(1)
}
