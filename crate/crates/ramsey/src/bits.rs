//! Fixed-capacity bit sets over vertex indices `0..n`.

const WORD: usize = 64;

/// A set of vertices backed by a flat word array. Capacity is fixed at
/// construction; all binary operations require equal capacity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bitset {
    n: usize,
    words: Box<[u64]>,
}

impl Bitset {
    /// Empty set with capacity for vertices `0..n`.
    pub fn new(n: usize) -> Self {
        Bitset {
            n,
            words: vec![0; n.div_ceil(WORD)].into_boxed_slice(),
        }
    }

    /// Set containing every vertex in `0..n`.
    pub fn full(n: usize) -> Self {
        let mut s = Bitset::new(n);
        for w in s.words.iter_mut() {
            *w = !0;
        }
        if !n.is_multiple_of(WORD) {
            if let Some(last) = s.words.last_mut() {
                *last &= (1u64 << (n % WORD)) - 1;
            }
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.n);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.n);
        self.words[i / WORD] &= !(1 << (i % WORD));
    }

    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.n);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// True when `self` and `other` share no element.
    pub fn is_disjoint(&self, other: &Bitset) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(other.words.iter()).all(|(a, b)| a & b == 0)
    }

    pub fn intersection(&self, other: &Bitset) -> Bitset {
        debug_assert_eq!(self.n, other.n);
        let words = self
            .words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| a & b)
            .collect::<Vec<_>>()
            .into_boxed_slice();
        Bitset { n: self.n, words }
    }

    /// Keep only elements strictly greater than `i`.
    pub fn truncate_through(&mut self, i: usize) {
        debug_assert!(i < self.n);
        let (wi, bi) = (i / WORD, i % WORD);
        for w in self.words.iter_mut().take(wi) {
            *w = 0;
        }
        if bi == WORD - 1 {
            self.words[wi] = 0;
        } else {
            self.words[wi] &= !((1u64 << (bi + 1)) - 1);
        }
    }

    /// Elements in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rem = w;
            std::iter::from_fn(move || {
                if rem == 0 {
                    None
                } else {
                    let b = rem.trailing_zeros() as usize;
                    rem &= rem - 1;
                    Some(wi * WORD + b)
                }
            })
        })
    }
}
