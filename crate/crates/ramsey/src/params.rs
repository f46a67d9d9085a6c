//! Clique-size parameter lists for multicolor Ramsey numbers.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamsError {
    #[error("parameter list is empty")]
    Empty,
    #[error("parameter {0} is below 2; every clique size must be at least 2")]
    TooSmall(u32),
    #[error("cannot parse {0:?} as a clique size")]
    BadInt(String),
}

/// A multiset of clique sizes `k_1 <= ... <= k_r`, each at least 2.
///
/// `R(k_1, ..., k_r)` is invariant under permuting the list, so parameters are
/// kept sorted; two lists that differ only by order compare equal and share a
/// knowledge-base entry. Ordering is by length first, then lexicographic,
/// which keeps fact listings grouped by color count.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Params {
    ks: Vec<u32>,
}

impl Params {
    /// Sort `raw` into canonical form. Errors on an empty list or any entry
    /// below 2.
    pub fn new(raw: &[u32]) -> Result<Params, ParamsError> {
        if raw.is_empty() {
            return Err(ParamsError::Empty);
        }
        if let Some(&bad) = raw.iter().find(|&&k| k < 2) {
            return Err(ParamsError::TooSmall(bad));
        }
        let mut ks = raw.to_vec();
        ks.sort_unstable();
        Ok(Params { ks })
    }

    /// The diagonal list `(k, ..., k)` with `r` entries.
    pub fn diagonal(k: u32, r: usize) -> Params {
        assert!(k >= 2 && r >= 1);
        Params { ks: vec![k; r] }
    }

    pub fn ks(&self) -> &[u32] {
        &self.ks
    }

    /// Number of colors.
    pub fn r(&self) -> usize {
        self.ks.len()
    }

    pub fn max_entry(&self) -> u32 {
        *self.ks.last().expect("nonempty by construction")
    }

    /// `Some(k)` when every entry equals `k`.
    pub fn diagonal_value(&self) -> Option<u32> {
        let k = self.ks[0];
        self.ks.iter().all(|&x| x == k).then_some(k)
    }

    /// Replace the entries at positions `i` and `j` (`i != j`) with `a` and
    /// `b`, re-canonicalizing.
    pub fn with_replaced(&self, i: usize, j: usize, a: u32, b: u32) -> Result<Params, ParamsError> {
        debug_assert!(i != j);
        let mut ks = self.ks.clone();
        ks[i] = a;
        ks[j] = b;
        Params::new(&ks)
    }

    /// Entries with one slot removed, re-canonicalized. Errors when the last
    /// entry is removed.
    pub fn without_index(&self, i: usize) -> Result<Params, ParamsError> {
        let mut ks = self.ks.clone();
        ks.remove(i);
        Params::new(&ks)
    }

    /// Entries with `extra` appended, re-canonicalized.
    pub fn with_appended(&self, extra: u32) -> Result<Params, ParamsError> {
        let mut ks = self.ks.clone();
        ks.push(extra);
        Params::new(&ks)
    }

    /// Multiset union of two parameter lists.
    pub fn union(&self, other: &Params) -> Params {
        let mut ks = self.ks.clone();
        ks.extend_from_slice(&other.ks);
        ks.sort_unstable();
        Params { ks }
    }

    /// Drop every entry equal to 2; `None` when nothing remains. Such entries
    /// are inert: a 2-clique in some color is a single edge, so forbidding it
    /// removes that color entirely.
    pub fn strip_twos(&self) -> Option<Params> {
        let ks: Vec<u32> = self.ks.iter().copied().filter(|&k| k != 2).collect();
        if ks.is_empty() {
            None
        } else {
            Some(Params { ks })
        }
    }
}

impl PartialOrd for Params {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Params {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.ks
            .len()
            .cmp(&other.ks.len())
            .then_with(|| self.ks.cmp(&other.ks))
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R(")?;
        for (i, k) in self.ks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Params {
    type Err = ParamsError;

    /// Parse a comma-separated list such as `"3,4,5"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let raw: Vec<u32> = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<u32>()
                    .map_err(|_| ParamsError::BadInt(tok.trim().to_string()))
            })
            .collect::<Result<_, _>>()?;
        Params::new(&raw)
    }
}

/// Free-function form of [`Params::new`].
pub fn canonicalize(raw: &[u32]) -> Result<Params, ParamsError> {
    Params::new(raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_ignores_permutation() {
        let a = Params::new(&[5, 3, 4]).unwrap();
        let b = Params::new(&[3, 4, 5]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.ks(), &[3, 4, 5]);
        assert_eq!(a.to_string(), "R(3,4,5)");
    }

    #[test]
    fn rejects_bad_entries() {
        assert_eq!(Params::new(&[]), Err(ParamsError::Empty));
        assert_eq!(Params::new(&[3, 1]), Err(ParamsError::TooSmall(1)));
        assert_eq!(Params::new(&[0]), Err(ParamsError::TooSmall(0)));
    }

    #[test]
    fn ordering_groups_by_color_count() {
        let two = Params::new(&[9, 9]).unwrap();
        let three = Params::new(&[3, 3, 3]).unwrap();
        assert!(two < three);
        assert!(Params::new(&[3, 4]).unwrap() < Params::new(&[3, 5]).unwrap());
    }

    #[test]
    fn diagonal_helpers() {
        let d = Params::diagonal(3, 4);
        assert_eq!(d.ks(), &[3, 3, 3, 3]);
        assert_eq!(d.diagonal_value(), Some(3));
        assert_eq!(Params::new(&[3, 4]).unwrap().diagonal_value(), None);
    }

    #[test]
    fn strip_twos_drops_inert_entries() {
        let p = Params::new(&[2, 3, 2, 5]).unwrap();
        assert_eq!(p.strip_twos().unwrap().ks(), &[3, 5]);
        assert_eq!(Params::new(&[2, 2]).unwrap().strip_twos(), None);
        assert_eq!(p.strip_twos(), p.strip_twos());
    }

    #[test]
    fn parse_round_trip() {
        let p: Params = " 4, 3,5 ".parse().unwrap();
        assert_eq!(p.ks(), &[3, 4, 5]);
        assert!("".parse::<Params>().is_err());
        assert!("3,x".parse::<Params>().is_err());
        assert!("3,,4".parse::<Params>().is_err());
    }
}
