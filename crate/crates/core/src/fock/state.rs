use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::series::rat::display;
use crate::series::Rat;

/// Monomial `h^(c1)_{-n1} ... h^(ck)_{-nk} Ω` of a rank-`r` Heisenberg Fock space.
///
/// Factors are stored as `(color, n)` with zero-based colors, sorted, so equal
/// monomials compare equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockState {
    rank: u16,
    modes: Vec<(u16, u32)>,
}

impl FockState {
    pub fn vacuum(rank: usize) -> Self {
        FockState { rank: rank as u16, modes: Vec::new() }
    }

    /// Builds a monomial from unsorted `(color, n)` factors, `n >= 1`.
    pub fn new(rank: usize, mut modes: Vec<(u16, u32)>) -> Self {
        assert!(modes.iter().all(|&(c, n)| (c as usize) < rank && n >= 1), "bad mode in {modes:?}");
        modes.sort_unstable();
        FockState { rank: rank as u16, modes }
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }

    pub fn modes(&self) -> &[(u16, u32)] {
        &self.modes
    }

    pub fn weight(&self) -> u32 {
        self.modes.iter().map(|&(_, n)| n).sum()
    }

    pub fn num_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn is_vacuum(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn multiplicity(&self, color: u16, n: u32) -> usize {
        self.modes.iter().filter(|&&m| m == (color, n)).count()
    }

    /// Prepends `h^(c)_{-n}`.
    pub fn with_created(&self, color: u16, n: u32) -> Self {
        let mut modes = self.modes.clone();
        let at = modes.partition_point(|&m| m < (color, n));
        modes.insert(at, (color, n));
        FockState { rank: self.rank, modes }
    }

    /// Removes one `h^(c)_{-n}` factor if present.
    pub fn without(&self, color: u16, n: u32) -> Option<Self> {
        let at = self.modes.iter().position(|&m| m == (color, n))?;
        let mut modes = self.modes.clone();
        modes.remove(at);
        Some(FockState { rank: self.rank, modes })
    }

    /// Distinct factors with their multiplicities.
    pub fn grouped(&self) -> Vec<((u16, u32), usize)> {
        let mut out: Vec<((u16, u32), usize)> = Vec::new();
        for &m in &self.modes {
            match out.last_mut() {
                Some((last, k)) if *last == m => *k += 1,
                _ => out.push((m, 1)),
            }
        }
        out
    }

    /// Parses the textual form `"h[c,-n] h[c,-n] ..."` (one-based colors) or `"vac"`.
    pub fn parse(rank: usize, text: &str) -> Option<Self> {
        let text = text.trim();
        if text.is_empty() || text == "vac" {
            return Some(Self::vacuum(rank));
        }
        let mut modes = Vec::new();
        for tok in text.split_whitespace() {
            let inner = tok.strip_prefix("h[")?.strip_suffix(']')?;
            let (c, n) = inner.split_once(',')?;
            let c: usize = c.trim().parse().ok()?;
            let n: i64 = n.trim().parse().ok()?;
            if c == 0 || c > rank || n >= 0 {
                return None;
            }
            modes.push(((c - 1) as u16, (-n) as u32));
        }
        Some(Self::new(rank, modes))
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modes.is_empty() {
            return write!(f, "vac");
        }
        for (i, (c, n)) in self.modes.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "h[{},-{}]", c + 1, n)?;
        }
        Ok(())
    }
}

/// Finite linear combination of basis states with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinComb<S: Ord> {
    terms: BTreeMap<S, Rat>,
}

impl<S: Ord> Default for LinComb<S> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<S: Ord + Clone> LinComb<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(s: S) -> Self {
        Self::term(s, Rat::from_integer(1.into()))
    }

    pub fn term(s: S, c: Rat) -> Self {
        let mut v = Self::zero();
        v.add_term(s, c);
        v
    }

    pub fn add_term(&mut self, s: S, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(s) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, k: &Rat) {
        for (s, c) in &other.terms {
            self.add_term(s.clone(), c * k);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Rat::from_integer(1.into()));
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &Rat::from_integer((-1).into()));
        out
    }

    pub fn scale(&self, k: &Rat) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, k);
        out
    }

    pub fn coeff(&self, s: &S) -> Rat {
        self.terms.get(s).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&S, &Rat)> {
        self.terms.iter()
    }

    /// Applies a linear map given on basis states.
    pub fn map_linear<T: Ord + Clone, F>(&self, mut f: F) -> LinComb<T>
    where
        F: FnMut(&S) -> LinComb<T>,
    {
        let mut out = LinComb::zero();
        for (s, c) in &self.terms {
            out.add_scaled(&f(s), c);
        }
        out
    }

    /// Coordinates with respect to an ordered basis (states outside the basis are ignored).
    pub fn coords(&self, basis: &[S]) -> Vec<Rat> {
        basis.iter().map(|s| self.coeff(s)).collect()
    }

    pub fn from_coords(basis: &[S], coords: &[Rat]) -> Self {
        let mut out = Self::zero();
        for (s, c) in basis.iter().zip(coords) {
            out.add_term(s.clone(), c.clone());
        }
        out
    }
}

impl<S: Ord + Clone + fmt::Display> fmt::Display for LinComb<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}) {}", display(c), s)?;
        }
        Ok(())
    }
}

/// A homogeneous vector of the Heisenberg Fock space.
pub type GradedVector = LinComb<FockState>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_and_text() {
        let a = FockState::new(2, vec![(1, 1), (0, 2), (0, 1)]);
        let b = FockState::new(2, vec![(0, 1), (1, 1), (0, 2)]);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "h[1,-1] h[1,-2] h[2,-1]");
        assert_eq!(FockState::parse(2, &a.to_string()), Some(a.clone()));
        assert_eq!(FockState::parse(1, "vac"), Some(FockState::vacuum(1)));
        assert_eq!(FockState::parse(1, "h[2,-1]"), None);
        assert_eq!(a.weight(), 4);
    }

    #[test]
    fn lincomb_prunes_zeros() {
        let s = FockState::new(1, vec![(0, 1)]);
        let mut v = LinComb::basis(s.clone());
        v.add_term(s, Rat::from_integer((-1).into()));
        assert!(v.is_zero());
    }
}
