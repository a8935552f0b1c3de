//! Ground representations: universes of at most 64 elements, subsets as
//! single machine words, and extensional families of subsets.
//!
//! Two subsets (or families) are compatible when their universes have the
//! same number of elements. Labels only affect how values are printed.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

pub const MAX_UNIVERSE: usize = 64;

#[inline]
pub(crate) fn mask(size: usize) -> u64 {
    if size >= 64 {
        u64::MAX
    } else {
        (1u64 << size) - 1
    }
}

fn check_same(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::UniverseMismatch { left, right })
    }
}

/// A finite ground set with named elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Universe {
    labels: Vec<String>,
}

impl Universe {
    /// Builds a universe of `size` elements. Without labels the elements are
    /// named by their decimal index.
    pub fn new(size: usize, labels: Option<Vec<String>>) -> Result<Self> {
        if !(1..=MAX_UNIVERSE).contains(&size) {
            return Err(Error::UniverseSize(size));
        }
        let labels = match labels {
            Some(labels) => {
                if labels.len() != size {
                    return Err(Error::UniverseSize(labels.len()));
                }
                let mut seen = HashSet::new();
                for l in &labels {
                    if !seen.insert(l.as_str()) {
                        return Err(Error::DuplicateLabel(l.clone()));
                    }
                }
                labels
            }
            None => (0..size).map(|i| i.to_string()).collect(),
        };
        Ok(Self { labels })
    }

    pub fn with_labels<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let labels = labels.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>();
        Self::new(labels.len(), Some(labels))
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> Option<&str> {
        self.labels.get(index).map(String::as_str)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn subset(&self, elems: &[usize]) -> Result<Subset> {
        Subset::from_indices(self.size(), elems)
    }

    pub fn empty(&self) -> Subset {
        Subset::empty(self.size())
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.size())
    }

    /// Canonicalizes `subsets` into a family over this universe.
    pub fn family<I: IntoIterator<Item = Subset>>(&self, subsets: I) -> Result<SetFamily> {
        SetFamily::new(self.size(), subsets)
    }

    pub fn format_subset(&self, s: &Subset) -> String {
        let names: Vec<&str> = s.elements().map(|i| self.labels[i].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn format_family(&self, f: &SetFamily) -> String {
        let parts: Vec<String> = f.members().map(|s| self.format_subset(&s)).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// A subset of a universe, one bit per element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    size: u8,
    bits: u64,
}

impl Subset {
    pub fn empty(size: usize) -> Self {
        debug_assert!(size <= MAX_UNIVERSE);
        Self { size: size as u8, bits: 0 }
    }

    pub fn full(size: usize) -> Self {
        Self { size: size as u8, bits: mask(size) }
    }

    pub fn from_bits(size: usize, bits: u64) -> Result<Self> {
        if !(1..=MAX_UNIVERSE).contains(&size) {
            return Err(Error::UniverseSize(size));
        }
        if bits & !mask(size) != 0 {
            let index = 63 - (bits & !mask(size)).leading_zeros() as usize;
            return Err(Error::ElementOutOfRange { index, size });
        }
        Ok(Self { size: size as u8, bits })
    }

    pub(crate) fn raw(size: usize, bits: u64) -> Self {
        debug_assert!(bits & !mask(size) == 0);
        Self { size: size as u8, bits }
    }

    /// Duplicate indices collapse.
    pub fn from_indices(size: usize, elems: &[usize]) -> Result<Self> {
        if !(1..=MAX_UNIVERSE).contains(&size) {
            return Err(Error::UniverseSize(size));
        }
        let mut bits = 0u64;
        for &index in elems {
            if index >= size {
                return Err(Error::ElementOutOfRange { index, size });
            }
            bits |= 1 << index;
        }
        Ok(Self { size: size as u8, bits })
    }

    pub fn universe_size(&self) -> usize {
        self.size as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.universe_size() && self.bits >> index & 1 == 1
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        let bits = self.bits;
        (0..64).filter(move |i| bits >> i & 1 == 1)
    }

    pub fn union(&self, other: &Subset) -> Result<Subset> {
        check_same(self.universe_size(), other.universe_size())?;
        Ok(Self::raw(self.universe_size(), self.bits | other.bits))
    }

    pub fn intersection(&self, other: &Subset) -> Result<Subset> {
        check_same(self.universe_size(), other.universe_size())?;
        Ok(Self::raw(self.universe_size(), self.bits & other.bits))
    }

    pub fn difference(&self, other: &Subset) -> Result<Subset> {
        check_same(self.universe_size(), other.universe_size())?;
        Ok(Self::raw(self.universe_size(), self.bits & !other.bits))
    }

    pub fn symmetric_difference(&self, other: &Subset) -> Result<Subset> {
        check_same(self.universe_size(), other.universe_size())?;
        Ok(Self::raw(self.universe_size(), self.bits ^ other.bits))
    }

    /// Complement relative to the universe.
    pub fn complement(&self) -> Subset {
        Self::raw(self.universe_size(), !self.bits & mask(self.universe_size()))
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.size == other.size && self.bits & !other.bits == 0
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.elements().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// How two families over the same universe compare under inclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyRelation {
    Equal,
    Subfamily,
    Superfamily,
    Incomparable,
}

impl fmt::Display for FamilyRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyRelation::Equal => "equal",
            FamilyRelation::Subfamily => "subfamily",
            FamilyRelation::Superfamily => "superfamily",
            FamilyRelation::Incomparable => "incomparable",
        })
    }
}

/// A duplicate-free family of subsets, kept sorted by the unsigned value of
/// each member's bit pattern. Equality is extensional.
///
/// The derived ordering compares member sequences lexicographically, which is
/// the canonical order used when enumerating families.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetFamily {
    size: u8,
    members: Vec<u64>,
}

impl SetFamily {
    pub fn new<I: IntoIterator<Item = Subset>>(universe_size: usize, subsets: I) -> Result<Self> {
        if !(1..=MAX_UNIVERSE).contains(&universe_size) {
            return Err(Error::UniverseSize(universe_size));
        }
        let mut members = Vec::new();
        for s in subsets {
            check_same(universe_size, s.universe_size())?;
            members.push(s.bits);
        }
        Ok(Self::from_bits(universe_size, members))
    }

    pub fn empty(universe_size: usize) -> Self {
        Self { size: universe_size as u8, members: Vec::new() }
    }

    /// Canonicalizes raw bit patterns. Callers guarantee every pattern fits
    /// the universe.
    pub(crate) fn from_bits(universe_size: usize, mut members: Vec<u64>) -> Self {
        debug_assert!(members.iter().all(|&m| m & !mask(universe_size) == 0));
        members.sort_unstable();
        members.dedup();
        Self { size: universe_size as u8, members }
    }

    pub(crate) fn from_sorted(universe_size: usize, members: Vec<u64>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self { size: universe_size as u8, members }
    }

    /// Checked counterpart of the crate-internal constructor, for callers
    /// holding raw bit patterns.
    pub fn from_raw_bits(universe_size: usize, members: Vec<u64>) -> Result<Self> {
        let subsets = members.into_iter().map(|b| Subset::from_bits(universe_size, b)).collect::<Result<Vec<_>>>()?;
        Self::new(universe_size, subsets)
    }

    pub fn universe_size(&self) -> usize {
        self.size as usize
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn bits(&self) -> &[u64] {
        &self.members
    }

    pub fn members(&self) -> impl Iterator<Item = Subset> + '_ {
        let size = self.universe_size();
        self.members.iter().map(move |&b| Subset::raw(size, b))
    }

    pub(crate) fn contains_bits(&self, bits: u64) -> bool {
        self.members.binary_search(&bits).is_ok()
    }

    pub fn contains(&self, s: &Subset) -> bool {
        s.universe_size() == self.universe_size() && self.contains_bits(s.bits)
    }

    pub(crate) fn check_universe(&self, size: usize) -> Result<()> {
        check_same(self.universe_size(), size)
    }

    pub(crate) fn require_non_empty(&self) -> Result<()> {
        if self.is_empty() {
            Err(Error::EmptyFamily)
        } else {
            Ok(())
        }
    }

    pub fn is_subfamily_of(&self, other: &SetFamily) -> bool {
        self.size == other.size && self.members.iter().all(|&m| other.contains_bits(m))
    }

    pub fn relation(&self, other: &SetFamily) -> Result<FamilyRelation> {
        other.check_universe(self.universe_size())?;
        let sub = self.is_subfamily_of(other);
        let sup = other.is_subfamily_of(self);
        Ok(match (sub, sup) {
            (true, true) => FamilyRelation::Equal,
            (true, false) => FamilyRelation::Subfamily,
            (false, true) => FamilyRelation::Superfamily,
            (false, false) => FamilyRelation::Incomparable,
        })
    }

    /// Set-theoretic union of the two member collections.
    pub fn union_family(&self, other: &SetFamily) -> Result<SetFamily> {
        other.check_universe(self.universe_size())?;
        let mut members = self.members.clone();
        members.extend_from_slice(&other.members);
        Ok(Self::from_bits(self.universe_size(), members))
    }

    pub fn insert(&self, s: Subset) -> Result<SetFamily> {
        check_same(self.universe_size(), s.universe_size())?;
        let mut members = self.members.clone();
        if let Err(pos) = members.binary_search(&s.bits) {
            members.insert(pos, s.bits);
        }
        Ok(Self::from_sorted(self.universe_size(), members))
    }

    /// The family of complements of all members.
    pub fn complement_family(&self) -> Result<SetFamily> {
        self.require_non_empty()?;
        let m = mask(self.universe_size());
        Ok(Self::from_bits(self.universe_size(), self.members.iter().map(|&b| !b & m).collect()))
    }

    /// Union of all members.
    pub fn union_all(&self) -> Subset {
        Subset::raw(self.universe_size(), self.members.iter().fold(0, |acc, &b| acc | b))
    }

    /// Members as sorted element-index lists.
    pub fn to_index_lists(&self) -> Vec<Vec<usize>> {
        self.members().map(|s| s.elements().collect()).collect()
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, s) in self.members().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

/// All subsets of a universe of `size` elements in canonical order.
pub fn all_subsets(size: usize) -> impl Iterator<Item = Subset> {
    assert!(size <= 20, "refusing to enumerate 2^{size} subsets");
    (0..1u64 << size).map(move |b| Subset::raw(size, b))
}

/// Every non-empty family of at most `max_members` distinct subsets of a
/// `size`-element universe, in canonical family order.
pub fn all_families(size: usize, max_members: usize) -> Vec<SetFamily> {
    assert!(size <= 6, "refusing to enumerate families over 2^{size} subsets");
    let n = 1u64 << size;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(max_members);
    fn rec(start: u64, n: u64, max: usize, size: usize, cur: &mut Vec<u64>, out: &mut Vec<SetFamily>) {
        for b in start..n {
            cur.push(b);
            out.push(SetFamily::from_sorted(size, cur.clone()));
            if cur.len() < max {
                rec(b + 1, n, max, size, cur, out);
            }
            cur.pop();
        }
    }
    rec(0, n, max_members, size, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x4() -> Universe {
        Universe::with_labels(&["a", "b", "c", "d"]).unwrap()
    }

    #[test]
    fn universe_construction() {
        assert_eq!(x4().size(), 4);
        let one = Universe::new(1, None).unwrap();
        assert_eq!(one.labels(), &["0".to_string()]);
        assert_eq!(Universe::new(65, None), Err(Error::UniverseSize(65)));
        assert_eq!(Universe::new(0, None), Err(Error::UniverseSize(0)));
        assert_eq!(Universe::with_labels(&["a", "b", "a"]), Err(Error::DuplicateLabel("a".into())));
        assert!(Universe::new(64, None).is_ok());
    }

    #[test]
    fn subset_construction() {
        let u = x4();
        let ab = u.subset(&[0, 1]).unwrap();
        assert_eq!(u.format_subset(&ab), "{a,b}");
        assert!(u.subset(&[]).unwrap().is_empty());
        assert_eq!(u.subset(&[1, 1, 2]).unwrap(), u.subset(&[1, 2]).unwrap());
        assert_eq!(u.subset(&[4]), Err(Error::ElementOutOfRange { index: 4, size: 4 }));
        assert!(Subset::from_bits(3, 0b1000).is_err());
        assert_eq!(Subset::full(64).len(), 64);
    }

    #[test]
    fn boolean_operations() {
        let u = x4();
        let ab = u.subset(&[0, 1]).unwrap();
        let bc = u.subset(&[1, 2]).unwrap();
        let cd = u.subset(&[2, 3]).unwrap();
        assert_eq!(ab.union(&cd).unwrap(), u.full());
        assert!(ab.difference(&ab).unwrap().is_empty());
        assert_eq!(ab.symmetric_difference(&bc).unwrap(), u.subset(&[0, 2]).unwrap());
        assert_eq!(ab.intersection(&bc).unwrap(), u.subset(&[1]).unwrap());
        assert_eq!(ab.complement(), cd);
        let other = Subset::empty(3);
        assert_eq!(ab.union(&other), Err(Error::UniverseMismatch { left: 4, right: 3 }));
    }

    #[test]
    fn family_canonicalization() {
        let u = x4();
        let a = u.subset(&[0, 1]).unwrap();
        let b = u.subset(&[1, 2]).unwrap();
        let d = u.subset(&[2, 3]).unwrap();
        let f = u.family([b, d, b]).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f, u.family([d, b]).unwrap());
        assert!(u.family([]).unwrap().is_empty());

        let a_or_d = a.union(&d).unwrap();
        let a_or_b_or_d = a.union(&b).unwrap().union(&d).unwrap();
        let collapsed = u.family([a_or_d, a_or_b_or_d]).unwrap();
        assert_eq!(collapsed.len(), 1);
        assert_eq!(u.format_family(&collapsed), "{{a,b,c,d}}");

        assert!(SetFamily::new(4, [Subset::empty(3)]).is_err());
    }

    #[test]
    fn relations() {
        let u = x4();
        let a = u.subset(&[0, 1]).unwrap();
        let b = u.subset(&[1, 2]).unwrap();
        let d = u.subset(&[2, 3]).unwrap();
        let fa = u.family([a]).unwrap();
        let fb = u.family([b, d]).unwrap();
        assert_eq!(fa.relation(&fb).unwrap(), FamilyRelation::Incomparable);
        assert_eq!(fb.relation(&fb).unwrap(), FamilyRelation::Equal);
        let fbd = u.family([b]).unwrap();
        assert_eq!(fbd.relation(&fb).unwrap(), FamilyRelation::Subfamily);
        assert_eq!(fb.relation(&fbd).unwrap(), FamilyRelation::Superfamily);
        assert!(fa.relation(&SetFamily::empty(3)).is_err());
    }

    #[test]
    fn complement_family() {
        let u = x4();
        let f = u.family([u.subset(&[0, 1]).unwrap()]).unwrap();
        assert_eq!(f.complement_family().unwrap(), u.family([u.subset(&[2, 3]).unwrap()]).unwrap());
        let g = u.family([u.empty(), u.full()]).unwrap();
        assert_eq!(g.complement_family().unwrap(), g);
        assert_eq!(SetFamily::empty(4).complement_family(), Err(Error::EmptyFamily));
    }

    #[test]
    fn complement_is_an_involution_exhaustively() {
        for n in 1..=4 {
            for f in all_families(n, 3) {
                assert_eq!(f.complement_family().unwrap().complement_family().unwrap(), f);
            }
        }
    }

    #[test]
    fn family_enumeration_counts() {
        assert_eq!(all_families(3, 3).len(), 92);
        assert_eq!(all_families(2, 1).len(), 4);
        let fams = all_families(3, 2);
        assert!(fams.windows(2).all(|w| w[0] < w[1]));
    }
}
