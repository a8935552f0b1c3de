//! Constructors on families: union closure S(f), generated ideal I(f),
//! join `f v g`, star `f * g`, and the principal-ideal forms of star.
//!
//! On a finite universe every ideal of sets is P(Y) for a single apex Y, so
//! ideals are stored by apex. Stars against an ideal are answered by closed
//! forms and only materialized on request:
//!
//! * `x ∈ f * P(Y)` iff some `A ∈ f` has `A \ Y ⊆ x ⊆ A ∪ Y`
//! * `x ∈ P(Y) * f` iff some `S ∈ f` has `S ⊆ x ⊆ S ∪ Y`

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::set::{SetFamily, Subset};

/// Largest `|f|·|g|²` for which [`star`] materializes eagerly.
pub const STAR_CEILING: u128 = 1_000_000;

/// Largest number of candidates a principal-ideal star may materialize.
pub const MATERIALIZE_CEILING: u128 = 10_000_000;

fn check_pair(f: &SetFamily, g: &SetFamily) -> Result<()> {
    f.require_non_empty()?;
    g.require_non_empty()?;
    g.check_universe(f.universe_size())
}

/// Iterates every submask of `m`, including `m` and `0`.
pub(crate) fn submasks(m: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(m);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & m) };
        Some(cur)
    })
}

/// The ideal P(Y) of all subsets of `apex`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrincipalIdeal {
    apex: Subset,
}

impl PrincipalIdeal {
    pub fn new(apex: Subset) -> Self {
        Self { apex }
    }

    pub fn apex(&self) -> Subset {
        self.apex
    }

    pub fn universe_size(&self) -> usize {
        self.apex.universe_size()
    }

    pub fn contains(&self, s: &Subset) -> bool {
        s.is_subset_of(&self.apex)
    }

    pub fn materialize(&self) -> Result<SetFamily> {
        let estimate = 1u128 << self.apex.len();
        if estimate > MATERIALIZE_CEILING {
            return Err(Error::TooLarge { estimate, ceiling: MATERIALIZE_CEILING });
        }
        Ok(SetFamily::from_bits(self.universe_size(), submasks(self.apex.bits()).collect()))
    }

    /// P(Y₁) v P(Y₂) = P(Y₁ ∪ Y₂).
    pub fn join(&self, other: &PrincipalIdeal) -> Result<PrincipalIdeal> {
        Ok(Self::new(self.apex.union(&other.apex)?))
    }
}

impl fmt::Display for PrincipalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({})", self.apex)
    }
}

pub fn join_ideals(i1: &PrincipalIdeal, i2: &PrincipalIdeal) -> Result<PrincipalIdeal> {
    i1.join(i2)
}

/// `{A ∪ B : A ∈ f, B ∈ g}`.
pub fn join(f: &SetFamily, g: &SetFamily) -> Result<SetFamily> {
    check_pair(f, g)?;
    let mut out = Vec::with_capacity(f.len() * g.len());
    for &a in f.bits() {
        for &b in g.bits() {
            out.push(a | b);
        }
    }
    Ok(SetFamily::from_bits(f.universe_size(), out))
}

/// `{(A \ B₁) ∪ B₂ : A ∈ f, B₁, B₂ ∈ g}`, materialized when
/// `|f|·|g|² ≤ STAR_CEILING`. Use [`star_contains`] beyond that.
pub fn star(f: &SetFamily, g: &SetFamily) -> Result<SetFamily> {
    check_pair(f, g)?;
    let estimate = f.len() as u128 * (g.len() as u128).pow(2);
    if estimate > STAR_CEILING {
        return Err(Error::TooLarge { estimate, ceiling: STAR_CEILING });
    }
    let mut seen = HashSet::new();
    for &a in f.bits() {
        for &b1 in g.bits() {
            let kept = a & !b1;
            for &b2 in g.bits() {
                seen.insert(kept | b2);
            }
        }
    }
    Ok(SetFamily::from_bits(f.universe_size(), seen.into_iter().collect()))
}

/// Membership in `f * g` without materializing it.
pub fn star_contains(f: &SetFamily, g: &SetFamily, x: &Subset) -> Result<bool> {
    check_pair(f, g)?;
    f.check_universe(x.universe_size())?;
    let x = x.bits();
    // (A \ B₁) ∪ B₂ = x  iff  B₂ ⊆ x, A \ B₁ ⊆ x, and x \ B₂ ⊆ A \ B₁.
    Ok(g.bits().iter().filter(|&&b2| b2 & !x == 0).any(|&b2| {
        let rest = x & !b2;
        f.bits().iter().any(|&a| {
            g.bits().iter().any(|&b1| {
                let kept = a & !b1;
                kept & !x == 0 && rest & !kept == 0
            })
        })
    }))
}

/// The smallest union-closed family containing `f`.
pub fn semigroup_closure(f: &SetFamily) -> Result<SetFamily> {
    f.require_non_empty()?;
    Ok(SetFamily::from_bits(f.universe_size(), closure_bits(f.bits())))
}

/// Worklist fixed point over pairwise unions: every element is combined
/// with everything discovered before it, so each pair is visited once.
pub(crate) fn closure_bits(generators: &[u64]) -> Vec<u64> {
    let mut seen: HashSet<u64> = generators.iter().copied().collect();
    let mut list: Vec<u64> = generators.to_vec();
    list.sort_unstable();
    list.dedup();
    let mut i = 0;
    while i < list.len() {
        let x = list[i];
        for j in 0..i {
            let u = x | list[j];
            if seen.insert(u) {
                list.push(u);
            }
        }
        i += 1;
    }
    list
}

/// Decides `x ∈ S(f)`: the members of `f` inside `x` must exist and cover it.
pub fn member_of_closure(x: &Subset, f: &SetFamily) -> Result<bool> {
    f.require_non_empty()?;
    f.check_universe(x.universe_size())?;
    let x = x.bits();
    let mut any = false;
    let mut covered = 0u64;
    for &a in f.bits() {
        if a & !x == 0 {
            any = true;
            covered |= a;
        }
    }
    Ok(any && covered == x)
}

/// I(f) = {B : B ⊆ A for some A ∈ S(f)}, which is P(∪f).
pub fn ideal_from_family(f: &SetFamily) -> Result<PrincipalIdeal> {
    f.require_non_empty()?;
    Ok(PrincipalIdeal::new(f.union_all()))
}

pub(crate) fn is_union_closed_bits(members: &[u64]) -> bool {
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            if members.binary_search(&(a | b)).is_err() {
                return false;
            }
        }
    }
    true
}

/// Pairwise union closure, which for finite families is finite-union closure.
pub fn is_semigroup(f: &SetFamily) -> Result<bool> {
    f.require_non_empty()?;
    Ok(is_union_closed_bits(f.bits()))
}

pub fn is_ideal(f: &SetFamily) -> Result<bool> {
    if !is_semigroup(f)? {
        return Ok(false);
    }
    // Removing one element at a time reaches every subset.
    for &m in f.bits() {
        let mut rest = m;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            if !f.contains_bits(m & !bit) {
                return Ok(false);
            }
            rest &= !bit;
        }
    }
    Ok(true)
}

/// `f * P(Y)` as a decider with on-demand materialization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarIdeal {
    family: SetFamily,
    apex: u64,
}

impl StarIdeal {
    pub fn contains(&self, x: &Subset) -> bool {
        if x.universe_size() != self.family.universe_size() {
            return false;
        }
        let (x, y) = (x.bits(), self.apex);
        self.family.bits().iter().any(|&a| (a & !y) & !x == 0 && x & !(a | y) == 0)
    }

    pub fn materialize(&self) -> Result<SetFamily> {
        let estimate = self.family.len() as u128 * (1u128 << self.apex.count_ones());
        if estimate > MATERIALIZE_CEILING {
            return Err(Error::TooLarge { estimate, ceiling: MATERIALIZE_CEILING });
        }
        let mut out = Vec::new();
        for &a in self.family.bits() {
            let base = a & !self.apex;
            out.extend(submasks(self.apex).map(|m| base | m));
        }
        Ok(SetFamily::from_bits(self.family.universe_size(), out))
    }
}

pub fn star_ideal(f: &SetFamily, i: &PrincipalIdeal) -> Result<StarIdeal> {
    f.require_non_empty()?;
    f.check_universe(i.universe_size())?;
    Ok(StarIdeal { family: f.clone(), apex: i.apex().bits() })
}

/// `P(Y) * f` as a decider with on-demand materialization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealStar {
    family: SetFamily,
    apex: u64,
}

impl IdealStar {
    pub fn contains(&self, x: &Subset) -> bool {
        if x.universe_size() != self.family.universe_size() {
            return false;
        }
        let (x, y) = (x.bits(), self.apex);
        self.family.bits().iter().any(|&s| s & !x == 0 && x & !(s | y) == 0)
    }

    pub fn materialize(&self) -> Result<SetFamily> {
        let free_max = self.family.bits().iter().map(|&s| (self.apex & !s).count_ones()).max().unwrap_or(0);
        let estimate = self.family.len() as u128 * (1u128 << free_max);
        if estimate > MATERIALIZE_CEILING {
            return Err(Error::TooLarge { estimate, ceiling: MATERIALIZE_CEILING });
        }
        let mut out = Vec::new();
        for &s in self.family.bits() {
            out.extend(submasks(self.apex & !s).map(|m| s | m));
        }
        Ok(SetFamily::from_bits(self.family.universe_size(), out))
    }
}

pub fn ideal_star(i: &PrincipalIdeal, f: &SetFamily) -> Result<IdealStar> {
    f.require_non_empty()?;
    f.check_universe(i.universe_size())?;
    Ok(IdealStar { family: f.clone(), apex: i.apex().bits() })
}

/// `f ∪ {y}`.
pub fn adjoin(f: &SetFamily, y: &Subset) -> Result<SetFamily> {
    f.insert(*y)
}

/// `S(f) ∪ {y}`.
pub fn s_adjoin(f: &SetFamily, y: &Subset) -> Result<SetFamily> {
    semigroup_closure(f)?.insert(*y)
}

/// Generators together with a lazily computed closure. The cache is filled
/// at most once; racing initializations produce the same canonical value.
#[derive(Debug)]
pub struct ClosureHandle {
    generators: SetFamily,
    materialized: OnceLock<SetFamily>,
}

impl ClosureHandle {
    pub fn new(generators: SetFamily) -> Result<Self> {
        generators.require_non_empty()?;
        Ok(Self { generators, materialized: OnceLock::new() })
    }

    pub fn generators(&self) -> &SetFamily {
        &self.generators
    }

    pub fn contains(&self, x: &Subset) -> Result<bool> {
        match self.materialized.get() {
            Some(m) => Ok(m.contains(x)),
            None => member_of_closure(x, &self.generators),
        }
    }

    pub fn is_materialized(&self) -> bool {
        self.materialized.get().is_some()
    }

    pub fn materialize(&self) -> &SetFamily {
        self.materialized
            .get_or_init(|| SetFamily::from_bits(self.generators.universe_size(), closure_bits(self.generators.bits())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::{all_families, all_subsets, Universe};

    fn fam(n: usize, sets: &[&[usize]]) -> SetFamily {
        SetFamily::new(n, sets.iter().map(|s| Subset::from_indices(n, s).unwrap())).unwrap()
    }

    fn ideal(n: usize, apex: &[usize]) -> PrincipalIdeal {
        PrincipalIdeal::new(Subset::from_indices(n, apex).unwrap())
    }

    #[test]
    fn join_examples() {
        let u = Universe::with_labels(&["a", "b", "c", "d"]).unwrap();
        let a = fam(4, &[&[0, 1]]);
        let b = fam(4, &[&[1, 2], &[2, 3]]);
        let j = join(&a, &b).unwrap();
        assert_eq!(u.format_family(&j), "{{a,b,c},{a,b,c,d}}");
        assert_eq!(join(&b, &fam(4, &[&[]])).unwrap(), b);
        assert_eq!(join(&a, &SetFamily::empty(4)), Err(Error::EmptyFamily));
        assert!(matches!(join(&a, &fam(3, &[&[0]])), Err(Error::UniverseMismatch { .. })));
    }

    #[test]
    fn star_examples() {
        let s1 = fam(2, &[&[0], &[0, 1]]);
        let i = fam(2, &[&[], &[0]]);
        assert_eq!(star(&s1, &i).unwrap(), fam(2, &[&[], &[0], &[1], &[0, 1]]));
        let x = fam(2, &[&[0, 1]]);
        assert_eq!(star(&x, &i).unwrap(), fam(2, &[&[1], &[0, 1]]));
        assert_eq!(star(&s1, &fam(2, &[&[]])).unwrap(), s1);
    }

    #[test]
    fn star_ceiling_and_decider() {
        let big = SetFamily::from_bits(12, (0..2000).collect());
        let f = fam(12, &[&[0]]);
        assert!(matches!(star(&f, &big), Err(Error::TooLarge { .. })));
        for n in 1..=3 {
            for f in all_families(n, 2) {
                for g in all_families(n, 2) {
                    let m = star(&f, &g).unwrap();
                    for x in all_subsets(n) {
                        assert_eq!(star_contains(&f, &g, &x).unwrap(), m.contains(&x));
                    }
                }
            }
        }
    }

    #[test]
    fn closure_examples() {
        let b = fam(4, &[&[1, 2], &[2, 3]]);
        assert_eq!(semigroup_closure(&b).unwrap(), fam(4, &[&[1, 2], &[2, 3], &[1, 2, 3]]));
        let singletons = fam(3, &[&[0], &[1], &[2]]);
        let c = semigroup_closure(&singletons).unwrap();
        assert_eq!(c.len(), 7);
        assert!(!c.contains(&Subset::empty(3)));
        let closed = fam(3, &[&[0], &[0, 1]]);
        assert_eq!(semigroup_closure(&closed).unwrap(), closed);
        assert_eq!(semigroup_closure(&SetFamily::empty(3)), Err(Error::EmptyFamily));
    }

    #[test]
    fn closure_membership_examples() {
        let b = fam(4, &[&[1, 2], &[2, 3]]);
        let bd = Subset::from_indices(4, &[1, 2, 3]).unwrap();
        assert!(member_of_closure(&bd, &b).unwrap());
        let f = fam(3, &[&[0], &[1]]);
        assert!(!member_of_closure(&Subset::full(3), &f).unwrap());
    }

    #[test]
    fn ideal_examples() {
        assert_eq!(ideal_from_family(&fam(2, &[&[0], &[1]])).unwrap(), ideal(2, &[0, 1]));
        assert_eq!(ideal_from_family(&fam(4, &[&[1, 2], &[2, 3]])).unwrap(), ideal(4, &[1, 2, 3]));
        assert!(is_semigroup(&fam(4, &[&[1, 2], &[2, 3], &[1, 2, 3]])).unwrap());
        assert!(is_semigroup(&fam(4, &[&[0, 1]])).unwrap());
        assert!(!is_semigroup(&fam(2, &[&[0], &[1]])).unwrap());
        assert!(is_ideal(&fam(2, &[&[], &[0]])).unwrap());
        assert!(!is_ideal(&fam(2, &[&[0, 1]])).unwrap());
        assert!(is_ideal(&fam(2, &[&[]])).unwrap());
        assert_eq!(is_ideal(&SetFamily::empty(2)), Err(Error::EmptyFamily));
    }

    #[test]
    fn ideal_star_examples() {
        let s1 = fam(2, &[&[0], &[0, 1]]);
        let si = star_ideal(&s1, &ideal(2, &[0])).unwrap();
        assert!(all_subsets(2).all(|x| si.contains(&x)));
        assert_eq!(si.materialize().unwrap().len(), 4);

        let s2 = fam(2, &[&[1], &[0, 1]]);
        let is = ideal_star(&ideal(2, &[0]), &s2).unwrap();
        assert!(is.contains(&Subset::from_indices(2, &[1]).unwrap()));

        let trivial = ideal(3, &[]);
        let f = fam(3, &[&[0], &[1, 2]]);
        for x in all_subsets(3) {
            assert_eq!(star_ideal(&f, &trivial).unwrap().contains(&x), f.contains(&x));
            assert_eq!(ideal_star(&trivial, &f).unwrap().contains(&x), f.contains(&x));
        }
    }

    #[test]
    fn adjoin_examples() {
        let a = fam(4, &[&[0, 1]]);
        assert_eq!(adjoin(&a, &Subset::from_indices(4, &[0, 1]).unwrap()).unwrap(), a);
        for n in 1..=4 {
            for f in all_families(n, 3) {
                assert!(is_semigroup(&s_adjoin(&f, &Subset::empty(n)).unwrap()).unwrap());
                assert!(is_semigroup(&s_adjoin(&f, &Subset::full(n)).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn ideal_join() {
        let j = join_ideals(&ideal(2, &[0]), &ideal(2, &[1])).unwrap();
        assert_eq!(j, ideal(2, &[0, 1]));
        let brute = join(&ideal(2, &[0]).materialize().unwrap(), &ideal(2, &[1]).materialize().unwrap()).unwrap();
        assert_eq!(j.materialize().unwrap(), brute);
        let y = ideal(3, &[0, 2]);
        assert_eq!(join_ideals(&ideal(3, &[]), &y).unwrap(), y);
        assert_eq!(join_ideals(&y, &y).unwrap(), y);
    }

    #[test]
    fn closure_handle_caches_once() {
        let h = ClosureHandle::new(fam(3, &[&[0], &[1]])).unwrap();
        let x = Subset::from_indices(3, &[0, 1]).unwrap();
        assert!(h.contains(&x).unwrap());
        assert!(!h.is_materialized());
        let m = h.materialize().clone();
        assert!(h.is_materialized());
        assert_eq!(&m, h.materialize());
        assert!(is_semigroup(&m).unwrap());
        assert!(ClosureHandle::new(SetFamily::empty(3)).is_err());
    }

    #[test]
    fn submask_enumeration() {
        let mut v: Vec<u64> = submasks(0b101).collect();
        v.sort();
        assert_eq!(v, vec![0, 1, 4, 5]);
        assert_eq!(submasks(0).collect::<Vec<_>>(), vec![0]);
    }
}
