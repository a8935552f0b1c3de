//! Finite abelian groups `Z_{n1} x ... x Z_{nk}` as stand-ins for (R, +):
//! subgroups, coset partitions, transversals (selectors meeting every coset
//! exactly once), translation actions on subsets and families, and a
//! weighted counting measure with exact rational weights.
//!
//! Elements are encoded in mixed radix with the first component most
//! significant, so `(a, b)` in `Z_m x Z_n` is the index `a * n + b`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::PrincipalIdeal;
use crate::error::{Error, Result};
use crate::set::{all_subsets, SetFamily, Subset, Universe, MAX_UNIVERSE};

/// Default ceiling on enumerated transversals.
pub const TRANSVERSAL_CEILING: u128 = 1_000_000;

#[derive(Debug, PartialEq, Eq)]
struct Table {
    moduli: Vec<usize>,
    order: usize,
    add: Vec<u8>,
    neg: Vec<u8>,
}

/// A product of cyclic groups of total order at most 64.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupModel {
    table: Arc<Table>,
}

impl GroupModel {
    pub fn new(moduli: &[usize]) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::Group("at least one cyclic factor is required".into()));
        }
        if moduli.contains(&0) {
            return Err(Error::Group("moduli must be positive".into()));
        }
        let order = moduli.iter().try_fold(1usize, |acc, &m| acc.checked_mul(m));
        let order = match order {
            Some(n) if n <= MAX_UNIVERSE => n,
            _ => return Err(Error::Group(format!("group order must be at most {MAX_UNIVERSE}"))),
        };
        let digits = |mut x: usize| {
            let mut d = vec![0; moduli.len()];
            for (slot, &m) in d.iter_mut().zip(moduli).rev() {
                *slot = x % m;
                x /= m;
            }
            d
        };
        let encode = |d: &[usize]| d.iter().zip(moduli).fold(0, |acc, (&x, &m)| acc * m + x);
        let mut add = vec![0u8; order * order];
        let mut neg = vec![0u8; order];
        for a in 0..order {
            let da = digits(a);
            let inv: Vec<usize> = da.iter().zip(moduli).map(|(&x, &m)| (m - x) % m).collect();
            neg[a] = encode(&inv) as u8;
            for b in 0..order {
                let sum: Vec<usize> = da.iter().zip(digits(b)).zip(moduli).map(|((&x, y), &m)| (x + y) % m).collect();
                add[a * order + b] = encode(&sum) as u8;
            }
        }
        Ok(Self { table: Arc::new(Table { moduli: moduli.to_vec(), order, add, neg }) })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new(&[n])
    }

    pub fn moduli(&self) -> &[usize] {
        &self.table.moduli
    }

    pub fn order(&self) -> usize {
        self.table.order
    }

    pub fn is_cyclic(&self) -> bool {
        self.table.moduli.len() == 1
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.table.add[a * self.order() + b] as usize
    }

    pub fn neg(&self, a: usize) -> usize {
        self.table.neg[a] as usize
    }

    fn check_element(&self, a: usize) -> Result<()> {
        if a < self.order() {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { index: a, size: self.order() })
        }
    }

    pub fn components(&self, a: usize) -> Vec<usize> {
        let mut d = vec![0; self.moduli().len()];
        let mut x = a;
        for (slot, &m) in d.iter_mut().zip(self.moduli()).rev() {
            *slot = x % m;
            x /= m;
        }
        d
    }

    pub fn encode(&self, components: &[usize]) -> Result<usize> {
        if components.len() != self.moduli().len() {
            return Err(Error::Group(format!("expected {} components, got {}", self.moduli().len(), components.len())));
        }
        let mut acc = 0;
        for (&x, &m) in components.iter().zip(self.moduli()) {
            if x >= m {
                return Err(Error::Group(format!("component {x} out of range for Z{m}")));
            }
            acc = acc * m + x;
        }
        Ok(acc)
    }

    pub fn label(&self, a: usize) -> String {
        if self.is_cyclic() {
            a.to_string()
        } else {
            let parts: Vec<String> = self.components(a).iter().map(|c| c.to_string()).collect();
            format!("({})", parts.join(","))
        }
    }

    /// The group's elements as a universe, labelled by integers for cyclic
    /// groups and by tuples otherwise.
    pub fn universe(&self) -> Universe {
        let labels = (0..self.order()).map(|a| self.label(a)).collect();
        Universe::new(self.order(), Some(labels)).expect("order is within bounds")
    }

    fn subset_of(&self, bits: u64) -> Subset {
        Subset::raw(self.order(), bits)
    }

    fn check_subset(&self, a: &Subset) -> Result<()> {
        if a.universe_size() == self.order() {
            Ok(())
        } else {
            Err(Error::UniverseMismatch { left: self.order(), right: a.universe_size() })
        }
    }

    fn translate_bits(&self, bits: u64, t: usize) -> u64 {
        let mut out = 0u64;
        let mut rest = bits;
        while rest != 0 {
            let e = rest.trailing_zeros() as usize;
            out |= 1 << self.add(e, t);
            rest &= rest - 1;
        }
        out
    }

    /// `<h ∪ {e}>` for a subgroup `h`: the union of `h + k·e` over `k ≥ 0`.
    fn extend_bits(&self, h: u64, e: usize) -> u64 {
        let mut out = h;
        let mut t = e;
        while h >> t & 1 == 0 {
            out |= self.translate_bits(h, t);
            t = self.add(t, e);
        }
        out
    }

    /// Every subgroup, sorted by the canonical subset order.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut found = vec![1u64];
        let mut i = 0;
        while i < found.len() {
            let h = found[i];
            for e in 0..self.order() {
                if h >> e & 1 == 0 {
                    let k = self.extend_bits(h, e);
                    if !found.contains(&k) {
                        found.push(k);
                    }
                }
            }
            i += 1;
        }
        found.sort_unstable();
        found.into_iter().map(|bits| Subgroup { group: self.clone(), elements: self.subset_of(bits) }).collect()
    }
}

impl fmt::Display for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.moduli().iter().map(|m| format!("Z{m}")).collect();
        f.write_str(&parts.join("x"))
    }
}

impl FromStr for GroupModel {
    type Err = Error;

    /// Accepts `Z6`, `Z2xZ2`, `Z2×Z4` and the like.
    fn from_str(s: &str) -> Result<Self> {
        let moduli = s
            .split(['x', '×'])
            .map(|part| {
                let part = part.trim();
                part.strip_prefix('Z')
                    .and_then(|n| n.parse::<usize>().ok())
                    .ok_or_else(|| Error::Group(format!("cannot parse `{part}` as Z<n>")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(&moduli)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    group: GroupModel,
    elements: Subset,
}

impl Subgroup {
    /// Validates that `elements` contains 0 and is closed under addition and
    /// negation.
    pub fn from_elements(group: &GroupModel, elements: Subset) -> Result<Self> {
        group.check_subset(&elements)?;
        let members: Vec<usize> = elements.elements().collect();
        let closed = elements.contains(0)
            && members.iter().all(|&a| {
                elements.contains(group.neg(a)) && members.iter().all(|&b| elements.contains(group.add(a, b)))
            });
        if !closed {
            return Err(Error::Group(format!("{elements} is not a subgroup of {group}")));
        }
        Ok(Self { group: group.clone(), elements })
    }

    pub fn group(&self) -> &GroupModel {
        &self.group
    }

    pub fn elements(&self) -> Subset {
        self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn index(&self) -> usize {
        self.group.order() / self.order()
    }
}

/// The smallest subgroup containing `gens`.
pub fn subgroup_generated(g: &GroupModel, gens: &[usize]) -> Result<Subgroup> {
    let mut h = 1u64;
    for &e in gens {
        g.check_element(e)?;
        h = g.extend_bits(h, e);
    }
    Ok(Subgroup { group: g.clone(), elements: g.subset_of(h) })
}

/// The cosets of a subgroup, ordered by least element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetPartition {
    subgroup: Subgroup,
    cosets: Arc<[Subset]>,
}

impl CosetPartition {
    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn cosets(&self) -> &[Subset] {
        &self.cosets
    }

    pub fn group(&self) -> &GroupModel {
        &self.subgroup.group
    }

    pub fn transversal_count(&self) -> u128 {
        (self.subgroup.order() as u128).saturating_pow(self.cosets.len() as u32)
    }
}

pub fn cosets_of(q: &Subgroup) -> CosetPartition {
    let g = &q.group;
    let full = crate::set::mask(g.order());
    let mut covered = 0u64;
    let mut cosets = Vec::with_capacity(q.index());
    while covered != full {
        let x = (!covered & full).trailing_zeros() as usize;
        let c = g.translate_bits(q.elements.bits(), x);
        covered |= c;
        cosets.push(g.subset_of(c));
    }
    CosetPartition { subgroup: q.clone(), cosets: cosets.into() }
}

/// A pick set meeting every coset of the partition exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transversal {
    partition: CosetPartition,
    picks: Subset,
}

impl Transversal {
    pub fn new(partition: &CosetPartition, picks: Subset) -> Result<Self> {
        if !is_transversal(&picks, partition)? {
            return Err(Error::Group(format!("{picks} is not a transversal")));
        }
        Ok(Self { partition: partition.clone(), picks })
    }

    pub fn picks(&self) -> Subset {
        self.picks
    }

    pub fn partition(&self) -> &CosetPartition {
        &self.partition
    }
}

pub fn is_transversal(v: &Subset, p: &CosetPartition) -> Result<bool> {
    p.group().check_subset(v)?;
    Ok(p.cosets.iter().all(|c| (c.bits() & v.bits()).count_ones() == 1))
}

/// Every transversal of `p` in canonical order.
pub fn enumerate_transversals(p: &CosetPartition) -> Result<std::vec::IntoIter<Transversal>> {
    enumerate_transversals_with(p, TRANSVERSAL_CEILING)
}

pub fn enumerate_transversals_with(p: &CosetPartition, ceiling: u128) -> Result<std::vec::IntoIter<Transversal>> {
    let count = p.transversal_count();
    if count > ceiling {
        return Err(Error::TooLarge { estimate: count, ceiling });
    }
    let choices: Vec<Vec<u64>> = p.cosets.iter().map(|c| c.elements().map(|e| 1u64 << e).collect()).collect();
    let mut picks = vec![0u64];
    for options in &choices {
        picks = picks.iter().flat_map(|&acc| options.iter().map(move |&o| acc | o)).collect();
    }
    picks.sort_unstable();
    let order = p.group().order();
    Ok(picks
        .into_iter()
        .map(|b| Transversal { partition: p.clone(), picks: Subset::raw(order, b) })
        .collect::<Vec<_>>()
        .into_iter())
}

/// One uniformly random transversal.
pub fn sample_transversal<R: Rng + ?Sized>(p: &CosetPartition, rng: &mut R) -> Transversal {
    let mut bits = 0u64;
    for c in p.cosets.iter() {
        let elems: Vec<usize> = c.elements().collect();
        bits |= 1 << elems[rng.gen_range(0..elems.len())];
    }
    Transversal { partition: p.clone(), picks: Subset::raw(p.group().order(), bits) }
}

/// `a + t = {x + t : x ∈ a}`.
pub fn translate(g: &GroupModel, a: &Subset, t: usize) -> Result<Subset> {
    g.check_subset(a)?;
    g.check_element(t)?;
    Ok(g.subset_of(g.translate_bits(a.bits(), t)))
}

/// True iff the translates `v + q` for `q ∈ Q` are pairwise disjoint and
/// cover the group.
pub fn vitali_partition_check(p: &CosetPartition, v: &Subset) -> Result<bool> {
    let g = p.group();
    g.check_subset(v)?;
    let mut covered = 0u64;
    for q in p.subgroup.elements.elements() {
        let t = g.translate_bits(v.bits(), q);
        if covered & t != 0 {
            return Ok(false);
        }
        covered |= t;
    }
    Ok(covered == crate::set::mask(g.order()))
}

/// True iff `v + t` is again a transversal of the same partition.
pub fn translate_transversal_check(v: &Transversal, t: usize) -> Result<bool> {
    let moved = translate(v.partition.group(), &v.picks, t)?;
    is_transversal(&moved, &v.partition)
}

/// The family of all cosets of `b`.
pub fn coset_family(b: &Subgroup) -> SetFamily {
    SetFamily::new(b.group.order(), cosets_of(b).cosets.iter().copied()).expect("same universe")
}

/// Every union of a proper non-empty set of cosets is a proper subset of the
/// group and misses each omitted coset entirely.
pub fn proper_coset_union_check(b: &Subgroup) -> Result<bool> {
    let p = cosets_of(b);
    let k = p.cosets.len();
    if k < 2 {
        return Err(Error::Group("the subgroup needs at least two cosets".into()));
    }
    if k > 24 {
        return Err(Error::TooLarge { estimate: 1u128 << k, ceiling: 1 << 24 });
    }
    let full = crate::set::mask(b.group.order());
    for pick in 1u64..(1 << k) - 1 {
        let mut union = 0u64;
        for (i, c) in p.cosets.iter().enumerate() {
            if pick >> i & 1 == 1 {
                union |= c.bits();
            }
        }
        if union == full {
            return Ok(false);
        }
        for (i, c) in p.cosets.iter().enumerate() {
            if pick >> i & 1 == 0 && c.bits() & union != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The canonically least pair `(G1, G2)`, `G1 < G2`, of non-trivial
/// subgroups with `G1 ∩ G2 = {0}`.
pub fn trivial_intersection_pair(g: &GroupModel) -> Option<(Subgroup, Subgroup)> {
    let subs: Vec<Subgroup> = g.all_subgroups().into_iter().filter(|s| !s.is_trivial()).collect();
    for (i, a) in subs.iter().enumerate() {
        for b in &subs[i + 1..] {
            if a.elements.bits() & b.elements.bits() == 1 {
                return Some((a.clone(), b.clone()));
            }
        }
    }
    None
}

/// True iff every translate of every member is again a member.
pub fn translation_invariance_check(f: &SetFamily, g: &GroupModel) -> Result<bool> {
    f.check_universe(g.order())?;
    Ok(f.bits().iter().all(|&a| (0..g.order()).all(|t| f.contains_bits(g.translate_bits(a, t)))))
}

/// A counting measure with non-negative rational weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedMeasure {
    weights: Vec<Rational64>,
}

impl WeightedMeasure {
    pub fn new(weights: Vec<Rational64>) -> Result<Self> {
        if !(1..=MAX_UNIVERSE).contains(&weights.len()) {
            return Err(Error::UniverseSize(weights.len()));
        }
        if weights.iter().any(|w| *w < Rational64::zero()) {
            return Err(Error::Measure("weights must be non-negative".into()));
        }
        Ok(Self { weights })
    }

    pub fn uniform(size: usize) -> Result<Self> {
        Self::new(vec![Rational64::from_integer(1); size])
    }

    pub fn universe_size(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rational64] {
        &self.weights
    }

    pub fn measure(&self, a: &Subset) -> Result<Rational64> {
        if a.universe_size() != self.universe_size() {
            return Err(Error::UniverseMismatch { left: self.universe_size(), right: a.universe_size() });
        }
        Ok(a.elements().map(|i| self.weights[i]).sum())
    }

    /// P(Z) where Z is the zero-weight support.
    pub fn null_ideal(&self) -> PrincipalIdeal {
        let bits = self.weights.iter().enumerate().filter(|(_, w)| w.is_zero()).fold(0u64, |acc, (i, _)| acc | 1 << i);
        PrincipalIdeal::new(Subset::raw(self.universe_size(), bits))
    }

    pub fn is_translation_invariant(&self, g: &GroupModel) -> Result<bool> {
        if g.order() != self.universe_size() {
            return Err(Error::UniverseMismatch { left: g.order(), right: self.universe_size() });
        }
        if g.order() > 16 {
            return Err(Error::TooLarge { estimate: 1 << g.order(), ceiling: 1 << 16 });
        }
        for a in all_subsets(g.order()) {
            let mu = self.measure(&a)?;
            for t in 0..g.order() {
                if self.measure(&translate(g, &a, t)?)? != mu {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Outcome of the exhaustive measure checks over all pairs of subsets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureCheck {
    pub pairs: u64,
    pub additive: bool,
    pub null_ideal_exact: bool,
    pub null_difference_equal_measure: bool,
}

impl MeasureCheck {
    pub fn passed(&self) -> bool {
        self.additive && self.null_ideal_exact && self.null_difference_equal_measure
    }
}

/// Finite additivity, `μ(A) = 0 ⇔ A ⊆ apex`, and `μ(A Δ B) = 0 ⇒ μ(A) = μ(B)`
/// over every pair of subsets.
pub fn measure_check(m: &WeightedMeasure) -> Result<MeasureCheck> {
    let n = m.universe_size();
    if n > 10 {
        return Err(Error::TooLarge { estimate: 1u128 << (2 * n), ceiling: 1 << 20 });
    }
    let null = m.null_ideal();
    let subsets: Vec<Subset> = all_subsets(n).collect();
    let mu: Vec<Rational64> = subsets.iter().map(|a| m.measure(a)).collect::<Result<_>>()?;
    let mut out =
        MeasureCheck { pairs: 0, additive: true, null_ideal_exact: true, null_difference_equal_measure: true };
    for (i, a) in subsets.iter().enumerate() {
        if mu[i].is_zero() != null.contains(a) {
            out.null_ideal_exact = false;
        }
        for (j, b) in subsets.iter().enumerate() {
            out.pairs += 1;
            let union = a.union(b)?.bits() as usize;
            let meet = a.intersection(b)?.bits() as usize;
            if mu[union] + mu[meet] != mu[i] + mu[j] {
                out.additive = false;
            }
            let delta = a.symmetric_difference(b)?.bits() as usize;
            if mu[delta].is_zero() && mu[i] != mu[j] {
                out.null_difference_equal_measure = false;
            }
        }
    }
    Ok(out)
}

/// Named model checks exposed to scripts and the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelCheck {
    VitaliPartition,
    TransversalCount,
    CosetUnion,
    TrivialPair,
    Invariance,
    MeasureLemma,
}

impl ModelCheck {
    pub const ALL: [ModelCheck; 6] = [
        ModelCheck::VitaliPartition,
        ModelCheck::TransversalCount,
        ModelCheck::CosetUnion,
        ModelCheck::TrivialPair,
        ModelCheck::Invariance,
        ModelCheck::MeasureLemma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelCheck::VitaliPartition => "vitali-partition",
            ModelCheck::TransversalCount => "transversal-count",
            ModelCheck::CosetUnion => "coset-union",
            ModelCheck::TrivialPair => "trivial-pair",
            ModelCheck::Invariance => "invariance",
            ModelCheck::MeasureLemma => "measure-lemma",
        }
    }
}

impl FromStr for ModelCheck {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelCheck::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Group(format!("unknown model check `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelReport {
    pub check: ModelCheck,
    pub group: String,
    /// Subgroups the check ran over, as element lists.
    pub subgroups: Vec<Vec<usize>>,
    pub cases: u64,
    pub pass: bool,
    pub detail: String,
}

fn subgroup_targets(g: &GroupModel, subgroup: Option<&Subgroup>, min_cosets: usize) -> Vec<Subgroup> {
    match subgroup {
        Some(s) => vec![s.clone()],
        None => g.all_subgroups().into_iter().filter(|s| s.index() >= min_cosets).collect(),
    }
}

/// Runs `check` on `g`. Without a subgroup the subgroup-based checks sweep
/// every subgroup of `g`.
pub fn run_model_check(
    check: ModelCheck,
    g: &GroupModel,
    subgroup: Option<&Subgroup>,
    weights: Option<&WeightedMeasure>,
) -> Result<ModelReport> {
    if let Some(s) = subgroup {
        if s.group() != g {
            return Err(Error::Group("subgroup belongs to a different group".into()));
        }
    }
    let mut cases = 0u64;
    let mut pass = true;
    let mut detail = String::new();
    let targets = match check {
        ModelCheck::CosetUnion => subgroup_targets(g, subgroup, 2),
        ModelCheck::TrivialPair | ModelCheck::MeasureLemma => Vec::new(),
        _ => subgroup_targets(g, subgroup, 1),
    };
    match check {
        ModelCheck::VitaliPartition => {
            for q in &targets {
                let p = cosets_of(q);
                for v in enumerate_transversals(&p)? {
                    cases += 1;
                    let ok = vitali_partition_check(&p, &v.picks())?
                        && (0..g.order())
                            .try_fold(true, |acc, t| Ok::<_, Error>(acc && translate_transversal_check(&v, t)?))?;
                    if !ok && pass {
                        pass = false;
                        detail = format!("violated by {}", v.picks());
                    }
                }
            }
            if pass {
                detail = format!("{cases} transversals partition the group and translate to transversals");
            }
        }
        ModelCheck::TransversalCount => {
            let mut parts = Vec::new();
            for q in &targets {
                let p = cosets_of(q);
                let expected = p.transversal_count();
                let got = enumerate_transversals(&p)?.len() as u128;
                cases += 1;
                pass &= got == expected;
                parts.push(format!("|Q|={}: {got}", q.order()));
            }
            detail = parts.join(", ");
        }
        ModelCheck::CosetUnion => {
            for b in &targets {
                cases += 1;
                if !proper_coset_union_check(b)? && pass {
                    pass = false;
                    detail = format!("violated by subgroup {}", b.elements());
                }
            }
            if pass {
                detail = format!("{cases} subgroup{} checked", if cases == 1 { "" } else { "s" });
            }
        }
        ModelCheck::TrivialPair => {
            cases = 1;
            detail = match trivial_intersection_pair(g) {
                Some((a, b)) => format!("({}, {})", a.elements(), b.elements()),
                None => "none".to_string(),
            };
        }
        ModelCheck::Invariance => {
            for b in &targets {
                cases += 1;
                let fam = coset_family(b);
                let closure = crate::algebra::semigroup_closure(&fam)?;
                if !(translation_invariance_check(&fam, g)? && translation_invariance_check(&closure, g)?) && pass {
                    pass = false;
                    detail = format!("violated by subgroup {}", b.elements());
                }
            }
            if pass {
                detail = format!("{cases} coset families and their closures are translation-invariant");
            }
        }
        ModelCheck::MeasureLemma => {
            let m = match weights {
                Some(m) => m.clone(),
                None => WeightedMeasure::uniform(g.order())?,
            };
            if m.universe_size() != g.order() {
                return Err(Error::UniverseMismatch { left: g.order(), right: m.universe_size() });
            }
            let r = measure_check(&m)?;
            cases = r.pairs;
            pass = r.passed();
            detail = format!(
                "additive={}, null-ideal={}, null-difference={}, null apex {}",
                r.additive,
                r.null_ideal_exact,
                r.null_difference_equal_measure,
                m.null_ideal().apex()
            );
        }
    }
    Ok(ModelReport {
        check,
        group: g.to_string(),
        subgroups: targets.iter().map(|s| s.elements().elements().collect()).collect(),
        cases,
        pass,
        detail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, e: &[usize]) -> Subset {
        Subset::from_indices(n, e).unwrap()
    }

    #[test]
    fn group_axioms_hold() {
        for spec in ["Z1", "Z6", "Z2xZ2", "Z2xZ3", "Z4xZ2", "Z2xZ2xZ2"] {
            let g: GroupModel = spec.parse().unwrap();
            let n = g.order();
            for a in 0..n {
                assert_eq!(g.add(a, 0), a);
                assert_eq!(g.add(a, g.neg(a)), 0);
                for b in 0..n {
                    assert_eq!(g.add(a, b), g.add(b, a));
                    for c in 0..n {
                        assert_eq!(g.add(g.add(a, b), c), g.add(a, g.add(b, c)));
                    }
                }
            }
            assert_eq!(g.to_string(), spec);
        }
    }

    #[test]
    fn group_construction_errors() {
        assert!(GroupModel::new(&[]).is_err());
        assert!(GroupModel::new(&[0]).is_err());
        assert!(GroupModel::new(&[65]).is_err());
        assert!(GroupModel::new(&[8, 8]).is_ok());
        assert!(GroupModel::new(&[8, 9]).is_err());
        assert!("Q6".parse::<GroupModel>().is_err());
    }

    #[test]
    fn mixed_radix_encoding() {
        let g: GroupModel = "Z2xZ3".parse().unwrap();
        assert_eq!(g.encode(&[1, 2]).unwrap(), 5);
        assert_eq!(g.components(5), vec![1, 2]);
        assert_eq!(g.label(4), "(1,1)");
        assert!(g.encode(&[2, 0]).is_err());
    }

    #[test]
    fn generated_subgroups() {
        let z6 = GroupModel::cyclic(6).unwrap();
        assert_eq!(subgroup_generated(&z6, &[3]).unwrap().elements(), set(6, &[0, 3]));
        assert_eq!(subgroup_generated(&z6, &[]).unwrap().elements(), set(6, &[0]));
        assert_eq!(subgroup_generated(&z6, &[2]).unwrap().elements(), set(6, &[0, 2, 4]));
        assert_eq!(subgroup_generated(&z6, &[2, 3]).unwrap().elements(), Subset::full(6));
        assert!(subgroup_generated(&z6, &[6]).is_err());
        assert!(Subgroup::from_elements(&z6, set(6, &[0, 1])).is_err());
    }

    #[test]
    fn subgroup_lattices() {
        let count = |s: &str| s.parse::<GroupModel>().unwrap().all_subgroups().len();
        assert_eq!(count("Z6"), 4);
        assert_eq!(count("Z12"), 6);
        assert_eq!(count("Z2xZ2"), 5);
        assert_eq!(count("Z2xZ2xZ2"), 16);
        assert_eq!(count("Z4xZ2"), 8);
        for spec in ["Z12", "Z2xZ4", "Z3xZ3", "Z2xZ2xZ2"] {
            let g: GroupModel = spec.parse().unwrap();
            for h in g.all_subgroups() {
                assert_eq!(g.order() % h.order(), 0);
                assert!(Subgroup::from_elements(&g, h.elements()).is_ok());
            }
        }
    }

    #[test]
    fn coset_examples() {
        let z6 = GroupModel::cyclic(6).unwrap();
        let q = subgroup_generated(&z6, &[3]).unwrap();
        let p = cosets_of(&q);
        assert_eq!(p.cosets(), &[set(6, &[0, 3]), set(6, &[1, 4]), set(6, &[2, 5])]);
        let whole = subgroup_generated(&z6, &[1]).unwrap();
        assert_eq!(cosets_of(&whole).cosets().len(), 1);
        let trivial = subgroup_generated(&z6, &[]).unwrap();
        assert_eq!(cosets_of(&trivial).cosets().len(), 6);
    }

    #[test]
    fn transversal_examples() {
        let z6 = GroupModel::cyclic(6).unwrap();
        let p = cosets_of(&subgroup_generated(&z6, &[3]).unwrap());
        assert!(is_transversal(&set(6, &[0, 1, 2]), &p).unwrap());
        assert!(!is_transversal(&set(6, &[0, 3, 1]), &p).unwrap());
        assert!(!is_transversal(&Subset::empty(6), &p).unwrap());
        assert_eq!(enumerate_transversals(&p).unwrap().len(), 8);
        let whole = cosets_of(&subgroup_generated(&z6, &[1]).unwrap());
        assert_eq!(enumerate_transversals(&whole).unwrap().len(), 6);
        let z4 = GroupModel::cyclic(4).unwrap();
        let p4 = cosets_of(&subgroup_generated(&z4, &[2]).unwrap());
        assert_eq!(enumerate_transversals(&p4).unwrap().len(), 4);
        let z64 = GroupModel::cyclic(64).unwrap();
        let p64 = cosets_of(&subgroup_generated(&z64, &[32]).unwrap());
        assert!(matches!(enumerate_transversals(&p64), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn translation_examples() {
        let z6 = GroupModel::cyclic(6).unwrap();
        let a = set(6, &[0, 1, 2]);
        assert_eq!(translate(&z6, &a, 3).unwrap(), set(6, &[3, 4, 5]));
        assert_eq!(translate(&z6, &a, 0).unwrap(), a);
        for t in 0..6 {
            let back = translate(&z6, &translate(&z6, &a, t).unwrap(), z6.neg(t)).unwrap();
            assert_eq!(back, a);
        }
        assert!(translate(&z6, &a, 6).is_err());
    }

    #[test]
    fn vitali_examples() {
        let z6 = GroupModel::cyclic(6).unwrap();
        let p = cosets_of(&subgroup_generated(&z6, &[3]).unwrap());
        for v in enumerate_transversals(&p).unwrap() {
            assert!(vitali_partition_check(&p, &v.picks()).unwrap());
        }
        assert!(!vitali_partition_check(&p, &set(6, &[0, 3, 1])).unwrap());
        let whole = cosets_of(&subgroup_generated(&z6, &[1]).unwrap());
        assert!(vitali_partition_check(&whole, &set(6, &[4])).unwrap());

        let v = Transversal::new(&p, set(6, &[0, 1, 2])).unwrap();
        assert!(translate_transversal_check(&v, 1).unwrap());
        assert!(translate_transversal_check(&v, 0).unwrap());
        assert!(Transversal::new(&p, set(6, &[0, 3])).is_err());
    }

    #[test]
    fn coset_family_examples() {
        let z6 = GroupModel::cyclic(6).unwrap();
        let b = subgroup_generated(&z6, &[3]).unwrap();
        let f = coset_family(&b);
        assert_eq!(f.to_index_lists(), vec![vec![0, 3], vec![1, 4], vec![2, 5]]);
        let whole = subgroup_generated(&z6, &[1]).unwrap();
        assert_eq!(coset_family(&whole).len(), 1);
        let closure = crate::algebra::semigroup_closure(&f).unwrap();
        assert_eq!(closure.len(), 7);
        assert!(translation_invariance_check(&f, &z6).unwrap());
        assert!(translation_invariance_check(&closure, &z6).unwrap());
        let z2 = GroupModel::cyclic(2).unwrap();
        let single = SetFamily::new(2, [set(2, &[0])]).unwrap();
        assert!(!translation_invariance_check(&single, &z2).unwrap());
    }

    #[test]
    fn coset_union_examples() {
        let z6 = GroupModel::cyclic(6).unwrap();
        assert!(proper_coset_union_check(&subgroup_generated(&z6, &[3]).unwrap()).unwrap());
        assert!(proper_coset_union_check(&subgroup_generated(&z6, &[1]).unwrap()).is_err());
    }

    #[test]
    fn trivial_pairs() {
        let pair = |s: &str| {
            trivial_intersection_pair(&s.parse().unwrap()).map(|(a, b)| {
                (a.elements().elements().collect::<Vec<_>>(), b.elements().elements().collect::<Vec<_>>())
            })
        };
        assert_eq!(pair("Z6"), Some((vec![0, 3], vec![0, 2, 4])));
        assert_eq!(pair("Z4"), None);
        // {0} x Z2 = {(0,0),(0,1)} = {0,1}; Z2 x {0} = {(0,0),(1,0)} = {0,2}.
        assert_eq!(pair("Z2xZ2"), Some((vec![0, 1], vec![0, 2])));
        assert_eq!(pair("Z8"), None);
    }

    #[test]
    fn measure_examples() {
        let r = |n: i64, d: i64| Rational64::new(n, d);
        let unit = WeightedMeasure::uniform(6).unwrap();
        assert_eq!(unit.measure(&set(6, &[0, 3])).unwrap(), r(2, 1));
        assert_eq!(unit.measure(&Subset::empty(6)).unwrap(), r(0, 1));
        assert!(unit.null_ideal().apex().is_empty());
        let m = WeightedMeasure::new(vec![r(0, 1), r(0, 1), r(1, 1), r(1, 1)]).unwrap();
        assert_eq!(m.measure(&set(4, &[0, 1])).unwrap(), r(0, 1));
        assert_eq!(m.null_ideal().apex(), set(4, &[0, 1]));
        assert!(WeightedMeasure::new(vec![r(-1, 2)]).is_err());
        assert!(unit.measure(&Subset::empty(3)).is_err());
    }

    #[test]
    fn model_checks() {
        let z6 = GroupModel::cyclic(6).unwrap();
        let q = subgroup_generated(&z6, &[3]).unwrap();
        let r = run_model_check(ModelCheck::VitaliPartition, &z6, Some(&q), None).unwrap();
        assert!(r.pass);
        assert_eq!(r.cases, 8);
        let r = run_model_check(ModelCheck::TrivialPair, &z6, None, None).unwrap();
        assert_eq!(r.detail, "({0,3}, {0,2,4})");
        let z4 = GroupModel::cyclic(4).unwrap();
        let r = run_model_check(ModelCheck::TrivialPair, &z4, None, None).unwrap();
        assert_eq!(r.detail, "none");
        for c in ModelCheck::ALL {
            assert_eq!(c.name().parse::<ModelCheck>().unwrap(), c);
            assert!(run_model_check(c, &z6, None, None).unwrap().pass, "{c:?}");
        }
        assert!("bogus".parse::<ModelCheck>().is_err());
    }
}
