//! Registry of algebraic laws over families, and the engine that checks
//! them by exhaustive enumeration or seeded sampling.
//!
//! Identity and inclusion laws promise that no binding violates them.
//! Non-laws are candidate identities that fail; for those the engine must
//! produce a witness. Exhaustive search always reports the canonically
//! least witness: bindings are ordered lexicographically by role, and each
//! role's domain is sorted by the canonical family (or subset) order.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{closure_bits, ideal_star, is_union_closed_bits, join, semigroup_closure, star, star_ideal};
use crate::error::{Error, Result};
use crate::set::{all_families, all_subsets, mask, FamilyRelation, SetFamily, Subset};

/// Default limit on predicate evaluations for a single search.
pub const DEFAULT_CEILING: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Family,
    Semigroup,
    IdealApex,
}

impl Role {
    fn describe(self) -> &'static str {
        match self {
            Role::Family => "a non-empty family",
            Role::Semigroup => "a non-empty union-closed family",
            Role::IdealApex => "an ideal apex",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawKind {
    Identity,
    Inclusion,
    NonLaw,
}

impl LawKind {
    pub fn expects_witness(self) -> bool {
        self == LawKind::NonLaw
    }
}

/// A bound operand. Semigroup roles hold union-closed families; ideal roles
/// hold the apex Y of P(Y).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operand {
    Family(SetFamily),
    Apex(Subset),
}

impl Operand {
    pub fn universe_size(&self) -> usize {
        match self {
            Operand::Family(f) => f.universe_size(),
            Operand::Apex(y) => y.universe_size(),
        }
    }

    fn family(&self) -> &SetFamily {
        match self {
            Operand::Family(f) => f,
            Operand::Apex(_) => unreachable!("bindings are validated against roles"),
        }
    }

    fn apex(&self) -> Subset {
        match self {
            Operand::Apex(y) => *y,
            Operand::Family(_) => unreachable!("bindings are validated against roles"),
        }
    }
}

type Predicate = fn(&[&Operand]) -> Result<bool>;

/// One registry entry. `predicate` returns `Ok(true)` when the claim holds
/// for the binding.
#[derive(Clone, Copy)]
pub struct Law {
    pub id: &'static str,
    pub roles: &'static [Role],
    pub kind: LawKind,
    pub statement: &'static str,
    pub description: &'static str,
    predicate: Predicate,
}

impl std::fmt::Debug for Law {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Law")
            .field("id", &self.id)
            .field("roles", &self.roles)
            .field("kind", &self.kind)
            .field("statement", &self.statement)
            .finish()
    }
}

impl Law {
    pub fn arity(&self) -> usize {
        self.roles.len()
    }

    pub fn holds(&self, binding: &[&Operand]) -> Result<bool> {
        (self.predicate)(binding)
    }
}

// Shorthands for the predicates. Operands are validated non-empty, so the
// only error that can surface is a materialization ceiling.

fn fam(o: &Operand) -> &SetFamily {
    o.family()
}

fn ideal(o: &Operand) -> crate::algebra::PrincipalIdeal {
    crate::algebra::PrincipalIdeal::new(o.apex())
}

fn v(a: &SetFamily, b: &SetFamily) -> Result<SetFamily> {
    join(a, b)
}

fn s(a: &SetFamily) -> Result<SetFamily> {
    semigroup_closure(a)
}

/// `f * P(y)`.
fn sy(f: &SetFamily, y: Subset) -> Result<SetFamily> {
    star_ideal(f, &crate::algebra::PrincipalIdeal::new(y))?.materialize()
}

/// `P(y) * f`.
fn ys(y: Subset, f: &SetFamily) -> Result<SetFamily> {
    ideal_star(&crate::algebra::PrincipalIdeal::new(y), f)?.materialize()
}

fn union(a: Subset, b: Subset) -> Subset {
    a.union(&b).expect("operands share a universe")
}

fn subfamilies(f: &SetFamily) -> impl Iterator<Item = SetFamily> + '_ {
    let m = f.len();
    (1u64..1 << m).map(move |pick| {
        let members = (0..m).filter(|i| pick >> i & 1 == 1).map(|i| f.bits()[i]).collect();
        SetFamily::from_sorted(f.universe_size(), members)
    })
}

fn with_empty(f: &SetFamily) -> SetFamily {
    f.insert(Subset::empty(f.universe_size())).expect("same universe")
}

fn l1(b: &[&Operand]) -> Result<bool> {
    Ok(is_union_closed_bits(v(fam(b[0]), fam(b[1]))?.bits()))
}

fn l2(b: &[&Operand]) -> Result<bool> {
    let (a, c) = (fam(b[0]), fam(b[1]));
    Ok(s(&v(a, c)?)? == v(&s(a)?, &s(c)?)?)
}

fn l3(b: &[&Operand]) -> Result<bool> {
    let (a, c, d) = (fam(b[0]), fam(b[1]), fam(b[2]));
    Ok(s(&v(&v(a, c)?, d)?)? == v(&v(&s(a)?, &s(c)?)?, &s(d)?)?)
}

fn distribute_star_ideal(b: &[&Operand]) -> Result<bool> {
    let (s1, s2, y) = (fam(b[0]), fam(b[1]), b[2].apex());
    Ok(sy(&v(s1, s2)?, y)? == v(&sy(s1, y)?, &sy(s2, y)?)?)
}

fn l5(b: &[&Operand]) -> Result<bool> {
    let (s1, s2, y) = (fam(b[0]), fam(b[1]), b[2].apex());
    Ok(ys(y, &v(s1, s2)?)? == v(&ys(y, s1)?, &ys(y, s2)?)?)
}

fn l6(b: &[&Operand]) -> Result<bool> {
    let (s1, s2, s3, y) = (fam(b[0]), fam(b[1]), fam(b[2]), b[3].apex());
    let joined = v(&v(s1, s2)?, s3)?;
    let right_star = v(&v(&sy(s1, y)?, &sy(s2, y)?)?, &sy(s3, y)?)?;
    let left_star = v(&v(&ys(y, s1)?, &ys(y, s2)?)?, &ys(y, s3)?)?;
    Ok(sy(&joined, y)? == right_star && ys(y, &joined)? == left_star)
}

fn l7(b: &[&Operand]) -> Result<bool> {
    let (sg, y1, y2) = (fam(b[0]), b[1].apex(), b[2].apex());
    let whole = sy(sg, ideal(b[1]).join(&ideal(b[2]))?.apex())?;
    let (p1, p2) = (sy(sg, y1)?, sy(sg, y2)?);
    Ok(whole == v(&p1, &p2)? && p1.is_subfamily_of(&whole) && p2.is_subfamily_of(&whole))
}

fn l8(b: &[&Operand]) -> Result<bool> {
    let (y1, y2, y3, sg) = (b[0].apex(), b[1].apex(), b[2].apex(), fam(b[3]));
    let y12 = union(y1, y2);
    let whole = ys(y12, sg)?;
    let (p1, p2, p3) = (ys(y1, sg)?, ys(y2, sg)?, ys(y3, sg)?);
    let binary = whole == v(&p1, &p2)? && p1.is_subfamily_of(&whole) && p2.is_subfamily_of(&whole);
    let ternary = ys(union(y12, y3), sg)? == v(&v(&p1, &p2)?, &p3)?;
    Ok(binary && ternary)
}

fn l9(b: &[&Operand]) -> Result<bool> {
    let (sg, y) = (fam(b[0]), b[1].apex());
    let left = ys(y, sg)?;
    let right = sy(sg, y)?;
    Ok(sg.is_subfamily_of(&left)
        && left.is_subfamily_of(&right)
        && is_union_closed_bits(left.bits())
        && is_union_closed_bits(right.bits())
        && ys(y, &left)? == left
        && sy(&right, y)? == right)
}

fn l10(b: &[&Operand]) -> Result<bool> {
    let (a, c) = (fam(b[0]), fam(b[1]));
    let j = v(a, c)?;
    Ok(j.is_subfamily_of(&star(a, c)?) && j.is_subfamily_of(&star(c, a)?))
}

fn l11(b: &[&Operand]) -> Result<bool> {
    let (a, c) = (fam(b[0]), fam(b[1]));
    let (j, st) = (v(a, c)?, star(a, c)?);
    for a2 in subfamilies(a) {
        for c2 in subfamilies(c) {
            if !v(&a2, &c2)?.is_subfamily_of(&j) || !star(&a2, &c2)?.is_subfamily_of(&st) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn l12(b: &[&Operand]) -> Result<bool> {
    let a = fam(b[0]);
    let aa = v(a, a)?;
    Ok(a.is_subfamily_of(&aa) && (!is_union_closed_bits(a.bits()) || aa == *a))
}

fn l13(b: &[&Operand]) -> Result<bool> {
    let (a, c) = (fam(b[0]), fam(b[1]));
    Ok(a.is_subfamily_of(&v(a, &with_empty(c))?)
        && c.is_subfamily_of(&v(&with_empty(a), c)?)
        && a.is_subfamily_of(&v(a, &with_empty(a))?))
}

fn n1(b: &[&Operand]) -> Result<bool> {
    let (a, c) = (fam(b[0]), fam(b[1]));
    Ok(s(&a.union_family(c)?)? == s(a)?.union_family(&s(c)?)?)
}

fn n2(b: &[&Operand]) -> Result<bool> {
    let (s1, s2, y) = (fam(b[0]), fam(b[1]), b[2].apex());
    Ok(sy(s1, y)?.is_subfamily_of(&sy(&v(s1, s2)?, y)?))
}

fn n3(b: &[&Operand]) -> Result<bool> {
    let (s1, s2, y) = (fam(b[0]), fam(b[1]), b[2].apex());
    Ok(ys(y, s2)?.is_subfamily_of(&ys(y, &v(s1, s2)?)?))
}

fn n4(b: &[&Operand]) -> Result<bool> {
    let (a, c) = (fam(b[0]), fam(b[1]));
    Ok(a.is_subfamily_of(&v(a, c)?))
}

fn n5(b: &[&Operand]) -> Result<bool> {
    Ok(is_union_closed_bits(fam(b[0]).union_family(fam(b[1]))?.bits()))
}

use LawKind::{Identity, Inclusion, NonLaw};
use Role::{Family as F, IdealApex as Y, Semigroup as G};

static LAWS: &[Law] = &[
    Law {
        id: "L1",
        roles: &[G, G],
        kind: Identity,
        statement: "S1 v S2 is union-closed",
        description: "the join of two union-closed families is union-closed",
        predicate: l1,
    },
    Law {
        id: "L2",
        roles: &[F, F],
        kind: Identity,
        statement: "S(A v B) = S(A) v S(B)",
        description: "closure distributes over join",
        predicate: l2,
    },
    Law {
        id: "L3",
        roles: &[F, F, F],
        kind: Identity,
        statement: "S(A v B v C) = S(A) v S(B) v S(C)",
        description: "closure distributes over a three-fold join",
        predicate: l3,
    },
    Law {
        id: "L4",
        roles: &[G, G, Y],
        kind: Identity,
        statement: "(S1 v S2) * I = (S1 * I) v (S2 * I)",
        description: "right star by an ideal distributes over the join of union-closed families",
        predicate: distribute_star_ideal,
    },
    Law {
        id: "L4'",
        roles: &[F, F, Y],
        kind: Identity,
        statement: "(A v B) * I = (A * I) v (B * I)",
        description: "the same distribution for arbitrary non-empty families",
        predicate: distribute_star_ideal,
    },
    Law {
        id: "L5",
        roles: &[G, G, Y],
        kind: Identity,
        statement: "I * (S1 v S2) = (I * S1) v (I * S2)",
        description: "left star by an ideal distributes over the join of union-closed families",
        predicate: l5,
    },
    Law {
        id: "L6",
        roles: &[G, G, G, Y],
        kind: Identity,
        statement: "(S1 v S2 v S3) * I = v(Si * I) and I * (S1 v S2 v S3) = v(I * Si)",
        description: "three-fold versions of L4 and L5",
        predicate: l6,
    },
    Law {
        id: "L7",
        roles: &[G, Y, Y],
        kind: Identity,
        statement: "S * (I1 v I2) = (S * I1) v (S * I2) and S * Ii <= S * (I1 v I2)",
        description: "right star distributes over the join of ideals",
        predicate: l7,
    },
    Law {
        id: "L8",
        roles: &[Y, Y, Y, G],
        kind: Identity,
        statement: "(I1 v I2) * S = (I1 * S) v (I2 * S), Ii * S <= (I1 v I2) * S, (I1 v I2 v I3) * S = v(Ii * S)",
        description: "left star distributes over the join of ideals",
        predicate: l8,
    },
    Law {
        id: "L9",
        roles: &[G, Y],
        kind: Inclusion,
        statement: "S <= I * S <= S * I, both union-closed, I * (I * S) = I * S, (S * I) * I = S * I",
        description: "starring a union-closed family with an ideal extends it idempotently",
        predicate: l9,
    },
    Law {
        id: "L10",
        roles: &[F, F],
        kind: Inclusion,
        statement: "A v B <= A * B and A v B <= B * A",
        description: "join is contained in star in either order",
        predicate: l10,
    },
    Law {
        id: "L11",
        roles: &[F, F],
        kind: Inclusion,
        statement: "A' <= A, B' <= B implies A' v B' <= A v B and A' * B' <= A * B",
        description: "join and star are monotone (checked over all non-empty subfamilies)",
        predicate: l11,
    },
    Law {
        id: "L12",
        roles: &[F],
        kind: Identity,
        statement: "A <= A v A, with equality when A is union-closed",
        description: "self-join",
        predicate: l12,
    },
    Law {
        id: "L13",
        roles: &[F, F],
        kind: Inclusion,
        statement: "A <= A v (B + {}), B <= (A + {}) v B, A <= A v (A + {})",
        description: "adjoining the empty set makes join inflationary",
        predicate: l13,
    },
    Law {
        id: "N1",
        roles: &[F, F],
        kind: NonLaw,
        statement: "S(A u B) = S(A) u S(B)",
        description: "closure does not distribute over plain union",
        predicate: n1,
    },
    Law {
        id: "N2",
        roles: &[G, G, Y],
        kind: NonLaw,
        statement: "S1 * I <= (S1 v S2) * I",
        description: "right star is not monotone along joins",
        predicate: n2,
    },
    Law {
        id: "N3",
        roles: &[G, G, Y],
        kind: NonLaw,
        statement: "I * S2 <= I * (S1 v S2)",
        description: "left star is not monotone along joins",
        predicate: n3,
    },
    Law {
        id: "N4",
        roles: &[F, F],
        kind: NonLaw,
        statement: "A <= A v B",
        description: "join is not inflationary in general",
        predicate: n4,
    },
    Law {
        id: "N5",
        roles: &[G, G],
        kind: NonLaw,
        statement: "S1 u S2 is union-closed",
        description: "plain union of union-closed families need not be union-closed",
        predicate: n5,
    },
];

pub fn builtin_laws() -> &'static [Law] {
    LAWS
}

pub fn find_law(id: &str) -> Result<&'static Law> {
    LAWS.iter().find(|l| l.id.eq_ignore_ascii_case(id)).ok_or_else(|| Error::UnknownLaw(id.to_string()))
}

/// Serializable form of a bound operand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", content = "value", rename_all = "kebab-case")]
pub enum WitnessOperand {
    Family(Vec<Vec<usize>>),
    Semigroup(Vec<Vec<usize>>),
    IdealApex(Vec<usize>),
}

impl WitnessOperand {
    fn from_operand(role: Role, op: &Operand) -> Self {
        match (role, op) {
            (Role::Family, Operand::Family(f)) => WitnessOperand::Family(f.to_index_lists()),
            (Role::Semigroup, Operand::Family(f)) => WitnessOperand::Semigroup(f.to_index_lists()),
            (_, Operand::Apex(y)) => WitnessOperand::IdealApex(y.elements().collect()),
            (Role::IdealApex, Operand::Family(_)) => unreachable!("validated binding"),
        }
    }

    pub fn to_operand(&self, universe_size: usize) -> Result<Operand> {
        let family = |lists: &Vec<Vec<usize>>| -> Result<Operand> {
            let subsets = lists.iter().map(|l| Subset::from_indices(universe_size, l)).collect::<Result<Vec<_>>>()?;
            Ok(Operand::Family(SetFamily::new(universe_size, subsets)?))
        };
        match self {
            WitnessOperand::Family(l) | WitnessOperand::Semigroup(l) => family(l),
            WitnessOperand::IdealApex(e) => Ok(Operand::Apex(Subset::from_indices(universe_size, e)?)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Single,
    Exhaustive,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Witness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub law: String,
    pub kind: LawKind,
    pub mode: SearchMode,
    pub universe_size: usize,
    pub max_members: usize,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub cases: u64,
    pub outcome: Outcome,
    pub witness: Option<Vec<WitnessOperand>>,
    /// Identity and inclusion laws expect `pass`; non-laws expect `witness`.
    pub expectation_met: bool,
}

impl SearchReport {
    fn new(
        law: &Law,
        mode: SearchMode,
        universe_size: usize,
        max_members: usize,
        cases: u64,
        witness: Option<Vec<WitnessOperand>>,
    ) -> Self {
        let outcome = if witness.is_some() { Outcome::Witness } else { Outcome::Pass };
        Self {
            law: law.id.to_string(),
            kind: law.kind,
            mode,
            universe_size,
            max_members,
            trials: None,
            seed: None,
            cases,
            outcome,
            witness,
            expectation_met: law.kind.expects_witness() == (outcome == Outcome::Witness),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub ceiling: u128,
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { ceiling: DEFAULT_CEILING, parallel: cfg!(feature = "parallel") }
    }
}

impl SearchConfig {
    pub fn sequential() -> Self {
        Self { parallel: false, ..Self::default() }
    }
}

fn validate_binding(law: &Law, binding: &[Operand], close_semigroups: bool) -> Result<Vec<Operand>> {
    if binding.len() != law.arity() {
        return Err(Error::Arity { law: law.id.into(), expected: law.arity(), got: binding.len() });
    }
    let size = binding.first().map(Operand::universe_size).unwrap_or(1);
    let mut out = Vec::with_capacity(binding.len());
    for (position, (role, op)) in law.roles.iter().zip(binding).enumerate() {
        if op.universe_size() != size {
            return Err(Error::UniverseMismatch { left: size, right: op.universe_size() });
        }
        let kind_error = || Error::OperandKind { law: law.id.into(), position, expected: role.describe() };
        match (role, op) {
            (Role::IdealApex, Operand::Apex(_)) => out.push(op.clone()),
            (Role::IdealApex, _) | (_, Operand::Apex(_)) => return Err(kind_error()),
            (_, Operand::Family(f)) if f.is_empty() => return Err(Error::EmptyFamily),
            (Role::Family, Operand::Family(_)) => out.push(op.clone()),
            (Role::Semigroup, Operand::Family(f)) => {
                if is_union_closed_bits(f.bits()) {
                    out.push(op.clone());
                } else if close_semigroups {
                    out.push(Operand::Family(semigroup_closure(f)?));
                } else {
                    return Err(Error::NotSemigroup { law: law.id.into(), position });
                }
            }
        }
    }
    Ok(out)
}

fn witness_of(law: &Law, binding: &[&Operand]) -> Vec<WitnessOperand> {
    law.roles.iter().zip(binding).map(|(r, o)| WitnessOperand::from_operand(*r, o)).collect()
}

/// Evaluates `law` once. Non-union-closed operands in semigroup roles are
/// closed first when `close_semigroups` is set, and rejected otherwise.
pub fn check_law(law: &Law, binding: &[Operand], close_semigroups: bool) -> Result<SearchReport> {
    let binding = validate_binding(law, binding, close_semigroups)?;
    let refs: Vec<&Operand> = binding.iter().collect();
    let holds = law.holds(&refs)?;
    let size = binding.first().map(Operand::universe_size).unwrap_or(0);
    let max_members = binding
        .iter()
        .map(|o| match o {
            Operand::Family(f) => f.len(),
            Operand::Apex(_) => 0,
        })
        .max()
        .unwrap_or(0);
    let witness = (!holds).then(|| witness_of(law, &refs));
    Ok(SearchReport::new(law, SearchMode::Single, size, max_members, 1, witness))
}

/// Re-evaluates the predicate on a reported witness; `true` when the
/// violation reproduces.
pub fn verify_witness(law: &Law, report: &SearchReport) -> Result<bool> {
    let Some(witness) = &report.witness else {
        return Ok(false);
    };
    let ops = witness.iter().map(|w| w.to_operand(report.universe_size)).collect::<Result<Vec<_>>>()?;
    let ops = validate_binding(law, &ops, false)?;
    let refs: Vec<&Operand> = ops.iter().collect();
    Ok(!law.holds(&refs)?)
}

fn binomial_sum(items: u128, max: usize) -> u128 {
    let mut total = 0u128;
    let mut c = 1u128;
    for k in 1..=max as u128 {
        if k > items {
            break;
        }
        c = c.saturating_mul(items - k + 1) / k;
        total = total.saturating_add(c);
    }
    total
}

/// Number of candidate operands for `role` before closure deduplication.
fn role_estimate(role: Role, universe_size: usize, max_members: usize) -> u128 {
    match role {
        Role::IdealApex => 1u128 << universe_size,
        Role::Family | Role::Semigroup => binomial_sum(1u128 << universe_size, max_members),
    }
}

/// Estimated predicate evaluations for an exhaustive search.
pub fn estimate_cases(law: &Law, universe_size: usize, max_members: usize) -> u128 {
    law.roles.iter().map(|r| role_estimate(*r, universe_size, max_members)).fold(1u128, |a, b| a.saturating_mul(b))
}

/// Canonically sorted candidate operands for each role.
#[derive(Debug, Clone)]
pub struct Domains {
    families: Vec<Operand>,
    semigroups: Vec<Operand>,
    apexes: Vec<Operand>,
}

impl Domains {
    pub fn new(universe_size: usize, max_members: usize) -> Self {
        let fams = all_families(universe_size, max_members);
        let mut closures: Vec<SetFamily> =
            fams.iter().map(|f| SetFamily::from_bits(universe_size, closure_bits(f.bits()))).collect();
        closures.sort();
        closures.dedup();
        Self {
            families: fams.into_iter().map(Operand::Family).collect(),
            semigroups: closures.into_iter().map(Operand::Family).collect(),
            apexes: all_subsets(universe_size).map(Operand::Apex).collect(),
        }
    }

    pub fn role(&self, role: Role) -> &[Operand] {
        match role {
            Role::Family => &self.families,
            Role::Semigroup => &self.semigroups,
            Role::IdealApex => &self.apexes,
        }
    }
}

/// Least index in `0..total` whose evaluation is not `Ok(true)`.
fn first_failure<F>(total: usize, parallel: bool, eval: F) -> Option<(usize, Result<bool>)>
where
    F: Fn(usize) -> Result<bool> + Sync,
{
    let probe = |i: usize| match eval(i) {
        Ok(true) => None,
        other => Some((i, other)),
    };
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return (0..total).into_par_iter().find_map_first(probe);
    }
    let _ = parallel;
    (0..total).find_map(probe)
}

fn decode<'a>(mut index: usize, roles: &[Role], domains: &'a Domains, out: &mut Vec<&'a Operand>) {
    out.clear();
    out.resize(roles.len(), &domains.apexes[0]);
    for (slot, role) in roles.iter().enumerate().rev() {
        let d = domains.role(*role);
        out[slot] = &d[index % d.len()];
        index /= d.len();
    }
}

fn check_exhaustive_bounds(law: &Law, universe_size: usize, max_members: usize, cfg: &SearchConfig) -> Result<()> {
    if !(1..=5).contains(&universe_size) {
        return Err(Error::Bound(format!("exhaustive search needs a universe of 1..=5 elements, got {universe_size}")));
    }
    if max_members == 0 {
        return Err(Error::Bound("max_members must be at least 1".into()));
    }
    let estimate = estimate_cases(law, universe_size, max_members);
    if estimate > cfg.ceiling {
        return Err(Error::TooLarge { estimate, ceiling: cfg.ceiling });
    }
    Ok(())
}

pub fn exhaustive_search(law: &Law, universe_size: usize, max_members: usize) -> Result<SearchReport> {
    exhaustive_search_with(law, universe_size, max_members, &SearchConfig::default())
}

pub fn exhaustive_search_with(
    law: &Law,
    universe_size: usize,
    max_members: usize,
    cfg: &SearchConfig,
) -> Result<SearchReport> {
    check_exhaustive_bounds(law, universe_size, max_members, cfg)?;
    let domains = Domains::new(universe_size, max_members);
    let total: usize = law.roles.iter().map(|r| domains.role(*r).len()).product();
    let eval = |i: usize| {
        let mut binding = Vec::with_capacity(law.arity());
        decode(i, law.roles, &domains, &mut binding);
        law.holds(&binding)
    };
    let (cases, witness) = match first_failure(total, cfg.parallel, eval) {
        None => (total as u64, None),
        Some((_, Err(e))) => return Err(e),
        Some((i, Ok(_))) => {
            let mut binding = Vec::new();
            decode(i, law.roles, &domains, &mut binding);
            (i as u64 + 1, Some(witness_of(law, &binding)))
        }
    };
    Ok(SearchReport::new(law, SearchMode::Exhaustive, universe_size, max_members, cases, witness))
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn sample_operand(role: Role, universe_size: usize, max_members: usize, rng: &mut ChaCha8Rng) -> Operand {
    let m = mask(universe_size);
    match role {
        Role::IdealApex => Operand::Apex(Subset::raw(universe_size, rng.gen::<u64>() & m)),
        Role::Family | Role::Semigroup => {
            let k = rng.gen_range(1..=max_members);
            let members: Vec<u64> = (0..k).map(|_| rng.gen::<u64>() & m).collect();
            let members = if role == Role::Semigroup { closure_bits(&members) } else { members };
            Operand::Family(SetFamily::from_bits(universe_size, members))
        }
    }
}

fn sample_binding(law: &Law, universe_size: usize, max_members: usize, seed: u64, trial: u64) -> Vec<Operand> {
    let mut rng = trial_rng(seed, trial);
    law.roles.iter().map(|r| sample_operand(*r, universe_size, max_members, &mut rng)).collect()
}

pub fn random_search(
    law: &Law,
    universe_size: usize,
    max_members: usize,
    trials: u64,
    seed: u64,
) -> Result<SearchReport> {
    random_search_with(law, universe_size, max_members, trials, seed, &SearchConfig::default())
}

/// Trial `t` draws its operands from a ChaCha stream keyed by `(seed, t)`,
/// so the reported witness (the least failing trial) does not depend on how
/// trials are scheduled.
pub fn random_search_with(
    law: &Law,
    universe_size: usize,
    max_members: usize,
    trials: u64,
    seed: u64,
    cfg: &SearchConfig,
) -> Result<SearchReport> {
    if !(1..=16).contains(&universe_size) {
        return Err(Error::Bound(format!("random search needs a universe of 1..=16 elements, got {universe_size}")));
    }
    if max_members == 0 {
        return Err(Error::Bound("max_members must be at least 1".into()));
    }
    if trials as u128 > cfg.ceiling {
        return Err(Error::TooLarge { estimate: trials as u128, ceiling: cfg.ceiling });
    }
    let eval = |t: usize| {
        let ops = sample_binding(law, universe_size, max_members, seed, t as u64);
        let refs: Vec<&Operand> = ops.iter().collect();
        law.holds(&refs)
    };
    let (cases, witness) = match first_failure(trials as usize, cfg.parallel, eval) {
        None => (trials, None),
        Some((_, Err(e))) => return Err(e),
        Some((t, Ok(_))) => {
            let ops = sample_binding(law, universe_size, max_members, seed, t as u64);
            let refs: Vec<&Operand> = ops.iter().collect();
            (t as u64 + 1, Some(witness_of(law, &refs)))
        }
    };
    let mut report = SearchReport::new(law, SearchMode::Random, universe_size, max_members, cases, witness);
    report.trials = Some(trials);
    report.seed = Some(seed);
    Ok(report)
}

/// How `S(A v B) * P(Y)` compares with `S((A v B) * P(Y))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StarClosureClass {
    Equal,
    LeftInRight,
    RightInLeft,
    Incomparable,
}

impl From<FamilyRelation> for StarClosureClass {
    fn from(r: FamilyRelation) -> Self {
        match r {
            FamilyRelation::Equal => StarClosureClass::Equal,
            FamilyRelation::Subfamily => StarClosureClass::LeftInRight,
            FamilyRelation::Superfamily => StarClosureClass::RightInLeft,
            FamilyRelation::Incomparable => StarClosureClass::Incomparable,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarClosureReport {
    pub universe_size: usize,
    pub max_members: usize,
    pub cases: u64,
    pub tally: BTreeMap<StarClosureClass, u64>,
    /// Least binding (A, B, Y) observed in each class.
    pub examples: BTreeMap<StarClosureClass, Vec<WitnessOperand>>,
    pub union_closed_cases: u64,
    pub union_closed_equal: u64,
}

const STAR_CLOSURE_ROLES: &[Role] = &[Role::Family, Role::Family, Role::IdealApex];

/// Classifies `S(A v B) * P(Y)` against `S((A v B) * P(Y))` for every
/// binding. Reports observations only.
pub fn explore_star_closure(universe_size: usize, max_members: usize) -> Result<StarClosureReport> {
    explore_star_closure_with(universe_size, max_members, &SearchConfig::default())
}

pub fn explore_star_closure_with(
    universe_size: usize,
    max_members: usize,
    cfg: &SearchConfig,
) -> Result<StarClosureReport> {
    if !(1..=4).contains(&universe_size) {
        return Err(Error::Bound(format!("the explorer needs a universe of 1..=4 elements, got {universe_size}")));
    }
    if max_members == 0 {
        return Err(Error::Bound("max_members must be at least 1".into()));
    }
    let estimate = STAR_CLOSURE_ROLES
        .iter()
        .map(|r| role_estimate(*r, universe_size, max_members))
        .fold(1u128, |a, b| a.saturating_mul(b));
    if estimate > cfg.ceiling {
        return Err(Error::TooLarge { estimate, ceiling: cfg.ceiling });
    }
    let domains = Domains::new(universe_size, max_members);
    let total: usize = STAR_CLOSURE_ROLES.iter().map(|r| domains.role(*r).len()).product();

    #[derive(Default)]
    struct Acc {
        tally: BTreeMap<StarClosureClass, u64>,
        first: BTreeMap<StarClosureClass, usize>,
        closed: u64,
        closed_equal: u64,
    }
    fn merge(mut a: Acc, b: Acc) -> Acc {
        for (k, n) in b.tally {
            *a.tally.entry(k).or_default() += n;
        }
        for (k, i) in b.first {
            let e = a.first.entry(k).or_insert(i);
            *e = (*e).min(i);
        }
        a.closed += b.closed;
        a.closed_equal += b.closed_equal;
        a
    }
    let classify = |i: usize| -> Result<Acc> {
        let mut b = Vec::with_capacity(3);
        decode(i, STAR_CLOSURE_ROLES, &domains, &mut b);
        let (a, c, y) = (fam(b[0]), fam(b[1]), b[2].apex());
        let joined = v(a, c)?;
        let left = sy(&s(&joined)?, y)?;
        let right = s(&sy(&joined, y)?)?;
        let class = StarClosureClass::from(left.relation(&right)?);
        let mut acc = Acc::default();
        acc.tally.insert(class, 1);
        acc.first.insert(class, i);
        if is_union_closed_bits(a.bits()) && is_union_closed_bits(c.bits()) {
            acc.closed = 1;
            acc.closed_equal = (class == StarClosureClass::Equal) as u64;
        }
        Ok(acc)
    };

    #[cfg(feature = "parallel")]
    let acc = if cfg.parallel {
        use rayon::prelude::*;
        (0..total).into_par_iter().map(classify).try_reduce(Acc::default, |a, b| Ok(merge(a, b)))?
    } else {
        (0..total).map(classify).try_fold(Acc::default(), |a, b| b.map(|b| merge(a, b)))?
    };
    #[cfg(not(feature = "parallel"))]
    let acc = (0..total).map(classify).try_fold(Acc::default(), |a, b| b.map(|b| merge(a, b)))?;

    let examples = acc
        .first
        .iter()
        .map(|(class, &i)| {
            let mut b = Vec::new();
            decode(i, STAR_CLOSURE_ROLES, &domains, &mut b);
            let w = STAR_CLOSURE_ROLES.iter().zip(&b).map(|(r, o)| WitnessOperand::from_operand(*r, o)).collect();
            (*class, w)
        })
        .collect();
    Ok(StarClosureReport {
        universe_size,
        max_members,
        cases: total as u64,
        tally: acc.tally,
        examples,
        union_closed_cases: acc.closed,
        union_closed_equal: acc.closed_equal,
    })
}

/// One worked example evaluated end to end.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureResult {
    pub name: String,
    pub checks: Vec<(String, bool)>,
}

impl FixtureResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

fn lists(n: usize, sets: &[&[usize]]) -> SetFamily {
    SetFamily::new(n, sets.iter().map(|s| Subset::from_indices(n, s).expect("fixture index"))).expect("fixture family")
}

/// X = {a,b,c,d}, A = {a,b}, B = {b,c}, D = {c,d}, with the families {A}
/// and {B, D}.
pub fn four_point_closure_fixture() -> Result<FixtureResult> {
    let fa = lists(4, &[&[0, 1]]);
    let fb = lists(4, &[&[1, 2], &[2, 3]]);
    let sa = semigroup_closure(&fa)?;
    let sb = semigroup_closure(&fb)?;
    let j = join(&fa, &fb)?;
    let sj = semigroup_closure(&j)?;
    let joined_closures = join(&sa, &sb)?;
    let s_union = semigroup_closure(&fa.union_family(&fb)?)?;
    let union_s = sa.union_family(&sb)?;
    let expected_join = lists(4, &[&[0, 1, 2], &[0, 1, 2, 3]]);
    let checks = vec![
        ("S({A}) = {A}".to_string(), sa == fa),
        ("S({B,D}) = {B,D,B u D}".to_string(), sb == lists(4, &[&[1, 2], &[2, 3], &[1, 2, 3]])),
        ("{A} v {B,D} = {{a,b,c},X}".to_string(), j == expected_join),
        ("S({A} v {B,D}) = {{a,b,c},X}".to_string(), sj == expected_join),
        ("S({A}) v S({B,D}) = S({A} v {B,D})".to_string(), joined_closures == sj),
        (
            "S({A} u {B,D}) has 6 members".to_string(),
            s_union == lists(4, &[&[0, 1], &[1, 2], &[2, 3], &[0, 1, 2], &[1, 2, 3], &[0, 1, 2, 3]]),
        ),
        ("S({A}) u S({B,D}) has 4 members".to_string(), union_s.len() == 4),
        ("S({A} u {B,D}) != S({A}) u S({B,D})".to_string(), s_union != union_s),
    ];
    Ok(FixtureResult { name: "four-point closure".into(), checks })
}

/// X with a non-empty proper subset A and B = X \ A; S1 = {A, X},
/// S2 = {B, X}, I = P(A), J = P(B). Stars are computed from their
/// definition against the materialized ideals.
pub fn complementary_ideals_fixture(a: Subset) -> Result<FixtureResult> {
    let n = a.universe_size();
    if a.is_empty() || a == Subset::full(n) {
        return Err(Error::Bound("A must be a non-empty proper subset".into()));
    }
    let x = Subset::full(n);
    let b = a.complement();
    let empty = Subset::empty(n);
    let s1 = SetFamily::new(n, [a, x])?;
    let s2 = SetFamily::new(n, [b, x])?;
    let i = crate::algebra::PrincipalIdeal::new(a).materialize()?;
    let j = crate::algebra::PrincipalIdeal::new(b).materialize()?;
    let s12 = join(&s1, &s2)?;
    let only_x = SetFamily::new(n, [x])?;
    let s1_i = star(&s1, &i)?;
    let s12_i = star(&s12, &i)?;
    let checks = vec![
        ("{} in S1 * I".to_string(), s1_i.contains(&empty)),
        ("A in S1 * I".to_string(), s1_i.contains(&a)),
        ("{} not in (S1 v S2) * I".to_string(), !s12_i.contains(&empty)),
        ("A not in (S1 v S2) * I".to_string(), !s12_i.contains(&a)),
        ("I * (S1 v S2) = {X}".to_string(), star(&i, &s12)? == only_x),
        ("J * (S1 v S2) = {X}".to_string(), star(&j, &s12)? == only_x),
        ("B in I * S2".to_string(), star(&i, &s2)?.contains(&b)),
        ("A in J * S1".to_string(), star(&j, &s1)?.contains(&a)),
    ];
    Ok(FixtureResult { name: format!("complementary ideals, X of {n}, A = {a}"), checks })
}

pub fn regression_fixtures() -> Result<Vec<FixtureResult>> {
    Ok(vec![
        four_point_closure_fixture()?,
        complementary_ideals_fixture(Subset::from_indices(2, &[0])?)?,
        complementary_ideals_fixture(Subset::from_indices(3, &[0, 1])?)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: usize, sets: &[&[usize]]) -> Operand {
        Operand::Family(lists(n, sets))
    }

    #[test]
    fn registry_contents() {
        let laws = builtin_laws();
        assert!(laws.len() >= 17);
        let ids: Vec<&str> = laws.iter().map(|l| l.id).collect();
        for id in [
            "L1", "L2", "L3", "L4", "L4'", "L5", "L6", "L7", "L8", "L9", "L10", "L11", "L12", "N1", "N2", "N3", "N4",
            "N5",
        ] {
            assert!(ids.contains(&id), "{id} missing");
        }
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), ids.len());
        assert!(find_law("n1").is_ok());
        assert_eq!(find_law("Z9").unwrap_err(), Error::UnknownLaw("Z9".into()));
    }

    #[test]
    fn single_checks_on_four_point_data() {
        let a = fam(4, &[&[0, 1]]);
        let b = fam(4, &[&[1, 2], &[2, 3]]);
        let r = check_law(find_law("L2").unwrap(), &[a.clone(), b.clone()], false).unwrap();
        assert_eq!(r.outcome, Outcome::Pass);
        let r = check_law(find_law("N1").unwrap(), &[a.clone(), b], false).unwrap();
        assert_eq!(r.outcome, Outcome::Witness);
        assert!(r.expectation_met);
        let r = check_law(find_law("L12").unwrap(), &[a], false).unwrap();
        assert_eq!(r.outcome, Outcome::Pass);
    }

    #[test]
    fn binding_validation() {
        let l1 = find_law("L1").unwrap();
        let open = fam(2, &[&[0], &[1]]);
        let closed = fam(2, &[&[0]]);
        assert!(matches!(check_law(l1, std::slice::from_ref(&closed), false), Err(Error::Arity { .. })));
        assert!(matches!(
            check_law(l1, &[open.clone(), closed.clone()], false),
            Err(Error::NotSemigroup { position: 0, .. })
        ));
        assert!(check_law(l1, &[open, closed.clone()], true).is_ok());
        let empty = Operand::Family(SetFamily::empty(2));
        assert_eq!(check_law(l1, &[empty, closed.clone()], true), Err(Error::EmptyFamily));
        let apex = Operand::Apex(Subset::empty(2));
        assert!(matches!(check_law(l1, &[apex, closed], false), Err(Error::OperandKind { .. })));
    }

    #[test]
    fn exhaustive_counts_and_least_witness() {
        let r = exhaustive_search(find_law("L2").unwrap(), 3, 3).unwrap();
        assert_eq!((r.outcome, r.cases), (Outcome::Pass, 8464));
        let r = exhaustive_search(find_law("N1").unwrap(), 2, 1).unwrap();
        assert_eq!(r.witness, Some(vec![WitnessOperand::Family(vec![vec![0]]), WitnessOperand::Family(vec![vec![1]])]));
        assert!(verify_witness(find_law("N1").unwrap(), &r).unwrap());
    }

    #[test]
    fn bound_policy() {
        let l2 = find_law("L2").unwrap();
        assert!(matches!(exhaustive_search(l2, 9, 9), Err(Error::Bound(_))));
        assert!(matches!(exhaustive_search(l2, 5, 3), Err(Error::TooLarge { .. })));
        assert!(matches!(random_search(l2, 17, 2, 10, 0), Err(Error::Bound(_))));
        assert_eq!(binomial_sum(8, 3), 92);
        assert_eq!(binomial_sum(2, 5), 3);
    }

    #[test]
    fn fixtures_pass() {
        for f in regression_fixtures().unwrap() {
            assert!(f.passed(), "{f:?}");
        }
    }
}
