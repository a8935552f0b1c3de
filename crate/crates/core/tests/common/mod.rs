//! Definitional reference implementations over `BTreeSet`s, written
//! without bit tricks so they share no code paths with the library.

#![allow(dead_code)]

use std::collections::BTreeSet;

use famalg_core::set::{SetFamily, Subset};

pub type Set = BTreeSet<usize>;
pub type Fam = BTreeSet<Set>;

pub fn to_set(s: &Subset) -> Set {
    s.elements().collect()
}

pub fn to_fam(f: &SetFamily) -> Fam {
    f.members().map(|s| to_set(&s)).collect()
}

pub fn subset(n: usize, s: &Set) -> Subset {
    Subset::from_indices(n, &s.iter().copied().collect::<Vec<_>>()).unwrap()
}

pub fn family(n: usize, f: &Fam) -> SetFamily {
    SetFamily::new(n, f.iter().map(|s| subset(n, s))).unwrap()
}

/// All subsets of `items`, built by repeated doubling.
pub fn powerset(items: &Set) -> Vec<Set> {
    let mut out = vec![Set::new()];
    for &x in items {
        let with: Vec<Set> = out
            .iter()
            .map(|s| {
                let mut t = s.clone();
                t.insert(x);
                t
            })
            .collect();
        out.extend(with);
    }
    out
}

pub fn universe(n: usize) -> Set {
    (0..n).collect()
}

pub fn join(a: &Fam, b: &Fam) -> Fam {
    let mut out = Fam::new();
    for x in a {
        for y in b {
            out.insert(x.union(y).copied().collect());
        }
    }
    out
}

/// `{(A \ B1) ∪ B2 : A ∈ a, B1, B2 ∈ b}`.
pub fn star(a: &Fam, b: &Fam) -> Fam {
    let mut out = Fam::new();
    for x in a {
        for b1 in b {
            let rest: Set = x.difference(b1).copied().collect();
            for b2 in b {
                out.insert(rest.union(b2).copied().collect());
            }
        }
    }
    out
}

/// Unions of every non-empty subfamily.
pub fn closure(a: &Fam) -> Fam {
    let members: Vec<&Set> = a.iter().collect();
    let mut out = Fam::new();
    for pick in 1u64..(1 << members.len()) {
        let mut u = Set::new();
        for (i, m) in members.iter().enumerate() {
            if pick >> i & 1 == 1 {
                u.extend(m.iter().copied());
            }
        }
        out.insert(u);
    }
    out
}

/// Every set contained in some member of the closure.
pub fn ideal(a: &Fam) -> Fam {
    closure(a).iter().flat_map(powerset).collect()
}

pub fn principal(y: &Set) -> Fam {
    powerset(y).into_iter().collect()
}

pub fn is_union_closed(a: &Fam) -> bool {
    a.iter().all(|x| a.iter().all(|y| a.contains(&x.union(y).copied().collect::<Set>())))
}

/// Non-empty families of at most `max` members, by brute-force filtering
/// of every family of subsets of an `n`-point set.
pub fn families(n: usize, max: usize) -> Vec<Fam> {
    let all = powerset(&universe(n));
    let mut out = Vec::new();
    for pick in 1u64..(1 << all.len()) {
        if pick.count_ones() as usize <= max {
            out.push((0..all.len()).filter(|i| pick >> i & 1 == 1).map(|i| all[i].clone()).collect());
        }
    }
    out
}
