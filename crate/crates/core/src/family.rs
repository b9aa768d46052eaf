//! The named families of normal covers and their closed-form lifting
//! criteria.
//!
//! Degree 2: `L_i` swaps the two sheets along `a_i`; `L_{i,j}` swaps them
//! along both `a_i` and `a_j`. Every other generator fixes both sheets.
//!
//! Odd degree `l = 2m - 1`, shift permutations on `Z/l`:
//!
//! | family            | named-first generator | second generator |
//! |-------------------|-----------------------|------------------|
//! | `M_u`             | `a_u: s ↦ s+1`        | —                |
//! | `M_{u,v}^k`       | `a_u: s ↦ s+1`        | `a_v: s ↦ s-k`   |
//! | `N_{u,v}^k`       | `a_u: s ↦ s+1`        | `a_v: s ↦ s+k`   |
//! | `M_{v,u}^k`       | `a_v: s ↦ s+1`        | `a_u: s ↦ s-k`   |
//! | `N_{v,u}^k`       | `a_v: s ↦ s+1`        | `a_u: s ↦ s+k`   |
//!
//! with `1 <= k <= m - 1`. Reversing every edge gives an isomorphic cover,
//! so fixing "+1 for the named-first generator" loses nothing.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cover::CoverGraph;
use crate::error::{Error, Result};
use crate::modular::{mul_mod, reduce};
use crate::perm::Permutation;
use crate::word::{ExponentVector, FreeWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum Family {
    L { i: usize },
    L2 { i: usize, j: usize },
    M { u: usize },
    Muv { u: usize, v: usize, k: u64 },
    Nuv { u: usize, v: usize, k: u64 },
    Mvu { u: usize, v: usize, k: u64 },
    Nvu { u: usize, v: usize, k: u64 },
}

impl Family {
    fn order(&self) -> u8 {
        match self {
            Family::L { .. } => 0,
            Family::L2 { .. } => 1,
            Family::M { .. } => 2,
            Family::Muv { .. } => 3,
            Family::Nuv { .. } => 4,
            Family::Mvu { .. } => 5,
            Family::Nvu { .. } => 6,
        }
    }

    fn shift(&self) -> u64 {
        match *self {
            Family::Muv { k, .. }
            | Family::Nuv { k, .. }
            | Family::Mvu { k, .. }
            | Family::Nvu { k, .. } => k,
            _ => 0,
        }
    }

    fn indices(&self) -> (usize, usize) {
        match *self {
            Family::L { i } => (i, 0),
            Family::L2 { i, j } => (i, j),
            Family::M { u } => (u, 0),
            Family::Muv { u, v, .. }
            | Family::Nuv { u, v, .. }
            | Family::Mvu { u, v, .. }
            | Family::Nvu { u, v, .. } => (u, v),
        }
    }
}

/// A family member together with the rank of the free group and the degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    rank: usize,
    degree: u64,
    family: Family,
}

impl FamilySpec {
    pub fn new(rank: usize, degree: u64, family: Family) -> Result<Self> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        let in_range = |g: usize| {
            if g == 0 || g > rank {
                Err(Error::GeneratorOutOfRange { index: g, rank })
            } else {
                Ok(())
            }
        };
        let distinct = |a: usize, b: usize| {
            if a == b {
                Err(Error::InvalidFamily(format!(
                    "generator indices must differ, got {a} twice"
                )))
            } else {
                Ok(())
            }
        };
        match family {
            Family::L { i } => {
                in_range(i)?;
                if degree != 2 {
                    return Err(Error::InvalidFamily(format!(
                        "L covers have degree 2, not {degree}"
                    )));
                }
            }
            Family::L2 { i, j } => {
                in_range(i)?;
                in_range(j)?;
                distinct(i, j)?;
                if degree != 2 {
                    return Err(Error::InvalidFamily(format!(
                        "L covers have degree 2, not {degree}"
                    )));
                }
            }
            Family::M { u } => {
                in_range(u)?;
                check_odd_degree(degree)?;
            }
            Family::Muv { u, v, k }
            | Family::Nuv { u, v, k }
            | Family::Mvu { u, v, k }
            | Family::Nvu { u, v, k } => {
                in_range(u)?;
                in_range(v)?;
                distinct(u, v)?;
                check_odd_degree(degree)?;
                let max_k = (degree - 1) / 2;
                if !(1..=max_k).contains(&k) {
                    return Err(Error::InvalidFamily(format!(
                        "shift k = {k} outside 1..={max_k} for degree {degree}"
                    )));
                }
            }
        }
        Ok(FamilySpec {
            rank,
            degree,
            family,
        })
    }

    pub fn l(rank: usize, i: usize) -> Result<Self> {
        FamilySpec::new(rank, 2, Family::L { i })
    }

    pub fn l2(rank: usize, i: usize, j: usize) -> Result<Self> {
        FamilySpec::new(rank, 2, Family::L2 { i, j })
    }

    pub fn m(rank: usize, degree: u64, u: usize) -> Result<Self> {
        FamilySpec::new(rank, degree, Family::M { u })
    }

    pub fn muv(rank: usize, degree: u64, u: usize, v: usize, k: u64) -> Result<Self> {
        FamilySpec::new(rank, degree, Family::Muv { u, v, k })
    }

    pub fn nuv(rank: usize, degree: u64, u: usize, v: usize, k: u64) -> Result<Self> {
        FamilySpec::new(rank, degree, Family::Nuv { u, v, k })
    }

    pub fn mvu(rank: usize, degree: u64, u: usize, v: usize, k: u64) -> Result<Self> {
        FamilySpec::new(rank, degree, Family::Mvu { u, v, k })
    }

    pub fn nvu(rank: usize, degree: u64, u: usize, v: usize, k: u64) -> Result<Self> {
        FamilySpec::new(rank, degree, Family::Nvu { u, v, k })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Rewrites `M_{v,u}^k` as `M_{u',v'}^k` with the roles swapped (and the
    /// same for `N`). Both spellings build the identical cover.
    pub fn canonical(&self) -> FamilySpec {
        let family = match self.family {
            Family::Mvu { u, v, k } => Family::Muv { u: v, v: u, k },
            Family::Nvu { u, v, k } => Family::Nuv { u: v, v: u, k },
            other => other,
        };
        FamilySpec { family, ..*self }
    }

    /// Sort key: variant, then shift `k`, then generator indices.
    pub fn sort_key(&self) -> (u8, u64, usize, usize) {
        let (a, b) = self.family.indices();
        (self.family.order(), self.family.shift(), a, b)
    }

    /// Every legal member of the seven families over the pair `(u, v)`:
    /// `L_u, L_v, L_{u,v}` when `degree == 2`, otherwise
    /// `M_u, M_v` and the four two-generator families for every `k`.
    pub fn all_over_pair(rank: usize, degree: u64, u: usize, v: usize) -> Result<Vec<FamilySpec>> {
        let mut specs = Vec::new();
        if degree == 2 {
            specs.push(FamilySpec::l(rank, u)?);
            specs.push(FamilySpec::l(rank, v)?);
            specs.push(FamilySpec::l2(rank, u, v)?);
        } else {
            specs.push(FamilySpec::m(rank, degree, u)?);
            specs.push(FamilySpec::m(rank, degree, v)?);
            for k in 1..=(degree.saturating_sub(1)) / 2 {
                specs.push(FamilySpec::muv(rank, degree, u, v, k)?);
                specs.push(FamilySpec::nuv(rank, degree, u, v, k)?);
                specs.push(FamilySpec::mvu(rank, degree, u, v, k)?);
                specs.push(FamilySpec::nvu(rank, degree, u, v, k)?);
            }
        }
        specs.sort_by_key(FamilySpec::sort_key);
        Ok(specs)
    }
}

fn check_odd_degree(degree: u64) -> Result<()> {
    if degree < 3 || degree.is_multiple_of(2) {
        return Err(Error::InvalidFamily(format!(
            "cyclic families need an odd degree >= 3, got {degree}"
        )));
    }
    Ok(())
}

/// The cover described by `spec`, based at sheet 0. Generators the family
/// does not name act trivially.
pub fn build_cover(spec: &FamilySpec) -> CoverGraph {
    let l = usize::try_from(spec.degree).expect("degree fits in memory");
    let mut perms = vec![Permutation::identity(l); spec.rank];
    let k = spec.family.shift() as i64;
    match spec.family {
        Family::L { i } => perms[i - 1] = Permutation::shift(2, 1),
        Family::L2 { i, j } => {
            perms[i - 1] = Permutation::shift(2, 1);
            perms[j - 1] = Permutation::shift(2, 1);
        }
        Family::M { u } => perms[u - 1] = Permutation::shift(l, 1),
        Family::Muv { u, v, .. } => {
            perms[u - 1] = Permutation::shift(l, 1);
            perms[v - 1] = Permutation::shift(l, -k);
        }
        Family::Nuv { u, v, .. } => {
            perms[u - 1] = Permutation::shift(l, 1);
            perms[v - 1] = Permutation::shift(l, k);
        }
        Family::Mvu { u, v, .. } => {
            perms[v - 1] = Permutation::shift(l, 1);
            perms[u - 1] = Permutation::shift(l, -k);
        }
        Family::Nvu { u, v, .. } => {
            perms[v - 1] = Permutation::shift(l, 1);
            perms[u - 1] = Permutation::shift(l, k);
        }
    }
    CoverGraph::new(perms, 0).expect("family permutations are valid")
}

/// Closed-form lifting test from the exponent sums alone.
pub fn criterion_for_sums(sums: &ExponentVector, spec: &FamilySpec) -> Result<bool> {
    if sums.rank() != spec.rank {
        return Err(Error::RankMismatch {
            expected: spec.rank,
            found: sums.rank(),
        });
    }
    let l = spec.degree;
    let o = |g: usize| reduce(sums.get(g), l);
    Ok(match spec.family {
        Family::L { i } => o(i) == 0,
        Family::L2 { i, j } => (o(i) + o(j)) % 2 == 0,
        Family::M { u } => o(u) == 0,
        Family::Muv { u, v, k } => o(u) == mul_mod(k, o(v), l),
        Family::Mvu { u, v, k } => mul_mod(k, o(u), l) == o(v),
        Family::Nuv { u, v, k } => (o(u) + mul_mod(k, o(v), l)).is_multiple_of(l),
        Family::Nvu { u, v, k } => (o(v) + mul_mod(k, o(u), l)).is_multiple_of(l),
    })
}

pub fn criterion(w: &FreeWord, spec: &FamilySpec) -> Result<bool> {
    criterion_for_sums(&w.exponent_sums(), spec)
}

/// The degree-3 cover prescribed for the residues of `(o(a_u), o(a_v))`
/// modulo 3. When `o(a_u) ≡ 0` both `M_u` and `M_v` may apply; `M_u` is
/// returned.
pub fn classify_mod3(w: &FreeWord, u: usize, v: usize) -> Result<FamilySpec> {
    let rank = w.rank();
    if rank < 2 {
        return Err(Error::RankTooSmall { rank, required: 2 });
    }
    if u == v {
        return Err(Error::InvalidFamily(format!(
            "generator indices must differ, got {u} twice"
        )));
    }
    for g in [u, v] {
        if g == 0 || g > rank {
            return Err(Error::GeneratorOutOfRange { index: g, rank });
        }
    }
    let sums = w.exponent_sums();
    let (ru, rv) = (reduce(sums.get(u), 3), reduce(sums.get(v), 3));
    match (ru, rv) {
        (0, _) => FamilySpec::m(rank, 3, u),
        (_, 0) => FamilySpec::m(rank, 3, v),
        (1, 1) | (2, 2) => FamilySpec::muv(rank, 3, u, v, 1),
        _ => FamilySpec::nuv(rank, 3, u, v, 1),
    }
}

/// Text form: `L:i`, `L:i,j`, `M:u@l`, `M:u,v^k@l`, `N:u,v^k@l`. The
/// `v,u` variants print with their indices swapped, which parses back to
/// the same cover.
impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.degree;
        match self.family {
            Family::L { i } => write!(f, "L:{i}"),
            Family::L2 { i, j } => write!(f, "L:{i},{j}"),
            Family::M { u } => write!(f, "M:{u}@{l}"),
            Family::Muv { u, v, k } => write!(f, "M:{u},{v}^{k}@{l}"),
            Family::Nuv { u, v, k } => write!(f, "N:{u},{v}^{k}@{l}"),
            Family::Mvu { u, v, k } => write!(f, "M:{v},{u}^{k}@{l}"),
            Family::Nvu { u, v, k } => write!(f, "N:{v},{u}^{k}@{l}"),
        }
    }
}

/// Parses the text form for a given rank.
pub fn parse_family(text: &str, rank: usize) -> Result<FamilySpec> {
    let bad = |why: &str| Error::InvalidFamily(format!("{text:?}: {why}"));
    let number = |s: &str| -> Result<u64> {
        if s.is_empty() || s.starts_with('0') || !s.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad("expected a positive integer"));
        }
        s.parse().map_err(|_| bad("integer too large"))
    };
    let index = |s: &str| -> Result<usize> {
        usize::try_from(number(s)?).map_err(|_| bad("index too large"))
    };
    let (body, degree) = match text.split_once('@') {
        Some((body, d)) => (body, Some(number(d)?)),
        None => (text, None),
    };
    let (kind, args) = body
        .split_once(':')
        .ok_or_else(|| bad("expected KIND:ARGS"))?;
    match kind {
        "L" => {
            if degree.is_some_and(|d| d != 2) {
                return Err(bad("L covers have degree 2"));
            }
            match args.split_once(',') {
                Some((i, j)) => FamilySpec::l2(rank, index(i)?, index(j)?),
                None => FamilySpec::l(rank, index(args)?),
            }
        }
        "M" | "N" => {
            let degree = degree.ok_or_else(|| bad("missing @degree"))?;
            match args.split_once('^') {
                Some((pair, k)) => {
                    let (u, v) = pair.split_once(',').ok_or_else(|| bad("expected u,v^k"))?;
                    let (u, v, k) = (index(u)?, index(v)?, number(k)?);
                    if kind == "M" {
                        FamilySpec::muv(rank, degree, u, v, k)
                    } else {
                        FamilySpec::nuv(rank, degree, u, v, k)
                    }
                }
                None if kind == "M" => FamilySpec::m(rank, degree, index(args)?),
                None => Err(bad("N covers need u,v^k")),
            }
        }
        _ => Err(bad("unknown family, expected L, M or N")),
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Parses just the family shape, ignoring rank checks beyond index
    /// validity. Mostly useful in tests.
    fn from_str(s: &str) -> Result<Self> {
        parse_family(s, usize::MAX).map(|spec| spec.family)
    }
}
