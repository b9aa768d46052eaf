//! Exhaustive enumeration of covers of a fixed degree.
//!
//! Connected pointed covers of degree `d` correspond one-to-one with
//! subgroups of index `d` in `F_n`. They are generated directly in standard
//! form (sheets numbered in order of first appearance, see
//! [`CoverGraph::standard_form`]) by filling a coset table column by column
//! and backtracking, so each subgroup is produced exactly once.

use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cover::{is_connected, is_normal, lift_check, CoverGraph};
use crate::error::{Error, Result};
use crate::family::{criterion, FamilySpec};
use crate::perm::Permutation;
use crate::word::FreeWord;

/// Default cap on search nodes (or raw tuples) per enumeration.
pub const DEFAULT_BUDGET: u64 = 100_000_000;
/// Default largest degree tried by [`min_nonlift_degree`].
pub const DEFAULT_DMAX: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusQuery {
    pub rank: usize,
    pub degree: usize,
    /// Keep only connected covers, one per subgroup. When false, every
    /// labelled tuple of permutations with base 0 is listed.
    pub require_connected: bool,
    pub require_normal: bool,
    /// One representative per isomorphism class, base point ignored.
    pub up_to_iso: bool,
    pub budget: u64,
}

impl CensusQuery {
    pub fn connected(rank: usize, degree: usize) -> Self {
        CensusQuery {
            rank,
            degree,
            require_connected: true,
            require_normal: false,
            up_to_iso: false,
            budget: DEFAULT_BUDGET,
        }
    }
}

struct CosetSearch<'a, F> {
    rank: usize,
    degree: usize,
    width: usize,
    table: Vec<usize>,
    used: usize,
    nodes: u64,
    budget: u64,
    visit: &'a mut F,
}

const UNSET: usize = usize::MAX;

impl<F: FnMut(CoverGraph) -> ControlFlow<()>> CosetSearch<'_, F> {
    fn run(&mut self, from: usize) -> Result<ControlFlow<()>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                lower_bound: self.degree - 1,
                reason: format!(
                    "more than {} search nodes at degree {}",
                    self.budget, self.degree
                ),
            });
        }
        let live = self.used * self.width;
        let Some(pos) = (from..live).find(|&i| self.table[i] == UNSET) else {
            if self.used == self.degree {
                let cover = self.emit();
                return Ok((self.visit)(cover));
            }
            return Ok(ControlFlow::Continue(()));
        };
        let (row, col) = (pos / self.width, pos % self.width);
        let back = col ^ 1;
        for target in 0..self.used {
            let mirror = target * self.width + back;
            if self.table[mirror] != UNSET {
                continue;
            }
            self.table[pos] = target;
            self.table[mirror] = row;
            let flow = self.run(pos + 1);
            self.table[pos] = UNSET;
            self.table[mirror] = UNSET;
            if flow?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        if self.used < self.degree {
            let target = self.used;
            self.used += 1;
            let mirror = target * self.width + back;
            self.table[pos] = target;
            self.table[mirror] = row;
            let flow = self.run(pos + 1);
            self.table[pos] = UNSET;
            self.table[mirror] = UNSET;
            self.used -= 1;
            if flow?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    fn emit(&self) -> CoverGraph {
        let perms = (0..self.rank)
            .map(|g| {
                let images = (0..self.degree)
                    .map(|s| self.table[s * self.width + 2 * g])
                    .collect();
                Permutation::from_images(images).expect("complete coset table")
            })
            .collect();
        CoverGraph::new(perms, 0).expect("complete coset table")
    }
}

/// Calls `visit` once per connected pointed cover of the given degree (in
/// standard form, base 0) until it breaks. Order is the search order, not
/// lexicographic.
pub fn for_each_connected_cover<F>(
    rank: usize,
    degree: usize,
    budget: u64,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(CoverGraph) -> ControlFlow<()>,
{
    if rank == 0 {
        return Err(Error::ZeroRank);
    }
    if degree == 0 {
        return Err(Error::ZeroDegree);
    }
    let width = 2 * rank;
    let mut search = CosetSearch {
        rank,
        degree,
        width,
        table: vec![UNSET; degree * width],
        used: 1,
        nodes: 0,
        budget,
        visit: &mut visit,
    };
    search.run(0).map(|_| ())
}

/// All permutations of `0..len` in lexicographic order.
fn all_permutations(len: usize) -> Vec<Permutation> {
    let mut current: Vec<usize> = (0..len).collect();
    let mut out = vec![Permutation::from_images(current.clone()).expect("identity")];
    loop {
        let Some(i) = (1..len).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..len)
            .rev()
            .find(|&j| current[j] > current[i - 1])
            .expect("pivot exists");
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(Permutation::from_images(current.clone()).expect("permutation"));
    }
}

fn tuple_key(c: &CoverGraph) -> (&[Permutation], usize) {
    (c.perms(), c.base())
}

fn connected_iso_representative(c: &CoverGraph) -> bool {
    (1..c.degree()).all(|b| {
        let other = c
            .with_base(b)
            .and_then(|moved| moved.standard_form())
            .expect("connected");
        tuple_key(&other) >= tuple_key(c)
    })
}

fn labelled_iso_representative(c: &CoverGraph, relabelings: &[Permutation]) -> bool {
    relabelings.iter().all(|p| {
        let other = c
            .relabel(p.images())
            .expect("bijection")
            .with_base(0)
            .expect("base 0");
        other.perms() >= c.perms()
    })
}

/// All covers matching the query, base fixed at sheet 0, sorted
/// lexicographically by their permutation tuples.
pub fn enumerate_covers(q: &CensusQuery) -> Result<Vec<CoverGraph>> {
    if q.rank == 0 {
        return Err(Error::ZeroRank);
    }
    if q.degree == 0 {
        return Err(Error::ZeroDegree);
    }
    let mut covers = if q.require_connected {
        let mut all = Vec::new();
        for_each_connected_cover(q.rank, q.degree, q.budget, |c| {
            all.push(c);
            ControlFlow::Continue(())
        })?;
        all
    } else {
        labelled_tuples(q)?
    };

    // Cheaper connectivity first, then normality.
    covers = covers
        .into_par_iter()
        .filter(|c| !q.require_normal || (is_connected(c) && is_normal(c).unwrap_or(false)))
        .collect();
    if q.up_to_iso {
        if q.require_connected {
            covers = covers
                .into_par_iter()
                .filter(connected_iso_representative)
                .collect();
        } else {
            let relabelings = all_permutations(q.degree);
            covers = covers
                .into_par_iter()
                .filter(|c| labelled_iso_representative(c, &relabelings))
                .collect();
        }
    }
    covers.par_sort_by(|a, b| tuple_key(a).cmp(&tuple_key(b)));
    Ok(covers)
}

fn labelled_tuples(q: &CensusQuery) -> Result<Vec<CoverGraph>> {
    let per_color = (1..=q.degree as u64).try_fold(1u64, |acc, x| acc.checked_mul(x));
    let total = per_color.and_then(|f| f.checked_pow(q.rank as u32));
    let over = |why: String| Error::BudgetExceeded {
        lower_bound: q.degree - 1,
        reason: why,
    };
    match total {
        Some(t) if t <= q.budget => {}
        _ => {
            return Err(over(format!(
                "({}!)^{} tuples exceed the budget of {}",
                q.degree, q.rank, q.budget
            )))
        }
    }
    let perms = all_permutations(q.degree);
    let mut index = vec![0usize; q.rank];
    let mut out = Vec::new();
    loop {
        let tuple = index.iter().map(|&i| perms[i].clone()).collect();
        out.push(CoverGraph::new(tuple, 0)?);
        // Odometer with the last colour fastest keeps the output lexicographic.
        let mut g = q.rank;
        loop {
            if g == 0 {
                return Ok(out);
            }
            g -= 1;
            index[g] += 1;
            if index[g] < perms.len() {
                break;
            }
            index[g] = 0;
        }
    }
}

/// Number of connected 2-sheeted covers of the bouquet of `rank` circles,
/// `2^rank - 1` (one per nonzero homomorphism `F_n → Z/2`).
pub fn count_index2(rank: u32) -> Result<u128> {
    if rank == 0 {
        return Err(Error::ZeroRank);
    }
    1u128
        .checked_shl(rank)
        .filter(|_| rank < 128)
        .map(|x| x - 1)
        .ok_or(Error::BudgetExceeded {
            lower_bound: 1,
            reason: format!("2^{rank} does not fit in 128 bits"),
        })
}

/// Smallest degree of a connected cover to which a word fails to lift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RminResult {
    /// `None` for the identity, which lifts everywhere.
    pub r: Option<usize>,
    /// Lexicographically first failing cover of degree `r`.
    pub witness: Option<CoverGraph>,
}

/// Searches degrees `2..=dmax` for a connected cover on which the lift of
/// `w` from the base is not closed. The search is exact: if nothing fails,
/// every cover up to `dmax` has been checked and `r > dmax` is reported as
/// [`Error::BudgetExceeded`].
pub fn min_nonlift_degree(w: &FreeWord, dmax: usize, budget: u64) -> Result<RminResult> {
    if w.is_identity() {
        return Ok(RminResult {
            r: None,
            witness: None,
        });
    }
    for degree in 2..=dmax {
        let mut best: Option<CoverGraph> = None;
        let mut failure = None;
        for_each_connected_cover(w.rank(), degree, budget, |c| match lift_check(w, &c, 0) {
            Ok(report) if report.closed => ControlFlow::Continue(()),
            Ok(_) => {
                if best.as_ref().is_none_or(|b| tuple_key(&c) < tuple_key(b)) {
                    best = Some(c);
                }
                ControlFlow::Continue(())
            }
            Err(e) => {
                failure = Some(e);
                ControlFlow::Break(())
            }
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
        if let Some(witness) = best {
            return Ok(RminResult {
                r: Some(degree),
                witness: Some(witness),
            });
        }
    }
    Err(Error::BudgetExceeded {
        lower_bound: dmax.max(1),
        reason: format!(
            "the word lifts to every connected cover of degree <= {}",
            dmax.max(1)
        ),
    })
}

/// One row of the `a1^2 a2^m` table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonliftRow {
    pub m: i64,
    pub word: String,
    /// `r(a1^2 a2^m) == 2`, computed by exhaustive search.
    pub r_is_two: bool,
    /// Whether the word lifts to `L_2`, computed by the criterion.
    pub lifts_on_l2: bool,
    /// `m - 1`, quoted from the literature and not computed here.
    pub cited_self_intersection: i64,
}

/// For odd `m >= 1`: the words `a1^2 a2^m` have unbounded self-intersection
/// yet all fail to lift to the 2-sheeted cover `L_2`.
pub fn nonlift_family_check(m_values: &[i64]) -> Result<Vec<NonliftRow>> {
    let l2 = FamilySpec::l(2, 2)?;
    m_values
        .iter()
        .map(|&m| {
            if m < 1 || m % 2 == 0 {
                return Err(Error::EvenExponent(m));
            }
            let w = FreeWord::from_blocks(2, [(1, 2), (2, m)])?;
            let rmin = min_nonlift_degree(&w, 2, DEFAULT_BUDGET)?;
            Ok(NonliftRow {
                m,
                word: w.to_string(),
                r_is_two: rmin.r == Some(2),
                lifts_on_l2: criterion(&w, &l2)?,
                cited_self_intersection: m - 1,
            })
        })
        .collect()
}
