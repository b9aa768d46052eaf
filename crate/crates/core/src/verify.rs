//! Property sweeps behind `bouquet verify`.
//!
//! Each suite checks one claim over an exhaustive corpus and reports how
//! many cases it looked at and how many failed. Lifting along a word is
//! traced incrementally: the monodromy of every prefix is kept on a stack,
//! so extending a word by one block costs one table lookup per tracked
//! sheet. The block tables come from [`lift_check`] on one-block words.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::census::{
    count_index2, enumerate_covers, min_nonlift_degree, nonlift_family_check, CensusQuery,
};
use crate::corpus::{visit_reduced_words, WordVisitor};
use crate::cover::{is_connected, is_normal, lift_check, CoverGraph};
use crate::family::{build_cover, classify_mod3, criterion, criterion_for_sums, FamilySpec};
use crate::solver::{select_family, solve_lemma};
use crate::word::{Block, ExponentVector, FreeWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Smaller corpora, finishes in well under a second.
    pub quick: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checked: u64,
    pub violations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            checked: 0,
            violations: 0,
            first_violation: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.first_violation.is_none() {
                self.first_violation = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.checked > 0
    }
}

struct Corpus {
    max_syllables: usize,
    max_abs_exponent: i64,
}

impl VerifyConfig {
    fn criterion_corpus(&self) -> Corpus {
        if self.quick {
            Corpus {
                max_syllables: 4,
                max_abs_exponent: 2,
            }
        } else {
            Corpus {
                max_syllables: 6,
                max_abs_exponent: 4,
            }
        }
    }

    fn solver_corpus(&self) -> Corpus {
        if self.quick {
            Corpus {
                max_syllables: 4,
                max_abs_exponent: 3,
            }
        } else {
            Corpus {
                max_syllables: 6,
                max_abs_exponent: 5,
            }
        }
    }
}

const FAMILY_DEGREES: [u64; 5] = [2, 3, 5, 7, 9];
const PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

/// Every family cover over every pair `u < v` of a rank-`rank` group for
/// the given degrees. The `v,u` variants cover the reversed pairs.
pub fn family_specs(rank: usize, degrees: &[u64]) -> Vec<FamilySpec> {
    let mut specs = Vec::new();
    for &l in degrees {
        for u in 1..=rank {
            for v in u + 1..=rank {
                specs.extend(FamilySpec::all_over_pair(rank, l, u, v).expect("legal pair"));
            }
        }
    }
    specs.sort_by_key(|s| (s.degree(), s.sort_key()));
    specs.dedup();
    specs
}

/// Tracks the monodromy of the current prefix as an element of each
/// cover's monodromy group. The group is closed up from the one-block
/// permutations, read off [`lift_check`], so extending a prefix by a block
/// is one table lookup per cover.
struct GroupTracker {
    columns: usize,
    max_abs_exponent: i64,
    /// `mul[i][e * columns + c]`: element `e` followed by block column `c`.
    mul: Vec<Vec<u32>>,
    /// `fixed[i][e]`: bit `s` is set when element `e` fixes sheet `s`.
    fixed: Vec<Vec<u64>>,
    degrees: Vec<usize>,
    bases: Vec<usize>,
    stack: Vec<u32>,
    depth: usize,
}

/// Bound on the order of a tracked monodromy group.
const GROUP_LIMIT: usize = 1 << 16;

impl GroupTracker {
    fn new(covers: &[CoverGraph], max_abs_exponent: i64) -> std::result::Result<Self, String> {
        let span = 2 * max_abs_exponent as usize + 1;
        let rank = covers.first().map_or(1, |c| c.rank());
        let columns = rank * span;
        let mut mul = Vec::new();
        let mut fixed = Vec::new();
        for c in covers {
            let l = c.degree();
            if l > 64 {
                return Err(format!("degree {l} is too large to track"));
            }
            let mut blocks = Vec::with_capacity(columns);
            for g in 1..=rank {
                for m in -max_abs_exponent..=max_abs_exponent {
                    let w = FreeWord::from_blocks(rank, [(g, m)]).map_err(|e| e.to_string())?;
                    let images = (0..l)
                        .map(|s| {
                            lift_check(&w, c, s)
                                .map(|r| r.end_sheet as u16)
                                .map_err(|e| e.to_string())
                        })
                        .collect::<std::result::Result<Vec<_>, _>>()?;
                    blocks.push(images);
                }
            }
            let identity: Vec<u16> = (0..l as u16).collect();
            let mut elements = vec![identity.clone()];
            let mut index = HashMap::from([(identity, 0u32)]);
            let mut table = Vec::new();
            let mut e = 0;
            while e < elements.len() {
                for block in &blocks {
                    let next: Vec<u16> = elements[e].iter().map(|&s| block[s as usize]).collect();
                    let id = match index.get(&next) {
                        Some(&id) => id,
                        None => {
                            if elements.len() == GROUP_LIMIT {
                                return Err(format!("monodromy group of {c:?} is too large"));
                            }
                            let id = elements.len() as u32;
                            index.insert(next.clone(), id);
                            elements.push(next);
                            id
                        }
                    };
                    table.push(id);
                }
                e += 1;
            }
            let fixes = elements
                .iter()
                .map(|el| {
                    el.iter()
                        .enumerate()
                        .filter(|&(s, &t)| s == t as usize)
                        .fold(0u64, |acc, (s, _)| acc | 1 << s)
                })
                .collect();
            mul.push(table);
            fixed.push(fixes);
        }
        Ok(GroupTracker {
            columns,
            max_abs_exponent,
            mul,
            fixed,
            degrees: covers.iter().map(|c| c.degree()).collect(),
            bases: covers.iter().map(|c| c.base()).collect(),
            stack: vec![0; covers.len()],
            depth: 0,
        })
    }

    fn push(&mut self, block: Block) {
        let k = self.mul.len();
        let column = (block.generator - 1) * (2 * self.max_abs_exponent as usize + 1)
            + (block.exponent + self.max_abs_exponent) as usize;
        let d = self.depth;
        self.stack.resize((d + 2) * k, 0);
        for i in 0..k {
            let e = self.stack[d * k + i] as usize;
            self.stack[(d + 1) * k + i] = self.mul[i][e * self.columns + column];
        }
        self.depth += 1;
    }

    fn pop(&mut self) {
        self.depth -= 1;
    }

    /// Sheets fixed by the current prefix on cover `i`, as a bit set.
    fn fixed_sheets(&self, i: usize) -> u64 {
        let e = self.stack[self.depth * self.mul.len() + i] as usize;
        self.fixed[i][e]
    }

    fn closed_from_base(&self, i: usize) -> bool {
        self.fixed_sheets(i) >> self.bases[i] & 1 == 1
    }

    fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }
}

/// Running exponent sums, plus their position in a box large enough for
/// every word of the corpus. Anything computed from the sums alone is
/// cached per box cell.
struct Sums {
    sums: Vec<i128>,
    bound: i64,
    cell: usize,
}

impl Sums {
    fn new(rank: usize, corpus: &Corpus) -> Self {
        // A generator can occupy at most every other syllable.
        let per_generator = if rank == 1 {
            1
        } else {
            corpus.max_syllables.div_ceil(2)
        };
        let bound = per_generator as i64 * corpus.max_abs_exponent;
        let cell = (0..rank)
            .map(|g| bound as usize * (2 * bound as usize + 1).pow(g as u32))
            .sum();
        Sums {
            sums: vec![0; rank],
            bound,
            cell,
        }
    }

    fn cells(&self) -> usize {
        (2 * self.bound as usize + 1).pow(self.sums.len() as u32)
    }

    fn stride(&self, generator: usize) -> usize {
        (2 * self.bound as usize + 1).pow(generator as u32 - 1)
    }

    fn push(&mut self, b: Block) {
        self.sums[b.generator - 1] += i128::from(b.exponent);
        self.cell = (self.cell as i64 + b.exponent * self.stride(b.generator) as i64) as usize;
    }

    fn pop(&mut self, b: Block) {
        self.sums[b.generator - 1] -= i128::from(b.exponent);
        self.cell = (self.cell as i64 - b.exponent * self.stride(b.generator) as i64) as usize;
    }

    fn vector(&self) -> ExponentVector {
        ExponentVector::new(self.sums.clone()).expect("rank >= 1")
    }
}

fn describe(blocks: &[Block], rank: usize) -> String {
    let w = FreeWord::from_blocks(rank, blocks.iter().map(|b| (b.generator, b.exponent)));
    w.map(|w| format!("\"{w}\""))
        .unwrap_or_else(|e| e.to_string())
}

/// Closed-form criterion against traversal from the base, and, for the same
/// covers, that closedness does not depend on the start sheet.
fn criterion_and_basepoint(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    struct Visitor {
        rank: usize,
        specs: Vec<FamilySpec>,
        tracker: GroupTracker,
        sums: Sums,
        /// Criterion verdicts per box cell, filled on first visit.
        verdicts: Vec<Option<Vec<Option<bool>>>>,
        path: Vec<Block>,
        criterion: SuiteReport,
        basepoint: SuiteReport,
    }
    impl WordVisitor for Visitor {
        fn enter(&mut self, b: Block) {
            self.tracker.push(b);
            self.sums.push(b);
            self.path.push(b);
        }
        fn leave(&mut self) {
            let b = self.path.pop().expect("matched enter");
            self.tracker.pop();
            self.sums.pop(b);
        }
        fn word(&mut self, blocks: &[Block]) {
            let cell = self.sums.cell;
            if self.verdicts[cell].is_none() {
                let sums = self.sums.vector();
                self.verdicts[cell] = Some(
                    self.specs
                        .iter()
                        .map(|s| criterion_for_sums(&sums, s).ok())
                        .collect(),
                );
            }
            let verdicts = self.verdicts[cell].as_ref().expect("filled above");
            for (i, spec) in self.specs.iter().enumerate() {
                let by_traversal = self.tracker.closed_from_base(i);
                let by_formula = verdicts[i];
                let rank = self.rank;
                self.criterion.record(by_formula == Some(by_traversal), || {
                    format!(
                        "{} on {spec}: criterion {by_formula:?}, traversal {by_traversal}",
                        describe(blocks, rank)
                    )
                });
                let fixed = self.tracker.fixed_sheets(i).count_ones() as usize;
                let l = self.tracker.degree(i);
                self.basepoint.record(fixed == 0 || fixed == l, || {
                    format!(
                        "{} on {spec}: closed from {fixed} of {l} sheets",
                        describe(blocks, rank)
                    )
                });
            }
        }
    }
    let corpus = cfg.criterion_corpus();
    let mut criterion = SuiteReport::new("criterion agrees with traversal");
    let mut basepoint = SuiteReport::new("lift verdict independent of start sheet");
    for rank in [2, 3] {
        let specs = family_specs(rank, &FAMILY_DEGREES);
        let covers: Vec<_> = specs.iter().map(build_cover).collect();
        let tracker = match GroupTracker::new(&covers, corpus.max_abs_exponent) {
            Ok(t) => t,
            Err(e) => {
                criterion.record(false, || e);
                continue;
            }
        };
        let sums = Sums::new(rank, &corpus);
        let mut v = Visitor {
            rank,
            verdicts: vec![None; sums.cells()],
            tracker,
            specs,
            sums,
            path: Vec::new(),
            criterion,
            basepoint,
        };
        visit_reduced_words(rank, corpus.max_syllables, corpus.max_abs_exponent, &mut v);
        criterion = v.criterion;
        basepoint = v.basepoint;
    }
    vec![criterion, basepoint]
}

/// Every word lifts to one of the `2^n - 1` double covers.
fn index_two_totality(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    struct Visitor {
        rank: usize,
        count: usize,
        tracker: GroupTracker,
        report: SuiteReport,
    }
    impl WordVisitor for Visitor {
        fn enter(&mut self, b: Block) {
            self.tracker.push(b);
        }
        fn leave(&mut self) {
            self.tracker.pop();
        }
        fn word(&mut self, blocks: &[Block]) {
            let ok = (0..self.count).any(|i| self.tracker.closed_from_base(i));
            let rank = self.rank;
            self.report.record(ok, || {
                format!("{} lifts to no 2-sheeted cover", describe(blocks, rank))
            });
        }
    }
    let corpus = cfg.criterion_corpus();
    let mut report = SuiteReport::new("every word lifts to a 2-sheeted cover");
    let ranks: &[usize] = if cfg.quick { &[2, 3] } else { &[2, 3, 4] };
    for &rank in ranks {
        let covers = enumerate_covers(&CensusQuery::connected(rank, 2))
            .map_err(|e| e.to_string())
            .and_then(|covers| {
                GroupTracker::new(&covers, corpus.max_abs_exponent).map(|t| (covers.len(), t))
            });
        let (count, tracker) = match covers {
            Ok(found) => found,
            Err(e) => {
                report.record(false, || e);
                continue;
            }
        };
        let mut v = Visitor {
            rank,
            count,
            tracker,
            report,
        };
        visit_reduced_words(rank, corpus.max_syllables, corpus.max_abs_exponent, &mut v);
        report = v.report;
    }
    vec![report]
}

/// The solver's family choice always yields a connected normal cover of
/// degree `p` on which the word closes up.
fn prime_totality(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    type Choice = std::result::Result<usize, String>;
    struct Visitor {
        rank: usize,
        primes: Vec<u64>,
        specs: Vec<FamilySpec>,
        index: HashMap<FamilySpec, usize>,
        sound: Vec<bool>,
        tracker: GroupTracker,
        sums: Sums,
        /// Chosen family per prime, per box cell.
        choices: Vec<Option<Vec<Choice>>>,
        path: Vec<Block>,
        report: SuiteReport,
    }
    impl WordVisitor for Visitor {
        fn enter(&mut self, b: Block) {
            self.tracker.push(b);
            self.sums.push(b);
            self.path.push(b);
        }
        fn leave(&mut self) {
            let b = self.path.pop().expect("matched enter");
            self.tracker.pop();
            self.sums.pop(b);
        }
        fn word(&mut self, blocks: &[Block]) {
            let cell = self.sums.cell;
            if self.choices[cell].is_none() {
                let sums = self.sums.vector();
                let choose = |p: u64| -> Choice {
                    let (spec, _) = select_family(&sums, p, (1, 2)).map_err(|e| e.to_string())?;
                    let i = *self
                        .index
                        .get(&spec)
                        .ok_or_else(|| format!("unexpected family {spec}"))?;
                    if !self.sound[i] {
                        return Err(format!(
                            "{spec} is not a connected normal cover of degree {p}"
                        ));
                    }
                    Ok(i)
                };
                self.choices[cell] = Some(self.primes.iter().map(|&p| choose(p)).collect());
            }
            let choices = self.choices[cell].as_ref().expect("filled above");
            for (&p, choice) in self.primes.iter().zip(choices) {
                let outcome = match choice {
                    Ok(i) if self.tracker.closed_from_base(*i) => Ok(()),
                    Ok(i) => Err(format!("does not lift to {}", self.specs[*i])),
                    Err(e) => Err(e.clone()),
                };
                let rank = self.rank;
                self.report.record(outcome.is_ok(), || {
                    format!(
                        "{} at p = {p}: {}",
                        describe(blocks, rank),
                        outcome.unwrap_err()
                    )
                });
            }
        }
    }
    let corpus = cfg.solver_corpus();
    let mut report = SuiteReport::new("a p-sheeted normal cover exists for every prime p");
    for rank in [2, 3] {
        let mut specs = Vec::new();
        for &p in &PRIMES {
            specs.extend(FamilySpec::all_over_pair(rank, p, 1, 2).expect("legal pair"));
        }
        let covers: Vec<_> = specs.iter().map(build_cover).collect();
        let sound = covers
            .iter()
            .zip(&specs)
            .map(|(c, s)| {
                c.degree() as u64 == s.degree() && is_connected(c) && is_normal(c).unwrap_or(false)
            })
            .collect();
        let tracker = match GroupTracker::new(&covers, corpus.max_abs_exponent) {
            Ok(t) => t,
            Err(e) => {
                report.record(false, || e);
                continue;
            }
        };
        let sums = Sums::new(rank, &corpus);
        let mut v = Visitor {
            rank,
            primes: PRIMES.to_vec(),
            index: specs.iter().enumerate().map(|(i, s)| (*s, i)).collect(),
            specs,
            sound,
            tracker,
            choices: vec![None; sums.cells()],
            sums,
            path: Vec::new(),
            report,
        };
        visit_reduced_words(rank, corpus.max_syllables, corpus.max_abs_exponent, &mut v);
        report = v.report;
    }
    vec![report]
}

/// The degree-3 classification by residues of `(o(a_u), o(a_v))`.
pub const TABLE_MOD3: [[&str; 3]; 3] = [
    ["M:1@3", "M:1@3", "M:1@3"],
    ["M:2@3", "M:1,2^1@3", "N:1,2^1@3"],
    ["M:2@3", "N:1,2^1@3", "M:1,2^1@3"],
];

fn table_mod3(_: &VerifyConfig) -> Vec<SuiteReport> {
    let mut report = SuiteReport::new("degree-3 classification table");
    for (ru, row) in TABLE_MOD3.iter().enumerate() {
        for (rv, expected) in row.iter().enumerate() {
            for shift in -2i64..=2 {
                let (a, b) = (ru as i64 + 3 * shift, rv as i64 - 3 * shift);
                let w = FreeWord::from_blocks(2, [(1, a), (2, b)]).expect("rank 2");
                let outcome = classify_mod3(&w, 1, 2).map(|spec| {
                    let lifts = lift_check(&w, &build_cover(&spec), 0).map(|r| r.closed);
                    (spec.to_string(), criterion(&w, &spec), lifts)
                });
                let ok = matches!(&outcome, Ok((s, Ok(true), Ok(true))) if s == expected);
                report.record(ok, || {
                    format!("residues ({ru}, {rv}) via \"{w}\": got {outcome:?}, want {expected}")
                });
            }
        }
    }
    vec![report]
}

fn lemma(_: &VerifyConfig) -> Vec<SuiteReport> {
    let mut report = SuiteReport::new("modular lemma always has a case");
    for p in [3u64, 5, 7, 11, 13] {
        for a in -20i128..=20 {
            for b in -20i128..=20 {
                let case = solve_lemma(a, b, p);
                let ok = case.as_ref().is_ok_and(|c| c.holds());
                report.record(ok, || format!("a = {a}, b = {b}, p = {p}: {case:?}"));
            }
        }
    }
    vec![report]
}

fn census_index2(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    let mut report = SuiteReport::new("2^n - 1 double covers, all normal");
    let max_rank = if cfg.quick { 4 } else { 5 };
    for rank in 1..=max_rank {
        let covers = enumerate_covers(&CensusQuery::connected(rank, 2)).expect("small census");
        let expected = count_index2(rank as u32).expect("small rank");
        report.record(covers.len() as u128 == expected, || {
            format!("rank {rank}: {} covers, expected {expected}", covers.len())
        });
        for c in &covers {
            report.record(is_normal(c).unwrap_or(false), || {
                format!("rank {rank}: {c:?} not normal")
            });
        }
    }
    vec![report]
}

fn nonlift_family(_: &VerifyConfig) -> Vec<SuiteReport> {
    let mut report = SuiteReport::new("a1^2 a2^m (m odd) fails on L_2, r = 2");
    let l2 = build_cover(&FamilySpec::l(2, 2).expect("rank 2"));
    match nonlift_family_check(&[1, 3, 5, 7, 9]) {
        Ok(rows) => {
            for row in rows {
                let w = FreeWord::from_blocks(2, [(1, 2), (2, row.m)]).expect("rank 2");
                let witness = min_nonlift_degree(&w, 2, crate::census::DEFAULT_BUDGET)
                    .ok()
                    .and_then(|r| r.witness);
                let ok = row.r_is_two && !row.lifts_on_l2 && witness.as_ref() == Some(&l2);
                report.record(ok, || format!("{row:?}"));
            }
        }
        Err(e) => report.record(false, || e.to_string()),
    }
    vec![report]
}

fn family_normality(_: &VerifyConfig) -> Vec<SuiteReport> {
    let mut report = SuiteReport::new("family covers are connected and normal");
    for rank in [2, 3] {
        for spec in family_specs(rank, &FAMILY_DEGREES) {
            let c = build_cover(&spec);
            let ok = c.degree() as u64 == spec.degree()
                && is_connected(&c)
                && is_normal(&c).unwrap_or(false);
            report.record(ok, || format!("{spec}"));
        }
    }
    vec![report]
}

type Suite = fn(&VerifyConfig) -> Vec<SuiteReport>;

/// Runs every suite, in parallel on the current rayon pool. The report
/// order is fixed.
pub fn run_all(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    let suites: [Suite; 8] = [
        criterion_and_basepoint,
        index_two_totality,
        prime_totality,
        table_mod3,
        lemma,
        census_index2,
        nonlift_family,
        family_normality,
    ];
    suites
        .par_iter()
        .map(|suite| suite(cfg))
        .collect::<Vec<_>>()
        .concat()
}
