//! Finite covers of the bouquet of `n` circles.
//!
//! An `l`-sheeted cover is a directed graph on sheets `0..l` with `n` edge
//! colors where every sheet has exactly one outgoing and one incoming edge
//! of each color. That is the same thing as one permutation of the sheets
//! per generator: `perms[i][s]` is the head of the `a_{i+1}` edge leaving
//! sheet `s`.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::word::FreeWord;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoverGraph {
    degree: usize,
    base: usize,
    perms: Vec<Permutation>,
    // perms[i].inverse(), kept so backward steps are a table lookup.
    inverses: Vec<Permutation>,
}

impl CoverGraph {
    pub fn new(perms: Vec<Permutation>, base: usize) -> Result<Self> {
        let Some(first) = perms.first() else {
            return Err(Error::ZeroRank);
        };
        let degree = first.len();
        if degree == 0 {
            return Err(Error::ZeroDegree);
        }
        if let Some(i) = perms.iter().position(|p| p.len() != degree) {
            return Err(Error::NotABijection {
                color: i + 1,
                degree,
            });
        }
        if base >= degree {
            return Err(Error::SheetOutOfRange {
                sheet: base,
                degree,
            });
        }
        let inverses = perms.iter().map(Permutation::inverse).collect();
        Ok(CoverGraph {
            degree,
            base,
            perms,
            inverses,
        })
    }

    /// Builds from one-line images, one row per generator.
    pub fn from_images(rows: Vec<Vec<usize>>, base: usize) -> Result<Self> {
        let degree = rows.first().map_or(0, Vec::len);
        let mut perms = Vec::with_capacity(rows.len());
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != degree {
                return Err(Error::NotABijection {
                    color: i + 1,
                    degree,
                });
            }
            perms.push(Permutation::from_images(row).ok_or(Error::NotABijection {
                color: i + 1,
                degree,
            })?);
        }
        CoverGraph::new(perms, base)
    }

    /// The one-sheeted cover of `F_rank`.
    pub fn trivial(rank: usize) -> Result<Self> {
        CoverGraph::new(vec![Permutation::identity(1); rank], 0)
    }

    pub fn rank(&self) -> usize {
        self.perms.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    /// Permutation of the 1-based generator `a_generator`.
    pub fn perm(&self, generator: usize) -> &Permutation {
        &self.perms[generator - 1]
    }

    pub fn with_base(&self, base: usize) -> Result<Self> {
        if base >= self.degree {
            return Err(Error::SheetOutOfRange {
                sheet: base,
                degree: self.degree,
            });
        }
        Ok(CoverGraph {
            base,
            ..self.clone()
        })
    }

    fn check_word(&self, w: &FreeWord, start: usize) -> Result<()> {
        if w.rank() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                found: w.rank(),
            });
        }
        if start >= self.degree {
            return Err(Error::SheetOutOfRange {
                sheet: start,
                degree: self.degree,
            });
        }
        Ok(())
    }

    /// Follows `a_generator^exponent` from `sheet`. Exponents at least as
    /// large as the degree are first reduced modulo the length of the
    /// cycle through `sheet`, so each block costs `O(degree)`.
    #[inline]
    pub fn step(&self, sheet: usize, generator: usize, exponent: i64) -> usize {
        let perm = if exponent >= 0 {
            &self.perms[generator - 1]
        } else {
            &self.inverses[generator - 1]
        };
        let mut count = exponent.unsigned_abs();
        if count >= self.degree as u64 {
            count %= perm.cycle_len(sheet) as u64;
        }
        let mut s = sheet;
        for _ in 0..count {
            s = perm.apply(s);
        }
        s
    }

    /// The monodromy of `w` as a whole permutation, composed left to right
    /// over the blocks. Block powers use repeated squaring.
    pub fn monodromy(&self, w: &FreeWord) -> Result<Permutation> {
        self.check_word(w, self.base)?;
        Ok(w.blocks()
            .iter()
            .fold(Permutation::identity(self.degree), |acc, b| {
                acc.then(&self.perms[b.generator - 1].pow(b.exponent))
            }))
    }

    /// Colour-preserving relabelling: sheet `s` becomes `mapping[s]`.
    pub fn relabel(&self, mapping: &[usize]) -> Result<Self> {
        let inverse = Permutation::from_images(mapping.to_vec())
            .filter(|p| p.len() == self.degree)
            .ok_or(Error::NotABijection {
                color: 0,
                degree: self.degree,
            })?
            .inverse();
        let perms = self
            .perms
            .iter()
            .map(|p| {
                let images = (0..self.degree)
                    .map(|t| mapping[p.apply(inverse.apply(t))])
                    .collect();
                Permutation::from_images(images).expect("conjugate of a bijection")
            })
            .collect();
        CoverGraph::new(perms, mapping[self.base])
    }

    /// Relabels sheets in breadth-first order from the base, scanning
    /// `a1, a1^-1, a2, a2^-1, ..` at each sheet. Two connected pointed covers
    /// are isomorphic (fixing the base) iff their standard forms are equal.
    pub fn standard_form(&self) -> Result<Self> {
        let mut mapping = vec![usize::MAX; self.degree];
        let mut order = Vec::with_capacity(self.degree);
        mapping[self.base] = 0;
        order.push(self.base);
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            i += 1;
            for g in 0..self.rank() {
                for t in [self.perms[g].apply(s), self.inverses[g].apply(s)] {
                    if mapping[t] == usize::MAX {
                        mapping[t] = order.len();
                        order.push(t);
                    }
                }
            }
        }
        if order.len() != self.degree {
            return Err(Error::Disconnected);
        }
        self.relabel(&mapping)
    }

    /// The colour-preserving map sending `from` in `self` to `to` in `other`,
    /// if one exists. Requires `self` to be connected.
    fn extend_isomorphism(&self, other: &CoverGraph, from: usize, to: usize) -> Option<Vec<usize>> {
        let l = self.degree;
        let mut map = vec![usize::MAX; l];
        let mut used = vec![false; l];
        map[from] = to;
        used[to] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            for g in 0..self.rank() {
                let pairs = [
                    (&self.perms[g], &other.perms[g]),
                    (&self.inverses[g], &other.inverses[g]),
                ];
                for (mine, theirs) in pairs {
                    let y = mine.apply(x);
                    let image = theirs.apply(map[x]);
                    if map[y] == usize::MAX {
                        if used[image] {
                            return None;
                        }
                        map[y] = image;
                        used[image] = true;
                        queue.push_back(y);
                    } else if map[y] != image {
                        return None;
                    }
                }
            }
        }
        map.iter().all(|&t| t != usize::MAX).then_some(map)
    }

    /// Isomorphic as coloured directed graphs, base points ignored.
    pub fn is_isomorphic(&self, other: &CoverGraph) -> Result<bool> {
        if self.rank() != other.rank() || self.degree != other.degree {
            return Ok(false);
        }
        if !is_connected(self) || !is_connected(other) {
            return Err(Error::Disconnected);
        }
        Ok((0..self.degree).any(|t| self.extend_isomorphism(other, 0, t).is_some()))
    }
}

/// One traversed edge: leaving `sheet` along `a_generator`, forwards or
/// against the edge direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub sheet: usize,
    pub generator: usize,
    pub forward: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftReport {
    pub closed: bool,
    pub start_sheet: usize,
    pub end_sheet: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub visited_path: Option<Vec<Step>>,
}

/// Lifts `w` to `cover` starting at sheet `start`. The lift is closed iff it
/// ends where it began.
pub fn lift_check(w: &FreeWord, cover: &CoverGraph, start: usize) -> Result<LiftReport> {
    cover.check_word(w, start)?;
    let end = w
        .blocks()
        .iter()
        .fold(start, |s, b| cover.step(s, b.generator, b.exponent));
    Ok(LiftReport {
        closed: end == start,
        start_sheet: start,
        end_sheet: end,
        visited_path: None,
    })
}

/// Like [`lift_check`], also recording every edge walked. The path has one
/// entry per unit of exponent, so keep exponents small.
pub fn lift_trace(w: &FreeWord, cover: &CoverGraph, start: usize) -> Result<LiftReport> {
    cover.check_word(w, start)?;
    let mut path = Vec::new();
    let mut s = start;
    for b in w.blocks() {
        let forward = b.exponent > 0;
        for _ in 0..b.exponent.unsigned_abs() {
            path.push(Step {
                sheet: s,
                generator: b.generator,
                forward,
            });
            s = cover.step(s, b.generator, if forward { 1 } else { -1 });
        }
    }
    Ok(LiftReport {
        closed: s == start,
        start_sheet: start,
        end_sheet: s,
        visited_path: Some(path),
    })
}

/// Whether the underlying undirected graph has a single component.
pub fn is_connected(cover: &CoverGraph) -> bool {
    let mut seen = vec![false; cover.degree];
    seen[0] = true;
    let mut stack = vec![0];
    let mut count = 1;
    while let Some(s) = stack.pop() {
        for g in 0..cover.rank() {
            for t in [cover.perms[g].apply(s), cover.inverses[g].apply(s)] {
                if !seen[t] {
                    seen[t] = true;
                    count += 1;
                    stack.push(t);
                }
            }
        }
    }
    count == cover.degree
}

/// A connected cover is normal iff its deck group acts transitively on the
/// sheets: for every sheet there is a colour-preserving automorphism taking
/// the base there.
pub fn is_normal(cover: &CoverGraph) -> Result<bool> {
    if !is_connected(cover) {
        return Err(Error::Disconnected);
    }
    Ok((0..cover.degree).all(|s| cover.extend_isomorphism(cover, cover.base, s).is_some()))
}

#[derive(Serialize, Deserialize)]
struct CoverDocument {
    n: usize,
    degree: usize,
    base: usize,
    perms: Vec<Vec<usize>>,
}

pub fn to_json(cover: &CoverGraph) -> String {
    serde_json::to_string(&document(cover)).expect("cover serializes")
}

pub fn to_json_value(cover: &CoverGraph) -> serde_json::Value {
    serde_json::to_value(document(cover)).expect("cover serializes")
}

fn document(cover: &CoverGraph) -> CoverDocument {
    CoverDocument {
        n: cover.rank(),
        degree: cover.degree,
        base: cover.base,
        perms: cover.perms.iter().map(|p| p.images().to_vec()).collect(),
    }
}

pub fn from_json(text: &str) -> Result<CoverGraph> {
    let doc: CoverDocument = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    from_document(doc)
}

pub fn from_json_value(value: serde_json::Value) -> Result<CoverGraph> {
    let doc: CoverDocument =
        serde_json::from_value(value).map_err(|e| Error::Json(e.to_string()))?;
    from_document(doc)
}

fn from_document(doc: CoverDocument) -> Result<CoverGraph> {
    if doc.n == 0 {
        return Err(Error::ZeroRank);
    }
    if doc.degree == 0 {
        return Err(Error::ZeroDegree);
    }
    if doc.perms.len() != doc.n {
        return Err(Error::Json(format!(
            "expected {} permutations, found {}",
            doc.n,
            doc.perms.len()
        )));
    }
    for (i, row) in doc.perms.iter().enumerate() {
        if row.len() != doc.degree {
            return Err(Error::NotABijection {
                color: i + 1,
                degree: doc.degree,
            });
        }
    }
    CoverGraph::from_images(doc.perms, doc.base)
}

const PALETTE: [&str; 8] = [
    "red",
    "blue",
    "darkgreen",
    "orange",
    "purple",
    "brown",
    "magenta",
    "cyan",
];

/// Graphviz rendering: nodes `v1..vl` (the base is drawn double), one
/// coloured edge per sheet and generator labelled `a<i>`.
pub fn to_dot(cover: &CoverGraph) -> String {
    let mut out = String::from("digraph cover {\n  node [shape=circle];\n");
    for s in 0..cover.degree {
        let shape = if s == cover.base {
            ", shape=doublecircle"
        } else {
            ""
        };
        let _ = writeln!(out, "  v{0} [label=\"v{0}\"{shape}];", s + 1);
    }
    for (g, perm) in cover.perms.iter().enumerate() {
        let color = PALETTE[g % PALETTE.len()];
        for s in 0..cover.degree {
            let _ = writeln!(
                out,
                "  v{} -> v{} [label=\"a{}\", color=\"{color}\", fontcolor=\"{color}\"];",
                s + 1,
                perm.apply(s) + 1,
                g + 1
            );
        }
    }
    out.push_str("}\n");
    out
}
