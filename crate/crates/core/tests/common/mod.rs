//! Oracles shared by the integration tests. Nothing here calls into the
//! crate's own enumeration or normality code.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use bouquet_covers::{lift_check, Block, CoverGraph, FamilySpec, FreeWord, Permutation};
use rand::Rng;

/// Walks `word` (as `(generator, exponent)` pairs) from `start` one edge at
/// a time, using raw image tables.
pub fn walk(images: &[Vec<usize>], start: usize, word: &[(usize, i64)]) -> usize {
    let inverses: Vec<Vec<usize>> = images
        .iter()
        .map(|row| {
            let mut inv = vec![0; row.len()];
            for (s, &t) in row.iter().enumerate() {
                inv[t] = s;
            }
            inv
        })
        .collect();
    let mut s = start;
    for &(g, m) in word {
        let table = if m > 0 {
            &images[g - 1]
        } else {
            &inverses[g - 1]
        };
        for _ in 0..m.unsigned_abs() {
            s = table[s];
        }
    }
    s
}

fn rows(c: &CoverGraph) -> Vec<Vec<usize>> {
    c.perms().iter().map(|p| p.images().to_vec()).collect()
}

fn inverse_word(w: &[(usize, i64)]) -> Vec<(usize, i64)> {
    w.iter().rev().map(|&(g, m)| (g, -m)).collect()
}

/// Normality by conjugation: the stabilizer `H` of the base sheet is normal
/// iff `x h x^-1` lies in `H` for every Schreier generator `h` of `H` and
/// every `x` in `{a_i, a_i^-1}`. Assumes the cover is connected.
pub fn is_normal_oracle(c: &CoverGraph) -> bool {
    let images = rows(c);
    let l = c.degree();
    let base = c.base();
    // Spanning tree: a path word from the base to every sheet.
    let mut path: Vec<Option<Vec<(usize, i64)>>> = vec![None; l];
    path[base] = Some(Vec::new());
    let mut queue = VecDeque::from([base]);
    while let Some(s) = queue.pop_front() {
        for g in 1..=c.rank() {
            for m in [1, -1] {
                let t = walk(&images, s, &[(g, m)]);
                if path[t].is_none() {
                    let mut p = path[s].clone().expect("visited");
                    p.push((g, m));
                    path[t] = Some(p);
                    queue.push_back(t);
                }
            }
        }
    }
    assert!(
        path.iter().all(Option::is_some),
        "oracle needs a connected cover"
    );
    let path: Vec<_> = path.into_iter().map(Option::unwrap).collect();
    for s in 0..l {
        for g in 1..=c.rank() {
            let t = images[g - 1][s];
            let mut h = path[s].clone();
            h.push((g, 1));
            h.extend(inverse_word(&path[t]));
            debug_assert_eq!(walk(&images, base, &h), base);
            for x in 1..=c.rank() {
                for sign in [1, -1] {
                    let mut conj = vec![(x, sign)];
                    conj.extend(h.iter().copied());
                    conj.push((x, -sign));
                    if walk(&images, base, &conj) != base {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Transitivity by flood fill over raw image tables.
pub fn is_transitive(images: &[Vec<usize>]) -> bool {
    let l = images[0].len();
    let mut seen = vec![false; l];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(s) = stack.pop() {
        for row in images {
            for t in [row[s], row.iter().position(|&x| x == s).unwrap()] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
    }
    seen.iter().all(|&b| b)
}

/// All permutations of `0..d`, by insertion.
pub fn permutations(d: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for x in 0..d {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..=p.len()).map(move |i| {
                    let mut q = p.clone();
                    q.insert(i, x);
                    q
                })
            })
            .collect();
    }
    out
}

/// Every transitive `n`-tuple of permutations of `d` sheets.
pub fn transitive_tuples(n: usize, d: usize) -> Vec<Vec<Vec<usize>>> {
    let perms = permutations(d);
    let mut tuples: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for _ in 0..n {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                perms.iter().map(move |p| {
                    let mut t = t.clone();
                    t.push(p.clone());
                    t
                })
            })
            .collect();
    }
    tuples.into_iter().filter(|t| is_transitive(t)).collect()
}

fn factorial(k: u128) -> u128 {
    (1..=k).product()
}

/// Number of index-`d` subgroups of the free group of rank `n`, by Hall's
/// recursion `a_d = d (d!)^(n-1) - sum_{k<d} ((d-k)!)^(n-1) a_k`.
pub fn hall_count(n: u32, d: usize) -> u128 {
    let mut a: Vec<i128> = vec![0];
    for dd in 1..=d {
        let mut v = dd as i128 * (factorial(dd as u128) as i128).pow(n - 1);
        for (k, ak) in a.iter().enumerate().skip(1) {
            v -= (factorial((dd - k) as u128) as i128).pow(n - 1) * ak;
        }
        a.push(v);
    }
    a[d] as u128
}

/// Index-`p` normal subgroups of `F_n` for prime `p`: the kernels of the
/// nonzero maps onto `Z/p` up to scaling, `(p^n - 1) / (p - 1)`.
pub fn normal_prime_index_count(n: u32, p: u128) -> u128 {
    (p.pow(n) - 1) / (p - 1)
}

/// Every family cover of the given degrees: `L`, `L2` at degree 2, and at
/// odd `l` every `M_u` plus all four two-generator variants over every pair
/// `u < v` with `1 <= k <= (l-1)/2`.
pub fn family_specs(n: usize, degrees: &[u64]) -> Vec<FamilySpec> {
    let mut out = Vec::new();
    for &l in degrees {
        if l == 2 {
            for i in 1..=n {
                out.push(FamilySpec::l(n, i).unwrap());
                for j in i + 1..=n {
                    out.push(FamilySpec::l2(n, i, j).unwrap());
                }
            }
            continue;
        }
        for u in 1..=n {
            out.push(FamilySpec::m(n, l, u).unwrap());
            for v in u + 1..=n {
                for k in 1..=(l - 1) / 2 {
                    out.push(FamilySpec::muv(n, l, u, v, k).unwrap());
                    out.push(FamilySpec::nuv(n, l, u, v, k).unwrap());
                    out.push(FamilySpec::mvu(n, l, u, v, k).unwrap());
                    out.push(FamilySpec::nvu(n, l, u, v, k).unwrap());
                }
            }
        }
    }
    out
}

/// Callbacks for [`for_each_word`].
pub trait Sweep {
    fn push(&mut self, b: Block);
    fn pop(&mut self, b: Block);
    fn word(&mut self, blocks: &[Block]);
}

/// Depth-first over all reduced words with at most `syllables` blocks and
/// exponents in `[-e, e]`, the empty word included.
pub fn for_each_word<S: Sweep>(n: usize, syllables: usize, e: i64, sweep: &mut S) {
    fn go<S: Sweep>(n: usize, left: usize, e: i64, stack: &mut Vec<Block>, sweep: &mut S) {
        sweep.word(stack);
        if left == 0 {
            return;
        }
        let last = stack.last().map(|b| b.generator);
        for g in (1..=n).filter(|&g| Some(g) != last) {
            for m in (-e..=e).filter(|&m| m != 0) {
                let b = Block::new(g, m);
                stack.push(b);
                sweep.push(b);
                go(n, left - 1, e, stack, sweep);
                sweep.pop(b);
                stack.pop();
            }
        }
    }
    go(n, syllables, e, &mut Vec::new(), sweep);
}

pub fn to_word(n: usize, blocks: &[Block]) -> FreeWord {
    FreeWord::from_blocks(n, blocks.iter().map(|b| (b.generator, b.exponent))).unwrap()
}

/// Follows the monodromy of a growing prefix on many covers at once. Each
/// cover's monodromy group is closed up from the permutations of single
/// blocks, which are read off `lift_check`; a prefix is then one group
/// element per cover.
pub struct Monodromy {
    e: i64,
    columns: usize,
    mul: Vec<Vec<u32>>,
    fixed: Vec<Vec<u64>>,
    bases: Vec<usize>,
    /// One group element per cover for each applied prefix, flattened.
    stack: Vec<u32>,
    pending: Option<Block>,
}

impl Monodromy {
    pub fn new(covers: &[CoverGraph], e: i64) -> Self {
        let n = covers[0].rank();
        let columns = n * (2 * e as usize + 1);
        let mut mul = Vec::new();
        let mut fixed = Vec::new();
        for c in covers {
            assert!(c.degree() <= 64);
            let mut blocks = Vec::new();
            for g in 1..=n {
                for m in -e..=e {
                    let w = FreeWord::from_blocks(n, [(g, m)]).unwrap();
                    let images = (0..c.degree())
                        .map(|s| lift_check(&w, c, s).unwrap().end_sheet)
                        .collect();
                    blocks.push(Permutation::from_images(images).expect("blocks act bijectively"));
                }
            }
            let mut elements = vec![Permutation::identity(c.degree())];
            let mut index = HashMap::from([(elements[0].clone(), 0u32)]);
            let mut table = Vec::new();
            let mut i = 0;
            while i < elements.len() {
                for b in &blocks {
                    let next = elements[i].then(b);
                    let id = *index.entry(next.clone()).or_insert_with(|| {
                        elements.push(next);
                        elements.len() as u32 - 1
                    });
                    table.push(id);
                }
                i += 1;
                assert!(elements.len() <= 1 << 16, "monodromy group too large");
            }
            fixed.push(
                elements
                    .iter()
                    .map(|p| {
                        (0..c.degree())
                            .filter(|&s| p.apply(s) == s)
                            .map(|s| 1u64 << s)
                            .sum()
                    })
                    .collect(),
            );
            mul.push(table);
        }
        Monodromy {
            e,
            columns,
            mul,
            fixed,
            bases: covers.iter().map(|c| c.base()).collect(),
            stack: vec![0; covers.len()],
            pending: None,
        }
    }

    fn column(&self, b: Block) -> usize {
        (b.generator - 1) * (2 * self.e as usize + 1) + (b.exponent + self.e) as usize
    }

    /// The newest block is kept pending and only applied to the covers that
    /// are asked about, so leaves of the search cost nothing up front.
    pub fn push(&mut self, b: Block) {
        if let Some(p) = self.pending.replace(b) {
            let k = self.mul.len();
            let top = self.stack.len() - k;
            let col = self.column(p);
            for i in 0..k {
                let e = self.stack[top + i] as usize;
                self.stack.push(self.mul[i][e * self.columns + col]);
            }
        }
    }

    pub fn pop(&mut self) {
        if self.pending.take().is_none() {
            self.stack.truncate(self.stack.len() - self.mul.len());
        }
    }

    fn element(&self, i: usize) -> usize {
        let e = self.stack[self.stack.len() - self.mul.len() + i] as usize;
        match self.pending {
            Some(b) => self.mul[i][e * self.columns + self.column(b)] as usize,
            None => e,
        }
    }

    /// Bit set of the start sheets from which the current word closes up.
    pub fn closed_from(&self, i: usize) -> u64 {
        self.fixed[i][self.element(i)]
    }

    pub fn closed_from_base(&self, i: usize) -> bool {
        self.closed_from(i) >> self.bases[i] & 1 == 1
    }
}

/// Running exponent sums with a cell index into the box of all sums the
/// corpus can produce, for caching anything that depends on sums alone.
pub struct SumBox {
    pub sums: Vec<i64>,
    radius: i64,
    pub cell: usize,
}

impl SumBox {
    pub fn new(n: usize, syllables: usize, e: i64) -> Self {
        // In a reduced word a generator fills at most every other syllable.
        let radius = if n == 1 {
            e
        } else {
            syllables.div_ceil(2) as i64 * e
        };
        let mut b = SumBox {
            sums: vec![0; n],
            radius,
            cell: 0,
        };
        b.cell = (0..n).map(|g| radius as usize * b.stride(g)).sum();
        b
    }

    fn stride(&self, g: usize) -> usize {
        (2 * self.radius as usize + 1).pow(g as u32)
    }

    pub fn cells(&self) -> usize {
        (2 * self.radius as usize + 1).pow(self.sums.len() as u32)
    }

    pub fn push(&mut self, b: Block) {
        self.sums[b.generator - 1] += b.exponent;
        self.cell = (self.cell as i64 + b.exponent * self.stride(b.generator - 1) as i64) as usize;
    }

    pub fn pop(&mut self, b: Block) {
        self.sums[b.generator - 1] -= b.exponent;
        self.cell = (self.cell as i64 - b.exponent * self.stride(b.generator - 1) as i64) as usize;
    }
}

/// A random reduced word: up to `max_blocks` blocks, exponents in
/// `[-max_exp, max_exp]`.
pub fn random_word<R: Rng>(rng: &mut R, n: usize, max_blocks: usize, max_exp: i64) -> FreeWord {
    let len = rng.gen_range(0..=max_blocks);
    let mut blocks: Vec<(usize, i64)> = Vec::with_capacity(len);
    while blocks.len() < len {
        let g = rng.gen_range(1..=n);
        if blocks.last().is_some_and(|&(h, _)| h == g) {
            continue;
        }
        let m = loop {
            let m = rng.gen_range(-max_exp..=max_exp);
            if m != 0 {
                break m;
            }
        };
        blocks.push((g, m));
    }
    FreeWord::from_blocks(n, blocks).unwrap()
}

/// Distinct covers up to relabelling sheets (base ignored), by brute force.
pub fn iso_classes(covers: &[CoverGraph]) -> usize {
    let mut seen: HashSet<Vec<Vec<usize>>> = HashSet::new();
    let mut classes = 0;
    for c in covers {
        let images = rows(c);
        let l = c.degree();
        let relabelled: Vec<_> = permutations(l)
            .into_iter()
            .map(|phi| {
                let mut inv = vec![0; l];
                for (s, &t) in phi.iter().enumerate() {
                    inv[t] = s;
                }
                images
                    .iter()
                    .map(|row| (0..l).map(|t| phi[row[inv[t]]]).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            })
            .collect();
        if !relabelled.iter().any(|r| seen.contains(r)) {
            classes += 1;
        }
        seen.extend(relabelled);
    }
    classes
}
