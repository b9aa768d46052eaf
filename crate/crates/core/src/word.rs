//! Reduced words in the free group `F_n` on generators `a1..an`.
//!
//! A word is kept as a list of exponent blocks `a_g^m` in which adjacent
//! blocks use distinct generators and no exponent is zero. Every
//! constructor freely reduces its input, so two equal group elements always
//! have identical block lists.

use std::fmt;
use std::ops::{Add, Neg};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One syllable `a_generator ^ exponent`. Generator numbers are 1-based,
/// as in `a1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Block {
    pub generator: usize,
    pub exponent: i64,
}

impl Block {
    pub fn new(generator: usize, exponent: i64) -> Self {
        Block {
            generator,
            exponent,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeWord {
    rank: usize,
    blocks: Vec<Block>,
}

impl FreeWord {
    /// The empty word in `F_rank`.
    pub fn identity(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        Ok(FreeWord {
            rank,
            blocks: Vec::new(),
        })
    }

    /// Builds a word from `(generator, exponent)` pairs and freely reduces it.
    pub fn from_blocks<I>(rank: usize, blocks: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, i64)>,
    {
        let mut word = FreeWord::identity(rank)?;
        for (generator, exponent) in blocks {
            word.push(Block::new(generator, exponent))?;
        }
        Ok(word)
    }

    /// The single letter `a_generator`.
    pub fn generator(rank: usize, generator: usize) -> Result<Self> {
        FreeWord::from_blocks(rank, [(generator, 1)])
    }

    // Stack-based free reduction: merging into the top block can cancel it,
    // which exposes the previous block for the next merge.
    fn push(&mut self, block: Block) -> Result<()> {
        if block.generator == 0 || block.generator > self.rank {
            return Err(Error::GeneratorOutOfRange {
                index: block.generator,
                rank: self.rank,
            });
        }
        if block.exponent == 0 {
            return Ok(());
        }
        match self.blocks.last_mut() {
            Some(top) if top.generator == block.generator => {
                let merged = top
                    .exponent
                    .checked_add(block.exponent)
                    .ok_or(Error::ExponentOverflow)?;
                if merged == 0 {
                    self.blocks.pop();
                } else {
                    top.exponent = merged;
                }
            }
            _ => self.blocks.push(block),
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn is_identity(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Number of two-syllable blocks `a_i^p a_j^q` needed to spell the word,
    /// i.e. the syllable count halved and rounded up.
    pub fn block_length(&self) -> usize {
        self.blocks.len().div_ceil(2)
    }

    pub fn inverse(&self) -> Result<Self> {
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for b in self.blocks.iter().rev() {
            let exponent = b.exponent.checked_neg().ok_or(Error::ExponentOverflow)?;
            blocks.push(Block::new(b.generator, exponent));
        }
        Ok(FreeWord {
            rank: self.rank,
            blocks,
        })
    }

    /// Concatenation followed by free reduction.
    pub fn concat(&self, other: &FreeWord) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: other.rank,
            });
        }
        let mut word = self.clone();
        for &b in &other.blocks {
            word.push(b)?;
        }
        Ok(word)
    }

    pub fn exponent_sums(&self) -> ExponentVector {
        let mut sums = vec![0i128; self.rank];
        for b in &self.blocks {
            sums[b.generator - 1] += i128::from(b.exponent);
        }
        ExponentVector { sums }
    }
}

/// Renders in the input grammar: `a1^2 a2^-3 a1`. The identity renders as
/// the empty string.
impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "a{}", b.generator)?;
            if b.exponent != 1 {
                write!(f, "^{}", b.exponent)?;
            }
        }
        Ok(())
    }
}

/// Per-generator exponent sums, the image of a word in the abelianization
/// `Z^n`. Entry `i - 1` holds the sum for `a_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentVector {
    sums: Vec<i128>,
}

impl ExponentVector {
    pub fn new(sums: Vec<i128>) -> Result<Self> {
        if sums.is_empty() {
            return Err(Error::ZeroRank);
        }
        Ok(ExponentVector { sums })
    }

    pub fn rank(&self) -> usize {
        self.sums.len()
    }

    /// Sum for the 1-based generator `a_generator`.
    pub fn get(&self, generator: usize) -> i128 {
        self.sums[generator - 1]
    }

    pub fn as_slice(&self) -> &[i128] {
        &self.sums
    }
}

impl Add for &ExponentVector {
    type Output = ExponentVector;

    fn add(self, rhs: &ExponentVector) -> ExponentVector {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch");
        ExponentVector {
            sums: self
                .sums
                .iter()
                .zip(&rhs.sums)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Neg for &ExponentVector {
    type Output = ExponentVector;

    fn neg(self) -> ExponentVector {
        ExponentVector {
            sums: self.sums.iter().map(|s| -s).collect(),
        }
    }
}

/// Parses a word over `a1..a_rank`.
///
/// Grammar: `word := ε | term (WS term)*`, `term := gen ("^" int)?`,
/// `gen := "a" posint`, `int := "-"? posint`, `posint := [1-9][0-9]*`.
/// Whitespace is mandatory between terms and forbidden around `^`. The
/// result is freely reduced.
pub fn parse_word(text: &str, rank: usize) -> Result<FreeWord> {
    if rank == 0 {
        return Err(Error::ZeroRank);
    }
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let mut word = FreeWord::identity(rank)?;
    if text.is_empty() {
        return Ok(word);
    }
    loop {
        let block = parser.term()?;
        word.push(block)?;
        if parser.at_end() {
            return Ok(word);
        }
        if !parser.whitespace() {
            return Err(parser.error("expected whitespace between terms"));
        }
        if parser.at_end() {
            return Err(parser.error("expected a term after whitespace"));
        }
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn whitespace(&mut self) -> bool {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
        self.pos > start
    }

    fn term(&mut self) -> Result<Block> {
        if self.peek() != Some(b'a') {
            return Err(self.error("expected generator 'a<k>'"));
        }
        self.pos += 1;
        let generator = self.posint()?;
        let generator =
            usize::try_from(generator).map_err(|_| self.error("generator index too large"))?;
        let mut exponent = 1i64;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let negative = self.peek() == Some(b'-');
            if negative {
                self.pos += 1;
            }
            let digits_at = self.pos;
            let magnitude = i128::from(self.posint()?);
            let signed = if negative { -magnitude } else { magnitude };
            exponent = i64::try_from(signed).map_err(|_| Error::Syntax {
                position: digits_at,
                message: "exponent overflows a 64-bit integer".to_string(),
            })?;
        }
        Ok(Block::new(generator, exponent))
    }

    fn posint(&mut self) -> Result<u64> {
        match self.peek() {
            Some(b'1'..=b'9') => {}
            _ => return Err(self.error("expected a positive integer")),
        }
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(c @ b'0'..=b'9') = self.peek() {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(c - b'0')))
                .ok_or(Error::Syntax {
                    position: start,
                    message: "integer too large".to_string(),
                })?;
            self.pos += 1;
        }
        Ok(value)
    }
}
