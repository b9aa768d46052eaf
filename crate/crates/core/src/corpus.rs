//! Exhaustive generation of small reduced words, used by the verification
//! sweeps.

use crate::error::Result;
use crate::word::{Block, FreeWord};

/// Depth-first callbacks. Words are visited in prefix order: `word` is
/// called for the empty word first, then after every `enter`. Each `enter`
/// is matched by a `leave` once all extensions of that prefix are done.
pub trait WordVisitor {
    fn enter(&mut self, _block: Block) {}
    fn word(&mut self, blocks: &[Block]);
    fn leave(&mut self) {}
}

/// Visits every reduced word over `a1..a_rank` with at most `max_syllables`
/// blocks and block exponents in `[-max_abs_exponent, max_abs_exponent]`.
pub fn visit_reduced_words<V: WordVisitor>(
    rank: usize,
    max_syllables: usize,
    max_abs_exponent: i64,
    visitor: &mut V,
) {
    let mut stack = Vec::with_capacity(max_syllables);
    visitor.word(&stack);
    extend(rank, max_syllables, max_abs_exponent, &mut stack, visitor);
}

fn extend<V: WordVisitor>(
    rank: usize,
    max_syllables: usize,
    e: i64,
    stack: &mut Vec<Block>,
    visitor: &mut V,
) {
    if stack.len() == max_syllables {
        return;
    }
    let last = stack.last().map(|b| b.generator);
    for generator in 1..=rank {
        if Some(generator) == last {
            continue;
        }
        for exponent in (-e..=e).filter(|&m| m != 0) {
            let block = Block::new(generator, exponent);
            stack.push(block);
            visitor.enter(block);
            visitor.word(stack);
            extend(rank, max_syllables, e, stack, visitor);
            visitor.leave();
            stack.pop();
        }
    }
}

/// Number of words [`visit_reduced_words`] visits, the empty word included.
pub fn count_reduced_words(rank: usize, max_syllables: usize, max_abs_exponent: i64) -> u128 {
    let choices = 2 * max_abs_exponent.max(0) as u128;
    let mut total = 1u128;
    let mut layer = rank as u128 * choices;
    for _ in 0..max_syllables {
        total += layer;
        layer *= rank.saturating_sub(1) as u128 * choices;
    }
    total
}

/// Collects the visited words.
pub fn reduced_words(
    rank: usize,
    max_syllables: usize,
    max_abs_exponent: i64,
) -> Result<Vec<FreeWord>> {
    struct Collect {
        rank: usize,
        words: Vec<Result<FreeWord>>,
    }
    impl WordVisitor for Collect {
        fn word(&mut self, blocks: &[Block]) {
            let pairs = blocks.iter().map(|b| (b.generator, b.exponent));
            self.words.push(FreeWord::from_blocks(self.rank, pairs));
        }
    }
    let mut c = Collect {
        rank,
        words: Vec::new(),
    };
    visit_reduced_words(rank, max_syllables, max_abs_exponent, &mut c);
    c.words.into_iter().collect()
}
