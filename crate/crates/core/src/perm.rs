use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `{0, .., len - 1}` in one-line notation: `images[s]` is
/// the image of `s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(len: usize) -> Self {
        Permutation {
            images: (0..len).collect(),
        }
    }

    /// `s ↦ s + offset (mod len)`.
    pub fn shift(len: usize, offset: i64) -> Self {
        assert!(len > 0, "shift on an empty set");
        let offset = offset.rem_euclid(len as i64) as usize;
        Permutation {
            images: (0..len).map(|s| (s + offset) % len).collect(),
        }
    }

    /// Returns `None` unless `images` is a bijection on `{0, .., images.len() - 1}`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &t in &images {
            if t >= images.len() || std::mem::replace(&mut seen[t], true) {
                return None;
            }
        }
        Some(Permutation { images })
    }

    /// Builds from disjoint cycles, e.g. `&[&[0, 1]]` for the transposition
    /// `(0 1)`. Points not mentioned are fixed.
    pub fn from_cycles(len: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..len).collect();
        for cycle in cycles {
            for (i, &s) in cycle.iter().enumerate() {
                if s >= len {
                    return Err(Error::SheetOutOfRange {
                        sheet: s,
                        degree: len,
                    });
                }
                images[s] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::from_images(images).ok_or(Error::NotABijection {
            color: 0,
            degree: len,
        })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, s: usize) -> usize {
        self.images[s]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(s, &t)| s == t)
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.len()];
        for (s, &t) in self.images.iter().enumerate() {
            images[t] = s;
        }
        Permutation { images }
    }

    /// Left-to-right product: first `self`, then `next`.
    pub fn then(&self, next: &Permutation) -> Self {
        debug_assert_eq!(self.len(), next.len());
        Permutation {
            images: self.images.iter().map(|&t| next.images[t]).collect(),
        }
    }

    /// `self^exponent` by repeated squaring.
    pub fn pow(&self, exponent: i64) -> Self {
        let mut base = if exponent < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut e = exponent.unsigned_abs();
        let mut acc = Permutation::identity(self.len());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.then(&base);
            }
        }
        acc
    }

    /// Length of the cycle through `s`.
    pub fn cycle_len(&self, s: usize) -> usize {
        let mut t = self.images[s];
        let mut len = 1;
        while t != s {
            t = self.images[t];
            len += 1;
        }
        len
    }
}

/// Cycle notation, fixed points omitted: `(0 1 2)(3 4)`; identity is `()`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.len()];
        let mut wrote = false;
        for s in 0..self.len() {
            if seen[s] || self.images[s] == s {
                continue;
            }
            f.write_str("(")?;
            let mut t = s;
            loop {
                seen[t] = true;
                if t != s {
                    f.write_str(" ")?;
                }
                write!(f, "{t}")?;
                t = self.images[t];
                if t == s {
                    break;
                }
            }
            f.write_str(")")?;
            wrote = true;
        }
        if !wrote {
            f.write_str("()")?;
        }
        Ok(())
    }
}
