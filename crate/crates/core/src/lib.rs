//! Lifting closed curves on the bouquet of `n` circles to finite covers.
//!
//! A closed curve on the bouquet is a reduced word in the free group `F_n`;
//! a finite cover is a tuple of sheet permutations, one per generator. The
//! crate decides lifting both by walking the word through the cover and,
//! for several families of cyclic normal covers, by congruences on the
//! word's exponent sums. On top of that it constructs, for any word and any
//! prime `p`, a `p`-sheeted normal cover the word lifts to, and it can
//! enumerate all covers of small degree.
//!
//! Closed curves on a compact oriented surface with boundary reduce to this
//! setting: the surface retracts onto a bouquet of circles, and whether a
//! curve lifts depends only on the underlying graph cover.
//!
//! ```
//! use bouquet_covers::{find_prime_normal_cover, lift_check, parse_word};
//!
//! let w = parse_word("a1 a2 a1 a2^2", 2).unwrap();
//! let found = find_prime_normal_cover(&w, 7, None).unwrap();
//! assert_eq!(found.spec.to_string(), "N:2,1^2@7");
//! assert!(lift_check(&w, &found.cover, 0).unwrap().closed);
//! ```

pub mod census;
pub mod corpus;
pub mod cover;
pub mod error;
pub mod family;
pub mod modular;
pub mod perm;
pub mod solver;
pub mod verify;
pub mod word;

pub use census::{
    count_index2, enumerate_covers, min_nonlift_degree, nonlift_family_check, CensusQuery,
    NonliftRow, RminResult,
};
pub use cover::{
    from_json, is_connected, is_normal, lift_check, lift_trace, to_dot, to_json, CoverGraph,
    LiftReport,
};
pub use error::{Error, Result};
pub use family::{build_cover, classify_mod3, criterion, parse_family, Family, FamilySpec};
pub use perm::Permutation;
pub use solver::{
    enumerate_solutions, find_prime_normal_cover, solve_lemma, LemmaCase, LemmaKind, SolverResult,
};
pub use word::{parse_word, Block, ExponentVector, FreeWord};
