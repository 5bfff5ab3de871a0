//! Counting permutations that avoid partially ordered patterns.

pub mod enumerator;
pub mod oeis;
pub mod perm;
pub mod poset;
pub mod series;
pub mod theorems;

pub use enumerator::{count_avoiders, count_avoiders_prefix, CountSequence, EnumError, Enumerator, PatternSet};
pub use perm::{contains_pop, Pattern, PermError, Permutation, PopMatcher};
pub use poset::{enumerate_pops, parse_pop, ClassKey, Pop, PopError};
pub use series::{IntPolynomial, SeriesError, TruncatedSeries};
pub use theorems::{check_conjecture, conjectures, registry, theorem_sequence, verify_theorem, Method, Report, TheoremEntry, TheoremError};
pub use oeis::{Match, OeisDb, OeisError};
