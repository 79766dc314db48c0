//! Solutions of the Erdős–Straus equation `4/n = 1/x + 1/y + 1/z`.
//!
//! - [`arith`]: exact integer primitives.
//! - [`solution`]: the sorted [`Triple`] model and structural predicates.
//! - [`oracle`]: exhaustive enumeration, the ground truth for everything else.
//! - [`constructors`]: closed-form and congruence-driven builders.
//! - [`census`]: per-prime structural surveys over prime ranges.
//! - [`store`]: JSON-lines persistence for census runs.
//!
//! ```
//! use es_core::{census::duv_complete_search, constructors::thm_a_construct};
//!
//! let s = thm_a_construct(1009, 11, 8).unwrap().unwrap();
//! assert_eq!(s.triple.as_array(), [253, 88792, 2042216]);
//! assert!(duv_complete_search(193).unwrap().is_empty());
//! ```

pub mod arith;
pub mod census;
pub mod constructors;
pub mod error;
pub mod oracle;
pub mod solution;
pub mod store;

pub use arith::PrimeRange;
pub use error::{EsError, Result};
pub use solution::{DuvWitness, SolutionType, Triple};

/// Explicit limits for the searches that would otherwise be unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    /// Largest shift `t` tried by the divisor-shift search.
    pub t_max: u64,
    /// Largest denominator handed to the brute-force oracle.
    pub oracle_max_n: u64,
    /// Optional cap on the number of enumerated solutions.
    pub cap: Option<usize>,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            t_max: 64,
            oracle_max_n: oracle::DEFAULT_ORACLE_MAX_N,
            cap: None,
        }
    }
}
