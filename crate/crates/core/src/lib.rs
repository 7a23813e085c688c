//! Linear index coding over GF(2) through transfer matrices.
//!
//! Given receivers with wanted messages and side information, the crate
//! computes the optimal linear code length, enumerates every optimal code,
//! checks the transfer-matrix optimality conditions on small instances and
//! picks codes that minimize the worst receiver's error probability.
//!
//! ```
//! use indexcode_core::{analyze, IndexCodingProblem, Limits};
//!
//! let p = IndexCodingProblem::from_lists(3, &[(&[1], &[2]), (&[2], &[3]), (&[3], &[1])])?;
//! let report = analyze(&p, &Limits::default())?;
//! assert_eq!(report.c_opt, 2);
//! # Ok::<(), indexcode_core::Error>(())
//! ```

pub mod analysis;
pub mod bersim;
pub mod enumerate;
pub mod error;
pub mod gf2;
pub mod minmax;
pub mod optlen;
pub mod problem;
pub mod transfer;

pub use analysis::{analyze, AnalysisReport, Method};
pub use bersim::{BerConfig, BerResult, Channel, Comparison};
pub use enumerate::{CodeCensus, CodeValidity, IndexCode};
pub use error::{Error, Result};
pub use gf2::{AffineSolutionSet, Gf2Matrix, RowSpace};
pub use minmax::{DecodingPlan, MinMaxReport};
pub use optlen::{CycleDecomposition, FittingCandidate, MinrankResult, ReductionTrace, SideInfoChoice};
pub use problem::{IndexCodingProblem, ProblemClass, Receiver, SingleUnicast};
pub use transfer::{OptimalityVerdict, SMembershipReport, TransferComponents};

/// Size limits for the exhaustive searches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest solution-space dimension of S'(c) that will be enumerated.
    pub sprime_dim: usize,
    /// Largest number of side-information bits for the fitting-matrix search.
    pub fitting_bits: usize,
    /// Most codes that will be materialized in a census.
    pub codes: u64,
    /// Largest `n * c` for brute-force code search.
    pub brute_force_bits: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            sprime_dim: 24,
            fitting_bits: 24,
            codes: 1_000_000,
            brute_force_bits: 24,
        }
    }
}
