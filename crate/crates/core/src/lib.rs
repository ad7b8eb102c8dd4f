//! Exact computation of the whole sequence of k-cardinality assignments of a
//! square weight matrix over the max-plus semifield.
//!
//! For an `n × n` matrix `W` the value `ω_k` of a maximum-weight matching with
//! exactly `k` edges is the coefficient of `x^{n-k}` in the full characteristic
//! maxpolynomial `χ̄_W(x) = maxperm(x·0 ⊕ W)`. The crate offers four
//! independent routes to the sequence `ω_0..ω_n`:
//!
//! * [`oracle`]: exhaustive enumeration, exponential, used as ground truth;
//! * [`ssp`]: successive longest augmenting paths with dual potentials;
//! * [`parametric`]: the parametric assignment algorithm, which sweeps the
//!   parameter `x` downwards over a parametric longest-path tree and reports
//!   the assignments of all essential terms of `χ̄_W` together with the
//!   max-plus singular values;
//! * [`completion`]: fills the gaps left by the parametric sweep from pairs of
//!   assignments at adjacent terms, by splitting their symmetric difference
//!   into equal-gain augmenting paths.
//!
//! All values are exact. `ω_0` is `0` (the empty product), matching the
//! leading coefficient of `χ̄_W`.

pub mod cli;
pub mod completion;
pub mod error;
pub mod instance;
pub mod matching;
pub mod maxplus;
pub mod oracle;
pub mod parametric;
pub mod sequence;
pub mod ssp;

pub use error::{Error, Result};
pub use instance::{InstanceSpec, Objective, Transform, WeightMatrix};
pub use matching::Matching;
pub use maxplus::{ExtReal, MaxPolynomial, Rational, RootList, SingularValue, TermClass};
pub use sequence::{AssignmentSequence, SolverKind};
