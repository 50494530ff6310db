//! Zero counts of random polynomial systems over finite rings.
//!
//! Rings are `Z/nZ`, `GF(p^r)` and finite products of these. A
//! [`SampleSpace`] is a free module of polynomials with a monomial (or, over
//! fields, arbitrary) basis; drawing `m` independent uniform elements gives a
//! random system whose number of common zeros in `R^n` is the object of study.
//!
//! ```
//! use zerolab::{exact_distribution, theoretical_distribution, RingSpec, RunOptions, SampleSpace};
//!
//! let f2 = RingSpec::zmod(2).unwrap();
//! let space = SampleSpace::per_variable_degree(&f2, 2, 1).unwrap();
//! let exact = exact_distribution(&space, 1, &RunOptions::default()).unwrap();
//! let law = theoretical_distribution(2, 2, 1).unwrap();
//! assert_eq!(exact.exact_probs(), law.exact_probs());
//! ```

pub mod density;
pub mod dist;
pub mod error;
pub mod exec;
pub mod gof;
pub mod linalg;
pub mod poly;
pub mod ring;
pub mod space;
pub mod text;
pub mod zeros;

pub use density::{density_estimate, DensityConfig, FiltrationEstimate, TruncationStats};
pub use dist::{
    exact_distribution, gof_test, monte_carlo_distribution, poisson_limit_report, theoretical_distribution,
    total_variation, DistParams, Mean, Pmf, PoissonRow, Provenance, ZeroCountDistribution,
};
pub use error::{Budget, Error, Result, DEFAULT_BUDGET};
pub use exec::RunOptions;
pub use gof::{pearson, GofReport, DEFAULT_SIGNIFICANCE};
pub use poly::{Degree, Monomial, Point, Polynomial};
pub use ring::{ElementRepr, RingElement, RingKind, RingSpec};
pub use space::{Filtration, SampleSpace};
pub use text::{parse_polynomial, parse_ring, parse_space_spec, SpaceSpec};
pub use zeros::{count_common_zeros, vanishing_count, vanishing_probability, PolySystem, VanishingQuery};
