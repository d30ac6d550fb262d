//! Randomized factorizations: RU-QLP, the power iteration behind it,
//! deterministic pivoted QLP and the randomized baselines.

mod baseline;
mod config;
mod gaussian;
mod operator;
mod power;
mod qlp;

pub use baseline::{factorize, randomized_baseline, LowRankFactors, Method, UtvFactors};
pub use config::{OrthMethod, SketchConfig};
pub use gaussian::{gaussian_matrix, seeded_gaussian, seeded_rng, SeededRng};
pub use operator::MatrixOperator;
pub use power::{pi_orth, pi_orth_with};
pub use qlp::{pivoted_qlp, ru_qlp, QlpFactors};
