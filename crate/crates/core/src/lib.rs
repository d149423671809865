//! One-point algebraic-geometry codes on the maximal curves `y^n = x^m + x`
//! (and the Hermitian curve) over GF(q^2).
//!
//! The crate builds codes by evaluating rank-filtered monomial bases of
//! `L(r P_inf)` at rational points, checks their parameters by exact linear
//! algebra and brute force, derives stabilizer code parameters from Hermitian
//! self-orthogonal codes, and simulates transmission with a syndrome decoder.

pub mod agcode;
pub mod curve;
pub mod error;
pub mod gf;
pub mod golden;
pub mod linalg;
pub mod quantum;
pub mod rrspace;
pub mod simulator;

pub use agcode::{build_onepoint_code, CodeReport, EvalSet, LinearCode, DEFAULT_BUDGET};
pub use curve::{Curve, CurvePoint, CurveSpec, Family};
pub use error::{Error, Result};
pub use gf::{Felt, Field, FieldElement};
pub use linalg::Matrix;
pub use quantum::{from_self_orthogonal, theorem_params, QuantumParams};
pub use rrspace::{candidate_monomials, dimension_formula, semigroup, t_count, verified_basis, MonomialBasis};
pub use simulator::{decode_goppa, run_simulation, SimConfig, SimResult};

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
