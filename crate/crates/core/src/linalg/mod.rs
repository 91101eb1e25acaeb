//! Exact integer and rational linear algebra.
//!
//! Everything here is arbitrary precision: determinants, rational inverses
//! and powers, Smith and Hermite normal forms, integer linear systems, and
//! finite quotients `Z^d / L` with their induced automorphism actions.

pub mod hermite;
pub mod matrix;
pub mod quotient;
pub mod snf;
pub mod solve;

use num_bigint::BigInt;
use num_rational::BigRational;

pub type Int = BigInt;
pub type Rat = BigRational;
pub type IntVector = Vec<Int>;
pub type RatVector = Vec<Rat>;

pub use hermite::hermite_rows;
pub use matrix::{
    common_denominator, int_vec, is_zero_vec, l1_norm, rat_vec, vec_add, vec_neg, vec_sub, IntMatrix, Matrix,
    RatMatrix,
};
pub use quotient::{orbit_order, quotient, FinQuotient, Residue};
pub use snf::{snf, SnfDecomposition};
pub use solve::{solve_integer, IntegerSolution};
