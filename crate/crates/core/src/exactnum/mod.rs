//! Exact arithmetic: integers, rationals, integer matrices, normal forms and
//! lattices. Nothing in the crate uses floating point.

mod arith;
mod lattice;
mod matrix;
mod normal_form;
mod rational;

pub use arith::{
    divisors, factor, gcd_u64, is_prime, is_square_free, num, num_parts, phi_psi_omega,
    primes_up_to, SquareFreeLevel, MAX_PRIMES,
};
pub use lattice::Lattice;
pub use matrix::IntMatrix;
pub use normal_form::{
    determinant, elementary_divisors, hermite_normal_form, hermite_with_transform, integer_kernel,
    saturate, smith_normal_form, Smith,
};
pub use rational::{
    int_row, q_mul, rational_inverse, rational_rank, row_times, rref, solve_left, to_qmatrix,
    QMatrix,
};
