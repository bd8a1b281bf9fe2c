//! Exact integer matrix algebra: Smith/Hermite forms, kernels, integer
//! solving, congruence systems, and canonical forms of finitely generated
//! abelian groups. Everything downstream (cohomology, resolutions, root
//! data) reduces to the primitives in this module.

mod abelian;
mod matrix;
mod quotient;
mod smith;
mod solve;

pub use abelian::FiniteAbelianGroup;
pub use matrix::IntMatrix;
pub use quotient::LatticeQuotient;
pub use smith::{hermite_column_basis, smith_normal_form, SmithDecomposition};
pub use solve::{kernel_basis, solve_congruences, solve_in_basis, solve_integer, CongruenceRow, IntegerSolution};
