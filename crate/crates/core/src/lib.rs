//! Exact computations for Drinfeld doubles of Nichols algebras of diagonal
//! type, their quantum symmetric pair coideal subalgebras, star products and
//! quasi K-matrices.

pub mod scalars;
pub mod bicharacter;
pub mod freealg;
pub mod linalg;
pub mod nichols;
pub mod double;
pub mod examples;
pub mod heisenberg;
pub mod coideal;
pub mod kmatrix;
pub mod asc;
pub mod suite;
