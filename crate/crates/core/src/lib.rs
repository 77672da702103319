//! Tools for the Diophantine equation `a x^2 + b^(2l) = 4 y^n`: exact
//! arithmetic, class numbers, Pell equations, Lehmer pairs, the infinite
//! families for `a = 7, n = 3`, a brute-force oracle and a solver that
//! issues checkable certificates.

pub mod arith;
pub mod classnum;
pub mod error;
pub mod families;
pub mod lehmer;
pub mod linrec;
pub mod pell;
pub mod search;
pub mod solver;

pub use arith::Int;
pub use error::*;
