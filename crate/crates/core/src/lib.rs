//! Exact symbolic algebra for factorized difference L operators of the twisted
//! quantum affine algebras `A(2)_{2n}`, `A(2)_{2n-1}`, `D(2)_{n+1}` and `D(3)_4`,
//! their T-functions, screening operators, and Casorati determinant
//! solutions of the T-system.

pub mod beta;
pub mod casorati;
pub mod diffop;
pub mod error;
pub mod numeric;
pub mod report;
pub mod ring;
pub mod root_data;
pub mod screening;
pub mod shift;
pub mod tsystem;
pub mod variables;

pub use diffop::{DiffOperator, OrderBound, TTable};
pub use error::{Error, Result};
pub use ring::{LaurentPoly, Monomial};
pub use root_data::{AlgebraKind, AlgebraSpec};
pub use shift::{Family, Shift};
