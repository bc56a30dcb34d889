pub mod cp;
pub mod cstar;
pub mod error;
pub mod frobenius;
pub mod quantale;
pub mod random;
pub mod rel;
pub mod tensor;

pub use error::{Error, Result};
pub use frobenius::FrobeniusAlgebra;
pub use tensor::{contract, Scalar, ScalarModel, Tensor};
