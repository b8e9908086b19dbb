pub mod corr;
pub mod error;
pub mod fock;
pub mod json;
pub mod partition;
pub mod quad;
pub mod scalar;
pub mod solver;
pub mod sympoly;
pub mod verify;
pub mod vertex;
pub mod wcharges;

pub use error::{Error, Result};
pub use quad::QuadNum;
pub use scalar::Scalar;

/// Exact scalars `a + b√r`.
pub type Exact = QuadNum;
pub type ExactFock = fock::FockVector<QuadNum>;
pub type ExactPoly = sympoly::SymPoly<QuadNum>;
pub type NumericFock = fock::FockVector<f64>;
