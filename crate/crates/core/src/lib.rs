//! Exact algorithms for unit lower-triangular totally nonnegative matrices and
//! the chain polynomials, interlacing certificates and h-vectors they govern.

pub mod chain;
pub mod combinat;
pub mod cubical;
pub mod error;
pub mod exact;
pub mod families;
pub mod fq;
pub mod graph;
pub mod linalg;
pub mod partition;
pub mod pfseq;
pub mod poly;
pub mod poset;
pub mod qarr;
pub mod qposet;
pub mod tnmat;

pub use error::{Error, Result};
pub use exact::Rational;
pub use poly::Polynomial;
pub use tnmat::LowerTriMatrix;
