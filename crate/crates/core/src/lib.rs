//! Dense complex tensors under the Einstein product, with Moore-Penrose and weighted
//! Moore-Penrose inverses and executable reverse-order-law checks.

pub mod error;
pub mod fixtures;
pub mod geninv;
pub mod io;
pub mod matrix;
pub mod random;
pub mod report;
pub mod rol;
pub mod shape;
pub mod spectral;
pub mod tensor;

pub use error::{Error, Result};
pub use matrix::{Matrix, C64};
pub use shape::EinsteinShape;
pub use spectral::RankTol;
pub use tensor::Tensor;
