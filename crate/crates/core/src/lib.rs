//! Weighted composition-differentiation operators on the weighted Bergman
//! space `A²_α` of the unit disk, realized as truncated matrices in the
//! orthonormal monomial basis, with numerical checks of their structure.

pub mod checks;
pub mod cli;
pub mod eigen;
pub mod error;
pub mod matrix;
pub mod operators;
pub mod series;
pub mod space;

pub use checks::{CheckName, CheckReport, SpectrumReport, Tolerances};
pub use eigen::{EigenOptions, EigenResult};
pub use error::{Error, Result};
pub use matrix::OperatorMatrix;
pub use operators::{Conjugation, Provenance, SymbolSet};
pub use series::TruncatedSeries;
pub use space::SpaceContext;
