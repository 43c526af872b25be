//! Local standard bases, Schreyer resolutions with P-order marks, matrix
//! factorizations with higher homotopies and asymptotic-periodicity
//! certificates over localized polynomial rings with exact coefficients.

pub mod coeffring;
pub mod error;
pub mod hyperfac;
pub mod linalg;
pub mod localdiv;
pub mod oracle;
pub mod parse;
pub mod periodicity;
pub mod poly;
pub mod reescalc;
pub mod resolution;
pub mod stdbasis;

pub use coeffring::{Coeff, Field, ModuleOrder, Mono, RingSpec};
pub use error::{Error, Result};
pub use poly::{Frac, FracMatrix, Poly, PolyMatrix};
pub use hyperfac::{HomotopyFamily, MatrixFactorization};
pub use periodicity::{PeriodicityCertificate, PeriodicityInstance};
pub use resolution::FreeResolution;
