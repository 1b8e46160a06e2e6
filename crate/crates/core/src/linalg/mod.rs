//! Dense Hermitian linear algebra.

pub mod compound;
pub mod eigen;
pub mod functions;
pub mod graded;
pub mod gram_schmidt;
pub mod hermitian;
pub mod lattice;
pub mod matrix;
pub mod spectral;
pub mod tol;

pub use compound::compound;
pub use eigen::{eig_hermitian, Eigen};
pub use functions::{apply_function, matrix_power, Domain, PowerScaled};
pub use graded::{GradedFactor, LogSpectrum};
pub use gram_schmidt::{gram_schmidt_select, Selection};
pub use hermitian::{Hermitian, Projection, Psd};
pub use lattice::{projection_join, projection_meet, range_projection, range_projection_at_scale};
pub use matrix::{determinant, CMatrix, C64};
pub use spectral::{group_spectrum, SpectralDecomposition};
pub use tol::Tolerances;
