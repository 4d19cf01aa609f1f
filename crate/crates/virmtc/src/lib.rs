//! Modular data, subcategory classification and ℤ/2 simple-current extensions
//! of Virasoro minimal-model categories C_{p,q}, with exact cyclotomic arithmetic.

pub mod exactmath;
pub mod extension;
pub mod fusion;
pub mod gluing;
pub mod minimal_model;
pub mod modular_data;
pub mod registry;
pub mod subcat;

/// Library-wide error. Validation problems map to CLI exit code 2, invariant
/// violations to exit code 3.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    #[error("unsupported parameter: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
}

impl Error {
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Invariant(_))
    }
}
