pub mod error;
pub mod field;
pub mod fqcount;
pub mod homology;
pub mod incidence;
pub mod kpflow;
pub mod matrix;
pub mod poly;
pub mod qpoly;
pub mod scalar;
pub mod schubert;
pub mod signs;
pub mod snf;
pub mod verify;

pub use error::{Error, Result};

/// Exact integer polynomial in q or t.
pub type IntPolynomial = poly::Poly<num_bigint::BigInt>;

pub type SpectralDataF64 = kpflow::SpectralData<f64>;
pub type TimeVectorF64 = kpflow::TimeVector<f64>;
pub type SignedLogF64 = kpflow::SignedLogValue<f64>;
pub type CrossingEventF64 = kpflow::CrossingEvent<f64>;
