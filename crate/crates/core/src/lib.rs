//! Closed-form kernels of paired and Toeplitz operators with rational,
//! Blaschke and singular-atom symbols, with an FFT/SVD numerical oracle.

pub mod atto;
pub mod error;
pub mod factor;
pub mod kernels;
pub mod oracle;
pub mod report;
pub mod symbols;

pub use error::{Error, Result};

pub type C64 = num_complex::Complex64;
