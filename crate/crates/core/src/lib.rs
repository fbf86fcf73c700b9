pub mod curves;
pub mod equivariance;
pub mod error;
pub mod imaging;
pub mod locality;
pub mod signal;
