pub mod cli;
pub mod design;
pub mod distribution;
pub mod error;
pub mod extensions;
pub mod fd;
pub mod model;
pub mod quadrature;
pub mod sim;
pub mod valuation;
pub mod verify;
