//! Exact and numerical verification of Selberg-type integrals and the
//! Macdonald/Jack symmetric-function identities behind them.

pub mod field;
pub mod partitions;
pub mod coeffs;
pub mod series;
pub mod symfunc;
pub mod macdonald;
pub mod identities;
pub mod closedform;
pub mod quadrature;
pub mod complexschur;
pub mod elliptic;
pub mod cli;
