//! Exact-arithmetic laboratory for minimization and fixed-point principles
//! on finite and catalog quasi-uniform instances.
//!
//! The crate is split into definition layers (`rational`, `space`,
//! `relation`, `catalog`, `topology`, `order`), constructive solvers
//! (`principles`, `iterate`), an independent brute-force `oracle`, and the
//! instance/report plumbing (`instance`, `generate`, `suite`) behind the
//! `qvar` binary.

pub mod catalog;
pub mod order;
pub mod oracle;
pub mod principles;
pub mod error;
pub mod generate;
pub mod instance;
pub mod iterate;
pub mod rational;
pub mod relation;
pub mod space;
pub mod suite;
pub mod topology;
