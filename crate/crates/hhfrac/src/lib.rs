//! Sweep harness, report formats and command-line interface on top of
//! [`hhfrac_core`].

pub mod audit;
pub mod cli;
pub mod config;
pub mod harness;
pub mod numfmt;
pub mod report;
