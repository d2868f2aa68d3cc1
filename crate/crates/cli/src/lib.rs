//! Command line and HTTP service for RIGO/MSA atlases.

pub mod cli;
pub mod service;

pub use cli::run;
