//! Census tables, search campaigns and the command-line front end built on
//! [`finsurg_core`].
//!
//! * [`tables`]: CSV ingestion of the finite surgery census and per-row validation
//! * [`campaigns`]: parallel, deterministic parameter sweeps with JSON reports
//! * [`cli`]: the `finsurg` command

pub mod campaigns;
pub mod cli;
pub mod error;
pub mod tables;

pub use error::{Error, Result};
