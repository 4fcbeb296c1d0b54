//! Batch front end: wind fields, ensembles, comparison, calibration,
//! synthetic fixtures and resolution sweeps, each with a replayable manifest.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;
