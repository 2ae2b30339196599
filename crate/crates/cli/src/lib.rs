//! Command-line front end for `realucp`: JSON map documents in, JSON or
//! plain-text reports out.

pub mod commands;
pub mod document;
pub mod gallery;
pub mod report;
