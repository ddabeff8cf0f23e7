//! CiteScore metrics over a load-dated citation index.

pub mod index;
pub mod metrics;
pub mod score;
pub mod output;
pub mod tracker;
pub mod corpus;
pub mod oracle;
pub mod cutoffs;
pub mod manifest;
pub mod verify;
pub mod cli;
