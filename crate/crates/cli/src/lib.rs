//! Command-line layer of `germlift`: runs manifest tasks, checks
//! certificates independently and drives the acceptance suite.

pub mod certificate;
pub mod cli;
pub mod properties;
pub mod report;
pub mod runner;
pub mod suite;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
