//! Command-line front end for the refuge predator-prey laboratory: run
//! configuration, CSV assembly, SVG rendering, and subcommand dispatch.

pub mod app;
pub mod config;
pub mod csvout;
pub mod svg;
