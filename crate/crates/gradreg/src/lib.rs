//! Exact computation of homological regularities of finitely generated graded
//! modules over locally finite graded quiver algebras.
//!
//! The pipeline is: a [`presentation::QuiverPresentation`] is expanded into a
//! [`algebra::TruncatedAlgebra`]; modules ([`gmod::GradedModule`]) are resolved
//! by [`resolve::minimal_resolution`]; [`regularity`] turns resolutions and
//! Ext/Tor tables into regularity values with honest truncation statuses; and
//! [`verify`] replays the known inequalities between them on random modules.

pub mod algebra;
pub mod catalog;
pub mod error;
pub mod gmod;
pub mod presentation;
pub mod regularity;
pub mod report;
pub mod resolve;
pub mod scalar;
pub mod verify;
pub mod cli;

pub use error::{Error, Result};
