//! Build, validate and render atlases of regional intergovernmental
//! organizations (RIGOs) and metropolitan statistical areas (MSAs) over US
//! counties.
//!
//! The pipeline is: [`ingest`] the county geometry and affiliation tables,
//! [`Atlas::build`] a shared-arc [`topology`] with overlap categories,
//! saturation bins and dashboard [`stats`], then [`render`] SVG maps or
//! answer comparison queries.

pub mod atlas;
pub mod classification;
pub mod error;
pub mod exec;
pub mod fixture;
pub mod ingest;
pub mod model;
pub mod render;
pub mod stats;
pub mod topology;
pub mod validate;

pub use atlas::{Atlas, AtlasFile, BuildOptions, ATLAS_VERSION};
pub use error::{Error, Result};
pub use exec::Execution;
pub use model::{Category, County, Layer, OverlapCategory, Region, RegionKind, SecondaryAffiliation};
