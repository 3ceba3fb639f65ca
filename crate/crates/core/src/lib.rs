//! Exact invariants of premodular data (ribbon braided fusion categories given
//! by fusion rules, dimensions, twists and S-matrix) and of finite metric
//! groups, with enumeration of pointed minimal nondegenerate extensions.
//!
//! Scalars are exact elements of cyclotomic fields ([`CycNum`]). The main
//! entry points are [`PremodularData`], [`MetricGroup`], the component and
//! Klein-invariant analyses, and the [`catalog`] of standard examples.

#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod center_components;
pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod fusion_ring;
pub mod io;
pub mod klein;
pub mod metric_groups;
pub mod premodular;
pub mod report;
pub mod violation;

pub use catalog::{catalog_get, catalog_list, CatalogEntry};
pub use center_components::{component_count, ring_characters, ComponentAnalysis};
pub use cyclotomic::CycNum;
pub use error::{Error, Result};
pub use fusion_ring::FusionRing;
pub use io::{load_datum, Datum};
pub use klein::{eta_scalar, kappa_lagrangian, main_theorem_verdict, KappaReport};
pub use metric_groups::{enumerate_pointed_extensions, isometry_rel_point, MetricGroup};
pub use premodular::{DegeneracyKind, PremodularData};
pub use violation::Violation;
