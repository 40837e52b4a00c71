//! Flat surfaces, saddle connections and norms on their tangent spaces.

pub mod cochain;
pub mod cover;
pub mod delaunay;
pub mod document;
pub mod error;
pub mod gallery;
pub mod homology;
mod linalg;
pub mod map;
pub mod norm;
pub mod saddle;
pub mod surface;

pub use cochain::{Cochain, Parity};
pub use document::{CochainDocument, SurfaceDocument};
pub use error::{Error, Result};
pub use map::CombinatorialMap;
pub use surface::{FlipRecord, Kind, Surface, Vertex};
pub use cover::DoubleCover;
pub use delaunay::DelaunayReport;
pub use gallery::{Cylinder, ExampleSpec, TaggedSurface};
pub use homology::{PeriodVector, SymplecticBasis};
pub use norm::{AgyResult, CompareOptions, CompareReport, KwScanRow};
pub use saddle::SaddleConnection;
