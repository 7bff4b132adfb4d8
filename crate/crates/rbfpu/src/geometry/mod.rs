//! Node generation, spatial indexing, and partition-of-unity cover geometry.

mod cover;
mod dataset;
mod halton;
mod index;
mod radius;

pub use cover::PUCover;
pub use dataset::Dataset;
pub use halton::halton_sequence;
pub use index::SpatialIndex;
pub use radius::{ball_volume, radius_range, required_count, RadiusRange};
