//! Embed-or-split, sparse-or-dense extraction, equitable partitions and
//! homogeneous sets.

pub mod hom;
pub mod partition;
pub mod sparse_dense;
pub mod split;

pub use hom::{hom_lower_bound, HomResult};
pub use partition::{equitable_density_partition, verify_partition, EquitablePartition};
pub use sparse_dense::{
    sparse_or_dense_subset, verify_density_certificate, DensityCertificate, Side,
};
pub use split::{eh_pair, split_or_embed, ExtractionParams, SplitOutcome, SplitPolicy};
