//! Vector-quantization image codec with a hybrid quantum/classical encoder.
//!
//! The nearest-codevector search runs in three stages. A Grover search over
//! the `δ₀/2` ball handles inputs that sit close to a codevector, a BBHT-style
//! randomized Grover schedule finds a codevector within `δ̂` whose
//! precomputed neighborhood is then searched classically, and anything left
//! over falls back to the classical full search. The quantum search is
//! simulated exactly at the amplitude level and every operation is metered,
//! so the encoder's cost can be compared against the O(N) baseline.
//!
//! Module map:
//!
//! * [`vq`] vectors, metric, codebook, full search, `δ₀`
//! * [`train`] seeded k-means codebook trainer
//! * [`neighborhood`] adjacency list of radius-`2δ̂` neighborhoods
//! * [`grover`] amplitude-level Grover simulation and query meters
//! * [`encoder`] the hybrid encoder
//! * [`codec`] PGM I/O, blocks, index streams, PSNR, partition statistics
//! * [`synth`] synthetic clustered datasets for experiments

pub mod codec;
pub mod encoder;
pub mod error;
pub mod grover;
pub mod neighborhood;
pub mod synth;
pub mod train;
pub mod vq;

pub use encoder::{encode, EncodeOutcome, EncoderConfig, Path, Region};
pub use error::{Error, Result};
pub use grover::{MarkedSet, QueryMeter};
pub use neighborhood::NeighborhoodTable;
pub use vq::{distance, full_search, Codebook, FeatureVector};
