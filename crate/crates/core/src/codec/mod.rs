//! Grayscale image codec built on the hybrid encoder.

pub mod blocks;
pub mod metrics;
pub mod pgm;
pub mod pipeline;
pub mod stream;

pub use blocks::{blockify, deblockify, BlockGeometry};
pub use metrics::psnr;
pub use pgm::{load_pgm, parse_pgm, save_pgm, write_pgm, ImageGray8};
pub use pipeline::{
    decode_image, encode_image, encode_image_with_workers, encode_vectors,
    full_search_encode_image, report, stats_of, PartitionStats,
};
pub use stream::IndexStream;
