//! Blind QR-code image watermarking with a local rights registry.
//!
//! An image is registered by appending a block to a hash-chained ledger,
//! rendering the block hash as a 64x64 QR payload, and embedding those 4096
//! bits into the image's frequency domain. Ownership of any subject image
//! is later asserted by blind extraction and minimum-bit-error matching
//! against regenerated payload matrices, followed by a four-layer tamper
//! analysis against the released asset. See the module docs for each stage;
//! [`pipeline`] ties them together.

pub mod attacks;
pub mod detection;
pub mod identity;
pub mod imaging;
pub mod kernels;
pub mod metrics;
pub mod payload;
pub mod pipeline;
pub mod registry;
pub mod synth;
pub mod util;
pub mod watermark;
