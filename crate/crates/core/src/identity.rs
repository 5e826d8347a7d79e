//! Image identity primitives: the dHash perceptual hash used as the image
//! token, SHA-256 content digests over the canonical raster form, and
//! Hamming distance between tokens.

use std::fmt;

use sha2::{Digest, Sha256};

use crate::imaging::{resize_area, Image};
use crate::util;

/// 64-bit perceptual hash, rendered as 16 lowercase hex characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Hash64(pub u64);

impl Hash64 {
    pub fn to_hex(self) -> String {
        format!("{:016x}", self.0)
    }

    pub fn from_hex(s: &str) -> Option<Hash64> {
        if s.len() != 16 || !s.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b)) {
            return None;
        }
        u64::from_str_radix(s, 16).ok().map(Hash64)
    }
}

impl fmt::Display for Hash64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

/// SHA-256 digest, rendered as 64 lowercase hex characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ContentDigest(pub [u8; 32]);

impl ContentDigest {
    pub fn to_hex(&self) -> String {
        util::to_hex(&self.0)
    }

    pub fn from_hex(s: &str) -> Option<ContentDigest> {
        let bytes = util::from_hex(s)?;
        let arr: [u8; 32] = bytes.try_into().ok()?;
        Some(ContentDigest(arr))
    }
}

impl fmt::Display for ContentDigest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Difference hash: grayscale, area-resample to 9x8, then one bit per
/// horizontal neighbor pair, set when the right pixel is brighter. Bits are
/// packed row-major, MSB first.
pub fn dhash(img: &Image) -> Hash64 {
    let gray = img.to_grayscale();
    let thumb = resize_area(&gray, 9, 8);
    let mut bits = 0u64;
    for row in 0..8 {
        for col in 0..8 {
            bits <<= 1;
            if thumb.pixel(col + 1, row) > thumb.pixel(col, row) {
                bits |= 1;
            }
        }
    }
    Hash64(bits)
}

/// Population count of the XOR; a metric on 64-bit tokens.
pub fn hamming64(a: Hash64, b: Hash64) -> u32 {
    (a.0 ^ b.0).count_ones()
}

/// SHA-256 of the exact byte sequence.
pub fn content_hash(bytes: &[u8]) -> ContentDigest {
    let digest = Sha256::digest(bytes);
    ContentDigest(digest.into())
}
