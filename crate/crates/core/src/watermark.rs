//! Blind watermark embedding and extraction.
//!
//! Three codecs over a 512x512 grayscale host, one payload bit per block:
//!
//! * `Dct` — per 8x8 block, order the mid-band DCT coefficient pair
//!   (3,2)/(2,3) with a margin of `strength`. Blind: extraction only compares
//!   the pair.
//! * `DwtDct` — one Haar level, then the same pair rule on (2,1)/(1,2) of
//!   each 4x4 DCT block of the LL subband.
//! * `DctSvd` — per 8x8 block, quantize the leading singular value of the
//!   DCT coefficient matrix onto bit-dependent lattice offsets (step
//!   `strength`).
//!
//! 512x512 with one bit per block gives exactly 4096 bits, the full 64x64
//! payload matrix.

use thiserror::Error;

use crate::imaging::{GrayImage, Image};
use crate::kernels::{self, Block, KernelError, Mat};

/// Total payload bits carried by one host image.
pub const WATERMARK_BITS: usize = 4096;
/// Required host side length.
pub const HOST_SIDE: u32 = 512;

pub const DEFAULT_DCT_ALPHA: f64 = 31.0;
pub const DEFAULT_DWT_DCT_ALPHA: f64 = 6.0;
pub const DEFAULT_DCT_SVD_DELTA: f64 = 40.0;

#[derive(Debug, Error)]
pub enum WatermarkError {
    #[error("host must be {HOST_SIDE}x{HOST_SIDE}, got {w}x{h}")]
    BadHostSize { w: u32, h: u32 },
    #[error("watermark must be {WATERMARK_BITS} bits, got {0}")]
    BadBitCount(usize),
    #[error("codec strength must be positive, got {0}")]
    BadStrength(f64),
    #[error("host must have 3 channels for color embedding, got {0}")]
    NotColor(u8),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodecKind {
    Dct,
    DwtDct,
    DctSvd,
}

impl CodecKind {
    pub fn label(&self) -> &'static str {
        match self {
            CodecKind::Dct => "DCT",
            CodecKind::DwtDct => "DWT_DCT",
            CodecKind::DctSvd => "DCT_SVD",
        }
    }
}

impl std::str::FromStr for CodecKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dct" => Ok(CodecKind::Dct),
            "dwtdct" | "dwt_dct" => Ok(CodecKind::DwtDct),
            "dctsvd" | "dct_svd" => Ok(CodecKind::DctSvd),
            other => Err(format!("unknown codec '{other}'")),
        }
    }
}

/// Codec selection plus its embedding strength: the pair margin for the
/// coefficient-pair codecs, the quantization step for `DctSvd`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Codec {
    pub kind: CodecKind,
    pub strength: f64,
}

impl Codec {
    pub fn new(kind: CodecKind, strength: f64) -> Result<Codec, WatermarkError> {
        if strength.is_nan() || strength <= 0.0 {
            return Err(WatermarkError::BadStrength(strength));
        }
        Ok(Codec { kind, strength })
    }

    pub fn with_default_strength(kind: CodecKind) -> Codec {
        let strength = match kind {
            CodecKind::Dct => DEFAULT_DCT_ALPHA,
            CodecKind::DwtDct => DEFAULT_DWT_DCT_ALPHA,
            CodecKind::DctSvd => DEFAULT_DCT_SVD_DELTA,
        };
        Codec { kind, strength }
    }

    pub fn dct() -> Codec {
        Codec::with_default_strength(CodecKind::Dct)
    }

    pub fn dwt_dct() -> Codec {
        Codec::with_default_strength(CodecKind::DwtDct)
    }

    pub fn dct_svd() -> Codec {
        Codec::with_default_strength(CodecKind::DctSvd)
    }
}

/// Fixed-length watermark payload, the row-major serialization of the 64x64
/// payload matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WatermarkBits {
    bits: Vec<bool>,
}

impl WatermarkBits {
    pub fn from_bools(bits: Vec<bool>) -> Result<WatermarkBits, WatermarkError> {
        if bits.len() != WATERMARK_BITS {
            return Err(WatermarkError::BadBitCount(bits.len()));
        }
        Ok(WatermarkBits { bits })
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

fn check_host(host: &GrayImage) -> Result<(), WatermarkError> {
    if host.width() != HOST_SIDE || host.height() != HOST_SIDE {
        return Err(WatermarkError::BadHostSize {
            w: host.width(),
            h: host.height(),
        });
    }
    Ok(())
}

/// Order a coefficient pair so that `first - second >= margin` when `bit`
/// is set (and the reverse otherwise). Pairs that already satisfy the margin
/// are left untouched to minimize distortion.
fn enforce_pair(first: f64, second: f64, bit: bool, margin: f64) -> (f64, f64) {
    let diff = first - second;
    if bit {
        if diff >= margin {
            (first, second)
        } else {
            let mid = (first + second) / 2.0;
            (mid + margin / 2.0, mid - margin / 2.0)
        }
    } else if -diff >= margin {
        (first, second)
    } else {
        let mid = (first + second) / 2.0;
        (mid - margin / 2.0, mid + margin / 2.0)
    }
}

fn block_from_mat(m: &Mat, bx: usize, by: usize, n: usize) -> Block {
    let mut cells = Vec::with_capacity(n * n);
    for y in 0..n {
        for x in 0..n {
            cells.push(m.at(by * n + y, bx * n + x));
        }
    }
    Block::new(n, cells).expect("finite samples")
}

fn block_into_mat(m: &mut Mat, bx: usize, by: usize, block: &Block) {
    let n = block.side();
    for y in 0..n {
        for x in 0..n {
            m.set(by * n + y, bx * n + x, block.at(y, x));
        }
    }
}

/// Embed 4096 bits into a 512x512 grayscale host.
pub fn embed(
    host: &GrayImage,
    bits: &WatermarkBits,
    codec: &Codec,
) -> Result<GrayImage, WatermarkError> {
    check_host(host)?;
    if codec.strength.is_nan() || codec.strength <= 0.0 {
        return Err(WatermarkError::BadStrength(codec.strength));
    }
    match codec.kind {
        CodecKind::Dct => embed_dct_pair(host, bits, codec.strength),
        CodecKind::DwtDct => embed_dwt_dct(host, bits, codec.strength),
        CodecKind::DctSvd => embed_dct_svd(host, bits, codec.strength),
    }
}

/// Blind extraction of 4096 bits; no access to the original image.
pub fn extract(subject: &GrayImage, codec: &Codec) -> Result<WatermarkBits, WatermarkError> {
    check_host(subject)?;
    match codec.kind {
        CodecKind::Dct => extract_dct_pair(subject),
        CodecKind::DwtDct => extract_dwt_dct(subject),
        CodecKind::DctSvd => extract_dct_svd(subject, codec.strength),
    }
}

// Mid-band coefficient pair for the 8x8 DCT codec.
const DCT_POS_A: (usize, usize) = (3, 2);
const DCT_POS_B: (usize, usize) = (2, 3);
// Pair for the 4x4 blocks of the LL subband.
const DWT_POS_A: (usize, usize) = (2, 1);
const DWT_POS_B: (usize, usize) = (1, 2);

fn embed_dct_pair(
    host: &GrayImage,
    bits: &WatermarkBits,
    alpha: f64,
) -> Result<GrayImage, WatermarkError> {
    let mut plane = Mat::from_gray(host);
    let blocks_per_side = HOST_SIDE as usize / 8;
    for by in 0..blocks_per_side {
        for bx in 0..blocks_per_side {
            let bit = bits.bits[by * blocks_per_side + bx];
            let block = block_from_mat(&plane, bx, by, 8);
            let mut coeffs = kernels::dct2(&block);
            let (a, b) = enforce_pair(
                coeffs.at(DCT_POS_A.0, DCT_POS_A.1),
                coeffs.at(DCT_POS_B.0, DCT_POS_B.1),
                bit,
                alpha,
            );
            coeffs.set(DCT_POS_A.0, DCT_POS_A.1, a);
            coeffs.set(DCT_POS_B.0, DCT_POS_B.1, b);
            let back = kernels::idct2(&coeffs);
            block_into_mat(&mut plane, bx, by, &back);
        }
    }
    Ok(plane.to_gray())
}

fn extract_dct_pair(subject: &GrayImage) -> Result<WatermarkBits, WatermarkError> {
    let plane = Mat::from_gray(subject);
    let blocks_per_side = HOST_SIDE as usize / 8;
    let mut bits = Vec::with_capacity(WATERMARK_BITS);
    for by in 0..blocks_per_side {
        for bx in 0..blocks_per_side {
            let coeffs = kernels::dct2(&block_from_mat(&plane, bx, by, 8));
            bits.push(
                coeffs.at(DCT_POS_A.0, DCT_POS_A.1) > coeffs.at(DCT_POS_B.0, DCT_POS_B.1),
            );
        }
    }
    WatermarkBits::from_bools(bits)
}

fn embed_dwt_dct(
    host: &GrayImage,
    bits: &WatermarkBits,
    alpha: f64,
) -> Result<GrayImage, WatermarkError> {
    let mut bands = kernels::dwt_haar(host)?;
    let blocks_per_side = bands.ll.w / 4; // 256 / 4 = 64
    for by in 0..blocks_per_side {
        for bx in 0..blocks_per_side {
            let bit = bits.bits[by * blocks_per_side + bx];
            let block = block_from_mat(&bands.ll, bx, by, 4);
            let mut coeffs = kernels::dct2(&block);
            let (a, b) = enforce_pair(
                coeffs.at(DWT_POS_A.0, DWT_POS_A.1),
                coeffs.at(DWT_POS_B.0, DWT_POS_B.1),
                bit,
                alpha,
            );
            coeffs.set(DWT_POS_A.0, DWT_POS_A.1, a);
            coeffs.set(DWT_POS_B.0, DWT_POS_B.1, b);
            let back = kernels::idct2(&coeffs);
            block_into_mat(&mut bands.ll, bx, by, &back);
        }
    }
    Ok(kernels::idwt_haar(&bands)?.to_gray())
}

fn extract_dwt_dct(subject: &GrayImage) -> Result<WatermarkBits, WatermarkError> {
    let bands = kernels::dwt_haar(subject)?;
    let blocks_per_side = bands.ll.w / 4;
    let mut bits = Vec::with_capacity(WATERMARK_BITS);
    for by in 0..blocks_per_side {
        for bx in 0..blocks_per_side {
            let coeffs = kernels::dct2(&block_from_mat(&bands.ll, bx, by, 4));
            bits.push(
                coeffs.at(DWT_POS_A.0, DWT_POS_A.1) > coeffs.at(DWT_POS_B.0, DWT_POS_B.1),
            );
        }
    }
    WatermarkBits::from_bools(bits)
}

fn embed_dct_svd(
    host: &GrayImage,
    bits: &WatermarkBits,
    delta: f64,
) -> Result<GrayImage, WatermarkError> {
    let mut plane = Mat::from_gray(host);
    let blocks_per_side = HOST_SIDE as usize / 8;
    for by in 0..blocks_per_side {
        for bx in 0..blocks_per_side {
            let bit = bits.bits[by * blocks_per_side + bx];
            let coeffs = kernels::dct2(&block_from_mat(&plane, bx, by, 8));
            let mut coeff_rows = [[0.0f64; 8]; 8];
            for (r, row) in coeff_rows.iter_mut().enumerate() {
                for (c, v) in row.iter_mut().enumerate() {
                    *v = coeffs.at(r, c);
                }
            }
            let mut svd = kernels::svd8(&coeff_rows)?;
            // Quantization index modulation on the leading singular value.
            let cell = (svd.s[0] / delta).floor();
            svd.s[0] = if bit {
                cell * delta + 0.75 * delta
            } else {
                cell * delta + 0.25 * delta
            };
            let rec = svd.reconstruct();
            let mut cells = Vec::with_capacity(64);
            for row in rec.iter() {
                cells.extend_from_slice(row);
            }
            let back = kernels::idct2(&Block::new(8, cells)?);
            block_into_mat(&mut plane, bx, by, &back);
        }
    }
    Ok(plane.to_gray())
}

fn extract_dct_svd(subject: &GrayImage, delta: f64) -> Result<WatermarkBits, WatermarkError> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(WatermarkError::BadStrength(delta));
    }
    let plane = Mat::from_gray(subject);
    let blocks_per_side = HOST_SIDE as usize / 8;
    let mut bits = Vec::with_capacity(WATERMARK_BITS);
    for by in 0..blocks_per_side {
        for bx in 0..blocks_per_side {
            let coeffs = kernels::dct2(&block_from_mat(&plane, bx, by, 8));
            let mut coeff_rows = [[0.0f64; 8]; 8];
            for (r, row) in coeff_rows.iter_mut().enumerate() {
                for (c, v) in row.iter_mut().enumerate() {
                    *v = coeffs.at(r, c);
                }
            }
            let svd = kernels::svd8(&coeff_rows)?;
            bits.push(svd.s[0].rem_euclid(delta) >= delta / 2.0);
        }
    }
    WatermarkBits::from_bools(bits)
}

/// Color embedding: compute the grayscale watermark delta once and add the
/// same per-pixel delta to every channel, clamping per sample. Extraction
/// goes through the luma of the subject, so the delta must live in luma.
pub fn embed_color(
    host: &Image,
    bits: &WatermarkBits,
    codec: &Codec,
) -> Result<Image, WatermarkError> {
    if host.channels() == 1 {
        let wm = embed(&host.to_grayscale(), bits, codec)?;
        return Ok(wm.to_image());
    }
    if host.channels() != 3 {
        return Err(WatermarkError::NotColor(host.channels()));
    }
    let gray = host.to_grayscale();
    let wm = embed(&gray, bits, codec)?;
    let mut out = host.clone();
    let ch = host.channels() as usize;
    for (i, (&w, &g)) in wm.data().iter().zip(gray.data()).enumerate() {
        let delta = w as i16 - g as i16;
        if delta == 0 {
            continue;
        }
        for c in 0..ch {
            let idx = i * ch + c;
            let v = out.data()[idx] as i16 + delta;
            out.data_mut()[idx] = v.clamp(0, 255) as u8;
        }
    }
    Ok(out)
}
