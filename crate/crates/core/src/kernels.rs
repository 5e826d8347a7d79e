//! Numerical transform kernels: orthonormal 2D DCT-II/III on 4x4 and 8x8
//! blocks, 1-level orthonormal Haar DWT, an 8x8 SVD, and a JPEG
//! quantization round-trip used as the compression attack.

use std::sync::OnceLock;

use thiserror::Error;

use crate::imaging::GrayImage;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("block side must be 4 or 8, got {0}")]
    BadBlockSide(usize),
    #[error("coefficient buffer length {got} does not match {want}")]
    BufferLength { got: usize, want: usize },
    #[error("value at ({row},{col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("image dimensions {w}x{h} must be even")]
    OddDimensions { w: u32, h: u32 },
    #[error("subband dimensions disagree")]
    SubbandMismatch,
    #[error("svd failed to converge after {0} sweeps")]
    SvdNoConvergence(usize),
    #[error("jpeg quality factor {0} out of range 1..=100")]
    BadQualityFactor(u8),
}

/// Dense row-major f64 matrix. The working type for everything that leaves
/// u8 sample space.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub w: usize,
    pub h: usize,
    pub data: Vec<f64>,
}

impl Mat {
    pub fn zeros(w: usize, h: usize) -> Mat {
        Mat {
            w,
            h,
            data: vec![0.0; w * h],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Mat {
        let h = rows.len();
        let w = if h == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(w * h);
        for r in rows {
            assert_eq!(r.len(), w, "ragged rows");
            data.extend_from_slice(r);
        }
        Mat { w, h, data }
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.w + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, v: f64) {
        self.data[row * self.w + col] = v;
    }

    pub fn from_gray(img: &GrayImage) -> Mat {
        Mat {
            w: img.width() as usize,
            h: img.height() as usize,
            data: img.data().iter().map(|&p| p as f64).collect(),
        }
    }

    /// Round and clamp back to u8 samples.
    pub fn to_gray(&self) -> GrayImage {
        let data = self
            .data
            .iter()
            .map(|&v| v.round().clamp(0.0, 255.0) as u8)
            .collect();
        GrayImage::new(self.w as u32, self.h as u32, data).expect("valid dims")
    }
}

/// Square coefficient block, side 4 or 8.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    n: usize,
    coeffs: Vec<f64>,
}

impl Block {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Result<Block, KernelError> {
        if n != 4 && n != 8 {
            return Err(KernelError::BadBlockSide(n));
        }
        if coeffs.len() != n * n {
            return Err(KernelError::BufferLength {
                got: coeffs.len(),
                want: n * n,
            });
        }
        for (i, &v) in coeffs.iter().enumerate() {
            if !v.is_finite() {
                return Err(KernelError::NonFinite {
                    row: i / n,
                    col: i % n,
                });
            }
        }
        Ok(Block { n, coeffs })
    }

    pub fn side(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.coeffs[row * self.n + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, v: f64) {
        self.coeffs[row * self.n + col] = v;
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }
}

/// Orthonormal DCT basis rows: T[k][x] = s_k * cos((2x+1) k pi / 2n),
/// s_0 = sqrt(1/n), s_k = sqrt(2/n).
fn dct_basis(n: usize) -> &'static [f64] {
    static BASIS4: OnceLock<Vec<f64>> = OnceLock::new();
    static BASIS8: OnceLock<Vec<f64>> = OnceLock::new();
    let cell = match n {
        4 => &BASIS4,
        8 => &BASIS8,
        _ => unreachable!("block side checked on construction"),
    };
    cell.get_or_init(|| {
        let mut t = vec![0.0; n * n];
        for k in 0..n {
            let s = if k == 0 {
                (1.0 / n as f64).sqrt()
            } else {
                (2.0 / n as f64).sqrt()
            };
            for x in 0..n {
                t[k * n + x] =
                    s * ((2 * x + 1) as f64 * k as f64 * std::f64::consts::PI / (2.0 * n as f64))
                        .cos();
            }
        }
        t
    })
}

/// 2D DCT-II of a square block: C = T X T^t. Orthonormal, so Parseval holds
/// and idct2 is the exact transpose pass.
pub fn dct2(block: &Block) -> Block {
    let n = block.n;
    let t = dct_basis(n);
    let mut tmp = vec![0.0; n * n]; // T X
    for k in 0..n {
        for col in 0..n {
            let mut acc = 0.0;
            for x in 0..n {
                acc += t[k * n + x] * block.coeffs[x * n + col];
            }
            tmp[k * n + col] = acc;
        }
    }
    let mut out = vec![0.0; n * n]; // (T X) T^t
    for row in 0..n {
        for k in 0..n {
            let mut acc = 0.0;
            for x in 0..n {
                acc += tmp[row * n + x] * t[k * n + x];
            }
            out[row * n + k] = acc;
        }
    }
    Block { n, coeffs: out }
}

/// 2D DCT-III (inverse of [`dct2`]): X = T^t C T.
pub fn idct2(block: &Block) -> Block {
    let n = block.n;
    let t = dct_basis(n);
    let mut tmp = vec![0.0; n * n]; // T^t C
    for x in 0..n {
        for col in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += t[k * n + x] * block.coeffs[k * n + col];
            }
            tmp[x * n + col] = acc;
        }
    }
    let mut out = vec![0.0; n * n]; // (T^t C) T
    for row in 0..n {
        for y in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += tmp[row * n + k] * t[k * n + y];
            }
            out[row * n + y] = acc;
        }
    }
    Block { n, coeffs: out }
}

/// One level of orthonormal Haar subbands, each half the source size.
#[derive(Debug, Clone)]
pub struct SubbandSet {
    pub ll: Mat,
    pub lh: Mat,
    pub hl: Mat,
    pub hh: Mat,
}

impl SubbandSet {
    fn check(&self) -> Result<(), KernelError> {
        let (w, h) = (self.ll.w, self.ll.h);
        for m in [&self.lh, &self.hl, &self.hh] {
            if m.w != w || m.h != h {
                return Err(KernelError::SubbandMismatch);
            }
        }
        Ok(())
    }
}

/// 1-level orthonormal 2D Haar transform. Rows first, then columns; both
/// passes use (a+b)/sqrt(2), (a-b)/sqrt(2).
pub fn dwt_haar(img: &GrayImage) -> Result<SubbandSet, KernelError> {
    if !img.width().is_multiple_of(2) || !img.height().is_multiple_of(2) {
        return Err(KernelError::OddDimensions {
            w: img.width(),
            h: img.height(),
        });
    }
    dwt_haar_mat(&Mat::from_gray(img))
}

pub fn dwt_haar_mat(src: &Mat) -> Result<SubbandSet, KernelError> {
    if !src.w.is_multiple_of(2) || !src.h.is_multiple_of(2) {
        return Err(KernelError::OddDimensions {
            w: src.w as u32,
            h: src.h as u32,
        });
    }
    let hw = src.w / 2;
    let hh = src.h / 2;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // Row pass.
    let mut lo = Mat::zeros(hw, src.h);
    let mut hi = Mat::zeros(hw, src.h);
    for y in 0..src.h {
        for x in 0..hw {
            let a = src.at(y, 2 * x);
            let b = src.at(y, 2 * x + 1);
            lo.set(y, x, (a + b) * s);
            hi.set(y, x, (a - b) * s);
        }
    }
    // Column pass.
    let mut ll = Mat::zeros(hw, hh);
    let mut lh = Mat::zeros(hw, hh);
    let mut hl = Mat::zeros(hw, hh);
    let mut hh_m = Mat::zeros(hw, hh);
    for y in 0..hh {
        for x in 0..hw {
            let la = lo.at(2 * y, x);
            let lb = lo.at(2 * y + 1, x);
            let ha = hi.at(2 * y, x);
            let hb = hi.at(2 * y + 1, x);
            ll.set(y, x, (la + lb) * s);
            lh.set(y, x, (la - lb) * s);
            hl.set(y, x, (ha + hb) * s);
            hh_m.set(y, x, (ha - hb) * s);
        }
    }
    Ok(SubbandSet {
        ll,
        lh,
        hl,
        hh: hh_m,
    })
}

/// Inverse of [`dwt_haar_mat`]; returns the reconstructed real matrix.
pub fn idwt_haar(bands: &SubbandSet) -> Result<Mat, KernelError> {
    bands.check()?;
    let hw = bands.ll.w;
    let hh = bands.ll.h;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // Invert column pass.
    let mut lo = Mat::zeros(hw, hh * 2);
    let mut hi = Mat::zeros(hw, hh * 2);
    for y in 0..hh {
        for x in 0..hw {
            let ll = bands.ll.at(y, x);
            let lh = bands.lh.at(y, x);
            let hl = bands.hl.at(y, x);
            let hhv = bands.hh.at(y, x);
            lo.set(2 * y, x, (ll + lh) * s);
            lo.set(2 * y + 1, x, (ll - lh) * s);
            hi.set(2 * y, x, (hl + hhv) * s);
            hi.set(2 * y + 1, x, (hl - hhv) * s);
        }
    }
    // Invert row pass.
    let mut out = Mat::zeros(hw * 2, hh * 2);
    for y in 0..hh * 2 {
        for x in 0..hw {
            let l = lo.at(y, x);
            let h = hi.at(y, x);
            out.set(y, 2 * x, (l + h) * s);
            out.set(y, 2 * x + 1, (l - h) * s);
        }
    }
    Ok(out)
}

/// Singular value decomposition of an 8x8 block.
#[derive(Debug, Clone)]
pub struct Svd8 {
    /// Left singular vectors, columns of an 8x8 orthogonal matrix.
    pub u: [[f64; 8]; 8],
    /// Singular values, descending, nonnegative.
    pub s: [f64; 8],
    /// Right singular vectors, columns of an 8x8 orthogonal matrix.
    pub v: [[f64; 8]; 8],
}

impl Svd8 {
    /// U diag(S) V^t.
    pub fn reconstruct(&self) -> [[f64; 8]; 8] {
        let mut out = [[0.0; 8]; 8];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let mut acc = 0.0;
                for k in 0..8 {
                    acc += self.u[i][k] * self.s[k] * self.v[j][k];
                }
                *cell = acc;
            }
        }
        out
    }
}

const SVD_MAX_SWEEPS: usize = 100;
const SVD_EPS: f64 = 1e-12;

/// One-sided cyclic Jacobi SVD. Columns of the working copy are rotated
/// until pairwise orthogonal; their norms become the singular values.
pub fn svd8(m: &[[f64; 8]; 8]) -> Result<Svd8, KernelError> {
    // a holds M as columns; v accumulates the right rotations.
    let mut a = [[0.0f64; 8]; 8]; // a[col][row]
    for (i, row) in m.iter().enumerate() {
        for (j, &val) in row.iter().enumerate() {
            if !val.is_finite() {
                return Err(KernelError::NonFinite { row: i, col: j });
            }
            a[j][i] = val;
        }
    }
    let mut v = [[0.0f64; 8]; 8]; // v[col][row]
    for (j, col) in v.iter_mut().enumerate() {
        col[j] = 1.0;
    }
    let frob: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let tol = SVD_EPS * frob.max(1.0);

    let mut converged = false;
    for _sweep in 0..SVD_MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..7 {
            for q in (p + 1)..8 {
                let mut apq = 0.0;
                let mut app = 0.0;
                let mut aqq = 0.0;
                for (&ap, &aq) in a[p].iter().zip(a[q].iter()) {
                    apq += ap * aq;
                    app += ap * ap;
                    aqq += aq * aq;
                }
                off = off.max(apq.abs());
                if apq.abs() <= tol * 1e-3 {
                    continue;
                }
                // Jacobi rotation that zeroes the (p,q) entry of A^t A.
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..8 {
                    let ap = a[p][r];
                    let aq = a[q][r];
                    a[p][r] = c * ap - s * aq;
                    a[q][r] = s * ap + c * aq;
                    let vp = v[p][r];
                    let vq = v[q][r];
                    v[p][r] = c * vp - s * vq;
                    v[q][r] = s * vp + c * vq;
                }
            }
        }
        if off <= tol {
            converged = true;
            break;
        }
    }
    if !converged {
        // Final check: accept if the remaining off-diagonal mass is tiny.
        let mut off = 0.0f64;
        for p in 0..7 {
            for q in (p + 1)..8 {
                let dot: f64 = (0..8).map(|r| a[p][r] * a[q][r]).sum();
                off = off.max(dot.abs());
            }
        }
        if off > tol.max(1e-9 * frob.max(1.0)) {
            return Err(KernelError::SvdNoConvergence(SVD_MAX_SWEEPS));
        }
    }

    // Column norms are the singular values.
    let mut order: Vec<usize> = (0..8).collect();
    let norms: Vec<f64> = (0..8)
        .map(|j| (0..8).map(|r| a[j][r] * a[j][r]).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let mut u = [[0.0f64; 8]; 8];
    let mut s = [0.0f64; 8];
    let mut vt = [[0.0f64; 8]; 8];
    let rank_tol = 1e-12 * frob.max(1.0);
    let mut u_cols: Vec<[f64; 8]> = Vec::with_capacity(8);
    for (k, &j) in order.iter().enumerate() {
        s[k] = norms[j];
        let mut col = [0.0f64; 8];
        if norms[j] > rank_tol {
            for r in 0..8 {
                col[r] = a[j][r] / norms[j];
            }
        }
        u_cols.push(col);
        for r in 0..8 {
            vt[r][k] = v[j][r];
        }
    }
    // Complete zero-norm U columns to an orthonormal basis so U stays
    // orthogonal even for rank-deficient input.
    for k in 0..8 {
        let norm: f64 = u_cols[k].iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.5 {
            continue;
        }
        let mut best: Option<[f64; 8]> = None;
        for e in 0..8 {
            let mut cand = [0.0f64; 8];
            cand[e] = 1.0;
            for filled in u_cols.iter().take(8) {
                let fnorm: f64 = filled.iter().map(|x| x * x).sum::<f64>().sqrt();
                if fnorm < 0.5 {
                    continue;
                }
                let dot: f64 = (0..8).map(|r| cand[r] * filled[r]).sum();
                for r in 0..8 {
                    cand[r] -= dot * filled[r];
                }
            }
            let cn: f64 = cand.iter().map(|x| x * x).sum::<f64>().sqrt();
            if cn > 1e-6 {
                for x in cand.iter_mut() {
                    *x /= cn;
                }
                best = Some(cand);
                break;
            }
        }
        u_cols[k] = best.expect("orthonormal completion always exists in R^8");
    }
    for (k, col) in u_cols.iter().enumerate() {
        for r in 0..8 {
            u[r][k] = col[r];
        }
    }
    Ok(Svd8 { u, s, v: vt })
}

/// ITU T.81 Annex K base luminance quantization table (quality 50).
pub const JPEG_LUMA_QTABLE: [u16; 64] = [
    16, 11, 10, 16, 24, 40, 51, 61, //
    12, 12, 14, 19, 26, 58, 60, 55, //
    14, 13, 16, 24, 40, 57, 69, 56, //
    14, 17, 22, 29, 51, 87, 80, 62, //
    18, 22, 37, 56, 68, 109, 103, 77, //
    24, 35, 55, 64, 81, 104, 113, 92, //
    49, 64, 78, 87, 103, 121, 120, 101, //
    72, 92, 95, 98, 112, 100, 103, 99,
];

/// Quantizer steps for a quality factor, via the libjpeg scaling rule with
/// entries clamped to [1, 255].
pub fn jpeg_quant_table(qf: u8) -> Result<[u16; 64], KernelError> {
    if qf == 0 || qf > 100 {
        return Err(KernelError::BadQualityFactor(qf));
    }
    let scale: u32 = if qf < 50 {
        5000 / qf as u32
    } else {
        200 - 2 * qf as u32
    };
    let mut out = [0u16; 64];
    for (o, &base) in out.iter_mut().zip(JPEG_LUMA_QTABLE.iter()) {
        let v = (base as u32 * scale + 50) / 100;
        *o = v.clamp(1, 255) as u16;
    }
    Ok(out)
}

/// Lossy JPEG simulation: per 8x8 block, level shift, DCT, quantize and
/// dequantize with the scaled luminance table, inverse DCT, clamp. Entropy
/// coding is lossless and therefore skipped. Non-multiple-of-8 dimensions
/// are reflect-padded and cropped back.
pub fn jpeg_roundtrip(img: &GrayImage, qf: u8) -> Result<GrayImage, KernelError> {
    let q = jpeg_quant_table(qf)?;
    let w = img.width() as usize;
    let h = img.height() as usize;
    let pw = w.div_ceil(8) * 8;
    let ph = h.div_ceil(8) * 8;

    // Reflect-pad into an f64 plane.
    let reflect = |i: usize, n: usize| -> usize {
        if i < n {
            i
        } else if n == 1 {
            0
        } else {
            n - 2 - (i - n).min(n - 2)
        }
    };
    let mut plane = vec![0.0f64; pw * ph];
    for y in 0..ph {
        let sy = reflect(y, h);
        for x in 0..pw {
            let sx = reflect(x, w);
            plane[y * pw + x] = img.pixel(sx as u32, sy as u32) as f64 - 128.0;
        }
    }

    for by in (0..ph).step_by(8) {
        for bx in (0..pw).step_by(8) {
            let mut cells = vec![0.0f64; 64];
            for y in 0..8 {
                for x in 0..8 {
                    cells[y * 8 + x] = plane[(by + y) * pw + bx + x];
                }
            }
            let block = Block::new(8, cells).expect("finite samples");
            let mut coeffs = dct2(&block);
            for (c, &step) in coeffs.coeffs.iter_mut().zip(q.iter()) {
                let s = step as f64;
                *c = (*c / s).round() * s;
            }
            let back = idct2(&coeffs);
            for y in 0..8 {
                for x in 0..8 {
                    plane[(by + y) * pw + bx + x] = back.coeffs[y * 8 + x];
                }
            }
        }
    }

    let mut data = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            data.push((plane[y * pw + x] + 128.0).round().clamp(0.0, 255.0) as u8);
        }
    }
    Ok(GrayImage::new(w as u32, h as u32, data).expect("valid dims"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::DetRng;

    /// Direct O(n^4) DCT-II definition, the independent oracle.
    fn dct2_direct(x: &Block) -> Vec<f64> {
        let n = x.side();
        let mut out = vec![0.0; n * n];
        for u in 0..n {
            for v in 0..n {
                let su = if u == 0 {
                    (1.0 / n as f64).sqrt()
                } else {
                    (2.0 / n as f64).sqrt()
                };
                let sv = if v == 0 {
                    (1.0 / n as f64).sqrt()
                } else {
                    (2.0 / n as f64).sqrt()
                };
                let mut acc = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        acc += x.at(i, j)
                            * ((2 * i + 1) as f64 * u as f64 * std::f64::consts::PI
                                / (2.0 * n as f64))
                                .cos()
                            * ((2 * j + 1) as f64 * v as f64 * std::f64::consts::PI
                                / (2.0 * n as f64))
                                .cos();
                    }
                }
                out[u * n + v] = su * sv * acc;
            }
        }
        out
    }

    fn random_block(rng: &mut DetRng, n: usize) -> Block {
        let coeffs: Vec<f64> = (0..n * n).map(|_| rng.next_f64() * 255.0).collect();
        Block::new(n, coeffs).unwrap()
    }

    #[test]
    fn dct_of_constant_is_dc_only() {
        let block = Block::new(8, vec![100.0; 64]).unwrap();
        let c = dct2(&block);
        assert!((c.at(0, 0) - 800.0).abs() < 1e-9);
        for i in 1..64 {
            assert!(c.coeffs()[i].abs() < 1e-9, "AC {i} = {}", c.coeffs()[i]);
        }
        let back = idct2(&c);
        for &v in back.coeffs() {
            assert!((v - 100.0).abs() < 1e-9);
        }
    }

    #[test]
    fn idct_of_zero_is_zero() {
        let z = Block::new(8, vec![0.0; 64]).unwrap();
        assert!(idct2(&z).coeffs().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn dct_matches_direct_definition_on_random_blocks() {
        let mut rng = DetRng::new(0xDC7);
        for trial in 0..100 {
            let n = if trial % 3 == 0 { 4 } else { 8 };
            let block = random_block(&mut rng, n);
            let fast = dct2(&block);
            let direct = dct2_direct(&block);
            for (a, b) in fast.coeffs().iter().zip(direct.iter()) {
                assert!((a - b).abs() <= 1e-9, "trial {trial}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn dct_round_trips_and_preserves_energy() {
        let mut rng = DetRng::new(0xE4E);
        for _ in 0..50 {
            let block = random_block(&mut rng, 8);
            let c = dct2(&block);
            let back = idct2(&c);
            for (a, b) in back.coeffs().iter().zip(block.coeffs().iter()) {
                assert!((a - b).abs() <= 1e-9);
            }
            let e_space: f64 = block.coeffs().iter().map(|x| x * x).sum();
            let e_freq: f64 = c.coeffs().iter().map(|x| x * x).sum();
            assert!((e_space.sqrt() - e_freq.sqrt()).abs() <= 1e-9);
            // And the other composition order.
            let c2 = dct2(&idct2(&c));
            for (a, b) in c2.coeffs().iter().zip(c.coeffs().iter()) {
                assert!((a - b).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn block_validation_errors() {
        assert!(matches!(
            Block::new(5, vec![0.0; 25]),
            Err(KernelError::BadBlockSide(5))
        ));
        assert!(matches!(
            Block::new(4, vec![0.0; 15]),
            Err(KernelError::BufferLength { .. })
        ));
        assert!(matches!(
            Block::new(4, vec![f64::NAN; 16]),
            Err(KernelError::NonFinite { .. })
        ));
    }

    #[test]
    fn haar_constant_image() {
        let img = GrayImage::filled(8, 6, 50);
        let bands = dwt_haar(&img).unwrap();
        assert_eq!(bands.ll.w, 4);
        assert_eq!(bands.ll.h, 3);
        for v in &bands.ll.data {
            assert!((v - 100.0).abs() < 1e-9, "LL must be 2x the constant");
        }
        for m in [&bands.lh, &bands.hl, &bands.hh] {
            assert!(m.data.iter().all(|v| v.abs() < 1e-9));
        }
    }

    #[test]
    fn haar_2x2_hand_values() {
        let m = Mat::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        let bands = dwt_haar_mat(&m).unwrap();
        assert!((bands.ll.at(0, 0) - (1.0 + 2.0 + 3.0 + 4.0) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn haar_round_trip_random() {
        let mut rng = DetRng::new(0x11AA);
        let mut src = Mat::zeros(16, 12);
        for v in &mut src.data {
            *v = rng.next_f64() * 300.0 - 50.0;
        }
        let bands = dwt_haar_mat(&src).unwrap();
        let back = idwt_haar(&bands).unwrap();
        for (a, b) in back.data.iter().zip(src.data.iter()) {
            assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn haar_rejects_odd_dims() {
        let img = GrayImage::filled(7, 8, 0);
        assert!(matches!(
            dwt_haar(&img),
            Err(KernelError::OddDimensions { .. })
        ));
    }

    #[test]
    fn svd_identity() {
        let mut m = [[0.0; 8]; 8];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        let svd = svd8(&m).unwrap();
        for k in 0..8 {
            assert!((svd.s[k] - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn svd_rank_one() {
        // Unit vectors u, v; M = u v^t has singular values (1, 0, ..., 0).
        let u = {
            let mut x = [1.0f64, 2.0, -1.0, 0.5, 3.0, -2.0, 0.0, 1.5];
            let n: f64 = x.iter().map(|a| a * a).sum::<f64>().sqrt();
            x.iter_mut().for_each(|a| *a /= n);
            x
        };
        let v = {
            let mut x = [2.0f64, -1.0, 1.0, 1.0, 0.0, 0.5, -0.5, 2.0];
            let n: f64 = x.iter().map(|a| a * a).sum::<f64>().sqrt();
            x.iter_mut().for_each(|a| *a /= n);
            x
        };
        let mut m = [[0.0f64; 8]; 8];
        for i in 0..8 {
            for j in 0..8 {
                m[i][j] = u[i] * v[j];
            }
        }
        let svd = svd8(&m).unwrap();
        assert!((svd.s[0] - 1.0).abs() <= 1e-10, "s0 = {}", svd.s[0]);
        for k in 1..8 {
            assert!(svd.s[k].abs() <= 1e-10);
        }
        check_reconstruction_and_orthogonality(&m, &svd);
    }

    fn check_reconstruction_and_orthogonality(m: &[[f64; 8]; 8], svd: &Svd8) {
        let rec = svd.reconstruct();
        for i in 0..8 {
            for j in 0..8 {
                assert!(
                    (rec[i][j] - m[i][j]).abs() <= 1e-8,
                    "recon ({i},{j}): {} vs {}",
                    rec[i][j],
                    m[i][j]
                );
            }
        }
        for (label, q) in [("u", &svd.u), ("v", &svd.v)] {
            for a in 0..8 {
                for b in 0..8 {
                    let dot: f64 = (0..8).map(|r| q[r][a] * q[r][b]).sum();
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!(
                        (dot - want).abs() <= 1e-8,
                        "{label} columns {a},{b}: {dot}"
                    );
                }
            }
        }
        for k in 0..7 {
            assert!(svd.s[k] >= svd.s[k + 1] - 1e-12, "descending order");
            assert!(svd.s[k] >= 0.0);
        }
    }

    #[test]
    fn svd_random_blocks_reconstruct() {
        let mut rng = DetRng::new(0x57D);
        for _ in 0..50 {
            let mut m = [[0.0f64; 8]; 8];
            for row in &mut m {
                for v in row.iter_mut() {
                    *v = rng.next_f64() * 500.0 - 250.0;
                }
            }
            let svd = svd8(&m).unwrap();
            check_reconstruction_and_orthogonality(&m, &svd);
        }
    }

    #[test]
    fn svd_zero_matrix() {
        let m = [[0.0f64; 8]; 8];
        let svd = svd8(&m).unwrap();
        assert!(svd.s.iter().all(|&s| s == 0.0));
        check_reconstruction_and_orthogonality(&m, &svd);
    }

    #[test]
    fn jpeg_table_scaling() {
        let q50 = jpeg_quant_table(50).unwrap();
        assert_eq!(q50, JPEG_LUMA_QTABLE, "qf 50 keeps the base table");
        let q100 = jpeg_quant_table(100).unwrap();
        assert!(q100.iter().all(|&s| s == 1), "qf 100 clamps all steps to 1");
        let q10 = jpeg_quant_table(10).unwrap();
        assert_eq!(q10[0], (16 * 500 + 50) / 100);
        assert!(jpeg_quant_table(0).is_err());
        assert!(jpeg_quant_table(101).is_err());
    }

    #[test]
    fn jpeg_constant_image_stays_constant() {
        // 158 - 128 = 30 maps to DC 240, an exact multiple of the DC step at
        // qf 10 (80), 50 (16), 90 (3), and 100 (1).
        for qf in [10u8, 50, 90, 100] {
            let img = GrayImage::filled(64, 48, 158);
            let out = jpeg_roundtrip(&img, qf).unwrap();
            assert!(
                out.data().iter().all(|&p| p == 158),
                "qf {qf} must reproduce the chosen constant exactly"
            );
        }
        // Any constant still comes back constant (blocks are identical).
        let img = GrayImage::filled(40, 40, 137);
        let out = jpeg_roundtrip(&img, 50).unwrap();
        let first = out.pixel(0, 0);
        assert!(out.data().iter().all(|&p| p == first));
    }

    #[test]
    fn jpeg_qf100_deviation_at_most_one() {
        let mut rng = DetRng::new(0x1F9);
        let data: Vec<u8> = (0..64 * 64).map(|_| (rng.next_u64() % 256) as u8).collect();
        let img = GrayImage::new(64, 64, data).unwrap();
        let out = jpeg_roundtrip(&img, 100).unwrap();
        for (a, b) in out.data().iter().zip(img.data().iter()) {
            assert!((*a as i32 - *b as i32).abs() <= 1);
        }
    }

    #[test]
    fn jpeg_roundtrip_idempotent_to_one_sample() {
        // Smooth content away from the clamp boundaries, so requantization
        // sees the same lattice points.
        let mut rng = DetRng::new(0xA77);
        let data: Vec<u8> = (0..64usize * 64)
            .map(|i| {
                let (x, y) = ((i % 64) as f64, (i / 64) as f64);
                let base = 120.0 + 60.0 * (x / 20.0).sin() + 25.0 * (y / 15.0).cos();
                (base + rng.next_f64() * 8.0).round() as u8
            })
            .collect();
        let img = GrayImage::new(64, 64, data).unwrap();
        let once = jpeg_roundtrip(&img, 50).unwrap();
        let twice = jpeg_roundtrip(&once, 50).unwrap();
        for (a, b) in twice.data().iter().zip(once.data().iter()) {
            assert!((*a as i32 - *b as i32).abs() <= 1);
        }
    }

    #[test]
    fn jpeg_pads_odd_sizes() {
        let img = GrayImage::filled(37, 21, 90);
        let out = jpeg_roundtrip(&img, 50).unwrap();
        assert_eq!(out.width(), 37);
        assert_eq!(out.height(), 21);
        // Degenerate sizes exercise the reflect padding edge.
        for (w, h) in [(1u32, 1u32), (1, 9), (3, 2)] {
            let tiny = GrayImage::filled(w, h, 158);
            let out = jpeg_roundtrip(&tiny, 50).unwrap();
            assert_eq!((out.width(), out.height()), (w, h));
        }
    }
}
