//! Quality and distance metrics: MSE, PSNR, watermark bit errors, windowed
//! SSIM with a local map, and histogram intersection.

use thiserror::Error;

use crate::imaging::GrayImage;
use crate::kernels::Mat;
use crate::watermark::WatermarkBits;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("dimension mismatch: {aw}x{ah} vs {bw}x{bh}")]
    DimensionMismatch { aw: u32, ah: u32, bw: u32, bh: u32 },
    #[error("image {w}x{h} smaller than the {win}x{win} window")]
    TooSmall { w: u32, h: u32, win: u32 },
}

fn check_dims(a: &GrayImage, b: &GrayImage) -> Result<(), MetricError> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(MetricError::DimensionMismatch {
            aw: a.width(),
            ah: a.height(),
            bw: b.width(),
            bh: b.height(),
        });
    }
    Ok(())
}

/// Mean squared error over all samples.
pub fn mse(i: &GrayImage, k: &GrayImage) -> Result<f64, MetricError> {
    check_dims(i, k)?;
    let n = i.data().len() as f64;
    let sum: f64 = i
        .data()
        .iter()
        .zip(k.data())
        .map(|(&a, &b)| {
            let d = a as f64 - b as f64;
            d * d
        })
        .sum();
    Ok(sum / n)
}

/// Peak signal-to-noise ratio in dB; identical images yield +infinity.
pub fn psnr(i: &GrayImage, k: &GrayImage, max_value: f64) -> Result<f64, MetricError> {
    let m = mse(i, k)?;
    Ok(psnr_from_mse(m, max_value))
}

pub fn psnr_from_mse(mse: f64, max_value: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        20.0 * max_value.log10() - 10.0 * mse.log10()
    }
}

/// Hamming distance between two fixed-length watermark bit vectors.
pub fn bit_errors(a: &WatermarkBits, b: &WatermarkBits) -> u32 {
    a.bits()
        .iter()
        .zip(b.bits())
        .filter(|(x, y)| x != y)
        .count() as u32
}

/// SSIM window parameters: 11x11 Gaussian, sigma 1.5, the usual stabilizing
/// constants for 8-bit data.
#[derive(Debug, Clone)]
pub struct SsimParams {
    pub window: usize,
    pub sigma: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Default for SsimParams {
    fn default() -> Self {
        SsimParams {
            window: 11,
            sigma: 1.5,
            c1: (0.01 * 255.0) * (0.01 * 255.0),
            c2: (0.03 * 255.0) * (0.03 * 255.0),
        }
    }
}

/// Mean SSIM plus the local map.
#[derive(Debug, Clone)]
pub struct SsimResult {
    pub score: f64,
    /// Local SSIM at every valid window position; cell (mx, my) corresponds
    /// to the window centered at image pixel (mx + window/2, my + window/2).
    pub map: Mat,
}

fn gaussian_kernel(win: usize, sigma: f64) -> Vec<f64> {
    let half = (win / 2) as f64;
    let mut k: Vec<f64> = (0..win)
        .map(|i| {
            let d = i as f64 - half;
            (-d * d / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let sum: f64 = k.iter().sum();
    for v in &mut k {
        *v /= sum;
    }
    k
}

/// Separable valid-region convolution with a symmetric 1D kernel.
fn filter_valid(src: &Mat, kernel: &[f64]) -> Mat {
    let win = kernel.len();
    let ow = src.w - win + 1;
    let oh = src.h - win + 1;
    // Horizontal pass.
    let mut tmp = Mat::zeros(ow, src.h);
    for y in 0..src.h {
        for x in 0..ow {
            let mut acc = 0.0;
            for (k, &kv) in kernel.iter().enumerate() {
                acc += kv * src.at(y, x + k);
            }
            tmp.set(y, x, acc);
        }
    }
    // Vertical pass.
    let mut out = Mat::zeros(ow, oh);
    for y in 0..oh {
        for x in 0..ow {
            let mut acc = 0.0;
            for (k, &kv) in kernel.iter().enumerate() {
                acc += kv * tmp.at(y + k, x);
            }
            out.set(y, x, acc);
        }
    }
    out
}

/// Windowed SSIM per the standard luminance/contrast/structure form.
pub fn ssim(x: &GrayImage, y: &GrayImage, params: &SsimParams) -> Result<SsimResult, MetricError> {
    check_dims(x, y)?;
    let win = params.window;
    if (x.width() as usize) < win || (x.height() as usize) < win {
        return Err(MetricError::TooSmall {
            w: x.width(),
            h: x.height(),
            win: win as u32,
        });
    }
    let xm = Mat::from_gray(x);
    let ym = Mat::from_gray(y);
    let mut xx = Mat::zeros(xm.w, xm.h);
    let mut yy = Mat::zeros(xm.w, xm.h);
    let mut xy = Mat::zeros(xm.w, xm.h);
    for i in 0..xm.data.len() {
        xx.data[i] = xm.data[i] * xm.data[i];
        yy.data[i] = ym.data[i] * ym.data[i];
        xy.data[i] = xm.data[i] * ym.data[i];
    }
    let kernel = gaussian_kernel(win, params.sigma);
    let mu_x = filter_valid(&xm, &kernel);
    let mu_y = filter_valid(&ym, &kernel);
    let e_xx = filter_valid(&xx, &kernel);
    let e_yy = filter_valid(&yy, &kernel);
    let e_xy = filter_valid(&xy, &kernel);

    let mut map = Mat::zeros(mu_x.w, mu_x.h);
    let mut total = 0.0;
    for i in 0..map.data.len() {
        let mx = mu_x.data[i];
        let my = mu_y.data[i];
        let var_x = e_xx.data[i] - mx * mx;
        let var_y = e_yy.data[i] - my * my;
        let cov = e_xy.data[i] - mx * my;
        let l = (2.0 * mx * my + params.c1) / (mx * mx + my * my + params.c1);
        let cs = (2.0 * cov + params.c2) / (var_x + var_y + params.c2);
        let v = l * cs;
        map.data[i] = v;
        total += v;
    }
    let score = total / map.data.len() as f64;
    Ok(SsimResult { score, map })
}

/// Histogram intersection of normalized 256-bin intensity histograms, as a
/// percentage. Inputs may differ in size; histograms are normalized to
/// probability mass first.
pub fn hist_intersection(x: &GrayImage, y: &GrayImage) -> f64 {
    let hx = normalized_hist(x);
    let hy = normalized_hist(y);
    let overlap: f64 = hx.iter().zip(hy.iter()).map(|(a, b)| a.min(*b)).sum();
    100.0 * overlap
}

fn normalized_hist(img: &GrayImage) -> [f64; 256] {
    let mut counts = [0u64; 256];
    for &p in img.data() {
        counts[p as usize] += 1;
    }
    let n = img.data().len() as f64;
    let mut out = [0.0; 256];
    for (o, &c) in out.iter_mut().zip(counts.iter()) {
        *o = c as f64 / n;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::DetRng;

    fn random_gray(rng: &mut DetRng, w: u32, h: u32) -> GrayImage {
        let data: Vec<u8> = (0..w as usize * h as usize)
            .map(|_| (rng.next_u64() % 256) as u8)
            .collect();
        GrayImage::new(w, h, data).unwrap()
    }

    #[test]
    fn mse_basics() {
        let a = GrayImage::filled(16, 16, 100);
        assert_eq!(mse(&a, &a).unwrap(), 0.0);
        let b = GrayImage::filled(16, 16, 102);
        assert_eq!(mse(&a, &b).unwrap(), 4.0);
        let c = GrayImage::filled(8, 16, 0);
        assert!(mse(&a, &c).is_err());
    }

    #[test]
    fn mse_matches_double_loop_oracle() {
        let mut rng = DetRng::new(0x35E);
        for _ in 0..20 {
            let a = random_gray(&mut rng, 33, 21);
            let b = random_gray(&mut rng, 33, 21);
            let fast = mse(&a, &b).unwrap();
            // Independent brute-force summation.
            let mut acc = 0.0f64;
            for y in 0..21u32 {
                for x in 0..33u32 {
                    let d = a.pixel(x, y) as f64 - b.pixel(x, y) as f64;
                    acc += d * d;
                }
            }
            let oracle = acc / (33.0 * 21.0);
            assert!((fast - oracle).abs() <= 1e-12);
        }
    }

    #[test]
    fn mse_symmetric_nonnegative() {
        let mut rng = DetRng::new(0x91);
        let a = random_gray(&mut rng, 17, 9);
        let b = random_gray(&mut rng, 17, 9);
        assert_eq!(mse(&a, &b).unwrap(), mse(&b, &a).unwrap());
        assert!(mse(&a, &b).unwrap() > 0.0);
    }

    #[test]
    fn psnr_reference_value() {
        let a = GrayImage::filled(16, 16, 100);
        let b = GrayImage::filled(16, 16, 102);
        let v = psnr(&a, &b, 255.0).unwrap();
        assert!((v - 42.1102).abs() < 1e-3, "got {v}");
        assert_eq!(psnr(&a, &a, 255.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn psnr_identity_with_mse() {
        let mut rng = DetRng::new(0x7A);
        for _ in 0..100 {
            let a = random_gray(&mut rng, 12, 12);
            let b = random_gray(&mut rng, 12, 12);
            let m = mse(&a, &b).unwrap();
            let p = psnr(&a, &b, 255.0).unwrap();
            let direct = 20.0 * 255.0f64.log10() - 10.0 * m.log10();
            assert!((p - direct).abs() <= 1e-9);
        }
    }

    #[test]
    fn ssim_self_is_exactly_one() {
        let mut rng = DetRng::new(0x55);
        let a = random_gray(&mut rng, 32, 24);
        let r = ssim(&a, &a, &SsimParams::default()).unwrap();
        assert_eq!(r.score, 1.0);
        assert!(r.map.data.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn ssim_penalizes_mean_shift() {
        // +30 with no clamping.
        let mut rng = DetRng::new(0x56);
        let data: Vec<u8> = (0..32 * 32).map(|_| (rng.next_u64() % 200) as u8).collect();
        let a = GrayImage::new(32, 32, data).unwrap();
        let shifted: Vec<u8> = a.data().iter().map(|&p| p + 30).collect();
        let b = GrayImage::new(32, 32, shifted).unwrap();
        let r = ssim(&a, &b, &SsimParams::default()).unwrap();
        assert!(r.score < 1.0);
        assert!(r.score > 0.0);
    }

    #[test]
    fn ssim_symmetric_and_bounded() {
        let mut rng = DetRng::new(0x57);
        let a = random_gray(&mut rng, 24, 24);
        let b = random_gray(&mut rng, 24, 24);
        let ab = ssim(&a, &b, &SsimParams::default()).unwrap().score;
        let ba = ssim(&b, &a, &SsimParams::default()).unwrap().score;
        assert!((ab - ba).abs() < 1e-12);
        assert!(ab <= 1.0);
    }

    #[test]
    fn ssim_nearly_invariant_under_common_shift() {
        // The covariance/variance factor is exactly shift invariant; the
        // luminance factor is not (its numerator grows with the shared mean
        // while the gap (mu_x - mu_y)^2 stays fixed), so the score is only
        // approximately preserved. Assert a tight practical bound on a
        // near-duplicate pair.
        let mut rng = DetRng::new(0x58);
        let data: Vec<u8> = (0..24 * 24).map(|_| 60 + (rng.next_u64() % 80) as u8).collect();
        let a = GrayImage::new(24, 24, data).unwrap();
        let perturbed: Vec<u8> = a
            .data()
            .iter()
            .enumerate()
            .map(|(i, &p)| if i % 7 == 0 { p + 6 } else { p })
            .collect();
        let b = GrayImage::new(24, 24, perturbed).unwrap();
        let base = ssim(&a, &b, &SsimParams::default()).unwrap().score;
        let a2 = GrayImage::new(24, 24, a.data().iter().map(|&p| p + 40).collect()).unwrap();
        let b2 = GrayImage::new(24, 24, b.data().iter().map(|&p| p + 40).collect()).unwrap();
        let shifted = ssim(&a2, &b2, &SsimParams::default()).unwrap().score;
        assert!((base - shifted).abs() < 2e-3, "{base} vs {shifted}");
    }

    #[test]
    fn ssim_rejects_small_images() {
        let a = GrayImage::filled(8, 8, 0);
        assert!(matches!(
            ssim(&a, &a, &SsimParams::default()),
            Err(MetricError::TooSmall { .. })
        ));
    }

    #[test]
    fn hist_intersection_bounds() {
        let a = GrayImage::filled(16, 16, 7);
        assert_eq!(hist_intersection(&a, &a), 100.0);
        let black = GrayImage::filled(16, 16, 0);
        let white = GrayImage::filled(16, 16, 255);
        assert_eq!(hist_intersection(&black, &white), 0.0);
    }

    #[test]
    fn hist_intersection_permutation_invariant() {
        let mut rng = DetRng::new(0x99);
        let a = random_gray(&mut rng, 16, 16);
        let b = random_gray(&mut rng, 16, 16);
        let base = hist_intersection(&a, &b);
        // Apply the same pixel permutation to both.
        let mut order: Vec<usize> = (0..256).collect();
        for i in (1..256).rev() {
            let j = rng.next_below(i as u64 + 1) as usize;
            order.swap(i, j);
        }
        let permute = |img: &GrayImage| {
            let data: Vec<u8> = order.iter().map(|&i| img.data()[i]).collect();
            GrayImage::new(16, 16, data).unwrap()
        };
        let after = hist_intersection(&permute(&a), &permute(&b));
        assert!((base - after).abs() < 1e-12);
    }
}
