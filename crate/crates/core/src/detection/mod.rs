//! Layered passive tamper detection: windowed SSIM (layer 1), feature-match
//! ratio (layer 2), histogram comparison (layer 3), and localization of the
//! changed regions (layer 4).

mod orb;

pub use orb::{
    detect_features as detect_features_unchecked, match_features, Descriptor256, FeatureMatch,
    Features, Keypoint, BRIEF_SEED, FAST_THRESHOLD, MATCH_MAX_DISTANCE, MAX_KEYPOINTS,
};

use thiserror::Error;

use crate::imaging::{resize_bilinear_gray, GrayImage, Rect};
use crate::kernels::Mat;
use crate::metrics::{self, MetricError, SsimParams, SsimResult};

#[derive(Debug, Error)]
pub enum DetectionError {
    #[error("image {w}x{h} below the 32x32 feature-detection minimum")]
    TooSmall { w: u32, h: u32 },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Local SSIM below this marks a pixel as suspect for localization.
pub const SSIM_MASK_THRESHOLD: f64 = 0.90;
/// Minimum bounding-box area reported by layer 4, in pixels squared.
pub const MIN_BOX_AREA: u64 = 64;
/// Per-layer suspicion thresholds for the aggregate report.
pub const SSIM_SUSPECT_BELOW: f64 = 0.98;
pub const MFR_SUSPECT_BELOW: f64 = 90.0;
pub const HIST_SUSPECT_BELOW: f64 = 98.0;

/// Feature detection with the documented minimum-size contract.
pub fn detect_features(img: &GrayImage) -> Result<Features, DetectionError> {
    if img.width() < 32 || img.height() < 32 {
        return Err(DetectionError::TooSmall {
            w: img.width(),
            h: img.height(),
        });
    }
    Ok(orb::detect_features(img))
}

/// Layer 1: windowed structural similarity; the map feeds layer 4.
pub fn layer1_ssim(original: &GrayImage, subject: &GrayImage) -> Result<SsimResult, DetectionError> {
    Ok(metrics::ssim(original, subject, &SsimParams::default())?)
}

/// Layer 2 outcome: the match percentage is relative to the subject's
/// keypoint count.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct MfrResult {
    pub percent: f64,
    pub matches: usize,
    pub keypoints_original: usize,
    pub keypoints_subject: usize,
    /// Set when the subject produced no keypoints at all.
    pub degenerate: bool,
}

/// Layer 2: mutual-best binary feature matching.
pub fn layer2_mfr(original: &GrayImage, subject: &GrayImage) -> Result<MfrResult, DetectionError> {
    let of = detect_features(original)?;
    let sf = detect_features(subject)?;
    Ok(mfr_from_features(&of, &sf))
}

pub fn mfr_from_features(original: &Features, subject: &Features) -> MfrResult {
    if subject.keypoints.is_empty() {
        return MfrResult {
            percent: 0.0,
            matches: 0,
            keypoints_original: original.keypoints.len(),
            keypoints_subject: 0,
            degenerate: true,
        };
    }
    let matches = match_features(original, subject);
    MfrResult {
        percent: 100.0 * matches.len() as f64 / subject.keypoints.len() as f64,
        matches: matches.len(),
        keypoints_original: original.keypoints.len(),
        keypoints_subject: subject.keypoints.len(),
        degenerate: false,
    }
}

/// Layer 3: histogram intersection percentage.
pub fn layer3_hist(original: &GrayImage, subject: &GrayImage) -> f64 {
    metrics::hist_intersection(original, subject)
}

#[derive(Debug, Clone)]
pub struct Localization {
    /// Suspect-pixel mask at image resolution.
    pub mask: Vec<bool>,
    pub mask_width: u32,
    pub mask_height: u32,
    pub boxes: Vec<Rect>,
}

/// Layer 4: threshold the SSIM map, clean it up with a 3x3 majority vote,
/// and report bounding boxes of 8-connected suspect components.
pub fn layer4_localize(
    original: &GrayImage,
    subject: &GrayImage,
) -> Result<Localization, DetectionError> {
    let ssim = layer1_ssim(original, subject)?;
    Ok(localize_from_map(
        &ssim.map,
        original.width(),
        original.height(),
    ))
}

pub fn localize_from_map(map: &Mat, width: u32, height: u32) -> Localization {
    let w = width as usize;
    let h = height as usize;
    // The valid SSIM map is inset by half a window; border pixels stay clean.
    let off_x = (w - map.w) / 2;
    let off_y = (h - map.h) / 2;
    let mut mask = vec![false; w * h];
    for my in 0..map.h {
        for mx in 0..map.w {
            if map.at(my, mx) < SSIM_MASK_THRESHOLD {
                mask[(my + off_y) * w + (mx + off_x)] = true;
            }
        }
    }
    // 3x3 majority vote; out-of-bounds neighbors count as clean.
    let mut cleaned = vec![false; w * h];
    for y in 0..h {
        for x in 0..w {
            let mut set = 0;
            for dy in -1..=1i64 {
                for dx in -1..=1i64 {
                    let sx = x as i64 + dx;
                    let sy = y as i64 + dy;
                    if sx >= 0 && sy >= 0 && sx < w as i64 && sy < h as i64
                        && mask[sy as usize * w + sx as usize]
                    {
                        set += 1;
                    }
                }
            }
            cleaned[y * w + x] = set >= 5;
        }
    }
    // 8-connected components with a scratch stack.
    let mut boxes = Vec::new();
    let mut visited = vec![false; w * h];
    let mut stack = Vec::new();
    for start in 0..w * h {
        if !cleaned[start] || visited[start] {
            continue;
        }
        visited[start] = true;
        stack.push(start);
        let (mut min_x, mut min_y) = (w, h);
        let (mut max_x, mut max_y) = (0usize, 0usize);
        while let Some(idx) = stack.pop() {
            let x = idx % w;
            let y = idx / w;
            min_x = min_x.min(x);
            min_y = min_y.min(y);
            max_x = max_x.max(x);
            max_y = max_y.max(y);
            for dy in -1..=1i64 {
                for dx in -1..=1i64 {
                    let sx = x as i64 + dx;
                    let sy = y as i64 + dy;
                    if sx < 0 || sy < 0 || sx >= w as i64 || sy >= h as i64 {
                        continue;
                    }
                    let nidx = sy as usize * w + sx as usize;
                    if cleaned[nidx] && !visited[nidx] {
                        visited[nidx] = true;
                        stack.push(nidx);
                    }
                }
            }
        }
        let rect = Rect::new(
            min_x as u32,
            min_y as u32,
            (max_x - min_x + 1) as u32,
            (max_y - min_y + 1) as u32,
        );
        if rect.area() >= MIN_BOX_AREA {
            boxes.push(rect);
        }
    }
    boxes.sort_by_key(|r| (r.y, r.x));
    Localization {
        mask: cleaned,
        mask_width: width,
        mask_height: height,
        boxes,
    }
}

impl Localization {
    /// Suspect mask as an image: suspect pixels dark.
    pub fn mask_image(&self) -> GrayImage {
        let data = self
            .mask
            .iter()
            .map(|&m| if m { 0u8 } else { 255 })
            .collect();
        GrayImage::new(self.mask_width, self.mask_height, data).expect("mask dims")
    }
}

/// Annotated overlay: the subject with localization boxes outlined for
/// visual inspection. Gray subjects are promoted to RGB so the outlines can
/// be colored.
pub fn annotate_boxes(subject: &crate::imaging::Image, boxes: &[Rect]) -> crate::imaging::Image {
    const OUTLINE: [u8; 3] = [220, 30, 30];
    const THICKNESS: u32 = 2;
    let mut out = if subject.channels() == 3 {
        subject.clone()
    } else {
        let gray = subject.to_grayscale();
        let mut data = Vec::with_capacity(gray.data().len() * 3);
        for &p in gray.data() {
            data.extend_from_slice(&[p, p, p]);
        }
        crate::imaging::Image::new(subject.width(), subject.height(), 3, data)
            .expect("same dims")
    };
    let (w, h) = (out.width(), out.height());
    let mut paint = |x: u32, y: u32| {
        if x < w && y < h {
            for (c, &v) in OUTLINE.iter().enumerate() {
                out.set_sample(x, y, c as u8, v);
            }
        }
    };
    for b in boxes {
        for t in 0..THICKNESS {
            for x in b.x.saturating_sub(t)..=(b.x + b.w + t).min(w.saturating_sub(1)) {
                paint(x, b.y.saturating_sub(t));
                paint(x, (b.y + b.h + t).min(h.saturating_sub(1)));
            }
            for y in b.y.saturating_sub(t)..=(b.y + b.h + t).min(h.saturating_sub(1)) {
                paint(b.x.saturating_sub(t), y);
                paint((b.x + b.w + t).min(w.saturating_sub(1)), y);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TemplateMatch {
    pub x: u32,
    pub y: u32,
    /// Zero-normalized cross-correlation at the best position, in [-1, 1].
    pub score: f64,
}

/// Exhaustive zero-normalized cross-correlation search for a template inside
/// a subject image; returns the argmax position of the template's top-left
/// corner.
pub fn match_template(haystack: &GrayImage, template: &GrayImage) -> Option<TemplateMatch> {
    let (hw, hh) = (haystack.width() as usize, haystack.height() as usize);
    let (tw, th) = (template.width() as usize, template.height() as usize);
    if tw == 0 || th == 0 || tw > hw || th > hh {
        return None;
    }
    let n = (tw * th) as f64;
    let t: Vec<f64> = template.data().iter().map(|&p| p as f64).collect();
    let t_mean = t.iter().sum::<f64>() / n;
    let t_centered: Vec<f64> = t.iter().map(|v| v - t_mean).collect();
    let t_var: f64 = t_centered.iter().map(|v| v * v).sum();
    let t_norm = t_var.sqrt();

    // Integral images over the haystack for window means and variances.
    let mut sum = vec![0.0f64; (hw + 1) * (hh + 1)];
    let mut sum2 = vec![0.0f64; (hw + 1) * (hh + 1)];
    for y in 0..hh {
        let mut row = 0.0;
        let mut row2 = 0.0;
        for x in 0..hw {
            let v = haystack.pixel(x as u32, y as u32) as f64;
            row += v;
            row2 += v * v;
            sum[(y + 1) * (hw + 1) + (x + 1)] = sum[y * (hw + 1) + (x + 1)] + row;
            sum2[(y + 1) * (hw + 1) + (x + 1)] = sum2[y * (hw + 1) + (x + 1)] + row2;
        }
    }
    let window = |table: &[f64], x: usize, y: usize| -> f64 {
        table[(y + th) * (hw + 1) + (x + tw)] + table[y * (hw + 1) + x]
            - table[y * (hw + 1) + (x + tw)]
            - table[(y + th) * (hw + 1) + x]
    };

    let mut best: Option<TemplateMatch> = None;
    for y in 0..=(hh - th) {
        for x in 0..=(hw - tw) {
            let mut dot = 0.0f64;
            for ty in 0..th {
                for tx in 0..tw {
                    dot += haystack.pixel((x + tx) as u32, (y + ty) as u32) as f64
                        * t_centered[ty * tw + tx];
                }
            }
            let s = window(&sum, x, y);
            let s2 = window(&sum2, x, y);
            let s_var = s2 - s * s / n;
            let denom = t_norm * s_var.max(0.0).sqrt();
            let score = if denom > 1e-12 { dot / denom } else { 0.0 };
            if best.is_none_or(|b| score > b.score) {
                best = Some(TemplateMatch {
                    x: x as u32,
                    y: y as u32,
                    score,
                });
            }
        }
    }
    best
}

/// Aggregated layered report.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct TamperReport {
    pub ssim: f64,
    pub mfr: MfrResult,
    pub histogram: f64,
    pub boxes: Vec<Rect>,
    pub ssim_suspect: bool,
    pub mfr_suspect: bool,
    pub histogram_suspect: bool,
    pub localization_suspect: bool,
    /// Set when the subject was rescaled to the original's dimensions for
    /// layers 1, 3, and 4.
    pub subject_rescaled: bool,
}

impl TamperReport {
    pub fn any_suspect(&self) -> bool {
        self.ssim_suspect || self.mfr_suspect || self.histogram_suspect || self.localization_suspect
    }
}

/// Run all four layers. Layers 1, 3, and 4 compare at the original's
/// resolution (the subject is rescaled if it differs); layer 2 matches
/// features on the subject as-is, since its descriptors survive cropping
/// untouched but not interpolation.
pub fn detect_report(
    original: &GrayImage,
    subject: &GrayImage,
) -> Result<TamperReport, DetectionError> {
    let rescaled;
    let aligned: &GrayImage = if subject.width() != original.width()
        || subject.height() != original.height()
    {
        rescaled = Some(resize_bilinear_gray(
            subject,
            original.width(),
            original.height(),
        ));
        rescaled.as_ref().unwrap()
    } else {
        rescaled = None;
        subject
    };
    let ssim = layer1_ssim(original, aligned)?;
    let mfr = layer2_mfr(original, subject)?;
    let histogram = layer3_hist(original, aligned);
    let localization = localize_from_map(&ssim.map, original.width(), original.height());
    Ok(TamperReport {
        ssim: ssim.score,
        mfr: mfr.clone(),
        histogram,
        ssim_suspect: ssim.score < SSIM_SUSPECT_BELOW,
        mfr_suspect: mfr.percent < MFR_SUSPECT_BELOW,
        histogram_suspect: histogram < HIST_SUSPECT_BELOW,
        localization_suspect: !localization.boxes.is_empty(),
        boxes: localization.boxes,
        subject_rescaled: rescaled.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attacks::{apply_tamper, TamperSpec};
    use crate::synth;

    fn scene_gray() -> GrayImage {
        synth::test_scene(synth::DEFAULT_SCENE_SEED).to_grayscale()
    }

    #[test]
    fn identical_pair_is_clean() {
        let img = scene_gray();
        let report = detect_report(&img, &img).unwrap();
        assert_eq!(report.ssim, 1.0);
        assert!(report.mfr.percent >= 95.0, "mfr {}", report.mfr.percent);
        assert_eq!(report.histogram, 100.0);
        assert!(report.boxes.is_empty());
        assert!(!report.any_suspect());
    }

    #[test]
    fn blank_subject_is_degenerate_not_an_error() {
        let img = scene_gray();
        let blank = GrayImage::filled(512, 512, 128);
        let mfr = layer2_mfr(&img, &blank).unwrap();
        assert!(mfr.degenerate);
        assert_eq!(mfr.percent, 0.0);
        assert_eq!(mfr.matches, 0);
    }

    #[test]
    fn tiny_image_is_rejected() {
        let img = GrayImage::filled(16, 16, 0);
        assert!(matches!(
            detect_features(&img),
            Err(DetectionError::TooSmall { .. })
        ));
    }

    #[test]
    fn copy_move_box_overlaps_paste_rect() {
        let scene = synth::test_scene(synth::DEFAULT_SCENE_SEED);
        let tampered = apply_tamper(&scene, &TamperSpec::default_copy_move()).unwrap();
        let loc = layer4_localize(&scene.to_grayscale(), &tampered.to_grayscale()).unwrap();
        let truth = Rect::new(256, 256, 64, 64);
        let best = loc
            .boxes
            .iter()
            .map(|b| b.iou(&truth))
            .fold(0.0f64, f64::max);
        assert!(best >= 0.3, "best IoU {best}, boxes {:?}", loc.boxes);
    }

    #[test]
    fn untampered_has_no_boxes_and_source_region_stays_clean() {
        let scene = synth::test_scene(synth::DEFAULT_SCENE_SEED).to_grayscale();
        let loc = layer4_localize(&scene, &scene).unwrap();
        assert!(loc.boxes.is_empty());
    }

    #[test]
    fn template_search_finds_the_pasted_patch() {
        let scene = synth::test_scene(synth::DEFAULT_SCENE_SEED);
        let tampered = apply_tamper(&scene, &TamperSpec::default_copy_move()).unwrap();
        let subject = tampered.to_grayscale();
        // The template is the pasted content itself.
        let template = tampered
            .copy_region(Rect::new(256, 256, 64, 64))
            .unwrap()
            .to_grayscale();
        let m = match_template(&subject, &template).unwrap();
        // Both the paste site and the copy source are perfect matches; the
        // argmax must be one of them, within 2 px.
        let near = |a: u32, b: u32| a.abs_diff(b) <= 2;
        assert!(
            (near(m.x, 256) && near(m.y, 256)) || (near(m.x, 64) && near(m.y, 64)),
            "found at ({}, {}) score {}",
            m.x,
            m.y,
            m.score
        );
        assert!(m.score > 0.99);
    }

    #[test]
    fn annotated_overlay_outlines_boxes() {
        let scene = synth::test_scene(synth::DEFAULT_SCENE_SEED);
        let boxes = vec![Rect::new(100, 120, 40, 30), Rect::new(0, 0, 10, 10)];
        let overlay = annotate_boxes(&scene, &boxes);
        assert_eq!(overlay.channels(), 3);
        // Outline pixel on the first box's top edge.
        assert_eq!(overlay.sample(110, 120, 0), 220);
        assert_eq!(overlay.sample(110, 120, 1), 30);
        // Interior untouched.
        assert_eq!(
            overlay.sample(120, 135, 0),
            scene.sample(120, 135, 0),
            "box interiors keep subject content"
        );
        // Gray input is promoted to RGB.
        let gray_overlay = annotate_boxes(&scene.to_grayscale().to_image(), &boxes);
        assert_eq!(gray_overlay.channels(), 3);
    }

    #[test]
    fn self_match_mfr_is_high_and_match_count_symmetric() {
        let img = scene_gray();
        let f = detect_features(&img).unwrap();
        let fwd = match_features(&f, &f);
        let rev = match_features(&f, &f);
        assert_eq!(fwd.len(), rev.len());
        let mfr = mfr_from_features(&f, &f);
        assert!(mfr.percent >= 95.0);
    }

    #[test]
    fn mfr_bounded_and_swap_symmetric_in_match_count() {
        let scene = synth::test_scene(synth::DEFAULT_SCENE_SEED);
        let tampered = apply_tamper(&scene, &TamperSpec::default_noise_blur(crate::attacks::BENCH_NOISE_BLUR_SEED)).unwrap();
        let a = detect_features(&scene.to_grayscale()).unwrap();
        let b = detect_features(&tampered.to_grayscale()).unwrap();
        let ab = match_features(&a, &b);
        let ba = match_features(&b, &a);
        assert_eq!(ab.len(), ba.len(), "mutual-best set is symmetric");
        let mfr = mfr_from_features(&a, &b);
        assert!((0.0..=100.0).contains(&mfr.percent));
    }
}
