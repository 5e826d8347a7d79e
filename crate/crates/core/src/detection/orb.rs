//! Single-scale binary feature pipeline: FAST-9 corners ranked by Harris
//! response, intensity-centroid orientation, and a rotated 256-bit BRIEF
//! descriptor with a fixed seeded sampling pattern.
//!
//! The matcher only needs to count corresponding features between an
//! original and a subject at one scale, so the image-pyramid half of the
//! usual pipeline is intentionally absent.

use crate::imaging::GrayImage;
use crate::util::DetRng;

/// FAST segment-test threshold.
pub const FAST_THRESHOLD: i32 = 20;
/// Keypoints kept after Harris ranking.
pub const MAX_KEYPOINTS: usize = 500;
/// Keypoints closer than this to a border cannot be described.
pub const BORDER: u32 = 17;
/// Seed for the BRIEF sampling pattern.
pub const BRIEF_SEED: u64 = 0x5EC0DE;
/// Required arc length for the segment test.
const FAST_ARC: u32 = 9;

const CIRCLE: [(i32, i32); 16] = [
    (0, -3),
    (1, -3),
    (2, -2),
    (3, -1),
    (3, 0),
    (3, 1),
    (2, 2),
    (1, 3),
    (0, 3),
    (-1, 3),
    (-2, 2),
    (-3, 1),
    (-3, 0),
    (-3, -1),
    (-2, -2),
    (-1, -3),
];

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Keypoint {
    pub x: u32,
    pub y: u32,
    /// Harris corner response used for ranking.
    pub response: f64,
    /// Intensity-centroid orientation, radians.
    pub angle: f64,
}

/// 256-bit binary descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Descriptor256(pub [u64; 4]);

impl Descriptor256 {
    pub fn hamming(&self, other: &Descriptor256) -> u32 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a ^ b).count_ones())
            .sum()
    }
}

#[derive(Debug, Clone, Default)]
pub struct Features {
    pub keypoints: Vec<Keypoint>,
    pub descriptors: Vec<Descriptor256>,
}

/// Circular run test: does `mask` contain a wrap-around run of at least
/// `arc` set bits among its low 16?
fn has_arc(mask: u16, arc: u32) -> bool {
    if mask == 0xFFFF {
        return true;
    }
    let doubled = (mask as u32) | ((mask as u32) << 16);
    let mut run = 0u32;
    for i in 0..32 {
        if doubled >> i & 1 == 1 {
            run += 1;
            if run >= arc {
                return true;
            }
        } else {
            run = 0;
        }
    }
    false
}

fn fast_corner(img: &GrayImage, x: u32, y: u32) -> bool {
    let c = img.pixel(x, y) as i32;
    let hi = c + FAST_THRESHOLD;
    let lo = c - FAST_THRESHOLD;
    // Quick reject: a contiguous arc of 9 always covers at least two of the
    // four compass points.
    let compass = [CIRCLE[0], CIRCLE[4], CIRCLE[8], CIRCLE[12]];
    let mut brighter = 0;
    let mut darker = 0;
    for (dx, dy) in compass {
        let p = img.pixel((x as i32 + dx) as u32, (y as i32 + dy) as u32) as i32;
        if p > hi {
            brighter += 1;
        } else if p < lo {
            darker += 1;
        }
    }
    if brighter < 2 && darker < 2 {
        return false;
    }
    let mut bright_mask = 0u16;
    let mut dark_mask = 0u16;
    for (i, (dx, dy)) in CIRCLE.iter().enumerate() {
        let p = img.pixel((x as i32 + dx) as u32, (y as i32 + dy) as u32) as i32;
        if p > hi {
            bright_mask |= 1 << i;
        } else if p < lo {
            dark_mask |= 1 << i;
        }
    }
    has_arc(bright_mask, FAST_ARC) || has_arc(dark_mask, FAST_ARC)
}

/// Harris response from Sobel gradients summed over a 7x7 window.
fn harris_response(img: &GrayImage, x: u32, y: u32) -> f64 {
    let mut sxx = 0.0f64;
    let mut syy = 0.0f64;
    let mut sxy = 0.0f64;
    let at = |dx: i32, dy: i32| -> f64 {
        img.pixel((x as i32 + dx) as u32, (y as i32 + dy) as u32) as f64
    };
    for wy in -3..=3i32 {
        for wx in -3..=3i32 {
            let gx = at(wx + 1, wy - 1) + 2.0 * at(wx + 1, wy) + at(wx + 1, wy + 1)
                - at(wx - 1, wy - 1)
                - 2.0 * at(wx - 1, wy)
                - at(wx - 1, wy + 1);
            let gy = at(wx - 1, wy + 1) + 2.0 * at(wx, wy + 1) + at(wx + 1, wy + 1)
                - at(wx - 1, wy - 1)
                - 2.0 * at(wx, wy - 1)
                - at(wx + 1, wy - 1);
            sxx += gx * gx;
            syy += gy * gy;
            sxy += gx * gy;
        }
    }
    sxx * syy - sxy * sxy - 0.04 * (sxx + syy) * (sxx + syy)
}

fn orientation(img: &GrayImage, x: u32, y: u32) -> f64 {
    const RADIUS: i32 = 15;
    let mut m10 = 0.0f64;
    let mut m01 = 0.0f64;
    for dy in -RADIUS..=RADIUS {
        for dx in -RADIUS..=RADIUS {
            if dx * dx + dy * dy > RADIUS * RADIUS {
                continue;
            }
            let sx = x as i32 + dx;
            let sy = y as i32 + dy;
            if sx < 0 || sy < 0 || sx >= img.width() as i32 || sy >= img.height() as i32 {
                continue;
            }
            let v = img.pixel(sx as u32, sy as u32) as f64;
            m10 += dx as f64 * v;
            m01 += dy as f64 * v;
        }
    }
    m01.atan2(m10)
}

type SamplePair = ((i32, i32), (i32, i32));

/// The fixed BRIEF sampling pattern: 256 point pairs inside a radius-13
/// disc, drawn once from the pattern seed.
fn brief_pattern() -> &'static [SamplePair; 256] {
    use std::sync::OnceLock;
    static PATTERN: OnceLock<[SamplePair; 256]> = OnceLock::new();
    PATTERN.get_or_init(|| {
        let mut rng = DetRng::new(BRIEF_SEED);
        let draw = |rng: &mut DetRng| -> (i32, i32) {
            loop {
                let px = rng.next_range_i32(-13, 13);
                let py = rng.next_range_i32(-13, 13);
                if px * px + py * py <= 13 * 13 {
                    return (px, py);
                }
            }
        };
        let mut pattern = [((0, 0), (0, 0)); 256];
        for pair in &mut pattern {
            *pair = (draw(&mut rng), draw(&mut rng));
        }
        pattern
    })
}

/// Summed-area table for 5x5 box responses.
struct Integral {
    w: usize,
    data: Vec<u64>,
}

impl Integral {
    fn new(img: &GrayImage) -> Integral {
        let w = img.width() as usize;
        let h = img.height() as usize;
        let mut data = vec![0u64; (w + 1) * (h + 1)];
        for y in 0..h {
            let mut row = 0u64;
            for x in 0..w {
                row += img.pixel(x as u32, y as u32) as u64;
                data[(y + 1) * (w + 1) + (x + 1)] = data[y * (w + 1) + (x + 1)] + row;
            }
        }
        Integral { w: w + 1, data }
    }

    /// Sum of the 5x5 box centered at (x, y); caller keeps it in bounds.
    fn box5(&self, x: i32, y: i32) -> u64 {
        let x0 = (x - 2) as usize;
        let y0 = (y - 2) as usize;
        let x1 = (x + 3) as usize;
        let y1 = (y + 3) as usize;
        self.data[y1 * self.w + x1] + self.data[y0 * self.w + x0]
            - self.data[y0 * self.w + x1]
            - self.data[y1 * self.w + x0]
    }
}

/// FAST-9 detection, 3x3 non-maximum suppression and top-N selection on the
/// Harris response, then orientation and rotated BRIEF description.
pub fn detect_features(img: &GrayImage) -> Features {
    let w = img.width();
    let h = img.height();
    if w < 2 * BORDER + 1 || h < 2 * BORDER + 1 {
        return Features::default();
    }
    // Corner candidates with responses on a grid for suppression.
    let mut response = vec![0.0f64; (w as usize) * (h as usize)];
    let mut candidates: Vec<(u32, u32)> = Vec::new();
    for y in BORDER..h - BORDER {
        for x in BORDER..w - BORDER {
            if fast_corner(img, x, y) {
                let r = harris_response(img, x, y);
                response[(y * w + x) as usize] = r;
                candidates.push((x, y));
            }
        }
    }
    let mut kept: Vec<Keypoint> = Vec::new();
    'cand: for &(x, y) in &candidates {
        let r = response[(y * w + x) as usize];
        for dy in -1..=1i32 {
            for dx in -1..=1i32 {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let nr = response[((y as i32 + dy) as u32 * w + (x as i32 + dx) as u32) as usize];
                // Strict inequality on one side keeps exactly one of two
                // equal neighbors, ordered by scan position.
                if nr > r || (nr == r && (dy < 0 || (dy == 0 && dx < 0))) {
                    continue 'cand;
                }
            }
        }
        kept.push(Keypoint {
            x,
            y,
            response: r,
            angle: 0.0,
        });
    }
    kept.sort_by(|a, b| {
        b.response
            .partial_cmp(&a.response)
            .unwrap()
            .then_with(|| (a.y, a.x).cmp(&(b.y, b.x)))
    });
    kept.truncate(MAX_KEYPOINTS);

    let integral = Integral::new(img);
    let pattern = brief_pattern();
    let mut descriptors = Vec::with_capacity(kept.len());
    for kp in &mut kept {
        kp.angle = orientation(img, kp.x, kp.y);
        let (sin, cos) = kp.angle.sin_cos();
        let rotate = |p: (i32, i32)| -> (i32, i32) {
            let rx = (cos * p.0 as f64 - sin * p.1 as f64).round() as i32;
            let ry = (sin * p.0 as f64 + cos * p.1 as f64).round() as i32;
            (rx, ry)
        };
        let mut words = [0u64; 4];
        for (i, &(p1, p2)) in pattern.iter().enumerate() {
            let r1 = rotate(p1);
            let r2 = rotate(p2);
            let a = integral.box5(kp.x as i32 + r1.0, kp.y as i32 + r1.1);
            let b = integral.box5(kp.x as i32 + r2.0, kp.y as i32 + r2.1);
            if a < b {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        descriptors.push(Descriptor256(words));
    }
    Features {
        keypoints: kept,
        descriptors,
    }
}

/// A mutual-best descriptor match.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeatureMatch {
    /// Index into the original's keypoints.
    pub original: usize,
    /// Index into the subject's keypoints.
    pub subject: usize,
    pub distance: u32,
}

/// Maximum Hamming distance for a valid match.
pub const MATCH_MAX_DISTANCE: u32 = 64;

/// Mutual-best matching under an absolute distance cap. Ties resolve to the
/// lowest index, so the match set is deterministic.
pub fn match_features(original: &Features, subject: &Features) -> Vec<FeatureMatch> {
    let best = |from: &Features, to: &Features| -> Vec<Option<(usize, u32)>> {
        from.descriptors
            .iter()
            .map(|d| {
                let mut best: Option<(usize, u32)> = None;
                for (j, e) in to.descriptors.iter().enumerate() {
                    let dist = d.hamming(e);
                    if best.is_none_or(|(_, bd)| dist < bd) {
                        best = Some((j, dist));
                    }
                }
                best
            })
            .collect()
    };
    let fwd = best(subject, original);
    let rev = best(original, subject);
    let mut out = Vec::new();
    for (sj, &f) in fwd.iter().enumerate() {
        if let Some((oi, dist)) = f {
            if dist <= MATCH_MAX_DISTANCE {
                if let Some((back, _)) = rev[oi] {
                    if back == sj {
                        out.push(FeatureMatch {
                            original: oi,
                            subject: sj,
                            distance: dist,
                        });
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::GrayImage;

    fn corner_fixture() -> GrayImage {
        let mut img = GrayImage::filled(64, 64, 30);
        for y in 20..44 {
            for x in 20..44 {
                img.set_pixel(x, y, 220);
            }
        }
        img
    }

    #[test]
    fn constant_image_has_no_keypoints() {
        let img = GrayImage::filled(128, 128, 90);
        assert!(detect_features(&img).keypoints.is_empty());
    }

    #[test]
    fn detection_is_deterministic() {
        let img = corner_fixture();
        let a = detect_features(&img);
        let b = detect_features(&img);
        assert_eq!(a.keypoints, b.keypoints);
        assert_eq!(a.descriptors, b.descriptors);
        assert!(!a.keypoints.is_empty());
    }

    #[test]
    fn square_corner_is_found_close_by() {
        let img = corner_fixture();
        let feats = detect_features(&img);
        let corners = [(20i32, 20i32), (43, 20), (20, 43), (43, 43)];
        let hit = feats.keypoints.iter().any(|kp| {
            corners.iter().any(|&(cx, cy)| {
                (kp.x as i32 - cx).abs() <= 3 && (kp.y as i32 - cy).abs() <= 3
            })
        });
        assert!(hit, "keypoints: {:?}", feats.keypoints);
    }

    #[test]
    fn self_match_is_complete_for_distinct_features() {
        // Textured fixture: corners sit on different backgrounds, so the
        // descriptors are pairwise distinct (a symmetric fixture would
        // create exact-duplicate descriptors, which mutual-best collapses).
        let img = crate::synth::splice_patch(1, 160, 160, 1).to_grayscale();
        let feats = detect_features(&img);
        assert!(feats.keypoints.len() >= 4, "{} keypoints", feats.keypoints.len());
        let matches = match_features(&feats, &feats);
        assert_eq!(matches.len(), feats.keypoints.len());
        assert!(matches.iter().all(|m| m.distance == 0));
    }

    #[test]
    fn arc_detection_logic() {
        assert!(has_arc(0b0000_0001_1111_1111, 9));
        assert!(!has_arc(0b0000_0000_1111_1111, 9));
        // Wrap-around run.
        assert!(has_arc(0b1111_1000_0000_1111, 9));
        assert!(has_arc(0xFFFF, 9));
        assert!(!has_arc(0, 9));
    }

    #[test]
    fn small_images_yield_no_features() {
        let img = GrayImage::filled(20, 20, 0);
        assert!(detect_features(&img).keypoints.is_empty());
    }
}
