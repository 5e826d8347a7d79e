//! Deterministic synthetic scenes and patches.
//!
//! The repo ships no binary image assets; tests, the benchmark docs, and the
//! CLI `synth` command build structured scenes procedurally instead. Scenes
//! are seeded and fully reproducible: smooth gradients, fine grain, and a
//! spread of rectangles and discs whose hard edges give the feature
//! detector something real to lock onto.

use crate::imaging::Image;
use crate::util::DetRng;

/// Seed used by the test corpus and the documentation examples.
pub const DEFAULT_SCENE_SEED: u64 = 0x5CE7E;

pub const SCENE_SIDE: u32 = 512;

/// Per-pixel grain hash, deterministic in (x, y, seed).
fn grain(x: u32, y: u32, seed: u64) -> f64 {
    let mut v = seed ^ ((x as u64) << 32 | y as u64);
    v = v.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    v ^= v >> 29;
    v = v.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    v ^= v >> 32;
    (v & 0xFF) as f64 / 255.0 * 4.0 - 2.0
}

fn scene_base(x: u32, y: u32) -> (f64, f64, f64) {
    scene_base_textured(x, y, 14.0 * (x as f64 / 37.0).sin() * (y as f64 / 41.0).cos())
}

/// Shared background family with a caller-supplied texture term; the splice
/// patch reuses it with a different texture phase so its histogram lines up
/// with the scene while its structure does not.
fn scene_base_textured(x: u32, y: u32, texture: f64) -> (f64, f64, f64) {
    let fx = x as f64 / (SCENE_SIDE - 1) as f64 - 0.5;
    let fy = y as f64 / (SCENE_SIDE - 1) as f64 - 0.5;
    let base = 118.0 + 52.0 * fx + 34.0 * fy + texture;
    // Posterize the background so the intensity histogram has comb
    // structure at a scale noise can smear; smooth gradients would make
    // histogram comparison nearly blind to noise. Channel tints stay small
    // so the comb survives into luma.
    let base = (base / 6.0).round() * 6.0;
    let r = base + 4.0 * (y as f64 / 53.0).sin();
    let g = base;
    let b = base - 3.0 * (x as f64 / 61.0).cos();
    (r, g, b)
}

#[derive(Clone, Copy)]
struct Shape {
    cx: i64,
    cy: i64,
    half_w: i64,
    half_h: i64,
    disc: bool,
    offset: f64,
    tint: (f64, f64, f64),
}

impl Shape {
    fn covers(&self, x: i64, y: i64) -> bool {
        if self.disc {
            let dx = (x - self.cx) as f64 / self.half_w as f64;
            let dy = (y - self.cy) as f64 / self.half_h as f64;
            dx * dx + dy * dy <= 1.0
        } else {
            (x - self.cx).abs() <= self.half_w && (y - self.cy).abs() <= self.half_h
        }
    }

    fn bbox_intersects(&self, x0: i64, y0: i64, x1: i64, y1: i64) -> bool {
        self.cx + self.half_w >= x0
            && self.cx - self.half_w <= x1
            && self.cy + self.half_h >= y0
            && self.cy - self.half_h <= y1
    }
}

/// 512x512 RGB scene. All samples stay inside [16, 224] so that a +30
/// channel shift is clamp-free, and total corner count stays in the low
/// hundreds so the keypoint budget never truncates.
pub fn test_scene(seed: u64) -> Image {
    let mut rng = DetRng::new(seed);
    let mut shapes: Vec<Shape> = Vec::new();

    // Bright cluster inside the default copy-move source square
    // (64..128, 64..128).
    for _ in 0..3 {
        let half_w = rng.next_range_i32(7, 11) as i64;
        let half_h = rng.next_range_i32(7, 11) as i64;
        let cx = rng.next_range_i32(78, 112) as i64;
        let cy = rng.next_range_i32(78, 112) as i64;
        shapes.push(Shape {
            cx,
            cy,
            half_w,
            half_h,
            disc: shapes.len().is_multiple_of(2),
            offset: 52.0 + rng.next_f64() * 16.0,
            tint: (rng.next_f64() * 8.0, rng.next_f64() * 8.0, rng.next_f64() * 8.0),
        });
    }

    // General scatter. Every fourth shape is low contrast, near the corner
    // detector's threshold, so noise and blur can flip its detections.
    let mut placed = 0;
    while placed < 44 {
        let half_w = rng.next_range_i32(5, 13) as i64;
        let half_h = rng.next_range_i32(5, 13) as i64;
        let cx = rng.next_range_i32(30, 481) as i64;
        let cy = rng.next_range_i32(30, 481) as i64;
        let magnitude = if placed % 4 == 0 {
            22.0 + rng.next_f64() * 5.0
        } else {
            30.0 + rng.next_f64() * 34.0
        };
        let sign = if rng.next_u64() & 1 == 0 { 1.0 } else { -1.0 };
        let shape = Shape {
            cx,
            cy,
            half_w,
            half_h,
            disc: rng.next_u64() & 1 == 0,
            offset: sign * magnitude,
            tint: (
                rng.next_f64() * 10.0 - 5.0,
                rng.next_f64() * 10.0 - 5.0,
                rng.next_f64() * 10.0 - 5.0,
            ),
        };
        // Keep the default copy-move paste square and its surroundings
        // plain, and stay clear of the source cluster.
        if shape.bbox_intersects(244, 244, 332, 332) || shape.bbox_intersects(60, 60, 132, 132) {
            continue;
        }
        shapes.push(shape);
        placed += 1;
    }

    let mut data = Vec::with_capacity(SCENE_SIDE as usize * SCENE_SIDE as usize * 3);
    for y in 0..SCENE_SIDE {
        for x in 0..SCENE_SIDE {
            let (mut r, mut g, mut b) = scene_base(x, y);
            for s in &shapes {
                if s.covers(x as i64, y as i64) {
                    r += s.offset + s.tint.0;
                    g += s.offset + s.tint.1;
                    b += s.offset + s.tint.2;
                }
            }
            let grain_v = grain(x, y, seed);
            r += grain_v;
            g += grain_v;
            b += grain_v;
            data.push(r.round().clamp(16.0, 224.0) as u8);
            data.push(g.round().clamp(16.0, 224.0) as u8);
            data.push(b.round().clamp(16.0, 224.0) as u8);
        }
    }
    Image::new(SCENE_SIDE, SCENE_SIDE, 3, data).expect("scene dims")
}

/// Synthetic splice patch: tonality from the same background family as the
/// procedural scenes (sampled at the default paste position, so its
/// histogram lines up with what it covers), but with its own texture phase
/// and a few strong square features. Structurally foreign, tonally
/// plausible, like a careful splice.
pub fn splice_patch(seed: u64, w: u32, h: u32, channels: u8) -> Image {
    const PASTE_ORIGIN: (u32, u32) = (200, 200);
    let mut rng = DetRng::new(seed ^ 0x0591_1CE0);
    let feature_count = 3;
    let mut features: Vec<(i64, i64, i64, f64)> = Vec::new();
    for i in 0..feature_count {
        let half = rng.next_range_i32(5, 9) as i64;
        let fx = rng.next_range_i32(half as i32 + 4, w as i32 - half as i32 - 5) as i64;
        let fy = rng.next_range_i32(half as i32 + 4, h as i32 - half as i32 - 5) as i64;
        let amp = if i % 2 == 0 { 45.0 } else { -45.0 };
        features.push((fx, fy, half, amp));
    }
    let mut data = Vec::with_capacity(w as usize * h as usize * channels as usize);
    for y in 0..h {
        for x in 0..w {
            // Mirror-sample the background family across the covered
            // window: a bijection of the same coordinates, so the patch's
            // tonal distribution matches what it replaces exactly while its
            // gradient direction and texture phase do not.
            let sx = (PASTE_ORIGIN.0 + (w - 1 - x)).min(SCENE_SIDE - 1);
            let sy = (PASTE_ORIGIN.1 + (h - 1 - y)).min(SCENE_SIDE - 1);
            let (r, g, b) = scene_base(sx, sy);
            let mut px = [r, g, b];
            for v in &mut px {
                for &(fx, fy, half, amp) in &features {
                    if (x as i64 - fx).abs() <= half && (y as i64 - fy).abs() <= half {
                        *v += amp;
                    }
                }
                *v += grain(x, y, seed.rotate_left(17));
            }
            if channels == 1 {
                data.push(px[1].round().clamp(16.0, 224.0) as u8);
            } else {
                for v in px {
                    data.push(v.round().clamp(16.0, 224.0) as u8);
                }
            }
        }
    }
    Image::new(w, h, channels, data).expect("patch dims")
}
