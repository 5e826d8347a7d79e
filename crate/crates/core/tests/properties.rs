//! Property tests for the module invariants that hold over whole input
//! spaces rather than fixtures.

use proptest::prelude::*;

use imgdrm::identity::{hamming64, Hash64};
use imgdrm::imaging::{decode_png, encode_png, resize_area, GrayImage, Image};
use imgdrm::metrics;
use imgdrm::payload;
use imgdrm::util::DetRng;

fn image_from_seed(w: u32, h: u32, channels: u8, seed: u64) -> Image {
    let mut rng = DetRng::new(seed);
    let data = (0..w as usize * h as usize * channels as usize)
        .map(|_| (rng.next_u64() % 256) as u8)
        .collect();
    Image::new(w, h, channels, data).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// PNG encoding is lossless for every valid 8-bit image.
    #[test]
    fn png_round_trip_lossless(
        w in 1u32..24,
        h in 1u32..24,
        gray in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let img = image_from_seed(w, h, if gray { 1 } else { 3 }, seed);
        let bytes = encode_png(&img);
        let back = decode_png(&bytes).unwrap();
        prop_assert_eq!(back, img);
    }

    /// hamming64 is a metric: identity, symmetry, triangle inequality.
    #[test]
    fn hamming_is_a_metric(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (ha, hb, hc) = (Hash64(a), Hash64(b), Hash64(c));
        prop_assert_eq!(hamming64(ha, ha), 0);
        prop_assert_eq!(hamming64(ha, hb), hamming64(hb, ha));
        prop_assert!(hamming64(ha, hc) <= hamming64(ha, hb) + hamming64(hb, hc));
        prop_assert!((a == b) == (hamming64(ha, hb) == 0));
    }

    /// Area resampling: same-size output is the identity; constants stay
    /// constant at any size.
    #[test]
    fn resize_area_identity_and_constant(
        w in 1u32..32,
        h in 1u32..32,
        ow in 1u32..32,
        oh in 1u32..32,
        value in any::<u8>(),
        seed in any::<u64>(),
    ) {
        let img = image_from_seed(w, h, 1, seed).to_grayscale();
        prop_assert_eq!(resize_area(&img, w, h), img.clone());
        let constant = GrayImage::filled(w, h, value);
        let out = resize_area(&constant, ow, oh);
        prop_assert!(out.data().iter().all(|&p| p == value));
    }

    /// Payload matrix bits round-trip losslessly.
    #[test]
    fn matrix_bits_round_trip(seed in any::<u64>()) {
        let mut rng = DetRng::new(seed);
        let bits: Vec<bool> = (0..payload::MATRIX_BITS).map(|_| rng.next_u64() & 1 == 1).collect();
        let matrix = payload::bits_matrix(&bits).unwrap();
        prop_assert_eq!(payload::matrix_bits(&matrix), bits);
    }

    /// Histogram intersection stays in [0, 100] and is exactly 100 for any
    /// image against itself.
    #[test]
    fn hist_intersection_bounds(w in 1u32..32, h in 1u32..32, s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = image_from_seed(w, h, 1, s1).to_grayscale();
        let b = image_from_seed(w, h, 1, s2).to_grayscale();
        let v = metrics::hist_intersection(&a, &b);
        prop_assert!((0.0..=100.0).contains(&v));
        let self_v = metrics::hist_intersection(&a, &a);
        prop_assert!((self_v - 100.0).abs() < 1e-9);
    }

    /// Reed-Solomon parity satisfies the defining property: appending the
    /// parity makes the codeword divisible by the generator, which is
    /// equivalent to re-encoding data || parity yielding zero parity.
    #[test]
    fn rs_parity_defining_property(data in prop::collection::vec(any::<u8>(), 1..40), nsym in 1usize..20) {
        let parity = payload::rs_encode(&data, nsym);
        prop_assert_eq!(parity.len(), nsym);
        let mut codeword = data.clone();
        codeword.extend_from_slice(&parity);
        let rem = payload::rs_encode(&codeword, nsym);
        prop_assert!(rem.iter().all(|&b| b == 0), "remainder {rem:?}");
    }

    /// Grayscale conversion is idempotent.
    #[test]
    fn grayscale_idempotent(w in 1u32..16, h in 1u32..16, seed in any::<u64>()) {
        let img = image_from_seed(w, h, 3, seed);
        let g1 = img.to_grayscale();
        let g2 = g1.to_grayscale();
        prop_assert_eq!(g1, g2);
    }
}
