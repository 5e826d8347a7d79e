//! End-to-end orchestration: register an image into the ledger + store,
//! verify a subject against every registration, and run the benchmark
//! matrix of attacks and tampers.

use std::path::Path;

use thiserror::Error;

use crate::attacks::{self, AttackSpec, TamperSpec};
use crate::detection::{self, TamperReport};
use crate::identity::{self, ContentDigest, Hash64};
use crate::imaging::{self, Image};
use crate::metrics;
use crate::payload::{self, PayloadError};
use crate::registry::{
    derive_address, Cas, Cid, Clock, Ledger, RegistrationArgs, RegistryError,
};
use crate::watermark::{self, Codec, WatermarkBits, HOST_SIDE};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("image is {w}x{h} but the host must be {HOST_SIDE}x{HOST_SIDE} (strict mode)")]
    WrongDimensions { w: u32, h: u32 },
    #[error("owner identity must be non-empty")]
    EmptyOwner,
    #[error("ledger is empty; nothing to verify against")]
    EmptyLedger,
    #[error(transparent)]
    Image(#[from] imaging::ImageError),
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Watermark(#[from] watermark::WatermarkError),
    #[error(transparent)]
    Payload(#[from] PayloadError),
    #[error(transparent)]
    Attack(#[from] attacks::AttackError),
    #[error(transparent)]
    Detection(#[from] detection::DetectionError),
    #[error(transparent)]
    Metric(#[from] metrics::MetricError),
    #[error("report i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("report serialization: {0}")]
    Serialize(#[from] serde_json::Error),
}

/// What to do with inputs that are not already host-sized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResizePolicy {
    /// Bilinear-resize a working copy to the host size.
    ResizeToHost,
    /// Reject anything that is not exactly host-sized.
    Strict,
}

/// Maximum payload-matrix bit distance still considered a match: 20% of the
/// 4096 bits, generous against attack-grade bit errors yet far from the
/// ~50% a random extraction produces.
pub const QR_MATCH_MAX_BITS: u32 = 820;
/// Maximum perceptual-hash distance for ownership confirmation.
pub const DHASH_MATCH_MAX_BITS: u32 = 10;

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub codec: Codec,
    pub resize_policy: ResizePolicy,
    pub qr_match_max_bits: u32,
    pub dhash_match_max_bits: u32,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            codec: Codec::dct(),
            resize_policy: ResizePolicy::ResizeToHost,
            qr_match_max_bits: QR_MATCH_MAX_BITS,
            dhash_match_max_bits: DHASH_MATCH_MAX_BITS,
        }
    }
}

/// Copyright-owner fields for a registration.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct OwnerInfo {
    /// Free-form identity text; the ledger address is derived from it.
    pub owner: String,
    pub creation_name: String,
    pub creation_author: String,
    pub copyright_owner: String,
    pub mail_address: String,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct RegistrationOutcome {
    pub block_hash: String,
    pub block_number: u64,
    pub image_id: String,
    pub image_hash: String,
    pub owner_address: String,
    /// Cid of the watermarked PNG in the store.
    pub cas_cid: String,
    /// Cid of the original raster object referenced by the block.
    pub original_cid: String,
    /// Cid of the stored block-information object.
    pub block_info_cid: String,
    /// Where the watermarked PNG was written, when a path was given.
    pub watermarked_path: Option<String>,
    pub resized_working_copy: bool,
}

/// Bring an input to host size according to policy.
fn working_copy(img: &Image, policy: ResizePolicy) -> Result<(Image, bool), PipelineError> {
    if img.width() == HOST_SIDE && img.height() == HOST_SIDE {
        return Ok((img.clone(), false));
    }
    match policy {
        ResizePolicy::Strict => Err(PipelineError::WrongDimensions {
            w: img.width(),
            h: img.height(),
        }),
        ResizePolicy::ResizeToHost => {
            Ok((imaging::resize_bilinear(img, HOST_SIDE, HOST_SIDE), true))
        }
    }
}

/// Register an image: perceptual + content identity, ledger block, payload
/// matrix from the block hash, watermark embedding, and storage of the
/// watermarked asset, the original raster, and the block info.
pub fn register(
    image: &Image,
    owner: &OwnerInfo,
    config: &PipelineConfig,
    ledger: &Ledger,
    cas: &Cas,
    clock: &dyn Clock,
    out_path: Option<&Path>,
) -> Result<RegistrationOutcome, PipelineError> {
    if owner.owner.is_empty() {
        return Err(PipelineError::EmptyOwner);
    }
    let (working, resized) = working_copy(image, config.resize_policy)?;

    let image_id: Hash64 = identity::dhash(&working);
    let canonical = working.canonical_bytes();
    let image_hash: ContentDigest = identity::content_hash(&canonical);
    let owner_address = derive_address(&owner.owner)?;

    // The original raster goes into the store first; its cid is a pure
    // function of the content digest, so the block can reference it before
    // the block hash (and thus the watermark) exists.
    let original_cid = cas.put(&canonical)?;
    debug_assert_eq!(
        original_cid,
        Cid::from_digest_hex(&image_hash.to_hex()).expect("digest is valid hex")
    );

    let args = RegistrationArgs {
        owner_address: owner_address.clone(),
        image_hash: image_hash.to_hex(),
        creation_name: owner.creation_name.clone(),
        creation_author: owner.creation_author.clone(),
        copyright_owner: owner.copyright_owner.clone(),
        image_id: image_id.to_hex(),
        mail_address: owner.mail_address.clone(),
    };
    let block = ledger.append_registration(args, original_cid.as_str(), clock)?;

    let matrix = payload::qr_matrix(&block.payload_text())?;
    let bits = WatermarkBits::from_bools(payload::matrix_bits(&matrix))?;
    let watermarked = watermark::embed_color(&working, &bits, &config.codec)?;

    let png = imaging::encode_png(&watermarked);
    let wm_cid = cas.put(&png)?;
    let info = format!(
        "{}\nwatermarked_cid\t{}\n",
        crate::registry::block_to_line(&block),
        wm_cid
    );
    let info_cid = cas.put(info.as_bytes())?;

    let watermarked_path = match out_path {
        Some(p) => {
            imaging::save_png(&watermarked, p)?;
            Some(p.display().to_string())
        }
        None => None,
    };

    Ok(RegistrationOutcome {
        block_hash: block.block_hash.clone(),
        block_number: block.block_number,
        image_id: image_id.to_hex(),
        image_hash: image_hash.to_hex(),
        owner_address,
        cas_cid: wm_cid.to_string(),
        original_cid: original_cid.to_string(),
        block_info_cid: info_cid.to_string(),
        watermarked_path,
        resized_working_copy: resized,
    })
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct VerificationReport {
    pub matched: bool,
    /// Best-matching block, present whenever the payload distance cleared
    /// the threshold.
    pub best_block_hash: Option<String>,
    pub best_block_number: Option<u64>,
    pub qr_bit_error_distance: u32,
    pub dhash_hamming: Option<u32>,
    pub owner_address: Option<String>,
    pub creation_name: Option<String>,
    pub creation_author: Option<String>,
    pub copyright_owner: Option<String>,
    pub mail_address: Option<String>,
    pub image_id: Option<String>,
    pub tamper: Option<TamperReport>,
    pub thresholds: Thresholds,
    pub subject_resized_for_extraction: bool,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct Thresholds {
    pub qr_match_max_bits: u32,
    pub dhash_match_max_bits: u32,
}

/// Verify a subject image against every ledger block: blind-extract the
/// payload bits, match them to regenerated candidate matrices by minimum
/// bit error (ties to the lowest block number), then confirm ownership with
/// the perceptual hash and run the layered tamper stack against the
/// regenerated watermarked reference.
pub fn verify(
    image: &Image,
    config: &PipelineConfig,
    ledger: &Ledger,
    cas: &Cas,
) -> Result<VerificationReport, PipelineError> {
    let chain = ledger.read_chain()?;
    if chain.is_empty() {
        return Err(PipelineError::EmptyLedger);
    }
    let (working, resized) = working_copy(image, config.resize_policy)?;
    let subject_gray = working.to_grayscale();
    let extracted = watermark::extract(&subject_gray, &config.codec)?;

    let mut best: Option<(u32, &crate::registry::Block)> = None;
    for block in chain.blocks() {
        let candidate = payload::qr_matrix(&block.payload_text())?;
        let cand_bits = WatermarkBits::from_bools(payload::matrix_bits(&candidate))?;
        let dist = metrics::bit_errors(&extracted, &cand_bits);
        let better = match &best {
            None => true,
            Some((bd, bb)) => {
                dist < *bd || (dist == *bd && block.block_number < bb.block_number)
            }
        };
        if better {
            best = Some((dist, block));
        }
    }
    let (distance, block) = best.expect("non-empty chain");

    let thresholds = Thresholds {
        qr_match_max_bits: config.qr_match_max_bits,
        dhash_match_max_bits: config.dhash_match_max_bits,
    };
    if distance > config.qr_match_max_bits {
        return Ok(VerificationReport {
            matched: false,
            best_block_hash: None,
            best_block_number: None,
            qr_bit_error_distance: distance,
            dhash_hamming: None,
            owner_address: None,
            creation_name: None,
            creation_author: None,
            copyright_owner: None,
            mail_address: None,
            image_id: None,
            tamper: None,
            thresholds,
            subject_resized_for_extraction: resized,
        });
    }

    // Fetch the original raster and regenerate the released watermarked
    // reference deterministically from the block's own payload.
    let original_bytes = cas.get(&Cid::parse(&block.cas_cid)?)?;
    let original = Image::from_canonical_bytes(&original_bytes)?;
    let dhash_distance =
        identity::hamming64(identity::dhash(&working), identity::dhash(&original));
    let matched = dhash_distance <= config.dhash_match_max_bits;

    let block_matrix = payload::qr_matrix(&block.payload_text())?;
    let block_bits = WatermarkBits::from_bools(payload::matrix_bits(&block_matrix))?;
    let reference = watermark::embed_color(&original, &block_bits, &config.codec)?;
    let tamper = detection::detect_report(&reference.to_grayscale(), &image.to_grayscale())?;

    Ok(VerificationReport {
        matched,
        best_block_hash: Some(block.block_hash.clone()),
        best_block_number: Some(block.block_number),
        qr_bit_error_distance: distance,
        dhash_hamming: Some(dhash_distance),
        owner_address: Some(block.args.owner_address.clone()),
        creation_name: Some(block.args.creation_name.clone()),
        creation_author: Some(block.args.creation_author.clone()),
        copyright_owner: Some(block.args.copyright_owner.clone()),
        mail_address: Some(block.args.mail_address.clone()),
        image_id: Some(block.args.image_id.clone()),
        tamper: Some(tamper),
        thresholds,
        subject_resized_for_extraction: resized,
    })
}

impl VerificationReport {
    pub fn to_json(&self) -> Result<String, PipelineError> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Plain-text rendering of the report.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("verification report\n");
        out.push_str("===================\n");
        out.push_str(&format!("matched: {}\n", self.matched));
        out.push_str(&format!(
            "payload bit distance: {} (threshold {})\n",
            self.qr_bit_error_distance, self.thresholds.qr_match_max_bits
        ));
        match &self.best_block_hash {
            Some(hash) => {
                out.push_str(&format!(
                    "block: #{} 0x{}\n",
                    self.best_block_number.unwrap_or_default(),
                    hash
                ));
                if let Some(d) = self.dhash_hamming {
                    out.push_str(&format!(
                        "perceptual hash distance: {} (threshold {})\n",
                        d, self.thresholds.dhash_match_max_bits
                    ));
                }
                for (label, value) in [
                    ("owner address", &self.owner_address),
                    ("creation name", &self.creation_name),
                    ("creation author", &self.creation_author),
                    ("copyright owner", &self.copyright_owner),
                    ("mail address", &self.mail_address),
                    ("image id", &self.image_id),
                ] {
                    if let Some(v) = value {
                        out.push_str(&format!("{label}: {v}\n"));
                    }
                }
                if let Some(t) = &self.tamper {
                    out.push_str("tamper layers:\n");
                    out.push_str(&format!(
                        "  layer 1 ssim:      {:.4}{}\n",
                        t.ssim,
                        if t.ssim_suspect { "  [suspect]" } else { "" }
                    ));
                    out.push_str(&format!(
                        "  layer 2 mfr:       {:.2}% ({} matches, {} subject keypoints){}\n",
                        t.mfr.percent,
                        t.mfr.matches,
                        t.mfr.keypoints_subject,
                        if t.mfr_suspect { "  [suspect]" } else { "" }
                    ));
                    out.push_str(&format!(
                        "  layer 3 histogram: {:.2}%{}\n",
                        t.histogram,
                        if t.histogram_suspect { "  [suspect]" } else { "" }
                    ));
                    out.push_str(&format!(
                        "  layer 4 boxes:     {}{}\n",
                        t.boxes.len(),
                        if t.localization_suspect {
                            "  [suspect]"
                        } else {
                            ""
                        }
                    ));
                    for b in t.boxes.iter().take(12) {
                        out.push_str(&format!(
                            "    box x={} y={} w={} h={}\n",
                            b.x, b.y, b.w, b.h
                        ));
                    }
                    if t.boxes.len() > 12 {
                        out.push_str(&format!("    ... {} more\n", t.boxes.len() - 12));
                    }
                }
            }
            None => out.push_str("no watermark match; treat as unregistered content\n"),
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Benchmark
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct WatermarkBenchRow {
    pub attack: String,
    pub attack_spec: String,
    pub codec: String,
    /// Embedding distortion vs. the clean host, constant per codec.
    pub mse: f64,
    pub psnr_db: f64,
    pub bit_errors: u32,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct TamperBenchRow {
    pub tamper: String,
    pub tamper_spec: String,
    pub layer1_ssim: f64,
    pub layer2_mfr_percent: f64,
    pub layer3_histogram_percent: f64,
    pub layer4_boxes: usize,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct BenchReport {
    pub payload_text: String,
    pub codec_strengths: Vec<(String, f64)>,
    pub watermark_rows: Vec<WatermarkBenchRow>,
    pub tamper_rows: Vec<TamperBenchRow>,
}

/// Attack/tamper benchmark on one image: 9 attacks x 3 codecs of extraction
/// bit errors plus per-codec embedding distortion, and the 6 tampers
/// against the layered detector. The payload is the image's own content
/// digest rendered like a block hash, so the run needs no ledger.
pub fn bench(image: &Image, config: &PipelineConfig) -> Result<BenchReport, PipelineError> {
    let (working, _) = working_copy(image, config.resize_policy)?;
    let host_gray = working.to_grayscale();
    let digest = identity::content_hash(&working.canonical_bytes());
    let payload_text = format!("0x{}", digest.to_hex());
    let matrix = payload::qr_matrix(&payload_text)?;
    let bits = WatermarkBits::from_bools(payload::matrix_bits(&matrix))?;

    // Default strengths, except the configured codec keeps its configured
    // strength.
    let codecs = [Codec::dct(), Codec::dwt_dct(), Codec::dct_svd()]
        .map(|c| if c.kind == config.codec.kind { config.codec } else { c });
    let mut watermark_rows = Vec::new();
    let mut codec_strengths = Vec::new();
    let mut tamper_rows = Vec::new();
    let mut default_reference: Option<Image> = None;

    for codec in codecs {
        codec_strengths.push((codec.kind.label().to_string(), codec.strength));
        let wm = watermark::embed_color(&working, &bits, &codec)?;
        let wm_gray = wm.to_grayscale();
        let mse = metrics::mse(&host_gray, &wm_gray)?;
        let psnr = metrics::psnr_from_mse(mse, 255.0);
        for (label, spec) in AttackSpec::bench_suite(working.width(), working.height()) {
            let attacked = attacks::apply_attack(&wm, &spec)?;
            let extracted = watermark::extract(&attacked.to_grayscale(), &codec)?;
            watermark_rows.push(WatermarkBenchRow {
                attack: label.to_string(),
                attack_spec: spec.canonical(),
                codec: codec.kind.label().to_string(),
                mse,
                psnr_db: psnr,
                bit_errors: metrics::bit_errors(&bits, &extracted),
            });
        }
        if codec.kind == config.codec.kind {
            default_reference = Some(wm);
        }
    }

    let reference = match default_reference {
        Some(r) => r,
        None => watermark::embed_color(&working, &bits, &config.codec)?,
    };
    let ref_gray = reference.to_grayscale();
    for (label, spec) in TamperSpec::bench_suite() {
        let tampered = attacks::apply_tamper(&reference, &spec)?;
        let report = detection::detect_report(&ref_gray, &tampered.to_grayscale())?;
        tamper_rows.push(TamperBenchRow {
            tamper: label.to_string(),
            tamper_spec: spec.canonical(),
            layer1_ssim: report.ssim,
            layer2_mfr_percent: report.mfr.percent,
            layer3_histogram_percent: report.histogram,
            layer4_boxes: report.boxes.len(),
        });
    }

    Ok(BenchReport {
        payload_text,
        codec_strengths,
        watermark_rows,
        tamper_rows,
    })
}

impl BenchReport {
    pub fn to_json(&self) -> Result<String, PipelineError> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn watermark_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<18} {:<9} {:>14} {:>12} {:>10}   {}\n",
            "Attack", "Codec", "MSE", "PSNR (dB)", "Bit errors", "Spec"
        ));
        for row in &self.watermark_rows {
            out.push_str(&format!(
                "{:<18} {:<9} {:>14.10} {:>12.6} {:>10}   {}\n",
                row.attack, row.codec, row.mse, row.psnr_db, row.bit_errors, row.attack_spec
            ));
        }
        out
    }

    pub fn tamper_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<22} {:>12} {:>10} {:>14} {:>7}   {}\n",
            "Tamper", "Layer1 SSIM", "Layer2 MFR", "Layer3 Hist %", "Boxes", "Spec"
        ));
        for row in &self.tamper_rows {
            out.push_str(&format!(
                "{:<22} {:>12.4} {:>10.2} {:>14.2} {:>7}   {}\n",
                row.tamper,
                row.layer1_ssim,
                row.layer2_mfr_percent,
                row.layer3_histogram_percent,
                row.layer4_boxes,
                row.tamper_spec
            ));
        }
        out
    }

    /// Write the machine-readable and plain-text artifacts into a directory.
    pub fn write_to_dir(&self, dir: &Path) -> Result<(), PipelineError> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("bench.json"), self.to_json()?)?;
        std::fs::write(
            dir.join("watermark_results.txt"),
            format!(
                "payload: {}\nstrengths: {:?}\n\n{}",
                self.payload_text, self.codec_strengths, self.watermark_table()
            ),
        )?;
        std::fs::write(dir.join("tamper_results.txt"), self.tamper_table())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::FixedClock;
    use crate::synth;

    struct Dirs {
        root: std::path::PathBuf,
    }

    impl Dirs {
        fn new(tag: &str) -> Dirs {
            let root = std::env::temp_dir().join(format!(
                "imgdrm-pipeline-{tag}-{}",
                std::process::id()
            ));
            let _ = std::fs::remove_dir_all(&root);
            std::fs::create_dir_all(&root).unwrap();
            Dirs { root }
        }

        fn ledger(&self) -> Ledger {
            Ledger::open(self.root.join("ledger")).unwrap()
        }

        fn cas(&self) -> Cas {
            Cas::open(self.root.join("cas")).unwrap()
        }
    }

    impl Drop for Dirs {
        fn drop(&mut self) {
            let _ = std::fs::remove_dir_all(&self.root);
        }
    }

    fn owner() -> OwnerInfo {
        OwnerInfo {
            owner: "Harbor Studio".into(),
            creation_name: "Harbor Sunrise".into(),
            creation_author: "A. Painter".into(),
            copyright_owner: "Harbor Studio".into(),
            mail_address: "a.painter@example.org".into(),
        }
    }

    #[test]
    fn register_produces_well_formed_outcome() {
        let dirs = Dirs::new("register");
        let scene = synth::test_scene(synth::DEFAULT_SCENE_SEED);
        let out = register(
            &scene,
            &owner(),
            &PipelineConfig::default(),
            &dirs.ledger(),
            &dirs.cas(),
            &FixedClock(1_700_000_000),
            None,
        )
        .unwrap();
        assert_eq!(out.image_id.len(), 16);
        assert_eq!(out.block_hash.len(), 64);
        assert_eq!(out.image_hash.len(), 64);
        // Stored objects are retrievable.
        let cas = dirs.cas();
        assert!(cas.contains(&Cid::parse(&out.cas_cid).unwrap()));
        assert!(cas.contains(&Cid::parse(&out.original_cid).unwrap()));
        assert!(cas.contains(&Cid::parse(&out.block_info_cid).unwrap()));
        // The chain records it.
        let chain = dirs.ledger().read_chain().unwrap();
        chain.validate().unwrap();
        assert!(chain.find_by_hash(&out.block_hash).is_some());
    }

    #[test]
    fn double_registration_links_blocks() {
        let dirs = Dirs::new("double");
        let scene = synth::test_scene(synth::DEFAULT_SCENE_SEED);
        let ledger = dirs.ledger();
        let cas = dirs.cas();
        let cfg = PipelineConfig::default();
        let a = register(&scene, &owner(), &cfg, &ledger, &cas, &FixedClock(100), None).unwrap();
        let b = register(&scene, &owner(), &cfg, &ledger, &cas, &FixedClock(100), None).unwrap();
        let chain = ledger.read_chain().unwrap();
        assert_eq!(chain.len(), 2);
        assert_eq!(chain.blocks()[1].prev_block_hash, a.block_hash);
        assert_ne!(a.block_hash, b.block_hash);
    }

    #[test]
    fn resize_policy_contract() {
        let dirs = Dirs::new("resize");
        let small = imaging::resize_bilinear(&synth::test_scene(1), 300, 200);
        let strict = PipelineConfig {
            resize_policy: ResizePolicy::Strict,
            ..PipelineConfig::default()
        };
        let err = register(
            &small,
            &owner(),
            &strict,
            &dirs.ledger(),
            &dirs.cas(),
            &FixedClock(1),
            None,
        );
        assert!(matches!(err, Err(PipelineError::WrongDimensions { .. })));
        let lax = PipelineConfig::default();
        let out = register(
            &small,
            &owner(),
            &lax,
            &dirs.ledger(),
            &dirs.cas(),
            &FixedClock(1),
            None,
        )
        .unwrap();
        assert!(out.resized_working_copy);
    }

    #[test]
    fn empty_owner_rejected() {
        let dirs = Dirs::new("owner");
        let scene = synth::test_scene(synth::DEFAULT_SCENE_SEED);
        let mut bad = owner();
        bad.owner = String::new();
        assert!(matches!(
            register(
                &scene,
                &bad,
                &PipelineConfig::default(),
                &dirs.ledger(),
                &dirs.cas(),
                &FixedClock(1),
                None
            ),
            Err(PipelineError::EmptyOwner)
        ));
    }

    #[test]
    fn verify_empty_ledger_errors() {
        let dirs = Dirs::new("empty");
        let scene = synth::test_scene(synth::DEFAULT_SCENE_SEED);
        assert!(matches!(
            verify(
                &scene,
                &PipelineConfig::default(),
                &dirs.ledger(),
                &dirs.cas()
            ),
            Err(PipelineError::EmptyLedger)
        ));
    }
}
