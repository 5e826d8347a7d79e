//! Command-line interface for the watermarking rights pipeline: register
//! and verify images against a local ledger + store, run single attacks or
//! tampers, and produce the benchmark tables.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use imgdrm::attacks::{self, AttackSpec, TamperSpec};
use imgdrm::imaging::{self, Rect};
use imgdrm::payload;
use imgdrm::pipeline::{self, OwnerInfo, PipelineConfig, ResizePolicy};
use imgdrm::registry::{Cas, Ledger, SystemClock};
use imgdrm::synth;
use imgdrm::watermark::{self, Codec, CodecKind, WatermarkBits};

#[derive(Parser)]
#[command(name = "imgdrm", version, about = "Blind QR watermarking with a hash-chained rights registry")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CodecArgs {
    /// Watermark codec: dct, dwtdct, or dctsvd.
    #[arg(long, default_value = "dct")]
    codec: String,
    /// Embedding strength (pair margin, or quantization step for dctsvd).
    #[arg(long)]
    strength: Option<f64>,
}

impl CodecArgs {
    fn codec(&self) -> Result<Codec> {
        let kind: CodecKind = self.codec.parse().map_err(anyhow::Error::msg)?;
        let codec = match self.strength {
            Some(s) => Codec::new(kind, s)?,
            None => Codec::with_default_strength(kind),
        };
        Ok(codec)
    }
}

#[derive(Args)]
struct StoreArgs {
    /// Ledger directory (holds ledger.log).
    #[arg(long)]
    ledger: PathBuf,
    /// Content-addressed store directory.
    #[arg(long)]
    cas: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Register an image: ledger block, QR watermark, stored assets.
    Register {
        #[arg(long)]
        image: PathBuf,
        /// Owner identity text; the ledger address is derived from it.
        #[arg(long)]
        owner: String,
        #[arg(long)]
        name: String,
        #[arg(long)]
        author: String,
        #[arg(long)]
        email: String,
        #[arg(long)]
        copyright: String,
        #[command(flatten)]
        store: StoreArgs,
        #[command(flatten)]
        codec: CodecArgs,
        /// Where to write the watermarked PNG.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Reject inputs that are not already 512x512 instead of resizing.
        #[arg(long)]
        strict_size: bool,
    },
    /// Verify an image against the ledger and report ownership + tampering.
    Verify {
        #[arg(long)]
        image: PathBuf,
        #[command(flatten)]
        store: StoreArgs,
        #[command(flatten)]
        codec: CodecArgs,
        /// Write the JSON report here (text goes to stdout regardless).
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write the layer-4 suspect mask as a PNG (matched subjects only).
        #[arg(long)]
        mask_out: Option<PathBuf>,
        /// Write the subject with localization boxes outlined (matched
        /// subjects only).
        #[arg(long)]
        overlay_out: Option<PathBuf>,
    },
    /// Embed a payload string into an image (low level).
    Embed {
        #[arg(long)]
        image: PathBuf,
        /// Payload text, e.g. a 0x-prefixed block hash.
        #[arg(long)]
        payload: String,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        codec: CodecArgs,
    },
    /// Extract payload bits from an image (low level).
    Extract {
        #[arg(long)]
        image: PathBuf,
        /// Write the recovered 64x64 bit matrix as a PNG.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Compare against this payload and print the bit-error count.
        #[arg(long)]
        expect_payload: Option<String>,
        #[command(flatten)]
        codec: CodecArgs,
    },
    /// Apply one watermark attack.
    Attack {
        #[arg(long)]
        image: PathBuf,
        /// color | histogram | blur | median_blur | gaussian_blur | erase |
        /// jpeg | gaussian_noise | salt_pepper
        #[arg(long = "type")]
        kind: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        qf: Option<u8>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        density: Option<f64>,
        #[arg(long)]
        shift: Option<i16>,
        #[arg(long)]
        channel: Option<u8>,
        #[arg(long)]
        kernel: Option<u32>,
        /// Erase rectangle as x,y,w,h.
        #[arg(long)]
        rect: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Apply one tampering operation.
    Tamper {
        #[arg(long)]
        image: PathBuf,
        /// copy_move | image_splicing | text_splicing | resize | cropping |
        /// noise_blur
        #[arg(long = "type")]
        kind: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Source rectangle for copy_move as x,y,w,h.
        #[arg(long)]
        src: Option<String>,
        /// Destination for copy_move / splice / text origin as x,y.
        #[arg(long)]
        dest: Option<String>,
        #[arg(long)]
        text: Option<String>,
        #[arg(long)]
        scale: Option<u32>,
        #[arg(long)]
        percent: Option<u32>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the full attack/tamper benchmark and write report files.
    Bench {
        #[arg(long)]
        image: PathBuf,
        /// Output directory for bench.json and the text tables.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        codec: CodecArgs,
    },
    /// Write a deterministic procedural test scene (512x512 PNG).
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = synth::DEFAULT_SCENE_SEED)]
        seed: u64,
    },
    /// Render a payload's 64x64 QR bit matrix to a PNG (1 px per module).
    Qr {
        #[arg(long)]
        payload: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_rect(s: &str) -> Result<Rect> {
    let parts: Vec<u32> = s
        .split(',')
        .map(|p| p.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .context("rect must be x,y,w,h")?;
    if parts.len() != 4 {
        bail!("rect must have exactly four components, got {}", parts.len());
    }
    Ok(Rect::new(parts[0], parts[1], parts[2], parts[3]))
}

fn parse_point(s: &str) -> Result<(u32, u32)> {
    let parts: Vec<u32> = s
        .split(',')
        .map(|p| p.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .context("point must be x,y")?;
    if parts.len() != 2 {
        bail!("point must have exactly two components, got {}", parts.len());
    }
    Ok((parts[0], parts[1]))
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Register {
            image,
            owner,
            name,
            author,
            email,
            copyright,
            store,
            codec,
            out,
            strict_size,
        } => {
            let img = imaging::load_png(&image)?;
            let config = PipelineConfig {
                codec: codec.codec()?,
                resize_policy: if strict_size {
                    ResizePolicy::Strict
                } else {
                    ResizePolicy::ResizeToHost
                },
                ..PipelineConfig::default()
            };
            let info = OwnerInfo {
                owner,
                creation_name: name,
                creation_author: author,
                copyright_owner: copyright,
                mail_address: email,
            };
            let ledger = Ledger::open(&store.ledger)?;
            let cas = Cas::open(&store.cas)?;
            let outcome = pipeline::register(
                &img,
                &info,
                &config,
                &ledger,
                &cas,
                &SystemClock,
                out.as_deref(),
            )?;
            println!("{}", serde_json::to_string_pretty(&outcome)?);
        }
        Command::Verify {
            image,
            store,
            codec,
            report,
            mask_out,
            overlay_out,
        } => {
            let img = imaging::load_png(&image)?;
            let config = PipelineConfig {
                codec: codec.codec()?,
                ..PipelineConfig::default()
            };
            let ledger = Ledger::open(&store.ledger)?;
            let cas = Cas::open(&store.cas)?;
            let result = pipeline::verify(&img, &config, &ledger, &cas)?;
            if let Some(path) = report {
                std::fs::write(&path, result.to_json()?)?;
            }
            if let Some(path) = &overlay_out {
                if let Some(tamper) = &result.tamper {
                    // Boxes live in the reference's host-sized space.
                    let side = imgdrm::watermark::HOST_SIDE;
                    let aligned = if img.width() != side || img.height() != side {
                        imaging::resize_bilinear(&img, side, side)
                    } else {
                        img.clone()
                    };
                    let overlay = imgdrm::detection::annotate_boxes(&aligned, &tamper.boxes);
                    imaging::save_png(&overlay, path)?;
                }
            }
            if let (Some(path), Some(block_hash)) = (&mask_out, &result.best_block_hash) {
                // Regenerate the released reference and localize against it.
                let chain = ledger.read_chain()?;
                let block = chain
                    .find_by_hash(block_hash)
                    .context("matched block vanished from ledger")?;
                let original = imaging::Image::from_canonical_bytes(
                    &cas.get(&imgdrm::registry::Cid::parse(&block.cas_cid)?)?,
                )?;
                let matrix = payload::qr_matrix(&block.payload_text())?;
                let bits = WatermarkBits::from_bools(payload::matrix_bits(&matrix))?;
                let reference = watermark::embed_color(&original, &bits, &config.codec)?;
                let subject = if img.width() != reference.width() || img.height() != reference.height() {
                    imaging::resize_bilinear(&img, reference.width(), reference.height())
                } else {
                    img.clone()
                };
                let loc = imgdrm::detection::layer4_localize(
                    &reference.to_grayscale(),
                    &subject.to_grayscale(),
                )?;
                imaging::save_png(&loc.mask_image().to_image(), path)?;
            }
            print!("{}", result.to_text());
            if !result.matched {
                std::process::exit(2);
            }
        }
        Command::Embed {
            image,
            payload: payload_text,
            out,
            codec,
        } => {
            let img = imaging::load_png(&image)?;
            let matrix = payload::qr_matrix(&payload_text)?;
            let bits = WatermarkBits::from_bools(payload::matrix_bits(&matrix))?;
            let wm = watermark::embed_color(&img, &bits, &codec.codec()?)?;
            imaging::save_png(&wm, &out)?;
            println!("embedded {} bits into {}", payload::MATRIX_BITS, out.display());
        }
        Command::Extract {
            image,
            out,
            expect_payload,
            codec,
        } => {
            let img = imaging::load_png(&image)?;
            let bits = watermark::extract(&img.to_grayscale(), &codec.codec()?)?;
            let matrix = payload::bits_matrix(bits.bits())?;
            if let Some(path) = out {
                imaging::save_png(&matrix.to_image(), &path)?;
                println!("wrote recovered matrix to {}", path.display());
            }
            println!("dark modules: {}", matrix.ones());
            if let Some(expected) = expect_payload {
                let want = payload::qr_matrix(&expected)?;
                let errors = want
                    .to_bits()
                    .iter()
                    .zip(bits.bits())
                    .filter(|(a, b)| *a != *b)
                    .count();
                println!("bit errors vs expected payload: {errors}");
            }
        }
        Command::Attack {
            image,
            kind,
            seed,
            qf,
            sigma,
            density,
            shift,
            channel,
            kernel,
            rect,
            out,
        } => {
            let img = imaging::load_png(&image)?;
            let spec = match kind.as_str() {
                "color" => AttackSpec::Color {
                    channel: channel.unwrap_or(0),
                    shift: shift.unwrap_or(30),
                },
                "histogram" => AttackSpec::Histogram,
                "blur" => AttackSpec::Blur {
                    kernel: kernel.unwrap_or(3),
                },
                "median_blur" => AttackSpec::MedianBlur {
                    kernel: kernel.unwrap_or(3),
                },
                "gaussian_blur" => AttackSpec::GaussianBlur {
                    kernel: kernel.unwrap_or(5),
                    sigma: sigma.unwrap_or(1.0),
                },
                "erase" => AttackSpec::Erase {
                    rect: match rect {
                        Some(r) => parse_rect(&r)?,
                        None => Rect::new(img.width() / 4, 0, img.width() / 8, img.height() / 8),
                    },
                    fill: 0,
                },
                "jpeg" => AttackSpec::Jpeg {
                    qf: qf.unwrap_or(50),
                },
                "gaussian_noise" => AttackSpec::GaussianNoise {
                    sigma: sigma.unwrap_or(5.0),
                    seed,
                },
                "salt_pepper" => AttackSpec::SaltPepper {
                    density: density.unwrap_or(0.01),
                    seed,
                },
                other => bail!("unknown attack type '{other}'"),
            };
            let attacked = attacks::apply_attack(&img, &spec)?;
            imaging::save_png(&attacked, &out)?;
            println!("{}", spec.canonical());
        }
        Command::Tamper {
            image,
            kind,
            seed,
            src,
            dest,
            text,
            scale,
            percent,
            sigma,
            out,
        } => {
            let img = imaging::load_png(&image)?;
            let spec = match kind.as_str() {
                "copy_move" => {
                    let src_rect = match src {
                        Some(r) => parse_rect(&r)?,
                        None => Rect::new(64, 64, 64, 64),
                    };
                    let (dest_x, dest_y) = match dest {
                        Some(d) => parse_point(&d)?,
                        None => (256, 256),
                    };
                    TamperSpec::CopyMove {
                        src: src_rect,
                        dest_x,
                        dest_y,
                    }
                }
                "image_splicing" => {
                    let (x, y) = match dest {
                        Some(d) => parse_point(&d)?,
                        None => (200, 200),
                    };
                    TamperSpec::ImageSplicing {
                        x,
                        y,
                        w: 96,
                        h: 96,
                        seed,
                    }
                }
                "text_splicing" => {
                    let (x, y) = match dest {
                        Some(d) => parse_point(&d)?,
                        None => (180, 460),
                    };
                    TamperSpec::TextSplicing {
                        text: text.unwrap_or_else(|| "COPY".to_string()),
                        scale: scale.unwrap_or(4),
                        x,
                        y,
                        intensity: 0,
                    }
                }
                "resize" => TamperSpec::Resize {
                    percent: percent.unwrap_or(75),
                },
                "cropping" => TamperSpec::Cropping {
                    percent: percent.unwrap_or(75),
                },
                "noise_blur" => TamperSpec::NoiseBlur {
                    sigma: sigma.unwrap_or(8.0),
                    kernel: 3,
                    seed,
                },
                other => bail!("unknown tamper type '{other}'"),
            };
            let tampered = attacks::apply_tamper(&img, &spec)?;
            imaging::save_png(&tampered, &out)?;
            println!("{}", spec.canonical());
        }
        Command::Bench { image, out, codec } => {
            let img = imaging::load_png(&image)?;
            let config = PipelineConfig {
                codec: codec.codec()?,
                ..PipelineConfig::default()
            };
            let report = pipeline::bench(&img, &config)?;
            report.write_to_dir(&out)?;
            print!("{}", report.watermark_table());
            println!();
            print!("{}", report.tamper_table());
            println!("\nreports written to {}", out.display());
        }
        Command::Synth { out, seed } => {
            let scene = synth::test_scene(seed);
            imaging::save_png(&scene, &out)?;
            println!("wrote {} ({}x{})", out.display(), scene.width(), scene.height());
        }
        Command::Qr {
            payload: payload_text,
            out,
        } => {
            let matrix = payload::qr_matrix(&payload_text)?;
            imaging::save_png(&matrix.to_image(), &out)?;
            println!("wrote {} ({} dark modules)", out.display(), matrix.ones());
        }
    }
    Ok(())
}
