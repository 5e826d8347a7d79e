//! Canonical 8-bit raster images, PNG I/O, grayscale conversion, resizing,
//! and region/patch operations.
//!
//! Every pipeline stage works on [`Image`] (1 or 3 channels, row-major u8
//! samples) or [`GrayImage`]. All operations are pure: they take references
//! and return new values.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed png: {0}")]
    MalformedPng(String),
    #[error("unsupported png: {0}")]
    UnsupportedPng(String),
    #[error("invalid dimensions {width}x{height}x{channels}")]
    InvalidDimensions {
        width: u32,
        height: u32,
        channels: u8,
    },
    #[error("sample buffer length {got} does not match {want}")]
    BufferLength { got: usize, want: usize },
    #[error("region {rect:?} out of bounds for {width}x{height}")]
    RegionOutOfBounds {
        rect: Rect,
        width: u32,
        height: u32,
    },
    #[error("malformed canonical raster: {0}")]
    MalformedCanonical(String),
}

/// Rectangular region, in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Rect {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
}

impl Rect {
    pub fn new(x: u32, y: u32, w: u32, h: u32) -> Self {
        Rect { x, y, w, h }
    }

    pub fn area(&self) -> u64 {
        self.w as u64 * self.h as u64
    }

    fn fits_in(&self, width: u32, height: u32) -> bool {
        self.x.checked_add(self.w).is_some_and(|r| r <= width)
            && self.y.checked_add(self.h).is_some_and(|b| b <= height)
    }

    /// Intersection-over-union of two rectangles.
    pub fn iou(&self, other: &Rect) -> f64 {
        let x0 = self.x.max(other.x) as i64;
        let y0 = self.y.max(other.y) as i64;
        let x1 = ((self.x + self.w).min(other.x + other.w)) as i64;
        let y1 = ((self.y + self.h).min(other.y + other.h)) as i64;
        let iw = (x1 - x0).max(0);
        let ih = (y1 - y0).max(0);
        let inter = (iw * ih) as f64;
        let union = (self.area() + other.area()) as f64 - inter;
        if union <= 0.0 {
            0.0
        } else {
            inter / union
        }
    }
}

/// 8-bit raster image, 1 (gray) or 3 (RGB) channels, row-major samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    width: u32,
    height: u32,
    channels: u8,
    data: Vec<u8>,
}

impl Image {
    pub fn new(width: u32, height: u32, channels: u8, data: Vec<u8>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 || !(channels == 1 || channels == 3) {
            return Err(ImageError::InvalidDimensions {
                width,
                height,
                channels,
            });
        }
        let want = width as usize * height as usize * channels as usize;
        if data.len() != want {
            return Err(ImageError::BufferLength {
                got: data.len(),
                want,
            });
        }
        Ok(Image {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn filled(width: u32, height: u32, channels: u8, value: u8) -> Self {
        let data = vec![value; width as usize * height as usize * channels as usize];
        Image::new(width, height, channels, data).expect("filled: valid dims")
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn channels(&self) -> u8 {
        self.channels
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    #[inline]
    pub fn sample(&self, x: u32, y: u32, c: u8) -> u8 {
        let idx = (y as usize * self.width as usize + x as usize) * self.channels as usize
            + c as usize;
        self.data[idx]
    }

    #[inline]
    pub fn set_sample(&mut self, x: u32, y: u32, c: u8, v: u8) {
        let idx = (y as usize * self.width as usize + x as usize) * self.channels as usize
            + c as usize;
        self.data[idx] = v;
    }

    /// BT.601 luma, rounded half up. Single-channel input is returned as-is.
    pub fn to_grayscale(&self) -> GrayImage {
        if self.channels == 1 {
            return GrayImage {
                width: self.width,
                height: self.height,
                data: self.data.clone(),
            };
        }
        let mut out = Vec::with_capacity(self.width as usize * self.height as usize);
        for px in self.data.chunks_exact(3) {
            let y = 0.299 * px[0] as f64 + 0.587 * px[1] as f64 + 0.114 * px[2] as f64;
            out.push(y.round() as u8);
        }
        GrayImage {
            width: self.width,
            height: self.height,
            data: out,
        }
    }

    pub fn copy_region(&self, src: Rect) -> Result<Image, ImageError> {
        if !src.fits_in(self.width, self.height) || src.w == 0 || src.h == 0 {
            return Err(ImageError::RegionOutOfBounds {
                rect: src,
                width: self.width,
                height: self.height,
            });
        }
        let ch = self.channels as usize;
        let mut data = Vec::with_capacity(src.w as usize * src.h as usize * ch);
        for y in src.y..src.y + src.h {
            let row = (y as usize * self.width as usize + src.x as usize) * ch;
            data.extend_from_slice(&self.data[row..row + src.w as usize * ch]);
        }
        Image::new(src.w, src.h, self.channels, data)
    }

    /// Exact sample overwrite of `patch` at (x, y); pixels outside are untouched.
    pub fn paste_region(&self, patch: &Image, x: u32, y: u32) -> Result<Image, ImageError> {
        if patch.channels != self.channels {
            return Err(ImageError::InvalidDimensions {
                width: patch.width,
                height: patch.height,
                channels: patch.channels,
            });
        }
        let dest = Rect::new(x, y, patch.width, patch.height);
        if !dest.fits_in(self.width, self.height) {
            return Err(ImageError::RegionOutOfBounds {
                rect: dest,
                width: self.width,
                height: self.height,
            });
        }
        let mut out = self.clone();
        let ch = self.channels as usize;
        for py in 0..patch.height {
            let src_row = py as usize * patch.width as usize * ch;
            let dst_row = ((y + py) as usize * self.width as usize + x as usize) * ch;
            out.data[dst_row..dst_row + patch.width as usize * ch]
                .copy_from_slice(&patch.data[src_row..src_row + patch.width as usize * ch]);
        }
        Ok(out)
    }

    /// Canonical raster byte form: width, height, channels as 4-byte
    /// big-endian words, then the raw samples. Content digests and the CAS
    /// key for originals hash this form, so they are independent of PNG
    /// encoder settings.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(12 + self.data.len());
        out.extend_from_slice(&self.width.to_be_bytes());
        out.extend_from_slice(&self.height.to_be_bytes());
        out.extend_from_slice(&(self.channels as u32).to_be_bytes());
        out.extend_from_slice(&self.data);
        out
    }

    pub fn from_canonical_bytes(bytes: &[u8]) -> Result<Image, ImageError> {
        if bytes.len() < 12 {
            return Err(ImageError::MalformedCanonical("truncated header".into()));
        }
        let width = u32::from_be_bytes(bytes[0..4].try_into().unwrap());
        let height = u32::from_be_bytes(bytes[4..8].try_into().unwrap());
        let channels = u32::from_be_bytes(bytes[8..12].try_into().unwrap());
        if channels != 1 && channels != 3 {
            return Err(ImageError::MalformedCanonical(format!(
                "unsupported channel count {channels}"
            )));
        }
        Image::new(width, height, channels as u8, bytes[12..].to_vec())
            .map_err(|e| ImageError::MalformedCanonical(e.to_string()))
    }
}

/// Single-channel 8-bit image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: u32, height: u32, data: Vec<u8>) -> Result<Self, ImageError> {
        let img = Image::new(width, height, 1, data)?;
        Ok(GrayImage {
            width: img.width,
            height: img.height,
            data: img.data,
        })
    }

    pub fn filled(width: u32, height: u32, value: u8) -> Self {
        GrayImage {
            width,
            height,
            data: vec![value; width as usize * height as usize],
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    #[inline]
    pub fn pixel(&self, x: u32, y: u32) -> u8 {
        self.data[y as usize * self.width as usize + x as usize]
    }

    #[inline]
    pub fn set_pixel(&mut self, x: u32, y: u32, v: u8) {
        self.data[y as usize * self.width as usize + x as usize] = v;
    }

    pub fn to_image(&self) -> Image {
        Image {
            width: self.width,
            height: self.height,
            channels: 1,
            data: self.data.clone(),
        }
    }

    pub fn to_grayscale(&self) -> GrayImage {
        self.clone()
    }
}

impl From<GrayImage> for Image {
    fn from(g: GrayImage) -> Image {
        Image {
            width: g.width,
            height: g.height,
            channels: 1,
            data: g.data,
        }
    }
}

pub fn load_png(path: impl AsRef<Path>) -> Result<Image, ImageError> {
    let path = path.as_ref();
    let io_err = |source| ImageError::Io {
        path: path.display().to_string(),
        source,
    };
    let file = File::open(path).map_err(io_err)?;
    let mut decoder = png::Decoder::new(BufReader::new(file));
    // Expand sub-byte grays to 8 bit, keep 16 bit as-is so it can be rejected.
    decoder.set_transformations(png::Transformations::EXPAND);
    let mut reader = decoder
        .read_info()
        .map_err(|e| ImageError::MalformedPng(e.to_string()))?;
    let info = reader.info();
    if info.bit_depth == png::BitDepth::Sixteen {
        return Err(ImageError::UnsupportedPng("bit depth 16".into()));
    }
    let mut buf = vec![0u8; reader.output_buffer_size().unwrap_or(0)];
    let frame = reader
        .next_frame(&mut buf)
        .map_err(|e| ImageError::MalformedPng(e.to_string()))?;
    buf.truncate(frame.buffer_size());
    let (width, height) = (frame.width, frame.height);
    let (channels, data) = match frame.color_type {
        png::ColorType::Grayscale => (1u8, buf),
        png::ColorType::Rgb => (3u8, buf),
        png::ColorType::GrayscaleAlpha => {
            (1u8, buf.chunks_exact(2).map(|p| p[0]).collect())
        }
        png::ColorType::Rgba => (
            3u8,
            buf.chunks_exact(4)
                .flat_map(|p| [p[0], p[1], p[2]])
                .collect(),
        ),
        other => {
            return Err(ImageError::UnsupportedPng(format!(
                "color type {other:?}"
            )))
        }
    };
    Image::new(width, height, channels, data)
}

pub fn save_png(img: &Image, path: impl AsRef<Path>) -> Result<(), ImageError> {
    let path = path.as_ref();
    let io_err = |source| ImageError::Io {
        path: path.display().to_string(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let bytes = encode_png(img);
    std::io::Write::write_all(&mut BufWriter::new(file), &bytes).map_err(io_err)
}

/// Deterministic, non-interlaced 8-bit PNG encoding.
pub fn encode_png(img: &Image) -> Vec<u8> {
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, img.width(), img.height());
        enc.set_color(if img.channels() == 1 {
            png::ColorType::Grayscale
        } else {
            png::ColorType::Rgb
        });
        enc.set_depth(png::BitDepth::Eight);
        let mut writer = enc.write_header().expect("png header");
        writer
            .write_image_data(img.data())
            .expect("png image data");
    }
    out
}

pub fn decode_png(bytes: &[u8]) -> Result<Image, ImageError> {
    let mut decoder = png::Decoder::new(std::io::Cursor::new(bytes));
    decoder.set_transformations(png::Transformations::EXPAND);
    let mut reader = decoder
        .read_info()
        .map_err(|e| ImageError::MalformedPng(e.to_string()))?;
    if reader.info().bit_depth == png::BitDepth::Sixteen {
        return Err(ImageError::UnsupportedPng("bit depth 16".into()));
    }
    let mut buf = vec![0u8; reader.output_buffer_size().unwrap_or(0)];
    let frame = reader
        .next_frame(&mut buf)
        .map_err(|e| ImageError::MalformedPng(e.to_string()))?;
    buf.truncate(frame.buffer_size());
    let (channels, data) = match frame.color_type {
        png::ColorType::Grayscale => (1u8, buf),
        png::ColorType::Rgb => (3u8, buf),
        png::ColorType::GrayscaleAlpha => {
            (1u8, buf.chunks_exact(2).map(|p| p[0]).collect())
        }
        png::ColorType::Rgba => (
            3u8,
            buf.chunks_exact(4)
                .flat_map(|p| [p[0], p[1], p[2]])
                .collect(),
        ),
        other => {
            return Err(ImageError::UnsupportedPng(format!(
                "color type {other:?}"
            )))
        }
    };
    Image::new(frame.width, frame.height, channels, data)
}

/// Area-weighted mean resampling (box filter with exact fractional coverage),
/// rounded half up. This is the dHash pre-scale convention; bilinear is kept
/// for the resize attack.
pub fn resize_area(src: &GrayImage, out_w: u32, out_h: u32) -> GrayImage {
    assert!(out_w >= 1 && out_h >= 1);
    if out_w == src.width() && out_h == src.height() {
        return src.clone();
    }
    let sw = src.width() as f64;
    let sh = src.height() as f64;
    let mut out = Vec::with_capacity(out_w as usize * out_h as usize);
    for oy in 0..out_h {
        let y0 = oy as f64 * sh / out_h as f64;
        let y1 = (oy + 1) as f64 * sh / out_h as f64;
        for ox in 0..out_w {
            let x0 = ox as f64 * sw / out_w as f64;
            let x1 = (ox + 1) as f64 * sw / out_w as f64;
            let mut acc = 0.0;
            let mut weight = 0.0;
            let mut sy = y0.floor() as u32;
            while (sy as f64) < y1 {
                let wy = (y1.min((sy + 1) as f64) - y0.max(sy as f64)).max(0.0);
                if wy > 0.0 {
                    let mut sx = x0.floor() as u32;
                    while (sx as f64) < x1 {
                        let wx = (x1.min((sx + 1) as f64) - x0.max(sx as f64)).max(0.0);
                        if wx > 0.0 {
                            acc += wx * wy * src.pixel(sx.min(src.width() - 1), sy.min(src.height() - 1)) as f64;
                            weight += wx * wy;
                        }
                        sx += 1;
                    }
                }
                sy += 1;
            }
            let mean = acc / weight;
            out.push(((mean + 0.5).floor() as i64).clamp(0, 255) as u8);
        }
    }
    GrayImage {
        width: out_w,
        height: out_h,
        data: out,
    }
}

/// Bilinear resampling with center-aligned coordinates, per channel.
pub fn resize_bilinear(src: &Image, out_w: u32, out_h: u32) -> Image {
    assert!(out_w >= 1 && out_h >= 1);
    if out_w == src.width() && out_h == src.height() {
        return src.clone();
    }
    let ch = src.channels() as usize;
    let sx_scale = src.width() as f64 / out_w as f64;
    let sy_scale = src.height() as f64 / out_h as f64;
    let mut data = vec![0u8; out_w as usize * out_h as usize * ch];
    for oy in 0..out_h {
        let fy = ((oy as f64 + 0.5) * sy_scale - 0.5).clamp(0.0, (src.height() - 1) as f64);
        let y0 = fy.floor() as u32;
        let y1 = (y0 + 1).min(src.height() - 1);
        let ty = fy - y0 as f64;
        for ox in 0..out_w {
            let fx = ((ox as f64 + 0.5) * sx_scale - 0.5).clamp(0.0, (src.width() - 1) as f64);
            let x0 = fx.floor() as u32;
            let x1 = (x0 + 1).min(src.width() - 1);
            let tx = fx - x0 as f64;
            for c in 0..ch {
                let p00 = src.sample(x0, y0, c as u8) as f64;
                let p10 = src.sample(x1, y0, c as u8) as f64;
                let p01 = src.sample(x0, y1, c as u8) as f64;
                let p11 = src.sample(x1, y1, c as u8) as f64;
                let top = p00 + (p10 - p00) * tx;
                let bot = p01 + (p11 - p01) * tx;
                let v = top + (bot - top) * ty;
                data[(oy as usize * out_w as usize + ox as usize) * ch + c] =
                    v.round().clamp(0.0, 255.0) as u8;
            }
        }
    }
    Image {
        width: out_w,
        height: out_h,
        channels: src.channels(),
        data,
    }
}

pub fn resize_bilinear_gray(src: &GrayImage, out_w: u32, out_h: u32) -> GrayImage {
    resize_bilinear(&src.to_image(), out_w, out_h).to_grayscale()
}
