//! Raster types and their file formats.
//!
//! Input images are 8-bit PNG (RGB, RGBA, gray, gray+alpha or palette) or
//! binary PPM (`P6`). Gray rasters are written as binary PGM (`P5`) or gray
//! PNG, at 8 or 16 bits. Binary layers are written as 1-bit PNG (ink is black)
//! or 8-bit PGM. Samples are stored as `round(value * max)`.

use std::fs::File;
use std::io::{BufWriter, Cursor, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::raster::{raster_newtype, Grid};

/// An RGB triple with channels in `[0, 1]`.
pub type Rgb = [f64; 3];

raster_newtype!(
    /// Color raster with every channel in `[0, 1]`.
    ColorImage,
    Rgb
);

raster_newtype!(
    /// Scalar raster with values in `[0, 1]`.
    GrayImage,
    f64
);

impl ColorImage {
    /// Builds an image from row-major pixels, checking size and channel range.
    pub fn new(width: usize, height: usize, pixels: Vec<Rgb>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Invalid("color image must be at least 1x1".into()));
        }
        if let Some(bad) = pixels
            .iter()
            .flatten()
            .find(|c| !(0.0..=1.0).contains(*c))
        {
            return Err(Error::Invalid(format!("channel value {bad} outside [0, 1]")));
        }
        Grid::from_vec(width, height, pixels).map(Self)
    }

    pub fn from_fn(width: usize, height: usize, f: impl FnMut(usize, usize) -> Rgb) -> Result<Self> {
        let grid = Grid::from_fn(width, height, f);
        Self::new(width, height, grid.into_vec())
    }

    /// Single-channel view of channel `c`.
    pub fn channel(&self, c: usize) -> Grid<f64> {
        self.0.map(|p| p[c])
    }

    /// Reassembles an image from three channel planes, clamping into `[0, 1]`.
    pub fn from_channels(channels: [Grid<f64>; 3]) -> Self {
        let [r, g, b] = channels;
        let (w, h) = r.dimensions();
        let data = r
            .iter()
            .zip(g.iter())
            .zip(b.iter())
            .map(|((&r, &g), &b)| [r.clamp(0.0, 1.0), g.clamp(0.0, 1.0), b.clamp(0.0, 1.0)])
            .collect();
        Self(Grid::from_vec(w, h, data).expect("channel planes share dimensions"))
    }
}

impl GrayImage {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Invalid(format!("gray value {bad} outside [0, 1]")));
        }
        Grid::from_vec(width, height, values).map(Self)
    }

    /// Builds a gray image, clamping values into `[0, 1]`.
    pub fn from_grid_clamped(grid: Grid<f64>) -> Self {
        Self(grid.map(|v| v.clamp(0.0, 1.0)))
    }

    /// Rounds every value to the nearest step representable at `bit_depth`.
    pub fn quantized(&self, bit_depth: BitDepth) -> Self {
        let max = bit_depth.max_sample() as f64;
        Self(self.0.map(|v| quantize(*v, bit_depth) as f64 / max))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitDepth {
    Eight,
    Sixteen,
}

impl BitDepth {
    pub fn max_sample(self) -> u16 {
        match self {
            BitDepth::Eight => 255,
            BitDepth::Sixteen => 65535,
        }
    }
}

impl TryFrom<u8> for BitDepth {
    type Error = Error;

    fn try_from(bits: u8) -> Result<Self> {
        match bits {
            8 => Ok(BitDepth::Eight),
            16 => Ok(BitDepth::Sixteen),
            other => Err(Error::Invalid(format!("unsupported bit depth {other}"))),
        }
    }
}

/// `round(v * max)` with `v` clamped into `[0, 1]`.
pub fn quantize(v: f64, depth: BitDepth) -> u16 {
    (v.clamp(0.0, 1.0) * depth.max_sample() as f64).round() as u16
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

const PNG_MAGIC: &[u8] = b"\x89PNG\r\n\x1a\n";

// ---------------------------------------------------------------------------
// Netpbm

struct PnmHeader {
    magic: [u8; 2],
    width: usize,
    height: usize,
    maxval: u32,
    data_offset: usize,
}

fn parse_pnm_header(path: &Path, bytes: &[u8]) -> Result<PnmHeader> {
    if bytes.len() < 2 || bytes[0] != b'P' {
        return Err(Error::format(path, "not a netpbm file"));
    }
    let magic = [bytes[0], bytes[1]];
    let mut pos = 2;
    let mut fields = [0u32; 3];
    for field in &mut fields {
        // whitespace and comments
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::format(path, "malformed netpbm header"))?;
    }
    // exactly one whitespace byte before the raster
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(Error::format(path, "malformed netpbm header"));
    }
    let [width, height, maxval] = fields;
    if width == 0 || height == 0 {
        return Err(Error::format(path, "netpbm image has zero size"));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::format(path, format!("unsupported maxval {maxval}")));
    }
    Ok(PnmHeader {
        magic,
        width: width as usize,
        height: height as usize,
        maxval,
        data_offset: pos + 1,
    })
}

/// Decodes the samples of a binary netpbm raster, normalized by maxval.
fn read_pnm_samples(path: &Path, bytes: &[u8], header: &PnmHeader, channels: usize) -> Result<Vec<f64>> {
    let count = header.width * header.height * channels;
    let wide = header.maxval > 255;
    let needed = count * if wide { 2 } else { 1 };
    let data = &bytes[header.data_offset..];
    if data.len() < needed {
        return Err(Error::format(
            path,
            format!("truncated raster: need {needed} bytes, found {}", data.len()),
        ));
    }
    let max = header.maxval as f64;
    let samples = if wide {
        data[..needed]
            .chunks_exact(2)
            .map(|b| (u16::from_be_bytes([b[0], b[1]]) as f64 / max).min(1.0))
            .collect()
    } else {
        data[..needed].iter().map(|&b| (b as f64 / max).min(1.0)).collect()
    };
    Ok(samples)
}

fn write_pnm(path: &Path, magic: &str, width: usize, height: usize, depth: BitDepth, samples: impl Iterator<Item = u16>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let io = |e| Error::io(path, e);
    write!(out, "{magic}\n{width} {height}\n{}\n", depth.max_sample()).map_err(io)?;
    let mut buf = Vec::with_capacity(width * height * 2);
    for s in samples {
        match depth {
            BitDepth::Eight => buf.push(s as u8),
            BitDepth::Sixteen => buf.extend_from_slice(&s.to_be_bytes()),
        }
    }
    out.write_all(&buf).map_err(io)?;
    out.flush().map_err(io)
}

// ---------------------------------------------------------------------------
// PNG

fn png_error(path: &Path, e: png::DecodingError) -> Error {
    Error::format(path, format!("PNG decode failed: {e}"))
}

struct DecodedPng {
    width: usize,
    height: usize,
    color: png::ColorType,
    depth: png::BitDepth,
    data: Vec<u8>,
}

fn decode_png(path: &Path, bytes: Vec<u8>) -> Result<DecodedPng> {
    let mut decoder = png::Decoder::new(Cursor::new(bytes));
    decoder.set_transformations(png::Transformations::EXPAND);
    let mut reader = decoder.read_info().map_err(|e| png_error(path, e))?;
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::format(path, "PNG too large"))?;
    let mut data = vec![0; size];
    let info = reader.next_frame(&mut data).map_err(|e| png_error(path, e))?;
    data.truncate(info.buffer_size());
    Ok(DecodedPng {
        width: info.width as usize,
        height: info.height as usize,
        color: info.color_type,
        depth: info.bit_depth,
        data,
    })
}

fn encode_png(
    path: &Path,
    width: usize,
    height: usize,
    setup: impl FnOnce(&mut png::Encoder<'_, &mut BufWriter<File>>),
    data: &[u8],
) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let encode_err = |e: png::EncodingError| Error::format(path, format!("PNG encode failed: {e}"));
    {
        let mut encoder = png::Encoder::new(&mut out, width as u32, height as u32);
        setup(&mut encoder);
        let mut writer = encoder.write_header().map_err(encode_err)?;
        writer.write_image_data(data).map_err(encode_err)?;
        writer.finish().map_err(encode_err)?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

fn has_extension(path: &Path, ext: &str) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case(ext))
}

// ---------------------------------------------------------------------------
// Public entry points

/// Loads a PNG or binary PPM as a color image. Alpha is composited onto white.
pub fn load_color_image(path: impl AsRef<Path>) -> Result<ColorImage> {
    let path = path.as_ref();
    let bytes = read_bytes(path)?;
    if bytes.starts_with(PNG_MAGIC) {
        let png = decode_png(path, bytes)?;
        if png.depth != png::BitDepth::Eight {
            return Err(Error::format(
                path,
                format!("unsupported bit depth {} (expected 8)", png.depth as u8),
            ));
        }
        let channels = png.color.samples();
        let pixels = png
            .data
            .chunks_exact(channels)
            .map(|px| {
                let n = |b: u8| b as f64 / 255.0;
                let (rgb, alpha) = match png.color {
                    png::ColorType::Rgb => ([n(px[0]), n(px[1]), n(px[2])], 1.0),
                    png::ColorType::Rgba => ([n(px[0]), n(px[1]), n(px[2])], n(px[3])),
                    png::ColorType::Grayscale => ([n(px[0]); 3], 1.0),
                    png::ColorType::GrayscaleAlpha => ([n(px[0]); 3], n(px[1])),
                    png::ColorType::Indexed => unreachable!("EXPAND resolves palettes"),
                };
                rgb.map(|c| c * alpha + (1.0 - alpha))
            })
            .collect();
        ColorImage::new(png.width, png.height, pixels)
    } else if bytes.starts_with(b"P6") {
        let header = parse_pnm_header(path, &bytes)?;
        let samples = read_pnm_samples(path, &bytes, &header, 3)?;
        let pixels = samples.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
        ColorImage::new(header.width, header.height, pixels)
    } else if bytes.starts_with(b"P") && bytes.len() > 1 {
        Err(Error::format(
            path,
            format!("unsupported netpbm variant P{} (expected P6)", bytes[1] as char),
        ))
    } else {
        Err(Error::format(path, "unrecognized image format (expected PNG or binary PPM)"))
    }
}

/// Loads a gray PNG (8 or 16 bit) or binary PGM, normalized to `[0, 1]`.
pub fn load_gray_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = read_bytes(path)?;
    if bytes.starts_with(PNG_MAGIC) {
        let png = decode_png(path, bytes)?;
        if !matches!(png.color, png::ColorType::Grayscale) {
            return Err(Error::format(
                path,
                format!("unsupported color type {:?} (expected grayscale)", png.color),
            ));
        }
        let values = match png.depth {
            png::BitDepth::Eight => png.data.iter().map(|&b| b as f64 / 255.0).collect(),
            png::BitDepth::Sixteen => png
                .data
                .chunks_exact(2)
                .map(|b| u16::from_be_bytes([b[0], b[1]]) as f64 / 65535.0)
                .collect(),
            other => {
                return Err(Error::format(path, format!("unsupported bit depth {}", other as u8)))
            }
        };
        GrayImage::new(png.width, png.height, values)
    } else if bytes.starts_with(b"P5") {
        let header = parse_pnm_header(path, &bytes)?;
        let values = read_pnm_samples(path, &bytes, &header, 1)?;
        debug_assert_eq!(header.magic, *b"P5");
        GrayImage::new(header.width, header.height, values)
    } else {
        Err(Error::format(path, "unrecognized gray image format (expected PNG or binary PGM)"))
    }
}

/// Writes a gray raster as PGM (`.pgm`) or gray PNG (anything else).
pub fn save_gray_image(img: &GrayImage, path: impl AsRef<Path>, depth: BitDepth) -> Result<()> {
    let path = path.as_ref();
    let samples = img.iter().map(|&v| quantize(v, depth));
    if has_extension(path, "pgm") {
        write_pnm(path, "P5", img.width(), img.height(), depth, samples)
    } else {
        let mut data = Vec::with_capacity(img.len() * 2);
        for s in samples {
            match depth {
                BitDepth::Eight => data.push(s as u8),
                BitDepth::Sixteen => data.extend_from_slice(&s.to_be_bytes()),
            }
        }
        let png_depth = match depth {
            BitDepth::Eight => png::BitDepth::Eight,
            BitDepth::Sixteen => png::BitDepth::Sixteen,
        };
        encode_png(
            path,
            img.width(),
            img.height(),
            |enc| {
                enc.set_color(png::ColorType::Grayscale);
                enc.set_depth(png_depth);
            },
            &data,
        )
    }
}

/// Writes a binary layer with ink black on white: 1-bit PNG, or 8-bit PGM
/// for `.pgm` paths. `dpi` is recorded in the PNG `pHYs` chunk when given.
pub fn save_mask(mask: &Grid<bool>, path: impl AsRef<Path>, dpi: Option<f64>) -> Result<()> {
    let path = path.as_ref();
    let (w, h) = mask.dimensions();
    if has_extension(path, "pgm") {
        let samples = mask.iter().map(|&ink| if ink { 0 } else { 255 });
        return write_pnm(path, "P5", w, h, BitDepth::Eight, samples);
    }
    let stride = w.div_ceil(8);
    let mut data = vec![0u8; stride * h];
    for y in 0..h {
        for (x, &ink) in mask.row(y).iter().enumerate() {
            if !ink {
                data[y * stride + x / 8] |= 0x80 >> (x % 8);
            }
        }
    }
    encode_png(
        path,
        w,
        h,
        |enc| {
            enc.set_color(png::ColorType::Grayscale);
            enc.set_depth(png::BitDepth::One);
            if let Some(dpi) = dpi {
                let ppm = (dpi / 0.0254).round() as u32;
                enc.set_pixel_dims(Some(png::PixelDimensions {
                    xppu: ppm,
                    yppu: ppm,
                    unit: png::Unit::Meter,
                }));
            }
        },
        &data,
    )
}

/// Reads a binary layer written by [`save_mask`]: dark pixels are ink.
pub fn load_mask(path: impl AsRef<Path>) -> Result<Grid<bool>> {
    let gray = load_gray_image(path)?;
    Ok(gray.map(|&v| v < 0.5))
}

/// Writes an indexed-color PNG from per-pixel palette indices.
pub fn save_indexed_png(indices: &Grid<u8>, palette: &[[u8; 3]], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let flat: Vec<u8> = palette.iter().flatten().copied().collect();
    encode_png(
        path,
        indices.width(),
        indices.height(),
        |enc| {
            enc.set_color(png::ColorType::Indexed);
            enc.set_depth(png::BitDepth::Eight);
            enc.set_palette(flat);
        },
        indices.as_slice(),
    )
}

/// Reads back the raw palette indices of an 8-bit indexed PNG.
pub fn load_indexed_png(path: impl AsRef<Path>) -> Result<Grid<u8>> {
    let path = path.as_ref();
    let bytes = read_bytes(path)?;
    let mut decoder = png::Decoder::new(Cursor::new(bytes));
    decoder.set_transformations(png::Transformations::IDENTITY);
    let mut reader = decoder.read_info().map_err(|e| png_error(path, e))?;
    let mut data = vec![0; reader.output_buffer_size().unwrap_or(0)];
    let info = reader.next_frame(&mut data).map_err(|e| png_error(path, e))?;
    if info.color_type != png::ColorType::Indexed || info.bit_depth != png::BitDepth::Eight {
        return Err(Error::format(path, "expected an 8-bit indexed PNG"));
    }
    data.truncate(info.buffer_size());
    Grid::from_vec(info.width as usize, info.height as usize, data)
}

/// Writes a color image as an 8-bit RGB PNG or binary PPM (`.ppm`).
pub fn save_color_image(img: &ColorImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if has_extension(path, "ppm") {
        let samples = img.iter().flatten().map(|&c| quantize(c, BitDepth::Eight));
        return write_pnm(path, "P6", img.width(), img.height(), BitDepth::Eight, samples);
    }
    let data: Vec<u8> = img
        .iter()
        .flatten()
        .map(|&c| quantize(c, BitDepth::Eight) as u8)
        .collect();
    encode_png(
        path,
        img.width(),
        img.height(),
        |enc| {
            enc.set_color(png::ColorType::Rgb);
            enc.set_depth(png::BitDepth::Eight);
        },
        &data,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp() -> tempfile::TempDir {
        tempfile::tempdir().unwrap()
    }

    fn write_png(path: &Path, w: u32, h: u32, color: png::ColorType, depth: png::BitDepth, data: &[u8]) {
        let file = File::create(path).unwrap();
        let mut enc = png::Encoder::new(BufWriter::new(file), w, h);
        enc.set_color(color);
        enc.set_depth(depth);
        let mut writer = enc.write_header().unwrap();
        writer.write_image_data(data).unwrap();
    }

    #[test]
    fn ppm_pixel_is_normalized() {
        let dir = tmp();
        let path = dir.path().join("red.ppm");
        std::fs::write(&path, b"P6\n1 1\n255\n\xff\x00\x00").unwrap();
        let img = load_color_image(&path).unwrap();
        assert_eq!(img.dimensions(), (1, 1));
        assert_eq!(*img.get(0, 0), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn ppm_with_comment_and_wide_samples() {
        let dir = tmp();
        let path = dir.path().join("wide.ppm");
        let mut bytes = b"P6 # comment\n1 1\n65535\n".to_vec();
        bytes.extend_from_slice(&[0xff, 0xff, 0x80, 0x00, 0x00, 0x00]);
        std::fs::write(&path, bytes).unwrap();
        let img = load_color_image(&path).unwrap();
        assert_eq!(img.get(0, 0)[0], 1.0);
        assert!((img.get(0, 0)[1] - 32768.0 / 65535.0).abs() < 1e-12);
    }

    #[test]
    fn transparent_png_composites_to_white() {
        let dir = tmp();
        let path = dir.path().join("alpha.png");
        write_png(
            &path,
            2,
            1,
            png::ColorType::Rgba,
            png::BitDepth::Eight,
            &[255, 0, 0, 0, 0, 0, 255, 0],
        );
        let img = load_color_image(&path).unwrap();
        assert_eq!(img.as_slice(), &[[1.0, 1.0, 1.0], [1.0, 1.0, 1.0]]);
    }

    #[test]
    fn half_alpha_blends_toward_white() {
        let dir = tmp();
        let path = dir.path().join("half.png");
        write_png(&path, 1, 1, png::ColorType::Rgba, png::BitDepth::Eight, &[0, 0, 0, 255]);
        assert_eq!(*load_color_image(&path).unwrap().get(0, 0), [0.0; 3]);
        write_png(&path, 1, 1, png::ColorType::Rgba, png::BitDepth::Eight, &[0, 0, 0, 51]);
        let c = load_color_image(&path).unwrap().get(0, 0)[0];
        assert!((c - 0.8).abs() < 1e-12);
    }

    #[test]
    fn sixteen_bit_color_png_is_rejected_with_depth() {
        let dir = tmp();
        let path = dir.path().join("deep.png");
        write_png(&path, 1, 1, png::ColorType::Rgb, png::BitDepth::Sixteen, &[0; 6]);
        let err = load_color_image(&path).unwrap_err();
        assert!(matches!(err, Error::Format { .. }));
        assert!(err.to_string().contains("bit depth 16"), "{err}");
    }

    #[test]
    fn unreadable_and_unknown_files() {
        let dir = tmp();
        assert!(matches!(
            load_color_image(dir.path().join("nope.png")),
            Err(Error::Io { .. })
        ));
        let path = dir.path().join("junk.bin");
        std::fs::write(&path, b"hello").unwrap();
        assert!(matches!(load_color_image(&path), Err(Error::Format { .. })));
        let path = dir.path().join("ascii.ppm");
        std::fs::write(&path, b"P3\n1 1\n255\n255 0 0\n").unwrap();
        assert!(load_color_image(&path).unwrap_err().to_string().contains("P3"));
        let path = dir.path().join("short.ppm");
        std::fs::write(&path, b"P6\n2 2\n255\n\x00\x00").unwrap();
        assert!(load_color_image(&path).unwrap_err().to_string().contains("truncated"));
    }

    #[test]
    fn save_zero_map_decodes_to_zeros() {
        let dir = tmp();
        let img = GrayImage::new(3, 2, vec![0.0; 6]).unwrap();
        for name in ["z.pgm", "z.png"] {
            for depth in [BitDepth::Eight, BitDepth::Sixteen] {
                let path = dir.path().join(name);
                save_gray_image(&img, &path, depth).unwrap();
                assert_eq!(load_gray_image(&path).unwrap(), img);
            }
        }
    }

    #[test]
    fn full_scale_sixteen_bit_sample() {
        let dir = tmp();
        let path = dir.path().join("one.pgm");
        save_gray_image(&GrayImage::new(1, 1, vec![1.0]).unwrap(), &path, BitDepth::Sixteen).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(&bytes[bytes.len() - 2..], &[0xff, 0xff]);
        assert!(bytes.starts_with(b"P5\n1 1\n65535\n"));
    }

    #[test]
    fn half_at_eight_bits_rounds_up() {
        assert_eq!(quantize(0.5, BitDepth::Eight), 128);
        let dir = tmp();
        let path = dir.path().join("half.pgm");
        save_gray_image(&GrayImage::new(1, 1, vec![0.5]).unwrap(), &path, BitDepth::Eight).unwrap();
        assert_eq!(*std::fs::read(&path).unwrap().last().unwrap(), 128);
    }

    #[test]
    fn mask_round_trip_through_both_formats() {
        let dir = tmp();
        let mask = Grid::from_fn(11, 3, |x, y| (x + y) % 3 == 0);
        for name in ["m.png", "m.pgm"] {
            let path = dir.path().join(name);
            save_mask(&mask, &path, Some(150.0)).unwrap();
            assert_eq!(load_mask(&path).unwrap(), mask);
        }
    }

    #[test]
    fn mask_png_records_dpi() {
        let dir = tmp();
        let path = dir.path().join("dpi.png");
        save_mask(&Grid::filled(4, 4, false), &path, Some(254.0)).unwrap();
        let decoder = png::Decoder::new(Cursor::new(std::fs::read(&path).unwrap()));
        let reader = decoder.read_info().unwrap();
        let dims = reader.info().pixel_dims.unwrap();
        assert_eq!(dims.xppu, 10000);
        assert_eq!(dims.unit, png::Unit::Meter);
    }

    #[test]
    fn indexed_round_trip() {
        let dir = tmp();
        let path = dir.path().join("idx.png");
        let idx = Grid::from_fn(5, 4, |x, y| ((x * y) % 5) as u8);
        save_indexed_png(&idx, &[[0, 0, 0], [1, 1, 1], [2, 2, 2], [3, 3, 3], [4, 4, 4]], &path).unwrap();
        assert_eq!(load_indexed_png(&path).unwrap(), idx);
    }

    #[test]
    fn color_round_trip_at_eight_bits() {
        let dir = tmp();
        let img = ColorImage::from_fn(4, 3, |x, y| [x as f64 / 3.0, y as f64 / 2.0, 0.0]).unwrap();
        for name in ["c.png", "c.ppm"] {
            let path = dir.path().join(name);
            save_color_image(&img, &path).unwrap();
            let back = load_color_image(&path).unwrap();
            for (a, b) in img.iter().flatten().zip(back.iter().flatten()) {
                assert!((a - b).abs() <= 0.5 / 255.0 + 1e-12);
            }
        }
    }

    #[test]
    fn color_image_rejects_out_of_range() {
        assert!(ColorImage::new(1, 1, vec![[1.5, 0.0, 0.0]]).is_err());
        assert!(ColorImage::new(0, 1, vec![]).is_err());
        assert!(GrayImage::new(1, 1, vec![-0.1]).is_err());
    }
}
