//! Binary PGM (P5, maxval 255) and 8-bit PNG reading and writing.

use std::fs;
use std::io::Cursor;
use std::path::Path;

use super::{Image, RangeTag};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const PNG_SIGNATURE: &[u8] = &[0x89, b'P', b'N', b'G', b'\r', b'\n', 0x1a, b'\n'];

/// Loads a byte-scale image, detecting PGM or PNG from the file contents.
pub fn load_image<T: Scalar>(path: impl AsRef<Path>) -> Result<Image<T>> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.starts_with(b"P5") {
        read_pgm(&bytes)
    } else if bytes.starts_with(PNG_SIGNATURE) {
        read_png(&bytes)
    } else {
        Err(Error::Format(format!(
            "{}: neither binary PGM nor PNG",
            path.display()
        )))
    }
}

/// Writes a byte-scale image, choosing the format from the extension
/// (`.pgm` or `.png`). Pixels are clamped to `[0, 255]` and rounded.
pub fn save_image<T: Scalar>(img: &Image<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    let bytes = match ext.as_deref() {
        Some("pgm") => write_pgm(img)?,
        Some("png") => write_png(img)?,
        _ => {
            return Err(Error::Format(format!(
                "{}: expected a .pgm or .png extension",
                path.display()
            )))
        }
    };
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn to_bytes<T: Scalar>(img: &Image<T>) -> Result<Vec<u8>> {
    if img.range() != RangeTag::Byte {
        return Err(Error::Parameter(
            "only byte-scale images can be saved; convert with from_unit_scale".into(),
        ));
    }
    Ok(img
        .quantized()
        .pixels()
        .iter()
        .map(|&v| v.to_u8().expect("quantized into 0..=255"))
        .collect())
}

pub fn write_pgm<T: Scalar>(img: &Image<T>) -> Result<Vec<u8>> {
    let data = to_bytes(img)?;
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(&data);
    Ok(out)
}

pub fn write_png<T: Scalar>(img: &Image<T>) -> Result<Vec<u8>> {
    let data = to_bytes(img)?;
    let (w, h) = (dim_u32(img.width())?, dim_u32(img.height())?);
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, w, h);
        encoder.set_color(png::ColorType::Grayscale);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder
            .write_header()
            .map_err(|e| Error::Format(format!("png encode: {e}")))?;
        writer
            .write_image_data(&data)
            .map_err(|e| Error::Format(format!("png encode: {e}")))?;
    }
    Ok(out)
}

fn dim_u32(n: usize) -> Result<u32> {
    u32::try_from(n).map_err(|_| Error::Size(format!("dimension {n} too large for PNG")))
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Format(format!("pgm header: bad {what}")))
    }
}

pub fn read_pgm<T: Scalar>(bytes: &[u8]) -> Result<Image<T>> {
    if !bytes.starts_with(b"P5") {
        return Err(Error::Format("pgm header: missing P5 magic".into()));
    }
    let mut cur = HeaderCursor { bytes, pos: 2 };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if maxval != 255 {
        return Err(Error::Format(format!(
            "pgm maxval {maxval} unsupported; only 8-bit maxval 255 is read"
        )));
    }
    if width == 0 || height == 0 {
        return Err(Error::Format(format!("pgm dimensions {width}x{height}")));
    }
    // Exactly one whitespace byte separates the header from the raster.
    if !bytes.get(cur.pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(Error::Format("pgm header: missing separator".into()));
    }
    let start = cur.pos + 1;
    let n = width * height;
    let raster = bytes
        .get(start..start + n)
        .ok_or_else(|| Error::Format(format!("pgm raster truncated: want {n} bytes")))?;
    Image::new(
        width,
        height,
        raster.iter().map(|&b| T::of(f64::from(b))).collect(),
        RangeTag::Byte,
    )
}

/// BT.601 luma of an 8-bit RGB triple, rounded to the nearest level.
fn luma(r: u8, g: u8, b: u8) -> f64 {
    (0.299 * f64::from(r) + 0.587 * f64::from(g) + 0.114 * f64::from(b)).round()
}

pub fn read_png<T: Scalar>(bytes: &[u8]) -> Result<Image<T>> {
    let fmt = |e: png::DecodingError| Error::Format(format!("png decode: {e}"));
    let mut decoder = png::Decoder::new(Cursor::new(bytes));
    decoder.set_transformations(png::Transformations::EXPAND);
    let mut reader = decoder.read_info().map_err(fmt)?;
    let (color, depth) = reader.output_color_type();
    if depth != png::BitDepth::Eight {
        return Err(Error::Format(format!(
            "png bit depth {depth:?} unsupported; only 8-bit is read"
        )));
    }
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::Format("png too large".into()))?;
    let mut buf = vec![0u8; size];
    let info = reader.next_frame(&mut buf).map_err(fmt)?;
    let (w, h) = (info.width as usize, info.height as usize);
    let stride = info.line_size;
    let channels = match color {
        png::ColorType::Grayscale => 1,
        png::ColorType::GrayscaleAlpha => 2,
        png::ColorType::Rgb => 3,
        png::ColorType::Rgba => 4,
        png::ColorType::Indexed => {
            return Err(Error::Format("png palette was not expanded".into()))
        }
    };
    let mut pixels = Vec::with_capacity(w * h);
    for y in 0..h {
        let row = &buf[y * stride..y * stride + w * channels];
        for px in row.chunks_exact(channels) {
            let v = if channels >= 3 {
                luma(px[0], px[1], px[2])
            } else {
                f64::from(px[0])
            };
            pixels.push(T::of(v));
        }
    }
    Image::new(w, h, pixels, RangeTag::Byte)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rgb_png(pixels: &[[u8; 3]], w: u32, h: u32) -> Vec<u8> {
        let mut out = Vec::new();
        let mut enc = png::Encoder::new(&mut out, w, h);
        enc.set_color(png::ColorType::Rgb);
        enc.set_depth(png::BitDepth::Eight);
        let mut wr = enc.write_header().unwrap();
        wr.write_image_data(pixels.concat().as_slice()).unwrap();
        wr.finish().unwrap();
        out
    }

    #[test]
    fn pgm_bytes_copied_directly() {
        let mut bytes = b"P5\n2 2\n255\n".to_vec();
        bytes.extend_from_slice(&[0, 255, 128, 64]);
        let img: Image<f64> = read_pgm(&bytes).unwrap();
        assert_eq!((img.width(), img.height()), (2, 2));
        assert_eq!(img.pixels(), &[0.0, 255.0, 128.0, 64.0]);
        assert_eq!(img.range(), RangeTag::Byte);
    }

    #[test]
    fn pgm_header_comments_skipped() {
        let mut bytes = b"P5 # made by hand\n1 # width done\n 1\n255\n".to_vec();
        bytes.push(9);
        let img: Image<f32> = read_pgm(&bytes).unwrap();
        assert_eq!(img.pixels(), &[9.0]);
    }

    #[test]
    fn pgm_malformed_headers() {
        assert!(matches!(
            read_pgm::<f64>(b"P2\n1 1\n255\n0"),
            Err(Error::Format(_))
        ));
        assert!(matches!(
            read_pgm::<f64>(b"P5\nx 1\n255\n0"),
            Err(Error::Format(_))
        ));
        assert!(matches!(
            read_pgm::<f64>(b"P5\n2 2\n255\n\x01"),
            Err(Error::Format(_))
        ));
        assert!(matches!(
            read_pgm::<f64>(b"P5\n0 2\n255\n"),
            Err(Error::Format(_))
        ));
    }

    #[test]
    fn pgm_sixteen_bit_rejected() {
        assert!(matches!(
            read_pgm::<f64>(b"P5\n1 1\n65535\n\x00\x01"),
            Err(Error::Format(_))
        ));
    }

    #[test]
    fn png_rgb_converted_with_bt601() {
        let bytes = rgb_png(
            &[[255, 255, 255], [255, 0, 0], [0, 255, 0], [0, 0, 255]],
            4,
            1,
        );
        let img: Image<f64> = read_png(&bytes).unwrap();
        // 0.587 * 255 = 149.685, 0.114 * 255 = 29.07
        assert_eq!(img.pixels(), &[255.0, 76.0, 150.0, 29.0]);
    }

    #[test]
    fn png_sixteen_bit_rejected() {
        let mut out = Vec::new();
        let mut enc = png::Encoder::new(&mut out, 1, 1);
        enc.set_color(png::ColorType::Grayscale);
        enc.set_depth(png::BitDepth::Sixteen);
        let mut wr = enc.write_header().unwrap();
        wr.write_image_data(&[1, 2]).unwrap();
        wr.finish().unwrap();
        assert!(matches!(read_png::<f64>(&out), Err(Error::Format(_))));
    }

    #[test]
    fn save_refuses_unit_scale() {
        let dir = tempfile::tempdir().unwrap();
        let img = Image::new(1, 1, vec![0.5], RangeTag::Unit).unwrap();
        assert!(matches!(
            save_image(&img, dir.path().join("x.pgm")),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn save_then_load_single_pixel() {
        let dir = tempfile::tempdir().unwrap();
        let img = Image::new(1, 1, vec![42.0], RangeTag::Byte).unwrap();
        for name in ["a.pgm", "a.png"] {
            let path = dir.path().join(name);
            save_image(&img, &path).unwrap();
            assert_eq!(load_image::<f64>(&path).unwrap(), img);
        }
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            load_image::<f64>("/definitely/not/here.pgm"),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn unknown_extension_rejected() {
        let img = Image::new(1, 1, vec![1.0], RangeTag::Byte).unwrap();
        assert!(matches!(
            save_image(&img, "/tmp/x.bmp"),
            Err(Error::Format(_))
        ));
    }
}
