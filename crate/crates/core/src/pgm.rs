//! Netpbm graymap (PGM) reading, plain `P2` and raw `P5`.

use crate::error::{QamError, Result};
use crate::hilbert::{normalize, StateVector, UnitState};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub maxval: u32,
    /// Row-major samples, each in `0..=maxval`.
    pub pixels: Vec<u32>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, maxval: u32, pixels: Vec<u32>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(QamError::Format(format!("image size {width}x{height} is empty")));
        }
        if maxval == 0 || maxval > 65535 {
            return Err(QamError::Format(format!("maxval {maxval} outside 1..=65535")));
        }
        if pixels.len() != width * height {
            return Err(QamError::Format(format!(
                "expected {} pixels, found {}",
                width * height,
                pixels.len()
            )));
        }
        if let Some(index) = pixels.iter().position(|&p| p > maxval) {
            return Err(QamError::Range { index, value: pixels[index], maxval });
        }
        Ok(Self { width, height, maxval, pixels })
    }

    /// Plain (`P2`) encoding, one image row per line.
    pub fn to_plain_pgm(&self) -> String {
        let mut out = format!("P2\n{} {}\n{}\n", self.width, self.height, self.maxval);
        for row in self.pixels.chunks(self.width) {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    /// Skips whitespace and `#` comments running to end of line.
    fn skip_separators(&mut self) {
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

    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_separators();
        let start = self.pos;
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() || b == b'#' {
                break;
            }
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn number(&mut self, what: &str) -> Result<u32> {
        let tok = self
            .token()
            .ok_or_else(|| QamError::Format(format!("truncated input: missing {what}")))?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse::<u32>().ok())
            .ok_or_else(|| {
                QamError::Format(format!("{what}: {:?} is not a non-negative integer", String::from_utf8_lossy(tok)))
            })
    }
}

/// Parses a `P2` or `P5` graymap.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let mut cur = Cursor { bytes, pos: 0 };
    let magic = cur.token().ok_or_else(|| QamError::Format("empty input".into()))?;
    let raw = match magic {
        b"P2" => false,
        b"P5" => true,
        other => {
            return Err(QamError::Format(format!(
                "bad magic {:?}, expected P2 or P5",
                String::from_utf8_lossy(other)
            )))
        }
    };
    let width = cur.number("width")? as usize;
    let height = cur.number("height")? as usize;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(QamError::Format(format!("image size {width}x{height} is empty")));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(QamError::Format(format!("maxval {maxval} outside 1..=65535")));
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| QamError::Format("image dimensions overflow".into()))?;

    let pixels = if raw {
        // exactly one whitespace byte separates the header from the raster
        match bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => return Err(QamError::Format("missing separator before raster".into())),
        }
        let sample_bytes = if maxval < 256 { 1 } else { 2 };
        let raster = &bytes[cur.pos..];
        let needed = count * sample_bytes;
        if raster.len() < needed {
            return Err(QamError::Format(format!(
                "truncated raster: expected {needed} bytes, found {}",
                raster.len()
            )));
        }
        if sample_bytes == 1 {
            raster[..needed].iter().map(|&b| u32::from(b)).collect()
        } else {
            raster[..needed]
                .chunks_exact(2)
                .map(|p| u32::from(u16::from_be_bytes([p[0], p[1]])))
                .collect()
        }
    } else {
        let mut px = Vec::with_capacity(count);
        for i in 0..count {
            px.push(cur.number(&format!("pixel {i}"))?);
        }
        px
    };
    GrayImage::new(width, height, maxval, pixels)
}

/// Row-major flatten with amplitude `pixel / maxval`, normalized to a real unit ray.
pub fn image_to_state(img: &GrayImage) -> Result<UnitState> {
    let scale = f64::from(img.maxval);
    let values: Vec<f64> = img.pixels.iter().map(|&p| f64::from(p) / scale).collect();
    normalize(&StateVector::from_real(&values)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::ray_equal;

    #[test]
    fn plain_checkerboard() {
        let img = read_pgm(b"P2\n2 2\n1\n1 0\n0 1\n").unwrap();
        assert_eq!((img.width, img.height, img.maxval), (2, 2, 1));
        assert_eq!(img.pixels, vec![1, 0, 0, 1]);
    }

    #[test]
    fn comments_between_tokens() {
        let img = read_pgm(b"P2 # magic\n# full line\n3 # width\n1\n# max\n9\n1 2 3").unwrap();
        assert_eq!(img.pixels, vec![1, 2, 3]);
    }

    #[test]
    fn raw_eight_bit() {
        let mut data = b"P5\n2 2\n255\n".to_vec();
        data.extend_from_slice(&[0, 128, 255, 7]);
        assert_eq!(read_pgm(&data).unwrap().pixels, vec![0, 128, 255, 7]);
    }

    #[test]
    fn raw_sixteen_bit_big_endian() {
        let mut data = b"P5 2 1 65535\n".to_vec();
        data.extend_from_slice(&[0x01, 0x02, 0xff, 0xff]);
        assert_eq!(read_pgm(&data).unwrap().pixels, vec![0x0102, 0xffff]);
    }

    #[test]
    fn raw_truncated() {
        let mut data = b"P5\n2 2\n255\n".to_vec();
        data.extend_from_slice(&[1, 2, 3]);
        assert!(matches!(read_pgm(&data), Err(QamError::Format(_))));
    }

    #[test]
    fn plain_truncated() {
        assert!(matches!(read_pgm(b"P2\n2 2\n1\n1 0 0"), Err(QamError::Format(_))));
        assert!(matches!(read_pgm(b"P2\n2"), Err(QamError::Format(_))));
    }

    #[test]
    fn bad_magic_and_header() {
        assert!(matches!(read_pgm(b"P6\n1 1\n255\n\0\0\0"), Err(QamError::Format(_))));
        assert!(matches!(read_pgm(b""), Err(QamError::Format(_))));
        assert!(matches!(read_pgm(b"P2\n0 1\n1\n"), Err(QamError::Format(_))));
        assert!(matches!(read_pgm(b"P2\n1 1\n70000\n1"), Err(QamError::Format(_))));
        assert!(matches!(read_pgm(b"P2\n1 1\n255\nx"), Err(QamError::Format(_))));
    }

    #[test]
    fn pixel_above_maxval() {
        assert_eq!(
            read_pgm(b"P2\n2 1\n255\n10 300\n").unwrap_err(),
            QamError::Range { index: 1, value: 300, maxval: 255 }
        );
        let mut data = b"P5 1 1 100\n".to_vec();
        data.push(200);
        assert!(matches!(read_pgm(&data), Err(QamError::Range { .. })));
    }

    #[test]
    fn state_examples() {
        let img = GrayImage::new(2, 1, 1, vec![1, 0]).unwrap();
        assert_eq!(image_to_state(&img).unwrap().as_vector(), &StateVector::from_real(&[1.0, 0.0]).unwrap());
        let img = GrayImage::new(2, 1, 255, vec![3, 4]).unwrap();
        let s = image_to_state(&img).unwrap();
        assert!((s.amplitudes()[0].re - 0.6).abs() < 1e-15);
        assert!((s.amplitudes()[1].re - 0.8).abs() < 1e-15);
        let black = GrayImage::new(2, 2, 255, vec![0; 4]).unwrap();
        assert!(matches!(image_to_state(&black), Err(QamError::ZeroVector { .. })));
    }

    #[test]
    fn scaled_image_gives_same_ray() {
        let a = GrayImage::new(3, 1, 15, vec![1, 5, 15]).unwrap();
        let b = GrayImage::new(3, 1, 60, vec![4, 20, 60]).unwrap();
        let c = GrayImage::new(3, 1, 255, vec![4, 20, 60]).unwrap();
        let (sa, sb, sc) = (image_to_state(&a).unwrap(), image_to_state(&b).unwrap(), image_to_state(&c).unwrap());
        assert!(ray_equal(&sa, &sb, 1e-12).unwrap());
        assert!(ray_equal(&sa, &sc, 1e-12).unwrap());
    }

    #[test]
    fn plain_writer_round_trips() {
        let img = GrayImage::new(3, 2, 9, vec![0, 1, 2, 3, 4, 9]).unwrap();
        assert_eq!(read_pgm(img.to_plain_pgm().as_bytes()).unwrap(), img);
    }
}
