//! Binary PPM (P6) rasters — the only raster format scenes may reference.

use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    /// Row-major RGB triples.
    pixels: Vec<u8>,
}

impl Raster {
    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    pub fn solid(width: usize, height: usize, rgb: [u8; 3]) -> Raster {
        Raster {
            width,
            height,
            pixels: rgb.repeat(width * height),
        }
    }

    pub fn set_pixel(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        let i = (y * self.width + x) * 3;
        self.pixels[i..i + 3].copy_from_slice(&rgb);
    }

    /// Encode as binary PPM.
    pub fn to_ppm_bytes(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    /// Parse a binary PPM: `P6`, whitespace-separated width/height/maxval
    /// with `#` comments allowed in the header, maxval 255, then raw RGB.
    pub fn from_ppm_bytes(bytes: &[u8]) -> Result<Raster> {
        let mut cursor = 0usize;
        if bytes.len() < 2 || &bytes[0..2] != b"P6" {
            return Err(Error::Scene("raster is not a P6 PPM".into()));
        }
        cursor += 2;

        let mut fields = [0usize; 3];
        for field in &mut fields {
            skip_whitespace_and_comments(bytes, &mut cursor)?;
            let start = cursor;
            while cursor < bytes.len() && bytes[cursor].is_ascii_digit() {
                cursor += 1;
            }
            if start == cursor {
                return Err(Error::Scene("malformed PPM header".into()));
            }
            let text = std::str::from_utf8(&bytes[start..cursor]).unwrap();
            *field = text
                .parse()
                .map_err(|_| Error::Scene("malformed PPM header".into()))?;
        }
        let [width, height, maxval] = fields;
        if maxval != 255 {
            return Err(Error::Scene(format!(
                "unsupported PPM maxval {maxval} (only 255)"
            )));
        }
        // Exactly one whitespace byte separates the header from pixel data.
        if cursor >= bytes.len() || !bytes[cursor].is_ascii_whitespace() {
            return Err(Error::Scene("malformed PPM header".into()));
        }
        cursor += 1;

        let need = width
            .checked_mul(height)
            .and_then(|n| n.checked_mul(3))
            .ok_or_else(|| Error::Scene("PPM dimensions overflow".into()))?;
        let data = &bytes[cursor..];
        if data.len() < need {
            return Err(Error::Scene(format!(
                "PPM pixel data truncated: need {need} bytes, have {}",
                data.len()
            )));
        }
        Ok(Raster {
            width,
            height,
            pixels: data[..need].to_vec(),
        })
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Raster> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Raster::from_ppm_bytes(&bytes).map_err(|e| match e {
            Error::Scene(msg) => Error::Scene(format!("{}: {msg}", path.display())),
            other => other,
        })
    }
}

fn skip_whitespace_and_comments(bytes: &[u8], cursor: &mut usize) -> Result<()> {
    loop {
        while *cursor < bytes.len() && bytes[*cursor].is_ascii_whitespace() {
            *cursor += 1;
        }
        if *cursor < bytes.len() && bytes[*cursor] == b'#' {
            while *cursor < bytes.len() && bytes[*cursor] != b'\n' {
                *cursor += 1;
            }
        } else {
            return Ok(());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut r = Raster::solid(3, 2, [1, 2, 3]);
        r.set_pixel(2, 1, [250, 251, 252]);
        let parsed = Raster::from_ppm_bytes(&r.to_ppm_bytes()).unwrap();
        assert_eq!(parsed.width, 3);
        assert_eq!(parsed.height, 2);
        assert_eq!(parsed.pixel(0, 0), [1, 2, 3]);
        assert_eq!(parsed.pixel(2, 1), [250, 251, 252]);
    }

    #[test]
    fn header_comments_are_skipped() {
        let mut bytes = b"P6\n# made by hand\n2 1\n# another\n255\n".to_vec();
        bytes.extend_from_slice(&[10, 20, 30, 40, 50, 60]);
        let r = Raster::from_ppm_bytes(&bytes).unwrap();
        assert_eq!(r.pixel(1, 0), [40, 50, 60]);
    }

    #[test]
    fn rejects_wrong_magic() {
        assert!(Raster::from_ppm_bytes(b"P3\n1 1\n255\n").is_err());
    }

    #[test]
    fn rejects_wrong_maxval() {
        let bytes = b"P6\n1 1\n65535\n\0\0\0\0\0\0";
        assert!(Raster::from_ppm_bytes(bytes).is_err());
    }

    #[test]
    fn rejects_truncated_pixels() {
        let bytes = b"P6\n2 2\n255\n\0\0\0";
        let err = Raster::from_ppm_bytes(bytes).unwrap_err();
        assert!(err.to_string().contains("truncated"));
    }
}
