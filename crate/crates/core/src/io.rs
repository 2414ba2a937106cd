//! File formats.
//!
//! * PGM, ASCII (`P2`) and binary (`P5`), 8-bit only. Pixel `v` reads as grey
//!   value `v` with `M = 256`.
//! * `fmap`: text rasters of extended reals.
//!
//!   ```text
//!   fmap <width> <height> <m>
//!   <row 0: width values separated by single spaces>
//!   ...
//!   ```
//!
//!   Values use 17 significant digits in the shortest `%.17g` layout, with
//!   `inf` and `-inf` for infinities, so finite doubles round-trip exactly.
//! * `probe`: a header `probe <width> <height> <anchor_x> <anchor_y> <m>`
//!   followed by `height` rows of `width` tokens, each a decimal value or
//!   `_` for a cell outside the probe domain.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::morphology::Probe;
use crate::raster::{GreyImage, Regime, ScaleM, ValueMap};

/// Output layout for [`write_map`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MapFormat {
    /// Lossless `fmap` text.
    #[default]
    Exact,
    /// `P2` raster min-max normalised to `0..=255` over finite cells. For viewing only.
    Pgm8,
}

/// PGM encodings accepted by [`write_pgm`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PgmEncoding {
    Ascii,
    Binary,
}

/// Formats like C's `%.17g`.
pub fn format_g17(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    const PRECISION: i32 = 17;
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..PRECISION).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (PRECISION - 1 - exp) as usize;
        strip_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Byte-offset tokenizer over whitespace-separated text, skipping `#` comments.
struct Tokens<'a> {
    data: &'a [u8],
    pos: usize,
    comments: bool,
}

impl<'a> Tokens<'a> {
    fn new(data: &'a [u8], comments: bool) -> Self {
        Tokens {
            data,
            pos: 0,
            comments,
        }
    }

    fn skip_space(&mut self) {
        while self.pos < self.data.len() {
            let c = self.data[self.pos];
            if c.is_ascii_whitespace() {
                self.pos += 1;
            } else if self.comments && c == b'#' {
                while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    /// Next token and its starting offset.
    fn next_token(&mut self) -> Option<(usize, &'a str)> {
        self.skip_space();
        let start = self.pos;
        while self.pos < self.data.len() && !self.data[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            None
        } else {
            std::str::from_utf8(&self.data[start..self.pos])
                .ok()
                .map(|s| (start, s))
        }
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let at = self.pos;
        self.next_token()
            .ok_or_else(|| Error::parse(at, format!("expected {what}, found end of data")))
    }

    fn number<T: std::str::FromStr>(&mut self, what: &str) -> Result<T> {
        let (at, tok) = self.expect(what)?;
        tok.parse()
            .map_err(|_| Error::parse(at, format!("expected {what}, found {tok:?}")))
    }
}

/// Parses a `P2` or `P5` image with `maxval <= 255`.
pub fn parse_pgm(data: &[u8]) -> Result<GreyImage> {
    let mut t = Tokens::new(data, true);
    let (_, magic) = t.expect("PGM magic number")?;
    let binary = match magic {
        "P2" => false,
        "P5" => true,
        other => {
            return Err(Error::parse(
                0,
                format!("unsupported magic {other:?}, expected P2 or P5"),
            ))
        }
    };
    let width: usize = t.number("width")?;
    let height: usize = t.number("height")?;
    t.skip_space();
    let maxval_at = t.pos;
    let maxval: u32 = t.number("maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(Error::parse(
            maxval_at,
            format!("maxval {maxval} unsupported, only 8-bit (1..=255) images are read"),
        ));
    }
    if width == 0 || height == 0 {
        return Err(Error::parse(0, format!("empty image {width}x{height}")));
    }
    let n = width * height;
    let mut values = Vec::with_capacity(n);
    if binary {
        // exactly one whitespace byte separates maxval from the raster
        let start = t.pos + 1;
        let end = start + n;
        if end > data.len() {
            return Err(Error::parse(
                data.len(),
                format!("truncated P5 data: need {n} bytes from offset {start}"),
            ));
        }
        values.extend(data[start..end].iter().map(|&b| b as f64));
    } else {
        for _ in 0..n {
            t.skip_space();
            let at = t.pos;
            let v: u32 = t.number("pixel value").map_err(|e| match e {
                Error::Parse { offset, message } if offset >= data.len() => Error::Parse {
                    offset,
                    message: format!("truncated P2 data: {message}"),
                },
                e => e,
            })?;
            if v > maxval {
                return Err(Error::parse(
                    at,
                    format!("pixel {v} exceeds maxval {maxval}"),
                ));
            }
            values.push(v as f64);
        }
    }
    GreyImage::new(width, height, ScaleM::EIGHT_BIT, values)
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<GreyImage> {
    parse_pgm(&std::fs::read(path)?)
}

/// Encodes an image as 8-bit PGM; values are rounded and clamped to `0..=255`.
pub fn encode_pgm(image: &GreyImage, encoding: PgmEncoding) -> Vec<u8> {
    let px = |v: f64| -> u8 {
        if v.is_nan() {
            0
        } else {
            v.round().clamp(0.0, 255.0) as u8
        }
    };
    let (w, h) = (image.width(), image.height());
    match encoding {
        PgmEncoding::Binary => {
            let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
            out.extend(image.values().iter().map(|&v| px(v)));
            out
        }
        PgmEncoding::Ascii => {
            let mut s = format!("P2\n{w} {h}\n255\n");
            for row in image.values().chunks(w) {
                let line: Vec<String> = row.iter().map(|&v| px(v).to_string()).collect();
                s.push_str(&line.join(" "));
                s.push('\n');
            }
            s.into_bytes()
        }
    }
}

pub fn write_pgm(image: &GreyImage, path: impl AsRef<Path>, encoding: PgmEncoding) -> Result<()> {
    std::fs::write(path, encode_pgm(image, encoding))?;
    Ok(())
}

fn format_rows(width: usize, values: impl Iterator<Item = f64>, out: &mut String) {
    let values: Vec<f64> = values.collect();
    for row in values.chunks(width) {
        let line: Vec<String> = row.iter().map(|&v| format_g17(v)).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
}

/// `fmap` text of a map.
pub fn format_map(map: &ValueMap) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "fmap {} {} {}",
        map.width(),
        map.height(),
        format_g17(map.m().value())
    );
    format_rows(map.width(), map.values().iter().map(|v| v.value()), &mut s);
    s
}

/// `fmap` text of a raster.
pub fn format_raster(image: &GreyImage) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "fmap {} {} {}",
        image.width(),
        image.height(),
        format_g17(image.m().value())
    );
    format_rows(image.width(), image.values().iter().copied(), &mut s);
    s
}

/// P2 bytes min-max normalised over finite cells; infinite cells become 255.
pub fn encode_map_pgm8(map: &ValueMap) -> Vec<u8> {
    let finite = map
        .values()
        .iter()
        .map(|v| v.value())
        .filter(|v| v.is_finite());
    let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    let span = hi - lo;
    let scaled: Vec<f64> = map
        .values()
        .iter()
        .map(|v| {
            let v = v.value();
            if !v.is_finite() {
                255.0
            } else if span > 0.0 {
                255.0 * (v - lo) / span
            } else {
                0.0
            }
        })
        .collect();
    let img = GreyImage::new(map.width(), map.height(), map.m(), scaled)
        .expect("shape taken from a valid map");
    encode_pgm(&img, PgmEncoding::Ascii)
}

pub fn write_map(map: &ValueMap, path: impl AsRef<Path>, format: MapFormat) -> Result<()> {
    match format {
        MapFormat::Exact => std::fs::write(path, format_map(map))?,
        MapFormat::Pgm8 => std::fs::write(path, encode_map_pgm8(map))?,
    }
    Ok(())
}

pub fn write_raster(image: &GreyImage, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_raster(image))?;
    Ok(())
}

fn parse_value(at: usize, tok: &str) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| Error::parse(at, format!("expected a decimal value, found {tok:?}")))?;
    if v.is_nan() {
        return Err(Error::parse(at, "NaN is not an extended real"));
    }
    Ok(v)
}

fn parse_fmap_body(text: &str) -> Result<(usize, usize, ScaleM, Vec<f64>)> {
    let mut t = Tokens::new(text.as_bytes(), false);
    let (at, magic) = t.expect("fmap header")?;
    if magic != "fmap" {
        return Err(Error::parse(
            at,
            format!("expected \"fmap\", found {magic:?}"),
        ));
    }
    let width: usize = t.number("width")?;
    let height: usize = t.number("height")?;
    let m_at = t.pos;
    let m: f64 = t.number("scale m")?;
    let m = ScaleM::new(m).map_err(|e| Error::parse(m_at, e.to_string()))?;
    if width == 0 || height == 0 {
        return Err(Error::parse(0, format!("empty map {width}x{height}")));
    }
    let n = width * height;
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        let (at, tok) = t.expect("map value")?;
        values.push(parse_value(at, tok)?);
    }
    if let Some((at, tok)) = t.next_token() {
        return Err(Error::parse(
            at,
            format!("unexpected trailing token {tok:?}"),
        ));
    }
    Ok((width, height, m, values))
}

/// Parses `fmap` text. The full-overlap mask is not stored in the format,
/// so every cell of the result is marked full-overlap.
pub fn parse_map(text: &str) -> Result<ValueMap> {
    let (w, h, m, values) = parse_fmap_body(text)?;
    let values = values
        .into_iter()
        .map(|v| ExtReal::new(v).expect("NaN rejected"))
        .collect();
    ValueMap::without_mask(w, h, m, values)
}

pub fn read_map(path: impl AsRef<Path>) -> Result<ValueMap> {
    parse_map(&std::fs::read_to_string(path)?)
}

/// Parses `fmap` text as a raster of grey values.
pub fn parse_raster(text: &str) -> Result<GreyImage> {
    let (w, h, m, values) = parse_fmap_body(text)?;
    GreyImage::new(w, h, m, values)
}

/// Reads a PGM or `fmap` raster, chosen by its leading magic.
pub fn read_image(path: impl AsRef<Path>) -> Result<GreyImage> {
    let data = std::fs::read(path)?;
    let start = data
        .iter()
        .position(|c| !c.is_ascii_whitespace())
        .unwrap_or(0);
    if data[start..].starts_with(b"fmap") {
        let text = std::str::from_utf8(&data)
            .map_err(|e| Error::parse(e.valid_up_to(), "invalid UTF-8"))?;
        parse_raster(text)
    } else {
        parse_pgm(&data)
    }
}

/// Parses `probe` text. With `strict`, values must lie in `]0, M[`.
pub fn parse_probe(text: &str, strict: bool) -> Result<Probe> {
    let mut t = Tokens::new(text.as_bytes(), false);
    let (at, magic) = t.expect("probe header")?;
    if magic != "probe" {
        return Err(Error::parse(
            at,
            format!("expected \"probe\", found {magic:?}"),
        ));
    }
    let width: usize = t.number("width")?;
    let height: usize = t.number("height")?;
    let anchor_at = t.pos;
    let ax: usize = t.number("anchor x")?;
    let ay: usize = t.number("anchor y")?;
    let m_at = t.pos;
    let m: f64 = t.number("scale m")?;
    let m = ScaleM::new(m).map_err(|e| Error::parse(m_at, e.to_string()))?;
    if width == 0 || height == 0 {
        return Err(Error::parse(0, format!("empty probe {width}x{height}")));
    }
    if ax >= width || ay >= height {
        return Err(Error::parse(
            anchor_at,
            format!("anchor ({ax}, {ay}) outside {width}x{height} probe"),
        ));
    }
    let n = width * height;
    let mut mask = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    let mut first_cell = None;
    for _ in 0..n {
        let (at, tok) = t.expect("probe cell")?;
        first_cell.get_or_insert(at);
        if tok == "_" {
            mask.push(false);
            values.push(0.0);
        } else {
            let v = parse_value(at, tok)?;
            if strict && !Regime::Strict.contains(v, m) {
                return Err(Error::parse(
                    at,
                    format!("probe value {v} outside ]0, {}[ in strict mode", m.value()),
                ));
            }
            mask.push(true);
            values.push(v);
        }
    }
    if let Some((at, tok)) = t.next_token() {
        return Err(Error::parse(
            at,
            format!("unexpected trailing token {tok:?}"),
        ));
    }
    if !mask.iter().any(|&b| b) {
        return Err(Error::parse(
            first_cell.unwrap_or(0),
            "probe grid has no value cell (all `_`)",
        ));
    }
    Probe::new(width, height, (ax, ay), mask, values, m)
}

pub fn read_probe(path: impl AsRef<Path>, strict: bool) -> Result<Probe> {
    parse_probe(&std::fs::read_to_string(path)?, strict)
}

pub fn format_probe(probe: &Probe) -> String {
    let mut s = String::new();
    let (ax, ay) = probe.anchor();
    let _ = writeln!(
        s,
        "probe {} {} {ax} {ay} {}",
        probe.width(),
        probe.height(),
        format_g17(probe.m().value())
    );
    for y in 0..probe.height() {
        let row: Vec<String> = (0..probe.width())
            .map(|x| probe.get(x, y).map_or_else(|| "_".to_string(), format_g17))
            .collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

pub fn write_probe(probe: &Probe, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_probe(probe))?;
    Ok(())
}
