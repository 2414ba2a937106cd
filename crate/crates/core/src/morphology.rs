//! Grey-level dilation and erosion by a structuring function.
//!
//! Windows are clipped to the raster: the sup (inf) runs over the probe
//! offsets that land inside the image, and an empty window yields `-inf`
//! (`+inf`). Output maps mark which cells saw the whole probe.

use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::raster::{GreyImage, Regime, ScaleM, ValueMap};

/// A structuring function `b` on a domain `D_b`, with an anchor cell.
///
/// Offsets are `cell - anchor`. Cells outside the mask are not part of `D_b`
/// and their stored value is ignored.
#[derive(Clone, Debug, PartialEq)]
pub struct Probe {
    width: usize,
    height: usize,
    anchor: (usize, usize),
    mask: Vec<bool>,
    values: Vec<f64>,
    m: ScaleM,
}

/// One element of `D_b`: the offset `h` and `b(h)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeCell {
    pub dx: isize,
    pub dy: isize,
    pub value: f64,
}

impl Probe {
    pub fn new(
        width: usize,
        height: usize,
        anchor: (usize, usize),
        mask: Vec<bool>,
        values: Vec<f64>,
        m: ScaleM,
    ) -> Result<Self> {
        let n = width * height;
        if n == 0 || mask.len() != n || values.len() != n {
            return Err(Error::Dimension(format!(
                "{width}x{height} probe needs {n} mask cells and values, got {} and {}",
                mask.len(),
                values.len()
            )));
        }
        if anchor.0 >= width || anchor.1 >= height {
            return Err(Error::InvalidArgument(format!(
                "anchor ({}, {}) outside {width}x{height} probe",
                anchor.0, anchor.1
            )));
        }
        if !mask.iter().any(|&b| b) {
            return Err(Error::InvalidArgument("probe has no masked cell".into()));
        }
        if let Some(i) = (0..n).find(|&i| mask[i] && values[i].is_nan()) {
            return Err(Error::Domain {
                x: i % width,
                y: i / width,
                value: f64::NAN,
                regime: "the extended reals",
            });
        }
        // Unmasked cells carry no value; normalise them so equality ignores them.
        let values = values
            .into_iter()
            .zip(&mask)
            .map(|(v, &inside)| if inside { v } else { 0.0 })
            .collect();
        Ok(Probe {
            width,
            height,
            anchor,
            mask,
            values,
            m,
        })
    }

    /// Every cell masked, values from a raster, anchor given.
    pub fn from_image(image: &GreyImage, anchor: (usize, usize)) -> Result<Self> {
        let n = image.width() * image.height();
        Probe::new(
            image.width(),
            image.height(),
            anchor,
            vec![true; n],
            image.values().to_vec(),
            image.m(),
        )
    }

    /// Full rectangular probe with a constant value, anchored at the centre.
    pub fn flat(width: usize, height: usize, value: f64, m: ScaleM) -> Result<Self> {
        let n = width * height;
        Probe::new(
            width,
            height,
            (width / 2, height / 2),
            vec![true; n],
            vec![value; n],
            m,
        )
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn anchor(&self) -> (usize, usize) {
        self.anchor
    }

    pub fn m(&self) -> ScaleM {
        self.m
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_masked(&self, x: usize, y: usize) -> bool {
        self.mask[y * self.width + x]
    }

    pub fn get(&self, x: usize, y: usize) -> Option<f64> {
        let i = y * self.width + x;
        self.mask[i].then(|| self.values[i])
    }

    /// Elements of `D_b` in row-major order.
    pub fn cells(&self) -> Vec<ProbeCell> {
        let (ax, ay) = (self.anchor.0 as isize, self.anchor.1 as isize);
        (0..self.width * self.height)
            .filter(|&i| self.mask[i])
            .map(|i| ProbeCell {
                dx: (i % self.width) as isize - ax,
                dy: (i / self.width) as isize - ay,
                value: self.values[i],
            })
            .collect()
    }

    pub fn masked_len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    /// Fails with the first masked cell outside `regime`.
    pub fn check(&self, regime: Regime) -> Result<()> {
        match (0..self.values.len())
            .find(|&i| self.mask[i] && !regime.contains(self.values[i], self.m))
        {
            None => Ok(()),
            Some(i) => Err(Error::Domain {
                x: i % self.width,
                y: i / self.width,
                value: self.values[i],
                regime: regime.name(),
            }),
        }
    }

    /// Applies `f` to the value of every masked cell.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<Probe> {
        Probe::new(
            self.width,
            self.height,
            self.anchor,
            self.mask.clone(),
            self.values.iter().map(|&v| f(v)).collect(),
            self.m,
        )
    }

    /// The reflected probe `b(-x)`: mask and values mirrored through the anchor.
    pub fn reflect(&self) -> Probe {
        let (w, h) = (self.width, self.height);
        let mut mask = vec![false; w * h];
        let mut values = vec![0.0; w * h];
        for y in 0..h {
            for x in 0..w {
                let src = y * w + x;
                let dst = (h - 1 - y) * w + (w - 1 - x);
                mask[dst] = self.mask[src];
                values[dst] = self.values[src];
            }
        }
        Probe {
            width: w,
            height: h,
            anchor: (w - 1 - self.anchor.0, h - 1 - self.anchor.1),
            mask,
            values,
            m: self.m,
        }
    }

    /// For a `width x height` image, marks cells `x` such that `x + h` is
    /// inside the image for every `h` in `D_b`.
    pub fn full_overlap_mask(&self, width: usize, height: usize) -> Vec<bool> {
        let cells = self.cells();
        let mut out = Vec::with_capacity(width * height);
        for y in 0..height as isize {
            for x in 0..width as isize {
                out.push(
                    cells
                        .iter()
                        .all(|c| inside(x + c.dx, y + c.dy, width, height)),
                );
            }
        }
        out
    }
}

#[inline]
pub(crate) fn inside(x: isize, y: isize, width: usize, height: usize) -> bool {
    x >= 0 && y >= 0 && (x as usize) < width && (y as usize) < height
}

fn check_scale(f: &GreyImage, b: &Probe) -> Result<()> {
    f.m().check_same(b.m())
}

/// `(f ⊕ b)(x) = sup { f(x - h) + b(h), h in D_b, x - h in the raster }`.
pub fn dilate(f: &GreyImage, b: &Probe) -> Result<ValueMap> {
    check_scale(f, b)?;
    let (w, h) = (f.width(), f.height());
    let cells = b.cells();
    let mut values = Vec::with_capacity(w * h);
    let mut full = Vec::with_capacity(w * h);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let mut acc = ExtReal::NEG_INFINITY;
            let mut all_in = true;
            for c in &cells {
                let (sx, sy) = (x - c.dx, y - c.dy);
                if inside(sx, sy, w, h) {
                    let v = ExtReal::from_f64(f.get(sx as usize, sy as usize))
                        .add_lower(ExtReal::from_f64(c.value));
                    acc = acc.max(v);
                } else {
                    all_in = false;
                }
            }
            values.push(acc);
            full.push(all_in);
        }
    }
    ValueMap::new(w, h, f.m(), values, full)
}

/// `(f ⊖ b)(x) = inf { f(x + h) - b(h), h in D_b, x + h in the raster }`.
pub fn erode(f: &GreyImage, b: &Probe) -> Result<ValueMap> {
    check_scale(f, b)?;
    let (w, h) = (f.width(), f.height());
    let cells = b.cells();
    let mut values = Vec::with_capacity(w * h);
    let mut full = Vec::with_capacity(w * h);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let mut acc = ExtReal::INFINITY;
            let mut all_in = true;
            for c in &cells {
                let (sx, sy) = (x + c.dx, y + c.dy);
                if inside(sx, sy, w, h) {
                    let v = ExtReal::from_f64(f.get(sx as usize, sy as usize))
                        .sub_upper(ExtReal::from_f64(c.value));
                    acc = acc.min(v);
                } else {
                    all_in = false;
                }
            }
            values.push(acc);
            full.push(all_in);
        }
    }
    ValueMap::new(w, h, f.m(), values, full)
}
