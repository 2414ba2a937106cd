use crate::error::{Error, Result};
use crate::ext_real::ExtReal;

/// The grey-scale upper bound `M`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaleM(f64);

impl ScaleM {
    /// `M = 2^8`, the scale of 8-bit images.
    pub const EIGHT_BIT: ScaleM = ScaleM(256.0);

    pub fn new(m: f64) -> Result<Self> {
        if m.is_finite() && m > 0.0 {
            Ok(ScaleM(m))
        } else {
            Err(Error::InvalidArgument(format!(
                "scale M must be a positive finite real, got {m}"
            )))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    pub(crate) fn check_same(self, other: ScaleM) -> Result<()> {
        if self.0 == other.0 {
            Ok(())
        } else {
            Err(Error::ScaleMismatch {
                left: self.0,
                right: other.0,
            })
        }
    }
}

impl Default for ScaleM {
    fn default() -> Self {
        ScaleM::EIGHT_BIT
    }
}

/// Value regimes a raster may be required to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `[0, M]`, images with the value `M` included.
    Closed,
    /// `[0, M[`, ordinary grey-level images.
    Image,
    /// `]0, M[`, images with strictly positive values.
    Strict,
    /// `]-inf, M[`, functions bounded above by `M`.
    BelowM,
    /// `[-inf, M]`, the closure of the previous set.
    BelowMClosed,
}

impl Regime {
    pub fn contains(self, v: f64, m: ScaleM) -> bool {
        let m = m.value();
        match self {
            Regime::Closed => (0.0..=m).contains(&v),
            Regime::Image => (0.0..m).contains(&v),
            Regime::Strict => v > 0.0 && v < m,
            Regime::BelowM => v > f64::NEG_INFINITY && v < m,
            Regime::BelowMClosed => v <= m,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::Closed => "[0, M]",
            Regime::Image => "[0, M[",
            Regime::Strict => "]0, M[",
            Regime::BelowM => "]-inf, M[",
            Regime::BelowMClosed => "[-inf, M]",
        }
    }
}

/// A rectangular raster of real grey values with its scale `M`.
///
/// The same type carries images of `[0, M]` and functions of `]-inf, M]`
/// (and the unbounded outputs of `xi`); the value regime is asserted with
/// [`GreyImage::check`] at the entry points that need one. NaN is never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct GreyImage {
    width: usize,
    height: usize,
    m: ScaleM,
    values: Vec<f64>,
}

impl GreyImage {
    /// Builds a raster from row-major values.
    pub fn new(width: usize, height: usize, m: ScaleM, values: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimension(format!(
                "raster must be at least 1x1, got {width}x{height}"
            )));
        }
        if values.len() != width * height {
            return Err(Error::Dimension(format!(
                "{width}x{height} raster needs {} values, got {}",
                width * height,
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| v.is_nan()) {
            return Err(Error::Domain {
                x: i % width,
                y: i / width,
                value: f64::NAN,
                regime: "the extended reals",
            });
        }
        Ok(GreyImage {
            width,
            height,
            m,
            values,
        })
    }

    pub fn filled(width: usize, height: usize, m: ScaleM, value: f64) -> Result<Self> {
        Self::new(width, height, m, vec![value; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        m: ScaleM,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                values.push(f(x, y));
            }
        }
        Self::new(width, height, m, values)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn m(&self) -> ScaleM {
        self.m
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        assert!(!v.is_nan(), "GreyImage cannot hold NaN");
        self.values[y * self.width + x] = v;
    }

    /// Fails with the first offending cell if any value is outside `regime`.
    pub fn check(&self, regime: Regime) -> Result<()> {
        match self
            .values
            .iter()
            .position(|&v| !regime.contains(v, self.m))
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

    pub(crate) fn check_same_shape(&self, other: &GreyImage) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.width, self.height, other.width, other.height
            )));
        }
        self.m.check_same(other.m)
    }

    /// Applies `f` to every cell. Fails if `f` produces NaN.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<GreyImage> {
        GreyImage::new(
            self.width,
            self.height,
            self.m,
            self.values.iter().map(|&v| f(v)).collect(),
        )
    }

    pub fn zip_map(&self, other: &GreyImage, f: impl Fn(f64, f64) -> f64) -> Result<GreyImage> {
        self.check_same_shape(other)?;
        GreyImage::new(
            self.width,
            self.height,
            self.m,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    /// Pointwise supremum.
    pub fn sup(&self, other: &GreyImage) -> Result<GreyImage> {
        self.zip_map(other, f64::max)
    }

    /// Pointwise infimum.
    pub fn inf(&self, other: &GreyImage) -> Result<GreyImage> {
        self.zip_map(other, f64::min)
    }

    /// Moves values into `[eps, M - eps]` so 8-bit inputs containing `0`
    /// satisfy the strict regime `]0, M[`.
    pub fn clamp_to_open(&self, eps: f64) -> Result<GreyImage> {
        let m = self.m.value();
        if !(eps > 0.0 && 2.0 * eps < m) {
            return Err(Error::InvalidArgument(format!(
                "clamp epsilon must lie in ]0, M/2[, got {eps}"
            )));
        }
        self.map(|v| v.clamp(eps, m - eps))
    }

    pub(crate) fn index_to_xy(&self, i: usize) -> (usize, usize) {
        (i % self.width, i / self.width)
    }
}

/// A rectangular raster of extended reals produced by a map operation.
///
/// `full_overlap` marks the cells whose probe window lies entirely inside the
/// image. Values at the other cells are computed over the clipped window.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueMap {
    width: usize,
    height: usize,
    m: ScaleM,
    values: Vec<ExtReal>,
    full_overlap: Vec<bool>,
}

/// Codomain of the multiplicative maps: `[0, +inf]`.
pub type RealMap = ValueMap;
/// Codomain of the additive maps: `[-inf, M]`.
pub type FmMap = ValueMap;

impl ValueMap {
    pub fn new(
        width: usize,
        height: usize,
        m: ScaleM,
        values: Vec<ExtReal>,
        full_overlap: Vec<bool>,
    ) -> Result<Self> {
        let n = width * height;
        if n == 0 || values.len() != n || full_overlap.len() != n {
            return Err(Error::Dimension(format!(
                "{width}x{height} map needs {n} values and {n} mask cells, got {} and {}",
                values.len(),
                full_overlap.len()
            )));
        }
        Ok(ValueMap {
            width,
            height,
            m,
            values,
            full_overlap,
        })
    }

    /// A map whose every cell is considered full-overlap.
    pub fn without_mask(
        width: usize,
        height: usize,
        m: ScaleM,
        values: Vec<ExtReal>,
    ) -> Result<Self> {
        Self::new(width, height, m, values, vec![true; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn m(&self) -> ScaleM {
        self.m
    }

    pub fn values(&self) -> &[ExtReal] {
        &self.values
    }

    pub fn full_overlap(&self) -> &[bool] {
        &self.full_overlap
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> ExtReal {
        self.values[y * self.width + x]
    }

    pub fn is_full_overlap(&self, x: usize, y: usize) -> bool {
        self.full_overlap[y * self.width + x]
    }

    /// Replaces the full-overlap mask.
    pub fn with_full_overlap(mut self, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != self.values.len() {
            return Err(Error::Dimension(format!(
                "mask has {} cells, map has {}",
                mask.len(),
                self.values.len()
            )));
        }
        self.full_overlap = mask;
        Ok(self)
    }

    /// Largest absolute difference over cells, `0` where both sides are the same infinity.
    pub fn max_abs_diff(&self, other: &ValueMap) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| ext_abs_diff(*a, *b))
            .fold(0.0, f64::max))
    }

    pub(crate) fn check_same_shape(&self, other: &ValueMap) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.width, self.height, other.width, other.height
            )));
        }
        Ok(())
    }

    /// Applies `f` to every cell, keeping the mask.
    pub fn map_values(&self, f: impl Fn(ExtReal) -> ExtReal) -> ValueMap {
        ValueMap {
            values: self.values.iter().map(|&v| f(v)).collect(),
            ..self.clone()
        }
    }

    /// Values as a [`GreyImage`] with the same scale.
    pub fn to_grey_image(&self) -> GreyImage {
        GreyImage {
            width: self.width,
            height: self.height,
            m: self.m,
            values: self.values.iter().map(|v| v.value()).collect(),
        }
    }

    /// Cell with the smallest value among full-overlap cells, first in row-major order on ties.
    pub fn argmin_full_overlap(&self) -> Option<(usize, usize)> {
        self.values
            .iter()
            .enumerate()
            .filter(|(i, _)| self.full_overlap[*i])
            .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)))
            .map(|(i, _)| (i % self.width, i / self.width))
    }
}

pub(crate) fn ext_abs_diff(a: ExtReal, b: ExtReal) -> f64 {
    if a == b {
        0.0
    } else {
        (a.value() - b.value()).abs()
    }
}
