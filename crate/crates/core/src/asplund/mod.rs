//! LIP-multiplicative and LIP-additive Asplund metrics and distance maps.
//!
//! For a probe `b` anchored inside a window `D_b`, each map value at `x`
//! compares the restriction of `f` to `x + D_b` with `b`:
//!
//! * multiplicative: `lambda_b f(x) = max tilde f(x+h) / tilde b(h)`,
//!   `mu_b f(x) = min` of the same ratios, `As_b f = ln(lambda / mu)`;
//! * additive: `c1_b f(x) = max f(x+h) ⊟ b(h)`, `c2_b f(x) = min` of the same,
//!   `As_b f = c1 ⊟ c2`.
//!
//! The multiplicative maps also have a morphological route through the
//! `hat` transform, a dilation and an erosion. The additive and
//! multiplicative maps are linked by the isomorphism `xi` (see [`link`]).
//!
//! Windows are clipped at the image border; each map carries the mask of
//! full-overlap cells. A window left empty by clipping follows the
//! definitional bounds (`lambda = 0`, `mu = +inf`, `c1 = -inf`, `c2 = M`)
//! and gets distance `+inf` (multiplicative) or `M` (additive).

pub mod link;
pub mod oracle;

use crate::error::{Error, Result};
use crate::ext_real::ExtReal;
use crate::lip;
use crate::morphology::{dilate, erode, inside, Probe, ProbeCell};
use crate::raster::{FmMap, GreyImage, RealMap, Regime};

pub use link::{dist_metric_link, map_add_via_mult, map_mult_via_add, MetricLink};
pub use oracle::{
    scan_add, scan_add_with_limit, scan_mult, scan_mult_with_range, AddScan, MultScan,
};

/// Rounding noise below zero that is snapped back to `0` in distance maps.
pub const NEGATIVE_NOISE: f64 = 1e-12;

/// How the multiplicative maps are evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MapPath {
    /// Max and min of `tilde` ratios over the window.
    Ratio,
    /// Dilation and erosion of the `hat` transform.
    #[default]
    Morphological,
}

struct WindowBounds {
    upper: Vec<f64>,
    lower: Vec<f64>,
    empty: Vec<bool>,
    full_overlap: Vec<bool>,
}

/// Max and min of `term(f(x+h), b(h))` over the clipped window at every cell.
fn window_bounds(
    f: &[f64],
    width: usize,
    height: usize,
    cells: &[ProbeCell],
    term: impl Fn(f64, f64) -> f64,
) -> WindowBounds {
    let n = width * height;
    let mut out = WindowBounds {
        upper: Vec::with_capacity(n),
        lower: Vec::with_capacity(n),
        empty: Vec::with_capacity(n),
        full_overlap: Vec::with_capacity(n),
    };
    for y in 0..height as isize {
        for x in 0..width as isize {
            let mut hi = f64::NEG_INFINITY;
            let mut lo = f64::INFINITY;
            let mut seen = 0usize;
            for c in cells {
                let (sx, sy) = (x + c.dx, y + c.dy);
                if inside(sx, sy, width, height) {
                    let t = term(f[sy as usize * width + sx as usize], c.value);
                    hi = hi.max(t);
                    lo = lo.min(t);
                    seen += 1;
                }
            }
            out.upper.push(hi);
            out.lower.push(lo);
            out.empty.push(seen == 0);
            out.full_overlap.push(seen == cells.len());
        }
    }
    out
}

fn check_pair(f: &GreyImage, b: &Probe) -> Result<()> {
    f.m().check_same(b.m())
}

fn to_map(
    f: &GreyImage,
    values: Vec<f64>,
    full_overlap: Vec<bool>,
) -> Result<crate::raster::ValueMap> {
    let values = values
        .into_iter()
        .map(|v| ExtReal::new(v).ok_or_else(|| Error::InvalidArgument("NaN in map".into())))
        .collect::<Result<Vec<_>>>()?;
    crate::raster::ValueMap::new(f.width(), f.height(), f.m(), values, full_overlap)
}

/// `+0.0` for `-0.0`, tiny negatives to zero.
#[inline]
fn snap_non_negative(v: f64, noise: f64) -> f64 {
    if v < 0.0 && v >= -noise {
        0.0
    } else {
        v + 0.0
    }
}

fn tilde_ratio_bounds(f: &GreyImage, b: &Probe) -> Result<WindowBounds> {
    check_pair(f, b)?;
    f.check(Regime::Closed)?;
    b.check(Regime::Strict)?;
    let m = f.m();
    let tf: Vec<f64> = f.values().iter().map(|&v| lip::tilde(v, m)).collect();
    let tb = b.map_values(|v| lip::tilde(v, m))?;
    Ok(window_bounds(
        &tf,
        f.width(),
        f.height(),
        &tb.cells(),
        |a, c| a / c,
    ))
}

/// Map of least upper bounds `lambda_b f`, by the ratio route. `f` in `[0, M]`, `b` in `]0, M[`.
pub fn mlub_mult(f: &GreyImage, b: &Probe) -> Result<RealMap> {
    let wb = tilde_ratio_bounds(f, b)?;
    let values = wb
        .upper
        .iter()
        .zip(&wb.empty)
        .map(|(&v, &e)| if e { 0.0 } else { v + 0.0 })
        .collect();
    to_map(f, values, wb.full_overlap)
}

/// Map of greatest lower bounds `mu_b f`, by the ratio route.
pub fn mglb_mult(f: &GreyImage, b: &Probe) -> Result<RealMap> {
    let wb = tilde_ratio_bounds(f, b)?;
    let values = wb
        .lower
        .iter()
        .zip(&wb.empty)
        .map(|(&v, &e)| if e { f64::INFINITY } else { v + 0.0 })
        .collect();
    to_map(f, values, wb.full_overlap)
}

/// `hat f` and the two structuring functions used by the morphological route.
fn hat_operands(f: &GreyImage, b: &Probe) -> Result<(GreyImage, Probe, Probe)> {
    check_pair(f, b)?;
    f.check(Regime::Closed)?;
    b.check(Regime::Strict)?;
    let m = f.m();
    let hf = f.map(|v| lip::hat(v, m))?;
    let hb = b.map_values(|v| lip::hat(v, m))?;
    let neg_hb_reflected = hb.reflect().map_values(|v| -v)?;
    Ok((hf, hb, neg_hb_reflected))
}

/// `lambda_b f = exp(hat f ⊕ (-hat b̄))`.
pub fn mlub_mult_morphological(f: &GreyImage, b: &Probe) -> Result<RealMap> {
    let (hf, _, nhb) = hat_operands(f, b)?;
    let d = dilate(&hf, &nhb)?;
    Ok(d.map_values(|v| ExtReal::from_f64(v.value().exp())))
}

/// `mu_b f = exp(hat f ⊖ hat b)`.
pub fn mglb_mult_morphological(f: &GreyImage, b: &Probe) -> Result<RealMap> {
    let (hf, hb, _) = hat_operands(f, b)?;
    let e = erode(&hf, &hb)?;
    Ok(e.map_values(|v| ExtReal::from_f64(v.value().exp())))
}

fn check_strict_pair(f: &GreyImage, b: &Probe) -> Result<()> {
    check_pair(f, b)?;
    f.check(Regime::Strict)?;
    b.check(Regime::Strict)
}

/// Map of LIP-multiplicative Asplund distances `ln(lambda_b f / mu_b f)`, ratio route.
///
/// Both `f` and `b` must lie in `]0, M[`.
pub fn map_mult(f: &GreyImage, b: &Probe) -> Result<RealMap> {
    check_strict_pair(f, b)?;
    let wb = tilde_ratio_bounds(f, b)?;
    let values = (0..wb.upper.len())
        .map(|i| {
            if wb.empty[i] {
                f64::INFINITY
            } else {
                snap_non_negative((wb.upper[i] / wb.lower[i]).ln(), NEGATIVE_NOISE)
            }
        })
        .collect();
    to_map(f, values, wb.full_overlap)
}

/// Same map as [`map_mult`] through `[hat f ⊕ (-hat b̄)] - [hat f ⊖ hat b]`.
pub fn map_mult_morphological(f: &GreyImage, b: &Probe) -> Result<RealMap> {
    check_strict_pair(f, b)?;
    let (hf, hb, nhb) = hat_operands(f, b)?;
    let upper = dilate(&hf, &nhb)?;
    let lower = erode(&hf, &hb)?;
    let full = b.full_overlap_mask(f.width(), f.height());
    let values = upper
        .values()
        .iter()
        .zip(lower.values())
        .map(|(&u, &l)| {
            // An empty window is the only way to meet an infinity here.
            if u == ExtReal::NEG_INFINITY {
                f64::INFINITY
            } else {
                snap_non_negative(u.value() - l.value(), NEGATIVE_NOISE)
            }
        })
        .collect();
    to_map(f, values, full)
}

pub fn map_mult_with(f: &GreyImage, b: &Probe, path: MapPath) -> Result<RealMap> {
    match path {
        MapPath::Ratio => map_mult(f, b),
        MapPath::Morphological => map_mult_morphological(f, b),
    }
}

fn sub_bounds(f: &GreyImage, b: &Probe, f_regime: Regime) -> Result<WindowBounds> {
    check_pair(f, b)?;
    let m = b.m().value();
    if let Some(i) = (0..b.values().len()).find(|&i| b.mask()[i] && b.values()[i] == m) {
        return Err(Error::Singularity {
            x: i % b.width(),
            y: i / b.width(),
            what: "probe value equal to M",
        });
    }
    b.check(Regime::BelowM)?;
    f.check(f_regime)?;
    let m = f.m();
    Ok(window_bounds(
        f.values(),
        f.width(),
        f.height(),
        &b.cells(),
        |a, c| lip::sub(a, c, m),
    ))
}

/// `c1_b f(x) = max f(x+h) ⊟ b(h)`. `f` in `[-inf, M]`, `b` in `]-inf, M[`.
pub fn c1_map(f: &GreyImage, b: &Probe) -> Result<FmMap> {
    let wb = sub_bounds(f, b, Regime::BelowMClosed)?;
    let values = wb
        .upper
        .iter()
        .zip(&wb.empty)
        .map(|(&v, &e)| if e { f64::NEG_INFINITY } else { v })
        .collect();
    to_map(f, values, wb.full_overlap)
}

/// `c2_b f(x) = min f(x+h) ⊟ b(h)`.
pub fn c2_map(f: &GreyImage, b: &Probe) -> Result<FmMap> {
    let wb = sub_bounds(f, b, Regime::BelowMClosed)?;
    let m = f.m().value();
    let values = wb
        .lower
        .iter()
        .zip(&wb.empty)
        .map(|(&v, &e)| if e { m } else { v })
        .collect();
    to_map(f, values, wb.full_overlap)
}

/// Map of LIP-additive Asplund distances `c1_b f ⊟ c2_b f`, values in `[0, M[`.
pub fn map_add(f: &GreyImage, b: &Probe) -> Result<FmMap> {
    let wb = sub_bounds(f, b, Regime::BelowM)?;
    let m = f.m();
    let values = (0..wb.upper.len())
        .map(|i| {
            if wb.empty[i] {
                m.value()
            } else {
                snap_non_negative(
                    lip::sub(wb.upper[i], wb.lower[i], m),
                    NEGATIVE_NOISE * m.value(),
                )
            }
        })
        .collect();
    to_map(f, values, wb.full_overlap)
}

/// The pair `(lambda, mu)` bracketing `f` by LIP multiples of `g`.
pub fn mult_bounds(f: &GreyImage, g: &GreyImage) -> Result<(f64, f64)> {
    f.check_same_shape(g)?;
    f.check(Regime::Strict)?;
    g.check(Regime::Strict)?;
    let m = f.m();
    let (mut lambda, mut mu) = (f64::NEG_INFINITY, f64::INFINITY);
    for (&a, &c) in f.values().iter().zip(g.values()) {
        let r = lip::tilde(a, m) / lip::tilde(c, m);
        lambda = lambda.max(r);
        mu = mu.min(r);
    }
    Ok((lambda, mu))
}

/// LIP-multiplicative Asplund distance `ln(lambda / mu)` between images of `]0, M[`.
pub fn dist_mult(f: &GreyImage, g: &GreyImage) -> Result<f64> {
    let (lambda, mu) = mult_bounds(f, g)?;
    Ok(snap_non_negative((lambda / mu).ln(), NEGATIVE_NOISE))
}

/// The pair `(c1, c2)` bracketing `f` by LIP translates of `g`.
pub fn add_bounds(f: &GreyImage, g: &GreyImage) -> Result<(f64, f64)> {
    f.check_same_shape(g)?;
    let m = f.m();
    if let Some(i) = g.values().iter().position(|&v| v == m.value()) {
        let (x, y) = g.index_to_xy(i);
        return Err(Error::Singularity {
            x,
            y,
            what: "probing function equal to M",
        });
    }
    f.check(Regime::BelowM)?;
    g.check(Regime::BelowM)?;
    let (mut c1, mut c2) = (f64::NEG_INFINITY, f64::INFINITY);
    for (&a, &c) in f.values().iter().zip(g.values()) {
        let d = lip::sub(a, c, m);
        c1 = c1.max(d);
        c2 = c2.min(d);
    }
    Ok((c1, c2))
}

/// LIP-additive Asplund distance `c1 ⊟ c2` between functions of `]-inf, M[`.
pub fn dist_add(f: &GreyImage, g: &GreyImage) -> Result<f64> {
    let (c1, c2) = add_bounds(f, g)?;
    let m = f.m();
    Ok(snap_non_negative(
        lip::sub(c1, c2, m),
        NEGATIVE_NOISE * m.value(),
    ))
}
