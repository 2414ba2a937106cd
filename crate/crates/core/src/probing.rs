//! Lighting-change simulation, ring probes, synthetic scenes and detection
//! of distance-map minima.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lip;
use crate::morphology::Probe;
use crate::raster::{GreyImage, Regime, ScaleM, ValueMap};

/// Grey value of the ring around the dark centre of the default probe.
pub const RING_VALUE: f64 = 161.0;
/// Grey value of the dark centre disk of the default probe.
pub const DISK_VALUE: f64 = 4.0;

/// A lighting change applied to grey values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Lighting {
    Identity,
    /// `f ⊞ k`: shorter exposure time or weaker light.
    Add(f64),
    /// `alpha ⊠ f`: thicker or more opaque object.
    Mult(f64),
}

impl Lighting {
    pub fn apply(self, f: f64, m: ScaleM) -> f64 {
        match self {
            Lighting::Identity => f,
            Lighting::Add(k) => lip::add(f, k, m),
            Lighting::Mult(a) => lip::mult(a, f, m),
        }
    }

    pub fn apply_image(self, f: &GreyImage) -> Result<GreyImage> {
        match self {
            Lighting::Identity => Ok(f.clone()),
            Lighting::Add(k) => darken(f, k),
            Lighting::Mult(a) => {
                if !(a > 0.0 && a.is_finite()) {
                    return Err(Error::InvalidArgument(format!(
                        "LIP scalar must be positive, got {a}"
                    )));
                }
                f.lip_mult(a)
            }
        }
    }
}

/// `f ⊞ k` for an image in `[0, M[` and `k` in `[0, M[`.
pub fn darken(f: &GreyImage, k: f64) -> Result<GreyImage> {
    let m = f.m().value();
    if !(0.0..m).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "darkening constant {k} is outside [0, {m}["
        )));
    }
    f.check(Regime::Image)?;
    f.lip_add_const(k)
}

/// Square probe of side `2 outer + 1`, anchored at the centre: cells at
/// rounded Euclidean distance `<= inner` hold `disk_value`, cells up to
/// `outer` hold `ring_value`, the corners beyond `outer` are outside `D_b`.
pub fn make_ring_probe(
    outer_radius: usize,
    inner_radius: usize,
    ring_value: f64,
    disk_value: f64,
    m: ScaleM,
) -> Result<Probe> {
    if !(0 < inner_radius && inner_radius < outer_radius) {
        return Err(Error::InvalidArgument(format!(
            "ring radii must satisfy 0 < inner < outer, got inner {inner_radius}, outer {outer_radius}"
        )));
    }
    for v in [ring_value, disk_value] {
        if !Regime::Strict.contains(v, m) {
            return Err(Error::InvalidArgument(format!(
                "probe grey value {v} is outside ]0, {}[",
                m.value()
            )));
        }
    }
    let side = 2 * outer_radius + 1;
    let c = outer_radius as f64;
    let mut mask = Vec::with_capacity(side * side);
    let mut values = Vec::with_capacity(side * side);
    for y in 0..side {
        for x in 0..side {
            let d = ((x as f64 - c).powi(2) + (y as f64 - c).powi(2))
                .sqrt()
                .round() as usize;
            mask.push(d <= outer_radius);
            values.push(if d <= inner_radius {
                disk_value
            } else {
                ring_value
            });
        }
    }
    Probe::new(side, side, (outer_radius, outer_radius), mask, values, m)
}

/// Uniform background with optional seeded noise in `[-noise, noise]`.
pub fn synthetic_canvas(
    width: usize,
    height: usize,
    level: f64,
    noise: f64,
    seed: u64,
    m: ScaleM,
) -> Result<GreyImage> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GreyImage::from_fn(width, height, m, |_, _| {
        if noise > 0.0 {
            level + rng.gen_range(-noise..=noise)
        } else {
            level
        }
    })
}

/// Writes `transform(b(h))` at `at + h` for every `h` in `D_b`.
pub fn plant_target(
    canvas: &GreyImage,
    probe: &Probe,
    at: (usize, usize),
    transform: Lighting,
) -> Result<GreyImage> {
    canvas.m().check_same(probe.m())?;
    let mut out = canvas.clone();
    let m = canvas.m();
    for c in probe.cells() {
        let x = at.0 as isize + c.dx;
        let y = at.1 as isize + c.dy;
        if !crate::morphology::inside(x, y, canvas.width(), canvas.height()) {
            return Err(Error::InvalidArgument(format!(
                "probe footprint at ({}, {}) leaves the {}x{} canvas",
                at.0,
                at.1,
                canvas.width(),
                canvas.height()
            )));
        }
        out.set(x as usize, y as usize, transform.apply(c.value, m));
    }
    Ok(out)
}

/// A map cell at or below the detection threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Detection {
    pub x: usize,
    pub y: usize,
    pub value: f64,
    pub threshold: f64,
}

/// Full-overlap cells with value `<= threshold`, ascending by value, ties in row-major order.
pub fn detect_minima(map: &ValueMap, threshold: f64) -> Vec<Detection> {
    let mut out: Vec<(usize, Detection)> = map
        .values()
        .iter()
        .enumerate()
        .filter(|(i, v)| map.full_overlap()[*i] && v.value() <= threshold)
        .map(|(i, v)| {
            (
                i,
                Detection {
                    x: i % map.width(),
                    y: i / map.width(),
                    value: v.value(),
                    threshold,
                },
            )
        })
        .collect();
    out.sort_by(|a, b| a.1.value.total_cmp(&b.1.value).then(a.0.cmp(&b.0)));
    out.into_iter().map(|(_, d)| d).collect()
}

/// A planted-target scene: a noisy canvas with `probe` written at `anchor`.
#[derive(Clone, Debug)]
pub struct Scene {
    pub image: GreyImage,
    pub probe: Probe,
    pub anchor: (usize, usize),
}

/// Mid-grey canvas with `±10` noise and the default ring probe planted at `anchor`.
pub fn ring_scene(
    width: usize,
    height: usize,
    outer_radius: usize,
    inner_radius: usize,
    anchor: (usize, usize),
    seed: u64,
) -> Result<Scene> {
    let m = ScaleM::default();
    let probe = make_ring_probe(outer_radius, inner_radius, RING_VALUE, DISK_VALUE, m)?;
    let canvas = synthetic_canvas(width, height, m.value() / 2.0, 10.0, seed, m)?;
    let image = plant_target(&canvas, &probe, anchor, Lighting::Identity)?;
    Ok(Scene {
        image,
        probe,
        anchor,
    })
}
