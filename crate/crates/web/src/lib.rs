//! Browser bindings for three interactive operations: a darkened ring scene
//! with its additive distance map and detections, LIP transfer curves, and a
//! seeded link-theorem check.

use lip_asplund::asplund::{
    dist_metric_link, map_add, map_add_via_mult, map_mult, map_mult_via_add,
};
use lip_asplund::probing::{darken, detect_minima, ring_scene, Scene};
use lip_asplund::{lip, GreyImage, Probe, ScaleM, ValueMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wasm_bindgen::prelude::*;

const M: ScaleM = ScaleM::EIGHT_BIT;

/// A 96x64 planted ring scene whose anchor depends on the seed.
#[wasm_bindgen]
pub struct RingDemo {
    scene: Scene,
}

#[wasm_bindgen]
impl RingDemo {
    #[wasm_bindgen(constructor)]
    pub fn new(seed: u32) -> RingDemo {
        let mut rng = ChaCha8Rng::seed_from_u64(u64::from(seed));
        let anchor = (rng.gen_range(6..90), rng.gen_range(6..58));
        let scene = ring_scene(96, 64, 5, 2, anchor, u64::from(seed))
            .expect("anchor keeps the ring inside");
        RingDemo { scene }
    }

    pub fn width(&self) -> usize {
        self.scene.image.width()
    }

    pub fn height(&self) -> usize {
        self.scene.image.height()
    }

    pub fn anchor_x(&self) -> usize {
        self.scene.anchor.0
    }

    pub fn anchor_y(&self) -> usize {
        self.scene.anchor.1
    }

    /// RGBA pixels of the scene darkened by `k`; empty if `k` is outside `[0, 256[`.
    pub fn image_rgba(&self, k: f64) -> Vec<u8> {
        self.darkened(k)
            .map(|img| grey_rgba(&img))
            .unwrap_or_default()
    }

    /// RGBA pixels of the additive distance map of the darkened scene.
    /// Cells where the probe leaves the image are tinted blue.
    pub fn map_rgba(&self, k: f64) -> Vec<u8> {
        self.map(k).map(|map| map_rgba(&map)).unwrap_or_default()
    }

    /// Detections as flat `[x0, y0, x1, y1, ...]`, ascending by map value.
    pub fn detections(&self, k: f64, threshold: f64) -> Vec<u32> {
        let Some(map) = self.map(k) else {
            return Vec::new();
        };
        detect_minima(&map, threshold)
            .iter()
            .flat_map(|d| [d.x as u32, d.y as u32])
            .collect()
    }
}

impl RingDemo {
    fn darkened(&self, k: f64) -> Option<GreyImage> {
        darken(&self.scene.image, k).ok()
    }

    fn map(&self, k: f64) -> Option<ValueMap> {
        map_add(&self.darkened(k)?, &self.scene.probe).ok()
    }
}

fn grey_rgba(img: &GreyImage) -> Vec<u8> {
    let m = img.m().value();
    img.values()
        .iter()
        // high LIP grey values are dark
        .flat_map(|&v| {
            let g = (255.0 * (1.0 - v / m)).round().clamp(0.0, 255.0) as u8;
            [g, g, g, 255]
        })
        .collect()
}

fn map_rgba(map: &ValueMap) -> Vec<u8> {
    let finite = map
        .values()
        .iter()
        .filter(|v| v.is_finite())
        .map(|v| v.value());
    let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    let span = if hi > lo { hi - lo } else { 1.0 };
    map.values()
        .iter()
        .zip(map.full_overlap())
        .flat_map(|(v, &full)| {
            let g = if v.is_finite() {
                (255.0 * (v.value() - lo) / span).round() as u8
            } else {
                255
            };
            if full {
                [g, g, g, 255]
            } else {
                [g / 2, g / 2, 128 + g / 2, 255]
            }
        })
        .collect()
}

/// 256 samples of `f ⊞ param` (`kind == "add"`), `param ⊠ f` (`"mult"`) or
/// `f ⊟ param` (`"sub"`) for `f = 0..256`. Empty for an unknown kind.
#[wasm_bindgen]
pub fn transfer_curve(kind: &str, param: f64) -> Vec<f64> {
    let op: fn(f64, f64) -> f64 = match kind {
        "add" => |f, p| lip::add(f, p, M),
        "mult" => |f, p| lip::mult(p, f, M),
        "sub" => |f, p| lip::sub(f, p, M),
        _ => return Vec::new(),
    };
    (0..256).map(|f| op(f64::from(f), param)).collect()
}

/// Link-theorem deviations on a seeded random `size x size` image with a 3x3
/// probe, one line per check.
#[wasm_bindgen]
pub fn link_report(seed: u32, size: u32) -> String {
    match link_deviations(u64::from(seed), size as usize) {
        Ok([mult, add, metric]) => format!(
            "map-mult via map-add: max relative deviation {mult:.3e}\n\
             map-add via map-mult: max deviation / M {add:.3e}\n\
             metric pair: relative deviation {metric:.3e}"
        ),
        Err(e) => format!("error: {e}"),
    }
}

fn link_deviations(seed: u64, size: usize) -> lip_asplund::Result<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = GreyImage::from_fn(size, size, M, |_, _| rng.gen_range(10.0..=240.0))?;
    let g = GreyImage::from_fn(size, size, M, |_, _| rng.gen_range(10.0..=240.0))?;
    let values = (0..9).map(|_| rng.gen_range(10.0..=240.0)).collect();
    let b = Probe::new(3, 3, (1, 1), vec![true; 9], values, M)?;

    let direct = map_mult(&f, &b)?;
    let via = map_mult_via_add(&f, &b)?;
    let mult = direct
        .values()
        .iter()
        .zip(via.values())
        .map(|(d, v)| (d.value() - v.value()).abs() / (1.0 + d.value().abs()))
        .fold(0.0, f64::max);
    let add = map_add(&f, &b)?.max_abs_diff(&map_add_via_mult(&f, &b)?)? / M.value();
    let link = dist_metric_link(&f, &g)?;
    Ok([mult, add, link.deviation() / (1.0 + link.direct.abs())])
}
