use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lip_asplund::asplund::{
    dist_metric_link, map_add, map_add_via_mult, map_mult_via_add, map_mult_with, MapPath,
};
use lip_asplund::io::{self, format_g17, MapFormat};
use lip_asplund::probing::{detect_minima, Lighting};
use lip_asplund::{Error, GreyImage, Probe, ScaleM, ValueMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Scale-relative tolerance of `verify-link`.
const LINK_TOLERANCE: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "lip-asplund",
    version,
    about = "LIP Asplund distance maps, lighting changes and detection"
)]
struct Cli {
    /// Clamp image values into [EPS, M - EPS] before regime checks (8-bit images contain 0s).
    #[arg(long, global = true, value_name = "EPS")]
    clamp: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Multiplicative (LIP-multiplication invariant) distance map.
    MapMult(MapMultArgs),
    /// Additive (LIP-addition invariant) distance map.
    MapAdd(MapAddArgs),
    /// Simulate a lighting change: f ⊞ K or A ⊠ f.
    Lighting(LightingArgs),
    /// Print map cells at or below a threshold as `x y value`, ascending by value.
    Detect(DetectArgs),
    /// Check both map directions and the metric pair against the isomorphism link.
    VerifyLink(VerifyLinkArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum PathArg {
    Ratio,
    Morpho,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    /// `fmap` text, bit-exact.
    Exact,
    /// 8-bit PGM rescaled over the finite range, for viewing.
    Pgm8,
}

impl From<FormatArg> for MapFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Exact => MapFormat::Exact,
            FormatArg::Pgm8 => MapFormat::Pgm8,
        }
    }
}

#[derive(Args)]
struct MapMultArgs {
    #[arg(long)]
    image: PathBuf,
    #[arg(long)]
    probe: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Ratio of bound maps or the morphological path.
    #[arg(long, value_enum, default_value = "morpho")]
    path: PathArg,
    /// Reject probe values outside ]0, M[ while parsing.
    #[arg(long)]
    strict: bool,
    #[arg(long, value_enum, default_value = "exact")]
    format: FormatArg,
}

#[derive(Args)]
struct MapAddArgs {
    #[arg(long)]
    image: PathBuf,
    #[arg(long)]
    probe: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Compute through the multiplicative map and report the deviation from the direct path on stderr.
    #[arg(long)]
    via_mult: bool,
    #[arg(long, value_enum, default_value = "exact")]
    format: FormatArg,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("change").required(true).args(["add", "mult"]))]
struct LightingArgs {
    #[arg(long)]
    image: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Darken by LIP-adding K in [0, M[.
    #[arg(long, value_name = "K")]
    add: Option<f64>,
    /// LIP-multiply by A > 0.
    #[arg(long, value_name = "A")]
    mult: Option<f64>,
}

#[derive(Args)]
struct DetectArgs {
    #[arg(long)]
    map: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    threshold: f64,
    /// Probe the map was computed with; restricts detection to full-overlap cells.
    #[arg(long)]
    probe: Option<PathBuf>,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["image", "random"]))]
struct VerifyLinkArgs {
    #[arg(long, requires = "probe")]
    image: Option<PathBuf>,
    #[arg(long)]
    probe: Option<PathBuf>,
    /// Random W x H image with values uniform in [10, 240] from ChaCha8 (rand_chacha) seeded by --seed.
    #[arg(long, num_args = 2, value_names = ["W", "H"], requires = "seed", conflicts_with = "image")]
    random: Option<Vec<usize>>,
    #[arg(long)]
    seed: Option<u64>,
    /// Side of the random full-mask probe, drawn from the same generator after the image.
    #[arg(long, default_value_t = 3)]
    probe_size: usize,
    /// Offset added to the isomorphism-side results before comparison.
    #[arg(long, hide = true, default_value_t = 0.0)]
    perturb: f64,
}

fn load_image(path: &PathBuf, clamp: Option<f64>) -> Result<GreyImage, Error> {
    let img = io::read_image(path)?;
    match clamp {
        Some(eps) => img.clamp_to_open(eps),
        None => Ok(img),
    }
}

fn map_mult_cmd(a: MapMultArgs, clamp: Option<f64>) -> Result<u8, Error> {
    let f = load_image(&a.image, clamp)?;
    let b = io::read_probe(&a.probe, a.strict)?;
    let path = match a.path {
        PathArg::Ratio => MapPath::Ratio,
        PathArg::Morpho => MapPath::Morphological,
    };
    let map = map_mult_with(&f, &b, path)?;
    io::write_map(&map, &a.out, a.format.into())?;
    Ok(0)
}

fn map_add_cmd(a: MapAddArgs, clamp: Option<f64>) -> Result<u8, Error> {
    let f = load_image(&a.image, clamp)?;
    let b = io::read_probe(&a.probe, false)?;
    let direct = map_add(&f, &b)?;
    let map = if a.via_mult {
        let via = map_add_via_mult(&f, &b)?;
        eprintln!(
            "max deviation from direct path: {}",
            format_g17(direct.max_abs_diff(&via)?)
        );
        via
    } else {
        direct
    };
    io::write_map(&map, &a.out, a.format.into())?;
    Ok(0)
}

fn lighting_cmd(a: LightingArgs, clamp: Option<f64>) -> Result<u8, Error> {
    let f = load_image(&a.image, clamp)?;
    let change = match (a.add, a.mult) {
        (Some(k), None) => Lighting::Add(k),
        (None, Some(alpha)) => Lighting::Mult(alpha),
        _ => unreachable!("clap enforces exactly one of --add, --mult"),
    };
    io::write_raster(&change.apply_image(&f)?, &a.out)?;
    Ok(0)
}

fn detect_cmd(a: DetectArgs) -> Result<u8, Error> {
    let mut map = io::read_map(&a.map)?;
    if let Some(p) = &a.probe {
        let probe = io::read_probe(p, false)?;
        let mask = probe.full_overlap_mask(map.width(), map.height());
        map = map.with_full_overlap(mask)?;
    }
    let hits = detect_minima(&map, a.threshold);
    for d in &hits {
        println!("{} {} {}", d.x, d.y, format_g17(d.value));
    }
    Ok(if hits.is_empty() { 1 } else { 0 })
}

fn random_instance(
    w: usize,
    h: usize,
    side: usize,
    seed: u64,
) -> Result<(GreyImage, Probe), Error> {
    if side == 0 {
        return Err(Error::InvalidArgument(
            "--probe-size must be positive".into(),
        ));
    }
    let m = ScaleM::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = GreyImage::from_fn(w, h, m, |_, _| rng.gen_range(10.0..=240.0))?;
    let values = (0..side * side)
        .map(|_| rng.gen_range(10.0..=240.0))
        .collect();
    let b = Probe::new(
        side,
        side,
        (side / 2, side / 2),
        vec![true; side * side],
        values,
        m,
    )?;
    Ok((f, b))
}

/// The first full-overlap window of `f` and the probe values, both as `1 x n` rasters.
fn first_window(
    f: &GreyImage,
    b: &Probe,
    mask: &ValueMap,
) -> Result<(GreyImage, GreyImage), Error> {
    let i = mask
        .full_overlap()
        .iter()
        .position(|&full| full)
        .ok_or_else(|| Error::InvalidArgument("the probe does not fit inside the image".into()))?;
    let (x, y) = (i % f.width(), i / f.width());
    let cells = b.cells();
    let window = cells
        .iter()
        .map(|c| f.get((x as isize + c.dx) as usize, (y as isize + c.dy) as usize))
        .collect();
    let probe_values = cells.iter().map(|c| c.value).collect();
    Ok((
        GreyImage::new(cells.len(), 1, f.m(), window)?,
        GreyImage::new(cells.len(), 1, f.m(), probe_values)?,
    ))
}

fn verify_link_cmd(a: VerifyLinkArgs, clamp: Option<f64>) -> Result<u8, Error> {
    let (f, b) = match (&a.image, &a.random) {
        (Some(path), _) => {
            let probe = a
                .probe
                .as_ref()
                .expect("clap requires --probe with --image");
            (load_image(path, clamp)?, io::read_probe(probe, false)?)
        }
        (None, Some(wh)) => random_instance(
            wh[0],
            wh[1],
            a.probe_size,
            a.seed.expect("clap requires --seed"),
        )?,
        (None, None) => unreachable!("clap requires --image or --random"),
    };
    let m = f.m().value();
    let nudge = a.perturb;

    let direct = lip_asplund::asplund::map_mult(&f, &b)?;
    let via = map_mult_via_add(&f, &b)?;
    let mult_dev = direct
        .values()
        .iter()
        .zip(via.values())
        .map(|(d, v)| (d.value() - (v.value() + nudge)).abs() / (1.0 + d.value().abs()))
        .fold(0.0, f64::max);
    println!(
        "map-mult via map-add: max relative deviation {}",
        format_g17(mult_dev)
    );

    let direct_add = map_add(&f, &b)?;
    let via_add = map_add_via_mult(&f, &b)?;
    let add_dev = direct_add
        .values()
        .iter()
        .zip(via_add.values())
        .map(|(d, v)| (d.value() - (v.value() + nudge)).abs() / m)
        .fold(0.0, f64::max);
    println!(
        "map-add via map-mult: max deviation / M {}",
        format_g17(add_dev)
    );

    let (window, probe_values) = first_window(&f, &b, &direct)?;
    let link = dist_metric_link(&window, &probe_values)?;
    let via_metric = link.via_isomorphism + nudge;
    let metric_dev = (link.direct - via_metric).abs() / (1.0 + link.direct.abs());
    println!(
        "metric: direct {} via isomorphism {} relative deviation {}",
        format_g17(link.direct),
        format_g17(via_metric),
        format_g17(metric_dev)
    );

    let worst = mult_dev.max(add_dev).max(metric_dev);
    if worst <= LINK_TOLERANCE {
        Ok(0)
    } else {
        Err(Error::Verification {
            what: "link theorem".into(),
            deviation: worst,
            tolerance: LINK_TOLERANCE,
        })
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Verification { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let clamp = cli.clamp;
    let result = match cli.command {
        Command::MapMult(a) => map_mult_cmd(a, clamp),
        Command::MapAdd(a) => map_add_cmd(a, clamp),
        Command::Lighting(a) => lighting_cmd(a, clamp),
        Command::Detect(a) => detect_cmd(a),
        Command::VerifyLink(a) => verify_link_cmd(a, clamp),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
