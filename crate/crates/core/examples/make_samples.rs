//! Writes the bundled sample inputs into the directory given as the first
//! argument (default `samples`).
//!
//! - `ring_scene.pgm`: 64x64 mid-grey canvas with a ring target planted at (37, 22)
//! - `ring.probe`: the ring probe, outer radius 5, inner radius 2
//! - `pair.pgm`, `pair.probe`: the 1x2 instance (100, 200) against (150, 150)

use std::path::PathBuf;

use lip_asplund::io::{write_pgm, write_probe, PgmEncoding};
use lip_asplund::probing::ring_scene;
use lip_asplund::{GreyImage, Probe, ScaleM};

fn main() -> lip_asplund::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "samples".into()));
    std::fs::create_dir_all(&dir)?;
    let scene = ring_scene(64, 64, 5, 2, (37, 22), 7)?;
    // PGM holds integers; the planted ring values already are.
    let image = scene.image.map(f64::round)?;
    write_pgm(&image, dir.join("ring_scene.pgm"), PgmEncoding::Binary)?;
    write_probe(&scene.probe, dir.join("ring.probe"))?;

    let m = ScaleM::EIGHT_BIT;
    let pair = GreyImage::new(2, 1, m, vec![100.0, 200.0])?;
    write_pgm(&pair, dir.join("pair.pgm"), PgmEncoding::Ascii)?;
    let probe = Probe::new(2, 1, (0, 0), vec![true; 2], vec![150.0; 2], m)?;
    write_probe(&probe, dir.join("pair.probe"))?;
    println!("samples written to {}", dir.display());
    Ok(())
}
