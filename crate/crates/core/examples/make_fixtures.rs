//! Regenerates the sample tracker and load-cell files under `data/fixtures`.
//!
//! The tracker pair is a noise-free planar perturbation test on a section
//! with K = 0.52 Nm/rad: 0.1 Nm moves it from phi = 0.5 rad by 0.1/0.52 rad.

use std::fs::File;
use std::path::Path;

use hsr_core::estimation::io::{write_force_csv, write_tracker_csv};
use hsr_core::estimation::synthetic::linear_spring_record;
use hsr_core::estimation::ForceTrace;
use hsr_core::{ArcParams, RobotGeometry};
use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/fixtures");
    std::fs::create_dir_all(&dir)?;

    let geom = RobotGeometry::default();
    let baseline = ArcParams::new(0.5, 0.0)?;
    let record = linear_spring_record(&baseline, 0.52, 0.1, &geom, 100, &mut || Vector3::zeros())?;
    write_tracker_csv(&record.baseline, File::create(dir.join("tracker_baseline.csv"))?)?;
    write_tracker_csv(&record.perturbed, File::create(dir.join("tracker_perturbed.csv"))?)?;

    // 2 s ramp to 4 N, 1 s hold, release; 100 Hz with +-0.15 N noise
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let samples = (0..400)
        .map(|i| {
            let t = i as f64 / 100.0;
            let clean = if t < 2.0 { 2.0 * t } else if t < 3.0 { 4.0 } else { 0.1 };
            let f: f64 = clean + rng.random_range(-0.15..0.15);
            (t, (f.max(0.0) * 1e4).round() / 1e4)
        })
        .collect();
    write_force_csv(&ForceTrace::new(samples)?, File::create(dir.join("force_trace.csv"))?)?;
    println!("wrote fixtures to {}", dir.display());
    Ok(())
}
