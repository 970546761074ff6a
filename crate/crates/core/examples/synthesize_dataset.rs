//! Writes a Bleaney-Bowers chi(T) CSV with multiplicative Gaussian noise.
//!
//! ```text
//! cargo run -p spin-stirling --example synthesize_dataset -- \
//!     <J_over_kB_K> <g> <pressure_GPa> <noise_fraction> <seed> <label> > out.csv
//! ```
//!
//! Temperatures run from 20 K to 350 K in 5 K steps.

use std::env;
use std::io;
use std::process::ExitCode;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use spin_stirling::magnetometry::{synthesize, SusceptibilityDataset, SusceptibilityPoint};

fn run(args: &[String]) -> Result<(), Box<dyn std::error::Error>> {
    let [j, g, pressure, noise, seed, label] = args else {
        return Err("expected: J g pressure_GPa noise_fraction seed label".into());
    };
    let temps: Vec<f64> = (0..=66).map(|k| 20.0 + 5.0 * k as f64).collect();
    let clean = synthesize(
        j.parse()?,
        g.parse()?,
        &temps,
        Some(pressure.parse()?),
        label.as_str(),
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed.parse()?);
    let normal = Normal::new(0.0, noise.parse::<f64>()?)?;
    let points = clean
        .points()
        .iter()
        .map(|p| SusceptibilityPoint {
            temperature: p.temperature,
            chi: p.chi * (1.0 + normal.sample(&mut rng)),
        })
        .collect();
    let noisy = SusceptibilityDataset::new(points, clean.pressure_gpa(), clean.label())?;
    noisy.write_csv(io::stdout().lock())?;
    Ok(())
}

fn main() -> ExitCode {
    let args: Vec<String> = env::args().skip(1).collect();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("synthesize_dataset: {e}");
            ExitCode::FAILURE
        }
    }
}
