//! Detection probability against SNR at a fixed false-alarm rate, with
//! thresholds calibrated per overlap from noise-only trials.
//!
//!     cargo run --release --example snr_sweep -- [trials]

use overlap_sense::montecarlo::sweep_snr_paired;
use overlap_sense::*;

fn main() -> Result<()> {
    let trials: usize = std::env::args()
        .nth(1)
        .map_or(500, |t| t.parse().expect("trial count"));
    let scenario = ScenarioConfig::default();
    let overlaps = [1, 2, 4, 7];
    let grid: Vec<f64> = (-20..=-6).step_by(2).map(f64::from).collect();
    let results = sweep_snr_paired(
        &scenario,
        &overlaps,
        &[DetectorKind::Rlrt {
            noise_variance: scenario.noise_variance,
        }],
        &grid,
        trials,
        5 * trials,
        0.1,
        11,
    )?;

    print!("snr_db");
    for r in &results {
        print!("   p={}", r.points[0].overlap);
    }
    println!();
    for (k, snr) in grid.iter().enumerate() {
        print!("{snr:>6}");
        for r in &results {
            print!(" {:.3}", r.points[k].pd);
        }
        println!();
    }
    Ok(())
}
