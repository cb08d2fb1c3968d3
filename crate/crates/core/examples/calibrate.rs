//! Calibrates thresholds for a target false-alarm rate and checks them on
//! fresh noise-only trials.
//!
//!     cargo run --release --example calibrate -- [pfa] [trials]

use overlap_sense::montecarlo::calibration_seed;
use overlap_sense::*;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let pfa: f64 = args.next().map_or(0.1, |v| v.parse().expect("false-alarm rate"));
    let trials: usize = args.next().map_or(5_000, |v| v.parse().expect("trial count"));

    let scenario = ScenarioConfig::default();
    let overlaps = [1, 2, 3];
    let detectors: Vec<DetectorKind> = DetectorName::ALL
        .iter()
        .map(|d| d.with_noise_variance(scenario.noise_variance))
        .collect();
    let seed = 2024;
    let calib = run_paired(
        &scenario,
        Hypothesis::H0,
        &overlaps,
        &detectors,
        trials,
        calibration_seed(seed),
    )?;
    let fresh = run_paired(&scenario, Hypothesis::H0, &overlaps, &detectors, trials, seed)?;

    println!("target Pf {pfa}, {trials} calibration and {trials} validation trials");
    println!("detector  p        gamma  empirical Pf");
    for (di, d) in detectors.iter().enumerate() {
        for (pi, p) in overlaps.iter().enumerate() {
            let gamma = calibrate_threshold(calib.get(pi, di), pfa)?;
            let pf = estimate_pd(fresh.get(pi, di), gamma)?;
            println!("{:>8} {p:>2} {gamma:>12.6} {pf:>13.4}", d.name());
        }
    }
    Ok(())
}
