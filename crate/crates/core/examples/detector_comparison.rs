//! Compares the four eigenvalue detectors on shared trials and reports the
//! AUC gap between each pair with a paired bootstrap standard error.
//!
//!     cargo run --release --example detector_comparison -- [p] [trials]

use overlap_sense::montecarlo::{auc_concordance, paired_auc_comparison};
use overlap_sense::*;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let p: usize = args.next().map_or(1, |v| v.parse().expect("overlap p"));
    let trials: usize = args.next().map_or(2_000, |v| v.parse().expect("trial count"));

    let scenario = ScenarioConfig::default();
    let detectors: Vec<DetectorKind> = DetectorName::ALL
        .iter()
        .map(|d| d.with_noise_variance(scenario.noise_variance))
        .collect();
    let seed = 3;
    let h0 = run_paired(&scenario, Hypothesis::H0, &[p], &detectors, trials, seed)?;
    let h1 = run_paired(&scenario, Hypothesis::H1, &[p], &detectors, trials, seed)?;

    println!("p={p}, SNR={} dB, {trials} trials", scenario.snr_db());
    for (i, d) in detectors.iter().enumerate() {
        println!("{:>5}  AUC {:.4}", d.name(), auc_concordance(h0.get(0, i), h1.get(0, i))?);
    }
    println!();
    for a in 0..detectors.len() {
        for b in (a + 1)..detectors.len() {
            let c = paired_auc_comparison(
                h0.get(0, a),
                h1.get(0, a),
                h0.get(0, b),
                h1.get(0, b),
                200,
                seed,
            )?;
            println!(
                "{:>5} - {:<5} {:+.4}  (SE {:.4}, z {:+.1})",
                detectors[a].name(),
                detectors[b].name(),
                c.difference,
                c.se,
                c.z()
            );
        }
    }
    Ok(())
}
