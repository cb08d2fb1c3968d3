//! ROC curves of one detector for every overlap p at a fixed SNR, summarized
//! by AUC and by Pd at Pf = 0.1. All overlaps are evaluated on the same
//! received matrices.
//!
//!     cargo run --release --example roc_overlap -- [rlrt|glrt|mme|eme] [trials]

use overlap_sense::montecarlo::sweep_overlap_paired;
use overlap_sense::*;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let detector: DetectorName = args.next().as_deref().unwrap_or("rlrt").parse()?;
    let trials: usize = args.next().map_or(2_000, |t| t.parse().expect("trial count"));

    let scenario = ScenarioConfig::default();
    let overlaps: Vec<usize> = (1..scenario.num_sensors).collect();
    let curves = sweep_overlap_paired(
        &scenario,
        &overlaps,
        &[detector.with_noise_variance(scenario.noise_variance)],
        trials,
        42,
    )?;

    println!(
        "{detector} at M={} N={} SNR={} dB, {trials} trials per hypothesis",
        scenario.num_sensors,
        scenario.num_samples,
        scenario.snr_db()
    );
    println!(" p     AUC  Pd@Pf=0.1");
    for c in &curves {
        println!("{:>2}  {:.4}     {:.4}", c.overlap, c.curve.auc, c.curve.pd_at(0.1));
    }
    Ok(())
}
