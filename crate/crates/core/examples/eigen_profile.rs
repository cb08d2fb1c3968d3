//! Mean sorted eigenvalues of R and R' under noise only and under signal plus
//! noise, printed as the same CSV the `eigs` command writes.
//!
//!     cargo run --release --example eigen_profile -- [p] [snr_db]

use overlap_sense::cli_io::{eigen_profile, CommandKind, RunConfig};

fn main() -> overlap_sense::Result<()> {
    let mut cfg = RunConfig::defaults(CommandKind::Eigs);
    let mut args = std::env::args().skip(1);
    if let Some(p) = args.next() {
        cfg.overlaps = vec![p.parse().expect("overlap p")];
    }
    if let Some(snr) = args.next() {
        cfg.snr_db = vec![snr.parse().expect("SNR in dB")];
    }
    cfg.validate(CommandKind::Eigs)?;

    let profile = eigen_profile(&cfg)?;
    println!(
        "# M={} N={} p={} SNR={} dB, {} realizations",
        cfg.sensors, cfg.samples, profile.overlap, profile.snr_db, profile.realizations
    );
    print!("{}", profile.to_csv().as_str());
    Ok(())
}
