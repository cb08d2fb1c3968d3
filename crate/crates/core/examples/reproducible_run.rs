//! Runs the `roc` command into a directory, then reruns it from the written
//! manifest on a different number of threads and compares the outputs.
//!
//!     cargo run --release --example reproducible_run -- [out_dir]

use std::path::{Path, PathBuf};

use overlap_sense::cli_io::{execute, CommandKind, RunConfig, RunManifest, MANIFEST_FILE};

fn run_on(threads: usize, cfg: &RunConfig, out: &Path) -> overlap_sense::Result<RunManifest> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(|| execute(CommandKind::Roc, cfg, out))
}

fn main() -> overlap_sense::Result<()> {
    let root = std::env::args()
        .nth(1)
        .map_or_else(|| std::env::temp_dir().join("overlap-sense-demo"), PathBuf::from);
    let mut cfg = RunConfig::defaults(CommandKind::Roc);
    cfg.trials = 1_000;
    cfg.overlaps = vec![1, 2, 3];

    let first = root.join("first");
    let manifest = run_on(1, &cfg, &first)?;
    println!("wrote {} files in {:.2} s", manifest.outputs.len(), manifest.duration_seconds);

    let echoed = RunManifest::read(&first.join(MANIFEST_FILE))?;
    let second = root.join("second");
    run_on(4, &echoed.config, &second)?;

    for name in ["roc.csv", "auc.json"] {
        let a = std::fs::read(first.join(name)).expect("first run output");
        let b = std::fs::read(second.join(name)).expect("second run output");
        println!("{name}: {} bytes, identical: {}", a.len(), a == b);
    }
    Ok(())
}
