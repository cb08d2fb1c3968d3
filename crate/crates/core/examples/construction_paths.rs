//! Builds the combinatorial covariance R' two ways for one random data matrix
//! and shows that they agree, along with the per-sensor subgroup counts.
//!
//!     cargo run --example construction_paths -- [M] [N]

use num_complex::Complex64;
use overlap_sense::covariance::overlap_multiplicities;
use overlap_sense::*;
use rand::{Rng, SeedableRng};

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let m = args.next().unwrap_or(6);
    let n = args.next().unwrap_or(40);

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let data = (0..m * n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let x = CMatrix::from_vec(m, n, data)?;
    let r = sample_covariance(&x);

    println!("M={m} N={n}");
    println!(" p  M'   L  rank<=  max|direct-blocks|  trace(R')/trace(R)  multiplicities");
    for p in 1..m {
        let direct = build_combinatorial(&x, p)?.covariance();
        let blocks = assemble_covariance_from_blocks(&r, p)?;
        let diff = direct
            .entries()
            .as_slice()
            .iter()
            .zip(blocks.entries().as_slice())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        println!(
            "{p:>2} {:>3} {:>3} {:>7} {diff:>19.2e} {:>19.4}  {:?}",
            m + 1 - p,
            direct.dimension(),
            direct.rank_bound(),
            trace(&direct) / trace(&r),
            overlap_multiplicities(m, p)?,
        );
    }
    Ok(())
}
