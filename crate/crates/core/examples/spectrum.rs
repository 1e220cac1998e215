//! Sample one Wigner matrix and look at its spectrum.
//!
//! cargo run --example spectrum -- 500

use wigner_lab::ensemble::{sample_wigner, semicircle_moment, EntryDistribution};
use wigner_lab::spectral::{
    edge_statistics, eigenvalues_sym, esd_kolmogorov_distance, lss, trace_powers, TestFunction,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args()
        .nth(1)
        .map(|a| a.parse())
        .transpose()?
        .unwrap_or(400);
    let w = sample_wigner(n, &EntryDistribution::gaussian(), 7)?;
    let spectrum = eigenvalues_sym(&w)?;

    println!("n = {n}");
    println!("largest eigenvalue   {:.5}", spectrum.largest());
    println!("smallest eigenvalue  {:.5}", -spectrum.negated().largest());
    println!(
        "KS distance to semicircle  {:.4}",
        esd_kolmogorov_distance(&spectrum.eigenvalues)
    );

    println!("\n k   (1/n) Tr W^k   semicircle");
    let ks: Vec<u32> = (1..=8).collect();
    for (k, t) in ks.iter().zip(trace_powers(&spectrum, &ks)) {
        println!(
            "{k:>2}   {:>12.6}   {:>10.6}",
            t / n as f64,
            semicircle_moment(*k)
        );
    }

    let s = edge_statistics(&spectrum, 3)?;
    println!("\ntop edge statistics 2 n^(2/3) (lambda_i - 1): {s:.3?}");
    let g = TestFunction::exp(12);
    println!(
        "Tr exp(W) = {:.6}, Tr of degree-12 truncation = {:.6}",
        lss(&spectrum, &g),
        lss(&spectrum, &g.truncate(12))
    );
    Ok(())
}
