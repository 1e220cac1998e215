//! Edge-length traces and the top eigenvalue across ensembles.

use wigner_lab::ensemble::EntryDistribution;
use wigner_lab::harness::{edge_boundedness_scan, edge_distribution_compare};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let gaussian = EntryDistribution::gaussian();
    let rademacher = EntryDistribution::rademacher();

    println!("   n    k   E Tr W^2k   se       E Tr W^2k+1   se");
    for row in edge_boundedness_scan(1.0, &[50, 100, 200], 300, &gaussian, 11, 0)? {
        println!(
            "{:>4} {:>4}   {:>9.4} {:>7.4}   {:>11.4} {:>7.4}",
            row.n, row.k, row.even_mean, row.even_se, row.odd_mean, row.odd_se
        );
    }

    let ks = edge_distribution_compare(&gaussian, &rademacher, 100, 500, 1, 2, 0)?;
    println!("\nKS distance of s_1, gaussian vs rademacher at n=100: {ks:.4}");
    Ok(())
}
