//! Linear statistics against the largest eigenvalue.

use wigner_lab::ensemble::EntryDistribution;
use wigner_lab::harness::map_replicas;
use wigner_lab::spectral::{edge_statistics, lss, TestFunction};
use wigner_lab::stats::independence_test;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = TestFunction::monomial(3);
    let n = 150;
    let pairs = map_replicas(&EntryDistribution::uniform(), n, 600, 5, 0, |_, s| {
        Ok((lss(s, &g), edge_statistics(s, 1)?[0]))
    })?;
    let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let res = independence_test(&x, &y)?;
    println!("Tr W^3 vs s_1 at n={n}: {res:?}");

    // A dependent pair for contrast.
    let top: Vec<f64> = y.iter().map(|s| s * s).collect();
    println!("s_1^2 vs s_1:           {:?}", independence_test(&top, &y)?);
    Ok(())
}
