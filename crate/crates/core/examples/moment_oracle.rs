//! Exact moments of small Wigner matrices by enumeration.

use wigner_lab::ensemble::EntryDistribution;
use wigner_lab::moments::{
    class_contributions, exact_joint_centered, exact_joint_split, MomentTable, OracleMethod,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("dist        n  k   direct          classes");
    for dist in ["gaussian", "rademacher", "uniform"] {
        let table = MomentTable::for_distribution(&EntryDistribution::from_name(dist)?);
        for (n, k) in [(3, 4), (4, 6)] {
            let d = OracleMethod::Direct.evaluate(n, k, &table)?;
            let c = OracleMethod::Classes.evaluate(n, k, &table)?;
            println!("{dist:<10} {n:>2} {k:>2}   {d:<15.12} {c:<15.12}");
        }
    }

    let g = MomentTable::for_distribution(&EntryDistribution::gaussian());
    println!(
        "\nE[(Tr W^2 - E)^2] at n=2: {}",
        exact_joint_centered(2, &[2, 2], &g)?
    );
    let split = exact_joint_split(3, &[2], &[4], &g)?;
    println!(
        "Cov(Tr W^2, Tr W^4) at n=3: {split:?}, total {}",
        split.total()
    );

    println!("\nnonzero class contributions to E[Tr W^4] at n=3");
    for (class, v) in class_contributions(3, 4, &g)? {
        if v != 0.0 {
            println!("  {class:<12} {v:.6}");
        }
    }
    Ok(())
}
