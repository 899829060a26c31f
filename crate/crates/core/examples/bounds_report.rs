//! Every bound for Example D next to the GMRES residuals it must dominate.

use kscope::analysis::{compute_bounds, BoundsConfig};
use kscope::gallery;

fn main() -> kscope::error::Result<()> {
    let a = gallery::example_d(0.5, 32)?.matrix;
    let rep = compute_bounds(
        &a,
        &BoundsConfig {
            kmax: 20,
            grid: 100,
            ..Default::default()
        },
    )?;
    print!("{:>3} {:>11} {:>11}", "k", "gmres", "lower");
    let shown: Vec<_> = rep.curves.iter().filter(|c| c.applicable).collect();
    for c in &shown {
        let label = match c.epsilon {
            Some(e) => format!("{}@{e:.0e}", c.kind.as_str()),
            None => c.kind.as_str().to_string(),
        };
        print!(" {label:>13}");
    }
    println!();
    for k in (0..=20).step_by(2) {
        print!(
            "{k:>3} {:>11.3e} {:>11.3e}",
            rep.gmres_worst[k], rep.sandwich.lower[k]
        );
        for c in &shown {
            print!(" {:>13.3e}", c.values[k]);
        }
        println!();
    }
    for c in rep.curves.iter().filter(|c| !c.applicable) {
        println!("{} inapplicable: {}", c.kind.as_str(), c.notes);
    }
    Ok(())
}
