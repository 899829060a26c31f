//! Constrained minimax polynomials on a disk, an interval and an
//! origin-enclosing circle.

use std::f64::consts::PI;

use kscope::c64;
use kscope::minimax::{disk_minimax, interval_minimax, minimax_on_points};

fn circle(c: c64, r: f64, m: usize) -> Vec<c64> {
    (0..m)
        .map(|j| c + c64::from_polar(r, 2.0 * PI * j as f64 / m as f64))
        .collect()
}

fn main() -> kscope::error::Result<()> {
    let (c, r) = (c64::new(1.5, 1.0), 0.9);
    let disk = circle(c, r, 400);
    let interval: Vec<c64> = (0..401)
        .map(|j| c64::new(0.5 + 2.5 * j as f64 / 400.0, 0.0))
        .collect();
    let around = circle(c64::new(0.2, -0.1), 1.0, 400);
    println!(
        "{:>3} {:>11} {:>11} {:>11} {:>11} {:>9}",
        "k", "disk", "exact", "interval", "chebyshev", "enclosing"
    );
    for k in 1..=10 {
        let d = minimax_on_points(&disk, k)?;
        let i = minimax_on_points(&interval, k)?;
        let o = minimax_on_points(&around, k)?;
        println!(
            "{k:>3} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e} {:>9.6}",
            d.value,
            disk_minimax(c, r, k),
            i.value,
            interval_minimax(0.5, 3.0, k)?,
            o.value
        );
    }
    Ok(())
}
