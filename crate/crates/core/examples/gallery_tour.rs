//! Builds every gallery matrix at its defaults and prints a one-line summary.

use std::collections::BTreeMap;

use kscope::gallery;
use kscope::linalg::eigen_full;
use kscope::sets::{fov_boundary, FOV_ANGLES};

fn main() -> kscope::error::Result<()> {
    println!(
        "{:<16} {:>4} {:>12} {:>12} {:>10}",
        "name", "n", "||A||", "kappa(V)", "min Re W"
    );
    for (name, _) in gallery::NAMES {
        let e = gallery::build(name, &BTreeMap::new())?;
        let spec = eigen_full(&e.matrix)?;
        let fov = fov_boundary(&e.matrix, FOV_ANGLES)?;
        println!(
            "{:<16} {:>4} {:>12.4e} {:>12.4e} {:>10.3e}",
            name,
            e.matrix.rows(),
            spec.norm_a,
            spec.kappa_v(),
            fov.min_real_part
        );
    }
    Ok(())
}
