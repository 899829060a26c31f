//! Pseudospectral contours of the integration matrix, written as SVG.

use kscope::gallery;
use kscope::linalg::eigen_full;
use kscope::report::SetPlot;
use kscope::sets::{extract_contour, fov_boundary, pseudospectrum_grid, GridBox, FOV_ANGLES};

fn main() -> kscope::error::Result<()> {
    let a = gallery::integration_matrix(2.5, 64)?.matrix;
    let spec = eigen_full(&a)?;
    let grid = pseudospectrum_grid(&a, GridBox::new(-0.5, 2.5, -1.5, 1.5)?, 120, 120)?;
    let fov = fov_boundary(&a, FOV_ANGLES)?;

    let mut plot = SetPlot::new("integration matrix, beta = 5/2");
    plot.points = spec.eigenvalues.clone();
    let mut closed = fov.outer.clone();
    closed.push(fov.outer[0]);
    plot.add_curve("W(A)", vec![closed], true);
    for eps in [1e-2, 1e-4, 1e-6, 1e-8] {
        let c = extract_contour(&grid, eps)?.certify(&a, &spec.eigenvalues)?;
        println!(
            "eps = {eps:.0e}: {} loop(s), length {:.4}, origin inside {}, measured level {:.3e}",
            c.loops.len(),
            c.length,
            c.encloses_origin,
            c.effective_level()
        );
        plot.add_curve(&format!("eps = {eps:.0e}"), c.loops.clone(), false);
    }
    let path = std::env::temp_dir().join("kscope_pseudospectra.svg");
    std::fs::write(&path, plot.to_svg())?;
    println!("wrote {}", path.display());
    Ok(())
}
