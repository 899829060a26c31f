//! Spectral projectors of the fold example and the localized bound they feed.

use kscope::c64;
use kscope::gallery::{self, Spacing};
use kscope::linalg::{apply_matrix_polynomial, eigen_full, poly_from_roots, two_norm};
use kscope::projectors::{
    build_projectors, ew_condition_sum, theorem_gensp_rhs, SpectralPartition,
};

fn main() -> kscope::error::Result<()> {
    let a = gallery::example_e_fold(1e-4, 12, Spacing::Equispaced)?.matrix;
    let spec = eigen_full(&a)?;
    println!("kappa(V) = {:.4e}", spec.kappa_v());

    // split the spectrum at its midpoint
    let partition = SpectralPartition::split_by(&spec, |z| z.re < 1.5)?;
    let pset = build_projectors(&a, &spec, &partition)?;
    for (j, g) in pset.groups.iter().enumerate() {
        println!(
            "group {j}: {} eigenvalues, ||P|| = {:.4e}",
            g.indices.len(),
            g.norm_p
        );
    }

    let p = poly_from_roots(&[c64::new(1.25, 0.0), c64::new(1.75, 0.0)]);
    println!(
        "||p(A)||                  = {:.4e}",
        two_norm(&apply_matrix_polynomial(&p, &a)?)
    );
    println!(
        "sum ||P_j|| ||p(U*AU)||   = {:.4e}",
        theorem_gensp_rhs(&pset, &p)?
    );
    println!(
        "sum kappa(l_j) |p(l_j)|   = {:.4e}",
        ew_condition_sum(&spec, &p)?
    );
    Ok(())
}
