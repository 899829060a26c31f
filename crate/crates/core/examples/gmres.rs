//! GMRES on the integration matrix with the residual-polynomial roots at
//! selected steps.

use kscope::c64;
use kscope::gallery;
use kscope::krylov::{gmres_run, GmresOptions};

fn main() -> kscope::error::Result<()> {
    let n = 64;
    let a = gallery::integration_matrix(2.5, n)?.matrix;
    let b = vec![c64::new(1.0, 0.0); n];
    let x0 = vec![c64::new(0.0, 0.0); n];
    let opts = GmresOptions {
        tol: 1e-12,
        maxit: 40,
        keep_solution: true,
        harmonic: true,
    };
    let h = gmres_run(&a, &b, &x0, &opts)?;
    for (k, r) in h.relative_residuals().iter().enumerate().step_by(4) {
        println!("k = {k:>2}  ||r_k||/||r_0|| = {r:.3e}");
    }
    println!("converged at {:?}", h.converged_at);
    for k in [2, 4] {
        let roots: Vec<String> = h.residual_poly_roots[k]
            .iter()
            .map(|z| format!("{:.4}{:+.4}i", z.re, z.im))
            .collect();
        println!("harmonic Ritz values at k = {k}: {}", roots.join(", "));
    }
    Ok(())
}
