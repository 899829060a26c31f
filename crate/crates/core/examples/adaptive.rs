//! Matrix-free bound estimates from the Arnoldi Hessenberg matrix, checked
//! against the Ritz certificates.

use kscope::adaptive::{estimate_from_iteration, EstimateOptions, EstimateSource};
use kscope::gallery;
use kscope::krylov::{arnoldi, random_unit_vector, trial_rng};
use kscope::sets::GridBox;

fn main() -> kscope::error::Result<()> {
    let a = gallery::integration_matrix(2.5, 64)?.matrix;
    let mut rng = trial_rng(0, 0);
    let dec = arnoldi(&a, &random_unit_vector(64, &mut rng), 16)?;
    for k in [4, 8, 16] {
        let opts = EstimateOptions {
            source: EstimateSource::RectHtilde,
            bbox: Some(GridBox::new(-0.5, 2.5, -1.5, 1.5)?),
            resolution: 80,
            matrix: None,
        };
        let est = estimate_from_iteration(&dec, k, &[1e-2, 1e-4, 1e-6], 30, &opts)?;
        let (h, harmonic) = est.epsilon_markers;
        println!("k = {k}: h = {h:.3e}, harmonic radius = {harmonic:.3e}");
        for c in &est.curves {
            println!(
                "  eps = {:.0e}: estimate at k = 30 is {:.3e}",
                c.epsilon.unwrap_or(f64::NAN),
                c.values[30]
            );
        }
        let ok = est.ritz_certificates.iter().filter(|c| c.satisfied).count();
        println!(
            "  {ok}/{} Ritz certificates satisfied",
            est.ritz_certificates.len()
        );
    }
    Ok(())
}
