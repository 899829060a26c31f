//! One-call evaluation of every bound for a matrix, shared by the CLI and
//! the verification suites.

use serde::Serialize;

use crate::bounds::{
    bound_cg, bound_ev, bound_ev_prime, bound_fov, bound_fov_prime, bound_psa_doubleprime,
    bound_psa_from_contour, bound_psa_prime, default_eps_family, envelope_winners, psa_envelope,
    BoundCurve, BoundKind, PsaCurve, C_CG,
};
use crate::error::{Error, Result};
use crate::geometry::winding_number;
use crate::krylov::{
    gmres_residual_ratios, ideal_gmres_sandwich, random_unit_vector, trial_rng, GmresHistory,
    Sandwich,
};
use crate::linalg::{eigen_full, ComplexMatrix, ShiftedSmin, SpectralData};
use crate::projectors::{build_projectors, SpectralPartition, AUTO_LINK};
use crate::sets::{
    cg_region, extract_contour, fov_boundary, pseudospectrum_grid, CgRegion, Contour, FovBoundary,
    GridBox, RegionGrid, CG_GRID_SIZE, FOV_ANGLES, GRID_SIZE,
};

#[derive(Debug, Clone)]
pub struct BoundsConfig {
    pub kmax: usize,
    /// `None` selects the default decade family.
    pub eps: Option<Vec<f64>>,
    /// `None` selects the automatic box around the spectrum.
    pub bbox: Option<GridBox>,
    pub grid: usize,
    pub fov_angles: usize,
    pub cg_grid: usize,
    pub conjecture: bool,
    /// Kinds to compute; empty means all.
    pub kinds: Vec<BoundKind>,
    /// Random right-hand sides for the GMRES runs and the sandwich.
    pub trials: usize,
    pub seed: u64,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self {
            kmax: 30,
            eps: None,
            bbox: None,
            grid: GRID_SIZE,
            fov_angles: FOV_ANGLES,
            cg_grid: CG_GRID_SIZE,
            conjecture: false,
            kinds: Vec::new(),
            trials: 20,
            seed: 0,
        }
    }
}

impl BoundsConfig {
    fn wants(&self, kind: BoundKind) -> bool {
        self.kinds.is_empty() || self.kinds.contains(&kind)
    }

    fn wants_grid(&self) -> bool {
        [
            BoundKind::PSA,
            BoundKind::PSAprime,
            BoundKind::PSAdoubleprime,
        ]
        .iter()
        .any(|&k| self.wants(k))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub curves: Vec<BoundCurve>,
    pub envelope: Option<BoundCurve>,
    pub sandwich: Sandwich,
    /// Largest GMRES relative residual per `k` over the random trials.
    pub gmres_worst: Vec<f64>,
    #[serde(skip)]
    pub spectral: SpectralData,
    #[serde(skip)]
    pub fov: FovBoundary,
    #[serde(skip)]
    pub grid: Option<RegionGrid>,
    #[serde(skip)]
    pub contours: Vec<Contour>,
    #[serde(skip)]
    pub cg: Option<CgRegion>,
}

impl BoundsReport {
    pub fn curve(&self, kind: BoundKind) -> Option<&BoundCurve> {
        self.curves.iter().find(|c| c.kind == kind)
    }
}

/// The contour's loops as separate curves when none lies inside another,
/// else as one curve.
fn split_components(c: &Contour) -> Vec<PsaCurve> {
    let nested = c.loops.iter().enumerate().any(|(i, li)| {
        c.loops
            .iter()
            .enumerate()
            .any(|(j, lj)| i != j && winding_number(&lj[..lj.len() - 1], li[0]) != 0)
    });
    if nested || c.loops.len() < 2 {
        return vec![PsaCurve::from_contour(c)];
    }
    c.loops
        .iter()
        .map(|l| PsaCurve {
            loops: vec![l.clone()],
            epsilon: c.epsilon,
        })
        .collect()
}

/// Every requested bound, the ideal-GMRES sandwich and the worst observed
/// GMRES history.
pub fn compute_bounds(a: &ComplexMatrix, cfg: &BoundsConfig) -> Result<BoundsReport> {
    let n = a.require_square()?;
    let kmax = cfg.kmax;
    let spec = eigen_full(a)?;
    let fov = fov_boundary(a, cfg.fov_angles)?;
    let mut curves = Vec::new();
    if cfg.wants(BoundKind::EV) {
        curves.push(bound_ev(&spec, kmax)?);
    }
    if cfg.wants(BoundKind::EVprime) {
        curves.push(bound_ev_prime(&spec, kmax)?);
    }
    if cfg.wants(BoundKind::FOV) {
        curves.push(bound_fov(&fov, kmax, cfg.conjecture)?);
    }
    let partition = SpectralPartition::auto(&spec, AUTO_LINK);
    let pset = build_projectors(a, &spec, &partition)?;
    if cfg.wants(BoundKind::FOVprime) {
        curves.push(bound_fov_prime(
            &pset,
            kmax,
            cfg.fov_angles,
            cfg.conjecture,
        )?);
    }

    let mut grid = None;
    let mut contours = Vec::new();
    let mut envelope = None;
    if cfg.wants_grid() {
        let eps = cfg.eps.clone().unwrap_or_else(default_eps_family);
        let eps_max = eps.iter().copied().fold(0.0, f64::max);
        let bbox = match cfg.bbox {
            Some(b) => b,
            None => GridBox::covering(a, &spec.eigenvalues, spec.norm_a, eps_max)?,
        };
        let g = pseudospectrum_grid(a, bbox, cfg.grid, cfg.grid)?;
        let (lo, hi) = (g.min_value(), g.max_value());
        contours = eps
            .iter()
            .filter(|&&e| e > lo && e < hi)
            .map(|&e| extract_contour(&g, e)?.certify(a, &spec.eigenvalues))
            .collect::<Result<_>>()?;
        let family: Vec<BoundCurve> = contours
            .iter()
            .map(|c| bound_psa_from_contour(c, kmax))
            .collect::<Result<_>>()?;
        if family.iter().any(|c| c.applicable) {
            envelope = Some(psa_envelope(&family)?);
        }
        // the primed kinds use the envelope's winning eps at kmax
        let chosen = envelope
            .as_ref()
            .and_then(|e| envelope_winners(e).last().copied())
            .or_else(|| family.first().and_then(|c| c.epsilon));
        if cfg.wants(BoundKind::PSA) {
            curves.extend(family);
        }
        if let Some(e) = chosen {
            if cfg.wants(BoundKind::PSAprime) {
                curves.push(bound_psa_prime(&pset, e, kmax, cfg.grid)?);
            }
            if cfg.wants(BoundKind::PSAdoubleprime) {
                let c = contours
                    .iter()
                    .find(|c| c.epsilon == e)
                    .ok_or_else(|| Error::InvalidArgument("chosen eps has no contour".into()))?;
                if c.encloses_spectrum != Some(true) {
                    curves.push(BoundCurve::flat(
                        BoundKind::PSAdoubleprime,
                        f64::INFINITY,
                        Some(e),
                        kmax,
                        "contour misses an eigenvalue: grid too coarse for this eps".into(),
                    ));
                } else {
                    let smin = ShiftedSmin::new(a)?;
                    let pieces: Vec<PsaCurve> = split_components(c)
                        .into_iter()
                        .map(|mut p| {
                            // each piece carries the level measured on its own polygon
                            let measured = p
                                .loops
                                .iter()
                                .flat_map(|l| {
                                    l.windows(2).flat_map(|w| [w[0], 0.5 * (w[0] + w[1])])
                                })
                                .map(|z| smin.eval(z))
                                .fold(f64::INFINITY, f64::min);
                            p.epsilon = p.epsilon.min(measured);
                            p
                        })
                        .collect();
                    curves.push(bound_psa_doubleprime(&pieces, kmax, |z| smin.eval(z))?);
                }
            }
        }
        grid = Some(g);
    }

    let mut cg = None;
    if cfg.wants(BoundKind::CG) {
        match cg_region(a, &fov, cfg.cg_grid) {
            Ok(region) => {
                curves.push(bound_cg(&region, kmax)?);
                cg = Some(region);
            }
            Err(Error::SingularMatrix) => curves.push(BoundCurve {
                kind: BoundKind::CG,
                constant: C_CG,
                epsilon: None,
                values: vec![1.0; kmax + 1],
                applicable: false,
                estimate: false,
                notes: "A is singular".into(),
            }),
            Err(e) => return Err(e),
        }
    }

    let sandwich = ideal_gmres_sandwich(a, kmax, cfg.trials.max(1), cfg.seed)?;
    let runs = gmres_trials(a, kmax.min(n), cfg.trials.max(1), cfg.seed)?;
    let gmres_worst = (0..=kmax)
        .map(|k| runs.iter().map(|h| h.relative_at(k)).fold(0.0, f64::max))
        .collect();
    Ok(BoundsReport {
        curves,
        envelope,
        sandwich,
        gmres_worst,
        spectral: spec,
        fov,
        grid,
        contours,
        cg,
    })
}

/// GMRES histories for seeded random unit initial residuals.
pub fn gmres_trials(
    a: &ComplexMatrix,
    kmax: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<GmresHistory>> {
    let n = a.require_square()?;
    (0..trials)
        .map(|i| {
            let mut rng = trial_rng(seed ^ 0x5bd1_e995, i as u64);
            gmres_residual_ratios(a, &random_unit_vector(n, &mut rng), kmax, false)
        })
        .collect()
}
