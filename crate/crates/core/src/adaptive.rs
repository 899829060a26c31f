//! Mid-iteration estimates from the pseudospectra of `H_k` and `H̃_k`, and
//! the inclusion certificates that tie them to `A`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{bound_psa_from_contour, BoundCurve};
use crate::error::Result;
use crate::krylov::{harmonic_ritz_values, ritz_values, ArnoldiDecomposition};
use crate::linalg::{
    c64, rect_shifted_smin, singular_values, two_norm, ComplexMatrix, ShiftedSmin,
};
use crate::sets::{
    extract_contour, pseudospectrum_grid, pseudospectrum_grid_rect, Contour, GridBox, RegionGrid,
};

/// Absolute slack for the inclusion checks.
pub const INCLUSION_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EstimateSource {
    /// `σ_ε(H_k)`.
    SquareHk,
    /// `σ_ε(H̃_k)`, contained in `σ_ε(A)`.
    RectHtilde,
}

/// `s_min(θI - A) <= epsilon_bound` for a Ritz or harmonic Ritz value `θ`.
#[derive(Debug, Clone, Serialize)]
pub struct RitzCertificate {
    pub theta: c64,
    pub harmonic: bool,
    /// Against `A` in certificate mode, against `H̃_k` in matrix-free mode.
    pub smin_at_theta: f64,
    pub epsilon_bound: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdaptiveEstimate {
    pub at_iteration: usize,
    pub source: EstimateSource,
    /// (PSA)-form curves, all flagged `estimate`.
    pub curves: Vec<BoundCurve>,
    pub contours: Vec<Contour>,
    pub ritz_certificates: Vec<RitzCertificate>,
    /// `h_{k+1,k}` and `h_{k+1,k} + h_{k+1,k}^2/s_min(H_k)`.
    pub epsilon_markers: (f64, f64),
    #[serde(skip)]
    pub grid: RegionGrid,
}

#[derive(Debug, Clone)]
pub struct EstimateOptions<'a> {
    pub source: EstimateSource,
    /// Grid box; defaults to the padded Ritz-value box.
    pub bbox: Option<GridBox>,
    pub resolution: usize,
    /// Full matrix for certificate mode; `None` is matrix-free mode.
    pub matrix: Option<&'a ComplexMatrix>,
}

/// (PSA)-form estimates at iteration `k` for every `eps` whose contour exists
/// on the grid, with Ritz certificates.
pub fn estimate_from_iteration(
    dec: &ArnoldiDecomposition,
    k: usize,
    eps_list: &[f64],
    kmax: usize,
    opts: &EstimateOptions,
) -> Result<AdaptiveEstimate> {
    let hk = dec.h_square(k)?;
    let ht = dec.h_rect(k)?;
    let h = dec.h_next(k)?;
    let ritz = ritz_values(dec, k)?;
    let bbox = match opts.bbox {
        Some(b) => b,
        None => GridBox::auto(
            &ritz,
            two_norm(&ht),
            eps_list.iter().copied().fold(0.0, f64::max),
        )?,
    };
    let grid = match opts.source {
        EstimateSource::SquareHk => {
            pseudospectrum_grid(&hk, bbox, opts.resolution, opts.resolution)?
        }
        EstimateSource::RectHtilde => {
            pseudospectrum_grid_rect(&ht, bbox, opts.resolution, opts.resolution)?
        }
    };
    let (lo, hi) = (grid.min_value(), grid.max_value());
    let contours: Vec<Contour> = eps_list
        .iter()
        .filter(|&&e| e > lo && e < hi)
        .map(|&e| extract_contour(&grid, e))
        .collect::<Result<_>>()?;
    let curves: Vec<BoundCurve> = contours
        .par_iter()
        .map(|c| {
            bound_psa_from_contour(c, kmax).map(|mut b| {
                b.estimate = true;
                b.notes = format!(
                    "estimate from {:?} at k = {k}; L/(2 pi eps) = {:e}. {}",
                    opts.source,
                    c.length / (2.0 * PI * c.epsilon),
                    b.notes
                );
                b
            })
        })
        .collect::<Result<_>>()?;

    let s_hk = singular_values(&hk).last().copied().unwrap_or(0.0);
    let harmonic_bound = if s_hk > 0.0 {
        h + h * h / s_hk
    } else {
        f64::INFINITY
    };
    let mut certs = Vec::new();
    let full = opts.matrix.map(ShiftedSmin::new).transpose()?;
    let norm_scale = opts.matrix.map_or_else(|| two_norm(&ht), two_norm);
    let smin_at = |z: c64| match &full {
        Some(s) => s.eval(z),
        None => rect_shifted_smin(&ht, z),
    };
    let mut push = |theta: c64, harmonic: bool, bound: f64| {
        let s = smin_at(theta);
        certs.push(RitzCertificate {
            theta,
            harmonic,
            smin_at_theta: s,
            epsilon_bound: bound,
            satisfied: s <= bound * (1.0 + 1e-8) + 1e-12 * norm_scale,
        });
    };
    for &t in &ritz {
        push(t, false, h);
    }
    if let Ok(hr) = harmonic_ritz_values(dec, k) {
        for t in hr {
            push(t, true, harmonic_bound);
        }
    }
    Ok(AdaptiveEstimate {
        at_iteration: k,
        source: opts.source,
        curves,
        contours,
        ritz_certificates: certs,
        epsilon_markers: (h, harmonic_bound),
        grid,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InclusionRule {
    /// `s_min(zĨ_{j+1} - H̃_{j+1}) <= s_min(zĨ_j - H̃_j)`.
    Monotone,
    /// `s_min(zĨ_j - H̃_j) <= s_min(zI - H_j) + h_{j+1,j}`.
    SquareGap,
}

#[derive(Debug, Clone, Serialize)]
pub struct InclusionViolation {
    pub rule: InclusionRule,
    pub step: usize,
    pub z: c64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InclusionReport {
    pub checks: usize,
    pub violations: Vec<InclusionViolation>,
}

/// Checks the nested inclusions of the rectangular pseudospectra across all
/// available steps at every sample point.
pub fn nested_inclusion_check(
    dec: &ArnoldiDecomposition,
    points: &[c64],
) -> Result<InclusionReport> {
    let steps = dec.steps();
    let per_step: Vec<(Vec<f64>, Vec<f64>, f64)> = (1..=steps)
        .into_par_iter()
        .map(|j| {
            let ht = dec.h_rect(j)?;
            let sq = ShiftedSmin::new(&dec.h_square(j)?)?;
            let rect: Vec<f64> = points.iter().map(|&z| rect_shifted_smin(&ht, z)).collect();
            let square: Vec<f64> = points.iter().map(|&z| sq.eval(z)).collect();
            Ok((rect, square, dec.h_next(j)?))
        })
        .collect::<Result<_>>()?;
    let mut violations = Vec::new();
    let mut checks = 0;
    for (idx, (rect, square, h)) in per_step.iter().enumerate() {
        let j = idx + 1;
        for (i, &z) in points.iter().enumerate() {
            checks += 1;
            if rect[i] > square[i] + h + INCLUSION_SLACK {
                violations.push(InclusionViolation {
                    rule: InclusionRule::SquareGap,
                    step: j,
                    z,
                    lhs: rect[i],
                    rhs: square[i] + h,
                });
            }
            if let Some((next, _, _)) = per_step.get(idx + 1) {
                checks += 1;
                if next[i] > rect[i] + INCLUSION_SLACK {
                    violations.push(InclusionViolation {
                        rule: InclusionRule::Monotone,
                        step: j,
                        z,
                        lhs: next[i],
                        rhs: rect[i],
                    });
                }
            }
        }
    }
    Ok(InclusionReport { checks, violations })
}
