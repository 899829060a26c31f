//! Convergence bounds as per-iteration curves `C m_k`, where `m_k` is a
//! constrained minimax value over a set and `C` the set's constant.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix, SpectralData};
use crate::minimax::{boundary_sample_count, minimax_curve, weighted_l2_min, PointGroup};
use crate::projectors::ProjectorSet;
use crate::sets::{
    extract_contour, fov_boundary, pseudospectrum_grid, CgRegion, Contour, FovBoundary, GridBox,
    RegionGrid,
};

pub const C_FOV: f64 = 1.0 + std::f64::consts::SQRT_2;
/// Conjectured optimal field-of-values constant.
pub const C_FOV_CONJECTURE: f64 = 2.0;
/// `3 + 2√3`.
pub const C_CG: f64 = 6.464_101_615_137_754;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BoundKind {
    EV,
    EVprime,
    FOV,
    FOVprime,
    PSA,
    PSAprime,
    PSAdoubleprime,
    CG,
}

impl BoundKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundKind::EV => "EV",
            BoundKind::EVprime => "EVprime",
            BoundKind::FOV => "FOV",
            BoundKind::FOVprime => "FOVprime",
            BoundKind::PSA => "PSA",
            BoundKind::PSAprime => "PSAprime",
            BoundKind::PSAdoubleprime => "PSAdoubleprime",
            BoundKind::CG => "CG",
        }
    }
}

/// `values[k]` bounds `||r_k||/||r_0||` for `k = 0..=kmax` when `applicable`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundCurve {
    pub kind: BoundKind,
    pub constant: f64,
    pub epsilon: Option<f64>,
    pub values: Vec<f64>,
    pub applicable: bool,
    /// Built from Arnoldi data rather than from `A`; not a bound.
    pub estimate: bool,
    pub notes: String,
}

impl BoundCurve {
    /// Inapplicable curve held at 1.
    pub fn flat(
        kind: BoundKind,
        constant: f64,
        epsilon: Option<f64>,
        kmax: usize,
        notes: String,
    ) -> Self {
        Self {
            kind,
            constant,
            epsilon,
            values: vec![1.0; kmax + 1],
            applicable: false,
            estimate: false,
            notes,
        }
    }

    pub fn kmax(&self) -> usize {
        self.values.len() - 1
    }

    pub fn at(&self, k: usize) -> f64 {
        self.values[k.min(self.values.len() - 1)]
    }

    pub const CSV_HEADER: &'static str = "kind,epsilon,constant,k,value,applicable,estimate\n";

    /// Rows for the bound CSV, without header.
    pub fn csv_rows(&self) -> String {
        let eps = self.epsilon.map(|e| format!("{e:e}")).unwrap_or_default();
        let mut s = String::new();
        for (k, v) in self.values.iter().enumerate() {
            s.push_str(&format!(
                "{},{},{:e},{},{:.17e},{},{}\n",
                self.kind.as_str(),
                eps,
                self.constant,
                k,
                v,
                self.applicable,
                self.estimate
            ));
        }
        s
    }
}

/// CSV of several curves with a shared header.
pub fn curves_to_csv(curves: &[BoundCurve]) -> String {
    let mut s = String::from(BoundCurve::CSV_HEADER);
    for c in curves {
        s.push_str(&c.csv_rows());
    }
    s
}

/// `min Σ_g w_g max_g |p|` for every degree, with weights normalized so the
/// largest is 1 and restored afterwards.
fn weighted_curve(groups: Vec<PointGroup>, kmax: usize) -> Result<Vec<f64>> {
    let wmax = groups.iter().map(|g| g.weight).fold(0.0, f64::max);
    if wmax == 0.0 {
        return Ok(vec![0.0; kmax + 1]);
    }
    let normalized: Vec<PointGroup> = groups
        .into_iter()
        .filter(|g| g.weight > 0.0)
        .map(|g| PointGroup {
            weight: g.weight / wmax,
            points: g.points,
        })
        .collect();
    Ok(minimax_curve(&normalized, kmax)?
        .into_iter()
        .map(|r| r.value * wmax)
        .collect())
}

fn scaled(constant: f64, m: Vec<f64>) -> Vec<f64> {
    m.into_iter().map(|v| constant * v).collect()
}

/// `κ(V) min max_{λ ∈ σ(A)} |p(λ)|`.
pub fn bound_ev(spec: &SpectralData, kmax: usize) -> Result<BoundCurve> {
    let kv = spec.kappa_v();
    if !kv.is_finite() {
        return Ok(BoundCurve::flat(
            BoundKind::EV,
            f64::INFINITY,
            None,
            kmax,
            "eigenvector matrix is singular".into(),
        ));
    }
    let m = weighted_curve(
        vec![PointGroup {
            weight: 1.0,
            points: spec.eigenvalues.clone(),
        }],
        kmax,
    )?;
    Ok(BoundCurve {
        kind: BoundKind::EV,
        constant: kv,
        epsilon: None,
        values: scaled(kv, m),
        applicable: true,
        estimate: false,
        notes: "constant kappa(V); minimax over the eigenvalues".into(),
    })
}

/// `√n min ||p(Λ) c||_2` with `c_j = κ(λ_j)`.
pub fn bound_ev_prime(spec: &SpectralData, kmax: usize) -> Result<BoundCurve> {
    let n = spec.eigenvalues.len();
    let root_n = (n as f64).sqrt();
    if spec.has_repeated() || spec.defective {
        return Ok(BoundCurve::flat(
            BoundKind::EVprime,
            root_n,
            None,
            kmax,
            "repeated eigenvalues: eigenvalue condition numbers undefined".into(),
        ));
    }
    let mut values = Vec::with_capacity(kmax + 1);
    let mut best = f64::INFINITY;
    for k in 0..=kmax {
        best = best.min(weighted_l2_min(&spec.eigenvalues, &spec.kappa_lambda, k)?);
        values.push(root_n * best);
    }
    Ok(BoundCurve {
        kind: BoundKind::EVprime,
        constant: root_n,
        epsilon: None,
        values,
        applicable: true,
        estimate: false,
        notes: "weighted least squares with eigenvalue condition numbers".into(),
    })
}

fn fov_constant(conjecture: bool) -> f64 {
    if conjecture {
        C_FOV_CONJECTURE
    } else {
        C_FOV
    }
}

fn origin_in_fov(fov: &FovBoundary) -> bool {
    fov.contains(c64::new(0.0, 0.0), 0.0)
}

/// `C_fov min max_{z ∈ W(A)} |p(z)|` sampled on the outer FOV polygon.
pub fn bound_fov(fov: &FovBoundary, kmax: usize, conjecture: bool) -> Result<BoundCurve> {
    let c = fov_constant(conjecture);
    if origin_in_fov(fov) {
        return Ok(BoundCurve::flat(
            BoundKind::FOV,
            c,
            None,
            kmax,
            "origin in W(A)".into(),
        ));
    }
    let m = weighted_curve(
        vec![PointGroup {
            weight: 1.0,
            points: fov.boundary_samples(boundary_sample_count(kmax)),
        }],
        kmax,
    )?;
    Ok(BoundCurve {
        kind: BoundKind::FOV,
        constant: c,
        epsilon: None,
        values: scaled(c, m),
        applicable: true,
        estimate: false,
        notes: format!("{} support angles", fov.angles.len()),
    })
}

/// `C_fov min Σ_j ||P_j|| max_{W(U_j* A U_j)} |p|`.
pub fn bound_fov_prime(
    pset: &ProjectorSet,
    kmax: usize,
    angles: usize,
    conjecture: bool,
) -> Result<BoundCurve> {
    let c = fov_constant(conjecture);
    let fovs: Vec<FovBoundary> = pset
        .groups
        .par_iter()
        .map(|g| fov_boundary(&g.compressed, angles))
        .collect::<Result<_>>()?;
    let bad: Vec<usize> = (0..fovs.len())
        .filter(|&j| origin_in_fov(&fovs[j]))
        .collect();
    if !bad.is_empty() {
        return Ok(BoundCurve::flat(
            BoundKind::FOVprime,
            c,
            None,
            kmax,
            format!("origin in W(U_j*AU_j) for groups {bad:?}"),
        ));
    }
    let count = boundary_sample_count(kmax);
    let groups = pset
        .groups
        .iter()
        .zip(&fovs)
        .map(|(g, f)| PointGroup {
            weight: g.norm_p,
            points: f.boundary_samples(count),
        })
        .collect();
    let m = weighted_curve(groups, kmax)?;
    Ok(BoundCurve {
        kind: BoundKind::FOVprime,
        constant: c,
        epsilon: None,
        values: scaled(c, m),
        applicable: true,
        estimate: false,
        notes: format!("{} groups, ||P_j|| = {:?}", pset.groups.len(), pset.norms()),
    })
}

fn contour_note(c: &Contour) -> String {
    if c.touches_boundary {
        "contour touches the grid boundary: L is a lower estimate".into()
    } else {
        String::new()
    }
}

/// `L(Γ_ε)/(2πε) min max_{z ∈ Γ_ε} |p(z)|` for an extracted contour. A
/// certified contour uses its measured level in place of `ε` and is
/// inapplicable when it misses an eigenvalue.
pub fn bound_psa_from_contour(contour: &Contour, kmax: usize) -> Result<BoundCurve> {
    let eps = contour.epsilon;
    let c = contour.length / (2.0 * PI * contour.effective_level());
    if contour.encloses_spectrum == Some(false) {
        return Ok(BoundCurve::flat(
            BoundKind::PSA,
            c,
            Some(eps),
            kmax,
            "contour misses an eigenvalue: grid too coarse for this eps".into(),
        ));
    }
    if contour.encloses_origin {
        return Ok(BoundCurve::flat(
            BoundKind::PSA,
            c,
            Some(eps),
            kmax,
            "origin in the pseudospectrum".into(),
        ));
    }
    let m = weighted_curve(
        vec![PointGroup {
            weight: 1.0,
            points: contour.samples(boundary_sample_count(kmax)),
        }],
        kmax,
    )?;
    Ok(BoundCurve {
        kind: BoundKind::PSA,
        constant: c,
        epsilon: Some(eps),
        values: scaled(c, m),
        applicable: true,
        estimate: false,
        notes: contour_note(contour),
    })
}

/// (PSA) at level `eps` of a grid of `s_min(zI - A)`, certified against `A`.
pub fn bound_psa(
    a: &ComplexMatrix,
    eigenvalues: &[c64],
    grid: &RegionGrid,
    eps: f64,
    kmax: usize,
) -> Result<BoundCurve> {
    bound_psa_from_contour(&extract_contour(grid, eps)?.certify(a, eigenvalues)?, kmax)
}

/// Decades `1e-1, ..., 1e-9`.
pub fn default_eps_family() -> Vec<f64> {
    (1..=9).map(|d| 10f64.powi(-d)).collect()
}

/// (PSA) for each `eps` whose contour exists on the grid.
pub fn psa_family(
    a: &ComplexMatrix,
    eigenvalues: &[c64],
    grid: &RegionGrid,
    eps: &[f64],
    kmax: usize,
) -> Result<Vec<BoundCurve>> {
    let (lo, hi) = (grid.min_value(), grid.max_value());
    eps.par_iter()
        .filter(|&&e| e > lo && e < hi)
        .map(|&e| bound_psa(a, eigenvalues, grid, e, kmax))
        .collect()
}

/// `Σ_j ||P_j|| L(Γ_ε(U_j*AU_j))/(2πε) max |p|`, each group on its own grid.
pub fn bound_psa_prime(
    pset: &ProjectorSet,
    eps: f64,
    kmax: usize,
    resolution: usize,
) -> Result<BoundCurve> {
    let contours: Vec<Contour> = pset
        .groups
        .par_iter()
        .map(|g| {
            let norm = crate::linalg::two_norm(&g.compressed);
            let bbox = GridBox::covering(&g.compressed, &g.eigenvalues, norm, eps)?;
            let grid = pseudospectrum_grid(&g.compressed, bbox, resolution, resolution)?;
            extract_contour(&grid, eps)?.certify(&g.compressed, &g.eigenvalues)
        })
        .collect::<Result<_>>()?;
    let weights: Vec<f64> = pset
        .groups
        .iter()
        .zip(&contours)
        .map(|(g, c)| g.norm_p * c.length / (2.0 * PI * c.effective_level()))
        .collect();
    let constant: f64 = weights.iter().sum();
    let missed: Vec<usize> = (0..contours.len())
        .filter(|&j| contours[j].encloses_spectrum == Some(false))
        .collect();
    if !missed.is_empty() {
        return Ok(BoundCurve::flat(
            BoundKind::PSAprime,
            constant,
            Some(eps),
            kmax,
            format!(
                "contours of groups {missed:?} miss an eigenvalue: grid too coarse for this eps"
            ),
        ));
    }
    let bad: Vec<usize> = (0..contours.len())
        .filter(|&j| contours[j].encloses_origin)
        .collect();
    if !bad.is_empty() {
        return Ok(BoundCurve::flat(
            BoundKind::PSAprime,
            constant,
            Some(eps),
            kmax,
            format!("origin in the pseudospectrum of groups {bad:?}"),
        ));
    }
    let count = boundary_sample_count(kmax);
    let groups = contours
        .iter()
        .zip(&weights)
        .map(|(c, &w)| PointGroup {
            weight: w,
            points: c.samples(count),
        })
        .collect();
    let m = weighted_curve(groups, kmax)?;
    let touching = contours.iter().any(|c| c.touches_boundary);
    Ok(BoundCurve {
        kind: BoundKind::PSAprime,
        constant,
        epsilon: Some(eps),
        values: m,
        applicable: true,
        estimate: false,
        notes: format!(
            "weights ||P_j|| L_j/(2 pi eps) = {weights:?}{}",
            if touching {
                "; a contour touches its grid boundary"
            } else {
                ""
            }
        ),
    })
}

/// One curve for (PSA''): closed loops sharing the level `epsilon`.
#[derive(Debug, Clone, Serialize)]
pub struct PsaCurve {
    pub loops: Vec<Vec<c64>>,
    pub epsilon: f64,
}

impl PsaCurve {
    pub fn from_contour(c: &Contour) -> Self {
        Self {
            loops: c.loops.clone(),
            epsilon: c.epsilon,
        }
    }

    fn as_contour(&self) -> Contour {
        let length = self
            .loops
            .iter()
            .map(|l| crate::geometry::polyline_length(l, false))
            .sum();
        let origin = c64::new(0.0, 0.0);
        Contour {
            epsilon: self.epsilon,
            encloses_origin: self
                .loops
                .iter()
                .any(|l| crate::geometry::winding_number(&l[..l.len() - 1], origin) != 0),
            loops: self.loops.clone(),
            length,
            touches_boundary: false,
            certified_level: None,
            encloses_spectrum: None,
        }
    }
}

/// Relative slack when checking `s_min(zI - A) >= ε_j` on a curve.
pub const RESOLVENT_SLACK: f64 = 1e-9;

/// `Σ_j L(Γ_j)/(2πε_j) max_{Γ_j} |p|`. Each vertex of `Γ_j` must satisfy
/// `resolvent_smin(z) >= ε_j` up to `RESOLVENT_SLACK`.
pub fn bound_psa_doubleprime(
    curves: &[PsaCurve],
    kmax: usize,
    resolvent_smin: impl Fn(c64) -> f64 + Sync,
) -> Result<BoundCurve> {
    if curves.is_empty()
        || curves
            .iter()
            .any(|c| c.loops.is_empty() || c.loops.iter().any(|l| l.len() < 3))
    {
        return Err(Error::InvalidArgument(
            "each curve needs at least one closed loop".into(),
        ));
    }
    for (j, c) in curves.iter().enumerate() {
        let observed = c
            .loops
            .par_iter()
            .flat_map(|l| l.par_iter())
            .map(|&z| resolvent_smin(z))
            .reduce(|| f64::INFINITY, f64::min);
        if observed < c.epsilon * (1.0 - RESOLVENT_SLACK) {
            return Err(Error::ResolventBoundViolated {
                curve: j,
                epsilon: c.epsilon,
                observed,
            });
        }
    }
    let contours: Vec<Contour> = curves.iter().map(PsaCurve::as_contour).collect();
    let weights: Vec<f64> = contours
        .iter()
        .map(|c| c.length / (2.0 * PI * c.epsilon))
        .collect();
    let constant = weights.iter().sum();
    if contours.iter().any(|c| c.encloses_origin) {
        return Ok(BoundCurve::flat(
            BoundKind::PSAdoubleprime,
            constant,
            None,
            kmax,
            "a curve winds around the origin".into(),
        ));
    }
    let count = boundary_sample_count(kmax);
    let groups = contours
        .iter()
        .zip(&weights)
        .map(|(c, &w)| PointGroup {
            weight: w,
            points: c.samples(count),
        })
        .collect();
    let m = weighted_curve(groups, kmax)?;
    let eps: Vec<f64> = curves.iter().map(|c| c.epsilon).collect();
    Ok(BoundCurve {
        kind: BoundKind::PSAdoubleprime,
        constant,
        epsilon: (curves.len() == 1).then_some(eps[0]),
        values: m,
        applicable: true,
        estimate: false,
        notes: format!("eps_j = {eps:?}, weights L_j/(2 pi eps_j) = {weights:?}"),
    })
}

/// `(3 + 2√3) min max_{Ω_CG} |p|`.
pub fn bound_cg(cg: &CgRegion, kmax: usize) -> Result<BoundCurve> {
    let c = C_CG;
    if cg.surrounds_origin() {
        return Ok(BoundCurve::flat(
            BoundKind::CG,
            c,
            None,
            kmax,
            "region surrounds the origin".into(),
        ));
    }
    let pts = cg.boundary_samples(boundary_sample_count(kmax));
    if pts.is_empty() {
        return Err(Error::InvalidArgument(
            "empty Crouzeix-Greenbaum region".into(),
        ));
    }
    let m = weighted_curve(
        vec![PointGroup {
            weight: 1.0,
            points: pts,
        }],
        kmax,
    )?;
    Ok(BoundCurve {
        kind: BoundKind::CG,
        constant: c,
        epsilon: None,
        values: scaled(c, m),
        applicable: true,
        estimate: false,
        notes: format!("carved radius 1/mu(A^-1) = {:e}", cg.radius),
    })
}

/// Pointwise minimum over the applicable curves of a (PSA) family.
pub fn psa_envelope(curves: &[BoundCurve]) -> Result<BoundCurve> {
    let live: Vec<&BoundCurve> = curves.iter().filter(|c| c.applicable).collect();
    if live.is_empty() {
        return Err(Error::InvalidArgument(
            "envelope needs at least one applicable curve".into(),
        ));
    }
    let kmax = live.iter().map(|c| c.kmax()).min().unwrap_or(0);
    let mut values = Vec::with_capacity(kmax + 1);
    let mut winners = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let best = live
            .iter()
            .min_by(|a, b| a.values[k].total_cmp(&b.values[k]))
            .expect("nonempty");
        values.push(best.values[k]);
        winners.push(best.epsilon.unwrap_or(f64::NAN));
    }
    let last = live
        .iter()
        .find(|c| c.epsilon.unwrap_or(f64::NAN).to_bits() == winners[kmax].to_bits())
        .map_or(f64::NAN, |c| c.constant);
    Ok(BoundCurve {
        kind: live[0].kind,
        constant: last,
        epsilon: None,
        values,
        applicable: true,
        estimate: live.iter().any(|c| c.estimate),
        notes: format!("envelope; winning eps per k = {winners:?}"),
    })
}

/// Winning `ε` per `k` recorded by `psa_envelope`.
pub fn envelope_winners(env: &BoundCurve) -> Vec<f64> {
    env.notes
        .split_once("= [")
        .and_then(|(_, rest)| rest.strip_suffix(']'))
        .map(|list| list.split(", ").filter_map(|v| v.parse().ok()).collect())
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigen_full, ComplexMatrix};

    #[test]
    fn ev_exact_for_plus_minus_one() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let b = bound_ev(&eigen_full(&a).unwrap(), 3).unwrap();
        assert!(b.applicable);
        assert!((b.values[1] - 1.0).abs() < 1e-12);
        assert!(b.values[2] < 1e-12);
    }

    #[test]
    fn ev_flat_for_jordan() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let b = bound_ev(&eigen_full(&a).unwrap(), 4).unwrap();
        assert!(!b.applicable);
        assert_eq!(b.values, vec![1.0; 5]);
    }

    #[test]
    fn envelope_records_winners() {
        let mk = |eps: f64, v: Vec<f64>| BoundCurve {
            kind: BoundKind::PSA,
            constant: 1.0,
            epsilon: Some(eps),
            values: v,
            applicable: true,
            estimate: false,
            notes: String::new(),
        };
        let env =
            psa_envelope(&[mk(0.1, vec![1.0, 0.5, 0.4]), mk(0.01, vec![2.0, 0.6, 0.1])]).unwrap();
        assert_eq!(env.values, vec![1.0, 0.5, 0.1]);
        assert_eq!(envelope_winners(&env), vec![0.1, 0.1, 0.01]);
    }
}
