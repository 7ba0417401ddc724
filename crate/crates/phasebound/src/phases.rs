//! Matrix phases: extreme phases, classification, full phase lists,
//! numerical-range boundary samples and sectorial rank-one factorizations.
//!
//! The extreme phases of a nonzero matrix are located by scanning the
//! rotation circle: t is a supporting angle exactly when
//! -sin(t) H + cos(t) S is PSD, and the supporting set is a single closed
//! arc [phi_max - pi, phi_min]. A 720-point grid followed by bisection pins
//! the arc endpoints; an isolated supporting angle (arc of width zero) marks
//! a phase spread of exactly pi.

use num_complex::Complex64;

use crate::cones::{self, PhaseSector, RealifiedPair};
use crate::completion::PartialMatrix;
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, ComplexVector};

const GRID_POINTS: usize = 720;
const GRID_STEP: f64 = 2.0 * std::f64::consts::PI / GRID_POINTS as f64;
/// Feasibility slack for the supporting-angle predicate on unit-normalized
/// input. Kept near machine precision so that the located arc endpoints are
/// not shifted by the membership tolerance.
const ARC_SLACK: f64 = 1e-13;
const BISECT_RESOLUTION: f64 = 1e-10;
/// Width within this distance of pi counts as the parabolic boundary case.
const PI_WIDTH_EPS: f64 = 1e-6;

/// How a matrix sits relative to the family of phase-bounded cones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// Phase spread below pi and nonsingular: the angular numerical range is
    /// pointed and excludes the origin from the numerical range.
    Sectorial,
    /// Phase spread below pi but rank deficient.
    Quasisectorial,
    /// Phase spread exactly pi; only the extreme phases are computed here.
    SemisectorialParabolic,
    /// The numerical range surrounds the origin; no phases exist.
    NonSemisectorial,
    /// The zero matrix, whose phases are unbounded by convention.
    Zero,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Sectorial => "sectorial",
            Classification::Quasisectorial => "quasisectorial",
            Classification::SemisectorialParabolic => "semisectorial-parabolic",
            Classification::NonSemisectorial => "non-semisectorial",
            Classification::Zero => "zero",
        }
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of the extreme-phase search for a nonzero matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtremePhases {
    Bounded { phi_min: f64, phi_max: f64 },
    NonSemisectorial,
}

/// Nonincreasing list of phases together with the classification and the
/// internal rotation angle used to compute them.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseList {
    pub phases: Vec<f64>,
    pub classification: Classification,
    pub reference_angle: f64,
}

/// One term of a rank-one factorization: e^{i phi} t t*.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneTerm {
    pub phi: f64,
    pub t: ComplexVector,
}

/// Smallest sector admitting every clique block of a partial matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MinimalSector {
    Sector(PhaseSector),
    /// All clique phases coincide; the cone degenerates to a single ray.
    Degenerate { angle: f64 },
}

/// -sin(t) H + cos(t) S, the supporting-angle test matrix.
fn rotation_test(p: &RealifiedPair, t: f64) -> ComplexMatrix {
    &p.h * Complex64::new(-t.sin(), 0.0) + &p.s * Complex64::new(t.cos(), 0.0)
}

fn lambda_min_at(p: &RealifiedPair, t: f64) -> f64 {
    linalg::lambda_min(&rotation_test(p, t))
}

/// Quadratic-fit ascent to the local maximum of t -> lambda_min(M(t)).
fn refine_peak(p: &RealifiedPair, start: f64, half_width: f64) -> f64 {
    let mut t = start;
    let mut h = half_width;
    for _ in 0..40 {
        let gm = lambda_min_at(p, t - h);
        let g0 = lambda_min_at(p, t);
        let gp = lambda_min_at(p, t + h);
        let denom = gm - 2.0 * g0 + gp;
        if denom < 0.0 {
            let dt = 0.5 * h * (gm - gp) / denom;
            t += dt.clamp(-h, h);
        } else if gm > g0 && gm >= gp {
            t -= h;
        } else if gp > g0 {
            t += h;
        }
        h *= 0.5;
        if h < 1e-13 {
            break;
        }
    }
    t
}

/// Bisect the feasibility boundary in (feasible, infeasible].
fn bisect_boundary(p: &RealifiedPair, mut feasible: f64, mut infeasible: f64) -> f64 {
    while (feasible - infeasible).abs() > BISECT_RESOLUTION {
        let mid = 0.5 * (feasible + infeasible);
        if lambda_min_at(p, mid) >= -ARC_SLACK {
            feasible = mid;
        } else {
            infeasible = mid;
        }
    }
    feasible
}

/// Shift phi_min into (-pi, pi], dragging phi_max along.
fn normalize_window(phi_min: f64, phi_max: f64) -> (f64, f64) {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut lo = phi_min;
    let mut hi = phi_max;
    while lo > std::f64::consts::PI {
        lo -= two_pi;
        hi -= two_pi;
    }
    while lo <= -std::f64::consts::PI {
        lo += two_pi;
        hi += two_pi;
    }
    (lo, hi)
}

/// Extreme phases (phi_min, phi_max) of a nonzero matrix, or the
/// non-semisectorial flag when no supporting angle exists. The window
/// placement is anchored at the located supporting arc; when the phase
/// spread is exactly pi that placement is one of two valid choices.
pub fn extreme_phases(c: &ComplexMatrix, tol: f64) -> Result<ExtremePhases> {
    let norm = c.norm();
    if norm == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let scaled = c.clone() / Complex64::new(norm, 0.0);
    let p = cones::toeplitz_decompose(&scaled);

    let g: Vec<f64> = (0..GRID_POINTS)
        .map(|k| lambda_min_at(&p, k as f64 * GRID_STEP))
        .collect();
    let best_value = g.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    // Feasible grid point: take the arc route. Otherwise refine every
    // competitive local maximum; the supporting set may be narrower than the
    // grid step or a single point.
    let mut anchor: Option<f64> = None;
    for (k, &v) in g.iter().enumerate() {
        if v >= -ARC_SLACK {
            anchor = Some(k as f64 * GRID_STEP);
            break;
        }
    }
    if anchor.is_none() {
        let mut best_t = f64::NAN;
        let mut best_g = f64::NEG_INFINITY;
        for k in 0..GRID_POINTS {
            let prev = g[(k + GRID_POINTS - 1) % GRID_POINTS];
            let next = g[(k + 1) % GRID_POINTS];
            if g[k] >= prev && g[k] >= next && g[k] >= best_value - 1e-2 {
                let t = refine_peak(&p, k as f64 * GRID_STEP, GRID_STEP);
                let v = lambda_min_at(&p, t);
                if v > best_g {
                    best_g = v;
                    best_t = t;
                }
            }
        }
        if best_g < -tol.max(ARC_SLACK) {
            return Ok(ExtremePhases::NonSemisectorial);
        }
        if best_g < -ARC_SLACK {
            // Supporting set is a single angle to working precision.
            let (phi_min, phi_max) = normalize_window(best_t, best_t + std::f64::consts::PI);
            return Ok(ExtremePhases::Bounded { phi_min, phi_max });
        }
        anchor = Some(best_t);
    }
    let anchor = anchor.unwrap();

    // Walk the grid circularly from the anchor to bracket both endpoints of
    // the supporting arc, then bisect.
    let feasible_at = |t: f64| lambda_min_at(&p, t) >= -ARC_SLACK;
    let mut up_feasible = anchor;
    let mut up_infeasible = None;
    for k in 1..=GRID_POINTS {
        let t = anchor + k as f64 * GRID_STEP;
        if feasible_at(t) {
            up_feasible = t;
        } else {
            up_infeasible = Some(t);
            break;
        }
    }
    let mut down_feasible = anchor;
    let mut down_infeasible = None;
    for k in 1..=GRID_POINTS {
        let t = anchor - k as f64 * GRID_STEP;
        if feasible_at(t) {
            down_feasible = t;
        } else {
            down_infeasible = Some(t);
            break;
        }
    }
    let (Some(up_infeasible), Some(down_infeasible)) = (up_infeasible, down_infeasible) else {
        // The whole circle supports the matrix, which only the zero matrix
        // can do; treat as zero.
        return Err(Error::ZeroMatrix);
    };

    let arc_hi = bisect_boundary(&p, up_feasible, up_infeasible);
    let arc_lo = bisect_boundary(&p, down_feasible, down_infeasible);

    let mut phi_min = arc_hi;
    let mut phi_max = arc_lo + std::f64::consts::PI;
    if phi_max < phi_min {
        // Width-zero spread, blurred by bisection resolution.
        let mid = 0.5 * (phi_min + phi_max);
        phi_min = mid;
        phi_max = mid;
    }
    let (phi_min, phi_max) = normalize_window(phi_min, phi_max);
    Ok(ExtremePhases::Bounded { phi_min, phi_max })
}

/// Classify a matrix by its phase structure.
pub fn classify(c: &ComplexMatrix, tol: f64) -> Classification {
    match extreme_phases(c, tol) {
        Err(_) => Classification::Zero,
        Ok(ExtremePhases::NonSemisectorial) => Classification::NonSemisectorial,
        Ok(ExtremePhases::Bounded { phi_min, phi_max }) => {
            if phi_max - phi_min >= std::f64::consts::PI - PI_WIDTH_EPS {
                Classification::SemisectorialParabolic
            } else {
                let theta = 0.5 * (phi_min + phi_max);
                let rotated = c * linalg::cis(-theta);
                let herm = (&rotated + rotated.adjoint()).scale(0.5);
                if cones::pd_unchecked(&herm, tol) {
                    Classification::Sectorial
                } else {
                    Classification::Quasisectorial
                }
            }
        }
    }
}

/// Shared pipeline for [phases] and [sectorial_rank_one_terms]: rotate by the
/// midpoint angle, compress onto the range, and diagonalize scaled skew part.
struct PhaseFactorization {
    theta: f64,
    mus: Vec<f64>,
    /// Columns are e^{i phi_k / ...}-free factors: t_k with
    /// c = sum e^{i phi_k} t_k t_k*.
    factors: ComplexMatrix,
    classification: Classification,
}

fn phase_factorization(c: &ComplexMatrix, tol: f64) -> Result<PhaseFactorization> {
    let classification = classify(c, tol);
    match classification {
        Classification::Sectorial | Classification::Quasisectorial => {}
        other => {
            return Err(Error::PhasesUnavailable {
                classification: other.as_str(),
            })
        }
    }
    let Ok(ExtremePhases::Bounded { phi_min, phi_max }) = extreme_phases(c, tol) else {
        unreachable!("classification guarantees bounded extremes");
    };
    let theta = 0.5 * (phi_min + phi_max);

    // The kernel of a quasisectorial matrix equals the kernel of its adjoint,
    // so compressing onto the range loses nothing.
    let (rank, basis) = linalg::rank_and_range(c, tol.max(1e-13));
    let compressed = basis.adjoint() * c * &basis;
    let rotated = &compressed * linalg::cis(-theta);
    let a = (&rotated + rotated.adjoint()).scale(0.5);
    let b = ((&rotated - rotated.adjoint()) * Complex64::new(0.0, -0.5)).clone_owned();

    let (lam, u) = linalg::hermitian_eigen(&a);
    let lam_max = lam.last().copied().unwrap_or(0.0).max(0.0);
    let floor = (lam_max * 1e-14).max(f64::MIN_POSITIVE);
    let mut a_sqrt = ComplexMatrix::zeros(rank, rank);
    let mut a_isqrt = ComplexMatrix::zeros(rank, rank);
    for k in 0..rank {
        let l = lam[k].max(floor);
        let col = u.column(k);
        for i in 0..rank {
            for j in 0..rank {
                let vv = col[i] * col[j].conj();
                a_sqrt[(i, j)] += vv * Complex64::new(l.sqrt(), 0.0);
                a_isqrt[(i, j)] += vv * Complex64::new(1.0 / l.sqrt(), 0.0);
            }
        }
    }
    let m = &a_isqrt * &b * &a_isqrt;
    let (mus_asc, vecs) = linalg::hermitian_eigen(&m);

    // Sort phases nonincreasing: mus descending.
    let order: Vec<usize> = (0..rank).rev().collect();
    let mut mus = Vec::with_capacity(rank);
    let mut factors = ComplexMatrix::zeros(c.nrows(), rank);
    for (col, &k) in order.iter().enumerate() {
        let mu = mus_asc[k];
        mus.push(mu);
        let scale = (1.0 + mu * mu).powf(0.25);
        let t = &basis * (&a_sqrt * vecs.column(k)) * Complex64::new(scale, 0.0);
        factors.set_column(col, &t);
    }
    Ok(PhaseFactorization {
        theta,
        mus,
        factors,
        classification,
    })
}

/// Full phase list of a sectorial or quasisectorial matrix: phi_k = theta +
/// arctan(mu_k) for the eigenvalues mu_k of A^{-1/2} B A^{-1/2}, sorted
/// nonincreasing. The list length equals the numerical rank.
pub fn phases(c: &ComplexMatrix, tol: f64) -> Result<PhaseList> {
    let f = phase_factorization(c, tol)?;
    Ok(PhaseList {
        phases: f.mus.iter().map(|mu| f.theta + mu.atan()).collect(),
        classification: f.classification,
        reference_angle: f.theta,
    })
}

/// Rank-one factorization c = sum e^{i phi_k} t_k t_k* with every phi_k
/// inside the extreme phases of c.
pub fn sectorial_rank_one_terms(c: &ComplexMatrix, tol: f64) -> Result<Vec<RankOneTerm>> {
    let f = phase_factorization(c, tol)?;
    Ok(f.mus
        .iter()
        .enumerate()
        .map(|(k, mu)| RankOneTerm {
            phi: f.theta + mu.atan(),
            t: f.factors.column(k).into_owned(),
        })
        .collect())
}

/// Boundary samples of the numerical range: for each angle t_j = 2 pi j / m,
/// the point x* c x at a top eigenvector x of the Hermitian part of
/// e^{-i t_j} c.
pub fn numerical_range_boundary(c: &ComplexMatrix, m: usize) -> Result<Vec<Complex64>> {
    if m < 3 {
        return Err(Error::InvalidSampleCount { m });
    }
    let mut out = Vec::with_capacity(m);
    for j in 0..m {
        let t = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
        let rotated = c * linalg::cis(-t);
        let herm = (&rotated + rotated.adjoint()).scale(0.5);
        let (_, vecs) = linalg::hermitian_eigen(&herm);
        let x = vecs.column(vecs.ncols() - 1);
        let point = (x.adjoint() * c * x)[(0, 0)];
        out.push(point);
    }
    Ok(out)
}

/// Smallest sector whose cone admits every maximal-clique block of a partial
/// matrix, with all clique phase intervals placed in one window of width pi.
/// Zero blocks impose no constraint. Errors when a block is not
/// semisectorial or when no common window exists.
pub fn minimal_sector(pm: &PartialMatrix, tol: f64) -> Result<MinimalSector> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut arcs: Vec<(f64, f64)> = Vec::new();
    for clique in pm.pattern().all_maximal_cliques() {
        let block = pm.clique_block(&clique);
        if block.norm() == 0.0 {
            continue;
        }
        match extreme_phases(&block, tol)? {
            ExtremePhases::NonSemisectorial => {
                return Err(Error::NonSemisectorialClique { clique })
            }
            ExtremePhases::Bounded { phi_min, phi_max } => arcs.push((phi_min, phi_max)),
        }
    }
    if arcs.is_empty() {
        return Ok(MinimalSector::Degenerate { angle: 0.0 });
    }

    for &(anchor, _) in &arcs {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut fits = true;
        for &(a, b) in &arcs {
            let k = ((anchor - a) / two_pi).ceil();
            let (a, b) = (a + k * two_pi, b + k * two_pi);
            if b > anchor + std::f64::consts::PI + 1e-9 {
                fits = false;
                break;
            }
            lo = lo.min(a);
            hi = hi.max(b);
        }
        if !fits {
            continue;
        }
        let width = hi - lo;
        let (lo, hi) = normalize_window(lo, hi);
        if width <= 1e-8 {
            return Ok(MinimalSector::Degenerate {
                angle: 0.5 * (lo + hi),
            });
        }
        if width >= std::f64::consts::PI {
            return Err(Error::IncompatibleCliquePhases);
        }
        return Ok(MinimalSector::Sector(PhaseSector::new(lo, hi)?));
    }
    Err(Error::IncompatibleCliquePhases)
}
