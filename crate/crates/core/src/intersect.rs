//! Crossings of two degeneracy curves, i.e. points where two level pairs are
//! degenerate at once without any reduction relation.
//!
//! Curve 1 is followed as `q(p)` over a sweep in p; the residual of curve 2
//! along each branch is bracketed for sign changes and bisected in p, then a
//! short 2-D Newton polish brings both residuals down together.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::degeneracy::{residual_raw, solve_q, LevelPair};
use crate::error::{Error, Result};
use crate::oscillator::energy_int_dq;

/// Default refinement tolerance on both residuals.
pub const DEFAULT_INTERSECT_TOL: f64 = 1e-10;

/// The p-sweep along curve 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub samples: usize,
    pub p_lo: f64,
    pub p_hi: f64,
}

impl Default for Sweep {
    fn default() -> Self {
        Sweep {
            samples: 4096,
            p_lo: 0.02,
            p_hi: 0.999,
        }
    }
}

impl Sweep {
    /// Spacing between consecutive p samples.
    pub fn resolution(&self) -> f64 {
        (self.p_hi - self.p_lo) / (self.samples.max(2) - 1) as f64
    }

    fn grid(&self) -> Vec<f64> {
        let n = self.samples.max(2);
        (0..n)
            .map(|i| self.p_lo + (self.p_hi - self.p_lo) * i as f64 / (n - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntersectionPoint {
    pub q: f64,
    pub p: f64,
    pub pair1: LevelPair,
    pub pair2: LevelPair,
    pub residual1: f64,
    pub residual2: f64,
}

impl IntersectionPoint {
    fn at(q: f64, p: f64, pair1: LevelPair, pair2: LevelPair) -> Self {
        IntersectionPoint {
            q,
            p,
            pair1,
            pair2,
            residual1: residual_raw(pair1, q, p),
            residual2: residual_raw(pair2, q, p),
        }
    }

    pub fn mirrored(&self) -> Self {
        IntersectionPoint::at(self.p, self.q, self.pair1, self.pair2)
    }
}

const ROOT_TOL: f64 = 1e-14;
const MATCH_RADIUS: f64 = 0.1;
const DEDUP_RADIUS: f64 = 1e-8;

fn curve_roots(pair: LevelPair, p: f64) -> Vec<f64> {
    solve_q(pair, p, ROOT_TOL).unwrap_or_default()
}

fn nearest(roots: &[f64], target: f64) -> Option<f64> {
    roots
        .iter()
        .copied()
        .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
}

/// `(∂r/∂q, ∂r/∂p)`; the p-derivative follows from q↔p symmetry.
fn gradient(pair: LevelPair, q: f64, p: f64) -> (f64, f64) {
    let d = |x: f64, y: f64| energy_int_dq(pair.upper(), x, y) - energy_int_dq(pair.n(), x, y);
    (d(q, p), d(p, q))
}

fn newton_polish(pair1: LevelPair, pair2: LevelPair, mut q: f64, mut p: f64) -> (f64, f64) {
    let norm = |q: f64, p: f64| {
        residual_raw(pair1, q, p)
            .abs()
            .max(residual_raw(pair2, q, p).abs())
    };
    for _ in 0..8 {
        let (r1, r2) = (residual_raw(pair1, q, p), residual_raw(pair2, q, p));
        let (a11, a12) = gradient(pair1, q, p);
        let (a21, a22) = gradient(pair2, q, p);
        let det = a11 * a22 - a12 * a21;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dq = (r1 * a22 - r2 * a12) / det;
        let dp = (a11 * r2 - a21 * r1) / det;
        let (nq, np) = (q - dq, p - dp);
        if !(nq > 0.0 && nq < 1.0 && np > 0.0 && np < 1.0) || norm(nq, np) >= norm(q, p) {
            break;
        }
        q = nq;
        p = np;
    }
    (q, p)
}

/// Bisects in p on a bracket of curve 2's residual along one branch of
/// curve 1.
fn refine(
    pair1: LevelPair,
    pair2: LevelPair,
    (mut p_lo, mut q_lo): (f64, f64),
    (mut p_hi, mut q_hi): (f64, f64),
) -> Option<(f64, f64)> {
    let mut f_lo = residual_raw(pair2, q_lo, p_lo);
    for _ in 0..100 {
        if p_hi - p_lo <= 4.0 * f64::EPSILON * p_hi {
            break;
        }
        let p_mid = 0.5 * (p_lo + p_hi);
        let guess = 0.5 * (q_lo + q_hi);
        let q_mid = nearest(&curve_roots(pair1, p_mid), guess)?;
        let f_mid = residual_raw(pair2, q_mid, p_mid);
        if f_mid == 0.0 {
            return Some((q_mid, p_mid));
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            p_lo = p_mid;
            q_lo = q_mid;
            f_lo = f_mid;
        } else {
            p_hi = p_mid;
            q_hi = q_mid;
        }
    }
    Some((0.5 * (q_lo + q_hi), 0.5 * (p_lo + p_hi)))
}

/// All interior points where both `pair1` and `pair2` are degenerate, with
/// the default sweep.
pub fn intersect_curves(
    pair1: LevelPair,
    pair2: LevelPair,
    tol: f64,
) -> Result<Vec<IntersectionPoint>> {
    intersect_curves_with(pair1, pair2, tol, Sweep::default())
}

/// Same as [`intersect_curves`] with an explicit sweep. The result is closed
/// under q↔p mirroring and ordered by q.
pub fn intersect_curves_with(
    pair1: LevelPair,
    pair2: LevelPair,
    tol: f64,
    sweep: Sweep,
) -> Result<Vec<IntersectionPoint>> {
    if pair1 == pair2 {
        return Err(Error::Argument(format!(
            "need two distinct level pairs, got {pair1} twice"
        )));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Argument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if !(sweep.p_lo > 0.0 && sweep.p_lo < sweep.p_hi && sweep.p_hi <= 1.0) {
        return Err(Error::Argument(format!(
            "bad sweep range [{}, {}]",
            sweep.p_lo, sweep.p_hi
        )));
    }

    let grid = sweep.grid();
    let branches: Vec<Vec<f64>> = grid.par_iter().map(|&p| curve_roots(pair1, p)).collect();

    let mut brackets = Vec::new();
    for i in 0..grid.len() - 1 {
        let (p_a, p_b) = (grid[i], grid[i + 1]);
        for &q_a in &branches[i] {
            let Some(q_b) = nearest(&branches[i + 1], q_a) else {
                continue;
            };
            if (q_b - q_a).abs() > MATCH_RADIUS {
                continue;
            }
            let f_a = residual_raw(pair2, q_a, p_a);
            let f_b = residual_raw(pair2, q_b, p_b);
            if f_a == 0.0 || (f_b != 0.0 && (f_a < 0.0) != (f_b < 0.0)) {
                brackets.push(((p_a, q_a), (p_b, q_b)));
            }
        }
    }

    let found: Vec<IntersectionPoint> = brackets
        .par_iter()
        .filter_map(|&(lo, hi)| {
            let (q, p) = refine(pair1, pair2, lo, hi)?;
            let (q, p) = newton_polish(pair1, pair2, q, p);
            let point = IntersectionPoint::at(q, p, pair1, pair2);
            (point.residual1.abs() < tol && point.residual2.abs() < tol).then_some(point)
        })
        .collect();

    let mut points: Vec<IntersectionPoint> = Vec::new();
    for point in found.iter().flat_map(|pt| [*pt, pt.mirrored()]) {
        let duplicate = points
            .iter()
            .any(|o| (o.q - point.q).abs() < DEDUP_RADIUS && (o.p - point.p).abs() < DEDUP_RADIUS);
        if !duplicate {
            points.push(point);
        }
    }
    points.sort_by(|a, b| a.q.total_cmp(&b.q).then(a.p.total_cmp(&b.p)));
    Ok(points)
}
