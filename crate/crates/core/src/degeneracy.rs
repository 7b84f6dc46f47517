//! Degeneracy curves `E_{n+k}(q,p) = E_n(q,p)` in the unit square.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oscillator::{energy_int, energy_int_dq, DeformationPoint};
use crate::roots::scan_roots;

/// Distance kept from q = 0 and q = 1 by the root scan.
pub const SCAN_EDGE: f64 = 1e-6;
/// Number of uniform sub-intervals in the sign-change scan.
pub const SCAN_SUBDIVISIONS: usize = 2048;
/// Default bracket width for root refinement.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default number of p samples when tracing a curve.
pub const DEFAULT_GRID_LEN: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `n ≠ 0, k ≥ 1`
    FirstFamily,
    /// `n = 0, k ≥ 2`
    SecondFamily,
}

/// A degeneracy condition `E_{n+k} = E_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPair", into = "RawPair")]
pub struct LevelPair {
    n: u32,
    k: u32,
    family: Family,
}

#[derive(Serialize, Deserialize)]
struct RawPair {
    n: u32,
    k: u32,
}

impl TryFrom<RawPair> for LevelPair {
    type Error = Error;
    fn try_from(raw: RawPair) -> Result<Self> {
        LevelPair::new(raw.n, raw.k)
    }
}

impl From<LevelPair> for RawPair {
    fn from(pair: LevelPair) -> Self {
        RawPair {
            n: pair.n,
            k: pair.k,
        }
    }
}

impl LevelPair {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        match (n, k) {
            (_, 0) => Err(Error::Argument("level gap k must be >= 1".into())),
            (0, 1) => Err(Error::ExcludedPair),
            (0, _) => Ok(LevelPair {
                n,
                k,
                family: Family::SecondFamily,
            }),
            _ => Ok(LevelPair {
                n,
                k,
                family: Family::FirstFamily,
            }),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Index of the upper level, `n + k`.
    pub fn upper(&self) -> u32 {
        self.n + self.k
    }

    pub fn family(&self) -> Family {
        self.family
    }
}

impl fmt::Display for LevelPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.n, self.k)
    }
}

impl FromStr for LevelPair {
    type Err = Error;

    /// Parses `n:k`.
    fn from_str(s: &str) -> Result<Self> {
        let (n, k) = s
            .split_once(':')
            .ok_or_else(|| Error::Argument(format!("expected level pair as n:k, got {s:?}")))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<i64>()
                .map_err(|_| Error::Argument(format!("bad level index {v:?} in {s:?}")))
        };
        classify(parse(n)?, parse(k)?)
    }
}

/// Tags `(n, k)` with its family. `(0, 1)` and negative inputs are rejected.
pub fn classify(n: i64, k: i64) -> Result<LevelPair> {
    if n < 0 || k < 1 {
        return Err(Error::Argument(format!(
            "need n >= 0 and k >= 1, got n={n}, k={k}"
        )));
    }
    let to_u32 = |v: i64| {
        u32::try_from(v).map_err(|_| Error::Argument(format!("level index {v} too large")))
    };
    LevelPair::new(to_u32(n)?, to_u32(k)?)
}

/// `E_{n+k} − E_n` at an arbitrary, unvalidated `(q, p)`.
pub fn residual_raw(pair: LevelPair, q: f64, p: f64) -> f64 {
    energy_int(pair.upper(), q, p) - energy_int(pair.n, q, p)
}

fn residual_raw_dq(pair: LevelPair, q: f64, p: f64) -> f64 {
    energy_int_dq(pair.upper(), q, p) - energy_int_dq(pair.n, q, p)
}

/// `E_{n+k} − E_n` at `point`.
pub fn residual(pair: LevelPair, point: DeformationPoint) -> f64 {
    residual_raw(pair, point.q(), point.p())
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::Argument(format!(
            "tolerance must be positive, got {tol}"
        )))
    }
}

fn roots_at(pair: LevelPair, p: f64, tol: f64) -> Vec<f64> {
    scan_roots(
        |q| residual_raw(pair, q, p),
        |q| residual_raw_dq(pair, q, p),
        SCAN_EDGE,
        1.0 - SCAN_EDGE,
        SCAN_SUBDIVISIONS,
        tol,
    )
}

/// All `q ∈ (0, 1)` on the curve of `pair` at fixed `p0`, ascending.
///
/// Roots are located by a sign-change scan, so tangential (even-multiplicity)
/// roots are not reported. Returns an empty list when the curve does not
/// reach `p0`.
pub fn solve_q(pair: LevelPair, p0: f64, tol: f64) -> Result<Vec<f64>> {
    check_tol(tol)?;
    if !(p0 > 0.0 && p0 <= 1.0) {
        return Err(Error::Argument(format!("p0 must lie in (0,1], got {p0}")));
    }
    Ok(roots_at(pair, p0, tol))
}

/// Where a second-family curve meets the q axis (p = 0); by q↔p symmetry
/// the same value is its endpoint on the p axis.
pub fn axis_endpoint(pair: LevelPair) -> Result<f64> {
    if pair.family == Family::FirstFamily {
        return Err(Error::NotApplicable(format!(
            "first-family curve {pair} ends at the corners (1,0) and (0,1)"
        )));
    }
    roots_at(pair, 0.0, DEFAULT_TOL)
        .first()
        .copied()
        .ok_or_else(|| Error::NotApplicable(format!("no axis crossing found for {pair}")))
}

/// Sampled points of one degeneracy curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveTrace {
    pub pair: LevelPair,
    /// Sorted by p, then q.
    pub samples: Vec<DeformationPoint>,
    /// Bound on `|E_{n+k} − E_n|` at every sample.
    pub tolerance: f64,
}

/// `len` uniform values spanning `[0.01, 1]`.
pub fn default_p_grid(len: usize) -> Vec<f64> {
    let (lo, hi) = (0.01, 1.0);
    match len {
        0 => Vec::new(),
        1 => vec![hi],
        _ => (0..len)
            .map(|i| lo + (hi - lo) * i as f64 / (len - 1) as f64)
            .collect(),
    }
}

/// Solves the curve at every grid value of p; grid points where the curve is
/// absent contribute nothing, those with several roots contribute all of them.
pub fn trace(pair: LevelPair, p_grid: &[f64], tol: f64) -> Result<CurveTrace> {
    check_tol(tol)?;
    if p_grid.is_empty() {
        return Err(Error::Argument("empty p grid".into()));
    }
    if let Some(bad) = p_grid.iter().find(|p| !(**p > 0.0 && **p <= 1.0)) {
        return Err(Error::Argument(format!("grid value {bad} outside (0,1]")));
    }
    let mut samples: Vec<DeformationPoint> = p_grid
        .par_iter()
        .flat_map_iter(|&p| {
            roots_at(pair, p, tol)
                .into_iter()
                .filter_map(move |q| DeformationPoint::new(q, p).ok())
        })
        .collect();
    samples.sort_by(|a, b| a.p().total_cmp(&b.p()).then(a.q().total_cmp(&b.q())));
    Ok(CurveTrace {
        pair,
        samples,
        tolerance: 10.0 * tol,
    })
}
