//! Two-parameter deformed oscillator: q,p-brackets, energy levels and a
//! truncated Fock-space representation of the ladder operators.
//!
//! The algebra is `a a⁺ − q a⁺ a = p^N`, `a a⁺ − p a⁺ a = q^N` with
//! `[N, a] = −a`, `[N, a⁺] = a⁺`. On the Fock basis this gives
//! `a⁺a = [[N]]`, `aa⁺ = [[N+1]]` and, with ħω = 1,
//! `E_n = ½([[n+1]] + [[n]])`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative gap `|q−p| / max(q,p)` below which non-integer brackets switch
/// to the confluent `x·q^(x−1)` limit.
pub const EQ_THRESHOLD: f64 = 1e-9;

/// A pair of real deformation parameters, both in (0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint", into = "RawPoint")]
pub struct DeformationPoint {
    q: f64,
    p: f64,
}

#[derive(Serialize, Deserialize)]
struct RawPoint {
    q: f64,
    p: f64,
}

impl TryFrom<RawPoint> for DeformationPoint {
    type Error = Error;
    fn try_from(raw: RawPoint) -> Result<Self> {
        DeformationPoint::new(raw.q, raw.p)
    }
}

impl From<DeformationPoint> for RawPoint {
    fn from(pt: DeformationPoint) -> Self {
        RawPoint { q: pt.q, p: pt.p }
    }
}

fn in_unit_interval(x: f64) -> bool {
    x > 0.0 && x <= 1.0
}

impl DeformationPoint {
    /// The undeformed oscillator, q = p = 1.
    pub const CLASSICAL: DeformationPoint = DeformationPoint { q: 1.0, p: 1.0 };

    pub fn new(q: f64, p: f64) -> Result<Self> {
        if in_unit_interval(q) && in_unit_interval(p) {
            Ok(DeformationPoint { q, p })
        } else {
            Err(Error::InvalidPoint { q, p })
        }
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// The mirror point (p, q). Always valid.
    pub fn swapped(&self) -> Self {
        DeformationPoint {
            q: self.p,
            p: self.q,
        }
    }
}

/// `[[n]]` for integer `n` via the power sum `Σ_{r<n} q^r p^(n−1−r)`.
///
/// Accepts any non-negative `q`, `p` (including 0 and values above 1) so that
/// curve endpoints on the axes can be evaluated. Uses the recurrence
/// `[[m+1]] = p·[[m]] + q^m`, which only ever adds non-negative terms.
pub fn bracket_int(n: u32, q: f64, p: f64) -> f64 {
    let mut acc = 0.0;
    let mut q_pow = 1.0;
    for _ in 0..n {
        acc = p * acc + q_pow;
        q_pow *= q;
    }
    acc
}

/// Partial derivative of [`bracket_int`] with respect to `q`.
pub fn bracket_int_dq(n: u32, q: f64, p: f64) -> f64 {
    // d[[m+1]] = p·d[[m]] + m·q^(m−1)
    let mut acc = 0.0;
    let mut q_pow_prev = 0.0; // q^(m-1), with the m = 0 term vanishing
    for m in 0..n {
        let term = if m == 0 { 0.0 } else { m as f64 * q_pow_prev };
        acc = p * acc + term;
        q_pow_prev = if m == 0 { 1.0 } else { q_pow_prev * q };
    }
    acc
}

/// `E_n` at integer `n` on an unvalidated point; see [`bracket_int`].
pub fn energy_int(n: u32, q: f64, p: f64) -> f64 {
    0.5 * (bracket_int(n + 1, q, p) + bracket_int(n, q, p))
}

/// `∂E_n/∂q` at integer `n`.
pub fn energy_int_dq(n: u32, q: f64, p: f64) -> f64 {
    0.5 * (bracket_int_dq(n + 1, q, p) + bracket_int_dq(n, q, p))
}

fn as_level(x: f64) -> Option<u32> {
    if x.fract() == 0.0 && x <= u32::MAX as f64 - 1.0 {
        Some(x as u32)
    } else {
        None
    }
}

/// The q,p-bracket `[[x]] = (q^x − p^x)/(q − p)` for real `x ≥ 0`.
///
/// Integer arguments are evaluated as exact power sums. Other arguments use
/// `hi^(x−1)·expm1(x·ln(1+u))/u` with `u = (lo−hi)/hi`, which equals the
/// quotient but does not cancel when q and p are close.
pub fn qp_bracket(x: f64, point: DeformationPoint) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Argument(format!(
            "bracket argument must be >= 0, got {x}"
        )));
    }
    let (q, p) = (point.q, point.p);
    if let Some(n) = as_level(x) {
        return Ok(bracket_int(n, q, p));
    }
    let (hi, lo) = if q >= p { (q, p) } else { (p, q) };
    let u = (lo - hi) / hi;
    if u.abs() <= EQ_THRESHOLD {
        let mid = 0.5 * (q + p);
        return Ok(x * mid.powf(x - 1.0));
    }
    Ok(hi.powf(x - 1.0) * (x * u.ln_1p()).exp_m1() / u)
}

/// Energy `E_n = ½([[n+1]] + [[n]])` of level `n` (ħω = 1).
///
/// Only integer `n` are physical levels; real `n` is accepted for drawing
/// continuous curves through the spectrum.
pub fn energy(n: f64, point: DeformationPoint) -> Result<f64> {
    if !(n >= 0.0) || !n.is_finite() {
        return Err(Error::Argument(format!(
            "level index must be >= 0, got {n}"
        )));
    }
    if let Some(level) = as_level(n) {
        return Ok(energy_level(level, point));
    }
    Ok(0.5 * (qp_bracket(n + 1.0, point)? + qp_bracket(n, point)?))
}

/// Energy of integer level `n`.
pub fn energy_level(n: u32, point: DeformationPoint) -> f64 {
    energy_int(n, point.q, point.p)
}

/// Truncated matrix representation of `a`, `a⁺` and `N` on the first `dim`
/// Fock states.
#[derive(Debug, Clone, PartialEq)]
pub struct FockRep {
    pub dim: usize,
    pub a: DMatrix<f64>,
    pub a_dag: DMatrix<f64>,
    pub n_op: DMatrix<f64>,
    pub point: DeformationPoint,
}

/// Builds `a|n⟩ = sqrt([[n]])|n−1⟩`, `a⁺ = aᵀ` and `N = diag(0..dim)`.
pub fn build_fock_rep(point: DeformationPoint, dim: usize) -> Result<FockRep> {
    if dim < 2 {
        return Err(Error::Argument(format!(
            "Fock truncation must be >= 2, got {dim}"
        )));
    }
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = bracket_int(n as u32, point.q, point.p).sqrt();
    }
    let a_dag = a.transpose();
    let n_op = DMatrix::from_fn(dim, dim, |i, j| if i == j { i as f64 } else { 0.0 });
    Ok(FockRep {
        dim,
        a,
        a_dag,
        n_op,
        point,
    })
}

/// Max-norm residual of each defining relation on the truncated space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgebraResiduals {
    /// `aa⁺ − q a⁺a − p^N`
    pub q_relation: f64,
    /// `aa⁺ − p a⁺a − q^N`
    pub p_relation: f64,
    /// `[N, a] + a`
    pub number_lowering: f64,
    /// `[N, a⁺] − a⁺`
    pub number_raising: f64,
    /// `a⁺a − [[N]]`
    pub number_bracket: f64,
    /// `aa⁺ − [[N+1]]`
    pub shifted_bracket: f64,
}

impl AlgebraResiduals {
    pub fn max(&self) -> f64 {
        [
            self.q_relation,
            self.p_relation,
            self.number_lowering,
            self.number_raising,
            self.number_bracket,
            self.shifted_bracket,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Checks the algebra on `rep`, masking the last basis state where the
/// truncated `aa⁺` is incomplete.
pub fn verify_algebra(rep: &FockRep) -> AlgebraResiduals {
    let dim = rep.dim;
    let (q, p) = (rep.point.q, rep.point.p);
    let diag = |f: &dyn Fn(u32) -> f64| {
        DMatrix::from_fn(dim, dim, |i, j| if i == j { f(i as u32) } else { 0.0 })
    };
    let p_pow_n = diag(&|n| p.powi(n as i32));
    let q_pow_n = diag(&|n| q.powi(n as i32));
    let bracket_n = diag(&|n| bracket_int(n, q, p));
    let bracket_n1 = diag(&|n| bracket_int(n + 1, q, p));

    let a_adag = &rep.a * &rep.a_dag;
    let adag_a = &rep.a_dag * &rep.a;

    let inner = dim - 1;
    let norm = |m: DMatrix<f64>| m.view((0, 0), (inner, inner)).amax();

    AlgebraResiduals {
        q_relation: norm(&a_adag - &adag_a * q - &p_pow_n),
        p_relation: norm(&a_adag - &adag_a * p - &q_pow_n),
        number_lowering: norm(&rep.n_op * &rep.a - &rep.a * &rep.n_op + &rep.a),
        number_raising: norm(&rep.n_op * &rep.a_dag - &rep.a_dag * &rep.n_op - &rep.a_dag),
        number_bracket: norm(&adag_a - &bracket_n),
        shifted_bracket: norm(&a_adag - &bracket_n1),
    }
}
