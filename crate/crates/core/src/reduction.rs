//! One-parameter oscillators obtained by solving a reduction relation for q
//! and substituting it into the two-parameter spectrum.
//!
//! A conic relation has two roots q(p); which one feeds level `n` is fixed by
//! a [`BranchAssignment`]. The resulting spectrum is piecewise and generally
//! non-monotone in `n`.

use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::conics::{fit_line, ConicRelation, FitSpec, Sign};
use crate::degeneracy::{solve_q, LevelPair};
use crate::error::{Error, Result};
use crate::intersect::{intersect_curves, DEFAULT_INTERSECT_TOL};
use crate::oscillator::{energy_level, DeformationPoint};

/// Levels `n < threshold` use `low_sign`, the rest `high_sign`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchAssignment {
    pub threshold: u32,
    pub low_sign: Sign,
    pub high_sign: Sign,
}

fn active_levels(pair: LevelPair) -> impl Iterator<Item = u32> {
    // E_0 = ½ on every branch, so level 0 never constrains the split
    [pair.n(), pair.upper()].into_iter().filter(|&n| n != 0)
}

impl BranchAssignment {
    pub fn new(threshold: u32, low_sign: Sign, high_sign: Sign) -> Self {
        BranchAssignment {
            threshold,
            low_sign,
            high_sign,
        }
    }

    /// The same branch for every level.
    pub fn uniform(sign: Sign) -> Self {
        BranchAssignment::new(0, sign, sign)
    }

    pub fn sign_for(&self, n: u32) -> Sign {
        if n < self.threshold {
            self.low_sign
        } else {
            self.high_sign
        }
    }

    /// Split levels between two degenerate pairs whose roots at the common p
    /// are `root_a` and `root_b`.
    ///
    /// The pair with the lower levels gets the levels below
    /// `threshold = (its n + k) + 1`, on whichever branch its own root lies.
    /// Pairs whose nonzero levels interleave cannot be split this way.
    pub fn for_pairs(a: (LevelPair, f64), b: (LevelPair, f64)) -> Result<Self> {
        let top = |p: LevelPair| active_levels(p).max().unwrap_or(0);
        let bottom = |p: LevelPair| active_levels(p).min().unwrap_or(0);
        let (low, high) = if top(a.0) <= top(b.0) { (a, b) } else { (b, a) };
        if top(low.0) >= bottom(high.0) {
            return Err(Error::Argument(format!(
                "levels of {} and {} interleave; no single threshold separates them",
                low.0, high.0
            )));
        }
        if low.1 == high.1 {
            return Err(Error::Argument(
                "both pairs share the same root; nothing to split".into(),
            ));
        }
        let low_sign = if low.1 < high.1 {
            Sign::Minus
        } else {
            Sign::Plus
        };
        Ok(BranchAssignment::new(
            low.0.upper() + 1,
            low_sign,
            low_sign.flipped(),
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub n: u32,
    pub energy: f64,
    pub q_used: f64,
    pub branch: Sign,
}

/// Spectrum of a reduced oscillator at one value of p.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub p_value: f64,
    /// Sorted by `n`, starting at 0.
    pub entries: Vec<SpectrumEntry>,
    pub relation: ConicRelation,
    pub assignment: BranchAssignment,
}

impl SpectrumTable {
    pub fn energy(&self, n: u32) -> Option<f64> {
        self.entries.get(n as usize).map(|e| e.energy)
    }

    pub fn energies(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.energy).collect()
    }
}

/// Rounding can push the root through (1,1) just past q = 1.
fn snap_to_one(q: f64) -> f64 {
    if q > 1.0 && q - 1.0 < 1e-12 {
        1.0
    } else {
        q
    }
}

/// `E_p(n)` for `n = 0..=n_max` with q taken from `relation` on the branch
/// given by `assignment`.
pub fn reduced_spectrum(
    relation: &ConicRelation,
    assignment: &BranchAssignment,
    p: f64,
    n_max: u32,
) -> Result<SpectrumTable> {
    let mut entries = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let branch = assignment.sign_for(n);
        let q = snap_to_one(relation.invert(p, branch)?);
        let point = DeformationPoint::new(q, p)?;
        entries.push(SpectrumEntry {
            n,
            energy: energy_level(n, point),
            q_used: q,
            branch,
        });
    }
    Ok(SpectrumTable {
        p_value: p,
        entries,
        relation: *relation,
        assignment: *assignment,
    })
}

/// Spectrum of a line reduction read as a q-oscillator: `p = αq + β`.
pub fn line_spectrum_in_q(relation: &ConicRelation, q: f64, n_max: u32) -> Result<SpectrumTable> {
    let ConicRelation::Line { .. } = relation else {
        return Err(Error::NotApplicable(format!(
            "{} relation has two q branches; use reduced_spectrum in p",
            relation.kind()
        )));
    };
    let p = relation.eval(q).unwrap_or(f64::NAN);
    let point = DeformationPoint::new(q, p)?;
    let entries = (0..=n_max)
        .map(|n| SpectrumEntry {
            n,
            energy: energy_level(n, point),
            q_used: q,
            branch: Sign::Plus,
        })
        .collect();
    Ok(SpectrumTable {
        p_value: p,
        entries,
        relation: *relation,
        assignment: BranchAssignment::uniform(Sign::Plus),
    })
}

/// Unordered level pairs `(i, j)`, `i < j`, with `|E_i − E_j| < tol`, sorted.
pub fn degeneracy_report(table: &SpectrumTable, tol: f64) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for (i, a) in table.entries.iter().enumerate() {
        for b in &table.entries[i + 1..] {
            if (a.energy - b.energy).abs() < tol {
                out.push((a.n.min(b.n), a.n.max(b.n)));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Named one-parameter reductions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Preset {
    /// `p = q`
    Td,
    /// `p = 1`
    Ak,
    /// Line through (1,1) and the crossing with q < p of `E_10 = E_0` and `E_3 = E_2`.
    LinearA,
    /// Its mirror image, through the crossing with q > p.
    LinearB,
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "td" => Ok(Preset::Td),
            "ak" => Ok(Preset::Ak),
            "linear-a" | "lineara" => Ok(Preset::LinearA),
            "linear-b" | "linearb" => Ok(Preset::LinearB),
            other => Err(Error::Argument(format!("unknown preset {other:?}"))),
        }
    }
}

/// The two crossings of `E_10 = E_0` with `E_3 = E_2`, ordered by q.
pub fn two_level_crossings() -> &'static [(f64, f64); 2] {
    static CROSSINGS: OnceLock<[(f64, f64); 2]> = OnceLock::new();
    CROSSINGS.get_or_init(|| {
        let (Ok(e10), Ok(e32)) = (LevelPair::new(0, 10), LevelPair::new(2, 1)) else {
            unreachable!("valid level pairs")
        };
        let pts = intersect_curves(e10, e32, DEFAULT_INTERSECT_TOL).expect("valid arguments");
        assert_eq!(pts.len(), 2, "expected exactly two crossings, got {pts:?}");
        [(pts[0].q, pts[0].p), (pts[1].q, pts[1].p)]
    })
}

pub fn preset(name: Preset) -> (ConicRelation, BranchAssignment) {
    let trivial = BranchAssignment::uniform(Sign::Plus);
    let relation = match name {
        Preset::Td => ConicRelation::Line {
            alpha: 1.0,
            beta: 0.0,
        },
        Preset::Ak => ConicRelation::Line {
            alpha: 0.0,
            beta: 1.0,
        },
        Preset::LinearA | Preset::LinearB => {
            let (q, p) = two_level_crossings()[if name == Preset::LinearA { 0 } else { 1 }];
            fit_line(q, p).expect("crossing lies inside the unit square")
        }
    };
    (relation, trivial)
}

/// Everything needed to realise two prescribed degeneracies at a common p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoubleDegeneracyDesign {
    pub pairs: [LevelPair; 2],
    /// Root of each pair at `spec.p0`, in the order of `pairs`.
    pub roots: [f64; 2],
    pub spec: FitSpec,
    pub assignment: BranchAssignment,
}

/// Solves both pairs at `p0` and derives the fit points and branch split.
/// When a curve has several roots at `p0` the smallest is used.
pub fn design(a: LevelPair, b: LevelPair, p0: f64, tol: f64) -> Result<DoubleDegeneracyDesign> {
    let first_root = |pair: LevelPair| -> Result<f64> {
        solve_q(pair, p0, tol)?
            .first()
            .copied()
            .ok_or_else(|| Error::NotApplicable(format!("curve {pair} does not reach p0 = {p0}")))
    };
    let (ra, rb) = (first_root(a)?, first_root(b)?);
    Ok(DoubleDegeneracyDesign {
        pairs: [a, b],
        roots: [ra, rb],
        spec: FitSpec::from_roots(ra, rb, p0)?,
        assignment: BranchAssignment::for_pairs((a, ra), (b, rb))?,
    })
}
