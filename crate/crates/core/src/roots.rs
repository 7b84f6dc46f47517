//! Bracketing root finder used for the degeneracy curves.
//!
//! A uniform sign-change scan locates every simple root on the interval,
//! bisection shrinks each bracket to the requested width and a single
//! guarded Newton step polishes the midpoint.

const MAX_BISECTIONS: usize = 200;

/// Bisects `[lo, hi]` (with `f(lo)`, `f(hi)` of opposite sign) down to a
/// width of `tol`, then takes one Newton step if it stays inside the final
/// bracket and does not increase `|f|`.
pub(crate) fn bisect_newton<F, D>(f: &F, df: &D, mut lo: f64, mut hi: f64, tol: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    let fx = f(x);
    let slope = df(x);
    if slope != 0.0 && slope.is_finite() {
        let polished = x - fx / slope;
        if polished >= lo && polished <= hi && f(polished).abs() <= fx.abs() {
            return polished;
        }
    }
    x
}

/// All sign-change roots of `f` on `[lo, hi]`, ascending.
pub(crate) fn scan_roots<F, D>(
    f: F,
    df: D,
    lo: f64,
    hi: f64,
    subdivisions: usize,
    tol: f64,
) -> Vec<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let step = (hi - lo) / subdivisions as f64;
    let mut roots = Vec::new();
    let mut x_prev = lo;
    let mut f_prev = f(lo);
    if f_prev == 0.0 {
        roots.push(lo);
    }
    for i in 1..=subdivisions {
        let x = if i == subdivisions {
            hi
        } else {
            lo + step * i as f64
        };
        let fx = f(x);
        if fx == 0.0 {
            roots.push(x);
        } else if f_prev != 0.0 && (fx < 0.0) != (f_prev < 0.0) {
            roots.push(bisect_newton(&f, &df, x_prev, x, tol));
        }
        x_prev = x;
        f_prev = fx;
    }
    roots
}
