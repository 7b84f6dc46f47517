//! Acceptance suite: one PASS/FAIL line per criterion, at the stated
//! tolerances. Lines starting with `info` are diagnostics and do not count.
//! Exits nonzero if any criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::process::ExitCode;
use std::time::Instant;

use qpdeg_core::conics::fit_residuals;
use qpdeg_core::degeneracy::{residual_raw, DEFAULT_TOL};
use qpdeg_core::intersect::{intersect_curves, DEFAULT_INTERSECT_TOL};
use qpdeg_core::reduction::{design, line_spectrum_in_q, two_level_crossings};
use qpdeg_core::{
    axis_endpoint, build_fock_rep, energy, energy_level, fit_ellipse, fit_hyperbola, fit_line,
    fit_parabola, qp_bracket, reduced_spectrum, solve_q, verify_algebra, ConicRelation,
    DeformationPoint, FitSpec, LevelPair, Sign, SpectrumTable,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CASES: usize = 1000;

fn pair(n: u32, k: u32) -> LevelPair {
    LevelPair::new(n, k).unwrap()
}

/// Collects named sub-checks of one criterion.
struct Check {
    failures: Vec<String>,
    details: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check {
            failures: Vec::new(),
            details: Vec::new(),
        }
    }

    fn close(&mut self, name: &str, got: f64, want: f64, tol: f64) {
        let diff = (got - want).abs();
        self.details
            .push(format!("{name}={got:.9} (ref {want}, diff {diff:.1e})"));
        if !(diff <= tol) {
            self.failures.push(format!(
                "{name}: |{got:.9} - {want}| = {diff:.2e} > {tol:.0e}"
            ));
        }
    }

    fn below(&mut self, name: &str, value: f64, tol: f64) {
        if !(value.abs() < tol) {
            self.failures
                .push(format!("{name}: {value:.3e} not below {tol:.0e}"));
        }
    }

    fn holds(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        if !ok {
            self.failures.push(format!("{name}: {}", detail.into()));
        }
    }

    fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }
}

struct Suite {
    failed: usize,
    total: usize,
}

impl Suite {
    fn run(&mut self, id: u32, title: &str, body: impl FnOnce(&mut Check)) {
        let start = Instant::now();
        let mut c = Check::new();
        body(&mut c);
        self.total += 1;
        let ms = start.elapsed().as_millis();
        if c.failures.is_empty() {
            println!("criterion {id:>2}: PASS  {title}  [{ms} ms]");
        } else {
            self.failed += 1;
            println!("criterion {id:>2}: FAIL  {title}  [{ms} ms]");
            for f in &c.failures {
                println!("        - {f}");
            }
            for d in &c.details {
                println!("          {d}");
            }
        }
    }
}

fn info(msg: impl AsRef<str>) {
    println!("        info: {}", msg.as_ref());
}

fn parabola(rel: &ConicRelation) -> (f64, f64, f64) {
    match *rel {
        ConicRelation::Parabola { alpha, beta, gamma } => (alpha, beta, gamma),
        _ => panic!("expected a parabola"),
    }
}

fn table_row(c: &mut Check, a: LevelPair, b: LevelPair, p0: f64, want: [f64; 5]) {
    let d = match design(a, b, p0, DEFAULT_TOL) {
        Ok(d) => d,
        Err(e) => return c.fail(format!("pipeline failed: {e}")),
    };
    let (alpha, beta, gamma) = parabola(&fit_parabola(d.spec).unwrap());
    for (name, got, want) in [
        ("q1", d.spec.q1, want[0]),
        ("q2", d.spec.q2, want[1]),
        ("alpha", alpha, want[2]),
        ("beta", beta, want[3]),
        ("gamma", gamma, want[4]),
    ] {
        c.close(name, got, want, 1e-6);
    }
}

fn t1_spec() -> FitSpec {
    design(pair(1, 1), pair(3, 1), 0.6, DEFAULT_TOL)
        .unwrap()
        .spec
}

fn gap(t: &SpectrumTable, i: u32, j: u32) -> f64 {
    (t.energy(i).unwrap() - t.energy(j).unwrap()).abs()
}

fn designed_spectrum(a: LevelPair, b: LevelPair, p0: f64) -> SpectrumTable {
    let d = design(a, b, p0, DEFAULT_TOL).unwrap();
    reduced_spectrum(&fit_parabola(d.spec).unwrap(), &d.assignment, p0, 12).unwrap()
}

fn random_point(rng: &mut ChaCha8Rng) -> DeformationPoint {
    let q = 1.0 - rng.gen::<f64>();
    let p = 1.0 - rng.gen::<f64>();
    DeformationPoint::new(q, p).unwrap()
}

fn random_pair(rng: &mut ChaCha8Rng) -> LevelPair {
    loop {
        if let Ok(pair) = LevelPair::new(rng.gen_range(0..=8), rng.gen_range(1..=8)) {
            return pair;
        }
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut suite = Suite {
        failed: 0,
        total: 0,
    };
    let published_a = (0.567239, 0.823554);
    let published_b = (0.823554, 0.567239);

    suite.run(1, "T1: (1,1),(3,1) at p0=0.6 -> parabola", |c| {
        table_row(
            c,
            pair(1, 1),
            pair(3, 1),
            0.6,
            [0.554400, 0.900317, 9.005207, 0.727359, 0.330613],
        );
    });

    suite.run(
        2,
        "T2: hyperbola R=1 within 1e-5, fit residuals < 1e-6",
        |c| {
            let spec = t1_spec();
            let rel = fit_hyperbola(spec, 1.0).unwrap();
            let ConicRelation::Hyperbola { a_t, b_t, c_t, .. } = rel else {
                unreachable!()
            };
            c.close("a_t", a_t, -0.755814, 1e-5);
            c.close("b_t", b_t, 28.020856, 1e-5);
            c.close("c_t", c_t, 0.727359, 1e-5);
            let [r1, r2, r_one] = fit_residuals(&rel, &spec);
            c.below("residual at (q1,p0)", r1, 1e-6);
            c.below("residual at (q2,p0)", r2, 1e-6);
            c.below("residual at (1,1)", r_one, 1e-6);
        },
    );

    suite.run(3, "T3: ellipse eps=0.1", |c| {
        let ConicRelation::Ellipse { mu, nu, rho, .. } = fit_ellipse(t1_spec(), 0.1).unwrap()
        else {
            unreachable!()
        };
        c.close("mu", mu, 0.727359, 1e-6);
        c.close("nu", nu, 1.355234, 1e-6);
        c.close("rho", rho, 0.294877, 1e-6);
    });

    suite.run(4, "T4: (0,2),(0,5) at p0=0.4 -> parabola", |c| {
        table_row(
            c,
            pair(0, 2),
            pair(0, 5),
            0.4,
            [0.264365, 0.721012, 2.923499, 0.492688, 0.247594],
        );
    });

    suite.run(5, "T5: (2,1),(0,4) at p0=0.4 -> parabola", |c| {
        table_row(
            c,
            pair(2, 1),
            pair(0, 4),
            0.4,
            [0.640778, 0.916515, 20.006946, 0.778648, 0.019714],
        );
    });
    info("printed T5 beta 0.778648 differs from (q1+q2)/2 = 0.7786465 of the printed q1, q2");

    suite.run(6, "p_min of the T1 parabola and T2 hyperbola", |c| {
        let spec = t1_spec();
        c.close(
            "parabola p_min",
            fit_parabola(spec).unwrap().p_min().unwrap(),
            0.330613,
            1e-6,
        );
        c.close(
            "hyperbola p_min",
            fit_hyperbola(spec, 1.0).unwrap().p_min().unwrap(),
            0.244186,
            1e-6,
        );
    });

    suite.run(7, "intersect_curves((0,10),(1,2)) = {A, B}", |c| {
        let pts = intersect_curves(pair(0, 10), pair(1, 2), DEFAULT_INTERSECT_TOL).unwrap();
        let found: Vec<String> = pts
            .iter()
            .map(|pt| format!("({:.6}, {:.6})", pt.q, pt.p))
            .collect();
        c.details.push(format!("returned {}", found.join(", ")));
        if pts.len() != 2 {
            return c.fail(format!("expected 2 points, got {}", pts.len()));
        }
        for (pt, (q, p), name) in [(pts[0], published_a, "A"), (pts[1], published_b, "B")] {
            c.close(&format!("{name}.q"), pt.q, q, 1e-6);
            c.close(&format!("{name}.p"), pt.p, p, 1e-6);
        }
    });
    {
        let pts = intersect_curves(pair(0, 10), pair(2, 1), DEFAULT_INTERSECT_TOL).unwrap();
        let max = pts
            .iter()
            .zip([published_a, published_b])
            .map(|(pt, (q, p))| (pt.q - q).abs().max((pt.p - p).abs()))
            .fold(0.0, f64::max);
        info(format!(
            "intersect_curves((0,10),(2,1)) returns {} points, max deviation from A, B = {max:.1e}",
            pts.len()
        ));
        let gap31 = |(q, p): (f64, f64)| {
            (qpdeg_core::oscillator::energy_int(3, q, p)
                - qpdeg_core::oscillator::energy_int(1, q, p))
            .abs()
        };
        info(format!(
            "|E3 - E1| at published A = {:.3}",
            gap31(published_a)
        ));
    }

    suite.run(8, "line reductions through A and B", |c| {
        // A and B at full precision; the six-decimal points leave line B
        // uncertain at the 1e-5 level
        for (&(q, p), (alpha_ref, beta_ref), name) in two_level_crossings()
            .iter()
            .zip([(0.407722, 0.592278), (2.452649, -1.452649)])
            .zip(["A", "B"])
            .map(|((a, b), c)| (a, b, c))
        {
            let ConicRelation::Line { alpha, beta } = fit_line(q, p).unwrap() else {
                unreachable!()
            };
            c.close(&format!("alpha_{name}"), alpha, alpha_ref, 1e-6);
            c.close(&format!("beta_{name}"), beta, beta_ref, 1e-6);
        }
    });

    suite.run(9, "engineered degeneracies in reduced spectra", |c| {
        let t = designed_spectrum(pair(1, 1), pair(3, 1), 0.6);
        c.below("T1 |E1-E2|", gap(&t, 1, 2), 1e-8);
        c.below("T1 |E3-E4|", gap(&t, 3, 4), 1e-8);
        let t = designed_spectrum(pair(0, 2), pair(0, 5), 0.4);
        c.below("T4 |E2-E0|", gap(&t, 2, 0), 1e-8);
        c.below("T4 |E5-E0|", gap(&t, 5, 0), 1e-8);
        c.below("T4 |E5-E2|", gap(&t, 5, 2), 1e-8);
        let t = designed_spectrum(pair(2, 1), pair(0, 4), 0.4);
        c.below("T5 |E3-E2|", gap(&t, 3, 2), 1e-8);
        c.below("T5 |E4-E0|", gap(&t, 4, 0), 1e-8);
        for ((q, p), name) in [(published_a, "A"), (published_b, "B")] {
            let t = line_spectrum_in_q(&fit_line(q, p).unwrap(), q, 12).unwrap();
            let (g10, g31) = (gap(&t, 10, 0), gap(&t, 3, 1));
            c.details.push(format!(
                "line {name}: |E10-E0|={g10:.2e}, |E3-E1|={g31:.3e}"
            ));
            c.below(&format!("line {name} |E10-E0|"), g10, 1e-8);
            c.below(&format!("line {name} |E3-E1|"), g31, 1e-8);
        }
    });
    for (&(q, p), name) in two_level_crossings().iter().zip(["A", "B"]) {
        let t = line_spectrum_in_q(&fit_line(q, p).unwrap(), q, 12).unwrap();
        info(format!(
            "line {name} at the full-precision (0,10)x(2,1) crossing: |E10-E0|={:.1e}, |E3-E2|={:.1e}",
            gap(&t, 10, 0),
            gap(&t, 3, 2)
        ));
    }

    suite.run(10, "second-family axis endpoints", |c| {
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        c.close(
            "endpoint(0,2)",
            axis_endpoint(pair(0, 2)).unwrap(),
            golden,
            1e-9,
        );
        c.close(
            "endpoint(0,2) vs 0.618034",
            axis_endpoint(pair(0, 2)).unwrap(),
            0.618034,
            1e-6,
        );
        let ends: Vec<f64> = (2..=12)
            .map(|k| axis_endpoint(pair(0, k)).unwrap())
            .collect();
        c.details.push(format!("endpoints k=2..12: {ends:.6?}"));
        c.holds(
            "strictly increasing",
            ends.windows(2).all(|w| w[0] < w[1]) && ends.iter().all(|&e| e < 1.0),
            format!("{ends:?}"),
        );
    });

    suite.run(11, "randomized property suite (>= 1000 cases each)", |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0011);

        let mut worst = 0.0f64;
        for _ in 0..CASES {
            let pt = random_point(&mut rng);
            let x = rng.gen_range(0.0..20.0);
            let n = rng.gen_range(0..=20u32);
            for (a, b) in [
                (
                    qp_bracket(x, pt).unwrap(),
                    qp_bracket(x, pt.swapped()).unwrap(),
                ),
                (energy(x, pt).unwrap(), energy(x, pt.swapped()).unwrap()),
                (energy_level(n, pt), energy_level(n, pt.swapped())),
            ] {
                worst = worst.max((a - b).abs());
            }
        }
        c.below("q<->p symmetry", worst, 1e-12);

        for n in 0..=20u32 {
            let e = energy_level(n, DeformationPoint::CLASSICAL);
            c.holds(
                "classical ladder",
                e == n as f64 + 0.5,
                format!("E_{n}(1,1) = {e}"),
            );
            let e = energy(n as f64, DeformationPoint::CLASSICAL).unwrap();
            c.holds(
                "classical ladder (real n)",
                e == n as f64 + 0.5,
                format!("E({n}) at (1,1) = {e}"),
            );
        }

        let mut ground_ok = true;
        for _ in 0..CASES {
            let pt = random_point(&mut rng);
            ground_ok &= energy_level(0, pt) == 0.5 && energy(0.0, pt).unwrap() == 0.5;
        }
        c.holds("E_0 = 1/2", ground_ok, "ground level differs from 0.5");

        let mut worst = 0.0f64;
        for _ in 0..CASES {
            let rep = build_fock_rep(random_point(&mut rng), 8).unwrap();
            worst = worst.max(verify_algebra(&rep).max());
        }
        c.below("Fock algebra residual, dim 8", worst, 1e-12);

        let mut worst = 0.0f64;
        let mut counts = [0usize; 4];
        while counts.iter().any(|&k| k < CASES) {
            let (a, b) = (rng.gen_range(0.02..0.98), rng.gen_range(0.02..0.98));
            let p0 = rng.gen_range(0.05..0.95);
            let Ok(spec) = FitSpec::from_roots(a, b, p0) else {
                continue;
            };
            let rels = [
                fit_parabola(spec).ok(),
                fit_hyperbola(spec, rng.gen_range(0.2..2.0)).ok(),
                fit_ellipse(spec, rng.gen_range(0.02..1.0)).ok(),
                fit_line(a, p0).ok(),
            ];
            for (slot, rel) in rels.iter().enumerate() {
                let Some(rel) = rel else { continue };
                let (lo, hi) = match rel.p_extremes() {
                    Some(range) => range,
                    None => (rel.p_min().unwrap().max(0.0), 1.0),
                };
                if !(lo < hi) {
                    continue;
                }
                let p = lo + (hi - lo) * rng.gen::<f64>();
                let sign = if rng.gen::<bool>() {
                    Sign::Plus
                } else {
                    Sign::Minus
                };
                let Ok(q) = rel.invert(p, sign) else {
                    c.fail(format!(
                        "{} invert failed inside its range at p={p}",
                        rel.kind()
                    ));
                    continue;
                };
                worst = worst.max(rel.implicit_residual(q, p).abs());
                if let (ConicRelation::Parabola { .. } | ConicRelation::Line { .. }, Some(back)) =
                    (rel, rel.eval(q))
                {
                    worst = worst.max((back - p).abs());
                }
                counts[slot] += 1;
            }
        }
        c.below("conic invert/evaluate round trip", worst, 1e-10);
        c.details.push(format!(
            "conic cases (parabola, hyperbola, ellipse, line): {counts:?}"
        ));

        let mut worst = 0.0f64;
        let mut roots = 0usize;
        for _ in 0..CASES {
            let pr = random_pair(&mut rng);
            let p0 = rng.gen_range(0.01..1.0);
            for q in solve_q(pr, p0, DEFAULT_TOL).unwrap() {
                worst = worst.max(residual_raw(pr, q, p0).abs());
                roots += 1;
            }
        }
        c.below("solve_q root residual vs 10*tol", worst, 10.0 * DEFAULT_TOL);
        c.holds(
            "solve_q produced roots",
            roots > CASES / 4,
            format!("only {roots} roots"),
        );
    });

    suite.run(
        12,
        "solve_q against quadratic-formula oracles (50 random p0 each)",
        |c| {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0012);
            // E2=E1: q^2 + qp + p^2 = 1
            let oracle_11 = |p: f64| (-p + (4.0 - 3.0 * p * p).sqrt()) / 2.0;
            // E2=E0: q^2 + (p+1)q + p^2 + p - 1 = 0, real positive root for p < (sqrt5-1)/2
            let oracle_02 = |p: f64| {
                let b = p + 1.0;
                (-b + (b * b - 4.0 * (p * p + p - 1.0)).sqrt()) / 2.0
            };
            let mut worst = [0.0f64; 2];
            for _ in 0..50 {
                let p = rng.gen_range(0.01..0.99);
                match solve_q(pair(1, 1), p, DEFAULT_TOL).unwrap().as_slice() {
                    [q] => worst[0] = worst[0].max((q - oracle_11(p)).abs()),
                    other => c.fail(format!("(1,1) at p0={p}: expected one root, got {other:?}")),
                }
                let p = rng.gen_range(0.01..0.6);
                match solve_q(pair(0, 2), p, DEFAULT_TOL).unwrap().as_slice() {
                    [q] => worst[1] = worst[1].max((q - oracle_02(p)).abs()),
                    other => c.fail(format!("(0,2) at p0={p}: expected one root, got {other:?}")),
                }
            }
            c.below("(1,1) oracle", worst[0], 1e-10);
            c.below("(0,2) oracle", worst[1], 1e-10);
        },
    );

    println!(
        "acceptance: {} of {} criteria passed in {:.2} s",
        suite.total - suite.failed,
        suite.total,
        start.elapsed().as_secs_f64()
    );
    if suite.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
