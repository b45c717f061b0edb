//! Exact-versus-asymptotic comparison, error metrics over the validity
//! window, ladder order fits and report serialization.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cases::{
    exact_values, reduction_pipeline, solve_case_over, CaseStudy, Comparison, ManifoldResult,
};
use crate::error::{Error, Result};
use crate::renorm::GlobalSolution;

/// Ground truth on `0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub values: Vec<Complex64>,
    /// Second component for two-variable systems.
    pub companion: Option<Vec<Complex64>>,
}

/// Iterates the unexpanded recurrence; linear cases are cross-checked
/// against their closed form.
pub fn iterate_exact(case: &CaseStudy, n_max: usize) -> Result<Trajectory> {
    case.validate()?;
    let (values, companion) = exact_values(case, n_max)?;
    Ok(Trajectory { values, companion })
}

/// One line of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub n: i64,
    pub exact_re: f64,
    pub exact_im: f64,
    pub asym_re: f64,
    pub asym_im: f64,
    pub abs_err: f64,
    pub residual: f64,
}

pub const CSV_HEADER: &str = "n,exact_re,exact_im,asym_re,asym_im,abs_err,residual";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompareMode {
    Pointwise,
    /// Rows hold envelopes rather than values.
    Envelope { period: usize },
}

impl From<Comparison> for CompareMode {
    fn from(c: Comparison) -> Self {
        match c {
            Comparison::Pointwise => CompareMode::Pointwise,
            Comparison::Envelope { period } => CompareMode::Envelope { period },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub case: CaseStudy,
    pub order: usize,
    pub mode: CompareMode,
    /// Rows cover `n = 0..=window`.
    pub window: usize,
    pub rows: Vec<ReportRow>,
    pub sup_error: f64,
    /// `max abs_err / |asym|` over the window.
    pub sup_rel_error: f64,
    pub sup_residual: f64,
    /// Reduction case only: sup of the manifold distance over the window.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifold_distance: Option<f64>,
    /// Fitted over a ladder of at least three points.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub empirical_order: Option<f64>,
    /// Not serialized, so report files stay reproducible.
    #[serde(skip)]
    pub wall_time: Duration,
}

/// Local maxima of `|y|` over sliding windows of one period, open at both
/// ends so that adjacent peaks of `|y|` (half a period apart) stay
/// separate, interpolated linearly in between and held flat at the ends.
pub fn envelope(values: &[Complex64], period: usize) -> Vec<f64> {
    let mag: Vec<f64> = values.iter().map(|v| v.norm()).collect();
    let len = mag.len();
    if len == 0 {
        return vec![];
    }
    let half = (period.saturating_sub(1) / 2).max(1);
    let peaks: Vec<usize> = (0..len)
        .filter(|&n| {
            let lo = n.saturating_sub(half);
            let hi = (n + half).min(len - 1);
            // first maximum in the window, so flat plateaus count once
            let max = mag[lo..=hi].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            mag[n] == max && mag[lo..n].iter().all(|&v| v < max)
        })
        .collect();
    (0..len)
        .map(|n| match peaks.binary_search(&n) {
            Ok(_) => mag[n],
            Err(0) => mag[peaks[0]],
            Err(i) if i == peaks.len() => mag[peaks[i - 1]],
            Err(i) => {
                let (a, b) = (peaks[i - 1], peaks[i]);
                let t = (n - a) as f64 / (b - a) as f64;
                mag[a] + t * (mag[b] - mag[a])
            }
        })
        .collect()
}

/// Amplitude envelope of an assembled solution, `sum |component(n)|`.
pub fn solution_envelope(global: &GlobalSolution, n: i64) -> f64 {
    let single = |i: usize| {
        let mut g = global.clone();
        g.components = vec![global.components[i].clone()];
        g.evaluate(n).norm()
    };
    (0..global.components.len()).map(single).sum()
}

/// Tabulates exact against asymptotic values over `0..=window`.
pub fn compare(
    case: &CaseStudy,
    asym: &GlobalSolution,
    exact: &Trajectory,
    window: usize,
    mode: CompareMode,
) -> Result<VerificationReport> {
    if exact.values.len() <= window {
        return Err(Error::Verify(format!(
            "window {window} exceeds trajectory length {}",
            exact.values.len()
        )));
    }
    let exact_env = match &mode {
        CompareMode::Envelope { period } => Some(envelope(&exact.values[..=window], *period)),
        CompareMode::Pointwise => None,
    };
    let y = |k: i64| asym.evaluate(k);
    let rows: Vec<ReportRow> = (0..=window)
        .map(|i| {
            let n = i as i64;
            let (e, a) = match &exact_env {
                Some(env) => (
                    Complex64::new(env[i], 0.0),
                    Complex64::new(solution_envelope(asym, n), 0.0),
                ),
                None => (exact.values[i], asym.evaluate(n)),
            };
            ReportRow {
                n,
                exact_re: e.re,
                exact_im: e.im,
                asym_re: a.re,
                asym_im: a.im,
                abs_err: (e - a).norm(),
                residual: case.residual(&y, n).norm(),
            }
        })
        .collect();
    let sup = |f: &dyn Fn(&ReportRow) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    Ok(VerificationReport {
        case: case.clone(),
        order: 1,
        mode,
        window,
        sup_error: sup(&|r| r.abs_err),
        sup_rel_error: sup(&|r| {
            let a = r.asym_re.hypot(r.asym_im);
            if a > 0.0 {
                r.abs_err / a
            } else if r.abs_err == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        }),
        sup_residual: sup(&|r| r.residual),
        manifold_distance: None,
        empirical_order: None,
        wall_time: Duration::ZERO,
        rows,
    })
}

/// `|y(n) - (g(x) - eps g'(x) f(x, g(x)))|` at `x = x(n)`.
pub fn manifold_distance(result: &ManifoldResult, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter()
        .zip(y)
        .map(|(&xn, &yn)| (yn - result.manifold(xn)).abs())
        .collect()
}

/// Runs the full pipeline for one case. `window` defaults to the case's
/// validity window.
pub fn verify_case(case: &CaseStudy, order: usize, window: Option<usize>) -> Result<VerificationReport> {
    let start = Instant::now();
    case.validate()?;
    let window = window.unwrap_or_else(|| case.window());
    let sol = solve_case_over(case, order, window + 2)?;
    let exact = iterate_exact(case, window)?;
    let mut report = compare(case, &sol.global, &exact, window, sol.comparison.into())?;
    report.order = order;
    if let CaseStudy::Reduction(p) = case {
        let r = reduction_pipeline(p, window)?;
        let d = manifold_distance(&r, &r.x, &r.y);
        report.manifold_distance = Some(d.into_iter().fold(0.0, f64::max));
    }
    report.wall_time = start.elapsed();
    Ok(report)
}

/// Least-squares slope of `log sup_error` against `log eps`. Any zero error
/// yields `f64::INFINITY`.
pub fn order_fit(ladder: &[(f64, f64)]) -> Result<f64> {
    if ladder.len() < 3 {
        return Err(Error::Verify(format!(
            "order fit needs at least 3 ladder points, got {}",
            ladder.len()
        )));
    }
    for (i, a) in ladder.iter().enumerate() {
        if !(a.0 > 0.0) || ladder[..i].iter().any(|b| b.0 == a.0) {
            return Err(Error::Verify("ladder values must be positive and distinct".into()));
        }
    }
    if ladder.iter().any(|&(_, e)| e == 0.0) {
        return Ok(f64::INFINITY);
    }
    let pts: Vec<(f64, f64)> = ladder.iter().map(|&(h, e)| (h.ln(), e.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderReport {
    pub parameter: String,
    pub values: Vec<f64>,
    pub reports: Vec<VerificationReport>,
    pub empirical_order: Option<f64>,
    /// Reduction case only: order of the manifold distance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifold_order: Option<f64>,
}

/// Verifies `case` at each value of its primary parameter, each over its
/// own validity window unless `window` is given.
pub fn verify_ladder(
    case: &CaseStudy,
    ladder: &[f64],
    order: usize,
    window: Option<usize>,
) -> Result<LadderReport> {
    let mut reports = ladder
        .iter()
        .map(|&v| verify_case(&case.clone().with_primary(v), order, window))
        .collect::<Result<Vec<_>>>()?;
    let fit = |metric: &dyn Fn(&VerificationReport) -> Option<f64>| -> Result<Option<f64>> {
        if ladder.len() < 3 {
            return Ok(None);
        }
        let pts: Option<Vec<(f64, f64)>> = ladder
            .iter()
            .zip(&reports)
            .map(|(&v, r)| metric(r).map(|m| (v, m)))
            .collect();
        pts.map(|p| order_fit(&p)).transpose()
    };
    let empirical_order = fit(&|r| Some(r.sup_error))?;
    let manifold_order = fit(&|r| r.manifold_distance)?;
    for r in &mut reports {
        r.empirical_order = empirical_order;
    }
    Ok(LadderReport {
        parameter: case.primary_parameter().to_string(),
        values: ladder.to_vec(),
        reports,
        empirical_order,
        manifold_order,
    })
}

/// Shortest round-trip decimal, so equal reports give equal bytes.
fn num(v: f64) -> String {
    format!("{v:?}")
}

pub fn report_csv(report: &VerificationReport) -> String {
    let mut out = String::with_capacity(64 * (report.rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.n,
            num(r.exact_re),
            num(r.exact_im),
            num(r.asym_re),
            num(r.asym_im),
            num(r.abs_err),
            num(r.residual)
        ));
    }
    out
}

pub fn report_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// One row per ladder value: the parameter, sup error, sup residual and,
/// when fitted, the order on the final line.
pub fn ladder_csv(ladder: &LadderReport) -> String {
    let mut out = format!("{},sup_error,sup_rel_error,sup_residual\n", ladder.parameter);
    for (v, r) in ladder.values.iter().zip(&ladder.reports) {
        out.push_str(&format!(
            "{},{},{},{}\n",
            num(*v),
            num(r.sup_error),
            num(r.sup_rel_error),
            num(r.sup_residual)
        ));
    }
    if let Some(p) = ladder.empirical_order {
        out.push_str(&format!("# empirical_order,{}\n", num(p)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cases::{IllustrationParams, ReductionParams};

    #[test]
    fn illustration_without_forcing_is_four_periodic() {
        // eps = 0 is outside the case range, so iterate the oracle directly
        let case = CaseStudy::Illustration(IllustrationParams {
            epsilon: 1e-300,
            ..Default::default()
        });
        let t = iterate_exact(&case, 12).unwrap();
        let want = [1.0, 0.0, -1.0, 0.0];
        for (n, v) in t.values.iter().enumerate() {
            assert!((v.re - want[n % 4]).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_against_itself_has_zero_error() {
        let case = CaseStudy::from_name("htr-cubic").unwrap();
        let t = iterate_exact(&case, 100).unwrap();
        let g = GlobalSolution {
            components: vec![crate::renorm::Component {
                name: "y".into(),
                basis: crate::renorm::Basis::Power(Complex64::new(1.0, 0.0)),
                growth: crate::renorm::Growth::Tabulated(t.values.clone()),
                weight: Complex64::new(1.0, 0.0),
                value: t.values[0],
                free: false,
            }],
            form: Default::default(),
            validity_scale: 100.0,
        };
        let r = compare(&case, &g, &t, 98, CompareMode::Pointwise).unwrap();
        assert_eq!(r.sup_error, 0.0);
        assert!(r.sup_residual < 1e-15);
    }

    #[test]
    fn window_must_fit_the_trajectory() {
        let case = CaseStudy::from_name("htr-cubic").unwrap();
        let t = iterate_exact(&case, 10).unwrap();
        let g = crate::cases::solve_case(&case, 1).unwrap().global;
        assert!(compare(&case, &g, &t, 11, CompareMode::Pointwise).is_err());
    }

    #[test]
    fn van_der_pol_trajectory_is_bounded() {
        let case = CaseStudy::from_name("van-der-pol").unwrap();
        let t = iterate_exact(&case, 200).unwrap();
        assert!(t.values.iter().all(|v| v.norm() < 0.1));
    }

    #[test]
    fn order_fit_on_synthetic_ladders() {
        let quad: Vec<(f64, f64)> = [0.1, 0.05, 0.025].iter().map(|&e| (e, 3.0 * e * e)).collect();
        assert!((order_fit(&quad).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(order_fit(&[(0.1, 0.0), (0.05, 1.0), (0.02, 1.0)]).unwrap(), f64::INFINITY);
        assert!(order_fit(&[(0.1, 1.0), (0.05, 1.0)]).is_err());
        assert!(order_fit(&[(0.1, 1.0), (0.1, 1.0), (0.05, 1.0)]).is_err());
    }

    #[test]
    fn envelope_of_a_growing_cosine() {
        let theta = std::f64::consts::PI / 5.0;
        let y: Vec<Complex64> = (0..100)
            .map(|n| Complex64::new(1.01f64.powi(n) * (theta * n as f64).cos(), 0.0))
            .collect();
        let env = envelope(&y, 10);
        for n in 0..95 {
            let want = 1.01f64.powi(n as i32);
            assert!((env[n] - want).abs() / want < 0.01, "n={n}");
        }
    }

    #[test]
    fn manifold_distance_on_and_off_the_manifold() {
        let eps = 0.02;
        let on = reduction_pipeline(&ReductionParams::default(), 50).unwrap();
        let d = manifold_distance(&on, &on.x, &on.y);
        assert!(d.iter().all(|&v| v <= 5.0 * eps * eps));

        let p = ReductionParams {
            y0: Some(on.y[0] + 0.1),
            ..Default::default()
        };
        let off = reduction_pipeline(&p, 50).unwrap();
        let d = manifold_distance(&off, &off.x, &off.y);
        assert!(d[0] > 0.09);
        assert!(d[30..].iter().all(|&v| v <= 5.0 * eps * eps));

        // frozen slow variable: y(n) settles onto g(x0)
        let frozen = ReductionParams {
            f: crate::cases::Poly2 { terms: vec![] },
            y0: Some(0.9),
            ..Default::default()
        };
        let r = reduction_pipeline(&frozen, 20).unwrap();
        let d = manifold_distance(&r, &r.x, &r.y);
        assert!(d[0] > 0.6 && d[1..].iter().all(|&v| v < 1e-15));
    }

    #[test]
    fn reports_are_reproducible() {
        for name in crate::cases::CASE_NAMES {
            let case = CaseStudy::from_name(name).unwrap();
            let a = verify_case(&case, 1, None).unwrap();
            let b = verify_case(&case, 1, None).unwrap();
            assert_eq!(report_csv(&a), report_csv(&b));
            assert_eq!(report_json(&a), report_json(&b));
            assert_eq!(a.rows.len(), case.window() + 1);
            let sup = a.rows.iter().map(|r| r.abs_err).fold(0.0, f64::max);
            assert_eq!(a.sup_error, sup);
        }
    }

    #[test]
    fn csv_layout() {
        let case = CaseStudy::from_name("illustration").unwrap();
        let r = verify_case(&case, 1, Some(5)).unwrap();
        let csv = report_csv(&r);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 7);
        assert!(lines[1].starts_with("0,1.0,"));
        let back: VerificationReport = serde_json::from_str(&report_json(&r)).unwrap();
        assert_eq!(back.rows, r.rows);
    }

    #[test]
    fn ladder_reports_an_order_only_for_three_points() {
        let case = CaseStudy::from_name("illustration").unwrap();
        let two = verify_ladder(&case, &[0.1, 0.05], 1, None).unwrap();
        assert!(two.empirical_order.is_none());
        let three = verify_ladder(&case, &[0.1, 0.05, 0.025], 1, None).unwrap();
        assert!(three.empirical_order.is_some());
        assert!(ladder_csv(&three).lines().last().unwrap().starts_with("# empirical_order,"));
    }
}
