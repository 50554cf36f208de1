//! One function per subcommand, each producing an [`Output`].

use serde_json::{json, Value};
use thiserror::Error;

use werner_core::decomposition::{
    moment_check, reconstruct, require_separable, schmidt_determinant, spherical_decomposition,
    wootters_decomposition, SphericalDecomposition, WoottersDecomposition, MOMENT_TOL,
};
use werner_core::hiddenvar::{estimate_correlation, estimate_local, HvEstimate};
use werner_core::separability::{ppt_test, werner_pt_eigenvalues_closed_form, DEFAULT_PPT_TOL};
use werner_core::states::werner;
use werner_core::{BlochVector, ComplexMatrix, Subsystem, WernerParam, SEPARABLE_Q_MAX};

use crate::report::{Cell, Check, Output, RunReport, Table};

/// Tolerances applied by the built-in checks.
pub mod tol {
    pub const WERNER_ENTRY: f64 = 1e-15;
    pub const PT_SPECTRUM: f64 = 1e-12;
    pub const RECONSTRUCTION: f64 = 1e-12;
    pub const NODE_INDEPENDENCE: f64 = 1e-13;
    pub const BLOCH_NORM: f64 = 1e-14;
    pub const SCHMIDT: f64 = 1e-12;
    pub const PHASE_RESIDUAL: f64 = 1e-13;
    pub const CROSS_DECOMPOSITION: f64 = 1e-11;
    /// Monte Carlo acceptance band in standard errors.
    pub const SIGMAS: f64 = 5.0;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    /// 2 for invalid arguments, 3 for separable-only requests with q > 1/3,
    /// 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidArgument(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Failure(_) => 1,
        }
    }
}

impl From<werner_core::Error> for CliError {
    fn from(e: werner_core::Error) -> Self {
        use werner_core::Error as E;
        match e {
            E::Domain { .. } => CliError::Domain(e.to_string()),
            E::InvalidParameter { .. } | E::NonUnitAxis { .. } => CliError::InvalidArgument(e.to_string()),
            other => CliError::Failure(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Parses a Werner parameter given as a decimal (`0.25`) or a ratio (`1/3`).
pub fn parse_q(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|e| format!("bad numerator in {s:?}: {e}"))?;
            let den: f64 = den.trim().parse().map_err(|e| format!("bad denominator in {s:?}: {e}"))?;
            num / den
        }
        None => s.parse().map_err(|e| format!("bad number {s:?}: {e}"))?,
    };
    if !value.is_finite() {
        return Err(format!("{s:?} is not finite"));
    }
    Ok(value)
}

/// `"1/3"` for the double nearest one third, so reports show both forms.
fn ratio_label(q: f64) -> Option<&'static str> {
    (q == SEPARABLE_Q_MAX).then_some("1/3")
}

fn with_q(mut report: RunReport, key: &str, q: f64) -> RunReport {
    report = report.param(key, q);
    if let Some(r) = ratio_label(q) {
        report = report.param(&format!("{key}_ratio"), r);
    }
    report
}

fn werner_param(q: f64) -> Result<WernerParam> {
    Ok(WernerParam::new(q)?)
}

/// `n` equally spaced points from `min` to `max`, endpoints exact.
pub fn linspace(min: f64, max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![min],
        _ => (0..n)
            .map(|i| if i == n - 1 { max } else { min + (max - min) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

fn matrix_json(m: &ComplexMatrix) -> Value {
    let part = |f: fn(&werner_core::Complex) -> f64| -> Vec<Vec<f64>> {
        (0..m.rows()).map(|i| (0..m.cols()).map(|j| f(&m[(i, j)])).collect()).collect()
    };
    json!({ "real": part(|z| z.re), "imag": part(|z| z.im) })
}

/// `W(q)` entries written out from the closed-form matrix.
pub fn werner_closed_form(q: f64) -> ComplexMatrix {
    #[rustfmt::skip]
    let entries = [
        1.0 - q, 0.0, 0.0, 0.0,
        0.0, 1.0 + q, -2.0 * q, 0.0,
        0.0, -2.0 * q, 1.0 + q, 0.0,
        0.0, 0.0, 0.0, 1.0 - q,
    ];
    ComplexMatrix::from_real(4, 4, &entries.map(|x| x / 4.0)).expect("4x4")
}

pub fn matrix(q: f64) -> Result<Output> {
    let param = werner_param(q)?;
    let w = werner(param);
    let mut report = with_q(RunReport::new("matrix"), "q", q);
    report.results = json!({ "matrix": matrix_json(&w) });
    report.checks = vec![
        Check::bound("closed_form_entries", w.max_abs_diff(&werner_closed_form(q))?, tol::WERNER_ENTRY),
        Check::bound("hermitian", w.hermitian_deviation(), tol::WERNER_ENTRY),
        Check::new("trace", w.trace()?.re, 1.0, tol::WERNER_ENTRY),
    ];
    let mut table = Table::new(&["row", "col", "re", "im"]);
    for i in 0..4 {
        for j in 0..4 {
            let z = w[(i, j)];
            table.push(vec![i.into(), j.into(), z.re.into(), z.im.into()]);
        }
    }
    Ok(Output {
        report,
        table,
        warnings: Vec::new(),
    })
}

pub fn ppt(qs: &[f64], sweep: Option<(f64, f64, usize)>) -> Result<Output> {
    let params: Vec<WernerParam> = qs.iter().map(|&q| werner_param(q)).collect::<Result<_>>()?;
    let mut report = RunReport::new("ppt").param("tol", DEFAULT_PPT_TOL);
    report = match sweep {
        Some((min, max, steps)) => {
            let r = with_q(report.param("mode", "sweep"), "q_min", min);
            with_q(r, "q_max", max).param("steps", steps)
        }
        None => with_q(report.param("mode", "single"), "q", qs[0]),
    };

    let mut table = Table::new(&["q", "lambda1", "lambda2", "lambda3", "lambda4", "separable"]);
    let mut rows = Vec::new();
    for p in params {
        let q = p.value();
        let verdict = ppt_test(&werner(p), DEFAULT_PPT_TOL)?;
        let closed = werner_pt_eigenvalues_closed_form(p);
        let spectrum_err = verdict
            .eigenvalues
            .iter()
            .zip(&closed)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        report.checks.push(Check::bound(format!("pt_spectrum[q={q}]"), spectrum_err, tol::PT_SPECTRUM));
        report.checks.push(Check::flag(
            format!("verdict[q={q}]"),
            verdict.separable,
            closed[0] >= -DEFAULT_PPT_TOL,
        ));
        rows.push(json!({
            "q": q,
            "eigenvalues": verdict.eigenvalues,
            "min_eigenvalue": verdict.min_eigenvalue,
            "separable": verdict.separable,
            "closed_form": closed,
        }));
        let mut row: Vec<Cell> = vec![q.into()];
        row.extend(verdict.eigenvalues.iter().map(|&e| Cell::from(e)));
        row.push(verdict.separable.into());
        table.push(row);
    }
    report.results = json!({ "rows": rows });
    Ok(Output {
        report,
        table,
        warnings: Vec::new(),
    })
}

pub fn ppt_sweep(min: f64, max: f64, steps: usize) -> Result<Output> {
    if steps == 0 {
        return Err(CliError::InvalidArgument("sweep needs at least one step".into()));
    }
    if min > max {
        return Err(CliError::InvalidArgument(format!("sweep range {min} > {max}")));
    }
    ppt(&linspace(min, max, steps), Some((min, max, steps)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Spherical,
    Wootters,
}

/// Built-in checks on a spherical decomposition; also returns the reconstruction.
pub fn spherical_checks(dec: &SphericalDecomposition, label: &str) -> (Vec<Check>, ComplexMatrix) {
    let q = dec.q();
    let rec = reconstruct(dec);
    let moments = moment_check(dec);
    let anti = dec.nodes().iter().map(|n| (n.a + n.b).norm()).fold(0.0, f64::max);
    let norm_err = dec
        .nodes()
        .iter()
        .map(|n| (n.a.norm() - dec.bloch_norm()).abs())
        .fold(0.0, f64::max);
    let checks = vec![
        Check::bound(
            format!("spherical_reconstruction{label}"),
            rec.max_abs_diff(&werner(q)).expect("4x4"),
            tol::RECONSTRUCTION,
        ),
        Check::bound(format!("spherical_weight_sum{label}"), moments.weight_error(), MOMENT_TOL),
        Check::bound(format!("spherical_first_moments{label}"), moments.first_moment_error(), MOMENT_TOL),
        Check::bound(format!("spherical_second_moments{label}"), moments.second_moment_error(), MOMENT_TOL),
        Check::bound(format!("spherical_f_moments{label}"), moments.f_moment_error(), MOMENT_TOL),
        Check::bound(format!("spherical_anti_alignment{label}"), anti, 0.0),
        Check::bound(format!("spherical_bloch_norm{label}"), norm_err, tol::BLOCH_NORM),
    ];
    (checks, rec)
}

pub fn wootters_checks(dec: &WoottersDecomposition, label: &str) -> (Vec<Check>, ComplexMatrix) {
    let rec = dec.reconstruct();
    let mut checks = vec![Check::bound(
        format!("wootters_reconstruction{label}"),
        rec.max_abs_diff(&werner(dec.q())).expect("4x4"),
        tol::RECONSTRUCTION,
    )];
    for (i, z) in dec.vectors().iter().enumerate() {
        checks.push(Check::bound(
            format!("wootters_schmidt_z{}{label}", i + 1),
            schmidt_determinant(z),
            tol::SCHMIDT,
        ));
    }
    checks.push(Check::bound(
        format!("wootters_phase_residual{label}"),
        dec.phase_residual(),
        tol::PHASE_RESIDUAL,
    ));
    (checks, rec)
}

pub fn decompose(q: f64, method: Method, n_theta: usize, n_phi: usize) -> Result<Output> {
    let param = werner_param(q)?;
    require_separable(param)?;
    let mut report = with_q(RunReport::new("decompose"), "q", q);
    let output = match method {
        Method::Spherical => {
            report = report
                .param("method", "spherical")
                .param("n_theta", n_theta)
                .param("n_phi", n_phi);
            let dec = spherical_decomposition(param, n_theta, n_phi)?;
            let (checks, rec) = spherical_checks(&dec, "");
            let m = moment_check(&dec);
            let mut table = Table::new(&["theta", "phi", "weight", "ax", "ay", "az", "bx", "by", "bz"]);
            let nodes: Vec<Value> = dec
                .nodes()
                .iter()
                .map(|n| {
                    let mut row: Vec<Cell> = vec![n.theta.into(), n.phi.into(), n.weight.into()];
                    row.extend(n.a.as_array().into_iter().chain(n.b.as_array()).map(Cell::from));
                    table.push(row);
                    json!({
                        "theta": n.theta,
                        "phi": n.phi,
                        "weight": n.weight,
                        "a": n.a.as_array(),
                        "b": n.b.as_array(),
                    })
                })
                .collect();
            report.results = json!({
                "bloch_norm": dec.bloch_norm(),
                "nodes": nodes,
                "reconstruction": matrix_json(&rec),
                "reconstruction_max_error": checks[0].observed,
                "moments": {
                    "weight_sum": m.weight_sum,
                    "first_a": m.first_a,
                    "first_b": m.first_b,
                    "second_ab": m.second_ab,
                    "second_f": m.second_f,
                },
            });
            report.checks = checks;
            Output {
                report,
                table,
                warnings: Vec::new(),
            }
        }
        Method::Wootters => {
            report = report.param("method", "wootters");
            let dec = wootters_decomposition(param)?;
            let (checks, rec) = wootters_checks(&dec, "");
            let mut header = vec!["index", "theta"];
            let cols = [
                "z00_re", "z00_im", "z01_re", "z01_im", "z10_re", "z10_im", "z11_re", "z11_im",
            ];
            header.extend(cols);
            header.push("schmidt_det");
            let mut table = Table::new(&header);
            let thetas = dec.thetas();
            let vectors: Vec<Value> = dec
                .vectors()
                .iter()
                .enumerate()
                .map(|(i, z)| {
                    let mut row: Vec<Cell> = vec![(i + 1).into(), thetas[i].into()];
                    for a in z {
                        row.push(a.re.into());
                        row.push(a.im.into());
                    }
                    row.push(schmidt_determinant(z).into());
                    table.push(row);
                    json!({
                        "re": z.map(|a| a.re),
                        "im": z.map(|a| a.im),
                        "norm_sq": z.iter().map(|a| a.norm_sqr()).sum::<f64>(),
                        "schmidt_determinant": schmidt_determinant(z),
                    })
                })
                .collect();
            report.results = json!({
                "thetas": thetas,
                "vectors": vectors,
                "reconstruction": matrix_json(&rec),
                "reconstruction_max_error": checks[0].observed,
                "phase_residual": dec.phase_residual(),
            });
            report.checks = checks;
            Output {
                report,
                table,
                warnings: Vec::new(),
            }
        }
    };
    Ok(output)
}

fn axis(name: &str, raw: [f64; 3], warnings: &mut Vec<String>) -> Result<BlochVector> {
    let v = BlochVector::from(raw);
    let unit = v
        .normalized()
        .ok_or_else(|| CliError::InvalidArgument(format!("axis --{name} must be nonzero and finite")))?;
    if (v.norm() - 1.0).abs() > werner_core::separability::AXIS_NORM_TOL {
        warnings.push(format!(
            "axis --{name} {raw:?} has norm {}; normalized to {:?}",
            v.norm(),
            unit.as_array()
        ));
    }
    Ok(unit)
}

fn estimate_json(e: &HvEstimate) -> Value {
    json!({ "mean": e.mean, "std_error": e.std_error, "n_samples": e.n_samples })
}

pub fn hvsim(q: f64, l: [f64; 3], m: [f64; 3], samples: u64, seed: u64) -> Result<Output> {
    let param = werner_param(q)?;
    require_separable(param)?;
    if samples == 0 {
        return Err(CliError::InvalidArgument("--samples must be at least 1".into()));
    }
    let mut warnings = Vec::new();
    let lu = axis("l", l, &mut warnings)?;
    let mu = axis("m", m, &mut warnings)?;

    let corr = estimate_correlation(param, lu, mu, samples, seed)?;
    let local_a = estimate_local(param, lu, Subsystem::A, samples, seed)?;
    let local_b = estimate_local(param, mu, Subsystem::B, samples, seed)?;
    let target = -q * lu.dot(mu);

    let mut report = with_q(RunReport::new("hvsim"), "q", q)
        .param("l", lu.as_array().to_vec())
        .param("m", mu.as_array().to_vec())
        .param("samples", samples)
        .param("sigmas", tol::SIGMAS);
    report.seed = Some(seed);
    report.results = json!({
        "correlation": estimate_json(&corr),
        "target": target,
        "local_a": estimate_json(&local_a),
        "local_b": estimate_json(&local_b),
    });
    report.checks = vec![
        Check::new("correlation", corr.mean, target, tol::SIGMAS * corr.std_error),
        Check::new("local_a", local_a.mean, 0.0, tol::SIGMAS * local_a.std_error),
        Check::new("local_b", local_b.mean, 0.0, tol::SIGMAS * local_b.std_error),
    ];

    let mut table = Table::new(&["observable", "mean", "std_error", "target", "n_samples", "seed", "pass"]);
    for (name, est, tgt, check) in [
        ("correlation", &corr, target, &report.checks[0]),
        ("local_a", &local_a, 0.0, &report.checks[1]),
        ("local_b", &local_b, 0.0, &report.checks[2]),
    ] {
        table.push(vec![
            name.into(),
            est.mean.into(),
            est.std_error.into(),
            tgt.into(),
            est.n_samples.into(),
            seed.into(),
            check.pass.into(),
        ]);
    }
    Ok(Output {
        report,
        table,
        warnings,
    })
}

pub fn verify(min: f64, max: f64, n: usize) -> Result<Output> {
    if n == 0 {
        return Err(CliError::InvalidArgument("grid needs at least one point".into()));
    }
    if min > max {
        return Err(CliError::InvalidArgument(format!("grid range {min} > {max}")));
    }
    let grid = linspace(min, max, n);
    let params: Vec<WernerParam> = grid.iter().map(|&q| werner_param(q)).collect::<Result<_>>()?;

    let mut report = with_q(RunReport::new("verify"), "q_min", min);
    report = with_q(report, "q_max", max).param("points", n);
    let mut skipped = Vec::new();

    for p in params {
        let q = p.value();
        let label = format!("[q={q}]");
        let w = werner(p);
        report.checks.push(Check::bound(
            format!("werner_entries{label}"),
            w.max_abs_diff(&werner_closed_form(q))?,
            tol::WERNER_ENTRY,
        ));
        let verdict = ppt_test(&w, DEFAULT_PPT_TOL)?;
        let closed = werner_pt_eigenvalues_closed_form(p);
        let spectrum_err = verdict
            .eigenvalues
            .iter()
            .zip(&closed)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        report.checks.push(Check::bound(format!("pt_spectrum{label}"), spectrum_err, tol::PT_SPECTRUM));
        report.checks.push(Check::flag(
            format!("verdict{label}"),
            verdict.separable,
            closed[0] >= -DEFAULT_PPT_TOL,
        ));

        if let Err(e) = require_separable(p) {
            skipped.push(json!({ "q": q, "reason": format!("decomposition checks skipped: {e}") }));
            continue;
        }
        let coarse = spherical_decomposition(p, 2, 3)?;
        let fine = spherical_decomposition(p, 8, 16)?;
        let (c1, rec_coarse) = spherical_checks(&coarse, &format!("[q={q},n=2x3]"));
        let (c2, rec_fine) = spherical_checks(&fine, &format!("[q={q},n=8x16]"));
        report.checks.extend(c1);
        report.checks.extend(c2);
        report.checks.push(Check::bound(
            format!("spherical_node_independence{label}"),
            rec_coarse.max_abs_diff(&rec_fine)?,
            tol::NODE_INDEPENDENCE,
        ));
        let wd = wootters_decomposition(p)?;
        let (c3, rec_w) = wootters_checks(&wd, &label);
        report.checks.extend(c3);
        report.checks.push(Check::bound(
            format!("cross_decomposition{label}"),
            rec_fine.max_abs_diff(&rec_w)?,
            tol::CROSS_DECOMPOSITION,
        ));
    }

    let failed = report.checks.iter().filter(|c| !c.pass).count();
    report.results = json!({
        "grid": grid,
        "skipped": skipped,
        "n_checks": report.checks.len(),
        "n_failed": failed,
    });
    let mut table = Table::new(&["name", "pass", "observed", "expected", "tolerance"]);
    for c in &report.checks {
        table.push(vec![
            c.name.clone().into(),
            c.pass.into(),
            c.observed.into(),
            c.expected.into(),
            c.tolerance.into(),
        ]);
    }
    Ok(Output {
        report,
        table,
        warnings: Vec::new(),
    })
}
