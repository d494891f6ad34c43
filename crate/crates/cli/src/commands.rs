use std::path::Path;

use fig8::jones::{decomposition_check, jones_at_cusp, product_identity_check};
use fig8::modularity::{estimate_c, modularity_ratio, qmccj_rhs, zagier_ratio, zagier_rhs};
use fig8::qdilog::{gcd, identity_suite, l_k_error, SuiteStats};
use fig8::region::{
    c_pm, check_f_sigma, components_d_cap_e, f_p12_margin, grid_scan, polygon, rbar_connects, runder_connects,
};
use fig8::saddle::{f_prime, f_second, kappa, saddle_data, theorem_ratio};
use fig8::{Context, Error, LogC64, ModularMatrix, Quadrature, C64};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::args::NRange;
use crate::failure::Failure;
use crate::output::{Format, Sink};

pub struct Common<'a> {
    pub tol: f64,
    pub output: Option<&'a Path>,
    pub format: Format,
}

impl Common<'_> {
    /// Quadrature settings; below 1e-12 double precision cannot follow.
    fn quadrature(&self) -> Quadrature {
        Quadrature::default().with_tol(self.tol.max(1e-12))
    }
}

fn warn_gcd(p: u32, n: u32) {
    let g = gcd(p, n);
    if g > 1 {
        eprintln!("warning: gcd(p, N) = gcd({p}, {n}) = {g}");
    }
}

#[derive(Serialize)]
struct JonesRow {
    n: u32,
    u: f64,
    p: u32,
    logmag: f64,
    phase: f64,
}

pub fn jones(c: &Common, u: f64, p: u32, n: NRange, step: u32) -> Result<(), Failure> {
    let ns = n.values(step);
    let header = json!({"u": u, "p": p, "n": [n.lo, n.hi], "step": step});
    let mut sink = Sink::open(c.output, c.format, "jones", header)?;
    ns.iter().for_each(|&n| warn_gcd(p, n));
    let rows = ns
        .par_iter()
        .map(|&n| {
            let v = jones_at_cusp(&Context::new(u, p, n)?);
            Ok(JonesRow {
                n,
                u,
                p,
                logmag: v.logmag,
                phase: v.phase,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    for r in &rows {
        sink.row(r)?;
    }
    sink.finish()
}

#[derive(Serialize)]
struct TheoremRow {
    n: u32,
    u: f64,
    p: u32,
    coprime: bool,
    status: &'static str,
    ratio_re: Option<f64>,
    ratio_im: Option<f64>,
    abs_err: Option<f64>,
}

pub fn theorem(c: &Common, u: f64, p: u32, n: NRange, step: u32, include_noncoprime: bool) -> Result<(), Failure> {
    let ns = n.values(step);
    let header = json!({"u": u, "p": p, "n": [n.lo, n.hi], "step": step, "include_noncoprime": include_noncoprime});
    let mut sink = Sink::open(c.output, c.format, "theorem", header)?;
    ns.iter().for_each(|&n| warn_gcd(p, n));
    let rows = ns
        .par_iter()
        .map(|&n| {
            let coprime = gcd(p, n) == 1;
            if !coprime && !include_noncoprime {
                return Ok(TheoremRow {
                    n,
                    u,
                    p,
                    coprime,
                    status: "skipped",
                    ratio_re: None,
                    ratio_im: None,
                    abs_err: None,
                });
            }
            let r = theorem_ratio(&Context::new(u, p, n)?, include_noncoprime)?;
            Ok(TheoremRow {
                n,
                u,
                p,
                coprime,
                status: "ok",
                ratio_re: Some(r.re),
                ratio_im: Some(r.im),
                abs_err: Some((r - 1.0).norm()),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    for r in &rows {
        sink.row(r)?;
    }
    sink.finish()
}

#[derive(Serialize)]
struct LemmaRow {
    check: String,
    params: String,
    /// "residual" rows pass when value <= threshold, "margin" rows when value > threshold.
    kind: &'static str,
    value: f64,
    threshold: f64,
    pass: bool,
}

impl LemmaRow {
    fn residual(check: &str, params: String, value: f64, threshold: f64) -> Self {
        LemmaRow {
            check: check.into(),
            params,
            kind: "residual",
            value,
            threshold,
            pass: value <= threshold,
        }
    }

    fn margin(check: &str, params: String, value: f64) -> Self {
        LemmaRow {
            check: check.into(),
            params,
            kind: "margin",
            value,
            threshold: 0.0,
            pass: value > 0.0,
        }
    }
}

fn suite_row(name: &str, s: &SuiteStats<f64>, threshold: f64) -> LemmaRow {
    let params = match s.worst {
        Some(w) => format!("{} samples; worst at z = {}, (u, p, N) = ({}, {}, {})", s.samples, w.z, w.u, w.p, w.n),
        None => format!("{} samples", s.samples),
    };
    LemmaRow::residual(name, params, s.max_residual, threshold)
}

/// Residual thresholds are fixed multiples of `tol`, so a smaller `--tol`
/// tightens every residual check.
pub fn lemmas(c: &Common, seed: u64, samples: usize) -> Result<(), Failure> {
    let cfg = c.quadrature();
    let tol = c.tol;
    let header = json!({"tol": tol, "seed": seed, "samples": samples});
    let mut rows = Vec::new();

    for k in 0..3u8 {
        let mut worst: f64 = 0.0;
        for i in 0..10 {
            for j in 0..10 {
                let z = C64::new(0.05 + 0.1 * i as f64, -1.0 + 2.0 * j as f64 / 9.0);
                worst = worst.max(l_k_error(k, z, &cfg)?);
            }
        }
        rows.push(LemmaRow::residual("l_k_closed_form", format!("k = {k}, 10 x 10 grid"), worst, 100.0 * tol));
    }

    let suite = identity_suite(seed, samples, &cfg)?;
    rows.push(suite_row("shift_identity", &suite.shift, 1e3 * tol));
    rows.push(suite_row("gamma_half", &suite.gamma_half, 1e3 * tol));
    rows.push(suite_row("unit_shift", &suite.unit_shift, 1e3 * tol));

    let cases: Vec<(f64, u32, u32)> = [0.2, 0.5, 0.9]
        .into_iter()
        .flat_map(|u| [(u, 2, 97), (u, 3, 101)])
        .collect();
    let decomp = cases
        .par_iter()
        .map(|&(u, p, n)| Ok((u, p, n, decomposition_check(&Context::new(u, p, n)?, &cfg)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    for (u, p, n, r) in decomp {
        rows.push(LemmaRow::residual("decomposition", format!("(u, p, N) = ({u}, {p}, {n})"), r, 10.0 * tol));
    }

    for (u, p, n) in [(0.5, 2, 41), (0.5, 4, 12), (0.5, 6, 9)] {
        let ctx = Context::new(u, p, n)?;
        let mut worst: f64 = 0.0;
        let mut used = 0;
        for k in 1..n {
            match product_identity_check(k, &ctx, &cfg) {
                Ok(r) => {
                    worst = worst.max(r);
                    used += 1;
                }
                Err(Error::ExcludedIndex(_)) => {}
                Err(e) => return Err(e.into()),
            }
        }
        let params = format!("(u, p, N) = ({u}, {p}, {n}), {used} admissible k");
        rows.push(LemmaRow::residual("product_identity", params, worst, 1e3 * tol));
    }

    for u in [0.2, 0.5, 0.9] {
        let s = saddle_data(u, 2)?;
        let params = format!("u = {u}, p = 2");
        rows.push(LemmaRow::residual("saddle_f_prime", params.clone(), f_prime(s.sigma0, u, 2)?.norm(), tol));
        let closed = s.xi * C64::new((2.0 * u.cosh() + 1.0) * (2.0 * u.cosh() - 3.0), 0.0).sqrt();
        rows.push(LemmaRow::residual("saddle_f_second", params, (f_second(s.sigma0, u, 2) - closed).norm(), tol));
    }

    for u in [0.05, 0.2, 0.5, 0.9] {
        for p in 1..=3 {
            let f = check_f_sigma(u, p)?;
            let params = format!("u = {u}, p = {p}");
            rows.push(LemmaRow::margin("re_f0_positive", params.clone(), f.re_f0));
            rows.push(LemmaRow::margin("re_f0_below_saddle", params, f.re_f_sigma - f.re_f0));
            for m in 0..p {
                let params = format!("u = {u}, p = {p}, m = {m}");
                rows.push(LemmaRow::margin("f_p12_below_saddle", params, f_p12_margin(u, p, m)?));
            }
        }
    }
    let k: f64 = kappa();
    for p in 1..=6 {
        for m in 0..p {
            rows.push(LemmaRow::margin("c_pm_negative", format!("u = kappa, p = {p}, m = {m}"), -c_pm(k, p, m)?));
        }
    }

    let mut sink = Sink::open(c.output, c.format, "lemmas", header)?;
    for r in &rows {
        sink.row(r)?;
    }
    sink.finish()?;
    let failed: Vec<String> = rows
        .iter()
        .filter(|r| !r.pass)
        .map(|r| format!("{} [{}]", r.check, r.params))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Assertion(failed.join("; ")))
    }
}

#[derive(Serialize)]
struct RegionRow {
    x: f64,
    y: f64,
    re_phi: Option<f64>,
    in_u: bool,
    in_e: bool,
    in_d: bool,
    in_rbar: bool,
    in_runder: bool,
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn region(c: &Common, p: u32, m: u32, u: f64, res: (usize, usize), nu: f64) -> Result<(), Failure> {
    let grid = grid_scan(m, u, p, res, nu)?;
    let poly = polygon(m, u, p)?;
    let components = components_d_cap_e(&grid)?;
    let header = json!({
        "p": p, "m": m, "u": u, "nu": nu,
        "resolution": [grid.cols(), grid.rows()],
        "bounds": {"re": [grid.b_minus(), grid.b_plus()], "im": [grid.ys[0], grid.ys[grid.rows() - 1]]},
        "sigma": pair(grid.sigma),
        "threshold": grid.threshold,
        "components": components,
        "rbar_connects": rbar_connects(&grid),
        "runder_connects": runder_connects(&grid),
        "polygon": {
            "p0": pair(poly.p0), "p1": pair(poly.p1), "p2": pair(poly.p2), "p3": pair(poly.p3),
            "p4": pair(poly.p4), "p5": pair(poly.p5), "p12": pair(poly.p12), "p34": pair(poly.p34),
            "p45": pair(poly.p45), "p50": pair(poly.p50),
        },
    });
    let mut sink = Sink::open(c.output, c.format, "region", header)?;
    for (j, &y) in grid.ys.iter().enumerate() {
        for (i, &x) in grid.xs.iter().enumerate() {
            let cell = grid.cell(i, j);
            sink.row(&RegionRow {
                x,
                y,
                re_phi: cell.in_u.then_some(cell.re_phi),
                in_u: cell.in_u,
                in_e: cell.in_e,
                in_d: cell.in_d,
                in_rbar: cell.in_rbar,
                in_runder: cell.in_runder,
            })?;
        }
    }
    sink.finish()?;
    if components == 2 {
        Ok(())
    } else {
        Err(Failure::Assertion(format!("D_m and E_m meet in {components} components, expected 2")))
    }
}

#[derive(Serialize, Default)]
struct ModRow {
    kind: &'static str,
    eta: String,
    u: Option<f64>,
    p: Option<u32>,
    n: Option<u32>,
    ratio_logmag: Option<f64>,
    ratio_phase: Option<f64>,
    rhs_logmag: Option<f64>,
    rhs_phase: Option<f64>,
    c_re: Option<f64>,
    c_im: Option<f64>,
    spread: Option<f64>,
}

fn eta_label(e: &ModularMatrix) -> String {
    format!("{},{},{},{}", e.a, e.b, e.c, e.d)
}

fn quotient(num: LogC64, den: LogC64) -> C64 {
    (num / den).to_complex()
}

pub fn modularity(
    c: &Common,
    eta: ModularMatrix,
    u: f64,
    ps: &[u32],
    ns: &[u32],
    zagier_ns: &[u32],
) -> Result<(), Failure> {
    if eta.c <= 0 {
        return Err(Failure::Input("ratio experiments need c > 0".into()));
    }
    let label = eta_label(&eta);
    let header = json!({"eta": label, "u": u, "p": ps, "n": ns, "zagier_n": zagier_ns});
    let mut sink = Sink::open(c.output, c.format, "modularity", header)?;

    let jobs: Vec<(u32, u32)> = ps.iter().flat_map(|&p| ns.iter().map(move |&n| (p, n))).collect();
    let ratios = jobs
        .par_iter()
        .map(|&(p, n)| {
            let ctx = Context::new(u, p, n)?;
            Ok((p, n, modularity_ratio(&eta, &ctx)?, qmccj_rhs(&eta, &ctx, C64::new(1.0, 0.0))?))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    for (p, n, r, rhs) in ratios {
        let q = quotient(r, rhs);
        sink.row(&ModRow {
            kind: "ratio",
            eta: label.clone(),
            u: Some(u),
            p: Some(p),
            n: Some(n),
            ratio_logmag: Some(r.logmag),
            ratio_phase: Some(r.phase),
            rhs_logmag: Some(rhs.logmag),
            rhs_phase: Some(rhs.phase),
            c_re: Some(q.re),
            c_im: Some(q.im),
            ..ModRow::default()
        })?;
    }

    let est = estimate_c(&eta, u, ps, ns)?;
    for e in &est.per_p {
        sink.row(&ModRow {
            kind: "estimate",
            eta: label.clone(),
            u: Some(u),
            p: Some(e.p),
            c_re: Some(e.estimate.re),
            c_im: Some(e.estimate.im),
            ..ModRow::default()
        })?;
    }
    sink.row(&ModRow {
        kind: "spread",
        eta: label.clone(),
        u: Some(u),
        spread: Some(est.spread),
        ..ModRow::default()
    })?;

    // the same law at u = 0, with the closed-form constant
    let zjobs: Vec<(u32, u32)> = ps
        .iter()
        .flat_map(|&p| zagier_ns.iter().map(move |&n| (p, n)))
        .filter(|&(p, n)| gcd(p, n) == 1)
        .collect();
    let zag = zjobs
        .par_iter()
        .map(|&(p, n)| Ok((p, n, zagier_ratio::<f64>(&eta, p, n)?, zagier_rhs::<f64>(&eta, p, n)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    for (p, n, r, rhs) in zag {
        let q = quotient(r, rhs);
        sink.row(&ModRow {
            kind: "zagier",
            eta: label.clone(),
            p: Some(p),
            n: Some(n),
            ratio_logmag: Some(r.logmag),
            ratio_phase: Some(r.phase),
            rhs_logmag: Some(rhs.logmag),
            rhs_phase: Some(rhs.phase),
            c_re: Some(q.re),
            c_im: Some(q.im),
            ..ModRow::default()
        })?;
    }
    sink.finish()?;

    // only the proved case has a value to compare with
    if eta == ModularMatrix::S {
        let off: Vec<String> = est
            .per_p
            .iter()
            .filter(|e| (e.estimate - 1.0).norm() > 0.05)
            .map(|e| format!("p = {}: C = {}", e.p, e.estimate))
            .collect();
        if !off.is_empty() || est.spread > 0.05 {
            return Err(Failure::Assertion(format!(
                "estimates away from 1: [{}], spread {:.3e}",
                off.join(", "),
                est.spread
            )));
        }
    }
    Ok(())
}
