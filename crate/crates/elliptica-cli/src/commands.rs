//! Subcommand bodies. Each returns the JSON payload, the reports it ran and
//! optional extra CSV rows.

use num_rational::Ratio;
use serde::Serialize;
use serde_json::{json, Value};

use elliptica::classical::{equal_label_degeneracy, integer_point_degeneracy, semiclassical_limit, LimitConfig};
use elliptica::exchange::{big_f, f_exchange, verify_compatibility, verify_equal_label_form, verify_f_identities, verify_tableau};
use elliptica::rhsplit::{verify_split, verify_split_reciprocity, SplitFactor};
use elliptica::rmatrix_gl2::{verify_gl2, verify_r_identities, verify_tau};
use elliptica::rmatrix_gln::{verify_gln, verify_n2_reduction, GlnSweep, XiMuTauPoint};
use elliptica::sampling::Sampler;
use elliptica::specfun::{jacobi_theta, jacobi_theta_product, jacobi_theta_series, verify_theta_identities};
use elliptica::surfaces::{
    enumerate_surfaces, params_on_surface, solve_exponent, solve_for_ell_prime, surface_check, surface_residual,
};
use elliptica::vertexcoeffs::{generic_scan_points, singularity_scan, verify_rho_identities};
use elliptica::{EllipticParams, LabelPair, SurfaceKind, TruncationPolicy, VerificationReport, C64};

use crate::config::{Command, LabelArgs, ParamArgs, RCheck};
use crate::error::CliError;

pub struct Outcome {
    pub params: Option<EllipticParams>,
    pub reports: Vec<VerificationReport>,
    pub data: Value,
    /// Overall verdict when it is not simply "all reports passed".
    pub verdict: Option<bool>,
}

impl Outcome {
    fn reports(params: Option<EllipticParams>, reports: Vec<VerificationReport>) -> Self {
        Self {
            params,
            reports,
            data: Value::Null,
            verdict: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict
            .unwrap_or_else(|| !self.reports.is_empty() && self.reports.iter().all(|r| r.passed))
    }
}

const DEFAULT_Q: f64 = 0.6;
const DEFAULT_P: f64 = 0.25;
const DEFAULT_SURFACE_Q: f64 = 0.55;

fn labels(l: &LabelArgs) -> LabelPair {
    LabelPair::new(l.ell, l.ell_prime)
}

fn sqrt_nome(p: C64) -> C64 {
    -p.sqrt()
}

/// Explicit point from the flags; `None` when neither `s` nor `p` is given.
fn explicit_params(a: &ParamArgs, q_default: f64) -> Result<Option<EllipticParams>, CliError> {
    let q = a.q.unwrap_or(C64::new(q_default, 0.0));
    let s = match (a.s, a.p) {
        (Some(s), _) => s,
        (None, Some(p)) => sqrt_nome(p),
        (None, None) => return Ok(None),
    };
    let c = a.c.map(|c| *c.numer() as f64 / *c.denom() as f64);
    let s_star = match (a.s_star, a.p_star, c) {
        (Some(v), _, _) => v,
        (None, Some(p), _) => sqrt_nome(p),
        (None, None, Some(c)) => s * (q.ln() * -c).exp(),
        (None, None, None) => s,
    };
    Ok(Some(EllipticParams::new(q, s, s_star, c, a.n)?))
}

/// Explicit point, or the first point on the surface of `labels` at `c`
/// (default 1) when no nome is given.
fn surface_params(a: &ParamArgs, labels: LabelPair) -> Result<EllipticParams, CliError> {
    if let Some(p) = explicit_params(a, DEFAULT_SURFACE_Q)? {
        return Ok(p);
    }
    let q = a.q.unwrap_or(C64::new(DEFAULT_SURFACE_Q, 0.0));
    let c = a.c.unwrap_or(Ratio::from_integer(1));
    Ok(params_on_surface(labels, c, a.n, q)?[0])
}

fn z_samples(seed: u64, n: usize) -> Vec<C64> {
    let mut rng = Sampler::new(seed);
    (0..n).map(|_| rng.annulus(0.5, 2.0)).collect()
}

fn sample_count(n: usize) -> Result<usize, CliError> {
    if n == 0 {
        return Err(CliError::Usage("sample count must be positive".into()));
    }
    Ok(n)
}

fn tolerance(t: f64) -> Result<f64, CliError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(CliError::Usage(format!("tolerance must be positive, got {t}")));
    }
    Ok(t)
}

fn parse_pair(raw: &str) -> Result<LabelPair, CliError> {
    let bad = || CliError::Usage(format!("expected a label pair like 1,7, got {raw:?}"));
    let (a, b) = raw.split_once(',').ok_or_else(bad)?;
    Ok(LabelPair::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

#[derive(Serialize)]
struct Value2 {
    z: C64,
    value: C64,
}

fn rank_of(cmd: &Command) -> Option<usize> {
    match cmd {
        Command::Rmatrix { params, .. }
        | Command::Exchange { params, .. }
        | Command::Surface { params, .. }
        | Command::Rhsplit { params, .. }
        | Command::Vo { params, .. } => Some(params.n),
        _ => None,
    }
}

pub fn execute(cmd: &Command, seed: u64, policy: &TruncationPolicy) -> Result<Outcome, CliError> {
    if let Some(n) = rank_of(cmd) {
        if n < 2 {
            return Err(CliError::Usage(format!("--n must be at least 2, got {n}")));
        }
    }
    match cmd {
        Command::Theta { gamma1, gamma2, xi, tau, verify, samples, tol } => {
            let tol = tolerance(*tol)?;
            if let Some(n) = verify {
                if *n < 2 {
                    return Err(CliError::Usage(format!("--verify needs a rank of at least 2, got {n}")));
                }
                let reports = verify_theta_identities(*n, sample_count(*samples)?, seed, tol, policy);
                return Ok(Outcome::reports(None, reports));
            }
            let ch = elliptica::RationalCharacteristic::new(*gamma1, *gamma2);
            let value = jacobi_theta(&ch, *xi, *tau, policy)?;
            let series = jacobi_theta_series(&ch, *xi, *tau, policy)?;
            let product = jacobi_theta_product(&ch, *xi, *tau, policy)?;
            Ok(Outcome {
                params: None,
                reports: vec![],
                data: json!({"value": value, "series": series, "product": product}),
                verdict: Some(true),
            })
        }
        Command::Rmatrix { params, check, samples, tol } => {
            let n_samples = sample_count(*samples)?;
            let tol = tolerance(*tol)?;
            if params.n == 2 {
                let q = params.q.unwrap_or(C64::new(DEFAULT_Q, 0.0));
                let pr = explicit_params(params, DEFAULT_Q)?
                    .map_or_else(|| EllipticParams::unstarred(q, sqrt_nome(C64::new(DEFAULT_P, 0.0)), 2), Ok)?;
                let mut reports = Vec::new();
                let gl2 = || verify_gl2(&pr, n_samples, seed, tol, policy);
                match check {
                    RCheck::All => {
                        reports.extend(gl2());
                        reports.extend(verify_r_identities(&pr, n_samples, seed, tol, policy));
                        reports.extend(verify_tau(&pr, n_samples, seed, tol, policy));
                    }
                    RCheck::Ybe => reports.push(gl2().swap_remove(0)),
                    RCheck::Unitarity => reports.push(gl2().swap_remove(1)),
                    RCheck::Crossing => reports.push(gl2().swap_remove(2)),
                    RCheck::Antisymmetry => reports.push(gl2().swap_remove(3)),
                    RCheck::Identities => reports.extend(verify_r_identities(&pr, n_samples, seed, tol, policy)),
                    RCheck::Tau => reports.extend(verify_tau(&pr, n_samples, seed, tol, policy)),
                }
                Ok(Outcome::reports(Some(pr), reports))
            } else {
                if *check != RCheck::All {
                    return Err(CliError::Usage("only --check all is available for N > 2".into()));
                }
                let q = params.q.unwrap_or(C64::new(DEFAULT_Q, 0.0));
                let p = params.p.unwrap_or(C64::new(DEFAULT_P, 0.0));
                if q.im != 0.0 || p.im != 0.0 || !(0.0 < q.re && q.re < 1.0 && 0.0 < p.re && p.re < 1.0) {
                    return Err(CliError::Usage("N > 2 sweeps take real 0 < q, p < 1".into()));
                }
                let sw = GlnSweep::from_q_p(q.re, p.re, params.n);
                let mut reports = verify_gln(&sw, n_samples, seed, tol, tol, policy);
                reports.push(verify_n2_reduction(&sw, n_samples, seed, tol, policy));
                let point = XiMuTauPoint::new(C64::new(0.0, 0.0), sw.mu, sw.tau)?;
                Ok(Outcome::reports(Some(point.params(params.n)?), reports))
            }
        }
        Command::Exchange { params, labels: la, lambda, z, verify, samples, tol } => {
            let first = labels(la);
            let second = match lambda {
                Some(raw) => parse_pair(raw)?,
                None => first,
            };
            let pr = surface_params(params, first)?;
            let tol = tolerance(*tol)?;
            if *verify {
                let n_samples = sample_count(*samples)?;
                let mut reports = verify_f_identities(&pr, n_samples, seed, tol, policy);
                let found: Vec<LabelPair> = enumerate_surfaces(&pr, -6..=6, -20..=20)
                    .into_iter()
                    .filter(|s| s.kind == SurfaceKind::T)
                    .map(|s| s.labels)
                    .collect();
                reports.push(verify_compatibility(&pr, &found, n_samples, seed, tol, policy));
                reports.push(verify_equal_label_form(first, &pr, n_samples, seed, tol, policy));
                return Ok(Outcome::reports(Some(pr), reports));
            }
            let points = if z.is_empty() { z_samples(seed, sample_count(*samples)?) } else { z.clone() };
            let mut values = Vec::new();
            let mut exchange = Vec::new();
            for &w in &points {
                values.push(Value2 { z: w, value: big_f(first, second, w, &pr, policy)? });
                exchange.push(Value2 { z: w, value: f_exchange(first, w, &pr, policy)? });
            }
            Ok(Outcome {
                params: Some(pr),
                reports: vec![],
                data: json!({"labels": first, "labels2": second, "structure_function": values, "exchange_function": exchange}),
                verdict: Some(true),
            })
        }
        Command::Surface { params, solve, ell, ell_prime, window, tol } => {
            let c = params.c.unwrap_or(Ratio::from_integer(1));
            if *solve {
                let ell = ell.ok_or_else(|| CliError::Usage("--solve needs --ell".into()))?;
                if let Some(lp) = ell_prime {
                    let sol = solve_exponent(LabelPair::new(ell, *lp), c, params.n)?;
                    return Ok(Outcome { params: None, reports: vec![], data: json!({"solutions": [sol]}), verdict: Some(true) });
                }
                let q = params.q.unwrap_or(C64::new(DEFAULT_SURFACE_Q, 0.0));
                let sols: Vec<Value> = solve_for_ell_prime(ell, c, params.n, window.0..=window.1)
                    .into_iter()
                    .map(|sol| {
                        // signs of s = ±q^a that admit a matching s*
                        let mut signs: Vec<&str> = params_on_surface(sol.labels, c, params.n, q)
                            .unwrap_or_default()
                            .iter()
                            .map(|p| if p.s.re < 0.0 { "negative" } else { "positive" })
                            .collect();
                        signs.dedup();
                        json!({"solution": sol, "s_signs": signs})
                    })
                    .collect();
                let found = !sols.is_empty();
                return Ok(Outcome { params: None, reports: vec![], data: json!({"solutions": sols}), verdict: Some(found) });
            }
            let tol = tolerance(*tol)?;
            match (ell, ell_prime) {
                (Some(l), Some(lp)) => {
                    let lab = LabelPair::new(*l, *lp);
                    let points = match explicit_params(params, DEFAULT_SURFACE_Q)? {
                        Some(p) => vec![p],
                        None => params_on_surface(lab, c, params.n, params.q.unwrap_or(C64::new(DEFAULT_SURFACE_Q, 0.0)))?,
                    };
                    let residuals: Vec<f64> = points.iter().map(|p| surface_residual(lab, p, SurfaceKind::T)).collect();
                    let sample = points
                        .iter()
                        .map(|p| elliptica::SamplePoint::of("s", p.s).with("s_star", p.s_star))
                        .collect();
                    let report = VerificationReport::new(format!("surface condition ({l},{lp})"), None, sample, residuals, tol);
                    let spec = surface_check(lab, &points[0], SurfaceKind::T).ok();
                    Ok(Outcome { params: Some(points[0]), reports: vec![report], data: json!({"surface": spec, "points": points}), verdict: None })
                }
                (None, None) => {
                    let pr = explicit_params(params, DEFAULT_SURFACE_Q)?
                        .ok_or_else(|| CliError::Usage("enumeration needs --s or --p".into()))?;
                    let found = enumerate_surfaces(&pr, window.0..=window.1, window.0..=window.1);
                    Ok(Outcome { params: Some(pr), reports: vec![], data: json!({"surfaces": found}), verdict: Some(true) })
                }
                _ => Err(CliError::Usage("give both --ell and --ell-prime, or neither".into())),
            }
        }
        Command::Table { q, z_samples: n, tol } => {
            if q.im != 0.0 || !(0.0 < q.re && q.re < 1.0) {
                return Err(CliError::Usage(format!("table needs real 0 < q < 1, got {q}")));
            }
            let reports = verify_tableau(q.re, sample_count(*n)?, seed, tolerance(*tol)?, policy);
            Ok(Outcome::reports(Some(elliptica::surfaces::c1_p_q3(q.re)), reports))
        }
        Command::Rhsplit { params, labels: la, z_samples: n, tol } => {
            let lab = labels(la);
            let pr = surface_params(params, lab)?;
            let spec = SplitFactor::new(lab, pr)?;
            let zs = z_samples(seed, sample_count(*n)?);
            let tol = tolerance(*tol)?;
            let mut main = verify_split(&spec, &zs, tol, policy)?;
            main.seed = Some(seed);
            let mut recip = verify_split_reciprocity(&spec, &zs, 1e-10, policy)?;
            recip.seed = Some(seed);
            Ok(Outcome::reports(Some(pr), vec![main, recip]))
        }
        Command::Classical { labels: la, k, q, z_samples: n, tol } => {
            let lab = labels(la);
            let zs: Vec<C64> = z_samples(seed, sample_count(*n)?)
                .into_iter()
                .map(|z| z * 0.9)
                .collect();
            let tol = tolerance(*tol)?;
            if lab.ell == lab.ell_prime {
                // equal labels: degeneration at c = −2/ℓ, s = −q^{3/2}
                let s = -(q.ln() * 1.5).exp();
                let report = equal_label_degeneracy(lab.ell, *q, s, &zs, 1e-9, policy)?;
                return Ok(Outcome::reports(None, vec![report]));
            }
            let cfg = LimitConfig::new(lab, *k)?;
            let limit = semiclassical_limit(&cfg, &zs, *q, tol, policy)?;
            let mut reports = vec![limit.h_match.clone(), limit.k_independence.clone(), limit.linearity.clone()];
            reports.push(integer_point_degeneracy(lab, *k, *q, &zs, 1e-9, policy)?);
            Ok(Outcome {
                params: None,
                reports,
                data: json!({"orientation": limit.orientation, "orientation_consistent": limit.orientation_consistent, "limits": limit.limits, "h": limit.h_values}),
                verdict: None,
            })
        }
        Command::Vo { params, samples, tol, labels: range } => {
            let q = params.q.unwrap_or(C64::new(0.55, 0.0));
            let pr = explicit_params(params, 0.55)?
                .map_or_else(|| EllipticParams::unstarred(q, sqrt_nome(C64::new(0.2, 0.0)), 2), Ok)?;
            let tol = tolerance(*tol)?;
            let mut reports = verify_rho_identities(&pr, sample_count(*samples)?, seed, tol, policy);
            let surfaces = vec![elliptica::surfaces::c1_p_q3(0.5)];
            let scan = singularity_scan(&generic_scan_points(), &surfaces, range.0..=range.1, 1e-12, policy)?;
            reports.push(scan.pattern.clone());
            reports.push(scan.locus.clone());
            Ok(Outcome {
                params: Some(pr),
                reports,
                data: json!({"scan": scan.entries, "surface_scan": scan.surface_entries}),
                verdict: None,
            })
        }
    }
}
