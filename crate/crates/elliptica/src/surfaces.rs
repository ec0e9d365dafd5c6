//! Surface conditions `s^{−ℓ} = s*^{−ℓ′} q^N` on the parameter space, their
//! exact exponent solutions for rational central charge, and enumeration of
//! the label pairs satisfied at a given point.

use std::f64::consts::PI;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::EllipticParams;
use crate::specfun::{ipow, ratio_f64, C64};

/// Relative tolerance of the defining relation.
pub const SURFACE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LabelPair {
    pub ell: i64,
    pub ell_prime: i64,
}

impl LabelPair {
    pub const fn new(ell: i64, ell_prime: i64) -> Self {
        Self { ell, ell_prime }
    }

    pub fn mirrored(self) -> Self {
        Self::new(-self.ell, -self.ell_prime)
    }
}

/// T-side uses the labels as given; S-side uses `(−ℓ, −ℓ′)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SurfaceKind {
    T,
    S,
}

impl SurfaceKind {
    pub fn effective(self, labels: LabelPair) -> LabelPair {
        match self {
            SurfaceKind::T => labels,
            SurfaceKind::S => labels.mirrored(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceSpec {
    pub labels: LabelPair,
    pub n: usize,
    /// `s^{−ℓ}` for the effective (possibly mirrored) label `ℓ`.
    pub gamma: C64,
    pub params: EllipticParams,
    pub kind: SurfaceKind,
    pub residual: f64,
}

/// Relative defect of `s^{−ℓ} = s*^{−ℓ′} q^N` for the effective labels.
pub fn surface_residual(labels: LabelPair, params: &EllipticParams, kind: SurfaceKind) -> f64 {
    let eff = kind.effective(labels);
    let lhs = ipow(params.s, -eff.ell);
    let rhs = ipow(params.s_star, -eff.ell_prime) * ipow(params.q, params.n as i64);
    (lhs - rhs).norm() / lhs.norm()
}

pub fn surface_check(labels: LabelPair, params: &EllipticParams, kind: SurfaceKind) -> Result<SurfaceSpec> {
    let residual = surface_residual(labels, params, kind);
    if !(residual <= SURFACE_TOL) {
        return Err(Error::SurfaceViolation {
            ell: labels.ell,
            ell_prime: labels.ell_prime,
            residual,
        });
    }
    let eff = kind.effective(labels);
    Ok(SurfaceSpec {
        labels,
        n: params.n,
        gamma: ipow(params.s, -eff.ell),
        params: *params,
        kind,
        residual,
    })
}

/// Exact solution of the surface condition for a rational central charge:
/// `p = q^{2a}`, equivalently `p^{nome_power} = q^{q_power}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentSolution {
    pub labels: LabelPair,
    pub n: usize,
    pub c: Ratio<i64>,
    /// `p = q^{2a}`.
    pub a: Ratio<i64>,
    /// `p* = q^{2(a − c)}`.
    pub a_star: Ratio<i64>,
    pub nome_power: i64,
    pub q_power: i64,
    pub derivation: String,
}

/// Solve `a(ℓ′ − ℓ) = cℓ′ + N` for the exponent `a` of `p = q^{2a}`.
///
/// With `s = ±q^a` and `s* = ±q^{a−c}` (from `p* = p q^{−2c}`), the moduli in
/// `s^{−ℓ} = s*^{−ℓ′} q^N` give `−aℓ = −(a−c)ℓ′ + N`. Equal labels leave `a`
/// free and force `c = −N/ℓ`, reported as `Degenerate`.
pub fn solve_exponent(labels: LabelPair, c: Ratio<i64>, n: usize) -> Result<ExponentSolution> {
    let (l, lp) = (labels.ell, labels.ell_prime);
    let nn = n as i64;
    if l == lp {
        if l == 0 {
            return Err(Error::Inconsistent(
                "labels (0,0) would need q^N = 1".into(),
            ));
        }
        return Err(Error::Degenerate {
            c: Ratio::new(-nn, l).to_string(),
        });
    }
    let a = (c * lp + nn) / (lp - l);
    let a_star = a - c;
    if a <= Ratio::from_integer(0) {
        return Err(Error::Inconsistent(format!(
            "exponent a = {a} gives |p| >= 1"
        )));
    }
    if a_star <= Ratio::from_integer(0) {
        return Err(Error::Inconsistent(format!(
            "exponent a - c = {a_star} gives |p*| >= 1"
        )));
    }
    // p = q^{2a}, a = num/den  =>  p^den = q^{2 num}
    let g = (2 * a.numer()).gcd(a.denom());
    let nome_power = a.denom() / g;
    let q_power = 2 * a.numer() / g;
    let derivation = format!(
        "a({lp} - {l}) = ({c})({lp}) + {nn}  =>  a = {a};  p = q^(2a) = q^({}), p* = p q^(-2c) = q^({})",
        a * 2,
        a_star * 2
    );
    Ok(ExponentSolution {
        labels,
        n,
        c,
        a,
        a_star,
        nome_power,
        q_power,
        derivation,
    })
}

/// `q^x` through the principal logarithm.
fn q_pow(q: C64, x: f64) -> C64 {
    (q.ln() * x).exp()
}

/// Candidate `s*` given `s`: all `ℓ′`-th roots of `s^ℓ q^N` (for `ℓ′ = 0`,
/// the two roots `±s q^{−c}`), filtered by `|p*| < 1` and, when `c` is given,
/// by `s*² = p q^{−2c}`. Sorted by increasing `|arg|`, then by argument.
pub fn s_star_candidates(labels: LabelPair, s: C64, q: C64, n: usize, c: Option<f64>) -> Vec<C64> {
    let (l, lp) = (labels.ell, labels.ell_prime);
    let target_p_star = c.map(|c| s * s * q_pow(q, -2.0 * c));
    let mut roots: Vec<C64> = if lp == 0 {
        match c {
            Some(c) => {
                let r = s * q_pow(q, -c);
                vec![r, -r]
            }
            None => Vec::new(),
        }
    } else {
        // s*^{ℓ′} = s^ℓ q^N
        let rhs = ipow(s, l) * ipow(q, n as i64);
        let k = lp.unsigned_abs() as f64;
        let base = if lp > 0 { rhs } else { rhs.inv() };
        let (r, t) = base.to_polar();
        (0..lp.unsigned_abs())
            .map(|j| C64::from_polar(r.powf(1.0 / k), (t + 2.0 * PI * j as f64) / k))
            .collect()
    };
    roots.retain(|w| {
        let ps = w * w;
        let modulus_ok = ps.norm() < 1.0 && ps.norm() > 0.0;
        let charge_ok = target_p_star
            .map(|t| (ps - t).norm() <= 1e-10 * t.norm())
            .unwrap_or(true);
        modulus_ok && charge_ok
    });
    roots.sort_by(|a, b| {
        let ka = (a.arg().abs(), a.arg());
        let kb = (b.arg().abs(), b.arg());
        ka.partial_cmp(&kb).unwrap()
    });
    roots
}

/// All parameter points on the T-surface of `labels` with the given `q`,
/// rational `c` and both signs of `s = ±q^a`.
pub fn params_on_surface(labels: LabelPair, c: Ratio<i64>, n: usize, q: C64) -> Result<Vec<EllipticParams>> {
    let sol = solve_exponent(labels, c, n)?;
    let cf = ratio_f64(c);
    let mut out = Vec::new();
    for sign in [-1.0, 1.0] {
        let s = sign * q_pow(q, ratio_f64(sol.a));
        for s_star in s_star_candidates(labels, s, q, n, Some(cf)) {
            if let Ok(params) = EllipticParams::new(q, s, s_star, Some(cf), n) {
                if surface_check(labels, &params, SurfaceKind::T).is_ok() {
                    out.push(params);
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Inconsistent(format!(
            "no sign choice of s = ±q^{} admits a valid s* for labels ({}, {})",
            sol.a, labels.ell, labels.ell_prime
        )));
    }
    Ok(out)
}

/// Candidate second labels `ℓ′` in `window` for which `solve_exponent` succeeds.
pub fn solve_for_ell_prime(
    ell: i64,
    c: Ratio<i64>,
    n: usize,
    window: std::ops::RangeInclusive<i64>,
) -> Vec<ExponentSolution> {
    window
        .filter_map(|lp| solve_exponent(LabelPair::new(ell, lp), c, n).ok())
        .collect()
}

/// Label pairs within the ranges whose T- or S-side condition holds at `params`.
pub fn enumerate_surfaces(
    params: &EllipticParams,
    ell_range: std::ops::RangeInclusive<i64>,
    ell_prime_range: std::ops::RangeInclusive<i64>,
) -> Vec<SurfaceSpec> {
    let mut out = Vec::new();
    for kind in [SurfaceKind::T, SurfaceKind::S] {
        for l in ell_range.clone() {
            for lp in ell_prime_range.clone() {
                if let Ok(spec) = surface_check(LabelPair::new(l, lp), params, kind) {
                    out.push(spec);
                }
            }
        }
    }
    out
}

/// The point `c = 1`, `p = q³` with `s = −q^{3/2}`, `s* = −q^{1/2}`.
pub fn c1_p_q3(q: f64) -> EllipticParams {
    EllipticParams::new(
        C64::new(q, 0.0),
        C64::new(-q.powf(1.5), 0.0),
        C64::new(-q.sqrt(), 0.0),
        Some(1.0),
        2,
    )
    .expect("c = 1, p = q^3 is a valid point for 0 < q < 1")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_n2_c1_ell1() {
        let sol = solve_exponent(LabelPair::new(1, 7), Ratio::from_integer(1), 2).unwrap();
        assert_eq!(sol.a, Ratio::new(3, 2));
        assert_eq!((sol.nome_power, sol.q_power), (1, 3));
    }

    #[test]
    fn degenerate_equal_labels() {
        match solve_exponent(LabelPair::new(2, 2), Ratio::from_integer(1), 2) {
            Err(Error::Degenerate { c }) => assert_eq!(c, "-1"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parity_mismatch_is_rejected() {
        let p = c1_p_q3(0.55);
        assert!(surface_check(LabelPair::new(1, 7), &p, SurfaceKind::T).is_ok());
        let spec = surface_check(LabelPair::new(0, 4), &p, SurfaceKind::T).unwrap();
        assert!((spec.gamma - 1.0).norm() < 1e-15);
        assert!(matches!(
            surface_check(LabelPair::new(1, 6), &p, SurfaceKind::T),
            Err(Error::SurfaceViolation { .. })
        ));
    }
}
