//! Shift-accumulation factors `F(ℓ, z)`, the exchange function `f_{ℓℓ′}` and
//! the structure function `𝐅_{ℓℓ′}^{λλ′}`, for N = 2 and general N.

use crate::error::Result;
use crate::linalg::rel_scalar;
use crate::params::EllipticParams;
use crate::policy::TruncationPolicy;
use crate::report::{SamplePoint, VerificationReport};
use crate::rmatrix_gl2;
use crate::rmatrix_gln;
use crate::specfun::{guarded_div, ipow, theta_p, C64};
use crate::sampling::Sampler;
use crate::surfaces::{c1_p_q3, surface_check, SurfaceKind};
use crate::sweep::sweep;

pub use crate::surfaces::LabelPair;

/// Which `τ̃` implementation backs `F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TauPath {
    /// Eight-vertex `τ̃` for N = 2, `τ̃_N` otherwise.
    #[default]
    ByRank,
    /// `τ̃_N` for every N, including 2.
    Unified,
}

fn tau_tilde_any(z: C64, params: &EllipticParams, path: TauPath, policy: &TruncationPolicy) -> Result<C64> {
    match (path, params.n) {
        (TauPath::ByRank, 2) => rmatrix_gl2::tau_tilde(z, params, policy),
        _ => rmatrix_gln::tau_tilde_n(z, params.q, params.n, policy),
    }
}

/// `F(ℓ, z) = ∏_{k=1}^{ℓ} τ̃(s^{−k} z)` for `ℓ ≥ 0` and `F(−L, z) = 1/F(L, s^L z)`.
/// With `starred` the shift is `s*` instead of `s`.
pub fn f_func(ell: i64, z: C64, params: &EllipticParams, starred: bool, policy: &TruncationPolicy) -> Result<C64> {
    f_func_with(ell, z, params, starred, TauPath::ByRank, policy)
}

pub fn f_func_with(
    ell: i64,
    z: C64,
    params: &EllipticParams,
    starred: bool,
    path: TauPath,
    policy: &TruncationPolicy,
) -> Result<C64> {
    let s = if starred { params.s_star } else { params.s };
    if ell >= 0 {
        let mut acc = C64::new(1.0, 0.0);
        for k in 1..=ell {
            acc *= tau_tilde_any(ipow(s, -k) * z, params, path, policy)?;
        }
        Ok(acc)
    } else {
        let big = -ell;
        let inner = f_func_with(big, ipow(s, big) * z, params, starred, path, policy)?;
        guarded_div(C64::new(1.0, 0.0), inner, "F(-l, z)")
    }
}

/// `f_{ℓℓ′}(z) = F*(ℓ′, z) / F(ℓ, z)` on the T-surface of `labels`.
pub fn f_exchange(labels: LabelPair, z: C64, params: &EllipticParams, policy: &TruncationPolicy) -> Result<C64> {
    surface_check(labels, params, SurfaceKind::T)?;
    guarded_div(
        f_func(labels.ell_prime, z, params, true, policy)?,
        f_func(labels.ell, z, params, false, policy)?,
        "exchange function",
    )
}

/// `𝐅_{ℓℓ′}^{λλ′}(z) = [F(ℓ,z)/F*(ℓ′,z)] · [F*(ℓ′,γ^{−1}z)/F(ℓ,γ^{−1}z)]`
/// with `γ = s^{−λ}`; both label pairs must be on their T-surfaces.
pub fn big_f(labels: LabelPair, labels2: LabelPair, z: C64, params: &EllipticParams, policy: &TruncationPolicy) -> Result<C64> {
    big_f_with(labels, labels2, z, params, TauPath::ByRank, policy)
}

pub fn big_f_with(
    labels: LabelPair,
    labels2: LabelPair,
    z: C64,
    params: &EllipticParams,
    path: TauPath,
    policy: &TruncationPolicy,
) -> Result<C64> {
    surface_check(labels, params, SurfaceKind::T)?;
    let gamma = surface_check(labels2, params, SurfaceKind::T)?.gamma;
    let f = |ell: i64, w: C64, starred: bool| f_func_with(ell, w, params, starred, path, policy);
    let (l, lp) = (labels.ell, labels.ell_prime);
    let w = z / gamma;
    guarded_div(
        f(l, z, false)? * f(lp, w, true)?,
        f(lp, z, true)? * f(l, w, false)?,
        "structure function",
    )
}

/// Equal-label form `F(|ℓ|,z)/F(|ℓ|,s^{|ℓ|}z) · F*(|ℓ′|, q^N s*^{|ℓ′|} z)/F*(|ℓ′|,z)`.
pub fn big_f_equal(labels: LabelPair, z: C64, params: &EllipticParams, policy: &TruncationPolicy) -> Result<C64> {
    surface_check(labels, params, SurfaceKind::T)?;
    let f = |ell: i64, w: C64, starred: bool| f_func(ell, w, params, starred, policy);
    let l = labels.ell.abs();
    let lp = labels.ell_prime.abs();
    let qn = ipow(params.q, params.n as i64);
    guarded_div(
        f(l, z, false)? * f(lp, qn * ipow(params.s_star, lp) * z, true)?,
        f(l, ipow(params.s, l) * z, false)? * f(lp, z, true)?,
        "equal-label structure function",
    )
}

/// Congruence class mod 4 of a label on the `c = 1`, `p = q³` surfaces.
pub fn label_class(ell: i64) -> u8 {
    ell.rem_euclid(4) as u8
}

/// Representative `(ℓ̄, 3ℓ̄ + 4)` of a class.
pub fn class_representative(class: u8) -> LabelPair {
    let l = i64::from(class % 4);
    LabelPair::new(l, 3 * l + 4)
}

/// Closed forms at `c = 1`, `p = q³`, indexed by the classes of `ℓ` (row)
/// and `λ` (column): `(power of q, [(k, m)] for Θ_{q⁴}(q^k z²)^m)`.
type TableauEntry = (i32, &'static [(i32, i32)]);

const TABLEAU: [[TableauEntry; 3]; 3] = [
    [
        (2, &[(3, 2), (-1, 2), (1, -4)]),
        (2, &[(2, 4), (-1, 4), (0, -4), (1, -4)]),
        (2, &[(2, 2), (-2, 2), (0, -4)]),
    ],
    [
        (2, &[(0, 4), (3, 4), (2, -4), (1, -4)]),
        (4, &[(3, 4), (-1, 4), (1, -8)]),
        (2, &[(2, 4), (-1, 4), (0, -4), (1, -4)]),
    ],
    [
        (-2, &[(0, 4), (2, -2), (-2, -2)]),
        (2, &[(0, 4), (3, 4), (2, -4), (1, -4)]),
        (2, &[(3, 2), (-1, 2), (1, -4)]),
    ],
];

/// Tabulated structure function for classes `(row, col)`; 1 when either class is 0.
pub fn tableau_closed_form(row: u8, col: u8, z: C64, q: C64, policy: &TruncationPolicy) -> Result<C64> {
    if row.is_multiple_of(4) || col.is_multiple_of(4) {
        return Ok(C64::new(1.0, 0.0));
    }
    let (qpow, factors) = TABLEAU[(row % 4 - 1) as usize][(col % 4 - 1) as usize];
    let base = q.powi(4);
    let z2 = z * z;
    let mut num = q.powi(qpow);
    let mut den = C64::new(1.0, 0.0);
    for &(k, m) in factors {
        let t = theta_p(q.powi(k) * z2, base, policy)?;
        if m > 0 {
            num *= t.powi(m);
        } else {
            den *= t.powi(-m);
        }
    }
    guarded_div(num, den, "tableau entry")
}

fn draw_z(rng: &mut Sampler) -> C64 {
    rng.annulus(0.5, 2.0)
}

/// Shift identities of `F`: the reflection law
/// `F(ℓ,z)F(−ℓ,z^{−1}) = τ̃(s^{−ℓ}z)/τ̃(z)` for ℓ = 1, 2, 3, the composition law
/// `F(ℓ, s^{−m}z) = F(ℓ+m, z)/F(m, z)` for `(ℓ, m) = (2, 1)`, inversion
/// `F(−2, z)F(2, s²z) = 1`, and `F(ℓ, q²z) = F(ℓ, z)` for ℓ = −2..=3.
pub fn verify_f_identities(
    params: &EllipticParams,
    n_samples: usize,
    seed: u64,
    tol: f64,
    policy: &TruncationPolicy,
) -> Vec<VerificationReport> {
    let f = |ell: i64, z: C64| f_func(ell, z, params, false, policy);
    let tt = |z: C64| tau_tilde_any(z, params, TauPath::ByRank, policy);
    let s = params.s;
    let q2 = params.q * params.q;
    let mut out = Vec::new();
    for ell in 1..=3i64 {
        out.push(sweep(&format!("F reflection ell={ell}"), seed, n_samples, tol, draw_z, |&z| {
            let lhs = f(ell, z)? * f(-ell, z.inv())?;
            let rhs = tt(ipow(s, -ell) * z)? / tt(z)?;
            Ok((SamplePoint::of("z", z), rel_scalar(lhs, rhs)))
        }));
    }
    out.push(sweep("F composition (l, m) = (2, 1)", seed, n_samples, tol, draw_z, |&z| {
        let lhs = f(2, ipow(s, -1) * z)?;
        let rhs = f(3, z)? / f(1, z)?;
        Ok((SamplePoint::of("z", z), rel_scalar(lhs, rhs)))
    }));
    out.push(sweep("F inversion l=2", seed, n_samples, tol, draw_z, |&z| {
        let prod = f(-2, z)? * f(2, ipow(s, 2) * z)?;
        Ok((SamplePoint::of("z", z), (prod - 1.0).norm()))
    }));
    out.push(sweep("F q^2-periodicity", seed, n_samples, tol, draw_z, |&z| {
        let mut worst: f64 = 0.0;
        for ell in -2..=3 {
            worst = worst.max(rel_scalar(f(ell, q2 * z)?, f(ell, z)?));
        }
        Ok((SamplePoint::of("z", z), worst))
    }));
    out
}

/// `𝐅_{ℓℓ′}^{λλ′}(z) 𝐅_{λλ′}^{ℓℓ′}(z^{−1}) = 1` for every ordered pair of the
/// given T-surfaces.
pub fn verify_compatibility(
    params: &EllipticParams,
    surfaces: &[LabelPair],
    n_samples: usize,
    seed: u64,
    tol: f64,
    policy: &TruncationPolicy,
) -> VerificationReport {
    let pairs: Vec<(LabelPair, LabelPair)> = surfaces
        .iter()
        .flat_map(|a| surfaces.iter().map(move |b| (*a, *b)))
        .collect();
    let name = format!("structure function compatibility over {} label pairs", pairs.len());
    sweep(&name, seed, n_samples, tol, draw_z, |&z| {
        let mut worst: f64 = 0.0;
        for &(a, b) in &pairs {
            let prod = big_f(a, b, z, params, policy)? * big_f(b, a, z.inv(), params, policy)?;
            worst = worst.max((prod - 1.0).norm());
        }
        Ok((SamplePoint::of("z", z), worst))
    })
}

/// The equal-label form against the general structure function.
pub fn verify_equal_label_form(
    labels: LabelPair,
    params: &EllipticParams,
    n_samples: usize,
    seed: u64,
    tol: f64,
    policy: &TruncationPolicy,
) -> VerificationReport {
    let name = format!("equal-label structure function ({},{})", labels.ell, labels.ell_prime);
    sweep(&name, seed, n_samples, tol, draw_z, |&z| {
        let general = big_f(labels, labels, z, params, policy)?;
        let simple = big_f_equal(labels, z, params, policy)?;
        Ok((SamplePoint::of("z", z), rel_scalar(general, simple)))
    })
}

/// Every non-trivial tableau entry against the structure function of the class
/// representatives at `c = 1`, `p = q³`, the zero-class entries against 1, and
/// the class invariance `(1,7) ≡ (5,19)` in both label slots.
pub fn verify_tableau(q: f64, n_samples: usize, seed: u64, tol: f64, policy: &TruncationPolicy) -> Vec<VerificationReport> {
    let params = c1_p_q3(q);
    let qc = params.q;
    let mut out = Vec::new();
    for row in 0..4u8 {
        for col in 0..4u8 {
            let a = class_representative(row);
            let b = class_representative(col);
            let name = format!("tableau entry ({row},{col})");
            out.push(sweep(&name, seed, n_samples, tol, draw_z, |&z| {
                let built = big_f(a, b, z, &params, policy)?;
                let closed = tableau_closed_form(row, col, z, qc, policy)?;
                Ok((SamplePoint::of("z", z), rel_scalar(built, closed)))
            }));
        }
    }
    let (x, y) = (LabelPair::new(1, 7), LabelPair::new(5, 19));
    out.push(sweep("tableau class invariance (1,7) ~ (5,19)", seed, n_samples, tol, draw_z, |&z| {
        let mut worst: f64 = 0.0;
        for other in [LabelPair::new(1, 7), LabelPair::new(2, 10), LabelPair::new(3, 13)] {
            worst = worst.max(rel_scalar(big_f(x, other, z, &params, policy)?, big_f(y, other, z, &params, policy)?));
            worst = worst.max(rel_scalar(big_f(other, x, z, &params, policy)?, big_f(other, y, z, &params, policy)?));
        }
        Ok((SamplePoint::of("z", z), worst))
    }));
    out
}
