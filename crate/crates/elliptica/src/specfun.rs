//! Scalar special functions: multi-base q-Pochhammer products, the
//! multiplicative theta function, the ratio ξ entering the eight-vertex
//! normalization, and Jacobi theta functions with rational characteristics.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::policy::{TruncationPolicy, POLE_TOL};
use crate::report::SamplePoint;
use crate::sampling::Sampler;
use crate::sweep::sweep;

pub type C64 = Complex64;

const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Relative agreement demanded between the series and product forms of
/// [`jacobi_theta`], measured against the largest series term.
pub const THETA_AGREEMENT_TOL: f64 = 1e-9;

/// Divide, raising `PoleProximity` when the denominator is negligible on the
/// scale of the numerator (or of 1, whichever is larger).
pub fn guarded_div(num: C64, den: C64, context: &'static str) -> Result<C64> {
    let scale = num.norm().max(1.0);
    if !(den.norm() >= POLE_TOL * scale) {
        return Err(Error::PoleProximity {
            context,
            magnitude: den.norm(),
        });
    }
    let out = num / den;
    if !(out.re.is_finite() && out.im.is_finite()) {
        return Err(Error::PoleProximity {
            context,
            magnitude: den.norm(),
        });
    }
    Ok(out)
}

/// Divide, failing only on an exact zero or a non-finite quotient. For ratios
/// of entire functions whose values may be legitimately small on both sides.
pub fn checked_div(num: C64, den: C64, context: &'static str) -> Result<C64> {
    let out = num / den;
    if den.norm() == 0.0 || !(out.re.is_finite() && out.im.is_finite()) {
        return Err(Error::PoleProximity {
            context,
            magnitude: den.norm(),
        });
    }
    Ok(out)
}

/// Integer power that works for any `i64` exponent in the range used here.
pub fn ipow(z: C64, n: i64) -> C64 {
    let n32 = i32::try_from(n).expect("exponent out of i32 range");
    z.powi(n32)
}

fn check_bases(bases: &[C64]) -> Result<()> {
    for a in bases {
        let m = a.norm();
        if !(m < 1.0) {
            return Err(Error::DivergentBase { modulus: m });
        }
    }
    Ok(())
}

/// `(z; a_1, …, a_m)_∞ = ∏_{n_i ≥ 0} (1 − z a_1^{n_1} ⋯ a_m^{n_m})`.
///
/// The lattice is walked one base at a time (outermost is the last base);
/// each direction stops once `consecutive_hits` successive sub-products are
/// within `term_tol` of 1.
pub fn qpoch(z: C64, bases: &[C64], policy: &TruncationPolicy) -> Result<C64> {
    check_bases(bases)?;
    nested_product(z, bases, policy)
}

fn nested_product(z: C64, bases: &[C64], policy: &TruncationPolicy) -> Result<C64> {
    let Some((&outer, inner)) = bases.split_last() else {
        return Ok(ONE - z);
    };
    let mut acc = ONE;
    let mut arg = z;
    let mut hits = 0;
    for _ in 0..policy.max_terms {
        if arg == C64::new(0.0, 0.0) {
            return Ok(acc);
        }
        let factor = if inner.is_empty() {
            ONE - arg
        } else {
            nested_product(arg, inner, policy)?
        };
        acc *= factor;
        if (factor - ONE).norm() < policy.term_tol {
            hits += 1;
            if hits >= policy.consecutive_hits {
                return Ok(acc);
            }
        } else {
            hits = 0;
        }
        arg *= outer;
    }
    Err(Error::NonConvergence {
        max_terms: policy.max_terms,
    })
}

/// `Θ_p(z) = (z;p)_∞ (p/z;p)_∞ (p;p)_∞`.
pub fn theta_p(z: C64, p: C64, policy: &TruncationPolicy) -> Result<C64> {
    if z.norm() == 0.0 {
        return Err(Error::ZeroArgument { context: "theta_p" });
    }
    let bases = [p];
    check_bases(&bases)?;
    Ok(nested_product(z, &bases, policy)?
        * nested_product(p / z, &bases, policy)?
        * nested_product(p, &bases, policy)?)
}

/// `ξ(z; p, q⁴) = (q²z; p,q⁴)(pq²z; p,q⁴) / [(q⁴z; p,q⁴)(pz; p,q⁴)]`.
pub fn xi(z: C64, p: C64, q: C64, policy: &TruncationPolicy) -> Result<C64> {
    let q2 = q * q;
    let q4 = q2 * q2;
    let bases = [p, q4];
    let num = qpoch(q2 * z, &bases, policy)? * qpoch(p * q2 * z, &bases, policy)?;
    let den = qpoch(q4 * z, &bases, policy)? * qpoch(p * z, &bases, policy)?;
    guarded_div(num, den, "xi")
}

/// Characteristic `[γ1, γ2]` of a Jacobi theta function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalCharacteristic {
    pub gamma1: Ratio<i64>,
    pub gamma2: Ratio<i64>,
}

impl RationalCharacteristic {
    pub fn new(gamma1: Ratio<i64>, gamma2: Ratio<i64>) -> Self {
        Self { gamma1, gamma2 }
    }

    /// The characteristic `[1/2 + j/n, 1/2 + k/n]` used by the Z_n weights.
    pub fn half_shifted(j: i64, k: i64, n: i64) -> Self {
        let half = Ratio::new(1, 2);
        Self::new(half + Ratio::new(j, n), half + Ratio::new(k, n))
    }

    /// Checks that both denominators divide `2n`, the lattice generated by
    /// `1/2` and `1/n`.
    pub fn check_order(&self, n: i64) -> Result<()> {
        for g in [self.gamma1, self.gamma2] {
            if (2 * n) % g.denom() != 0 {
                return Err(Error::Domain(format!(
                    "characteristic {g} is not on the 1/(2·{n}) lattice"
                )));
            }
        }
        Ok(())
    }

    pub fn as_f64(&self) -> (f64, f64) {
        (ratio_f64(self.gamma1), ratio_f64(self.gamma2))
    }
}

pub(crate) fn ratio_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn check_tau(tau: C64) -> Result<()> {
    if !(tau.im > 0.0) {
        return Err(Error::Domain(format!(
            "theta nome needs Im(tau) > 0, got {tau}"
        )));
    }
    Ok(())
}

/// Series value and the magnitude of its largest term.
fn theta_series_scaled(
    ch: &RationalCharacteristic,
    xi_arg: C64,
    tau: C64,
    policy: &TruncationPolicy,
) -> Result<(C64, f64)> {
    check_tau(tau)?;
    let (g1, g2) = ch.as_f64();
    let term = |m: i64| {
        let k = m as f64 + g1;
        (I * PI * (tau * k * k + 2.0 * k * (xi_arg + g2))).exp()
    };
    let mut sum = term(0);
    let mut scale = sum.norm();
    let mut prev_shell = f64::INFINITY;
    let mut hits = 0;
    for m in 1..=policy.max_terms as i64 {
        let a = term(m);
        let b = term(-m);
        sum += a + b;
        let shell = a.norm() + b.norm();
        scale = scale.max(a.norm()).max(b.norm());
        if shell < policy.term_tol * scale && shell <= prev_shell {
            hits += 1;
            if hits >= policy.consecutive_hits {
                return Ok((sum, scale));
            }
        } else {
            hits = 0;
        }
        prev_shell = shell;
    }
    Err(Error::NonConvergence {
        max_terms: policy.max_terms,
    })
}

/// `ϑ[γ1,γ2](ξ,τ) = Σ_m exp(iπτ(m+γ1)² + 2iπ(m+γ1)(ξ+γ2))`.
pub fn jacobi_theta_series(
    ch: &RationalCharacteristic,
    xi_arg: C64,
    tau: C64,
    policy: &TruncationPolicy,
) -> Result<C64> {
    theta_series_scaled(ch, xi_arg, tau, policy).map(|(v, _)| v)
}

/// Product form: `e^{2iπγ1γ2} e^{iπτγ1²} z^{2γ1} Θ_p(−e^{2iπγ2} p^{γ1+1/2} z²)`
/// with `z = e^{iπξ}` and `p = e^{2iπτ}`.
pub fn jacobi_theta_product(
    ch: &RationalCharacteristic,
    xi_arg: C64,
    tau: C64,
    policy: &TruncationPolicy,
) -> Result<C64> {
    check_tau(tau)?;
    let (g1, g2) = ch.as_f64();
    let p = (2.0 * I * PI * tau).exp();
    let z2 = (2.0 * I * PI * xi_arg).exp();
    let prefactor = (I * PI * (2.0 * g1 * g2 + tau * g1 * g1 + 2.0 * g1 * xi_arg)).exp();
    let arg = -(2.0 * I * PI * (g2 + tau * (g1 + 0.5))).exp() * z2;
    Ok(prefactor * theta_p(arg, p, policy)?)
}

/// Jacobi theta with rational characteristic. Both the series and the
/// product form are evaluated; they must agree to [`THETA_AGREEMENT_TOL`]
/// relative to the largest series term. The series value is returned.
pub fn jacobi_theta(
    ch: &RationalCharacteristic,
    xi_arg: C64,
    tau: C64,
    policy: &TruncationPolicy,
) -> Result<C64> {
    let (series, scale) = theta_series_scaled(ch, xi_arg, tau, policy)?;
    let product = jacobi_theta_product(ch, xi_arg, tau, policy)?;
    let gap = (series - product).norm();
    if !(gap <= THETA_AGREEMENT_TOL * scale.max(f64::MIN_POSITIVE)) {
        return Err(Error::Domain(format!(
            "theta series and product forms disagree by {gap:e} (scale {scale:e})"
        )));
    }
    Ok(series)
}

/// Random `(ξ, τ)` with `|Im ξ| ≤ 0.1` and `Im τ ∈ [0.3, 1]`.
fn draw_xi_tau(rng: &mut Sampler) -> (C64, C64) {
    let xi_arg = C64::new(rng.uniform(-0.5, 0.5), rng.uniform(-0.1, 0.1));
    let tau = C64::new(rng.uniform(-0.5, 0.5), rng.uniform(0.3, 1.0));
    (xi_arg, tau)
}

fn all_characteristics(n: i64) -> Vec<RationalCharacteristic> {
    (0..n)
        .flat_map(|j| (0..n).map(move |k| RationalCharacteristic::half_shifted(j, k, n)))
        .collect()
}

/// Theta-function identities for characteristics `[1/2 + j/n, 1/2 + k/n]`:
/// series against product form, integer characteristic shifts, integer
/// lattice shifts of the argument, and the shift exchange for `λ ∈ (Z/n)²`.
/// Each sample takes the worst residual over all characteristics.
pub fn verify_theta_identities(
    n: i64,
    n_samples: usize,
    seed: u64,
    tol: f64,
    policy: &TruncationPolicy,
) -> Vec<crate::report::VerificationReport> {
    let chars = all_characteristics(n);
    let series = |ch: &RationalCharacteristic, x: C64, t: C64| jacobi_theta_series(ch, x, t, policy);
    let point = |x: C64, t: C64| SamplePoint::of("xi", x).with("tau", t);
    let ints = [-1i64, 0, 1, 2];
    let mut out = Vec::new();

    out.push(sweep(&format!("theta series vs product N={n}"), seed, n_samples, tol, draw_xi_tau, |&(x, t)| {
        let mut worst: f64 = 0.0;
        for ch in &chars {
            let a = series(ch, x, t)?;
            let b = jacobi_theta_product(ch, x, t, policy)?;
            worst = worst.max((a - b).norm() / a.norm());
        }
        Ok((point(x, t), worst))
    }));

    out.push(sweep(&format!("theta characteristic shift N={n}"), seed, n_samples, tol, draw_xi_tau, |&(x, t)| {
        let mut worst: f64 = 0.0;
        for ch in &chars {
            let base = series(ch, x, t)?;
            let (g1, _) = ch.as_f64();
            for &l1 in &ints {
                for &l2 in &ints {
                    let shifted = RationalCharacteristic::new(ch.gamma1 + l1, ch.gamma2 + l2);
                    let lhs = series(&shifted, x, t)?;
                    let rhs = (2.0 * I * PI * g1 * l2 as f64).exp() * base;
                    worst = worst.max((lhs - rhs).norm() / rhs.norm());
                }
            }
        }
        Ok((point(x, t), worst))
    }));

    out.push(sweep(&format!("theta lattice shift N={n}"), seed, n_samples, tol, draw_xi_tau, |&(x, t)| {
        let mut worst: f64 = 0.0;
        for ch in &chars {
            let base = series(ch, x, t)?;
            let (g1, g2) = ch.as_f64();
            for &l1 in &ints {
                for &l2 in &ints {
                    let (a, b) = (l1 as f64, l2 as f64);
                    let lhs = series(ch, x + a * t + b, t)?;
                    let factor = (-I * PI * a * a * t - 2.0 * I * PI * a * x).exp()
                        * (2.0 * I * PI * (g1 * b - g2 * a)).exp();
                    let rhs = factor * base;
                    worst = worst.max((lhs - rhs).norm() / rhs.norm());
                }
            }
        }
        Ok((point(x, t), worst))
    }));

    out.push(sweep(&format!("theta shift exchange N={n}"), seed, n_samples, tol, draw_xi_tau, |&(x, t)| {
        let mut worst: f64 = 0.0;
        for ch in &chars {
            let (_, g2) = ch.as_f64();
            for j in 0..n {
                for k in 0..n {
                    let (l1, l2) = (Ratio::new(j, n), Ratio::new(k, n));
                    let (a, b) = (ratio_f64(l1), ratio_f64(l2));
                    let lhs = series(ch, x + a * t + b, t)?;
                    let shifted = RationalCharacteristic::new(ch.gamma1 + l1, ch.gamma2 + l2);
                    let factor = (-I * PI * a * a * t - 2.0 * I * PI * a * (x + g2 + b)).exp();
                    let rhs = factor * series(&shifted, x, t)?;
                    worst = worst.max((lhs - rhs).norm() / rhs.norm());
                }
            }
        }
        Ok((point(x, t), worst))
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pol() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    /// Direct truncated product over `0 ≤ n_i ≤ cutoff`.
    fn lattice_oracle(z: C64, bases: &[C64], cutoff: u32) -> C64 {
        let m = bases.len();
        let mut idx = vec![0u32; m];
        let mut acc = ONE;
        loop {
            let mut t = z;
            for (a, &n) in bases.iter().zip(&idx) {
                t *= a.powu(n);
            }
            acc *= ONE - t;
            let mut k = 0;
            loop {
                if k == m {
                    return acc;
                }
                idx[k] += 1;
                if idx[k] <= cutoff {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn qpoch_trivial_cases() {
        let p = C64::new(0.3, 0.1);
        assert_eq!(qpoch(C64::new(0.0, 0.0), &[p], &pol()).unwrap(), ONE);
        let z = C64::new(0.4, -0.2);
        let v = qpoch(z, &[C64::new(0.0, 0.0)], &pol()).unwrap();
        assert!((v - (ONE - z)).norm() < 1e-15);
    }

    #[test]
    fn qpoch_half_matches_direct_product() {
        // 60 factors of a 0.5-geometric sequence; frozen oracle value.
        let oracle = lattice_oracle(C64::new(0.5, 0.0), &[C64::new(0.5, 0.0)], 60);
        let v = qpoch(C64::new(0.5, 0.0), &[C64::new(0.5, 0.0)], &pol()).unwrap();
        assert!((v - oracle).norm() < 1e-12);
        assert!((v.re - 0.288_788_095_086_602_4).abs() < 1e-12);
    }

    #[test]
    fn multi_base_matches_lattice() {
        let z = C64::new(0.7, 0.2);
        let bases = [C64::new(0.05, 0.02), C64::new(-0.04, 0.03), C64::new(0.03, 0.0)];
        let v = qpoch(z, &bases, &pol()).unwrap();
        let oracle = lattice_oracle(z, &bases, 12);
        assert!((v - oracle).norm() < 1e-12 * oracle.norm());
    }

    #[test]
    fn divergent_base_is_rejected() {
        let err = qpoch(ONE * 0.2, &[C64::new(1.0, 0.0)], &pol()).unwrap_err();
        assert!(matches!(err, Error::DivergentBase { .. }));
    }

    #[test]
    fn exhausted_policy_reports_nonconvergence() {
        let tight = TruncationPolicy::new(1e-16, 5, 3).unwrap();
        let err = qpoch(ONE * 0.5, &[C64::new(0.9, 0.0)], &tight).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { max_terms: 5 }));
    }

    #[test]
    fn theta_vanishes_at_one_and_rejects_zero() {
        let p = C64::new(0.2, 0.0);
        assert!(theta_p(ONE, p, &pol()).unwrap().norm() < 1e-15);
        assert!(matches!(
            theta_p(C64::new(0.0, 0.0), p, &pol()),
            Err(Error::ZeroArgument { .. })
        ));
    }

    #[test]
    fn theta_quasi_periodicity_example() {
        let z = C64::new(0.4, 0.1);
        let p = C64::new(0.2, 0.0);
        let lhs = theta_p(p * z, p, &pol()).unwrap();
        let rhs = -theta_p(z, p, &pol()).unwrap() / z;
        assert!((lhs - rhs).norm() < 1e-10 * rhs.norm());
    }

    #[test]
    fn theta_matches_three_product_oracle() {
        let p = C64::new(0.1, 0.0);
        let z = C64::new(0.3, 0.0);
        let oracle = lattice_oracle(z, &[p], 60)
            * lattice_oracle(p / z, &[p], 60)
            * lattice_oracle(p, &[p], 60);
        let v = theta_p(z, p, &pol()).unwrap();
        assert!((v - oracle).norm() < 1e-13);
        assert!((v.re - 0.386_713_761_185_765_2).abs() < 1e-12);
    }

    #[test]
    fn xi_at_zero_and_compositional() {
        let p = C64::new(0.15, 0.0);
        let q = C64::new(0.6, 0.0);
        assert!((xi(C64::new(0.0, 0.0), p, q, &pol()).unwrap() - ONE).norm() < 1e-15);
        let z = C64::new(0.2, 0.0);
        let q2 = q * q;
        let q4 = q2 * q2;
        let b = [p, q4];
        let by_hand = lattice_oracle(q2 * z, &b, 80) * lattice_oracle(p * q2 * z, &b, 80)
            / (lattice_oracle(q4 * z, &b, 80) * lattice_oracle(p * z, &b, 80));
        let v = xi(z, p, q, &pol()).unwrap();
        assert!((v - by_hand).norm() < 1e-12);
    }

    #[test]
    fn xi_pole_is_detected() {
        let p = C64::new(0.15, 0.0);
        let q = C64::new(0.6, 0.0);
        let z = ONE / q.powi(4);
        assert!(matches!(
            xi(z, p, q, &pol()),
            Err(Error::PoleProximity { .. })
        ));
    }

    #[test]
    fn odd_theta_vanishes_at_origin() {
        let ch = RationalCharacteristic::half_shifted(0, 0, 2);
        let v = jacobi_theta(&ch, C64::new(0.0, 0.0), C64::new(0.0, 0.5), &pol()).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn theta_rejects_lower_half_plane() {
        let ch = RationalCharacteristic::half_shifted(1, 0, 3);
        assert!(matches!(
            jacobi_theta(&ch, C64::new(0.1, 0.0), C64::new(0.2, -0.1), &pol()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn characteristic_lattice_check() {
        assert!(RationalCharacteristic::half_shifted(2, 1, 3).check_order(3).is_ok());
        let odd = RationalCharacteristic::new(Ratio::new(1, 5), Ratio::new(1, 2));
        assert!(odd.check_order(3).is_err());
    }
}
