//! Z_N-symmetric Belavin weights and the normalized gl_N R-matrix.
//!
//! Points are given in additive coordinates `(ξ, μ, τ)` with `z = e^{iπξ}`,
//! `q = e^{iπμ}`, `p = e^{2iπτ}`; fractional powers such as `z^{2/N−2}` are
//! taken as `e^{iπ(2/N−2)ξ}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exchange;
use crate::linalg::{rel_residual, rel_scalar, ComplexMatrix};
use crate::params::EllipticParams;
use crate::policy::TruncationPolicy;
use crate::report::{SamplePoint, VerificationReport};
use crate::rmatrix_gl2;
use crate::sampling::Sampler;
use crate::specfun::{guarded_div, jacobi_theta, qpoch, theta_p, RationalCharacteristic, C64};
use crate::sweep::sweep;

const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XiMuTauPoint {
    pub xi: C64,
    pub mu: C64,
    pub tau: C64,
}

impl XiMuTauPoint {
    pub fn new(xi: C64, mu: C64, tau: C64) -> Result<Self> {
        if !(tau.im > 0.0) {
            return Err(Error::Domain(format!("need Im(tau) > 0, got {tau}")));
        }
        let point = Self { xi, mu, tau };
        let qm = point.q().norm();
        if !(qm > 0.0 && qm < 1.0) {
            return Err(Error::Domain(format!("need 0 < |q| < 1, got {qm}")));
        }
        Ok(point)
    }

    /// Point with `q` and `p^{1/2} = e^{iπτ}` given multiplicatively (principal logs).
    pub fn from_q_sqrt_p(xi: C64, q: C64, sqrt_p: C64) -> Result<Self> {
        Self::new(xi, q.ln() / (I * PI), sqrt_p.ln() / (I * PI))
    }

    pub fn z(&self) -> C64 {
        (I * PI * self.xi).exp()
    }

    pub fn q(&self) -> C64 {
        (I * PI * self.mu).exp()
    }

    pub fn p(&self) -> C64 {
        (2.0 * I * PI * self.tau).exp()
    }

    /// `q^a := e^{iπaμ}`.
    pub fn q_pow(&self, a: f64) -> C64 {
        (I * PI * a * self.mu).exp()
    }

    /// The shift `s = −p^{1/2} = −e^{iπτ}`.
    pub fn s(&self) -> C64 {
        -(I * PI * self.tau).exp()
    }

    pub fn with_xi(&self, xi: C64) -> Self {
        Self { xi, ..*self }
    }

    /// Multiplicative parameters `(q, s)` of this point.
    pub fn params(&self, n: usize) -> Result<EllipticParams> {
        EllipticParams::unstarred(self.q(), self.s(), n)
    }
}

/// Choice of square root of `g = diag(ω^j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SqrtG {
    /// `diag(e^{iπj(N+1)/N})`; a Z_N character for odd N.
    #[default]
    Character,
    /// `diag(e^{iπj/N})`.
    Principal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GhMatrices {
    pub n: usize,
    pub g: ComplexMatrix,
    pub h: ComplexMatrix,
    pub sqrt_g: ComplexMatrix,
}

pub fn gh_matrices(n: usize) -> GhMatrices {
    gh_matrices_with(n, SqrtG::default())
}

pub fn gh_matrices_with(n: usize, root: SqrtG) -> GhMatrices {
    assert!(n >= 2, "N must be at least 2");
    let nf = n as f64;
    let diag = |f: &dyn Fn(f64) -> C64| {
        ComplexMatrix::from_fn(n, |i, j| if i == j { f(i as f64) } else { C64::new(0.0, 0.0) })
    };
    let g = diag(&|j| (2.0 * I * PI * j / nf).exp());
    let sqrt_g = match root {
        SqrtG::Character => diag(&|j| (I * PI * j * (nf + 1.0) / nf).exp()),
        SqrtG::Principal => diag(&|j| (I * PI * j / nf).exp()),
    };
    let h = ComplexMatrix::from_fn(n, |i, j| {
        if (i + 1) % n == j {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    GhMatrices { n, g, h, sqrt_g }
}

fn mat_pow(m: &ComplexMatrix, k: usize) -> ComplexMatrix {
    (0..k).fold(ComplexMatrix::identity(m.dim()), |acc, _| acc.mul(m))
}

impl GhMatrices {
    /// `I_{(α1,α2)} = g^{1/2} g^{α2} h^{α1} g^{−1/2}`.
    pub fn i_matrix(&self, alpha1: usize, alpha2: usize) -> ComplexMatrix {
        let inv_sqrt = ComplexMatrix(self.sqrt_g.0.adjoint());
        self.sqrt_g
            .mul(&mat_pow(&self.g, alpha2 % self.n))
            .mul(&mat_pow(&self.h, alpha1 % self.n))
            .mul(&inv_sqrt)
    }

    /// `G = g^{1/2} h g^{1/2}`, the conjugation in the shift law.
    pub fn shift_conjugator(&self) -> ComplexMatrix {
        self.sqrt_g.mul(&self.h).mul(&self.sqrt_g)
    }
}

/// Inverse of the normalization `κ(z²)`, a ratio of eight double-base products.
pub fn kappa_inv(point: &XiMuTauPoint, n: usize, policy: &TruncationPolicy) -> Result<C64> {
    let z2 = point.z().powi(2);
    let q = point.q();
    let p = point.p();
    let q2n = point.q_pow(2.0 * n as f64);
    let q2 = q * q;
    let q2n2 = point.q_pow(2.0 * n as f64 - 2.0);
    let b = [p, q2n];
    let f = |x: C64| qpoch(x, &b, policy);
    let num = f(q2n / z2)? * f(q2 * z2)? * f(p / z2)? * f(p * q2n2 * z2)?;
    let den = f(q2n * z2)? * f(q2 / z2)? * f(p * z2)? * f(p * q2n2 / z2)?;
    guarded_div(num, den, "kappa")
}

/// The Z_N Boltzmann weight matrix on `C^N ⊗ C^N`.
pub fn belavin_w(point: &XiMuTauPoint, n: usize, policy: &TruncationPolicy) -> Result<ComplexMatrix> {
    belavin_w_with(point, n, SqrtG::default(), policy)
}

pub fn belavin_w_with(
    point: &XiMuTauPoint,
    n: usize,
    root: SqrtG,
    policy: &TruncationPolicy,
) -> Result<ComplexMatrix> {
    let nf = n as f64;
    let ni = n as i64;
    let (xi, mu, tau) = (point.xi, point.mu, point.tau);
    let odd = RationalCharacteristic::half_shifted(0, 0, ni);
    let prefactor = (I * PI * (2.0 / nf - 2.0) * xi).exp()
        * kappa_inv(point, n, policy)?
        * guarded_div(
            jacobi_theta(&odd, mu, tau, policy)?,
            jacobi_theta(&odd, xi + mu, tau, policy)?,
            "Z_N prefactor",
        )?;
    let gh = gh_matrices_with(n, root);
    let mut acc = ComplexMatrix::zeros(n * n);
    for a1 in 0..n {
        for a2 in 0..n {
            let ch = RationalCharacteristic::half_shifted(a1 as i64, a2 as i64, ni);
            let weight = guarded_div(
                jacobi_theta(&ch, xi + mu / nf, tau, policy)?,
                nf * jacobi_theta(&ch, mu / nf, tau, policy)?,
                "Z_N weight",
            )?;
            let im = gh.i_matrix(a1, a2);
            let im_inv = ComplexMatrix(im.0.adjoint());
            acc = acc.add(&im.kron(&im_inv).scale(weight));
        }
    }
    Ok(acc.scale(prefactor))
}

/// `τ_N(z) = z^{2/N−2} Θ_{q^{2N}}(q z²) / Θ_{q^{2N}}(q z^{−2})` at `z = e^{iπξ}`.
pub fn tau_n(xi: C64, point: &XiMuTauPoint, n: usize, policy: &TruncationPolicy) -> Result<C64> {
    let nf = n as f64;
    let z2 = (2.0 * I * PI * xi).exp();
    let q = point.q();
    let base = point.q_pow(2.0 * nf);
    let ratio = guarded_div(theta_p(q * z2, base, policy)?, theta_p(q / z2, base, policy)?, "tau_N")?;
    Ok((I * PI * (2.0 / nf - 2.0) * xi).exp() * ratio)
}

/// `τ̃_N(z) = q^{2/N−2} Θ(q²z²)Θ(q²z^{−2}) / [Θ(z²)Θ(z^{−2})]`, base `q^{2N}`.
/// Depends on `z` only through `z²`; `q^{2/N−2}` is the principal power.
pub fn tau_tilde_n(z: C64, q: C64, n: usize, policy: &TruncationPolicy) -> Result<C64> {
    let nf = n as f64;
    let base = q.powi(2 * n as i32);
    let z2 = z * z;
    let q2 = q * q;
    let th = |x: C64| theta_p(x, base, policy);
    let ratio = guarded_div(
        th(q2 * z2)? * th(q2 / z2)?,
        th(z2)? * th(z2.inv())?,
        "tau_tilde_N",
    )?;
    Ok(q.powf(2.0 / nf - 2.0) * ratio)
}

/// `R(z) = τ_N(q^{1/2} z^{−1}) 𝒲(z)`; `q^{1/2}z^{−1}` is `ξ ↦ μ/2 − ξ`.
pub fn r_matrix_n(point: &XiMuTauPoint, n: usize, policy: &TruncationPolicy) -> Result<ComplexMatrix> {
    let t = tau_n(point.mu / 2.0 - point.xi, point, n, policy)?;
    Ok(belavin_w(point, n, policy)?.scale(t))
}

/// Tensor entry `𝒲^{i1 i2}_{j1 j2}` of an `N² × N²` matrix.
fn entry(m: &ComplexMatrix, n: usize, i1: usize, i2: usize, j1: usize, j2: usize) -> C64 {
    m.get(i1 * n + i2, j1 * n + j2)
}

fn max_abs(m: &ComplexMatrix) -> f64 {
    m.0.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Largest violation of `𝒲^{a+k,b+k}_{c+k,d+k} = 𝒲^{ab}_{cd}`, relative to the largest entry.
pub fn zn_symmetry_defect(m: &ComplexMatrix, n: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let base = entry(m, n, a, b, c, d);
                    for k in 1..n {
                        let shifted = entry(m, n, (a + k) % n, (b + k) % n, (c + k) % n, (d + k) % n);
                        worst = worst.max((shifted - base).norm());
                    }
                }
            }
        }
    }
    worst / max_abs(m)
}

/// Largest entry outside the support `i1 + i2 ≡ j1 + j2 (mod N)`, relative to the largest entry.
pub fn support_defect(m: &ComplexMatrix, n: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..n * n {
        for c in 0..n * n {
            if (r / n + r % n) % n != (c / n + c % n) % n {
                worst = worst.max(m.get(r, c).norm());
            }
        }
    }
    worst / max_abs(m)
}

/// Spread of the entrywise ratio `a/b` over the nonzero entries of `b`,
/// relative to the first ratio, together with that ratio.
pub fn ratio_spread(a: &ComplexMatrix, b: &ComplexMatrix) -> (f64, C64) {
    let cutoff = 1e-12 * max_abs(b);
    let ratios: Vec<C64> = (0..b.dim())
        .flat_map(|i| (0..b.dim()).map(move |j| (i, j)))
        .filter(|&(i, j)| b.get(i, j).norm() > cutoff)
        .map(|(i, j)| a.get(i, j) / b.get(i, j))
        .collect();
    let first = ratios[0];
    let spread = ratios.iter().map(|r| rel_scalar(*r, first)).fold(0.0, f64::max);
    // entries of `a` where `b` vanishes must vanish too
    let stray = (0..b.dim())
        .flat_map(|i| (0..b.dim()).map(move |j| (i, j)))
        .filter(|&(i, j)| b.get(i, j).norm() <= cutoff)
        .map(|(i, j)| a.get(i, j).norm())
        .fold(0.0, f64::max)
        / max_abs(a);
    (spread.max(stray), first)
}

/// Template for Z_N sweeps: fixed `(μ, τ)`, random `ξ`.
#[derive(Debug, Clone, Copy)]
pub struct GlnSweep {
    pub mu: C64,
    pub tau: C64,
    pub n: usize,
}

impl GlnSweep {
    /// Real `q` and `p` given multiplicatively (`Re τ` may be set afterwards).
    pub fn from_q_p(q: f64, p: f64, n: usize) -> Self {
        Self {
            mu: C64::new(0.0, -q.ln() / PI),
            tau: C64::new(0.0, -p.ln() / (2.0 * PI)),
            n,
        }
    }

    fn draw(&self, rng: &mut Sampler) -> XiMuTauPoint {
        // |z| = e^{−π Im ξ} in [0.5, 2]
        let re = rng.uniform(-1.0, 1.0);
        let im = rng.uniform(-(2f64.ln()) / PI, 2f64.ln() / PI);
        XiMuTauPoint {
            xi: C64::new(re, im),
            mu: self.mu,
            tau: self.tau,
        }
    }
}

/// Z_N symmetry, support pattern, `τ_N` inversion, crossing-unitarity,
/// quasi-periodicity (similarity form), and the ℓ-fold shift law for
/// `ℓ ∈ [-2, 2]`.
pub fn verify_gln(
    sw: &GlnSweep,
    n_samples: usize,
    seed: u64,
    tol_exact: f64,
    tol: f64,
    policy: &TruncationPolicy,
) -> Vec<VerificationReport> {
    let n = sw.n;
    let pt = |x: &XiMuTauPoint| SamplePoint::of("xi", x.xi).with("mu", x.mu).with("tau", x.tau);
    let draw = |r: &mut Sampler| sw.draw(r);
    let r = |x: &XiMuTauPoint| r_matrix_n(x, n, policy);
    let gh = gh_matrices(n);
    let big_g = gh.shift_conjugator().kron(&ComplexMatrix::identity(n));
    let big_g_inv = ComplexMatrix(big_g.0.adjoint());
    let mut out = Vec::new();

    out.push(sweep("Z_N symmetry", seed, n_samples, tol_exact, draw, |x| {
        Ok((pt(x), zn_symmetry_defect(&belavin_w(x, n, policy)?, n)))
    }));
    out.push(sweep("Z_N support pattern", seed, n_samples, tol_exact, draw, |x| {
        Ok((pt(x), support_defect(&belavin_w(x, n, policy)?, n)))
    }));
    out.push(sweep("tau_N inversion", seed, n_samples, tol, draw, |x| {
        let prod = tau_n(x.xi, x, n, policy)? * tau_n(-x.xi, x, n, policy)?;
        Ok((pt(x), (prod - 1.0).norm()))
    }));
    out.push(sweep("gl_N crossing-unitarity", seed, n_samples, tol, draw, |x| {
        let lhs = r(x)?.partial_transpose(n, 2).inverse()?;
        let shifted = x.with_xi(x.xi + n as f64 * x.mu);
        let rhs = r(&shifted)?.inverse()?.partial_transpose(n, 2);
        Ok((pt(x), rel_residual(&lhs, &rhs)))
    }));
    out.push(sweep("gl_N quasi-periodicity", seed, n_samples, tol, draw, |x| {
        let lhs = r(&x.with_xi(x.xi + x.tau + 1.0))?;
        let tt = tau_tilde_n(x.z(), x.q(), n, policy)?;
        let rhs = big_g_inv.mul(&r(x)?).mul(&big_g).scale(tt.inv());
        Ok((pt(x), rel_residual(&lhs, &rhs)))
    }));
    for ell in -2..=2i64 {
        let name = format!("gl_N shift law ell={ell}");
        let conj = if ell >= 0 {
            mat_pow(&big_g, ell as usize)
        } else {
            mat_pow(&big_g_inv, (-ell) as usize)
        };
        let conj_inv = ComplexMatrix(conj.0.adjoint());
        out.push(sweep(&name, seed, n_samples, tol, draw, |x| {
            let params = x.params(n)?;
            let lhs = r(&x.with_xi(x.xi - ell as f64 * (x.tau + 1.0)))?;
            let f = exchange::f_func(ell, x.z(), &params, false, policy)?;
            let rhs = conj.mul(&r(x)?).mul(&conj_inv).scale(f);
            Ok((pt(x), rel_residual(&lhs, &rhs)))
        }));
    }
    out
}

/// The quasi-periodicity in its written product form `(G⊗1) R (G⊗1)`.
/// Reported for comparison; the similarity form is the one that holds.
pub fn quasi_periodicity_product_form(
    sw: &GlnSweep,
    n_samples: usize,
    seed: u64,
    tol: f64,
    policy: &TruncationPolicy,
) -> VerificationReport {
    let n = sw.n;
    let big_g = gh_matrices(n).shift_conjugator().kron(&ComplexMatrix::identity(n));
    sweep(
        "gl_N quasi-periodicity, product form G R G",
        seed,
        n_samples,
        tol,
        |r| sw.draw(r),
        |x| {
            let lhs = r_matrix_n(&x.with_xi(x.xi + x.tau + 1.0), n, policy)?;
            let tt = tau_tilde_n(x.z(), x.q(), n, policy)?;
            let rhs = big_g.mul(&r_matrix_n(x, n, policy)?).mul(&big_g).scale(tt.inv());
            Ok((SamplePoint::of("xi", x.xi), rel_residual(&lhs, &rhs)))
        },
    )
}

/// Yang–Baxter equation for the Belavin matrix (reported, not gated).
pub fn verify_ybe_n(sw: &GlnSweep, n_samples: usize, seed: u64, tol: f64, policy: &TruncationPolicy) -> VerificationReport {
    let n = sw.n;
    sweep(
        "Z_N Yang-Baxter",
        seed,
        n_samples,
        tol,
        |r| (sw.draw(r), sw.draw(r)),
        |(a, b)| {
            let w = |xi: C64| belavin_w(&a.with_xi(xi), n, policy);
            let w12 = w(a.xi)?.embed_pair(n, 0, 1);
            let w13 = w(b.xi)?.embed_pair(n, 0, 2);
            let w23 = w(b.xi - a.xi)?.embed_pair(n, 1, 2);
            let lhs = w12.mul(&w13).mul(&w23);
            let rhs = w23.mul(&w13).mul(&w12);
            Ok((SamplePoint::of("xi1", a.xi).with("xi2", b.xi), rel_residual(&lhs, &rhs)))
        },
    )
}

/// Entrywise ratio of the N = 2 Belavin matrix to the eight-vertex matrix at
/// matched `(z, q, p)`; the common ratio is recorded as a note.
pub fn verify_n2_reduction(
    sw: &GlnSweep,
    n_samples: usize,
    seed: u64,
    tol: f64,
    policy: &TruncationPolicy,
) -> VerificationReport {
    let two = GlnSweep { n: 2, ..*sw };
    let mut ratios = Vec::new();
    let cell = std::cell::RefCell::new(&mut ratios);
    let mut report = sweep(
        "Z_2 reduces to eight-vertex",
        seed,
        n_samples,
        tol,
        |r| two.draw(r),
        |x| {
            let params = x.params(2)?;
            let zn = belavin_w(x, 2, policy)?;
            let ev = rmatrix_gl2::w_matrix(x.z(), &params, policy)?;
            let (spread, ratio) = ratio_spread(&zn, &ev);
            cell.borrow_mut().push(ratio);
            Ok((SamplePoint::of("xi", x.xi), spread))
        },
    );
    if let Some(worst) = ratios
        .iter()
        .map(|r| (*r - 1.0).norm())
        .reduce(f64::max)
    {
        report
            .notes
            .push(format!("common entry ratio deviates from 1 by at most {worst:.3e}"));
    }
    report
}

/// `τ_N` at N = 2 against the eight-vertex `τ`.
pub fn verify_tau_n2_match(sw: &GlnSweep, n_samples: usize, seed: u64, tol: f64, policy: &TruncationPolicy) -> VerificationReport {
    let two = GlnSweep { n: 2, ..*sw };
    sweep("tau_N at N=2 matches tau", seed, n_samples, tol, |r| two.draw(r), |x| {
        let params = x.params(2)?;
        let a = tau_n(x.xi, x, 2, policy)?;
        let b = rmatrix_gl2::tau(x.z(), &params, policy)?;
        Ok((SamplePoint::of("xi", x.xi), rel_scalar(a, b)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &ComplexMatrix, b: &ComplexMatrix) -> bool {
        rel_residual(a, b) < 1e-14
    }

    #[test]
    fn weyl_commutation() {
        for n in 2..=4 {
            let gh = gh_matrices(n);
            let omega = (2.0 * I * PI / n as f64).exp();
            assert!(close(&gh.h.mul(&gh.g), &gh.g.mul(&gh.h).scale(omega)));
            assert!(close(&gh.sqrt_g.mul(&gh.sqrt_g), &gh.g));
            assert!(close(&gh.i_matrix(0, 0), &ComplexMatrix::identity(n)));
        }
    }

    #[test]
    fn two_by_two_conjugator_by_hand() {
        let gh = gh_matrices(2);
        // g = diag(1, −1), g^{1/2} = diag(1, e^{3iπ/2}) = diag(1, −i)
        let o = C64::new(0.0, 0.0);
        let expected = ComplexMatrix::from_rows(&[vec![o, -I], vec![-I, o]]);
        assert!(close(&gh.shift_conjugator(), &expected));
        let principal = gh_matrices_with(2, SqrtG::Principal);
        let expected_p = ComplexMatrix::from_rows(&[vec![o, I], vec![I, o]]);
        assert!(close(&principal.shift_conjugator(), &expected_p));
    }

    #[test]
    fn principal_root_breaks_z3_symmetry() {
        let pol = TruncationPolicy::default();
        let sw = GlnSweep::from_q_p(0.6, 0.25, 3);
        let x = XiMuTauPoint { xi: C64::new(0.2, -0.1), mu: sw.mu, tau: sw.tau };
        let good = belavin_w(&x, 3, &pol).unwrap();
        assert!(zn_symmetry_defect(&good, 3) < 1e-12);
        let principal = belavin_w_with(&x, 3, SqrtG::Principal, &pol).unwrap();
        assert!(zn_symmetry_defect(&principal, 3) > 1e-3);
    }
}
