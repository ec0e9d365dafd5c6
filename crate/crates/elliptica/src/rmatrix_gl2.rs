//! Eight-vertex Boltzmann matrix, the normalized R-matrix and its scalar
//! factors, together with sampled checks of their algebraic identities.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exchange;
use crate::linalg::{rel_residual, rel_scalar, ComplexMatrix};
use crate::params::EllipticParams;
use crate::policy::TruncationPolicy;
use crate::report::{SamplePoint, VerificationReport};
use crate::sampling::Sampler;
use crate::specfun::{guarded_div, ipow, qpoch, theta_p, xi, C64};
use crate::sweep::sweep;

/// Branch of `p^{1/2}` used in the `d` weight.
///
/// `Consistent` takes `d ∝ −s/(q z²)`, the only choice under which
/// quasi-periodicity holds with `σ_x` and the coefficient identities close.
/// `Literal` takes `d ∝ +s/(q z²)`, i.e. the same branch `p^{1/2} = −s` as
/// everywhere else, and is kept to reproduce the failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DBranch {
    #[default]
    Consistent,
    Literal,
}

/// Which nome the weights are built with: `p` (default) or `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Nome {
    #[default]
    P,
    Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WOptions {
    pub d_branch: DBranch,
    pub nome: Nome,
}

/// Unnormalized weights and the normalization `rho`; `c` is always 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Weights {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
    pub rho: C64,
}

pub fn sigma_x() -> ComplexMatrix {
    let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    ComplexMatrix::from_rows(&[vec![o, l], vec![l, o]])
}

pub fn sigma_z() -> ComplexMatrix {
    let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    ComplexMatrix::from_rows(&[vec![l, o], vec![o, -l]])
}

/// `σ ⊗ 1` on `C² ⊗ C²`.
pub fn on_first(m: &ComplexMatrix) -> ComplexMatrix {
    m.kron(&ComplexMatrix::identity(2))
}

pub fn weights(
    z: C64,
    params: &EllipticParams,
    opts: WOptions,
    policy: &TruncationPolicy,
) -> Result<Weights> {
    let q = params.q;
    let (s, p) = match opts.nome {
        Nome::P => (params.s, params.p()),
        Nome::Q => (-q.sqrt(), q),
    };
    let p2 = p * p;
    let q2 = q * q;
    let z2 = z * z;
    let th = |x: C64| theta_p(x, p2, policy);

    let th_q2 = th(q2)?;
    let th_pq2 = th(p * q2)?;
    let th_z2 = th(z2)?;
    let th_q2z2 = th(q2 * z2)?;
    let th_pz2 = th(p * z2)?;
    let th_pq2z2 = th(p * q2 * z2)?;

    let a = guarded_div(th_q2z2 * th_pq2, z * th_pq2z2 * th_q2, "eight-vertex a")?;
    let b = guarded_div(q * th_z2 * th_pq2, z * th_pz2 * th_q2, "eight-vertex b")?;
    let sign = match opts.d_branch {
        DBranch::Consistent => -1.0,
        DBranch::Literal => 1.0,
    };
    let d = guarded_div(
        sign * s * th_z2 * th_q2z2,
        q * z2 * th_pz2 * th_pq2z2,
        "eight-vertex d",
    )?;

    let euler = guarded_div(
        qpoch(p2, &[p2], policy)?,
        qpoch(p, &[p], policy)?.powi(2),
        "eight-vertex normalization",
    )?;
    let xi_ratio = guarded_div(
        xi(z2, p, q, policy)?,
        xi(z2.inv(), p, q, policy)?,
        "eight-vertex normalization xi",
    )?;
    let rho = euler * guarded_div(th_pz2 * th_q2, th_q2z2, "eight-vertex normalization")? * xi_ratio;
    Ok(Weights {
        a,
        b,
        c: C64::new(1.0, 0.0),
        d,
        rho,
    })
}

impl Weights {
    pub fn matrix(&self) -> ComplexMatrix {
        let o = C64::new(0.0, 0.0);
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        ComplexMatrix::from_rows(&[
            vec![a, o, o, d],
            vec![o, b, c, o],
            vec![o, c, b, o],
            vec![d, o, o, a],
        ])
        .scale(self.rho)
    }
}

/// `𝒲(z)` with the default options.
pub fn w_matrix(z: C64, params: &EllipticParams, policy: &TruncationPolicy) -> Result<ComplexMatrix> {
    w_matrix_with(z, params, WOptions::default(), policy)
}

pub fn w_matrix_with(
    z: C64,
    params: &EllipticParams,
    opts: WOptions,
    policy: &TruncationPolicy,
) -> Result<ComplexMatrix> {
    Ok(weights(z, params, opts, policy)?.matrix())
}

/// `τ(z) = z^{-1} Θ_{q⁴}(q z²) / Θ_{q⁴}(q z^{-2})`.
pub fn tau(z: C64, params: &EllipticParams, policy: &TruncationPolicy) -> Result<C64> {
    let q = params.q;
    let q4 = q.powi(4);
    let z2 = z * z;
    guarded_div(
        theta_p(q * z2, q4, policy)?,
        z * theta_p(q / z2, q4, policy)?,
        "tau",
    )
}

/// `τ̃(z) = −q^{-1} z² [Θ_{q⁴}(q² z²) / Θ_{q⁴}(z²)]²`.
pub fn tau_tilde(z: C64, params: &EllipticParams, policy: &TruncationPolicy) -> Result<C64> {
    let q = params.q;
    let q4 = q.powi(4);
    let z2 = z * z;
    let ratio = guarded_div(theta_p(q * q * z2, q4, policy)?, theta_p(z2, q4, policy)?, "tau_tilde")?;
    Ok(-z2 / q * ratio * ratio)
}

/// `R(z) = τ(q^{1/2} z^{-1}) 𝒲(z)` with the principal `q^{1/2}`.
pub fn r_matrix(z: C64, params: &EllipticParams, policy: &TruncationPolicy) -> Result<ComplexMatrix> {
    r_matrix_with(z, params, WOptions::default(), policy)
}

pub fn r_matrix_with(
    z: C64,
    params: &EllipticParams,
    opts: WOptions,
    policy: &TruncationPolicy,
) -> Result<ComplexMatrix> {
    let t = tau(params.q.sqrt() / z, params, policy)?;
    Ok(w_matrix_with(z, params, opts, policy)?.scale(t))
}

fn draw_z(rng: &mut Sampler) -> C64 {
    rng.annulus(0.5, 2.0)
}

/// YBE, unitarity, crossing symmetry and antisymmetry of `𝒲`.
pub fn verify_gl2(
    params: &EllipticParams,
    n_samples: usize,
    seed: u64,
    tol: f64,
    policy: &TruncationPolicy,
) -> Vec<VerificationReport> {
    let w = |z: C64| w_matrix(z, params, policy);
    let q = params.q;
    let x1 = on_first(&sigma_x());
    let z1 = on_first(&sigma_z());

    let ybe = sweep("eight-vertex Yang-Baxter", seed, n_samples, tol, |r| (draw_z(r), draw_z(r)), |&(a, b)| {
        let u = b / a;
        let w12 = w(a)?.embed_pair(2, 0, 1);
        let w13 = w(b)?.embed_pair(2, 0, 2);
        let w23 = w(u)?.embed_pair(2, 1, 2);
        let lhs = w12.mul(&w13).mul(&w23);
        let rhs = w23.mul(&w13).mul(&w12);
        Ok((SamplePoint::of("z1", a).with("z2", b), rel_residual(&lhs, &rhs)))
    });

    let unitarity = sweep("eight-vertex unitarity", seed, n_samples, tol, draw_z, |&z| {
        let prod = w(z)?.mul(&w(z.inv())?.flip_factors(2));
        Ok((SamplePoint::of("z", z), rel_residual(&prod, &ComplexMatrix::identity(4))))
    });

    let crossing = sweep("eight-vertex crossing symmetry", seed, n_samples, tol, draw_z, |&z| {
        let lhs = w(z.inv())?.flip_factors(2).partial_transpose(2, 1);
        let rhs = x1.mul(&w(-z / q)?).mul(&x1);
        Ok((SamplePoint::of("z", z), rel_residual(&lhs, &rhs)))
    });

    let antisymmetry = sweep("eight-vertex antisymmetry", seed, n_samples, tol, draw_z, |&z| {
        let lhs = w(-z)?;
        let rhs = z1.mul(&w(z)?).mul(&z1).scale(C64::new(-1.0, 0.0));
        Ok((SamplePoint::of("z", z), rel_residual(&lhs, &rhs)))
    });

    vec![ybe, unitarity, crossing, antisymmetry]
}

/// Unitarity defect, crossing-unitarity, quasi-periodicity, the ℓ-fold
/// shift law for `ℓ ∈ [-3, 3]`, and agreement of the two inverse paths.
pub fn verify_r_identities(
    params: &EllipticParams,
    n_samples: usize,
    seed: u64,
    tol: f64,
    policy: &TruncationPolicy,
) -> Vec<VerificationReport> {
    verify_r_identities_with(params, WOptions::default(), n_samples, seed, tol, policy)
}

pub fn verify_r_identities_with(
    params: &EllipticParams,
    opts: WOptions,
    n_samples: usize,
    seed: u64,
    tol: f64,
    policy: &TruncationPolicy,
) -> Vec<VerificationReport> {
    let r = |z: C64| r_matrix_with(z, params, opts, policy);
    let tt = |z: C64| tau_tilde(z, params, policy);
    let q = params.q;
    let s = params.s;
    let x1 = on_first(&sigma_x());
    let id4 = ComplexMatrix::identity(4);

    let mut out = Vec::new();
    out.push(sweep("R unitarity defect", seed, n_samples, tol, draw_z, |&z| {
        let lhs = r(z)?.mul(&r(z.inv())?.flip_factors(2));
        Ok((SamplePoint::of("z", z), rel_residual(&lhs, &id4.scale(tt(z)?))))
    }));
    out.push(sweep("R crossing-unitarity", seed, n_samples, tol, draw_z, |&z| {
        let lhs = r(z)?.partial_transpose(2, 2).inverse()?;
        let rhs = r(q * q * z)?.inverse()?.partial_transpose(2, 2);
        Ok((SamplePoint::of("z", z), rel_residual(&lhs, &rhs)))
    }));
    out.push(sweep("R quasi-periodicity", seed, n_samples, tol, draw_z, |&z| {
        let lhs = r(s * z)?;
        let rhs = x1.mul(&r(z)?).mul(&x1).scale(tt(z)?.inv());
        Ok((SamplePoint::of("z", z), rel_residual(&lhs, &rhs)))
    }));
    for ell in -3..=3i64 {
        let conj = if ell.rem_euclid(2) == 1 { x1.clone() } else { id4.clone() };
        let name = format!("R shift law ell={ell}");
        out.push(sweep(&name, seed, n_samples, tol, draw_z, |&z| {
            let lhs = r(ipow(s, -ell) * z)?;
            let f = exchange::f_func(ell, z, params, false, policy)?;
            let rhs = conj.mul(&r(z)?).mul(&conj).scale(f);
            Ok((SamplePoint::of("z", z), rel_residual(&lhs, &rhs)))
        }));
    }
    out.push(sweep("R inverse paths agree", seed, n_samples, tol, draw_z, |&z| {
        let direct = r(z)?.inverse()?;
        let via_unitarity = r(z.inv())?.flip_factors(2).scale(tt(z)?.inv());
        Ok((SamplePoint::of("z", z), rel_residual(&direct, &via_unitarity)))
    }));
    out
}

/// `τ(z)τ(1/z) = 1`, `τ(q^{1/2}/z) = −τ(q^{1/2}z)` and
/// `τ̃(z) = τ(q^{1/2}/z) τ(q^{1/2}z)`.
pub fn verify_tau(
    params: &EllipticParams,
    n_samples: usize,
    seed: u64,
    tol: f64,
    policy: &TruncationPolicy,
) -> Vec<VerificationReport> {
    let t = |z: C64| tau(z, params, policy);
    let h = params.q.sqrt();
    vec![
        sweep("tau inversion", seed, n_samples, tol, draw_z, |&z| {
            Ok((SamplePoint::of("z", z), (t(z)? * t(z.inv())? - 1.0).norm()))
        }),
        sweep("tau reflection", seed, n_samples, tol, draw_z, |&z| {
            Ok((SamplePoint::of("z", z), rel_scalar(t(h / z)?, -t(h * z)?)))
        }),
        sweep("tau_tilde factorization", seed, n_samples, tol, draw_z, |&z| {
            let prod = t(h / z)? * t(h * z)?;
            Ok((SamplePoint::of("z", z), rel_scalar(tau_tilde(z, params, policy)?, prod)))
        }),
    ]
}
