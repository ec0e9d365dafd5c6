use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::C64;

/// Tolerance on `|s*/s| = |q|^{-c}` when a central charge is declared.
pub const CHARGE_CONSISTENCY_TOL: f64 = 1e-12;

/// A parameter point `(q, s, s*, c, N)`.
///
/// `s` and `s*` are the negated square roots of the elliptic nomes, stored
/// directly so that every power of them is an integer power and no branch of
/// a square root is ever chosen implicitly. `p = s²` and `p* = s*²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticParams {
    pub q: C64,
    pub s: C64,
    pub s_star: C64,
    pub c: Option<f64>,
    pub n: usize,
}

impl EllipticParams {
    pub fn new(q: C64, s: C64, s_star: C64, c: Option<f64>, n: usize) -> Result<Self> {
        let params = Self {
            q,
            s,
            s_star,
            c,
            n,
        };
        params.validate()?;
        Ok(params)
    }

    /// Parameters without a second nome: `s* = s` (so `c = 0`).
    pub fn unstarred(q: C64, s: C64, n: usize) -> Result<Self> {
        Self::new(q, s, s, None, n)
    }

    pub fn p(&self) -> C64 {
        self.s * self.s
    }

    pub fn p_star(&self) -> C64 {
        self.s_star * self.s_star
    }

    /// The same point with `(s, p)` replaced by `(s*, p*)`.
    pub fn starred(&self) -> Self {
        Self {
            s: self.s_star,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Domain(format!("N must be at least 2, got {}", self.n)));
        }
        let qm = self.q.norm();
        if !(qm > 0.0 && qm < 1.0) {
            return Err(Error::Domain(format!("need 0 < |q| < 1, got |q| = {qm}")));
        }
        for (name, nome) in [("p", self.p()), ("p*", self.p_star())] {
            let m = nome.norm();
            if !(m > 0.0 && m < 1.0) {
                return Err(Error::Domain(format!("need 0 < |{name}| < 1, got {m}")));
            }
        }
        if let Some(c) = self.c {
            let lhs = (self.s_star / self.s).norm();
            let rhs = qm.powf(-c);
            let rel = (lhs - rhs).abs() / rhs;
            if !(rel <= CHARGE_CONSISTENCY_TOL) {
                return Err(Error::Domain(format!(
                    "|s*/s| = {lhs} does not match |q|^(-c) = {rhs} (relative gap {rel:e})"
                )));
            }
        }
        Ok(())
    }
}
