//! Scaling constants and the deterministic trajectories the process tracks.
//!
//! With `N = C(n, r)` r-sets and every r-set lying in `D = (r+1)*C(n-r, r-1)`
//! copies of T^(r), the natural time scaling is `s = N / D^(1/r)` and
//! `t = i / s`. The open-set density then follows `q(t) = exp(-t^r)`, the
//! per-edge constraint degree follows `c(t) = -q'(t) = r t^(r-1) q(t)`, and
//! the dynamic-concentration error envelopes use `f(t) = exp(W (t^r + t))`
//! and `f1(t) = f(t) / q(t)`.

use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial;
use crate::error::{CoreError, Result};

pub fn q(t: f64, r: u32) -> f64 {
    (-t.powi(r as i32)).exp()
}

pub fn c(t: f64, r: u32) -> f64 {
    r as f64 * t.powi(r as i32 - 1) * q(t, r)
}

pub fn f(t: f64, w: f64, r: u32) -> f64 {
    (w * (t.powi(r as i32) + t)).exp()
}

pub fn f1(t: f64, w: f64, r: u32) -> f64 {
    ((w + 1.0) * t.powi(r as i32) + w * t).exp()
}

/// The tunable constants. The asymptotic analysis wants
/// `1/kappa << zeta << 1/W << epsilon << gamma`; at desk scale that chain is
/// unsatisfiable, so violations are reported by [`ordering_violations`]
/// rather than enforced.
///
/// [`ordering_violations`]: ConstantPack::ordering_violations
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantPack {
    pub zeta: f64,
    pub gamma: f64,
    pub epsilon: f64,
    pub w: f64,
    pub kappa: f64,
}

impl Default for ConstantPack {
    /// Desk-scale defaults, tuned so the error bands are neither vacuous nor
    /// always violated at n <= 100.
    fn default() -> Self {
        ConstantPack {
            zeta: 0.4,
            gamma: 0.3,
            epsilon: 0.2,
            w: 4.0,
            kappa: 4.0,
        }
    }
}

impl ConstantPack {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("zeta", self.zeta),
            ("gamma", self.gamma),
            ("epsilon", self.epsilon),
            ("w", self.w),
            ("kappa", self.kappa),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v <= 0.0 {
                return Err(CoreError::InvalidArgument(format!(
                    "constant {name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Which links of the chain `1/kappa < zeta < 1/W < epsilon < gamma` fail.
    pub fn ordering_violations(&self) -> Vec<String> {
        let chain = [
            ("1/kappa", 1.0 / self.kappa),
            ("zeta", self.zeta),
            ("1/W", 1.0 / self.w),
            ("epsilon", self.epsilon),
            ("gamma", self.gamma),
        ];
        let mut out = Vec::new();
        for pair in chain.windows(2) {
            let (ln, lv) = pair[0];
            let (rn, rv) = pair[1];
            if lv >= rv {
                out.push(format!("{ln} = {lv} is not below {rn} = {rv}"));
            }
        }
        out
    }

    pub fn lambda(&self) -> f64 {
        (self.kappa - self.gamma) / 2.0
    }

    /// Independence-probe set size `k = kappa * (n log n)^(1/r)`, rounded,
    /// at least 1.
    pub fn k(&self, n: u32, r: u32) -> u64 {
        scaled_size(self.kappa, n, r)
    }

    /// Tracked-pair part size `ell = lambda * (n log n)^(1/r)`, rounded,
    /// at least 1. By construction `2*ell ~ k` up to rounding.
    pub fn ell(&self, n: u32, r: u32) -> u64 {
        scaled_size(self.lambda(), n, r)
    }
}

fn scaled_size(coeff: f64, n: u32, r: u32) -> u64 {
    let nf = n as f64;
    let base = (nf * nf.ln()).powf(1.0 / r as f64);
    (coeff * base).round().max(1.0) as u64
}

/// Everything derived from (n, r, constants): counts, time scaling, and the
/// predicted trajectories with their error bands.
#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryModel {
    pub n: u32,
    pub r: u32,
    /// N = C(n, r), the number of r-sets.
    pub num_rsets: u64,
    /// D = (r+1) * C(n-r, r-1), the copy count through a fixed r-set. This is
    /// the counting-formula value; for n < 2r-1 the enumerated count is 0
    /// while the formula is also 0, but callers should treat D = 0 as "the
    /// process never closes anything".
    pub copy_degree: u64,
    /// s = N / D^(1/r); infinite when D = 0.
    pub s: f64,
    /// ceil(zeta * N * D^(-1/r) * (ln N)^(1/r)), capped at N. When D = 0 the
    /// cap applies (the process just runs to completion).
    pub i_max: u64,
    pub t_max: f64,
    pub constants: ConstantPack,
}

impl TrajectoryModel {
    pub fn new(n: u32, r: u32, constants: ConstantPack) -> Result<Self> {
        if r < 2 || n < r {
            return Err(CoreError::InvalidArgument(format!(
                "need n >= r >= 2, got n={n}, r={r}"
            )));
        }
        constants.validate()?;
        let num_rsets = binomial(n as u64, r as u64);
        let copy_degree = (r as u64 + 1) * binomial((n - r) as u64, (r - 1) as u64);
        let (s, i_max, t_max) = if copy_degree > 0 {
            let d_root = (copy_degree as f64).powf(1.0 / r as f64);
            let s = num_rsets as f64 / d_root;
            let log_n = (num_rsets as f64).ln().max(0.0);
            let raw = constants.zeta * s * log_n.powf(1.0 / r as f64);
            let i_max = (raw.ceil() as u64).min(num_rsets);
            (s, i_max, i_max as f64 / s)
        } else {
            (f64::INFINITY, num_rsets, 0.0)
        };
        Ok(TrajectoryModel {
            n,
            r,
            num_rsets,
            copy_degree,
            s,
            i_max,
            t_max,
            constants,
        })
    }

    pub fn with_defaults(n: u32, r: u32) -> Result<Self> {
        Self::new(n, r, ConstantPack::default())
    }

    pub fn t(&self, i: u64) -> f64 {
        if self.s.is_finite() {
            i as f64 / self.s
        } else {
            0.0
        }
    }

    pub fn q(&self, t: f64) -> f64 {
        q(t, self.r)
    }

    pub fn c(&self, t: f64) -> f64 {
        c(t, self.r)
    }

    pub fn f(&self, t: f64) -> f64 {
        f(t, self.constants.w, self.r)
    }

    pub fn f1(&self, t: f64) -> f64 {
        f1(t, self.constants.w, self.r)
    }

    /// D^(1/r); zero when D = 0.
    pub fn d_root(&self) -> f64 {
        if self.copy_degree == 0 {
            0.0
        } else {
            (self.copy_degree as f64).powf(1.0 / self.r as f64)
        }
    }

    /// Predicted open count q(t) * N.
    pub fn open_prediction(&self, t: f64) -> f64 {
        self.q(t) * self.num_rsets as f64
    }

    /// Open-count band half-width N^(1 - gamma).
    pub fn open_band(&self) -> f64 {
        (self.num_rsets as f64).powf(1.0 - self.constants.gamma)
    }

    /// Predicted per-edge constraint degree c(t) * D^(1/r).
    pub fn ce_prediction(&self, t: f64) -> f64 {
        self.c(t) * self.d_root()
    }

    /// Constraint-degree band half-width N^(-gamma) * D^(1/r).
    pub fn ce_band(&self) -> f64 {
        (self.num_rsets as f64).powf(-self.constants.gamma) * self.d_root()
    }

    /// Predicted (r-1)-set degree t * D^(-1/r) * n.
    pub fn degree_prediction(&self, t: f64) -> f64 {
        if self.copy_degree == 0 {
            0.0
        } else {
            t * self.n as f64 / self.d_root()
        }
    }
}
