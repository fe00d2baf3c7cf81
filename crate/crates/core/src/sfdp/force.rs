use super::layout::squared_distance;
use super::{SfdpError, SfdpParams};

/// Spring force on `u` from its edge to `v`: magnitude `d^2 / K`, pointing
/// from `x_u` toward `x_v`.
pub fn attractive_force(x_u: &[f64], x_v: &[f64], k: f64) -> Result<Vec<f64>, SfdpError> {
    let d2 = squared_distance(x_u, x_v);
    if d2 == 0.0 {
        return Err(SfdpError::Singular);
    }
    let scale = d2.sqrt() / k;
    Ok(x_u.iter().zip(x_v).map(|(a, b)| (b - a) * scale).collect())
}

/// Electrical force on `u` from `v`: magnitude `C K^(1+p) / d^p`, pointing
/// away from `x_v`.
pub fn repulsive_force(x_u: &[f64], x_v: &[f64], c: f64, k: f64, p: f64) -> Result<Vec<f64>, SfdpError> {
    let d2 = squared_distance(x_u, x_v);
    if d2 == 0.0 {
        return Err(SfdpError::Singular);
    }
    let law = ForceLaw::new(c, k, p);
    let scale = law.repulsion_scale(d2);
    Ok(x_u.iter().zip(x_v).map(|(a, b)| (a - b) * scale).collect())
}

/// Precomputed constants of the force law. Scale factors multiply the raw
/// difference vector, so callers avoid normalising.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ForceLaw {
    pub k: f64,
    pub p: f64,
    /// `C K^(1+p)`.
    pub ckp: f64,
}

impl ForceLaw {
    pub fn new(c: f64, k: f64, p: f64) -> Self {
        ForceLaw { k, p, ckp: c * k.powf(1.0 + p) }
    }

    pub fn from_params(params: &SfdpParams) -> Self {
        ForceLaw::new(params.repulsion_strength, params.natural_length, params.repulsion_exponent)
    }

    /// `C K^(1+p) / d^(p+1)`: repulsion on `u` is this times `x_u - x_v`.
    #[inline]
    pub fn repulsion_scale(&self, d2: f64) -> f64 {
        if self.p == 2.0 {
            self.ckp / (d2 * d2.sqrt())
        } else {
            self.ckp * d2.powf(-(self.p + 1.0) / 2.0)
        }
    }

    /// Pair potential whose negative gradient is the repulsive force. For
    /// `p = 1` the logarithmic limit `-C K^2 ln d` is used.
    #[inline]
    pub fn repulsion_potential(&self, d2: f64) -> f64 {
        if self.p == 2.0 {
            self.ckp / d2.sqrt()
        } else if self.p == 1.0 {
            -self.ckp * 0.5 * d2.ln()
        } else {
            self.ckp / (self.p - 1.0) * d2.powf((1.0 - self.p) / 2.0)
        }
    }

    /// `d / K`: attraction on `u` is this times `x_v - x_u`.
    #[inline]
    pub fn attraction_scale(&self, d2: f64) -> f64 {
        d2.sqrt() / self.k
    }

    /// `d^3 / (3K)`.
    #[inline]
    pub fn attraction_energy(&self, d2: f64) -> f64 {
        d2 * d2.sqrt() / (3.0 * self.k)
    }
}
