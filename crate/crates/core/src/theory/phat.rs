use serde::{Deserialize, Serialize};

use super::riemann::check_sigma2;
use crate::error::{invalid, Result};

/// Bounds on `p̂ = p·exp((d/2)·S(σ², 2))`, the normalized probability that
/// a fixed pair forms an augmenting 2-cycle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhatBounds {
    pub lower: f64,
    pub upper: f64,
    /// False when `σ² > d/40`, outside the range where the lower bound is
    /// proven.
    pub guaranteed: bool,
}

pub fn phat_bounds(d: f64, sigma2: f64) -> Result<PhatBounds> {
    check_sigma2(sigma2)?;
    if !(d >= 1.0) {
        return Err(invalid(format!("need d >= 1, got {d}")));
    }
    Ok(PhatBounds {
        lower: 1e-3 * ((1.0 + sigma2) / d).sqrt(),
        upper: 1.0,
        guaranteed: sigma2 <= d / 40.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let b = phat_bounds(4.0, 0.1).unwrap();
        assert!((b.lower - 5.244e-4).abs() < 1e-7);
        assert_eq!(b.upper, 1.0);
        assert!(b.guaranteed);
        assert!(!phat_bounds(1.0, 0.05).unwrap().guaranteed);
        assert!(phat_bounds(0.5, 0.05).is_err());
    }
}
