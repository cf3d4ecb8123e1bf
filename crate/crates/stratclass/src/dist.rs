//! Feature distributions on `[0, 1]` with exact CDFs.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A 1-D feature distribution. Multi-dimensional populations use products of
/// these as independent marginals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Distribution {
    Uniform01,
    /// Density interpolated linearly through `(x, density)` knots spanning
    /// `[0, 1]`; must integrate to 1.
    PiecewiseLinearDensity {
        knots: Vec<(f64, f64)>,
    },
}

impl Distribution {
    pub fn uniform() -> Self {
        Distribution::Uniform01
    }

    pub fn piecewise_linear(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::validation(
                "piecewise density needs at least two knots",
            ));
        }
        if (knots[0].0 - 0.0).abs() > 1e-12 || (knots[knots.len() - 1].0 - 1.0).abs() > 1e-12 {
            return Err(Error::validation(
                "piecewise density knots must span [0, 1]",
            ));
        }
        for w in knots.windows(2) {
            if w[1].0.partial_cmp(&w[0].0) != Some(std::cmp::Ordering::Greater) {
                return Err(Error::validation(
                    "piecewise density knots must strictly increase in x",
                ));
            }
        }
        if knots.iter().any(|&(_, d)| !(d.is_finite() && d >= 0.0)) {
            return Err(Error::validation(
                "piecewise density values must be finite and >= 0",
            ));
        }
        let dist = Distribution::PiecewiseLinearDensity { knots };
        let total = dist.cdf(1.0);
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::validation(format!(
                "piecewise density integrates to {total}, expected 1 within 1e-9"
            )));
        }
        Ok(dist)
    }

    pub fn density(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        match self {
            Distribution::Uniform01 => 1.0,
            Distribution::PiecewiseLinearDensity { knots } => {
                let idx = knots
                    .partition_point(|&(kx, _)| kx < x)
                    .clamp(1, knots.len() - 1);
                let (x0, d0) = knots[idx - 1];
                let (x1, d1) = knots[idx];
                d0 + (d1 - d0) * (x - x0) / (x1 - x0)
            }
        }
    }

    /// Cumulative distribution function, exact per segment.
    pub fn cdf(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        match self {
            Distribution::Uniform01 => x,
            Distribution::PiecewiseLinearDensity { knots } => {
                let mut acc = 0.0;
                for w in knots.windows(2) {
                    let (x0, d0) = w[0];
                    let (x1, d1) = w[1];
                    if x <= x0 {
                        break;
                    }
                    let hi = x.min(x1);
                    let t = hi - x0;
                    let slope = (d1 - d0) / (x1 - x0);
                    acc += d0 * t + 0.5 * slope * t * t;
                    if x <= x1 {
                        break;
                    }
                }
                acc
            }
        }
    }

    /// Probability mass of `[lo, hi)`.
    pub fn interval_mass(&self, lo: f64, hi: f64) -> Result<f64> {
        if !(0.0 - 1e-12..=1.0 + 1e-12).contains(&lo) || !(0.0 - 1e-12..=1.0 + 1e-12).contains(&hi)
        {
            return Err(Error::domain(format!(
                "interval [{lo}, {hi}) outside [0, 1]"
            )));
        }
        if hi < lo - 1e-12 {
            return Err(Error::domain(format!("inverted interval [{lo}, {hi})")));
        }
        Ok(self.mass_clamped(lo, hi))
    }

    /// Interval mass with silent clamping; empty or inverted intervals give 0.
    pub(crate) fn mass_clamped(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        (self.cdf(hi) - self.cdf(lo)).max(0.0)
    }

    /// Inverse CDF; `u` in `[0, 1]`.
    pub fn quantile(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        match self {
            Distribution::Uniform01 => u,
            Distribution::PiecewiseLinearDensity { .. } => {
                // CDF is piecewise quadratic and non-decreasing; bisection is
                // exact enough for sampling.
                let (mut a, mut b) = (0.0f64, 1.0f64);
                for _ in 0..64 {
                    let m = 0.5 * (a + b);
                    if self.cdf(m) < u {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                0.5 * (a + b)
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.random::<f64>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_masses() {
        let d = Distribution::uniform();
        // Error interval of the third worked example under uniform features.
        assert!((d.interval_mass(0.3, 0.39).unwrap() - 0.09).abs() < 1e-12);
        assert_eq!(d.interval_mass(0.4, 0.4).unwrap(), 0.0);
        assert!((d.interval_mass(0.0, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!(d.interval_mass(0.5, 0.2).is_err());
    }

    #[test]
    fn triangle_density_mass() {
        // density 2x on [0, 1]
        let d = Distribution::piecewise_linear(vec![(0.0, 0.0), (1.0, 2.0)]).unwrap();
        assert!((d.interval_mass(0.0, 0.5).unwrap() - 0.25).abs() < 1e-12);
        assert!((d.cdf(1.0) - 1.0).abs() < 1e-12);
        assert!((d.density(0.5) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unnormalized_density_rejected() {
        assert!(Distribution::piecewise_linear(vec![(0.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(Distribution::piecewise_linear(vec![(0.0, -0.5), (1.0, 2.5)]).is_err());
        assert!(Distribution::piecewise_linear(vec![(0.2, 1.0), (1.0, 1.0)]).is_err());
    }

    #[test]
    fn quantile_inverts_cdf() {
        let d = Distribution::piecewise_linear(vec![(0.0, 0.0), (0.5, 2.0), (1.0, 0.0)]).unwrap();
        for i in 0..=20 {
            let u = i as f64 / 20.0;
            let x = d.quantile(u);
            assert!((d.cdf(x) - u).abs() < 1e-9);
        }
    }

    #[test]
    fn adjacent_intervals_are_additive() {
        let d =
            Distribution::piecewise_linear(vec![(0.0, 0.5), (0.4, 1.7), (1.0, 1.0 / 6.0)]).unwrap();
        let whole = d.interval_mass(0.1, 0.9).unwrap();
        let parts = d.interval_mass(0.1, 0.37).unwrap() + d.interval_mass(0.37, 0.9).unwrap();
        assert!((whole - parts).abs() < 1e-12);
    }
}
