//! Shared numerical kernels: monotone inversion, adaptive quadrature,
//! golden-section refinement and compensated accumulation.

use crate::error::{Error, Result};

/// Iteration cap for bisection-based inversion.
pub const BISECT_MAX_ITER: usize = 200;

/// Absolute tolerance on `|f(x) - target|` accepted by [`bisect_increasing`].
pub const BISECT_F_TOL: f64 = 1e-12;

/// Width below which the bisection bracket is considered converged.
pub const BISECT_X_TOL: f64 = 1e-14;

/// Solve `f(x) = target` for a non-decreasing `f` on `[lo, hi]` by bisection.
///
/// The target must lie within `[f(lo), f(hi)]` up to `slack`; values inside
/// the slack band are clamped to the nearest endpoint.
pub fn bisect_increasing<F>(f: F, lo: f64, hi: f64, target: f64, slack: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let f_lo = f(lo);
    let f_hi = f(hi);
    if target < f_lo - slack || target > f_hi + slack {
        return Err(Error::domain(format!(
            "inversion target {target} outside range [{f_lo}, {f_hi}]"
        )));
    }
    if target <= f_lo {
        return Ok(lo);
    }
    if target >= f_hi {
        return Ok(hi);
    }
    let (mut a, mut b) = (lo, hi);
    let mut mid = 0.5 * (a + b);
    for _ in 0..BISECT_MAX_ITER {
        mid = 0.5 * (a + b);
        let fm = f(mid);
        if (fm - target).abs() <= BISECT_F_TOL || (b - a) <= BISECT_X_TOL {
            return Ok(mid);
        }
        if fm < target {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(mid)
}

/// Adaptive Simpson quadrature with an absolute tolerance.
///
/// `f` must be finite on `[a, b]`. Known kink locations should be passed as
/// interval endpoints by the caller; within a panel the rule converges fast
/// on smooth integrands and subdivides across the rest.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("non-finite integration bounds"));
    }
    if b - a <= 1e-15 {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fb, fm, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || (b - a) < 1e-13 {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::numeric(format!(
            "adaptive quadrature failed to converge on [{a}, {b}] (residual {delta:e})"
        )));
    }
    let half_tol = 0.5 * tol;
    Ok(
        simpson_step(f, a, m, fa, fm, flm, left, half_tol, depth - 1)?
            + simpson_step(f, m, b, fm, fb, frm, right, half_tol, depth - 1)?,
    )
}

/// Golden-section minimization on `[a, b]`.
///
/// Returns `(x, f(x))` for the bracketed local minimum. Deterministic for a
/// given interval; ties inside the bracket resolve toward the left.
pub fn golden_min<F>(f: &F, a: f64, b: f64, x_tol: f64, max_iter: usize) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut lo, mut hi) = (a, b);
    if hi - lo <= x_tol {
        let x = lo;
        return (x, f(x));
    }
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..max_iter {
        if hi - lo <= x_tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    // Evaluate the bracket ends as well; the true argmin may sit on a kink.
    let mut best = (lo, f(lo));
    for cand in [(x1, f1), (x2, f2), (hi, f(hi))] {
        if cand.1 < best.1 - 1e-15 {
            best = cand;
        }
    }
    best
}

/// Kahan compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn add(&mut self, value: f64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Streaming mean/variance (Welford) used by the Monte Carlo estimators.
#[derive(Debug, Clone, Copy, Default)]
pub struct MeanVar {
    n: u64,
    mean: f64,
    m2: f64,
}

impl MeanVar {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    /// Standard error of the mean.
    pub fn se(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }
}

/// Evenly spaced grid including both endpoints.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(points >= 1);
    if points == 1 || hi <= lo {
        return vec![lo];
    }
    let step = (hi - lo) / (points - 1) as f64;
    (0..points)
        .map(|i| {
            if i + 1 == points {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_inverts_cubic() {
        let f = |x: f64| x * x * x + x;
        let x = bisect_increasing(f, 0.0, 2.0, 1.5, 1e-9).unwrap();
        assert!((f(x) - 1.5).abs() < 1e-10);
    }

    #[test]
    fn bisection_rejects_out_of_range_target() {
        let f = |x: f64| x;
        assert!(bisect_increasing(f, 0.0, 1.0, 2.0, 1e-9).is_err());
    }

    #[test]
    fn simpson_matches_polynomial_integral() {
        let v = adaptive_simpson(&|x: f64| x * x, 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-11);
    }

    #[test]
    fn simpson_handles_sqrt_endpoint() {
        let v = adaptive_simpson(&|x: f64| x.sqrt(), 0.0, 1.0, 1e-10).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, _) = golden_min(&|x: f64| (x - 0.37).powi(2), 0.0, 1.0, 1e-9, 200);
        assert!((x - 0.37).abs() < 1e-7);
    }

    #[test]
    fn golden_converges_to_boundary_minimum() {
        let (x, _) = golden_min(&|x: f64| x, 0.25, 0.75, 1e-9, 200);
        assert!((x - 0.25).abs() < 1e-7);
    }

    #[test]
    fn welford_se_matches_direct_formula() {
        let mut acc = MeanVar::default();
        for x in [1.0, 2.0, 3.0, 4.0] {
            acc.push(x);
        }
        assert!((acc.mean() - 2.5).abs() < 1e-12);
        let var = acc.variance();
        assert!((var - 5.0 / 3.0).abs() < 1e-12);
        assert!((acc.se() - (var / 4.0).sqrt()).abs() < 1e-12);
    }
}
