//! Vasicek short-rate simulation on a fixed time grid.
//!
//! Paths are sampled with the exact Ornstein-Uhlenbeck transition
//!
//! ```text
//! r(t+h) = b + (r(t) - b) e^{-a h} + sigma * sqrt((1 - e^{-2 a h}) / (2 a)) * Z
//! ```
//!
//! so the grid spacing introduces no discretisation bias in the rates
//! themselves. Each path draws from its own ChaCha stream keyed by the path
//! index, which makes the output independent of how paths are scheduled
//! across threads.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const GRID_TOL: f64 = 1e-9;

/// Ordered simulation times from 0 to maturity, plus the subset of indices
/// that are payment dates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    step_times: Vec<f64>,
    payment_indices: Vec<usize>,
}

impl TimeGrid {
    pub fn new(step_times: Vec<f64>, mut payment_indices: Vec<usize>) -> Result<Self> {
        if step_times.len() < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least two points, got {}",
                step_times.len()
            )));
        }
        if step_times[0] != 0.0 {
            return Err(Error::InvalidGrid("first time must be 0".into()));
        }
        if step_times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidGrid("times must be finite".into()));
        }
        if step_times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("times must be strictly increasing".into()));
        }
        payment_indices.sort_unstable();
        payment_indices.dedup();
        let last = step_times.len() - 1;
        if let Some(&bad) = payment_indices.iter().find(|&&i| i > last) {
            return Err(Error::InvalidGrid(format!(
                "payment index {bad} outside grid of {} points",
                step_times.len()
            )));
        }
        if payment_indices.first() != Some(&0) || payment_indices.last() != Some(&last) {
            return Err(Error::InvalidGrid(
                "first and last grid points must be payment dates".into(),
            ));
        }
        Ok(Self {
            step_times,
            payment_indices,
        })
    }

    /// Uniform grid with `steps_per_year` points per year and a payment
    /// every `steps_per_year / payments_per_year` steps.
    pub fn uniform(maturity: f64, steps_per_year: u32, payments_per_year: u32) -> Result<Self> {
        if !(maturity > 0.0) {
            return Err(Error::InvalidGrid(format!("maturity must be positive, got {maturity}")));
        }
        if steps_per_year == 0 || payments_per_year == 0 {
            return Err(Error::InvalidGrid("step and payment frequencies must be positive".into()));
        }
        if !steps_per_year.is_multiple_of(payments_per_year) {
            return Err(Error::InvalidGrid(format!(
                "{steps_per_year} steps per year is not a multiple of {payments_per_year} payments per year"
            )));
        }
        let n_steps = maturity * f64::from(steps_per_year);
        let n_payments = maturity * f64::from(payments_per_year);
        if (n_steps - n_steps.round()).abs() > GRID_TOL
            || (n_payments - n_payments.round()).abs() > GRID_TOL
        {
            return Err(Error::InvalidGrid(format!(
                "maturity {maturity} is not a whole number of payment periods"
            )));
        }
        let n_steps = n_steps.round() as usize;
        let per_payment = (steps_per_year / payments_per_year) as usize;
        let times = (0..=n_steps)
            .map(|i| i as f64 / f64::from(steps_per_year))
            .collect();
        let payments = (0..=n_steps).step_by(per_payment).collect();
        Self::new(times, payments)
    }

    pub fn len(&self) -> usize {
        self.step_times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.step_times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.step_times
    }

    pub fn time(&self, index: usize) -> f64 {
        self.step_times[index]
    }

    /// Width of the interval starting at `index`. Zero at the last point.
    pub fn dt(&self, index: usize) -> f64 {
        if index + 1 < self.step_times.len() {
            self.step_times[index + 1] - self.step_times[index]
        } else {
            0.0
        }
    }

    pub fn last_index(&self) -> usize {
        self.step_times.len() - 1
    }

    pub fn maturity(&self) -> f64 {
        self.step_times[self.last_index()]
    }

    pub fn payment_indices(&self) -> &[usize] {
        &self.payment_indices
    }

    /// Number of payment periods (payment nodes minus one).
    pub fn n_periods(&self) -> usize {
        self.payment_indices.len() - 1
    }

    /// Grid index closest to time `t`, if one lies within tolerance.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let pos = self
            .step_times
            .partition_point(|&s| s < t - GRID_TOL);
        (pos < self.step_times.len() && (self.step_times[pos] - t).abs() <= GRID_TOL).then_some(pos)
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index,
                len: self.len(),
            })
        }
    }
}

/// Vasicek short-rate model `dr = a (b - r) dt + sigma dW`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VasicekParams {
    pub r0: f64,
    pub mean_reversion: f64,
    pub long_run_mean: f64,
    pub volatility: f64,
}

impl VasicekParams {
    /// Defaults used throughout: a = 0.5, b = r0, sigma = 1%.
    pub fn around(r0: f64) -> Self {
        Self {
            r0,
            mean_reversion: 0.5,
            long_run_mean: r0,
            volatility: 0.01,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.r0, self.mean_reversion, self.long_run_mean, self.volatility]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::param("vasicek", "parameters must be finite"));
        }
        if self.mean_reversion < 0.0 {
            return Err(Error::param(
                "mean_reversion",
                format!("must be >= 0, got {}", self.mean_reversion),
            ));
        }
        if self.volatility < 0.0 {
            return Err(Error::param(
                "volatility",
                format!("must be >= 0, got {}", self.volatility),
            ));
        }
        Ok(())
    }

    /// Conditional mean of r(s + t) given r(s) = r.
    pub fn conditional_mean(&self, r: f64, t: f64) -> f64 {
        self.long_run_mean + (r - self.long_run_mean) * (-self.mean_reversion * t).exp()
    }

    /// Conditional variance of r(s + t) given r(s).
    pub fn conditional_variance(&self, t: f64) -> f64 {
        self.volatility * self.volatility * variance_factor(self.mean_reversion, t)
    }

    /// Price at time s of a unit zero-coupon bond maturing at s + tau.
    pub fn zero_coupon_bond_price(&self, r_now: f64, tau: f64) -> f64 {
        zero_coupon_bond_price(self, r_now, tau)
    }
}

// (1 - e^{-2 a t}) / (2 a), with the a -> 0 limit t.
fn variance_factor(a: f64, t: f64) -> f64 {
    let x = 2.0 * a * t;
    if x == 0.0 {
        t
    } else {
        -(-x).exp_m1() / (2.0 * a)
    }
}

/// One simulated short-rate trajectory, aligned with a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatePath {
    pub path_id: u64,
    pub rates: Vec<f64>,
}

impl RatePath {
    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    /// Discount factors `exp(-sum (r_i + spread) dt_i)` at every grid point.
    pub fn discount_curve(&self, grid: &TimeGrid, spread: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(grid.len());
        let mut integral = 0.0;
        out.push(1.0);
        for i in 0..grid.last_index() {
            integral += (self.rates[i] + spread) * grid.dt(i);
            out.push((-integral).exp());
        }
        out
    }
}

/// Simulate `n_paths` Vasicek paths. Path `i` uses stream `i` of a ChaCha8
/// generator seeded with `seed`.
pub fn simulate_paths(
    params: &VasicekParams,
    grid: &TimeGrid,
    n_paths: usize,
    seed: u64,
) -> Result<Vec<RatePath>> {
    params.validate()?;
    if grid.len() < 2 {
        return Err(Error::InvalidGrid("grid is empty".into()));
    }
    if n_paths == 0 {
        return Err(Error::param("n_paths", "must be at least 1"));
    }

    // Transition coefficients depend only on the step width.
    // (1 - e^{-a dt}, conditional sd)
    let coeffs: Vec<(f64, f64)> = (0..grid.last_index())
        .map(|i| {
            let dt = grid.dt(i);
            let pull = -(-params.mean_reversion * dt).exp_m1();
            let sd = params.volatility * variance_factor(params.mean_reversion, dt).sqrt();
            (pull, sd)
        })
        .collect();

    let b = params.long_run_mean;
    Ok(crate::map_indexed(n_paths, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let mut rates = Vec::with_capacity(grid.len());
        let mut r = params.r0;
        rates.push(r);
        for &(pull, sd) in &coeffs {
            let z: f64 = StandardNormal.sample(&mut rng);
            r = r + (b - r) * pull + sd * z;
            rates.push(r);
        }
        RatePath {
            path_id: i as u64,
            rates,
        }
    }))
}

/// `exp(-integral_0^{t_k} (r + spread) ds)` by the left-point rule.
pub fn discount_factor(
    path: &RatePath,
    grid: &TimeGrid,
    spread: f64,
    to_index: usize,
) -> Result<f64> {
    grid.check_index(to_index)?;
    if path.len() != grid.len() {
        return Err(Error::ShapeMismatch(format!(
            "path has {} points, grid has {}",
            path.len(),
            grid.len()
        )));
    }
    let integral: f64 = (0..to_index)
        .map(|i| (path.rates[i] + spread) * grid.dt(i))
        .fold(0.0, |acc, x| acc + x);
    Ok((-integral).exp())
}

/// Affine Vasicek bond price `exp(A(tau) - B(tau) r)`.
pub fn zero_coupon_bond_price(params: &VasicekParams, r_now: f64, tau: f64) -> f64 {
    if tau <= 0.0 {
        return 1.0;
    }
    let a = params.mean_reversion;
    let b = params.long_run_mean;
    let s2 = params.volatility * params.volatility;
    let x = a * tau;

    // B(tau) and tau - B(tau)
    let (bt, tau_minus_b) = if x == 0.0 {
        (tau, 0.0)
    } else if x < 1e-2 {
        let g = x
            * (1.0 / 2.0
                + x * (-1.0 / 6.0
                    + x * (1.0 / 24.0
                        + x * (-1.0 / 120.0
                            + x * (1.0 / 720.0 + x * (-1.0 / 5040.0 + x / 40320.0))))));
        (tau * (1.0 - g), tau * g)
    } else {
        let bt = -(-x).exp_m1() / a;
        (bt, tau - bt)
    };

    // sigma^2 / (4 a^2) * (2 (tau - B) - a B^2), expanded near a = 0
    let convexity = if x < 1e-2 {
        let br = 2.0 / 3.0
            + x * (-1.0 / 2.0
                + x * (7.0 / 30.0
                    + x * (-1.0 / 12.0
                        + x * (31.0 / 1260.0
                            + x * (-1.0 / 160.0 + x * (127.0 / 90720.0 - x * 17.0 / 60480.0))))));
        s2 * tau.powi(3) / 4.0 * br
    } else {
        s2 / (4.0 * a * a) * (2.0 * tau_minus_b - a * bt * bt)
    };

    let a_term = -b * tau_minus_b + convexity;
    (a_term - bt * r_now).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn monthly_5y() -> TimeGrid {
        TimeGrid::uniform(5.0, 12, 2).unwrap()
    }

    #[test]
    fn uniform_grid_shape() {
        let g = monthly_5y();
        assert_eq!(g.len(), 61);
        assert_eq!(g.payment_indices().len(), 11);
        assert_eq!(g.payment_indices()[1], 6);
        assert_eq!(g.maturity(), 5.0);
        assert_eq!(g.index_of(2.0), Some(24));
        assert_eq!(g.index_of(2.01), None);
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(TimeGrid::new(vec![0.0], vec![0]).is_err());
        assert!(TimeGrid::new(vec![], vec![]).is_err());
        assert!(TimeGrid::new(vec![0.0, 1.0, 1.0], vec![0, 2]).is_err());
        assert!(TimeGrid::new(vec![0.1, 1.0], vec![0, 1]).is_err());
        assert!(TimeGrid::new(vec![0.0, 1.0], vec![0]).is_err());
        assert!(TimeGrid::new(vec![0.0, 1.0], vec![0, 1, 5]).is_err());
        assert!(TimeGrid::uniform(5.0, 12, 5).is_err());
        assert!(TimeGrid::uniform(5.25, 12, 2).is_err());
    }

    #[test]
    fn zero_noise_zero_drift_is_constant() {
        let p = VasicekParams {
            r0: 0.01,
            mean_reversion: 0.0,
            long_run_mean: 0.05,
            volatility: 0.0,
        };
        let paths = simulate_paths(&p, &monthly_5y(), 4, 7).unwrap();
        for path in &paths {
            assert!(path.rates.iter().all(|&r| r == 0.01));
        }
    }

    #[test]
    fn zero_noise_follows_ode() {
        let p = VasicekParams {
            r0: 0.01,
            mean_reversion: 0.5,
            long_run_mean: 0.03,
            volatility: 0.0,
        };
        let g = monthly_5y();
        let paths = simulate_paths(&p, &g, 3, 1).unwrap();
        let expected = 0.03 + (0.01 - 0.03) * (-1.0f64).exp();
        assert!((expected - 0.022642411176571153).abs() < 1e-15);
        for path in &paths {
            assert!((path.rates[24] - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_params() {
        let g = monthly_5y();
        let mut p = VasicekParams::around(0.01);
        p.volatility = -0.01;
        assert!(simulate_paths(&p, &g, 1, 0).is_err());
        let mut p = VasicekParams::around(0.01);
        p.mean_reversion = -0.1;
        assert!(simulate_paths(&p, &g, 1, 0).is_err());
        assert!(simulate_paths(&VasicekParams::around(0.01), &g, 0, 0).is_err());
    }

    #[test]
    fn same_seed_same_bits() {
        let g = monthly_5y();
        let p = VasicekParams::around(0.01);
        let a = simulate_paths(&p, &g, 64, 99).unwrap();
        let b = simulate_paths(&p, &g, 64, 99).unwrap();
        assert_eq!(a, b);
        let c = simulate_paths(&p, &g, 64, 100).unwrap();
        assert_ne!(a, c);
        // a longer run extends, never reshuffles, the shorter one
        let d = simulate_paths(&p, &g, 128, 99).unwrap();
        assert_eq!(&d[..64], &a[..]);
    }

    #[test]
    fn discount_factor_examples() {
        let g = monthly_5y();
        let flat = |r: f64| RatePath {
            path_id: 0,
            rates: vec![r; g.len()],
        };
        assert_eq!(discount_factor(&flat(0.05), &g, 0.01, 0).unwrap(), 1.0);
        let df = discount_factor(&flat(0.02), &g, 0.0, 12).unwrap();
        assert!((df - (-0.02f64).exp()).abs() < 1e-14);
        let df = discount_factor(&flat(0.01), &g, 0.0051, 24).unwrap();
        assert!((df - 0.970251).abs() < 1e-6);
        assert!((df - (-0.0302f64).exp()).abs() < 1e-14);
        assert!(discount_factor(&flat(0.01), &g, 0.0, 61).is_err());
    }

    #[test]
    fn discount_curve_matches_pointwise() {
        let g = monthly_5y();
        let paths = simulate_paths(&VasicekParams::around(0.01), &g, 3, 5).unwrap();
        for path in &paths {
            let curve = path.discount_curve(&g, 0.0051);
            for k in [0, 1, 17, 60] {
                assert_eq!(curve[k], discount_factor(path, &g, 0.0051, k).unwrap());
            }
        }
    }

    #[test]
    fn bond_price_examples() {
        let p = VasicekParams::around(0.02);
        assert_eq!(zero_coupon_bond_price(&p, 0.02, 0.0), 1.0);
        let flat = VasicekParams {
            r0: 0.02,
            mean_reversion: 0.0,
            long_run_mean: 0.0,
            volatility: 0.0,
        };
        let price = zero_coupon_bond_price(&flat, 0.02, 3.0);
        assert!((price - 0.941765).abs() < 1e-6);
        assert!((price - (-0.06f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn bond_price_continuous_across_series_switch() {
        let mut p = VasicekParams {
            r0: 0.02,
            mean_reversion: 0.0,
            long_run_mean: 0.03,
            volatility: 0.02,
        };
        let tau = 4.0;
        p.mean_reversion = 0.01 / tau * (1.0 - 1e-12);
        let below = zero_coupon_bond_price(&p, 0.02, tau);
        p.mean_reversion = 0.01 / tau * (1.0 + 1e-12);
        let above = zero_coupon_bond_price(&p, 0.02, tau);
        assert!((below - above).abs() < 1e-14, "{below} vs {above}");
    }

    #[test]
    fn zero_vol_bond_matches_integrated_mean() {
        for &a in &[0.0, 1e-9, 1e-4, 0.3, 2.0] {
            let p = VasicekParams {
                r0: 0.01,
                mean_reversion: a,
                long_run_mean: 0.04,
                volatility: 0.0,
            };
            for &tau in &[0.5, 1.0, 5.0] {
                let integral = if a == 0.0 {
                    0.02 * tau
                } else {
                    0.04 * tau - (0.02 - 0.04) * (-a * tau).exp_m1() / a
                };
                let got = zero_coupon_bond_price(&p, 0.02, tau);
                assert!((got - (-integral).exp()).abs() < 1e-10, "a={a} tau={tau}");
            }
        }
    }
}
