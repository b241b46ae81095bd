//! Modified Bessel functions of the first kind (orders 0 and 1) and the two
//! closed-form solutions of the Dirichlet problem: the disc and the half-plane.
//!
//! Both Bessel functions switch from the power series to the large-argument
//! asymptotic expansion at `z = 15`. The `log_*` variants never overflow, which
//! is what makes the Varadhan transform usable for `mu` in the hundreds.

use crate::error::{Error, Result};
use crate::geometry::Point2;

/// Argument at which evaluation switches from the power series to the
/// asymptotic expansion.
pub const SERIES_SWITCH: f64 = 15.0;

/// Largest argument accepted by the non-logarithmic evaluators.
pub const MAX_ARGUMENT: f64 = 700.0;

fn check_argument(z: f64, upper: f64) -> Result<()> {
    if !(0.0..=upper).contains(&z) {
        return Err(Error::OutOfRange(format!(
            "Bessel argument {z} outside [0, {upper}]"
        )));
    }
    Ok(())
}

/// `sum_k (z/2)^(2k + order) / (k! (k + order)!)`, for order 0 or 1.
fn power_series(z: f64, order: u32) -> f64 {
    let q = 0.25 * z * z;
    let mut term = if order == 0 { 1.0 } else { 0.5 * z };
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + order as f64));
        sum += term;
        if term <= sum * 1e-17 {
            return sum;
        }
        k += 1.0;
    }
}

/// The bracketed factor of `I_nu(z) ~ e^z / sqrt(2 pi z) * [1 - (4nu^2 - 1)/(8z) + ...]`,
/// summed up to its smallest term.
fn asymptotic_factor(z: f64, order: u32) -> f64 {
    let four_nu_sq = 4.0 * (order * order) as f64;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=60 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (four_nu_sq - odd * odd) / (k as f64 * 8.0 * z);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() <= sum.abs() * 1e-17 {
            break;
        }
    }
    sum
}

fn log_bessel(z: f64, order: u32) -> f64 {
    if z > SERIES_SWITCH {
        z - 0.5 * (2.0 * std::f64::consts::PI * z).ln() + asymptotic_factor(z, order).ln()
    } else {
        power_series(z, order).ln()
    }
}

fn bessel(z: f64, order: u32) -> f64 {
    if z > SERIES_SWITCH {
        // e^(z/2) twice keeps the intermediate finite up to z = 700.
        let half = (0.5 * z).exp();
        half * (half / (2.0 * std::f64::consts::PI * z).sqrt()) * asymptotic_factor(z, order)
    } else {
        power_series(z, order)
    }
}

/// Modified Bessel function `I_0(z)` for `0 <= z <= 700`.
pub fn bessel_i0(z: f64) -> Result<f64> {
    check_argument(z, MAX_ARGUMENT)?;
    Ok(bessel(z, 0))
}

/// Modified Bessel function `I_1(z)` for `0 <= z <= 700`.
pub fn bessel_i1(z: f64) -> Result<f64> {
    check_argument(z, MAX_ARGUMENT)?;
    Ok(bessel(z, 1))
}

/// `ln I_0(z)` for any finite `z >= 0`.
pub fn log_bessel_i0(z: f64) -> Result<f64> {
    check_argument(z, f64::MAX)?;
    Ok(log_bessel(z, 0))
}

/// `ln I_1(z)` for any finite `z >= 0`; `-inf` at zero.
pub fn log_bessel_i1(z: f64) -> Result<f64> {
    check_argument(z, f64::MAX)?;
    if z == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(log_bessel(z, 1))
}

/// Radial solution `a I_0(mu |x|)` of the Dirichlet problem on the disc of the
/// given radius centred at the origin, normalised so that it equals 1 on the
/// boundary circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscSolution {
    pub radius: f64,
    pub mu: f64,
    /// `1 / I_0(mu * radius)`; underflows to zero only for `mu * radius > ~745`.
    pub a: f64,
    log_a: f64,
}

impl DiscSolution {
    pub fn new(radius: f64, mu: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!("disc radius must be positive, got {radius}")));
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidArgument(format!("mu must be positive, got {mu}")));
        }
        let log_a = -log_bessel_i0(mu * radius)?;
        Ok(Self { radius, mu, a: log_a.exp(), log_a })
    }

    /// `ln a`, finite even when `a` itself underflows.
    pub fn log_a(&self) -> f64 {
        self.log_a
    }

    /// `ln v` at distance `s` from the centre.
    pub fn log_value_at(&self, s: f64) -> f64 {
        self.log_a + log_bessel(self.mu * s, 0)
    }

    /// `(v, |grad v|)` at distance `s` from the centre.
    pub fn eval_at(&self, s: f64) -> (f64, f64) {
        let z = self.mu * s;
        let value = (self.log_a + log_bessel(z, 0)).exp();
        let grad = if z == 0.0 {
            0.0
        } else {
            self.mu * (self.log_a + log_bessel(z, 1)).exp()
        };
        (value, grad)
    }

    /// The condition margin `mu v - |grad v|` at distance `s` from the centre.
    pub fn margin_at(&self, s: f64) -> f64 {
        let (value, grad) = self.eval_at(s);
        self.mu * value - grad
    }
}

/// Value and gradient magnitude of the disc solution at `p`.
pub fn disc_solution_eval(sol: &DiscSolution, p: Point2) -> Result<(f64, f64)> {
    let s = p.norm();
    if s > sol.radius * (1.0 + 1e-12) {
        return Err(Error::OutsideDomain { x: p.x1, y: p.x2 });
    }
    Ok(sol.eval_at(s.min(sol.radius)))
}

/// `I_0(mu |x|) / I_1(mu R)`: the radial solution of the modified Helmholtz
/// equation on the disc of radius `R` with outward flux `dv/dn = mu`.
pub fn neumann_disc_value(radius: f64, mu: f64, s: f64) -> Result<f64> {
    Ok((log_bessel_i0(mu * s)? - log_bessel_i1(mu * radius)?).exp())
}

/// Duffin's half-plane solution `v = exp(-mu x2)` on `{x2 >= 0}`; returns
/// `(v, |grad v|)`.
pub fn halfplane_solution_eval(mu: f64, p: Point2) -> Result<(f64, f64)> {
    if !(mu > 0.0) {
        return Err(Error::InvalidArgument(format!("mu must be positive, got {mu}")));
    }
    if p.x2 < 0.0 {
        return Err(Error::OutsideDomain { x: p.x1, y: p.x2 });
    }
    let value = (-mu * p.x2).exp();
    Ok((value, mu * value))
}
