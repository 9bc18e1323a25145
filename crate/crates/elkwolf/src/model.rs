//! Model parameters, state, vector field, Jacobian, and boundedness
//! diagnostics.
//!
//! The system tracks prey inside a refuge (`E`), prey outside it (`N`), and
//! predators (`P`):
//!
//! ```text
//! E' = alpha E (1 - E/K) - gamma E P - q psi E
//! N' = beta N + mu E - xi N P
//! P' = theta1 gamma E P + theta2 xi N P - eta P
//! ```
//!
//! Inside the refuge prey grow logistically, are captured at the reduced
//! encounter rate `gamma`, and are relocated outward at rate `q psi`; outside,
//! prey grow exponentially, receive refuge emigrants at rate `mu`, and are
//! captured at rate `xi`. Predators convert captures with efficiencies
//! `theta1`, `theta2` and die at rate `eta`.

use nalgebra::{Matrix3, Vector3};
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Population triple `(E, N, P)`.
pub type State<T> = Vector3<T>;

/// Names of the eleven model parameters, in canonical order.
pub const PARAMETER_NAMES: [&str; 11] = [
    "alpha", "K", "gamma", "q", "psi", "beta", "mu", "xi", "theta1", "theta2", "eta",
];

/// The eleven model parameters.
///
/// Invariants: every field is finite and strictly positive, `K >= 1`, and
/// `theta1, theta2 <= 1`. [`ParameterSet::validated`] enforces them; the
/// default set satisfies them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterSet<T> {
    /// Refuge prey growth rate.
    pub alpha: T,
    /// Refuge carrying capacity.
    pub k: T,
    /// Predation encounter rate inside the refuge.
    pub gamma: T,
    /// Relocation rate out of the refuge.
    pub q: T,
    /// Relocation effort.
    pub psi: T,
    /// Outside prey growth rate.
    pub beta: T,
    /// Movement rate from the refuge to the outside.
    pub mu: T,
    /// Predation encounter rate outside the refuge.
    pub xi: T,
    /// Predator conversion efficiency on refuge prey.
    pub theta1: T,
    /// Predator conversion efficiency on outside prey.
    pub theta2: T,
    /// Predator death rate.
    pub eta: T,
}

impl<T: Real> Default for ParameterSet<T> {
    fn default() -> Self {
        Self {
            alpha: T::lit(0.25),
            k: T::lit(1000.0),
            gamma: T::lit(0.05),
            q: T::lit(0.02),
            psi: T::lit(0.01),
            beta: T::lit(0.16),
            mu: T::lit(0.10),
            xi: T::lit(0.10),
            theta1: T::lit(0.001),
            theta2: T::lit(0.01),
            eta: T::lit(0.30),
        }
    }
}

/// Returns the documented default parameter set.
pub fn default_parameters<T: Real>() -> ParameterSet<T> {
    ParameterSet::default()
}

impl<T: Real> ParameterSet<T> {
    /// Builds a parameter set from values in [`PARAMETER_NAMES`] order and
    /// validates it.
    pub fn new(values: [T; 11]) -> Result<Self> {
        Self::from_array(values).validated()
    }

    /// Builds a parameter set from values in [`PARAMETER_NAMES`] order
    /// without validation.
    pub fn from_array(v: [T; 11]) -> Self {
        Self {
            alpha: v[0],
            k: v[1],
            gamma: v[2],
            q: v[3],
            psi: v[4],
            beta: v[5],
            mu: v[6],
            xi: v[7],
            theta1: v[8],
            theta2: v[9],
            eta: v[10],
        }
    }

    /// Values in [`PARAMETER_NAMES`] order.
    pub fn to_array(&self) -> [T; 11] {
        [
            self.alpha,
            self.k,
            self.gamma,
            self.q,
            self.psi,
            self.beta,
            self.mu,
            self.xi,
            self.theta1,
            self.theta2,
            self.eta,
        ]
    }

    /// Checks all parameter invariants, returning the set unchanged on
    /// success. Every formula downstream divides by at least one of the
    /// rates, so nonpositive values are rejected here rather than at each
    /// operation.
    pub fn validated(self) -> Result<Self> {
        for (name, value) in PARAMETER_NAMES.iter().zip(self.to_array()) {
            if !value.is_finite() || value <= T::zero() {
                return Err(Error::InvalidParameter {
                    name,
                    value: value.as_f64(),
                    reason: "must be finite and strictly positive",
                });
            }
        }
        if self.k < T::one() {
            return Err(Error::InvalidParameter {
                name: "K",
                value: self.k.as_f64(),
                reason: "carrying capacity must be at least 1",
            });
        }
        if self.theta1 > T::one() {
            return Err(Error::InvalidParameter {
                name: "theta1",
                value: self.theta1.as_f64(),
                reason: "conversion efficiency must not exceed 1",
            });
        }
        if self.theta2 > T::one() {
            return Err(Error::InvalidParameter {
                name: "theta2",
                value: self.theta2.as_f64(),
                reason: "conversion efficiency must not exceed 1",
            });
        }
        Ok(self)
    }

    /// Reads a parameter by name.
    pub fn get(&self, name: &str) -> Result<T> {
        let idx = PARAMETER_NAMES
            .iter()
            .position(|n| *n == name)
            .ok_or_else(|| Error::UnknownParameter(name.to_string()))?;
        Ok(self.to_array()[idx])
    }

    /// Overwrites a parameter by name, revalidating the whole set.
    pub fn set(&mut self, name: &str, value: T) -> Result<()> {
        let idx = PARAMETER_NAMES
            .iter()
            .position(|n| *n == name)
            .ok_or_else(|| Error::UnknownParameter(name.to_string()))?;
        let mut values = self.to_array();
        values[idx] = value;
        *self = Self::from_array(values).validated()?;
        Ok(())
    }
}

impl ParameterSet<f64> {
    /// Draws each parameter uniformly in `[lo_scale, hi_scale]` times its
    /// default value. Scales must keep the set valid (positive, `K >= 1`,
    /// efficiencies at most 1), which holds for the scan ranges used in this
    /// crate.
    pub fn random_scaled<R: Rng>(rng: &mut R, lo_scale: f64, hi_scale: f64) -> Self {
        let defaults: ParameterSet<f64> = ParameterSet::default();
        let mut values = defaults.to_array();
        for v in &mut values {
            let u: f64 = rng.random();
            *v *= lo_scale + u * (hi_scale - lo_scale);
        }
        Self::from_array(values)
    }
}

/// Vector field of the model at state `s`.
pub fn rhs<T: Real>(p: &ParameterSet<T>, s: &State<T>) -> State<T> {
    let (e, n, w) = (s[0], s[1], s[2]);
    Vector3::new(
        p.alpha * e * (T::one() - e / p.k) - p.gamma * e * w - p.q * p.psi * e,
        p.beta * n + p.mu * e - p.xi * n * w,
        p.theta1 * p.gamma * e * w + p.theta2 * p.xi * n * w - p.eta * w,
    )
}

/// Jacobian of [`rhs`] at state `s`; entry `(i, j)` is the partial derivative
/// of component `i` with respect to state variable `j`.
pub fn jacobian<T: Real>(p: &ParameterSet<T>, s: &State<T>) -> Matrix3<T> {
    let (e, n, w) = (s[0], s[1], s[2]);
    let two = T::lit(2.0);
    Matrix3::new(
        p.alpha * (T::one() - two * e / p.k) - p.gamma * w - p.q * p.psi,
        T::zero(),
        -p.gamma * e,
        p.mu,
        p.beta - p.xi * w,
        -p.xi * n,
        p.theta1 * p.gamma * w,
        p.theta2 * p.xi * w,
        p.theta1 * p.gamma * e + p.theta2 * p.xi * n - p.eta,
    )
}

/// Central finite-difference Jacobian of [`rhs`], with per-variable step
/// `step_scale * max(1, |s_j|)`. Test oracle for [`jacobian`].
pub fn fd_jacobian<T: Real>(p: &ParameterSet<T>, s: &State<T>, step_scale: T) -> Matrix3<T> {
    let mut out = Matrix3::zeros();
    for j in 0..3 {
        let h = step_scale * T::one().max(s[j].abs());
        let mut plus = *s;
        let mut minus = *s;
        plus[j] += h;
        minus[j] -= h;
        let df = (rhs(p, &plus) - rhs(p, &minus)) / (T::lit(2.0) * h);
        for i in 0..3 {
            out[(i, j)] = df[i];
        }
    }
    out
}

/// Dissipativity diagnostics: the parameter condition under which orbits stay
/// bounded, and the explicit asymptotic bounds when it holds.
///
/// Boundedness requires `0 < beta < eta - theta1 gamma K` (strictly). Under
/// that condition `E` is eventually bounded by `K` and the weighted predator
/// pressure `theta2 N + P` has limsup at most `aux_a / aux_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundednessReport<T> {
    /// True iff `0 < beta < eta - theta1 gamma K` (strict on both sides).
    pub condition_holds: bool,
    /// The growth rate `beta` being tested.
    pub beta: T,
    /// Threshold `eta - theta1 gamma K`; the condition needs `beta` below it.
    pub beta_limit: T,
    /// `(eta - theta1 gamma K) / (theta2 xi)`; None when `eta <= theta1 gamma K`.
    pub n_sharp: Option<T>,
    /// Asymptotic bound on `E` (the carrying capacity); None when unbounded.
    pub bound_e: Option<T>,
    /// Asymptotic bound on `N`: `mu K / aux_b`; None when unbounded.
    pub bound_n: Option<T>,
    /// Asymptotic bound on `P`: `theta2 mu K / aux_b`; None when unbounded.
    pub bound_p: Option<T>,
    /// `theta2 mu K`, numerator of the combined bound.
    pub aux_a: T,
    /// `eta - theta1 gamma K - beta`, the margin of the condition.
    pub aux_b: T,
}

/// Evaluates the boundedness condition and bounds for `p`.
pub fn boundedness_check<T: Real>(p: &ParameterSet<T>) -> BoundednessReport<T> {
    let beta_limit = p.eta - p.theta1 * p.gamma * p.k;
    let aux_a = p.theta2 * p.mu * p.k;
    let aux_b = beta_limit - p.beta;
    let condition_holds = p.beta > T::zero() && p.beta < beta_limit;
    let n_sharp = (beta_limit > T::zero()).then(|| beta_limit / (p.theta2 * p.xi));
    let (bound_e, bound_n, bound_p) = if condition_holds {
        (
            Some(p.k),
            Some(p.mu * p.k / aux_b),
            Some(aux_a / aux_b),
        )
    } else {
        (None, None, None)
    };
    BoundednessReport {
        condition_holds,
        beta: p.beta,
        beta_limit,
        n_sharp,
        bound_e,
        bound_n,
        bound_p,
        aux_a,
        aux_b,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn defaults() -> ParameterSet<f64> {
        ParameterSet::default()
    }

    #[test]
    fn defaults_match_documented_values() {
        let p = defaults();
        assert_eq!(p.alpha, 0.25);
        assert_eq!(p.k, 1000.0);
        assert_eq!(p.gamma, 0.05);
        assert_eq!(p.q, 0.02);
        assert_eq!(p.psi, 0.01);
        assert_eq!(p.beta, 0.16);
        assert_eq!(p.mu, 0.10);
        assert_eq!(p.xi, 0.10);
        assert_eq!(p.theta1, 0.001);
        assert_eq!(p.theta2, 0.01);
        assert_eq!(p.eta, 0.30);
        assert!((p.q * p.psi - 2.0e-4).abs() < 1e-18);
        assert!(p.validated().is_ok());
    }

    #[test]
    fn name_round_trip_covers_all_parameters() {
        let mut p = defaults();
        for name in PARAMETER_NAMES {
            let v = p.get(name).unwrap();
            p.set(name, v * 1.5).unwrap();
            assert_relative_eq!(p.get(name).unwrap(), v * 1.5);
        }
        assert!(p.get("nope").is_err());
        assert!(p.set("nope", 1.0).is_err());
    }

    #[test]
    fn validation_rejects_nonpositive_and_out_of_range() {
        let mut bad = defaults();
        bad.alpha = 0.0;
        assert!(bad.validated().is_err());
        let mut bad = defaults();
        bad.eta = -0.3;
        assert!(bad.validated().is_err());
        let mut bad = defaults();
        bad.k = 0.5;
        assert!(bad.validated().is_err());
        let mut bad = defaults();
        bad.theta2 = 1.5;
        assert!(bad.validated().is_err());
        let mut bad = defaults();
        bad.mu = f64::NAN;
        assert!(bad.validated().is_err());
    }

    #[test]
    fn rhs_vanishes_at_origin() {
        let f = rhs(&defaults(), &Vector3::zeros());
        assert_eq!(f, Vector3::zeros());
    }

    #[test]
    fn rhs_near_zero_at_reported_coexistence_point() {
        // two-decimal rounding of the stationary point leaves residuals of
        // order |J| * 5e-3 with Jacobian entries near 30, so 0.2 is the
        // honest tolerance here
        let f = rhs(&defaults(), &Vector3::new(396.31, 280.18, 3.01));
        for i in 0..3 {
            assert!(f[i].abs() < 0.2, "component {i} = {}", f[i]);
        }
    }

    #[test]
    fn rhs_at_full_refuge_no_predators() {
        let f = rhs(&defaults(), &Vector3::new(1000.0, 0.0, 0.0));
        assert_relative_eq!(f[0], -0.2, max_relative = 1e-12);
        assert_relative_eq!(f[1], 100.0, max_relative = 1e-12);
        assert_eq!(f[2], 0.0);
    }

    #[test]
    fn jacobian_is_diagonal_at_origin() {
        let j = jacobian(&defaults(), &Vector3::zeros());
        assert_relative_eq!(j[(0, 0)], 0.2498, max_relative = 1e-12);
        assert_relative_eq!(j[(1, 1)], 0.16, max_relative = 1e-12);
        assert_relative_eq!(j[(2, 2)], -0.3, max_relative = 1e-12);
        for i in 0..3 {
            for k in 0..3 {
                if i != k && (i, k) != (1, 0) {
                    assert_eq!(j[(i, k)], 0.0, "entry ({i},{k})");
                }
            }
        }
        // movement coupling stays even at the origin
        assert_eq!(j[(1, 0)], 0.1);
    }

    #[test]
    fn jacobian_matches_finite_differences_at_random_states() {
        let p = defaults();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let s = Vector3::new(
                rng.random::<f64>() * 1200.0,
                rng.random::<f64>() * 1200.0,
                rng.random::<f64>() * 20.0,
            );
            let a = jacobian(&p, &s);
            let fd = fd_jacobian(&p, &s, 1e-5);
            for i in 0..3 {
                for j in 0..3 {
                    let scale = a[(i, j)].abs().max(fd[(i, j)].abs()).max(1e-9);
                    assert!(
                        (a[(i, j)] - fd[(i, j)]).abs() / scale < 1e-5,
                        "entry ({i},{j}): analytic {} vs fd {}",
                        a[(i, j)],
                        fd[(i, j)]
                    );
                }
            }
        }
    }

    #[test]
    fn boundedness_holds_at_defaults_with_documented_bounds() {
        let r = boundedness_check(&defaults());
        assert!(r.condition_holds);
        assert_relative_eq!(r.beta_limit, 0.25, max_relative = 1e-12);
        assert_relative_eq!(r.n_sharp.unwrap(), 250.0, max_relative = 1e-12);
        assert_eq!(r.bound_e.unwrap(), 1000.0);
        assert_relative_eq!(r.bound_n.unwrap(), 1111.111111111111, max_relative = 1e-9);
        assert_relative_eq!(r.bound_p.unwrap(), 11.11111111111111, max_relative = 1e-9);
        // theta2 N + P bound relates the two: bound_p = theta2 * bound_n
        assert_relative_eq!(r.bound_p.unwrap(), 0.01 * r.bound_n.unwrap());
        assert_relative_eq!(r.aux_a, 1.0, max_relative = 1e-12);
        assert_relative_eq!(r.aux_b, 0.09, max_relative = 1e-12);
    }

    #[test]
    fn boundedness_boundary_is_excluded() {
        let mut p = defaults();
        p.beta = 0.25;
        let r = boundedness_check(&p);
        assert!(!r.condition_holds);
        assert!(r.bound_n.is_none());
    }

    #[test]
    fn boundedness_fails_for_large_carrying_capacity() {
        let mut p = defaults();
        p.k = 10000.0;
        let r = boundedness_check(&p);
        assert!(!r.condition_holds);
        assert_relative_eq!(r.beta_limit, -0.2, max_relative = 1e-12);
        assert!(r.n_sharp.is_none());
    }

    #[test]
    fn single_precision_instantiation_works() {
        let p: ParameterSet<f32> = ParameterSet::default();
        assert_eq!(p.alpha, 0.25_f32);
        let f = rhs(&p, &Vector3::zeros());
        assert_eq!(f, Vector3::zeros());
        let r = boundedness_check(&p);
        assert!(r.condition_holds);
    }
}
