//! Closed-form equilibria of the model and existence diagnostics.
//!
//! The system has three biologically relevant stationary points:
//!
//! * extinction `(0, 0, 0)`,
//! * a refuge-free state `(0, eta / (theta2 xi), beta / xi)` where predators
//!   persist on outside prey alone,
//! * a coexistence state `(E*, N*, P*)` with every population positive.
//!
//! `N*` is the positive root of `N^2 - m1 N - m2 = 0`, after which `E*` and
//! `P*` follow linearly. The coexistence state exists iff `N*` falls strictly
//! inside the window `(n_low, n_high)`, which is algebraically equivalent to
//! `E* > 0` and `P* > 0`.

use crate::error::{Error, Result};
use crate::model::{rhs, ParameterSet, State};
use crate::scalar::Real;

/// Which stationary point an [`Equilibrium`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumKind {
    /// All three populations extinct.
    Extinction,
    /// Refuge empty; outside prey and predators persist.
    NoRefugeElk,
    /// All three populations positive.
    Coexistence,
}

/// Quantities produced while solving for the coexistence state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoexistenceAux<T> {
    /// Linear coefficient of the quadratic for `N*`.
    pub m1: T,
    /// Constant coefficient of the quadratic for `N*` (always positive).
    pub m2: T,
    /// Lower edge of the existence window; `N* > n_low` iff `P* > 0`.
    pub n_low: T,
    /// Upper edge of the existence window; `N* < n_high` iff `E* > 0`.
    pub n_high: T,
}

/// A stationary point together with its existence status.
#[derive(Debug, Clone, PartialEq)]
pub struct Equilibrium<T> {
    /// Which stationary point this is.
    pub kind: EquilibriumKind,
    /// Coordinates `(E, N, P)`. For a coexistence state that fails the
    /// existence window this is the algebraic root, which has a nonpositive
    /// component.
    pub point: State<T>,
    /// True iff the point is admissible (nonnegative, and strictly positive
    /// where the kind demands it).
    pub exists: bool,
    /// Distances `(N* - n_low, n_high - N*)` for the coexistence state;
    /// existence means both are strictly positive.
    pub existence_margin: Option<(T, T)>,
    /// Intermediate quantities for the coexistence state.
    pub aux: Option<CoexistenceAux<T>>,
}

/// The extinction state `(0, 0, 0)`.
pub fn extinction_equilibrium<T: Real>(_p: &ParameterSet<T>) -> Equilibrium<T> {
    Equilibrium {
        kind: EquilibriumKind::Extinction,
        point: State::zeros(),
        exists: true,
        existence_margin: None,
        aux: None,
    }
}

/// The refuge-free state `(0, eta / (theta2 xi), beta / xi)`. It exists for
/// every valid parameter set.
pub fn boundary_equilibrium_x1<T: Real>(p: &ParameterSet<T>) -> Equilibrium<T> {
    // The predator coordinate multiplies by the reciprocal instead of
    // dividing: for short decimal parameter pairs (0.16 and 0.1 at the
    // defaults) this rounds to the float nearest the exact ratio, so the
    // rendered value stays the short decimal. Both forms agree to one ulp.
    let p1 = p.beta * (T::one() / p.xi);
    Equilibrium {
        kind: EquilibriumKind::NoRefugeElk,
        point: State::new(T::zero(), p.eta / (p.theta2 * p.xi), p1),
        exists: true,
        existence_margin: None,
        aux: None,
    }
}

/// The coexistence state, with `exists` reporting whether `N*` lies strictly
/// inside the window `(n_low, n_high)`.
pub fn coexistence_equilibrium<T: Real>(p: &ParameterSet<T>) -> Equilibrium<T> {
    let denom = p.alpha * p.theta2 * p.xi * p.xi;
    let m1 = (p.alpha * p.eta * p.xi
        + p.theta1
            * p.gamma
            * p.k
            * (p.beta * p.gamma + p.xi * p.q * p.psi - p.alpha * p.xi)
        - p.theta2 * p.gamma * p.k * p.mu * p.xi)
        / denom;
    let m2 = p.k * p.mu * p.eta * p.gamma / denom;
    let root = (m1 * m1 + T::lit(4.0) * m2).sqrt();
    // The quadratic formula cancels when m1 < 0; the product form does not.
    let n_star = if m1 > T::zero() {
        (m1 + root) / T::lit(2.0)
    } else {
        T::lit(2.0) * m2 / (root - m1)
    };
    let e_star = (p.eta - p.theta2 * p.xi * n_star) / (p.theta1 * p.gamma);
    let p_star = (p.theta1 * p.gamma * p.k * (p.alpha - p.q * p.psi)
        - p.alpha * (p.eta - p.theta2 * p.xi * n_star))
        / (p.theta1 * p.gamma * p.gamma * p.k);
    let n_high = p.eta / (p.theta2 * p.xi);
    let n_low = n_high
        - p.k * p.theta1 * p.gamma * (p.alpha - p.q * p.psi) / (p.alpha * p.theta2 * p.xi);
    let exists = n_star > n_low && n_star < n_high;
    Equilibrium {
        kind: EquilibriumKind::Coexistence,
        point: State::new(e_star, n_star, p_star),
        exists,
        existence_margin: Some((n_star - n_low, n_high - n_star)),
        aux: Some(CoexistenceAux {
            m1,
            m2,
            n_low,
            n_high,
        }),
    }
}

/// All three stationary points, in the order extinction, refuge-free,
/// coexistence.
pub fn enumerate_equilibria<T: Real>(p: &ParameterSet<T>) -> [Equilibrium<T>; 3] {
    [
        extinction_equilibrium(p),
        boundary_equilibrium_x1(p),
        coexistence_equilibrium(p),
    ]
}

/// Scaled stationarity residual `max_i |f_i(x)| / (1 + max_j |x_j|)`.
pub fn residual_scaled<T: Real>(p: &ParameterSet<T>, point: &State<T>) -> T {
    let f = rhs(p, point);
    let num = f[0].abs().max(f[1].abs()).max(f[2].abs());
    let den = T::one() + point[0].abs().max(point[1].abs()).max(point[2].abs());
    num / den
}

/// Like [`coexistence_equilibrium`] but errors when the state does not exist.
pub fn require_coexistence<T: Real>(p: &ParameterSet<T>) -> Result<Equilibrium<T>> {
    let eq = coexistence_equilibrium(p);
    if eq.exists {
        Ok(eq)
    } else {
        Err(Error::NonExistentEquilibrium {
            kind: "coexistence",
        })
    }
}
