//! Adaptive Dormand-Prince 5(4) integration with dense output, plus
//! trajectory diagnostics (attractor extrema, convergence tests).
//!
//! The stepper is the classic explicit 7-stage pair with the first-same-as-
//! last property, proportional-integral step control, and a quartic dense
//! interpolant, so trajectories can be sampled on any uniform grid without
//! constraining the step sequence.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::model::{rhs, ParameterSet, State};
use crate::scalar::Real;

/// Integration controls. The defaults suit orbit sampling at plotting
/// accuracy; tighten the tolerances for invariant-drift studies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions<T> {
    /// Relative local error tolerance, in `(0, 1e-2]`.
    pub rel_tol: T,
    /// Absolute local error tolerance, in `(0, 1e-2]`.
    pub abs_tol: T,
    /// Budget of step attempts (accepted plus rejected).
    pub max_steps: usize,
    /// Initial step; `None` selects one automatically.
    pub h_init: Option<T>,
    /// Step ceiling; `None` allows steps up to the full horizon.
    pub h_max: Option<T>,
}

impl<T: Real> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-6),
            abs_tol: T::lit(1e-8),
            max_steps: 10_000_000,
            h_init: None,
            h_max: None,
        }
    }
}

impl<T: Real> SolverOptions<T> {
    fn validated(self) -> Result<Self> {
        let ok = |tol: T| tol > T::zero() && tol <= T::lit(1e-2) && tol.is_finite();
        if !ok(self.rel_tol) || !ok(self.abs_tol) {
            return Err(Error::InvalidArgument(
                "tolerances must lie in (0, 1e-2]",
            ));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidArgument("max_steps must be positive"));
        }
        Ok(self)
    }
}

/// Work counters from one integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolverStats {
    pub steps_accepted: usize,
    pub steps_rejected: usize,
    pub rhs_evaluations: usize,
}

/// A trajectory sampled on a uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit<T> {
    pub times: Vec<T>,
    pub states: Vec<State<T>>,
    pub stats: SolverStats,
}

// Dormand-Prince coefficients: stage nodes, stage weights, the embedded
// error weights, and the dense-output quartic weights.
const A21: f64 = 0.2;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const C2: f64 = 0.2;
const C3: f64 = 0.3;
const C4: f64 = 0.8;
const C5: f64 = 8.0 / 9.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

// PI controller constants: error exponent, integral gain, safety factor, and
// the step change clamp [1/FACC2_INV, FACC1_MAX] applied to h_new / h.
const EXPO1: f64 = 0.17;
const BETA: f64 = 0.04;
const SAFE: f64 = 0.9;
const FACC1: f64 = 5.0;
const FACC2: f64 = 0.1;

struct DenseSegment<T> {
    rcont: [State<T>; 5],
}

impl<T: Real> DenseSegment<T> {
    fn eval(&self, theta: T) -> State<T> {
        let one = T::one();
        self.rcont[0]
            + (self.rcont[1]
                + (self.rcont[2] + (self.rcont[3] + self.rcont[4] * (one - theta)) * theta)
                    * (one - theta))
                * theta
    }
}

fn rms_norm<T: Real>(v: &State<T>, sc: &State<T>) -> T {
    let mut acc = T::zero();
    for i in 0..3 {
        let r = v[i] / sc[i];
        acc += r * r;
    }
    (acc / T::lit(3.0)).sqrt()
}

fn error_scale<T: Real>(y0: &State<T>, y1: &State<T>, opts: &SolverOptions<T>) -> State<T> {
    Vector3::new(
        opts.abs_tol + opts.rel_tol * y0[0].abs().max(y1[0].abs()),
        opts.abs_tol + opts.rel_tol * y0[1].abs().max(y1[1].abs()),
        opts.abs_tol + opts.rel_tol * y0[2].abs().max(y1[2].abs()),
    )
}

fn initial_step<T: Real, F>(
    f: &F,
    y0: &State<T>,
    f0: &State<T>,
    h_max: T,
    opts: &SolverOptions<T>,
    evals: &mut usize,
) -> T
where
    F: Fn(T, &State<T>) -> State<T>,
{
    let sc = error_scale(y0, y0, opts);
    let d0 = rms_norm(y0, &sc);
    let d1 = rms_norm(f0, &sc);
    let mut h0 = if d0 < T::lit(1e-5) || d1 < T::lit(1e-5) {
        T::lit(1e-6)
    } else {
        T::lit(0.01) * (d0 / d1)
    };
    h0 = h0.min(h_max);
    let y1 = y0 + f0 * h0;
    let f1 = f(h0, &y1);
    *evals += 1;
    let d2 = rms_norm(&(f1 - f0), &sc) / h0;
    let dm = d1.max(d2);
    let h1 = if dm <= T::lit(1e-15) {
        T::lit(1e-6).max(h0 * T::lit(1e-3))
    } else {
        (T::lit(0.01) / dm).powf(T::lit(0.2))
    };
    (h0 * T::lit(100.0)).min(h1).min(h_max)
}

/// Integrates `y' = f(t, y)` from `y(0) = init` to `t_end`, returning the
/// solution on `sample_count` uniformly spaced times (dense output, so the
/// step sequence is unconstrained). When `positivity_floor` is given, any
/// accepted state component below it aborts the run.
pub fn integrate_with<T: Real, F>(
    f: F,
    init: State<T>,
    t_end: T,
    sample_count: usize,
    options: SolverOptions<T>,
    positivity_floor: Option<T>,
) -> Result<Orbit<T>>
where
    F: Fn(T, &State<T>) -> State<T>,
{
    let opts = options.validated()?;
    if !(t_end > T::zero()) || !t_end.is_finite() {
        return Err(Error::InvalidArgument("t_end must be positive and finite"));
    }
    if sample_count < 2 {
        return Err(Error::InvalidArgument("sample_count must be at least 2"));
    }
    let h_max = opts.h_max.unwrap_or(t_end).min(t_end);
    let n = sample_count;
    let grid: Vec<T> = (0..n)
        .map(|i| t_end * T::lit(i as f64) / T::lit((n - 1) as f64))
        .collect();

    let mut stats = SolverStats::default();
    let mut t = T::zero();
    let mut y = init;
    let mut k1 = f(t, &y);
    stats.rhs_evaluations += 1;
    let mut h = match opts.h_init {
        Some(h0) if h0 > T::zero() => h0.min(h_max),
        _ => initial_step(&f, &y, &k1, h_max, &opts, &mut stats.rhs_evaluations),
    };

    let mut times = Vec::with_capacity(n);
    let mut states = Vec::with_capacity(n);
    times.push(grid[0]);
    states.push(init);
    let mut next_sample = 1usize;

    let mut facold = T::lit(1e-4);
    let mut last_rejected = false;

    while next_sample < n {
        if stats.steps_accepted + stats.steps_rejected >= opts.max_steps {
            return Err(Error::StepLimitExceeded { t: t.as_f64() });
        }
        let mut final_step = false;
        if t + h >= t_end {
            h = t_end - t;
            final_step = true;
        }
        if h <= T::lit(1e-14) * (T::one() + t.abs()) {
            return Err(Error::StepSizeUnderflow { t: t.as_f64() });
        }

        let k2 = f(t + h * T::lit(C2), &(y + k1 * (h * T::lit(A21))));
        let k3 = f(
            t + h * T::lit(C3),
            &(y + k1 * (h * T::lit(A31)) + k2 * (h * T::lit(A32))),
        );
        let k4 = f(
            t + h * T::lit(C4),
            &(y + k1 * (h * T::lit(A41)) + k2 * (h * T::lit(A42)) + k3 * (h * T::lit(A43))),
        );
        let k5 = f(
            t + h * T::lit(C5),
            &(y + k1 * (h * T::lit(A51))
                + k2 * (h * T::lit(A52))
                + k3 * (h * T::lit(A53))
                + k4 * (h * T::lit(A54))),
        );
        let k6 = f(
            t + h,
            &(y + k1 * (h * T::lit(A61))
                + k2 * (h * T::lit(A62))
                + k3 * (h * T::lit(A63))
                + k4 * (h * T::lit(A64))
                + k5 * (h * T::lit(A65))),
        );
        let y1 = y
            + k1 * (h * T::lit(A71))
            + k3 * (h * T::lit(A73))
            + k4 * (h * T::lit(A74))
            + k5 * (h * T::lit(A75))
            + k6 * (h * T::lit(A76));
        let k7 = f(t + h, &y1);
        stats.rhs_evaluations += 6;

        let err_vec = (k1 * T::lit(E1)
            + k3 * T::lit(E3)
            + k4 * T::lit(E4)
            + k5 * T::lit(E5)
            + k6 * T::lit(E6)
            + k7 * T::lit(E7))
            * h;
        let sc = error_scale(&y, &y1, &opts);
        let err = rms_norm(&err_vec, &sc);

        if !err.is_finite() {
            stats.steps_rejected += 1;
            last_rejected = true;
            h *= T::lit(0.1);
            continue;
        }

        let fac11 = err.powf(T::lit(EXPO1));
        if err <= T::one() {
            // accepted; the step factor mixes this error with the previous
            // accepted one (integral damping), so update facold afterwards
            let fac = (fac11 / facold.powf(T::lit(BETA)) / T::lit(SAFE))
                .max(T::lit(FACC2))
                .min(T::lit(FACC1));
            facold = err.max(T::lit(1e-4));
            if let Some(floor) = positivity_floor {
                for i in 0..3 {
                    if y1[i] < floor {
                        return Err(Error::PositivityViolation {
                            t: (t + h).as_f64(),
                            component: i,
                            value: y1[i].as_f64(),
                        });
                    }
                }
            }
            let t_new = if final_step { t_end } else { t + h };
            // emit samples inside (t, t_new] through the dense interpolant
            if next_sample < n && grid[next_sample] <= t_new {
                let delta = y1 - y;
                let rcont3 = k1 * h - delta;
                let rcont4 = delta - k7 * h - rcont3;
                let rcont5 = (k1 * T::lit(D1)
                    + k3 * T::lit(D3)
                    + k4 * T::lit(D4)
                    + k5 * T::lit(D5)
                    + k6 * T::lit(D6)
                    + k7 * T::lit(D7))
                    * h;
                let seg = DenseSegment {
                    rcont: [y, delta, rcont3, rcont4, rcont5],
                };
                while next_sample < n && grid[next_sample] <= t_new {
                    let theta = ((grid[next_sample] - t) / h).min(T::one());
                    times.push(grid[next_sample]);
                    states.push(seg.eval(theta));
                    next_sample += 1;
                }
            }
            t = t_new;
            y = y1;
            k1 = k7; // first-same-as-last
            stats.steps_accepted += 1;
            let mut h_new = h / fac;
            if last_rejected {
                h_new = h_new.min(h);
            }
            h = h_new.min(h_max);
            last_rejected = false;
        } else {
            stats.steps_rejected += 1;
            last_rejected = true;
            h /= (fac11 / T::lit(SAFE)).min(T::lit(FACC1));
        }
    }

    Ok(Orbit {
        times,
        states,
        stats,
    })
}

/// Integrates the model from `init`, validating the parameters first. States
/// are allowed to dip below zero only by rounding noise (ten times the
/// absolute tolerance); beyond that the run aborts.
pub fn integrate<T: Real>(
    p: &ParameterSet<T>,
    init: State<T>,
    t_end: T,
    sample_count: usize,
    options: SolverOptions<T>,
) -> Result<Orbit<T>> {
    let p = (*p).validated()?;
    let floor = -options.abs_tol * T::lit(10.0);
    integrate_with(
        move |_, s| rhs(&p, s),
        init,
        t_end,
        sample_count,
        options,
        Some(floor),
    )
}

/// Local extrema of each component after a transient, plus the final state.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremaReport<T> {
    /// Strict local minima per component, in time order.
    pub minima: [Vec<T>; 3],
    /// Strict local maxima per component, in time order.
    pub maxima: [Vec<T>; 3],
    /// Last sampled state.
    pub terminal: State<T>,
}

/// Collects strict local extrema of every component over the samples with
/// `t >= transient_fraction * t_end`.
pub fn attractor_extrema<T: Real>(orbit: &Orbit<T>, transient_fraction: T) -> ExtremaReport<T> {
    let terminal = *orbit.states.last().expect("orbit has samples");
    let t_cut = *orbit.times.last().expect("orbit has samples") * transient_fraction;
    let start = orbit.times.iter().position(|t| *t >= t_cut).unwrap_or(0);
    let mut minima: [Vec<T>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    let mut maxima: [Vec<T>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    let s = &orbit.states[start..];
    for c in 0..3 {
        for w in 1..s.len().saturating_sub(1) {
            let (prev, here, next) = (s[w - 1][c], s[w][c], s[w + 1][c]);
            if here > prev && here > next {
                maxima[c].push(here);
            } else if here < prev && here < next {
                minima[c].push(here);
            }
        }
    }
    ExtremaReport {
        minima,
        maxima,
        terminal,
    }
}

fn euclid<T: Real>(v: &State<T>) -> T {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// True iff every sample in the final tenth of the time horizon lies within
/// `rel_tol * |target|` of `target` in the Euclidean norm.
pub fn converged_to<T: Real>(orbit: &Orbit<T>, target: &State<T>, rel_tol: T) -> bool {
    let t_end = *orbit.times.last().expect("orbit has samples");
    let t_cut = t_end * T::lit(0.9);
    let radius = rel_tol * euclid(target);
    orbit
        .times
        .iter()
        .zip(&orbit.states)
        .filter(|(t, _)| **t >= t_cut)
        .all(|(_, s)| euclid(&(s - target)) <= radius)
}
