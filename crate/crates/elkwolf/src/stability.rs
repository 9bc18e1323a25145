//! Local stability analysis: characteristic polynomials, eigenvalues,
//! Routh-Hurwitz tests, algebraic stability conditions, and a Lyapunov
//! function certificate for global stability of the coexistence state.

use nalgebra::Matrix3;
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::equilibria::{coexistence_equilibrium, Equilibrium, EquilibriumKind};
use crate::model::{jacobian, ParameterSet};
use crate::scalar::Real;

/// Monic cubic `lambda^3 + b1 lambda^2 + b2 lambda + b3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharPoly<T> {
    pub b1: T,
    pub b2: T,
    pub b3: T,
}

impl<T: Real> CharPoly<T> {
    /// `b1 b2 - b3`, the third Routh-Hurwitz quantity.
    pub fn hurwitz_margin(&self) -> T {
        self.b1 * self.b2 - self.b3
    }

    /// Evaluates the polynomial at a complex point.
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        let b1 = Complex::new(self.b1, T::zero());
        let b2 = Complex::new(self.b2, T::zero());
        let b3 = Complex::new(self.b3, T::zero());
        ((z + b1) * z + b2) * z + b3
    }
}

/// Characteristic polynomial of a 3x3 matrix: `b1 = -trace`, `b2` the sum of
/// principal 2x2 minors, `b3 = -det`.
pub fn charpoly_of<T: Real>(m: &Matrix3<T>) -> CharPoly<T> {
    let b1 = -(m[(0, 0)] + m[(1, 1)] + m[(2, 2)]);
    let b2 = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
        + m[(0, 0)] * m[(2, 2)] - m[(0, 2)] * m[(2, 0)]
        + m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)];
    let det = m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
        - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
        + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)]);
    CharPoly { b1, b2, b3: -det }
}

/// Characteristic polynomial at the coexistence state from the closed-form
/// coefficient expressions. Agrees with [`charpoly_of`] of the Jacobian to
/// rounding error; kept separate so each can check the other.
pub fn charpoly_at_coexistence<T: Real>(
    p: &ParameterSet<T>,
    eq: &Equilibrium<T>,
) -> CharPoly<T> {
    let (e, n, w) = (eq.point[0], eq.point[1], eq.point[2]);
    let b1 = p.alpha * e / p.k - p.beta + p.xi * w;
    let b2 = -p.alpha * p.beta * e / p.k
        + p.theta1 * p.gamma * p.gamma * e * w
        + p.theta2 * p.xi * p.xi * n * w
        + p.alpha * p.xi * e * w / p.k;
    let b3 = e * w
        * (p.theta1 * p.gamma * p.gamma * (p.xi * w - p.beta)
            + p.theta2 * p.gamma * p.mu * p.xi
            + p.theta2 * p.alpha * p.xi * p.xi * n / p.k);
    CharPoly { b1, b2, b3 }
}

/// Routh-Hurwitz test for a monic cubic: all roots have negative real part
/// iff `b1 > 0`, `b3 > 0`, and `b1 b2 - b3 > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouthHurwitzReport<T> {
    pub holds: bool,
    pub b1: T,
    pub b2: T,
    pub b3: T,
    /// `b1 b2 - b3`; crosses zero at a Hopf bifurcation.
    pub hurwitz_margin: T,
}

/// Evaluates the Routh-Hurwitz conditions for `cp`.
pub fn routh_hurwitz<T: Real>(cp: &CharPoly<T>) -> RouthHurwitzReport<T> {
    let hurwitz_margin = cp.hurwitz_margin();
    RouthHurwitzReport {
        holds: cp.b1 > T::zero() && cp.b3 > T::zero() && hurwitz_margin > T::zero(),
        b1: cp.b1,
        b2: cp.b2,
        b3: cp.b3,
        hurwitz_margin,
    }
}

/// Qualitative type of an equilibrium from its eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// All eigenvalues real with negative real part.
    StableNode,
    /// All real parts negative, at least one complex pair.
    StableFocus,
    /// At least one eigenvalue with positive real part.
    Unstable,
    /// Some real part within tolerance of zero and none positive.
    Marginal,
}

/// Classifies a root set with tolerance `1e-9 (1 + spectral radius)`.
pub fn classify_roots<T: Real>(roots: &[Complex<T>; 3]) -> Classification {
    let rho = roots
        .iter()
        .map(|r| r.norm())
        .fold(T::zero(), |a, b| a.max(b));
    let tol = T::lit(1e-9) * (T::one() + rho);
    if roots.iter().any(|r| r.re > tol) {
        Classification::Unstable
    } else if roots.iter().all(|r| r.re < -tol) {
        if roots.iter().any(|r| r.im.abs() > tol) {
            Classification::StableFocus
        } else {
            Classification::StableNode
        }
    } else {
        Classification::Marginal
    }
}

fn order_roots<T: Real>(mut roots: [Complex<T>; 3]) -> [Complex<T>; 3] {
    roots.sort_by(|a, b| {
        b.re.partial_cmp(&a.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    roots
}

fn newton_polish<T: Real>(cp: &CharPoly<T>, start: Complex<T>) -> Complex<T> {
    let b1 = Complex::new(cp.b1, T::zero());
    let b2 = Complex::new(cp.b2, T::zero());
    let three = Complex::new(T::lit(3.0), T::zero());
    let two = Complex::new(T::lit(2.0), T::zero());
    let mut best = start;
    let mut best_val = cp.eval(best).norm_sqr();
    let mut z = start;
    for _ in 0..3 {
        let df = (three * z + two * b1) * z + b2;
        if df.norm_sqr() < T::lit(1e-300) {
            break;
        }
        z -= cp.eval(z) / df;
        let val = cp.eval(z).norm_sqr();
        if val < best_val {
            best = z;
            best_val = val;
        }
    }
    best
}

/// Roots of the monic cubic, ordered by descending real part then ascending
/// imaginary part. Real triples use the trigonometric form, mixed cases a
/// cancellation-safe Cardano followed by deflation; every root is polished by
/// Newton iteration on the original polynomial.
pub fn cubic_roots<T: Real>(cp: &CharPoly<T>) -> [Complex<T>; 3] {
    let zero = T::zero();
    let (b1, b2, b3) = (cp.b1, cp.b2, cp.b3);
    if b1 == zero && b2 == zero && b3 == zero {
        return [Complex::new(zero, zero); 3];
    }
    // (lambda + b1)(lambda^2 + b2): the factorization a Hopf point produces.
    if b3 == b1 * b2 && b2 > zero {
        let omega = b2.sqrt();
        return order_roots([
            Complex::new(zero, -omega),
            Complex::new(zero, omega),
            Complex::new(-b1, zero),
        ]);
    }
    // depressed cubic t^3 + p t + q with lambda = t - b1/3
    let third = T::one() / T::lit(3.0);
    let shift = b1 * third;
    let p = b2 - b1 * shift;
    let q = T::lit(2.0) * shift * shift * shift - shift * b2 + b3;
    if p == zero && q == zero {
        let r = Complex::new(-shift, zero);
        return [r; 3];
    }
    let quarter_disc = q * q / T::lit(4.0) + p * p * p / T::lit(27.0);
    let roots = if quarter_disc <= zero {
        // three real roots; p < 0 is guaranteed here
        let m = T::lit(2.0) * (-p * third).sqrt();
        let arg = (T::lit(3.0) * q / (T::lit(2.0) * p)) * (T::lit(-3.0) / p).sqrt();
        let phi = arg.max(T::lit(-1.0)).min(T::one()).acos() * third;
        let two_pi_third = T::lit(2.0943951023931953);
        let mut out = [Complex::new(zero, zero); 3];
        for (k, slot) in out.iter_mut().enumerate() {
            let t = m * (phi - two_pi_third * T::lit(k as f64)).cos();
            *slot = newton_polish(cp, Complex::new(t - shift, zero));
        }
        out
    } else {
        // one real root via Cardano, arranged so no subtraction cancels
        let s = quarter_disc.sqrt();
        let sign_q = if q < zero { T::lit(-1.0) } else { T::one() };
        let w = -q / T::lit(2.0) - sign_q * s;
        let u = w.cbrt();
        let v = -p / (T::lit(3.0) * u);
        let real_root = newton_polish(cp, Complex::new(u + v - shift, zero));
        let r = real_root.re;
        // deflation: lambda^3 + .. = (lambda - r)(lambda^2 + (b1 + r) lambda + c)
        let lin = b1 + r;
        let c = b2 + r * lin;
        let quad_disc = lin * lin - T::lit(4.0) * c;
        let (r1, r2) = if quad_disc >= zero {
            let sq = quad_disc.sqrt();
            let sign_lin = if lin < zero { T::lit(-1.0) } else { T::one() };
            let x1 = (-lin - sign_lin * sq) / T::lit(2.0);
            let x2 = if x1 == zero { (-lin + sq) / T::lit(2.0) } else { c / x1 };
            (Complex::new(x1, zero), Complex::new(x2, zero))
        } else {
            let im = (-quad_disc).sqrt() / T::lit(2.0);
            let re = -lin / T::lit(2.0);
            (Complex::new(re, -im), Complex::new(re, im))
        };
        [
            real_root,
            newton_polish(cp, r1),
            newton_polish(cp, r2),
        ]
    };
    order_roots(roots)
}

/// Full local stability report for one equilibrium.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport<T> {
    /// Jacobian eigenvalues, ordered by descending real part.
    pub eigenvalues: [Complex<T>; 3],
    pub classification: Classification,
    pub charpoly: CharPoly<T>,
    pub routh_hurwitz: RouthHurwitzReport<T>,
    /// For the refuge-free state: whether predation pressure dominates refuge
    /// growth (`alpha - q psi < beta gamma / xi`), closing it to invasion.
    pub x1_condition: Option<bool>,
}

/// Classifies an equilibrium through the Jacobian spectrum.
pub fn classify_equilibrium<T: Real>(
    p: &ParameterSet<T>,
    eq: &Equilibrium<T>,
) -> StabilityReport<T> {
    let cp = charpoly_of(&jacobian(p, &eq.point));
    let eigenvalues = cubic_roots(&cp);
    let x1_condition = (eq.kind == EquilibriumKind::NoRefugeElk)
        .then(|| p.alpha - p.q * p.psi < p.beta * p.gamma / p.xi);
    StabilityReport {
        eigenvalues,
        classification: classify_roots(&eigenvalues),
        charpoly: cp,
        routh_hurwitz: routh_hurwitz(&cp),
        x1_condition,
    }
}

/// Polynomial stability conditions for the coexistence state expressed in
/// `N*` alone: two thresholds `N1`, `N2` and a cubic `F`. Satisfied means
/// `N*` exceeds both thresholds and `F(N*) > 0`.
///
/// These conditions are recorded as published. Monte Carlo comparison against
/// the Routh-Hurwitz test ([`crosscheck_conditions`]) shows they disagree
/// with the spectrum on most of the parameter box, so they are reported but
/// never used as a stability oracle elsewhere in this crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraicConditions<T> {
    /// First threshold; undefined when `gamma == xi` (a pole).
    pub n1: Option<T>,
    /// Second threshold.
    pub n2: T,
    /// The cubic `F` evaluated at `N*`.
    pub f_of_n_star: T,
    /// Coefficients `a1..a9` of the building blocks.
    pub a_small: [T; 9],
    /// Coefficients of `F` by descending degree.
    pub a_big: [T; 4],
    pub satisfied: bool,
}

/// Evaluates [`AlgebraicConditions`] at the coexistence state `eq`.
pub fn algebraic_stability_conditions<T: Real>(
    p: &ParameterSet<T>,
    eq: &Equilibrium<T>,
) -> AlgebraicConditions<T> {
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let n_star = eq.point[1];
    let surplus = p.xi * (p.alpha - p.q * p.psi) - p.beta * p.gamma;
    let n1 = (p.gamma != p.xi).then(|| {
        p.eta / (p.theta2 * p.xi)
            - p.theta1 * p.gamma * p.k * surplus / (p.alpha * (p.xi - p.gamma) * p.theta2 * p.xi)
    });
    let n2 = p.eta / (two * p.theta2 * p.xi)
        - p.mu * p.gamma * p.k / (two * p.alpha * p.xi)
        - p.theta1 * p.gamma * p.k * surplus / (two * p.alpha * p.theta2 * p.xi);
    let a1 = -p.alpha * p.theta2 * p.xi * p.xi;
    let a2 = p.alpha * p.eta * p.xi - p.theta1 * p.gamma * p.k * surplus;
    let a3 = p.alpha * p.alpha * p.theta2 * p.theta2 * p.xi * p.xi * (p.xi - p.gamma)
        - p.alpha * p.theta1 * p.theta2 * p.theta2 * p.gamma * p.xi * p.xi * p.xi * p.k;
    let a4 = p.alpha * p.theta1 * p.theta2 * p.gamma * p.eta * p.xi * p.xi * p.k
        - p.theta1 * p.theta1 * p.theta2 * p.gamma * p.gamma * p.xi * p.xi * p.k * p.k
            * (p.alpha - p.q * p.psi)
        + p.theta1 * p.theta2 * p.alpha * p.gamma * p.xi * p.k * surplus
        - two * p.theta2 * p.alpha * p.alpha * p.xi * p.eta * (p.xi - p.gamma);
    let a5 = p.alpha * p.alpha * p.eta * p.eta * (p.xi - p.gamma)
        - p.theta1 * p.gamma * p.k * p.alpha * p.eta * surplus;
    let a6 = p.theta2 * p.theta2 * p.theta2 * p.xi * p.xi * p.xi * p.alpha * p.alpha;
    let a7 = p.alpha * p.k * p.theta2 * p.theta2 * p.xi * p.xi
        * (p.theta1 * p.gamma * (p.alpha - p.q * p.gamma) - p.theta2 * p.mu * p.xi)
        - three * p.eta * p.alpha * p.alpha * p.theta2 * p.theta2 * p.xi * p.xi;
    let a8 = three * p.theta2 * p.theta2 * p.alpha * p.alpha * p.xi * p.eta * p.eta
        + p.theta1 * p.theta2 * p.theta2 * p.xi * p.xi * p.mu * p.gamma * p.k * p.k
            * (p.alpha - p.q * p.psi)
        - two * p.theta2 * p.xi * p.alpha * p.k * p.eta
            * (p.theta1 * p.gamma * (p.alpha - p.q * p.psi) - p.theta2 * p.mu * p.xi);
    let a9 = -p.alpha * p.alpha * p.alpha * p.eta * p.eta * p.eta
        + p.alpha * p.k * p.eta * p.eta
            * (p.theta1 * p.gamma * (p.alpha - p.q * p.psi) - p.theta2 * p.mu * p.xi)
        - p.theta1 * p.theta2 * p.xi * p.mu * p.eta * p.gamma * p.k * p.k
            * (p.alpha - p.q * p.psi);
    let lead = p.theta1 * p.gamma * p.gamma * p.gamma * p.k;
    let a11 = a1 * a3 + lead * a6;
    let a22 = a1 * a4 + a2 * a3 + lead * a7;
    let a33 = a1 * a5 + a2 * a4 + lead * a8;
    let a44 = a2 * a5 + lead * a9;
    let f_of_n_star = ((a11 * n_star + a22) * n_star + a33) * n_star + a44;
    let threshold = match n1 {
        Some(v) => v.max(n2),
        None => n2,
    };
    AlgebraicConditions {
        n1,
        n2,
        f_of_n_star,
        a_small: [a1, a2, a3, a4, a5, a6, a7, a8, a9],
        a_big: [a11, a22, a33, a44],
        satisfied: n_star > threshold && f_of_n_star > T::zero(),
    }
}

/// Weighted-Lyapunov-function certificate of global stability for the
/// coexistence state on trajectories with `N >= n_min`.
///
/// The candidate weights are `delta3 = 1`, `delta1 = max(2 theta1, 1)`, and
/// `delta2` the midpoint of the admissible interval. Feasibility demands
/// `delta1 > theta1 delta3`, `delta2 n_min > theta2 delta3`, and
/// `4 alpha delta1 E* > mu delta2 K N*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovCertificate<T> {
    pub delta1: T,
    pub delta2: T,
    pub delta3: T,
    /// Lower bound on `N` along the trajectories covered by the certificate.
    pub n_min: T,
    /// Admissible open interval for `delta2`; empty means infeasible.
    pub delta2_interval: (T, T),
    pub feasible: bool,
    /// Slack of each feasibility condition, in the order listed above.
    pub margins: [T; 3],
}

/// Builds the certificate for the coexistence state `eq`.
pub fn lyapunov_certificate<T: Real>(
    p: &ParameterSet<T>,
    eq: &Equilibrium<T>,
    n_min: T,
) -> LyapunovCertificate<T> {
    let one = T::one();
    let four = T::lit(4.0);
    let (e_star, n_star) = (eq.point[0], eq.point[1]);
    let delta3 = one;
    let delta1 = (T::lit(2.0) * p.theta1).max(one);
    let lower = p.theta2 * delta3 / n_min;
    let upper = four * p.alpha * delta1 * e_star / (p.mu * p.k * n_star);
    let delta2 = (lower + upper) / T::lit(2.0);
    let margins = [
        delta1 - p.theta1 * delta3,
        delta2 * n_min - p.theta2 * delta3,
        four * p.alpha * delta1 * e_star - p.mu * delta2 * p.k * n_star,
    ];
    LyapunovCertificate {
        delta1,
        delta2,
        delta3,
        n_min,
        delta2_interval: (lower, upper),
        feasible: lower < upper && margins.iter().all(|m| *m > T::zero()),
        margins,
    }
}

/// One parameter draw on which [`AlgebraicConditions`] and Routh-Hurwitz
/// disagree.
#[derive(Debug, Clone)]
pub struct CrosscheckExample {
    pub params: ParameterSet<f64>,
    pub algebraic: bool,
    pub routh_hurwitz: bool,
}

/// Agreement statistics between the published polynomial conditions and the
/// Routh-Hurwitz test over random parameter draws.
#[derive(Debug, Clone)]
pub struct CrosscheckReport {
    pub samples: usize,
    pub agree: usize,
    pub disagree: usize,
    /// Draws whose coexistence state does not exist; not compared.
    pub nonexistent: usize,
    /// Up to ten disagreeing draws, in draw order.
    pub examples: Vec<CrosscheckExample>,
}

/// Samples parameter sets uniformly in `[0.5, 1.5]` times the defaults and
/// tallies how often the two stability tests agree. Deterministic for a given
/// seed: draw `j` uses stream `j` of a counter-based generator.
pub fn crosscheck_conditions(sample_count: usize, seed: u64) -> CrosscheckReport {
    let outcomes: Vec<Option<(ParameterSet<f64>, bool, bool)>> = (0..sample_count)
        .into_par_iter()
        .map(|j| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(j as u64);
            let p = ParameterSet::random_scaled(&mut rng, 0.5, 1.5);
            let eq = coexistence_equilibrium(&p);
            if !eq.exists {
                return None;
            }
            let alg = algebraic_stability_conditions(&p, &eq).satisfied;
            let rh = routh_hurwitz(&charpoly_of(&jacobian(&p, &eq.point))).holds;
            Some((p, alg, rh))
        })
        .collect();
    let mut report = CrosscheckReport {
        samples: sample_count,
        agree: 0,
        disagree: 0,
        nonexistent: 0,
        examples: Vec::new(),
    };
    for outcome in outcomes {
        match outcome {
            None => report.nonexistent += 1,
            Some((_, alg, rh)) if alg == rh => report.agree += 1,
            Some((params, algebraic, routh_hurwitz)) => {
                report.disagree += 1;
                if report.examples.len() < 10 {
                    report.examples.push(CrosscheckExample {
                        params,
                        algebraic,
                        routh_hurwitz,
                    });
                }
            }
        }
    }
    report
}
