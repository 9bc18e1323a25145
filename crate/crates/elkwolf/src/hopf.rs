//! Hopf bifurcation analysis: locating the critical parameter value,
//! transversality of the eigenvalue crossing, the linear normal-form
//! transformation, and the first Lyapunov coefficient with its derived
//! stability indices.
//!
//! A Hopf point of the coexistence state is a parameter value where the
//! Routh-Hurwitz margin `b1 b2 - b3` of the characteristic polynomial
//! vanishes while `b1, b2, b3 > 0`; the spectrum there is `{+-i psi0, -b1}`
//! with `psi0 = sqrt(b2)`. The normal-form pipeline changes coordinates so
//! the linear part becomes the canonical rotation block, then reads the
//! quadratic response off the transformed Hessians.

use nalgebra::Matrix3;
use num_complex::Complex;

use crate::equilibria::{coexistence_equilibrium, Equilibrium};
use crate::error::{Error, Result};
use crate::model::{jacobian, ParameterSet};
use crate::scalar::Real;
use crate::stability::{charpoly_at_coexistence, cubic_roots, CharPoly};

/// A located Hopf bifurcation of the coexistence state.
#[derive(Debug, Clone, PartialEq)]
pub struct HopfPoint<T> {
    /// Name of the swept parameter.
    pub parameter: String,
    /// Critical parameter value (the Hurwitz margin root).
    pub beta_sharp: T,
    /// Angular frequency `sqrt(b2)` of the center pair.
    pub psi0: T,
    /// Characteristic polynomial at the critical value.
    pub charpoly: CharPoly<T>,
    /// Coexistence state at the critical value.
    pub equilibrium: Equilibrium<T>,
    /// Whether all three coefficients are positive there (a genuine Hopf).
    pub bi_positive: bool,
    /// Centered finite difference of the crossing function `b3 - b1 b2`
    /// (which increases through zero as stability is lost) at the root.
    pub transversality_raw: T,
    /// Centered finite differences of `(b1, b2, b3)` at the root.
    pub b_prime: [T; 3],
    /// Intermediates of the eigenvalue-crossing rate: `p1 = -2 b2`,
    /// `p2 = 2 b1 psi0`, `r1 = b3' - b1' b2`, `r2 = b2' psi0`.
    pub p1: T,
    pub p2: T,
    pub r1: T,
    pub r2: T,
    /// Real-part crossing rate `-(p1 r1 + p2 r2) / (p1^2 + p2^2)`.
    pub phi1_prime: T,
    /// Imaginary-part rate `(p2 r1 - p1 r2) / (p1^2 + p2^2)`.
    pub phi2_prime: T,
    /// More than one admissible margin root lies in the search interval;
    /// this point is the smallest.
    pub multiple_candidates: bool,
}

/// Hurwitz margin of the coexistence state as a function of one parameter.
/// `None` when the state does not exist at that value.
fn margin_at<T: Real>(p: &ParameterSet<T>, name: &str, value: T) -> Result<Option<T>> {
    let mut q = *p;
    q.set(name, value)?;
    let eq = coexistence_equilibrium(&q);
    if !eq.exists {
        return Ok(None);
    }
    Ok(Some(charpoly_at_coexistence(&q, &eq).hurwitz_margin()))
}

fn charpoly_at<T: Real>(p: &ParameterSet<T>, name: &str, value: T) -> Result<CharPoly<T>> {
    let mut q = *p;
    q.set(name, value)?;
    let eq = coexistence_equilibrium(&q);
    if !eq.exists {
        return Err(Error::NonExistentEquilibrium {
            kind: "coexistence",
        });
    }
    Ok(charpoly_at_coexistence(&q, &eq))
}

/// Searches `[lo, hi]` for Hopf points of the coexistence state along
/// `parameter`, holding the other parameters at `p`.
///
/// The interval is scanned in 256 subintervals; every sign change of the
/// Hurwitz margin between existing states is refined by bisection, candidates
/// with any nonpositive coefficient are discarded, and the smallest survivor
/// is returned with `multiple_candidates` set if others remain.
pub fn hopf_locate<T: Real>(
    p: &ParameterSet<T>,
    parameter: &str,
    lo: T,
    hi: T,
) -> Result<Option<HopfPoint<T>>> {
    if !(lo < hi) {
        return Err(Error::InvalidArgument("search interval must have lo < hi"));
    }
    // validates the parameter name and both endpoint values up front
    margin_at(p, parameter, lo)?;
    margin_at(p, parameter, hi)?;

    const SUBINTERVALS: usize = 256;
    let width = hi - lo;
    let grid: Vec<T> = (0..=SUBINTERVALS)
        .map(|i| lo + width * T::lit(i as f64) / T::lit(SUBINTERVALS as f64))
        .collect();
    let margins: Vec<Option<T>> = grid
        .iter()
        .map(|v| margin_at(p, parameter, *v))
        .collect::<Result<_>>()?;

    let mut candidates: Vec<T> = Vec::new();
    for i in 0..SUBINTERVALS {
        let (Some(ma), Some(mb)) = (margins[i], margins[i + 1]) else {
            continue;
        };
        if ma * mb > T::zero() {
            continue;
        }
        let (mut a, mut b, mut fa) = (grid[i], grid[i + 1], ma);
        let mut lost = false;
        for _ in 0..200 {
            let tol = (T::lit(1e-13).max(T::epsilon() * T::lit(4.0))) * (T::one() + b.abs());
            if b - a <= tol {
                break;
            }
            let mid = (a + b) / T::lit(2.0);
            let Some(fm) = margin_at(p, parameter, mid)? else {
                lost = true;
                break;
            };
            if fa * fm <= T::zero() {
                b = mid;
            } else {
                a = mid;
                fa = fm;
            }
        }
        if !lost {
            candidates.push((a + b) / T::lit(2.0));
        }
    }

    // keep only genuine Hopf points: all coefficients positive at the root
    let mut admissible: Vec<T> = Vec::new();
    for v in candidates {
        let cp = charpoly_at(p, parameter, v)?;
        if cp.b1 > T::zero() && cp.b2 > T::zero() && cp.b3 > T::zero() {
            admissible.push(v);
        }
    }
    let Some(&value) = admissible
        .iter()
        .min_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal))
    else {
        return Ok(None);
    };

    let mut q = *p;
    q.set(parameter, value)?;
    let equilibrium = coexistence_equilibrium(&q);
    let cp = charpoly_at_coexistence(&q, &equilibrium);
    let psi0 = cp.b2.sqrt();

    // centered differences of the margin and coefficients across the root
    let step = T::lit(1e-5) * T::one().max(value.abs());
    let cp_plus = charpoly_at(p, parameter, value + step)?;
    let cp_minus = charpoly_at(p, parameter, value - step)?;
    let two_step = T::lit(2.0) * step;
    let b_prime = [
        (cp_plus.b1 - cp_minus.b1) / two_step,
        (cp_plus.b2 - cp_minus.b2) / two_step,
        (cp_plus.b3 - cp_minus.b3) / two_step,
    ];
    let transversality_raw =
        (cp_minus.hurwitz_margin() - cp_plus.hurwitz_margin()) / two_step;
    let p1 = T::lit(-2.0) * cp.b2;
    let p2 = T::lit(2.0) * cp.b1 * psi0;
    let r1 = b_prime[2] - b_prime[0] * cp.b2;
    let r2 = b_prime[1] * psi0;
    let denom = p1 * p1 + p2 * p2;
    let phi1_prime = -(p1 * r1 + p2 * r2) / denom;
    let phi2_prime = (p2 * r1 - p1 * r2) / denom;

    Ok(Some(HopfPoint {
        parameter: parameter.to_string(),
        beta_sharp: value,
        psi0,
        charpoly: cp,
        equilibrium,
        bi_positive: true,
        transversality_raw,
        b_prime,
        p1,
        p2,
        r1,
        r2,
        phi1_prime,
        phi2_prime,
        multiple_candidates: admissible.len() > 1,
    }))
}

/// Linear part of the normal-form reduction at a Hopf point.
#[derive(Debug, Clone, PartialEq)]
pub struct Transformation<T> {
    /// Jacobian at the critical coexistence state.
    pub b_matrix: Matrix3<T>,
    /// Change-of-basis matrix; first two columns span the center eigenspace.
    pub c_matrix: Matrix3<T>,
    pub c_inverse: Matrix3<T>,
    /// `C^-1 B C`, which realizes the canonical rotation-plus-decay pattern.
    pub t_matrix: Matrix3<T>,
    pub psi0: T,
    /// Decay rate of the transverse direction, `t_matrix[(2, 2)] = -b1`.
    pub d1: T,
    /// Determinant of the stored `C`.
    pub det_c: T,
    /// Largest deviation of `t_matrix` from the exact pattern.
    pub off_pattern: T,
    /// Whether the second column was negated to orient the rotation
    /// positively (`t_matrix[(1, 0)] = +psi0`).
    pub orientation_flipped: bool,
}

fn inverse3<T: Real>(m: &Matrix3<T>) -> Option<(Matrix3<T>, T)> {
    let c00 = m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)];
    let c01 = m[(1, 2)] * m[(2, 0)] - m[(1, 0)] * m[(2, 2)];
    let c02 = m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)];
    let det = m[(0, 0)] * c00 + m[(0, 1)] * c01 + m[(0, 2)] * c02;
    if det == T::zero() || !det.is_finite() {
        return None;
    }
    let adj = Matrix3::new(
        c00,
        m[(0, 2)] * m[(2, 1)] - m[(0, 1)] * m[(2, 2)],
        m[(0, 1)] * m[(1, 2)] - m[(0, 2)] * m[(1, 1)],
        c01,
        m[(0, 0)] * m[(2, 2)] - m[(0, 2)] * m[(2, 0)],
        m[(0, 2)] * m[(1, 0)] - m[(0, 0)] * m[(1, 2)],
        c02,
        m[(0, 1)] * m[(2, 0)] - m[(0, 0)] * m[(2, 1)],
        m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
    );
    Some((adj / det, det))
}

/// Builds the normal-form basis at `hopf`, starting from the base parameters
/// `p` (the swept parameter is overwritten with the critical value).
pub fn build_transformation<T: Real>(
    p: &ParameterSet<T>,
    hopf: &HopfPoint<T>,
) -> Result<Transformation<T>> {
    let mut q = *p;
    q.set(&hopf.parameter, hopf.beta_sharp)?;
    let b = jacobian(&q, &hopf.equilibrium.point);
    let b1 = hopf.charpoly.b1;
    let psi0 = hopf.psi0;
    let (b11, b13, b31, b32) = (b[(0, 0)], b[(0, 2)], b[(2, 0)], b[(2, 1)]);
    let denom = b13 * b32;
    let zero = T::zero();
    let one = T::one();
    let mut c = Matrix3::new(
        one,
        zero,
        one,
        -(b13 * b31 + psi0 * psi0) / denom,
        -b11 * psi0 / denom,
        (b1 * (b11 + b1) - b13 * b31) / denom,
        -b11 / b13,
        psi0 / b13,
        -(b11 + b1) / b13,
    );
    let realize = |c: &Matrix3<T>| -> Result<(Matrix3<T>, Matrix3<T>)> {
        let (c_inv, _) = inverse3(c).ok_or(Error::SingularRegression)?;
        Ok((c_inv, c_inv * b * c))
    };
    let (mut c_inv, mut t) = realize(&c)?;
    let orientation_flipped = t[(1, 0)] < zero;
    if orientation_flipped {
        for row in 0..3 {
            c[(row, 1)] = -c[(row, 1)];
        }
        (c_inv, t) = realize(&c)?;
    }
    let det_c = c[(1, 1)] * (c[(2, 2)] - c[(2, 0)]) + c[(2, 1)] * (c[(1, 0)] - c[(1, 2)]);
    let off_pattern = [
        t[(0, 0)].abs(),
        t[(1, 1)].abs(),
        t[(0, 2)].abs(),
        t[(1, 2)].abs(),
        t[(2, 0)].abs(),
        t[(2, 1)].abs(),
        (t[(0, 1)] + psi0).abs(),
        (t[(1, 0)] - psi0).abs(),
    ]
    .into_iter()
    .fold(zero, |a, x| a.max(x));
    Ok(Transformation {
        b_matrix: b,
        c_matrix: c,
        c_inverse: c_inv,
        t_matrix: t,
        psi0,
        d1: t[(2, 2)],
        det_c,
        off_pattern,
        orientation_flipped,
    })
}

/// Normal-form data at a Hopf point: transformed quadratic Hessians, the
/// resonant coefficients, the first Lyapunov coefficient `l1`, and the three
/// derived indices.
///
/// Sign reading: `s2 = 2 Re l1 < 0` means the emerging limit cycle is
/// orbitally stable (supercritical bifurcation); `s1 > 0` means it exists
/// for parameter values past the critical one; `s3` sets the period
/// correction.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormReport<T> {
    pub hopf: HopfPoint<T>,
    pub transformation: Transformation<T>,
    /// Hessians of the three transformed field components at the origin.
    pub hessians: [Matrix3<T>; 3],
    pub g20: Complex<T>,
    pub g11: Complex<T>,
    pub g02: Complex<T>,
    /// Cubic resonant term; identically zero because the field is quadratic.
    pub big_g21: Complex<T>,
    pub g110: Complex<T>,
    pub g101: Complex<T>,
    pub h11: T,
    pub h20: Complex<T>,
    /// Center-manifold corrections along the transverse direction.
    pub w11: T,
    pub w20_standard: Complex<T>,
    /// Variant with the determinant of the basis as first constructed
    /// (before orientation correction) in place of the decay rate in the
    /// `w20` denominator, recorded for comparison; not used in `g21`.
    pub w20_variant: Complex<T>,
    pub g21: Complex<T>,
    /// First Lyapunov coefficient.
    pub l1: Complex<T>,
    /// Eigenvalue crossing rates from direct root tracking.
    pub p_prime0: T,
    pub q_prime0: T,
    /// `-Re l1 / p'(0)`: positive means the cycle exists past the critical
    /// parameter value.
    pub s1: T,
    /// `2 Re l1`: negative means the cycle is orbitally stable.
    pub s2: T,
    /// `-(Im l1 + s1 q'(0)) / psi0`: period correction.
    pub s3: T,
}

/// Tracks the center-pair eigenvalue with positive imaginary part across the
/// critical value by centered differences.
fn pair_rates<T: Real>(p: &ParameterSet<T>, hopf: &HopfPoint<T>) -> Result<(T, T)> {
    let step = T::lit(1e-5) * T::one().max(hopf.beta_sharp.abs());
    let member = |value: T| -> Result<Complex<T>> {
        let cp = charpoly_at(p, &hopf.parameter, value)?;
        let roots = cubic_roots(&cp);
        Ok(roots
            .into_iter()
            .max_by(|a, b| {
                a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("cubic has three roots"))
    };
    let plus = member(hopf.beta_sharp + step)?;
    let minus = member(hopf.beta_sharp - step)?;
    let two_step = T::lit(2.0) * step;
    Ok(((plus.re - minus.re) / two_step, (plus.im - minus.im) / two_step))
}

/// Computes the full normal-form report at `hopf` (base parameters `p`).
pub fn normal_form<T: Real>(
    p: &ParameterSet<T>,
    hopf: &HopfPoint<T>,
) -> Result<NormalFormReport<T>> {
    let tr = build_transformation(p, hopf)?;
    let mut q = *p;
    q.set(&hopf.parameter, hopf.beta_sharp)?;

    // Hessians of the quadratic part of the field in displacement
    // coordinates; the model is quadratic, so these are state independent.
    let zero = T::zero();
    let two = T::lit(2.0);
    let hq1 = Matrix3::new(
        -two * q.alpha / q.k,
        zero,
        -q.gamma,
        zero,
        zero,
        zero,
        -q.gamma,
        zero,
        zero,
    );
    let hq2 = Matrix3::new(zero, zero, zero, zero, zero, -q.xi, zero, -q.xi, zero);
    let hq3 = Matrix3::new(
        zero,
        zero,
        q.theta1 * q.gamma,
        zero,
        zero,
        q.theta2 * q.xi,
        q.theta1 * q.gamma,
        q.theta2 * q.xi,
        zero,
    );
    let ct = tr.c_matrix.transpose();
    let pulled = [
        ct * hq1 * tr.c_matrix,
        ct * hq2 * tr.c_matrix,
        ct * hq3 * tr.c_matrix,
    ];
    let mut hessians = [Matrix3::zeros(); 3];
    for i in 0..3 {
        let mut acc = Matrix3::zeros();
        for (k, pk) in pulled.iter().enumerate() {
            acc += pk * tr.c_inverse[(i, k)];
        }
        hessians[i] = acc;
    }

    let m1 = &hessians[0];
    let m2 = &hessians[1];
    let m3 = &hessians[2];
    let quarter = T::lit(0.25);
    let half = T::lit(0.5);
    let (m1xx, m1yy, m1xy, m1xz, m1yz) =
        (m1[(0, 0)], m1[(1, 1)], m1[(0, 1)], m1[(0, 2)], m1[(1, 2)]);
    let (m2xx, m2yy, m2xy, m2xz, m2yz) =
        (m2[(0, 0)], m2[(1, 1)], m2[(0, 1)], m2[(0, 2)], m2[(1, 2)]);
    let (m3xx, m3yy, m3xy) = (m3[(0, 0)], m3[(1, 1)], m3[(0, 1)]);

    let g20 = Complex::new(m1xx - m1yy + two * m2xy, m2xx - m2yy - two * m1xy) * quarter;
    let g11 = Complex::new(m1xx + m1yy, m2xx + m2yy) * quarter;
    let g02 = Complex::new(m1xx - m1yy - two * m2xy, m2xx - m2yy + two * m1xy) * quarter;
    let g110 = Complex::new(m1xz + m2yz, m2xz - m1yz) * half;
    let g101 = Complex::new(m1xz - m2yz, m2xz + m1yz) * half;
    let h11 = quarter * (m3xx + m3yy);
    let h20 = Complex::new(m3xx - m3yy, -two * m3xy) * quarter;

    let psi0 = tr.psi0;
    let w11 = -h11 / tr.d1;
    let w20_standard = -h20 / Complex::new(tr.d1, -two * psi0);
    // reorientation negates the determinant; undo it for the variant
    let det_unflipped = if tr.orientation_flipped {
        -tr.det_c
    } else {
        tr.det_c
    };
    let w20_variant = -h20 / Complex::new(det_unflipped, -two * psi0);
    let big_g21 = Complex::new(zero, zero);
    let g21 = big_g21 + (g110 * w11) * two + g101 * w20_standard;

    let inner = g20 * g11
        - Complex::new(g11.norm_sqr() * two, zero)
        - Complex::new(g02.norm_sqr() / T::lit(3.0), zero);
    let l1 = inner * Complex::new(zero, T::one()) / (two * psi0) + g21 * half;

    let (p_prime0, q_prime0) = pair_rates(p, hopf)?;
    let s1 = -l1.re / p_prime0;
    let s2 = two * l1.re;
    let s3 = -(l1.im + s1 * q_prime0) / psi0;

    Ok(NormalFormReport {
        hopf: hopf.clone(),
        transformation: tr,
        hessians,
        g20,
        g11,
        g02,
        big_g21,
        g110,
        g101,
        h11,
        h20,
        w11,
        w20_standard,
        w20_variant,
        g21,
        l1,
        p_prime0,
        q_prime0,
        s1,
        s2,
        s3,
    })
}

/// Diagnostics of the claimed orthogonality relations between the center
/// eigenvectors and the transverse direction. The residuals and dot products
/// are reported as evidence, never asserted: at a generic Hopf point of this
/// model they are far from zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalityReport<T> {
    pub residual_a: T,
    pub residual_b: T,
    /// Dot product of the first and third columns of `C`.
    pub re_u_dot_v: T,
    /// Dot product of the second and third columns of `C`.
    pub im_u_dot_v: T,
}

/// Evaluates [`OrthogonalityReport`] on a computed normal form.
pub fn orthogonality_check<T: Real>(nf: &NormalFormReport<T>) -> OrthogonalityReport<T> {
    let b = &nf.transformation.b_matrix;
    let c = &nf.transformation.c_matrix;
    let (b11, b13, b31, b32) = (b[(0, 0)], b[(0, 2)], b[(2, 0)], b[(2, 1)]);
    let b1 = nf.hopf.charpoly.b1;
    let psi0 = nf.hopf.psi0;
    let residual_a = (psi0 * psi0 + b13 * b31) * (b13 * b31 - b1 * (b11 + b1))
        + b11 * b32 * b32 * (b11 + b1);
    let residual_b =
        b11 * (b1 * (b11 + b1) - b13 * b31) + b32 * b32 * (b11 + b1);
    let col = |j: usize| [c[(0, j)], c[(1, j)], c[(2, j)]];
    let dot = |a: [T; 3], b: [T; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    OrthogonalityReport {
        residual_a,
        residual_b,
        re_u_dot_v: dot(col(0), col(2)),
        im_u_dot_v: dot(col(1), col(2)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::rhs;
    use approx::assert_relative_eq;
    use nalgebra::Vector3;

    /// Parameters with the refuge encounter rate raised to where a Hopf
    /// bifurcation exists in the outside growth rate.
    fn oscillatory() -> ParameterSet<f64> {
        let mut p = ParameterSet::default();
        p.gamma = 0.11;
        p
    }

    fn located() -> HopfPoint<f64> {
        hopf_locate(&oscillatory(), "beta", 0.05, 0.2)
            .unwrap()
            .expect("Hopf point exists in range")
    }

    #[test]
    fn locates_the_critical_growth_rate() {
        let h = located();
        assert_eq!(h.parameter, "beta");
        assert_relative_eq!(h.beta_sharp, 0.1437164615428651, max_relative = 1e-9);
        assert_relative_eq!(h.psi0, 0.24585200517341058, max_relative = 1e-9);
        assert_relative_eq!(h.charpoly.b1, 0.08664609307429758, max_relative = 1e-8);
        assert_relative_eq!(h.charpoly.b2, 0.060443208447786695, max_relative = 1e-8);
        assert_relative_eq!(h.charpoly.b3, 0.005237167864876096, max_relative = 1e-8);
        assert!(h.charpoly.hurwitz_margin().abs() < 1e-12);
        assert!(h.bi_positive);
        assert!(!h.multiple_candidates);
        let x = h.equilibrium.point;
        assert_relative_eq!(x[0], 143.95240315515898, max_relative = 1e-8);
        assert_relative_eq!(x[1], 284.1652356529325, max_relative = 1e-8);
        assert_relative_eq!(x[2], 1.9437445382837293, max_relative = 1e-8);
        // the located state is stationary
        let f = rhs(&{ let mut q = oscillatory(); q.beta = h.beta_sharp; q }, &x);
        assert!(f.norm() < 1e-9 * (1.0 + x.norm()));
    }

    #[test]
    fn spectrum_at_the_critical_point_is_a_center_pair() {
        let h = located();
        let roots = cubic_roots(&h.charpoly);
        // ordered by descending real part: the pair first, then -b1
        assert!(roots[0].re.abs() < 1e-8);
        assert!(roots[1].re.abs() < 1e-8);
        assert_relative_eq!(roots[0].im, -h.psi0, max_relative = 1e-8);
        assert_relative_eq!(roots[1].im, h.psi0, max_relative = 1e-8);
        assert_relative_eq!(roots[2].re, -h.charpoly.b1, max_relative = 1e-8);
        assert!(roots[2].im.abs() < 1e-12);
    }

    #[test]
    fn transversality_matches_frozen_values() {
        let h = located();
        assert_relative_eq!(
            h.transversality_raw,
            0.0055489709408811086,
            max_relative = 1e-6
        );
        assert_relative_eq!(h.b_prime[0], -1.03795531, max_relative = 1e-6);
        assert_relative_eq!(h.b_prime[1], 0.06741737, max_relative = 1e-6);
        assert_relative_eq!(h.b_prime[2], -0.05134693, max_relative = 1e-6);
        assert_relative_eq!(h.p1, -0.12088641689557339, max_relative = 1e-8);
        assert_relative_eq!(h.p2, 0.04260423144551605, max_relative = 1e-8);
        assert_relative_eq!(h.r1, 0.011390423071945842, max_relative = 1e-6);
        assert_relative_eq!(h.r2, 0.01657469677617544, max_relative = 1e-6);
        assert_relative_eq!(h.phi1_prime, 0.040830826993163566, max_relative = 1e-6);
        assert_relative_eq!(h.phi2_prime, 0.15149975715611497, max_relative = 1e-6);
        // identity: the crossing rate equals raw / (2 (b1^2 + b2)), up to
        // the truncation error of the two finite-difference routes
        let via_raw = h.transversality_raw
            / (2.0 * (h.charpoly.b1 * h.charpoly.b1 + h.charpoly.b2));
        assert_relative_eq!(h.phi1_prime, via_raw, max_relative = 1e-7);
    }

    #[test]
    fn no_hopf_point_where_the_margin_keeps_its_sign() {
        let none = hopf_locate(&oscillatory(), "beta", 0.155, 0.195).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn search_interval_is_validated() {
        let p = oscillatory();
        assert!(hopf_locate(&p, "beta", 0.2, 0.1).is_err());
        assert!(hopf_locate(&p, "growth", 0.1, 0.2).is_err());
        assert!(hopf_locate(&p, "beta", -0.1, 0.2).is_err());
    }

    #[test]
    fn transformation_matches_frozen_basis() {
        let p = oscillatory();
        let h = located();
        let tr = build_transformation(&p, &h).unwrap();
        let b = tr.b_matrix;
        assert_relative_eq!(b[(0, 0)], -0.035988100788789744, max_relative = 1e-8);
        assert_eq!(b[(0, 1)], 0.0);
        assert_relative_eq!(b[(0, 2)], -15.834764347067487, max_relative = 1e-8);
        assert_relative_eq!(b[(1, 0)], 0.1, max_relative = 1e-12);
        assert_relative_eq!(b[(1, 1)], -0.050657992285507825, max_relative = 1e-8);
        assert_relative_eq!(b[(1, 2)], -28.41652356529325, max_relative = 1e-8);
        assert_relative_eq!(b[(2, 0)], 0.00021381189921121022, max_relative = 1e-8);
        assert_relative_eq!(b[(2, 1)], 0.0019437445382837293, max_relative = 1e-8);
        assert!(b[(2, 2)].abs() < 1e-15);

        assert!(tr.orientation_flipped);
        let c = tr.c_matrix;
        assert_eq!(c[(0, 0)], 1.0);
        assert_eq!(c[(0, 1)], 0.0);
        assert_eq!(c[(0, 2)], 1.0);
        assert_relative_eq!(c[(1, 0)], 1.8537975725972977, max_relative = 1e-8);
        assert_relative_eq!(c[(1, 1)], 0.2874629593586722, max_relative = 1e-8);
        assert_relative_eq!(c[(1, 2)], -0.2526087482155135, max_relative = 1e-8);
        assert_relative_eq!(c[(2, 0)], -0.0022727272727272726, max_relative = 1e-10);
        assert_relative_eq!(c[(2, 1)], 0.015526091818280897, max_relative = 1e-8);
        assert_relative_eq!(c[(2, 2)], 0.0031991630045880297, max_relative = 1e-8);
        assert_relative_eq!(tr.det_c, 0.03427722371594995, max_relative = 1e-8);

        // the realized linear part matches the canonical pattern
        assert!(tr.off_pattern < 1e-12);
        assert!(tr.off_pattern < 1e-6 * tr.psi0);
        let t = tr.t_matrix;
        assert_relative_eq!(t[(1, 0)], tr.psi0, max_relative = 1e-9);
        assert_relative_eq!(t[(0, 1)], -tr.psi0, max_relative = 1e-9);
        assert_relative_eq!(tr.d1, -0.08664609307429755, max_relative = 1e-8);
        let rel = (tr.d1 + h.charpoly.b1).abs() / h.charpoly.b1.abs();
        assert!(rel < 1e-8, "d1 + b1 relative residual {rel}");
    }

    #[test]
    fn normal_form_matches_frozen_coefficients() {
        let p = oscillatory();
        let nf = normal_form(&p, &located()).unwrap();

        let m1 = nf.hessians[0];
        assert_relative_eq!(m1[(0, 0)], 4.56537212e-4, max_relative = 1e-7);
        assert_relative_eq!(m1[(0, 1)], -1.76557781e-3, max_relative = 1e-7);
        assert_relative_eq!(m1[(0, 2)], -4.35060645e-4, max_relative = 1e-7);
        assert_relative_eq!(m1[(1, 1)], -4.79185038e-4, max_relative = 1e-7);
        assert_relative_eq!(m1[(1, 2)], -9.43857696e-5, max_relative = 1e-7);
        assert_relative_eq!(m1[(2, 2)], -8.91769409e-5, max_relative = 1e-7);
        let m2 = nf.hessians[1];
        assert_relative_eq!(m2[(0, 0)], -4.1403e-4, max_relative = 1e-4);
        assert_relative_eq!(m2[(0, 1)], 1.65138e-3, max_relative = 1e-4);
        assert_relative_eq!(m2[(0, 2)], 3.9621e-4, max_relative = 1e-4);
        assert_relative_eq!(m2[(1, 1)], 4.0605e-4, max_relative = 1e-4);
        assert_relative_eq!(m2[(1, 2)], 2.3527e-4, max_relative = 1e-4);
        assert_relative_eq!(m2[(2, 2)], 1.5785e-4, max_relative = 1e-4);
        let m3 = nf.hessians[2];
        assert_relative_eq!(m3[(0, 0)], -4.56537212e-4, max_relative = 1e-7);
        assert_relative_eq!(m3[(0, 1)], 5.77077100e-5, max_relative = 1e-7);
        assert_relative_eq!(m3[(0, 2)], -1.66847286e-4, max_relative = 1e-7);
        assert_relative_eq!(m3[(1, 1)], 4.79185038e-4, max_relative = 1e-7);
        assert_relative_eq!(m3[(1, 2)], -1.61348433e-3, max_relative = 1e-7);
        assert_relative_eq!(m3[(2, 2)], -1.11463892e-3, max_relative = 1e-7);
        // Hessians are symmetric by construction
        for m in &nf.hessians {
            for i in 0..3 {
                for j in 0..3 {
                    assert_relative_eq!(m[(i, j)], m[(j, i)], max_relative = 1e-12);
                }
            }
        }

        assert_relative_eq!(nf.g20.re, 0.001059620749245789, max_relative = 1e-8);
        assert_relative_eq!(nf.g20.im, 0.0006777705418693617, max_relative = 1e-8);
        assert_relative_eq!(nf.g11.re, -5.661956444803998e-6, max_relative = 1e-7);
        assert_relative_eq!(nf.g11.im, -1.9954541544335667e-6, max_relative = 1e-7);
        assert_relative_eq!(nf.g02.re, -0.000591759624199468, max_relative = 1e-8);
        assert_relative_eq!(nf.g02.im, -0.001087807268171881, max_relative = 1e-8);
        assert_relative_eq!(nf.g110.re, -9.989702952802724e-5, max_relative = 1e-7);
        assert_relative_eq!(nf.g110.im, 0.00024529865658972386, max_relative = 1e-7);
        assert_relative_eq!(nf.g101.re, -0.0003351636152447118, max_relative = 1e-7);
        assert_relative_eq!(nf.g101.im, 0.00015091288701155086, max_relative = 1e-7);
        assert_eq!(nf.big_g21.re, 0.0);
        assert_eq!(nf.big_g21.im, 0.0);
        assert_relative_eq!(nf.h11, 5.661956444803998e-6, max_relative = 1e-7);
        assert_relative_eq!(nf.h20.re, -0.0002339305625231604, max_relative = 1e-7);
        assert_relative_eq!(nf.h20.im, -2.8853855015172043e-5, max_relative = 1e-7);
        assert_relative_eq!(nf.w11, 6.534577894872844e-5, max_relative = 1e-7);
        assert_relative_eq!(nf.w20_standard.re, -0.0001382247797592747, max_relative = 1e-7);
        assert_relative_eq!(nf.w20_standard.im, 0.0004513974275589289, max_relative = 1e-7);
        assert_relative_eq!(nf.w20_variant.re, -9.14025561742661e-5, max_relative = 1e-7);
        assert_relative_eq!(nf.w20_variant.im, 0.000469383067455914, max_relative = 1e-7);

        assert_relative_eq!(nf.l1.re, -5.320030410267211e-9, max_relative = 1e-6);
        assert_relative_eq!(nf.l1.im, -1.1192290892705065e-6, max_relative = 1e-7);
        assert_relative_eq!(nf.p_prime0, 0.040830826993163566, max_relative = 1e-6);
        assert_relative_eq!(nf.q_prime0, 0.15149975715611497, max_relative = 1e-6);
        // root tracking and the closed formula agree on the crossing rate
        assert_relative_eq!(nf.p_prime0, nf.hopf.phi1_prime, max_relative = 1e-6);
        assert_relative_eq!(nf.q_prime0, nf.hopf.phi2_prime, max_relative = 1e-6);

        assert_relative_eq!(nf.s1, 1.3029445646932306e-7, max_relative = 1e-6);
        assert_relative_eq!(nf.s2, -1.0640060820534422e-8, max_relative = 1e-6);
        assert_relative_eq!(nf.s3, 4.472160029693865e-6, max_relative = 1e-6);
        // supercritical: stable cycle existing past the critical value
        assert!(nf.s2 < 0.0);
        assert!(nf.s1 > 0.0);
    }

    #[test]
    fn transformed_hessians_match_finite_differences() {
        let p = oscillatory();
        let h = located();
        let nf = normal_form(&p, &h).unwrap();
        let mut q = p;
        q.beta = h.beta_sharp;
        let c = nf.transformation.c_matrix;
        let c_inv = nf.transformation.c_inverse;
        let x_star = h.equilibrium.point;
        // transformed field component i at normal-form coordinates z
        let field = |z: Vector3<f64>| -> Vector3<f64> { c_inv * rhs(&q, &(x_star + c * z)) };
        let step = 0.5;
        for i in 0..3 {
            let scale = (0..9)
                .map(|k| nf.hessians[i][(k / 3, k % 3)].abs())
                .fold(0.0, f64::max);
            for a in 0..3 {
                for b in 0..3 {
                    let mut ea = Vector3::zeros();
                    ea[a] = step;
                    let mut eb = Vector3::zeros();
                    eb[b] = step;
                    let fd = if a == b {
                        (field(ea)[i] - 2.0 * field(Vector3::zeros())[i] + field(-ea)[i])
                            / (step * step)
                    } else {
                        (field(ea + eb)[i] - field(ea - eb)[i] - field(-ea + eb)[i]
                            + field(-ea - eb)[i])
                            / (4.0 * step * step)
                    };
                    let diff = (fd - nf.hessians[i][(a, b)]).abs();
                    assert!(
                        diff < 1e-5 * scale,
                        "component {i} entry ({a},{b}): fd {fd} vs {}",
                        nf.hessians[i][(a, b)]
                    );
                }
            }
        }
    }

    #[test]
    fn orthogonality_diagnostics_match_frozen_values() {
        let p = oscillatory();
        let nf = normal_form(&p, &located()).unwrap();
        let o = orthogonality_check(&nf);
        assert_relative_eq!(o.residual_a, -0.00044362807245312564, max_relative = 1e-7);
        assert_relative_eq!(o.residual_b, -0.00027961530427534183, max_relative = 1e-7);
        assert_relative_eq!(o.re_u_dot_v, 0.5317072449162288, max_relative = 1e-8);
        assert_relative_eq!(o.im_u_dot_v, -0.07256598782337033, max_relative = 1e-8);
        // the center columns are genuinely far from orthogonal to the third
        assert!(o.re_u_dot_v.abs() > 0.1);
    }

    #[test]
    fn single_precision_location_smoke() {
        let mut p: ParameterSet<f32> = ParameterSet::default();
        p.gamma = 0.11;
        let h = hopf_locate(&p, "beta", 0.05_f32, 0.2)
            .unwrap()
            .expect("Hopf point exists in range");
        assert!((h.beta_sharp - 0.1437).abs() < 2e-3, "beta {}", h.beta_sharp);
        assert!((h.psi0 - 0.2459).abs() < 2e-3);
    }
}
