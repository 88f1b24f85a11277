//! Construction, validation, and decomposition of single- and two-mode
//! symplectic transformations.
//!
//! Quadrature ordering is (x_A, p_A, x_B, p_B). A real matrix S is symplectic
//! when S J St = J with J = [[0,1],[-1,0]] per mode pair; symplectic maps are
//! exactly the linear quadrature transformations that preserve the canonical
//! commutator [x, p] = i.

use nalgebra::{DMatrix, Matrix2, Matrix4, Vector2};
use std::f64::consts::PI;
use std::ops::Mul;

use crate::error::{ensure_finite, Error, Result};
use crate::tol;

/// J = [[0,1],[-1,0]], the single-mode commutation form.
pub fn j2() -> Matrix2<f64> {
    Matrix2::new(0.0, 1.0, -1.0, 0.0)
}

/// Omega = J (+) J, the two-mode commutation form.
pub fn omega4() -> Matrix4<f64> {
    Matrix4::new(
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, 0.0, -1.0, 0.0,
    )
}

/// sigma_3 = diag(1, -1). Not symplectic itself (det = -1); used to flip the
/// sign of the momentum row in the added-noise algebra.
pub fn sigma3() -> Matrix2<f64> {
    Matrix2::new(1.0, 0.0, 0.0, -1.0)
}

fn wrap_angle(a: f64) -> f64 {
    let mut x = a.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    x
}

pub(crate) fn symplectic_deviation2(m: &Matrix2<f64>) -> f64 {
    let d = m * j2() * m.transpose() - j2();
    d.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

pub(crate) fn symplectic_deviation4(m: &Matrix4<f64>) -> f64 {
    let d = m * omega4() * m.transpose() - omega4();
    d.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

/// True iff the 2x2 matrix satisfies the symplectic condition to `tol`.
pub fn is_symplectic2(m: &Matrix2<f64>, tol: f64) -> bool {
    symplectic_deviation2(m) <= tol
}

/// True iff the 4x4 matrix satisfies the symplectic condition to `tol`.
pub fn is_symplectic4(m: &Matrix4<f64>, tol: f64) -> bool {
    symplectic_deviation4(m) <= tol
}

/// Dimension-checked symplectic test for dynamically sized input.
///
/// Accepts 2x2 and 4x4 matrices; anything else is an error rather than a
/// `false`, so callers can distinguish "not symplectic" from "not a shape
/// this library models".
pub fn is_symplectic(m: &DMatrix<f64>, tol: f64) -> Result<bool> {
    match (m.nrows(), m.ncols()) {
        (2, 2) => Ok(is_symplectic2(&Matrix2::from_iterator(m.iter().copied()), tol)),
        (4, 4) => Ok(is_symplectic4(&Matrix4::from_iterator(m.iter().copied()), tol)),
        (r, c) => Err(Error::InvalidArgument(format!(
            "symplectic test needs a 2x2 or 4x4 matrix, got {r}x{c}"
        ))),
    }
}

/// A validated 2x2 symplectic matrix (det = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticMat2 {
    m: Matrix2<f64>,
}

impl SymplecticMat2 {
    pub fn try_new(m: Matrix2<f64>) -> Result<Self> {
        Self::try_new_with_tol(m, tol::SYMPLECTIC)
    }

    pub fn try_new_with_tol(m: Matrix2<f64>, tol: f64) -> Result<Self> {
        let deviation = symplectic_deviation2(&m);
        if deviation > tol {
            return Err(Error::NotSymplectic { deviation, tol });
        }
        Ok(Self { m })
    }

    pub fn identity() -> Self {
        Self { m: Matrix2::identity() }
    }

    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> Matrix2<f64> {
        self.m
    }

    /// Group inverse. For det = 1 this is the adjugate, so no division and no
    /// revalidation is needed.
    pub fn inverse(&self) -> Self {
        let m = &self.m;
        Self {
            m: Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]),
        }
    }

    /// Composition without revalidation; symplectic matrices are closed under
    /// multiplication, so only rounding noise accumulates.
    pub fn compose(&self, rhs: &Self) -> Self {
        Self { m: self.m * rhs.m }
    }
}

impl Mul for SymplecticMat2 {
    type Output = SymplecticMat2;
    fn mul(self, rhs: Self) -> Self {
        self.compose(&rhs)
    }
}

/// A validated 4x4 (two-mode) symplectic matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticMat4 {
    m: Matrix4<f64>,
}

impl SymplecticMat4 {
    pub fn try_new(m: Matrix4<f64>) -> Result<Self> {
        Self::try_new_with_tol(m, tol::SYMPLECTIC)
    }

    pub fn try_new_with_tol(m: Matrix4<f64>, tol: f64) -> Result<Self> {
        let deviation = symplectic_deviation4(&m);
        if deviation > tol {
            return Err(Error::NotSymplectic { deviation, tol });
        }
        Ok(Self { m })
    }

    pub fn identity() -> Self {
        Self { m: Matrix4::identity() }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    /// Block-diagonal embedding of two single-mode operations.
    pub fn direct_sum(a: &SymplecticMat2, b: &SymplecticMat2) -> Self {
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(a.matrix());
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(b.matrix());
        Self { m }
    }

    pub fn compose(&self, rhs: &Self) -> Self {
        Self { m: self.m * rhs.m }
    }
}

impl Mul for SymplecticMat4 {
    type Output = SymplecticMat4;
    fn mul(self, rhs: Self) -> Self {
        self.compose(&rhs)
    }
}

/// Single-mode squeezer S(r) = diag(e^r, e^-r).
pub fn make_squeezer(r: f64) -> Result<SymplecticMat2> {
    ensure_finite("squeezing parameter r", r)?;
    Ok(SymplecticMat2 {
        m: Matrix2::new(r.exp(), 0.0, 0.0, (-r).exp()),
    })
}

/// Single-mode phase shift P(u) = [[cos u, -sin u],[sin u, cos u]].
pub fn make_phase(u: f64) -> Result<SymplecticMat2> {
    ensure_finite("phase angle u", u)?;
    let (s, c) = u.sin_cos();
    Ok(SymplecticMat2 { m: Matrix2::new(c, -s, s, c) })
}

/// Entangling QND coupling with strength g: x_A -> x_A, p_A -> p_A + g p_B,
/// x_B -> x_B - g x_A, p_B -> p_B.
pub fn make_qnd(g: f64) -> Result<SymplecticMat4> {
    ensure_finite("interaction strength g", g)?;
    Ok(SymplecticMat4 {
        m: Matrix4::new(
            1.0, 0.0, 0.0, 0.0, //
            0.0, 1.0, 0.0, g, //
            -g, 0.0, 1.0, 0.0, //
            0.0, 0.0, 0.0, 1.0,
        ),
    })
}

/// Two-mode beam splitter with transmissivity T and reflectivity R,
/// T^2 + R^2 = 1, acting on the mode pair (A, in).
///
/// The second and third rows are the detected quadratures
/// p''_A = T p_A - R p_in and x'_in = R x_A + T x_in; the undetected rows are
/// completed as the standard orthogonal mixer, which keeps the matrix
/// symplectic. Only the detected rows enter the teleportation algebra, so any
/// sign choice on the other two rows is downstream-equivalent (tested).
pub fn make_beamsplitter(t: f64, r: f64) -> Result<SymplecticMat4> {
    ensure_finite("transmissivity T", t)?;
    ensure_finite("reflectivity R", r)?;
    if (t * t + r * r - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "beam splitter needs T^2 + R^2 = 1, got {}",
            t * t + r * r
        )));
    }
    if t <= 0.0 || t > 1.0 {
        return Err(Error::InvalidArgument(format!(
            "beam splitter transmissivity must satisfy 0 < T <= 1, got {t}"
        )));
    }
    Ok(SymplecticMat4 {
        m: Matrix4::new(
            t, 0.0, -r, 0.0, //
            0.0, t, 0.0, -r, //
            r, 0.0, t, 0.0, //
            0.0, r, 0.0, t,
        ),
    })
}

/// Random single-mode symplectic matrix P(alpha) S(r) P(beta) with
/// |r| < r_max, used by the randomized invariant suite.
pub(crate) fn random_symplectic2(rng: &mut impl rand::Rng, r_max: f64) -> SymplecticMat2 {
    let alpha: f64 = rng.random_range(-PI..PI);
    let r: f64 = rng.random_range(-r_max..r_max);
    let beta: f64 = rng.random_range(-PI..PI);
    make_phase(alpha)
        .expect("finite angle")
        .compose(&make_squeezer(r).expect("finite squeezing"))
        .compose(&make_phase(beta).expect("finite angle"))
}

/// Random two-mode symplectic matrix: local operations around a QND coupling.
/// The 13 sampled parameters overshoot the 10-dimensional group, so the draw
/// reaches generic group elements. Squeezing stays moderate so that products
/// keep a few orders of magnitude of headroom below the validation
/// tolerances.
pub(crate) fn random_symplectic4(rng: &mut impl rand::Rng) -> SymplecticMat4 {
    let l1 = SymplecticMat4::direct_sum(
        &random_symplectic2(rng, 0.8),
        &random_symplectic2(rng, 0.8),
    );
    let g: f64 = rng.random_range(-1.2..1.2);
    let l2 = SymplecticMat4::direct_sum(
        &random_symplectic2(rng, 0.8),
        &random_symplectic2(rng, 0.8),
    );
    l1.compose(&make_qnd(g).expect("finite strength")).compose(&l2)
}

/// Phase-squeezer-phase factors of a 2x2 symplectic matrix:
/// S = P(alpha) S(r) P(beta) with the canonical branch r >= 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochMessiahFactors {
    pub alpha: f64,
    pub r: f64,
    pub beta: f64,
}

impl BlochMessiahFactors {
    pub fn reconstruct(&self) -> SymplecticMat2 {
        let p_a = make_phase(self.alpha).expect("finite angle");
        let s = make_squeezer(self.r).expect("finite squeezing");
        let p_b = make_phase(self.beta).expect("finite angle");
        p_a.compose(&s).compose(&p_b)
    }
}

/// Rotation-signed SVD of a 2x2 matrix: M = P(theta_u) diag(d1, d2) P(-theta_v)
/// with both factors proper rotations, d1 >= |d2| and d1 >= 0. The sign that a
/// reflection would carry is folded into d2.
pub(crate) fn rot_svd2(m: &Matrix2<f64>) -> (f64, f64, f64, f64) {
    let g = m.transpose() * m;
    // eigen-angle of the symmetric Gram matrix; first column of P(theta_v)
    // is the eigenvector of the larger eigenvalue
    let theta_v = 0.5 * (2.0 * g[(0, 1)]).atan2(g[(0, 0)] - g[(1, 1)]);
    let (sv, cv) = theta_v.sin_cos();
    let v1 = Vector2::new(cv, sv);
    let v2 = Vector2::new(-sv, cv);
    let mv1 = m * v1;
    let d1 = mv1.norm();
    let u1 = if d1 > 1e-300 { mv1 / d1 } else { Vector2::new(1.0, 0.0) };
    let u2 = Vector2::new(-u1.y, u1.x);
    let d2 = u2.dot(&(m * v2));
    let theta_u = u1.y.atan2(u1.x);
    (theta_u, d1, d2, theta_v)
}

/// Decompose a symplectic matrix into phase, squeezer, phase.
///
/// Canonical branch: r >= 0 with the larger singular value on the x axis.
/// A pure rotation (r = 0) returns all of the angle in `alpha` and beta = 0,
/// so the identity maps to (0, 0, 0). Non-symplectic input is rejected when
/// the `SymplecticMat2` is constructed.
pub fn bloch_messiah_2x2(s: &SymplecticMat2) -> BlochMessiahFactors {
    let (theta_u, d1, _d2, theta_v) = rot_svd2(s.matrix());
    // det S = 1 forces d1 * d2 = 1 with both factors positive, so the
    // squeezing parameter comes from d1 alone.
    let r = d1.ln();
    BlochMessiahFactors {
        alpha: wrap_angle(theta_u),
        r: r.max(0.0),
        beta: wrap_angle(-theta_v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn squeezer_basics() {
        assert_eq!(make_squeezer(0.0).unwrap().matrix(), &Matrix2::identity());
        let s = make_squeezer(2.0f64.ln()).unwrap();
        assert_abs_diff_eq!(s.matrix()[(0, 0)], 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.matrix()[(1, 1)], 0.5, epsilon = 1e-15);
        let id = make_squeezer(0.7).unwrap().compose(&make_squeezer(-0.7).unwrap());
        assert!((id.matrix() - Matrix2::identity()).norm() < 1e-14);
        assert!(make_squeezer(f64::NAN).is_err());
    }

    #[test]
    fn phase_basics() {
        assert_eq!(make_phase(0.0).unwrap().matrix(), &Matrix2::identity());
        let q = make_phase(PI / 2.0).unwrap();
        assert_abs_diff_eq!(q.matrix()[(0, 1)], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.matrix()[(1, 0)], 1.0, epsilon = 1e-15);
        assert!(make_phase(f64::INFINITY).is_err());
    }

    #[test]
    fn qnd_matrix_shape() {
        assert_eq!(make_qnd(0.0).unwrap().matrix(), &Matrix4::identity());
        for g in [0.5, 1.0, 2.5] {
            let m = make_qnd(g).unwrap();
            assert!(is_symplectic4(m.matrix(), 1e-12));
            assert_eq!(m.matrix()[(2, 0)], -g);
            assert_eq!(m.matrix()[(1, 3)], g);
        }
    }

    #[test]
    fn beamsplitter_validation() {
        let id = make_beamsplitter(1.0, 0.0).unwrap();
        assert_eq!(id.matrix(), &Matrix4::identity());
        let b = make_beamsplitter(1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt()).unwrap();
        assert!(is_symplectic4(b.matrix(), 1e-12));
        // detected rows carry the stated signs
        assert_abs_diff_eq!(b.matrix()[(2, 0)], 1.0 / 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(b.matrix()[(1, 3)], -1.0 / 2f64.sqrt(), epsilon = 1e-15);
        let opt = make_beamsplitter(3.0 / 5.0, 4.0 / 5.0).unwrap();
        assert_abs_diff_eq!(opt.matrix()[(2, 0)] / opt.matrix()[(2, 2)], 4.0 / 3.0, epsilon = 1e-15);
        assert!(make_beamsplitter(0.9, 0.9).is_err());
        assert!(make_beamsplitter(0.0, 1.0).is_err());
        assert!(make_beamsplitter(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn symplectic_test_dispatch() {
        assert!(is_symplectic(&DMatrix::identity(4, 4), 1e-12).unwrap());
        let d = DMatrix::from_diagonal_element(2, 2, 2.0);
        assert!(!is_symplectic(&d, 1e-12).unwrap());
        let bad = DMatrix::identity(3, 3);
        assert!(matches!(is_symplectic(&bad, 1e-12), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn try_new_rejects_non_symplectic() {
        let err = SymplecticMat2::try_new(Matrix2::new(2.0, 0.0, 0.0, 2.0));
        assert!(matches!(err, Err(Error::NotSymplectic { .. })));
    }

    #[test]
    fn inverse_is_group_inverse() {
        let s = make_phase(0.3).unwrap().compose(&make_squeezer(1.1).unwrap());
        let id = s.compose(&s.inverse());
        assert!((id.matrix() - Matrix2::identity()).norm() < 1e-14);
    }

    #[test]
    fn bloch_messiah_canonical_cases() {
        let f = bloch_messiah_2x2(&SymplecticMat2::identity());
        assert_eq!((f.alpha, f.r, f.beta), (0.0, 0.0, 0.0));

        let f = bloch_messiah_2x2(&make_squeezer(2.0f64.ln()).unwrap());
        assert_abs_diff_eq!(f.r, 2.0f64.ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(f.alpha, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f.beta, 0.0, epsilon = 1e-14);

        // pure rotation keeps the whole angle in alpha
        let f = bloch_messiah_2x2(&make_phase(0.9).unwrap());
        assert_abs_diff_eq!(f.alpha, 0.9, epsilon = 1e-12);
        assert_abs_diff_eq!(f.r, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.beta, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn bloch_messiah_roundtrip_seeded() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);
        for _ in 0..500 {
            let a: f64 = rng.random_range(-PI..PI);
            let r: f64 = rng.random_range(-3.0..3.0);
            let b: f64 = rng.random_range(-PI..PI);
            let s = make_phase(a)
                .unwrap()
                .compose(&make_squeezer(r).unwrap())
                .compose(&make_phase(b).unwrap());
            let f = bloch_messiah_2x2(&s);
            assert!(f.r >= 0.0);
            let err = (f.reconstruct().matrix() - s.matrix()).norm();
            assert!(err < 1e-10, "roundtrip error {err}");
        }
    }

    proptest! {
        #[test]
        fn phase_group_property(u1 in -3.0f64..3.0, u2 in -3.0f64..3.0) {
            let lhs = make_phase(u1).unwrap().compose(&make_phase(u2).unwrap());
            let rhs = make_phase(u1 + u2).unwrap();
            prop_assert!((lhs.matrix() - rhs.matrix()).norm() < 1e-12);
        }

        #[test]
        fn constructors_are_symplectic(r in -3.0f64..3.0, u in -3.5f64..3.5, g in 0.0f64..5.0) {
            prop_assert!(is_symplectic2(make_squeezer(r).unwrap().matrix(), 1e-12));
            prop_assert!(is_symplectic2(make_phase(u).unwrap().matrix(), 1e-12));
            prop_assert!(is_symplectic4(make_qnd(g).unwrap().matrix(), 1e-12));
        }
    }
}
