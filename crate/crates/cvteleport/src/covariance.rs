//! Two-mode Gaussian covariance matrices: validation, propagation, purity,
//! and reduction of pure states to the two-mode squeezed standard form.
//!
//! Vacuum variance is 1/2, so the vacuum covariance matrix is I/2 and the
//! uncertainty relation reads V + (i/2) Omega >= 0.

use nalgebra::{Matrix2, Matrix4, SMatrix};

use crate::error::{Error, Result};
use crate::symplectic::{make_phase, omega4, rot_svd2, SymplecticMat2, SymplecticMat4};
use crate::tol;

/// Closed-form principal square root of a symmetric positive definite 2x2
/// matrix: W^(1/2) = (W + sqrt(det W) I) / sqrt(tr W + 2 sqrt(det W)).
fn sqrtm2_spd(w: &Matrix2<f64>) -> Matrix2<f64> {
    let s = w.determinant().max(0.0).sqrt();
    let t = (w.trace() + 2.0 * s).sqrt();
    (w + Matrix2::from_diagonal_element(s)) / t
}

fn inv2(m: &Matrix2<f64>) -> Matrix2<f64> {
    let det = m.determinant();
    Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]) / det
}

fn max_abs4(m: &Matrix4<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

/// A validated covariance matrix of a two-mode Gaussian state.
///
/// Validation checks symmetry and the uncertainty relation
/// V + (i/2) Omega >= 0; the latter is evaluated through the real symmetric
/// embedding [[V, -Omega/2],[Omega/2, V]], whose spectrum consists of the
/// Hermitian eigenvalues doubled up.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix2Mode {
    m: Matrix4<f64>,
}

impl CovarianceMatrix2Mode {
    pub fn try_new(m: Matrix4<f64>) -> Result<Self> {
        let asym = max_abs4(&(m - m.transpose()));
        if asym > 1e-12 {
            return Err(Error::InvalidState(format!(
                "covariance matrix must be symmetric (max asymmetry {asym:.3e})"
            )));
        }
        if !m.iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidState(
                "covariance matrix has non-finite entries".into(),
            ));
        }
        let half_omega = omega4() * 0.5;
        let mut h = SMatrix::<f64, 8, 8>::zeros();
        h.fixed_view_mut::<4, 4>(0, 0).copy_from(&m);
        h.fixed_view_mut::<4, 4>(4, 4).copy_from(&m);
        h.fixed_view_mut::<4, 4>(0, 4).copy_from(&(-half_omega));
        h.fixed_view_mut::<4, 4>(4, 0).copy_from(&half_omega);
        let min_eig = h
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |acc, &x| acc.min(x));
        if min_eig < -tol::UNCERTAINTY {
            return Err(Error::InvalidState(format!(
                "uncertainty relation violated (min eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(Self { m })
    }

    /// Covariance matrix of two vacuum modes, (1/2) I.
    pub fn vacuum() -> Self {
        Self { m: Matrix4::identity() * 0.5 }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    /// Reduced covariance block of mode A.
    pub fn block_a(&self) -> Matrix2<f64> {
        self.m.fixed_view::<2, 2>(0, 0).into_owned()
    }

    /// Reduced covariance block of mode B.
    pub fn block_b(&self) -> Matrix2<f64> {
        self.m.fixed_view::<2, 2>(2, 2).into_owned()
    }

    /// Cross-correlation block (rows of A against columns of B).
    pub fn block_c(&self) -> Matrix2<f64> {
        self.m.fixed_view::<2, 2>(0, 2).into_owned()
    }

    /// Local symplectic invariant sqrt(det A).
    pub fn a(&self) -> f64 {
        self.block_a().determinant().max(0.0).sqrt()
    }

    /// Local symplectic invariant sqrt(|det C|).
    pub fn c(&self) -> f64 {
        self.block_c().determinant().abs().sqrt()
    }

    /// Heisenberg evolution V -> M V Mt under a symplectic transformation.
    pub fn propagate(&self, s: &SymplecticMat4) -> Self {
        let raw = s.matrix() * self.m * s.matrix().transpose();
        Self { m: (raw + raw.transpose()) * 0.5 }
    }

    /// True when the global state is pure, det V = 1/16 within `tol`.
    pub fn is_pure(&self, tol: f64) -> bool {
        (self.m.determinant() - 1.0 / 16.0).abs() <= tol
    }
}

/// Purity of a single-mode Gaussian state with covariance block `v_reduced`:
/// P = 1 / (2 sqrt(det V)).
///
/// Determinants inside the clamp band just below 1/4 are rounded up so that
/// propagated pure states cannot drift above purity one.
pub fn purity(v_reduced: &Matrix2<f64>) -> Result<f64> {
    let asym = (v_reduced[(0, 1)] - v_reduced[(1, 0)]).abs();
    if asym > 1e-12 {
        return Err(Error::InvalidState(format!(
            "reduced covariance block must be symmetric (asymmetry {asym:.3e})"
        )));
    }
    let det = v_reduced.determinant();
    if det < 0.25 - tol::PURITY_CLAMP {
        return Err(Error::InvalidState(format!(
            "reduced covariance block has det {det:.6e} < 1/4; not a physical state"
        )));
    }
    Ok(1.0 / (2.0 * det.max(0.25).sqrt()))
}

/// Result of reducing a pure two-mode state to two-mode squeezed form.
///
/// `local_ops` are the single-mode symplectics (m_A, m_B) with
/// (m_A (+) m_B) V (m_A (+) m_B)t = `v_tms`, where `v_tms` has diagonal
/// blocks a I and off-diagonal block diag(-c, c); kappa >= 0 is the squeezing
/// parameter, a = cosh(2 kappa)/2 and c = sinh(2 kappa)/2.
#[derive(Debug, Clone, Copy)]
pub struct StandardFormResult {
    pub local_ops: (SymplecticMat2, SymplecticMat2),
    pub v_tms: CovarianceMatrix2Mode,
    pub a: f64,
    pub c: f64,
    pub kappa: f64,
}

/// Reduce a pure two-mode covariance matrix to its squeezed standard form by
/// local symplectic operations.
///
/// The reduction first whitens each reduced block with the inverse matrix
/// square root of A / sqrt(det A), then diagonalizes the cross block with
/// local rotations, and finally fixes signs so the cross block lands on the
/// diag(-c, c) pattern with c >= 0. Product states come out with c = 0 and
/// kappa = 0. Mixed input (det V above 1/16 beyond tolerance) is rejected.
pub fn two_mode_standard_form(v: &CovarianceMatrix2Mode) -> Result<StandardFormResult> {
    let det = v.matrix().determinant();
    if det > 1.0 / 16.0 + tol::STANDARD_FORM_PURITY {
        return Err(Error::UnsupportedState(format!(
            "mixed state (det V = {det:.6e} > 1/16); only pure states reduce to two-mode squeezed form"
        )));
    }
    if det < 1.0 / 16.0 - tol::STANDARD_FORM_PURITY {
        return Err(Error::InvalidState(format!(
            "det V = {det:.6e} < 1/16; not a physical two-mode state"
        )));
    }

    let a0 = v.a();
    let b0 = v.block_b().determinant().max(0.0).sqrt();
    if (a0 - b0).abs() > tol::STANDARD_FORM_PURITY {
        return Err(Error::UnsupportedState(format!(
            "reduced-block invariants differ (sqrt det A = {a0:.6e}, sqrt det B = {b0:.6e}); state is not pure"
        )));
    }

    // whiten: (A / a0)^(-1/2) is symplectic because det(A / a0) = 1
    let m_a0 = inv2(&sqrtm2_spd(&(v.block_a() / a0)));
    let m_b0 = inv2(&sqrtm2_spd(&(v.block_b() / b0)));

    // local rotations diagonalize the cross block
    let c_tilde = m_a0 * v.block_c() * m_b0.transpose();
    let (theta_u, d1, d2, theta_v) = rot_svd2(&c_tilde);

    // land on the diag(-c, c) pattern: a pure state's diagonalized cross
    // block is diag(d1, -d1) up to ordering, so a half-turn on mode A flips
    // both signs when needed
    let flip = d1 > 0.0 && d2 <= 0.0;
    let rot_a = make_phase(if flip { std::f64::consts::PI - theta_u } else { -theta_u })
        .expect("finite angle");
    let rot_b = make_phase(-theta_v).expect("finite angle");

    let m_a = SymplecticMat2::try_new_with_tol(rot_a.matrix() * m_a0, 1e-10)?;
    let m_b = SymplecticMat2::try_new_with_tol(rot_b.matrix() * m_b0, 1e-10)?;

    let v_tms = v.propagate(&SymplecticMat4::direct_sum(&m_a, &m_b));
    let a = v_tms.a();
    let c = v_tms.c();

    let c_block = v_tms.block_c();
    let pattern_err = [
        c_block[(0, 0)] + c,
        c_block[(1, 1)] - c,
        c_block[(0, 1)],
        c_block[(1, 0)],
    ]
    .iter()
    .fold(0.0f64, |acc, x| acc.max(x.abs()));
    if pattern_err > tol::STANDARD_FORM_PATTERN {
        return Err(Error::UnsupportedState(format!(
            "reduction did not reach the two-mode squeezed pattern (residual {pattern_err:.3e})"
        )));
    }

    let kappa = 0.5 * (2.0 * a).max(1.0).acosh();
    Ok(StandardFormResult { local_ops: (m_a, m_b), v_tms, a, c, kappa })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{make_qnd, make_squeezer};
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand::SeedableRng;

    fn qnd_state(g: f64) -> CovarianceMatrix2Mode {
        CovarianceMatrix2Mode::vacuum().propagate(&make_qnd(g).unwrap())
    }

    #[test]
    fn try_new_validation() {
        assert!(CovarianceMatrix2Mode::try_new(Matrix4::identity() * 0.5).is_ok());
        let mut asym = Matrix4::identity() * 0.5;
        asym[(0, 1)] = 1e-3;
        assert!(matches!(
            CovarianceMatrix2Mode::try_new(asym),
            Err(Error::InvalidState(_))
        ));
        // variance below vacuum in both quadratures violates uncertainty
        let squeezed_too_far = Matrix4::identity() * 0.1;
        assert!(matches!(
            CovarianceMatrix2Mode::try_new(squeezed_too_far),
            Err(Error::InvalidState(_))
        ));
    }

    #[test]
    fn qnd_state_blocks() {
        let v = qnd_state(1.0);
        assert_abs_diff_eq!(v.block_a(), Matrix2::new(0.5, 0.0, 0.0, 1.0), epsilon = 1e-15);
        assert_abs_diff_eq!(v.block_b(), Matrix2::new(1.0, 0.0, 0.0, 0.5), epsilon = 1e-15);
        assert_abs_diff_eq!(v.block_c(), Matrix2::new(-0.5, 0.0, 0.0, 0.5), epsilon = 1e-15);
        assert!(v.is_pure(1e-12));
    }

    #[test]
    fn purity_values() {
        assert_abs_diff_eq!(purity(&(Matrix2::identity() * 0.5)).unwrap(), 1.0, epsilon = 1e-15);
        let mode_a = qnd_state(1.0).block_a();
        assert_abs_diff_eq!(purity(&mode_a).unwrap(), 1.0 / 2f64.sqrt(), epsilon = 1e-12);
        let mut last = 1.0;
        for g in [0.3, 0.7, 1.2, 2.5, 4.0] {
            let p = purity(&qnd_state(g).block_a()).unwrap();
            assert_abs_diff_eq!(p, 1.0 / (1.0 + g * g).sqrt(), epsilon = 1e-12);
            assert!(p < last);
            last = p;
        }
        assert!(purity(&(Matrix2::identity() * 0.4)).is_err());
        // clamp band: a hair under 1/4 still reports purity 1
        let eps_under = Matrix2::new(0.5, 0.0, 0.0, 0.5 - 1e-13);
        assert_abs_diff_eq!(purity(&eps_under).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn standard_form_vacuum() {
        let r = two_mode_standard_form(&CovarianceMatrix2Mode::vacuum()).unwrap();
        assert_abs_diff_eq!(r.a, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(r.c, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.kappa, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn standard_form_qnd_family() {
        for g in [0.1, 0.5, 1.0, 2.5, 5.0] {
            let r = two_mode_standard_form(&qnd_state(g)).unwrap();
            let expected = (1.0 + g * g).sqrt() - g;
            assert_abs_diff_eq!((-2.0 * r.kappa).exp(), expected, epsilon = 1e-10);
            assert_abs_diff_eq!(r.a * r.a - r.c * r.c, 0.25, epsilon = 1e-10);
            assert_abs_diff_eq!(r.a, (2.0 * r.kappa).cosh() / 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(r.c, (2.0 * r.kappa).sinh() / 2.0, epsilon = 1e-12);
        }
        let r = two_mode_standard_form(&qnd_state(1.0)).unwrap();
        assert_abs_diff_eq!(r.a, 1.0 / 2f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(r.kappa, 0.4406867935097715, epsilon = 1e-12);
    }

    #[test]
    fn standard_form_local_invariance() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        let base = qnd_state(2.5);
        let reference = two_mode_standard_form(&base).unwrap();
        for _ in 0..50 {
            let scramble = |rng: &mut rand_chacha::ChaCha12Rng| {
                let a: f64 = rng.random_range(-3.0..3.0);
                let r: f64 = rng.random_range(-1.5..1.5);
                let b: f64 = rng.random_range(-3.0..3.0);
                make_phase(a)
                    .unwrap()
                    .compose(&make_squeezer(r).unwrap())
                    .compose(&make_phase(b).unwrap())
            };
            let l_a = scramble(&mut rng);
            let l_b = scramble(&mut rng);
            let scrambled = base.propagate(&SymplecticMat4::direct_sum(&l_a, &l_b));
            let r = two_mode_standard_form(&scrambled).unwrap();
            assert_abs_diff_eq!(r.a, reference.a, epsilon = 1e-9);
            assert_abs_diff_eq!(r.c, reference.c, epsilon = 1e-9);
            assert_abs_diff_eq!(r.kappa, reference.kappa, epsilon = 1e-9);
            // the returned operations really do produce the reported matrix
            let rebuilt = scrambled.propagate(&SymplecticMat4::direct_sum(&r.local_ops.0, &r.local_ops.1));
            assert!((rebuilt.matrix() - r.v_tms.matrix()).norm() < 1e-10);
        }
    }

    #[test]
    fn standard_form_rejects_mixed() {
        let mixed = CovarianceMatrix2Mode::try_new(Matrix4::identity()).unwrap();
        assert!(matches!(
            two_mode_standard_form(&mixed),
            Err(Error::UnsupportedState(_))
        ));
    }
}
