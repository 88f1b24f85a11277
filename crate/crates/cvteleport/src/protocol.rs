//! One full teleportation run in the Heisenberg picture.
//!
//! The sender holds mode A of an entangled pair produced by a QND coupling of
//! strength `g` on two vacua; mode B travels to the receiver. Optional local
//! symplectic operations s_a and s_b act on the two modes, the input mode is
//! mixed with mode A by a Bell-stage interaction, both Bell outputs are
//! measured, and the receiver displaces mode B with gains applied to the
//! measured values. Everything downstream is linear, so the run is fully
//! described by the added-noise covariance 2N, the output covariance, and the
//! matrix multiplying the input first moments.

use nalgebra::{Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

use crate::covariance::CovarianceMatrix2Mode;
use crate::error::{ensure_finite, Error, Result};
use crate::symplectic::{make_beamsplitter, sigma3, SymplecticMat2, SymplecticMat4};
use crate::tol;

/// Covariance matrix of the entangled pair made by a QND coupling of
/// strength `g` acting on two vacuum modes.
pub fn shared_state_qnd(g: f64) -> Result<CovarianceMatrix2Mode> {
    ensure_finite("interaction strength g", g)?;
    if g < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "entangling strength must be >= 0, got {g}"
        )));
    }
    Ok(CovarianceMatrix2Mode::vacuum().propagate(&crate::symplectic::make_qnd(g)?))
}

/// Bell-stage QND coupling on the mode pair (A, in): the detected quadratures
/// are x'_in = x_in + g' x_A and p'_A = p_A - g' p_in.
fn bell_qnd_matrix(g_prime: f64) -> SymplecticMat4 {
    SymplecticMat4::try_new(Matrix4::new(
        1.0, 0.0, 0.0, 0.0, //
        0.0, 1.0, 0.0, -g_prime, //
        g_prime, 0.0, 1.0, 0.0, //
        0.0, 0.0, 0.0, 1.0,
    ))
    .expect("QND coupling is symplectic by construction")
}

/// The interaction mixing mode A with the input mode before the two homodyne
/// detections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BellInteraction {
    /// QND coupling of strength g' > 0.
    Qnd { g_prime: f64 },
    /// Unbalanced beam splitter, T^2 + R^2 = 1 with 0 < T < 1.
    BeamSplitter { t: f64, r: f64 },
    /// Any symplectic interaction whose Y block is regular.
    Generic { r_matrix: SymplecticMat4 },
}

impl BellInteraction {
    pub fn validate(&self) -> Result<()> {
        match *self {
            BellInteraction::Qnd { g_prime } => {
                ensure_finite("Bell interaction strength g'", g_prime)?;
                if g_prime <= 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "Bell-stage QND strength must be > 0, got {g_prime}"
                    )));
                }
            }
            BellInteraction::BeamSplitter { t, r } => {
                make_beamsplitter(t, r)?;
                if t >= 1.0 {
                    return Err(Error::InvalidArgument(
                        "beam splitter with T = 1 does not couple the modes; need 0 < T < 1".into(),
                    ));
                }
            }
            BellInteraction::Generic { ref r_matrix } => {
                extract_yz(r_matrix)?;
            }
        }
        Ok(())
    }

    pub fn to_matrix(&self) -> Result<SymplecticMat4> {
        self.validate()?;
        Ok(match *self {
            BellInteraction::Qnd { g_prime } => bell_qnd_matrix(g_prime),
            BellInteraction::BeamSplitter { t, r } => make_beamsplitter(t, r)?,
            BellInteraction::Generic { r_matrix } => r_matrix,
        })
    }
}

/// How the two measured values are scaled before displacing mode B.
///
/// `Unity` uses the full gain matrix Y^-1, which makes the output first
/// moments equal the input ones. `Scalar` and `MatrixGain` specify the
/// normalized gains, i.e. the matrix the input first moments are multiplied
/// by; the Y^-1 normalization stays underneath.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainPolicy {
    Unity,
    Scalar { g_x: f64, g_p: f64 },
    MatrixGain { g: Matrix2<f64> },
}

impl GainPolicy {
    fn validate(&self) -> Result<()> {
        match *self {
            GainPolicy::Unity => Ok(()),
            GainPolicy::Scalar { g_x, g_p } => {
                ensure_finite("gain G_x", g_x)?;
                ensure_finite("gain G_p", g_p)
            }
            GainPolicy::MatrixGain { ref g } => {
                if g.iter().all(|x| x.is_finite()) {
                    Ok(())
                } else {
                    Err(Error::InvalidArgument("gain matrix has non-finite entries".into()))
                }
            }
        }
    }

    /// The matrix multiplying the input first moments.
    pub fn normalized_matrix(&self) -> Matrix2<f64> {
        match *self {
            GainPolicy::Unity => Matrix2::identity(),
            GainPolicy::Scalar { g_x, g_p } => Matrix2::new(g_x, 0.0, 0.0, g_p),
            GainPolicy::MatrixGain { g } => g,
        }
    }
}

/// Full description of one teleportation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    /// Entangling QND strength, >= 0 (0 means no shared entanglement).
    pub g: f64,
    pub bell: BellInteraction,
    /// Local operation on mode A before the Bell stage.
    pub s_a: SymplecticMat2,
    /// Local operation on mode B before displacement.
    pub s_b: SymplecticMat2,
    pub gains: GainPolicy,
}

impl ProtocolConfig {
    /// QND entanglement and QND Bell stage with no local operations and
    /// unity gains.
    pub fn qnd(g: f64, g_prime: f64) -> Self {
        Self {
            g,
            bell: BellInteraction::Qnd { g_prime },
            s_a: SymplecticMat2::identity(),
            s_b: SymplecticMat2::identity(),
            gains: GainPolicy::Unity,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("entangling strength g", self.g)?;
        if self.g < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "entangling strength must be >= 0, got {}",
                self.g
            )));
        }
        self.bell.validate()?;
        self.gains.validate()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ConfigRepr::from(self)).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: ConfigRepr = serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("config parse error: {e}")))?;
        repr.try_into()
    }
}

fn mat2_to_rows(m: &Matrix2<f64>) -> [[f64; 2]; 2] {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

fn rows_to_mat2(rows: &[[f64; 2]; 2]) -> Matrix2<f64> {
    Matrix2::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
}

fn mat4_to_rows(m: &Matrix4<f64>) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = m[(i, j)];
        }
    }
    out
}

fn rows_to_mat4(rows: &[[f64; 4]; 4]) -> Matrix4<f64> {
    Matrix4::from_fn(|i, j| rows[i][j])
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum BellRepr {
    Qnd { g_prime: f64 },
    BeamSplitter { t: f64, r: f64 },
    Generic { r_matrix: [[f64; 4]; 4] },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum GainsRepr {
    Unity,
    Scalar { g_x: f64, g_p: f64 },
    MatrixGain { g: [[f64; 2]; 2] },
}

/// JSON shape of a protocol configuration; matrices are row-major arrays.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigRepr {
    g: f64,
    bell: BellRepr,
    s_a: [[f64; 2]; 2],
    s_b: [[f64; 2]; 2],
    gains: GainsRepr,
}

impl From<&ProtocolConfig> for ConfigRepr {
    fn from(c: &ProtocolConfig) -> Self {
        ConfigRepr {
            g: c.g,
            bell: match c.bell {
                BellInteraction::Qnd { g_prime } => BellRepr::Qnd { g_prime },
                BellInteraction::BeamSplitter { t, r } => BellRepr::BeamSplitter { t, r },
                BellInteraction::Generic { ref r_matrix } => BellRepr::Generic {
                    r_matrix: mat4_to_rows(r_matrix.matrix()),
                },
            },
            s_a: mat2_to_rows(c.s_a.matrix()),
            s_b: mat2_to_rows(c.s_b.matrix()),
            gains: match c.gains {
                GainPolicy::Unity => GainsRepr::Unity,
                GainPolicy::Scalar { g_x, g_p } => GainsRepr::Scalar { g_x, g_p },
                GainPolicy::MatrixGain { ref g } => GainsRepr::MatrixGain { g: mat2_to_rows(g) },
            },
        }
    }
}

impl TryFrom<ConfigRepr> for ProtocolConfig {
    type Error = Error;
    fn try_from(r: ConfigRepr) -> Result<Self> {
        let config = ProtocolConfig {
            g: r.g,
            bell: match r.bell {
                BellRepr::Qnd { g_prime } => BellInteraction::Qnd { g_prime },
                BellRepr::BeamSplitter { t, r } => BellInteraction::BeamSplitter { t, r },
                BellRepr::Generic { r_matrix } => BellInteraction::Generic {
                    r_matrix: SymplecticMat4::try_new_with_tol(rows_to_mat4(&r_matrix), 1e-10)?,
                },
            },
            s_a: SymplecticMat2::try_new_with_tol(rows_to_mat2(&r.s_a), 1e-10)?,
            s_b: SymplecticMat2::try_new_with_tol(rows_to_mat2(&r.s_b), 1e-10)?,
            gains: match r.gains {
                GainsRepr::Unity => GainPolicy::Unity,
                GainsRepr::Scalar { g_x, g_p } => GainPolicy::Scalar { g_x, g_p },
                GainsRepr::MatrixGain { g } => GainPolicy::MatrixGain { g: rows_to_mat2(&g) },
            },
        };
        config.validate()?;
        Ok(config)
    }
}

/// The added-noise covariance 2N of a run: diagonal entries are the added
/// variances in x and p (vacuum-variance units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AddedNoiseMatrix {
    m: Matrix2<f64>,
}

impl AddedNoiseMatrix {
    pub fn try_new(m: Matrix2<f64>) -> Result<Self> {
        let asym = (m[(0, 1)] - m[(1, 0)]).abs();
        if asym > 1e-10 {
            return Err(Error::InvalidState(format!(
                "added-noise matrix must be symmetric (asymmetry {asym:.3e})"
            )));
        }
        let sym = (m + m.transpose()) * 0.5;
        let tr = sym.trace();
        let disc = (tr * tr - 4.0 * sym.determinant()).max(0.0).sqrt();
        let min_eig = 0.5 * (tr - disc);
        if min_eig < -1e-10 {
            return Err(Error::InvalidState(format!(
                "added-noise matrix must be positive semidefinite (min eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(Self { m: sym })
    }

    /// The full 2N matrix.
    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.m
    }

    /// Added variance of the x quadrature.
    pub fn var_x(&self) -> f64 {
        self.m[(0, 0)]
    }

    /// Added variance of the p quadrature.
    pub fn var_p(&self) -> f64 {
        self.m[(1, 1)]
    }
}

/// Detected-rows decomposition of a Bell interaction: the measured pair
/// (x'_in, p'_A) equals Y xi_in + Z xi_A in terms of the pre-interaction
/// quadratures. Y must be regular for the gains to be normalizable.
pub fn extract_yz(r: &SymplecticMat4) -> Result<(Matrix2<f64>, Matrix2<f64>)> {
    let m = r.matrix();
    let y = Matrix2::new(m[(2, 2)], m[(2, 3)], m[(1, 2)], m[(1, 3)]);
    let z = Matrix2::new(m[(2, 0)], m[(2, 1)], m[(1, 0)], m[(1, 1)]);
    let det = y.determinant();
    if det.abs() <= tol::Y_REGULARITY * y.norm_squared() {
        return Err(Error::YSingular { det });
    }
    Ok((y, z))
}

fn inv2(m: &Matrix2<f64>) -> Result<Matrix2<f64>> {
    let det = m.determinant();
    if det.abs() <= tol::Y_REGULARITY * m.norm_squared() {
        return Err(Error::YSingular { det });
    }
    Ok(Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]) / det)
}

/// The unnormalized gain matrix applied to the measured pair: G_norm Y^-1,
/// where G_norm is the normalized gain matrix of the policy (identity under
/// `Unity`).
pub fn gain_matrix(y: &Matrix2<f64>, policy: &GainPolicy) -> Result<Matrix2<f64>> {
    policy.validate()?;
    Ok(policy.normalized_matrix() * inv2(y)?)
}

/// Conditioning gate for the randomized invariant suite: true when Y is
/// regular with enough margin that forming Y^-1 Z keeps rounding noise a few
/// orders of magnitude below the validation tolerances. Near-singular Y makes
/// the gain normalization itself ill-posed, so such draws are resampled
/// rather than tested.
pub(crate) fn clearly_regular_yz(y: &Matrix2<f64>, z: &Matrix2<f64>) -> bool {
    let d = y.determinant().abs();
    d >= 0.05 * y.norm_squared() && z.norm_squared() <= 200.0 * d
}

/// Sigma = sigma_3 Y^-1 Z, the symplectic matrix that the measurement algebra
/// attaches to mode A. Compensating it (s_a = Sigma^-1) turns the added noise
/// into plain EPR-sum form.
pub fn sigma_matrix(y: &Matrix2<f64>, z: &Matrix2<f64>) -> Result<SymplecticMat2> {
    let sigma = sigma3() * inv2(y)? * z;
    SymplecticMat2::try_new_with_tol(sigma, tol::SIGMA_SYMPLECTIC)
}

/// Added variances for the all-QND scheme with diagonal gains, straight from
/// the closed forms varX = [(G_x g' - g)^2 + 1]/2 and
/// varP = [(G_p/g')^2 + (1 - G_p g/g')^2]/2.
pub fn added_noise_qnd_scalar(g: f64, g_prime: f64, g_x: f64, g_p: f64) -> Result<(f64, f64)> {
    ensure_finite("entangling strength g", g)?;
    ensure_finite("Bell interaction strength g'", g_prime)?;
    ensure_finite("gain G_x", g_x)?;
    ensure_finite("gain G_p", g_p)?;
    if g < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "entangling strength must be >= 0, got {g}"
        )));
    }
    if g_prime <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "Bell-stage QND strength must be > 0, got {g_prime}"
        )));
    }
    let dx = g_x * g_prime - g;
    let var_x = (dx * dx + 1.0) / 2.0;
    let rp = g_p / g_prime;
    let dp = 1.0 - g_p * g / g_prime;
    let var_p = (rp * rp + dp * dp) / 2.0;
    Ok((var_x, var_p))
}

/// Everything one run produces at the covariance level.
#[derive(Debug, Clone, Copy)]
pub struct ProtocolOutput {
    pub added_noise: AddedNoiseMatrix,
    /// Output covariance, first_moment_map V_in first_moment_mapt + 2N.
    pub v_out: Matrix2<f64>,
    /// Matrix multiplying the input first moments; identity under unity
    /// gains, the normalized gain matrix otherwise.
    pub first_moment_map: Matrix2<f64>,
}

fn validate_single_mode_cov(v: &Matrix2<f64>) -> Result<()> {
    if !v.iter().all(|x| x.is_finite()) {
        return Err(Error::InvalidState("input covariance has non-finite entries".into()));
    }
    let asym = (v[(0, 1)] - v[(1, 0)]).abs();
    if asym > 1e-12 {
        return Err(Error::InvalidState(format!(
            "input covariance must be symmetric (asymmetry {asym:.3e})"
        )));
    }
    if v.determinant() < 0.25 - tol::PURITY_CLAMP || v[(0, 0)] <= 0.0 {
        return Err(Error::InvalidState(format!(
            "input covariance violates the uncertainty relation (det = {:.6e})",
            v.determinant()
        )));
    }
    Ok(())
}

/// Evaluate one teleportation run.
///
/// The output quadratures are xi_out = G_norm xi_in + n with noise
/// n = G Z s_a xi_A + s_b xi_B, where G is the unnormalized gain matrix and
/// (xi_A, xi_B) is the shared entangled pair. The added-noise covariance is
/// the quadratic form of that vector over the shared-state blocks.
pub fn run_protocol(config: &ProtocolConfig, v_in: &Matrix2<f64>) -> Result<ProtocolOutput> {
    config.validate()?;
    validate_single_mode_cov(v_in)?;

    let shared = shared_state_qnd(config.g)?;
    let r = config.bell.to_matrix()?;
    let (y, z) = extract_yz(&r)?;
    let gain = gain_matrix(&y, &config.gains)?;

    let f_a = gain * z * config.s_a.matrix();
    let s_b = config.s_b.matrix();
    let cross = f_a * shared.block_c() * s_b.transpose();
    let two_n = f_a * shared.block_a() * f_a.transpose()
        + s_b * shared.block_b() * s_b.transpose()
        + cross
        + cross.transpose();
    let added_noise = AddedNoiseMatrix::try_new(two_n)?;

    let first_moment_map = config.gains.normalized_matrix();
    let v_out_raw = first_moment_map * v_in * first_moment_map.transpose() + added_noise.m;
    let v_out = (v_out_raw + v_out_raw.transpose()) * 0.5;

    Ok(ProtocolOutput { added_noise, v_out, first_moment_map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{make_phase, make_squeezer, random_symplectic4};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;

    fn vacuum_in() -> Matrix2<f64> {
        Matrix2::identity() * 0.5
    }

    #[test]
    fn shared_state_values() {
        let v0 = shared_state_qnd(0.0).unwrap();
        assert_eq!(v0.matrix(), &(Matrix4::identity() * 0.5));
        assert!(shared_state_qnd(-0.1).is_err());

        for g in [0.3, 1.0, 2.5] {
            let v = shared_state_qnd(g).unwrap();
            let m = v.matrix();
            // EPR-type combinations (x_A + x_B) and (p_A - p_B)
            let sum_x = m[(0, 0)] + m[(2, 2)] + 2.0 * m[(0, 2)];
            let dif_p = m[(1, 1)] + m[(3, 3)] - 2.0 * m[(1, 3)];
            let expected = ((g - 1.0) * (g - 1.0) + 1.0) / 2.0;
            assert_abs_diff_eq!(sum_x, expected, epsilon = 1e-14);
            assert_abs_diff_eq!(dif_p, expected, epsilon = 1e-14);
        }
        // the EPR variance is smallest at g = 1
        let at = |g: f64| {
            let m = *shared_state_qnd(g).unwrap().matrix();
            m[(0, 0)] + m[(2, 2)] + 2.0 * m[(0, 2)]
        };
        assert!(at(1.0) < at(0.9));
        assert!(at(1.0) < at(1.1));
    }

    #[test]
    fn yz_extraction() {
        let (y, z) = extract_yz(&bell_qnd_matrix(1.5)).unwrap();
        assert_eq!(y, Matrix2::new(1.0, 0.0, 0.0, -1.5));
        assert_eq!(z, Matrix2::new(1.5, 0.0, 0.0, 1.0));

        assert!(matches!(
            extract_yz(&SymplecticMat4::identity()),
            Err(Error::YSingular { .. })
        ));

        let s = 1.0 / 2f64.sqrt();
        let (y, _) = extract_yz(&make_beamsplitter(s, s).unwrap()).unwrap();
        assert_abs_diff_eq!(y, Matrix2::new(s, 0.0, 0.0, -s), epsilon = 1e-15);
    }

    #[test]
    fn gain_and_sigma_matrices() {
        let (y, z) = extract_yz(&bell_qnd_matrix(2.0)).unwrap();
        let g_unity = gain_matrix(&y, &GainPolicy::Unity).unwrap();
        assert_abs_diff_eq!(g_unity, Matrix2::new(1.0, 0.0, 0.0, -0.5), epsilon = 1e-15);
        assert_abs_diff_eq!(g_unity * y, Matrix2::identity(), epsilon = 1e-12);

        let sigma = sigma_matrix(&y, &z).unwrap();
        assert_abs_diff_eq!(*sigma.matrix(), Matrix2::new(2.0, 0.0, 0.0, 0.5), epsilon = 1e-15);

        let s = 1.0 / 2f64.sqrt();
        let bs = make_beamsplitter(s, s).unwrap();
        let (y, z) = extract_yz(&bs).unwrap();
        let sigma = sigma_matrix(&y, &z).unwrap();
        assert_abs_diff_eq!(*sigma.matrix(), Matrix2::identity(), epsilon = 1e-12);
    }

    #[test]
    fn sigma_symplectic_for_random_interactions() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(3);
        let mut accepted = 0;
        while accepted < 200 {
            let r = random_symplectic4(&mut rng);
            let Ok((y, z)) = extract_yz(&r) else { continue };
            if !clearly_regular_yz(&y, &z) {
                continue;
            }
            sigma_matrix(&y, &z).expect("sigma must be symplectic");
            accepted += 1;
        }
    }

    #[test]
    fn scalar_noise_values() {
        assert_eq!(added_noise_qnd_scalar(1.0, 1.0, 1.0, 1.0).unwrap(), (0.5, 0.5));
        // G_x = g/g' cancels the x mismatch regardless of g'
        for gp in [0.5, 1.0, 2.0] {
            let (vx, _) = added_noise_qnd_scalar(2.5, gp, 2.5 / gp, 1.0).unwrap();
            assert_abs_diff_eq!(vx, 0.5, epsilon = 1e-14);
        }
        let (vx, vp) = added_noise_qnd_scalar(2.5, 1.0, 2.5, 2.5 / 7.25).unwrap();
        assert_abs_diff_eq!(vx * vp, 1.0 / 29.0, epsilon = 1e-14);

        assert!(added_noise_qnd_scalar(1.0, 0.0, 1.0, 1.0).is_err());
        assert!(added_noise_qnd_scalar(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(added_noise_qnd_scalar(-1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn matrix_pipeline_matches_scalar_forms() {
        for g in [0.1, 1.0, 2.5] {
            for gp in [0.5, 1.0, 4.0 / 3.0, 2.0] {
                for (gx, gcp) in [(1.0, 1.0), (g / gp, g * gp / (1.0 + g * g)), (0.7, 1.3)] {
                    let mut config = ProtocolConfig::qnd(g, gp);
                    config.gains = GainPolicy::Scalar { g_x: gx, g_p: gcp };
                    let out = run_protocol(&config, &vacuum_in()).unwrap();
                    let (vx, vp) = added_noise_qnd_scalar(g, gp, gx, gcp).unwrap();
                    assert_abs_diff_eq!(out.added_noise.var_x(), vx, epsilon = 1e-12);
                    assert_abs_diff_eq!(out.added_noise.var_p(), vp, epsilon = 1e-12);
                    assert_abs_diff_eq!(out.added_noise.matrix()[(0, 1)], 0.0, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn unity_gains_preserve_first_moments() {
        let out = run_protocol(&ProtocolConfig::qnd(1.0, 1.3), &vacuum_in()).unwrap();
        assert_eq!(out.first_moment_map, Matrix2::identity());
        let expected = vacuum_in() + out.added_noise.matrix();
        assert_abs_diff_eq!(out.v_out, expected, epsilon = 1e-14);
    }

    #[test]
    fn beamsplitter_matches_qnd_at_matched_ratio() {
        for (t, r) in [(3.0 / 5.0, 4.0 / 5.0), (1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt()), (0.8, 0.6)] {
            let g_prime = r / t;
            for g in [0.5, 1.0, 2.5] {
                let qnd = run_protocol(&ProtocolConfig::qnd(g, g_prime), &vacuum_in()).unwrap();
                let mut config = ProtocolConfig::qnd(g, g_prime);
                config.bell = BellInteraction::BeamSplitter { t, r };
                let bs = run_protocol(&config, &vacuum_in()).unwrap();
                assert_abs_diff_eq!(
                    *qnd.added_noise.matrix(),
                    *bs.added_noise.matrix(),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn sigma_compensation_reduces_to_epr_form() {
        for g in [0.5, 1.0, 2.5] {
            for gp in [0.7, 1.0, 1.6] {
                let mut config = ProtocolConfig::qnd(g, gp);
                let r = config.bell.to_matrix().unwrap();
                let (y, z) = extract_yz(&r).unwrap();
                config.s_a = sigma_matrix(&y, &z).unwrap().inverse();
                config.s_b = make_squeezer(0.3).unwrap().compose(&make_phase(0.4).unwrap());

                let out = run_protocol(&config, &vacuum_in()).unwrap();
                let shared = shared_state_qnd(g).unwrap();
                let sb = config.s_b.matrix();
                let cross = sigma3() * shared.block_c() * sb.transpose();
                let expected = sigma3() * shared.block_a() * sigma3()
                    + sb * shared.block_b() * sb.transpose()
                    + cross
                    + cross.transpose();
                assert_abs_diff_eq!(*out.added_noise.matrix(), expected, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn no_entanglement_adds_one_vacuum_unit_per_quadrature() {
        let out = run_protocol(&ProtocolConfig::qnd(0.0, 1.0), &vacuum_in()).unwrap();
        assert_abs_diff_eq!(*out.added_noise.matrix(), Matrix2::identity(), epsilon = 1e-14);
        assert_abs_diff_eq!(out.v_out, Matrix2::identity() * 1.5, epsilon = 1e-14);
    }

    #[test]
    fn config_validation() {
        assert!(ProtocolConfig::qnd(1.0, 1.0).validate().is_ok());
        assert!(ProtocolConfig::qnd(-1.0, 1.0).validate().is_err());
        assert!(ProtocolConfig::qnd(1.0, 0.0).validate().is_err());
        let mut c = ProtocolConfig::qnd(1.0, 1.0);
        c.bell = BellInteraction::BeamSplitter { t: 1.0, r: 0.0 };
        assert!(c.validate().is_err());
        c.bell = BellInteraction::Generic { r_matrix: SymplecticMat4::identity() };
        assert!(matches!(c.validate(), Err(Error::YSingular { .. })));
    }

    #[test]
    fn config_json_roundtrip() {
        let mut config = ProtocolConfig::qnd(2.5, 1.64);
        config.s_a = make_squeezer(0.25).unwrap();
        config.s_b = make_phase(-0.5).unwrap();
        config.gains = GainPolicy::Scalar { g_x: 1.1, g_p: 0.9 };
        let text = config.to_json();
        let back = ProtocolConfig::from_json(&text).unwrap();
        assert_eq!(config, back);

        let generic = ProtocolConfig {
            bell: BellInteraction::Generic { r_matrix: bell_qnd_matrix(1.5) },
            gains: GainPolicy::MatrixGain { g: Matrix2::new(1.0, 0.1, 0.0, 1.0) },
            ..ProtocolConfig::qnd(1.0, 1.0)
        };
        let back = ProtocolConfig::from_json(&generic.to_json()).unwrap();
        assert_eq!(generic, back);

        assert!(ProtocolConfig::from_json("{\"g\": 1.0}").is_err());
        let bad_kind = "{\"g\":1.0,\"bell\":{\"kind\":\"laser\"},\"s_a\":[[1,0],[0,1]],\"s_b\":[[1,0],[0,1]],\"gains\":{\"kind\":\"unity\"}}";
        assert!(ProtocolConfig::from_json(bad_kind).is_err());
        let bad_sa = "{\"g\":1.0,\"bell\":{\"kind\":\"qnd\",\"g_prime\":1.0},\"s_a\":[[2,0],[0,1]],\"s_b\":[[1,0],[0,1]],\"gains\":{\"kind\":\"unity\"}}";
        assert!(matches!(
            ProtocolConfig::from_json(bad_sa),
            Err(Error::NotSymplectic { .. })
        ));
    }

    #[test]
    fn rejects_bad_input_covariance() {
        let config = ProtocolConfig::qnd(1.0, 1.0);
        assert!(run_protocol(&config, &(Matrix2::identity() * 0.1)).is_err());
        assert!(run_protocol(&config, &Matrix2::new(0.5, 0.2, -0.2, 0.5)).is_err());
    }
}
