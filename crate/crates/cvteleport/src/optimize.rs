//! Closed-form optima of the teleportation figures of merit, together with
//! derivative-free numeric oracles that verify each of them independently.
//!
//! Every closed form here is a stationary point of a function the rest of the
//! library can evaluate, so each one is cross-checked: gain optima against a
//! 2-D grid search with local refinement, the added-noise minimum against a
//! 6-parameter multi-start search over local operations.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::covariance::{two_mode_standard_form, CovarianceMatrix2Mode};
use crate::error::{ensure_finite, Error, Result};
use crate::metrics::{fidelity_qnd, signal_transfer};
use crate::protocol::{added_noise_qnd_scalar, extract_yz, sigma_matrix};
use crate::search::{golden_section_max, nelder_mead};
use crate::symplectic::{make_phase, make_squeezer, sigma3, SymplecticMat2, SymplecticMat4};
use crate::tol;

/// Gains are searched on this log-spaced interval; wide enough to contain
/// every optimum for g up to 5.
pub const SEARCH_LO: f64 = 0.01;
pub const SEARCH_HI: f64 = 10.0;
const GRID_POINTS: usize = 200;

/// Seed used by the multi-start oracle unless the caller provides one.
pub const DEFAULT_ORACLE_SEED: u64 = 17;

fn ensure_positive(name: &str, value: f64) -> Result<()> {
    ensure_finite(name, value)?;
    if value <= 0.0 {
        return Err(Error::InvalidArgument(format!("{name} must be > 0, got {value}")));
    }
    Ok(())
}

/// Named optimization parameters, serialized as a JSON object in insertion
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct Parameters(Vec<(&'static str, f64)>);

impl Parameters {
    pub fn new(entries: Vec<(&'static str, f64)>) -> Self {
        Self(entries)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, f64)> + '_ {
        self.0.iter().copied()
    }
}

impl Serialize for Parameters {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (name, value) in &self.0 {
            map.serialize_entry(name, value)?;
        }
        map.end()
    }
}

/// How an optimum was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    NumericOracle,
}

/// An optimum: where it sits, what the objective is there, how it was found,
/// and how far it lies from the other method's answer.
#[derive(Debug, Clone, Serialize)]
pub struct OptimumResult {
    pub parameters: Parameters,
    pub value: f64,
    pub method: Method,
    /// |closed-form value - oracle value|; absent when only one of the two
    /// methods applies.
    pub residual: Option<f64>,
    /// Seed of the random starts; absent for deterministic searches.
    pub seed: Option<u64>,
}

impl OptimumResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

/// Gains minimizing the conditional-variance product:
/// G_x = g/g', G_p = g g'/(1 + g^2).
pub fn gains_min_v(g: f64, g_prime: f64) -> Result<(f64, f64)> {
    ensure_positive("entangling strength g", g)?;
    ensure_positive("Bell interaction strength g'", g_prime)?;
    Ok((g / g_prime, g * g_prime / (1.0 + g * g)))
}

/// The minimum of V, 1/(4(1 + g^2)); independent of the Bell strength.
pub fn min_v_value(g: f64) -> Result<f64> {
    ensure_positive("entangling strength g", g)?;
    Ok(1.0 / (4.0 * (1.0 + g * g)))
}

/// Signal transfer at the V-minimizing gains:
/// T = g^2/(g^2 + g'^2) + g^2 g'^2/(1 + g^2 + g^2 g'^2).
pub fn t_at_min_v(g: f64, g_prime: f64) -> Result<f64> {
    ensure_positive("entangling strength g", g)?;
    ensure_positive("Bell interaction strength g'", g_prime)?;
    let (g2, gp2) = (g * g, g_prime * g_prime);
    Ok(g2 / (g2 + gp2) + g2 * gp2 / (1.0 + g2 + g2 * gp2))
}

/// Gains maximizing the signal transfer:
/// G_x = (1 + g^2)/(g g'), G_p = g'/g.
pub fn gains_max_t(g: f64, g_prime: f64) -> Result<(f64, f64)> {
    ensure_positive("entangling strength g", g)?;
    ensure_positive("Bell interaction strength g'", g_prime)?;
    Ok(((1.0 + g * g) / (g * g_prime), g_prime / g))
}

/// The maximum of T, 1 + g^2 g'^2/((1 + g'^2)(1 + g^2 + g'^2)).
pub fn t_max_value(g: f64, g_prime: f64) -> Result<f64> {
    ensure_positive("entangling strength g", g)?;
    ensure_positive("Bell interaction strength g'", g_prime)?;
    let (g2, gp2) = (g * g, g_prime * g_prime);
    Ok(1.0 + g2 * gp2 / ((1.0 + gp2) * (1.0 + g2 + gp2)))
}

/// Conditional-variance product at the T-maximizing gains,
/// V = (1/g^2 + 1/g^4)/4; independent of the Bell strength, below 1/4 only
/// for g above sqrt((sqrt(5)+1)/2).
pub fn v_at_max_t(g: f64) -> Result<f64> {
    ensure_positive("entangling strength g", g)?;
    let g2 = g * g;
    Ok((1.0 / g2 + 1.0 / (g2 * g2)) / 4.0)
}

/// Bell strength maximizing both T curves: g'_opt = (1 + g^2)^(1/4).
pub fn optimal_gprime(g: f64) -> Result<f64> {
    ensure_positive("entangling strength g", g)?;
    Ok((1.0 + g * g).powf(0.25))
}

/// Signal transfer at the V-minimizing gains and optimal Bell strength:
/// T = 2g^2/(g^2 + sqrt(1 + g^2)). Approaches 2 for large g.
pub fn t_min_v_opt(g: f64) -> Result<f64> {
    ensure_positive("entangling strength g", g)?;
    let g2 = g * g;
    Ok(2.0 * g2 / (g2 + (1.0 + g2).sqrt()))
}

/// Maximum signal transfer at the optimal Bell strength:
/// T = 2 sqrt(1 + g^2)/(1 + sqrt(1 + g^2)).
pub fn t_max_opt(g: f64) -> Result<f64> {
    ensure_positive("entangling strength g", g)?;
    let s = (1.0 + g * g).sqrt();
    Ok(2.0 * s / (1.0 + s))
}

/// Bell strength maximizing the unity-gain fidelity, found by a golden-section
/// search after a coarse bracket scan. At g = 1 the maximum sits at g' = 4/3.
pub fn optimal_gprime_fidelity(g: f64) -> Result<f64> {
    ensure_positive("entangling strength g", g)?;
    let f = |gp: f64| fidelity_qnd(g, gp).unwrap_or(f64::NEG_INFINITY);
    let n = 400;
    let ratio = SEARCH_HI / SEARCH_LO;
    let grid = |i: usize| SEARCH_LO * ratio.powf(i as f64 / (n - 1) as f64);
    let mut best = 0;
    for i in 1..n {
        if f(grid(i)) > f(grid(best)) {
            best = i;
        }
    }
    let lo = grid(best.saturating_sub(1));
    let hi = grid((best + 1).min(n - 1));
    let (x, _) = golden_section_max(f, lo, hi, tol::GOLDEN_SECTION);
    Ok(x)
}

/// The local squeezers that remove the Bell-strength mismatch and symmetrize
/// the added noise: S_A = diag(a/g', g'/a), S_B = diag(1/a, a) with
/// a = (1 + g^2)^(1/4). The resulting unity-gain added variances are both
/// sqrt(1 + g^2) - g.
pub fn improved_squeezers(g: f64, g_prime: f64) -> Result<(SymplecticMat2, SymplecticMat2)> {
    ensure_positive("entangling strength g", g)?;
    ensure_positive("Bell interaction strength g'", g_prime)?;
    let a = (1.0 + g * g).powf(0.25);
    let s_a = SymplecticMat2::try_new(Matrix2::new(a / g_prime, 0.0, 0.0, g_prime / a))?;
    let s_b = SymplecticMat2::try_new(Matrix2::new(1.0 / a, 0.0, 0.0, a))?;
    Ok((s_a, s_b))
}

/// Unity-gain fidelity with the improved squeezers in place:
/// F = 1/(1 + sqrt(1 + g^2) - g). Exceeds 1/2 for every g > 0.
pub fn improved_fidelity(g: f64) -> Result<f64> {
    ensure_positive("entangling strength g", g)?;
    Ok(1.0 / (1.0 + (1.0 + g * g).sqrt() - g))
}

/// The local operations minimizing the photon noise for a pure shared state
/// and a given Bell interaction: S_A = Sigma^-1 m_A and S_B = m_B, where
/// (m_A, m_B) bring the state to two-mode squeezed form. The minimum is
/// N_min = 2(a - c) = e^(-2 kappa), and the added-noise matrix becomes
/// N_min times the identity.
pub fn optimal_local_ops(
    v_ab: &CovarianceMatrix2Mode,
    r: &SymplecticMat4,
) -> Result<(SymplecticMat2, SymplecticMat2, f64)> {
    let standard = two_mode_standard_form(v_ab)?;
    let (y, z) = extract_yz(r)?;
    let sigma = sigma_matrix(&y, &z)?;
    let s_a = sigma.inverse().compose(&standard.local_ops.0);
    let s_b = standard.local_ops.1;
    let n_min = 2.0 * (standard.a - standard.c);
    Ok((s_a, s_b, n_min))
}

fn noise_from_tilde(a: f64, c: f64, s_a_tilde: &Matrix2<f64>, s_b: &Matrix2<f64>) -> f64 {
    let cross = (s_a_tilde * s_b.transpose()).trace();
    (a / 2.0) * (s_a_tilde.norm_squared() + s_b.norm_squared()) - c * cross
}

/// Photon noise of a standard-form resource under local operations
/// (s_A, s_B): N = (a/2) Tr(s~_A s~_At + s_B s_Bt) - c Tr(s~_A s_Bt), with
/// s~_A = sigma_3 s_A sigma_3. Minimized at value 2(a - c) by s~_A = s_B =
/// any common phase shift.
pub fn noise_standard_form(
    a: f64,
    c: f64,
    s_a: &SymplecticMat2,
    s_b: &SymplecticMat2,
) -> Result<f64> {
    ensure_finite("invariant a", a)?;
    ensure_finite("invariant c", c)?;
    if a < 0.5 || c < 0.0 || (a * a - c * c - 0.25).abs() > 1e-8 {
        return Err(Error::InvalidArgument(format!(
            "(a, c) = ({a}, {c}) is not a pure-state invariant pair (need a >= 1/2, c >= 0, a^2 - c^2 = 1/4)"
        )));
    }
    let s_a_tilde = sigma3() * s_a.matrix() * sigma3();
    Ok(noise_from_tilde(a, c, &s_a_tilde, s_b.matrix()))
}

/// What the gain oracle optimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GainObjective {
    MinV,
    MaxT,
}

/// Verify a closed-form gain optimum by brute force: a 200x200 log-spaced
/// grid over both gains followed by simplex refinement. The result carries
/// the distance to the closed-form value as `residual`.
pub fn oracle_gain_search(g: f64, g_prime: f64, objective: GainObjective) -> Result<OptimumResult> {
    ensure_positive("entangling strength g", g)?;
    ensure_positive("Bell interaction strength g'", g_prime)?;

    // minimized in both cases; T enters negated
    let score = move |gx: f64, gp: f64| -> f64 {
        if gx <= 0.0 || gp <= 0.0 {
            return f64::INFINITY;
        }
        let Ok((vx, vp)) = added_noise_qnd_scalar(g, g_prime, gx, gp) else {
            return f64::INFINITY;
        };
        match objective {
            GainObjective::MinV => vx * vp,
            GainObjective::MaxT => match signal_transfer(gx, gp, vx, vp) {
                Ok(t) => -t,
                Err(_) => f64::INFINITY,
            },
        }
    };

    let ratio = SEARCH_HI / SEARCH_LO;
    let grid = |i: usize| SEARCH_LO * ratio.powf(i as f64 / (GRID_POINTS - 1) as f64);
    let mut best = (grid(0), grid(0));
    let mut best_score = f64::INFINITY;
    for i in 0..GRID_POINTS {
        for j in 0..GRID_POINTS {
            let (gx, gp) = (grid(i), grid(j));
            let s = score(gx, gp);
            if s < best_score {
                best_score = s;
                best = (gx, gp);
            }
        }
    }

    let step = best.0.min(best.1) * 0.05;
    let (refined, refined_score) = nelder_mead(
        |x| score(x[0], x[1]),
        &[best.0, best.1],
        step,
        1e-15,
        1e-10,
        3000,
    );

    let value = match objective {
        GainObjective::MinV => refined_score,
        GainObjective::MaxT => -refined_score,
    };
    let closed_value = match objective {
        GainObjective::MinV => min_v_value(g)?,
        GainObjective::MaxT => t_max_value(g, g_prime)?,
    };

    Ok(OptimumResult {
        parameters: Parameters::new(vec![("G_x", refined[0]), ("G_p", refined[1])]),
        value,
        method: Method::NumericOracle,
        residual: Some((value - closed_value).abs()),
        seed: None,
    })
}

/// Verify the transfer-optimal interaction strength by one-dimensional
/// golden-section search over the achievable transfer maximum.
pub fn oracle_gprime_search(g: f64) -> Result<OptimumResult> {
    ensure_positive("entangling strength g", g)?;
    let objective = |gp: f64| t_max_value(g, gp).unwrap_or(f64::NEG_INFINITY);
    let (gp_found, value) =
        golden_section_max(objective, SEARCH_LO, SEARCH_HI, tol::GOLDEN_SECTION);
    let closed_value = t_max_opt(g)?;
    Ok(OptimumResult {
        parameters: Parameters::new(vec![("g_prime", gp_found)]),
        value,
        method: Method::NumericOracle,
        residual: Some((value - closed_value).abs()),
        seed: None,
    })
}

/// Verify the added-noise minimum by brute force over all six Bloch-Messiah
/// parameters of the local operations, with the default seed.
pub fn oracle_local_ops_search(a: f64, c: f64) -> Result<OptimumResult> {
    oracle_local_ops_search_seeded(a, c, DEFAULT_ORACLE_SEED)
}

/// Multi-start (50 starts) simplex minimization of `noise_standard_form`
/// over s~_A = P(alpha)S(r_a)P(beta) and s_B = P(gamma)S(r_b)P(delta).
/// The residual compares against the closed-form minimum 2(a - c).
pub fn oracle_local_ops_search_seeded(a: f64, c: f64, seed: u64) -> Result<OptimumResult> {
    ensure_finite("invariant a", a)?;
    ensure_finite("invariant c", c)?;
    if a < 0.5 || c < 0.0 || (a * a - c * c - 0.25).abs() > 1e-8 {
        return Err(Error::InvalidArgument(format!(
            "(a, c) = ({a}, {c}) is not a pure-state invariant pair (need a >= 1/2, c >= 0, a^2 - c^2 = 1/4)"
        )));
    }

    // x = [r_a, r_b, alpha, beta, gamma, delta]
    let objective = move |x: &[f64]| -> f64 {
        let pa = make_phase(x[2]).expect("finite");
        let pb = make_phase(x[3]).expect("finite");
        let pg = make_phase(x[4]).expect("finite");
        let pd = make_phase(x[5]).expect("finite");
        let sa = make_squeezer(x[0]).expect("finite");
        let sb = make_squeezer(x[1]).expect("finite");
        let s_a_tilde = pa.compose(&sa).compose(&pb);
        let s_b = pg.compose(&sb).compose(&pd);
        noise_from_tilde(a, c, s_a_tilde.matrix(), s_b.matrix())
    };

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for _ in 0..50 {
        let x0 = [
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
            rng.random_range(-PI..PI),
            rng.random_range(-PI..PI),
            rng.random_range(-PI..PI),
            rng.random_range(-PI..PI),
        ];
        let (x, v) = nelder_mead(objective, &x0, 0.3, 1e-15, 1e-9, 2500);
        if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
            best = Some((x, v));
        }
    }
    let (x, value) = best.expect("at least one start");
    let closed_value = 2.0 * (a - c);

    Ok(OptimumResult {
        parameters: Parameters::new(vec![
            ("r_a", x[0]),
            ("r_b", x[1]),
            ("alpha", x[2]),
            ("beta", x[3]),
            ("gamma", x[4]),
            ("delta", x[5]),
        ]),
        value,
        method: Method::NumericOracle,
        residual: Some((value - closed_value).abs()),
        seed: Some(seed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{evaluate, fidelity_gaussian};
    use crate::protocol::{run_protocol, shared_state_qnd, BellInteraction, ProtocolConfig};
    use approx::assert_abs_diff_eq;

    #[test]
    fn closed_form_values_at_reference_point() {
        assert_abs_diff_eq!(optimal_gprime(2.5).unwrap(), 1.6409090174556455, epsilon = 1e-14);
        assert_abs_diff_eq!(min_v_value(2.5).unwrap(), 1.0 / 29.0, epsilon = 1e-16);
        assert_abs_diff_eq!(t_at_min_v(2.5, 1.0).unwrap(), 1.3250319284802043, epsilon = 1e-14);
        assert_abs_diff_eq!(t_min_v_opt(2.5).unwrap(), 1.3978065211916495, epsilon = 1e-14);
        assert_abs_diff_eq!(t_max_value(2.5, 1.0).unwrap(), 1.378787878787879, epsilon = 1e-14);
        assert_abs_diff_eq!(t_max_opt(2.5).unwrap(), 1.4583736308584794, epsilon = 1e-14);
        assert_abs_diff_eq!(v_at_max_t(2.5).unwrap(), 0.0464, epsilon = 1e-16);
        assert!(gains_min_v(0.0, 1.0).is_err());
        assert!(t_max_value(1.0, -1.0).is_err());
    }

    #[test]
    fn closed_forms_match_pipeline_metrics() {
        for g in [0.5, 1.0, 2.5] {
            for gp in [0.7, 1.0, 1.64] {
                let (gx, gcp) = gains_min_v(g, gp).unwrap();
                let mut config = ProtocolConfig::qnd(g, gp);
                config.gains = crate::protocol::GainPolicy::Scalar { g_x: gx, g_p: gcp };
                let report = evaluate(&config).unwrap();
                assert_abs_diff_eq!(report.v, min_v_value(g).unwrap(), epsilon = 1e-12);
                assert_abs_diff_eq!(report.t, t_at_min_v(g, gp).unwrap(), epsilon = 1e-12);

                let (gx, gcp) = gains_max_t(g, gp).unwrap();
                config.gains = crate::protocol::GainPolicy::Scalar { g_x: gx, g_p: gcp };
                let report = evaluate(&config).unwrap();
                assert_abs_diff_eq!(report.t, t_max_value(g, gp).unwrap(), epsilon = 1e-12);
                assert_abs_diff_eq!(report.v, v_at_max_t(g).unwrap(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn min_v_is_independent_of_bell_strength() {
        let reference = min_v_value(1.7).unwrap();
        for gp in [0.5, 1.0, 2.0] {
            let (gx, gcp) = gains_min_v(1.7, gp).unwrap();
            let (vx, vp) = added_noise_qnd_scalar(1.7, gp, gx, gcp).unwrap();
            assert_abs_diff_eq!(vx * vp, reference, epsilon = 1e-12);
        }
    }

    #[test]
    fn optimal_bell_strength_is_stationary() {
        for g in [0.5, 1.0, 2.5] {
            let gp_opt = optimal_gprime(g).unwrap();
            let h = 1e-5;
            let d_min_v = (t_at_min_v(g, gp_opt + h).unwrap()
                - t_at_min_v(g, gp_opt - h).unwrap())
                / (2.0 * h);
            let d_max = (t_max_value(g, gp_opt + h).unwrap()
                - t_max_value(g, gp_opt - h).unwrap())
                / (2.0 * h);
            assert!(d_min_v.abs() < 1e-6, "dT_V_min/dg' = {d_min_v:.3e}");
            assert!(d_max.abs() < 1e-6, "dT_max/dg' = {d_max:.3e}");
            // relate the two summit values to the g'-optimal closed forms
            assert_abs_diff_eq!(
                t_at_min_v(g, gp_opt).unwrap(),
                t_min_v_opt(g).unwrap(),
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                t_max_value(g, gp_opt).unwrap(),
                t_max_opt(g).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn fidelity_argmax() {
        let gp = optimal_gprime_fidelity(1.0).unwrap();
        assert_abs_diff_eq!(gp, 4.0 / 3.0, epsilon = 1e-6);
        assert_abs_diff_eq!(
            fidelity_qnd(1.0, gp).unwrap(),
            0.6998542122237652,
            epsilon = 1e-12
        );
        assert!(fidelity_qnd(1.0, gp).unwrap() > fidelity_qnd(1.0, 1.0).unwrap());

        // g = 0.5: no closed form; the maximum beats the g' = g + 1 witness floor
        let gp = optimal_gprime_fidelity(0.5).unwrap();
        assert!(fidelity_qnd(0.5, gp).unwrap() >= fidelity_qnd(0.5, 1.5).unwrap());
        assert!(fidelity_qnd(0.5, gp).unwrap() > 0.5);
    }

    #[test]
    fn improved_squeezers_symmetrize_noise() {
        for g in [0.5, 1.0, 2.5] {
            for gp in [0.7, 1.0, 1.64] {
                let (s_a, s_b) = improved_squeezers(g, gp).unwrap();
                let mut config = ProtocolConfig::qnd(g, gp);
                config.s_a = s_a;
                config.s_b = s_b;
                let out = run_protocol(&config, &(Matrix2::identity() * 0.5)).unwrap();
                let expected = (1.0 + g * g).sqrt() - g;
                assert_abs_diff_eq!(out.added_noise.var_x(), expected, epsilon = 1e-12);
                assert_abs_diff_eq!(out.added_noise.var_p(), expected, epsilon = 1e-12);

                let f = fidelity_gaussian(&(Matrix2::identity() * 0.5), &out.v_out).unwrap();
                assert_abs_diff_eq!(f, improved_fidelity(g).unwrap(), epsilon = 1e-12);
            }
        }
        assert_abs_diff_eq!(improved_fidelity(1.0).unwrap(), 1.0 / 2f64.sqrt(), epsilon = 1e-15);
        for g in [0.05, 0.3, 1.0, 4.0] {
            assert!(improved_fidelity(g).unwrap() > 0.5);
            // agreement with the squeezed-resource form 1/(1 + e^(-2 kappa))
            let kappa = -0.5 * ((1.0 + g * g).sqrt() - g).ln();
            assert_abs_diff_eq!(
                improved_fidelity(g).unwrap(),
                1.0 / (1.0 + (-2.0 * kappa).exp()),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn optimal_local_ops_reach_isotropic_noise() {
        for g in [0.5, 1.0, 2.5] {
            let shared = shared_state_qnd(g).unwrap();
            for gp in [0.7, 1.0, 1.64] {
                let bell = BellInteraction::Qnd { g_prime: gp }.to_matrix().unwrap();
                let (s_a, s_b, n_min) = optimal_local_ops(&shared, &bell).unwrap();
                assert_abs_diff_eq!(n_min, (1.0 + g * g).sqrt() - g, epsilon = 1e-12);

                let mut config = ProtocolConfig::qnd(g, gp);
                config.s_a = s_a;
                config.s_b = s_b;
                let out = run_protocol(&config, &(Matrix2::identity() * 0.5)).unwrap();
                let expected = Matrix2::identity() * n_min;
                assert!((out.added_noise.matrix() - expected).norm() < 1e-10);
            }
        }

        // no entanglement: the noise floor is one vacuum unit
        let vac = CovarianceMatrix2Mode::vacuum();
        let bell = BellInteraction::Qnd { g_prime: 1.0 }.to_matrix().unwrap();
        let (_, _, n_min) = optimal_local_ops(&vac, &bell).unwrap();
        assert_abs_diff_eq!(n_min, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn noise_standard_form_values() {
        let kappa = 0.5f64;
        let (a, c) = ((2.0 * kappa).cosh() / 2.0, (2.0 * kappa).sinh() / 2.0);
        let id = SymplecticMat2::identity();
        assert_abs_diff_eq!(
            noise_standard_form(a, c, &id, &id).unwrap(),
            2.0 * (a - c),
            epsilon = 1e-14
        );
        // the whole family s~_A = s_B = P(theta) sits at the minimum
        for theta in [-2.0, -0.5, 0.9, 2.7] {
            let s_b = make_phase(theta).unwrap();
            let s_a = make_phase(-theta).unwrap();
            assert_abs_diff_eq!(
                noise_standard_form(a, c, &s_a, &s_b).unwrap(),
                2.0 * (a - c),
                epsilon = 1e-12
            );
        }
        assert!(noise_standard_form(0.4, 0.0, &id, &id).is_err());
        assert!(noise_standard_form(1.0, 0.5, &id, &id).is_err());
    }

    #[test]
    fn noise_minimum_curvature() {
        // slice f(r, theta) through the minimum along s~_A = P(theta)S(r)
        for kappa in [0.25f64, 0.5, 1.0] {
            let (a, c) = ((2.0 * kappa).cosh() / 2.0, (2.0 * kappa).sinh() / 2.0);
            let f = |r: f64, theta: f64| {
                let tilde = make_phase(theta).unwrap().compose(&make_squeezer(r).unwrap());
                let s_a = SymplecticMat2::try_new(sigma3() * tilde.matrix() * sigma3()).unwrap();
                noise_standard_form(a, c, &s_a, &SymplecticMat2::identity()).unwrap()
            };
            let h = 1e-4;
            let f00 = f(0.0, 0.0);
            let frr = (f(h, 0.0) - 2.0 * f00 + f(-h, 0.0)) / (h * h);
            let ftt = (f(0.0, h) - 2.0 * f00 + f(0.0, -h)) / (h * h);
            let frt = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
            assert_abs_diff_eq!(frr, 2.0 * (2.0 * a - c), epsilon = 1e-5);
            assert_abs_diff_eq!(ftt, 2.0 * c, epsilon = 1e-5);
            assert_abs_diff_eq!(frt, 0.0, epsilon = 1e-5);
            assert!(frr > 0.0 && ftt > 0.0);
        }
    }

    #[test]
    fn gain_oracle_agrees_with_closed_forms() {
        let r = oracle_gain_search(2.5, 1.0, GainObjective::MinV).unwrap();
        let (gx, gp) = gains_min_v(2.5, 1.0).unwrap();
        assert!((r.parameters.get("G_x").unwrap() - gx).abs() < 1e-4);
        assert!((r.parameters.get("G_p").unwrap() - gp).abs() < 1e-4);
        assert!(r.residual.unwrap() < 1e-6);
        assert!(r.value <= min_v_value(2.5).unwrap() + 1e-8);

        let r = oracle_gain_search(1.0, 1.0, GainObjective::MaxT).unwrap();
        let (gx, gp) = gains_max_t(1.0, 1.0).unwrap();
        assert!((r.parameters.get("G_x").unwrap() - gx).abs() < 1e-4);
        assert!((r.parameters.get("G_p").unwrap() - gp).abs() < 1e-4);
        assert!(r.residual.unwrap() < 1e-6);
        assert!(r.value >= t_max_value(1.0, 1.0).unwrap() - 1e-8);
        assert_eq!(r.method, Method::NumericOracle);
        assert_eq!(r.seed, None);
    }

    #[test]
    fn gprime_oracle_agrees_with_closed_form() {
        let r = oracle_gprime_search(2.5).unwrap();
        assert!((r.parameters.get("g_prime").unwrap() - optimal_gprime(2.5).unwrap()).abs() < 1e-4);
        assert!(r.residual.unwrap() < 1e-8);
        assert_eq!(r.seed, None);
    }

    #[test]
    fn local_ops_oracle_finds_the_theorem_minimum() {
        for kappa in [0.0f64, 0.5] {
            let (a, c) = ((2.0 * kappa).cosh() / 2.0, (2.0 * kappa).sinh() / 2.0);
            let r = oracle_local_ops_search(a, c).unwrap();
            let res = r.residual.unwrap();
            assert!(res < 1e-5, "residual {res} at kappa {kappa}");
            assert!(r.parameters.get("r_a").unwrap().abs() < 1e-3);
            assert!(r.parameters.get("r_b").unwrap().abs() < 1e-3);
            if c > 0.0 {
                let theta_plus = r.parameters.get("alpha").unwrap()
                    + r.parameters.get("beta").unwrap()
                    - r.parameters.get("gamma").unwrap()
                    - r.parameters.get("delta").unwrap();
                assert!(1.0 - theta_plus.cos() < 1e-6, "theta_plus = {theta_plus}");
            }
            assert_eq!(r.seed, Some(DEFAULT_ORACLE_SEED));
        }
    }

    #[test]
    fn optimum_result_json_shape() {
        let r = OptimumResult {
            parameters: Parameters::new(vec![("G_x", 2.5), ("G_p", 0.25)]),
            value: 1.0,
            method: Method::ClosedForm,
            residual: Some(0.0),
            seed: None,
        };
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["parameters"]["G_x"], 2.5);
        assert_eq!(json["method"], "closed_form");
        assert!(json["seed"].is_null());
    }
}
