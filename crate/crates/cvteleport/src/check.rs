//! Self-check suite: randomized structural properties, cross-validations
//! between independent computation paths, and oracle comparisons.
//!
//! The strict profile tightens every tolerance a hundredfold; witness checks
//! (strict inequalities with finite margins) are profile-independent.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::covariance::{two_mode_standard_form, CovarianceMatrix2Mode};
use crate::metrics::{fidelity_gaussian, fidelity_qnd, fidelity_uncorrelated};
use crate::optimize::{
    gains_max_t, gains_min_v, noise_standard_form, optimal_gprime, optimal_gprime_fidelity,
    optimal_local_ops, oracle_gain_search, t_max_value, v_at_max_t, GainObjective,
};
use crate::protocol::{
    added_noise_qnd_scalar, clearly_regular_yz, extract_yz, run_protocol, shared_state_qnd,
    sigma_matrix, BellInteraction, GainPolicy, ProtocolConfig,
};
use crate::symplectic::{
    bloch_messiah_2x2, make_beamsplitter, make_phase, make_qnd, make_squeezer, random_symplectic2,
    random_symplectic4, symplectic_deviation2, symplectic_deviation4, SymplecticMat4,
};

/// Tolerance profile for the whole suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Profile {
    #[default]
    Default,
    /// Every tolerance multiplied by 1e-2.
    Strict,
}

impl Profile {
    pub fn scale(self) -> f64 {
        match self {
            Profile::Default => 1.0,
            Profile::Strict => 1e-2,
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text.to_ascii_lowercase().as_str() {
            "default" => Some(Profile::Default),
            "strict" => Some(Profile::Strict),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Profile::Default => "default",
            Profile::Strict => "strict",
        }
    }
}

/// Deliberate corruption hooks for exercising the failure path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Perturb constructor outputs so the symplectic condition breaks.
    SymplecticConstructor,
}

impl Fault {
    pub fn parse(text: &str) -> Option<Self> {
        match text.to_ascii_lowercase().as_str() {
            "symplectic-constructor" => Some(Fault::SymplecticConstructor),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantOutcome {
    pub id: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(id: &'static str, passed: bool, detail: String) -> InvariantOutcome {
    InvariantOutcome { id, passed, detail }
}

fn max_abs2(m: &Matrix2<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

fn constructor_condition(scale: f64, fault: Option<Fault>, seed: u64) -> InvariantOutcome {
    let tol = 1e-12 * scale;
    let corrupt = matches!(fault, Some(Fault::SymplecticConstructor));
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0xC0);
    let mut max_dev = 0.0f64;
    for _ in 0..1000 {
        let r = rng.random_range(-3.0..3.0);
        let u = rng.random_range(-PI..PI);
        let g = rng.random_range(-2.0..2.0);
        let gp: f64 = rng.random_range(0.1..3.0);
        let t = 1.0 / (1.0 + gp * gp).sqrt();

        let mut m2 = [
            make_squeezer(r).expect("finite r").into_matrix(),
            make_phase(u).expect("finite angle").into_matrix(),
        ];
        if corrupt {
            for m in &mut m2 {
                m[(0, 1)] += 1e-6;
            }
        }
        for m in &m2 {
            max_dev = max_dev.max(symplectic_deviation2(m));
        }

        let m4 = [
            *make_qnd(g).expect("finite g").matrix(),
            *make_beamsplitter(t, gp * t).expect("valid splitter").matrix(),
            *SymplecticMat4::direct_sum(
                &make_phase(u).expect("finite angle"),
                &make_squeezer(r).expect("finite r"),
            )
            .matrix(),
        ];
        for m in &m4 {
            let mut m = *m;
            if corrupt {
                m[(0, 1)] += 1e-6;
            }
            max_dev = max_dev.max(symplectic_deviation4(&m));
        }
    }
    outcome(
        "symplectic.constructor_condition",
        max_dev <= tol,
        format!("max |SJS^T - J| = {max_dev:.3e} (tol {tol:.3e})"),
    )
}

fn bloch_messiah_roundtrip(scale: f64, seed: u64) -> InvariantOutcome {
    let tol = 1e-10 * scale;
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0xB1);
    let mut max_err = 0.0f64;
    for _ in 0..1000 {
        let alpha = rng.random_range(-PI..PI);
        let r = rng.random_range(-3.0..3.0);
        let beta = rng.random_range(-PI..PI);
        let s = make_phase(alpha)
            .expect("finite angle")
            .compose(&make_squeezer(r).expect("finite r"))
            .compose(&make_phase(beta).expect("finite angle"));
        let factors = bloch_messiah_2x2(&s);
        let err = max_abs2(&(factors.reconstruct().into_matrix() - s.into_matrix()));
        max_err = max_err.max(err);
    }
    outcome(
        "symplectic.bloch_messiah_roundtrip",
        max_err <= tol,
        format!("max reconstruction error = {max_err:.3e} (tol {tol:.3e})"),
    )
}

fn sigma_symplecticity(scale: f64, seed: u64) -> InvariantOutcome {
    let tol = 1e-10 * scale;
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x51);
    let mut max_dev = 0.0f64;
    let mut accepted = 0usize;
    let mut failures = 0usize;
    while accepted < 1000 {
        let r = random_symplectic4(&mut rng);
        let (y, z) = match extract_yz(&r) {
            Ok(pair) => pair,
            Err(_) => continue,
        };
        if !clearly_regular_yz(&y, &z) {
            continue;
        }
        accepted += 1;
        match sigma_matrix(&y, &z) {
            Ok(sigma) => max_dev = max_dev.max(symplectic_deviation2(sigma.matrix())),
            Err(_) => failures += 1,
        }
    }
    outcome(
        "symplectic.sigma_symplecticity",
        failures == 0 && max_dev <= tol,
        format!("{failures} failures, max |SJS^T - J| = {max_dev:.3e} (tol {tol:.3e})"),
    )
}

fn standard_form_pattern(scale: f64, seed: u64) -> InvariantOutcome {
    let pattern_tol = 1e-8 * scale;
    let law_tol = 1e-8 * scale;
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x5F);
    let mut max_resid = 0.0f64;
    let mut max_law = 0.0f64;
    let mut failures = 0usize;
    for _ in 0..1000 {
        let g = rng.random_range(0.05..5.0);
        let shared = shared_state_qnd(g).expect("valid coupling");
        let scramble = SymplecticMat4::direct_sum(
            &random_symplectic2(&mut rng, 1.0),
            &random_symplectic2(&mut rng, 1.0),
        );
        let scrambled = shared.propagate(&scramble);
        let standard = match two_mode_standard_form(&scrambled) {
            Ok(s) => s,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        let v = standard.v_tms.matrix();
        let mut resid = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                let want = match (i, j) {
                    (0, 0) | (1, 1) | (2, 2) | (3, 3) => standard.a,
                    (0, 2) | (2, 0) => -standard.c,
                    (1, 3) | (3, 1) => standard.c,
                    _ => 0.0,
                };
                resid = resid.max((v[(i, j)] - want).abs());
            }
        }
        max_resid = max_resid.max(resid);
        let law = ((-2.0 * standard.kappa).exp() - ((1.0 + g * g).sqrt() - g)).abs();
        max_law = max_law.max(law);
    }
    outcome(
        "covariance.standard_form_pattern",
        failures == 0 && max_resid <= pattern_tol && max_law <= law_tol,
        format!(
            "{failures} failures, max pattern residual = {max_resid:.3e}, \
             max squeezing-law error = {max_law:.3e} (tol {pattern_tol:.3e})"
        ),
    )
}

fn uncertainty_preserved(scale: f64, seed: u64) -> InvariantOutcome {
    let det_tol = 1e-10 * scale;
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0xCE);
    let mut failures = 0usize;
    let mut max_det_drift = 0.0f64;
    for _ in 0..1000 {
        let s = random_symplectic4(&mut rng);
        let propagated = CovarianceMatrix2Mode::vacuum().propagate(&s);
        if CovarianceMatrix2Mode::try_new(*propagated.matrix()).is_err() {
            failures += 1;
        }
        max_det_drift = max_det_drift.max((propagated.matrix().determinant() - 1.0 / 16.0).abs());
    }
    outcome(
        "covariance.uncertainty_preserved",
        failures == 0 && max_det_drift <= det_tol,
        format!(
            "{failures} uncertainty violations, max |det V - 1/16| = {max_det_drift:.3e} \
             (tol {det_tol:.3e})"
        ),
    )
}

fn bs_qnd_equivalence(scale: f64) -> InvariantOutcome {
    let tol = 1e-12 * scale;
    let mut max_diff = 0.0f64;
    for &g in &[0.3f64, 1.0, 2.5] {
        for &gp in &[0.3f64, 1.0, 2.2] {
            let t = 1.0 / (1.0 + gp * gp).sqrt();
            let mut qnd = ProtocolConfig::qnd(g, gp);
            let mut bs = qnd;
            bs.bell = BellInteraction::BeamSplitter { t, r: gp * t };
            for gains in [
                GainPolicy::Unity,
                GainPolicy::Scalar { g_x: 1.3, g_p: 0.6 },
            ] {
                qnd.gains = gains;
                bs.gains = gains;
                let v_in = Matrix2::new(0.7, 0.1, 0.1, 0.5);
                let out_q = run_protocol(&qnd, &v_in).expect("valid config");
                let out_b = run_protocol(&bs, &v_in).expect("valid config");
                max_diff = max_diff
                    .max(max_abs2(
                        &(out_q.added_noise.matrix() - out_b.added_noise.matrix()),
                    ))
                    .max(max_abs2(&(out_q.v_out - out_b.v_out)));
            }
            let (yq, zq) = extract_yz(&qnd.bell.to_matrix().expect("valid")).expect("regular");
            let (yb, zb) = extract_yz(&bs.bell.to_matrix().expect("valid")).expect("regular");
            let sq = sigma_matrix(&yq, &zq).expect("regular");
            let sb = sigma_matrix(&yb, &zb).expect("regular");
            max_diff = max_diff.max(max_abs2(&(sq.matrix() - sb.matrix())));
        }
    }
    outcome(
        "protocol.bs_qnd_equivalence",
        max_diff <= tol,
        format!("max splitter/coupler mismatch = {max_diff:.3e} (tol {tol:.3e})"),
    )
}

fn scalar_vs_matrix(scale: f64) -> InvariantOutcome {
    let tol = 1e-12 * scale;
    let mut max_diff = 0.0f64;
    for &g in &[0.0, 0.5, 1.0, 2.5] {
        for &gp in &[0.5, 1.0, 1.64] {
            for &(gx, gp_gain) in &[(1.0, 1.0), (1.5, 0.4), (0.8, 2.0)] {
                let (vx, vp) = added_noise_qnd_scalar(g, gp, gx, gp_gain).expect("valid");
                let mut config = ProtocolConfig::qnd(g, gp);
                config.gains = GainPolicy::Scalar {
                    g_x: gx,
                    g_p: gp_gain,
                };
                let out = run_protocol(&config, &(Matrix2::identity() * 0.5)).expect("valid");
                let n = out.added_noise.matrix();
                max_diff = max_diff
                    .max((n[(0, 0)] - vx).abs())
                    .max((n[(1, 1)] - vp).abs())
                    .max(n[(0, 1)].abs());
            }
        }
    }
    outcome(
        "protocol.scalar_vs_matrix",
        max_diff <= tol,
        format!("max pipeline/closed-form gap = {max_diff:.3e} (tol {tol:.3e})"),
    )
}

fn unity_first_moments() -> InvariantOutcome {
    let mut max_dev = 0.0f64;
    for &g in &[0.0, 1.0, 2.5] {
        for &gp in &[0.7, 4.0 / 3.0] {
            let config = ProtocolConfig::qnd(g, gp);
            let out = run_protocol(&config, &(Matrix2::identity() * 0.5)).expect("valid");
            max_dev = max_dev.max(max_abs2(&(out.first_moment_map - Matrix2::identity())));
        }
    }
    outcome(
        "protocol.unity_first_moments",
        max_dev == 0.0,
        format!("max |map - I| = {max_dev:.3e} (must be exact)"),
    )
}

fn noise_psd(scale: f64, seed: u64) -> InvariantOutcome {
    let tol = 1e-10 * scale;
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x9D);
    let mut min_eig = f64::INFINITY;
    let mut failures = 0usize;
    for _ in 0..500 {
        let g = rng.random_range(0.0..3.0);
        let gp = rng.random_range(0.2..3.0);
        let mut config = ProtocolConfig::qnd(g, gp);
        config.s_a = random_symplectic2(&mut rng, 1.0);
        config.s_b = random_symplectic2(&mut rng, 1.0);
        if rng.random_range(0.0..1.0) < 0.5 {
            let sign = if rng.random_range(0.0..1.0) < 0.5 { -1.0 } else { 1.0 };
            config.gains = GainPolicy::Scalar {
                g_x: sign * rng.random_range(0.2..3.0),
                g_p: rng.random_range(0.2..3.0),
            };
        }
        match run_protocol(&config, &(Matrix2::identity() * 0.5)) {
            Ok(out) => {
                let n = out.added_noise.matrix();
                let tr = n.trace();
                let disc = (tr * tr - 4.0 * n.determinant()).max(0.0).sqrt();
                min_eig = min_eig.min((tr - disc) / 2.0);
            }
            Err(_) => failures += 1,
        }
    }
    outcome(
        "protocol.noise_psd",
        failures == 0 && min_eig >= -tol,
        format!("{failures} failures, min noise eigenvalue = {min_eig:.3e} (floor -{tol:.3e})"),
    )
}

fn sigma_compensation(scale: f64, seed: u64) -> InvariantOutcome {
    let tol = 1e-9 * scale;
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x5C);
    let mut max_diff = 0.0f64;
    let mut accepted = 0usize;
    let mut failures = 0usize;
    while accepted < 200 {
        let r = random_symplectic4(&mut rng);
        let (y, z) = match extract_yz(&r) {
            Ok(pair) => pair,
            Err(_) => continue,
        };
        if !clearly_regular_yz(&y, &z) {
            continue;
        }
        accepted += 1;
        let g = rng.random_range(0.1..3.0);
        let shared = shared_state_qnd(g).expect("valid coupling");
        let (s_a, s_b, floor) = match optimal_local_ops(&shared, &r) {
            Ok(v) => v,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        let mut config = ProtocolConfig::qnd(g, 1.0);
        config.bell = BellInteraction::Generic { r_matrix: r };
        config.s_a = s_a;
        config.s_b = s_b;
        let out = match run_protocol(&config, &(Matrix2::identity() * 0.5)) {
            Ok(out) => out,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        let want = Matrix2::identity() * floor;
        max_diff = max_diff.max(max_abs2(&(out.added_noise.matrix() - want)));
    }
    outcome(
        "protocol.sigma_compensation",
        failures == 0 && max_diff <= tol,
        format!(
            "{failures} failures, max |noise - floor*I| = {max_diff:.3e} (tol {tol:.3e})"
        ),
    )
}

fn fidelity_identity(scale: f64, seed: u64) -> InvariantOutcome {
    let tol = 1e-12 * scale;
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0xF1);
    let mut max_diff = 0.0f64;
    for _ in 0..300 {
        let n1 = rng.random_range(0.0..2.0);
        let n2 = rng.random_range(0.0..2.0);
        let theta = rng.random_range(-PI..PI);
        let rot = make_phase(theta).expect("finite angle").into_matrix();
        let noise = rot.transpose() * Matrix2::new(n1, 0.0, 0.0, n2) * rot;
        let full = Matrix2::identity() + noise;
        let det_direct = full.determinant();
        let det_expanded = 1.0 + noise.trace() + noise.determinant();
        max_diff = max_diff.max((det_direct - det_expanded).abs());

        let v_in = Matrix2::identity() * 0.5;
        let v_out = v_in + Matrix2::new(n1, 0.0, 0.0, n2);
        let f_gauss = fidelity_gaussian(&v_in, &v_out).expect("valid state");
        let f_diag = fidelity_uncorrelated(n1, n2).expect("valid noise");
        max_diff = max_diff.max((f_gauss - f_diag).abs());
    }
    outcome(
        "metrics.fidelity_identity",
        max_diff <= tol,
        format!("max identity gap = {max_diff:.3e} (tol {tol:.3e})"),
    )
}

fn quantum_witness() -> InvariantOutcome {
    let mut min_margin = f64::INFINITY;
    let mut passed = true;
    for &g in &[0.01f64, 0.1, 0.5, 1.0, 2.0] {
        let f = fidelity_qnd(g, g + 1.0).expect("valid couplings");
        min_margin = min_margin.min(f - 0.5);
        passed &= f > 0.5;
    }
    let below = v_at_max_t(1.2).expect("valid coupling");
    let above = v_at_max_t(1.4).expect("valid coupling");
    passed &= below >= 0.25 && above < 0.25;
    outcome(
        "metrics.quantum_witness",
        passed,
        format!(
            "min fidelity margin = {min_margin:.3e}, V at max-T straddles 1/4: \
             {below:.4} vs {above:.4}"
        ),
    )
}

fn gain_optima_vs_oracle(scale: f64) -> InvariantOutcome {
    let param_tol = 1e-4 * scale;
    let value_tol = 1e-6 * scale;
    let mut max_param = 0.0f64;
    let mut max_value = 0.0f64;
    let mut failures = 0usize;

    for (g, gp, objective, closed) in [
        (
            2.5,
            1.0,
            GainObjective::MinV,
            gains_min_v(2.5, 1.0).expect("valid"),
        ),
        (
            1.0,
            1.0,
            GainObjective::MaxT,
            gains_max_t(1.0, 1.0).expect("valid"),
        ),
    ] {
        match oracle_gain_search(g, gp, objective) {
            Ok(found) => {
                let gx = found.parameters.get("G_x").expect("reported");
                let gpp = found.parameters.get("G_p").expect("reported");
                max_param = max_param
                    .max((gx - closed.0).abs())
                    .max((gpp - closed.1).abs());
                max_value = max_value.max(found.residual.unwrap_or(f64::INFINITY));
            }
            Err(_) => failures += 1,
        }
    }
    outcome(
        "optimize.gain_optima_vs_oracle",
        failures == 0 && max_param <= param_tol && max_value <= value_tol,
        format!(
            "{failures} failures, max parameter gap = {max_param:.3e} (tol {param_tol:.3e}), \
             max value residual = {max_value:.3e} (tol {value_tol:.3e})"
        ),
    )
}

fn stationarity(scale: f64) -> InvariantOutcome {
    let tol = 1e-6 * scale;
    let h = 1e-6;
    let mut max_grad = 0.0f64;

    let (g, gp) = (2.5, 1.0);
    let v_of = |gx: f64, gpp: f64| {
        let (vx, vp) = added_noise_qnd_scalar(g, gp, gx, gpp).expect("valid");
        vx * vp
    };
    let t_of = |gx: f64, gpp: f64| {
        let (vx, vp) = added_noise_qnd_scalar(g, gp, gx, gpp).expect("valid");
        gx * gx / (gx * gx + 2.0 * vx) + gpp * gpp / (gpp * gpp + 2.0 * vp)
    };
    let (gx_v, gp_v) = gains_min_v(g, gp).expect("valid");
    max_grad = max_grad
        .max(((v_of(gx_v + h, gp_v) - v_of(gx_v - h, gp_v)) / (2.0 * h)).abs())
        .max(((v_of(gx_v, gp_v + h) - v_of(gx_v, gp_v - h)) / (2.0 * h)).abs());
    let (gx_t, gp_t) = gains_max_t(g, gp).expect("valid");
    max_grad = max_grad
        .max(((t_of(gx_t + h, gp_t) - t_of(gx_t - h, gp_t)) / (2.0 * h)).abs())
        .max(((t_of(gx_t, gp_t + h) - t_of(gx_t, gp_t - h)) / (2.0 * h)).abs());

    let gp_opt = optimal_gprime(g).expect("valid");
    let t_at = |gpp: f64| t_max_value(g, gpp).expect("valid");
    max_grad = max_grad.max(((t_at(gp_opt + h) - t_at(gp_opt - h)) / (2.0 * h)).abs());

    outcome(
        "optimize.stationarity",
        max_grad <= tol,
        format!("max gradient at optima = {max_grad:.3e} (tol {tol:.3e})"),
    )
}

fn fidelity_argmax(scale: f64) -> InvariantOutcome {
    let tol = 1e-4 * scale;
    let found = optimal_gprime_fidelity(1.0).expect("valid coupling");
    let gap = (found - 4.0 / 3.0).abs();
    outcome(
        "optimize.fidelity_argmax",
        gap <= tol,
        format!("|argmax - 4/3| = {gap:.3e} (tol {tol:.3e})"),
    )
}

fn local_ops_isotropy(scale: f64) -> InvariantOutcome {
    let tol = 1e-10 * scale;
    let mut max_diff = 0.0f64;
    for &g in &[0.5, 1.0, 2.5] {
        for &gp in &[0.7, 1.0, 1.64] {
            let shared = shared_state_qnd(g).expect("valid coupling");
            let bell = BellInteraction::Qnd { g_prime: gp };
            let r = bell.to_matrix().expect("valid");
            let (s_a, s_b, floor) = optimal_local_ops(&shared, &r).expect("valid");
            let mut config = ProtocolConfig::qnd(g, gp);
            config.s_a = s_a;
            config.s_b = s_b;
            let out = run_protocol(&config, &(Matrix2::identity() * 0.5)).expect("valid");
            let want = Matrix2::identity() * floor;
            max_diff = max_diff.max(max_abs2(&(out.added_noise.matrix() - want)));
        }
    }
    outcome(
        "optimize.local_ops_isotropy",
        max_diff <= tol,
        format!("max |noise - floor*I| = {max_diff:.3e} (tol {tol:.3e})"),
    )
}

fn tms_minimality(scale: f64, seed: u64) -> InvariantOutcome {
    let slack = 1e-9 * scale;
    let family_tol = 1e-10 * scale;
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x73);
    let mut min_gap = f64::INFINITY;
    let mut max_family = 0.0f64;
    for &g in &[0.5, 1.0, 2.5] {
        let standard =
            two_mode_standard_form(&shared_state_qnd(g).expect("valid coupling")).expect("pure");
        let (a, c) = (standard.a, standard.c);
        let floor = 2.0 * (a - c);
        for _ in 0..50 {
            let s_a = random_symplectic2(&mut rng, 1.5);
            let s_b = random_symplectic2(&mut rng, 1.5);
            let noise = noise_standard_form(a, c, &s_a, &s_b).expect("valid form");
            min_gap = min_gap.min(noise - floor);
        }
        for &theta in &[0.0, 0.7, -1.3] {
            let s_a = make_phase(-theta).expect("finite angle");
            let s_b = make_phase(theta).expect("finite angle");
            let noise = noise_standard_form(a, c, &s_a, &s_b).expect("valid form");
            max_family = max_family.max((noise - floor).abs());
        }
    }
    outcome(
        "optimize.tms_minimality",
        min_gap >= -slack && max_family <= family_tol,
        format!(
            "min perturbation gap = {min_gap:.3e} (floor -{slack:.3e}), \
             max equality error on the minimizing family = {max_family:.3e}"
        ),
    )
}

/// Run the whole suite. The seed fixes every randomized draw.
pub fn run_invariants(profile: Profile, fault: Option<Fault>, seed: u64) -> Vec<InvariantOutcome> {
    let s = profile.scale();
    vec![
        constructor_condition(s, fault, seed),
        bloch_messiah_roundtrip(s, seed),
        sigma_symplecticity(s, seed),
        standard_form_pattern(s, seed),
        uncertainty_preserved(s, seed),
        bs_qnd_equivalence(s),
        scalar_vs_matrix(s),
        unity_first_moments(),
        noise_psd(s, seed),
        sigma_compensation(s, seed),
        fidelity_identity(s, seed),
        quantum_witness(),
        gain_optima_vs_oracle(s),
        stationarity(s),
        fidelity_argmax(s),
        local_ops_isotropy(s),
        tms_minimality(s, seed),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_profile_is_green() {
        let outcomes = run_invariants(Profile::Default, None, 17);
        assert_eq!(outcomes.len(), 17);
        for o in &outcomes {
            assert!(o.passed, "{}: {}", o.id, o.detail);
        }
    }

    #[test]
    fn strict_profile_is_green() {
        for o in run_invariants(Profile::Strict, None, 17) {
            assert!(o.passed, "{}: {}", o.id, o.detail);
        }
    }

    #[test]
    fn fault_injection_breaks_exactly_the_constructor_check() {
        let outcomes = run_invariants(Profile::Default, Some(Fault::SymplecticConstructor), 17);
        let broken: Vec<&str> = outcomes
            .iter()
            .filter(|o| !o.passed)
            .map(|o| o.id)
            .collect();
        assert_eq!(broken, vec!["symplectic.constructor_condition"]);
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = run_invariants(Profile::Default, None, 3);
        let b = run_invariants(Profile::Default, None, 3);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.detail, y.detail);
        }
    }

    #[test]
    fn profile_and_fault_parsing() {
        assert_eq!(Profile::parse("default"), Some(Profile::Default));
        assert_eq!(Profile::parse("STRICT"), Some(Profile::Strict));
        assert_eq!(Profile::parse("loose"), None);
        assert_eq!(
            Fault::parse("symplectic-constructor"),
            Some(Fault::SymplecticConstructor)
        );
        assert_eq!(Fault::parse("other"), None);
    }
}
