//! Figures of merit for a teleportation run: conditional-variance product V,
//! signal transfer T, fidelity F, and photon noise N.
//!
//! Quantum-regime thresholds: V < 1/4 (conditional variances below the
//! classical bound), T > 1 (more signal transferred than any classical
//! measure-and-resend strategy), F > 1/2 (better than the best classical
//! fidelity for coherent states).

use nalgebra::Matrix2;
use serde::Serialize;

use crate::error::{ensure_finite, Error, Result};
use crate::protocol::{run_protocol, AddedNoiseMatrix, ProtocolConfig};

fn ensure_nonneg(name: &str, value: f64) -> Result<()> {
    ensure_finite(name, value)?;
    if value < 0.0 {
        return Err(Error::InvalidArgument(format!("{name} must be >= 0, got {value}")));
    }
    Ok(())
}

/// Product of the conditional variances, V = varX * varP. Zero means
/// teleportation with no added noise; 1/4 is the classical boundary.
pub fn cond_var_product(var_x: f64, var_p: f64) -> Result<f64> {
    ensure_nonneg("added variance varX", var_x)?;
    ensure_nonneg("added variance varP", var_p)?;
    Ok(var_x * var_p)
}

/// Signal transfer coefficient,
/// T = G_x^2/(G_x^2 + 2 varX) + G_p^2/(G_p^2 + 2 varP).
///
/// T sums the output/input signal-to-noise ratios of both quadratures; 2 is
/// perfect transfer, above 1 beats classical strategies. Zero gains leave the
/// ratios undefined.
pub fn signal_transfer(g_x: f64, g_p: f64, var_x: f64, var_p: f64) -> Result<f64> {
    ensure_finite("gain G_x", g_x)?;
    ensure_finite("gain G_p", g_p)?;
    ensure_nonneg("added variance varX", var_x)?;
    ensure_nonneg("added variance varP", var_p)?;
    if g_x == 0.0 || g_p == 0.0 {
        return Err(Error::InvalidArgument(
            "signal transfer is undefined at zero gain".into(),
        ));
    }
    let tx = g_x * g_x / (g_x * g_x + 2.0 * var_x);
    let tp = g_p * g_p / (g_p * g_p + 2.0 * var_p);
    Ok(tx + tp)
}

/// Coherent-state fidelity when the added noises are uncorrelated between
/// the quadratures: F = 1/sqrt((1 + varX)(1 + varP)).
pub fn fidelity_uncorrelated(var_x: f64, var_p: f64) -> Result<f64> {
    ensure_nonneg("added variance varX", var_x)?;
    ensure_nonneg("added variance varP", var_p)?;
    Ok(1.0 / ((1.0 + var_x) * (1.0 + var_p)).sqrt())
}

/// Fidelity between Gaussian states with equal first moments,
/// F = 1/sqrt(det(V_out + V_in)).
///
/// Unity gains keep the output first moments equal to the input ones; under
/// other gain settings this value is the fidelity at zero input amplitude.
pub fn fidelity_gaussian(v_in: &Matrix2<f64>, v_out: &Matrix2<f64>) -> Result<f64> {
    let sum = v_in + v_out;
    let det = sum.determinant();
    if det <= 0.0 || sum.trace() <= 0.0 || !det.is_finite() {
        return Err(Error::InvalidState(format!(
            "V_out + V_in must be positive definite (det = {det:.6e})"
        )));
    }
    Ok(1.0 / det.sqrt())
}

/// Photon noise N = Tr N, the mean photon number added to the teleported
/// state. Half the trace of the stored 2N matrix.
pub fn photon_noise(n: &AddedNoiseMatrix) -> f64 {
    n.matrix().trace() / 2.0
}

/// Coherent-state fidelity of the all-QND scheme at unity gains,
/// F = 2/sqrt((2 + 1/g'^2 + (g/g' - 1)^2)(3 + (g - g')^2)).
pub fn fidelity_qnd(g: f64, g_prime: f64) -> Result<f64> {
    ensure_nonneg("entangling strength g", g)?;
    ensure_finite("Bell interaction strength g'", g_prime)?;
    if g_prime <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "Bell-stage QND strength must be > 0, got {g_prime}"
        )));
    }
    let dp = g / g_prime - 1.0;
    let dx = g - g_prime;
    let fp = 2.0 + 1.0 / (g_prime * g_prime) + dp * dp;
    let fx = 3.0 + dx * dx;
    Ok(2.0 / (fp * fx).sqrt())
}

/// Fidelity of the scheme where the Bell strength is locked to the entangling
/// strength, F_HK = 2/sqrt(3(2 + 1/g^2)). Increasing in g with limit
/// sqrt(2/3); exceeds 1/2 only for g > sqrt(3/10).
pub fn hk_fidelity(g: f64) -> Result<f64> {
    ensure_finite("entangling strength g", g)?;
    if g <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "entangling strength must be > 0, got {g}"
        )));
    }
    Ok(2.0 / (3.0 * (2.0 + 1.0 / (g * g))).sqrt())
}

/// Which classical bounds a run beats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegimeFlags {
    /// V < 1/4.
    pub quantum_v: bool,
    /// T > 1.
    pub quantum_t: bool,
    /// F > 1/2.
    pub quantum_f: bool,
}

impl RegimeFlags {
    /// The two-threshold criterion: V < 1/4 and T > 1 simultaneously.
    pub fn combined(&self) -> bool {
        self.quantum_v && self.quantum_t
    }
}

/// All figures of merit of one run.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MetricsReport {
    pub v: f64,
    pub t: f64,
    pub f: f64,
    pub n_photon: f64,
    pub flags: RegimeFlags,
}

/// Evaluate every figure of merit for a configuration with coherent input
/// (V_in = I/2).
///
/// The signal-transfer gains are read off the first-moment map, which must be
/// diagonal; a non-diagonal gain matrix mixes the quadratures and has no
/// per-quadrature signal-to-noise split.
pub fn evaluate(config: &ProtocolConfig) -> Result<MetricsReport> {
    let v_in = Matrix2::identity() * 0.5;
    let out = run_protocol(config, &v_in)?;

    let fm = out.first_moment_map;
    if fm[(0, 1)].abs() > 1e-12 || fm[(1, 0)].abs() > 1e-12 {
        return Err(Error::InvalidArgument(
            "metrics need a diagonal gain matrix; non-diagonal gains mix the quadratures".into(),
        ));
    }

    let var_x = out.added_noise.var_x();
    let var_p = out.added_noise.var_p();
    let v = cond_var_product(var_x, var_p)?;
    let t = signal_transfer(fm[(0, 0)], fm[(1, 1)], var_x, var_p)?;
    let f = fidelity_gaussian(&v_in, &out.v_out)?;
    let n_photon = photon_noise(&out.added_noise);

    Ok(MetricsReport {
        v,
        t,
        f,
        n_photon,
        flags: RegimeFlags {
            quantum_v: v < 0.25,
            quantum_t: t > 1.0,
            quantum_f: f > 0.5,
        },
    })
}
