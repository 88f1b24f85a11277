//! Grid sweeps over the protocol parameters, emitted as CSV or JSON with
//! identical numeric values in both formats.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{self, RegimeFlags};
use crate::optimize::{gains_max_t, gains_min_v, improved_squeezers, optimal_local_ops};
use crate::protocol::{shared_state_qnd, BellInteraction, GainPolicy, ProtocolConfig};

/// Gain policy choices for a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GainSelector {
    Unity,
    /// Closed-form gains minimizing the conditional-variance product.
    #[serde(rename = "minv")]
    MinV,
    /// Closed-form gains maximizing the signal transfer.
    #[serde(rename = "maxt")]
    MaxT,
    Scalar { g_x: f64, g_p: f64 },
}

/// Local-operation choices for a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LocalOpsSelector {
    None,
    /// Squeezers balancing the two added-noise quadratures.
    Improved,
    /// Noise-minimizing operations built from the two-mode standard form.
    #[serde(rename = "optimal_general", alias = "optimal")]
    OptimalGeneral,
}

/// How the Bell-stage coupling of strength g' is realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BellSelector {
    #[default]
    Qnd,
    /// Beam splitter with T = 1/sqrt(1 + g'^2), R = g' T.
    Bs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// A sweep request: grids over g, g', gain policy, and local-op policy,
/// evaluated lexicographically in that order.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub g: Vec<f64>,
    pub g_prime: Vec<f64>,
    #[serde(default = "default_gains")]
    pub gains: Vec<GainSelector>,
    #[serde(default = "default_local_ops")]
    pub local_ops: Vec<LocalOpsSelector>,
    #[serde(default)]
    pub bell: BellSelector,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn default_gains() -> Vec<GainSelector> {
    vec![GainSelector::Unity]
}

fn default_local_ops() -> Vec<LocalOpsSelector> {
    vec![LocalOpsSelector::None]
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.g.is_empty()
            || self.g_prime.is_empty()
            || self.gains.is_empty()
            || self.local_ops.is_empty()
        {
            return Err(Error::InvalidArgument(
                "sweep grids must be non-empty".into(),
            ));
        }
        for &g in &self.g {
            if !g.is_finite() || g < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "grid value g = {g} must be finite and >= 0"
                )));
            }
        }
        for &gp in &self.g_prime {
            if !gp.is_finite() || gp <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "grid value g' = {gp} must be finite and > 0"
                )));
            }
        }
        let needs_coupling = self
            .gains
            .iter()
            .any(|s| matches!(s, GainSelector::MinV | GainSelector::MaxT));
        if needs_coupling && self.g.contains(&0.0) {
            return Err(Error::InvalidArgument(
                "minv/maxt gains need g > 0 on the whole grid".into(),
            ));
        }
        for sel in &self.gains {
            if let GainSelector::Scalar { g_x, g_p } = sel {
                if !g_x.is_finite() || !g_p.is_finite() || *g_x == 0.0 || *g_p == 0.0 {
                    return Err(Error::InvalidArgument(
                        "scalar gains must be finite and nonzero".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub g: f64,
    pub g_prime: f64,
    #[serde(rename = "Gx")]
    pub gx: f64,
    #[serde(rename = "Gp")]
    pub gp: f64,
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "N")]
    pub n: f64,
    pub flags: RegimeFlags,
}

fn bell_interaction(bell: BellSelector, g_prime: f64) -> BellInteraction {
    match bell {
        BellSelector::Qnd => BellInteraction::Qnd { g_prime },
        BellSelector::Bs => {
            let t = 1.0 / (1.0 + g_prime * g_prime).sqrt();
            BellInteraction::BeamSplitter { t, r: g_prime * t }
        }
    }
}

fn grid_config(
    g: f64,
    g_prime: f64,
    bell: BellSelector,
    gains: GainSelector,
    local_ops: LocalOpsSelector,
) -> Result<(ProtocolConfig, f64, f64)> {
    let mut config = ProtocolConfig::qnd(g, g_prime);
    config.bell = bell_interaction(bell, g_prime);

    match local_ops {
        LocalOpsSelector::None => {}
        LocalOpsSelector::Improved => {
            let (s_a, s_b) = improved_squeezers(g, g_prime)?;
            config.s_a = s_a;
            config.s_b = s_b;
        }
        LocalOpsSelector::OptimalGeneral => {
            let shared = shared_state_qnd(g)?;
            let r = config.bell.to_matrix()?;
            let (s_a, s_b, _) = optimal_local_ops(&shared, &r)?;
            config.s_a = s_a;
            config.s_b = s_b;
        }
    }

    let (gx, gp) = match gains {
        GainSelector::Unity => (1.0, 1.0),
        GainSelector::MinV => gains_min_v(g, g_prime)?,
        GainSelector::MaxT => gains_max_t(g, g_prime)?,
        GainSelector::Scalar { g_x, g_p } => (g_x, g_p),
    };
    config.gains = match gains {
        GainSelector::Unity => GainPolicy::Unity,
        _ => GainPolicy::Scalar { g_x: gx, g_p: gp },
    };
    Ok((config, gx, gp))
}

fn evaluate_point(
    g: f64,
    g_prime: f64,
    bell: BellSelector,
    gains: GainSelector,
    local_ops: LocalOpsSelector,
) -> Result<SweepRow> {
    let (config, gx, gp) = grid_config(g, g_prime, bell, gains, local_ops)?;
    let report = metrics::evaluate(&config)?;
    Ok(SweepRow {
        g,
        g_prime,
        gx,
        gp,
        v: report.v,
        t: report.t,
        f: report.f,
        n: report.n_photon,
        flags: report.flags,
    })
}

/// Evaluate the full grid in lexicographic order
/// (g, then g', then gains, then local ops).
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let mut rows =
        Vec::with_capacity(spec.g.len() * spec.g_prime.len() * spec.gains.len() * spec.local_ops.len());
    for &g in &spec.g {
        for &g_prime in &spec.g_prime {
            for &gains in &spec.gains {
                for &local_ops in &spec.local_ops {
                    rows.push(evaluate_point(g, g_prime, spec.bell, gains, local_ops)?);
                }
            }
        }
    }
    Ok(rows)
}

/// Evaluate a single explicit configuration as one row.
pub fn row_from_config(config: &ProtocolConfig) -> Result<SweepRow> {
    let g_prime = match &config.bell {
        BellInteraction::Qnd { g_prime } => *g_prime,
        BellInteraction::BeamSplitter { t, r } => r / t,
        BellInteraction::Generic { .. } => {
            return Err(Error::InvalidArgument(
                "a single-config row needs a qnd or beam_splitter interaction".into(),
            ))
        }
    };
    let report = metrics::evaluate(config)?;
    let (gx, gp) = match &config.gains {
        GainPolicy::Unity => (1.0, 1.0),
        GainPolicy::Scalar { g_x, g_p } => (*g_x, *g_p),
        GainPolicy::MatrixGain { g } => (g[(0, 0)], g[(1, 1)]),
    };
    Ok(SweepRow {
        g: config.g,
        g_prime,
        gx,
        gp,
        v: report.v,
        t: report.t,
        f: report.f,
        n: report.n_photon,
        flags: report.flags,
    })
}

fn flags_code(flags: &RegimeFlags) -> String {
    let sign = |b: bool| if b { '+' } else { '-' };
    format!(
        "V{}T{}F{}",
        sign(flags.quantum_v),
        sign(flags.quantum_t),
        sign(flags.quantum_f)
    )
}

/// CSV with a fixed header; floats use shortest round-trip formatting so the
/// values match the JSON output exactly.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("g,g_prime,Gx,Gp,V,T,F,N,flags\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.g,
            r.g_prime,
            r.gx,
            r.gp,
            r.v,
            r.t,
            r.f,
            r.n,
            flags_code(&r.flags)
        )
        .expect("string writes cannot fail");
    }
    out
}

pub fn to_json(rows: &[SweepRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("sweep rows serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use crate::metrics::fidelity_qnd;

    fn base_spec() -> SweepSpec {
        SweepSpec {
            g: vec![1.0],
            g_prime: vec![1.0, 4.0 / 3.0],
            gains: vec![GainSelector::Unity],
            local_ops: vec![LocalOpsSelector::None],
            bell: BellSelector::Qnd,
            format: OutputFormat::Csv,
            out: None,
        }
    }

    #[test]
    fn unity_rows_match_closed_form_fidelity() {
        let rows = run_sweep(&base_spec()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_abs_diff_eq!(rows[0].f, 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rows[1].f, 2.0 * 6.0f64.sqrt() / 7.0, epsilon = 1e-12);
        for row in &rows {
            assert_abs_diff_eq!(
                row.f,
                fidelity_qnd(row.g, row.g_prime).unwrap(),
                epsilon = 1e-12
            );
            assert_eq!(row.gx, 1.0);
            assert_eq!(row.gp, 1.0);
            assert!(row.flags.quantum_f);
        }
    }

    #[test]
    fn lexicographic_order() {
        let mut spec = base_spec();
        spec.g = vec![0.5, 1.0];
        spec.gains = vec![GainSelector::MinV, GainSelector::MaxT];
        spec.local_ops = vec![LocalOpsSelector::None, LocalOpsSelector::Improved];
        let rows = run_sweep(&spec).unwrap();
        assert_eq!(rows.len(), 16);
        assert_eq!((rows[0].g, rows[0].g_prime), (0.5, 1.0));
        assert_eq!((rows[7].g, rows[7].g_prime), (0.5, 4.0 / 3.0));
        assert_eq!((rows[8].g, rows[8].g_prime), (1.0, 1.0));
        let (gx, _) = gains_min_v(0.5, 1.0).unwrap();
        assert_eq!(rows[0].gx, gx);
        assert_eq!(rows[0].gx, rows[1].gx);
        let (gx_t, _) = gains_max_t(0.5, 1.0).unwrap();
        assert_eq!(rows[2].gx, gx_t);
    }

    #[test]
    fn beam_splitter_bell_matches_qnd() {
        let mut qnd = base_spec();
        qnd.g = vec![0.5, 2.5];
        let mut bs = qnd.clone();
        bs.bell = BellSelector::Bs;
        let a = run_sweep(&qnd).unwrap();
        let b = run_sweep(&bs).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_abs_diff_eq!(x.v, y.v, epsilon = 1e-12);
            assert_abs_diff_eq!(x.t, y.t, epsilon = 1e-12);
            assert_abs_diff_eq!(x.f, y.f, epsilon = 1e-12);
            assert_abs_diff_eq!(x.n, y.n, epsilon = 1e-12);
        }
    }

    #[test]
    fn local_ops_reach_the_noise_minimum() {
        let mut spec = base_spec();
        spec.g = vec![1.0];
        spec.g_prime = vec![4.0 / 3.0];
        spec.local_ops = vec![LocalOpsSelector::Improved, LocalOpsSelector::OptimalGeneral];
        let rows = run_sweep(&spec).unwrap();
        let floor = 2.0f64.sqrt() - 1.0;
        for row in &rows {
            assert_abs_diff_eq!(row.n, floor, epsilon = 1e-12);
            assert_abs_diff_eq!(row.f, 1.0 / 2.0f64.sqrt(), epsilon = 1e-12);
        }
    }

    #[test]
    fn empty_grid_rejected() {
        let mut spec = base_spec();
        spec.g_prime.clear();
        assert!(run_sweep(&spec).is_err());
    }

    #[test]
    fn zero_g_with_minv_rejected() {
        let mut spec = base_spec();
        spec.g = vec![0.0];
        spec.gains = vec![GainSelector::MinV];
        assert!(run_sweep(&spec).is_err());
    }

    #[test]
    fn csv_and_json_carry_identical_values() {
        let rows = run_sweep(&base_spec()).unwrap();
        let csv = to_csv(&rows);
        let json: serde_json::Value = serde_json::from_str(&to_json(&rows)).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "g,g_prime,Gx,Gp,V,T,F,N,flags");
        for (i, line) in lines.enumerate() {
            let cells: Vec<&str> = line.split(',').collect();
            assert_eq!(cells.len(), 9);
            for (j, key) in ["g", "g_prime", "Gx", "Gp", "V", "T", "F", "N"]
                .iter()
                .enumerate()
            {
                let from_csv: f64 = cells[j].parse().unwrap();
                let from_json = json[i][*key].as_f64().unwrap();
                assert_eq!(from_csv.to_bits(), from_json.to_bits());
            }
            assert!(cells[8].starts_with('V'));
        }
    }

    #[test]
    fn spec_json_accepts_the_optimal_alias() {
        let text = r#"{
            "g": [1.0],
            "g_prime": [1.0],
            "local_ops": [{"kind": "optimal"}],
            "format": "json"
        }"#;
        let spec: SweepSpec = serde_json::from_str(text).unwrap();
        assert_eq!(spec.local_ops, vec![LocalOpsSelector::OptimalGeneral]);
        assert_eq!(spec.gains, vec![GainSelector::Unity]);
        assert_eq!(spec.format, OutputFormat::Json);
        assert_eq!(spec.bell, BellSelector::Qnd);
        run_sweep(&spec).unwrap();
    }

    #[test]
    fn single_config_row() {
        let config = ProtocolConfig::qnd(1.0, 4.0 / 3.0);
        let row = row_from_config(&config).unwrap();
        assert_abs_diff_eq!(row.f, 2.0 * 6.0f64.sqrt() / 7.0, epsilon = 1e-12);
        assert_eq!(row.g_prime, 4.0 / 3.0);
    }
}
