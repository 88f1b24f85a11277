//! Central numeric tolerances.
//!
//! Every comparison threshold used by the library and its invariant suite
//! lives here so the `check` command can scale them uniformly.
//!
//! | constant                  | guards                                              |
//! |---------------------------|-----------------------------------------------------|
//! | `SYMPLECTIC`              | S J St = J entrywise, constructor validation        |
//! | `SIGMA_SYMPLECTIC`        | symplecticity of the derived gain-compensation map  |
//! | `BLOCH_MESSIAH_ROUNDTRIP` | P(alpha) S(r) P(beta) reconstruction error          |
//! | `STANDARD_FORM_PATTERN`   | reduced two-mode covariance vs the target pattern   |
//! | `STANDARD_FORM_PURITY`    | det V vs the pure-state value 1/16                  |
//! | `UNCERTAINTY`             | min eigenvalue of V + (i/2) Omega                   |
//! | `PURITY_CLAMP`            | rounding allowance below det = 1/4 in `purity`      |
//! | `Y_REGULARITY`            | relative regularity floor for the measured block    |
//! | `PIPELINE_AGREEMENT`      | scalar vs matrix noise paths, BS vs QND equivalence |
//! | `CLOSED_FORM`             | pipeline values vs exact closed forms               |
//! | `GOLDEN_SECTION`          | bracket width of the 1-D derivative-free search     |
//! | `ORACLE_PARAM`            | closed-form optimum vs oracle, parameter residual   |
//! | `ORACLE_OBJECTIVE`        | closed-form optimum vs oracle, objective residual   |
//! | `LOCAL_OPS_ORACLE`        | 6-parameter noise search vs the exact minimum       |
//! | `STATIONARITY`            | central finite differences at closed-form optima    |

pub const SYMPLECTIC: f64 = 1e-12;
pub const SIGMA_SYMPLECTIC: f64 = 1e-10;
pub const BLOCH_MESSIAH_ROUNDTRIP: f64 = 1e-10;
pub const STANDARD_FORM_PATTERN: f64 = 1e-8;
pub const STANDARD_FORM_PURITY: f64 = 1e-8;
pub const UNCERTAINTY: f64 = 1e-10;
pub const PURITY_CLAMP: f64 = 1e-12;
pub const Y_REGULARITY: f64 = 1e-10;
pub const PIPELINE_AGREEMENT: f64 = 1e-12;
pub const CLOSED_FORM: f64 = 1e-10;
pub const GOLDEN_SECTION: f64 = 1e-8;
pub const ORACLE_PARAM: f64 = 1e-4;
pub const ORACLE_OBJECTIVE: f64 = 1e-6;
pub const LOCAL_OPS_ORACLE: f64 = 1e-5;
pub const STATIONARITY: f64 = 1e-6;

/// Step used by the central finite differences in the stationarity checks.
pub const FD_STEP: f64 = 1e-5;
