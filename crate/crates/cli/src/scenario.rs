//! Scenario documents: JSON schema and validation.

use std::path::{Path, PathBuf};

use qchar_core::constraints::{ConstraintSet, DEFAULT_MAX_K};
use qchar_core::dynamics::IdentityKind;
use qchar_core::ode::Stepper;
use qchar_core::wigner::GaussianWignerState;
use qchar_core::PolySymbol;
use serde::Deserialize;

use crate::error::CliError;
use crate::literal::parse_polynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Degrees of freedom `n`; phase space has dimension `2n`.
    pub dimension: usize,
    pub hbar: f64,
    /// Polynomial literal or one of `harmonic`, `quartic_iso`, `quartic_1d`.
    pub hamiltonian: String,
    #[serde(default)]
    pub initial_points: Vec<Vec<f64>>,
    #[serde(default)]
    pub time: Option<TimeSpec>,
    #[serde(default)]
    pub orders: Orders,
    #[serde(default)]
    pub observables: Vec<String>,
    #[serde(default)]
    pub wigner_state: Option<WignerSpec>,
    #[serde(default)]
    pub constraints: Option<Vec<String>>,
    #[serde(default)]
    pub verify: Vec<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub outputs: Outputs,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    pub t_end: f64,
    /// Fixed RK4 step; mutually exclusive with the tolerances.
    pub dt: Option<f64>,
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    /// Output times; ten equal intervals over `[0, t_end]` by default.
    pub sample_times: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Orders {
    pub tau_series: usize,
    pub hbar_order: u32,
    pub projection_max_k: usize,
}

impl Default for Orders {
    fn default() -> Self {
        Orders {
            tau_series: 6,
            hbar_order: 2,
            projection_max_k: DEFAULT_MAX_K,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WignerSpec {
    pub mean: Vec<f64>,
    pub covariance: Vec<Vec<f64>>,
    /// Gauss–Hermite nodes per axis.
    pub quadrature_degree: Option<usize>,
    /// Monte Carlo sample count; selects Monte Carlo instead of quadrature.
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default)]
    pub format: Format,
    pub path: Option<String>,
}

/// How Wigner expectations are integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integration {
    Quadrature { degree: usize },
    MonteCarlo { samples: usize },
}

/// Validated scenario with parsed symbols.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub n: usize,
    pub hbar: f64,
    pub hamiltonian: PolySymbol,
    pub hamiltonian_text: String,
    pub points: Vec<Vec<f64>>,
    pub times: Vec<f64>,
    pub stepper: Stepper,
    pub orders: Orders,
    pub observables: Vec<(String, PolySymbol)>,
    pub wigner: Option<(GaussianWignerState, Integration)>,
    pub constraints: Option<(Vec<String>, ConstraintSet)>,
    pub verify: Vec<IdentityKind>,
    pub seed: u64,
    pub format: Format,
    pub out_dir: Option<PathBuf>,
}

impl Prepared {
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// ħ used in observables: zero when the ħ² correction is switched off.
    pub fn effective_hbar(&self) -> f64 {
        if self.orders.hbar_order >= 2 {
            self.hbar
        } else {
            0.0
        }
    }
}

/// Builtin Hamiltonians summed over all degrees of freedom.
pub fn builtin_hamiltonian(name: &str, n: usize) -> Option<String> {
    let each = |f: &dyn Fn(&str, &str) -> String| -> String {
        (1..=n)
            .map(|a| {
                let (q, p) = if n == 1 { ("q".to_string(), "p".to_string()) } else { (format!("q{a}"), format!("p{a}")) };
                f(&q, &p)
            })
            .collect::<Vec<_>>()
            .join(" + ")
    };
    match name {
        "harmonic" => Some(format!("({})/2", each(&|q, p| format!("{q}^2 + {p}^2")))),
        "quartic_iso" => Some(format!("({})^2", each(&|q, p| format!("{q}^2 + {p}^2")))),
        "quartic_1d" => Some(each(&|q, p| format!("{p}^2/2 + {q}^4/4"))),
        _ => None,
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn finite(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(format!("{name} must be finite")))
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("scenario: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn prepare(&self) -> Result<Prepared, CliError> {
        let n = self.dimension;
        if n == 0 {
            return Err(invalid("dimension must be at least 1"));
        }
        let dim = 2 * n;
        if !(finite("hbar", self.hbar)? >= 0.0) {
            return Err(invalid("hbar must be non-negative"));
        }
        if self.orders.hbar_order != 0 && self.orders.hbar_order != 2 {
            return Err(invalid("orders.hbar_order must be 0 or 2"));
        }
        if self.orders.tau_series == 0 {
            return Err(invalid("orders.tau_series must be at least 1"));
        }
        let hamiltonian_text = builtin_hamiltonian(&self.hamiltonian, n).unwrap_or_else(|| self.hamiltonian.clone());
        let hamiltonian = parse_polynomial(&hamiltonian_text, n)?;
        if !hamiltonian.is_hermitian_symbol() {
            return Err(invalid("hamiltonian must have real coefficients"));
        }
        let observables = self
            .observables
            .iter()
            .map(|s| {
                let f = parse_polynomial(s, n)?;
                if !f.is_hermitian_symbol() {
                    return Err(invalid(format!("observable '{s}' must have real coefficients")));
                }
                Ok((s.clone(), f))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        for (i, x) in self.initial_points.iter().enumerate() {
            if x.len() != dim {
                return Err(invalid(format!("initial point {i} has {} entries, expected {dim}", x.len())));
            }
            for v in x {
                finite("initial point entry", *v)?;
            }
        }
        let needs_time = !self.initial_points.is_empty() || self.wigner_state.is_some();
        let (times, stepper) = match (&self.time, needs_time) {
            (Some(t), _) => t.prepare()?,
            (None, true) => return Err(invalid("time is required with initial_points or wigner_state")),
            (None, false) => (Vec::new(), Stepper::default()),
        };
        let wigner = self.wigner_state.as_ref().map(|w| w.prepare(n)).transpose()?;
        let constraints = match &self.constraints {
            None => None,
            Some(list) => {
                if list.is_empty() || list.len() % 2 != 0 {
                    return Err(invalid("constraints must be a non-empty even-length list"));
                }
                let g = list.iter().map(|s| parse_polynomial(s, n)).collect::<Result<Vec<_>, _>>()?;
                let cs = ConstraintSet::new(g).map_err(|e| invalid(format!("constraints: {e}")))?;
                Some((list.clone(), cs))
            }
        };
        let verify = self
            .verify
            .iter()
            .map(|s| IdentityKind::parse(s).ok_or_else(|| invalid(format!("unknown identity kind '{s}'"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Prepared {
            n,
            hbar: self.hbar,
            hamiltonian,
            hamiltonian_text,
            points: self.initial_points.clone(),
            times,
            stepper,
            orders: self.orders,
            observables,
            wigner,
            constraints,
            verify,
            seed: self.seed,
            format: self.outputs.format,
            out_dir: self.outputs.path.as_ref().map(PathBuf::from),
        })
    }
}

impl TimeSpec {
    fn prepare(&self) -> Result<(Vec<f64>, Stepper), CliError> {
        let t_end = finite("time.t_end", self.t_end)?;
        if t_end < 0.0 {
            return Err(invalid("time.t_end must be non-negative"));
        }
        let tolerances = self.abs_tol.is_some() || self.rel_tol.is_some();
        let stepper = match (self.dt, tolerances) {
            (Some(_), true) => return Err(invalid("give either time.dt or tolerances, not both")),
            (Some(dt), false) => {
                if !(finite("time.dt", dt)? > 0.0) {
                    return Err(invalid("time.dt must be positive"));
                }
                Stepper::Rk4 { dt }
            }
            (None, true) => {
                let Stepper::Adaptive { initial_dt, .. } = Stepper::adaptive() else {
                    unreachable!()
                };
                let abs_tol = finite("time.abs_tol", self.abs_tol.unwrap_or(1e-10))?;
                let rel_tol = finite("time.rel_tol", self.rel_tol.unwrap_or(1e-10))?;
                if !(abs_tol > 0.0 && rel_tol > 0.0) {
                    return Err(invalid("tolerances must be positive"));
                }
                Stepper::Adaptive {
                    abs_tol,
                    rel_tol,
                    initial_dt,
                }
            }
            (None, false) => Stepper::default(),
        };
        let times = match &self.sample_times {
            Some(ts) => {
                if ts.is_empty() {
                    return Err(invalid("time.sample_times must not be empty"));
                }
                for t in ts {
                    finite("sample time", *t)?;
                }
                if ts.windows(2).any(|w| w[1] < w[0]) || ts[0] < 0.0 || ts[ts.len() - 1] > t_end {
                    return Err(invalid("time.sample_times must be sorted within [0, t_end]"));
                }
                ts.clone()
            }
            None => (0..=10).map(|k| t_end * k as f64 / 10.0).collect(),
        };
        Ok((times, stepper))
    }
}

impl WignerSpec {
    fn prepare(&self, n: usize) -> Result<(GaussianWignerState, Integration), CliError> {
        let dim = 2 * n;
        if self.mean.len() != dim || self.covariance.len() != dim || self.covariance.iter().any(|r| r.len() != dim) {
            return Err(invalid(format!("wigner_state needs a {dim}-vector mean and a {dim}x{dim} covariance")));
        }
        let flat: Vec<f64> = self.covariance.iter().flatten().copied().collect();
        for v in self.mean.iter().chain(&flat) {
            finite("wigner_state entry", *v)?;
        }
        let state = GaussianWignerState::new(self.mean.clone(), flat)
            .map_err(|e| invalid(format!("wigner_state: {e}")))?;
        let integration = match (self.samples, self.quadrature_degree) {
            (Some(_), Some(_)) => return Err(invalid("give either samples or quadrature_degree, not both")),
            (Some(s), None) => {
                if s < 2 {
                    return Err(invalid("wigner_state.samples must be at least 2"));
                }
                Integration::MonteCarlo { samples: s }
            }
            (None, degree) => {
                if n > 3 {
                    Integration::MonteCarlo { samples: 1000 }
                } else {
                    let degree = degree.unwrap_or(match n {
                        1 => 20,
                        2 => 8,
                        _ => 4,
                    });
                    if degree == 0 {
                        return Err(invalid("wigner_state.quadrature_degree must be positive"));
                    }
                    Integration::Quadrature { degree }
                }
            }
        };
        Ok((state, integration))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> serde_json::Value {
        serde_json::json!({
            "dimension": 1,
            "hbar": 0.1,
            "hamiltonian": "quartic_1d",
            "initial_points": [[1.0, 0.3]],
            "time": {"t_end": 1.0, "dt": 0.01},
        })
    }

    fn prepare(v: serde_json::Value) -> Result<Prepared, CliError> {
        Scenario::from_json(&v.to_string())?.prepare()
    }

    #[test]
    fn builtins_parse() {
        for (name, n) in [("harmonic", 1), ("quartic_iso", 2), ("quartic_1d", 3)] {
            let text = builtin_hamiltonian(name, n).unwrap();
            assert!(parse_polynomial(&text, n).is_ok(), "{text}");
        }
        assert_eq!(builtin_hamiltonian("harmonic", 1).unwrap(), "(q^2 + p^2)/2");
    }

    #[test]
    fn defaults() {
        let p = prepare(base()).unwrap();
        assert_eq!(p.times.len(), 11);
        assert_eq!(p.stepper, Stepper::Rk4 { dt: 0.01 });
        assert_eq!(p.orders.tau_series, 6);
        assert_eq!(p.format, Format::Csv);
    }

    #[test]
    fn validation_errors() {
        let cases: Vec<(&str, serde_json::Value)> = vec![
            ("/hbar", serde_json::json!(-1.0)),
            ("/time/dt", serde_json::json!(0.0)),
            ("/initial_points", serde_json::json!([[1.0]])),
            ("/constraints", serde_json::json!(["q"])),
            ("/verify", serde_json::json!(["nonsense"])),
            ("/hamiltonian", serde_json::json!("i*q")),
            ("/orders", serde_json::json!({"hbar_order": 1})),
            (
                "/wigner_state",
                serde_json::json!({"mean": [0.0, 0.0], "covariance": [[1.0, 2.0], [2.0, 1.0]]}),
            ),
        ];
        for (ptr, v) in cases {
            let mut doc = base();
            let parent = ptr.rsplit_once('/').unwrap();
            let target = if parent.0.is_empty() { &mut doc } else { doc.pointer_mut(parent.0).unwrap() };
            target[parent.1] = v;
            assert!(matches!(prepare(doc), Err(CliError::Validation(_))), "{ptr}");
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Scenario::from_json("{"), Err(CliError::Parse(_))));
        let mut doc = base();
        doc["unexpected"] = serde_json::json!(1);
        assert!(matches!(prepare(doc), Err(CliError::Parse(_))));
        let mut doc = base();
        doc["hamiltonian"] = serde_json::json!("q +");
        assert!(matches!(prepare(doc), Err(CliError::Parse(_))));
    }
}
