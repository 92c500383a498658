//! TOML run configuration: parsing, validation with invariant-naming
//! errors, explicit defaults with provenance notes, and a serializer whose
//! output reloads to an identical configuration.
//!
//! Every field is optional in the file; a missing field takes the
//! documented default and the load reports that in a note, so output files
//! can state exactly which values were assumed.

use crate::drive::DriveSpec;
use crate::lattice::ChainGeometry;
use crate::specfun::{QuadratureRule, QuadratureSettings};
use crate::sweep::{AssemblyMethod, DetectionSettings, PopulationDefinition, SweepOptions};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("configuration parse error: {0}")]
    Parse(String),
    #[error("configuration invalid: {0}")]
    Validation(String),
}

/// A validated run configuration. The drive template carries zero
/// coupling; sweeps substitute each grid value.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub geometry: ChainGeometry,
    pub drive_template: DriveSpec,
    /// Quadrature window center in units of the base period (numeric
    /// method; only the Gaussian pulse is sensitive to it).
    pub window_center: f64,
    pub g_min: f64,
    pub g_max: f64,
    /// Number of grid intervals; the grid has g_steps + 1 points.
    pub g_steps: usize,
    pub m_max: usize,
    pub method: AssemblyMethod,
    pub quadrature: QuadratureSettings,
    pub population: PopulationDefinition,
    pub fold: bool,
    pub detection: DetectionSettings,
    pub output_path: String,
    pub output_format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
}

/// A parsed configuration plus one note per defaulted field.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub default_notes: Vec<String>,
}

impl RunConfig {
    /// The coupling grid: g_steps equal intervals from g_min to g_max,
    /// endpoints exact.
    pub fn grid(&self) -> Vec<f64> {
        if self.g_steps == 0 {
            return vec![self.g_min];
        }
        let span = self.g_max - self.g_min;
        let mut grid: Vec<f64> = (0..=self.g_steps)
            .map(|i| self.g_min + span * i as f64 / self.g_steps as f64)
            .collect();
        *grid.last_mut().expect("nonempty") = self.g_max;
        grid
    }

    /// Sweep options implied by this configuration.
    pub fn sweep_options(&self) -> SweepOptions {
        SweepOptions {
            population: self.population,
            n_edge_cells: self.detection.n_edge_cells,
            window_center: self.window_center * self.drive_template.base_period(),
            fold: self.fold,
        }
    }
}

impl Default for RunConfig {
    /// The reference setup: topological chain (v/w = 0.3, r = 0) of 20
    /// dimers, monochromatic drive at W = 10 w, 20 replicas, couplings
    /// 0..=8 in 400 steps.
    fn default() -> Self {
        load_config("").expect("empty document loads defaults").config
    }
}

// ---------------------------------------------------------------------
// Raw (serde) layer: every field optional, unknown keys rejected.
// ---------------------------------------------------------------------

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    geometry: Option<RawGeometry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    drive: Option<RawDrive>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep: Option<RawSweep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    floquet: Option<RawFloquet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detection: Option<RawDetection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<RawOutput>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeometry {
    #[serde(skip_serializing_if = "Option::is_none")]
    n_dimers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    v: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    w: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDrive {
    #[serde(skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    omega: Option<f64>,
    /// Gaussian width ratio c = W/Gamma; required when kind = "gaussian".
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
    /// Beating envelope frequency; required when kind = "beating".
    #[serde(skip_serializing_if = "Option::is_none")]
    omega_env: Option<f64>,
    /// Quadrature window center in units of the base period.
    #[serde(skip_serializing_if = "Option::is_none")]
    window_center: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    #[serde(skip_serializing_if = "Option::is_none")]
    g_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    g_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    g_steps: Option<usize>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFloquet {
    #[serde(skip_serializing_if = "Option::is_none")]
    m_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples_per_period: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    population: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fold: Option<bool>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDetection {
    #[serde(skip_serializing_if = "Option::is_none")]
    energy_window: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weight_threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_edge_cells: Option<usize>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    format: Option<String>,
}

/// Take a field or its default, noting the default in `notes`.
fn take<T: Copy + std::fmt::Display>(
    field: Option<T>,
    default: T,
    name: &str,
    notes: &mut Vec<String>,
) -> T {
    match field {
        Some(value) => value,
        None => {
            notes.push(format!("{name} defaulted to {default}"));
            default
        }
    }
}

fn invalid(message: impl Into<String>) -> ConfigError {
    ConfigError::Validation(message.into())
}

/// Parse and validate a configuration document. Missing fields take the
/// documented defaults; each applied default is reported in the returned
/// notes. Unknown keys are rejected by the parser.
pub fn load_config(text: &str) -> Result<LoadedConfig, ConfigError> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    let mut notes = Vec::new();

    let raw_geometry = raw.geometry.unwrap_or_default();
    let n_dimers = take(raw_geometry.n_dimers, 20, "geometry.n_dimers", &mut notes);
    let v = take(raw_geometry.v, 0.3, "geometry.v", &mut notes);
    let w = take(raw_geometry.w, 1.0, "geometry.w", &mut notes);
    let r = take(raw_geometry.r, 0.0, "geometry.r", &mut notes);
    let geometry = ChainGeometry::new(n_dimers, v, w, r)
        .map_err(|e| invalid(format!("geometry: {e}")))?;

    let raw_drive = raw.drive.unwrap_or_default();
    let kind = match raw_drive.kind {
        Some(k) => k,
        None => {
            notes.push("drive.kind defaulted to monochromatic".to_string());
            "monochromatic".to_string()
        }
    };
    let omega = take(raw_drive.omega, 10.0, "drive.omega", &mut notes);
    let drive_template = match kind.as_str() {
        "monochromatic" => {
            if raw_drive.c.is_some() {
                return Err(invalid("drive.c is only meaningful for kind = \"gaussian\""));
            }
            if raw_drive.omega_env.is_some() {
                return Err(invalid(
                    "drive.omega_env is only meaningful for kind = \"beating\"",
                ));
            }
            DriveSpec::monochromatic(0.0, omega)
        }
        "gaussian" => {
            if raw_drive.omega_env.is_some() {
                return Err(invalid(
                    "drive.omega_env is only meaningful for kind = \"beating\"",
                ));
            }
            let c = raw_drive
                .c
                .ok_or_else(|| invalid("drive.kind = \"gaussian\" requires drive.c (= W/Gamma)"))?;
            DriveSpec::gaussian(0.0, omega, c)
        }
        "beating" => {
            if raw_drive.c.is_some() {
                return Err(invalid("drive.c is only meaningful for kind = \"gaussian\""));
            }
            let omega_env = raw_drive.omega_env.ok_or_else(|| {
                invalid("drive.kind = \"beating\" requires drive.omega_env (envelope frequency)")
            })?;
            DriveSpec::beating(0.0, omega, omega_env)
        }
        other => {
            return Err(invalid(format!(
                "drive.kind must be one of \"monochromatic\", \"gaussian\", \"beating\"; got \"{other}\""
            )))
        }
    }
    .map_err(|e| invalid(format!("drive: {e}")))?;
    let window_center = take(raw_drive.window_center, 0.0, "drive.window_center", &mut notes);
    if !window_center.is_finite() {
        return Err(invalid("drive.window_center must be finite"));
    }

    let raw_sweep = raw.sweep.unwrap_or_default();
    let g_min = take(raw_sweep.g_min, 0.0, "sweep.g_min", &mut notes);
    let g_max = take(raw_sweep.g_max, 8.0, "sweep.g_max", &mut notes);
    let g_steps = take(raw_sweep.g_steps, 400, "sweep.g_steps", &mut notes);
    if !(g_min >= 0.0) || !g_min.is_finite() {
        return Err(invalid(format!(
            "sweep.g_min must satisfy g >= 0 and be finite, got {g_min}"
        )));
    }
    if !(g_max >= g_min) || !g_max.is_finite() {
        return Err(invalid(format!(
            "sweep.g_max must satisfy g_max >= g_min, got {g_max} < {g_min}"
        )));
    }
    if g_steps == 0 && g_max != g_min {
        return Err(invalid(
            "sweep.g_steps = 0 requires g_min = g_max (single-point grid)",
        ));
    }
    if g_steps > 0 && g_max == g_min {
        return Err(invalid(
            "sweep.g_steps > 0 requires g_max > g_min (ascending grid)",
        ));
    }

    let raw_floquet = raw.floquet.unwrap_or_default();
    let m_max = take(raw_floquet.m_max, 20, "floquet.m_max", &mut notes);
    let method_name = match raw_floquet.method {
        Some(m) => m,
        None => {
            notes.push("floquet.method defaulted to analytic".to_string());
            "analytic".to_string()
        }
    };
    let method = match method_name.as_str() {
        "analytic" => AssemblyMethod::Analytic,
        "numeric" => AssemblyMethod::Numeric,
        other => {
            return Err(invalid(format!(
                "floquet.method must be \"analytic\" or \"numeric\", got \"{other}\""
            )))
        }
    };
    if method == AssemblyMethod::Analytic
        && matches!(drive_template.kind(), crate::drive::DriveKind::Gaussian { .. })
    {
        return Err(invalid(
            "the Gaussian drive has no analytic assembly; set floquet.method = \"numeric\"",
        ));
    }
    let samples =
        take(raw_floquet.samples_per_period, 1024, "floquet.samples_per_period", &mut notes);
    let rule_name = match raw_floquet.rule {
        Some(r) => r,
        None => {
            notes.push("floquet.rule defaulted to simpson".to_string());
            "simpson".to_string()
        }
    };
    let rule = match rule_name.as_str() {
        "simpson" => QuadratureRule::Simpson,
        "trapezoid" => QuadratureRule::Trapezoid,
        other => {
            return Err(invalid(format!(
                "floquet.rule must be \"simpson\" or \"trapezoid\", got \"{other}\""
            )))
        }
    };
    let quadrature = QuadratureSettings::new(samples, rule)
        .map_err(|e| invalid(format!("floquet quadrature: {e}")))?;
    let population_name = match raw_floquet.population {
        Some(p) => p,
        None => {
            notes.push("floquet.population defaulted to central".to_string());
            "central".to_string()
        }
    };
    let population = match population_name.as_str() {
        "central" => PopulationDefinition::Central,
        "max" => PopulationDefinition::Max,
        other => {
            return Err(invalid(format!(
                "floquet.population must be \"central\" or \"max\", got \"{other}\""
            )))
        }
    };
    let fold = take(raw_floquet.fold, true, "floquet.fold", &mut notes);

    let raw_detection = raw.detection.unwrap_or_default();
    let energy_window =
        take(raw_detection.energy_window, 0.05, "detection.energy_window", &mut notes);
    let weight_threshold = take(
        raw_detection.weight_threshold,
        0.6,
        "detection.weight_threshold",
        &mut notes,
    );
    let n_edge_cells =
        take(raw_detection.n_edge_cells, 2, "detection.n_edge_cells", &mut notes);
    if !(energy_window > 0.0) || !energy_window.is_finite() {
        return Err(invalid(format!(
            "detection.energy_window must be positive, got {energy_window}"
        )));
    }
    if !(weight_threshold > 0.0 && weight_threshold < 1.0) {
        return Err(invalid(format!(
            "detection.weight_threshold must lie strictly between 0 and 1, got {weight_threshold}"
        )));
    }
    if n_edge_cells < 1 || n_edge_cells > geometry.n_dimers() / 2 {
        return Err(invalid(format!(
            "detection.n_edge_cells must lie in 1..={} for {} dimers, got {n_edge_cells}",
            geometry.n_dimers() / 2,
            geometry.n_dimers()
        )));
    }
    let detection = DetectionSettings { energy_window, weight_threshold, n_edge_cells };

    let raw_output = raw.output.unwrap_or_default();
    let output_path = match raw_output.path {
        Some(p) => p,
        None => {
            notes.push("output.path defaulted to spectrum.csv".to_string());
            "spectrum.csv".to_string()
        }
    };
    let output_format = match raw_output.format {
        Some(f) => match f.as_str() {
            "csv" => OutputFormat::Csv,
            other => {
                return Err(invalid(format!(
                    "output.format must be \"csv\", got \"{other}\""
                )))
            }
        },
        None => {
            notes.push("output.format defaulted to csv".to_string());
            OutputFormat::Csv
        }
    };

    Ok(LoadedConfig {
        config: RunConfig {
            geometry,
            drive_template,
            window_center,
            g_min,
            g_max,
            g_steps,
            m_max,
            method,
            quadrature,
            population,
            fold,
            detection,
            output_path,
            output_format,
        },
        default_notes: notes,
    })
}

/// Serialize a configuration with every field explicit; reloading the
/// output yields an identical configuration and no default notes.
pub fn serialize_config(config: &RunConfig) -> String {
    use crate::drive::DriveKind;
    let (kind, c, omega_env) = match config.drive_template.kind() {
        DriveKind::Monochromatic => ("monochromatic", None, None),
        DriveKind::Gaussian { c } => ("gaussian", Some(c), None),
        DriveKind::Beating { omega_env } => ("beating", None, Some(omega_env)),
    };
    let raw = RawConfig {
        geometry: Some(RawGeometry {
            n_dimers: Some(config.geometry.n_dimers()),
            v: Some(config.geometry.v()),
            w: Some(config.geometry.w()),
            r: Some(config.geometry.r()),
        }),
        drive: Some(RawDrive {
            kind: Some(kind.to_string()),
            omega: Some(config.drive_template.omega_drive()),
            c,
            omega_env,
            window_center: Some(config.window_center),
        }),
        sweep: Some(RawSweep {
            g_min: Some(config.g_min),
            g_max: Some(config.g_max),
            g_steps: Some(config.g_steps),
        }),
        floquet: Some(RawFloquet {
            m_max: Some(config.m_max),
            method: Some(
                match config.method {
                    AssemblyMethod::Analytic => "analytic",
                    AssemblyMethod::Numeric => "numeric",
                }
                .to_string(),
            ),
            samples_per_period: Some(config.quadrature.samples_per_period),
            rule: Some(
                match config.quadrature.rule {
                    QuadratureRule::Simpson => "simpson",
                    QuadratureRule::Trapezoid => "trapezoid",
                }
                .to_string(),
            ),
            population: Some(
                match config.population {
                    PopulationDefinition::Central => "central",
                    PopulationDefinition::Max => "max",
                }
                .to_string(),
            ),
            fold: Some(config.fold),
        }),
        detection: Some(RawDetection {
            energy_window: Some(config.detection.energy_window),
            weight_threshold: Some(config.detection.weight_threshold),
            n_edge_cells: Some(config.detection.n_edge_cells),
        }),
        output: Some(RawOutput {
            path: Some(config.output_path.clone()),
            format: Some("csv".to_string()),
        }),
    };
    toml::to_string(&raw).expect("config serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_yields_documented_defaults() {
        let loaded = load_config("").unwrap();
        let c = &loaded.config;
        assert_eq!(c.geometry.n_dimers(), 20);
        assert_eq!(c.geometry.v(), 0.3);
        assert_eq!(c.geometry.w(), 1.0);
        assert_eq!(c.geometry.r(), 0.0);
        assert!(matches!(
            c.drive_template.kind(),
            crate::drive::DriveKind::Monochromatic
        ));
        assert_eq!(c.drive_template.omega_drive(), 10.0);
        assert_eq!(c.m_max, 20);
        assert_eq!((c.g_min, c.g_max, c.g_steps), (0.0, 8.0, 400));
        assert_eq!(c.method, AssemblyMethod::Analytic);
        assert_eq!(c.quadrature.samples_per_period, 1024);
        assert_eq!(c.population, PopulationDefinition::Central);
        assert!(c.fold);
        assert_eq!(c.detection, DetectionSettings::default());
        assert_eq!(c.output_path, "spectrum.csv");
        // Every defaulted field leaves a note.
        assert!(loaded.default_notes.iter().any(|n| n.contains("geometry.n_dimers")));
        assert!(loaded.default_notes.iter().any(|n| n.contains("sweep.g_steps")));
        assert!(loaded.default_notes.len() >= 15);
    }

    #[test]
    fn grid_has_exact_endpoints_and_count() {
        let config = load_config("[sweep]\ng_min = 0.0\ng_max = 8.0\ng_steps = 400\n")
            .unwrap()
            .config;
        let grid = config.grid();
        assert_eq!(grid.len(), 401);
        assert_eq!(grid[0], 0.0);
        assert_eq!(*grid.last().unwrap(), 8.0);
        assert!(grid.windows(2).all(|p| p[1] > p[0]));

        let single = load_config("[sweep]\ng_min = 2.0\ng_max = 2.0\ng_steps = 0\n")
            .unwrap()
            .config;
        assert_eq!(single.grid(), vec![2.0]);
    }

    #[test]
    fn gaussian_requires_width_and_numeric_method() {
        let err = load_config("[drive]\nkind = \"gaussian\"\n").unwrap_err();
        assert!(err.to_string().contains("drive.c"), "{err}");

        let err = load_config("[drive]\nkind = \"gaussian\"\nc = 10.0\n").unwrap_err();
        assert!(err.to_string().contains("numeric"), "{err}");

        let ok = load_config(
            "[drive]\nkind = \"gaussian\"\nc = 10.0\n[floquet]\nmethod = \"numeric\"\n",
        )
        .unwrap();
        assert!(matches!(
            ok.config.drive_template.kind(),
            crate::drive::DriveKind::Gaussian { c } if c == 10.0
        ));
    }

    #[test]
    fn beating_requires_envelope_frequency() {
        let err = load_config("[drive]\nkind = \"beating\"\n").unwrap_err();
        assert!(err.to_string().contains("omega_env"), "{err}");
        let ok = load_config("[drive]\nkind = \"beating\"\nomega_env = 4.0\n").unwrap();
        assert_eq!(ok.config.drive_template.base_frequency(), 6.0);
    }

    #[test]
    fn envelope_fields_rejected_for_wrong_kind() {
        assert!(load_config("[drive]\nc = 10.0\n").is_err());
        assert!(load_config("[drive]\nkind = \"beating\"\nomega_env = 4.0\nc = 1.0\n").is_err());
        assert!(load_config("[drive]\nkind = \"gaussian\"\nc = 10.0\nomega_env = 4.0\n").is_err());
    }

    #[test]
    fn validation_errors_name_the_invariant() {
        let err = load_config("[geometry]\nv = -1.0\n").unwrap_err();
        assert!(err.to_string().contains("v >= 0"), "{err}");

        let err = load_config("[geometry]\nr = 1.5\n").unwrap_err();
        assert!(err.to_string().contains("0 <= r < 1"), "{err}");

        let err = load_config("[sweep]\ng_min = 3.0\ng_max = 1.0\n").unwrap_err();
        assert!(err.to_string().contains("g_max >= g_min"), "{err}");

        let err = load_config("[detection]\nweight_threshold = 1.5\n").unwrap_err();
        assert!(err.to_string().contains("between 0 and 1"), "{err}");
    }

    #[test]
    fn unknown_keys_rejected_with_context() {
        let err = load_config("[geometry]\nn_dimer = 20\n").unwrap_err();
        let text = err.to_string();
        assert!(text.contains("n_dimer"), "{text}");
        assert!(load_config("[mystery]\nx = 1\n").is_err());
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = load_config("[geometry\nv = 1").unwrap_err();
        let text = err.to_string();
        assert!(matches!(err, ConfigError::Parse(_)));
        // toml reports line/column context.
        assert!(text.contains("line 1"), "{text}");
    }

    #[test]
    fn serialize_then_load_round_trips_exactly() {
        let documents = [
            "",
            "[geometry]\nn_dimers = 7\nv = 1.1\nr = 0.6\n[drive]\nkind = \"beating\"\nomega_env = 2.5\n[floquet]\nmethod = \"numeric\"\nfold = false\n",
            "[drive]\nkind = \"gaussian\"\nc = 10.0\nwindow_center = 0.25\n[floquet]\nmethod = \"numeric\"\nsamples_per_period = 4096\n[sweep]\ng_min = 3.5\ng_max = 4.5\ng_steps = 10\n",
        ];
        for doc in documents {
            let config = load_config(doc).unwrap().config;
            let text = serialize_config(&config);
            let reloaded = load_config(&text).unwrap();
            assert_eq!(reloaded.config, config, "document: {doc}");
            // A fully explicit document leaves nothing to default.
            assert!(
                reloaded.default_notes.is_empty(),
                "unexpected notes {:?}",
                reloaded.default_notes
            );
        }
    }

    #[test]
    fn window_center_propagates_to_sweep_options() {
        let config = load_config(
            "[drive]\nkind = \"gaussian\"\nc = 10.0\nwindow_center = 0.25\n[floquet]\nmethod = \"numeric\"\n",
        )
        .unwrap()
        .config;
        let options = config.sweep_options();
        let period = config.drive_template.base_period();
        assert!((options.window_center - 0.25 * period).abs() < 1e-15);
    }
}
