//! JSON scenario and report files, and the sweep CSV format.
//!
//! Frame indices in files are 1-based. Reports and CSV cells carry 12
//! significant digits. Scenario files keep the shortest round-trip form of
//! each double, so a constructed file checks clean at any admissible kappa.

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructors::{classify, parallel_torsion_defect, Constructed, SweepRow};
use crate::frame::{Vec3, DIM};
use crate::geometry::StructureConstants;
use crate::residuals::{full_report, ResidualReport, ScenarioError, SolitonScenario};
use crate::torsion::{torsion_type, Contorsion, ReducibleTorsionParams, TorsionType};

pub const SCENARIO_SCHEMA_ID: &str = "urn:het3:scenario:v1";
pub const REPORT_SCHEMA_ID: &str = "urn:het3:report:v1";
pub const CSV_HEADER: &str = "s_g,kappa_s_g,alpha,h,residual_norm,verdict";

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("invalid scenario JSON at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("field `{field}`: {message}")]
    Field { field: &'static str, message: String },
}

impl InputError {
    fn field(field: &'static str, message: impl ToString) -> Self {
        InputError::Field { field, message: message.to_string() }
    }
}

/// Round to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_vec(v: [f64; 3]) -> [f64; 3] {
    v.map(round12)
}

/// Text form used in CSV cells and human output.
pub fn fmt12(x: f64) -> String {
    let r = round12(x);
    if r == 0.0 || (1e-4..1e15).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ContorsionSpec {
    Params(ParamsSpec),
    Matrix(MatrixSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default = "default_xi")]
    pub xi: [f64; 3],
}

fn default_xi() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    /// Row-major, `matrix[i][j] = A(e_{i+1}, e_{j+1})`.
    pub matrix: [[f64; 3]; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(rename = "$schema", default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// `[i, j, k, c]` meaning `[e_i, e_j] ∋ c e_k`, with `1 ≤ i < j ≤ 3`.
    pub structure_constants: Vec<(i64, i64, i64, f64)>,
    pub contorsion: ContorsionSpec,
    pub h: f64,
    #[serde(default)]
    pub phi: [f64; 3],
    pub kappa: f64,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(|e| InputError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn read(path: &std::path::Path) -> Result<Self, InputError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| InputError::Read { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn model(&self) -> Result<StructureConstants, InputError> {
        let mut entries = Vec::with_capacity(self.structure_constants.len());
        for (n, &(i, j, k, v)) in self.structure_constants.iter().enumerate() {
            let in_range = |x: i64| (1..=DIM as i64).contains(&x);
            if !(in_range(i) && in_range(j) && in_range(k)) {
                return Err(InputError::field(
                    "structure_constants",
                    format!("entry {n}: indices ({i}, {j}, {k}) must lie in 1..=3"),
                ));
            }
            if i >= j {
                return Err(InputError::field("structure_constants", format!("entry {n}: need i < j, got ({i}, {j})")));
            }
            entries.push((i as usize - 1, j as usize - 1, k as usize - 1, v));
        }
        StructureConstants::from_entries(&entries).map_err(|e| InputError::field("structure_constants", e))
    }

    pub fn to_scenario(&self) -> Result<SolitonScenario, InputError> {
        let model = self.model()?;
        let phi = Vec3::from_array(self.phi);
        let result = match &self.contorsion {
            ContorsionSpec::Params(p) => {
                let params = ReducibleTorsionParams { alpha: p.alpha, beta: p.beta, gamma: p.gamma, xi: Vec3::from_array(p.xi) };
                SolitonScenario::from_params(model, &params, self.h, phi, self.kappa)
            }
            ContorsionSpec::Matrix(m) => SolitonScenario::new(
                model,
                Contorsion(nalgebra::Matrix3::from_fn(|i, j| m.matrix[i][j])),
                self.h,
                phi,
                self.kappa,
            ),
        };
        result.map_err(|e| {
            let field = match &e {
                ScenarioError::NonPositiveKappa(_) => "kappa",
                ScenarioError::NonPositiveH(_) => "h",
                ScenarioError::NotClosed { .. } => "phi",
                ScenarioError::NonFinite => "scenario",
                ScenarioError::CompactnessRule(_) | ScenarioError::Torsion(_) => "contorsion",
                ScenarioError::Geometry(_) => "structure_constants",
            };
            InputError::field(field, e)
        })
    }

    /// File for a scenario, with the contorsion written as a matrix.
    pub fn from_scenario(sc: &SolitonScenario, name: Option<String>) -> Self {
        let m = sc.contorsion.0;
        Self::assemble(
            sc,
            name,
            ContorsionSpec::Matrix(MatrixSpec { matrix: std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)])) }),
        )
    }

    /// File for a constructed scenario, with the contorsion written as
    /// `(α, β, γ, ξ)` parameters along `e₃`.
    pub fn from_constructed(c: &Constructed) -> Self {
        let spec = ContorsionSpec::Params(ParamsSpec {
            alpha: c.params.alpha,
            beta: 0.0,
            gamma: c.params.gamma,
            xi: default_xi(),
        });
        Self::assemble(&c.scenario, Some(c.family.as_str().to_ascii_lowercase()), spec)
    }

    fn assemble(sc: &SolitonScenario, name: Option<String>, contorsion: ContorsionSpec) -> Self {
        let mut out = Self {
            schema: Some(SCENARIO_SCHEMA_ID.to_string()),
            name,
            structure_constants: sc
                .model
                .entries()
                .into_iter()
                .map(|(i, j, k, v)| (i as i64 + 1, j as i64 + 1, k as i64 + 1, v))
                .collect(),
            contorsion,
            h: sc.h,
            phi: sc.phi.to_array(),
            kappa: sc.kappa,
        };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        let z = |x: &mut f64| *x += 0.0;
        for e in &mut self.structure_constants {
            z(&mut e.3);
        }
        match &mut self.contorsion {
            ContorsionSpec::Params(p) => {
                for x in [&mut p.alpha, &mut p.beta, &mut p.gamma].into_iter().chain(p.xi.iter_mut()) {
                    z(x);
                }
            }
            ContorsionSpec::Matrix(m) => m.matrix.iter_mut().flatten().for_each(z),
        }
        z(&mut self.h);
        self.phi.iter_mut().for_each(z);
        z(&mut self.kappa);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes") + "\n"
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormsOut {
    pub einstein: f64,
    pub einstein_symmetric: f64,
    pub einstein_skew: f64,
    pub yang_mills: f64,
    pub dilaton: f64,
    pub maxwell: f64,
    pub trace_identity: f64,
    pub remark_identity: Option<f64>,
    pub max_system: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualsOut {
    pub einstein: [[f64; 3]; 3],
    pub einstein_skew: [f64; 3],
    /// Row `x`: dual components of the residual 2-form at `e_x`.
    pub yang_mills: [[f64; 3]; 3],
    pub dilaton: f64,
    pub maxwell: [f64; 3],
    pub trace_identity: f64,
    pub remark_identity: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationOut {
    pub kind: &'static str,
    pub ricci_eigenvalues: [f64; 3],
    pub simple_axis: Option<[f64; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorsionOut {
    pub kind: &'static str,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub xi: Option<[f64; 3]>,
    pub parallel_defect: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportFile {
    #[serde(rename = "$schema")]
    pub schema: &'static str,
    pub tool: &'static str,
    pub version: &'static str,
    pub tolerance: f64,
    pub verdict: &'static str,
    pub norms: NormsOut,
    pub residuals: ResidualsOut,
    pub classification: ClassificationOut,
    pub torsion: TorsionOut,
    pub input: ScenarioFile,
}

fn grid(m: &nalgebra::Matrix3<f64>) -> [[f64; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| round12(m[(i, j)])))
}

pub fn classification_out(sc: &SolitonScenario) -> ClassificationOut {
    let v = classify(sc);
    ClassificationOut {
        kind: v.kind.as_str(),
        ricci_eigenvalues: round_vec(v.ricci_eigenvalues),
        simple_axis: v.simple_axis.map(|a| round_vec(a.to_array())),
    }
}

impl ReportFile {
    pub fn build(sc: &SolitonScenario, report: &ResidualReport, input: ScenarioFile) -> Self {
        let n = &report.norms;
        let torsion = match torsion_type(&sc.contorsion, 1e-12) {
            TorsionType::Vanishing => ("VANISHING", None, None, None),
            TorsionType::Skew { alpha } => ("SKEW", Some(round12(alpha)), None, None),
            TorsionType::Reducible(p) => {
                ("REDUCIBLE", Some(round12(p.alpha)), Some(round12(p.gamma)), Some(round_vec(p.xi.to_array())))
            }
            TorsionType::Unclassified => ("UNCLASSIFIED", None, None, None),
        };
        Self {
            schema: REPORT_SCHEMA_ID,
            tool: "het3",
            version: env!("CARGO_PKG_VERSION"),
            tolerance: report.tolerance,
            verdict: report.verdict.as_str(),
            norms: NormsOut {
                einstein: round12(n.einstein),
                einstein_symmetric: round12(n.einstein_symmetric),
                einstein_skew: round12(n.einstein_skew),
                yang_mills: round12(n.yang_mills),
                dilaton: round12(n.dilaton),
                maxwell: round12(n.maxwell),
                trace_identity: round12(n.trace_identity),
                remark_identity: n.remark_identity.map(round12),
                max_system: round12(n.system_max()),
            },
            residuals: ResidualsOut {
                einstein: grid(&report.einstein.0),
                einstein_skew: round_vec(report.einstein_skew.dual_components()),
                yang_mills: grid(&report.yang_mills.dual_grid()),
                dilaton: round12(report.dilaton),
                maxwell: round_vec(report.maxwell.to_array()),
                trace_identity: round12(report.trace_identity),
                remark_identity: report.remark_identity.map(round12),
            },
            classification: classification_out(sc),
            torsion: TorsionOut {
                kind: torsion.0,
                alpha: torsion.1,
                gamma: torsion.2,
                xi: torsion.3,
                parallel_defect: round12(parallel_torsion_defect(sc)),
            },
            input,
        }
    }

    /// Parse, validate and evaluate a scenario file.
    pub fn evaluate(file: ScenarioFile, tol: f64) -> Result<(Self, ResidualReport), InputError> {
        let sc = file.to_scenario()?;
        let report = full_report(&sc, tol).map_err(|e| InputError::field("scenario", e))?;
        Ok((Self::build(&sc, &report, file), report))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Sweep table as CSV with LF line endings; missing values are empty cells.
pub fn write_sweep_csv<W: Write>(mut w: W, rows: &[SweepRow]) -> std::io::Result<()> {
    let opt = |x: Option<f64>| x.map(fmt12).unwrap_or_default();
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            fmt12(r.scalar),
            fmt12(r.kappa_s),
            opt(r.alpha),
            opt(r.h),
            opt(r.residual_norm),
            r.status.as_str()
        )?;
    }
    Ok(())
}
