//! Scenario document, schema version 1. Every table rejects unknown keys.

use serde::Deserialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub schema: u32,
    pub horizon: Option<f64>,
    /// Factor applied to every field's initial data.
    #[serde(default = "one")]
    pub initial_scale: f64,
    pub domain: Option<DomainDoc>,
    #[serde(default, rename = "field")]
    pub fields: Vec<FieldDoc>,
    pub porosity: Option<String>,
    pub conductivity: Option<String>,
    #[serde(default)]
    pub solver: SolverDoc,
    #[serde(default)]
    pub declarations: DeclarationsDoc,
    #[serde(default)]
    pub monitors: MonitorsDoc,
    #[serde(default)]
    pub spectrum: SpectrumDoc,
    #[serde(default)]
    pub diagnose: DiagnoseDoc,
    pub waves: Option<WavesDoc>,
    #[serde(default)]
    pub sweep: SweepDoc,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartDoc {
    Gamma1,
    Gamma2,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainDoc {
    /// `[L]` for an interval, `[Lx, Ly]` for a rectangle.
    pub extents: Vec<f64>,
    pub cells: Vec<usize>,
    pub left: Option<PartDoc>,
    pub right: Option<PartDoc>,
    pub bottom: Option<PartDoc>,
    pub top: Option<PartDoc>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDoc {
    pub name: Option<String>,
    pub diffusion: DiffusionDoc,
    #[serde(default = "zero_text")]
    pub f: String,
    pub forcing: Option<ForcingDoc>,
    #[serde(default = "neumann")]
    pub gamma1: BoundaryDoc,
    #[serde(default = "dirichlet_zero")]
    pub gamma2: BoundaryDoc,
    pub initial: String,
    pub initial_trace: Option<String>,
}

fn zero_text() -> String {
    "0".into()
}

fn neumann() -> BoundaryDoc {
    BoundaryDoc::Neumann
}

fn dirichlet_zero() -> BoundaryDoc {
    BoundaryDoc::Dirichlet { value: 0.0 }
}

/// Tabulated `(x, t)` forcing added to `f`; `values` is row-major with one
/// row per time.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForcingDoc {
    pub x: Vec<f64>,
    pub t: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case", deny_unknown_fields)]
pub enum DiffusionDoc {
    Constant { value: f64 },
    Power { alpha: f64, p: f64 },
    BoundedPower { alpha: f64, sigma: f64, p: f64 },
    Tabulated { s: Vec<f64>, a: Vec<f64> },
    /// `a(u) = u·b(u)` with `b(u) = coef·u^q`.
    DarcyPower { coef: f64, q: f64 },
    /// `a(u) = u·b(u)` with `b` an expression in `u`.
    Darcy { b: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingDoc {
    #[default]
    Flux,
    Frozen,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundaryDoc {
    Dirichlet {
        value: f64,
    },
    Neumann,
    Static {
        h: String,
    },
    /// Exactly one of `delta` (uniform) and `beta` (expression in x, y).
    Dynamic {
        delta: Option<f64>,
        beta: Option<String>,
        g: Option<String>,
        h2: Option<String>,
        #[serde(default)]
        coupling: CouplingDoc,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeDoc {
    Explicit,
    Implicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegularizationDoc {
    Additive,
    Shift,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverDoc {
    pub scheme: Option<SchemeDoc>,
    pub cfl: Option<f64>,
    pub epsilon: Option<f64>,
    pub regularization: Option<RegularizationDoc>,
    pub max_dt: Option<f64>,
    pub min_dt: Option<f64>,
    pub snapshot_cadence: Option<f64>,
    pub blowup_threshold: Option<f64>,
    pub newton_tol: Option<f64>,
    pub newton_max_iter: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum ClassDoc {
    A1,
    #[serde(rename = "A1bis")]
    A1Bis,
    A2,
    A3,
    #[serde(rename = "A3bis")]
    A3Bis,
    #[serde(rename = "growth")]
    Growth,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeclarationsDoc {
    #[serde(default)]
    pub classes: Vec<ClassDoc>,
    #[serde(default)]
    pub c_f: Vec<f64>,
    #[serde(default)]
    pub c_g: Vec<f64>,
    #[serde(default)]
    pub c_h: Vec<f64>,
    pub ct_f: Option<f64>,
    pub ct_g: Option<f64>,
    pub ct_h: Option<f64>,
    #[serde(default)]
    pub m: Vec<f64>,
    #[serde(default)]
    pub theta: Vec<f64>,
    #[serde(default)]
    pub beta: Vec<f64>,
    pub growth_f: Option<f64>,
    pub growth_g: Option<f64>,
    #[serde(default)]
    pub alpha: Vec<f64>,
    #[serde(default)]
    pub p: Vec<f64>,
    #[serde(default)]
    pub sigma: Vec<f64>,
    /// Half-width of the state box sampled by the assumption checks.
    pub sample_radius: Option<f64>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightDoc {
    #[default]
    Uniform,
    GroundState,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyDoc {
    pub exponents: Vec<f64>,
    #[serde(default)]
    pub weight: WeightDoc,
    /// 1-based field whose first generalized eigenfunction is the weight.
    #[serde(default = "first")]
    pub weight_field: usize,
}

fn first() -> usize {
    1
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonitorsDoc {
    #[serde(default)]
    pub xvec: Vec<Vec<f64>>,
    pub energy: Option<EnergyDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantDoc {
    #[default]
    Classic,
    Generalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrectionDoc {
    #[default]
    None,
    Dispersion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexMethodDoc {
    #[default]
    Direct,
    Heuristic,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumDoc {
    #[serde(default)]
    pub variant: VariantDoc,
    #[serde(default = "first")]
    pub field: usize,
    #[serde(default = "five")]
    pub count: usize,
    #[serde(default)]
    pub correction: CorrectionDoc,
    /// Diffusion factor of the linearization; enables the instability index.
    pub nu: Option<f64>,
    #[serde(default)]
    pub bulk_shift: f64,
    #[serde(default)]
    pub surface_shift: f64,
    #[serde(default)]
    pub index_method: IndexMethodDoc,
}

impl Default for SpectrumDoc {
    fn default() -> Self {
        Self {
            variant: VariantDoc::Classic,
            field: 1,
            count: 5,
            correction: CorrectionDoc::None,
            nu: None,
            bulk_shift: 0.0,
            surface_shift: 0.0,
            index_method: IndexMethodDoc::Direct,
        }
    }
}

fn five() -> usize {
    5
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecayDoc {
    Auto,
    Algebraic,
    Exponential,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictDoc {
    Dissipative,
    Asymptotic,
    DataDependent,
    Inconclusive,
    BlowUp,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnoseDoc {
    /// Initial-data scales of the Property-P ensemble; at least three.
    #[serde(default)]
    pub scales: Vec<f64>,
    /// Per-field exponents of the `xvec` norm used by Property P.
    pub r: Option<Vec<f64>>,
    pub eta: Option<f64>,
    pub expect: Option<VerdictDoc>,
    /// DeGiorgi window `τ`; `horizon/4` when absent.
    pub tau: Option<f64>,
    #[serde(default = "ten")]
    pub levels: usize,
    #[serde(default = "decay_auto")]
    pub decay: DecayDoc,
    /// Monitor channel fitted by the decay check; `energy` when that
    /// monitor is configured, else `xinf`.
    pub decay_channel: Option<String>,
    #[serde(default = "eight")]
    pub moser_rungs: usize,
    #[serde(default)]
    pub trace_samples: usize,
    #[serde(default = "one")]
    pub trace_n: f64,
    #[serde(default = "one")]
    pub trace_s: f64,
    #[serde(default = "one")]
    pub trace_eps: f64,
}

impl Default for DiagnoseDoc {
    fn default() -> Self {
        Self {
            scales: Vec::new(),
            r: None,
            eta: None,
            expect: None,
            tau: None,
            levels: 10,
            decay: DecayDoc::Auto,
            decay_channel: None,
            moser_rungs: 8,
            trace_samples: 0,
            trace_n: 1.0,
            trace_s: 1.0,
            trace_eps: 1.0,
        }
    }
}

fn ten() -> usize {
    10
}

fn eight() -> usize {
    8
}

fn decay_auto() -> DecayDoc {
    DecayDoc::Auto
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpeedDoc {
    Constant { value: f64 },
    Power { coef: f64, p: f64 },
    Expression { a: String },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileDoc {
    SelfSimilar,
    /// `u = η(r − ct)` with `eta` an expression in `z`; `c` defaults to `a(η(0))`.
    Traveling { eta: String, c: Option<f64> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavesDoc {
    pub speed: SpeedDoc,
    pub profile: ProfileDoc,
    #[serde(default = "r_window")]
    pub r_range: [f64; 2],
    #[serde(default = "t_window")]
    pub t_range: [f64; 2],
    #[serde(default = "resolutions")]
    pub resolutions: Vec<usize>,
    #[serde(default = "min_order")]
    pub min_order: f64,
    #[serde(default = "traveling_tolerance")]
    pub tolerance: f64,
}

fn r_window() -> [f64; 2] {
    [0.1, 1.0]
}

fn t_window() -> [f64; 2] {
    [0.5, 1.0]
}

fn resolutions() -> Vec<usize> {
    vec![16, 32, 64, 128]
}

fn min_order() -> f64 {
    1.8
}

fn traveling_tolerance() -> f64 {
    1e-6
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepDoc {
    /// Command run for each member; `spectrum` when sweeping `nu`, else `run`.
    pub command: Option<String>,
    /// `KEY = [v1, v2, ...]` entries, combined as a Cartesian product.
    #[serde(default)]
    pub grid: toml::Table,
}
