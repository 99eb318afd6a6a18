//! Document → core types, with errors labelled by key path.

use anyhow::{anyhow, bail, Context, Result};
use wentzell_core::domain::{build_mesh, BoundaryPart, SideLabels};
use wentzell_core::model::*;
use wentzell_core::solver::{EnergyMonitor, Scheme};
use wentzell_core::spectral::ground_state_weight;
use wentzell_core::Mesh64;

use crate::schema::*;

/// Parses a scenario document. Syntax and schema errors carry the line and
/// column reported by the TOML parser.
pub fn parse_document(text: &str) -> Result<Document> {
    let doc: Document = toml::from_str(text).map_err(|e| anyhow!("scenario: {e}"))?;
    check_version(&doc)?;
    Ok(doc)
}

/// Converts an already parsed (and possibly edited) TOML table.
pub fn document_from_table(table: toml::Table) -> Result<Document> {
    let doc: Document = toml::Value::Table(table).try_into().map_err(|e| anyhow!("scenario: {e}"))?;
    check_version(&doc)?;
    Ok(doc)
}

fn check_version(doc: &Document) -> Result<()> {
    if doc.schema != SCHEMA_VERSION {
        bail!("schema: version {} is not supported (expected {SCHEMA_VERSION})", doc.schema);
    }
    Ok(())
}

fn part(p: PartDoc) -> BoundaryPart {
    match p {
        PartDoc::Gamma1 => BoundaryPart::Gamma1,
        PartDoc::Gamma2 => BoundaryPart::Gamma2,
    }
}

pub fn mesh(doc: &Document) -> Result<Mesh64> {
    let d = doc.domain.as_ref().ok_or_else(|| anyhow!("domain: table is required"))?;
    let labels = SideLabels {
        left: d.left.map(part),
        right: d.right.map(part),
        bottom: d.bottom.map(part),
        top: d.top.map(part),
    };
    build_mesh(d.extents.len(), &d.extents, &d.cells, &labels).context("domain")
}

fn scaled(text: &str, scale: f64) -> String {
    if scale == 1.0 {
        text.to_string()
    } else {
        format!("({scale})*({text})")
    }
}

fn diffusion(d: &DiffusionDoc) -> Result<DiffusionLaw<f64>> {
    Ok(match d {
        DiffusionDoc::Constant { value } => DiffusionLaw::Constant(*value),
        DiffusionDoc::Power { alpha, p } => DiffusionLaw::Power { alpha: *alpha, p: *p },
        DiffusionDoc::BoundedPower { alpha, sigma, p } => DiffusionLaw::BoundedPower { alpha: *alpha, sigma: *sigma, p: *p },
        DiffusionDoc::Tabulated { s, a } => DiffusionLaw::Tabulated { s: s.clone(), a: a.clone() },
        DiffusionDoc::DarcyPower { coef, q } => darcy_diffusivity(&EquationOfState::Power { coef: *coef, q: *q }),
        DiffusionDoc::Darcy { b } => darcy_diffusivity(&EquationOfState::Expression(Expr::parse(b, &["u"])?)),
    })
}

fn boundary(b: &BoundaryDoc, m: usize) -> Result<BoundaryKind<f64>> {
    Ok(match b {
        BoundaryDoc::Dirichlet { value } => BoundaryKind::Dirichlet(*value),
        BoundaryDoc::Neumann => BoundaryKind::neumann(m),
        BoundaryDoc::Static { h } => BoundaryKind::Static { h: ReactionTerm::parse(h, m).context("h")? },
        BoundaryDoc::Dynamic { delta, beta, g, h2, coupling } => {
            let weight = match (delta, beta) {
                (Some(d), None) => DynamicWeight::Uniform(*d),
                (None, Some(b)) => DynamicWeight::Field(SpatialField::parse(b).context("beta")?),
                _ => bail!("dynamic condition needs exactly one of `delta` and `beta`"),
            };
            let g = match g {
                Some(text) => ReactionTerm::parse(text, m).context("g")?,
                None => ReactionTerm::zero(m),
            };
            let h2 = match h2 {
                Some(text) => SpatialField::parse(text).context("h2")?,
                None => SpatialField::constant(0.0),
            };
            let coupling = match coupling {
                CouplingDoc::Flux => Coupling::Flux,
                CouplingDoc::Frozen => Coupling::Frozen,
            };
            BoundaryKind::Dynamic { weight, g, h2, coupling }
        }
    })
}

fn field(doc: &FieldDoc, k: usize, m: usize, scale: f64) -> Result<FieldSpec<f64>> {
    let mut f = ReactionTerm::parse(&doc.f, m).context("f")?;
    if let Some(t) = &doc.forcing {
        f = f.with_forcing(ForcingTable::new(t.x.clone(), t.t.clone(), t.values.clone()).context("forcing")?);
    }
    Ok(FieldSpec {
        name: doc.name.clone().unwrap_or_else(|| format!("u{k}")),
        diffusion: diffusion(&doc.diffusion).context("diffusion")?,
        f,
        boundary: BoundaryAssignment::new(
            boundary(&doc.gamma1, m).context("gamma1")?,
            boundary(&doc.gamma2, m).context("gamma2")?,
        ),
        initial: SpatialField::parse(&scaled(&doc.initial, scale)).context("initial")?,
        initial_trace: doc
            .initial_trace
            .as_ref()
            .map(|t| SpatialField::parse(&scaled(t, scale)))
            .transpose()
            .context("initial_trace")?,
    })
}

fn class(c: ClassDoc) -> AssumptionClass {
    match c {
        ClassDoc::A1 => AssumptionClass::A1,
        ClassDoc::A1Bis => AssumptionClass::A1Bis,
        ClassDoc::A2 => AssumptionClass::A2,
        ClassDoc::A3 => AssumptionClass::A3,
        ClassDoc::A3Bis => AssumptionClass::A3Bis,
        ClassDoc::Growth => AssumptionClass::Growth,
    }
}

fn declarations(d: &DeclarationsDoc) -> Declarations<f64> {
    Declarations {
        classes: d.classes.iter().copied().map(class).collect(),
        c_f: d.c_f.clone(),
        c_g: d.c_g.clone(),
        c_h: d.c_h.clone(),
        ct_f: d.ct_f.unwrap_or(0.0),
        ct_g: d.ct_g.unwrap_or(0.0),
        ct_h: d.ct_h.unwrap_or(0.0),
        m: d.m.clone(),
        theta: d.theta.clone(),
        beta: d.beta.clone(),
        growth_f: d.growth_f.unwrap_or(0.0),
        growth_g: d.growth_g.unwrap_or(0.0),
        alpha: d.alpha.clone(),
        p: d.p.clone(),
        sigma: d.sigma.clone(),
    }
}

fn apply_solver(sc: &mut Scenario<f64>, s: &SolverDoc) {
    let cfg = &mut sc.solver;
    if let Some(v) = s.scheme {
        cfg.scheme = match v {
            SchemeDoc::Explicit => Scheme::ExplicitHeun,
            SchemeDoc::Implicit => Scheme::BackwardEuler,
        };
    }
    if let Some(v) = s.regularization {
        cfg.regularization = match v {
            RegularizationDoc::Additive => RegularizationMode::Additive,
            RegularizationDoc::Shift => RegularizationMode::Shift,
        };
    }
    cfg.cfl = s.cfl.unwrap_or(cfg.cfl);
    cfg.epsilon = s.epsilon.or(cfg.epsilon);
    cfg.max_dt = s.max_dt.or(cfg.max_dt);
    cfg.min_dt = s.min_dt.unwrap_or(cfg.min_dt);
    cfg.snapshot_cadence = s.snapshot_cadence.or(cfg.snapshot_cadence);
    cfg.blowup_threshold = s.blowup_threshold.unwrap_or(cfg.blowup_threshold);
    cfg.newton_tol = s.newton_tol.unwrap_or(cfg.newton_tol);
    cfg.newton_max_iter = s.newton_max_iter.unwrap_or(cfg.newton_max_iter);
}

/// Validated scenario with defaults filled in.
pub fn scenario(doc: &Document) -> Result<Scenario<f64>> {
    let mesh = mesh(doc)?;
    let horizon = doc.horizon.ok_or_else(|| anyhow!("horizon: required when fields are declared"))?;
    if doc.fields.is_empty() {
        bail!("field: at least one [[field]] table is required");
    }
    let m = doc.fields.len();
    let fields = doc
        .fields
        .iter()
        .enumerate()
        .map(|(k, f)| field(f, k + 1, m, doc.initial_scale).with_context(|| format!("field[{}]", k + 1)))
        .collect::<Result<Vec<_>>>()?;
    let mut sc = Scenario::new(mesh, fields, horizon);
    if let Some(p) = &doc.porosity {
        sc.porosity = SpatialField::parse(p).context("porosity")?;
    }
    if let Some(k) = &doc.conductivity {
        sc.conductivity = SpatialField::parse(k).context("conductivity")?;
    }
    sc.declarations = declarations(&doc.declarations);
    apply_solver(&mut sc, &doc.solver);
    sc.monitors.xvec = doc.monitors.xvec.clone();
    sc.validate()?;
    if let Some(e) = &doc.monitors.energy {
        let weight = match e.weight {
            WeightDoc::Uniform => None,
            WeightDoc::GroundState => {
                if e.weight_field == 0 || e.weight_field > m {
                    bail!("monitors.energy.weight_field: {} is not a field index", e.weight_field);
                }
                Some(ground_state_weight(&sc, e.weight_field - 1).context("monitors.energy.weight")?)
            }
        };
        sc.monitors.energy = Some(EnergyMonitor { exponents: e.exponents.clone(), weight });
        sc.validate().context("monitors.energy")?;
    }
    Ok(sc)
}

/// Box `[−R, R]^m` and sample count for the assumption checks.
pub fn sample_box(doc: &Document) -> (SampleBox<f64>, usize) {
    let radius = doc.declarations.sample_radius.unwrap_or(10.0);
    (SampleBox::symmetric(doc.fields.len(), radius), doc.declarations.samples.unwrap_or(1000))
}
