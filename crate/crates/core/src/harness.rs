//! The commands behind the `kg` binary. Every command renders its output
//! to a `String`; the binary decides where it goes.

use std::fmt::Write as _;
use std::path::PathBuf;

use num_complex::Complex64;

use crate::bounds::{
    self, gap_bound, gap_inclusion, improved_inclusion, norm_bound_interval, perturbation_constants,
    perturbation_operator_norm, KappaBundle, PerturbationSpec, VerificationReport,
};
use crate::error::{Error, Result};
use crate::linalg::{self, SymmetricMatrix};
use crate::models::{
    self, exact_harmonic_eigs, harmonic_model, harmonic_sensitivity, random_perturbation, square_well_model,
    square_well_perturbation, HarmonicParams, ModelFile, SquareWellParams,
};
use crate::operator::{assemble_system, contraction_bound, optimize_shift, ModelSpec, UPowers};
use crate::spectral::{
    self, eigen_spectrum, pencil_residual, pencil_vector_residuals, sign_operator, Interval, PencilScale,
    SpectrumReport,
};

/// Eigenpairs of models up to this order get the exact `σ_min` pencil
/// residual; larger ones the eigenvector residual.
pub const EXACT_PENCIL_ORDER: usize = 64;
/// A run fails when a pencil residual exceeds this multiple of its scale.
pub const PENCIL_FAILURE: f64 = 1e-6;
pub const DEFAULT_STEPS: usize = 101;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelSource {
    File(PathBuf),
    SquareWell(SquareWellParams),
    Harmonic(HarmonicParams),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShiftPolicy {
    /// The model's natural shift: `-τ/2` for the square well, zero otherwise.
    Default,
    Explicit(f64),
    Optimized,
    Paper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Report,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Example {
    Example1,
    Example2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: Option<ModelSource>,
    pub shift: ShiftPolicy,
    pub eta: Option<f64>,
    pub seed: u64,
    pub format: OutputFormat,
    pub sweep_range: Option<(f64, f64)>,
    pub steps: usize,
    pub harmonic: HarmonicParams,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: None,
            shift: ShiftPolicy::Default,
            eta: None,
            seed: 0,
            format: OutputFormat::Csv,
            sweep_range: None,
            steps: DEFAULT_STEPS,
            harmonic: HarmonicParams::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelKind {
    SquareWell(SquareWellParams),
    Harmonic(HarmonicParams),
    Explicit,
}

#[derive(Debug, Clone)]
pub struct ResolvedModel {
    pub spec: ModelSpec,
    pub kind: ModelKind,
}

impl RunConfig {
    fn source(&self) -> Result<&ModelSource> {
        self.model
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("no model given (use --model, --tau or --alpha)".into()))
    }

    pub fn resolve_model(&self) -> Result<ResolvedModel> {
        let kind = match self.source()? {
            ModelSource::File(path) => match models::read_model_file(path)? {
                ModelFile::Explicit(spec) => {
                    return Ok(ResolvedModel {
                        spec,
                        kind: ModelKind::Explicit,
                    })
                }
                ModelFile::Harmonic(p) => ModelKind::Harmonic(p),
                ModelFile::SquareWell(p) => ModelKind::SquareWell(p),
            },
            ModelSource::SquareWell(p) => ModelKind::SquareWell(*p),
            ModelSource::Harmonic(p) => ModelKind::Harmonic(*p),
        };
        let spec = match &kind {
            ModelKind::SquareWell(p) => square_well_model(p)?,
            ModelKind::Harmonic(p) => harmonic_model(p)?,
            ModelKind::Explicit => unreachable!(),
        };
        Ok(ResolvedModel { spec, kind })
    }

    pub fn resolve_shift(&self, model: &ResolvedModel) -> Result<f64> {
        let natural = match model.kind {
            ModelKind::SquareWell(p) => p.natural_shift(),
            _ => 0.0,
        };
        match self.shift {
            ShiftPolicy::Default | ShiftPolicy::Paper => Ok(natural),
            ShiftPolicy::Explicit(mu) => {
                if mu.is_finite() {
                    Ok(mu)
                } else {
                    Err(Error::InvalidArgument(format!("shift {mu} is not finite")))
                }
            }
            ShiftPolicy::Optimized => Ok(optimize_shift(&model.spec)?.0),
        }
    }

    /// `diag(-η, 0)` for the square well, `η·x` (the field strength raised by
    /// `η`) for the harmonic model, a seeded random matrix with entries in
    /// `[-η, η]` otherwise. Zero when no `η` is given.
    pub fn perturbation(&self, model: &ResolvedModel) -> Result<SymmetricMatrix> {
        let n = model.spec.order();
        let eta = match (self.eta, model.kind) {
            (Some(e), _) => e,
            (None, ModelKind::SquareWell(p)) => p.eta.unwrap_or(0.0),
            (None, _) => 0.0,
        };
        if !eta.is_finite() {
            return Err(Error::InvalidArgument(format!("eta {eta} is not finite")));
        }
        match model.kind {
            ModelKind::SquareWell(_) => Ok(square_well_perturbation(eta)),
            ModelKind::Harmonic(p) => Ok(SymmetricMatrix::from_diagonal(
                &p.grid().iter().map(|x| eta * x).collect::<Vec<_>>(),
            )),
            ModelKind::Explicit => random_perturbation(n, eta.abs(), self.seed),
        }
    }
}

/// Reals in CSV output: 17 significant digits, no negative zero.
pub fn real(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

/// `d.dddde±XX`, five significant digits.
pub fn sci5(x: f64) -> String {
    let s = format!("{x:.4e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// Like [`sci5`] with trailing zeros of the mantissa dropped (`2e-01`).
pub fn sci5_trimmed(x: f64) -> String {
    let s = sci5(x);
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let mantissa = if mantissa.contains('.') {
        mantissa.trim_end_matches('0').trim_end_matches('.')
    } else {
        mantissa
    };
    format!("{mantissa}e{exp}")
}

fn csv_bool(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn interval_text(iv: &Interval) -> String {
    if iv.is_empty() {
        "empty".to_string()
    } else {
        format!("({}, {})", real(iv.lower), real(iv.upper))
    }
}

pub struct SpectrumRun {
    pub shift: f64,
    pub contraction: f64,
    pub report: SpectrumReport,
    /// One per eigenvalue, the residual and its failure scale.
    pub pencil: Vec<(f64, f64)>,
}

pub fn run_spectrum(spec: &ModelSpec, shift: f64) -> Result<SpectrumRun> {
    let system = assemble_system(spec, shift)?;
    let report = eigen_spectrum(&system)?;
    let pencil = pencil_residuals(spec, &system.powers, &report)?;
    for (k, &(r, scale)) in pencil.iter().enumerate() {
        if !(r <= PENCIL_FAILURE * scale) {
            return Err(Error::Solver(format!(
                "pencil residual {r:e} of eigenvalue {k} exceeds {PENCIL_FAILURE:e} x {scale:e}"
            )));
        }
    }
    Ok(SpectrumRun {
        shift,
        contraction: system.contraction,
        report,
        pencil,
    })
}

fn pencil_residuals(spec: &ModelSpec, powers: &UPowers, report: &SpectrumReport) -> Result<Vec<(f64, f64)>> {
    let scale = PencilScale::new(spec)?;
    let residuals = if spec.order() <= EXACT_PENCIL_ORDER {
        report
            .eigenvalues
            .iter()
            .map(|&z| pencil_residual(spec, z))
            .collect::<Result<Vec<_>>>()?
    } else {
        pencil_vector_residuals(spec, powers, report)
    };
    Ok(residuals
        .into_iter()
        .zip(&report.eigenvalues)
        .map(|(r, &z)| (r, scale.at(z)))
        .collect())
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<String> {
    let model = cfg.resolve_model()?;
    let shift = cfg.resolve_shift(&model)?;
    let run = run_spectrum(&model.spec, shift)?;
    let rep = &run.report;
    let mut out = String::new();
    match cfg.format {
        OutputFormat::Csv => {
            out.push_str("index,eigenvalue_re,eigenvalue_im,sign_type,pencil_residual\n");
            for (k, z) in rep.eigenvalues.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{k},{},{},{},{}",
                    real(z.re),
                    real(z.im),
                    rep.sign_types[k].as_str(),
                    real(run.pencil[k].0)
                );
            }
        }
        OutputFormat::Report => {
            let _ = writeln!(out, "model: {}", model.spec.label);
            let _ = writeln!(out, "order: {}", model.spec.order());
            let _ = writeln!(out, "shift: {}", real(shift));
            let _ = writeln!(out, "contraction: {}", real(run.contraction));
            let _ = writeln!(out, "solver_path: {:?}", rep.path);
            let _ = writeln!(out, "real_spectrum: {}", rep.is_real_spectrum);
            let _ = writeln!(out, "defective: {}", rep.defective);
            let _ = writeln!(out, "residual_max: {}", real(rep.residual_max));
            if let Some(gap) = rep.central_gap {
                let _ = writeln!(out, "central_gap: {}", interval_text(&gap));
            }
            if run.contraction < 1.0 {
                let system = assemble_system(&model.spec, shift)?;
                let _ = writeln!(out, "gap_bound_alpha: {}", real(gap_bound(&system)?));
                let _ = writeln!(out, "norm_j1: {}", real(sign_operator(&system)?.norm_j1));
            }
            out.push_str("eigenvalues:\n");
            for (k, z) in rep.eigenvalues.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "  {k:>4}  {:>24} {:>24}  {:<8}  pencil {}",
                    real(z.re),
                    real(z.im),
                    rep.sign_types[k].as_str(),
                    real(run.pencil[k].0)
                );
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct BoundsSummary {
    pub shift: f64,
    pub contraction: f64,
    pub gap_alpha: f64,
    pub norm_j1: f64,
    pub perturbation_norm: f64,
    pub kappas: KappaBundle,
    pub central_gap: Interval,
    pub predicted_general: Option<Interval>,
    pub predicted_exact: Option<Interval>,
    pub improved: Option<Interval>,
    pub uniform: Interval,
}

pub fn bounds_summary(spec: &ModelSpec, delta_v: &SymmetricMatrix, shift: f64) -> Result<BoundsSummary> {
    let system = assemble_system(spec, shift)?;
    let pert = PerturbationSpec::new(&system, delta_v.clone())?;
    let kappas = perturbation_constants(&system, &pert)?;
    let gap_alpha = gap_bound(&system)?;
    let report = eigen_spectrum(&system)?;
    let central_gap = spectral::central_gap(&report, shift)?;
    let shifted = central_gap.translated(-shift);
    let general = kappas.kappa_general;
    let predicted_general = if general.applicable {
        Some(gap_inclusion(shifted, general.value)?.predicted.translated(shift))
    } else {
        None
    };
    let exact = kappas.kappa_exact;
    let predicted_exact = if exact.magnitude() < 1.0 {
        Some(gap_inclusion(shifted, exact.magnitude())?.predicted.translated(shift))
    } else {
        None
    };
    let improved = if exact.applicable {
        Some(improved_inclusion(shifted, exact.minus, exact.plus)?.translated(shift))
    } else {
        None
    };
    let perturbation_norm = perturbation_operator_norm(&system, delta_v)?;
    let norm_j1 = sign_operator(&system)?.norm_j1;
    let uniform = norm_bound_interval(central_gap, perturbation_norm, norm_j1);
    Ok(BoundsSummary {
        shift,
        contraction: system.contraction,
        gap_alpha,
        norm_j1,
        perturbation_norm,
        kappas,
        central_gap,
        predicted_general,
        predicted_exact,
        improved,
        uniform,
    })
}

pub fn cmd_bounds(cfg: &RunConfig) -> Result<String> {
    let model = cfg.resolve_model()?;
    let shift = cfg.resolve_shift(&model)?;
    let dv = cfg.perturbation(&model)?;
    let s = bounds_summary(&model.spec, &dv, shift)?;
    let mut rows: Vec<(String, String, String, String)> = vec![
        ("shift".into(), real(s.shift), String::new(), String::new()),
        ("contraction".into(), real(s.contraction), String::new(), String::new()),
        ("c".into(), real(s.kappas.c), String::new(), String::new()),
        (
            "nu".into(),
            s.kappas.nu.map(real).unwrap_or_default(),
            String::new(),
            String::new(),
        ),
        ("gap_alpha".into(), real(s.gap_alpha), String::new(), String::new()),
        ("norm_j1".into(), real(s.norm_j1), String::new(), String::new()),
        ("perturbation_norm".into(), real(s.perturbation_norm), String::new(), String::new()),
        ("kappa0_hat".into(), real(s.kappas.kappa0_hat), String::new(), String::new()),
        ("kappa_prime_hat".into(), real(s.kappas.kappa_prime_hat), String::new(), String::new()),
    ];
    for (name, pair) in s.kappas.entries() {
        rows.push((name.into(), real(pair.minus), real(pair.plus), csv_bool(pair.applicable).into()));
    }
    let mut intervals = vec![("central_gap", Some(s.central_gap))];
    intervals.push(("predicted_general", s.predicted_general));
    intervals.push(("predicted_exact", s.predicted_exact));
    intervals.push(("improved", s.improved));
    intervals.push(("uniform", Some(s.uniform)));
    for (name, iv) in intervals {
        match iv {
            Some(iv) if !iv.is_empty() => rows.push((name.into(), real(iv.lower), real(iv.upper), "true".into())),
            Some(_) => rows.push((name.into(), String::new(), String::new(), "empty".into())),
            None => rows.push((name.into(), String::new(), String::new(), "not_applicable".into())),
        }
    }
    let mut out = String::new();
    match cfg.format {
        OutputFormat::Csv => {
            out.push_str("name,value,upper,flag\n");
            for (a, b, c, d) in rows {
                let _ = writeln!(out, "{a},{b},{c},{d}");
            }
        }
        OutputFormat::Report => {
            let _ = writeln!(out, "model: {}", model.spec.label);
            for (a, b, c, d) in rows {
                let mut line = format!("{a}: {b}");
                if !c.is_empty() {
                    line = format!("{a}: [{b}, {c}]");
                }
                if !d.is_empty() {
                    line.push_str(&format!("  ({d})"));
                }
                let _ = writeln!(out, "{line}");
            }
        }
    }
    Ok(out)
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<String> {
    let model = cfg.resolve_model()?;
    let shift = match (cfg.shift, model.kind) {
        (ShiftPolicy::Optimized, ModelKind::SquareWell(p)) => p.natural_shift(),
        _ => cfg.resolve_shift(&model)?,
    };
    let dv = cfg.perturbation(&model)?;
    let r = bounds::verify_bounds(&model.spec, &dv, shift)?;
    Ok(render_verification(&r, cfg.format, &model.spec.label))
}

pub fn render_verification(r: &VerificationReport, format: OutputFormat, label: &str) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Csv => {
            out.push_str(
                "record,name,index,eigenvalue,perturbed_re,perturbed_im,relative_deviation,lower,upper,applicable,holds\n",
            );
            for d in &r.deviations {
                let _ = writeln!(
                    out,
                    "eigen,,{},{},{},{},{},,,,",
                    d.index,
                    real(d.eigenvalue),
                    real(d.perturbed_re),
                    real(d.perturbed_im),
                    real(d.relative_deviation)
                );
            }
            let _ = writeln!(
                out,
                "summary,max_relative_deviation,,,,,{},,,,{}",
                real(r.max_relative_deviation),
                csv_bool(r.all_applicable_hold())
            );
            for c in &r.checks {
                let _ = writeln!(
                    out,
                    "kappa,{},,,,,,{},{},{},{}",
                    c.name,
                    real(c.kappa_minus),
                    real(c.kappa_plus),
                    csv_bool(c.applicable),
                    csv_bool(c.holds)
                );
            }
            for c in &r.inclusions {
                let _ = writeln!(
                    out,
                    "inclusion,{},,,,,,{},{},true,{}",
                    c.name,
                    real(c.interval.lower),
                    real(c.interval.upper),
                    csv_bool(c.holds)
                );
            }
        }
        OutputFormat::Report => {
            let _ = writeln!(out, "model: {label}");
            let _ = writeln!(out, "shift: {}", real(r.shift));
            let _ = writeln!(out, "contraction: {}", real(r.contraction));
            let _ = writeln!(out, "perturbed_contraction: {}", real(r.perturbed_contraction));
            let _ = writeln!(out, "max_relative_deviation: {}", sci5(r.max_relative_deviation));
            if r.real_parts_only {
                out.push_str("note: perturbed spectrum is not real; real parts compared\n");
            }
            if r.perturbed_defective {
                out.push_str("note: perturbed operator has a defective eigenvalue\n");
            }
            out.push_str("bounds:\n");
            for c in &r.checks {
                let _ = writeln!(
                    out,
                    "  {:<22} [{}, {}]  applicable={}  holds={}",
                    c.name,
                    sci5(c.kappa_minus),
                    sci5(c.kappa_plus),
                    c.applicable,
                    c.holds
                );
            }
            out.push_str("inclusions:\n");
            for c in &r.inclusions {
                let _ = writeln!(out, "  {:<22} {}  holds={}", c.name, interval_text(&c.interval), c.holds);
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub parameter: f64,
    pub shift: f64,
    pub eigenvalues: Vec<Complex64>,
    pub sign_types: Vec<spectral::SignType>,
    pub defective: bool,
    pub real: bool,
    pub inner_gap: f64,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    pub critical_value: Option<f64>,
}

/// The coupling family `t ↦ (U², t·V₁)` of a model: `τ` for the square
/// well, `α` for the harmonic model, a plain factor on `V` otherwise.
fn unit_coupling(model: &ResolvedModel) -> Result<ModelSpec> {
    match model.kind {
        ModelKind::SquareWell(p) => square_well_model(&SquareWellParams { tau: 1.0, eta: p.eta }),
        ModelKind::Harmonic(p) => harmonic_model(&HarmonicParams { alpha: 1.0, ..p }),
        ModelKind::Explicit => Ok(model.spec.clone()),
    }
}

/// Smallest spacing between neighbouring real eigenvalues, or minus the
/// largest imaginary part when the spectrum is not real. Changes sign
/// where two eigenvalues collide and leave the axis; zero at the collision.
fn inner_gap(report: &SpectrumReport) -> f64 {
    if report.defective {
        return 0.0;
    }
    if !report.is_real_spectrum {
        return -report.max_imaginary();
    }
    let re = report.real_parts();
    re.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

pub fn sweep(model: &ResolvedModel, policy: ShiftPolicy, range: (f64, f64), steps: usize) -> Result<SweepResult> {
    if steps < 2 {
        return Err(Error::InvalidArgument(format!("steps = {steps} must be at least 2")));
    }
    let (a, b) = range;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidArgument(format!("sweep range {a}:{b} is not an increasing interval")));
    }
    let unit = unit_coupling(model)?;
    let shift_at = |t: f64| -> Result<f64> {
        match (policy, model.kind) {
            (ShiftPolicy::Explicit(mu), _) => Ok(mu),
            (ShiftPolicy::Optimized, _) => Ok(optimize_shift(&unit.with_coupling(t))?.0),
            (_, ModelKind::SquareWell(_)) => Ok(-0.5 * t),
            _ => Ok(0.0),
        }
    };
    let evaluate = |t: f64| -> Result<SweepPoint> {
        let spec = unit.with_coupling(t);
        let shift = shift_at(t)?;
        let report = eigen_spectrum(&assemble_system(&spec, shift)?)?;
        Ok(SweepPoint {
            parameter: t,
            shift,
            inner_gap: inner_gap(&report),
            defective: report.defective,
            real: report.is_real_spectrum,
            sign_types: report.sign_types.clone(),
            eigenvalues: report.eigenvalues,
        })
    };
    let mut points = Vec::with_capacity(steps);
    for k in 0..steps {
        let t = if k + 1 == steps {
            b
        } else {
            a + (b - a) * k as f64 / (steps - 1) as f64
        };
        points.push(evaluate(t)?);
    }

    let mut critical_value = None;
    if let Some(k) = points.windows(2).position(|w| w[0].inner_gap > 0.0 && w[1].inner_gap <= 0.0) {
        let (mut lo, mut hi) = (points[k].parameter, points[k + 1].parameter);
        let tol = 1e-8 * (b - a).max(1.0);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if evaluate(mid)?.inner_gap > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        critical_value = Some(0.5 * (lo + hi));
    }
    Ok(SweepResult { points, critical_value })
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<String> {
    let model = cfg.resolve_model()?;
    let range = cfg
        .sweep_range
        .ok_or_else(|| Error::InvalidArgument("sweep needs --sweep-range a:b".into()))?;
    let result = sweep(&model, cfg.shift, range, cfg.steps)?;
    let mut out = String::new();
    match cfg.format {
        OutputFormat::Csv => {
            out.push_str("record,parameter,shift,index,eigenvalue_re,eigenvalue_im,sign_type,real_spectrum,defective\n");
            for p in &result.points {
                for (k, z) in p.eigenvalues.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "eigen,{},{},{k},{},{},{},{},{}",
                        real(p.parameter),
                        real(p.shift),
                        real(z.re),
                        real(z.im),
                        p.sign_types[k].as_str(),
                        csv_bool(p.real),
                        csv_bool(p.defective)
                    );
                }
            }
            if let Some(c) = result.critical_value {
                let _ = writeln!(out, "critical,{},,,,,,,", real(c));
            }
        }
        OutputFormat::Report => {
            let _ = writeln!(out, "model: {}", model.spec.label);
            let _ = writeln!(out, "range: [{}, {}] in {} steps", range.0, range.1, cfg.steps);
            match result.critical_value {
                Some(c) => {
                    let _ = writeln!(out, "critical_coupling: {}", real(c));
                }
                None => out.push_str("critical_coupling: none in range\n"),
            }
            let first_complex = result.points.iter().find(|p| !p.real);
            if let Some(p) = first_complex {
                let _ = writeln!(out, "first_complex_sample: {}", real(p.parameter));
            }
            let defective: Vec<String> = result
                .points
                .iter()
                .filter(|p| p.defective)
                .map(|p| real(p.parameter))
                .collect();
            let _ = writeln!(out, "defective_samples: [{}]", defective.join(", "));
        }
    }
    Ok(out)
}

pub const EXAMPLE2_TAUS: [f64; 3] = [0.0, 1.0, 1.7];
pub const EXAMPLE2_ETAS: [f64; 3] = [0.001, 0.1, 0.3];

#[derive(Debug, Clone)]
pub struct Example2Cell {
    pub tau: f64,
    pub eta: f64,
    pub true_distance: f64,
    /// `η/(1 - τ/2)`, i.e. `‖δV‖‖U^{-1}‖/(1 - b)`.
    pub bound: f64,
    pub bound_applicable: bool,
    pub kappa_general: f64,
    pub kappa_exact: f64,
    pub all_applicable_hold: bool,
}

#[derive(Debug, Clone)]
pub struct Example2Diagnostics {
    pub tau: f64,
    pub contraction: f64,
    /// `‖V (U²)^{-1}‖/τ`
    pub v_over_u_squared: f64,
    /// `‖V U^{-1}‖/τ`
    pub v_over_u: f64,
}

#[derive(Debug, Clone)]
pub struct Example2 {
    pub cells: Vec<Example2Cell>,
    pub diagnostics: Vec<Example2Diagnostics>,
}

pub fn example2() -> Result<Example2> {
    let mut cells = Vec::new();
    let mut diagnostics = Vec::new();
    for tau in EXAMPLE2_TAUS {
        let spec = square_well_model(&SquareWellParams::new(tau))?;
        let shift = -0.5 * tau;
        for eta in EXAMPLE2_ETAS {
            let r = bounds::verify_bounds(&spec, &square_well_perturbation(eta), shift)?;
            cells.push(Example2Cell {
                tau,
                eta,
                true_distance: r.max_relative_deviation,
                bound: r.kappas.kappa_split.value,
                bound_applicable: r.kappas.kappa_split.applicable,
                kappa_general: r.kappas.kappa_general.value,
                kappa_exact: r.kappas.kappa_exact.magnitude(),
                all_applicable_hold: r.all_applicable_hold(),
            });
        }
        let diag_tau = if tau == 0.0 { 1.0 } else { tau };
        let spec_d = square_well_model(&SquareWellParams::new(diag_tau))?;
        let powers = UPowers::new(spec_d.u_squared())?;
        let v = spec_d.v().as_array();
        let u2_inv = spec_d.u_squared().eigen()?.apply(|x| 1.0 / x);
        diagnostics.push(Example2Diagnostics {
            tau,
            contraction: contraction_bound(&spec, shift)?,
            v_over_u_squared: linalg::spectral_norm(&v.dot(&u2_inv))? / diag_tau,
            v_over_u: linalg::spectral_norm(&v.dot(powers.u_inv.as_array()))? / diag_tau,
        });
    }
    Ok(Example2 { cells, diagnostics })
}

fn render_example2(e: &Example2, format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Csv => {
            out.push_str("tau,eta,true_distance,bound,bound_applicable,kappa_general,kappa_exact,all_applicable_hold\n");
            for c in &e.cells {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    real(c.tau),
                    real(c.eta),
                    real(c.true_distance),
                    real(c.bound),
                    csv_bool(c.bound_applicable),
                    real(c.kappa_general),
                    real(c.kappa_exact),
                    csv_bool(c.all_applicable_hold)
                );
            }
        }
        OutputFormat::Report => {
            let table = |title: &str, f: &dyn Fn(&Example2Cell) -> String| {
                let mut t = format!("{title}\n        ");
                for eta in EXAMPLE2_ETAS {
                    t.push_str(&format!("  {:>12}", format!("eta = {eta}")));
                }
                t.push('\n');
                for tau in EXAMPLE2_TAUS {
                    t.push_str(&format!("{:<8}", format!("t = {tau}")));
                    for c in e.cells.iter().filter(|c| c.tau == tau) {
                        t.push_str(&format!("  {:>12}", f(c)));
                    }
                    t.push('\n');
                }
                t
            };
            out.push_str("square well U^2 = [[2,-1],[-1,2]], V = t*diag(-1,0), dV = diag(-eta,0), shift -t/2\n\n");
            out.push_str(&table("max relative distance |l' - l|/|l + t/2|", &|c| sci5(c.true_distance)));
            out.push('\n');
            out.push_str(&table("bound eta/(1 - t/2)", &|c| {
                let s = sci5_trimmed(c.bound);
                if c.bound_applicable {
                    s
                } else {
                    format!("{s}*")
                }
            }));
            out.push_str("  * bound >= 1, not applicable\n\n");
            out.push_str(&table("bound c/(1 - b) with c = |dV U^-1|", &|c| sci5(c.kappa_general)));
            out.push('\n');
            out.push_str(&table("exact max |dg/g|", &|c| sci5(c.kappa_exact)));
            out.push('\n');
            out.push_str("diagnostics\n");
            for d in &e.diagnostics {
                let _ = writeln!(
                    out,
                    "  t = {:<4} contraction at -t/2 = {}  |V U^-2|/t = {}  |V U^-1|/t = {}",
                    d.tau,
                    sci5(d.contraction),
                    sci5(d.v_over_u_squared),
                    sci5(d.v_over_u)
                );
            }
            out.push_str(
                "  note: |V U^-1|/t = sqrt(2/3) = 0.8165 with U = sqrt(U^2); the value 0.745 = sqrt(5)/3 is |V (U^2)^-1|/t\n",
            );
            out.push_str("  note: the last coupling is t = 1.7; t = 1.8 does not reproduce the bound 6.6667e-03\n");
            out.push_str("  note: at t = 1.7, eta = 0.3 the perturbed system is the defective well t = 2\n");
        }
    }
    out
}

pub const EXAMPLE1_ALPHAS: [f64; 3] = [0.0, 0.3, 0.6];
pub const EXAMPLE1_BETAS: [f64; 2] = [0.0, 1.0];
pub const EXAMPLE1_LEVELS: usize = 3;

#[derive(Debug, Clone)]
pub struct Example1Row {
    pub alpha: f64,
    pub beta: f64,
    pub level: usize,
    pub computed_plus: f64,
    pub computed_minus: f64,
    pub exact_plus: f64,
    pub exact_minus: f64,
}

impl Example1Row {
    pub fn max_error(&self) -> f64 {
        (self.computed_plus - self.exact_plus)
            .abs()
            .max((self.computed_minus - self.exact_minus).abs())
    }
}

#[derive(Debug, Clone)]
pub struct Example1Sensitivity {
    pub alpha: f64,
    pub epsilon: f64,
    /// `(μ(α+ε) - μ(α))/(μ(α) ε)` from the discretization.
    pub computed_ratio: f64,
    /// `-(3/2)α/(1-α²)`
    pub exact_ratio: f64,
    /// `c/(1-b)` for `δV = εx`, divided by `ε`.
    pub bound_ratio: f64,
    /// `ε/(1-α)` divided by `ε`.
    pub paper_bound_ratio: f64,
}

#[derive(Debug, Clone)]
pub struct Example1 {
    pub grid_points: usize,
    pub half_width: f64,
    pub rows: Vec<Example1Row>,
    pub contractions: Vec<(f64, f64)>,
    pub sensitivity: Example1Sensitivity,
}

/// Lowest `levels` positive and negative eigenvalues of the discretized
/// harmonic model at shift zero, with the contraction there.
pub fn harmonic_levels(p: &HarmonicParams, levels: usize) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let spec = harmonic_model(p)?;
    let system = assemble_system(&spec, 0.0)?;
    let values = spectral::similarity_eigenvalues(&system)?;
    let plus: Vec<f64> = values.iter().copied().filter(|&l| l > 0.0).take(levels).collect();
    let minus: Vec<f64> = values.iter().rev().copied().filter(|&l| l < 0.0).take(levels).collect();
    if plus.len() < levels || minus.len() < levels {
        return Err(Error::Solver("harmonic spectrum has too few levels".into()));
    }
    Ok((plus, minus, system.contraction))
}

pub fn example1(grid_points: usize, half_width: f64) -> Result<Example1> {
    let mut rows = Vec::new();
    let mut contractions = Vec::new();
    for alpha in EXAMPLE1_ALPHAS {
        for beta in EXAMPLE1_BETAS {
            let p = HarmonicParams {
                alpha,
                beta,
                grid_points,
                half_width,
            };
            let (plus, minus, b) = harmonic_levels(&p, EXAMPLE1_LEVELS)?;
            if beta == 0.0 {
                contractions.push((alpha, b));
            }
            for level in 0..EXAMPLE1_LEVELS {
                let (ep, em) = exact_harmonic_eigs(alpha, beta, level)?;
                rows.push(Example1Row {
                    alpha,
                    beta,
                    level,
                    computed_plus: plus[level],
                    computed_minus: minus[level],
                    exact_plus: ep,
                    exact_minus: em,
                });
            }
        }
    }
    let sensitivity = example1_sensitivity(grid_points, half_width, 0.5, 1e-4)?;
    Ok(Example1 {
        grid_points,
        half_width,
        rows,
        contractions,
        sensitivity,
    })
}

pub fn example1_sensitivity(grid_points: usize, half_width: f64, alpha: f64, epsilon: f64) -> Result<Example1Sensitivity> {
    let p = HarmonicParams {
        alpha,
        beta: 0.0,
        grid_points,
        half_width,
    };
    let (base, _, _) = harmonic_levels(&p, 1)?;
    let (moved, _, _) = harmonic_levels(&HarmonicParams { alpha: alpha + epsilon, ..p }, 1)?;
    let spec = harmonic_model(&p)?;
    let system = assemble_system(&spec, 0.0)?;
    let dv = SymmetricMatrix::from_diagonal(&p.grid().iter().map(|x| epsilon * x).collect::<Vec<_>>());
    let c = linalg::spectral_norm(&dv.as_array().dot(system.powers.u_inv.as_array()))?;
    Ok(Example1Sensitivity {
        alpha,
        epsilon,
        computed_ratio: (moved[0] - base[0]) / base[0] / epsilon,
        exact_ratio: harmonic_sensitivity(alpha)?,
        bound_ratio: c / (1.0 - system.contraction) / epsilon,
        paper_bound_ratio: 1.0 / (1.0 - alpha),
    })
}

fn render_example1(e: &Example1, format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Csv => {
            out.push_str("alpha,beta,level,computed_plus,exact_plus,computed_minus,exact_minus,max_abs_error\n");
            for r in &e.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    real(r.alpha),
                    real(r.beta),
                    r.level,
                    real(r.computed_plus),
                    real(r.exact_plus),
                    real(r.computed_minus),
                    real(r.exact_minus),
                    real(r.max_error())
                );
            }
        }
        OutputFormat::Report => {
            let _ = writeln!(
                out,
                "harmonic oscillator U^2 = -d^2/dx^2 + x^2 + beta, V = alpha x, N = {}, L = {}",
                e.grid_points, e.half_width
            );
            out.push_str("exact: +-sqrt((1-a^2) beta + (1-a^2)^(3/2) (1+2n))\n\n");
            out.push_str(" alpha  beta  n    computed+      exact+   computed-      exact-    max err\n");
            for r in &e.rows {
                let _ = writeln!(
                    out,
                    " {:>5} {:>5} {:>2} {:>12.6} {:>11.6} {:>11.6} {:>11.6} {:>10}",
                    r.alpha,
                    r.beta,
                    r.level,
                    r.computed_plus,
                    r.exact_plus,
                    r.computed_minus,
                    r.exact_minus,
                    sci5(r.max_error())
                );
            }
            out.push_str("\ncontraction |alpha x U^-1| at beta = 0\n");
            for (a, b) in &e.contractions {
                let _ = writeln!(out, "  alpha = {a:<4} b = {}", sci5(*b));
            }
            let s = &e.sensitivity;
            let _ = writeln!(
                out,
                "\nsensitivity at alpha = {}, eps = {:e}\n  computed (mu(a+eps)-mu(a))/(mu eps) = {}\n  exact -(3/2)a/(1-a^2)               = {}\n  bound c/(1-b) per eps                = {}\n  bound 1/(1-a)                        = {}\n  exact/bound factor (3/2)a/(1+a)      = {}",
                s.alpha,
                s.epsilon,
                sci5(s.computed_ratio),
                sci5(s.exact_ratio),
                sci5(s.bound_ratio),
                sci5(s.paper_bound_ratio),
                sci5(s.exact_ratio.abs() / s.paper_bound_ratio)
            );
        }
    }
    out
}

pub fn cmd_reproduce(which: Example, cfg: &RunConfig) -> Result<String> {
    match which {
        Example::Example2 => Ok(render_example2(&example2()?, cfg.format)),
        Example::Example1 => {
            let e = example1(cfg.harmonic.grid_points, cfg.harmonic.half_width)?;
            Ok(render_example1(&e, cfg.format))
        }
    }
}
