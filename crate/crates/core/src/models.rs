//! Example systems, random specs for property checks, and model files.

use std::fs;
use std::path::Path;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::linalg::{self, SymmetricMatrix};
use crate::operator::{contraction_bound, ModelSpec};

pub const DEFAULT_GRID_POINTS: usize = 1000;
pub const DEFAULT_HALF_WIDTH: f64 = 12.0;

/// `U² = -d²/dx² + x² + β`, `V = αx` on `(-L, L)` with Dirichlet ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicParams {
    pub alpha: f64,
    pub beta: f64,
    pub grid_points: usize,
    pub half_width: f64,
}

impl Default for HarmonicParams {
    fn default() -> Self {
        HarmonicParams {
            alpha: 0.0,
            beta: 0.0,
            grid_points: DEFAULT_GRID_POINTS,
            half_width: DEFAULT_HALF_WIDTH,
        }
    }
}

impl HarmonicParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::AlphaOutOfRange(self.alpha));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidArgument(format!("beta = {} must be nonnegative", self.beta)));
        }
        if self.grid_points < 3 {
            return Err(Error::InvalidArgument(format!(
                "grid_points = {} must be at least 3",
                self.grid_points
            )));
        }
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "half_width = {} must be positive",
                self.half_width
            )));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.grid_points as f64 + 1.0)
    }

    /// Interior grid points `x_i = -L + i·h`, `i = 1..N`.
    pub fn grid(&self) -> Vec<f64> {
        let h = self.step();
        (1..=self.grid_points).map(|i| -self.half_width + i as f64 * h).collect()
    }
}

pub fn harmonic_model(p: &HarmonicParams) -> Result<ModelSpec> {
    p.validate()?;
    let n = p.grid_points;
    let h2 = p.step() * p.step();
    let x = p.grid();
    let mut u2 = Array2::zeros((n, n));
    for i in 0..n {
        u2[[i, i]] = 2.0 / h2 + x[i] * x[i] + p.beta;
        if i + 1 < n {
            u2[[i, i + 1]] = -1.0 / h2;
            u2[[i + 1, i]] = -1.0 / h2;
        }
    }
    let v: Vec<f64> = x.iter().map(|xi| p.alpha * xi).collect();
    ModelSpec::new(
        SymmetricMatrix::new(u2)?,
        SymmetricMatrix::from_diagonal(&v),
        format!("harmonic alpha={} beta={} N={} L={}", p.alpha, p.beta, n, p.half_width),
    )
}

/// `±√((1-α²)β + (1-α²)^{3/2}(1+2n))`, the `n`-th positive and negative
/// eigenvalue of the continuum harmonic problem.
pub fn exact_harmonic_eigs(alpha: f64, beta: f64, n: usize) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let s = 1.0 - alpha * alpha;
    let mu = (s * beta + s.powf(1.5) * (1.0 + 2.0 * n as f64)).sqrt();
    Ok((mu, -mu))
}

/// `μ'(α)/μ(α)` at `β = 0`, i.e. `-(3/2)α/(1-α²)`.
pub fn harmonic_sensitivity(alpha: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    Ok(-1.5 * alpha / (1.0 - alpha * alpha))
}

/// `U² = [[2, -1], [-1, 2]]`, `V = τ·diag(-1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareWellParams {
    pub tau: f64,
    pub eta: Option<f64>,
}

impl SquareWellParams {
    pub fn new(tau: f64) -> Self {
        SquareWellParams { tau, eta: None }
    }

    /// `μ = -τ/2`, where the contraction equals `τ/2`.
    pub fn natural_shift(&self) -> f64 {
        -0.5 * self.tau
    }
}

pub fn square_well_u_squared() -> SymmetricMatrix {
    SymmetricMatrix::from_rows(&[vec![2.0, -1.0], vec![-1.0, 2.0]]).expect("constant matrix is symmetric")
}

pub fn square_well_model(p: &SquareWellParams) -> Result<ModelSpec> {
    if !(p.tau >= 0.0 && p.tau.is_finite()) {
        return Err(Error::InvalidArgument(format!("tau = {} must be nonnegative", p.tau)));
    }
    ModelSpec::new(
        square_well_u_squared(),
        SymmetricMatrix::from_diagonal(&[-p.tau, 0.0]),
        format!("square well tau={}", p.tau),
    )
}

/// `δV = diag(-η, 0)`: the well is deepened by `η`, so `V + δV` is the
/// square well at coupling `τ + η`.
pub fn square_well_perturbation(eta: f64) -> SymmetricMatrix {
    SymmetricMatrix::from_diagonal(&[-eta, 0.0])
}

/// Symmetric matrix with entries uniform on `[-scale, scale]`.
pub fn random_perturbation(order: usize, scale: f64, seed: u64) -> Result<SymmetricMatrix> {
    if !(scale >= 0.0 && scale.is_finite()) {
        return Err(Error::InvalidArgument(format!("scale = {scale} must be nonnegative")));
    }
    if order == 0 {
        return Err(Error::InvalidArgument("order must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_symmetric(&mut rng, order, scale))
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> SymmetricMatrix {
    let mut m = Array2::zeros((n, n));
    for i in 0..n {
        for j in i..n {
            let x = if scale > 0.0 { rng.gen_range(-scale..=scale) } else { 0.0 };
            m[[i, j]] = x;
            m[[j, i]] = x;
        }
    }
    SymmetricMatrix::symmetric_part(&m)
}

fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> Array2<f64> {
    let m = random_symmetric(rng, n, 1.0);
    linalg::sym_eigen(m.as_array()).expect("symmetric eigensolve").vectors
}

/// `Q diag(d) Qᵀ`
fn conjugated_diagonal(q: &Array2<f64>, d: &[f64]) -> SymmetricMatrix {
    let scaled = q * &ndarray::Array1::from(d.to_vec());
    SymmetricMatrix::symmetric_part(&scaled.dot(&q.t()))
}

/// Random `U²` with spectrum in `[0.5, 4.5]` and a potential scaled so that
/// the contraction at shift zero equals `contraction`.
pub fn random_spec(rng: &mut ChaCha8Rng, n: usize, contraction: f64) -> Result<ModelSpec> {
    let q = random_orthogonal(rng, n);
    let d: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..4.5)).collect();
    let u2 = conjugated_diagonal(&q, &d);
    let v = random_symmetric(rng, n, 1.0);
    let raw = ModelSpec::new(u2.clone(), v.clone(), "random")?;
    let b = contraction_bound(&raw, 0.0)?;
    let v = if b > 0.0 { v.scaled(contraction / b) } else { v };
    ModelSpec::new(u2, v, format!("random n={n} b={contraction:.4}"))
}

/// A model and perturbation whose potentials commute and satisfy
/// `v_i·δv_i ≤ 0` (`nonpositive`) or `≥ 0` in a common eigenbasis, so that
/// `V δV` has one sign.
pub fn random_signed_pair(
    rng: &mut ChaCha8Rng,
    n: usize,
    contraction: f64,
    relative_size: f64,
    nonpositive: bool,
) -> Result<(ModelSpec, SymmetricMatrix)> {
    let q_u = random_orthogonal(rng, n);
    let d: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..4.5)).collect();
    let u2 = conjugated_diagonal(&q_u, &d);
    let q = random_orthogonal(rng, n);
    let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let dv: Vec<f64> = v
        .iter()
        .map(|&vi| {
            let mag = rng.gen_range(0.0..1.0);
            if (vi >= 0.0) == nonpositive {
                -mag
            } else {
                mag
            }
        })
        .collect();
    let raw = ModelSpec::new(u2.clone(), conjugated_diagonal(&q, &v), "signed")?;
    let b = contraction_bound(&raw, 0.0)?;
    let scale = if b > 0.0 { contraction / b } else { 1.0 };
    let spec = ModelSpec::new(
        u2,
        conjugated_diagonal(&q, &v).scaled(scale),
        format!("signed pair n={n}"),
    )?;
    let dv = conjugated_diagonal(&q, &dv);
    let c = linalg::spectral_norm(&dv.as_array().dot(&crate::operator::UPowers::new(spec.u_squared())?.u_inv.into_array()))?;
    let target = relative_size * (1.0 - contraction);
    let dv = if c > 0.0 { dv.scaled(target / c) } else { dv };
    Ok((spec, dv))
}

/// Diagonal potentials on complementary index sets, so `δV·V = 0`.
pub fn random_disjoint_pair(
    rng: &mut ChaCha8Rng,
    n: usize,
    contraction: f64,
    perturbation_norm: f64,
) -> Result<(ModelSpec, SymmetricMatrix)> {
    if n < 2 {
        return Err(Error::InvalidArgument("disjoint pairs need order at least 2".into()));
    }
    let q = random_orthogonal(rng, n);
    let d: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..4.5)).collect();
    let u2 = conjugated_diagonal(&q, &d);
    let split = rng.gen_range(1..n);
    let v: Vec<f64> = (0..n)
        .map(|i| if i < split { rng.gen_range(-1.0..1.0) } else { 0.0 })
        .collect();
    let dv: Vec<f64> = (0..n)
        .map(|i| if i >= split { rng.gen_range(-1.0..1.0) } else { 0.0 })
        .collect();
    let raw = ModelSpec::new(u2.clone(), SymmetricMatrix::from_diagonal(&v), "disjoint")?;
    let b = contraction_bound(&raw, 0.0)?;
    let scale = if b > 0.0 { contraction / b } else { 1.0 };
    let spec = ModelSpec::new(
        u2,
        SymmetricMatrix::from_diagonal(&v).scaled(scale),
        format!("disjoint pair n={n}"),
    )?;
    let dv = SymmetricMatrix::from_diagonal(&dv);
    let norm = dv.spectral_norm()?;
    let dv = if norm > 0.0 { dv.scaled(perturbation_norm / norm) } else { dv };
    Ok((spec, dv))
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Contents of a model file.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelFile {
    Explicit(ModelSpec),
    Harmonic(HarmonicParams),
    SquareWell(SquareWellParams),
}

impl ModelFile {
    pub fn build(&self) -> Result<ModelSpec> {
        match self {
            ModelFile::Explicit(spec) => Ok(spec.clone()),
            ModelFile::Harmonic(p) => harmonic_model(p),
            ModelFile::SquareWell(p) => square_well_model(p),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitFile {
    #[serde(default)]
    label: String,
    u_squared: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HarmonicFile {
    #[allow(dead_code)]
    model: String,
    alpha: f64,
    #[serde(default)]
    beta: f64,
    #[serde(default = "default_grid_points")]
    grid_points: usize,
    #[serde(default = "default_half_width")]
    half_width: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SquareWellFile {
    #[allow(dead_code)]
    model: String,
    tau: f64,
    eta: Option<f64>,
}

fn default_grid_points() -> usize {
    DEFAULT_GRID_POINTS
}

fn default_half_width() -> f64 {
    DEFAULT_HALF_WIDTH
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn validation(e: Error) -> Error {
    match e {
        Error::Validation(_) => e,
        Error::NotPositiveDefinite { min_eigenvalue, .. } => Error::Validation(format!(
            "u_squared is not positive definite (smallest eigenvalue {min_eigenvalue:e})"
        )),
        other => Error::Validation(other.to_string()),
    }
}

pub fn parse_model(text: &str) -> Result<ModelFile> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(parse_error)?;
    let kind = value.get("model").and_then(|m| m.as_str()).map(str::to_owned);
    match kind.as_deref() {
        None => {
            let f: ExplicitFile = serde_json::from_str(text).map_err(parse_error)?;
            let u2 = SymmetricMatrix::from_rows(&f.u_squared).map_err(|e| validation_for("u_squared", e))?;
            let v = SymmetricMatrix::from_rows(&f.v).map_err(|e| validation_for("v", e))?;
            let spec = ModelSpec::new(u2, v, f.label).map_err(validation)?;
            Ok(ModelFile::Explicit(spec))
        }
        Some("harmonic") => {
            let f: HarmonicFile = serde_json::from_str(text).map_err(parse_error)?;
            let p = HarmonicParams {
                alpha: f.alpha,
                beta: f.beta,
                grid_points: f.grid_points,
                half_width: f.half_width,
            };
            p.validate()?;
            Ok(ModelFile::Harmonic(p))
        }
        Some("square_well") => {
            let f: SquareWellFile = serde_json::from_str(text).map_err(parse_error)?;
            if !(f.tau >= 0.0) {
                return Err(Error::Validation(format!("tau = {} must be nonnegative", f.tau)));
            }
            Ok(ModelFile::SquareWell(SquareWellParams { tau: f.tau, eta: f.eta }))
        }
        Some(other) => Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("unknown model kind `{other}` (expected `harmonic` or `square_well`)"),
        }),
    }
}

fn validation_for(field: &str, e: Error) -> Error {
    match validation(e) {
        Error::Validation(msg) => Error::Validation(format!("{field}: {msg}")),
        other => other,
    }
}

pub fn read_model_file(path: impl AsRef<Path>) -> Result<ModelFile> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_model(&text)
}

pub fn load_model(path: impl AsRef<Path>) -> Result<ModelSpec> {
    read_model_file(path)?.build()
}

fn write_matrix(out: &mut String, m: &SymmetricMatrix) {
    out.push_str("[\n");
    let rows = m.to_rows();
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
        out.push_str("    [");
        out.push_str(&cells.join(", "));
        out.push(']');
        if i + 1 < rows.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("  ]");
}

/// Explicit JSON form, every real written with 17 significant digits.
pub fn model_to_json(spec: &ModelSpec) -> String {
    let mut out = String::from("{\n  \"label\": ");
    out.push_str(&serde_json::to_string(&spec.label).expect("string serializes"));
    out.push_str(",\n  \"u_squared\": ");
    write_matrix(&mut out, spec.u_squared());
    out.push_str(",\n  \"v\": ");
    write_matrix(&mut out, spec.v());
    out.push_str("\n}\n");
    out
}

pub fn save_model(spec: &ModelSpec, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, model_to_json(spec)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{assemble_system, contraction_bound};
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_harmonic_values() {
        assert_eq!(exact_harmonic_eigs(0.0, 0.0, 0).unwrap(), (1.0, -1.0));
        let (p, m) = exact_harmonic_eigs(0.0, 0.0, 2).unwrap();
        assert_abs_diff_eq!(p, 5.0_f64.sqrt(), epsilon = 1e-15);
        assert_eq!(m, -p);
        let (p, _) = exact_harmonic_eigs(0.6, 0.0, 0).unwrap();
        assert_abs_diff_eq!(p, 0.64_f64.powf(0.75), epsilon = 1e-15);
        assert!(matches!(exact_harmonic_eigs(1.0, 0.0, 0), Err(Error::AlphaOutOfRange(_))));
    }

    #[test]
    fn sensitivity_values() {
        assert_eq!(harmonic_sensitivity(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(harmonic_sensitivity(0.5).unwrap(), -1.0, epsilon = 1e-15);
        let eps = 1e-4;
        let (m0, _) = exact_harmonic_eigs(0.5, 0.0, 0).unwrap();
        let (m1, _) = exact_harmonic_eigs(0.5 + eps, 0.0, 0).unwrap();
        let ratio = (m1 - m0) / m0 / eps;
        assert!((ratio + 1.0).abs() < 1e-3, "{ratio}");
        assert!(matches!(harmonic_sensitivity(1.2), Err(Error::AlphaOutOfRange(_))));
    }

    #[test]
    fn harmonic_grid_and_free_case() {
        let p = HarmonicParams {
            alpha: 0.0,
            beta: 0.0,
            grid_points: 9,
            half_width: 5.0,
        };
        let x = p.grid();
        assert_abs_diff_eq!(x[0], -4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(x[4], 0.0, epsilon = 1e-14);
        let spec = harmonic_model(&p).unwrap();
        assert!(spec.v().as_array().iter().all(|&v| v == 0.0));
        assert_eq!(contraction_bound(&spec, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn square_well_shift_gives_half_tau() {
        for tau in [0.5, 1.0, 1.7] {
            let spec = square_well_model(&SquareWellParams::new(tau)).unwrap();
            let b = contraction_bound(&spec, -tau / 2.0).unwrap();
            assert_abs_diff_eq!(b, tau / 2.0, epsilon = 1e-12);
        }
        assert!(square_well_model(&SquareWellParams::new(0.0)).unwrap().v().as_array().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn perturbed_well_is_deeper_well() {
        let spec = square_well_model(&SquareWellParams::new(1.7)).unwrap();
        let deeper = spec.perturbed(&square_well_perturbation(0.3)).unwrap();
        let direct = square_well_model(&SquareWellParams::new(2.0)).unwrap();
        assert_abs_diff_eq!(deeper.v().as_array(), direct.v().as_array(), epsilon = 1e-15);
    }

    #[test]
    fn random_perturbation_is_deterministic() {
        let a = random_perturbation(4, 0.1, 42).unwrap();
        let b = random_perturbation(4, 0.1, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.spectral_norm().unwrap() <= 0.4);
        assert!(random_perturbation(3, 0.0, 1).unwrap().as_array().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn random_spec_hits_contraction() {
        let mut rng = seeded_rng(3);
        let spec = random_spec(&mut rng, 5, 0.6).unwrap();
        assert_abs_diff_eq!(contraction_bound(&spec, 0.0).unwrap(), 0.6, epsilon = 1e-10);
    }

    #[test]
    fn structured_pairs_have_structure() {
        let mut rng = seeded_rng(8);
        let (spec, dv) = random_disjoint_pair(&mut rng, 5, 0.5, 0.1).unwrap();
        let sys = assemble_system(&spec, 0.0).unwrap();
        assert!(crate::bounds::PerturbationSpec::new(&sys, dv).unwrap().disjoint);
        for nonpositive in [true, false] {
            let (spec, dv) = random_signed_pair(&mut rng, 5, 0.5, 0.3, nonpositive).unwrap();
            let sys = assemble_system(&spec, 0.0).unwrap();
            let p = crate::bounds::PerturbationSpec::new(&sys, dv).unwrap();
            let want = if nonpositive {
                crate::bounds::SignCondition::NonPositive
            } else {
                crate::bounds::SignCondition::NonNegative
            };
            assert_eq!(p.signed, Some(want));
            assert_abs_diff_eq!(p.c, 0.3 * 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn parse_errors_name_the_field() {
        let err = parse_model("{\n  \"label\": \"x\",\n  \"v\": [[1.0]]\n}").unwrap_err();
        match err {
            Error::Parse { message, line, .. } => {
                assert!(message.contains("u_squared"), "{message}");
                assert!(line >= 1);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_model("{ \"u_squared\": [[1.0]], "), Err(Error::Parse { .. })));
        assert!(matches!(parse_model("{\"model\": \"cubic\"}"), Err(Error::Parse { .. })));
    }

    #[test]
    fn validation_errors() {
        let asym = r#"{"u_squared": [[2.0, 0.0], [0.0, 2.0]], "v": [[0.0, 1.0], [0.5, 0.0]]}"#;
        assert!(matches!(parse_model(asym), Err(Error::Validation(_))));
        let indefinite = r#"{"u_squared": [[1.0, 2.0], [2.0, 1.0]], "v": [[0.0, 0.0], [0.0, 0.0]]}"#;
        assert!(matches!(parse_model(indefinite), Err(Error::Validation(_))));
        let ragged = r#"{"u_squared": [[1.0, 0.0], [0.0]], "v": [[0.0, 0.0], [0.0, 0.0]]}"#;
        assert!(matches!(parse_model(ragged), Err(Error::Validation(_))));
    }

    #[test]
    fn parameterized_files() {
        let f = parse_model(r#"{"model": "square_well", "tau": 1.5}"#).unwrap();
        assert_eq!(f, ModelFile::SquareWell(SquareWellParams::new(1.5)));
        let f = parse_model(r#"{"model": "harmonic", "alpha": 0.3, "beta": 1, "grid_points": 50, "half_width": 8}"#).unwrap();
        match f {
            ModelFile::Harmonic(p) => assert_eq!((p.grid_points, p.half_width), (50, 8.0)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn json_round_trip_is_exact() {
        let spec = ModelSpec::new(
            SymmetricMatrix::from_rows(&[vec![2.0, -1.0 / 3.0], vec![-1.0 / 3.0, std::f64::consts::PI]]).unwrap(),
            SymmetricMatrix::from_diagonal(&[0.1, -1e-300]),
            "round \"trip\"",
        )
        .unwrap();
        let back = parse_model(&model_to_json(&spec)).unwrap().build().unwrap();
        assert_eq!(back, spec);
    }
}
