//! Relative perturbation constants for `V -> V + δV` and the spectral
//! intervals they certify.
//!
//! Everything is measured against the shifted form `g = G - μJ`; with
//! `δg = G' - G` a constant `κ` certifies `|δg| ≤ κ g`, and a pair
//! `(κ₋, κ₊)` certifies `κ₋ g ≤ δg ≤ κ₊ g`.

use ndarray::Array2;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, SymmetricMatrix};
use crate::operator::{assemble_system, KleinGordonSystem, ModelSpec};
use crate::spectral::{eigen_spectrum, sign_operator, Interval, SpectrumReport};

/// Relative tolerance for the disjoint-support and sign tests on
/// `δAᵀA + AᵀδA`, scaled by `‖A‖·‖δA‖`.
pub const STRUCTURE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignCondition {
    /// `δAᵀA + AᵀδA ≤ 0`
    NonPositive,
    /// `δAᵀA + AᵀδA ≥ 0`
    NonNegative,
}

#[derive(Debug, Clone)]
pub struct PerturbationSpec {
    pub delta_v: SymmetricMatrix,
    /// `δA = δV U^{-1}`
    pub delta_a: Array2<f64>,
    /// `‖δV U^{-1}‖`
    pub c: f64,
    /// `‖δV‖·‖U^{-1}‖`, the cruder bound on `c`.
    pub c_split: f64,
    /// `‖δV (V - μ)^{-1}‖` when `V - μ` is invertible.
    pub nu: Option<f64>,
    pub disjoint: bool,
    pub signed: Option<SignCondition>,
    /// `δAᵀA + AᵀδA`
    pub cross_term: Array2<f64>,
}

impl PerturbationSpec {
    pub fn new(system: &KleinGordonSystem, delta_v: SymmetricMatrix) -> Result<Self> {
        if delta_v.order() != system.n {
            return Err(Error::DimensionMismatch(format!(
                "perturbation has order {}, model has order {}",
                delta_v.order(),
                system.n
            )));
        }
        let u_inv = system.powers.u_inv.as_array();
        let dv = delta_v.as_array();
        let delta_a = dv.dot(u_inv);
        let c = linalg::spectral_norm(&delta_a)?;
        let c_split = linalg::spectral_norm(dv)? / system.powers.u_min;

        let a = &system.a_matrix;
        let cross_term = linalg::symmetrize(&(delta_a.t().dot(a) + a.t().dot(&delta_a)).view());
        let scale = system.contraction * c;
        let cross_eig = linalg::sym_eigen(&cross_term)?;
        let tol = STRUCTURE_TOLERANCE * scale.max(f64::MIN_POSITIVE);
        let disjoint = cross_eig.abs_max() <= tol;
        let signed = if cross_eig.max() <= tol {
            Some(SignCondition::NonPositive)
        } else if cross_eig.min() >= -tol {
            Some(SignCondition::NonNegative)
        } else {
            None
        };

        let nu = relative_to_potential(system, dv)?;

        Ok(PerturbationSpec {
            delta_v,
            delta_a,
            c,
            c_split,
            nu,
            disjoint,
            signed,
            cross_term,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.delta_v.as_array().iter().all(|&x| x == 0.0)
    }
}

/// `‖δV (V - μ)^{-1}‖`, or `None` when `V - μ` is numerically singular.
fn relative_to_potential(system: &KleinGordonSystem, dv: &Array2<f64>) -> Result<Option<f64>> {
    // V - μ = A U
    let shifted_v = system.a_matrix.dot(system.powers.u.as_array());
    let eig = linalg::sym_eigen(&linalg::symmetrize(&shifted_v.view()))?;
    let smallest = eig.values.iter().fold(f64::INFINITY, |m, &x| m.min(x.abs()));
    if smallest <= 1e-12 * eig.abs_max().max(f64::MIN_POSITIVE) {
        return Ok(None);
    }
    let inv = eig.apply(|x| 1.0 / x);
    Ok(Some(linalg::spectral_norm(&dv.dot(&inv))?))
}

/// A symmetric relative constant `|δg| ≤ κ g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Kappa {
    pub value: f64,
    /// Hypothesis satisfied and `value < 1`.
    pub applicable: bool,
}

impl Kappa {
    pub fn as_pair(&self) -> KappaPair {
        KappaPair {
            minus: -self.value,
            plus: self.value,
            applicable: self.applicable,
        }
    }
}

/// A one-sided pair `κ₋ g ≤ δg ≤ κ₊ g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KappaPair {
    pub minus: f64,
    pub plus: f64,
    /// Hypothesis satisfied and `κ₋ > -1`.
    pub applicable: bool,
}

impl KappaPair {
    pub fn magnitude(&self) -> f64 {
        self.minus.abs().max(self.plus.abs())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KappaBundle {
    pub b: f64,
    pub c: f64,
    pub nu: Option<f64>,
    /// `c/(1-b)`
    pub kappa_general: Kappa,
    /// `‖δV‖‖U^{-1}‖/(1-b)`
    pub kappa_split: Kappa,
    /// `c + b`
    pub kappa_sum: Kappa,
    /// `νb/(1-b)`
    pub kappa_relative: Option<Kappa>,
    /// `c/√(1-b²)` when `(δVψ, (V-μ)ψ) = 0`
    pub kappa_disjoint: Option<Kappa>,
    /// `(-c/√(1-b²), c/(1-b))` or its mirror, under a sign condition.
    pub kappa_signed: Option<KappaPair>,
    /// From the extreme eigenvalues of the `(1,1)` block and `‖B‖`.
    pub kappa_block: KappaPair,
    /// Extreme eigenvalues of `g^{-1/2} δg g^{-1/2}`.
    pub kappa_exact: KappaPair,
    pub kappa0_hat: f64,
    pub kappa_prime_hat: f64,
}

impl KappaBundle {
    /// Every entry as `(name, pair)`, symmetric constants as `(-κ, κ)`.
    pub fn entries(&self) -> Vec<(&'static str, KappaPair)> {
        let mut out = vec![
            ("kappa_general", self.kappa_general.as_pair()),
            ("kappa_split", self.kappa_split.as_pair()),
            ("kappa_sum", self.kappa_sum.as_pair()),
        ];
        if let Some(k) = self.kappa_relative {
            out.push(("kappa_relative", k.as_pair()));
        }
        if let Some(k) = self.kappa_disjoint {
            out.push(("kappa_disjoint", k.as_pair()));
        }
        if let Some(k) = self.kappa_signed {
            out.push(("kappa_signed", k));
        }
        out.push(("kappa_block", self.kappa_block));
        out.push(("kappa_exact", self.kappa_exact));
        out.push((
            "kappa_exact_symmetric",
            KappaPair {
                minus: -self.kappa_exact.magnitude(),
                plus: self.kappa_exact.magnitude(),
                applicable: self.kappa_exact.magnitude() < 1.0,
            },
        ));
        out
    }
}

/// `α = (1 - b)·min σ(U)`: no eigenvalue of `H` lies in `(μ - α, μ + α)`.
pub fn gap_bound(system: &KleinGordonSystem) -> Result<f64> {
    if !(system.contraction < 1.0) {
        return Err(Error::ContractionNotLessThanOne(system.contraction));
    }
    Ok((1.0 - system.contraction) * system.powers.u_min)
}

pub fn perturbation_constants(system: &KleinGordonSystem, pert: &PerturbationSpec) -> Result<KappaBundle> {
    let b = system.contraction;
    if !(b < 1.0) {
        return Err(Error::ContractionNotLessThanOne(b));
    }
    let c = pert.c;
    let symmetric = |value: f64, hypothesis: bool| Kappa {
        value,
        applicable: hypothesis && value < 1.0,
    };
    let root = (1.0 - b * b).sqrt();

    let kappa_general = symmetric(c / (1.0 - b), true);
    let kappa_split = symmetric(pert.c_split / (1.0 - b), true);
    let kappa_sum = symmetric(c + b, true);
    let kappa_relative = pert.nu.map(|nu| symmetric(nu * b / (1.0 - b), true));
    let kappa_disjoint = pert
        .disjoint
        .then(|| symmetric(c / root, b * b + c * c < 1.0));
    let kappa_signed = pert.signed.map(|sign| {
        let (minus, plus) = match sign {
            SignCondition::NonPositive => (-c / root, c / (1.0 - b)),
            SignCondition::NonNegative => (-c / (1.0 - b), c / root),
        };
        KappaPair {
            minus,
            plus,
            applicable: minus > -1.0,
        }
    });

    let block = block_structure_analysis(&system.a_matrix, &pert.delta_a)?;
    let kappa_block = KappaPair {
        minus: block.kappa_minus,
        plus: block.kappa_plus,
        applicable: block.kappa_minus > -1.0,
    };

    let perturbed = perturbed_gram(system, &pert.delta_v)?;
    let delta_g = perturbed.sub(&system.gram)?;
    let (em, ep) = exact_kappa_pm(&system.shifted_gram(), &delta_g)?;
    let kappa_exact = KappaPair {
        minus: em,
        plus: ep,
        applicable: em > -1.0,
    };
    let (kappa0_hat, kappa_prime_hat) = if em > -1.0 {
        rescale_kappa(em, ep)?
    } else {
        (f64::NAN, f64::NAN)
    };

    Ok(KappaBundle {
        b,
        c,
        nu: pert.nu,
        kappa_general,
        kappa_split,
        kappa_sum,
        kappa_relative,
        kappa_disjoint,
        kappa_signed,
        kappa_block,
        kappa_exact,
        kappa0_hat,
        kappa_prime_hat,
    })
}

/// `G'` for `V + δV`, built from the already computed powers of `U`.
fn perturbed_gram(system: &KleinGordonSystem, delta_v: &SymmetricMatrix) -> Result<SymmetricMatrix> {
    let p = &system.powers;
    let dv = delta_v.as_array();
    let upper = p.u_inv_half.as_array().dot(dv).dot(p.u_half.as_array());
    let n = system.n;
    let mut dg = Array2::zeros((2 * n, 2 * n));
    dg.slice_mut(ndarray::s![..n, n..]).assign(&upper);
    dg.slice_mut(ndarray::s![n.., ..n]).assign(&upper.t());
    system.gram.add(&SymmetricMatrix::symmetric_part(&dg))
}

/// Extreme eigenvalues of the pencil `δg x = κ g x`.
pub fn exact_kappa_pm(g: &SymmetricMatrix, delta_g: &SymmetricMatrix) -> Result<(f64, f64)> {
    if g.order() != delta_g.order() {
        return Err(Error::DimensionMismatch("g and δg differ in order".into()));
    }
    let roots = linalg::spd_roots(g)?;
    let w = roots.inv_sqrt.as_array();
    let m = linalg::symmetrize(&w.dot(delta_g.as_array()).dot(w).view());
    let eig = linalg::sym_eigen(&m)?;
    Ok((eig.min(), eig.max()))
}

/// Multiplicative shift `κ̂₀ = (κ₊+κ₋)/2` and the resulting
/// `κ̂′ = (κ₊-κ₋)/(2+κ₊+κ₋)`.
pub fn rescale_kappa(kappa_minus: f64, kappa_plus: f64) -> Result<(f64, f64)> {
    if !(kappa_minus > -1.0) {
        return Err(Error::KappaMinusNotAboveMinusOne(kappa_minus));
    }
    if kappa_minus > kappa_plus {
        return Err(Error::InvalidArgument(format!(
            "kappa_minus {kappa_minus} exceeds kappa_plus {kappa_plus}"
        )));
    }
    let k0 = 0.5 * (kappa_plus + kappa_minus);
    let kp = (kappa_plus - kappa_minus) / (2.0 + kappa_plus + kappa_minus);
    Ok((k0, kp))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GapCase {
    PositiveGap,
    Straddling,
    NegativeGap,
}

impl GapCase {
    pub fn of(gap: &Interval) -> GapCase {
        if gap.lower >= 0.0 {
            GapCase::PositiveGap
        } else if gap.upper <= 0.0 {
            GapCase::NegativeGap
        } else {
            GapCase::Straddling
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            GapCase::PositiveGap => "positive-gap",
            GapCase::Straddling => "straddling",
            GapCase::NegativeGap => "negative-gap",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GapInclusion {
    pub original: Interval,
    pub predicted: Interval,
    pub improved: Option<Interval>,
    pub uniform: Option<Interval>,
    pub case_tag: GapCase,
}

fn empty_if_crossed(lower: f64, upper: f64) -> Interval {
    if lower < upper {
        Interval::new(lower, upper)
    } else {
        let mid = 0.5 * (lower + upper);
        Interval::new(mid, mid)
    }
}

/// Spectrum-free interval of `H'` from a gap `(λ⁻, λ⁺)` of `H` (in
/// coordinates where the shift sits at zero) and `|δg| ≤ κ g`.
pub fn gap_inclusion(gap: Interval, kappa: f64) -> Result<GapInclusion> {
    if !(0.0..1.0).contains(&kappa) {
        return Err(Error::KappaOutOfRange(kappa));
    }
    if gap.is_empty() {
        return Err(Error::InvalidArgument("gap is empty".into()));
    }
    let case_tag = GapCase::of(&gap);
    let (lo, hi) = (gap.lower, gap.upper);
    let predicted = match case_tag {
        GapCase::PositiveGap => empty_if_crossed((1.0 + kappa) * lo, (1.0 - kappa) * hi),
        GapCase::Straddling => empty_if_crossed((1.0 - kappa) * lo, (1.0 - kappa) * hi),
        GapCase::NegativeGap => empty_if_crossed((1.0 - kappa) * lo, (1.0 + kappa) * hi),
    };
    Ok(GapInclusion {
        original: gap,
        predicted,
        improved: None,
        uniform: None,
        case_tag,
    })
}

/// Inclusion after the multiplicative shift: the gap of `(1+κ̂₀)H` under
/// the constant `κ̂′`. In the straddling case this is
/// `((1+κ₋)λ⁻, (1+κ₋)λ⁺)`.
pub fn improved_inclusion(gap: Interval, kappa_minus: f64, kappa_plus: f64) -> Result<Interval> {
    let (k0, kp) = rescale_kappa(kappa_minus, kappa_plus)?;
    let stretched = Interval::new((1.0 + k0) * gap.lower, (1.0 + k0) * gap.upper);
    Ok(gap_inclusion(stretched, kp)?.predicted)
}

/// `(λ⁻ + a‖J₁‖, λ⁺ - a‖J₁‖)` for a perturbation `H' = H + S`, `‖S‖ = a`.
pub fn norm_bound_interval(gap: Interval, a: f64, norm_j1: f64) -> Interval {
    let d = a * norm_j1;
    empty_if_crossed(gap.lower + d, gap.upper - d)
}

/// `‖H' - H‖` for `V -> V + δV`.
pub fn perturbation_operator_norm(system: &KleinGordonSystem, delta_v: &SymmetricMatrix) -> Result<f64> {
    let p = &system.powers;
    let dv = delta_v.as_array();
    let top = p.u_half.as_array().dot(dv).dot(p.u_inv_half.as_array());
    // the lower block is the transpose of the upper one
    linalg::spectral_norm(&top)
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockAnalysis {
    pub a_minus: f64,
    pub a_plus: f64,
    pub norm_b: f64,
    /// `a₋/2 - √(a₋²/4 + ‖B‖²)`, a lower bound on `δg/g`.
    pub kappa_minus: f64,
    /// `a₊/2 + √(a₊²/4 + ‖B‖²)`, an upper bound on `δg/g`.
    pub kappa_plus: f64,
}

/// Largest eigenvalue of `[[a, Bᵀ], [B, 0]]` in terms of `β = ‖B‖`.
pub fn t_bound(a: f64, beta: f64) -> f64 {
    0.5 * a + (0.25 * a * a + beta * beta).sqrt()
}

/// Block Cholesky view of `δg/g`: with `L` the inverse Cholesky factor of
/// `[[I, Aᵀ], [A, I]]`, `L* δ𝐀 L = [[M₁₁, Bᵀ], [B, 0]]`,
/// `M₁₁ = -(I-AᵀA)^{-1/2}(δAᵀA + AᵀδA)(I-AᵀA)^{-1/2}`,
/// `B = δA (I-AᵀA)^{-1/2}`.
pub fn block_structure_analysis(a_matrix: &Array2<f64>, delta_a: &Array2<f64>) -> Result<BlockAnalysis> {
    let b = linalg::spectral_norm(a_matrix)?;
    if !(b < 1.0) {
        return Err(Error::ContractionNotLessThanOne(b));
    }
    let n = a_matrix.nrows();
    if delta_a.dim() != (n, n) {
        return Err(Error::DimensionMismatch("A and δA differ in shape".into()));
    }
    let ata = a_matrix.t().dot(a_matrix);
    let defect = SymmetricMatrix::symmetric_part(&(Array2::eye(n) - ata));
    let inv_root = linalg::spd_roots(&defect)?.inv_sqrt.into_array();
    let cross = delta_a.t().dot(a_matrix) + a_matrix.t().dot(delta_a);
    let m11 = -inv_root.dot(&cross).dot(&inv_root);
    let eig = linalg::sym_eigen(&linalg::symmetrize(&m11.view()))?;
    let norm_b = linalg::spectral_norm(&delta_a.dot(&inv_root))?;
    let (a_minus, a_plus) = (eig.min(), eig.max());
    Ok(BlockAnalysis {
        a_minus,
        a_plus,
        norm_b,
        kappa_minus: -t_bound(-a_minus, norm_b),
        kappa_plus: t_bound(a_plus, norm_b),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenvalueInterval {
    pub eigenvalue: f64,
    pub lower: f64,
    pub upper: f64,
}

/// `λ' - μ ∈ (1 + [κ₋, κ₊])(λ - μ)` for every real eigenvalue.
pub fn eigenvalue_interval_bounds_pm(
    report: &SpectrumReport,
    kappa_minus: f64,
    kappa_plus: f64,
) -> Result<Vec<EigenvalueInterval>> {
    if !(kappa_minus > -1.0) {
        return Err(Error::KappaMinusNotAboveMinusOne(kappa_minus));
    }
    let mu = report.shift;
    let mut out = Vec::with_capacity(report.len());
    for z in &report.eigenvalues {
        if z.im != 0.0 {
            continue;
        }
        let d = z.re - mu;
        let (p, q) = (mu + (1.0 + kappa_minus) * d, mu + (1.0 + kappa_plus) * d);
        out.push(EigenvalueInterval {
            eigenvalue: z.re,
            lower: p.min(q),
            upper: p.max(q),
        });
    }
    Ok(out)
}

/// `[λ - κ|λ - μ|, λ + κ|λ - μ|]` for every real eigenvalue.
pub fn eigenvalue_interval_bounds(report: &SpectrumReport, kappa: f64) -> Result<Vec<EigenvalueInterval>> {
    if !(0.0..1.0).contains(&kappa) {
        return Err(Error::KappaOutOfRange(kappa));
    }
    eigenvalue_interval_bounds_pm(report, -kappa, kappa)
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenDeviation {
    pub index: usize,
    pub eigenvalue: f64,
    pub perturbed_re: f64,
    pub perturbed_im: f64,
    /// `|λ' - λ|/|λ - μ|`
    pub relative_deviation: f64,
    /// `(λ' - μ)/(λ - μ) - 1`
    pub signed_ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundCheck {
    pub name: &'static str,
    pub kappa_minus: f64,
    pub kappa_plus: f64,
    pub applicable: bool,
    /// Every paired eigenvalue respects the bound (evaluated even when the
    /// bound is not applicable).
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct InclusionCheck {
    pub name: &'static str,
    pub interval: Interval,
    /// No eigenvalue of `H'` inside the interval.
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub shift: f64,
    pub contraction: f64,
    pub perturbed_contraction: f64,
    pub deviations: Vec<EigenDeviation>,
    pub max_relative_deviation: f64,
    pub kappas: KappaBundle,
    pub checks: Vec<BoundCheck>,
    pub inclusions: Vec<InclusionCheck>,
    pub gap_alpha: f64,
    pub central_gap: Option<Interval>,
    pub perturbed_central_gap: Option<Interval>,
    /// `H'` has non-real eigenvalues; only real parts were compared.
    pub real_parts_only: bool,
    pub perturbed_defective: bool,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// All applicable bounds and inclusions hold.
    pub fn all_applicable_hold(&self) -> bool {
        self.checks.iter().all(|c| !c.applicable || c.holds) && self.inclusions.iter().all(|c| c.holds)
    }
}

/// Slack added to every eigenvalue comparison, relative to `‖H‖`.
pub const VERIFY_SLACK: f64 = 1e-9;

/// Spectra of `H` and `H'` (potential `V + δV`) at one shift, paired in
/// increasing order, against every constant of the bundle.
pub fn verify_bounds(spec: &ModelSpec, pert: &SymmetricMatrix, shift: f64) -> Result<VerificationReport> {
    let system = assemble_system(spec, shift)?;
    let perturbation = PerturbationSpec::new(&system, pert.clone())?;
    let kappas = perturbation_constants(&system, &perturbation)?;
    let perturbed_spec = spec.perturbed(pert)?;
    let perturbed = assemble_system(&perturbed_spec, shift)?;
    let report = eigen_spectrum(&system)?;
    let report_p = eigen_spectrum(&perturbed)?;
    verify_with(&system, &perturbation, kappas, &report, &report_p, &perturbed)
}

pub(crate) fn verify_with(
    system: &KleinGordonSystem,
    pert: &PerturbationSpec,
    kappas: KappaBundle,
    report: &SpectrumReport,
    report_p: &SpectrumReport,
    perturbed: &KleinGordonSystem,
) -> Result<VerificationReport> {
    let mu = system.shift;
    let base = report.real_parts();
    let moved: Vec<_> = report_p.eigenvalues.clone();
    if base.len() != moved.len() {
        return Err(Error::DimensionMismatch("spectra differ in size".into()));
    }
    if !report.is_real_spectrum {
        return Err(Error::NonRealSpectrum);
    }
    let slack = VERIFY_SLACK * report.norm_h.max(report_p.norm_h);

    let deviations: Vec<EigenDeviation> = base
        .iter()
        .zip(&moved)
        .enumerate()
        .map(|(index, (&l, z))| {
            let d = l - mu;
            EigenDeviation {
                index,
                eigenvalue: l,
                perturbed_re: z.re,
                perturbed_im: z.im,
                relative_deviation: (z.re - l).abs() / d.abs(),
                signed_ratio: (z.re - mu) / d - 1.0,
            }
        })
        .collect();
    let max_relative_deviation = deviations.iter().fold(0.0_f64, |m, d| m.max(d.relative_deviation));

    let checks = kappas
        .entries()
        .into_iter()
        .map(|(name, pair)| {
            let holds = deviations.iter().all(|dev| {
                let d = dev.eigenvalue - mu;
                let (p, q) = (mu + (1.0 + pair.minus) * d, mu + (1.0 + pair.plus) * d);
                let (lo, hi) = (p.min(q), p.max(q));
                dev.perturbed_re >= lo - slack && dev.perturbed_re <= hi + slack
            });
            BoundCheck {
                name,
                kappa_minus: pair.minus,
                kappa_plus: pair.plus,
                applicable: pair.applicable,
                holds,
            }
        })
        .collect();

    let gap_alpha = gap_bound(system)?;
    let central_gap = report.central_gap;
    let perturbed_central_gap = report_p.central_gap;
    let perturbed_reals: Vec<f64> = report_p
        .eigenvalues
        .iter()
        .filter(|z| z.im == 0.0)
        .map(|z| z.re)
        .collect();
    let excludes = |iv: &Interval| !perturbed_reals.iter().any(|&l| l > iv.lower + slack && l < iv.upper - slack);

    let mut inclusions = Vec::new();
    if let Some(gap) = central_gap.filter(|g| !g.is_empty()) {
        let shifted = gap.translated(-mu);
        let mut push = |name: &'static str, iv: Interval| {
            let iv = iv.translated(mu);
            inclusions.push(InclusionCheck {
                name,
                holds: excludes(&iv),
                interval: iv,
            });
        };
        let exact = kappas.kappa_exact;
        if exact.magnitude() < 1.0 {
            push("gap_inclusion_exact", gap_inclusion(shifted, exact.magnitude())?.predicted);
        }
        if kappas.kappa_general.applicable {
            push("gap_inclusion_general", gap_inclusion(shifted, kappas.kappa_general.value)?.predicted);
        }
        if exact.applicable {
            push("improved_inclusion", improved_inclusion(shifted, exact.minus, exact.plus)?);
        }
        if system.contraction < 1.0 {
            let a = perturbation_operator_norm(system, &pert.delta_v)?;
            let j1 = sign_operator(system)?;
            push("norm_bound", norm_bound_interval(shifted, a, j1.norm_j1));
        }
    }

    Ok(VerificationReport {
        shift: mu,
        contraction: system.contraction,
        perturbed_contraction: perturbed.contraction,
        deviations,
        max_relative_deviation,
        kappas,
        checks,
        inclusions,
        gap_alpha,
        central_gap,
        perturbed_central_gap,
        real_parts_only: !report_p.is_real_spectrum,
        perturbed_defective: report_p.defective,
    })
}
