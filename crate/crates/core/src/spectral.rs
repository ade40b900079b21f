//! Spectra of `H = JG` through the selfadjoint similarity
//! `H - μ = L^{-T} (LᵀJL) Lᵀ`, `G - μJ = LLᵀ`, with a general dense
//! eigensolver as fallback when `G - μJ` is close to singular. The sign
//! operator uses the symmetric root `W = (G - μJ)^{1/2}` instead.

use ndarray::{Array1, Array2, ArrayView1};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, SymmetricMatrix};
use crate::operator::{KleinGordonSystem, ModelSpec, UPowers};

/// The similarity route is used while `b < 1 - PATH_MARGIN`.
pub const PATH_MARGIN: f64 = 0.02;
/// `|(Jx, x)|/‖x‖²` below this marks a neutral eigenvector.
pub const NEUTRAL_TOLERANCE: f64 = 1e-6;
/// Eigenvalues closer than `CLUSTER_TOLERANCE·‖H‖` form one cluster; also the
/// rank threshold for `H - λI`.
pub const CLUSTER_TOLERANCE: f64 = 1e-8;
/// Imaginary parts up to `REAL_TOLERANCE·‖H‖` count as real.
pub const REAL_TOLERANCE: f64 = 1e-8;
/// Conjugate pairs with `|Im λ| ≤ COALESCE_TOLERANCE·‖H‖` are tested for a
/// real double eigenvalue at `Re λ`.
pub const COALESCE_TOLERANCE: f64 = 1e-6;

/// An open interval `(lower, upper)`; empty when `lower >= upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Self {
        Interval { lower, upper }
    }

    pub fn is_empty(&self) -> bool {
        !(self.lower < self.upper)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower < x && x < self.upper
    }

    pub fn width(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.upper - self.lower
        }
    }

    /// Whether `self ⊆ other` (empty intervals are contained in anything).
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        self.is_empty() || (other.lower <= self.lower && self.upper <= other.upper)
    }

    pub fn translated(&self, by: f64) -> Interval {
        Interval::new(self.lower + by, self.upper + by)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignType {
    Positive,
    Negative,
    Neutral,
}

impl SignType {
    pub fn as_str(&self) -> &'static str {
        match self {
            SignType::Positive => "positive",
            SignType::Negative => "negative",
            SignType::Neutral => "neutral",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverPath {
    Similarity,
    General,
}

#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub shift: f64,
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    /// Unit-norm eigenvectors, column `k` belongs to `eigenvalues[k]`.
    pub eigenvectors: Array2<Complex64>,
    pub sign_types: Vec<SignType>,
    /// `Re(x* J x)/‖x‖²` per eigenvector.
    pub j_products: Vec<f64>,
    /// Real eigenvalues right of the shift, increasing.
    pub positive_ordered: Vec<f64>,
    /// Real eigenvalues left of the shift, decreasing.
    pub negative_ordered: Vec<f64>,
    pub central_gap: Option<Interval>,
    pub defective: bool,
    /// `max_k ‖H x_k - λ_k x_k‖ / (‖H‖ ‖x_k‖)`.
    pub residual_max: f64,
    pub is_real_spectrum: bool,
    pub path: SolverPath,
    pub norm_h: f64,
}

impl SpectrumReport {
    /// Real parts of all eigenvalues, ascending.
    pub fn real_parts(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.re).collect()
    }

    pub fn max_imaginary(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0_f64, |m, z| m.max(z.im.abs()))
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// Spectrum of an assembled system. Uses the similarity route when
/// `b < 1 - PATH_MARGIN`, the general eigensolver otherwise.
pub fn eigen_spectrum(system: &KleinGordonSystem) -> Result<SpectrumReport> {
    let prefer_similarity = system.contraction < 1.0 - PATH_MARGIN;
    spectrum_impl(&system.hamiltonian, &system.shifted_gram(), system.shift, prefer_similarity)
}

/// Spectrum of `H = JG` for an arbitrary symmetric `G` of even order. The
/// similarity route is taken whenever `G - μJ` is positive definite.
pub fn spectrum_of_gram(gram: &SymmetricMatrix, shift: f64) -> Result<SpectrumReport> {
    if !gram.order().is_multiple_of(2) {
        return Err(Error::DimensionMismatch("Gram matrix must have even order".into()));
    }
    let n = gram.order() / 2;
    let mut shifted = gram.as_array().clone();
    for i in 0..n {
        shifted[[i, n + i]] -= shift;
        shifted[[n + i, i]] -= shift;
    }
    let hamiltonian = linalg::swap_rows(gram.as_array());
    spectrum_impl(&hamiltonian, &SymmetricMatrix::symmetric_part(&shifted), shift, true)
}

/// Eigenvalues of `H` from the general dense eigensolver only.
pub fn direct_spectrum(system: &KleinGordonSystem) -> Result<SpectrumReport> {
    general_route(&system.hamiltonian, system.shift)
}

fn spectrum_impl(
    hamiltonian: &Array2<f64>,
    shifted_gram: &SymmetricMatrix,
    shift: f64,
    prefer_similarity: bool,
) -> Result<SpectrumReport> {
    if prefer_similarity {
        match similarity_route(hamiltonian, shifted_gram, shift) {
            Ok(report) => return Ok(report),
            Err(Error::NotPositiveDefinite { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    general_route(hamiltonian, shift)
}

/// Eigenvalues of `H` in ascending order by the similarity route alone,
/// without eigenvectors or residuals. Fails with `NotPositiveDefinite`
/// when `G - μJ` is not.
pub fn similarity_eigenvalues(system: &KleinGordonSystem) -> Result<Vec<f64>> {
    let l = linalg::Cholesky::new(&system.shifted_gram())?.lower();
    let m = linalg::symmetrize(&l.t().dot(&linalg::swap_rows(&l)).view());
    Ok(linalg::sym_eigenvalues(&m)?.iter().map(|v| v + system.shift).collect())
}

fn similarity_route(hamiltonian: &Array2<f64>, shifted_gram: &SymmetricMatrix, shift: f64) -> Result<SpectrumReport> {
    // With G - μJ = LLᵀ, H - μ = J(G - μJ) is similar to the symmetric LᵀJL.
    let chol = linalg::Cholesky::new(shifted_gram)?;
    let l = chol.lower();
    let m = linalg::symmetrize(&l.t().dot(&linalg::swap_rows(&l)).view());
    let eig = linalg::sym_eigen(&m)?;
    let mut vectors = chol.solve_transposed(&eig.vectors)?;
    for mut col in vectors.columns_mut() {
        let norm = col.dot(&col).sqrt();
        col /= norm;
    }
    let eigenvalues: Vec<Complex64> = eig.values.iter().map(|l| Complex64::new(l + shift, 0.0)).collect();
    let vectors = vectors.mapv(|v| Complex64::new(v, 0.0));
    finish_report(hamiltonian, shift, eigenvalues, vectors, SolverPath::Similarity)
}

fn general_route(hamiltonian: &Array2<f64>, shift: f64) -> Result<SpectrumReport> {
    let eig = linalg::general_eigen(hamiltonian)?;
    let norm_h = linalg::norm_scale(hamiltonian)?;
    let mut values = eig.values;
    let mut vectors = eig.vectors;
    coalesce_near_real_pairs(hamiltonian, norm_h, &mut values, &mut vectors)?;

    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[a]
            .re
            .total_cmp(&values[b].re)
            .then(values[a].im.total_cmp(&values[b].im))
    });
    let sorted_values: Vec<Complex64> = order.iter().map(|&k| values[k]).collect();
    let mut sorted_vectors = Array2::zeros(vectors.dim());
    for (dst, &src) in order.iter().enumerate() {
        sorted_vectors.column_mut(dst).assign(&vectors.column(src));
    }
    finish_report(hamiltonian, shift, sorted_values, sorted_vectors, SolverPath::General)
}

/// A defective eigenvalue comes out of a backward-stable eigensolver as a
/// conjugate pair split by roughly `sqrt(ε)`. Pairs that close whose real
/// part makes `H - Re(λ)I` numerically singular are replaced by a real
/// double eigenvalue with its null vector(s).
fn coalesce_near_real_pairs(
    hamiltonian: &Array2<f64>,
    norm_h: f64,
    values: &mut [Complex64],
    vectors: &mut Array2<Complex64>,
) -> Result<()> {
    let n = values.len();
    let mut k = 0;
    while k + 1 < n {
        let (a, b) = (values[k], values[k + 1]);
        let is_pair = a.im != 0.0 && (a - b.conj()).norm() <= f64::EPSILON * norm_h.max(1.0) * 16.0;
        if is_pair && a.im.abs() <= COALESCE_TOLERANCE * norm_h && a.im.abs() > REAL_TOLERANCE * norm_h {
            let lambda = a.re;
            let mut shifted = hamiltonian.clone();
            for i in 0..shifted.nrows() {
                shifted[[i, i]] -= lambda;
            }
            let svd = linalg::svd(&shifted)?;
            let s = &svd.singular_values;
            let rank_tol = CLUSTER_TOLERANCE * norm_h;
            let nullity = s.iter().filter(|&&v| v <= rank_tol).count();
            if nullity >= 1 {
                let last = s.len() - 1;
                let first_null = svd.vt.row(last).to_owned();
                let second_null = if nullity >= 2 {
                    svd.vt.row(last - 1).to_owned()
                } else {
                    first_null.clone()
                };
                values[k] = Complex64::new(lambda, 0.0);
                values[k + 1] = Complex64::new(lambda, 0.0);
                vectors.column_mut(k).assign(&first_null.mapv(|v| Complex64::new(v, 0.0)));
                vectors.column_mut(k + 1).assign(&second_null.mapv(|v| Complex64::new(v, 0.0)));
            }
            k += 2;
        } else if is_pair {
            k += 2;
        } else {
            k += 1;
        }
    }
    Ok(())
}

fn finish_report(
    hamiltonian: &Array2<f64>,
    shift: f64,
    mut eigenvalues: Vec<Complex64>,
    vectors: Array2<Complex64>,
    path: SolverPath,
) -> Result<SpectrumReport> {
    let norm_h = linalg::norm_scale(hamiltonian)?;
    let real_tol = REAL_TOLERANCE * norm_h;
    for z in eigenvalues.iter_mut() {
        if z.im.abs() <= real_tol {
            z.im = 0.0;
        }
    }
    let is_real_spectrum = eigenvalues.iter().all(|z| z.im == 0.0);

    let residual_max = max_residual(hamiltonian, norm_h, &eigenvalues, &vectors);

    let j_products: Vec<f64> = (0..eigenvalues.len()).map(|k| j_product(&vectors.column(k))).collect();
    let sign_types: Vec<SignType> = eigenvalues
        .iter()
        .zip(&j_products)
        .map(|(z, &jp)| {
            if z.im != 0.0 || jp.abs() < NEUTRAL_TOLERANCE {
                SignType::Neutral
            } else if jp > 0.0 {
                SignType::Positive
            } else {
                SignType::Negative
            }
        })
        .collect();

    let reals: Vec<f64> = eigenvalues.iter().filter(|z| z.im == 0.0).map(|z| z.re).collect();
    let mut positive_ordered: Vec<f64> = reals.iter().copied().filter(|&l| l > shift).collect();
    positive_ordered.sort_by(f64::total_cmp);
    let mut negative_ordered: Vec<f64> = reals.iter().copied().filter(|&l| l < shift).collect();
    negative_ordered.sort_by(|a, b| b.total_cmp(a));
    let central_gap = is_real_spectrum.then(|| gap_around(&reals, shift));

    let defects = detect_defects(hamiltonian, norm_h, &eigenvalues, &vectors, &j_products)?;

    Ok(SpectrumReport {
        shift,
        eigenvalues,
        eigenvectors: vectors,
        sign_types,
        j_products,
        positive_ordered,
        negative_ordered,
        central_gap,
        defective: defects.defective,
        residual_max,
        is_real_spectrum,
        path,
        norm_h,
    })
}

/// `max_k ‖H x_k - λ_k x_k‖/(‖H‖‖x_k‖)`, with the products taken in real
/// arithmetic so that BLAS does the work.
fn max_residual(hamiltonian: &Array2<f64>, norm_h: f64, eigenvalues: &[Complex64], vectors: &Array2<Complex64>) -> f64 {
    let re = vectors.mapv(|z| z.re);
    let im = vectors.mapv(|z| z.im);
    let h_re = hamiltonian.dot(&re);
    let h_im = if im.iter().all(|&v| v == 0.0) {
        Array2::zeros(im.dim())
    } else {
        hamiltonian.dot(&im)
    };
    let mut worst = 0.0_f64;
    for (k, lambda) in eigenvalues.iter().enumerate() {
        let mut rn = 0.0;
        let mut xn = 0.0;
        for i in 0..re.nrows() {
            let x = Complex64::new(re[[i, k]], im[[i, k]]);
            let hx = Complex64::new(h_re[[i, k]], h_im[[i, k]]);
            rn += (hx - lambda * x).norm_sqr();
            xn += x.norm_sqr();
        }
        if xn > 0.0 && norm_h > 0.0 {
            worst = worst.max(rn.sqrt() / (norm_h * xn.sqrt()));
        }
    }
    worst
}

fn complex_norm(x: &ArrayView1<Complex64>) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `Re(x* J x)/‖x‖²` for the block swap `J`.
pub fn j_product(x: &ArrayView1<Complex64>) -> f64 {
    let n = x.len() / 2;
    let mut acc = 0.0;
    for i in 0..n {
        acc += 2.0 * (x[i].conj() * x[n + i]).re;
    }
    let norm2: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    if norm2 == 0.0 {
        0.0
    } else {
        acc / norm2
    }
}

fn gap_around(reals: &[f64], shift: f64) -> Interval {
    if reals.contains(&shift) {
        return Interval::new(shift, shift);
    }
    let lower = reals.iter().copied().filter(|&l| l < shift).fold(f64::NEG_INFINITY, f64::max);
    let upper = reals.iter().copied().filter(|&l| l > shift).fold(f64::INFINITY, f64::min);
    Interval::new(lower, upper)
}

/// The spectrum-free interval around `shift`: (largest eigenvalue below,
/// smallest eigenvalue above), with infinite ends when a side is empty.
pub fn central_gap(report: &SpectrumReport, shift: f64) -> Result<Interval> {
    if !report.is_real_spectrum {
        return Err(Error::NonRealSpectrum);
    }
    Ok(gap_around(&report.real_parts(), shift))
}

/// Same as [`central_gap`] for a bare list of real eigenvalues.
pub fn central_gap_of(eigenvalues: &[f64], shift: f64) -> Interval {
    gap_around(eigenvalues, shift)
}

/// `inf_{s ∈ spectrum} |(s - λ)/s|`.
pub fn relative_distance(lambda: f64, spectrum: &[f64]) -> Result<f64> {
    if spectrum.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    if spectrum.contains(&0.0) {
        return Err(Error::ZeroInSpectrum);
    }
    Ok(spectrum
        .iter()
        .map(|&s| ((s - lambda) / s).abs())
        .fold(f64::INFINITY, f64::min))
}

/// Smallest singular value of the quadratic pencil `(λI - V)² - U²`.
pub fn pencil_residual(spec: &ModelSpec, lambda: Complex64) -> Result<f64> {
    let (re, im) = pencil_matrix(spec, lambda);
    linalg::complex_min_singular_value(&re, &im)
}

/// Real and imaginary parts of `(λI - V)² - U²`.
pub fn pencil_matrix(spec: &ModelSpec, lambda: Complex64) -> (Array2<f64>, Array2<f64>) {
    let n = spec.order();
    let v = spec.v().as_array();
    let mut r = v.mapv(|x| -x);
    for i in 0..n {
        r[[i, i]] += lambda.re;
    }
    let mut re = r.dot(&r) - spec.u_squared().as_array();
    for i in 0..n {
        re[[i, i]] -= lambda.im * lambda.im;
    }
    let im = &r * (2.0 * lambda.im);
    (re, im)
}

/// `‖Q(λ)φ‖/‖φ‖` with `φ = U^{-1/2} x₁` recovered from the upper half of an
/// eigenvector of `H`. An upper bound on [`pencil_residual`] that costs
/// only matrix-vector products.
pub fn pencil_vector_residual(
    spec: &ModelSpec,
    powers: &UPowers,
    lambda: Complex64,
    eigenvector: &ArrayView1<Complex64>,
) -> f64 {
    let n = spec.order();
    let to_c = |m: &Array2<f64>| m.mapv(|v| Complex64::new(v, 0.0));
    let x1 = eigenvector.slice(ndarray::s![..n]).to_owned();
    let phi = to_c(powers.u_inv_half.as_array()).dot(&x1);
    let v = to_c(spec.v().as_array());
    let p = |y: &Array1<Complex64>| y.mapv(|z| z * lambda) - v.dot(y);
    let q = p(&p(&phi)) - to_c(spec.u_squared().as_array()).dot(&phi);
    let num = complex_norm(&q.view());
    let den = complex_norm(&phi.view());
    if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

/// [`pencil_vector_residual`] for every eigenpair of a report at once, the
/// products taken in real arithmetic.
pub fn pencil_vector_residuals(spec: &ModelSpec, powers: &UPowers, report: &SpectrumReport) -> Vec<f64> {
    let n = spec.order();
    let top = report.eigenvectors.slice(ndarray::s![..n, ..]);
    let w = powers.u_inv_half.as_array();
    let phi_re = w.dot(&top.mapv(|z| z.re));
    let phi_im = w.dot(&top.mapv(|z| z.im));
    let v = spec.v().as_array();
    let u2 = spec.u_squared().as_array();
    let v_re = v.dot(&phi_re);
    let v_im = v.dot(&phi_im);
    let vv_re = v.dot(&v_re);
    let vv_im = v.dot(&v_im);
    let u_re = u2.dot(&phi_re);
    let u_im = u2.dot(&phi_im);
    report
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(k, &lambda)| {
            let mut num = 0.0;
            let mut den = 0.0;
            for i in 0..n {
                let phi = Complex64::new(phi_re[[i, k]], phi_im[[i, k]]);
                let vphi = Complex64::new(v_re[[i, k]], v_im[[i, k]]);
                let vvphi = Complex64::new(vv_re[[i, k]], vv_im[[i, k]]);
                let uphi = Complex64::new(u_re[[i, k]], u_im[[i, k]]);
                let q = lambda * lambda * phi - 2.0 * lambda * vphi + vvphi - uphi;
                num += q.norm_sqr();
                den += phi.norm_sqr();
            }
            if den == 0.0 {
                f64::INFINITY
            } else {
                (num / den).sqrt()
            }
        })
        .collect()
}

/// `‖U²‖ + |λ|² + ‖V‖²`, the natural scale of a pencil residual.
#[derive(Debug, Clone, Copy)]
pub struct PencilScale {
    u_squared_norm: f64,
    v_norm_squared: f64,
}

impl PencilScale {
    pub fn new(spec: &ModelSpec) -> Result<Self> {
        let v = linalg::norm_scale(spec.v().as_array())?;
        Ok(PencilScale {
            u_squared_norm: linalg::norm_scale(spec.u_squared().as_array())?,
            v_norm_squared: v * v,
        })
    }

    pub fn at(&self, lambda: Complex64) -> f64 {
        self.u_squared_norm + lambda.norm_sqr() + self.v_norm_squared
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DefectWitness {
    pub eigenvalue: f64,
    pub vector: Vec<f64>,
    /// `|(Jx, x)|/‖x‖²` of the witness vector.
    pub neutrality: f64,
    pub algebraic_multiplicity: usize,
    pub geometric_multiplicity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct DefectReport {
    pub defective: bool,
    pub witnesses: Vec<DefectWitness>,
}

/// Flags neutral eigenvectors of real eigenvalues and eigenvalue clusters
/// whose geometric multiplicity falls short of the algebraic one.
pub fn defect_check(system: &KleinGordonSystem, report: &SpectrumReport) -> Result<DefectReport> {
    detect_defects(
        &system.hamiltonian,
        report.norm_h,
        &report.eigenvalues,
        &report.eigenvectors,
        &report.j_products,
    )
}

fn detect_defects(
    hamiltonian: &Array2<f64>,
    norm_h: f64,
    eigenvalues: &[Complex64],
    vectors: &Array2<Complex64>,
    j_products: &[f64],
) -> Result<DefectReport> {
    let tol = CLUSTER_TOLERANCE * norm_h;
    let mut witnesses = Vec::new();

    // Clusters of real eigenvalues (input is sorted by real part).
    let real_idx: Vec<usize> = (0..eigenvalues.len()).filter(|&k| eigenvalues[k].im == 0.0).collect();
    let mut start = 0;
    let mut in_cluster = vec![false; eigenvalues.len()];
    while start < real_idx.len() {
        let first = eigenvalues[real_idx[start]].re;
        let mut end = start + 1;
        while end < real_idx.len() && eigenvalues[real_idx[end]].re - first <= tol {
            end += 1;
        }
        let size = end - start;
        if size >= 2 {
            let members = &real_idx[start..end];
            let lambda = members.iter().map(|&k| eigenvalues[k].re).sum::<f64>() / size as f64;
            let mut shifted = hamiltonian.clone();
            for i in 0..shifted.nrows() {
                shifted[[i, i]] -= lambda;
            }
            let svd = linalg::svd(&shifted)?;
            let geometric = svd.singular_values.iter().filter(|&&s| s <= tol).count().max(1);
            if geometric < size {
                let null = svd.vt.row(svd.vt.nrows() - 1).to_owned();
                let xc = null.mapv(|v| Complex64::new(v, 0.0));
                witnesses.push(DefectWitness {
                    eigenvalue: lambda,
                    neutrality: j_product(&xc.view()).abs(),
                    vector: null.to_vec(),
                    algebraic_multiplicity: size,
                    geometric_multiplicity: geometric,
                });
                for &k in members {
                    in_cluster[k] = true;
                }
            }
        }
        start = end;
    }

    for k in 0..eigenvalues.len() {
        if eigenvalues[k].im == 0.0 && !in_cluster[k] && j_products[k].abs() < NEUTRAL_TOLERANCE {
            witnesses.push(DefectWitness {
                eigenvalue: eigenvalues[k].re,
                vector: vectors.column(k).iter().map(|z| z.re).collect(),
                neutrality: j_products[k].abs(),
                algebraic_multiplicity: 1,
                geometric_multiplicity: 1,
            });
        }
    }

    Ok(DefectReport {
        defective: !witnesses.is_empty(),
        witnesses,
    })
}

/// `J₁ = sign(H - μ)` and its spectral norm.
#[derive(Debug, Clone)]
pub struct SignOperator {
    pub j1: Array2<f64>,
    pub norm_j1: f64,
}

impl SignOperator {
    /// The Gram matrix `J·J₁` of the scalar product in which `H` is selfadjoint.
    pub fn metric(&self) -> Array2<f64> {
        linalg::swap_rows(&self.j1)
    }
}

/// `J₁ = W^{-1} sign(W J W) W` with `W = (G - μJ)^{1/2}`. Requires `b < 1`.
pub fn sign_operator(system: &KleinGordonSystem) -> Result<SignOperator> {
    if !(system.contraction < 1.0) {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: 1.0 - system.contraction,
            threshold: 0.0,
        });
    }
    sign_operator_of_gram(&system.shifted_gram())
}

/// Sign operator of `J(G - μJ)` given the positive definite `G - μJ`.
pub fn sign_operator_of_gram(shifted_gram: &SymmetricMatrix) -> Result<SignOperator> {
    let roots = linalg::spd_roots(shifted_gram)?;
    let w = roots.sqrt.as_array();
    let m = linalg::symmetrize(&w.dot(&linalg::swap_rows(w)).view());
    let eig = linalg::sym_eigen(&m)?;
    let sign_m = eig.apply(f64::signum);
    let j1 = roots.inv_sqrt.as_array().dot(&sign_m).dot(w);
    let norm_j1 = linalg::spectral_norm(&j1)?;
    Ok(SignOperator { j1, norm_j1 })
}
