//! Dense linear algebra kernels.
//!
//! Eigen- and singular value decompositions are delegated to LAPACK
//! (`dsyevd`, `dgeev`, `dgesdd`, `dpotrf`); matrix products use ndarray. Every
//! matrix here is an `Array2<f64>` in standard (row-major) layout.

use std::os::raw::{c_char, c_int};

use ndarray::{s, Array1, Array2, ArrayView2, ShapeBuilder};
use num_complex::Complex64;

use crate::error::{Error, Result};

// Pulls in the system OpenBLAS that provides the LAPACK symbols.
extern crate openblas_src as _;

/// Relative threshold below which a smallest eigenvalue counts as non-positive.
pub const SPD_TOLERANCE: f64 = 1e-12;

/// Relative tolerance on `|m[i][j] - m[j][i]|` accepted as symmetric.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// A real symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix(Array2<f64>);

impl SymmetricMatrix {
    /// Validates squareness and symmetry; the stored matrix is the exact
    /// symmetric part of the input.
    pub fn new(entries: Array2<f64>) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows != cols {
            return Err(Error::DimensionMismatch(format!(
                "expected a square matrix, got {rows}x{cols}"
            )));
        }
        if rows == 0 {
            return Err(Error::DimensionMismatch("matrix order must be positive".into()));
        }
        let scale = 1.0 + max_abs(&entries.view());
        for i in 0..rows {
            for j in (i + 1)..rows {
                let gap = (entries[[i, j]] - entries[[j, i]]).abs();
                if !(gap <= SYMMETRY_TOLERANCE * scale) {
                    return Err(Error::Validation(format!(
                        "matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {gap:e}"
                    )));
                }
            }
        }
        Ok(SymmetricMatrix(symmetrize(&entries.view())))
    }

    /// Takes the symmetric part `(m + mᵀ)/2` without validation.
    pub fn symmetric_part(entries: &Array2<f64>) -> Self {
        assert!(entries.is_square(), "symmetric_part needs a square matrix");
        SymmetricMatrix(symmetrize(&entries.view()))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        SymmetricMatrix::new(array_from_rows(rows)?)
    }

    pub fn identity(order: usize) -> Self {
        SymmetricMatrix(Array2::eye(order))
    }

    pub fn zeros(order: usize) -> Self {
        SymmetricMatrix(Array2::zeros((order, order)))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        SymmetricMatrix(Array2::from_diag(&Array1::from(diag.to_vec())))
    }

    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.0
    }

    pub fn into_array(self) -> Array2<f64> {
        self.0
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.0.rows().into_iter().map(|r| r.to_vec()).collect()
    }

    pub fn eigen(&self) -> Result<SymEigen> {
        sym_eigen(&self.0)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        SymmetricMatrix(&self.0 * factor)
    }

    pub fn add(&self, other: &SymmetricMatrix) -> Result<Self> {
        if self.order() != other.order() {
            return Err(Error::DimensionMismatch(format!(
                "orders {} and {} differ",
                self.order(),
                other.order()
            )));
        }
        Ok(SymmetricMatrix(&self.0 + &other.0))
    }

    pub fn sub(&self, other: &SymmetricMatrix) -> Result<Self> {
        self.add(&other.scaled(-1.0))
    }

    pub fn spectral_norm(&self) -> Result<f64> {
        let eig = self.eigen()?;
        Ok(eig.values.iter().fold(0.0_f64, |m, v| m.max(v.abs())))
    }
}

impl AsRef<Array2<f64>> for SymmetricMatrix {
    fn as_ref(&self) -> &Array2<f64> {
        &self.0
    }
}

pub fn array_from_rows(rows: &[Vec<f64>]) -> Result<Array2<f64>> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
        return Err(Error::DimensionMismatch(format!(
            "row {i} has {} entries, expected {m}",
            r.len()
        )));
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    Array2::from_shape_vec((n, m), flat).map_err(|e| Error::DimensionMismatch(e.to_string()))
}

/// Eigendecomposition `m = Q diag(values) Qᵀ`, eigenvalues ascending,
/// eigenvectors stored as the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Array1<f64>,
    pub vectors: Array2<f64>,
}

impl SymEigen {
    /// `Q diag(f(λ)) Qᵀ`, exactly symmetrized.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Array2<f64> {
        let scaled = &self.vectors * &self.values.mapv(&f);
        symmetrize(&scaled.dot(&self.vectors.t()).view())
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn abs_max(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    /// Fails unless the smallest eigenvalue exceeds `SPD_TOLERANCE·‖m‖`.
    pub fn require_positive_definite(&self) -> Result<()> {
        let threshold = SPD_TOLERANCE * self.abs_max();
        let min = self.min();
        if min > threshold && min > 0.0 {
            Ok(())
        } else {
            Err(Error::NotPositiveDefinite {
                min_eigenvalue: min,
                threshold,
            })
        }
    }
}

/// Symmetric eigensolver (LAPACK `dsyevd`). Only the lower triangle of `m`
/// is referenced.
pub fn sym_eigen(m: &Array2<f64>) -> Result<SymEigen> {
    let (values, vectors) = dsyevd(m, true)?;
    Ok(SymEigen {
        values,
        vectors: vectors.expect("vectors requested"),
    })
}

/// Ascending eigenvalues only.
pub fn sym_eigenvalues(m: &Array2<f64>) -> Result<Array1<f64>> {
    Ok(dsyevd(m, false)?.0)
}

fn dsyevd(m: &Array2<f64>, with_vectors: bool) -> Result<(Array1<f64>, Option<Array2<f64>>)> {
    let n = m.nrows();
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigensolver needs a square matrix, got {:?}",
            m.dim()
        )));
    }
    if n == 0 {
        return Ok((Array1::zeros(0), with_vectors.then(|| Array2::zeros((0, 0)))));
    }
    // Row-major storage of a symmetric matrix is also its column-major storage.
    let mut a: Vec<f64> = m.iter().copied().collect();
    let mut w = vec![0.0; n];
    let nn = lapack_int(n)?;
    let jobz = if with_vectors { b'V' } else { b'N' } as c_char;
    let uplo = b'U' as c_char;
    let mut info: c_int = 0;

    let mut work_query = [0.0_f64];
    let mut iwork_query: [c_int; 1] = [0];
    let query: c_int = -1;
    // SAFETY: workspace query; all pointers reference live buffers of the sizes LAPACK expects.
    unsafe {
        lapack_sys::dsyevd_(
            &jobz,
            &uplo,
            &nn,
            a.as_mut_ptr(),
            &nn,
            w.as_mut_ptr(),
            work_query.as_mut_ptr(),
            &query,
            iwork_query.as_mut_ptr(),
            &query,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack {
            routine: "dsyevd",
            info,
        });
    }
    let lwork = work_query[0] as c_int;
    let liwork = iwork_query[0];
    let mut work = vec![0.0; lwork.max(1) as usize];
    let mut iwork: Vec<c_int> = vec![0; liwork.max(1) as usize];
    // SAFETY: buffers sized from the workspace query above.
    unsafe {
        lapack_sys::dsyevd_(
            &jobz,
            &uplo,
            &nn,
            a.as_mut_ptr(),
            &nn,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack {
            routine: "dsyevd",
            info,
        });
    }
    let vectors = with_vectors.then(|| {
        Array2::from_shape_vec((n, n).f(), a)
            .expect("LAPACK output has n*n entries")
            .as_standard_layout()
            .to_owned()
    });
    Ok((Array1::from(w), vectors))
}

/// Eigenvalues and right eigenvectors of a general real matrix.
#[derive(Debug, Clone)]
pub struct GeneralEigen {
    pub values: Vec<Complex64>,
    /// Column `k` is a unit-norm eigenvector for `values[k]`.
    pub vectors: Array2<Complex64>,
}

/// General real eigensolver (LAPACK `dgeev`).
pub fn general_eigen(m: &Array2<f64>) -> Result<GeneralEigen> {
    let n = m.nrows();
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigensolver needs a square matrix, got {:?}",
            m.dim()
        )));
    }
    let mut a = column_major(&m.view());
    let nn = lapack_int(n.max(1))?;
    let n_c = lapack_int(n)?;
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];
    let mut vl = [0.0_f64; 1];
    let one: c_int = 1;
    let mut vr = vec![0.0; n * n];
    let jobvl = b'N' as c_char;
    let jobvr = b'V' as c_char;
    let mut info: c_int = 0;
    let mut work_query = [0.0_f64];
    let query: c_int = -1;
    // SAFETY: workspace query with correctly sized buffers.
    unsafe {
        lapack_sys::dgeev_(
            &jobvl,
            &jobvr,
            &n_c,
            a.as_mut_ptr(),
            &nn,
            wr.as_mut_ptr(),
            wi.as_mut_ptr(),
            vl.as_mut_ptr(),
            &one,
            vr.as_mut_ptr(),
            &nn,
            work_query.as_mut_ptr(),
            &query,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack {
            routine: "dgeev",
            info,
        });
    }
    let lwork = (work_query[0] as c_int).max(4 * n_c).max(1);
    let mut work = vec![0.0; lwork as usize];
    // SAFETY: buffers sized from the workspace query above.
    unsafe {
        lapack_sys::dgeev_(
            &jobvl,
            &jobvr,
            &n_c,
            a.as_mut_ptr(),
            &nn,
            wr.as_mut_ptr(),
            wi.as_mut_ptr(),
            vl.as_mut_ptr(),
            &one,
            vr.as_mut_ptr(),
            &nn,
            work.as_mut_ptr(),
            &lwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack {
            routine: "dgeev",
            info,
        });
    }
    let vr = Array2::from_shape_vec((n, n).f(), vr).expect("LAPACK output has n*n entries");
    let mut values = Vec::with_capacity(n);
    let mut vectors = Array2::<Complex64>::zeros((n, n));
    let mut k = 0;
    while k < n {
        if wi[k] == 0.0 {
            values.push(Complex64::new(wr[k], 0.0));
            for i in 0..n {
                vectors[[i, k]] = Complex64::new(vr[[i, k]], 0.0);
            }
            k += 1;
        } else {
            // Conjugate pair: columns k and k+1 hold the real and imaginary parts.
            values.push(Complex64::new(wr[k], wi[k]));
            values.push(Complex64::new(wr[k + 1], wi[k + 1]));
            for i in 0..n {
                let re = vr[[i, k]];
                let im = vr[[i, k + 1]];
                vectors[[i, k]] = Complex64::new(re, im);
                vectors[[i, k + 1]] = Complex64::new(re, -im);
            }
            k += 2;
        }
    }
    for mut col in vectors.columns_mut() {
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            col.mapv_inplace(|z| z / norm);
        }
    }
    Ok(GeneralEigen { values, vectors })
}

/// Thin singular value decomposition `m = U diag(s) Vᵀ`, `s` descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Array2<f64>,
    pub singular_values: Array1<f64>,
    pub vt: Array2<f64>,
}

fn gesdd(m: &Array2<f64>, vectors: bool) -> Result<Svd> {
    let (rows, cols) = m.dim();
    let k = rows.min(cols);
    if k == 0 {
        return Ok(Svd {
            u: Array2::zeros((rows, 0)),
            singular_values: Array1::zeros(0),
            vt: Array2::zeros((0, cols)),
        });
    }
    let mut a = column_major(&m.view());
    let m_c = lapack_int(rows)?;
    let n_c = lapack_int(cols)?;
    let k_c = lapack_int(k)?;
    let jobz = if vectors { b'S' } else { b'N' } as c_char;
    let mut s = vec![0.0; k];
    let (ldu, ldvt) = if vectors { (m_c, k_c) } else { (1, 1) };
    let mut u = vec![0.0; if vectors { rows * k } else { 1 }];
    let mut vt = vec![0.0; if vectors { k * cols } else { 1 }];
    let mut iwork: Vec<c_int> = vec![0; 8 * k];
    let mut info: c_int = 0;
    let mut work_query = [0.0_f64];
    let query: c_int = -1;
    // SAFETY: workspace query with correctly sized buffers.
    unsafe {
        lapack_sys::dgesdd_(
            &jobz,
            &m_c,
            &n_c,
            a.as_mut_ptr(),
            &m_c,
            s.as_mut_ptr(),
            u.as_mut_ptr(),
            &ldu,
            vt.as_mut_ptr(),
            &ldvt,
            work_query.as_mut_ptr(),
            &query,
            iwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack {
            routine: "dgesdd",
            info,
        });
    }
    let lwork = (work_query[0] as c_int).max(1);
    let mut work = vec![0.0; lwork as usize];
    // SAFETY: buffers sized from the workspace query above.
    unsafe {
        lapack_sys::dgesdd_(
            &jobz,
            &m_c,
            &n_c,
            a.as_mut_ptr(),
            &m_c,
            s.as_mut_ptr(),
            u.as_mut_ptr(),
            &ldu,
            vt.as_mut_ptr(),
            &ldvt,
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack {
            routine: "dgesdd",
            info,
        });
    }
    let (u, vt) = if vectors {
        (
            Array2::from_shape_vec((rows, k).f(), u)
                .expect("sized by LAPACK")
                .as_standard_layout()
                .to_owned(),
            Array2::from_shape_vec((k, cols).f(), vt)
                .expect("sized by LAPACK")
                .as_standard_layout()
                .to_owned(),
        )
    } else {
        (Array2::zeros((rows, 0)), Array2::zeros((0, cols)))
    };
    Ok(Svd {
        u,
        singular_values: Array1::from(s),
        vt,
    })
}

pub fn svd(m: &Array2<f64>) -> Result<Svd> {
    gesdd(m, true)
}

/// Singular values, descending.
pub fn singular_values(m: &Array2<f64>) -> Result<Array1<f64>> {
    Ok(gesdd(m, false)?.singular_values)
}

/// Largest singular value.
pub fn spectral_norm(m: &Array2<f64>) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

/// Smallest singular value of a complex matrix `re + i·im`, computed from
/// its real embedding `[[re, -im], [im, re]]` whose singular values are
/// those of the complex matrix, each doubled.
pub fn complex_min_singular_value(re: &Array2<f64>, im: &Array2<f64>) -> Result<f64> {
    let n = re.nrows();
    if im.iter().all(|v| *v == 0.0) {
        return Ok(singular_values(re)?.last().copied().unwrap_or(0.0));
    }
    let mut big = Array2::zeros((2 * n, 2 * n));
    big.slice_mut(s![..n, ..n]).assign(re);
    big.slice_mut(s![n.., n..]).assign(re);
    big.slice_mut(s![..n, n..]).assign(&im.mapv(|v| -v));
    big.slice_mut(s![n.., ..n]).assign(im);
    Ok(singular_values(&big)?.last().copied().unwrap_or(0.0))
}

/// Spectral norm for small matrices, power iteration on `mᵀm` for large ones.
/// The estimate is a lower bound, within about a percent; used only to scale
/// tolerances.
pub fn norm_scale(m: &Array2<f64>) -> Result<f64> {
    if m.nrows().max(m.ncols()) <= 256 {
        return spectral_norm(m);
    }
    let mut x = Array1::from_shape_fn(m.ncols(), |i| 1.0 + (i % 7) as f64 * 0.1);
    let mut estimate = 0.0;
    for _ in 0..200 {
        let y = m.t().dot(&m.dot(&x));
        let norm = y.dot(&y).sqrt();
        if norm == 0.0 {
            return Ok(0.0);
        }
        let next = norm.sqrt() / x.dot(&x).sqrt().sqrt();
        x = y / norm;
        if (next - estimate).abs() <= 1e-6 * next {
            estimate = next;
            break;
        }
        estimate = next;
    }
    let mx = m.dot(&x);
    Ok(mx.dot(&mx).sqrt().max(estimate))
}

/// Principal square root of a symmetric positive definite matrix.
pub fn sqrt_spd(m: &SymmetricMatrix) -> Result<SymmetricMatrix> {
    let eig = m.eigen()?;
    eig.require_positive_definite()?;
    Ok(SymmetricMatrix(eig.apply(f64::sqrt)))
}

/// Square root and inverse square root from a single eigendecomposition.
#[derive(Debug, Clone)]
pub struct SpdRoots {
    pub sqrt: SymmetricMatrix,
    pub inv_sqrt: SymmetricMatrix,
    pub eigen: SymEigen,
}

pub fn spd_roots(m: &SymmetricMatrix) -> Result<SpdRoots> {
    let eigen = m.eigen()?;
    eigen.require_positive_definite()?;
    Ok(SpdRoots {
        sqrt: SymmetricMatrix(eigen.apply(f64::sqrt)),
        inv_sqrt: SymmetricMatrix(eigen.apply(|v| 1.0 / v.sqrt())),
        eigen,
    })
}

/// Lower Cholesky factor `m = LLᵀ` (LAPACK `dpotrf`), kept in LAPACK's
/// column-major layout for the triangular solves.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    packed: Vec<f64>,
}

impl Cholesky {
    /// Fails with `NotPositiveDefinite` when the factorization breaks down
    /// or a pivot falls below the positive-definiteness threshold.
    pub fn new(m: &SymmetricMatrix) -> Result<Self> {
        let n = m.order();
        let mut packed: Vec<f64> = m.as_array().iter().copied().collect();
        let scale = m.as_array().diag().iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        let mut info: c_int = 0;
        if n > 0 {
            let nn = lapack_int(n)?;
            let uplo = b'L' as c_char;
            // SAFETY: `packed` holds n*n entries, leading dimension n.
            unsafe { lapack_sys::dpotrf_(&uplo, &nn, packed.as_mut_ptr(), &nn, &mut info) };
        }
        if info < 0 {
            return Err(Error::Lapack { routine: "dpotrf", info });
        }
        let min_pivot = (0..n).map(|i| packed[i * n + i]).fold(f64::INFINITY, f64::min);
        if info > 0 || min_pivot * min_pivot <= SPD_TOLERANCE * scale {
            // Report the eigenvalue that failed.
            m.eigen()?.require_positive_definite()?;
            if info > 0 {
                return Err(Error::NotPositiveDefinite {
                    min_eigenvalue: 0.0,
                    threshold: SPD_TOLERANCE * scale,
                });
            }
        }
        Ok(Cholesky { n, packed })
    }

    pub fn lower(&self) -> Array2<f64> {
        let n = self.n;
        Array2::from_shape_fn((n, n), |(i, j)| if j <= i { self.packed[j * n + i] } else { 0.0 })
    }

    /// `L^{-T} b`.
    pub fn solve_transposed(&self, b: &Array2<f64>) -> Result<Array2<f64>> {
        if b.nrows() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has {} rows, factor has order {}",
                b.nrows(),
                self.n
            )));
        }
        let nrhs = b.ncols();
        let mut x: Vec<f64> = b.t().iter().copied().collect();
        if self.n > 0 && nrhs > 0 {
            let nn = lapack_int(self.n)?;
            let nr = lapack_int(nrhs)?;
            let (uplo, trans, diag) = (b'L' as c_char, b'T' as c_char, b'N' as c_char);
            let mut info: c_int = 0;
            // SAFETY: factor is n*n with leading dimension n; `x` is n*nrhs column-major.
            unsafe {
                lapack_sys::dtrtrs_(
                    &uplo,
                    &trans,
                    &diag,
                    &nn,
                    &nr,
                    self.packed.as_ptr(),
                    &nn,
                    x.as_mut_ptr(),
                    &nn,
                    &mut info,
                )
            };
            if info != 0 {
                return Err(Error::Lapack { routine: "dtrtrs", info });
            }
        }
        Ok(Array2::from_shape_vec((self.n, nrhs).f(), x)
            .expect("n*nrhs entries")
            .as_standard_layout()
            .to_owned())
    }
}

pub fn symmetrize(m: &ArrayView2<f64>) -> Array2<f64> {
    (m + &m.t()) * 0.5
}

pub fn max_abs(m: &ArrayView2<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// The block swap `J = [[0, I], [I, 0]]` of order `2n`.
pub fn swap_symmetry(n: usize) -> Array2<f64> {
    let mut j = Array2::zeros((2 * n, 2 * n));
    for i in 0..n {
        j[[i, n + i]] = 1.0;
        j[[n + i, i]] = 1.0;
    }
    j
}

/// `J·m` for the block swap `J`: exchanges the upper and lower row blocks.
pub fn swap_rows(m: &Array2<f64>) -> Array2<f64> {
    let n = m.nrows() / 2;
    let mut out = Array2::zeros(m.dim());
    out.slice_mut(s![..n, ..]).assign(&m.slice(s![n.., ..]));
    out.slice_mut(s![n.., ..]).assign(&m.slice(s![..n, ..]));
    out
}

/// `m·J`: exchanges the left and right column blocks.
pub fn swap_cols(m: &Array2<f64>) -> Array2<f64> {
    let n = m.ncols() / 2;
    let mut out = Array2::zeros(m.dim());
    out.slice_mut(s![.., ..n]).assign(&m.slice(s![.., n..]));
    out.slice_mut(s![.., n..]).assign(&m.slice(s![.., ..n]));
    out
}

/// Assembles `[[a, b], [c, d]]` from equally sized square blocks.
pub fn block2(a: &Array2<f64>, b: &Array2<f64>, c: &Array2<f64>, d: &Array2<f64>) -> Array2<f64> {
    let n = a.nrows();
    let mut out = Array2::zeros((2 * n, 2 * n));
    out.slice_mut(s![..n, ..n]).assign(a);
    out.slice_mut(s![..n, n..]).assign(b);
    out.slice_mut(s![n.., ..n]).assign(c);
    out.slice_mut(s![n.., n..]).assign(d);
    out
}

/// Block-diagonal `diag(a, a)`.
pub fn block_diag2(a: &Array2<f64>) -> Array2<f64> {
    let z = Array2::zeros(a.dim());
    block2(a, &z, &z, a)
}

fn column_major(m: &ArrayView2<f64>) -> Vec<f64> {
    m.t().iter().copied().collect()
}

fn lapack_int(n: usize) -> Result<c_int> {
    c_int::try_from(n).map_err(|_| Error::DimensionMismatch(format!("order {n} exceeds LAPACK range")))
}
