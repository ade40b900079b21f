//! Klein-Gordon block operators assembled from `(U², V)`.
//!
//! With `U = (U²)^{1/2}` the Hamiltonian, its Gram matrix and the free
//! Hamiltonian are
//!
//! ```text
//! H  = [[U^{1/2} V U^{-1/2}, U], [U, U^{-1/2} V U^{1/2}]]
//! G  = J·H,  J = [[0, I], [I, 0]]
//! H₀ = [[0, U], [U, 0]]
//! ```
//!
//! and `G - μJ = diag(U,U)^{1/2} [[I, Aᵀ], [A, I]] diag(U,U)^{1/2}` with
//! `A = (V - μ)U^{-1}`. The contraction `b = ‖A‖ < 1` makes `H` similar to
//! a selfadjoint matrix.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::linalg::{self, SymmetricMatrix};

/// The pair `(U², V)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    u_squared: SymmetricMatrix,
    v: SymmetricMatrix,
    pub label: String,
}

impl ModelSpec {
    pub fn new(u_squared: SymmetricMatrix, v: SymmetricMatrix, label: impl Into<String>) -> Result<Self> {
        if u_squared.order() != v.order() {
            return Err(Error::DimensionMismatch(format!(
                "U² has order {} but V has order {}",
                u_squared.order(),
                v.order()
            )));
        }
        u_squared.eigen()?.require_positive_definite()?;
        Ok(ModelSpec {
            u_squared,
            v,
            label: label.into(),
        })
    }

    pub fn order(&self) -> usize {
        self.u_squared.order()
    }

    pub fn u_squared(&self) -> &SymmetricMatrix {
        &self.u_squared
    }

    pub fn v(&self) -> &SymmetricMatrix {
        &self.v
    }

    /// Same `U²`, potential replaced by `V + δV`.
    pub fn perturbed(&self, delta_v: &SymmetricMatrix) -> Result<ModelSpec> {
        Ok(ModelSpec {
            u_squared: self.u_squared.clone(),
            v: self.v.add(delta_v)?,
            label: format!("{} + dV", self.label),
        })
    }

    /// Same `U²`, potential `t·V`.
    pub fn with_coupling(&self, t: f64) -> ModelSpec {
        ModelSpec {
            u_squared: self.u_squared.clone(),
            v: self.v.scaled(t),
            label: format!("{} (coupling {t})", self.label),
        }
    }
}

/// Powers of `U` obtained from one eigendecomposition of `U²`.
#[derive(Debug, Clone)]
pub struct UPowers {
    /// `U = (U²)^{1/2}`
    pub u: SymmetricMatrix,
    /// `U^{-1}`
    pub u_inv: SymmetricMatrix,
    /// `U^{1/2}`
    pub u_half: SymmetricMatrix,
    /// `U^{-1/2}`
    pub u_inv_half: SymmetricMatrix,
    /// Smallest eigenvalue of `U`.
    pub u_min: f64,
    /// Largest eigenvalue of `U`.
    pub u_max: f64,
}

impl UPowers {
    pub fn new(u_squared: &SymmetricMatrix) -> Result<Self> {
        let eig = u_squared.eigen()?;
        eig.require_positive_definite()?;
        Ok(UPowers {
            u: SymmetricMatrix::symmetric_part(&eig.apply(f64::sqrt)),
            u_inv: SymmetricMatrix::symmetric_part(&eig.apply(|x| 1.0 / x.sqrt())),
            u_half: SymmetricMatrix::symmetric_part(&eig.apply(|x| x.powf(0.25))),
            u_inv_half: SymmetricMatrix::symmetric_part(&eig.apply(|x| x.powf(-0.25))),
            u_min: eig.min().sqrt(),
            u_max: eig.max().sqrt(),
        })
    }
}

/// An assembled Klein-Gordon system at a fixed spectral shift `μ`.
#[derive(Debug, Clone)]
pub struct KleinGordonSystem {
    pub n: usize,
    pub powers: UPowers,
    /// `H`, order `2n`.
    pub hamiltonian: Array2<f64>,
    /// `G = J·H`, symmetric.
    pub gram: SymmetricMatrix,
    /// `H₀ = [[0, U], [U, 0]]`.
    pub free_hamiltonian: Array2<f64>,
    pub shift: f64,
    /// `A = (V - μ)U^{-1}`.
    pub a_matrix: Array2<f64>,
    /// `b = ‖A‖`.
    pub contraction: f64,
}

impl KleinGordonSystem {
    /// `G - μJ`.
    pub fn shifted_gram(&self) -> SymmetricMatrix {
        let mut g = self.gram.as_array().clone();
        let n = self.n;
        for i in 0..n {
            g[[i, n + i]] -= self.shift;
            g[[n + i, i]] -= self.shift;
        }
        SymmetricMatrix::symmetric_part(&g)
    }

    /// `[[I, Aᵀ], [A, I]]`.
    pub fn block_a(&self) -> Array2<f64> {
        let eye = Array2::eye(self.n);
        linalg::block2(&eye, &self.a_matrix.t().to_owned(), &self.a_matrix, &eye)
    }

    /// `diag(U, U)`.
    pub fn u_block(&self) -> Array2<f64> {
        linalg::block_diag2(self.powers.u.as_array())
    }

    /// `diag(U^{1/2}, U^{1/2})`.
    pub fn u_block_half(&self) -> Array2<f64> {
        linalg::block_diag2(self.powers.u_half.as_array())
    }

    /// Smallest eigenvalue of `U`, i.e. `inf |σ(H₀)|`.
    pub fn free_gap(&self) -> f64 {
        self.powers.u_min
    }

    pub fn swap(&self) -> Array2<f64> {
        linalg::swap_symmetry(self.n)
    }
}

/// Builds `H`, `G`, `H₀`, `A` and `b` for the shift `μ`.
pub fn assemble_system(spec: &ModelSpec, shift: f64) -> Result<KleinGordonSystem> {
    let powers = UPowers::new(spec.u_squared())?;
    assemble_with_powers(spec, shift, powers)
}

pub(crate) fn assemble_with_powers(spec: &ModelSpec, shift: f64, powers: UPowers) -> Result<KleinGordonSystem> {
    let n = spec.order();
    let v = spec.v().as_array();
    let u = powers.u.as_array();
    let uh = powers.u_half.as_array();
    let uih = powers.u_inv_half.as_array();

    let lower_left = uh.dot(v).dot(uih); // U^{1/2} V U^{-1/2}
    let upper_right = uih.dot(v).dot(uh); // U^{-1/2} V U^{1/2}
    let gram = SymmetricMatrix::symmetric_part(&linalg::block2(u, &upper_right, &lower_left, u));
    let hamiltonian = linalg::swap_rows(gram.as_array());
    let zero = Array2::zeros((n, n));
    let free_hamiltonian = linalg::block2(&zero, u, u, &zero);
    let a_matrix = shifted_potential(v, shift).dot(powers.u_inv.as_array());
    let contraction = linalg::spectral_norm(&a_matrix)?;

    Ok(KleinGordonSystem {
        n,
        powers,
        hamiltonian,
        gram,
        free_hamiltonian,
        shift,
        a_matrix,
        contraction,
    })
}

/// `(H₀, diag(U, U))`.
pub fn assemble_free(spec: &ModelSpec) -> Result<(Array2<f64>, Array2<f64>)> {
    let powers = UPowers::new(spec.u_squared())?;
    let u = powers.u.as_array();
    let zero = Array2::zeros(u.dim());
    Ok((linalg::block2(&zero, u, u, &zero), linalg::block_diag2(u)))
}

/// `A = (V - μI)U^{-1}`.
pub fn operator_a(spec: &ModelSpec, shift: f64) -> Result<Array2<f64>> {
    let powers = UPowers::new(spec.u_squared())?;
    Ok(shifted_potential(spec.v().as_array(), shift).dot(powers.u_inv.as_array()))
}

/// `b(μ) = ‖(V - μI)U^{-1}‖`. Values `≥ 1` are returned as is.
pub fn contraction_bound(spec: &ModelSpec, shift: f64) -> Result<f64> {
    linalg::spectral_norm(&operator_a(spec, shift)?)
}

/// Minimizes the convex function `μ ↦ ‖(V - μ)U^{-1}‖` by golden-section
/// search on `[λ_min(V) - ‖U‖, λ_max(V) + ‖U‖]` to an absolute tolerance
/// of `1e-10` in `μ`. Returns `(μ*, b(μ*))`.
pub fn optimize_shift(spec: &ModelSpec) -> Result<(f64, f64)> {
    const TOLERANCE: f64 = 1e-10;
    let powers = UPowers::new(spec.u_squared())?;
    let u_inv = powers.u_inv.as_array();
    let v = spec.v().as_array();
    let objective = |mu: f64| linalg::spectral_norm(&shifted_potential(v, mu).dot(u_inv));

    let v_eig = spec.v().eigen()?;
    let mut lo = v_eig.min() - powers.u_max;
    let mut hi = v_eig.max() + powers.u_max;
    let ratio = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = objective(x1)?;
    let mut f2 = objective(x2)?;
    while hi - lo > TOLERANCE {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = objective(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = objective(x2)?;
        }
    }
    let mid = 0.5 * (lo + hi);
    let mut best = (mid, objective(mid)?);
    for (mu, value) in [(x1, f1), (x2, f2)] {
        if value < best.1 {
            best = (mu, value);
        }
    }
    Ok(best)
}

fn shifted_potential(v: &Array2<f64>, shift: f64) -> Array2<f64> {
    let mut out = v.clone();
    for i in 0..out.nrows() {
        out[[i, i]] -= shift;
    }
    out
}
