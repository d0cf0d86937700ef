//! Dense symmetric matrices and a cyclic Jacobi eigensolver, generic over the scalar type.

use num_traits::{Float, Num, NumCast, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square matrix stored row-major, symmetric by construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DenseSymMatrix<T> {
    dim: usize,
    entries: Vec<T>,
}

impl<T: Num + Copy> DenseSymMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        DenseSymMatrix {
            dim,
            entries: vec![T::zero(); dim * dim],
        }
    }

    /// Wraps row-major entries, rejecting anything that is not exactly symmetric.
    pub fn from_row_major(dim: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Input(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if entries[i * dim + j] != entries[j * dim + i] {
                    return Err(Error::Input(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(DenseSymMatrix { dim, entries })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.dim + j]
    }

    /// Sets `(i, j)` and `(j, i)` together.
    pub fn set_sym(&mut self, i: usize, j: usize, v: T) {
        self.entries[i * self.dim + j] = v;
        self.entries[j * self.dim + i] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn trace(&self) -> T {
        (0..self.dim).fold(T::zero(), |acc, i| acc + self.get(i, i))
    }

    /// Converts every entry, e.g. an exact integer matrix into `f64`.
    pub fn cast<U: Num + Copy + NumCast>(&self) -> Option<DenseSymMatrix<U>>
    where
        T: ToPrimitive,
    {
        let entries = self
            .entries
            .iter()
            .map(|&x| U::from(x))
            .collect::<Option<Vec<U>>>()?;
        Some(DenseSymMatrix {
            dim: self.dim,
            entries,
        })
    }
}

impl<T: Float> DenseSymMatrix<T> {
    pub fn frobenius_norm(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |acc, &x| acc + x * x)
            .sqrt()
    }

    pub fn off_diagonal_norm(&self) -> T {
        let mut s = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    let x = self.get(i, j);
                    s = s + x * x;
                }
            }
        }
        s.sqrt()
    }
}

/// Eigenvalues in ascending order, with multiplicity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum<T> {
    pub values: Vec<T>,
    /// Off-diagonal norm left when iteration stopped; bounds the eigenvalue error.
    pub residual: T,
    pub sweeps: usize,
}

impl<T: Float> Spectrum<T> {
    #[inline]
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `(Σ values, Σ values²)`.
    pub fn sums(&self) -> (T, T) {
        spectral_sums(self)
    }

    /// Number of eigenvalues within `tol` of zero.
    pub fn zero_multiplicity(&self, tol: T) -> usize {
        self.values.iter().filter(|v| v.abs() <= tol).count()
    }
}

/// Sweep limit for [`eigenvalues_symmetric`].
pub const MAX_SWEEPS: usize = 100;

/// Default relative tolerance on the off-diagonal Frobenius norm.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Classical cyclic-by-row Jacobi iteration.
///
/// Stops once the off-diagonal Frobenius norm drops below `tol·(1 + ‖M‖_F)`. Entries at or below
/// `tol·‖M‖_F / n` are skipped, which keeps the skipped mass inside that bound.
pub fn eigenvalues_symmetric<T: Float>(m: &DenseSymMatrix<T>, tol: T) -> Result<Spectrum<T>> {
    if tol.is_nan() || tol <= T::zero() {
        return Err(Error::Input("tolerance must be positive".into()));
    }
    let n = m.dim();
    for i in 0..n {
        for j in (i + 1)..n {
            if m.get(i, j) != m.get(j, i) {
                return Err(Error::Input(format!(
                    "matrix is not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    let mut a = m.entries.clone();
    let norm = m.frobenius_norm();
    let stop = tol * (T::one() + norm);
    let n_t = T::from(n.max(1)).expect("dimension fits the scalar type");
    let threshold = tol * norm / n_t;
    let two = T::one() + T::one();

    let off = |a: &[T]| {
        let mut s = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                s = s + a[i * n + j] * a[i * n + j];
            }
        }
        (s * two).sqrt()
    };

    let mut sweeps = 0;
    let mut residual = off(&a);
    while residual >= stop {
        if sweeps == MAX_SWEEPS {
            return Err(Error::Numeric(format!(
                "Jacobi iteration did not converge in {MAX_SWEEPS} sweeps"
            )));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= threshold {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (two * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = T::zero();
                a[q * n + p] = T::zero();
            }
        }
        sweeps += 1;
        residual = off(&a);
    }
    let mut values: Vec<T> = (0..n).map(|i| a[i * n + i]).collect();
    values.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
    Ok(Spectrum {
        values,
        residual,
        sweeps,
    })
}

/// `(Σ values, Σ values²)`.
pub fn spectral_sums<T: Float>(s: &Spectrum<T>) -> (T, T) {
    s.values
        .iter()
        .fold((T::zero(), T::zero()), |(a, b), &v| (a + v, b + v * v))
}

/// Trace identities linking the two spectra of a graph to its exact edge count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    pub edge_count: u64,
    pub tolerance: f64,
    /// `Σσ − 2|E|` for the Laplacian spectrum.
    pub laplacian_residual: f64,
    /// `Σλ` for the adjacency spectrum.
    pub adjacency_sum: f64,
    /// `Σλ² − 2|E|`.
    pub adjacency_square_residual: f64,
    pub passed: bool,
}

/// Checks `Σσ = 2|E|`, `Σλ = 0`, and `Σλ² = 2|E|` within `1e-8·max(1, 2|E|)`.
pub fn verify_trace_identities<T: Float>(
    edge_count: u64,
    adjacency: &Spectrum<T>,
    laplacian: &Spectrum<T>,
) -> TraceReport {
    let twice = 2.0 * edge_count as f64;
    let tolerance = 1e-8 * twice.max(1.0);
    let (lap_sum, _) = spectral_sums(laplacian);
    let (adj_sum, adj_sq) = spectral_sums(adjacency);
    let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
    let laplacian_residual = f(lap_sum) - twice;
    let adjacency_sum = f(adj_sum);
    let adjacency_square_residual = f(adj_sq) - twice;
    let passed = laplacian_residual.abs() <= tolerance
        && adjacency_sum.abs() <= tolerance
        && adjacency_square_residual.abs() <= tolerance;
    TraceReport {
        edge_count,
        tolerance,
        laplacian_residual,
        adjacency_sum,
        adjacency_square_residual,
        passed,
    }
}
