//! Natural representation of `Sₙ`: transposition matrices, the star
//! generators `Pₖ = P(1, k+1)`, and the matrices `S` and `T`.

use std::ops::Deref;

use crate::error::{KzError, Result};
use crate::exact::{integer_eigenvalues, Matrix, Scalar};

/// A 0/1 permutation matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermMatrix {
    n: usize,
    matrix: Matrix,
}

impl PermMatrix {
    /// Wraps a matrix after checking it has exactly one 1 per row and column.
    pub fn new(matrix: Matrix) -> Result<Self> {
        let n = matrix.rows();
        if !matrix.is_square() {
            return Err(KzError::Shape("permutation matrix must be square".into()));
        }
        let one = Scalar::one();
        for i in 0..n {
            let row_ones = (0..n).filter(|&j| matrix[(i, j)] == one).count();
            let col_ones = (0..n).filter(|&j| matrix[(j, i)] == one).count();
            let row_zeros = (0..n).filter(|&j| matrix[(i, j)].is_zero()).count();
            if row_ones != 1 || col_ones != 1 || row_zeros != n - 1 {
                return Err(KzError::Shape(format!("row/column {i} is not a permutation row")));
            }
        }
        Ok(PermMatrix { n, matrix })
    }

    pub fn identity(n: usize) -> Self {
        PermMatrix {
            n,
            matrix: Matrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn is_involution(&self) -> bool {
        &self.matrix * &self.matrix == Matrix::identity(self.n)
    }
}

impl Deref for PermMatrix {
    type Target = Matrix;
    fn deref(&self) -> &Matrix {
        &self.matrix
    }
}

/// `P(i, j)` for 1-based indices: the permutation matrix of the transposition
/// `(i; j)`.
pub fn transposition_matrix(n: usize, i: usize, j: usize) -> Result<PermMatrix> {
    if i == j {
        return Err(KzError::Index(format!("transposition needs i != j (got {i})")));
    }
    if i == 0 || j == 0 || i > n || j > n {
        return Err(KzError::Index(format!("indices ({i}, {j}) out of range 1..={n}")));
    }
    let mut m = Matrix::identity(n);
    let (a, b) = (i - 1, j - 1);
    m[(a, a)] = Scalar::zero();
    m[(b, b)] = Scalar::zero();
    m[(a, b)] = Scalar::one();
    m[(b, a)] = Scalar::one();
    Ok(PermMatrix { n, matrix: m })
}

/// `[P(1,2), P(1,3), …, P(1,n)]`.
pub fn star_generators(n: usize) -> Result<Vec<PermMatrix>> {
    if n < 2 {
        return Err(KzError::InvalidSystem(format!("need n >= 2, got {n}")));
    }
    (2..=n).map(|k| transposition_matrix(n, 1, k)).collect()
}

/// Returns `(I + P, I − P)`; their product vanishes for an involution.
pub fn plus_minus_matrices(p: &PermMatrix) -> Result<(Matrix, Matrix)> {
    if !p.is_involution() {
        return Err(KzError::Shape("plus/minus split needs an involution".into()));
    }
    let id = Matrix::identity(p.dim());
    Ok((&id + p.matrix(), &id - p.matrix()))
}

/// `S`: top-left entry `2 − n`, ones along the rest of the first row and
/// column, zeros elsewhere.
pub fn s_matrix(n: usize) -> Result<Matrix> {
    if n < 2 {
        return Err(KzError::InvalidSystem(format!("need n >= 2, got {n}")));
    }
    let mut s = Matrix::zeros(n, n);
    s[(0, 0)] = Scalar::from_int(2 - n as i64);
    for k in 1..n {
        s[(0, k)] = Scalar::one();
        s[(k, 0)] = Scalar::one();
    }
    Ok(s)
}

/// `T = (n − 2) I + S`, the residue of `A(z)` at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TMatrix {
    n: usize,
    matrix: Matrix,
}

impl TMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }
}

impl Deref for TMatrix {
    type Target = Matrix;
    fn deref(&self) -> &Matrix {
        &self.matrix
    }
}

/// Builds `T` and cross-checks it against the sum of the star generators.
pub fn t_matrix(n: usize) -> Result<TMatrix> {
    let s = s_matrix(n)?;
    let t = &Matrix::identity(n).scale(&Scalar::from_int(n as i64 - 2)) + &s;
    let mut sum = Matrix::zeros(n, n);
    for p in star_generators(n)? {
        sum += p.matrix();
    }
    if sum != t {
        return Err(KzError::Internal("T differs from the sum of star generators".into()));
    }
    Ok(TMatrix { n, matrix: t })
}

/// Integer spectrum of `T` with the extreme eigenvalues `m_T`, `M_T`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct TSpectrum {
    pub n: usize,
    /// `(eigenvalue, multiplicity)` in ascending order.
    pub eigenvalues: Vec<(i64, usize)>,
    pub min: i64,
    pub max: i64,
}

pub fn t_spectrum(n: usize) -> Result<TSpectrum> {
    if n < 3 {
        return Err(KzError::InvalidSystem(format!("spectrum needs n >= 3, got {n}")));
    }
    let t = t_matrix(n)?;
    let eigenvalues = integer_eigenvalues(t.matrix())?;
    let total: usize = eigenvalues.iter().map(|&(_, m)| m).sum();
    if total != n {
        return Err(KzError::Internal(format!(
            "T has only {total} of {n} eigenvalues in the integers"
        )));
    }
    let ni = n as i64;
    for expected in [ni - 1, ni - 2, -1] {
        if !eigenvalues.iter().any(|&(e, _)| e == expected) {
            return Err(KzError::Internal(format!("eigenvalue {expected} missing from T")));
        }
    }
    let min = eigenvalues.first().map(|e| e.0).unwrap_or_default();
    let max = eigenvalues.last().map(|e| e.0).unwrap_or_default();
    if min != -1 || max != ni - 1 {
        return Err(KzError::Internal(format!("unexpected extreme eigenvalues ({min}, {max})")));
    }
    Ok(TSpectrum {
        n,
        eigenvalues,
        min,
        max,
    })
}
