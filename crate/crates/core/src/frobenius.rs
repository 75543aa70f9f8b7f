//! Local Laurent-series solutions at a pole.
//!
//! Substituting `W = Σ_{p≥m} b_p t^p` (`t = z − zₖ`) into `W' = ρ A W` and
//! writing `ρ A = Σ_{j≥−1} ã_j t^j` gives, order by order,
//!
//! ```text
//! [(q+1) I − ã₋₁] b_{q+1} = Σ_{j≥0, j+ℓ=q} ã_j b_ℓ
//! ```
//!
//! A leading order `m` must be an integer eigenvalue of `ã₋₁`, and the only
//! orders at which the left-hand matrix is singular are those eigenvalues.
//! Past the greatest one every coefficient is forced, so truncating at
//! `N ≥ M` captures the whole family of such solutions.

use crate::ansatz::RationalVectorFunction;
use crate::error::{KzError, Result};
use crate::exact::{integer_eigenvalues, nullspace, rref, solve_affine, AffineSolution, Matrix, Scalar, Vector};
use crate::system::{KzSystem, LocalCoefficients};

/// Coefficients `b_m … b_N` of a local solution at one pole.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct LocalSeries {
    pub pole: usize,
    pub lowest: i64,
    pub coeffs: Vec<Vector>,
}

impl LocalSeries {
    /// Highest order stored.
    pub fn highest(&self) -> i64 {
        self.lowest + self.coeffs.len() as i64 - 1
    }

    /// `b_order`, zero outside the stored range.
    pub fn coeff(&self, order: i64, n: usize) -> Vector {
        let idx = order - self.lowest;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Vector::zeros(n)
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    /// Drops leading zero coefficients so that `b_lowest ≠ 0`.
    fn trimmed(mut self) -> Self {
        let lead = self.coeffs.iter().take_while(|b| b.is_zero()).count();
        self.coeffs.drain(..lead);
        self.lowest += lead as i64;
        self
    }
}

/// Least and greatest integer eigenvalues of `ã₋₁ = ρ Pₖ`.
pub fn exponent_window(sys: &KzSystem, k: usize) -> Result<(i64, i64)> {
    let lc = sys.local_coefficients(k, -1)?;
    let eig = integer_eigenvalues(lc.residue())?;
    match (eig.first(), eig.last()) {
        (Some(&(lo, _)), Some(&(hi, _))) => Ok((lo, hi)),
        _ => Err(KzError::Internal(format!(
            "residue at pole {} has no integer eigenvalues",
            k + 1
        ))),
    }
}

/// Defect of the recursion at every order `lowest ..= highest` of `series`;
/// all entries vanish for a true local solution.
pub fn recursion_defects(sys: &KzSystem, series: &LocalSeries) -> Result<Vec<(i64, Vector)>> {
    let n = sys.dim();
    let span = (series.highest() - series.lowest).max(0);
    let lc = sys.local_coefficients(series.pole, span)?;
    let mut out = Vec::new();
    for order in series.lowest..=series.highest() {
        let mut d = left_matrix(&lc, order, n).mul_vec(&series.coeff(order, n));
        for l in series.lowest..order {
            let j = order - 1 - l;
            d = &d - &lc.get(j).mul_vec(&series.coeff(l, n));
        }
        out.push((order, d));
    }
    Ok(out)
}

fn left_matrix(lc: &LocalCoefficients, order: i64, n: usize) -> Matrix {
    &Matrix::identity(n).scale(&Scalar::from_int(order)) - lc.residue()
}

/// The full family of local solutions at one pole, truncated at order `N`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct FrobeniusSolution {
    pub pole: usize,
    pub window: (i64, i64),
    pub truncation: i64,
    /// A basis of the family adapted to leading order: each member has
    /// `b_lowest ≠ 0`, and the members with `lowest ≥ e` span the solutions
    /// that start at order `e` or later.
    pub basis: Vec<LocalSeries>,
}

impl FrobeniusSolution {
    /// Distinct leading orders present, ascending.
    pub fn leading_orders(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.basis.iter().map(|s| s.lowest).collect();
        v.dedup();
        v
    }

    /// Dimension of the solutions whose series starts at `order` or later.
    pub fn dim_from(&self, order: i64) -> usize {
        self.basis.iter().filter(|s| s.lowest >= order).count()
    }

    /// Whether `series` (truncated to the same order) lies in the family.
    pub fn contains(&self, series: &LocalSeries, n: usize) -> Result<bool> {
        let (lo, hi) = (self.window.0, self.truncation);
        let flat = |s: &LocalSeries| Vector((lo..=hi).flat_map(|o| s.coeff(o, n).0).collect());
        let cols: Vec<Vector> = self.basis.iter().map(flat).collect();
        let target = flat(series);
        if cols.is_empty() {
            return Ok(target.is_zero());
        }
        Ok(solve_affine(&Matrix::from_columns(&cols), &target)?.is_consistent())
    }
}

/// Enumerates every local solution `b_m … b_N` at the zero-based pole `k`.
///
/// Free parameters are tracked as columns: `coeffs[ℓ]` is an `n × P` matrix
/// whose product with a parameter vector gives `b_ℓ`. Resonant orders may add
/// parameters (kernel directions) or remove them (consistency constraints).
pub fn frobenius_solve(sys: &KzSystem, k: usize, truncation: i64) -> Result<FrobeniusSolution> {
    let n = sys.dim();
    let window = exponent_window(sys, k)?;
    let (m, top) = window;
    if truncation < top {
        return Err(KzError::Index(format!(
            "truncation {truncation} is below the window end {top}"
        )));
    }
    let lc = sys.local_coefficients(k, truncation - m)?;

    let seed = nullspace(&left_matrix(&lc, m, n));
    let mut coeffs: Vec<Matrix> = vec![Matrix::from_columns(&seed)];
    let mut params = seed.len();

    for order in m + 1..=truncation {
        if params == 0 {
            break;
        }
        // Right-hand side as an n × P matrix.
        let mut rhs = Matrix::zeros(n, params);
        for (idx, b) in coeffs.iter().enumerate() {
            let l = m + idx as i64;
            rhs += &(lc.get(order - 1 - l) * b);
        }
        let left = left_matrix(&lc, order, n);
        if left.rank() == n {
            let mut cols = Vec::with_capacity(params);
            for p in 0..params {
                match solve_affine(&left, &rhs.column(p))? {
                    AffineSolution::Consistent { particular, .. } => cols.push(particular),
                    AffineSolution::Inconsistent { .. } => {
                        return Err(KzError::Internal("nonsingular solve reported inconsistent".into()))
                    }
                }
            }
            coeffs.push(Matrix::from_columns(&cols));
        } else {
            // Solve [left | −rhs] (x; p) = 0 jointly for the new coefficient
            // and the surviving parameter combinations.
            let mut joint = Matrix::zeros(n, n + params);
            for i in 0..n {
                for j in 0..n {
                    joint[(i, j)] = left[(i, j)].clone();
                }
                for p in 0..params {
                    joint[(i, n + p)] = -&rhs[(i, p)];
                }
            }
            let kernel = nullspace(&joint);
            let reparam = Matrix::from_columns(
                &kernel.iter().map(|v| Vector(v.0[n..].to_vec())).collect::<Vec<_>>(),
            );
            let new_coeff = Matrix::from_columns(
                &kernel.iter().map(|v| Vector(v.0[..n].to_vec())).collect::<Vec<_>>(),
            );
            params = kernel.len();
            if params == 0 {
                coeffs.clear();
                break;
            }
            coeffs = coeffs.iter().map(|b| b * &reparam).collect();
            coeffs.push(new_coeff);
        }
    }

    // One flattened row per parameter, ordered by ascending order; the
    // reduced echelon form gives the leading-order-adapted basis.
    let width = (truncation - m + 1) as usize;
    let mut rows = Vec::with_capacity(params);
    for p in 0..params {
        let mut flat = Vec::with_capacity(width * n);
        for o in 0..width {
            match coeffs.get(o) {
                Some(b) => flat.extend(b.column(p).0),
                None => flat.extend(Vector::zeros(n).0),
            }
        }
        rows.push(flat);
    }
    let mut basis = Vec::new();
    if !rows.is_empty() {
        let (reduced, pivots) = rref(&Matrix::from_rows(&rows));
        for r in 0..pivots.len() {
            let row = reduced.row(r);
            let series = LocalSeries {
                pole: k,
                lowest: m,
                coeffs: row.chunks(n).map(|c| Vector(c.to_vec())).collect(),
            }
            .trimmed();
            basis.push(series);
        }
    }
    Ok(FrobeniusSolution {
        pole: k,
        window,
        truncation,
        basis,
    })
}

/// Exact Laurent coefficients of a rational function at pole `k` through
/// order `N`, with leading zeros dropped.
pub fn laurent_of_rational(f: &RationalVectorFunction, k: usize, truncation: i64) -> Result<LocalSeries> {
    let (lowest, coeffs) = f.laurent_at(k, truncation)?;
    Ok(LocalSeries {
        pole: k,
        lowest,
        coeffs,
    }
    .trimmed())
}
