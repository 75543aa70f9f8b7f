//! The KZ system `W' = ρ A(z) W`, `A(z) = Σₖ Pₖ / (z − zₖ)`.

use crate::error::{KzError, Result};
use crate::exact::{Matrix, Scalar};
use crate::symmetric::{star_generators, t_matrix, PermMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct KzSystem {
    n: usize,
    rho: i64,
    points: Vec<Scalar>,
    generators: Vec<PermMatrix>,
}

impl KzSystem {
    /// Validates `n ≥ 3`, `n − 1` pairwise distinct poles, and attaches the
    /// star generators as residues.
    pub fn new(n: usize, rho: i64, points: Vec<Scalar>) -> Result<Self> {
        if n < 3 {
            return Err(KzError::InvalidSystem(format!("need n >= 3, got {n}")));
        }
        if points.len() != n - 1 {
            return Err(KzError::InvalidSystem(format!(
                "n = {n} needs {} poles, got {}",
                n - 1,
                points.len()
            )));
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(KzError::InvalidSystem(format!(
                        "poles z{} and z{} coincide at {}",
                        i + 1,
                        j + 1,
                        points[i]
                    )));
                }
            }
        }
        Ok(KzSystem {
            n,
            rho,
            points,
            generators: star_generators(n)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rho(&self) -> i64 {
        self.rho
    }

    pub fn rho_scalar(&self) -> Scalar {
        Scalar::from_int(self.rho)
    }

    pub fn points(&self) -> &[Scalar] {
        &self.points
    }

    /// Number of finite poles `s = n − 1`.
    pub fn pole_count(&self) -> usize {
        self.points.len()
    }

    /// Zero-based access to `P_{k+1}`.
    pub fn generator(&self, k: usize) -> &PermMatrix {
        &self.generators[k]
    }

    pub fn generators(&self) -> &[PermMatrix] {
        &self.generators
    }

    /// Same poles and generators with another `ρ`.
    pub fn with_rho(&self, rho: i64) -> KzSystem {
        KzSystem {
            rho,
            ..self.clone()
        }
    }

    /// Zero-based index of the pole at `z`, if any.
    pub fn pole_at(&self, z: &Scalar) -> Option<usize> {
        self.points.iter().position(|p| p == z)
    }

    pub(crate) fn check_pole(&self, k: usize) -> Result<()> {
        if k >= self.points.len() {
            return Err(KzError::Index(format!(
                "pole index {} out of range 1..={}",
                k + 1,
                self.points.len()
            )));
        }
        Ok(())
    }

    /// `A(z)` without the factor `ρ`.
    pub fn eval_a(&self, z: &Scalar) -> Result<Matrix> {
        if let Some(k) = self.pole_at(z) {
            return Err(KzError::AtPole(k + 1));
        }
        let mut a = Matrix::zeros(self.n, self.n);
        for (p, zk) in self.generators.iter().zip(&self.points) {
            let w = (z - zk).inv().expect("z is not a pole");
            a += &p.scale(&w);
        }
        Ok(a)
    }

    /// `ρ A(z)`.
    pub fn coefficient(&self, z: &Scalar) -> Result<Matrix> {
        Ok(self.eval_a(z)?.scale(&self.rho_scalar()))
    }

    /// Laurent coefficients of `ρ A(z)` about the zero-based pole `k`, orders
    /// `−1..=order`.
    pub fn local_coefficients(&self, k: usize, order: i64) -> Result<LocalCoefficients> {
        self.check_pole(k)?;
        if order < -1 {
            return Err(KzError::Index(format!("expansion order {order} below -1")));
        }
        let rho = self.rho_scalar();
        let zk = &self.points[k];
        let mut coeffs = vec![self.generators[k].scale(&rho)];
        // 1/(z − z_l) = Σ_j (−1)^j t^j / (z_k − z_l)^{j+1},  t = z − z_k
        let others: Vec<(Scalar, &PermMatrix)> = self
            .points
            .iter()
            .zip(&self.generators)
            .enumerate()
            .filter(|&(l, _)| l != k)
            .map(|(_, (zl, p))| ((zk - zl).inv().expect("distinct poles"), p))
            .collect();
        let mut powers: Vec<Scalar> = others.iter().map(|(inv, _)| inv.clone()).collect();
        for j in 0..=order {
            let sign = if j % 2 == 0 { rho.clone() } else { -&rho };
            let mut term = Matrix::zeros(self.n, self.n);
            for ((inv, p), pw) in others.iter().zip(powers.iter_mut()) {
                term += &p.scale(&(&sign * &*pw));
                *pw = &*pw * inv;
            }
            coeffs.push(term);
        }
        Ok(LocalCoefficients { pole: k, coeffs })
    }

    /// `T = Σ Pₖ`, the coefficient of `1/z` in `A` at infinity.
    pub fn residue_sum(&self) -> Matrix {
        t_matrix(self.n).expect("n >= 3").matrix().clone()
    }
}

/// Laurent coefficients `ã₋₁, ã₀, …, ã_N` of `ρ A(z)` about one pole.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalCoefficients {
    pub pole: usize,
    coeffs: Vec<Matrix>,
}

impl LocalCoefficients {
    /// Highest order stored.
    pub fn max_order(&self) -> i64 {
        self.coeffs.len() as i64 - 2
    }

    /// `ã_j` for `−1 ≤ j ≤ max_order`.
    pub fn get(&self, j: i64) -> &Matrix {
        &self.coeffs[(j + 1) as usize]
    }

    pub fn residue(&self) -> &Matrix {
        &self.coeffs[0]
    }
}
