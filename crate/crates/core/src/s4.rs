//! Closed-form rational solutions `Y₁ … Y₄` of the `n = 4`, `ρ = −1` system
//! and the fundamental matrix they form.
//!
//! Every constructor takes the three poles `(z₁, z₂, z₃)` and fails loudly if
//! two coincide or if a coefficient denominator vanishes.

use crate::ansatz::RationalVectorFunction;
use crate::error::{KzError, Result};
use crate::exact::{determinant, Matrix, Scalar, Vector};

/// Coefficient algebra shared by the four solutions.
///
/// `y3_abc` and `y4_abcde` reuse the letters `a, b, c` for different
/// quantities, so they are kept apart.
#[derive(Clone, Debug, PartialEq)]
pub struct S4Coefficients {
    pub alpha: Scalar,
    pub beta: Scalar,
    /// `β₁ = z₂ − z₃`, `β₂ = z₃ − z₁`, `β₃ = z₁ − z₂`.
    pub betas: [Scalar; 3],
    /// `α₁ = 1/(z₃ − z₂)`, `α₂ = 1/(z₁ − z₃)`, `α₃ = 1/(z₂ − z₁)`.
    pub alphas: [Scalar; 3],
    pub y3_abc: [Scalar; 3],
    pub y4_abcde: [Scalar; 5],
}

fn three(points: &[Scalar]) -> Result<[Scalar; 3]> {
    let [z1, z2, z3]: [Scalar; 3] = points
        .to_vec()
        .try_into()
        .map_err(|_| KzError::InvalidSystem(format!("S4 needs 3 poles, got {}", points.len())))?;
    if z1 == z2 || z1 == z3 || z2 == z3 {
        return Err(KzError::InvalidSystem("coincident poles".into()));
    }
    Ok([z1, z2, z3])
}

fn nonzero(x: &Scalar, what: &str) -> Result<()> {
    if x.is_zero() {
        Err(KzError::Degenerate(format!("{what} vanishes")))
    } else {
        Ok(())
    }
}

impl S4Coefficients {
    pub fn new(points: &[Scalar]) -> Result<Self> {
        let [z1, z2, z3] = three(points)?;
        let d21 = &z2 - &z1;
        let d31 = &z3 - &z1;
        let d32 = &z3 - &z2;
        let alpha = -(&d32 / &d31);
        let beta = &d32 / &d21;

        let betas = [&z2 - &z3, &z3 - &z1, &z1 - &z2];
        for (k, b) in betas.iter().enumerate() {
            nonzero(b, &format!("beta{}", k + 1))?;
        }
        let [b1, b2, b3] = &betas;
        let y3_abc = [
            -(b1 / b3),
            -(b3 / b2),
            &(b1 * b1) / &(b2 * b3),
        ];

        let alphas = [
            d32.inv().expect("distinct poles"),
            (&z1 - &z3).inv().expect("distinct poles"),
            d21.inv().expect("distinct poles"),
        ];
        let [a1, a2, a3] = &alphas;
        let a3_cubed = a3.powi(3);
        nonzero(&(a2 * &a3_cubed), "alpha2*alpha3^3")?;
        let a = -(a1 / a3);
        let c = &(a1 * a1) / &(a2 * a3);
        let d = -(&(&(a1 * a1) / &(a2 * &a3_cubed)) * &(&(a1 * a2) + &(a3 * a3)));
        let e = &Scalar::one() + &(a1 / a2);
        let b = -(&(a3 / a2) * &d);
        Ok(S4Coefficients {
            alpha,
            beta,
            betas,
            alphas,
            y3_abc,
            y4_abcde: [a, b, c, d, e],
        })
    }

    /// Left-hand sides of the two β identities plus the analogous one at the
    /// third pole; all three vanish exactly.
    pub fn beta_identities(&self, points: &[Scalar]) -> Result<[Scalar; 3]> {
        let [z1, z2, z3] = three(points)?;
        let [b1, b2, b3] = &self.betas;
        let term = |num: Scalar, den: Scalar| &num / &den;
        Ok([
            &term(b1 + b2, &z1 - &z2) + &term(b1 + b3, &z1 - &z3),
            &term(b1 + b2, &z2 - &z1) + &term(b2 + b3, &z2 - &z3),
            &term(b1 + b3, &z3 - &z1) + &term(b2 + b3, &z3 - &z2),
        ])
    }
}

fn col(v: [i64; 4]) -> Vector {
    Vector::from_ints(&v)
}

fn vec4(entries: [Scalar; 4]) -> Vector {
    Vector(entries.to_vec())
}

fn pole_only(points: &[Scalar], residues: Vec<Vector>) -> Result<RationalVectorFunction> {
    RationalVectorFunction::simple(points.to_vec(), residues, Vector::zeros(4), Vector::zeros(4))
}

/// `Y₁`: residues along the sign patterns of the Klein four-group plus a
/// linear polynomial part.
pub fn y1(points: &[Scalar]) -> Result<RationalVectorFunction> {
    let [z1, z2, z3] = three(points)?;
    let co = S4Coefficients::new(points)?;
    let l1 = col([1, 1, -1, -1]);
    let n2 = col([1, -1, 1, -1]);
    let n3 = col([1, -1, -1, 1]);
    let residues = vec![l1.clone(), n2.scale(&co.alpha), n3.scale(&co.beta)];
    let scale = (&(&z2 - &z1) * &(&z3 - &z1)).inv().expect("distinct poles");
    let q_minus1 = col([3, -1, -1, -1]).scale(&-&scale);
    let mut q0 = l1.scale(&z1);
    q0.axpy(&z2, &n2);
    q0.axpy(&z3, &n3);
    let q0 = q0.scale(&scale);
    RationalVectorFunction::simple(points.to_vec(), residues, q_minus1, q0)
}

/// `Y₂ = Σ βₖ (1,1,1,1)ᵀ / (z − zₖ)`.
pub fn y2(points: &[Scalar]) -> Result<RationalVectorFunction> {
    let co = S4Coefficients::new(points)?;
    let ones = col([1, 1, 1, 1]);
    pole_only(points, co.betas.iter().map(|b| ones.scale(b)).collect())
}

pub fn y3(points: &[Scalar]) -> Result<RationalVectorFunction> {
    let co = S4Coefficients::new(points)?;
    let [a, b, c] = co.y3_abc.clone();
    let [b1, b2, b3] = &co.betas;
    let z = Scalar::zero;
    let o = Scalar::one;
    let m1 = vec4([z(), z(), o(), a.clone()]).scale(b1);
    let m2 = vec4([z(), b, z(), c]).scale(b2);
    let m3 = vec4([z(), o(), a, z()]).scale(b3);
    pole_only(points, vec![m1, m2, m3])
}

pub fn y4(points: &[Scalar]) -> Result<RationalVectorFunction> {
    let co = S4Coefficients::new(points)?;
    let [a, b, c, d, e] = co.y4_abcde.clone();
    let [a1, a2, a3] = &co.alphas;
    let z = Scalar::zero;
    let l1 = vec4([z(), z(), Scalar::one(), a]).scale(a1);
    let l2 = vec4([z(), b, z(), c]).scale(a2);
    let l3 = vec4([z(), d, e, z()]).scale(a3);
    pole_only(points, vec![l1, l2, l3])
}

/// Columns `Y₁ … Y₄`, optionally combined with constants `c₁ … c₄`.
///
/// The columns are dependent exactly when `z₂` is the midpoint of `z₁` and
/// `z₃` (then `Y₃ = −Y₄`); `certificate` is `None` in that case.
#[derive(Clone, Debug, PartialEq)]
pub struct FundamentalSolution {
    pub columns: [RationalVectorFunction; 4],
    pub constants: Option<[Scalar; 4]>,
    pub certificate: Option<IndependenceCertificate>,
}

impl FundamentalSolution {
    /// The 4×4 matrix `[Y₁(z) … Y₄(z)]`.
    pub fn eval_matrix(&self, z: &Scalar) -> Result<Matrix> {
        let cols = self
            .columns
            .iter()
            .map(|y| y.eval(z))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(&cols))
    }

    pub fn is_fundamental(&self) -> bool {
        self.certificate.is_some()
    }

    /// `Y(z) = Σ cₖ Yₖ(z)`, if constants were supplied.
    pub fn combined(&self) -> Option<RationalVectorFunction> {
        let cs = self.constants.as_ref()?;
        let mut acc = self.columns[0].scale(&cs[0]);
        for (y, c) in self.columns.iter().zip(cs).skip(1) {
            acc = acc.add(&y.scale(c)).expect("same poles");
        }
        Some(acc)
    }
}

pub fn fundamental_matrix(points: &[Scalar], constants: Option<[Scalar; 4]>) -> Result<FundamentalSolution> {
    let columns = [y1(points)?, y2(points)?, y3(points)?, y4(points)?];
    let certificate = match certify_independence(points, &columns) {
        Ok(c) => Some(c),
        Err(KzError::Certification(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(FundamentalSolution {
        columns,
        constants,
        certificate,
    })
}

/// Whether `z₂ − z₁ = (z₃ − z₁)/2`, the one configuration where the four
/// closed-form solutions fail to be independent.
pub fn is_midpoint_configuration(points: &[Scalar]) -> Result<bool> {
    let [z1, z2, z3] = three(points)?;
    Ok(&(&z2 - &z1) * &Scalar::from_int(2) == &z3 - &z1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndependenceCertificate {
    pub probe: Scalar,
    pub determinant: Scalar,
    /// Probes tried, including skipped poles.
    pub attempts: usize,
}

/// Probes tried before giving up.
pub const MAX_PROBES: usize = 16;

/// Deterministic probe sequence: the first integer above `max |zₖ|`, then
/// successive increments.
pub fn probe_points(points: &[Scalar]) -> impl Iterator<Item = Scalar> {
    let radius = points.iter().map(Scalar::approx_abs).fold(0.0, f64::max);
    let start = radius.floor() as i64 + 1;
    (0..MAX_PROBES as i64).map(move |i| Scalar::from_int(start + i))
}

/// Searches the probe sequence for a point where `det[Y₁ … Y₄]` is nonzero.
pub fn independence_certificate(points: &[Scalar]) -> Result<IndependenceCertificate> {
    let columns = [y1(points)?, y2(points)?, y3(points)?, y4(points)?];
    certify_independence(points, &columns)
}

/// Same search for an arbitrary set of columns.
pub fn certify_independence(
    points: &[Scalar],
    columns: &[RationalVectorFunction],
) -> Result<IndependenceCertificate> {
    certify_with_probes(points, columns, probe_points(points))
}

/// Tries the given probes in order; poles are skipped.
pub fn certify_with_probes(
    points: &[Scalar],
    columns: &[RationalVectorFunction],
    probes: impl IntoIterator<Item = Scalar>,
) -> Result<IndependenceCertificate> {
    let mut attempts = 0;
    for probe in probes {
        attempts += 1;
        if points.contains(&probe) {
            continue;
        }
        let cols = columns
            .iter()
            .map(|y| y.eval(&probe))
            .collect::<Result<Vec<_>>>()?;
        let det = determinant(&Matrix::from_columns(&cols))?;
        if !det.is_zero() {
            return Ok(IndependenceCertificate {
                probe,
                determinant: det,
                attempts,
            });
        }
    }
    Err(KzError::Certification(attempts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{check_conditions, residual};
    use crate::system::KzSystem;

    fn pts() -> Vec<Scalar> {
        [0, 1, 2].iter().map(|&v| Scalar::from_int(v)).collect()
    }

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn coefficients_at_reference_points() {
        let co = S4Coefficients::new(&pts()).unwrap();
        assert_eq!(co.alpha, q(-1, 2));
        assert_eq!(co.beta, q(1, 1));
        assert_eq!(co.betas.to_vec(), ints(&[-1, 2, -1]));
        assert_eq!(co.alphas.to_vec(), vec![q(1, 1), q(-1, 2), q(1, 1)]);
        assert_eq!(co.y3_abc.to_vec(), vec![q(-1, 1), q(1, 2), q(-1, 2)]);
        // a, b, c, d, e
        assert_eq!(co.y4_abcde.to_vec(), ints(&[-1, 2, -2, 1, -1]));
        // the two c's differ
        assert_ne!(co.y3_abc[2], co.y4_abcde[2]);
    }

    #[test]
    fn y1_polynomial_part() {
        let f = y1(&pts()).unwrap();
        assert_eq!(f.q_minus1(), Vector(vec![q(-3, 2), q(1, 2), q(1, 2), q(1, 2)]));
        assert_eq!(f.q0(), Vector(vec![q(3, 2), q(-3, 2), q(-1, 2), q(1, 2)]));
        assert_eq!(f.residue(0), Vector::from_ints(&[1, 1, -1, -1]));
    }

    #[test]
    fn y2_and_y3_values() {
        assert_eq!(
            y2(&pts()).unwrap().eval(&Scalar::from_int(3)).unwrap(),
            Vector::from_ints(&[1, 1, 1, 1]).scale(&q(-1, 3))
        );
        let m1 = y3(&pts()).unwrap().residue(0);
        assert_eq!(m1, Vector::from_ints(&[0, 0, -1, 1]));
    }

    #[test]
    fn all_four_pass_the_conditions() {
        let sys = KzSystem::new(4, -1, pts()).unwrap();
        for f in [y1, y2, y3, y4] {
            let y = f(&pts()).unwrap();
            assert!(check_conditions(&sys, &y).unwrap().passed());
        }
        assert!(residual(&sys, &y4(&pts()).unwrap(), &Scalar::from_int(5)).unwrap().is_zero());
    }

    #[test]
    fn beta_identities_vanish() {
        let co = S4Coefficients::new(&pts()).unwrap();
        assert!(co.beta_identities(&pts()).unwrap().iter().all(Scalar::is_zero));
    }

    #[test]
    fn coincident_points_rejected() {
        let bad = ints(&[0, 1, 1]);
        for f in [y1, y2, y3, y4] {
            assert!(f(&bad).is_err());
        }
        assert!(fundamental_matrix(&bad, None).is_err());
        assert!(y1(&ints(&[0, 1])).is_err());
    }

    #[test]
    fn certificate_off_the_midpoint() {
        let p = ints(&[0, 1, 3]);
        let cert = independence_certificate(&p).unwrap();
        // probes start just above max |z| = 3
        assert_eq!(cert.probe, Scalar::from_int(4));
        assert!(!cert.determinant.is_zero());
        let fm = fundamental_matrix(&p, None).unwrap();
        assert!(fm.is_fundamental());
        let det5 = determinant(&fm.eval_matrix(&Scalar::from_int(5)).unwrap()).unwrap();
        assert!(!det5.is_zero());
    }

    #[test]
    fn midpoint_configuration_is_degenerate() {
        // z₂ is the midpoint of z₁, z₃: Y₃ + Y₄ vanishes identically
        assert!(is_midpoint_configuration(&pts()).unwrap());
        assert!(!is_midpoint_configuration(&ints(&[0, 1, 3])).unwrap());
        let sum = y3(&pts()).unwrap().add(&y4(&pts()).unwrap()).unwrap();
        assert!(sum.principal_parts().iter().flatten().all(Vector::is_zero));
        assert_eq!(independence_certificate(&pts()), Err(KzError::Certification(MAX_PROBES)));
        let fm = fundamental_matrix(&pts(), None).unwrap();
        assert!(!fm.is_fundamental());
        let det5 = determinant(&fm.eval_matrix(&Scalar::from_int(5)).unwrap()).unwrap();
        assert!(det5.is_zero());
        // same shape, shifted and rotated
        let moved: Vec<Scalar> = ["(1,1)", "(1,2)", "(1,3)"].iter().map(|t| t.parse().unwrap()).collect();
        assert!(is_midpoint_configuration(&moved).unwrap());
        assert!(independence_certificate(&moved).is_err());
    }

    #[test]
    fn repeated_column_never_certifies() {
        let p = pts();
        let cols = [y1(&p).unwrap(), y1(&p).unwrap(), y3(&p).unwrap(), y4(&p).unwrap()];
        assert_eq!(certify_independence(&p, &cols), Err(KzError::Certification(MAX_PROBES)));
    }

    #[test]
    fn probes_skip_poles() {
        let p = ints(&[0, 1, 3]);
        let cols = [y1(&p).unwrap(), y2(&p).unwrap(), y3(&p).unwrap(), y4(&p).unwrap()];
        let cert = certify_with_probes(&p, &cols, ints(&[1, 5])).unwrap();
        assert_eq!(cert.probe, Scalar::from_int(5));
        assert_eq!(cert.attempts, 2);
    }

    #[test]
    fn unit_constants_select_columns() {
        let p = pts();
        for i in 0..4 {
            let mut cs: [Scalar; 4] = std::array::from_fn(|_| Scalar::zero());
            cs[i] = Scalar::one();
            let fm = fundamental_matrix(&p, Some(cs)).unwrap();
            let comb = fm.combined().unwrap();
            let z = q(7, 3);
            assert_eq!(comb.eval(&z).unwrap(), fm.columns[i].eval(&z).unwrap());
        }
    }
}
