//! Rational vector functions in partial-fraction form, the residue
//! conditions for `ρ = −1`, exact residual evaluation, and a solver that finds
//! every rational solution of a given pole order and polynomial degree.
//!
//! A function here is
//!
//! ```text
//! W(z) = Σₖ Σ_{j=1..p} Lₖⱼ / (z − zₖ)^j  +  Σ_{d=0..D} Q_d z^d
//! ```
//!
//! The common shape used throughout has simple poles (`p = 1`) and a linear
//! polynomial part `Q(z) = Q₋₁ z + Q₀`; `Q₋₁` is stored as `poly[1]`.

use crate::error::{KzError, Result};
use crate::exact::{nullspace, solve_affine, Matrix, Scalar, Vector};
use crate::system::KzSystem;

#[derive(Clone, Debug, PartialEq)]
pub struct RationalVectorFunction {
    n: usize,
    points: Vec<Scalar>,
    /// `principal[k][j − 1]` multiplies `(z − zₖ)^{−j}`.
    principal: Vec<Vec<Vector>>,
    /// `poly[d]` multiplies `z^d`.
    poly: Vec<Vector>,
}

impl RationalVectorFunction {
    /// General constructor; every coefficient must have length `n`.
    pub fn new(
        n: usize,
        points: Vec<Scalar>,
        principal: Vec<Vec<Vector>>,
        poly: Vec<Vector>,
    ) -> Result<Self> {
        if principal.len() != points.len() {
            return Err(KzError::Shape(format!(
                "{} principal parts for {} poles",
                principal.len(),
                points.len()
            )));
        }
        let all = principal.iter().flatten().chain(poly.iter());
        if let Some(bad) = all.into_iter().find(|v| v.len() != n) {
            return Err(KzError::Shape(format!(
                "coefficient of length {} in a dimension-{n} function",
                bad.len()
            )));
        }
        Ok(RationalVectorFunction {
            n,
            points,
            principal,
            poly,
        })
    }

    /// `Σ Lₖ/(z − zₖ) + Q₋₁ z + Q₀`.
    pub fn simple(points: Vec<Scalar>, residues: Vec<Vector>, q_minus1: Vector, q0: Vector) -> Result<Self> {
        let n = q0.len();
        RationalVectorFunction::new(
            n,
            points,
            residues.into_iter().map(|l| vec![l]).collect(),
            vec![q0, q_minus1],
        )
    }

    /// The identically zero function in the simple shape.
    pub fn zero(n: usize, points: Vec<Scalar>) -> Self {
        let s = points.len();
        RationalVectorFunction::simple(points, vec![Vector::zeros(n); s], Vector::zeros(n), Vector::zeros(n))
            .expect("consistent shapes")
    }

    /// A constant function `c`.
    pub fn constant(points: Vec<Scalar>, c: Vector) -> Self {
        let n = c.len();
        let s = points.len();
        RationalVectorFunction::new(n, points, vec![Vec::new(); s], vec![c]).expect("consistent shapes")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[Scalar] {
        &self.points
    }

    pub fn principal_parts(&self) -> &[Vec<Vector>] {
        &self.principal
    }

    pub fn poly_coeffs(&self) -> &[Vector] {
        &self.poly
    }

    /// Highest pole order carried at any point (0 if none).
    pub fn pole_order(&self) -> usize {
        self.principal.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Number of polynomial coefficients minus one (0 for an empty part).
    pub fn poly_degree(&self) -> usize {
        self.poly.len().saturating_sub(1)
    }

    /// Coefficient of `(z − zₖ)^{−1}`; zero-based `k`.
    pub fn residue(&self, k: usize) -> Vector {
        self.principal[k].first().cloned().unwrap_or_else(|| Vector::zeros(self.n))
    }

    /// Coefficient of `(z − zₖ)^{−order}`.
    pub fn principal_coeff(&self, k: usize, order: usize) -> Vector {
        self.principal[k]
            .get(order - 1)
            .cloned()
            .unwrap_or_else(|| Vector::zeros(self.n))
    }

    pub fn poly_coeff(&self, d: usize) -> Vector {
        self.poly.get(d).cloned().unwrap_or_else(|| Vector::zeros(self.n))
    }

    /// `Q₋₁`, the coefficient of `z`.
    pub fn q_minus1(&self) -> Vector {
        self.poly_coeff(1)
    }

    /// `Q₀`, the constant term.
    pub fn q0(&self) -> Vector {
        self.poly_coeff(0)
    }

    /// Polynomial part `Q(z)`.
    pub fn eval_poly(&self, z: &Scalar) -> Vector {
        let mut acc = Vector::zeros(self.n);
        for c in self.poly.iter().rev() {
            acc = &acc.scale(z) + c;
        }
        acc
    }

    pub fn eval(&self, z: &Scalar) -> Result<Vector> {
        let mut acc = self.eval_poly(z);
        for (k, (zk, parts)) in self.points.iter().zip(&self.principal).enumerate() {
            if parts.is_empty() {
                continue;
            }
            let inv = (z - zk).inv().ok_or(KzError::AtPole(k + 1))?;
            let mut pw = inv.clone();
            for c in parts {
                acc.axpy(&pw, c);
                pw = &pw * &inv;
            }
        }
        Ok(acc)
    }

    /// Closed-form derivative: `c/(z−zₖ)^j ↦ −j c/(z−zₖ)^{j+1}`.
    pub fn derivative(&self) -> RationalVectorFunction {
        let principal = self
            .principal
            .iter()
            .map(|parts| {
                if parts.is_empty() {
                    return Vec::new();
                }
                let mut d = vec![Vector::zeros(self.n)];
                for (j, c) in parts.iter().enumerate() {
                    d.push(c.scale(&Scalar::from_int(-(j as i64 + 1))));
                }
                d
            })
            .collect();
        let poly = self
            .poly
            .iter()
            .enumerate()
            .skip(1)
            .map(|(d, c)| c.scale(&Scalar::from_int(d as i64)))
            .collect();
        RationalVectorFunction {
            n: self.n,
            points: self.points.clone(),
            principal,
            poly,
        }
    }

    pub fn scale(&self, c: &Scalar) -> RationalVectorFunction {
        self.map(|v| v.scale(c))
    }

    fn map(&self, f: impl Fn(&Vector) -> Vector) -> RationalVectorFunction {
        RationalVectorFunction {
            n: self.n,
            points: self.points.clone(),
            principal: self
                .principal
                .iter()
                .map(|p| p.iter().map(&f).collect())
                .collect(),
            poly: self.poly.iter().map(&f).collect(),
        }
    }

    /// Sum of two functions on the same poles.
    pub fn add(&self, other: &RationalVectorFunction) -> Result<RationalVectorFunction> {
        if self.points != other.points || self.n != other.n {
            return Err(KzError::Shape("adding functions on different poles".into()));
        }
        let zip_add = |a: &[Vector], b: &[Vector]| -> Vec<Vector> {
            (0..a.len().max(b.len()))
                .map(|i| {
                    let x = a.get(i).cloned().unwrap_or_else(|| Vector::zeros(self.n));
                    let y = b.get(i).cloned().unwrap_or_else(|| Vector::zeros(self.n));
                    &x + &y
                })
                .collect()
        };
        Ok(RationalVectorFunction {
            n: self.n,
            points: self.points.clone(),
            principal: self
                .principal
                .iter()
                .zip(&other.principal)
                .map(|(a, b)| zip_add(a, b))
                .collect(),
            poly: zip_add(&self.poly, &other.poly),
        })
    }

    /// Exact Laurent coefficients about the zero-based pole `k`, orders
    /// `−pole_order(k) ..= max_order`. Returns `(lowest order, coefficients)`.
    pub fn laurent_at(&self, k: usize, max_order: i64) -> Result<(i64, Vec<Vector>)> {
        if k >= self.points.len() {
            return Err(KzError::Index(format!("pole index {} out of range", k + 1)));
        }
        let own = &self.principal[k];
        let lowest = -(own.len() as i64);
        let mut coeffs: Vec<Vector> = own.iter().rev().cloned().collect();
        if max_order < 0 {
            coeffs.truncate((max_order - lowest + 1).max(0) as usize);
            return Ok((lowest, coeffs));
        }
        let zk = &self.points[k];
        let mut regular = vec![Vector::zeros(self.n); max_order as usize + 1];
        // (t + δ)^{−j} = Σ_i (−1)^i C(j+i−1, i) δ^{−j−i} t^i,   δ = zₖ − z_l
        for (l, (zl, parts)) in self.points.iter().zip(&self.principal).enumerate() {
            if l == k || parts.is_empty() {
                continue;
            }
            let inv = (zk - zl).inv().ok_or_else(|| KzError::Degenerate("coincident poles".into()))?;
            for (jm1, c) in parts.iter().enumerate() {
                let j = jm1 as i64 + 1;
                let mut pw = inv.powi(j as i32);
                let mut binom = Scalar::one();
                for (i, slot) in regular.iter_mut().enumerate() {
                    let i = i as i64;
                    if i > 0 {
                        // C(j+i−1, i) from C(j+i−2, i−1)
                        binom = &(&binom * &Scalar::from_int(j + i - 1)) / &Scalar::from_int(i);
                        pw = &pw * &inv;
                    }
                    let sign = if i % 2 == 0 { Scalar::one() } else { Scalar::from_int(-1) };
                    slot.axpy(&(&(&sign * &binom) * &pw), c);
                }
            }
        }
        // Q(zₖ + t) = Σ_i t^i Σ_{d≥i} C(d, i) zₖ^{d−i} Q_d
        for (d, q) in self.poly.iter().enumerate() {
            for (i, slot) in regular.iter_mut().enumerate().take(d + 1) {
                let c = &Scalar::from_int(binomial(d as i64, i as i64)) * &zk.powi((d - i) as i32);
                slot.axpy(&c, q);
            }
        }
        coeffs.extend(regular);
        Ok((lowest, coeffs))
    }
}

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

/// `W'(z) − ρ A(z) W(z)`, exact.
pub fn residual(sys: &KzSystem, f: &RationalVectorFunction, z: &Scalar) -> Result<Vector> {
    let coeff = sys.coefficient(z)?;
    let w = f.eval(z)?;
    let dw = f.derivative().eval(z)?;
    Ok(&dw - &coeff.mul_vec(&w))
}

fn check_points(sys: &KzSystem, f: &RationalVectorFunction) -> Result<()> {
    if sys.points() != f.points() {
        return Err(KzError::Shape("function poles differ from the system's".into()));
    }
    if sys.dim() != f.dim() {
        return Err(KzError::Shape(format!(
            "function has dimension {} but the system has {}",
            f.dim(),
            sys.dim()
        )));
    }
    Ok(())
}

/// Outcome of the three residue conditions for `ρ = −1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionReport {
    /// `(I − Pₖ) Lₖ` for each pole.
    pub residue_eigen: Vec<Vector>,
    /// `Σ_{j≠k} (Pₖ L_j + P_j Lₖ)/(zₖ − z_j) + Pₖ Q(zₖ)` for each pole.
    pub residue_balance: Vec<Vector>,
    /// `(I + T) Q₋₁`.
    pub infinity: Vector,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.residue_eigen.iter().all(Vector::is_zero)
            && self.residue_balance.iter().all(Vector::is_zero)
            && self.infinity.is_zero()
    }

    /// Names of the violated conditions, e.g. `"eigen@k=1"`.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (k, v) in self.residue_eigen.iter().enumerate() {
            if !v.is_zero() {
                out.push(format!("eigen@k={}", k + 1));
            }
        }
        for (k, v) in self.residue_balance.iter().enumerate() {
            if !v.is_zero() {
                out.push(format!("balance@k={}", k + 1));
            }
        }
        if !self.infinity.is_zero() {
            out.push("infinity".into());
        }
        out
    }
}

/// Evaluates the residue conditions of a simple-pole, degree-≤1 function.
/// Only meaningful for `ρ = −1`.
pub fn check_conditions(sys: &KzSystem, f: &RationalVectorFunction) -> Result<ConditionReport> {
    if sys.rho() != -1 {
        return Err(KzError::RhoMismatch(sys.rho()));
    }
    check_points(sys, f)?;
    if f.pole_order() > 1 || f.poly_degree() > 1 {
        return Err(KzError::Shape(
            "residue conditions need simple poles and a polynomial part of degree <= 1".into(),
        ));
    }
    let n = sys.dim();
    let s = sys.pole_count();
    let id = Matrix::identity(n);
    let residues: Vec<Vector> = (0..s).map(|k| f.residue(k)).collect();
    let residue_eigen = (0..s)
        .map(|k| (&id - sys.generator(k).matrix()).mul_vec(&residues[k]))
        .collect();
    let residue_balance = (0..s)
        .map(|k| {
            let pk = sys.generator(k);
            let zk = &sys.points()[k];
            let mut acc = pk.mul_vec(&f.eval_poly(zk));
            for j in (0..s).filter(|&j| j != k) {
                let w = (zk - &sys.points()[j]).inv().expect("distinct poles");
                let term = &pk.mul_vec(&residues[j]) + &sys.generator(j).mul_vec(&residues[k]);
                acc.axpy(&w, &term);
            }
            acc
        })
        .collect();
    let infinity = (&id + &sys.residue_sum()).mul_vec(&f.q_minus1());
    Ok(ConditionReport {
        residue_eigen,
        residue_balance,
        infinity,
    })
}

/// Coefficients of the residual `R = W' − ρ A W` that must vanish for `W` to
/// be a solution: the principal part of `R` at every pole (orders
/// `−(p+1) ..= −1`) followed by the polynomial part of `R` at infinity
/// (degrees `0 ..= D−1`). `R` is rational with no other poles, so it is
/// identically zero exactly when all of these are.
pub fn matching_defects(sys: &KzSystem, f: &RationalVectorFunction) -> Result<Vec<Vector>> {
    check_points(sys, f)?;
    let n = sys.dim();
    let p = f.pole_order() as i64;
    let rho = sys.rho_scalar();
    let mut out = Vec::new();
    for k in 0..sys.pole_count() {
        // W at zₖ from order −p; only orders up to 0 enter the principal part.
        let (lowest, w) = f.laurent_at(k, 0)?;
        let w_at = |o: i64| -> Vector {
            let idx = o - lowest;
            if idx < 0 || idx as usize >= w.len() {
                Vector::zeros(n)
            } else {
                w[idx as usize].clone()
            }
        };
        let a = sys.local_coefficients(k, (p - 1).max(0))?;
        for o in -(p + 1)..=-1 {
            // (W')_o = (o+1) W_{o+1}
            let mut r = w_at(o + 1).scale(&Scalar::from_int(o + 1));
            for i in -1..=(o + p).min(a.max_order()) {
                let term = a.get(i).mul_vec(&w_at(o - i));
                r = &r - &term;
            }
            out.push(r);
        }
    }
    // At infinity A = Σ_{m≥0} (Σₖ zₖ^m Pₖ) z^{−m−1}; only Q reaches degree ≥ 0.
    let degree = f.poly_degree();
    let moments: Vec<Matrix> = (0..=degree)
        .map(|m| {
            let mut acc = Matrix::zeros(n, n);
            for (zk, pk) in sys.points().iter().zip(sys.generators()) {
                acc += &pk.scale(&zk.powi(m as i32));
            }
            acc
        })
        .collect();
    for e in 0..degree {
        let mut r = f.poly_coeff(e + 1).scale(&Scalar::from_int(e as i64 + 1));
        for (m, moment) in moments.iter().enumerate() {
            let d = e + 1 + m;
            if d > degree {
                break;
            }
            let term = moment.mul_vec(&f.poly_coeff(d)).scale(&rho);
            r = &r - &term;
        }
        out.push(r);
    }
    Ok(out)
}

/// The shape searched by [`solve_ansatz`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnsatzShape {
    pub pole_order: usize,
    pub poly_degree: usize,
}

impl Default for AnsatzShape {
    fn default() -> Self {
        AnsatzShape {
            pole_order: 1,
            poly_degree: 1,
        }
    }
}

impl AnsatzShape {
    pub fn unknowns(&self, n: usize, s: usize) -> usize {
        n * (s * self.pole_order + self.poly_degree + 1)
    }

    /// Unpacks an unknown vector: pole blocks first (pole-major, then order),
    /// then polynomial coefficients by ascending degree.
    pub fn function_from(&self, n: usize, points: &[Scalar], x: &Vector) -> RationalVectorFunction {
        let s = points.len();
        assert_eq!(x.len(), self.unknowns(n, s));
        let mut chunks = x.0.chunks(n).map(|c| Vector(c.to_vec()));
        let principal = (0..s)
            .map(|_| (0..self.pole_order).map(|_| chunks.next().unwrap()).collect())
            .collect();
        let poly = chunks.collect();
        RationalVectorFunction {
            n,
            points: points.to_vec(),
            principal,
            poly,
        }
    }

    /// Inverse of [`AnsatzShape::function_from`]; fails if `f` does not fit.
    pub fn unknowns_of(&self, f: &RationalVectorFunction) -> Result<Vector> {
        let too_high = f.poly.iter().skip(self.poly_degree + 1).any(|c| !c.is_zero())
            || f.principal.iter().any(|p| p.iter().skip(self.pole_order).any(|c| !c.is_zero()));
        if too_high {
            return Err(KzError::Shape("function exceeds the ansatz shape".into()));
        }
        let mut out = Vec::with_capacity(self.unknowns(f.n, f.points.len()));
        for k in 0..f.points.len() {
            for j in 1..=self.pole_order {
                out.extend(f.principal_coeff(k, j).0);
            }
        }
        for d in 0..=self.poly_degree {
            out.extend(f.poly_coeff(d).0);
        }
        Ok(Vector(out))
    }

    /// Number of distinct sample points that certify `R ≡ 0`: the numerator
    /// of `R · Πₖ (z − zₖ)^{p+1}` has degree at most `D − 1 + s(p+1)`.
    pub fn certifying_samples(&self, s: usize) -> usize {
        self.poly_degree + s * (self.pole_order + 1)
    }
}

/// Deterministic non-pole sample points `1, 2, 3, …` (poles skipped).
pub fn sample_points(sys: &KzSystem, count: usize) -> Vec<Scalar> {
    (1i64..)
        .map(Scalar::from_int)
        .filter(|z| sys.pole_at(z).is_none())
        .take(count)
        .collect()
}

/// All rational solutions of the given shape, as a nullspace basis of the
/// exact matching conditions. Each returned function is re-verified by exact
/// residual evaluation at enough sample points to certify the identity.
pub fn solve_ansatz(sys: &KzSystem, shape: AnsatzShape) -> Result<Vec<RationalVectorFunction>> {
    if shape.pole_order == 0 {
        return Err(KzError::Shape("pole order must be at least 1".into()));
    }
    let n = sys.dim();
    let s = sys.pole_count();
    let unknowns = shape.unknowns(n, s);
    let mut columns = Vec::with_capacity(unknowns);
    for u in 0..unknowns {
        let f = shape.function_from(n, sys.points(), &Vector::unit(unknowns, u));
        let defects = matching_defects(sys, &f)?;
        columns.push(Vector(defects.into_iter().flat_map(|v| v.0).collect()));
    }
    let system = Matrix::from_columns(&columns);
    let samples = sample_points(sys, shape.certifying_samples(s));
    let mut basis = Vec::new();
    for x in nullspace(&system) {
        let f = shape.function_from(n, sys.points(), &x);
        for z in &samples {
            if !residual(sys, &f, z)?.is_zero() {
                return Err(KzError::Internal(format!(
                    "nullspace vector fails the residual at z = {z}"
                )));
            }
        }
        basis.push(f);
    }
    Ok(basis)
}

/// Whether `f` lies in the linear span of `basis` (exact membership solve).
pub fn span_contains(basis: &[RationalVectorFunction], f: &RationalVectorFunction) -> Result<bool> {
    let shape = AnsatzShape {
        pole_order: basis.iter().map(|b| b.pole_order()).chain([f.pole_order(), 1]).max().unwrap_or(1),
        poly_degree: basis.iter().map(|b| b.poly_degree()).chain([f.poly_degree()]).max().unwrap_or(0),
    };
    let cols = basis
        .iter()
        .map(|b| shape.unknowns_of(b))
        .collect::<Result<Vec<_>>>()?;
    let target = shape.unknowns_of(f)?;
    if cols.is_empty() {
        return Ok(target.is_zero());
    }
    Ok(solve_affine(&Matrix::from_columns(&cols), &target)?.is_consistent())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts() -> Vec<Scalar> {
        [0, 1, 2].iter().map(|&v| Scalar::from_int(v)).collect()
    }

    fn s4() -> KzSystem {
        KzSystem::new(4, -1, pts()).unwrap()
    }

    fn ones() -> Vector {
        Vector::from_ints(&[1, 1, 1, 1])
    }

    /// Y₂ at z = (0,1,2): βₖ = (−1, 2, −1).
    fn y2() -> RationalVectorFunction {
        let res = [-1, 2, -1].iter().map(|&b| ones().scale(&Scalar::from_int(b))).collect();
        RationalVectorFunction::simple(pts(), res, Vector::zeros(4), Vector::zeros(4)).unwrap()
    }

    #[test]
    fn eval_y2_at_three() {
        let v = y2().eval(&Scalar::from_int(3)).unwrap();
        assert_eq!(v, ones().scale(&Scalar::from_ratio(-1, 3)));
        assert_eq!(y2().eval(&Scalar::one()), Err(KzError::AtPole(2)));
    }

    #[test]
    fn derivative_of_polynomial_parts() {
        let c = Vector::from_ints(&[1, 2, 3, 4]);
        let f = RationalVectorFunction::constant(pts(), c.clone());
        assert!(f.derivative().eval(&Scalar::from_int(7)).unwrap().is_zero());
        let lin = RationalVectorFunction::simple(pts(), vec![Vector::zeros(4); 3], c.clone(), Vector::zeros(4)).unwrap();
        assert_eq!(lin.derivative().eval(&Scalar::from_int(7)).unwrap(), c);
    }

    #[test]
    fn derivative_matches_difference_quotient_limit() {
        // d/dz [L/(z−1)] at z=3 is −L/4
        let l = Vector::from_ints(&[2, 0, 0, 0]);
        let f = RationalVectorFunction::simple(
            pts(),
            vec![Vector::zeros(4), l.clone(), Vector::zeros(4)],
            Vector::zeros(4),
            Vector::zeros(4),
        )
        .unwrap();
        assert_eq!(
            f.derivative().eval(&Scalar::from_int(3)).unwrap(),
            l.scale(&Scalar::from_ratio(-1, 4))
        );
    }

    #[test]
    fn y2_conditions_and_residual() {
        let sys = s4();
        assert!(check_conditions(&sys, &y2()).unwrap().passed());
        assert!(residual(&sys, &y2(), &Scalar::from_int(3)).unwrap().is_zero());
        assert!(matching_defects(&sys, &y2()).unwrap().iter().all(Vector::is_zero));
    }

    #[test]
    fn zero_function_passes() {
        let sys = s4();
        assert!(check_conditions(&sys, &RationalVectorFunction::zero(4, pts())).unwrap().passed());
    }

    #[test]
    fn bad_residue_fails_eigen_condition() {
        let sys = s4();
        let f = RationalVectorFunction::simple(
            pts(),
            vec![Vector::from_ints(&[1, 0, 0, 0]), Vector::zeros(4), Vector::zeros(4)],
            Vector::zeros(4),
            Vector::zeros(4),
        )
        .unwrap();
        let rep = check_conditions(&sys, &f).unwrap();
        assert!(!rep.passed());
        assert_eq!(rep.residue_eigen[0], Vector::from_ints(&[1, -1, 0, 0]));
        assert!(rep.failures().contains(&"eigen@k=1".to_string()));
    }

    #[test]
    fn constants_are_not_solutions() {
        let sys = s4();
        let c = Vector::from_ints(&[1, 2, 3, 4]);
        let f = RationalVectorFunction::constant(pts(), c.clone());
        let z = Scalar::from_int(5);
        let r = residual(&sys, &f, &z).unwrap();
        // W' = 0, so R = A(z) c when ρ = −1
        assert_eq!(r, sys.eval_a(&z).unwrap().mul_vec(&c));
        assert!(!r.is_zero());
    }

    #[test]
    fn conditions_need_rho_minus_one() {
        assert_eq!(
            check_conditions(&s4().with_rho(1), &y2()),
            Err(KzError::RhoMismatch(1))
        );
    }

    #[test]
    fn laurent_of_y2_at_first_pole() {
        let (lowest, c) = y2().laurent_at(0, 2).unwrap();
        assert_eq!(lowest, -1);
        assert_eq!(c[0], ones().scale(&Scalar::from_int(-1)));
        // b₀ = 2/(0−1) + (−1)/(0−2) = −3/2
        assert_eq!(c[1], ones().scale(&Scalar::from_ratio(-3, 2)));
    }

    #[test]
    fn laurent_of_higher_order_poles_matches_evaluation() {
        // f = c/(z−1)^2 + d z^2; expand at z1 = 0 and evaluate the partial sum
        let c = Vector::from_ints(&[1, 0, 2, 0]);
        let d = Vector::from_ints(&[0, 3, 0, 1]);
        let f = RationalVectorFunction::new(
            4,
            pts(),
            vec![vec![], vec![Vector::zeros(4), c], vec![]],
            vec![Vector::zeros(4), Vector::zeros(4), d],
        )
        .unwrap();
        let (lowest, coeffs) = f.laurent_at(0, 30).unwrap();
        assert_eq!(lowest, 0);
        let t = Scalar::from_ratio(1, 10);
        let mut sum = Vector::zeros(4);
        let mut tp = Scalar::one();
        for b in &coeffs {
            sum.axpy(&tp, b);
            tp = &tp * &t;
        }
        let exact = f.eval(&t).unwrap();
        for (x, y) in sum.iter().zip(exact.iter()) {
            assert!((x - y).approx_abs() < 1e-25);
        }
    }

    #[test]
    fn solver_dimension_for_s4() {
        let basis = solve_ansatz(&s4(), AnsatzShape::default()).unwrap();
        assert_eq!(basis.len(), 4);
        assert!(span_contains(&basis, &y2()).unwrap());
        let junk = RationalVectorFunction::constant(pts(), ones());
        assert!(!span_contains(&basis, &junk).unwrap());
    }

    #[test]
    fn solver_finds_s3_solutions() {
        let sys = KzSystem::new(3, -1, vec![Scalar::zero(), Scalar::one()]).unwrap();
        let basis = solve_ansatz(&sys, AnsatzShape::default()).unwrap();
        assert!(!basis.is_empty());
        for f in &basis {
            assert!(check_conditions(&sys, f).unwrap().passed());
        }
    }

    #[test]
    fn solver_rejects_zero_pole_order() {
        let shape = AnsatzShape {
            pole_order: 0,
            poly_degree: 1,
        };
        assert!(solve_ansatz(&s4(), shape).is_err());
    }

    #[test]
    fn unknown_round_trip() {
        let shape = AnsatzShape::default();
        let x = Vector((0..20).map(|i| Scalar::from_int(i * 7 % 5 - 2)).collect());
        let f = shape.function_from(4, &pts(), &x);
        assert_eq!(shape.unknowns_of(&f).unwrap(), x);
    }
}
