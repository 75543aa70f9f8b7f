//! Exact Gaussian-rational scalars and small dense linear algebra over them.
//!
//! Everything the symbolic side of the crate computes lives in `Scalar`: a
//! complex number whose real and imaginary parts are arbitrary-precision
//! rationals. Matrices are dense and row-major; the sizes involved here are
//! tiny (a few dozen unknowns at most), so clarity wins over cleverness.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Index, IndexMut, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{KzError, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rat = BigRational;

/// Exact complex number `re + im·i` with rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    pub re: Rat,
    pub im: Rat,
}

impl Scalar {
    pub fn new(re: Rat, im: Rat) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar::new(Rat::zero(), Rat::zero())
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn i() -> Self {
        Scalar::new(Rat::zero(), Rat::one())
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::new(Rat::from_integer(BigInt::from(v)), Rat::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::new(Rat::new(BigInt::from(num), BigInt::from(den)), Rat::zero())
    }

    pub fn from_rat(re: Rat) -> Self {
        Scalar::new(re, Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Returns the value as an integer if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        (self.im.is_zero() && self.re.is_integer()).then(|| self.re.to_integer())
    }

    pub fn conj(&self) -> Self {
        Scalar::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|²`, exact.
    pub fn norm_sqr(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let d = self.norm_sqr();
        Some(Scalar::new(&self.re / &d, -(&self.im / &d)))
    }

    /// Integer power; negative exponents invert. Panics on `0^-k`.
    pub fn powi(&self, exp: i32) -> Self {
        let base = if exp < 0 {
            self.inv().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut acc = Scalar::one();
        for _ in 0..exp.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Floating modulus, for coarse magnitude estimates only.
    pub fn approx_abs(&self) -> f64 {
        self.to_complex64().norm()
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl From<Rat> for Scalar {
    fn from(v: Rat) -> Self {
        Scalar::from_rat(v)
    }
}

fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            f.write_str(&fmt_rat(&self.re))
        } else {
            write!(f, "({},{})", fmt_rat(&self.re), fmt_rat(&self.im))
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_rat(text: &str) -> Result<Rat> {
    let bad = || KzError::Parse(format!("malformed rational literal `{text}`"));
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let digits_ok = |s: &str, signed: bool| {
        let body = if signed {
            s.strip_prefix('-').unwrap_or(s)
        } else {
            s
        };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits_ok(num, true) {
        return Err(bad());
    }
    let numer: BigInt = num.parse().map_err(|_| bad())?;
    let denom: BigInt = match den {
        Some(d) => {
            if !digits_ok(d, false) {
                return Err(bad());
            }
            d.parse().map_err(|_| bad())?
        }
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(KzError::Parse(format!("zero denominator in `{text}`")));
    }
    Ok(Rat::new(numer, denom))
}

/// Parses `[-]p[/q]` or `(re,im)`.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let t = text.trim();
    if let Some(inner) = t.strip_prefix('(') {
        let inner = inner
            .strip_suffix(')')
            .ok_or_else(|| KzError::Parse(format!("unclosed complex literal `{text}`")))?;
        let (re, im) = inner
            .split_once(',')
            .ok_or_else(|| KzError::Parse(format!("complex literal needs `re,im`: `{text}`")))?;
        Ok(Scalar::new(parse_rat(re)?, parse_rat(im)?))
    } else {
        Ok(Scalar::from_rat(parse_rat(t)?))
    }
}

impl FromStr for Scalar {
    type Err = KzError;
    fn from_str(s: &str) -> Result<Self> {
        parse_scalar(s)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_scalar(&s).map_err(serde::de::Error::custom)
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.im.is_zero() && o.im.is_zero() {
            return Scalar::from_rat(&self.re * &o.re);
        }
        Scalar::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        if o.im.is_zero() {
            assert!(!o.re.is_zero(), "division by zero");
            return Scalar::new(&self.re / &o.re, &self.im / &o.re);
        }
        self * &o.inv().expect("division by zero")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re.clone(), -self.im.clone())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar { (&self).$m(&o) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar { (&self).$m(o) }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar { self.$m(&o) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |mut a, b| {
            a += &b;
            a
        })
    }
}

/// Dense column vector of exact scalars.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Vector(pub Vec<Scalar>);

impl Vector {
    pub fn zeros(n: usize) -> Self {
        Vector(vec![Scalar::zero(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Vector::zeros(n);
        v.0[i] = Scalar::one();
        v
    }

    pub fn from_ints(vals: &[i64]) -> Self {
        Vector(vals.iter().map(|&v| Scalar::from_int(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, c: &Scalar) -> Vector {
        Vector(self.0.iter().map(|x| x * c).collect())
    }

    pub fn dot(&self, other: &Vector) -> Scalar {
        assert_eq!(self.len(), other.len());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Scalar> {
        self.0.iter()
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.0.iter().map(Scalar::to_complex64).collect()
    }

    /// Adds `c·other` in place.
    pub fn axpy(&mut self, c: &Scalar, other: &Vector) {
        assert_eq!(self.len(), other.len());
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += &(c * b);
        }
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl Index<usize> for Vector {
    type Output = Scalar;
    fn index(&self, i: usize) -> &Scalar {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut Scalar {
        &mut self.0[i]
    }
}

impl Add<&Vector> for &Vector {
    type Output = Vector;
    fn add(self, o: &Vector) -> Vector {
        assert_eq!(self.len(), o.len());
        Vector(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&Vector> for &Vector {
    type Output = Vector;
    fn sub(self, o: &Vector) -> Vector {
        assert_eq!(self.len(), o.len());
        Vector(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }
}

impl serde::Serialize for Vector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for Vector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Vector(Vec::<Scalar>::deserialize(d)?))
    }
}

/// Dense row-major matrix of exact scalars.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Scalar>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().cloned().collect(),
        }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect())
            .collect();
        Matrix::from_rows(&rows)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vector]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vector::len);
        let mut m = Matrix::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for i in 0..r {
                m[(i, j)] = col[i].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul_vec(&self, v: &Vector) -> Vector {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        Vector(
            (0..self.rows)
                .map(|i| self.row(i).iter().zip(&v.0).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .sum()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn to_complex(&self) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_complex64())
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[Scalar]> = (0..self.rows).map(|i| self.row(i)).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl Add<&Matrix> for &Matrix {
    type Output = Matrix;
    fn add(self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&Matrix> for &Matrix {
    type Output = Matrix;
    fn sub(self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<&Matrix> for &Matrix {
    type Output = Matrix;
    fn mul(self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let p = a * &o[(k, j)];
                    out[(i, j)] += &p;
                }
            }
        }
        out
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(&Scalar::from_int(-1))
    }
}

impl AddAssign<&Matrix> for Matrix {
    fn add_assign(&mut self, o: &Matrix) {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        for (a, b) in self.data.iter_mut().zip(&o.data) {
            *a += b;
        }
    }
}

/// Row echelon form produced by fraction-free (Bareiss) elimination.
struct Echelon {
    form: Matrix,
    /// Pivot column of each nonzero row, in row order.
    pivots: Vec<usize>,
    /// Number of row swaps performed.
    swaps: usize,
}

/// Bareiss elimination: every intermediate entry is a minor of the input, so
/// the division by the previous pivot is always exact.
fn echelon(m: &Matrix) -> Echelon {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut prev = Scalar::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.data.swap(p * cols + j, r * cols + j);
            }
            swaps += 1;
        }
        let piv = a[(r, c)].clone();
        for i in r + 1..rows {
            let f = a[(i, c)].clone();
            for j in c + 1..cols {
                let v = &(&(&piv * &a[(i, j)]) - &(&f * &a[(r, j)])) / &prev;
                a[(i, j)] = v;
            }
            a[(i, c)] = Scalar::zero();
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    Echelon {
        form: a,
        pivots,
        swaps,
    }
}

/// Exact determinant via fraction-free elimination.
pub fn determinant(m: &Matrix) -> Result<Scalar> {
    if !m.is_square() {
        return Err(KzError::Shape(format!(
            "determinant of a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Scalar::one());
    }
    let e = echelon(m);
    if e.pivots.len() < n {
        return Ok(Scalar::zero());
    }
    // With full rank the last Bareiss pivot equals the determinant up to sign.
    let last = e.form[(n - 1, n - 1)].clone();
    Ok(if e.swaps % 2 == 1 { -last } else { last })
}

/// Reduced row echelon form by Gauss–Jordan elimination over the field;
/// returns the reduced matrix and its pivot columns. Rows with a zero entry
/// in the pivot column are left untouched, which keeps sparse systems cheap.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = a[(r, c)].inv().expect("pivot is nonzero");
        for j in c..cols {
            if !a[(r, j)].is_zero() {
                let v = &a[(r, j)] * &inv;
                a[(r, j)] = v;
            }
        }
        for i in (0..rows).filter(|&i| i != r) {
            let f = a[(i, c)].clone();
            if f.is_zero() {
                continue;
            }
            for j in c..cols {
                if a[(r, j)].is_zero() {
                    continue;
                }
                let v = &a[(i, j)] - &(&f * &a[(r, j)]);
                a[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Basis of `{v : M v = 0}`, one vector per free column.
pub fn nullspace(m: &Matrix) -> Vec<Vector> {
    let (r, pivots) = rref(m);
    let cols = m.cols;
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let basis: Vec<Vector> = (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|free| {
            let mut v = Vector::zeros(cols);
            v[free] = Scalar::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -&r[(row, free)];
            }
            v
        })
        .collect();
    debug_assert!(basis.iter().all(|v| m.mul_vec(v).is_zero()));
    basis
}

/// Result of an exact affine solve `A x = b`.
#[derive(Clone, Debug, PartialEq)]
pub enum AffineSolution {
    Consistent {
        particular: Vector,
        kernel: Vec<Vector>,
    },
    /// `certificate` satisfies `certificateᵀ A = 0` and `certificateᵀ b ≠ 0`.
    Inconsistent { certificate: Vector },
}

impl AffineSolution {
    pub fn is_consistent(&self) -> bool {
        matches!(self, AffineSolution::Consistent { .. })
    }
}

pub fn solve_affine(a: &Matrix, b: &Vector) -> Result<AffineSolution> {
    if a.rows != b.len() {
        return Err(KzError::Shape(format!(
            "system has {} rows but right-hand side has {} entries",
            a.rows,
            b.len()
        )));
    }
    let mut aug = Matrix::zeros(a.rows, a.cols + 1);
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, a.cols)] = b[i].clone();
    }
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&a.cols) {
        let certificate = nullspace(&a.transpose())
            .into_iter()
            .find(|y| !y.dot(b).is_zero())
            .expect("inconsistent system has a left-null certificate");
        return Ok(AffineSolution::Inconsistent { certificate });
    }
    let mut particular = Vector::zeros(a.cols);
    for (row, &p) in pivots.iter().enumerate() {
        particular[p] = r[(row, a.cols)].clone();
    }
    Ok(AffineSolution::Consistent {
        particular,
        kernel: nullspace(a),
    })
}

/// Monic characteristic polynomial `det(λI − M)`, coefficients from the
/// constant term upward (so the last entry is 1).
///
/// Uses the Faddeev–LeVerrier recurrence, which is exact in characteristic 0.
pub fn char_poly(m: &Matrix) -> Result<Vec<Scalar>> {
    if !m.is_square() {
        return Err(KzError::Shape(format!(
            "characteristic polynomial of a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let ident = Matrix::identity(n);
    let mut aux = Matrix::zeros(n, n);
    for k in 1..=n {
        // aux_k = M aux_{k-1} + c_{n-k+1} I ;  c_{n-k} = -tr(M aux_k)/k
        let mut next = m * &aux;
        next += &ident.scale(&coeffs[n - k + 1]);
        aux = next;
        let t = (m * &aux).trace();
        coeffs[n - k] = -(&t / &Scalar::from_int(k as i64));
    }
    Ok(coeffs)
}

/// Evaluates a polynomial given by ascending coefficients.
pub fn poly_eval(coeffs: &[Scalar], x: &Scalar) -> Scalar {
    coeffs
        .iter()
        .rev()
        .fold(Scalar::zero(), |acc, c| &(&acc * x) + c)
}

/// Integer roots of `char_poly(M)` with algebraic multiplicities, ascending.
pub fn integer_eigenvalues(m: &Matrix) -> Result<Vec<(i64, usize)>> {
    let poly = char_poly(m)?;
    Ok(integer_roots(&poly))
}

fn integer_roots(poly: &[Scalar]) -> Vec<(i64, usize)> {
    let mut candidates: Vec<BigInt> = Vec::new();
    // An integer root is a common root of the real and imaginary parts; take
    // candidates from whichever part is a nonzero polynomial.
    let part = |f: fn(&Scalar) -> &Rat| -> Vec<Rat> { poly.iter().map(|c| f(c).clone()).collect() };
    for rats in [part(|c| &c.re), part(|c| &c.im)] {
        if rats.iter().all(Zero::is_zero) {
            continue;
        }
        let lcm = rats
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let ints: Vec<BigInt> = rats
            .iter()
            .map(|r| (r * Rat::from_integer(lcm.clone())).to_integer())
            .collect();
        candidates.push(BigInt::zero());
        if let Some(low) = ints.iter().find(|c| !c.is_zero()) {
            for d in divisors(&low.abs()) {
                candidates.push(d.clone());
                candidates.push(-d);
            }
        }
        break;
    }
    candidates.sort();
    candidates.dedup();
    let mut out = Vec::new();
    for cand in candidates {
        let x = Scalar::from_rat(Rat::from_integer(cand.clone()));
        let mut p = poly.to_vec();
        let mut mult = 0;
        while p.len() > 1 {
            let (q, rem) = synthetic_division(&p, &x);
            if !rem.is_zero() {
                break;
            }
            mult += 1;
            p = q;
        }
        if mult > 0 {
            out.push((cand.to_i64().expect("eigenvalue fits in i64"), mult));
        }
    }
    out
}

fn synthetic_division(p: &[Scalar], x: &Scalar) -> (Vec<Scalar>, Scalar) {
    let deg = p.len() - 1;
    let mut q = vec![Scalar::zero(); deg];
    let mut acc = Scalar::zero();
    for i in (0..=deg).rev() {
        acc = &(&acc * x) + &p[i];
        if i > 0 {
            q[i - 1] = acc.clone();
        }
    }
    (q, acc)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    // Trial division; the constants seen here are tiny.
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &(&d * &d) <= n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let co = n / &d;
            if co != d {
                out.push(co);
            }
        }
        d += 1;
    }
    out
}
