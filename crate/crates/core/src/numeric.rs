//! Floating-point cross-checks: adaptive Dormand–Prince transport of
//! `W' = ρ A(z) W` along paths in the complex plane, monodromy loops, and
//! residual scans of rational functions.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ansatz::{solve_ansatz, AnsatzShape, RationalVectorFunction};
use crate::error::{KzError, Result};
use crate::s4;
use crate::system::KzSystem;

pub type CMatrix = DMatrix<Complex64>;

/// A piece of a path, parametrised over `τ ∈ [0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub enum Segment {
    Line { from: Complex64, to: Complex64 },
    /// Counterclockwise for positive `sweep` (radians).
    Arc {
        center: Complex64,
        radius: f64,
        start_angle: f64,
        sweep: f64,
    },
}

impl Segment {
    pub fn point(&self, t: f64) -> Complex64 {
        match *self {
            Segment::Line { from, to } => from + (to - from) * t,
            Segment::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => center + Complex64::from_polar(radius, start_angle + sweep * t),
        }
    }

    /// `dz/dτ`.
    pub fn tangent(&self, t: f64) -> Complex64 {
        match *self {
            Segment::Line { from, to } => to - from,
            Segment::Arc {
                radius,
                start_angle,
                sweep,
                ..
            } => Complex64::i() * Complex64::from_polar(radius * sweep, start_angle + sweep * t),
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line { from, to } => (to - from).norm(),
            Segment::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    /// Smallest distance from `p` to the segment.
    pub fn distance_to(&self, p: Complex64) -> f64 {
        match *self {
            Segment::Line { from, to } => {
                let d = to - from;
                let len2 = d.norm_sqr();
                if len2 == 0.0 {
                    return (p - from).norm();
                }
                let t = ((p - from) * d.conj()).re / len2;
                (p - self.point(t.clamp(0.0, 1.0))).norm()
            }
            Segment::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => {
                let rel = p - center;
                if sweep.abs() >= 2.0 * PI || rel.norm() == 0.0 {
                    return (rel.norm() - radius).abs();
                }
                // angle of p measured from the start, in the sweep direction
                let mut a = (rel.arg() - start_angle) * sweep.signum();
                a = a.rem_euclid(2.0 * PI);
                if a <= sweep.abs() {
                    (rel.norm() - radius).abs()
                } else {
                    (p - self.point(0.0)).norm().min((p - self.point(1.0)).norm())
                }
            }
        }
    }
}

/// A pole-avoiding path.
#[derive(Clone, Debug, PartialEq)]
pub struct Path {
    pub segments: Vec<Segment>,
    pub clearance: f64,
}

impl Path {
    pub fn new(segments: Vec<Segment>, clearance: f64) -> Self {
        Path { segments, clearance }
    }

    pub fn line(from: Complex64, to: Complex64, clearance: f64) -> Self {
        Path::new(vec![Segment::Line { from, to }], clearance)
    }

    /// Full counterclockwise circles starting and ending at `center + radius`.
    pub fn circle(center: Complex64, radius: f64, turns: usize, clearance: f64) -> Self {
        Path::new(
            vec![Segment::Arc {
                center,
                radius,
                start_angle: 0.0,
                sweep: 2.0 * PI * turns as f64,
            }],
            clearance,
        )
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }

    pub fn start(&self) -> Option<Complex64> {
        self.segments.first().map(|s| s.point(0.0))
    }

    pub fn end(&self) -> Option<Complex64> {
        self.segments.last().map(|s| s.point(1.0))
    }

    /// Fails if any segment comes closer than the clearance to a pole.
    pub fn validate(&self, poles: &[Complex64]) -> Result<()> {
        if self.clearance <= 0.0 {
            return Err(KzError::Path("clearance must be positive".into()));
        }
        for (i, seg) in self.segments.iter().enumerate() {
            for (k, &p) in poles.iter().enumerate() {
                let d = seg.distance_to(p);
                if d < self.clearance {
                    return Err(KzError::Path(format!(
                        "segment {i} passes within {d:.3e} of pole z{} (clearance {:.3e})",
                        k + 1,
                        self.clearance
                    )));
                }
            }
        }
        Ok(())
    }
}

pub fn float_poles(sys: &KzSystem) -> Vec<Complex64> {
    sys.points().iter().map(|z| z.to_complex64()).collect()
}

/// Ten percent of the smallest pairwise pole distance.
pub fn default_clearance(sys: &KzSystem) -> f64 {
    let p = float_poles(sys);
    let mut min = f64::INFINITY;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            min = min.min((p[i] - p[j]).norm());
        }
    }
    0.1 * min
}

/// `ρ A(z)` in floating point.
fn coefficient(gens: &[CMatrix], poles: &[Complex64], rho: f64, z: Complex64) -> CMatrix {
    let n = gens[0].nrows();
    let mut a = CMatrix::zeros(n, n);
    for (p, &zk) in gens.iter().zip(poles) {
        a += p * (Complex64::new(rho, 0.0) / (z - zk));
    }
    a
}

/// Transported matrix plus the number of accepted steps.
#[derive(Clone, Debug)]
pub struct Transport {
    pub matrix: CMatrix,
    pub steps: usize,
}

const MIN_STEP: f64 = 1e-14;
const MAX_STEPS: usize = 5_000_000;

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Adaptive transport of `w0` along `path`. The local error estimate of each
/// accepted step is at most `tol` times the arc length it covers, relative to
/// `1 + max|W|`.
pub fn integrate(sys: &KzSystem, path: &Path, w0: &CMatrix, tol: f64) -> Result<CMatrix> {
    Ok(integrate_counted(sys, path, w0, tol)?.matrix)
}

pub fn integrate_counted(sys: &KzSystem, path: &Path, w0: &CMatrix, tol: f64) -> Result<Transport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(KzError::Integration(format!("tolerance must be positive, got {tol}")));
    }
    let poles = float_poles(sys);
    path.validate(&poles)?;
    let gens: Vec<CMatrix> = sys.generators().iter().map(|p| p.to_complex()).collect();
    let rho = sys.rho() as f64;
    let mut w = w0.clone();
    let mut steps = 0;
    for seg in &path.segments {
        let len = seg.length();
        if len == 0.0 {
            continue;
        }
        let rhs = |t: f64, w: &CMatrix| -> CMatrix {
            coefficient(&gens, &poles, rho, seg.point(t)) * w * seg.tangent(t)
        };
        let mut t = 0.0;
        let mut h = (0.01f64).min(1.0);
        let mut k1 = rhs(t, &w);
        while t < 1.0 {
            if h < MIN_STEP {
                return Err(KzError::Integration(format!(
                    "step size underflow at z = {}",
                    seg.point(t)
                )));
            }
            if steps > MAX_STEPS {
                return Err(KzError::Integration("step budget exhausted".into()));
            }
            let h_eff = h.min(1.0 - t);
            let mut ks: Vec<CMatrix> = Vec::with_capacity(7);
            ks.push(k1.clone());
            for s in 1..7 {
                let mut y = w.clone();
                for (j, kj) in ks.iter().enumerate() {
                    let a = A[s][j];
                    if a != 0.0 {
                        y += kj * Complex64::new(h_eff * a, 0.0);
                    }
                }
                ks.push(rhs(t + C[s] * h_eff, &y));
            }
            // stage 7 is evaluated at the fifth-order solution (FSAL)
            let mut y_new = w.clone();
            for (j, kj) in ks.iter().take(6).enumerate() {
                if A[6][j] != 0.0 {
                    y_new += kj * Complex64::new(h_eff * A[6][j], 0.0);
                }
            }
            let mut err_m = CMatrix::zeros(w.nrows(), w.ncols());
            for (j, kj) in ks.iter().enumerate() {
                if E[j] != 0.0 {
                    err_m += kj * Complex64::new(h_eff * E[j], 0.0);
                }
            }
            let scale = 1.0 + w.iter().map(|c| c.norm()).fold(0.0, f64::max);
            let err = err_m.iter().map(|c| c.norm()).fold(0.0, f64::max) / scale;
            let allowed = tol * h_eff * len;
            if err <= allowed {
                t += h_eff;
                w = y_new;
                k1 = ks.pop().expect("seven stages");
                steps += 1;
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * (allowed / err).powf(0.25)).clamp(0.2, 5.0)
            };
            h = h_eff * factor;
        }
    }
    Ok(Transport { matrix: w, steps })
}

#[derive(Clone, Debug)]
pub struct MonodromyResult {
    /// Zero-based pole index, or `None` for a loop around a regular point.
    pub pole: Option<usize>,
    pub center: Complex64,
    pub radius: f64,
    /// `W₀⁻¹ W₁` where `W₁` is the continuation of `W₀` around the loop.
    pub transport: CMatrix,
    /// Frobenius norm of `transport − I`.
    pub deviation: f64,
    pub steps: usize,
    pub tol: f64,
    pub start: StartKind,
}

impl MonodromyResult {
    pub fn recompute_deviation(&self) -> f64 {
        identity_deviation(&self.transport)
    }
}

pub fn identity_deviation(m: &CMatrix) -> f64 {
    (m - CMatrix::identity(m.nrows(), m.ncols())).norm()
}

/// Which fundamental matrix was continued around the loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StartKind {
    /// The closed-form `S₄` solutions.
    S4Explicit,
    /// A complete basis from the rational-ansatz solver.
    AnsatzBasis,
    /// No rational fundamental matrix available; the identity is used.
    Identity,
}

impl StartKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            StartKind::S4Explicit => "s4-explicit",
            StartKind::AnsatzBasis => "ansatz-basis",
            StartKind::Identity => "identity",
        }
    }
}

/// Floating evaluation of a set of rational columns at `z`.
pub fn eval_columns(columns: &[RationalVectorFunction], z: Complex64) -> CMatrix {
    let n = columns.first().map_or(0, |c| c.dim());
    let mut m = CMatrix::zeros(n, columns.len());
    for (j, f) in columns.iter().enumerate() {
        let v = FloatFunction::new(f).eval(z);
        for i in 0..n {
            m[(i, j)] = v[i];
        }
    }
    m
}

/// The columns continued around monodromy loops: closed-form solutions when
/// the system is the `S₄`, `ρ = −1` one and they are independent, otherwise a full ansatz basis if the
/// solver finds `n` independent solutions, otherwise none.
pub fn rational_start(sys: &KzSystem) -> Result<(StartKind, Vec<RationalVectorFunction>)> {
    if sys.dim() == 4 && sys.rho() == -1 {
        let fm = s4::fundamental_matrix(sys.points(), None)?;
        if fm.is_fundamental() {
            return Ok((StartKind::S4Explicit, fm.columns.to_vec()));
        }
    }
    let basis = solve_ansatz(sys, AnsatzShape::default())?;
    if basis.len() == sys.dim() {
        Ok((StartKind::AnsatzBasis, basis))
    } else {
        Ok((StartKind::Identity, Vec::new()))
    }
}

/// Monodromy around pole `k` (zero-based) on a circle of the given radius,
/// based at the circle's rightmost point and traversed counterclockwise.
pub fn monodromy(sys: &KzSystem, k: usize, radius: f64, tol: f64) -> Result<MonodromyResult> {
    sys.check_pole(k)?;
    let center = sys.points()[k].to_complex64();
    let poles = float_poles(sys);
    for (l, &p) in poles.iter().enumerate() {
        if l != k && (p - center).norm() <= radius {
            return Err(KzError::Path(format!(
                "radius {radius} circle around z{} encloses z{}",
                k + 1,
                l + 1
            )));
        }
    }
    let mut r = loop_transport(sys, center, radius, 1, tol)?;
    r.pole = Some(k);
    Ok(r)
}

/// Continues a fundamental matrix `turns` times around a circle.
pub fn loop_transport(sys: &KzSystem, center: Complex64, radius: f64, turns: usize, tol: f64) -> Result<MonodromyResult> {
    let (start, columns) = rational_start(sys)?;
    loop_transport_from(sys, center, radius, turns, tol, start, &columns)
}

pub fn loop_transport_from(
    sys: &KzSystem,
    center: Complex64,
    radius: f64,
    turns: usize,
    tol: f64,
    start: StartKind,
    columns: &[RationalVectorFunction],
) -> Result<MonodromyResult> {
    if radius <= 0.0 {
        return Err(KzError::Path("radius must be positive".into()));
    }
    let n = sys.dim();
    let base = center + radius;
    let w0 = if columns.is_empty() {
        CMatrix::identity(n, n)
    } else {
        eval_columns(columns, base)
    };
    let w0_inv = w0
        .clone()
        .try_inverse()
        .filter(|inv| inv.iter().all(|c| c.is_finite()))
        .ok_or_else(|| KzError::Integration("singular starting matrix".into()))?;
    let clearance = default_clearance(sys).min(radius);
    let path = Path::circle(center, radius, turns, clearance);
    let tr = integrate_counted(sys, &path, &w0, tol)?;
    let transport = w0_inv * tr.matrix;
    let deviation = identity_deviation(&transport);
    Ok(MonodromyResult {
        pole: None,
        center,
        radius,
        transport,
        deviation,
        steps: tr.steps,
        tol,
        start,
    })
}

/// Floating copy of a rational function for fast repeated evaluation.
#[derive(Clone, Debug)]
pub struct FloatFunction {
    points: Vec<Complex64>,
    principal: Vec<Vec<Vec<Complex64>>>,
    poly: Vec<Vec<Complex64>>,
    n: usize,
}

impl FloatFunction {
    pub fn new(f: &RationalVectorFunction) -> Self {
        FloatFunction {
            points: f.points().iter().map(|z| z.to_complex64()).collect(),
            principal: f
                .principal_parts()
                .iter()
                .map(|p| p.iter().map(|v| v.to_complex()).collect())
                .collect(),
            poly: f.poly_coeffs().iter().map(|v| v.to_complex()).collect(),
            n: f.dim(),
        }
    }

    pub fn eval(&self, z: Complex64) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.n];
        let mut zp = Complex64::new(1.0, 0.0);
        for c in &self.poly {
            for (o, x) in out.iter_mut().zip(c) {
                *o += x * zp;
            }
            zp *= z;
        }
        for (zk, parts) in self.points.iter().zip(&self.principal) {
            let inv = 1.0 / (z - zk);
            let mut pw = inv;
            for c in parts {
                for (o, x) in out.iter_mut().zip(c) {
                    *o += x * pw;
                }
                pw *= inv;
            }
        }
        out
    }

    pub fn eval_derivative(&self, z: Complex64) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.n];
        let mut zp = Complex64::new(1.0, 0.0);
        for (d, c) in self.poly.iter().enumerate().skip(1) {
            for (o, x) in out.iter_mut().zip(c) {
                *o += x * zp * d as f64;
            }
            zp *= z;
        }
        for (zk, parts) in self.points.iter().zip(&self.principal) {
            let inv = 1.0 / (z - zk);
            let mut pw = inv * inv;
            for (j, c) in parts.iter().enumerate() {
                let f = -((j + 1) as f64);
                for (o, x) in out.iter_mut().zip(c) {
                    *o += x * pw * f;
                }
                pw *= inv;
            }
        }
        out
    }
}

/// Deterministic sample points in a box around the poles, each at least the
/// default clearance away from every pole.
pub fn scan_points(sys: &KzSystem, count: usize) -> Vec<Complex64> {
    let poles = float_poles(sys);
    let clearance = default_clearance(sys);
    let (mut lo_re, mut hi_re, mut lo_im, mut hi_im) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in &poles {
        lo_re = lo_re.min(p.re);
        hi_re = hi_re.max(p.re);
        lo_im = lo_im.min(p.im);
        hi_im = hi_im.max(p.im);
    }
    let pad = 1.0 + 0.5 * (hi_re - lo_re).max(hi_im - lo_im);
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b7a);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let z = Complex64::new(
            rng.gen_range(lo_re - pad..hi_re + pad),
            rng.gen_range(lo_im - pad..hi_im + pad),
        );
        if poles.iter().all(|p| (z - p).norm() >= clearance) {
            out.push(z);
        }
    }
    out
}

/// Largest `‖W'(z) − ρ A(z) W(z)‖₂` over `count` scan points.
pub fn residual_scan(sys: &KzSystem, f: &RationalVectorFunction, count: usize) -> f64 {
    let ff = FloatFunction::new(f);
    let poles = float_poles(sys);
    let gens: Vec<CMatrix> = sys.generators().iter().map(|p| p.to_complex()).collect();
    let rho = sys.rho() as f64;
    scan_points(sys, count)
        .into_iter()
        .map(|z| {
            let a = coefficient(&gens, &poles, rho, z);
            let w = nalgebra::DVector::from_vec(ff.eval(z));
            let dw = nalgebra::DVector::from_vec(ff.eval_derivative(z));
            (dw - a * w).norm()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Scalar;

    fn sys() -> KzSystem {
        KzSystem::new(4, -1, [0, 1, 2].iter().map(|&v| Scalar::from_int(v)).collect()).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_length_path_is_identity_map() {
        let w0 = CMatrix::from_fn(4, 4, |i, j| c(i as f64 + 1.0, j as f64));
        let p = Path::line(c(3.0, 0.0), c(3.0, 0.0), 0.1);
        assert_eq!(integrate(&sys(), &p, &w0, 1e-10).unwrap(), w0);
    }

    #[test]
    fn clearance_violations() {
        let p = Path::line(c(-1.0, 0.0), c(3.0, 0.0), 0.1);
        assert!(matches!(integrate(&sys(), &p, &CMatrix::identity(4, 4), 1e-8), Err(KzError::Path(_))));
        let arc = Path::circle(c(1.0, 0.0), 0.95, 1, 0.1);
        assert!(arc.validate(&float_poles(&sys())).is_err());
        assert!(integrate(&sys(), &Path::line(c(3.0, 0.0), c(4.0, 0.0), 0.1), &CMatrix::identity(4, 4), 0.0).is_err());
    }

    #[test]
    fn arc_distance() {
        let half = Segment::Arc {
            center: c(0.0, 0.0),
            radius: 1.0,
            start_angle: 0.0,
            sweep: PI,
        };
        // point below the upper half circle: nearest points are the ends
        assert!((half.distance_to(c(0.0, -1.0)) - 2f64.sqrt()).abs() < 1e-12);
        assert!((half.distance_to(c(0.0, 2.0)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn transport_is_linear() {
        let p = Path::line(c(3.0, 0.0), c(3.0, 2.0), 0.1);
        let w0 = CMatrix::identity(4, 4);
        let a = integrate(&sys(), &p, &w0, 1e-10).unwrap();
        let k = c(2.5, -1.0);
        let b = integrate(&sys(), &p, &(w0 * k), 1e-10).unwrap();
        assert!((a * k - b).norm() < 1e-9);
    }

    #[test]
    fn regular_loop_is_trivial_and_double_loop_squares() {
        let s = sys();
        let (_, cols) = rational_start(&s).unwrap();
        let one = loop_transport_from(&s, c(5.0, 0.0), 1.0, 1, 1e-11, StartKind::Identity, &[]).unwrap();
        assert!(one.deviation < 1e-8);
        let single = loop_transport_from(&s, c(0.0, 0.0), 0.5, 1, 1e-11, StartKind::Identity, &[]).unwrap();
        let double = loop_transport_from(&s, c(0.0, 0.0), 0.5, 2, 1e-11, StartKind::Identity, &[]).unwrap();
        assert!((&single.transport * &single.transport - &double.transport).norm() < 1e-7);
        assert!(!cols.is_empty());
    }

    #[test]
    fn monodromy_radius_checks() {
        assert!(monodromy(&sys(), 1, 1.0, 1e-8).is_err());
        assert!(monodromy(&sys(), 3, 0.4, 1e-8).is_err());
        let r = monodromy(&sys(), 1, 0.4, 1e-12).unwrap();
        assert!(r.deviation < 1e-8, "deviation {}", r.deviation);
        // (0,1,2) is a midpoint configuration, so the solver basis is used
        assert_eq!(r.start, StartKind::AnsatzBasis);
        assert!((r.recompute_deviation() - r.deviation).abs() == 0.0);
    }

    #[test]
    fn residual_scan_of_zero_is_zero() {
        let f = RationalVectorFunction::zero(4, sys().points().to_vec());
        assert_eq!(residual_scan(&sys(), &f, 16), 0.0);
        assert_eq!(scan_points(&sys(), 5), scan_points(&sys(), 5));
    }
}
