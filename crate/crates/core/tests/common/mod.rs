#![allow(dead_code)]

use kz_core::ansatz::RationalVectorFunction;
use kz_core::{s4, Scalar, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_rational(rng: &mut ChaCha8Rng) -> Scalar {
    let re = Scalar::from_ratio(rng.gen_range(-30..=30), rng.gen_range(1..=9));
    let im = Scalar::from_ratio(rng.gen_range(-30..=30), rng.gen_range(1..=9));
    &re + &(&im * &Scalar::i())
}

/// Three distinct Gaussian-rational points.
pub fn configuration(rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    loop {
        let p: Vec<Scalar> = (0..3).map(|_| gaussian_rational(rng)).collect();
        if p[0] != p[1] && p[0] != p[2] && p[1] != p[2] {
            return p;
        }
    }
}

pub fn ints(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&x| Scalar::from_int(x)).collect()
}

pub fn closed_forms(points: &[Scalar]) -> Vec<RationalVectorFunction> {
    vec![
        s4::y1(points).unwrap(),
        s4::y2(points).unwrap(),
        s4::y3(points).unwrap(),
        s4::y4(points).unwrap(),
    ]
}

/// Adds one to entry `i` of the residue vector at pole `k`.
pub fn corrupt_residue(f: &RationalVectorFunction, k: usize, i: usize) -> RationalVectorFunction {
    let mut residues: Vec<Vector> = (0..f.points().len()).map(|l| f.residue(l)).collect();
    residues[k].0[i] = &residues[k].0[i] + &Scalar::one();
    RationalVectorFunction::simple(f.points().to_vec(), residues, f.q_minus1(), f.q0()).unwrap()
}

pub fn run_cli(args: &[&str]) -> (String, String, i32) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = kz_core::cli::run(std::iter::once("kz").chain(args.iter().copied()), &mut out, &mut err);
    (String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap(), code)
}
