//! Exact Gaussian-rational linear algebra: parsing, determinants, kernels and
//! characteristic polynomials with no rounding anywhere.

use kz_core::exact::{char_poly, determinant, integer_eigenvalues, nullspace, parse_scalar, solve_affine, AffineSolution};
use kz_core::{Matrix, Scalar, Vector};

fn main() -> kz_core::Result<()> {
    let z = parse_scalar("(1/2,-3)")?;
    let w: Scalar = "-4/6".parse()?;
    println!("z = {z}, w = {w}, z*w = {}, 1/z = {}", &z * &w, z.inv().expect("nonzero"));

    let m = Matrix::from_int_rows(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
    println!("rank {} of a 3x4 matrix", m.rank());
    for v in nullspace(&m) {
        println!("  kernel vector {v:?}, M v = {:?}", m.mul_vec(&v));
    }

    let b = Vector::from_ints(&[1, 2, 5]);
    match solve_affine(&m, &b)? {
        AffineSolution::Consistent { particular, kernel } => {
            println!("M x = b solved by {particular:?} (+ {} kernel directions)", kernel.len())
        }
        AffineSolution::Inconsistent { certificate } => println!("inconsistent, certificate {certificate:?}"),
    }
    // the same right-hand side with the dependent row broken
    let b2 = Vector::from_ints(&[1, 3, 5]);
    if let AffineSolution::Inconsistent { certificate } = solve_affine(&m, &b2)? {
        println!("M x = {b2:?} has no solution: y = {certificate:?} gives yᵀM = 0, yᵀb ≠ 0");
    }

    let a = Matrix::from_int_rows(&[&[2, 1, 0], &[1, 2, 0], &[0, 0, -1]]);
    println!("det = {}", determinant(&a)?);
    let p: Vec<String> = char_poly(&a)?.iter().map(Scalar::to_string).collect();
    println!("char poly (ascending) = [{}]", p.join(", "));
    println!("integer eigenvalues (value, multiplicity) = {:?}", integer_eigenvalues(&a)?);
    Ok(())
}
