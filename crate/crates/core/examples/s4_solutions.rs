//! The four closed-form rational solutions for n = 4, ρ = −1: residue
//! conditions, exact residuals and the independence certificate.
//!
//! Run with `cargo run --example s4_solutions -- 0 1 5` to pick the poles.

use kz_core::ansatz::{check_conditions, residual};
use kz_core::exact::parse_scalar;
use kz_core::s4::{fundamental_matrix, is_midpoint_configuration, S4Coefficients};
use kz_core::{KzSystem, Scalar};

fn main() -> kz_core::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let points: Vec<Scalar> = if args.len() == 3 {
        args.iter().map(|a| parse_scalar(a)).collect::<kz_core::Result<_>>()?
    } else {
        vec![Scalar::from_int(0), Scalar::from_int(1), Scalar::from_int(5)]
    };
    let sys = KzSystem::new(4, -1, points.clone())?;
    let c = S4Coefficients::new(&points)?;
    println!("alpha = {}, beta = {}", c.alpha, c.beta);
    println!("beta identities: {:?}", c.beta_identities(&points)?);

    let fm = fundamental_matrix(&points, None)?;
    let z = Scalar::from_ratio(7, 2);
    for (i, y) in fm.columns.iter().enumerate() {
        let rep = check_conditions(&sys, y)?;
        println!(
            "Y{}: residues {:?}, conditions {}, residual at {z} = {:?}",
            i + 1,
            (0..3).map(|k| y.residue(k)).collect::<Vec<_>>(),
            if rep.passed() { "hold" } else { "FAIL" },
            residual(&sys, y, &z)?
        );
    }
    match &fm.certificate {
        Some(cert) => println!("fundamental: det = {} at z = {}", cert.determinant, cert.probe),
        None if is_midpoint_configuration(&points)? => {
            println!("not fundamental: z2 is the midpoint of z1 and z3, so Y3 = -Y4")
        }
        None => println!("not fundamental at any probe"),
    }
    Ok(())
}
