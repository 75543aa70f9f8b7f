//! Local Laurent solutions at a pole, and the expansion of a closed-form
//! solution checked against them.

use kz_core::frobenius::{frobenius_solve, laurent_of_rational, recursion_defects};
use kz_core::{s4, KzSystem, Scalar};

fn main() -> kz_core::Result<()> {
    let points: Vec<Scalar> = [0, 1, 2].iter().map(|&v| Scalar::from_int(v)).collect();
    let sys = KzSystem::new(4, -1, points.clone())?;
    let family = frobenius_solve(&sys, 0, 3)?;
    println!("pole z1: exponent window {:?}, leading orders {:?}", family.window, family.leading_orders());
    for s in &family.basis {
        println!("  starts at t^{}: b = {:?}", s.lowest, s.coeffs);
    }
    println!("solutions regular at z1: {}", family.dim_from(0));

    let y1 = laurent_of_rational(&s4::y1(&points)?, 0, 3)?;
    let clean = recursion_defects(&sys, &y1)?.iter().all(|(_, d)| d.is_zero());
    println!("Y1 near z1 starts at t^{} with {:?}", y1.lowest, y1.coeffs[0]);
    println!("  recursion satisfied: {clean}, inside the family: {}", family.contains(&y1, 4)?);

    let sys2 = sys.with_rho(2);
    let fam2 = frobenius_solve(&sys2, 1, 3)?;
    println!("rho = 2 at z2: window {:?}, {} local solutions", fam2.window, fam2.basis.len());
    Ok(())
}
