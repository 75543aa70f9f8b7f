//! Every rational solution of a given shape, found as the exact kernel of the
//! matching conditions, for several dimensions and values of ρ.

use kz_core::ansatz::{solve_ansatz, span_contains, AnsatzShape};
use kz_core::{s4, KzSystem, Scalar};

fn main() -> kz_core::Result<()> {
    let pts = |v: &[i64]| v.iter().map(|&x| Scalar::from_int(x)).collect::<Vec<_>>();

    let sys = KzSystem::new(4, -1, pts(&[0, 1, 5]))?;
    let basis = solve_ansatz(&sys, AnsatzShape::default())?;
    println!("n = 4, rho = -1: {} solutions of shape L/(z - zk) + Q1 z + Q0", basis.len());
    for (i, y) in [s4::y1, s4::y2, s4::y3, s4::y4].iter().enumerate() {
        println!("  Y{} in span: {}", i + 1, span_contains(&basis, &y(sys.points())?)?);
    }

    for (n, rho, shape) in [
        (3, -1, AnsatzShape::default()),
        (5, -1, AnsatzShape::default()),
        (4, 1, AnsatzShape::default()),
        (4, -2, AnsatzShape { pole_order: 2, poly_degree: 2 }),
    ] {
        let points: Vec<i64> = (0..n as i64 - 1).map(|k| k * k + k).collect();
        let sys = KzSystem::new(n, rho, pts(&points))?;
        let basis = solve_ansatz(&sys, shape)?;
        println!(
            "n = {n}, rho = {rho}, pole order {}, degree {}: dimension {}",
            shape.pole_order,
            shape.poly_degree,
            basis.len()
        );
    }
    Ok(())
}
