//! Numerical continuation of a fundamental matrix around each pole. For the
//! rational system every loop must return the identity.

use kz_core::numeric::{monodromy, rational_start};
use kz_core::{KzSystem, Scalar};

fn main() -> kz_core::Result<()> {
    for pts in [[0, 1, 2], [0, 1, 5]] {
        let sys = KzSystem::new(4, -1, pts.iter().map(|&v| Scalar::from_int(v)).collect())?;
        let (start, _) = rational_start(&sys)?;
        println!("poles {pts:?}, continuing the {} solutions", start.as_str());
        for tol in [1e-6, 1e-9, 1e-12] {
            let devs: Vec<String> = (0..3)
                .map(|k| monodromy(&sys, k, 0.4, tol).map(|r| format!("{:.1e} ({} steps)", r.deviation, r.steps)))
                .collect::<kz_core::Result<_>>()?;
            println!("  tol {tol:.0e}: |M - I| = {}", devs.join(", "));
        }
    }
    Ok(())
}
