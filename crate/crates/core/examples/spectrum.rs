//! Star transpositions of Sₙ and the integer spectrum of their sum `T`.

use kz_core::symmetric::{plus_minus_matrices, star_generators, t_spectrum};

fn main() -> kz_core::Result<()> {
    for (k, p) in star_generators(4)?.iter().enumerate() {
        let (plus, minus) = plus_minus_matrices(p)?;
        println!(
            "P{} = (1 {}): involution {}, rank(I+P) = {}, rank(I-P) = {}",
            k + 1,
            k + 2,
            p.is_involution(),
            plus.rank(),
            minus.rank()
        );
    }
    println!();
    for n in 3..=8 {
        let s = t_spectrum(n)?;
        let parts: Vec<String> = s.eigenvalues.iter().map(|(e, m)| format!("{e}^{m}")).collect();
        println!("n = {n}: spec T = {{{}}}  window [{}, {}]", parts.join(", "), s.min, s.max);
    }
    Ok(())
}
