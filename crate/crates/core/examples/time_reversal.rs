//! History probabilities are invariant under time reversal when the
//! initial state is maximally mixed.

use std::sync::Arc;

use chronologic::histories::{decoherence_functional, history_probability_unchecked, Family};
use chronologic::linalg::gates;
use chronologic::{Decomposition, DensityMatrix, HilbertSpace, ToleranceConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let space = HilbertSpace::new([("q", 2)])?;
    let z = Decomposition::basis(&space, "q", &["0", "1"])?;
    let family = Arc::new(Family::build(
        DensityMatrix::maximally_mixed(&space),
        vec![1.0, 2.0, 3.0],
        vec![gates::hadamard().into(), gates::rotation(0.4).into(), gates::hadamard().into()],
        vec![z.clone(), z.clone(), z],
        &ToleranceConfig::default(),
    )?);
    let reversed = Arc::new(family.time_reversed());
    let d = decoherence_functional(&family, 4096)?;
    let dr = decoherence_functional(&reversed, 4096)?;

    println!("{:<12} {:>10} {:<12} {:>10}", "history", "p", "reversed", "p");
    for h in family.enumerate_histories(4096)? {
        let image = Family::reversed_history(&reversed, &h)?;
        println!(
            "{:<12} {:>10.6} {:<12} {:>10.6}",
            family.labels_of(&h).join(","),
            history_probability_unchecked(&d, &h)?,
            reversed.labels_of(&image).join(","),
            history_probability_unchecked(&dr, &image)?,
        );
    }
    Ok(())
}
