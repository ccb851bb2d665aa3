//! Every rank-one superspecial-mod-delta module over F_9 at p = 3, checked
//! for admissibility and compared with the words predicted from `a`.
//!
//! ```text
//! cargo run --example admissible_modules
//! ```

use dieudonne::admissible::{
    admissible_report, classify_h1, superspecial_candidates, AdmissibleCoords, ParityMode,
};
use dieudonne::Field;

fn main() -> dieudonne::Result<()> {
    let k = Field::new(3, 2)?;
    for (i, d) in superspecial_candidates(&k, 1, ParityMode::Exhaustive)?
        .into_iter()
        .enumerate()
    {
        let c = AdmissibleCoords::superspecial(d)?;
        let m = c.build()?;
        let a = c.a_from_d();
        let predicted = classify_h1(3, a)?;
        println!(
            "D #{i}: admissible {}, a {a}, EO {:?}, words {} (predicted {})",
            admissible_report(&m, 1)?.all(),
            m.eo_sequence()?,
            m.kraft_words()?,
            predicted.words
        );
    }
    Ok(())
}
