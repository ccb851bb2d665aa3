//! Standard modules from Kraft words and from EO sequences, and the round
//! trip back through the canonical filtration.
//!
//! ```text
//! cargo run --example words_and_eo
//! ```

use dieudonne::dmodule::{
    module_from_eo, module_from_words, module_from_words_paired, WordMultiset,
};
use dieudonne::Field;

fn main() -> dieudonne::Result<()> {
    let k = Field::prime(3)?;

    let w = WordMultiset::parse("f^2v:1, fv^2:1, fv:2")?;
    let m = module_from_words_paired(&w, &k)?;
    println!(
        "words {w}: dim {}, a {}, self-dual {}",
        m.n,
        m.a_number(),
        m.is_self_dual()
    );
    println!(
        "  EO {:?}, words back {}",
        m.eo_sequence()?,
        m.kraft_words()?
    );

    // a chiral word is not self-dual; its dual is the other orientation
    let chiral = WordMultiset::parse("ffvvfv")?;
    let c = module_from_words(&chiral, &k);
    println!(
        "{chiral}: self-dual {}, dual words {}",
        c.is_self_dual(),
        c.dual().kraft_words()?
    );

    for psi in [vec![0, 0, 0], vec![0, 1, 1], vec![0, 0, 1, 2]] {
        let m = module_from_eo(&psi, &k)?;
        println!(
            "EO {psi:?}: words {}, EO back {:?}",
            m.kraft_words()?,
            m.eo_sequence()?
        );
    }
    Ok(())
}
