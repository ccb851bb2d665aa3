//! Twisting `g` by constants: the local-local EO type of the cover and the
//! invariant factors of the group action on its etale part.
//!
//! ```text
//! cargo run --release --example twisted_covers
//! ```

use dieudonne::curve::{ASCover, HyperellipticCurve};

fn main() -> dieudonne::Result<()> {
    let x = HyperellipticCurve::parse(3, "x^7 + x^6 + x^4 + x")?;
    let c = ASCover::parse(&x, "(x + 1)y")?;
    for t in 0..3 {
        let a = c.twisted(t).analysis()?;
        println!(
            "{}: EO {:?}, words {}, etale factors {:?}",
            a.cover, a.ll_eo, a.ll_words, a.etale_factors
        );
    }
    Ok(())
}
