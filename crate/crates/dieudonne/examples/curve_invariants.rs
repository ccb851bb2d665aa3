//! Invariants of a genus-3 curve over F_3 from its Cartier-Manin matrix,
//! then the same invariants read off its de Rham Dieudonne module.
//!
//! ```text
//! cargo run --example curve_invariants
//! ```

use dieudonne::curve::{de_rham_base, HyperellipticCurve};

fn main() -> dieudonne::Result<()> {
    let x = HyperellipticCurve::parse(3, "x^7 + x^6 + x^4 + x")?;
    let s = x.summary();
    println!("y^2 = {}  over F_{}", s.f, s.p);
    println!(
        "genus {}, p-rank {}, a-number {}, nu {}",
        s.genus, s.p_rank, s.a_number, s.nu
    );
    print!("Cartier-Manin matrix {:?}", x.cartier_manin().matrix);

    let pkg = de_rham_base(&x)?;
    let m = &pkg.module;
    println!(
        "H^1_dR: dimension {}, checks pass {}",
        m.n,
        m.verify().all_pass()
    );
    println!("a-number {}, p-rank {}", m.a_number(), m.p_rank());
    let ll = m.local_local()?;
    if ll.n > 0 {
        println!(
            "local-local EO type {:?}, words {}",
            ll.eo_sequence()?,
            ll.kraft_words()?
        );
    }
    Ok(())
}
