//! One row of the etale table: an unramified Artin-Schreier cover of a
//! genus-3 curve over F_3, with its splitting tests and the degrees of the
//! fields cut out by the etale part.
//!
//! ```text
//! cargo run --release --example etale_cover
//! ```

use dieudonne::curve::{ASCover, HyperellipticCurve};

fn main() -> dieudonne::Result<()> {
    let x = HyperellipticCurve::parse(3, "x^7 + x^6 + x^4 + x")?;
    let c = ASCover::parse(&x, "(x + 1)y")?;
    let ram = c.check_unramified()?;
    println!("{}: unramified {}", c.describe(), ram.unramified);

    let a = c.analysis()?;
    let e = &a.etale;
    println!("nu_X {}, nu_Y {}", e.nu_X, e.nu_Y);
    println!(
        "split kernel {}, split cokernel {}",
        e.split_ker, e.split_coker
    );
    println!("d1 {}, d2 {}, mu {:?}", e.d1, e.d2, e.mu);
    println!(
        "g_Y {}, a_Y {}, f_Y {}",
        a.invariants.g_y, a.invariants.a_y, a.invariants.f_y
    );
    println!("structural identities hold: {}", a.invariants.all_hold());
    Ok(())
}
