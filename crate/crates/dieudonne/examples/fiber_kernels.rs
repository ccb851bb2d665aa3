//! The Verschiebung on regular differentials of a cover, twisted by the
//! fiber over a rational point of the base: dimensions of the kernels of
//! `V - 1` and `(V - 1)^3`.
//!
//! ```text
//! cargo run --release --example fiber_kernels
//! ```

use dieudonne::curve::{ny_kernel_dims, ASCover, HyperellipticCurve};

fn main() -> dieudonne::Result<()> {
    let x = HyperellipticCurve::parse(3, "-(x^12 + x^10 - x^9 + x^6 + x^4 - x^2 + x - 1)")?;
    println!("base: genus {}, a-number {}", x.genus, x.a_number());
    let c = ASCover::parse(
        &x,
        "(x^9 - x^7 - x^6 + x^5 + x^4 + x^3 + x^2 - x + 1)/x^15*y \
         - (x^15 + x^14 - x^13 + x^12 + x^11 - x^10 + x^9 + x^6 - x^3 + 1)/x^15",
    )?;
    for s in [(0, 1), (1, -1)] {
        let pkg = c.ny_module(s)?;
        let (k1, k3) = ny_kernel_dims(&pkg);
        println!("point {s:?}: dim ker(V-1) = {k1}, dim ker(V-1)^3 = {k3}");
    }
    Ok(())
}
