//! A module with an action of Z/p, viewed over `R = k[delta]/(delta^p)`:
//! freeness tests and the delta-filtration.
//!
//! ```text
//! cargo run --example group_ring
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dieudonne::admissible::AdmissibleCoords;
use dieudonne::gring::RStructure;
use dieudonne::Field;

fn main() -> dieudonne::Result<()> {
    let k = Field::new(3, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let c = AdmissibleCoords::random_superspecial(&k, 2, &mut rng)?;
    let rs = RStructure::new(c.build()?)?;
    println!("dimension {} over F_9, p = {}", rs.host.n, rs.p());
    println!("freeness tests: {:?}", rs.freeness_tests());
    for i in 0..=rs.p() {
        println!("dim delta^{i} M = {}", rs.image(i).dim());
    }
    println!("delta adjoint to its tilde: {:?}", rs.tilde_adjoint_holds());
    Ok(())
}
