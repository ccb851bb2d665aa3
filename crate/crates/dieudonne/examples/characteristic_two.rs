//! At p = 2 the symmetric part of `D` matters: the census over F_2 at
//! h = 2, and the indecomposable module with `D_1^2 = 0`.
//!
//! ```text
//! cargo run --example characteristic_two
//! ```

use dieudonne::admissible::{enumerate_p2, AdmissibleCoords};
use dieudonne::gring::RMatrix;
use dieudonne::{Field, Matrix};

fn main() -> dieudonne::Result<()> {
    let k = Field::prime(2)?;
    for row in enumerate_p2(&k, 2)? {
        println!(
            "D = {}: a {}, EO {}, words {}",
            row.d, row.a, row.eo, row.words
        );
    }

    let k4 = Field::new(2, 2)?;
    let mut d1 = Matrix::zeros(&k4, 2, 2);
    for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        d1.set(i, j, 1);
    }
    let d = RMatrix::from_expansion(&k4, &[Matrix::zeros(&k4, 2, 2), d1]);
    let m = AdmissibleCoords::superspecial(d)?.build()?;
    println!(
        "indecomposable: EO {:?}, words {}",
        m.eo_sequence()?,
        m.kraft_words()?
    );
    Ok(())
}
