use cubicwave::grid::{Grid, GridSpec};
use cubicwave::spectral::multiplicity_solution;

fn main() {
    let g = Grid::new(GridSpec::new(24, 10)).unwrap();

    println!("== dr error on |xi|^2 ==");
    let f = g.field_from_zr(|z, r| z * z + r * r);
    let dr = g.dr(&f);
    let mut worst = 0.0f64;
    let mut at = (0, 0);
    for i in 0..g.spec.n_r {
        for j in 0..g.spec.n_theta {
            let r = g.rho[i] * g.y[j];
            let e = (dr.0[(i, j)] - 2.0 * r).abs();
            if e > worst {
                worst = e;
                at = (i, j);
            }
        }
    }
    println!("worst {worst:.3e} at rho={} x={}", g.rho[at.0], g.x[at.1]);

    println!("== filter distortion decomposition ==");
    let f = g.field_from_zr(|z, r| z * z - 0.3 * r * r + 0.1 * z);
    let ff = g.filter(&f);
    println!("distortion {:.3e}", (&ff.0 - &f.0).abs().max());
    // radial-only and angular-only
    let tail = g.resolution_tail(&f);
    println!("resolution tail {tail:.3e}");

    println!("== multiplicity log marker data ==");
    let mut prev = 0.0f64;
    for k in 4..=20 {
        let rho = 1.0 - 2f64.powi(-k);
        let (_, _, upp) = multiplicity_solution(rho, 0.0);
        let ratio = upp.abs() / (1.0f64 - rho).ln().abs();
        println!("k={k:2} rho={rho:.8} u''={upp:+.6e} |u''|/|log| = {ratio:.6} grow={}", upp.abs() > prev);
        prev = upp.abs();
    }
}
// appended: orthonormality check for (0,4) basis
