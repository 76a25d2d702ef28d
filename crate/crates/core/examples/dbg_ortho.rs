use cubicwave::grid::{Grid, GridSpec};
fn main() {
    for n in [12usize, 16, 20, 24, 32, 48] {
        let g = Grid::new(GridSpec::new(n, 10)).unwrap();
        let f = g.field_from_zr(|z, r| z * z + r * r);
        let dr = g.dr(&f);
        let dz = g.dz(&f);
        let mut wr = 0.0f64;
        let mut wz = 0.0f64;
        for i in 0..g.spec.n_r {
            for j in 0..g.spec.n_theta {
                let r = g.rho[i] * g.y[j];
                let z = g.rho[i] * g.x[j];
                wr = wr.max((dr.0[(i, j)] - 2.0 * r).abs());
                wz = wz.max((dz.0[(i, j)] - 2.0 * z).abs());
            }
        }
        // linear field
        let f = g.field_from_zr(|z, _| z);
        let d5 = g.dz(&f);
        let w5 = d5.0.iter().fold(0.0f64, |m, v| m.max((v - 1.0).abs()));
        println!("n_r={n}: dr err {wr:.2e}, dz err {wz:.2e}, d5(xi5) err {w5:.2e}");
    }
}
