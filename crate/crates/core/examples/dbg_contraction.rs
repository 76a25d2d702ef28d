use cubicwave::grid::{Grid, GridSpec};
use cubicwave::poly::axisymmetric_poly;

fn main() {
    let g = Grid::new(GridSpec::new(14, 12)).unwrap();
    let hf = [(3u16, 0u16, 1.0), (1, 1, 2.0), (0, 2, -1.0), (2, 1, 1.0), (0, 1, 0.5)];
    let hg = [(2u16, 1u16, 1.0), (1, 0, -3.0), (0, 2, 1.0), (4, 0, 1.0)];
    let pf_a = axisymmetric_poly(5, &hf);
    let pg_a = axisymmetric_poly(5, &hg);
    let f = g.field_from_zr(|z, r| {
        let s = r * r;
        z.powi(3) + 2.0 * z * s - s * s + z * z * s + 0.5 * s
    });
    let h = g.field_from_zr(|z, r| {
        let s = r * r;
        z * z * s - 3.0 * z + s * s + z.powi(4)
    });
    // sanity: fields match polynomials pointwise
    let mut worst = 0.0f64;
    for i in 0..g.spec.n_r {
        for j in 0..g.spec.n_theta {
            let z = g.rho[i] * g.x[j];
            let r = g.rho[i] * g.y[j];
            let pt = [r, 0.0, 0.0, 0.0, z];
            worst = worst.max((f.0[(i, j)] - pf_a.eval(&pt)).abs());
            worst = worst.max((h.0[(i, j)] - pg_a.eval(&pt)).abs());
        }
    }
    println!("pointwise field-vs-poly max diff: {worst:.3e}");
    let pf = g.partials(&f);
    let ph = g.partials(&h);
    for k in 0..=3usize {
        let idx: Vec<Vec<usize>> = match k {
            0 => vec![vec![]],
            1 => (0..5).map(|i| vec![i]).collect(),
            2 => (0..5).flat_map(|i| (0..5).map(move |j| vec![i, j])).collect(),
            3 => (0..5)
                .flat_map(|i| (0..5).flat_map(move |j| (0..5).map(move |l| vec![i, j, l])))
                .collect(),
            _ => unreachable!(),
        };
        let mut oracle = cubicwave::poly::MultiPoly::zero(5);
        for tuple in idx {
            let mut df = pf_a.clone();
            let mut dg = pg_a.clone();
            for &v in &tuple {
                df = df.deriv(v);
                dg = dg.deriv(v);
            }
            oracle = oracle.add(&df.mul(&dg));
        }
        let want = oracle.ball_integral();
        let got = g.ball_integral(&g.contraction(k, &pf, &ph));
        println!("k={k}: grid {got:.12e} oracle {want:.12e} rel {:.2e}", ((got - want) / want).abs());
        // pointwise compare at an interior node
        let (i, j) = (7, 5);
        let z = g.rho[i] * g.x[j];
        let r = g.rho[i] * g.y[j];
        let pt = [r, 0.0, 0.0, 0.0, z];
        let c = g.contraction(k, &pf, &ph);
        println!("   pointwise at node: grid {:.8e} oracle {:.8e}", c.0[(i, j)], oracle.eval(&pt));
    }
}
