use std::time::Instant;

use cubicwave::energy;
use cubicwave::evolution::{self, EvolutionConfig, ModulationTools, Perturbation, Stepper};
use cubicwave::grid::{Grid, GridSpec};
use cubicwave::operators;

fn main() {
    // dissipativity sample at N_r = 64
    let t0 = Instant::now();
    let g = Grid::new(GridSpec::new(64, 12)).unwrap();
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let u = cubicwave::grid::FieldPair {
        first: energy::sample_poly_terms(&g, &energy::random_axisymmetric_terms(&mut rng, 5)),
        second: energy::sample_poly_terms(&g, &energy::random_axisymmetric_terms(&mut rng, 5)),
    };
    let r = energy::dissipativity_report(&g, &u).unwrap();
    println!(
        "dissipativity one sample at 64x12: {:.3}s margins {:?} id5 {:.2e} full {:.2e}",
        t0.elapsed().as_secs_f64(),
        r.margins,
        r.identity5,
        r.full_margin
    );

    // radial spectra l = 0..4 at N_r = 64 with refinement
    let t0 = Instant::now();
    for l in 0..=4 {
        let pts = operators::radial_sector_spectrum(64, l, 1e-4).unwrap();
        let uns: Vec<_> = pts
            .iter()
            .filter(|p| p.converged && p.lambda.re > -0.5)
            .map(|p| p.lambda)
            .collect();
        println!("  radial l={l}: unstable converged {uns:?}");
    }
    println!("radial spectra 0..4 at 64/96: {:.3}s", t0.elapsed().as_secs_f64());

    // 2D spectrum at alpha = 0.1
    let t0 = Instant::now();
    let pts = operators::full_spectrum(64, 8, 0.1, 1e-4, -0.5).unwrap();
    let uns: Vec<_> = pts
        .iter()
        .filter(|p| p.converged && p.lambda.re > -0.5)
        .map(|p| (p.lambda, p.l))
        .collect();
    println!("2d spectrum 64x8 vs 96x8 alpha=0.1: {:.3}s, unstable {uns:?}", t0.elapsed().as_secs_f64());

    // evolution speed at 48x12
    let g = Grid::new(GridSpec::new(48, 12)).unwrap();
    let t0 = Instant::now();
    let tools = ModulationTools::new(&g).unwrap();
    println!("modulation tools at 48x12: {:.3}s", t0.elapsed().as_secs_f64());
    let cfg = EvolutionConfig::default();
    let stepper = Stepper::new(&g, &cfg);
    println!("dt = {:.3e}", stepper.dt);
    let t0 = Instant::now();
    let data = evolution::prepare_initial_data(
        &g,
        1.0,
        Perturbation::RadialGaussian { amp: 1e-3, width: 0.5 },
    )
    .unwrap();
    let trace = evolution::evolve(&g, &tools, &stepper, &data, &cfg, false).unwrap();
    println!(
        "one classification run to tau=10 at 48x12: {:.3}s ({} rows, p_end {:.3e}, alpha_end {:.3e})",
        t0.elapsed().as_secs_f64(),
        trace.rows.len(),
        trace.rows.last().unwrap().p,
        trace.rows.last().unwrap().alpha,
    );
    let t0 = Instant::now();
    let trace = evolution::evolve(&g, &tools, &stepper, &data, &cfg, true).unwrap();
    let (rate, q) = evolution::fit_decay_rate(&trace, (2.0, 8.0)).unwrap();
    println!(
        "full-norm run: {:.3}s, fit rate {rate:.4} (q {q:.2e})",
        t0.elapsed().as_secs_f64()
    );
}
