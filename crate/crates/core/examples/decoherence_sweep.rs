use std::time::Instant;

use chronologic::scenarios::decoherence_sweep;

fn main() {
    let n_max: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(8);
    let coupling = std::f64::consts::FRAC_PI_4;
    let start = Instant::now();
    let points = decoherence_sweep(n_max, coupling).expect("sweep");
    println!("{:>5}  {:>22}  {:>22}", "n_env", "max violation", "cos^n(coupling)");
    for p in &points {
        println!("{:>5}  {:>22.15e}  {:>22.15e}", p.n_env, p.max_violation, coupling.cos().powi(p.n_env as i32));
    }
    println!("elapsed: {:.2?}", start.elapsed());
}
