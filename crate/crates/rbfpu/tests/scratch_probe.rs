use rbfpu::{run_benchmark, ExperimentConfig};

#[test]
fn probe_table() {
    let config = ExperimentConfig {
        sizes: vec![289, 1089],
        ..ExperimentConfig::default()
    };
    let t = std::time::Instant::now();
    let rows = run_benchmark(&config).unwrap();
    for row in &rows {
        match &row.outcome {
            Ok(m) => println!(
                "N={}: rmse_var={:.3e} mae_var={:.3e} rmse_fixed={:.3e} mae_fixed={:.3e} ({:.2}s var, {:.2}s fixed)",
                row.n, m.rmse_var, m.mae_var, m.rmse_fixed, m.mae_fixed, m.seconds_var, m.seconds_fixed
            ),
            Err(e) => println!("N={}: ERROR {e}", row.n),
        }
    }
    println!("total {:.2}s", t.elapsed().as_secs_f64());
}
