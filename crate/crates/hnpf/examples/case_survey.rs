//! Full-scale survey of the built-in cases: runs each named case with the
//! default sampling budget and prints extraction metrics, including the
//! geometric quality of the recovered fronts where those are known.
//!
//! Usage: `cargo run --example case_survey -- [CASE ...] [--threshold T]`
//! With no case arguments, surveys I, II, III, IV and both fair-search
//! variants (V is the 30-variable stress case; add it explicitly if wanted).

use std::time::Instant;

use hnpf::filter::oracle_filter;
use hnpf::pipeline::{resolve_case, run_case, RunConfig};

fn main() {
    let mut cases: Vec<String> = Vec::new();
    let mut threshold: Option<f64> = None;
    let mut bins: Option<usize> = None;
    let mut hard = false;
    let mut args = std::env::args().skip(1);
    while let Some(arg) = args.next() {
        if arg == "--threshold" {
            let value = args.next().expect("--threshold needs a value");
            threshold = Some(value.parse().expect("threshold must be a number"));
        } else if arg == "--bins" {
            let value = args.next().expect("--bins needs a value");
            bins = Some(value.parse().expect("bins must be an integer"));
        } else if arg == "--hard" {
            hard = true;
        } else {
            cases.push(arg);
        }
    }
    if cases.is_empty() {
        cases = [
            "I",
            "II",
            "III",
            "IV",
            "fair-search-uniform",
            "fair-search-binomial",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
    }

    let tmp = std::env::temp_dir().join("hnpf-case-survey");
    for case in &cases {
        let mut config = RunConfig::default();
        config.case = case.clone();
        if let Some(t) = threshold {
            config.train.threshold = t;
        }
        if let Some(b) = bins {
            config.filter.bins = b;
        }
        if hard {
            config.train.label_mode = hnpf::LabelMode::Hard;
        }
        let started = Instant::now();
        let out_dir = tmp.join(format!("case-{}", case.to_ascii_lowercase()));
        let artifact = match run_case(&config, &out_dir) {
            Ok(a) => a,
            Err(e) => {
                println!("case {case}: FAILED: {e}");
                continue;
            }
        };
        let problem = resolve_case(case).expect("case resolved before").problem;
        println!(
            "case {case}: {:.1}s, weak {}, strong {}, density {:.4}%",
            started.elapsed().as_secs_f64(),
            artifact.weak.points.len(),
            artifact.strong.points.len(),
            artifact.density.density_percent
        );
        println!(
            "  train: best epoch {} of {}, val loss {:.6} (initial {:.6})",
            artifact.train_report.best_epoch,
            artifact.train_report.epochs_run,
            artifact.train_report.best_val_loss(),
            artifact.train_report.initial_val_loss
        );
        if let Some(fe) = &artifact.front_error {
            println!("  {fe}");
        }

        // Case-specific structure of the strong set.
        let strong = &artifact.strong.points;
        match case.as_str() {
            "I" => {
                let near = strong
                    .iter()
                    .filter(|p| (p.x[0] - p.x[1]).abs() <= 0.05)
                    .count();
                let inside = strong
                    .iter()
                    .filter(|p| p.x.iter().all(|v| v.abs() <= 1.0 / f64::sqrt(2.0) + 1e-12))
                    .count();
                println!(
                    "  |x1-x2|<=0.05: {}/{} ({:.2}%), in box: {}/{}",
                    near,
                    strong.len(),
                    100.0 * near as f64 / strong.len() as f64,
                    inside,
                    strong.len()
                );
            }
            "II" => {
                let near = strong.iter().filter(|p| p.x[1].abs() <= 0.05).count();
                println!(
                    "  |x2|<=0.05: {}/{} ({:.2}%)",
                    near,
                    strong.len(),
                    100.0 * near as f64 / strong.len() as f64
                );
            }
            "III" | "IV" => {
                let survivors = oracle_filter(&artifact.weak).expect("oracle filter");
                println!(
                    "  weak set: {} points, oracle keeps {} (removes {})",
                    artifact.weak.points.len(),
                    survivors.points.len(),
                    artifact.weak.points.len() - survivors.points.len()
                );
                let strong_vals: Vec<Vec<f64>> = strong.iter().map(|p| p.fx.clone()).collect();
                let (idx, _) =
                    hnpf::filter::oracle_filter_values(&strong_vals).expect("oracle on strong");
                println!(
                    "  oracle removes {} additional points from the strong set",
                    strong.len() - idx.len()
                );
            }
            name if name.starts_with("fair-search") => {
                let shown: Vec<Vec<f64>> = strong
                    .iter()
                    .map(|p| problem.display_objectives(&p.fx))
                    .collect();
                println!("  strong display objectives: {shown:?}");
                let weak_g24: Vec<f64> = artifact
                    .weak
                    .points
                    .iter()
                    .filter(|p| p.x[1] == 24.0)
                    .map(|p| p.x[0])
                    .collect();
                let max_r = artifact
                    .weak
                    .points
                    .iter()
                    .map(|p| p.x[0])
                    .fold(f64::NEG_INFINITY, f64::max);
                println!(
                    "  weak points at G=24: {} (R from {:?} to {:?}), max R anywhere: {max_r}",
                    weak_g24.len(),
                    weak_g24.iter().cloned().fold(f64::INFINITY, f64::min),
                    weak_g24.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                );
            }
            _ => {}
        }
    }
}
