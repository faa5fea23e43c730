//! Timing probe: verify every cataloged model against its closed form.

use std::time::Instant;

use stringy_chi::catalog::builtin_models;
use stringy_chi::pipeline::verify_model;

fn main() {
    let cap: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(6);
    let total = Instant::now();
    for model in builtin_models() {
        if model.closed_form.is_none() {
            continue;
        }
        let t = Instant::now();
        let report = verify_model(&model, cap).expect("verification runs");
        println!(
            "{:6} cap {}  equal={}  {:?}  {:.2?}",
            model.gauge_label,
            cap,
            report.equal,
            report.first_mismatch,
            t.elapsed()
        );
    }
    println!("total {:.2?}", total.elapsed());
}
