use opbar::acceptance::{run_criterion, CRITERIA};
use std::time::Instant;

fn main() {
    let max_arity = 5;
    let mut failed = Vec::new();
    for (id, _) in CRITERIA {
        let start = Instant::now();
        let r = run_criterion(id, max_arity);
        println!("{r} [{:.1}s]", start.elapsed().as_secs_f64());
        if !r.passed {
            failed.push(id);
        }
    }
    println!("acceptance: {} of {} criteria passed", CRITERIA.len() - failed.len(), CRITERIA.len());
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
