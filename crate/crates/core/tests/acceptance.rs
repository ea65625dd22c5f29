//! Prints one line per acceptance criterion and fails if any criterion
//! fails or overruns its time limit.

use engelkit::reproduce::run_criterion;

fn main() {
    let mut failed = Vec::new();
    for id in 1..=9 {
        let r = run_criterion(id);
        println!("{}", r.line());
        if !r.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 9 criteria passed");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
