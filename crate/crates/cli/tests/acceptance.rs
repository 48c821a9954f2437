//! Runs each reproduction criterion on its own and holds it to its runtime
//! limit. Prints one line per criterion.

use std::process::ExitCode;

use maxpair_cli::repro::CRITERIA;

fn main() -> ExitCode {
    let mut failed = 0;
    for c in &CRITERIA {
        let rec = c.run();
        let ok = rec.passed() && rec.within_bound();
        let slowest = rec.checks.iter().map(|k| k.elapsed).max().unwrap_or_default();
        println!(
            "criterion {:>2}: {} ({:.3} s, limit {} s, slowest check {:.3} s) {}",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            rec.elapsed.as_secs_f64(),
            c.bound.as_secs(),
            slowest.as_secs_f64(),
            c.description
        );
        for k in rec.checks.iter().filter(|k| !k.verdict.holds()) {
            println!("    failed check {}: {}", k.name, k.values);
        }
        if !rec.within_bound() {
            println!("    runtime limit exceeded");
        }
        failed += usize::from(!ok);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
