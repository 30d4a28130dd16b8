use std::panic;
use std::process::ExitCode;
use std::time::Instant;

use polylog_hodge_verify::CRITERIA;

fn main() -> ExitCode {
    let mut failed = 0;
    for (id, name, run) in CRITERIA {
        let start = Instant::now();
        let (pass, summary) = match panic::catch_unwind(run) {
            Ok(Ok(c)) => (c.pass, c.summary),
            Ok(Err(e)) => (false, format!("error: {e}")),
            Err(_) => (false, "panicked".to_string()),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {id} [{}] {name}: {summary} [{:.1} s]",
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria pass",
        CRITERIA.len() - failed,
        CRITERIA.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
