//! Runs every acceptance criterion, printing one verdict line each, and
//! exits non-zero if any fails.

use std::process::ExitCode;

use cusp_eta::verify::{run, CRITERIA};

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for (id, _) in CRITERIA {
        let result = run(id).expect("known criterion");
        println!("{result}");
        if !result.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
