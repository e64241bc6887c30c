use std::process::ExitCode;

use fano_core::selftest::{run_all, CRITERIA};

fn main() -> ExitCode {
    let results = run_all();
    assert_eq!(results.len(), CRITERIA.len());
    for r in &results {
        match &r.failure {
            None => println!("acceptance {}: PASS  {} ({} cases)", r.id, r.name, r.cases),
            Some(why) => println!("acceptance {}: FAIL  {}: {why}", r.id, r.name),
        }
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
