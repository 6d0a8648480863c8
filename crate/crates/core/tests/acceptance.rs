use std::process::ExitCode;

use hilbloc::verify::run_all;
use hilbloc::LimitOptions;

fn main() -> ExitCode {
    let reports = run_all(&LimitOptions::default());
    for r in &reports {
        println!("{r}");
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("acceptance: {} passed, {failed} failed", reports.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
