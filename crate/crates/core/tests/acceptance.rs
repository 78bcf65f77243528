use std::process::ExitCode;
use std::time::Instant;

use sector_doubler::tolerance::Tolerances;
use sector_doubler::verify::run_suite;

fn main() -> ExitCode {
    let start = Instant::now();
    let report = run_suite(None, &Tolerances::default());
    for c in &report.criteria {
        println!("{} criterion {}: {} [{}]", if c.passed { "PASS" } else { "FAIL" }, c.id, c.name, c.scope.join(", "));
        for d in &c.details {
            println!("    {d}");
        }
    }
    println!("acceptance suite finished in {:.1}s", start.elapsed().as_secs_f64());
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
