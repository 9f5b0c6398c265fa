//! The full verification campaign, as run by `ldplpp verify`.

use ldplpp::harness::{cmd_verify, Command, Params, RunConfig};

fn main() -> ldplpp::Result<()> {
    let cfg = RunConfig::new(Command::Verify, Params { seed: 1, ..Params::default() });
    let report = cmd_verify(&cfg, None)?;
    for c in &report.checks {
        println!("{:<40} {:?} cases={:<4} max deviation {:.2e}", c.name, c.status, c.cases, c.max_deviation);
    }
    println!("all passed: {}", report.passed);
    Ok(())
}
