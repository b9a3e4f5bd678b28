//! Runs every verification suite and prints a one-line summary per suite.

use std::time::Instant;

use wpvol::report::Status;
use wpvol::verify::{Suite, Verifier};
use wpvol::VolumeCache;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cache = VolumeCache::new();
    let verifier = Verifier::new(&cache, 6);
    let mut failed = false;
    for &(name, suite) in &Suite::NAMES[1..] {
        let start = Instant::now();
        let r = verifier.run(suite)?;
        failed |= r.count(Status::Fail) > 0;
        println!(
            "{name:<18} {:>5} pass {:>3} fail {:>5} inconclusive {:>3} skipped  {:.2?}",
            r.count(Status::Pass),
            r.count(Status::Fail),
            r.count(Status::Inconclusive),
            r.count(Status::Skipped),
            start.elapsed()
        );
        for f in r.failures().take(5) {
            println!("    {f}");
        }
    }
    if failed {
        std::process::exit(1);
    }
    Ok(())
}
