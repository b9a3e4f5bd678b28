//! Builds the correlator table and checks KdV and Virasoro coefficientwise.

use wpvol::kdv::{build_table, check_correlator_string_dilaton, check_kdv_all, check_virasoro_all, format_monomial};
use wpvol::report::{Report, Status};
use wpvol::VolumeCache;

fn summary(name: &str, r: &Report) {
    println!(
        "{name}: {} pass, {} fail, {} inconclusive",
        r.count(Status::Pass),
        r.count(Status::Fail),
        r.count(Status::Inconclusive)
    );
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let level = std::env::args().nth(1).map_or(Ok(6), |s| s.parse())?;
    let table = build_table(level, &VolumeCache::new())?;
    println!("{} correlators up to level {level}", table.len());
    for (counts, v) in table.entries().take(8) {
        println!("  <{}> = {v}", format_monomial(counts).replace('t', "τ"));
    }
    summary("string/dilaton", &check_correlator_string_dilaton(&table));
    summary("KdV", &check_kdv_all(level, &table));
    for n in -1..=2 {
        summary(&format!("L_{n}"), &check_virasoro_all(&[n], &table)?);
    }
    Ok(())
}
