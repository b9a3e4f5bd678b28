//! Enumerates trivalent ribbon graphs and checks Kontsevich's formula
//! against correlators computed from volumes. Pass `2 1` to try genus two
//! (about 34 million edge pairings; use --release).

use std::time::Instant;

use wpvol::kdv::build_table;
use wpvol::ribbon::{census_csv, enumerate_trivalent, kontsevich_check};
use wpvol::VolumeCache;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u32> = std::env::args().skip(1).map(|s| s.parse()).collect::<Result<_, _>>()?;
    let types: Vec<(u32, usize)> = match args[..] {
        [g, n] => vec![(g, n as usize)],
        _ => vec![(0, 3), (1, 1), (0, 4), (1, 2)],
    };
    let table = build_table(6, &VolumeCache::new())?;
    for (g, n) in types {
        let start = Instant::now();
        let classes = enumerate_trivalent(g, n)?;
        let weight: f64 = classes.iter().map(|c| 1.0 / c.aut as f64).sum();
        println!("({g},{n}): {} classes, sum 1/|Aut| = {weight:.6}", classes.len());
        if classes.len() <= 6 {
            print!("{}", census_csv(&classes));
        }
        for c in kontsevich_check(g, n, &table)?.checks {
            println!("  {c}");
        }
        println!("  {:.2?}", start.elapsed());
    }
    Ok(())
}
