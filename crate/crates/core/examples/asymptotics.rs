//! Large-genus ratios as CSV, followed by bracket ratios and the growth
//! diagnostic.

use wpvol::asymptotics::{
    boundary_ratio_rows, bracket_ratio, check_boundary_trend, ratio_genus, rows_to_csv, zograf_conjecture_report,
};
use wpvol::VolumeCache;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cache = VolumeCache::new();
    print!("{}", rows_to_csv(&boundary_ratio_rows(2..=5, 0, &cache)?));
    for c in check_boundary_trend(2..=5, &cache)?.checks {
        println!("# {c}");
    }
    for (g, n) in [(2, 0), (3, 0), (2, 1)] {
        println!("# V_({g},{n})(0) / V_({},{})(0) = {:.6}", g - 1, n + 2, ratio_genus(g, n, &cache)?.value);
    }
    for (g, alpha) in [(1, vec![1]), (2, vec![1]), (3, vec![1]), (4, vec![1]), (5, vec![1])] {
        println!("# [tau_1]_{g} / V_({g},1)(0) = {:.6}", bracket_ratio(g, &alpha, &cache)?.value);
    }
    for g in 2..=5 {
        println!("# growth diagnostic g={g}: {:.6}", zograf_conjecture_report(g, 1, &cache)?);
    }
    Ok(())
}
