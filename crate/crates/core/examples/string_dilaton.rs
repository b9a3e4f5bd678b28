//! Identities at L = 2 pi i: string, dilaton, the second-derivative
//! relation, and closed volumes obtained from V_{g,1}.

use wpvol::intersection::{check_second_derivative, check_string_dilaton_volume, closed_volume};
use wpvol::poly::render_symmetric;
use wpvol::VolumeCache;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cache = VolumeCache::new();
    for (g, n) in [(0, 3), (1, 1), (1, 2), (2, 1), (0, 5)] {
        for c in check_string_dilaton_volume(g, n, &cache)?.checks {
            println!("{c}");
        }
        println!("{}", check_second_derivative(g, n, &cache)?);
    }
    for g in 1..=5 {
        for c in check_string_dilaton_volume(g, 0, &cache)?.checks {
            println!("{c}");
        }
    }
    for g in 2..=5 {
        let v = closed_volume(g, &cache)?;
        println!("V_({g},0) = {}", render_symmetric(&v.to_monomial_symmetric()?));
    }
    Ok(())
}
