//! Zograf's sequence a_n against the constant terms of V_{0,n}.

use wpvol::zograf::{check_zograf, zograf_a};
use wpvol::VolumeCache;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cache = VolumeCache::new();
    for n in 3..=12 {
        print!("a_{n} = {}", zograf_a(n)?);
        if (4..=9).contains(&n) {
            print!("    {}", check_zograf(n, &cache)?);
        }
        println!();
    }
    Ok(())
}
