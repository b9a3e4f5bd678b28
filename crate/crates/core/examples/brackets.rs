//! Normalised coefficients [tau_alpha]_{g,n} and the all-positive form of
//! the recursion they satisfy.

use wpvol::intersection::{bracket_norm, check_bracket_recursion, BRACKET_WEIGHTS};
use wpvol::VolumeCache;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cache = VolumeCache::new();
    println!("weights (non-separating, separating, boundary) = {BRACKET_WEIGHTS:?}");
    let cases: [(u32, &[u32]); 6] = [(1, &[1]), (1, &[0]), (2, &[4]), (2, &[1]), (0, &[0, 0, 0, 0]), (1, &[0, 1])];
    for (g, alpha) in cases {
        let signed: Vec<i64> = alpha.iter().map(|&a| a as i64).collect();
        let b = bracket_norm(g as i64, &signed, &cache)?;
        println!("[tau {alpha:?}]_{g} = {b}    {}", check_bracket_recursion(g, alpha, &cache)?);
    }
    Ok(())
}
