//! Computes one volume polynomial and evaluates it at a few boundary lengths.
//!
//!     cargo run --release --example compute_volume -- 2 2

use wpvol::poly::render_symmetric;
use wpvol::{compute_volume, VolumeCache};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let g: u32 = args.first().map_or(Ok(1), |s| s.parse())?;
    let n: usize = args.get(1).map_or(Ok(2), |s| s.parse())?;

    let cache = VolumeCache::new();
    let v = compute_volume(g, n, &cache)?;
    println!("V_({g},{n}) = {}", render_symmetric(&v.to_monomial_symmetric()?));
    println!("{} monomials in (p, x_1..x_{n})", v.len());

    let pi = std::f64::consts::PI;
    for l in [0.0, 1.0, 5.0] {
        let lengths = vec![l; n];
        println!("  L = ({l}, ...): {:.6e}", v.eval_numeric(&lengths, pi)?);
    }
    Ok(())
}
