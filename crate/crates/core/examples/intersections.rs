//! Reads psi/kappa intersection numbers off a volume polynomial.

use wpvol::intersection::{compositions_up_to, extract_psi_kappa, reconstruct_volume};
use wpvol::{compute_volume, VolumeCache};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cache = VolumeCache::new();
    for (g, n) in [(1, 1), (0, 5), (2, 1), (1, 3)] {
        let v = compute_volume(g, n, &cache)?;
        let dim = (3 * g + n as u32) - 3;
        println!("M_({g},{n}), dimension {dim}:");
        for alpha in compositions_up_to(dim, n) {
            if alpha.windows(2).any(|w| w[0] > w[1]) {
                continue;
            }
            let rec = extract_psi_kappa(&v, &alpha)?;
            println!("  psi^{alpha:?} kappa^{} = {}", rec.m, rec.value);
        }
        assert_eq!(reconstruct_volume(g, n, &cache)?, *v);
    }
    println!("every volume above is rebuilt exactly from these numbers");
    Ok(())
}
