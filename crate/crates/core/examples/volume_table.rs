//! Recomputes every row of the reference table and diffs it exactly.

use std::time::Instant;

use wpvol::intersection::closed_volume;
use wpvol::poly::render_symmetric;
use wpvol::reference::{reference_keys, reference_volume};
use wpvol::{compute_volume, VolumeCache};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cache = VolumeCache::new();
    let start = Instant::now();
    let mut mismatches = 0;
    for (g, n) in reference_keys() {
        let v = if n == 0 { closed_volume(g, &cache)? } else { (*compute_volume(g, n, &cache)?).clone() };
        let ok = Some(&v) == reference_volume(g, n).as_ref();
        mismatches += usize::from(!ok);
        let text = render_symmetric(&v.to_monomial_symmetric()?);
        let shown = if text.len() > 90 { format!("{}...", &text[..text.char_indices().nth(87).map_or(text.len(), |c| c.0)]) } else { text };
        println!("{} V_({g},{n}) = {shown}", if ok { "ok  " } else { "DIFF" });
    }
    println!("{mismatches} mismatches, {:.2?}", start.elapsed());
    Ok(())
}
