//! Saves computed volumes to a JSON cache, reloads them into a fresh cache
//! and checks nothing changed.

use wpvol::cache_file::{load, save};
use wpvol::recursion::compute_up_to_level;
use wpvol::VolumeCache;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::temp_dir().join("wpvol-example-cache.json");
    let cache = VolumeCache::new();
    compute_up_to_level(5, &cache)?;
    save(&path, &cache)?;
    let first = std::fs::read(&path)?;

    let reloaded = VolumeCache::new();
    let count = load(&path, &reloaded)?;
    save(&path, &reloaded)?;
    let second = std::fs::read(&path)?;

    println!("{count} volumes, {} bytes, identical after reload: {}", first.len(), first == second);
    std::fs::remove_file(&path)?;
    Ok(())
}
