use wpvol::cache_file::{load, save, CacheFile};
use wpvol::recursion::compute_up_to_level;
use wpvol::verify::{Suite, Verifier};
use wpvol::VolumeCache;

#[test]
fn save_load_verify_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("volumes.json");

    let cache = VolumeCache::new();
    compute_up_to_level(4, &cache).unwrap();
    let before = Verifier::new(&cache, 4).run(Suite::StringDilaton).unwrap();
    save(&path, &cache).unwrap();

    let reloaded = VolumeCache::new();
    assert_eq!(load(&path, &reloaded).unwrap(), cache.len());
    for (g, n) in cache.keys() {
        assert_eq!(cache.get(g, n), reloaded.get(g, n));
    }
    let after = Verifier::new(&reloaded, 4).run(Suite::StringDilaton).unwrap();
    assert_eq!(before.checks, after.checks);

    let again = CacheFile::from_cache(&reloaded).to_json().unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), again);
}
