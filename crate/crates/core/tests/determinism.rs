//! Same config and seed give byte-identical artifacts, whatever the thread count.

use std::fs;
use std::path::Path;

use sepnet::harness::{cmd_sweep, cmd_train, RunConfig, FRONT_TEST, PHI_TRACE};

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

fn train(dir: &Path, seed: u64, threads: usize) -> (Vec<u8>, Vec<u8>) {
    let mut cfg = RunConfig { seed, out: dir.to_path_buf(), ..RunConfig::default() };
    cfg.seo.epochs = 8;
    in_pool(threads, || cmd_train(&cfg)).unwrap();
    (fs::read(dir.join(PHI_TRACE)).unwrap(), fs::read(dir.join(FRONT_TEST)).unwrap())
}

#[test]
fn train_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let a = train(&tmp.path().join("a"), 11, 1);
    let b = train(&tmp.path().join("b"), 11, 3);
    let c = train(&tmp.path().join("c"), 12, 1);
    assert_eq!(a, b);
    assert_ne!(a.1, c.1);
}

#[test]
fn sweep_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::default();
    cfg.seo.epochs = 2;
    cfg.sweep.seeds = vec![0, 1];
    let run = |name: &str, threads| {
        let out = tmp.path().join(name);
        in_pool(threads, || cmd_sweep(&cfg, &out)).unwrap();
        fs::read(out.join("sweep.csv")).unwrap()
    };
    assert_eq!(run("a", 1), run("b", 4));
}
