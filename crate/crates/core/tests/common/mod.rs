#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use nangle_core::algcore::{build_algebra, parse_presentation, BasedAlgebra, HomSpace, Module};
use nangle_core::frobstab::Frobenius;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn load_algebra(name: &str) -> Arc<BasedAlgebra> {
    let text = std::fs::read_to_string(data_dir().join("presentations").join(name)).unwrap();
    Arc::new(build_algebra(&parse_presentation(&text).unwrap()).unwrap())
}

/// Cokernels of random maps between indecomposable projectives.
pub fn sample_modules(fr: &Frobenius, count: usize, seed: u64) -> Vec<Module> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = fr.algebra.field;
    let nv = fr.algebra.num_vertices();
    let mut out = Vec::new();
    while out.len() < count {
        let v = rng.gen_range(0..nv);
        let w = rng.gen_range(0..nv);
        let hs = HomSpace::new(&fr.projectives[w], &fr.projectives[v]);
        if hs.dim() == 0 {
            continue;
        }
        let c: Vec<u32> = (0..hs.dim()).map(|_| rng.gen_range(0..f.p())).collect();
        let (m, _) = hs.combine(&c).cokernel();
        if !m.is_zero() {
            out.push(m);
        }
    }
    out
}
