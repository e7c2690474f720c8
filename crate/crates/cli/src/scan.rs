//! Random monomial algebras and their chain verdicts.

use deloop_core::algebra::{Algebra, QuiverPresentation};
use deloop_core::homology::chain_report;
use deloop_core::linalg::Fp;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::format::AlgebraFile;
use crate::report::{algebra_info, AlgebraInfo, ChainVerdicts, End, Verdict, SCHEMA};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    pub count: usize,
    pub max_vertices: usize,
    pub max_arrows: usize,
    pub seed: u64,
    pub cutoff: usize,
    pub k: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { count: 100, max_vertices: 3, max_arrows: 4, seed: 0, cutoff: 32, k: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRecord {
    pub schema: &'static str,
    pub index: usize,
    pub seed: u64,
    pub cutoff: usize,
    pub algebra: AlgebraInfo,
    pub presentation: String,
    pub chain: ChainVerdicts,
    pub specimen: bool,
}

/// Seed for the `i`-th algebra of a scan; independent of the other indices.
pub fn index_seed(seed: u64, i: usize) -> u64 {
    seed ^ (i as u64).wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// A quiver with `1..=max_vertices` vertices and `1..=max_arrows` random
/// arrows, modulo all paths of length `L` in {2, 3} plus some random zero
/// relations of length 2.
pub fn random_monomial<R: Rng + ?Sized>(rng: &mut R, max_vertices: usize, max_arrows: usize) -> QuiverPresentation {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let arrows = rng.gen_range(1..=max_arrows.max(1));
    let l = rng.gen_range(2..=3);
    let mut q = QuiverPresentation::new((1..=n).map(|i| i.to_string()).collect(), l);
    for i in 0..arrows {
        let (s, t) = (rng.gen_range(0..n), rng.gen_range(0..n));
        q.add_arrow(&format!("a{}", i + 1), s, t);
    }
    if l == 3 {
        for a in 0..arrows {
            for b in 0..arrows {
                if q.arrows[a].target == q.arrows[b].source && rng.gen_bool(0.3) {
                    q.relations.push(vec![(1, vec![a, b])]);
                }
            }
        }
    }
    q.add_all_paths_of_length(l);
    q
}

/// A record is a specimen when its exact `dell` exceeds the `ddell` upper
/// bound, i.e. when `ddell < dell` is certified.
pub fn is_specimen(c: &ChainVerdicts) -> bool {
    let (Some(d), hi) = (exact_of(&c.dell), &c.ddell.hi) else { return false };
    matches!(hi, End::Finite(h) if *h < d)
}

fn exact_of(v: &Verdict) -> Option<usize> {
    match (v.kind, &v.lo) {
        ("exact", End::Finite(n)) => Some(*n),
        _ => None,
    }
}

pub fn scan_one(cfg: &ScanConfig, field: Fp, index: usize) -> ScanRecord {
    let seed = index_seed(cfg.seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = random_monomial(&mut rng, cfg.max_vertices, cfg.max_arrows);
    let alg = Algebra::from_quiver(&q, field).expect("monomial quivers with a length cap are admissible");
    let report = chain_report(&alg, cfg.cutoff, cfg.k, seed);
    let chain = ChainVerdicts::from(&report);
    let specimen = is_specimen(&chain);
    ScanRecord {
        schema: SCHEMA,
        index,
        seed,
        cutoff: cfg.cutoff,
        algebra: algebra_info(&alg),
        presentation: AlgebraFile::from_quiver(field, q).to_text(),
        chain,
        specimen,
    }
}

/// Evaluates the scan in parallel and hands records to `sink` in index order.
pub fn scan(cfg: &ScanConfig, field: Fp, mut sink: impl FnMut(ScanRecord)) {
    let chunk = rayon::current_num_threads().max(1) * 2;
    let mut start = 0;
    while start < cfg.count {
        let end = (start + chunk).min(cfg.count);
        let records: Vec<ScanRecord> = (start..end).into_par_iter().map(|i| scan_one(cfg, field, i)).collect();
        records.into_iter().for_each(&mut sink);
        start = end;
    }
}
