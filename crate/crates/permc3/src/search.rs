//! Exhaustive survey of staircase Toffoli circuits. Circuits on n qubits are
//! C(n,3)-bit masks over the valid triples in a fixed order, classified
//! through their multiplication tables: associativity decides C₃ membership
//! and the triple-product scan decides semi-Cliffordness. Shards are fixed
//! high-bit prefixes of the mask space, so work splits evenly, resumes from
//! a checkpoint, and aggregates in shard order no matter how many workers
//! ran.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use serde::Serialize;
use thiserror::Error;

use crate::descmult::from_staircase;
use crate::family::uk_circuit;
use crate::permgate::{Toffoli, ToffoliCircuit};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("n = {0} out of the supported survey range")]
    BadN(usize),
    #[error("bad shard spec: {0}")]
    BadShardSpec(String),
    #[error("corrupt checkpoint: {0}")]
    CorruptCheckpoint(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Valid staircase triples (i < j < k ≤ n) in the canonical enumeration
/// order: lexicographic on (k, i, j). Bit b of a circuit mask selects
/// `triples(n)[b]`.
pub fn triples(n: usize) -> Vec<Toffoli> {
    let mut out = Vec::new();
    for k in 3..=n {
        for i in 1..k {
            for j in (i + 1)..k {
                out.push(Toffoli::new(i, j, k));
            }
        }
    }
    out
}

/// The circuit selected by `mask` in the canonical triple order; gates come
/// out sorted by target, hence in staircase order.
pub fn circuit_from_mask(n: usize, mask: u64) -> ToffoliCircuit {
    let ts = triples(n);
    let gates = ts
        .iter()
        .enumerate()
        .filter(|(b, _)| (mask >> *b) & 1 == 1)
        .map(|(_, t)| *t)
        .collect();
    ToffoliCircuit::new(gates)
}

/// Lazy enumeration of every staircase circuit on n qubits, 3 ≤ n ≤ 7.
pub fn enumerate_staircase(n: usize) -> impl Iterator<Item = ToffoliCircuit> {
    assert!((3..=7).contains(&n), "enumeration supported for 3 <= n <= 7");
    let count = 1u64 << triples(n).len();
    (0..count).map(move |mask| circuit_from_mask(n, mask))
}

fn pidx(n: usize, i: usize, j: usize) -> usize {
    (i - 1) * n - i * (i - 1) / 2 + (j - i - 1)
}

/// eᵢ·v over a raw table (component i of a vector is bit i−1).
fn row_mul(n: usize, table: &[u64], i: usize, v: u64) -> u64 {
    let mut acc = 0u64;
    let mut bits = v;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize + 1;
        bits &= bits - 1;
        if j != i {
            acc ^= table[pidx(n, i.min(j), i.max(j))];
        }
    }
    acc
}

/// Classification of one staircase circuit from its raw table:
/// (associative i.e. in C₃, all triple products zero i.e. semi-Clifford).
fn classify_table(n: usize, table: &[u64]) -> (bool, bool) {
    for i in 1..=n {
        for j in (i + 1)..=n {
            let tij = table[pidx(n, i, j)];
            if tij != 0 {
                // e_i(e_i e_j) = (e_i e_i)e_j = 0 and its mirror.
                if row_mul(n, table, i, tij) != 0 || row_mul(n, table, j, tij) != 0 {
                    return (false, false);
                }
            }
            for k in (j + 1)..=n {
                // All three pair-then-third groupings must agree.
                let jk_i = row_mul(n, table, i, table[pidx(n, j, k)]);
                let ij_k = row_mul(n, table, k, tij);
                if jk_i != ij_k || row_mul(n, table, j, table[pidx(n, i, k)]) != ij_k {
                    return (false, false);
                }
            }
        }
    }
    for i in 1..=n {
        for j in (i + 1)..=n {
            let tij = table[pidx(n, i, j)];
            if tij == 0 {
                continue;
            }
            for k in (j + 1)..=n {
                if row_mul(n, table, k, tij) != 0 {
                    return (true, false);
                }
            }
        }
    }
    (true, true)
}

fn table_from_mask(n: usize, ts: &[Toffoli], mask: u64, table: &mut [u64]) {
    table.fill(0);
    let mut bits = mask;
    while bits != 0 {
        let b = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let t = ts[b];
        let (i, j) = t.controls();
        table[pidx(n, i, j)] |= 1u64 << (t.target() - 1);
    }
}

/// Classify one circuit mask; shared by the survey and the sampler.
pub fn classify_mask(n: usize, mask: u64) -> (bool, bool) {
    let ts = triples(n);
    let mut table = vec![0u64; n * (n - 1) / 2];
    table_from_mask(n, &ts, mask, &mut table);
    classify_table(n, &table)
}

/// Per-shard tallies; `total` is the shard's mask count.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ShardCounts {
    pub shard: u32,
    pub total: u64,
    pub in_c3: u64,
    pub semi_clifford_c3: u64,
}

/// Survey result: the classification tallies plus the shard manifest.
#[derive(Clone, Debug, Serialize)]
pub struct SurveyReport {
    pub n: usize,
    pub total: u64,
    pub in_c3: u64,
    pub semi_clifford_c3: u64,
    pub non_sc_c3: u64,
    pub elapsed_ms: u64,
    pub shards: u32,
    pub per_shard: Vec<ShardCounts>,
}

/// Process one shard: the masks whose top log₂(shards) bits equal `shard`.
pub fn process_shard(n: usize, shards: u32, shard: u32) -> ShardCounts {
    let ts = triples(n);
    let t_bits = ts.len() as u32;
    let prefix_bits = shards.trailing_zeros();
    let span = 1u64 << (t_bits - prefix_bits);
    let start = span * shard as u64;
    let mut counts = ShardCounts { shard, total: span, ..Default::default() };
    let mut table = vec![0u64; n * (n - 1) / 2];
    for mask in start..start + span {
        table_from_mask(n, &ts, mask, &mut table);
        let (in_c3, sc) = classify_table(n, &table);
        counts.in_c3 += u64::from(in_c3);
        counts.semi_clifford_c3 += u64::from(in_c3 && sc);
    }
    counts
}

const CHECKPOINT_MAGIC: &[u8; 8] = b"PC3SVY1\0";

/// Resumable survey state: which shards are done and their counts.
/// Serialized with a versioned header and fixed-width little-endian fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub n: usize,
    pub shards: u32,
    pub done: Vec<bool>,
    pub counts: Vec<ShardCounts>,
}

impl Checkpoint {
    pub fn new(n: usize, shards: u32) -> Self {
        Checkpoint {
            n,
            shards,
            done: vec![false; shards as usize],
            counts: (0..shards).map(|shard| ShardCounts { shard, ..Default::default() }).collect(),
        }
    }

    pub fn save(&self, path: &Path) -> Result<(), SearchError> {
        let mut buf = Vec::new();
        buf.extend_from_slice(CHECKPOINT_MAGIC);
        buf.extend_from_slice(&(self.n as u32).to_le_bytes());
        buf.extend_from_slice(&self.shards.to_le_bytes());
        let mut bitmap = vec![0u8; (self.shards as usize).div_ceil(8)];
        for (s, &d) in self.done.iter().enumerate() {
            if d {
                bitmap[s / 8] |= 1 << (s % 8);
            }
        }
        buf.extend_from_slice(&bitmap);
        for c in &self.counts {
            buf.extend_from_slice(&c.total.to_le_bytes());
            buf.extend_from_slice(&c.in_c3.to_le_bytes());
            buf.extend_from_slice(&c.semi_clifford_c3.to_le_bytes());
        }
        // Write-then-rename so a kill mid-save leaves the old file intact.
        let tmp = path.with_extension("tmp");
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&buf)?;
        f.sync_all()?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, SearchError> {
        let corrupt = |what: &str| SearchError::CorruptCheckpoint(what.to_string());
        let buf = fs::read(path)?;
        if buf.len() < 16 || &buf[..8] != CHECKPOINT_MAGIC {
            return Err(corrupt("bad magic"));
        }
        let n = u32::from_le_bytes(buf[8..12].try_into().unwrap()) as usize;
        let shards = u32::from_le_bytes(buf[12..16].try_into().unwrap());
        let bitmap_len = (shards as usize).div_ceil(8);
        let expect = 16 + bitmap_len + shards as usize * 24;
        if buf.len() != expect {
            return Err(corrupt("truncated"));
        }
        let mut done = vec![false; shards as usize];
        for (s, d) in done.iter_mut().enumerate() {
            *d = (buf[16 + s / 8] >> (s % 8)) & 1 == 1;
        }
        let mut counts = Vec::with_capacity(shards as usize);
        let mut off = 16 + bitmap_len;
        for shard in 0..shards {
            let rd = |o: usize| u64::from_le_bytes(buf[o..o + 8].try_into().unwrap());
            counts.push(ShardCounts {
                shard,
                total: rd(off),
                in_c3: rd(off + 8),
                semi_clifford_c3: rd(off + 16),
            });
            off += 24;
        }
        Ok(Checkpoint { n, shards, done, counts })
    }
}

#[derive(Clone, Debug, Default)]
pub struct SurveyOptions {
    /// Power of two, at most 2^C(n,3); 0 picks a default.
    pub shards: u32,
    pub checkpoint: Option<PathBuf>,
    /// Worker threads; 0 uses the available parallelism.
    pub threads: usize,
}

/// Classify every staircase circuit on n qubits, 3 ≤ n ≤ 6.
///
/// Deterministic: totals are sums over the fixed shard decomposition and do
/// not depend on thread count or resume pattern.
pub fn survey(n: usize, opts: &SurveyOptions) -> Result<SurveyReport, SearchError> {
    if !(3..=6).contains(&n) {
        return Err(SearchError::BadN(n));
    }
    let start = Instant::now();
    let t_bits = triples(n).len() as u32;
    let shards = if opts.shards == 0 { (1u32 << t_bits.min(4)).min(16) } else { opts.shards };
    if !shards.is_power_of_two() || shards as u64 > (1u64 << t_bits) {
        return Err(SearchError::BadShardSpec(format!(
            "shards must be a power of two at most 2^{t_bits}, got {shards}"
        )));
    }

    let mut cp = match &opts.checkpoint {
        Some(path) if path.exists() => {
            let cp = Checkpoint::load(path)?;
            if cp.n != n || cp.shards != shards {
                return Err(SearchError::CorruptCheckpoint(format!(
                    "checkpoint is for n={}, shards={}",
                    cp.n, cp.shards
                )));
            }
            cp
        }
        _ => Checkpoint::new(n, shards),
    };

    let pending: Vec<u32> = (0..shards).filter(|&s| !cp.done[s as usize]).collect();
    let threads = if opts.threads == 0 {
        std::thread::available_parallelism().map_or(1, |p| p.get())
    } else {
        opts.threads
    }
    .min(pending.len().max(1));

    let next = AtomicUsize::new(0);
    let state = Mutex::new((&mut cp, opts.checkpoint.as_deref()));
    std::thread::scope(|scope| -> Result<(), SearchError> {
        let mut handles = Vec::new();
        for _ in 0..threads {
            handles.push(scope.spawn(|| -> Result<(), SearchError> {
                loop {
                    let idx = next.fetch_add(1, Ordering::Relaxed);
                    let Some(&shard) = pending.get(idx) else {
                        return Ok(());
                    };
                    let counts = process_shard(n, shards, shard);
                    let mut guard = state.lock().unwrap();
                    let (cp, path) = &mut *guard;
                    cp.counts[shard as usize] = counts;
                    cp.done[shard as usize] = true;
                    if let Some(p) = path {
                        cp.save(p)?;
                    }
                }
            }));
        }
        for h in handles {
            h.join().expect("worker panicked")?;
        }
        Ok(())
    })?;

    let total: u64 = cp.counts.iter().map(|c| c.total).sum();
    let in_c3: u64 = cp.counts.iter().map(|c| c.in_c3).sum();
    let sc: u64 = cp.counts.iter().map(|c| c.semi_clifford_c3).sum();
    Ok(SurveyReport {
        n,
        total,
        in_c3,
        semi_clifford_c3: sc,
        non_sc_c3: in_c3 - sc,
        elapsed_ms: start.elapsed().as_millis() as u64,
        shards,
        per_shard: cp.counts,
    })
}

/// Random-sample report for sizes where full enumeration is out of reach.
#[derive(Clone, Debug, Serialize)]
pub struct SampleReport {
    pub n: usize,
    pub sampled: u64,
    pub in_c3: u64,
    pub semi_clifford_c3: u64,
    pub non_sc_c3: u64,
    pub seed: u64,
    pub elapsed_ms: u64,
}

/// Classify `budget` uniform random staircase circuits on n qubits (meant
/// for n = 7, where the full space has 2³⁵ masks).
pub fn survey_sample(n: usize, budget: u64, seed: u64) -> Result<SampleReport, SearchError> {
    if !(3..=7).contains(&n) {
        return Err(SearchError::BadN(n));
    }
    let start = Instant::now();
    let ts = triples(n);
    let mask_bits = ts.len() as u32;
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut table = vec![0u64; n * (n - 1) / 2];
    let mut in_c3 = 0u64;
    let mut sc = 0u64;
    for _ in 0..budget {
        let mask = rng.random::<u64>() & ((1u64 << mask_bits) - 1);
        table_from_mask(n, &ts, mask, &mut table);
        let (c3, triple_free) = classify_table(n, &table);
        in_c3 += u64::from(c3);
        sc += u64::from(c3 && triple_free);
    }
    Ok(SampleReport {
        n,
        sampled: budget,
        in_c3,
        semi_clifford_c3: sc,
        non_sc_c3: in_c3 - sc,
        seed,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// A staircase circuit on 7 qubits that is in C₃ with a nonzero triple
/// product: the 7-qubit member of the U_k family, checked rather than
/// searched for.
pub fn find_witness() -> ToffoliCircuit {
    let circuit = uk_circuit(3);
    let table = from_staircase(&circuit, 7).expect("staircase");
    assert!(table.is_associative().is_ok(), "witness must be in C3");
    assert!(!table.all_triples_zero().expect("associative"), "witness must be non-semi-Clifford");
    circuit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2core::F2Vec;

    #[test]
    fn triple_order_is_lex_on_target() {
        let ts = triples(4);
        let listed: Vec<(usize, usize, usize)> =
            ts.iter().map(|t| (t.target(), t.controls().0, t.controls().1)).collect();
        let mut sorted = listed.clone();
        sorted.sort();
        assert_eq!(listed, sorted);
        assert_eq!(ts.len(), 4);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_staircase(3).count(), 2);
        assert_eq!(enumerate_staircase(4).count(), 16);
        assert_eq!(triples(6).len(), 20, "2^20 circuits at n=6");
    }

    #[test]
    fn classify_agrees_with_descmult() {
        // The raw-mask classifier against the DescMult route, all n=4 and
        // n=5 masks.
        for n in [4usize, 5] {
            let count = 1u64 << triples(n).len();
            for mask in 0..count {
                let c = circuit_from_mask(n, mask);
                let m = from_staircase(&c, n).unwrap();
                let want_c3 = m.is_associative().is_ok();
                let want_sc = want_c3 && m.all_triples_zero().unwrap();
                assert_eq!(classify_mask(n, mask), (want_c3, want_sc), "n={n} mask={mask}");
            }
        }
    }

    #[test]
    fn survey_small_counts() {
        let r = survey(3, &SurveyOptions::default()).unwrap();
        assert_eq!((r.total, r.in_c3, r.non_sc_c3), (2, 2, 0));

        let r = survey(4, &SurveyOptions::default()).unwrap();
        assert_eq!(r.total, 16);
        assert_eq!(r.in_c3, r.semi_clifford_c3, "all triple products vanish below 7 qubits");
        assert_eq!(r.non_sc_c3, 0);
        assert!(r.semi_clifford_c3 <= r.in_c3 && r.in_c3 <= r.total);
    }

    #[test]
    fn survey_shard_invariance() {
        let base = survey(5, &SurveyOptions::default()).unwrap();
        for shards in [1u32, 2, 8, 32] {
            for threads in [1usize, 4] {
                let r = survey(5, &SurveyOptions { shards, threads, ..Default::default() })
                    .unwrap();
                assert_eq!(
                    (r.total, r.in_c3, r.semi_clifford_c3),
                    (base.total, base.in_c3, base.semi_clifford_c3),
                    "shards={shards} threads={threads}"
                );
            }
        }
    }

    #[test]
    fn survey_rejects_bad_shards() {
        let opts = SurveyOptions { shards: 3, ..Default::default() };
        assert!(matches!(survey(4, &opts), Err(SearchError::BadShardSpec(_))));
        let opts = SurveyOptions { shards: 64, ..Default::default() };
        assert!(matches!(survey(4, &opts), Err(SearchError::BadShardSpec(_))));
    }

    #[test]
    fn checkpoint_roundtrip_and_resume() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("survey.ckpt");

        // Simulate a killed run: two shards done, the rest pending.
        let shards = 8u32;
        let mut cp = Checkpoint::new(5, shards);
        for shard in [1u32, 4] {
            cp.counts[shard as usize] = process_shard(5, shards, shard);
            cp.done[shard as usize] = true;
        }
        cp.save(&path).unwrap();
        assert_eq!(Checkpoint::load(&path).unwrap(), cp);

        let opts = SurveyOptions { shards, checkpoint: Some(path.clone()), ..Default::default() };
        let resumed = survey(5, &opts).unwrap();
        let direct = survey(5, &SurveyOptions { shards, ..Default::default() }).unwrap();
        assert_eq!(resumed.total, direct.total);
        assert_eq!(resumed.in_c3, direct.in_c3);
        assert_eq!(resumed.semi_clifford_c3, direct.semi_clifford_c3);
        assert_eq!(resumed.per_shard, direct.per_shard);

        // The finished checkpoint reloads as fully done.
        let done = Checkpoint::load(&path).unwrap();
        assert!(done.done.iter().all(|&d| d));
    }

    #[test]
    fn checkpoint_rejects_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("survey.ckpt");
        Checkpoint::new(5, 8).save(&path).unwrap();
        let opts = SurveyOptions { shards: 16, checkpoint: Some(path.clone()), ..Default::default() };
        assert!(matches!(survey(5, &opts), Err(SearchError::CorruptCheckpoint(_))));

        std::fs::write(&path, b"garbage").unwrap();
        assert!(matches!(Checkpoint::load(&path), Err(SearchError::CorruptCheckpoint(_))));
    }

    #[test]
    fn witness_is_u3() {
        let w = find_witness();
        assert_eq!(w, uk_circuit(3));
        let table = from_staircase(&w, 7).unwrap();
        assert!(table.is_associative().is_ok());
        // Nonzero triple product: e1 e2 e4 = e7 under the subset labeling.
        assert_eq!(table.product_of_set(&[1, 2, 4]), F2Vec::basis(7, 7));
    }

    #[test]
    fn sample_is_seeded_and_consistent() {
        let a = survey_sample(7, 500, 42).unwrap();
        let b = survey_sample(7, 500, 42).unwrap();
        assert_eq!((a.in_c3, a.semi_clifford_c3), (b.in_c3, b.semi_clifford_c3));
        assert_eq!(a.non_sc_c3, a.in_c3 - a.semi_clifford_c3);
        assert!(a.sampled == 500);
    }
}
