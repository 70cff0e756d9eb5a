//! Range-partitioned, resumable exhaustion over `F_q^*` in generator-power
//! order.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{all_squares, make_witness, targets, Parity, PropertyError, PropertyReport, Result};
use crate::gf::{FieldSpec, Tower};

pub const DEFAULT_BLOCK: u64 = 1 << 20;

/// Shard `index` of `count` covers exponents
/// `[(q-1)·index/count, (q-1)·(index+1)/count)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shard {
    pub index: u64,
    pub count: u64,
}

impl Default for Shard {
    fn default() -> Self {
        Self { index: 0, count: 1 }
    }
}

impl Shard {
    pub fn new(index: u64, count: u64) -> Result<Self> {
        if count == 0 || index >= count {
            return Err(PropertyError::Shard(format!("{index}/{count}")));
        }
        Ok(Self { index, count })
    }

    pub fn range(&self, total: u64) -> (u64, u64) {
        let t = total as u128;
        let lo = t * self.index as u128 / self.count as u128;
        let hi = t * (self.index as u128 + 1) / self.count as u128;
        (lo as u64, hi as u64)
    }
}

impl std::str::FromStr for Shard {
    type Err = PropertyError;

    /// Parses `k/n`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || PropertyError::Shard(s.to_string());
        let (k, n) = s.split_once('/').ok_or_else(bad)?;
        Shard::new(k.trim().parse().map_err(|_| bad())?, n.trim().parse().map_err(|_| bad())?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOptions {
    pub workers: usize,
    pub shard: Shard,
    pub checkpoint_dir: Option<PathBuf>,
    /// Exponents per work unit and per checkpoint.
    pub block: u64,
    /// Stop after this many blocks of the current run (simulates an
    /// interruption; the checkpoint stays resumable).
    pub max_blocks: Option<u64>,
    /// Record wall-clock time; off gives byte-identical reports.
    pub timing: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            workers: 1,
            shard: Shard::default(),
            checkpoint_dir: None,
            block: DEFAULT_BLOCK,
            max_blocks: None,
            timing: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Checkpoint {
    q0: u64,
    s: u32,
    parity: Parity,
    shard: Shard,
    field: FieldSpec,
    lo: u64,
    hi: u64,
    /// Every exponent below this has been checked.
    watermark: u64,
    witness_exponent: Option<u64>,
}

fn checkpoint_path(dir: &Path, q0: u64, s: u32, parity: Parity, shard: Shard) -> PathBuf {
    dir.join(format!(
        "npi-{q0}-{s}-{}-{}of{}.json",
        parity.as_str(),
        shard.index,
        shard.count
    ))
}

fn ck_err(e: impl std::fmt::Display) -> PropertyError {
    PropertyError::Checkpoint(e.to_string())
}

fn write_atomic(path: &Path, ck: &Checkpoint) -> Result<()> {
    let tmp = path.with_extension("json.tmp");
    let body = serde_json::to_vec_pretty(ck).map_err(ck_err)?;
    fs::write(&tmp, body).map_err(ck_err)?;
    fs::rename(&tmp, path).map_err(ck_err)
}

fn read_checkpoint(path: &Path, fresh: &Checkpoint) -> Result<Option<Checkpoint>> {
    let body = match fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(ck_err(e)),
    };
    let ck: Checkpoint = serde_json::from_slice(&body).map_err(ck_err)?;
    let same = Checkpoint {
        watermark: fresh.watermark,
        witness_exponent: None,
        ..ck.clone()
    } == *fresh;
    if !same || ck.watermark < ck.lo || ck.watermark > ck.hi {
        return Err(PropertyError::Checkpoint(format!(
            "{} belongs to a different scan",
            path.display()
        )));
    }
    Ok(Some(ck))
}

/// Completed-block bookkeeping shared by workers.
struct Progress {
    done: BTreeSet<u64>,
    /// Number of leading blocks known complete.
    prefix: u64,
}

pub(super) fn npi_scan(tower: &Tower, parity: Parity, opts: &ScanOptions) -> Result<PropertyReport> {
    let start_time = Instant::now();
    super::require_ell(tower)?;
    let f = tower.fq();
    let total = f.order() - 1;
    if total > u64::MAX as u128 {
        return Err(PropertyError::TooLarge {
            what: "q - 1",
            size: total,
            cap: u64::MAX as u128,
        });
    }
    let total = total as u64;
    let (lo, hi) = opts.shard.range(total);
    let q0 = tower.q0() as u64;
    let s = tower.s();
    let t = targets(tower, parity);
    let block = opts.block.max(1);

    let fresh = Checkpoint {
        q0,
        s,
        parity,
        shard: opts.shard,
        field: f.spec().clone(),
        lo,
        hi,
        watermark: lo,
        witness_exponent: None,
    };
    let path = opts
        .checkpoint_dir
        .as_deref()
        .map(|d| checkpoint_path(d, q0, s, parity, opts.shard));
    if let Some(dir) = &opts.checkpoint_dir {
        fs::create_dir_all(dir).map_err(ck_err)?;
    }
    let resumed = match &path {
        Some(p) => read_checkpoint(p, &fresh)?,
        None => None,
    };

    let (resume, mut best) = match &resumed {
        Some(ck) => (ck.watermark, ck.witness_exponent),
        None => (lo, None),
    };

    if best.is_none() && resume < hi {
        let nblocks = (hi - resume).div_ceil(block);
        let limit = opts.max_blocks.map_or(nblocks, |m| m.min(nblocks));
        let next = AtomicU64::new(0);
        let found = AtomicU64::new(u64::MAX);
        let progress = Mutex::new(Progress {
            done: BTreeSet::new(),
            prefix: 0,
        });
        let g = f.generator();

        let work = || -> Result<()> {
            loop {
                let b = next.fetch_add(1, Ordering::Relaxed);
                if b >= limit {
                    return Ok(());
                }
                let start = resume + b * block;
                if start > found.load(Ordering::Relaxed) {
                    return Ok(());
                }
                let end = (start + block).min(hi);
                let mut x = f.pow(&g, start as u128);
                let mut k = start;
                let mut complete = true;
                while k < end {
                    if k & 0xfff == 0 && k > found.load(Ordering::Relaxed) {
                        complete = false;
                        break;
                    }
                    if all_squares(f, &f.square(&x), &t) {
                        found.fetch_min(k, Ordering::Relaxed);
                        complete = false;
                        break;
                    }
                    x = f.mul(&x, &g);
                    k += 1;
                }
                if complete {
                    let mut p = progress.lock().expect("progress lock");
                    p.done.insert(b);
                    let before = p.prefix;
                    loop {
                        let head = p.prefix;
                        if !p.done.remove(&head) {
                            break;
                        }
                        p.prefix += 1;
                    }
                    if p.prefix != before {
                        if let Some(path) = &path {
                            let ck = Checkpoint {
                                watermark: (resume + p.prefix * block).min(hi),
                                ..fresh.clone()
                            };
                            write_atomic(path, &ck)?;
                        }
                    }
                }
            }
        };

        let workers = opts.workers.max(1);
        let results: Vec<Result<()>> = if workers == 1 {
            vec![work()]
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..workers).map(|_| scope.spawn(&work)).collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("scan worker panicked"))
                    .collect()
            })
        };
        results.into_iter().collect::<Result<()>>()?;

        let w = found.load(Ordering::Relaxed);
        if w != u64::MAX {
            best = Some(w);
        } else {
            let prefix = progress.lock().expect("progress lock").prefix;
            let watermark = (resume + prefix * block).min(hi);
            if watermark < hi {
                return Err(PropertyError::Interrupted { watermark });
            }
        }
    }

    if let Some(path) = &path {
        let ck = Checkpoint {
            watermark: best.map_or(hi, |w| w + 1),
            witness_exponent: best,
            ..fresh.clone()
        };
        write_atomic(path, &ck)?;
    }

    let witness = best.map(|w| make_witness(f, &t, w)).transpose()?;
    let scanned = best.map_or(hi - lo, |w| w - lo + 1);
    Ok(PropertyReport {
        q0,
        s,
        parity,
        holds: witness.is_some(),
        witness,
        scanned,
        elapsed_ms: if opts.timing {
            start_time.elapsed().as_millis() as u64
        } else {
            0
        },
        checkpoints: scanned.div_ceil(block),
        shard: opts.shard,
        field: f.spec().clone(),
        base_field: tower.fq0().spec().clone(),
    })
}

/// Combines the reports of all shards of one scan. The merged witness is
/// the one with the smallest exponent; `scanned` is the total work.
pub fn merge_shard_reports(reports: &[PropertyReport]) -> Result<PropertyReport> {
    let first = reports
        .first()
        .ok_or_else(|| PropertyError::Shard("no reports".into()))?;
    let count = first.shard.count;
    let mut seen = vec![false; count as usize];
    for r in reports {
        if (r.q0, r.s, r.parity, &r.field) != (first.q0, first.s, first.parity, &first.field)
            || r.shard.count != count
        {
            return Err(PropertyError::Shard("reports belong to different scans".into()));
        }
        let slot = &mut seen[r.shard.index as usize];
        if *slot {
            return Err(PropertyError::Shard(format!("shard {} repeated", r.shard.index)));
        }
        *slot = true;
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(PropertyError::Shard(format!("shard {missing} missing")));
    }
    let witness = reports
        .iter()
        .filter_map(|r| r.witness.clone())
        .min_by_key(|w| w.exponent);
    Ok(PropertyReport {
        holds: witness.is_some(),
        witness,
        scanned: reports.iter().map(|r| r.scanned).sum(),
        elapsed_ms: reports.iter().map(|r| r.elapsed_ms).max().unwrap_or(0),
        checkpoints: reports.iter().map(|r| r.checkpoints).sum(),
        shard: Shard::default(),
        ..first.clone()
    })
}
