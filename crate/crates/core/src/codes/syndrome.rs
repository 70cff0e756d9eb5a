//! Exact covering radius by breadth-first closure over the syndrome space.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{CodeError, LinearCode, Result, ScalarField};

pub const DEFAULT_RHO_CAP: u32 = 4;
pub const DEFAULT_MEMORY_BUDGET: u64 = 64 << 20;

const UNSEEN: u8 = u8::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverOptions {
    pub rho_cap: u32,
    pub memory_budget: u64,
    pub workers: usize,
}

impl Default for CoverOptions {
    fn default() -> Self {
        Self {
            rho_cap: DEFAULT_RHO_CAP,
            memory_budget: DEFAULT_MEMORY_BUDGET,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CRCertificate {
    pub rho: u32,
    /// The smallest-index syndrome first reached at level `rho`, as residues
    /// in row order.
    pub deepest_syndrome: Vec<u32>,
    /// `histogram[k]` = number of syndromes first covered at level `k`.
    pub histogram: Vec<u64>,
}

/// Bytes the search allocates for a code with `q0^r` syndromes: one level
/// tag per syndrome plus a `u32` frontier entry per syndrome.
pub fn syndrome_table_bytes(q0: u64, r: usize) -> u128 {
    let size = (q0 as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
    size.saturating_mul(5)
}

/// Mixed-radix syndrome space with a deduplicated generator set
/// `{c * col : c != 0}`.
pub(crate) struct SyndromeSpace<'a> {
    f: &'a ScalarField,
    r: usize,
    size: usize,
    powers: Vec<usize>,
    /// Flattened generators, `r` digits each.
    gens: Vec<u32>,
}

impl<'a> SyndromeSpace<'a> {
    pub(crate) fn new(code: &'a LinearCode) -> Self {
        let f = code.scalars();
        let q = f.order() as usize;
        let r = code.redundancy();
        let powers: Vec<usize> = (0..r).map(|i| q.pow(i as u32)).collect();
        let size = q.pow(r as u32);
        let mut seen = vec![false; size];
        let mut gens = Vec::new();
        for col in code.columns() {
            for c in f.nonzero() {
                let v: Vec<u32> = col.iter().map(|&x| f.mul(c, x)).collect();
                let idx = encode(&powers, &v);
                if !seen[idx] {
                    seen[idx] = true;
                    gens.extend_from_slice(&v);
                }
            }
        }
        Self {
            f,
            r,
            size,
            powers,
            gens,
        }
    }

    pub(crate) fn size(&self) -> usize {
        self.size
    }

    pub(crate) fn encode(&self, v: &[u32]) -> usize {
        encode(&self.powers, v)
    }

    pub(crate) fn decode(&self, mut idx: usize) -> Vec<u32> {
        let q = self.f.order() as usize;
        (0..self.r)
            .map(|_| {
                let d = idx % q;
                idx /= q;
                d as u32
            })
            .collect()
    }

    /// Calls `visit(x + g)` for every generator `g` until it returns true.
    #[inline]
    fn neighbours(&self, x: usize, digits: &mut [u32], mut visit: impl FnMut(usize) -> bool) -> bool {
        let q = self.f.order() as usize;
        let mut t = x;
        for d in digits.iter_mut() {
            *d = (t % q) as u32;
            t /= q;
        }
        for g in self.gens.chunks_exact(self.r) {
            let mut y = 0;
            for i in 0..self.r {
                y += self.f.add(digits[i], g[i]) as usize * self.powers[i];
            }
            if visit(y) {
                return true;
            }
        }
        false
    }
}

fn encode(powers: &[usize], v: &[u32]) -> usize {
    v.iter().zip(powers).map(|(&d, &p)| d as usize * p).sum()
}

fn split_ranges(len: usize, parts: usize) -> Vec<std::ops::Range<usize>> {
    let parts = parts.max(1);
    (0..parts)
        .map(|k| len * k / parts..len * (k + 1) / parts)
        .filter(|r| !r.is_empty())
        .collect()
}

/// Breadth-first closure: level 0 is the zero syndrome and level `k + 1`
/// adds every unseen `x + c * col` with `x` at level `k`.
///
/// Each level is expanded either forward from the frontier or backward from
/// the unseen syndromes, whichever touches fewer pairs. The result does not
/// depend on that choice or on the worker count.
pub fn covering_radius_exact(code: &LinearCode, opts: &CoverOptions) -> Result<CRCertificate> {
    let required = syndrome_table_bytes(code.q0(), code.redundancy());
    if required > opts.memory_budget as u128 || required / 5 > u32::MAX as u128 {
        return Err(CodeError::MemoryBudget {
            required,
            budget: opts.memory_budget,
        });
    }
    let space = SyndromeSpace::new(code);
    let size = space.size();
    let workers = opts.workers.max(1);
    let mut tag = vec![UNSEEN; size];
    tag[0] = 0;
    let mut frontier: Vec<u32> = vec![0];
    let mut histogram = vec![1u64];
    let mut unseen = size - 1;
    let mut level = 0u32;

    while unseen > 0 {
        if level >= opts.rho_cap {
            return Err(CodeError::RhoCap(opts.rho_cap));
        }
        let next = level as u8 + 1;
        let mut found: Vec<u32> = if frontier.len() <= unseen {
            forward(&space, &tag, &frontier, workers)
        } else {
            backward(&space, &tag, level as u8, workers)
        };
        found.retain(|&y| {
            let t = &mut tag[y as usize];
            if *t == UNSEEN {
                *t = next;
                true
            } else {
                false
            }
        });
        if found.is_empty() {
            // the columns do not span the syndrome space
            return Err(CodeError::RankDeficient {
                rank: 0,
                r: code.redundancy(),
            });
        }
        found.sort_unstable();
        unseen -= found.len();
        histogram.push(found.len() as u64);
        frontier = found;
        level += 1;
    }

    let deepest = frontier.iter().copied().min().unwrap_or(0);
    Ok(CRCertificate {
        rho: level,
        deepest_syndrome: space.decode(deepest as usize),
        histogram,
    })
}

fn forward(space: &SyndromeSpace, tag: &[u8], frontier: &[u32], workers: usize) -> Vec<u32> {
    let chunks = split_ranges(frontier.len(), workers);
    let run = |range: std::ops::Range<usize>| {
        let mut digits = vec![0u32; space.r];
        let mut out = Vec::new();
        for &x in &frontier[range] {
            space.neighbours(x as usize, &mut digits, |y| {
                if tag[y] == UNSEEN {
                    out.push(y as u32);
                }
                false
            });
            if out.len() > space.size() {
                out.sort_unstable();
                out.dedup();
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    };
    collect(chunks, run)
}

fn backward(space: &SyndromeSpace, tag: &[u8], level: u8, workers: usize) -> Vec<u32> {
    // the generator set is closed under negation, so x - g ranges over x + g
    let chunks = split_ranges(space.size(), workers);
    let run = |range: std::ops::Range<usize>| {
        let mut digits = vec![0u32; space.r];
        let mut out = Vec::new();
        for x in range {
            if tag[x] == UNSEEN && space.neighbours(x, &mut digits, |y| tag[y] == level) {
                out.push(x as u32);
            }
        }
        out
    };
    collect(chunks, run)
}

fn collect<F>(chunks: Vec<std::ops::Range<usize>>, run: F) -> Vec<u32>
where
    F: Fn(std::ops::Range<usize>) -> Vec<u32> + Sync,
{
    if chunks.len() <= 1 {
        return chunks.into_iter().flat_map(&run).collect();
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|c| {
                let run = &run;
                scope.spawn(move || run(c))
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

/// Writes `syndrome` as a sum of exactly `k` scaled columns, if possible.
/// Returns `(column, scalar)` pairs. Intended for spot checks with small `k`.
pub fn express(code: &LinearCode, syndrome: &[u32], k: u32) -> Option<Vec<(usize, u32)>> {
    let f = code.scalars();
    let space = SyndromeSpace::new(code);
    let mut lookup: BTreeMap<usize, (usize, u32)> = BTreeMap::new();
    for (j, col) in code.columns().iter().enumerate() {
        for c in f.nonzero() {
            let v: Vec<u32> = col.iter().map(|&x| f.mul(c, x)).collect();
            lookup.entry(space.encode(&v)).or_insert((j, c));
        }
    }
    let gens: Vec<(usize, Vec<u32>)> = lookup
        .keys()
        .map(|&idx| (idx, space.decode(idx)))
        .collect();
    fn rec(
        f: &ScalarField,
        space: &SyndromeSpace,
        lookup: &BTreeMap<usize, (usize, u32)>,
        gens: &[(usize, Vec<u32>)],
        target: &[u32],
        k: u32,
    ) -> Option<Vec<(usize, u32)>> {
        if k == 0 {
            return target.iter().all(|&d| d == 0).then(Vec::new);
        }
        if k == 1 {
            return lookup.get(&space.encode(target)).map(|&p| vec![p]);
        }
        for (idx, g) in gens {
            let rest: Vec<u32> = target
                .iter()
                .zip(g)
                .map(|(&t, &x)| f.add(t, f.neg(x)))
                .collect();
            if let Some(mut terms) = rec(f, space, lookup, gens, &rest, k - 1) {
                terms.push(lookup[idx]);
                return Some(terms);
            }
        }
        None
    }
    rec(f, &space, &lookup, &gens, syndrome, k)
}
