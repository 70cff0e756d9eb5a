//! Reproduction checks, grouped into tiers by cost.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;

use crate::codes::{
    build_full, build_twisted_half, covering_radius_exact, dimension, min_distance_small,
    CoverOptions, DEFAULT_DISTANCE_CAP, DEFAULT_MEMORY_BUDGET,
};
use crate::congruence::{classify, power_residue_check};
use crate::curves::{count_n, count_points_direct, s_star};
use crate::gf::{prime_power, Embedding, FieldSpec, Tower};
use crate::properties::{
    in_i, npi_even, npi_oracle_bruteforce, npi_odd, pi_direct_search, require_ell, targets,
    verify_witness, weil_sum_audit, Parity, ScanOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Fast,
    Standard,
    Long,
}

impl std::str::FromStr for Tier {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fast" => Ok(Tier::Fast),
            "standard" => Ok(Tier::Standard),
            "long" => Ok(Tier::Long),
            _ => Err(format!("unknown tier {s:?}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub tier: Tier,
    pub workers: usize,
    pub memory_budget: u64,
    pub checkpoint_dir: Option<PathBuf>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tier: Tier::Fast,
            workers: 1,
            memory_budget: DEFAULT_MEMORY_BUDGET,
            checkpoint_dir: None,
        }
    }
}

impl VerifyOptions {
    fn scan(&self) -> ScanOptions {
        ScanOptions {
            workers: self.workers,
            checkpoint_dir: self.checkpoint_dir.clone(),
            ..Default::default()
        }
    }

    fn cover(&self) -> CoverOptions {
        CoverOptions {
            workers: self.workers,
            memory_budget: self.memory_budget,
            ..Default::default()
        }
    }

    /// Square tables may use the whole budget, one bit per element.
    fn tower(&self, q0: u64, s: u32) -> Result<Tower, String> {
        let spec = FieldSpec::for_order(q0).map_err(|e| e.to_string())?;
        Tower::with_square_limit(spec, s, self.memory_budget.saturating_mul(8))
            .map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: &'static str,
    pub tier: Tier,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u64,
}

type CheckFn = fn(&VerifyOptions) -> Result<String, String>;

pub struct Check {
    pub id: &'static str,
    pub tier: Tier,
    pub run: CheckFn,
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// `A^s ≡ 2^ℓ - 1 (mod 2^ℓ)` (and mod `2^(ℓ+1)`) iff `A` is `≡ 2^ℓ - 1` in
/// that modulus and `s` is odd. Returns the number of cases checked.
pub fn power_residue_iff_exhaustive(a_max: u64, s_max: u64, ell_max: u32) -> Result<u64, String> {
    let mut cases = 0;
    for a in (1..a_max).step_by(2) {
        for s in 1..=s_max {
            for ell in 2..=ell_max {
                let (lo, hi) = power_residue_check(&a, s, ell).map_err(err)?;
                let m_lo = 1u64 << ell;
                let m_hi = m_lo << 1;
                let want_lo = a % m_lo == m_lo - 1 && s % 2 == 1;
                let want_hi = a % m_hi == m_lo - 1 && s % 2 == 1;
                ensure!(lo == want_lo, "mod 2^ell fails at A={a} s={s} ell={ell}");
                ensure!(hi == want_hi, "mod 2^(ell+1) fails at A={a} s={s} ell={ell}");
                cases += 1;
            }
        }
    }
    Ok(cases)
}

fn check_classify(_: &VerifyOptions) -> Result<String, String> {
    for (q, ell) in [(7u64, 3), (47, 4), (31, 5)] {
        let got = classify(&q).map_err(err)?.ell;
        ensure!(got == Some(ell), "ell({q}) = {got:?}, expected {ell}");
    }
    let cases = power_residue_iff_exhaustive(1024, 12, 8)?;
    Ok(format!("ell(7,47,31) = (3,4,5); {cases} congruence cases"))
}

fn check_s_star(_: &VerifyOptions) -> Result<String, String> {
    for (q0, want) in [(7, 3), (23, 7), (31, 9), (47, 11)] {
        let got = s_star(q0).map_err(err)?.s_star;
        ensure!(got == want, "s*({q0}) = {got}, expected {want}");
    }
    Ok("s*(7,23,31,47) = (3,7,9,11)".into())
}

fn cr_pair(opts: &VerifyOptions, s: u32) -> Result<(u32, u32), String> {
    let spec = FieldSpec::for_order(7).map_err(err)?;
    let full = build_full(spec.clone(), s).map_err(err)?;
    let half = build_twisted_half(spec, s).map_err(err)?;
    let a = covering_radius_exact(&full, &opts.cover()).map_err(err)?;
    let b = covering_radius_exact(&half, &opts.cover()).map_err(err)?;
    let total = 7u64.pow(2 * s);
    ensure!(a.histogram.iter().sum::<u64>() == total, "histogram sum");
    ensure!(b.histogram.iter().sum::<u64>() == total, "histogram sum");
    Ok((a.rho, b.rho))
}

fn check_cr_full(opts: &VerifyOptions) -> Result<String, String> {
    let (r1, _) = cr_pair(opts, 1)?;
    let (r3, _) = cr_pair(opts, 3)?;
    ensure!((r1, r3) == (2, 3), "rho(C_1(7)), rho(C_3(7)) = ({r1}, {r3})");
    Ok("rho(C_1(7)) = 2, rho(C_3(7)) = 3".into())
}

fn check_cr_twisted(opts: &VerifyOptions) -> Result<String, String> {
    for s in [1, 3] {
        let (a, b) = cr_pair(opts, s)?;
        ensure!(a == b, "s={s}: full {a} vs twisted {b}");
    }
    Ok("rho(full) = rho(twisted half) at s = 1, 3".into())
}

fn check_dimensions(_: &VerifyOptions) -> Result<String, String> {
    let mut ds = Vec::new();
    for (q0, s) in [(7, 1), (7, 3), (23, 1), (31, 1), (47, 1)] {
        let spec = FieldSpec::for_order(q0).map_err(err)?;
        let full = build_full(spec.clone(), s).map_err(err)?;
        let half = build_twisted_half(spec, s).map_err(err)?;
        let r = 2 * s as usize;
        ensure!(dimension(&full) == full.len() - r, "full ({q0},{s}) dimension");
        ensure!(dimension(&half) == half.len() - r, "twisted ({q0},{s}) dimension");
        let d = min_distance_small(&half, DEFAULT_DISTANCE_CAP).map_err(err)?;
        ensure!(d == 3 || d == 4, "twisted ({q0},{s}) d = {d}");
        ds.push(format!("({q0},{s}):{d}"));
    }
    Ok(format!("n - 2s everywhere; twisted d = {}", ds.join(" ")))
}

fn in_i_case(opts: &VerifyOptions, q0: u64, s: u32, want: bool) -> Result<String, String> {
    let t = opts.tower(q0, s)?;
    let r = in_i(&t, &opts.scan()).map_err(err)?;
    ensure!(r.in_i == want, "in_I({q0}, {s}) = {}, expected {want}", r.in_i);
    for rep in [&r.even, &r.odd] {
        match &rep.witness {
            Some(w) => verify_witness(&t, rep.parity, w).map_err(err)?,
            None => ensure!(rep.scanned as u128 == t.q() - 1, "incomplete scan"),
        }
    }
    Ok(format!("{s} {} I({q0})", if want { "∈" } else { "∉" }))
}

fn check_in_i_fast(opts: &VerifyOptions) -> Result<String, String> {
    let mut out = Vec::new();
    for (q0, s, want) in [(7, 1, false), (7, 3, true), (23, 3, false), (31, 3, false), (47, 3, false)] {
        out.push(in_i_case(opts, q0, s, want)?);
    }
    Ok(out.join(", "))
}

/// Field sizes from the oracle and direct-search lists that are prime
/// powers; 87 = 3 · 29 is not.
fn field_sizes(list: &[u64]) -> (Vec<u64>, Vec<u64>) {
    list.iter().partition(|&&q| prime_power(q).is_some())
}

fn check_oracle(opts: &VerifyOptions) -> Result<String, String> {
    let (fields, skipped) = field_sizes(&[7, 23, 31, 47, 71, 79, 87, 343]);
    let mut total = 0;
    for q in fields {
        let (q0, s) = if q == 343 { (7, 3) } else { (q, 1) };
        let t = opts.tower(q0, s)?;
        let ell = require_ell(&t).map_err(err)?;
        let even = npi_even(&t, &opts.scan()).map_err(err)?.holds;
        let odd = npi_odd(&t, &opts.scan()).map_err(err)?.holds;
        for i in 0..1u64 << ell {
            let o = npi_oracle_bruteforce(&t, ell, i).map_err(err)?;
            let want = if i % 2 == 0 { even } else { odd };
            ensure!(o.holds == want, "q={q} i={i}: oracle {} vs {want}", o.holds);
            total += 1;
        }
    }
    Ok(format!("{total} indices agree; not fields: {skipped:?}"))
}

fn check_pi(opts: &VerifyOptions) -> Result<String, String> {
    let (fields, skipped) = field_sizes(&[7, 23, 31, 47, 71, 79, 87]);
    let mut pairs = 0;
    for q in &fields {
        let t = opts.tower(*q, 1)?;
        let ell = require_ell(&t).map_err(err)?;
        let r = pi_direct_search(&t, ell).map_err(err)?;
        ensure!(r.holds(), "Pi fails over F_{q}");
        pairs += r.even.pairs + r.odd.pairs;
    }
    Ok(format!(
        "Pi holds over {fields:?} ({pairs} α needed the pair search); not fields: {skipped:?}"
    ))
}

fn check_weil(opts: &VerifyOptions) -> Result<String, String> {
    let mut rows = 0;
    for (q0, s) in [(7, 1), (7, 3), (23, 1)] {
        let t = opts.tower(q0, s)?;
        let r = weil_sum_audit(&t, 50).map_err(err)?;
        ensure!(r.even.sum_k_minus_x2 == 1, "Σ η(1 - x²) = {}", r.even.sum_k_minus_x2);
        ensure!(r.odd.sum_k_minus_x2 == 1, "Σ η(D - x²) = {}", r.odd.sum_k_minus_x2);
        ensure!(r.ok(), "bound or certificate failure over F_{}", t.q());
        rows += r.even.rows.len() + r.odd.rows.len();
    }
    Ok(format!("{rows} (α, parity) rows within bounds"))
}

fn check_curves(opts: &VerifyOptions) -> Result<String, String> {
    for (q0, s) in [(7, 1), (7, 3), (23, 1)] {
        let t = opts.tower(q0, s)?;
        for parity in [Parity::Even, Parity::Odd] {
            let c = count_n(&t, parity).map_err(err)?;
            let d = count_points_direct(&t, parity).map_err(err)?;
            ensure!(c.n_chi == d.total, "({q0},{s}) {parity:?}: {} vs {}", c.n_chi, d.total);
            ensure!(c.hasse_weil, "({q0},{s}) {parity:?} outside Hasse–Weil");
        }
    }
    Ok("N_chi = 2^m (1 + N_s) by both counts; Hasse–Weil holds".into())
}

fn check_triangle(opts: &VerifyOptions) -> Result<String, String> {
    for s in [1, 3] {
        let t = opts.tower(7, s)?;
        let i = in_i(&t, &opts.scan()).map_err(err)?;
        let full = build_full(t.fq0().spec().clone(), s).map_err(err)?;
        let rho = covering_radius_exact(&full, &opts.cover()).map_err(err)?.rho;
        let even = count_n(&t, Parity::Even).map_err(err)?.n_s_nonzero;
        let odd = count_n(&t, Parity::Odd).map_err(err)?.n_s_nonzero;
        let witness = even > 0 || odd > 0;
        ensure!(
            i.in_i == (rho == 3) && i.in_i == witness,
            "s={s}: in_I {} rho {rho} witness {witness}",
            i.in_i
        );
    }
    Ok("in_I ⇔ rho = 3 ⇔ witness at s = 1, 3".into())
}

fn check_closure(opts: &VerifyOptions) -> Result<String, String> {
    let t3 = opts.tower(7, 3)?;
    let t9 = opts.tower(7, 9)?;
    let r3 = in_i(&t3, &opts.scan()).map_err(err)?;
    ensure!(r3.in_i, "3 ∉ I(7)");
    let emb = Embedding::new(t3.fq().clone(), t9.fq().clone()).map_err(err)?;
    let f9 = t9.fq();
    for rep in [&r3.even, &r3.odd] {
        let Some(w) = &rep.witness else { continue };
        let x = emb
            .embed(&t3.fq().from_coeffs(&w.x).map_err(err)?)
            .map_err(err)?;
        let x2 = f9.square(&x);
        for a in targets(&t9, rep.parity) {
            ensure!(f9.eta_euler(&f9.sub(&x2, &a)) == 1, "embedded witness fails");
        }
    }
    let r9 = in_i(&t9, &opts.scan()).map_err(err)?;
    ensure!(r9.in_i, "9 ∉ I(7)");
    Ok("3 ∈ I(7) witness re-embeds; 9 ∈ I(7)".into())
}

fn check_threshold(opts: &VerifyOptions) -> Result<String, String> {
    let t = opts.tower(7, 5)?;
    let c = count_n(&t, Parity::Even).map_err(err)?;
    ensure!(c.n_s > 0, "N_s = 0 at s = 5 ≥ s*(7)");
    in_i_case(opts, 7, 5, true)
}

fn check_cr_agreement(opts: &VerifyOptions) -> Result<String, String> {
    for q0 in [23, 31, 47] {
        let t = opts.tower(q0, 1)?;
        let full = build_full(t.fq0().spec().clone(), 1).map_err(err)?;
        let half = build_twisted_half(t.fq0().spec().clone(), 1).map_err(err)?;
        let a = covering_radius_exact(&full, &opts.cover()).map_err(err)?.rho;
        let b = covering_radius_exact(&half, &opts.cover()).map_err(err)?.rho;
        let i = in_i(&t, &opts.scan()).map_err(err)?.in_i;
        ensure!(a == b && (a == 3) == i, "q0={q0}: rho {a}/{b}, in_I {i}");
    }
    Ok("rho = 2 and 1 ∉ I(q0) for q0 = 23, 31, 47".into())
}

fn check_long_23(opts: &VerifyOptions) -> Result<String, String> {
    in_i_case(opts, 23, 5, true)
}

fn check_long_31(opts: &VerifyOptions) -> Result<String, String> {
    in_i_case(opts, 31, 5, true)
}

fn check_long_47(opts: &VerifyOptions) -> Result<String, String> {
    in_i_case(opts, 47, 5, false)
}

pub fn checks() -> Vec<Check> {
    use Tier::*;
    let c = |id, tier, run: CheckFn| Check { id, tier, run };
    vec![
        c("classify", Fast, check_classify),
        c("s-star", Fast, check_s_star),
        c("covering-radius", Fast, check_cr_full),
        c("twisted-equality", Fast, check_cr_twisted),
        c("dimensions", Fast, check_dimensions),
        c("in-i", Fast, check_in_i_fast),
        c("oracle", Fast, check_oracle),
        c("pi-direct", Fast, check_pi),
        c("weil", Fast, check_weil),
        c("curves", Fast, check_curves),
        c("triangle", Fast, check_triangle),
        c("closure", Standard, check_closure),
        c("threshold", Standard, check_threshold),
        c("cr-agreement", Standard, check_cr_agreement),
        c("i23-5", Long, check_long_23),
        c("i31-5", Long, check_long_31),
        c("i47-5", Long, check_long_47),
    ]
}

pub fn run_check(check: &Check, opts: &VerifyOptions) -> CheckResult {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(|| (check.run)(opts)))
        .unwrap_or_else(|_| Err("panicked".into()));
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CheckResult {
        id: check.id,
        tier: check.tier,
        passed,
        detail,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

/// Runs every check at or below `opts.tier`, calling `report` after each.
pub fn run(opts: &VerifyOptions, mut report: impl FnMut(&CheckResult)) -> Vec<CheckResult> {
    checks()
        .iter()
        .filter(|c| c.tier <= opts.tier)
        .map(|c| {
            let r = run_check(c, opts);
            report(&r);
            r
        })
        .collect()
}
