use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

use zetterberg::codes::{
    self, CodeError, CodeKind, CodeReport, CoverOptions, DEFAULT_DISTANCE_CAP, DEFAULT_MEMORY_BUDGET,
    DEFAULT_RHO_CAP,
};
use zetterberg::congruence::{classify, CongruenceError};
use zetterberg::curves::{count_n, count_points_direct, s_star, CurveError};
use zetterberg::gf::{prime_power, FieldSpec, GfError, Tower};
use zetterberg::properties::{
    delta_audit, merge_shard_reports, npi, pi_direct_search, require_ell, weil_sum_audit,
    Parity, PropertyError, PropertyReport, ScanOptions, Shard, DEFAULT_BLOCK,
};
use zetterberg::verify::{self, Tier, VerifyOptions};

const EXIT_ASSERTION: u8 = 1;
const EXIT_RESOURCE: u8 = 2;
const EXIT_BAD_INPUT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "zetterberg", version, about = "Generalized Zetterberg codes and their covering radii")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Worker threads for scans and syndrome searches.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    workers: u16,
    /// Bytes available to syndrome tables and quadratic-character bitsets.
    #[arg(long, global = true, default_value_t = DEFAULT_MEMORY_BUDGET)]
    memory_budget: u64,
    #[arg(long, global = true, env = "ZETTERBERG_CHECKPOINT_DIR")]
    checkpoint_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here (atomically) instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Report elapsed_ms = 0 so identical runs give identical bytes.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum KindArg {
    Full,
    TwistedHalf,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ParityArg {
    Even,
    Odd,
    Both,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum TierArg {
    Fast,
    Standard,
    Long,
}

#[derive(Args, Debug, Clone, Copy)]
struct TowerArgs {
    #[arg(long)]
    q0: u64,
    #[arg(long, default_value_t = 1)]
    s: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// 2-adic class of an odd integer.
    Classify { q: String },
    /// Build a code and report its parameters and covering radius.
    Code {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long, value_enum, default_value_t = KindArg::Full)]
        kind: KindArg,
        #[arg(long, default_value_t = DEFAULT_RHO_CAP)]
        rho_cap: u32,
        #[arg(long, default_value_t = DEFAULT_DISTANCE_CAP)]
        distance_cap: usize,
    },
    /// Decide s ∈ I(q0) by exhaustive NPi scans.
    Iq0 {
        #[command(flatten)]
        tower: TowerArgs,
        /// Scan only shard k of n.
        #[arg(long)]
        shard: Option<Shard>,
        #[arg(long, value_enum, default_value_t = ParityArg::Both)]
        parity: ParityArg,
        #[arg(long, default_value_t = DEFAULT_BLOCK)]
        block: u64,
        /// Stop after this many blocks; resume later from the checkpoint.
        #[arg(long)]
        max_blocks: Option<u64>,
    },
    /// Merge per-shard reports of one parity.
    Merge { reports: Vec<PathBuf> },
    /// Direct search for Property Pi solutions.
    PiCheck {
        #[command(flatten)]
        tower: TowerArgs,
        /// Include every reconstructed sextuple.
        #[arg(long)]
        solutions: bool,
    },
    /// Smallest odd s past the Hasse–Weil threshold.
    SStar {
        #[arg(long)]
        q0: u64,
    },
    /// Point counts on the associated curves.
    Curves {
        #[command(subcommand)]
        command: CurvesCommand,
    },
    /// Non-square certificates for Δ.
    DeltaAudit {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long, default_value_t = 50)]
        alphas: usize,
    },
    /// Exact character sums and Weil-bound checks.
    WeilAudit {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long, default_value_t = 50)]
        alphas: usize,
    },
    /// Run the reproduction checks.
    Verify {
        #[arg(long, value_enum, default_value_t = TierArg::Fast)]
        tier: TierArg,
    },
}

#[derive(Subcommand, Debug)]
enum CurvesCommand {
    Count {
        #[command(flatten)]
        tower: TowerArgs,
        #[arg(long, value_enum, default_value_t = ParityArg::Both)]
        parity: ParityArg,
        /// Also count points from explicit square roots.
        #[arg(long)]
        direct: bool,
    },
    SStar {
        #[arg(long)]
        q0: u64,
    },
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

fn bad_input(e: impl std::fmt::Display) -> Failure {
    Failure::new(EXIT_BAD_INPUT, e.to_string())
}

fn resource(e: impl std::fmt::Display) -> Failure {
    Failure::new(EXIT_RESOURCE, e.to_string())
}

impl From<GfError> for Failure {
    fn from(e: GfError) -> Self {
        bad_input(e)
    }
}

impl From<CongruenceError> for Failure {
    fn from(e: CongruenceError) -> Self {
        bad_input(e)
    }
}

impl From<CodeError> for Failure {
    fn from(e: CodeError) -> Self {
        match e {
            CodeError::MemoryBudget { .. } | CodeError::RhoCap(_) | CodeError::DistanceCap { .. } => {
                resource(e)
            }
            CodeError::RankDeficient { .. } | CodeError::ZeroColumn | CodeError::DistanceUnresolved => {
                Failure::new(EXIT_ASSERTION, e.to_string())
            }
            _ => bad_input(e),
        }
    }
}

impl From<PropertyError> for Failure {
    fn from(e: PropertyError) -> Self {
        match e {
            PropertyError::TooLarge { .. } | PropertyError::Interrupted { .. } => resource(e),
            PropertyError::InvalidWitness(_) | PropertyError::Reconstruction(_) => {
                Failure::new(EXIT_ASSERTION, e.to_string())
            }
            _ => bad_input(e),
        }
    }
}

impl From<CurveError> for Failure {
    fn from(e: CurveError) -> Self {
        match e {
            CurveError::TooLarge { .. } | CurveError::NoThreshold(_) => resource(e),
            _ => bad_input(e),
        }
    }
}

type Outcome = Result<(), Failure>;

impl RunConfig {
    fn tower(&self, t: TowerArgs) -> Result<Tower, Failure> {
        let spec = FieldSpec::for_order(t.q0)?;
        Ok(Tower::with_square_limit(spec, t.s, self.memory_budget.saturating_mul(8))?)
    }

    fn scan(&self) -> ScanOptions {
        ScanOptions {
            workers: self.workers as usize,
            checkpoint_dir: self.checkpoint_dir.clone(),
            timing: !self.no_timing,
            ..Default::default()
        }
    }

    fn emit_bytes(&self, body: &[u8]) -> Outcome {
        match &self.output {
            None => std::io::stdout().write_all(body).map_err(resource),
            Some(path) => write_atomic(path, body).map_err(resource),
        }
    }

    /// JSON in `json` mode, otherwise `text()`.
    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) -> Outcome {
        let body = match self.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(value).map_err(resource)?;
                s.push('\n');
                s
            }
            Format::Text => text(),
            Format::Csv => return Err(bad_input("csv output is only available for `code`")),
        };
        self.emit_bytes(body.as_bytes())
    }
}

fn write_atomic(path: &Path, body: &[u8]) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, body)?;
    fs::rename(&tmp, path)
}

fn check(cond: bool, what: impl Into<String>) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(Failure::new(EXIT_ASSERTION, what))
    }
}

#[derive(Serialize)]
struct ClassifyOut {
    q: String,
    in_s: bool,
    ell: Option<u32>,
    /// `None` when `q` does not fit in 64 bits.
    prime_power: Option<bool>,
}

fn cmd_classify(cfg: &RunConfig, q: &str) -> Outcome {
    let n: BigUint = q.trim().parse().map_err(|_| bad_input(format!("{q:?} is not an integer")))?;
    let c = classify(&n)?;
    let small = u64::try_from(&n).ok();
    let out = ClassifyOut {
        q: n.to_string(),
        in_s: c.in_s,
        ell: c.ell,
        prime_power: small.map(|v| prime_power(v).is_some()),
    };
    cfg.emit(&out, || match out.ell {
        Some(ell) => format!("{} ∈ S_{ell}\n", out.q),
        None => format!("{} ∈ S\n", out.q),
    })
}

fn cmd_code(cfg: &RunConfig, t: TowerArgs, kind: KindArg, rho_cap: u32, distance_cap: usize) -> Outcome {
    let tower = cfg.tower(t)?;
    let code = match kind {
        KindArg::Full => codes::build_full_in(&tower)?,
        KindArg::TwistedHalf => codes::build_twisted_half_in(&tower)?,
    };
    if cfg.format == Format::Csv {
        let mut body = Vec::new();
        code.write_csv(&mut body).map_err(resource)?;
        return cfg.emit_bytes(&body);
    }
    let opts = CoverOptions {
        rho_cap,
        memory_budget: cfg.memory_budget,
        workers: cfg.workers as usize,
    };
    let report = CodeReport::compute(&code, &opts, distance_cap)?;
    cfg.emit(&report, || {
        let d = match report.d_bounds {
            [a, b] if a == b => a.to_string(),
            [a, b] => format!("{a}..{b}"),
        };
        let kind = match report.kind {
            CodeKind::Full => "full",
            CodeKind::TwistedHalf => "twisted-half",
        };
        format!(
            "{kind} [{}, {}, {d}]_{} rho = {} quasi-perfect = {}\n",
            report.n, report.dimension, report.q0, report.rho, report.quasi_perfect
        )
    })
}

#[derive(Serialize)]
struct Iq0Out {
    q0: u64,
    s: u32,
    ell: u32,
    shard: Shard,
    /// `null` when the scanned range is partial and holds no witness.
    in_i: Option<bool>,
    even: Option<PropertyReport>,
    odd: Option<PropertyReport>,
}

fn cmd_iq0(
    cfg: &RunConfig,
    t: TowerArgs,
    shard: Option<Shard>,
    parity: ParityArg,
    block: u64,
    max_blocks: Option<u64>,
) -> Outcome {
    let tower = cfg.tower(t)?;
    let ell = require_ell(&tower)?;
    if block == 0 {
        return Err(bad_input("block must be positive"));
    }
    let shard = shard.unwrap_or_default();
    let opts = ScanOptions {
        shard,
        block,
        max_blocks,
        ..cfg.scan()
    };
    let run = |p: Parity| npi(&tower, p, &opts);
    let (even, odd) = match parity {
        ParityArg::Even => (Some(run(Parity::Even)?), None),
        ParityArg::Odd => (None, Some(run(Parity::Odd)?)),
        ParityArg::Both => (Some(run(Parity::Even)?), Some(run(Parity::Odd)?)),
    };
    let found = even.iter().chain(&odd).any(|r| r.holds);
    let complete = shard.count == 1 && parity == ParityArg::Both;
    let out = Iq0Out {
        q0: t.q0,
        s: t.s,
        ell,
        shard,
        in_i: if found {
            Some(true)
        } else if complete {
            Some(false)
        } else {
            None
        },
        even,
        odd,
    };
    cfg.emit(&out, || {
        let verdict = match out.in_i {
            Some(true) => "∈",
            Some(false) => "∉",
            None => "undecided for",
        };
        let scanned: u64 = out.even.iter().chain(&out.odd).map(|r| r.scanned).sum();
        format!(
            "{} {verdict} I({}) (shard {}/{}, {scanned} exponents scanned)\n",
            out.s, out.q0, shard.index, shard.count
        )
    })
}

fn cmd_merge(cfg: &RunConfig, paths: &[PathBuf]) -> Outcome {
    let reports = paths
        .iter()
        .map(|p| {
            let body = fs::read(p).map_err(|e| bad_input(format!("{}: {e}", p.display())))?;
            serde_json::from_slice::<PropertyReport>(&body)
                .map_err(|e| bad_input(format!("{}: {e}", p.display())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let merged = merge_shard_reports(&reports)?;
    cfg.emit(&merged, || {
        format!(
            "{} parity over F_{}^{}: holds = {} ({} exponents)\n",
            merged.parity.as_str(),
            merged.q0,
            merged.s,
            merged.holds,
            merged.scanned
        )
    })
}

fn cmd_pi_check(cfg: &RunConfig, t: TowerArgs, solutions: bool) -> Outcome {
    let tower = cfg.tower(t)?;
    let ell = require_ell(&tower)?;
    let mut report = pi_direct_search(&tower, ell)?;
    let holds = report.holds();
    if !solutions {
        report.even.solutions.clear();
        report.odd.solutions.clear();
    }
    cfg.emit(&report, || {
        let line = |r: &zetterberg::properties::PiParityReport| {
            format!(
                "{}: {} α, explicit {}, reduction {}, pairs {}, unsolved {}",
                r.parity.as_str(),
                r.alphas,
                r.explicit,
                r.reduction,
                r.pairs,
                r.unsolved.len()
            )
        };
        format!("F_{} Pi holds = {holds}\n  {}\n  {}\n", report.q, line(&report.even), line(&report.odd))
    })?;
    check(holds, format!("Property Pi fails over F_{}", report.q))
}

fn cmd_s_star(cfg: &RunConfig, q0: u64) -> Outcome {
    let r = s_star(q0)?;
    cfg.emit(&r, || format!("s*({}) = {} (m = {}, g = {})\n", r.q0, r.s_star, r.m, r.genus))
}

#[derive(Serialize)]
struct CurveOut {
    count: zetterberg::curves::CurveCount,
    #[serde(skip_serializing_if = "Option::is_none")]
    direct: Option<zetterberg::curves::DirectCount>,
}

fn cmd_curves_count(cfg: &RunConfig, t: TowerArgs, parity: ParityArg, direct: bool) -> Outcome {
    let tower = cfg.tower(t)?;
    let parities: &[Parity] = match parity {
        ParityArg::Even => &[Parity::Even],
        ParityArg::Odd => &[Parity::Odd],
        ParityArg::Both => &[Parity::Even, Parity::Odd],
    };
    let mut out = Vec::new();
    for &p in parities {
        let count = count_n(&tower, p)?;
        let direct = direct.then(|| count_points_direct(&tower, p)).transpose()?;
        out.push(CurveOut { count, direct });
    }
    let value = if out.len() == 1 {
        serde_json::to_value(&out[0])
    } else {
        serde_json::to_value(&out)
    }
    .map_err(resource)?;
    cfg.emit(&value, || {
        out.iter()
            .map(|c| {
                format!(
                    "{} N_s = {} N_chi = {} g = {} Hasse–Weil = {}\n",
                    c.count.parity.as_str(),
                    c.count.n_s,
                    c.count.n_chi,
                    c.count.genus,
                    c.count.hasse_weil
                )
            })
            .collect()
    })?;
    for c in &out {
        check(c.count.hasse_weil, "point count outside the Hasse–Weil interval")?;
        if let Some(d) = &c.direct {
            check(d.total == c.count.n_chi, "direct count disagrees with 2^m(1 + N_s)")?;
        }
    }
    Ok(())
}

fn cmd_delta_audit(cfg: &RunConfig, t: TowerArgs, alphas: usize) -> Outcome {
    let tower = cfg.tower(t)?;
    let audit = delta_audit(tower.fq(), alphas)?;
    let holds = audit.holds();
    cfg.emit(&audit, || {
        format!(
            "F_{}: {} even and {} odd certificates, all hold = {holds}\n",
            audit.q,
            audit.even.len(),
            audit.odd.len()
        )
    })?;
    check(holds, "some Δ certificate fails")
}

fn cmd_weil_audit(cfg: &RunConfig, t: TowerArgs, alphas: usize) -> Outcome {
    let tower = cfg.tower(t)?;
    let report = weil_sum_audit(&tower, alphas)?;
    let ok = report.ok();
    cfg.emit(&report, || {
        format!(
            "F_{}: Σ η(1 - x²) = {}, Σ η(D - x²) = {}, {} + {} α rows, all within bounds = {ok}\n",
            report.q,
            report.even.sum_k_minus_x2,
            report.odd.sum_k_minus_x2,
            report.even.rows.len(),
            report.odd.rows.len()
        )
    })?;
    check(ok, "Weil audit failed")
}

fn cmd_verify(cfg: &RunConfig, tier: TierArg) -> Outcome {
    let opts = VerifyOptions {
        tier: match tier {
            TierArg::Fast => Tier::Fast,
            TierArg::Standard => Tier::Standard,
            TierArg::Long => Tier::Long,
        },
        workers: cfg.workers as usize,
        memory_budget: cfg.memory_budget,
        checkpoint_dir: cfg.checkpoint_dir.clone(),
    };
    let text = cfg.format == Format::Text;
    let mut results = verify::run(&opts, |r| {
        if text {
            eprintln!("{} {} ({} ms) {}", if r.passed { "PASS" } else { "FAIL" }, r.id, r.elapsed_ms, r.detail);
        }
    });
    if cfg.no_timing {
        results.iter_mut().for_each(|r| r.elapsed_ms = 0);
    }
    let failed: Vec<&str> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    cfg.emit(&results, || {
        format!("{} checks, {} failed\n", results.len(), failed.len())
    })?;
    check(failed.is_empty(), format!("failed checks: {}", failed.join(", ")))
}

fn dispatch(cli: Cli) -> Outcome {
    let cfg = &cli.run;
    match cli.command {
        Command::Classify { q } => cmd_classify(cfg, &q),
        Command::Code {
            tower,
            kind,
            rho_cap,
            distance_cap,
        } => cmd_code(cfg, tower, kind, rho_cap, distance_cap),
        Command::Iq0 {
            tower,
            shard,
            parity,
            block,
            max_blocks,
        } => cmd_iq0(cfg, tower, shard, parity, block, max_blocks),
        Command::Merge { reports } => cmd_merge(cfg, &reports),
        Command::PiCheck { tower, solutions } => cmd_pi_check(cfg, tower, solutions),
        Command::SStar { q0 } | Command::Curves {
            command: CurvesCommand::SStar { q0 },
        } => cmd_s_star(cfg, q0),
        Command::Curves {
            command: CurvesCommand::Count { tower, parity, direct },
        } => cmd_curves_count(cfg, tower, parity, direct),
        Command::DeltaAudit { tower, alphas } => cmd_delta_audit(cfg, tower, alphas),
        Command::WeilAudit { tower, alphas } => cmd_weil_audit(cfg, tower, alphas),
        Command::Verify { tier } => cmd_verify(cfg, tier),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
