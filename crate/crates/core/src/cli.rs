//! Command-line front end: `certify`, `verify` and the `oracle` checks.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Float;

use crate::bounds::{c2_table, master_n_bound, residual_set, MasterBound};
use crate::cases::{build_case, BuildOptions, BuiltCase, CaseId, CaseSpec};
use crate::certificate::{
    BakerRecord, BoundsRecord, CaseCertificate, CertificateFile, ClassPolyRecord, ClassPolys, Incomplete,
    NonvanishingRecord, PairingRecord, PlaceRecord, PrecisionRecord, RatioRecord, Real, ScanRecord, SplittingRecord,
    TableRow, INCOMPLETE, PROVEN,
};
use crate::error::{Error, Result, Stage};
use crate::finale::{check_pairs, close_case, Verdict};
use crate::localfield::DEFAULT_PRIME_LIMIT;
use crate::oracles::{self, OracleReport};
use crate::quadforms::{rounding_is_stable, DEFAULT_PRECISION, PRECISION_CAP};

pub const EXIT_PROVEN: i32 = 0;
pub const EXIT_INCOMPLETE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

/// Environment variable consulted when `--cache-dir` is absent.
pub const CACHE_ENV: &str = "SINGCERT_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CaseSelector {
    #[value(name = "23")]
    C23,
    #[value(name = "31")]
    C31,
    Both,
}

impl CaseSelector {
    pub fn cases(self) -> Vec<CaseId> {
        match self {
            CaseSelector::C23 => vec![CaseId::C23],
            CaseSelector::C31 => vec![CaseId::C31],
            CaseSelector::Both => CaseId::all().to_vec(),
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct CommonArgs {
    #[arg(long, value_enum, default_value = "both")]
    pub case: CaseSelector,
    /// Starting working precision in bits.
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    pub precision: u32,
    /// Highest precision any stage may escalate to.
    #[arg(long = "precision-cap", default_value_t = PRECISION_CAP)]
    pub precision_cap: u32,
    /// Largest prime tried by the valuation scan.
    #[arg(long = "prime-limit", default_value_t = DEFAULT_PRIME_LIMIT)]
    pub prime_limit: u64,
    /// Prime for the local argument instead of the case's reference prime.
    #[arg(long)]
    pub prime: Option<u64>,
    /// Worker threads; all cores when absent.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Class polynomial cache, cross-checked against fresh computation.
    #[arg(long = "cache-dir")]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(name = "singcert", version, about = "Certify the degree-3 singular-moduli cases")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full pipeline and emit a certificate.
    Certify {
        #[command(flatten)]
        common: CommonArgs,
        /// Certificate path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Load a certificate and re-check its exact claims.
    Verify { path: PathBuf },
    /// Independent cross-checks.
    Oracle {
        #[command(subcommand)]
        check: OracleCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Valuation formula against direct local computation, and sum e f = 6.
    ValuationScan {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long = "max-m", default_value_t = 200)]
        max_m: u64,
    },
    /// Random (m, n) samples against the c2 table.
    TableSample {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Ball and exact determinant routes on the residual pairs.
    BallVsExact {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Height identities on random algebraic numbers.
    HeightLaws {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

/// Validated run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub cases: Vec<CaseId>,
    pub build: BuildOptions,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(cases: Vec<CaseId>) -> Self {
        RunConfig {
            cases,
            build: BuildOptions::default(),
            jobs: None,
            out: None,
        }
    }

    pub fn from_args(common: &CommonArgs, out: Option<PathBuf>) -> Result<Self> {
        let usage = |what: &str| Err(Error::precondition(Stage::Cli, what));
        if common.precision < 64 || common.precision > common.precision_cap {
            return usage("need 64 <= --precision <= --precision-cap");
        }
        if common.prime_limit < 11 {
            return usage("--prime-limit must be at least 11");
        }
        if common.jobs == Some(0) {
            return usage("--jobs must be positive");
        }
        if let Some(p) = common.prime {
            if p <= 7 || rug::Integer::from(p).is_probably_prime(30) == rug::integer::IsPrime::No {
                return usage("--prime must be a prime above 7");
            }
        }
        let cache_dir = common
            .cache_dir
            .clone()
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
        Ok(RunConfig {
            cases: common.case.cases(),
            build: BuildOptions {
                prime: common.prime,
                prime_limit: common.prime_limit,
                precision: common.precision,
                precision_cap: common.precision_cap,
                cache_dir,
            },
            jobs: common.jobs,
            out,
        })
    }
}

fn bounds_record(c1: &Float, mb: &MasterBound) -> BoundsRecord {
    BoundsRecord {
        stage: Stage::Bounds,
        c1_used: c1.to_string_radix(10, Some(25)),
        t1: mb.thresholds.t1,
        t2: mb.thresholds.t2,
        monotone_from: mb.monotone_from,
        n_master: mb.n_master,
        tight: mb.tight,
        n_bound: mb.n_bound,
        m_ceiling: mb.m_ceiling,
        contradiction: mb.contradiction,
    }
}

fn orientation_note(spec: &CaseSpec) -> String {
    format!(
        "x has discriminant {} and y has discriminant {}; the opposite assignment is the same statement with (x, m) and (y, n) exchanged. x1, y1 are the real roots, Im x2 > 0, and y_i = P(x_i).",
        spec.disc_x, spec.disc_y
    )
}

fn incomplete_certificate(spec: &CaseSpec, err: &Error) -> CaseCertificate {
    CaseCertificate {
        case: spec.id.label().to_string(),
        verdict: INCOMPLETE.to_string(),
        orientation: orientation_note(spec),
        incomplete: Some(Incomplete {
            stage: err.stage().unwrap_or(Stage::Cli),
            reason: err.to_string(),
        }),
        class_polynomials: None,
        pairing: None,
        splitting_field: None,
        place: None,
        baker: None,
        ratios: None,
        bounds: None,
        reference_bounds: None,
        table: vec![],
        residual: vec![],
        nonvanishing: vec![],
        precision_trace: vec![],
    }
}

/// Certificate for one case.
///
/// Invariant violations are returned as errors. Every other failure yields
/// an INCOMPLETE certificate naming the stage.
pub fn certify_case(spec: &CaseSpec, opts: &BuildOptions) -> Result<CaseCertificate> {
    match run_case(spec, opts) {
        Ok(c) => Ok(c),
        Err(e @ Error::Invariant { .. }) => Err(e),
        Err(e) => {
            log::warn!("case {}: {e}", spec.id.label());
            Ok(incomplete_certificate(spec, &e))
        }
    }
}

fn run_case(spec: &CaseSpec, opts: &BuildOptions) -> Result<CaseCertificate> {
    let built = build_case(spec, opts)?;
    let data = &built.data;
    log::info!("case {}: local argument at p = {}", spec.id.label(), data.pattern.p);

    let mb = master_n_bound(data)?;
    let reference = data.with_c1(spec.reference_c1());
    let reference_mb = master_n_bound(&reference).ok();
    let table = c2_table(data)?;
    let residual = residual_set(data, &table);
    let checks = check_pairs(&built, &residual, opts.precision, opts.precision_cap)?;
    let verdict = close_case(mb.contradiction, &residual, &checks);

    let c1_2dp = format!("{:.2}", data.baker.c1.upper().to_f64());
    let mut trace = vec![
        PrecisionRecord {
            stage: Stage::Quadforms,
            what: format!("H({})", spec.disc_x),
            bits: built.x_class.precision as i64,
        },
        PrecisionRecord {
            stage: Stage::Quadforms,
            what: format!("H({})", spec.disc_y),
            bits: built.y_class.precision as i64,
        },
        PrecisionRecord {
            stage: Stage::Numfield,
            what: "pairing".into(),
            bits: data.pairing.precision as i64,
        },
        PrecisionRecord {
            stage: Stage::Localfield,
            what: "local digits (powers of the uniformizer)".into(),
            bits: data.pattern.place().precision(),
        },
        PrecisionRecord {
            stage: Stage::Lmn,
            what: "height of beta".into(),
            bits: data.beta.precision() as i64,
        },
    ];
    trace.push(PrecisionRecord {
        stage: Stage::Finale,
        what: "largest determinant ball".into(),
        bits: checks.iter().map(|c| c.ball.precision as i64).max().unwrap_or(0),
    });

    let (verdict_str, incomplete) = match &verdict {
        Verdict::Proven => (PROVEN, None),
        Verdict::Incomplete { stage, reason } => (
            INCOMPLETE,
            Some(Incomplete {
                stage: *stage,
                reason: reason.clone(),
            }),
        ),
    };
    let scan = |s: &crate::localfield::PrimeScan| ScanRecord {
        p: s.p,
        places: s.places.iter().map(|pl| (pl.e as u64, pl.f as u64, pl.matches)).collect(),
    };
    let pattern = &data.pattern;
    Ok(CaseCertificate {
        case: spec.id.label().to_string(),
        verdict: verdict_str.to_string(),
        orientation: orientation_note(spec),
        incomplete,
        class_polynomials: Some(ClassPolys {
            stage: Stage::Quadforms,
            x: ClassPolyRecord::new(&built.x_class, rounding_is_stable(&built.x_class)?),
            y: ClassPolyRecord::new(&built.y_class, rounding_is_stable(&built.y_class)?),
        }),
        pairing: Some(PairingRecord {
            stage: Stage::Numfield,
            relator: crate::certificate::rational_strings(&data.pairing.relator),
            y_swapped: data.pairing.y_swapped,
        }),
        splitting_field: Some(SplittingRecord {
            stage: Stage::Localfield,
            shift: built.splitting.shift,
            minpoly: crate::certificate::rational_strings(built.splitting.minpoly()),
            x: built.splitting.x.iter().map(crate::certificate::rational_strings).collect(),
            y: built.splitting.y.iter().map(crate::certificate::rational_strings).collect(),
        }),
        place: Some(PlaceRecord {
            stage: Stage::Localfield,
            prime: pattern.p,
            reference_prime: spec.reference_prime,
            first_scan_prime: built.first_scan.p,
            e: pattern.e as u64,
            f: pattern.f as u64,
            m0: pattern.m0,
            v0: pattern.v0,
            valuations: pattern.valuations.to_vec(),
            local_precision: pattern.place().precision(),
            scan: {
                let mut seen = std::collections::BTreeMap::new();
                for s in built.first_scan.scanned.iter().chain(&pattern.scanned) {
                    seen.entry(s.p).or_insert_with(|| scan(s));
                }
                seen.into_values().collect()
            },
        }),
        baker: Some(BakerRecord {
            stage: Stage::Lmn,
            d: data.baker.d as u64,
            height: Real::from_ball(data.baker.height.ball()),
            c1_prime: Real::from_ball(&data.baker.c1p),
            c1: Real::from_ball(&data.baker.c1),
            reference_c1: spec.reference_c1.to_string(),
            matches_reference: c1_2dp == spec.reference_c1,
        }),
        ratios: Some(RatioRecord {
            stage: Stage::Bounds,
            abs_x1_x2: Real::from_ball(&data.x12),
            abs_y1_y2: Real::from_ball(&data.y12),
            abs_x3_x1: Real::from_ball(&data.x31),
            abs_y3_y1: Real::from_ball(&data.y31),
        }),
        bounds: Some(bounds_record(&data.c1, &mb)),
        reference_bounds: reference_mb.map(|r| bounds_record(&reference.c1, &r)),
        table: table
            .iter()
            .map(|row| {
                let reference_n_max = spec.reference_table[row.m as usize - 1];
                TableRow {
                    m: row.m,
                    c2: Real::from_ball(&row.c2),
                    n_max: row.n_max,
                    reference_n_max,
                    discrepancy: row.n_max != reference_n_max,
                }
            })
            .collect(),
        residual,
        nonvanishing: checks
            .iter()
            .map(|c| NonvanishingRecord {
                m: c.m,
                n: c.n,
                ball_im: Real::from_ball(&c.ball.ball.im()),
                ball_precision: c.ball.precision,
                ball_nonzero: c.ball.nonzero,
                norm: c.exact.norm.to_string(),
                routes_agree: c.routes_agree,
            })
            .collect(),
        precision_trace: trace,
    })
}

/// Certificates for every case of the configuration, in order.
pub fn certify(config: &RunConfig) -> Result<CertificateFile> {
    let certs = config
        .cases
        .iter()
        .map(|id| certify_case(id.spec(), &config.build))
        .collect::<Result<Vec<_>>>()?;
    Ok(CertificateFile::new(certs))
}

/// The case as the oracles need it.
pub fn built(id: CaseId, config: &RunConfig) -> Result<BuiltCase> {
    build_case(id.spec(), &config.build)
}

fn exit_for(err: &Error) -> i32 {
    match err {
        Error::Precondition { stage: Stage::Cli, .. } => EXIT_USAGE,
        Error::Invariant { .. } => EXIT_INVARIANT,
        _ => EXIT_INCOMPLETE,
    }
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::precondition(Stage::Cli, e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn run_oracles(check: &OracleCommand) -> Result<Vec<OracleReport>> {
    match check {
        OracleCommand::ValuationScan { common, max_m } => {
            let cfg = RunConfig::from_args(common, None)?;
            with_jobs(cfg.jobs, || {
                cfg.cases
                    .iter()
                    .map(|&id| oracles::valuation_scan(&built(id, &cfg)?, *max_m))
                    .collect()
            })?
        }
        OracleCommand::TableSample { common, samples, seed } => {
            let cfg = RunConfig::from_args(common, None)?;
            with_jobs(cfg.jobs, || {
                cfg.cases
                    .iter()
                    .map(|&id| oracles::table_sample(&built(id, &cfg)?, *samples, *seed))
                    .collect()
            })?
        }
        OracleCommand::BallVsExact { common } => {
            let cfg = RunConfig::from_args(common, None)?;
            with_jobs(cfg.jobs, || {
                cfg.cases
                    .iter()
                    .map(|&id| oracles::ball_vs_exact(&built(id, &cfg)?))
                    .collect()
            })?
        }
        OracleCommand::HeightLaws { trials, seed, jobs } => {
            with_jobs(*jobs, || Ok(vec![oracles::height_laws(*trials, *seed)?]))?
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Certify { common, out } => {
            let cfg = RunConfig::from_args(&common, out)?;
            let file = with_jobs(cfg.jobs, || certify(&cfg))??;
            let text = file.to_toml()?;
            match &cfg.out {
                Some(path) => std::fs::write(path, &text)?,
                None => std::io::stdout().write_all(text.as_bytes())?,
            }
            for c in &file.certificates {
                eprintln!("case {}: {}", c.case, c.verdict);
            }
            Ok(if file.all_proven() { EXIT_PROVEN } else { EXIT_INCOMPLETE })
        }
        Command::Verify { path } => {
            let file = CertificateFile::from_toml(&std::fs::read_to_string(&path)?)?;
            file.recheck()?;
            for c in &file.certificates {
                eprintln!("case {}: {} (re-checked)", c.case, c.verdict);
            }
            Ok(if file.all_proven() { EXIT_PROVEN } else { EXIT_INCOMPLETE })
        }
        Command::Oracle { check } => {
            let reports = run_oracles(&check)?;
            for r in &reports {
                println!("{r}");
            }
            Ok(if reports.iter().all(|r| r.ok()) { EXIT_PROVEN } else { EXIT_INCOMPLETE })
        }
    }
}

/// Parse `args`, run, and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PROVEN };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}
