//! Verification CLI: builds and caches the catalog of solvable primitive
//! permutation groups, runs claim suites by name and tier, and renders
//! deterministic JSON/CSV reports.
//!
//! Exit codes: 0 all verdicts pass; 1 at least one fail or mismatch verdict
//! (reports still written); 2 configuration or environment error; 3 a
//! requested degree is not available at the configured tier (or a universe
//! could not be assembled).

mod cache;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use orbitcheck_verify::claims::{self, Claim, RunContext};
use orbitcheck_verify::report::{ClaimReport, RunReport, Verdict};
use std::path::PathBuf;
use std::time::Duration;

#[derive(Parser)]
#[command(name = "orbitcheck")]
#[command(about = "Exact verification suites for orbit and subgroup bounds of solvable permutation and linear groups")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Run one verification claim and write its report.
    Verify {
        /// Claim name: table1 | lemma24 | lemma25 | thmperm2 | inequalities
        /// | gamma-cases | main-theorems
        claim: String,
        /// Comma-separated degrees (defaults to the claim's degrees at the
        /// configured tier)
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<u64>,
        /// Completeness tier: 1 or 2
        #[arg(long, default_value_t = 1)]
        tier: u8,
        /// Cache directory (defaults to $ORBITCHECK_CACHE or ./.orbitcheck-cache)
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Report output path (JSON); stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker count for the verification pool
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Runtime budget for the claim, in seconds; exceeding it yields an
        /// incomplete verdict instead of hanging
        #[arg(long)]
        max_seconds: Option<u64>,
        /// Also run the cycle-bound checks on a small imprimitive universe
        /// (advisory; lemma24 only)
        #[arg(long, default_value_t = false)]
        include_imprimitive: bool,
        /// Extra module description file (JSON) for main-theorems
        #[arg(long)]
        modules: Option<PathBuf>,
    },
    /// Build or inspect the catalog cache.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Render a report file to CSV and a text table.
    Report {
        #[command(subcommand)]
        action: ReportAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Construct the catalog for the given degrees (idempotent).
    Build {
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        tier: u8,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// List cached degrees with entry counts and completeness.
    List {
        #[arg(long)]
        cache: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ReportAction {
    /// Render FILE to a CSV summary and a human-readable table.
    Render {
        file: PathBuf,
        /// CSV output path; stdout when omitted
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Text output path; stdout when omitted
        #[arg(long)]
        text: Option<PathBuf>,
    },
}

fn main() {
    let code = match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            2
        }
    };
    std::process::exit(code);
}

fn run() -> Result<i32> {
    let cli = Cli::parse();
    match cli.command {
        Commands::Verify {
            claim,
            degrees,
            tier,
            cache,
            out,
            jobs,
            max_seconds,
            include_imprimitive,
            modules,
        } => cmd_verify(
            &claim,
            degrees,
            tier,
            cache,
            out,
            jobs,
            max_seconds,
            include_imprimitive,
            modules,
        ),
        Commands::Catalog { action } => match action {
            CatalogAction::Build {
                degrees,
                tier,
                cache,
            } => cmd_catalog_build(degrees, tier, cache),
            CatalogAction::List { cache } => cmd_catalog_list(cache),
        },
        Commands::Report { action } => match action {
            ReportAction::Render { file, csv, text } => cmd_report_render(file, csv, text),
        },
    }
}

fn validate_tier(tier: u8) -> Result<()> {
    if tier != 1 && tier != 2 {
        return Err(anyhow!("tier must be 1 or 2, got {tier}"));
    }
    Ok(())
}

fn init_pool(jobs: usize) -> Result<()> {
    if jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("initializing the worker pool")?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    claim_name: &str,
    degrees: Vec<u64>,
    tier: u8,
    cache: Option<PathBuf>,
    out: Option<PathBuf>,
    jobs: usize,
    max_seconds: Option<u64>,
    include_imprimitive: bool,
    modules: Option<PathBuf>,
) -> Result<i32> {
    validate_tier(tier)?;
    init_pool(jobs)?;
    let claim = Claim::parse(claim_name)
        .ok_or_else(|| anyhow!("unknown claim {claim_name:?}; see --help for the claim list"))?;
    let degrees = if degrees.is_empty() {
        claim.default_degrees(tier)
    } else {
        degrees
    };
    // Unsupported degrees are configuration errors (exit 2); tier
    // violations are the incomplete-universe condition (exit 3).
    if let Some(violations) =
        claims::check_degrees(claim, &degrees, tier).map_err(|e| anyhow!("{e}"))?
    {
        let mut reports = Vec::new();
        for d in &violations {
            let mut r = ClaimReport::new(
                claim.name(),
                vec![*d],
                format!("degree {d} requires tier {} (configured tier {tier})", claim.degree_tier(*d)),
            );
            r.verdict = Verdict::IncompleteUniverse;
            r.completeness = "unavailable at configured tier".into();
            reports.push(r);
        }
        let run = RunReport::new(reports);
        emit(&run, out.as_deref())?;
        return Ok(3);
    }

    // Assemble the universe.
    let catalog = if claim.needs_catalog() {
        let catalog_degrees: Vec<u64> = if claim == Claim::Inequalities {
            // Part (c) wants every reference degree available at this tier.
            orbitcheck_verify::order_bounds::REFERENCE_LARGEST
                .iter()
                .map(|(d, _)| *d)
                .filter(|&d| Claim::Table1.degree_tier(d) <= tier)
                .collect()
        } else {
            degrees.clone()
        };
        let dir = cache::cache_dir(cache.as_deref());
        let (catalog, _stats) = cache::ensure_catalog(&dir, &catalog_degrees)?;
        catalog
    } else {
        orbitcheck_core::zoo::Catalog::default()
    };

    let mut ctx = RunContext::new(&catalog, tier);
    ctx.include_imprimitive = include_imprimitive;
    ctx.budget = max_seconds.map(Duration::from_secs);
    if let Some(path) = modules {
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("reading module file {}", path.display()))?;
        ctx.extra_modules = parse_modules(&text)?;
    }
    let reports = claims::run_claim(claim, &degrees, &mut ctx).map_err(|e| anyhow!("{e}"))?;
    let run = RunReport::new(reports);
    emit(&run, out.as_deref())?;
    Ok(exit_code(run.worst_verdict()))
}

fn parse_modules(text: &str) -> Result<Vec<orbitcheck_core::linear::ModuleDescription>> {
    if let Ok(many) = serde_json::from_str::<Vec<orbitcheck_core::linear::ModuleDescription>>(text) {
        return Ok(many);
    }
    let one: orbitcheck_core::linear::ModuleDescription =
        serde_json::from_str(text).context("parsing module description")?;
    Ok(vec![one])
}

fn exit_code(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::Pass => 0,
        Verdict::Fail | Verdict::Indeterminate => 1,
        Verdict::IncompleteUniverse => 3,
    }
}

fn emit(run: &RunReport, out: Option<&std::path::Path>) -> Result<()> {
    let json = run.to_json();
    match out {
        Some(path) => {
            std::fs::write(path, &json)
                .with_context(|| format!("writing report to {}", path.display()))?;
            // One-line summary per report on stdout.
            for r in &run.reports {
                println!(
                    "{} [{}]: {}",
                    r.claim,
                    r.universe
                        .degrees
                        .iter()
                        .map(|d| d.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                    r.verdict.as_str()
                );
            }
        }
        None => println!("{json}"),
    }
    Ok(())
}

fn cmd_catalog_build(degrees: Vec<u64>, tier: u8, cache_flag: Option<PathBuf>) -> Result<i32> {
    validate_tier(tier)?;
    let degrees = if degrees.is_empty() {
        let mut d = orbitcheck_core::zoo::TIER1_DEGREES.to_vec();
        if tier >= 2 {
            d.extend(orbitcheck_core::zoo::TIER2_DEGREES);
        }
        d
    } else {
        degrees
    };
    // Validate degrees (non-prime-powers and out-of-range are config errors)
    // and tier availability before constructing anything.
    for &d in &degrees {
        let routes = orbitcheck_core::zoo::degree_routes(d).map_err(|e| anyhow!("{e}"))?;
        if routes.tier > tier {
            eprintln!("degree {d} requires tier {} (configured tier {tier})", routes.tier);
            return Ok(3);
        }
    }
    let dir = cache::cache_dir(cache_flag.as_deref());
    let (catalog, stats) = cache::ensure_catalog(&dir, &degrees)?;
    println!(
        "catalog at {}: built degrees {:?}, cache hits {:?}",
        dir.display(),
        stats.built,
        stats.cached
    );
    for (&d, entries) in &catalog.entries {
        if degrees.contains(&d) {
            let meta = &catalog.meta[&d];
            println!(
                "  degree {d}: {} entries, tier {}, {}",
                entries.len(),
                meta.tier,
                meta.completeness
            );
        }
    }
    Ok(0)
}

fn cmd_catalog_list(cache_flag: Option<PathBuf>) -> Result<i32> {
    let dir = cache::cache_dir(cache_flag.as_deref());
    match cache::load_manifest(&dir)? {
        Some(manifest) => {
            println!("catalog cache at {}:", dir.display());
            for (degree, m) in &manifest.degrees {
                println!(
                    "  degree {degree}: {} entries, tier {}, {} (routes: {})",
                    m.entries,
                    m.tier,
                    m.completeness,
                    m.routes.join(", ")
                );
            }
            Ok(0)
        }
        None => {
            println!("no catalog cache at {}", dir.display());
            Ok(0)
        }
    }
}

fn cmd_report_render(
    file: PathBuf,
    csv: Option<PathBuf>,
    text: Option<PathBuf>,
) -> Result<i32> {
    let content = std::fs::read_to_string(&file)
        .with_context(|| format!("reading report {}", file.display()))?;
    let run = RunReport::from_json(&content)
        .with_context(|| format!("parsing report {}", file.display()))?;
    if run.schema_version != orbitcheck_verify::report::REPORT_SCHEMA_VERSION {
        return Err(anyhow!(
            "report schema version {} unsupported",
            run.schema_version
        ));
    }
    let csv_out = run.to_csv();
    let text_out = run.to_text();
    match csv {
        Some(path) => std::fs::write(&path, &csv_out)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{csv_out}"),
    }
    match text {
        Some(path) => std::fs::write(&path, &text_out)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text_out}"),
    }
    Ok(0)
}
