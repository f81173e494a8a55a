use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use cubekit::canon::{canonical_form_with, CanonOptions};
use cubekit::census::{self, MatchingPattern, SearchOptions, SearchSpec};
use cubekit::cycles::MonodromyClass;
use cubekit::dehn::{self, Threshold};
use cubekit::surgery::{self, Move};
use cubekit::{fixtures, invariant_report, Cubulation, Error, Exec, ParseOptions};

#[derive(Parser)]
#[command(name = "cubekit", version, about = "Cubulations of hyperbolic 4-manifolds with cusps")]
struct Cli {
    /// Worker threads; 1 runs sequentially, 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Search budget: raw candidates for search/census, trials for canon.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pattern {
    Any,
    Opposite,
}

#[derive(Subcommand)]
enum Command {
    /// Check a cubulation file and list every problem.
    Validate { file: PathBuf },
    /// Cusps, Euler characteristic and volume.
    Analyze { file: PathBuf },
    /// Find cubulations with prescribed cusps.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        orientable: bool,
        #[arg(long)]
        cusps: Option<usize>,
        /// Comma-separated classes (I, -I, R4, refl-axis, refl-diag).
        #[arg(long, allow_hyphen_values = true)]
        monodromy: Option<String>,
        #[arg(long, value_enum, default_value_t = Pattern::Any)]
        pattern: Pattern,
        /// List every class as census rows instead of printing the first match.
        #[arg(long)]
        all: bool,
    },
    /// Enumerate all classes with `n` hypercubes into a census file.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        orientable: bool,
        #[arg(long)]
        cusps: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Insert a merger gadget, removing one cusp.
    Flower {
        file: PathBuf,
        #[arg(long)]
        edge: Option<usize>,
        #[command(flatten)]
        output: SurgeryOutput,
    },
    /// Insert splitter gadgets in series.
    Split {
        file: PathBuf,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        edge: usize,
        #[command(flatten)]
        output: SurgeryOutput,
    },
    /// Splitters and flowers until exactly `k` cusps remain.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        cusps: usize,
        #[command(flatten)]
        output: SurgeryOutput,
    },
    /// Cyclic cover of degree `n` unrolled along one pairing.
    Cover {
        file: PathBuf,
        #[arg(long)]
        n: usize,
        /// Defaults to the first pairing every cycle crosses evenly.
        #[arg(long)]
        edge: Option<usize>,
        #[command(flatten)]
        output: SurgeryOutput,
    },
    /// Check Dehn filling slopes against the 2π criterion.
    Fill {
        file: PathBuf,
        /// `p,q,r;p,q,r;...`, one triple per cusp in analyze order.
        #[arg(long, allow_hyphen_values = true)]
        slopes: String,
        #[arg(long, default_value = "weak")]
        threshold: String,
        #[arg(long, default_value_t = dehn::V4_DEFAULT)]
        v4: f64,
    },
    /// Canonical form of one file, or whether two files are equivalent.
    Canon {
        file: PathBuf,
        other: Option<PathBuf>,
    },
    /// Incidence graph in DOT.
    Graph { file: PathBuf },
    /// Write the bundled example cubulations into a directory.
    SeedFixtures { dir: PathBuf },
}

#[derive(clap::Args)]
struct SurgeryOutput {
    /// Write the cubulation here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the JSON-lines move log here instead of stderr.
    #[arg(long)]
    log: Option<PathBuf>,
}

struct Ctx {
    exec: Exec,
    budget: Option<u64>,
    format: Format,
}

impl Ctx {
    fn search_options(&self) -> SearchOptions {
        let mut o = SearchOptions { exec: self.exec, ..Default::default() };
        if let Some(b) = self.budget {
            o.budget = b.into();
        }
        o
    }

    fn canon_options(&self) -> CanonOptions {
        let mut o = CanonOptions { exec: self.exec, ..Default::default() };
        if let Some(b) = self.budget {
            o.budget = b;
        }
        o
    }
}

enum Failure {
    Domain(String),
    #[cfg_attr(not(feature = "parallel"), allow(dead_code))]
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Out = Result<String, Failure>;

fn read(path: &Path) -> Result<Cubulation, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    Cubulation::parse(&text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn validate(ctx: &Ctx, path: &Path) -> Out {
    let text = fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    let c = Cubulation::parse_with(&text, ParseOptions { allow_disconnected: true, lenient: true })
        .map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    let problems: Vec<String> = c.validate().iter().map(ToString::to_string).collect();
    let body = match ctx.format {
        Format::Json => format!("{}\n", json!({ "valid": problems.is_empty(), "problems": problems })),
        Format::Tsv if problems.is_empty() => "valid\n".to_string(),
        Format::Tsv => problems.iter().map(|p| format!("{p}\n")).collect(),
    };
    if problems.is_empty() {
        Ok(body)
    } else {
        print!("{body}");
        Err(Failure::Domain(format!("{} problems found", problems.len())))
    }
}

fn analyze(ctx: &Ctx, path: &Path) -> Out {
    let r = invariant_report(&read(path)?)?;
    let shape = |c: &cubekit::CuspReport| c.shape.map_or("-".to_string(), |s| s.to_string());
    if ctx.format == Format::Json {
        let cusps: Vec<_> = r
            .cusps
            .iter()
            .map(|c| json!({ "h": c.h, "class": c.monodromy_class.label(), "shape": shape(c), "section_volume": c.section_volume }))
            .collect();
        let v = json!({
            "n": r.n, "cusps": r.k, "chi": r.chi,
            "volume": r.volume.to_string(), "volume_decimal": format!("{:.6}", r.volume.to_f64()),
            "total_section_volume": r.total_section_volume, "orientable": r.orientable,
            "cusp_reports": cusps,
        });
        return Ok(format!("{v}\n"));
    }
    let mut s = String::new();
    for c in &r.cusps {
        let _ = writeln!(s, "{}\t{}\t{}\t{}", c.h, c.monodromy_class, shape(c), c.section_volume);
    }
    let _ = writeln!(
        s,
        "{}\t{}\t{}\t{}\t{:.6}\t{}\t{}",
        r.n,
        r.k,
        r.chi,
        r.volume,
        r.volume.to_f64(),
        r.total_section_volume,
        if r.orientable { "orientable" } else { "non-orientable" }
    );
    Ok(s)
}

fn parse_classes(s: &str) -> Result<Vec<MonodromyClass>, Failure> {
    s.split(',').map(|x| x.trim().parse::<MonodromyClass>().map_err(Failure::from)).collect()
}

fn census_text(ctx: &Ctx, entries: &[census::CensusEntry]) -> Out {
    match ctx.format {
        Format::Tsv => Ok(census::census_to_string(entries)?),
        Format::Json => Ok(entries
            .iter()
            .map(|e| {
                format!(
                    "{}\n",
                    json!({ "canonical_form": e.form.to_hex(), "n": e.n, "orientable": e.orientable, "cusp_profile": e.profile_string() })
                )
            })
            .collect()),
    }
}

fn search(ctx: &Ctx, spec: SearchSpec, all: bool) -> Out {
    if all {
        let entries = census::enumerate(&spec, &ctx.search_options())?;
        return census_text(ctx, &entries);
    }
    let found = census::first_match(&spec, &ctx.search_options())?
        .ok_or_else(|| Failure::Domain("no cubulation matches".into()))?;
    let profile = cubekit::cycles::cusp_profile(&found);
    let profile: Vec<String> = profile.iter().map(|(h, c)| format!("{h}:{c}")).collect();
    Ok(format!("# cusp profile {}\n{found}", profile.join(",")))
}

fn emit_surgery(c: &Cubulation, log: &[String], out: &SurgeryOutput) -> Out {
    let log_text: String = log.iter().map(|l| format!("{l}\n")).collect();
    match &out.log {
        Some(p) => write_file(p, &log_text)?,
        None => eprint!("{log_text}"),
    }
    match &out.out {
        Some(p) => {
            write_file(p, &c.serialize())?;
            Ok(String::new())
        }
        None => Ok(c.serialize()),
    }
}

fn move_line(m: &Move) -> String {
    serde_json::to_string(m).expect("moves serialize")
}

fn fill(ctx: &Ctx, path: &Path, slopes: &str, threshold: &str, v4: f64) -> Out {
    let c = read(path)?;
    let threshold: Threshold = threshold.parse()?;
    let report = dehn::check_2pi(&c, &dehn::parse_slopes(slopes)?, threshold, v4)?;
    if ctx.format == Format::Tsv {
        return Ok(report.to_string());
    }
    let slopes: Vec<_> = report
        .slopes
        .iter()
        .map(|s| {
            json!({ "h": s.slope.h, "slope": [s.slope.p, s.slope.q, s.slope.r],
                    "length_sq": s.length_sq as u64, "length": format!("{:.6}", s.length), "pass": s.pass })
        })
        .collect();
    let i = report.invariants;
    let v = json!({
        "slopes": slopes, "all_pass_2pi": report.all_pass_2pi,
        "chi": i.chi, "signature": i.signature, "norm_bound": format!("{:.6}", i.norm_bound), "v4": i.v4,
    });
    Ok(format!("{v}\n"))
}

fn canon(ctx: &Ctx, a: &Path, b: Option<&Path>) -> Out {
    let opts = ctx.canon_options();
    let fa = canonical_form_with(&read(a)?, &opts)?;
    let Some(b) = b else {
        return Ok(match ctx.format {
            Format::Tsv => format!("{fa}\n"),
            Format::Json => format!("{}\n", json!({ "canonical_form": fa.to_hex() })),
        });
    };
    let cb = read(b)?;
    let equivalent = cb.n() == fa.n() && canonical_form_with(&cb, &opts)? == fa;
    Ok(match ctx.format {
        Format::Tsv => format!("{}\n", if equivalent { "equivalent" } else { "inequivalent" }),
        Format::Json => format!("{}\n", json!({ "equivalent": equivalent })),
    })
}

fn seed_fixtures(dir: &Path) -> Out {
    fs::create_dir_all(dir).map_err(|e| Failure::Domain(format!("{}: {e}", dir.display())))?;
    let files = [
        ("example1.cub", fixtures::EXAMPLE1),
        ("example2.cub", fixtures::EXAMPLE2),
        ("seed.cub", fixtures::SEED),
        ("two_cusps_r4.cub", fixtures::TWO_CUSPS_R4),
        ("two_cusps_minus_i.cub", fixtures::TWO_CUSPS_MINUS_I),
    ];
    let mut s = String::new();
    for (name, text) in files {
        write_file(&dir.join(name), text)?;
        let _ = writeln!(s, "{name}");
    }
    Ok(s)
}

fn run(cli: Cli) -> Out {
    let ctx = Ctx { exec: if cli.jobs == 1 { Exec::Sequential } else { Exec::Parallel }, budget: cli.budget, format: cli.format };
    match cli.command {
        Command::Validate { file } => validate(&ctx, &file),
        Command::Analyze { file } => analyze(&ctx, &file),
        Command::Search { n, orientable, cusps, monodromy, pattern, all } => {
            let mut spec = SearchSpec::new(n).with_pattern(match pattern {
                Pattern::Any => MatchingPattern::Any,
                Pattern::Opposite => MatchingPattern::OppositeFacets,
            });
            spec.orientable_only = orientable;
            spec.cusps = cusps;
            if let Some(m) = monodromy {
                spec = spec.with_monodromy(parse_classes(&m)?);
            }
            search(&ctx, spec, all)
        }
        Command::Census { n, orientable, cusps, out } => {
            let mut spec = SearchSpec::new(n);
            spec.orientable_only = orientable;
            spec.cusps = cusps;
            let entries = census::enumerate(&spec, &ctx.search_options())?;
            match out {
                Some(p) => {
                    census::census_write(&entries, &p)?;
                    Ok(format!("{}\n", entries.len()))
                }
                None => census_text(&ctx, &entries),
            }
        }
        Command::Flower { file, edge, output } => {
            let c = read(&file)?;
            let (result, cert) = surgery::insert_flower(&c, edge)?;
            let m = cert.to_move(c.n());
            let line = json!({
                "op": m.op, "edge": m.edge, "count": m.count, "n_before": m.n_before, "n_after": m.n_after,
                "cusps_before": m.cusps_before, "cusps_after": m.cusps_after,
                "merged": [cert.merged.0.to_string(), cert.merged.1.to_string()],
                "alpha": cert.alpha.to_string(), "beta": cert.beta.to_string(),
            });
            emit_surgery(&result, &[line.to_string()], &output)
        }
        Command::Split { file, count, edge, output } => {
            let c = read(&file)?;
            let before = invariant_report(&c)?.k;
            let result = surgery::insert_splitter(&c, edge, count)?;
            let m = Move {
                op: "split",
                edge,
                count,
                n_before: c.n(),
                n_after: result.n(),
                cusps_before: before,
                cusps_after: invariant_report(&result)?.k,
            };
            emit_surgery(&result, &[move_line(&m)], &output)
        }
        Command::Reduce { file, cusps, output } => {
            let (result, log) = surgery::reduce_to_k(&read(&file)?, cusps)?;
            let lines: Vec<String> = log.iter().map(move_line).collect();
            emit_surgery(&result, &lines, &output)
        }
        Command::Cover { file, n, edge, output } => {
            let c = read(&file)?;
            let edge = edge.or_else(|| surgery::balanced_edge(&c)).unwrap_or(0);
            let before = invariant_report(&c)?.k;
            let result = surgery::cyclic_unroll(&c, edge, n)?;
            let m = Move {
                op: "cover",
                edge,
                count: n,
                n_before: c.n(),
                n_after: result.n(),
                cusps_before: before,
                cusps_after: invariant_report(&result)?.k,
            };
            emit_surgery(&result, &[move_line(&m)], &output)
        }
        Command::Fill { file, slopes, threshold, v4 } => fill(&ctx, &file, &slopes, &threshold, v4),
        Command::Canon { file, other } => canon(&ctx, &file, other.as_deref()),
        Command::Graph { file } => Ok(read(&file)?.to_dot()),
        Command::SeedFixtures { dir } => seed_fixtures(&dir),
    }
}

#[cfg(feature = "parallel")]
fn configure_threads(jobs: usize) -> Result<(), Failure> {
    if jobs > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::Usage(format!("--jobs: {e}")))?;
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(_jobs: usize) -> Result<(), Failure> {
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads(cli.jobs).and_then(|()| run(cli));
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
