use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use braidroute::burau::{burau, det_laurent, spectral_log, symplectic, trace_at};
use braidroute::dehornoy::compare;
use braidroute::modular::relative_index_with_cap;
use braidroute::pipeline::{
    assemble, build_cascade, compare_reports, load_order_cache, load_record, load_report, parse_trace_point,
    save_order_cache, save_record, PipelineConfig, RunStatus, Verdict,
};
use braidroute::{BraidWord, BurauMatrix, Cascade, ErrorKind};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

#[derive(Parser)]
#[command(name = "braidroute", version, about = "Braid invariants of period-doubling cascades")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Burau matrix, traces and the symplectic image of a braid.
    Burau {
        #[arg(long)]
        braid: String,
        #[arg(long)]
        strands: usize,
        /// Extra evaluation points for the trace, as "re,im" or "unit:p/q".
        #[arg(long = "t")]
        points: Vec<String>,
    },
    /// Compares two braids (one word per file) in the braid order.
    Order {
        #[arg(long)]
        strands: usize,
        a: PathBuf,
        b: PathBuf,
    },
    /// Relative index of a braid's cyclic image inside the image of the braid group mod N.
    Index {
        #[arg(long)]
        braid: String,
        #[arg(long)]
        strands: usize,
        #[arg(long = "mod")]
        modulus: u64,
        /// Image-order cache file, read before and written after.
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long, default_value_t = braidroute::modular::DEFAULT_ORBIT_CAP)]
        orbit_cap: u64,
    },
    /// Follows the fixed-point cascade of the Hénon map and writes the record.
    Cascade {
        #[command(flatten)]
        path: PathArgs,
        #[arg(long)]
        out: PathBuf,
        /// Also write the doublings as a CSV table.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Runs the full pipeline and writes the invariant report.
    Invariant {
        /// TOML configuration; flags override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        path: PathArgs,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long = "mod")]
        moduli: Vec<u64>,
        #[arg(long = "prime")]
        primes: Vec<u64>,
        #[arg(long = "t")]
        points: Vec<String>,
        /// Cascade record to analyze instead of computing one.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Further cascade records, merged into the route section.
        #[arg(long = "record")]
        records: Vec<PathBuf>,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compares two invariant reports.
    Compare { first: PathBuf, second: PathBuf },
}

#[derive(Args)]
struct PathArgs {
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    a_min: Option<f64>,
    #[arg(long)]
    a_max: Option<f64>,
    #[arg(long)]
    max_doublings: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

impl PathArgs {
    fn apply(&self, cfg: &mut PipelineConfig) {
        if let Some(b) = self.b {
            cfg.b = b;
        }
        if let Some(a) = self.a_min {
            cfg.a_min = a;
        }
        if let Some(a) = self.a_max {
            cfg.a_max = a;
        }
        if let Some(m) = self.max_doublings {
            cfg.max_doublings = m;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
    }
}

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Config => 2,
        ErrorKind::Numerical => 3,
        ErrorKind::Resource => 4,
        ErrorKind::Other => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<braidroute::Error>().map_or(1, |e| exit_code(e.kind()));
            ExitCode::from(code)
        }
    }
}

fn read_braid(path: &Path, strands: usize) -> Result<BraidWord> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(BraidWord::parse(&text, strands)?)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Burau { braid, strands, points } => {
            let word = BraidWord::parse(&braid, strands)?;
            let m: BurauMatrix = burau(&word);
            let s = symplectic(&word);
            let mut traces = Vec::new();
            for p in &points {
                let z = trace_at(&word, parse_trace_point(p)?)?;
                traces.push(json!({ "t": p, "value": [z.re, z.im] }));
            }
            let sym: Vec<Vec<String>> =
                (0..s.size()).map(|r| (0..s.size()).map(|c| s.get(r, c).to_string()).collect()).collect();
            let out = json!({
                "braid": word,
                "burau": m,
                "det": det_laurent(&m),
                "trace": m.trace(),
                "traces": traces,
                "symplectic": sym,
                "spectral_log": spectral_log(&word),
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::Order { strands, a, b } => {
            let (a, b) = (read_braid(&a, strands)?, read_braid(&b, strands)?);
            let word = match compare(&a, &b)? {
                std::cmp::Ordering::Less => "LESS",
                std::cmp::Ordering::Equal => "EQUAL",
                std::cmp::Ordering::Greater => "GREATER",
            };
            println!("{word}");
        }
        Command::Index { braid, strands, modulus, cache, orbit_cap } => {
            let word = BraidWord::parse(&braid, strands)?;
            if let Some(c) = &cache {
                load_order_cache(c)?;
            }
            let index = relative_index_with_cap(&word, modulus, orbit_cap)?;
            if let Some(c) = &cache {
                save_order_cache(c)?;
            }
            println!("{index}");
        }
        Command::Cascade { path, out, csv } => {
            let mut cfg = PipelineConfig::default();
            path.apply(&mut cfg);
            let record = build_cascade(&cfg)?;
            save_record(&record, &cfg.projection(), &out)?;
            if let Some(csv_path) = csv {
                write_csv(&record, &csv_path)?;
            }
            if let Some(why) = &record.termination {
                eprintln!("cascade stopped early: {why}");
                return Ok(3);
            }
        }
        Command::Invariant { config, path, depth, moduli, primes, points, input, records, cache, out } => {
            let mut cfg = match &config {
                Some(p) => {
                    let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                    toml::from_str(&text).map_err(|e| braidroute::Error::Config(format!("{}: {e}", p.display())))?
                }
                None => PipelineConfig::default(),
            };
            path.apply(&mut cfg);
            if let Some(d) = depth {
                cfg.depth = d;
            }
            if !moduli.is_empty() {
                cfg.moduli = moduli;
            }
            if !primes.is_empty() {
                cfg.primes = primes;
            }
            if !points.is_empty() {
                cfg.trace_points = points;
            }
            if let Some(o) = out {
                cfg.output = Some(o);
            }
            cfg.validate()?;
            if let Some(c) = &cache {
                load_order_cache(c)?;
            }
            let record = match &input {
                Some(p) => load_record(p)?,
                None => build_cascade(&cfg)?,
            };
            let extra = records.iter().map(|p| load_record(p)).collect::<braidroute::Result<Vec<Cascade>>>()?;
            let report = assemble(&cfg, &record, &extra);
            write_output(cfg.output.as_deref(), &report.to_json())?;
            if let Some(c) = &cache {
                save_order_cache(c)?;
            }
            for e in &report.errors {
                eprintln!("{} ({}): {}", e.stage, e.kind, e.message);
            }
            return Ok(match report.status() {
                RunStatus::Complete => 0,
                RunStatus::Partial => 3,
                RunStatus::ResourceLimited => 4,
            });
        }
        Command::Compare { first, second } => {
            let cmp = compare_reports(&load_report(&first)?, &load_report(&second)?)?;
            println!("{}", serde_json::to_string_pretty(&cmp)?);
            if cmp.verdict == Verdict::Distinct {
                eprintln!("reports differ in {} field(s)", cmp.differences.len());
            }
        }
    }
    Ok(0)
}

fn write_csv(record: &Cascade, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(["doubling", "a", "b", "s", "parent_period", "pickup_a"])?;
    for (n, d) in record.doublings.iter().enumerate() {
        let pickup_a = record.path.params_at(d.pickup_s).a;
        w.write_record(&[
            (n + 1).to_string(),
            d.a.to_string(),
            d.b.to_string(),
            d.s.to_string(),
            d.parent.period.to_string(),
            pickup_a.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
