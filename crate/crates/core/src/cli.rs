//! The `pyramid` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{usage, Error, Result};
use crate::lattice::Window;
use crate::pyramid::{enumerate_partitions, enumeration_window, sum_weights, ConfigJson, DimerConfig};
use crate::shuffle::{delete_blocks, fillings, slide, DeficientConfig};
use crate::solid::{enumerate_superrigid, phi_render_halfplanes, PhiWindow, SuperRigid, SuperRigidJson, YoungDiagram};
use crate::svg;
use crate::verify::{self, CheckOptions};
use crate::weights::field_for;

#[derive(Debug, Parser)]
#[command(name = "pyramid", version, about = "Pyramid partitions, dimer shuffling and identity checks")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List pyramid partitions of length n up to a weight degree.
    Enumerate {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        max_degree: u32,
        /// Include every configuration, not just the counts and series.
        #[arg(long)]
        emit_configs: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one shuffle step on a configuration.
    Shuffle {
        #[arg(long)]
        input: PathBuf,
        /// `vertical`, `all`, or a bit mask over the created blocks.
        #[arg(long, default_value = "all")]
        fill: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Edge-weight fields.
    Weights {
        #[command(subcommand)]
        command: WeightsCommand,
    },
    /// Plane partitions and super-rigid triples.
    Solid {
        #[command(subcommand)]
        command: SolidCommand,
    },
    /// Run identity checks.
    Verify {
        /// A check id or `all`.
        check: String,
        #[command(flatten)]
        bounds: VerifyBounds,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a configuration as SVG.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum WeightsCommand {
    /// Dump the horizontal edge weights of a field.
    Dump {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        level: u32,
        /// Half-width of the centered window.
        #[arg(long)]
        window: i32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SolidCommand {
    /// List super-rigid triples with N(n) up to a bound.
    Enumerate {
        #[arg(long)]
        max_n: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a super-rigid triple as two lozenge halves.
    Render {
        #[arg(long)]
        input: PathBuf,
        /// Size of the drawn region in lattice steps.
        #[arg(long)]
        window: i32,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct VerifyBounds {
    #[arg(long)]
    pub degree: Option<u32>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    /// Rows of λ for the one-leg check, e.g. `2,1`.
    #[arg(long, value_delimiter = ',')]
    pub lambda: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Parses arguments, runs the command, and returns the process exit code:
/// 0 on success, 1 when an identity check fails, 2 on usage errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cli.threads {
        Some(0) => Err(Error::Usage("--threads must be positive".into())),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command)),
            Err(e) => Err(Error::Usage(format!("cannot start {t} threads: {e}"))),
        },
        None => dispatch(cli.command),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("pyramid: {e}");
            match e {
                Error::Internal(_) => 1,
                _ => 2,
            }
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => svg::write_file(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|source| Error::Io { path: PathBuf::from("<stdout>"), source })
        }
    }
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(out, &text)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Enumerate { n, max_degree, emit_configs, format, out } => {
            if format != Format::Json {
                return usage("enumerate only writes JSON");
            }
            if n < 1 {
                return usage("--n must be at least 1");
            }
            let items = enumerate_partitions(n, max_degree)?;
            let series = sum_weights(items.iter().map(|e| e.weight), max_degree)?;
            let mut report = json!({
                "n": n,
                "max_degree": max_degree,
                "window": enumeration_window(n, max_degree).as_array(),
                "count": items.len(),
                "series": series.to_json(),
            });
            if emit_configs {
                let configs = items
                    .iter()
                    .map(|e| {
                        Ok(json!({
                            "weight": [e.weight.e0, e.weight.e1],
                            "config": e.config.to_json()?,
                        }))
                    })
                    .collect::<Result<Vec<Value>>>()?;
                report["configs"] = Value::Array(configs);
            }
            emit_json(out.as_deref(), &report)?;
            Ok(0)
        }
        Command::Shuffle { input, fill, out } => {
            let json: ConfigJson = read_json(&input)?;
            let cfg = DimerConfig::from_json(&json)?;
            let def = delete_blocks(&cfg, crate::lattice::Parity::Odd);
            let slid = slide(&def)?;
            let k = slid.missing_count();
            let outputs: Vec<DimerConfig> = match fill.as_str() {
                "all" => fillings(&slid)?.map(|(c, _)| c).collect(),
                "vertical" => vec![slid.fill_vertical()],
                mask => {
                    let m = parse_mask(mask)?;
                    if k < 64 && m >> k != 0 {
                        return usage(format!("mask {mask} names blocks beyond the {k} created ones"));
                    }
                    vec![slid.fill(m)]
                }
            };
            let report = json!({
                "deleted": def.missing_count(),
                "created": k,
                "slid": slid.to_json()?,
                "outputs": outputs.iter().map(|c| c.to_json()).collect::<Result<Vec<_>>>()?,
            });
            emit_json(out.as_deref(), &report)?;
            Ok(0)
        }
        Command::Weights { command: WeightsCommand::Dump { n, level, window, out } } => {
            if n < 1 || window < 1 {
                return usage("--n and --window must be positive");
            }
            let f = field_for(n, level, Window::centered(window))?;
            emit_json(out.as_deref(), &f.to_json())?;
            Ok(0)
        }
        Command::Solid { command: SolidCommand::Enumerate { max_n, n, out } } => {
            let items = enumerate_superrigid(max_n, n)?;
            let rows: Vec<Value> = items
                .iter()
                .map(|(sr, w)| json!({"triple": sr.to_json(), "z": w.e0, "q": w.e1}))
                .collect();
            emit_json(out.as_deref(), &json!({"max_n": max_n, "n": n, "count": rows.len(), "triples": rows}))?;
            Ok(0)
        }
        Command::Solid { command: SolidCommand::Render { input, window, out } } => {
            let json: SuperRigidJson = read_json(&input)?;
            let sr = SuperRigid::from_json(&json)?;
            let (upper, lower) = phi_render_halfplanes(&sr, PhiWindow::square(window))?;
            svg::write_file(&out, &svg::halfplanes_svg(&upper, &lower))?;
            Ok(0)
        }
        Command::Verify { check, bounds, format, out } => {
            let lambda = bounds.lambda.map(YoungDiagram::new).transpose()?;
            let opts = CheckOptions { degree: bounds.degree, n: bounds.n, k: bounds.k, lambda };
            let reports = verify::run(&check, &opts)?;
            let all_equal = reports.iter().all(|r| r.equal);
            match format {
                Format::Json => {
                    let v: Vec<Value> = reports.iter().map(|r| r.to_json()).collect();
                    emit_json(out.as_deref(), &v)?;
                }
                Format::Text => {
                    let mut text = String::new();
                    for r in &reports {
                        text.push_str(if r.equal { "PASS " } else { "FAIL " });
                        text.push_str(&r.summary());
                        text.push('\n');
                    }
                    emit(out.as_deref(), &text)?;
                }
            }
            Ok(if all_equal { 0 } else { 1 })
        }
        Command::Render { input, out } => {
            let json: ConfigJson = read_json(&input)?;
            let text = if json.missing.is_empty() && json.missing_parity.is_none() {
                let cfg = DimerConfig::from_json(&json)?;
                svg::config_svg(&cfg, &[])
            } else {
                let def = DeficientConfig::from_json(&json)?;
                svg::config_svg(def.config(), def.missing())
            };
            svg::write_file(&out, &text)?;
            Ok(0)
        }
    }
}

fn parse_mask(s: &str) -> Result<u64> {
    let parsed = if let Some(bits) = s.strip_prefix("0b") {
        u64::from_str_radix(bits, 2)
    } else {
        s.parse::<u64>()
    };
    parsed.map_err(|_| Error::Usage(format!("--fill expects vertical, all, or a mask; got '{s}'")))
}
