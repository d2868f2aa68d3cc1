use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rigo_atlas::ingest::{assemble, parse_affiliations, parse_geometry, parse_regions, parse_secondary};
use rigo_atlas::render::{render_map, View, ViewSpec};
use rigo_atlas::stats::{answer_query, DashboardStats, Query};
use rigo_atlas::topology::quantize::{DEFAULT_SCALE, FIXTURE_SCALE};
use rigo_atlas::topology::ProjectionParams;
use rigo_atlas::{Atlas, AtlasFile, BuildOptions, Category, Layer};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "rigo-atlas", version, about = "Build, render and query RIGO/MSA county atlases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Projection {
    Albers,
    Identity,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build an atlas from county geometry and affiliation tables.
    Ingest {
        #[arg(long)]
        geometry: PathBuf,
        #[arg(long)]
        affiliations: PathBuf,
        #[arg(long)]
        regions: PathBuf,
        #[arg(long)]
        secondary: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "albers")]
        projection: Projection,
        /// Grid cells per projected unit [default: 10000 for albers, 1 for identity]
        #[arg(long)]
        scale: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw one view of an atlas as SVG.
    Render {
        #[arg(long)]
        atlas: PathBuf,
        /// "national" or a state code
        #[arg(long, default_value = "national")]
        view: String,
        #[arg(long, default_value = "rigo")]
        layer: Layer,
        #[arg(long, default_value_t = 960)]
        width: u32,
        #[arg(long, default_value_t = 600)]
        height: u32,
        /// Output file; standard output if omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print dashboard statistics.
    Stats {
        #[arg(long)]
        atlas: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Answer a comparison question.
    Query {
        #[arg(long)]
        atlas: PathBuf,
        /// more-rigos-or-msas, cross-state-rigo or cross-state-msa
        #[arg(long = "q")]
        q: Query,
    },
    /// Serve the atlas JSON API and frontend assets.
    Serve {
        #[arg(long)]
        atlas: PathBuf,
        #[arg(long, env = "ATLAS_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        #[arg(long)]
        assets: Option<PathBuf>,
    },
}

/// A failed command: message for stderr and exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<rigo_atlas::Error> for Failure {
    fn from(e: rigo_atlas::Error) -> Self {
        let lines: Vec<String> = e.leaves().iter().map(|l| l.to_string()).collect();
        Failure::invalid(lines.join("\n"))
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::invalid(format!("E_IO: cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::invalid(format!("E_IO: cannot write {}: {e}", path.display())))
}

/// Loads and validates an atlas document, printing warnings to stderr.
pub fn load_atlas(path: &Path, stderr: &mut dyn Write) -> Result<Atlas, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("E_IO: cannot read {}: {e}", path.display()))?;
    let file: AtlasFile = serde_json::from_str(&text).map_err(|e| format!("E_BAD_ATLAS: {}: {e}", path.display()))?;
    match Atlas::from_file(file) {
        Ok((atlas, report)) => {
            for w in report.warnings() {
                let _ = writeln!(stderr, "{w}");
            }
            Ok(atlas)
        }
        Err(report) => Err(report.findings.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("\n")),
    }
}

/// Runs the command line and returns the process exit status. Data goes to
/// `stdout`, diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
            } else {
                let _ = write!(stdout, "{text}");
            }
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "{}", f.message);
            f.code
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Ingest {
            geometry,
            affiliations,
            regions,
            secondary,
            projection,
            scale,
            out,
        } => {
            let raw = parse_geometry(&read(&geometry)?)?;
            let affs = parse_affiliations(&read(&affiliations)?)?;
            let regs = parse_regions(&read(&regions)?)?;
            let secs = match &secondary {
                Some(p) => parse_secondary(&read(p)?)?,
                None => Vec::new(),
            };
            let pre = assemble(&raw, &affs, &regs, &secs)?;
            let (projection, default_scale) = match projection {
                Projection::Albers => (ProjectionParams::us_albers(), DEFAULT_SCALE),
                Projection::Identity => (ProjectionParams::Identity, FIXTURE_SCALE),
            };
            let opts = BuildOptions {
                projection,
                scale: scale.unwrap_or(default_scale),
                ..BuildOptions::default()
            };
            let (atlas, warnings) = Atlas::build(pre, &opts)?;
            for w in &warnings {
                let _ = writeln!(stderr, "{w}");
            }
            let report = atlas.validate();
            for f in &report.findings {
                let _ = writeln!(stderr, "{f}");
            }
            if !report.is_ok() {
                return Err(Failure::invalid("atlas failed validation"));
            }
            write(&out, &atlas.to_json())?;
            let s = atlas.stats();
            let _ = writeln!(
                stderr,
                "wrote {} ({} counties, {} RIGOs, {} MSAs)",
                out.display(),
                atlas.counties().len(),
                s.rigo_count,
                s.msa_count
            );
            Ok(())
        }
        Command::Render {
            atlas,
            view,
            layer,
            width,
            height,
            out,
        } => {
            let atlas = load_atlas(&atlas, stderr).map_err(Failure::invalid)?;
            let view: View = view.parse().unwrap_or(View::National);
            let spec = ViewSpec {
                width,
                height,
                style: atlas.style().clone(),
                ..ViewSpec::new(view, layer)
            };
            let svg = render_map(&atlas, &spec)?;
            match out {
                Some(path) => write(&path, &svg),
                None => stdout
                    .write_all(svg.as_bytes())
                    .map_err(|e| Failure::invalid(format!("E_IO: {e}"))),
            }
        }
        Command::Stats { atlas, format } => {
            let atlas = load_atlas(&atlas, stderr).map_err(Failure::invalid)?;
            let text = match format {
                Format::Json => serde_json::to_string_pretty(atlas.stats()).expect("stats serialize") + "\n",
                Format::Table => stats_table(atlas.stats()),
            };
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::invalid(format!("E_IO: {e}")))
        }
        Command::Query { atlas, q } => {
            let atlas = load_atlas(&atlas, stderr).map_err(Failure::invalid)?;
            writeln!(stdout, "{}", answer_query(&atlas, q)).map_err(|e| Failure::invalid(format!("E_IO: {e}")))
        }
        Command::Serve {
            atlas,
            port,
            host,
            assets,
        } => {
            let atlas = load_atlas(&atlas, stderr).map_err(Failure::invalid)?;
            let addr = SocketAddr::new(host, port);
            let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::invalid(format!("E_IO: {e}")))?;
            runtime
                .block_on(crate::service::serve(atlas, addr, assets, stderr))
                .map_err(|e| Failure::invalid(format!("E_IO: {e}")))
        }
    }
}

fn stats_table(s: &DashboardStats) -> String {
    let mut rows: Vec<(String, String)> = vec![
        ("RIGOs".into(), s.rigo_count.to_string()),
        ("MSAs".into(), s.msa_count.to_string()),
    ];
    for c in Category::ALL {
        rows.push((format!("counties {c}"), s.category_counts.get(c).to_string()));
    }
    rows.push(("dual-RIGO counties".into(), s.dual_rigo_count.to_string()));
    rows.push(("cross-state RIGOs".into(), s.cross_state_rigos.join(" ")));
    rows.push(("cross-state MSAs".into(), s.cross_state_msas.join(" ")));
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}").trim_end().to_string() + "\n")
        .collect()
}
