use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use infoscope_core::binning::{default_m_grid, MIN_BINNING_SAMPLES};
use infoscope_core::{
    analyze, build_bundle, build_histogram, cost_scan, differential_entropy, export_vid,
    false_alarm_bound, generate_report, interaction_information, load_table, mutual_information,
    similarity_index, AnalysisOptions, BinnedVariable, ClassPair, Dataset, RankOptions, Report,
    ReportOptions, Strategy, VariableKind, VidFormat, VidThresholds,
};

#[derive(Debug, Parser)]
#[command(
    name = "infoscope",
    version,
    about = "Information-theoretic exploration of tabular data"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Input {
    /// Comma-separated file with a header row.
    pub path: PathBuf,
    /// Name of the class column.
    #[arg(long)]
    pub class: Option<String>,
    /// Columns to treat as categorical.
    #[arg(long, value_delimiter = ',')]
    pub categorical: Vec<String>,
    /// Keep only these two class labels.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    pub pair: Vec<String>,
    /// Information-content divisor for histogram calibration.
    #[arg(long, default_value_t = 2.0)]
    pub m: f64,
}

#[derive(Debug, Args, Clone)]
pub struct RankArgs {
    #[arg(long, default_value_t = 3)]
    pub max_size: usize,
    #[arg(long, value_enum, default_value_t = StrategyArg::Exhaustive)]
    pub strategy: StrategyArg,
    #[arg(long, default_value_t = infoscope_core::class_distance::DEFAULT_ENUMERATION_CAP)]
    pub enumeration_cap: usize,
}

#[derive(Debug, Args, Clone)]
pub struct ThresholdArgs {
    #[arg(long, default_value_t = 0.25)]
    pub strong: f64,
    #[arg(long, default_value_t = 0.04)]
    pub weak_low: f64,
    #[arg(long, default_value_t = 0.1)]
    pub weak_high: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    Exhaustive,
    Greedy,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TableFormat {
    Text,
    Csv,
    Tsv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DiagramFormat {
    Json,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Calibrated histogram of one variable.
    Bin {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        var: String,
        /// Print the cost function over M = 1..6 instead of the counts.
        #[arg(long)]
        scan: bool,
        /// Write the counts (or the scan) as tab-separated text.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Differential entropy estimate per continuous variable.
    Entropy {
        #[command(flatten)]
        input: Input,
        /// Variables to estimate; all continuous variables by default.
        #[arg(long, value_delimiter = ',')]
        var: Vec<String>,
    },
    /// Similarity Index of two variables, or the full matrix.
    Si {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_delimiter = ',')]
        var: Vec<String>,
    },
    /// Interaction information of three variables.
    Ii {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_delimiter = ',', required = true)]
        var: Vec<String>,
    },
    /// Class Distance Indicator for a variable subset.
    Cdi {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_delimiter = ',', required = true)]
        var: Vec<String>,
    },
    /// Rank variable subsets by CDR.
    Rank {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        rank: RankArgs,
        /// Show only the first N rows.
        #[arg(long)]
        top: Option<usize>,
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Variable Interaction Diagram.
    Vid {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        #[arg(long, value_enum, default_value_t = DiagramFormat::Json)]
        format: DiagramFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summary table of SI and CDI values.
    Report {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        rank: RankArgs,
        /// Subsets of each size beyond one to list.
        #[arg(long, default_value_t = 4)]
        top_per_size: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the analysis bundle (rows plus statistics) as JSON.
    Export {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        rank: RankArgs,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Serve the bundle and recompute statistics for pruned row sets.
    Serve {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        rank: RankArgs,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        #[arg(long, default_value_t = 8765)]
        port: u16,
    },
}

impl RankArgs {
    fn options(&self) -> RankOptions {
        RankOptions {
            max_size: self.max_size,
            strategy: match self.strategy {
                StrategyArg::Exhaustive => Strategy::Exhaustive,
                StrategyArg::Greedy => Strategy::Greedy,
            },
            enumeration_cap: self.enumeration_cap,
        }
    }
}

impl ThresholdArgs {
    fn thresholds(&self) -> VidThresholds {
        VidThresholds {
            strong: self.strong,
            weak_low: self.weak_low,
            weak_high: self.weak_high,
        }
    }
}

fn analysis_options(
    input: &Input,
    rank: Option<&RankArgs>,
    thresholds: Option<&ThresholdArgs>,
) -> AnalysisOptions {
    let mut options = AnalysisOptions {
        m: input.m,
        ..AnalysisOptions::default()
    };
    if let Some(r) = rank {
        options.rank = r.options();
    }
    if let Some(t) = thresholds {
        options.thresholds = t.thresholds();
    }
    options
}

pub fn load(input: &Input) -> Result<Dataset> {
    let categorical: Vec<&str> = input.categorical.iter().map(String::as_str).collect();
    let loaded = load_table(&input.path, input.class.as_deref(), &categorical)
        .with_context(|| format!("loading {}", input.path.display()))?;
    if loaded.dropped_rows > 0 {
        eprintln!(
            "note: dropped {} row(s) with missing or unparseable cells",
            loaded.dropped_rows
        );
    }
    let mut d = loaded.dataset;
    if !input.pair.is_empty() {
        if input.pair.len() != 2 {
            bail!("--pair takes exactly two class labels");
        }
        let labels: Vec<&str> = input.pair.iter().map(String::as_str).collect();
        d = d.restrict_to_classes(&labels)?;
    }
    Ok(d)
}

/// Categorical columns (class included) use their codes; continuous ones
/// are histogrammed.
fn binned(d: &Dataset, name: &str, m: f64) -> Result<BinnedVariable> {
    let meta = d.meta(name)?;
    let values = d.column(name)?;
    Ok(match meta.kind {
        VariableKind::Categorical => {
            BinnedVariable::from_codes(name, values.iter().map(|&v| v as u32).collect())
        }
        VariableKind::Continuous => BinnedVariable::from_continuous(name, values, m)?.0,
    })
}

fn continuous<'a>(d: &'a Dataset, name: &str) -> Result<&'a [f64]> {
    if d.meta(name)?.kind != VariableKind::Continuous {
        bail!("variable `{name}` is categorical");
    }
    Ok(d.column(name)?)
}

fn emit(out: &mut dyn Write, path: Option<&Path>, body: &[u8]) -> Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, body).with_context(|| format!("writing {}", p.display()))?;
            writeln!(out, "wrote {}", p.display())?;
        }
        None => out.write_all(body)?,
    }
    Ok(())
}

fn render(report: &Report, format: TableFormat) -> String {
    match format {
        TableFormat::Text => report.render_text(),
        TableFormat::Csv => report.render_delimited(','),
        TableFormat::Tsv => report.render_delimited('\t'),
    }
}

/// Runs one parsed command, writing human-readable output to `out`.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Bin {
            input,
            var,
            scan,
            out: path,
        } => {
            let d = load(&input)?;
            let values = continuous(&d, &var)?;
            if scan {
                let points = cost_scan(values, &default_m_grid())
                    .with_context(|| format!("variable `{var}`"))?;
                let mut body = String::from("M\twidth\tcost\tscaled\n");
                for p in points {
                    body.push_str(&format!("{}\t{}\t{}\t{}\n", p.m, p.width, p.raw, p.scaled));
                }
                return emit(out, path.as_deref(), body.as_bytes());
            }
            if values.len() < MIN_BINNING_SAMPLES {
                bail!(
                    "variable `{var}` has {} rows; calibrated histograms need at least {MIN_BINNING_SAMPLES}",
                    values.len()
                );
            }
            let hist =
                build_histogram(values, input.m).with_context(|| format!("variable `{var}`"))?;
            writeln!(out, "variable        {var}")?;
            writeln!(out, "n               {}", hist.n)?;
            writeln!(out, "M               {}", hist.m_parameter)?;
            writeln!(out, "h (bits)        {:.4}", hist.h_bits)?;
            writeln!(out, "width           {:.6}", hist.width)?;
            writeln!(out, "origin          {}", hist.origin)?;
            writeln!(out, "bins            {}", hist.n_bins())?;
            writeln!(out, "H (bits)        {:.4}", hist.discrete_entropy())?;
            writeln!(
                out,
                "target (bits)   {:.4}",
                (hist.n as f64).log2() / hist.m_parameter
            )?;
            if let Some(p) = path {
                let mut body = String::from("bin\tlow\thigh\tcount\n");
                for (i, c) in hist.counts.iter().enumerate() {
                    let low = hist.origin + i as f64 * hist.width;
                    body.push_str(&format!("{i}\t{low}\t{}\t{c}\n", low + hist.width));
                }
                emit(out, Some(&p), body.as_bytes())?;
            }
        }
        Command::Entropy { input, var } => {
            let d = load(&input)?;
            let names: Vec<String> = if var.is_empty() {
                d.variables()
                    .filter(|m| m.kind == VariableKind::Continuous)
                    .map(|m| m.name.clone())
                    .collect()
            } else {
                var
            };
            writeln!(out, "{:<20} {:>8} {:>10}", "variable", "n", "h (bits)")?;
            for name in names {
                let est = differential_entropy(continuous(&d, &name)?)
                    .with_context(|| format!("variable `{name}`"))?;
                writeln!(out, "{:<20} {:>8} {:>10.4}", name, est.n, est.h_bits)?;
            }
        }
        Command::Si { input, var } => {
            let d = load(&input)?;
            match var.as_slice() {
                [a, b] => {
                    let x = binned(&d, a, input.m)?;
                    let y = binned(&d, b, input.m)?;
                    let mi = mutual_information(&x, &y)?;
                    writeln!(out, "H({a}) = {:.4} bits", x.entropy())?;
                    writeln!(out, "H({b}) = {:.4} bits", y.entropy())?;
                    writeln!(out, "I({a},{b}) = {:.4} bits (raw {:.6})", mi.bits, mi.raw)?;
                    writeln!(out, "SI({a},{b}) = {:.2}", similarity_index(&x, &y)?)?;
                }
                [] => {
                    let mut options = analysis_options(&input, None, None);
                    options.rank.max_size = 1;
                    let stats = analyze(&d, &options)?;
                    let names = &stats.si.names;
                    let w = names.iter().map(String::len).max().unwrap_or(4).max(4);
                    write!(out, "{:w$}", "")?;
                    for n in names {
                        write!(out, "  {n:>w$}")?;
                    }
                    writeln!(out)?;
                    for (n, row) in names.iter().zip(&stats.si.values) {
                        write!(out, "{n:<w$}")?;
                        for v in row {
                            match v {
                                Some(v) => write!(out, "  {v:>w$.2}")?,
                                None => write!(out, "  {:>w$}", "NA")?,
                            }
                        }
                        writeln!(out)?;
                    }
                    for b in stats.binning.iter().filter(|b| b.error.is_some()) {
                        writeln!(
                            out,
                            "note: {}: {}",
                            b.variable,
                            b.error.as_deref().unwrap_or("")
                        )?;
                    }
                }
                _ => bail!("si takes either no --var or exactly two"),
            }
        }
        Command::Ii { input, var } => {
            let d = load(&input)?;
            let [a, b, c] = var.as_slice() else {
                bail!("ii takes exactly three --var arguments");
            };
            let (x, y, z) = (
                binned(&d, a, input.m)?,
                binned(&d, b, input.m)?,
                binned(&d, c, input.m)?,
            );
            let ii = interaction_information(&x, &y, &z)?;
            writeln!(out, "II({a},{b},{c}) = {ii:.4} bits")?;
        }
        Command::Cdi { input, var } => {
            let d = load(&input)?;
            let pair = ClassPair::new(&d)?;
            let names: Vec<&str> = var.iter().map(String::as_str).collect();
            let r = pair.evaluate_names(&names)?;
            let [c1, c2] = pair.labels();
            let lines = [
                ("subset".to_string(), r.name()),
                (format!("n({c1})"), r.n1.to_string()),
                (format!("n({c2})"), r.n2.to_string()),
                (format!("CDI({c1},{c2})"), format!("{:.4} bits", r.cdi_12)),
                (format!("CDI({c2},{c1})"), format!("{:.4} bits", r.cdi_21)),
                ("CDR".to_string(), format!("{:.4} bits", r.cdr)),
                (
                    "bound".to_string(),
                    format!("{:.4}", false_alarm_bound(r.cdr)?),
                ),
            ];
            let w = lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in lines {
                writeln!(out, "{k:<w$}  {v}")?;
            }
        }
        Command::Rank {
            input,
            rank,
            top,
            format,
            out: path,
        } => {
            let d = load(&input)?;
            let options = analysis_options(&input, Some(&rank), None);
            let stats = analyze(&d, &options)?;
            let report = Report::ranked(&stats, top)?;
            emit(out, path.as_deref(), render(&report, format).as_bytes())?;
        }
        Command::Vid {
            input,
            thresholds,
            format,
            out: path,
        } => {
            let d = load(&input)?;
            let mut options = analysis_options(&input, None, Some(&thresholds));
            options.rank.max_size = 1;
            let stats = analyze(&d, &options)?;
            let Some(graph) = stats.vid else {
                let failed: Vec<String> = stats
                    .binning
                    .iter()
                    .filter_map(|b| b.error.as_ref().map(|e| format!("{}: {e}", b.variable)))
                    .collect();
                bail!(
                    "Similarity Index unavailable for some variables ({})",
                    failed.join("; ")
                );
            };
            let format = match format {
                DiagramFormat::Json => VidFormat::Structured,
                DiagramFormat::Svg => VidFormat::VectorImage,
            };
            emit(out, path.as_deref(), &export_vid(&graph, format)?)?;
        }
        Command::Report {
            input,
            rank,
            top_per_size,
            format,
            out: path,
        } => {
            let d = load(&input)?;
            let options = ReportOptions {
                analysis: analysis_options(&input, Some(&rank), None),
                top_per_size,
            };
            let report = generate_report(&d, &options)?;
            emit(out, path.as_deref(), render(&report, format).as_bytes())?;
        }
        Command::Export {
            input,
            rank,
            thresholds,
            out: path,
        } => {
            let d = load(&input)?;
            let options = analysis_options(&input, Some(&rank), Some(&thresholds));
            let bundle = build_bundle(&d, &options)?;
            emit(out, Some(&path), &bundle.to_json()?)?;
        }
        Command::Serve {
            input,
            rank,
            thresholds,
            host,
            port,
        } => {
            let d = load(&input)?;
            let options = analysis_options(&input, Some(&rank), Some(&thresholds));
            let state = crate::serve::AppState::new(d, options)?;
            crate::serve::serve_blocking(state, SocketAddr::new(host, port), out)?;
        }
    }
    Ok(())
}
