use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use greyrank::config::{pipeline_config, synth_spec, ConfigFile};
use greyrank::features::{FeatureId, FeatureVector};
use greyrank::pipeline::ingest::{load_records, write_records};
use greyrank::pipeline::{extract_all, run_pipeline};
use greyrank::report::{emit_plot_data, parse_json_report, render_report, OutputFormat};
use greyrank::synth::{gen_corpus, SynthSpec};

#[derive(Parser)]
#[command(
    name = "greyrank",
    version,
    about = "Rank question-quality features by grey relational grade against pageviews"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn parse_format(value: &str) -> Result<OutputFormat, String> {
    value.parse()
}

#[derive(Subcommand)]
enum Command {
    /// Compute the per-question feature table from a records file
    Extract {
        /// Question records, one JSON object per line
        #[arg(long)]
        input: PathBuf,
        /// Optional key = value configuration file
        #[arg(long)]
        config: Option<PathBuf>,
        /// table (alias md), csv or json
        #[arg(long, default_value = "table", value_parser = parse_format)]
        format: OutputFormat,
        /// Write here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full analysis and emit the ranked report
    Analyze {
        /// Question records, one JSON object per line
        #[arg(long)]
        input: PathBuf,
        /// Optional month,visits control series
        #[arg(long)]
        traffic: Option<PathBuf>,
        /// Optional key = value configuration file
        #[arg(long)]
        config: Option<PathBuf>,
        /// table (alias md), csv or json
        #[arg(long, default_value = "table", value_parser = parse_format)]
        format: OutputFormat,
        /// Write here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write feature,grade bar-chart data here
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Generate a deterministic synthetic corpus
    Synth {
        /// Configuration file with synth.* keys; defaults apply without it
        #[arg(long)]
        config: Option<PathBuf>,
        /// Corpus output path (records file format)
        #[arg(long)]
        out: PathBuf,
        /// Override the spec seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Re-render a stored structured (json) report
    Report {
        /// Report previously written with --format json
        #[arg(long)]
        input: PathBuf,
        /// table (alias md), csv or json
        #[arg(long, default_value = "table", value_parser = parse_format)]
        format: OutputFormat,
        /// Write here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write feature,grade bar-chart data here
        #[arg(long)]
        plot: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version land here too; they are not usage errors.
            let code = u8::from(err.use_stderr());
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), String> {
    match command {
        Command::Extract {
            input,
            config,
            format,
            out,
        } => {
            let config = load_config(config.as_deref())?;
            let pipeline = pipeline_config(config.as_ref()).map_err(|e| format!("config: {e}"))?;
            let (records, load_report) =
                load_records(&input).map_err(|e| format!("load: {e}"))?;
            for issue in &load_report.skipped {
                eprintln!("warning: line {}: {}", issue.line, issue.reason);
            }
            let vectors = extract_all(&records, &pipeline).map_err(|e| e.to_string())?;
            let qids: Vec<u64> = records.iter().map(|r| r.qid).collect();
            emit(&render_feature_table(&qids, &vectors, format), out.as_deref())
        }
        Command::Analyze {
            input,
            traffic,
            config,
            format,
            out,
            plot,
        } => {
            let config = load_config(config.as_deref())?;
            let pipeline = pipeline_config(config.as_ref()).map_err(|e| format!("config: {e}"))?;
            let report = run_pipeline(&input, traffic.as_deref(), &pipeline)
                .map_err(|e| e.to_string())?;
            if let Some(plot_path) = plot {
                emit_plot_data(&report, &plot_path).map_err(|e| format!("plot: {e}"))?;
            }
            emit(&render_report(&report, format), out.as_deref())
        }
        Command::Synth { config, out, seed } => {
            let mut spec = match load_config(config.as_deref())? {
                Some(file) => synth_spec(&file).map_err(|e| format!("config: {e}"))?,
                None => SynthSpec::default(),
            };
            if let Some(seed) = seed {
                spec.seed = seed;
            }
            let records = gen_corpus(&spec).map_err(|e| format!("synth: {e}"))?;
            write_records(&out, &records).map_err(|e| format!("synth: {e}"))?;
            eprintln!("wrote {} records to {}", records.len(), out.display());
            Ok(())
        }
        Command::Report {
            input,
            format,
            out,
            plot,
        } => {
            let text =
                fs::read_to_string(&input).map_err(|e| format!("report: cannot read: {e}"))?;
            let report = parse_json_report(&text).map_err(|e| format!("report: {e}"))?;
            if let Some(plot_path) = plot {
                emit_plot_data(&report, &plot_path).map_err(|e| format!("plot: {e}"))?;
            }
            emit(&render_report(&report, format), out.as_deref())
        }
    }
}

fn load_config(path: Option<&std::path::Path>) -> Result<Option<ConfigFile>, String> {
    match path {
        Some(path) => ConfigFile::from_path(path)
            .map(Some)
            .map_err(|e| format!("config: {e}")),
        None => Ok(None),
    }
}

fn emit(text: &str, out: Option<&std::path::Path>) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("write: {e}")),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cell(value: Option<f64>) -> String {
    match value {
        None => String::new(),
        Some(v) if v.fract() == 0.0 && v.abs() < 1e15 => format!("{}", v as i64),
        Some(v) => format!("{v}"),
    }
}

fn render_feature_table(qids: &[u64], vectors: &[FeatureVector], format: OutputFormat) -> String {
    let headers: Vec<&str> = std::iter::once("qid")
        .chain(FeatureId::ALL.iter().map(|f| f.id()))
        .collect();
    let rows: Vec<Vec<String>> = qids
        .iter()
        .zip(vectors)
        .map(|(qid, vector)| {
            std::iter::once(qid.to_string())
                .chain(FeatureId::ALL.iter().map(|f| cell(vector.get(*f))))
                .collect()
        })
        .collect();
    match format {
        OutputFormat::CommaSeparated => {
            let mut out = headers.join(",");
            out.push('\n');
            for row in rows {
                out.push_str(&row.join(","));
                out.push('\n');
            }
            out
        }
        OutputFormat::StructuredObject => {
            let items: Vec<serde_json::Value> = qids
                .iter()
                .zip(vectors)
                .map(|(qid, vector)| {
                    serde_json::json!({ "qid": qid, "features": vector })
                })
                .collect();
            let mut text = serde_json::to_string_pretty(&items).expect("feature table serializes");
            text.push('\n');
            text
        }
        OutputFormat::PlainTable => {
            let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
            for row in &rows {
                for (width, value) in widths.iter_mut().zip(row) {
                    *width = (*width).max(value.len());
                }
            }
            let mut out = String::new();
            let render_row = |cells: &[String]| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join(" | ")
                    .trim_end()
                    .to_string()
            };
            out.push_str(&render_row(
                &headers.iter().map(|h| h.to_string()).collect::<Vec<_>>(),
            ));
            out.push('\n');
            for row in &rows {
                out.push_str(&render_row(row));
                out.push('\n');
            }
            out
        }
    }
}
