//! `cardtext` command line: extract text regions from a card image,
//! evaluate a dataset against ground truth, or sweep resolutions.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O error, 3 image too small,
//! 4 missing ground truth, 5 empty dataset.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use cardtext::background::SpreadStatistic;
use cardtext::bench::{run_bench, BenchOptions, SWEEP_RESOLUTIONS};
use cardtext::components::Connectivity;
use cardtext::evaluator::{
    accuracy, match_ground_truth, Confusion, EvalReport, GroundTruth, ImageEval,
};
use cardtext::memtrack::{self, TrackingAllocator};
use cardtext::raster::{load_image, save_binary, save_gray};
use cardtext::region::RegionArea;
use cardtext::{Error, PipelineConfig, Region};

#[global_allocator]
static ALLOC: TrackingAllocator = TrackingAllocator;

#[derive(Parser)]
#[command(name = "cardtext", version, about = "Text region extraction for business card images")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract and binarize text regions from one card image.
    Extract {
        /// Input image (PGM, PBM or PNG).
        input: PathBuf,
        /// Directory for output files (defaults to the input's directory).
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Also write the post-background-elimination view (<stem>.bg.pgm).
        #[arg(long)]
        dump_background: bool,
        #[command(flatten)]
        config: ConfigFlags,
    },
    /// Score a dataset directory against rectangle ground truth.
    Evaluate {
        /// Directory of card images.
        dataset: PathBuf,
        /// Ground-truth JSON: an entry or array of {"image", "text_boxes"}.
        #[arg(long)]
        ground_truth: PathBuf,
        /// Report JSON path.
        #[arg(long, default_value = "eval_report.json")]
        out: PathBuf,
        #[command(flatten)]
        config: ConfigFlags,
    },
    /// Run the pipeline across resolutions, printing CSV to stdout.
    Bench {
        /// Directory of card images.
        dataset: PathBuf,
        /// Comma-separated WxH list (default: the six-step sweep).
        #[arg(long)]
        resolutions: Option<String>,
        #[arg(long, default_value_t = 3)]
        repeats: u32,
        /// Optional ground truth for per-resolution accuracy.
        #[arg(long)]
        ground_truth: Option<PathBuf>,
        /// Optional JSON report path.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigFlags,
    },
}

/// Every tunable, defaulting to the published constants. Flags override
/// the config file, which overrides the defaults.
#[derive(Args)]
struct ConfigFlags {
    /// JSON config file with the same field names as these flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    t_fixed: Option<i32>,
    #[arg(long)]
    t_min: Option<u8>,
    #[arg(long)]
    width_divisor: Option<u32>,
    #[arg(long)]
    block_height: Option<u32>,
    #[arg(long)]
    h_th_div: Option<f64>,
    #[arg(long)]
    w_th_div: Option<f64>,
    #[arg(long)]
    a_th_div: Option<f64>,
    #[arg(long)]
    b_th_div: Option<f64>,
    #[arg(long)]
    l_th_div: Option<f64>,
    #[arg(long)]
    r_min: Option<f64>,
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    ra_min: Option<f64>,
    #[arg(long)]
    ra_max: Option<f64>,
    /// "range" or "stddev".
    #[arg(long)]
    spread_statistic: Option<String>,
    /// Block adjacency: 4 or 8.
    #[arg(long)]
    connectivity: Option<u8>,
    /// Fill-ratio region: "blocks" or "bbox".
    #[arg(long)]
    ra_region: Option<String>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Pipeline(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Pipeline(e)
    }
}

impl ConfigFlags {
    fn resolve(&self) -> Result<PipelineConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(Error::from)?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::Usage(format!("bad config file {}: {e}", path.display())))?
            }
            None => PipelineConfig::default(),
        };
        macro_rules! apply {
            ($($field:ident),*) => {
                $(if let Some(v) = self.$field { cfg.$field = v; })*
            };
        }
        apply!(
            t_fixed, t_min, width_divisor, block_height, h_th_div, w_th_div, a_th_div, b_th_div,
            l_th_div, r_min, r_max, ra_min, ra_max
        );
        if let Some(s) = &self.spread_statistic {
            cfg.spread_statistic = match s.as_str() {
                "range" => SpreadStatistic::Range,
                "stddev" => SpreadStatistic::StdDev,
                other => return Err(CliError::Usage(format!("unknown spread statistic {other:?}"))),
            };
        }
        if let Some(c) = self.connectivity {
            cfg.connectivity = Connectivity::try_from(c).map_err(CliError::Usage)?;
        }
        if let Some(r) = &self.ra_region {
            cfg.ra_region = match r.as_str() {
                "blocks" => RegionArea::Blocks,
                "bbox" => RegionArea::Bbox,
                other => return Err(CliError::Usage(format!("unknown ra region {other:?}"))),
            };
        }
        Ok(cfg)
    }
}

#[derive(Serialize)]
struct RegionRecord {
    bbox: [u32; 4],
    h_cc: u32,
    w_cc: u32,
    a_cc: u64,
    r_w2h: f64,
    ra_cc: Option<f64>,
    label: &'static str,
}

#[derive(Serialize)]
struct RegionsDocument {
    image: String,
    width: u32,
    height: u32,
    regions: Vec<RegionRecord>,
}

fn region_records(regions: &[Region]) -> Vec<RegionRecord> {
    regions
        .iter()
        .map(|r| RegionRecord {
            bbox: r.cc.bbox.into(),
            h_cc: r.cc.h_cc,
            w_cc: r.cc.w_cc,
            a_cc: r.cc.a_cc,
            r_w2h: r.r_w2h,
            ra_cc: r.ra_cc,
            label: r.label.as_str(),
        })
        .collect()
}

/// Write pretty JSON with sorted keys, atomically (temp file + rename).
fn write_json(path: &Path, value: &impl Serialize) -> Result<(), Error> {
    let value = serde_json::to_value(value).expect("serializable");
    let text = serde_json::to_string_pretty(&value).expect("serializable");
    let tmp = path.with_extension("json.tmp");
    std::fs::write(&tmp, text.as_bytes())?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn load_ground_truth(path: &Path) -> Result<Vec<GroundTruth>, CliError> {
    let text = std::fs::read_to_string(path).map_err(Error::from)?;
    if let Ok(list) = serde_json::from_str::<Vec<GroundTruth>>(&text) {
        return Ok(list);
    }
    serde_json::from_str::<GroundTruth>(&text)
        .map(|one| vec![one])
        .map_err(|e| CliError::Usage(format!("bad ground truth {}: {e}", path.display())))
}

fn cmd_extract(
    input: &Path,
    out_dir: Option<&Path>,
    dump_background: bool,
    cfg: &PipelineConfig,
) -> Result<(), CliError> {
    let img = load_image(input)?;
    let output = cardtext::run(&img, cfg)?;

    let stem = input
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("output")
        .to_string();
    let dir = out_dir
        .map(Path::to_path_buf)
        .unwrap_or_else(|| input.parent().unwrap_or(Path::new(".")).to_path_buf());
    std::fs::create_dir_all(&dir).map_err(Error::from)?;

    save_binary(&output.binary, dir.join(format!("{stem}.bin.pgm")))?;
    if dump_background {
        save_gray(&output.background, dir.join(format!("{stem}.bg.pgm")))?;
    }
    let doc = RegionsDocument {
        image: input
            .file_name()
            .and_then(|s| s.to_str())
            .unwrap_or(&stem)
            .to_string(),
        width: img.width,
        height: img.height,
        regions: region_records(&output.regions),
    };
    write_json(&dir.join(format!("{stem}.regions.json")), &doc)?;
    Ok(())
}

fn cmd_evaluate(
    dataset: &Path,
    gt_path: &Path,
    out: &Path,
    cfg: &PipelineConfig,
) -> Result<(), CliError> {
    let gt = load_ground_truth(gt_path)?;
    let images = cardtext::bench::load_dataset(dataset)?;
    if images.is_empty() {
        return Err(Error::EmptyDataset {
            path: dataset.to_path_buf(),
        }
        .into());
    }

    memtrack::reset_peak();
    let start = Instant::now();
    let mut per_image = Vec::new();
    let mut aggregate = Confusion::default();
    let mut unmatched_total = 0u64;
    for (name, img) in &images {
        let entry = cardtext::bench::find_ground_truth(&gt, name).ok_or(Error::MissingGroundTruth {
            image: name.clone(),
        })?;
        let output = cardtext::run(img, cfg)?;
        let m = match_ground_truth(&output.regions, &entry.text_boxes);
        aggregate.add(&m.confusion);
        unmatched_total += m.unmatched_text_boxes;
        per_image.push(ImageEval {
            image: name.clone(),
            confusion: m.confusion,
            unmatched_text_boxes: m.unmatched_text_boxes,
        });
    }
    let acc = accuracy(&aggregate)?;
    let report = EvalReport {
        images: per_image,
        aggregate,
        accuracy: acc,
        unmatched_text_boxes: unmatched_total,
        wall_time_s: start.elapsed().as_secs_f64(),
        peak_alloc_bytes: memtrack::peak_bytes() as u64,
    };
    write_json(out, &report)?;
    println!("{:.2}", acc * 100.0);
    Ok(())
}

fn parse_resolutions(text: &str) -> Result<Vec<(u32, u32)>, CliError> {
    text.split(',')
        .map(|token| {
            token
                .trim()
                .split_once('x')
                .and_then(|(w, h)| Some((w.parse().ok()?, h.parse().ok()?)))
                .ok_or_else(|| CliError::Usage(format!("bad resolution {token:?}, expected WxH")))
        })
        .collect()
}

#[derive(Serialize)]
struct BenchRecord {
    resolution: String,
    mean_time_s: f64,
    peak_alloc_bytes: u64,
    accuracy: Option<f64>,
}

fn cmd_bench(
    dataset: &Path,
    resolutions: Option<&str>,
    repeats: u32,
    gt_path: Option<&Path>,
    out: Option<&Path>,
    cfg: &PipelineConfig,
) -> Result<(), CliError> {
    if repeats == 0 {
        return Err(CliError::Usage("--repeats must be at least 1".into()));
    }
    let resolutions = match resolutions {
        Some(text) => parse_resolutions(text)?,
        None => SWEEP_RESOLUTIONS.to_vec(),
    };
    let gt = gt_path.map(load_ground_truth).transpose()?;
    let opts = BenchOptions {
        resolutions,
        repeats,
        config: cfg.clone(),
    };
    let results = run_bench(dataset, gt.as_deref(), &opts)?;

    println!("resolution,mean_time_s,peak_alloc_bytes,accuracy");
    let mut records = Vec::new();
    for r in &results {
        let acc = r.accuracy.map(|a| format!("{a:.4}")).unwrap_or_default();
        println!(
            "{}x{},{:.6},{},{}",
            r.width, r.height, r.mean_time_s, r.peak_alloc_bytes, acc
        );
        records.push(BenchRecord {
            resolution: format!("{}x{}", r.width, r.height),
            mean_time_s: r.mean_time_s,
            peak_alloc_bytes: r.peak_alloc_bytes,
            accuracy: r.accuracy,
        });
    }
    if let Some(out) = out {
        write_json(out, &records)?;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Extract {
            input,
            out_dir,
            dump_background,
            config,
        } => cmd_extract(&input, out_dir.as_deref(), dump_background, &config.resolve()?),
        Command::Evaluate {
            dataset,
            ground_truth,
            out,
            config,
        } => cmd_evaluate(&dataset, &ground_truth, &out, &config.resolve()?),
        Command::Bench {
            dataset,
            resolutions,
            repeats,
            ground_truth,
            out,
            config,
        } => cmd_bench(
            &dataset,
            resolutions.as_deref(),
            repeats,
            ground_truth.as_deref(),
            out.as_deref(),
            &config.resolve()?,
        ),
    }
}

fn exit_code(err: &CliError) -> u8 {
    match err {
        CliError::Usage(_) => 1,
        CliError::Pipeline(e) => match e {
            Error::ImageTooSmall { .. } => 3,
            Error::MissingGroundTruth { .. } | Error::EmptyEvaluation => 4,
            Error::EmptyDataset { .. } => 5,
            _ => 2,
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            match &err {
                CliError::Usage(msg) => eprintln!("error: {msg}"),
                CliError::Pipeline(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
