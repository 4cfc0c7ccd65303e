use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use credrank::anomaly::{precision_curve, query_anomalies, write_results_csv, AnomalyLabelSet, AnomalyQuery, Criterion, DEFAULT_CUTOFFS};
use credrank::artifacts::{read_scores, write_scores, RankingRow};
use credrank::corpus::{
    cleanse, ingest_dir, ingest_files, parse_host_list, write_dir, write_jsonl, Corpus, Diagnostic, Ingested,
};
use credrank::credibility::AttributeWeights;
use credrank::evaluation::{run_benchmark, GroundTruth, MethodRanking, RecallMode};
use credrank::pipeline::{self, PipelineConfig, Resources, StageTiming};
use credrank::synth::{self, SyntheticSpec};
use log::{info, warn};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::{CleanseFlags, Cli, Command, Format, ScoreFlags};

pub const CLEANSED_DIR: &str = "cleansed";
pub const REPORT_FILE: &str = "cleansing_report.json";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.jsonl";
pub const SUMMARY_FILE: &str = "run_summary.json";
pub const TIMINGS_FILE: &str = "timings.json";
pub const CHUNKS_FILE: &str = "chunks.json";
pub const SPEC_FILE: &str = "synth_spec.json";
pub const BENCHMARK_CSV: &str = "benchmark.csv";
pub const BENCHMARK_JSON: &str = "benchmark.json";

const STAGES: [&str; 5] = ["ingest", "cleanse", "partition", "score", "rank"];

type Result<T> = std::result::Result<T, CliError>;

pub fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Ingest {
            users,
            posts,
            replies,
            out,
        } => ingest_cmd(users, posts, replies, out),
        Command::Cleanse { input, out, flags } => cleanse_cmd(cli, input, out, flags),
        Command::Score { input, out, flags } => score_cmd(cli, input, out, flags),
        Command::Rank {
            input,
            domain,
            top,
            format,
        } => rank_cmd(input, domain, *top, *format),
        Command::Anomalies {
            input,
            criterion,
            top,
            labels,
            out,
            exclude_unrankable,
        } => anomalies_cmd(input, criterion, *top, labels.as_deref(), out.as_deref(), *exclude_unrankable),
        Command::Eval {
            truth,
            rankings,
            q,
            strict_paper_metrics,
            out,
        } => eval_cmd(truth, rankings, *q, *strict_paper_metrics, out.as_deref()),
        Command::Synth { seed, spec, out } => synth_cmd(*seed, spec.as_deref(), out),
        Command::Run {
            input,
            out,
            cleanse,
            score,
        } => run_cmd(cli, input, out, cleanse, score),
    }
}

fn load_config(cli: &Cli, cleanse: &CleanseFlags, score: &ScoreFlags) -> Result<PipelineConfig> {
    let mut cfg = match &cli.config {
        Some(p) => PipelineConfig::from_file(p)?,
        None => PipelineConfig::default(),
    };
    if let Some(n) = cleanse.min_posts {
        cfg.cleansing.min_posts = n;
    }
    if let Some(p) = &cleanse.media_blocklist {
        let src = fs::read_to_string(p).map_err(|e| CliError::config(format!("cannot read {}: {e}", p.display())))?;
        cfg.cleansing.media_hosts = parse_host_list(&src);
    }
    let c = &mut cfg.credibility;
    if let Some(rho) = score.rho {
        c.rho = rho;
    }
    if let Some(w) = score.window {
        c.window = w;
    }
    if let Some(p) = score.period {
        c.period = p;
    }
    if let Some(b) = score.log_base {
        c.log_base = Some(b);
    }
    if let Some(s) = &score.weights {
        let values = s
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::config(format!("--weights: `{}` is not a number", v.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        c.weights = AttributeWeights::from_slice(&values)?;
    }
    c.validate()?;
    Ok(cfg)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| CliError::write(parent, e))?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| CliError::write(path, e))
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::write(path, e))?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| CliError::write(path, e))
}

fn to_value(v: impl serde::Serialize) -> Value {
    serde_json::to_value(v).expect("serializable value")
}

fn write_corpus(corpus: &Corpus, dir: &Path) -> Result<()> {
    write_dir(corpus, dir).map_err(|e| CliError::write(dir, e))
}

fn write_diagnostics(diags: &[Diagnostic], path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| CliError::write(parent, e))?;
    }
    write_jsonl(path, diags.iter()).map_err(|e| CliError::write(path, e))
}

fn report_diagnostics(diags: &[Diagnostic]) {
    for d in diags.iter().take(20) {
        warn!("rejected {d}");
    }
    if diags.len() > 20 {
        warn!("{} more rejected records", diags.len() - 20);
    }
}

fn corpus_counts(c: &Corpus) -> Value {
    json!({"users": c.user_count(), "posts": c.post_count(), "replies": c.reply_count()})
}

fn ingest_cmd(users: &Path, posts: &Path, replies: &Path, out: &Path) -> Result<()> {
    let Ingested { corpus, diagnostics } = ingest_files(users, posts, replies)?;
    report_diagnostics(&diagnostics);
    write_corpus(&corpus, out)?;
    write_diagnostics(&diagnostics, &out.join(DIAGNOSTICS_FILE))?;
    info!(
        "ingested {} users, {} posts, {} replies ({} rejected)",
        corpus.user_count(),
        corpus.post_count(),
        corpus.reply_count(),
        diagnostics.len()
    );
    Ok(())
}

/// Reads a corpus directory; rejected records are logged and skipped.
fn load_corpus(dir: &Path) -> Result<Corpus> {
    let Ingested { corpus, diagnostics } = ingest_dir(dir)?;
    report_diagnostics(&diagnostics);
    Ok(corpus)
}

fn cleanse_cmd(cli: &Cli, input: &Path, out: &Path, flags: &CleanseFlags) -> Result<()> {
    let cfg = load_config(cli, flags, &ScoreFlags::default())?;
    let resources = Resources::load(&cfg.resources)?;
    let corpus = load_corpus(input)?;
    let (corpus, report) = cleanse(corpus, &cfg.cleansing, &resources.provider);
    write_corpus(&corpus, out)?;
    write_json(&out.join(REPORT_FILE), &to_value(&report))?;
    info!("cleansed corpus: {}", corpus_counts(&corpus));
    Ok(())
}

fn score_cmd(cli: &Cli, input: &Path, out: &Path, flags: &ScoreFlags) -> Result<()> {
    let cfg = load_config(cli, &CleanseFlags::default(), flags)?;
    let resources = Resources::load(&cfg.resources)?;
    let corpus = load_corpus(input)?;
    let chunks = credrank::corpus::partition(&corpus, &cfg.credibility.window_spec())
        .map_err(credrank::credibility::CredibilityError::from)?;
    let scores = resources.scorer(&cfg.credibility).score(&corpus, &chunks)?;
    scores.check_invariants()?;
    write_scores(&scores, &corpus, out)?;
    write_json(&out.join(CHUNKS_FILE), &chunk_summary(&chunks, &scores))?;
    info!("scored {} chunks into {}", chunks.len(), out.display());
    Ok(())
}

fn chunk_summary(chunks: &[credrank::corpus::TimeChunk], scores: &credrank::credibility::WindowScores) -> Value {
    Value::Array(
        chunks
            .iter()
            .zip(&scores.chunks)
            .map(|(c, s)| {
                json!({
                    "index": c.index,
                    "period_start": c.period_start.to_rfc3339(),
                    "period_end": c.period_end.to_rfc3339(),
                    "posts": c.posts.len(),
                    "replies": c.replies.len(),
                    "rankable_users": s.rankable.len(),
                })
            })
            .collect(),
    )
}

fn rank_cmd(input: &Path, domain: &str, top: usize, format: Format) -> Result<()> {
    if top == 0 {
        return Err(CliError::config("--top must be at least 1"));
    }
    let art = read_scores(input)?;
    let rows = art.ranking(domain, top)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let res = match format {
        Format::Csv => write_ranking_csv(&mut out, &rows),
        Format::Json => serde_json::to_writer_pretty(&mut out, &rows)
            .map_err(io::Error::from)
            .and_then(|_| out.write_all(b"\n")),
    };
    res.and_then(|_| out.flush()).map_err(|e| CliError::write(Path::new("<stdout>"), e))
}

fn write_ranking_csv(w: impl Write, rows: &[RankingRow]) -> io::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for r in rows {
        wtr.serialize(r)?;
    }
    wtr.flush()
}

fn anomalies_cmd(
    input: &Path,
    criterion: &str,
    top: usize,
    labels: Option<&Path>,
    out: Option<&Path>,
    exclude_unrankable: bool,
) -> Result<()> {
    let criterion: Criterion = criterion.parse()?;
    let query = AnomalyQuery::new(criterion, top)?.include_unrankable(!exclude_unrankable);
    let labels = labels
        .map(|p| {
            let f = File::open(p).map_err(|e| CliError::read(p, e))?;
            AnomalyLabelSet::read_csv(io::BufReader::new(f)).map_err(|e| CliError::input(format!("{}: {e}", p.display())))
        })
        .transpose()?;
    let art = read_scores(input)?;
    let retrieved = query_anomalies(&art.tc_scaled, &art.registry, &art.penalties, &art.followers(), &query);
    let ids: Vec<_> = retrieved.iter().map(|r| r.user_id.clone()).collect();
    let curve = labels
        .as_ref()
        .map(|l| {
            let cutoffs: Vec<usize> = DEFAULT_CUTOFFS.iter().copied().filter(|&k| k <= top).collect();
            let cutoffs = if cutoffs.is_empty() { vec![top] } else { cutoffs };
            precision_curve(&ids, l, &cutoffs)
        })
        .transpose()?;

    match out {
        Some(dir) => {
            let path = dir.join(format!("{}.csv", criterion.name()));
            let mut w = create(&path)?;
            write_results_csv(&mut w, &retrieved).map_err(|e| CliError::write(&path, e))?;
            w.flush().map_err(|e| CliError::write(&path, e))?;
            if let Some(curve) = &curve {
                let path = dir.join(format!("{}_precision.csv", criterion.name()));
                let mut w = create(&path)?;
                write_curve_csv(&mut w, curve).map_err(|e| CliError::write(&path, e))?;
            }
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write_results_csv(&mut w, &retrieved)
                .map_err(io::Error::from)
                .and_then(|_| w.flush())
                .map_err(|e| CliError::write(Path::new("<stdout>"), e))?;
        }
    }
    if let Some(curve) = &curve {
        info!("{} precision: {:?}, average {:.4}", criterion, curve.points, curve.average);
    }
    Ok(())
}

fn write_curve_csv(w: impl Write, curve: &credrank::anomaly::PrecisionCurve) -> io::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["cutoff", "precision"])?;
    for (k, p) in &curve.points {
        wtr.write_record([k.to_string(), p.to_string()])?;
    }
    wtr.write_record(["average".to_owned(), curve.average.to_string()])?;
    wtr.flush()
}

fn eval_cmd(truth: &Path, rankings: &[PathBuf], q: usize, strict: bool, out: Option<&Path>) -> Result<()> {
    let f = File::open(truth).map_err(|e| CliError::read(truth, e))?;
    let truth_set =
        GroundTruth::from_reader(io::BufReader::new(f)).map_err(|e| CliError::input(format!("{}: {e}", truth.display())))?;
    let mut methods = Vec::new();
    for p in rankings {
        if p.is_dir() {
            methods.push(method_from_scores(p, &truth_set, q)?);
        } else {
            let f = File::open(p).map_err(|e| CliError::read(p, e))?;
            let read = MethodRanking::read_csv(io::BufReader::new(f))
                .map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
            methods.extend(read);
        }
    }
    let mode = if strict { RecallMode::Strict } else { RecallMode::Default };
    let report = run_benchmark(&methods, &truth_set, q, mode)?;
    match out {
        Some(dir) => {
            let path = dir.join(BENCHMARK_CSV);
            let mut w = create(&path)?;
            report.write_csv(&mut w).map_err(|e| CliError::write(&path, e))?;
            let path = dir.join(BENCHMARK_JSON);
            let mut w = create(&path)?;
            report.write_json(&mut w).map_err(|e| CliError::write(&path, e))?;
        }
        None => {
            let stdout = io::stdout();
            report
                .write_csv(stdout.lock())
                .map_err(|e| CliError::write(Path::new("<stdout>"), e))?;
        }
    }
    for avg in &report.averages {
        info!(
            "{}: P1 {:.4}, R {:.4}, F {:.4}, nDCG {:.4}",
            avg.method, avg.precision1, avg.recall, avg.f_measure, avg.ndcg
        );
    }
    Ok(())
}

/// Turns a score directory into a method named after the directory.
fn method_from_scores(dir: &Path, truth: &GroundTruth, q: usize) -> Result<MethodRanking> {
    let art = read_scores(dir)?;
    let name = dir
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "credrank".to_owned());
    let mut m = MethodRanking::new(name);
    for domain in truth.domains() {
        let users = art.ranking(domain, q)?.into_iter().map(|r| r.user_id).collect();
        m = m.with_domain(domain, users);
    }
    Ok(m)
}

fn synth_cmd(seed: Option<u64>, spec: Option<&Path>, out: &Path) -> Result<()> {
    let mut spec = match spec {
        Some(p) => {
            let src = fs::read_to_string(p).map_err(|e| CliError::config(format!("cannot read {}: {e}", p.display())))?;
            synth::spec_from_json(&src).map_err(|e| CliError::config(format!("{}: {e}", p.display())))?
        }
        None => SyntheticSpec::default(),
    };
    if let Some(s) = seed {
        spec.seed = s;
    }
    let generated = synth::generate(&spec)?;
    generated.write_dir(out)?;
    write_json(&out.join(SPEC_FILE), &to_value(&spec))?;
    info!(
        "synthetic corpus (seed {}): {}, roles {:?}",
        spec.seed,
        corpus_counts(&generated.corpus),
        synth::role_counts(&generated.labels)
    );
    Ok(())
}

fn run_cmd(cli: &Cli, input: &Path, out: &Path, cflags: &CleanseFlags, sflags: &ScoreFlags) -> Result<()> {
    let cfg = load_config(cli, cflags, sflags)?;
    let resources = Resources::load(&cfg.resources)?;

    let t = Instant::now();
    let Ingested { corpus, diagnostics } = ingest_dir(input)?;
    report_diagnostics(&diagnostics);
    let mut timings = vec![StageTiming {
        stage: "ingest".to_owned(),
        seconds: t.elapsed().as_secs_f64(),
    }];
    let ingested = corpus_counts(&corpus);

    let run = pipeline::run(corpus, &cfg, &resources)?;
    timings.extend(run.timings.iter().cloned());

    let t = Instant::now();
    write_diagnostics(&diagnostics, &out.join(DIAGNOSTICS_FILE))?;
    write_corpus(&run.corpus, &out.join(CLEANSED_DIR))?;
    write_json(&out.join(REPORT_FILE), &to_value(&run.report))?;
    write_scores(&run.scores, &run.corpus, out)?;
    timings.push(StageTiming {
        stage: "rank".to_owned(),
        seconds: t.elapsed().as_secs_f64(),
    });

    let summary = json!({
        "stages": STAGES,
        "input": input.display().to_string(),
        "config": to_value(&cfg),
        "ingested": ingested,
        "rejected_records": diagnostics.len(),
        "cleansed": corpus_counts(&run.corpus),
        "as_of": run.scores.as_of.to_rfc3339(),
        "chunks": chunk_summary(&run.chunks, &run.scores),
        "domains": run.scores.registry.labels().iter().map(|d| d.as_str()).collect::<Vec<_>>(),
    });
    write_json(&out.join(SUMMARY_FILE), &summary)?;
    write_json(&out.join(TIMINGS_FILE), &to_value(&timings))?;
    info!("run complete: {}", out.display());
    Ok(())
}
