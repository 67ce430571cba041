//! Job execution: ingestion, the engine call, and document assembly.

use std::time::Instant;

use varmine::discords::{topkm_discord_discovery, DiscordConfig, DiscordMatrix, VarDiscordMatrix};
use varmine::motif_sets::{motif_sets, MotifSetConfig};
use varmine::oracle::{brute_force_discords, brute_force_motifs, oracle_valmp, pruning_report};
use varmine::profile::compute_matrix_profile;
use varmine::series::{ingest, DataSeries};
use varmine::valmod::{valmod_run, LengthMotif, Valmp, ValmodConfig};

use crate::args::{Cli, Command, IoArgs, OracleJob, RangeArgs};
use crate::document::{BenchReport, JobConfig, JobMeta, JobResult, ResultDocument, SCHEMA_VERSION};
use crate::input::read_series;
use crate::output::emit;
use crate::CliError;

/// Runs the parsed command on a pool of `--threads` workers and writes its document.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Invalid("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(t);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Io(format!("cannot start worker threads: {e}")))?;
    let io = io_args(&cli.command);
    let doc = pool.install(|| build_document(&cli.command))?;
    emit(&doc, io.format, io.output.as_deref())
}

fn io_args(cmd: &Command) -> &IoArgs {
    match cmd {
        Command::Motifs(a) => &a.io,
        Command::MotifSets(a) => &a.io,
        Command::Discords(a) => &a.io,
        Command::Mp(a) => &a.io,
        Command::Oracle { job: OracleJob::Motifs(a) } => &a.io,
        Command::Oracle { job: OracleJob::Discords(a) } => &a.io,
        Command::Bench(a) => &a.io,
    }
}

fn base_config(io: &IoArgs) -> JobConfig {
    JobConfig {
        input: io.input.display().to_string(),
        column: io.column.clone(),
        trace: io.trace,
        ..JobConfig::default()
    }
}

fn with_range(mut c: JobConfig, r: &RangeArgs) -> JobConfig {
    c.lmin = Some(r.lmin);
    c.lmax = Some(r.lmax);
    c.p = Some(r.p);
    c
}

fn check_range(lmin: usize, lmax: usize) -> Result<(), CliError> {
    if lmin > lmax {
        return Err(CliError::Invalid(format!("--lmin {lmin} exceeds --lmax {lmax}")));
    }
    Ok(())
}

fn check_p(p: usize) -> Result<(), CliError> {
    if p == 0 {
        return Err(CliError::Invalid("--p must be at least 1".into()));
    }
    Ok(())
}

fn load(io: &IoArgs) -> Result<DataSeries, CliError> {
    Ok(ingest(read_series(&io.input, io.column.as_deref())?)?)
}

/// Builds the document of `cmd` without writing it.
pub fn build_document(cmd: &Command) -> Result<ResultDocument, CliError> {
    let io = io_args(cmd);
    let timed = |secs: f64| (!io.no_timing).then_some(secs);
    let (name, params, series, secs, result, trace) = match cmd {
        Command::Motifs(a) => {
            check_range(a.range.lmin, a.range.lmax)?;
            check_p(a.range.p)?;
            let s = load(io)?;
            let t = Instant::now();
            let run = valmod_run(
                &s,
                &ValmodConfig { lmin: a.range.lmin, lmax: a.range.lmax, p: a.range.p },
                None,
            )?;
            let secs = t.elapsed().as_secs_f64();
            let result = JobResult::Motifs {
                top_motif: run.valmp.top_motif().ok(),
                valmp: run.valmp,
                per_length: a.per_length.then_some(run.motifs),
            };
            let params = with_range(base_config(io), &a.range);
            ("motifs", params, s, secs, result, io.trace.then(|| pruning_report(&run.trace)))
        }
        Command::MotifSets(a) => {
            check_range(a.range.lmin, a.range.lmax)?;
            check_p(a.range.p)?;
            if !(a.radius_factor.is_finite() && a.radius_factor > 0.0) {
                return Err(CliError::Invalid("--radius-factor must be positive".into()));
            }
            let s = load(io)?;
            let t = Instant::now();
            let run = motif_sets(
                &s,
                &MotifSetConfig {
                    lmin: a.range.lmin,
                    lmax: a.range.lmax,
                    p: a.range.p,
                    top_k: a.top_k,
                    radius_factor: a.radius_factor,
                    min_frequency: a.min_frequency,
                },
            )?;
            let secs = t.elapsed().as_secs_f64();
            let mut params = with_range(base_config(io), &a.range);
            params.top_k = Some(a.top_k);
            params.radius_factor = Some(a.radius_factor);
            params.min_frequency = Some(a.min_frequency);
            let trace = io.trace.then(|| pruning_report(&run.valmod.trace));
            let result = JobResult::MotifSets { ranked_pairs: run.ranking.len(), sets: run.sets };
            ("motif-sets", params, s, secs, result, trace)
        }
        Command::Discords(a) => {
            check_range(a.range.lmin, a.range.lmax)?;
            check_p(a.range.p)?;
            if a.range.p < a.m {
                return Err(CliError::Invalid(format!(
                    "--p ({}) must be at least --m ({}): each partial profile has to hold the m nearest neighbors",
                    a.range.p, a.m
                )));
            }
            let s = load(io)?;
            let t = Instant::now();
            let run = topkm_discord_discovery(
                &s,
                &DiscordConfig { lmin: a.range.lmin, lmax: a.range.lmax, k: a.k, m: a.m, p: a.range.p },
            )?;
            let secs = t.elapsed().as_secs_f64();
            let mut params = with_range(base_config(io), &a.range);
            params.k = Some(a.k);
            params.m = Some(a.m);
            let trace = io.trace.then(|| pruning_report(&run.trace));
            let result = discord_result(run.per_length, run.merged, a.per_length);
            ("discords", params, s, secs, result, trace)
        }
        Command::Mp(a) => {
            let s = load(io)?;
            let t = Instant::now();
            let (profile, _) = compute_matrix_profile(&s, a.length, 1)?;
            let secs = t.elapsed().as_secs_f64();
            let mut params = base_config(io);
            params.lmin = Some(a.length);
            params.lmax = Some(a.length);
            ("mp", params, s, secs, JobResult::MatrixProfile { profile }, None)
        }
        Command::Oracle { job: OracleJob::Motifs(a) } => {
            check_range(a.lmin, a.lmax)?;
            let s = load(io)?;
            oracle_lengths_fit(&s, a.lmin, a.lmax)?;
            let t = Instant::now();
            let lengths = brute_force_motifs(&s, a.lmin, a.lmax);
            let valmp: Valmp = oracle_valmp(&lengths);
            let per: Vec<LengthMotif> = lengths
                .iter()
                .filter_map(|l| {
                    l.motif.map(|(offset, neighbor, distance)| LengthMotif {
                        length: l.profile.length,
                        offset,
                        neighbor,
                        distance,
                    })
                })
                .collect();
            let secs = t.elapsed().as_secs_f64();
            let mut params = base_config(io);
            params.lmin = Some(a.lmin);
            params.lmax = Some(a.lmax);
            let result = JobResult::Motifs {
                top_motif: valmp.top_motif().ok(),
                valmp,
                per_length: a.per_length.then_some(per),
            };
            ("oracle motifs", params, s, secs, result, None)
        }
        Command::Oracle { job: OracleJob::Discords(a) } => {
            check_range(a.lmin, a.lmax)?;
            if a.k == 0 || a.m == 0 {
                return Err(CliError::Invalid("--k and --m must be at least 1".into()));
            }
            let s = load(io)?;
            oracle_lengths_fit(&s, a.lmin, a.lmax)?;
            let t = Instant::now();
            let (per, merged) = brute_force_discords(&s, a.lmin, a.lmax, a.k, a.m);
            let secs = t.elapsed().as_secs_f64();
            let mut params = base_config(io);
            params.lmin = Some(a.lmin);
            params.lmax = Some(a.lmax);
            params.k = Some(a.k);
            params.m = Some(a.m);
            ("oracle discords", params, s, secs, discord_result(per, merged, a.per_length), None)
        }
        Command::Bench(a) => {
            check_range(a.range.lmin, a.range.lmax)?;
            check_p(a.range.p)?;
            let s = load(io)?;
            let (report, secs) = bench(&s, &a.range, a.baseline_lengths, io.no_timing)?;
            let mut params = with_range(base_config(io), &a.range);
            params.baseline_lengths = Some(a.baseline_lengths);
            let trace = io.trace.then(|| report.pruning.clone());
            ("bench", params, s, secs, JobResult::Bench(report), trace)
        }
    };
    Ok(ResultDocument {
        schema_version: SCHEMA_VERSION,
        job: JobMeta {
            command: name.into(),
            parameters: params,
            series_length: series.len(),
            wall_time_secs: timed(secs),
        },
        result,
        trace,
    })
}

fn discord_result(per: Vec<DiscordMatrix>, merged: VarDiscordMatrix, keep: bool) -> JobResult {
    JobResult::Discords { per_length: keep.then_some(per), merged }
}

// the engine reports these through its own checks; the oracles assume them
fn oracle_lengths_fit(s: &DataSeries, lmin: usize, lmax: usize) -> Result<(), CliError> {
    if lmin < 4 {
        return Err(CliError::Invalid(format!("--lmin {lmin} is below the minimum length 4")));
    }
    if s.len() < lmax + lmax.div_ceil(2) {
        return Err(varmine::Error::SeriesTooShort { n: s.len(), length: lmax }.into());
    }
    Ok(())
}

/// Times the range search and the per-length baseline on the same series.
fn bench(
    s: &DataSeries,
    r: &RangeArgs,
    baseline_lengths: usize,
    no_timing: bool,
) -> Result<(BenchReport, f64), CliError> {
    let count = r.lmax - r.lmin + 1;
    let sample = if baseline_lengths == 0 { count } else { baseline_lengths.min(count) };
    let lengths: Vec<usize> = if sample == 1 {
        vec![r.lmin]
    } else {
        (0..sample).map(|k| r.lmin + k * (count - 1) / (sample - 1)).collect()
    };

    let t = Instant::now();
    let run = valmod_run(s, &ValmodConfig { lmin: r.lmin, lmax: r.lmax, p: r.p }, None)?;
    let valmod_secs = t.elapsed().as_secs_f64();

    let mut base = 0.0;
    for &len in &lengths {
        let t = Instant::now();
        compute_matrix_profile(s, len, r.p)?;
        base += t.elapsed().as_secs_f64();
    }
    let per_length = base / lengths.len() as f64;
    let baseline = per_length * count as f64;
    let timed = |x: f64| (!no_timing).then_some(x);
    let report = BenchReport {
        lengths: count,
        baseline_lengths: lengths,
        valmod_secs: timed(valmod_secs),
        baseline_secs_per_length: timed(per_length),
        baseline_secs: timed(baseline),
        speedup: timed(baseline / valmod_secs),
        top_motif: run.valmp.top_motif().ok(),
        pruning: pruning_report(&run.trace),
    };
    Ok((report, valmod_secs + base))
}
