use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rro_core::sim::{self, SetId, SimulationConfig, SimulationResult, SkewDirection};
use rro_core::{
    family_by_name, fit_mle, interleaving_count, rro_exact_test, rro_mc_test, rro_normal_test, CentralMoments,
    McOptions, PValueEstimator, Sample, TestResult,
};
use serde::Serialize;

use crate::error::CliError;
use crate::input::read_sample;
use crate::manifest::RunManifest;
use crate::{FitArgs, Format, MethodArg, SimulateArgs, TestArgs};

fn write_err(e: std::io::Error) -> CliError {
    CliError::Write {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

fn emit_json(out: &mut dyn Write, value: &impl Serialize) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| write_err(e.into()))?;
    writeln!(out).map_err(write_err)
}

#[derive(Serialize)]
struct TestReport<'a> {
    manifest: RunManifest<&'a TestArgs>,
    m: usize,
    n: usize,
    results: Vec<TestResult>,
}

pub fn test(args: &TestArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return Err(CliError::Usage(format!("--alpha {} outside (0, 1)", args.alpha)));
    }
    let (x, dx) = read_sample(&args.x)?;
    let (y, dy) = read_sample(&args.y)?;
    let tail = args.tail.into();
    let mut results = Vec::new();

    let run_mc = matches!(args.method, MethodArg::Mc | MethodArg::All);
    let run_normal = matches!(args.method, MethodArg::Normal | MethodArg::All);
    let run_exact = match args.method {
        MethodArg::Exact => true,
        MethodArg::All => interleaving_count(x.len(), y.len()) <= args.exact_cap as u128,
        _ => false,
    };
    if run_exact {
        results.push(rro_exact_test(&x, &y, args.alpha, tail, args.exact_cap)?);
    }
    if run_mc {
        let family = family_by_name(args.family.name(), args.paper_constraints)?;
        let options = McOptions {
            replicates: args.mc_samples,
            seed: args.seed,
            estimator: if args.smoothed_p {
                PValueEstimator::Smoothed
            } else {
                PValueEstimator::Plain
            },
        };
        results.push(rro_mc_test(&x, &y, &family, &options, args.alpha, tail)?);
    }
    if run_normal {
        results.push(rro_normal_test(&x, &y, args.alpha, tail)?);
    }

    let report = TestReport {
        manifest: RunManifest::new("test", args, Some(args.seed), vec![dx, dy]),
        m: x.len(),
        n: y.len(),
        results,
    };
    match args.format {
        Format::Json => emit_json(out, &report),
        Format::Text => write_test_text(out, &report).map_err(write_err),
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"))
}

fn write_test_text(out: &mut dyn Write, report: &TestReport<'_>) -> std::io::Result<()> {
    let args = report.manifest.options;
    writeln!(
        out,
        "robust rank-order test: m = {}, n = {}, tail = {}, alpha = {}",
        report.m,
        report.n,
        rro_core::Tail::from(args.tail),
        args.alpha
    )?;
    writeln!(
        out,
        "{:<10} {:>10} {:>9} {:>9} {:>9} {:>10} {:>10} {:>7}",
        "method", "U", "p_left", "p_right", "p_two", "crit_left", "crit_right", "reject"
    )?;
    for r in &report.results {
        writeln!(
            out,
            "{:<10} {:>10.4} {:>9.4} {:>9.4} {:>9.4} {:>10} {:>10} {:>7}",
            r.method.label(),
            r.statistic.value,
            r.p_left,
            r.p_right,
            r.p_two,
            fmt_opt(r.critical_left),
            fmt_opt(r.critical_right),
            if r.rejects() { "yes" } else { "no" }
        )?;
    }
    if let Some(mc) = report.results.iter().find(|r| r.fit_x.is_some()) {
        writeln!(
            out,
            "Monte-Carlo null: {} replicates, seed {}, Hodges-Lehmann shift {:.4}",
            mc.null_cardinality.unwrap_or(0),
            mc.seed.unwrap_or(0),
            mc.shift.unwrap_or(0.0)
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct NamedValue {
    name: &'static str,
    value: f64,
}

#[derive(Serialize)]
struct SampleSummary {
    n: usize,
    median: f64,
    mean: f64,
    sd: f64,
    skewness: f64,
}

impl SampleSummary {
    fn of(s: &Sample) -> Self {
        SampleSummary {
            n: s.len(),
            median: s.median(),
            mean: s.mean(),
            sd: s.sd(),
            skewness: s.skewness(),
        }
    }
}

#[derive(Serialize)]
struct FitReport<'a> {
    manifest: RunManifest<&'a FitArgs>,
    family: String,
    parameters: Vec<NamedValue>,
    log_likelihood: f64,
    start_log_likelihood: f64,
    evaluations: usize,
    sample: SampleSummary,
    fitted_moments: Option<CentralMoments>,
}

pub fn fit(args: &FitArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (data, digest) = read_sample(&args.input)?;
    let family = family_by_name(args.family.name(), args.paper_constraints)?;
    let fit = fit_mle(family.as_ref(), &data)?;
    let report = FitReport {
        manifest: RunManifest::new("fit", args, None, vec![digest]),
        parameters: family
            .parameter_names()
            .iter()
            .zip(&fit.params)
            .map(|(&name, &value)| NamedValue { name, value })
            .collect(),
        fitted_moments: family.moments(&fit.params),
        family: fit.family,
        log_likelihood: fit.log_likelihood,
        start_log_likelihood: fit.start_log_likelihood,
        evaluations: fit.evaluations,
        sample: SampleSummary::of(&data),
    };
    match args.format {
        Format::Json => emit_json(out, &report),
        Format::Text => write_fit_text(out, &report).map_err(write_err),
    }
}

fn write_fit_text(out: &mut dyn Write, r: &FitReport<'_>) -> std::io::Result<()> {
    writeln!(out, "{} fit to {} values", r.family, r.sample.n)?;
    for p in &r.parameters {
        writeln!(out, "  {:<8} {:>14.6}", p.name, p.value)?;
    }
    writeln!(
        out,
        "log-likelihood {:.6} (start {:.6}, {} evaluations)",
        r.log_likelihood, r.start_log_likelihood, r.evaluations
    )?;
    writeln!(out, "{:<10} {:>10} {:>10}", "moment", "sample", "fitted")?;
    let fitted = r.fitted_moments.as_ref();
    let rows = [
        ("median", r.sample.median, fitted.map(|m| m.median)),
        ("mean", r.sample.mean, fitted.map(|m| m.mean)),
        ("sd", r.sample.sd, fitted.map(|m| m.sd)),
        ("skewness", r.sample.skewness, fitted.map(|m| m.skewness)),
    ];
    for (name, sample, fitted) in rows {
        writeln!(out, "{name:<10} {sample:>10.4} {:>10}", fmt_opt(fitted))?;
    }
    Ok(())
}

/// Parses "m,n;m,n;...".
pub fn parse_sizes(spec: &str) -> Result<Vec<(usize, usize)>, CliError> {
    let bad = || CliError::Usage(format!("invalid --sizes `{spec}`; expected \"m,n;m,n;...\""));
    spec.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let (m, n) = pair.split_once(',').ok_or_else(bad)?;
            let m: usize = m.trim().parse().map_err(|_| bad())?;
            let n: usize = n.trim().parse().map_err(|_| bad())?;
            if m < 2 || n < 2 {
                return Err(CliError::Usage(format!("sample sizes must be at least 2 in `{pair}`")));
            }
            Ok((m, n))
        })
        .collect::<Result<Vec<_>, _>>()
        .and_then(|v| if v.is_empty() { Err(bad()) } else { Ok(v) })
}

#[derive(Serialize)]
struct SimulateManifestOptions<'a> {
    args: &'a SimulateArgs,
    configs: Vec<&'a SimulationConfig>,
}

pub fn simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let set: SetId = args.set.parse().map_err(|e: rro_core::Error| CliError::Usage(e.to_string()))?;
    let directions: Vec<SkewDirection> = match &args.direction {
        Some(d) => vec![d.parse().map_err(|e: rro_core::Error| CliError::Usage(e.to_string()))?],
        None => set.directions().to_vec(),
    };
    let sizes = args.sizes.as_deref().map(parse_sizes).transpose()?;
    let mut configs = Vec::new();
    for direction in directions {
        let mut c = SimulationConfig::preset(set, direction, args.seed).map_err(|e| CliError::Usage(e.to_string()))?;
        c.pair_count = args.pairs;
        if let Some(b) = &args.mc_samples {
            c.mc_replicates = b.clone();
        }
        if let Some(s) = &sizes {
            c.size_pairs = s.clone();
        }
        if let Some(a) = &args.alphas {
            c.alphas = a.clone();
        }
        c.retain_p_values = args.retain_p_values;
        c.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        configs.push(c);
    }

    fs::create_dir_all(&args.out).map_err(|source| CliError::Write {
        path: args.out.clone(),
        source,
    })?;
    let mut results: Vec<SimulationResult> = Vec::new();
    for c in &configs {
        eprintln!(
            "set {}: {} size pair(s) x {} pairs, null sizes {:?}",
            c.label(),
            c.size_pairs.len(),
            c.pair_count,
            c.mc_replicates
        );
        results.push(sim::run_simulation_set(c)?);
    }

    let stem = format!("set-{}", set.label().to_ascii_lowercase());
    let csv_path = args.out.join(format!("{stem}.csv"));
    let json_path = args.out.join(format!("{stem}.json"));
    let manifest_path = args.out.join(format!("{stem}.manifest.json"));
    sim::write_csv(results.iter().flat_map(|r| &r.rows), create(&csv_path)?)?;
    sim::write_json(&results, create(&json_path)?)?;
    let manifest = RunManifest::new(
        "simulate",
        SimulateManifestOptions {
            args,
            configs: configs.iter().collect(),
        },
        Some(args.seed),
        Vec::new(),
    );
    serde_json::to_writer_pretty(create(&manifest_path)?, &manifest).map_err(|e| CliError::Write {
        path: manifest_path.clone(),
        source: e.into(),
    })?;

    for r in &results {
        writeln!(out, "{}: {} rows", r.label, r.rows.len()).map_err(write_err)?;
    }
    for p in [&csv_path, &json_path, &manifest_path] {
        writeln!(out, "wrote {}", p.display()).map_err(write_err)?;
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}
