//! `ranksum` — scoring and propriety checking for ranked forecasts of
//! binary outcomes, in exact rational arithmetic.
//!
//! Exit codes: 0 clean/proper/all-pass, 1 improper or a failed
//! reproduction assertion, 2 usage or input errors.

mod submission;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num::rational::BigRational;
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ranksum::dist::DistributionSpec;
use ranksum::kernels::{
    auc_with_constant, gini_with_constant, roc_curve, wmw_u, AucKernel, KernelKind, OutcomeVector,
};
use ranksum::preorder::TotalPreorder;
use ranksum::presets;
use ranksum::propriety::{
    check_propriety, check_propriety_brute, search_trial, ProprietyCertificate,
};
use ranksum::rational::{format_rational, half, parse_rational, ratio, to_f64};
use ranksum::sequential::{run_sequence, SequentialState};
use ranksum::theory::ScalarMap;

#[derive(Parser)]
#[command(
    name = "ranksum",
    version,
    about = "Exact rank-sum scoring (u, AUC, Gini) and propriety checking for binary-outcome forecasts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score a submission CSV (header `id,prediction,outcome`) with u, AUC
    /// and Gini; equal predictions form ties.
    Score {
        file: PathBuf,
        /// Verify that the submission has exactly this many positive
        /// outcomes and annotate the report accordingly.
        #[arg(long)]
        known_positives: Option<usize>,
        /// AUC value reported when all outcomes are equal.
        #[arg(long, default_value = "1/2")]
        degenerate_constant: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write the ROC curve of a submission as `fpr,tpr` CSV.
    Roc {
        file: PathBuf,
        /// Output path for the curve.
        #[arg(long)]
        out: PathBuf,
        /// Render coordinates as decimals instead of exact `a/b`.
        #[arg(long)]
        decimal: bool,
    },
    /// Expected kernel score of a quoted preorder under a distribution
    /// file (joint, product, or mixture JSON).
    Expected {
        file: PathBuf,
        #[arg(long)]
        kernel: String,
        /// Preorder text form, lowest class first, e.g. "[4][3][1,2]".
        #[arg(long)]
        preorder: String,
        #[arg(long, default_value = "1/2")]
        degenerate_constant: String,
        /// Expansion cap for product/mixture files.
        #[arg(long, default_value_t = 20)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check propriety of a kernel on a distribution file, or search
    /// seeded random distributions for counterexamples with `--search`.
    /// Exit code 1 signals an improper verdict or a non-empty search.
    Propriety {
        #[arg(required_unless_present = "search", conflicts_with = "search")]
        file: Option<PathBuf>,
        /// Search mode: scan `--budget` random distributions on `--n`
        /// indices derived from `--seed`.
        #[arg(long)]
        search: bool,
        #[arg(long, default_value = "auc")]
        kernel: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads for search mode; output order is independent of
        /// this setting.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Enumeration cap (bounds `--n` and the cross-check).
        #[arg(long, default_value_t = 8)]
        cap: usize,
        /// Also run the brute-force check over every preorder and require
        /// agreement with the fast path.
        #[arg(long)]
        cross_check: bool,
        #[arg(long, default_value = "1/2")]
        degenerate_constant: String,
        /// Expansion cap for product/mixture files.
        #[arg(long, default_value_t = 20)]
        expansion_cap: usize,
    },
    /// Run a built-in demonstration case and print one PASS/FAIL line per
    /// assertion. Exit code 1 when any line fails.
    Reproduce {
        #[arg(value_enum)]
        case: ReproduceCase,
        /// Sequence length for the sequential case.
        #[arg(long, default_value_t = 10)]
        len: usize,
        /// Seed for the sequential case.
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReproduceCase {
    Example3,
    Example5,
    Theorem2,
    Sequential,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Score {
            file,
            known_positives,
            degenerate_constant,
            format,
        } => cmd_score(&file, known_positives, &degenerate_constant, format),
        Command::Roc { file, out, decimal } => cmd_roc(&file, &out, decimal),
        Command::Expected {
            file,
            kernel,
            preorder,
            degenerate_constant,
            cap,
            format,
        } => cmd_expected(&file, &kernel, &preorder, &degenerate_constant, cap, format),
        Command::Propriety {
            file,
            search,
            kernel,
            n,
            budget,
            seed,
            jobs,
            cap,
            cross_check,
            degenerate_constant,
            expansion_cap,
        } => {
            let kind: KernelKind = kernel.parse()?;
            let degenerate = parse_rational(&degenerate_constant)?;
            if search {
                cmd_search(kind, degenerate, n, budget, seed, jobs, cap)
            } else {
                cmd_propriety(
                    file.as_deref().expect("clap requires the file"),
                    kind,
                    degenerate,
                    cap,
                    cross_check,
                    expansion_cap,
                )
            }
        }
        Command::Reproduce { case, len, seed } => cmd_reproduce(case, len, seed),
    }
}

fn cmd_score(
    file: &std::path::Path,
    known_positives: Option<usize>,
    degenerate_constant: &str,
    format: Format,
) -> Result<ExitCode> {
    let degenerate = parse_rational(degenerate_constant)?;
    let submission = submission::read_submission(file)?;
    let y = &submission.outcomes;
    let ranking = TotalPreorder::induced_by(&submission.predictions)?;

    if let Some(expected) = known_positives {
        if y.positives() != expected {
            bail!(
                "submission has {} positive outcomes but --known-positives is {expected}",
                y.positives()
            );
        }
    }

    let u = wmw_u(y, &ranking)?;
    let auc = auc_with_constant(y, &ranking, &degenerate)?;
    let gini = gini_with_constant(y, &ranking, &degenerate)?;

    match format {
        Format::Text => {
            println!(
                "rows: {} ({} positive, {} negative)",
                y.len(),
                y.positives(),
                y.negatives()
            );
            println!("u:    {} (decimal {})", format_rational(&u), to_f64(&u));
            println!("auc:  {} (decimal {})", format_rational(&auc), to_f64(&auc));
            println!(
                "gini: {} (decimal {})",
                format_rational(&gini),
                to_f64(&gini)
            );
            if y.is_degenerate() {
                println!(
                    "warning: all outcomes are {}; AUC and Gini take the convention values",
                    u8::from(y.get(0))
                );
            }
            if known_positives.is_some() {
                println!(
                    "note: positive count verified ({}); with the count fixed in advance, \
                     the AUC rewards the honest marginal ranking",
                    y.positives()
                );
            }
        }
        Format::Json => {
            let value = serde_json::json!({
                "rows": y.len(),
                "positives": y.positives(),
                "negatives": y.negatives(),
                "u": format_rational(&u),
                "u_decimal": to_f64(&u),
                "auc": format_rational(&auc),
                "auc_decimal": to_f64(&auc),
                "gini": format_rational(&gini),
                "gini_decimal": to_f64(&gini),
                "degenerate": y.is_degenerate(),
                "known_positives_verified": known_positives,
            });
            println!("{}", serde_json::to_string_pretty(&value)?);
        }
        Format::Csv => {
            println!("u,auc,gini");
            println!(
                "{},{},{}",
                format_rational(&u),
                format_rational(&auc),
                format_rational(&gini)
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_roc(file: &std::path::Path, out: &std::path::Path, decimal: bool) -> Result<ExitCode> {
    let submission = submission::read_submission(file)?;
    let ranking = TotalPreorder::induced_by(&submission.predictions)?;
    let curve = roc_curve(&submission.outcomes, &ranking)
        .context("cannot build an ROC curve for this submission")?;
    std::fs::write(out, curve.to_csv(decimal))
        .with_context(|| format!("cannot write {}", out.display()))?;
    println!(
        "wrote {} points to {} (area {})",
        curve.points().len(),
        out.display(),
        format_rational(&curve.area())
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_expected(
    file: &std::path::Path,
    kernel: &str,
    preorder_text: &str,
    degenerate_constant: &str,
    cap: usize,
    format: Format,
) -> Result<ExitCode> {
    let kind: KernelKind = kernel.parse()?;
    let degenerate = parse_rational(degenerate_constant)?;
    let text =
        std::fs::read_to_string(file).with_context(|| format!("cannot read {}", file.display()))?;
    let joint = DistributionSpec::from_json(&text)?.to_joint(cap)?;
    let quoted = TotalPreorder::parse(preorder_text)?;
    let kernel = kind.build(degenerate);
    let score = joint.expected_score(kernel.as_ref(), &quoted)?;
    match format {
        Format::Json => {
            let value = serde_json::json!({
                "kernel": kind.to_string(),
                "preorder": quoted.to_string(),
                "expected_score": format_rational(&score),
                "expected_score_decimal": to_f64(&score),
            });
            println!("{}", serde_json::to_string_pretty(&value)?);
        }
        _ => {
            println!(
                "expected {} score of {}: {} (decimal {})",
                kind,
                quoted,
                format_rational(&score),
                to_f64(&score)
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_propriety(
    file: &std::path::Path,
    kind: KernelKind,
    degenerate: BigRational,
    cap: usize,
    cross_check: bool,
    expansion_cap: usize,
) -> Result<ExitCode> {
    let text =
        std::fs::read_to_string(file).with_context(|| format!("cannot read {}", file.display()))?;
    let joint = DistributionSpec::from_json(&text)?.to_joint(expansion_cap)?;
    let kernel = kind.build(degenerate);
    let certificate = check_propriety(&joint, kernel.as_ref());
    if cross_check {
        let brute = check_propriety_brute(&joint, kernel.as_ref(), cap)?;
        if brute.verdict != certificate.verdict {
            bail!("internal disagreement between fast and brute-force verdicts");
        }
        eprintln!("cross-check: brute-force verdict agrees");
    }
    println!("{}", certificate.to_json());
    Ok(if certificate.is_proper() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_search(
    kind: KernelKind,
    degenerate: BigRational,
    n: usize,
    budget: u64,
    seed: u64,
    jobs: usize,
    cap: usize,
) -> Result<ExitCode> {
    if n > cap {
        bail!("--n {n} exceeds the cap of {cap}");
    }
    if n == 0 {
        bail!("--n must be at least 1");
    }
    let jobs = jobs.max(1);
    let mut found: Vec<(u64, ProprietyCertificate)> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(jobs);
        for worker in 0..jobs as u64 {
            let degenerate = degenerate.clone();
            handles.push(scope.spawn(move || {
                let kernel = kind.build(degenerate);
                let mut local = Vec::new();
                let mut trial = worker;
                while trial < budget {
                    if let Some(cert) = search_trial(kernel.as_ref(), n, seed, trial) {
                        local.push((trial, cert));
                    }
                    trial += jobs as u64;
                }
                local
            }));
        }
        for handle in handles {
            found.extend(handle.join().expect("search worker panicked"));
        }
    });
    found.sort_by_key(|(trial, _)| *trial);

    let values: Vec<serde_json::Value> = found
        .iter()
        .map(|(_, cert)| serde_json::from_str(&cert.to_json()).expect("valid JSON"))
        .collect();
    println!(
        "{}",
        serde_json::to_string_pretty(&serde_json::Value::Array(values))?
    );
    eprintln!(
        "searched {budget} trials on n={n} with seed {seed}: {} improper certificate(s)",
        found.len()
    );
    Ok(if found.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

struct ReportSink {
    failures: usize,
}

impl ReportSink {
    fn new() -> Self {
        ReportSink { failures: 0 }
    }

    fn line(&mut self, label: &str, expected: &str, computed: &str, pass: bool) {
        println!(
            "{label}: expected {expected}, computed {computed} -> {}",
            if pass { "PASS" } else { "FAIL" }
        );
        if !pass {
            self.failures += 1;
        }
    }

    fn into_exit(self) -> ExitCode {
        if self.failures == 0 {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        }
    }
}

fn format_vector(values: &[BigRational]) -> String {
    let inner: Vec<String> = values.iter().map(format_rational).collect();
    format!("({})", inner.join(", "))
}

fn cmd_reproduce(case: ReproduceCase, len: usize, seed: u64) -> Result<ExitCode> {
    match case {
        ReproduceCase::Example3 => reproduce_counterexample(),
        ReproduceCase::Example5 => reproduce_grouped(),
        ReproduceCase::Theorem2 => reproduce_identity(),
        ReproduceCase::Sequential => reproduce_sequential(len, seed),
    }
}

fn reproduce_counterexample() -> Result<ExitCode> {
    println!("case: marginal ranking beaten under the AUC (4 outcomes, 3 atoms)");
    let dist = presets::auc_counterexample();
    let kernel = AucKernel::default();
    let mut report = ReportSink::new();

    let marginals = dist.marginals();
    let expected_marginals = vec![ratio(1, 2), ratio(1, 2), ratio(7, 16), ratio(1, 16)];
    report.line(
        "marginal probabilities",
        &format_vector(&expected_marginals),
        &format_vector(&marginals),
        marginals == expected_marginals,
    );

    let weights: Vec<BigRational> = dist
        .expected_weights(&kernel)
        .iter()
        .map(|w| w * ratio(2, 1))
        .collect();
    let expected_weights = vec![ratio(1, 8), ratio(1, 8), ratio(7, 48), ratio(1, 48)];
    report.line(
        "expected AUC weights",
        &format_vector(&expected_weights),
        &format_vector(&weights),
        weights == expected_weights,
    );

    let honest = TotalPreorder::parse("[4][3][1,2]")?;
    let alternative = TotalPreorder::parse("[4][1,2][3]")?;
    report.line(
        "marginal-induced ranking",
        "[4][3][1,2]",
        &dist.exact_rank().to_string(),
        dist.exact_rank() == honest,
    );
    report.line(
        "rank vector of [4][3][1,2]",
        "(2, 2, -1, -3)",
        &format!("{:?}", honest.rank_vector().values()),
        honest.rank_vector().values() == [2, 2, -1, -3],
    );
    report.line(
        "rank vector of [4][1,2][3]",
        "(0, 0, 3, -3)",
        &format!("{:?}", alternative.rank_vector().values()),
        alternative.rank_vector().values() == [0, 0, 3, -3],
    );

    let honest_score = dist.expected_score(&kernel, &honest)?;
    let alternative_score = dist.expected_score(&kernel, &alternative)?;
    report.line(
        "expected AUC of honest ranking",
        "31/48",
        &format_rational(&honest_score),
        honest_score == ratio(31, 48),
    );
    report.line(
        "expected AUC of alternative ranking",
        "33/48",
        &format_rational(&alternative_score),
        alternative_score == ratio(33, 48),
    );

    let certificate = check_propriety(&dist, &kernel);
    report.line(
        "verdict",
        "improper",
        if certificate.is_proper() {
            "proper-here"
        } else {
            "improper"
        },
        !certificate.is_proper(),
    );
    Ok(report.into_exit())
}

fn reproduce_grouped() -> Result<ExitCode> {
    println!("case: two candidate models, 100 outcomes, 10 featured");
    let spec = presets::two_model_grouped();
    let mut report = ReportSink::new();

    let marginals = spec.group_marginals();
    report.line(
        "group marginals",
        "(27/40, 7/10)",
        &format_vector(&marginals),
        marginals == vec![ratio(27, 40), ratio(7, 10)],
    );

    let induced = spec.expected_auc(&TotalPreorder::parse("[1][2]")?, &half())?;
    let opposite = spec.expected_auc(&TotalPreorder::parse("[2][1]")?, &half())?;
    report.line(
        "expected AUC of marginal-induced group ranking",
        "0.496 (tolerance 5e-4)",
        &format!("{:.6}", to_f64(&induced)),
        (to_f64(&induced) - 0.496).abs() < 5e-4,
    );
    report.line(
        "expected AUC of the opposite ranking",
        "0.504 (tolerance 5e-4)",
        &format!("{:.6}", to_f64(&opposite)),
        (to_f64(&opposite) - 0.504).abs() < 5e-4,
    );
    report.line(
        "the two rankings average to 1/2 exactly",
        "1",
        &format_rational(&(&induced + &opposite)),
        &induced + &opposite == BigRational::one(),
    );
    Ok(report.into_exit())
}

fn reproduce_identity() -> Result<ExitCode> {
    println!("case: expected empirical AUC versus theoretical AUC");
    let model = presets::binary_pair_model();
    let f = ScalarMap::new([
        ("0".to_string(), ratio(0, 1)),
        ("1".to_string(), ratio(1, 1)),
    ]);
    let mut report = ReportSink::new();

    let tauc = model.theoretical_auc(&f)?;
    report.line(
        "theoretical AUC",
        "7/10",
        &format_rational(&tauc),
        tauc == ratio(7, 10),
    );

    for n in [2usize, 3] {
        let (lhs, rhs) = model.expected_auc_identity(&f, n, &half())?;
        report.line(
            &format!("identity at n={n}"),
            &format!("lhs = rhs = {}", format_rational(&rhs)),
            &format!(
                "lhs {}, rhs {}",
                format_rational(&lhs),
                format_rational(&rhs)
            ),
            lhs == rhs,
        );
    }
    for c in [BigRational::zero(), BigRational::one()] {
        let (lhs, rhs) = model.expected_auc_identity(&f, 3, &c)?;
        report.line(
            &format!("identity with degenerate constant {}", format_rational(&c)),
            "lhs = rhs",
            &format!(
                "lhs {}, rhs {}",
                format_rational(&lhs),
                format_rational(&rhs)
            ),
            lhs == rhs,
        );
    }
    Ok(report.into_exit())
}

fn reproduce_sequential(len: usize, seed: u64) -> Result<ExitCode> {
    if len < 2 {
        bail!("--len must be at least 2 so both classes can appear");
    }
    println!("case: perfect-separation strategy on a random sequence (len {len}, seed {seed})");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bits: Vec<bool> = (0..len).map(|_| rng.gen_bool(0.5)).collect();
    if bits.iter().all(|&b| b) || bits.iter().all(|&b| !b) {
        let first = bits[0];
        bits[0] = !first; // keep both classes present
    }

    let mut state = SequentialState::new();
    for (t, &bit) in bits.iter().enumerate() {
        println!(
            "step {:>2}: quote {} observe y{} = {}",
            t + 1,
            state.current(),
            t + 1,
            u8::from(bit)
        );
        state = state.insert_next(bit);
    }
    let outcomes = OutcomeVector::new(bits).expect("len >= 2");
    let (final_ranking, score) = run_sequence(&outcomes)?;
    println!("final ranking: {final_ranking}");

    let mut report = ReportSink::new();
    report.line(
        "realized AUC",
        "1",
        &format_rational(&score),
        score == BigRational::one(),
    );
    Ok(report.into_exit())
}
