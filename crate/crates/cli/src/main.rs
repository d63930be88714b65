//! `srank`: parse monoid presentations, decide the word problem, and compute
//! certified stable-rank brackets.
//!
//! Exit codes: 0 success; 1 an asserted property is certified false (or the
//! suite failed); 2 input error; 3 no verdict within budget under
//! `--require-verdict`.

mod report;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use report::Report;
use serde_json::json;
use srank_core::finite::{quotient, validate, FiniteMonoid, QuotientKind, Rank};
use srank_core::harness::suite::{claim_suite, SuiteOptions};
use srank_core::kernel::{complete, find_grading, Finiteness, RewriteSystem};
use srank_core::presentation::{
    parse_cayley, parse_element, parse_presentation, pretty_element, ExponentVector,
};
use srank_core::rank::{Analyzer, RadiusPolicy, SrBracket};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "srank",
    version,
    about = "Cancellation levels for commutative monoids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit the machine-readable JSON report instead of text
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Normal form of an element expression
    Nf {
        file: PathBuf,
        #[arg(short = 'e', long = "element")]
        element: String,
    },
    /// Decide equality of two element expressions
    Eq {
        file: PathBuf,
        #[arg(short = 'e', long = "element", num_args = 1)]
        elements: Vec<String>,
        /// Exit 1 unless the two elements are equal
        #[arg(long = "assert", default_value_t = false)]
        assert_equal: bool,
    },
    /// Complete the presentation into a confluent rewrite system
    Complete {
        file: PathBuf,
        #[arg(long, default_value_t = srank_core::kernel::DEFAULT_COMPLETION_BUDGET)]
        budget: usize,
    },
    /// Detect whether the presented monoid is finite
    Finite {
        file: PathBuf,
        #[arg(long, default_value_t = 1024)]
        cap: usize,
    },
    /// Find a nonnegative grading with maximal support
    Grade { file: PathBuf },
    /// Stable rank bracket (weak and strong) of an element
    Sr {
        file: PathBuf,
        #[arg(short = 'e', long = "element")]
        element: String,
        /// Search radius (default: 4 * (max relation degree + level))
        #[arg(long)]
        radius: Option<u32>,
        /// Highest condition level scanned
        #[arg(long, default_value_t = 12)]
        level_cap: u32,
        /// Extra refutation targets (.ctab files), tried after the library
        #[arg(long = "refuter")]
        refuters: Vec<PathBuf>,
        /// Treat the monoid as a declared refinement monoid
        #[arg(long, default_value_t = false)]
        refinement: bool,
        /// Exit 1 if the pinned value contradicts this ("3", "inf", ...)
        #[arg(long = "assert")]
        assert_value: Option<String>,
        /// Exit 3 when the bracket does not pin
        #[arg(long, default_value_t = false)]
        require_verdict: bool,
    },
    /// Windowed property report for the whole monoid
    Props {
        file: PathBuf,
        #[arg(long)]
        radius: Option<u32>,
    },
    /// Quotient of a finite monoid by a congruence construction
    Quotient {
        file: PathBuf,
        #[arg(long)]
        kind: QuotientKindArg,
        /// Comma-separated element labels generating the o-ideal
        #[arg(long)]
        ideal: Option<String>,
        /// Comma-separated multiplier set for the power congruences
        #[arg(long)]
        set: Option<String>,
        /// Element cap when the input is a presentation
        #[arg(long, default_value_t = 1024)]
        cap: usize,
    },
    /// Run the built-in claim suite
    Suite {
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long)]
        radius: Option<u32>,
        /// Skip the random-sample law batteries
        #[arg(long, default_value_t = false)]
        fixtures_only: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum QuotientKindArg {
    OIdeal,
    MaxAntisym,
    PowerSome,
    PowerAll,
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn init_threads() {
    if let Ok(value) = std::env::var("SRANK_THREADS") {
        if let Ok(n) = value.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}

struct Loaded {
    bytes: Vec<u8>,
    rs: RewriteSystem,
}

fn load_presentation(path: &Path) -> Result<Loaded> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let text = String::from_utf8(bytes.clone()).context("input is not UTF-8")?;
    let (p, warnings) = parse_presentation(&text).map_err(|e| anyhow!("{e}"))?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    let rs =
        complete(&p, srank_core::kernel::DEFAULT_COMPLETION_BUDGET).map_err(|e| anyhow!("{e}"))?;
    Ok(Loaded { bytes, rs })
}

fn load_finite(path: &Path, cap: usize) -> Result<(Vec<u8>, FiniteMonoid)> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let text = String::from_utf8(bytes.clone()).context("input is not UTF-8")?;
    if path.extension().and_then(|e| e.to_str()) == Some("ctab") {
        let doc = parse_cayley(&text).map_err(|e| anyhow!("{e}"))?;
        let m = validate(&doc).map_err(|e| anyhow!("{e}"))?;
        return Ok((bytes, m));
    }
    let (p, _) = parse_presentation(&text).map_err(|e| anyhow!("{e}"))?;
    let rs =
        complete(&p, srank_core::kernel::DEFAULT_COMPLETION_BUDGET).map_err(|e| anyhow!("{e}"))?;
    match rs.detect_finite(cap) {
        Finiteness::Finite(real) => Ok((bytes, real.monoid)),
        Finiteness::NotClosedWithin { cap, .. } => {
            bail!("monoid did not close within {cap} elements; quotients need finite input")
        }
    }
}

fn element(rs: &RewriteSystem, expr: &str) -> Result<ExponentVector> {
    parse_element(expr, &rs.presentation).map_err(|e| anyhow!("{e}"))
}

fn bracket_json(rs: &RewriteSystem, bracket: &SrBracket) -> serde_json::Value {
    let pinned = bracket.pinned().map(|r| r.to_string());
    json!({
        "certified_lo": bracket.certified_lo,
        "empirical_hi": bracket.empirical_hi.map(|h| json!({"n": h.n, "radius": h.radius})),
        "infinite": bracket.infinite.is_some(),
        "pinned": pinned,
        "consistent": bracket.consistent,
        "strong": bracket.strong,
        "evidence": serde_json::to_value(&bracket.lo_evidence).unwrap(),
        "infinite_certificate": serde_json::to_value(&bracket.infinite).unwrap(),
        "audit": bracket_audit(rs, bracket),
    })
}

fn bracket_audit(rs: &RewriteSystem, bracket: &SrBracket) -> serde_json::Value {
    let mut checked = 0usize;
    let mut ok = true;
    for fw in &bracket.lo_evidence {
        if let Some(cert) = &fw.certificate {
            checked += 1;
            ok &= srank_core::rank::verify_certificate(rs, cert).is_ok();
        }
    }
    if let Some(cert) = &bracket.infinite {
        checked += 1;
        ok &= srank_core::rank::verify_certificate(rs, cert).is_ok();
    }
    json!({"certificates": checked, "all_verified": ok})
}

fn describe_bracket(bracket: &SrBracket) -> String {
    let name = if bracket.strong { "sr+" } else { "sr" };
    match bracket.pinned() {
        Some(Rank::Infinite) => format!("{name} = ∞ (certified)"),
        Some(Rank::Finite(n)) => {
            let radius = bracket.empirical_hi.map(|h| h.radius).unwrap_or(0);
            format!("{name} = {n} (certified lower {n}, clean window at radius {radius})")
        }
        None => format!(
            "{name} in [{}, {}] (not pinned)",
            bracket.certified_lo,
            bracket
                .empirical_hi
                .map(|h| h.n.to_string())
                .unwrap_or_else(|| "?".to_string())
        ),
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let start = Instant::now();
    match &cli.command {
        Command::Nf {
            file,
            element: expr,
        } => {
            let loaded = load_presentation(file)?;
            let v = element(&loaded.rs, expr)?;
            let nf = loaded.rs.normal_form(&v);
            let pretty = pretty_element(&nf, &loaded.rs.presentation);
            let results = json!({"input": expr, "normal_form": pretty, "vector": nf});
            emit(
                cli,
                "nf",
                Some(&loaded.bytes),
                json!({"element": expr}),
                results,
                format!("{expr}  ->  {pretty}"),
                start,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Eq {
            file,
            elements,
            assert_equal,
        } => {
            if elements.len() != 2 {
                bail!("eq needs exactly two -e expressions");
            }
            let loaded = load_presentation(file)?;
            let u = element(&loaded.rs, &elements[0])?;
            let v = element(&loaded.rs, &elements[1])?;
            let (nu, nv) = (loaded.rs.normal_form(&u), loaded.rs.normal_form(&v));
            let equal = nu == nv;
            let results = json!({
                "left": elements[0],
                "right": elements[1],
                "equal": equal,
                "left_normal_form": pretty_element(&nu, &loaded.rs.presentation),
                "right_normal_form": pretty_element(&nv, &loaded.rs.presentation),
            });
            emit(
                cli,
                "eq",
                Some(&loaded.bytes),
                json!({"elements": elements, "assert": assert_equal}),
                results,
                if equal {
                    "equal".to_string()
                } else {
                    "distinct".to_string()
                },
                start,
            )?;
            if *assert_equal && !equal {
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Complete { file, budget } => {
            let bytes =
                std::fs::read(file).with_context(|| format!("reading {}", file.display()))?;
            let text = String::from_utf8(bytes.clone()).context("input is not UTF-8")?;
            let (p, _) = parse_presentation(&text).map_err(|e| anyhow!("{e}"))?;
            let rs = complete(&p, *budget).map_err(|e| anyhow!("{e}"))?;
            let rules: Vec<String> = rs
                .rules
                .iter()
                .map(|r| {
                    format!(
                        "{} -> {}",
                        pretty_element(&r.lhs, &p),
                        pretty_element(&r.rhs, &p)
                    )
                })
                .collect();
            let results = json!({
                "confluent": rs.confluence_checked,
                "rules": rules,
                "rule_vectors": rs.rules,
            });
            let text_out = if rules.is_empty() {
                "confluent; no rules (free commutative monoid)".to_string()
            } else {
                format!(
                    "confluent; {} rules:\n  {}",
                    rules.len(),
                    rules.join("\n  ")
                )
            };
            emit(
                cli,
                "complete",
                Some(&bytes),
                json!({"budget": budget}),
                results,
                text_out,
                start,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Finite { file, cap } => {
            let loaded = load_presentation(file)?;
            let (results, text_out) = match loaded.rs.detect_finite(*cap) {
                Finiteness::Finite(real) => {
                    let doc = real.monoid.to_cayley_document();
                    (
                        json!({"finite": true, "size": real.monoid.n(), "table": doc}),
                        format!(
                            "finite with {} elements: {}",
                            real.monoid.n(),
                            real.monoid.labels().join(", ")
                        ),
                    )
                }
                Finiteness::NotClosedWithin {
                    cap,
                    certified_infinite,
                } => {
                    let text_out = match &certified_infinite {
                        Some(g) => format!(
                            "not closed within {cap} elements; certified infinite by grading {:?}",
                            g.weights
                        ),
                        None => format!("not closed within {cap} elements; finiteness unknown"),
                    };
                    (
                        json!({
                            "finite": false,
                            "cap": cap,
                            "certified_infinite": certified_infinite.map(|g| g.weights),
                        }),
                        text_out,
                    )
                }
            };
            emit(
                cli,
                "finite",
                Some(&loaded.bytes),
                json!({"cap": cap}),
                results,
                text_out,
                start,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Grade { file } => {
            let loaded = load_presentation(file)?;
            let grading = find_grading(&loaded.rs.presentation);
            let (results, text_out) = match &grading {
                Some(g) => {
                    let named: Vec<String> = loaded
                        .rs
                        .presentation
                        .generators
                        .iter()
                        .zip(&g.weights)
                        .map(|(name, w)| format!("{name} -> {w}"))
                        .collect();
                    (
                        json!({"weights": g.weights, "strictly_positive": g.is_strictly_positive()}),
                        named.join(", "),
                    )
                }
                None => (
                    json!({"weights": null}),
                    "none (only the zero grading)".to_string(),
                ),
            };
            emit(
                cli,
                "grade",
                Some(&loaded.bytes),
                json!({}),
                results,
                text_out,
                start,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sr {
            file,
            element: expr,
            radius,
            level_cap,
            refuters,
            refinement,
            assert_value,
            require_verdict,
        } => {
            let loaded = load_presentation(file)?;
            let mut analyzer = Analyzer::new(&loaded.rs);
            if *refinement {
                analyzer = analyzer.declare_refinement();
            }
            for path in refuters {
                let bytes = std::fs::read(path)
                    .with_context(|| format!("reading refuter {}", path.display()))?;
                let text = String::from_utf8(bytes).context("refuter is not UTF-8")?;
                let doc = parse_cayley(&text).map_err(|e| anyhow!("{e}"))?;
                let m = validate(&doc).map_err(|e| anyhow!("{e}"))?;
                let name = path
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or("user")
                    .to_string();
                analyzer = analyzer.with_refuter(&name, m);
            }
            let policy = RadiusPolicy {
                explicit: *radius,
                level_cap: *level_cap,
                ..Default::default()
            };
            let v = element(&loaded.rs, expr)?;
            let bracket = analyzer.sr_bracket(&v, policy);
            let strong = analyzer.sr_plus_bracket(&v, policy);
            let preds = analyzer.element_predicates(&v, policy.radius_for(&loaded.rs, 1));
            let results = json!({
                "element": expr,
                "sr": bracket_json(&loaded.rs, &bracket),
                "sr_plus": bracket_json(&loaded.rs, &strong),
                "predicates": preds,
            });
            let text_out = format!(
                "{}\n{}\ncancellative: {} | hermite: {} | self-cancellative: {}",
                describe_bracket(&bracket),
                describe_bracket(&strong),
                describe_verdict(&preds.cancellative, &loaded.rs),
                describe_verdict(&preds.hermite, &loaded.rs),
                describe_verdict(&preds.self_cancellative, &loaded.rs),
            );
            emit(
                cli,
                "sr",
                Some(&loaded.bytes),
                json!({
                    "element": expr,
                    "radius": radius,
                    "level_cap": level_cap,
                    "refinement": refinement,
                }),
                results,
                text_out,
                start,
            )?;
            if let Some(asserted) = assert_value {
                let want = if asserted == "inf" || asserted == "∞" {
                    Rank::Infinite
                } else {
                    Rank::Finite(
                        asserted
                            .parse()
                            .context("--assert takes a number or `inf`")?,
                    )
                };
                match bracket.pinned() {
                    Some(got) if got == want => {}
                    Some(_) => return Ok(ExitCode::from(1)),
                    None => {
                        let contradicted = match want {
                            Rank::Finite(n) => bracket.certified_lo > n,
                            Rank::Infinite => false,
                        };
                        if contradicted {
                            return Ok(ExitCode::from(1));
                        }
                        if *require_verdict {
                            return Ok(ExitCode::from(3));
                        }
                    }
                }
            } else if *require_verdict && bracket.pinned().is_none() {
                return Ok(ExitCode::from(3));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Props { file, radius } => {
            let loaded = load_presentation(file)?;
            let analyzer = Analyzer::new(&loaded.rs);
            let policy = RadiusPolicy {
                explicit: *radius,
                ..Default::default()
            };
            let r = policy.radius_for(&loaded.rs, 1);
            let report = analyzer.window_property_report(r, 2 * r);
            let text_out = format!(
                "radius {r}: conical {}; stably finite {}; separative {}; strongly separative {}; refinement {}; simplicity {}; {} window components",
                verdict_word(&report.conical),
                verdict_word(&report.stably_finite),
                verdict_word(&report.separative),
                verdict_word(&report.strongly_separative),
                verdict_word(&report.refinement),
                verdict_word(&report.simplicity),
                report.components.len(),
            );
            emit(
                cli,
                "props",
                Some(&loaded.bytes),
                json!({"radius": r}),
                serde_json::to_value(&report).unwrap(),
                text_out,
                start,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Quotient {
            file,
            kind,
            ideal,
            set,
            cap,
        } => {
            let (bytes, m) = load_finite(file, *cap)?;
            let kind = match kind {
                QuotientKindArg::OIdeal => {
                    let labels = ideal
                        .as_ref()
                        .ok_or_else(|| anyhow!("--kind o-ideal needs --ideal labels"))?;
                    let members = labels
                        .split(',')
                        .map(|l| {
                            m.labels()
                                .iter()
                                .position(|x| x == l.trim())
                                .ok_or_else(|| anyhow!("unknown element label `{l}`"))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    QuotientKind::OIdeal(members)
                }
                QuotientKindArg::MaxAntisym => QuotientKind::MaxAntisym,
                QuotientKindArg::PowerSome | QuotientKindArg::PowerAll => {
                    let multipliers = set
                        .as_ref()
                        .ok_or_else(|| anyhow!("power congruences need --set multipliers"))?
                        .split(',')
                        .map(|s| {
                            s.trim()
                                .parse::<u64>()
                                .context("multiplier must be a number")
                        })
                        .collect::<Result<Vec<_>>>()?;
                    match kind {
                        QuotientKindArg::PowerSome => QuotientKind::PowerSome(multipliers),
                        _ => QuotientKind::PowerAll(multipliers),
                    }
                }
            };
            let q = quotient(&m, &kind).map_err(|e| anyhow!("{e}"))?;
            let projection: Vec<String> = m
                .labels()
                .iter()
                .zip(&q.projection)
                .map(|(from, &to)| format!("{from} -> {}", q.monoid.label(to)))
                .collect();
            let results = json!({
                "size": q.monoid.n(),
                "table": q.monoid.to_cayley_document(),
                "projection": projection,
                "idempotent": q.idempotent,
            });
            let text_out = format!(
                "quotient with {} classes: {}\nprojection: {}",
                q.monoid.n(),
                q.monoid.labels().join(", "),
                projection.join(", ")
            );
            emit(
                cli,
                "quotient",
                Some(&bytes),
                json!({"kind": format!("{kind:?}")}),
                results,
                text_out,
                start,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Suite {
            fixture,
            radius,
            fixtures_only,
        } => {
            if let Some(id) = fixture {
                if !srank_core::harness::fixture_ids().contains(&id.as_str()) {
                    bail!(
                        "unknown fixture `{id}` (known: {})",
                        srank_core::harness::fixture_ids().join(", ")
                    );
                }
            }
            let options = SuiteOptions {
                radius_override: *radius,
                fixture_filter: fixture.clone(),
                fixtures_only: *fixtures_only,
            };
            let report = claim_suite(&options);
            let mut lines = Vec::new();
            for r in &report.results {
                lines.push(format!(
                    "{} [{}] {}{}",
                    if r.ok { "pass" } else { "FAIL" },
                    r.fixture,
                    r.claim,
                    if r.ok {
                        String::new()
                    } else {
                        format!(": {}", r.detail)
                    }
                ));
            }
            lines.push(format!(
                "{} checks, {} certificates re-verified: {}",
                report.results.len(),
                report.certificates_audited,
                if report.ok { "all green" } else { "FAILURES" }
            ));
            emit(
                cli,
                "suite",
                None,
                json!({"fixture": fixture, "radius": radius, "fixtures_only": fixtures_only}),
                serde_json::to_value(&report).unwrap(),
                lines.join("\n"),
                start,
            )?;
            Ok(if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn verdict_word(v: &srank_core::rank::Verdict) -> &'static str {
    use srank_core::rank::Verdict;
    match v {
        Verdict::Holds(_) => "holds",
        Verdict::Fails(_) => "fails",
        Verdict::UnknownUpTo { .. } => "unknown",
    }
}

fn describe_verdict(v: &srank_core::rank::Verdict, rs: &RewriteSystem) -> String {
    use srank_core::rank::Verdict;
    match v {
        Verdict::Holds(_) => "holds".to_string(),
        Verdict::Fails(fw) => {
            let witness: Vec<String> = fw
                .elements
                .iter()
                .map(|(role, e)| format!("{role}={}", pretty_element(e, &rs.presentation)))
                .collect();
            format!("fails ({})", witness.join(", "))
        }
        Verdict::UnknownUpTo { radius } => format!("unknown up to radius {radius}"),
    }
}

fn emit(
    cli: &Cli,
    command: &str,
    input: Option<&[u8]>,
    parameters: serde_json::Value,
    results: serde_json::Value,
    text: String,
    start: Instant,
) -> Result<()> {
    if cli.json {
        let report = Report::new(
            command,
            input,
            parameters,
            results,
            start.elapsed().as_millis(),
        );
        println!("{}", report.to_json());
    } else {
        println!("{text}");
    }
    Ok(())
}
