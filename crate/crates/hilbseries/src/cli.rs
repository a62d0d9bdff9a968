//! Command-line front end: `compute` emits exact series as canonical JSON,
//! `verify` runs the identity suites and reports pass/fail.
//!
//! Determinism contract: identical invocations print byte-identical standard
//! output, independent of `--jobs`; timing goes to standard error only. All
//! numeric payloads are fraction strings — no floating point anywhere.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::closedform::{
    b34_localization, b4_binomial, b4_conjecture, verify_bconj, verify_known_series,
    ClosedformError,
};
use crate::macdonald::render_exp;
use crate::macdonald::{verify_cauchy, verify_garsia_tesler, verify_koornwinder};
use crate::partfun::{
    extract_h, omega_master, verify_functional_equation, verify_palindromic,
    verify_symmetry_theorem, OmegaSpec,
};
use crate::partition::Partition;
use crate::report::CheckReport;
use crate::ring::json::{qq_string, series_to_json};
use crate::ring::TruncatedSeries;
use crate::toric::{
    builtin_surface, equivariant_line_bundle, hilb_k, k_theory_class, verify_vanishing,
    verlinde_series, EquivariantBundle, ToricError, ToricSurfaceModel,
};
use crate::universal::{
    closed_form_g, extract_universal, verify_differential_identities, verify_main_theorem,
    verify_segre_verlinde, Flavor,
};

/// Exact generating-series computations for Hilbert schemes of points.
#[derive(Parser)]
#[command(name = "hilbseries", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for the parallel partition/fixed-point fan-out.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output rendering.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a series and print it.
    #[command(subcommand)]
    Compute(ComputeCmd),
    /// Run an identity suite and report pass/fail.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand)]
enum ComputeCmd {
    /// The master partition function Ω (or one component H_{d₁,d₂} of its
    /// logarithm when --d1/--d2 are given).
    Omega(OmegaArgs),
    /// The Verlinde series I^V of a toric surface with a bundle datum.
    Verlinde(SurfaceArgs),
    /// The two-variable Hilbert-scheme series I_{S,α}(w,z).
    Hilbk(SurfaceArgs),
    /// The universal-series logarithms log G₀…log G₄ (or A/B families).
    GSeries(GSeriesArgs),
    /// The B₄ series by the requested pipelines, side by side.
    B4(B4Args),
}

#[derive(Args)]
struct OmegaArgs {
    /// Number of numerator arguments z₁…z_k.
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 3)]
    worder: u32,
    #[arg(long, default_value_t = 3)]
    zorder: u32,
    /// Extract H_{d₁,d₂} instead of Ω itself (both indices required).
    #[arg(long, requires = "d2", allow_hyphen_values = true)]
    d1: Option<i64>,
    #[arg(long, requires = "d1", allow_hyphen_values = true)]
    d2: Option<i64>,
}

#[derive(Args)]
struct SurfaceArgs {
    /// Built-in surface name (p2, p1xp1, f0…f3, bl1p2, bl2p2, bl3p2).
    #[arg(long, default_value = "p2")]
    surface: String,
    /// Bundle datum: terms like `O`, `O^3`, `O(1,0,0)` joined by + or -.
    #[arg(long, default_value = "O")]
    bundle: String,
    #[arg(long, default_value_t = 5)]
    worder: u32,
    /// z-truncation (hilbk only).
    #[arg(long, default_value_t = 5)]
    zorder: u32,
}

#[derive(Args)]
struct GSeriesArgs {
    #[arg(long, default_value_t = 3)]
    k: i64,
    #[arg(long, default_value_t = 3)]
    worder: u32,
    #[arg(long, default_value_t = 6)]
    zorder: u32,
    /// Which invariant feeds the extraction.
    #[arg(long, value_enum, default_value_t = FlavorArg::Full)]
    flavor: FlavorArg,
    /// `extraction` fits localization data; `closed` evaluates the closed
    /// forms of G₀…G₃ through the (u,v) substitution.
    #[arg(long, value_enum, default_value_t = GMethod::Extraction)]
    method: GMethod,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    Full,
    Chern,
    Verlinde,
}

#[derive(Clone, Copy, ValueEnum)]
enum GMethod {
    Extraction,
    Closed,
}

#[derive(Args)]
struct B4Args {
    #[arg(long, default_value_t = 2)]
    r: i64,
    #[arg(long, default_value_t = 10)]
    order: u32,
    /// Pipelines to evaluate (repeatable).
    #[arg(long, value_enum, num_args = 1.., default_values_t = vec![B4Method::Binomial])]
    method: Vec<B4Method>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum B4Method {
    Binomial,
    Conjecture,
    Localization,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Cauchy, Garsia–Tesler and Koornwinder identities.
    Macdonald {
        /// Cauchy kernel degree.
        #[arg(long, default_value_t = 3)]
        n: u32,
        /// Partition weight bound for the duality checks.
        #[arg(long, default_value_t = 3)]
        weight: u32,
    },
    /// Functional equation of Ω and palindromicity of Ω̃.
    OmegaIdentity {
        #[arg(long, default_value_t = 2)]
        kmax: usize,
        #[arg(long, default_value_t = 3)]
        worder: u32,
        #[arg(long, default_value_t = 3)]
        zorder: u32,
    },
    /// Palindromic symmetry of the H̃_{d₁,d₂} components.
    Symmetry {
        #[arg(long, default_value_t = 2)]
        kmax: usize,
        #[arg(long, default_value_t = 4)]
        worder: u32,
        #[arg(long, default_value_t = 2)]
        zorder: u32,
    },
    /// Extraction of G₀…G₄ against the closed forms of G₀…G₃.
    MainTheorem {
        #[arg(long, default_value_t = 3)]
        k: i64,
        #[arg(long, default_value_t = 3)]
        worder: u32,
        #[arg(long, default_value_t = 6)]
        zorder: u32,
    },
    /// Chern and Verlinde limits meeting in one h(y).
    SegreVerlinde {
        #[arg(long, default_value_t = 3)]
        k: i64,
        #[arg(long, default_value_t = 3)]
        order: u32,
    },
    /// B₄: binomial formula vs branch-product formula (vs localization).
    Bconj {
        #[arg(long, default_value_t = 3)]
        r: i64,
        #[arg(long, default_value_t = 6)]
        order: u32,
        /// Also compare against the localization extraction at this order.
        #[arg(long)]
        loc_order: Option<u32>,
    },
    /// The whole suite at desk scale.
    All {
        /// Reduced truncation orders (the CI budget).
        #[arg(long)]
        quick: bool,
    },
}

/// One run, serialized exactly once; field order is fixed, maps are sorted,
/// so fixed inputs yield byte-identical output.
#[derive(Serialize)]
struct RunManifest {
    command: String,
    parameters: Value,
    #[serde(rename = "engineVersion")]
    engine_version: &'static str,
    results: Value,
    pass: Option<bool>,
}

fn manifest(command: &str, parameters: Value, results: Value, pass: Option<bool>) -> RunManifest {
    RunManifest {
        command: command.to_string(),
        parameters,
        engine_version: env!("CARGO_PKG_VERSION"),
        results,
        pass,
    }
}

// --- bundle parsing -------------------------------------------------------------

/// Parse `O`, `O^3` or `O(d₁,…)` terms joined by `+`/`-` into a K-theory class.
fn parse_bundle(surface: &ToricSurfaceModel, spec: &str) -> Result<EquivariantBundle, String> {
    let bad = |body: &str| format!("unrecognized bundle term `{body}`");
    let mut pos = EquivariantBundle::trivial(surface, 0);
    let mut neg = EquivariantBundle::trivial(surface, 0);
    let mut rest = spec.trim();
    let mut leading_minus = false;
    while !rest.is_empty() {
        let end = rest[1..].find(['+', '-']).map(|i| i + 1).unwrap_or(rest.len());
        let (term, tail) = rest.split_at(end);
        let term = term.trim();
        let (negated, body) = match term.strip_prefix('-') {
            Some(b) => (!leading_minus, b.trim()),
            None => (leading_minus, term.strip_prefix('+').unwrap_or(term).trim()),
        };
        let bundle = if let Some(r) = body.strip_prefix("O^") {
            let r: usize = r.parse().map_err(|_| bad(body))?;
            EquivariantBundle::trivial(surface, r)
        } else if let Some(ds) = body.strip_prefix("O(").and_then(|s| s.strip_suffix(')')) {
            let divisor: Vec<i64> = ds
                .split(',')
                .map(|d| d.trim().parse().map_err(|_| bad(body)))
                .collect::<Result<_, _>>()?;
            equivariant_line_bundle(surface, &divisor).map_err(|e| e.to_string())?
        } else if body == "O" {
            EquivariantBundle::trivial(surface, 1)
        } else {
            return Err(bad(body));
        };
        if negated {
            neg = neg.direct_sum(&bundle);
        } else {
            pos = pos.direct_sum(&bundle);
        }
        leading_minus = false;
        rest = tail;
    }
    Ok(k_theory_class(&pos, &neg))
}

// --- rendering ------------------------------------------------------------------

fn print_output(m: &RunManifest, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string(m).expect("serializable")),
        Format::Table => print!("{}", render_table(m)),
    }
}

/// Plain-text rendering: one aligned `monomial  fraction` line per term for
/// series, one `identity  status` line per report.
fn render_table(m: &RunManifest) -> String {
    let mut out = format!("# {} (engine {})\n", m.command, m.engine_version);
    render_value(&m.results, "", &mut out);
    if let Some(p) = m.pass {
        out.push_str(if p { "PASS\n" } else { "FAIL\n" });
    }
    out
}

fn render_value(v: &Value, indent: &str, out: &mut String) {
    match v {
        Value::Object(map) if map.contains_key("terms") => {
            let vars: Vec<String> = map["vars"]
                .as_array()
                .map(|a| a.iter().map(|x| x.as_str().unwrap_or("?").to_string()).collect())
                .unwrap_or_default();
            let rows: Vec<(String, String)> = map["terms"]
                .as_array()
                .map(|terms| {
                    terms
                        .iter()
                        .map(|t| {
                            let exp: Vec<u32> = t["exp"]
                                .as_array()
                                .map(|a| {
                                    a.iter().map(|x| x.as_u64().unwrap_or(0) as u32).collect()
                                })
                                .unwrap_or_default();
                            let num = t["num"].as_str().unwrap_or("?");
                            let den = t["den"].as_str().unwrap_or("1");
                            let frac = if den == "1" {
                                num.to_string()
                            } else {
                                format!("{num}/{den}")
                            };
                            (render_exp(&vars, &exp), frac)
                        })
                        .collect()
                })
                .unwrap_or_default();
            let width = rows.iter().map(|(m, _)| m.len()).max().unwrap_or(0);
            for (mono, frac) in rows {
                out.push_str(&format!("{indent}{mono:width$}  {frac}\n"));
            }
        }
        Value::Object(map) if map.contains_key("identity") => {
            let pass = map["pass"].as_bool().unwrap_or(false);
            out.push_str(&format!(
                "{indent}{}  {}\n",
                map["identity"].as_str().unwrap_or("?"),
                if pass { "pass" } else { "FAIL" }
            ));
            if let Some(d) = map.get("firstDiscrepancy").and_then(|d| d.as_str()) {
                out.push_str(&format!("{indent}  ! {d}\n"));
            }
        }
        Value::Array(items) => {
            for item in items {
                render_value(item, indent, out);
            }
        }
        Value::Object(map) => {
            for (key, item) in map {
                out.push_str(&format!("{indent}{key}:\n"));
                render_value(item, &format!("{indent}  "), out);
            }
        }
        other => out.push_str(&format!("{indent}{other}\n")),
    }
}

// --- command execution ----------------------------------------------------------

fn series_value(s: &TruncatedSeries<crate::ring::QQ>) -> Value {
    series_to_json(s)
}

fn compute(cmd: &ComputeCmd) -> Result<RunManifest, String> {
    match cmd {
        ComputeCmd::Omega(a) => {
            let params = json!({
                "k": a.k, "wOrder": a.worder, "zOrder": a.zorder, "d1": a.d1, "d2": a.d2
            });
            let results = match (a.d1, a.d2) {
                (Some(d1), Some(d2)) => {
                    let h = extract_h(d1, d2, a.k, a.worder, a.zorder)
                        .map_err(|e| e.to_string())?;
                    json!({ "h": series_value(&h.series) })
                }
                _ => {
                    let om = omega_master(&OmegaSpec::new(a.k, a.worder, a.zorder));
                    json!({ "omega": series_to_json(&om) })
                }
            };
            Ok(manifest("compute omega", params, results, None))
        }
        ComputeCmd::Verlinde(a) => {
            let params = json!({ "surface": a.surface, "bundle": a.bundle, "wOrder": a.worder });
            let surface = builtin_surface(&a.surface).map_err(|e| e.to_string())?;
            let alpha = parse_bundle(&surface, &a.bundle).map_err(|e| e.to_string())?;
            let s = verlinde_series(&surface, &alpha, a.worder).map_err(|e| e.to_string())?;
            let coeffs: Vec<String> =
                (0..=a.worder).map(|n| qq_string(&s.coeff(&[n]))).collect();
            Ok(manifest(
                "compute verlinde",
                params,
                json!({ "series": series_value(&s), "coefficients": coeffs }),
                None,
            ))
        }
        ComputeCmd::Hilbk(a) => {
            let params = json!({
                "surface": a.surface, "bundle": a.bundle,
                "wOrder": a.worder, "zOrder": a.zorder
            });
            let surface = builtin_surface(&a.surface).map_err(|e| e.to_string())?;
            let alpha = parse_bundle(&surface, &a.bundle).map_err(|e| e.to_string())?;
            let s = hilb_k(&surface, &alpha, a.worder, a.zorder).map_err(|e| e.to_string())?;
            Ok(manifest("compute hilbk", params, json!({ "series": series_value(&s) }), None))
        }
        ComputeCmd::GSeries(a) => {
            let flavor = match a.flavor {
                FlavorArg::Full => Flavor::Full,
                FlavorArg::Chern => Flavor::Chern,
                FlavorArg::Verlinde => Flavor::Verlinde,
            };
            let params = json!({
                "k": a.k, "wOrder": a.worder, "zOrder": a.zorder,
                "flavor": match a.flavor {
                    FlavorArg::Full => "full",
                    FlavorArg::Chern => "chern",
                    FlavorArg::Verlinde => "verlinde",
                },
                "method": match a.method { GMethod::Extraction => "extraction", GMethod::Closed => "closed" },
            });
            let logs: Vec<Value> = match a.method {
                GMethod::Extraction => {
                    let bundle = extract_universal(flavor, a.k, a.worder, a.zorder)
                        .map_err(|e| e.to_string())?;
                    bundle.log_g.iter().map(series_value).collect()
                }
                GMethod::Closed => (0..=3usize)
                    .map(|i| {
                        closed_form_g(i, a.k, a.worder, a.zorder)
                            .and_then(|g| Ok(g.log()?))
                            .map(|l| series_value(&l))
                            .map_err(|e| e.to_string())
                    })
                    .collect::<Result<_, _>>()?,
            };
            Ok(manifest("compute g-series", params, json!({ "log": logs }), None))
        }
        ComputeCmd::B4(a) => {
            let params = json!({
                "r": a.r, "order": a.order,
                "method": a.method.iter().map(|m| match m {
                    B4Method::Binomial => "binomial",
                    B4Method::Conjecture => "conjecture",
                    B4Method::Localization => "localization",
                }).collect::<Vec<_>>(),
            });
            let mut results = serde_json::Map::new();
            let run = |m: &B4Method| -> Result<Value, ClosedformError> {
                Ok(match m {
                    B4Method::Binomial => series_value(&b4_binomial(a.r, a.order)?),
                    B4Method::Conjecture => series_value(&b4_conjecture(a.r, a.order)?),
                    B4Method::Localization => {
                        let (_, b4) = b34_localization(a.r, a.order)?;
                        series_value(&b4)
                    }
                })
            };
            for m in &a.method {
                let key = match m {
                    B4Method::Binomial => "binomial",
                    B4Method::Conjecture => "conjecture",
                    B4Method::Localization => "localization",
                };
                results.insert(key.to_string(), run(m).map_err(|e| e.to_string())?);
            }
            Ok(manifest("compute b4", params, Value::Object(results), None))
        }
    }
}

fn verify(cmd: &VerifyCmd) -> Result<RunManifest, String> {
    let (name, params, reports) = match cmd {
        VerifyCmd::Macdonald { n, weight } => {
            let mut reports = vec![verify_cauchy(*n)];
            let mus: Vec<Partition> = (0..=*weight)
                .flat_map(crate::partition::enumerate_partitions)
                .collect();
            for mu in &mus {
                reports.push(verify_garsia_tesler(mu, *weight));
            }
            for mu in &mus {
                for nu in &mus {
                    reports.push(verify_koornwinder(mu, nu));
                }
            }
            ("verify macdonald", json!({ "n": n, "weight": weight }), reports)
        }
        VerifyCmd::OmegaIdentity { kmax, worder, zorder } => {
            let mut reports = Vec::new();
            for k in 0..=*kmax {
                reports.push(verify_functional_equation(k, *worder, *zorder));
                reports.push(verify_palindromic(k, *worder, *zorder));
            }
            (
                "verify omega-identity",
                json!({ "kMax": kmax, "wOrder": worder, "zOrder": zorder }),
                reports,
            )
        }
        VerifyCmd::Symmetry { kmax, worder, zorder } => {
            let mut reports = Vec::new();
            for k in 1..=*kmax {
                for (d1, d2) in [(-1, -1), (-1, 0), (0, -1), (-1, 1), (1, -1), (0, 0)] {
                    reports.push(verify_symmetry_theorem(d1, d2, k, *worder, *zorder));
                }
            }
            (
                "verify symmetry",
                json!({ "kMax": kmax, "wOrder": worder, "zOrder": zorder }),
                reports,
            )
        }
        VerifyCmd::MainTheorem { k, worder, zorder } => (
            "verify main-theorem",
            json!({ "k": k, "wOrder": worder, "zOrder": zorder }),
            vec![verify_main_theorem(*k, *worder, *zorder)],
        ),
        VerifyCmd::SegreVerlinde { k, order } => (
            "verify segre-verlinde",
            json!({ "k": k, "order": order }),
            vec![verify_segre_verlinde(*k, *order)],
        ),
        VerifyCmd::Bconj { r, order, loc_order } => (
            "verify bconj",
            json!({ "r": r, "order": order, "locOrder": loc_order }),
            vec![verify_bconj(*r, *order, *loc_order)],
        ),
        VerifyCmd::All { quick } => {
            let reports = if *quick { quick_suite() } else { full_suite() };
            ("verify all", json!({ "quick": quick }), reports)
        }
    };
    let pass = reports.iter().all(|r| r.pass);
    let results = serde_json::to_value(&reports).expect("serializable");
    Ok(manifest(name, params, results, Some(pass)))
}

/// The reduced-order suite: every identity family at the smallest orders that
/// still exercise the machinery.
fn quick_suite() -> Vec<CheckReport> {
    let mut reports = vec![verify_cauchy(2)];
    for mu in crate::partition::partitions_up_to(2) {
        reports.push(verify_garsia_tesler(&mu, 2));
        reports.push(verify_koornwinder(&mu, &Partition::new(vec![1])));
    }
    for k in 0..=2 {
        reports.push(verify_functional_equation(k, 2, 2));
        reports.push(verify_palindromic(k, 2, 2));
    }
    for (d1, d2) in [(-1, 0), (0, 0)] {
        reports.push(verify_symmetry_theorem(d1, d2, 1, 3, 2));
    }
    let loc = || -> Result<CheckReport, ToricError> {
        let p2 = builtin_surface("p2")?;
        Ok(verify_vanishing(&p2, &EquivariantBundle::trivial(&p2, 1)))
    };
    reports.push(loc().unwrap_or_else(|e| {
        CheckReport::fail("localization-vanishing", json!({}), e.to_string())
    }));
    reports.push(verify_differential_identities(3, 3, 4));
    reports.push(verify_main_theorem(3, 3, 6));
    reports.push(verify_segre_verlinde(3, 2));
    reports.push(verify_known_series(2, 3));
    reports.push(verify_bconj(2, 8, None));
    reports.push(verify_bconj(3, 6, None));
    reports
}

/// The full desk-scale suite (the acceptance orders).
fn full_suite() -> Vec<CheckReport> {
    let mut reports = vec![verify_cauchy(4)];
    let mus = crate::partition::partitions_up_to(3);
    for mu in &mus {
        reports.push(verify_garsia_tesler(mu, 3));
        for nu in &mus {
            reports.push(verify_koornwinder(mu, nu));
        }
    }
    for k in 0..=2 {
        reports.push(verify_functional_equation(k, 3, 3));
        reports.push(verify_palindromic(k, 3, 3));
    }
    for k in 1..=3 {
        for (d1, d2) in [(-1, -1), (-1, 0), (0, -1), (-1, 1), (1, -1), (0, 0)] {
            reports.push(verify_symmetry_theorem(d1, d2, k, 4, 2));
        }
    }
    for k in [3, 4] {
        reports.push(verify_main_theorem(k, 4, 8));
        reports.push(verify_segre_verlinde(k, 4));
    }
    for r in [2, 3] {
        reports.push(verify_known_series(r, 4));
    }
    reports.push(verify_bconj(2, 12, Some(6)));
    reports.push(verify_bconj(3, 12, Some(5)));
    reports.push(verify_bconj(4, 12, None));
    reports
}

/// Parse argv and run; returns the process exit code (0 pass, 1 verification
/// failure, 2 usage error).
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(jobs) = cli.jobs {
        // Best effort: the global pool can only be sized once per process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let started = std::time::Instant::now();
    let outcome = match &cli.command {
        Command::Compute(c) => compute(c),
        Command::Verify(v) => verify(v),
    };
    match outcome {
        Ok(m) => {
            print_output(&m, cli.format);
            eprintln!("# elapsed: {:?}", started.elapsed());
            match m.pass {
                Some(false) => 1,
                _ => 0,
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            1
        }
    }
}
