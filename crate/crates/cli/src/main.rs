use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use amlab::ascover::analyze;
use amlab::curve::{random_non_automorphisms, short_orbits, verify_invariance, verify_substitution, AMCurve, Subgroup};
use amlab::gf::{is_prime, make_field};
use amlab::grp::{verify_presentation, AmGroup, CheckStatus};
use amlab::pipeline::{quotient_checks, run_all, CheckResult, RunOptions, Status, TheoremReport};
use amlab::poly::parse_rational;
use amlab::zeta::{count_points, zeta_of_cover, zeta_of_curve, ZetaError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const SCHEMA: &str = "amlab/1";

/// Exact checks on the Artin-Mumford curve (x^p - x)(y^p - y) = c.
#[derive(Parser, Debug)]
#[command(name = "amlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Odd prime characteristic.
    #[arg(long, global = true, default_value_t = 3)]
    p: u64,
    /// Extension degree.
    #[arg(long, global = true, default_value_t = 1)]
    k: u32,
    /// Curve constant c in (x^p - x)(y^p - y) = c.
    #[arg(long, global = true, default_value_t = 1, allow_negative_numbers = true)]
    c: i64,
    /// Coefficient a in y^p - y = a x + 1/x.
    #[arg(long, global = true, default_value_t = 1, allow_negative_numbers = true)]
    a: i64,
    /// Constant b in z^p - z = b + 1/x.
    #[arg(long, global = true, default_value_t = 0, allow_negative_numbers = true)]
    b: i64,
    /// Right-hand side f(x) of y^p - y = f(x), e.g. "2x + 1/x".
    #[arg(long, global = true)]
    cover: Option<String>,
    /// Cap on field-element iterations for exhaustive work.
    #[arg(long, global = true, default_value_t = amlab::DEFAULT_BUDGET)]
    budget: u64,
    /// Write the JSON report here ("-" for stdout).
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Write a CSV summary here.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Group presentation, invariance of the curve under H, and rejection
    /// of random non-automorphisms.
    AutCheck,
    /// Orbits of a subgroup on branch places and affine points over F_{p^k}.
    Orbits {
        #[arg(long, value_enum, default_value_t = GroupChoice::Translations)]
        group: GroupChoice,
    },
    /// Point counts N_1..N_k.
    Count,
    /// L-polynomial from point counts.
    Zeta,
    /// Genus and p-rank of y^p - y = f(x) for --cover f.
    Genus,
    /// Quotient and fibered-model checks.
    Quotients,
    /// Every check.
    VerifyTheorem,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum GroupChoice {
    /// C_p x C_p.
    Translations,
    /// <tau_{1,1}>.
    Diagonal,
    /// All of H.
    Full,
}

/// Outcome of a subcommand: a JSON report, CSV rows, a text summary, and
/// the exit status.
struct Outcome {
    report: Value,
    csv: Vec<Vec<String>>,
    text: String,
    status: Exit,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Exit {
    Pass = 0,
    Fail = 1,
    Usage = 2,
    Budget = 3,
}

fn usage(msg: impl std::fmt::Display) -> Outcome {
    Outcome {
        report: json!({ "error": msg.to_string() }),
        csv: Vec::new(),
        text: format!("error: {msg}\nRun with --help for usage."),
        status: Exit::Usage,
    }
}

fn validate(c: &Common) -> Result<(), String> {
    if c.p == 2 || !is_prime(c.p) {
        return Err(format!("--p {} is not an odd prime", c.p));
    }
    if c.k == 0 {
        return Err("--k must be at least 1".into());
    }
    if c.budget == 0 {
        return Err("--budget must be positive".into());
    }
    if (c.c as i128).rem_euclid(c.p as i128) == 0 {
        return Err("--c must be nonzero mod p".into());
    }
    if (c.a as i128).rem_euclid(c.p as i128) == 0 {
        return Err("--a must be nonzero mod p".into());
    }
    Ok(())
}

fn opts(c: &Common) -> RunOptions {
    RunOptions {
        c: c.c,
        a: c.a,
        b: c.b,
        budget: c.budget,
        seed: c.seed,
    }
}

fn check_rows(checks: &[CheckResult]) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["check".into(), "status".into(), "coverage".into()]];
    for c in checks {
        let status = serde_json::to_value(c.status).unwrap();
        let cov = serde_json::to_value(&c.coverage).unwrap();
        rows.push(vec![
            c.name.clone(),
            status.as_str().unwrap_or_default().to_string(),
            cov["kind"].as_str().unwrap_or_default().to_string(),
        ]);
    }
    rows
}

fn aut_check(c: &Common) -> Outcome {
    let pres = match verify_presentation(c.p) {
        Ok(r) => r,
        Err(e) => return usage(e),
    };
    let curve = AMCurve::new(c.p, c.c).expect("validated");
    let h = AmGroup::new(c.p).expect("validated");
    let cost = (c.p + 1).pow(4);
    let order = h.order();
    let (elems, mode): (Vec<_>, String) = if order.saturating_mul(cost) <= c.budget {
        (h.elements().collect(), "exhaustive".into())
    } else {
        let n = (c.budget / cost).clamp(16, order);
        let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
        ((0..n).map(|_| h.random(&mut rng)).collect(), format!("sampled {n} of {order}, seed {}", c.seed))
    };
    let invariant = elems.iter().filter(|g| verify_invariance(g, &curve)).count();
    let corpus = random_non_automorphisms(c.p, 100, c.seed).expect("validated");
    let rejected = corpus.iter().filter(|(gx, gy)| !verify_substitution(&curve, gx, gy)).count();
    let ok = pres.passed() && invariant == elems.len() && rejected == corpus.len();
    let mut text = format!("H over F_{}: order {}\n", c.p, pres.group_order);
    for chk in &pres.checks {
        let s = if chk.status == CheckStatus::Pass { "pass" } else { "FAIL" };
        text.push_str(&format!("  {s:<4}  {}\n", chk.identity));
    }
    text.push_str(&format!(
        "invariance: {invariant}/{} elements preserve the curve ({mode})\n",
        elems.len()
    ));
    text.push_str(&format!("non-automorphisms rejected: {rejected}/{}\n", corpus.len()));
    let mut csv = vec![vec!["identity".into(), "status".into()]];
    for chk in &pres.checks {
        csv.push(vec![chk.identity.clone(), format!("{:?}", chk.status).to_lowercase()]);
    }
    Outcome {
        report: json!({
            "presentation": pres,
            "invariance": { "checked": elems.len(), "invariant": invariant, "mode": mode },
            "non_automorphisms": { "tested": corpus.len(), "rejected": rejected },
            "passed": ok,
        }),
        csv,
        text,
        status: if ok { Exit::Pass } else { Exit::Fail },
    }
}

fn orbits(c: &Common, group: GroupChoice) -> Outcome {
    let curve = AMCurve::new(c.p, c.c).expect("validated");
    let h = AmGroup::new(c.p).expect("validated");
    let s = match group {
        GroupChoice::Translations => Subgroup::translations(&h),
        GroupChoice::Diagonal => Subgroup::cyclic(h.tau(1, 1)),
        GroupChoice::Full => Subgroup::whole(&h),
    };
    match short_orbits(&curve, &s, Some(c.k), c.budget) {
        Ok(rep) => {
            let mut text = format!(
                "{} (order {}) on {} points over F_{}^{}\n",
                rep.group, rep.group_order, rep.points_enumerated, c.p, c.k
            );
            text.push_str(&format!("orbit sizes: {:?}\n", rep.orbit_sizes));
            for o in &rep.short_orbits {
                text.push_str(&format!("short orbit of size {}: stabilizer {}\n", o.size, o.stabilizer_description));
            }
            let mut csv = vec![vec!["orbit_size".into(), "count".into()]];
            let mut sizes = rep.orbit_sizes.clone();
            sizes.dedup();
            for sz in sizes {
                let n = rep.orbit_sizes.iter().filter(|&&x| x == sz).count();
                csv.push(vec![sz.to_string(), n.to_string()]);
            }
            let ok = rep.orbit_stabilizer_ok;
            Outcome {
                report: serde_json::to_value(&rep).unwrap(),
                csv,
                text,
                status: if ok { Exit::Pass } else { Exit::Fail },
            }
        }
        Err(amlab::curve::CurveError::Budget { needed, budget }) => budget_exceeded(json!(null), needed, budget),
        Err(e) => usage(e),
    }
}

fn budget_exceeded(partial: Value, needed: u64, budget: u64) -> Outcome {
    Outcome {
        report: json!({ "partial": partial, "budget_exceeded": { "needed": needed, "budget": budget } }),
        csv: Vec::new(),
        text: format!("budget exceeded: needs {needed} field iterations, budget is {budget}"),
        status: Exit::Budget,
    }
}

fn count(c: &Common) -> Outcome {
    let curve = AMCurve::new(c.p, c.c).expect("validated");
    let mut counts = Vec::new();
    for k in 1..=c.k {
        match count_points(&curve, k, c.budget) {
            Ok(n) => counts.push((k, n)),
            Err(ZetaError::Budget { needed, budget }) => {
                let partial = json!({ "counts": counts_json(c.p, &counts) });
                let mut o = budget_exceeded(partial, needed, budget);
                o.text = format!("{}{}", counts_text(c.p, &counts), o.text);
                return o;
            }
            Err(e) => return usage(e),
        }
    }
    let mut csv = vec![vec!["k".into(), "count".into()]];
    csv.extend(counts.iter().map(|(k, n)| vec![k.to_string(), n.to_string()]));
    Outcome {
        report: json!({ "p": c.p, "c": curve.c(), "counts": counts_json(c.p, &counts) }),
        csv,
        text: counts_text(c.p, &counts),
        status: Exit::Pass,
    }
}

fn counts_json(p: u64, counts: &[(u32, u64)]) -> Value {
    Value::Array(
        counts
            .iter()
            .map(|(k, n)| json!({ "k": k, "q": p.pow(*k), "points": n }))
            .collect(),
    )
}

fn counts_text(p: u64, counts: &[(u32, u64)]) -> String {
    counts
        .iter()
        .map(|(k, n)| format!("N_{k} = #M(F_{}) = {n}\n", p.pow(*k)))
        .collect()
}

fn zeta(c: &Common) -> Outcome {
    let result = match &c.cover {
        Some(expr) => {
            let f = match make_field(c.p, 1).map_err(|e| e.to_string()).and_then(|fld| {
                parse_rational(expr, &fld, 'x').map_err(|e| e.to_string())
            }) {
                Ok(f) => f,
                Err(e) => return usage(e),
            };
            let rep = match analyze(&f) {
                Ok(r) => r,
                Err(e) => return fail_with(e),
            };
            let reduced = amlab::ascover::reduce_standard_form(&f).expect("analyzed").reduced;
            zeta_of_cover(&reduced, rep.genus.value as u64, c.budget)
        }
        None => {
            let curve = AMCurve::new(c.p, c.c).expect("validated");
            zeta_of_curve(&curve, (c.p - 1) * (c.p - 1), c.budget)
        }
    };
    match result {
        Ok(z) => {
            let ok = z.functional_equation && z.genus_from_zeta == Some(z.genus);
            let l: Vec<String> = z.l_coefficients.iter().map(|b| b.to_string()).collect();
            let text = format!(
                "counts: {:?}\nL coefficients: [{}]\ngenus from zeta: {}\np-rank from zeta: {}\n",
                z.counts,
                l.join(", "),
                z.genus_from_zeta.map_or("unconfirmed".to_string(), |g| g.to_string()),
                z.p_rank_from_zeta
            );
            let mut csv = vec![vec!["i".into(), "b_i".into()]];
            csv.extend(l.iter().enumerate().map(|(i, b)| vec![i.to_string(), b.clone()]));
            Outcome {
                report: serde_json::to_value(&z).unwrap(),
                csv,
                text,
                status: if ok { Exit::Pass } else { Exit::Fail },
            }
        }
        Err(ZetaError::Budget { needed, budget }) => budget_exceeded(json!(null), needed, budget),
        Err(e) => fail_with(e),
    }
}

fn fail_with(e: impl std::fmt::Display) -> Outcome {
    Outcome {
        report: json!({ "error": e.to_string() }),
        csv: Vec::new(),
        text: format!("error: {e}"),
        status: Exit::Fail,
    }
}

fn genus(c: &Common) -> Outcome {
    let Some(expr) = &c.cover else {
        return usage("genus requires --cover <expr>");
    };
    let field = match make_field(c.p, c.k) {
        Ok(f) => f,
        Err(e) => return usage(e),
    };
    let f = match parse_rational(expr, &field, 'x') {
        Ok(f) => f,
        Err(e) => return usage(format!("cannot parse --cover: {e}")),
    };
    match analyze(&f) {
        Ok(rep) => {
            let gamma = rep.p_rank.map_or(-1, |t| t.value);
            let text = format!(
                "y^{} - y = {}\nreduced: {}\ngenus {} (rh), p-rank {} (ds){}\n",
                c.p,
                f.render("x"),
                rep.reduced.clone().unwrap_or_default(),
                rep.genus.value,
                gamma,
                if rep.is_ordinary() { ", ordinary" } else { "" }
            );
            let csv = vec![
                vec!["quantity".into(), "value".into(), "formula".into()],
                vec!["genus".into(), rep.genus.value.to_string(), rep.genus.formula.into()],
                vec!["p_rank".into(), gamma.to_string(), "ds".into()],
            ];
            let ok = rep.rank_within_genus();
            Outcome {
                report: serde_json::to_value(&rep).unwrap(),
                csv,
                text,
                status: if ok { Exit::Pass } else { Exit::Fail },
            }
        }
        Err(e) => fail_with(e),
    }
}

fn checks_outcome(checks: Vec<CheckResult>, c: &Common) -> Outcome {
    let report = TheoremReport::from_checks(c.p, opts(c), checks);
    let status = if report.passed { Exit::Pass } else { Exit::Fail };
    Outcome {
        csv: check_rows(&report.checks),
        text: report.render_table(),
        report: serde_json::to_value(&report).unwrap(),
        status,
    }
}

fn dispatch(cmd: Command, c: &Common) -> Outcome {
    if let Err(e) = validate(c) {
        return usage(e);
    }
    match cmd {
        Command::AutCheck => aut_check(c),
        Command::Orbits { group } => orbits(c, group),
        Command::Count => count(c),
        Command::Zeta => zeta(c),
        Command::Genus => genus(c),
        Command::Quotients => checks_outcome(quotient_checks(c.p, &opts(c)), c),
        Command::VerifyTheorem => {
            let r = run_all(c.p, &opts(c));
            let skipped = r.checks.iter().any(|k| k.status == Status::Skipped);
            let mut o = checks_outcome(r.checks, c);
            if skipped {
                o.text.push_str("some checks were skipped by budget; they are not counted as passed\n");
            }
            o
        }
    }
}

fn command_name(cmd: Command) -> &'static str {
    match cmd {
        Command::AutCheck => "aut-check",
        Command::Orbits { .. } => "orbits",
        Command::Count => "count",
        Command::Zeta => "zeta",
        Command::Genus => "genus",
        Command::Quotients => "quotients",
        Command::VerifyTheorem => "verify-theorem",
    }
}

fn write_outputs(cli: &Cli, o: &Outcome) -> io::Result<()> {
    let c = &cli.common;
    if let Some(path) = &c.json {
        let doc = json!({
            "schema": SCHEMA,
            "command": command_name(cli.command),
            "exit_status": o.status as u8,
            "report": o.report,
        });
        let mut s = serde_json::to_string_pretty(&doc)?;
        s.push('\n');
        if path.as_os_str() == "-" {
            io::stdout().write_all(s.as_bytes())?;
        } else {
            fs::write(path, s)?;
        }
    }
    if let Some(path) = &c.csv {
        let mut w = csv::Writer::from_path(path)?;
        for row in &o.csv {
            w.write_record(row)?;
        }
        w.flush()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = dispatch(cli.command, &cli.common);
    let to_stdout = cli.common.json.as_ref().is_some_and(|p| p.as_os_str() == "-");
    if !to_stdout {
        if outcome.status == Exit::Usage {
            eprintln!("{}", outcome.text);
        } else {
            print!("{}", outcome.text);
            if !outcome.text.ends_with('\n') {
                println!();
            }
        }
    }
    if let Err(e) = write_outputs(&cli, &outcome) {
        eprintln!("error writing report: {e}");
        return ExitCode::from(Exit::Usage as u8);
    }
    ExitCode::from(outcome.status as u8)
}
