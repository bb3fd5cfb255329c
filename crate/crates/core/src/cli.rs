//! Command-line front end.
//!
//! [`dispatch`] parses an argument vector and returns the exit code and the
//! rendered output; `main` only prints it. Exit codes: 0 success, 1 invalid
//! input or usage, 2 a cap was exceeded, 3 a fixture mismatch.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Map, Value};
use std::path::PathBuf;

use crate::arith::{FactoredNat, Rational};
use crate::bounds::{
    check_h_bound, check_phi_bounds, g_modulus, g_order_bound, h_exact, h_gcd_oracle, phi_cap,
    psi_cap, rosser_schoenfeld_check, rosser_sweep, RosserForm, Verdict,
};
use crate::constants::{
    bound_cyclotomic, bound_good_reduction, bound_kummer, bound_kummer_good, bound_lubin_tate,
    bound_number_field, bound_ordinary, c_const, lg, BoundReport, LubinTateInput, PAdicInvariants,
    TorsionCap, DEFAULT_NUMBER_FIELD_PRIME_CAP,
};
use crate::group_orders::{Family, GroupSpec};
use crate::tables::{self, TableId};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_CAP: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "cm-torsion",
    about = "Explicit torsion bounds for CM abelian varieties and the arithmetic behind them"
)]
struct Cli {
    /// Emit a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Φ(n) = max { m : φ(m) | 2n }.
    Phi { n: u64 },
    /// Ψ(n) = max { m : φ(m) <= 2n }.
    Psi { n: u64 },
    /// H(n), optionally cross-checked against the gcd of #GSp_2n(Z/NZ), 3 <= N <= nmax.
    Hn {
        n: u64,
        #[arg(long, value_name = "NMAX")]
        oracle: Option<u64>,
    },
    /// G(n) = #GL_2n(Z/3Z), or #GL_2n(Z/4Z) with --p3.
    Gn {
        n: u32,
        #[arg(long)]
        p3: bool,
    },
    /// Order of GL_n(Z/NZ) or GSp_2n(Z/NZ).
    Order {
        family: FamilyArg,
        #[arg(long)]
        n: u32,
        #[arg(long = "mod")]
        modulus: u64,
        /// Also count the group by enumeration.
        #[arg(long)]
        brute: bool,
    },
    /// L_g(m) = ⌊log_p (1 + p^(m/2))^(2g)⌋.
    Lg {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: BigUint,
    },
    /// C(d, M, h) for a p-adic field M of degree dm and ramification em.
    Cconst {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        dm: u64,
        #[arg(long)]
        em: u64,
        #[arg(long)]
        h: u64,
        #[arg(long)]
        p: u64,
    },
    /// Torsion bounds.
    Bound {
        #[command(subcommand)]
        kind: BoundCommand,
    },
    /// Sweep an inequality over a range `lo..hi` (inclusive) or a single value.
    Check {
        kind: CheckKind,
        range: String,
        /// Constant of the Rosser-Schoenfeld correction term.
        #[arg(long, value_enum, default_value = "three")]
        form: FormArg,
    },
    /// Reference tables.
    Tables {
        #[command(subcommand)]
        action: TablesCommand,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Gl,
    Gsp,
    Sp,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CheckKind {
    PhiBounds,
    HBound,
    Rosser,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormArg {
    /// 3 / log log m
    Three,
    /// 5 / (2 log log m)
    FiveHalves,
}

#[derive(Subcommand, Debug)]
enum TablesCommand {
    /// Compare tables with live computation.
    Verify {
        table: Option<TableArg>,
        /// Read the fixture from this file instead of the embedded copy.
        #[arg(long, requires = "table")]
        path: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableArg {
    Phi,
    H,
    G,
}

#[derive(Args, Debug)]
struct BaseField {
    /// Ramification index of k.
    #[arg(long, default_value_t = 1)]
    ek: u64,
    /// Residue degree of k.
    #[arg(long, default_value_t = 1)]
    fk: u64,
}

#[derive(Subcommand, Debug)]
enum BoundCommand {
    /// Over the Lubin-Tate extension K k_π.
    LubinTate {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        base: BaseField,
        #[arg(long, default_value_t = 1)]
        mu: u64,
        /// Degree of Kk over Q_p.
        #[arg(long)]
        dkk: u64,
        /// Degree of K over Q_p.
        #[arg(long)]
        dk: u64,
        /// v_p((q_k^-1 Nr(π))^μ - 1), a rational such as 7 or 9/2.
        #[arg(long)]
        v: Option<Rational>,
        /// Check the valuation hypothesis instead of μ < p.
        #[arg(long)]
        refined: bool,
    },
    /// Good reduction, endomorphisms over K.
    Good {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        base: BaseField,
        #[arg(long, default_value_t = 1)]
        mu: u64,
        #[arg(long)]
        dkk: u64,
        #[arg(long)]
        v: Option<Rational>,
    },
    /// Over K(μ_p^∞).
    Cyclotomic {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        dk: u64,
    },
    /// Over K(K^(1/p^∞)).
    Kummer {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        dk: u64,
    },
    /// Over K(K^(1/p^∞)), good reduction with endomorphisms over K.
    KummerGood {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        dk: u64,
    },
    /// Good ordinary reduction over K k_π.
    Ordinary {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        mu: u64,
        /// Degree of Kk over k.
        #[arg(long)]
        drel: u64,
        #[arg(long, default_value_t = 1)]
        fk: u64,
    },
    /// Number field K of degree d and narrow class number h, over K(μ_∞).
    NumberField {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        h: u64,
        /// Comma-separated primes ramified in K.
        #[arg(long, value_delimiter = ',')]
        ramified: Vec<u64>,
        #[arg(long, default_value_t = DEFAULT_NUMBER_FIELD_PRIME_CAP)]
        prime_cap: u64,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

enum Rendered {
    Text(String),
    Json(Value),
}

struct Output {
    json: Value,
    text: String,
    code: i32,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Self {
            json,
            text,
            code: EXIT_OK,
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::CapExceeded { .. }
        | Error::FactorizationTooHard(_)
        | Error::TooLargeForEnumeration { .. } => EXIT_CAP,
        _ => EXIT_INVALID,
    }
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::CapExceeded { .. } => "cap-exceeded",
        Error::FactorizationTooHard(_) => "factorization-too-hard",
        Error::ZeroValuation => "zero-valuation",
        Error::InvalidInput(_) => "invalid-input",
        Error::DivisibilityViolation { .. } => "divisibility-violation",
        Error::TooLargeForEnumeration { .. } => "too-large-for-enumeration",
        Error::InternalInconsistency(_) => "internal-inconsistency",
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            return Outcome {
                code,
                output: e.render().to_string(),
            };
        }
    };
    let json = cli.json;
    let (code, rendered) = match run(cli.command) {
        Ok(out) => (
            out.code,
            if json {
                Rendered::Json(out.json)
            } else {
                Rendered::Text(out.text)
            },
        ),
        Err(err) => (
            exit_code(&err),
            if json {
                Rendered::Json(json!({ "error": error_kind(&err), "message": err.to_string() }))
            } else {
                Rendered::Text(format!("error: {err}\n"))
            },
        ),
    };
    let output = match rendered {
        Rendered::Text(t) => t,
        Rendered::Json(v) => format!("{}\n", serde_json::to_string_pretty(&v).unwrap()),
    };
    Outcome { code, output }
}

/// `[["p", "e"], ...]` with decimal strings.
pub fn factored_json(f: &FactoredNat) -> Value {
    Value::Array(
        f.factors()
            .iter()
            .map(|(p, e)| json!([p.to_string(), e.to_string()]))
            .collect(),
    )
}

fn value_json(name: &str, n: u64, f: &FactoredNat) -> Value {
    json!({
        "function": name,
        "n": n.to_string(),
        "value": f.to_biguint().to_string(),
        "factored": factored_json(f),
    })
}

fn value_text(symbol: &str, n: impl std::fmt::Display, f: &FactoredNat) -> String {
    format!("{symbol}({n}) = {} = {f}\n", f.to_biguint())
}

fn run(command: Command) -> Result<Output> {
    match command {
        Command::Phi { n } => {
            let f = phi_cap(n)?;
            Ok(Output::ok(value_json("phi", n, &f), value_text("Φ", n, &f)))
        }
        Command::Psi { n } => {
            let f = psi_cap(n)?;
            Ok(Output::ok(value_json("psi", n, &f), value_text("Ψ", n, &f)))
        }
        Command::Hn { n, oracle } => run_hn(n, oracle),
        Command::Gn { n, p3 } => {
            let f = g_order_bound(n, p3)?;
            let mut json = value_json("G", n as u64, &f);
            json["modulus"] = json!(g_modulus(p3).to_string());
            let text = format!(
                "{}  [#GL_{}(Z/{}Z)]\n",
                value_text("G", n, &f).trim_end(),
                2 * n,
                g_modulus(p3)
            );
            Ok(Output::ok(json, text))
        }
        Command::Order {
            family,
            n,
            modulus,
            brute,
        } => run_order(family, n, modulus, brute),
        Command::Lg { g, p, m } => {
            let l = lg(g, p, &m)?;
            Ok(Output::ok(
                json!({ "g": g.to_string(), "p": p.to_string(), "m": m.to_string(), "L_g": l.to_string() }),
                format!("L_{g}({m}) = {l}  [p = {p}]\n"),
            ))
        }
        Command::Cconst { d, dm, em, h, p } => {
            let c = c_const(d, dm, em, h, p)?;
            Ok(Output::ok(
                json!({
                    "d": d.to_string(), "d_M": dm.to_string(), "e_M": em.to_string(),
                    "h": h.to_string(), "p": p.to_string(), "C": c.to_string(),
                }),
                format!("C({d}, M, {h}) = {c}  [p = {p}, d_M = {dm}, e_M = {em}]\n"),
            ))
        }
        Command::Bound { kind } => {
            let report = run_bound(kind)?;
            Ok(Output::ok(report_json(&report), report_text(&report)))
        }
        Command::Check { kind, range, form } => {
            let (lo, hi) = parse_range(&range)?;
            match kind {
                CheckKind::PhiBounds => run_phi_bounds(lo, hi),
                CheckKind::HBound => run_h_bound(lo, hi),
                CheckKind::Rosser => run_rosser(lo, hi, form),
            }
        }
        Command::Tables {
            action: TablesCommand::Verify { table, path },
        } => run_tables(table, path),
    }
}

fn run_hn(n: u64, oracle: Option<u64>) -> Result<Output> {
    let f = h_exact(n)?;
    let mut json = value_json("H", n, &f);
    let mut text = value_text("H", n, &f);
    let mut code = EXIT_OK;
    if let Some(n_max) = oracle {
        let small = u32::try_from(n).map_err(|_| Error::cap("n", n, u32::MAX))?;
        let g = h_gcd_oracle(small, n_max)?;
        let agrees = g == f;
        if !agrees {
            code = EXIT_MISMATCH;
        }
        json["oracle"] = json!({
            "n_max": n_max.to_string(),
            "value": g.to_biguint().to_string(),
            "factored": factored_json(&g),
            "agrees": agrees,
        });
        text.push_str(&format!(
            "gcd #GSp_{}(Z/NZ), 3 <= N <= {n_max}: {g}  [{}]\n",
            2 * n,
            if agrees { "agrees" } else { "MISMATCH" }
        ));
    }
    Ok(Output { json, text, code })
}

fn run_order(family: FamilyArg, n: u32, modulus: u64, brute: bool) -> Result<Output> {
    let family = match family {
        FamilyArg::Gl => Family::GL,
        FamilyArg::Gsp => Family::GSp,
        FamilyArg::Sp => Family::Sp,
    };
    let spec = GroupSpec::new(family, n, modulus)?;
    let f = spec.order()?;
    let mut json = json!({
        "group": spec.to_string(),
        "order": f.to_biguint().to_string(),
        "factored": factored_json(&f),
    });
    let mut text = format!("#{spec} = {} = {f}\n", f.to_biguint());
    let mut code = EXIT_OK;
    if brute {
        let count = spec.order_bruteforce()?;
        let agrees = BigUint::from(count) == f.to_biguint();
        if !agrees {
            code = EXIT_MISMATCH;
        }
        json["brute_force"] = json!({ "order": count.to_string(), "agrees": agrees });
        text.push_str(&format!(
            "enumerated: {count}  [{}]\n",
            if agrees { "agrees" } else { "MISMATCH" }
        ));
    }
    Ok(Output { json, text, code })
}

fn run_bound(kind: BoundCommand) -> Result<BoundReport> {
    match kind {
        BoundCommand::LubinTate {
            g,
            p,
            base,
            mu,
            dkk,
            dk,
            v,
            refined,
        } => {
            let input = LubinTateInput {
                g,
                base: PAdicInvariants::new(p, base.ek, base.fk)?,
                mu,
                v,
                degree_composite: dkk,
                degree_field: dk,
            };
            bound_lubin_tate(&input, refined)
        }
        BoundCommand::Good {
            g,
            p,
            base,
            mu,
            dkk,
            v,
        } => {
            let k = PAdicInvariants::new(p, base.ek, base.fk)?;
            bound_good_reduction(g, p, mu, k.d, k.f, dkk, v.as_ref())
        }
        BoundCommand::Cyclotomic { g, p, dk } => bound_cyclotomic(g, p, dk),
        BoundCommand::Kummer { g, p, dk } => bound_kummer(g, p, dk),
        BoundCommand::KummerGood { g, p, dk } => bound_kummer_good(g, p, dk),
        BoundCommand::Ordinary { g, p, mu, drel, fk } => bound_ordinary(g, p, mu, drel, fk),
        BoundCommand::NumberField {
            g,
            d,
            h,
            ramified,
            prime_cap,
        } => bound_number_field(g, d, h, &ramified, prime_cap),
    }
}

fn pairs_json(pairs: &[(String, String)]) -> Value {
    let map: Map<String, Value> = pairs
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    Value::Object(map)
}

/// The JSON document for a bound report.
pub fn report_json(r: &BoundReport) -> Value {
    let cap = r.cap.factored();
    json!({
        "theorem_id": r.theorem.as_str(),
        "inputs": pairs_json(&r.inputs),
        "checks": r.checks.iter().map(|c| json!({
            "name": c.name,
            "status": c.status.as_str(),
        })).collect::<Vec<_>>(),
        "exponent_C": r.exponent_c.to_string(),
        "intermediates": pairs_json(&r.intermediates),
        "conditional": r.conditional(),
        "cap": {
            "p": r.cap.prime().map(|p| p.to_string()),
            "exponent": r.cap_exponent().to_string(),
            "factored": factored_json(&cap),
        },
        "notes": r.notes,
    })
}

/// Aligned text rendering of a bound report.
pub fn report_text(r: &BoundReport) -> String {
    let mut rows: Vec<(String, String)> = vec![("theorem".into(), r.theorem.to_string())];
    let inputs = r
        .inputs
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ");
    rows.push(("inputs".into(), inputs));
    for c in &r.checks {
        rows.push(("check".into(), format!("{}: {}", c.name, c.status.as_str())));
    }
    for (k, v) in &r.intermediates {
        rows.push((k.clone(), v.clone()));
    }
    rows.push(("exponent_C".into(), r.exponent_c.to_string()));
    let cap = match &r.cap {
        TorsionCap::PrimePower { p, exponent } => format!("{p}^{exponent}"),
        TorsionCap::Annihilator(n) => n.to_string(),
    };
    rows.push(("cap".into(), cap));
    rows.push((
        "conditional".into(),
        if r.conditional() { "yes" } else { "no" }.into(),
    ));
    for n in &r.notes {
        rows.push(("note".into(), n.clone()));
    }
    let width = rows
        .iter()
        .map(|(k, _)| k.chars().count())
        .max()
        .unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect()
}

fn parse_range(s: &str) -> Result<(u64, u64)> {
    let bad = || Error::invalid(format!("bad range {s:?}: expected N or LO..HI"));
    let parse = |t: &str| t.trim().replace('_', "").parse::<u64>().map_err(|_| bad());
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let n = parse(s)?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

#[derive(Default)]
struct Tally {
    holds: u64,
    fails: Vec<u64>,
    not_applicable: u64,
}

impl Tally {
    fn add(&mut self, n: u64, v: Verdict) {
        match v {
            Verdict::Holds => self.holds += 1,
            Verdict::Fails => self.fails.push(n),
            Verdict::NotApplicable => self.not_applicable += 1,
        }
    }

    fn json(&self) -> Value {
        json!({
            "holds": self.holds.to_string(),
            "fails": self.fails.iter().map(u64::to_string).collect::<Vec<_>>(),
            "not_applicable": self.not_applicable.to_string(),
        })
    }

    fn text(&self) -> String {
        let mut s = format!("{} holds, {} fails", self.holds, self.fails.len());
        if self.not_applicable > 0 {
            s.push_str(&format!(", {} n/a", self.not_applicable));
        }
        if !self.fails.is_empty() {
            s.push_str(&format!(" at {:?}", self.fails));
        }
        s
    }
}

fn run_phi_bounds(lo: u64, hi: u64) -> Result<Output> {
    let (mut growth, mut product, mut split) =
        (Tally::default(), Tally::default(), Tally::default());
    for n in lo..=hi {
        let r = check_phi_bounds(n)?;
        growth.add(n, r.growth);
        product.add(n, r.prime_product);
        split.add(n, r.sophie_germain);
    }
    let json = json!({
        "check": "phi-bounds",
        "range": [lo.to_string(), hi.to_string()],
        "growth": growth.json(),
        "prime_product": product.json(),
        "odd_prime_split": split.json(),
    });
    let text = format!(
        "phi-bounds {lo}..{hi}\n  growth          {}\n  prime product   {}\n  odd-prime split {}\n",
        growth.text(),
        product.text(),
        split.text()
    );
    Ok(Output::ok(json, text))
}

fn run_h_bound(lo: u64, hi: u64) -> Result<Output> {
    let mut tally = Tally::default();
    for n in lo..=hi {
        tally.add(
            n,
            if check_h_bound(n)? {
                Verdict::Holds
            } else {
                Verdict::Fails
            },
        );
    }
    Ok(Output::ok(
        json!({ "check": "h-bound", "range": [lo.to_string(), hi.to_string()], "result": tally.json() }),
        format!("h-bound {lo}..{hi}: {}\n", tally.text()),
    ))
}

fn run_rosser(lo: u64, hi: u64, form: FormArg) -> Result<Output> {
    let form = match form {
        FormArg::Three => RosserForm::Three,
        FormArg::FiveHalves => RosserForm::FiveHalves,
    };
    if lo == hi {
        let r = rosser_schoenfeld_check(lo, form)?;
        let rhs = r.rhs.as_ref().map(|i| i.to_string());
        return Ok(Output::ok(
            json!({
                "check": "rosser", "form": form.as_str(), "m": lo.to_string(),
                "phi": r.phi.to_string(), "decision": r.decision.as_str(),
                "precision": r.precision, "rhs": rhs,
            }),
            format!(
                "rosser [{}] m = {lo}: φ(m) = {}, bound {}: {}  [{} bits]\n",
                form.as_str(),
                r.phi,
                rhs.unwrap_or_else(|| "-".into()),
                r.decision,
                r.precision
            ),
        ));
    }
    let s = rosser_sweep(lo, hi, form)?;
    let list = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>();
    Ok(Output::ok(
        json!({
            "check": "rosser", "form": form.as_str(),
            "range": [lo.to_string(), hi.to_string()],
            "checked": s.checked.to_string(), "holds": s.holds.to_string(),
            "fails": list(&s.failures), "undecided": list(&s.undecided),
            "not_applicable": list(&s.not_applicable),
        }),
        format!(
            "rosser [{}] {lo}..{hi}: {} checked, {} holds, {} fails {:?}, {} undecided\n",
            form.as_str(),
            s.checked,
            s.holds,
            s.failures.len(),
            s.failures,
            s.undecided.len()
        ),
    ))
}

fn run_tables(table: Option<TableArg>, path: Option<PathBuf>) -> Result<Output> {
    let ids: Vec<TableId> = match table {
        Some(TableArg::Phi) => vec![TableId::Phi],
        Some(TableArg::H) => vec![TableId::H],
        Some(TableArg::G) => vec![TableId::G],
        None => TableId::ALL.to_vec(),
    };
    let mut reports = Vec::new();
    for id in ids {
        let fixture = match &path {
            Some(p) => tables::load_from_path(id, p)?,
            None => tables::fixture(id),
        };
        reports.push(tables::verify_fixture(&fixture)?);
    }
    let ok = reports.iter().all(|r| r.ok());
    let mut text = reports
        .iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join("  ");
    text.push('\n');
    for r in &reports {
        for m in &r.mismatches {
            text.push_str(&format!(
                "{} row {}: table {} computed {}\n",
                r.id, m.n, m.expected, m.computed
            ));
        }
    }
    let json = Value::Array(
        reports
            .iter()
            .map(|r| {
                json!({
                    "table": r.id.label(),
                    "rows": r.rows,
                    "matched": r.matched,
                    "mismatches": r.mismatches.iter().map(|m| json!({
                        "n": m.n.to_string(),
                        "expected": factored_json(&m.expected),
                        "computed": factored_json(&m.computed),
                    })).collect::<Vec<_>>(),
                })
            })
            .collect(),
    );
    Ok(Output {
        json: json!({ "tables": json }),
        text,
        code: if ok { EXIT_OK } else { EXIT_MISMATCH },
    })
}
