//! Command surface of the `vclab` tool. [`run_command`] parses an argument
//! vector, runs one command and returns the exit code with a report.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 budget exhausted.

pub mod args;
pub mod report;

use std::ffi::OsString;
use std::fs;
use std::path::Path;
use std::time::Instant;

use clap::Parser;
use serde::Serialize;
use vclab_core::construction::{build_equation_system, build_spec, CounterexampleSpec, SpecOptions};
use vclab_core::group::{
    bounded_n_search, centre_direct_factor, generators_mod_centre, is_pure, purity_witness_search, special_set,
    LatticeLimits, PurityWitness,
};
use vclab_core::solvers::{
    certify_not_algebraically_closed, verbal_closedness_audit, verify_certificate, AuditOptions, Certificate,
};
use vclab_core::zpk::{choose_m, enumerate_family, verify_function_lemma, LemmaMode, PointSet, Zpk};
use vclab_core::{catalog, cayley, Error, FiniteGroup};

pub use args::{Cli, Command, Common};
pub use report::{Analysis, Audit, Construction, FnLemma, Outcome, RunReport, WitnessSummary};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Largest family whose tables are listed in an `fnlemma` report.
const LIST_FAMILY_MAX: usize = 64;

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            _ if e.is_budget() => EXIT_BUDGET,
            Error::Parse { .. } | Error::InvalidTable(_) | Error::Precondition(_) | Error::MissingAssignment(_) => {
                EXIT_USAGE
            }
            _ => EXIT_VERIFICATION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

struct Done {
    code: i32,
    outcome: Outcome,
    messages: Vec<String>,
}

impl Done {
    fn ok(outcome: Outcome, messages: Vec<String>) -> Self {
        Done {
            code: EXIT_OK,
            outcome,
            messages,
        }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run_command<I, T>(argv: I) -> (i32, RunReport)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let start = Instant::now();
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let mut report = RunReport {
        tool: "vclab".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        argv: argv.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
        command: None,
        parameters: None,
        seed: 0,
        exit_code: EXIT_OK,
        elapsed_ms: 0,
        result: None,
        error: None,
        messages: Vec::new(),
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            report.exit_code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if report.exit_code == EXIT_OK {
                report.messages.push(text);
            } else {
                report.error = Some(text);
            }
            return (report.exit_code, report);
        }
    };
    report.command = Some(cli.command.name().into());
    report.parameters = Some(cli.common.clone());
    report.seed = cli.common.seed;
    match execute(&cli) {
        Ok(done) => {
            report.exit_code = done.code;
            report.result = Some(done.outcome);
            report.messages = done.messages;
        }
        Err(f) => {
            report.exit_code = f.code;
            report.error = Some(f.message);
        }
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    if let Some(path) = &cli.common.out {
        if let Err(f) = write_json(path, &report) {
            report.exit_code = f.code;
            report.error.get_or_insert(f.message);
        }
    }
    (report.exit_code, report)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::usage(e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn execute(cli: &Cli) -> Result<Done, Failure> {
    let c = &cli.common;
    match &cli.command {
        Command::Analyze { .. } => analyze(&load_group(cli)?, c),
        Command::Construct { .. } => construct(&load_group(cli)?, c),
        Command::VerifyNac { .. } => verify_nac(&load_group(cli)?, c, false),
        Command::Demo { .. } => verify_nac(&load_group(cli)?, c, true),
        Command::VerifyVc { .. } => verify_vc(&load_group(cli)?, c),
        Command::Fnlemma { sample, .. } => fnlemma(c, *sample),
        Command::Verify { path } => verify(path),
    }
}

/// `name` from the catalog, or `@path` to a Cayley file. Defaults to `q8`.
pub fn resolve_group(spec: &str) -> vclab_core::Result<FiniteGroup> {
    match spec.strip_prefix('@') {
        Some(path) => cayley::load(path),
        None => catalog::by_name(spec),
    }
}

fn load_group(cli: &Cli) -> Result<FiniteGroup, Failure> {
    let name = cli.command.group().or(cli.common.group.as_deref()).unwrap_or("q8");
    Ok(resolve_group(name)?)
}

fn limits(c: &Common) -> LatticeLimits {
    LatticeLimits {
        max_order: c.cap_lattice,
        ..LatticeLimits::default()
    }
}

/// The witness from `--b/--p/--k`, missing parts filled in from the search.
fn witness_override(h: &FiniteGroup, c: &Common) -> Result<Option<PurityWitness>, Failure> {
    if c.b.is_none() && c.p.is_none() && c.k.is_none() {
        return Ok(None);
    }
    let found = purity_witness_search(h);
    let b = match &c.b {
        Some(name) => h
            .elem_by_name(name)
            .ok_or_else(|| Failure::usage(format!("no element named '{name}' in {}", h.label())))?,
        None => found.map(|w| w.b).ok_or_else(|| Failure::usage("--b is needed: the group has no purity witness"))?,
    };
    let p = c.p.or(found.map(|w| w.p)).ok_or_else(|| Failure::usage("--p is needed"))?;
    let k = c.k.or(found.map(|w| w.k)).ok_or_else(|| Failure::usage("--k is needed"))?;
    let w = PurityWitness { b, p, k };
    w.validate(h)?;
    Ok(Some(w))
}

fn spec_options(h: &FiniteGroup, c: &Common) -> Result<SpecOptions, Failure> {
    Ok(SpecOptions {
        witness: witness_override(h, c)?,
        n: c.n,
        dim_m: c.m,
        family: None,
        limits: limits(c),
        family_cap: c.cap_family,
        point_cap: c.cap_points,
        lemma_budget: c.cap_lemma,
        seed: c.seed,
        ..SpecOptions::default()
    })
}

fn names(h: &FiniteGroup, xs: impl IntoIterator<Item = vclab_core::Elem>) -> Vec<String> {
    xs.into_iter().map(|x| h.name(x).to_string()).collect()
}

fn summary(h: &FiniteGroup, w: &PurityWitness) -> WitnessSummary {
    WitnessSummary {
        b: h.name(w.b).to_string(),
        p: w.p,
        k: w.k,
    }
}

fn analyze(h: &FiniteGroup, c: &Common) -> Result<Done, Failure> {
    let limits = limits(c);
    let z = h.centre();
    let mut notes = Vec::new();
    let witness = match witness_override(h, c)? {
        Some(w) => Some(w),
        None => purity_witness_search(h),
    };
    let (special, n) = match &witness {
        Some(w) => {
            let e = special_set(h, w);
            let n = bounded_n_search(h, &e, SpecOptions::default().n_cap, &limits);
            (names(h, e), Some(n))
        }
        None => (Vec::new(), None),
    };
    let centre_direct_factor = match centre_direct_factor(h, &limits) {
        Ok(f) => f.map(|s| names(h, s.members().iter().copied())),
        Err(e) => {
            notes.push(format!("complement of the centre not searched: {e}"));
            None
        }
    };
    let analysis = Analysis {
        group: h.label().to_string(),
        order: h.order(),
        abelian: h.is_abelian(),
        exponent: h.exponent(),
        centre: names(h, z.members().iter().copied()),
        centre_is_pure: is_pure(h, &z),
        witness: witness.as_ref().map(|w| summary(h, w)),
        special_set: special,
        n,
        generators_mod_centre: names(h, generators_mod_centre(h)),
        centre_direct_factor,
        notes,
    };
    let mut messages = vec![format!(
        "{}: order {}, centre {{{}}}",
        analysis.group,
        analysis.order,
        analysis.centre.join(", ")
    )];
    match &analysis.witness {
        Some(w) => messages.push(format!(
            "witness b = {}, p = {}, k = {}; E = {{{}}}; n = {}",
            w.b,
            w.p,
            w.k,
            analysis.special_set.join(", "),
            analysis.n.as_ref().map_or(0, |n| n.n)
        )),
        None => messages.push("centre is pure: no witness".into()),
    }
    Ok(Done::ok(Outcome::Analysis(analysis), messages))
}

fn construction(spec: &CounterexampleSpec) -> Construction {
    let h = spec.h();
    let system = build_equation_system(spec);
    Construction {
        group: h.label().to_string(),
        witness: summary(h, &spec.witness()),
        n_search: spec.n_search().clone(),
        n_used: spec.n_used(),
        dim_m: spec.dim_m(),
        points: spec.npoints(),
        family_size: spec.family().len(),
        gens: names(h, spec.gens().iter().copied()),
        order_g: spec.element_count(),
        equations: system.len(),
        tag_counts: system.tag_counts(),
        certification: spec.certification().clone(),
        notes: spec.notes().to_vec(),
    }
}

fn construction_line(k: &Construction) -> String {
    format!(
        "{}: witness ({}, {}, {}), n = {}, m = {}, |S| = {}, |F| = {}, generators ({}), {} equations",
        k.group,
        k.witness.b,
        k.witness.p,
        k.witness.k,
        k.n_used,
        k.dim_m,
        k.points,
        k.family_size,
        k.gens.join(", "),
        k.equations
    )
}

fn construct(h: &FiniteGroup, c: &Common) -> Result<Done, Failure> {
    let spec = build_spec(h, &spec_options(h, c)?)?;
    let k = construction(&spec);
    let line = construction_line(&k);
    Ok(Done::ok(Outcome::Construction(Box::new(k)), vec![line]))
}

fn audit_options(c: &Common) -> AuditOptions {
    AuditOptions {
        element_cap: c.cap_elements,
        pair_cap: c.cap_pairs,
        trials: c.trials,
        max_len: c.max_len,
        max_vars: c.max_vars,
        seed: c.seed,
        ..AuditOptions::default()
    }
}

fn verify_nac(h: &FiniteGroup, c: &Common, with_audit: bool) -> Result<Done, Failure> {
    let spec = build_spec(h, &spec_options(h, c)?)?;
    let mut messages = vec![construction_line(&construction(&spec))];
    let mut cert = certify_not_algebraically_closed(&spec, c.cap_nodes, c.seed)?;
    messages.push(format!(
        "obvious solution solves all {} equations over G; no solution over H ({} nodes, exhaustive)",
        cert.system.equations, cert.h_unsat.nodes
    ));
    let mut code = EXIT_OK;
    if with_audit {
        let ev = verbal_closedness_audit(&spec, &audit_options(c))?;
        messages.push(format!(
            "audit: {} tiers, complete classes [{}], {} sampled assignments, {} violations",
            ev.tiers.len(),
            ev.complete_classes.join("; "),
            ev.sampled_assignments,
            ev.violations
        ));
        if ev.violations > 0 {
            code = EXIT_VERIFICATION;
        }
        cert.vc_evidence = Some(ev);
    }
    if let Some(path) = &c.cert_out {
        write_json(path, &cert)?;
    }
    Ok(Done {
        code,
        outcome: Outcome::Certificate(Box::new(cert)),
        messages,
    })
}

fn verify_vc(h: &FiniteGroup, c: &Common) -> Result<Done, Failure> {
    let spec = build_spec(h, &spec_options(h, c)?)?;
    let evidence = verbal_closedness_audit(&spec, &audit_options(c))?;
    let code = if evidence.violations == 0 {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    };
    let mut messages = Vec::new();
    for t in &evidence.tiers {
        messages.push(format!(
            "{:?} {}: {} assignments{}, {} diagonal hits, {} transferred, {} violations",
            t.kind,
            t.word,
            t.assignments,
            if t.complete { " (complete)" } else { "" },
            t.diagonal_hits,
            t.transferred,
            t.violations
        ));
    }
    let audit = Audit {
        group: h.label().to_string(),
        order_g: spec.element_count(),
        evidence,
    };
    Ok(Done {
        code,
        outcome: Outcome::Audit(audit),
        messages,
    })
}

fn fnlemma(c: &Common, sample: bool) -> Result<Done, Failure> {
    let p = c.p.unwrap_or(2);
    let k = c.k.unwrap_or(1);
    let n = c.n.unwrap_or(1);
    let m = match c.m {
        Some(m) => m,
        None => usize::try_from(choose_m(p, k, n as u64)).map_err(|_| Failure::usage("m does not fit in memory"))?,
    };
    let (mode, budget) = if sample {
        (LemmaMode::Sample, c.cap_lemma)
    } else {
        (LemmaMode::Enumerate, c.cap_family)
    };
    let report = verify_function_lemma(p, k, n, m, mode, budget, c.seed)?;
    let functions = match mode {
        LemmaMode::Enumerate => {
            let ring = Zpk::new(p, k)?;
            let points = PointSet::new(ring, m, c.cap_points);
            match enumerate_family(ring, n, &points, LIST_FAMILY_MAX) {
                Ok(f) => Some(f.tables().iter().map(|t| t.values.clone()).collect()),
                Err(_) => None,
            }
        }
        LemmaMode::Sample => None,
    };
    let code = if report.pass { EXIT_OK } else { EXIT_VERIFICATION };
    let messages = vec![format!(
        "Z_{}^{} n = {} m = {}: {} ({} members)",
        p,
        k,
        n,
        m,
        if report.pass { "pass" } else { "FAIL" },
        report.family_size.map_or("sampled".to_string(), |s| s.to_string())
    )];
    Ok(Done {
        code,
        outcome: Outcome::FunctionLemma(FnLemma { report, functions }),
        messages,
    })
}

fn verify(path: &Path) -> Result<Done, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let cert: Certificate = match serde_json::from_str(&text) {
        Ok(cert) => cert,
        Err(_) => match serde_json::from_str::<RunReport>(&text) {
            Ok(RunReport {
                result: Some(Outcome::Certificate(cert)),
                ..
            }) => *cert,
            _ => return Err(Failure::usage(format!("{} holds no certificate", path.display()))),
        },
    };
    let check = match verify_certificate(&cert) {
        Ok(check) => check,
        Err(e) if e.is_budget() => return Err(e.into()),
        Err(e) => {
            return Err(Failure {
                code: EXIT_VERIFICATION,
                message: format!("certificate rejected: {e}"),
            })
        }
    };
    let code = if check.ok { EXIT_OK } else { EXIT_VERIFICATION };
    let mut messages = vec![format!(
        "{} equations re-checked over G: {}",
        check.equations,
        if check.ok { "ok" } else { "FAILED" }
    )];
    messages.extend(check.problems.iter().cloned());
    Ok(Done {
        code,
        outcome: Outcome::Check(check),
        messages,
    })
}
