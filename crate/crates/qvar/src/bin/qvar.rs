//! Command-line surface: validation, topology reports, solvers, iteration,
//! certificate verification, brute-force enumeration, instance generation,
//! and batch suites.
//!
//! Exit codes: 0 success, 2 a solver refused because a checked hypothesis
//! fails, 1 a certificate failed verification, 3 anything operational
//! (bad files, bad flags, I/O).

use std::collections::BTreeMap;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qvar::catalog::{CatalogRule, CatalogSequence, CauchySide};
use qvar::error::{QvarError, Result};
use qvar::generate::{generate, Profile};
use qvar::instance::{
    catalog_instance, certificate_to_value, ext_to_value, parse_certificate, parse_instance,
    rat_from_value, serialize_certificate, serialize_instance, CertificateFile,
    CertificatePayload, CountableInstance, FiniteInstance, Instance, CATALOG_NAMES,
};
use qvar::iterate::{
    eta_iterate, eta_iterate_catalog, gelman_reduce_catalog, CatalogIterationOutcome, EtaSpec,
    GelmanSpec, IterationOutcome, Segment, SuccessorRule, DEFAULT_CAP,
};
use qvar::oracle::{
    enumerate_caristi_fixed, enumerate_ekeland, enumerate_minimal, enumerate_oettli_thera,
    enumerate_takahashi, verify_arutyunov, verify_caristi, verify_ekeland, verify_oettli_thera,
    verify_scaled_ekeland, verify_takahashi, CheckResult,
};
use qvar::order::{lower_section, Objective};
use qvar::principles::{
    arutyunov_minimize, caristi_fixed_point, ekeland_point, ekeland_scaled, oettli_thera,
    takahashi_minimize, Bivariate, CaristiVariant, ScalingSpec, SetValuedMap,
};
use qvar::rational::{format_rat, parse_rat, Rat};
use qvar::space::{validate_f_quasi_gauge, validate_quasi_pseudometric, TriangleMode};
use qvar::suite::{run_suite, PrincipleKind, SuiteConfig};
use qvar::topology::{
    classify_semicontinuity_catalog, is_k_cauchy, limit_set_catalog, separation_class,
    specialization_preorder, SequenceSpec,
};

#[derive(Parser)]
#[command(name = "qvar", about = "Exact solvers and verifiers for variational principles on finite and catalog quasi-uniform instances", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InstanceArg {
    /// Instance file path, or `catalog:<name>` for a built-in.
    #[arg(long)]
    instance: String,
}

impl InstanceArg {
    fn load(&self) -> Result<Instance> {
        if let Some(name) = self.instance.strip_prefix("catalog:") {
            catalog_instance(name)
        } else {
            parse_instance(&fs::read_to_string(&self.instance)?)
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the gauge axioms and report the separation class.
    Validate(ValidateCmd),
    /// Topology report: separation, specialization, sequence verdicts.
    Topo(TopoCmd),
    /// Run a solver and emit a self-verified certificate.
    Solve(SolveCmd),
    /// Run the discounted descent iteration.
    Iterate(IterateCmd),
    /// Re-check a certificate file against its embedded instance.
    Verify(VerifyCmd),
    /// Brute-force the full solution set of a principle.
    Enumerate(EnumerateCmd),
    /// Generate a random instance for a profile.
    Generate(GenerateCmd),
    /// Generate many instances, solve, and oracle-verify in bulk.
    Suite(SuiteCmd),
    /// List or print the built-in instances.
    Catalog(CatalogCmd),
}

#[derive(Args)]
struct ValidateCmd {
    #[command(flatten)]
    instance: InstanceArg,
}

#[derive(Args)]
struct TopoCmd {
    #[command(flatten)]
    instance: InstanceArg,
    /// Finite instances: comma-separated point names forming a prefix, with
    /// an optional trailing `...=name` marking an eventually constant tail.
    /// Catalog instances: `one-over-n`, `neg-one-over-n`, or `const:p/q`.
    #[arg(long)]
    sequence: Option<String>,
    /// Objective to classify along the sequence (catalog instances).
    #[arg(long)]
    objective: Option<String>,
}

#[derive(Args)]
struct SolveCmd {
    /// ekeland | scaled-ekeland | takahashi | caristi | arutyunov | oettli-thera
    principle: String,
    #[command(flatten)]
    instance: InstanceArg,
    #[arg(long, default_value = "f")]
    objective: String,
    /// Start point name (defaults to the first point with a finite value).
    #[arg(long)]
    start: Option<String>,
    /// Discount factor for arutyunov, as p/q.
    #[arg(long)]
    gamma: Option<String>,
    /// Threshold for scaled-ekeland, as p/q.
    #[arg(long)]
    epsilon: Option<String>,
    /// Per-member scaling file for scaled-ekeland:
    /// {"eps": "p/q", "xi": {"<member>": "p/q", ...}}.
    #[arg(long)]
    xi: Option<String>,
    #[arg(long, value_parser = ["weak", "strong"])]
    variant: Option<String>,
    /// Image map file for caristi: {"<point>": ["<point>", ...], ...};
    /// defaults to the full lower section at each point.
    #[arg(long)]
    map: Option<String>,
    /// Bivariate name for oettli-thera.
    #[arg(long)]
    bivariate: Option<String>,
    /// Write the certificate file here as well as to standard output.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct IterateCmd {
    #[command(flatten)]
    instance: InstanceArg,
    #[arg(long, default_value = "f")]
    objective: String,
    /// Successor rule: a file {"<point>": "<point>", ...} for finite
    /// instances, or a catalog rule name such as `halving`.
    #[arg(long)]
    rule: String,
    /// Discount factor, as p/q.
    #[arg(long)]
    gamma: Option<String>,
    /// Gain function: `linear:<mu>` or `pwl:<file>` where the file is
    /// {"segments": [{"start": .., "intercept": .., "slope": ..}, ..]}.
    #[arg(long)]
    eta: Option<String>,
    /// Contraction shortcut: lambda and mu imply gamma = (1-mu)/lambda and
    /// a linear gain, with the reduction re-checked per step.
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    mu: Option<String>,
    /// Start point: name (finite) or rational (catalog).
    #[arg(long)]
    start: String,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Declared limit point to check distance decay against (catalog).
    #[arg(long)]
    limit: Option<String>,
}

#[derive(Args)]
struct VerifyCmd {
    #[arg(long)]
    certificate: String,
}

#[derive(Args)]
struct EnumerateCmd {
    /// minimal | ekeland | takahashi | caristi | oettli-thera
    principle: String,
    #[command(flatten)]
    instance: InstanceArg,
    #[arg(long, default_value = "f")]
    objective: String,
    #[arg(long)]
    start: Option<String>,
    #[arg(long, value_parser = ["weak", "strong"])]
    variant: Option<String>,
    #[arg(long)]
    map: Option<String>,
    #[arg(long)]
    bivariate: Option<String>,
}

#[derive(Args)]
struct GenerateCmd {
    /// t1 | t0-not-t1 | chain | takahashi-valid | caristi-valid
    #[arg(long)]
    profile: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    members: usize,
    /// Defaults to QVAR_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct SuiteCmd {
    #[arg(long)]
    profile: String,
    #[arg(long, default_value_t = 20)]
    count: usize,
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    members: usize,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated principle list; defaults to all of them.
    #[arg(long)]
    principles: Option<String>,
}

#[derive(Args)]
struct CatalogCmd {
    /// Print this built-in instance instead of listing all names.
    name: Option<String>,
}

fn env_seed() -> u64 {
    std::env::var("QVAR_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0)
}

fn parse_rat_flag(v: &Option<String>, what: &str) -> Result<Option<Rat>> {
    v.as_deref()
        .map(|s| {
            parse_rat(s)
                .map_err(|e| QvarError::InvalidArgument(format!("bad {what} {s:?}: {e}")))
        })
        .transpose()
}

fn point_or_default(inst: &FiniteInstance, phi: &Objective, start: &Option<String>) -> Result<usize> {
    match start {
        Some(name) => inst.point_index(name),
        None => Ok(phi
            .values
            .iter()
            .position(|v| v.is_finite())
            .expect("objective is proper")),
    }
}

fn check_line(label: &str, check: &CheckResult) -> bool {
    match check {
        CheckResult::Pass => {
            println!("{label}: verified");
            true
        }
        CheckResult::Fail(msg) => {
            println!("{label}: FAILED: {msg}");
            false
        }
    }
}

fn load_map(inst: &FiniteInstance, path: &Option<String>, phi: &Objective) -> Result<SetValuedMap> {
    match path {
        None => {
            let images = (0..inst.n())
                .map(|x| lower_section(phi, &inst.gauge, x))
                .collect::<Result<Vec<_>>>()?;
            Ok(SetValuedMap { images })
        }
        Some(p) => {
            let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(p)?)
                .map_err(|e| QvarError::Parse(format!("bad map file: {e}")))?;
            let o = v
                .as_object()
                .ok_or_else(|| QvarError::Parse("map file must be an object".into()))?;
            let mut images = vec![Vec::new(); inst.n()];
            for (from, tos) in o {
                let i = inst.point_index(from)?;
                let arr = tos
                    .as_array()
                    .ok_or_else(|| QvarError::Parse("map images must be arrays".into()))?;
                for t in arr {
                    let name = t
                        .as_str()
                        .ok_or_else(|| QvarError::Parse("image entries must be point names".into()))?;
                    images[i].push(inst.point_index(name)?);
                }
            }
            Ok(SetValuedMap { images })
        }
    }
}

fn load_scaling(inst: &FiniteInstance, path: &str) -> Result<ScalingSpec> {
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(path)?)
        .map_err(|e| QvarError::Parse(format!("bad scaling file: {e}")))?;
    let o = v
        .as_object()
        .ok_or_else(|| QvarError::Parse("scaling file must be an object".into()))?;
    let eps = rat_from_value(
        o.get("eps")
            .ok_or_else(|| QvarError::Parse("scaling file needs an eps key".into()))?,
    )?;
    let xi_map = o
        .get("xi")
        .and_then(|x| x.as_object())
        .ok_or_else(|| QvarError::Parse("scaling file needs an xi object".into()))?;
    let mut xi = Vec::new();
    for d in &inst.gauge.members {
        let v = xi_map.get(&d.name).ok_or_else(|| {
            QvarError::Parse(format!("scaling file misses member {:?}", d.name))
        })?;
        xi.push(rat_from_value(v)?);
    }
    Ok(ScalingSpec { eps, xi })
}

fn parse_eta(spec: &str) -> Result<EtaSpec> {
    if let Some(mu) = spec.strip_prefix("linear:") {
        return EtaSpec::linear(parse_rat(mu)?);
    }
    if let Some(path) = spec.strip_prefix("pwl:") {
        let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(path)?)
            .map_err(|e| QvarError::Parse(format!("bad gain file: {e}")))?;
        let segs = v
            .get("segments")
            .and_then(|s| s.as_array())
            .ok_or_else(|| QvarError::Parse("gain file needs a segments array".into()))?;
        let mut segments = Vec::new();
        for s in segs {
            let o = s
                .as_object()
                .ok_or_else(|| QvarError::Parse("segments must be objects".into()))?;
            let field = |k: &str| -> Result<Rat> {
                rat_from_value(
                    o.get(k)
                        .ok_or_else(|| QvarError::Parse(format!("segment misses {k:?}")))?,
                )
            };
            segments.push(Segment {
                start: field("start")?,
                intercept: field("intercept")?,
                slope: field("slope")?,
            });
        }
        let eta = EtaSpec::PiecewiseLinear { segments };
        eta.validate()?;
        return Ok(eta);
    }
    Err(QvarError::InvalidArgument(format!(
        "gain must be linear:<mu> or pwl:<file>, got {spec:?}"
    )))
}

fn parse_sequence_flag(inst: &FiniteInstance, s: &str) -> Result<SequenceSpec> {
    let mut names: Vec<&str> = s.split(',').collect();
    let tail = names
        .last()
        .and_then(|l| l.strip_prefix("...="))
        .map(str::to_string);
    if tail.is_some() {
        names.pop();
    }
    let prefix = names
        .iter()
        .map(|n| inst.point_index(n))
        .collect::<Result<Vec<_>>>()?;
    Ok(match tail {
        Some(t) => SequenceSpec::EventuallyConstant {
            prefix,
            tail: inst.point_index(&t)?,
        },
        None => SequenceSpec::Prefix(prefix),
    })
}

fn cmd_validate(cmd: &ValidateCmd) -> Result<i32> {
    match cmd.instance.load()? {
        Instance::Finite(f) => {
            let n = f.n();
            for d in &f.gauge.members {
                let report = validate_quasi_pseudometric(d, n, TriangleMode::GaugeRelaxed)?;
                println!(
                    "member {}: {} violation(s), quasi-metric: {}",
                    d.name,
                    report.violations.len(),
                    report.is_quasi_metric
                );
                for v in &report.violations {
                    println!("  {} at {}", v.axiom, v.witness);
                }
            }
            let violations = validate_f_quasi_gauge(&f.gauge, n)?;
            for v in &violations {
                println!("gauge: {} at {}", v.axiom, v.witness);
            }
            let sep = separation_class(&f.gauge)?;
            println!("gauge axioms: {}", if violations.is_empty() { "ok" } else { "VIOLATED" });
            println!("separation: {}", sep.label());
            Ok(if violations.is_empty() { 0 } else { 1 })
        }
        Instance::Countable(c) => {
            println!("ground set: {}", c.space.id());
            println!("distance: {}", c.distance.id());
            println!(
                "quasi-metric: {} (stored catalog certificate)",
                c.distance.is_quasi_metric()
            );
            Ok(0)
        }
    }
}

fn parse_catalog_sequence(s: &str) -> Result<CatalogSequence> {
    CatalogSequence::parse(s)
}

fn cmd_topo(cmd: &TopoCmd) -> Result<i32> {
    match cmd.instance.load()? {
        Instance::Finite(f) => {
            let sep = separation_class(&f.gauge)?;
            println!("separation: {}", sep.label());
            let pre = specialization_preorder(&f.gauge)?;
            let pairs: Vec<String> = pre
                .pairs
                .iter()
                .filter(|(s, t)| s != t)
                .map(|(s, t)| format!("({}, {})", f.points[*s], f.points[*t]))
                .collect();
            println!(
                "specialization preorder beyond the diagonal: {}",
                if pairs.is_empty() { "none".to_string() } else { pairs.join(" ") }
            );
            if let Some(seq) = &cmd.sequence {
                let spec = parse_sequence_flag(&f, seq)?;
                let schedule = qvar::topology::default_epsilon_schedule();
                for (name, side) in [("left", CauchySide::Left), ("right", CauchySide::Right)] {
                    let v = is_k_cauchy(&spec, &f.gauge, side, &schedule)?;
                    println!("{name} K-Cauchy: {v:?}");
                }
                for x in 0..f.n() {
                    let v = qvar::topology::converges_to(&spec, x, &f.gauge, &schedule)?;
                    if v.holds_exactly() {
                        println!("converges to {} (exact)", f.points[x]);
                    }
                }
            }
            Ok(0)
        }
        Instance::Countable(c) => {
            println!("ground set: {}", c.space.id());
            println!("distance: {}", c.distance.id());
            if let Some(seq) = &cmd.sequence {
                let s = parse_catalog_sequence(seq)?;
                let names = limit_set_catalog(c.distance, &s, &c.limits)?;
                println!("limit set over declared candidates: {{{}}}", names.join(", "));
                for (name, side) in [("left", CauchySide::Left), ("right", CauchySide::Right)] {
                    let (ok, why) = qvar::catalog::k_cauchy(c.distance, &s, side)?;
                    println!("{name} K-Cauchy: {ok} ({why})");
                }
                if let Some(obj) = &cmd.objective {
                    let f = c.objectives.get(obj).ok_or_else(|| {
                        QvarError::InvalidArgument(format!("unknown objective {obj:?}"))
                    })?;
                    for (lname, lvalue) in &c.limits {
                        let r = match classify_semicontinuity_catalog(f, c.distance, &s, lvalue) {
                            Ok(r) => r,
                            Err(QvarError::NotApplicable(_)) => {
                                println!(
                                    "objective {obj} at {lname}: skipped, sequence does not converge there"
                                );
                                continue;
                            }
                            Err(e) => return Err(e),
                        };
                        println!("objective {obj} along {} at limit {lname}:", s.id());
                        println!("  lsc inequality: {}", r.lsc);
                        match r.decreasingly_lsc {
                            Some(b) => println!("  decreasingly-lsc inequality: {b}"),
                            None => println!("  decreasingly-lsc inequality: vacuous"),
                        }
                        match r.strict_decreasingly_lsc {
                            Some(b) => println!("  strict-decreasingly-lsc inequality: {b}"),
                            None => println!("  strict-decreasingly-lsc inequality: vacuous"),
                        }
                        match r.nearly_lsc {
                            Some(b) => println!("  nearly-lsc inequality: {b}"),
                            None => println!("  nearly-lsc inequality: vacuous"),
                        }
                    }
                }
            }
            Ok(0)
        }
    }
}

fn cmd_solve(cmd: &SolveCmd) -> Result<i32> {
    let inst = cmd.instance.load()?;
    let f = inst.as_finite()?.clone();
    let phi = f.objective(&cmd.objective)?;
    let x0 = point_or_default(&f, &phi, &cmd.start)?;
    let gauge = &f.gauge;
    let (payload, check) = match cmd.principle.as_str() {
        "ekeland" => {
            let cert = ekeland_point(&phi, gauge, x0)?;
            let check = verify_ekeland(&phi, gauge, &cert)?;
            println!("z = {} (start {})", f.points[cert.z], f.points[cert.x0]);
            (CertificatePayload::Ekeland(cert), check)
        }
        "scaled-ekeland" => {
            let spec = match (&cmd.xi, parse_rat_flag(&cmd.epsilon, "epsilon")?) {
                (Some(path), _) => Some(load_scaling(&f, path)?),
                (None, Some(eps)) => Some(ScalingSpec::uniform(
                    eps.clone(),
                    Rat::new(1.into(), 1.into()) / eps,
                    gauge.members.len(),
                )),
                (None, None) => None,
            };
            let s = ekeland_scaled(&phi, gauge, x0, spec)?;
            let check = verify_scaled_ekeland(&phi, gauge, &s)?;
            println!(
                "z = {} (start {}, eps {}{})",
                f.points[s.cert.z],
                f.points[s.cert.x0],
                format_rat(&s.eps),
                if s.degenerate { ", degenerate" } else { "" }
            );
            (CertificatePayload::ScaledEkeland(s), check)
        }
        "takahashi" => {
            let cert = takahashi_minimize(&phi, gauge)?;
            let check = verify_takahashi(&phi, &cert);
            println!(
                "z = {} with f(z) = {} = inf",
                f.points[cert.z],
                serde_json::to_string(&ext_to_value(&cert.f_z)).unwrap()
            );
            (CertificatePayload::Takahashi(cert), check)
        }
        "caristi" => {
            let variant = match cmd.variant.as_deref() {
                Some("strong") => CaristiVariant::Strong,
                _ => CaristiVariant::Weak,
            };
            let map = load_map(&f, &cmd.map, &phi)?;
            let cert = caristi_fixed_point(&map, &phi, gauge, variant)?;
            let check = verify_caristi(&map, &cert);
            println!("fixed point z = {}", f.points[cert.z]);
            (CertificatePayload::Caristi { cert, map }, check)
        }
        "arutyunov" => {
            let gamma = parse_rat_flag(&cmd.gamma, "gamma")?.ok_or_else(|| {
                QvarError::InvalidArgument("arutyunov needs --gamma".into())
            })?;
            let cert = arutyunov_minimize(&phi, gauge, &gamma, x0)?;
            let check = verify_arutyunov(&phi, gauge, &cert)?;
            println!("z = {} within the stated distance of {}", f.points[cert.z], f.points[cert.x0]);
            (CertificatePayload::Arutyunov(cert), check)
        }
        "oettli-thera" => {
            let (bi, bname) = match &cmd.bivariate {
                Some(name) => (f.bivariate(name)?, name.clone()),
                None => (
                    Bivariate::from_objective_difference(&phi)?,
                    format!("diff:{}", cmd.objective),
                ),
            };
            let cert = oettli_thera(&bi, gauge, x0)?;
            let check = verify_oettli_thera(&bi, gauge, &cert)?;
            println!("z = {} (start {})", f.points[cert.z], f.points[cert.x0]);
            (
                CertificatePayload::OettliThera {
                    cert,
                    bivariate: bname,
                },
                check,
            )
        }
        other => {
            return Err(QvarError::InvalidArgument(format!(
                "unknown principle {other:?}"
            )))
        }
    };
    let file = CertificateFile {
        instance: inst,
        objective: Some(cmd.objective.clone()),
        payload,
    };
    let text = serialize_certificate(&file);
    if let Some(out) = &cmd.out {
        fs::write(out, &text)?;
        let reparsed = parse_certificate(&text)?;
        assert_eq!(
            certificate_to_value(&reparsed),
            certificate_to_value(&file),
            "emitted file must round-trip"
        );
    }
    println!("{text}");
    Ok(if check_line("oracle", &check) { 0 } else { 1 })
}

fn cmd_verify(cmd: &VerifyCmd) -> Result<i32> {
    let file = parse_certificate(&fs::read_to_string(&cmd.certificate)?)?;
    let check = qvar::instance::verify_file(&file)?;
    Ok(if check_line("certificate", &check) { 0 } else { 1 })
}

fn cmd_enumerate(cmd: &EnumerateCmd) -> Result<i32> {
    let inst = cmd.instance.load()?;
    let f = inst.as_finite()?;
    let phi = f.objective(&cmd.objective)?;
    let points = |ix: &[usize]| -> String {
        ix.iter()
            .map(|&i| f.points[i].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let set = match cmd.principle.as_str() {
        "minimal" => enumerate_minimal(&phi, &f.gauge)?,
        "ekeland" => {
            let x0 = point_or_default(f, &phi, &cmd.start)?;
            enumerate_ekeland(&phi, &f.gauge, x0)?
        }
        "takahashi" => enumerate_takahashi(&phi),
        "caristi" => {
            let variant = match cmd.variant.as_deref() {
                Some("strong") => CaristiVariant::Strong,
                _ => CaristiVariant::Weak,
            };
            let map = load_map(f, &cmd.map, &phi)?;
            enumerate_caristi_fixed(&map, variant)
        }
        "oettli-thera" => {
            let x0 = point_or_default(f, &phi, &cmd.start)?;
            let bi = match &cmd.bivariate {
                Some(name) => f.bivariate(name)?,
                None => Bivariate::from_objective_difference(&phi)?,
            };
            enumerate_oettli_thera(&bi, &f.gauge, x0)?
        }
        other => {
            return Err(QvarError::InvalidArgument(format!(
                "unknown principle {other:?}"
            )))
        }
    };
    println!("solution set ({}): {}", set.len(), points(&set));
    Ok(0)
}

fn print_finite_outcome(f: &FiniteInstance, outcome: &IterationOutcome) {
    match outcome {
        IterationOutcome::Terminated {
            x,
            steps,
            trajectory,
            bounds,
            ..
        } => {
            println!(
                "terminated at {} after {steps} step(s); trajectory: {}",
                f.points[*x],
                trajectory
                    .iter()
                    .map(|&i| f.points[i].as_str())
                    .collect::<Vec<_>>()
                    .join(" -> ")
            );
            println!("telescoped bounds checked: {}", bounds.len());
        }
        IterationOutcome::Converging {
            trajectory,
            residuals,
            bounds,
            ..
        } => {
            println!(
                "cap reached after {} step(s); last residual {}",
                trajectory.len() - 1,
                serde_json::to_string(&ext_to_value(residuals.last().unwrap())).unwrap()
            );
            println!("telescoped bounds checked: {}", bounds.len());
        }
    }
}

fn print_catalog_outcome(outcome: &CatalogIterationOutcome) {
    match outcome {
        CatalogIterationOutcome::Terminated { x, steps, bounds, .. } => {
            println!("terminated at {} after {steps} step(s)", format_rat(x));
            println!("telescoped bounds checked: {}", bounds.len());
        }
        CatalogIterationOutcome::Converging {
            trajectory,
            residuals,
            bounds,
            limit_check,
            ..
        } => {
            println!(
                "cap reached; last iterate {} with residual {}",
                format_rat(trajectory.last().unwrap()),
                serde_json::to_string(&ext_to_value(residuals.last().unwrap())).unwrap()
            );
            println!("telescoped bounds checked: {}", bounds.len());
            if let Some(lc) = limit_check {
                println!(
                    "distance decay to {} checked; limit bound {} <= {}",
                    format_rat(&lc.limit),
                    format_rat(&lc.bound_lhs),
                    format_rat(&lc.bound_rhs)
                );
            }
        }
    }
}

fn cmd_iterate(cmd: &IterateCmd) -> Result<i32> {
    let inst = cmd.instance.load()?;
    let gelman = match (&cmd.lambda, &cmd.mu) {
        (Some(l), Some(m)) => Some(GelmanSpec {
            lambda: parse_rat(l)?,
            mu: parse_rat(m)?,
        }),
        (None, None) => None,
        _ => {
            return Err(QvarError::InvalidArgument(
                "the contraction shortcut needs both --lambda and --mu".into(),
            ))
        }
    };
    match inst {
        Instance::Finite(f) => {
            let phi = f.objective(&cmd.objective)?;
            let x0 = f.point_index(&cmd.start)?;
            let (gamma, eta) = finite_gamma_eta(cmd, &gelman)?;
            let rule = load_rule_table(&f, &cmd.rule)?;
            let outcome = eta_iterate(&phi, &f.gauge, &gamma, &eta, &rule, x0, cmd.cap)?;
            print_finite_outcome(&f, &outcome);
            Ok(0)
        }
        Instance::Countable(c) => cmd_iterate_catalog(cmd, &c, gelman),
    }
}

fn finite_gamma_eta(cmd: &IterateCmd, gelman: &Option<GelmanSpec>) -> Result<(Rat, EtaSpec)> {
    if let Some(g) = gelman {
        g.validate()?;
        return Ok((g.gamma(), g.eta()?));
    }
    let gamma = parse_rat_flag(&cmd.gamma, "gamma")?
        .ok_or_else(|| QvarError::InvalidArgument("iterate needs --gamma or --lambda/--mu".into()))?;
    let eta = parse_eta(
        cmd.eta
            .as_deref()
            .ok_or_else(|| QvarError::InvalidArgument("iterate needs --eta or --lambda/--mu".into()))?,
    )?;
    Ok((gamma, eta))
}

fn load_rule_table(f: &FiniteInstance, path: &str) -> Result<SuccessorRule> {
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(path)?)
        .map_err(|e| QvarError::Parse(format!("bad rule file: {e}")))?;
    let o = v
        .as_object()
        .ok_or_else(|| QvarError::Parse("rule file must be an object".into()))?;
    let mut table = BTreeMap::new();
    for (from, to) in o {
        let t = to
            .as_str()
            .ok_or_else(|| QvarError::Parse("rule values must be point names".into()))?;
        table.insert(f.point_index(from)?, f.point_index(t)?);
    }
    Ok(SuccessorRule::Table(table))
}

fn cmd_iterate_catalog(
    cmd: &IterateCmd,
    c: &CountableInstance,
    gelman: Option<GelmanSpec>,
) -> Result<i32> {
    let f = c.objectives.get(&cmd.objective).ok_or_else(|| {
        QvarError::InvalidArgument(format!("unknown objective {:?}", cmd.objective))
    })?;
    let rule = CatalogRule::parse(&cmd.rule)?;
    let x0 = parse_rat(&cmd.start)?;
    let limit = cmd
        .limit
        .as_deref()
        .map(|l| {
            c.limits
                .iter()
                .find(|(n, _)| n == l)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| QvarError::InvalidArgument(format!("unknown limit point {l:?}")))
        })
        .transpose()?;
    let outcome = if let Some(g) = gelman {
        gelman_reduce_catalog(c.space, c.distance, f, &g, rule, &x0, cmd.cap, limit.as_ref())?
    } else {
        let gamma = parse_rat_flag(&cmd.gamma, "gamma")?
            .ok_or_else(|| QvarError::InvalidArgument("iterate needs --gamma or --lambda/--mu".into()))?;
        let eta = parse_eta(
            cmd.eta
                .as_deref()
                .ok_or_else(|| QvarError::InvalidArgument("iterate needs --eta or --lambda/--mu".into()))?,
        )?;
        eta_iterate_catalog(c.space, c.distance, f, &gamma, &eta, rule, &x0, cmd.cap, limit.as_ref())?
    };
    print_catalog_outcome(&outcome);
    Ok(0)
}

fn cmd_generate(cmd: &GenerateCmd) -> Result<i32> {
    let profile = Profile::parse(&cmd.profile)?;
    let seed = cmd.seed.unwrap_or_else(env_seed);
    let inst = generate(profile, cmd.n, cmd.members, seed)?;
    let text = serialize_instance(&inst);
    let reparsed = parse_instance(&text)?;
    assert_eq!(reparsed, inst, "emitted file must round-trip");
    match &cmd.out {
        Some(path) => {
            fs::write(path, &text)?;
            println!("wrote {path}");
        }
        None => println!("{text}"),
    }
    Ok(0)
}

fn cmd_suite(cmd: &SuiteCmd) -> Result<i32> {
    let principles = match &cmd.principles {
        None => PrincipleKind::ALL.to_vec(),
        Some(list) if list.is_empty() => Vec::new(),
        Some(list) => list
            .split(',')
            .map(PrincipleKind::parse)
            .collect::<Result<Vec<_>>>()?,
    };
    let cfg = SuiteConfig {
        profile: Profile::parse(&cmd.profile)?,
        count: cmd.count,
        n: cmd.n,
        members: cmd.members,
        seed: cmd.seed.unwrap_or_else(env_seed),
        principles,
    };
    let report = run_suite(&cfg)?;
    print!("{}", report.text);
    Ok(report.exit_code())
}

fn cmd_catalog(cmd: &CatalogCmd) -> Result<i32> {
    match &cmd.name {
        None => {
            for name in CATALOG_NAMES {
                println!("{name}");
            }
        }
        Some(name) => {
            let inst = catalog_instance(name)?;
            println!("{}", serialize_instance(&inst));
        }
    }
    Ok(0)
}

fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Validate(c) => cmd_validate(c),
        Command::Topo(c) => cmd_topo(c),
        Command::Solve(c) => cmd_solve(c),
        Command::Iterate(c) => cmd_iterate(c),
        Command::Verify(c) => cmd_verify(c),
        Command::Enumerate(c) => cmd_enumerate(c),
        Command::Generate(c) => cmd_generate(c),
        Command::Suite(c) => cmd_suite(c),
        Command::Catalog(c) => cmd_catalog(c),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(QvarError::Hypothesis(msg)) | Err(QvarError::NotApplicable(msg)) => {
            eprintln!("refused: {msg}");
            ExitCode::from(2)
        }
        Err(QvarError::Verification(msg)) => {
            eprintln!("verification failure: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
