//! Command-line front end: parse group, surface and marking specifications,
//! run the component computation, and emit text or JSON reports.
//!
//! Exit codes: 0 for OK and EMPTY results, 2 for out-of-range surfaces,
//! 1 for parse and validation errors.

use std::fs;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use repvar::components::{
    component_group, ComponentReport, ReportStatus, SurfaceSpec,
};
use repvar::conjugacy::{preimage_components, MarkingSpec};
use repvar::group_model::{build_model, CompactGroupModel};
use repvar::input::{markings_from_json, parse_group_arg, parse_rational, parse_surface};
use repvar::spincheck::{
    construct_witness, evaluate_obstruction, random_rotation, SolutionTuple,
};

#[derive(Parser)]
#[command(
    name = "repvar",
    about = "Connected components of marked surface-group representation varieties",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct GroupArg {
    /// Group name (SO(3), U(2), SU(3)xU(1), T^2, ...) or @file.json with a
    /// group document
    #[arg(long)]
    group: String,
}

#[derive(Subcommand)]
enum Command {
    /// Component count and group of the marked moduli space
    Count {
        #[command(flatten)]
        group: GroupArg,
        /// Surface as l=<handles>,r=<boundary>,kind=<0|1|2>
        #[arg(long)]
        surface: String,
        /// Markings as @file.json or inline JSON (required when r > 0)
        #[arg(long)]
        markings: Option<String>,
        /// Include the flat-bundle summary for closed surfaces
        #[arg(long)]
        flat: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Center and fundamental-group data of the group
    Center {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Preimage components and covering degree per marking
    Classes {
        #[command(flatten)]
        group: GroupArg,
        /// Markings as @file.json or inline JSON
        #[arg(long)]
        markings: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Construct SO(3) witness tuples for both obstruction signs and
    /// evaluate them
    Spincheck {
        /// Surface as l=<handles>,r=<boundary>,kind=<0|1|2>
        #[arg(long)]
        surface: String,
        /// Boundary class half-angles as rational multiples of pi,
        /// comma-separated (e.g. 1/4,1/2)
        #[arg(long, default_value = "")]
        angles: String,
        /// Seed for the conjugation stress test
        #[arg(long, default_value = "0")]
        seed: u64,
        /// Number of random conjugations applied to each witness
        #[arg(long, default_value = "16")]
        conjugations: usize,
        /// Include the witness tuples in the report
        #[arg(long)]
        emit_witnesses: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok((output, code)) => {
            println!("{output}");
            ExitCode::from(code)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<(String, u8)> {
    match cli.command {
        Command::Count {
            group,
            surface,
            markings,
            flat,
            format,
        } => cmd_count(&group.group, &surface, markings.as_deref(), flat, format),
        Command::Center { group, format } => cmd_center(&group.group, format),
        Command::Classes {
            group,
            markings,
            format,
        } => cmd_classes(&group.group, &markings, format),
        Command::Spincheck {
            surface,
            angles,
            seed,
            conjugations,
            emit_witnesses,
            format,
        } => cmd_spincheck(&surface, &angles, seed, conjugations, emit_witnesses, format),
    }
}

fn load_arg(value: &str) -> anyhow::Result<String> {
    if let Some(path) = value.strip_prefix('@') {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    } else {
        Ok(value.to_string())
    }
}

fn load_model(group: &str) -> anyhow::Result<CompactGroupModel> {
    let text = load_arg(group)?;
    let spec = parse_group_arg(&text).with_context(|| format!("group {group:?}"))?;
    let mut model = build_model(spec).context("building the group model")?;
    if !text.trim_start().starts_with('{') {
        model.set_display_name(text.trim());
    }
    Ok(model)
}

fn load_markings(value: Option<&str>, needed: usize) -> anyhow::Result<Vec<MarkingSpec>> {
    match value {
        None if needed == 0 => Ok(Vec::new()),
        None => bail!("field markings: {needed} boundary markings required, none supplied"),
        Some(v) => {
            let text = load_arg(v)?;
            Ok(markings_from_json(&text).context("field markings")?)
        }
    }
}

fn count_u64(count: &BigUint) -> anyhow::Result<u64> {
    u64::try_from(count).map_err(|_| anyhow!("component count exceeds u64"))
}

// ---------------------------------------------------------------- count --

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct FlatDoc {
    h2: String,
    flat_admitting: u64,
    moduli_connected: bool,
}

#[derive(Serialize, Deserialize, PartialEq, Debug)]
struct CountDoc {
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    target: Option<String>,
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    trivial: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    flat_bundle: Option<FlatDoc>,
}

fn count_doc(report: &ComponentReport, include_flat: bool) -> anyhow::Result<CountDoc> {
    let count = match &report.count {
        Some(c) => Some(count_u64(c)?),
        None => None,
    };
    let flat_bundle = if include_flat {
        report
            .flat_bundle
            .as_ref()
            .map(|f| {
                Ok::<_, anyhow::Error>(FlatDoc {
                    h2: f.h2.to_string(),
                    flat_admitting: count_u64(&f.flat_admitting)?,
                    moduli_connected: f.moduli_connected,
                })
            })
            .transpose()?
    } else {
        None
    };
    Ok(CountDoc {
        status: report.status.as_str().to_string(),
        count,
        group: report.component_group.as_ref().map(|g| g.to_string()),
        target: report.target.map(|t| t.as_str().to_string()),
        trivial: report.trivial_surface,
        reason: report.reason.clone(),
        flat_bundle,
    })
}

fn cmd_count(
    group: &str,
    surface: &str,
    markings: Option<&str>,
    flat: bool,
    format: Format,
) -> anyhow::Result<(String, u8)> {
    let model = load_model(group)?;
    let surface: SurfaceSpec = parse_surface(surface).context("field surface")?;
    let markings = load_markings(markings, surface.boundary)?;
    let report = component_group(&surface, &markings, &model)?;
    let code = match report.status {
        ReportStatus::OutOfRange => 2,
        _ => 0,
    };
    let doc = count_doc(&report, flat)?;
    let output = match format {
        Format::Json => serde_json::to_string(&doc)?,
        Format::Text => {
            let mut lines = vec![format!("status: {}", doc.status)];
            if let Some(c) = doc.count {
                lines.push(format!("count: {c}"));
            }
            if let Some(g) = &doc.group {
                lines.push(format!("component group: {g}"));
            }
            if let Some(t) = &doc.target {
                lines.push(format!("target: {t}"));
            }
            if doc.trivial {
                lines.push("trivial: the variety is a single point".to_string());
            }
            if let Some(r) = &doc.reason {
                lines.push(format!("reason: {r}"));
            }
            if let Some(f) = &doc.flat_bundle {
                lines.push(format!(
                    "flat bundles: H^2 = {}, {} classes admit flat connections, connected: {}",
                    f.h2, f.flat_admitting, f.moduli_connected
                ));
            }
            lines.join("\n")
        }
    };
    Ok((output, code))
}

// --------------------------------------------------------------- center --

#[derive(Serialize, Deserialize)]
struct FactorDoc {
    r#type: String,
    center: String,
    center_order: u64,
    special_nodes: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct CenterReportDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    group: Option<String>,
    factors: Vec<FactorDoc>,
    pi1_g: String,
    pi1_gss: String,
    ker_rho_ss_order: u64,
    lambda_rank: usize,
    d_order: u64,
}

fn cmd_center(group: &str, format: Format) -> anyhow::Result<(String, u8)> {
    let model = load_model(group)?;
    let factors = model
        .spec()
        .factors
        .iter()
        .zip(model.centers())
        .map(|(t, c)| FactorDoc {
            r#type: t.to_string(),
            center: c.presentation().iso_type().to_string(),
            center_order: c.order() as u64,
            special_nodes: c.special_nodes().to_vec(),
        })
        .collect();
    let doc = CenterReportDoc {
        group: model.display_name().map(str::to_string),
        factors,
        pi1_g: model.pi1_g().iso_type().to_string(),
        pi1_gss: model.pi1_gss().iso_type().to_string(),
        ker_rho_ss_order: model.ker_rho_ss_elements().len() as u64,
        lambda_rank: model.torus_rank(),
        d_order: count_u64(model.d_order())?,
    };
    let output = match format {
        Format::Json => serde_json::to_string(&doc)?,
        Format::Text => {
            let mut lines = Vec::new();
            if let Some(g) = &doc.group {
                lines.push(format!("group: {g}"));
            }
            for f in &doc.factors {
                lines.push(format!(
                    "factor {}: center {} (order {}), mark-1 nodes {:?}",
                    f.r#type, f.center, f.center_order, f.special_nodes
                ));
            }
            lines.push(format!("pi1(G) = {}", doc.pi1_g));
            lines.push(format!("pi1(Gss) = {}", doc.pi1_gss));
            lines.push(format!("|Ker rho_ss| = {}", doc.ker_rho_ss_order));
            lines.push(format!("free quotient rank = {}", doc.lambda_rank));
            lines.push(format!("|H /\\ Gss| = {}", doc.d_order));
            lines.join("\n")
        }
    };
    Ok((output, 0))
}

// -------------------------------------------------------------- classes --

#[derive(Serialize, Deserialize)]
struct ClassDoc {
    count: u64,
    degree: u64,
    stabilizer_order: u64,
}

#[derive(Serialize, Deserialize)]
struct ClassesDoc {
    classes: Vec<ClassDoc>,
}

fn cmd_classes(group: &str, markings: &str, format: Format) -> anyhow::Result<(String, u8)> {
    let model = load_model(group)?;
    let text = load_arg(markings)?;
    let markings = markings_from_json(&text).context("field markings")?;
    let mut classes = Vec::new();
    for m in &markings {
        let rep = preimage_components(m, &model)?;
        classes.push(ClassDoc {
            count: rep.component_count,
            degree: rep.covering_degree,
            stabilizer_order: rep.class_stabilizer.len() as u64,
        });
    }
    let doc = ClassesDoc { classes };
    let output = match format {
        Format::Json => serde_json::to_string(&doc)?,
        Format::Text => doc
            .classes
            .iter()
            .enumerate()
            .map(|(i, c)| {
                format!(
                    "marking {i}: {} preimage component(s), covering degree {}",
                    c.count, c.degree
                )
            })
            .collect::<Vec<_>>()
            .join("\n"),
    };
    Ok((output, 0))
}

// ------------------------------------------------------------ spincheck --

#[derive(Serialize, Deserialize)]
struct WitnessDoc {
    target: i8,
    sign: i8,
    residual: f64,
    relation_residual: f64,
    ambiguous_positions: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tuple: Option<SolutionTuple>,
}

#[derive(Serialize, Deserialize)]
struct SpincheckDoc {
    surface: String,
    angles: Vec<String>,
    witnesses: Vec<WitnessDoc>,
    distinct_values_mod_j: usize,
    component_count: u64,
    agrees: bool,
    conjugations: usize,
    conjugation_sign_flips: usize,
    seed: u64,
}

fn so3_marking(ratio: &BigRational) -> MarkingSpec {
    let one = BigRational::from(num_bigint::BigInt::from(1));
    MarkingSpec {
        torus: Vec::new(),
        alcove: repvar::conjugacy::KacPoint {
            factors: vec![vec![&one - ratio, ratio.clone()]],
        },
    }
}

fn cmd_spincheck(
    surface: &str,
    angles: &str,
    seed: u64,
    conjugations: usize,
    emit_witnesses: bool,
    format: Format,
) -> anyhow::Result<(String, u8)> {
    let surface: SurfaceSpec = parse_surface(surface).context("field surface")?;
    let ratios: Vec<BigRational> = angles
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(parse_rational)
        .collect::<repvar::Result<_>>()
        .context("field angles")?;

    let model = build_model(repvar::group_model::named_group("SO(3)")?)?;
    let markings: Vec<MarkingSpec> = ratios.iter().map(so3_marking).collect();
    let report = component_group(&surface, &markings, &model)?;
    if report.status != ReportStatus::Ok {
        bail!(
            "surface {surface} is {} for the SO(3) component count",
            report.status.as_str()
        );
    }
    let component_count = count_u64(report.count.as_ref().expect("OK report has a count"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut witnesses = Vec::new();
    let mut signs_mod_j = std::collections::BTreeSet::new();
    let mut flips = 0usize;
    let any_ambiguous = ratios
        .iter()
        .any(|r| *r == BigRational::new(1.into(), 2.into()));
    for target in [1i8, -1i8] {
        let tuple = construct_witness(&surface, &ratios, target)?;
        let value = evaluate_obstruction(&tuple)?;
        for _ in 0..conjugations {
            let g = random_rotation(&mut rng);
            let conj_value = evaluate_obstruction(&tuple.conjugated_by(&g))?;
            if conj_value.sign != value.sign {
                flips += 1;
            }
        }
        signs_mod_j.insert(if any_ambiguous { 0i8 } else { value.sign });
        witnesses.push(WitnessDoc {
            target,
            sign: value.sign,
            residual: value.residual,
            relation_residual: tuple.relation_residual()?,
            ambiguous_positions: value.ambiguous_positions.clone(),
            tuple: emit_witnesses.then_some(tuple),
        });
    }
    let distinct = signs_mod_j.len();
    let doc = SpincheckDoc {
        surface: surface.to_string(),
        angles: ratios.iter().map(|r| r.to_string()).collect(),
        witnesses,
        distinct_values_mod_j: distinct,
        component_count,
        agrees: distinct as u64 == component_count,
        conjugations,
        conjugation_sign_flips: flips,
        seed,
    };
    let output = match format {
        Format::Json => serde_json::to_string(&doc)?,
        Format::Text => {
            let mut lines = vec![format!("surface: {}", doc.surface)];
            if !doc.angles.is_empty() {
                lines.push(format!("class angles (x pi): {}", doc.angles.join(", ")));
            }
            for w in &doc.witnesses {
                lines.push(format!(
                    "target {:+}: obstruction {:+}, central residual {:.2e}, relation residual {:.2e}",
                    w.target, w.sign, w.residual, w.relation_residual
                ));
            }
            lines.push(format!(
                "distinct obstruction values mod J: {} (component count {}), agreement: {}",
                doc.distinct_values_mod_j, doc.component_count, doc.agrees
            ));
            lines.push(format!(
                "conjugation checks: {} per witness, sign flips at ambiguous classes: {}",
                doc.conjugations, doc.conjugation_sign_flips
            ));
            lines.join("\n")
        }
    };
    Ok((output, 0))
}
