mod args;
mod output;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::Parser;
use serde_json::{json, Value};

use args::{
    Cli, Command, CubeInfluence, EpsArgs, Flavor, FunctionArgs, Model, ObjectiveArgs, ObjectiveKind, TorusArgs,
    TorusCommand, TorusMethod,
};
use noisestab::canonical::{is_monotone, named};
use noisestab::influence::{edge_boundary, influence, InfluenceMethod};
use noisestab::info::{binary_entropy, mutual_information};
use noisestab::noise::{agreement_probability, phi_stability, PhiSpec};
use noisestab::search::{compare_named, maximize, Constraint, Objective, SearchSpec};
use noisestab::shift::monotonize;
use noisestab::torus::{
    torus_edge_boundary, torus_influence, torus_is_monotone, torus_monotonize, torus_phi_stability,
    InfluenceFlavor, NoiseModel, TorusFunction, TorusInfluenceMethod,
};
use noisestab::tree::{tree_agreement, tree_correlation, tree_mc_estimate, TreeInput};
use noisestab::verify;
use noisestab::BooleanFunction;
use output::{emit, Record};

const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// Result rows plus whether every check in them passed.
struct Outcome {
    parameters: Value,
    results: Vec<Value>,
    passed: bool,
}

impl Outcome {
    fn ok(parameters: Value, results: Vec<Value>) -> Self {
        Self { parameters, results, passed: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED_CHECK),
        Err(err) => {
            eprintln!("error: {:#}", err);
            match err.downcast_ref::<noisestab::Error>() {
                Some(noisestab::Error::BudgetExceeded { .. }) => ExitCode::from(EXIT_BUDGET),
                _ => ExitCode::from(EXIT_ERROR),
            }
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .context("configuring worker pool")?;
    }
    let start = Instant::now();
    let outcome = dispatch(&cli.command)?;
    let record = Record {
        command: std::env::args().skip(1).collect::<Vec<_>>().join(" "),
        parameters: outcome.parameters,
        results: outcome.results,
        version: env!("CARGO_PKG_VERSION"),
        wall_time_secs: start.elapsed().as_secs_f64(),
    };
    let mut stdout = std::io::stdout().lock();
    emit(record, cli.format, &mut stdout)?;
    stdout.flush()?;
    Ok(outcome.passed)
}

fn dispatch(command: &Command) -> anyhow::Result<Outcome> {
    Ok(match command {
        Command::Stability { f, alpha, phi, eps } => {
            let g = load(f)?;
            let phi = parse_phi(phi.as_deref(), *alpha)?;
            let rows = eps_values(eps)?
                .into_iter()
                .map(|e| Ok(json!({ "eps": e, "value": phi_stability(&g, &phi, e)? })))
                .collect::<anyhow::Result<_>>()?;
            Outcome::ok(json!({ "n": g.n(), "table_hex": g.to_hex(), "phi": phi.name() }), rows)
        }
        Command::Agreement { f, k, eps } => {
            let g = load(f)?;
            let rows = eps_values(eps)?
                .into_iter()
                .map(|e| Ok(json!({ "eps": e, "agreement": agreement_probability(&g, *k, e)? })))
                .collect::<anyhow::Result<_>>()?;
            Outcome::ok(json!({ "n": g.n(), "table_hex": g.to_hex(), "k": k }), rows)
        }
        Command::Influence { f, method } => {
            let g = load(f)?;
            let method = match method {
                CubeInfluence::Flip => InfluenceMethod::Flip,
                CubeInfluence::Fourier => InfluenceMethod::Fourier,
                CubeInfluence::Boundary => InfluenceMethod::Boundary,
            };
            let report = influence(&g, method);
            let boundary = edge_boundary(&g);
            let rows = report
                .per_coordinate
                .iter()
                .zip(&boundary.per_direction)
                .enumerate()
                .map(|(i, (inf, cut))| json!({ "coordinate": i + 1, "influence": inf, "boundary_edges": cut }))
                .chain([json!({ "coordinate": "total", "influence": report.total, "boundary_edges": boundary.total })])
                .collect();
            Outcome::ok(json!({ "n": g.n(), "table_hex": g.to_hex(), "method": method }), rows)
        }
        Command::Monotonize { f } => {
            let g = load(f)?;
            let (h, trace) = monotonize(&g);
            let row = json!({
                "input_hex": g.to_hex(),
                "output_hex": h.to_hex(),
                "monotone": is_monotone(&h),
                "support_size": h.support_size(),
                "passes": trace.passes,
                "final_potential": trace.final_potential,
                "steps": trace.steps,
            });
            Outcome::ok(json!({ "n": g.n() }), vec![row])
        }
        Command::Mi { f, eps } => {
            let g = load(f)?;
            let entropy = binary_entropy(g.mean())?;
            let rows = eps_values(eps)?
                .into_iter()
                .map(|e| Ok(json!({ "eps": e, "mutual_information": mutual_information(&g, e)?, "output_entropy": entropy })))
                .collect::<anyhow::Result<_>>()?;
            Outcome::ok(json!({ "n": g.n(), "table_hex": g.to_hex() }), rows)
        }
        Command::Search { n, support, balanced, objective, monotone_only, budget, tie_tolerance, all_argmax } => {
            let constraint = match (support, balanced) {
                (Some(s), false) => Constraint::SupportSize(*s),
                (None, true) => Constraint::Balanced,
                _ => bail!("give exactly one of --support and --balanced"),
            };
            let mut spec = SearchSpec::new(*n, constraint, build_objective(objective))
                .with_budget(*budget)
                .with_tie_tolerance(*tie_tolerance);
            if *monotone_only {
                spec = spec.monotone_only();
            }
            if *all_argmax {
                spec = spec.stream_all();
            }
            let result = maximize(&spec)?;
            let mut row = serde_json::to_value(&result)?;
            let spec_value = row.as_object_mut().and_then(|m| m.shift_remove("spec")).unwrap_or(Value::Null);
            Outcome::ok(spec_value, vec![row])
        }
        Command::Compare { n, objective, candidates } => {
            let objective = build_objective(objective);
            let functions = candidates
                .iter()
                .map(|label| Ok((label.clone(), named(*n, label).with_context(|| format!("candidate {}", label))?)))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let ranked = compare_named(*n, &functions, &objective)?;
            let rows = ranked.iter().map(serde_json::to_value).collect::<Result<_, _>>()?;
            Outcome::ok(json!({ "n": n, "objective": objective.name() }), rows)
        }
        Command::Torus { command } => torus(command)?,
        Command::Tree { input, samples, seed } => {
            let text = std::fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
            let (tree, players) = TreeInput::from_json(&text)?.build()?;
            let mut row = json!({
                "correlation": tree_correlation(&tree, &players)?,
                "agreement": tree_agreement(&tree, &players)?,
            });
            if let Some(samples) = samples {
                let seed = seed.ok_or_else(|| anyhow!("--samples requires --seed"))?;
                let mc = tree_mc_estimate(&tree, &players, *samples, seed)?;
                row["mc_estimate"] = json!(mc.estimate);
                row["mc_standard_error"] = json!(mc.standard_error);
                row["mc_samples"] = json!(mc.samples);
            }
            let parameters = json!({
                "input": input.display().to_string(),
                "vertices": tree.vertex_count(),
                "players": players.players().len(),
                "n": players.n(),
                "seed": seed,
            });
            Outcome::ok(parameters, vec![row])
        }
        Command::Verify { criterion } => {
            let ids: Vec<u8> = match criterion {
                Some(id) => vec![*id],
                None => verify::CRITERIA.to_vec(),
            };
            let mut rows = Vec::new();
            let mut passed = true;
            for id in ids {
                let report = verify::run(id)?;
                eprintln!("{}", report.summary());
                passed &= report.passed;
                rows.push(serde_json::to_value(&report)?);
            }
            Outcome { parameters: json!({ "criterion": criterion }), results: rows, passed }
        }
    })
}

fn torus(command: &TorusCommand) -> anyhow::Result<Outcome> {
    Ok(match command {
        TorusCommand::Stability { f, alpha, phi, model, eps } => {
            let g = load_torus(f)?;
            let phi = parse_phi(phi.as_deref(), *alpha)?;
            let model = match model {
                Model::Uniform => NoiseModel::Uniform,
                Model::Nearest => NoiseModel::Nearest,
            };
            let rows = eps_values(eps)?
                .into_iter()
                .map(|e| Ok(json!({ "eps": e, "value": torus_phi_stability(&g, &phi, e, model)? })))
                .collect::<anyhow::Result<_>>()?;
            Outcome::ok(torus_parameters(&g, json!({ "phi": phi.name(), "model": model })), rows)
        }
        TorusCommand::Influence { f, flavor, method } => {
            let g = load_torus(f)?;
            let flavor = match flavor {
                Flavor::RandomFlip => InfluenceFlavor::RandomFlip,
                Flavor::Nearest => InfluenceFlavor::Nearest,
            };
            let method = match method {
                TorusMethod::Direct => TorusInfluenceMethod::Direct,
                TorusMethod::Fourier => TorusInfluenceMethod::Fourier,
            };
            let report = torus_influence(&g, flavor, method)?;
            let rows = report
                .per_coordinate
                .iter()
                .enumerate()
                .map(|(i, v)| json!({ "coordinate": i + 1, "influence": v }))
                .chain([json!({ "coordinate": "total", "influence": report.total })])
                .collect();
            Outcome::ok(torus_parameters(&g, json!({ "flavor": flavor, "method": method })), rows)
        }
        TorusCommand::Boundary { f } => {
            let g = load_torus(f)?;
            let b = torus_edge_boundary(&g)?;
            let rows = b
                .per_direction
                .iter()
                .enumerate()
                .map(|(i, c)| json!({ "direction": i + 1, "edges": c }))
                .chain([json!({ "direction": "total", "edges": b.total })])
                .collect();
            Outcome::ok(torus_parameters(&g, json!({})), rows)
        }
        TorusCommand::Monotonize { f } => {
            let g = load_torus(f)?;
            let (h, trace) = torus_monotonize(&g)?;
            let row = json!({
                "input_table": g.to_table(),
                "output_table": h.to_table(),
                "monotone": torus_is_monotone(&h),
                "support_size": h.support_size(),
                "passes": trace.passes,
                "final_potential": trace.final_potential,
                "steps": trace.steps,
            });
            Outcome::ok(torus_parameters(&g, json!({})), vec![row])
        }
    })
}

fn torus_parameters(f: &TorusFunction, extra: Value) -> Value {
    let mut v = json!({ "p": f.p(), "n": f.n(), "table": f.to_table() });
    if let (Some(m), Value::Object(e)) = (v.as_object_mut(), extra) {
        m.extend(e);
    }
    v
}

fn load(f: &FunctionArgs) -> anyhow::Result<BooleanFunction> {
    match (&f.table, &f.named) {
        (Some(hex), None) => Ok(BooleanFunction::from_hex(f.n, hex)?),
        (None, Some(label)) => Ok(named(f.n, label)?),
        _ => bail!("give exactly one of --table and --named"),
    }
}

fn load_torus(f: &TorusArgs) -> anyhow::Result<TorusFunction> {
    match (&f.table, &f.points) {
        (Some(table), None) => Ok(TorusFunction::from_table(f.p, f.n, table)?),
        (None, Some(points)) => Ok(TorusFunction::from_points(f.p, f.n, points)?),
        _ => bail!("give exactly one of --table and --points"),
    }
}

fn parse_phi(phi: Option<&str>, alpha: f64) -> anyhow::Result<PhiSpec> {
    Ok(match phi {
        None => PhiSpec::power(alpha)?,
        Some("entropy-pair") => PhiSpec::EntropyPair,
        Some("hellinger") => PhiSpec::Hellinger,
        Some(other) => match other.strip_prefix("power:") {
            Some(a) => PhiSpec::power(a.parse().with_context(|| format!("exponent in {}", other))?)?,
            None => bail!("unknown phi {:?}; expected power:<a>, entropy-pair or hellinger", other),
        },
    })
}

fn build_objective(o: &ObjectiveArgs) -> Objective {
    match o.objective {
        ObjectiveKind::Stability => Objective::AlphaStability { alpha: o.alpha, eps: o.eps },
        ObjectiveKind::Agreement => Objective::Agreement { k: o.k, eps: o.eps },
        ObjectiveKind::Mi => Objective::MutualInfo { eps: o.eps },
        ObjectiveKind::Degree1 => Objective::Degree1Weight,
        ObjectiveKind::Influence => Objective::TotalInfluenceMin,
    }
}

fn eps_values(e: &EpsArgs) -> anyhow::Result<Vec<f64>> {
    match (e.eps, &e.eps_grid) {
        (Some(eps), None) => Ok(vec![eps]),
        (None, Some(grid)) => parse_grid(grid),
        _ => bail!("give exactly one of --eps and --eps-grid"),
    }
}

/// `start:stop:step`; points are `start + i·step` up to `stop` inclusive.
fn parse_grid(spec: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<f64> = spec
        .split(':')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("malformed grid {:?}", spec))?;
    let [start, stop, step] = parts[..] else {
        bail!("grid {:?} must be start:stop:step", spec);
    };
    if !(step > 0.0) || !(stop >= start) {
        bail!("grid {:?} needs step > 0 and stop >= start", spec);
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}
