#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;
use num_complex::Complex64;
use serde_json::{json, Value};

use pottslab::graph::{self, Boundary, GraphKind, Multigraph};
use pottslab::montecarlo::{self, Algorithm, InitialState, ScanOrder, SimConfig};
use pottslab::potts::{self, Coupling, Hamiltonian, PottsParams};
use pottslab::report::format_g;
use pottslab::thermo;
use pottslab::tutte::{self, TutteConfig};
use pottslab::zeros;

use args::*;
use error::{usage, CliError};
use output::{Inputs, Output};

/// Overrides the deletion–contraction edge ceiling.
const MAX_EDGES_ENV: &str = "POTTSLAB_MAX_EDGES";

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successes; everything else is a usage error.
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pottslab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(usage("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Failure(e.to_string()))?;
    }
    let config = tutte_config()?;
    match cli.command {
        Command::Graph(GraphCommand::Gen(a)) => graph_gen(&a),
        Command::Tutte(a) => {
            let mut inputs = Inputs::default();
            let g = inputs.graph(&a.graph)?;
            let t = tutte::tutte_with(&g, &config)?;
            Output::new("tutte", &a, &inputs, config).emit(a.out.as_deref(), &(t.to_json() + "\n"))
        }
        Command::Chromatic(a) => {
            let mut inputs = Inputs::default();
            let g = inputs.graph(&a.graph)?;
            let c = tutte::chromatic_with(&g, &config)?;
            Output::new("chromatic", &a, &inputs, config)
                .emit(a.out.as_deref(), &(c.to_json() + "\n"))
        }
        Command::Potts(PottsCommand::Poly(a)) => {
            let mut inputs = Inputs::default();
            let g = inputs.graph(&a.graph)?;
            let z = potts::partition_polynomial_with(&g, &config)?;
            Output::new("potts poly", &a, &inputs, config)
                .emit(a.out.as_deref(), &(z.to_json() + "\n"))
        }
        Command::Potts(PottsCommand::Eval(a)) => potts_eval(&a, config),
        Command::Thermo(ThermoCommand::Sweep(a)) => thermo_sweep(&a, config),
        Command::Zeros(a) => zeros_cmd(&a, config),
        Command::Simulate(a) => simulate(&a, config),
    }
}

fn tutte_config() -> Result<TutteConfig, CliError> {
    let mut config = TutteConfig::default();
    if let Ok(raw) = std::env::var(MAX_EDGES_ENV) {
        config.max_edges = raw.trim().parse().map_err(|_| {
            usage(format!(
                "{MAX_EDGES_ENV} must be a nonnegative integer, got {raw:?}"
            ))
        })?;
    }
    Ok(config)
}

fn hamiltonian(h: HamiltonianArg) -> Hamiltonian {
    match h {
        HamiltonianArg::H1 => Hamiltonian::H1,
        HamiltonianArg::H2 => Hamiltonian::H2,
    }
}

fn graph_gen(a: &GenArgs) -> Result<(), CliError> {
    let need =
        |v: Option<usize>, name: &str| v.ok_or_else(|| usage(format!("--kind needs --{name}")));
    let kind = match a.kind {
        Kind::Cycle => GraphKind::Cycle(need(a.n, "n")?),
        Kind::Path => GraphKind::Path(need(a.n, "n")?),
        Kind::Complete => GraphKind::Complete(need(a.n, "n")?),
        Kind::Grid => {
            let boundary = match a.boundary {
                BoundaryArg::Free => Boundary::Free,
                BoundaryArg::Torus => Boundary::Torus,
            };
            GraphKind::grid(need(a.rows, "rows")?, need(a.cols, "cols")?, boundary)
        }
    };
    let g = kind.build()?;
    Output::new("graph gen", a, &Inputs::default(), TutteConfig::default())
        .emit(a.out.as_deref(), &graph::serialize(&g))
}

/// Couplings from a weights file: one `e_index J_e` pair per line, every
/// edge exactly once. Blank lines and lines starting with `#` are skipped.
fn parse_weights(text: &str, g: &Multigraph) -> Result<Vec<f64>, CliError> {
    let mut js: Vec<Option<f64>> = vec![None; g.edge_count()];
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |why: &str| usage(format!("weights line {}: {why}", n + 1));
        let mut parts = line.split_whitespace();
        let (Some(e), Some(j), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad("expected \"e_index J_e\""));
        };
        let e: usize = e.parse().map_err(|_| bad("edge index is not an integer"))?;
        let j: f64 = j.parse().map_err(|_| bad("coupling is not a number"))?;
        match js.get_mut(e) {
            None => return Err(bad("edge index out of range")),
            Some(Some(_)) => return Err(bad("edge listed twice")),
            Some(slot) => *slot = Some(j),
        }
    }
    js.into_iter()
        .enumerate()
        .map(|(e, j)| j.ok_or_else(|| usage(format!("weights file has no coupling for edge {e}"))))
        .collect()
}

fn potts_eval(a: &EvalArgs, config: TutteConfig) -> Result<(), CliError> {
    let mut inputs = Inputs::default();
    let g = inputs.graph(&a.graph)?;
    if !(a.kappa > 0.0) {
        return Err(usage("--kappa must be positive"));
    }
    let coupling = match &a.weights {
        Some(path) => Coupling::PerEdge(parse_weights(&inputs.text(path)?, &g)?),
        None => Coupling::Uniform(a.j.unwrap_or(1.0)),
    };
    let beta = match (a.t, a.k) {
        (Some(t), _) if t > 0.0 => 1.0 / (a.kappa * t),
        (Some(_), _) => return Err(usage("--T must be positive")),
        (None, Some(k)) => {
            let j = a.j.unwrap_or(1.0);
            if j == 0.0 {
                if k != 0.0 {
                    return Err(usage("--K is nonzero but --J is 0"));
                }
                0.0
            } else {
                k / j
            }
        }
        (None, None) => unreachable!("clap requires one of --T and --K"),
    };
    if !(a.q > 0.0) {
        return Err(usage("--q must be positive"));
    }
    let h = hamiltonian(a.hamiltonian);
    let total_j = match &coupling {
        Coupling::Uniform(j) => j * g.edge_count() as f64,
        Coupling::PerEdge(js) => js.iter().sum(),
    };
    let shift = match h {
        Hamiltonian::H1 => 1.0,
        Hamiltonian::H2 => (-beta * total_j).exp(),
    };
    let value = match a.method {
        Method::Brute => {
            if a.q.fract() != 0.0 {
                return Err(usage("--method brute needs an integer --q"));
            }
            let params = PottsParams {
                q: a.q as u32,
                coupling,
                kappa: a.kappa,
                beta,
                hamiltonian: h,
            };
            potts::partition_bruteforce(&g, &params)?
        }
        Method::Tutte => {
            let Coupling::Uniform(j) = coupling else {
                return Err(usage("--method tutte needs a uniform coupling"));
            };
            let t = tutte::tutte_with(&g, &config)?;
            potts::p1_via_tutte(&t, &g, a.q, (beta * j).exp_m1()) * shift
        }
        Method::Poly => match coupling {
            Coupling::Uniform(j) => {
                let z = potts::partition_polynomial_with(&g, &config)?;
                z.eval_real(a.q, (beta * j).exp_m1()) * shift
            }
            Coupling::PerEdge(js) => {
                if g.edge_count() > config.max_edges {
                    return Err(CliError::Ceiling(format!(
                        "graph has {} edges, above the limit of {}",
                        g.edge_count(),
                        config.max_edges
                    )));
                }
                let vs: Vec<f64> = js.iter().map(|j| (beta * j).exp_m1()).collect();
                potts::partition_edge_weighted(&g, a.q, &vs)? * shift
            }
        },
    };
    Output::new("potts eval", a, &inputs, config)
        .emit(a.out.as_deref(), &format!("{}\n", format_g(value)))
}

fn thermo_sweep(a: &SweepArgs, config: TutteConfig) -> Result<(), CliError> {
    let mut inputs = Inputs::default();
    let g = inputs.graph(&a.graph)?;
    if a.points == 0 {
        return Err(usage("--points must be positive"));
    }
    if !(a.kappa > 0.0) {
        return Err(usage("--kappa must be positive"));
    }
    let params = PottsParams::from_temperature(a.q, a.j, a.t_min)?
        .with_hamiltonian(hamiltonian(a.hamiltonian))
        .with_kappa(a.kappa);
    let grid = thermo::linear_grid(a.t_min, a.t_max, a.points);
    let points = thermo::temperature_sweep_with(&g, &params, &grid, &config)?;
    Output::new("thermo sweep", a, &inputs, config)
        .emit(a.out.as_deref(), &thermo::sweep_csv(&points))
}

fn zeros_cmd(a: &ZerosArgs, config: TutteConfig) -> Result<(), CliError> {
    let mut inputs = Inputs::default();
    let g = inputs.graph(&a.graph)?;
    let fixed = a
        .fixed
        .as_deref()
        .map(|s| {
            s.trim()
                .parse::<Complex64>()
                .map_err(|_| usage(format!("--fixed: cannot parse {s:?} as a complex number")))
        })
        .transpose()?;
    let set = match (a.plane, fixed) {
        (Plane::Q, None) => zeros::chromatic_zeros_with(&g, &config)?,
        (Plane::Q, Some(v)) => zeros::partition_q_zeros_with(&g, v, &config)?,
        (Plane::V, Some(q)) => zeros::partition_v_zeros_with(&g, q, &config)?,
        (Plane::V, None) => return Err(usage("--plane v needs --fixed <q>")),
    };
    let mut csv = String::new();
    if a.fisher {
        let distances = zeros::fisher_circle_distance(&set.roots);
        csv.push_str("re,im,residual,fisher_distance\n");
        for ((r, res), d) in set.roots.iter().zip(&set.residuals).zip(distances) {
            csv.push_str(&format!(
                "{},{},{},{}\n",
                format_g(r.re),
                format_g(r.im),
                format_g(*res),
                format_g(d)
            ));
        }
    } else {
        csv = set.csv();
    }
    Output::new("zeros", a, &inputs, config).emit(a.out.as_deref(), &csv)
}

/// JSON number rounded to 12 significant digits; NaN becomes null.
fn num(x: f64) -> Value {
    format_g(x)
        .parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
        .map_or(Value::Null, Value::Number)
}

fn observables_json(o: &montecarlo::Observables) -> Value {
    json!({
        "mean_energy": num(o.mean_energy),
        "energy_std_error": num(o.energy_std_error),
        "specific_heat_estimate": num(o.specific_heat_estimate),
        "specific_heat_std_error": num(o.specific_heat_std_error),
        "order_parameter": num(o.order_parameter),
        "order_parameter_std_error": num(o.order_parameter_std_error),
        "integrated_autocorrelation_time": num(o.integrated_autocorrelation_time),
        "samples_used": o.samples_used,
        "bins": o.bins,
        "partial": o.partial,
    })
}

fn simulate(a: &SimulateArgs, config: TutteConfig) -> Result<(), CliError> {
    let mut inputs = Inputs::default();
    let g = inputs.graph(&a.graph)?;
    let algorithm = match a.algorithm {
        AlgorithmArg::Metropolis => Algorithm::Metropolis,
        AlgorithmArg::Heatbath => Algorithm::HeatBath,
        AlgorithmArg::Wolff => Algorithm::Wolff,
    };
    let mut sim = SimConfig::new(g.clone(), a.q, a.j.unwrap_or(1.0), a.t, algorithm);
    if let Some(path) = &a.weights {
        sim.coupling = Coupling::PerEdge(parse_weights(&inputs.text(path)?, &g)?);
    }
    sim.field = a.h;
    sim.field_spin = a.field_spin;
    sim.kappa = a.kappa;
    sim.hamiltonian = hamiltonian(a.hamiltonian);
    sim.sweeps = a.sweeps;
    sim.equilibration_sweeps = a.equil;
    sim.measure_every = a.measure_every;
    sim.seed = a.seed;
    sim.scan_order = match a.scan {
        ScanArg::Sequential => ScanOrder::Sequential,
        ScanArg::Random => ScanOrder::Random,
    };
    if let Some(s) = a.init_spin {
        sim.initial_state = InitialState::Uniform(s);
    }
    let summary = montecarlo::run_restarts(&sim, a.restarts)?;
    let first = &summary.runs[0];
    let mut report = json!({ "observables": observables_json(&first.observables) });
    if a.restarts > 1 {
        report["restarts"] = json!({
            "per_restart": summary.runs.iter().map(|r| observables_json(&r.observables)).collect::<Vec<_>>(),
            "combined_mean_energy": num(summary.mean_energy),
            "combined_energy_std_error": num(summary.energy_std_error),
            "max_deviation_sigma": num(summary.max_deviation_sigma),
        });
    }
    let output = Output::new("simulate", a, &inputs, config);
    if let Some(path) = &a.emit_series {
        output.emit(Some(path), &montecarlo::series_csv(&first.series))?;
    }
    let text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
    output.emit(a.out.as_deref(), &text)
}
