use cfnet_core::repeater::{
    self, build_chain, chunks, monte_carlo_range, ChainRunner, McAccumulator, McStats, MAX_CHAIN_N,
};
use cfnet_core::CfGateModel;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use super::nums;
use crate::args::MonteCarloArgs;
use crate::report::{num, Cell, Check, Report, Table};
use crate::CliError;

/// Largest |z| accepted between the simulated and analytic success rates.
pub const Z_LIMIT: f64 = 3.0;

/// Runs the trials in parallel. Chunks are reduced in index order, so the
/// result does not depend on the thread count.
pub fn simulate(runner: &ChainRunner, trials: u64, seed: u64) -> Result<McStats, CliError> {
    let ranges: Vec<_> = chunks(trials).collect();
    let parts = ranges
        .par_iter()
        .map(|&(start, end)| monte_carlo_range(runner, seed, start, end))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::internal)?;
    Ok(parts.iter().fold(McAccumulator::new(), |acc, p| acc.merge(p)).finish())
}

/// `(rate - p) / sqrt(p(1 - p)/N)`. With `p` at 0 or 1 the score is 0 on an
/// exact match and infinite otherwise.
pub fn z_score(rate: f64, p: f64, trials: u64) -> f64 {
    let se = (p * (1.0 - p) / trials as f64).sqrt();
    if se > 0.0 {
        (rate - p) / se
    } else if rate == p {
        0.0
    } else {
        f64::INFINITY
    }
}

pub fn run(args: &MonteCarloArgs) -> Result<Report, CliError> {
    if args.n > MAX_CHAIN_N {
        return Err(CliError::Usage(format!(
            "n = {} exceeds the statevector cap of {MAX_CHAIN_N} ({} qubits)",
            args.n,
            4 * MAX_CHAIN_N + 4
        )));
    }
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let gate = args
        .gate_p
        .expand(2 * args.n + 2, "--gate-p")
        .map_err(CliError::Usage)?;
    let models = gate
        .iter()
        .map(|&p| CfGateModel::new(p))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::usage)?;
    let topology = build_chain(args.n).map_err(CliError::usage)?;
    let runner = ChainRunner::new(topology, models, args.lobm.0).map_err(CliError::internal)?;

    let stats = simulate(&runner, args.trials, args.seed)?;
    let p = repeater::p_eff(args.n, &gate).map_err(CliError::usage)?;
    let z = z_score(stats.success_rate, p, args.trials);

    let [l1, l2] = args.lobm.0.distinguishable();
    let mut parameters = Map::new();
    parameters.insert("n".into(), json!(args.n));
    parameters.insert("gate_p".into(), nums(&args.gate_p.0));
    parameters.insert("lobm".into(), json!([l1.as_str(), l2.as_str()]));
    parameters.insert("trials".into(), json!(args.trials));
    parameters.insert("seed".into(), json!(args.seed));

    let b = stats.stage_breakdown;
    let fid = stats.mean_fidelity_given_success;
    let results = json!({
        "trials": stats.trials,
        "successes": stats.successes,
        "success_rate": num(stats.success_rate),
        "stderr": num(stats.stderr),
        "p_eff": num(p),
        "z_score": num(z),
        "stage_breakdown": { "gate": b.gate, "lobm": b.lobm, "none": b.none },
        "mean_fidelity_given_success": fid.map_or(Value::Null, num),
    });
    let table = Table {
        title: "results",
        columns: vec![
            "n",
            "trials",
            "successes",
            "success_rate",
            "stderr",
            "p_eff",
            "z_score",
            "gate_failures",
            "lobm_failures",
            "mean_fidelity_given_success",
        ],
        rows: vec![vec![
            Cell::Int(args.n as u64),
            Cell::Int(stats.trials),
            Cell::Int(stats.successes),
            Cell::Num(stats.success_rate),
            Cell::Num(stats.stderr),
            Cell::Num(p),
            if z.is_finite() {
                Cell::Num(z)
            } else {
                Cell::Text("inf".into())
            },
            Cell::Int(b.gate),
            Cell::Int(b.lobm),
            fid.map_or(Cell::Empty, Cell::Num),
        ]],
    };
    Ok(Report {
        command: "montecarlo",
        parameters,
        results,
        checks: vec![Check::near("z_score", 0.0, z, Z_LIMIT)],
        tables: vec![table],
    })
}
