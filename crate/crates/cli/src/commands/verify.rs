use cfnet_core::protocol::{
    self, checkpoint_states, expected_checkpoint, expected_photon_branch, Checkpoint, PhotonInput,
};
use cfnet_core::repeater::chunks;
use cfnet_core::rng::trial_stream;
use cfnet_core::{BellOutcome, CfGateModel, Complex64, StateVector};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::args::VerifyArgs;
use crate::report::{num, Cell, Check, Report, Table};
use crate::CliError;

/// Tolerance on amplitudes, probabilities and concurrences.
pub const EXACT_TOL: f64 = 1e-10;
/// Sampled frequencies must lie within this many binomial standard errors.
pub const SAMPLING_SIGMAS: f64 = 4.0;

const AMP_CUTOFF: f64 = 1e-12;

fn pair(z: Complex64) -> Value {
    json!([num(z.re), num(z.im)])
}

fn basis(index: usize, qubits: usize) -> String {
    (0..qubits)
        .rev()
        .map(|b| if index >> b & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Photon-pair amplitudes left after projecting the electrons onto `outcome`.
fn photon_amplitudes(state: &StateVector, outcome: BellOutcome) -> Vec<Complex64> {
    let v = outcome.vector();
    let amps = state.amplitudes();
    (0..4)
        .map(|ab| (0..4).map(|q| v[q].conj() * amps[(q << 2) | ab]).sum())
        .collect()
}

/// Pure two-qubit concurrence `2|ad - bc|`.
fn pure_concurrence(a: &[Complex64]) -> f64 {
    2.0 * (a[0] * a[3] - a[1] * a[2]).norm()
}

struct Comparison {
    rows: Vec<Vec<Cell>>,
    json: Vec<Value>,
}

fn compare(label: &str, branch: &str, expected: &[Complex64], computed: &[Complex64], qubits: usize) -> Comparison {
    let mut rows = Vec::new();
    let mut json = Vec::new();
    for (i, (e, c)) in expected.iter().zip(computed).enumerate() {
        if e.norm() <= AMP_CUTOFF && c.norm() <= AMP_CUTOFF {
            continue;
        }
        let b = basis(i, qubits);
        rows.push(vec![
            Cell::Text(label.into()),
            Cell::Text(branch.into()),
            Cell::Text(b.clone()),
            Cell::Num(e.re),
            Cell::Num(e.im),
            Cell::Num(c.re),
            Cell::Num(c.im),
        ]);
        json.push(json!({ "basis": b, "expected": pair(*e), "computed": pair(*c) }));
    }
    Comparison { rows, json }
}

#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    counts: [u64; 4],
    aborted: u64,
    structure_violations: u64,
    max_concurrence_gap: f64,
}

impl Tally {
    fn merge(mut self, o: &Tally) -> Tally {
        for (a, b) in self.counts.iter_mut().zip(o.counts) {
            *a += b;
        }
        self.aborted += o.aborted;
        self.structure_violations += o.structure_violations;
        self.max_concurrence_gap = self.max_concurrence_gap.max(o.max_concurrence_gap);
        self
    }
}

fn sample(
    photons: &[PhotonInput; 2],
    model: &CfGateModel,
    expected_concurrence: &[f64; 4],
    trials: u64,
    seed: u64,
) -> Result<Tally, CliError> {
    let ranges: Vec<_> = chunks(trials).collect();
    let parts = ranges
        .par_iter()
        .map(|&(start, end)| {
            let mut t = Tally::default();
            for i in start..end {
                let r = protocol::run_transmission_with(photons, model, &mut trial_stream(seed, i))?;
                t.structure_violations += u64::from(!r.counterfactual_structure_ok);
                match (r.electron_outcome, r.photon_concurrence) {
                    (Some(o), Some(c)) => {
                        t.counts[o.index()] += 1;
                        let gap = (c - expected_concurrence[o.index()]).abs();
                        t.max_concurrence_gap = t.max_concurrence_gap.max(gap);
                    }
                    _ => t.aborted += 1,
                }
            }
            Ok(t)
        })
        .collect::<Result<Vec<_>, cfnet_core::Error>>()
        .map_err(CliError::internal)?;
    Ok(parts.iter().fold(Tally::default(), |a, p| a.merge(p)))
}

fn frequency_check(name: String, expected: f64, hits: u64, total: u64) -> Check {
    let tol = SAMPLING_SIGMAS * (expected * (1.0 - expected) / total as f64).sqrt();
    Check::near(name, expected, hits as f64 / total as f64, tol)
}

pub fn run(args: &VerifyArgs) -> Result<Report, CliError> {
    let model = CfGateModel::new(args.gate_p).map_err(CliError::usage)?;
    let seed = match (args.trials, args.seed) {
        (0, s) => s,
        (_, Some(s)) => Some(s),
        (_, None) => return Err(CliError::Usage("--seed is required when --trials is nonzero".into())),
    };
    let photons = args.pol.photons();
    let cps = checkpoint_states(&photons).map_err(CliError::internal)?;

    let mut checks = Vec::new();
    let mut amp_rows = Vec::new();
    let mut checkpoints_json = Vec::new();
    for (cp, name) in [(Checkpoint::T0, "T0"), (Checkpoint::T1, "T1"), (Checkpoint::T2, "T2")] {
        let expected = expected_checkpoint(cp, &photons).map_err(CliError::internal)?;
        let computed = cps.get(cp);
        let dev = computed.distance_up_to_phase(&expected).map_err(CliError::internal)?;
        let cmp = compare(name, "", expected.amplitudes(), computed.amplitudes(), 4);
        amp_rows.extend(cmp.rows);
        checkpoints_json.push(json!({ "name": name, "deviation": num(dev), "amplitudes": cmp.json }));
        checks.push(Check::near(
            format!("{}_state", name.to_lowercase()),
            0.0,
            dev,
            EXACT_TOL,
        ));
    }

    let mut branches_json = Vec::new();
    let mut branch_rows = Vec::new();
    let mut expected_probs = [0.0; 4];
    let mut expected_conc = [0.0; 4];
    for outcome in BellOutcome::ALL {
        let expected = expected_photon_branch(outcome, &photons).map_err(CliError::internal)?;
        let computed = cps.t3.iter().find(|b| b.outcome == outcome);
        let exp_p = expected.as_ref().map_or(0.0, |e| e.0);
        let got_p = computed.map_or(0.0, |b| b.probability);
        expected_probs[outcome.index()] = exp_p;
        let name = outcome.as_str();
        checks.push(Check::near(format!("t3_{name}_probability"), exp_p, got_p, EXACT_TOL));

        let mut entry = Map::new();
        entry.insert("outcome".into(), json!(name));
        entry.insert("expected_probability".into(), num(exp_p));
        entry.insert("probability".into(), num(got_p));
        let mut conc_cells = [Cell::Empty, Cell::Empty];
        if let (Some((_, exp_state)), Some(branch)) = (&expected, computed) {
            let got = photon_amplitudes(&branch.state, outcome);
            let labels = exp_state.labels().to_vec();
            let got_state = StateVector::from_amplitudes(labels, got.clone()).map_err(CliError::internal)?;
            let dev = got_state.distance_up_to_phase(exp_state).map_err(CliError::internal)?;
            checks.push(Check::near(format!("t3_{name}_photon_state"), 0.0, dev, EXACT_TOL));
            let exp_c = pure_concurrence(exp_state.amplitudes());
            expected_conc[outcome.index()] = exp_c;
            checks.push(Check::near(
                format!("t3_{name}_concurrence"),
                exp_c,
                branch.photon_concurrence,
                EXACT_TOL,
            ));
            let cmp = compare("T3", name, exp_state.amplitudes(), &got, 2);
            amp_rows.extend(cmp.rows);
            entry.insert("expected_concurrence".into(), num(exp_c));
            entry.insert("concurrence".into(), num(branch.photon_concurrence));
            entry.insert("photon_amplitudes".into(), Value::Array(cmp.json));
            conc_cells = [Cell::Num(exp_c), Cell::Num(branch.photon_concurrence)];
        }
        branches_json.push(Value::Object(entry));
        let [ec, cc] = conc_cells;
        branch_rows.push(vec![
            Cell::Text(name.into()),
            Cell::Num(exp_p),
            Cell::Num(got_p),
            ec,
            cc,
        ]);
    }

    let mut results = Map::new();
    results.insert("checkpoints".into(), Value::Array(checkpoints_json));
    results.insert("branches".into(), Value::Array(branches_json));

    let mut tables = vec![
        Table {
            title: "amplitudes",
            columns: vec![
                "checkpoint",
                "branch",
                "basis",
                "expected_re",
                "expected_im",
                "computed_re",
                "computed_im",
            ],
            rows: amp_rows,
        },
        Table {
            title: "branches",
            columns: vec![
                "outcome",
                "expected_probability",
                "probability",
                "expected_concurrence",
                "concurrence",
            ],
            rows: branch_rows,
        },
    ];

    if let Some(seed) = seed.filter(|_| args.trials > 0) {
        let tally = sample(&photons, &model, &expected_conc, args.trials, seed)?;
        let completed = args.trials - tally.aborted;
        let p_ok = args.gate_p * args.gate_p;
        checks.push(frequency_check(
            "abort_frequency".into(),
            1.0 - p_ok,
            tally.aborted,
            args.trials,
        ));
        if completed > 0 {
            for o in BellOutcome::ALL {
                let name = format!("{}_frequency", o.as_str());
                checks.push(frequency_check(
                    name,
                    expected_probs[o.index()],
                    tally.counts[o.index()],
                    completed,
                ));
            }
            checks.push(Check::near(
                "sampled_concurrence",
                0.0,
                tally.max_concurrence_gap,
                EXACT_TOL,
            ));
        }
        checks.push(Check::flag(
            "counterfactual_structure",
            true,
            tally.structure_violations == 0,
        ));

        let mut counts = Map::new();
        let mut freqs = Map::new();
        let mut stat_rows = Vec::new();
        for o in BellOutcome::ALL {
            let c = tally.counts[o.index()];
            let f = if completed > 0 {
                c as f64 / completed as f64
            } else {
                0.0
            };
            counts.insert(o.as_str().into(), json!(c));
            freqs.insert(o.as_str().into(), num(f));
            stat_rows.push(vec![
                Cell::Text(o.as_str().into()),
                Cell::Int(c),
                Cell::Num(f),
                Cell::Num(expected_probs[o.index()]),
            ]);
        }
        results.insert(
            "statistics".into(),
            json!({
                "trials": args.trials,
                "completed": completed,
                "aborted": tally.aborted,
                "counts": counts,
                "frequencies": freqs,
                "max_concurrence_deviation": num(tally.max_concurrence_gap),
                "structure_violations": tally.structure_violations,
            }),
        );
        tables.push(Table {
            title: "sampled outcomes",
            columns: vec!["outcome", "count", "frequency", "probability"],
            rows: stat_rows,
        });
    }

    let mut parameters = Map::new();
    parameters.insert("pol".into(), json!(args.pol.code()));
    parameters.insert("trials".into(), json!(args.trials));
    parameters.insert("seed".into(), seed.map_or(Value::Null, |s| json!(s)));
    parameters.insert("gate_p".into(), num(args.gate_p));

    Ok(Report {
        command: "verify",
        parameters,
        results: Value::Object(results),
        checks,
        tables,
    })
}
