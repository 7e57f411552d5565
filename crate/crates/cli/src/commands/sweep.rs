use cfnet_core::repeater::Efficiencies;
use serde_json::{json, Map, Value};

use super::nums;
use super::repeater::{consistency_check, evaluate, COLUMNS};
use crate::args::{SweepArgs, Values};
use crate::report::{num, Cell, Report, Table};
use crate::CliError;

/// Cap on the number of records in one sweep.
pub const MAX_RECORDS: usize = 1_000_000;

const PARAM_COLUMNS: [&str; 8] = ["n", "gate_p", "node_p", "eta_d", "eta_m", "eta_t", "l0", "c"];

pub fn run(args: &SweepArgs) -> Result<Report, CliError> {
    let optional = [&args.eta_d, &args.eta_m, &args.eta_t];
    let any_range = args.n.is_range
        || [&args.gate_p, &args.node_p, &args.eta, &args.l0, &args.c]
            .iter()
            .any(|v| v.is_range)
        || optional.iter().any(|v| v.as_ref().is_some_and(|v| v.is_range));
    if !any_range {
        return Err(CliError::Usage(
            "sweep needs at least one parameter given as a range start..end[:step]".into(),
        ));
    }

    // Unset efficiency components follow --eta.
    let axis = |v: &Option<Values>| v.as_ref().map_or(1, |v| v.values.len());
    let lens = [
        args.n.values.len(),
        args.gate_p.values.len(),
        args.node_p.values.len(),
        args.eta.values.len(),
        axis(&args.eta_d),
        axis(&args.eta_m),
        axis(&args.eta_t),
        args.l0.values.len(),
        args.c.values.len(),
    ];
    let total = lens
        .iter()
        .try_fold(1usize, |acc, &l| acc.checked_mul(l).filter(|&t| t <= MAX_RECORDS));
    let Some(total) = total else {
        return Err(CliError::Usage(format!("sweep exceeds {MAX_RECORDS} records")));
    };

    let mut records = Vec::with_capacity(total);
    let mut idx = [0usize; 9];
    for _ in 0..total {
        let n = args.n.values[idx[0]];
        let gate_p = args.gate_p.values[idx[1]];
        let node_p = args.node_p.values[idx[2]];
        let eta = args.eta.values[idx[3]];
        let pick = |v: &Option<Values>, i: usize| v.as_ref().map_or(eta, |v| v.values[i]);
        let eff = Efficiencies {
            detection: pick(&args.eta_d, idx[4]),
            memory: pick(&args.eta_m, idx[5]),
            transmission: pick(&args.eta_t, idx[6]),
        };
        let (l0, c) = (args.l0.values[idx[7]], args.c.values[idx[8]]);
        let row = evaluate(n, &vec![gate_p; 2 * n + 2], &vec![node_p; 2 * n + 1], l0, c, &eff)?;
        records.push((gate_p, node_p, eff, l0, c, row));

        for axis in (0..9).rev() {
            idx[axis] += 1;
            if idx[axis] < lens[axis] {
                break;
            }
            idx[axis] = 0;
        }
    }

    let mut parameters = Map::new();
    parameters.insert("n".into(), json!(args.n.values));
    parameters.insert("gate_p".into(), nums(&args.gate_p.values));
    parameters.insert("node_p".into(), nums(&args.node_p.values));
    parameters.insert("eta".into(), nums(&args.eta.values));
    for (key, v) in ["eta_d", "eta_m", "eta_t"].into_iter().zip(optional) {
        parameters.insert(key.into(), v.as_ref().map_or(Value::Null, |v| nums(&v.values)));
    }
    parameters.insert("l0".into(), nums(&args.l0.values));
    parameters.insert("c".into(), nums(&args.c.values));

    let mut json_rows = Vec::with_capacity(total);
    let mut table_rows = Vec::with_capacity(total);
    for (gate_p, node_p, eff, l0, c, row) in &records {
        let params = [*gate_p, *node_p, eff.detection, eff.memory, eff.transmission, *l0, *c];
        let mut m = Map::new();
        m.insert("n".into(), json!(row.n));
        for (k, v) in PARAM_COLUMNS[1..].iter().zip(params) {
            m.insert((*k).into(), num(v));
        }
        row.insert_into(&mut m);
        json_rows.push(Value::Object(m));

        let mut cells = vec![Cell::Int(row.n as u64)];
        cells.extend(params.map(Cell::Num));
        cells.extend(row.cells());
        table_rows.push(cells);
    }
    let rows: Vec<_> = records.into_iter().map(|r| r.5).collect();

    Ok(Report {
        command: "sweep",
        parameters,
        results: json!({ "records": json_rows.len(), "rows": json_rows }),
        checks: consistency_check(&rows).into_iter().collect(),
        tables: vec![Table {
            title: "results",
            columns: PARAM_COLUMNS.iter().chain(&COLUMNS[1..]).copied().collect(),
            rows: table_rows,
        }],
    })
}
