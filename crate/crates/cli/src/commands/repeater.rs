use cfnet_core::repeater::{consistency_residual, p_eff, t_tot_eff, t_tot_nodes, Efficiencies};
use cfnet_core::{Error, Result as CoreResult};
use serde_json::{json, Map, Value};

use super::nums;
use crate::args::{LinkArgs, RepeaterArgs};
use crate::report::{num, Cell, Check, Report, Table};
use crate::CliError;

/// Residual tolerance between the two distribution-time formulas.
pub const CONSISTENCY_TOL: f64 = 1e-12;

pub const COLUMNS: [&str; 5] = ["n", "p_eff", "t_tot_nodes", "t_tot_eff", "consistency_residual"];

/// Figures of one chain configuration; `None` marks a divergent value.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub n: usize,
    pub p_eff: f64,
    pub t_tot_nodes: Option<f64>,
    pub t_tot_eff: Option<f64>,
    pub consistency_residual: Option<f64>,
}

fn divergent_or(r: CoreResult<f64>) -> Result<Option<f64>, CliError> {
    match r {
        Ok(v) if v.is_finite() => Ok(Some(v)),
        Ok(_) | Err(Error::Divergence(_)) => Ok(None),
        Err(e) => Err(CliError::usage(e)),
    }
}

pub fn evaluate(n: usize, gate: &[f64], node: &[f64], l0: f64, c: f64, eff: &Efficiencies) -> Result<Row, CliError> {
    Ok(Row {
        n,
        p_eff: p_eff(n, gate).map_err(CliError::usage)?,
        t_tot_nodes: divergent_or(t_tot_nodes(n, l0, c, node))?,
        t_tot_eff: divergent_or(t_tot_eff(n, l0, c, eff))?,
        consistency_residual: divergent_or(consistency_residual(n, l0, c, eff))?,
    })
}

impl Row {
    pub fn divergent(&self) -> Vec<&'static str> {
        [
            ("t_tot_nodes", self.t_tot_nodes),
            ("t_tot_eff", self.t_tot_eff),
            ("consistency_residual", self.consistency_residual),
        ]
        .into_iter()
        .filter(|(_, v)| v.is_none())
        .map(|(k, _)| k)
        .collect()
    }

    /// Result fields after `n`, in column order.
    pub fn insert_into(&self, m: &mut Map<String, Value>) {
        m.insert("p_eff".into(), num(self.p_eff));
        m.insert("t_tot_nodes".into(), self.t_tot_nodes.map_or(Value::Null, num));
        m.insert("t_tot_eff".into(), self.t_tot_eff.map_or(Value::Null, num));
        m.insert(
            "consistency_residual".into(),
            self.consistency_residual.map_or(Value::Null, num),
        );
        m.insert("divergent".into(), json!(self.divergent()));
    }

    pub fn cells(&self) -> Vec<Cell> {
        let opt = |v: Option<f64>| v.map_or(Cell::Divergent, Cell::Num);
        vec![
            Cell::Num(self.p_eff),
            opt(self.t_tot_nodes),
            opt(self.t_tot_eff),
            opt(self.consistency_residual),
        ]
    }
}

pub fn efficiencies(link: &LinkArgs) -> Efficiencies {
    Efficiencies {
        detection: link.eta_d.unwrap_or(link.eta),
        memory: link.eta_m.unwrap_or(link.eta),
        transmission: link.eta_t.unwrap_or(link.eta),
    }
}

/// Single check on the largest finite consistency residual, if any.
pub fn consistency_check(rows: &[Row]) -> Option<Check> {
    let worst = rows.iter().filter_map(|r| r.consistency_residual).reduce(f64::max)?;
    Some(Check::near("max_consistency_residual", 0.0, worst, CONSISTENCY_TOL))
}

pub fn run(args: &RepeaterArgs) -> Result<Report, CliError> {
    let eff = efficiencies(&args.link);
    let mut rows = Vec::with_capacity(args.n.values.len());
    for &n in &args.n.values {
        let gate = args.gate_p.expand(2 * n + 2, "--gate-p").map_err(CliError::Usage)?;
        let node = args.node_p.expand(2 * n + 1, "--node-p").map_err(CliError::Usage)?;
        rows.push(evaluate(n, &gate, &node, args.link.l0, args.link.c, &eff)?);
    }

    let mut parameters = Map::new();
    parameters.insert("n".into(), json!(args.n.values));
    parameters.insert("gate_p".into(), nums(&args.gate_p.0));
    parameters.insert("node_p".into(), nums(&args.node_p.0));
    parameters.insert("eta_d".into(), num(eff.detection));
    parameters.insert("eta_m".into(), num(eff.memory));
    parameters.insert("eta_t".into(), num(eff.transmission));
    parameters.insert("l0".into(), num(args.link.l0));
    parameters.insert("c".into(), num(args.link.c));

    let json_rows = rows
        .iter()
        .map(|r| {
            let mut m = Map::new();
            m.insert("n".into(), json!(r.n));
            r.insert_into(&mut m);
            Value::Object(m)
        })
        .collect();
    let table = Table {
        title: "results",
        columns: COLUMNS.to_vec(),
        rows: rows
            .iter()
            .map(|r| {
                let mut cells = vec![Cell::Int(r.n as u64)];
                cells.extend(r.cells());
                cells
            })
            .collect(),
    };
    Ok(Report {
        command: "repeater",
        parameters,
        results: json!({ "rows": Value::Array(json_rows) }),
        checks: consistency_check(&rows).into_iter().collect(),
        tables: vec![table],
    })
}
