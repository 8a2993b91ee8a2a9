use std::io::{BufRead, Write};
use std::sync::Arc;

use super::{Method, OperatorKind, WeightSet};
use crate::nodeset::{NodeSet, Stencil};
use crate::{Error, Result};

fn join<T: std::fmt::Display>(items: impl Iterator<Item = T>) -> String {
    items.map(|v| v.to_string()).collect::<Vec<_>>().join(";")
}

/// CSV dump: comment lines with the method, operator and order, then one
/// `node,count,neighbours,weights,condition` record per node with
/// `;`-separated lists.
pub fn write_weights<W: Write>(ws: &WeightSet, mut out: W) -> Result<()> {
    writeln!(out, "# method {}", ws.method.name())?;
    writeln!(out, "# operator {}", ws.operator.name())?;
    writeln!(out, "# order {}", ws.order)?;
    writeln!(out, "node,count,neighbours,weights,condition")?;
    for (i, (st, w)) in ws.stencils.iter().zip(&ws.weights).enumerate() {
        writeln!(
            out,
            "{i},{},{},{},{:e}",
            st.len(),
            join(st.neighbours.iter()),
            join(w.iter().map(|v| format!("{v:e}"))),
            ws.conditions[i]
        )?;
    }
    Ok(())
}

fn parse_list<T: std::str::FromStr>(field: &str, line: usize) -> Result<Vec<T>> {
    if field.is_empty() {
        return Ok(Vec::new());
    }
    field
        .split(';')
        .map(|t| {
            t.parse().map_err(|_| Error::Parse {
                line,
                message: format!("bad list entry {t:?}"),
            })
        })
        .collect()
}

/// Reads a dump written by [`write_weights`]; offsets are recomputed from
/// `nodes`.
pub fn read_weights<R: BufRead>(input: R, nodes: &NodeSet) -> Result<WeightSet> {
    let mut method = None;
    let mut operator = None;
    let mut order = 0usize;
    let mut stencils = Vec::new();
    let mut weights = Vec::new();
    let mut conditions = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let bad = |message: String| Error::Parse { line: lineno, message };
        if let Some(meta) = line.strip_prefix("# ") {
            let (key, value) = meta.split_once(' ').unwrap_or((meta, ""));
            match key {
                "method" => method = Some(Method::parse(value)?),
                "operator" => operator = Some(OperatorKind::parse(value)?),
                "order" => order = value.parse().map_err(|_| bad("bad order".into()))?,
                _ => {}
            }
            continue;
        }
        if line.is_empty() || line.starts_with("node,") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(bad(format!("expected 5 fields, got {}", fields.len())));
        }
        let node: usize = fields[0].parse().map_err(|_| bad("bad node index".into()))?;
        if node != stencils.len() || node >= nodes.len() {
            return Err(bad(format!("unexpected node index {node}")));
        }
        let neighbours: Vec<usize> = parse_list(fields[2], lineno)?;
        let w: Vec<f64> = parse_list(fields[3], lineno)?;
        let count: usize = fields[1].parse().map_err(|_| bad("bad count".into()))?;
        if neighbours.len() != count || w.len() != count {
            return Err(Error::StencilMismatch { node });
        }
        if let Some(&j) = neighbours.iter().find(|&&j| j >= nodes.len()) {
            return Err(bad(format!("neighbour {j} out of range")));
        }
        let pi = nodes.positions[node];
        stencils.push(Stencil {
            centre: node,
            offsets: neighbours
                .iter()
                .map(|&j| nodes.domain.offset(pi, nodes.positions[j]))
                .collect(),
            neighbours,
        });
        weights.push(w);
        conditions.push(fields[4].parse().map_err(|_| bad("bad condition".into()))?);
    }
    if stencils.len() != nodes.len() {
        return Err(Error::Parse {
            line: 0,
            message: format!("{} records for {} nodes", stencils.len(), nodes.len()),
        });
    }
    let missing = |what: &str| Error::Parse {
        line: 0,
        message: format!("missing {what} header"),
    };
    Ok(WeightSet {
        method: method.ok_or_else(|| missing("method"))?,
        operator: operator.ok_or_else(|| missing("operator"))?,
        order,
        stencils: Arc::new(stencils),
        weights,
        conditions,
    })
}
