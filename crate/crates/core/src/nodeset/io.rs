use std::io::{BufRead, Write};

use super::{Domain, NodeFlag, NodeSet};
use crate::{Error, Result};

/// Writes the plain-text node format: a short header followed by one
/// `x y flag` line per node, floats with 17 significant digits.
pub fn write_nodes<W: Write>(nodes: &NodeSet, mut out: W) -> Result<()> {
    writeln!(out, "# mkmesh node set")?;
    match nodes.domain {
        Domain::PeriodicRectangle { origin, size } => writeln!(
            out,
            "domain periodic-rectangle {:.16e} {:.16e} {:.16e} {:.16e}",
            origin[0], origin[1], size[0], size[1]
        )?,
        Domain::Disc { centre, radius } => {
            writeln!(out, "domain disc {:.16e} {:.16e} {:.16e}", centre[0], centre[1], radius)?
        }
    }
    writeln!(out, "spacing {:.16e}", nodes.spacing)?;
    writeln!(out, "seed {}", nodes.seed)?;
    writeln!(out, "count {}", nodes.len())?;
    for (p, f) in nodes.positions.iter().zip(&nodes.flags) {
        let flag = match f {
            NodeFlag::Interior => 0,
            NodeFlag::Dirichlet => 1,
        };
        writeln!(out, "{:.16e} {:.16e} {}", p[0], p[1], flag)?;
    }
    Ok(())
}

fn parse_f64(tok: Option<&str>, line: usize) -> Result<f64> {
    tok.ok_or_else(|| Error::Parse {
        line,
        message: "missing number".into(),
    })?
    .parse()
    .map_err(|e| Error::Parse {
        line,
        message: format!("{e}"),
    })
}

pub fn read_nodes<R: BufRead>(input: R) -> Result<NodeSet> {
    let mut domain = None;
    let mut spacing = None;
    let mut seed = 0u64;
    let mut count = None;
    let mut positions = Vec::new();
    let mut flags = Vec::new();

    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tok = line.split_whitespace();
        let head = tok.next().unwrap_or_default();
        match head {
            "domain" => {
                domain = Some(match tok.next() {
                    Some("periodic-rectangle") => Domain::PeriodicRectangle {
                        origin: [parse_f64(tok.next(), lineno)?, parse_f64(tok.next(), lineno)?],
                        size: [parse_f64(tok.next(), lineno)?, parse_f64(tok.next(), lineno)?],
                    },
                    Some("disc") => Domain::Disc {
                        centre: [parse_f64(tok.next(), lineno)?, parse_f64(tok.next(), lineno)?],
                        radius: parse_f64(tok.next(), lineno)?,
                    },
                    other => {
                        return Err(Error::Parse {
                            line: lineno,
                            message: format!("unknown domain kind {other:?}"),
                        })
                    }
                })
            }
            "spacing" => spacing = Some(parse_f64(tok.next(), lineno)?),
            "seed" => {
                seed = tok.next().and_then(|t| t.parse().ok()).ok_or(Error::Parse {
                    line: lineno,
                    message: "bad seed".into(),
                })?
            }
            "count" => {
                count = Some(tok.next().and_then(|t| t.parse::<usize>().ok()).ok_or(Error::Parse {
                    line: lineno,
                    message: "bad count".into(),
                })?)
            }
            _ => {
                let x = parse_f64(Some(head), lineno)?;
                let y = parse_f64(tok.next(), lineno)?;
                let flag = match tok.next() {
                    Some("0") => NodeFlag::Interior,
                    Some("1") => NodeFlag::Dirichlet,
                    other => {
                        return Err(Error::Parse {
                            line: lineno,
                            message: format!("bad boundary flag {other:?}"),
                        })
                    }
                };
                positions.push([x, y]);
                flags.push(flag);
            }
        }
    }

    let domain = domain.ok_or(Error::Parse {
        line: 0,
        message: "missing domain header".into(),
    })?;
    let spacing = spacing.ok_or(Error::Parse {
        line: 0,
        message: "missing spacing header".into(),
    })?;
    if let Some(c) = count {
        if c != positions.len() {
            return Err(Error::Parse {
                line: 0,
                message: format!("count {c} but {} nodes listed", positions.len()),
            });
        }
    }
    Ok(NodeSet {
        positions,
        spacing,
        domain,
        flags,
        seed,
    })
}
