use nalgebra::DMatrix;

use crate::nodeset::NodeSet;
use crate::weights::{Method, OperatorKind, WeightSet};
use crate::{Error, Result};

/// Sparse global operator in compressed-row form. Row `i` holds `w_ji` at
/// each neighbour `j` and `-Σ_j w_ji` on the diagonal, so every row sums to
/// zero.
#[derive(Clone, Debug)]
pub struct GlobalOperator {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
    pub operator: OperatorKind,
    pub method: Method,
}

/// Builds the global matrix of a weight set. Nodes with empty stencils give
/// empty rows.
pub fn assemble(nodes: &NodeSet, ws: &WeightSet) -> Result<GlobalOperator> {
    if ws.len() != nodes.len() {
        return Err(Error::InvalidInput(format!(
            "weights cover {} nodes, node set has {}",
            ws.len(),
            nodes.len()
        )));
    }
    ws.validate()?;
    let n = nodes.len();
    let nnz: usize = ws.stencils.iter().map(|s| s.len() + 1).sum();
    let mut row_ptr = Vec::with_capacity(n + 1);
    let mut cols = Vec::with_capacity(nnz);
    let mut vals = Vec::with_capacity(nnz);
    row_ptr.push(0);
    for i in 0..n {
        let st = &ws.stencils[i];
        if !st.is_empty() {
            let mut diag = 0.0;
            for (&j, &w) in st.neighbours.iter().zip(&ws.weights[i]) {
                cols.push(j);
                vals.push(w);
                diag -= w;
            }
            cols.push(i);
            vals.push(diag);
        }
        row_ptr.push(cols.len());
    }
    Ok(GlobalOperator {
        n,
        row_ptr,
        cols,
        vals,
        operator: ws.operator,
        method: ws.method,
    })
}

impl GlobalOperator {
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.cols[r.clone()], &self.vals[r])
    }

    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.n) {
            let (c, v) = self.row(i);
            *yi = c.iter().zip(v).map(|(&j, &w)| w * x[j]).sum();
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let (c, v) = self.row(i);
                c.iter().zip(v).filter(|(&j, _)| j == i).map(|(_, &w)| w).sum()
            })
            .collect()
    }

    /// Replaces row `i` by the identity row.
    pub fn set_identity_rows(&mut self, rows: &[usize]) {
        let mut is_id = vec![false; self.n];
        for &r in rows {
            is_id[r] = true;
        }
        let mut row_ptr = Vec::with_capacity(self.n + 1);
        let mut cols = Vec::with_capacity(self.cols.len());
        let mut vals = Vec::with_capacity(self.vals.len());
        row_ptr.push(0);
        for (i, &id) in is_id.iter().enumerate() {
            if id {
                cols.push(i);
                vals.push(1.0);
            } else {
                let (c, v) = self.row(i);
                cols.extend_from_slice(c);
                vals.extend_from_slice(v);
            }
            row_ptr.push(cols.len());
        }
        self.row_ptr = row_ptr;
        self.cols = cols;
        self.vals = vals;
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            let (c, v) = self.row(i);
            for (&j, &w) in c.iter().zip(v) {
                m[(i, j)] += w;
            }
        }
        m
    }

    /// Largest absolute row sum.
    pub fn max_row_sum(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).1.iter().sum::<f64>().abs())
            .fold(0.0, f64::max)
    }
}
