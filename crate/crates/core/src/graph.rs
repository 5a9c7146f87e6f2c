//! Bipartite check/variable graphs built from CNF formulas or binary
//! parity-check matrices.
//!
//! Edges live in one flat array with stable ids. Both adjacency directions are
//! stored in compressed (offset + id) form so the message engine can index
//! per-edge buffers directly.

use std::ops::Range;

use thiserror::Error;

use crate::cnf::{CnfFormula, Literal, Polarity};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("formula has no clauses")]
    NoClauses,
    #[error("row {0} of the parity-check matrix is all zero")]
    ZeroRow(usize),
    #[error("matrix entry ({row}, {col}) = {value} is not 0 or 1")]
    NonBinary { row: usize, col: usize, value: u8 },
    #[error("row {row} has {got} columns, expected {expected}")]
    RaggedRow { row: usize, expected: usize, got: usize },
    #[error("column index {col} out of range for {cols} columns")]
    ColumnOutOfRange { col: usize, cols: usize },
    #[error("duplicate entry ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },
}

/// How a variable participates in a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    /// Clause literal `v`.
    Positive,
    /// Clause literal `¬v`.
    Negated,
    /// XOR (parity-check) participation.
    Parity,
}

impl From<Polarity> for EdgeKind {
    fn from(p: Polarity) -> Self {
        match p {
            Polarity::Positive => EdgeKind::Positive,
            Polarity::Negated => EdgeKind::Negated,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    /// 0-based check (clause or parity row).
    pub check: usize,
    /// 0-based variable.
    pub var: usize,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Clauses,
    Parity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorGraph {
    num_vars: usize,
    num_checks: usize,
    kind: GraphKind,
    edges: Vec<Edge>,
    // Edges are emitted check by check, so check `i` owns the contiguous id
    // range `check_offsets[i]..check_offsets[i + 1]`.
    check_offsets: Vec<usize>,
    var_offsets: Vec<usize>,
    var_edge_ids: Vec<usize>,
}

impl FactorGraph {
    /// One check per clause; one edge per literal, carrying its polarity.
    pub fn from_cnf(formula: &CnfFormula) -> Result<Self, GraphError> {
        if formula.is_empty() {
            return Err(GraphError::NoClauses);
        }
        let rows = formula
            .clauses()
            .iter()
            .map(|clause| clause.iter().map(|l| (l.index(), EdgeKind::from(l.polarity()))).collect());
        Ok(Self::build(formula.num_vars(), GraphKind::Clauses, rows))
    }

    /// One parity check per row; an edge wherever the matrix holds a 1.
    pub fn from_parity_matrix(matrix: &ParityMatrix) -> Result<Self, GraphError> {
        if let Some(row) = matrix.rows.iter().position(|r| r.is_empty()) {
            return Err(GraphError::ZeroRow(row));
        }
        let rows = matrix.rows.iter().map(|r| r.iter().map(|&c| (c, EdgeKind::Parity)).collect());
        Ok(Self::build(matrix.cols, GraphKind::Parity, rows))
    }

    fn build(num_vars: usize, kind: GraphKind, rows: impl Iterator<Item = Vec<(usize, EdgeKind)>>) -> Self {
        let mut edges = Vec::new();
        let mut check_offsets = vec![0];
        for (check, row) in rows.enumerate() {
            edges.extend(row.into_iter().map(|(var, kind)| Edge { check, var, kind }));
            check_offsets.push(edges.len());
        }
        let num_checks = check_offsets.len() - 1;

        let mut var_offsets = vec![0usize; num_vars + 1];
        for e in &edges {
            var_offsets[e.var + 1] += 1;
        }
        for v in 0..num_vars {
            var_offsets[v + 1] += var_offsets[v];
        }
        let mut fill = var_offsets.clone();
        let mut var_edge_ids = vec![0; edges.len()];
        for (id, e) in edges.iter().enumerate() {
            var_edge_ids[fill[e.var]] = id;
            fill[e.var] += 1;
        }

        FactorGraph { num_vars, num_checks, kind, edges, check_offsets, var_offsets, var_edge_ids }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_checks(&self) -> usize {
        self.num_checks
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> Edge {
        self.edges[id]
    }

    /// Edge ids incident to `check`.
    pub fn check_edges(&self, check: usize) -> Range<usize> {
        self.check_offsets[check]..self.check_offsets[check + 1]
    }

    /// Edge ids incident to `var` (0-based), in increasing check order.
    pub fn var_edges(&self, var: usize) -> &[usize] {
        &self.var_edge_ids[self.var_offsets[var]..self.var_offsets[var + 1]]
    }

    pub fn check_degree(&self, check: usize) -> usize {
        self.check_edges(check).len()
    }

    pub fn var_degree(&self, var: usize) -> usize {
        self.var_offsets[var + 1] - self.var_offsets[var]
    }

    /// Clause literals read back from the edges of `check`, or `None` for a
    /// parity graph.
    pub fn clause_literals(&self, check: usize) -> Option<Vec<Literal>> {
        self.check_edges(check)
            .map(|id| {
                let e = self.edges[id];
                let var = e.var as u32 + 1;
                match e.kind {
                    EdgeKind::Positive => Some(Literal::positive(var)),
                    EdgeKind::Negated => Some(Literal::negated(var)),
                    EdgeKind::Parity => None,
                }
            })
            .collect()
    }

    /// Whether this graph is the one `from_cnf(formula)` would build.
    pub fn matches_formula(&self, formula: &CnfFormula) -> bool {
        self.kind == GraphKind::Clauses
            && self.num_vars == formula.num_vars()
            && self.num_checks == formula.num_clauses()
            && formula
                .clauses()
                .iter()
                .enumerate()
                .all(|(i, c)| self.clause_literals(i).as_deref() == Some(c.as_slice()))
    }
}

/// Sparse binary matrix: for each row, the sorted column indices holding a 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityMatrix {
    cols: usize,
    rows: Vec<Vec<usize>>,
}

impl ParityMatrix {
    pub fn from_rows(cols: usize, rows: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        let mut rows = rows;
        for (r, row) in rows.iter_mut().enumerate() {
            row.sort_unstable();
            if let Some(&col) = row.iter().find(|&&c| c >= cols) {
                return Err(GraphError::ColumnOutOfRange { col, cols });
            }
            if let Some(w) = row.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEntry { row: r, col: w[0] });
            }
        }
        Ok(ParityMatrix { cols, rows })
    }

    pub fn from_dense<R: AsRef<[u8]>>(dense: &[R]) -> Result<Self, GraphError> {
        let cols = dense.first().map_or(0, |r| r.as_ref().len());
        let mut rows = Vec::with_capacity(dense.len());
        for (r, row) in dense.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(GraphError::RaggedRow { row: r, expected: cols, got: row.len() });
            }
            let mut ones = Vec::new();
            for (c, &value) in row.iter().enumerate() {
                match value {
                    0 => {}
                    1 => ones.push(c),
                    _ => return Err(GraphError::NonBinary { row: r, col: c, value }),
                }
            }
            rows.push(ones);
        }
        Ok(ParityMatrix { cols, rows })
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn ones(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Column index lists, each sorted by row.
    pub fn columns(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.cols];
        for (r, row) in self.rows.iter().enumerate() {
            for &c in row {
                cols[c].push(r);
            }
        }
        cols
    }

    /// `word · Hᵀ` over GF(2), one bit per row.
    pub fn syndrome(&self, word: &[bool]) -> Vec<bool> {
        self.rows.iter().map(|row| row.iter().fold(false, |acc, &c| acc ^ word[c])).collect()
    }

    pub fn is_codeword(&self, word: &[bool]) -> bool {
        word.len() == self.cols && self.syndrome(word).iter().all(|&s| !s)
    }
}
