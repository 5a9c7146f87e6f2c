//! CNF data model: literals, clauses, formulas, assignments and verification.

use std::fmt;

use thiserror::Error;

/// Largest variable count [`CnfFormula::count_models`] will enumerate.
pub const MODEL_COUNT_LIMIT: usize = 26;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("assignment covers {got} variables but the formula has {expected}")]
    AssignmentSize { expected: usize, got: usize },
    #[error("literal references variable {var} but the formula has {num_vars} variables")]
    VariableOutOfRange { var: u32, num_vars: usize },
    #[error("empty clause at index {0}")]
    EmptyClause(usize),
    #[error("model counting is limited to {MODEL_COUNT_LIMIT} variables, formula has {0}")]
    TooManyVariables(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Positive,
    Negated,
}

impl Polarity {
    /// The variable value that makes a literal of this polarity true.
    #[inline]
    pub fn satisfying_value(self) -> bool {
        matches!(self, Polarity::Positive)
    }
}

/// A variable (1-based, as in DIMACS) together with its polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    var: u32,
    polarity: Polarity,
}

impl Literal {
    /// # Panics
    ///
    /// If `var` is zero.
    pub fn new(var: u32, polarity: Polarity) -> Self {
        assert!(var >= 1, "variables are 1-based");
        Literal { var, polarity }
    }

    pub fn positive(var: u32) -> Self {
        Literal::new(var, Polarity::Positive)
    }

    pub fn negated(var: u32) -> Self {
        Literal::new(var, Polarity::Negated)
    }

    /// Builds a literal from its DIMACS integer. Returns `None` for 0.
    pub fn from_dimacs(value: i64) -> Option<Self> {
        if value == 0 || value.unsigned_abs() > u64::from(u32::MAX) {
            return None;
        }
        let var = value.unsigned_abs() as u32;
        let polarity = if value > 0 { Polarity::Positive } else { Polarity::Negated };
        Some(Literal { var, polarity })
    }

    pub fn to_dimacs(self) -> i64 {
        match self.polarity {
            Polarity::Positive => i64::from(self.var),
            Polarity::Negated => -i64::from(self.var),
        }
    }

    /// 1-based variable index.
    #[inline]
    pub fn var(self) -> u32 {
        self.var
    }

    /// 0-based variable index.
    #[inline]
    pub fn index(self) -> usize {
        self.var as usize - 1
    }

    #[inline]
    pub fn polarity(self) -> Polarity {
        self.polarity
    }

    #[inline]
    pub fn is_negated(self) -> bool {
        self.polarity == Polarity::Negated
    }

    #[inline]
    pub fn is_true_under(self, value: bool) -> bool {
        value == self.polarity.satisfying_value()
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of literals. Normalized clauses are non-empty, free of
/// duplicate literals and never contain both polarities of one variable.
pub type Clause = Vec<Literal>;

/// Result of normalizing a single raw clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalizedClause {
    Clause(Clause),
    Tautology,
}

/// Removes duplicate literals (keeping first occurrence order) and detects
/// tautologies.
pub fn normalize_clause(raw: &[Literal]) -> NormalizedClause {
    let mut out: Clause = Vec::with_capacity(raw.len());
    for &lit in raw {
        if out.iter().any(|l| l.var == lit.var && l.polarity != lit.polarity) {
            return NormalizedClause::Tautology;
        }
        if !out.contains(&lit) {
            out.push(lit);
        }
    }
    NormalizedClause::Clause(out)
}

/// A normalized CNF formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Clause>,
    tautologies_dropped: usize,
}

impl CnfFormula {
    /// Normalizes `clauses` and builds a formula over `num_vars` variables.
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self, FormulaError> {
        let mut kept = Vec::with_capacity(clauses.len());
        let mut tautologies = 0;
        for (idx, clause) in clauses.into_iter().enumerate() {
            if clause.is_empty() {
                return Err(FormulaError::EmptyClause(idx));
            }
            if let Some(lit) = clause.iter().find(|l| l.var as usize > num_vars) {
                return Err(FormulaError::VariableOutOfRange { var: lit.var, num_vars });
            }
            match normalize_clause(&clause) {
                NormalizedClause::Clause(c) => kept.push(c),
                NormalizedClause::Tautology => tautologies += 1,
            }
        }
        Ok(CnfFormula { num_vars, clauses: kept, tautologies_dropped: tautologies })
    }

    /// Convenience constructor from DIMACS-style signed integers.
    ///
    /// # Panics
    ///
    /// If any literal is 0.
    pub fn from_dimacs_clauses(num_vars: usize, clauses: &[&[i64]]) -> Result<Self, FormulaError> {
        let clauses = clauses
            .iter()
            .map(|c| c.iter().map(|&l| Literal::from_dimacs(l).expect("nonzero literal")).collect())
            .collect();
        CnfFormula::new(num_vars, clauses)
    }

    pub(crate) fn with_tautologies(mut self, count: usize) -> Self {
        self.tautologies_dropped += count;
        self
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Number of tautological clauses removed during normalization.
    pub fn tautologies_dropped(&self) -> usize {
        self.tautologies_dropped
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Checks `assignment` against every clause, reporting the first
    /// falsified clause (0-based).
    pub fn verify(&self, assignment: &Assignment) -> Result<Verdict, FormulaError> {
        if assignment.len() != self.num_vars {
            return Err(FormulaError::AssignmentSize { expected: self.num_vars, got: assignment.len() });
        }
        for (idx, clause) in self.clauses.iter().enumerate() {
            if !clause.iter().any(|&l| l.is_true_under(assignment.value(l.var))) {
                return Ok(Verdict::Falsified { clause: idx });
            }
        }
        Ok(Verdict::Satisfied)
    }

    /// Exact number of satisfying assignments, by enumeration.
    pub fn count_models(&self) -> Result<u64, FormulaError> {
        Ok(self.enumerate_models()?.count() as u64)
    }

    /// Whether any assignment satisfies the formula, by enumeration up to the
    /// first model.
    pub fn has_model(&self) -> Result<bool, FormulaError> {
        Ok(self.enumerate_models()?.next().is_some())
    }

    /// Satisfying assignments as bit masks (bit `k` is variable `k + 1`).
    fn enumerate_models(&self) -> Result<impl Iterator<Item = u64> + '_, FormulaError> {
        if self.num_vars > MODEL_COUNT_LIMIT {
            return Err(FormulaError::TooManyVariables(self.num_vars));
        }
        // (positive mask, negated mask) per clause; bit k is variable k+1.
        let masks: Vec<(u32, u32)> = self
            .clauses
            .iter()
            .map(|c| {
                c.iter().fold((0u32, 0u32), |(p, n), l| match l.polarity {
                    Polarity::Positive => (p | 1 << l.index(), n),
                    Polarity::Negated => (p, n | 1 << l.index()),
                })
            })
            .collect();
        let total: u64 = 1 << self.num_vars;
        Ok((0..total).filter(move |&bits| {
            let bits = bits as u32;
            masks.iter().all(|&(p, n)| (bits & p) != 0 || (!bits & n) != 0)
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Satisfied,
    /// `clause` is the 0-based index of the first clause with no true literal.
    Falsified {
        clause: usize,
    },
}

impl Verdict {
    pub fn is_satisfied(self) -> bool {
        self == Verdict::Satisfied
    }
}

/// One Boolean value per variable, indexed 1-based through [`Assignment::value`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn all_false(num_vars: usize) -> Self {
        Assignment { values: vec![false; num_vars] }
    }

    pub fn from_bits(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    /// Assignment whose bit `k` is variable `k + 1`.
    pub fn from_index(num_vars: usize, bits: u64) -> Self {
        Assignment { values: (0..num_vars).map(|k| bits >> k & 1 == 1).collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value of the 1-based variable `var`.
    #[inline]
    pub fn value(&self, var: u32) -> bool {
        self.values[var as usize - 1]
    }

    pub fn set(&mut self, var: u32, value: bool) {
        self.values[var as usize - 1] = value;
    }

    pub fn bits(&self) -> &[bool] {
        &self.values
    }

    /// `0`/`1` string, variable 1 first.
    pub fn to_bit_string(&self) -> String {
        self.values.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn from_bit_string(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Assignment::from_bits)
    }

    /// DIMACS-style model line content: `1 -2 3 ...`.
    pub fn to_dimacs_literals(&self) -> Vec<i64> {
        self.values.iter().enumerate().map(|(k, &b)| if b { k as i64 + 1 } else { -(k as i64 + 1) }).collect()
    }
}
