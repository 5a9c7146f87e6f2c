//! DIMACS CNF reading and writing.
//!
//! The reader accepts `c` comment lines anywhere, exactly one `p cnf <vars>
//! <clauses>` header before the first clause, and clauses that may span lines.
//! A line starting with `%` ends the clause section (SATLIB's uniform random
//! files carry a `%` / `0` trailer).

use std::fmt::Write as _;
use std::io::Read;

use thiserror::Error;

use crate::cnf::{normalize_clause, CnfFormula, Literal, NormalizedClause};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("line {line}: malformed header `{text}`")]
    MalformedHeader { line: usize, text: String },
    #[error("line {line}: duplicate header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: invalid token `{token}`")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: literal {literal} exceeds declared variable count {num_vars}")]
    VariableOutOfRange { line: usize, literal: i64, num_vars: usize },
    #[error("line {line}: more clauses than the {declared} declared")]
    TooManyClauses { line: usize, declared: usize },
    #[error("final clause is not terminated by 0")]
    UnterminatedClause,
    /// The input contains a clause with no literals, which no assignment
    /// satisfies.
    #[error("line {line}: empty clause makes the formula trivially unsatisfiable")]
    TriviallyUnsat { line: usize },
    #[error("input is not valid UTF-8")]
    Encoding,
    #[error("read failed: {0}")]
    Io(String),
}

/// Parses DIMACS text into a normalized formula.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut tautologies = 0usize;
    let mut raw_clauses = 0usize;
    let mut current: Vec<Literal> = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::DuplicateHeader { line: lineno });
            }
            header = Some(parse_header(trimmed, lineno)?);
            continue;
        }
        let (num_vars, declared) = header.ok_or(DimacsError::MissingHeader)?;
        for token in trimmed.split_whitespace() {
            let value: i64 =
                token.parse().map_err(|_| DimacsError::InvalidToken { line: lineno, token: token.to_string() })?;
            if value == 0 {
                if current.is_empty() {
                    return Err(DimacsError::TriviallyUnsat { line: lineno });
                }
                raw_clauses += 1;
                if raw_clauses > declared {
                    return Err(DimacsError::TooManyClauses { line: lineno, declared });
                }
                match normalize_clause(&current) {
                    NormalizedClause::Clause(c) => clauses.push(c),
                    NormalizedClause::Tautology => tautologies += 1,
                }
                current.clear();
                continue;
            }
            if value.unsigned_abs() > num_vars as u64 {
                return Err(DimacsError::VariableOutOfRange { line: lineno, literal: value, num_vars });
            }
            current.push(Literal::from_dimacs(value).expect("nonzero, in range"));
        }
    }

    let (num_vars, _) = header.ok_or(DimacsError::MissingHeader)?;
    if !current.is_empty() {
        return Err(DimacsError::UnterminatedClause);
    }
    let formula = CnfFormula::new(num_vars, clauses).expect("clauses validated while parsing");
    Ok(formula.with_tautologies(tautologies))
}

fn parse_header(line: &str, lineno: usize) -> Result<(usize, usize), DimacsError> {
    let malformed = || DimacsError::MalformedHeader { line: lineno, text: line.to_string() };
    let fields: Vec<&str> = line.split_whitespace().collect();
    match fields.as_slice() {
        ["p", "cnf", vars, clauses] => {
            let vars = vars.parse().map_err(|_| malformed())?;
            let clauses = clauses.parse().map_err(|_| malformed())?;
            Ok((vars, clauses))
        }
        _ => Err(malformed()),
    }
}

/// Reads a full DIMACS stream.
pub fn read_dimacs<R: Read>(mut reader: R) -> Result<CnfFormula, DimacsError> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes).map_err(|e| DimacsError::Io(e.to_string()))?;
    let text = String::from_utf8(bytes).map_err(|_| DimacsError::Encoding)?;
    parse_dimacs(&text)
}

/// Serializes a formula, one clause per line. Dropped tautologies are not
/// written back.
pub fn write_dimacs(formula: &CnfFormula) -> String {
    let mut out = String::new();
    writeln!(out, "p cnf {} {}", formula.num_vars(), formula.num_clauses()).unwrap();
    for clause in formula.clauses() {
        for lit in clause {
            write!(out, "{} ", lit).unwrap();
        }
        out.push_str("0\n");
    }
    out
}
