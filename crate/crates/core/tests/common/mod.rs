//! Test-only helpers shared by integration targets.

use bpa_sat::cnf::CnfFormula;

/// Complete satisfiability check: DPLL with unit propagation, branching on
/// the first unassigned variable of a shortest open clause.
pub fn dpll_sat(f: &CnfFormula) -> bool {
    let clauses: Vec<Vec<i64>> = f.clauses().iter().map(|c| c.iter().map(|l| l.to_dimacs()).collect()).collect();
    let mut values = vec![0i8; f.num_vars() + 1];
    search(&clauses, &mut values)
}

fn value_of(values: &[i8], lit: i64) -> i8 {
    let v = values[lit.unsigned_abs() as usize];
    if lit < 0 {
        -v
    } else {
        v
    }
}

fn search(clauses: &[Vec<i64>], values: &mut Vec<i8>) -> bool {
    let mut trail = Vec::new();
    let ok = propagate(clauses, values, &mut trail);
    let result = ok
        && match branch_literal(clauses, values) {
            None => true,
            Some(lit) => [lit, -lit].into_iter().any(|l| {
                values[l.unsigned_abs() as usize] = if l > 0 { 1 } else { -1 };
                let sat = search(clauses, values);
                values[l.unsigned_abs() as usize] = 0;
                sat
            }),
        };
    for v in trail {
        values[v] = 0;
    }
    result
}

/// Assigns forced literals until fixpoint; false on a conflict.
fn propagate(clauses: &[Vec<i64>], values: &mut [i8], trail: &mut Vec<usize>) -> bool {
    loop {
        let mut changed = false;
        for c in clauses {
            let mut open = None;
            let mut n_open = 0;
            let mut satisfied = false;
            for &l in c {
                match value_of(values, l) {
                    1 => {
                        satisfied = true;
                        break;
                    }
                    0 => {
                        n_open += 1;
                        open = Some(l);
                    }
                    _ => {}
                }
            }
            if satisfied {
                continue;
            }
            match (n_open, open) {
                (0, _) => return false,
                (1, Some(l)) => {
                    let v = l.unsigned_abs() as usize;
                    values[v] = if l > 0 { 1 } else { -1 };
                    trail.push(v);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return true;
        }
    }
}

fn branch_literal(clauses: &[Vec<i64>], values: &[i8]) -> Option<i64> {
    clauses
        .iter()
        .filter(|c| !c.iter().any(|&l| value_of(values, l) == 1))
        .min_by_key(|c| c.iter().filter(|&&l| value_of(values, l) == 0).count())
        .and_then(|c| c.iter().copied().find(|&l| value_of(values, l) == 0))
}
