use std::fmt::Write;

use super::Problem;

/// CNF in DIMACS text. Variable `e*q + c + 1` means "edge `e` has color `c`".
/// Satisfiable exactly when the problem has a solution.
pub fn to_dimacs(p: &Problem) -> String {
    let q = p.q as usize;
    let var = |e: usize, c: usize| e * q + c + 1;
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    for e in 0..p.m {
        clauses.push((0..q).map(|c| var(e, c) as i64).collect());
        for a in 0..q {
            for b in a + 1..q {
                clauses.push(vec![-(var(e, a) as i64), -(var(e, b) as i64)]);
            }
        }
        if let Some(c) = p.fixed[e] {
            clauses.push(vec![var(e, c as usize) as i64]);
        }
    }
    for copy in &p.copies {
        for c in 0..q {
            clauses.push(copy.iter().map(|&e| -(var(e as usize, c) as i64)).collect());
        }
    }
    let mut out = String::new();
    writeln!(out, "c edge-coloring: var e*{q}+c+1 = edge e has color c").unwrap();
    writeln!(out, "p cnf {} {}", p.m * q, clauses.len()).unwrap();
    for cl in clauses {
        for lit in cl {
            write!(out, "{lit} ").unwrap();
        }
        out.push_str("0\n");
    }
    out
}
