//! DIMACS CNF reader/writer. Emission is canonical (one clause per line,
//! literals space-separated, 0-terminated) and parsing accepts comments
//! and clauses split across lines, so emit∘parse∘emit is the identity.

use crate::error::{Error, Result};

use super::CnfFormula;

/// Serializes a formula as DIMACS CNF.
pub fn emit_cnf(f: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", f.var_count(), f.clause_count());
    for clause in f.clauses() {
        for l in clause {
            out.push_str(&l.to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}

/// Parses DIMACS CNF: `c` comment lines, one `p cnf <vars> <clauses>`
/// header, then 0-terminated clauses (line breaks are insignificant).
pub fn parse_cnf(input: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    for line in input.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p ") {
            if header.is_some() {
                return Err(Error::Input("duplicate header line".into()));
            }
            let mut it = rest.split_whitespace();
            if it.next() != Some("cnf") {
                return Err(Error::Input(format!("unsupported format in {line:?}")));
            }
            let vars = it
                .next()
                .and_then(|t| t.parse::<usize>().ok())
                .ok_or_else(|| Error::Input(format!("bad variable count in {line:?}")))?;
            let count = it
                .next()
                .and_then(|t| t.parse::<usize>().ok())
                .ok_or_else(|| Error::Input(format!("bad clause count in {line:?}")))?;
            if it.next().is_some() {
                return Err(Error::Input(format!("trailing tokens in {line:?}")));
            }
            header = Some((vars, count));
            continue;
        }
        if header.is_none() {
            return Err(Error::Input(format!(
                "clause data before the header: {line:?}"
            )));
        }
        for tok in line.split_whitespace() {
            let l: i64 = tok
                .parse()
                .map_err(|_| Error::Input(format!("bad literal token {tok:?}")))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(l);
            }
        }
    }
    let (vars, declared) = header.ok_or_else(|| Error::Input("missing header line".into()))?;
    if !current.is_empty() {
        return Err(Error::Input("unterminated final clause".into()));
    }
    if clauses.len() != declared {
        return Err(Error::Input(format!(
            "header declares {declared} clauses but {} were read",
            clauses.len()
        )));
    }
    let mut f = CnfFormula::new(vars);
    for c in clauses {
        f.add_clause(&c)?;
    }
    Ok(f)
}
