//! Text format for codes.
//!
//! ```text
//! n: 9
//! [stabilizer]
//! XXXXXXIII
//! -ZZIIIIIII   # signs are inline prefixes
//! [gauge_x]
//! [gauge_z]
//! [logical_x]
//! XXXXXXXXX
//! [logical_z]
//! ZZZZZZZZZ
//! ```
//!
//! `#` starts a comment and blank lines are ignored. The `n:` header comes
//! first. Gauge and logical sections pair up row by row.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::code::{GenRef, PauliPair, Role, SubsystemCode};
use crate::pauli::{PauliError, PauliOp, MAX_QUBITS};

const SECTIONS: [Role; 5] = [Role::Stabilizer, Role::GaugeX, Role::GaugeZ, Role::LogicalX, Role::LogicalZ];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeFileError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{}", .0.join("\n"))]
    Invalid(Vec<String>),
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> CodeFileError {
    CodeFileError::Syntax { line, column, message: message.into() }
}

fn role_of(name: &str) -> Option<Role> {
    SECTIONS.iter().copied().find(|r| r.section() == name)
}

/// Parses and validates a code file. Free virtual qubits are completed as
/// logical qubits.
pub fn parse_code_file(text: &str) -> Result<SubsystemCode, CodeFileError> {
    let mut n: Option<usize> = None;
    let mut section: Option<Role> = None;
    let mut rows: HashMap<Role, Vec<(usize, PauliOp)>> = HashMap::new();
    let mut headers: HashMap<Role, usize> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col = content.len() - content.trim_start().len() + 1;
        if let Some(rest) = trimmed.strip_prefix("n:") {
            if n.is_some() {
                return Err(syntax(line, col, "duplicate `n:` header"));
            }
            if section.is_some() {
                return Err(syntax(line, col, "`n:` header must come before any section"));
            }
            let value = rest.trim();
            let parsed: usize = value
                .parse()
                .map_err(|_| syntax(line, col + 2, format!("expected a qubit count, found {value:?}")))?;
            if parsed == 0 || parsed > MAX_QUBITS {
                return Err(syntax(line, col + 2, format!("qubit count must be in 1..={MAX_QUBITS}")));
            }
            n = Some(parsed);
            continue;
        }
        let Some(n) = n else {
            return Err(syntax(line, col, "expected `n: <qubits>` header"));
        };
        if let Some(inner) = trimmed.strip_prefix('[') {
            let Some(name) = inner.strip_suffix(']') else {
                return Err(syntax(line, col + trimmed.len(), "missing `]`"));
            };
            let role = role_of(name)
                .ok_or_else(|| syntax(line, col + 1, format!("unknown section [{name}]")))?;
            if headers.insert(role, line).is_some() {
                return Err(syntax(line, col, format!("duplicate section [{name}]")));
            }
            section = Some(role);
            continue;
        }
        let Some(role) = section else {
            return Err(syntax(line, col, "operator outside any section"));
        };
        let op = PauliOp::parse(trimmed).map_err(|e| match e {
            PauliError::InvalidChar { position, found } => {
                syntax(line, col + position, format!("invalid character {found:?}"))
            }
            other => syntax(line, col, other.to_string()),
        })?;
        if op.num_qubits() != n {
            let prefix = trimmed.len() - op.num_qubits();
            let column = col + prefix + op.num_qubits().min(n);
            return Err(syntax(
                line,
                column,
                format!("expected {n} qubits, found {}", op.num_qubits()),
            ));
        }
        rows.entry(role).or_default().push((line, op));
    }
    let Some(n) = n else {
        return Err(syntax(1, 1, "expected `n: <qubits>` header"));
    };
    let take = |role| rows.get(&role).cloned().unwrap_or_default();
    let pair_up = |xr: Role, zr: Role| -> Result<Vec<PauliPair>, CodeFileError> {
        let (xs, zs) = (take(xr), take(zr));
        if xs.len() != zs.len() {
            let line = headers.get(&zr).or(headers.get(&xr)).copied().unwrap_or(1);
            return Err(syntax(
                line,
                1,
                format!("[{}] has {} rows but [{}] has {}", xr.section(), xs.len(), zr.section(), zs.len()),
            ));
        }
        Ok(xs.iter().zip(&zs).map(|(x, z)| PauliPair::new(x.1, z.1)).collect())
    };
    let gauge = pair_up(Role::GaugeX, Role::GaugeZ)?;
    let logical = pair_up(Role::LogicalX, Role::LogicalZ)?;
    let stabilizer = take(Role::Stabilizer).iter().map(|r| r.1).collect();
    let code = SubsystemCode::new(n, stabilizer, gauge, logical);
    let report = code.validate();
    if let Some(done) = report.completed.filter(|_| report.violations.is_empty()) {
        return Ok(done);
    }
    let line_of = |g: GenRef| rows.get(&g.role).and_then(|v| v.get(g.index)).map(|r| r.0);
    let messages = report
        .violations
        .iter()
        .map(|v| {
            let lines: Vec<String> =
                v.generators().into_iter().filter_map(line_of).map(|l| l.to_string()).collect();
            if lines.is_empty() {
                format!("invalid code: {v}")
            } else {
                format!("line {}: {v}", lines.join(", "))
            }
        })
        .collect();
    Err(CodeFileError::Invalid(messages))
}

/// Canonical text: header, then every section in fixed order.
pub fn serialize(code: &SubsystemCode) -> String {
    let mut out = format!("n: {}\n", code.n);
    let lists: [Vec<PauliOp>; 5] = [
        code.stabilizer.clone(),
        code.gauge.iter().map(|p| p.x).collect(),
        code.gauge.iter().map(|p| p.z).collect(),
        code.logical.iter().map(|p| p.x).collect(),
        code.logical.iter().map(|p| p.z).collect(),
    ];
    for (role, ops) in SECTIONS.iter().zip(&lists) {
        let _ = writeln!(out, "[{}]", role.section());
        for op in ops {
            let _ = writeln!(out, "{op}");
        }
    }
    out
}
