//! Line-oriented circuit text format.
//!
//! ```text
//! # Bell pair
//! h q0
//! cx q0 q1
//! measure q0 c0
//! measure q1 c1
//! ```
//!
//! Mnemonics: `u1 q<i> <λ>`, `u2 q<i> <φ> <λ>`, `h`, `t`, `tdg`, `id`,
//! `reset` (one qubit each), `cx q<c> q<t>` and `measure q<i> c<j>`.
//! Two optional trailing flags are accepted: `discard` on a measurement
//! excludes its bit from counts, and `lazy` defers the operation as late as
//! scheduling allows. `#` starts a comment. Register sizes are inferred from
//! the largest index used.

use std::fmt::Write as _;

use thiserror::Error;

use super::{GateKind, Operation, Program};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn index(token: &str, prefix: char, line: usize) -> Result<usize, ParseError> {
    token
        .strip_prefix(prefix)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| ParseError {
            line,
            message: format!("expected {prefix}<index>, found `{token}`"),
        })
}

fn angle(token: &str, line: usize) -> Result<f64, ParseError> {
    token
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| ParseError {
            line,
            message: format!("expected an angle, found `{token}`"),
        })
}

struct Parsed {
    op: Operation,
    discard: bool,
}

fn parse_line(text: &str, line: usize) -> Result<Option<Parsed>, ParseError> {
    let code = text.split('#').next().unwrap_or("");
    let mut tokens: Vec<&str> = code.split_whitespace().collect();
    if tokens.is_empty() {
        return Ok(None);
    }
    let mut lazy = false;
    let mut discard = false;
    while let Some(&last) = tokens.last() {
        match last {
            "lazy" if !lazy => lazy = true,
            "discard" if !discard => discard = true,
            _ => break,
        }
        tokens.pop();
    }
    let err = |message: String| ParseError { line, message };
    let expect_len = |n: usize| {
        if tokens.len() == n {
            Ok(())
        } else {
            Err(err(format!(
                "`{}` takes {} operand(s), found {}",
                tokens[0],
                n - 1,
                tokens.len() - 1
            )))
        }
    };
    let (kind, qubits) = match tokens[0] {
        "u1" => {
            expect_len(3)?;
            (
                GateKind::U1(angle(tokens[2], line)?),
                vec![index(tokens[1], 'q', line)?],
            )
        }
        "u2" => {
            expect_len(4)?;
            (
                GateKind::U2(angle(tokens[2], line)?, angle(tokens[3], line)?),
                vec![index(tokens[1], 'q', line)?],
            )
        }
        "cx" => {
            expect_len(3)?;
            let (c, t) = (index(tokens[1], 'q', line)?, index(tokens[2], 'q', line)?);
            if c == t {
                return Err(err(format!("cx control and target are both q{c}")));
            }
            (GateKind::Cnot, vec![c, t])
        }
        "measure" => {
            expect_len(3)?;
            (
                GateKind::Measure(index(tokens[2], 'c', line)?),
                vec![index(tokens[1], 'q', line)?],
            )
        }
        m @ ("h" | "t" | "tdg" | "id" | "reset") => {
            expect_len(2)?;
            let kind = match m {
                "h" => GateKind::H,
                "t" => GateKind::T,
                "tdg" => GateKind::Tdg,
                "id" => GateKind::Identity,
                _ => GateKind::Reset,
            };
            (kind, vec![index(tokens[1], 'q', line)?])
        }
        other => return Err(err(format!("unknown instruction `{other}`"))),
    };
    if discard && !matches!(kind, GateKind::Measure(_)) {
        return Err(err("`discard` only applies to measure".into()));
    }
    Ok(Some(Parsed {
        op: Operation { kind, qubits, lazy },
        discard,
    }))
}

/// Parses a whole circuit file.
pub fn parse(source: &str) -> Result<Program, ParseError> {
    let mut parsed = Vec::new();
    for (i, text) in source.lines().enumerate() {
        if let Some(p) = parse_line(text, i + 1)? {
            parsed.push((i + 1, p));
        }
    }
    let num_qubits = parsed
        .iter()
        .flat_map(|(_, p)| p.op.qubits.iter().copied())
        .max()
        .map_or(0, |m| m + 1);
    let num_clbits = parsed
        .iter()
        .filter_map(|(_, p)| match p.op.kind {
            GateKind::Measure(c) => Some(c + 1),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let mut program = Program::new(num_qubits, num_clbits);
    for (line, p) in parsed {
        let bit = match p.op.kind {
            GateKind::Measure(c) => Some(c),
            _ => None,
        };
        program.push(p.op).map_err(|e| ParseError {
            line,
            message: e.to_string(),
        })?;
        if let (true, Some(c)) = (p.discard, bit) {
            program.mark_discarded(c);
        }
    }
    Ok(program)
}

/// Serializes a program; `parse(&serialize(p))` reproduces `p` whenever every
/// qubit and classical bit is used.
pub fn serialize(program: &Program) -> String {
    let mut out = String::new();
    for op in program.ops() {
        let q = op.qubits[0];
        match op.kind {
            GateKind::U1(l) => write!(out, "u1 q{q} {l}"),
            GateKind::U2(p, l) => write!(out, "u2 q{q} {p} {l}"),
            GateKind::Cnot => write!(out, "cx q{q} q{}", op.qubits[1]),
            GateKind::Measure(c) => write!(out, "measure q{q} c{c}").and_then(|_| {
                if program.discarded().contains(&c) {
                    out.write_str(" discard")
                } else {
                    Ok(())
                }
            }),
            k => write!(out, "{} q{q}", k.mnemonic()),
        }
        .expect("writing to a String cannot fail");
        if op.lazy {
            out.push_str(" lazy");
        }
        out.push('\n');
    }
    out
}
