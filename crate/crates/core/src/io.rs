//! Text formats for quivers, conjugacy classes, quadruples and vectors.
//!
//! Quiver file:
//! ```text
//! # comment
//! vertices: 1 2
//! arrow 1 2
//! arrow 1 2
//! ```
//! Class file, one line per eigenvalue: `eig p/q : b1 b2 …`.
//!
//! Quadruple file: `blocks:` sizes, `mult:` followed by the multiplicity
//! matrix rows, `omega:` followed by the dense form rows in the standard
//! layout of [`crate::bimodule::Bimodule`], and `zeta:` scalars.

use crate::bimodule::{Bimodule, SemisimpleAlgebra, TraceFunction};
use crate::error::{Error, Result};
use crate::kp::ConjugacyClass;
use crate::linalg::QMatrix;
use crate::quiver::{DimVector, Quiver, Weight};
use crate::rational::{parse_rational, Rational};

/// Nonblank lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn tokens(s: &str) -> impl Iterator<Item = &str> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
}

pub fn parse_quiver(text: &str) -> Result<Quiver> {
    let mut lines = content_lines(text);
    let Some((ln, first)) = lines.next() else {
        return Err(Error::parse(0, "empty quiver file"));
    };
    let Some(rest) = first.strip_prefix("vertices:") else {
        return Err(Error::parse(ln, "expected `vertices:` line"));
    };
    let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
    if names.is_empty() {
        return Err(Error::parse(ln, "no vertices"));
    }
    let mut arrows = Vec::new();
    for (ln, line) in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        match parts.as_slice() {
            ["arrow", t, h] => {
                for v in [t, h] {
                    if !names.iter().any(|n| n == v) {
                        return Err(Error::parse(ln, format!("unknown vertex `{v}`")));
                    }
                }
                arrows.push((t.to_string(), h.to_string()));
            }
            _ => {
                return Err(Error::parse(
                    ln,
                    format!("expected `arrow <tail> <head>`, got `{line}`"),
                ))
            }
        }
    }
    Quiver::new(names, &arrows).map_err(|e| Error::parse(ln, e.to_string()))
}

pub fn parse_i64_list(s: &str) -> Result<Vec<i64>> {
    tokens(s)
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| Error::parse(0, format!("`{t}` is not an integer")))
        })
        .collect()
}

pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    tokens(s)
        .map(|t| {
            parse_rational(t).ok_or_else(|| Error::parse(0, format!("`{t}` is not a rational")))
        })
        .collect()
}

pub fn parse_dim_vector(s: &str) -> Result<DimVector> {
    let v = parse_i64_list(s)?;
    DimVector::new(v).map_err(|e| Error::parse(0, e.to_string()))
}

pub fn parse_weight(s: &str) -> Result<Weight> {
    Ok(Weight::new(parse_rational_list(s)?))
}

pub fn parse_class(text: &str) -> Result<ConjugacyClass> {
    let mut entries = Vec::new();
    let mut last = 0;
    for (ln, line) in content_lines(text) {
        last = ln;
        let Some(rest) = line.strip_prefix("eig") else {
            return Err(Error::parse(ln, "expected `eig <value> : <blocks>`"));
        };
        let Some((value, blocks)) = rest.split_once(':') else {
            return Err(Error::parse(ln, "missing `:`"));
        };
        let xi = parse_rational(value)
            .ok_or_else(|| Error::parse(ln, format!("bad eigenvalue `{}`", value.trim())))?;
        let blocks = tokens(blocks)
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::parse(ln, format!("bad block size `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        entries.push((xi, blocks));
    }
    ConjugacyClass::new(entries).map_err(|e| Error::parse(last, e.to_string()))
}

/// Parsed quadruple data, before the form is validated.
#[derive(Debug, Clone)]
pub struct QuadrupleFile {
    pub module: Bimodule,
    pub omega: QMatrix,
    pub trace: TraceFunction,
}

pub fn parse_quadruple(text: &str) -> Result<QuadrupleFile> {
    #[derive(PartialEq)]
    enum Section {
        None,
        Mult,
        Omega,
    }
    let mut blocks: Option<Vec<usize>> = None;
    let mut mult: Vec<Vec<usize>> = Vec::new();
    let mut omega: Vec<Vec<Rational>> = Vec::new();
    let mut zeta: Option<Vec<Rational>> = None;
    let mut section = Section::None;
    for (ln, line) in content_lines(text) {
        if let Some(rest) = line.strip_prefix("blocks:") {
            let b = tokens(rest)
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::parse(ln, format!("bad block size `{t}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            blocks = Some(b);
            section = Section::None;
        } else if line.starts_with("mult:") {
            section = Section::Mult;
        } else if line.starts_with("omega:") {
            section = Section::Omega;
        } else if let Some(rest) = line.strip_prefix("zeta:") {
            zeta = Some(parse_rational_list(rest).map_err(|e| Error::parse(ln, e.to_string()))?);
            section = Section::None;
        } else {
            match section {
                Section::Mult => mult.push(
                    tokens(line)
                        .map(|t| {
                            t.parse::<usize>()
                                .map_err(|_| Error::parse(ln, format!("bad multiplicity `{t}`")))
                        })
                        .collect::<Result<Vec<_>>>()?,
                ),
                Section::Omega => omega
                    .push(parse_rational_list(line).map_err(|e| Error::parse(ln, e.to_string()))?),
                Section::None => return Err(Error::parse(ln, format!("unexpected line `{line}`"))),
            }
        }
    }
    let blocks = blocks.ok_or_else(|| Error::parse(0, "missing `blocks:`"))?;
    let zeta = zeta.ok_or_else(|| Error::parse(0, "missing `zeta:`"))?;
    let algebra = SemisimpleAlgebra::new(blocks).map_err(|e| Error::parse(0, e.to_string()))?;
    let module = Bimodule::new(&algebra, mult).map_err(|e| Error::parse(0, e.to_string()))?;
    let n = module.dim();
    if omega.len() != n || omega.iter().any(|r| r.len() != n) {
        return Err(Error::parse(
            0,
            format!("omega must be {n}x{n} for this bimodule"),
        ));
    }
    let omega = if n == 0 {
        QMatrix::zeros(0, 0)
    } else {
        QMatrix::from_rows(&omega)
    };
    Ok(QuadrupleFile {
        module,
        omega,
        trace: TraceFunction::new(zeta),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    #[test]
    fn quiver_roundtrip() {
        let text = "# Kronecker\nvertices: a b\n\narrow a b  # first\narrow a b\n";
        let q = parse_quiver(text).unwrap();
        assert_eq!(q.vertex_count(), 2);
        assert_eq!(q.edges_between(0, 1), 2);
        assert_eq!(parse_quiver(&q.to_string()).unwrap(), q);
    }

    #[test]
    fn quiver_errors() {
        assert!(parse_quiver("").unwrap_err().is_parse_error());
        assert!(matches!(
            parse_quiver("arrow a b"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_quiver("vertices: a\narrow a c"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_quiver("vertices: a a"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn vectors() {
        assert_eq!(parse_i64_list("1,2, 3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_i64_list("1 2 3").unwrap(), vec![1, 2, 3]);
        assert_eq!(
            parse_rational_list("1/2,-3").unwrap(),
            vec![ratio(1, 2), rat(-3)]
        );
        assert!(parse_dim_vector("1,-1").is_err());
        assert!(parse_i64_list("x").is_err());
    }

    #[test]
    fn classes() {
        let c = parse_class("eig 0 : 2 1\neig 1/2 : 1\n").unwrap();
        assert_eq!(c.size(), 4);
        assert!(parse_class("eig 0 2 1").is_err());
        assert!(parse_class("eig 0 : 1\neig 0 : 1").is_err());
    }

    #[test]
    fn quadruples() {
        let text = "blocks: 1\nmult:\n2\nomega:\n0 1\n-1 0\nzeta: 0\n";
        let f = parse_quadruple(text).unwrap();
        assert_eq!(f.module.dim(), 2);
        assert_eq!(f.omega, QMatrix::from_i64(2, 2, &[0, 1, -1, 0]));
        assert!(parse_quadruple("blocks: 1\nmult:\n2\nomega:\n0 1\nzeta: 0").is_err());
    }
}
