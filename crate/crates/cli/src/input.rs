//! Point-set and value files.
//!
//! One entry per line. A node is a decimal literal or `log:` followed by the
//! natural log of the node; an optional second field is the multiplicity.
//! Everything after `#` is a comment.

use std::fmt;
use std::path::Path;

use whitney::interpolation::PointSet;
use whitney::numerics::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct InputError {
    pub path: Option<String>,
    /// 1-based line number, when the error is tied to a line.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = &self.path {
            write!(f, "{p}: ")?;
        }
        if let Some(l) = self.line {
            write!(f, "line {l}: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for InputError {}

fn at(line: usize, message: impl Into<String>) -> InputError {
    InputError {
        path: None,
        line: Some(line),
        message: message.into(),
    }
}

/// Non-empty lines with comments stripped, paired with their line numbers.
fn entries(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

fn literal(token: &str, line: usize) -> Result<Scalar, InputError> {
    let (log, digits) = match token.strip_prefix("log:") {
        Some(rest) => (true, rest),
        None => (false, token),
    };
    let v = Scalar::parse_decimal(digits)
        .map_err(|_| at(line, format!("malformed number '{token}'")))?;
    Ok(if log { v.exp() } else { v })
}

pub fn parse_pointset_str(text: &str) -> Result<PointSet<Scalar>, InputError> {
    let mut nodes: Vec<Scalar> = Vec::new();
    let mut mults = Vec::new();
    for (line, body) in entries(text) {
        let mut fields = body.split_whitespace();
        let x = literal(fields.next().expect("non-empty line"), line)?;
        let mu = match fields.next() {
            None => 1,
            Some(t) => t
                .parse::<usize>()
                .ok()
                .filter(|&m| m >= 1)
                .ok_or_else(|| at(line, format!("multiplicity must be a positive integer, got '{t}'")))?,
        };
        if let Some(extra) = fields.next() {
            return Err(at(line, format!("unexpected field '{extra}'")));
        }
        if let Some(prev) = nodes.last() {
            if x == *prev {
                return Err(at(line, format!("duplicate node {x}")));
            }
            if x < *prev {
                return Err(at(line, format!("nodes must increase strictly ({x} after {prev})")));
            }
        }
        nodes.push(x);
        mults.push(mu);
    }
    PointSet::new(nodes, mults).map_err(|e| InputError {
        path: None,
        line: None,
        message: e.to_string(),
    })
}

/// One decimal per line (`log:` allowed).
pub fn parse_values_str(text: &str) -> Result<Vec<Scalar>, InputError> {
    entries(text)
        .map(|(line, body)| {
            if body.split_whitespace().count() != 1 {
                return Err(at(line, "expected a single value"));
            }
            literal(body, line)
        })
        .collect()
}

/// One signed decimal per line, taken verbatim (no `log:` prefix).
pub fn parse_logs_str(text: &str) -> Result<Vec<Scalar>, InputError> {
    entries(text)
        .map(|(line, body)| {
            Scalar::parse_decimal(body).map_err(|_| at(line, format!("malformed number '{body}'")))
        })
        .collect()
}

pub fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError {
        path: Some(path.display().to_string()),
        line: None,
        message: e.to_string(),
    })
}

pub fn parse_pointset(path: &Path) -> Result<PointSet<Scalar>, InputError> {
    parse_pointset_str(&read(path)?).map_err(|e| InputError {
        path: Some(path.display().to_string()),
        ..e
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplicities_default_to_one() {
        let p = parse_pointset_str("0\n1 2\n").unwrap();
        assert_eq!(p.nodes(), &[Scalar::zero(), Scalar::one()]);
        assert_eq!(p.multiplicities(), &[1, 2]);
    }

    #[test]
    fn log_nodes_do_not_underflow() {
        let p = parse_pointset_str("log:-720\n").unwrap();
        let x = &p.nodes()[0];
        assert!(!x.is_zero());
        assert!((x.ln_abs_f64() + 720.0).abs() < 1e-12);
    }

    #[test]
    fn duplicates_report_their_line() {
        let err = parse_pointset_str("1\n1\n").unwrap_err();
        assert_eq!(err.line, Some(2));
        assert!(err.message.contains("duplicate"));
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let p = parse_pointset_str("# header\n\n-0.5  # left\n0.25 3\n").unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.multiplicities(), &[1, 3]);
    }

    #[test]
    fn bad_input_is_rejected_with_line_numbers() {
        assert_eq!(parse_pointset_str("0\n-1\n").unwrap_err().line, Some(2));
        assert_eq!(parse_pointset_str("0\nabc\n").unwrap_err().line, Some(2));
        assert_eq!(parse_pointset_str("0 0\n").unwrap_err().line, Some(1));
        assert_eq!(parse_pointset_str("0 1 2\n").unwrap_err().line, Some(1));
        assert_eq!(parse_values_str("1\n2 3\n").unwrap_err().line, Some(2));
    }
}
