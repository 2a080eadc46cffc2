//! Text problem files.
//!
//! ```text
//! dqsync-problem v1 n=3
//! E 1 2 qw qx qy qz tx ty tz
//! G 1 qw qx qy qz tx ty tz
//! ```
//!
//! Indices are 1-based. Numbers are printed with 17 significant digits, so
//! parsing a printed problem gives back the same bits. Blank lines and lines
//! starting with `#` are ignored.

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use dqsync::sync::Edge;
use dqsync::{MeasurementProblem, Quaternion64, Se3Element64};

pub const HEADER: &str = "dqsync-problem v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based; 0 when the error concerns the file as a whole.
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.msg)
        } else {
            write!(f, "line {}: {}", self.line, self.msg)
        }
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, msg: msg.into() }
}

fn push_numbers(out: &mut String, xs: &[f64]) {
    for x in xs {
        write!(out, " {x:.16e}").expect("writing to a String");
    }
}

fn push_pose(out: &mut String, q: &Quaternion64, t: &[f64; 3]) {
    push_numbers(out, &[q.w, q.x, q.y, q.z, t[0], t[1], t[2]]);
}

fn push_truth(out: &mut String, truth: &[Se3Element64]) {
    for (k, g) in truth.iter().enumerate() {
        write!(out, "G {}", k + 1).expect("writing to a String");
        push_pose(out, &g.rot(), &g.trans());
        out.push('\n');
    }
}

/// Header, one E line per edge in `(i, j)` order, then G lines if the
/// problem carries ground truth.
pub fn print_problem(p: &MeasurementProblem) -> String {
    let mut out = format!("{HEADER} n={}\n", p.n());
    for e in p.edges() {
        write!(out, "E {} {}", e.i + 1, e.j + 1).expect("writing to a String");
        push_pose(&mut out, &e.rot(), &e.trans());
        out.push('\n');
    }
    if let Some(gt) = p.ground_truth() {
        push_truth(&mut out, gt);
    }
    out
}

/// Header and G lines only.
pub fn print_estimate(elements: &[Se3Element64]) -> String {
    let mut out = format!("{HEADER} n={}\n", elements.len());
    push_truth(&mut out, elements);
    out
}

fn numbers<const K: usize>(line: usize, toks: &[&str]) -> Result<[f64; K], ParseError> {
    let mut out = [0.0f64; K];
    for (o, t) in out.iter_mut().zip(toks) {
        *o = t.parse().map_err(|_| err(line, format!("`{t}` is not a number")))?;
        if !o.is_finite() {
            return Err(err(line, format!("`{t}` is not finite")));
        }
    }
    Ok(out)
}

fn index(line: usize, tok: &str, n: usize) -> Result<usize, ParseError> {
    let k: usize = tok.parse().map_err(|_| err(line, format!("`{tok}` is not an index")))?;
    if k == 0 || k > n {
        return Err(err(line, format!("index {k} outside 1..={n}")));
    }
    Ok(k - 1)
}

fn pose_parts(line: usize, toks: &[&str]) -> Result<(Quaternion64, [f64; 3]), ParseError> {
    let v: [f64; 7] = numbers(line, toks)?;
    Ok((Quaternion64::new(v[0], v[1], v[2], v[3]), [v[4], v[5], v[6]]))
}

/// Parses a problem or estimate file.
///
/// G lines must cover every index or none of them.
pub fn parse_problem(text: &str) -> Result<MeasurementProblem, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| err(0, "empty file"))?;
    let n = header
        .strip_prefix(HEADER)
        .and_then(|rest| rest.trim().strip_prefix("n="))
        .ok_or_else(|| err(hl, format!("expected `{HEADER} n=<n>`")))?;
    let n: usize = n.parse().map_err(|_| err(hl, format!("`{n}` is not a node count")))?;
    if n == 0 {
        return Err(err(hl, "n must be at least 1"));
    }

    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut truth: Vec<Option<Se3Element64>> = vec![None; n];
    for (ln, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks[0] {
            "E" => {
                if toks.len() != 10 {
                    return Err(err(ln, format!("E line needs 9 fields, found {}", toks.len() - 1)));
                }
                let (i, j) = (index(ln, toks[1], n)?, index(ln, toks[2], n)?);
                if i >= j {
                    return Err(err(ln, format!("E line needs i < j, found {} {}", i + 1, j + 1)));
                }
                if !seen.insert((i, j)) {
                    return Err(err(ln, format!("duplicate edge {} {}", i + 1, j + 1)));
                }
                let (q, t) = pose_parts(ln, &toks[3..])?;
                edges.push(Edge::from_parts(i, j, q, t).map_err(|e| err(ln, e.to_string()))?);
            }
            "G" => {
                if toks.len() != 9 {
                    return Err(err(ln, format!("G line needs 8 fields, found {}", toks.len() - 1)));
                }
                let k = index(ln, toks[1], n)?;
                if truth[k].is_some() {
                    return Err(err(ln, format!("second G line for index {}", k + 1)));
                }
                let (q, t) = pose_parts(ln, &toks[2..])?;
                truth[k] = Some(Se3Element64::new(q, t).map_err(|e| err(ln, e.to_string()))?);
            }
            other => return Err(err(ln, format!("unknown record `{other}`"))),
        }
    }
    let given = truth.iter().filter(|g| g.is_some()).count();
    let truth = match given {
        0 => None,
        g if g == n => Some(truth.into_iter().map(Option::unwrap).collect()),
        g => return Err(err(0, format!("G lines cover {g} of {n} indices"))),
    };
    MeasurementProblem::new(n, edges, truth).map_err(|e| err(0, e.to_string()))
}
