//! Text formats: distance-matrix CSV, point-cloud CSV, edge lists and
//! poset cover relations. `inf` is the only accepted token for `∞`.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, Norm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputFormat {
    Dist,
    Points,
    Graph,
    Poset,
    Region,
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "dist" => InputFormat::Dist,
            "points" => InputFormat::Points,
            "graph" => InputFormat::Graph,
            "poset" => InputFormat::Poset,
            "region" => InputFormat::Region,
            _ => return Err(Error::Parse(format!("unknown format `{s}`"))),
        })
    }
}

/// A number, or `inf`.
pub fn parse_number(token: &str) -> Result<f64> {
    let t = token.trim();
    if t == "inf" {
        return Ok(f64::INFINITY);
    }
    match t.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Parse(format!("`{t}` is not a number"))),
    }
}

/// Twelve significant digits; `inf` for `∞`, empty for a missing value.
pub fn fmt_csv(x: Option<f64>) -> String {
    match x {
        None => String::new(),
        Some(v) if v == f64::INFINITY => "inf".into(),
        Some(v) if v == f64::NEG_INFINITY => "-inf".into(),
        Some(v) if v.is_nan() => String::new(),
        Some(v) => format!("{v:.11e}"),
    }
}

fn csv_records(text: &str) -> Result<Vec<Vec<String>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        out.push(rec.iter().map(str::to_string).collect());
    }
    Ok(out)
}

/// Splits off a header row if its first field is not numeric.
fn split_header(mut records: Vec<Vec<String>>) -> (Option<Vec<String>>, Vec<Vec<String>>) {
    match records.first() {
        Some(first) if first.iter().any(|f| parse_number(f).is_err()) => {
            let header = records.remove(0);
            (Some(header), records)
        }
        _ => (None, records),
    }
}

fn numeric_rows(records: &[Vec<String>]) -> Result<Vec<Vec<f64>>> {
    records
        .iter()
        .enumerate()
        .map(|(r, rec)| {
            rec.iter()
                .map(|f| parse_number(f).map_err(|e| Error::Parse(format!("row {}: {e}", r + 1))))
                .collect()
        })
        .collect()
}

/// Square matrix of distances, optionally headed by a row of labels. A
/// matrix with zero or asymmetric off-diagonal entries is read as a
/// generalized metric.
pub fn parse_distance_csv(text: &str) -> Result<FiniteMetricSpace> {
    let (header, rows) = split_header(csv_records(text)?);
    let rows = numeric_rows(&rows)?;
    let n = rows.len();
    let generalized = (0..n).any(|a| {
        (0..n).any(|b| a != b && rows[a].get(b).is_some_and(|v| *v == 0.0 || rows.get(b).and_then(|r| r.get(a)) != Some(v)))
    });
    let space = FiniteMetricSpace::from_distance_matrix(&rows, generalized)?;
    match header {
        Some(h) => space.with_labels(h),
        None => Ok(space),
    }
}

pub fn write_distance_csv(space: &FiniteMetricSpace) -> String {
    let mut s = space.labels().join(",");
    s.push('\n');
    for row in space.distance_rows() {
        let fields: Vec<String> = row.iter().map(|d| fmt_csv(Some(*d))).collect();
        s.push_str(&fields.join(","));
        s.push('\n');
    }
    s
}

/// One point per row, optionally under a header of coordinate names.
pub fn parse_points_csv(text: &str) -> Result<Vec<Vec<f64>>> {
    let (_, rows) = split_header(csv_records(text)?);
    let pts = numeric_rows(&rows)?;
    if let Some(v) = pts.iter().flatten().find(|v| !v.is_finite()) {
        return Err(Error::Parse(format!("coordinate {v} is not finite")));
    }
    Ok(pts)
}

pub fn parse_points_space(text: &str, norm: Norm) -> Result<FiniteMetricSpace> {
    FiniteMetricSpace::from_points(&parse_points_csv(text)?, norm)
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// `u v length` per line (length defaults to 1); a line with a single name
/// declares an isolated vertex.
pub fn parse_edge_list(text: &str) -> Result<FiniteMetricSpace> {
    let mut vertices: Vec<String> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut edges = Vec::new();
    let mut add = |v: &str, vertices: &mut Vec<String>| {
        if seen.insert(v.to_string()) {
            vertices.push(v.to_string());
        }
    };
    for (line, l) in content_lines(text) {
        let f: Vec<&str> = l.split_whitespace().collect();
        match f.as_slice() {
            [v] => add(v, &mut vertices),
            [u, v] | [u, v, _] => {
                let len = match f.get(2) {
                    Some(tok) => parse_number(tok).map_err(|e| Error::Parse(format!("line {line}: {e}")))?,
                    None => 1.0,
                };
                add(u, &mut vertices);
                add(v, &mut vertices);
                edges.push((u.to_string(), v.to_string(), Some(len)));
            }
            _ => return Err(Error::Parse(format!("line {line}: expected `u v length`"))),
        }
    }
    FiniteMetricSpace::from_graph(&vertices, &edges, 1.0)
}

pub fn write_edge_list(edges: &[(String, String, f64)]) -> String {
    let mut s = String::new();
    for (u, v, len) in edges {
        let _ = writeln!(s, "{u} {v} {}", fmt_csv(Some(*len)));
    }
    s
}

/// `a < b` per line (relations, closed transitively); a single name
/// declares an element.
pub fn parse_poset(text: &str) -> Result<FiniteMetricSpace> {
    let mut elements: Vec<String> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut covers = Vec::new();
    for (line, l) in content_lines(text) {
        let parts: Vec<&str> = l.split('<').map(str::trim).collect();
        if parts.iter().any(|p| p.is_empty() || p.contains(char::is_whitespace)) {
            return Err(Error::Parse(format!("line {line}: expected `a < b`")));
        }
        for p in &parts {
            if seen.insert(p.to_string()) {
                elements.push(p.to_string());
            }
        }
        // Chains `a < b < c` are allowed.
        for w in parts.windows(2) {
            covers.push((w[0].to_string(), w[1].to_string()));
        }
    }
    FiniteMetricSpace::from_poset(&elements, &covers)
}

/// Reads a finite space in the given format.
pub fn read_space(text: &str, format: InputFormat, norm: Norm) -> Result<FiniteMetricSpace> {
    match format {
        InputFormat::Dist => parse_distance_csv(text),
        InputFormat::Points => parse_points_space(text, norm),
        InputFormat::Graph => parse_edge_list(text),
        InputFormat::Poset => parse_poset(text),
        InputFormat::Region => Err(Error::Parse("a region is not a finite space".into())),
    }
}

/// A CSV table: header plus rows of optional numbers or text.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Num(Option<f64>),
    Text(String),
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Int(n) => n.to_string(),
                    Cell::Num(x) => fmt_csv(*x),
                    Cell::Text(t) => t.clone(),
                })
                .collect();
            w.write_record(&fields).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    /// Parses CSV written by [`Table::to_csv`]; fields that are neither
    /// integers, numbers nor empty stay text.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut records = csv_records(text)?;
        if records.is_empty() {
            return Err(Error::Parse("empty table".into()));
        }
        let header = records.remove(0);
        let rows = records
            .into_iter()
            .map(|rec| {
                rec.into_iter()
                    .map(|f| {
                        if f.is_empty() {
                            Cell::Num(None)
                        } else if let Ok(n) = f.parse::<i64>() {
                            Cell::Int(n)
                        } else if let Ok(v) = parse_number(&f).or_else(|_| if f == "-inf" { Ok(f64::NEG_INFINITY) } else { Err(()) }) {
                            Cell::Num(Some(v))
                        } else {
                            Cell::Text(f)
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Table { header, rows })
    }
}

/// Tables separated by blank lines.
pub fn tables_to_csv(tables: &[Table]) -> String {
    tables.iter().map(Table::to_csv).collect::<Vec<_>>().join("\n")
}

pub fn tables_from_csv(text: &str) -> Result<Vec<Table>> {
    let mut blocks = vec![String::new()];
    for line in text.lines() {
        if line.trim().is_empty() {
            if !blocks.last().is_some_and(String::is_empty) {
                blocks.push(String::new());
            }
        } else {
            let b = blocks.last_mut().expect("nonempty");
            b.push_str(line);
            b.push('\n');
        }
    }
    blocks.into_iter().filter(|b| !b.is_empty()).map(|b| Table::from_csv(&b)).collect()
}
