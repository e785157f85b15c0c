//! Reading and writing MPS files (fixed and free format).
//!
//! Fields are split on whitespace, so fixed-format files are accepted as long
//! as names contain no spaces. `L` rows are negated into `≥` form, ranged
//! rows become two `≥` rows, and equality rows are placed after all
//! inequalities. Integrality markers are ignored.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::lp::LinearProgram;
use crate::sparse::SparseMatrix;

#[derive(Debug, Error)]
pub enum MpsError {
    #[error("line {line}: {message}")]
    SyntaxError { line: usize, message: String },
    #[error("line {line}: unknown section {name}")]
    UnknownSection { line: usize, name: String },
    #[error("line {line}: reference to undeclared name {name}")]
    DanglingReference { line: usize, name: String },
    #[error("invalid model: {0}")]
    Model(#[from] crate::error::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveSense {
    Minimize,
    Maximize,
}

/// A parsed model. For maximization files `lp` holds the negated objective.
#[derive(Debug, Clone, PartialEq)]
pub struct MpsModel {
    pub name: String,
    pub sense: ObjectiveSense,
    pub objective_name: String,
    pub lp: LinearProgram,
    pub row_names: Vec<String>,
    pub col_names: Vec<String>,
}

impl MpsModel {
    /// Wraps an LP with generated names.
    pub fn from_lp(name: &str, lp: LinearProgram) -> Self {
        Self {
            name: name.to_string(),
            sense: ObjectiveSense::Minimize,
            objective_name: "obj".into(),
            row_names: (0..lp.num_constraints()).map(|j| format!("c{j}")).collect(),
            col_names: (0..lp.num_vars()).map(|i| format!("x{i}")).collect(),
            lp,
        }
    }

    /// Objective value in the file's own sense.
    pub fn reported_objective(&self, minimized: f64) -> f64 {
        match self.sense {
            ObjectiveSense::Minimize => minimized,
            ObjectiveSense::Maximize => -minimized,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RowKind {
    G,
    L,
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Rows,
    Columns,
    Rhs,
    Ranges,
    Bounds,
    ObjSense,
}

struct Row {
    name: String,
    kind: RowKind,
    entries: Vec<(usize, f64)>,
    rhs: Option<f64>,
    range: Option<f64>,
}

struct Column {
    name: String,
    cost: Option<f64>,
    lower: Option<f64>,
    upper: f64,
}

fn accumulate(slot: &mut Option<f64>, v: f64) {
    *slot = Some(match *slot {
        Some(old) => old + v,
        None => v,
    });
}

pub fn read_mps_file(path: &Path) -> Result<MpsModel, MpsError> {
    parse_mps(&std::fs::read_to_string(path)?)
}

pub fn parse_mps(text: &str) -> Result<MpsModel, MpsError> {
    let mut name = String::new();
    let mut sense = ObjectiveSense::Minimize;
    let mut objective_name: Option<String> = None;
    let mut free_rows: Vec<String> = Vec::new();
    let mut rows: Vec<Row> = Vec::new();
    let mut row_index: HashMap<String, usize> = HashMap::new();
    let mut cols: Vec<Column> = Vec::new();
    let mut col_index: HashMap<String, usize> = HashMap::new();
    let mut objective_rhs: Option<f64> = None;
    let mut section = Section::None;
    let mut ended = false;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let syntax = |message: String| MpsError::SyntaxError { line, message };
        let dangling = |name: &str| MpsError::DanglingReference { line, name: name.to_string() };
        let number = |s: &str| s.parse::<f64>().map_err(|_| syntax(format!("expected a number, found {s:?}")));
        let trimmed = raw.trim_end();
        if trimmed.is_empty() || trimmed.starts_with('*') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if !raw.starts_with(char::is_whitespace) {
            let head = tokens[0].to_ascii_uppercase();
            section = match head.as_str() {
                "NAME" => {
                    name = tokens[1..].join(" ");
                    Section::None
                }
                "ROWS" => Section::Rows,
                "COLUMNS" => Section::Columns,
                "RHS" => Section::Rhs,
                "RANGES" => Section::Ranges,
                "BOUNDS" => Section::Bounds,
                "OBJSENSE" => {
                    if let Some(s) = tokens.get(1) {
                        sense = parse_sense(s).ok_or_else(|| syntax(format!("unknown objective sense {s}")))?;
                    }
                    Section::ObjSense
                }
                "ENDATA" => {
                    ended = true;
                    break;
                }
                _ => return Err(MpsError::UnknownSection { line, name: tokens[0].to_string() }),
            };
            continue;
        }

        match section {
            Section::None => return Err(syntax("data outside of a section".into())),
            Section::ObjSense => {
                sense =
                    parse_sense(tokens[0]).ok_or_else(|| syntax(format!("unknown objective sense {}", tokens[0])))?;
            }
            Section::Rows => {
                if tokens.len() != 2 {
                    return Err(syntax("ROWS entries need a type and a name".into()));
                }
                let row_name = tokens[1].to_string();
                if row_index.contains_key(&row_name)
                    || objective_name.as_deref() == Some(tokens[1])
                    || free_rows.contains(&row_name)
                {
                    return Err(syntax(format!("duplicate row {row_name}")));
                }
                let kind = match tokens[0].to_ascii_uppercase().as_str() {
                    "N" => {
                        if objective_name.is_none() {
                            objective_name = Some(row_name);
                        } else {
                            free_rows.push(row_name);
                        }
                        continue;
                    }
                    "G" => RowKind::G,
                    "L" => RowKind::L,
                    "E" => RowKind::E,
                    other => return Err(syntax(format!("unknown row type {other}"))),
                };
                row_index.insert(row_name.clone(), rows.len());
                rows.push(Row { name: row_name, kind, entries: Vec::new(), rhs: None, range: None });
            }
            Section::Columns => {
                if tokens.iter().any(|t| t.contains("MARKER")) {
                    continue;
                }
                if tokens.len() != 3 && tokens.len() != 5 {
                    return Err(syntax("COLUMNS entries need a column and one or two (row, value) pairs".into()));
                }
                let c = *col_index.entry(tokens[0].to_string()).or_insert_with(|| {
                    cols.push(Column { name: tokens[0].to_string(), cost: None, lower: None, upper: f64::INFINITY });
                    cols.len() - 1
                });
                for pair in tokens[1..].chunks(2) {
                    let v = number(pair[1])?;
                    if objective_name.as_deref() == Some(pair[0]) {
                        accumulate(&mut cols[c].cost, v);
                    } else if let Some(&r) = row_index.get(pair[0]) {
                        rows[r].entries.push((c, v));
                    } else if !free_rows.iter().any(|f| f == pair[0]) {
                        return Err(dangling(pair[0]));
                    }
                }
            }
            Section::Rhs | Section::Ranges => {
                // An odd token count means a leading set name.
                let pairs = match tokens.len() {
                    2 | 4 => &tokens[..],
                    3 | 5 => &tokens[1..],
                    _ => return Err(syntax("expected one or two (row, value) pairs".into())),
                };
                for pair in pairs.chunks(2) {
                    let v = number(pair[1])?;
                    if objective_name.as_deref() == Some(pair[0]) {
                        if section == Section::Rhs {
                            accumulate(&mut objective_rhs, v);
                        }
                    } else if let Some(&r) = row_index.get(pair[0]) {
                        let slot = if section == Section::Rhs { &mut rows[r].rhs } else { &mut rows[r].range };
                        accumulate(slot, v);
                    } else if !free_rows.iter().any(|f| f == pair[0]) {
                        return Err(dangling(pair[0]));
                    }
                }
            }
            Section::Bounds => {
                let kind = tokens[0].to_ascii_uppercase();
                let needs_value = matches!(kind.as_str(), "UP" | "LO" | "FX" | "LI" | "UI");
                let known = matches!(kind.as_str(), "UP" | "LO" | "FX" | "LI" | "UI" | "FR" | "MI" | "PL" | "BV");
                if !known {
                    return Err(syntax(format!("unknown bound type {kind}")));
                }
                let (col_name, value) = match (needs_value, tokens.len()) {
                    (true, 3) => (tokens[1], Some(tokens[2])),
                    (true, 4) => (tokens[2], Some(tokens[3])),
                    (false, 2) => (tokens[1], None),
                    (false, 3) if col_index.contains_key(tokens[1]) && tokens[2].parse::<f64>().is_ok() => {
                        (tokens[1], None)
                    }
                    (false, 3) => (tokens[2], None),
                    (false, 4) => (tokens[2], None),
                    _ => return Err(syntax(format!("malformed {kind} bound"))),
                };
                let &c = col_index.get(col_name).ok_or_else(|| dangling(col_name))?;
                let v = value.map(number).transpose()?;
                let col = &mut cols[c];
                match kind.as_str() {
                    "UP" | "UI" => {
                        let v = v.unwrap();
                        if v < 0.0 && col.lower.is_none() {
                            col.lower = Some(f64::NEG_INFINITY);
                        }
                        col.upper = v;
                    }
                    "LO" | "LI" => col.lower = v,
                    "FX" => {
                        col.lower = v;
                        col.upper = v.unwrap();
                    }
                    "FR" => {
                        col.lower = Some(f64::NEG_INFINITY);
                        col.upper = f64::INFINITY;
                    }
                    "MI" => col.lower = Some(f64::NEG_INFINITY),
                    "PL" => col.upper = f64::INFINITY,
                    "BV" => {
                        col.lower = Some(0.0);
                        col.upper = 1.0;
                    }
                    _ => unreachable!(),
                }
            }
        }
    }
    if !ended {
        return Err(MpsError::SyntaxError { line: text.lines().count(), message: "missing ENDATA".into() });
    }
    let objective_name = objective_name.ok_or(MpsError::SyntaxError { line: 0, message: "no objective row".into() })?;

    // Inequality rows in file order, then equalities.
    let mut sink = RowSink::default();
    for row in rows.iter().filter(|r| r.kind != RowKind::E || r.range.is_some_and(|v| v != 0.0)) {
        let b = row.rhs.unwrap_or(0.0);
        let (lo, hi) = match (row.kind, row.range) {
            (RowKind::G, None) => (Some(b), None),
            (RowKind::L, None) => (None, Some(b)),
            (RowKind::G, Some(r)) => (Some(b), Some(b + r.abs())),
            (RowKind::L, Some(r)) => (Some(b - r.abs()), Some(b)),
            (RowKind::E, Some(r)) if r > 0.0 => (Some(b), Some(b + r)),
            (RowKind::E, Some(r)) => (Some(b + r), Some(b)),
            (RowKind::E, None) => unreachable!(),
        };
        let ranged = lo.is_some() && hi.is_some();
        if let Some(lo) = lo {
            sink.push(row.name.clone(), &row.entries, 1.0, lo);
        }
        if let Some(hi) = hi {
            let name = if ranged { format!("{}_upper", row.name) } else { row.name.clone() };
            sink.push(name, &row.entries, -1.0, -hi);
        }
    }
    let num_inequality_rows = sink.rhs.len();
    for row in rows.iter().filter(|r| r.kind == RowKind::E && !r.range.is_some_and(|v| v != 0.0)) {
        sink.push(row.name.clone(), &row.entries, 1.0, row.rhs.unwrap_or(0.0));
    }

    let RowSink { triplets, rhs, names: row_names } = sink;
    let n = cols.len();
    let k = SparseMatrix::from_triplets(rhs.len(), n, triplets)?;
    let flip = if sense == ObjectiveSense::Maximize { -1.0 } else { 1.0 };
    let c: Vec<f64> = cols.iter().map(|col| flip * col.cost.unwrap_or(0.0)).collect();
    let lower: Vec<f64> = cols.iter().map(|col| col.lower.unwrap_or(0.0)).collect();
    let upper: Vec<f64> = cols.iter().map(|col| col.upper).collect();
    let mut lp = LinearProgram::new(c, k, rhs, num_inequality_rows, lower, upper)?;
    lp.objective_constant = match objective_rhs {
        Some(v) => -flip * v,
        None => 0.0,
    };
    Ok(MpsModel { name, sense, objective_name, lp, row_names, col_names: cols.into_iter().map(|c| c.name).collect() })
}

#[derive(Default)]
struct RowSink {
    triplets: Vec<(usize, usize, f64)>,
    rhs: Vec<f64>,
    names: Vec<String>,
}

impl RowSink {
    fn push(&mut self, name: String, entries: &[(usize, f64)], sign: f64, q: f64) {
        let j = self.rhs.len();
        self.triplets.extend(entries.iter().map(|&(c, v)| (j, c, sign * v)));
        self.rhs.push(q);
        self.names.push(name);
    }
}

fn parse_sense(token: &str) -> Option<ObjectiveSense> {
    match token.to_ascii_uppercase().as_str() {
        "MIN" | "MINIMIZE" => Some(ObjectiveSense::Minimize),
        "MAX" | "MAXIMIZE" => Some(ObjectiveSense::Maximize),
        _ => None,
    }
}

fn is_positive_zero(v: f64) -> bool {
    v.to_bits() == 0
}

/// Free-format MPS. `{:?}` formatting gives the shortest decimal that
/// parses back to the same `f64`, so write-then-parse reproduces the model
/// exactly.
pub fn write_mps(model: &MpsModel) -> String {
    let lp = &model.lp;
    let flip = if model.sense == ObjectiveSense::Maximize { -1.0 } else { 1.0 };
    let obj = &model.objective_name;
    let mut out = String::new();
    let _ = writeln!(out, "NAME {}", model.name);
    if model.sense == ObjectiveSense::Maximize {
        out.push_str("OBJSENSE\n    MAX\n");
    }
    out.push_str("ROWS\n");
    let _ = writeln!(out, " N {obj}");
    for (j, name) in model.row_names.iter().enumerate() {
        let kind = if j < lp.num_inequality_rows { 'G' } else { 'E' };
        let _ = writeln!(out, " {kind} {name}");
    }
    out.push_str("COLUMNS\n");
    for (i, name) in model.col_names.iter().enumerate() {
        let _ = writeln!(out, "    {name} {obj} {:?}", flip * lp.objective_vector[i]);
        for (j, v) in lp.constraint_matrix.col(i) {
            let _ = writeln!(out, "    {name} {} {v:?}", model.row_names[j]);
        }
    }
    out.push_str("RHS\n");
    if !is_positive_zero(lp.objective_constant) {
        let _ = writeln!(out, "    RHS {obj} {:?}", -flip * lp.objective_constant);
    }
    for (j, q) in lp.right_hand_side.iter().enumerate() {
        if !is_positive_zero(*q) {
            let _ = writeln!(out, "    RHS {} {q:?}", model.row_names[j]);
        }
    }
    out.push_str("BOUNDS\n");
    for (i, name) in model.col_names.iter().enumerate() {
        let (l, u) = (lp.variable_lower[i], lp.variable_upper[i]);
        if l == f64::NEG_INFINITY && u == f64::INFINITY {
            let _ = writeln!(out, " FR BND {name}");
            continue;
        }
        if l == u {
            let _ = writeln!(out, " FX BND {name} {l:?}");
            continue;
        }
        if l == f64::NEG_INFINITY {
            let _ = writeln!(out, " MI BND {name}");
        } else if !is_positive_zero(l) {
            let _ = writeln!(out, " LO BND {name} {l:?}");
        }
        if u.is_finite() {
            let _ = writeln!(out, " UP BND {name} {u:?}");
        }
    }
    out.push_str("ENDATA\n");
    out
}
