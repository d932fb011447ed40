//! Reader and writer for the classic Solomon VRPTW text layout.
//!
//! ```text
//! C101
//!
//! VEHICLE
//! NUMBER     CAPACITY
//!   25         200
//!
//! CUSTOMER
//! CUST NO.  XCOORD.   YCOORD.    DEMAND   READY TIME  DUE DATE   SERVICE   TIME
//!
//!     0      40         50          0          0       1236          0
//!     1      45         68         10        912        967         90
//! ```

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::vrptw::{Customer, Instance, InstanceError};

#[derive(Debug, Error, PartialEq)]
pub enum SolomonError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("malformed row at line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("non-contiguous customer ids at line {line}: expected {expected}, found {found}")]
    NonContiguousIds {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("customer count {requested} out of range 1..={available}")]
    NOutOfRange { requested: usize, available: usize },
    #[error("invalid instance: {0}")]
    Instance(#[from] InstanceError),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

/// One customer line of a Solomon file. Row 0 is the depot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CustomerRow {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub demand: f64,
    pub ready_time: f64,
    pub due_date: f64,
    pub service_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawInstanceFile {
    pub name: String,
    pub vehicle_count_declared: usize,
    pub capacity: f64,
    pub rows: Vec<CustomerRow>,
}

impl RawInstanceFile {
    /// Number of non-depot rows.
    pub fn customer_count(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    /// Re-serializes the file in canonical Solomon layout.
    pub fn to_solomon_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.name);
        out.push('\n');
        out.push_str("VEHICLE\n");
        out.push_str("NUMBER     CAPACITY\n");
        let _ = writeln!(
            out,
            "{:>5}{:>13}",
            self.vehicle_count_declared,
            fmt_num(self.capacity)
        );
        out.push('\n');
        out.push_str(&self.customer_section());
        out
    }

    /// The `CUSTOMER` block: header lines plus one line per row.
    pub fn customer_section(&self) -> String {
        let mut out = String::new();
        out.push_str("CUSTOMER\n");
        out.push_str(
            "CUST NO.  XCOORD.   YCOORD.    DEMAND   READY TIME  DUE DATE   SERVICE   TIME\n",
        );
        out.push('\n');
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{:>5}{:>9}{:>11}{:>11}{:>11}{:>11}{:>11}",
                row.id,
                fmt_num(row.x),
                fmt_num(row.y),
                fmt_num(row.demand),
                fmt_num(row.ready_time),
                fmt_num(row.due_date),
                fmt_num(row.service_time),
            );
        }
        out
    }
}

fn fmt_num(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

pub fn parse_instance(text: &str) -> Result<RawInstanceFile, SolomonError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let name = match lines.next() {
        Some((_, l)) => l.to_string(),
        None => return Err(SolomonError::MalformedHeader("empty document".into())),
    };

    expect_keyword(&mut lines, "VEHICLE")?;
    expect_keyword(&mut lines, "NUMBER")?;
    let (vehicle_count_declared, capacity) = match lines.next() {
        Some((line, l)) => {
            let fields: Vec<&str> = l.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                [n, c] => n.parse::<usize>().ok().zip(c.parse::<f64>().ok()),
                _ => None,
            };
            parsed.ok_or_else(|| {
                SolomonError::MalformedHeader(format!(
                    "line {line}: expected NUMBER and CAPACITY values, got {l:?}"
                ))
            })?
        }
        None => {
            return Err(SolomonError::MalformedHeader(
                "missing NUMBER/CAPACITY line".into(),
            ))
        }
    };
    if capacity.is_nan() || capacity <= 0.0 {
        return Err(SolomonError::MalformedHeader(format!(
            "capacity must be positive, got {capacity}"
        )));
    }
    expect_keyword(&mut lines, "CUSTOMER")?;
    expect_keyword(&mut lines, "CUST")?;

    let mut rows = Vec::new();
    for (line, l) in lines {
        let row = parse_row(line, l)?;
        if row.id != rows.len() {
            return Err(SolomonError::NonContiguousIds {
                line,
                expected: rows.len(),
                found: row.id,
            });
        }
        if row.id == 0 && row.demand != 0.0 {
            return Err(SolomonError::MalformedRow {
                line,
                reason: "depot demand must be 0".into(),
            });
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(SolomonError::MalformedRow {
            line: text.lines().count(),
            reason: "missing depot row".into(),
        });
    }

    Ok(RawInstanceFile {
        name,
        vehicle_count_declared,
        capacity,
        rows,
    })
}

pub fn read_instance(path: &Path) -> Result<RawInstanceFile, SolomonError> {
    let text = std::fs::read_to_string(path).map_err(|e| SolomonError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_instance(&text)
}

fn expect_keyword<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    keyword: &str,
) -> Result<(), SolomonError> {
    match lines.next() {
        Some((_, l)) if l.to_ascii_uppercase().starts_with(keyword) => Ok(()),
        Some((line, l)) => Err(SolomonError::MalformedHeader(format!(
            "line {line}: expected {keyword}, got {l:?}"
        ))),
        None => Err(SolomonError::MalformedHeader(format!(
            "missing {keyword} line"
        ))),
    }
}

fn parse_row(line: usize, l: &str) -> Result<CustomerRow, SolomonError> {
    let fields: Vec<&str> = l.split_whitespace().collect();
    if fields.len() != 7 {
        return Err(SolomonError::MalformedRow {
            line,
            reason: format!("expected 7 fields, found {}", fields.len()),
        });
    }
    let mut values = [0.0f64; 7];
    for (slot, field) in values.iter_mut().zip(&fields) {
        *slot = field
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| SolomonError::MalformedRow {
                line,
                reason: format!("non-numeric field {field:?}"),
            })?;
    }
    let id = values[0];
    if id < 0.0 || id.fract() != 0.0 {
        return Err(SolomonError::MalformedRow {
            line,
            reason: format!("customer id must be a non-negative integer, got {}", fields[0]),
        });
    }
    let row = CustomerRow {
        id: id as usize,
        x: values[1],
        y: values[2],
        demand: values[3],
        ready_time: values[4],
        due_date: values[5],
        service_time: values[6],
    };
    if row.demand < 0.0 {
        return Err(SolomonError::MalformedRow {
            line,
            reason: "negative demand".into(),
        });
    }
    if row.ready_time > row.due_date {
        return Err(SolomonError::MalformedRow {
            line,
            reason: "ready time after due date".into(),
        });
    }
    if row.service_time < 0.0 {
        return Err(SolomonError::MalformedRow {
            line,
            reason: "negative service time".into(),
        });
    }
    Ok(row)
}

/// Keeps the depot and the first `n` customers in file order.
pub fn truncate(raw: &RawInstanceFile, n: usize) -> Result<RawInstanceFile, SolomonError> {
    let available = raw.customer_count();
    if n < 1 || n > available {
        return Err(SolomonError::NOutOfRange {
            requested: n,
            available,
        });
    }
    Ok(RawInstanceFile {
        name: format!("{}.{}", raw.name, n),
        vehicle_count_declared: raw.vehicle_count_declared,
        capacity: raw.capacity,
        rows: raw.rows[..=n].to_vec(),
    })
}

pub fn build_instance(raw: &RawInstanceFile) -> Result<Instance, SolomonError> {
    let nodes = raw
        .rows
        .iter()
        .map(|r| Customer {
            id: r.id,
            x: r.x,
            y: r.y,
            demand: r.demand,
            ready: r.ready_time,
            due: r.due_date,
            service: r.service_time,
        })
        .collect();
    Ok(Instance::new(raw.name.clone(), raw.capacity, nodes)?.with_fleet_size(raw.vehicle_count_declared))
}

/// Reads, optionally truncates, and builds an instance in one go.
pub fn load_instance(path: &Path, customers: Option<usize>) -> Result<(RawInstanceFile, Instance), SolomonError> {
    let raw = read_instance(path)?;
    let raw = match customers {
        Some(n) => truncate(&raw, n)?,
        None => raw,
    };
    let inst = build_instance(&raw)?;
    Ok((raw, inst))
}
