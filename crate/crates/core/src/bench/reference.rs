use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ReferenceError {
    #[error("line {line}: duplicate reference row for {name} with {count} customers")]
    DuplicateKey { line: u64, name: String, count: usize },
    #[error("line {line}: {reason}")]
    MalformedRow { line: u64, reason: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

/// Best-known `(nv, td)` for one instance truncation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceEntry {
    pub nv: usize,
    pub td: f64,
}

/// Reference results keyed by `(instance name, customer count)`. Names are
/// compared case-insensitively.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReferenceTable {
    rows: BTreeMap<(String, usize), ReferenceEntry>,
}

impl ReferenceTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, name: &str, count: usize) -> Option<ReferenceEntry> {
        self.rows.get(&(name.to_ascii_uppercase(), count)).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize, ReferenceEntry)> {
        self.rows.iter().map(|((n, c), e)| (n.as_str(), *c, *e))
    }
}

/// Parses `name,count,nv,td` rows. A leading `name,...` header and `#`
/// comment lines are skipped.
pub fn ingest_reference(text: &str) -> Result<ReferenceTable, ReferenceError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut table = ReferenceTable::default();
    for (index, record) in reader.records().enumerate() {
        let record = record.map_err(|e| ReferenceError::MalformedRow {
            line: e.position().map_or(0, |p| p.line()),
            reason: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let malformed = |reason: String| ReferenceError::MalformedRow { line, reason };
        if index == 0 && record.get(0).is_some_and(|f| f.eq_ignore_ascii_case("name")) {
            continue;
        }
        if record.len() != 4 {
            return Err(malformed(format!("expected 4 fields, found {}", record.len())));
        }
        let name = record[0].to_ascii_uppercase();
        if name.is_empty() {
            return Err(malformed("empty instance name".into()));
        }
        let count: usize = record[1]
            .parse()
            .map_err(|_| malformed(format!("invalid customer count {:?}", &record[1])))?;
        let nv: usize = record[2]
            .parse()
            .map_err(|_| malformed(format!("invalid vehicle count {:?}", &record[2])))?;
        let td: f64 = record[3]
            .parse()
            .map_err(|_| malformed(format!("invalid distance {:?}", &record[3])))?;
        if nv < 1 {
            return Err(malformed("vehicle count must be at least 1".into()));
        }
        if !(td > 0.0 && td.is_finite()) {
            return Err(malformed(format!("distance must be positive, got {td}")));
        }
        if table.rows.insert((name.clone(), count), ReferenceEntry { nv, td }).is_some() {
            return Err(ReferenceError::DuplicateKey { line, name, count });
        }
    }
    Ok(table)
}

pub fn load_reference(path: &Path) -> Result<ReferenceTable, ReferenceError> {
    let text = std::fs::read_to_string(path).map_err(|e| ReferenceError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    ingest_reference(&text)
}
