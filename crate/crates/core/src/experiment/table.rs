//! Result tables and their CSV form.
//!
//! A file starts with `#` comment lines carrying the provenance (artifact
//! version, seed and the full config as TOML), then a header row and the
//! data. Reals are written with 17 significant digits so that parsing a file
//! back returns identical values.

use std::fs;
use std::path::Path;

use super::config::{parse_config, ExperimentConfig};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub version: String,
    pub seed: u64,
    pub config: ExperimentConfig,
}

impl Provenance {
    pub fn new(config: &ExperimentConfig) -> Self {
        Provenance {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: config.seed,
            config: config.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnType {
    /// Indices such as kicks, written without a fractional part.
    Integer,
    Real,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub kind: ColumnType,
}

impl Column {
    pub fn integer(name: &str) -> Self {
        Column {
            name: name.into(),
            kind: ColumnType::Integer,
        }
    }

    pub fn real(name: &str) -> Self {
        Column {
            name: name.into(),
            kind: ColumnType::Real,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<f64>>,
    pub provenance: Provenance,
}

impl ResultTable {
    pub fn new(columns: Vec<Column>, provenance: Provenance) -> Self {
        ResultTable {
            columns,
            rows: Vec::new(),
            provenance,
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the schema");
        self.rows.push(row);
    }

    pub fn column_names(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.name.as_str()).collect()
    }

    /// Values of the named column, if present.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c.name == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Full CSV text, provenance comments first.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# tomolab {}\n", self.provenance.version));
        out.push_str(&format!("# seed = {}\n", self.provenance.seed));
        out.push_str("# config:\n");
        for line in self.provenance.config.to_toml().lines() {
            out.push_str(&format!("#   {line}\n"));
        }
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(self.columns.iter().map(|c| c.name.as_str()))
            .expect("writing to memory");
        for row in &self.rows {
            writer
                .write_record(self.columns.iter().zip(row).map(|(c, &v)| format_cell(c.kind, v)))
                .expect("writing to memory");
        }
        let body = writer.into_inner().expect("flushing to memory");
        out.push_str(std::str::from_utf8(&body).expect("CSV of ASCII fields"));
        out
    }
}

fn format_cell(kind: ColumnType, v: f64) -> String {
    match kind {
        ColumnType::Integer if v.fract() == 0.0 && v.abs() < 9.0e15 => format!("{}", v as i64),
        _ => format!("{v:.16e}"),
    }
}

/// Writes `table` as CSV to `path`.
pub fn emit_results(table: &ResultTable, path: &Path) -> Result<()> {
    fs::write(path, table.to_csv()).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses CSV text produced by [`ResultTable::to_csv`].
pub fn parse_results(text: &str) -> Result<ResultTable> {
    let bad = |msg: String| Error::invalid(format!("result table: {msg}"));
    let mut version = None;
    let mut seed = None;
    let mut config_lines = Vec::new();
    let mut in_config = false;
    let mut body_start = 0;
    for line in text.split_inclusive('\n') {
        let Some(comment) = line.strip_prefix('#') else { break };
        body_start += line.len();
        let comment = comment.trim_end_matches(['\n', '\r']);
        if in_config {
            config_lines.push(comment.strip_prefix("   ").unwrap_or(comment.trim_start()));
        } else if let Some(v) = comment.strip_prefix(" tomolab ") {
            version = Some(v.to_string());
        } else if let Some(s) = comment.strip_prefix(" seed = ") {
            seed = Some(s.parse().map_err(|_| bad(format!("bad seed {s:?}")))?);
        } else if comment == " config:" {
            in_config = true;
        }
    }
    let config = parse_config(&config_lines.join("\n"))?;
    let provenance = Provenance {
        version: version.ok_or_else(|| bad("missing version line".into()))?,
        seed: seed.ok_or_else(|| bad("missing seed line".into()))?,
        config,
    };

    let mut reader = csv::Reader::from_reader(text[body_start..].as_bytes());
    let header = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let mut columns: Vec<Column> = header.iter().map(Column::real).collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let row = record
            .iter()
            .map(|cell| cell.parse::<f64>().map_err(|_| bad(format!("bad number {cell:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != columns.len() {
            return Err(bad(format!("row has {} cells, header has {}", row.len(), columns.len())));
        }
        rows.push(row);
        for (col, cell) in columns.iter_mut().zip(record.iter()) {
            if rows.len() == 1 {
                col.kind = ColumnType::Integer;
            }
            if cell.contains(['.', 'e', 'E']) {
                col.kind = ColumnType::Real;
            }
        }
    }
    Ok(ResultTable {
        columns,
        rows,
        provenance,
    })
}
