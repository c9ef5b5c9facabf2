//! Numeric CSV with a `# key=value` metadata preamble.

use std::io::Write;

use crate::CliError;

/// Column-major description, row-major data.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub metadata: Metadata,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            metadata: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|row| row[idx]).collect())
    }
}

/// Twelve significant digits in scientific notation.
pub fn format_value(x: f64) -> String {
    format!("{x:.11e}")
}

fn check_meta_text(text: &str, what: &str) -> Result<(), CliError> {
    if text.contains(['\n', '\r']) {
        return Err(CliError::Usage(format!("metadata {what} {text:?} contains a line break")));
    }
    Ok(())
}

pub fn write_csv<W: Write>(table: &Table, out: W) -> Result<(), CliError> {
    let mut out = std::io::BufWriter::new(out);
    for (key, value) in &table.metadata {
        check_meta_text(key, "key")?;
        check_meta_text(value, "value")?;
        if key.contains('=') {
            return Err(CliError::Usage(format!("metadata key {key:?} contains '='")));
        }
        writeln!(out, "# {key}={value}")?;
    }
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    writer.write_record(&table.columns)?;
    for row in &table.rows {
        writer.write_record(row.iter().map(|&x| format_value(x)))?;
    }
    writer.flush()?;
    Ok(())
}

pub fn to_csv_string(table: &Table) -> Result<String, CliError> {
    let mut buf = Vec::new();
    write_csv(table, &mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
}

pub type Metadata = Vec<(String, String)>;

/// Splits the leading `# key=value` lines from the rest of the text.
pub fn parse_metadata(text: &str) -> Result<(Metadata, &str), CliError> {
    let mut pairs = Vec::new();
    let mut rest = text;
    while let Some(line_body) = rest.strip_prefix('#') {
        let (line, tail) = match line_body.find('\n') {
            Some(i) => (&line_body[..i], &line_body[i + 1..]),
            None => (line_body, ""),
        };
        let line = line.strip_suffix('\r').unwrap_or(line).trim();
        if !line.is_empty() {
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Parse(format!("metadata line {line:?} has no '='")))?;
            pairs.push((key.trim().to_string(), value.trim().to_string()));
        }
        rest = tail;
    }
    Ok((pairs, rest))
}

/// Reads back what [`write_csv`] produces: metadata, a header row, then rows
/// of equal length whose fields all parse as `f64`.
pub fn parse_csv(text: &str) -> Result<Table, CliError> {
    let (metadata, body) = parse_metadata(text)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .from_reader(body.as_bytes());
    let columns: Vec<String> = reader.headers()?.iter().map(|h| h.trim().to_string()).collect();
    if columns.is_empty() || columns.iter().any(String::is_empty) {
        return Err(CliError::Parse("CSV header has an empty column name".into()));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let row = record
            .iter()
            .map(|field| {
                field
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| CliError::Parse(format!("line {}: {field:?}: {e}", rows.len() + 2)))
            })
            .collect::<Result<Vec<f64>, CliError>>()?;
        rows.push(row);
    }
    Ok(Table {
        metadata,
        columns,
        rows,
    })
}
