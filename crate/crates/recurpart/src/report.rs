//! Tabular report emission for the CLI: CSV with a header row, UTF-8,
//! LF line endings, full-precision decimal strings.

use crate::error::Result;
use std::io::Write;

/// A labeled table of numeric strings plus run metadata. Values are
/// stored pre-formatted: `rug::Float`'s display is full precision and
/// `f64`'s is shortest-round-trip, so every numeric string parses back
/// to the same value.
#[derive(Debug, Default)]
pub struct Report {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub metadata: Vec<(String, String)>,
}

impl Report {
    pub fn new<S: Into<String>>(columns: Vec<S>) -> Report {
        Report {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            metadata: Vec::new(),
        }
    }

    pub fn meta<S: Into<String>, T: Into<String>>(&mut self, key: S, value: T) {
        self.metadata.push((key.into(), value.into()));
    }

    pub fn push<S: Into<String>>(&mut self, row: Vec<S>) {
        let row: Vec<String> = row.into_iter().map(Into::into).collect();
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    /// Write the table as CSV: header row then data rows, LF endings.
    pub fn emit_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn emit_csv_path(&self, path: &std::path::Path) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.emit_csv(std::io::BufWriter::new(f))
    }

    /// Plain aligned text for stdout.
    pub fn emit_text<W: Write>(&self, mut w: W) -> Result<()> {
        for (k, v) in &self.metadata {
            writeln!(w, "# {k}: {v}")?;
        }
        writeln!(w, "{}", self.columns.join("\t"))?;
        for row in &self.rows {
            writeln!(w, "{}", row.join("\t"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut r = Report::new(vec!["n", "value"]);
        r.push(vec!["1", "0.5"]);
        r.push(vec!["2", "0.25"]);
        let mut buf = Vec::new();
        r.emit_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,value\n1,0.5\n2,0.25\n");
    }

    #[test]
    fn empty_report_is_header_only() {
        let r = Report::new(vec!["phase", "value"]);
        let mut buf = Vec::new();
        r.emit_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "phase,value\n");
    }

    #[test]
    fn float_strings_round_trip() {
        let prec = crate::hp::Prec::new(64);
        let x = prec.float(2).sqrt();
        let s = x.to_string();
        let back = prec.parse(&s);
        assert!((back - x).abs() < prec.eps(prec.digits()));
        // f64 shortest round trip
        let v = 0.1f64 + 0.2;
        assert_eq!(format!("{v}").parse::<f64>().unwrap(), v);
    }
}
