//! Series ingestion. One value per line is the canonical format; CSV column
//! selection is a convenience. Timestamps are never parsed.

use std::path::Path;

use crate::CliError;

/// Reads the series at `path`, from `column` of a CSV file when given.
pub fn read_series(path: &Path, column: Option<&str>) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    match column {
        None => parse_lines(&text),
        Some(c) => parse_column(&text, c),
    }
}

/// One value per line; blank lines are skipped.
pub fn parse_lines(text: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let x: f64 = t.parse().map_err(|_| {
            let hint = if t.contains(',') { " (use --column for CSV input)" } else { "" };
            CliError::Invalid(format!("line {}: cannot parse {t:?} as a number{hint}", no + 1))
        })?;
        out.push(x);
    }
    Ok(out)
}

/// Values of one CSV column, selected by header name or 0-based index. A first
/// row whose selected field is not numeric is taken as the header.
pub fn parse_column(text: &str, column: &str) -> Result<Vec<f64>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = rdr.records().enumerate().peekable();
    let bad_csv = |no: usize, e: csv::Error| CliError::Invalid(format!("line {}: {e}", no + 1));

    let index: usize = match column.parse::<usize>() {
        Ok(i) => {
            if let Some((_, Ok(first))) = rows.peek() {
                if first.get(i).is_some_and(|f| f.parse::<f64>().is_err()) {
                    rows.next();
                }
            }
            i
        }
        Err(_) => {
            let (no, header) = rows
                .next()
                .ok_or_else(|| CliError::Invalid("input is empty".into()))?;
            let header = header.map_err(|e| bad_csv(no, e))?;
            header
                .iter()
                .position(|h| h == column)
                .ok_or_else(|| CliError::Invalid(format!("no column named {column:?}")))?
        }
    };

    let mut out = Vec::new();
    for (no, rec) in rows {
        let rec = rec.map_err(|e| bad_csv(no, e))?;
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        let field = rec
            .get(index)
            .ok_or_else(|| CliError::Invalid(format!("line {}: no column {index}", no + 1)))?;
        let x: f64 = field.parse().map_err(|_| {
            CliError::Invalid(format!("line {}: cannot parse {field:?} as a number", no + 1))
        })?;
        out.push(x);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines_skip_blanks() {
        assert_eq!(parse_lines("1\n\n 2.5 \n-3e2\n").unwrap(), vec![1.0, 2.5, -300.0]);
    }

    #[test]
    fn bad_line_is_named() {
        let e = parse_lines("1\nx\n").unwrap_err();
        assert_eq!(e.exit_code(), 3);
        assert!(e.to_string().starts_with("line 2"));
        assert!(parse_lines("1,2\n").unwrap_err().to_string().contains("--column"));
    }

    #[test]
    fn column_by_name_and_index() {
        let csv = "time,value\n2014-10-01 00:00,10\n2014-10-01 00:30,12\n";
        assert_eq!(parse_column(csv, "value").unwrap(), vec![10.0, 12.0]);
        assert_eq!(parse_column(csv, "1").unwrap(), vec![10.0, 12.0]);
        assert_eq!(parse_column("1,2\n3,4\n", "0").unwrap(), vec![1.0, 3.0]);
        assert!(parse_column(csv, "missing").is_err());
        assert!(parse_column(csv, "0").is_err());
    }
}
