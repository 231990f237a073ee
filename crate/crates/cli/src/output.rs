//! Result envelope and CSV/JSON serialization.
//!
//! Every artifact carries the canonical config echo for provenance plus the
//! derived scalars, so each number in the table can be recomputed from the
//! file alone. Floats are written with 17 significant digits and re-parse
//! to the identical doubles.

use serde_json::{json, Map, Value};

/// Format a float with 17 significant digits (exact f64 round-trip).
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultEnvelope {
    pub command: String,
    /// Canonical config text; re-parses to the identical `RunConfig`.
    pub config_echo: String,
    /// Derived scalars in presentation order.
    pub derived: Vec<(String, f64)>,
    pub warnings: Vec<String>,
    pub table: Table,
}

impl ResultEnvelope {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("# omit-sim {}\n", self.command));
        s.push_str("# --- config ---\n");
        for line in self.config_echo.lines() {
            s.push_str(&format!("# {line}\n"));
        }
        s.push_str("# --- end config ---\n");
        for (key, value) in &self.derived {
            s.push_str(&format!("# derived {key} = {}\n", fmt_float(*value)));
        }
        for w in &self.warnings {
            s.push_str(&format!("# warning: {w}\n"));
        }
        s.push_str(&self.table.columns.join(","));
        s.push('\n');
        for row in &self.table.rows {
            let cells: Vec<String> = row.iter().map(|&v| fmt_float(v)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut derived = Map::new();
        for (key, value) in &self.derived {
            derived.insert(key.clone(), json!(value));
        }
        let value = json!({
            "command": self.command,
            "config": self.config_echo,
            "derived": Value::Object(derived),
            "warnings": self.warnings,
            "table": {
                "columns": self.table.columns,
                "rows": self.table.rows,
            },
        });
        let mut s = serde_json::to_string_pretty(&value).expect("static shape");
        s.push('\n');
        s
    }
}

/// Extract the config echo from a CSV artifact (between the config markers).
pub fn extract_csv_config(csv: &str) -> Option<String> {
    let mut inside = false;
    let mut out = String::new();
    for line in csv.lines() {
        match line {
            "# --- config ---" => inside = true,
            "# --- end config ---" => return Some(out),
            _ if inside => {
                out.push_str(line.strip_prefix("# ").unwrap_or(line));
                out.push('\n');
            }
            _ => {}
        }
    }
    None
}

/// Parse a CSV artifact back into (columns, rows), skipping `#` metadata.
pub fn parse_csv(text: &str) -> Result<Table, String> {
    let mut lines = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#') && !l.trim().is_empty());
    let header = lines.next().ok_or("empty CSV")?;
    let columns: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row: Result<Vec<f64>, _> = line.split(',').map(|c| c.trim().parse::<f64>()).collect();
        let row = row.map_err(|e| format!("row {}: {e}", i + 1))?;
        if row.len() != columns.len() {
            return Err(format!(
                "row {} has {} cells, expected {}",
                i + 1,
                row.len(),
                columns.len()
            ));
        }
        rows.push(row);
    }
    Ok(Table { columns, rows })
}
