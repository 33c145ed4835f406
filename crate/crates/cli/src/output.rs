//! Result tables and their CSV/JSON serialisation.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::Failure;

#[derive(Debug, Clone)]
pub struct Table {
    /// File stem.
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Extra `# key: value` header lines.
    pub notes: Vec<(String, String)>,
    pub summary: Option<Value>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
            summary: None,
        }
    }
}

/// Everything needed to write one output file.
pub struct Document<'a> {
    pub command: &'a str,
    pub preset: Option<&'a str>,
    pub tag: Option<&'a str>,
    pub config: &'a RunConfig,
    pub table: &'a Table,
}

fn num(x: f64) -> String {
    if x.is_finite() {
        // + 0.0 turns −0 into 0
        format!("{:.16e}", x + 0.0)
    } else {
        "NaN".to_string()
    }
}

impl Document<'_> {
    pub fn file_name(&self, format: Format) -> String {
        let ext = match format {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        format!("{}.{ext}", self.table.name)
    }

    pub fn csv(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# twosite {}", env!("CARGO_PKG_VERSION")).unwrap();
        writeln!(s, "# command: {}", self.command).unwrap();
        if let Some(p) = self.preset {
            writeln!(s, "# preset: {p}").unwrap();
        }
        if let Some(t) = self.tag {
            writeln!(s, "# run: {t}").unwrap();
        }
        writeln!(s, "# config:").unwrap();
        let cfg = toml::to_string(self.config).expect("config serialises");
        for line in cfg.lines().filter(|l| !l.is_empty()) {
            writeln!(s, "#   {line}").unwrap();
        }
        for (k, v) in &self.table.notes {
            writeln!(s, "# {k}: {v}").unwrap();
        }
        writeln!(s, "{}", self.table.columns.join(",")).unwrap();
        for row in &self.table.rows {
            let cells: Vec<String> = row.iter().map(|&x| num(x)).collect();
            writeln!(s, "{}", cells.join(",")).unwrap();
        }
        s
    }

    pub fn json(&self) -> String {
        let notes: serde_json::Map<String, Value> = self
            .table
            .notes
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let doc = json!({
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "preset": self.preset,
            "run": self.tag,
            "config": serde_json::to_value(self.config).expect("config serialises"),
            "notes": notes,
            "columns": self.table.columns,
            "rows": self.table.rows,
            "summary": self.table.summary,
        });
        // serde_json maps are ordered by key; NaN becomes null
        let mut s = serde_json::to_string_pretty(&doc).expect("json");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }
}

/// Writes all rendered files; nothing is written if the directory cannot be created.
pub fn write_all(dir: &Path, files: &[(String, String)]) -> Result<Vec<PathBuf>, Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    let mut out = Vec::new();
    for (name, body) in files {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        out.push(path);
    }
    Ok(out)
}
