//! Files written by a run: CSV tables, plot scripts, the convergence report
//! and the manifest.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::experiments::Headline;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    /// Undefined value, such as the width of a missing crossing.
    Missing,
}

impl Cell {
    /// Shortest representation that parses back to the same double.
    fn render(&self) -> String {
        match self {
            Cell::Num(v) if v.is_finite() => format!("{v:?}"),
            Cell::Num(_) | Cell::Missing => String::new(),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// Which columns a generated plot script draws.
#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    x: String,
    ys: Vec<String>,
    group: Option<String>,
    log_x: bool,
}

impl Plot {
    pub fn new(x: &str, ys: &[&str]) -> Self {
        Self {
            x: x.into(),
            ys: ys.iter().map(|s| s.to_string()).collect(),
            group: None,
            log_x: false,
        }
    }

    pub fn grouped(mut self, column: &str) -> Self {
        self.group = Some(column.into());
        self
    }

    pub fn log_x(mut self) -> Self {
        self.log_x = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub plot: Option<Plot>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            plot: None,
        }
    }

    pub fn with_plot(mut self, plot: Plot) -> Self {
        self.plot = Some(plot);
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }
}

fn py_str(s: &str) -> String {
    format!("{s:?}")
}

/// Standalone matplotlib script drawing `plot` from `table`'s CSV.
pub fn plot_script(table: &Table, plot: &Plot) -> String {
    let ys: Vec<String> = plot.ys.iter().map(|y| py_str(y)).collect();
    let group = plot.group.as_deref().map_or("None".to_string(), py_str);
    format!(
        r#"#!/usr/bin/env python3
"""Plot {csv}: usage `python3 {name}.plot.py [{csv}]`."""
import csv
import sys
from collections import defaultdict

import matplotlib.pyplot as plt

X = {x}
YS = [{ys}]
GROUP = {group}
LOG_X = {log_x}

path = sys.argv[1] if len(sys.argv) > 1 else {csv_lit}
with open(path, newline="") as fh:
    rows = list(csv.DictReader(fh))

series = defaultdict(list)
for row in rows:
    for y in YS:
        if row[X] and row[y]:
            label = y if GROUP is None else f"{{y}} {{GROUP}}={{row[GROUP]}}"
            series[label].append((float(row[X]), float(row[y])))

for label, points in series.items():
    points.sort()
    xs, vals = zip(*points)
    plt.plot(xs, vals, label=label)
if LOG_X:
    plt.xscale("log")
plt.xlabel(X)
plt.legend(fontsize="small")
plt.savefig({png}, dpi=150)
"#,
        csv = table.file_name(),
        csv_lit = py_str(&table.file_name()),
        name = table.name,
        x = py_str(&plot.x),
        ys = ys.join(", "),
        log_x = if plot.log_x { "True" } else { "False" },
        png = py_str(&format!("{}.png", table.name)),
    )
}

/// Convergence verdict of one headline value.
pub fn converged(h: &Headline, tolerance: f64) -> bool {
    (h.coarse - h.fine).abs() <= tolerance * h.coarse.abs().max(1.0)
}

pub fn convergence_csv(headlines: &[Headline], tolerance: f64) -> String {
    let mut t = Table::new(
        "convergence",
        &["quantity", "value_1x", "value_2x", "abs_diff", "tolerance", "converged"],
    );
    for h in headlines {
        t.push(vec![
            Cell::Text(h.name.clone()),
            Cell::Num(h.coarse),
            Cell::Num(h.fine),
            Cell::Num((h.coarse - h.fine).abs()),
            Cell::Num(tolerance * h.coarse.abs().max(1.0)),
            Cell::Int(converged(h, tolerance) as i64),
        ]);
    }
    t.to_csv()
}

/// Writes `contents` to `dir/name` and returns the path.
pub fn write(dir: &Path, name: &str, contents: &str) -> io::Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}
