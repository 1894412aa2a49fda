//! Gnuplot scripts for sweep CSV files.

use std::fs;
use std::path::{Path, PathBuf};

use super::CsvTable;
use crate::error::{Error, Result};

/// Builds a gnuplot script for a parsed sweep table. `data` is the path the script reads from.
///
/// Vector sweeps plot the singleton and L1 recovery fractions against `k`. Matrix sweeps plot
/// the singleton fraction against the rank with the inconclusive share as a shaded band above it.
pub fn plot_script(table: &CsvTable, data: &str) -> Result<String> {
    if table.rows.is_empty() {
        return Err(Error::Parse { line: table.header.fields().len() + 1, msg: "no data rows".into() });
    }
    let col = |name: &str| {
        table.columns.iter().position(|c| c == name).map(|i| i + 1).ok_or_else(|| Error::Parse {
            line: table.header.fields().len() + 1,
            msg: format!("missing column `{name}`"),
        })
    };
    let n = table.header.get("n").unwrap_or("?");
    let m = table.header.get("m").unwrap_or("?");
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set datafile commentschars '#'\n");
    s.push_str("set key top right\n");
    s.push_str("set yrange [0:1.05]\n");
    s.push_str("set ylabel 'fraction of trials'\n");
    if table.columns.first().map(String::as_str) == Some("k") {
        let (k, sg, l1) = (col("k")?, col("singleton_fraction")?, col("l1_fraction")?);
        s.push_str(&format!("set title 'vector phase, n = {n}, m = {m}'\n"));
        s.push_str("set xlabel 'sparsity k'\n");
        s.push_str(&format!(
            "plot '{data}' every ::1 using {k}:{sg} with linespoints title 'singleton', \\\n     '{data}' every ::1 using {k}:{l1} with linespoints title 'L1 recovery'\n"
        ));
    } else {
        let (r, t, sg, inc) = (col("rank")?, col("trials")?, col("singleton_fraction")?, col("inconclusive")?);
        s.push_str(&format!("set title 'matrix phase, n = {n}, m = {m}'\n"));
        s.push_str("set xlabel 'rank r'\n");
        s.push_str("set style fill transparent solid 0.3 noborder\n");
        s.push_str(&format!(
            "plot '{data}' every ::1 using {r}:{sg}:(${sg}+${inc}/${t}) with filledcurves title 'inconclusive', \\\n     '{data}' every ::1 using {r}:{sg} with linespoints title 'singleton'\n"
        ));
    }
    Ok(s)
}

/// Reads a sweep CSV and writes `<csv>.gp` next to it. Returns the script path.
pub fn emit_plot(csv: &Path) -> Result<PathBuf> {
    let text = fs::read_to_string(csv)?;
    let table = CsvTable::parse(&text)?;
    let script = plot_script(&table, &csv.display().to_string())?;
    let mut out = csv.as_os_str().to_owned();
    out.push(".gp");
    let out = PathBuf::from(out);
    fs::write(&out, script)?;
    Ok(out)
}
