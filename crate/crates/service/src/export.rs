//! CSV export of dashboard tables: header row, dot decimals, UTF-8. Index
//! columns carry ids (periods as numbers from 1) and values are written in
//! shortest round-trip form, so a reparse gives the same table bit for bit.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use stplan_core::dashboard::{Axis, AxisSelection, Cell, DashboardTable, StakeholderSet};
use stplan_core::ProblemInstance;

use crate::error::{Result, ServiceError};

/// Column order of the single-file report.
pub const REPORT_HEADER: [&str; 7] = [
    "table",
    "facility",
    "criterion",
    "location",
    "period",
    "stakeholder",
    "value",
];

fn csv_err(e: impl std::fmt::Display) -> ServiceError {
    ServiceError::Csv(e.to_string())
}

fn label(instance: &ProblemInstance, stakeholders: Option<&StakeholderSet>, axis: Axis, v: usize) -> String {
    match axis {
        Axis::Facility => instance.facilities()[v].id.clone(),
        Axis::Criterion => instance.criteria()[v].id.clone(),
        Axis::Location => instance.locations()[v].id.clone(),
        Axis::Period => v.to_string(),
        Axis::Stakeholder => stakeholders.map_or_else(|| v.to_string(), |s| s.stakeholders()[v].id.clone()),
    }
}

fn index(instance: &ProblemInstance, stakeholders: Option<&StakeholderSet>, axis: Axis, text: &str) -> Result<usize> {
    let found = match axis {
        Axis::Facility => instance.facility_index(text),
        Axis::Criterion => instance.criterion_index(text),
        Axis::Location => instance.location_index(text),
        Axis::Period => text.parse().ok().filter(|t| (1..=instance.horizon()).contains(t)),
        Axis::Stakeholder => stakeholders.and_then(|s| s.stakeholders().iter().position(|m| m.id == text)),
    };
    found.ok_or_else(|| ServiceError::Csv(format!("unknown {} {text:?}", axis.name())))
}

fn parse_value(text: &str) -> Result<f64> {
    text.parse()
        .map_err(|_| ServiceError::Csv(format!("bad value {text:?}")))
}

/// One table with a column per kept axis and a `value` column.
pub fn write_table<W: Write>(
    out: W,
    instance: &ProblemInstance,
    stakeholders: Option<&StakeholderSet>,
    table: &DashboardTable,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let kept = table.axes.kept();
    let mut header: Vec<&str> = kept.iter().map(|a| a.name()).collect();
    header.push("value");
    w.write_record(&header).map_err(csv_err)?;
    for cell in &table.cells {
        let mut row: Vec<String> = kept
            .iter()
            .zip(&cell.index)
            .map(|(&a, &v)| label(instance, stakeholders, a, v))
            .collect();
        row.push(cell.value.to_string());
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(csv_err)
}

/// Reads a table written by [`write_table`] for the given axes.
pub fn read_table<R: Read>(
    input: R,
    instance: &ProblemInstance,
    stakeholders: Option<&StakeholderSet>,
    axes: &AxisSelection,
) -> Result<DashboardTable> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(csv_err)?.clone();
    let expected: Vec<&str> = axes.kept().iter().map(|a| a.name()).chain(["value"]).collect();
    if header.iter().collect::<Vec<_>>() != expected {
        return Err(ServiceError::Csv(format!("header {:?}, expected {expected:?}", header)));
    }
    let mut cells = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        let index = axes
            .kept()
            .iter()
            .zip(rec.iter())
            .map(|(&a, s)| index(instance, stakeholders, a, s))
            .collect::<Result<Vec<_>>>()?;
        cells.push(Cell {
            index,
            value: parse_value(&rec[axes.kept().len()])?,
        });
    }
    cells.sort_by(|a, b| a.index.cmp(&b.index));
    Ok(DashboardTable {
        name: axes.name(),
        axes: axes.clone(),
        cells,
    })
}

/// Every table in one long-format CSV, one row per cell.
pub fn write_report<W: Write>(
    out: W,
    instance: &ProblemInstance,
    stakeholders: Option<&StakeholderSet>,
    tables: &[DashboardTable],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_HEADER).map_err(csv_err)?;
    for table in tables {
        for cell in &table.cells {
            let mut row = vec![table.name.clone()];
            for axis in Axis::ALL {
                let v = table
                    .axes
                    .kept()
                    .iter()
                    .position(|&a| a == axis)
                    .map(|k| label(instance, stakeholders, axis, cell.index[k]));
                row.push(v.unwrap_or_default());
            }
            row.push(cell.value.to_string());
            w.write_record(&row).map_err(csv_err)?;
        }
    }
    w.flush().map_err(csv_err)
}

/// Reads a long-format report back as `(table name, cells)` in file order.
/// Cell indices follow the canonical axis order, as in the dashboard.
pub fn read_report<R: Read>(
    input: R,
    instance: &ProblemInstance,
    stakeholders: Option<&StakeholderSet>,
) -> Result<Vec<(String, Vec<Cell>)>> {
    let mut r = csv::Reader::from_reader(input);
    if r.headers().map_err(csv_err)?.iter().ne(REPORT_HEADER) {
        return Err(ServiceError::Csv("unexpected report header".into()));
    }
    let mut out: Vec<(String, Vec<Cell>)> = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        let mut idx = Vec::new();
        for (k, axis) in Axis::ALL.into_iter().enumerate() {
            let s = &rec[k + 1];
            if !s.is_empty() {
                idx.push(index(instance, stakeholders, axis, s)?);
            }
        }
        let cell = Cell {
            index: idx,
            value: parse_value(&rec[6])?,
        };
        match out.last_mut() {
            Some((name, cells)) if name == &rec[0] => cells.push(cell),
            _ => out.push((rec[0].to_string(), vec![cell])),
        }
    }
    Ok(out)
}

/// File-system friendly table name: `yhat^LT` -> `yhat_LT`,
/// `y^L(z)` -> `y_L_z`.
pub fn file_stem(table_name: &str) -> String {
    table_name.replace(['^', '('], "_").replace(')', "")
}

/// Writes each table to `dir/<stem>.csv` and returns the paths.
pub fn write_report_dir(
    dir: &Path,
    instance: &ProblemInstance,
    stakeholders: Option<&StakeholderSet>,
    tables: &[DashboardTable],
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| ServiceError::io(dir.display().to_string(), e))?;
    let mut paths = Vec::new();
    for table in tables {
        let path = dir.join(format!("{}.csv", file_stem(&table.name)));
        let file = std::fs::File::create(&path).map_err(|e| ServiceError::io(path.display().to_string(), e))?;
        write_table(std::io::BufWriter::new(file), instance, stakeholders, table)?;
        paths.push(path);
    }
    Ok(paths)
}
