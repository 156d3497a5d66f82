//! Deterministic CSV, OBJ and JSON writers.

use std::fmt::Write as _;
use std::path::Path;

use ellsurf::ksurf::KGrid;
use ellsurf::surfaces::CurveSnapshot;
use serde::Serialize;

use crate::error::CliError;

/// JSON schema version of every document written.
pub const SCHEMA: u32 = 1;

/// 17 significant digits, with `-0` written as `0`.
pub fn num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: path.display().to_string(), source };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, contents).map_err(io)
}

pub const CURVE_HEADER: &str = "t,m,x,y,z,bx,by,bz";

/// Appends one row per vertex of a snapshot.
pub fn curve_rows(out: &mut String, snap: &CurveSnapshot<f64>) {
    for (i, (p, b)) in snap.points.iter().zip(&snap.binormals).enumerate() {
        let m = snap.m_start + i as i64;
        let _ = writeln!(out, "{},{m},{},{},{},{},{},{}", num(snap.t), num(p.x), num(p.y), num(p.z), num(b.x), num(b.y), num(b.z));
    }
}

pub fn curve_csv<'a>(snaps: impl IntoIterator<Item = &'a CurveSnapshot<f64>>) -> String {
    let mut out = format!("{CURVE_HEADER}\n");
    for s in snaps {
        curve_rows(&mut out, s);
    }
    out
}

/// `v x y z` lines followed by 1-indexed `f a b c d` quads.
pub fn obj(grid: &KGrid<f64>) -> String {
    let mut out = String::new();
    for p in &grid.points {
        let _ = writeln!(out, "v {} {} {}", num(p.x), num(p.y), num(p.z));
    }
    for q in grid.quads() {
        let _ = writeln!(out, "f {} {} {} {}", q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1);
    }
    out
}

pub const KGRID_HEADER: &str = "m,n,x,y,z,nx,ny,nz";

pub fn kgrid_csv(grid: &KGrid<f64>) -> String {
    let mut out = format!("{KGRID_HEADER}\n");
    for i in 0..grid.rows {
        for j in 0..grid.cols {
            let (p, n) = (grid.point(i, j), grid.normal(i, j));
            let (m, nn) = (grid.m_start + i as i64, grid.n_start + j as i64);
            let _ = writeln!(out, "{m},{nn},{},{},{},{},{},{}", num(p.x), num(p.y), num(p.z), num(n.x), num(n.y), num(n.z));
        }
    }
    out
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}
