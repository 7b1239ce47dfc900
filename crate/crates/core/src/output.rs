//! CSV tables and legacy-VTK field dumps.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::mesh::gauss_rule;
use crate::space::{DivConformingPair, StateVector};

/// A table with a fixed header; empty cells are written as nothing.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

/// 17 significant digits, enough to round-trip an `f64`.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn push_values(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&v| Some(v)).collect());
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.map(format_real).unwrap_or_default()).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_file(path, &self.render())
    }

    /// Parses text produced by [`CsvTable::render`].
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Usage("empty CSV".into()))?
            .split(',')
            .map(str::to_string)
            .collect::<Vec<_>>();
        let mut rows = Vec::new();
        for line in lines {
            let row = line
                .split(',')
                .map(|c| {
                    if c.is_empty() {
                        Ok(None)
                    } else {
                        c.parse::<f64>()
                            .map(Some)
                            .map_err(|e| Error::Usage(format!("bad CSV cell '{c}': {e}")))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != header.len() {
                return Err(Error::Usage(format!("CSV row has {} cells, header has {}", row.len(), header.len())));
            }
            rows.push(row);
        }
        Ok(Self { header, rows })
    }
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::Usage(format!("cannot create {}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display())))
}

/// Samples per element edge in field dumps.
pub const VTK_SAMPLES_PER_ELEMENT: usize = 4;

/// Stream function `psi(x, y) = int_{y0}^{y} u_1(x, s) ds` on the sample grid;
/// meaningful when `u . n = 0` on the bottom edge.
fn stream_function(pair: &DivConformingPair, u: &[f64], xs: &[f64], ys: &[f64]) -> Result<Vec<f64>> {
    let rule = gauss_rule(pair.k_prime + 2)?;
    let mut psi = vec![0.0; xs.len() * ys.len()];
    for (i, &x) in xs.iter().enumerate() {
        let mut acc = 0.0;
        for j in 1..ys.len() {
            for (y, w) in rule.mapped(ys[j - 1], ys[j]) {
                acc += w * pair.eval_velocity(u, [x, y], 0)?.value[0];
            }
            psi[i + xs.len() * j] = acc;
        }
    }
    Ok(psi)
}

/// Legacy-VTK structured-points dump of velocity, pressure, divergence and
/// stream function on a uniform `(4 nx + 1) x (4 ny + 1)` grid.
pub fn render_vtk(pair: &DivConformingPair, state: &StateVector) -> Result<String> {
    let ((x0, x1), (y0, y1)) = pair.mesh.extent();
    let nx = VTK_SAMPLES_PER_ELEMENT * pair.mesh.nx() + 1;
    let ny = VTK_SAMPLES_PER_ELEMENT * pair.mesh.ny() + 1;
    let (dx, dy) = ((x1 - x0) / (nx - 1) as f64, (y1 - y0) / (ny - 1) as f64);
    let xs: Vec<f64> = (0..nx).map(|i| if i + 1 == nx { x1 } else { x0 + i as f64 * dx }).collect();
    let ys: Vec<f64> = (0..ny).map(|j| if j + 1 == ny { y1 } else { y0 + j as f64 * dy }).collect();

    let mut vel = String::new();
    let mut pre = String::new();
    let mut div = String::new();
    for &y in &ys {
        for &x in &xs {
            let s = pair.eval_velocity(&state.u, [x, y], 0)?;
            writeln!(vel, "{} {} 0", format_real(s.value[0]), format_real(s.value[1])).unwrap();
            writeln!(pre, "{}", format_real(pair.eval_pressure(&state.p, [x, y])?)).unwrap();
            writeln!(div, "{}", format_real(s.grad[0][0] + s.grad[1][1])).unwrap();
        }
    }
    let psi = stream_function(pair, &state.u, &xs, &ys)?;

    let mut out = String::new();
    writeln!(out, "# vtk DataFile Version 3.0").unwrap();
    writeln!(out, "divspline fields at t = {}", format_real(state.time)).unwrap();
    writeln!(out, "ASCII").unwrap();
    writeln!(out, "DATASET STRUCTURED_POINTS").unwrap();
    writeln!(out, "DIMENSIONS {nx} {ny} 1").unwrap();
    writeln!(out, "ORIGIN {} {} 0", format_real(x0), format_real(y0)).unwrap();
    writeln!(out, "SPACING {} {} 1", format_real(dx), format_real(dy)).unwrap();
    writeln!(out, "POINT_DATA {}", nx * ny).unwrap();
    writeln!(out, "VECTORS velocity double").unwrap();
    out.push_str(&vel);
    for (name, body) in [("pressure", pre), ("divergence", div)] {
        writeln!(out, "SCALARS {name} double 1").unwrap();
        writeln!(out, "LOOKUP_TABLE default").unwrap();
        out.push_str(&body);
    }
    writeln!(out, "SCALARS streamfunction double 1").unwrap();
    writeln!(out, "LOOKUP_TABLE default").unwrap();
    for v in psi {
        writeln!(out, "{}", format_real(v)).unwrap();
    }
    Ok(out)
}

pub fn write_vtk(path: &Path, pair: &DivConformingPair, state: &StateVector) -> Result<()> {
    write_file(path, &render_vtk(pair, state)?)
}
