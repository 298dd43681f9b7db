use std::fmt;
use std::io::Read;

use serde::Deserialize;

use crate::error::{Error, Result};

/// Which prototype a pressure–stiffness grid was measured on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GridLabel {
    WithBackbone,
    WithoutBackbone,
}

impl fmt::Display for GridLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GridLabel::WithBackbone => "with_backbone",
            GridLabel::WithoutBackbone => "without_backbone",
        })
    }
}

/// Measured bending stiffness over antagonistic pressure pairs, in bar and
/// Nm/rad. Unmeasured cells are `None` and are never extrapolated into.
#[derive(Debug, Clone, PartialEq)]
pub struct StiffnessGrid {
    label: GridLabel,
    p1_axis: Vec<f64>,
    p2_axis: Vec<f64>,
    k: Vec<Vec<Option<f64>>>,
}

#[derive(Deserialize)]
struct CellRow {
    p1_bar: f64,
    p2_bar: f64,
    k_nm_per_rad: f64,
}

pub(crate) const GRID_HEADER: [&str; 3] = ["p1_bar", "p2_bar", "k_nm_per_rad"];

impl StiffnessGrid {
    /// Builds a grid from explicit axes and a `p1 × p2` matrix.
    pub fn new(label: GridLabel, p1_axis: Vec<f64>, p2_axis: Vec<f64>, k: Vec<Vec<Option<f64>>>) -> Result<Self> {
        let grid = Self {
            label,
            p1_axis,
            p2_axis,
            k,
        };
        grid.validate().map_err(Error::Data)?;
        Ok(grid)
    }

    /// Builds a grid from `(p1, p2, k)` cells; axes are the distinct
    /// pressures present and every other cell is unmeasured.
    pub fn from_cells(label: GridLabel, cells: &[(f64, f64, f64)]) -> Result<Self> {
        let axis = |sel: fn(&(f64, f64, f64)) -> f64| {
            let mut v: Vec<f64> = cells.iter().map(sel).collect();
            v.sort_by(f64::total_cmp);
            v.dedup();
            v
        };
        let p1_axis = axis(|c| c.0);
        let p2_axis = axis(|c| c.1);
        let mut k = vec![vec![None; p2_axis.len()]; p1_axis.len()];
        for &(p1, p2, v) in cells {
            let i = p1_axis.iter().position(|&a| a == p1).expect("axis built from cells");
            let j = p2_axis.iter().position(|&a| a == p2).expect("axis built from cells");
            if k[i][j].replace(v).is_some() {
                return Err(Error::Data(format!("duplicate cell ({p1}, {p2})")));
            }
        }
        Self::new(label, p1_axis, p2_axis, k)
    }

    /// Parses the `p1_bar,p2_bar,k_nm_per_rad` CSV layout. Cells must be
    /// listed in increasing `(p1, p2)` order.
    pub fn read_csv<R: Read>(label: GridLabel, input: R) -> std::result::Result<Self, String> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        super::check_header(&mut reader, &GRID_HEADER)?;
        let mut cells: Vec<(f64, f64, f64)> = Vec::new();
        for (idx, row) in reader.deserialize::<CellRow>().enumerate() {
            let line = idx + 2;
            let r = row.map_err(|e| format!("row {line}: {e}"))?;
            let cell = (r.p1_bar, r.p2_bar, r.k_nm_per_rad);
            if let Some(prev) = cells.last() {
                if (prev.0, prev.1) >= (cell.0, cell.1) {
                    return Err(format!(
                        "row {line}: cell ({}, {}) not in increasing (p1_bar, p2_bar) order",
                        cell.0, cell.1
                    ));
                }
            }
            cells.push(cell);
        }
        if cells.is_empty() {
            return Err("no cells".into());
        }
        Self::from_cells(label, &cells).map_err(|e| match e {
            Error::Data(m) => m,
            other => other.to_string(),
        })
    }

    fn validate(&self) -> std::result::Result<(), String> {
        for (name, axis) in [("p1_bar", &self.p1_axis), ("p2_bar", &self.p2_axis)] {
            if axis.is_empty() || axis.iter().any(|v| !v.is_finite()) {
                return Err(format!("{name} axis must be non-empty and finite"));
            }
            if let Some(w) = axis.windows(2).find(|w| w[1] <= w[0]) {
                return Err(format!("{name} axis not strictly increasing at {} -> {}", w[0], w[1]));
            }
        }
        if self.k.len() != self.p1_axis.len() || self.k.iter().any(|r| r.len() != self.p2_axis.len()) {
            return Err(format!(
                "stiffness matrix does not match axes ({} x {})",
                self.p1_axis.len(),
                self.p2_axis.len()
            ));
        }
        for (i, j, k) in self.cells() {
            let (p1, p2) = (self.p1_axis[i], self.p2_axis[j]);
            if !(k.is_finite() && k > 0.0) {
                return Err(format!("cell ({p1}, {p2}): stiffness must be positive, got {k}"));
            }
            if p2 < p1 {
                return Err(format!("cell ({p1}, {p2}): measured cells need p2 >= p1"));
            }
        }
        // Non-decreasing along every row and column of adjacent valid cells.
        for i in 0..self.p1_axis.len() {
            for j in 0..self.p2_axis.len() {
                let Some(k) = self.k[i][j] else { continue };
                let neighbours = [(i + 1, j), (i, j + 1)];
                for (a, b) in neighbours {
                    if let Some(next) = self.k.get(a).and_then(|r| r.get(b)).copied().flatten() {
                        if next < k {
                            return Err(format!(
                                "stiffness decreases from ({}, {}) to ({}, {})",
                                self.p1_axis[i], self.p2_axis[j], self.p1_axis[a], self.p2_axis[b]
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn label(&self) -> GridLabel {
        self.label
    }

    pub fn p1_axis(&self) -> &[f64] {
        &self.p1_axis
    }

    pub fn p2_axis(&self) -> &[f64] {
        &self.p2_axis
    }

    /// Stored value at axis indices `(i, j)`.
    pub fn cell(&self, i: usize, j: usize) -> Option<f64> {
        self.k.get(i).and_then(|r| r.get(j)).copied().flatten()
    }

    /// Stored value at an exact node, if measured.
    pub fn node(&self, p1: f64, p2: f64) -> Option<f64> {
        let i = self.p1_axis.iter().position(|&a| a == p1)?;
        let j = self.p2_axis.iter().position(|&a| a == p2)?;
        self.cell(i, j)
    }

    /// Measured cells as `(i, j, k)`, row-major.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.k
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().filter_map(move |(j, k)| k.map(|k| (i, j, k))))
    }

    pub fn valid_cell_count(&self) -> usize {
        self.cells().count()
    }
}

/// Indices `i` with `axis[i] <= x <= axis[i + 1]`; two on an interior node.
fn brackets(axis: &[f64], x: f64) -> Vec<usize> {
    (0..axis.len().saturating_sub(1))
        .filter(|&i| axis[i] <= x && x <= axis[i + 1])
        .collect()
}

/// Interpolated stiffness at `(p1, p2)` bar.
///
/// Bilinear inside fully measured cells. A cell with one unmeasured corner
/// (the diagonal of the `p2 >= p1` region) is split along its diagonal and
/// interpolated linearly on the measured triangle. Measured nodes are
/// returned exactly.
pub fn stiffness_at(grid: &StiffnessGrid, p1: f64, p2: f64) -> Result<f64> {
    if !p1.is_finite() {
        return Err(Error::domain("p1", p1, "finite bar"));
    }
    if !p2.is_finite() {
        return Err(Error::domain("p2", p2, "finite bar"));
    }
    let out = || Error::OutOfMap { p1, p2 };
    if let (Some(i), Some(j)) = (
        grid.p1_axis.iter().position(|&a| a == p1),
        grid.p2_axis.iter().position(|&a| a == p2),
    ) {
        return grid.cell(i, j).ok_or_else(out);
    }
    for i in brackets(&grid.p1_axis, p1) {
        for j in brackets(&grid.p2_axis, p2) {
            if let Some(k) = interpolate_cell(grid, i, j, p1, p2) {
                return Ok(k);
            }
        }
    }
    Err(out())
}

fn interpolate_cell(grid: &StiffnessGrid, i: usize, j: usize, p1: f64, p2: f64) -> Option<f64> {
    let u = (p1 - grid.p1_axis[i]) / (grid.p1_axis[i + 1] - grid.p1_axis[i]);
    let v = (p2 - grid.p2_axis[j]) / (grid.p2_axis[j + 1] - grid.p2_axis[j]);
    let corners = [
        ((0.0, 0.0), grid.cell(i, j)),
        ((0.0, 1.0), grid.cell(i, j + 1)),
        ((1.0, 0.0), grid.cell(i + 1, j)),
        ((1.0, 1.0), grid.cell(i + 1, j + 1)),
    ];
    let valid: Vec<((f64, f64), f64)> = corners.iter().filter_map(|&(c, k)| k.map(|k| (c, k))).collect();
    match valid.len() {
        4 => {
            let [a, b, c, d] = [valid[0].1, valid[1].1, valid[2].1, valid[3].1];
            Some((1.0 - u) * ((1.0 - v) * a + v * b) + u * ((1.0 - v) * c + v * d))
        }
        3 => {
            let [(pa, ka), (pb, kb), (pc, kc)] = [valid[0], valid[1], valid[2]];
            let det = (pb.0 - pa.0) * (pc.1 - pa.1) - (pc.0 - pa.0) * (pb.1 - pa.1);
            let wb = ((u - pa.0) * (pc.1 - pa.1) - (pc.0 - pa.0) * (v - pa.1)) / det;
            let wc = ((pb.0 - pa.0) * (v - pa.1) - (u - pa.0) * (pb.1 - pa.1)) / det;
            let wa = 1.0 - wb - wc;
            const EPS: f64 = 1e-12;
            (wa >= -EPS && wb >= -EPS && wc >= -EPS).then_some(wa * ka + wb * kb + wc * kc)
        }
        _ => None,
    }
}

/// Percentage increase of the largest measured stiffness over the natural
/// (zero-pressure) stiffness.
pub fn stiffness_range_increase(grid: &StiffnessGrid) -> Result<f64> {
    let natural = grid
        .node(0.0, 0.0)
        .ok_or_else(|| Error::Data(format!("{} grid has no (0, 0) cell", grid.label)))?;
    let max = grid.cells().map(|c| c.2).fold(f64::NEG_INFINITY, f64::max);
    Ok(100.0 * (max - natural) / natural)
}
