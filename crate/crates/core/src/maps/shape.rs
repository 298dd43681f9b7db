use std::io::Read;

use serde::Deserialize;
use spade::{DelaunayTriangulation, FloatTriangulation, HasPosition, Point2, Triangulation};

use crate::error::{Error, Result};

/// One measured operating point: bend angle, pressure pair and stiffness.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct ShapeRow {
    #[serde(rename = "phi_rad")]
    pub phi: f64,
    #[serde(rename = "p1_bar")]
    pub p1: f64,
    #[serde(rename = "p2_bar")]
    pub p2: f64,
    #[serde(rename = "k_nm_per_rad")]
    pub k: f64,
}

pub(crate) const SHAPE_HEADER: [&str; 4] = ["phi_rad", "p1_bar", "p2_bar", "k_nm_per_rad"];

/// Shape–pressure–stiffness samples grouped into blocks of equal `φ`.
///
/// Blocks are ordered by increasing `φ` and hold the same number of rows.
/// Within a block `p1`, `p2` and `k` all strictly increase.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeStiffnessTable {
    rows: Vec<ShapeRow>,
    block_len: usize,
}

impl ShapeStiffnessTable {
    pub fn new(rows: Vec<ShapeRow>) -> Result<Self> {
        Self::validated(rows).map_err(Error::Data)
    }

    fn validated(rows: Vec<ShapeRow>) -> std::result::Result<Self, String> {
        if rows.is_empty() {
            return Err("no rows".into());
        }
        if let Some(i) = rows
            .iter()
            .position(|r| ![r.phi, r.p1, r.p2, r.k].iter().all(|v| v.is_finite()) || r.k <= 0.0)
        {
            return Err(format!("row {}: values must be finite with positive stiffness", i + 2));
        }
        let mut blocks: Vec<&[ShapeRow]> = Vec::new();
        let mut start = 0;
        for i in 1..=rows.len() {
            if i == rows.len() || rows[i].phi != rows[start].phi {
                blocks.push(&rows[start..i]);
                start = i;
            }
        }
        let block_len = blocks[0].len();
        let mut offset = 0;
        for (b, block) in blocks.iter().enumerate() {
            if block.len() != block_len {
                return Err(format!(
                    "phi block {} has {} rows, expected {block_len}",
                    block[0].phi,
                    block.len()
                ));
            }
            if b > 0 && block[0].phi <= blocks[b - 1][0].phi {
                return Err(format!("row {}: phi blocks not strictly increasing", offset + 2));
            }
            for (w, pair) in block.windows(2).enumerate() {
                let (a, c) = (pair[0], pair[1]);
                let line = offset + w + 3;
                if c.p1 <= a.p1 {
                    return Err(format!("row {line}: p1_bar not strictly increasing within phi = {}", a.phi));
                }
                if c.p2 <= a.p2 {
                    return Err(format!("row {line}: p2_bar not strictly increasing within phi = {}", a.phi));
                }
                if c.k <= a.k {
                    return Err(format!("row {line}: k_nm_per_rad not strictly increasing within phi = {}", a.phi));
                }
            }
            offset += block.len();
        }
        Ok(Self { rows, block_len })
    }

    pub fn read_csv<R: Read>(input: R) -> std::result::Result<Self, String> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        super::check_header(&mut reader, &SHAPE_HEADER)?;
        let rows = reader
            .deserialize::<ShapeRow>()
            .enumerate()
            .map(|(i, r)| r.map_err(|e| format!("row {}: {e}", i + 2)))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::validated(rows)
    }

    pub fn rows(&self) -> &[ShapeRow] {
        &self.rows
    }

    pub fn blocks(&self) -> impl Iterator<Item = &[ShapeRow]> {
        self.rows.chunks(self.block_len)
    }

    /// Tabulated bend angles in increasing order.
    pub fn phis(&self) -> Vec<f64> {
        self.blocks().map(|b| b[0].phi).collect()
    }

    pub fn phi_range(&self) -> (f64, f64) {
        (self.rows[0].phi, self.rows[self.rows.len() - 1].phi)
    }

    /// The operating points at `phi`, interpolated row by row between the
    /// neighbouring blocks. Tabulated blocks are returned unchanged.
    pub fn block_at(&self, phi: f64) -> Result<Vec<ShapeRow>> {
        let (lo, hi) = self.phi_range();
        if !(phi >= lo && phi <= hi) {
            return Err(Error::domain("phi", phi, format!("[{lo}, {hi}] rad")));
        }
        let blocks: Vec<&[ShapeRow]> = self.blocks().collect();
        if let Some(b) = blocks.iter().find(|b| b[0].phi == phi) {
            return Ok(b.to_vec());
        }
        let upper = blocks.iter().position(|b| b[0].phi > phi).expect("phi inside range");
        let (a, b) = (blocks[upper - 1], blocks[upper]);
        let t = (phi - a[0].phi) / (b[0].phi - a[0].phi);
        Ok(a
            .iter()
            .zip(b)
            .map(|(x, y)| ShapeRow {
                phi,
                p1: lerp(x.p1, y.p1, t),
                p2: lerp(x.p2, y.p2, t),
                k: lerp(x.k, y.k, t),
            })
            .collect())
    }
}

fn lerp(a: f64, b: f64, t: f64) -> f64 {
    a + (b - a) * t
}

/// Point on a block where `key` equals `target`, interpolating the other
/// columns piecewise-linearly. `key` must be strictly increasing.
fn along_block(block: &[ShapeRow], key: fn(&ShapeRow) -> f64, target: f64) -> Option<ShapeRow> {
    if let Some(r) = block.iter().find(|r| key(r) == target) {
        return Some(*r);
    }
    block.windows(2).find_map(|w| {
        let (a, b) = (key(&w[0]), key(&w[1]));
        (a < target && target < b).then(|| {
            let s = (target - a) / (b - a);
            ShapeRow {
                phi: w[0].phi,
                p1: lerp(w[0].p1, w[1].p1, s),
                p2: lerp(w[0].p2, w[1].p2, s),
                k: lerp(w[0].k, w[1].k, s),
            }
        })
    })
}

/// Pressure pair `(p1, p2)` in bar holding the section at `phi` with
/// bending stiffness `k_target`.
pub fn pressures_for_shape_and_stiffness(table: &ShapeStiffnessTable, phi: f64, k_target: f64) -> Result<(f64, f64)> {
    if !k_target.is_finite() {
        return Err(Error::domain("k", k_target, "finite Nm/rad"));
    }
    let block = table.block_at(phi)?;
    let (k_min, k_max) = (block[0].k, block[block.len() - 1].k);
    along_block(&block, |r| r.k, k_target)
        .map(|r| (r.p1, r.p2))
        .ok_or(Error::InfeasibleStiffness {
            phi,
            k: k_target,
            k_min,
            k_max,
        })
}

/// Forward interpolant of the table: `(p2, k)` reached at bend `phi` with
/// the lower pressure set to `p1`.
pub fn stiffness_for_shape(table: &ShapeStiffnessTable, phi: f64, p1: f64) -> Result<(f64, f64)> {
    let block = table.block_at(phi)?;
    let (lo, hi) = (block[0].p1, block[block.len() - 1].p1);
    along_block(&block, |r| r.p1, p1)
        .map(|r| (r.p2, r.k))
        .ok_or_else(|| Error::domain("p1", p1, format!("[{lo}, {hi}] bar")))
}

struct PressureNode {
    position: Point2<f64>,
    phi: f64,
}

impl HasPosition for PressureNode {
    type Scalar = f64;

    fn position(&self) -> Point2<f64> {
        self.position
    }
}

/// Bend angle reached at pressures `(p1, p2)`, interpolated linearly over a
/// Delaunay triangulation of the tabulated pressure pairs.
pub fn shape_for_pressures(table: &ShapeStiffnessTable, p1: f64, p2: f64) -> Result<f64> {
    if !(p1.is_finite() && p2.is_finite()) {
        return Err(Error::OutOfMap { p1, p2 });
    }
    if let Some(r) = table.rows.iter().find(|r| r.p1 == p1 && r.p2 == p2) {
        return Ok(r.phi);
    }
    let mut tri = DelaunayTriangulation::<PressureNode>::new();
    for r in &table.rows {
        tri.insert(PressureNode {
            position: Point2::new(r.p1, r.p2),
            phi: r.phi,
        })
        .map_err(|e| Error::Data(format!("pressure pair ({}, {}): {e:?}", r.p1, r.p2)))?;
    }
    tri.barycentric()
        .interpolate(|v| v.data().phi, Point2::new(p1, p2))
        .ok_or(Error::OutOfMap { p1, p2 })
}
