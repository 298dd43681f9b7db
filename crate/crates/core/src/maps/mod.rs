//! Measured pressure–stiffness and shape–pressure–stiffness maps of the
//! prototype, and the queries built on them. Pressures are in bar.

mod grid;
mod shape;

pub use grid::{stiffness_at, stiffness_range_increase, GridLabel, StiffnessGrid};
pub use shape::{
    pressures_for_shape_and_stiffness, shape_for_pressures, stiffness_for_shape, ShapeRow, ShapeStiffnessTable,
};

use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

pub const WITHOUT_BACKBONE_FILE: &str = "table1_without_backbone.csv";
pub const WITH_BACKBONE_FILE: &str = "table1_with_backbone.csv";
pub const SHAPE_TABLE_FILE: &str = "table2_shape_pressure_stiffness.csv";

const WITHOUT_BACKBONE_CSV: &str = include_str!("../../data/table1_without_backbone.csv");
const WITH_BACKBONE_CSV: &str = include_str!("../../data/table1_with_backbone.csv");
const SHAPE_TABLE_CSV: &str = include_str!("../../data/table2_shape_pressure_stiffness.csv");

pub(crate) fn check_header<R: Read>(reader: &mut csv::Reader<R>, expected: &[&str]) -> std::result::Result<(), String> {
    let header = reader.headers().map_err(|e| e.to_string())?;
    let got: Vec<&str> = header.iter().map(str::trim).collect();
    if got != expected {
        return Err(format!("expected header `{}`, found `{}`", expected.join(","), got.join(",")));
    }
    Ok(())
}

/// Either kind of map file.
#[derive(Debug, Clone, PartialEq)]
pub enum Table {
    Grid(StiffnessGrid),
    Shape(ShapeStiffnessTable),
}

/// Loads a map from CSV, picking the kind from the header.
///
/// A stiffness grid's label is taken from the file name, which must
/// contain `without_backbone` or `with_backbone`.
pub fn load_table(path: impl AsRef<Path>) -> Result<Table> {
    let path = path.as_ref();
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| Error::io_at(path, e))?;
    let header: Vec<&str> = text.lines().next().unwrap_or("").split(',').map(str::trim).collect();
    let parse_err = |m: String| Error::parse(path, m);
    if header == shape::SHAPE_HEADER {
        return ShapeStiffnessTable::read_csv(text.as_bytes()).map(Table::Shape).map_err(parse_err);
    }
    if header == grid::GRID_HEADER {
        let label = label_from_path(path).ok_or_else(|| {
            parse_err("cannot tell the grid variant; name the file *with_backbone* or *without_backbone*".into())
        })?;
        return StiffnessGrid::read_csv(label, text.as_bytes()).map(Table::Grid).map_err(parse_err);
    }
    Err(parse_err(format!(
        "unrecognized header `{}`; expected `{}` or `{}`",
        header.join(","),
        grid::GRID_HEADER.join(","),
        shape::SHAPE_HEADER.join(",")
    )))
}

fn label_from_path(path: &Path) -> Option<GridLabel> {
    let name = path.file_name()?.to_string_lossy().to_lowercase();
    if name.contains("without_backbone") {
        Some(GridLabel::WithoutBackbone)
    } else if name.contains("with_backbone") {
        Some(GridLabel::WithBackbone)
    } else {
        None
    }
}

pub fn load_grid(path: impl AsRef<Path>) -> Result<StiffnessGrid> {
    match load_table(path.as_ref())? {
        Table::Grid(g) => Ok(g),
        Table::Shape(_) => Err(Error::parse(path.as_ref(), "expected a stiffness grid, found a shape table")),
    }
}

pub fn load_shape_table(path: impl AsRef<Path>) -> Result<ShapeStiffnessTable> {
    match load_table(path.as_ref())? {
        Table::Shape(t) => Ok(t),
        Table::Grid(_) => Err(Error::parse(path.as_ref(), "expected a shape table, found a stiffness grid")),
    }
}

/// The prototype's measured pressure–stiffness grid.
pub fn bundled_grid(label: GridLabel) -> StiffnessGrid {
    let text = match label {
        GridLabel::WithBackbone => WITH_BACKBONE_CSV,
        GridLabel::WithoutBackbone => WITHOUT_BACKBONE_CSV,
    };
    StiffnessGrid::read_csv(label, text.as_bytes()).expect("bundled grid is valid")
}

/// The prototype's measured shape–pressure–stiffness table.
pub fn bundled_shape_table() -> ShapeStiffnessTable {
    ShapeStiffnessTable::read_csv(SHAPE_TABLE_CSV.as_bytes()).expect("bundled table is valid")
}

/// All three maps, from a directory or from the bundled copies.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub without_backbone: StiffnessGrid,
    pub with_backbone: StiffnessGrid,
    pub shape: ShapeStiffnessTable,
}

impl Dataset {
    pub fn bundled() -> Self {
        Self {
            without_backbone: bundled_grid(GridLabel::WithoutBackbone),
            with_backbone: bundled_grid(GridLabel::WithBackbone),
            shape: bundled_shape_table(),
        }
    }

    /// Reads the three canonical file names from `dir`.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        Ok(Self {
            without_backbone: load_grid(dir.join(WITHOUT_BACKBONE_FILE))?,
            with_backbone: load_grid(dir.join(WITH_BACKBONE_FILE))?,
            shape: load_shape_table(dir.join(SHAPE_TABLE_FILE))?,
        })
    }

    pub fn grid(&self, label: GridLabel) -> &StiffnessGrid {
        match label {
            GridLabel::WithBackbone => &self.with_backbone,
            GridLabel::WithoutBackbone => &self.without_backbone,
        }
    }
}
