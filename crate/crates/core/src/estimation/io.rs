//! CSV formats for tracker sequences (`t,bx,by,bz,mx,my,mz,tx,ty,tz`, seconds
//! and meters) and load-cell traces (`t,f`, seconds and newtons).

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::check_header;

use super::{ForceTrace, MarkerSet, TrackerSample, TrackerSequence};

const TRACKER_HEADER: [&str; 10] = ["t", "bx", "by", "bz", "mx", "my", "mz", "tx", "ty", "tz"];
const FORCE_HEADER: [&str; 2] = ["t", "f"];

#[derive(Debug, Serialize, Deserialize)]
struct TrackerRow {
    t: f64,
    bx: f64,
    by: f64,
    bz: f64,
    mx: f64,
    my: f64,
    mz: f64,
    tx: f64,
    ty: f64,
    tz: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct ForceRow {
    t: f64,
    f: f64,
}

fn row_error(e: csv::Error) -> String {
    match e.position() {
        Some(p) => format!("line {}: {}", p.line(), e),
        None => e.to_string(),
    }
}

pub fn read_tracker_csv<R: Read>(input: R) -> std::result::Result<TrackerSequence, String> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    check_header(&mut reader, &TRACKER_HEADER)?;
    let mut samples = Vec::new();
    for row in reader.deserialize::<TrackerRow>() {
        let r = row.map_err(row_error)?;
        samples.push(TrackerSample {
            time: r.t,
            markers: MarkerSet::new(
                Vector3::new(r.bx, r.by, r.bz),
                Vector3::new(r.mx, r.my, r.mz),
                Vector3::new(r.tx, r.ty, r.tz),
            ),
        });
    }
    TrackerSequence::new(samples).map_err(|e| e.to_string())
}

pub fn read_force_csv<R: Read>(input: R) -> std::result::Result<ForceTrace, String> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    check_header(&mut reader, &FORCE_HEADER)?;
    let samples = reader
        .deserialize::<ForceRow>()
        .map(|row| row.map(|r| (r.t, r.f)).map_err(row_error))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    ForceTrace::new(samples).map_err(|e| e.to_string())
}

pub fn load_tracker(path: &Path) -> Result<TrackerSequence> {
    let file = File::open(path).map_err(|e| Error::io_at(path, e))?;
    read_tracker_csv(file).map_err(|m| Error::parse(path, m))
}

pub fn load_force_trace(path: &Path) -> Result<ForceTrace> {
    let file = File::open(path).map_err(|e| Error::io_at(path, e))?;
    read_force_csv(file).map_err(|m| Error::parse(path, m))
}

/// Writes full-precision values so a round trip is lossless.
pub fn write_tracker_csv<W: Write>(seq: &TrackerSequence, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in seq.samples() {
        let MarkerSet { base: b, mid: m, tip: t } = s.markers;
        w.serialize(TrackerRow {
            t: s.time,
            bx: b.x,
            by: b.y,
            bz: b.z,
            mx: m.x,
            my: m.y,
            mz: m.z,
            tx: t.x,
            ty: t.y,
            tz: t.z,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_force_csv<W: Write>(trace: &ForceTrace, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for &(t, f) in trace.samples() {
        w.serialize(ForceRow { t, f })?;
    }
    w.flush()?;
    Ok(())
}
