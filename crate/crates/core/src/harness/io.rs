//! CSV artifacts shared by the commands.

use std::fs::{self, File};
use std::path::Path;

use crate::mathcore::PreferenceRay;
use crate::pareto::{FrontPoint, ParetoFront};
use crate::{Error, Result};

pub const FRONT_HEADER: [&str; 4] = ["ray_r1", "ray_r2", "loss1", "loss2"];

pub(crate) fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::format(format!("{}: {other:?}", path.display())),
    }
}

/// Open `path` for CSV output and write `header`.
pub(crate) fn csv_writer(path: &Path, header: &[&str]) -> Result<csv::Writer<File>> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    w.write_record(header).map_err(|e| csv_error(path, e))?;
    Ok(w)
}

pub(crate) fn write_row(w: &mut csv::Writer<File>, path: &Path, row: &[String]) -> Result<()> {
    w.write_record(row).map_err(|e| csv_error(path, e))
}

pub(crate) fn finish(mut w: csv::Writer<File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_front_csv(front: &ParetoFront, path: &Path) -> Result<()> {
    let mut w = csv_writer(path, &FRONT_HEADER)?;
    for p in &front.points {
        let row = [p.ray.r1(), p.ray.r2(), p.losses[0], p.losses[1]].map(|v| v.to_string());
        write_row(&mut w, path, &row)?;
    }
    finish(w, path)
}

/// Read a front written by [`write_front_csv`], attaching `reference`.
pub fn read_front_csv(path: &Path, reference: [f64; 2]) -> Result<ParetoFront> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let header = r.headers().map_err(|e| csv_error(path, e))?.clone();
    if header.iter().collect::<Vec<_>>() != FRONT_HEADER {
        return Err(Error::format(format!("{}: expected columns {}", path.display(), FRONT_HEADER.join(","))));
    }
    let mut points = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let v: Vec<f64> = record
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::format(format!("{} row {}: {e}", path.display(), i + 2)))?;
        points.push(FrontPoint { losses: [v[2], v[3]], ray: PreferenceRay::new(v[0], v[1])? });
    }
    ParetoFront::new(points, reference)
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Square matrix as CSV with `ray_r1` row labels.
pub(crate) fn write_matrix_csv(path: &Path, labels: &[f64], m: &[Vec<f64>]) -> Result<()> {
    let mut header = vec!["ray_r1".to_string()];
    header.extend(labels.iter().map(|l| l.to_string()));
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    w.write_record(&header).map_err(|e| csv_error(path, e))?;
    for (label, row) in labels.iter().zip(m) {
        let mut rec = vec![label.to_string()];
        rec.extend(row.iter().map(|v| v.to_string()));
        write_row(&mut w, path, &rec)?;
    }
    finish(w, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pareto::hypervolume_2d;

    #[test]
    fn front_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("front.csv");
        let points = [[0.1 + 0.2, 1.7], [1.0 / 3.0, 0.9], [1.9, 1e-17]];
        let front = ParetoFront::from_losses(&points, [2.0, 2.0]).unwrap();
        write_front_csv(&front, &path).unwrap();
        let back = read_front_csv(&path, [2.0, 2.0]).unwrap();
        assert_eq!(back, front);
        assert_eq!(hypervolume_2d(&back), hypervolume_2d(&front));
    }

    #[test]
    fn bad_front_csv_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "a,b,c,d\n1,2,3,4\n").unwrap();
        assert!(read_front_csv(&path, [2.0, 2.0]).is_err());
        std::fs::write(&path, "ray_r1,ray_r2,loss1,loss2\n0.5,0.5,x,1\n").unwrap();
        assert!(read_front_csv(&path, [2.0, 2.0]).is_err());
    }
}
