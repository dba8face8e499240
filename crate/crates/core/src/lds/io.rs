use std::io::Write;
use std::path::Path;

use ndarray::{Array2, ArrayView2};

use super::PointSet;
use crate::error::{Error, Result};

/// Parses the plain-text point format: one point per line, whitespace
/// separated coordinates in `[0, 1)`. Blank lines and `#` comments are
/// skipped.
pub fn parse_points(text: &str) -> Result<PointSet> {
    let mut values = Vec::new();
    let mut dim = None;
    let mut rows = 0;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let start = values.len();
        for tok in line.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| {
                Error::invalid(format!("line {}: '{tok}' is not a number", lineno + 1))
            })?;
            if !(0.0..1.0).contains(&v) {
                return Err(Error::invalid(format!(
                    "line {}: coordinate {v} lies outside [0, 1)",
                    lineno + 1
                )));
            }
            values.push(v);
        }
        let width = values.len() - start;
        match dim {
            None => dim = Some(width),
            Some(d) if d != width => {
                return Err(Error::invalid(format!(
                    "line {}: expected {d} columns, found {width}",
                    lineno + 1
                )))
            }
            _ => {}
        }
        rows += 1;
    }
    let dim = dim.ok_or_else(|| Error::invalid("point file contains no points"))?;
    let points = Array2::from_shape_vec((rows, dim), values).expect("shape checked per line");
    PointSet::external(points)
}

pub fn read_point_file(path: impl AsRef<Path>) -> Result<PointSet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_points(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Writes points in the plain-text format, using shortest round-trip
/// decimal formatting.
pub fn write_points<W: Write>(mut out: W, points: ArrayView2<'_, f64>) -> std::io::Result<()> {
    for row in points.rows() {
        let mut first = true;
        for x in row {
            if !first {
                out.write_all(b" ")?;
            }
            write!(out, "{x}")?;
            first = false;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lds::{random_uniform, GeneratorId};

    #[test]
    fn round_trip_is_exact() {
        let ps = random_uniform(13, 4, 77);
        let mut buf = Vec::new();
        write_points(&mut buf, ps.points()).unwrap();
        let back = parse_points(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back.points(), ps.points());
        assert_eq!(back.generator(), GeneratorId::External);
    }

    #[test]
    fn validation() {
        assert!(parse_points("0.1 0.2\n0.3\n").is_err());
        assert!(parse_points("0.1 1.0\n").is_err());
        assert!(parse_points("0.1 -0.2\n").is_err());
        assert!(parse_points("0.1 abc\n").is_err());
        assert!(parse_points("# nothing\n\n").is_err());
        let ps = parse_points("# des set\n0.1 0.2\n\n0.3 0.4 # trailing\n").unwrap();
        assert_eq!((ps.n(), ps.dim()), (2, 2));
    }
}
