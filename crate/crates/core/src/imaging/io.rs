//! Image and mask ingestion: binary 8-bit PGM (P5) and plain-text matrix
//! CSV.

use std::io::Read;
use std::path::Path;

use super::BinaryMask;
use crate::error::FirError;
use crate::Result;

/// Reads a P5 PGM with maxval <= 255 into a grid of intensities.
pub fn read_pgm(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .map_err(|e| parse_err(path, &e.to_string()))?
        .read_to_end(&mut bytes)?;
    parse_pgm(&bytes).map_err(|detail| parse_err(path, &detail))
}

fn parse_err(path: &Path, detail: &str) -> FirError {
    FirError::ParseError {
        path: path.display().to_string(),
        detail: detail.to_string(),
    }
}

fn parse_pgm(bytes: &[u8]) -> std::result::Result<Vec<Vec<f64>>, String> {
    let mut pos = 0usize;

    // header tokens may be separated by whitespace and '#' comments
    let next_token = |pos: &mut usize| -> std::result::Result<String, String> {
        loop {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
            if *pos < bytes.len() && bytes[*pos] == b'#' {
                while *pos < bytes.len() && bytes[*pos] != b'\n' {
                    *pos += 1;
                }
                continue;
            }
            break;
        }
        let start = *pos;
        while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if start == *pos {
            return Err("truncated header".to_string());
        }
        Ok(String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
    };

    let magic = next_token(&mut pos)?;
    if magic != "P5" {
        return Err(format!("expected P5 magic, found `{magic}`"));
    }
    let width: usize = next_token(&mut pos)?
        .parse()
        .map_err(|_| "bad width".to_string())?;
    let height: usize = next_token(&mut pos)?
        .parse()
        .map_err(|_| "bad height".to_string())?;
    let maxval: usize = next_token(&mut pos)?
        .parse()
        .map_err(|_| "bad maxval".to_string())?;
    if maxval == 0 || maxval > 255 {
        return Err(format!("maxval {maxval} outside 1..=255"));
    }
    if width == 0 || height == 0 {
        return Err("zero image dimension".to_string());
    }
    // exactly one whitespace byte separates the header from the raster
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err("missing raster separator".to_string());
    }
    pos += 1;
    let needed = width * height;
    if bytes.len() - pos < needed {
        return Err(format!(
            "raster holds {} bytes, needs {needed}",
            bytes.len() - pos
        ));
    }
    let raster = &bytes[pos..pos + needed];
    Ok((0..height)
        .map(|r| {
            raster[r * width..(r + 1) * width]
                .iter()
                .map(|&b| b as f64)
                .collect()
        })
        .collect())
}

/// Writes an 8-bit P5 PGM.
pub fn write_pgm(path: &Path, rows: &[Vec<u8>]) -> Result<()> {
    use std::io::Write;
    let h = rows.len();
    let w = rows.first().map(|r| r.len()).unwrap_or(0);
    if h == 0 || w == 0 {
        return Err(FirError::EmptyInput("pgm raster".to_string()));
    }
    let mut f = std::fs::File::create(path)?;
    write!(f, "P5\n{w} {h}\n255\n")?;
    for row in rows {
        if row.len() != w {
            return Err(FirError::ShapeError("ragged pgm rows".to_string()));
        }
        f.write_all(row)?;
    }
    Ok(())
}

/// Reads a plain-text matrix: one row per line, comma-separated values,
/// `#` comment lines ignored.
pub fn read_matrix_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = std::fs::read_to_string(path).map_err(|e| parse_err(path, &e.to_string()))?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let row: std::result::Result<Vec<f64>, _> = trimmed
            .split(',')
            .map(|tok| tok.trim().parse::<f64>())
            .collect();
        rows.push(row.map_err(|e| parse_err(path, &format!("line {}: {e}", lineno + 1)))?);
    }
    if rows.is_empty() {
        return Err(parse_err(path, "no data rows"));
    }
    Ok(rows)
}

/// Loads an intensity grid from `.pgm` (P5) or a matrix CSV, by extension.
pub fn load_grid(path: &Path) -> Result<Vec<Vec<f64>>> {
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("pgm") => read_pgm(path),
        _ => read_matrix_csv(path),
    }
}

/// Loads a mask from the same formats; any nonzero value is foreground.
pub fn load_mask(path: &Path) -> Result<BinaryMask> {
    let grid = load_grid(path)?;
    let rows: Vec<Vec<bool>> = grid
        .iter()
        .map(|row| row.iter().map(|&v| v != 0.0).collect())
        .collect();
    BinaryMask::from_rows(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_round_trip() {
        let dir = std::env::temp_dir().join("firank_pgm_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.pgm");
        let rows: Vec<Vec<u8>> = (0..4)
            .map(|r| (0..3).map(|c| (r * 3 + c) as u8).collect())
            .collect();
        write_pgm(&path, &rows).unwrap();
        let grid = read_pgm(&path).unwrap();
        assert_eq!(grid.len(), 4);
        assert_eq!(grid[2][1], 7.0);
    }

    #[test]
    fn pgm_with_comment_and_p2_rejection() {
        let good = b"P5\n# a comment\n2 2\n255\n\x00\x01\x02\x03";
        assert!(parse_pgm(good).is_ok());
        let bad = b"P2\n2 2\n255\n0 1 2 3";
        assert!(parse_pgm(bad).is_err());
    }

    #[test]
    fn truncated_raster_is_an_error() {
        let bad = b"P5\n4 4\n255\n\x00\x01";
        let err = parse_pgm(bad).unwrap_err();
        assert!(err.contains("raster"), "{err}");
    }

    #[test]
    fn matrix_csv_reads_rows() {
        let dir = std::env::temp_dir().join("firank_csv_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("m.csv");
        std::fs::write(&path, "# mask\n0, 1, 0\n1, 1, 1\n").unwrap();
        let grid = read_matrix_csv(&path).unwrap();
        assert_eq!(grid, vec![vec![0.0, 1.0, 0.0], vec![1.0, 1.0, 1.0]]);
        let mask = load_mask(&path).unwrap();
        assert_eq!(mask.foreground_count(), 4);
    }
}
