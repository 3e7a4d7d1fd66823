//! Plain-text field format: a header line `N h`, then rows of
//! whitespace-separated values (row-major, `y` outer) written with 17
//! significant digits. Face fields hold two blocks, each introduced by
//! `comp1 <rows> <cols>` / `comp2 <rows> <cols>`.

use std::fmt::Write as _;

use super::{FaceField, GridSpec, ScalarField};
use crate::error::{Error, Result};

fn write_block(out: &mut String, values: &[f64], rows: usize, cols: usize) {
    for r in 0..rows {
        let line: Vec<String> = values[r * cols..(r + 1) * cols]
            .iter()
            .map(|v| format!("{v:.16e}"))
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
}

fn parse_header(line: Option<&str>, grid: &GridSpec) -> Result<()> {
    let line = line.ok_or_else(|| Error::Parse("missing header".into()))?;
    let mut parts = line.split_whitespace();
    let n: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad header `{line}`")))?;
    let h: f64 = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad header `{line}`")))?;
    if n != grid.n_cells() || (h - grid.h()).abs() > 1e-12 * grid.h() {
        return Err(Error::Parse(format!(
            "header N={n} h={h} does not match grid N={} h={}",
            grid.n_cells(),
            grid.h()
        )));
    }
    Ok(())
}

fn parse_rows<'a>(
    lines: &mut impl Iterator<Item = &'a str>,
    rows: usize,
    cols: usize,
) -> Result<Vec<f64>> {
    let mut values = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let line = lines.next().ok_or_else(|| Error::Parse(format!("missing row {r}")))?;
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("`{t}`: {e}"))))
            .collect::<Result<_>>()?;
        if row.len() != cols {
            return Err(Error::Parse(format!("row {r} has {} values, expected {cols}", row.len())));
        }
        values.extend(row);
    }
    Ok(values)
}

impl ScalarField {
    pub fn to_text(&self) -> String {
        let n = self.grid.n_cells();
        let mut out = String::new();
        let _ = writeln!(out, "{n} {:.16e}", self.grid.h());
        write_block(&mut out, &self.values, n, n);
        out
    }

    pub fn from_text(grid: GridSpec, text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        parse_header(lines.next(), &grid)?;
        let n = grid.n_cells();
        let values = parse_rows(&mut lines, n, n)?;
        Ok(Self { grid, values })
    }
}

impl FaceField {
    pub fn to_text(&self) -> String {
        let n = self.grid.n_cells();
        let mut out = String::new();
        let _ = writeln!(out, "{n} {:.16e}", self.grid.h());
        let _ = writeln!(out, "comp1 {n} {}", n + 1);
        write_block(&mut out, &self.comp1, n, n + 1);
        let _ = writeln!(out, "comp2 {} {n}", n + 1);
        write_block(&mut out, &self.comp2, n + 1, n);
        out
    }

    pub fn from_text(grid: GridSpec, text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        parse_header(lines.next(), &grid)?;
        let n = grid.n_cells();
        let mut read_block = |name: &str, rows: usize, cols: usize| -> Result<Vec<f64>> {
            let header = lines.next().ok_or_else(|| Error::Parse(format!("missing {name}")))?;
            let expected = format!("{name} {rows} {cols}");
            if header.split_whitespace().collect::<Vec<_>>().join(" ") != expected {
                return Err(Error::Parse(format!("expected `{expected}`, found `{header}`")));
            }
            parse_rows(&mut lines, rows, cols)
        };
        let comp1 = read_block("comp1", n, n + 1)?;
        let comp2 = read_block("comp2", n + 1, n)?;
        Ok(Self { grid, comp1, comp2 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn scalar_round_trip(vals in proptest::collection::vec(-1e6f64..1e6, 16)) {
            let g = GridSpec::unit_square(4).unwrap();
            let u = ScalarField::from_values(g, vals).unwrap();
            let back = ScalarField::from_text(g, &u.to_text()).unwrap();
            prop_assert_eq!(back, u);
        }

        #[test]
        fn face_round_trip(vals in proptest::collection::vec(-1e3f64..1e3, 40)) {
            let g = GridSpec::quarter(4).unwrap();
            let p = FaceField::from_flat(g, &vals).unwrap();
            let back = FaceField::from_text(g, &p.to_text()).unwrap();
            prop_assert_eq!(back, p);
        }
    }

    #[test]
    fn header_mismatch_is_rejected() {
        let g = GridSpec::unit_square(4).unwrap();
        let text = ScalarField::zeros(g).to_text();
        assert!(ScalarField::from_text(GridSpec::unit_square(5).unwrap(), &text).is_err());
        assert!(ScalarField::from_text(g, "4 0.25\n1 2 3\n").is_err());
    }
}
