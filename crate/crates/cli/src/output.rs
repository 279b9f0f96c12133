//! Machine (CSV) and human (aligned table) report formats.
//!
//! CSV schema: `sector,class,root_index,root_re,root_im,energy,residual,e_1,...,e_n`.
//! Records with no roots emit one row with `root_index = -1`; records with
//! roots emit one row per root, repeating the scalar columns. Floats carry
//! 17 significant digits and round-trip losslessly through `parse_csv`.

use num_complex::Complex64;

/// One spectral row: a record, a raw solution, or an oracle state.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRow {
    pub sector: u32,
    pub class: String,
    pub roots: Vec<Complex64>,
    pub energy: f64,
    pub residual: f64,
    pub eigenvalues: Vec<f64>,
}

/// 17 significant digits, sign-normalized so reruns are byte-identical.
pub fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

pub fn write_csv(rows: &[OutputRow], n_levels: usize) -> String {
    let mut out = String::from("sector,class,root_index,root_re,root_im,energy,residual");
    for j in 1..=n_levels {
        out.push_str(&format!(",e_{j}"));
    }
    out.push('\n');
    for row in rows {
        let emit = |out: &mut String, idx: i64, root: Complex64| {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}",
                row.sector,
                row.class,
                idx,
                fmt_f64(root.re),
                fmt_f64(root.im),
                fmt_f64(row.energy),
                fmt_f64(row.residual),
            ));
            for e in &row.eigenvalues {
                out.push(',');
                out.push_str(&fmt_f64(*e));
            }
            out.push('\n');
        };
        if row.roots.is_empty() {
            emit(&mut out, -1, Complex64::ZERO);
        } else {
            for (k, &root) in row.roots.iter().enumerate() {
                emit(&mut out, k as i64, root);
            }
        }
    }
    out
}

/// Parse machine output back into rows (grouping multi-root records).
pub fn parse_csv(text: &str) -> Result<Vec<OutputRow>, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty csv")?;
    if !header.starts_with("sector,class,root_index") {
        return Err(format!("unexpected header {header:?}"));
    }
    let mut rows: Vec<OutputRow> = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 7 {
            return Err(format!("row {i}: too few fields"));
        }
        let parse = |s: &str| s.parse::<f64>().map_err(|e| format!("row {i}: {e}"));
        let sector = fields[0].parse::<u32>().map_err(|e| format!("row {i}: {e}"))?;
        let class = fields[1].to_string();
        let root_index = fields[2].parse::<i64>().map_err(|e| format!("row {i}: {e}"))?;
        let root = Complex64::new(parse(fields[3])?, parse(fields[4])?);
        let energy = parse(fields[5])?;
        let residual = parse(fields[6])?;
        let eigenvalues: Result<Vec<f64>, _> = fields[7..].iter().map(|s| parse(s)).collect();
        let eigenvalues = eigenvalues?;

        let continues_previous = root_index > 0
            && rows.last().is_some_and(|r| {
                r.sector == sector && r.class == class && r.roots.len() == root_index as usize
            });
        if continues_previous {
            rows.last_mut().unwrap().roots.push(root);
        } else {
            let roots = if root_index < 0 { Vec::new() } else { vec![root] };
            rows.push(OutputRow { sector, class, roots, energy, residual, eigenvalues });
        }
    }
    Ok(rows)
}

/// Aligned human table mirroring the summary-table columns: state class,
/// roots, invariant eigenvalues, energy.
pub fn write_table(rows: &[OutputRow], invariant_name: &str) -> String {
    let mut cells: Vec<Vec<String>> = Vec::with_capacity(rows.len() + 1);
    cells.push(vec![
        "N".into(),
        "class".into(),
        "roots".into(),
        format!("{invariant_name}_j eigenvalues"),
        "energy".into(),
        "residual".into(),
    ]);
    for row in rows {
        let roots = if row.roots.is_empty() {
            "-".to_string()
        } else {
            row.roots
                .iter()
                .map(|r| {
                    if r.im.abs() < 1e-14 {
                        format!("{:.6}", r.re)
                    } else {
                        format!("{:.6}{:+.6}i", r.re, r.im)
                    }
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        let eigs = row.eigenvalues.iter().map(|e| format!("{e:.6}")).collect::<Vec<_>>().join(" ");
        cells.push(vec![
            row.sector.to_string(),
            row.class.clone(),
            roots,
            eigs,
            format!("{:.9}", row.energy),
            format!("{:.2e}", row.residual),
        ]);
    }
    let ncols = cells[0].len();
    let widths: Vec<usize> =
        (0..ncols).map(|c| cells.iter().map(|r| r[c].len()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for (i, row) in cells.iter().enumerate() {
        for (c, cell) in row.iter().enumerate() {
            out.push_str(&format!("{:<width$}", cell, width = widths[c] + 2));
        }
        out.push('\n');
        if i == 0 {
            out.push_str(&"-".repeat(widths.iter().map(|w| w + 2).sum()));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_roundtrip_is_lossless() {
        let rows = vec![
            OutputRow {
                sector: 1,
                class: "generic".into(),
                roots: vec![Complex64::new(3.125, 0.0)],
                energy: 0.0,
                residual: 1.25e-13,
                eigenvalues: vec![-2.0, 0.5],
            },
            OutputRow {
                sector: 2,
                class: "talmi_zero".into(),
                roots: vec![Complex64::new(0.1, 2.0 / 3.0), Complex64::new(0.1, -2.0 / 3.0)],
                energy: -1.0 / 3.0,
                residual: 0.0,
                eigenvalues: vec![1.0 / 7.0, -0.25],
            },
            OutputRow {
                sector: 0,
                class: "empty".into(),
                roots: vec![],
                energy: 0.0,
                residual: 0.0,
                eigenvalues: vec![2.0 / 3.0, -1.0 / 6.0],
            },
        ];
        let text = write_csv(&rows, 2);
        let back = parse_csv(&text).unwrap();
        assert_eq!(rows.len(), back.len());
        for (a, b) in rows.iter().zip(&back) {
            assert_eq!(a.sector, b.sector);
            assert_eq!(a.class, b.class);
            assert_eq!(a.roots.len(), b.roots.len());
            for (x, y) in a.roots.iter().zip(&b.roots) {
                assert_eq!(x, y, "roots must round-trip bit-exactly");
            }
            assert_eq!(a.energy.to_bits(), b.energy.to_bits());
            assert_eq!(a.residual.to_bits(), b.residual.to_bits());
            for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }

    #[test]
    fn negative_zero_is_normalized() {
        assert_eq!(fmt_f64(-0.0), fmt_f64(0.0));
    }

    #[test]
    fn table_is_aligned() {
        let rows = vec![OutputRow {
            sector: 1,
            class: "talmi_zero".into(),
            roots: vec![],
            energy: -1.0,
            residual: 1e-15,
            eigenvalues: vec![-1.0 / 3.0, -7.0 / 6.0],
        }];
        let table = write_table(&rows, "P");
        let lines: Vec<&str> = table.lines().collect();
        assert!(lines[0].contains("class"));
        assert!(lines[2].contains("talmi_zero"));
    }
}
