//! CSV formats for level lists and branch line lists, and the bundled HF band.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::fitting::{Branch, BranchLine, Level, LevelDataset};
use crate::{Error, Result};

/// File name of the bundled HF ground-state levels.
pub const HF_V0_FILE: &str = "hf_v0_levels.v1.csv";

/// Overrides the directory searched for bundled data.
pub const DATA_DIR_ENV: &str = "QROTOR_DATA_DIR";

const HF_V0_BUNDLED: &str = include_str!("../data/hf_v0_levels.v1.csv");

pub const LEVEL_HEADER: [&str; 2] = ["ell", "energy_cm1"];
pub const BRANCH_HEADER: [&str; 3] = ["branch", "ell", "wavenumber_cm1"];

#[derive(Deserialize)]
struct LevelRow {
    ell: u32,
    energy_cm1: f64,
}

#[derive(Deserialize)]
struct BranchRow {
    branch: String,
    ell: u32,
    wavenumber_cm1: f64,
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
}

fn parse_error(source_name: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        source_name: source_name.to_string(),
        line,
        message: message.into(),
    }
}

fn csv_error(source_name: &str, e: &csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    parse_error(source_name, line, e.to_string())
}

fn check_header(rdr: &mut csv::Reader<&[u8]>, source_name: &str, expected: &[&str]) -> Result<()> {
    let header = rdr.headers().map_err(|e| csv_error(source_name, &e))?;
    let got: Vec<&str> = header.iter().collect();
    if got != expected {
        return Err(parse_error(
            source_name,
            1,
            format!(
                "expected header '{}', found '{}'",
                expected.join(","),
                got.join(",")
            ),
        ));
    }
    Ok(())
}

/// Parse an `ell,energy_cm1` table.
pub fn parse_levels(text: &str, source_name: &str, band: &str) -> Result<LevelDataset> {
    let mut rdr = reader(text);
    check_header(&mut rdr, source_name, &LEVEL_HEADER)?;
    let mut levels = Vec::new();
    for row in rdr.deserialize::<LevelRow>() {
        let row = row.map_err(|e| csv_error(source_name, &e))?;
        if !row.energy_cm1.is_finite() {
            return Err(Error::data(format!(
                "{source_name}: non-finite energy at l = {}",
                row.ell
            )));
        }
        levels.push(Level {
            ell: row.ell,
            energy: row.energy_cm1,
        });
    }
    LevelDataset::new(band, levels)
}

/// Parse a `branch,ell,wavenumber_cm1` line list.
pub fn parse_branches(text: &str, source_name: &str) -> Result<Vec<BranchLine>> {
    let mut rdr = reader(text);
    check_header(&mut rdr, source_name, &BRANCH_HEADER)?;
    let mut lines = Vec::new();
    for row in rdr.deserialize::<BranchRow>() {
        let row = row.map_err(|e| csv_error(source_name, &e))?;
        let branch = match row.branch.as_str() {
            "R" | "r" => Branch::R,
            "P" | "p" => Branch::P,
            other => {
                return Err(Error::data(format!(
                    "{source_name}: unknown branch '{other}'"
                )));
            }
        };
        lines.push(BranchLine::new(branch, row.ell, row.wavenumber_cm1)?);
    }
    Ok(lines)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_levels(path: &Path, band: &str) -> Result<LevelDataset> {
    parse_levels(&read(path)?, &path.display().to_string(), band)
}

pub fn read_branches(path: &Path) -> Result<Vec<BranchLine>> {
    parse_branches(&read(path)?, &path.display().to_string())
}

pub fn levels_to_csv(data: &LevelDataset) -> String {
    let mut out = format!("{}\n", LEVEL_HEADER.join(","));
    for l in &data.levels {
        out.push_str(&format!("{},{}\n", l.ell, l.energy));
    }
    out
}

pub fn branches_to_csv(lines: &[BranchLine]) -> String {
    let mut out = format!("{}\n", BRANCH_HEADER.join(","));
    for l in lines {
        out.push_str(&format!("{},{},{}\n", l.branch(), l.ell(), l.wavenumber()));
    }
    out
}

/// Directory named by `QROTOR_DATA_DIR`, if set.
pub fn data_dir_override() -> Option<PathBuf> {
    std::env::var_os(DATA_DIR_ENV)
        .filter(|s| !s.is_empty())
        .map(PathBuf::from)
}

/// HF `v = 0` levels at even `l = 2..18`; read from `QROTOR_DATA_DIR` when set.
pub fn bundled_hf_levels() -> Result<LevelDataset> {
    match data_dir_override() {
        Some(dir) => read_levels(&dir.join(HF_V0_FILE), "v=0"),
        None => parse_levels(HF_V0_BUNDLED, HF_V0_FILE, "v=0"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_levels() {
        let d = parse_levels(HF_V0_BUNDLED, HF_V0_FILE, "v=0").unwrap();
        assert_eq!(d.levels.len(), 9);
        assert_eq!(
            d.levels[0],
            Level {
                ell: 2,
                energy: 123.33
            }
        );
        assert_eq!(
            d.levels[8],
            Level {
                ell: 18,
                energy: 6789.6
            }
        );
        assert_eq!(d.ell_max(), Some(18));
    }

    #[test]
    fn level_round_trip() {
        let d = parse_levels(HF_V0_BUNDLED, HF_V0_FILE, "v=0").unwrap();
        let again = parse_levels(&levels_to_csv(&d), "x", "v=0").unwrap();
        assert_eq!(d, again);
    }

    #[test]
    fn bad_header_and_rows() {
        let e = parse_levels("l,E\n2,1\n", "f", "b").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = parse_levels("ell,energy_cm1\n2,abc\n", "f", "b").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        assert!(parse_levels("ell,energy_cm1\n4,2\n2,1\n", "f", "b").is_err());
    }

    #[test]
    fn branches() {
        let lines =
            parse_branches("branch,ell,wavenumber_cm1\nR,0,3961.4\nP,2,3877.7\n", "f").unwrap();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1].branch(), Branch::P);
        let again = parse_branches(&branches_to_csv(&lines), "g").unwrap();
        assert_eq!(lines, again);
        assert!(parse_branches("branch,ell,wavenumber_cm1\nQ,0,1\n", "f").is_err());
        assert!(parse_branches("branch,ell,wavenumber_cm1\nP,0,1\n", "f").is_err());
        assert!(parse_branches("branch,ell,wavenumber_cm1\nR,0,-1\n", "f").is_err());
    }

    #[test]
    fn empty_level_file() {
        let d = parse_levels("ell,energy_cm1\n", "f", "b").unwrap();
        assert!(d.levels.is_empty());
    }
}
