//! `|V_g f|` as a 16-bit binary PGM plus a CSV of raw magnitudes.
//!
//! The image is `|G|` wide (x) and `|G|` high (ω); row `ω`, column `x` holds
//! `round(65535 · |V_g f(x,ω)| / max)`, written big-endian. An all-zero transform gives an
//! all-zero image. CSV rows are `x,omega,magnitude` with `x` outer and `ω` inner.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use gdl_core::phase_space::PhaseSpace;
use gdl_core::Complex64;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    pub size: usize,
    /// `|V_g f|` at phase index `x·|G| + ω`.
    pub magnitudes: Vec<f64>,
}

impl Spectrogram {
    pub fn new(space: &PhaseSpace, g: &[Complex64], f: &[Complex64]) -> Result<Self, CliError> {
        let v = space.stft(g, f)?;
        Ok(Spectrogram { size: space.n(), magnitudes: v.iter().map(|z| z.norm()).collect() })
    }

    pub fn max(&self) -> f64 {
        self.magnitudes.iter().copied().fold(0.0, f64::max)
    }

    /// Gray levels in image order: row `ω`, column `x`.
    pub fn levels(&self) -> Vec<u16> {
        let max = self.max();
        let n = self.size;
        let mut out = Vec::with_capacity(n * n);
        for omega in 0..n {
            for x in 0..n {
                let m = self.magnitudes[x * n + omega];
                out.push(if max > 0.0 { (65535.0 * m / max).round() as u16 } else { 0 });
            }
        }
        out
    }

    pub fn pgm(&self) -> Vec<u8> {
        let mut bytes = format!("P5\n{} {}\n65535\n", self.size, self.size).into_bytes();
        for level in self.levels() {
            bytes.extend_from_slice(&level.to_be_bytes());
        }
        bytes
    }

    pub fn csv(&self) -> String {
        let n = self.size;
        let mut out = String::from("x,omega,magnitude\n");
        for x in 0..n {
            for omega in 0..n {
                writeln!(out, "{x},{omega},{}", self.magnitudes[x * n + omega]).expect("writing to a String");
            }
        }
        out
    }

    /// Writes the PGM to `path` and the CSV next to it; returns the CSV path.
    pub fn write(&self, path: &Path) -> Result<PathBuf, CliError> {
        std::fs::write(path, self.pgm()).map_err(|e| CliError::io(path.display().to_string(), e))?;
        let csv = path.with_extension("csv");
        std::fs::write(&csv, self.csv()).map_err(|e| CliError::io(csv.display().to_string(), e))?;
        Ok(csv)
    }
}
