//! CSV export of histograms and spectra.

use std::io::{self, Write};

use serde::Serialize;

use super::SpectrumSample;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistogramBin {
    pub bin_left: f64,
    pub bin_right: f64,
    pub count: usize,
    /// `count / (total · width)`, so the bins integrate to the in-range fraction.
    pub density: f64,
}

/// Equal-width histogram on `[lo, hi]`; the right edge is closed and values
/// outside the range are dropped.
pub fn histogram(values: &[f64], bins: usize, lo: f64, hi: f64) -> Result<Vec<HistogramBin>> {
    if bins == 0 || !(hi > lo) {
        return Err(Error::Domain(format!("need bins > 0 and lo < hi, got {bins}, [{lo}, {hi}]")));
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        if v < lo || v > hi {
            continue;
        }
        let k = (((v - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let total = values.len().max(1) as f64;
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(k, count)| HistogramBin {
            bin_left: lo + k as f64 * width,
            bin_right: lo + (k + 1) as f64 * width,
            count,
            density: count as f64 / (total * width),
        })
        .collect())
}

pub fn write_histogram_csv<W: Write>(out: &mut W, bins: &[HistogramBin]) -> io::Result<()> {
    writeln!(out, "bin_left,bin_right,count,density")?;
    for b in bins {
        writeln!(out, "{:.16e},{:.16e},{},{:.16e}", b.bin_left, b.bin_right, b.count, b.density)?;
    }
    Ok(())
}

/// One row per sample, eigenvalues in descending order.
pub fn write_spectra_csv<W: Write>(out: &mut W, samples: &[SpectrumSample]) -> io::Result<()> {
    let d = samples.first().map_or(0, |s| s.values().len());
    let header: Vec<String> = (1..=d).map(|k| format!("lambda_{k}")).collect();
    writeln!(out, "{}", header.join(","))?;
    for s in samples {
        let row: Vec<String> = s.values().iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
