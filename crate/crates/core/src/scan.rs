//! Multi-file scanning. Detectors are pure functions over immutable units,
//! so units scan in parallel with no shared state; the sequential path is
//! always available for comparison and for `--no-default-features` builds.

use crate::rules::{scan_unit, ScanReport};
use crate::source::SourceUnit;

/// Scan many units, in parallel when the `parallel` feature is enabled.
/// Reports come back in input order either way.
#[cfg(feature = "parallel")]
pub fn scan_units(units: &[SourceUnit]) -> Vec<ScanReport> {
    use rayon::prelude::*;
    units.par_iter().map(scan_unit).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn scan_units(units: &[SourceUnit]) -> Vec<ScanReport> {
    scan_units_seq(units)
}

/// Sequential reference path.
pub fn scan_units_seq(units: &[SourceUnit]) -> Vec<ScanReport> {
    units.iter().map(scan_unit).collect()
}
