//! Profile files: a CSV of samples (`r,re,im`, one node per row) next to a
//! JSON sidecar holding the weight parameters and the grid layout.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{DunklError, Result};
use crate::measure::{make_grid, Domain, Profile, RadialGrid, WeightParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub radius: f64,
    pub panels: usize,
    pub nodes_per_panel: usize,
    pub dual_radius: f64,
}

impl GridMeta {
    pub fn of(grid: &RadialGrid) -> Self {
        Self {
            radius: grid.radius(),
            panels: grid.panels(),
            nodes_per_panel: grid.nodes_per_panel(),
            dual_radius: grid.dual_radius(),
        }
    }

    pub fn build(&self) -> Result<RadialGrid> {
        make_grid(self.radius, self.panels, self.nodes_per_panel)?
            .with_dual_radius(self.dual_radius)
    }
}

/// Contents of the `.json` sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub domain: String,
    pub params: WeightParams,
    pub grid: GridMeta,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band_limit: Option<f64>,
    pub tail_flag: bool,
}

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    r: f64,
    re: f64,
    im: f64,
}

/// Sidecar path for a CSV path: `x.csv` → `x.json`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

/// Writes a real profile.
pub fn write_profile<D: Domain>(f: &Profile<D>, csv: &Path) -> Result<()> {
    write_complex(f, None, csv)
}

/// Writes `re + i·im`, where both parts share `re`'s grid and parameters.
pub fn write_complex<D: Domain>(
    re: &Profile<D>,
    im: Option<&Profile<D>>,
    csv: &Path,
) -> Result<()> {
    if let Some(im) = im {
        re.check_compatible(im)?;
    }
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(csv)?));
    for (i, (r, x)) in re.grid().nodes().iter().zip(re.samples()).enumerate() {
        let y = im.map_or(0.0, |g| g.samples()[i]);
        w.serialize(Row { r: *r, re: *x, im: y })?;
    }
    w.flush()?;
    let side = Sidecar {
        domain: D::NAME.to_string(),
        params: *re.params(),
        grid: GridMeta::of(re.grid()),
        band_limit: re.band_limit(),
        tail_flag: re.tail_flag() && im.is_none_or(|g| g.tail_flag()),
    };
    serde_json::to_writer_pretty(BufWriter::new(File::create(sidecar_path(csv))?), &side)?;
    Ok(())
}

/// Reads a real profile, checking the domain marker, node positions and
/// that the imaginary column vanishes.
pub fn read_profile<D: Domain>(csv: &Path) -> Result<Profile<D>> {
    let (re, im) = read_complex::<D>(csv)?;
    let scale = re.max_abs().max(im.max_abs());
    if im.max_abs() > 1e-15 * scale.max(f64::MIN_POSITIVE) {
        return Err(DunklError::Config(format!(
            "{}: imaginary part present; only real profiles are accepted here",
            csv.display()
        )));
    }
    Ok(re)
}

/// Reads both columns of a profile file.
pub fn read_complex<D: Domain>(csv: &Path) -> Result<(Profile<D>, Profile<D>)> {
    let side: Sidecar = serde_json::from_reader(BufReader::new(File::open(sidecar_path(csv))?))?;
    if side.domain != D::NAME {
        return Err(DunklError::Config(format!(
            "{}: sidecar domain is {:?}, expected {:?}",
            csv.display(),
            side.domain,
            D::NAME
        )));
    }
    side.params.validate()?;
    let grid = Arc::new(side.grid.build()?);
    let mut rdr = csv::Reader::from_reader(BufReader::new(File::open(csv)?));
    let mut re = Vec::with_capacity(grid.len());
    let mut im = Vec::with_capacity(grid.len());
    for (i, row) in rdr.deserialize::<Row>().enumerate() {
        let row = row?;
        let node = *grid.nodes().get(i).ok_or_else(|| {
            DunklError::GridMismatch(format!(
                "{}: more rows than grid nodes ({})",
                csv.display(),
                grid.len()
            ))
        })?;
        if (row.r - node).abs() > 1e-12 * node.max(1.0) {
            return Err(DunklError::GridMismatch(format!(
                "{}: row {i} has r = {} but the grid node is {node}",
                csv.display(),
                row.r
            )));
        }
        re.push(row.re);
        im.push(row.im);
    }
    if re.len() != grid.len() {
        return Err(DunklError::GridMismatch(format!(
            "{}: {} rows for a grid of {} nodes",
            csv.display(),
            re.len(),
            grid.len()
        )));
    }
    let mut a = Profile::<D>::from_samples(side.params, Arc::clone(&grid), re)?;
    let mut b = Profile::<D>::from_samples(side.params, grid, im)?;
    if let Some(s) = side.band_limit {
        a.set_band_limit(Some(s));
        b.set_band_limit(Some(s));
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::RadialProfile;

    #[test]
    fn round_trip_keeps_samples_and_domain() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.csv");
        let grid = Arc::new(make_grid(10.0, 8, 6).unwrap());
        let f = RadialProfile::from_fn(WeightParams::new(0.7).unwrap(), grid, |r| (-r * r).exp())
            .unwrap();
        write_profile(&f, &path).unwrap();
        let back: RadialProfile = read_profile(&path).unwrap();
        assert_eq!(back.samples(), f.samples());
        assert!(read_profile::<crate::measure::Spectral>(&path).is_err());
    }
}
