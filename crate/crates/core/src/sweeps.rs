//! Parameter sweeps written as CSV tables.
//!
//! Every table is rectangular. Reals are written with 17 significant digits
//! in scientific notation, flags and markers as integers, rows separated by
//! `\n`, so identical inputs give byte-identical files. Points where a
//! quantity is undefined carry an `is_singular = 1` flag and a `0` in the
//! affected columns instead of NaN.

use std::f64::consts::{FRAC_PI_4, PI, TAU};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::planewave::{filtered_amplitude, zero_points, CrystalMedium, Window, SINGULAR_TOL};
use crate::pulse::{closed_form_field, envelope_f, free_space_field, xi0, xi1_stationary, GaussianPulse};
use crate::timeshift::time_shift;

/// Uniform samples `lo, ..., hi` (both ends included).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::Domain(format!("axis range must be finite and ordered, got [{lo}, {hi}]")));
        }
        if n < 2 {
            return Err(Error::Domain(format!("axis needs at least 2 samples, got {n}")));
        }
        Ok(Self { lo, hi, n })
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64
        }
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.value(i))
    }

    /// Index of the sample closest to `v`; ties go to the lower index.
    fn nearest(&self, v: f64) -> usize {
        let i = ((v - self.lo) / self.step()).round();
        (i.max(0.0) as usize).min(self.n - 1)
    }
}

/// Rectangular grid over `(β, Δkd)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub beta: Axis,
    pub dkd: Axis,
}

impl GridSpec {
    pub fn new(beta: Axis, dkd: Axis) -> Self {
        Self { beta, dkd }
    }

    /// `β ∈ [0, π]`, `Δkd ∈ [0, 2π]`: two periods' worth of zeros, three
    /// of them inside.
    pub fn fig2(resolution: usize) -> Result<Self> {
        Ok(Self::new(Axis::new(0.0, PI, resolution)?, Axis::new(0.0, TAU, resolution)?))
    }

    /// Square of half-width `half_width` around the first half-waveplate
    /// vortex `(π/4, π)`.
    pub fn fig3(resolution: usize, half_width: f64) -> Result<Self> {
        Ok(Self::new(
            Axis::new(FRAC_PI_4 - half_width, FRAC_PI_4 + half_width, resolution)?,
            Axis::new(PI - half_width, PI + half_width, resolution)?,
        ))
    }

    pub fn window(&self) -> Window {
        Window::new((self.beta.lo, self.beta.hi), (self.dkd.lo, self.dkd.hi))
    }

    pub fn cell_area(&self) -> f64 {
        self.beta.step() * self.dkd.step()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Real(f64),
    Int(i64),
}

impl Value {
    pub fn as_f64(&self) -> f64 {
        match *self {
            Value::Real(v) => v,
            Value::Int(v) => v as f64,
        }
    }

    fn flag(b: bool) -> Self {
        Value::Int(b as i64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Values of column `name` as floats.
    pub fn column_values(&self, name: &str) -> Option<Vec<f64>> {
        let c = self.column(name)?;
        Some(self.rows.iter().map(|r| r[c].as_f64()).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match v {
                    Value::Real(x) => write!(out, "{}", format_real(*x)),
                    Value::Int(k) => write!(out, "{k}"),
                }
                .expect("writing to a String cannot fail");
            }
            out.push('\n');
        }
        out
    }
}

/// 17 significant digits, scientific notation.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Columns `beta, dkd, modulus, chi, is_singular`.
///
/// The grid node nearest to each zero of the amplitude inside the grid is
/// flagged, as is any node where `|z| < SINGULAR_TOL`; `chi` is 0 on flagged
/// rows.
pub fn amplitude_phase_map(grid: &GridSpec) -> CsvTable {
    let singular_nodes: Vec<(usize, usize)> = zero_points(&grid.window())
        .into_iter()
        .map(|(b, k)| (grid.beta.nearest(b), grid.dkd.nearest(k)))
        .collect();

    let mut table = CsvTable::new(["beta", "dkd", "modulus", "chi", "is_singular"]);
    for i in 0..grid.beta.n {
        let beta = grid.beta.value(i);
        for j in 0..grid.dkd.n {
            let dkd = grid.dkd.value(j);
            let z = filtered_amplitude(beta, dkd);
            let modulus = z.norm().min(1.0);
            let singular = modulus < SINGULAR_TOL || singular_nodes.contains(&(i, j));
            let chi = if singular { 0.0 } else { z.arg() };
            table.push(vec![
                Value::Real(beta),
                Value::Real(dkd),
                Value::Real(modulus),
                Value::Real(chi),
                Value::flag(singular),
            ]);
        }
    }
    table
}

/// Columns `beta, dkd, tau, superluminal, is_singular`, with `tau` in units
/// of `d/c` times the crystal width.
pub fn timeshift_map(medium: &CrystalMedium, grid: &GridSpec) -> CsvTable {
    let mut table = CsvTable::new(["beta", "dkd", "tau", "superluminal", "is_singular"]);
    for beta in grid.beta.values() {
        for dkd in grid.dkd.values() {
            let row = match time_shift(medium, beta, dkd) {
                Ok(r) if r.tau.is_finite() => vec![
                    Value::Real(beta),
                    Value::Real(dkd),
                    Value::Real(r.tau),
                    Value::flag(r.superluminal),
                    Value::flag(false),
                ],
                _ => vec![
                    Value::Real(beta),
                    Value::Real(dkd),
                    Value::Real(0.0),
                    Value::flag(false),
                    Value::flag(true),
                ],
            };
            table.push(row);
        }
    }
    table
}

/// Marker values in the `marker` column of [`profile_set`].
pub const MARKER_NONE: i64 = 0;
pub const MARKER_XI0: i64 = 1;
pub const MARKER_XI1: i64 = 2;

/// Outgoing envelopes for several pulse widths.
///
/// Columns `xi, marker, f_mu_<μ>...`. Grid rows have marker 0; two extra
/// rows at the end sit at `ξ₀` (marker 1) and `ξ₁` (marker 2). The `ξ₁` row
/// is left out at `β = π/4`, where `ξ₁` diverges.
pub fn profile_set(medium: &CrystalMedium, beta: f64, mu_list: &[f64], xi_axis: &Axis) -> Result<CsvTable> {
    if mu_list.is_empty() {
        return Err(Error::Domain("profile set needs at least one mu".into()));
    }
    if let Some(mu) = mu_list.iter().find(|m| !(**m > 0.0) || !m.is_finite()) {
        return Err(Error::Domain(format!("mu must be positive, got {mu}")));
    }
    let dn = medium.delta_n();
    let mut header = vec!["xi".to_string(), "marker".to_string()];
    header.extend(mu_list.iter().map(|mu| format!("f_mu_{mu}")));
    let mut table = CsvTable::new(header);

    let row = |xi: f64, marker: i64| {
        let mut r = vec![Value::Real(xi), Value::Int(marker)];
        r.extend(mu_list.iter().map(|&mu| Value::Real(envelope_f(xi, beta, mu, dn))));
        r
    };
    for xi in xi_axis.values() {
        table.push(row(xi, MARKER_NONE));
    }
    table.push(row(xi0(medium), MARKER_XI0));
    if let Ok(xi1) = xi1_stationary(beta, dn) {
        table.push(row(xi1, MARKER_XI1));
    }
    Ok(table)
}

/// Snapshots of the filtered envelope with and without the crystal.
///
/// Columns `t, x, f_filtered, f_freespace`; one block of `x_axis.n` rows per
/// time, in the order given.
pub fn evolution_frames(
    medium: &CrystalMedium,
    beta: f64,
    pulse: &GaussianPulse,
    times: &[f64],
    x_axis: &Axis,
) -> Result<CsvTable> {
    if times.is_empty() {
        return Err(Error::Domain("evolution needs at least one time".into()));
    }
    if times.windows(2).any(|w| !(w[0] <= w[1])) || times.iter().any(|t| !t.is_finite()) {
        return Err(Error::Domain("evolution times must be finite and ordered".into()));
    }
    let mut table = CsvTable::new(["t", "x", "f_filtered", "f_freespace"]);
    for &t in times {
        for x in x_axis.values() {
            let filtered = closed_form_field(x, t, medium, beta, pulse).intensity();
            let free = free_space_field(x, t, beta, pulse).norm_sqr();
            table.push(vec![
                Value::Real(t),
                Value::Real(x),
                Value::Real(filtered),
                Value::Real(free),
            ]);
        }
    }
    Ok(table)
}

/// `key = value` manifest describing a generated table.
pub fn manifest(generator: &str, params: &[(&str, String)]) -> String {
    let mut out = format!("generator = {generator}\n");
    for (k, v) in params {
        writeln!(out, "{k} = {v}").expect("writing to a String cannot fail");
    }
    out
}

/// First 16 hex digits of the SHA-256 of the manifest.
pub fn params_hash(manifest: &str) -> String {
    Sha256::digest(manifest.as_bytes())
        .iter()
        .take(8)
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Writes `<generator>_<hash>.csv` and its `<generator>_<hash>.params`
/// manifest into `dir`, returning both paths.
pub fn write_table(
    dir: &Path,
    generator: &str,
    params: &[(&str, String)],
    table: &CsvTable,
) -> Result<(PathBuf, PathBuf)> {
    let text = manifest(generator, params);
    let stem = format!("{generator}_{}", params_hash(&text));
    fs::create_dir_all(dir)?;
    let csv_path = dir.join(format!("{stem}.csv"));
    let manifest_path = dir.join(format!("{stem}.params"));
    fs::write(&csv_path, table.to_csv())?;
    fs::write(&manifest_path, text)?;
    Ok((csv_path, manifest_path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_samples() {
        let a = Axis::new(0.0, 1.0, 5).unwrap();
        let v: Vec<f64> = a.values().collect();
        assert_eq!(v, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(a.nearest(0.6), 2);
        assert_eq!(a.nearest(-3.0), 0);
        assert_eq!(a.nearest(9.0), 4);
        assert!(Axis::new(0.0, 1.0, 1).is_err());
        assert!(Axis::new(1.0, 0.0, 4).is_err());
        assert!(Axis::new(0.0, f64::INFINITY, 4).is_err());
    }

    #[test]
    fn reference_map_has_three_singular_cells() {
        for res in [9, 50, 101] {
            let t = amplitude_phase_map(&GridSpec::fig2(res).unwrap());
            assert_eq!(t.rows.len(), res * res);
            let flagged = t.column_values("is_singular").unwrap().iter().filter(|v| **v == 1.0).count();
            assert_eq!(flagged, 3, "resolution {res}");
        }
    }

    #[test]
    fn minimal_grid() {
        let g = GridSpec::new(Axis::new(0.1, 0.2, 2).unwrap(), Axis::new(0.3, 0.4, 2).unwrap());
        let t = amplitude_phase_map(&g);
        assert_eq!(t.rows.len(), 4);
        assert!(t.column_values("modulus").unwrap().iter().all(|m| (0.0..=1.0).contains(m)));
    }

    #[test]
    fn diagonal_row_of_timeshift_map() {
        let m = CrystalMedium::from_mean(1.25, 0.15).unwrap();
        let g = GridSpec::new(Axis::new(0.0, PI / 2.0, 3).unwrap(), Axis::new(0.0, TAU, 41).unwrap());
        let t = timeshift_map(&m, &g);
        let beta = t.column_values("beta").unwrap();
        let tau = t.column_values("tau").unwrap();
        let sing = t.column_values("is_singular").unwrap();
        for i in 0..beta.len() {
            if beta[i] == PI / 4.0 && sing[i] == 0.0 {
                assert!((tau[i] - 0.25).abs() < 1e-12);
            }
        }
        // the vortex at (π/4, π) is a grid node
        assert_eq!(sing.iter().filter(|s| **s == 1.0).count(), 1);
    }

    #[test]
    fn csv_format() {
        let mut t = CsvTable::new(["a", "flag"]);
        t.push(vec![Value::Real(0.1), Value::Int(1)]);
        t.push(vec![Value::Real(-2.5e-300), Value::Int(0)]);
        assert_eq!(t.to_csv(), "a,flag\n1.0000000000000001e-1,1\n-2.5000000000000000e-300,0\n");
    }

    #[test]
    fn profile_markers() {
        let m = CrystalMedium::from_mean(1.30, 0.15).unwrap();
        let axis = Axis::new(-1.0, 1.0, 11).unwrap();
        let t = profile_set(&m, 0.21 * PI, &[2.6, 0.6], &axis).unwrap();
        assert_eq!(t.header, vec!["xi", "marker", "f_mu_2.6", "f_mu_0.6"]);
        assert_eq!(t.rows.len(), 13);
        let marker = t.column_values("marker").unwrap();
        assert_eq!(marker[11], MARKER_XI0 as f64);
        assert_eq!(marker[12], MARKER_XI1 as f64);
        let t = profile_set(&m, FRAC_PI_4, &[1.0], &axis).unwrap();
        assert_eq!(t.rows.len(), 12);
        assert!(profile_set(&m, 0.3, &[], &axis).is_err());
        assert!(profile_set(&m, 0.3, &[0.0], &axis).is_err());
    }

    #[test]
    fn evolution_rejects_unordered_times() {
        let m = CrystalMedium::from_mean(1.35, 0.5).unwrap();
        let p = GaussianPulse::tuned(&m, 0, 4.0).unwrap();
        let axis = Axis::new(-5.0, 5.0, 4).unwrap();
        assert!(evolution_frames(&m, 0.3, &p, &[1.0, 0.0], &axis).is_err());
        assert!(evolution_frames(&m, 0.3, &p, &[], &axis).is_err());
        let t = evolution_frames(&m, 0.3, &p, &[0.0, 1.0], &axis).unwrap();
        assert_eq!(t.rows.len(), 8);
    }

    #[test]
    fn file_naming() {
        let dir = tempfile::tempdir().unwrap();
        let t = amplitude_phase_map(&GridSpec::fig2(3).unwrap());
        let params = [("resolution", "3".to_string())];
        let (csv, man) = write_table(dir.path(), "amplitude_phase_map", &params, &t).unwrap();
        let name = csv.file_name().unwrap().to_str().unwrap();
        assert!(name.starts_with("amplitude_phase_map_") && name.ends_with(".csv"));
        assert_eq!(name.len(), "amplitude_phase_map_".len() + 16 + 4);
        let text = fs::read_to_string(man).unwrap();
        assert_eq!(text, "generator = amplitude_phase_map\nresolution = 3\n");
        assert_eq!(fs::read_to_string(csv).unwrap(), t.to_csv());
    }
}
