//! Command-line front end.
//!
//! Scene parameters come from built-in defaults, then an optional
//! `--config` file, then command-line flags; later sources win. Angles accept
//! a `pi` suffix (`0.21pi`, `-0.5pi`, `pi`) and are otherwise radians.
//!
//! Exit codes: 0 success, 2 usage error, 3 domain error (including singular
//! points and poles), 4 solver or validation failure, 1 i/o failure.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::oracle::{compare_grid, region_grid, QuadratureSpec};
use crate::planewave::{fresnel_reflectance, modulus_and_phase, CrystalMedium};
use crate::pulse::{find_extrema, xi0, xi1_stationary, GaussianPulse};
use crate::sweeps::{
    amplitude_phase_map, evolution_frames, format_real, profile_set, timeshift_map, write_table, Axis, CsvTable,
    GridSpec,
};
use crate::timeshift::time_shift;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;

const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Largest closed-form/quadrature deviation accepted by `validate`.
pub const VALIDATION_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "birefringence", version, about = "Filtered pulse transit through a birefringent crystal")]
struct Cli {
    /// Scene file with `key = value` lines (n_o, n_e, nbar, dn, d_physical, beta, ell, sigma, N)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory for CSV output (`<generator>_<hash>.csv` plus a `.params` manifest); stdout when absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Ordinary refractive index
    #[arg(long = "n-o", global = true)]
    n_o: Option<f64>,

    /// Extraordinary refractive index
    #[arg(long = "n-e", global = true)]
    n_e: Option<f64>,

    /// Mean refractive index (n_e + n_o)/2
    #[arg(long, global = true)]
    nbar: Option<f64>,

    /// Birefringence n_e - n_o
    #[arg(long, global = true)]
    dn: Option<f64>,

    /// Physical crystal width in meters, used to report times in seconds
    #[arg(long = "d-physical", global = true)]
    d_physical: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normal-incidence reflection coefficient between two media
    Reflectance {
        #[arg(long, default_value_t = 1.0)]
        n1: f64,
        /// Defaults to the mean index of the scene
        #[arg(long)]
        n2: Option<f64>,
    },
    /// Filtered plane-wave amplitude at one (beta, dkd) point
    Amplitude(PointArgs),
    /// Stationary-phase time shift at one (beta, dkd) point
    Timeshift(PointArgs),
    /// Modulus/phase map over (beta, dkd)
    MapAmplitude(MapArgs),
    /// Time-shift map over (beta, dkd)
    MapTimeshift(MapArgs),
    /// Outgoing envelopes f(xi) for several mu = d/ell
    Profiles {
        #[arg(long, value_parser = parse_angle)]
        beta: Option<f64>,
        /// Comma-separated list of mu values
        #[arg(long, value_delimiter = ',', default_values_t = [2.6, 1.6, 0.6])]
        mu: Vec<f64>,
        #[arg(long = "xi-range", value_parser = parse_range, default_value = "-1:1.5")]
        xi_range: (f64, f64),
        #[arg(long, default_value_t = 501)]
        res: usize,
    },
    /// Snapshots of the filtered pulse and its free-space counterpart
    Evolve {
        #[arg(long, value_parser = parse_angle)]
        beta: Option<f64>,
        /// Pulse width in units of the crystal width
        #[arg(long)]
        ell: Option<f64>,
        /// Half-waveplate order of the carrier
        #[arg(long)]
        harmonic: Option<u32>,
        /// Comma-separated, ordered list of times
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [-12.0, -4.0, 4.0, 12.0])]
        times: Vec<f64>,
        #[arg(long = "x-range", value_parser = parse_range, default_value = "-25:30")]
        x_range: (f64, f64),
        #[arg(long, default_value_t = 1101)]
        res: usize,
    },
    /// Advanced/retarded maxima of the outgoing envelope
    Peaks {
        #[arg(long, value_parser = parse_angle)]
        beta: Option<f64>,
        /// d/ell; defaults to the scene's pulse width
        #[arg(long)]
        mu: Option<f64>,
    },
    /// Compare the closed-form field with direct frequency quadrature
    Validate {
        /// Validate the configured scene instead of the two reference sets
        #[arg(long)]
        scene: bool,
        #[arg(long = "per-region", default_value_t = 200)]
        per_region: usize,
        #[arg(long, default_value_t = 2048)]
        nodes: usize,
        #[arg(long, default_value_t = 8)]
        span: u32,
    },
}

#[derive(Debug, Args)]
struct PointArgs {
    #[arg(long, value_parser = parse_angle)]
    beta: Option<f64>,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    dkd: f64,
}

#[derive(Debug, Args)]
struct MapArgs {
    /// Preset window: fig2 (beta in [0, pi], dkd in [0, 2pi]) or fig3 (square around (pi/4, pi))
    #[arg(long)]
    window: Option<String>,
    #[arg(long = "beta-range", value_parser = parse_range)]
    beta_range: Option<(f64, f64)>,
    #[arg(long = "dkd-range", value_parser = parse_range)]
    dkd_range: Option<(f64, f64)>,
    /// Half-width of the fig3 window
    #[arg(long = "half-width", default_value_t = 0.4)]
    half_width: f64,
    /// Samples per axis
    #[arg(long, default_value_t = 201)]
    res: usize,
}

/// Angle in radians, or a multiple of π with a `pi` suffix.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let (number, scale) = match s.strip_suffix("pi").or_else(|| s.strip_suffix('π')) {
        Some(rest) => (rest.trim(), PI),
        None => (s, 1.0),
    };
    let value = match number {
        "" | "+" => 1.0,
        "-" => -1.0,
        n => n.parse::<f64>().map_err(|e| format!("invalid angle '{s}': {e}"))?,
    };
    let v = value * scale;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("angle '{s}' is not finite"))
    }
}

/// `lo:hi`, each side an angle.
pub fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("range '{s}' must look like lo:hi"))?;
    Ok((parse_angle(lo)?, parse_angle(hi)?))
}

/// Physical scene after applying defaults, config file and flags.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneConfig {
    pub n_o: f64,
    pub n_e: f64,
    pub d_physical: Option<f64>,
    pub beta: f64,
    /// Pulse width in units of the crystal width.
    pub ell: f64,
    pub harmonic: u32,
}

impl Default for SceneConfig {
    fn default() -> Self {
        Self {
            n_o: 1.225,
            n_e: 1.375,
            d_physical: None,
            beta: 0.21 * PI,
            ell: 4.0,
            harmonic: 0,
        }
    }
}

impl SceneConfig {
    pub fn n_bar(&self) -> f64 {
        0.5 * (self.n_o + self.n_e)
    }

    pub fn delta_n(&self) -> f64 {
        self.n_e - self.n_o
    }

    fn set_mean(&mut self, n_bar: f64) {
        let dn = self.delta_n();
        self.n_o = n_bar - 0.5 * dn;
        self.n_e = n_bar + 0.5 * dn;
    }

    fn set_delta(&mut self, dn: f64) {
        let n_bar = self.n_bar();
        self.n_o = n_bar - 0.5 * dn;
        self.n_e = n_bar + 0.5 * dn;
    }

    /// Applies `key = value` lines on top of `self`. `#` starts a comment.
    pub fn apply_config_text(&mut self, text: &str) -> Result<(), String> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected 'key = value'", lineno + 1))?;
            let key = key.trim();
            let value = value.trim();
            let num = || {
                value
                    .parse::<f64>()
                    .map_err(|e| format!("line {}: {key}: {e}", lineno + 1))
            };
            match key {
                "n_o" => self.n_o = num()?,
                "n_e" => self.n_e = num()?,
                "nbar" => self.set_mean(num()?),
                "dn" => self.set_delta(num()?),
                "d_physical" => {
                    let d = num()?;
                    if !(d > 0.0) {
                        return Err(format!("line {}: d_physical must be positive", lineno + 1));
                    }
                    self.d_physical = Some(d);
                }
                "beta" => self.beta = parse_angle(value).map_err(|e| format!("line {}: {e}", lineno + 1))?,
                "ell" => self.ell = num()?,
                "sigma" => self.ell = num()?.sqrt(),
                "N" => {
                    self.harmonic = value
                        .parse()
                        .map_err(|e| format!("line {}: N: {e}", lineno + 1))?
                }
                other => return Err(format!("line {}: unknown key '{other}'", lineno + 1)),
            }
        }
        Ok(())
    }

    pub fn medium(&self) -> Result<CrystalMedium, Error> {
        CrystalMedium::new(self.n_o, self.n_e)
    }

    pub fn pulse(&self, medium: &CrystalMedium) -> Result<GaussianPulse, Error> {
        GaussianPulse::tuned(medium, self.harmonic, self.ell)
    }
}

enum Failure {
    Usage(String),
    Run(Error),
    Validation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::SingularPoint { .. } | Error::DegenerateLoop { .. } | Error::Pole(_) => EXIT_DOMAIN,
        Error::SolverFailure(_) | Error::NonFinite { .. } => EXIT_SOLVER,
        Error::Io(_) => EXIT_IO,
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Run(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
        Err(Failure::Validation(msg)) => {
            let _ = writeln!(stderr, "validation failed: {msg}");
            EXIT_SOLVER
        }
    }
}

fn scene_from(cli: &Cli) -> Result<SceneConfig, Failure> {
    let mut scene = SceneConfig::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
        scene
            .apply_config_text(&text)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    if let Some(v) = cli.n_o {
        scene.n_o = v;
    }
    if let Some(v) = cli.n_e {
        scene.n_e = v;
    }
    if let Some(v) = cli.nbar {
        scene.set_mean(v);
    }
    if let Some(v) = cli.dn {
        scene.set_delta(v);
    }
    if let Some(v) = cli.d_physical {
        if !(v > 0.0) {
            return Err(Failure::Usage("--d-physical must be positive".into()));
        }
        scene.d_physical = Some(v);
    }
    Ok(scene)
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<(), Failure> {
    let scene = scene_from(cli)?;
    let mut text = String::new();
    match &cli.command {
        Command::Reflectance { n1, n2 } => {
            let n2 = n2.unwrap_or_else(|| scene.n_bar());
            let r = fresnel_reflectance(*n1, n2)?;
            writeln!(text, "R = {r}").unwrap();
        }
        Command::Amplitude(p) => {
            let beta = p.beta.unwrap_or(scene.beta);
            writeln!(text, "beta = {beta}\ndkd = {}", p.dkd).unwrap();
            match modulus_and_phase(beta, p.dkd) {
                Ok(pt) => writeln!(text, "modulus = {}\nchi = {}", pt.modulus, pt.chi).unwrap(),
                Err(Error::SingularPoint { .. }) => writeln!(text, "modulus = 0\nchi = singular").unwrap(),
                Err(e) => return Err(e.into()),
            }
        }
        Command::Timeshift(p) => {
            let medium = scene.medium()?;
            let beta = p.beta.unwrap_or(scene.beta);
            let r = time_shift(&medium, beta, p.dkd)?;
            writeln!(text, "tau = {}\nsuperluminal = {}", r.tau, r.superluminal).unwrap();
            if let Some(d) = scene.d_physical {
                writeln!(text, "tau_seconds = {}", r.tau * d / SPEED_OF_LIGHT).unwrap();
            }
        }
        Command::MapAmplitude(m) => {
            let grid = map_grid(m, "fig2")?;
            let table = amplitude_phase_map(&grid);
            let params = grid_params(&grid);
            return emit(cli, stdout, "amplitude_phase_map", &params, &table);
        }
        Command::MapTimeshift(m) => {
            let medium = scene.medium()?;
            let grid = map_grid(m, "fig3")?;
            let table = timeshift_map(&medium, &grid);
            let mut params = medium_params(&medium);
            params.extend(grid_params(&grid));
            return emit(cli, stdout, "timeshift_map", &params, &table);
        }
        Command::Profiles { beta, mu, xi_range, res } => {
            let medium = scene.medium()?;
            let beta = beta.unwrap_or(scene.beta);
            let axis = Axis::new(xi_range.0, xi_range.1, *res)?;
            let table = profile_set(&medium, beta, mu, &axis)?;
            let mut params = medium_params(&medium);
            params.push(("beta", format_real(beta)));
            params.push(("mu", mu.iter().map(|m| format_real(*m)).collect::<Vec<_>>().join(";")));
            params.extend(axis_params("xi", &axis));
            return emit(cli, stdout, "profile_set", &params, &table);
        }
        Command::Evolve {
            beta,
            ell,
            harmonic,
            times,
            x_range,
            res,
        } => {
            let medium = scene.medium()?;
            let beta = beta.unwrap_or(scene.beta);
            let mut s = scene.clone();
            if let Some(l) = ell {
                s.ell = *l;
            }
            if let Some(n) = harmonic {
                s.harmonic = *n;
            }
            let pulse = s.pulse(&medium)?;
            let axis = Axis::new(x_range.0, x_range.1, *res)?;
            let table = evolution_frames(&medium, beta, &pulse, times, &axis)?;
            let mut params = medium_params(&medium);
            params.push(("beta", format_real(beta)));
            params.push(("ell", format_real(pulse.ell())));
            params.push(("N", s.harmonic.to_string()));
            params.push(("times", times.iter().map(|t| format_real(*t)).collect::<Vec<_>>().join(";")));
            params.extend(axis_params("x", &axis));
            return emit(cli, stdout, "evolution_frames", &params, &table);
        }
        Command::Peaks { beta, mu } => {
            let medium = scene.medium()?;
            let beta = beta.unwrap_or(scene.beta);
            let mu = mu.unwrap_or(1.0 / scene.ell);
            let dn = medium.delta_n();
            let peaks = find_extrema(beta, mu, dn)?;
            writeln!(text, "advanced_xi = {}\nadvanced_f = {}", peaks.advanced_peak.xi, peaks.advanced_peak.f).unwrap();
            match peaks.retarded_peak {
                Some(r) => writeln!(text, "retarded_xi = {}\nretarded_f = {}", r.xi, r.f).unwrap(),
                None => writeln!(text, "retarded_xi = none").unwrap(),
            }
            let minima: Vec<String> = peaks.minima.iter().map(|m| m.to_string()).collect();
            writeln!(text, "minima = {}", minima.join(";")).unwrap();
            writeln!(text, "xi0 = {}", xi0(&medium)).unwrap();
            match xi1_stationary(beta, dn) {
                Ok(xi1) => writeln!(text, "xi1 = {xi1}").unwrap(),
                Err(_) => writeln!(text, "xi1 = pole").unwrap(),
            }
        }
        Command::Validate {
            scene: use_scene,
            per_region,
            nodes,
            span,
        } => {
            let spec = QuadratureSpec::new(*nodes, *span)?;
            let sets = if *use_scene {
                let medium = scene.medium()?;
                vec![("scene", medium, scene.beta, scene.pulse(&medium)?)]
            } else {
                reference_sets()?
            };
            let mut worst: f64 = 0.0;
            for (name, medium, beta, pulse) in &sets {
                let grid = region_grid(medium, pulse, *per_region);
                let report = compare_grid(&grid, medium, *beta, pulse, &spec)?;
                worst = worst.max(report.max_abs_error);
                writeln!(
                    text,
                    "{name}: points = {}, max_abs_error = {:e}, at x = {}, t = {}",
                    report.points, report.max_abs_error, report.argmax.0, report.argmax.1
                )
                .unwrap();
            }
            stdout.write_all(text.as_bytes()).map_err(Error::from)?;
            if worst >= VALIDATION_TOL {
                return Err(Failure::Validation(format!(
                    "max deviation {worst:e} exceeds {VALIDATION_TOL:e}"
                )));
            }
            return Ok(());
        }
    }
    stdout.write_all(text.as_bytes()).map_err(Error::from)?;
    Ok(())
}

fn reference_sets() -> Result<Vec<(&'static str, CrystalMedium, f64, GaussianPulse)>, Error> {
    let narrow = CrystalMedium::from_mean(1.30, 0.15)?;
    let wide = CrystalMedium::from_mean(1.35, 0.5)?;
    let beta = 0.21 * PI;
    Ok(vec![
        ("fig5 mu=2.6", narrow, beta, GaussianPulse::tuned_mu(&narrow, 0, 2.6)?),
        ("fig5 mu=1.6", narrow, beta, GaussianPulse::tuned_mu(&narrow, 0, 1.6)?),
        ("fig5 mu=0.6", narrow, beta, GaussianPulse::tuned_mu(&narrow, 0, 0.6)?),
        ("fig6 ell=4", wide, beta, GaussianPulse::tuned(&wide, 0, 4.0)?),
    ])
}

fn map_grid(m: &MapArgs, default_window: &str) -> Result<GridSpec, Failure> {
    let window = m.window.as_deref();
    let mut grid = match window.unwrap_or(default_window) {
        "fig2" => GridSpec::fig2(m.res)?,
        "fig3" => GridSpec::fig3(m.res, m.half_width)?,
        other => return Err(Failure::Usage(format!("unknown window '{other}' (expected fig2 or fig3)"))),
    };
    if let Some((lo, hi)) = m.beta_range {
        grid.beta = Axis::new(lo, hi, m.res)?;
    }
    if let Some((lo, hi)) = m.dkd_range {
        grid.dkd = Axis::new(lo, hi, m.res)?;
    }
    Ok(grid)
}

fn axis_params(prefix: &'static str, axis: &Axis) -> Vec<(&'static str, String)> {
    let (lo, hi, n) = match prefix {
        "beta" => ("beta_lo", "beta_hi", "beta_n"),
        "dkd" => ("dkd_lo", "dkd_hi", "dkd_n"),
        "xi" => ("xi_lo", "xi_hi", "xi_n"),
        _ => ("x_lo", "x_hi", "x_n"),
    };
    vec![(lo, format_real(axis.lo)), (hi, format_real(axis.hi)), (n, axis.n.to_string())]
}

fn grid_params(grid: &GridSpec) -> Vec<(&'static str, String)> {
    let mut p = axis_params("beta", &grid.beta);
    p.extend(axis_params("dkd", &grid.dkd));
    p
}

fn medium_params(medium: &CrystalMedium) -> Vec<(&'static str, String)> {
    vec![("n_o", format_real(medium.n_o())), ("n_e", format_real(medium.n_e()))]
}

fn emit(
    cli: &Cli,
    stdout: &mut dyn Write,
    generator: &str,
    params: &[(&str, String)],
    table: &CsvTable,
) -> Result<(), Failure> {
    match &cli.out {
        Some(dir) => {
            let (csv, _) = write_table(Path::new(dir), generator, params, table)?;
            writeln!(stdout, "{}", csv.display()).map_err(Error::from)?;
        }
        None => stdout.write_all(table.to_csv().as_bytes()).map_err(Error::from)?,
    }
    Ok(())
}
