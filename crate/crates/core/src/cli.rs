//! Command-line driver: flag/config parsing, scan orchestration and
//! deterministic CSV emission.
//!
//! Subcommands: `fields`, `amplitude-scan`, `ratios`, `am-check`,
//! `gtable`. Every physical input arrives in explicit units (nm, rad) and
//! is converted to atomic units exactly once, here. Values resolve as
//! command-line flag, then `--config` file entry, then built-in default;
//! each CSV records the effective configuration as `# key=value` comment
//! lines above the header so a run can be reproduced from its own output.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::beam::{angular_momentum, poynting, PhotonKinematics};
use crate::matelem::{curly_bracket, reduced_g, transition_energy, AtomicState};
use crate::specfun::{bessel_j, QuadratureSpec};
use crate::xsec::{f_twisted, plane_wave_sigma, r_twisted};
use crate::{Error, Result, BOHR_RADIUS_NM, FINE_STRUCTURE};

#[derive(Debug, Parser)]
#[command(
    name = "twisted-photon",
    version,
    about = "Twisted-photon fields and hydrogen photoexcitation scans"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Output CSV path (required by the table-producing subcommands)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// key=value configuration file; explicit flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads for scan points (default: available processors)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Starting radial node count (the angular count is half of it)
    #[arg(long, global = true)]
    pub quad_nodes: Option<usize>,

    /// Relative tolerance for quadrature refinement
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the Poynting vector of the beam on a transverse grid
    Fields(FieldsArgs),
    /// Scan |M| against the impact parameter for every m_f of a level
    AmplitudeScan(AmplitudeScanArgs),
    /// f_twisted / r_twisted table over (n_f, l_f) levels
    Ratios(RatiosArgs),
    /// Print the spin/orbital/total angular-momentum projections
    AmCheck(AmCheckArgs),
    /// Table of reduced atomic factors g over (m_f, lambda)
    Gtable(GtableArgs),
}

#[derive(Debug, Args)]
pub struct FieldsArgs {
    /// Vacuum wavelength in nm [default: 500]
    #[arg(long)]
    pub wavelength_nm: Option<f64>,
    /// Pitch angle in radians [default: 0.2]
    #[arg(long)]
    pub pitch: Option<f64>,
    /// Total angular-momentum projection m_gamma [default: 4]
    #[arg(long, allow_negative_numbers = true)]
    pub mgamma: Option<i32>,
    /// Helicity, +1 or -1 [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    pub helicity: Option<i32>,
    /// Grid half-width in wavelengths [default: 4]
    #[arg(long)]
    pub grid_extent: Option<f64>,
    /// Points per grid side [default: 101]
    #[arg(long)]
    pub grid_n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AmplitudeScanArgs {
    /// Final principal quantum number [default: 4]
    #[arg(long)]
    pub nf: Option<u32>,
    /// Final orbital quantum number [default: 3]
    #[arg(long)]
    pub lf: Option<u32>,
    /// Total angular-momentum projection m_gamma [default: 3]
    #[arg(long, allow_negative_numbers = true)]
    pub mgamma: Option<i32>,
    /// Helicity, +1 or -1 [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    pub helicity: Option<i32>,
    /// Pitch angle in radians [default: 0.2]
    #[arg(long)]
    pub pitch: Option<f64>,
    /// Largest impact parameter in wavelengths [default: 2]
    #[arg(long)]
    pub bmax: Option<f64>,
    /// Number of scan intervals (rows = steps + 1) [default: 100]
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RatiosArgs {
    /// Final principal quantum number; repeat to add levels, zipped with
    /// --lf [default: 4 4 5]
    #[arg(long)]
    pub nf: Vec<u32>,
    /// Final orbital quantum number; repeat to add levels [default: 1 3 4]
    #[arg(long)]
    pub lf: Vec<u32>,
    /// Pitch angle in radians [default: 0.2]
    #[arg(long)]
    pub pitch: Option<f64>,
    /// Helicity, +1 or -1 [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    pub helicity: Option<i32>,
}

#[derive(Debug, Args)]
pub struct AmCheckArgs {
    /// Pitch angle in radians [default: 0.2]
    #[arg(long)]
    pub pitch: Option<f64>,
    /// Total angular-momentum projection m_gamma [default: 4]
    #[arg(long, allow_negative_numbers = true)]
    pub mgamma: Option<i32>,
    /// Helicity, +1 or -1 [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    pub helicity: Option<i32>,
}

#[derive(Debug, Args)]
pub struct GtableArgs {
    /// Final principal quantum number [default: 4]
    #[arg(long)]
    pub nf: Option<u32>,
    /// Final orbital quantum number [default: 3]
    #[arg(long)]
    pub lf: Option<u32>,
    /// Pitch angle in radians [default: 0.2]
    #[arg(long)]
    pub pitch: Option<f64>,
    /// Helicity, +1 or -1 [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    pub helicity: Option<i32>,
}

/// Entry point used by the binary.
pub fn run(cli: Cli) -> Result<()> {
    let pool = build_pool(&cli.common)?;
    pool.install(|| match &cli.command {
        Command::Fields(args) => cmd_fields(args, &cli.common),
        Command::AmplitudeScan(args) => cmd_amplitude_scan(args, &cli.common),
        Command::Ratios(args) => cmd_ratios(args, &cli.common),
        Command::AmCheck(args) => cmd_am_check(args, &cli.common),
        Command::Gtable(args) => cmd_gtable(args, &cli.common),
    })
}

fn build_pool(common: &CommonArgs) -> Result<rayon::ThreadPool> {
    let threads = match common.jobs {
        Some(0) => {
            return Err(Error::usage("--jobs must be at least 1"));
        }
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::usage(format!("cannot build worker pool: {e}")))
}

// ---------------------------------------------------------------------
// configuration files and value resolution

/// Parsed key=value configuration file ('#' comments, no sections).
struct ConfigMap(HashMap<String, String>);

impl ConfigMap {
    fn load(common: &CommonArgs, allowed: &[&str]) -> Result<Self> {
        let mut map = HashMap::new();
        if let Some(path) = &common.config {
            let text = fs::read_to_string(path)?;
            for (lineno, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    Error::usage(format!(
                        "{}:{}: expected key=value, got {line:?}",
                        path.display(),
                        lineno + 1
                    ))
                })?;
                let key = key.trim();
                if !allowed.contains(&key) && !COMMON_KEYS.contains(&key) {
                    return Err(Error::usage(format!(
                        "{}:{}: unknown configuration key {key:?}",
                        path.display(),
                        lineno + 1
                    )));
                }
                map.insert(key.to_string(), value.trim().to_string());
            }
        }
        Ok(ConfigMap(map))
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                Error::usage(format!("configuration key {key:?} has invalid value {raw:?}"))
            }),
        }
    }

    fn parse_list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .split(',')
                .map(|item| {
                    item.trim().parse::<T>().map_err(|_| {
                        Error::usage(format!(
                            "configuration key {key:?} has invalid list entry {item:?}"
                        ))
                    })
                })
                .collect::<Result<Vec<T>>>()
                .map(Some),
        }
    }
}

const COMMON_KEYS: &[&str] = &["quad-nodes", "rel-tol"];

fn resolve<T: std::str::FromStr + Copy>(
    flag: Option<T>,
    config: &ConfigMap,
    key: &str,
    default: T,
) -> Result<T> {
    match flag {
        Some(v) => Ok(v),
        None => Ok(config.parse::<T>(key)?.unwrap_or(default)),
    }
}

/// Quadrature controlled by the common flags, radial cutoff scaled to the
/// final level.
fn resolve_quad(common: &CommonArgs, config: &ConfigMap, n_f: u32) -> Result<QuadratureSpec> {
    let radial = match common.quad_nodes {
        Some(n) => n,
        None => config.parse::<usize>("quad-nodes")?.unwrap_or(256),
    };
    let rel_tol = match common.rel_tol {
        Some(t) => t,
        None => config.parse::<f64>("rel-tol")?.unwrap_or(1e-9),
    };
    let spec = QuadratureSpec {
        radial_nodes: radial,
        angular_nodes: (radial / 2).max(16),
        rel_tol,
        ..QuadratureSpec::for_level(n_f)
    };
    spec.validate()?;
    Ok(spec)
}

fn validate_helicity(helicity: i32) -> Result<i32> {
    if helicity == 1 || helicity == -1 {
        Ok(helicity)
    } else {
        Err(Error::usage(format!(
            "--helicity must be +1 or -1, got {helicity}"
        )))
    }
}

fn require_out(common: &CommonArgs) -> Result<&Path> {
    common
        .out
        .as_deref()
        .ok_or_else(|| Error::usage("this subcommand requires --out PATH"))
}

// ---------------------------------------------------------------------
// CSV emission

/// Rectangular numeric table; written with a '#'-commented effective
/// configuration block, one header line, and every value in scientific
/// notation with nine significant digits.
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new(header: Vec<String>) -> Self {
        CsvTable {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.header.len(), "ragged CSV row");
        self.rows.push(row);
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn write(&self, path: &Path, config: &[(String, String)]) -> Result<()> {
        let mut out = Vec::with_capacity(64 * (self.rows.len() + 2));
        for (key, value) in config {
            writeln!(out, "# {key}={value}").expect("vec write");
        }
        writeln!(out, "{}", self.header.join(",")).expect("vec write");
        for row in &self.rows {
            let mut first = true;
            for v in row {
                if !first {
                    out.push(b',');
                }
                write!(out, "{}", format_sci(*v)).expect("vec write");
                first = false;
            }
            out.push(b'\n');
        }
        fs::write(path, out)?;
        Ok(())
    }
}

/// Scientific notation with nine significant digits, e.g. `-3.36558841e-1`.
pub fn format_sci(x: f64) -> String {
    format!("{x:.8e}")
}

fn kv(key: &str, value: impl std::fmt::Display) -> (String, String) {
    (key.to_string(), value.to_string())
}

// ---------------------------------------------------------------------
// subcommands

fn cmd_fields(args: &FieldsArgs, common: &CommonArgs) -> Result<()> {
    let allowed = [
        "wavelength-nm",
        "pitch",
        "mgamma",
        "helicity",
        "grid-extent",
        "grid-n",
    ];
    let config = ConfigMap::load(common, &allowed)?;
    let wavelength_nm = resolve(args.wavelength_nm, &config, "wavelength-nm", 500.0)?;
    let pitch = resolve(args.pitch, &config, "pitch", 0.2)?;
    let mgamma = resolve(args.mgamma, &config, "mgamma", 4)?;
    let helicity = validate_helicity(resolve(args.helicity, &config, "helicity", 1)?)?;
    let grid_extent = resolve(args.grid_extent, &config, "grid-extent", 4.0)?;
    let grid_n = resolve(args.grid_n, &config, "grid-n", 101)?;
    let out = require_out(common)?;
    // quadrature flags are accepted but unused here: the field formulas
    // are closed-form
    let quad = resolve_quad(common, &config, 1)?;

    if !(wavelength_nm > 0.0) {
        return Err(Error::usage("--wavelength-nm must be positive"));
    }
    if grid_n < 2 || !(grid_extent > 0.0) {
        return Err(Error::usage(
            "--grid-n must be at least 2 and --grid-extent positive",
        ));
    }
    let wavelength = wavelength_nm / BOHR_RADIUS_NM;
    let omega = 2.0 * std::f64::consts::PI / (FINE_STRUCTURE * wavelength);
    let kin = PhotonKinematics::new(omega, pitch, mgamma, helicity)?;

    let step = 2.0 * grid_extent / (grid_n - 1) as f64;
    let rows: Vec<Vec<f64>> = (0..grid_n * grid_n)
        .into_par_iter()
        .map(|idx| {
            let iy = idx / grid_n;
            let ix = idx % grid_n;
            let x = -grid_extent + step * ix as f64;
            let y = -grid_extent + step * iy as f64;
            let rho = x.hypot(y) * wavelength;
            let s = poynting(&kin, rho);
            let ring = 2.0 * std::f64::consts::PI * rho;
            vec![x, y, s[1], s[2], ring * s[1], ring * s[2]]
        })
        .collect();

    let mut table = CsvTable::new(
        ["x", "y", "S_phi", "S_z", "two_pi_rho_S_phi", "two_pi_rho_S_z"]
            .map(String::from)
            .to_vec(),
    );
    for row in rows {
        table.push_row(row);
    }
    table.write(
        out,
        &[
            kv("command", "fields"),
            kv("wavelength-nm", wavelength_nm),
            kv("pitch", pitch),
            kv("mgamma", mgamma),
            kv("helicity", helicity),
            kv("grid-extent", grid_extent),
            kv("grid-n", grid_n),
            kv("quad-nodes", quad.radial_nodes),
            kv("rel-tol", quad.rel_tol),
        ],
    )
}

fn cmd_amplitude_scan(args: &AmplitudeScanArgs, common: &CommonArgs) -> Result<()> {
    let allowed = ["nf", "lf", "mgamma", "helicity", "pitch", "bmax", "steps"];
    let config = ConfigMap::load(common, &allowed)?;
    let nf = resolve(args.nf, &config, "nf", 4)?;
    let lf = resolve(args.lf, &config, "lf", 3)?;
    let mgamma = resolve(args.mgamma, &config, "mgamma", 3)?;
    let helicity = validate_helicity(resolve(args.helicity, &config, "helicity", 1)?)?;
    let pitch = resolve(args.pitch, &config, "pitch", 0.2)?;
    let bmax = resolve(args.bmax, &config, "bmax", 2.0)?;
    let steps = resolve(args.steps, &config, "steps", 100)?;
    let out = require_out(common)?;
    let quad = resolve_quad(common, &config, nf)?;

    if steps == 0 || !(bmax > 0.0) {
        return Err(Error::usage("--steps and --bmax must be positive"));
    }
    let energy = transition_energy(nf)?;
    let kin = PhotonKinematics::new(energy.omega, pitch, mgamma, helicity)?;

    let m_values: Vec<i32> = (-(lf as i32)..=(lf as i32)).collect();
    let brackets: Vec<f64> = m_values
        .par_iter()
        .map(|&m_f| {
            let state = AtomicState::new(nf, lf, m_f)?;
            Ok(curly_bracket(&state, &kin, &quad)?.norm())
        })
        .collect::<Result<_>>()?;

    let mut header = vec!["b_over_lambda".to_string()];
    header.extend(m_values.iter().map(|m| format!("absM[mf={m}]")));
    let mut table = CsvTable::new(header);
    let kappa = kin.kappa();
    let wavelength = kin.wavelength();
    for i in 0..=steps {
        let b_over_lambda = bmax * i as f64 / steps as f64;
        let b = b_over_lambda * wavelength;
        let mut row = vec![b_over_lambda];
        for (&m_f, bracket) in m_values.iter().zip(&brackets) {
            let j = bessel_j(m_f - mgamma, kappa * b)?;
            row.push(j.abs() * bracket);
        }
        table.push_row(row);
    }
    table.write(
        out,
        &[
            kv("command", "amplitude-scan"),
            kv("nf", nf),
            kv("lf", lf),
            kv("mgamma", mgamma),
            kv("helicity", helicity),
            kv("pitch", pitch),
            kv("bmax", bmax),
            kv("steps", steps),
            kv("quad-nodes", quad.radial_nodes),
            kv("rel-tol", quad.rel_tol),
        ],
    )
}

fn cmd_ratios(args: &RatiosArgs, common: &CommonArgs) -> Result<()> {
    let allowed = ["nf", "lf", "pitch", "helicity"];
    let config = ConfigMap::load(common, &allowed)?;
    let nf_list = if args.nf.is_empty() {
        config.parse_list::<u32>("nf")?.unwrap_or_else(|| vec![4, 4, 5])
    } else {
        args.nf.clone()
    };
    let lf_list = if args.lf.is_empty() {
        config.parse_list::<u32>("lf")?.unwrap_or_else(|| vec![1, 3, 4])
    } else {
        args.lf.clone()
    };
    if nf_list.len() != lf_list.len() || nf_list.is_empty() {
        return Err(Error::usage(
            "--nf and --lf must be given the same, nonzero number of times",
        ));
    }
    let pitch = resolve(args.pitch, &config, "pitch", 0.2)?;
    let helicity = validate_helicity(resolve(args.helicity, &config, "helicity", 1)?)?;
    let out = require_out(common)?;

    let levels: Vec<(u32, u32)> = nf_list.iter().copied().zip(lf_list.iter().copied()).collect();
    let results: Vec<(f64, f64, f64, f64)> = levels
        .par_iter()
        .map(|&(nf, lf)| {
            let quad = resolve_quad(common, &config, nf)?;
            let energy = transition_energy(nf)?;
            // m_gamma is irrelevant for averaged observables
            let kin = PhotonKinematics::new(energy.omega, pitch, 3, helicity)?;
            let f = f_twisted(nf, lf, &kin, &quad)?;
            let r = r_twisted(nf, lf, &kin, &quad)?;
            let pw_state = AtomicState::new(nf, lf, helicity)?;
            let sigma_pw = plane_wave_sigma(&pw_state, helicity, energy.omega, &quad)?.value;
            Ok((f, r, r * sigma_pw, sigma_pw))
        })
        .collect::<Result<_>>()?;

    let mut table = CsvTable::new(
        ["n_f", "l_f", "f_twisted", "r_twisted", "sigma_sum", "sigma_pw"]
            .map(String::from)
            .to_vec(),
    );
    for (&(nf, lf), &(f, r, sum, pw)) in levels.iter().zip(&results) {
        table.push_row(vec![f64::from(nf), f64::from(lf), f, r, sum, pw]);
        println!(
            "(n_f={nf}, l_f={lf}): f_twisted={:.4} r_twisted={:.4} sigma_sum={:.6e} sigma_pw={:.6e}",
            f, r, sum, pw
        );
    }
    let quad = resolve_quad(common, &config, 1)?;
    table.write(
        out,
        &[
            kv("command", "ratios"),
            kv(
                "nf",
                nf_list
                    .iter()
                    .map(u32::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            kv(
                "lf",
                lf_list
                    .iter()
                    .map(u32::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            kv("pitch", pitch),
            kv("helicity", helicity),
            kv("quad-nodes", quad.radial_nodes),
            kv("rel-tol", quad.rel_tol),
        ],
    )
}

fn cmd_am_check(args: &AmCheckArgs, common: &CommonArgs) -> Result<()> {
    let allowed = ["pitch", "mgamma", "helicity"];
    let config = ConfigMap::load(common, &allowed)?;
    let pitch = resolve(args.pitch, &config, "pitch", 0.2)?;
    let mgamma = resolve(args.mgamma, &config, "mgamma", 4)?;
    let helicity = validate_helicity(resolve(args.helicity, &config, "helicity", 1)?)?;

    // the projections depend only on geometry, not on the photon energy
    let kin = PhotonKinematics::new(0.5, pitch, mgamma, helicity)?;
    let am = angular_momentum(&kin);
    if (am.spin + am.oam - am.total).abs() > 4.0 * f64::EPSILON * (1.0 + am.total.abs()) {
        return Err(Error::domain(format!(
            "angular-momentum bookkeeping violated: spin={} oam={} total={}",
            am.spin, am.oam, am.total
        )));
    }
    println!("spin={:.6} oam={:.6} total={}", am.spin, am.oam, mgamma);
    Ok(())
}

fn cmd_gtable(args: &GtableArgs, common: &CommonArgs) -> Result<()> {
    let allowed = ["nf", "lf", "pitch", "helicity"];
    let config = ConfigMap::load(common, &allowed)?;
    let nf = resolve(args.nf, &config, "nf", 4)?;
    let lf = resolve(args.lf, &config, "lf", 3)?;
    let pitch = resolve(args.pitch, &config, "pitch", 0.2)?;
    let helicity = validate_helicity(resolve(args.helicity, &config, "helicity", 1)?)?;
    let out = require_out(common)?;
    let quad = resolve_quad(common, &config, nf)?;

    let energy = transition_energy(nf)?;
    let kin = PhotonKinematics::new(energy.omega, pitch, 3, helicity)?;

    let tasks: Vec<(i32, i32)> = (-(lf as i32)..=(lf as i32))
        .flat_map(|m_f| [-1, 0, 1].map(|lambda| (m_f, lambda)))
        .collect();
    let rows: Vec<Vec<f64>> = tasks
        .par_iter()
        .map(|&(m_f, lambda)| {
            let state = AtomicState::new(nf, lf, m_f)?;
            let g = reduced_g(&state, lambda, &kin, &quad)?;
            let pure = if g.is_real_or_imaginary() { 1.0 } else { 0.0 };
            Ok(vec![
                f64::from(m_f),
                f64::from(lambda),
                g.value.re,
                g.value.im,
                g.rel_change,
                pure,
            ])
        })
        .collect::<Result<_>>()?;

    let mut table = CsvTable::new(
        ["m_f", "lambda", "re_g", "im_g", "achieved_rel_tol", "real_or_imag"]
            .map(String::from)
            .to_vec(),
    );
    for row in rows {
        table.push_row(row);
    }
    table.write(
        out,
        &[
            kv("command", "gtable"),
            kv("nf", nf),
            kv("lf", lf),
            kv("pitch", pitch),
            kv("helicity", helicity),
            kv("quad-nodes", quad.radial_nodes),
            kv("rel-tol", quad.rel_tol),
        ],
    )
}
