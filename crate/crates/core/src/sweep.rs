//! Grid evaluation of a [`RunConfig`] and its CSV form.
//!
//! Rows come out in row-major order (inner axis fastest) whatever the thread
//! count, so a run is bit-for-bit reproducible.

use std::cell::OnceCell;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::config::{Quantity, RunConfig, SweepVariable};
use crate::error::{PhysicsError, Result};
use crate::medium::{gain_power, medium_response, MediumResponse, QwConfig};
use crate::multilayer::{stack_coefficients, OpticalStack, StackResponse};
use crate::roots::SolverOptions;
use crate::spp::{
    self, explicit_mode, group_velocity, lifetime, penetration_depths, probe_photon_energy,
    propagation_length, thin_film_mode, thin_film_residual, ThinFilmMethod, ThinFilmMode,
    DEFAULT_ENERGY_STEP,
};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("cannot start worker pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SweepOptions {
    /// Worker threads; `None` uses rayon's global pool.
    pub threads: Option<usize>,
    pub solver: SolverOptions,
}

/// Evaluated grid: one row per grid point, sweep coordinates first.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// One line per cell that could not be evaluated.
    pub warnings: Vec<String>,
}

impl SweepTable {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{}", self.header.join(","))?;
        let mut line = String::new();
        for row in &self.rows {
            line.clear();
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    line.push(',');
                }
                line.push_str(&format_float(*v));
            }
            line.push('\n');
            w.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is ascii")
    }

    /// Writes the CSV to `path` and, when any cell failed, the warnings to
    /// the sidecar returned by [`warnings_path`].
    pub fn save(&self, path: &Path) -> std::result::Result<(), SweepError> {
        let io_err = |p: &Path| {
            let p = p.to_path_buf();
            move |source| SweepError::Io { path: p, source }
        };
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(io_err(dir))?;
        }
        let file = fs::File::create(path).map_err(io_err(path))?;
        let mut w = io::BufWriter::new(file);
        self.write_csv(&mut w).map_err(io_err(path))?;
        w.flush().map_err(io_err(path))?;
        let side = warnings_path(path);
        if self.warnings.is_empty() {
            if side.exists() {
                fs::remove_file(&side).map_err(io_err(&side))?;
            }
        } else {
            let mut text = self.warnings.join("\n");
            text.push('\n');
            fs::write(&side, text).map_err(io_err(&side))?;
        }
        Ok(())
    }
}

/// `out.csv` -> `out.warnings.log`.
pub fn warnings_path(csv: &Path) -> PathBuf {
    csv.with_extension("warnings.log")
}

/// Full-precision float formatting; `inf`, `-inf` and `nan` are literal.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

/// Evaluates every grid point of `cfg`.
pub fn run_sweep(cfg: &RunConfig, opts: &SweepOptions) -> std::result::Result<SweepTable, SweepError> {
    let axes = cfg.sweep.axes();
    let inner_n = cfg.sweep.inner.map_or(1, |a| a.count);
    let n = cfg.sweep.len();
    let eval = |idx: usize| -> (Vec<f64>, Vec<String>) {
        let coords: Vec<f64> = match cfg.sweep.inner {
            Some(inner) => vec![cfg.sweep.outer.value(idx / inner_n), inner.value(idx % inner_n)],
            None => vec![cfg.sweep.outer.value(idx)],
        };
        let point = Point::new(cfg, &axes.iter().map(|a| a.variable).collect::<Vec<_>>(), &coords, opts.solver);
        let mut row = coords.clone();
        let mut warnings = Vec::new();
        for &q in &cfg.outputs {
            let names = q.columns();
            match point.evaluate(q) {
                Ok(values) => {
                    for (name, v) in names.iter().zip(&values) {
                        if v.is_nan() {
                            warnings.push(warning(idx, &axes, &coords, name, "non-finite result"));
                        }
                    }
                    row.extend(values);
                }
                Err(e) => {
                    for name in &names {
                        warnings.push(warning(idx, &axes, &coords, name, &e.to_string()));
                    }
                    row.resize(row.len() + names.len(), f64::NAN);
                }
            }
        }
        (row, warnings)
    };

    let results: Vec<(Vec<f64>, Vec<String>)> = match opts.threads {
        None => (0..n).into_par_iter().map(eval).collect(),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| SweepError::ThreadPool(e.to_string()))?
            .install(|| (0..n).into_par_iter().map(eval).collect()),
    };

    let mut rows = Vec::with_capacity(n);
    let mut warnings = Vec::new();
    for (row, w) in results {
        rows.push(row);
        warnings.extend(w);
    }
    Ok(SweepTable {
        header: cfg.header(),
        rows,
        warnings,
    })
}

fn warning(
    idx: usize,
    axes: &[crate::config::Axis],
    coords: &[f64],
    column: &str,
    msg: &str,
) -> String {
    let mut s = format!("row {idx} (");
    for (i, (a, c)) in axes.iter().zip(coords).enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "{}={}", a.variable, c);
    }
    let _ = write!(s, "): {column}: {msg}");
    s
}

/// One grid point with lazily computed intermediate results.
struct Point {
    qw: QwConfig,
    stack: OpticalStack,
    theta_p: f64,
    method: ThinFilmMethod,
    solver: SolverOptions,
    medium: OnceCell<Result<MediumResponse>>,
    optics: OnceCell<Result<StackResponse>>,
    k_spp: OnceCell<Result<Complex64>>,
    k_film: [OnceCell<Result<Complex64>>; 2],
    vg: [OnceCell<Result<f64>>; 2],
}

fn idx(mode: ThinFilmMode) -> usize {
    match mode {
        ThinFilmMode::LongRange => 0,
        ThinFilmMode::ShortRange => 1,
    }
}

fn cplx(z: Complex64) -> Vec<f64> {
    vec![z.re, z.im]
}

impl Point {
    fn new(cfg: &RunConfig, vars: &[SweepVariable], coords: &[f64], solver: SolverOptions) -> Self {
        let mut qw = cfg.qw;
        let mut stack = cfg.stack;
        let mut theta_p = cfg.theta_p;
        for (&var, &x) in vars.iter().zip(coords) {
            match var {
                SweepVariable::DeltaP => qw.delta_p = x,
                SweepVariable::OmegaB => qw.omega_b = x,
                SweepVariable::ThetaP => theta_p = x,
                SweepVariable::Q => stack.q = x,
            }
        }
        Self {
            qw,
            stack,
            theta_p,
            method: cfg.thin_film,
            solver,
            medium: OnceCell::new(),
            optics: OnceCell::new(),
            k_spp: OnceCell::new(),
            k_film: Default::default(),
            vg: Default::default(),
        }
    }

    fn medium(&self) -> Result<MediumResponse> {
        self.medium.get_or_init(|| medium_response(&self.qw)).clone()
    }

    fn eps_s(&self) -> Result<Complex64> {
        self.medium().map(|m| m.eps_s)
    }

    fn optics(&self) -> Result<StackResponse> {
        self.optics
            .get_or_init(|| stack_coefficients(&self.stack, self.eps_s()?, self.theta_p))
            .clone()
    }

    fn k_spp(&self) -> Result<Complex64> {
        self.k_spp
            .get_or_init(|| spp::k_spp_single_interface(self.stack.eps_m, self.eps_s()?, self.stack.k0()))
            .clone()
    }

    fn k_film(&self, mode: ThinFilmMode) -> Result<Complex64> {
        self.k_film[idx(mode)]
            .get_or_init(|| {
                thin_film_mode(
                    mode,
                    self.method,
                    self.stack.eps_m,
                    self.eps_s()?,
                    self.stack.k0(),
                    self.stack.q,
                    &self.solver,
                )
            })
            .clone()
    }

    fn vg(&self, mode: ThinFilmMode) -> Result<f64> {
        self.vg[idx(mode)]
            .get_or_init(|| {
                group_velocity(
                    mode,
                    self.method,
                    &self.qw,
                    &self.stack,
                    probe_photon_energy(&self.qw, &self.stack),
                    DEFAULT_ENERGY_STEP,
                    &self.solver,
                )
            })
            .clone()
    }

    fn tau(&self, mode: ThinFilmMode) -> Result<f64> {
        Ok(lifetime(propagation_length(self.k_film(mode)?), self.vg(mode)?))
    }

    fn residual(&self, mode: ThinFilmMode) -> Result<Complex64> {
        let eps_s = self.eps_s()?;
        let (eps_m, k0, q) = (self.stack.eps_m, self.stack.k0(), self.stack.q);
        let k = explicit_mode(mode, eps_m, eps_s, k0, q)?;
        thin_film_residual(mode, eps_m, eps_s, k0, q, k)
    }

    fn evaluate(&self, q: Quantity) -> std::result::Result<Vec<f64>, PhysicsError> {
        use ThinFilmMode::{LongRange as Lr, ShortRange as Sr};
        let k0 = self.stack.k0();
        Ok(match q {
            Quantity::Chi => cplx(self.medium()?.chi),
            Quantity::EpsS => cplx(self.eps_s()?),
            Quantity::R => vec![self.optics()?.reflectivity],
            Quantity::TEl => vec![self.optics()?.t_el],
            Quantity::G => vec![gain_power(self.eps_s()?, k0)?],
            Quantity::L => vec![propagation_length(self.k_spp()?)],
            Quantity::DeltaM => vec![penetration_depths(self.stack.eps_m, self.eps_s()?, k0).0],
            Quantity::DeltaS => vec![penetration_depths(self.stack.eps_m, self.eps_s()?, k0).1],
            Quantity::KSpp => cplx(self.k_spp()?),
            Quantity::KLr => cplx(self.k_film(Lr)?),
            Quantity::KSr => cplx(self.k_film(Sr)?),
            Quantity::KLrNorm => cplx(self.k_film(Lr)? / k0),
            Quantity::KSrNorm => cplx(self.k_film(Sr)? / k0),
            Quantity::LLr => vec![propagation_length(self.k_film(Lr)?)],
            Quantity::LSr => vec![propagation_length(self.k_film(Sr)?)],
            Quantity::Vg => vec![
                self.vg(Lr).unwrap_or(f64::NAN),
                self.vg(Sr).unwrap_or(f64::NAN),
            ],
            Quantity::VgLr => vec![self.vg(Lr)?],
            Quantity::VgSr => vec![self.vg(Sr)?],
            Quantity::Tau => vec![
                self.tau(Lr).unwrap_or(f64::NAN),
                self.tau(Sr).unwrap_or(f64::NAN),
            ],
            Quantity::TauLr => vec![self.tau(Lr)?],
            Quantity::TauSr => vec![self.tau(Sr)?],
            Quantity::Asym => vec![(self.stack.eps_t - self.eps_s()?).norm()],
            Quantity::DispResLr => cplx(self.residual(Lr)?),
            Quantity::DispResSr => cplx(self.residual(Sr)?),
        })
    }
}
