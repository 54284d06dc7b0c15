//! Named figure panels, each a fixed sweep over the bundled defaults.
//!
//! Grid resolutions: detuning [-5, 5] meV with 401 points, pump Rabi
//! frequency [0, 4] meV with 401 points, film thickness [1, 50] nm with 197
//! points (0.25 nm steps), and a 201 x 181 (pump, angle) grid for the angle
//! spectra.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::config::{Axis, Quantity, RunConfig, Sweep, SweepVariable};
use crate::plot;
use crate::spp::ThinFilmMethod;
use crate::sweep::{run_sweep, SweepError, SweepOptions, SweepTable};

/// Film thickness used for the film-mode damping panels, nm.
pub const FIG7_THICKNESS: f64 = 36.8;

#[derive(Debug, Error)]
pub enum FigureError {
    #[error("unknown figure id `{0}`")]
    UnknownFigureId(String),

    #[error(transparent)]
    Sweep(#[from] SweepError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig3c,
    Fig3d,
    Fig4a,
    Fig4b,
    Fig5a,
    Fig5b,
    Fig6a,
    Fig6b,
    Fig7a,
    Fig7b,
    Fig8a,
    Fig8b,
    Fig8c,
    Fig8d,
    Fig9a,
    Fig9b,
    Fig9c,
    Fig9d,
}

impl FigureId {
    pub const ALL: [FigureId; 22] = [
        FigureId::Fig2a,
        FigureId::Fig2b,
        FigureId::Fig3a,
        FigureId::Fig3b,
        FigureId::Fig3c,
        FigureId::Fig3d,
        FigureId::Fig4a,
        FigureId::Fig4b,
        FigureId::Fig5a,
        FigureId::Fig5b,
        FigureId::Fig6a,
        FigureId::Fig6b,
        FigureId::Fig7a,
        FigureId::Fig7b,
        FigureId::Fig8a,
        FigureId::Fig8b,
        FigureId::Fig8c,
        FigureId::Fig8d,
        FigureId::Fig9a,
        FigureId::Fig9b,
        FigureId::Fig9c,
        FigureId::Fig9d,
    ];

    /// Short id such as `5b`.
    pub fn id(self) -> &'static str {
        use FigureId::*;
        match self {
            Fig2a => "2a",
            Fig2b => "2b",
            Fig3a => "3a",
            Fig3b => "3b",
            Fig3c => "3c",
            Fig3d => "3d",
            Fig4a => "4a",
            Fig4b => "4b",
            Fig5a => "5a",
            Fig5b => "5b",
            Fig6a => "6a",
            Fig6b => "6b",
            Fig7a => "7a",
            Fig7b => "7b",
            Fig8a => "8a",
            Fig8b => "8b",
            Fig8c => "8c",
            Fig8d => "8d",
            Fig9a => "9a",
            Fig9b => "9b",
            Fig9c => "9c",
            Fig9d => "9d",
        }
    }

    pub fn file_stem(self) -> String {
        format!("fig{}", self.id())
    }

    pub fn title(self) -> &'static str {
        use FigureId::*;
        match self {
            Fig2a => "permittivity vs probe detuning, no pump",
            Fig2b => "permittivity vs pump Rabi frequency",
            Fig3a => "field enhancement vs detuning, no pump",
            Fig3b => "reflectivity vs detuning, no pump",
            Fig3c => "field enhancement vs detuning, pump 2 meV",
            Fig3d => "reflectivity vs detuning, pump 2 meV",
            Fig4a => "field enhancement over pump and angle",
            Fig4b => "reflectivity over pump and angle",
            Fig5a => "gain power vs pump",
            Fig5b => "SPP propagation length vs pump",
            Fig6a => "penetration depth into the quantum well",
            Fig6b => "penetration depth into the metal",
            Fig7a => "long-range mode damping vs pump",
            Fig7b => "short-range mode damping vs pump",
            Fig8a => "long-range propagation length vs thickness, no pump",
            Fig8b => "short-range propagation length vs thickness, no pump",
            Fig8c => "long-range propagation length vs thickness, pump 2 meV",
            Fig8d => "short-range propagation length vs thickness, pump 2 meV",
            Fig9a => "long-range lifetime vs thickness, no pump",
            Fig9b => "short-range lifetime vs thickness, no pump",
            Fig9c => "long-range lifetime vs thickness, pump 2 meV",
            Fig9d => "short-range lifetime vs thickness, pump 2 meV",
        }
    }

    /// The run behind this panel. `residual` swaps the solved film-mode
    /// damping of panels 7a/7b for the raw dispersion residual.
    pub fn config(self, residual: bool) -> RunConfig {
        use FigureId::*;
        let detuning = Axis::new(SweepVariable::DeltaP, -5.0, 5.0, 401);
        let pump = Axis::new(SweepVariable::OmegaB, 0.0, 4.0, 401);
        let thickness = Axis::new(SweepVariable::Q, 1.0, 50.0, 197);
        let (axis, outputs, omega_b) = match self {
            Fig2a => (detuning, vec![Quantity::EpsS], Some(0.0)),
            Fig2b => (pump, vec![Quantity::EpsS], None),
            Fig3a => (detuning, vec![Quantity::TEl], Some(0.0)),
            Fig3b => (detuning, vec![Quantity::R], Some(0.0)),
            Fig3c => (detuning, vec![Quantity::TEl], Some(2.0)),
            Fig3d => (detuning, vec![Quantity::R], Some(2.0)),
            Fig4a | Fig4b => {
                let q = if self == Fig4a { Quantity::TEl } else { Quantity::R };
                let sweep = Sweep {
                    outer: Axis::new(SweepVariable::OmegaB, 0.0, 4.0, 201),
                    inner: Some(Axis::new(SweepVariable::ThetaP, -90.0, 90.0, 181)),
                };
                return RunConfig::with_defaults(sweep, vec![q]);
            }
            Fig5a => (pump, vec![Quantity::G], None),
            Fig5b => (pump, vec![Quantity::L], None),
            Fig6a => (pump, vec![Quantity::DeltaS], None),
            Fig6b => (pump, vec![Quantity::DeltaM], None),
            Fig7a | Fig7b => {
                let q = match (self == Fig7a, residual) {
                    (true, false) => Quantity::KLrNorm,
                    (false, false) => Quantity::KSrNorm,
                    (true, true) => Quantity::DispResLr,
                    (false, true) => Quantity::DispResSr,
                };
                let mut cfg = RunConfig::with_defaults(Sweep::single(pump), vec![q]);
                cfg.stack.q = FIG7_THICKNESS;
                cfg.thin_film = ThinFilmMethod::ImplicitRoot;
                return cfg;
            }
            Fig8a => (thickness, vec![Quantity::LLr], Some(0.0)),
            Fig8b => (thickness, vec![Quantity::LSr], Some(0.0)),
            Fig8c => (thickness, vec![Quantity::LLr], Some(2.0)),
            Fig8d => (thickness, vec![Quantity::LSr], Some(2.0)),
            Fig9a => (thickness, vec![Quantity::TauLr], Some(0.0)),
            Fig9b => (thickness, vec![Quantity::TauSr], Some(0.0)),
            Fig9c => (thickness, vec![Quantity::TauLr], Some(2.0)),
            Fig9d => (thickness, vec![Quantity::TauSr], Some(2.0)),
        };
        let mut cfg = RunConfig::with_defaults(Sweep::single(axis), outputs);
        if let Some(ob) = omega_b {
            cfg.qw.omega_b = ob;
        }
        cfg
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for FigureId {
    type Err = FigureError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().trim_start_matches("fig");
        FigureId::ALL
            .iter()
            .copied()
            .find(|f| f.id() == key)
            .ok_or_else(|| FigureError::UnknownFigureId(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct FigureOptions {
    pub plot: bool,
    pub residual: bool,
    pub sweep: SweepOptions,
}

#[derive(Debug)]
pub struct FigureOutput {
    pub id: FigureId,
    pub csv: PathBuf,
    pub svg: Option<PathBuf>,
    pub table: SweepTable,
}

/// Computes a panel without writing anything.
pub fn figure_table(id: FigureId, opts: &FigureOptions) -> Result<SweepTable, FigureError> {
    Ok(run_sweep(&id.config(opts.residual), &opts.sweep)?)
}

/// Writes `fig<id>.csv` (and `fig<id>.svg` when plotting) into `out_dir`.
pub fn reproduce_figure(
    id: FigureId,
    out_dir: &Path,
    opts: &FigureOptions,
) -> Result<FigureOutput, FigureError> {
    let cfg = id.config(opts.residual);
    let table = run_sweep(&cfg, &opts.sweep)?;
    let csv = out_dir.join(format!("{}.csv", id.file_stem()));
    table.save(&csv)?;
    let svg = if opts.plot {
        let path = out_dir.join(format!("{}.svg", id.file_stem()));
        fs::write(&path, render(&cfg, &table, id.title())).map_err(|source| {
            SweepError::Io {
                path: path.clone(),
                source,
            }
        })?;
        Some(path)
    } else {
        None
    };
    Ok(FigureOutput { id, csv, svg, table })
}

/// SVG rendering of a sweep: a heatmap of the first output for two-axis
/// sweeps, otherwise one line per output column.
pub fn render(cfg: &RunConfig, table: &SweepTable, title: &str) -> String {
    let outer = cfg.sweep.outer;
    match cfg.sweep.inner {
        Some(inner) => {
            let z: Vec<f64> = table.rows.iter().map(|r| r[2]).collect();
            let xs: Vec<f64> = inner.values().collect();
            let ys: Vec<f64> = outer.values().collect();
            plot::heatmap(
                &format!("{title} ({})", table.header[2]),
                inner.variable.name(),
                outer.variable.name(),
                &xs,
                &ys,
                &z,
            )
        }
        None => {
            let x: Vec<f64> = table.rows.iter().map(|r| r[0]).collect();
            let series: Vec<(String, Vec<f64>)> = table.header[1..]
                .iter()
                .enumerate()
                .map(|(i, name)| (name.clone(), table.rows.iter().map(|r| r[i + 1]).collect()))
                .collect();
            plot::line_plot(title, outer.variable.name(), &x, &series)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for f in FigureId::ALL {
            assert_eq!(f.id().parse::<FigureId>().unwrap(), f);
            assert_eq!(f.file_stem().parse::<FigureId>().unwrap(), f);
        }
    }

    #[test]
    fn unknown_id_is_an_error() {
        assert!(matches!(
            "10a".parse::<FigureId>(),
            Err(FigureError::UnknownFigureId(s)) if s == "10a"
        ));
    }

    #[test]
    fn every_panel_config_validates() {
        for f in FigureId::ALL {
            f.config(false).validate().unwrap();
            f.config(true).validate().unwrap();
        }
    }

    #[test]
    fn angle_grid_size() {
        assert_eq!(FigureId::Fig4a.config(false).sweep.len(), 201 * 181);
    }
}
