//! Run configuration: sectioned `key = value` text (`[qw]`, `[stack]`,
//! `[sweep]`, `[outputs]`) in TOML syntax.
//!
//! Omitted physics keys fall back to the bundled default operating point.
//! Unknown sections or keys are rejected.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use once_cell::sync::Lazy;
use thiserror::Error;
use toml::{Table, Value};

use crate::medium::QwConfig;
use crate::multilayer::OpticalStack;
use crate::spp::ThinFilmMethod;

/// The bundled default configuration text.
pub const DEFAULT_CONFIG: &str = include_str!("../config/default.toml");

const QW_KEYS: &[&str] = &[
    "omega_p", "omega_c", "omega_b", "omega_s", "delta_p", "delta_c", "delta_b", "gamma_2",
    "gamma_3l", "gamma_4l", "gamma_3d", "gamma_4d", "alpha",
];
const STACK_KEYS: &[&str] = &["eps_t", "eps_m", "q", "lambda0", "n_t", "theta_p"];
const AXIS_KEYS: &[&str] = &["variable", "start", "stop", "count"];
const OUTPUT_KEYS: &[&str] = &["quantities", "thin_film", "path", "plot"];

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ConfigError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown key `{key}`")]
    UnknownKey { key: String },

    #[error("invalid value for `{key}`: {message}")]
    Validation { key: String, message: String },
}

fn invalid(key: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Validation {
        key: key.into(),
        message: message.into(),
    }
}

/// Default physics parameters, decoded once from [`DEFAULT_CONFIG`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Defaults {
    pub qw: QwConfig,
    pub stack: OpticalStack,
    pub theta_p: f64,
}

static DEFAULTS: Lazy<Defaults> = Lazy::new(|| {
    let table: Table = DEFAULT_CONFIG.parse().expect("bundled default config parses");
    let qw_t = table.get("qw").and_then(Value::as_table).expect("[qw] present");
    let st_t = table.get("stack").and_then(Value::as_table).expect("[stack] present");
    let num = |t: &Table, k: &str| {
        float_value(t.get(k).unwrap_or_else(|| panic!("default `{k}` present")), k)
            .expect("default is a number")
    };
    let cplx = |t: &Table, k: &str| {
        complex_value(t.get(k).unwrap_or_else(|| panic!("default `{k}` present")), k)
            .expect("default is complex")
    };
    Defaults {
        qw: QwConfig {
            omega_p: num(qw_t, "omega_p"),
            omega_c: num(qw_t, "omega_c"),
            omega_b: num(qw_t, "omega_b"),
            omega_s: num(qw_t, "omega_s"),
            delta_p: num(qw_t, "delta_p"),
            delta_c: num(qw_t, "delta_c"),
            delta_b: num(qw_t, "delta_b"),
            gamma_2: num(qw_t, "gamma_2"),
            gamma_3l: num(qw_t, "gamma_3l"),
            gamma_4l: num(qw_t, "gamma_4l"),
            gamma_3d: num(qw_t, "gamma_3d"),
            gamma_4d: num(qw_t, "gamma_4d"),
            alpha: num(qw_t, "alpha"),
        },
        stack: OpticalStack {
            eps_t: cplx(st_t, "eps_t"),
            eps_m: cplx(st_t, "eps_m"),
            q: num(st_t, "q"),
            lambda0: num(st_t, "lambda0"),
            n_t: num(st_t, "n_t"),
        },
        theta_p: num(st_t, "theta_p"),
    }
});

pub fn defaults() -> &'static Defaults {
    &DEFAULTS
}

/// Variables that can be swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepVariable {
    DeltaP,
    OmegaB,
    ThetaP,
    Q,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::DeltaP => "delta_p",
            SweepVariable::OmegaB => "omega_b",
            SweepVariable::ThetaP => "theta_p",
            SweepVariable::Q => "q",
        }
    }
}

impl FromStr for SweepVariable {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "delta_p" => Ok(SweepVariable::DeltaP),
            "omega_b" => Ok(SweepVariable::OmegaB),
            "theta_p" => Ok(SweepVariable::ThetaP),
            "q" => Ok(SweepVariable::Q),
            other => Err(format!(
                "unknown sweep variable `{other}` (expected delta_p, omega_b, theta_p or q)"
            )),
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One sweep axis with `count` evenly spaced values from `start` to `stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(variable: SweepVariable, start: f64, stop: f64, count: usize) -> Self {
        Self {
            variable,
            start,
            stop,
            count,
        }
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            return self.stop;
        }
        self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.value(i))
    }
}

/// Outer axis plus an optional inner axis (inner varies fastest).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub outer: Axis,
    pub inner: Option<Axis>,
}

impl Sweep {
    pub fn single(axis: Axis) -> Self {
        Self {
            outer: axis,
            inner: None,
        }
    }

    pub fn len(&self) -> usize {
        self.outer.count * self.inner.map_or(1, |a| a.count)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn axes(&self) -> Vec<Axis> {
        std::iter::once(self.outer).chain(self.inner).collect()
    }
}

/// Quantities that can be requested as CSV columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    Chi,
    EpsS,
    R,
    TEl,
    G,
    L,
    DeltaM,
    DeltaS,
    KSpp,
    KLr,
    KSr,
    KLrNorm,
    KSrNorm,
    LLr,
    LSr,
    /// Both film-mode group velocities.
    Vg,
    VgLr,
    VgSr,
    /// Both film-mode lifetimes.
    Tau,
    TauLr,
    TauSr,
    /// |ε_t − ε_s|, the departure from a symmetric film environment.
    Asym,
    DispResLr,
    DispResSr,
}

impl Quantity {
    pub const ALL: [Quantity; 24] = [
        Quantity::Chi,
        Quantity::EpsS,
        Quantity::R,
        Quantity::TEl,
        Quantity::G,
        Quantity::L,
        Quantity::DeltaM,
        Quantity::DeltaS,
        Quantity::KSpp,
        Quantity::KLr,
        Quantity::KSr,
        Quantity::KLrNorm,
        Quantity::KSrNorm,
        Quantity::LLr,
        Quantity::LSr,
        Quantity::Vg,
        Quantity::VgLr,
        Quantity::VgSr,
        Quantity::Tau,
        Quantity::TauLr,
        Quantity::TauSr,
        Quantity::Asym,
        Quantity::DispResLr,
        Quantity::DispResSr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Chi => "chi",
            Quantity::EpsS => "eps_s",
            Quantity::R => "R",
            Quantity::TEl => "T_el",
            Quantity::G => "G",
            Quantity::L => "L",
            Quantity::DeltaM => "delta_m",
            Quantity::DeltaS => "delta_s",
            Quantity::KSpp => "k_spp",
            Quantity::KLr => "k_lr",
            Quantity::KSr => "k_sr",
            Quantity::KLrNorm => "k_lr_norm",
            Quantity::KSrNorm => "k_sr_norm",
            Quantity::LLr => "L_lr",
            Quantity::LSr => "L_sr",
            Quantity::Vg => "vg",
            Quantity::VgLr => "vg_lr",
            Quantity::VgSr => "vg_sr",
            Quantity::Tau => "tau",
            Quantity::TauLr => "tau_lr",
            Quantity::TauSr => "tau_sr",
            Quantity::Asym => "asym",
            Quantity::DispResLr => "disp_res_lr",
            Quantity::DispResSr => "disp_res_sr",
        }
    }

    pub fn is_complex(self) -> bool {
        matches!(
            self,
            Quantity::Chi
                | Quantity::EpsS
                | Quantity::KSpp
                | Quantity::KLr
                | Quantity::KSr
                | Quantity::KLrNorm
                | Quantity::KSrNorm
                | Quantity::DispResLr
                | Quantity::DispResSr
        )
    }

    /// CSV column names contributed by this quantity.
    pub fn columns(self) -> Vec<String> {
        match self {
            Quantity::Vg => vec!["vg_lr".into(), "vg_sr".into()],
            Quantity::Tau => vec!["tau_lr".into(), "tau_sr".into()],
            q if q.is_complex() => vec![format!("{}.re", q.name()), format!("{}.im", q.name())],
            q => vec![q.name().into()],
        }
    }
}

impl FromStr for Quantity {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Quantity::ALL
            .iter()
            .copied()
            .find(|q| q.name() == s)
            .ok_or_else(|| format!("unknown output quantity `{s}`"))
    }
}

/// A validated sweep run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub qw: QwConfig,
    pub stack: OpticalStack,
    /// Probe incidence angle, degrees.
    pub theta_p: f64,
    pub sweep: Sweep,
    pub outputs: Vec<Quantity>,
    pub thin_film: ThinFilmMethod,
    pub out_path: Option<PathBuf>,
    pub plot: bool,
}

impl RunConfig {
    /// A run over the default operating point.
    pub fn with_defaults(sweep: Sweep, outputs: Vec<Quantity>) -> Self {
        let d = defaults();
        Self {
            qw: d.qw,
            stack: d.stack,
            theta_p: d.theta_p,
            sweep,
            outputs,
            thin_film: ThinFilmMethod::ExplicitSmallQ,
            out_path: None,
            plot: false,
        }
    }

    /// CSV header: sweep variables followed by output columns.
    pub fn header(&self) -> Vec<String> {
        self.sweep
            .axes()
            .iter()
            .map(|a| a.variable.name().to_string())
            .chain(self.outputs.iter().flat_map(|q| q.columns()))
            .collect()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.qw
            .validate()
            .map_err(|(k, m)| invalid(format!("qw.{k}"), m))?;
        self.stack
            .validate()
            .map_err(|(k, m)| invalid(format!("stack.{k}"), m))?;
        if !(-90.0..=90.0).contains(&self.theta_p) {
            return Err(invalid("stack.theta_p", "angle must lie in [-90, 90] degrees"));
        }
        validate_axis(&self.sweep.outer, "sweep")?;
        if let Some(inner) = &self.sweep.inner {
            validate_axis(inner, "sweep.inner")?;
            if inner.variable == self.sweep.outer.variable {
                return Err(invalid("sweep.inner.variable", "must differ from the outer sweep variable"));
            }
        }
        if self.outputs.is_empty() {
            return Err(invalid("outputs.quantities", "at least one output is required"));
        }
        let columns: Vec<String> = self.outputs.iter().flat_map(|q| q.columns()).collect();
        for (i, c) in columns.iter().enumerate() {
            if columns[..i].contains(c) {
                return Err(invalid("outputs.quantities", format!("column `{c}` requested twice")));
            }
        }
        Ok(())
    }
}

fn validate_axis(axis: &Axis, section: &str) -> Result<(), ConfigError> {
    if axis.count < 2 {
        return Err(invalid(format!("{section}.count"), format!("must be >= 2, got {}", axis.count)));
    }
    if !axis.start.is_finite() {
        return Err(invalid(format!("{section}.start"), "must be finite"));
    }
    if !axis.stop.is_finite() {
        return Err(invalid(format!("{section}.stop"), "must be finite"));
    }
    if axis.start == axis.stop {
        return Err(invalid(format!("{section}.stop"), "start and stop must differ"));
    }
    if axis.variable == SweepVariable::ThetaP
        && (axis.start.abs() > 90.0 || axis.stop.abs() > 90.0)
    {
        return Err(invalid(format!("{section}.start"), "angles must lie in [-90, 90] degrees"));
    }
    if axis.variable == SweepVariable::Q && axis.start.min(axis.stop) < 0.0 {
        return Err(invalid(format!("{section}.start"), "film thickness must be >= 0"));
    }
    Ok(())
}

fn float_value(v: &Value, key: &str) -> Result<f64, ConfigError> {
    match v {
        Value::Float(x) => Ok(*x),
        Value::Integer(i) => Ok(*i as f64),
        other => Err(invalid(key, format!("expected a number, got {}", other.type_str()))),
    }
}

fn complex_value(v: &Value, key: &str) -> Result<Complex64, ConfigError> {
    match v {
        Value::Array(parts) if parts.len() == 2 => Ok(Complex64::new(
            float_value(&parts[0], key)?,
            float_value(&parts[1], key)?,
        )),
        Value::String(s) => s
            .replace(' ', "")
            .parse::<Complex64>()
            .map_err(|_| invalid(key, format!("cannot read `{s}` as a complex number"))),
        Value::Float(_) | Value::Integer(_) => Ok(Complex64::new(float_value(v, key)?, 0.0)),
        other => Err(invalid(
            key,
            format!("expected [re, im], a number or \"a+bi\", got {}", other.type_str()),
        )),
    }
}

fn check_keys(table: &Table, prefix: &str, allowed: &[&str]) -> Result<(), ConfigError> {
    for key in table.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey {
                key: format!("{prefix}{key}"),
            });
        }
    }
    Ok(())
}

fn section<'a>(root: &'a Table, name: &str) -> Result<Option<&'a Table>, ConfigError> {
    match root.get(name) {
        None => Ok(None),
        Some(Value::Table(t)) => Ok(Some(t)),
        Some(_) => Err(invalid(name, "expected a section")),
    }
}

fn overlay(slot: &mut f64, table: Option<&Table>, section: &str, key: &str) -> Result<(), ConfigError> {
    if let Some(v) = table.and_then(|t| t.get(key)) {
        *slot = float_value(v, &format!("{section}.{key}"))?;
    }
    Ok(())
}

fn parse_axis(t: &Table, section: &str) -> Result<Axis, ConfigError> {
    let get = |k: &str| {
        t.get(k)
            .ok_or_else(|| invalid(format!("{section}.{k}"), "missing required key"))
    };
    let variable = match get("variable")? {
        Value::String(s) => s
            .parse::<SweepVariable>()
            .map_err(|m| invalid(format!("{section}.variable"), m))?,
        _ => return Err(invalid(format!("{section}.variable"), "expected a string")),
    };
    let count = match get("count")? {
        Value::Integer(n) if *n >= 0 => *n as usize,
        _ => return Err(invalid(format!("{section}.count"), "expected a non-negative integer")),
    };
    Ok(Axis {
        variable,
        start: float_value(get("start")?, &format!("{section}.start"))?,
        stop: float_value(get("stop")?, &format!("{section}.stop"))?,
        count,
    })
}

/// Parses and validates a run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let root: Table = text.parse().map_err(|e: toml::de::Error| {
        let line = e
            .span()
            .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
            .unwrap_or(1);
        ConfigError::Parse {
            line,
            message: e.message().to_string(),
        }
    })?;
    check_keys(&root, "", &["qw", "stack", "sweep", "outputs"])?;

    let qw_t = section(&root, "qw")?;
    let stack_t = section(&root, "stack")?;
    let sweep_t = section(&root, "sweep")?;
    let out_t = section(&root, "outputs")?;
    if let Some(t) = qw_t {
        check_keys(t, "qw.", QW_KEYS)?;
    }
    if let Some(t) = stack_t {
        check_keys(t, "stack.", STACK_KEYS)?;
    }
    if let Some(t) = sweep_t {
        let mut allowed = AXIS_KEYS.to_vec();
        allowed.push("inner");
        check_keys(t, "sweep.", &allowed)?;
        if let Some(inner) = section(t, "inner")? {
            check_keys(inner, "sweep.inner.", AXIS_KEYS)?;
        }
    }
    if let Some(t) = out_t {
        check_keys(t, "outputs.", OUTPUT_KEYS)?;
    }

    let d = defaults();
    let mut qw = d.qw;
    for (slot, key) in [
        (&mut qw.omega_p, "omega_p"),
        (&mut qw.omega_c, "omega_c"),
        (&mut qw.omega_b, "omega_b"),
        (&mut qw.omega_s, "omega_s"),
        (&mut qw.delta_p, "delta_p"),
        (&mut qw.delta_c, "delta_c"),
        (&mut qw.delta_b, "delta_b"),
        (&mut qw.gamma_2, "gamma_2"),
        (&mut qw.gamma_3l, "gamma_3l"),
        (&mut qw.gamma_4l, "gamma_4l"),
        (&mut qw.gamma_3d, "gamma_3d"),
        (&mut qw.gamma_4d, "gamma_4d"),
        (&mut qw.alpha, "alpha"),
    ] {
        overlay(slot, qw_t, "qw", key)?;
    }

    let mut stack = d.stack;
    let mut theta_p = d.theta_p;
    overlay(&mut stack.q, stack_t, "stack", "q")?;
    overlay(&mut stack.lambda0, stack_t, "stack", "lambda0")?;
    overlay(&mut stack.n_t, stack_t, "stack", "n_t")?;
    overlay(&mut theta_p, stack_t, "stack", "theta_p")?;
    if let Some(t) = stack_t {
        if let Some(v) = t.get("eps_t") {
            stack.eps_t = complex_value(v, "stack.eps_t")?;
        }
        if let Some(v) = t.get("eps_m") {
            stack.eps_m = complex_value(v, "stack.eps_m")?;
        }
    }

    let sweep_t = sweep_t.ok_or_else(|| invalid("sweep", "a [sweep] section is required"))?;
    let sweep = Sweep {
        outer: parse_axis(sweep_t, "sweep")?,
        inner: section(sweep_t, "inner")?
            .map(|t| parse_axis(t, "sweep.inner"))
            .transpose()?,
    };

    let out_t = out_t.ok_or_else(|| invalid("outputs", "an [outputs] section is required"))?;
    let outputs = match out_t.get("quantities") {
        Some(Value::Array(items)) => items
            .iter()
            .map(|v| match v {
                Value::String(s) => s
                    .parse::<Quantity>()
                    .map_err(|m| invalid("outputs.quantities", m)),
                _ => Err(invalid("outputs.quantities", "expected strings")),
            })
            .collect::<Result<Vec<_>, _>>()?,
        Some(_) => return Err(invalid("outputs.quantities", "expected an array of names")),
        None => return Err(invalid("outputs.quantities", "missing required key")),
    };
    let thin_film = match out_t.get("thin_film") {
        None => ThinFilmMethod::ExplicitSmallQ,
        Some(Value::String(s)) if s == "explicit" => ThinFilmMethod::ExplicitSmallQ,
        Some(Value::String(s)) if s == "implicit" => ThinFilmMethod::ImplicitRoot,
        Some(_) => return Err(invalid("outputs.thin_film", "expected \"explicit\" or \"implicit\"")),
    };
    let out_path = match out_t.get("path") {
        None => None,
        Some(Value::String(s)) => Some(PathBuf::from(s)),
        Some(_) => return Err(invalid("outputs.path", "expected a string")),
    };
    let plot = match out_t.get("plot") {
        None => false,
        Some(Value::Boolean(b)) => *b,
        Some(_) => return Err(invalid("outputs.plot", "expected true or false")),
    };

    let cfg = RunConfig {
        qw,
        stack,
        theta_p,
        sweep,
        outputs,
        thin_film,
        out_path,
        plot,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn complex_to_value(z: Complex64) -> Value {
    Value::Array(vec![Value::Float(z.re), Value::Float(z.im)])
}

fn axis_table(axis: &Axis) -> Table {
    let mut t = Table::new();
    t.insert("variable".into(), Value::String(axis.variable.name().into()));
    t.insert("start".into(), Value::Float(axis.start));
    t.insert("stop".into(), Value::Float(axis.stop));
    t.insert("count".into(), Value::Integer(axis.count as i64));
    t
}

/// Writes every key explicitly, so the text reparses to an identical config.
pub fn to_config_text(cfg: &RunConfig) -> String {
    let mut qw = Table::new();
    let q = &cfg.qw;
    for (key, v) in [
        ("omega_p", q.omega_p),
        ("omega_c", q.omega_c),
        ("omega_b", q.omega_b),
        ("omega_s", q.omega_s),
        ("delta_p", q.delta_p),
        ("delta_c", q.delta_c),
        ("delta_b", q.delta_b),
        ("gamma_2", q.gamma_2),
        ("gamma_3l", q.gamma_3l),
        ("gamma_4l", q.gamma_4l),
        ("gamma_3d", q.gamma_3d),
        ("gamma_4d", q.gamma_4d),
        ("alpha", q.alpha),
    ] {
        qw.insert(key.into(), Value::Float(v));
    }

    let mut stack = Table::new();
    stack.insert("eps_t".into(), complex_to_value(cfg.stack.eps_t));
    stack.insert("eps_m".into(), complex_to_value(cfg.stack.eps_m));
    stack.insert("q".into(), Value::Float(cfg.stack.q));
    stack.insert("lambda0".into(), Value::Float(cfg.stack.lambda0));
    stack.insert("n_t".into(), Value::Float(cfg.stack.n_t));
    stack.insert("theta_p".into(), Value::Float(cfg.theta_p));

    let mut sweep = axis_table(&cfg.sweep.outer);
    if let Some(inner) = &cfg.sweep.inner {
        sweep.insert("inner".into(), Value::Table(axis_table(inner)));
    }

    let mut outputs = Table::new();
    outputs.insert(
        "quantities".into(),
        Value::Array(cfg.outputs.iter().map(|q| Value::String(q.name().into())).collect()),
    );
    outputs.insert(
        "thin_film".into(),
        Value::String(
            match cfg.thin_film {
                ThinFilmMethod::ExplicitSmallQ => "explicit",
                ThinFilmMethod::ImplicitRoot => "implicit",
            }
            .into(),
        ),
    );
    if let Some(p) = &cfg.out_path {
        outputs.insert("path".into(), Value::String(p.to_string_lossy().into_owned()));
    }
    outputs.insert("plot".into(), Value::Boolean(cfg.plot));

    let mut root = Table::new();
    root.insert("qw".into(), Value::Table(qw));
    root.insert("stack".into(), Value::Table(stack));
    root.insert("sweep".into(), Value::Table(sweep));
    root.insert("outputs".into(), Value::Table(outputs));
    toml::to_string(&root).expect("config table serializes")
}
