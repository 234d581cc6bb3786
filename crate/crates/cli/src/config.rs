//! `key = value` run configuration with `#` comments.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rotwave::revivals::{Fraction, TimePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Density,
    Evolve,
    Carpet,
    Autocorr,
    Decompose,
    Clones,
    TopEvolve,
    CompareBoson,
    Report,
}

impl Task {
    pub const ALL: [Task; 9] = [
        Task::Density,
        Task::Evolve,
        Task::Carpet,
        Task::Autocorr,
        Task::Decompose,
        Task::Clones,
        Task::TopEvolve,
        Task::CompareBoson,
        Task::Report,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Task::Density => "density",
            Task::Evolve => "evolve",
            Task::Carpet => "carpet",
            Task::Autocorr => "autocorr",
            Task::Decompose => "decompose",
            Task::Clones => "clones",
            Task::TopEvolve => "top-evolve",
            Task::CompareBoson => "compare-boson",
            Task::Report => "report",
        }
    }

    /// Tasks that work on a sphere state.
    fn needs_sphere_state(&self) -> bool {
        !matches!(
            self,
            Task::Decompose | Task::TopEvolve | Task::CompareBoson | Task::Report
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Exponential,
    Intelligent,
    General,
    UniformLinear,
    Boson,
    Janssen,
    Seed,
}

impl Family {
    const ALL: [Family; 7] = [
        Family::Exponential,
        Family::Intelligent,
        Family::General,
        Family::UniformLinear,
        Family::Boson,
        Family::Janssen,
        Family::Seed,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Exponential => "exponential",
            Family::Intelligent => "intelligent",
            Family::General => "general",
            Family::UniformLinear => "uniform-linear",
            Family::Boson => "boson",
            Family::Janssen => "janssen",
            Family::Seed => "seed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameTag {
    Lab,
    X,
    Y,
}

impl FrameTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            FrameTag::Lab => "lab",
            FrameTag::X => "x",
            FrameTag::Y => "y",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumTag {
    Quantum,
    Classical,
}

/// Unit of the top-rotor time list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopUnit {
    RevIK,
    RevI,
    RevK,
}

impl TopUnit {
    pub fn as_str(&self) -> &'static str {
        match self {
            TopUnit::RevIK => "rev_ik",
            TopUnit::RevI => "rev_i",
            TopUnit::RevK => "rev_k",
        }
    }
}

/// `δ`, either a float or an exact `r/p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Delta {
    Real(f64),
    Rational(Fraction),
}

impl Delta {
    pub fn value(&self) -> f64 {
        match self {
            Delta::Real(x) => *x,
            Delta::Rational(f) => f.to_f64(),
        }
    }
}

/// Explicit times or a uniform grid on `[t_min, t_max]`, endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub enum Times {
    List(Vec<TimePoint>),
    Uniform {
        t_min: f64,
        t_max: f64,
        count: usize,
    },
}

impl Times {
    pub fn points(&self) -> Vec<TimePoint> {
        match self {
            Times::List(v) => v.clone(),
            Times::Uniform {
                t_min,
                t_max,
                count,
            } => {
                if *count == 1 {
                    return vec![TimePoint::Float(*t_min)];
                }
                (0..*count)
                    .map(|k| {
                        TimePoint::Float(t_min + (t_max - t_min) * k as f64 / (*count - 1) as f64)
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub task: Task,
    pub family: Family,
    pub n: Option<f64>,
    pub eta: Option<f64>,
    pub epsilon: Option<f64>,
    pub eta_n: Option<f64>,
    pub l: Option<usize>,
    pub weights: Option<Vec<f64>>,
    pub k2: Option<f64>,
    pub two_s: u32,
    pub truncated: bool,
    pub r: Option<f64>,
    pub lambda: Option<f64>,
    pub omega0: f64,
    pub delta: Option<Delta>,
    pub spectrum: SpectrumTag,
    pub rate: f64,
    pub frame: FrameTag,
    pub n_theta: usize,
    pub n_phi: usize,
    pub theta: f64,
    pub weighted: bool,
    pub beta: f64,
    pub n_alpha: usize,
    pub n_gamma: usize,
    pub times: Times,
    pub time: Option<TimePoint>,
    pub top_unit: Option<TopUnit>,
    pub max_denom: u64,
    pub tail_tol: f64,
    pub out_dir: Option<PathBuf>,
}

impl RunConfig {
    /// Defaults for a task; state parameters are left unset.
    pub fn new(task: Task, family: Family) -> Self {
        let times = match task {
            Task::Evolve | Task::TopEvolve => Times::List(vec![TimePoint::Float(0.0)]),
            Task::Carpet => Times::Uniform {
                t_min: 0.0,
                t_max: 0.5,
                count: 2048,
            },
            _ => Times::Uniform {
                t_min: 0.0,
                t_max: 0.5,
                count: 4096,
            },
        };
        RunConfig {
            task,
            family,
            n: None,
            eta: None,
            epsilon: None,
            eta_n: None,
            l: None,
            weights: None,
            k2: None,
            two_s: 1,
            truncated: true,
            r: None,
            lambda: None,
            omega0: 1.0,
            delta: None,
            spectrum: SpectrumTag::Quantum,
            rate: 1.0,
            frame: FrameTag::Lab,
            n_theta: 181,
            n_phi: if task == Task::Carpet { 720 } else { 361 },
            theta: PI / 2.0,
            weighted: true,
            beta: PI / 2.0,
            n_alpha: 181,
            n_gamma: 181,
            times,
            time: None,
            top_unit: None,
            max_denom: 64,
            tail_tol: rotwave::states::DEFAULT_TAIL_TOL,
            out_dir: None,
        }
    }

    pub fn with(mut self, key: &str, value: &str) -> Self {
        let mut errors = Vec::new();
        apply(&mut self, key, value, &mut errors);
        assert!(errors.is_empty(), "recipe key {key}={value}: {errors:?}");
        self
    }

    /// Unit of the top-rotor times: `rev_ik` when `δ` is rational, else `rev_i`.
    pub fn top_unit(&self) -> TopUnit {
        self.top_unit.unwrap_or(match self.delta {
            Some(Delta::Rational(_)) => TopUnit::RevIK,
            _ => TopUnit::RevI,
        })
    }

    /// Every key with its canonical value, in key order.
    pub fn to_pairs(&self) -> BTreeMap<&'static str, String> {
        let mut m = BTreeMap::new();
        let real = |x: f64| format!("{x}");
        m.insert("task", self.task.as_str().to_string());
        m.insert("family", self.family.as_str().to_string());
        let opt = |m: &mut BTreeMap<&'static str, String>, k: &'static str, v: Option<f64>| {
            if let Some(v) = v {
                m.insert(k, real(v));
            }
        };
        opt(&mut m, "N", self.n);
        opt(&mut m, "eta", self.eta);
        opt(&mut m, "epsilon", self.epsilon);
        opt(&mut m, "eta_n", self.eta_n);
        opt(&mut m, "k2", self.k2);
        opt(&mut m, "r", self.r);
        opt(&mut m, "lambda", self.lambda);
        if let Some(l) = self.l {
            m.insert("l", l.to_string());
        }
        if let Some(w) = &self.weights {
            m.insert(
                "weights",
                w.iter().map(|x| real(*x)).collect::<Vec<_>>().join(","),
            );
        }
        m.insert(
            "s",
            if self.two_s % 2 == 0 {
                (self.two_s / 2).to_string()
            } else {
                format!("{}/2", self.two_s)
            },
        );
        m.insert("truncated", self.truncated.to_string());
        m.insert("omega0", real(self.omega0));
        if let Some(d) = self.delta {
            m.insert(
                "delta",
                match d {
                    Delta::Real(x) => real(x),
                    Delta::Rational(f) => f.to_string(),
                },
            );
        }
        m.insert(
            "spectrum",
            match self.spectrum {
                SpectrumTag::Quantum => "quantum",
                SpectrumTag::Classical => "classical",
            }
            .to_string(),
        );
        m.insert("rate", real(self.rate));
        m.insert("frame", self.frame.as_str().to_string());
        m.insert("n_theta", self.n_theta.to_string());
        m.insert("n_phi", self.n_phi.to_string());
        m.insert("theta", real(self.theta));
        m.insert("weighted", self.weighted.to_string());
        m.insert("beta", real(self.beta));
        m.insert("n_alpha", self.n_alpha.to_string());
        m.insert("n_gamma", self.n_gamma.to_string());
        match &self.times {
            Times::List(v) => {
                m.insert(
                    "times",
                    v.iter()
                        .map(|t| t.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                );
            }
            Times::Uniform {
                t_min,
                t_max,
                count,
            } => {
                m.insert("t_min", real(*t_min));
                m.insert("t_max", real(*t_max));
                m.insert("n_times", count.to_string());
            }
        }
        if let Some(t) = self.time {
            m.insert("time", t.to_string());
        }
        if let Some(u) = self.top_unit {
            m.insert("time_unit", u.as_str().to_string());
        }
        m.insert("max_denom", self.max_denom.to_string());
        m.insert("tail_tol", real(self.tail_tol));
        if let Some(d) = &self.out_dir {
            m.insert("out_dir", d.display().to_string());
        }
        m
    }

    /// Canonical config text; parses back to the same config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.to_pairs() {
            s.push_str(&format!("{k} = {v}\n"));
        }
        s
    }
}

/// Config keys.
pub const KEYS: &[&str] = &[
    "task",
    "family",
    "N",
    "eta",
    "epsilon",
    "eta_n",
    "l",
    "weights",
    "k2",
    "s",
    "truncated",
    "r",
    "lambda",
    "omega0",
    "delta",
    "spectrum",
    "rate",
    "frame",
    "n_theta",
    "n_phi",
    "theta",
    "weighted",
    "beta",
    "n_alpha",
    "n_gamma",
    "times",
    "t_min",
    "t_max",
    "n_times",
    "time",
    "time_unit",
    "max_denom",
    "tail_tol",
    "out_dir",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigErrors(pub Vec<String>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.join("; "))
    }
}

impl std::error::Error for ConfigErrors {}

/// Splits config text into ordered `(line, key, value)` entries.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>, ConfigErrors> {
    let mut out = Vec::new();
    let mut errors = Vec::new();
    let mut seen = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match line.split_once('=') {
            Some((k, v)) => {
                let k = k.trim().to_string();
                if let Some(prev) = seen.insert(k.clone(), i + 1) {
                    errors.push(format!(
                        "line {}: duplicate key '{k}' (first on line {prev})",
                        i + 1
                    ));
                }
                out.push((k, v.trim().to_string()));
            }
            None => errors.push(format!(
                "line {}: expected key = value, got '{line}'",
                i + 1
            )),
        }
    }
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(ConfigErrors(errors))
    }
}

/// Parses and validates a config, with `overrides` applied on top of the file.
pub fn parse_config(text: &str, overrides: &[(String, String)]) -> Result<RunConfig, ConfigErrors> {
    let mut pairs = parse_pairs(text)?;
    for (k, v) in overrides {
        pairs.retain(|(key, _)| key != k);
        pairs.push((k.clone(), v.clone()));
    }
    build(&pairs)
}

fn build(pairs: &[(String, String)]) -> Result<RunConfig, ConfigErrors> {
    let mut errors = Vec::new();
    let lookup = |k: &str| {
        pairs
            .iter()
            .find(|(key, _)| key == k)
            .map(|(_, v)| unquote(v))
    };
    let task = match lookup("task") {
        Some(v) => match Task::ALL.iter().find(|t| t.as_str() == v) {
            Some(t) => Some(*t),
            None => {
                errors.push(format!("task: unknown task '{v}'"));
                None
            }
        },
        None => {
            errors.push("task: missing".to_string());
            None
        }
    };
    let family = match lookup("family") {
        Some(v) => match Family::ALL.iter().find(|f| f.as_str() == v) {
            Some(f) => Some(*f),
            None => {
                errors.push(format!("family: unknown family '{v}'"));
                None
            }
        },
        None => None,
    };
    let mut cfg = RunConfig::new(
        task.unwrap_or(Task::Report),
        family.unwrap_or(Family::Exponential),
    );
    for (k, v) in pairs {
        if k == "task" || k == "family" {
            continue;
        }
        if !KEYS.contains(&k.as_str()) {
            errors.push(format!("{k}: unknown key"));
            continue;
        }
        apply(&mut cfg, k, unquote(v), &mut errors);
    }
    let has_uniform = ["t_min", "t_max", "n_times"]
        .iter()
        .any(|k| lookup(k).is_some());
    if has_uniform && lookup("times").is_some() {
        errors.push("times: give either a list or t_min/t_max/n_times, not both".into());
    }
    if task.is_some() {
        validate(&cfg, family.is_some(), &mut errors);
    }
    if errors.is_empty() {
        Ok(cfg)
    } else {
        Err(ConfigErrors(errors))
    }
}

fn unquote(v: &str) -> &str {
    let v = v.trim();
    v.strip_prefix('"')
        .and_then(|s| s.strip_suffix('"'))
        .unwrap_or(v)
}

/// A real number: a float, `a/b`, or a multiple of `pi` such as `pi/2`, `2pi/3`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let bad = || format!("malformed number '{s}'");
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (s, None),
    };
    let num = if let Some(k) = num.strip_suffix("pi") {
        let k = k.trim().trim_end_matches('*').trim();
        let k = match k {
            "" => 1.0,
            "-" => -1.0,
            _ => k.parse::<f64>().map_err(|_| bad())?,
        };
        k * PI
    } else {
        num.parse::<f64>().map_err(|_| bad())?
    };
    let v = match den {
        Some(d) => num / d.parse::<f64>().map_err(|_| bad())?,
        None => num,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// `m/n` as an exact fraction, anything else as a float.
pub fn parse_time(s: &str) -> Result<TimePoint, String> {
    let s = s.trim();
    if s.contains('/') && !s.contains("pi") {
        return Fraction::from_str(s)
            .map(TimePoint::Exact)
            .map_err(|_| format!("malformed rational '{s}'"));
    }
    let x = parse_real(s)?;
    if x < 0.0 {
        return Err(format!("times must be nonnegative, got {s}"));
    }
    Ok(TimePoint::Float(x))
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected true or false, got '{s}'")),
    }
}

fn apply(cfg: &mut RunConfig, key: &str, v: &str, errors: &mut Vec<String>) {
    let mut err = |e: String| errors.push(format!("{key}: {e}"));
    let real = |s: &str| parse_real(s);
    let count = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| format!("expected a nonnegative integer, got '{s}'"))
    };
    macro_rules! set {
        ($field:expr, $parsed:expr) => {
            match $parsed {
                Ok(x) => $field = x,
                Err(e) => err(e),
            }
        };
    }
    match key {
        "task" => match Task::ALL.iter().find(|t| t.as_str() == v) {
            Some(t) => cfg.task = *t,
            None => err(format!("unknown task '{v}'")),
        },
        "family" => match Family::ALL.iter().find(|f| f.as_str() == v) {
            Some(f) => cfg.family = *f,
            None => err(format!("unknown family '{v}'")),
        },
        "N" => set!(cfg.n, real(v).map(Some)),
        "eta" => set!(cfg.eta, real(v).map(Some)),
        "epsilon" => set!(cfg.epsilon, real(v).map(Some)),
        "eta_n" => set!(cfg.eta_n, real(v).map(Some)),
        "k2" => set!(cfg.k2, real(v).map(Some)),
        "r" => set!(cfg.r, real(v).map(Some)),
        "lambda" => set!(cfg.lambda, real(v).map(Some)),
        "l" => set!(cfg.l, count(v).map(Some)),
        "weights" => set!(
            cfg.weights,
            v.split(',')
                .map(real)
                .collect::<Result<Vec<_>, _>>()
                .map(Some)
        ),
        "s" => set!(
            cfg.two_s,
            match v.split_once('/') {
                Some((a, "2")) => a
                    .trim()
                    .parse::<u32>()
                    .map_err(|_| format!("malformed spin '{v}'")),
                Some(_) => Err(format!("spin must be integer or half-integer, got '{v}'")),
                None => v
                    .parse::<u32>()
                    .map(|x| 2 * x)
                    .map_err(|_| format!("malformed spin '{v}'")),
            }
        ),
        "truncated" => set!(cfg.truncated, parse_bool(v)),
        "omega0" => set!(cfg.omega0, real(v)),
        "delta" => set!(
            cfg.delta,
            if v.contains('/') && !v.contains("pi") {
                Fraction::from_str(v)
                    .map(|f| Some(Delta::Rational(f)))
                    .map_err(|_| format!("malformed rational '{v}'"))
            } else {
                real(v).map(|x| Some(Delta::Real(x)))
            }
        ),
        "spectrum" => set!(
            cfg.spectrum,
            match v {
                "quantum" => Ok(SpectrumTag::Quantum),
                "classical" => Ok(SpectrumTag::Classical),
                _ => Err(format!("expected quantum or classical, got '{v}'")),
            }
        ),
        "rate" => set!(cfg.rate, real(v)),
        "frame" => set!(
            cfg.frame,
            match v {
                "lab" => Ok(FrameTag::Lab),
                "x" => Ok(FrameTag::X),
                "y" => Ok(FrameTag::Y),
                _ => Err(format!("expected lab, x or y, got '{v}'")),
            }
        ),
        "n_theta" => set!(cfg.n_theta, count(v)),
        "n_phi" => set!(cfg.n_phi, count(v)),
        "theta" => set!(cfg.theta, real(v)),
        "weighted" => set!(cfg.weighted, parse_bool(v)),
        "beta" => set!(cfg.beta, real(v)),
        "n_alpha" => set!(cfg.n_alpha, count(v)),
        "n_gamma" => set!(cfg.n_gamma, count(v)),
        "times" => set!(
            cfg.times,
            v.split(',')
                .map(parse_time)
                .collect::<Result<Vec<_>, _>>()
                .map(Times::List)
        ),
        "t_min" | "t_max" | "n_times" => {
            let (mut t_min, mut t_max, mut n) = match cfg.times {
                Times::Uniform {
                    t_min,
                    t_max,
                    count,
                } => (t_min, t_max, count),
                Times::List(_) => (0.0, 0.5, 4096),
            };
            match key {
                "t_min" => set!(t_min, real(v)),
                "t_max" => set!(t_max, real(v)),
                _ => set!(n, count(v)),
            }
            cfg.times = Times::Uniform {
                t_min,
                t_max,
                count: n,
            };
        }
        "time" => set!(cfg.time, parse_time(v).map(Some)),
        "time_unit" => set!(
            cfg.top_unit,
            match v {
                "rev_ik" => Ok(Some(TopUnit::RevIK)),
                "rev_i" => Ok(Some(TopUnit::RevI)),
                "rev_k" => Ok(Some(TopUnit::RevK)),
                _ => Err(format!("expected rev_ik, rev_i or rev_k, got '{v}'")),
            }
        ),
        "max_denom" => set!(
            cfg.max_denom,
            v.parse::<u64>()
                .map_err(|_| format!("expected a positive integer, got '{v}'"))
        ),
        "tail_tol" => set!(cfg.tail_tol, real(v)),
        "out_dir" => cfg.out_dir = Some(PathBuf::from(v)),
        _ => err("unknown key".into()),
    }
}

fn validate(cfg: &RunConfig, family_given: bool, errors: &mut Vec<String>) {
    let family = cfg.family.as_str();
    let mut missing = Vec::new();
    let mut need = |key: &str, present: bool| {
        if !present {
            missing.push(format!("{key}: required for family={family}"));
        }
    };
    let state_task =
        cfg.task.needs_sphere_state() || matches!(cfg.task, Task::TopEvolve | Task::Report);
    if state_task && !family_given {
        errors.push(format!("family: required for task={}", cfg.task.as_str()));
    }
    if state_task && family_given {
        match cfg.family {
            Family::Exponential => {
                need("N", cfg.n.is_some());
                need("eta", cfg.eta.is_some());
            }
            Family::Seed => {
                need("N", cfg.n.is_some());
                need("eta", cfg.eta.is_some());
                need("epsilon", cfg.epsilon.is_some());
            }
            Family::Intelligent => {
                need("l", cfg.l.is_some());
                need("eta", cfg.eta.is_some());
            }
            Family::General => {
                need("weights", cfg.weights.is_some());
                need("eta", cfg.eta.is_some());
            }
            Family::UniformLinear => need("eta_n", cfg.eta_n.is_some()),
            Family::Boson => need("k2", cfg.k2.is_some()),
            Family::Janssen => {
                need("r", cfg.r.is_some());
                need("lambda", cfg.lambda.is_some());
            }
        }
    }
    errors.extend(missing);
    if cfg.task == Task::TopEvolve && family_given && cfg.family != Family::Janssen {
        errors.push("family: top-evolve needs family=janssen".into());
    }
    if cfg.task.needs_sphere_state() && cfg.family == Family::Janssen {
        errors.push(format!(
            "family: task={} needs a sphere state, not janssen",
            cfg.task.as_str()
        ));
    }
    if cfg.task == Task::TopEvolve && cfg.delta.is_none() {
        errors.push("delta: required for task=top-evolve".into());
    }
    if cfg.task == Task::CompareBoson && cfg.n.is_none() {
        errors.push("N: required for task=compare-boson".into());
    }
    if matches!(cfg.task, Task::Decompose | Task::Clones) && cfg.time.is_none() {
        errors.push(format!("time: required for task={}", cfg.task.as_str()));
    }
    let positive = |x: Option<f64>| x.is_none_or(|v| v > 0.0);
    let mut check = |ok: bool, msg: &str| {
        if !ok {
            errors.push(msg.to_string());
        }
    };
    check(positive(cfg.n), "N: must be positive");
    check(positive(cfg.k2), "k2: must be positive");
    check(positive(cfg.r), "r: must be positive");
    check(
        cfg.eta_n.is_none_or(|v| v >= 0.0),
        "eta_n: must be nonnegative",
    );
    check(cfg.omega0 > 0.0, "omega0: must be positive");
    check(cfg.rate > 0.0, "rate: must be positive");
    check(
        cfg.tail_tol > 0.0 && cfg.tail_tol < 1.0,
        "tail_tol: must lie in (0, 1)",
    );
    check(
        cfg.n_theta >= 2 && cfg.n_phi >= 2,
        "n_theta/n_phi: need at least 2 nodes",
    );
    check(
        cfg.n_alpha >= 2 && cfg.n_gamma >= 2,
        "n_alpha/n_gamma: need at least 2 nodes",
    );
    check(
        (0.0..=PI).contains(&cfg.theta),
        "theta: must lie in [0, pi]",
    );
    check((0.0..=PI).contains(&cfg.beta), "beta: must lie in [0, pi]");
    check(cfg.two_s >= 1, "s: must be positive");
    check(cfg.max_denom >= 1, "max_denom: must be positive");
    if let Some(d) = cfg.delta {
        check(
            d.value() > -1.0 && d.value() != 0.0,
            "delta: must be nonzero and above -1",
        );
    }
    match &cfg.times {
        Times::Uniform {
            t_min,
            t_max,
            count,
        } => {
            check(*count >= 1, "n_times: must be positive");
            check(
                *t_min >= 0.0 && t_max >= t_min,
                "t_min/t_max: need 0 <= t_min <= t_max",
            );
        }
        Times::List(v) => check(!v.is_empty(), "times: empty list"),
    }
    if cfg.task == Task::TopEvolve && cfg.top_unit() == TopUnit::RevIK {
        check(
            matches!(cfg.delta, Some(Delta::Rational(_)) | None),
            "time_unit: rev_ik needs a rational delta such as 1/2",
        );
    }
    if cfg
        .weights
        .as_ref()
        .is_some_and(|w| w.iter().all(|x| *x == 0.0))
    {
        errors.push("weights: need a nonzero entry".into());
    }
    if cfg.family == Family::Boson
        && cfg.two_s % 2 == 1
        && !cfg.truncated
        && state_task
        && cfg.task != Task::Report
    {
        errors.push("s: untruncated half-integer boson states have no spherical expansion".into());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_carpet_config() {
        let cfg = parse_config(
            "family=exponential\nN=20\neta=1 # circular\ntask=carpet\n",
            &[],
        )
        .unwrap();
        assert_eq!(cfg.task, Task::Carpet);
        assert_eq!(cfg.n, Some(20.0));
        assert_eq!(cfg.eta, Some(1.0));
    }

    #[test]
    fn missing_eta_is_named() {
        let e = parse_config("task=density\nfamily=exponential\nN=20\n", &[]).unwrap_err();
        assert!(e.0.iter().any(|m| m.starts_with("eta:")), "{e:?}");
    }

    #[test]
    fn exact_time() {
        let cfg = parse_config("task=decompose\ntime=\"1/3\"\n", &[]).unwrap();
        assert_eq!(
            cfg.time,
            Some(TimePoint::Exact(Fraction::new(1, 3).unwrap()))
        );
    }

    #[test]
    fn collects_all_errors() {
        let e = parse_config(
            "task=density\nfamily=exponential\nN=-1\nbogus=3\ntheta=7\n",
            &[],
        )
        .unwrap_err();
        assert!(e.0.len() >= 4, "{e:?}");
        assert!(e.0.iter().any(|m| m.starts_with("bogus: unknown key")));
        assert!(parse_config("task=density\ntask=carpet\n", &[]).is_err());
        assert!(parse_config("what\n", &[]).is_err());
    }

    #[test]
    fn malformed_rational() {
        let e = parse_config("task=decompose\ntime=1/x\n", &[]).unwrap_err();
        assert!(e.0[0].contains("malformed rational"));
    }

    #[test]
    fn overrides_win() {
        let cfg = parse_config(
            "task=density\nfamily=exponential\nN=20\neta=1\n",
            &[("eta".into(), "0.5".into())],
        )
        .unwrap();
        assert_eq!(cfg.eta, Some(0.5));
    }

    #[test]
    fn reals_and_round_trip() {
        assert!((parse_real("pi/2").unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((parse_real("2pi/3").unwrap() - 2.0 * PI / 3.0).abs() < 1e-15);
        assert_eq!(parse_real("1/4").unwrap(), 0.25);
        assert!(parse_real("abc").is_err());
        let cfg = parse_config(
            "task=top-evolve\nfamily=janssen\nr=4\nlambda=pi/2\ndelta=1/2\ntimes=0,1/6,1/3\n",
            &[],
        )
        .unwrap();
        assert_eq!(
            cfg.delta,
            Some(Delta::Rational(Fraction::new(1, 2).unwrap()))
        );
        let back = parse_config(&cfg.to_text(), &[]).unwrap();
        assert_eq!(back, cfg);
    }
}
