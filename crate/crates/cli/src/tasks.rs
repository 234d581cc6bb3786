//! Dispatch from a validated config to the library.

use std::f64::consts::PI;

use serde_json::{json, Map, Value};

use rotwave::observables::{
    angular_momentum_report, autocorrelation, density_grid, AngularMomentumReport, Frame, GridSpec,
    Spectrum, UncertaintyCheck,
};
use rotwave::revivals::{
    axis_carpet, carpet, clone_report, empirical_clone_count, evolve_with, gauss_decompose,
    spread_estimates, time_constants, Fraction, TimePoint,
};
use rotwave::states::*;
use rotwave::toprotor::*;

use crate::config::{Delta, Family, FrameTag, RunConfig, SpectrumTag, Task, TopUnit};
use crate::output::{OutputBundle, Table};
use crate::RunError;

fn compute<E: std::fmt::Display>(e: E) -> RunError {
    RunError::Compute(e.to_string())
}

fn frame_of(tag: FrameTag) -> Frame {
    match tag {
        FrameTag::Lab => Frame::Lab,
        FrameTag::X => Frame::XAxis,
        FrameTag::Y => Frame::YAxis,
    }
}

fn spectrum_of(cfg: &RunConfig) -> Spectrum {
    match cfg.spectrum {
        SpectrumTag::Quantum => Spectrum::Quantum,
        SpectrumTag::Classical => Spectrum::Classical { rate: cfg.rate },
    }
}

fn req<T: Copy>(v: Option<T>, key: &str) -> Result<T, RunError> {
    v.ok_or_else(|| RunError::Validation(vec![format!("{key}: missing")]))
}

/// The configured sphere state, and its `η → −η` mirror where one exists.
pub fn sphere_state(cfg: &RunConfig) -> Result<SphericalExpansion, RunError> {
    build_sphere(cfg, 1.0)
}

fn build_sphere(cfg: &RunConfig, eta_sign: f64) -> Result<SphericalExpansion, RunError> {
    let tail = cfg.tail_tol;
    let eta = || req(cfg.eta, "eta").map(|e| e * eta_sign);
    let s = match cfg.family {
        Family::Exponential => {
            let spec = ExponentialSpec::new(req(cfg.n, "N")?, eta()?).map_err(compute)?;
            exponential_wp(spec, tail)
        }
        Family::Seed => {
            let spec =
                GaussianSeedSpec::new(req(cfg.n, "N")?, eta()?, req(cfg.epsilon, "epsilon")?)
                    .map_err(compute)?;
            gaussian_seed_wp(spec, tail)
        }
        Family::Intelligent => intelligent_harmonic(req(cfg.l, "l")?, eta()?),
        Family::General => general_wp(cfg.weights.as_deref().unwrap_or(&[]), eta()?),
        Family::UniformLinear => uniform_linear_wp(req(cfg.eta_n, "eta_n")?, tail),
        Family::Boson => boson_state(cfg)?.expansion(),
        Family::Janssen => {
            return Err(RunError::Validation(vec![
                "family: janssen is a symmetric-top state".into(),
            ]))
        }
    };
    s.map_err(compute)
}

fn mirror_state(cfg: &RunConfig) -> Result<Option<SphericalExpansion>, RunError> {
    match cfg.family {
        Family::Exponential | Family::Intelligent | Family::General => {
            build_sphere(cfg, -1.0).map(Some)
        }
        _ => Ok(None),
    }
}

fn boson_state(cfg: &RunConfig) -> Result<BosonState, RunError> {
    let k2 = req(cfg.k2, "k2")?;
    let spec = BosonSpec::new(k2.sqrt(), cfg.two_s, cfg.truncated).map_err(compute)?;
    boson_circular_state(spec, cfg.tail_tol).map_err(compute)
}

fn janssen_state(cfg: &RunConfig) -> Result<JanssenState, RunError> {
    let spec = TopSpec::new(req(cfg.r, "r")?, req(cfg.lambda, "lambda")?).map_err(compute)?;
    janssen_top_state(spec, cfg.tail_tol).map_err(compute)
}

fn rotor_spec(cfg: &RunConfig) -> Result<RotorSpec, RunError> {
    match req(cfg.delta, "delta")? {
        Delta::Rational(f) => RotorSpec::rational(cfg.omega0, f.denom(), f.numer()),
        Delta::Real(x) => RotorSpec::new(cfg.omega0, x),
    }
    .map_err(compute)
}

/// Exact time for a decomposition; floats are reduced by continued fractions.
fn exact_time(cfg: &RunConfig) -> Result<Fraction, RunError> {
    match req(cfg.time, "time")? {
        TimePoint::Exact(f) => Ok(f),
        TimePoint::Float(x) => Fraction::approximate(x, cfg.max_denom).map_err(compute),
    }
}

fn report_json(r: &AngularMomentumReport) -> Value {
    json!({
        "mean_lx": r.mean_lx,
        "mean_ly": r.mean_ly,
        "mean_lz": r.mean_lz,
        "mean_lx2": r.mean_lx2,
        "mean_ly2": r.mean_ly2,
        "mean_lz2": r.mean_lz2,
        "mean_l2": r.mean_l2,
        "var_lx": r.var_lx,
        "var_ly": r.var_ly,
        "uncertainty_product": r.uncertainty_product,
        "lz_bound": r.lz_bound,
        "delta_l_eta_sq": r.delta_l_eta_sq,
    })
}

fn report_rows(table: &mut Table, prefix: &str, r: &AngularMomentumReport) {
    let items = [
        ("mean_lx", r.mean_lx),
        ("mean_ly", r.mean_ly),
        ("mean_lz", r.mean_lz),
        ("mean_lx2", r.mean_lx2),
        ("mean_ly2", r.mean_ly2),
        ("mean_lz2", r.mean_lz2),
        ("mean_l2", r.mean_l2),
        ("var_lx", r.var_lx),
        ("var_ly", r.var_ly),
        ("uncertainty_product", r.uncertainty_product),
        ("lz_bound", r.lz_bound),
        ("delta_l_eta_sq", r.delta_l_eta_sq),
    ];
    for (k, v) in items {
        table.push(vec![format!("{prefix}{k}").into(), v.into()]);
    }
}

fn sphere_derived(cfg: &RunConfig, s: &SphericalExpansion) -> Result<Map<String, Value>, RunError> {
    let c = time_constants(s, cfg.omega0).map_err(compute)?;
    let mut m = Map::new();
    m.insert("l_max".into(), json!(s.l_max()));
    m.insert("t_rev".into(), json!(c.t_rev));
    m.insert("t_cl".into(), json!(c.t_cl));
    m.insert("i_bar".into(), json!(c.i_bar));
    Ok(m)
}

fn density_header(frame: Frame) -> (String, String) {
    let (a, b) = frame.axis_names();
    (format!("{a}_rad"), format!("{b}_rad"))
}

fn push_density_rows(
    table: &mut Table,
    t: Option<f64>,
    g: &rotwave::observables::GridDensity,
    weighted: bool,
) {
    let w = weighted.then(|| g.weighted_values());
    let n_phi = g.phi_nodes.len();
    for (i, th) in g.theta_nodes.iter().enumerate() {
        for (j, ph) in g.phi_nodes.iter().enumerate() {
            let mut row = Vec::with_capacity(5);
            if let Some(t) = t {
                row.push(t.into());
            }
            row.push((*th).into());
            row.push((*ph).into());
            row.push(g.get(i, j).into());
            if let Some(w) = &w {
                row.push(w[i * n_phi + j].into());
            }
            table.push(row);
        }
    }
}

fn density_table(name: &str, frame: Frame, with_time: bool, weighted: bool) -> Table {
    let (a, b) = density_header(frame);
    let mut cols: Vec<&str> = Vec::new();
    if with_time {
        cols.push("t_over_t_rev");
    }
    cols.push(&a);
    cols.push(&b);
    cols.push("density_per_sr");
    if weighted {
        cols.push("density_2pi_sin_per_rad");
    }
    Table::new(name, &cols)
}

/// Runs a validated config. Metadata carries no timestamp; the caller adds it.
pub fn execute(cfg: &RunConfig) -> Result<OutputBundle, RunError> {
    let mut derived = Map::new();
    let mut tables = Vec::new();
    let grid = GridSpec::new(cfg.n_theta, cfg.n_phi).map_err(compute)?;
    let frame = frame_of(cfg.frame);
    let weighted = cfg.weighted && cfg.frame != FrameTag::Lab;
    match cfg.task {
        Task::Density => {
            let s = sphere_state(cfg)?;
            derived = sphere_derived(cfg, &s)?;
            let g = density_grid(&s, grid, frame).map_err(compute)?;
            derived.insert("integral".into(), json!(g.integral()));
            let mut t = density_table("density", frame, false, weighted);
            push_density_rows(&mut t, None, &g, weighted);
            tables.push(t);
        }
        Task::Evolve => {
            let s = sphere_state(cfg)?;
            derived = sphere_derived(cfg, &s)?;
            let mut t = density_table("evolve", frame, true, weighted);
            let mut integrals = Vec::new();
            for tp in cfg.times.points() {
                let e = evolve_with(&s, spectrum_of(cfg), tp);
                let g = density_grid(&e, grid, frame).map_err(compute)?;
                integrals.push(g.integral());
                push_density_rows(&mut t, Some(tp.to_f64()), &g, weighted);
            }
            derived.insert("integrals".into(), json!(integrals));
            tables.push(t);
        }
        Task::Carpet => {
            let s = sphere_state(cfg)?;
            derived = sphere_derived(cfg, &s)?;
            let times = cfg.times.points();
            let (c, cols) = match cfg.frame {
                FrameTag::Lab => (
                    carpet(&s, cfg.theta, &times, cfg.n_phi, spectrum_of(cfg)).map_err(compute)?,
                    ["t_over_t_rev", "phi_rad", "density_per_sr"],
                ),
                tag => {
                    let c = axis_carpet(
                        &s,
                        frame_of(tag),
                        &times,
                        cfg.n_theta,
                        spectrum_of(cfg),
                        cfg.weighted,
                    )
                    .map_err(compute)?;
                    let axis = if tag == FrameTag::X {
                        "theta_prime_rad"
                    } else {
                        "theta_double_prime_rad"
                    };
                    let value = if cfg.weighted {
                        "density_2pi_sin_per_rad"
                    } else {
                        "density_per_sr"
                    };
                    (c, ["t_over_t_rev", axis, value])
                }
            };
            let mut t = Table::new("carpet", &cols);
            for (i, time) in c.times.iter().enumerate() {
                for (x, v) in c.axis.iter().zip(c.row(i)) {
                    t.push(vec![(*time).into(), (*x).into(), (*v).into()]);
                }
            }
            tables.push(t);
        }
        Task::Autocorr => {
            let s = sphere_state(cfg)?;
            derived = sphere_derived(cfg, &s)?;
            let times = cfg.times.points();
            let a = autocorrelation(&s, spectrum_of(cfg), &times);
            let mut t = Table::new("autocorr", &["t_over_t_rev", "autocorrelation"]);
            for (tp, v) in times.iter().zip(&a) {
                t.push(vec![tp.to_f64().into(), (*v).into()]);
            }
            tables.push(t);
        }
        Task::Decompose => {
            let f = exact_time(cfg)?;
            let d = gauss_decompose(f.numer(), f.denom()).map_err(compute)?;
            derived.insert("time".into(), json!(d.requested.to_string()));
            derived.insert("decomposed_time".into(), json!(d.time.to_string()));
            derived.insert("l".into(), json!(d.l));
            derived.insert("q".into(), json!(d.q));
            derived.insert("s0".into(), json!(d.s0));
            let mut t = Table::new(
                "decompose",
                &[
                    "s",
                    "t_s_over_t_rev",
                    "t_s_exact",
                    "re_a",
                    "im_a",
                    "abs_a",
                    "is_s0",
                ],
            );
            for s in 0..d.l {
                let ts = d.t_s(s);
                t.push(vec![
                    s.into(),
                    ts.to_f64().into(),
                    ts.to_string().into(),
                    d.a[s].re.into(),
                    d.a[s].im.into(),
                    d.a[s].norm().into(),
                    ((d.s0 == Some(s)) as i64).into(),
                ]);
            }
            tables.push(t);
        }
        Task::Clones => {
            let s = sphere_state(cfg)?;
            derived = sphere_derived(cfg, &s)?;
            let f = exact_time(cfg)?;
            let d = gauss_decompose(f.numer(), f.denom()).map_err(compute)?;
            let mirror = mirror_state(cfg)?;
            let rep = clone_report(&s, &d, mirror.as_ref());
            derived.insert("time".into(), json!(d.requested.to_string()));
            derived.insert("q".into(), json!(d.q));
            derived.insert("s0".into(), json!(d.s0));
            let mut t = Table::new(
                "clones",
                &[
                    "s",
                    "t_s_over_t_rev",
                    "t_s_exact",
                    "abs_a",
                    "fidelity",
                    "rotated_fidelity",
                    "best_angle_rad",
                    "kind",
                ],
            );
            for e in &rep.entries {
                t.push(vec![
                    e.s.into(),
                    e.t.to_f64().into(),
                    e.t.to_string().into(),
                    e.a.norm().into(),
                    e.fidelity.into(),
                    e.rotated_fidelity.into(),
                    e.best_angle.into(),
                    e.kind.as_str().into(),
                ]);
            }
            tables.push(t);
            if mirror.is_some() {
                let mut p = Table::new("pairs", &["s", "partner", "max_coefficient_error"]);
                for pc in &rep.pairs {
                    p.push(vec![pc.s.into(), pc.partner.into(), pc.max_error.into()]);
                }
                tables.push(p);
            }
        }
        Task::TopEvolve => top_evolve_task(cfg, &mut derived, &mut tables)?,
        Task::CompareBoson => {
            let n = req(cfg.n, "N")?;
            let k2 = cfg.k2.unwrap_or(2.0 * n - 1.0);
            let e = exponential_wp(ExponentialSpec::new(n, 1.0).map_err(compute)?, cfg.tail_tol)
                .map_err(compute)?;
            let spec = BosonSpec::new(k2.sqrt(), cfg.two_s, cfg.truncated).map_err(compute)?;
            let b = boson_circular_state(spec, cfg.tail_tol).map_err(compute)?;
            let ew = e.l_weights();
            let bw = b.weights_by_two_j();
            let i_max = ew.len().max(bw.len().div_ceil(2));
            let mut t = Table::new(
                "compare_boson",
                &["I", "c2_exponential", "c2_boson", "difference"],
            );
            let (mut worst, mut at) = (0.0f64, 0usize);
            for i in 0..i_max {
                let a = ew.get(i).copied().unwrap_or(0.0);
                let c = bw.get(2 * i).copied().unwrap_or(0.0);
                if (a - c).abs() > worst {
                    worst = (a - c).abs();
                    at = i;
                }
                t.push(vec![i.into(), a.into(), c.into(), (a - c).into()]);
            }
            derived.insert("k2".into(), json!(k2));
            derived.insert("max_abs_difference".into(), json!(worst));
            derived.insert("argmax_i".into(), json!(at));
            derived.insert("boson_retained".into(), json!(b.retained));
            tables.push(t);
        }
        Task::Report => report_task(cfg, &mut derived, &mut tables)?,
    }
    let config: Map<String, Value> = cfg
        .to_pairs()
        .into_iter()
        .filter(|(k, _)| *k != "out_dir")
        .map(|(k, v)| (k.to_string(), Value::String(v)))
        .collect();
    let meta = json!({
        "library": "rotwave",
        "version": env!("CARGO_PKG_VERSION"),
        "task": cfg.task.as_str(),
        "config": config,
        "derived": derived,
        "files": tables.iter().map(|t| format!("{}.csv", t.name)).collect::<Vec<_>>(),
    });
    Ok(OutputBundle { tables, meta })
}

fn top_time(cfg: &RunConfig, spec: &RotorSpec, t: TimePoint) -> TopTime {
    match (cfg.top_unit(), t) {
        (TopUnit::RevIK, TimePoint::Exact(f)) => TopTime::Common(f),
        (TopUnit::RevIK, TimePoint::Float(x)) => {
            let p = spec.rational_delta.map_or(1, |(p, _)| p);
            TopTime::RevI(x * p as f64)
        }
        (TopUnit::RevI, t) => TopTime::RevI(t.to_f64()),
        (TopUnit::RevK, t) => TopTime::RevI(t.to_f64() / spec.delta),
    }
}

fn top_evolve_task(
    cfg: &RunConfig,
    derived: &mut Map<String, Value>,
    tables: &mut Vec<Table>,
) -> Result<(), RunError> {
    let j = janssen_state(cfg)?;
    let s = &j.expansion;
    let spec = rotor_spec(cfg)?;
    let c = top_time_constants(s, &spec);
    derived.insert("renormalization".into(), json!(j.renormalization));
    derived.insert("l_max".into(), json!(s.l_max()));
    derived.insert("t_rev_i".into(), json!(c.t_rev_i));
    derived.insert("t_rev_k".into(), json!(c.t_rev_k));
    derived.insert("t_cl_i".into(), json!(c.t_cl_i));
    derived.insert(
        "t_cl_k".into(),
        json!(if c.t_cl_k.is_finite() {
            json!(c.t_cl_k)
        } else {
            json!("inf")
        }),
    );
    derived.insert("t_rev_ik".into(), json!(c.t_rev_ik));
    derived.insert("i_bar".into(), json!(c.i_bar));
    derived.insert("k_bar".into(), json!(c.k_bar));
    let unit = cfg.top_unit();
    let t_col = format!("t_over_t_{}", unit.as_str());
    let mut dens = Table::new(
        "top_evolve",
        &[&t_col, "alpha_rad", "gamma_rad", "density_per_rad2"],
    );
    let mut auto = Table::new(
        "top_autocorr",
        &[&t_col, "t_over_t_rev_i", "autocorrelation"],
    );
    let mut clones = Table::new(
        "top_clones",
        &[
            "t_over_t_rev_ik",
            "s_i",
            "s_k",
            "abs_weight",
            "alpha_shift_rad",
            "gamma_shift_rad",
            "fidelity",
        ],
    );
    let mut residuals = Map::new();
    let points = cfg.times.points();
    let top_times: Vec<TopTime> = points.iter().map(|t| top_time(cfg, &spec, *t)).collect();
    let ac = top_autocorrelation(s, &spec, &top_times).map_err(compute)?;
    for ((tp, tt), a) in points.iter().zip(&top_times).zip(&ac) {
        let g = top_evolve(s, &spec, *tt, cfg.beta, cfg.n_alpha, cfg.n_gamma).map_err(compute)?;
        for (i, al) in g.theta_nodes.iter().enumerate() {
            for (k, ga) in g.phi_nodes.iter().enumerate() {
                dens.push(vec![
                    tp.to_f64().into(),
                    (*al).into(),
                    (*ga).into(),
                    g.get(i, k).into(),
                ]);
            }
        }
        auto.push(vec![
            tp.to_f64().into(),
            tt.in_rev_i(&spec).into(),
            (*a).into(),
        ]);
        if let (TopTime::Common(f), true) = (tt, spec.rational_delta.is_some()) {
            if f.denom() > 1 {
                let rep = top_clone_check(s, &spec, f.numer(), f.denom()).map_err(compute)?;
                residuals.insert(f.to_string(), json!(rep.residual));
                for w in &rep.waves {
                    clones.push(vec![
                        f.to_string().into(),
                        w.s_i.into(),
                        w.s_k.into(),
                        w.weight.norm().into(),
                        w.alpha_shift.into(),
                        w.gamma_shift.into(),
                        w.fidelity.into(),
                    ]);
                }
            }
        }
    }
    derived.insert("clone_residuals".into(), Value::Object(residuals));
    tables.push(dens);
    tables.push(auto);
    if !clones.rows.is_empty() {
        tables.push(clones);
    }
    Ok(())
}

fn report_task(
    cfg: &RunConfig,
    derived: &mut Map<String, Value>,
    tables: &mut Vec<Table>,
) -> Result<(), RunError> {
    let mut t = Table::new("report", &["quantity", "value"]);
    match cfg.family {
        Family::Janssen => {
            let j = janssen_state(cfg)?;
            let lab = top_lab_report(&j.expansion);
            let body = top_body_report(&j.expansion);
            let u = body_uncertainty(&j.expansion, req(cfg.lambda, "lambda")?);
            report_rows(&mut t, "lab_", &lab);
            report_rows(&mut t, "body_", &body);
            t.push(vec!["body_product".into(), u.product.into()]);
            t.push(vec!["body_bound".into(), u.bound.into()]);
            t.push(vec!["renormalization".into(), j.renormalization.into()]);
            derived.insert("lab".into(), report_json(&lab));
            derived.insert("body".into(), report_json(&body));
            if cfg.delta.is_some() {
                let spec = rotor_spec(cfg)?;
                let c = top_time_constants(&j.expansion, &spec);
                for (k, v) in [
                    ("t_rev_i", c.t_rev_i),
                    ("t_rev_k", c.t_rev_k),
                    ("t_cl_i", c.t_cl_i),
                    ("t_cl_k", c.t_cl_k),
                    ("t_rev_ik", c.t_rev_ik.unwrap_or(f64::NAN)),
                ] {
                    t.push(vec![k.into(), v.into()]);
                }
            }
        }
        Family::Boson if cfg.two_s % 2 == 1 && !cfg.truncated => {
            let b = boson_state(cfg)?;
            let r = b.report();
            report_rows(&mut t, "", &r);
            derived.insert("moments".into(), report_json(&r));
        }
        _ => {
            let s = sphere_state(cfg)?;
            *derived = sphere_derived(cfg, &s)?;
            let r = angular_momentum_report(&s);
            let u = UncertaintyCheck::from_report(&r);
            report_rows(&mut t, "", &r);
            t.push(vec![
                "uncertainty_satisfied".into(),
                (u.satisfied as i64).into(),
            ]);
            for k in ["t_rev", "t_cl", "i_bar"] {
                t.push(vec![
                    k.into(),
                    derived[k].as_f64().unwrap_or(f64::NAN).into(),
                ]);
            }
            if let (Family::Exponential, Some(n)) = (cfg.family, cfg.n) {
                if r.delta_l_eta_sq > 0.0 {
                    let e = spread_estimates(n, &r, cfg.omega0).map_err(compute)?;
                    t.push(vec!["tau_eta".into(), e.tau_eta.into()]);
                    t.push(vec!["q_max".into(), e.q_max.into()]);
                    let q = empirical_clone_count(&s, PI / 2.0, 12);
                    t.push(vec!["q_resolved_on_ring".into(), q.into()]);
                    derived.insert("q_max".into(), json!(e.q_max));
                    derived.insert("q_resolved_on_ring".into(), json!(q));
                }
            }
            derived.insert("moments".into(), report_json(&r));
        }
    }
    tables.push(t);
    Ok(())
}
