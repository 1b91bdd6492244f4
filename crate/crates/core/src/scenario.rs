//! Scenario configs and the end-to-end pipeline behind `hkit run` and `hkit sweep`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::dynamics::{self, propagate, LindbladModel, OperatorTrajectory, TimeGrid, TrajectoryKind};
use crate::error::{Error, Result};
use crate::frames::{self, gauge_transform, FrameTrajectory, GaugeField, GaugeMixing, GaugeTag, SmoothRandomGauge};
use crate::holonomy::{self, geometric_phase_with, CaseTag, HolonomyResult, NonAbelianWitness};
use crate::matlib::{self, max_abs_diff, CMatrix};
use crate::models::synthetic;
use crate::models::tripod::{self, ParamLoop, TripodOptions};
use crate::models::two_level::{self as tl, TwoLevelDecayParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    TwoLevelDecay,
    BerryClosed,
    WilczekZee,
    SyntheticRotation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameSource {
    Analytic,
    #[default]
    Continuity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    Trajectory,
    Holonomy,
    Report,
}

fn all_outputs() -> Vec<Output> {
    vec![Output::Trajectory, Output::Holonomy, Output::Report]
}

fn default_case() -> CaseTag {
    CaseTag::General
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub grid: TimeGrid,
    #[serde(default = "default_case")]
    pub case_tag: CaseTag,
    #[serde(default)]
    pub frame_source: FrameSource,
    #[serde(default = "all_outputs")]
    pub outputs: Vec<Output>,
    #[serde(default)]
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::param("config", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::param("config", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn param(&self, key: &str, default: f64) -> f64 {
        self.params.get(key).copied().unwrap_or(default)
    }

    fn allowed_params(&self) -> &'static [&'static str] {
        match self.scenario {
            ScenarioKind::TwoLevelDecay | ScenarioKind::BerryClosed => &["omega0", "gamma", "r0", "theta0", "phi0"],
            ScenarioKind::WilczekZee => &[
                "omega", "adiabatic_ratio", "center_theta", "center_phi", "center_chi", "u_theta", "u_phi", "u_chi", "v_theta", "v_phi", "v_chi",
            ],
            ScenarioKind::SyntheticRotation => &["omega"],
        }
    }

    /// Checks everything that can be checked without running the pipeline.
    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        let allowed = self.allowed_params();
        for (key, value) in &self.params {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::param(format!("params.{key}"), format!("not used by this scenario (expected one of {allowed:?})")));
            }
            if !value.is_finite() {
                return Err(Error::param(format!("params.{key}"), "must be finite"));
            }
        }
        match self.scenario {
            ScenarioKind::TwoLevelDecay | ScenarioKind::BerryClosed => {
                self.two_level_params()?;
            }
            ScenarioKind::WilczekZee => {
                if self.frame_source == FrameSource::Analytic {
                    return Err(Error::param("frame_source", "wilczek_zee only has continuity frames"));
                }
                let opts = self.tripod_options();
                if !(opts.omega > 0.0) {
                    return Err(Error::param("params.omega", "must be positive"));
                }
                if !(opts.adiabatic_ratio > 0.0) {
                    return Err(Error::param("params.adiabatic_ratio", "must be positive"));
                }
            }
            ScenarioKind::SyntheticRotation => {}
        }
        Ok(())
    }

    pub fn two_level_params(&self) -> Result<TwoLevelDecayParams> {
        let gamma = self.param("gamma", 0.0);
        if self.scenario == ScenarioKind::BerryClosed && gamma != 0.0 {
            return Err(Error::param("params.gamma", "berry_closed is the closed limit, gamma must be 0"));
        }
        let p = TwoLevelDecayParams {
            omega0: self.param("omega0", 1.0),
            gamma,
            r0: self.param("r0", 1.0),
            theta0: self.param("theta0", PI / 3.0),
            phi0: self.param("phi0", 0.0),
        };
        p.validate()?;
        Ok(p)
    }

    fn tripod_loop(&self) -> ParamLoop {
        let (demo, _) = tripod::demo_loops();
        let get = |key: &str, default: f64| self.param(key, default);
        ParamLoop {
            center: [get("center_theta", demo.center[0]), get("center_phi", demo.center[1]), get("center_chi", demo.center[2])],
            u: [get("u_theta", demo.u[0]), get("u_phi", demo.u[1]), get("u_chi", demo.u[2])],
            v: [get("v_theta", demo.v[0]), get("v_phi", demo.v[1]), get("v_chi", demo.v[2])],
        }
    }

    fn tripod_options(&self) -> TripodOptions {
        TripodOptions {
            omega: self.param("omega", 1.0),
            n_steps: self.grid.n_steps,
            adiabatic_ratio: self.param("adiabatic_ratio", 1e-2),
        }
    }

    /// Sets a numeric field by name: a `params` key, `grid.t0`, `grid.t1`,
    /// `grid.n_steps` or `seed`.
    pub fn set_field(&mut self, name: &str, value: f64) -> Result<()> {
        match name {
            "grid.t0" => self.grid.t0 = value,
            "grid.t1" => self.grid.t1 = value,
            "grid.n_steps" | "n_steps" => self.grid.n_steps = as_count(name, value)?,
            "seed" => self.seed = as_count(name, value)? as u64,
            key => {
                let key = key.strip_prefix("params.").unwrap_or(key);
                if !self.allowed_params().contains(&key) {
                    return Err(Error::param("axis", format!("`{name}` is not a numeric field of this scenario")));
                }
                self.params.insert(key.to_string(), value);
            }
        }
        Ok(())
    }
}

fn as_count(name: &str, value: f64) -> Result<usize> {
    if value >= 0.0 && value.fract() == 0.0 && value < 1e15 {
        Ok(value as usize)
    } else {
        Err(Error::param(name, "must be a non-negative integer"))
    }
}

/// Everything a run produces, before it is written out.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub config: ScenarioConfig,
    pub density: OperatorTrajectory,
    pub invariant: OperatorTrajectory,
    pub frames: FrameTrajectory,
    pub holonomy: HolonomyResult,
    pub witness: Option<NonAbelianWitness>,
    pub connection_witness: NonAbelianWitness,
    pub connection_deviation: f64,
    pub gauge_check: GaugeCheck,
    pub expectation: Vec<f64>,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GaugeCheck {
    pub seed: u64,
    pub eigenphase_shift: f64,
    pub trace_abs_shift: f64,
    pub covariance_residual: f64,
}

struct Built {
    model: LindbladModel,
    rho0: CMatrix,
    invariant: OperatorTrajectory,
    analytic: Option<FrameTrajectory>,
}

fn build(cfg: &ScenarioConfig) -> Result<Built> {
    let grid = cfg.grid;
    match cfg.scenario {
        ScenarioKind::TwoLevelDecay | ScenarioKind::BerryClosed => {
            let p = cfg.two_level_params()?;
            let model = tl::two_level_model(&p)?;
            let invariant = propagate(&model, &tl::chi_closed_form(&p, grid.t0), &grid, TrajectoryKind::Invariant, 1e-10)?;
            let analytic = match cfg.frame_source {
                FrameSource::Analytic => Some(tl::analytic_frames(&p, &grid)?),
                FrameSource::Continuity => None,
            };
            Ok(Built { model, rho0: tl::initial_density(&p), invariant, analytic })
        }
        ScenarioKind::SyntheticRotation => {
            let omega = cfg.param("omega", 1.0);
            let model = synthetic::rotation_model(omega)?;
            let inv0 = synthetic::rotation_invariant0();
            let invariant = propagate(&model, &inv0, &grid, TrajectoryKind::Invariant, 1e-10)?;
            let analytic = match cfg.frame_source {
                FrameSource::Analytic if grid.t0 == 0.0 => Some(synthetic::rotation_frames(omega, &grid)?),
                FrameSource::Analytic => return Err(Error::param("grid.t0", "analytic rotation frames start at t = 0")),
                FrameSource::Continuity => None,
            };
            Ok(Built { model, rho0: matlib::diag_real(&[0.75, 0.25]), invariant, analytic })
        }
        ScenarioKind::WilczekZee => {
            let path = cfg.tripod_loop();
            let opts = cfg.tripod_options();
            let model = tripod::wilczek_zee_demo(&path, &opts)?;
            // the Hamiltonian's eigenbasis stands in for the invariant basis
            let invariant = OperatorTrajectory {
                grid,
                samples: grid.times().map(|t| model.hamiltonian(t)).collect(),
                kind: TrajectoryKind::Invariant,
                renormalized: false,
            };
            let eig = matlib::hermitian_eig(&invariant.samples[0], 1e-8)?;
            let dark = eig.vectors.column(1).into_owned();
            let rho0 = &dark * dark.adjoint();
            Ok(Built { model, rho0, invariant, analytic: None })
        }
    }
}

fn mixing_for(case: CaseTag) -> GaugeMixing {
    match case {
        CaseTag::General | CaseTag::TND => GaugeMixing::Full,
        CaseTag::TD => GaugeMixing::BlockDiagonal,
        CaseTag::NTND => GaugeMixing::Diagonal,
    }
}

/// Runs the pipeline for one config without touching the filesystem.
pub fn execute(cfg: &ScenarioConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let built = build(cfg)?;
    let grid = cfg.grid;
    let density = propagate(&built.model, &built.rho0, &grid, TrajectoryKind::Density, 1e-8)?;
    let frames = match built.analytic {
        Some(f) => f,
        None => frames::eigenframes(&built.invariant, 1e-8)?,
    };
    cfg.case_tag.check(&frames.blocks)?;
    let a = frames::connection(&frames)?;
    let k = grid.len() - 1;
    let hol = geometric_phase_with(&frames, &a, k, cfg.case_tag)?;

    let connection_witness = holonomy::connection_witness(&a, 32)?;
    let witness = if frames.gauge_tag == GaugeTag::Analytic {
        let series = dynamics::basis_series(&built.model, &frames, &a)?;
        let g: Vec<CMatrix> = series.iter().map(|b| b.generator()).collect();
        Some(holonomy::non_abelian_witness(&g, grid.dt(), 32)?)
    } else {
        None
    };

    // covariance under a seeded smooth gauge, slow on the scale of the run
    let rate = 2.0 * PI / (grid.t1 - grid.t0);
    let gauge = SmoothRandomGauge::new(cfg.seed, &frames.blocks, mixing_for(cfg.case_tag), 3, rate);
    let gframes = gauge_transform(&frames, &gauge)?;
    let moved = geometric_phase_with(&gframes, &frames::connection(&gframes)?, k, cfg.case_tag)?;
    let m0 = gauge.value(grid.t0);
    let gauge_check = GaugeCheck {
        seed: cfg.seed,
        eigenphase_shift: matlib::phase_set_distance(&hol.eigenphases, &moved.eigenphases),
        trace_abs_shift: (hol.trace_o.norm() - moved.trace_o.norm()).abs(),
        covariance_residual: max_abs_diff(&moved.o, &(m0.adjoint() * &hol.o * &m0)),
    };

    let expectation = built
        .invariant
        .samples
        .iter()
        .zip(&density.samples)
        .map(|(i, r)| dynamics::invariant_expectation(i, r))
        .collect::<Result<Vec<_>>>()?;

    let (warnings, notes) = diagnostics(cfg, &frames, &a, &density, &witness);
    let connection_deviation = a.hermitian_deviation;
    Ok(RunOutcome {
        config: cfg.clone(),
        density,
        invariant: built.invariant,
        frames,
        holonomy: hol,
        witness,
        connection_witness,
        connection_deviation,
        gauge_check,
        expectation,
        warnings,
        notes,
    })
}

fn diagnostics(
    cfg: &ScenarioConfig,
    frames: &FrameTrajectory,
    a: &frames::ConnectionSeries,
    density: &OperatorTrajectory,
    witness: &Option<NonAbelianWitness>,
) -> (Vec<String>, Vec<String>) {
    let mut warnings = Vec::new();
    let mut notes = Vec::new();
    if cfg.grid.n_steps < 100 {
        warnings.push(format!("n_steps = {} is below 100; results are not converged", cfg.grid.n_steps));
    }
    if a.flagged {
        warnings.push(format!("connection Hermiticity deviation {:.2e} exceeds 1e-5", a.hermitian_deviation));
    }
    if density.renormalized {
        warnings.push("density trace drifted beyond 1e-8 and was renormalized".into());
    }
    if let Ok(p) = cfg.two_level_params() {
        if matches!(cfg.scenario, ScenarioKind::TwoLevelDecay | ScenarioKind::BerryClosed) {
            let ratio = p.gamma / p.omega0;
            notes.push(format!("gamma/omega0 = {ratio:.3e}"));
            if ratio > 0.1 {
                warnings.push(format!("gamma/omega0 = {ratio:.3e} is not weak coupling; the slow-Hamiltonian assumption is doubtful"));
            }
            if !(PI / 7.0..=PI).contains(&p.theta0) {
                warnings.push(format!("theta0 = {:.4} lies outside pi/7 <= theta0 <= pi, where the eta/zeta/Omega approximations are quoted", p.theta0));
            }
            if p.gamma == 0.0 {
                notes.push("gamma = 0: Abelian limit, the frame generators commute".into());
            }
        }
    }
    if let Some(w) = witness {
        notes.push(format!(
            "non-Abelian witness of H + A + iD: commutator {:.3e}, order-reversal gap {:.3e}",
            w.commutator, w.reversal_gap
        ));
    }
    if frames.gauge_tag == GaugeTag::Continuity && frames.blocks.iter().any(|b| b.len() > 1) {
        notes.push("continuity gauge: the within-block connection is zero by construction".into());
    }
    (warnings, notes)
}

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

fn matrix_json(m: &CMatrix) -> serde_json::Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
    json!(rows)
}

pub fn holonomy_json(out: &RunOutcome) -> serde_json::Value {
    let h = &out.holonomy;
    let cfg = &out.config;
    json!({
        "scenario": cfg.scenario,
        "case_tag": h.case_tag,
        "frame_source": cfg.frame_source,
        "seed": cfg.seed,
        "t": h.t,
        "O": matrix_json(&h.o),
        "U": matrix_json(&h.u),
        "Vpar": matrix_json(&h.vpar),
        "R": matrix_json(&h.r),
        "trace": [h.trace_o.re, h.trace_o.im],
        "trace_abs": h.trace_o.norm(),
        "eigenphases": h.eigenphases,
        "convergence": {
            "grid": cfg.grid,
            "dt": cfg.grid.dt(),
            "block_sizes": out.frames.block_sizes(),
            "overlap_rank": h.overlap_rank,
            "unitarity_O": matlib::unitary_deviation(&h.o),
            "factorization_residual": max_abs_diff(&h.o, &(&h.u * &h.vpar)),
            "connection_hermitian_deviation": out.connection_deviation,
            "density_renormalized": out.density.renormalized,
            "invariant_expectation_drift": expectation_drift(&out.expectation),
            "non_abelian_witness": out.witness,
            "connection_witness": out.connection_witness,
            "gauge_check": out.gauge_check,
        },
        "warnings": out.warnings,
        "notes": out.notes,
    })
}

fn expectation_drift(values: &[f64]) -> f64 {
    values.iter().map(|v| (v - values[0]).abs()).fold(0.0, f64::max)
}

pub fn write_trajectory(out: &RunOutcome, path: &Path) -> Result<()> {
    let n = out.density.samples[0].nrows();
    let mut wtr = csv::Writer::from_path(path).map_err(io_err)?;
    let mut header = vec!["t".to_string()];
    for i in 0..n {
        for j in 0..n {
            header.push(format!("rho_{i}{j}_re"));
            header.push(format!("rho_{i}{j}_im"));
        }
    }
    header.extend((0..out.frames.dim()).map(|i| format!("lambda_{i}")));
    header.push("tr_I_rho".into());
    wtr.write_record(&header).map_err(io_err)?;
    for (k, t) in out.config.grid.times().enumerate() {
        let rho = &out.density.samples[k];
        let mut row = vec![sci(t)];
        for i in 0..n {
            for j in 0..n {
                row.push(sci(rho[(i, j)].re));
                row.push(sci(rho[(i, j)].im));
            }
        }
        row.extend(out.frames.eigenvalues[k].iter().map(|&v| sci(v)));
        row.push(sci(out.expectation[k]));
        wtr.write_record(&row).map_err(io_err)?;
    }
    wtr.flush().map_err(|e| io_err(e.into()))
}

pub fn report_text(out: &RunOutcome) -> String {
    let h = &out.holonomy;
    let cfg = &out.config;
    let mut s = String::new();
    let _ = writeln!(s, "scenario      {:?}", cfg.scenario);
    let _ = writeln!(s, "case          {}", h.case_tag);
    let _ = writeln!(s, "frames        {:?}, blocks {:?}", out.frames.gauge_tag, out.frames.block_sizes());
    let _ = writeln!(s, "grid          [{}, {}] with {} points, dt = {:.3e}", cfg.grid.t0, cfg.grid.t1, cfg.grid.n_steps, cfg.grid.dt());
    let _ = writeln!(s, "t             {}", h.t);
    let phases: Vec<String> = h.eigenphases.iter().map(|p| format!("{p:.10}")).collect();
    let _ = writeln!(s, "eigenphases   {}", phases.join(", "));
    let _ = writeln!(s, "trace O       {:.10} {:+.10}i  (|tr| = {:.10})", h.trace_o.re, h.trace_o.im, h.trace_o.norm());
    let _ = writeln!(s, "overlap rank  {}", h.overlap_rank);
    let _ = writeln!(s, "Tr[I rho]     drift {:.3e}", expectation_drift(&out.expectation));
    let g = &out.gauge_check;
    let _ = writeln!(
        s,
        "gauge check   seed {}: eigenphases {:.2e}, |tr| {:.2e}, covariance {:.2e}",
        g.seed, g.eigenphase_shift, g.trace_abs_shift, g.covariance_residual
    );
    for n in &out.notes {
        let _ = writeln!(s, "note          {n}");
    }
    if out.warnings.is_empty() {
        let _ = writeln!(s, "warnings      none");
    }
    for w in &out.warnings {
        let _ = writeln!(s, "WARNING       {w}");
    }
    s
}

fn io_err(e: csv::Error) -> Error {
    Error::param("out", e.to_string())
}

/// Writes the configured artifacts into `dir`, creating it if needed.
pub fn write_outputs(out: &RunOutcome, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::param("out", format!("{}: {e}", dir.display())))?;
    let write = |name: &str, body: String| {
        std::fs::write(dir.join(name), body).map_err(|e| Error::param("out", format!("{name}: {e}")))
    };
    for o in &out.config.outputs {
        match o {
            Output::Trajectory => write_trajectory(out, &dir.join("trajectory.csv"))?,
            Output::Holonomy => {
                let body = serde_json::to_string_pretty(&holonomy_json(out)).map_err(|e| Error::Inconsistent(e.to_string()))?;
                write("holonomy.json", body + "\n")?;
            }
            Output::Report => write("report.txt", report_text(out))?,
        }
    }
    Ok(())
}

/// One sweep point's gauge-invariant summary.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: f64,
    pub result: std::result::Result<SweepValues, String>,
}

#[derive(Debug, Clone)]
pub struct SweepValues {
    pub eigenphases: Vec<f64>,
    pub trace_abs: f64,
    pub trace_arg: f64,
    pub witness: Option<NonAbelianWitness>,
}

/// Runs the template once per value, in parallel, keeping input order.
pub fn sweep(template: &ScenarioConfig, axis: &str, values: &[f64]) -> Result<Vec<SweepRow>> {
    use rayon::prelude::*;
    if values.is_empty() {
        return Err(Error::param("values", "empty list"));
    }
    // reject an unknown axis before spending any work
    template.clone().set_field(axis, values[0])?;
    Ok(values
        .par_iter()
        .map(|&value| {
            let mut cfg = template.clone();
            let result = cfg
                .set_field(axis, value)
                .and_then(|_| execute(&cfg))
                .map(|out| SweepValues {
                    eigenphases: out.holonomy.eigenphases.clone(),
                    trace_abs: out.holonomy.trace_o.norm(),
                    trace_arg: out.holonomy.trace_o.arg(),
                    witness: out.witness,
                })
                .map_err(|e| e.to_string());
            SweepRow { value, result }
        })
        .collect())
}

pub fn write_sweep(axis: &str, rows: &[SweepRow], path: &Path) -> Result<()> {
    let width = rows.iter().filter_map(|r| r.result.as_ref().ok()).map(|v| v.eigenphases.len()).max().unwrap_or(0);
    let mut wtr = csv::Writer::from_path(path).map_err(io_err)?;
    let mut header = vec![axis.to_string(), "status".into()];
    header.extend((0..width).map(|i| format!("eigenphase_{i}")));
    header.extend(["trace_abs", "trace_arg", "witness_commutator", "witness_reversal_gap", "error"].map(String::from));
    wtr.write_record(&header).map_err(io_err)?;
    for row in rows {
        let mut rec = vec![sci(row.value)];
        match &row.result {
            Ok(v) => {
                rec.push("ok".into());
                rec.extend((0..width).map(|i| v.eigenphases.get(i).map(|&p| sci(p)).unwrap_or_default()));
                rec.push(sci(v.trace_abs));
                rec.push(sci(v.trace_arg));
                rec.push(v.witness.map(|w| sci(w.commutator)).unwrap_or_default());
                rec.push(v.witness.map(|w| sci(w.reversal_gap)).unwrap_or_default());
                rec.push(String::new());
            }
            Err(e) => {
                rec.push("error".into());
                rec.extend(std::iter::repeat_n(String::new(), width + 4));
                rec.push(e.clone());
            }
        }
        wtr.write_record(&rec).map_err(io_err)?;
    }
    wtr.flush().map_err(|e| io_err(e.into()))
}

/// Parses a sweep value: a number, or a multiple/fraction of `pi`
/// such as `pi`, `pi/3`, `2pi/3`, `2*pi/3`, `-0.5*pi`.
pub fn parse_value(text: &str) -> Result<f64> {
    let s = text.trim().to_ascii_lowercase().replace(' ', "");
    if let Ok(v) = s.parse::<f64>() {
        return Ok(v);
    }
    let bad = || Error::param("values", format!("cannot parse `{text}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().map_err(|_| bad())?),
        None => (s.as_str(), 1.0),
    };
    let coeff = num.strip_suffix("pi").ok_or_else(bad)?;
    let coeff = coeff.strip_suffix('*').unwrap_or(coeff);
    let k = match coeff {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(k * PI / den)
}

/// Exit-status class of an error: config problems versus numerical failures.
pub fn is_config_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidParameter { .. } | Error::IncompatibleCase { .. } | Error::GridTooShort { .. } | Error::GridMismatch | Error::DimensionMismatch { .. }
    )
}

/// Sample config used by the examples and tests.
pub fn example_config(scenario: ScenarioKind) -> ScenarioConfig {
    let (params, grid, case_tag): (Vec<(&str, f64)>, TimeGrid, CaseTag) = match scenario {
        ScenarioKind::BerryClosed => (vec![("theta0", PI / 2.0)], TimeGrid { t0: 0.0, t1: 2.0 * PI, n_steps: 4001 }, CaseTag::NTND),
        ScenarioKind::TwoLevelDecay => (
            vec![("gamma", 1e-3), ("theta0", 2.0 * PI / 3.0), ("phi0", 0.4)],
            TimeGrid { t0: 0.0, t1: 2.0 * PI, n_steps: 4001 },
            CaseTag::TND,
        ),
        ScenarioKind::WilczekZee => {
            let (l, _) = tripod::demo_loops();
            let period = tripod::loop_period(&l, &TripodOptions::default());
            (vec![], TimeGrid { t0: 0.0, t1: period, n_steps: 4001 }, CaseTag::TD)
        }
        ScenarioKind::SyntheticRotation => (vec![("omega", 0.5)], TimeGrid { t0: 0.0, t1: 3.0, n_steps: 601 }, CaseTag::NTND),
    };
    ScenarioConfig {
        scenario,
        params: params.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        grid,
        case_tag,
        frame_source: FrameSource::Continuity,
        outputs: all_outputs(),
        seed: 7,
    }
}
