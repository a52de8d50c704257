use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use qosc::simulation::{simulate as run_simulation, Scenario, SimulationRow};
use qosc::sweep::{parse_s_range, sweep as run_sweep};
use qosc::transforms;
use qosc::waveguide::cross_validate;
use qosc::{
    make_grid, AmplitudeSample, CoefficientSet, Execution, FrequencyProfile, HamiltonPairState, IntegratorConfig,
    OscillatorState, TimeGrid, ValidationTolerances, WaveguideParams,
};

use crate::config::{pick_f64, pick_str, require_f64, ConfigFile};
use crate::table::{Cell, Format, Record, Table};
use crate::{CliError, CommonArgs, Form, ScenarioKind, SimulateArgs, SweepArgs, TransformArgs, ValidateArgs};

/// Common flags merged with the config file.
struct Settings {
    file: ConfigFile,
    omega: Option<f64>,
    s: f64,
    hbar: f64,
    t_start: f64,
    t_max: Option<f64>,
    step: Option<f64>,
    cfg: IntegratorConfig,
    out: Option<PathBuf>,
    format: Format,
}

impl Settings {
    fn resolve(c: &CommonArgs) -> Result<Self, CliError> {
        let file = match &c.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let rel = pick_f64(c.rel_tol, &file, "rel-tol", Some(1e-10))?.unwrap_or_default();
        let abs = pick_f64(c.abs_tol, &file, "abs-tol", Some(1e-12))?.unwrap_or_default();
        let cfg = IntegratorConfig::with_tolerances(rel, abs);
        cfg.validate()?;
        let format = match c.format {
            Some(f) => f,
            None => file.get("format").map(str::parse).transpose()?.unwrap_or(Format::Csv),
        };
        Ok(Self {
            omega: pick_f64(c.omega, &file, "omega", None)?,
            s: pick_f64(c.s, &file, "s", Some(0.0))?.unwrap_or_default(),
            hbar: pick_f64(c.hbar, &file, "hbar", Some(1.0))?.unwrap_or_default(),
            t_start: pick_f64(c.t_start, &file, "t-start", Some(0.0))?.unwrap_or_default(),
            t_max: pick_f64(c.t_max, &file, "t-max", None)?,
            step: pick_f64(c.step, &file, "step", Some(0.01))?,
            out: c.out.clone().or_else(|| file.get("out").map(PathBuf::from)),
            cfg,
            format,
            file,
        })
    }

    fn omega(&self) -> Result<f64, CliError> {
        self.omega.ok_or_else(|| CliError::Input("--omega is required".into()))
    }

    fn grid(&self) -> Result<TimeGrid, CliError> {
        let t_max = require_f64(self.t_max, &self.file, "t-max")?;
        let step = self.step.unwrap_or(0.01);
        Ok(make_grid(self.t_start, t_max, step)?)
    }

    fn waveguide(&self) -> Result<WaveguideParams, CliError> {
        Ok(WaveguideParams::new(self.omega()?, self.s, self.hbar)?)
    }

    fn writer(&self) -> Result<Box<dyn Write>, CliError> {
        Ok(match &self.out {
            Some(path) => {
                Box::new(BufWriter::new(File::create(path).map_err(|e| {
                    CliError::Output(format!("cannot create {}: {e}", path.display()))
                })?))
            }
            None => Box::new(BufWriter::new(std::io::stdout().lock())),
        })
    }

    fn emit_table(&self, table: &Table) -> Result<(), CliError> {
        let mut w = self.writer()?;
        table.write(self.format, &mut w)?;
        w.flush().map_err(CliError::output)
    }
}

pub fn simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let st = Settings::resolve(&args.common)?;
    let kind = match args.scenario {
        Some(k) => k,
        None => match st.file.get("scenario") {
            None | Some("waveguide") => ScenarioKind::Waveguide,
            Some("stationary") => ScenarioKind::Stationary,
            Some(other) => return Err(CliError::Input(format!("unknown scenario {other:?}"))),
        },
    };
    let scenario = match kind {
        ScenarioKind::Waveguide => Scenario::Waveguide(st.waveguide()?),
        ScenarioKind::Stationary => {
            if st.s != 0.0 {
                return Err(CliError::Input(format!(
                    "the stationary scenario has no squeezing, got --s {}",
                    st.s
                )));
            }
            Scenario::stationary(st.omega()?, st.hbar)?
        }
    };
    let grid = st.grid()?;
    let rows = run_simulation(&scenario, &grid, &st.cfg)?;
    let mut table = Table::new(SimulationRow::COLUMNS);
    for r in &rows {
        table.push_nums(r.values());
    }
    st.emit_table(&table)
}

pub fn validate(args: &ValidateArgs) -> Result<(), CliError> {
    let st = Settings::resolve(&args.common)?;
    let params = st.waveguide()?;
    let grid = st.grid()?;
    let strict = args.strict || st.file.bool("strict")?.unwrap_or(false);
    let mut tols = ValidationTolerances::default();
    if strict {
        tols = tols.strict();
    }
    let f = &st.file;
    tols.ode = pick_f64(args.tol_ode, f, "tol-ode", Some(tols.ode))?.unwrap_or(tols.ode);
    tols.wronskian = pick_f64(args.tol_wronskian, f, "tol-wronskian", Some(tols.wronskian))?.unwrap_or(tols.wronskian);
    tols.fluct = pick_f64(args.tol_fluct, f, "tol-fluct", Some(tols.fluct))?.unwrap_or(tols.fluct);
    tols.omega = pick_f64(args.tol_omega, f, "tol-omega", Some(tols.omega))?.unwrap_or(tols.omega);
    for (name, v) in [
        ("tol-ode", tols.ode),
        ("tol-wronskian", tols.wronskian),
        ("tol-fluct", tols.fluct),
        ("tol-omega", tols.omega),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::Input(format!("--{name} must be positive, got {v}")));
        }
    }

    let report = cross_validate(&params, &grid, &st.cfg, &tols)?;
    let mut rec = Record::default();
    rec.push("passed", Cell::Bool(report.passed));
    for (k, v) in [
        ("omega", params.omega()),
        ("s", params.s()),
        ("hbar", params.hbar()),
        ("t_start", grid.t_start()),
        ("t_max", grid.t_end()),
        ("step", grid.output_step()),
        ("rel_tol", st.cfg.rel_tol),
        ("abs_tol", st.cfg.abs_tol),
    ] {
        rec.push(k, Cell::Num(v));
    }
    rec.push("strict", Cell::Bool(strict));
    for (name, trace) in report.checks() {
        rec.push(format!("{name}.max"), Cell::Num(trace.max));
        rec.push(format!("{name}.at"), Cell::Num(trace.at));
        rec.push(format!("{name}.tolerance"), Cell::Num(trace.tolerance));
        rec.push(
            format!("{name}.first_violation"),
            trace.first_violation.map_or(Cell::Missing, Cell::Num),
        );
        rec.push(format!("{name}.passed"), Cell::Bool(trace.passed()));
    }
    let mut w = st.writer()?;
    rec.write(st.format, &mut w)?;
    drop(w);
    if report.passed {
        return Ok(());
    }
    for (name, trace) in report.checks() {
        if !trace.passed() {
            let first = trace.first_violation.map_or("none".to_string(), |t| format!("{t:?}"));
            eprintln!(
                "FAIL {name}: max {:?} at t = {:?} exceeds {:?} (first violation at t = {first})",
                trace.max, trace.at, trace.tolerance
            );
        }
    }
    Err(CliError::ValidationFailed)
}

pub fn sweep(args: &SweepArgs) -> Result<(), CliError> {
    let st = Settings::resolve(&args.common)?;
    let spec = pick_str(args.s_range.as_deref(), &st.file, "s-range")
        .ok_or_else(|| CliError::Input("--s-range is required".into()))?;
    let s_values = parse_s_range(&spec)?;
    let omega = st.omega()?;
    let grid = st.grid()?;
    let rows = run_sweep(
        omega,
        &s_values,
        st.hbar,
        &grid,
        &st.cfg,
        &ValidationTolerances::default(),
        Execution::default(),
    )?;
    let mut table = Table::new([
        "s",
        "min_squeeze_ratio",
        "min_squeeze_ratio_integrated",
        "max_ode_residual",
        "max_wronskian_drift",
        "max_fluct_mismatch",
        "max_saturation_residual",
        "max_omega_consistency",
        "passed",
    ]);
    for r in &rows {
        let mut cells: Vec<Cell> = [
            r.s,
            r.min_squeeze_ratio,
            r.min_squeeze_ratio_integrated,
            r.max_ode_residual,
            r.max_wronskian_drift,
            r.max_fluct_mismatch,
            r.max_saturation_residual,
            r.max_omega_consistency,
        ]
        .into_iter()
        .map(Cell::Num)
        .collect();
        cells.push(Cell::Bool(r.passed));
        table.rows.push(cells);
    }
    st.emit_table(&table)
}

/// Numeric columns of a headed CSV file.
struct Columns {
    data: HashMap<String, Vec<f64>>,
    len: usize,
}

impl Columns {
    fn read(path: &Path) -> Result<Self, CliError> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        let headers: Vec<String> = reader
            .headers()
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut data: HashMap<String, Vec<f64>> = headers.iter().map(|h| (h.clone(), Vec::new())).collect();
        let mut len = 0;
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            for (h, field) in headers.iter().zip(record.iter()) {
                let v = field.parse::<f64>().map_err(|_| {
                    CliError::Input(format!(
                        "{} row {}: {h} = {field:?} is not a number",
                        path.display(),
                        i + 1
                    ))
                })?;
                data.get_mut(h).expect("header present").push(v);
            }
            len += 1;
        }
        if len == 0 {
            return Err(CliError::Input(format!("{} has no data rows", path.display())));
        }
        Ok(Self { data, len })
    }

    fn get(&self, name: &str) -> Result<&[f64], CliError> {
        self.data
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| CliError::Input(format!("input is missing column {name:?}")))
    }

    fn complex(&self, re: &str, im: &str) -> Result<Vec<Complex64>, CliError> {
        Ok(self
            .get(re)?
            .iter()
            .zip(self.get(im)?)
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect())
    }

    fn states(&self) -> Result<Vec<OscillatorState>, CliError> {
        let t = self.get("t")?;
        let eps = self.complex("eps_re", "eps_im")?;
        let deps = self.complex("deps_re", "deps_im")?;
        Ok((0..self.len)
            .map(|i| OscillatorState::new(t[i], eps[i], deps[i]))
            .collect())
    }
}

fn state_columns() -> Vec<&'static str> {
    vec!["t", "eps_re", "eps_im", "deps_re", "deps_im"]
}

fn state_table(states: &[OscillatorState], residual: &[f64]) -> Table {
    let mut cols = state_columns();
    cols.push("residual");
    let mut table = Table::new(cols);
    for (s, r) in states.iter().zip(residual) {
        table.push_nums([s.t, s.eps.re, s.eps.im, s.deps.re, s.deps.im, *r]);
    }
    table
}

pub fn transform(args: &TransformArgs) -> Result<(), CliError> {
    let st = Settings::resolve(&args.common)?;
    let form = |flag: Option<Form>, key: &str| -> Result<Form, CliError> {
        if let Some(f) = flag {
            return Ok(f);
        }
        let raw = st
            .file
            .get(key)
            .ok_or_else(|| CliError::Input(format!("--{key} is required")))?;
        <Form as clap::ValueEnum>::from_str(raw, false).map_err(|_| CliError::Input(format!("unknown form {raw:?}")))
    };
    let (from, to) = (form(args.from, "from")?, form(args.to, "to")?);
    let input = args
        .input
        .clone()
        .or_else(|| st.file.get("in").map(PathBuf::from))
        .ok_or_else(|| CliError::Input("--in is required".into()))?;
    let m0omega0 = pick_f64(args.m0omega0, &st.file, "m0omega0", Some(1.0))?.unwrap_or(1.0);
    if !(m0omega0 > 0.0 && m0omega0.is_finite()) {
        return Err(CliError::Input(format!("--m0omega0 must be positive, got {m0omega0}")));
    }
    let cols = Columns::read(&input)?;
    let t = cols.get("t")?.to_vec();

    // The scenario supplying a, b, c and Ω²; only the mass form can do without it.
    let scenario = || -> Result<(CoefficientSet, FrequencyProfile, f64), CliError> {
        let p = st.waveguide()?;
        Ok((p.coefficient_set(), p.frequency(), p.hbar()))
    };
    let omega2_at = |f: &FrequencyProfile| t.iter().map(|&t| f.eval(t)).collect::<Vec<f64>>();

    let table = match (from, to) {
        (Form::Riccati, Form::Epsilon) => {
            let (coeffs, freq, _) = scenario()?;
            let c1 = cols.complex("c1_re", "c1_im")?;
            let series = transforms::riccati_series_from_samples(&t, &c1, &coeffs)?;
            let states = transforms::riccati_to_states(&series, &coeffs, m0omega0)?;
            state_table(&states, &transforms::oscillator_residual(&states, &omega2_at(&freq))?)
        }
        (Form::Epsilon, Form::Riccati) => {
            let (coeffs, _, _) = scenario()?;
            let states = cols.states()?;
            let c1 = states
                .iter()
                .map(|s| transforms::epsilon_to_riccati(&coeffs, s))
                .collect::<qosc::Result<Vec<_>>>()?;
            let residual = transforms::riccati_residual(&t, &c1, &coeffs)?;
            let mut table = Table::new(["t", "c1_re", "c1_im", "residual"]);
            for i in 0..t.len() {
                table.push_nums([t[i], c1[i].re, c1[i].im, residual[i]]);
            }
            table
        }
        (Form::Mass, Form::Epsilon) => {
            let (f, df, m, dm) = (cols.get("f")?, cols.get("df")?, cols.get("m")?, cols.get("dm")?);
            let omega2 = match cols.get("omega2") {
                Ok(w) => w.to_vec(),
                Err(_) => {
                    let w = st.omega.ok_or_else(|| CliError::Input("mass input needs an omega2 column or --omega".into()))?;
                    vec![w * w; t.len()]
                }
            };
            let mut states = Vec::with_capacity(t.len());
            for i in 0..t.len() {
                let (e, de) = transforms::mass_to_epsilon(f[i], df[i], m[i], dm[i], t[i])?;
                states.push(OscillatorState::new(t[i], Complex64::new(e, 0.0), Complex64::new(de, 0.0)));
            }
            let eff = transforms::effective_frequency_series(&t, m, dm, &omega2)?;
            let residual = transforms::oscillator_residual(&states, &eff)?;
            let mut table = Table::new(["t", "eps", "deps", "omega_eff2", "residual"]);
            for i in 0..t.len() {
                table.push_nums([t[i], states[i].eps.re, states[i].deps.re, eff[i], residual[i]]);
            }
            table
        }
        (Form::Epsilon, Form::Mass) => {
            let (_, freq, _) = scenario()?;
            let states = cols.states()?;
            let (m, dm) = (cols.get("m")?, cols.get("dm")?);
            let mut f = Vec::with_capacity(t.len());
            let mut df = Vec::with_capacity(t.len());
            for (i, s) in states.iter().enumerate() {
                let (fr, dfr) = transforms::epsilon_to_mass(s.eps.re, s.deps.re, m[i], dm[i], t[i])?;
                let (fi, dfi) = transforms::epsilon_to_mass(s.eps.im, s.deps.im, m[i], dm[i], t[i])?;
                f.push(Complex64::new(fr, fi));
                df.push(Complex64::new(dfr, dfi));
            }
            // ω² of the mass form is Ω² minus the mass correction ¼(ṁ/m)² − ½m̈/m.
            let big_omega2 = omega2_at(&freq);
            let correction = transforms::effective_frequency_series(&t, m, dm, &vec![0.0; t.len()])?;
            let omega2: Vec<f64> = big_omega2.iter().zip(&correction).map(|(w, c)| w - c).collect();
            let residual = transforms::mass_residual(&t, &f, &df, m, dm, &omega2)?;
            let mut table = Table::new(["t", "f_re", "f_im", "df_re", "df_im", "m", "dm", "omega2", "residual"]);
            for i in 0..t.len() {
                table.push_nums([t[i], f[i].re, f[i].im, df[i].re, df[i].im, m[i], dm[i], omega2[i], residual[i]]);
            }
            table
        }
        (Form::HamiltonPair, Form::Epsilon) => {
            let (coeffs, freq, hbar) = scenario()?;
            let (sigma, pi) = (cols.get("sigma")?, cols.get("pi")?);
            let pairs: Vec<HamiltonPairState> =
                (0..t.len()).map(|i| HamiltonPairState { t: t[i], sigma: sigma[i], pi: pi[i] }).collect();
            let states = transforms::epsilon_from_hamilton_pair(&coeffs, &pairs, hbar)?;
            state_table(&states, &transforms::oscillator_residual(&states, &omega2_at(&freq))?)
        }
        (Form::Epsilon, Form::HamiltonPair) => {
            let (coeffs, _, hbar) = scenario()?;
            let pairs = cols
                .states()?
                .iter()
                .map(|s| transforms::hamilton_pair_from_epsilon(&coeffs, s, hbar))
                .collect::<qosc::Result<Vec<_>>>()?;
            let residual = transforms::hamilton_pair_residual(&pairs, &coeffs, hbar)?;
            let mut table = Table::new(["t", "sigma", "pi", "residual"]);
            for (h, r) in pairs.iter().zip(&residual) {
                table.push_nums([h.t, h.sigma, h.pi, *r]);
            }
            table
        }
        (Form::Ermakov, Form::Epsilon) => {
            let (_, freq, _) = scenario()?;
            let (rho, drho) = (cols.get("rho")?, cols.get("drho")?);
            let samples: Vec<AmplitudeSample> =
                (0..t.len()).map(|i| AmplitudeSample { t: t[i], rho: rho[i], drho: drho[i] }).collect();
            let states = transforms::epsilon_from_amplitude(&samples)?;
            state_table(&states, &transforms::oscillator_residual(&states, &omega2_at(&freq))?)
        }
        (Form::Epsilon, Form::Ermakov) => {
            let (_, freq, _) = scenario()?;
            let samples = transforms::epsilon_to_amplitude(&cols.states()?);
            let residual = transforms::ermakov_series_residual(&samples, &omega2_at(&freq))?;
            let mut table = Table::new(["t", "rho", "drho", "residual"]);
            for (s, r) in samples.iter().zip(&residual) {
                table.push_nums([s.t, s.rho, s.drho, *r]);
            }
            table
        }
        (from, to) => {
            return Err(CliError::Input(format!(
                "unsupported transform {from:?} -> {to:?}; one side must be epsilon and the other riccati, mass, hamilton-pair or ermakov"
            )))
        }
    };
    st.emit_table(&table)
}
