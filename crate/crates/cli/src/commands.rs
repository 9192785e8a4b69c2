use anyhow::{anyhow, bail, Result};
use lifshitz_core::plasma_gap::{
    nuclear_demo, screened_expansion, screened_free_energy, vacuum_gap_expansion, PlasmaGapParams, DEMO_DISCLAIMER,
};
use lifshitz_core::quantities::Dimension;
use lifshitz_core::resonance::{resonance_closed_form, resonance_n0, resonance_series, ResonanceQuery};
use lifshitz_core::{DielectricModel, Execution, LifshitzEngine, PlanarScenario, UnitSystem};
use serde::Serialize;
use serde_json::{json, Value};

use crate::force::{force_from_energy, CurvePoint};
use crate::output::{Cell, Column, Table};
use crate::scenario::{Scenario, Screening, SweepVariable};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_EXTRA_TOL: f64 = 1e-4;
pub const DEFAULT_N_CAP: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    FreeEnergy,
    Sweep,
    ExtraTerm,
    PlasmaGap,
    Resonance,
    NuclearDemo,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::FreeEnergy => "free-energy",
            Command::Sweep => "sweep",
            Command::ExtraTerm => "extra-term",
            Command::PlasmaGap => "plasma-gap",
            Command::Resonance => "resonance",
            Command::NuclearDemo => "nuclear-demo",
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    pub tol: Option<f64>,
    pub units: Option<UnitSystem>,
    pub demo_acknowledge: bool,
    pub pressure: bool,
}

/// A finished (or partially finished) run.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: Command,
    pub table: Table,
    pub units: UnitSystem,
    /// Full per-point diagnostics, in sweep order.
    pub diagnostics: Vec<Value>,
}

impl Report {
    pub fn csv(&self) -> String {
        self.table.render(self.units)
    }

    pub fn is_complete(&self) -> bool {
        self.table.incomplete.is_none()
    }

    pub fn json(&self, scenario: &Scenario) -> Value {
        json!({
            "command": self.command.name(),
            "units": self.units,
            "scenario": scenario,
            "columns": self.table.headers(self.units),
            "records": self.table.records(self.units),
            "diagnostics": self.diagnostics,
            "incomplete": self.table.incomplete,
        })
    }
}

/// (d, T) evaluation points in sweep order.
pub fn points(scenario: &Scenario, require_sweep: bool) -> Result<Vec<(f64, f64)>> {
    match scenario.sweep {
        Some(sweep) => {
            let values = sweep.values();
            Ok(match sweep.variable {
                SweepVariable::D => {
                    if !values.windows(2).all(|w| w[1] > w[0]) {
                        bail!("a d sweep must run from smaller to larger separations");
                    }
                    let t = scenario.temperature.ok_or_else(|| anyhow!("d sweep needs [thermal] T_K"))?;
                    values.into_iter().map(|d| (d, t)).collect()
                }
                SweepVariable::T => {
                    let d = scenario.d.ok_or_else(|| anyhow!("T sweep needs [geometry] d_<unit>"))?;
                    values.into_iter().map(|t| (d, t)).collect()
                }
            })
        }
        None if require_sweep => bail!("sweep needs a [sweep] section"),
        None => {
            let d = scenario.d.ok_or_else(|| anyhow!("missing [geometry] d_<unit>"))?;
            let t = scenario.temperature.ok_or_else(|| anyhow!("missing [thermal] T_K"))?;
            Ok(vec![(d, t)])
        }
    }
}

type PointResult = std::result::Result<(Vec<Cell>, Value), String>;

/// Evaluates every point, keeping results in order and stopping the table at the first failure.
fn tabulate(
    command: Command,
    columns: Vec<Column>,
    units: UnitSystem,
    grid: &[(f64, f64)],
    eval: impl Fn(f64, f64) -> PointResult + Sync + Send,
) -> Report {
    let results = Execution::default().map_ordered(grid, |&(d, t)| eval(d, t));
    let mut table = Table::new(columns);
    let mut diagnostics = Vec::with_capacity(results.len());
    for (&(d, t), r) in grid.iter().zip(results) {
        match r {
            Ok((row, diag)) => {
                table.push(row);
                diagnostics.push(diag);
            }
            Err(e) => {
                table.incomplete = Some(format!("point d = {d:e} m, T = {t:e} K failed: {e}"));
                break;
            }
        }
    }
    Report {
        command,
        table,
        units,
        diagnostics,
    }
}

fn f(v: f64) -> Cell {
    Cell::Float(v)
}

fn n(v: usize) -> Cell {
    Cell::Int(v as u64)
}

fn halfspace(scenario: &Scenario) -> Result<DielectricModel> {
    scenario
        .halfspace
        .clone()
        .ok_or_else(|| anyhow!("missing [materials] halfspace = <model>"))
}

pub fn run(command: Command, scenario: &Scenario, opts: &Options) -> Result<Report> {
    let units = opts.units.or(scenario.units).unwrap_or(UnitSystem::Si);
    if opts.pressure && !matches!(command, Command::FreeEnergy | Command::Sweep) {
        bail!("--pressure applies to free-energy and sweep only");
    }
    if opts.demo_acknowledge && command != Command::NuclearDemo {
        bail!("--demo-acknowledge applies to nuclear-demo only");
    }
    match command {
        Command::FreeEnergy | Command::Sweep => free_energy(command, scenario, opts, units),
        Command::ExtraTerm => extra_term(scenario, opts, units),
        Command::PlasmaGap => plasma_gap(scenario, opts, units),
        Command::Resonance => resonance(scenario, opts, units),
        Command::NuclearDemo => nuclear(scenario, opts),
    }
}

fn free_energy(command: Command, scenario: &Scenario, opts: &Options, units: UnitSystem) -> Result<Report> {
    let grid = points(scenario, command == Command::Sweep)?;
    let base = PlanarScenario::new(halfspace(scenario)?, scenario.gap.clone(), grid[0].0, grid[0].1)?;
    let tol = opts.tol.or(scenario.tol).unwrap_or(DEFAULT_TOL);
    if opts.pressure && scenario.sweep.map(|s| s.variable) != Some(SweepVariable::D) {
        bail!("--pressure needs a d sweep");
    }
    let engine = LifshitzEngine::default();
    let columns = vec![
        Column::with("d", Dimension::Length),
        Column::with("T", Dimension::Temperature),
        Column::with("free_energy", Dimension::EnergyPerArea),
        Column::with("abs_error", Dimension::EnergyPerArea),
        Column::with("te", Dimension::EnergyPerArea),
        Column::with("tm", Dimension::EnergyPerArea),
        Column::plain("n_terms"),
        Column::plain("quad_evals"),
    ];
    let mut report = tabulate(command, columns, units, &grid, |d, t| {
        let s = base.with_separation(d).with_temperature(t);
        let r = if t == 0.0 {
            engine.free_energy_zero_t(&s, tol)
        } else {
            engine.free_energy(&s, tol)
        }
        .map_err(|e| e.to_string())?;
        let row = vec![
            f(d),
            f(t),
            f(r.value),
            f(r.abs_error),
            f(r.te_value),
            f(r.tm_value),
            n(r.n_terms_used),
            n(r.quad_evals),
        ];
        let diag = json!({ "sweep_var": sweep_var(scenario, d, t), "result": r });
        Ok((row, diag))
    });
    if opts.pressure {
        add_pressure(&mut report.table)?;
    }
    Ok(report)
}

fn sweep_var(scenario: &Scenario, d: f64, t: f64) -> Value {
    match scenario.sweep.map(|s| s.variable) {
        Some(SweepVariable::D) | None => json!({ "name": "d", "value": d }),
        Some(SweepVariable::T) => json!({ "name": "T", "value": t }),
    }
}

/// Appends pressure and pressure_error columns from the (d, F, error) columns.
fn add_pressure(table: &mut Table) -> Result<()> {
    let curve: Vec<CurvePoint> = table
        .rows
        .iter()
        .map(|r| match (r[0], r[2], r[3]) {
            (Cell::Float(d), Cell::Float(value), Cell::Float(abs_error)) => CurvePoint { d, value, abs_error },
            _ => unreachable!("free-energy columns are floats"),
        })
        .collect();
    table.columns.push(Column::with("pressure", Dimension::Pressure));
    table.columns.push(Column::with("pressure_error", Dimension::Pressure));
    match force_from_energy(&curve) {
        Ok(p) => {
            for (row, p) in table.rows.iter_mut().zip(p) {
                row.push(f(p.pressure));
                row.push(f(p.error));
            }
        }
        // a partial table may be too short to differentiate
        Err(e) if table.incomplete.is_some() => {
            for row in table.rows.iter_mut() {
                row.push(f(f64::NAN));
                row.push(f(f64::NAN));
            }
            let note = table.incomplete.take().unwrap_or_default();
            table.incomplete = Some(format!("{note}; pressure unavailable: {e}"));
        }
        Err(e) => bail!("pressure: {e}"),
    }
    Ok(())
}

fn extra_term(scenario: &Scenario, opts: &Options, units: UnitSystem) -> Result<Report> {
    let grid = points(scenario, false)?;
    let base = PlanarScenario::new(halfspace(scenario)?, scenario.gap.clone(), grid[0].0, grid[0].1)?;
    let tol = opts.tol.or(scenario.tol).unwrap_or(DEFAULT_EXTRA_TOL);
    let n_cap = scenario.n_cap.unwrap_or(DEFAULT_N_CAP);
    let engine = LifshitzEngine::default();
    let columns = vec![
        Column::with("d", Dimension::Length),
        Column::with("T", Dimension::Temperature),
        Column::with("value_real", Dimension::EnergyPerArea),
        Column::with("value_imag_part", Dimension::EnergyPerArea),
        Column::with("abs_error", Dimension::EnergyPerArea),
        Column::with("remainder_estimate", Dimension::EnergyPerArea),
        Column::with("free_energy", Dimension::EnergyPerArea),
        Column::plain("n_series_terms"),
        Column::plain("principal_value_crossings"),
        Column::plain("quad_evals"),
    ];
    Ok(tabulate(Command::ExtraTerm, columns, units, &grid, |d, t| {
        let s = base.with_separation(d).with_temperature(t);
        let x = engine.extra_term(&s, tol, n_cap).map_err(|e| e.to_string())?;
        let fe = engine.free_energy(&s, tol.min(1e-8)).map_err(|e| e.to_string())?;
        let row = vec![
            f(d),
            f(t),
            f(x.value_real),
            f(x.value_imag_part),
            f(x.abs_error),
            f(x.remainder_estimate),
            f(fe.value),
            n(x.n_series_terms),
            n(usize::from(x.principal_value_crossings)),
            n(x.quad_evals),
        ];
        Ok((row, json!({ "sweep_var": sweep_var(scenario, d, t), "result": x })))
    }))
}

fn gap_params(scenario: &Scenario, d: f64, t: f64) -> lifshitz_core::Result<PlasmaGapParams> {
    match scenario.screening {
        Screening::None => PlasmaGapParams::vacuum(d, t),
        Screening::Given(k) => PlasmaGapParams::with_kappa(d, t, k),
        Screening::PairDensity => PlasmaGapParams::from_pair_density(d, t),
    }
}

fn plasma_gap(scenario: &Scenario, opts: &Options, units: UnitSystem) -> Result<Report> {
    if scenario.halfspace.is_some() {
        bail!("plasma-gap models ideal plates; remove [materials] halfspace");
    }
    let grid = points(scenario, false)?;
    let tol = opts.tol.or(scenario.tol).unwrap_or(DEFAULT_TOL);
    let columns = vec![
        Column::with("d", Dimension::Length),
        Column::with("T", Dimension::Temperature),
        Column::plain("kappa_pl_per_m"),
        Column::with("free_energy", Dimension::EnergyPerArea),
        Column::with("abs_error", Dimension::EnergyPerArea),
        Column::with("expansion_n0", Dimension::EnergyPerArea),
        Column::with("expansion_n_pos", Dimension::EnergyPerArea),
        Column::with("vacuum_casimir", Dimension::EnergyPerArea),
        Column::with("vacuum_t3", Dimension::EnergyPerArea),
        Column::with("vacuum_t4", Dimension::EnergyPerArea),
        Column::plain("x"),
        Column::plain("n_terms"),
    ];
    Ok(tabulate(Command::PlasmaGap, columns, units, &grid, |d, t| {
        let p = gap_params(scenario, d, t).map_err(|e| e.to_string())?;
        let r = screened_free_energy(&p, tol).map_err(|e| e.to_string())?;
        let (n0, npos) = screened_expansion(&p);
        let (c, t3, t4) = vacuum_gap_expansion(d, t).map_err(|e| e.to_string())?;
        let row = vec![
            f(d),
            f(t),
            f(p.kappa_pl),
            f(r.value),
            f(r.abs_error),
            f(n0),
            f(npos),
            f(c),
            f(t3),
            f(t4),
            f(p.thermal_ratio()),
            n(r.n_terms_used),
        ];
        Ok((row, json!({ "sweep_var": sweep_var(scenario, d, t), "params": p, "result": r })))
    }))
}

fn resonance(scenario: &Scenario, opts: &Options, units: UnitSystem) -> Result<Report> {
    let pol = scenario
        .atom
        .ok_or_else(|| anyhow!("resonance needs [materials] atom_alpha0_m3"))?;
    let grid = points(scenario, false)?;
    let tol = opts.tol.or(scenario.tol).unwrap_or(DEFAULT_TOL);
    let sign = scenario.atom_sign;
    let columns = vec![
        Column::with("d", Dimension::Length),
        Column::with("U_series", Dimension::Energy),
        Column::with("U_closed", Dimension::Energy),
        Column::with("U_n0", Dimension::Energy),
        Column::plain("x"),
        Column::with("T", Dimension::Temperature),
        Column::with("U_series_error", Dimension::Energy),
        Column::plain("n_terms"),
    ];
    Ok(tabulate(Command::Resonance, columns, units, &grid, |d, t| {
        let q = ResonanceQuery::new(d, t, sign).map_err(|e| e.to_string())?;
        let series = resonance_series(&q, &pol, tol).map_err(|e| e.to_string())?;
        let closed = resonance_closed_form(&q, pol.alpha0).map_err(|e| e.to_string())?;
        let n0 = resonance_n0(d, t, pol.alpha0, sign).map_err(|e| e.to_string())?;
        let row = vec![
            f(d),
            f(series.value),
            f(closed),
            f(n0),
            f(q.thermal_ratio()),
            f(t),
            f(series.abs_error),
            n(series.n_terms),
        ];
        Ok((row, json!({ "sweep_var": sweep_var(scenario, d, t), "series": series, "closed": closed, "n0": n0 })))
    }))
}

fn nuclear(scenario: &Scenario, opts: &Options) -> Result<Report> {
    if !opts.demo_acknowledge {
        bail!("nuclear-demo prints illustrative numbers only ({DEMO_DISCLAIMER}); pass --demo-acknowledge to run it");
    }
    if opts.units == Some(UnitSystem::Si) {
        bail!("nuclear-demo reports in natural units only");
    }
    let grid = points(scenario, false)?;
    let kappa = match scenario.screening {
        Screening::Given(k) => Some(k),
        Screening::None | Screening::PairDensity => None,
    };
    let columns = vec![
        Column::plain("d_fm"),
        Column::plain("T_MeV"),
        Column::plain("kappa_per_fm"),
        Column::plain("term_n0_MeV_per_fm2"),
        Column::plain("term_n_pos_MeV_per_fm2"),
        Column::plain("term_n0_MeV"),
        Column::plain("term_n_pos_MeV"),
    ];
    let mut report = tabulate(Command::NuclearDemo, columns, UnitSystem::NaturalNuclear, &grid, |d, t| {
        let r = nuclear_demo(d / 1e-15, t, kappa).map_err(|e| e.to_string())?;
        let row = vec![
            f(r.d_fm),
            f(r.temperature_mev),
            f(r.kappa_per_fm),
            f(r.term_n0_mev_per_fm2),
            f(r.term_n_pos_mev_per_fm2),
            f(r.term_n0_mev),
            f(r.term_n_pos_mev),
        ];
        Ok((row, serde_json::to_value(&r).map_err(|e| e.to_string())?))
    });
    report.table.preamble.push(DEMO_DISCLAIMER.to_string());
    Ok(report)
}

