//! The four subcommand runners: each one computes with `boxgas-core`,
//! assembles a [`CsvTable`] per output file, and writes deterministic
//! artifacts into the output directory.

use std::f64::consts::LN_2;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use boxgas_core::{
    diagonal_distribution, diagonal_profile, dynamics_movie, se_curves, select_n_max,
    sweep_ratio, thermal_reference, thermal_support, DephasingModel, TrapConfig, TrapVariant,
};

use crate::config::{RunConfig, Subcmd, DYNAMICS_WINDOWS};
use crate::plot::{plot_script, PlotKind};
use crate::table::{temp_label, ColumnKind, CsvTable};

/// Result of one subcommand run: the files written.
pub struct RunSummary {
    pub files: Vec<PathBuf>,
}

pub fn run(cfg: &RunConfig) -> Result<RunSummary> {
    std::fs::create_dir_all(&cfg.out)
        .with_context(|| format!("creating output directory {}", cfg.out.display()))?;
    let tables = match cfg.subcommand {
        Subcmd::EntropySweep => vec![entropy_sweep_table(cfg)?],
        Subcmd::Distribution => distribution_tables(cfg)?,
        Subcmd::Dynamics => dynamics_tables(cfg)?,
        Subcmd::SeCurve => vec![se_curve_table(cfg)?],
    };
    let mut files = Vec::new();
    for (table, plot_kind) in tables {
        files.push(table.write_to(&cfg.out)?);
        if cfg.emit_plots {
            let plot_name = format!("{}.plot", table.name.trim_end_matches(".csv"));
            let path = cfg.out.join(&plot_name);
            if let Err(e) = std::fs::write(&path, plot_script(plot_kind, &table.name)) {
                eprintln!("warning: plot script {} not written: {e}", path.display());
            } else {
                files.push(path);
            }
        }
    }
    Ok(RunSummary { files })
}

fn provenance(cfg: &RunConfig, file: &str, diagnostics: &[String]) -> Vec<String> {
    let mut lines = vec![format!("boxgas {} | {}", env!("CARGO_PKG_VERSION"), file)];
    lines.push("config-echo-begin".to_string());
    lines.extend(cfg.echo_lines());
    lines.push("config-echo-end".to_string());
    for d in diagnostics {
        lines.push(format!("diagnostic: {d}"));
    }
    lines
}

fn base_trap(cfg: &RunConfig) -> Result<TrapConfig> {
    Ok(TrapConfig::new(cfg.length, cfg.mass, cfg.temperature)?)
}

/// `fig1b.csv`: entropy change of both expansion processes vs
/// `L/lambda_T`, with the classical `ln 2` reference column.
fn entropy_sweep_table(cfg: &RunConfig) -> Result<(CsvTable, PlotKind)> {
    let sweep = sweep_ratio(&base_trap(cfg)?, &cfg.ratios, cfg.n_max)?;
    if sweep.ds_fe.iter().all(|v| v.is_nan()) {
        bail!("entropy sweep failed at every grid point");
    }
    let mut table = CsvTable::new(
        "fig1b.csv",
        vec![
            ("ratio", ColumnKind::Value),
            ("delta_s_fe", ColumnKind::Value),
            ("delta_s_iso", ColumnKind::Value),
            ("s_classical", ColumnKind::Value),
        ],
    );
    table.provenance = provenance(cfg, "fig1b.csv", &sweep.meta.diagnostics);
    for i in 0..sweep.axis.len() {
        table.push_row(vec![sweep.axis[i], sweep.ds_fe[i], sweep.ds_iso[i], LN_2]);
    }
    Ok((table, PlotKind::EntropySweep))
}

/// `fig2_T{T}.csv`: occupation distribution vs the thermally shaped
/// reference envelope, one file per temperature.
fn distribution_tables(cfg: &RunConfig) -> Result<Vec<(CsvTable, PlotKind)>> {
    let mut out = Vec::new();
    for &t in &cfg.temps {
        let trap = TrapConfig::new(cfg.length, cfg.mass, t)?;
        let n = cfg.n_max.unwrap_or_else(|| select_n_max(&trap));
        let dist = diagonal_distribution(&trap, n)?;
        let name = format!("fig2_T{}.csv", temp_label(t));
        let mut diagnostics = Vec::new();
        let mut table = CsvTable::new(
            name.clone(),
            vec![
                ("m", ColumnKind::Index),
                ("d_m", ColumnKind::Value),
                ("thermal_reference", ColumnKind::Value),
            ],
        );
        for m in 1..=dist.len() {
            let mut reference = thermal_reference(&trap, m)?;
            if !reference.is_finite() {
                diagnostics.push(format!(
                    "thermal reference diverges at m = {m} (below the thermal ground level); \
                     recorded as nan"
                ));
                reference = f64::NAN;
            }
            table.push_row(vec![m as f64, dist.occupation(m), reference]);
        }
        table.provenance = provenance(cfg, &name, &diagnostics);
        out.push((table, PlotKind::Distribution));
    }
    Ok(out)
}

/// `fig3.csv` (long-format `T,t,x,p` grid over the figure windows) plus
/// `fig3_steady_T{T}.csv` (steady dephased profile vs thermal
/// equilibrium) per temperature.
fn dynamics_tables(cfg: &RunConfig) -> Result<Vec<(CsvTable, PlotKind)>> {
    let mut out = Vec::new();
    let mut grid_table = CsvTable::new(
        "fig3.csv",
        vec![
            ("T", ColumnKind::Index),
            ("t", ColumnKind::Value),
            ("x", ColumnKind::Value),
            ("p", ColumnKind::Value),
        ],
    );
    let mut grid_diagnostics = Vec::new();
    let mut steady_tables = Vec::new();
    for &t in &cfg.temps {
        let trap = TrapConfig::new(cfg.length, cfg.mass, t)?;
        let gamma_physical = cfg.gamma * trap.alpha() / trap.hbar();
        let model = DephasingModel::uniform(gamma_physical)?;
        let grid =
            dynamics_movie(&trap, &model, &DYNAMICS_WINDOWS, cfg.nx, cfg.nt, cfg.n_max)?;
        for w in grid.warnings() {
            grid_diagnostics.push(format!("T = {t}: {w}"));
        }
        for (j, &tau) in grid.times().iter().enumerate() {
            for (i, &x) in grid.x().iter().enumerate() {
                grid_table.push_row(vec![t, tau, x, grid.value(i, j)]);
            }
        }

        // steady state from the diagonal distribution at its own (finer)
        // truncation; equilibrium from the full-trap thermal occupations
        let n_diag = select_n_max(&trap);
        let dist = diagonal_distribution(&trap, n_diag)?;
        let steady = diagonal_profile(&trap, dist.probabilities(), grid.x())?;
        let equilibrium =
            diagonal_profile(&trap, &thermal_support(&trap, TrapVariant::Full), grid.x())?;
        let name = format!("fig3_steady_T{}.csv", temp_label(t));
        let mut steady_table = CsvTable::new(
            name.clone(),
            vec![
                ("x", ColumnKind::Value),
                ("p_steady", ColumnKind::Value),
                ("p_equilibrium", ColumnKind::Value),
            ],
        );
        steady_table.provenance = provenance(cfg, &name, &[]);
        for (i, &x) in grid.x().iter().enumerate() {
            steady_table.push_row(vec![x, steady[i], equilibrium[i]]);
        }
        steady_tables.push((steady_table, PlotKind::SteadyProfile));
    }
    grid_table.provenance = provenance(cfg, "fig3.csv", &grid_diagnostics);
    out.push((grid_table, PlotKind::DynamicsGrid));
    out.extend(steady_tables);
    Ok(out)
}

/// `fig4.csv`: entropy-energy relation of the free-expansion steady state
/// vs full-trap equilibrium over the temperature grid.
fn se_curve_table(cfg: &RunConfig) -> Result<(CsvTable, PlotKind)> {
    let base = TrapConfig::new(cfg.length, cfg.mass, 1.0)?;
    let (fe, eq) = se_curves(&base, &cfg.temps, cfg.n_max)?;
    let mut table = CsvTable::new(
        "fig4.csv",
        vec![
            ("T", ColumnKind::Value),
            ("e_fe", ColumnKind::Value),
            ("s_fe", ColumnKind::Value),
            ("e_eq", ColumnKind::Value),
            ("s_eq", ColumnKind::Value),
        ],
    );
    table.provenance = provenance(cfg, "fig4.csv", &[]);
    table.provenance.push(
        "reference: the free-expansion entropy approaches the constant 1.035 k_B as T -> 0 \
         (energies in units of alpha, entropies in units of k_B)"
            .to_string(),
    );
    for i in 0..cfg.temps.len() {
        table.push_row(vec![
            cfg.temps[i],
            fe.energy[i],
            fe.entropy[i],
            eq.energy[i],
            eq.entropy[i],
        ]);
    }
    Ok((table, PlotKind::SECurve))
}
