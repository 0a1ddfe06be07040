//! Cartesian parameter sweeps over any other subcommand.

use clap::Parser;
use rayon::prelude::*;

use satnr_core::report::{Cell, Table};
use satnr_core::scenario::{ScenarioConfig, SCENARIO_KEYS};

use crate::{execute, Cli, CliError, Command, SweepArgs};

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<String>,
}

/// `name=v1,v2,...` or `name=start:stop:step` (inclusive of `stop`).
pub fn parse_axis(arg: &str) -> Result<Axis, CliError> {
    let (name, rhs) = arg
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("--vary `{arg}`: expected name=values")))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(CliError::Usage(format!("--vary `{arg}`: empty name")));
    }
    let parts: Vec<&str> = rhs.split(':').collect();
    let values = match parts.as_slice() {
        [start, stop, step] => {
            let num = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| CliError::Usage(format!("--vary `{arg}`: {e}")))
            };
            let (a, b, d) = (num(start)?, num(stop)?, num(step)?);
            if !(d > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
                return Err(CliError::Usage(format!("--vary `{arg}`: bad range")));
            }
            let n = ((b - a) / d * (1.0 + 1e-12)).floor() as usize;
            (0..=n).map(|i| (a + i as f64 * d).to_string()).collect()
        }
        [list] => list
            .split(',')
            .map(|v| v.trim().to_string())
            .filter(|v| !v.is_empty())
            .collect::<Vec<_>>(),
        _ => return Err(CliError::Usage(format!("--vary `{arg}`: bad range"))),
    };
    if values.is_empty() {
        return Err(CliError::Usage(format!("--vary `{arg}`: no values")));
    }
    Ok(Axis {
        name: name.to_string(),
        values,
    })
}

fn cartesian(axes: &[Axis]) -> Vec<Vec<&str>> {
    let mut out: Vec<Vec<&str>> = vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v.as_str());
                    p
                })
            })
            .collect();
    }
    out
}

fn run_point(base: &ScenarioConfig, axes: &[Axis], fixed: &[String], point: &[&str]) -> Result<Table, CliError> {
    let mut scenario = *base;
    let mut argv = vec!["satnr".to_string()];
    argv.extend(fixed.iter().cloned());
    for (axis, value) in axes.iter().zip(point) {
        if SCENARIO_KEYS.contains(&axis.name.as_str()) {
            let v: f64 = value
                .parse()
                .map_err(|e| CliError::Usage(format!("{} = {value}: {e}", axis.name)))?;
            scenario.set(&axis.name, v);
        } else {
            argv.push(format!("--{}", axis.name.replace('_', "-")));
            argv.push(value.to_string());
        }
    }
    scenario.validate()?;
    let cli = Cli::try_parse_from(&argv).map_err(|e| CliError::Usage(e.render().to_string()))?;
    if matches!(cli.command, Command::Sweep(_)) {
        return Err(CliError::Usage("sweeps do not nest".into()));
    }
    Ok(execute(&cli.command, &scenario)?.table)
}

/// Runs every grid point and stacks the result tables, parameter columns
/// first. Rows are sorted by the input tuple, whatever the thread count.
pub fn run(scenario: &ScenarioConfig, args: &SweepArgs) -> Result<Table, CliError> {
    let axes = args.vary.iter().map(|s| parse_axis(s)).collect::<Result<Vec<_>, _>>()?;
    for (i, a) in axes.iter().enumerate() {
        if axes[..i].iter().any(|b| b.name == a.name) {
            return Err(CliError::Usage(format!("`{}` varied twice", a.name)));
        }
    }
    let mut points = cartesian(&axes);
    points.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| match (x.parse::<f64>(), y.parse::<f64>()) {
                (Ok(x), Ok(y)) => x.total_cmp(&y),
                _ => x.cmp(y),
            })
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let tables: Vec<Table> = pool.install(|| {
        points
            .par_iter()
            .map(|p| run_point(scenario, &axes, &args.command, p))
            .collect::<Result<_, _>>()
    })?;

    // a varied input the subcommand also echoes appears once
    let keep: Vec<usize> = (0..tables[0].columns.len())
        .filter(|&i| !axes.iter().any(|a| a.name == tables[0].columns[i]))
        .collect();
    let mut columns: Vec<String> = axes.iter().map(|a| a.name.clone()).collect();
    columns.extend(keep.iter().map(|&i| tables[0].columns[i].clone()));
    let mut out = Table::new(columns);
    for (point, table) in points.iter().zip(&tables) {
        for row in &table.rows {
            let mut cells: Vec<Cell> = point
                .iter()
                .map(|v| match v.parse::<f64>() {
                    Ok(x) => Cell::Float(x),
                    Err(_) => Cell::from(*v),
                })
                .collect();
            cells.extend(keep.iter().map(|&i| row[i].clone()));
            out.push(cells);
        }
    }
    Ok(out)
}
