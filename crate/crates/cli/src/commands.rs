use std::io::Write;
use std::path::{Path, PathBuf};

use weave_core::{
    admissible, calibrate as fit, gamma, penetration_thresholds, phi, plateau_free, plateau_intervals,
    solve_hdv, solve_social_optimum, sweep_heterogeneous, sweep_penetration, ue_so_gap,
    CalibrationOptions, Observation, PlateauInterval, Population, RampConfig,
};

use crate::error::CliError;
use crate::format::{csv, human};
use crate::scenario::{Coefficients, Scenario};
use crate::svg::{self, Marker};
use crate::{dataset, Format, Mode};

type Out<'a> = &'a mut dyn Write;

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

pub const SOLVE_HEADER: &str = "phi,gamma,case,x1s_ue,j_ue,x1s_so,j_so,gap,admissible";
pub const STACKELBERG_HEADER: &str = "p,x1s_total,q_s,j_soc,j_cav,regime";
pub const SVO_HEADER: &str = "p,x1s_total,active_type,j_soc,regime";
pub const THRESHOLDS_HEADER: &str = "p1,p2";
pub const PLATEAUS_HEADER: &str = "k,name,class,chi,p_lo,p_hi,lo_closed,hi_closed";

pub fn solve(out: Out, path: &Path, format: Format) -> Result<(), CliError> {
    let cfg = Scenario::load(path)?.ramp()?;
    let root = phi(&cfg)?;
    let g = gamma(&cfg)?;
    let ue = solve_hdv(&cfg)?;
    let so = solve_social_optimum(&cfg)?;
    let gap = ue_so_gap(&cfg)?;
    let ok = admissible(&cfg);
    match format {
        Format::Csv => {
            writeln!(out, "{SOLVE_HEADER}")?;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                csv(root),
                csv(g),
                ue.case.label(),
                csv(ue.x1s_star),
                csv(gap.j_ue),
                csv(so.x1s_so),
                csv(gap.j_so),
                csv(gap.gap),
                ok
            )
            ?;
        }
        Format::Human => {
            let rows = [
                ("phi", human(root)),
                ("gamma", human(g)),
                ("case", ue.case.label().to_string()),
                ("x1s_ue", human(ue.x1s_star)),
                ("j_ue", human(gap.j_ue)),
                ("x1s_so", human(so.x1s_so)),
                ("j_so", human(gap.j_so)),
                ("gap", human(gap.gap)),
                ("admissible", yes_no(ok).to_string()),
            ];
            for (k, v) in rows {
                writeln!(out, "{k:<11} {v}")?;
            }
        }
    }
    Ok(())
}

pub fn sweep(out: Out, path: &Path, mode: Mode, csv_path: Option<&Path>, svg_path: Option<&Path>) -> Result<(), CliError> {
    let scenario = Scenario::load(path)?;
    let cfg = scenario.ramp()?;
    let grid = scenario.grid()?;
    let (table, title, points, markers) = match mode {
        Mode::Stackelberg => stackelberg_table(&cfg, &grid)?,
        Mode::Svo => svo_table(&cfg, &scenario.population()?, &grid)?,
    };
    match csv_path {
        Some(p) => write_file(p, &table)?,
        None => out.write_all(table.as_bytes())?,
    }
    if let Some(p) = svg_path {
        write_file(p, &svg::chart(title, &points, &markers))?;
    }
    Ok(())
}

type Table = (String, &'static str, Vec<(f64, f64)>, Vec<Marker>);

fn within(grid: &[f64], p: f64) -> bool {
    grid[0] <= p && p <= grid[grid.len() - 1]
}

fn stackelberg_table(cfg: &RampConfig, grid: &[f64]) -> Result<Table, CliError> {
    let t = penetration_thresholds(cfg)?;
    let rows = sweep_penetration(cfg, grid)?;
    let mut s = format!("{STACKELBERG_HEADER}\n");
    for r in &rows {
        let x = &r.solution;
        s += &format!(
            "{},{},{},{},{},{}\n",
            csv(x.p),
            csv(x.x1s_total),
            csv(x.q_s_star),
            csv(x.j_soc),
            csv(r.j_cav),
            x.regime.label()
        );
    }
    let points = rows.iter().map(|r| (r.solution.p, r.solution.j_soc)).collect();
    let markers = [(t.p1, "p1"), (t.p2, "p2")]
        .into_iter()
        .filter(|(p, _)| within(grid, *p))
        .map(|(p, label)| Marker {
            p,
            label: label.into(),
        })
        .collect();
    Ok((s, "Stackelberg sweep", points, markers))
}

fn svo_table(cfg: &RampConfig, pop: &Population, grid: &[f64]) -> Result<Table, CliError> {
    let rows = sweep_heterogeneous(cfg, pop, grid)?;
    let intervals = plateau_intervals(cfg, pop)?;
    let mut s = format!("{SVO_HEADER}\n");
    for r in &rows {
        let (active, regime) = match r.active_type {
            Some(k) => (k as i64, "plateau"),
            None => (-1, "transition"),
        };
        s += &format!("{},{},{},{},{}\n", csv(r.p), csv(r.x1s_star), active, csv(r.j_soc), regime);
    }
    let points = rows.iter().map(|r| (r.p, r.j_soc)).collect();
    let mut markers = Vec::new();
    for iv in &intervals {
        for p in [iv.p_lo, iv.p_hi] {
            if within(grid, p) && !markers.iter().any(|m: &Marker| m.p == p) {
                markers.push(Marker {
                    p,
                    label: format!("k={}", pop.type_name(iv.k)),
                });
            }
        }
    }
    Ok((s, "SVO sweep", points, markers))
}

pub fn thresholds(out: Out, path: &Path, format: Format) -> Result<(), CliError> {
    let cfg = Scenario::load(path)?.ramp()?;
    let t = penetration_thresholds(&cfg)?;
    match format {
        Format::Csv => writeln!(out, "{THRESHOLDS_HEADER}\n{},{}", csv(t.p1), csv(t.p2))?,
        Format::Human => {
            writeln!(out, "p1 {}\np2 {}", human(t.p1), human(t.p2))?;
            if t.p2 > 1.0 {
                writeln!(out, "optimum unreachable: p2 > 1")?;
            }
        }
    }
    Ok(())
}

pub fn plateaus(out: Out, path: &Path, range: Option<(f64, f64)>, format: Format) -> Result<(), CliError> {
    let scenario = Scenario::load(path)?;
    let cfg = scenario.ramp()?;
    let pop = scenario.population()?;
    let intervals = plateau_intervals(&cfg, &pop)?;
    let verdict = match range {
        Some((lo, hi)) => Some(plateau_free(&cfg, &pop, lo, hi).map_err(CliError::from_input)?),
        None => None,
    };
    let describe = |iv: &PlateauInterval| {
        let ty = pop.get(iv.k).expect("interval type exists");
        (pop.type_name(iv.k), ty.class.label())
    };
    match format {
        Format::Csv => {
            // With a range, the rows are the clipped overlaps.
            let rows = verdict.as_ref().map_or(&intervals, |(_, blocking)| blocking);
            writeln!(out, "{PLATEAUS_HEADER}")?;
            for iv in rows {
                let (name, class) = describe(iv);
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    iv.k,
                    name,
                    class,
                    csv(iv.chi),
                    csv(iv.p_lo),
                    csv(iv.p_hi),
                    iv.lo_closed,
                    iv.hi_closed
                )
                ?;
            }
        }
        Format::Human => {
            writeln!(out, "{:<3} {:<12} {:<5} {:<10} interval", "k", "name", "class", "chi")?;
            for iv in &intervals {
                let (name, class) = describe(iv);
                writeln!(out, "{:<3} {:<12} {:<5} {:<10} {}", iv.k, name, class, human(iv.chi), bracket(iv))
                    ?;
            }
            if let Some((free, blocking)) = &verdict {
                if *free {
                    writeln!(out, "free")?;
                } else {
                    let names: Vec<String> = blocking.iter().map(|iv| format!("k={}", describe(iv).0)).collect();
                    writeln!(out, "blocked by {}", names.join(", "))?;
                }
            }
        }
    }
    Ok(())
}

fn bracket(iv: &PlateauInterval) -> String {
    format!(
        "{}{}, {}{}",
        if iv.lo_closed { '[' } else { '(' },
        human(iv.p_lo),
        human(iv.p_hi),
        if iv.hi_closed { ']' } else { ')' }
    )
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub struct CalibrateArgs {
    pub dataset: PathBuf,
    pub scenario: Option<PathBuf>,
    pub seed: u64,
    pub budget: usize,
    pub free_unit_costs: bool,
    pub mper: bool,
    pub scenario_out: Option<PathBuf>,
}

pub fn calibrate(out: Out, args: &CalibrateArgs) -> Result<(), CliError> {
    let (mode, data) = dataset::load(&args.dataset)?;
    let base = match &args.scenario {
        Some(p) => Scenario::load(p)?,
        None => Scenario {
            flows: None,
            coefficients: Coefficients::default(),
            population: Vec::new(),
            sweep: None,
        },
    };
    let mut options = CalibrationOptions {
        budget: args.budget,
        seed: args.seed,
        ..CalibrationOptions::default()
    };
    if args.free_unit_costs {
        options = options.with_free_unit_costs();
    }
    let result = fit(&data, &base.coefficients.resolve(), &options)?;

    let mode = match mode {
        dataset::Mode::Raw => "raw",
        dataset::Mode::Normalized => "normalized",
    };
    writeln!(out, "dataset      {} ({mode}, {} observations)", args.dataset.display(), data.len())?;
    let names = weave_core::CostCoefficients::FIELD_NAMES;
    for (i, (name, v)) in names.iter().zip(result.coeffs.to_array()).enumerate() {
        let tag = if options.free[i] { "" } else { "  (fixed)" };
        writeln!(out, "{name:<12} {}{tag}", human(v))?;
    }
    writeln!(out, "objective    {}", human(result.objective))?;
    match result.mper {
        Some(m) => writeln!(out, "mper         {}%", human(m))?,
        None => {
            if let Some(i) = data.iter().position(|o| o.x1s_observed == 0.0) {
                eprintln!("warning: observation {i} has zero observed steadfast share; MPER omitted");
            }
            writeln!(out, "mper         omitted")?;
        }
    }
    writeln!(out, "count_score  {}/{}", result.count_score, data.len())?;
    writeln!(out, "evaluations  {}", result.iterations)?;
    writeln!(out, "converged    {}", yes_no(result.converged))?;
    if args.mper {
        per_observation(out, &data, &result.coeffs)?;
    }

    if let Some(p) = &args.scenario_out {
        let fitted = Scenario {
            coefficients: Coefficients::explicit(&result.coeffs),
            ..base
        };
        write_file(p, &fitted.to_toml())?;
    }
    if !result.converged {
        return Err(CliError::not_converged(format!(
            "no convergence within {} evaluations",
            args.budget
        )));
    }
    Ok(())
}

fn per_observation(out: Out, data: &[Observation], coeffs: &weave_core::CostCoefficients) -> Result<(), CliError> {
    writeln!(out, "{:<4} {:<10} {:<10} rel_error", "i", "observed", "predicted")?;
    for (i, obs) in data.iter().enumerate() {
        let cfg = RampConfig::new(obs.flows, *coeffs)?;
        let predicted = solve_hdv(&cfg)?.x1s_star;
        let rel = if obs.x1s_observed == 0.0 {
            "n/a".to_string()
        } else {
            format!("{}%", human(100.0 * ((obs.x1s_observed - predicted) / obs.x1s_observed).abs()))
        };
        writeln!(out, "{i:<4} {:<10} {:<10} {rel}", human(obs.x1s_observed), human(predicted))?;
    }
    Ok(())
}
