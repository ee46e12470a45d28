//! One runner per subcommand: read typed keys from the configuration,
//! drive the library, and emit checks plus data files.

use crate::config::Config;
use crate::output::{boolean, int, num, plot_file, CsvTable, OutputFile};
use anyhow::{anyhow, Result};
use std::sync::Arc;
use symgrad::identities::{
    admissible_range, claim_2d_search, identity_battery, inequality_battery,
    lowdim_counterexample_search, IdentityBatteryConfig,
};
use symgrad::orlicz::{section_battery, BatteryConfig, NonlinearityLaw};
use symgrad::probe::{
    estimate_stability_sweep, korn_poincare_ratios, nikolskii_alpha, nikolskii_seminorm,
    singular_threshold_scan, strain_nodal_field, BallRegion, ThresholdClass,
};
use symgrad::report::{CheckRecord, CheckSet};
use symgrad::solver::{
    continuation_solve_from, convergence_study, poly_spatial_fn, zero_spatial_fn,
    DirichletProblem, SolverConfig, StructuredGrid,
};
use symgrad::tensorfields::PolyVectorField;

pub struct CommandOutput {
    pub checks: CheckSet,
    pub files: Vec<OutputFile>,
}

fn solver_config(cfg: &Config) -> Result<SolverConfig<f64>> {
    Ok(SolverConfig {
        newton_tol: cfg.get_f64("newton_tol", 1e-10)?,
        max_newton: cfg.get_usize("max_newton", 60)?,
        ls_contraction: cfg.get_f64("ls_contraction", 0.5)?,
        ls_sufficient_decrease: cfg.get_f64("ls_sufficient_decrease", 1e-4)?,
        max_line_search: cfg.get_usize("max_line_search", 40)?,
        quad_order: cfg.get_usize("quad_order", 3)?,
        young_rel_tol: cfg.get_f64("young_rel_tol", 1e-9)?,
        eps_start: cfg.get_f64("eps_start", 1e-1)?,
        eps_factor: cfg.get_f64("eps_factor", 0.5)?,
        eps_floor: cfg.get_f64("eps_floor", 1e-5)?,
    })
}

fn checks_csv(checks: &CheckSet, name: &str) -> OutputFile {
    let mut table = CsvTable::new(&["name", "pass", "margin", "tolerance", "details"]);
    for c in &checks.checks {
        table.row(vec![
            c.name.clone(),
            boolean(c.pass),
            num(c.margin),
            num(c.tolerance),
            format!("\"{}\"", c.details.replace('"', "'")),
        ]);
    }
    table.finish(name)
}

pub fn battery(cfg: &Config) -> Result<CommandOutput> {
    let p_list = cfg.get_f64_list("p_list", &[1.7, 2.0, 3.0])?;
    let eps_list = cfg.get_f64_list("eps_list", &[0.5, 0.1, 0.01])?;
    let battery_cfg = BatteryConfig::<f64> {
        t_log_count: cfg.get_usize("t_log_count", 481)?,
        young_count: cfg.get_usize("young_count", 100)?,
        conv_levels: cfg.get_usize("conv_levels", 10)?,
        sup_radius: cfg.get_f64("sup_radius", 10.0)?,
        ..Default::default()
    };
    let mut checks = CheckSet::default();
    for &p in &p_list {
        let set = section_battery(p, &eps_list, &battery_cfg)?;
        for mut record in set.checks {
            record.name = format!("{}[p={p}]", record.name);
            checks.push(record);
        }
    }
    let files = vec![checks_csv(&checks, "battery")];
    Ok(CommandOutput { checks, files })
}

pub fn identities(cfg: &Config) -> Result<CommandOutput> {
    let p_list = cfg.get_f64_list("p_list", &[1.7, 2.0, 3.0])?;
    let eps_list = cfg.get_f64_list("eps_list", &[0.01, 0.1])?;
    let power_list = cfg.get_f64_list("power_p_list", &[2.0, 2.5, 3.0])?;
    let battery_cfg = IdentityBatteryConfig {
        dims: cfg.get_usize_list("dims", &[2, 3])?,
        degree: cfg.get_usize("degree", 3)?,
        fields_per_case: cfg.get_usize("fields", 10)?,
        points_per_field: cfg.get_usize("points", 10)?,
        seed: cfg.get_u64("seed", 0)?,
        strain_margin: cfg.get_f64("strain_margin", 0.1)?,
        residual_tol: cfg.get_f64("residual_tol", 1e-9)?,
    };
    let mut laws = Vec::new();
    for &p in &p_list {
        for &eps in &eps_list {
            laws.push(NonlinearityLaw::regularized(p, eps)?);
        }
    }
    for &p in &power_list {
        laws.push(NonlinearityLaw::pure_power(p)?);
    }
    let (reports, checks) = identity_battery::<f64>(&laws, &battery_cfg)?;
    let mut table = CsvTable::new(&[
        "identity",
        "law",
        "field_class",
        "points",
        "max_residual",
        "max_term_magnitudes",
    ]);
    for r in &reports {
        let terms: Vec<String> =
            r.term_maxima.iter().map(|v| format!("{v:.3e}")).collect();
        table.row(vec![
            r.identity.clone(),
            r.law.clone(),
            r.field_class.clone(),
            int(r.points),
            num(r.max_residual),
            format!("\"{}\"", terms.join(" ")),
        ]);
    }
    Ok(CommandOutput { checks, files: vec![table.finish("identities")] })
}

pub fn inequalities(cfg: &Config) -> Result<CommandOutput> {
    let samples = cfg.get_usize("samples", 10_000)?;
    let claim_samples = cfg.get_usize("claim_samples", 100_000)?;
    let seed = cfg.get_u64("seed", 0)?;
    let undershoot = cfg.get_f64("undershoot", 0.05)?;
    let mut checks = inequality_battery::<f64>(samples, seed)?;
    checks.push(claim_2d_search::<f64>(claim_samples, seed ^ 1)?);
    for n in 2..=7usize {
        checks.push(lowdim_counterexample_search::<f64>(n, undershoot, samples, seed ^ 2)?);
    }
    let files = vec![checks_csv(&checks, "inequalities")];
    Ok(CommandOutput { checks, files })
}

pub fn table1(cfg: &Config) -> Result<CommandOutput> {
    let n_min = cfg.get_usize("n_min", 2)?;
    let n_max = cfg.get_usize("n_max", 8)?;
    let mut checks = CheckSet::default();
    let mut table = CsvTable::new(&["n", "p_minus", "p_plus"]);
    let known_minus = [1.612, 1.667, 1.691, 1.710, 1.726, 1.739, 1.75];
    let mut previous: Option<(f64, f64)> = None;
    for n in n_min..=n_max {
        let range = admissible_range::<f64>(n).map_err(|e| anyhow!(e.to_string()))?;
        table.row(vec![int(n), num(range.p_minus), num(range.p_plus)]);
        checks.push(
            CheckRecord::new(
                format!("threshold_straddles_two[n={n}]"),
                (2.0 - range.p_minus).min(range.p_plus - 2.0),
                0.0,
            )
            .with_details(format!("p_minus={}, p_plus={}", range.p_minus, range.p_plus)),
        );
        if (2..=8).contains(&n) {
            let expect = known_minus[n - 2];
            checks.push(CheckRecord::new(
                format!("lower_threshold_tabulated[n={n}]"),
                1e-3 - (range.p_minus - expect).abs(),
                0.0,
            ));
            let expect_plus_finite = n >= 8;
            checks.push(CheckRecord::new(
                format!("upper_threshold_kind[n={n}]"),
                if range.p_plus.is_finite() == expect_plus_finite { 1.0 } else { -1.0 },
                0.0,
            ));
        }
        if let Some((prev_minus, prev_plus)) = previous {
            if n > 3 {
                checks.push(CheckRecord::new(
                    format!("lower_threshold_monotone[n={n}]"),
                    range.p_minus - prev_minus,
                    0.0,
                ));
            }
            if n > 8 {
                checks.push(CheckRecord::new(
                    format!("upper_threshold_monotone[n={n}]"),
                    prev_plus - range.p_plus,
                    0.0,
                ));
            }
        }
        previous = Some((range.p_minus, range.p_plus));
    }
    Ok(CommandOutput { checks, files: vec![table.finish("table1")] })
}

fn named_field(name: &str) -> Result<PolyVectorField<f64>> {
    match name {
        "shear" => Ok(PolyVectorField::singular_shear(2).map_err(|e| anyhow!(e.to_string()))?),
        "smooth" => Ok(symgrad::probe::smooth_benchmark_field::<f64>()),
        "affine" => {
            let m = vec![vec![0.5, 0.25], vec![0.25, -0.5]];
            Ok(PolyVectorField::affine(&m, &[0.0, 0.0]).map_err(|e| anyhow!(e.to_string()))?)
        }
        other => Err(anyhow!(
            "unknown problem preset {other:?} (expected shear|smooth|affine)"
        )),
    }
}

pub fn solve(cfg: &Config) -> Result<CommandOutput> {
    let preset = cfg.get_str("problem", "shear");
    let p = cfg.get_f64("p", 3.0)?;
    let cells = cfg.get_usize("cells", 16)?;
    let half_width = cfg.get_f64("half_width", 1.0)?;
    let config = solver_config(cfg)?;
    let exact = named_field(&preset)?;
    let grid = Arc::new(StructuredGrid::symmetric_box(2, half_width, cells)?);
    let target = NonlinearityLaw::pure_power(p)?;
    // presets are exact solutions of the singular law with zero load
    let rhs = if preset == "smooth" {
        symgrad::solver::manufactured_rhs(&target, &exact)
    } else {
        zero_spatial_fn()
    };
    let problem = DirichletProblem::new(
        NonlinearityLaw::regularized(p, config.eps_start)?,
        grid,
        rhs,
        poly_spatial_fn(&exact),
    )?;
    // `boundary` warm-starts from the datum interpolant; `zero` forces the
    // first stage to iterate from scratch
    let initial = cfg.get_str("initial", "boundary");
    let start = match initial.as_str() {
        "boundary" => None,
        "zero" => {
            let mut start = symgrad::solver::NodalField::zeros(problem.grid.clone(), 2);
            problem.enforce_boundary(&mut start)?;
            Some(start)
        }
        other => {
            return Err(anyhow!("unknown initial {other:?} (expected boundary|zero)"))
        }
    };
    let outcome = continuation_solve_from(&problem, &config, start)?;
    let mut checks = CheckSet::default();
    let mut table = CsvTable::new(&[
        "stage",
        "eps",
        "iterations",
        "final_residual",
        "final_energy",
    ]);
    for (k, stage) in outcome.stages.iter().enumerate() {
        table.row(vec![
            int(k),
            num(stage.eps),
            int(stage.report.iterations),
            num(stage.report.final_residual),
            num(stage.report.final_energy),
        ]);
        checks.push(
            CheckRecord::new(
                format!("stage_converged[eps={:.3e}]", stage.eps),
                if stage.report.converged { 1.0 } else { -1.0 },
                0.0,
            )
            .with_details(format!("{} Newton steps", stage.report.iterations)),
        );
    }
    let error = outcome
        .final_field()
        .nodal_max_distance(&poly_spatial_fn(&exact))?;
    checks.push(CheckRecord::informational(
        "final_nodal_deviation_from_preset",
        format!("{error:.6e} (informational; the preset solves the singular limit)"),
    ));
    Ok(CommandOutput { checks, files: vec![table.finish("solve")] })
}

pub fn estimate(cfg: &Config) -> Result<CommandOutput> {
    let p_list = cfg.get_f64_list("p_list", &[1.8, 2.0, 2.5])?;
    let cells_list = cfg.get_usize_list("cells_list", &[16, 32, 64])?;
    let box_lo = cfg.get_f64_list("box_lo", &[0.0, 0.0])?;
    let box_hi = cfg.get_f64_list("box_hi", &[1.0, 1.0])?;
    let radius = cfg.get_f64("radius", 0.15)?;
    let center = cfg.get_f64_list("center", &[0.5, 0.5])?;
    let mut config = solver_config(cfg)?;
    config.eps_floor = cfg.get_f64("eps_floor", 1e-3)?;
    let region = BallRegion::new(center, radius);
    let rows = estimate_stability_sweep::<f64>(
        &p_list,
        &cells_list,
        &box_lo,
        &box_hi,
        &region,
        &config,
    )?;
    let mut checks = CheckSet::default();
    let mut table = CsvTable::new(&[
        "p",
        "cells",
        "h",
        "eps_floor",
        "ratio",
        "grad_term",
        "newton_iterations_total",
    ]);
    let mut plots = Vec::new();
    for &p in &p_list {
        let of_p: Vec<_> = rows.iter().filter(|r| r.p == p).collect();
        let ratios: Vec<f64> = of_p.iter().map(|r| r.ratio).collect();
        let grads: Vec<f64> = of_p.iter().map(|r| r.grad_term).collect();
        let spread = |vals: &[f64]| {
            let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().cloned().fold(0.0f64, f64::max);
            if lo > 0.0 {
                hi / lo
            } else {
                f64::INFINITY
            }
        };
        checks.push(
            CheckRecord::new(
                format!("ratio_stable_under_refinement[p={p}]"),
                2.0 - spread(&ratios),
                0.0,
            )
            .with_details(format!("ratios {ratios:?}")),
        );
        checks.push(
            CheckRecord::new(
                format!("gradient_term_bounded[p={p}]"),
                2.0 - spread(&grads),
                0.0,
            )
            .with_details(format!("gradient terms {grads:?}")),
        );
        plots.push(plot_file(
            &format!("estimate_p{}", p),
            &of_p.iter().map(|r| (r.h, r.ratio)).collect::<Vec<_>>(),
        ));
    }
    for r in &rows {
        table.row(vec![
            num(r.p),
            int(r.cells),
            num(r.h),
            num(r.eps_floor),
            num(r.ratio),
            num(r.grad_term),
            int(r.newton_iterations_total),
        ]);
    }
    let mut files = vec![table.finish("estimate")];
    files.extend(plots);
    Ok(CommandOutput { checks, files })
}

pub fn example1(cfg: &Config) -> Result<CommandOutput> {
    let p_list = cfg.get_f64_list("p_list", &[1.4, 1.5, 1.6])?;
    let deltas = cfg.get_f64_list("deltas", &[1e-1, 1e-2, 1e-3, 1e-4])?;
    let half_width = cfg.get_f64("half_width", 1.0)?;
    let dim = cfg.get_usize("dim", 2)?;
    let quad_order = cfg.get_usize("quad_order", 5)?;
    let mut checks = CheckSet::default();
    let mut table = CsvTable::new(&[
        "p",
        "delta",
        "quadrature",
        "analytic",
        "classification",
        "growth_per_decade",
    ]);
    let mut files = Vec::new();
    for &p in &p_list {
        let scan = singular_threshold_scan(p, &deltas, half_width, dim, quad_order)?;
        let label = match scan.classification {
            ThresholdClass::Convergent => "convergent",
            ThresholdClass::Divergent => "divergent",
        };
        let mut worst_rel: f64 = 0.0;
        for row in &scan.rows {
            table.row(vec![
                num(p),
                num(row.delta),
                num(row.quadrature),
                num(row.analytic),
                label.to_string(),
                num(scan.growth_per_decade),
            ]);
            if row.delta >= 1e-3 {
                worst_rel =
                    worst_rel.max((row.quadrature - row.analytic).abs() / row.analytic.abs());
            }
        }
        checks.push(
            CheckRecord::new(
                format!("quadrature_matches_antiderivative[p={p}]"),
                1e-6 - worst_rel,
                0.0,
            )
            .with_details(format!("worst relative deviation {worst_rel:.3e}")),
        );
        checks.push(CheckRecord::informational(
            format!("classification[p={p}]"),
            format!("{label}, growth {:.4} per decade", scan.growth_per_decade),
        ));
        files.push(plot_file(
            &format!("example1_p{}", p),
            &scan.rows.iter().map(|r| (r.delta, r.quadrature)).collect::<Vec<_>>(),
        ));
    }
    files.insert(0, table.finish("example1"));
    Ok(CommandOutput { checks, files })
}

pub fn nikolskii(cfg: &Config) -> Result<CommandOutput> {
    let p = cfg.get_f64("p", 3.0)?;
    let cells_list = cfg.get_usize_list("cells_list", &[32, 64])?;
    let half_width = cfg.get_f64("half_width", 1.0)?;
    let radius = cfg.get_f64("radius", 0.45)?;
    let center = cfg.get_f64_list("center", &[0.0, 0.0])?;
    let quad_order = cfg.get_usize("quad_order", 5)?;
    let law = NonlinearityLaw::pure_power(p)?;
    let alpha = nikolskii_alpha(&law);
    let field = PolyVectorField::<f64>::singular_shear(2)?;
    let region = BallRegion::new(center, radius);
    let mut checks = CheckSet::default();
    let mut table =
        CsvTable::new(&["cells", "alpha", "l1", "seminorm", "norm", "embedding_ratio"]);
    let mut seminorms = Vec::new();
    for &cells in &cells_list {
        let grid = Arc::new(StructuredGrid::symmetric_box(2, half_width, cells)?);
        let strain = strain_nodal_field(&field, grid.clone())?;
        let out = nikolskii_seminorm(&strain, &region, alpha, quad_order)?;
        // empirical embedding ratio against the stress Sobolev norm; the
        // constant is not explicit, so this column is informational
        let stress = symgrad::probe::stress_project_analytic(&law, &field, grid)?;
        let stress_norms = symgrad::probe::ball_norms(&stress.values, &region, quad_order)?;
        let ratio = symgrad::probe::embedding_ratio(&out, &stress_norms);
        table.row(vec![
            int(cells),
            num(out.alpha),
            num(out.l1),
            num(out.seminorm),
            num(out.norm()),
            num(ratio),
        ]);
        seminorms.push(out.seminorm);
    }
    if seminorms.len() >= 2 {
        let a = seminorms[seminorms.len() - 2];
        let b = seminorms[seminorms.len() - 1];
        let change = (b - a).abs() / a.abs().max(1e-300);
        checks.push(
            CheckRecord::new("seminorm_stable_under_refinement", 0.10 - change, 0.0)
                .with_details(format!("relative change {change:.4} between finest grids")),
        );
    }
    checks.push(CheckRecord::informational(
        "embedding_exponent",
        format!("alpha = {alpha} for p = {p}"),
    ));
    Ok(CommandOutput { checks, files: vec![table.finish("nikolskii")] })
}

pub fn convergence(cfg: &Config) -> Result<CommandOutput> {
    let p = cfg.get_f64("p", 2.0)?;
    let eps = cfg.get_f64("eps", 0.25)?;
    let cells_list = cfg.get_usize_list("cells_list", &[8, 16, 32])?;
    let half_width = cfg.get_f64("half_width", 1.0)?;
    let config = solver_config(cfg)?;
    let law = NonlinearityLaw::regularized(p, eps)?;
    let exact = symgrad::probe::smooth_benchmark_field::<f64>();
    let study = convergence_study(
        &law,
        &exact,
        &[-half_width, -half_width],
        &[half_width, half_width],
        &cells_list,
        &config,
    )?;
    let mut table = CsvTable::new(&["p", "eps", "cells", "h", "l2_error", "rate"]);
    for level in &study.levels {
        table.row(vec![
            num(study.p),
            num(study.eps),
            int(level.cells),
            num(level.h),
            num(level.l2_error),
            num(study.rate),
        ]);
    }
    let mut checks = CheckSet::default();
    if p == 2.0 {
        checks.push(
            CheckRecord::new("quadratic_case_rate", study.rate - 1.8, 0.0)
                .with_details(format!("fitted rate {:.4}", study.rate)),
        );
    } else {
        checks.push(CheckRecord::informational(
            "fitted_rate",
            format!("{:.4} (asserted only in the quadratic case)", study.rate),
        ));
    }
    let plot = plot_file(
        "convergence",
        &study.levels.iter().map(|l| (l.h, l.l2_error)).collect::<Vec<_>>(),
    );
    Ok(CommandOutput { checks, files: vec![table.finish("convergence"), plot] })
}

pub fn korn(cfg: &Config) -> Result<CommandOutput> {
    let p = cfg.get_f64("p", 2.0)?;
    let cells = cfg.get_usize("cells", 16)?;
    let samples = cfg.get_usize("samples", 100)?;
    let seed = cfg.get_u64("seed", 0)?;
    let half_width = cfg.get_f64("half_width", 1.0)?;
    let quad_order = cfg.get_usize("quad_order", 3)?;
    let law = if p == 2.0 {
        NonlinearityLaw::pure_power(p)?
    } else {
        NonlinearityLaw::regularized(p, cfg.get_f64("eps", 0.1)?)?
    };
    let grid = Arc::new(StructuredGrid::symmetric_box(2, half_width, cells)?);
    let report = korn_poincare_ratios(grid, &law, samples, seed, quad_order)?;
    let mut table = CsvTable::new(&[
        "samples",
        "max_gradient_ratio",
        "max_identity_defect",
        "max_young_korn_ratio",
        "max_young_poincare_ratio",
    ]);
    table.row(vec![
        int(report.samples),
        num(report.max_gradient_ratio),
        num(report.max_identity_defect),
        num(report.max_young_korn_ratio),
        num(report.max_young_poincare_ratio),
    ]);
    let mut checks = CheckSet::default();
    if p == 2.0 {
        checks.push(
            CheckRecord::new("gradient_ratio_bound", 2.05 - report.max_gradient_ratio, 0.0)
                .with_details(format!("max ratio {:.6}", report.max_gradient_ratio)),
        );
        checks.push(
            CheckRecord::new(
                "integration_by_parts_identity",
                1e-10 - report.max_identity_defect,
                0.0,
            )
            .with_details(format!("max defect {:.3e}", report.max_identity_defect)),
        );
    } else {
        checks.push(CheckRecord::informational(
            "ratios",
            format!(
                "young korn {:.4}, young poincare {:.4}",
                report.max_young_korn_ratio, report.max_young_poincare_ratio
            ),
        ));
    }
    Ok(CommandOutput { checks, files: vec![table.finish("korn")] })
}
