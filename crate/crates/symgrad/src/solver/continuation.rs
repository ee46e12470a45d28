//! Pinch continuation: solve a decreasing geometric sequence of regularized
//! problems with warm starts, keeping each stage's solution for
//! post-processing such as stress-norm trajectories.

use crate::error::Result;
use crate::scalar::Real;
use crate::solver::assemble::DirichletProblem;
use crate::solver::field::NodalField;
use crate::solver::newton::{newton_solve, SolveReport, SolverConfig};

/// One continuation stage: the pinch value, the Newton report, and the
/// converged field.
#[derive(Debug)]
pub struct ContinuationStage<T> {
    pub eps: T,
    pub report: SolveReport,
    pub field: NodalField<T>,
}

/// Full continuation outcome.
#[derive(Debug)]
pub struct ContinuationOutcome<T> {
    pub stages: Vec<ContinuationStage<T>>,
}

impl<T: Real> ContinuationOutcome<T> {
    pub fn final_field(&self) -> &NodalField<T> {
        &self.stages.last().expect("schedule is never empty").field
    }

    pub fn final_eps(&self) -> T {
        self.stages.last().expect("schedule is never empty").eps
    }
}

/// The geometric pinch schedule `start, start*factor, ...` clamped to end
/// exactly at `floor`.
pub fn eps_schedule<T: Real>(config: &SolverConfig<T>) -> Vec<T> {
    let mut schedule = Vec::new();
    let mut eps = config.eps_start;
    while eps > config.eps_floor {
        schedule.push(eps);
        eps = eps * config.eps_factor;
    }
    schedule.push(config.eps_floor);
    schedule
}

/// Solve along the pinch schedule with warm starts. The problem's own pinch
/// value is ignored; the schedule drives the law.
pub fn continuation_solve<T: Real>(
    problem: &DirichletProblem<T>,
    config: &SolverConfig<T>,
) -> Result<ContinuationOutcome<T>> {
    continuation_solve_from(problem, config, None)
}

/// Continuation with an explicit initial iterate for the first stage.
pub fn continuation_solve_from<T: Real>(
    problem: &DirichletProblem<T>,
    config: &SolverConfig<T>,
    initial: Option<NodalField<T>>,
) -> Result<ContinuationOutcome<T>> {
    config.validate()?;
    let mut stages = Vec::new();
    let mut warm = initial;
    for eps in eps_schedule(config) {
        let stage_problem = problem.with_eps(eps)?;
        let (field, report) = newton_solve(&stage_problem, config, warm.take())?;
        warm = Some(field.clone());
        stages.push(ContinuationStage { eps, report, field });
    }
    Ok(ContinuationOutcome { stages })
}
