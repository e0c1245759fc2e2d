//! Deterministic compass (coordinate pattern) search with rejection of
//! infeasible trial points.
//!
//! Each iteration sweeps the coordinates in a fixed order, keeping whichever
//! of `x ± h·s_i·e_i` improves. After a successful sweep the search
//! extrapolates along the net displacement (Hooke-Jeeves pattern moves) for
//! as long as that keeps paying off. The mesh factor `h` doubles after a
//! successful iteration and halves after a failed one. The run has converged
//! once `h · max(s_i)` drops below the tolerance.

use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_MAX_EVALUATIONS: usize = 100_000;

/// Inequality constraint: `true` when the point is feasible.
pub type Constraint<'a> = Box<dyn Fn(&[f64]) -> bool + Send + Sync + 'a>;

pub struct ObjectiveSpec<'a, F> {
    pub objective: F,
    pub constraints: Vec<Constraint<'a>>,
    pub start: Vec<f64>,
    /// Per-coordinate base step; the mesh factor starts at 1.
    pub step: Vec<f64>,
    pub tolerance: f64,
    pub max_evaluations: usize,
}

impl<'a, F: FnMut(&[f64]) -> f64> ObjectiveSpec<'a, F> {
    /// Unit steps, default tolerance and budget, no constraints.
    pub fn new(objective: F, start: Vec<f64>) -> Self {
        let step = vec![1.0; start.len()];
        ObjectiveSpec {
            objective,
            constraints: Vec::new(),
            start,
            step,
            tolerance: DEFAULT_TOLERANCE,
            max_evaluations: DEFAULT_MAX_EVALUATIONS,
        }
    }

    pub fn constraint(mut self, c: impl Fn(&[f64]) -> bool + Send + Sync + 'a) -> Self {
        self.constraints.push(Box::new(c));
        self
    }

    pub fn step(mut self, step: Vec<f64>) -> Self {
        self.step = step;
        self
    }

    pub fn tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn max_evaluations(mut self, max_evaluations: usize) -> Self {
        self.max_evaluations = max_evaluations;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub argmin: Vec<f64>,
    pub value: f64,
    pub converged: bool,
    pub evaluations: usize,
    /// Objective value after each accepted move, starting with the start value.
    pub accepted: Vec<f64>,
}

pub fn minimize<F: FnMut(&[f64]) -> f64>(spec: ObjectiveSpec<'_, F>) -> Result<Minimum> {
    let ObjectiveSpec {
        objective,
        constraints,
        start,
        step,
        tolerance,
        max_evaluations,
    } = spec;
    let dim = start.len();
    if dim == 0 || step.len() != dim {
        return Err(Error::domain("dimension mismatch between start and step"));
    }
    if tolerance.is_nan() || tolerance <= 0.0 || step.iter().any(|s| s.is_nan() || *s <= 0.0) {
        return Err(Error::domain("tolerance and steps must be positive"));
    }
    let feasible = |p: &[f64]| constraints.iter().all(|c| c(p));
    if !feasible(&start) {
        return Err(Error::InfeasibleStart(start));
    }

    let max_step = step.iter().copied().fold(0.0, f64::max);
    let mut search = Search {
        objective,
        feasible,
        step,
        evaluations: 0,
        max_evaluations,
    };
    let mut x = start;
    let mut fx = search.eval(&x);
    let mut accepted = vec![fx];
    let mut mesh = 1.0;

    while mesh * max_step >= tolerance && !search.exhausted() {
        let (x1, f1) = search.explore(&x, fx, mesh);
        if f1 < fx {
            let mut base = std::mem::replace(&mut x, x1);
            fx = f1;
            accepted.push(fx);
            // Pattern moves: keep stepping along the last displacement while
            // exploration around the extrapolated point keeps improving.
            while !search.exhausted() {
                let pattern: Vec<f64> = x.iter().zip(&base).map(|(a, b)| 2.0 * a - b).collect();
                if !(search.feasible)(&pattern) {
                    break;
                }
                let fp = search.eval(&pattern);
                let (x2, f2) = search.explore(&pattern, fp, mesh);
                if f2 < fx {
                    base = std::mem::replace(&mut x, x2);
                    fx = f2;
                    accepted.push(fx);
                } else {
                    break;
                }
            }
            mesh *= 2.0;
        } else if !search.exhausted() {
            mesh *= 0.5;
        }
    }

    let evaluations = search.evaluations;
    Ok(Minimum {
        converged: mesh * max_step < tolerance,
        argmin: x,
        value: fx,
        evaluations,
        accepted,
    })
}

struct Search<F, C> {
    objective: F,
    feasible: C,
    step: Vec<f64>,
    evaluations: usize,
    max_evaluations: usize,
}

impl<F: FnMut(&[f64]) -> f64, C: Fn(&[f64]) -> bool> Search<F, C> {
    fn exhausted(&self) -> bool {
        self.evaluations >= self.max_evaluations
    }

    /// Objective value with NaN mapped to `+inf`, so NaN is never accepted.
    fn eval(&mut self, p: &[f64]) -> f64 {
        self.evaluations += 1;
        let v = (self.objective)(p);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }

    /// One sweep over the coordinates: keep `+h s_i` if it improves,
    /// otherwise keep `-h s_i` if that improves.
    fn explore(&mut self, center: &[f64], mut value: f64, mesh: f64) -> (Vec<f64>, f64) {
        let mut x = center.to_vec();
        for i in 0..x.len() {
            let origin = x[i];
            for sign in [1.0, -1.0] {
                if self.exhausted() {
                    return (x, value);
                }
                x[i] = origin + sign * mesh * self.step[i];
                if x[i] == origin || !(self.feasible)(&x) {
                    x[i] = origin;
                    continue;
                }
                let v = self.eval(&x);
                if v < value {
                    value = v;
                    break;
                }
                x[i] = origin;
            }
        }
        (x, value)
    }
}
