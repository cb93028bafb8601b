//! BFGS minimizer with Armijo backtracking.
//!
//! The inverse-Hessian approximation starts at the identity. A trial point
//! whose objective is not finite is treated like a failed Armijo test, so the
//! line search also keeps iterates inside the feasible region. The Armijo test
//! uses [`Objective::difference`], which objectives summing many terms can
//! override to avoid cancellation between two large values.

use nalgebra::{DMatrix, DVector};

/// A differentiable objective to minimize.
pub trait Objective {
    /// Value and gradient at `x`. A non-finite value marks an infeasible point.
    fn evaluate(&mut self, x: &DVector<f64>) -> (f64, DVector<f64>);

    /// `f(to) - f(from)`, given both values.
    fn difference(&mut self, _from: &DVector<f64>, _to: &DVector<f64>, f_from: f64, f_to: f64) -> f64 {
        f_to - f_from
    }
}

impl<F> Objective for F
where
    F: FnMut(&DVector<f64>) -> (f64, DVector<f64>),
{
    fn evaluate(&mut self, x: &DVector<f64>) -> (f64, DVector<f64>) {
        self(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BfgsOptions {
    /// Stop when the gradient max-norm falls to this value.
    pub gradient_tolerance: f64,
    /// Stop when every coordinate moves by less than this, relative to `max(|x_i|, 1)`,
    /// provided the gradient max-norm is at most `parameter_gate`.
    pub parameter_tolerance: f64,
    pub parameter_gate: f64,
    pub max_iterations: usize,
    /// Sufficient-decrease constant of the Armijo condition.
    pub armijo: f64,
    /// Step contraction factor used while backtracking.
    pub contraction: f64,
    pub max_backtracks: usize,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        Self {
            gradient_tolerance: 1e-8,
            parameter_tolerance: 1e-10,
            parameter_gate: f64::INFINITY,
            max_iterations: 500,
            armijo: 1e-4,
            contraction: 0.5,
            max_backtracks: 80,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    GradientTolerance,
    ParameterTolerance,
    IterationLimit,
    /// No step along the steepest-descent direction satisfied the Armijo condition.
    LineSearchFailed,
    /// The objective was not finite at the starting point.
    InfeasibleStart,
}

#[derive(Debug, Clone)]
pub struct BfgsOutcome {
    pub x: DVector<f64>,
    pub value: f64,
    pub gradient: DVector<f64>,
    pub iterations: usize,
    pub termination: Termination,
    /// Objective value at the start, then the running total of the accepted
    /// decreases as measured by [`Objective::difference`].
    pub trace: Vec<f64>,
}

impl BfgsOutcome {
    pub fn gradient_norm(&self) -> f64 {
        self.gradient.amax()
    }
}

/// Minimizes `objective` starting from `x0`.
pub fn minimize<F: Objective>(mut objective: F, x0: DVector<f64>, options: &BfgsOptions) -> BfgsOutcome {
    let dim = x0.len();
    let mut x = x0;
    let (mut value, mut gradient) = objective.evaluate(&x);
    let mut trace = vec![value];
    let finish = |x, value, gradient, iterations, termination, trace| BfgsOutcome {
        x,
        value,
        gradient,
        iterations,
        termination,
        trace,
    };
    if !value.is_finite() || !gradient.iter().all(|g| g.is_finite()) {
        return finish(x, value, gradient, 0, Termination::InfeasibleStart, trace);
    }

    let identity = DMatrix::<f64>::identity(dim, dim);
    let mut inv_hessian = identity.clone();
    let mut iterations = 0;

    loop {
        if gradient.amax() <= options.gradient_tolerance {
            return finish(x, value, gradient, iterations, Termination::GradientTolerance, trace);
        }
        if iterations >= options.max_iterations {
            return finish(x, value, gradient, iterations, Termination::IterationLimit, trace);
        }
        iterations += 1;

        let mut direction = -(&inv_hessian * &gradient);
        let mut slope = gradient.dot(&direction);
        if !(slope < 0.0) {
            inv_hessian.copy_from(&identity);
            direction = -gradient.clone();
            slope = gradient.dot(&direction);
        }

        let accepted = match backtrack(&mut objective, &x, value, &direction, slope, options) {
            Some(step) => Some(step),
            None if inv_hessian != identity => {
                inv_hessian.copy_from(&identity);
                direction = -gradient.clone();
                slope = gradient.dot(&direction);
                backtrack(&mut objective, &x, value, &direction, slope, options)
            }
            None => None,
        };
        let Some((x_new, value_new, gradient_new, change)) = accepted else {
            return finish(x, value, gradient, iterations, Termination::LineSearchFailed, trace);
        };

        let s = &x_new - &x;
        let y = &gradient_new - &gradient;
        let relative_step = s
            .iter()
            .zip(x.iter())
            .map(|(si, xi)| si.abs() / xi.abs().max(1.0))
            .fold(0.0, f64::max);

        let sy = s.dot(&y);
        if sy > 1e-12 * s.norm() * y.norm() {
            // H <- (I - rho s y') H (I - rho y s') + rho s s'
            let rho = 1.0 / sy;
            let hy = &inv_hessian * &y;
            let yhy = y.dot(&hy);
            inv_hessian += (&s * s.transpose()) * (rho * rho * yhy + rho)
                - (&hy * s.transpose() + &s * hy.transpose()) * rho;
        }

        x = x_new;
        value = value_new;
        gradient = gradient_new;
        let last = *trace.last().expect("trace starts non-empty");
        trace.push(last + change);

        if relative_step <= options.parameter_tolerance && gradient.amax() <= options.parameter_gate {
            let termination = if gradient.amax() <= options.gradient_tolerance {
                Termination::GradientTolerance
            } else {
                Termination::ParameterTolerance
            };
            return finish(x, value, gradient, iterations, termination, trace);
        }
    }
}

fn backtrack<F: Objective>(
    objective: &mut F,
    x: &DVector<f64>,
    value: f64,
    direction: &DVector<f64>,
    slope: f64,
    options: &BfgsOptions,
) -> Option<(DVector<f64>, f64, DVector<f64>, f64)> {
    let mut t = 1.0;
    for _ in 0..=options.max_backtracks {
        let trial = x + direction * t;
        let (f, g) = objective.evaluate(&trial);
        if f.is_finite() && g.iter().all(|v| v.is_finite()) {
            let change = objective.difference(x, &trial, value, f);
            if change <= options.armijo * t * slope {
                return Some((trial, f, g, change));
            }
        }
        t *= options.contraction;
    }
    None
}
