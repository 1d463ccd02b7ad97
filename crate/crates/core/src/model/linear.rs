//! Binary linear classifiers over sparse rows.
//!
//! Both losses minimize
//!
//! ```text
//! (1/N) * sum_i loss(y_i * (w . x_i + b)) + lambda * |w|^2
//! ```
//!
//! with the bias left unregularized. The logistic loss is smooth and is
//! solved with full-batch L-BFGS; the hinge loss uses epoch-shuffled
//! stochastic subgradient descent with a `1/(lambda t)` step schedule and
//! iterate averaging.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::SparseVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Loss {
    Logistic,
    Hinge,
}

impl std::str::FromStr for Loss {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "logistic" => Ok(Loss::Logistic),
            "hinge" => Ok(Loss::Hinge),
            other => Err(format!("unknown loss {other:?} (expected logistic or hinge)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearParams {
    pub loss: Loss,
    pub lambda: f64,
    /// Iteration cap: L-BFGS iterations or SGD epochs.
    pub epochs: usize,
    pub tol: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    pub w: Vec<f64>,
    pub b: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Norm of the full-batch (sub)gradient at the returned point.
    pub grad_norm: f64,
    pub objective: f64,
}

fn check_problem(rows: &[SparseVector], y: &[bool], dim: usize) -> Result<()> {
    if rows.len() != y.len() {
        return Err(Error::Dimension { expected: rows.len(), found: y.len() });
    }
    if !y.iter().any(|&c| c) {
        return Err(Error::SingleClass("negative"));
    }
    if y.iter().all(|&c| c) {
        return Err(Error::SingleClass("positive"));
    }
    if let Some(row) = rows.iter().find(|r| r.min_dim() > dim) {
        return Err(Error::Dimension { expected: dim, found: row.min_dim() });
    }
    Ok(())
}

fn sign(pos: bool) -> f64 {
    if pos {
        1.0
    } else {
        -1.0
    }
}

/// `ln(1 + e^{-m})` without overflow.
fn log1p_exp_neg(m: f64) -> f64 {
    if m > 0.0 {
        (-m).exp().ln_1p()
    } else {
        -m + m.exp().ln_1p()
    }
}

/// d/dm of `ln(1 + e^{-m})`, i.e. `-1 / (1 + e^m)`.
fn logistic_slope(m: f64) -> f64 {
    if m > 0.0 {
        let e = (-m).exp();
        -e / (1.0 + e)
    } else {
        -1.0 / (1.0 + m.exp())
    }
}

fn l2_sq(w: &[f64]) -> f64 {
    w.iter().map(|x| x * x).sum()
}

pub fn logistic_objective(rows: &[SparseVector], y: &[bool], w: &[f64], b: f64, lambda: f64) -> f64 {
    let n = rows.len() as f64;
    let data: f64 = rows.iter().zip(y).map(|(x, &pos)| log1p_exp_neg(sign(pos) * (x.dot(w) + b))).sum();
    data / n + lambda * l2_sq(w)
}

/// Objective together with its gradient in `w` and in `b`.
pub fn logistic_value_grad(rows: &[SparseVector], y: &[bool], w: &[f64], b: f64, lambda: f64) -> (f64, Vec<f64>, f64) {
    let n = rows.len() as f64;
    let mut grad: Vec<f64> = w.iter().map(|&wj| 2.0 * lambda * wj).collect();
    let mut grad_b = 0.0;
    let mut data = 0.0;
    for (x, &pos) in rows.iter().zip(y) {
        let ys = sign(pos);
        let m = ys * (x.dot(w) + b);
        data += log1p_exp_neg(m);
        let coef = logistic_slope(m) * ys / n;
        grad_b += coef;
        for (j, v) in x.iter() {
            grad[j] += coef * v;
        }
    }
    (data / n + lambda * l2_sq(w), grad, grad_b)
}

pub fn hinge_objective(rows: &[SparseVector], y: &[bool], w: &[f64], b: f64, lambda: f64) -> f64 {
    let n = rows.len() as f64;
    let data: f64 = rows.iter().zip(y).map(|(x, &pos)| (1.0 - sign(pos) * (x.dot(w) + b)).max(0.0)).sum();
    data / n + lambda * l2_sq(w)
}

/// A subgradient of the hinge objective, taking 0 at the kink.
pub fn hinge_subgradient(rows: &[SparseVector], y: &[bool], w: &[f64], b: f64, lambda: f64) -> (Vec<f64>, f64) {
    let n = rows.len() as f64;
    let mut grad: Vec<f64> = w.iter().map(|&wj| 2.0 * lambda * wj).collect();
    let mut grad_b = 0.0;
    for (x, &pos) in rows.iter().zip(y) {
        let ys = sign(pos);
        if ys * (x.dot(w) + b) < 1.0 {
            grad_b -= ys / n;
            for (j, v) in x.iter() {
                grad[j] -= ys * v / n;
            }
        }
    }
    (grad, grad_b)
}

fn grad_norm(grad: &[f64], grad_b: f64) -> f64 {
    (l2_sq(grad) + grad_b * grad_b).sqrt()
}

pub fn train_linear(rows: &[SparseVector], y: &[bool], dim: usize, params: &LinearParams) -> Result<LinearFit> {
    check_problem(rows, y, dim)?;
    if !(params.lambda > 0.0 && params.lambda.is_finite()) {
        return Err(Error::Config(format!("lambda must be positive, got {}", params.lambda)));
    }
    match params.loss {
        Loss::Logistic => lbfgs(rows, y, dim, params),
        Loss::Hinge => averaged_sgd(rows, y, dim, params),
    }
}

const LBFGS_MEMORY: usize = 10;
const ARMIJO_C1: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;
const WOLFE_C2: f64 = 0.9;
/// Relative change in the objective that is treated as rounding noise.
const F_NOISE: f64 = 1e-10;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Full-batch L-BFGS with backtracking Armijo line search. The last
/// coordinate of the parameter vector is the bias.
fn lbfgs(rows: &[SparseVector], y: &[bool], dim: usize, params: &LinearParams) -> Result<LinearFit> {
    let eval = |theta: &[f64]| -> Result<(f64, Vec<f64>)> {
        let (f, mut g, gb) = logistic_value_grad(rows, y, &theta[..dim], theta[dim], params.lambda);
        if !f.is_finite() {
            return Err(Error::NonFinite);
        }
        g.push(gb);
        Ok((f, g))
    };

    let mut theta = vec![0.0; dim + 1];
    let (mut f, mut g) = eval(&theta)?;
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(LBFGS_MEMORY);
    let mut iterations = 0;
    let mut converged = false;

    while iterations < params.epochs {
        let gnorm = l2_sq(&g).sqrt();
        if gnorm <= params.tol {
            converged = true;
            break;
        }
        iterations += 1;

        // two-loop recursion
        let mut d: Vec<f64> = g.iter().map(|x| -x).collect();
        let mut alphas = Vec::with_capacity(history.len());
        for (s, yv, rho) in history.iter().rev() {
            let a = rho * dot(s, &d);
            for (dj, yj) in d.iter_mut().zip(yv) {
                *dj -= a * yj;
            }
            alphas.push(a);
        }
        if let Some((s, yv, _)) = history.back() {
            let gamma = dot(s, yv) / dot(yv, yv);
            d.iter_mut().for_each(|dj| *dj *= gamma);
        }
        for ((s, yv, rho), a) in history.iter().zip(alphas.iter().rev()) {
            let bcoef = rho * dot(yv, &d);
            for (dj, sj) in d.iter_mut().zip(s) {
                *dj += (a - bcoef) * sj;
            }
        }
        let mut slope = dot(&g, &d);
        if slope >= 0.0 {
            history.clear();
            d = g.iter().map(|x| -x).collect();
            slope = -gnorm * gnorm;
        }

        let mut step = if history.is_empty() { (1.0 / gnorm).min(1.0) } else { 1.0 };
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let cand: Vec<f64> = theta.iter().zip(&d).map(|(t, dj)| t + step * dj).collect();
            let (fc, gc) = eval(&cand)?;
            // Near the optimum the decrease in f drops below rounding error;
            // then accept on the approximate Wolfe conditions, which only
            // need the directional derivative.
            let dslope = dot(&gc, &d);
            let armijo = fc <= f + ARMIJO_C1 * step * slope;
            let approx_wolfe =
                fc <= f + F_NOISE * f.abs() && dslope >= WOLFE_C2 * slope && dslope <= (1.0 - 2.0 * ARMIJO_C1) * -slope;
            if armijo || approx_wolfe {
                accepted = Some((cand, fc, gc));
                break;
            }
            step *= 0.5;
        }
        let Some((cand, fc, gc)) = accepted else {
            // no decrease representable in floating point
            break;
        };

        let s: Vec<f64> = cand.iter().zip(&theta).map(|(a, b)| a - b).collect();
        let yv: Vec<f64> = gc.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &yv);
        if sy > 1e-12 * l2_sq(&s).sqrt() * l2_sq(&yv).sqrt() && sy > 0.0 {
            if history.len() == LBFGS_MEMORY {
                history.pop_front();
            }
            history.push_back((s, yv, 1.0 / sy));
        }
        theta = cand;
        f = fc;
        g = gc;
    }
    if !converged && l2_sq(&g).sqrt() <= params.tol {
        converged = true;
    }

    let b = theta.pop().unwrap();
    Ok(LinearFit { grad_norm: l2_sq(&g).sqrt(), w: theta, b, iterations, converged, objective: f })
}

/// Stochastic subgradient descent on the hinge objective.
///
/// The iterate is stored as `w = scale * v` so the shrink step costs O(1),
/// and the running sum of iterates is recovered as `A * v - u`, where `A`
/// is the running sum of scales and `u` accumulates `A_{t-1} * delta_t` for
/// each sparse update `delta_t` applied to `v`.
fn averaged_sgd(rows: &[SparseVector], y: &[bool], dim: usize, params: &LinearParams) -> Result<LinearFit> {
    let reg = 2.0 * params.lambda;
    let t0 = (1.0 / reg).max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut order: Vec<usize> = (0..rows.len()).collect();

    let mut v = vec![0.0; dim];
    let mut u = vec![0.0; dim];
    let mut scale = 1.0;
    let mut scale_sum = 0.0;
    let mut b = 0.0;
    let mut b_sum = 0.0;
    let mut t = 0u64;

    let averaged = |v: &[f64], u: &[f64], scale_sum: f64, b_sum: f64, t: u64| -> (Vec<f64>, f64) {
        if t == 0 {
            return (vec![0.0; dim], 0.0);
        }
        let tf = t as f64;
        (v.iter().zip(u).map(|(vj, uj)| (scale_sum * vj - uj) / tf).collect(), b_sum / tf)
    };

    let mut epochs_run = 0;
    let mut converged = false;
    let (mut w_avg, mut b_avg) = (vec![0.0; dim], 0.0);
    let mut gnorm = f64::INFINITY;
    for _ in 0..params.epochs {
        epochs_run += 1;
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let x = &rows[i];
            let ys = sign(y[i]);
            let margin = ys * (scale * x.dot(&v) + b);
            let eta = 1.0 / (reg * (t as f64 + t0));
            let prev_sum = scale_sum;
            scale *= 1.0 - eta * reg;
            if margin < 1.0 {
                let coef = eta * ys / scale;
                for (j, val) in x.iter() {
                    let delta = coef * val;
                    v[j] += delta;
                    u[j] += prev_sum * delta;
                }
                b += eta * ys;
            }
            scale_sum += scale;
            b_sum += b;
        }
        (w_avg, b_avg) = averaged(&v, &u, scale_sum, b_sum, t);
        let (g, gb) = hinge_subgradient(rows, y, &w_avg, b_avg, params.lambda);
        gnorm = grad_norm(&g, gb);
        if !gnorm.is_finite() || w_avg.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if gnorm <= params.tol {
            converged = true;
            break;
        }
    }
    let objective = hinge_objective(rows, y, &w_avg, b_avg, params.lambda);
    if !objective.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(LinearFit { w: w_avg, b: b_avg, iterations: epochs_run, converged, grad_norm: gnorm, objective })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(pairs: &[(u32, f64)]) -> SparseVector {
        SparseVector::from_pairs(pairs.to_vec())
    }

    fn params(loss: Loss, lambda: f64) -> LinearParams {
        LinearParams { loss, lambda, epochs: 500, tol: 1e-8, seed: 7 }
    }

    #[test]
    fn separable_pair_both_losses() {
        let rows = [sv(&[(0, 1.0)]), sv(&[(1, 1.0)])];
        let y = [true, false];
        for loss in [Loss::Logistic, Loss::Hinge] {
            let fit = train_linear(&rows, &y, 2, &params(loss, 1e-3)).unwrap();
            assert!(rows[0].dot(&fit.w) + fit.b > 0.0, "{loss:?}");
            assert!(rows[1].dot(&fit.w) + fit.b < 0.0, "{loss:?}");
        }
    }

    #[test]
    fn heavy_regularization_shrinks_weights() {
        let rows = [sv(&[(0, 1.0), (2, 0.5)]), sv(&[(1, 1.0)]), sv(&[(0, 0.3), (1, 0.7)])];
        let y = [true, false, true];
        for loss in [Loss::Logistic, Loss::Hinge] {
            let fit = train_linear(&rows, &y, 3, &params(loss, 1e6)).unwrap();
            assert!(l2_sq(&fit.w).sqrt() <= 1e-3, "{loss:?} {:?}", fit.w);
        }
    }

    #[test]
    fn logistic_reaches_tolerance() {
        let rows = [sv(&[(0, 1.0), (2, 0.5)]), sv(&[(1, 1.0)]), sv(&[(0, 0.3), (1, 0.7)]), sv(&[(2, 1.0)])];
        let y = [true, false, true, false];
        let fit = train_linear(&rows, &y, 3, &params(Loss::Logistic, 0.01)).unwrap();
        assert!(fit.converged);
        let (_, g, gb) = logistic_value_grad(&rows, &y, &fit.w, fit.b, 0.01);
        assert!(grad_norm(&g, gb) <= 1e-8);
    }

    #[test]
    fn single_class_is_rejected() {
        let rows = [sv(&[(0, 1.0)]), sv(&[(0, 2.0)])];
        assert!(matches!(
            train_linear(&rows, &[true, true], 1, &params(Loss::Logistic, 1.0)),
            Err(Error::SingleClass(_))
        ));
        assert!(train_linear(&rows, &[true, false], 1, &params(Loss::Hinge, 0.0)).is_err());
    }

    #[test]
    fn stable_logistic_pieces() {
        assert!((log1p_exp_neg(0.0) - 2f64.ln()).abs() < 1e-15);
        assert!(log1p_exp_neg(1000.0) >= 0.0);
        assert!((log1p_exp_neg(-1000.0) - 1000.0).abs() < 1e-9);
        assert!((logistic_slope(0.0) + 0.5).abs() < 1e-15);
        assert!(logistic_slope(-1000.0) == -1.0);
    }

    #[test]
    fn sgd_is_seed_deterministic() {
        let rows: Vec<_> = (0..20).map(|i| sv(&[((i % 3) as u32, 1.0 + i as f64 / 10.0), (3, 0.5)])).collect();
        let y: Vec<bool> = (0..20).map(|i| i % 3 == 0).collect();
        let p = LinearParams { loss: Loss::Hinge, lambda: 1e-3, epochs: 30, tol: 0.0, seed: 99 };
        let a = train_linear(&rows, &y, 4, &p).unwrap();
        let b = train_linear(&rows, &y, 4, &p).unwrap();
        assert_eq!(a, b);
    }
}
