//! Box-constrained Nelder-Mead search.
//!
//! Trial points are projected onto the box before evaluation, so the
//! objective is never called outside the bounds. After the simplex collapses
//! the search restarts from the best vertex; it stops once a restart no
//! longer improves the objective.

#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Converged when every vertex lies within this distance of the best one
    /// in each coordinate.
    pub xtol: f64,
    pub max_evaluations: usize,
    /// Initial edge length relative to each starting coordinate.
    pub initial_step: f64,
    pub max_restarts: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            xtol: 1e-6,
            max_evaluations: 10_000,
            initial_step: 0.05,
            max_restarts: 10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub evaluations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

struct Bounded<'a, F> {
    f: F,
    lower: &'a [f64],
    upper: &'a [f64],
    evaluations: usize,
}

impl<F: FnMut(&[f64]) -> f64> Bounded<'_, F> {
    fn project(&self, x: &mut [f64]) {
        for ((xi, lo), hi) in x.iter_mut().zip(self.lower).zip(self.upper) {
            *xi = xi.clamp(*lo, *hi);
        }
    }

    fn eval(&mut self, x: &mut [f64]) -> f64 {
        self.project(x);
        self.evaluations += 1;
        let v = (self.f)(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }
}

pub fn minimize<F>(
    f: F,
    x0: &[f64],
    lower: &[f64],
    upper: &[f64],
    opts: SimplexOptions,
) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    assert_eq!(x0.len(), lower.len());
    assert_eq!(x0.len(), upper.len());
    let mut obj = Bounded {
        f,
        lower,
        upper,
        evaluations: 0,
    };
    let mut best = x0.to_vec();
    let mut best_f = obj.eval(&mut best);
    let mut converged = false;

    for _ in 0..=opts.max_restarts {
        let (x, fx, ok) = run(&mut obj, &best, opts);
        let improved = fx < best_f;
        if fx <= best_f {
            best = x;
            best_f = fx;
        }
        converged = ok;
        if !ok || !improved || obj.evaluations >= opts.max_evaluations {
            break;
        }
    }

    SimplexResult {
        x: best,
        fx: best_f,
        evaluations: obj.evaluations,
        converged,
    }
}

fn run<F: FnMut(&[f64]) -> f64>(
    obj: &mut Bounded<'_, F>,
    start: &[f64],
    opts: SimplexOptions,
) -> (Vec<f64>, f64, bool) {
    let n = start.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let mut origin = start.to_vec();
    let f0 = obj.eval(&mut origin);
    simplex.push((origin, f0));
    for i in 0..n {
        let mut v = start.to_vec();
        let step = if v[i] != 0.0 {
            opts.initial_step * v[i].abs()
        } else {
            2.5e-4
        };
        v[i] = if v[i] + step <= obj.upper[i] {
            v[i] + step
        } else {
            v[i] - step
        };
        let fv = obj.eval(&mut v);
        simplex.push((v, fv));
    }

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[1..]
            .iter()
            .flat_map(|(v, _)| v.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread <= opts.xtol {
            let (x, fx) = simplex.swap_remove(0);
            return (x, fx, true);
        }
        if obj.evaluations >= opts.max_evaluations {
            let (x, fx) = simplex.swap_remove(0);
            return (x, fx, false);
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|(v, _)| v[j]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].0.clone();
        let worst_f = simplex[n].1;
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let mut reflected = along(REFLECT);
        let fr = obj.eval(&mut reflected);
        if fr < simplex[0].1 {
            let mut expanded = along(EXPAND);
            let fe = obj.eval(&mut expanded);
            simplex[n] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
            continue;
        }
        // Outside contraction when the reflection beat the worst point,
        // inside otherwise.
        let (mut contracted, limit) = if fr < worst_f {
            (along(CONTRACT), fr)
        } else {
            (along(-CONTRACT), worst_f)
        };
        let fc = obj.eval(&mut contracted);
        if fc < limit {
            simplex[n] = (contracted, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for (v, fv) in simplex.iter_mut().skip(1) {
            for (vi, bi) in v.iter_mut().zip(&best) {
                *vi = bi + SHRINK * (*vi - bi);
            }
            *fv = obj.eval(v);
        }
    }
}
