//! Derivative-free simplex search (reflect / expand / contract / shrink).

/// Minimizer settings. Stops when the spread of objective values over the
/// search polytope falls below `spread_tolerance` or after `max_iterations`.
#[derive(Debug, Clone, Copy)]
pub struct NelderMead {
    pub max_iterations: usize,
    pub spread_tolerance: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            max_iterations: 5_000,
            spread_tolerance: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

impl NelderMead {
    /// Minimizes `f` from the given `d + 1` starting vertices in `d`
    /// dimensions. `f` may return `+inf` to reject a point.
    pub fn minimize<F>(&self, f: F, vertices: Vec<Vec<f64>>) -> Minimum
    where
        F: Fn(&[f64]) -> f64,
    {
        let dim = vertices.len() - 1;
        let mut simplex: Vec<(Vec<f64>, f64)> = vertices
            .into_iter()
            .map(|v| {
                let fv = f(&v);
                (v, fv)
            })
            .collect();

        let mut iterations = 0;
        while iterations < self.max_iterations {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let best = simplex[0].1;
            let worst = simplex[dim].1;
            if worst - best < self.spread_tolerance {
                break;
            }
            iterations += 1;

            let centroid = centroid(&simplex[..dim]);
            let worst_x = simplex[dim].0.clone();
            let second_worst = simplex[dim - 1].1;

            let reflected = affine(&centroid, &worst_x, -REFLECT);
            let f_reflected = f(&reflected);

            if f_reflected < best {
                let expanded = affine(&centroid, &worst_x, -REFLECT * EXPAND);
                let f_expanded = f(&expanded);
                simplex[dim] = if f_expanded < f_reflected {
                    (expanded, f_expanded)
                } else {
                    (reflected, f_reflected)
                };
                continue;
            }
            if f_reflected < second_worst {
                simplex[dim] = (reflected, f_reflected);
                continue;
            }
            if f_reflected < worst {
                let outside = affine(&centroid, &worst_x, -REFLECT * CONTRACT);
                let f_outside = f(&outside);
                if f_outside <= f_reflected {
                    simplex[dim] = (outside, f_outside);
                    continue;
                }
            } else {
                let inside = affine(&centroid, &worst_x, CONTRACT);
                let f_inside = f(&inside);
                if f_inside < worst {
                    simplex[dim] = (inside, f_inside);
                    continue;
                }
            }

            let anchor = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                let x: Vec<f64> = anchor
                    .iter()
                    .zip(&vertex.0)
                    .map(|(a, v)| a + SHRINK * (v - a))
                    .collect();
                let fx = f(&x);
                *vertex = (x, fx);
            }
        }

        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, value) = simplex.swap_remove(0);
        Minimum {
            x,
            value,
            iterations,
        }
    }
}

fn centroid(points: &[(Vec<f64>, f64)]) -> Vec<f64> {
    let mut c = vec![0.0; points[0].0.len()];
    for (p, _) in points {
        for (ci, pi) in c.iter_mut().zip(p) {
            *ci += pi;
        }
    }
    let n = points.len() as f64;
    c.iter_mut().for_each(|ci| *ci /= n);
    c
}

/// `c + t * (x - c)`.
fn affine(c: &[f64], x: &[f64], t: f64) -> Vec<f64> {
    c.iter().zip(x).map(|(ci, xi)| ci + t * (xi - ci)).collect()
}
