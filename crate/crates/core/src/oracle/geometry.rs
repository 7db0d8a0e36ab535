//! Simplices given by Cartesian vertices, used to measure cevian
//! sub-simplex volumes directly.

use rand::Rng;
use serde::Serialize;

use super::{restart_rng, sample_interior};
use crate::error::{Error, Result};
use crate::scalar::det_partial_pivot;
use crate::simplex::{
    cevian_foot, volume_ratio_determinant, volume_ratio_product, BarycentricPoint,
};

/// Minimum volume, relative to the regular simplex of the same diameter,
/// for a simplex to count as nondegenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CartesianSimplex {
    vertices: Vec<Vec<f64>>,
    /// Rows `A_j - A_0`, `j >= 1`.
    edges: Vec<Vec<f64>>,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Volume of the regular n-simplex with unit edges.
fn regular_volume(n: usize) -> f64 {
    ((n + 1) as f64).sqrt() / (factorial(n) * 2f64.powf(n as f64 / 2.0))
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

impl CartesianSimplex {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let n = vertices.len().saturating_sub(1);
        if n < 1 {
            return Err(Error::InvalidArgument(
                "a simplex needs at least 2 vertices".into(),
            ));
        }
        if let Some(v) = vertices.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        let edges: Vec<Vec<f64>> = vertices[1..].iter().map(|v| sub(v, &vertices[0])).collect();
        let mut scale: f64 = 0.0;
        for (i, a) in vertices.iter().enumerate() {
            for b in &vertices[i + 1..] {
                scale = scale.max(norm(&sub(a, b)));
            }
        }
        let normalized = if scale > 0.0 {
            let scaled: Vec<Vec<f64>> = edges
                .iter()
                .map(|e| e.iter().map(|x| x / scale).collect())
                .collect();
            det_partial_pivot(scaled).abs() / factorial(n) / regular_volume(n)
        } else {
            0.0
        };
        if normalized.is_nan() || normalized <= DEGENERACY_THRESHOLD {
            return Err(Error::DegenerateSimplex(normalized));
        }
        Ok(Self { vertices, edges })
    }

    /// The origin followed by the unit vectors.
    pub fn standard(n: usize) -> Self {
        let mut vertices = vec![vec![0.0; n]];
        for i in 0..n {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            vertices.push(v);
        }
        Self::new(vertices).expect("standard simplex is nondegenerate")
    }

    pub fn dimension(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn volume(&self) -> f64 {
        det_partial_pivot(self.edges.clone()).abs() / factorial(self.dimension())
    }

    /// `x -> A x + b` applied to every vertex.
    pub fn affine_image(&self, a: &[Vec<f64>], b: &[f64]) -> Result<Self> {
        let map = |v: &Vec<f64>| -> Vec<f64> {
            a.iter().zip(b).map(|(row, bi)| dot(row, v) + bi).collect()
        };
        Self::new(self.vertices.iter().map(map).collect())
    }

    /// Cartesian position of a barycentric point.
    pub fn point(&self, p: &BarycentricPoint) -> Result<Vec<f64>> {
        if p.len() != self.vertices.len() {
            return Err(Error::DimensionMismatch {
                expected: self.vertices.len(),
                found: p.len(),
            });
        }
        let mut x = vec![0.0; self.dimension()];
        for (lambda, v) in p.coords().iter().zip(&self.vertices) {
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += lambda * vi;
            }
        }
        Ok(x)
    }

    /// Normal of the facet opposite vertex `j` by the generalized cross
    /// product of the facet's edge vectors.
    fn facet_normal(&self, j: usize) -> (Vec<f64>, &[f64]) {
        let n = self.dimension();
        let facet: Vec<&Vec<f64>> = (0..=n)
            .filter(|&l| l != j)
            .map(|l| &self.vertices[l])
            .collect();
        let base = facet[0];
        let edges: Vec<Vec<f64>> = facet[1..].iter().map(|v| sub(v, base)).collect();
        let normal = (0..n)
            .map(|col| {
                let minor: Vec<Vec<f64>> = edges
                    .iter()
                    .map(|e| {
                        e.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != col)
                            .map(|(_, x)| *x)
                            .collect()
                    })
                    .collect();
                let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
                sign * det_partial_pivot(minor)
            })
            .collect();
        (normal, base)
    }

    /// Intersection of the line through `A_j` and `m` with the hyperplane of
    /// the facet opposite `A_j`.
    pub fn foot_by_intersection(&self, m: &[f64], j: usize) -> Result<Vec<f64>> {
        let apex = &self.vertices[j];
        let (normal, base) = self.facet_normal(j);
        let direction = sub(m, apex);
        let denom = dot(&normal, &direction);
        if denom == 0.0 {
            return Err(Error::OutOfDomain {
                value: 0.0,
                domain: "line parallel to the opposite facet".into(),
            });
        }
        let t = dot(&normal, &sub(base, apex)) / denom;
        Ok(apex
            .iter()
            .zip(&direction)
            .map(|(a, d)| a + t * d)
            .collect())
    }

    /// The same foot through its barycentric coordinates.
    pub fn foot_by_coordinates(&self, p: &BarycentricPoint, j: usize) -> Result<Vec<f64>> {
        self.point(&cevian_foot(p, j)?)
    }
}

/// `V_i / V` measured on the constructed simplex `M N_1 .. N_{n+1}` without
/// `N_i`.
pub fn measure_geometric(
    simplex: &CartesianSimplex,
    p: &BarycentricPoint,
    i: usize,
) -> Result<f64> {
    let n = simplex.dimension();
    if p.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            found: p.len(),
        });
    }
    if i > n {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: n + 1,
        });
    }
    if !p.is_interior() {
        // delegate for the precise error
        cevian_foot(p, 0)?;
    }
    let m = simplex.point(p)?;
    let rows = (0..=n)
        .filter(|&j| j != i)
        .map(|j| Ok(sub(&simplex.foot_by_intersection(&m, j)?, &m)))
        .collect::<Result<Vec<_>>>()?;
    let sub_volume = det_partial_pivot(rows).abs() / factorial(n);
    Ok(sub_volume / simplex.volume())
}

/// Shapes below this are redrawn by [`random_simplex`].
pub const MIN_SHAPE_QUALITY: f64 = 0.25;

/// `(V / V_reg)^(1/n)` where `V_reg` is the volume of the regular simplex
/// whose edge equals the diameter of `s`. It is 1 for a regular simplex and
/// does not shrink with the dimension for well-shaped ones.
pub fn shape_quality(s: &CartesianSimplex) -> f64 {
    let n = s.dimension();
    let diameter = s
        .vertices
        .iter()
        .flat_map(|a| s.vertices.iter().map(move |b| norm(&sub(a, b))))
        .fold(0.0, f64::max);
    (s.volume() / (regular_volume(n) * diameter.powi(n as i32))).powf(1.0 / n as f64)
}

/// Vertices uniform in `[-1, 1]^n`, redrawn until the shape quality is at
/// least [`MIN_SHAPE_QUALITY`].
pub fn random_simplex<R: Rng>(rng: &mut R, n: usize) -> CartesianSimplex {
    loop {
        let vertices = (0..=n)
            .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        if let Ok(s) = CartesianSimplex::new(vertices) {
            if shape_quality(&s) >= MIN_SHAPE_QUALITY {
                return s;
            }
        }
    }
}

/// Largest discrepancies seen over random simplex / point trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometricSummary {
    pub dimension: usize,
    pub trials: usize,
    /// Measured `V_i / V` against the product formula, relative.
    pub max_measured_rel: f64,
    /// Determinant formula against the product formula, relative.
    pub max_determinant_rel: f64,
    /// Feet by line/hyperplane intersection against feet mapped from
    /// barycentric coordinates, absolute.
    pub max_foot_route_abs: f64,
    /// Measurement on the random simplex against the standard simplex,
    /// relative.
    pub max_affine_rel: f64,
}

pub fn geometric_trials(n: usize, trials: usize, seed: u64) -> Result<GeometricSummary> {
    let mut rng = restart_rng(seed, u64::MAX);
    let standard = CartesianSimplex::standard(n);
    let mut summary = GeometricSummary {
        dimension: n,
        trials,
        max_measured_rel: 0.0,
        max_determinant_rel: 0.0,
        max_foot_route_abs: 0.0,
        max_affine_rel: 0.0,
    };
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
    for _ in 0..trials {
        let simplex = random_simplex(&mut rng, n);
        let p = sample_interior(&mut rng, n);
        let m = simplex.point(&p)?;
        for i in 0..=n {
            let product = volume_ratio_product(&p, i)?;
            let measured = measure_geometric(&simplex, &p, i)?;
            let on_standard = measure_geometric(&standard, &p, i)?;
            summary.max_measured_rel = summary.max_measured_rel.max(rel(measured, product));
            summary.max_affine_rel = summary.max_affine_rel.max(rel(measured, on_standard));
            summary.max_determinant_rel = summary
                .max_determinant_rel
                .max(rel(volume_ratio_determinant(&p, i)?, product));
            let a = simplex.foot_by_intersection(&m, i)?;
            let b = simplex.foot_by_coordinates(&p, i)?;
            let gap = a
                .iter()
                .zip(&b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            summary.max_foot_route_abs = summary.max_foot_route_abs.max(gap);
        }
    }
    Ok(summary)
}
