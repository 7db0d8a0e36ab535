//! Barycentric points, cevian feet and the volume ratios of the cevian
//! sub-simplices.
//!
//! For an interior point `M` with barycentric coordinates `λ` the cevian
//! through vertex `A_i` meets the opposite facet at the foot `N_i`. The
//! sub-simplex `V_i` has apex `M` and the feet `N_j`, `j != i`, as its other
//! vertices; its volume relative to the reference simplex is
//! `(1 - λ_i) * prod_j λ_j / (1 - λ_j)`.
//!
//! Indices are 0-based throughout the library.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Coordinate sums deviating from 1 by at most this much are renormalized by
/// [`BarycentricPoint::normalized`].
pub const RENORMALIZE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct BarycentricPoint<S = f64> {
    coords: Vec<S>,
}

impl<S: Scalar> BarycentricPoint<S> {
    /// Accepts coordinates whose sum is 1 within the scalar's tolerance
    /// (exactly 1 for exact scalars).
    pub fn new(coords: Vec<S>) -> Result<Self> {
        if coords.len() < 3 {
            return Err(Error::TooFewCoordinates(coords.len()));
        }
        let sum = sum(&coords);
        if (sum.clone() - S::one()).abs() > S::sum_tolerance() {
            return Err(Error::BadSum { sum: sum.to_f64() });
        }
        Ok(Self { coords })
    }

    /// Like [`new`](Self::new) but divides by the sum when it is within
    /// [`RENORMALIZE_TOLERANCE`] of 1.
    pub fn normalized(coords: Vec<S>) -> Result<Self> {
        if coords.len() < 3 {
            return Err(Error::TooFewCoordinates(coords.len()));
        }
        let sum = sum(&coords);
        let tol = S::from_f64(RENORMALIZE_TOLERANCE).expect("tolerance is finite");
        if (sum.clone() - S::one()).abs() > tol {
            return Err(Error::BadSum { sum: sum.to_f64() });
        }
        let coords = if sum == S::one() {
            coords
        } else {
            coords.into_iter().map(|c| c / sum.clone()).collect()
        };
        Ok(Self { coords })
    }

    /// The centroid of an `n`-simplex.
    pub fn centroid(n: usize) -> Result<Self> {
        let w = S::one() / S::from_count(n + 1);
        Self::new(vec![w; n + 1])
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    /// Simplex dimension `n` (one less than the number of coordinates).
    pub fn dimension(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Every coordinate strictly inside (0, 1).
    pub fn is_interior(&self) -> bool {
        self.coords.iter().all(in_open_unit)
    }

    pub(crate) fn require_interior(&self) -> Result<()> {
        match self.coords.iter().position(|c| !in_open_unit(c)) {
            None => Ok(()),
            Some(index) => Err(Error::NotInterior {
                index,
                value: self.coords[index].to_f64(),
            }),
        }
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.coords.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                len: self.coords.len(),
            })
        }
    }

    pub fn to_f64(&self) -> BarycentricPoint<f64> {
        BarycentricPoint {
            coords: self.coords.iter().map(Scalar::to_f64).collect(),
        }
    }

    pub(crate) fn from_raw(coords: Vec<S>) -> Self {
        Self { coords }
    }
}

fn in_open_unit<S: Scalar>(c: &S) -> bool {
    *c > S::zero() && *c < S::one()
}

fn sum<S: Scalar>(xs: &[S]) -> S {
    xs.iter().fold(S::zero(), |acc, x| acc + x.clone())
}

/// `t / (1 - t)`, the ratio `|M N_i| / |M A_i|` for coordinate `t`.
fn odds<S: Scalar>(t: &S) -> S {
    t.clone() / (S::one() - t.clone())
}

fn product_of_odds<S: Scalar>(xs: &[S]) -> S {
    xs.iter().fold(S::one(), |acc, x| acc * odds(x))
}

/// The pair `(n, k)` selecting which partial sum `V_1 + ... + V_k` is studied.
/// `m = n + 1 - k` is the size of the complementary group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CevianConfig {
    n: usize,
    k: usize,
}

impl CevianConfig {
    /// Requires `n >= 2` and `1 < k < n`.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 2 || k <= 1 || k >= n {
            return Err(Error::InvalidConfig { n, k });
        }
        Ok(Self { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.n + 1 - self.k
    }

    /// Every valid configuration with `n <= n_max`, ordered by `(n, k)`.
    pub fn all_up_to(n_max: usize) -> Vec<Self> {
        (3..=n_max)
            .flat_map(|n| (2..n).map(move |k| Self { n, k }))
            .collect()
    }
}

/// `s_i / R_i = λ_i / (1 - λ_i)` where `R_i = |M A_i|` and `s_i = |M N_i|`.
pub fn cevian_ratio<S: Scalar>(p: &BarycentricPoint<S>, i: usize) -> Result<S> {
    p.check_index(i)?;
    p.require_interior()?;
    Ok(odds(&p.coords[i]))
}

/// Barycentric coordinates of the foot `N_i` on the facet opposite `A_i`.
pub fn cevian_foot<S: Scalar>(p: &BarycentricPoint<S>, i: usize) -> Result<BarycentricPoint<S>> {
    p.check_index(i)?;
    p.require_interior()?;
    Ok(BarycentricPoint::from_raw(foot_coords(&p.coords, i)))
}

fn foot_coords<S: Scalar>(coords: &[S], i: usize) -> Vec<S> {
    let rest = S::one() - coords[i].clone();
    coords
        .iter()
        .enumerate()
        .map(|(j, c)| {
            if j == i {
                S::zero()
            } else {
                c.clone() / rest.clone()
            }
        })
        .collect()
}

/// `V_i / V` by the closed product form.
pub fn volume_ratio_product<S: Scalar>(p: &BarycentricPoint<S>, i: usize) -> Result<S> {
    p.check_index(i)?;
    p.require_interior()?;
    Ok((S::one() - p.coords[i].clone()) * product_of_odds(&p.coords))
}

/// `V_i / V` as the absolute determinant of the barycentric coordinates of
/// `M` and the feet `N_j`, `j != i`.
pub fn volume_ratio_determinant<S: Scalar>(p: &BarycentricPoint<S>, i: usize) -> Result<S> {
    p.check_index(i)?;
    p.require_interior()?;
    let mut rows = Vec::with_capacity(p.len());
    rows.push(p.coords.clone());
    rows.extend(
        (0..p.len())
            .filter(|&j| j != i)
            .map(|j| foot_coords(&p.coords, j)),
    );
    Ok(S::determinant(&rows).abs())
}

fn check_config<S: Scalar>(p: &BarycentricPoint<S>, cfg: &CevianConfig) -> Result<()> {
    if p.len() != cfg.n + 1 {
        return Err(Error::DimensionMismatch {
            expected: cfg.n + 1,
            found: p.len(),
        });
    }
    Ok(())
}

/// `F_k = (V_1 + ... + V_k) / V = (k - λ_1 - ... - λ_k) * prod_j λ_j / (1 - λ_j)`.
pub fn partial_sum<S: Scalar>(p: &BarycentricPoint<S>, cfg: &CevianConfig) -> Result<S> {
    check_config(p, cfg)?;
    p.require_interior()?;
    let head = sum(&p.coords[..cfg.k]);
    Ok((S::from_count(cfg.k) - head) * product_of_odds(&p.coords))
}

/// `F = (V_1 + ... + V_{n+1}) / V = n * prod_j λ_j / (1 - λ_j)`.
pub fn full_sum<S: Scalar>(p: &BarycentricPoint<S>) -> Result<S> {
    p.require_interior()?;
    Ok(S::from_count(p.dimension()) * product_of_odds(&p.coords))
}

fn require_open_unit<S: Scalar>(xs: &[S]) -> Result<()> {
    match xs.iter().find(|c| !in_open_unit(*c)) {
        None => Ok(()),
        Some(c) => Err(Error::OutOfDomain {
            value: c.to_f64(),
            domain: "(0, 1)".into(),
        }),
    }
}

/// `G_k(λ_1..λ_k) = (k - Σ λ_j) * prod λ_j / (1 - λ_j)` over the first group.
pub fn factor_g<S: Scalar>(first: &[S]) -> Result<S> {
    require_open_unit(first)?;
    Ok((S::from_count(first.len()) - sum(first)) * product_of_odds(first))
}

/// `H_k(λ_{k+1}..λ_{n+1}) = prod λ_j / (1 - λ_j)` over the second group.
pub fn factor_h<S: Scalar>(last: &[S]) -> Result<S> {
    require_open_unit(last)?;
    Ok(product_of_odds(last))
}

/// Per-index ratios `V_i / V` together with the partial and full sums.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioBreakdown<S = f64> {
    pub per_index: Vec<S>,
    pub partial_sum: S,
    pub full_sum: S,
}

impl<S: Scalar> RatioBreakdown<S> {
    pub fn compute(p: &BarycentricPoint<S>, cfg: &CevianConfig) -> Result<Self> {
        check_config(p, cfg)?;
        let per_index = (0..p.len())
            .map(|i| volume_ratio_product(p, i))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            partial_sum: partial_sum(p, cfg)?,
            full_sum: full_sum(p)?,
            per_index,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn pt(c: &[f64]) -> BarycentricPoint {
        BarycentricPoint::new(c.to_vec()).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn qpt(c: &[(i64, i64)]) -> BarycentricPoint<BigRational> {
        BarycentricPoint::new(c.iter().map(|&(n, d)| q(n, d)).collect()).unwrap()
    }

    #[test]
    fn point_validation() {
        assert!(matches!(
            BarycentricPoint::new(vec![0.5, 0.5]),
            Err(Error::TooFewCoordinates(2))
        ));
        assert!(matches!(
            BarycentricPoint::new(vec![0.5, 0.5, 0.1]),
            Err(Error::BadSum { .. })
        ));
        // within 1e-9 is renormalized, beyond is rejected
        let p = BarycentricPoint::normalized(vec![0.2, 0.3, 0.5 + 5e-10]).unwrap();
        assert!((p.coords().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(BarycentricPoint::normalized(vec![0.2, 0.3, 0.5 + 1e-8]).is_err());
        assert!(
            BarycentricPoint::new(vec![q(1, 3), q(1, 3), q(1, 3) + q(1, 1000000000000)]).is_err()
        );
    }

    #[test]
    fn interior_predicate() {
        assert!(pt(&[0.2, 0.3, 0.5]).is_interior());
        assert!(!pt(&[0.0, 0.5, 0.5]).is_interior());
        assert!(!pt(&[1.0, 0.0, 0.0]).is_interior());
        assert!(!pt(&[1.5, -0.25, -0.25]).is_interior());
    }

    #[test]
    fn config_bounds() {
        assert!(CevianConfig::new(3, 2).is_ok());
        assert!(CevianConfig::new(3, 3).is_err());
        assert!(CevianConfig::new(3, 1).is_err());
        assert!(CevianConfig::new(2, 1).is_err());
        let c = CevianConfig::new(7, 4).unwrap();
        assert_eq!(c.m(), 4);
        assert_eq!(c.m() + c.k(), c.n() + 1);
        assert_eq!(CevianConfig::all_up_to(5).len(), 1 + 2 + 3);
    }

    #[test]
    fn cevian_ratio_examples() {
        assert_eq!(cevian_ratio(&pt(&[0.5, 0.25, 0.25]), 0).unwrap(), 1.0);
        assert_eq!(
            cevian_ratio(&qpt(&[(1, 3), (1, 3), (1, 3)]), 1).unwrap(),
            q(1, 2)
        );
        let r = cevian_ratio(&pt(&[0.1, 0.2, 0.3, 0.4]), 3).unwrap();
        assert!((r - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn ratio_rejects_boundary_points() {
        let p = pt(&[0.0, 0.5, 0.5]);
        assert!(matches!(
            cevian_ratio(&p, 1),
            Err(Error::NotInterior { index: 0, .. })
        ));
        assert!(cevian_foot(&p, 1).is_err());
        assert!(volume_ratio_product(&p, 1).is_err());
        assert!(volume_ratio_determinant(&p, 1).is_err());
        assert!(full_sum(&p).is_err());
        let v = pt(&[1.0, 0.0, 0.0]);
        assert!(cevian_ratio(&v, 0).is_err());
        assert!(matches!(
            cevian_ratio(&pt(&[0.2, 0.3, 0.5]), 3),
            Err(Error::IndexOutOfRange { index: 3, len: 3 })
        ));
    }

    #[test]
    fn cevian_foot_examples() {
        let f = cevian_foot(&qpt(&[(1, 3), (1, 3), (1, 3)]), 0).unwrap();
        assert_eq!(f.coords(), &[q(0, 1), q(1, 2), q(1, 2)]);
        let f = cevian_foot(&qpt(&[(1, 5), (3, 10), (1, 2)]), 2).unwrap();
        assert_eq!(f.coords(), &[q(2, 5), q(3, 5), q(0, 1)]);
        let f = cevian_foot(&qpt(&[(1, 10), (2, 10), (3, 10), (4, 10)]), 1).unwrap();
        assert_eq!(f.coords(), &[q(1, 8), q(0, 1), q(3, 8), q(1, 2)]);
        let f = cevian_foot(&pt(&[0.1, 0.2, 0.3, 0.4]), 1).unwrap();
        for (a, b) in f.coords().iter().zip([0.125, 0.0, 0.375, 0.5]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn centroid_ratios_are_exact() {
        let tri = BarycentricPoint::<BigRational>::centroid(2).unwrap();
        let tet = BarycentricPoint::<BigRational>::centroid(3).unwrap();
        for i in 0..3 {
            assert_eq!(volume_ratio_product(&tri, i).unwrap(), q(1, 12));
            assert_eq!(volume_ratio_determinant(&tri, i).unwrap(), q(1, 12));
        }
        for i in 0..4 {
            assert_eq!(volume_ratio_product(&tet, i).unwrap(), q(1, 108));
            assert_eq!(volume_ratio_determinant(&tet, i).unwrap(), q(1, 108));
        }
        assert_eq!(full_sum(&tri).unwrap(), q(1, 4));
        assert_eq!(full_sum(&tet).unwrap(), q(1, 27));
        let cfg = CevianConfig::new(3, 2).unwrap();
        assert_eq!(partial_sum(&tet, &cfg).unwrap(), q(1, 54));
    }

    #[test]
    fn determinant_matches_product_exactly() {
        let p = qpt(&[(1, 10), (2, 10), (3, 10), (4, 10)]);
        for i in 0..4 {
            assert_eq!(
                volume_ratio_determinant(&p, i).unwrap(),
                volume_ratio_product(&p, i).unwrap()
            );
        }
    }

    #[test]
    fn group_factors() {
        let quarter = q(1, 4);
        let g = factor_g(&[quarter.clone(), quarter.clone()]).unwrap();
        let h = factor_h(&[quarter.clone(), quarter.clone()]).unwrap();
        assert_eq!(g, q(1, 6));
        assert_eq!(h, q(1, 9));
        assert_eq!(g * h, q(1, 54));
        assert!(factor_g(&[0.0, 0.5]).is_err());
        assert!(factor_h(&[1.0, 0.5]).is_err());
    }

    #[test]
    fn partial_sum_dimension_mismatch() {
        let cfg = CevianConfig::new(4, 2).unwrap();
        assert!(matches!(
            partial_sum(&pt(&[0.1, 0.2, 0.3, 0.4]), &cfg),
            Err(Error::DimensionMismatch {
                expected: 5,
                found: 4
            })
        ));
    }

    #[test]
    fn tetrahedron_equality_point_value() {
        let t = 0.22745204561175;
        let y = (1.0 - 2.0 * t) / 2.0;
        let cfg = CevianConfig::new(3, 2).unwrap();
        let v = partial_sum(&pt(&[t, t, y, y]), &cfg).unwrap();
        assert!((v - 0.018800151866697).abs() < 1e-13, "{v}");
    }

    #[test]
    fn breakdown_is_consistent() {
        let cfg = CevianConfig::new(4, 2).unwrap();
        let p = pt(&[0.1, 0.15, 0.2, 0.25, 0.3]);
        let b = RatioBreakdown::compute(&p, &cfg).unwrap();
        assert_eq!(b.per_index.len(), 5);
        assert!(b.per_index.iter().all(|&v| (0.0..1.0).contains(&v)));
        let head: f64 = b.per_index[..2].iter().sum();
        let all: f64 = b.per_index.iter().sum();
        assert!((head - b.partial_sum).abs() <= 1e-12 * b.partial_sum);
        assert!((all - b.full_sum).abs() <= 1e-12 * b.full_sum);
        assert!(b.partial_sum <= b.full_sum);
    }
}
