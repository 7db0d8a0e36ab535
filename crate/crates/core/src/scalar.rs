//! Ordered-field scalars used by the simplex formulas.
//!
//! Two realizations exist: `f64` for fast evaluation and [`BigRational`]
//! for exact identities. Determinants follow the realization: partial
//! pivoting for floats, fraction-free (Bareiss) elimination for rationals.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

pub trait Scalar:
    Clone + Debug + PartialOrd + Signed + FromPrimitive + Send + Sync + 'static
{
    /// `true` when arithmetic is exact.
    const EXACT: bool;

    /// Allowed deviation of a coordinate sum from 1.
    fn sum_tolerance() -> Self;

    fn from_count(v: usize) -> Self {
        <Self as FromPrimitive>::from_usize(v).expect("usize fits every scalar")
    }

    fn to_f64(&self) -> f64;

    /// Determinant of a square matrix given by rows.
    fn determinant(rows: &[Vec<Self>]) -> Self;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn sum_tolerance() -> Self {
        1e-12
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn determinant(rows: &[Vec<f64>]) -> f64 {
        det_partial_pivot(rows.to_vec())
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn sum_tolerance() -> Self {
        BigRational::zero()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn determinant(rows: &[Vec<BigRational>]) -> BigRational {
        det_exact(rows)
    }
}

pub(crate) fn det_partial_pivot(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        for row in col + 1..n {
            let factor = a[row][col] / p;
            if factor != 0.0 {
                let (above, below) = a.split_at_mut(row);
                for (x, y) in below[0][col..].iter_mut().zip(&above[col][col..]) {
                    *x -= factor * y;
                }
            }
        }
    }
    det
}

/// Clears row denominators, runs Bareiss elimination over the integers and
/// rescales.
fn det_exact(rows: &[Vec<BigRational>]) -> BigRational {
    let n = rows.len();
    if n == 0 {
        return BigRational::one();
    }
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            scale *= &lcm;
            row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect()
        })
        .collect();
    let det = bareiss(&mut m);
    BigRational::new(det, scale)
}

pub(crate) fn bareiss(m: &mut [Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Exact rational from an `f64` (every finite double is a dyadic rational).
pub fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}
