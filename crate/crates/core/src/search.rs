//! Exact search for rational zeros of `q(x)` over a grid of `(k, m)`.
//!
//! Candidates come from the rational root theorem: a zero `p/r` in lowest
//! terms of an integer polynomial has `p` dividing the constant term and `r`
//! dividing the leading coefficient. Each candidate is judged twice, by
//! integer evaluation of the expanded cubic and by rational evaluation of
//! its factored form, and the two verdicts must agree.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::{Read, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::optimum::CubicPoly;

/// Cells whose candidate count exceeds this are aborted.
pub const CANDIDATE_LIMIT: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellStatus {
    Complete,
    /// `q` is identically zero (`k = 0`, `m = 1`); `0` stands in as a zero.
    ZeroPolynomial,
    /// Too many candidates; only zeros found before enumeration are kept.
    Aborted,
}

impl CellStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CellStatus::Complete => "complete",
            CellStatus::ZeroPolynomial => "zero-polynomial",
            CellStatus::Aborted => "aborted",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "complete" => Some(CellStatus::Complete),
            "zero-polynomial" => Some(CellStatus::ZeroPolynomial),
            "aborted" => Some(CellStatus::Aborted),
            _ => None,
        }
    }
}

/// Rational zeros of one cubic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellResult {
    pub k: u64,
    pub m: u64,
    pub status: CellStatus,
    /// Distinct zeros in ascending order.
    pub zeros: Vec<BigRational>,
    pub candidates_tested: u64,
}

/// `p/r` in lowest terms, always with an explicit denominator.
pub fn format_rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let (p, r) = s.split_once('/').unwrap_or((s, "1"));
    let p: BigInt = p.trim().parse().ok()?;
    let r: BigInt = r.trim().parse().ok()?;
    if r.is_zero() {
        return None;
    }
    Some(BigRational::new(p, r))
}

/// `a3 p^3 + a2 p^2 r + a1 p r^2 + a0 r^3 == 0` for `x = p/r`.
pub fn is_exact_zero(q: &CubicPoly, x: &BigRational) -> bool {
    let (p, r) = (x.numer(), x.denom());
    let value = &q.a3 * p * p * p + &q.a2 * p * p * r + &q.a1 * p * r * r + &q.a0 * r * r * r;
    value.is_zero()
}

fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut n = n.clone();
    let mut factors = Vec::new();
    let mut d = BigUint::from(2u32);
    while &d * &d <= n {
        let mut e = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            factors.push((d.clone(), e));
        }
        d += 1u32;
    }
    if n > BigUint::one() {
        factors.push((n, 1));
    }
    factors
}

fn divisors_from(factors: &[(BigUint, u32)]) -> Vec<BigUint> {
    let mut divs = vec![BigUint::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
        for d in &divs {
            let mut pk = BigUint::one();
            for _ in 0..=*e {
                next.push(d * &pk);
                pk *= p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

/// Positive divisors in ascending order.
pub fn divisors(n: &BigUint) -> Vec<BigUint> {
    divisors_from(&factorize(n))
}

/// Number of coprime pairs `(p, r)` with `p | a`, `r | b`.
fn coprime_pair_count(a: &[(BigUint, u32)], b: &[(BigUint, u32)]) -> u128 {
    let a: BTreeMap<&BigUint, u32> = a.iter().map(|(p, e)| (p, *e)).collect();
    let b: BTreeMap<&BigUint, u32> = b.iter().map(|(p, e)| (p, *e)).collect();
    let primes: BTreeSet<&BigUint> = a.keys().chain(b.keys()).copied().collect();
    primes
        .into_iter()
        .map(|p| {
            let (e, f) = (
                a.get(p).copied().unwrap_or(0),
                b.get(p).copied().unwrap_or(0),
            );
            // p^i | a and p^j | b with min(i, j) = 0
            (e + f + 1) as u128
        })
        .product()
}

/// The polynomial left after dropping leading zero coefficients and
/// factors of `x`, plus whether `x` divided `q`. `None` for the zero
/// polynomial.
fn reduced_coefficients(q: &CubicPoly) -> Option<(Vec<BigInt>, bool)> {
    let mut coeffs: Vec<BigInt> = q
        .coefficients()
        .into_iter()
        .skip_while(|c| c.is_zero())
        .cloned()
        .collect();
    if coeffs.is_empty() {
        return None;
    }
    let mut has_zero_root = false;
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
        has_zero_root = true;
    }
    Some((coeffs, has_zero_root))
}

fn magnitude(x: &BigInt) -> BigUint {
    x.magnitude().clone()
}

/// Number of candidates [`rational_zeros`] evaluates for `(k, m)`.
pub fn candidate_count(k: u64, m: u64) -> u128 {
    let q = CubicPoly::new(k, m);
    match reduced_coefficients(&q) {
        Some((coeffs, _)) if coeffs.len() > 1 => {
            let lead = factorize(&magnitude(&coeffs[0]));
            let constant = factorize(&magnitude(coeffs.last().unwrap()));
            2 * coprime_pair_count(&constant, &lead)
        }
        _ => 0,
    }
}

/// Every rational zero of `q(x)` for `(k, m)`.
pub fn rational_zeros(k: u64, m: u64) -> Result<CellResult> {
    rational_zeros_with_limit(k, m, CANDIDATE_LIMIT)
}

pub fn rational_zeros_with_limit(k: u64, m: u64, limit: u64) -> Result<CellResult> {
    let q = CubicPoly::new(k, m);
    let Some((coeffs, has_zero_root)) = reduced_coefficients(&q) else {
        return Ok(CellResult {
            k,
            m,
            status: CellStatus::ZeroPolynomial,
            zeros: vec![BigRational::zero()],
            candidates_tested: 0,
        });
    };

    let mut zeros = BTreeSet::new();
    if has_zero_root {
        zeros.insert(BigRational::zero());
    }
    let mut tested = 0u64;
    let mut status = CellStatus::Complete;

    if coeffs.len() > 1 {
        let lead = factorize(&magnitude(&coeffs[0]));
        let constant = factorize(&magnitude(coeffs.last().unwrap()));
        let count = 2 * coprime_pair_count(&constant, &lead);
        if count > limit as u128 {
            status = CellStatus::Aborted;
        } else {
            let numerators = divisors_from(&constant);
            let denominators = divisors_from(&lead);
            for p in &numerators {
                for r in &denominators {
                    if !p.gcd(r).is_one() {
                        continue;
                    }
                    for sign in [Sign::Plus, Sign::Minus] {
                        tested += 1;
                        let x = BigRational::new_raw(
                            BigInt::from_biguint(sign, p.clone()),
                            BigInt::from_biguint(Sign::Plus, r.clone()),
                        );
                        let expanded = is_exact_zero(&q, &x);
                        let factored = q.eval_factored_exact(&x).is_zero();
                        if expanded != factored {
                            return Err(Error::Internal(format!(
                                "verdicts disagree at {} for k = {k}, m = {m}",
                                format_rational(&x)
                            )));
                        }
                        if expanded {
                            zeros.insert(x);
                        }
                    }
                }
            }
        }
    }

    Ok(CellResult {
        k,
        m,
        status,
        zeros: zeros.into_iter().collect(),
        candidates_tested: tested,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hit {
    pub k: u64,
    pub m: u64,
    pub zero: BigRational,
    /// `0 < zero < 1/k`.
    pub in_interval: bool,
}

impl Hit {
    /// `k > 1` and `m > 1`, the range where existence of a rational zero is
    /// unknown.
    pub fn is_open_question(&self) -> bool {
        self.k > 1 && self.m > 1
    }
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub k_max: u64,
    pub m_max: u64,
    /// Row-major over `0 <= k <= k_max`, `0 <= m <= m_max`.
    pub cells: Vec<CellResult>,
    /// Sorted by `(k, m, zero)`.
    pub hits: Vec<Hit>,
    pub candidates_tested: u64,
    /// Wall time; not part of the deterministic content.
    pub duration: Duration,
}

impl SearchReport {
    pub fn open_question_hits(&self) -> impl Iterator<Item = &Hit> {
        self.hits.iter().filter(|h| h.is_open_question())
    }

    pub fn cell(&self, k: u64, m: u64) -> Option<&CellResult> {
        self.cells.iter().find(|c| c.k == k && c.m == m)
    }

    pub fn aborted(&self) -> impl Iterator<Item = &CellResult> {
        self.cells
            .iter()
            .filter(|c| c.status == CellStatus::Aborted)
    }

    fn assemble(k_max: u64, m_max: u64, cells: Vec<CellResult>, duration: Duration) -> Self {
        let hits = cells
            .iter()
            .flat_map(|c| {
                c.zeros.iter().map(move |z| Hit {
                    k: c.k,
                    m: c.m,
                    zero: z.clone(),
                    in_interval: c.k > 0
                        && z.is_positive()
                        && *z < BigRational::new(BigInt::one(), BigInt::from(c.k)),
                })
            })
            .collect();
        let candidates_tested = cells.iter().map(|c| c.candidates_tested).sum();
        Self {
            k_max,
            m_max,
            cells,
            hits,
            candidates_tested,
            duration,
        }
    }
}

fn check_grid(k_max: u64, m_max: u64) -> Result<()> {
    if k_max < 2 || m_max < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid bounds must be at least 2, got k_max = {k_max}, m_max = {m_max}"
        )));
    }
    Ok(())
}

fn compute_cells(cells: &[(u64, u64)]) -> Result<Vec<CellResult>> {
    cells
        .par_iter()
        .map(|&(k, m)| rational_zeros(k, m))
        .collect()
}

/// Runs [`rational_zeros`] over `0 <= k <= k_max`, `0 <= m <= m_max`.
pub fn search_grid(k_max: u64, m_max: u64) -> Result<SearchReport> {
    check_grid(k_max, m_max)?;
    let start = Instant::now();
    let grid: Vec<(u64, u64)> = (0..=k_max)
        .flat_map(|k| (0..=m_max).map(move |m| (k, m)))
        .collect();
    let cells = compute_cells(&grid)?;
    Ok(SearchReport::assemble(k_max, m_max, cells, start.elapsed()))
}

/// Like [`search_grid`], resuming from and appending to a checkpoint file
/// of `k,m,status,zeros` lines. Rows of the grid are the checkpoint chunks.
pub fn search_grid_with_checkpoint(k_max: u64, m_max: u64, path: &Path) -> Result<SearchReport> {
    check_grid(k_max, m_max)?;
    let start = Instant::now();
    let mut done = load_checkpoint(path)?;
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;

    for k in 0..=k_max {
        let missing: Vec<(u64, u64)> = (0..=m_max)
            .filter(|&m| !done.contains_key(&(k, m)))
            .map(|m| (k, m))
            .collect();
        if missing.is_empty() {
            continue;
        }
        let computed = compute_cells(&missing)?;
        let mut chunk = String::new();
        for cell in &computed {
            chunk.push_str(&checkpoint_line(cell));
        }
        file.write_all(chunk.as_bytes())?;
        file.flush()?;
        for cell in computed {
            done.insert((cell.k, cell.m), cell);
        }
    }

    let cells = (0..=k_max)
        .flat_map(|k| (0..=m_max).map(move |m| (k, m)))
        .map(|key| done.remove(&key).expect("every cell computed or loaded"))
        .collect();
    Ok(SearchReport::assemble(k_max, m_max, cells, start.elapsed()))
}

pub fn checkpoint_line(cell: &CellResult) -> String {
    let zeros: Vec<String> = cell.zeros.iter().map(format_rational).collect();
    format!(
        "{},{},{},{}\n",
        cell.k,
        cell.m,
        cell.status.as_str(),
        zeros.join(";")
    )
}

fn parse_checkpoint_line(line: &str, number: usize) -> Result<CellResult> {
    let bad = |reason: &str| Error::Checkpoint {
        line: number,
        reason: reason.to_string(),
    };
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 4 {
        return Err(bad("expected 4 comma-separated fields"));
    }
    let k: u64 = fields[0].parse().map_err(|_| bad("bad k"))?;
    let m: u64 = fields[1].parse().map_err(|_| bad("bad m"))?;
    let status = CellStatus::parse(fields[2]).ok_or_else(|| bad("unknown status"))?;
    let zeros = if fields[3].is_empty() {
        Vec::new()
    } else {
        fields[3]
            .split(';')
            .map(|z| parse_rational(z).ok_or_else(|| bad("bad zero")))
            .collect::<Result<Vec<_>>>()?
    };
    let q = CubicPoly::new(k, m);
    if zeros.iter().any(|z| !is_exact_zero(&q, z)) {
        return Err(bad("recorded value is not a zero of q"));
    }
    let candidates_tested = match status {
        CellStatus::Complete => candidate_count(k, m)
            .to_u64()
            .ok_or_else(|| bad("candidate count overflows"))?,
        _ => 0,
    };
    Ok(CellResult {
        k,
        m,
        status,
        zeros,
        candidates_tested,
    })
}

/// Reads the complete lines of a checkpoint. A trailing partial line (an
/// interrupted write) is cut off the file so appends start on a fresh line.
fn load_checkpoint(path: &Path) -> Result<BTreeMap<(u64, u64), CellResult>> {
    let mut records = BTreeMap::new();
    let mut contents = String::new();
    match File::open(path) {
        Ok(mut f) => {
            f.read_to_string(&mut contents)?;
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(records),
        Err(e) => return Err(e.into()),
    }
    let complete_len = contents.rfind('\n').map_or(0, |i| i + 1);
    if complete_len < contents.len() {
        OpenOptions::new()
            .write(true)
            .open(path)?
            .set_len(complete_len as u64)?;
    }
    for (i, line) in contents[..complete_len].lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let cell = parse_checkpoint_line(line, i + 1)?;
        match records.get(&(cell.k, cell.m)) {
            Some(existing) if *existing != cell => {
                return Err(Error::Checkpoint {
                    line: i + 1,
                    reason: format!("conflicting records for k = {}, m = {}", cell.k, cell.m),
                })
            }
            _ => {
                records.insert((cell.k, cell.m), cell);
            }
        }
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn divisor_enumeration() {
        let d: Vec<u32> = divisors(&BigUint::from(12u32))
            .iter()
            .map(|x| x.to_u32().unwrap())
            .collect();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(&BigUint::from(1u32)).len(), 1);
        assert_eq!(divisors(&BigUint::from(97u32)).len(), 2);
    }

    #[test]
    fn k1_has_zero_one() {
        let c = rational_zeros(1, 5).unwrap();
        assert!(c.zeros.contains(&rat(1, 1)), "{c:?}");
    }

    #[test]
    fn m1_has_zero_at_origin() {
        let c = rational_zeros(3, 1).unwrap();
        assert!(c.zeros.contains(&rat(0, 1)));
    }

    #[test]
    fn m0_collapses() {
        let c = rational_zeros(4, 0).unwrap();
        assert!(c.zeros.contains(&rat(4, 1)));
        assert!(c.zeros.contains(&rat(1, 4)));
    }

    #[test]
    fn tetrahedron_cubic_has_no_rational_zero() {
        let c = rational_zeros(2, 2).unwrap();
        assert_eq!(c.candidates_tested, 8);
        assert!(c.zeros.is_empty());
        assert_eq!(candidate_count(2, 2), 8);
    }

    #[test]
    fn zero_polynomial_cell() {
        let c = rational_zeros(0, 1).unwrap();
        assert_eq!(c.status, CellStatus::ZeroPolynomial);
        assert_eq!(c.zeros, vec![rat(0, 1)]);
    }

    #[test]
    fn k0_is_linear() {
        // q = -(m - 1) x
        let c = rational_zeros(0, 4).unwrap();
        assert_eq!(c.zeros, vec![rat(0, 1)]);
        assert_eq!(c.status, CellStatus::Complete);
    }

    #[test]
    fn guard_aborts_large_cells() {
        let c = rational_zeros_with_limit(2, 2, 4).unwrap();
        assert_eq!(c.status, CellStatus::Aborted);
        assert_eq!(c.candidates_tested, 0);
    }

    #[test]
    fn counts_match_enumeration() {
        for k in 0..12 {
            for m in 0..12 {
                let c = rational_zeros(k, m).unwrap();
                assert_eq!(
                    c.candidates_tested as u128,
                    candidate_count(k, m),
                    "k={k} m={m}"
                );
            }
        }
    }

    #[test]
    fn rational_format_roundtrip() {
        for x in [rat(0, 1), rat(-3, 4), rat(4, 1), rat(1, 12)] {
            assert_eq!(parse_rational(&format_rational(&x)), Some(x));
        }
        assert_eq!(format_rational(&rat(4, 1)), "4/1");
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn small_grid() {
        let r = search_grid(5, 5).unwrap();
        assert_eq!(r.cells.len(), 36);
        for c in &r.cells {
            if c.k <= 1 || c.m <= 1 {
                assert!(!c.zeros.is_empty(), "{c:?}");
            }
        }
        assert!(r.cell(2, 2).unwrap().zeros.is_empty());
        for h in &r.hits {
            assert!(is_exact_zero(&CubicPoly::new(h.k, h.m), &h.zero));
        }
        assert!(search_grid(1, 5).is_err());
    }

    #[test]
    fn checkpoint_line_format() {
        let c = rational_zeros(4, 0).unwrap();
        let line = checkpoint_line(&c);
        assert!(line.starts_with("4,0,complete,"));
        assert!(line.ends_with('\n'));
        assert_eq!(parse_checkpoint_line(line.trim_end(), 1).unwrap(), c);
        assert_eq!(
            checkpoint_line(&rational_zeros(2, 2).unwrap()),
            "2,2,complete,\n"
        );
    }

    #[test]
    fn checkpoint_rejects_false_zero() {
        assert!(parse_checkpoint_line("2,2,complete,1/2", 1).is_err());
        assert!(parse_checkpoint_line("2,2,bogus,", 1).is_err());
        assert!(parse_checkpoint_line("2,2,complete", 1).is_err());
    }
}
