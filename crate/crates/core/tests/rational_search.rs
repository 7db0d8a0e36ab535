use std::fs;

use cevopt_core::search::{
    checkpoint_line, divisors, is_exact_zero, rational_zeros, search_grid,
    search_grid_with_checkpoint, CellStatus, SearchReport,
};
use cevopt_core::CubicPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rendered(r: &SearchReport) -> String {
    r.cells.iter().map(checkpoint_line).collect()
}

#[test]
fn divisor_completeness() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut checked = 0;
    while checked < 1000 {
        let k: u64 = rng.gen_range(1..=30);
        let m: u64 = rng.gen_range(2..=30);
        let q = CubicPoly::new(k, m);
        let a0 = q.a0.magnitude().clone();
        let a3 = q.a3.magnitude().clone();
        let nums = divisors(&a0);
        let dens = divisors(&a3);
        let p: i64 = rng.gen_range(1..=3000);
        let r: i64 = rng.gen_range(1..=3000);
        if p.gcd(&r) != 1 {
            continue;
        }
        let (pb, rb) = (BigInt::from(p), BigInt::from(r));
        let enumerated = nums.iter().any(|d| BigInt::from(d.clone()) == pb)
            && dens.iter().any(|d| BigInt::from(d.clone()) == rb);
        if !enumerated {
            let a0 = BigInt::from(a0.clone());
            let a3 = BigInt::from(a3.clone());
            assert!(!(&a0 % &pb).is_zero() || !(&a3 % &rb).is_zero());
            // and such a candidate is never a zero
            let x = BigRational::new(pb, rb);
            assert!(!is_exact_zero(&q, &x) && !is_exact_zero(&q, &-x));
        }
        checked += 1;
    }
}

#[test]
fn full_grid_is_certified() {
    let r = search_grid(50, 50).unwrap();
    assert_eq!(r.cells.len(), 51 * 51);
    assert_eq!(r.aborted().count(), 0);
    for c in &r.cells {
        if c.k <= 1 || c.m <= 1 {
            assert!(!c.zeros.is_empty(), "{c:?}");
        }
        let q = CubicPoly::new(c.k, c.m);
        for z in &c.zeros {
            assert!(is_exact_zero(&q, z));
            assert!(q.eval_factored_exact(z).is_zero());
        }
    }
    for h in &r.hits {
        assert!(is_exact_zero(&CubicPoly::new(h.k, h.m), &h.zero));
        if h.in_interval {
            assert!(h.zero.is_positive());
        }
    }
    let cell = r.cell(2, 2).unwrap();
    assert_eq!(cell.candidates_tested, 8);
    assert!(cell.zeros.is_empty());
    // hits come out ordered by (k, m, zero)
    for w in r.hits.windows(2) {
        assert!(
            (w[0].k, w[0].m) < (w[1].k, w[1].m)
                || ((w[0].k, w[0].m) == (w[1].k, w[1].m) && w[0].zero < w[1].zero)
        );
    }
}

#[test]
fn search_ignores_thread_count() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| rendered(&search_grid(20, 20).unwrap()))
    };
    let one = run(1);
    assert_eq!(one, run(2));
    assert_eq!(one, run(7));
}

#[test]
fn checkpoint_resume_equals_uninterrupted_run() {
    let dir = tempfile::tempdir().unwrap();
    let full_path = dir.path().join("full.ckpt");
    let full = search_grid_with_checkpoint(6, 5, &full_path).unwrap();
    assert_eq!(rendered(&full), rendered(&search_grid(6, 5).unwrap()));
    let written = fs::read_to_string(&full_path).unwrap();
    assert_eq!(written.lines().count(), 7 * 6);

    // keep 15 lines plus half of the next one, as if interrupted mid-write
    let lines: Vec<&str> = written.split_inclusive('\n').collect();
    let mut partial: String = lines[..15].concat();
    partial.push_str(&lines[15][..3]);
    let resumed_path = dir.path().join("resumed.ckpt");
    fs::write(&resumed_path, partial).unwrap();

    let resumed = search_grid_with_checkpoint(6, 5, &resumed_path).unwrap();
    assert_eq!(rendered(&resumed), rendered(&full));
    assert_eq!(resumed.candidates_tested, full.candidates_tested);
    assert_eq!(resumed.hits, full.hits);

    let mut after: Vec<String> = fs::read_to_string(&resumed_path)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    let mut before: Vec<String> = written.lines().map(String::from).collect();
    after.sort();
    before.sort();
    assert_eq!(after, before);
}

#[test]
fn corrupt_checkpoint_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.ckpt");
    fs::write(&path, "2,2,complete,1/2\n").unwrap();
    assert!(search_grid_with_checkpoint(3, 3, &path).is_err());
}

#[test]
fn degenerate_cells() {
    assert_eq!(
        rational_zeros(0, 1).unwrap().status,
        CellStatus::ZeroPolynomial
    );
    assert_eq!(rational_zeros(0, 0).unwrap().zeros.len(), 1);
    for m in 0..6 {
        let c = rational_zeros(1, m).unwrap();
        assert!(
            c.zeros.contains(&BigRational::from_integer(1.into())),
            "{c:?}"
        );
    }
}
