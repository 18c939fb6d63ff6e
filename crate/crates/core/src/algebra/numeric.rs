//! Truncated nested sums, used as an independent numerical oracle.

use crate::error::{Error, Result};
use crate::words::IndexWord;

/// `sum over N >= n1 > n2 > ... > nD >= 1 of prod ni^(-mi)` in double
/// precision. Plain summation: no tail correction is applied, so the value
/// is nondecreasing in `n_max`.
pub fn eval_truncated(w: &IndexWord, n_max: usize) -> Result<f64> {
    if !w.is_admissible() {
        return Err(Error::NotAdmissible(w.clone()));
    }
    if n_max < w.depth() {
        return Err(Error::Config(format!(
            "truncation {n_max} is smaller than the depth of {w}"
        )));
    }
    // partial[n] holds the inner nested sum over indices <= n
    let mut partial = vec![1.0f64; n_max + 1];
    for &m in w.indices().iter().rev() {
        let mut next = vec![0.0f64; n_max + 1];
        let mut acc = 0.0;
        for n in 1..=n_max {
            acc += (n as f64).powi(-(m as i32)) * partial[n - 1];
            next[n] = acc;
        }
        partial = next;
        partial[0] = 0.0;
    }
    Ok(partial[n_max])
}

/// Crude bound on the truncation tail `N^(1-m1)/(m1-1)` of the outer sum.
pub fn tail_bound(w: &IndexWord, n_max: usize) -> f64 {
    let m1 = w.indices()[0] as f64;
    (n_max as f64).powf(1.0 - m1) / (m1 - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn w(v: &[u32]) -> IndexWord {
        IndexWord::new(v.to_vec()).unwrap()
    }

    #[test]
    fn zeta_two_and_three() {
        let z2 = eval_truncated(&w(&[2]), 1000).unwrap();
        assert!((z2 - PI * PI / 6.0).abs() < 1e-3);
        assert!(z2 < PI * PI / 6.0);
        let z3 = eval_truncated(&w(&[3]), 2000).unwrap();
        assert!((z3 - 1.202_056_903_159_594).abs() < 1e-6);
    }

    #[test]
    fn euler_identity() {
        let a = eval_truncated(&w(&[2, 1]), 2000).unwrap();
        let b = eval_truncated(&w(&[3]), 2000).unwrap();
        // the trailing 1 gives a tail of order ln(N)/N
        let n = 2000f64;
        assert!((a - b).abs() < 2.0 * n.ln() / n);
        assert!((a - b).abs() > 1e-4);
    }

    #[test]
    fn monotone_in_truncation() {
        let x = w(&[3, 1, 2]);
        let mut last = 0.0;
        for n in [3, 10, 100, 500] {
            let v = eval_truncated(&x, n).unwrap();
            assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn depth_two_by_brute_force() {
        let n = 60;
        let mut brute = 0.0;
        for a in 1..=n {
            for b in 1..a {
                brute += 1.0 / ((a * a * a) as f64 * b as f64);
            }
        }
        assert!((eval_truncated(&w(&[3, 1]), n).unwrap() - brute).abs() < 1e-12);
    }

    #[test]
    fn rejects_divergent_and_short() {
        assert!(eval_truncated(&w(&[1, 2]), 100).is_err());
        assert!(eval_truncated(&w(&[2, 1, 1]), 2).is_err());
    }
}
