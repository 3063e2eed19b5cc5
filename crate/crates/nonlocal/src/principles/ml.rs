//! Macroscopic Locality: coarse-grained statistics of N iid box copies.
//!
//! For a fixed input pair, each of the n copies produces an outcome pair;
//! only the detector count differences (number of 0s minus number of 1s per
//! party) survive coarse graining. Thresholding the differences at zero
//! gives the binary macroscopic outcomes; ties map to outcome 0 for all n,
//! so even n inherit the known asymmetry.

use crate::boxes::{Behavior, PAIRS};
use crate::optim::min_l1;
use crate::{Error, Result};

const LOCAL_TOL: f64 = 1e-8;

/// The macroscopic box obtained from n iid copies of a microscopic
/// no-signaling box.
///
/// The joint distribution of the two count differences is built by exact
/// dynamic-programming convolution over the copies ((2n+1)^2 states), then
/// thresholded: difference >= 0 maps to outcome 0.
pub fn ml_macroscopic(behavior: &Behavior, n: usize) -> Result<Behavior> {
    behavior.correlators()?;
    if n == 0 || n > 64 {
        return Err(Error::InvalidArgument(format!(
            "copy count {n} outside 1..=64"
        )));
    }
    let side = 2 * n + 1;
    let mut p = [[0.0; 4]; 4];
    for (x, y) in PAIRS {
        let outcome_probs: Vec<(i64, i64, f64)> = PAIRS
            .iter()
            .map(|&(a, b)| {
                let step = |bit: u8| if bit == 0 { 1i64 } else { -1i64 };
                (step(a), step(b), behavior.prob(a, b, x, y))
            })
            .collect();
        // dist[(da+n)*side + (db+n)] over count differences
        let mut dist = vec![0.0f64; side * side];
        dist[n * side + n] = 1.0;
        for _ in 0..n {
            let mut next = vec![0.0f64; side * side];
            for (i, &w) in dist.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let da = (i / side) as i64 - n as i64;
                let db = (i % side) as i64 - n as i64;
                for &(sa, sb, q) in &outcome_probs {
                    if q == 0.0 {
                        continue;
                    }
                    let ia = (da + sa + n as i64) as usize;
                    let ib = (db + sb + n as i64) as usize;
                    next[ia * side + ib] += w * q;
                }
            }
            dist = next;
        }
        let row = &mut p[(2 * x + y) as usize];
        for (i, &w) in dist.iter().enumerate() {
            let da = (i / side) as i64 - n as i64;
            let db = (i % side) as i64 - n as i64;
            let alpha = u8::from(da < 0);
            let beta = u8::from(db < 0);
            row[(2 * alpha + beta) as usize] += w;
        }
    }
    Behavior::from_rows(p)
}

/// Largest gamma along a one-parameter family for which the n-copy
/// macroscopic box is still local (M* = 1), located by bisection to `tol`.
///
/// Requires odd n: even copy counts carry the tie asymmetry and are not
/// comparable along the family.
pub fn ml_threshold<F>(family: F, n: usize, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<Behavior>,
{
    if n % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "copy count {n} must be odd"
        )));
    }
    if tol <= 0.0 {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let is_local = |gamma: f64| -> Result<bool> {
        let b = ml_macroscopic(&family(gamma)?, n)?;
        Ok(min_l1(&b)?.m_star <= 1.0 + LOCAL_TOL)
    };
    if is_local(1.0)? {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if is_local(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force oracle: enumerate all 4^n outcome tuples per input pair.
    fn ml_brute_force(behavior: &Behavior, n: usize) -> Behavior {
        let mut p = [[0.0; 4]; 4];
        for (x, y) in PAIRS {
            for tuple in 0..4usize.pow(n as u32) {
                let mut weight = 1.0;
                let mut da = 0i64;
                let mut db = 0i64;
                let mut t = tuple;
                for _ in 0..n {
                    let (a, b) = PAIRS[t % 4];
                    t /= 4;
                    weight *= behavior.prob(a, b, x, y);
                    da += if a == 0 { 1 } else { -1 };
                    db += if b == 0 { 1 } else { -1 };
                }
                let alpha = u8::from(da < 0);
                let beta = u8::from(db < 0);
                p[(2 * x + y) as usize][(2 * alpha + beta) as usize] += weight;
            }
        }
        Behavior::from_rows(p).unwrap()
    }

    #[test]
    fn single_copy_is_identity() {
        let b = Behavior::isotropic(0.8).unwrap();
        let m = ml_macroscopic(&b, 1).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                assert!((m.rows()[r][c] - b.rows()[r][c]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn pr_is_fixed_point_for_odd_n() {
        for n in [1, 3, 5] {
            let m = ml_macroscopic(&Behavior::pr(0).unwrap(), n).unwrap();
            let e = m.correlators().unwrap().e;
            assert!((e[0][0] - 1.0).abs() < 1e-12, "n {n}");
            assert!((e[0][1] - 1.0).abs() < 1e-12);
            assert!((e[1][0] - 1.0).abs() < 1e-12);
            assert!((e[1][1] + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn even_n_tie_asymmetry_on_pr() {
        // with two copies the anticorrelated row ties with probability 1/2,
        // and ties map to (0,0), so the macroscopic box is not PR
        let m = ml_macroscopic(&Behavior::pr(0).unwrap(), 2).unwrap();
        let e = m.correlators().unwrap().e;
        assert!((e[1][1] - 0.0).abs() < 1e-12, "e11 = {}", e[1][1]);
        assert!((e[0][0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matches_brute_force_small_n() {
        for n in 1..=3 {
            for gamma in [0.0, 0.6, 1.0] {
                let b = Behavior::isotropic(gamma).unwrap();
                let dp = ml_macroscopic(&b, n).unwrap();
                let bf = ml_brute_force(&b, n);
                for r in 0..4 {
                    for c in 0..4 {
                        assert!(
                            (dp.rows()[r][c] - bf.rows()[r][c]).abs() <= 1e-12,
                            "n {n} gamma {gamma} ({r},{c})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn preserves_no_signaling() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let b = Behavior::random_ns(&mut rng);
            for n in [2, 5, 9] {
                let m = ml_macroscopic(&b, n).unwrap();
                assert!(m.is_no_signaling(1e-9));
            }
        }
    }

    #[test]
    fn threshold_n1_is_half() {
        let t = ml_threshold(Behavior::isotropic, 1, 1e-6).unwrap();
        assert!((t - 0.5).abs() < 1e-6, "threshold {t}");
    }

    #[test]
    fn threshold_grows_with_copies() {
        let t1 = ml_threshold(Behavior::isotropic, 1, 1e-6).unwrap();
        let t3 = ml_threshold(Behavior::isotropic, 3, 1e-6).unwrap();
        assert!(t3 > t1 + 1e-4, "t1 {t1} t3 {t3}");
        assert!(t3 < std::f64::consts::FRAC_1_SQRT_2 + 1e-3);
    }

    #[test]
    fn rejects_bad_copy_counts() {
        assert!(ml_macroscopic(&Behavior::noise(), 0).is_err());
        assert!(ml_macroscopic(&Behavior::noise(), 65).is_err());
        assert!(ml_threshold(Behavior::isotropic, 2, 1e-6).is_err());
    }
}
