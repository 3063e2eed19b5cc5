//! Decision procedures and witnesses for the supported physical principles.
//!
//! Each checker takes an observable box (no-signaling required wherever
//! correlators are involved), computes a numeric witness, and reports a
//! verdict against the principle's bound.

mod ic;
mod lo;
mod ml;
mod ntcc;

pub use ic::{ic_negativity_rep, ic_van_dam, IcReport};
pub use lo::{lo_boundary, lo_evaluate, lo_orthogonal, lo_preset, lo1_family, LoEvent, LoVerdict};
pub use ml::{ml_macroscopic, ml_threshold};
pub use ntcc::{ntcc_ip_game, NtccResult};

use serde::Serialize;

use crate::boxes::Behavior;
use crate::Result;

/// Isotropic-line NTCC violation threshold in CHSH units: boxes with
/// S > 3.266 (gamma > 0.8165) admit trivial communication complexity.
/// Source: Brunner & Skrzypczyk, Phys. Rev. Lett. 102, 160403 (2009).
pub const NTCC_S_THRESHOLD: f64 = 3.266;

/// NTCC violation threshold via nonlocality distillation, in L1-norm units:
/// M* > 1.508 (gamma > 0.754). Source: Brunner & Skrzypczyk, Phys. Rev.
/// Lett. 102, 160403 (2009).
pub const NTCC_MSTAR_THRESHOLD: f64 = 1.508;

/// Verdict tolerance applied uniformly by the checkers.
const VERDICT_TOL: f64 = 1e-9;

/// A pass/fail decision together with the numeric quantity it was decided
/// on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdict {
    pub satisfied: bool,
    pub witness: f64,
}

/// TLM verdict; `zero_variance` flags inputs where a party's outcome was
/// deterministic and the correlation was set to 0 by convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TlmVerdict {
    pub satisfied: bool,
    /// Largest arcsine sum over the four sign placements.
    pub lhs: f64,
    pub zero_variance: bool,
}

/// Locality: all four |S_{m,n}| <= 2. The witness is the largest |S|.
pub fn check_local(behavior: &Behavior) -> Result<Verdict> {
    let witness = behavior.correlators()?.chsh_max_abs();
    Ok(Verdict {
        satisfied: witness <= 2.0 + VERDICT_TOL,
        witness,
    })
}

/// Uffink's quadratic inequality,
/// (e00 - e11)^2 + (e01 + e10)^2 <= 4, maximized over the four placements
/// of the distinguished pair.
pub fn check_uffink(behavior: &Behavior) -> Result<Verdict> {
    let e = behavior.correlators()?.e;
    let mut lhs = 0.0f64;
    for p in 0..2 {
        for q in 0..2 {
            let diff = e[1 - p][1 - q] - e[p][q];
            let sum = e[1 - p][q] + e[p][1 - q];
            lhs = lhs.max(diff * diff + sum * sum);
        }
    }
    Ok(Verdict {
        satisfied: lhs <= 4.0 + VERDICT_TOL,
        witness: lhs,
    })
}

/// The TLM (Tsirelson-Landau-Masanes) inequality with the covariance
/// substitution, the closed-form membership test for the NPA level-1 set:
/// the arcsine sum of the four correlations, maximized over the four minus
/// placements, must not exceed pi.
///
/// When a variance vanishes the outcome is deterministic, the joint
/// factorizes, and the correlation is taken to be 0.
pub fn check_tlm(behavior: &Behavior) -> Result<TlmVerdict> {
    let c = behavior.correlators()?;
    let var_a: Vec<f64> = c.ma.iter().map(|m| 1.0 - m * m).collect();
    let var_b: Vec<f64> = c.mb.iter().map(|m| 1.0 - m * m).collect();
    let mut zero_variance = false;
    let mut corr = [[0.0f64; 2]; 2];
    for x in 0..2 {
        for y in 0..2 {
            if var_a[x] < 1e-12 || var_b[y] < 1e-12 {
                zero_variance = true;
                corr[x][y] = 0.0;
            } else {
                corr[x][y] =
                    (c.e[x][y] - c.ma[x] * c.mb[y]) / (var_a[x] * var_b[y]).sqrt();
                corr[x][y] = corr[x][y].clamp(-1.0, 1.0);
            }
        }
    }
    let asin = |v: f64| v.asin();
    let mut lhs = 0.0f64;
    for mx in 0..2 {
        for my in 0..2 {
            let mut sum = 0.0;
            for x in 0..2 {
                for y in 0..2 {
                    let term = asin(corr[x][y]);
                    sum += if x == mx && y == my { -term } else { term };
                }
            }
            lhs = lhs.max(sum.abs());
        }
    }
    Ok(TlmVerdict {
        satisfied: lhs <= std::f64::consts::PI + VERDICT_TOL,
        lhs,
        zero_variance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_verdicts() {
        let v = check_local(&Behavior::noise()).unwrap();
        assert!(v.satisfied && v.witness.abs() < 1e-12);
        let v = check_local(&Behavior::isotropic(0.5).unwrap()).unwrap();
        assert!(v.satisfied && (v.witness - 2.0).abs() < 1e-12);
        let v = check_local(&Behavior::isotropic(0.6).unwrap()).unwrap();
        assert!(!v.satisfied && (v.witness - 2.4).abs() < 1e-12);
    }

    #[test]
    fn uffink_verdicts() {
        let v = check_uffink(&Behavior::noise()).unwrap();
        assert!(v.satisfied && v.witness.abs() < 1e-12);
        let v = check_uffink(&Behavior::pr(0).unwrap()).unwrap();
        assert!(!v.satisfied && (v.witness - 8.0).abs() < 1e-12);
        for gamma in [0.2, 0.5, 0.9] {
            let v = check_uffink(&Behavior::isotropic(gamma).unwrap()).unwrap();
            assert!(
                (v.witness - 8.0 * gamma * gamma).abs() < 1e-12,
                "gamma {gamma}: {}",
                v.witness
            );
        }
    }

    #[test]
    fn tlm_isotropic_is_four_asin() {
        for gamma in [0.1, 0.5, std::f64::consts::FRAC_1_SQRT_2, 0.9] {
            let v = check_tlm(&Behavior::isotropic(gamma).unwrap()).unwrap();
            assert!((v.lhs - 4.0 * gamma.asin()).abs() < 1e-12, "gamma {gamma}");
            assert!(!v.zero_variance);
        }
        let v = check_tlm(&Behavior::isotropic(std::f64::consts::FRAC_1_SQRT_2).unwrap())
            .unwrap();
        assert!((v.lhs - std::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn tlm_pr_violates() {
        let v = check_tlm(&Behavior::pr(0).unwrap()).unwrap();
        assert!(!v.satisfied);
        assert!((v.lhs - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn tlm_zero_variance_convention() {
        let v = check_tlm(&Behavior::deterministic(1, 1, 1, 1)).unwrap();
        assert!(v.satisfied);
        assert!(v.zero_variance);
        assert!(v.lhs.abs() < 1e-12);
    }
}
