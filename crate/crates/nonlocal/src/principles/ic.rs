//! Information Causality via the van Dam protocol.
//!
//! Alice holds two random bits (alpha0, alpha1), Bob holds a random bit
//! beta and must guess alpha_beta after receiving one classical bit. Alice
//! inputs x = alpha0 XOR alpha1 into the shared box and sends alpha0 XOR a;
//! Bob inputs y = beta and guesses g = alpha0 XOR a XOR b. IC demands the
//! total mutual information gained not exceed the one transmitted bit; for
//! this protocol the violation criterion is E_I^2 + E_II^2 > 1.

use serde::Serialize;

use crate::boxes::Behavior;
use crate::quasiprob::{atom_bits, f_exponent, Jqpd};
use crate::Result;

/// Success probabilities, bias form, criterion value, and exact mutual
/// information for the van Dam protocol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IcReport {
    /// Success probability when Bob's bit is 0.
    pub p_i: f64,
    /// Success probability when Bob's bit is 1.
    pub p_ii: f64,
    /// E_I = 2 P_I - 1.
    pub e_i: f64,
    /// E_II = 2 P_II - 1.
    pub e_ii: f64,
    /// E_I^2 + E_II^2; the protocol violates IC when this exceeds 1.
    pub criterion_lhs: f64,
    /// Sum over beta of I(alpha_beta : g | beta), in bits.
    pub mutual_info_total: f64,
    pub violates_ic: bool,
}

/// Runs the van Dam protocol analysis on a no-signaling box.
pub fn ic_van_dam(behavior: &Behavior) -> Result<IcReport> {
    // correlator computation doubles as the signaling check
    behavior.correlators()?;

    let p_xor = |parity: u8, x: u8, y: u8| -> f64 {
        (0..2u8)
            .flat_map(|a| (0..2u8).map(move |b| (a, b)))
            .filter(|&(a, b)| a ^ b == parity)
            .map(|(a, b)| behavior.prob(a, b, x, y))
            .sum()
    };
    let p_i = 0.5 * (p_xor(0, 0, 0) + p_xor(0, 1, 0));
    let p_ii = 0.5 * (p_xor(0, 0, 1) + p_xor(1, 1, 1));
    let e_i = 2.0 * p_i - 1.0;
    let e_ii = 2.0 * p_ii - 1.0;
    let criterion_lhs = e_i * e_i + e_ii * e_ii;

    let mutual_info_total = (0..2u8).map(|beta| mutual_info_for(behavior, beta)).sum();

    Ok(IcReport {
        p_i,
        p_ii,
        e_i,
        e_ii,
        criterion_lhs,
        mutual_info_total,
        violates_ic: criterion_lhs > 1.0 + 1e-9,
    })
}

/// I(alpha_beta : g | this beta) by exact enumeration of the protocol's
/// joint distribution, in bits. Handles biased boxes, unlike the
/// 1 - h(P) shortcut.
fn mutual_info_for(behavior: &Behavior, beta: u8) -> f64 {
    let mut joint = [[0.0f64; 2]; 2]; // joint[alpha_beta][g]
    for alpha0 in 0..2u8 {
        for alpha1 in 0..2u8 {
            let x = alpha0 ^ alpha1;
            let alpha_k = if beta == 0 { alpha0 } else { alpha1 };
            for a in 0..2u8 {
                for b in 0..2u8 {
                    let g = alpha0 ^ a ^ b;
                    joint[alpha_k as usize][g as usize] +=
                        0.25 * behavior.prob(a, b, x, beta);
                }
            }
        }
    }
    mutual_information(&joint)
}

fn mutual_information(joint: &[[f64; 2]; 2]) -> f64 {
    let pa = [joint[0][0] + joint[0][1], joint[1][0] + joint[1][1]];
    let pb = [joint[0][0] + joint[1][0], joint[0][1] + joint[1][1]];
    let mut info = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let p = joint[i][j];
            if p > 0.0 {
                info += p * (p / (pa[i] * pb[j])).log2();
            }
        }
    }
    info.max(0.0)
}

/// The (E_I, E_II) pair read directly off a quasi-probability distribution:
/// E_I sums (-1)^f * atom over the atoms with a0 = a1, E_II over a0 != a1.
pub fn ic_negativity_rep(jq: &Jqpd) -> (f64, f64) {
    let mut e_i = 0.0;
    let mut e_ii = 0.0;
    for (i, &w) in jq.atoms().iter().enumerate() {
        let (a0, a1, b0, b1) = atom_bits(i);
        let signed = if f_exponent(0, 0, a0, a1, b0, b1) == 0 {
            w
        } else {
            -w
        };
        if a0 == a1 {
            e_i += signed;
        } else {
            e_ii += signed;
        }
    }
    (e_i, e_ii)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h2(p: f64) -> f64 {
        if p <= 0.0 || p >= 1.0 {
            0.0
        } else {
            -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
        }
    }

    #[test]
    fn pr_box_gains_two_bits() {
        let r = ic_van_dam(&Behavior::pr(0).unwrap()).unwrap();
        assert_eq!(r.p_i, 1.0);
        assert_eq!(r.p_ii, 1.0);
        assert!((r.mutual_info_total - 2.0).abs() < 1e-12);
        assert!(r.violates_ic);
    }

    #[test]
    fn noise_box_gains_nothing() {
        let r = ic_van_dam(&Behavior::noise()).unwrap();
        assert!((r.p_i - 0.5).abs() < 1e-12);
        assert!((r.p_ii - 0.5).abs() < 1e-12);
        assert!(r.mutual_info_total.abs() < 1e-12);
        assert!(!r.violates_ic);
    }

    #[test]
    fn isotropic_biases_equal_gamma() {
        for gamma in [0.3, std::f64::consts::FRAC_1_SQRT_2, 0.9] {
            let r = ic_van_dam(&Behavior::isotropic(gamma).unwrap()).unwrap();
            assert!((r.e_i - gamma).abs() < 1e-12, "gamma {gamma}");
            assert!((r.e_ii - gamma).abs() < 1e-12);
            assert_eq!(r.violates_ic, 2.0 * gamma * gamma > 1.0 + 1e-9);
        }
    }

    #[test]
    fn entropy_shortcut_matches_on_symmetric_boxes() {
        // for unbiased boxes each beta channel is binary symmetric
        for gamma in [0.0, 0.4, 0.8, 1.0] {
            let b = Behavior::isotropic(gamma).unwrap();
            let r = ic_van_dam(&b).unwrap();
            let shortcut = (1.0 - h2(r.p_i)) + (1.0 - h2(r.p_ii));
            assert!(
                (r.mutual_info_total - shortcut).abs() < 1e-12,
                "gamma {gamma}: {} vs {shortcut}",
                r.mutual_info_total
            );
        }
    }

    #[test]
    fn negativity_rep_on_isotropic() {
        let (ei, eii) = ic_negativity_rep(&Jqpd::isotropic(0.6).unwrap());
        assert!((ei - 0.6).abs() < 1e-12);
        assert!((eii - 0.6).abs() < 1e-12);
        let (ei, eii) = ic_negativity_rep(&Jqpd::uniform());
        assert!(ei.abs() < 1e-12 && eii.abs() < 1e-12);
        let g = std::f64::consts::FRAC_1_SQRT_2;
        let (ei, eii) = ic_negativity_rep(&Jqpd::isotropic(g).unwrap());
        assert!((ei * ei + eii * eii - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negativity_rep_agrees_with_protocol() {
        for gamma in [0.2, 0.55, 0.95] {
            let jq = Jqpd::isotropic(gamma).unwrap();
            let (ei, eii) = ic_negativity_rep(&jq);
            let r = ic_van_dam(&jq.marginals().unwrap()).unwrap();
            assert!((ei - r.e_i).abs() < 1e-9);
            assert!((eii - r.e_ii).abs() < 1e-9);
        }
    }
}
