//! Joint quasi-probability distributions over the 16 unobservable atoms.
//!
//! The hidden variables are the four bits (a0,a1,b0,b1): the outcomes both
//! parties *would* obtain for either setting. Atom weights may be negative;
//! only the observable marginals p(a,b|x,y) are required to be proper
//! probabilities. Atom index order is (a0,a1,b0,b1) lexicographic with a0
//! most significant, i.e. `index = 8*a0 + 4*a1 + 2*b0 + b1`.

use serde::{Deserialize, Serialize};

use crate::boxes::{Behavior, PAIRS};
use crate::{Error, Result, EQUALITY_TOL, VALIDATION_TOL};

/// Hidden bits (a0,a1,b0,b1) of atom `index`.
#[inline]
pub fn atom_bits(index: usize) -> (u8, u8, u8, u8) {
    debug_assert!(index < 16);
    (
        (index >> 3) as u8 & 1,
        (index >> 2) as u8 & 1,
        (index >> 1) as u8 & 1,
        index as u8 & 1,
    )
}

/// The CHSH sign exponent f_{m,n} = (a0^a1)(b0^b1) ^ a_n ^ b_m.
#[inline]
pub fn f_exponent(m: u8, n: u8, a0: u8, a1: u8, b0: u8, b1: u8) -> u8 {
    let (m, n) = (m & 1, n & 1);
    let (a0, a1, b0, b1) = (a0 & 1, a1 & 1, b0 & 1, b1 & 1);
    let a_n = if n == 0 { a0 } else { a1 };
    let b_m = if m == 0 { b0 } else { b1 };
    ((a0 ^ a1) & (b0 ^ b1)) ^ a_n ^ b_m
}

/// A signed 16-atom joint quasi-probability distribution.
///
/// Invariants: atoms sum to 1 within `1e-12` and every observable marginal
/// lies in [0,1] within `1e-9`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawJqpd", into = "RawJqpd")]
pub struct Jqpd {
    q: [f64; 16],
}

#[derive(Serialize, Deserialize)]
struct RawJqpd {
    q: [f64; 16],
}

impl TryFrom<RawJqpd> for Jqpd {
    type Error = Error;
    fn try_from(raw: RawJqpd) -> Result<Self> {
        Jqpd::new(raw.q)
    }
}

impl From<Jqpd> for RawJqpd {
    fn from(j: Jqpd) -> Self {
        RawJqpd { q: j.q }
    }
}

impl Jqpd {
    /// Builds a jqpd from atom weights, checking normalization and
    /// observable nonnegativity.
    pub fn new(q: [f64; 16]) -> Result<Self> {
        let sum: f64 = q.iter().sum();
        if (sum - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::InvalidArgument(format!(
                "atoms sum to {sum}, expected 1"
            )));
        }
        let jq = Jqpd { q };
        jq.marginals()?;
        Ok(jq)
    }

    /// Atom weights in index order.
    pub fn atoms(&self) -> &[f64; 16] {
        &self.q
    }

    /// The uniform distribution, all atoms 1/16.
    pub fn uniform() -> Self {
        Jqpd { q: [1.0 / 16.0; 16] }
    }

    /// Minimal-L1 jqpd of the isotropic box:
    /// atom = (1 + 2*gamma*(-1)^f) / 16 with f = f_{0,0}.
    pub fn isotropic(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidArgument(format!(
                "isotropic gamma {gamma} outside [0,1]"
            )));
        }
        let mut q = [0.0; 16];
        for (i, slot) in q.iter_mut().enumerate() {
            let (a0, a1, b0, b1) = atom_bits(i);
            let sign = if f_exponent(0, 0, a0, a1, b0, b1) == 0 {
                1.0
            } else {
                -1.0
            };
            *slot = (1.0 + 2.0 * gamma * sign) / 16.0;
        }
        Ok(Jqpd { q })
    }

    /// Marginalizes to the observable box: p(a,b|x,y) sums the atoms with
    /// a_x = a and b_y = b.
    pub fn marginals(&self) -> Result<Behavior> {
        let mut p = [[0.0; 4]; 4];
        for (x, y) in PAIRS {
            for (i, &w) in self.q.iter().enumerate() {
                let (a0, a1, b0, b1) = atom_bits(i);
                let a = if x == 0 { a0 } else { a1 };
                let b = if y == 0 { b0 } else { b1 };
                p[(2 * x + y) as usize][(2 * a + b) as usize] += w;
            }
        }
        for (r, row) in p.iter_mut().enumerate() {
            for v in row.iter_mut() {
                if *v < -EQUALITY_TOL || *v > 1.0 + EQUALITY_TOL {
                    return Err(Error::ObservableNegativity(format!(
                        "marginal {v} in row {r}"
                    )));
                }
                // clamp numeric dust so the Behavior invariants hold
                *v = v.clamp(0.0, 1.0);
            }
        }
        Behavior::from_rows(p)
    }

    /// Sum of absolute atom weights. Always >= 1 for a normalized jqpd,
    /// with equality iff all atoms are nonnegative.
    pub fn l1_norm(&self) -> f64 {
        self.q.iter().map(|v| v.abs()).sum()
    }

    /// 2 * sum of (-1)^{f_{m,n}} * atom, the CHSH value S_{m,n} seen
    /// through the quasi-probability representation.
    pub fn chsh(&self, m: u8, n: u8) -> f64 {
        2.0 * self
            .q
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                let (a0, a1, b0, b1) = atom_bits(i);
                if f_exponent(m, n, a0, a1, b0, b1) == 0 {
                    w
                } else {
                    -w
                }
            })
            .sum::<f64>()
    }
}

/// Tensor product of up to three jqpds; atom index is the concatenation of
/// the per-copy atom indices, first copy most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiJqpd {
    copies: usize,
    q: Vec<f64>,
}

impl MultiJqpd {
    /// Builds the product distribution. Rejects more than 3 copies (16^N
    /// atoms).
    pub fn product(parts: &[Jqpd]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidArgument("empty product".into()));
        }
        if parts.len() > 3 {
            return Err(Error::SizeLimit(format!(
                "{} copies exceeds the 3-copy cap",
                parts.len()
            )));
        }
        let mut q = vec![1.0];
        for part in parts {
            let mut next = Vec::with_capacity(q.len() * 16);
            for &w in &q {
                for &v in part.atoms() {
                    next.push(w * v);
                }
            }
            q = next;
        }
        Ok(MultiJqpd {
            copies: parts.len(),
            q,
        })
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn atoms(&self) -> &[f64] {
        &self.q
    }

    pub fn total(&self) -> f64 {
        self.q.iter().sum()
    }
}
