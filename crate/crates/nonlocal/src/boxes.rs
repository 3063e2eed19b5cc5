//! Observable 2222 behaviors (boxes) and their correlators.
//!
//! A [`Behavior`] is the 4x4 table p(a,b|x,y): rows are input pairs (x,y) in
//! order (0,0),(0,1),(1,0),(1,1), columns are outcome pairs (a,b) in the same
//! order. Rows are probability distributions over the four outcome pairs.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, EQUALITY_TOL, VALIDATION_TOL};

/// The four input (or outcome) pairs in row/column order.
pub const PAIRS: [(u8, u8); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

#[inline]
fn pair_index(i: u8, j: u8) -> usize {
    (2 * (i & 1) + (j & 1)) as usize
}

/// An observable 2222 box: conditional probabilities p(a,b|x,y).
///
/// Invariants enforced on construction: every entry in [0,1] and each row
/// summing to 1, both within `1e-12`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBehavior", into = "RawBehavior")]
pub struct Behavior {
    p: [[f64; 4]; 4],
}

#[derive(Serialize, Deserialize)]
struct RawBehavior {
    p: [[f64; 4]; 4],
}

impl TryFrom<RawBehavior> for Behavior {
    type Error = Error;
    fn try_from(raw: RawBehavior) -> Result<Self> {
        Behavior::from_rows(raw.p)
    }
}

impl From<Behavior> for RawBehavior {
    fn from(b: Behavior) -> Self {
        RawBehavior { p: b.p }
    }
}

impl Behavior {
    /// Builds a box from its probability table, validating the invariants.
    pub fn from_rows(p: [[f64; 4]; 4]) -> Result<Self> {
        for (r, row) in p.iter().enumerate() {
            let mut sum = 0.0;
            for &v in row {
                if !v.is_finite() || v < -VALIDATION_TOL || v > 1.0 + VALIDATION_TOL {
                    return Err(Error::InvalidArgument(format!(
                        "entry {v} in row {r} outside [0,1]"
                    )));
                }
                sum += v;
            }
            if (sum - 1.0).abs() > VALIDATION_TOL {
                return Err(Error::InvalidArgument(format!(
                    "row {r} sums to {sum}, expected 1"
                )));
            }
        }
        Ok(Behavior { p })
    }

    /// p(a,b|x,y).
    #[inline]
    pub fn prob(&self, a: u8, b: u8, x: u8, y: u8) -> f64 {
        self.p[pair_index(x, y)][pair_index(a, b)]
    }

    /// The raw table, rows indexed by (x,y), columns by (a,b).
    pub fn rows(&self) -> &[[f64; 4]; 4] {
        &self.p
    }

    /// One of the eight PR boxes. Variant 0 is PR1, the box with
    /// a XOR b = x*y; the others relabel inputs/outputs. Variant bits
    /// (g,u,v) with `variant = 4g + 2u + v` select the correlation
    /// a XOR b = x*y XOR u*x XOR v*y XOR g, so variant 1 (PR2) is the
    /// relabeling that swaps the (0,1) and (1,1) input rows of PR1.
    pub fn pr(variant: u8) -> Result<Self> {
        if variant > 7 {
            return Err(Error::InvalidArgument(format!(
                "PR variant {variant} out of range 0..=7"
            )));
        }
        let g = (variant >> 2) & 1;
        let u = (variant >> 1) & 1;
        let v = variant & 1;
        let mut p = [[0.0; 4]; 4];
        for (x, y) in PAIRS {
            let target = (x & y) ^ (u & x) ^ (v & y) ^ g;
            for (a, b) in PAIRS {
                if a ^ b == target {
                    p[pair_index(x, y)][pair_index(a, b)] = 0.5;
                }
            }
        }
        Ok(Behavior { p })
    }

    /// Deterministic local box: outputs a_x and b_y regardless of the other
    /// party. Arguments are taken mod 2.
    pub fn deterministic(a0: u8, a1: u8, b0: u8, b1: u8) -> Self {
        let a = [a0 & 1, a1 & 1];
        let b = [b0 & 1, b1 & 1];
        let mut p = [[0.0; 4]; 4];
        for (x, y) in PAIRS {
            p[pair_index(x, y)][pair_index(a[x as usize], b[y as usize])] = 1.0;
        }
        Behavior { p }
    }

    /// The noise box I: every conditional probability 1/4.
    pub fn noise() -> Self {
        Behavior { p: [[0.25; 4]; 4] }
    }

    /// Isotropic box gamma*PR1 + (1-gamma)*I. Entries are (1+gamma)/4 where
    /// a XOR b = x*y and (1-gamma)/4 elsewhere.
    pub fn isotropic(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidArgument(format!(
                "isotropic gamma {gamma} outside [0,1]"
            )));
        }
        let alpha = 0.25 * (1.0 + gamma);
        let beta = 0.25 * (1.0 - gamma);
        let mut p = [[0.0; 4]; 4];
        for (x, y) in PAIRS {
            for (a, b) in PAIRS {
                p[pair_index(x, y)][pair_index(a, b)] =
                    if a ^ b == x & y { alpha } else { beta };
            }
        }
        Ok(Behavior { p })
    }

    /// Entrywise convex combination described by a [`SliceSpec`].
    pub fn mix(spec: &SliceSpec) -> Result<Self> {
        spec.validate()?;
        let mut p = [[0.0; 4]; 4];
        for (w, term) in &spec.terms {
            for r in 0..4 {
                for c in 0..4 {
                    p[r][c] += w * term.p[r][c];
                }
            }
        }
        Behavior::from_rows(p)
    }

    /// Correlators with the default consistency tolerance (`1e-9`).
    pub fn correlators(&self) -> Result<Correlators> {
        self.correlators_tol(EQUALITY_TOL)
    }

    /// Second moments <A_x B_y> and first moments <A_x>, <B_y>.
    ///
    /// One-party marginals are computed per input row; if the rows disagree
    /// beyond `tol` the box is signaling and the request is refused rather
    /// than averaged.
    pub fn correlators_tol(&self, tol: f64) -> Result<Correlators> {
        let mut e = [[0.0; 2]; 2];
        let mut ma = [0.0; 2];
        let mut mb = [0.0; 2];
        for (x, y) in PAIRS {
            let row = &self.p[pair_index(x, y)];
            let mut exy = 0.0;
            let mut max = 0.0;
            let mut mbx = 0.0;
            for (a, b) in PAIRS {
                let v = row[pair_index(a, b)];
                exy += sign(a ^ b) * v;
                max += sign(a) * v;
                mbx += sign(b) * v;
            }
            e[x as usize][y as usize] = exy;
            if y == 0 {
                ma[x as usize] = max;
            } else if (ma[x as usize] - max).abs() > tol {
                return Err(Error::SignalingMarginals(format!(
                    "<A_{x}> differs across y: {} vs {max}",
                    ma[x as usize]
                )));
            }
            if x == 0 {
                mb[y as usize] = mbx;
            } else if (mb[y as usize] - mbx).abs() > tol {
                return Err(Error::SignalingMarginals(format!(
                    "<B_{y}> differs across x: {} vs {mbx}",
                    mb[y as usize]
                )));
            }
        }
        Ok(Correlators { e, ma, mb })
    }

    /// The four signed CHSH values S_{m,n}.
    ///
    /// S_{m,n} is the correlator sum with the minus sign on
    /// <A_{1-n} B_{1-m}>, so S_{0,0} is the textbook expression
    /// <A0B0>+<A0B1>+<A1B0>-<A1B1>. Indexed `[m][n]`. Requires a
    /// no-signaling box.
    pub fn chsh_all(&self) -> Result<[[f64; 2]; 2]> {
        let c = self.correlators()?;
        Ok(c.chsh_all())
    }

    /// Checks the eight marginal-invariance equalities of the no-signaling
    /// condition within `tol`.
    pub fn is_no_signaling(&self, tol: f64) -> bool {
        for x in 0..2u8 {
            for a in 0..2u8 {
                let m0: f64 = (0..2u8).map(|b| self.prob(a, b, x, 0)).sum();
                let m1: f64 = (0..2u8).map(|b| self.prob(a, b, x, 1)).sum();
                if (m0 - m1).abs() > tol {
                    return false;
                }
            }
        }
        for y in 0..2u8 {
            for b in 0..2u8 {
                let m0: f64 = (0..2u8).map(|a| self.prob(a, b, 0, y)).sum();
                let m1: f64 = (0..2u8).map(|a| self.prob(a, b, 1, y)).sum();
                if (m0 - m1).abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// The 24 vertices of the no-signaling polytope: 16 deterministic boxes
    /// followed by the 8 PR boxes.
    pub fn ns_vertices() -> Vec<Behavior> {
        let mut v = Vec::with_capacity(24);
        for bits in 0..16u8 {
            v.push(Behavior::deterministic(
                bits >> 3,
                (bits >> 2) & 1,
                (bits >> 1) & 1,
                bits & 1,
            ));
        }
        for variant in 0..8 {
            v.push(Behavior::pr(variant).unwrap());
        }
        v
    }

    /// A random no-signaling box: a convex combination of the 24 polytope
    /// vertices with exponentially distributed weights.
    pub fn random_ns(rng: &mut impl Rng) -> Behavior {
        let verts = Behavior::ns_vertices();
        let mut w: Vec<f64> = (0..verts.len())
            .map(|_| -rng.gen::<f64>().max(1e-300).ln())
            .collect();
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= total);
        let terms = w.into_iter().zip(verts).collect();
        Behavior::mix(&SliceSpec { terms }).unwrap()
    }
}

#[inline]
fn sign(bit: u8) -> f64 {
    if bit & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// First and second moments of the +-1-valued outcome variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Correlators {
    /// e\[x\]\[y\] = <A_x B_y>.
    pub e: [[f64; 2]; 2],
    /// <A_x>.
    pub ma: [f64; 2],
    /// <B_y>.
    pub mb: [f64; 2],
}

impl Correlators {
    /// S_{m,n} indexed `[m][n]`; minus sign on e\[1-n\]\[1-m\].
    pub fn chsh_all(&self) -> [[f64; 2]; 2] {
        let total: f64 = self.e.iter().flatten().sum();
        let mut s = [[0.0; 2]; 2];
        for m in 0..2 {
            for n in 0..2 {
                s[m][n] = total - 2.0 * self.e[1 - n][1 - m];
            }
        }
        s
    }

    /// Largest |S_{m,n}| over the four sign families.
    pub fn chsh_max_abs(&self) -> f64 {
        self.chsh_all()
            .iter()
            .flatten()
            .fold(0.0f64, |acc, s| acc.max(s.abs()))
    }
}

/// A convex combination of boxes, e.g. the noisy-PR slices
/// gamma*PR + beta*B + (1-gamma-beta)*I.
#[derive(Debug, Clone)]
pub struct SliceSpec {
    /// (coefficient, box) terms; coefficients nonnegative, summing to 1.
    pub terms: Vec<(f64, Behavior)>,
}

impl SliceSpec {
    fn validate(&self) -> Result<()> {
        let mut sum = 0.0;
        for &(w, _) in &self.terms {
            if !w.is_finite() || w < -VALIDATION_TOL {
                return Err(Error::InvalidArgument(format!(
                    "negative mixture coefficient {w}"
                )));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::InvalidArgument(format!(
                "mixture coefficients sum to {sum}, expected 1"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} != {b} (tol {tol})");
    }

    #[test]
    fn pr1_table_matches_definition() {
        let pr = Behavior::pr(0).unwrap();
        // rows (0,0),(0,1),(1,0): weight on (0,0) and (1,1)
        for row in 0..3 {
            assert_eq!(pr.rows()[row], [0.5, 0.0, 0.0, 0.5]);
        }
        assert_eq!(pr.rows()[3], [0.0, 0.5, 0.5, 0.0]);
    }

    #[test]
    fn pr1_correlators() {
        let c = Behavior::pr(0).unwrap().correlators().unwrap();
        assert_eq!(c.e, [[1.0, 1.0], [1.0, -1.0]]);
        assert_eq!(c.ma, [0.0, 0.0]);
        assert_eq!(c.mb, [0.0, 0.0]);
    }

    #[test]
    fn pr2_is_row_swap_of_pr1() {
        let pr1 = Behavior::pr(0).unwrap();
        let pr2 = Behavior::pr(1).unwrap();
        let mut swapped = *pr1.rows();
        swapped.swap(1, 3); // input rows (0,1) and (1,1)
        assert_eq!(*pr2.rows(), swapped);
    }

    #[test]
    fn pr_variant_out_of_range() {
        assert!(matches!(Behavior::pr(8), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn pr_boxes_have_one_chsh_at_four() {
        for variant in 0..8 {
            let b = Behavior::pr(variant).unwrap();
            let s = b.chsh_all().unwrap();
            let at_four = s
                .iter()
                .flatten()
                .filter(|v| (v.abs() - 4.0).abs() < 1e-12)
                .count();
            assert_eq!(at_four, 1, "variant {variant}");
        }
    }

    #[test]
    fn deterministic_all_ones() {
        let d = Behavior::deterministic(1, 1, 1, 1);
        for (x, y) in PAIRS {
            assert_eq!(d.prob(1, 1, x, y), 1.0);
        }
        let c = d.correlators().unwrap();
        assert_eq!(c.e, [[1.0, 1.0], [1.0, 1.0]]);
        assert_eq!(c.ma, [-1.0, -1.0]);
        assert_eq!(c.mb, [-1.0, -1.0]);
    }

    #[test]
    fn deterministic_saturates_chsh_facet() {
        let s = Behavior::deterministic(0, 0, 0, 0).chsh_all().unwrap();
        let max = s.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        assert_close(max, 2.0, 1e-12);
    }

    #[test]
    fn isotropic_endpoints_and_midpoint() {
        assert_eq!(*Behavior::isotropic(0.0).unwrap().rows(), [[0.25; 4]; 4]);
        assert_eq!(
            Behavior::isotropic(1.0).unwrap(),
            Behavior::pr(0).unwrap()
        );
        let half = Behavior::isotropic(0.5).unwrap();
        for v in half.rows().iter().flatten() {
            assert!((v - 0.375).abs() < 1e-15 || (v - 0.125).abs() < 1e-15);
        }
        assert!(Behavior::isotropic(1.5).is_err());
        assert!(Behavior::isotropic(-0.1).is_err());
    }

    #[test]
    fn isotropic_correlators_and_chsh_linear_in_gamma() {
        let c = Behavior::isotropic(0.7).unwrap().correlators().unwrap();
        for (x, y) in PAIRS {
            let expect = if x & y == 1 { -0.7 } else { 0.7 };
            assert_close(c.e[x as usize][y as usize], expect, 1e-12);
        }
        let s = Behavior::isotropic(0.25).unwrap().chsh_all().unwrap();
        assert_close(s[0][0], 1.0, 1e-12);
    }

    #[test]
    fn chsh_of_pr1_only_s00() {
        let s = Behavior::pr(0).unwrap().chsh_all().unwrap();
        assert_close(s[0][0], 4.0, 1e-12);
        assert_close(s[0][1], 0.0, 1e-12);
        assert_close(s[1][0], 0.0, 1e-12);
        assert_close(s[1][1], 0.0, 1e-12);
    }

    #[test]
    fn mix_recovers_isotropic() {
        let spec = SliceSpec {
            terms: vec![
                (0.3, Behavior::pr(0).unwrap()),
                (0.7, Behavior::noise()),
            ],
        };
        let mixed = Behavior::mix(&spec).unwrap();
        let iso = Behavior::isotropic(0.3).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                assert_close(mixed.rows()[r][c], iso.rows()[r][c], 1e-15);
            }
        }
    }

    #[test]
    fn mix_l12_between_pr1_pr2() {
        let spec = SliceSpec {
            terms: vec![
                (0.5, Behavior::pr(0).unwrap()),
                (0.5, Behavior::pr(1).unwrap()),
            ],
        };
        let l12 = Behavior::mix(&spec).unwrap();
        // rows (0,0) and (1,0) stay perfectly correlated, (0,1)/(1,1) mix
        assert_eq!(l12.rows()[0], [0.5, 0.0, 0.0, 0.5]);
        assert_eq!(l12.rows()[1], [0.25, 0.25, 0.25, 0.25]);
        let s = l12.chsh_all().unwrap();
        assert_close(s[0][0], 2.0, 1e-12);
    }

    #[test]
    fn mix_rejects_bad_coefficients() {
        let spec = SliceSpec {
            terms: vec![(0.5, Behavior::noise())],
        };
        assert!(Behavior::mix(&spec).is_err());
        let spec = SliceSpec {
            terms: vec![(1.5, Behavior::noise()), (-0.5, Behavior::pr(0).unwrap())],
        };
        assert!(Behavior::mix(&spec).is_err());
    }

    #[test]
    fn vertices_are_no_signaling() {
        for v in Behavior::ns_vertices() {
            assert!(v.is_no_signaling(1e-12));
        }
    }

    #[test]
    fn signaling_box_detected() {
        let p = [
            [1.0, 0.0, 0.0, 0.0],
            [0.25, 0.25, 0.25, 0.25],
            [0.25, 0.25, 0.25, 0.25],
            [0.25, 0.25, 0.25, 0.25],
        ];
        let b = Behavior::from_rows(p).unwrap();
        assert!(!b.is_no_signaling(1e-9));
        assert!(matches!(
            b.correlators(),
            Err(Error::SignalingMarginals(_))
        ));
    }

    #[test]
    fn from_rows_rejects_bad_tables() {
        let mut p = [[0.25; 4]; 4];
        p[0][0] = 0.5;
        assert!(Behavior::from_rows(p).is_err());
        p[0][0] = -0.1;
        p[0][1] = 0.6;
        assert!(Behavior::from_rows(p).is_err());
    }

    #[test]
    fn json_round_trip_enforces_invariants() {
        let b = Behavior::isotropic(0.42).unwrap();
        let json = serde_json::to_string(&b).unwrap();
        let back: Behavior = serde_json::from_str(&json).unwrap();
        assert_eq!(b, back);
        let bad = r#"{"p":[[1,0,0,0],[1,0,0,0],[1,0,0,0],[0.5,0,0,0]]}"#;
        assert!(serde_json::from_str::<Behavior>(bad).is_err());
    }
}
