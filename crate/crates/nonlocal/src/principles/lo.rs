//! Local Orthogonality: sums of probabilities of pairwise exclusive events.
//!
//! An event fixes a setting and an outcome for every party-copy slot. Two
//! events are orthogonal when some slot shares the setting but differs in
//! outcome. LO demands that any set of pairwise orthogonal events have
//! total probability at most 1; k-copy event probabilities factorize as
//! products of single-copy box probabilities.

use serde::Serialize;

use crate::boxes::Behavior;
use crate::{Error, Result};

const MAX_COPIES: usize = 2;

/// An event over k copies of the box: per copy, both parties' settings and
/// outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoEvent {
    /// Per copy (x, y).
    settings: Vec<(u8, u8)>,
    /// Per copy (a, b).
    outcomes: Vec<(u8, u8)>,
}

impl LoEvent {
    /// Single-copy event (a,b | x,y).
    pub fn single(a: u8, b: u8, x: u8, y: u8) -> Self {
        LoEvent {
            settings: vec![(x & 1, y & 1)],
            outcomes: vec![(a & 1, b & 1)],
        }
    }

    /// Two-copy event (a b a' b' | x y x' y').
    #[allow(clippy::too_many_arguments)]
    pub fn two_copy(a: u8, b: u8, a2: u8, b2: u8, x: u8, y: u8, x2: u8, y2: u8) -> Self {
        LoEvent {
            settings: vec![(x & 1, y & 1), (x2 & 1, y2 & 1)],
            outcomes: vec![(a & 1, b & 1), (a2 & 1, b2 & 1)],
        }
    }

    /// Builds an event from per-copy slots; at most 2 copies.
    pub fn new(outcomes: Vec<(u8, u8)>, settings: Vec<(u8, u8)>) -> Result<Self> {
        if outcomes.len() != settings.len() {
            return Err(Error::InvalidArgument(
                "outcome and setting slot counts differ".into(),
            ));
        }
        if outcomes.is_empty() || outcomes.len() > MAX_COPIES {
            return Err(Error::InvalidArgument(format!(
                "copy count {} outside 1..={MAX_COPIES}",
                outcomes.len()
            )));
        }
        Ok(LoEvent {
            settings: settings.iter().map(|&(x, y)| (x & 1, y & 1)).collect(),
            outcomes: outcomes.iter().map(|&(a, b)| (a & 1, b & 1)).collect(),
        })
    }

    pub fn copies(&self) -> usize {
        self.settings.len()
    }

    /// Probability of the event under iid copies of the box.
    pub fn probability(&self, behavior: &Behavior) -> f64 {
        self.settings
            .iter()
            .zip(&self.outcomes)
            .map(|(&(x, y), &(a, b))| behavior.prob(a, b, x, y))
            .product()
    }
}

/// True iff some party-copy slot shares the setting and differs in outcome.
/// Symmetric and irreflexive. Events must span the same number of copies.
pub fn lo_orthogonal(e1: &LoEvent, e2: &LoEvent) -> Result<bool> {
    if e1.copies() != e2.copies() {
        return Err(Error::InvalidArgument(format!(
            "copy counts differ: {} vs {}",
            e1.copies(),
            e2.copies()
        )));
    }
    for i in 0..e1.copies() {
        let (x1, y1) = e1.settings[i];
        let (x2, y2) = e2.settings[i];
        let (a1, b1) = e1.outcomes[i];
        let (a2, b2) = e2.outcomes[i];
        if (x1 == x2 && a1 != a2) || (y1 == y2 && b1 != b2) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Sum of event probabilities and the LO verdict (sum <= 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoVerdict {
    pub sum: f64,
    pub satisfied: bool,
}

/// Evaluates one LO inequality: verifies pairwise orthogonality, then sums
/// the event probabilities and compares against 1.
pub fn lo_evaluate(events: &[LoEvent], behavior: &Behavior) -> Result<LoVerdict> {
    for i in 0..events.len() {
        for j in (i + 1)..events.len() {
            if !lo_orthogonal(&events[i], &events[j])? {
                return Err(Error::NonOrthogonalEvents(format!(
                    "events {i} and {j}"
                )));
            }
        }
    }
    let sum: f64 = events.iter().map(|e| e.probability(behavior)).sum();
    Ok(LoVerdict {
        sum,
        satisfied: sum <= 1.0 + 1e-9,
    })
}

/// The full single-copy LO inequality family. Each member fixes one party's
/// outcome-and-setting and compares the two settings of the other party;
/// jointly the family is equivalent to no-signaling.
pub fn lo1_family() -> Vec<Vec<LoEvent>> {
    let mut family = Vec::with_capacity(16);
    for fixed in 0..2u8 {
        for x in 0..2u8 {
            for (y, y2) in [(0u8, 1u8), (1, 0)] {
                // Alice side: outcome `fixed` at (x,y) vs its complement at (x,y2)
                let mut events = Vec::with_capacity(4);
                for b in 0..2u8 {
                    events.push(LoEvent::single(1 - fixed, b, x, y2));
                }
                for b in 0..2u8 {
                    events.push(LoEvent::single(fixed, b, x, y));
                }
                family.push(events);
                // Bob side, roles swapped
                let mut events = Vec::with_capacity(4);
                for a in 0..2u8 {
                    events.push(LoEvent::single(a, 1 - fixed, y2, x));
                }
                for a in 0..2u8 {
                    events.push(LoEvent::single(a, fixed, y, x));
                }
                family.push(events);
            }
        }
    }
    family
}

/// Named inequality presets: `"LO1"` (the 16-member single-copy family),
/// `"LO2-5"` (the five-term two-copy inequality) and `"LO2-10"` (the
/// maximal ten-term two-copy inequality).
pub fn lo_preset(id: &str) -> Option<Vec<Vec<LoEvent>>> {
    let two = |bits: [u8; 8]| {
        LoEvent::two_copy(
            bits[0], bits[1], bits[2], bits[3], bits[4], bits[5], bits[6], bits[7],
        )
    };
    match id {
        "LO1" => Some(lo1_family()),
        "LO2-5" => Some(vec![vec![
            two([0, 0, 0, 0, 0, 0, 0, 0]),
            two([1, 1, 1, 0, 0, 0, 1, 1]),
            two([0, 0, 1, 1, 0, 1, 1, 0]),
            two([1, 1, 0, 1, 1, 0, 1, 1]),
            two([0, 1, 1, 1, 1, 1, 0, 1]),
        ]]),
        "LO2-10" => Some(vec![vec![
            two([1, 1, 1, 1, 0, 0, 0, 0]),
            two([1, 1, 0, 0, 1, 0, 1, 0]),
            two([0, 1, 0, 0, 1, 1, 0, 0]),
            two([0, 0, 1, 1, 0, 0, 0, 1]),
            two([0, 0, 1, 0, 0, 1, 1, 1]),
            two([1, 0, 1, 1, 0, 0, 0, 0]),
            two([0, 1, 0, 1, 1, 1, 0, 0]),
            two([1, 1, 0, 1, 1, 1, 0, 0]),
            two([1, 0, 1, 0, 0, 1, 1, 0]),
            two([1, 0, 0, 1, 0, 1, 0, 0]),
        ]]),
        _ => None,
    }
}

/// Bisected gamma at which an inequality's sum crosses 1 along a family of
/// boxes, assuming the sum is increasing in gamma.
pub fn lo_boundary<F>(events: &[LoEvent], family: F, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<Behavior>,
{
    let sum_at = |gamma: f64| -> Result<f64> {
        Ok(lo_evaluate(events, &family(gamma)?)?.sum)
    };
    if sum_at(1.0)? <= 1.0 {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if sum_at(mid)? <= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
