//! Aggregated principle reports, polytope-slice scans, and ML sweeps.
//!
//! This is the engine behind the CLI and the browser demo: it turns a box
//! into a full per-principle report, walks 2D slices of the no-signaling
//! polytope emitting CSV rows, and sweeps the macroscopic-locality pipeline
//! over copy counts. All numeric CSV output uses 17 significant digits so
//! determinism is byte-checkable.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::boxes::{Behavior, SliceSpec};
use crate::optim::min_l1;
use crate::principles::{
    check_local, check_tlm, check_uffink, ic_van_dam, lo_evaluate, lo_preset,
    ml_macroscopic, IcReport, LoVerdict, TlmVerdict, Verdict,
};
use crate::{Error, Result};

/// Everything the principle checkers can say about one box.
///
/// For signaling boxes `ns` is false and every field that needs correlators
/// or a jqpd is `None`; the LO entries stay available since they only read
/// conditional probabilities.
#[derive(Debug, Clone, Serialize)]
pub struct PrincipleReport {
    /// SHA-256 over the 16 table entries (f64 little-endian bits).
    pub box_hash: String,
    /// The analyzed box, echoed for round-tripping.
    pub echo: Behavior,
    pub ns: bool,
    /// Signed CHSH values S_{m,n}, indexed \[m\]\[n\].
    pub s: Option<[[f64; 2]; 2]>,
    pub s_max: Option<f64>,
    /// Minimal L1 norm over reproducing jqpds.
    pub m_star: Option<f64>,
    pub local: Option<Verdict>,
    pub uffink: Option<Verdict>,
    pub tlm: Option<TlmVerdict>,
    pub ic: Option<IcReport>,
    pub lo1_satisfied: bool,
    pub lo2_5: LoVerdict,
    pub lo2_10: LoVerdict,
    /// (n, macroscopic M*) for each requested copy count.
    pub ml: Vec<MlEntry>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MlEntry {
    pub n: usize,
    pub m_star: f64,
}

/// Hash of the probability table, used as a stable box id.
pub fn box_hash(behavior: &Behavior) -> String {
    let mut hasher = Sha256::new();
    for row in behavior.rows() {
        for v in row {
            hasher.update(v.to_le_bytes());
        }
    }
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs every principle checker on a box; `ml_copy_counts` selects which
/// macroscopic copy counts to include.
pub fn report_box(behavior: &Behavior, ml_copy_counts: &[usize]) -> Result<PrincipleReport> {
    let ns = behavior.is_no_signaling(1e-9);
    let lo1_satisfied = crate::principles::lo1_family()
        .iter()
        .all(|events| lo_evaluate(events, behavior).map(|v| v.satisfied).unwrap_or(false));
    let lo2_5 = eval_preset("LO2-5", behavior)?;
    let lo2_10 = eval_preset("LO2-10", behavior)?;

    if !ns {
        return Ok(PrincipleReport {
            box_hash: box_hash(behavior),
            echo: *behavior,
            ns,
            s: None,
            s_max: None,
            m_star: None,
            local: None,
            uffink: None,
            tlm: None,
            ic: None,
            lo1_satisfied,
            lo2_5,
            lo2_10,
            ml: Vec::new(),
        });
    }

    let s = behavior.chsh_all()?;
    let s_max = s.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let m_star = min_l1(behavior)?.m_star;
    let mut ml = Vec::with_capacity(ml_copy_counts.len());
    for &n in ml_copy_counts {
        let macro_box = ml_macroscopic(behavior, n)?;
        ml.push(MlEntry {
            n,
            m_star: min_l1(&macro_box)?.m_star,
        });
    }
    Ok(PrincipleReport {
        box_hash: box_hash(behavior),
        echo: *behavior,
        ns,
        s: Some(s),
        s_max: Some(s_max),
        m_star: Some(m_star),
        local: Some(check_local(behavior)?),
        uffink: Some(check_uffink(behavior)?),
        tlm: Some(check_tlm(behavior)?),
        ic: Some(ic_van_dam(behavior)?),
        lo1_satisfied,
        lo2_5,
        lo2_10,
        ml,
    })
}

fn eval_preset(id: &str, behavior: &Behavior) -> Result<LoVerdict> {
    let family = lo_preset(id).expect("preset id is fixed");
    lo_evaluate(&family[0], behavior)
}

/// Third basis box of the noisy-PR slice gamma*PR1 + beta*B + rest*I.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SliceBasis {
    /// B = D_1111, the deterministic all-ones box.
    D1111,
    /// B = L_12 = (PR1 + PR2)/2, on the local boundary.
    L12,
}

impl SliceBasis {
    pub fn behavior(self) -> Behavior {
        match self {
            SliceBasis::D1111 => Behavior::deterministic(1, 1, 1, 1),
            SliceBasis::L12 => Behavior::mix(&SliceSpec {
                terms: vec![
                    (0.5, Behavior::pr(0).unwrap()),
                    (0.5, Behavior::pr(1).unwrap()),
                ],
            })
            .unwrap(),
        }
    }
}

/// A rectangular (gamma, beta) grid over one noisy-PR slice; points with
/// gamma + beta > 1 are infeasible and skipped.
#[derive(Debug, Clone, Copy)]
pub struct ScanGrid {
    pub basis: SliceBasis,
    pub gamma_steps: usize,
    pub beta_steps: usize,
}

/// Fixed CSV header for slice scans.
pub const SCAN_CSV_HEADER: &str = "gamma,beta,S,mstar,ns,local,uffink,tlm,ic,lo2_10";

/// 17-significant-digit float formatting used in all CSV output.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// The box at one slice grid point, or `None` when gamma + beta > 1.
pub fn slice_point(basis: SliceBasis, gamma: f64, beta: f64) -> Option<Behavior> {
    if gamma + beta > 1.0 + 1e-12 {
        return None;
    }
    let rest = (1.0 - gamma - beta).max(0.0);
    Some(
        Behavior::mix(&SliceSpec {
            terms: vec![
                (gamma, Behavior::pr(0).unwrap()),
                (beta, basis.behavior()),
                (rest, Behavior::noise()),
            ],
        })
        .expect("convex combination of valid boxes"),
    )
}

/// Scans the slice row-major (gamma outer, beta inner) and renders one CSV
/// row per feasible point. `jobs > 1` evaluates points on that many
/// threads; rows are emitted in grid order regardless.
pub fn scan_csv(grid: &ScanGrid, jobs: usize) -> Result<String> {
    if grid.gamma_steps < 2 || grid.beta_steps < 2 {
        return Err(Error::InvalidArgument(
            "grid needs at least 2 steps per axis".into(),
        ));
    }
    let mut points = Vec::new();
    for gi in 0..grid.gamma_steps {
        for bi in 0..grid.beta_steps {
            let gamma = gi as f64 / (grid.gamma_steps - 1) as f64;
            let beta = bi as f64 / (grid.beta_steps - 1) as f64;
            if let Some(b) = slice_point(grid.basis, gamma, beta) {
                points.push((gamma, beta, b));
            }
        }
    }

    let rows: Vec<String> = if jobs > 1 {
        let chunk = points.len().div_ceil(jobs);
        let mut out: Vec<Vec<String>> = Vec::new();
        std::thread::scope(|scope| {
            let handles: Vec<_> = points
                .chunks(chunk.max(1))
                .map(|part| {
                    scope.spawn(move || {
                        part.iter()
                            .map(|(g, b, bx)| scan_row(*g, *b, bx))
                            .collect::<Result<Vec<_>>>()
                    })
                })
                .collect();
            for h in handles {
                out.push(h.join().expect("scan worker panicked")?);
            }
            Ok::<(), Error>(())
        })?;
        out.into_iter().flatten().collect()
    } else {
        points
            .iter()
            .map(|(g, b, bx)| scan_row(*g, *b, bx))
            .collect::<Result<Vec<_>>>()?
    };

    let mut csv = String::from(SCAN_CSV_HEADER);
    csv.push('\n');
    for row in rows {
        csv.push_str(&row);
        csv.push('\n');
    }
    Ok(csv)
}

fn scan_row(gamma: f64, beta: f64, behavior: &Behavior) -> Result<String> {
    let ns = behavior.is_no_signaling(1e-9);
    let s_max = behavior.correlators()?.chsh_max_abs();
    let m_star = min_l1(behavior)?.m_star;
    let local = check_local(behavior)?.satisfied;
    let uffink = check_uffink(behavior)?.satisfied;
    let tlm = check_tlm(behavior)?.satisfied;
    let ic = !ic_van_dam(behavior)?.violates_ic;
    let lo2_10 = eval_preset("LO2-10", behavior)?.satisfied;
    Ok(format!(
        "{},{},{},{},{ns},{local},{uffink},{tlm},{ic},{lo2_10}",
        fmt17(gamma),
        fmt17(beta),
        fmt17(s_max),
        fmt17(m_star),
    ))
}

/// Fixed CSV header for ML sweeps.
pub const ML_CSV_HEADER: &str = "n,gamma,mstar";

/// For each odd copy count, walks the isotropic line and reports the
/// macroscopic M*, reproducing the L1-norm-vs-gamma curve family.
pub fn ml_sweep_csv(copy_counts: &[usize], gamma_steps: usize) -> Result<String> {
    if gamma_steps < 2 {
        return Err(Error::InvalidArgument(
            "gamma_steps must be at least 2".into(),
        ));
    }
    for &n in copy_counts {
        if n % 2 == 0 || n > 15 {
            return Err(Error::InvalidArgument(format!(
                "copy count {n} must be odd and at most 15"
            )));
        }
    }
    let mut csv = String::from(ML_CSV_HEADER);
    csv.push('\n');
    for &n in copy_counts {
        for gi in 0..gamma_steps {
            let gamma = gi as f64 / (gamma_steps - 1) as f64;
            let macro_box = ml_macroscopic(&Behavior::isotropic(gamma)?, n)?;
            let m_star = min_l1(&macro_box)?.m_star;
            csv.push_str(&format!("{n},{},{}\n", fmt17(gamma), fmt17(m_star)));
        }
    }
    Ok(csv)
}

/// Parses a named box preset: `pr1`..`pr8`, `noise`, `iso:<gamma>`,
/// `det:<a0a1b0b1>`.
pub fn parse_preset(name: &str) -> Result<Behavior> {
    if let Some(rest) = name.strip_prefix("pr") {
        let idx: u8 = rest
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad PR preset '{name}'")))?;
        if !(1..=8).contains(&idx) {
            return Err(Error::InvalidArgument(format!(
                "PR preset index {idx} outside 1..=8"
            )));
        }
        return Behavior::pr(idx - 1);
    }
    if name == "noise" {
        return Ok(Behavior::noise());
    }
    if let Some(rest) = name.strip_prefix("iso:") {
        let gamma: f64 = rest
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad gamma in '{name}'")))?;
        return Behavior::isotropic(gamma);
    }
    if let Some(rest) = name.strip_prefix("det:") {
        let bits: Vec<u8> = rest
            .chars()
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                _ => Err(Error::InvalidArgument(format!("bad bit '{c}' in '{name}'"))),
            })
            .collect::<Result<_>>()?;
        if bits.len() != 4 {
            return Err(Error::InvalidArgument(format!(
                "det preset needs 4 bits, got {}",
                bits.len()
            )));
        }
        return Ok(Behavior::deterministic(bits[0], bits[1], bits[2], bits[3]));
    }
    Err(Error::InvalidArgument(format!("unknown preset '{name}'")))
}
