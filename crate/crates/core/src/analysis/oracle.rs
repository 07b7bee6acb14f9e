//! Exact P(G(0, 1)) on Z^1 for constant radii by enumerating every
//! occupation pattern of B(0, 10). Shares no code with the event evaluator.

use crate::error::{PercError, Result};
use crate::graph::{GraphKind, GraphModel};
use crate::laws::RadiusLaw;

const SITES: u32 = 21;
const FULL: u32 = (1 << SITES) - 1;
/// Bits of the sites x with |x| > 8, where bit i is site i - 10.
const OUTER: u32 = 0b11 | (0b11 << 19);
const ORIGIN: u32 = 1 << 10;

/// Occupation-count histogram of the patterns on which G(0, 1) holds.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleG {
    /// counts[k]: patterns with k occupied sites on which the event holds.
    pub counts: Vec<u64>,
}

impl OracleG {
    /// P(G(0, 1)) at retention p.
    pub fn probability(&self, p: f64) -> f64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &c)| c as f64 * p.powi(k as i32) * (1.0 - p).powi(SITES as i32 - k as i32))
            .sum()
    }
}

fn dilate(mask: u32, c: u32) -> u32 {
    let mut out = mask;
    for j in 1..=c {
        out |= (mask << j) | (mask >> j);
    }
    out & FULL
}

/// G(0, 1) for the occupation pattern `occ` with every radius equal to `c`.
fn g_holds(occ: u32, c: u32) -> bool {
    let mut reach = ORIGIN;
    loop {
        // occupied vertices within c of the reached set are adjacent to
        // it, and every vertex within c of a reached center is reached
        let centers = occ & dilate(reach, c);
        let next = reach | centers | dilate(centers, c);
        if next == reach {
            return reach & OUTER != 0;
        }
        reach = next;
    }
}

/// Enumerates all 2^21 patterns for Z^1, r = 1 and R = c with c <= 3.
pub fn oracle_g_exact(model: &GraphModel, law: &RadiusLaw, r: u64) -> Result<OracleG> {
    if !matches!(model.kind, GraphKind::ZLattice(1)) || r != 1 {
        return Err(PercError::Unsupported("the exact G oracle covers Z^1 at r = 1 only".into()));
    }
    let c = match law {
        RadiusLaw::Constant(c) if *c <= 3 => *c as u32,
        _ => return Err(PercError::Unsupported("the exact G oracle needs a constant radius <= 3".into())),
    };
    let mut counts = vec![0u64; SITES as usize + 1];
    for occ in 0..=FULL {
        if g_holds(occ, c) {
            counts[occ.count_ones() as usize] += 1;
        }
    }
    Ok(OracleG { counts })
}
