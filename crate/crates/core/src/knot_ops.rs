//! Decompositions induced on a connected sum of knots and on a boundary sum
//! of knot exteriors, and the width bounds they give.
//!
//! Both constructions start from `R_1 ♯∂ R_2` (resp. `R_1 ∪∂ R_2`), attach
//! the handles of the first operand along the `R_1` side, then those of the
//! second along the `R_2` side. Every level surface of the first operand is
//! summed with `R_2` and every level of the second with `R_1`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::decomposition::{CircularDecomposition, DecompositionError, Mode, WidthMultiset};
use crate::surface::{SurfaceClass, SurfaceComponent, SurfaceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KnotOpsError {
    #[error("{0} operand is not a knot-exterior decomposition")]
    ClosedOperand(&'static str),
    #[error("{0} operand has a disconnected base surface")]
    DisconnectedBase(&'static str),
    #[error("{side} operand: {source}")]
    Invalid {
        side: &'static str,
        source: DecompositionError,
    },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SumKind {
    ConnectedSum,
    BoundarySum,
}

impl fmt::Display for SumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SumKind::ConnectedSum => "connected sum",
            SumKind::BoundarySum => "boundary sum",
        })
    }
}

/// Record of how an induced decomposition was built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SumProvenance {
    pub kind: SumKind,
    pub operands: [String; 2],
    /// Genus of each operand's base surface.
    pub base_genus: [u32; 2],
    /// Complexity shift applied to each operand's thick surfaces
    /// (`2 · genus` of the other base).
    pub shifts: [u64; 2],
}

impl SumProvenance {
    pub fn lines(&self) -> Vec<String> {
        vec![
            format!(
                "{} of {} and {}",
                self.kind, self.operands[0], self.operands[1]
            ),
            format!(
                "base genus {} + {}; thick shifts +{} / +{}",
                self.base_genus[0], self.base_genus[1], self.shifts[0], self.shifts[1]
            ),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InducedSum {
    pub decomposition: CircularDecomposition,
    pub provenance: SumProvenance,
}

impl InducedSum {
    /// Name the operands in the provenance record and the decomposition's
    /// header lines.
    pub fn labelled(mut self, left: &str, right: &str) -> Self {
        let old = self.provenance.lines();
        self.provenance.operands = [left.to_string(), right.to_string()];
        let mut lines: Vec<String> = self
            .decomposition
            .provenance()
            .iter()
            .filter(|l| !old.contains(l))
            .cloned()
            .collect();
        lines.extend(self.provenance.lines());
        self.decomposition = self.decomposition.with_provenance(lines);
        self
    }
}

fn base_summand(
    d: &CircularDecomposition,
    side: &'static str,
) -> Result<SurfaceComponent, KnotOpsError> {
    if d.mode() != Mode::Exterior {
        return Err(KnotOpsError::ClosedOperand(side));
    }
    d.ensure_valid()
        .map_err(|source| KnotOpsError::Invalid { side, source })?;
    match d.base().components() {
        [c] => Ok(*c),
        _ => Err(KnotOpsError::DisconnectedBase(side)),
    }
}

fn induced(
    d1: &CircularDecomposition,
    d2: &CircularDecomposition,
    kind: SumKind,
) -> Result<InducedSum, KnotOpsError> {
    let r1 = base_summand(d1, "first")?;
    let r2 = base_summand(d2, "second")?;
    let sum = |s: &SurfaceClass, other: SurfaceComponent| match kind {
        SumKind::ConnectedSum => s.boundary_connected_sum(other),
        SumKind::BoundarySum => s.boundary_sum_close(other),
    };
    let (mut thin, mut thick) = (Vec::new(), Vec::new());
    for i in 0..d1.k() {
        thin.push(sum(d1.thin(i), r2)?);
        thick.push(sum(d1.thick(i), r2)?);
    }
    for j in 0..d2.k() {
        thin.push(sum(d2.thin(j), r1)?);
        thick.push(sum(d2.thick(j), r1)?);
    }
    if thick.is_empty() {
        thin.push(sum(d1.base(), r2)?);
    }
    let mode = match kind {
        SumKind::ConnectedSum => Mode::Exterior,
        SumKind::BoundarySum => Mode::Closed,
    };
    // Seifert genus is additive under connected sum. For the boundary sum
    // the glued surface is only known to be of minimal genus in its class
    // when both bases are.
    let min_genus = match (kind, d1.min_genus(), d2.min_genus()) {
        (SumKind::ConnectedSum, Some(a), Some(b)) => Some(a + b),
        (SumKind::BoundarySum, Some(a), Some(b)) if a == r1.genus && b == r2.genus => Some(a + b),
        _ => None,
    };
    let provenance = SumProvenance {
        kind,
        operands: ["first".into(), "second".into()],
        base_genus: [r1.genus, r2.genus],
        shifts: [2 * r2.genus as u64, 2 * r1.genus as u64],
    };
    let decomposition = CircularDecomposition::new(mode, thin, thick)?
        .with_min_genus(min_genus)
        .with_provenance(provenance.lines());
    decomposition.ensure_valid()?;
    Ok(InducedSum {
        decomposition,
        provenance,
    })
}

pub fn connected_sum(
    d1: &CircularDecomposition,
    d2: &CircularDecomposition,
) -> Result<InducedSum, KnotOpsError> {
    induced(d1, d2, SumKind::ConnectedSum)
}

pub fn boundary_sum(
    d1: &CircularDecomposition,
    d2: &CircularDecomposition,
) -> Result<InducedSum, KnotOpsError> {
    induced(d1, d2, SumKind::BoundarySum)
}

/// `c(S) + 2·genus(R)` for a thick surface summed with a base of genus
/// `other`. When the boundary-bearing piece of `S` is a disk it contributes
/// 0 rather than `2·0 - 1`, so the sum comes out one lower.
fn shifted_entry(s: &SurfaceClass, other: u32) -> u64 {
    let disk_piece = s
        .components()
        .iter()
        .any(|c| c.boundary > 0 && c.genus == 0);
    let shift = 2 * other as u64;
    if disk_piece && other > 0 {
        s.complexity() + shift - 1
    } else {
        s.complexity() + shift
    }
}

fn upper_bound(
    d1: &CircularDecomposition,
    d2: &CircularDecomposition,
) -> Result<WidthMultiset, KnotOpsError> {
    let r1 = base_summand(d1, "first")?;
    let r2 = base_summand(d2, "second")?;
    let entries = d1
        .thick_surfaces()
        .iter()
        .map(|s| shifted_entry(s, r2.genus))
        .chain(
            d2.thick_surfaces()
                .iter()
                .map(|p| shifted_entry(p, r1.genus)),
        )
        .collect();
    Ok(WidthMultiset::new(entries))
}

/// Width of the decomposition induced on `E(K_1 ♯ K_2)`, an upper bound
/// for its circular width; sharpest when both bases have minimal genus.
pub fn cw_upper_bound_csum(
    d1: &CircularDecomposition,
    d2: &CircularDecomposition,
) -> Result<WidthMultiset, KnotOpsError> {
    upper_bound(d1, d2)
}

/// Same arithmetic for the closed manifold `E(K_1) ∪∂ E(K_2)`.
pub fn cw_upper_bound_bsum(
    d1: &CircularDecomposition,
    d2: &CircularDecomposition,
) -> Result<WidthMultiset, KnotOpsError> {
    upper_bound(d1, d2)
}
