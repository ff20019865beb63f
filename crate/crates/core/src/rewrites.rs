//! Width-decreasing rewrites of circular decompositions and a bounded
//! breadth-first search over the graph they generate.
//!
//! A weak reduction takes a thick surface `S_i` with an essential
//! compression on each side and untelescopes the stage:
//!
//! ```text
//! F_i -> S_i -> F_{i+1}   becomes   F_i -> S^A -> F_new -> S^B -> F_{i+1}
//! ```
//!
//! where `S^A`, `S^B` are `S_i` compressed along one disk and `F_new` along
//! both. Since both compressions are essential, `c(S^A), c(S^B) < c(S_i)`
//! and the width strictly drops.
//!
//! Everything here works on the formal `(genus, boundary)` model: whether a
//! compatible pair of compressions exists on an actual surface in a knot
//! exterior is not decided. Search results certify the formal rewrite graph
//! only.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::decomposition::{CircularDecomposition, DecompositionError, Mode, WidthMultiset};
use crate::surface::{SurfaceClass, SurfaceComponent, SurfaceError, TwoHandleMove};

/// Marker carried by every search result and its output file.
pub const FORMAL_MODEL_LABEL: &str = "formal-model result";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error("not one of the weak reductions available at stage {0}")]
    NotAReduction(usize),
    #[error("stage {stage} has {one_handles} 1-handles and {two_handles} 2-handles")]
    StageHasHandles {
        stage: usize,
        one_handles: u64,
        two_handles: u64,
    },
    #[error("stage {0} does not return to its own thin surface")]
    NotAProductStage(usize),
    #[error("thin surfaces F{} = {} and F{} = {} differ", .i + 1, .fi, .j + 1, .fj)]
    NotParallel {
        i: usize,
        j: usize,
        fi: SurfaceClass,
        fj: SurfaceClass,
    },
    #[error("removing a parallel region needs an explicit isotopy assertion")]
    MissingAssertion,
    #[error("a parallel region needs two distinct thin surfaces")]
    EmptyRegion,
    #[error("search budget must be positive")]
    ZeroBudget,
    #[error("classification is defined for knot-exterior decompositions only")]
    ClosedMode,
    #[error("trace line {line}: {msg}")]
    TraceSyntax { line: usize, msg: String },
    #[error("trace line {line}: {source}")]
    TraceStep {
        line: usize,
        source: Box<RewriteError>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct WeakReduction {
    pub stage: usize,
    pub move_a: TwoHandleMove,
    pub move_b: TwoHandleMove,
    pub thick_a: SurfaceClass,
    pub thick_b: SurfaceClass,
    pub thin_new: SurfaceClass,
}

/// Caller-supplied statement that two thin surfaces are isotopic in the
/// underlying manifold. It cannot be checked here, only recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotopyAssertion(String);

impl IsotopyAssertion {
    pub fn new(note: impl Into<String>) -> Option<Self> {
        let note = note.into();
        (!note.trim().is_empty()).then_some(Self(note))
    }

    pub fn note(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Delete stages `i, i+1, ..., j-1`.
    Forward,
    /// Delete stages `j, j+1, ..., i-1`.
    Backward,
}

/// One line of a rewrite trace. Stage numbers are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "rewrite", rename_all = "kebab-case")]
pub enum TraceStep {
    WeakReduction {
        stage: usize,
        move_a: TwoHandleMove,
        move_b: TwoHandleMove,
        thin_new: SurfaceClass,
    },
    RemoveTrivial {
        stage: usize,
    },
    /// Region between thin surfaces `from` and `to`, walking forward.
    RemoveParallel {
        from: usize,
        to: usize,
    },
}

impl From<&WeakReduction> for TraceStep {
    fn from(wr: &WeakReduction) -> Self {
        TraceStep::WeakReduction {
            stage: wr.stage,
            move_a: wr.move_a,
            move_b: wr.move_b,
            thin_new: wr.thin_new.clone(),
        }
    }
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceStep::WeakReduction {
                stage,
                move_a,
                move_b,
                thin_new,
            } => write!(f, "WR {stage} {move_a} {move_b} {thin_new}"),
            TraceStep::RemoveTrivial { stage } => write!(f, "RT {stage}"),
            TraceStep::RemoveParallel { from, to } => write!(f, "RP {from} {to}"),
        }
    }
}

pub fn format_trace(steps: &[TraceStep]) -> String {
    steps.iter().map(|s| format!("{s}\n")).collect()
}

/// Parse the one-rewrite-per-line trace format. Blank lines and `#`
/// comments are skipped.
pub fn parse_trace(text: &str) -> Result<Vec<TraceStep>, RewriteError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |msg: &str| RewriteError::TraceSyntax {
            line,
            msg: msg.to_string(),
        };
        let mut fields = content.split_whitespace();
        let tag = fields.next().unwrap_or_default();
        let mut number = || -> Result<usize, RewriteError> {
            fields
                .next()
                .ok_or_else(|| err("missing stage number"))?
                .parse()
                .map_err(|_| err("expected stage number"))
        };
        let step = match tag {
            "RT" => TraceStep::RemoveTrivial { stage: number()? },
            "RP" => TraceStep::RemoveParallel {
                from: number()?,
                to: number()?,
            },
            "WR" => {
                let stage = number()?;
                let mv = |s: Option<&str>| -> Result<TwoHandleMove, RewriteError> {
                    s.ok_or_else(|| err("missing move"))?
                        .parse()
                        .map_err(|e: SurfaceError| err(&e.to_string()))
                };
                let move_a = mv(fields.next())?;
                let move_b = mv(fields.next())?;
                let rest: Vec<&str> = fields.by_ref().collect();
                let thin_new = rest
                    .join(" ")
                    .parse()
                    .map_err(|e: SurfaceError| err(&e.to_string()))?;
                TraceStep::WeakReduction {
                    stage,
                    move_a,
                    move_b,
                    thin_new,
                }
            }
            _ => return Err(err("unknown rewrite tag")),
        };
        if !matches!(step, TraceStep::WeakReduction { .. }) && fields.next().is_some() {
            return Err(err("trailing fields"));
        }
        out.push(step);
    }
    Ok(out)
}

fn essential_moves(s: &SurfaceClass) -> Vec<TwoHandleMove> {
    let mut out = Vec::new();
    for (index, c) in s.components().iter().enumerate() {
        if c.genus >= 1 {
            out.push(TwoHandleMove::CompressNonSep(index));
        }
        for g1 in 1..c.genus {
            for b1 in 0..=c.boundary {
                if (g1, b1) <= (c.genus - g1, c.boundary - b1) {
                    out.push(TwoHandleMove::CompressSep { index, g1, b1 });
                }
            }
        }
    }
    out
}

fn minus_genus(c: SurfaceComponent) -> Option<SurfaceComponent> {
    (c.genus >= 1).then(|| SurfaceComponent::new(c.genus - 1, c.boundary))
}

fn difference(c: SurfaceComponent, x: SurfaceComponent) -> Option<SurfaceComponent> {
    Some(SurfaceComponent::new(
        c.genus.checked_sub(x.genus)?,
        c.boundary.checked_sub(x.boundary)?,
    ))
}

/// Surfaces obtained by compressing `s` along disjoint curves realizing
/// both moves. Each entry is the multiset of pieces replacing the affected
/// component(s); the moves are assumed applicable.
fn doubly_compressed(s: &SurfaceClass, a: TwoHandleMove, b: TwoHandleMove) -> Vec<SurfaceClass> {
    use TwoHandleMove::*;
    let comps = s.components();
    let rebuild = |drop: &[usize], pieces: Vec<SurfaceComponent>| -> SurfaceClass {
        comps
            .iter()
            .enumerate()
            .filter(|(k, _)| !drop.contains(k))
            .map(|(_, c)| *c)
            .chain(pieces)
            .collect()
    };
    if a.index() != b.index() {
        let (ca, cb) = (comps[a.index()], comps[b.index()]);
        let mut pieces = a.split(ca).expect("applicable");
        pieces.extend(b.split(cb).expect("applicable"));
        return vec![rebuild(&[a.index(), b.index()], pieces)];
    }
    let i = a.index();
    let c = comps[i];
    let mut out = Vec::new();
    match (a, b) {
        (CompressNonSep(_), CompressNonSep(_)) => {
            if c.genus >= 2 {
                out.push(rebuild(
                    &[i],
                    vec![SurfaceComponent::new(c.genus - 2, c.boundary)],
                ));
            }
        }
        (CompressNonSep(_), sep @ CompressSep { .. })
        | (sep @ CompressSep { .. }, CompressNonSep(_)) => {
            // The non-separating curve lies on one side of the separating one.
            let pieces = sep.split(c).expect("applicable");
            let (p, q) = (pieces[0], pieces[1]);
            if let Some(p1) = minus_genus(p) {
                out.push(rebuild(&[i], vec![p1, q]));
            }
            if let Some(q1) = minus_genus(q) {
                out.push(rebuild(&[i], vec![p, q1]));
            }
        }
        (CompressSep { .. }, CompressSep { .. }) => {
            // Disjoint separating curves cut the component into a chain
            // X | Y | Z with A cutting off X and B cutting off Z.
            let pa = a.split(c).expect("applicable");
            let pb = b.split(c).expect("applicable");
            for &x in &pa {
                for &z in &pb {
                    let Some(y) = difference(c, x).and_then(|r| difference(r, z)) else {
                        continue;
                    };
                    out.push(rebuild(&[i], vec![x, y, z]));
                }
            }
        }
    }
    out
}

fn splice(
    d: &CircularDecomposition,
    stage: usize,
    thick_a: SurfaceClass,
    thin_new: SurfaceClass,
    thick_b: SurfaceClass,
) -> Result<CircularDecomposition, DecompositionError> {
    let mut thin = d.thin_surfaces().to_vec();
    let mut thick = d.thick_surfaces().to_vec();
    thick[stage] = thick_a;
    thick.insert(stage + 1, thick_b);
    thin.insert(stage + 1, thin_new);
    d.replace_stages(thin, thick)
}

/// All weak reductions at stage `i` whose rewritten decomposition is valid.
pub fn enumerate_weak_reductions(
    d: &CircularDecomposition,
    i: usize,
) -> Result<Vec<WeakReduction>, RewriteError> {
    d.check_stage(i)?;
    let s = d.thick(i);
    let moves = essential_moves(s);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for &a in &moves {
        let thick_a = s.apply_two_handle(a).expect("applicable");
        for &b in &moves {
            let thick_b = s.apply_two_handle(b).expect("applicable");
            for thin_new in doubly_compressed(s, a, b) {
                let key = (thick_a.clone(), thick_b.clone(), thin_new.clone());
                if seen.contains(&key) {
                    continue;
                }
                let candidate = splice(d, i, thick_a.clone(), thin_new.clone(), thick_b.clone())?;
                if !candidate.is_valid() {
                    continue;
                }
                seen.insert(key);
                out.push(WeakReduction {
                    stage: i,
                    move_a: a,
                    move_b: b,
                    thick_a: thick_a.clone(),
                    thick_b: thick_b.clone(),
                    thin_new,
                });
            }
        }
    }
    Ok(out)
}

pub fn apply_weak_reduction(
    d: &CircularDecomposition,
    wr: &WeakReduction,
) -> Result<CircularDecomposition, RewriteError> {
    d.ensure_valid()?;
    if !enumerate_weak_reductions(d, wr.stage)?.contains(wr) {
        return Err(RewriteError::NotAReduction(wr.stage));
    }
    Ok(splice(
        d,
        wr.stage,
        wr.thick_a.clone(),
        wr.thin_new.clone(),
        wr.thick_b.clone(),
    )?)
}

fn trivial_stage_check(d: &CircularDecomposition, i: usize) -> Result<(), RewriteError> {
    d.check_stage(i)?;
    let (n, t) = (d.one_handles(i), d.two_handles(i));
    if n != 0 || t != 0 {
        return Err(RewriteError::StageHasHandles {
            stage: i,
            one_handles: n,
            two_handles: t,
        });
    }
    if d.thin(i) != d.next_thin(i) {
        return Err(RewriteError::NotAProductStage(i));
    }
    Ok(())
}

/// Delete a stage with no handles (`F_i = S_i = F_{i+1}`).
pub fn remove_trivial_stage(
    d: &CircularDecomposition,
    i: usize,
) -> Result<CircularDecomposition, RewriteError> {
    d.ensure_valid()?;
    trivial_stage_check(d, i)?;
    let mut thin = d.thin_surfaces().to_vec();
    let mut thick = d.thick_surfaces().to_vec();
    if d.k() == 1 {
        return Ok(d.replace_stages(vec![thin.remove(i)], Vec::new())?);
    }
    thin.remove(i);
    thick.remove(i);
    Ok(d.replace_stages(thin, thick)?)
}

/// Insert a handle-free stage `(F_i, F_i)` in front of stage `i`; with
/// `k = 0` this turns the fibered form into a single trivial stage.
pub fn insert_trivial_stage(
    d: &CircularDecomposition,
    i: usize,
) -> Result<CircularDecomposition, RewriteError> {
    d.ensure_valid()?;
    if d.k() == 0 {
        let base = d.base().clone();
        return Ok(d.replace_stages(vec![base.clone()], vec![base])?);
    }
    d.check_stage(i)?;
    let mut thin = d.thin_surfaces().to_vec();
    let mut thick = d.thick_surfaces().to_vec();
    thin.insert(i, thin[i].clone());
    thick.insert(i, thin[i].clone());
    Ok(d.replace_stages(thin, thick)?)
}

/// Cut out the product region between two isotopic thin surfaces.
pub fn remove_parallel_region(
    d: &CircularDecomposition,
    i: usize,
    j: usize,
    direction: Direction,
    assertion: Option<&IsotopyAssertion>,
) -> Result<CircularDecomposition, RewriteError> {
    let assertion = assertion.ok_or(RewriteError::MissingAssertion)?;
    d.ensure_valid()?;
    d.check_stage(i)?;
    d.check_stage(j)?;
    if i == j {
        return Err(RewriteError::EmptyRegion);
    }
    if d.thin(i) != d.thin(j) {
        return Err(RewriteError::NotParallel {
            i,
            j,
            fi: d.thin(i).clone(),
            fj: d.thin(j).clone(),
        });
    }
    let (from, to) = match direction {
        Direction::Forward => (i, j),
        Direction::Backward => (j, i),
    };
    let k = d.k();
    let doomed: HashSet<usize> = (0..k)
        .map(|step| (from + step) % k)
        .take_while(|&s| s != to)
        .collect();
    let keep: Vec<usize> = (0..k).filter(|s| !doomed.contains(s)).collect();
    let thin = keep.iter().map(|&s| d.thin(s).clone()).collect();
    let thick = keep.iter().map(|&s| d.thick(s).clone()).collect();
    let mut out = d.replace_stages(thin, thick)?;
    out.push_provenance(format!(
        "isotopy asserted: F{} ~ F{} ({})",
        i + 1,
        j + 1,
        assertion.note()
    ));
    out.ensure_valid()?;
    Ok(out)
}

/// Re-run a trace from `d`. `RP` steps need `assertion`.
pub fn replay(
    d: &CircularDecomposition,
    steps: &[TraceStep],
    assertion: Option<&IsotopyAssertion>,
) -> Result<CircularDecomposition, RewriteError> {
    let mut cur = d.clone();
    for (n, step) in steps.iter().enumerate() {
        let wrap = |e: RewriteError| RewriteError::TraceStep {
            line: n + 1,
            source: Box::new(e),
        };
        cur = match step {
            TraceStep::WeakReduction { stage, .. } => {
                let wr = enumerate_weak_reductions(&cur, *stage)
                    .map_err(wrap)?
                    .into_iter()
                    .find(|wr| TraceStep::from(wr) == *step)
                    .ok_or_else(|| wrap(RewriteError::NotAReduction(*stage)))?;
                apply_weak_reduction(&cur, &wr).map_err(wrap)?
            }
            TraceStep::RemoveTrivial { stage } => {
                remove_trivial_stage(&cur, *stage).map_err(wrap)?
            }
            TraceStep::RemoveParallel { from, to } => {
                remove_parallel_region(&cur, *from, *to, Direction::Forward, assertion)
                    .map_err(wrap)?
            }
        };
    }
    Ok(cur)
}

/// Rewrites available from `d`, in the fixed order used by the search:
/// stages ascending, trivial-stage removal before weak reductions.
pub fn neighbours(
    d: &CircularDecomposition,
) -> Result<Vec<(TraceStep, CircularDecomposition)>, RewriteError> {
    let mut out = Vec::new();
    for i in 0..d.k() {
        if trivial_stage_check(d, i).is_ok() {
            out.push((
                TraceStep::RemoveTrivial { stage: i },
                remove_trivial_stage(d, i)?,
            ));
        }
        for wr in enumerate_weak_reductions(d, i)? {
            let next = splice(
                d,
                i,
                wr.thick_a.clone(),
                wr.thin_new.clone(),
                wr.thick_b.clone(),
            )?;
            out.push((TraceStep::from(&wr), next));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub best: CircularDecomposition,
    pub width: WidthMultiset,
    pub trace: Vec<TraceStep>,
    /// Distinct decompositions (up to rotation) reached.
    pub explored: usize,
    /// Whether the whole reachable graph fit in the budget.
    pub exhausted: bool,
}

struct Node {
    d: CircularDecomposition,
    key: String,
    width: WidthMultiset,
    parent: Option<(usize, TraceStep)>,
}

/// Breadth-first search over weak reductions and trivial-stage removals,
/// memoized on canonical form, visiting at most `budget` decompositions.
///
/// Returns the least-width decomposition reached; ties go to the least
/// canonical serialization. The result is labelled as a formal-model
/// result.
pub fn thin_search(d: &CircularDecomposition, budget: usize) -> Result<SearchResult, RewriteError> {
    if budget == 0 {
        return Err(RewriteError::ZeroBudget);
    }
    d.ensure_valid()?;
    let root_key = d.canonical_key();
    let mut nodes = vec![Node {
        d: d.clone(),
        width: d.width_unchecked(),
        key: root_key.clone(),
        parent: None,
    }];
    let mut seen = HashSet::from([root_key]);
    let mut queue = VecDeque::from([0usize]);
    let mut exhausted = true;

    'bfs: while let Some(id) = queue.pop_front() {
        for (step, next) in neighbours(&nodes[id].d)? {
            let key = next.canonical_key();
            if seen.contains(&key) {
                continue;
            }
            if nodes.len() >= budget {
                exhausted = false;
                break 'bfs;
            }
            seen.insert(key.clone());
            nodes.push(Node {
                width: next.width_unchecked(),
                d: next,
                key,
                parent: Some((id, step)),
            });
            queue.push_back(nodes.len() - 1);
        }
    }

    let best = (0..nodes.len())
        .min_by(|&a, &b| (&nodes[a].width, &nodes[a].key).cmp(&(&nodes[b].width, &nodes[b].key)))
        .expect("root node");
    let mut trace = Vec::new();
    let mut cur = best;
    while let Some((parent, step)) = &nodes[cur].parent {
        trace.push(step.clone());
        cur = *parent;
    }
    trace.reverse();
    let mut out = nodes[best].d.clone();
    out.push_provenance(FORMAL_MODEL_LABEL);
    Ok(SearchResult {
        width: nodes[best].width.clone(),
        best: out,
        trace,
        explored: nodes.len(),
        exhausted,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Form {
    FiberedForm,
    AlmostFiberedForm,
    MultiStage,
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Form::FiberedForm => "fibered-form",
            Form::AlmostFiberedForm => "almost-fibered-form",
            Form::MultiStage => "multi-stage",
        })
    }
}

/// Shape of a decomposition relative to the four outcomes for a knot
/// exterior in circular thin position. The indicators only carry that
/// meaning when the decomposition really is thin, which the caller asserts
/// and this type records without checking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub form: Form,
    /// Some thin surface has a closed component.
    pub closed_thin_component: bool,
    /// At least two stages and every thin surface connected.
    pub connected_thin_surfaces: bool,
    pub thin_asserted: bool,
}

pub fn classify(
    d: &CircularDecomposition,
    thin_asserted: bool,
) -> Result<Classification, RewriteError> {
    if d.mode() != Mode::Exterior {
        return Err(RewriteError::ClosedMode);
    }
    d.ensure_valid()?;
    let form = match d.k() {
        0 => Form::FiberedForm,
        1 => Form::AlmostFiberedForm,
        _ => Form::MultiStage,
    };
    let thin = d.thin_surfaces();
    Ok(Classification {
        form,
        closed_thin_component: thin.iter().any(|f| f.has_closed_component()),
        connected_thin_surfaces: d.k() >= 2 && thin.iter().all(|f| f.len() == 1),
        thin_asserted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::compare_width;
    use std::cmp::Ordering;

    fn s(text: &str) -> SurfaceClass {
        text.parse().unwrap()
    }

    fn ext(levels: &[&str]) -> CircularDecomposition {
        CircularDecomposition::from_levels(Mode::Exterior, levels.iter().map(|l| s(l)).collect())
            .unwrap()
    }

    fn width(d: &CircularDecomposition) -> Vec<u64> {
        d.width().unwrap().entries().to_vec()
    }

    #[test]
    fn genus_three_stage_reduces_to_three_three() {
        let d = ext(&["(1,1)", "(3,1)"]);
        let wrs = enumerate_weak_reductions(&d, 0).unwrap();
        let nn = wrs
            .iter()
            .find(|w| {
                w.move_a == TwoHandleMove::CompressNonSep(0)
                    && w.move_b == TwoHandleMove::CompressNonSep(0)
            })
            .expect("nonsep pair");
        assert_eq!(
            (&nn.thick_a, &nn.thick_b, &nn.thin_new),
            (&s("(2,1)"), &s("(2,1)"), &s("(1,1)"))
        );
        let out = apply_weak_reduction(&d, nn).unwrap();
        assert_eq!(width(&out), vec![3, 3]);
        assert_eq!(
            compare_width(&out.width().unwrap(), &d.width().unwrap()),
            Ordering::Less
        );

        let wr2 = enumerate_weak_reductions(&out, 0).unwrap();
        let next = apply_weak_reduction(&out, &wr2[0]).unwrap();
        assert_eq!(width(&next), vec![3, 1, 1]);
    }

    #[test]
    fn no_same_component_nonsep_pair_below_genus_two() {
        let d = ext(&["(1,1)", "(1,1)"]);
        assert!(enumerate_weak_reductions(&d, 0).unwrap().is_empty());
    }

    #[test]
    fn cross_component_pair_keeps_sphere_piece() {
        let d = ext(&["(1,1) (1,0)", "(2,1) (1,0)", "(1,1) (0,0)", "(1,1) (1,0)"]);
        assert!(d.is_valid(), "{}", d.validate());
        let wrs = enumerate_weak_reductions(&d, 0).unwrap();
        assert!(wrs
            .iter()
            .any(|w| w.move_a.index() != w.move_b.index() && w.thin_new == s("(1,1) (0,0)")));
        assert!(enumerate_weak_reductions(&d, 2).is_err());
    }

    #[test]
    fn fabricated_reduction_rejected() {
        let d = ext(&["(1,1)", "(3,1)"]);
        let fake = WeakReduction {
            stage: 0,
            move_a: TwoHandleMove::CompressNonSep(0),
            move_b: TwoHandleMove::CompressNonSep(0),
            thick_a: s("(2,1)"),
            thick_b: s("(2,1)"),
            thin_new: s("(2,1)"),
        };
        assert_eq!(
            apply_weak_reduction(&d, &fake),
            Err(RewriteError::NotAReduction(0))
        );
    }

    #[test]
    fn trivial_stage_removal() {
        let d = ext(&["(1,1)", "(2,1)", "(1,1)", "(1,1)"]);
        let out = remove_trivial_stage(&d, 1).unwrap();
        assert_eq!(width(&out), vec![3]);
        assert!(matches!(
            remove_trivial_stage(&d, 0),
            Err(RewriteError::StageHasHandles { one_handles: 1, .. })
        ));
        let single = ext(&["(1,1)", "(1,1)"]);
        let fib = remove_trivial_stage(&single, 0).unwrap();
        assert!(fib.is_fibered_form());
        let back = insert_trivial_stage(&out, 0).unwrap();
        assert_eq!(back.width().unwrap(), d.width().unwrap());
    }

    #[test]
    fn parallel_region() {
        let d = ext(&["(1,1)", "(2,1)", "(1,1)", "(3,1)"]);
        let yes = IsotopyAssertion::new("checked by hand").unwrap();
        let out = remove_parallel_region(&d, 0, 1, Direction::Forward, Some(&yes)).unwrap();
        assert_eq!(width(&out), vec![5]);
        assert!(out
            .provenance()
            .iter()
            .any(|p| p.contains("isotopy asserted")));
        let other = remove_parallel_region(&d, 0, 1, Direction::Backward, Some(&yes)).unwrap();
        assert_eq!(width(&other), vec![3]);
        assert_eq!(
            remove_parallel_region(&d, 0, 1, Direction::Forward, None),
            Err(RewriteError::MissingAssertion)
        );
        let mismatched = ext(&["(1,1)", "(3,1)", "(2,1)", "(3,1)"]);
        assert!(matches!(
            remove_parallel_region(&mismatched, 0, 1, Direction::Forward, Some(&yes)),
            Err(RewriteError::NotParallel { .. })
        ));
        assert!(IsotopyAssertion::new("  ").is_none());
    }

    #[test]
    fn search_basics() {
        let fib = ext(&["(1,1)"]);
        let r = thin_search(&fib, 10).unwrap();
        assert!(r.trace.is_empty());
        assert!(r.width.is_zero());
        assert_eq!(thin_search(&fib, 0), Err(RewriteError::ZeroBudget));

        let d = ext(&["(1,1)", "(3,1)"]);
        let r = thin_search(&d, 100).unwrap();
        assert!(r.width <= WidthMultiset::new(vec![3, 3]));
        assert!(r.best.provenance().iter().any(|p| p == FORMAL_MODEL_LABEL));
        let replayed = replay(&d, &r.trace, None).unwrap();
        assert_eq!(replayed.width().unwrap(), r.width);
    }

    #[test]
    fn trace_text_round_trip() {
        let steps = vec![
            TraceStep::WeakReduction {
                stage: 1,
                move_a: TwoHandleMove::CompressNonSep(0),
                move_b: TwoHandleMove::CompressSep {
                    index: 1,
                    g1: 1,
                    b1: 0,
                },
                thin_new: s("(1,1) (0,0)"),
            },
            TraceStep::RemoveTrivial { stage: 0 },
            TraceStep::RemoveParallel { from: 2, to: 0 },
        ];
        let text = format_trace(&steps);
        assert_eq!(
            text,
            "WR 1 nonsep(0) sep(1,1,0) (0,0) (1,1)\nRT 0\nRP 2 0\n"
        );
        assert_eq!(parse_trace(&text).unwrap(), steps);
        for bad in [
            "XX 1",
            "RT",
            "RT a",
            "RP 1",
            "WR 0 nonsep(0)",
            "RT 1 2",
            "WR 0 nonsep(0) nonsep(0) (1",
        ] {
            assert!(parse_trace(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn classify_cases() {
        let c = classify(&ext(&["(1,1)"]), false).unwrap();
        assert_eq!(c.form, Form::FiberedForm);
        let c = classify(&ext(&["(1,1)", "(2,1)"]), true).unwrap();
        assert_eq!(c.form, Form::AlmostFiberedForm);
        assert!(c.thin_asserted);
        let case3 = ext(&["(1,1)", "(2,1)", "(1,1) (1,0)", "(2,1)"]);
        let c = classify(&case3, true).unwrap();
        assert!(c.closed_thin_component);
        assert!(!c.connected_thin_surfaces);
        let case4 = ext(&["(1,1)", "(2,1)", "(1,1)", "(3,1)"]);
        let c = classify(&case4, true).unwrap();
        assert_eq!(c.form, Form::MultiStage);
        assert!(c.connected_thin_surfaces && !c.closed_thin_component);
        let closed = CircularDecomposition::fibered(Mode::Closed, s("(2,0)"));
        assert_eq!(classify(&closed, false), Err(RewriteError::ClosedMode));
    }
}
