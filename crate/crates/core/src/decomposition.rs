//! Circular handle decompositions as cyclic sequences of level surfaces.
//!
//! A decomposition with `k` stages is stored as thin surfaces `F_1..F_k` and
//! thick surfaces `S_1..S_k`; stage `i` runs `F_i -> S_i -> F_{i+1}` with the
//! closure `F_{k+1} = F_1` left implicit. `k = 0` is the fibered form and
//! keeps only the base surface `F_1 = R`.
//!
//! Stage indices in this module are 0-based; levels print 1-based (`F1`,
//! `S1`, ...) to match the usual naming.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::surface::{SurfaceClass, SurfaceComponent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Level surfaces carry the knot as a single boundary circle.
    Exterior,
    /// Every level surface is closed.
    Closed,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exterior => "exterior",
            Mode::Closed => "closed",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Level {
    Thin(usize),
    Thick(usize),
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Thin(i) => write!(f, "F{}", i + 1),
            Level::Thick(i) => write!(f, "S{}", i + 1),
        }
    }
}

/// Which half of a stage: the 1-handle block `F_i -> S_i` or the 2-handle
/// block `S_i -> F_{i+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HandleKind {
    OneHandles,
    TwoHandles,
}

impl fmt::Display for HandleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HandleKind::OneHandles => "1-handles",
            HandleKind::TwoHandles => "2-handles",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum Unrealizable {
    #[error("Euler characteristics differ by an odd amount")]
    OddEuler,
    #[error("would need {0} handles")]
    NegativeHandles(i64),
    #[error("no grouping of components matches")]
    NoGrouping,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    EmptyLevel {
        level: Level,
    },
    BoundaryPattern {
        level: Level,
        detail: String,
    },
    OddEuler {
        stage: usize,
        side: HandleKind,
    },
    NegativeHandles {
        stage: usize,
        side: HandleKind,
        count: i64,
    },
    Unrealizable {
        stage: usize,
        side: HandleKind,
    },
    BelowMinGenus {
        level: Level,
        min_genus: u32,
    },
    ThreeHandlesInExterior,
    ThreeHandlesWithoutStages,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyLevel { level } => write!(f, "{level}: empty level surface"),
            Violation::BoundaryPattern { level, detail } => write!(f, "{level}: {detail}"),
            Violation::OddEuler { stage, side } => {
                write!(
                    f,
                    "stage {}: {side} block has odd Euler difference",
                    stage + 1
                )
            }
            Violation::NegativeHandles { stage, side, count } => {
                write!(
                    f,
                    "stage {}: {side} block would need {count} handles",
                    stage + 1
                )
            }
            Violation::Unrealizable { stage, side } => {
                write!(
                    f,
                    "stage {}: transition not realizable by {side}",
                    stage + 1
                )
            }
            Violation::BelowMinGenus { level, min_genus } => {
                write!(f, "{level}: below asserted minimal genus {min_genus}")
            }
            Violation::ThreeHandlesInExterior => f.write_str("three-handles in exterior mode"),
            Violation::ThreeHandlesWithoutStages => f.write_str("three-handles without stages"),
        }
    }
}

/// Conditions that are accepted but worth reporting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Flag {
    TrivialHalf {
        stage: usize,
        side: HandleKind,
    },
    CappedSphere {
        level: Level,
        component: SurfaceComponent,
    },
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flag::TrivialHalf { stage, side } => {
                write!(f, "stage {}: empty {side} block", stage + 1)
            }
            Flag::CappedSphere { level, component } => {
                write!(f, "{level}: component {component} caps off to a sphere")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub flags: Vec<Flag>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            writeln!(f, "valid")?;
        } else {
            writeln!(f, "invalid")?;
        }
        for v in &self.violations {
            writeln!(f, "  error: {v}")?;
        }
        for fl in &self.flags {
            writeln!(f, "  note: {fl}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("{thin} thin surfaces for {thick} thick surfaces")]
    Shape { thin: usize, thick: usize },
    #[error("invalid decomposition: {}", .0.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(ValidationReport),
    #[error("stage {index} out of range (k = {k})")]
    StageOutOfRange { index: usize, k: usize },
}

/// Non-increasing sequence of thick-surface complexities.
///
/// Ordered lexicographically; a proper prefix sorts first, so the empty
/// multiset (the fibered case) is the unique minimum.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<u64>", into = "Vec<u64>")]
pub struct WidthMultiset(Vec<u64>);

impl WidthMultiset {
    pub fn new(mut entries: Vec<u64>) -> Self {
        entries.sort_unstable_by(|a, b| b.cmp(a));
        Self(entries)
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Add `shift` to every entry.
    pub fn shifted(&self, shift: u64) -> Self {
        Self(self.0.iter().map(|e| e + shift).collect())
    }

    pub fn merged(&self, other: &Self) -> Self {
        Self::new(self.0.iter().chain(&other.0).copied().collect())
    }
}

impl From<Vec<u64>> for WidthMultiset {
    fn from(v: Vec<u64>) -> Self {
        Self::new(v)
    }
}

impl From<WidthMultiset> for Vec<u64> {
    fn from(w: WidthMultiset) -> Self {
        w.0
    }
}

pub fn compare_width(a: &WidthMultiset, b: &WidthMultiset) -> Ordering {
    for (x, y) in a.0.iter().zip(&b.0) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.0.len().cmp(&b.0.len())
}

impl Ord for WidthMultiset {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_width(self, other)
    }
}

impl PartialOrd for WidthMultiset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for WidthMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// Counts of critical points of each index of the circle-valued Morse map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MorseStats {
    pub m1: u64,
    pub m2: u64,
    pub m3: u64,
    pub m: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompressionBodyHalf {
    pub minus: SurfaceClass,
    pub plus: SurfaceClass,
    pub handles: u64,
}

/// A stage `W_i` cut along `S_i` into `A_i` (1-handles on `F_i`) and `B_i`
/// (dually, 1-handles on `F_{i+1}`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompressionBodyView {
    pub stage: usize,
    pub a: CompressionBodyHalf,
    pub b: CompressionBodyHalf,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CircularDecomposition {
    mode: Mode,
    thin: Vec<SurfaceClass>,
    thick: Vec<SurfaceClass>,
    three_handles: u32,
    min_genus: Option<u32>,
    provenance: Vec<String>,
}

impl CircularDecomposition {
    pub fn new(
        mode: Mode,
        thin: Vec<SurfaceClass>,
        thick: Vec<SurfaceClass>,
    ) -> Result<Self, DecompositionError> {
        if thin.len() != thick.len().max(1) {
            return Err(DecompositionError::Shape {
                thin: thin.len(),
                thick: thick.len(),
            });
        }
        Ok(Self {
            mode,
            thin,
            thick,
            three_handles: 0,
            min_genus: None,
            provenance: Vec::new(),
        })
    }

    pub fn fibered(mode: Mode, base: SurfaceClass) -> Self {
        Self::new(mode, vec![base], Vec::new()).expect("fibered shape")
    }

    /// From the alternating list `F_1, S_1, ..., F_k, S_k` (or just `[R]`).
    pub fn from_levels(mode: Mode, levels: Vec<SurfaceClass>) -> Result<Self, DecompositionError> {
        if levels.len() == 1 {
            return Ok(Self::fibered(mode, levels.into_iter().next().unwrap()));
        }
        if levels.is_empty() || levels.len() % 2 == 1 {
            return Err(DecompositionError::Shape {
                thin: levels.len().div_ceil(2),
                thick: levels.len() / 2,
            });
        }
        let (mut thin, mut thick) = (Vec::new(), Vec::new());
        for (i, s) in levels.into_iter().enumerate() {
            if i % 2 == 0 {
                thin.push(s);
            } else {
                thick.push(s);
            }
        }
        Self::new(mode, thin, thick)
    }

    pub fn with_three_handles(mut self, n: u32) -> Self {
        self.three_handles = n;
        self
    }

    pub fn with_min_genus(mut self, g: Option<u32>) -> Self {
        self.min_genus = g;
        self
    }

    pub fn with_provenance(mut self, lines: Vec<String>) -> Self {
        self.provenance = lines;
        self
    }

    pub fn push_provenance(&mut self, line: impl Into<String>) {
        self.provenance.push(line.into());
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Number of stages.
    pub fn k(&self) -> usize {
        self.thick.len()
    }

    pub fn is_fibered_form(&self) -> bool {
        self.thick.is_empty()
    }

    pub fn base(&self) -> &SurfaceClass {
        &self.thin[0]
    }

    pub fn thin(&self, i: usize) -> &SurfaceClass {
        &self.thin[i]
    }

    pub fn thick(&self, i: usize) -> &SurfaceClass {
        &self.thick[i]
    }

    pub fn thin_surfaces(&self) -> &[SurfaceClass] {
        &self.thin
    }

    pub fn thick_surfaces(&self) -> &[SurfaceClass] {
        &self.thick
    }

    /// `F_{i+1}`, wrapping around to `F_1`.
    pub fn next_thin(&self, i: usize) -> &SurfaceClass {
        &self.thin[(i + 1) % self.thin.len()]
    }

    pub fn three_handles(&self) -> u32 {
        self.three_handles
    }

    pub fn min_genus(&self) -> Option<u32> {
        self.min_genus
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    /// Alternating `F_1, S_1, ..., F_k, S_k`.
    pub fn levels(&self) -> Vec<(Level, &SurfaceClass)> {
        if self.is_fibered_form() {
            return vec![(Level::Thin(0), &self.thin[0])];
        }
        (0..self.k())
            .flat_map(|i| {
                [
                    (Level::Thin(i), &self.thin[i]),
                    (Level::Thick(i), &self.thick[i]),
                ]
            })
            .collect()
    }

    pub fn check_stage(&self, index: usize) -> Result<(), DecompositionError> {
        if index >= self.k() {
            Err(DecompositionError::StageOutOfRange { index, k: self.k() })
        } else {
            Ok(())
        }
    }

    /// What the 2-handle block of stage `i` must produce before any
    /// 3-handles: `F_{i+1}`, plus one sphere per 3-handle at the closure.
    fn two_handle_target(&self, i: usize) -> SurfaceClass {
        let next = self.next_thin(i);
        if i + 1 == self.k() && self.three_handles > 0 {
            let mut comps = next.components().to_vec();
            comps.extend(std::iter::repeat_n(
                SurfaceComponent::SPHERE,
                self.three_handles as usize,
            ));
            SurfaceClass::new(comps)
        } else {
            next.clone()
        }
    }

    /// Raw `(χ(F_i) - χ(S_i)) / 2`, or `None` if the difference is odd.
    fn raw_one_handles(&self, i: usize) -> Option<i64> {
        half(self.thin[i].euler() - self.thick[i].euler())
    }

    fn raw_two_handles(&self, i: usize) -> Option<i64> {
        half(self.two_handle_target(i).euler() - self.thick[i].euler())
    }

    /// Number of 1-handles `n_i` in stage `i`. Meaningful on valid input.
    pub fn one_handles(&self, i: usize) -> u64 {
        self.raw_one_handles(i).unwrap_or(0).max(0) as u64
    }

    /// Number of 2-handles `t_i` in stage `i`. Meaningful on valid input.
    pub fn two_handles(&self, i: usize) -> u64 {
        self.raw_two_handles(i).unwrap_or(0).max(0) as u64
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for (level, s) in self.levels() {
            self.check_level(level, s, &mut report);
        }
        if self.three_handles > 0 {
            if self.mode == Mode::Exterior {
                report.violations.push(Violation::ThreeHandlesInExterior);
            } else if self.is_fibered_form() {
                report.violations.push(Violation::ThreeHandlesWithoutStages);
            }
        }
        for i in 0..self.k() {
            let halves = [
                (HandleKind::OneHandles, &self.thin[i], self.thick[i].clone()),
                (
                    HandleKind::TwoHandles,
                    &self.thick[i],
                    self.two_handle_target(i),
                ),
            ];
            for (side, from, to) in halves {
                match transition_realizable(from, &to, side) {
                    Ok(0) => report.flags.push(Flag::TrivialHalf { stage: i, side }),
                    Ok(_) => {}
                    Err(Unrealizable::OddEuler) => report
                        .violations
                        .push(Violation::OddEuler { stage: i, side }),
                    Err(Unrealizable::NegativeHandles(count)) => {
                        report.violations.push(Violation::NegativeHandles {
                            stage: i,
                            side,
                            count,
                        })
                    }
                    Err(Unrealizable::NoGrouping) => report
                        .violations
                        .push(Violation::Unrealizable { stage: i, side }),
                }
            }
        }
        report
    }

    fn check_level(&self, level: Level, s: &SurfaceClass, report: &mut ValidationReport) {
        if s.is_empty() {
            report.violations.push(Violation::EmptyLevel { level });
            return;
        }
        match self.mode {
            Mode::Exterior => {
                if let Err(e) = s.boundary_component() {
                    report.violations.push(Violation::BoundaryPattern {
                        level,
                        detail: e.to_string(),
                    });
                }
            }
            Mode::Closed => {
                if s.total_boundary() > 0 {
                    report.violations.push(Violation::BoundaryPattern {
                        level,
                        detail: "closed mode requires closed level surfaces".into(),
                    });
                }
            }
        }
        if let Some(g) = self.min_genus {
            let below = match self.mode {
                Mode::Exterior => s
                    .components()
                    .iter()
                    .find(|c| c.boundary > 0)
                    .is_some_and(|c| c.genus < g),
                // The level surfaces carry the nonzero fiber class, so some
                // component is not a sphere even when the norm floor is 0.
                Mode::Closed => {
                    s.thurston_norm() < (2 * g as u64).saturating_sub(2)
                        || (g >= 1 && s.components().iter().all(|c| c.genus == 0))
                }
            };
            if below {
                report.violations.push(Violation::BelowMinGenus {
                    level,
                    min_genus: g,
                });
            }
        }
        for c in s.components() {
            if c.caps_to_sphere() {
                report.flags.push(Flag::CappedSphere {
                    level,
                    component: *c,
                });
            }
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    pub fn ensure_valid(&self) -> Result<(), DecompositionError> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(DecompositionError::Invalid(report))
        }
    }

    /// Thick-surface complexities, without checking validity.
    pub fn width_unchecked(&self) -> WidthMultiset {
        WidthMultiset::new(self.thick.iter().map(SurfaceClass::complexity).collect())
    }

    pub fn width(&self) -> Result<WidthMultiset, DecompositionError> {
        self.ensure_valid()?;
        Ok(self.width_unchecked())
    }

    pub fn rotated(&self, by: usize) -> Self {
        let mut out = self.clone();
        if self.k() > 0 {
            out.thin.rotate_left(by % self.k());
            out.thick.rotate_left(by % self.k());
        }
        out
    }

    fn stage_key(&self, i: usize) -> String {
        format!("F {} S {}", self.thin[i], self.thick[i])
    }

    /// Least rotation of the stage sequence, comparing stages by their
    /// serialized text.
    pub fn canonical_form(&self) -> Result<Self, DecompositionError> {
        self.ensure_valid()?;
        Ok(self.canonical_form_unchecked())
    }

    pub fn canonical_form_unchecked(&self) -> Self {
        // Rotating would move the terminal 3-handles to another stage.
        if self.k() <= 1 || self.three_handles > 0 {
            return self.clone();
        }
        let keys: Vec<String> = (0..self.k()).map(|i| self.stage_key(i)).collect();
        let k = keys.len();
        let best = (0..k)
            .min_by(|&a, &b| {
                (0..k)
                    .map(|j| &keys[(a + j) % k])
                    .cmp((0..k).map(|j| &keys[(b + j) % k]))
            })
            .unwrap_or(0);
        self.rotated(best)
    }

    /// Serialized level data of the canonical form; equal for decompositions
    /// that differ only by rotation or provenance.
    pub fn canonical_key(&self) -> String {
        let c = self.canonical_form_unchecked().with_provenance(Vec::new());
        crate::format::serialize(&c)
    }

    pub fn morse_stats(&self) -> Result<MorseStats, DecompositionError> {
        self.ensure_valid()?;
        let m1: u64 = (0..self.k()).map(|i| self.one_handles(i)).sum();
        let m2: u64 = (0..self.k()).map(|i| self.two_handles(i)).sum();
        let m3 = self.three_handles as u64;
        Ok(MorseStats {
            m1,
            m2,
            m3,
            m: m1 + m2 + m3,
        })
    }

    pub fn compression_body_views(&self) -> Result<Vec<CompressionBodyView>, DecompositionError> {
        self.ensure_valid()?;
        Ok((0..self.k())
            .map(|i| CompressionBodyView {
                stage: i,
                a: CompressionBodyHalf {
                    minus: self.thin[i].clone(),
                    plus: self.thick[i].clone(),
                    handles: self.one_handles(i),
                },
                b: CompressionBodyHalf {
                    minus: self.next_thin(i).clone(),
                    plus: self.thick[i].clone(),
                    handles: self.two_handles(i),
                },
            })
            .collect())
    }

    pub(crate) fn replace_stages(
        &self,
        thin: Vec<SurfaceClass>,
        thick: Vec<SurfaceClass>,
    ) -> Result<Self, DecompositionError> {
        let mut out = Self::new(self.mode, thin, thick)?;
        out.three_handles = self.three_handles;
        out.min_genus = self.min_genus;
        out.provenance = self.provenance.clone();
        Ok(out)
    }
}

fn half(d: i64) -> Option<i64> {
    (d % 2 == 0).then_some(d / 2)
}

/// Decide whether `to` is obtained from `from` by attaching 1-handles (or
/// 2-handles), and if so how many.
///
/// 1-handles: `from`'s components split into one non-empty group per
/// component of `to`, with equal boundary count and genus sum at most the
/// target genus. 2-handles: the same with the roles of `from` and `to`
/// exchanged.
pub fn transition_realizable(
    from: &SurfaceClass,
    to: &SurfaceClass,
    kind: HandleKind,
) -> Result<u64, Unrealizable> {
    let (small, large) = match kind {
        HandleKind::OneHandles => (from, to),
        HandleKind::TwoHandles => (to, from),
    };
    let diff = small.euler() - large.euler();
    let m = half(diff).ok_or(Unrealizable::OddEuler)?;
    if m < 0 {
        return Err(Unrealizable::NegativeHandles(m));
    }
    if groups_into(small.components(), large.components()) {
        Ok(m as u64)
    } else {
        Err(Unrealizable::NoGrouping)
    }
}

/// Backtracking search for an assignment of every `small` component to a
/// `large` component such that each `large` component receives at least
/// one, boundary counts add up exactly, and genus sums stay within bounds.
fn groups_into(small: &[SurfaceComponent], large: &[SurfaceComponent]) -> bool {
    if small.len() < large.len() {
        return false;
    }
    if small.iter().map(|c| c.boundary).sum::<u32>()
        != large.iter().map(|c| c.boundary).sum::<u32>()
    {
        return false;
    }
    let mut order: Vec<SurfaceComponent> = small.to_vec();
    order.sort_unstable_by(|a, b| b.cmp(a));
    let mut state = GroupState {
        large,
        genus: vec![0; large.len()],
        boundary: vec![0; large.len()],
        count: vec![0; large.len()],
        empty: large.len(),
    };
    state.assign(&order)
}

struct GroupState<'a> {
    large: &'a [SurfaceComponent],
    genus: Vec<u32>,
    boundary: Vec<u32>,
    count: Vec<usize>,
    empty: usize,
}

impl GroupState<'_> {
    fn assign(&mut self, rest: &[SurfaceComponent]) -> bool {
        let Some((c, tail)) = rest.split_first() else {
            return self.empty == 0
                && self
                    .boundary
                    .iter()
                    .zip(self.large)
                    .all(|(b, l)| *b == l.boundary);
        };
        if rest.len() < self.empty {
            return false;
        }
        for j in 0..self.large.len() {
            // Identical untouched targets are interchangeable.
            if self.count[j] == 0
                && (0..j).any(|p| self.count[p] == 0 && self.large[p] == self.large[j])
            {
                continue;
            }
            let target = self.large[j];
            if self.genus[j] + c.genus > target.genus
                || self.boundary[j] + c.boundary > target.boundary
            {
                continue;
            }
            self.genus[j] += c.genus;
            self.boundary[j] += c.boundary;
            self.count[j] += 1;
            if self.count[j] == 1 {
                self.empty -= 1;
            }
            let ok = self.assign(tail);
            if self.count[j] == 1 {
                self.empty += 1;
            }
            self.count[j] -= 1;
            self.boundary[j] -= c.boundary;
            self.genus[j] -= c.genus;
            if ok {
                return true;
            }
        }
        false
    }
}
