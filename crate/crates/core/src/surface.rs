//! Abstract compact orientable surfaces and the level-surface surgeries
//! induced by attaching 1-, 2- and 3-handles.
//!
//! A surface is recorded only up to homeomorphism of each component, i.e. as a
//! multiset of `(genus, boundary)` pairs. Components are kept sorted so that
//! two equal surfaces have identical representations, and moves address
//! components by their index in that sorted order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("component index {index} out of range for a surface with {len} components")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("join needs two distinct components, got {0} twice")]
    JoinSameComponent(usize),
    #[error("cannot compress a genus-0 component along a non-separating curve")]
    NonSeparatingOnSphere,
    #[error("split ({g1},{b1}) out of range for component ({genus},{boundary})")]
    SplitOutOfRange {
        g1: u32,
        b1: u32,
        genus: u32,
        boundary: u32,
    },
    #[error("component {0} is not a closed sphere")]
    NotASphere(usize),
    #[error("expected exactly one boundary-bearing component, found {0}")]
    BoundaryPattern(usize),
    #[error("boundary-bearing component has {0} boundary circles, expected 1")]
    BoundaryCircles(u32),
    #[error("summand must have exactly one boundary circle, got {0}")]
    SummandBoundary(u32),
    #[error("non-orientable surfaces are not supported (crosscap count {0})")]
    NonOrientable(u32),
    #[error("malformed surface literal at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

/// A connected compact orientable surface, determined by genus and the
/// number of boundary circles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SurfaceComponent {
    pub genus: u32,
    pub boundary: u32,
}

impl SurfaceComponent {
    pub const SPHERE: Self = Self::new(0, 0);
    pub const DISK: Self = Self::new(0, 1);

    pub const fn new(genus: u32, boundary: u32) -> Self {
        Self { genus, boundary }
    }

    pub fn euler(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary as i64
    }

    /// True when capping every boundary circle yields a 2-sphere.
    pub fn caps_to_sphere(&self) -> bool {
        self.genus == 0
    }

    /// `1 - χ` of the capped-off surface, except that spheres and disks
    /// (and anything capping to a sphere) count zero.
    pub fn complexity(&self) -> u64 {
        if self.caps_to_sphere() {
            0
        } else {
            2 * self.genus as u64 - 1
        }
    }

    pub fn is_closed(&self) -> bool {
        self.boundary == 0
    }
}

impl fmt::Display for SurfaceComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.genus, self.boundary)
    }
}

/// A possibly disconnected surface, as a sorted multiset of components.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<SurfaceComponent>", into = "Vec<SurfaceComponent>")]
pub struct SurfaceClass {
    components: Vec<SurfaceComponent>,
}

impl From<Vec<SurfaceComponent>> for SurfaceClass {
    fn from(components: Vec<SurfaceComponent>) -> Self {
        Self::new(components)
    }
}

impl From<SurfaceClass> for Vec<SurfaceComponent> {
    fn from(s: SurfaceClass) -> Self {
        s.components
    }
}

impl FromIterator<SurfaceComponent> for SurfaceClass {
    fn from_iter<I: IntoIterator<Item = SurfaceComponent>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// Attaching a single 1-handle to a level surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OneHandleMove {
    /// Both feet on the same component: genus goes up by one.
    Tube(usize),
    /// Feet on two different components: they merge.
    Join(usize, usize),
}

/// Attaching a single 2-handle, i.e. compressing the level surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TwoHandleMove {
    CompressNonSep(usize),
    /// The component `(g, b)` splits into `(g1, b1)` and `(g - g1, b - b1)`.
    CompressSep {
        index: usize,
        g1: u32,
        b1: u32,
    },
}

/// Capping a sphere component with a 3-handle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThreeHandleMove {
    pub cap_sphere: usize,
}

impl TwoHandleMove {
    pub fn index(&self) -> usize {
        match *self {
            TwoHandleMove::CompressNonSep(i) => i,
            TwoHandleMove::CompressSep { index, .. } => index,
        }
    }

    /// The pieces a single component turns into under this compression.
    pub fn split(&self, c: SurfaceComponent) -> Result<Vec<SurfaceComponent>, SurfaceError> {
        match *self {
            TwoHandleMove::CompressNonSep(_) => {
                if c.genus == 0 {
                    return Err(SurfaceError::NonSeparatingOnSphere);
                }
                Ok(vec![SurfaceComponent::new(c.genus - 1, c.boundary)])
            }
            TwoHandleMove::CompressSep { g1, b1, .. } => {
                if g1 > c.genus || b1 > c.boundary {
                    return Err(SurfaceError::SplitOutOfRange {
                        g1,
                        b1,
                        genus: c.genus,
                        boundary: c.boundary,
                    });
                }
                Ok(vec![
                    SurfaceComponent::new(g1, b1),
                    SurfaceComponent::new(c.genus - g1, c.boundary - b1),
                ])
            }
        }
    }

    /// Every 2-handle move applicable to `s`. Equal components are
    /// addressed through their first index only, and each unordered
    /// separating split is listed once.
    pub fn all_on(s: &SurfaceClass) -> Vec<TwoHandleMove> {
        let mut out = Vec::new();
        for (index, c) in s.components.iter().enumerate() {
            if index > 0 && s.components[index - 1] == *c {
                continue;
            }
            if c.genus > 0 {
                out.push(TwoHandleMove::CompressNonSep(index));
            }
            for g1 in 0..=c.genus {
                for b1 in 0..=c.boundary {
                    if (g1, b1) <= (c.genus - g1, c.boundary - b1) {
                        out.push(TwoHandleMove::CompressSep { index, g1, b1 });
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for TwoHandleMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwoHandleMove::CompressNonSep(i) => write!(f, "nonsep({i})"),
            TwoHandleMove::CompressSep { index, g1, b1 } => write!(f, "sep({index},{g1},{b1})"),
        }
    }
}

impl FromStr for TwoHandleMove {
    type Err = SurfaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: &str| SurfaceError::Syntax {
            pos: 0,
            msg: msg.to_string(),
        };
        let s = s.trim();
        let (name, rest) = s
            .split_once('(')
            .ok_or_else(|| bad("expected `name(args)`"))?;
        let args = rest.strip_suffix(')').ok_or_else(|| bad("missing `)`"))?;
        let nums = args
            .split(',')
            .map(|a| {
                a.trim()
                    .parse::<u64>()
                    .map_err(|_| bad("expected unsigned integer"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let small = |v: u64| u32::try_from(v).map_err(|_| bad("value too large"));
        match (name, nums.as_slice()) {
            ("nonsep", [i]) => Ok(TwoHandleMove::CompressNonSep(*i as usize)),
            ("sep", [i, g1, b1]) => Ok(TwoHandleMove::CompressSep {
                index: *i as usize,
                g1: small(*g1)?,
                b1: small(*b1)?,
            }),
            _ => Err(bad("unknown move")),
        }
    }
}

impl SurfaceClass {
    pub fn new(mut components: Vec<SurfaceComponent>) -> Self {
        components.sort_unstable();
        Self { components }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn connected(genus: u32, boundary: u32) -> Self {
        Self::new(vec![SurfaceComponent::new(genus, boundary)])
    }

    pub fn components(&self) -> &[SurfaceComponent] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn euler(&self) -> i64 {
        self.components.iter().map(SurfaceComponent::euler).sum()
    }

    pub fn complexity(&self) -> u64 {
        self.components
            .iter()
            .map(SurfaceComponent::complexity)
            .sum()
    }

    pub fn total_genus(&self) -> u32 {
        self.components.iter().map(|c| c.genus).sum()
    }

    pub fn total_boundary(&self) -> u32 {
        self.components.iter().map(|c| c.boundary).sum()
    }

    /// Σ max(0, -χ) over components of the capped surface.
    pub fn thurston_norm(&self) -> u64 {
        self.components
            .iter()
            .map(|c| (2 * c.genus as u64).saturating_sub(2))
            .sum()
    }

    pub fn has_closed_component(&self) -> bool {
        self.components.iter().any(SurfaceComponent::is_closed)
    }

    /// Index of the unique boundary-bearing component, which must carry a
    /// single boundary circle.
    pub fn boundary_component(&self) -> Result<usize, SurfaceError> {
        let bearing: Vec<usize> = (0..self.len())
            .filter(|&i| self.components[i].boundary > 0)
            .collect();
        match bearing.as_slice() {
            [i] if self.components[*i].boundary == 1 => Ok(*i),
            [i] => Err(SurfaceError::BoundaryCircles(self.components[*i].boundary)),
            other => Err(SurfaceError::BoundaryPattern(other.len())),
        }
    }

    fn check_index(&self, index: usize) -> Result<(), SurfaceError> {
        if index >= self.len() {
            Err(SurfaceError::IndexOutOfRange {
                index,
                len: self.len(),
            })
        } else {
            Ok(())
        }
    }

    /// Replace component `index` by `pieces`.
    fn replace(&self, index: usize, pieces: impl IntoIterator<Item = SurfaceComponent>) -> Self {
        let mut comps = self.components.clone();
        comps.remove(index);
        comps.extend(pieces);
        Self::new(comps)
    }

    pub fn apply_one_handle(&self, m: OneHandleMove) -> Result<Self, SurfaceError> {
        match m {
            OneHandleMove::Tube(i) => {
                self.check_index(i)?;
                let c = self.components[i];
                Ok(self.replace(i, [SurfaceComponent::new(c.genus + 1, c.boundary)]))
            }
            OneHandleMove::Join(i, j) => {
                self.check_index(i)?;
                self.check_index(j)?;
                if i == j {
                    return Err(SurfaceError::JoinSameComponent(i));
                }
                let (a, b) = (self.components[i], self.components[j]);
                let mut comps: Vec<_> = self
                    .components
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i && k != j)
                    .map(|(_, c)| *c)
                    .collect();
                comps.push(SurfaceComponent::new(
                    a.genus + b.genus,
                    a.boundary + b.boundary,
                ));
                Ok(Self::new(comps))
            }
        }
    }

    pub fn apply_two_handle(&self, m: TwoHandleMove) -> Result<Self, SurfaceError> {
        self.check_index(m.index())?;
        let pieces = m.split(self.components[m.index()])?;
        Ok(self.replace(m.index(), pieces))
    }

    /// Whether `m` is a non-trivial compression: a non-separating curve on a
    /// positive-genus component, or a separating curve neither of whose
    /// sides caps off to a sphere.
    pub fn is_essential(&self, m: TwoHandleMove) -> Result<bool, SurfaceError> {
        self.check_index(m.index())?;
        let pieces = m.split(self.components[m.index()])?;
        Ok(match m {
            TwoHandleMove::CompressNonSep(_) => true,
            TwoHandleMove::CompressSep { .. } => pieces.iter().all(|p| p.genus >= 1),
        })
    }

    pub fn cap_sphere(&self, i: usize) -> Result<Self, SurfaceError> {
        self.check_index(i)?;
        if self.components[i] != SurfaceComponent::SPHERE {
            return Err(SurfaceError::NotASphere(i));
        }
        Ok(self.replace(i, []))
    }

    pub fn apply_three_handle(&self, m: ThreeHandleMove) -> Result<Self, SurfaceError> {
        self.cap_sphere(m.cap_sphere)
    }

    fn summand_genus(summand: SurfaceComponent) -> Result<u32, SurfaceError> {
        if summand.boundary != 1 {
            return Err(SurfaceError::SummandBoundary(summand.boundary));
        }
        Ok(summand.genus)
    }

    /// `S ♯∂ R`: band the boundary-bearing component of `self` to `summand`.
    pub fn boundary_connected_sum(&self, summand: SurfaceComponent) -> Result<Self, SurfaceError> {
        let extra = Self::summand_genus(summand)?;
        let i = self.boundary_component()?;
        let c = self.components[i];
        Ok(self.replace(i, [SurfaceComponent::new(c.genus + extra, 1)]))
    }

    /// `S ∪∂ R`: glue `summand` onto the boundary circle, closing the surface.
    pub fn boundary_sum_close(&self, summand: SurfaceComponent) -> Result<Self, SurfaceError> {
        let extra = Self::summand_genus(summand)?;
        let i = self.boundary_component()?;
        let c = self.components[i];
        Ok(self.replace(i, [SurfaceComponent::new(c.genus + extra, 0)]))
    }
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for SurfaceClass {
    type Err = SurfaceError;

    /// Whitespace-separated `(g,b)` pairs in any order. A third field is read
    /// as a crosscap count and must be zero.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let mut comps = Vec::new();
        let err = |pos: usize, msg: &str| SurfaceError::Syntax {
            pos,
            msg: msg.to_string(),
        };
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos == bytes.len() {
                break;
            }
            if bytes[pos] != b'(' {
                return Err(err(pos, "expected `(`"));
            }
            let open = pos;
            let close = s[open..]
                .find(')')
                .map(|k| open + k)
                .ok_or_else(|| err(open, "unterminated component"))?;
            let fields = s[open + 1..close]
                .split(',')
                .map(|f| {
                    let f = f.trim();
                    if f.starts_with('-') {
                        return Err(err(open, "negative value"));
                    }
                    f.parse::<u32>()
                        .map_err(|_| err(open, "expected unsigned integer"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            match fields.as_slice() {
                [g, b] | [g, b, 0] => comps.push(SurfaceComponent::new(*g, *b)),
                [_, _, c] => return Err(SurfaceError::NonOrientable(*c)),
                _ => return Err(err(open, "expected `(genus,boundary)`")),
            }
            pos = close + 1;
            if pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                return Err(err(pos, "components must be separated by whitespace"));
            }
        }
        Ok(Self::new(comps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> SurfaceClass {
        text.parse().unwrap()
    }

    #[test]
    fn complexity_examples() {
        assert_eq!(s("(0,1)").complexity(), 0);
        assert_eq!(s("(0,0)").complexity(), 0);
        assert_eq!(s("(1,1)").complexity(), 1);
        assert_eq!(s("(1,0) (2,0)").complexity(), 4);
    }

    #[test]
    fn euler_examples() {
        assert_eq!(s("(1,1)").euler(), -1);
        assert_eq!(s("(0,0)").euler(), 2);
        assert_eq!(s("(2,1) (1,0)").euler(), -3);
    }

    #[test]
    fn one_handle_examples() {
        assert_eq!(
            s("(1,1)").apply_one_handle(OneHandleMove::Tube(0)).unwrap(),
            s("(2,1)")
        );
        assert_eq!(
            s("(1,1) (1,0)")
                .apply_one_handle(OneHandleMove::Join(0, 1))
                .unwrap(),
            s("(2,1)")
        );
        assert_eq!(
            s("(1,1)").apply_one_handle(OneHandleMove::Join(0, 0)),
            Err(SurfaceError::JoinSameComponent(0))
        );
        assert!(matches!(
            s("(1,1)").apply_one_handle(OneHandleMove::Tube(3)),
            Err(SurfaceError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn two_handle_examples() {
        assert_eq!(
            s("(2,1)")
                .apply_two_handle(TwoHandleMove::CompressNonSep(0))
                .unwrap(),
            s("(1,1)")
        );
        let sep = TwoHandleMove::CompressSep {
            index: 0,
            g1: 1,
            b1: 1,
        };
        assert_eq!(s("(2,1)").apply_two_handle(sep).unwrap(), s("(1,1) (1,0)"));
        assert_eq!(
            s("(0,1)").apply_two_handle(TwoHandleMove::CompressNonSep(0)),
            Err(SurfaceError::NonSeparatingOnSphere)
        );
        let wide = TwoHandleMove::CompressSep {
            index: 0,
            g1: 3,
            b1: 0,
        };
        assert!(matches!(
            s("(2,1)").apply_two_handle(wide),
            Err(SurfaceError::SplitOutOfRange { .. })
        ));
    }

    #[test]
    fn essential_examples() {
        let split = |g1, b1| TwoHandleMove::CompressSep { index: 0, g1, b1 };
        assert!(s("(2,1)").is_essential(split(1, 1)).unwrap());
        assert!(!s("(2,1)").is_essential(split(0, 0)).unwrap());
        assert!(s("(1,1)")
            .is_essential(TwoHandleMove::CompressNonSep(0))
            .unwrap());
        assert!(s("(1,1)")
            .is_essential(TwoHandleMove::CompressNonSep(1))
            .is_err());
    }

    #[test]
    fn cap_sphere_examples() {
        assert_eq!(s("(0,0) (1,0)").cap_sphere(0).unwrap(), s("(1,0)"));
        assert_eq!(s("(1,0)").cap_sphere(0), Err(SurfaceError::NotASphere(0)));
        assert_eq!(s("(0,0)").cap_sphere(0).unwrap(), SurfaceClass::empty());
    }

    #[test]
    fn boundary_connected_sum_examples() {
        let r = |g| SurfaceComponent::new(g, 1);
        let out = s("(2,1)").boundary_connected_sum(r(1)).unwrap();
        assert_eq!(out, s("(3,1)"));
        assert_eq!((s("(2,1)").complexity(), out.complexity()), (3, 5));
        let out = s("(1,1) (1,0)").boundary_connected_sum(r(2)).unwrap();
        assert_eq!(out, s("(3,1) (1,0)"));
        assert_eq!(out.complexity(), s("(1,1) (1,0)").complexity() + 4);
        assert_eq!(s("(1,1)").boundary_connected_sum(r(0)).unwrap(), s("(1,1)"));
        assert_eq!(
            s("(1,0)").boundary_connected_sum(r(1)),
            Err(SurfaceError::BoundaryPattern(0))
        );
        assert_eq!(
            s("(1,1)").boundary_connected_sum(SurfaceComponent::new(1, 0)),
            Err(SurfaceError::SummandBoundary(0))
        );
    }

    #[test]
    fn disk_summand_shift_is_one_less() {
        // c(disk) = 0 rather than 2·0 - 1, so the shift is 2g - 1 here.
        let out = s("(0,1)")
            .boundary_connected_sum(SurfaceComponent::new(2, 1))
            .unwrap();
        assert_eq!(out.complexity(), 3);
    }

    #[test]
    fn boundary_sum_close_examples() {
        let r = |g| SurfaceComponent::new(g, 1);
        assert_eq!(s("(1,1)").boundary_sum_close(r(1)).unwrap(), s("(2,0)"));
        let out = s("(2,1) (1,0)").boundary_sum_close(r(1)).unwrap();
        assert_eq!(out, s("(3,0) (1,0)"));
        assert_eq!(
            out.euler(),
            s("(2,1) (1,0)").euler() + SurfaceComponent::new(1, 1).euler()
        );
        assert_eq!(s("(0,1)").boundary_sum_close(r(0)).unwrap(), s("(0,0)"));
    }

    #[test]
    fn literal_parsing() {
        assert_eq!(s("(1,0)   (0,2)\t(1,1)").to_string(), "(0,2) (1,0) (1,1)");
        assert_eq!(s("( 2 , 1 )"), s("(2,1)"));
        assert_eq!(s(""), SurfaceClass::empty());
        assert_eq!(s("(1,1,0)"), s("(1,1)"));
        assert_eq!(
            "(1,1,2)".parse::<SurfaceClass>(),
            Err(SurfaceError::NonOrientable(2))
        );
        for bad in ["(1,-1)", "(1,1", "1,1", "(1)", "(1,1)(2,0)", "(a,b)"] {
            assert!(bad.parse::<SurfaceClass>().is_err(), "{bad}");
        }
    }

    #[test]
    fn move_literals() {
        for m in [
            TwoHandleMove::CompressNonSep(2),
            TwoHandleMove::CompressSep {
                index: 1,
                g1: 0,
                b1: 1,
            },
        ] {
            assert_eq!(m.to_string().parse::<TwoHandleMove>().unwrap(), m);
        }
        assert!("tube(1)".parse::<TwoHandleMove>().is_err());
        assert!("sep(1,2)".parse::<TwoHandleMove>().is_err());
    }

    #[test]
    fn all_moves_skip_duplicates() {
        let moves = TwoHandleMove::all_on(&s("(1,0) (1,0)"));
        assert!(moves.iter().all(|m| m.index() == 0));
        // (1,0) admits nonsep and the single split (0,0) | (1,0).
        assert_eq!(moves.len(), 2);
    }
}
