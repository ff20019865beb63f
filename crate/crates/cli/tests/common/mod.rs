//! Seeded generators shared by the integration suites.

#![allow(dead_code)]

use circwidth::{
    CircularDecomposition, Mode, OneHandleMove, SurfaceClass, SurfaceComponent, TwoHandleMove,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub struct Shape {
    pub max_stages: usize,
    pub max_genus: u32,
    /// Whether the first thin surface may carry a closed component.
    pub closed_pieces: bool,
}

fn one_handles(rng: &mut TestRng, s: &SurfaceClass, max_genus: u32) -> SurfaceClass {
    let mut s = s.clone();
    for _ in 0..rng.gen_range(0..=3) {
        let (i, j) = (rng.gen_range(0..s.len()), rng.gen_range(0..s.len()));
        let m = if i == j {
            OneHandleMove::Tube(i)
        } else {
            OneHandleMove::Join(i, j)
        };
        let t = s.apply_one_handle(m).expect("in range");
        if t.total_genus() <= max_genus {
            s = t;
        }
    }
    s
}

fn two_handles(rng: &mut TestRng, s: &SurfaceClass) -> SurfaceClass {
    let mut s = s.clone();
    for _ in 0..rng.gen_range(0..=3) {
        let m = *TwoHandleMove::all_on(&s).choose(rng).expect("moves");
        let t = s.apply_two_handle(m).expect("applicable");
        if t.boundary_component().is_ok() {
            s = t;
        }
    }
    s
}

/// A random valid knot-exterior decomposition with a connected base unless
/// `closed_pieces` is set. `k = 0` (the fibered form) is included.
pub fn decomposition(rng: &mut TestRng, shape: &Shape) -> CircularDecomposition {
    loop {
        let g0 = rng.gen_range(0..=shape.max_genus.min(3));
        let mut first = vec![SurfaceComponent::new(g0, 1)];
        if shape.closed_pieces && rng.gen_bool(0.4) && g0 < shape.max_genus {
            first.push(SurfaceComponent::new(rng.gen_range(0..=1), 0));
        }
        let first = SurfaceClass::new(first);
        let k = rng.gen_range(0..=shape.max_stages);
        if k == 0 {
            if first.len() == 1 {
                return CircularDecomposition::fibered(Mode::Exterior, first);
            }
            continue;
        }
        let (mut thin, mut thick) = (vec![first.clone()], Vec::new());
        for stage in 0..k {
            let s = one_handles(rng, &thin[stage], shape.max_genus);
            if stage + 1 == k {
                let g = s.total_genus().max(first.total_genus());
                let g = (g + rng.gen_range(0..=1)).min(shape.max_genus.max(g));
                thick.push(SurfaceClass::connected(g, 1));
                break;
            }
            let f = two_handles(rng, &s);
            thick.push(s);
            thin.push(f);
        }
        let d = CircularDecomposition::new(Mode::Exterior, thin, thick).expect("shape");
        if d.is_valid() {
            let r = rng.gen_range(0..d.k());
            return d.rotated(r);
        }
    }
}
