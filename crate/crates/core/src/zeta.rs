//! The ζ statistic: for a Weyl element `w` and weighting classes `V₂`, `V₀`,
//!
//! ```text
//! ζ(w) = Σ_{v ∈ V₂} |w(v)|  −  Σ_{v ∈ V₀} |w(v)|
//! ```
//!
//! written in Δ-coordinates, where `|r|` is `r` made positive.  `V₀` is
//! negation-closed, so each of its positive/negative pairs contributes its
//! positive representative twice.  The weighting is distinguished exactly
//! when every coordinate of `ζ(w)` is strictly positive for every `w`; the
//! scan machinery therefore needs `ζ` both as a one-off evaluation and as a
//! cheap update along Cayley-graph edges.

use crate::rootsys::RootSystem;
use crate::weights::WeightClasses;
use crate::weyl::{reflect, RootAction};

/// Δ-coordinates of a ζ value, one entry per simple root.
pub type ZetaVector = Vec<i64>;

/// Evaluates ζ from scratch by gathering `|w(v)|` over both classes.
pub fn zeta_of<A: RootAction + ?Sized>(
    rs: &RootSystem,
    classes: &WeightClasses,
    action: &A,
) -> ZetaVector {
    let mut zeta = vec![0i64; rs.rank()];
    let mut gather = |indices: &[usize], sign: i64| {
        for &v in indices {
            let img = rs.abs_index(action.act(v));
            for (z, &c) in zeta.iter_mut().zip(rs.root(img).coords()) {
                *z += sign * c as i64;
            }
        }
    };
    gather(classes.v2(), 1);
    gather(classes.v0(), -1);
    zeta
}

pub fn is_strictly_positive(zeta: &[i64]) -> bool {
    zeta.iter().all(|&z| z > 0)
}

/// Index of the first coordinate ≤ 0, if any.
pub fn first_nonpositive(zeta: &[i64]) -> Option<usize> {
    zeta.iter().position(|&z| z <= 0)
}

/// ζ maintained incrementally along generator steps `w ↦ s_i·w`.
///
/// The state is ζ itself plus two count tables over positive roots:
/// `c₂[p] = #{v ∈ V₂ : |w(v)| = p}` and likewise `c₀`.  A step permutes the
/// counts by `p ↦ |s_i(p)|` (transposition swaps) and updates ζ in O(rank):
/// `ζ ← s_i(ζ) + 2(c₂[γ_{i+1}] − c₀[γ_{i+1}])·γ_{i+1}`.  Stepping the same
/// letter twice restores the state, so one instance can follow a whole
/// depth-first walk.
#[derive(Clone)]
pub struct IncrementalZeta {
    zeta: ZetaVector,
    c2: Vec<u32>,
    c0: Vec<u32>,
}

impl IncrementalZeta {
    /// State at the identity.
    pub fn new(rs: &RootSystem, classes: &WeightClasses) -> Self {
        let mut c2 = vec![0u32; rs.root_count()];
        let mut c0 = vec![0u32; rs.root_count()];
        for &v in classes.v2() {
            c2[rs.abs_index(v)] += 1;
        }
        for &v in classes.v0() {
            c0[rs.abs_index(v)] += 1;
        }
        let mut zeta = vec![0i64; rs.rank()];
        for root in rs.roots().iter().filter(|r| r.is_positive()) {
            let mult = c2[root.index()] as i64 - c0[root.index()] as i64;
            if mult != 0 {
                for (z, &c) in zeta.iter_mut().zip(root.coords()) {
                    *z += mult * c as i64;
                }
            }
        }
        IncrementalZeta { zeta, c2, c0 }
    }

    pub fn zeta(&self) -> &[i64] {
        &self.zeta
    }

    /// Moves from `w` to `s_{i+1}·w` (or back — the step is involutive).
    pub fn step(&mut self, rs: &RootSystem, i: usize) {
        // γ_{i+1} is fixed by p ↦ |s_i(p)|, so its counts are the same
        // before and after the swaps; the correction term is unambiguous.
        for &(a, b) in rs.positive_swaps(i) {
            self.c2.swap(a, b);
            self.c0.swap(a, b);
        }
        reflect(rs, i, &mut self.zeta);
        let simple = rs.simple_index(i);
        self.zeta[i] += 2 * (self.c2[simple] as i64 - self.c0[simple] as i64);
    }
}
