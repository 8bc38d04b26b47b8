//! Weyl groups as permutations of the root table.
//!
//! Elements are enumerated along a spanning tree of the Cayley graph: the
//! parent of `w ≠ e` is `s_a·w` where `a` is the smallest left descent of
//! `w`.  Reading the tree path from `w` back to the identity spells the
//! lexicographically least reduced word of `w`, so every element is visited
//! exactly once and carries a canonical name.  The walk keeps the action of
//! `w⁻¹` up to date with one pass of transposition swaps per edge, which is
//! what makes full scans of groups the size of E₇ or E₈ tractable.

use crate::error::{Error, Result};
use crate::rootsys::{Family, RootSystem};

/// Anything that acts on the root table by a permutation: group elements,
/// extended type-D elements, or a raw permutation table.
pub trait RootAction {
    /// Image of the root-table entry `r`.
    fn act(&self, r: usize) -> usize;
}

impl RootAction for [usize] {
    fn act(&self, r: usize) -> usize {
        self[r]
    }
}

/// Order of the Weyl group: (n+1)! for A, 2ⁿn! for B and C, 2ⁿ⁻¹n! for D,
/// and the fixed exceptional orders.
pub fn group_order(family: Family, rank: usize) -> Result<u128> {
    family.validate_rank(rank)?;
    let factorial = |n: usize| -> Result<u128> {
        let mut acc: u128 = 1;
        for k in 2..=n as u128 {
            acc = acc
                .checked_mul(k)
                .ok_or_else(|| Error::parameter(format!("{n}! exceeds u128")))?;
        }
        Ok(acc)
    };
    let pow2 = |e: usize| -> Result<u128> {
        1u128
            .checked_shl(e as u32)
            .ok_or_else(|| Error::parameter(format!("2^{e} exceeds u128")))
    };
    match family {
        Family::A => factorial(rank + 1),
        Family::B | Family::C => Ok(pow2(rank)? * factorial(rank)?),
        Family::D => Ok(pow2(rank - 1)? * factorial(rank)?),
        Family::G => Ok(12),
        Family::F => Ok(1152),
        Family::E => Ok(match rank {
            6 => 51840,
            7 => 2903040,
            _ => 696729600,
        }),
    }
}

/// Applies the generator `s_{i+1}` to a Δ-coordinate vector in place: only
/// coordinate `i` changes, by the Cartan pairing against the whole vector.
pub fn reflect(rs: &RootSystem, i: usize, coords: &mut [i64]) {
    let pairing: i64 = rs.cartan()[i]
        .iter()
        .zip(coords.iter())
        .map(|(&c, &x)| c * x)
        .sum();
    coords[i] -= pairing;
}

/// Applies the word `s_{w[0]}·s_{w[1]}⋯` to a root index (rightmost letter
/// first).  Letters are 0-based generator indices.
pub fn apply_word(rs: &RootSystem, word: &[u8], root: usize) -> usize {
    let mut r = root;
    for &i in word.iter().rev() {
        r = rs.reflect_index(i as usize, r);
    }
    r
}

/// A Weyl group element: a word in the generators plus its materialized
/// action on the root table.  Elements produced by the enumerator carry
/// their lexicographically least reduced word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    word: Vec<u8>,
    action: Vec<usize>,
}

impl WeylElement {
    pub fn identity(rs: &RootSystem) -> Self {
        WeylElement {
            word: Vec::new(),
            action: (0..rs.root_count()).collect(),
        }
    }

    /// Builds an element from an arbitrary word (not necessarily reduced);
    /// the word is kept as given.  Errors on out-of-range letters.
    pub fn from_word(rs: &RootSystem, word: &[u8]) -> Result<Self> {
        if let Some(&bad) = word.iter().find(|&&i| i as usize >= rs.rank()) {
            return Err(Error::parameter(format!(
                "word letter {} is out of range for rank {}",
                bad as usize + 1,
                rs.rank()
            )));
        }
        let action = (0..rs.root_count())
            .map(|r| apply_word(rs, word, r))
            .collect();
        Ok(WeylElement {
            word: word.to_vec(),
            action,
        })
    }

    /// Assembles an element from a word and its already-computed action.
    pub(crate) fn from_parts(word: Vec<u8>, action: Vec<usize>) -> Self {
        WeylElement { word, action }
    }

    /// 0-based generator letters.
    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.action.iter().enumerate().all(|(r, &img)| r == img)
    }

    pub fn action(&self) -> &[usize] {
        &self.action
    }
}

impl RootAction for WeylElement {
    fn act(&self, r: usize) -> usize {
        self.action[r]
    }
}

/// Cursor into the canonical spanning tree of the Weyl group.
///
/// The cursor sits at an element `w`; `descend(i)` moves to the child
/// `s_i·w` (valid when `is_child_letter(i)`), `ascend` moves back.  The tree
/// path is the canonical word of `w` reversed.  Only the action of `w⁻¹` is
/// carried, updated in O(roots) per edge.
#[derive(Clone)]
pub struct WordTree<'a> {
    rs: &'a RootSystem,
    /// Action of `w⁻¹` on the root table.
    inv: Vec<usize>,
    /// Tree-path letters from the identity down to `w`.
    path: Vec<u8>,
}

impl<'a> WordTree<'a> {
    pub fn new(rs: &'a RootSystem) -> Self {
        WordTree {
            rs,
            inv: (0..rs.root_count()).collect(),
            path: Vec::new(),
        }
    }

    pub fn rs(&self) -> &'a RootSystem {
        self.rs
    }

    /// Current length ℓ(w).
    pub fn depth(&self) -> usize {
        self.path.len()
    }

    /// Tree-path letters (0-based); the canonical word reversed.
    pub fn path(&self) -> &[u8] {
        &self.path
    }

    /// The lexicographically least reduced word of the current element.
    pub fn canonical_word(&self) -> Vec<u8> {
        self.path.iter().rev().copied().collect()
    }

    /// Whether `s_i·w` is a tree child of the current `w`: the product must
    /// go up in length (`w⁻¹(γ_{i+1}) > 0`) and `i` must be its smallest
    /// left descent (`w⁻¹(s_i γ_{t+1}) > 0` for all `t < i`).
    pub fn is_child_letter(&self, i: usize) -> bool {
        let rs = self.rs;
        if !rs.is_positive(self.inv[rs.simple_index(i)]) {
            return false;
        }
        (0..i).all(|t| {
            let moved = rs.reflect_index(i, rs.simple_index(t));
            rs.is_positive(self.inv[moved])
        })
    }

    /// Moves to the child `s_i·w`; the inverse action picks up `s_i` on the
    /// right, which is one pass of transposition swaps.
    pub fn descend(&mut self, i: usize) {
        debug_assert!(self.is_child_letter(i));
        for &(a, b) in self.rs.full_swaps(i) {
            self.inv.swap(a, b);
        }
        self.path.push(i as u8);
    }

    /// Moves back to the parent; returns the letter that was undone.
    pub fn ascend(&mut self) -> usize {
        let i = self.path.pop().expect("ascend called at the identity") as usize;
        for &(a, b) in self.rs.full_swaps(i) {
            self.inv.swap(a, b);
        }
        i
    }

    /// Action of `w⁻¹` on the root table.
    pub fn inverse_action(&self) -> &[usize] {
        &self.inv
    }

    /// Action of `w`, materialized by inverting.
    pub fn forward_action(&self) -> Vec<usize> {
        let mut fwd = vec![0usize; self.inv.len()];
        for (r, &img) in self.inv.iter().enumerate() {
            fwd[img] = r;
        }
        fwd
    }

    /// Snapshot of the current element.
    pub fn element(&self) -> WeylElement {
        WeylElement {
            word: self.canonical_word(),
            action: self.forward_action(),
        }
    }
}

/// Streams every element of the Weyl group exactly once, identity first,
/// in depth-first order of the canonical spanning tree.
pub fn enumerate_weyl(rs: &RootSystem) -> WeylIter<'_> {
    WeylIter {
        tree: WordTree::new(rs),
        next_letter: Vec::new(),
        started: false,
        done: false,
    }
}

pub struct WeylIter<'a> {
    tree: WordTree<'a>,
    /// Next candidate child letter at each depth of the current path.
    next_letter: Vec<usize>,
    started: bool,
    done: bool,
}

impl Iterator for WeylIter<'_> {
    type Item = WeylElement;

    fn next(&mut self) -> Option<WeylElement> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.next_letter.push(0);
            return Some(self.tree.element());
        }
        let rank = self.tree.rs().rank();
        loop {
            let top = match self.next_letter.last_mut() {
                Some(t) => t,
                None => {
                    self.done = true;
                    return None;
                }
            };
            let found = (*top..rank).find(|&i| self.tree.is_child_letter(i));
            match found {
                Some(i) => {
                    *top = i + 1;
                    self.tree.descend(i);
                    self.next_letter.push(0);
                    return Some(self.tree.element());
                }
                None => {
                    self.next_letter.pop();
                    if self.next_letter.is_empty() {
                        self.done = true;
                        return None;
                    }
                    self.tree.ascend();
                }
            }
        }
    }
}

/// The type-D diagram involution τ (sign flip of the last ambient
/// coordinate) as a root-table permutation.  It preserves positivity and
/// swaps the two fork simple roots γ_{n−1}, γ_n.
pub fn outer_twist(rs: &RootSystem) -> Result<Vec<usize>> {
    if rs.family() != Family::D {
        return Err(Error::unsupported(format!(
            "outer twist is a type-D notion, not {}",
            rs.family()
        )));
    }
    let n = rs.rank();
    rs.roots()
        .iter()
        .map(|root| {
            let mut coords = root.coords().to_vec();
            coords.swap(n - 2, n - 1);
            rs.index_of_coords(&coords).ok_or_else(|| {
                Error::mismatch("outer twist left the root table".to_string())
            })
        })
        .collect()
}

/// An element of the extended type-D group `W ⊔ τW`: a base element `w`
/// plus a flag.  The action is `τ∘w` when twisted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedElementD {
    word: Vec<u8>,
    twisted: bool,
    action: Vec<usize>,
}

impl ExtendedElementD {
    /// Canonical word of the base element `w`.
    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn twisted(&self) -> bool {
        self.twisted
    }

    pub fn action(&self) -> &[usize] {
        &self.action
    }
}

impl RootAction for ExtendedElementD {
    fn act(&self, r: usize) -> usize {
        self.action[r]
    }
}

/// Streams all 2ⁿ·n! elements of the extended type-D group: each `w` is
/// yielded plain and then composed with the outer twist.
pub fn enumerate_extended_d(
    rs: &RootSystem,
) -> Result<impl Iterator<Item = ExtendedElementD> + '_> {
    let tau = outer_twist(rs)?;
    Ok(enumerate_weyl(rs).flat_map(move |el| {
        let twisted_action: Vec<usize> = el.action().iter().map(|&r| tau[r]).collect();
        let plain = ExtendedElementD {
            word: el.word().to_vec(),
            twisted: false,
            action: el.action().to_vec(),
        };
        let twisted = ExtendedElementD {
            word: el.word().to_vec(),
            twisted: true,
            action: twisted_action,
        };
        [plain, twisted].into_iter()
    }))
}
