//! Reduction of classical (and quasi-minuscule G₂) ζ computations to type A.
//!
//! A linear map `f` from a type-A root lattice onto the target lattice, with
//! a matching embedding `φ` of the target's (possibly extended) Weyl group
//! into the type-A symmetric group, lets every target ζ value be recomputed
//! from source-side data alone: the fiber-weighted score identity expresses
//! `ζ_S(w)` through `|φ(w)·r|` over the fibers of the weight classes, and —
//! when every fiber has the same size — a per-coordinate identity recovers
//! `ζ_S(w)_γ` from `ζ_R(φ(w))` with a correction over the roots the fibers
//! miss.  This module builds the standard B/C/D maps, the 7-dimensional G₂
//! instance, and checks all the defining properties and both identities.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lift::{action_of_a_perm, canonical_word_of_action, position_perm_of};
use crate::rootsys::{build_root_system, Family, RootSystem};
use crate::weights::{weight_classes, WeightClasses, WeightFunction};
use crate::weyl::{enumerate_extended_d, enumerate_weyl, group_order, outer_twist, RootAction,
    WeylElement};
use crate::zeta::zeta_of;

/// Above this target-group order, compatibility is checked on a fixed-seed
/// random sample instead of exhaustively.
const EXHAUSTIVE_LIMIT: u128 = 10_000;
/// Sample size for the randomized compatibility check.
const SAMPLE_SIZE: usize = 1_000;

/// A linear map between root lattices together with its root fibers.
///
/// The matrix sends source ambient coordinates to the target's ambient
/// presentation (for G₂: the sum-zero plane of ℝ³ with simple roots
/// `α = e₁−e₂`, `β = −e₁+2e₂−e₃`).  `fiber_table[s]` lists exactly the
/// source roots mapping onto target root `s`.
pub struct ReductionMap {
    source: RootSystem,
    target: RootSystem,
    matrix: Vec<Vec<i64>>,
    fiber_table: Vec<Vec<usize>>,
    multiplicities: Vec<usize>,
}

impl ReductionMap {
    /// The type-A source system.
    pub fn source(&self) -> &RootSystem {
        &self.source
    }

    /// The target system.
    pub fn target(&self) -> &RootSystem {
        &self.target
    }

    /// Image of a source ambient vector in target ambient coordinates.
    pub fn apply(&self, v: &[i16]) -> Vec<i64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(v).map(|(&m, &x)| m * x as i64).sum())
            .collect()
    }

    fn apply_i64(&self, v: &[i64]) -> Vec<i64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(v).map(|(&m, &x)| m * x).sum())
            .collect()
    }

    /// The source roots mapping onto target root `s` (a root-table index).
    pub fn fiber(&self, s: usize) -> Result<&[usize]> {
        self.fiber_table
            .get(s)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::parameter(format!("{s} is not a target root index")))
    }

    /// Fiber sizes `m_s`, indexed like the target root table.
    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// Simple-root coordinates (in the target) of a target ambient vector,
    /// or `None` when the vector is outside the target root lattice.
    pub fn target_delta_of(&self, v: &[i64]) -> Option<Vec<i64>> {
        delta_of_target_ambient(self.target.family(), self.target.rank(), v)
    }
}

/// The Weyl embedding `φ` attached to a reduction: signed permutations act
/// as permutations of the letter positions `1,…,n(,0),−n,…,−1`; the G₂
/// generators act by the fixed position involutions of the 7-letter string.
pub struct WeylEmbedding {
    source: RootSystem,
    target: RootSystem,
    g2_generators: Option<[Vec<usize>; 2]>,
}

impl WeylEmbedding {
    /// `φ(w)`: the source-side element matching a target-side automorphism
    /// (plain Weyl elements everywhere; extended elements too for type D).
    pub fn embed<A>(&self, w: &A) -> Result<WeylElement>
    where
        A: RootAction + ?Sized,
    {
        let pi = match self.target.family() {
            Family::G => {
                let generators = self
                    .g2_generators
                    .as_ref()
                    .expect("G₂ embeddings carry their generator images");
                let action: Vec<usize> =
                    (0..self.target.root_count()).map(|r| w.act(r)).collect();
                let word = canonical_word_of_action(&self.target, &action)?;
                let mut pi: Vec<usize> = (0..generators[0].len()).collect();
                for &letter in &word {
                    let gen = &generators[letter as usize];
                    pi = gen.iter().map(|&x| pi[x]).collect();
                }
                pi
            }
            _ => position_perm_of(&self.target, w)?,
        };
        let action = action_of_a_perm(&self.source, &pi)?;
        let word = canonical_word_of_action(&self.source, &action)?;
        Ok(WeylElement::from_parts(word, action))
    }
}

/// Builds the standard reduction for B/C/D at the given rank, or the fixed
/// A₆ → G₂ quasi-minuscule instance (rank must be 2).
pub fn build_reduction(family: Family, rank: usize) -> Result<(ReductionMap, WeylEmbedding)> {
    family.validate_rank(rank)?;
    let (source_rank, matrix) = match family {
        Family::B => {
            // Letters 1..n ↦ e_i, the middle letter ↦ 0, letters past the
            // middle ↦ −e (mirrored).
            let n = rank;
            let mut matrix = vec![vec![0i64; 2 * n + 1]; n];
            for c in 0..2 * n + 1 {
                if c < n {
                    matrix[c][c] = 1;
                } else if c > n {
                    matrix[2 * n - c][c] = -1;
                }
            }
            (2 * n, matrix)
        }
        Family::C | Family::D => {
            let n = rank;
            let mut matrix = vec![vec![0i64; 2 * n]; n];
            for c in 0..2 * n {
                if c < n {
                    matrix[c][c] = 1;
                } else {
                    matrix[2 * n - 1 - c][c] = -1;
                }
            }
            (2 * n - 1, matrix)
        }
        Family::G => {
            // Images of e₁..e₇: the weights of the 7-dimensional
            // quasi-minuscule representation, written in ℝ³.
            let columns: [[i64; 3]; 7] = [
                [1, 0, -1],
                [0, 1, -1],
                [1, -1, 0],
                [0, 0, 0],
                [-1, 1, 0],
                [0, -1, 1],
                [-1, 0, 1],
            ];
            let matrix = (0..3)
                .map(|row| columns.iter().map(|col| col[row]).collect())
                .collect();
            (6, matrix)
        }
        other => {
            return Err(Error::unsupported(format!(
                "no type-A reduction is instantiated for family {other}"
            )))
        }
    };
    let source = build_root_system(Family::A, source_rank)?;
    let target = build_root_system(family, rank)?;

    let matrix_ref = &matrix;
    let mut fiber_table = vec![Vec::new(); target.root_count()];
    for r in source.roots() {
        let ambient = source.ambient(r.index())?;
        let image: Vec<i64> = matrix_ref
            .iter()
            .map(|row| row.iter().zip(ambient).map(|(&m, &x)| m * x as i64).sum())
            .collect();
        let Some(delta) = delta_of_target_ambient(family, rank, &image) else {
            continue;
        };
        let coords: Vec<i16> = delta.iter().map(|&c| c as i16).collect();
        if let Some(s) = target.index_of_coords(&coords) {
            fiber_table[s].push(r.index());
        }
    }
    let multiplicities = fiber_table.iter().map(Vec::len).collect();

    let map = ReductionMap {
        source,
        target,
        matrix,
        fiber_table,
        multiplicities,
    };
    let g2_generators = (family == Family::G).then(|| {
        [
            // s_α swaps letters (1 2), (3 5), (6 7); s_β swaps (2 3), (5 6).
            vec![1, 0, 4, 3, 2, 6, 5],
            vec![0, 2, 1, 3, 5, 4, 6],
        ]
    });
    let embedding = WeylEmbedding {
        source: build_root_system(Family::A, source_rank)?,
        target: build_root_system(family, rank)?,
        g2_generators,
    };
    Ok((map, embedding))
}

/// Target-ambient → simple-root coordinates, `None` outside the lattice.
fn delta_of_target_ambient(family: Family, rank: usize, v: &[i64]) -> Option<Vec<i64>> {
    let total: i64 = v.iter().sum();
    match family {
        Family::B => {
            // γ_i = e_i − e_{i+1} and γ_n = e_n, so c_i is a prefix sum.
            let mut coords = Vec::with_capacity(rank);
            let mut acc = 0;
            for &x in v {
                acc += x;
                coords.push(acc);
            }
            Some(coords)
        }
        Family::C => {
            // The long tail γ_n = 2e_n halves the full sum.
            if total % 2 != 0 {
                return None;
            }
            let mut coords = Vec::with_capacity(rank);
            let mut acc = 0;
            for &x in &v[..rank - 1] {
                acc += x;
                coords.push(acc);
            }
            coords.push(total / 2);
            Some(coords)
        }
        Family::D => {
            // The fork pair γ_{n−1} = e_{n−1}−e_n, γ_n = e_{n−1}+e_n.
            if total % 2 != 0 {
                return None;
            }
            let mut coords = Vec::with_capacity(rank);
            let mut acc = 0;
            for &x in &v[..rank - 2] {
                acc += x;
                coords.push(acc);
            }
            coords.push(total / 2 - v[rank - 1]);
            coords.push(total / 2);
            Some(coords)
        }
        Family::G => {
            // cα + dβ with α = e₁−e₂, β = −e₁+2e₂−e₃ forces d = −v₃ and
            // c = v₁−v₃; membership in the sum-zero plane is the only gate.
            if total != 0 {
                return None;
            }
            Some(vec![v[0] - v[2], -v[2]])
        }
        _ => None,
    }
}

/// The three defining properties of a reduction.
pub struct ReductionProperties {
    /// Fibers over positive roots contain only positive roots.
    pub positive: bool,
    /// Every target root has a nonempty fiber.
    pub root_surjective: bool,
    /// `f⁻¹(w·s) = φ(w)·f⁻¹(s)` for all roots `s` and group elements `w`.
    pub compatible: bool,
}

/// Checks positivity and root-surjectivity exhaustively, and compatibility
/// exhaustively up to group order 10⁴ (the extended group for type D) or on
/// a fixed-seed random sample beyond that.
pub fn check_reduction_properties(
    map: &ReductionMap,
    embedding: &WeylEmbedding,
) -> Result<ReductionProperties> {
    let positive = map
        .target
        .roots()
        .iter()
        .filter(|s| s.is_positive())
        .all(|s| {
            map.fiber_table[s.index()]
                .iter()
                .all(|&r| map.source.is_positive(r))
        });
    let root_surjective = map.fiber_table.iter().all(|fiber| !fiber.is_empty());
    let compatible = check_compatibility(map, embedding)?;
    Ok(ReductionProperties {
        positive,
        root_surjective,
        compatible,
    })
}

fn compatible_for<A>(map: &ReductionMap, embedding: &WeylEmbedding, w: &A) -> Result<bool>
where
    A: RootAction + ?Sized,
{
    let phi_w = embedding.embed(w)?;
    for s in 0..map.target.root_count() {
        let moved: HashSet<usize> = map.fiber_table[w.act(s)].iter().copied().collect();
        let pushed: HashSet<usize> = map.fiber_table[s]
            .iter()
            .map(|&r| phi_w.act(r))
            .collect();
        if moved != pushed {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_compatibility(map: &ReductionMap, embedding: &WeylEmbedding) -> Result<bool> {
    let target = &map.target;
    let extended = target.family() == Family::D;
    let order = group_order(target.family(), target.rank())? * if extended { 2 } else { 1 };
    if order <= EXHAUSTIVE_LIMIT {
        if extended {
            for el in enumerate_extended_d(target)? {
                if !compatible_for(map, embedding, &el)? {
                    return Ok(false);
                }
            }
        } else {
            for el in enumerate_weyl(target) {
                if !compatible_for(map, embedding, &el)? {
                    return Ok(false);
                }
            }
        }
        return Ok(true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x726f_6f74);
    let tau = extended.then(|| outer_twist(target)).transpose()?;
    let max_len = 2 * target.positive_count();
    for _ in 0..SAMPLE_SIZE {
        let len = rng.gen_range(0..=max_len);
        let word: Vec<u8> = (0..len)
            .map(|_| rng.gen_range(0..target.rank()) as u8)
            .collect();
        let el = WeylElement::from_word(target, &word)?;
        let ok = match &tau {
            Some(tau) if rng.gen_bool(0.5) => {
                let action: Vec<usize> =
                    (0..target.root_count()).map(|r| tau[el.act(r)]).collect();
                compatible_for(map, embedding, &action[..])?
            }
            _ => compatible_for(map, embedding, &el)?,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Verifies the score identity at one target element: `ζ_S(w)` equals the
/// fiber-weighted source-side sum pushed through `f`, and — when all fibers
/// have one common size — the per-coordinate identity with the `U₂`/`U₀`
/// corrections as well.  Arithmetic runs on integers scaled by the lcm of
/// the fiber sizes; any failed exact division is an identity failure.
pub fn score_identity<A>(
    map: &ReductionMap,
    embedding: &WeylEmbedding,
    rho: &WeightFunction,
    w: &A,
) -> Result<bool>
where
    A: RootAction + ?Sized,
{
    let target = &map.target;
    let source = &map.source;
    let classes = weight_classes(target, rho)?;
    let expected = zeta_of(target, &classes, w);
    let phi_w = embedding.embed(w)?;

    let scale = map
        .multiplicities
        .iter()
        .filter(|&&m| m > 0)
        .fold(1i64, |acc, &m| lcm(acc, m as i64));
    let mut acc = vec![0i64; source.ambient_dim()?];
    for (sign, class) in [(1i64, classes.v2()), (-1, classes.v0())] {
        for &s in class {
            let m = map.multiplicities[target.abs_index(w.act(s))];
            if m == 0 {
                return Ok(false);
            }
            let weight = sign * (scale / m as i64);
            for &r in &map.fiber_table[s] {
                let image = source.ambient(source.abs_index(phi_w.act(r)))?;
                for (slot, &x) in acc.iter_mut().zip(image) {
                    *slot += weight * x as i64;
                }
            }
        }
    }
    let pushed = map.apply_i64(&acc);
    if pushed.iter().any(|&x| x % scale != 0) {
        return Ok(false);
    }
    let unscaled: Vec<i64> = pushed.iter().map(|&x| x / scale).collect();
    let Some(delta) = map.target_delta_of(&unscaled) else {
        return Ok(false);
    };
    let score_holds = delta == expected;

    let m = map.multiplicities.first().copied().unwrap_or(0);
    if m == 0 || map.multiplicities.iter().any(|&other| other != m) {
        return Ok(score_holds);
    }
    Ok(score_holds && coefficient_identity(map, rho, w, &phi_w, &classes, &expected, m as i64)?)
}

/// The constant-multiplicity per-coordinate identity:
/// `m·ζ_S(w)_γ = Σ_δ f(δ)_γ·(ζ_R(φ(w))_δ − correction_δ)`, with the
/// correction summing `±|φ(w)·r|_δ` over the weight-2/weight-0 source roots
/// that lie in no fiber of the corresponding target class.
fn coefficient_identity<A>(
    map: &ReductionMap,
    rho: &WeightFunction,
    w: &A,
    phi_w: &WeylElement,
    classes: &WeightClasses,
    expected: &[i64],
    m: i64,
) -> Result<bool>
where
    A: RootAction + ?Sized,
{
    let _ = w;
    let source = &map.source;
    let target = &map.target;
    let source_rank = source.rank();

    let mut fdelta = Vec::with_capacity(source_rank);
    for i in 0..source_rank {
        let image = map.apply(source.ambient(source.simple_index(i))?);
        match map.target_delta_of(&image) {
            Some(delta) => fdelta.push(delta),
            None => return Ok(false),
        }
    }
    let pullback: Vec<i64> = fdelta
        .iter()
        .map(|delta| {
            delta
                .iter()
                .zip(rho.values())
                .map(|(&c, &v)| c * v as i64)
                .sum()
        })
        .collect();
    let source_classes = WeightClasses::from_values(source, &pullback)?;
    let zeta_source = zeta_of(source, &source_classes, phi_w);

    let mut correction = vec![0i64; source_rank];
    for (sign, class, target_class) in [
        (1i64, source_classes.v2(), classes.v2()),
        (-1, source_classes.v0(), classes.v0()),
    ] {
        let covered: HashSet<usize> = target_class
            .iter()
            .flat_map(|&s| map.fiber_table[s].iter().copied())
            .collect();
        for &r in class {
            if covered.contains(&r) {
                continue;
            }
            let coords = source.root(source.abs_index(phi_w.act(r))).coords();
            for (slot, &c) in correction.iter_mut().zip(coords) {
                *slot += sign * c as i64;
            }
        }
    }

    Ok((0..target.rank()).all(|g| {
        let numerator: i64 = (0..source_rank)
            .map(|d| fdelta[d][g] * (zeta_source[d] - correction[d]))
            .sum();
        numerator % m == 0 && numerator / m == expected[g]
    }))
}

fn lcm(a: i64, b: i64) -> i64 {
    fn gcd(mut a: i64, mut b: i64) -> i64 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::all_weightings;
    use proptest::prelude::*;

    fn ambient_set(map: &ReductionMap, fiber: &[usize]) -> HashSet<Vec<i16>> {
        fiber
            .iter()
            .map(|&r| map.source.ambient(r).unwrap().to_vec())
            .collect()
    }

    fn unit_diff(dim: usize, i: usize, j: usize) -> Vec<i16> {
        let mut v = vec![0i16; dim];
        v[i - 1] = 1;
        v[j - 1] = -1;
        v
    }

    fn target_index(map: &ReductionMap, coords: &[i16]) -> usize {
        map.target.index_of_coords(coords).unwrap()
    }

    #[test]
    fn b2_fibers_match_the_displayed_preimages() {
        let (map, _) = build_reduction(Family::B, 2).unwrap();
        // γ₁ = e₁−e₂ pulls back to {e₁−e₂, e₄−e₅}.
        let s = target_index(&map, &[1, 0]);
        assert_eq!(
            ambient_set(&map, map.fiber(s).unwrap()),
            HashSet::from([unit_diff(5, 1, 2), unit_diff(5, 4, 5)])
        );
        // The short root e₂ = γ₂ pulls back through the middle letter.
        let s = target_index(&map, &[0, 1]);
        assert_eq!(
            ambient_set(&map, map.fiber(s).unwrap()),
            HashSet::from([unit_diff(5, 2, 3), unit_diff(5, 3, 4)])
        );
        // e₁+e₂ = γ₁+2γ₂ pulls back symmetrically around the middle.
        let s = target_index(&map, &[1, 2]);
        assert_eq!(
            ambient_set(&map, map.fiber(s).unwrap()),
            HashSet::from([unit_diff(5, 1, 4), unit_diff(5, 2, 5)])
        );
        assert!(map.multiplicities().iter().all(|&m| m == 2));
    }

    #[test]
    fn c_fibers_have_size_one_exactly_on_long_roots() {
        let (map, _) = build_reduction(Family::C, 2).unwrap();
        // 2e₂ = γ₂ has the singleton fiber {e₂−e₃}.
        let s = target_index(&map, &[0, 1]);
        assert_eq!(
            ambient_set(&map, map.fiber(s).unwrap()),
            HashSet::from([unit_diff(4, 2, 3)])
        );
        for root in map.target().roots() {
            let long = root.coords().iter().map(|&c| c.unsigned_abs()).max() == Some(2)
                || root.coords() == [0, 1]
                || root.coords() == [0, -1];
            let expect = if long { 1 } else { 2 };
            assert_eq!(map.multiplicities()[root.index()], expect, "{root:?}");
        }
    }

    #[test]
    fn g2_fiber_sizes_follow_the_quasi_minuscule_weights() {
        let (map, _) = build_reduction(Family::G, 2).unwrap();
        // (c, d) coordinates over α, β against the fiber size.
        for (coords, size) in [
            ([1i16, 0i16], 4usize), // α
            ([0, 1], 2),            // β
            ([1, 1], 4),            // α+β
            ([2, 1], 4),            // 2α+β
            ([3, 1], 2),            // 3α+β
            ([3, 2], 2),            // 3α+2β
        ] {
            let s = target_index(&map, &coords);
            assert_eq!(map.multiplicities()[s], size, "fiber size over {coords:?}");
            let neg = map.target.neg_index(s);
            assert_eq!(map.multiplicities()[neg], size);
        }
        // Source simple roots map onto α at letters 1,3,4,6 and β at 2,5.
        for (i, expect) in [
            (0usize, vec![1i64, 0]),
            (1, vec![0, 1]),
            (2, vec![1, 0]),
            (3, vec![1, 0]),
            (4, vec![0, 1]),
            (5, vec![1, 0]),
        ] {
            let image = map.apply(map.source.ambient(map.source.simple_index(i)).unwrap());
            assert_eq!(map.target_delta_of(&image).unwrap(), expect);
        }
    }

    #[test]
    fn fibers_record_exact_linear_images() {
        for (family, rank) in [(Family::B, 3), (Family::C, 3), (Family::D, 3), (Family::G, 2)] {
            let (map, _) = build_reduction(family, rank).unwrap();
            for root in map.target().roots() {
                for &r in map.fiber(root.index()).unwrap() {
                    let image = map.apply(map.source.ambient(r).unwrap());
                    let delta = map.target_delta_of(&image).unwrap();
                    let coords: Vec<i64> =
                        root.coords().iter().map(|&c| c as i64).collect();
                    assert_eq!(delta, coords);
                }
            }
        }
    }

    #[test]
    fn standard_maps_have_all_three_properties() {
        for (family, ranks) in [
            (Family::B, &[2usize, 3, 4][..]),
            (Family::C, &[2, 3, 4][..]),
            (Family::D, &[3, 4][..]),
            (Family::G, &[2][..]),
        ] {
            for &rank in ranks {
                let (map, embedding) = build_reduction(family, rank).unwrap();
                let props = check_reduction_properties(&map, &embedding).unwrap();
                assert!(props.positive, "{family}{rank} positive");
                assert!(props.root_surjective, "{family}{rank} surjective");
                assert!(props.compatible, "{family}{rank} compatible");
            }
        }
    }

    #[test]
    fn sampled_compatibility_kicks_in_above_the_exhaustive_limit() {
        // |W_{B₆}| = 46080 > 10⁴, so this exercises the random-word path.
        let (map, embedding) = build_reduction(Family::B, 6).unwrap();
        assert!(group_order(Family::B, 6).unwrap() > EXHAUSTIVE_LIMIT);
        let props = check_reduction_properties(&map, &embedding).unwrap();
        assert!(props.positive && props.root_surjective && props.compatible);
    }

    #[test]
    fn corrupting_one_fiber_entry_breaks_positivity() {
        let (mut map, embedding) = build_reduction(Family::B, 2).unwrap();
        let s = target_index(&map, &[1, 0]);
        let r = map.fiber_table[s][0];
        map.fiber_table[s][0] = map.source.neg_index(r);
        let props = check_reduction_properties(&map, &embedding).unwrap();
        assert!(!props.positive);
    }

    #[test]
    fn fiber_of_the_absolute_root_is_the_absolute_fiber() {
        for (family, rank) in [(Family::B, 3), (Family::C, 3), (Family::D, 3), (Family::G, 2)] {
            let (map, _) = build_reduction(family, rank).unwrap();
            for s in 0..map.target().root_count() {
                let of_abs: HashSet<usize> = map
                    .fiber(map.target.abs_index(s))
                    .unwrap()
                    .iter()
                    .copied()
                    .collect();
                let abs_of: HashSet<usize> = map
                    .fiber(s)
                    .unwrap()
                    .iter()
                    .map(|&r| map.source.abs_index(r))
                    .collect();
                assert_eq!(of_abs, abs_of, "{family}{rank} root {s}");
            }
        }
    }

    fn pullback_values(map: &ReductionMap, rho: &WeightFunction) -> Vec<i64> {
        (0..map.source.rank())
            .map(|i| {
                let image = map
                    .apply(map.source.ambient(map.source.simple_index(i)).unwrap());
                map.target_delta_of(&image)
                    .unwrap()
                    .iter()
                    .zip(rho.values())
                    .map(|(&c, &v)| c * v as i64)
                    .sum()
            })
            .collect()
    }

    #[test]
    fn pullback_weightings_and_fiber_classes_behave_as_documented() {
        for (family, rank) in [(Family::B, 3), (Family::C, 3), (Family::D, 3), (Family::G, 2)] {
            let (map, _) = build_reduction(family, rank).unwrap();
            for rho in all_weightings(rank) {
                let values = pullback_values(&map, &rho);
                // Pullbacks stay in {0, 2} except for the unnormalized
                // type-D tail (weight 2 on the fork root γ_{n−1} only).
                let d_unnormalized = family == Family::D
                    && rho.value(rank - 2) > rho.value(rank - 1);
                if d_unnormalized {
                    assert!(values.contains(&-2));
                } else {
                    assert!(values.iter().all(|v| matches!(v, 0 | 2)), "{family} ρ={rho}");
                }
                // Fibers of a weight class land inside the pulled-back class.
                let target_classes = weight_classes(map.target(), &rho).unwrap();
                let source_classes =
                    WeightClasses::from_values(&map.source, &values).unwrap();
                for (class, source_class) in [
                    (target_classes.v2(), source_classes.v2()),
                    (target_classes.v0(), source_classes.v0()),
                ] {
                    let inside: HashSet<usize> = source_class.iter().copied().collect();
                    for &s in class {
                        for &r in map.fiber(s).unwrap() {
                            assert!(inside.contains(&r), "{family} ρ={rho} root {s}");
                        }
                    }
                }
            }
        }
    }

    /// Which source roots no fiber reaches, restricted to a weight class.
    fn missed_class_roots(map: &ReductionMap, class: &[usize], covered: &[usize]) -> Vec<usize> {
        let covered: HashSet<usize> = covered.iter().copied().collect();
        class.iter().copied().filter(|r| !covered.contains(r)).collect()
    }

    #[test]
    fn u_sets_are_empty_for_b_weight2_and_all_of_c_and_symmetric_for_d() {
        for (family, rank) in [(Family::B, 3), (Family::C, 3), (Family::D, 3), (Family::D, 4)] {
            let (map, _) = build_reduction(family, rank).unwrap();
            for rho in all_weightings(rank) {
                let target_classes = weight_classes(map.target(), &rho).unwrap();
                let source_classes =
                    WeightClasses::from_values(&map.source, &pullback_values(&map, &rho))
                        .unwrap();
                for (k, class, source_class) in [
                    (2, target_classes.v2(), source_classes.v2()),
                    (0, target_classes.v0(), source_classes.v0()),
                ] {
                    let covered: Vec<usize> = class
                        .iter()
                        .flat_map(|&s| map.fiber(s).unwrap().iter().copied())
                        .collect();
                    let u = missed_class_roots(&map, source_class, &covered);
                    match family {
                        Family::B if k == 2 => {
                            assert!(u.is_empty(), "B U₂ must be empty, ρ={rho}")
                        }
                        Family::C => assert!(u.is_empty(), "C U_k must be empty, ρ={rho}"),
                        Family::D => {
                            // Exactly the letter-mirror-symmetric roots of
                            // this weight escape the fibers.
                            let dim = map.source.ambient_dim().unwrap();
                            for &r in &u {
                                let v = map.source.ambient(r).unwrap();
                                assert!(
                                    (0..dim).all(|j| v[dim - 1 - j] == -v[j]),
                                    "D U_k contains a non-symmetric root"
                                );
                            }
                            let symmetric_count = source_class
                                .iter()
                                .filter(|&&r| {
                                    let v = map.source.ambient(r).unwrap();
                                    (0..dim).all(|j| v[dim - 1 - j] == -v[j])
                                })
                                .count();
                            assert_eq!(u.len(), symmetric_count);
                        }
                        _ => {}
                    }
                }
            }
        }
    }

    #[test]
    fn embedding_multiplies_generator_pairs() {
        for (family, rank) in [(Family::B, 2), (Family::C, 3), (Family::D, 3), (Family::G, 2)] {
            let (_, embedding) = build_reduction(family, rank).unwrap();
            let target = build_root_system(family, rank).unwrap();
            for i in 0..rank as u8 {
                for j in 0..rank as u8 {
                    let product = WeylElement::from_word(&target, &[i, j]).unwrap();
                    let phi_i = embedding.embed(&WeylElement::from_word(&target, &[i]).unwrap());
                    let phi_j = embedding.embed(&WeylElement::from_word(&target, &[j]).unwrap());
                    let (phi_i, phi_j) = (phi_i.unwrap(), phi_j.unwrap());
                    let composed: Vec<usize> = (0..embedding.source.root_count())
                        .map(|r| phi_i.act(phi_j.act(r)))
                        .collect();
                    let embedded = embedding.embed(&product).unwrap();
                    assert_eq!(embedded.action(), &composed[..], "{family} s{i}·s{j}");
                }
            }
        }
    }

    #[test]
    fn score_identity_holds_exhaustively_at_small_rank() {
        let (map, embedding) = build_reduction(Family::B, 2).unwrap();
        let rs = build_root_system(Family::B, 2).unwrap();
        for rho in all_weightings(2) {
            for el in enumerate_weyl(&rs) {
                assert!(
                    score_identity(&map, &embedding, &rho, &el).unwrap(),
                    "B₂ ρ={rho} w={:?}",
                    el.word()
                );
            }
        }
    }

    #[test]
    fn score_identity_covers_extended_d_elements() {
        let (map, embedding) = build_reduction(Family::D, 3).unwrap();
        let rs = build_root_system(Family::D, 3).unwrap();
        for rho in all_weightings(3) {
            for el in enumerate_extended_d(&rs).unwrap() {
                assert!(
                    score_identity(&map, &embedding, &rho, &el).unwrap(),
                    "D₃ ρ={rho} w={:?} twisted={}",
                    el.word(),
                    el.twisted()
                );
            }
        }
    }

    #[test]
    fn score_identity_holds_for_g2_despite_mixed_fiber_sizes() {
        let (map, embedding) = build_reduction(Family::G, 2).unwrap();
        let rs = build_root_system(Family::G, 2).unwrap();
        for rho in all_weightings(2) {
            for el in enumerate_weyl(&rs) {
                assert!(
                    score_identity(&map, &embedding, &rho, &el).unwrap(),
                    "G₂ ρ={rho} w={:?}",
                    el.word()
                );
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// The score identity is a theorem: it must hold at any element of
        /// any classical target under any weighting.
        #[test]
        fn prop_score_identity_holds_at_random_elements(
            pick in 0usize..7,
            bits in proptest::collection::vec(proptest::bool::ANY, 4),
            letters in proptest::collection::vec(0usize..4, 0..20),
            twist in proptest::bool::ANY,
        ) {
            let (family, rank) = [
                (Family::B, 2), (Family::B, 3), (Family::B, 4),
                (Family::C, 3), (Family::C, 4),
                (Family::D, 3), (Family::D, 4),
            ][pick];
            let (map, embedding) = build_reduction(family, rank).unwrap();
            let rs = build_root_system(family, rank).unwrap();
            let values: Vec<u8> = (0..rank).map(|i| if bits[i] { 2 } else { 0 }).collect();
            let rho = WeightFunction::new(values).unwrap();
            let word: Vec<u8> = letters.iter().map(|&l| (l % rank) as u8).collect();
            let el = WeylElement::from_word(&rs, &word).unwrap();
            let holds = if twist && family == Family::D {
                let tau = outer_twist(&rs).unwrap();
                let action: Vec<usize> =
                    (0..rs.root_count()).map(|r| tau[el.act(r)]).collect();
                score_identity(&map, &embedding, &rho, &action[..]).unwrap()
            } else {
                score_identity(&map, &embedding, &rho, &el).unwrap()
            };
            prop_assert!(holds);
        }
    }
}
