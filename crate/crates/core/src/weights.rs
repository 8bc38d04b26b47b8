//! Weight functions on the simple roots and the distinguished test.
//!
//! A weighting assigns 0 or 2 to every simple root and extends additively to
//! all roots.  The two classes that matter are `V₂` (roots of weight exactly
//! 2) and `V₀` (roots of weight exactly 0); a weighting is *distinguished*
//! when `#V₂ = #V₀ + rank`.
//!
//! For the classical families a weighting is equivalent to a composition of
//! the letter string 1…n (1…n+1 in type A): cut after every position whose
//! simple root carries weight 2.  The resulting block sizes, together with a
//! mirrored lift to a type-A composition, drive both the closed-form
//! distinguished test and the per-element closed-form evaluation.

use std::fmt;

use crate::error::{Error, Result};
use crate::rootsys::{Family, RootSystem};

/// A weighting of the simple roots; every value is 0 or 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightFunction {
    values: Vec<u8>,
}

impl WeightFunction {
    pub fn new(values: Vec<u8>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::parameter("weighting must be non-empty".to_string()));
        }
        if let Some(bad) = values.iter().find(|&&v| v != 0 && v != 2) {
            return Err(Error::parameter(format!(
                "weighting values must be 0 or 2, got {bad}"
            )));
        }
        Ok(WeightFunction { values })
    }

    /// The weighting giving 2 to every simple root.
    pub fn regular(rank: usize) -> Self {
        WeightFunction {
            values: vec![2; rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    /// Value on γ_{i+1}.
    pub fn value(&self, i: usize) -> u8 {
        self.values[i]
    }

    /// Additive extension to a Δ-coordinate vector.
    pub fn root_weight(&self, coords: &[i16]) -> i64 {
        coords
            .iter()
            .zip(&self.values)
            .map(|(&c, &v)| c as i64 * v as i64)
            .sum()
    }
}

impl std::str::FromStr for WeightFunction {
    type Err = Error;

    /// Parses a digit string like `"2022"`, one digit per simple root.
    fn from_str(s: &str) -> Result<Self> {
        let values: Vec<u8> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '2' => Ok(2),
                other => Err(Error::parameter(format!(
                    "weighting digits must be 0 or 2, got {other:?}"
                ))),
            })
            .collect::<Result<_>>()?;
        WeightFunction::new(values)
    }
}

impl fmt::Display for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.values {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// All 2^rank weightings in a canonical order: binary counting with γ₁ as
/// the most significant digit, so all-0 comes first and all-2 last.
pub fn all_weightings(rank: usize) -> Vec<WeightFunction> {
    assert!(rank < usize::BITS as usize, "rank too large to enumerate");
    (0..1usize << rank)
        .map(|k| {
            let values = (0..rank)
                .map(|i| if k >> (rank - 1 - i) & 1 == 1 { 2 } else { 0 })
                .collect();
            WeightFunction { values }
        })
        .collect()
}

/// Root-table indices of the weight-2 and weight-0 classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightClasses {
    v2: Vec<usize>,
    v0: Vec<usize>,
}

impl WeightClasses {
    /// Classes of an arbitrary integer weighting of the simple roots.  The
    /// reduction identities need this generality; `weight_classes` covers
    /// the standard {0,2} case.
    pub fn from_values(rs: &RootSystem, values: &[i64]) -> Result<Self> {
        if values.len() != rs.rank() {
            return Err(Error::parameter(format!(
                "weighting has {} values but the system has rank {}",
                values.len(),
                rs.rank()
            )));
        }
        let mut v2 = Vec::new();
        let mut v0 = Vec::new();
        for root in rs.roots() {
            let w: i64 = root
                .coords()
                .iter()
                .zip(values)
                .map(|(&c, &v)| c as i64 * v)
                .sum();
            match w {
                2 => v2.push(root.index()),
                0 => v0.push(root.index()),
                _ => {}
            }
        }
        Ok(WeightClasses { v2, v0 })
    }

    /// Roots of weight exactly 2, ascending table order.
    pub fn v2(&self) -> &[usize] {
        &self.v2
    }

    /// Roots of weight exactly 0, ascending table order.
    pub fn v0(&self) -> &[usize] {
        &self.v0
    }
}

/// The classes `V₂` and `V₀` of a {0,2}-weighting.
pub fn weight_classes(rs: &RootSystem, rho: &WeightFunction) -> Result<WeightClasses> {
    let values: Vec<i64> = rho.values().iter().map(|&v| v as i64).collect();
    WeightClasses::from_values(rs, &values)
}

/// The counting form of the distinguished test: `#V₂ = #V₀ + rank`.
pub fn is_distinguished_cardinality(rs: &RootSystem, rho: &WeightFunction) -> Result<bool> {
    let classes = weight_classes(rs, rho)?;
    Ok(classes.v2.len() == classes.v0.len() + rs.rank())
}

/// Which block-formula case a classical weighting falls into, after the
/// type-D tail normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockCase {
    TypeA,
    TypeB,
    /// Type C with weight 2 on the long simple root γ_n.
    TypeCTailTwo,
    /// Type C with weight 0 on γ_n.
    TypeCTailZero,
    /// Type D with weight 2 on both fork roots γ_{n−1}, γ_n.
    TypeDBothTwo,
    /// Type D with weight 0 on both fork roots.
    TypeDBothZero,
    /// Type D with tail pair (0, 2) after normalization.
    TypeDMixed,
}

/// Block decomposition of a classical weighting.
///
/// `sizes` are the segment lengths N₀, …, N_m of the letter string cut after
/// every weight-2 position; only the final segment may be empty (types B, C,
/// D, exactly when the last simple root carries weight 2).  For type D with
/// tail pair (2, 0) the two fork values are swapped first and
/// `twist_applied` records it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    family: Family,
    rank: usize,
    case: BlockCase,
    sizes: Vec<usize>,
    twist_applied: bool,
}

impl BlockPartition {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn case(&self) -> BlockCase {
        self.case
    }

    /// Segment lengths N₀, …, N_m.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Index of the last block.
    pub fn m(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn twist_applied(&self) -> bool {
        self.twist_applied
    }

    /// Number of letters on the type-A side of the mirrored lift:
    /// n+1 for A, 2n+1 for B, 2n for C and D.
    pub fn lifted_letters(&self) -> usize {
        match self.family {
            Family::A => self.rank + 1,
            Family::B => 2 * self.rank + 1,
            _ => 2 * self.rank,
        }
    }

    /// The mirrored type-A composition N^A the blocks lift to.
    ///
    /// Type A is its own lift.  The other families mirror the leading blocks
    /// around a middle block:
    ///
    /// * B: `(N₀, …, N_{m−1}, 2N_m + 1, N_{m−1}, …, N₀)`
    /// * C, weight 2 on γ_n: `(N₀, …, N_{m−1}, N_{m−1}, …, N₀)`
    /// * C, weight 0 on γ_n: `(N₀, …, N_{m−1}, 2N_m, N_{m−1}, …, N₀)`
    /// * D, tail (2,2): `(N₀, …, N_{m−2}, 2N_{m−1}, N_{m−2}, …, N₀)`
    /// * D, tail (0,0): `(N₀, …, N_{m−1}, 2N_m, N_{m−1}, …, N₀)`
    /// * D, tail (0,2): `(N₀, …, N_{m−1}, N_{m−1}, …, N₀)`
    pub fn lifted(&self) -> Vec<usize> {
        let n = &self.sizes;
        let m = self.m();
        let mirrored = |head: &[usize], middle: Option<usize>| -> Vec<usize> {
            let mut out = head.to_vec();
            if let Some(mid) = middle {
                out.push(mid);
            }
            out.extend(head.iter().rev());
            out
        };
        let lifted = match self.case {
            BlockCase::TypeA => n.clone(),
            BlockCase::TypeB => mirrored(&n[..m], Some(2 * n[m] + 1)),
            BlockCase::TypeCTailTwo | BlockCase::TypeDMixed => mirrored(&n[..m], None),
            BlockCase::TypeCTailZero | BlockCase::TypeDBothZero => {
                mirrored(&n[..m], Some(2 * n[m]))
            }
            BlockCase::TypeDBothTwo => mirrored(&n[..m - 1], Some(2 * n[m - 1])),
        };
        debug_assert_eq!(lifted.iter().sum::<usize>(), self.lifted_letters());
        lifted
    }
}

/// Cuts the letter string of a classical weighting into blocks.
///
/// Errors for exceptional families and on a rank/ρ length mismatch.
pub fn block_partition(family: Family, rank: usize, rho: &WeightFunction) -> Result<BlockPartition> {
    if !family.is_classical() {
        return Err(Error::unsupported(format!(
            "family {family} has no block decomposition"
        )));
    }
    if rho.rank() != rank {
        return Err(Error::parameter(format!(
            "weighting has {} values but rank is {rank}",
            rho.rank()
        )));
    }

    let mut values = rho.values().to_vec();
    let mut twist_applied = false;
    if family == Family::D && values[rank - 2] == 2 && values[rank - 1] == 0 {
        values.swap(rank - 2, rank - 1);
        twist_applied = true;
    }

    let case = match family {
        Family::A => BlockCase::TypeA,
        Family::B => BlockCase::TypeB,
        Family::C => {
            if values[rank - 1] == 2 {
                BlockCase::TypeCTailTwo
            } else {
                BlockCase::TypeCTailZero
            }
        }
        Family::D => match (values[rank - 2], values[rank - 1]) {
            (2, 2) => BlockCase::TypeDBothTwo,
            (0, 0) => BlockCase::TypeDBothZero,
            _ => BlockCase::TypeDMixed,
        },
        _ => unreachable!(),
    };

    // Cut after every weight-2 position.  In type A the letter string has one
    // more letter than the rank, so the final segment is never empty; in the
    // other families a cut after position n leaves an empty final segment.
    let letters = if family == Family::A { rank + 1 } else { rank };
    let mut sizes = Vec::new();
    let mut current = 0usize;
    for pos in 1..=letters {
        current += 1;
        if pos <= rank && values[pos - 1] == 2 {
            sizes.push(current);
            current = 0;
        }
    }
    if family != Family::A || current > 0 {
        sizes.push(current);
    }

    Ok(BlockPartition {
        family,
        rank,
        case,
        sizes,
        twist_applied,
    })
}

/// The closed-form distinguished test for classical families, phrased on the
/// block sizes N₀, …, N_m:
///
/// * A: every block has size 1.
/// * B: N₀ = 1, each step grows by 0 or 1 through N_{m−1}, and
///   N_m = ⌊N_{m−1}/2⌋.
/// * C: N₀ = 1, steps grow by 0 or 1, and γ_n carries weight 2.
/// * D, tail (2,2): N₀ = 1, steps grow by 0 or 1 through N_{m−2}, and
///   N_{m−2} ≤ 2.
/// * D, tail (0,0): N₀ = 1, steps grow by 0 or 1, and N_m = ⌈N_{m−1}/2⌉.
/// * D, mixed tail: never distinguished.
pub fn is_distinguished_closed_form(
    family: Family,
    rank: usize,
    rho: &WeightFunction,
) -> Result<bool> {
    let blocks = block_partition(family, rank, rho)?;
    let n = blocks.sizes();
    let m = blocks.m();
    let steps_unit = |upto: usize| (1..=upto).all(|i| n[i] == n[i - 1] || n[i] == n[i - 1] + 1);
    let ok = match blocks.case() {
        BlockCase::TypeA => n.iter().all(|&x| x == 1),
        BlockCase::TypeB => m >= 1 && n[0] == 1 && steps_unit(m - 1) && n[m] == n[m - 1] / 2,
        BlockCase::TypeCTailTwo => m >= 1 && n[0] == 1 && steps_unit(m - 1),
        BlockCase::TypeCTailZero => false,
        BlockCase::TypeDBothTwo => n[0] == 1 && steps_unit(m - 2) && n[m - 2] <= 2,
        BlockCase::TypeDBothZero => {
            m >= 1 && n[0] == 1 && steps_unit(m - 1) && n[m] == (n[m - 1] + 1) / 2
        }
        BlockCase::TypeDMixed => false,
    };
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::build_root_system;

    fn rho(s: &str) -> WeightFunction {
        s.parse().expect("test weighting should parse")
    }

    #[test]
    fn weighting_parse_and_display_round_trip() {
        let w = rho("2022");
        assert_eq!(w.values(), &[2, 0, 2, 2]);
        assert_eq!(w.to_string(), "2022");
        assert!("21".parse::<WeightFunction>().is_err());
        assert!("".parse::<WeightFunction>().is_err());
    }

    #[test]
    fn all_weightings_counts_in_binary_with_gamma1_most_significant() {
        let all: Vec<String> = all_weightings(2).iter().map(|w| w.to_string()).collect();
        assert_eq!(all, vec!["00", "02", "20", "22"]);
        assert_eq!(all_weightings(5).len(), 32);
    }

    #[test]
    fn regular_weighting_makes_v2_the_simple_roots() {
        let rs = build_root_system(Family::F, 4).unwrap();
        let classes = weight_classes(&rs, &WeightFunction::regular(4)).unwrap();
        let simples: Vec<usize> = (0..4).map(|i| rs.simple_index(i)).collect();
        let mut expected = simples;
        expected.sort_unstable();
        assert_eq!(classes.v2(), &expected[..]);
        assert!(classes.v0().is_empty());
    }

    #[test]
    fn b2_weight_classes_for_weight_on_the_long_root_only() {
        // ρ = (2, 0): V₂ = {e₁−e₂, e₁, e₁+e₂}, V₀ = {±e₂}.
        let rs = build_root_system(Family::B, 2).unwrap();
        let classes = weight_classes(&rs, &rho("20")).unwrap();
        let ambient = |idx: &[usize]| -> Vec<Vec<i16>> {
            let mut v: Vec<Vec<i16>> = idx.iter().map(|&r| rs.ambient(r).unwrap().to_vec()).collect();
            v.sort();
            v
        };
        assert_eq!(
            ambient(classes.v2()),
            vec![vec![1, -1], vec![1, 0], vec![1, 1]]
        );
        assert_eq!(ambient(classes.v0()), vec![vec![0, -1], vec![0, 1]]);
        assert!(!is_distinguished_cardinality(&rs, &rho("20")).unwrap());
        assert!(is_distinguished_cardinality(&rs, &rho("22")).unwrap());
    }

    #[test]
    fn v2_lies_in_the_positive_roots_and_v0_is_negation_closed() {
        for (family, rank) in [(Family::B, 3), (Family::D, 4), (Family::G, 2)] {
            let rs = build_root_system(family, rank).unwrap();
            for w in all_weightings(rank) {
                let classes = weight_classes(&rs, &w).unwrap();
                assert!(classes.v2().iter().all(|&r| rs.is_positive(r)));
                for &r in classes.v0() {
                    assert!(classes.v0().contains(&rs.neg_index(r)));
                }
            }
        }
    }

    #[test]
    fn block_partitions_match_hand_worked_examples() {
        let bp = block_partition(Family::B, 2, &rho("20")).unwrap();
        assert_eq!(bp.sizes(), &[1, 1]);
        assert_eq!(bp.lifted(), vec![1, 3, 1]);

        let bp = block_partition(Family::B, 2, &rho("22")).unwrap();
        assert_eq!(bp.sizes(), &[1, 1, 0]);
        assert_eq!(bp.lifted(), vec![1, 1, 1, 1, 1]);

        let bp = block_partition(Family::C, 2, &rho("20")).unwrap();
        assert_eq!(bp.case(), BlockCase::TypeCTailZero);
        assert_eq!(bp.lifted(), vec![1, 2, 1]);

        let bp = block_partition(Family::C, 3, &rho("202")).unwrap();
        assert_eq!(bp.case(), BlockCase::TypeCTailTwo);
        assert_eq!(bp.sizes(), &[1, 2, 0]);
        assert_eq!(bp.lifted(), vec![1, 2, 2, 1]);

        let bp = block_partition(Family::D, 4, &rho("2022")).unwrap();
        assert_eq!(bp.case(), BlockCase::TypeDBothTwo);
        assert_eq!(bp.sizes(), &[1, 2, 1, 0]);
        assert_eq!(bp.lifted(), vec![1, 2, 2, 2, 1]);

        let bp = block_partition(Family::D, 4, &rho("2002")).unwrap();
        assert_eq!(bp.case(), BlockCase::TypeDMixed);
        assert_eq!(bp.sizes(), &[1, 3, 0]);
        assert_eq!(bp.lifted(), vec![1, 3, 3, 1]);

        let bp = block_partition(Family::D, 4, &rho("2000")).unwrap();
        assert_eq!(bp.case(), BlockCase::TypeDBothZero);
        assert_eq!(bp.sizes(), &[1, 3]);
        assert_eq!(bp.lifted(), vec![1, 6, 1]);

        let bp = block_partition(Family::A, 3, &rho("202")).unwrap();
        assert_eq!(bp.sizes(), &[1, 2, 1]);
        assert_eq!(bp.lifted(), vec![1, 2, 1]);
    }

    #[test]
    fn d_tail_two_zero_is_normalized_by_the_twist() {
        let bp = block_partition(Family::D, 4, &rho("2220")).unwrap();
        assert!(bp.twist_applied());
        assert_eq!(bp.case(), BlockCase::TypeDMixed);
        // Normalized to 2202: cuts after 1, 2, 4.
        assert_eq!(bp.sizes(), &[1, 1, 2, 0]);
        assert_eq!(bp.lifted(), vec![1, 1, 2, 2, 1, 1]);

        let untouched = block_partition(Family::D, 4, &rho("2202")).unwrap();
        assert!(!untouched.twist_applied());
        assert_eq!(untouched.sizes(), bp.sizes());
    }

    #[test]
    fn lifted_composition_is_palindromic_and_fills_the_letter_string() {
        for (family, rank) in [
            (Family::A, 4),
            (Family::B, 4),
            (Family::C, 4),
            (Family::D, 4),
            (Family::D, 5),
        ] {
            for w in all_weightings(rank) {
                let bp = block_partition(family, rank, &w).unwrap();
                let lifted = bp.lifted();
                assert_eq!(lifted.iter().sum::<usize>(), bp.lifted_letters());
                if family == Family::A {
                    // Type A is its own lift; nothing gets mirrored.
                    assert_eq!(lifted, bp.sizes(), "{family}{rank} ρ={w}");
                } else {
                    let mut rev = lifted.clone();
                    rev.reverse();
                    assert_eq!(lifted, rev, "{family}{rank} ρ={w}");
                }
                assert!(lifted.iter().all(|&x| x >= 1));
            }
        }
    }

    /// The block-pattern test and the counting test are independent routes to
    /// the same predicate; they must agree on every classical weighting.
    #[test]
    fn closed_form_distinguished_agrees_with_cardinality_everywhere() {
        let cases = [
            (Family::A, 1),
            (Family::A, 2),
            (Family::A, 3),
            (Family::A, 4),
            (Family::A, 5),
            (Family::A, 6),
            (Family::B, 2),
            (Family::B, 3),
            (Family::B, 4),
            (Family::B, 5),
            (Family::C, 2),
            (Family::C, 3),
            (Family::C, 4),
            (Family::C, 5),
            (Family::D, 3),
            (Family::D, 4),
            (Family::D, 5),
        ];
        for (family, rank) in cases {
            let rs = build_root_system(family, rank).unwrap();
            for w in all_weightings(rank) {
                let by_count = is_distinguished_cardinality(&rs, &w).unwrap();
                let by_form = is_distinguished_closed_form(family, rank, &w).unwrap();
                assert_eq!(by_count, by_form, "{family}{rank} ρ={w}");
            }
        }
    }

    #[test]
    fn distinguished_counts_for_small_classical_systems() {
        let count = |family, rank| -> usize {
            let rs = build_root_system(family, rank).unwrap();
            all_weightings(rank)
                .iter()
                .filter(|w| is_distinguished_cardinality(&rs, w).unwrap())
                .count()
        };
        assert_eq!(count(Family::B, 2), 1);
        assert_eq!(count(Family::B, 4), 2);
        assert_eq!(count(Family::C, 3), 2);
        assert_eq!(count(Family::D, 4), 2);
    }

    #[test]
    fn only_the_regular_weighting_is_distinguished_in_type_a() {
        for rank in 1..=6 {
            let rs = build_root_system(Family::A, rank).unwrap();
            let distinguished: Vec<String> = all_weightings(rank)
                .into_iter()
                .filter(|w| is_distinguished_cardinality(&rs, w).unwrap())
                .map(|w| w.to_string())
                .collect();
            assert_eq!(distinguished, vec!["2".repeat(rank)]);
        }
    }

    #[test]
    fn exceptional_families_reject_block_partitions() {
        assert!(block_partition(Family::G, 2, &rho("22")).is_err());
        assert!(is_distinguished_closed_form(Family::F, 4, &rho("2222")).is_err());
    }
}
