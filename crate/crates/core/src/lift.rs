//! Position bookkeeping for the classical families viewed inside type A.
//!
//! A signed permutation of 1…n (type B/C/D element) becomes an ordinary
//! permutation of a letter string: 2n+1 positions for B (with a fixed middle
//! letter), 2n for C and D.  Position `p` carries a signed label — positive
//! labels on the left half, 0 in the B middle, negated mirrored labels on the
//! right — and the element permutes positions the way it permutes labels.
//! Everything here is 0-based; labels are the 1-based signed values.

use crate::error::{Error, Result};
use crate::rootsys::{Family, RootSystem};

/// Length of the type-A letter string: n+1 for A itself, 2n+1 for B,
/// 2n for C and D.
pub(crate) fn a_letters(family: Family, rank: usize) -> usize {
    match family {
        Family::A => rank + 1,
        Family::B => 2 * rank + 1,
        _ => 2 * rank,
    }
}

/// The mirror position (B/C/D letter strings are read symmetrically).
pub(crate) fn mirror(family: Family, rank: usize, p: usize) -> usize {
    a_letters(family, rank) - 1 - p
}

/// Signed label carried by position `p`: 1…n on the left half, 0 at the B
/// middle, −n…−1 on the right half.
pub(crate) fn label_of_position(family: Family, rank: usize, p: usize) -> i32 {
    let letters = a_letters(family, rank);
    debug_assert!(p < letters);
    if p < rank {
        (p + 1) as i32
    } else if family == Family::B && p == rank {
        0
    } else {
        -((letters - p) as i32)
    }
}

/// Inverse of `label_of_position`.
pub(crate) fn position_of_label(family: Family, rank: usize, label: i32) -> usize {
    let letters = a_letters(family, rank);
    if label > 0 {
        label as usize - 1
    } else if label == 0 {
        debug_assert_eq!(family, Family::B);
        rank
    } else {
        letters - label.unsigned_abs() as usize
    }
}

/// Reads a type B/C/D element off its root-table action as a signed
/// permutation: entry `i` is the signed image of `i+1`.  The image of `e_i`
/// is recovered as the average of the images of `e_i − e_j` and `e_i + e_j`,
/// which works uniformly in all three families (and for extended type-D
/// actions).
pub(crate) fn signed_perm_of<A>(rs: &RootSystem, action: &A) -> Result<Vec<i32>>
where
    A: crate::weyl::RootAction + ?Sized,
{
    if !matches!(rs.family(), Family::B | Family::C | Family::D) {
        return Err(Error::unsupported(format!(
            "signed permutations belong to types B, C, D, not {}",
            rs.family()
        )));
    }
    let n = rs.rank();
    let image_of_basis = |i: usize| -> Result<i32> {
        let j = if i + 1 < n { i + 1 } else { i - 1 };
        let mut diff = vec![0i16; n];
        diff[i] = 1;
        diff[j] = -1;
        let mut sum = vec![0i16; n];
        sum[i] = 1;
        sum[j] = 1;
        let lookup = |v: &[i16]| {
            rs.index_of_ambient(v)
                .ok_or_else(|| Error::mismatch(format!("{v:?} is not a root")))
        };
        let img_diff = rs.ambient(action.act(lookup(&diff)?))?;
        let img_sum = rs.ambient(action.act(lookup(&sum)?))?;
        for k in 0..n {
            match img_diff[k] + img_sum[k] {
                2 => return Ok((k + 1) as i32),
                -2 => return Ok(-((k + 1) as i32)),
                0 => {}
                other => {
                    return Err(Error::mismatch(format!(
                        "basis image has coefficient {other}/2"
                    )))
                }
            }
        }
        Err(Error::mismatch("basis vector vanished under action".to_string()))
    };
    (0..n).map(image_of_basis).collect()
}

/// The element's permutation of letter-string positions.
///
/// For type A this is the plain permutation of the n+1 letters; for B/C/D it
/// is `p ↦ position(w(label(p)))`, which is automatically symmetric around
/// the middle.
pub(crate) fn position_perm_of<A>(rs: &RootSystem, action: &A) -> Result<Vec<usize>>
where
    A: crate::weyl::RootAction + ?Sized,
{
    let family = rs.family();
    let rank = rs.rank();
    if family == Family::A {
        // σ(i) is the index of the +1 entry in the image of e_i − e_j.
        let n = rank + 1;
        return (0..n)
            .map(|i| {
                let j = if i + 1 < n { i + 1 } else { i - 1 };
                let mut diff = vec![0i16; n];
                diff[i] = 1;
                diff[j] = -1;
                let idx = rs
                    .index_of_ambient(&diff)
                    .ok_or_else(|| Error::mismatch(format!("{diff:?} is not a root")))?;
                let img = rs.ambient(action.act(idx))?;
                img.iter()
                    .position(|&c| c == 1)
                    .ok_or_else(|| Error::mismatch("difference image lost its +1".to_string()))
            })
            .collect();
    }
    let sp = signed_perm_of(rs, action)?;
    let signed_image = |label: i32| -> i32 {
        if label == 0 {
            0
        } else {
            let img = sp[label.unsigned_abs() as usize - 1];
            if label > 0 {
                img
            } else {
                -img
            }
        }
    };
    Ok((0..a_letters(family, rank))
        .map(|p| {
            position_of_label(family, rank, signed_image(label_of_position(family, rank, p)))
        })
        .collect())
}

/// Root-table action of a signed permutation (`sp[i]` = signed image of
/// `i+1`).  Errors when the images leave the root table — e.g. a signed
/// permutation with an odd number of sign changes offered to plain type D.
pub(crate) fn action_of_signed_perm(rs: &RootSystem, sp: &[i32]) -> Result<Vec<usize>> {
    let n = rs.rank();
    if sp.len() != n {
        return Err(Error::parameter(format!(
            "signed permutation has {} entries, rank is {n}",
            sp.len()
        )));
    }
    (0..rs.root_count())
        .map(|r| {
            let ambient = rs.ambient(r)?;
            let mut image = vec![0i16; n];
            for (i, &c) in ambient.iter().enumerate() {
                if c != 0 {
                    let target = sp[i];
                    let k = target.unsigned_abs() as usize - 1;
                    image[k] += if target > 0 { c } else { -c };
                }
            }
            rs.index_of_ambient(&image).ok_or_else(|| {
                Error::mismatch(format!("signed permutation image {image:?} is not a root"))
            })
        })
        .collect()
}

/// Root-table action of a type-A letter permutation: `e_x − e_y` maps to
/// `e_{π(x)} − e_{π(y)}`.
pub(crate) fn action_of_a_perm(rs: &RootSystem, pi: &[usize]) -> Result<Vec<usize>> {
    if rs.family() != Family::A {
        return Err(Error::unsupported(format!(
            "letter permutations describe type A, not {}",
            rs.family()
        )));
    }
    (0..rs.root_count())
        .map(|r| {
            let ambient = rs.ambient(r)?;
            let mut image = vec![0i16; ambient.len()];
            for (x, &c) in ambient.iter().enumerate() {
                if c != 0 {
                    image[pi[x]] = c;
                }
            }
            rs.index_of_ambient(&image).ok_or_else(|| {
                Error::mismatch(format!("letter permutation image {image:?} is not a root"))
            })
        })
        .collect()
}

/// Lex-least reduced word of a root-table action, by greedily stripping the
/// smallest left descent.  Errors when the table is not a group element.
pub(crate) fn canonical_word_of_action(rs: &RootSystem, action: &[usize]) -> Result<Vec<u8>> {
    let mut inv = vec![0usize; action.len()];
    for (r, &img) in action.iter().enumerate() {
        inv[img] = r;
    }
    let mut word = Vec::new();
    let bound = rs.positive_count();
    loop {
        let descent =
            (0..rs.rank()).find(|&i| !rs.is_positive(inv[rs.simple_index(i)]));
        let Some(i) = descent else { break };
        if word.len() >= bound {
            return Err(Error::mismatch(
                "action is not a Weyl group element".to_string(),
            ));
        }
        word.push(i as u8);
        // Stripping on the left multiplies the inverse by s_i on the right.
        for &(a, b) in rs.full_swaps(i) {
            inv.swap(a, b);
        }
    }
    // Only the identity has no left descent.
    if inv.iter().enumerate().any(|(r, &img)| r != img) {
        return Err(Error::mismatch(
            "descent stripping did not reach the identity".to_string(),
        ));
    }
    Ok(word)
}

/// Half-open position ranges of consecutive blocks of the given sizes.
pub(crate) fn block_ranges(sizes: &[usize]) -> Vec<std::ops::Range<usize>> {
    let mut start = 0;
    sizes
        .iter()
        .map(|&len| {
            let range = start..start + len;
            start += len;
            range
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::build_root_system;
    use crate::weyl::{enumerate_weyl, WeylElement};

    #[test]
    fn labels_and_positions_are_inverse_maps() {
        for (family, rank) in [(Family::B, 3), (Family::C, 3), (Family::D, 4)] {
            let letters = a_letters(family, rank);
            for p in 0..letters {
                let label = label_of_position(family, rank, p);
                assert_eq!(position_of_label(family, rank, label), p);
                assert_eq!(
                    label_of_position(family, rank, mirror(family, rank, p)),
                    -label
                );
            }
        }
        assert_eq!(label_of_position(Family::B, 3, 3), 0);
    }

    #[test]
    fn b2_generators_have_the_expected_signed_and_position_forms() {
        let rs = build_root_system(Family::B, 2).unwrap();
        let s1 = WeylElement::from_word(&rs, &[0]).unwrap();
        let s2 = WeylElement::from_word(&rs, &[1]).unwrap();
        assert_eq!(signed_perm_of(&rs, &s1).unwrap(), vec![2, 1]);
        assert_eq!(signed_perm_of(&rs, &s2).unwrap(), vec![1, -2]);
        assert_eq!(position_perm_of(&rs, &s2).unwrap(), vec![0, 3, 2, 1, 4]);
    }

    #[test]
    fn position_permutations_commute_with_the_mirror() {
        let rs = build_root_system(Family::C, 3).unwrap();
        for el in enumerate_weyl(&rs) {
            let pi = position_perm_of(&rs, &el).unwrap();
            for p in 0..pi.len() {
                assert_eq!(
                    pi[mirror(Family::C, 3, p)],
                    mirror(Family::C, 3, pi[p])
                );
            }
        }
    }

    #[test]
    fn signed_perm_round_trips_through_the_action_table() {
        let rs = build_root_system(Family::D, 3).unwrap();
        for el in enumerate_weyl(&rs) {
            let sp = signed_perm_of(&rs, &el).unwrap();
            let action = action_of_signed_perm(&rs, &sp).unwrap();
            assert_eq!(&action[..], el.action());
        }
    }

    /// The greedy word extractor must reproduce the enumerator's canonical
    /// words — two independent routes to the same normal form.
    #[test]
    fn canonical_word_extraction_agrees_with_enumeration() {
        let rs = build_root_system(Family::B, 3).unwrap();
        for el in enumerate_weyl(&rs) {
            let word = canonical_word_of_action(&rs, el.action()).unwrap();
            assert_eq!(&word[..], el.word());
        }
    }

    #[test]
    fn type_a_position_permutation_is_the_letter_permutation() {
        let rs = build_root_system(Family::A, 3).unwrap();
        // s₁ swaps letters 1 and 2 (positions 0 and 1).
        let s1 = WeylElement::from_word(&rs, &[0]).unwrap();
        assert_eq!(position_perm_of(&rs, &s1).unwrap(), vec![1, 0, 2, 3]);
        for el in enumerate_weyl(&rs) {
            let pi = position_perm_of(&rs, &el).unwrap();
            let mut seen = vec![false; pi.len()];
            for &p in &pi {
                assert!(!seen[p]);
                seen[p] = true;
            }
        }
    }

    #[test]
    fn block_ranges_partition_the_string() {
        let ranges = block_ranges(&[1, 2, 5, 2, 1]);
        assert_eq!(ranges[0], 0..1);
        assert_eq!(ranges[2], 3..8);
        assert_eq!(ranges[4], 10..11);
    }
}
