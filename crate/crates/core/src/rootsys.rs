//! Root systems of the simple types A–G in simple-root coordinates.
//!
//! Roots are stored as integer vectors over the ordered simple roots
//! Δ = (γ₁, …, γ_n); a root is positive exactly when all its coordinates are
//! ≥ 0.  The table is built by closing Δ under the simple reflections derived
//! from the Cartan matrix, so the same construction covers every family.  For
//! the classical families an auxiliary ambient presentation (coordinates over
//! the standard basis e₁, e₂, …) is attached; the closed-form and reduction
//! modules lean on it.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// The simple families.  `E` covers ranks 6–8, `F` rank 4, `G` rank 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn is_classical(self) -> bool {
        matches!(self, Family::A | Family::B | Family::C | Family::D)
    }

    /// Lower/exact rank bounds of the conventional labelling.
    pub(crate) fn validate_rank(self, rank: usize) -> Result<()> {
        let ok = match self {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::parameter(format!(
                "rank {rank} is out of bounds for family {}",
                self.letter()
            )))
        }
    }

    /// Number of roots of the rank-`n` system of this family.
    pub fn root_count(self, n: usize) -> usize {
        match self {
            Family::A => n * (n + 1),
            Family::B | Family::C => 2 * n * n,
            Family::D => 2 * n * (n - 1),
            Family::G => 12,
            Family::F => 48,
            Family::E => match n {
                6 => 72,
                7 => 126,
                _ => 240,
            },
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            "E" | "e" => Ok(Family::E),
            "F" | "f" => Ok(Family::F),
            "G" | "g" => Ok(Family::G),
            other => Err(Error::parameter(format!("unknown family {other:?}"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A root, stored by its coordinates over the ordered simple roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    coords: Vec<i16>,
    index: usize,
    positive: bool,
}

impl Root {
    /// Coordinates over Δ, i.e. `r = Σ coords[i]·γ_{i+1}`.
    pub fn coords(&self) -> &[i16] {
        &self.coords
    }

    /// Position in the system's deterministic root table.
    pub fn index(&self) -> usize {
        self.index
    }

    /// A root is positive exactly when all Δ-coordinates are ≥ 0.
    pub fn is_positive(&self) -> bool {
        self.positive
    }

    /// Sum of the Δ-coordinates.
    pub fn height(&self) -> i32 {
        self.coords.iter().map(|&c| c as i32).sum()
    }
}

/// A simple root system with its deterministic root table and the lookup
/// tables every scan needs (negation, per-generator reflection permutations,
/// positive-pair swaps for `r ↦ |s_i(r)|`).
pub struct RootSystem {
    family: Family,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    roots: Vec<Root>,
    simple_indices: Vec<usize>,
    neg: Vec<usize>,
    reflect: Vec<Vec<usize>>,
    /// Per generator: the 2-cycles of `r ↦ |s_i(r)|` on positive roots.
    positive_swaps: Vec<Vec<(usize, usize)>>,
    /// Per generator: the 2-cycles of `r ↦ s_i(r)` on the whole table.
    full_swaps: Vec<Vec<(usize, usize)>>,
    index_by_coords: HashMap<Vec<i16>, usize>,
    ambient: Option<Vec<Vec<i16>>>,
    positive_count: usize,
}

/// Builds the rank-`rank` system of `family`.
///
/// The root table is deterministic: sorted by height, then lexicographically
/// by Δ-coordinates.  Errors when the rank is outside the conventional bounds
/// of the family.
pub fn build_root_system(family: Family, rank: usize) -> Result<RootSystem> {
    family.validate_rank(rank)?;
    let cartan = cartan_matrix(family, rank);

    // Close Δ under all simple reflections.  Every root of a finite system is
    // reachable from a simple root this way.
    let mut seen: HashMap<Vec<i16>, ()> = HashMap::new();
    let mut queue: Vec<Vec<i16>> = Vec::new();
    for i in 0..rank {
        let mut v = vec![0i16; rank];
        v[i] = 1;
        seen.insert(v.clone(), ());
        queue.push(v);
    }
    while let Some(v) = queue.pop() {
        for i in 0..rank {
            let w = reflect_coords(&cartan, i, &v);
            if !seen.contains_key(&w) {
                seen.insert(w.clone(), ());
                queue.push(w);
            }
        }
    }

    let mut coords: Vec<Vec<i16>> = seen.into_keys().collect();
    coords.sort_by(|a, b| {
        let ha: i32 = a.iter().map(|&c| c as i32).sum();
        let hb: i32 = b.iter().map(|&c| c as i32).sum();
        ha.cmp(&hb).then_with(|| a.cmp(b))
    });

    let expected = family.root_count(rank);
    if coords.len() != expected {
        return Err(Error::mismatch(format!(
            "closure produced {} roots for {}{rank}, expected {expected}",
            coords.len(),
            family
        )));
    }

    let index_by_coords: HashMap<Vec<i16>, usize> = coords
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i))
        .collect();

    let roots: Vec<Root> = coords
        .iter()
        .enumerate()
        .map(|(index, c)| Root {
            coords: c.clone(),
            index,
            positive: c.iter().all(|&x| x >= 0),
        })
        .collect();
    let positive_count = roots.iter().filter(|r| r.positive).count();

    let simple_indices: Vec<usize> = (0..rank)
        .map(|i| {
            let mut v = vec![0i16; rank];
            v[i] = 1;
            index_by_coords[&v]
        })
        .collect();

    let neg: Vec<usize> = roots
        .iter()
        .map(|r| {
            let negated: Vec<i16> = r.coords.iter().map(|&c| -c).collect();
            index_by_coords[&negated]
        })
        .collect();

    let mut reflect = Vec::with_capacity(rank);
    let mut positive_swaps = Vec::with_capacity(rank);
    let mut full_swaps = Vec::with_capacity(rank);
    for i in 0..rank {
        let perm: Vec<usize> = roots
            .iter()
            .map(|r| index_by_coords[&reflect_coords(&cartan, i, &r.coords)])
            .collect();
        let mut pos_pairs = Vec::new();
        let mut all_pairs = Vec::new();
        for (r, &img) in perm.iter().enumerate() {
            if r < img {
                all_pairs.push((r, img));
                // |s_i(·)| fixes γ_i and permutes the remaining positive
                // roots in 2-cycles; record each cycle once.
                if roots[r].positive && roots[img].positive {
                    pos_pairs.push((r, img));
                }
            }
        }
        reflect.push(perm);
        positive_swaps.push(pos_pairs);
        full_swaps.push(all_pairs);
    }

    let ambient = classical_simple_ambient(family, rank).map(|simples| {
        roots
            .iter()
            .map(|r| {
                let dim = simples[0].len();
                let mut v = vec![0i16; dim];
                for (c, s) in r.coords.iter().zip(&simples) {
                    for (vi, si) in v.iter_mut().zip(s) {
                        *vi += c * si;
                    }
                }
                v
            })
            .collect()
    });

    Ok(RootSystem {
        family,
        rank,
        cartan,
        roots,
        simple_indices,
        neg,
        reflect,
        positive_swaps,
        full_swaps,
        index_by_coords,
        ambient,
        positive_count,
    })
}

impl RootSystem {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Cartan pairing row: `cartan()[i][j] = ⟨γ_j, γ_i^∨⟩`.
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root(&self, index: usize) -> &Root {
        &self.roots[index]
    }

    pub fn root_count(&self) -> usize {
        self.roots.len()
    }

    pub fn positive_count(&self) -> usize {
        self.positive_count
    }

    /// Table index of the simple root γ_{i+1}.
    pub fn simple_index(&self, i: usize) -> usize {
        self.simple_indices[i]
    }

    pub fn is_positive(&self, index: usize) -> bool {
        self.roots[index].positive
    }

    /// Index of `−r`.
    pub fn neg_index(&self, index: usize) -> usize {
        self.neg[index]
    }

    /// Index of `|r|`: `r` itself when positive, `−r` otherwise.
    pub fn abs_index(&self, index: usize) -> usize {
        if self.roots[index].positive {
            index
        } else {
            self.neg[index]
        }
    }

    /// `|r|` as a root reference; errors when `r` is not in the table.
    pub fn abs_root(&self, r: &Root) -> Result<&Root> {
        let idx = self
            .index_of_coords(r.coords())
            .ok_or_else(|| Error::parameter("root is not in this system's table".to_string()))?;
        Ok(&self.roots[self.abs_index(idx)])
    }

    /// Index of `s_{i+1}(r)`.
    pub fn reflect_index(&self, i: usize, index: usize) -> usize {
        self.reflect[i][index]
    }

    /// 2-cycles of the induced permutation `r ↦ |s_{i+1}(r)|` on positives.
    pub(crate) fn positive_swaps(&self, i: usize) -> &[(usize, usize)] {
        &self.positive_swaps[i]
    }

    /// 2-cycles of `s_{i+1}` on the whole root table.
    pub(crate) fn full_swaps(&self, i: usize) -> &[(usize, usize)] {
        &self.full_swaps[i]
    }

    pub fn index_of_coords(&self, coords: &[i16]) -> Option<usize> {
        self.index_by_coords.get(coords).copied()
    }

    /// Ambient coordinates of a root for the classical presentations
    /// (A: e_i − e_j over n+1 coordinates; B: ±e_i, ±e_i±e_j; C: ±e_i±e_j,
    /// ±2e_i; D: ±e_i±e_j).  Errors for exceptional families.
    pub fn ambient(&self, index: usize) -> Result<&[i16]> {
        match &self.ambient {
            Some(table) => Ok(&table[index]),
            None => Err(Error::unsupported(format!(
                "family {} has no classical ambient presentation",
                self.family
            ))),
        }
    }

    /// Ambient dimension of the classical presentation.
    pub fn ambient_dim(&self) -> Result<usize> {
        match self.family {
            Family::A => Ok(self.rank + 1),
            Family::B | Family::C | Family::D => Ok(self.rank),
            _ => Err(Error::unsupported(format!(
                "family {} has no classical ambient presentation",
                self.family
            ))),
        }
    }

    /// Looks up a root by its classical ambient vector.
    pub fn index_of_ambient(&self, v: &[i16]) -> Option<usize> {
        let table = self.ambient.as_ref()?;
        table.iter().position(|a| a == v)
    }
}

impl fmt::Debug for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RootSystem({}{}, {} roots)",
            self.family,
            self.rank,
            self.roots.len()
        )
    }
}

/// Applies `s_{i+1}` to Δ-coordinates: only coordinate `i` changes, by
/// `x_i ← x_i − Σ_j ⟨γ_j, γ_i^∨⟩ x_j`.
fn reflect_coords(cartan: &[Vec<i64>], i: usize, coords: &[i16]) -> Vec<i16> {
    let pairing: i64 = cartan[i]
        .iter()
        .zip(coords)
        .map(|(&c, &x)| c * x as i64)
        .sum();
    let mut out = coords.to_vec();
    out[i] -= pairing as i16;
    out
}

/// `cartan[i][j] = ⟨γ_j, γ_i^∨⟩ = 2(γ_i,γ_j)/(γ_i,γ_i)` for the conventional
/// orderings: classical chains with the short/long tail last, Bourbaki
/// numbering for E₆–E₈ and F₄, and (α, β) = (short, long) for G₂.
fn cartan_matrix(family: Family, n: usize) -> Vec<Vec<i64>> {
    let mut c = vec![vec![0i64; n]; n];
    for i in 0..n {
        c[i][i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        c[i][j] = -1;
        c[j][i] = -1;
    };
    match family {
        Family::A => {
            for i in 0..n - 1 {
                link(i, i + 1);
            }
        }
        Family::B => {
            for i in 0..n - 1 {
                link(i, i + 1);
            }
            // γ_n = e_n is short: ⟨γ_{n−1}, γ_n^∨⟩ = −2.
            c[n - 1][n - 2] = -2;
        }
        Family::C => {
            for i in 0..n - 1 {
                link(i, i + 1);
            }
            // γ_n = 2e_n is long: ⟨γ_n, γ_{n−1}^∨⟩ = −2.
            c[n - 2][n - 1] = -2;
        }
        Family::D => {
            for i in 0..n - 2 {
                link(i, i + 1);
            }
            link(n - 3, n - 1);
        }
        Family::E => {
            // Bourbaki: chain 1−3−4−5−…, with node 2 attached to node 4.
            link(0, 2);
            link(1, 3);
            for i in 2..n - 1 {
                link(i, i + 1);
            }
        }
        Family::F => {
            link(0, 1);
            link(2, 3);
            // Double bond: α₂ long, α₃ short.
            c[1][2] = -1;
            c[2][1] = -2;
        }
        Family::G => {
            // α = γ₁ short, β = γ₂ long.
            c[0][1] = -3;
            c[1][0] = -1;
        }
    }
    c
}

/// Ambient vectors of the simple roots for the classical presentations.
fn classical_simple_ambient(family: Family, n: usize) -> Option<Vec<Vec<i16>>> {
    let chain = |dim: usize, count: usize| -> Vec<Vec<i16>> {
        (0..count)
            .map(|i| {
                let mut v = vec![0i16; dim];
                v[i] = 1;
                v[i + 1] = -1;
                v
            })
            .collect()
    };
    match family {
        Family::A => Some(chain(n + 1, n)),
        Family::B => {
            let mut simples = chain(n, n - 1);
            let mut last = vec![0i16; n];
            last[n - 1] = 1;
            simples.push(last);
            Some(simples)
        }
        Family::C => {
            let mut simples = chain(n, n - 1);
            let mut last = vec![0i16; n];
            last[n - 1] = 2;
            simples.push(last);
            Some(simples)
        }
        Family::D => {
            let mut simples = chain(n, n - 1);
            let mut last = vec![0i16; n];
            last[n - 2] = 1;
            last[n - 1] = 1;
            simples.push(last);
            Some(simples)
        }
        _ => None,
    }
}
