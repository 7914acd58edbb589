//! Explicit structure families with brute-force minimization.
//!
//! Covers the non-matroid side of the auction: the buyer names the
//! acceptable item sets outright and the minimizer simply scans them.
//! Keeping the family explicit keeps this path trustworthy enough to act
//! as an oracle for the matroid solvers.

use serde::{Deserialize, Serialize};

use crate::matroid::{enumerate_bases, Matroid};
use crate::{Error, ExtCost, Result, Scalar};

/// A collection of desired structures over items `{0, .., ground_size-1}`.
///
/// Structures are stored sorted; duplicates are rejected. Construction
/// and deserialization share the same validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFamily", into = "RawFamily")]
pub struct StructureFamily {
    ground_size: usize,
    structures: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawFamily {
    ground_size: usize,
    structures: Vec<Vec<usize>>,
}

impl TryFrom<RawFamily> for StructureFamily {
    type Error = Error;
    fn try_from(raw: RawFamily) -> Result<Self> {
        StructureFamily::new(raw.ground_size, raw.structures)
    }
}

impl From<StructureFamily> for RawFamily {
    fn from(f: StructureFamily) -> RawFamily {
        RawFamily {
            ground_size: f.ground_size,
            structures: f.structures,
        }
    }
}

impl StructureFamily {
    pub fn new(ground_size: usize, structures: Vec<Vec<usize>>) -> Result<Self> {
        if structures.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let mut canonical: Vec<Vec<usize>> = Vec::with_capacity(structures.len());
        for mut s in structures {
            s.sort_unstable();
            s.dedup();
            for &a in &s {
                if a >= ground_size {
                    return Err(Error::ElementOutOfRange {
                        index: a,
                        ground_size,
                    });
                }
            }
            canonical.push(s);
        }
        let mut sorted = canonical.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(
                "duplicate structures are forbidden".into(),
            ));
        }
        Ok(StructureFamily {
            ground_size,
            structures: canonical,
        })
    }

    /// Two-terminal paths of the triangle: item 0 is the direct edge,
    /// items 1 and 2 form the two-edge detour.
    pub fn k3_path() -> Self {
        StructureFamily::new(3, vec![vec![0], vec![1, 2]]).expect("static family is valid")
    }

    /// The basis family of a small matroid, enumerated exhaustively.
    pub fn bases_of(m: &Matroid, limit: usize) -> Result<Self> {
        let bases = enumerate_bases(m, limit)?;
        if bases.is_empty() {
            return Err(Error::EmptyFamily);
        }
        StructureFamily::new(m.ground_size(), bases)
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn structures(&self) -> &[Vec<usize>] {
        &self.structures
    }

    /// True when `item` appears in every structure; deleting such an
    /// item leaves nothing feasible, the family analogue of a bridge.
    pub fn item_in_all_structures(&self, item: usize) -> bool {
        self.structures.iter().all(|s| s.binary_search(&item).is_ok())
    }

    /// Items contained in every structure.
    pub fn universal_items(&self) -> Vec<usize> {
        (0..self.ground_size)
            .filter(|&a| self.item_in_all_structures(a))
            .collect()
    }
}

/// Minimizes the edited cost over structures disjoint from `excluded`,
/// where items in `zeroed` cost nothing. Returns `None` when every
/// structure meets `excluded` (infinite cost). Ties are broken by the
/// lexicographically smallest item set.
pub fn min_structure<S: Scalar>(
    family: &StructureFamily,
    costs: &[S],
    excluded: &[usize],
    zeroed: &[usize],
) -> Result<Option<(Vec<usize>, S)>> {
    if costs.len() != family.ground_size {
        return Err(Error::InvalidParameter(format!(
            "cost vector has length {}, ground set has {}",
            costs.len(),
            family.ground_size
        )));
    }
    let n = family.ground_size;
    let mut is_excluded = vec![false; n];
    for &a in excluded {
        if a >= n {
            return Err(Error::ElementOutOfRange {
                index: a,
                ground_size: n,
            });
        }
        is_excluded[a] = true;
    }
    let mut is_zeroed = vec![false; n];
    for &a in zeroed {
        if a >= n {
            return Err(Error::ElementOutOfRange {
                index: a,
                ground_size: n,
            });
        }
        if is_excluded[a] {
            return Err(Error::InvalidParameter(format!(
                "item {a} is both excluded and zeroed"
            )));
        }
        is_zeroed[a] = true;
    }

    let mut best: Option<(&Vec<usize>, S)> = None;
    for s in &family.structures {
        if s.iter().any(|&a| is_excluded[a]) {
            continue;
        }
        let cost = s
            .iter()
            .map(|&a| if is_zeroed[a] { S::zero() } else { costs[a] })
            .fold(S::zero(), |acc, c| acc + c);
        let better = match &best {
            None => true,
            Some((cur, cur_cost)) => {
                cost < *cur_cost || (cost == *cur_cost && s < *cur)
            }
        };
        if better {
            best = Some((s, cost));
        }
    }
    Ok(best.map(|(s, c)| (s.clone(), c)))
}

/// Convenience wrapper returning the cost as an [`ExtCost`].
pub fn min_cost_edited<S: Scalar>(
    family: &StructureFamily,
    costs: &[S],
    excluded: &[usize],
    zeroed: &[usize],
) -> Result<ExtCost<S>> {
    Ok(match min_structure(family, costs, excluded, zeroed)? {
        Some((_, c)) => ExtCost::Finite(c),
        None => ExtCost::Infinite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{greedy_min_basis, GraphicMatroidSpec, UniformMatroidSpec};

    #[test]
    fn k3_path_fixture() {
        let f = StructureFamily::k3_path();
        let (s, c) = min_structure(&f, &[0.3f64, 0.1, 0.1], &[], &[]).unwrap().unwrap();
        assert_eq!(s, vec![1, 2]);
        assert!((c - 0.2).abs() < 1e-12);

        // c* = min(X1, X2+X3)
        let (_, c) = min_structure(&f, &[0.5f64, 0.2, 0.2], &[], &[]).unwrap().unwrap();
        assert!((c - 0.4).abs() < 1e-12);
        let (s, c) = min_structure(&f, &[0.1f64, 0.3, 0.3], &[], &[]).unwrap().unwrap();
        assert_eq!(s, vec![0]);
        assert!((c - 0.1).abs() < 1e-12);
    }

    #[test]
    fn excluding_leaves_the_other_path() {
        let f = StructureFamily::k3_path();
        let (s, _) = min_structure(&f, &[0.3f64, 0.1, 0.1], &[0], &[]).unwrap().unwrap();
        assert_eq!(s, vec![1, 2]);
        // Excluding one detour edge kills only the detour.
        let (s, _) = min_structure(&f, &[0.9f64, 0.1, 0.1], &[1], &[]).unwrap().unwrap();
        assert_eq!(s, vec![0]);
    }

    #[test]
    fn zeroing_a_full_structure_gives_zero() {
        let f = StructureFamily::k3_path();
        let (_, c) = min_structure(&f, &[0.3f64, 0.4, 0.5], &[], &[1, 2]).unwrap().unwrap();
        assert_eq!(c, 0.0);
    }

    #[test]
    fn infeasible_when_all_structures_hit_exclusions() {
        let f = StructureFamily::k3_path();
        assert!(min_structure(&f, &[0.1f64, 0.2, 0.3], &[0, 1], &[]).unwrap().is_none());
        assert_eq!(
            min_cost_edited(&f, &[0.1f64, 0.2, 0.3], &[0, 1], &[]).unwrap(),
            ExtCost::Infinite
        );
    }

    #[test]
    fn ties_break_lexicographically() {
        let f = StructureFamily::new(3, vec![vec![1], vec![0], vec![2]]).unwrap();
        let (s, _) = min_structure(&f, &[0.5f64, 0.5, 0.5], &[], &[]).unwrap().unwrap();
        assert_eq!(s, vec![0]);
    }

    #[test]
    fn constructor_validation() {
        assert!(matches!(
            StructureFamily::new(3, vec![]),
            Err(Error::EmptyFamily)
        ));
        assert!(StructureFamily::new(2, vec![vec![0], vec![2]]).is_err());
        assert!(StructureFamily::new(3, vec![vec![0, 1], vec![1, 0]]).is_err());
    }

    #[test]
    fn agrees_with_greedy_on_matroid_basis_families() {
        let systems = vec![
            Matroid::uniform(UniformMatroidSpec { n: 5, k: 2 }).unwrap(),
            Matroid::graphic(GraphicMatroidSpec::complete(4).unwrap()).unwrap(),
            Matroid::graphic(GraphicMatroidSpec::cycle(5).unwrap()).unwrap(),
        ];
        let mut costs = Vec::new();
        for m in systems {
            costs.clear();
            // Deterministic, distinct pseudo-costs.
            for i in 0..m.ground_size() {
                costs.push(0.137 * (i as f64 + 1.0) % 1.0 + 0.01 * (i as f64));
            }
            let family = StructureFamily::bases_of(&m, 12).unwrap();
            let (_, brute) = min_structure(&family, &costs, &[], &[]).unwrap().unwrap();
            let greedy = greedy_min_basis(&m, &costs).unwrap();
            assert!((brute - greedy.cost).abs() < 1e-12);
        }
    }

    #[test]
    fn family_json_round_trip_validates() {
        let f = StructureFamily::k3_path();
        let s = serde_json::to_string(&f).unwrap();
        let back: StructureFamily = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let bad = r#"{"ground_size":2,"structures":[[0],[0]]}"#;
        assert!(serde_json::from_str::<StructureFamily>(bad).is_err());
    }
}
