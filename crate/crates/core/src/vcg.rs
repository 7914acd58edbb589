//! The VCG mechanism: thresholds, incentive payments, extended thresholds,
//! and complete auction outcomes over matroid or explicit-family instances.
//!
//! All edited instances (an item deleted, a set of items made free) are
//! realized through exclusion and zero sets, so the arithmetic never sees
//! an infinity; an infeasible edit surfaces as [`ExtCost::Infinite`].

use serde::{Deserialize, Serialize};

use crate::matroid::{enumerate_bases, greedy_min_basis_edited, Matroid};
use crate::set_system::{min_structure, StructureFamily};
use crate::{Error, ExtCost, Result, Scalar};
use crate::{GraphicMatroidSpec, UniformMatroidSpec};

/// Enumeration guard for the brute-force oracle.
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// The set system side of an instance: matroid bases or an explicit family.
#[derive(Clone, Debug)]
pub enum System {
    Matroid(Matroid),
    Family(StructureFamily),
}

impl System {
    pub fn ground_size(&self) -> usize {
        match self {
            System::Matroid(m) => m.ground_size(),
            System::Family(f) => f.ground_size(),
        }
    }

    pub fn as_matroid(&self) -> Option<&Matroid> {
        match self {
            System::Matroid(m) => Some(m),
            System::Family(_) => None,
        }
    }

    pub fn as_family(&self) -> Option<&StructureFamily> {
        match self {
            System::Family(f) => Some(f),
            System::Matroid(_) => None,
        }
    }

    /// Items whose deletion leaves nothing feasible: matroid bridges, or
    /// family items present in every structure. These force an infinite
    /// VCG total.
    pub fn blocking_items(&self) -> Vec<usize> {
        match self {
            System::Matroid(m) => m.ground_bridges(),
            System::Family(f) => f.universal_items(),
        }
    }

    /// Serializable description; `None` for custom rank oracles.
    pub fn spec(&self) -> Option<SystemSpec> {
        match self {
            System::Matroid(m) => match m.kind() {
                crate::MatroidKind::Uniform => Some(SystemSpec::Uniform(UniformMatroidSpec {
                    n: m.ground_size(),
                    k: m.uniform_k().expect("uniform matroid has k"),
                })),
                crate::MatroidKind::Graphic => {
                    Some(SystemSpec::Graphic(m.graph().expect("graphic matroid has graph").clone()))
                }
                crate::MatroidKind::Custom => None,
            },
            System::Family(f) => Some(SystemSpec::Family(f.clone())),
        }
    }
}

/// Serializable system description, tagged by `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SystemSpec {
    Uniform(UniformMatroidSpec),
    Graphic(GraphicMatroidSpec),
    Family(StructureFamily),
}

impl SystemSpec {
    pub fn build(&self) -> Result<System> {
        Ok(match self {
            SystemSpec::Uniform(u) => System::Matroid(Matroid::uniform(u.clone())?),
            SystemSpec::Graphic(g) => System::Matroid(Matroid::graphic(g.clone())?),
            SystemSpec::Family(f) => System::Family(f.clone()),
        })
    }
}

impl Serialize for System {
    fn serialize<Se: serde::Serializer>(&self, serializer: Se) -> std::result::Result<Se::Ok, Se::Error> {
        match self.spec() {
            Some(spec) => spec.serialize(serializer),
            None => Err(serde::ser::Error::custom(Error::UnserializableSystem)),
        }
    }
}

impl<'de> Deserialize<'de> for System {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let spec = SystemSpec::deserialize(deserializer)?;
        spec.build().map_err(serde::de::Error::custom)
    }
}

/// A procurement auction instance: system plus per-item costs.
#[derive(Clone, Debug, Serialize)]
pub struct Instance<S: Scalar> {
    system: System,
    costs: Vec<S>,
}

impl<'de, S: Scalar + Deserialize<'de>> Deserialize<'de> for Instance<S> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw<S> {
            system: System,
            costs: Vec<S>,
        }
        let raw = Raw::<S>::deserialize(deserializer)?;
        Instance::new(raw.system, raw.costs).map_err(serde::de::Error::custom)
    }
}

impl<S: Scalar> Instance<S> {
    pub fn new(system: System, costs: Vec<S>) -> Result<Self> {
        if costs.len() != system.ground_size() {
            return Err(Error::InvalidParameter(format!(
                "cost vector has length {}, ground set has {}",
                costs.len(),
                system.ground_size()
            )));
        }
        for &c in &costs {
            if !c.is_finite() || c < S::zero() {
                return Err(Error::InvalidParameter(
                    "costs must be finite and non-negative".into(),
                ));
            }
        }
        Ok(Instance { system, costs })
    }

    pub fn system(&self) -> &System {
        &self.system
    }

    pub fn costs(&self) -> &[S] {
        &self.costs
    }

    pub fn ground_size(&self) -> usize {
        self.costs.len()
    }

    /// Same system, different costs.
    pub fn with_costs(&self, costs: Vec<S>) -> Result<Self> {
        Instance::new(self.system.clone(), costs)
    }

    pub fn from_json(text: &str) -> Result<Self>
    where
        S: serde::de::DeserializeOwned,
    {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String>
    where
        S: Serialize,
    {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Minimum cost after edits, via greedy for matroids and brute force
    /// for explicit families.
    pub fn min_cost_edited(&self, excluded: &[usize], zeroed: &[usize]) -> Result<ExtCost<S>> {
        match &self.system {
            System::Matroid(m) => {
                match greedy_min_basis_edited(m, &self.costs, excluded, zeroed) {
                    Ok(b) => Ok(ExtCost::Finite(b.cost)),
                    Err(Error::NoFiniteBasis) => Ok(ExtCost::Infinite),
                    Err(e) => Err(e),
                }
            }
            System::Family(f) => {
                crate::set_system::min_cost_edited(f, &self.costs, excluded, zeroed)
            }
        }
    }

    /// The minimum structure and its nominal cost.
    pub fn min_structure(&self) -> Result<(Vec<usize>, S)> {
        match &self.system {
            System::Matroid(m) => {
                let b = greedy_min_basis_edited(m, &self.costs, &[], &[])?;
                Ok((b.elements, b.cost))
            }
            System::Family(f) => min_structure(f, &self.costs, &[], &[])?
                .ok_or(Error::EmptyFamily),
        }
    }
}

/// Full auction outcome. `threshold[a]` is the VCG threshold of item `a`;
/// selected items are paid their threshold, others nothing. `vcg_total`
/// sums the payments over the minimum structure and `overpayment` sums
/// the positive parts of threshold minus cost, so
/// `vcg_total = nominal_cost + overpayment` up to rounding. A non-empty
/// `bridges` list flags an infinite total.
#[derive(Clone, Debug, Serialize)]
pub struct AuctionOutcome<S: Scalar> {
    pub min_structure: Vec<usize>,
    pub nominal_cost: S,
    pub threshold: Vec<ExtCost<S>>,
    pub payment: Vec<ExtCost<S>>,
    pub incentive: Vec<ExtCost<S>>,
    pub vcg_total: ExtCost<S>,
    pub overpayment: ExtCost<S>,
    pub bridges: Vec<usize>,
}

impl<S: Scalar> AuctionOutcome<S> {
    pub fn is_selected(&self, a: usize) -> bool {
        self.min_structure.binary_search(&a).is_ok()
    }
}

/// Per-item edit engine: minimum cost of the instance with `excluded`
/// items deleted and `zeroed` items free.
trait EditOracle<S: Scalar> {
    fn min_cost(&self, excluded: &[usize], zeroed: &[usize]) -> Result<ExtCost<S>>;
    fn base_structure(&self) -> Result<(Vec<usize>, S)>;
}

struct GreedyOracle<'a, S: Scalar>(&'a Instance<S>);

impl<'a, S: Scalar> EditOracle<S> for GreedyOracle<'a, S> {
    fn min_cost(&self, excluded: &[usize], zeroed: &[usize]) -> Result<ExtCost<S>> {
        self.0.min_cost_edited(excluded, zeroed)
    }
    fn base_structure(&self) -> Result<(Vec<usize>, S)> {
        self.0.min_structure()
    }
}

/// Exhaustive oracle: min over an explicit structure list, no greedy
/// shortcuts anywhere.
struct EnumOracle<'a, S: Scalar> {
    structures: Vec<Vec<usize>>,
    costs: &'a [S],
}

impl<'a, S: Scalar> EnumOracle<'a, S> {
    fn scan(&self, excluded: &[usize], zeroed: &[usize]) -> Option<(Vec<usize>, S)> {
        let mut best: Option<(&Vec<usize>, S)> = None;
        for s in &self.structures {
            if s.iter().any(|a| excluded.contains(a)) {
                continue;
            }
            let cost = s
                .iter()
                .map(|&a| if zeroed.contains(&a) { S::zero() } else { self.costs[a] })
                .fold(S::zero(), |acc, c| acc + c);
            let better = match &best {
                None => true,
                Some((cur, cur_cost)) => cost < *cur_cost || (cost == *cur_cost && s < *cur),
            };
            if better {
                best = Some((s, cost));
            }
        }
        best.map(|(s, c)| (s.clone(), c))
    }
}

impl<'a, S: Scalar> EditOracle<S> for EnumOracle<'a, S> {
    fn min_cost(&self, excluded: &[usize], zeroed: &[usize]) -> Result<ExtCost<S>> {
        Ok(match self.scan(excluded, zeroed) {
            Some((_, c)) => ExtCost::Finite(c),
            None => ExtCost::Infinite,
        })
    }
    fn base_structure(&self) -> Result<(Vec<usize>, S)> {
        self.scan(&[], &[]).ok_or(Error::EmptyFamily)
    }
}

/// VCG threshold of item `a`: minimum cost with `a` deleted minus minimum
/// cost with `a` free. Infinite exactly when no structure avoids `a`.
/// The value does not depend on `c(a)`.
pub fn vcg_threshold<S: Scalar>(instance: &Instance<S>, a: usize) -> Result<ExtCost<S>> {
    check_item(instance, a)?;
    let deleted = instance.min_cost_edited(&[a], &[])?;
    let freed = instance
        .min_cost_edited(&[], &[a])?
        .expect_finite("instance with a zeroed item stays feasible");
    Ok(deleted.sub_finite(freed))
}

/// Incentive payment of item `a`: minimum cost with `a` deleted minus the
/// unedited minimum cost. Zero for unselected items, positive for items
/// of a unique minimum structure.
pub fn incentive_payment<S: Scalar>(instance: &Instance<S>, a: usize) -> Result<ExtCost<S>> {
    check_item(instance, a)?;
    let deleted = instance.min_cost_edited(&[a], &[])?;
    let (_, base) = instance.min_structure()?;
    Ok(deleted.sub_finite(base))
}

/// Extended VCG threshold `v(F, a)`: with the rest of `F` made free,
/// the minimum cost avoiding `a` minus the minimum cost with all of `F`
/// free. Requires `a` in `F`, and `F` independent for matroids. The value
/// does not depend on the costs inside `F`.
pub fn extended_threshold<S: Scalar>(
    instance: &Instance<S>,
    f_set: &[usize],
    a: usize,
) -> Result<ExtCost<S>> {
    check_item(instance, a)?;
    let mut f_sorted = f_set.to_vec();
    f_sorted.sort_unstable();
    f_sorted.dedup();
    if f_sorted.len() != f_set.len() {
        return Err(Error::InvalidParameter("F must have distinct items".into()));
    }
    if !f_sorted.contains(&a) {
        return Err(Error::InvalidParameter(format!("item {a} is not in F")));
    }
    if let System::Matroid(m) = &instance.system {
        if !m.is_independent(&f_sorted)? {
            return Err(Error::DependentSet(f_sorted));
        }
    }
    let others: Vec<usize> = f_sorted.iter().copied().filter(|&b| b != a).collect();
    let left = instance.min_cost_edited(&[a], &others)?;
    let right = instance
        .min_cost_edited(&[], &f_sorted)?
        .expect_finite("instance with zeroed items stays feasible");
    Ok(left.sub_finite(right))
}

fn check_item<S: Scalar>(instance: &Instance<S>, a: usize) -> Result<()> {
    if a >= instance.ground_size() {
        return Err(Error::ElementOutOfRange {
            index: a,
            ground_size: instance.ground_size(),
        });
    }
    Ok(())
}

fn assemble_outcome<S: Scalar>(
    instance: &Instance<S>,
    oracle: &dyn EditOracle<S>,
) -> Result<AuctionOutcome<S>> {
    let n = instance.ground_size();
    let (min_structure, nominal_cost) = oracle.base_structure()?;

    let mut threshold = Vec::with_capacity(n);
    let mut incentive = Vec::with_capacity(n);
    let mut payment = Vec::with_capacity(n);
    let mut bridges = Vec::new();

    for a in 0..n {
        let deleted = oracle.min_cost(&[a], &[])?;
        let freed = oracle
            .min_cost(&[], &[a])?
            .expect_finite("instance with a zeroed item stays feasible");
        let thr = deleted.sub_finite(freed);
        let inc = deleted.sub_finite(nominal_cost);
        if deleted.is_infinite() {
            bridges.push(a);
        }
        let selected = min_structure.binary_search(&a).is_ok();
        payment.push(if selected { thr } else { ExtCost::Finite(S::zero()) });
        threshold.push(thr);
        incentive.push(inc);
    }

    // Totals per the definitions: the VCG total sums payments over the
    // minimum structure; the overpayment sums positive threshold-cost gaps.
    let mut vcg_total = ExtCost::Finite(S::zero());
    for &a in &min_structure {
        vcg_total = match (vcg_total, threshold[a]) {
            (ExtCost::Finite(acc), ExtCost::Finite(t)) => ExtCost::Finite(acc + t),
            _ => ExtCost::Infinite,
        };
    }
    let mut overpayment = ExtCost::Finite(S::zero());
    for a in 0..n {
        overpayment = match (overpayment, threshold[a]) {
            (ExtCost::Finite(acc), ExtCost::Finite(t)) => {
                let gap = t - instance.costs[a];
                ExtCost::Finite(acc + if gap > S::zero() { gap } else { S::zero() })
            }
            _ => ExtCost::Infinite,
        };
    }

    Ok(AuctionOutcome {
        min_structure,
        nominal_cost,
        threshold,
        payment,
        incentive,
        vcg_total,
        overpayment,
        bridges,
    })
}

/// Runs the auction: greedy minimization for matroids, brute force for
/// explicit families. A bridged matroid yields an outcome with an
/// infinite total and the bridge list instead of an error.
pub fn run_auction<S: Scalar>(instance: &Instance<S>) -> Result<AuctionOutcome<S>> {
    assemble_outcome(instance, &GreedyOracle(instance))
}

/// Independent cross-check: identical contract to [`run_auction`], but
/// every minimization scans an explicit structure list (all bases of the
/// matroid, or the family itself). Guarded to 20 items.
pub fn brute_force_outcome<S: Scalar>(instance: &Instance<S>) -> Result<AuctionOutcome<S>> {
    let n = instance.ground_size();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::EnumerationGuard {
            size: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let structures = match &instance.system {
        System::Matroid(m) => enumerate_bases(m, BRUTE_FORCE_LIMIT)?,
        System::Family(f) => f.structures().to_vec(),
    };
    let oracle = EnumOracle {
        structures,
        costs: &instance.costs,
    };
    assemble_outcome(instance, &oracle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{GraphicMatroidSpec, Matroid, UniformMatroidSpec};

    fn k3_instance(costs: [f64; 3]) -> Instance<f64> {
        let m = Matroid::graphic(GraphicMatroidSpec {
            vertex_count: 3,
            edges: vec![(0, 1), (0, 2), (1, 2)],
        })
        .unwrap();
        Instance::new(System::Matroid(m), costs.to_vec()).unwrap()
    }

    #[test]
    fn k3_thresholds_and_outcome() {
        let inst = k3_instance([0.2, 0.5, 0.7]);
        assert_eq!(vcg_threshold(&inst, 0).unwrap(), ExtCost::Finite(0.7));
        assert_eq!(incentive_payment(&inst, 0).unwrap().finite().unwrap(), 0.5);
        assert_eq!(incentive_payment(&inst, 2).unwrap().finite().unwrap(), 0.0);

        let out = run_auction(&inst).unwrap();
        assert_eq!(out.min_structure, vec![0, 1]);
        assert!((out.nominal_cost - 0.7).abs() < 1e-12);
        assert_eq!(out.payment[0].finite().unwrap(), 0.7);
        assert_eq!(out.payment[1].finite().unwrap(), 0.7);
        assert_eq!(out.payment[2].finite().unwrap(), 0.0);
        assert!((out.vcg_total.finite().unwrap() - 1.4).abs() < 1e-12);
        assert!((out.overpayment.finite().unwrap() - 0.7).abs() < 1e-12);
        assert!(out.bridges.is_empty());
    }

    #[test]
    fn tree_edge_threshold_is_infinite() {
        let m = Matroid::graphic(GraphicMatroidSpec::path(3).unwrap()).unwrap();
        let inst = Instance::new(System::Matroid(m), vec![0.3, 0.4]).unwrap();
        assert_eq!(vcg_threshold(&inst, 0).unwrap(), ExtCost::Infinite);
        let out = run_auction(&inst).unwrap();
        assert_eq!(out.bridges, vec![0, 1]);
        assert!(out.vcg_total.is_infinite());
        assert!(out.overpayment.is_infinite());
    }

    #[test]
    fn uniform_thresholds_are_order_statistics() {
        // threshold = (k+1)-th cheapest for selected items, k-th otherwise
        let m = Matroid::uniform(UniformMatroidSpec { n: 4, k: 2 }).unwrap();
        let costs = vec![0.4f64, 0.1, 0.3, 0.2];
        let inst = Instance::new(System::Matroid(m), costs).unwrap();
        let out = run_auction(&inst).unwrap();
        assert_eq!(out.min_structure, vec![1, 3]);
        assert!((out.threshold[1].finite().unwrap() - 0.3).abs() < 1e-12);
        assert!((out.threshold[3].finite().unwrap() - 0.3).abs() < 1e-12);
        assert!((out.threshold[0].finite().unwrap() - 0.2).abs() < 1e-12);
        assert!((out.threshold[2].finite().unwrap() - 0.2).abs() < 1e-12);
        assert!((out.vcg_total.finite().unwrap() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn u31_incentive_is_gap_to_runner_up() {
        let m = Matroid::uniform(UniformMatroidSpec { n: 3, k: 1 }).unwrap();
        let inst = Instance::new(System::Matroid(m), vec![0.3f64, 0.6, 0.9]).unwrap();
        assert!((incentive_payment(&inst, 0).unwrap().finite().unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn k3_path_outcome_matches_closed_form() {
        let inst =
            Instance::new(System::Family(StructureFamily::k3_path()), vec![0.5f64, 0.2, 0.2]).unwrap();
        let out = run_auction(&inst).unwrap();
        assert!((out.nominal_cost - 0.4).abs() < 1e-12);
        // VCG total = max(X2+X3, 2*X1-X2-X3)
        assert!((out.vcg_total.finite().unwrap() - 0.6).abs() < 1e-12);
        assert_eq!(out.min_structure, vec![1, 2]);
    }

    #[test]
    fn extended_threshold_reduces_to_simple() {
        let inst = k3_instance([0.2, 0.5, 0.7]);
        for a in 0..3 {
            assert_eq!(
                extended_threshold(&inst, &[a], a).unwrap(),
                vcg_threshold(&inst, a).unwrap()
            );
        }
        // F = S* = {0, 1}: extended equals simple for both members.
        assert_eq!(extended_threshold(&inst, &[0, 1], 0).unwrap(), ExtCost::Finite(0.7));
        assert_eq!(extended_threshold(&inst, &[0, 1], 1).unwrap(), ExtCost::Finite(0.7));
    }

    #[test]
    fn extended_threshold_rejects_dependent_sets() {
        let inst = k3_instance([0.2, 0.5, 0.7]);
        assert!(matches!(
            extended_threshold(&inst, &[0, 1, 2], 0),
            Err(Error::DependentSet(_))
        ));
        assert!(extended_threshold(&inst, &[1], 0).is_err());
    }

    #[test]
    fn threshold_is_independent_of_own_cost() {
        let base = k3_instance([0.2, 0.5, 0.7]);
        let t0 = vcg_threshold(&base, 0).unwrap();
        for c0 in [0.01, 0.35, 0.69] {
            let inst = k3_instance([c0, 0.5, 0.7]);
            assert_eq!(vcg_threshold(&inst, 0).unwrap(), t0);
        }
    }

    #[test]
    fn brute_force_agrees_on_fixtures() {
        let inst = k3_instance([0.2, 0.5, 0.7]);
        let a = run_auction(&inst).unwrap();
        let b = brute_force_outcome(&inst).unwrap();
        assert_eq!(a.min_structure, b.min_structure);
        assert!((a.nominal_cost - b.nominal_cost).abs() < 1e-12);
        for i in 0..3 {
            assert_eq!(a.threshold[i], b.threshold[i]);
            assert_eq!(a.payment[i], b.payment[i]);
            assert_eq!(a.incentive[i], b.incentive[i]);
        }
        let fam =
            Instance::new(System::Family(StructureFamily::k3_path()), vec![0.5, 0.2, 0.2]).unwrap();
        let a = run_auction(&fam).unwrap();
        let b = brute_force_outcome(&fam).unwrap();
        assert_eq!(a.min_structure, b.min_structure);
        assert_eq!(a.vcg_total, b.vcg_total);
    }

    #[test]
    fn brute_force_size_guard() {
        let m = Matroid::uniform(UniformMatroidSpec { n: 21, k: 3 }).unwrap();
        let inst = Instance::new(System::Matroid(m), vec![0.5; 21]).unwrap();
        assert!(matches!(
            brute_force_outcome(&inst),
            Err(Error::EnumerationGuard { .. })
        ));
    }

    #[test]
    fn instance_json_round_trip() {
        let inst = k3_instance([0.2, 0.5, 0.7]);
        let text = inst.to_json().unwrap();
        let back: Instance<f64> = Instance::from_json(&text).unwrap();
        assert_eq!(back.costs(), inst.costs());
        assert!(back.system().as_matroid().is_some());

        let fam = Instance::new(
            System::Family(StructureFamily::k3_path()),
            vec![0.1, 0.2, 0.3],
        )
        .unwrap();
        let text = fam.to_json().unwrap();
        let back: Instance<f64> = Instance::from_json(&text).unwrap();
        assert!(back.system().as_family().is_some());

        // Validation runs on deserialization.
        let bad = r#"{"system":{"kind":"uniform","n":4,"k":2},"costs":[0.1,0.2,0.3]}"#;
        assert!(Instance::<f64>::from_json(bad).is_err());
    }

    #[test]
    fn instance_rejects_negative_costs() {
        let m = Matroid::uniform(UniformMatroidSpec { n: 2, k: 1 }).unwrap();
        assert!(Instance::new(System::Matroid(m), vec![-0.1, 0.2]).is_err());
    }
}
