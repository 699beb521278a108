//! Valuations centered on prime ideals, their vertical generizations and
//! horizontal specializations, and the pseudo-archimedean classification.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::growth::RealGrowth;
use crate::internal::{element_value, ConvexSubgroup, IndexedElement, LexValue, OrderedGroupModel, PrimeIdeal};
use crate::prime::Prime;
use crate::Decision;

/// A `p`-adic valuation of rank `rank` (1 on `ℚ`, 2 on `*ℚ`) restricted to
/// the convex subgroup of rank `restrict` and then divided by the one of
/// rank `quotient`, so `quotient ≤ restrict ≤ rank`. The value group is
/// `ℤ^(restrict − quotient)` ordered lexicographically.
///
/// Values outside the restricting subgroup become `∞`; this is a valuation
/// on the ring of elements of nonnegative value.
#[derive(Clone, Debug, Serialize)]
pub struct Valuation {
    center_prime: Option<Prime>,
    rank: usize,
    restrict: usize,
    quotient: usize,
}

/// Label identifying a valuation up to equality of assignments.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Key {
    Trivial(PrimeIdeal),
    Proper(Prime, usize, usize, usize),
}

impl PartialEq for Valuation {
    fn eq(&self, other: &Valuation) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Valuation {}

impl Valuation {
    /// The trivial valuation: `0` on nonzero elements.
    pub fn trivial() -> Valuation {
        Valuation { center_prime: None, rank: 0, restrict: 0, quotient: 0 }
    }

    /// The `p`-adic valuation of rank 1 (`ℤ`) or 2 (`ℤω ⊕ ℤ`).
    pub fn padic(p: Prime, rank: usize) -> Valuation {
        assert!((1..=2).contains(&rank), "rank 1 or 2");
        Valuation { center_prime: Some(p), rank, restrict: rank, quotient: 0 }
    }

    pub fn prime(&self) -> Option<&Prime> {
        self.center_prime.as_ref()
    }

    /// `(rank, restrict, quotient)`.
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.rank, self.restrict, self.quotient)
    }

    pub fn is_trivial(&self) -> bool {
        self.restrict == self.quotient
    }

    pub fn group(&self) -> OrderedGroupModel {
        match self.restrict - self.quotient {
            1 => OrderedGroupModel::Z,
            k => OrderedGroupModel::LexZ(k),
        }
    }

    fn level(&self, l: usize) -> PrimeIdeal {
        match &self.center_prime {
            Some(p) if l < self.rank => PrimeIdeal::AtPrime { prime: p.clone(), rank: self.rank, level: l },
            _ => PrimeIdeal::Zero,
        }
    }

    /// Preimage of `∞`.
    pub fn support(&self) -> PrimeIdeal {
        self.level(self.restrict)
    }

    /// `{x : v(x) > 0}` on the ring.
    pub fn center(&self) -> PrimeIdeal {
        self.level(self.quotient)
    }

    fn key(&self) -> Key {
        if self.is_trivial() {
            Key::Trivial(self.support())
        } else {
            Key::Proper(self.center_prime.clone().unwrap(), self.rank, self.restrict, self.quotient)
        }
    }

    /// Pushes a value of the base valuation through restriction and quotient.
    fn project(&self, v: LexValue) -> LexValue {
        let v = v?;
        let cut = self.rank - self.restrict;
        if v[..cut].iter().any(|&x| x != 0) {
            return None;
        }
        Some(v[cut..self.rank - self.quotient].to_vec())
    }

    pub fn eval(&self, x: &IndexedElement) -> Decision<LexValue> {
        match &self.center_prime {
            None => match x.to_exp_poly() {
                Some(e) if e.is_zero() => Decision::Decided(None),
                Some(_) => Decision::Decided(Some(Vec::new())),
                None => Decision::Undecidable,
            },
            Some(p) => element_value(x, p, self.rank).map(|v| self.project(v)),
        }
    }

    /// Value of the ideal with divisor `d` in the rank-1 model.
    pub fn eval_divisor(&self, d: &Divisor) -> Result<LexValue> {
        let p = match (&self.center_prime, self.rank) {
            (Some(p), 1) => p,
            (None, _) => return Ok(Some(Vec::new())),
            _ => return Err(Error::Invalid("divisors are valued in the rank-1 model".into())),
        };
        Ok(self.project(Some(vec![d.exponent(p)])))
    }

    /// Membership in the valuation ring `{x : v(x) ≥ 0}`.
    pub fn in_ring(&self, x: &IndexedElement) -> Decision<bool> {
        self.eval(x).map(|v| v.is_none_or(|v| v.iter().find(|&&c| c != 0).is_none_or(|&c| c > 0)))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.center_prime {
            None => f.write_str("trivial"),
            Some(p) if (self.rank, self.restrict, self.quotient) == (1, 1, 0) => write!(f, "v_{p}"),
            Some(p) => write!(f, "v_{p}[{},{},{}]", self.rank, self.restrict, self.quotient),
        }
    }
}

/// The valuation whose center is `p`; the zero ideal gives the trivial
/// valuation.
pub fn valuation_from_prime(p: &PrimeIdeal) -> Valuation {
    match p {
        PrimeIdeal::Zero => Valuation::trivial(),
        PrimeIdeal::AtPrime { prime, rank, level } => {
            Valuation { center_prime: Some(prime.clone()), rank: *rank, restrict: *rank, quotient: *level }
        }
    }
}

/// Whether the center of `valuation_from_prime(p)` is `p` again and the
/// membership predicates agree on `samples` wherever both are decidable.
pub fn spec_rz_roundtrip(p: &PrimeIdeal, samples: &[IndexedElement]) -> bool {
    let v = valuation_from_prime(p);
    if v.center() != *p {
        return false;
    }
    samples.iter().all(|x| {
        let by_value = v.eval(x).map(|val| val.is_none_or(|val| val.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)));
        match (p.contains(x), by_value) {
            (Decision::Decided(a), Decision::Decided(b)) => a == b,
            _ => true,
        }
    })
}

fn check_subgroup(v: &Valuation, u: &ConvexSubgroup) -> Result<()> {
    if u.group.rank() != v.restrict - v.quotient || u.rank > u.group.rank() {
        return Err(Error::NotConvex);
    }
    Ok(())
}

/// `v / U`: values taken modulo the convex subgroup `U`.
pub fn vertical_generization(v: &Valuation, u: &ConvexSubgroup) -> Result<Valuation> {
    check_subgroup(v, u)?;
    Ok(Valuation { quotient: v.quotient + u.rank, ..v.clone() })
}

/// `v|_U`: values outside `U` sent to `∞`.
pub fn horizontal_specialization(v: &Valuation, u: &ConvexSubgroup) -> Result<Valuation> {
    check_subgroup(v, u)?;
    Ok(Valuation { restrict: v.quotient + u.rank, ..v.clone() })
}

/// The smallest nonzero convex subgroup of the value group.
pub fn smallest_segment(v: &Valuation) -> Option<ConvexSubgroup> {
    (!v.is_trivial()).then(|| ConvexSubgroup { group: v.group(), rank: 1 })
}

/// For valuations of the field (no restriction), `R_v ⊆ R_w`.
pub fn specializes(v: &Valuation, w: &Valuation) -> bool {
    if w.is_trivial() && w.support() == PrimeIdeal::Zero {
        return true;
    }
    v.center_prime == w.center_prime
        && v.rank == w.rank
        && v.restrict == v.rank
        && w.restrict == w.rank
        && v.quotient <= w.quotient
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Move {
    Vertical,
    Horizontal,
}

/// Valuations reachable from a rank-2 valuation by one-step moves, with
/// edges pointing from generization to specialization.
#[derive(Clone, Debug, Serialize)]
pub struct Diagram {
    pub nodes: BTreeMap<String, NodeInfo>,
    pub edges: Vec<(String, String, Move)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NodeInfo {
    pub support: String,
    pub center: String,
    pub group_rank: usize,
    #[serde(skip)]
    pub valuation: Valuation,
}

/// Names used for the six valuations of the rank-2 picture.
pub fn node_label(v: &Valuation) -> String {
    if v.rank != 2 {
        return v.to_string();
    }
    match (v.restrict, v.quotient) {
        (2, 0) => "v".into(),
        (2, 1) => "v/Z".into(),
        (2, 2) => "v_L,triv".into(),
        (1, 0) => "v|Z".into(),
        (1, 1) => "v_kp,triv".into(),
        (0, 0) => "v_km,triv".into(),
        _ => v.to_string(),
    }
}

/// Closes `{v}` under vertical generization and horizontal specialization
/// by the smallest nonzero segment.
pub fn specialization_diagram(v: &Valuation) -> Diagram {
    let mut nodes: BTreeMap<String, NodeInfo> = BTreeMap::new();
    let mut edges = Vec::new();
    let mut todo = vec![v.clone()];
    while let Some(x) = todo.pop() {
        let label = node_label(&x);
        if nodes.contains_key(&label) {
            continue;
        }
        nodes.insert(
            label.clone(),
            NodeInfo {
                support: support_column(&x.support()),
                center: x.center().to_string(),
                group_rank: x.restrict - x.quotient,
                valuation: x.clone(),
            },
        );
        if let Some(seg) = smallest_segment(&x) {
            let g = vertical_generization(&x, &seg).expect("segment of own group");
            edges.push((node_label(&g), label.clone(), Move::Vertical));
            todo.push(g);
            let below = ConvexSubgroup { group: x.group(), rank: x.group().rank() - 1 };
            let s = horizontal_specialization(&x, &below).expect("segment of own group");
            edges.push((label.clone(), node_label(&s), Move::Horizontal));
            todo.push(s);
        }
    }
    edges.sort();
    edges.dedup();
    Diagram { nodes, edges }
}

/// Column names: `(0)`, `p` for `𝔪^∞`, `m` for `𝔪`.
fn support_column(p: &PrimeIdeal) -> String {
    match p {
        PrimeIdeal::Zero => "(0)".into(),
        PrimeIdeal::AtPrime { level: 0, .. } => "m".into(),
        PrimeIdeal::AtPrime { .. } => "p".into(),
    }
}

impl Diagram {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph specialization {\n  rankdir=TB;\n");
        for (i, column) in ["(0)", "p", "m"].iter().enumerate() {
            out.push_str(&format!("  subgraph cluster_{i} {{\n    label=\"support {column}\";\n"));
            for (name, info) in &self.nodes {
                if info.support == *column {
                    out.push_str(&format!("    \"{name}\";\n"));
                }
            }
            out.push_str("  }\n");
        }
        for (a, b, m) in &self.edges {
            let style = match m {
                Move::Vertical => "solid",
                Move::Horizontal => "dashed",
            };
            out.push_str(&format!("  \"{a}\" -> \"{b}\" [style={style}];\n"));
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PseudoArch {
    Finite,
    Infinitesimal,
    Infinite,
    Undecidable,
}

/// Size of `|x_i|` along the Fréchet filter.
pub fn pseudo_arch_classify(x: &IndexedElement) -> Result<PseudoArch> {
    let Some(e) = x.to_exp_poly() else {
        return Ok(PseudoArch::Undecidable);
    };
    Ok(match e.real_growth() {
        RealGrowth::Zero => return Err(Error::ZeroElement),
        RealGrowth::Vanishing => PseudoArch::Infinitesimal,
        RealGrowth::Converges(_) | RealGrowth::Oscillating => PseudoArch::Finite,
        RealGrowth::Unbounded => PseudoArch::Infinite,
        RealGrowth::Undecidable => PseudoArch::Undecidable,
    })
}
