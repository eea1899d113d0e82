//! Quasi-isometries between marked groups.
//!
//! A [`QIMap`] evaluates exactly on normal forms and also enumerates full
//! fibers exactly, which is what window bookkeeping (interior flags, matching
//! margins) relies on. Distortion audits check
//! `d(x,y)/K − C ≤ d(f x, f y) ≤ K·d(x,y) + C` exhaustively over a window.

use std::fmt;
use std::io::Write;

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::ball::{Ball, WordMetric};
use crate::bs::BsModel;
use crate::element::GroupElement;
use crate::error::{Error, Result};
use crate::group::{Family, MarkedGroup, Marking};

pub type Exact = Ratio<i64>;

/// Multiplicative and additive constants `(K, C)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Constants {
    pub k: Exact,
    pub c: Exact,
}

impl Constants {
    pub fn new(k: i64, c: i64) -> Self {
        Constants {
            k: Exact::from_integer(k),
            c: Exact::from_integer(c),
        }
    }

    /// Constants of `outer ∘ inner`: `(K_o·K_i, K_o·C_i + C_o)`.
    pub fn compose(outer: Constants, inner: Constants) -> Constants {
        Constants {
            k: outer.k * inner.k,
            c: outer.k * inner.c + outer.c,
        }
    }
}

#[derive(Clone, Debug)]
pub enum MapRule {
    Identity,
    /// Floor division by `n` along one coordinate, in the source's own
    /// coordinates (so on `2Z` it acts on `k` for the element `2k`).
    Floor { n: u64, coord: usize },
    /// Subgroup inclusion; normal forms are unchanged.
    Inclusion,
    /// Isomorphism from a sublattice onto the standard group, dividing the
    /// scaled coordinate by the index.
    Contract { coord: usize, index: u64 },
    Compose { outer: Box<QIMap>, inner: Box<QIMap> },
    /// `g'·g_i ↦ f(g')` for a bijection `f: G' → G` and coset representatives.
    CosetExtension { part: Box<QIMap>, reps: Vec<GroupElement> },
    /// `Z × Z/k → Z`, `(a, r) ↦ a`.
    Projection,
    /// `Z × Z/k → Z`, `(a, r) ↦ k·a + r`.
    Chart,
    /// The coset-wise floor map `f_C` on `BS(1,m)`.
    BsFloor { n: u64 },
}

#[derive(Clone, Debug)]
pub struct QIMap {
    name: String,
    source: MarkedGroup,
    target: MarkedGroup,
    rule: MapRule,
    claimed: Constants,
    fiber: Option<u64>,
}

impl fmt::Display for QIMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

fn lattice_scale(group: &MarkedGroup, coord: usize) -> i64 {
    match group.marking() {
        Marking::Sublattice { coord: c, index } if c == coord => index as i64,
        _ => 1,
    }
}

impl QIMap {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &MarkedGroup {
        &self.source
    }

    pub fn target(&self) -> &MarkedGroup {
        &self.target
    }

    pub fn rule(&self) -> &MapRule {
        &self.rule
    }

    pub fn claimed(&self) -> Constants {
        self.claimed
    }

    /// Claimed uniform fiber size, when the map is n-to-1.
    pub fn fiber(&self) -> Option<u64> {
        self.fiber
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_claimed(mut self, claimed: Constants) -> Self {
        self.claimed = claimed;
        self
    }

    pub fn identity(group: &MarkedGroup) -> QIMap {
        QIMap {
            name: format!("id:{group}"),
            source: group.clone(),
            target: group.clone(),
            rule: MapRule::Identity,
            claimed: Constants::new(1, 0),
            fiber: Some(1),
        }
    }

    /// Evaluates `f(x)`.
    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        match &self.rule {
            MapRule::Identity | MapRule::Inclusion => x.clone(),
            MapRule::Floor { n, coord } => {
                let mut v = x.coords().expect("floor acts on lattices").to_vec();
                let s = lattice_scale(&self.source, *coord);
                let c = &mut v[coord - 1];
                *c = s * Integer::div_floor(&(*c / s), &(*n as i64));
                GroupElement::Lattice(v)
            }
            MapRule::Contract { coord, index } => match x {
                GroupElement::Lattice(v) => {
                    let mut v = v.clone();
                    v[coord - 1] /= *index as i64;
                    GroupElement::Lattice(v)
                }
                GroupElement::Cyclic { int, residue } => GroupElement::Cyclic {
                    int: int / *index as i64,
                    residue: *residue,
                },
                _ => unreachable!("contract acts on lattices"),
            },
            MapRule::Compose { outer, inner } => outer.apply(&inner.apply(x)),
            MapRule::CosetExtension { part, reps } => {
                let g = &self.source;
                for r in reps {
                    let core = g.multiply(x, &g.inverse(r));
                    if part.source.contains(&core) {
                        return part.apply(&core);
                    }
                }
                unreachable!("coset representatives were checked to cover every coset")
            }
            MapRule::Projection => match x {
                GroupElement::Cyclic { int, .. } => GroupElement::Lattice(vec![*int]),
                _ => unreachable!("projection acts on ZxCk"),
            },
            MapRule::Chart => match (x, self.source.family()) {
                (GroupElement::Cyclic { int, residue }, Family::DirectWithCyclic(k)) => {
                    GroupElement::Lattice(vec![k as i64 * int + *residue as i64])
                }
                _ => unreachable!("chart acts on ZxCk"),
            },
            MapRule::BsFloor { n } => self.bs_model().f_c(*n, x),
        }
    }

    fn bs_model(&self) -> BsModel {
        BsModel::from_group(&self.source).expect("BS source")
    }

    /// The full fiber `f⁻¹(y)` in the source group, sorted.
    pub fn preimages(&self, y: &GroupElement) -> Vec<GroupElement> {
        if !self.target.contains(y) {
            return Vec::new();
        }
        let mut out = match &self.rule {
            MapRule::Identity => vec![y.clone()],
            MapRule::Inclusion => {
                if self.source.contains(y) {
                    vec![y.clone()]
                } else {
                    Vec::new()
                }
            }
            MapRule::Floor { n, coord } => {
                let v = y.coords().expect("floor acts on lattices");
                let s = lattice_scale(&self.source, *coord);
                let base = v[coord - 1] / s * *n as i64;
                (0..*n as i64)
                    .map(|r| {
                        let mut w = v.to_vec();
                        w[coord - 1] = s * (base + r);
                        GroupElement::Lattice(w)
                    })
                    .collect()
            }
            MapRule::Contract { coord, index } => match y {
                GroupElement::Lattice(v) => {
                    let mut w = v.clone();
                    w[coord - 1] *= *index as i64;
                    vec![GroupElement::Lattice(w)]
                }
                GroupElement::Cyclic { int, residue } => vec![GroupElement::Cyclic {
                    int: int * *index as i64,
                    residue: *residue,
                }],
                _ => Vec::new(),
            },
            MapRule::Compose { outer, inner } => outer
                .preimages(y)
                .iter()
                .flat_map(|z| inner.preimages(z))
                .collect(),
            MapRule::CosetExtension { part, reps } => {
                let g = &self.source;
                part.preimages(y)
                    .iter()
                    .flat_map(|p| reps.iter().map(move |r| g.multiply(p, r)))
                    .collect()
            }
            MapRule::Projection => {
                let Family::DirectWithCyclic(k) = self.source.family() else {
                    unreachable!()
                };
                let a = y.coords().expect("projection targets Z")[0];
                (0..k).map(|r| GroupElement::Cyclic { int: a, residue: r }).collect()
            }
            MapRule::Chart => {
                let Family::DirectWithCyclic(k) = self.source.family() else {
                    unreachable!()
                };
                let v = y.coords().expect("chart targets Z")[0];
                let (q, r) = v.div_mod_floor(&(k as i64));
                vec![GroupElement::Cyclic {
                    int: q,
                    residue: r as u64,
                }]
            }
            MapRule::BsFloor { n } => self.bs_model().f_c_preimages(*n, y),
        };
        out.sort();
        out
    }
}

/// `k ↦ ⌊k/n⌋` on `Z` (floor toward −∞), claimed `(K=n, C=1)`, fiber `n`.
pub fn floor_map_z(n: u64) -> Result<QIMap> {
    floor_map_zm(n, 1, 1)
}

/// Floor map along coordinate `coord` (1-based) of `Z^m`.
pub fn floor_map_zm(n: u64, coord: usize, m: usize) -> Result<QIMap> {
    let g = MarkedGroup::new(Family::FreeAbelian(m))?;
    floor_on(&g, n, coord)
}

/// Floor map along a coordinate of any lattice marking, acting in that
/// marking's own coordinates.
pub fn floor_on(group: &MarkedGroup, n: u64, coord: usize) -> Result<QIMap> {
    if n == 0 {
        return Err(Error::InvalidParameter("floor map needs n ≥ 1".into()));
    }
    let Family::FreeAbelian(m) = group.family() else {
        return Err(Error::UnsupportedMap(format!("floor map on {group}")));
    };
    if !(1..=m).contains(&coord) {
        return Err(Error::InvalidParameter(format!(
            "coordinate {coord} out of range 1..={m}"
        )));
    }
    let name = if m == 1 {
        format!("floor{n}:{group}")
    } else {
        format!("floor{n}@{coord}:{group}")
    };
    Ok(QIMap {
        name,
        source: group.clone(),
        target: group.clone(),
        rule: if n == 1 { MapRule::Identity } else { MapRule::Floor { n, coord } },
        claimed: if n == 1 { Constants::new(1, 0) } else { Constants::new(n as i64, 1) },
        fiber: Some(n),
    })
}

/// Inclusion of a sublattice marking into the standard group of its family.
///
/// Claimed constants `(K = index, C = 0)` are relative to the subgroup's
/// intrinsic word metric on the source.
pub fn inclusion_map(sub: &MarkedGroup, ambient: &MarkedGroup) -> Result<QIMap> {
    let supported = matches!(
        sub.family(),
        Family::FreeAbelian(_) | Family::DirectWithCyclic(_)
    );
    if !supported || sub.family() != ambient.family() || !ambient.is_standard() {
        return Err(Error::UnsupportedMap(format!("inclusion {sub} ⊂ {ambient}")));
    }
    Ok(QIMap {
        name: format!("incl:{sub}<{ambient}"),
        source: sub.clone(),
        target: ambient.clone(),
        rule: MapRule::Inclusion,
        claimed: Constants::new(sub.index() as i64, 0),
        fiber: None,
    })
}

/// Isomorphism from a sublattice marking onto its standard group.
/// It is an isometry for the intrinsic metric.
pub fn contraction(sub: &MarkedGroup) -> Result<QIMap> {
    let (coord, index) = match (sub.family(), sub.marking()) {
        (Family::FreeAbelian(_), Marking::Sublattice { coord, index }) => (coord, index),
        (Family::DirectWithCyclic(_), Marking::Sublattice { coord: 1, index }) => (1, index),
        _ => return Err(Error::UnsupportedMap(format!("contraction of {sub}"))),
    };
    let target = sub.standard();
    Ok(QIMap {
        name: format!("contract:{sub}>{target}"),
        source: sub.clone(),
        target,
        rule: MapRule::Contract { coord, index },
        claimed: Constants::new(1, 0),
        fiber: Some(1),
    })
}

/// `outer ∘ inner`; the middle groups must agree including their marking.
pub fn compose(outer: &QIMap, inner: &QIMap) -> Result<QIMap> {
    if inner.target != outer.source {
        return Err(Error::GroupMismatch(format!(
            "{} → {} cannot feed {} → {}",
            inner.source, inner.target, outer.source, outer.target
        )));
    }
    Ok(QIMap {
        name: format!("({})∘({})", outer.name, inner.name),
        source: inner.source.clone(),
        target: outer.target.clone(),
        rule: MapRule::Compose {
            outer: Box::new(outer.clone()),
            inner: Box::new(inner.clone()),
        },
        claimed: Constants::compose(outer.claimed, inner.claimed),
        fiber: match (outer.fiber, inner.fiber) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        },
    })
}

/// Extends a bijection `part: G' → G` to the self-map `g'·g_i ↦ part(g')`
/// of `G`, given representatives `g_i` with `G = ⊔ G'·g_i`.
///
/// The partition is checked exactly by coset residues and, as required,
/// also on every element of `window`.
pub fn extend_by_cosets(
    group: &MarkedGroup,
    part: &QIMap,
    reps: &[GroupElement],
    claimed: Constants,
    window: &Ball,
) -> Result<QIMap> {
    let sub = &part.source;
    if part.target != *group || sub.family() != group.family() {
        return Err(Error::GroupMismatch(format!(
            "extension of {} → {} to {group}",
            sub, part.target
        )));
    }
    if reps.len() as u64 != sub.index() {
        return Err(Error::Partition(format!(
            "{} representatives for a subgroup of index {}",
            reps.len(),
            sub.index()
        )));
    }
    for (i, a) in reps.iter().enumerate() {
        for b in &reps[i + 1..] {
            if sub.contains(&group.multiply(a, &group.inverse(b))) {
                return Err(Error::Partition(format!(
                    "{} and {} lie in the same coset",
                    group.format(a),
                    group.format(b)
                )));
            }
        }
    }
    for g in window.elements() {
        let hits = reps
            .iter()
            .filter(|r| sub.contains(&group.multiply(g, &group.inverse(r))))
            .count();
        if hits != 1 {
            return Err(Error::Partition(format!(
                "{} lies in {hits} translates",
                group.format(g)
            )));
        }
    }
    Ok(QIMap {
        name: format!("extend:{}", part.name),
        source: group.clone(),
        target: group.clone(),
        rule: MapRule::CosetExtension {
            part: Box::new(part.clone()),
            reps: reps.to_vec(),
        },
        claimed,
        fiber: part.fiber.map(|f| f * reps.len() as u64),
    })
}

/// `Z × Z/k → Z`, `(a, r) ↦ a`: finite kernel of order `k`, full image.
pub fn projection(k: u64) -> Result<QIMap> {
    let source = MarkedGroup::new(Family::DirectWithCyclic(k))?;
    let target = MarkedGroup::new(Family::FreeAbelian(1))?;
    Ok(QIMap {
        name: format!("proj:{source}>Z"),
        source,
        target,
        rule: MapRule::Projection,
        claimed: Constants::new(1, (k as i64 / 2).max(1)),
        fiber: Some(k),
    })
}

/// `Z × Z/k → Z`, `(a, r) ↦ k·a + r`: a bijection.
pub fn chart(k: u64) -> Result<QIMap> {
    let source = MarkedGroup::new(Family::DirectWithCyclic(k))?;
    let target = MarkedGroup::new(Family::FreeAbelian(1))?;
    Ok(QIMap {
        name: format!("chart:{source}>Z"),
        source,
        target,
        rule: MapRule::Chart,
        claimed: Constants::new(k as i64, k as i64),
        fiber: Some(1),
    })
}

/// The n-to-1 map `f_C` on `BS(1,m)`, claimed `(K=2, C=4)` relative to `{a, b}`.
pub fn bs_floor(m: u32, n: u64) -> Result<QIMap> {
    if n == 0 {
        return Err(Error::InvalidParameter("f_C needs n ≥ 1".into()));
    }
    let g = MarkedGroup::new(Family::BaumslagSolitar(m))?;
    Ok(QIMap {
        name: format!("fC{n}:{g}"),
        source: g.clone(),
        target: g,
        rule: MapRule::BsFloor { n },
        claimed: if n == 1 { Constants::new(1, 0) } else { Constants::new(2, 4) },
        fiber: Some(n),
    })
}

/// The window over which a distortion audit runs: all pairs of `points`,
/// with distances from metrics of sufficient reach.
#[derive(Clone, Debug)]
pub struct AuditWindow {
    points: Ball,
    source_metric: WordMetric,
    target_metric: WordMetric,
}

impl AuditWindow {
    /// Points: the source ball of radius `radius`. Source distances need reach
    /// `2·radius`; target distances need `target_reach`.
    pub fn new(f: &QIMap, radius: u32, target_reach: u32, budget: usize) -> Result<AuditWindow> {
        let source_metric = WordMetric::new(&f.source, 2 * radius, budget)?;
        let points = Ball::new(&f.source, radius, budget)?;
        let target_metric = if f.target == f.source && target_reach == 2 * radius {
            source_metric.clone()
        } else {
            WordMetric::new(&f.target, target_reach, budget)?
        };
        Ok(AuditWindow {
            points,
            source_metric,
            target_metric,
        })
    }

    pub fn points(&self) -> &Ball {
        &self.points
    }

    pub fn describe(&self) -> String {
        format!(
            "ball({}, {}) [{} points]",
            self.points.group(),
            self.points.radius(),
            self.points.len()
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DistortionReport {
    pub map: String,
    pub window: String,
    #[serde(rename = "K_claimed")]
    pub k_claimed: String,
    #[serde(rename = "C_claimed")]
    pub c_claimed: String,
    pub pass: bool,
    pub worst_pair: Option<(String, String)>,
    #[serde(rename = "K_emp")]
    pub k_emp: Option<String>,
    #[serde(skip)]
    pub worst_pair_ids: Option<(usize, usize)>,
    #[serde(skip)]
    pub k_emp_exact: Option<Exact>,
    pub pairs_checked: u64,
}

impl DistortionReport {
    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }
}

fn ratio_string(r: &Exact) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Running maximum of a rational lower bound on `K`; `None` means unbounded.
#[derive(Clone, Copy, Debug)]
struct KBound(Option<(i128, i128)>);

impl KBound {
    fn one() -> Self {
        KBound(Some((1, 1)))
    }

    fn raise(&mut self, num: i128, den: i128) {
        if let Some((p, q)) = self.0 {
            if den == 0 {
                if num > 0 {
                    self.0 = None;
                }
            } else if num * q > p * den {
                self.0 = Some((num, den));
            }
        }
    }

    fn max(self, other: KBound) -> KBound {
        match (self.0, other.0) {
            (None, _) | (_, None) => KBound(None),
            (Some((p, q)), Some((r, s))) => {
                if r * q > p * s {
                    other
                } else {
                    self
                }
            }
        }
    }

    fn to_exact(self) -> Option<Exact> {
        self.0.map(|(p, q)| Exact::new(p as i64, q as i64))
    }
}

struct RowOutcome {
    first_violation: Option<usize>,
    k: KBound,
    pairs: u64,
}

fn audit_rows(f: &QIMap, constants: Constants, window: &AuditWindow) -> Result<(Option<(usize, usize)>, KBound, u64)> {
    let pts = window.points.elements();
    let images: Vec<GroupElement> = pts.iter().map(|x| f.apply(x)).collect();
    let src = &window.source_metric;
    let tgt = &window.target_metric;
    let (p, q) = (*constants.k.numer() as i128, *constants.k.denom() as i128);
    let (s, t) = (*constants.c.numer() as i128, *constants.c.denom() as i128);
    let src_inv: Vec<GroupElement> = pts.iter().map(|x| src.group().inverse(x)).collect();
    let img_inv: Vec<GroupElement> = images.iter().map(|x| tgt.group().inverse(x)).collect();
    let rows: Result<Vec<RowOutcome>> = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            let mut out = RowOutcome {
                first_violation: None,
                k: KBound::one(),
                pairs: 0,
            };
            for j in i + 1..pts.len() {
                let d = src.length(&src.group().multiply(&src_inv[i], &pts[j]))? as i128;
                let df = tgt
                    .length(&tgt.group().multiply(&img_inv[i], &images[j]))
                    .map_err(|e| Error::WindowTooSmall(format!("target distances: {e}")))?
                    as i128;
                out.pairs += 1;
                // lower: d/K − C ≤ df  ⇔  d·q·t ≤ p·(df·t + s)
                // upper: df ≤ K·d + C  ⇔  df·q·t ≤ p·d·t + s·q
                let lower_ok = d * q * t <= p * (df * t + s);
                let upper_ok = df * q * t <= p * d * t + s * q;
                if out.first_violation.is_none() && !(lower_ok && upper_ok) {
                    out.first_violation = Some(j);
                }
                if d > 0 {
                    out.k.raise(df * t - s, d * t);
                    out.k.raise(d * t, df * t + s);
                }
            }
            Ok(out)
        })
        .collect();
    let rows = rows?;
    let mut worst = None;
    let mut k = KBound::one();
    let mut pairs = 0;
    for (i, r) in rows.iter().enumerate() {
        if worst.is_none() {
            worst = r.first_violation.map(|j| (i, j));
        }
        k = k.max(r.k);
        pairs += r.pairs;
    }
    Ok((worst, k, pairs))
}

/// Exhaustive all-pairs check of the claimed constants over the window.
/// On failure the report carries the lexicographically smallest violating
/// pair of window ids.
pub fn verify_constants(f: &QIMap, constants: Constants, window: &AuditWindow) -> Result<DistortionReport> {
    let (worst, k, pairs) = audit_rows(f, constants, window)?;
    let pts = window.points.elements();
    Ok(DistortionReport {
        map: f.name.clone(),
        window: window.describe(),
        k_claimed: ratio_string(&constants.k),
        c_claimed: ratio_string(&constants.c),
        pass: worst.is_none(),
        worst_pair: worst.map(|(i, j)| (f.source.format(&pts[i]), f.source.format(&pts[j]))),
        k_emp: k.to_exact().map(|r| ratio_string(&r)),
        worst_pair_ids: worst,
        k_emp_exact: k.to_exact(),
        pairs_checked: pairs,
    })
}

/// Minimal `K ≥ 1` for which the inequalities hold with `C = c_fixed` on
/// every window pair; `None` if no finite `K` works.
pub fn fit_constants(f: &QIMap, c_fixed: Exact, window: &AuditWindow) -> Result<Option<Exact>> {
    let (_, k, _) = audit_rows(
        f,
        Constants {
            k: Exact::from_integer(1),
            c: c_fixed,
        },
        window,
    )?;
    Ok(k.to_exact())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberEntry {
    pub target: GroupElement,
    pub count: u64,
    /// The full fiber lies inside the source window, so `count` is the true fiber size.
    pub interior: bool,
}

#[derive(Clone, Debug)]
pub struct FiberCensus {
    pub entries: Vec<FiberEntry>,
}

impl FiberCensus {
    pub fn interior(&self) -> impl Iterator<Item = &FiberEntry> {
        self.entries.iter().filter(|e| e.interior)
    }

    pub fn get(&self, y: &GroupElement) -> Option<&FiberEntry> {
        self.entries.iter().find(|e| &e.target == y)
    }

    /// Whether every interior fiber has exactly `n` elements.
    pub fn interior_constant(&self, n: u64) -> bool {
        self.interior().all(|e| e.count == n)
    }
}

/// Counts `|f⁻¹(y) ∩ source_window|` for every `y` in the target window by
/// direct image counting; a target is interior when its exact fiber lies in
/// the source window.
pub fn fiber_census(f: &QIMap, source_window: &Ball, target_window: &Ball) -> FiberCensus {
    let mut counts = std::collections::HashMap::<GroupElement, u64>::new();
    for x in source_window.elements() {
        *counts.entry(f.apply(x)).or_default() += 1;
    }
    let entries = target_window
        .elements()
        .iter()
        .map(|y| {
            let fiber = f.preimages(y);
            FiberEntry {
                target: y.clone(),
                count: counts.get(y).copied().unwrap_or(0),
                interior: fiber.iter().all(|x| source_window.contains(x)),
            }
        })
        .collect();
    FiberCensus { entries }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(k: i64) -> GroupElement {
        GroupElement::Lattice(vec![k])
    }

    fn grp(s: &str) -> MarkedGroup {
        s.parse().unwrap()
    }

    #[test]
    fn floor_values() {
        let f2 = floor_map_z(2).unwrap();
        assert_eq!(f2.apply(&z(5)), z(2));
        assert_eq!(f2.apply(&z(-1)), z(-1));
        assert_eq!(floor_map_z(3).unwrap().apply(&z(-3)), z(-1));
        let g = floor_map_zm(2, 1, 2).unwrap();
        assert_eq!(g.apply(&GroupElement::lattice(&[5, 3])), GroupElement::lattice(&[2, 3]));
        let g = floor_map_zm(2, 2, 2).unwrap();
        assert_eq!(g.apply(&GroupElement::lattice(&[5, 3])), GroupElement::lattice(&[5, 1]));
        let id = floor_map_zm(1, 1, 2).unwrap();
        assert!(matches!(id.rule(), MapRule::Identity));
        assert!(floor_map_zm(2, 3, 2).is_err());
    }

    #[test]
    fn inclusion_values() {
        let i2 = inclusion_map(&grp("2Z"), &grp("Z")).unwrap();
        assert_eq!(i2.apply(&z(6)), z(6));
        let i3 = inclusion_map(&grp("3Z"), &grp("Z")).unwrap();
        assert_eq!(i3.apply(&z(3)), z(3));
        let i = inclusion_map(&grp("2ZxZ"), &grp("Z^2")).unwrap();
        assert_eq!(i.apply(&GroupElement::lattice(&[4, 1])), GroupElement::lattice(&[4, 1]));
        assert!(inclusion_map(&grp("BS(1,2)"), &grp("BS(1,2)")).is_err());
        assert!(inclusion_map(&grp("2Z"), &grp("Z^2")).is_err());
    }

    #[test]
    fn composition_rules() {
        let h = grp("2Z");
        let i = inclusion_map(&h, &grp("Z")).unwrap();
        let fh = floor_on(&h, 2, 1).unwrap();
        let fix = compose(&i, &fh).unwrap();
        for j in -10..10 {
            assert_eq!(fix.apply(&z(4 * j + 2)), z(2 * j));
            assert_eq!(fix.apply(&z(4 * j)), z(2 * j));
        }
        assert_eq!(fix.claimed(), Constants::new(4, 2));
        let f2 = floor_map_z(2).unwrap();
        let ff = compose(&f2, &f2).unwrap();
        assert_eq!(ff.apply(&z(7)), z(1));
        let id = QIMap::identity(&grp("Z"));
        let left = compose(&id, &f2).unwrap();
        for k in -20..20 {
            assert_eq!(left.apply(&z(k)), f2.apply(&z(k)));
        }
        assert!(matches!(compose(&fh, &f2), Err(Error::GroupMismatch(_))));
    }

    #[test]
    fn preimages_match_brute_force() {
        let maps = vec![
            floor_map_z(3).unwrap(),
            inclusion_map(&grp("2Z"), &grp("Z")).unwrap(),
            compose(
                &inclusion_map(&grp("2Z"), &grp("Z")).unwrap(),
                &floor_on(&grp("2Z"), 2, 1).unwrap(),
            )
            .unwrap(),
            projection(2).unwrap(),
            chart(3).unwrap(),
            contraction(&grp("3Z")).unwrap(),
        ];
        for f in maps {
            let src = Ball::new(f.source(), 40, 10_000).unwrap();
            for y in -10..=10 {
                let y = z(y);
                let brute: Vec<_> = src.elements().iter().filter(|x| f.apply(x) == y).cloned().collect();
                let mut brute = brute;
                brute.sort();
                assert_eq!(f.preimages(&y), brute, "{f} at {:?}", y);
            }
        }
    }

    #[test]
    fn extension_reproduces_floor() {
        let zg = grp("Z");
        let h = grp("2Z");
        let window = Ball::new(&zg, 100, 1000).unwrap();
        let ext = extend_by_cosets(
            &zg,
            &contraction(&h).unwrap(),
            &[z(0), z(1)],
            Constants::new(2, 1),
            &window,
        )
        .unwrap();
        let f2 = floor_map_z(2).unwrap();
        for k in -100..=100 {
            assert_eq!(ext.apply(&z(k)), f2.apply(&z(k)));
        }
        assert_eq!(ext.fiber(), Some(2));
        assert!(matches!(
            extend_by_cosets(&zg, &contraction(&h).unwrap(), &[z(0), z(2)], Constants::new(2, 1), &window),
            Err(Error::Partition(_))
        ));
        let same = extend_by_cosets(&zg, &QIMap::identity(&zg), &[z(0)], Constants::new(1, 0), &window).unwrap();
        assert_eq!(same.apply(&z(17)), z(17));
    }

    #[test]
    fn verify_floor_constants() {
        let f2 = floor_map_z(2).unwrap();
        let w = AuditWindow::new(&f2, 100, 200, 10_000).unwrap();
        let ok = verify_constants(&f2, Constants::new(2, 1), &w).unwrap();
        assert!(ok.pass);
        let bad = verify_constants(&f2, Constants::new(2, 0), &w).unwrap();
        assert!(!bad.pass);
        assert_eq!(bad.worst_pair, Some(("0".to_string(), "1".to_string())));
        let id = QIMap::identity(&grp("Z"));
        let w = AuditWindow::new(&id, 30, 60, 10_000).unwrap();
        assert!(verify_constants(&id, Constants::new(1, 0), &w).unwrap().pass);
        assert_eq!(fit_constants(&id, Exact::from_integer(0), &w).unwrap(), Some(Exact::from_integer(1)));
    }

    #[test]
    fn fitted_constants() {
        let f2 = floor_map_z(2).unwrap();
        let w = AuditWindow::new(&f2, 100, 200, 10_000).unwrap();
        // sup over [-100,100] of d/(d_f+1) is 199/100 (x=-100, y=99)
        assert_eq!(fit_constants(&f2, Exact::from_integer(1), &w).unwrap(), Some(Exact::new(199, 100)));
        let i2 = inclusion_map(&grp("2Z"), &grp("Z")).unwrap();
        let w = AuditWindow::new(&i2, 50, 200, 10_000).unwrap();
        assert_eq!(fit_constants(&i2, Exact::from_integer(0), &w).unwrap(), Some(Exact::from_integer(2)));
        // d_f = 0 for a collapsed pair with C = 0: no finite K
        assert_eq!(fit_constants(&f2, Exact::from_integer(0), &AuditWindow::new(&f2, 3, 6, 100).unwrap()).unwrap(), None);
    }

    #[test]
    fn census_counts() {
        let f2 = floor_map_z(2).unwrap();
        let src = Ball::new(&grp("Z"), 20, 1000).unwrap();
        let tgt = Ball::new(&grp("Z"), 20, 1000).unwrap();
        let c = fiber_census(&f2, &src, &tgt);
        let e = c.get(&z(3)).unwrap();
        assert_eq!((e.count, e.interior), (2, true));
        assert!(c.interior_constant(2));
        let c3 = fiber_census(&floor_map_z(3).unwrap(), &src, &tgt);
        assert_eq!(c3.get(&z(0)).unwrap().count, 3);
        let i2 = inclusion_map(&grp("2Z"), &grp("Z")).unwrap();
        let hsrc = Ball::new(&grp("2Z"), 20, 1000).unwrap();
        let c = fiber_census(&i2, &hsrc, &tgt);
        assert_eq!(c.get(&z(3)).unwrap().count, 0);
        assert_eq!(c.get(&z(4)).unwrap().count, 1);
    }

    #[test]
    fn report_json_shape() {
        let f2 = floor_map_z(2).unwrap();
        let w = AuditWindow::new(&f2, 5, 10, 100).unwrap();
        let r = verify_constants(&f2, Constants::new(2, 1), &w).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in ["map", "window", "K_claimed", "C_claimed", "pass", "worst_pair", "K_emp"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }
}
