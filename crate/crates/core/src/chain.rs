//! Uniformly finite 0-chains, 1-chains with their boundary map, and the
//! Følner vanishing statistic.
//!
//! Chains over infinite groups are rules evaluated lazily: a coefficient is
//! computed only when asked for. Chains that are known only inside a window
//! carry an explicit domain, and asking outside it is an error rather than a
//! silent zero.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::Write;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ball::Ball;
use crate::element::GroupElement;
use crate::error::{Error, Result};
use crate::folner::{translate, FiniteSubset, FolnerFamily};
use crate::group::MarkedGroup;
use crate::qi::QIMap;

/// A subset described by a rule.
#[derive(Clone, Debug)]
pub enum Subset {
    Whole,
    /// The subgroup carried by a sublattice marking, e.g. `2Z` inside `Z`.
    Subgroup(MarkedGroup),
    Finite(HashSet<GroupElement>),
}

impl Subset {
    pub fn contains(&self, g: &GroupElement) -> bool {
        match self {
            Subset::Whole => true,
            Subset::Subgroup(h) => h.contains(g),
            Subset::Finite(s) => s.contains(g),
        }
    }

    fn label(&self) -> String {
        match self {
            Subset::Whole => "G".into(),
            Subset::Subgroup(h) => h.to_string(),
            Subset::Finite(s) => format!("finite({})", s.len()),
        }
    }
}

#[derive(Clone, Debug)]
pub enum ChainRule {
    Indicator(Subset),
    /// `a_y = |f⁻¹(y)|`, counted exactly from the map's preimages.
    Pushforward(Box<QIMap>),
    /// Explicit coefficients, zero elsewhere inside `domain`; outside a
    /// given domain the chain is unknown.
    Table {
        coeffs: HashMap<GroupElement, i64>,
        domain: Option<HashSet<GroupElement>>,
    },
    /// `Σ w·c` over the listed terms.
    Combination(Vec<(i64, UFChain)>),
}

/// A 0-chain `Σ a_x x` with `|a_x| ≤ bound`.
#[derive(Clone, Debug)]
pub struct UFChain {
    group: MarkedGroup,
    rule: ChainRule,
    bound: i64,
    label: String,
}

impl fmt::Display for UFChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl UFChain {
    /// `[S]`, the indicator chain of a subset.
    pub fn indicator(group: &MarkedGroup, subset: Subset) -> Result<UFChain> {
        if let Subset::Subgroup(h) = &subset {
            if h.family() != group.family() {
                return Err(Error::GroupMismatch(format!("{h} is not a subgroup of {group}")));
            }
        }
        Ok(UFChain {
            group: group.clone(),
            label: format!("[{}]", subset.label()),
            rule: ChainRule::Indicator(subset),
            bound: 1,
        })
    }

    /// `[G]`.
    pub fn whole(group: &MarkedGroup) -> UFChain {
        Self::indicator(group, Subset::Whole).expect("whole group")
    }

    /// `[H]` for a subgroup given by its marking; `H` is read in the ambient
    /// standard coordinates.
    pub fn subgroup(sub: &MarkedGroup) -> UFChain {
        Self::indicator(&sub.standard(), Subset::Subgroup(sub.clone())).expect("same family")
    }

    /// `f_*[X]`; requires every fiber to be finite, which holds for the
    /// maps that report a fiber size.
    pub fn pushforward(f: &QIMap) -> Result<UFChain> {
        let n = f.fiber().ok_or_else(|| {
            Error::UnsupportedMap(format!("{} has no uniform fiber bound", f.name()))
        })?;
        Ok(UFChain {
            group: f.target().clone(),
            label: format!("{}_*[X]", f.name()),
            rule: ChainRule::Pushforward(Box::new(f.clone())),
            bound: n as i64,
        })
    }

    /// Explicit table; the bound is the largest absolute coefficient.
    pub fn table(
        group: &MarkedGroup,
        coeffs: HashMap<GroupElement, i64>,
        domain: Option<HashSet<GroupElement>>,
    ) -> UFChain {
        let bound = coeffs.values().map(|a| a.abs()).max().unwrap_or(0);
        UFChain {
            group: group.clone(),
            label: format!("table({})", coeffs.len()),
            rule: ChainRule::Table { coeffs, domain },
            bound,
        }
    }

    pub fn combination(terms: Vec<(i64, UFChain)>) -> Result<UFChain> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty combination".into()))?;
        let group = first.1.group.clone();
        if let Some((_, c)) = terms.iter().find(|(_, c)| c.group != group) {
            return Err(Error::GroupMismatch(format!("{} lives on {}, not {group}", c, c.group)));
        }
        let bound = terms.iter().map(|(w, c)| w.abs() * c.bound).sum();
        let label = terms
            .iter()
            .enumerate()
            .map(|(k, (w, c))| match (k, *w) {
                (0, 1) => c.label.clone(),
                (0, -1) => format!("-{c}"),
                (_, 1) => format!(" + {c}"),
                (_, -1) => format!(" - {c}"),
                (_, w) if w < 0 => format!(" - {}{c}", -w),
                (_, w) => format!(" + {w}{c}"),
            })
            .collect();
        Ok(UFChain {
            group,
            rule: ChainRule::Combination(terms),
            bound,
            label,
        })
    }

    /// `a − b`.
    pub fn difference(a: UFChain, b: UFChain) -> Result<UFChain> {
        Self::combination(vec![(1, a), (-1, b)])
    }

    pub fn group(&self) -> &MarkedGroup {
        &self.group
    }

    pub fn rule(&self) -> &ChainRule {
        &self.rule
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// The coefficient `a_x`.
    pub fn coeff(&self, x: &GroupElement) -> Result<i64> {
        match &self.rule {
            ChainRule::Indicator(s) => Ok(s.contains(x) as i64),
            ChainRule::Pushforward(f) => Ok(f.preimages(x).len() as i64),
            ChainRule::Table { coeffs, domain } => {
                if let Some(d) = domain {
                    if !d.contains(x) {
                        return Err(Error::IncompleteFiber(self.group.format(x)));
                    }
                }
                Ok(coeffs.get(x).copied().unwrap_or(0))
            }
            ChainRule::Combination(terms) => {
                let mut total = 0;
                for (w, c) in terms {
                    total += w * c.coeff(x)?;
                }
                Ok(total)
            }
        }
    }

    /// `Σ_{x∈S} a_x`.
    pub fn sum_over(&self, s: &FiniteSubset) -> Result<i64> {
        s.members().iter().map(|x| self.coeff(x)).sum()
    }
}

/// Word length by growing balls, for groups without a closed form.
fn word_length(group: &MarkedGroup, g: &GroupElement, max: u32) -> Result<u32> {
    if let Some(l) = group.closed_form_length(g) {
        return Ok(l as u32);
    }
    let mut r = 1;
    loop {
        let b = Ball::new(group, r, crate::ball::DEFAULT_BALL_BUDGET)?;
        if let Some(id) = b.id_of(g) {
            return Ok(b.distance_of(id));
        }
        if r >= max {
            return b.word_length(g);
        }
        r = (2 * r).min(max);
    }
}

#[derive(Clone, Debug)]
pub enum EdgeRule {
    Table(HashMap<(GroupElement, GroupElement), i64>),
    /// `coeff · (x, x·step)` for every `x` in `starts`.
    Translates {
        starts: Subset,
        step: GroupElement,
        coeff: i64,
    },
}

/// A 1-chain `Σ a_(x,y) (x,y)` with bounded coefficients and propagation.
#[derive(Clone, Debug)]
pub struct EdgeChain {
    group: MarkedGroup,
    rule: EdgeRule,
    bound: i64,
    reach: u32,
}

impl EdgeChain {
    /// Finite table; the propagation radius is the longest edge.
    pub fn table(group: &MarkedGroup, edges: HashMap<(GroupElement, GroupElement), i64>) -> Result<EdgeChain> {
        let mut reach = 0;
        for (x, y) in edges.keys() {
            let d = group.multiply(&group.inverse(x), y);
            reach = reach.max(word_length(group, &d, 64)?);
        }
        let bound = edges.values().map(|a| a.abs()).max().unwrap_or(0);
        Ok(EdgeChain {
            group: group.clone(),
            rule: EdgeRule::Table(edges),
            bound,
            reach,
        })
    }

    pub fn translates(group: &MarkedGroup, starts: Subset, step: GroupElement, coeff: i64) -> Result<EdgeChain> {
        let reach = word_length(group, &step, 64)?;
        Ok(EdgeChain {
            group: group.clone(),
            rule: EdgeRule::Translates { starts, step, coeff },
            bound: coeff.abs(),
            reach,
        })
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn reach(&self) -> u32 {
        self.reach
    }

    /// `a_(x,y)`.
    pub fn coeff(&self, x: &GroupElement, y: &GroupElement) -> i64 {
        match &self.rule {
            EdgeRule::Table(t) => t.get(&(x.clone(), y.clone())).copied().unwrap_or(0),
            EdgeRule::Translates { starts, step, coeff } => {
                if starts.contains(x) && self.group.multiply(x, step) == *y {
                    *coeff
                } else {
                    0
                }
            }
        }
    }
}

/// `∂(Σ a_(x,y)(x,y)) = Σ a_(x,y)(y − x)`, evaluated on the points of the
/// window at distance at least `R_c` from its edge.
pub fn boundary_1(e: &EdgeChain, window: &Ball) -> Result<UFChain> {
    if window.radius() < e.reach {
        return Err(Error::WindowTooSmall(format!(
            "radius {} is below the propagation radius {}",
            window.radius(),
            e.reach
        )));
    }
    let g = &e.group;
    let inner = window.radius() - e.reach;
    let domain: HashSet<GroupElement> = (0..window.len())
        .filter(|&i| window.distance_of(i) <= inner)
        .map(|i| window.element(i).clone())
        .collect();
    let mut coeffs: HashMap<GroupElement, i64> = HashMap::new();
    let mut add = |z: &GroupElement, a: i64| {
        if domain.contains(z) {
            *coeffs.entry(z.clone()).or_default() += a;
        }
    };
    match &e.rule {
        EdgeRule::Table(t) => {
            for ((x, y), a) in t {
                add(y, *a);
                add(x, -a);
            }
        }
        EdgeRule::Translates { starts, step, coeff } => {
            for x in window.elements().iter().filter(|x| starts.contains(x)) {
                add(&g.multiply(x, step), *coeff);
                add(x, -coeff);
            }
        }
    }
    coeffs.retain(|_, a| *a != 0);
    Ok(UFChain::table(g, coeffs, Some(domain)).with_label("∂e"))
}

/// The pushforward counted inside finite windows, with the targets whose
/// whole fiber lies in the source window marked interior.
#[derive(Clone, Debug)]
pub struct WindowPushforward {
    /// Coefficients on the interior targets; other points are unknown.
    pub chain: UFChain,
    pub interior: Vec<GroupElement>,
    pub boundary: Vec<GroupElement>,
}

/// `y ↦ |f⁻¹(y) ∩ source_window|` over the target window.
pub fn pushforward_chain(f: &QIMap, source_window: &Ball, target_window: &Ball) -> Result<WindowPushforward> {
    if source_window.group() != f.source() || target_window.group() != f.target() {
        return Err(Error::GroupMismatch(format!("windows do not match {}", f.name())));
    }
    let mut counts: HashMap<GroupElement, i64> = HashMap::new();
    for x in source_window.elements() {
        *counts.entry(f.apply(x)).or_default() += 1;
    }
    let mut interior = Vec::new();
    let mut boundary = Vec::new();
    for y in target_window.elements() {
        if f.preimages(y).iter().all(|x| source_window.contains(x)) {
            interior.push(y.clone());
        } else {
            boundary.push(y.clone());
        }
    }
    let domain: HashSet<GroupElement> = interior.iter().cloned().collect();
    counts.retain(|y, _| domain.contains(y));
    let chain = UFChain::table(f.target(), counts, Some(domain)).with_label(format!("{}_*[X]", f.name()));
    Ok(WindowPushforward {
        chain,
        interior,
        boundary,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StatRow {
    pub i: u32,
    pub sum_abs: u64,
    pub boundary: u64,
    #[serde(skip)]
    pub ratio: Ratio<u64>,
}

impl StatRow {
    pub fn new(i: u32, sum_abs: u64, boundary: u64) -> StatRow {
        StatRow {
            i,
            sum_abs,
            boundary,
            ratio: Ratio::new(sum_abs, boundary.max(1)),
        }
    }

    pub fn ratio_f64(&self) -> f64 {
        *self.ratio.numer() as f64 / *self.ratio.denom() as f64
    }
}

fn stat_rows(
    c: &UFChain,
    family: &FolnerFamily,
    i_max: u32,
    budget: usize,
    shift: Option<&GroupElement>,
) -> Result<Vec<StatRow>> {
    if family.group().family() != c.group().family() {
        return Err(Error::GroupMismatch(format!("{c} does not live on {}", family.group())));
    }
    (1..=i_max)
        .into_par_iter()
        .map(|i| {
            let mut s = family.set(i, budget)?;
            if let Some(g) = shift {
                s = translate(&s, g);
            }
            let sum = c.sum_over(&s)?;
            Ok(StatRow::new(i, sum.unsigned_abs(), crate::folner::boundary_size(&s) as u64))
        })
        .collect()
}

/// Rows `(i, |Σ_{x∈S_i} a_x|, |∂S_i|, ratio)` for `i = 1..=i_max`.
pub fn folner_statistic(c: &UFChain, family: &FolnerFamily, i_max: u32, budget: usize) -> Result<Vec<StatRow>> {
    stat_rows(c, family, i_max, budget, None)
}

/// The same statistic over the translated sets `g·S_i`.
pub fn folner_statistic_translated(
    c: &UFChain,
    family: &FolnerFamily,
    i_max: u32,
    g: &GroupElement,
    budget: usize,
) -> Result<Vec<StatRow>> {
    stat_rows(c, family, i_max, budget, Some(g))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionRule {
    /// Number of trailing rows that must have non-decreasing ratio.
    pub window: usize,
    /// The final ratio must exceed this for evidence of a nonzero class.
    pub nonzero_threshold: u64,
    /// Every ratio at most this gives evidence of the zero class.
    pub zero_threshold: u64,
}

impl Default for DecisionRule {
    fn default() -> Self {
        DecisionRule {
            window: 5,
            nonzero_threshold: 10,
            zero_threshold: 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    EvidenceNonzero,
    EvidenceZero,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::EvidenceNonzero => "evidence-nonzero",
            Verdict::EvidenceZero => "evidence-zero",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Applies the finite-evidence rule to the statistic rows.
pub fn decide_class(rows: &[StatRow], rule: &DecisionRule) -> Result<Verdict> {
    let needed = rule.window.max(1);
    if rows.len() < needed {
        return Err(Error::InsufficientRows {
            needed,
            got: rows.len(),
        });
    }
    let tail = &rows[rows.len() - needed..];
    let rising = tail.windows(2).all(|w| w[0].ratio <= w[1].ratio);
    let last = tail[tail.len() - 1].ratio;
    if rising && last > Ratio::from_integer(rule.nonzero_threshold) {
        return Ok(Verdict::EvidenceNonzero);
    }
    if rows.iter().all(|r| r.ratio <= Ratio::from_integer(rule.zero_threshold)) {
        return Ok(Verdict::EvidenceZero);
    }
    Ok(Verdict::Inconclusive)
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingReport {
    pub chain: String,
    pub family: String,
    pub rows: Vec<StatRow>,
    pub verdict: Verdict,
    pub rule: DecisionRule,
}

impl VanishingReport {
    pub fn new(chain: &UFChain, family: &FolnerFamily, rows: Vec<StatRow>, rule: DecisionRule) -> Result<Self> {
        let verdict = decide_class(&rows, &rule)?;
        Ok(VanishingReport {
            chain: chain.label().to_string(),
            family: format!("{:?} on {}", family.kind(), family.group()),
            rows,
            verdict,
            rule,
        })
    }

    /// CSV `i,sum_abs,boundary,ratio` followed by a `# verdict` comment row.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["i", "sum_abs", "boundary", "ratio"])?;
            for r in &self.rows {
                w.write_record([
                    r.i.to_string(),
                    r.sum_abs.to_string(),
                    r.boundary.to_string(),
                    format!("{}/{}", r.ratio.numer(), r.ratio.denom()),
                ])?;
            }
            w.flush()?;
        }
        writeln!(
            out,
            "# verdict: {} (window={}, nonzero>{}, zero<={})",
            self.verdict, self.rule.window, self.rule.nonzero_threshold, self.rule.zero_threshold
        )?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folner::standard_family;
    use crate::qi;

    fn z() -> MarkedGroup {
        "Z".parse().unwrap()
    }

    fn int(v: i64) -> GroupElement {
        GroupElement::Lattice(vec![v])
    }

    fn excess() -> UFChain {
        let two: MarkedGroup = "2Z".parse().unwrap();
        UFChain::difference(UFChain::whole(&z()), UFChain::subgroup(&two)).unwrap()
    }

    #[test]
    fn indicator_and_difference() {
        let two: MarkedGroup = "2Z".parse().unwrap();
        let h = UFChain::subgroup(&two);
        assert_eq!(h.coeff(&int(4)).unwrap(), 1);
        assert_eq!(h.coeff(&int(3)).unwrap(), 0);
        let c = excess();
        assert_eq!(c.coeff(&int(3)).unwrap(), 1);
        assert_eq!(c.coeff(&int(4)).unwrap(), 0);
        assert_eq!(c.bound(), 2);
        assert_eq!(c.label(), "[G] - [2Z]");
    }

    #[test]
    fn exact_pushforward() {
        let f = qi::floor_map_z(2).unwrap();
        let c = UFChain::pushforward(&f).unwrap();
        for y in -20..=20 {
            assert_eq!(c.coeff(&int(y)).unwrap(), 2);
        }
        let id = UFChain::pushforward(&QIMap::identity(&z())).unwrap();
        assert_eq!(id.coeff(&int(-9)).unwrap(), 1);
    }

    #[test]
    fn window_pushforward() {
        let f = qi::floor_map_z(2).unwrap();
        let src = Ball::new(&z(), 20, 1000).unwrap();
        let tgt = Ball::new(&z(), 12, 1000).unwrap();
        let p = pushforward_chain(&f, &src, &tgt).unwrap();
        // fibers {2y, 2y+1} inside [-20, 20] for -10 <= y <= 9
        assert_eq!(p.interior.len(), 20);
        for y in &p.interior {
            assert_eq!(p.chain.coeff(y).unwrap(), 2);
        }
        assert!(p.boundary.contains(&int(10)));
        assert!(matches!(p.chain.coeff(&int(10)), Err(Error::IncompleteFiber(_))));

        let two: MarkedGroup = "2Z".parse().unwrap();
        let inc = qi::inclusion_map(&two, &z()).unwrap();
        let p = pushforward_chain(&inc, &Ball::new(&two, 10, 100).unwrap(), &tgt).unwrap();
        assert_eq!(p.chain.coeff(&int(4)).unwrap(), 1);
        assert_eq!(p.chain.coeff(&int(5)).unwrap(), 0);
    }

    #[test]
    fn single_edge_boundary() {
        let edges = HashMap::from([((int(0), int(1)), 1)]);
        let e = EdgeChain::table(&z(), edges).unwrap();
        assert_eq!(e.reach(), 1);
        let d = boundary_1(&e, &Ball::new(&z(), 5, 100).unwrap()).unwrap();
        assert_eq!(d.coeff(&int(1)).unwrap(), 1);
        assert_eq!(d.coeff(&int(0)).unwrap(), -1);
        assert_eq!(d.coeff(&int(3)).unwrap(), 0);
        assert!(d.coeff(&int(5)).is_err());
    }

    #[test]
    fn telescoping_and_alternating_boundaries() {
        let w = Ball::new(&z(), 10, 100).unwrap();
        let all = EdgeChain::translates(&z(), Subset::Whole, int(1), 1).unwrap();
        let d = boundary_1(&all, &w).unwrap();
        for x in -9..=9 {
            assert_eq!(d.coeff(&int(x)).unwrap(), 0);
        }
        let evens = EdgeChain::translates(&z(), Subset::Subgroup("2Z".parse().unwrap()), int(1), 1).unwrap();
        let d = boundary_1(&evens, &w).unwrap();
        for x in -9..=9 {
            assert_eq!(d.coeff(&int(x)).unwrap(), if x % 2 == 0 { -1 } else { 1 });
        }
        assert!(matches!(
            boundary_1(&evens, &Ball::new(&z(), 0, 10).unwrap()),
            Err(Error::WindowTooSmall(_))
        ));
    }

    #[test]
    fn statistic_rows_for_the_excess_chain() {
        let fam = standard_family(&z()).unwrap();
        let rows = folner_statistic(&excess(), &fam, 40, 10_000).unwrap();
        for r in rows.iter().filter(|r| r.i % 2 == 0) {
            assert_eq!((r.sum_abs, r.boundary), (r.i as u64, 2));
            assert_eq!(r.ratio, Ratio::new(r.i as u64, 2));
        }
        assert_eq!(decide_class(&rows, &DecisionRule::default()).unwrap(), Verdict::EvidenceNonzero);
    }

    #[test]
    fn statistic_rows_for_a_boundary_chain() {
        let fam = standard_family(&z()).unwrap();
        let e = EdgeChain::translates(&z(), Subset::Subgroup("2Z".parse().unwrap()), int(1), 1).unwrap();
        let d = boundary_1(&e, &Ball::new(&z(), 30, 100).unwrap()).unwrap();
        let rows = folner_statistic(&d, &fam, 20, 10_000).unwrap();
        assert!(rows.iter().all(|r| r.sum_abs <= 1));
        assert_eq!(decide_class(&rows, &DecisionRule::default()).unwrap(), Verdict::EvidenceZero);
    }

    #[test]
    fn pushforward_excess_grows() {
        let fam = standard_family(&z()).unwrap();
        let f = qi::floor_map_z(2).unwrap();
        let c = UFChain::difference(UFChain::pushforward(&f).unwrap(), UFChain::whole(&z())).unwrap();
        let rows = folner_statistic(&c, &fam, 10, 10_000).unwrap();
        for r in &rows {
            assert_eq!(r.sum_abs, 2 * r.i as u64 + 1);
        }
    }

    #[test]
    fn translated_sets() {
        let fam = standard_family(&z()).unwrap();
        let rows = folner_statistic_translated(&excess(), &fam, 10, &int(1), 10_000).unwrap();
        // [1-i, 1+i] with i even holds i+1 odd integers
        assert_eq!(rows[1].sum_abs, 3);
    }

    fn rows_from(ratios: &[(u64, u64)]) -> Vec<StatRow> {
        ratios
            .iter()
            .enumerate()
            .map(|(k, &(s, b))| StatRow::new(k as u32 + 1, s, b))
            .collect()
    }

    #[test]
    fn decision_rule_cases() {
        let rule = DecisionRule::default();
        let small = rows_from(&[(1, 2); 8]);
        assert_eq!(decide_class(&small, &rule).unwrap(), Verdict::EvidenceZero);
        let wobble = rows_from(&[(1, 1), (5, 1), (2, 1), (4, 1), (1, 1), (3, 1)]);
        assert_eq!(decide_class(&wobble, &rule).unwrap(), Verdict::Inconclusive);
        assert!(matches!(
            decide_class(&small[..4], &rule),
            Err(Error::InsufficientRows { needed: 5, got: 4 })
        ));
    }

    #[test]
    fn csv_report() {
        let fam = standard_family(&z()).unwrap();
        let c = excess();
        let rows = folner_statistic(&c, &fam, 6, 1000).unwrap();
        let rep = VanishingReport::new(&c, &fam, rows, DecisionRule::default()).unwrap();
        let mut out = Vec::new();
        rep.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("i,sum_abs,boundary,ratio\n1,2,2,1/1\n"));
        assert!(text.trim_end().ends_with("# verdict: inconclusive (window=5, nonzero>10, zero<=2)"));
    }
}
