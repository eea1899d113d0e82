//! Bounded-displacement bijections on finite windows.
//!
//! A map `f: X → Y` is a bounded distance from a bijection iff some `R`
//! admits a perfect matching between `X` and `Y` using only pairs with
//! `d(y, f(x)) ≤ R`. On a window we ask for a matching that covers every
//! interior target and every interior source; the minimal such `R` at
//! window scale `L` is `R*(L)`, and its growth in `L` separates maps that
//! can be straightened into bijections from maps that cannot.
//!
//! Window shape:
//! * sources are the elements of the source subgroup with standard word
//!   length at most `L`;
//! * `L'` is the largest word length of an image;
//! * targets are everything within `R` of an image, plus the interior;
//! * a target is interior when `|y| ≤ L' − R − C_f` and, checked exactly,
//!   every point within `R` of it has its whole fiber among the sources.
//!
//! Every source is interior, since its full neighbourhood is in the window.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ball::{Ball, Limits, WordMetric};
use crate::element::GroupElement;
use crate::error::{Error, Result};
use crate::qi::QIMap;

#[derive(Clone, Debug)]
pub struct MatchingWindow {
    map: QIMap,
    l: u32,
    r: u32,
    sources: Vec<GroupElement>,
    images: Vec<GroupElement>,
    targets: Vec<GroupElement>,
    source_interior: Vec<bool>,
    target_interior: Vec<bool>,
    adj: Vec<Vec<usize>>,
    image_radius: u32,
    margin: u32,
    exact_exclusions: usize,
}

impl MatchingWindow {
    pub fn map(&self) -> &QIMap {
        &self.map
    }

    pub fn scale(&self) -> u32 {
        self.l
    }

    pub fn radius(&self) -> u32 {
        self.r
    }

    pub fn sources(&self) -> &[GroupElement] {
        &self.sources
    }

    pub fn targets(&self) -> &[GroupElement] {
        &self.targets
    }

    pub fn image(&self, s: usize) -> &GroupElement {
        &self.images[s]
    }

    pub fn neighbors(&self, s: usize) -> &[usize] {
        &self.adj[s]
    }

    pub fn is_interior_target(&self, t: usize) -> bool {
        self.target_interior[t]
    }

    pub fn is_interior_source(&self, s: usize) -> bool {
        self.source_interior[s]
    }

    pub fn interior_targets(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.targets.len()).filter(|&t| self.target_interior[t])
    }

    pub fn interior_sources(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.sources.len()).filter(|&s| self.source_interior[s])
    }

    pub fn source_id(&self, x: &GroupElement) -> Option<usize> {
        self.sources.binary_search(x).ok()
    }

    pub fn target_id(&self, y: &GroupElement) -> Option<usize> {
        self.targets.binary_search(y).ok()
    }

    /// Largest word length of an image of a source.
    pub fn image_radius(&self) -> u32 {
        self.image_radius
    }

    /// Interior margin `R + C_f`.
    pub fn margin(&self) -> u32 {
        self.margin
    }

    /// Targets passing the margin test but failing the exact fiber check.
    pub fn exact_exclusions(&self) -> usize {
        self.exact_exclusions
    }

    pub fn margin_formula(&self) -> String {
        format!(
            "|y| <= L' - (R + C) = {} - ({} + {}) with exact fiber check",
            self.image_radius,
            self.r,
            self.map.claimed().c
        )
    }

    /// Re-evaluates `d(y, f(x)) ≤ R` from scratch.
    pub fn edge(&self, s: usize, t: usize) -> bool {
        let g = self.map.target();
        let diff = g.multiply(&g.inverse(&self.map.apply(&self.sources[s])), &self.targets[t]);
        g.closed_form_length(&diff).is_some_and(|d| d <= self.r as u64)
    }
}

/// Builds the window at scale `L` and displacement `R`.
pub fn build_window(f: &QIMap, l: u32, r: u32, limits: &Limits) -> Result<MatchingWindow> {
    let tgt = f.target();
    if !tgt.has_closed_form_length() {
        return Err(Error::UnsupportedMap(format!(
            "matching windows need closed-form word lengths on {tgt}"
        )));
    }
    let budget = limits.ball_elements;
    let std_src = f.source().standard();
    let mut sources: Vec<GroupElement> = Ball::new(&std_src, l, budget)?
        .elements()
        .iter()
        .filter(|x| f.source().contains(x))
        .cloned()
        .collect();
    sources.sort();
    let images: Vec<GroupElement> = sources.iter().map(|x| f.apply(x)).collect();
    let len = |y: &GroupElement| tgt.closed_form_length(y).expect("closed form") as u32;
    let image_radius = images.iter().map(len).max().unwrap_or(0);

    let disc = Ball::new(tgt, r, budget)?;
    let mut target_set: BTreeMap<GroupElement, usize> = BTreeMap::new();
    let mut raw_adj: Vec<Vec<GroupElement>> = Vec::with_capacity(sources.len());
    for y in &images {
        let nb: Vec<GroupElement> = disc.elements().iter().map(|b| tgt.multiply(y, b)).collect();
        for z in &nb {
            target_set.insert(z.clone(), 0);
        }
        raw_adj.push(nb);
    }

    let c = f.claimed().c.ceil().to_integer().max(0) as u32;
    let margin = r + c;
    let source_set: HashSet<&GroupElement> = sources.iter().collect();
    let mut good: HashMap<GroupElement, bool> = HashMap::new();
    let mut fiber_inside = |z: &GroupElement| -> bool {
        if let Some(&v) = good.get(z) {
            return v;
        }
        let v = f.preimages(z).iter().all(|x| source_set.contains(x));
        good.insert(z.clone(), v);
        v
    };
    let mut interior: HashSet<GroupElement> = HashSet::new();
    let mut exact_exclusions = 0;
    if image_radius >= margin {
        for y in Ball::new(tgt, image_radius - margin, budget)?.elements() {
            if disc.elements().iter().all(|b| fiber_inside(&tgt.multiply(y, b))) {
                interior.insert(y.clone());
            } else {
                exact_exclusions += 1;
            }
        }
    }
    for y in &interior {
        target_set.insert(y.clone(), 0);
    }

    let vertices = sources.len() + target_set.len();
    if vertices > limits.matching_vertices {
        return Err(Error::Budget {
            what: format!("matching window for {} at L={l}, R={r}", f.name()),
            limit: limits.matching_vertices,
        });
    }
    let targets: Vec<GroupElement> = target_set.keys().cloned().collect();
    for (i, v) in target_set.values_mut().enumerate() {
        *v = i;
    }
    let adj = raw_adj
        .into_iter()
        .map(|nb| {
            let mut ids: Vec<usize> = nb.iter().map(|z| target_set[z]).collect();
            ids.sort_unstable();
            ids.dedup();
            ids
        })
        .collect();
    let target_interior = targets.iter().map(|y| interior.contains(y)).collect();
    Ok(MatchingWindow {
        map: f.clone(),
        l,
        r,
        source_interior: vec![true; sources.len()],
        sources,
        images,
        targets,
        target_interior,
        adj,
        image_radius,
        margin,
        exact_exclusions,
    })
}

const FREE: usize = usize::MAX;

/// Hopcroft–Karp on the bipartite graph `left → right` restricted to the
/// active vertices on each side. Returns `(mate_left, mate_right)`.
fn hopcroft_karp(
    adj: &[Vec<usize>],
    n_right: usize,
    left_on: &[bool],
    right_on: &[bool],
) -> (Vec<usize>, Vec<usize>) {
    let n_left = adj.len();
    let mut ml = vec![FREE; n_left];
    let mut mr = vec![FREE; n_right];
    let mut dist = vec![0u32; n_left];
    loop {
        let mut queue = VecDeque::new();
        for u in 0..n_left {
            if left_on[u] && ml[u] == FREE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = u32::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !right_on[v] {
                    continue;
                }
                match mr[v] {
                    FREE => found = true,
                    w if dist[w] == u32::MAX => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }
        let mut it = vec![0usize; n_left];
        for u in 0..n_left {
            if left_on[u] && ml[u] == FREE {
                augment(u, adj, right_on, &mut ml, &mut mr, &mut dist, &mut it);
            }
        }
    }
    (ml, mr)
}

/// Iterative layered DFS step of Hopcroft–Karp.
fn augment(
    root: usize,
    adj: &[Vec<usize>],
    right_on: &[bool],
    ml: &mut [usize],
    mr: &mut [usize],
    dist: &mut [u32],
    it: &mut [usize],
) -> bool {
    let mut stack = vec![root];
    while let Some(&u) = stack.last() {
        if it[u] == adj[u].len() {
            dist[u] = u32::MAX;
            stack.pop();
            continue;
        }
        let v = adj[u][it[u]];
        it[u] += 1;
        if !right_on[v] {
            continue;
        }
        let w = mr[v];
        if w == FREE {
            // flip the path root .. u, v
            let mut v = v;
            while let Some(u) = stack.pop() {
                let prev = ml[u];
                ml[u] = v;
                mr[v] = u;
                v = prev;
            }
            return true;
        }
        if dist[w] == dist[u] + 1 {
            stack.push(w);
        }
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Targets,
    Sources,
}

/// A set `A` on one side with `|N(A)| < |A|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallViolator {
    pub side: Side,
    pub set: Vec<usize>,
    pub neighbors: Vec<usize>,
}

impl HallViolator {
    /// `|N(A)|` recomputed from the edge predicate over the whole window,
    /// restricted to the vertices the saturation question allows.
    pub fn recount(&self, w: &MatchingWindow) -> usize {
        match self.side {
            Side::Targets => (0..w.sources.len())
                .filter(|&s| self.set.iter().any(|&t| w.edge(s, t)))
                .count(),
            Side::Sources => (0..w.targets.len())
                .filter(|&t| self.set.iter().any(|&s| w.edge(s, t)))
                .count(),
        }
    }

    pub fn is_sound(&self, w: &MatchingWindow) -> bool {
        self.recount(w) < self.set.len()
    }
}

#[derive(Clone, Debug)]
pub struct MatchingResult {
    /// `(source, target)` pairs sorted by source.
    pub pairs: Vec<(usize, usize)>,
    pub target_saturated: bool,
    pub source_interior_saturated: bool,
    pub deficiency: usize,
    pub target_violator: Option<HallViolator>,
    pub source_violator: Option<HallViolator>,
    pub interior_targets: usize,
    pub interior_sources: usize,
}

impl MatchingResult {
    pub fn is_perfect(&self) -> bool {
        self.target_saturated && self.source_interior_saturated
    }

    pub fn violator_size(&self) -> usize {
        self.target_violator.as_ref().map_or(0, |v| v.set.len())
            + self.source_violator.as_ref().map_or(0, |v| v.set.len())
    }
}

fn reverse_adj(w: &MatchingWindow) -> Vec<Vec<usize>> {
    let mut rev = vec![Vec::new(); w.targets.len()];
    for (s, nb) in w.adj.iter().enumerate() {
        for &t in nb {
            rev[t].push(s);
        }
    }
    rev
}

/// Alternating reachability from the free active vertices of one side.
fn violator(
    side: Side,
    from_adj: &[Vec<usize>],
    active: &[bool],
    mate_from: &[usize],
    mate_to: &[usize],
) -> HallViolator {
    let mut seen_from = vec![false; from_adj.len()];
    let mut seen_to = vec![false; mate_to.len()];
    let mut queue: VecDeque<usize> = (0..from_adj.len())
        .filter(|&u| active[u] && mate_from[u] == FREE)
        .collect();
    for &u in &queue {
        seen_from[u] = true;
    }
    while let Some(u) = queue.pop_front() {
        for &v in &from_adj[u] {
            if seen_to[v] {
                continue;
            }
            seen_to[v] = true;
            let w = mate_to[v];
            if w != FREE && !seen_from[w] {
                seen_from[w] = true;
                queue.push_back(w);
            }
        }
    }
    HallViolator {
        side,
        set: (0..seen_from.len()).filter(|&u| seen_from[u]).collect(),
        neighbors: (0..seen_to.len()).filter(|&v| seen_to[v]).collect(),
    }
}

/// Maximum matchings for both saturation questions, Hall violators for the
/// failing ones, and one matching realizing every saturation that holds.
pub fn max_matching(w: &MatchingWindow) -> MatchingResult {
    let ns = w.sources.len();
    let nt = w.targets.len();
    let all_s = vec![true; ns];
    let all_t = vec![true; nt];

    let (ml_t, mr_t) = hopcroft_karp(&w.adj, nt, &all_s, &w.target_interior);
    let (ml_s, mr_s) = hopcroft_karp(&w.adj, nt, &w.source_interior, &all_t);

    let interior_targets = w.target_interior.iter().filter(|&&b| b).count();
    let interior_sources = w.source_interior.iter().filter(|&&b| b).count();
    let nu_t = w.interior_targets().filter(|&t| mr_t[t] != FREE).count();
    let nu_s = w.interior_sources().filter(|&s| ml_s[s] != FREE).count();
    let target_saturated = nu_t == interior_targets;
    let source_saturated = nu_s == interior_sources;

    let rev = reverse_adj(w);
    let target_violator = (!target_saturated).then(|| {
        // restrict sources' view to interior targets, as in the matching
        let rev_i: Vec<Vec<usize>> = (0..nt)
            .map(|t| if w.target_interior[t] { rev[t].clone() } else { Vec::new() })
            .collect();
        violator(Side::Targets, &rev_i, &w.target_interior, &mr_t, &ml_t)
    });
    let source_violator =
        (!source_saturated).then(|| violator(Side::Sources, &w.adj, &w.source_interior, &ml_s, &mr_s));

    let pairs = combine(w, &ml_s, &ml_t, &mr_t);
    MatchingResult {
        pairs,
        target_saturated,
        source_interior_saturated: source_saturated,
        deficiency: (interior_targets - nu_t) + (interior_sources - nu_s),
        target_violator,
        source_violator,
        interior_targets,
        interior_sources,
    }
}

/// Merges a source-saturating matching `m1` and a target-saturating one `m2`
/// component by component in their symmetric difference, keeping every
/// interior vertex either covers.
fn combine(w: &MatchingWindow, ml1: &[usize], ml2: &[usize], mr2: &[usize]) -> Vec<(usize, usize)> {
    let ns = ml1.len();
    let nt = mr2.len();
    let mut mr1 = vec![FREE; nt];
    for (s, &t) in ml1.iter().enumerate() {
        if t != FREE {
            mr1[t] = s;
        }
    }
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    let mut done_s = vec![false; ns];
    let mut done_t = vec![false; nt];
    // shared edges
    for s in 0..ns {
        if ml1[s] != FREE && ml1[s] == ml2[s] {
            chosen.push((s, ml1[s]));
            done_s[s] = true;
            done_t[ml1[s]] = true;
        }
    }
    // walk each component of the symmetric difference
    let component = |start_s: Option<usize>, start_t: Option<usize>, done_s: &mut Vec<bool>, done_t: &mut Vec<bool>| {
        let mut vs = Vec::new();
        let mut vt = Vec::new();
        let mut qs: Vec<usize> = start_s.into_iter().collect();
        let mut qt: Vec<usize> = start_t.into_iter().collect();
        while !qs.is_empty() || !qt.is_empty() {
            if let Some(s) = qs.pop() {
                if done_s[s] {
                    continue;
                }
                done_s[s] = true;
                vs.push(s);
                for t in [ml1[s], ml2[s]] {
                    if t != FREE && !done_t[t] {
                        qt.push(t);
                    }
                }
            } else if let Some(t) = qt.pop() {
                if done_t[t] {
                    continue;
                }
                done_t[t] = true;
                vt.push(t);
                for s in [mr1[t], mr2[t]] {
                    if s != FREE && !done_s[s] {
                        qs.push(s);
                    }
                }
            }
        }
        (vs, vt)
    };
    let mut comps = Vec::new();
    for s in 0..ns {
        if !done_s[s] && (ml1[s] != FREE || ml2[s] != FREE) {
            comps.push(component(Some(s), None, &mut done_s, &mut done_t));
        }
    }
    for t in 0..nt {
        if !done_t[t] && (mr1[t] != FREE || mr2[t] != FREE) {
            comps.push(component(None, Some(t), &mut done_s, &mut done_t));
        }
    }
    for (vs, vt) in comps {
        // m1 loses an interior target left uncovered by it
        let m1_bad = vt.iter().any(|&t| w.target_interior[t] && mr1[t] == FREE);
        if m1_bad {
            chosen.extend(vs.iter().filter(|&&s| ml2[s] != FREE).map(|&s| (s, ml2[s])));
        } else {
            chosen.extend(vs.iter().filter(|&&s| ml1[s] != FREE).map(|&s| (s, ml1[s])));
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Checks injectivity and re-evaluates the predicate on every pair.
pub fn validate(w: &MatchingWindow, r: &MatchingResult) -> Result<()> {
    let mut used_s = HashSet::new();
    let mut used_t = HashSet::new();
    for &(s, t) in &r.pairs {
        if !used_s.insert(s) || !used_t.insert(t) {
            return Err(Error::InvalidParameter(format!("pair ({s},{t}) breaks injectivity")));
        }
        if !w.edge(s, t) {
            return Err(Error::InvalidParameter(format!(
                "pair {} -> {} exceeds displacement {}",
                w.map.source().format(&w.sources[s]),
                w.map.target().format(&w.targets[t]),
                w.r
            )));
        }
    }
    let covered_t = w.interior_targets().filter(|t| used_t.contains(t)).count();
    let covered_s = w.interior_sources().filter(|s| used_s.contains(s)).count();
    if r.target_saturated && covered_t != r.interior_targets
        || r.source_interior_saturated && covered_s != r.interior_sources
    {
        return Err(Error::InvalidParameter("combined matching misses a saturated side".into()));
    }
    Ok(())
}

fn feasible(f: &QIMap, l: u32, r: u32, limits: &Limits) -> Result<bool> {
    Ok(max_matching(&build_window(f, l, r, limits)?).is_perfect())
}

/// Minimal `R ≤ r_max` with both interior saturations, by binary search.
pub fn r_star(f: &QIMap, l: u32, r_max: u32, limits: &Limits) -> Result<Option<u32>> {
    if !feasible(f, l, r_max, limits)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0, r_max);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if feasible(f, l, mid, limits)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(lo))
}

/// The same quantity by scanning `R = 0, 1, …`.
pub fn r_star_linear(f: &QIMap, l: u32, r_max: u32, limits: &Limits) -> Result<Option<u32>> {
    for r in 0..=r_max {
        if feasible(f, l, r, limits)? {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthRule {
    pub min_slope: f64,
    pub bounded_slack: u32,
}

impl Default for GrowthRule {
    fn default() -> Self {
        GrowthRule {
            min_slope: 0.25,
            bounded_slack: 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Growth {
    Bounded,
    Linear,
    Inconclusive,
}

impl fmt::Display for Growth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Growth::Bounded => "bounded",
            Growth::Linear => "linear",
            Growth::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RStarRow {
    #[serde(rename = "L")]
    pub l: u32,
    pub r_max: u32,
    pub r_star: Option<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RStarReport {
    pub map: String,
    pub rows: Vec<RStarRow>,
    pub slope: Option<f64>,
    pub verdict: Growth,
    pub note: Option<String>,
    pub rule: GrowthRule,
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Applies the growth rule to computed rows.
pub fn growth_verdict(rows: &[RStarRow], rule: &GrowthRule) -> (Option<f64>, Growth, Option<String>) {
    if let Some(row) = rows.iter().find(|r| r.r_star.is_none()) {
        return (
            None,
            Growth::Inconclusive,
            Some(format!("no R <= {} works at L={}", row.r_max, row.l)),
        );
    }
    let vals: Vec<u32> = rows.iter().map(|r| r.r_star.unwrap()).collect();
    let pts: Vec<(f64, f64)> = rows.iter().zip(&vals).map(|(r, &v)| (r.l as f64, v as f64)).collect();
    let slope = least_squares_slope(&pts);
    let increasing = vals.windows(2).all(|w| w[0] < w[1]);
    let verdict = if slope >= rule.min_slope && increasing {
        Growth::Linear
    } else if vals[vals.len() - 1] <= vals[0] + rule.bounded_slack {
        Growth::Bounded
    } else {
        Growth::Inconclusive
    };
    (Some(slope), verdict, None)
}

/// `R*(L)` over the scales and the growth verdict. `r_max` defaults to `2L`.
pub fn classify_growth(
    f: &QIMap,
    ls: &[u32],
    r_max: Option<u32>,
    rule: &GrowthRule,
    limits: &Limits,
) -> Result<RStarReport> {
    if ls.len() < 3 || ls.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "growth classification needs at least 3 increasing scales".into(),
        ));
    }
    let rows = ls
        .par_iter()
        .map(|&l| {
            let cap = r_max.unwrap_or(2 * l);
            Ok(RStarRow {
                l,
                r_max: cap,
                r_star: r_star(f, l, cap, limits)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (slope, verdict, note) = growth_verdict(&rows, rule);
    Ok(RStarReport {
        map: f.name().to_string(),
        rows,
        slope,
        verdict,
        note,
        rule: *rule,
    })
}

impl RStarReport {
    /// CSV `L,r_star,slope,verdict`; an infeasible row prints `none`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["L", "r_star", "slope", "verdict"])?;
        let slope = self.slope.map_or("nan".to_string(), |s| format!("{s:.6}"));
        for r in &self.rows {
            w.write_record([
                r.l.to_string(),
                r.r_star.map_or("none".to_string(), |v| v.to_string()),
                slope.clone(),
                self.verdict.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Saturations {
    pub target: bool,
    pub source: bool,
}

/// One matching run in report form.
#[derive(Clone, Debug, Serialize)]
pub struct MatchingSummary {
    pub map: String,
    #[serde(rename = "L")]
    pub l: u32,
    #[serde(rename = "R")]
    pub r: u32,
    pub matched: usize,
    pub deficiency: usize,
    pub violator_size: usize,
    pub saturations: Saturations,
    pub sources: usize,
    pub targets: usize,
    pub interior_targets: usize,
    pub margin: String,
}

impl MatchingSummary {
    pub fn new(w: &MatchingWindow, r: &MatchingResult) -> Self {
        MatchingSummary {
            map: w.map.name().to_string(),
            l: w.l,
            r: w.r,
            matched: r.pairs.len(),
            deficiency: r.deficiency,
            violator_size: r.violator_size(),
            saturations: Saturations {
                target: r.target_saturated,
                source: r.source_interior_saturated,
            },
            sources: w.sources.len(),
            targets: w.targets.len(),
            interior_targets: r.interior_targets,
            margin: w.margin_formula(),
        }
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }
}

/// The word metric of a target, exposed for callers that re-check edges.
pub fn target_metric(f: &QIMap, reach: u32, limits: &Limits) -> Result<WordMetric> {
    WordMetric::new(f.target(), reach, limits.ball_elements)
}
