//! Finite subsets, exterior boundaries and isoperimetric profiles.

use std::collections::HashSet;
use std::io::Write;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::ball::Ball;
use crate::element::GroupElement;
use crate::error::{Error, Result};
use crate::group::{Family, MarkedGroup};

/// How a subset was produced; rule-defined subsets carry a membership
/// predicate that must agree with their enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetRule {
    Explicit,
    /// `Z^m`: the box `[-r, r]^m`; `ZxCk`: `[-r, r] × Z/k`.
    Box { radius: i64 },
    /// `BS(1,m)`: `{(k, j) : 0 ≤ k < levels, 0 ≤ j < m^(2·levels)}`, i.e. the words `b^j a^k`.
    BsRectangle { levels: u32 },
    /// Word-metric ball.
    Ball { radius: u32 },
}

#[derive(Clone, Debug)]
pub struct FiniteSubset {
    group: MarkedGroup,
    rule: SetRule,
    members: Vec<GroupElement>,
    set: HashSet<GroupElement>,
}

impl FiniteSubset {
    /// An explicit subset; members are deduplicated and sorted.
    pub fn explicit(group: &MarkedGroup, members: impl IntoIterator<Item = GroupElement>) -> Self {
        let set: HashSet<GroupElement> = members.into_iter().collect();
        let mut members: Vec<GroupElement> = set.iter().cloned().collect();
        members.sort();
        FiniteSubset {
            group: group.clone(),
            rule: SetRule::Explicit,
            members,
            set,
        }
    }

    fn from_rule(group: &MarkedGroup, rule: SetRule, members: Vec<GroupElement>) -> Self {
        let set = members.iter().cloned().collect();
        FiniteSubset {
            group: group.clone(),
            rule,
            members,
            set,
        }
    }

    /// Integer interval `[lo, hi]` in `Z`.
    pub fn interval(group: &MarkedGroup, lo: i64, hi: i64) -> Self {
        Self::explicit(group, (lo..=hi).map(|k| GroupElement::Lattice(vec![k])))
    }

    pub fn group(&self) -> &MarkedGroup {
        &self.group
    }

    pub fn rule(&self) -> &SetRule {
        &self.rule
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[GroupElement] {
        &self.members
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.set.contains(g)
    }

    /// Membership by the defining rule alone, without the enumerated set.
    pub fn rule_contains(&self, g: &GroupElement) -> bool {
        match (&self.rule, g) {
            (SetRule::Explicit, _) => self.set.contains(g),
            (SetRule::Box { radius }, GroupElement::Lattice(v)) => {
                v.iter().all(|x| x.abs() <= *radius)
            }
            (SetRule::Box { radius }, GroupElement::Cyclic { int, .. }) => int.abs() <= *radius,
            (SetRule::BsRectangle { levels }, GroupElement::Affine { level, shift }) => {
                let Family::BaumslagSolitar(m) = self.group.family() else {
                    return false;
                };
                let width = num_bigint::BigInt::from(m).pow(2 * levels);
                *level >= 0
                    && *level < *levels as i64
                    && shift
                        .to_integer()
                        .is_some_and(|j| j.sign() != num_bigint::Sign::Minus && *j < width)
            }
            (SetRule::Ball { radius }, _) => match self.group.closed_form_length(g) {
                Some(l) => l <= *radius as u64,
                None => self.set.contains(g),
            },
            _ => false,
        }
    }
}

fn exterior(s: &FiniteSubset) -> HashSet<GroupElement> {
    let group = s.group();
    let mut out = HashSet::new();
    for x in s.members() {
        for t in group.generators() {
            let y = group.multiply(x, &t.element);
            if !s.contains(&y) {
                out.insert(y);
            }
        }
    }
    out
}

/// Exterior boundary `∂S = {s·t ∉ S : s ∈ S, t a generator}`.
///
/// For a word metric this is exactly `{x : 0 < d(x,S) ≤ 1}`.
pub fn boundary(s: &FiniteSubset) -> FiniteSubset {
    FiniteSubset::explicit(s.group(), exterior(s))
}

pub fn boundary_size(s: &FiniteSubset) -> usize {
    exterior(s).len()
}

/// Left translate `g·S`. Left multiplication is an isometry of the word
/// metric, so size and boundary size are preserved.
pub fn translate(s: &FiniteSubset, g: &GroupElement) -> FiniteSubset {
    let group = s.group();
    FiniteSubset::explicit(group, s.members().iter().map(|x| group.multiply(g, x)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// Boxes `[-i,i]^m` in `Z^m`, or `[-i,i] × Z/k` in `ZxCk`.
    Boxes,
    /// `S_N = {b^j a^k : 0 ≤ k < N, 0 ≤ j < m^(2N)}` in `BS(1,m)`.
    BsRectangles,
    /// Word balls; used as the contrast family in non-amenable groups.
    WordBalls,
}

/// An indexed family `i ↦ S_i`, `i ≥ 1`.
#[derive(Clone, Debug)]
pub struct FolnerFamily {
    group: MarkedGroup,
    kind: FamilyKind,
}

/// The standard Følner family of an amenable group.
pub fn standard_family(group: &MarkedGroup) -> Result<FolnerFamily> {
    let kind = match group.family() {
        Family::FreeAbelian(_) | Family::DirectWithCyclic(_) => FamilyKind::Boxes,
        Family::BaumslagSolitar(_) => FamilyKind::BsRectangles,
        Family::Free(_) => return Err(Error::NotAmenable(group.to_string())),
    };
    if !group.is_standard() {
        return Err(Error::InvalidParameter(format!(
            "standard families are defined for standard markings, got {group}"
        )));
    }
    Ok(FolnerFamily {
        group: group.clone(),
        kind,
    })
}

impl FolnerFamily {
    /// Balls of radius `i`; not a Følner family in general.
    pub fn word_balls(group: &MarkedGroup) -> FolnerFamily {
        FolnerFamily {
            group: group.clone(),
            kind: FamilyKind::WordBalls,
        }
    }

    pub fn group(&self) -> &MarkedGroup {
        &self.group
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    /// Largest index whose set has at most `budget` elements.
    pub fn default_max_index(&self, budget: usize) -> u32 {
        let mut i = 1;
        while i < 64 && self.predicted_size(i + 1).is_some_and(|s| s <= budget as u128) {
            i += 1;
        }
        i
    }

    fn predicted_size(&self, i: u32) -> Option<u128> {
        match (self.kind, self.group.family()) {
            (FamilyKind::Boxes, Family::FreeAbelian(m)) => {
                (2 * i as u128 + 1).checked_pow(m as u32)
            }
            (FamilyKind::Boxes, Family::DirectWithCyclic(k)) => {
                (2 * i as u128 + 1).checked_mul(k as u128)
            }
            (FamilyKind::BsRectangles, Family::BaumslagSolitar(m)) => {
                (m as u128).checked_pow(2 * i)?.checked_mul(i as u128)
            }
            (FamilyKind::WordBalls, Family::Free(r)) => {
                // 1 + 2r((2r-1)^i - 1)/(2r-2)
                let q = 2 * r as u128 - 1;
                Some(1 + 2 * r as u128 * (q.checked_pow(i)? - 1) / (q - 1))
            }
            _ => None,
        }
    }

    /// The set `S_i`.
    pub fn set(&self, i: u32, budget: usize) -> Result<FiniteSubset> {
        if i == 0 {
            return Err(Error::InvalidParameter("family indices start at 1".into()));
        }
        if let Some(size) = self.predicted_size(i) {
            if size > budget as u128 {
                return Err(Error::Budget {
                    what: format!("Følner set S_{i} in {}", self.group),
                    limit: budget,
                });
            }
        }
        let g = &self.group;
        let r = i as i64;
        let members = match (self.kind, g.family()) {
            (FamilyKind::Boxes, Family::FreeAbelian(m)) => {
                let mut out = vec![Vec::with_capacity(m)];
                for _ in 0..m {
                    out = out
                        .into_iter()
                        .flat_map(|v| {
                            (-r..=r).map(move |x| {
                                let mut w = v.clone();
                                w.push(x);
                                w
                            })
                        })
                        .collect();
                }
                let members = out.into_iter().map(GroupElement::Lattice).collect();
                return Ok(FiniteSubset::from_rule(g, SetRule::Box { radius: r }, members));
            }
            (FamilyKind::Boxes, Family::DirectWithCyclic(k)) => {
                let members = (-r..=r)
                    .flat_map(|a| (0..k).map(move |e| GroupElement::Cyclic { int: a, residue: e }))
                    .collect();
                return Ok(FiniteSubset::from_rule(g, SetRule::Box { radius: r }, members));
            }
            (FamilyKind::BsRectangles, Family::BaumslagSolitar(m)) => {
                let width = (m as u64).pow(2 * i);
                let members = (0..r)
                    .flat_map(|k| (0..width).map(move |j| GroupElement::affine(k, j)))
                    .collect();
                return Ok(FiniteSubset::from_rule(
                    g,
                    SetRule::BsRectangle { levels: i },
                    members,
                ));
            }
            (FamilyKind::WordBalls, _) => Ball::new(g, i, budget)?.elements().to_vec(),
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "family {:?} undefined for {}",
                    self.kind, self.group
                )))
            }
        };
        Ok(FiniteSubset::from_rule(g, SetRule::Ball { radius: i }, members))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileRow {
    pub i: u32,
    pub size: u64,
    pub boundary_size: u64,
    pub ratio: Ratio<u64>,
}

impl ProfileRow {
    pub fn ratio_f64(&self) -> f64 {
        *self.ratio.numer() as f64 / *self.ratio.denom() as f64
    }
}

/// Exact `|S_i|`, `|∂S_i|` and their ratio for `i = 1..=i_max`.
pub fn profile(family: &FolnerFamily, i_max: u32, budget: usize) -> Result<Vec<ProfileRow>> {
    (1..=i_max)
        .into_par_iter()
        .map(|i| {
            let s = family.set(i, budget)?;
            let size = s.len() as u64;
            let boundary_size = boundary_size(&s) as u64;
            Ok(ProfileRow {
                i,
                size,
                boundary_size,
                ratio: Ratio::new(boundary_size, size),
            })
        })
        .collect()
}

/// Whether the ratio column strictly decreases over the rows.
pub fn strictly_decreasing(rows: &[ProfileRow]) -> bool {
    rows.windows(2).all(|w| w[1].ratio < w[0].ratio)
}

/// Index from which the ratio column is non-increasing to the end, if any.
pub fn eventually_decreasing_from(rows: &[ProfileRow]) -> Option<u32> {
    let mut start = rows.len().checked_sub(1)?;
    while start > 0 && rows[start].ratio <= rows[start - 1].ratio {
        start -= 1;
    }
    Some(rows[start].i)
}

/// CSV: `i,size,boundary_size,ratio,ratio_decimal`.
pub fn write_profile_csv<W: Write>(rows: &[ProfileRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["i", "size", "boundary_size", "ratio", "ratio_decimal"])?;
    for r in rows {
        w.write_record([
            r.i.to_string(),
            r.size.to_string(),
            r.boundary_size.to_string(),
            format!("{}/{}", r.ratio.numer(), r.ratio.denom()),
            format!("{:.6}", r.ratio_f64()),
        ])?;
    }
    w.flush()?;
    Ok(())
}
