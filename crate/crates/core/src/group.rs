//! Finitely generated groups with a fixed symmetric generating set.
//!
//! A [`MarkedGroup`] is a family (which fixes the multiplication law and the
//! normal form) together with a [`Marking`] (which fixes the generators and
//! therefore the word metric). Sublattice markings model finite-index
//! subgroups such as `2Z ⊂ Z` with their own intrinsic word metric while
//! keeping elements in ambient coordinates, so inclusions are literally the
//! identity on normal forms.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::element::{Adic, ElementDisplay, GroupElement};
use crate::error::{Error, Result};

const FREE_LETTERS: [char; 26] = [
    'x', 'y', 'z', 'u', 'v', 'w', 'a', 'b', 'c', 'd', 'f', 'g', 'h', 'i', 'j', 'k', 'l', 'm',
    'n', 'o', 'p', 'q', 'r', 's', 't', 'e',
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `Z^m`.
    FreeAbelian(usize),
    /// `BS(1,m) = ⟨a,b | aba⁻¹ = b^m⟩`.
    BaumslagSolitar(u32),
    /// Free group of the given rank.
    Free(usize),
    /// `Z × Z/k`.
    DirectWithCyclic(u64),
}

impl Family {
    /// Amenable families admit Følner sequences; free groups of rank ≥ 2 do not.
    pub fn is_amenable(&self) -> bool {
        !matches!(self, Family::Free(_))
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Family::FreeAbelian(0) => Err(Error::InvalidParameter("Z^m needs m ≥ 1".into())),
            Family::BaumslagSolitar(m) if m < 2 => Err(Error::InvalidParameter(format!(
                "BS(1,m) needs m ≥ 2, got {m}"
            ))),
            Family::Free(r) if !(2..=FREE_LETTERS.len()).contains(&r) => Err(
                Error::InvalidParameter(format!("free rank must be in 2..=26, got {r}")),
            ),
            Family::DirectWithCyclic(0) => {
                Err(Error::InvalidParameter("ZxCk needs k ≥ 1".into()))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::FreeAbelian(1) => write!(f, "Z"),
            Family::FreeAbelian(m) => write!(f, "Z^{m}"),
            Family::BaumslagSolitar(m) => write!(f, "BS(1,{m})"),
            Family::Free(r) => write!(f, "F_{r}"),
            Family::DirectWithCyclic(k) => write!(f, "ZxC{k}"),
        }
    }
}

/// Choice of generating set within a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Marking {
    /// The family's standard generators.
    Standard,
    /// Standard generators with the one along `coord` (1-based) scaled by
    /// `index`; generates a subgroup of that index.
    Sublattice { coord: usize, index: u64 },
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub label: String,
    pub element: GroupElement,
    /// Position of the inverse generator in the generator list.
    pub inverse: usize,
}

#[derive(Clone, Debug)]
pub struct MarkedGroup {
    family: Family,
    marking: Marking,
    generators: Vec<Generator>,
}

impl PartialEq for MarkedGroup {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family && self.marking == other.marking
    }
}

impl Eq for MarkedGroup {}

impl MarkedGroup {
    /// The family with its standard generators.
    pub fn new(family: Family) -> Result<Self> {
        Self::with_marking(family, Marking::Standard)
    }

    pub fn with_marking(family: Family, marking: Marking) -> Result<Self> {
        family.validate()?;
        if let Marking::Sublattice { coord, index } = marking {
            if index == 0 {
                return Err(Error::InvalidParameter("sublattice index must be ≥ 1".into()));
            }
            match family {
                Family::FreeAbelian(m) if (1..=m).contains(&coord) => {}
                Family::DirectWithCyclic(_) if coord == 1 => {}
                Family::DirectWithCyclic(k) if coord == 2 && k % index == 0 => {}
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "sublattice (coord {coord}, index {index}) unsupported for {family}"
                    )))
                }
            }
        }
        let generators = build_generators(family, marking);
        let group = MarkedGroup {
            family,
            marking,
            generators,
        };
        debug_assert!(group.inversion_is_involution());
        Ok(group)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn marking(&self) -> Marking {
        self.marking
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// The same family with its standard marking.
    pub fn standard(&self) -> MarkedGroup {
        MarkedGroup::new(self.family).expect("family already validated")
    }

    pub fn is_standard(&self) -> bool {
        self.marking == Marking::Standard
    }

    /// Index of the subgroup generated by this marking in the family's group.
    pub fn index(&self) -> u64 {
        match self.marking {
            Marking::Standard => 1,
            Marking::Sublattice { index, .. } => index,
        }
    }

    pub(crate) fn inversion_is_involution(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, g)| {
            let inv = &self.generators[g.inverse];
            inv.inverse == i && self.multiply(&g.element, &inv.element) == self.identity()
        })
    }

    fn bs_base(&self) -> u32 {
        match self.family {
            Family::BaumslagSolitar(m) => m,
            _ => 1,
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self.family {
            Family::FreeAbelian(m) => GroupElement::Lattice(vec![0; m]),
            Family::BaumslagSolitar(_) => GroupElement::Affine {
                level: 0,
                shift: Adic::zero(),
            },
            Family::Free(_) => GroupElement::Word(Vec::new()),
            Family::DirectWithCyclic(_) => GroupElement::Cyclic { int: 0, residue: 0 },
        }
    }

    /// Group product `g · h`.
    ///
    /// For BS(1,m) elements act as affine maps and the product is composition:
    /// `(k₁,q₁)(k₂,q₂) = (k₁+k₂, q₁ + m^{k₁} q₂)`.
    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        match (g, h) {
            (GroupElement::Lattice(a), GroupElement::Lattice(b)) => {
                GroupElement::Lattice(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (
                GroupElement::Affine { level: k1, shift: q1 },
                GroupElement::Affine { level: k2, shift: q2 },
            ) => {
                let m = self.bs_base();
                GroupElement::Affine {
                    level: k1 + k2,
                    shift: q1.add(&q2.mul_pow(*k1, m), m),
                }
            }
            (GroupElement::Word(a), GroupElement::Word(b)) => {
                let mut out = a.clone();
                for &l in b {
                    if out.last() == Some(&-l) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                GroupElement::Word(out)
            }
            (
                GroupElement::Cyclic { int: a1, residue: r1 },
                GroupElement::Cyclic { int: a2, residue: r2 },
            ) => {
                let Family::DirectWithCyclic(k) = self.family else {
                    unreachable!("cyclic element outside ZxCk")
                };
                GroupElement::Cyclic {
                    int: a1 + a2,
                    residue: (r1 + r2) % k,
                }
            }
            _ => panic!("multiply: elements from different families"),
        }
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        match g {
            GroupElement::Lattice(a) => GroupElement::Lattice(a.iter().map(|x| -x).collect()),
            GroupElement::Affine { level, shift } => {
                let m = self.bs_base();
                GroupElement::Affine {
                    level: -level,
                    shift: shift.neg().mul_pow(-level, m),
                }
            }
            GroupElement::Word(w) => GroupElement::Word(w.iter().rev().map(|l| -l).collect()),
            GroupElement::Cyclic { int, residue } => {
                let Family::DirectWithCyclic(k) = self.family else {
                    unreachable!("cyclic element outside ZxCk")
                };
                GroupElement::Cyclic {
                    int: -int,
                    residue: (k - residue) % k,
                }
            }
        }
    }

    /// Right neighbours `g·t` over the generators, in generator order.
    pub fn neighbors(&self, g: &GroupElement) -> Vec<GroupElement> {
        self.generators
            .iter()
            .map(|t| self.multiply(g, &t.element))
            .collect()
    }

    /// Whether `g` lies in the subgroup generated by this marking.
    pub fn contains(&self, g: &GroupElement) -> bool {
        let shape_ok = match (self.family, g) {
            (Family::FreeAbelian(m), GroupElement::Lattice(v)) => v.len() == m,
            (Family::BaumslagSolitar(_), GroupElement::Affine { .. }) => true,
            (Family::Free(r), GroupElement::Word(w)) => {
                w.iter().all(|l| l.unsigned_abs() as usize <= r && *l != 0)
            }
            (Family::DirectWithCyclic(k), GroupElement::Cyclic { residue, .. }) => *residue < k,
            _ => false,
        };
        if !shape_ok {
            return false;
        }
        match (self.marking, g) {
            (Marking::Standard, _) => true,
            (Marking::Sublattice { coord, index }, GroupElement::Lattice(v)) => {
                v[coord - 1] % index as i64 == 0
            }
            (Marking::Sublattice { coord: 1, index }, GroupElement::Cyclic { int, .. }) => {
                int % index as i64 == 0
            }
            (Marking::Sublattice { index, .. }, GroupElement::Cyclic { residue, .. }) => {
                residue % index == 0
            }
            _ => false,
        }
    }

    /// Whether the word length has a closed form (everything except BS).
    pub fn has_closed_form_length(&self) -> bool {
        !matches!(self.family, Family::BaumslagSolitar(_))
    }

    /// Closed-form word length for this marking; `None` for BS or non-members.
    pub fn closed_form_length(&self, g: &GroupElement) -> Option<u64> {
        if !self.contains(g) {
            return None;
        }
        match (self.family, g) {
            (Family::FreeAbelian(_), GroupElement::Lattice(v)) => Some(
                v.iter()
                    .enumerate()
                    .map(|(j, x)| match self.marking {
                        Marking::Sublattice { coord, index } if coord == j + 1 => {
                            x.unsigned_abs() / index
                        }
                        _ => x.unsigned_abs(),
                    })
                    .sum(),
            ),
            (Family::Free(_), GroupElement::Word(w)) => Some(w.len() as u64),
            (Family::DirectWithCyclic(k), GroupElement::Cyclic { int, residue }) => {
                let (int_len, order, step) = match self.marking {
                    Marking::Standard => (int.unsigned_abs(), k, *residue),
                    Marking::Sublattice { coord: 1, index } => {
                        (int.unsigned_abs() / index, k, *residue)
                    }
                    Marking::Sublattice { index, .. } => {
                        (int.unsigned_abs(), k / index, residue / index)
                    }
                };
                Some(int_len + step.min(order - step))
            }
            _ => None,
        }
    }

    pub fn display<'a>(&'a self, g: &'a GroupElement) -> ElementDisplay<'a> {
        ElementDisplay {
            element: g,
            base: self.bs_base(),
            letters: &FREE_LETTERS,
        }
    }

    pub fn format(&self, g: &GroupElement) -> String {
        self.display(g).to_string()
    }

    /// Parses an element from its normal-form rendering.
    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        let s = s.trim();
        let bad = || Error::Parse(format!("'{s}' is not an element of {self}"));
        let tuple = |s: &str| -> Option<Vec<String>> {
            let inner = s.strip_prefix('(')?.strip_suffix(')')?;
            Some(inner.split(',').map(|p| p.trim().to_string()).collect())
        };
        let g = match self.family {
            Family::FreeAbelian(m) => {
                let parts = if m == 1 && !s.starts_with('(') {
                    vec![s.to_string()]
                } else {
                    tuple(s).ok_or_else(bad)?
                };
                if parts.len() != m {
                    return Err(bad());
                }
                let v: std::result::Result<Vec<i64>, _> =
                    parts.iter().map(|p| p.parse::<i64>()).collect();
                GroupElement::Lattice(v.map_err(|_| bad())?)
            }
            Family::BaumslagSolitar(m) => {
                let parts = tuple(s).ok_or_else(bad)?;
                if parts.len() != 2 {
                    return Err(bad());
                }
                let level: i64 = parts[0].parse().map_err(|_| bad())?;
                let shift = Adic::parse(&parts[1], m).ok_or_else(bad)?;
                GroupElement::Affine { level, shift }
            }
            Family::Free(r) => {
                if s == "e" {
                    GroupElement::Word(Vec::new())
                } else {
                    let mut letters = Vec::new();
                    for c in s.chars() {
                        let pos = FREE_LETTERS[..r]
                            .iter()
                            .position(|&l| l == c.to_ascii_lowercase())
                            .ok_or_else(bad)?;
                        let l = pos as i32 + 1;
                        letters.push(if c.is_ascii_uppercase() { -l } else { l });
                    }
                    // Reduce by multiplying letter by letter.
                    let id = GroupElement::Word(Vec::new());
                    letters.into_iter().fold(id, |acc, l| {
                        self.multiply(&acc, &GroupElement::Word(vec![l]))
                    })
                }
            }
            Family::DirectWithCyclic(k) => {
                let parts = tuple(s).ok_or_else(bad)?;
                if parts.len() != 2 {
                    return Err(bad());
                }
                let int: i64 = parts[0].parse().map_err(|_| bad())?;
                let r: i64 = parts[1].parse().map_err(|_| bad())?;
                GroupElement::Cyclic {
                    int,
                    residue: r.rem_euclid(k as i64) as u64,
                }
            }
        };
        if !self.contains(&g) {
            return Err(Error::Parse(format!("'{s}' is not in the subgroup {self}")));
        }
        Ok(g)
    }
}

fn generator_pair(label: &str, element: GroupElement, group: &MarkedGroup) -> Vec<(String, GroupElement)> {
    let inv = group.inverse(&element);
    if element == group.identity() {
        Vec::new()
    } else if inv == element {
        vec![(label.to_string(), element)]
    } else {
        vec![
            (label.to_string(), element),
            (inverse_label(label), inv),
        ]
    }
}

fn inverse_label(label: &str) -> String {
    if label.len() == 1 {
        label.to_ascii_uppercase()
    } else {
        format!("{label}^-1")
    }
}

fn build_generators(family: Family, marking: Marking) -> Vec<Generator> {
    // A generator-free shell is enough for multiply/inverse.
    let shell = MarkedGroup {
        family,
        marking,
        generators: Vec::new(),
    };
    let scale = |coord: usize| match marking {
        Marking::Sublattice { coord: c, index } if c == coord => index as i64,
        _ => 1,
    };
    let mut raw: Vec<Vec<(String, GroupElement)>> = Vec::new();
    match family {
        Family::FreeAbelian(m) => {
            for j in 0..m {
                let mut v = vec![0; m];
                v[j] = scale(j + 1);
                let label = if m == 1 { "t".to_string() } else { format!("t{}", j + 1) };
                raw.push(generator_pair(&label, GroupElement::Lattice(v), &shell));
            }
        }
        Family::BaumslagSolitar(_) => {
            raw.push(generator_pair("a", GroupElement::affine(1, 0), &shell));
            raw.push(generator_pair("b", GroupElement::affine(0, 1), &shell));
        }
        Family::Free(r) => {
            for (j, c) in FREE_LETTERS.iter().enumerate().take(r) {
                raw.push(generator_pair(
                    &c.to_string(),
                    GroupElement::Word(vec![j as i32 + 1]),
                    &shell,
                ));
            }
        }
        Family::DirectWithCyclic(k) => {
            raw.push(generator_pair(
                "t",
                GroupElement::Cyclic { int: scale(1), residue: 0 },
                &shell,
            ));
            let step = scale(2) as u64 % k;
            raw.push(generator_pair(
                "s",
                GroupElement::Cyclic { int: 0, residue: step },
                &shell,
            ));
        }
    }
    let mut gens = Vec::new();
    for pair in raw {
        let base = gens.len();
        match pair.len() {
            1 => {
                let (label, element) = pair.into_iter().next().unwrap();
                gens.push(Generator { label, element, inverse: base });
            }
            2 => {
                for (i, (label, element)) in pair.into_iter().enumerate() {
                    gens.push(Generator {
                        label,
                        element,
                        inverse: base + 1 - i,
                    });
                }
            }
            _ => {}
        }
    }
    gens
}

impl fmt::Display for MarkedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.family, self.marking) {
            (_, Marking::Standard) => write!(f, "{}", self.family),
            (Family::FreeAbelian(m), Marking::Sublattice { coord, index }) => {
                let parts: Vec<String> = (1..=m)
                    .map(|j| if j == coord { format!("{index}Z") } else { "Z".into() })
                    .collect();
                write!(f, "{}", parts.join("x"))
            }
            (Family::DirectWithCyclic(k), Marking::Sublattice { coord: 1, index }) => {
                write!(f, "{index}ZxC{k}")
            }
            (Family::DirectWithCyclic(k), Marking::Sublattice { index, .. }) => {
                write!(f, "Zx{index}C{k}")
            }
            _ => write!(f, "{}", self.family),
        }
    }
}

impl FromStr for MarkedGroup {
    type Err = Error;

    /// Accepts `Z`, `Z^m`, `BS(1,m)`, `F_r`, `ZxCk`, and sublattice forms
    /// with a single scaled factor such as `2Z`, `2ZxZ`, `Zx3Z`, `2ZxC3`,
    /// `Zx2C4`.
    fn from_str(s: &str) -> Result<Self> {
        let spec: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("unrecognized group spec '{s}'"));
        if let Some(rest) = spec.strip_prefix("BS(") {
            let inner = rest.strip_suffix(')').ok_or_else(bad)?;
            let (one, m) = inner.split_once(',').ok_or_else(bad)?;
            if one != "1" {
                return Err(Error::InvalidParameter(format!(
                    "only solvable BS(1,m) is supported, got '{s}'"
                )));
            }
            let m: u32 = m.parse().map_err(|_| bad())?;
            return MarkedGroup::new(Family::BaumslagSolitar(m));
        }
        if let Some(r) = spec.strip_prefix("F_") {
            let r: usize = r.parse().map_err(|_| bad())?;
            return MarkedGroup::new(Family::Free(r));
        }
        let mut z_count = 0usize;
        let mut cyclic: Option<u64> = None;
        let mut scaled: Option<(usize, u64)> = None;
        for token in spec.split('x') {
            let digits: String = token.chars().take_while(|c| c.is_ascii_digit()).collect();
            let body = &token[digits.len()..];
            let mult: Option<u64> = if digits.is_empty() {
                None
            } else {
                Some(digits.parse().map_err(|_| bad())?)
            };
            if cyclic.is_some() {
                return Err(bad());
            }
            if body == "Z" {
                z_count += 1;
                if let Some(n) = mult {
                    if scaled.replace((z_count, n)).is_some() {
                        return Err(bad());
                    }
                }
            } else if let Some(m) = body.strip_prefix("Z^") {
                if mult.is_some() {
                    return Err(bad());
                }
                let m: usize = m.parse().map_err(|_| bad())?;
                z_count += m;
            } else if let Some(k) = body.strip_prefix('C') {
                let k: u64 = k.parse().map_err(|_| bad())?;
                cyclic = Some(k);
                if let Some(n) = mult {
                    if scaled.replace((z_count + 1, n)).is_some() {
                        return Err(bad());
                    }
                }
            } else {
                return Err(bad());
            }
        }
        let family = match cyclic {
            Some(k) if z_count == 1 => Family::DirectWithCyclic(k),
            Some(_) => return Err(bad()),
            None if z_count >= 1 => Family::FreeAbelian(z_count),
            None => return Err(bad()),
        };
        let marking = match scaled {
            Some((_, 1)) | None => Marking::Standard,
            Some((coord, index)) => Marking::Sublattice { coord, index },
        };
        MarkedGroup::with_marking(family, marking)
    }
}

/// Parses a family spec string; alias for `str::parse`.
pub fn make_group(spec: &str) -> Result<MarkedGroup> {
    spec.parse()
}

/// Integer shift as a BS element helper, used in tests and the BS model.
pub fn bs_element(level: i64, shift: i64) -> GroupElement {
    GroupElement::affine(level, BigInt::from(shift))
}
