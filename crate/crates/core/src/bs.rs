//! The coset-wise n-to-1 map on `BS(1,m)`.
//!
//! Elements `(k, q)` act by `x ↦ m^k·x + q`. The plane chart sends `(k, q)`
//! to horizontal position `q` on level `k` (height `m^k`). Right
//! multiplication by `b` moves along a level by `m^k`, so the cosets of `⟨b⟩`
//! are the classes of `q mod m^k` on each level. Each coset gets the
//! representative closest to the vertical axis `x = 0`, and
//! `f_C(α·b^i) = α·b^⌊i/n⌋`.

use std::cmp::Ordering;
use std::io::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::ToPrimitive;

use crate::ball::Ball;
use crate::element::{Adic, GroupElement};
use crate::error::{Error, Result};
use crate::group::{Family, MarkedGroup};
use crate::qi::{self, AuditWindow, DistortionReport, FiberCensus};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlanePoint {
    pub x: Adic,
    pub level: i64,
}

/// A coset `g·⟨b⟩`, identified by its level and the residue of the
/// horizontal position modulo `m^level`, taken in `[0, m^level)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetId {
    pub level: i64,
    pub residue: Adic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepChoice {
    pub coset: CosetId,
    pub rep: GroupElement,
}

#[derive(Clone, Debug)]
pub struct BsModel {
    group: MarkedGroup,
    m: u32,
}

fn parts(g: &GroupElement) -> (i64, &Adic) {
    match g {
        GroupElement::Affine { level, shift } => (*level, shift),
        _ => panic!("not a BS(1,m) element"),
    }
}

impl BsModel {
    pub fn new(m: u32) -> Result<BsModel> {
        Self::from_group(&MarkedGroup::new(Family::BaumslagSolitar(m))?)
    }

    pub fn from_group(group: &MarkedGroup) -> Result<BsModel> {
        match group.family() {
            Family::BaumslagSolitar(m) => Ok(BsModel {
                group: group.clone(),
                m,
            }),
            _ => Err(Error::InvalidParameter(format!("{group} is not BS(1,m)"))),
        }
    }

    pub fn group(&self) -> &MarkedGroup {
        &self.group
    }

    pub fn base(&self) -> u32 {
        self.m
    }

    pub fn plane_position(&self, g: &GroupElement) -> PlanePoint {
        let (level, shift) = parts(g);
        PlanePoint {
            x: shift.clone(),
            level,
        }
    }

    pub fn coset_of(&self, g: &GroupElement) -> CosetId {
        let (level, shift) = parts(g);
        let m = self.m;
        let steps = shift.floor_div_pow(level, m);
        let residue = shift.sub(&Adic::from_int(steps).mul_pow(level, m), m);
        CosetId { level, residue }
    }

    /// The coset element with minimal `|x|`; of two equidistant candidates
    /// the one with positive `x` wins.
    pub fn representative(&self, coset: &CosetId) -> RepChoice {
        let m = self.m;
        let width = Adic::from_int(1).mul_pow(coset.level, m);
        let r = &coset.residue;
        let twice = r.add(r, m);
        let x = match twice.cmp_value(&width, m) {
            Ordering::Greater => r.sub(&width, m),
            _ => r.clone(),
        };
        RepChoice {
            coset: coset.clone(),
            rep: GroupElement::Affine {
                level: coset.level,
                shift: x,
            },
        }
    }

    pub fn representative_of(&self, g: &GroupElement) -> RepChoice {
        self.representative(&self.coset_of(g))
    }

    /// The offset `i` with `g = α·b^i`.
    pub fn decompose(&self, g: &GroupElement, rep: &RepChoice) -> BigInt {
        let (level, shift) = parts(g);
        let (_, alpha) = parts(&rep.rep);
        let diff = shift.sub(alpha, self.m).mul_pow(-level, self.m);
        diff.to_integer()
            .cloned()
            .expect("element lies in the representative's coset")
    }

    /// `α·b^i`.
    pub fn compose_offset(&self, rep: &RepChoice, offset: &BigInt) -> GroupElement {
        let (level, alpha) = parts(&rep.rep);
        GroupElement::Affine {
            level,
            shift: alpha.add(&Adic::from_int(offset.clone()).mul_pow(level, self.m), self.m),
        }
    }

    /// `f_C(α·b^i) = α·b^⌊i/n⌋`.
    pub fn f_c(&self, n: u64, g: &GroupElement) -> GroupElement {
        let rep = self.representative_of(g);
        let i = self.decompose(g, &rep);
        self.compose_offset(&rep, &i.div_floor(&BigInt::from(n)))
    }

    /// `f_C⁻¹(α·b^j) = {α·b^(nj + r) : 0 ≤ r < n}`.
    pub fn f_c_preimages(&self, n: u64, y: &GroupElement) -> Vec<GroupElement> {
        let rep = self.representative_of(y);
        let j = self.decompose(y, &rep);
        (0..n)
            .map(|r| self.compose_offset(&rep, &(&j * BigInt::from(n) + BigInt::from(r))))
            .collect()
    }

    /// Whether `|x(α)| ≤ m^k / 2`.
    pub fn rep_within_half_width(&self, rep: &RepChoice) -> bool {
        let (level, alpha) = parts(&rep.rep);
        let twice = alpha.abs().add(&alpha.abs(), self.m);
        twice.cmp_value(&Adic::from_int(1).mul_pow(level, self.m), self.m) != Ordering::Greater
    }

    /// CSV dump: `element,level,x,coset,representative,offset,image`.
    pub fn write_window_csv<W: Write>(&self, n: u64, window: &Ball, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["element", "level", "x", "coset", "representative", "offset", "image"])?;
        for g in window.elements() {
            let p = self.plane_position(g);
            let rep = self.representative_of(g);
            let off = self.decompose(g, &rep);
            w.write_record([
                self.group.format(g),
                p.level.to_string(),
                p.x.display(self.m),
                format!("{}:{}", rep.coset.level, rep.coset.residue.display(self.m)),
                self.group.format(&rep.rep),
                off.to_string(),
                self.group.format(&self.f_c(n, g)),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Results of auditing `f_C` on a ball.
#[derive(Clone, Debug)]
pub struct BsAudit {
    pub radius: u32,
    pub distortion: DistortionReport,
    /// Minimal `K` with the fixed `C`, over all pairs of the ball.
    pub k_emp: Option<Ratio<i64>>,
    pub census: FiberCensus,
    pub levels_preserved: bool,
    pub reps_within_half_width: bool,
}

impl BsAudit {
    pub fn k_emp_f64(&self) -> Option<f64> {
        self.k_emp.map(|r| r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap())
    }
}

/// Audits `f_C` for `BS(1,m)` against BFS word distances on the ball of the
/// given radius: claimed constants, fitted `K` with `C = c_fixed`, fiber
/// census, level preservation and representative bounds.
pub fn audit_f_c(m: u32, n: u64, radius: u32, c_fixed: i64, budget: usize) -> Result<BsAudit> {
    let f = qi::bs_floor(m, n)?;
    let model = BsModel::new(m)?;
    let window = AuditWindow::new(&f, radius, 2 * radius, budget)?;
    let distortion = qi::verify_constants(&f, f.claimed(), &window)?;
    let k_emp = qi::fit_constants(&f, Ratio::from_integer(c_fixed), &window)?;
    let census = qi::fiber_census(&f, window.points(), window.points());
    let mut levels_preserved = true;
    let mut reps_ok = true;
    for g in window.points().elements() {
        let img = f.apply(g);
        levels_preserved &= parts(&img).0 == parts(g).0;
        reps_ok &= model.rep_within_half_width(&model.representative_of(g));
    }
    Ok(BsAudit {
        radius,
        distortion,
        k_emp,
        census,
        levels_preserved,
        reps_within_half_width: reps_ok,
    })
}

/// Convenience for tests and reports: the level of a BS element.
pub fn level_of(g: &GroupElement) -> i64 {
    parts(g).0
}

/// The shift of a BS element as an exact value.
pub fn shift_of(g: &GroupElement) -> &Adic {
    parts(g).1
}
