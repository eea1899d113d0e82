//! Normal forms for group elements.
//!
//! Every family has a unique normal form, so equality and hashing of
//! [`GroupElement`] coincide with equality in the group.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An element of `Z[1/m]` stored as `num / m^exp`.
///
/// Canonical form: `exp == 0` or `num` is not divisible by `m`. The base `m`
/// is not stored; callers pass it to every operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Adic {
    num: BigInt,
    exp: u32,
}

impl Adic {
    pub fn zero() -> Self {
        Adic {
            num: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Adic {
            num: v.into(),
            exp: 0,
        }
    }

    /// Builds `num / m^exp` and reduces it.
    pub fn new(num: BigInt, exp: u32, m: u32) -> Self {
        let mut a = Adic { num, exp };
        a.normalize(m);
        a
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<&BigInt> {
        (self.exp == 0).then_some(&self.num)
    }

    fn normalize(&mut self, m: u32) {
        if self.num.is_zero() {
            self.exp = 0;
            return;
        }
        let base = BigInt::from(m);
        while self.exp > 0 {
            let (q, r) = self.num.div_rem(&base);
            if !r.is_zero() {
                break;
            }
            self.num = q;
            self.exp -= 1;
        }
    }

    fn lift(&self, exp: u32, m: u32) -> BigInt {
        debug_assert!(exp >= self.exp);
        &self.num * BigInt::from(m).pow(exp - self.exp)
    }

    pub fn add(&self, other: &Adic, m: u32) -> Adic {
        let exp = self.exp.max(other.exp);
        Adic::new(self.lift(exp, m) + other.lift(exp, m), exp, m)
    }

    pub fn sub(&self, other: &Adic, m: u32) -> Adic {
        self.add(&other.neg(), m)
    }

    pub fn neg(&self) -> Adic {
        Adic {
            num: -&self.num,
            exp: self.exp,
        }
    }

    /// Multiplies by `m^k` for any integer `k`.
    pub fn mul_pow(&self, k: i64, m: u32) -> Adic {
        if self.num.is_zero() {
            return Adic::zero();
        }
        if k >= 0 {
            let k = k as u64;
            if k <= self.exp as u64 {
                Adic::new(self.num.clone(), self.exp - k as u32, m)
            } else {
                let extra = (k - self.exp as u64) as u32;
                Adic {
                    num: &self.num * BigInt::from(m).pow(extra),
                    exp: 0,
                }
            }
        } else {
            let exp = self.exp + k.unsigned_abs() as u32;
            Adic::new(self.num.clone(), exp, m)
        }
    }

    /// `floor(self / m^k)` as an integer.
    pub fn floor_div_pow(&self, k: i64, m: u32) -> BigInt {
        let scaled = self.mul_pow(-k, m);
        let den = BigInt::from(m).pow(scaled.exp);
        scaled.num.div_floor(&den)
    }

    /// Sign-aware comparison of values.
    pub fn cmp_value(&self, other: &Adic, m: u32) -> Ordering {
        let exp = self.exp.max(other.exp);
        self.lift(exp, m).cmp(&other.lift(exp, m))
    }

    pub fn abs(&self) -> Adic {
        Adic {
            num: self.num.abs(),
            exp: self.exp,
        }
    }

    /// Approximate value, for reports only.
    pub fn to_f64(&self, m: u32) -> f64 {
        let num = self.num.to_f64().unwrap_or(f64::NAN);
        num / (m as f64).powi(self.exp as i32)
    }

    /// Renders as `num` or `num/den` with `den = m^exp`.
    pub fn display(&self, m: u32) -> String {
        if self.exp == 0 {
            self.num.to_string()
        } else {
            format!("{}/{}", self.num, BigInt::from(m).pow(self.exp))
        }
    }

    /// Parses `num` or `num/den`, where `den` must be a power of `m`.
    pub fn parse(s: &str, m: u32) -> Option<Adic> {
        let s = s.trim();
        match s.split_once('/') {
            None => s.parse::<BigInt>().ok().map(Adic::from_int),
            Some((n, d)) => {
                let num: BigInt = n.trim().parse().ok()?;
                let mut den: BigInt = d.trim().parse().ok()?;
                let base = BigInt::from(m);
                let mut exp = 0u32;
                while den > BigInt::one() {
                    let (q, r) = den.div_rem(&base);
                    if !r.is_zero() {
                        return None;
                    }
                    den = q;
                    exp += 1;
                }
                if den != BigInt::one() {
                    return None;
                }
                Some(Adic::new(num, exp, m))
            }
        }
    }
}

/// A group element in family-specific normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    /// `Z^m`: an integer vector.
    Lattice(Vec<i64>),
    /// `BS(1,m)`: the affine map `x ↦ m^level · x + shift`.
    Affine { level: i64, shift: Adic },
    /// Free group: a freely reduced word; letter `±j` is generator `j` or its inverse.
    Word(Vec<i32>),
    /// `Z × Z/k`: integer part and residue in `0..k`.
    Cyclic { int: i64, residue: u64 },
}

impl GroupElement {
    pub fn affine(level: i64, shift: impl Into<BigInt>) -> Self {
        GroupElement::Affine {
            level,
            shift: Adic::from_int(shift),
        }
    }

    pub fn lattice(coords: &[i64]) -> Self {
        GroupElement::Lattice(coords.to_vec())
    }

    /// The integer coordinates of a lattice element.
    pub fn coords(&self) -> Option<&[i64]> {
        match self {
            GroupElement::Lattice(v) => Some(v),
            _ => None,
        }
    }
}

/// Display helper that needs the BS base to print shifts as fractions.
pub struct ElementDisplay<'a> {
    pub(crate) element: &'a GroupElement,
    pub(crate) base: u32,
    pub(crate) letters: &'a [char],
}

impl fmt::Display for ElementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.element {
            GroupElement::Lattice(v) => {
                if v.len() == 1 {
                    write!(f, "{}", v[0])
                } else {
                    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                    write!(f, "({})", parts.join(","))
                }
            }
            GroupElement::Affine { level, shift } => {
                write!(f, "({},{})", level, shift.display(self.base))
            }
            GroupElement::Word(w) => {
                if w.is_empty() {
                    return write!(f, "e");
                }
                for &l in w {
                    let c = self.letters[(l.unsigned_abs() - 1) as usize];
                    if l > 0 {
                        write!(f, "{c}")?;
                    } else {
                        write!(f, "{}", c.to_ascii_uppercase())?;
                    }
                }
                Ok(())
            }
            GroupElement::Cyclic { int, residue } => write!(f, "({int},{residue})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adic_reduces_to_canonical_form() {
        let a = Adic::new(BigInt::from(12), 2, 2);
        assert_eq!(a, Adic::from_int(3));
        let b = Adic::new(BigInt::from(3), 1, 6);
        assert_eq!(b.exponent(), 1);
        assert_eq!(b.display(6), "3/6");
        assert_eq!(Adic::new(BigInt::zero(), 5, 3), Adic::zero());
    }

    #[test]
    fn adic_arithmetic() {
        let m = 2;
        let half = Adic::new(BigInt::from(1), 1, m);
        let sum = half.add(&half, m);
        assert_eq!(sum, Adic::from_int(1));
        assert_eq!(Adic::from_int(3).mul_pow(-1, m), Adic::new(BigInt::from(3), 1, m));
        assert_eq!(half.mul_pow(3, m), Adic::from_int(4));
        assert_eq!(Adic::from_int(-3).floor_div_pow(1, m), BigInt::from(-2));
        assert_eq!(half.floor_div_pow(-2, m), BigInt::from(2));
        assert_eq!(half.cmp_value(&Adic::zero(), m), Ordering::Greater);
    }

    #[test]
    fn adic_parse_round_trip() {
        let a = Adic::parse("-5/8", 2).unwrap();
        assert_eq!(a.display(2), "-5/8");
        assert!(Adic::parse("1/3", 2).is_none());
        assert_eq!(Adic::parse("4/2", 2).unwrap(), Adic::from_int(2));
    }
}
