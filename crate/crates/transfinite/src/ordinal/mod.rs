//! Exact ordinal arithmetic below epsilon-zero, in Cantor normal form.
//!
//! An [`Ordinal`] is a finite sum `w^e1*c1 + ... + w^ek*ck` with strictly
//! decreasing ordinal exponents and positive integer coefficients. This is
//! the currency for machine clocks, tape positions, budgets and halting
//! ordinals: everything the runner reports is one of these, exactly.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::fmt;

mod pairing;
mod parse;

pub use pairing::{goedel_pair, goedel_unpair, square_order_type};
pub use parse::{parse_ordinal, ParseOrdinalError};

/// Error from a partial ordinal operation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrdinalError {
    /// `sub_left(a, b)` requires `a <= b`.
    #[error("cannot left-subtract: minuend is smaller than subtrahend")]
    Underflow,
}

/// An ordinal below epsilon-zero in Cantor normal form.
///
/// The empty term list is 0. Exponents strictly decrease along the list and
/// every coefficient is at least 1, so equal values have identical
/// representations and `Eq`/`Hash` are structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ordinal {
    /// `(exponent, coefficient)` pairs, exponents strictly decreasing.
    terms: Vec<(Ordinal, BigUint)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::from_nat(1u32)
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::one())
    }

    pub fn from_nat<N: Into<BigUint>>(n: N) -> Self {
        let n = n.into();
        if n.is_zero() {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![(Ordinal::zero(), n)],
            }
        }
    }

    /// `w^exp` as a single-term ordinal.
    pub fn omega_pow(exp: Ordinal) -> Self {
        Ordinal {
            terms: vec![(exp, BigUint::one())],
        }
    }

    /// `w^exp * coeff`; zero coefficient yields 0.
    pub fn term(exp: Ordinal, coeff: BigUint) -> Self {
        if coeff.is_zero() {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![(exp, coeff)],
            }
        }
    }

    /// Builds from terms that are already in strictly decreasing exponent
    /// order with nonzero coefficients. Debug-checked.
    fn from_canonical_terms(terms: Vec<(Ordinal, BigUint)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        Ordinal { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a natural number, if finite.
    pub fn as_natural(&self) -> Option<&BigUint> {
        match self.terms.as_slice() {
            [] => None,
            [(exp, c)] if exp.is_zero() => Some(c),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.is_zero() || self.as_natural().is_some()
    }

    /// Leading exponent; `None` for 0.
    pub fn leading_exp(&self) -> Option<&Ordinal> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&BigUint> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Ordinal, &BigUint)> {
        self.terms.iter().map(|(e, c)| (e, c))
    }

    /// The trailing finite summand (0 if the last term is infinite).
    pub fn finite_part(&self) -> BigUint {
        match self.terms.last() {
            Some((exp, c)) if exp.is_zero() => c.clone(),
            _ => BigUint::zero(),
        }
    }

    /// The value with its finite summand removed: 0 or a limit ordinal.
    pub fn limit_part(&self) -> Ordinal {
        let mut terms = self.terms.clone();
        if let Some((exp, _)) = terms.last() {
            if exp.is_zero() {
                terms.pop();
            }
        }
        Ordinal { terms }
    }

    /// Nonzero and no finite summand.
    pub fn is_limit(&self) -> bool {
        !self.is_zero() && self.finite_part().is_zero()
    }

    pub fn is_successor(&self) -> bool {
        !self.finite_part().is_zero()
    }

    pub fn successor(&self) -> Ordinal {
        self + &Ordinal::one()
    }

    /// Immediate predecessor, if one exists.
    pub fn predecessor(&self) -> Option<Ordinal> {
        let fin = self.finite_part();
        if fin.is_zero() {
            return None;
        }
        let mut terms = self.terms.clone();
        terms.pop();
        let fin = fin - 1u32;
        if !fin.is_zero() {
            terms.push((Ordinal::zero(), fin));
        }
        Some(Ordinal { terms })
    }

    /// Ordinal sum `self + rhs`. Terms of `self` below the leading exponent
    /// of `rhs` are absorbed.
    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some((rexp, rcoeff)) = rhs.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(Ordinal, BigUint)> = Vec::new();
        for (exp, c) in &self.terms {
            if exp > rexp {
                terms.push((exp.clone(), c.clone()));
            } else if exp == rexp {
                terms.push((exp.clone(), c + rcoeff));
            } else {
                break;
            }
        }
        if terms.last().map(|t| &t.0) != Some(rexp) {
            terms.push((rexp.clone(), rcoeff.clone()));
        }
        terms.extend(rhs.terms[1..].iter().cloned());
        Ordinal::from_canonical_terms(terms)
    }

    /// Left subtraction: the unique `d` with `self + d == rhs`.
    /// Fails when `self > rhs`.
    pub fn sub_left(&self, rhs: &Ordinal) -> Result<Ordinal, OrdinalError> {
        let mut i = 0;
        while i < self.terms.len() && i < rhs.terms.len() && self.terms[i] == rhs.terms[i] {
            i += 1;
        }
        if i == self.terms.len() {
            // self is a prefix of rhs (or equal): remainder is the rest.
            return Ok(Ordinal::from_canonical_terms(rhs.terms[i..].to_vec()));
        }
        if i == rhs.terms.len() {
            return Err(OrdinalError::Underflow);
        }
        let (aexp, acoeff) = &self.terms[i];
        let (bexp, bcoeff) = &rhs.terms[i];
        match aexp.cmp(bexp) {
            Ordering::Less => Ok(Ordinal::from_canonical_terms(rhs.terms[i..].to_vec())),
            Ordering::Greater => Err(OrdinalError::Underflow),
            Ordering::Equal => {
                if acoeff < bcoeff {
                    let mut terms = vec![(bexp.clone(), bcoeff - acoeff)];
                    terms.extend(rhs.terms[i + 1..].iter().cloned());
                    Ok(Ordinal::from_canonical_terms(terms))
                } else {
                    Err(OrdinalError::Underflow)
                }
            }
        }
    }

    /// Ordinal product `self * rhs`, distributing over the CNF of `rhs`
    /// from the left.
    pub fn mul(&self, rhs: &Ordinal) -> Ordinal {
        if self.is_zero() || rhs.is_zero() {
            return Ordinal::zero();
        }
        let (lead_exp, lead_coeff) = &self.terms[0];
        let mut acc = Ordinal::zero();
        for (bexp, bcoeff) in &rhs.terms {
            let piece = if bexp.is_zero() {
                // self * n: multiply the leading coefficient, keep the tail.
                let mut terms = vec![(lead_exp.clone(), lead_coeff * bcoeff)];
                terms.extend(self.terms[1..].iter().cloned());
                Ordinal::from_canonical_terms(terms)
            } else {
                Ordinal::term(lead_exp.add(bexp), bcoeff.clone())
            };
            acc = acc.add(&piece);
        }
        acc
    }

    /// Ordinal exponentiation `self ^ rhs`, with `0^0 = 1`.
    ///
    /// The purely finite case `m^k` is evaluated numerically, so the finite
    /// part of the exponent must fit in `u32` at desk scale.
    pub fn pow(&self, rhs: &Ordinal) -> Ordinal {
        if rhs.is_zero() {
            return Ordinal::one();
        }
        if self.is_zero() {
            return Ordinal::zero();
        }
        if self == &Ordinal::one() {
            return Ordinal::one();
        }
        let limit = rhs.limit_part();
        let fin = rhs.finite_part();
        if let Some(base) = self.as_natural() {
            // Finite base m >= 2: m^(w^b * c) = w^(w^(-1+b) * c).
            let limit_factor = if limit.is_zero() {
                Ordinal::one()
            } else {
                let exp_terms: Vec<(Ordinal, BigUint)> = limit
                    .terms
                    .iter()
                    .map(|(b, c)| (Ordinal::one().sub_left(b).expect("limit exponent >= 1"), c.clone()))
                    .collect();
                Ordinal::omega_pow(Ordinal::from_canonical_terms(exp_terms))
            };
            let fin_factor = Ordinal::from_nat(base.pow(
                u32::try_from(&fin).expect("finite exponent too large for desk-scale pow"),
            ));
            limit_factor.mul(&fin_factor)
        } else {
            // Infinite base a: a^(limit + k) = w^(lead(a) * limit) * a^k.
            let lead = self.leading_exp().expect("infinite ordinal has a term");
            let limit_factor = if limit.is_zero() {
                Ordinal::one()
            } else {
                Ordinal::omega_pow(lead.mul(&limit))
            };
            let mut k = u64::try_from(&fin).expect("finite exponent too large for desk-scale pow");
            // Square-and-multiply for the finite power.
            let mut fin_factor = Ordinal::one();
            let mut sq = self.clone();
            while k > 0 {
                if k & 1 == 1 {
                    fin_factor = fin_factor.mul(&sq);
                }
                k >>= 1;
                if k > 0 {
                    sq = sq.mul(&sq);
                }
            }
            limit_factor.mul(&fin_factor)
        }
    }

    /// Splits into the base of the containing `w`-block and a finite offset:
    /// `self = block + n` where `block` is 0 or a limit ordinal.
    pub fn split_block(&self) -> (Ordinal, BigUint) {
        (self.limit_part(), self.finite_part())
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            match a.0.cmp(&b.0) {
                Ordering::Equal => {}
                ord => return ord,
            }
            match a.1.cmp(&b.1) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Add for &Ordinal {
    type Output = Ordinal;
    fn add(self, rhs: &Ordinal) -> Ordinal {
        Ordinal::add(self, rhs)
    }
}

impl std::ops::Mul for &Ordinal {
    type Output = Ordinal;
    fn mul(self, rhs: &Ordinal) -> Ordinal {
        Ordinal::mul(self, rhs)
    }
}

impl std::ops::Add for Ordinal {
    type Output = Ordinal;
    fn add(self, rhs: Ordinal) -> Ordinal {
        Ordinal::add(&self, &rhs)
    }
}

impl std::ops::Mul for Ordinal {
    type Output = Ordinal;
    fn mul(self, rhs: Ordinal) -> Ordinal {
        Ordinal::mul(&self, &rhs)
    }
}

// Canonical rendering in the ordinal expression grammar: strictly
// decreasing exponents, `w^(...)` parentheses only where required.
impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, coeff) in &self.terms {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            if exp.is_zero() {
                write!(f, "{coeff}")?;
            } else {
                if exp == &Ordinal::one() {
                    write!(f, "w")?;
                } else {
                    write!(f, "w^{}", ExpAtom(exp))?;
                }
                if !coeff.is_one() {
                    write!(f, "*{coeff}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders an exponent as a grammar atom, parenthesizing when it is not one.
struct ExpAtom<'a>(&'a Ordinal);

impl fmt::Display for ExpAtom<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = self.0;
        if let Some(n) = o.as_natural() {
            return write!(f, "{n}");
        }
        match o.terms.as_slice() {
            [(exp, c)] if c.is_one() => {
                if exp == &Ordinal::one() {
                    write!(f, "w")
                } else {
                    write!(f, "w^{}", ExpAtom(exp))
                }
            }
            _ => write!(f, "({o})"),
        }
    }
}

impl std::str::FromStr for Ordinal {
    type Err = ParseOrdinalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ordinal(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(s: &str) -> Ordinal {
        parse_ordinal(s).unwrap()
    }

    #[test]
    fn compare_examples() {
        assert_eq!(ord("w").cmp(&ord("w")), Ordering::Equal);
        assert_eq!(ord("w+1").cmp(&ord("w*2")), Ordering::Less);
        assert_eq!(ord("w^w").cmp(&ord("w^3*5+w")), Ordering::Greater);
    }

    #[test]
    fn add_examples() {
        assert_eq!(ord("1").add(&ord("w")), ord("w"));
        assert_eq!(ord("w").add(&ord("1")), ord("w+1"));
        assert_eq!(ord("w*2+3").add(&ord("w^2+w")), ord("w^2+w"));
    }

    #[test]
    fn sub_left_examples() {
        assert_eq!(ord("w").sub_left(&ord("w+5")).unwrap(), ord("5"));
        assert_eq!(ord("5").sub_left(&ord("w")).unwrap(), ord("w"));
        assert_eq!(ord("w^2").sub_left(&ord("w^2*2+w")).unwrap(), ord("w^2+w"));
        assert_eq!(ord("w+1").sub_left(&ord("w")), Err(OrdinalError::Underflow));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(ord("2").mul(&ord("w")), ord("w"));
        assert_eq!(ord("w+1").mul(&ord("2")), ord("w*2+1"));
        assert_eq!(ord("w*2").mul(&ord("w")), ord("w^2"));
        assert_eq!(ord("w*2+3").mul(&ord("2")), ord("w*4+3"));
    }

    #[test]
    fn pow_examples() {
        assert_eq!(ord("2").pow(&ord("w")), ord("w"));
        assert_eq!(ord("w").pow(&ord("2")), ord("w^2"));
        assert_eq!(ord("w^2").pow(&ord("3")), ord("w^6"));
        assert_eq!(ord("2").pow(&ord("w+2")), ord("w*4"));
        assert_eq!(ord("w+1").pow(&ord("w")), ord("w^w"));
        assert_eq!(ord("w+1").pow(&ord("2")), ord("w^2+w+1"));
        assert_eq!(ord("0").pow(&ord("0")), ord("1"));
        assert_eq!(ord("0").pow(&ord("w")), ord("0"));
        assert_eq!(ord("2").pow(&ord("w^2")), ord("w^w"));
        assert_eq!(ord("2").pow(&ord("w^w")), ord("w^(w^w)"));
    }

    #[test]
    fn predecessor_and_limits() {
        assert!(ord("w").is_limit());
        assert!(ord("w+1").is_successor());
        assert_eq!(ord("w+1").predecessor(), Some(ord("w")));
        assert_eq!(ord("w").predecessor(), None);
        assert_eq!(ord("3").predecessor(), Some(ord("2")));
        assert_eq!(ord("w*2+3").split_block(), (ord("w*2"), 3u32.into()));
    }

    #[test]
    fn display_roundtrip_canonical() {
        for s in [
            "0",
            "1",
            "42",
            "w",
            "w*2",
            "w+1",
            "w^2*3+w*2+7",
            "w^(w+1)*3+w*2+7",
            "w^w",
            "w^w^w",
            "w^(w^2+1)+w^2",
            "w^(w*2)",
        ] {
            let o = ord(s);
            assert_eq!(o.to_string(), s, "canonical rendering of {s}");
            assert_eq!(ord(&o.to_string()), o);
        }
    }
}
