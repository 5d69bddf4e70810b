//! Goedel pairing: the order isomorphism from ordinal pairs, ordered by
//! (max, then lexicographic), onto the ordinals.
//!
//! The core quantity is `square_order_type(m)`: the order type of the set
//! of pairs `(x, y)` with `max(x, y) < m`. A pair `(a, b)` with
//! `m = max(a, b)` then codes to `square + a` when `a < b`, and to
//! `square + m + b` when `a >= b`, because the block at height `m` lists
//! `(x, m)` for `x < m` first and then `(m, y)` for `y <= m`.

use super::Ordinal;
use num_bigint::BigUint;
use num_traits::{One, Zero};

fn two() -> Ordinal {
    Ordinal::from_nat(2u32)
}

fn rest_after_leading(o: &Ordinal) -> Ordinal {
    let mut acc = Ordinal::zero();
    for (e, c) in o.terms().skip(1) {
        acc = acc.add(&Ordinal::term(e.clone(), c.clone()));
    }
    acc
}

/// Exponent of the square of a single power: the order type of the square
/// below `w^g` is `w^square_exp(g)`.
fn square_exp(g: &Ordinal) -> Ordinal {
    if g.is_zero() {
        return Ordinal::zero();
    }
    if g.is_successor() {
        // (g - 1) * 2 + 1
        let pred = g.predecessor().expect("successor has a predecessor");
        return pred.mul(&two()).add(&Ordinal::one());
    }
    // g is a limit: the square exponent is sup of g' * 2 over g' < g.
    let (lead_exp, lead_coeff) = {
        let (e, c) = g.terms().next().expect("limit ordinal is nonzero");
        (e.clone(), c.clone())
    };
    let rest = rest_after_leading(g);
    if rest.is_zero() {
        Ordinal::term(lead_exp, lead_coeff * 2u32 - 1u32)
    } else {
        Ordinal::term(lead_exp, lead_coeff * 2u32).add(&rest)
    }
}

/// Inverse of `square_exp` on its covering intervals: the unique `a` with
/// `square_exp(a) <= lambda <= a * 2`.
fn half_exp(lambda: &Ordinal) -> Ordinal {
    if lambda.is_zero() {
        return Ordinal::zero();
    }
    if let Some(n) = lambda.as_natural() {
        return Ordinal::from_nat((n + 1u32) / 2u32);
    }
    let mu = lambda.limit_part();
    let fin = lambda.finite_part();
    let (lead_exp, lead_coeff) = {
        let (e, c) = mu.terms().next().expect("infinite ordinal has a term");
        (e.clone(), c.clone())
    };
    if (&lead_coeff % 2u32).is_zero() {
        let halved = Ordinal::term(lead_exp, lead_coeff / 2u32);
        halved
            .add(&rest_after_leading(&mu))
            .add(&Ordinal::from_nat(fin))
    } else {
        Ordinal::term(lead_exp, (lead_coeff + 1u32) / 2u32)
    }
}

/// Order type of `{(x, y) : max(x, y) < m}` under the Goedel pair order.
pub fn square_order_type(m: &Ordinal) -> Ordinal {
    if let Some(n) = m.as_natural() {
        return Ordinal::from_nat(n * n);
    }
    if m.is_zero() {
        return Ordinal::zero();
    }
    let terms: Vec<(Ordinal, BigUint)> =
        m.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
    let (lead_exp, lead_coeff) = &terms[0];
    let mut acc = Ordinal::omega_pow(square_exp(lead_exp));
    if lead_coeff > &BigUint::one() {
        acc = acc.add(&Ordinal::term(
            lead_exp.mul(&two()),
            lead_coeff - 1u32,
        ));
    }
    let mut prefix = Ordinal::term(lead_exp.clone(), lead_coeff.clone());
    for (exp, coeff) in &terms[1..] {
        if exp.is_zero() {
            // Trailing finite stretch of length n past an infinite prefix
            // contributes prefix*2*n + n.
            let piece = prefix
                .mul(&Ordinal::from_nat(coeff * 2u32))
                .add(&Ordinal::from_nat(coeff.clone()));
            acc = acc.add(&piece);
        } else {
            acc = acc.add(&Ordinal::term(lead_exp.add(exp), coeff.clone()));
            prefix = prefix.add(&Ordinal::term(exp.clone(), coeff.clone()));
        }
    }
    acc
}

/// Position of `(a, b)` in the Goedel well-order of all ordinal pairs.
pub fn goedel_pair(a: &Ordinal, b: &Ordinal) -> Ordinal {
    if a < b {
        square_order_type(b).add(a)
    } else {
        square_order_type(a).add(a).add(b)
    }
}

/// Largest `k` in `[lo, ..)` satisfying a monotone predicate that holds at
/// `lo` and eventually fails.
fn search_max(lo: BigUint, pred: impl Fn(&BigUint) -> bool) -> BigUint {
    debug_assert!(pred(&lo));
    let mut lo = lo;
    let mut hi = &lo + 1u32 + &lo;
    while pred(&hi) {
        lo = hi.clone();
        hi = &hi * 2u32 + 1u32;
    }
    while &hi - &lo > BigUint::one() {
        let mid = (&hi + &lo) / 2u32;
        if pred(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Largest `m` with `square_order_type(m) <= c`: the height of the block
/// that the code `c` falls into.
fn inv_square(c: &Ordinal) -> Ordinal {
    if let Some(n) = c.as_natural() {
        return Ordinal::from_nat(n.sqrt());
    }
    if c.is_zero() {
        return Ordinal::zero();
    }
    let lambda = c.leading_exp().expect("infinite ordinal has a term");
    let lead = half_exp(lambda);
    let coeff = search_max(BigUint::one(), |k| {
        &square_order_type(&Ordinal::term(lead.clone(), k.clone())) <= c
    });
    let mut m = Ordinal::term(lead.clone(), coeff);
    loop {
        let rem = square_order_type(&m)
            .sub_left(c)
            .expect("square of the greedy prefix never exceeds the code");
        let Some(rem_exp) = rem.leading_exp() else {
            break;
        };
        if rem_exp > &lead {
            // Remaining contribution w^(lead + gamma) * d pins the next term.
            let gamma = lead
                .sub_left(rem_exp)
                .expect("remainder exponent dominates the lead");
            let d = search_max(BigUint::one(), |k| {
                &square_order_type(&m.add(&Ordinal::term(gamma.clone(), k.clone()))) <= c
            });
            m = m.add(&Ordinal::term(gamma.clone(), d));
        } else {
            let n = search_max(BigUint::zero(), |k| {
                &square_order_type(&m.add(&Ordinal::from_nat(k.clone()))) <= c
            });
            m = m.add(&Ordinal::from_nat(n));
            break;
        }
    }
    m
}

/// Inverse of [`goedel_pair`].
pub fn goedel_unpair(c: &Ordinal) -> (Ordinal, Ordinal) {
    let m = inv_square(c);
    let offset = square_order_type(&m)
        .sub_left(c)
        .expect("code lies at or above its block");
    if offset < m {
        (offset, m)
    } else {
        let second = m.sub_left(&offset).expect("offset lies within the block");
        debug_assert!(second <= m);
        (m, second)
    }
}
