//! Integer Laurent polynomials in one variable `t`: arithmetic, unit
//! normalization, content, gcd in the UFD sense, cyclotomic polynomials,
//! cyclotomic-factor detection, and reduction mod a prime.
//!
//! The Alexander polynomial is only defined up to a unit `±t^r`, so most
//! consumers work with [`NormalizedPoly`], the canonical unit-orbit
//! representative. Integer content is preserved through normalization: the
//! mod-p criterion reads it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LaurentError {
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// Sparse Laurent polynomial: exponent -> nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> LaurentPoly {
        LaurentPoly::default()
    }

    pub fn one() -> LaurentPoly {
        LaurentPoly::term(0, 1)
    }

    pub fn term<T: Into<BigInt>>(exponent: i64, coeff: T) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        p.add_term(exponent, coeff.into());
        p
    }

    /// Dense constructor: coefficients for `t^0, t^1, ...`.
    pub fn from_coeffs<T: Into<BigInt> + Clone>(coeffs: &[T]) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            p.add_term(e as i64, c.clone().into());
        }
        p
    }

    pub fn add_term(&mut self, exponent: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exponent).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&exponent);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exponent: i64) -> BigInt {
        self.coeffs.get(&exponent).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Degree span (max - min exponent); 0 for monomials and for zero.
    pub fn degree_span(&self) -> i64 {
        match (self.min_exponent(), self.max_exponent()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    pub fn shift(&self, by: i64) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e + by, c.clone())).collect(),
        }
    }

    /// Sum of coefficients, i.e. evaluation at t = 1.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// Positive gcd of the coefficients; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }
}

impl fmt::Display for LaurentPoly {
    /// Report form: coefficients ascending, e.g. `3 + 4*t - t^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = mag.is_one();
            match (e, unit_coeff) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{e}")?,
                (_, false) => write!(f, "{mag}*t^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

/// The canonical unit-orbit representative: minimum exponent 0, nonzero
/// constant term, positive leading coefficient. Zero has its own
/// representation. Integer content is preserved, not divided out.
#[derive(Clone, PartialEq, Eq)]
pub struct NormalizedPoly(LaurentPoly);

impl NormalizedPoly {
    pub fn poly(&self) -> &LaurentPoly {
        &self.0
    }

    pub fn into_poly(self) -> LaurentPoly {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.0 == LaurentPoly::one()
    }

    /// Degree of the normalized representative.
    pub fn degree(&self) -> i64 {
        self.0.max_exponent().unwrap_or(0)
    }

    pub fn content(&self) -> BigInt {
        self.0.content()
    }
}

impl fmt::Display for NormalizedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for NormalizedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NormalizedPoly({})", self.0)
    }
}

/// Canonical representative of the unit orbit `{±t^r p}`.
pub fn normalize(p: &LaurentPoly) -> NormalizedPoly {
    if p.is_zero() {
        return NormalizedPoly(LaurentPoly::zero());
    }
    let lo = p.min_exponent().unwrap();
    let mut q = p.shift(-lo);
    if q.coeff(q.max_exponent().unwrap()).is_negative() {
        q = q.neg();
    }
    NormalizedPoly(q)
}

/// Dense ascending coefficient vector of an ordinary polynomial in `t`.
fn to_dense(p: &LaurentPoly) -> Vec<BigInt> {
    debug_assert!(p.min_exponent().is_none_or(|lo| lo >= 0));
    let deg = p.max_exponent().unwrap_or(0);
    let mut out = vec![BigInt::zero(); deg as usize + 1];
    for (e, c) in p.terms() {
        out[e as usize] = c.clone();
    }
    out
}

fn from_dense(coeffs: &[BigInt]) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for (e, c) in coeffs.iter().enumerate() {
        p.add_term(e as i64, c.clone());
    }
    p
}

fn dense_deg(a: &[BigInt]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

/// Exact division in Z[t]: `Some(q)` iff `p = q * d` over the integers.
pub fn exact_div(p: &LaurentPoly, d: &LaurentPoly) -> Option<LaurentPoly> {
    if d.is_zero() {
        return None;
    }
    if p.is_zero() {
        return Some(LaurentPoly::zero());
    }
    // align both to ordinary polynomials; the exponent offset must divide out
    let p0 = p.shift(-p.min_exponent().unwrap());
    let d0 = d.shift(-d.min_exponent().unwrap());
    let mut rem = to_dense(&p0);
    let den = to_dense(&d0);
    let dd = dense_deg(&den).unwrap();
    let mut quot = vec![BigInt::zero(); rem.len()];
    loop {
        let rd = match dense_deg(&rem) {
            None => break,
            Some(rd) => rd,
        };
        if rd < dd {
            return None;
        }
        let (q, r) = rem[rd].div_rem(&den[dd]);
        if !r.is_zero() {
            return None;
        }
        let shift = rd - dd;
        quot[shift] = q.clone();
        for i in 0..=dd {
            let sub = &q * &den[i];
            rem[shift + i] -= sub;
        }
        debug_assert!(rem[rd].is_zero());
    }
    Some(from_dense(&quot).shift(p.min_exponent().unwrap() - d.min_exponent().unwrap()))
}

/// Primitive part and content of an ordinary dense polynomial.
fn primitive_part(mut a: Vec<BigInt>) -> (Vec<BigInt>, BigInt) {
    let content = a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if content.is_zero() {
        return (a, content);
    }
    for c in a.iter_mut() {
        *c /= &content;
    }
    (a, content)
}

/// Pseudo-remainder of primitive `a` by primitive `b` (deg a >= deg b).
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let da = dense_deg(a).unwrap();
    let db = dense_deg(b).unwrap();
    let lc = b[db].clone();
    let mut rem = a.to_vec();
    for k in (db..=da).rev() {
        if rem[k].is_zero() {
            continue;
        }
        let coef = rem[k].clone();
        for (i, r) in rem.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            *r *= &lc;
        }
        rem[k] = BigInt::zero();
        let shift = k - db;
        for i in 0..db {
            let sub = &coef * &b[i];
            rem[shift + i] -= sub;
        }
    }
    rem
}

/// Gcd in the UFD of integer Laurent polynomials: gcd of contents times the
/// primitive gcd, as the canonical normalized representative.
pub fn gcd(p: &LaurentPoly, q: &LaurentPoly) -> NormalizedPoly {
    if p.is_zero() {
        return normalize(q);
    }
    if q.is_zero() {
        return normalize(p);
    }
    let p0 = normalize(p).into_poly();
    let q0 = normalize(q).into_poly();
    let (mut a, ca) = primitive_part(to_dense(&p0));
    let (mut b, cb) = primitive_part(to_dense(&q0));
    let content = ca.gcd(&cb);
    if dense_deg(&a) < dense_deg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    // primitive Euclidean remainder sequence
    while dense_deg(&b).is_some() {
        let r = pseudo_rem(&a, &b);
        let (r, _) = primitive_part(r);
        a = b;
        b = r;
        if dense_deg(&a) < dense_deg(&b) {
            std::mem::swap(&mut a, &mut b);
        }
    }
    let g = from_dense(&a).mul(&LaurentPoly::term(0, content));
    let g = normalize(&g);
    debug_assert!(exact_div(p, g.poly()).is_some() && exact_div(q, g.poly()).is_some());
    g
}

/// Euler's totient by trial factorization.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            out.push(i);
            if i != n / i {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out.sort_unstable();
    out
}

/// The d-th cyclotomic polynomial, by iterated exact division of `t^d - 1`
/// by the cyclotomic polynomials of the proper divisors.
pub fn cyclotomic(d: u64) -> NormalizedPoly {
    assert!(d >= 1);
    let mut num = LaurentPoly::term(d as i64, 1);
    num.add_term(0, BigInt::from(-1));
    let mut result = num;
    for e in divisors(d) {
        if e == d {
            continue;
        }
        let phi_e = cyclotomic(e);
        result = exact_div(&result, phi_e.poly()).expect("cyclotomic division is exact");
    }
    normalize(&result)
}

/// All `d` such that the d-th cyclotomic polynomial divides `p` exactly.
///
/// Only `d` with `euler_phi(d) <= deg p` can divide, and `euler_phi(d) >=
/// sqrt(d/2)`, so scanning `d <= 2 deg^2` is exhaustive.
pub fn cyclotomic_factors(p: &LaurentPoly) -> Result<BTreeSet<u64>, LaurentError> {
    if p.is_zero() {
        return Err(LaurentError::ZeroPolynomial);
    }
    let deg = normalize(p).degree() as u64;
    let mut out = BTreeSet::new();
    if deg == 0 {
        return Ok(out);
    }
    for d in 1..=2 * deg * deg {
        if euler_phi(d) <= deg && exact_div(p, cyclotomic(d).poly()).is_some() {
            out.insert(d);
        }
    }
    Ok(out)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Coefficientwise reduction into `0..p`; requires `p` prime.
pub fn reduce_mod_p(poly: &LaurentPoly, p: u64) -> Result<LaurentPoly, LaurentError> {
    if !is_prime(p) {
        return Err(LaurentError::NotPrime(p));
    }
    let modulus = BigInt::from(p);
    let mut out = LaurentPoly::zero();
    for (e, c) in poly.terms() {
        out.add_term(e, c.mod_floor(&modulus));
    }
    Ok(out)
}

/// Smallest prime factor, if any (i.e. if `n > 1`).
pub fn smallest_prime_factor(n: &BigInt) -> Option<BigInt> {
    let n = n.abs();
    if n <= BigInt::one() {
        return None;
    }
    let two = BigInt::from(2);
    if (&n % &two).is_zero() {
        return Some(two);
    }
    let mut d = BigInt::from(3);
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            return Some(d);
        }
        d += 2;
    }
    Some(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(coeffs: &[i64]) -> LaurentPoly {
        LaurentPoly::from_coeffs(coeffs)
    }

    #[test]
    fn normalize_examples() {
        // -3 t^-1 - 3  ->  3 + 3t
        let mut p = LaurentPoly::term(-1, -3);
        p.add_term(0, BigInt::from(-3));
        assert_eq!(normalize(&p).poly(), &poly(&[3, 3]));

        assert!(normalize(&LaurentPoly::zero()).is_zero());

        // t^5 - t^3 -> t^2 - 1
        let p = LaurentPoly::term(5, 1).sub(&LaurentPoly::term(3, 1));
        assert_eq!(normalize(&p).poly(), &poly(&[-1, 0, 1]));
    }

    #[test]
    fn normalize_idempotent_and_unit_orbit() {
        let p = poly(&[2, -1, 3]);
        let n = normalize(&p);
        assert_eq!(normalize(n.poly()), n);
        for r in -3..=3 {
            assert_eq!(normalize(&p.shift(r)), n);
            assert_eq!(normalize(&p.shift(r).neg()), n);
        }
    }

    #[test]
    fn gcd_examples() {
        let g = gcd(&poly(&[-1, 0, 1]), &poly(&[-1, 0, 0, 1]));
        assert_eq!(g.poly(), &poly(&[-1, 1]));

        let g = gcd(&poly(&[2, 2]), &poly(&[4]));
        assert_eq!(g.poly(), &poly(&[2]));

        let p = poly(&[3, 1, 4]);
        assert_eq!(gcd(&p, &LaurentPoly::zero()), normalize(&p));
        assert!(gcd(&LaurentPoly::zero(), &LaurentPoly::zero()).is_zero());
    }

    #[test]
    fn gcd_divides_inputs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..60 {
            let p = {
                let coeffs: Vec<i64> = (0..rng.gen_range(1..5)).map(|_| rng.gen_range(-5..=5)).collect();
                poly(&coeffs).shift(rng.gen_range(-2..=2))
            };
            let q = {
                let coeffs: Vec<i64> = (0..rng.gen_range(1..5)).map(|_| rng.gen_range(-5..=5)).collect();
                poly(&coeffs).shift(rng.gen_range(-2..=2))
            };
            let g = gcd(&p, &q);
            if g.is_zero() {
                assert!(p.is_zero() && q.is_zero());
            } else {
                assert!(exact_div(&p, g.poly()).is_some(), "gcd {g} does not divide {p}");
                assert!(exact_div(&q, g.poly()).is_some(), "gcd {g} does not divide {q}");
            }
        }
    }

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic(1).poly(), &poly(&[-1, 1]));
        assert_eq!(cyclotomic(2).poly(), &poly(&[1, 1]));
        assert_eq!(cyclotomic(3).poly(), &poly(&[1, 1, 1]));
        assert_eq!(cyclotomic(6).poly(), &poly(&[1, -1, 1]));
    }

    #[test]
    fn cyclotomic_product_identity() {
        for k in 1..=30u64 {
            let mut prod = LaurentPoly::one();
            for d in divisors(k) {
                prod = prod.mul(cyclotomic(d).poly());
            }
            let mut expect = LaurentPoly::term(k as i64, 1);
            expect.add_term(0, BigInt::from(-1));
            assert_eq!(prod, expect, "product of cyclotomics for k={k}");
        }
    }

    #[test]
    fn cyclotomic_factor_examples() {
        assert_eq!(
            cyclotomic_factors(&poly(&[1, 1, 1])).unwrap(),
            BTreeSet::from([3])
        );
        // p + q t with 0 < p < q coprime: no root on the unit circle
        assert!(cyclotomic_factors(&poly(&[2, 3])).unwrap().is_empty());
        assert_eq!(
            cyclotomic_factors(&poly(&[-1, 0, 0, 0, 1])).unwrap(),
            BTreeSet::from([1, 2, 4])
        );
        assert_eq!(
            cyclotomic_factors(&LaurentPoly::zero()),
            Err(LaurentError::ZeroPolynomial)
        );
    }

    #[test]
    fn cyclotomic_factor_recovery_randomized() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let chosen: BTreeSet<u64> = (1..=12).filter(|_| rng.gen_bool(0.3)).collect();
            let mut prod = LaurentPoly::one();
            for &d in &chosen {
                prod = prod.mul(cyclotomic(d).poly());
            }
            assert_eq!(cyclotomic_factors(&prod).unwrap(), chosen);
        }
    }

    #[test]
    fn reduce_mod_p_examples() {
        assert!(reduce_mod_p(&poly(&[2, 2]), 2).unwrap().is_zero());
        assert_eq!(reduce_mod_p(&poly(&[3, 4]), 2).unwrap(), poly(&[1]));
        assert_eq!(reduce_mod_p(&poly(&[6, 10, 15]), 5).unwrap(), poly(&[1]));
        assert_eq!(reduce_mod_p(&poly(&[1]), 6), Err(LaurentError::NotPrime(6)));
    }

    #[test]
    fn display_form() {
        let p = poly(&[3, 4, -1]);
        assert_eq!(p.to_string(), "3 + 4*t - t^2");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(LaurentPoly::term(-2, 1).to_string(), "t^-2");
    }

    #[test]
    fn smallest_prime_factors() {
        assert_eq!(smallest_prime_factor(&BigInt::from(1)), None);
        assert_eq!(smallest_prime_factor(&BigInt::from(2)), Some(BigInt::from(2)));
        assert_eq!(smallest_prime_factor(&BigInt::from(15)), Some(BigInt::from(3)));
        assert_eq!(smallest_prime_factor(&BigInt::from(-7)), Some(BigInt::from(7)));
    }

    proptest::proptest! {
        #[test]
        fn normalize_constant_on_unit_orbit(coeffs in proptest::collection::vec(-9i64..=9, 1..6), r in -4i64..=4, neg in proptest::bool::ANY) {
            let p = poly(&coeffs);
            let mut q = p.shift(r);
            if neg { q = q.neg(); }
            proptest::prop_assert_eq!(normalize(&p), normalize(&q));
        }
    }
}
