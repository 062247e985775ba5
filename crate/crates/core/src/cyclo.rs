//! Exact arithmetic in cyclotomic fields Q(zeta_n).
//!
//! A [`CycNum`] is a residue in Q[x]/(Phi_n(x)) stored on the power basis
//! {1, zeta, ..., zeta^(phi(n)-1)} with rational coefficients; reduction
//! modulo the n-th cyclotomic polynomial is canonical, so two equal values
//! of the same order have identical coefficient vectors.  Binary operations
//! between different orders first lift both arguments to the lcm order
//! (capped, default 10^6).
//!
//! Square roots of rationals are supported through [`CycNum::sqrt_rational`],
//! which *folds* sqrt(q) into a cyclotomic field via quadratic Gauss sums
//! (sqrt(p) for p = 1 mod 4 lives in Q(zeta_p), for p = 3 mod 4 in
//! Q(zeta_4p), sqrt(2) in Q(zeta_8), sqrt(-1) = zeta_4).  The sign
//! convention is the positive real embedding under zeta_n = e^(2 pi i / n).
//! Folding keeps every value in a single canonical representation, so
//! equality between, say, a Gauss sum computed by enumeration and a
//! normalization constant p^(-1/2) is decided by plain coefficient
//! comparison after an order lift.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on the lcm order produced by binary operations.
pub const DEFAULT_ORDER_CAP: u64 = 1_000_000;

/// Euler's totient.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2u64;
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
    let mut d = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            d.push(i);
            if i != n / i {
                d.push(n / i);
            }
        }
        i += 1;
    }
    d.sort_unstable();
    d
}

/// Cyclotomic polynomial Phi_n as a dense integer coefficient vector,
/// low degree first.  Computed by exact division of x^n - 1 by the
/// Phi_d for proper divisors d, and cached.
fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let poly = if n == 1 {
        vec![BigInt::from(-1), BigInt::from(1)]
    } else {
        // x^n - 1
        let mut num = vec![BigInt::zero(); (n + 1) as usize];
        num[0] = BigInt::from(-1);
        num[n as usize] = BigInt::one();
        for d in divisors(n) {
            if d != n {
                let phi_d = cyclotomic_poly(d);
                num = exact_div_int(&num, &phi_d);
            }
        }
        num
    };
    cache.lock().unwrap().insert(n, poly.clone());
    poly
}

/// Exact polynomial division of integer polynomials, panics on nonzero
/// remainder (only used with cyclotomic factors, where division is exact).
fn exact_div_int(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    let mut quo = vec![BigInt::zero(); dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = rem[k + dd].clone();
        if !c.is_zero() {
            quo[k] = c.clone();
            for j in 0..=dd {
                rem[k + j] -= &c * &den[j];
            }
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact division");
    quo
}

/// Exact element of Q(zeta_n).
#[derive(Clone, PartialEq, Eq)]
pub struct CycNum {
    order: u64,
    /// Length phi(order), coefficients on the power basis.
    coeffs: Vec<BigRational>,
}

impl CycNum {
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn zero() -> Self {
        CycNum { order: 1, coeffs: vec![BigRational::zero()] }
    }

    pub fn one() -> Self {
        CycNum { order: 1, coeffs: vec![BigRational::one()] }
    }

    pub fn from_rational(r: BigRational) -> Self {
        CycNum { order: 1, coeffs: vec![r] }
    }

    pub fn from_int(k: i64) -> Self {
        Self::from_rational(BigRational::from(BigInt::from(k)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0);
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// zeta_n^k, canonically reduced.
    pub fn root_of_unity(n: u64, k: i64) -> Self {
        assert!(n >= 1);
        let kk = k.rem_euclid(n as i64) as u64;
        let phi = euler_phi(n) as usize;
        let mut poly = vec![BigRational::zero(); (kk + 1).max(1) as usize];
        poly[kk as usize] = BigRational::one();
        let coeffs = reduce_mod_cyclotomic(poly, n, phi);
        CycNum { order: n, coeffs }.shrink()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Exact rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Collapse to order 1 when the stored value is rational.
    fn shrink(self) -> Self {
        if self.order > 1 {
            if let Some(r) = self.as_rational() {
                return CycNum::from_rational(r);
            }
        }
        self
    }

    /// Lift to order m (self.order must divide m).
    pub fn lift_to(&self, m: u64) -> Self {
        assert!(m % self.order == 0, "lift target must be a multiple of the order");
        if m == self.order {
            return self.clone();
        }
        let step = (m / self.order) as usize;
        let phi_m = euler_phi(m) as usize;
        let mut poly = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[j * step] = c.clone();
            }
        }
        let coeffs = reduce_mod_cyclotomic(poly, m, phi_m);
        CycNum { order: m, coeffs }
    }

    fn common_order(&self, other: &Self, cap: u64) -> Result<u64> {
        let l = self.order.lcm(&other.order);
        if l > cap {
            return Err(Error::OrderTooLarge(l, cap));
        }
        Ok(l)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("order cap exceeded")
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let l = self.common_order(other, DEFAULT_ORDER_CAP)?;
        let a = self.lift_to(l);
        let b = other.lift_to(l);
        let coeffs = a
            .coeffs
            .iter()
            .zip(b.coeffs.iter())
            .map(|(x, y)| x + y)
            .collect();
        Ok(CycNum { order: l, coeffs }.shrink())
    }

    pub fn neg(&self) -> Self {
        CycNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("order cap exceeded")
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let l = self.common_order(other, DEFAULT_ORDER_CAP)?;
        let a = self.lift_to(l);
        let b = other.lift_to(l);
        let phi = euler_phi(l) as usize;
        let mut poly = vec![BigRational::zero(); 2 * phi];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    poly[i + j] += x * y;
                }
            }
        }
        let coeffs = reduce_mod_cyclotomic(poly, l, phi);
        Ok(CycNum { order: l, coeffs }.shrink())
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
        .shrink()
    }

    /// Multiplicative inverse; Q[x]/(Phi_n) is a field, so extended
    /// Euclid against Phi_n always succeeds for nonzero input.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(CycNum::from_rational(r.recip()));
        }
        let n = self.order;
        let modulus: Vec<BigRational> = cyclotomic_poly(n)
            .iter()
            .map(|c| BigRational::from(c.clone()))
            .collect();
        let inv = poly_mod_inverse(&self.coeffs, &modulus)?;
        let phi = euler_phi(n) as usize;
        let coeffs = reduce_mod_cyclotomic(inv, n, phi);
        Ok(CycNum { order: n, coeffs }.shrink())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Ok(CycNum::one());
        }
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = CycNum::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            sq = sq.mul(&sq);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Complex conjugation zeta -> zeta^(-1); fixes rationals and every
    /// folded sqrt(q) with q > 0.
    pub fn conj(&self) -> Self {
        let n = self.order;
        if n == 1 {
            return self.clone();
        }
        let phi = euler_phi(n) as usize;
        let mut poly = vec![BigRational::zero(); n as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let k = ((n as usize) - j) % n as usize;
                poly[k] += c;
            }
        }
        let coeffs = reduce_mod_cyclotomic(poly, n, phi);
        CycNum { order: n, coeffs }.shrink()
    }

    pub fn eq_val(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Canonical cyclotomic representative of sqrt(q) for rational q,
    /// positive real embedding (and sqrt(-1) = zeta_4 for the sign).
    ///
    /// Used for half-integral normalizations such as |D|^(1/2) = p^(-1/2).
    pub fn sqrt_rational(q: &BigRational) -> Result<Self> {
        if q.is_zero() {
            return Ok(CycNum::zero());
        }
        let num = q.numer().clone();
        let den = q.denom().clone();
        // sqrt(a/b) = sqrt(a*b) / b
        let ab = &num * &den;
        let negative = ab.is_negative();
        let mut m = ab.abs();
        // strip square part
        let mut square = BigInt::one();
        let mut squarefree: Vec<u64> = Vec::new();
        let mut p = BigInt::from(2);
        while &p * &p <= m {
            let mut e = 0u32;
            while (&m % &p).is_zero() {
                m /= &p;
                e += 1;
            }
            if e > 0 {
                square *= p.pow(e / 2);
                if e % 2 == 1 {
                    squarefree.push(u64::try_from(&p).map_err(|_| {
                        Error::BadDescriptor(format!("sqrt argument prime factor too large: {p}"))
                    })?);
                }
            }
            p += 1;
        }
        if m > BigInt::one() {
            squarefree.push(u64::try_from(&m).map_err(|_| {
                Error::BadDescriptor(format!("sqrt argument prime factor too large: {m}"))
            })?);
        }
        let mut result = CycNum::from_rational(BigRational::new(square, den));
        for pf in squarefree {
            result = result.mul(&sqrt_prime(pf));
        }
        if negative {
            result = result.mul(&CycNum::root_of_unity(4, 1));
        }
        Ok(result)
    }

    /// A printable form like `3/2*z12^5 - z12`.
    pub fn to_display_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = if j == 0 {
                String::new()
            } else if j == 1 {
                format!("z{}", self.order)
            } else {
                format!("z{}^{}", self.order, j)
            };
            let s = match (mono.is_empty(), c.is_one(), (-c).is_one()) {
                (true, _, _) => format!("{}", c),
                (false, true, _) => mono,
                (false, _, true) => format!("-{}", mono),
                (false, _, _) => format!("{}*{}", c, mono),
            };
            parts.push(s);
        }
        let mut out = String::new();
        for (i, s) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(s);
            } else if let Some(stripped) = s.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(s);
            }
        }
        out
    }

    /// Complex embedding zeta_n -> e^(2 pi i k0 / n) (k0 = 1), for debug
    /// printing only; carries no exactness contract.
    pub fn embed_f64(&self) -> (f64, f64) {
        let n = self.order as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let x = rational_to_f64(c);
            let t = 2.0 * std::f64::consts::PI * (j as f64) / n;
            re += x * t.cos();
            im += x * t.sin();
        }
        (re, im)
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    let n = r.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let d = r.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    n / d
}

/// sqrt(p) for a prime p, as an exact cyclotomic number.
fn sqrt_prime(p: u64) -> CycNum {
    if p == 2 {
        // zeta_8 + zeta_8^-1 = 2 cos(pi/4)
        return CycNum::root_of_unity(8, 1).add(&CycNum::root_of_unity(8, -1));
    }
    // Quadratic Gauss sum g = sum_a (a|p) zeta_p^a equals sqrt(p) for
    // p = 1 mod 4 and i*sqrt(p) for p = 3 mod 4.
    let mut g = CycNum::zero();
    for a in 1..p {
        let term = CycNum::root_of_unity(p, a as i64);
        if legendre(a as i64, p) == 1 {
            g = g.add(&term);
        } else {
            g = g.sub(&term);
        }
    }
    if p % 4 == 1 {
        g
    } else {
        g.mul(&CycNum::root_of_unity(4, -1))
    }
}

/// Legendre symbol (a|p) for odd prime p.
pub fn legendre(a: i64, p: u64) -> i64 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    let mut r = 1u64;
    let mut base = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

fn reduce_mod_cyclotomic(mut poly: Vec<BigRational>, n: u64, phi: usize) -> Vec<BigRational> {
    let modulus = cyclotomic_poly(n);
    let deg_m = modulus.len() - 1;
    if poly.len() > deg_m {
        for k in (deg_m..poly.len()).rev() {
            let c = std::mem::replace(&mut poly[k], BigRational::zero());
            if !c.is_zero() {
                for j in 0..deg_m {
                    let m = BigRational::from(modulus[j].clone());
                    poly[k - deg_m + j] -= &c * m;
                }
            }
        }
    }
    poly.truncate(deg_m);
    poly.resize(phi.max(1), BigRational::zero());
    debug_assert!(deg_m == phi);
    poly
}

/// Inverse of `a` modulo the monic polynomial `m` over Q, by extended
/// Euclid.  Returns a polynomial u with a*u = 1 mod m.
fn poly_mod_inverse(a: &[BigRational], m: &[BigRational]) -> Result<Vec<BigRational>> {
    type P = Vec<BigRational>;
    fn deg(p: &P) -> Option<usize> {
        p.iter().rposition(|c| !c.is_zero())
    }
    fn rem_div(mut num: P, den: &P) -> (P, P) {
        let dd = deg(den).unwrap();
        let lead = den[dd].clone();
        let mut quo = vec![BigRational::zero(); num.len()];
        while let Some(dn) = deg(&num) {
            if dn < dd {
                break;
            }
            let c = &num[dn] / &lead;
            quo[dn - dd] = c.clone();
            for j in 0..=dd {
                let t = &c * &den[j];
                num[dn - dd + j] -= t;
            }
        }
        (quo, num)
    }
    let mut r0: P = m.to_vec();
    let mut r1: P = a.to_vec();
    let mut t0: P = vec![BigRational::zero()];
    let mut t1: P = vec![BigRational::one()];
    while deg(&r1).is_some() {
        let (q, r) = rem_div(r0.clone(), &r1);
        let mut t2 = t0.clone();
        // t2 = t0 - q * t1
        let mut qt = vec![BigRational::zero(); q.len() + t1.len()];
        for (i, qc) in q.iter().enumerate() {
            if qc.is_zero() {
                continue;
            }
            for (j, tc) in t1.iter().enumerate() {
                if !tc.is_zero() {
                    qt[i + j] += qc * tc;
                }
            }
        }
        if t2.len() < qt.len() {
            t2.resize(qt.len(), BigRational::zero());
        }
        for (i, v) in qt.into_iter().enumerate() {
            t2[i] -= v;
        }
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t2;
    }
    // r0 is the gcd, a nonzero constant since Phi_n is irreducible.
    let d0 = deg(&r0).ok_or(Error::DivisionByZero)?;
    if d0 != 0 {
        return Err(Error::DivisionByZero);
    }
    let c = r0[0].clone();
    Ok(t0.into_iter().map(|x| x / &c).collect())
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum({})", self.to_display_string())
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_display_string())
    }
}

/// JSON form: `{"n": order, "coeffs": [["num","den"], ...], "sqrt_q": null,
/// "sqrt_coeffs": null}`.  Values produced by this crate always have the
/// sqrt fields null (radicals are folded into the cyclotomic part, see the
/// module docs); descriptors with `sqrt_q` set are accepted on input and
/// folded.  Round-tripping our own output is bit-exact.
#[derive(Serialize, Deserialize)]
pub struct CycNumJson {
    pub n: u64,
    pub coeffs: Vec<(String, String)>,
    pub sqrt_q: Option<(String, String)>,
    pub sqrt_coeffs: Option<Vec<(String, String)>>,
}

fn rat_to_pair(r: &BigRational) -> (String, String) {
    (r.numer().to_string(), r.denom().to_string())
}

fn pair_to_rat(p: &(String, String)) -> Result<BigRational> {
    let n: BigInt = p.0.parse().map_err(|_| Error::BadDescriptor(format!("bad numerator {}", p.0)))?;
    let d: BigInt = p.1.parse().map_err(|_| Error::BadDescriptor(format!("bad denominator {}", p.1)))?;
    if d.is_zero() {
        return Err(Error::BadDescriptor("zero denominator".into()));
    }
    Ok(BigRational::new(n, d))
}

impl CycNum {
    pub fn to_json(&self) -> CycNumJson {
        CycNumJson {
            n: self.order,
            coeffs: self.coeffs.iter().map(rat_to_pair).collect(),
            sqrt_q: None,
            sqrt_coeffs: None,
        }
    }

    pub fn from_json(j: &CycNumJson) -> Result<Self> {
        if j.n == 0 {
            return Err(Error::BadDescriptor("order must be positive".into()));
        }
        let phi = euler_phi(j.n) as usize;
        let mut coeffs: Vec<BigRational> = j.coeffs.iter().map(pair_to_rat).collect::<Result<_>>()?;
        coeffs.resize(phi, BigRational::zero());
        let main = CycNum { order: j.n, coeffs: reduce_mod_cyclotomic(coeffs, j.n, phi) }.shrink();
        match (&j.sqrt_q, &j.sqrt_coeffs) {
            (None, None) => Ok(main),
            (Some(q), Some(sc)) => {
                let mut sco: Vec<BigRational> = sc.iter().map(pair_to_rat).collect::<Result<_>>()?;
                sco.resize(phi, BigRational::zero());
                let part = CycNum { order: j.n, coeffs: reduce_mod_cyclotomic(sco, j.n, phi) }.shrink();
                let root = CycNum::sqrt_rational(&pair_to_rat(q)?)?;
                main.try_add(&part.try_mul(&root)?)
            }
            _ => Err(Error::BadDescriptor(
                "sqrt_q and sqrt_coeffs must be both present or both null".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64, k: i64) -> CycNum {
        CycNum::root_of_unity(n, k)
    }

    #[test]
    fn zeta4_squared_is_minus_one() {
        assert!(z(4, 1).mul(&z(4, 1)).eq_val(&CycNum::from_int(-1)));
    }

    #[test]
    fn cyclotomic_relation_order_3() {
        // 1 + zeta_3 + zeta_3^2 = 0
        let s = CycNum::one().add(&z(3, 1)).add(&z(3, 2));
        assert!(s.is_zero());
    }

    #[test]
    fn difference_of_squares_with_sqrt5() {
        // (1 + sqrt5)(1 - sqrt5) = -4
        let r5 = CycNum::sqrt_rational(&BigRational::from(BigInt::from(5))).unwrap();
        let a = CycNum::one().add(&r5);
        let b = CycNum::one().sub(&r5);
        assert!(a.mul(&b).eq_val(&CycNum::from_int(-4)));
    }

    #[test]
    fn conj_inverts_roots_and_fixes_rationals() {
        assert!(z(5, 1).conj().eq_val(&z(5, 4)));
        assert!(CycNum::from_ratio(3, 7).conj().eq_val(&CycNum::from_ratio(3, 7)));
        let real = z(8, 1).add(&z(8, -1));
        assert!(real.conj().eq_val(&real));
    }

    #[test]
    fn equality_across_orders() {
        // zeta_6 = -zeta_3^2
        assert!(z(6, 1).eq_val(&z(3, 2).neg()));
        assert!(!z(5, 1).eq_val(&z(5, 2)));
        let mut s = CycNum::zero();
        for k in 0..7 {
            s = s.add(&z(7, k));
        }
        assert!(s.eq_val(&CycNum::zero()));
    }

    #[test]
    fn lift_coherence() {
        // lifting to m then to lm equals lifting to lm directly
        let a = z(6, 1).add(&CycNum::from_ratio(2, 3));
        let via = a.lift_to(12).lift_to(48);
        let direct = a.lift_to(48);
        assert_eq!(via.coeffs(), direct.coeffs());
    }

    #[test]
    fn sqrt_primes_square_back() {
        for p in [2u64, 3, 5, 7, 13] {
            let r = CycNum::sqrt_rational(&BigRational::from(BigInt::from(p as i64))).unwrap();
            assert!(r.mul(&r).eq_val(&CycNum::from_int(p as i64)), "sqrt({p})^2 != {p}");
        }
        // sqrt(1/3)^2 = 1/3
        let r = CycNum::sqrt_rational(&BigRational::new(BigInt::one(), BigInt::from(3))).unwrap();
        assert!(r.mul(&r).eq_val(&CycNum::from_ratio(1, 3)));
        // sqrt(-1) = zeta_4
        let i = CycNum::sqrt_rational(&BigRational::from(BigInt::from(-1))).unwrap();
        assert!(i.eq_val(&z(4, 1)));
    }

    #[test]
    fn sqrt5_coincides_with_gauss_sum() {
        // The folded sqrt(5) must equal the enumeration-side Gauss sum
        // zeta5 - zeta5^2 - zeta5^3 + zeta5^4.
        let r5 = CycNum::sqrt_rational(&BigRational::from(BigInt::from(5))).unwrap();
        let g = z(5, 1).sub(&z(5, 2)).sub(&z(5, 3)).add(&z(5, 4));
        assert!(r5.eq_val(&g));
    }

    #[test]
    fn inverse_of_randomized_elements() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let orders = [3u64, 4, 5, 8, 12];
        let mut tested = 0;
        while tested < 1000 {
            let n = orders[rng.gen_range(0..orders.len())];
            let phi = euler_phi(n) as usize;
            let mut a = CycNum::zero();
            for j in 0..phi {
                let c = rng.gen_range(-3i64..=3);
                if c != 0 {
                    a = a.add(&z(n, j as i64).scale(&BigRational::from(BigInt::from(c))));
                }
            }
            if a.is_zero() {
                continue;
            }
            let inv = a.inv().unwrap();
            assert!(a.mul(&inv).is_one());
            tested += 1;
        }
    }

    #[test]
    fn conj_is_multiplicative_randomized() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n1 = [3u64, 4, 5, 7][rng.gen_range(0..4)];
            let n2 = [3u64, 4, 8, 9][rng.gen_range(0..4)];
            let a = z(n1, rng.gen_range(0..n1 as i64)).scale(&BigRational::from(BigInt::from(rng.gen_range(1..5))));
            let b = z(n2, rng.gen_range(0..n2 as i64)).add(&CycNum::from_int(rng.gen_range(-2..3)));
            let lhs = a.mul(&b).conj();
            let rhs = a.conj().mul(&b.conj());
            assert!(lhs.eq_val(&rhs));
        }
    }

    #[test]
    fn order_cap_is_enforced() {
        let a = CycNum::root_of_unity(999_983, 1); // large prime order
        let b = CycNum::root_of_unity(101, 1);
        match a.try_mul(&b) {
            Err(Error::OrderTooLarge(..)) => {}
            other => panic!("expected OrderTooLarge, got {other:?}"),
        }
    }

    #[test]
    fn json_round_trip_bit_exact() {
        let v = z(12, 5)
            .scale(&BigRational::new(BigInt::from(3), BigInt::from(2)))
            .add(&CycNum::from_ratio(-7, 5));
        let j = serde_json::to_string(&v.to_json()).unwrap();
        let back = CycNum::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(v, back);
        let j2 = serde_json::to_string(&back.to_json()).unwrap();
        assert_eq!(j, j2);
    }

    #[test]
    fn json_accepts_sqrt_descriptor_and_folds() {
        // 2 + 3*sqrt(5) given in rank-2 form
        let txt = r#"{"n":1,"coeffs":[["2","1"]],"sqrt_q":["5","1"],"sqrt_coeffs":[["3","1"]]}"#;
        let v = CycNum::from_json(&serde_json::from_str(&txt).unwrap()).unwrap();
        let r5 = CycNum::sqrt_rational(&BigRational::from(BigInt::from(5))).unwrap();
        let want = CycNum::from_int(2).add(&r5.scale(&BigRational::from(BigInt::from(3))));
        assert!(v.eq_val(&want));
    }
}
