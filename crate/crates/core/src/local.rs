//! Finite models of p-adic data over F_v = Q_p: the etale quadratic
//! algebra E_v (split, inert, or tamely ramified), coset enumeration at
//! finite precision, Haar measures, multiplicative and additive characters,
//! the quadratic character eta, and local Euler factors.
//!
//! Conventions used throughout the crate:
//!
//! * The base field is always Q_p, so the absolute different is trivial:
//!   v(d) = 0.  Every |d|^k factor from the normalizations is kept as an
//!   explicit multiplier equal to 1.
//! * Multiplicative Haar measure: vol(O^x, d^x t) = 1 on each side.
//!   Additive Haar measure: vol(O, dt) = 1 (so an annulus {w(t) = n} has
//!   additive volume q^(-n) (1 - 1/q) with q the residue size of the side).
//! * Precision N is counted in p-steps; a unit class on the E side is a
//!   residue modulo pi_E^(N e).  For ramified E (p odd, E = Q_p(sqrt(p u0)))
//!   the residue x = a + b pi is stored with a mod p^ceil(M/2) and
//!   b mod p^ceil((M-1)/2) where M is the pi-precision.
//! * Conductors of multiplicative characters are counted in uniformizer
//!   steps of their own side (so a ramified-side conductor can be odd).
//! * An additive character of level 0 is a point of the unit torsor:
//!   psi_s(x) = zeta_{p^m}^(s a mod p^m) for x = a p^(-m) mod Z_p.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use num_integer::Integer;

use crate::cyclo::{legendre, CycNum};
use crate::error::{Error, Result};

/// Splitting behaviour of the quadratic algebra E_v over F_v = Q_p.
#[derive(Debug, Copy, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadType {
    Split,
    Inert,
    Ramified,
}

/// A prime p together with the quadratic algebra E_v/Q_p.
///
/// For the ramified case E = Q_p(sqrt(p u0)) with u0 = 1 or the smallest
/// quadratic non-residue mod p; only tame ramification (p odd) is allowed.
#[derive(Debug, Copy, Clone, PartialEq, Eq, Hash)]
pub struct LocalDatum {
    pub p: u64,
    pub quad: QuadType,
    /// Unit u0 in the defining square class p*u0 (ramified only, else 1).
    pub ram_unit: u64,
}

impl LocalDatum {
    pub fn new(p: u64, quad: QuadType) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadDescriptor(format!("{p} is not prime")));
        }
        if quad == QuadType::Ramified && p == 2 {
            return Err(Error::BadDescriptor("ramified quadratic requires p odd".into()));
        }
        Ok(LocalDatum { p, quad, ram_unit: 1 })
    }

    /// Ramified datum with the non-residue square class p * u0.
    pub fn new_ramified_nonresidue(p: u64) -> Result<Self> {
        let mut d = Self::new(p, QuadType::Ramified)?;
        d.ram_unit = smallest_nonresidue(p);
        Ok(d)
    }

    /// Inertia degree of E_w/F_v.
    pub fn f(&self) -> u32 {
        match self.quad {
            QuadType::Inert => 2,
            _ => 1,
        }
    }

    /// Ramification index.
    pub fn e(&self) -> u32 {
        match self.quad {
            QuadType::Ramified => 2,
            _ => 1,
        }
    }

    /// Valuation of the relative discriminant.
    pub fn v_of_big_d(&self) -> u32 {
        match self.quad {
            QuadType::Ramified => 1,
            _ => 0,
        }
    }

    /// Valuation of the absolute different of F_v = Q_p; always 0.
    pub fn v_of_d(&self) -> u32 {
        0
    }

    /// Residue size of F_v.
    pub fn q_f(&self) -> u64 {
        self.p
    }

    /// Residue size of E_w, i.e. p^f.
    pub fn q_e(&self) -> u64 {
        self.p.pow(self.f())
    }

    /// pi_E-valuation of the different of E_w/F_v (0 unless ramified).
    pub fn w_of_diff(&self) -> u32 {
        self.e() - 1
    }
}

pub fn is_prime(n: u64) -> bool {
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

pub fn smallest_nonresidue(p: u64) -> u64 {
    (2..p).find(|&a| legendre(a as i64, p) == -1).expect("odd prime has a non-residue")
}

/// Which component cosets and characters live on: the base field, or the
/// quadratic field E_w (inert / ramified).  For split E_v the two
/// components are each a copy of F_v and use `Side::F`.
#[derive(Debug, Copy, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    F,
    E,
}

/// Residue a + b*theta of the side's ring of integers, on the fixed basis:
/// F side b = 0; inert p odd theta = sqrt(r) for the smallest non-residue r;
/// inert p = 2 theta = omega with omega^2 + omega + 1 = 0; ramified
/// theta = pi_E with pi_E^2 = p*u0.
#[derive(Debug, Copy, Clone, PartialEq, Eq, Hash)]
pub struct Resi {
    pub a: u64,
    pub b: u64,
}

/// Residue arithmetic for one (datum, side, precision) triple.
#[derive(Debug, Clone, Copy)]
pub struct ResidueRing {
    pub datum: LocalDatum,
    pub side: Side,
    /// pi-precision M: residues modulo pi^M (for side F, pi = p and M = N).
    pub pi_precision: u32,
    mod_a: u64,
    mod_b: u64,
    /// theta^2 expressed as x + y*theta (inert odd: (r,0); inert 2: (-1,-1);
    /// ramified: (p*u0, 0)).
    theta_sq: (i64, i64),
}

impl ResidueRing {
    pub fn new(datum: LocalDatum, side: Side, pi_precision: u32) -> Self {
        assert!(pi_precision >= 1);
        let p = datum.p;
        let (mod_a, mod_b, theta_sq) = match (side, datum.quad) {
            (Side::F, _) => (p.pow(pi_precision), 1, (0, 0)),
            (Side::E, QuadType::Split) => {
                panic!("split E has no single-valuation coset model; use two F components")
            }
            (Side::E, QuadType::Inert) => {
                let m = p.pow(pi_precision);
                let ts = if p == 2 { (-1, -1) } else { (smallest_nonresidue(p) as i64, 0) };
                (m, m, ts)
            }
            (Side::E, QuadType::Ramified) => {
                let ma = p.pow(pi_precision.div_ceil(2));
                let mb = p.pow(pi_precision.saturating_sub(1).div_ceil(2).max(0));
                (ma, mb.max(1), ((p * datum.ram_unit) as i64, 0))
            }
        };
        ResidueRing { datum, side, pi_precision, mod_a, mod_b, theta_sq }
    }

    pub fn reduce(&self, a: i64, b: i64) -> Resi {
        Resi {
            a: a.rem_euclid(self.mod_a as i64) as u64,
            b: b.rem_euclid(self.mod_b as i64) as u64,
        }
    }

    pub fn one(&self) -> Resi {
        self.reduce(1, 0)
    }

    pub fn key(&self, x: Resi) -> u64 {
        x.a * self.mod_b + x.b
    }

    pub fn mul(&self, x: Resi, y: Resi) -> Resi {
        let (a1, b1) = (x.a as i128, x.b as i128);
        let (a2, b2) = (y.a as i128, y.b as i128);
        let (ts_a, ts_b) = (self.theta_sq.0 as i128, self.theta_sq.1 as i128);
        let cross = a1 * b2 + a2 * b1;
        let a = a1 * a2 + b1 * b2 * ts_a;
        let b = cross + b1 * b2 * ts_b;
        self.reduce((a % self.mod_a as i128) as i64, (b % (self.mod_b as i128).max(1)) as i64)
    }

    pub fn pow(&self, x: Resi, mut e: u64) -> Resi {
        let mut acc = self.one();
        let mut sq = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            e >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, x: Resi) -> bool {
        match (self.side, self.datum.quad) {
            (Side::F, _) => x.a % self.datum.p != 0,
            (Side::E, QuadType::Inert) => x.a % self.datum.p != 0 || x.b % self.datum.p != 0,
            (Side::E, QuadType::Ramified) => x.a % self.datum.p != 0,
            _ => unreachable!(),
        }
    }

    /// Trace to F, as an exact integer representative (valid modulo the
    /// stored precision).
    pub fn trace_repr(&self, x: Resi) -> i64 {
        match (self.side, self.datum.quad) {
            (Side::F, _) => x.a as i64,
            (Side::E, QuadType::Inert) => {
                if self.datum.p == 2 {
                    2 * x.a as i64 - x.b as i64
                } else {
                    2 * x.a as i64
                }
            }
            (Side::E, QuadType::Ramified) => 2 * x.a as i64,
            _ => unreachable!(),
        }
    }

    /// Norm to F, as an exact integer representative.
    pub fn norm_repr(&self, x: Resi) -> i64 {
        let (a, b) = (x.a as i128, x.b as i128);
        let n = match (self.side, self.datum.quad) {
            (Side::F, _) => a,
            (Side::E, QuadType::Inert) => {
                if self.datum.p == 2 {
                    a * a - a * b + b * b
                } else {
                    a * a - (smallest_nonresidue(self.datum.p) as i128) * b * b
                }
            }
            (Side::E, QuadType::Ramified) => {
                a * a - ((self.datum.p * self.datum.ram_unit) as i128) * b * b
            }
            _ => unreachable!(),
        };
        (n % (self.mod_a as i128 * self.mod_a as i128)) as i64
    }

    pub fn unit_count(&self) -> u64 {
        let p = self.datum.p;
        match (self.side, self.datum.quad) {
            (Side::F, _) => (p - 1) * p.pow(self.pi_precision - 1),
            (Side::E, QuadType::Inert) => {
                (p * p - 1) * (p * p).pow(self.pi_precision - 1)
            }
            (Side::E, QuadType::Ramified) => (p - 1) * p.pow(self.pi_precision - 1),
            _ => unreachable!(),
        }
    }

    pub fn enumerate_units(&self) -> Vec<Resi> {
        let mut out = Vec::new();
        for a in 0..self.mod_a {
            for b in 0..self.mod_b {
                let x = Resi { a, b };
                if self.is_unit(x) {
                    out.push(x);
                }
            }
        }
        debug_assert_eq!(out.len() as u64, self.unit_count());
        out
    }

    pub fn enumerate_all(&self) -> Vec<Resi> {
        let mut out = Vec::new();
        for a in 0..self.mod_a {
            for b in 0..self.mod_b {
                out.push(Resi { a, b });
            }
        }
        out
    }

    /// Coarsen a residue to a lower pi-precision ring.
    pub fn coarsen(&self, x: Resi, target: &ResidueRing) -> Resi {
        target.reduce(x.a as i64, x.b as i64)
    }

    /// Canonical independent generators of the unit group, with orders.
    ///
    /// F side, p odd: the smallest primitive root lifted to a Teichmueller
    /// representative, plus 1 + p.  F side p = 2: {-1, 5}.  E sides use the
    /// analogous Teichmueller-plus-one-units bases, falling back to a
    /// deterministic generic basis search when the structured candidates
    /// have hidden relations.  The basis property (product of orders equals
    /// the group size with no collisions) is always verified.
    pub fn unit_generators(&self) -> Vec<(Resi, u64)> {
        let gens = self.unit_generators_candidate();
        if self.is_basis(&gens) {
            gens
        } else {
            self.generic_unit_basis()
        }
    }

    fn unit_generators_candidate(&self) -> Vec<(Resi, u64)> {
        let p = self.datum.p;
        let n = self.pi_precision;
        let mut gens: Vec<(Resi, u64)> = Vec::new();
        match (self.side, self.datum.quad, p) {
            (Side::F, _, 2) => {
                if n >= 2 {
                    gens.push((self.reduce(-1, 0), 2));
                }
                if n >= 3 {
                    gens.push((self.reduce(5, 0), 1 << (n - 2)));
                }
            }
            (Side::F, _, _) => {
                let g = smallest_primitive_root(p);
                let teich = self.pow(self.reduce(g as i64, 0), p.pow(n - 1));
                gens.push((teich, p - 1));
                if n >= 2 {
                    gens.push((self.reduce(1 + p as i64, 0), p.pow(n - 1)));
                }
            }
            (Side::E, QuadType::Inert, 2) => {
                // omega has exact order 3 in every precision; the one-units
                // are found by the generic basis search (they have relations
                // like (1+2w)^2 = 5 that break the naive candidates).
                return self.generic_unit_basis();
            }
            (Side::E, QuadType::Inert, _) => {
                let t = self.smallest_f_p2_generator();
                let teich = self.pow(t, (p * p).pow(n - 1));
                gens.push((teich, p * p - 1));
                if n >= 2 {
                    gens.push((self.reduce(1 + p as i64, 0), p.pow(n - 1)));
                    gens.push((self.reduce(1, p as i64), p.pow(n - 1)));
                }
            }
            (Side::E, QuadType::Ramified, _) => {
                let g = smallest_primitive_root(p);
                let teich = self.pow(self.reduce(g as i64, 0), p.pow(n));
                gens.push((teich, p - 1));
                // order of 1 + pi is p^ceil((M-1)/2), of 1 + p is p^ceil((M-2)/2)
                if n >= 2 {
                    let o1 = p.pow((n - 1).div_ceil(2));
                    let o2 = p.pow(n.saturating_sub(2).div_ceil(2));
                    gens.push((self.reduce(1, 1), o1));
                    if o2 > 1 {
                        gens.push((self.reduce(1 + p as i64, 0), o2));
                    }
                }
            }
            _ => unreachable!(),
        }
        gens.retain(|(_, o)| *o > 1);
        gens
    }

    /// Check that the candidate generators give a direct-sum basis: each
    /// has the claimed order and the products g1^e1 ... gk^ek are distinct
    /// and exhaust the unit group.
    fn is_basis(&self, gens: &[(Resi, u64)]) -> bool {
        if gens.iter().map(|(_, o)| o).product::<u64>() != self.unit_count() {
            return false;
        }
        for (g, o) in gens {
            if self.pow(*g, *o) != self.one() {
                return false;
            }
        }
        let mut seen = std::collections::HashSet::new();
        let mut frontier = vec![self.one()];
        for (g, o) in gens {
            let mut next = Vec::with_capacity(frontier.len() * *o as usize);
            for x in &frontier {
                let mut gx = *x;
                next.push(gx);
                for _ in 1..*o {
                    gx = self.mul(gx, *g);
                    next.push(gx);
                }
            }
            frontier = next;
        }
        for x in frontier {
            if !seen.insert(self.key(x)) {
                return false;
            }
        }
        seen.len() as u64 == self.unit_count()
    }

    /// Deterministic basis search for small unit groups: repeatedly adjoin
    /// the smallest element whose order in the quotient by the subgroup
    /// generated so far equals its order in the group (such an element
    /// always exists in a finite abelian group) and is maximal.
    fn generic_unit_basis(&self) -> Vec<(Resi, u64)> {
        let mut units = self.enumerate_units();
        units.sort_by_key(|x| self.key(*x));
        let mut subgroup: std::collections::HashSet<u64> = std::collections::HashSet::new();
        let mut sub_elems = vec![self.one()];
        subgroup.insert(self.key(self.one()));
        let mut gens: Vec<(Resi, u64)> = Vec::new();
        while (subgroup.len() as u64) < self.unit_count() {
            let mut best: Option<(Resi, u64)> = None;
            for &x in &units {
                if subgroup.contains(&self.key(x)) {
                    continue;
                }
                let ord = self.order_of(x);
                // quotient order: smallest k with x^k in the subgroup
                let mut k = 1u64;
                let mut y = x;
                while !subgroup.contains(&self.key(y)) {
                    y = self.mul(y, x);
                    k += 1;
                }
                if k != ord {
                    continue; // not a complement direction
                }
                match best {
                    Some((_, bo)) if bo >= ord => {}
                    _ => best = Some((x, ord)),
                }
            }
            let (g, o) = best.expect("finite abelian group admits a basis");
            gens.push((g, o));
            let mut new_elems = Vec::with_capacity(sub_elems.len() * o as usize);
            for s in &sub_elems {
                let mut gx = *s;
                new_elems.push(gx);
                for _ in 1..o {
                    gx = self.mul(gx, g);
                    new_elems.push(gx);
                }
            }
            for e in &new_elems {
                subgroup.insert(self.key(*e));
            }
            sub_elems = new_elems;
        }
        gens
    }

    fn order_of(&self, x: Resi) -> u64 {
        let mut k = 1u64;
        let mut y = x;
        while y != self.one() {
            y = self.mul(y, x);
            k += 1;
            assert!(k <= 4 * self.unit_count());
        }
        k
    }

    fn smallest_f_p2_generator(&self) -> Resi {
        let p = self.datum.p;
        let base = ResidueRing::new(self.datum, Side::E, 1);
        for a in 0..p {
            for b in 0..p {
                let x = Resi { a, b };
                if base.is_unit(x) && base.order_of(x) == p * p - 1 {
                    return self.reduce(a as i64, b as i64);
                }
            }
        }
        unreachable!("F_p^2 has a multiplicative generator")
    }

    /// Build the value table of the homomorphism sending the i-th canonical
    /// generator to `gen_values[i]`, on all units.  Fails if a value's order
    /// does not divide the generator order.
    pub fn character_table(&self, gen_values: &[CycNum]) -> Result<HashMap<u64, CycNum>> {
        let gens = self.unit_generators();
        if gens.len() != gen_values.len() {
            return Err(Error::BadDescriptor(format!(
                "expected {} generator values, got {}",
                gens.len(),
                gen_values.len()
            )));
        }
        for ((_, order), v) in gens.iter().zip(gen_values) {
            let mut acc = CycNum::one();
            for _ in 0..*order {
                acc = acc.try_mul(v)?;
            }
            if !acc.is_one() {
                return Err(Error::BadDescriptor(format!(
                    "generator value {v} does not have order dividing {order}"
                )));
            }
        }
        let mut frontier: Vec<(Resi, CycNum)> = vec![(self.one(), CycNum::one())];
        for ((g, order), v) in gens.iter().zip(gen_values) {
            let mut next = Vec::with_capacity(frontier.len() * *order as usize);
            for (x, val) in &frontier {
                let mut gx = *x;
                let mut gval = val.clone();
                next.push((gx, gval.clone()));
                for _ in 1..*order {
                    gx = self.mul(gx, *g);
                    gval = gval.try_mul(v)?;
                    next.push((gx, gval.clone()));
                }
            }
            frontier = next;
        }
        let mut table: HashMap<u64, CycNum> = HashMap::new();
        for (x, val) in frontier {
            if let Some(prev) = table.insert(self.key(x), val.clone()) {
                if !prev.eq_val(&val) {
                    return Err(Error::BadDescriptor(
                        "generator relations are inconsistent with the supplied values".into(),
                    ));
                }
            }
        }
        if table.len() as u64 != self.unit_count() {
            return Err(Error::BadDescriptor(
                "generators failed to span the unit group".into(),
            ));
        }
        Ok(table)
    }
}

pub fn smallest_primitive_root(p: u64) -> u64 {
    let order = p - 1;
    let mut facs = Vec::new();
    let mut m = order;
    let mut q = 2;
    while q * q <= m {
        if m % q == 0 {
            facs.push(q);
            while m % q == 0 {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        facs.push(m);
    }
    'outer: for g in 2..p {
        for f in &facs {
            if pow_mod(g, order / f, p) == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    unreachable!("prime has a primitive root")
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// The coset pi^n * u * (1 + pi^(N e) O) of the side's multiplicative group.
/// Locally constant functions of conductor <= N are well defined on it.
#[derive(Debug, Clone, Copy)]
pub struct PAdicCoset {
    pub datum: LocalDatum,
    pub side: Side,
    /// Valuation in uniformizer steps of the side.
    pub valuation: i64,
    pub unit: Resi,
    /// Precision in p-steps; the unit class is modulo pi^(N e).
    pub precision: u32,
}

impl PAdicCoset {
    pub fn ring(&self) -> ResidueRing {
        let e = if self.side == Side::E { self.datum.e() } else { 1 };
        ResidueRing::new(self.datum, self.side, self.precision * e)
    }

    /// The sub-cosets at precision N+1 that partition this coset.
    pub fn refine(&self) -> Vec<PAdicCoset> {
        let fine = PAdicCoset { precision: self.precision + 1, ..*self };
        let fine_ring = fine.ring();
        let coarse_ring = self.ring();
        fine_ring
            .enumerate_units()
            .into_iter()
            .filter(|u| fine_ring.coarsen(*u, &coarse_ring) == coarse_ring.reduce(self.unit.a as i64, self.unit.b as i64))
            .map(|u| PAdicCoset { unit: u, ..fine })
            .collect()
    }
}

/// Haar measure normalization for annulus decompositions.
#[derive(Debug, Copy, Clone, PartialEq, Eq)]
pub enum Measure {
    /// vol(O^x, d^x t) = 1.
    MultUnit,
    /// vol(O, dt) = 1.
    Additive,
}

/// Decompose the annulus {w(t) = n} of the chosen side into unit cosets at
/// precision N, with the measure of each coset.  Multiplicative total is 1;
/// additive total is q^(-n) (1 - 1/q).
pub fn annulus_cosets(
    datum: LocalDatum,
    side: Side,
    n: i64,
    precision: u32,
    measure: Measure,
) -> Vec<(PAdicCoset, BigRational)> {
    assert!(precision >= 1);
    let e = if side == Side::E { datum.e() } else { 1 };
    let ring = ResidueRing::new(datum, side, precision * e);
    let units = ring.enumerate_units();
    let count = BigInt::from(units.len());
    let q = BigInt::from(if side == Side::E { datum.q_e() } else { datum.q_f() });
    let m = match measure {
        Measure::MultUnit => BigRational::new(BigInt::one(), count),
        Measure::Additive => {
            // q^(-n) (1 - 1/q) / #units
            let annulus = pow_rational(&q, -n)
                * (BigRational::one() - BigRational::new(BigInt::one(), q.clone()));
            annulus / BigRational::from(count)
        }
    };
    units
        .into_iter()
        .map(|u| {
            (
                PAdicCoset { datum, side, valuation: n, unit: u, precision },
                m.clone(),
            )
        })
        .collect()
}

pub fn pow_rational(base: &BigInt, e: i64) -> BigRational {
    let abs = base.pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from(abs)
    } else {
        BigRational::new(BigInt::one(), abs)
    }
}

/// Additive character of level 0 with unit twist s: the point s of the
/// torsor Psi_v.  Evaluation is psi_s(x) = zeta_{p^m}^(s a) for
/// x = a p^(-m) mod Z_p, and psi_s(x) = 1 for integral x.
#[derive(Debug, Clone, Copy)]
pub struct AddChar {
    pub p: u64,
    pub twist: u64,
}

impl AddChar {
    pub fn standard(p: u64) -> Self {
        AddChar { p, twist: 1 }
    }

    /// psi_s of an exact rational with p-power denominator.
    pub fn eval_rational(&self, t: &BigRational) -> Result<CycNum> {
        if t.is_zero() {
            return Ok(CycNum::one());
        }
        let p = BigInt::from(self.p);
        let mut den = t.denom().clone();
        let mut m = 0u32;
        while (&den % &p).is_zero() {
            den /= &p;
            m += 1;
        }
        if !(den.abs().is_one()) {
            return Err(Error::BadDescriptor(format!(
                "additive character argument has non-{}-power denominator: {t}",
                self.p
            )));
        }
        if m == 0 {
            return Ok(CycNum::one());
        }
        let pm = BigInt::from(self.p.pow(m));
        // a = t * p^m  (integral), exponent = s*a mod p^m
        let a = (t * BigRational::from(pm.clone())).to_integer();
        let expo = (BigInt::from(self.twist) * a).mod_floor(&pm);
        let expo: i64 = expo.try_into().expect("exponent fits");
        Ok(CycNum::root_of_unity(self.p.pow(m), expo))
    }

    /// psi_s on a coset; on the E side the trace to F_v is applied first.
    pub fn eval(&self, x: &PAdicCoset) -> Result<CycNum> {
        let t = coset_representative_rational(x)?;
        match x.side {
            Side::F => self.eval_rational(&t),
            Side::E => self.eval_rational(&coset_trace_rational(x)?),
        }
    }
}

/// Exact rational representative of an F-side coset (p^n * a).
fn coset_representative_rational(x: &PAdicCoset) -> Result<BigRational> {
    let p = BigInt::from(x.datum.p);
    Ok(pow_rational(&p, x.valuation) * BigRational::from(BigInt::from(x.unit.a)))
}

/// Exact rational representing Tr(x) for an E-side coset, with enough
/// p-adic precision for level-0 evaluation; errors when the stored
/// precision cannot determine the value.
fn coset_trace_rational(x: &PAdicCoset) -> Result<BigRational> {
    let datum = x.datum;
    let p = BigInt::from(datum.p);
    match datum.quad {
        QuadType::Split => unreachable!("split E uses F components"),
        QuadType::Inert => {
            let tr = BigInt::from(x.unit.a) * 2 - if datum.p == 2 { BigInt::from(x.unit.b) } else { BigInt::zero() };
            let t = pow_rational(&p, x.valuation) * BigRational::from(tr);
            check_trace_precision(x, &t)?;
            Ok(t)
        }
        QuadType::Ramified => {
            let pu = BigInt::from(datum.p * datum.ram_unit);
            let n = x.valuation;
            let k = n.div_euclid(2);
            let t = if n % 2 == 0 {
                // pi^(2k) (a + b pi): trace = 2 a (p u0)^k
                pow_rational(&pu, k) * BigRational::from(BigInt::from(2 * x.unit.a))
            } else {
                // pi^(2k+1) (a + b pi): trace = 2 b (p u0)^(k+1)
                pow_rational(&pu, k + 1) * BigRational::from(BigInt::from(2 * x.unit.b))
            };
            check_trace_precision(x, &t)?;
            Ok(t)
        }
    }
}

fn check_trace_precision(x: &PAdicCoset, _t: &BigRational) -> Result<()> {
    // Tr(pi^n u) is known modulo p^(n/e + N); level-0 evaluation needs it
    // modulo p^0, i.e. N >= -floor(n/e).
    let e = x.datum.e() as i64;
    let need = (-x.valuation).div_euclid(e) + if (-x.valuation).rem_euclid(e) > 0 { 1 } else { 0 };
    if need > x.precision as i64 {
        return Err(Error::InsufficientPrecision { have: x.precision, need: need as u32 });
    }
    Ok(())
}

/// Multiplicative character of finite conductor on one side's
/// multiplicative group, stored as a value table on units modulo the
/// conductor together with a value at the uniformizer.
#[derive(Debug, Clone)]
pub struct MulChar {
    pub datum: LocalDatum,
    pub side: Side,
    /// Conductor in uniformizer steps of the side (0 = unramified).
    pub conductor: u32,
    pub gen_values: Vec<CycNum>,
    pub at_uniformizer: CycNum,
    table: HashMap<u64, CycNum>,
}

impl MulChar {
    pub fn unramified(datum: LocalDatum, side: Side, at_uniformizer: CycNum) -> Self {
        MulChar { datum, side, conductor: 0, gen_values: Vec::new(), at_uniformizer, table: HashMap::new() }
    }

    pub fn trivial(datum: LocalDatum, side: Side) -> Self {
        Self::unramified(datum, side, CycNum::one())
    }

    /// Ramified character from generator values at the given conductor.
    /// The conductor must be minimal (the character nontrivial on the units
    /// congruent to 1 mod pi^(c-1)).
    pub fn from_gen_values(
        datum: LocalDatum,
        side: Side,
        conductor: u32,
        gen_values: Vec<CycNum>,
        at_uniformizer: CycNum,
    ) -> Result<Self> {
        assert!(conductor >= 1);
        let ring = ResidueRing::new(datum, side, conductor);
        let table = ring.character_table(&gen_values)?;
        let chi = MulChar { datum, side, conductor, gen_values, at_uniformizer, table };
        if !chi.conductor_is_minimal() {
            return Err(Error::BadDescriptor(format!(
                "conductor {conductor} is not minimal for the supplied values"
            )));
        }
        Ok(chi)
    }

    fn conductor_is_minimal(&self) -> bool {
        let c = self.conductor;
        let ring = ResidueRing::new(self.datum, self.side, c);
        // units congruent to 1 modulo pi^(c-1)
        let p = self.datum.p as i64;
        let layer: Vec<Resi> = if c == 1 {
            ring.enumerate_units()
        } else {
            let coarse = ResidueRing::new(self.datum, self.side, c - 1);
            ring.enumerate_units()
                .into_iter()
                .filter(|u| ring.coarsen(*u, &coarse) == coarse.one())
                .collect()
        };
        let _ = p;
        layer.iter().any(|u| !self.table[&ring.key(*u)].is_one())
    }

    pub fn is_unramified(&self) -> bool {
        self.conductor == 0
    }

    /// Value on a unit residue given at pi-precision >= conductor.
    pub fn eval_unit(&self, ring: &ResidueRing, u: Resi) -> Result<CycNum> {
        if self.conductor == 0 {
            return Ok(CycNum::one());
        }
        if ring.pi_precision < self.conductor {
            return Err(Error::InsufficientPrecision { have: ring.pi_precision, need: self.conductor });
        }
        let cring = ResidueRing::new(self.datum, self.side, self.conductor);
        let v = ring.coarsen(u, &cring);
        Ok(self.table[&cring.key(v)].clone())
    }

    /// chi(pi)^w(x) * chi(unit part of x).
    pub fn eval(&self, x: &PAdicCoset) -> Result<CycNum> {
        assert_eq!(x.side, self.side);
        let ring = x.ring();
        let unit_val = self.eval_unit(&ring, x.unit)?;
        Ok(self.at_uniformizer.pow(x.valuation)?.mul(&unit_val))
    }

    /// Pointwise product of two characters on the same side (conductor of
    /// the product recomputed minimally).
    pub fn product(&self, other: &MulChar) -> Result<MulChar> {
        assert_eq!(self.side, other.side);
        let c = self.conductor.max(other.conductor);
        let at_pi = self.at_uniformizer.try_mul(&other.at_uniformizer)?;
        if c == 0 {
            return Ok(MulChar::unramified(self.datum, self.side, at_pi));
        }
        let ring = ResidueRing::new(self.datum, self.side, c);
        let gens = ring.unit_generators();
        let mut vals = Vec::with_capacity(gens.len());
        for (g, _) in &gens {
            let v1 = self.eval_unit(&ring, *g)?;
            let v2 = other.eval_unit(&ring, *g)?;
            vals.push(v1.try_mul(&v2)?);
        }
        // minimal conductor: drop levels where the product is trivial
        let table = ring.character_table(&vals)?;
        let mut chi = MulChar { datum: self.datum, side: self.side, conductor: c, gen_values: vals, at_uniformizer: at_pi, table };
        while chi.conductor >= 1 && !chi.conductor_is_minimal() {
            chi = chi.lower_conductor()?;
        }
        Ok(chi)
    }

    fn lower_conductor(&self) -> Result<MulChar> {
        let c = self.conductor - 1;
        if c == 0 {
            return Ok(MulChar::unramified(self.datum, self.side, self.at_uniformizer.clone()));
        }
        let ring = ResidueRing::new(self.datum, self.side, c);
        let gens = ring.unit_generators();
        let big = ResidueRing::new(self.datum, self.side, self.conductor);
        let mut vals = Vec::new();
        for (g, _) in &gens {
            // lift g to the finer ring, evaluate there
            let lifted = big.reduce(g.a as i64, g.b as i64);
            vals.push(self.eval_unit(&big, lifted)?);
        }
        let table = ring.character_table(&vals)?;
        Ok(MulChar { datum: self.datum, side: self.side, conductor: c, gen_values: vals, at_uniformizer: self.at_uniformizer.clone(), table })
    }

    pub fn inverse(&self) -> Result<MulChar> {
        let at_pi = self.at_uniformizer.inv()?;
        if self.conductor == 0 {
            return Ok(MulChar::unramified(self.datum, self.side, at_pi));
        }
        let vals: Result<Vec<CycNum>> = self.gen_values.iter().map(|v| v.inv()).collect();
        MulChar::from_gen_values(self.datum, self.side, self.conductor, vals?, at_pi)
    }

    /// chi(n) for an exact nonzero rational n (F side only): factor as
    /// p^v * unit and apply the table.
    pub fn eval_rational(&self, t: &BigRational) -> Result<CycNum> {
        assert_eq!(self.side, Side::F);
        let (v, unit) = split_p_part(t, self.datum.p)?;
        let c = self.conductor.max(1);
        let ring = ResidueRing::new(self.datum, Side::F, c);
        let m = BigInt::from(ring.mod_a);
        let num = unit.numer().mod_floor(&m);
        let den = unit.denom().mod_floor(&m);
        let den_inv = mod_inverse(
            u64::try_from(&den).map_err(|_| Error::BadDescriptor("overflow".into()))?,
            ring.mod_a,
        );
        let u = ring.reduce((u64::try_from(&num).map_err(|_| Error::BadDescriptor("overflow".into()))? as i64).wrapping_mul(den_inv as i64), 0);
        let uv = self.eval_unit(&ring, u)?;
        Ok(self.at_uniformizer.pow(v)?.mul(&uv))
    }
}

/// Write t = p^v * u with u a p-adic unit; returns (v, u).
pub fn split_p_part(t: &BigRational, p: u64) -> Result<(i64, BigRational)> {
    if t.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let p = BigInt::from(p);
    let mut num = t.numer().clone();
    let mut den = t.denom().clone();
    let mut v = 0i64;
    while (&num % &p).is_zero() {
        num /= &p;
        v += 1;
    }
    while (&den % &p).is_zero() {
        den /= &p;
        v -= 1;
    }
    Ok((v, BigRational::new(num, den)))
}

pub fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert!(r == 1, "not invertible");
    t.rem_euclid(m as i128) as u64
}

/// p-adic valuation of a nonzero rational.
pub fn padic_val(t: &BigRational, p: u64) -> Option<i64> {
    if t.is_zero() {
        return None;
    }
    Some(split_p_part(t, p).expect("nonzero").0)
}

/// The quadratic character eta attached to E_v/F_v, evaluated on an F-side
/// coset: 1 for split, (-1)^w(x) for inert, and the Legendre-symbol formula
/// for tamely ramified E.
pub fn eta_value(datum: LocalDatum, x: &PAdicCoset) -> Result<CycNum> {
    assert_eq!(x.side, Side::F);
    match datum.quad {
        QuadType::Split => Ok(CycNum::one()),
        QuadType::Inert => Ok(if x.valuation % 2 == 0 { CycNum::one() } else { CycNum::from_int(-1) }),
        QuadType::Ramified => {
            if x.precision < 1 {
                return Err(Error::InsufficientPrecision { have: x.precision, need: 1 });
            }
            let p = datum.p;
            let unit_sign = legendre(x.unit.a as i64, p);
            // eta(p) = (-u0 | p), from the Hilbert symbol (p, p u0)_p
            let pi_sign = legendre(-(datum.ram_unit as i64), p);
            let s = unit_sign * pi_sign.pow(x.valuation.rem_euclid(2) as u32);
            Ok(CycNum::from_int(s))
        }
    }
}

/// eta on an exact rational.
pub fn eta_rational(datum: LocalDatum, t: &BigRational) -> Result<i64> {
    let (v, u) = split_p_part(t, datum.p)?;
    match datum.quad {
        QuadType::Split => Ok(1),
        QuadType::Inert => Ok(if v % 2 == 0 { 1 } else { -1 }),
        QuadType::Ramified => {
            let p = BigInt::from(datum.p);
            let num = u.numer().mod_floor(&p);
            let den = u.denom().mod_floor(&p);
            let n: i64 = u64::try_from(&num).unwrap() as i64;
            let d: i64 = u64::try_from(&den).unwrap() as i64;
            let unit_sign = legendre(n, datum.p) * legendre(d, datum.p);
            let pi_sign = legendre(-(datum.ram_unit as i64), datum.p);
            Ok(unit_sign * pi_sign.pow(v.rem_euclid(2) as u32))
        }
    }
}

/// Which local Euler factor to evaluate.
#[derive(Debug, Clone)]
pub enum EulerFactor {
    ZetaF,
    ZetaE,
    Eta,
    /// L(s, eta * chi_F) for an unramified chi_F with the given value at p.
    EtaChiF(CycNum),
    /// (1 - value * q^(-s))^(-1) with q = p^f of the chosen side.
    Adhoc { value: CycNum, side: Side },
}

/// L(s, xi) = (1 - xi(pi) q^(-s))^(-1), with q_w = p^f for E-side factors;
/// half-integral s goes through the exact sqrt adjunction.
pub fn euler_l(datum: LocalDatum, which: &EulerFactor, s: &BigRational) -> Result<CycNum> {
    let inv_factor = |val: &CycNum, q: u64| -> Result<CycNum> {
        let qs = q_pow_minus_s(q, s)?;
        let den = CycNum::one().sub(&val.mul(&qs));
        if den.is_zero() {
            return Err(Error::PoleAtEvaluationPoint);
        }
        den.inv()
    };
    match which {
        EulerFactor::ZetaF => inv_factor(&CycNum::one(), datum.p),
        EulerFactor::ZetaE => match datum.quad {
            QuadType::Split => {
                let f = inv_factor(&CycNum::one(), datum.p)?;
                Ok(f.mul(&f))
            }
            QuadType::Inert => inv_factor(&CycNum::one(), datum.p * datum.p),
            QuadType::Ramified => inv_factor(&CycNum::one(), datum.p),
        },
        EulerFactor::Eta => match datum.quad {
            QuadType::Split => inv_factor(&CycNum::one(), datum.p),
            QuadType::Inert => inv_factor(&CycNum::from_int(-1), datum.p),
            QuadType::Ramified => Ok(CycNum::one()),
        },
        EulerFactor::EtaChiF(x) => match datum.quad {
            QuadType::Split => inv_factor(x, datum.p),
            QuadType::Inert => inv_factor(&x.neg(), datum.p),
            QuadType::Ramified => Ok(CycNum::one()),
        },
        EulerFactor::Adhoc { value, side } => {
            let q = if *side == Side::E { datum.q_e() } else { datum.q_f() };
            inv_factor(value, q)
        }
    }
}

/// q^(-s) as an exact cyclotomic number (s rational with denominator 1 or 2).
pub fn q_pow_minus_s(q: u64, s: &BigRational) -> Result<CycNum> {
    let two = BigInt::from(2);
    let scaled = s * BigRational::from(two.clone());
    if !scaled.is_integer() {
        return Err(Error::BadDescriptor(format!(
            "exponent {s} must be a half-integer"
        )));
    }
    let twice: i64 = scaled.to_integer().try_into().map_err(|_| Error::BadDescriptor("exponent overflow".into()))?;
    let qr = BigRational::from(BigInt::from(q));
    let whole = pow_rational(&BigInt::from(q), -(twice.div_euclid(2)));
    let mut out = CycNum::from_rational(whole);
    if twice.rem_euclid(2) == 1 {
        // extra factor q^(-1/2)
        out = out.mul(&CycNum::sqrt_rational(&qr.recip())?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn annulus_cosets_q3_level0() {
        // (Z/3)^x has order 2: two cosets of multiplicative measure 1/2
        let d = LocalDatum::new(3, QuadType::Split).unwrap();
        let cs = annulus_cosets(d, Side::F, 0, 1, Measure::MultUnit);
        assert_eq!(cs.len(), 2);
        for (_, m) in &cs {
            assert_eq!(*m, rational(1, 2));
        }
    }

    #[test]
    fn annulus_additive_measure_q3_n2() {
        // additive measure of 3^2 Z_3^x is 3^(-2) (1 - 1/3) = 2/27
        let d = LocalDatum::new(3, QuadType::Split).unwrap();
        let cs = annulus_cosets(d, Side::F, 2, 1, Measure::Additive);
        let total: BigRational = cs.iter().map(|(_, m)| m.clone()).sum();
        assert_eq!(total, rational(2, 27));
        // and the multiplicative total is 1
        let cs = annulus_cosets(d, Side::F, 2, 1, Measure::MultUnit);
        let total: BigRational = cs.iter().map(|(_, m)| m.clone()).sum();
        assert_eq!(total, rational(1, 1));
    }

    #[test]
    fn annulus_cosets_inert_q5() {
        // F_25^x has order 24
        let d = LocalDatum::new(5, QuadType::Inert).unwrap();
        let cs = annulus_cosets(d, Side::E, 0, 1, Measure::MultUnit);
        assert_eq!(cs.len(), 24);
        for (_, m) in &cs {
            assert_eq!(*m, rational(1, 24));
        }
    }

    #[test]
    fn additive_char_basics() {
        let psi = AddChar::standard(5);
        // psi_1(1/5) = zeta_5
        let v = psi.eval_rational(&rational(1, 5)).unwrap();
        assert!(v.eq_val(&CycNum::root_of_unity(5, 1)));
        // integral arguments: 1
        assert!(psi.eval_rational(&rational(7, 1)).unwrap().is_one());
        // torsor action: twist 2 at 1/p gives zeta_p^2
        let psi2 = AddChar { p: 5, twist: 2 };
        assert!(psi2.eval_rational(&rational(1, 5)).unwrap().eq_val(&CycNum::root_of_unity(5, 2)));
    }

    #[test]
    fn insufficient_precision_raises() {
        let d = LocalDatum::new(3, QuadType::Inert).unwrap();
        let ring = ResidueRing::new(d, Side::E, 1);
        let x = PAdicCoset { datum: d, side: Side::E, valuation: -2, unit: ring.one(), precision: 1 };
        match AddChar::standard(3).eval(&x) {
            Err(Error::InsufficientPrecision { .. }) => {}
            other => panic!("expected InsufficientPrecision, got {other:?}"),
        }
    }

    #[test]
    fn quadratic_character_mod_5() {
        // chi = Legendre symbol mod 5: chi(2) = -1 (2 is a non-square mod 5,
        // squares are {1,4}).
        let d = LocalDatum::new(5, QuadType::Split).unwrap();
        let ring = ResidueRing::new(d, Side::F, 1);
        let gens = ring.unit_generators();
        assert_eq!(gens.len(), 1);
        let chi = MulChar::from_gen_values(d, Side::F, 1, vec![CycNum::from_int(-1)], CycNum::one()).unwrap();
        // brute-force oracle: enumerate squares mod 5
        let squares: Vec<u64> = (1..5u64).map(|a| a * a % 5).collect();
        for a in 1..5u64 {
            let x = PAdicCoset { datum: d, side: Side::F, valuation: 0, unit: ring.reduce(a as i64, 0), precision: 1 };
            let want = if squares.contains(&a) { 1 } else { -1 };
            assert!(chi.eval(&x).unwrap().eq_val(&CycNum::from_int(want)), "chi({a})");
        }
    }

    #[test]
    fn unramified_character_at_valuation() {
        let d = LocalDatum::new(7, QuadType::Split).unwrap();
        let chi = MulChar::unramified(d, Side::F, CycNum::from_int(-1));
        let ring = ResidueRing::new(d, Side::F, 1);
        let x = PAdicCoset { datum: d, side: Side::F, valuation: 3, unit: ring.one(), precision: 1 };
        assert!(chi.eval(&x).unwrap().eq_val(&CycNum::from_int(-1)));
    }

    #[test]
    fn eta_values() {
        // inert over Q_3 at x = 3: -1
        let d = LocalDatum::new(3, QuadType::Inert).unwrap();
        let ring = ResidueRing::new(d, Side::F, 1);
        let x = PAdicCoset { datum: d, side: Side::F, valuation: 1, unit: ring.one(), precision: 1 };
        assert!(eta_value(d, &x).unwrap().eq_val(&CycNum::from_int(-1)));
        // split: always 1
        let d = LocalDatum::new(3, QuadType::Split).unwrap();
        assert!(eta_value(d, &PAdicCoset { datum: d, ..x }).unwrap().is_one());
        // ramified E = Q_5(sqrt 5), x = 2: -1
        let d = LocalDatum::new(5, QuadType::Ramified).unwrap();
        let ring = ResidueRing::new(d, Side::F, 1);
        let x = PAdicCoset { datum: d, side: Side::F, valuation: 0, unit: ring.reduce(2, 0), precision: 1 };
        assert!(eta_value(d, &x).unwrap().eq_val(&CycNum::from_int(-1)));
    }

    #[test]
    fn eta_is_multiplicative_randomized() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for datum in [
            LocalDatum::new(3, QuadType::Inert).unwrap(),
            LocalDatum::new(5, QuadType::Ramified).unwrap(),
            LocalDatum::new_ramified_nonresidue(7).unwrap(),
        ] {
            for _ in 0..50 {
                let a = rational(rng.gen_range(1..50), rng.gen_range(1..50));
                let b = rational(rng.gen_range(1..50), rng.gen_range(1..50));
                let lhs = eta_rational(datum, &(&a * &b)).unwrap();
                let rhs = eta_rational(datum, &a).unwrap() * eta_rational(datum, &b).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn euler_factors() {
        // L(1, eta) inert over Q_3 = (1 + 1/3)^(-1) = 3/4
        let d = LocalDatum::new(3, QuadType::Inert).unwrap();
        let v = euler_l(d, &EulerFactor::Eta, &rational(1, 1)).unwrap();
        assert!(v.eq_val(&CycNum::from_ratio(3, 4)));
        // zeta_F(2) at p = 3 is 9/8
        let v = euler_l(d, &EulerFactor::ZetaF, &rational(2, 1)).unwrap();
        assert!(v.eq_val(&CycNum::from_ratio(9, 8)));
        // split eta is trivial: L(1, eta) at p = 5 is 5/4
        let d = LocalDatum::new(5, QuadType::Split).unwrap();
        let v = euler_l(d, &EulerFactor::Eta, &rational(1, 1)).unwrap();
        assert!(v.eq_val(&CycNum::from_ratio(5, 4)));
    }

    #[test]
    fn euler_half_integer_exponent() {
        // (1 - q^(-1/2))^(-1) with q = 9 is (1 - 1/3)^(-1) = 3/2
        let d = LocalDatum::new(3, QuadType::Inert).unwrap();
        let v = euler_l(
            d,
            &EulerFactor::Adhoc { value: CycNum::one(), side: Side::E },
            &rational(1, 2),
        )
        .unwrap();
        assert!(v.eq_val(&CycNum::from_ratio(3, 2)));
    }

    #[test]
    fn character_refinement_consistency() {
        // evaluating a conductor-1 character at higher precision agrees with
        // the coarsened evaluation
        let d = LocalDatum::new(5, QuadType::Split).unwrap();
        let chi = MulChar::from_gen_values(d, Side::F, 1, vec![CycNum::from_int(-1)], CycNum::one()).unwrap();
        let fine = ResidueRing::new(d, Side::F, 3);
        for u in fine.enumerate_units() {
            let x3 = PAdicCoset { datum: d, side: Side::F, valuation: 0, unit: u, precision: 3 };
            let coarse = ResidueRing::new(d, Side::F, 1);
            let x1 = PAdicCoset { datum: d, side: Side::F, valuation: 0, unit: fine.coarsen(u, &coarse), precision: 1 };
            assert!(chi.eval(&x3).unwrap().eq_val(&chi.eval(&x1).unwrap()));
        }
    }

    #[test]
    fn unit_generators_span_all_sides() {
        for datum in [
            LocalDatum::new(2, QuadType::Split).unwrap(),
            LocalDatum::new(3, QuadType::Split).unwrap(),
            LocalDatum::new(5, QuadType::Inert).unwrap(),
            LocalDatum::new(2, QuadType::Inert).unwrap(),
            LocalDatum::new(3, QuadType::Ramified).unwrap(),
            LocalDatum::new_ramified_nonresidue(5).unwrap(),
        ] {
            for m in 1..=3u32 {
                for side in [Side::F, Side::E] {
                    if side == Side::E && datum.quad == QuadType::Split {
                        continue;
                    }
                    let ring = ResidueRing::new(datum, side, m);
                    // building the trivial character exercises the span check
                    let gens = ring.unit_generators();
                    let vals = vec![CycNum::one(); gens.len()];
                    let table = ring.character_table(&vals).unwrap();
                    assert_eq!(table.len() as u64, ring.unit_count(), "{datum:?} side {side:?} m {m}");
                }
            }
        }
    }

    #[test]
    fn refine_partitions_coset() {
        let d = LocalDatum::new(3, QuadType::Inert).unwrap();
        let ring = ResidueRing::new(d, Side::E, 1);
        let x = PAdicCoset { datum: d, side: Side::E, valuation: 0, unit: ring.reduce(1, 1), precision: 1 };
        let fine = x.refine();
        // index of (1 + 3 O)/(1 + 9 O) in the unit group ratio: 9^2/... = 9
        assert_eq!(fine.len(), 9);
    }
}
