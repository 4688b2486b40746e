//! Prime-field arithmetic and symbol resolution.
//!
//! Every configuration in this crate lives over a prime field `F_p` whose
//! characteristic is chosen so that the symbolic constants appearing in the
//! coordinates (roots of unity, `i`, the golden ratio, `sqrt(2)`, ...) exist
//! as residues. Elements are plain `u64` residues; the arithmetic context is
//! the [`PrimeField`] value, which is `Copy` and cheap to pass around.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Primes are kept below this bound so that products of two residues fit in `u64`.
pub const MAX_PRIME: u64 = 1 << 32;

/// Default lower bound for automatically chosen primes.
pub const DEFAULT_MIN_BOUND: u64 = 1 << 30;

/// Smallest characteristic accepted by [`FieldSpec`].
pub const MIN_FIELD_PRIME: u64 = 101;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is too small; at least {MIN_FIELD_PRIME} is required")]
    PrimeTooSmall(u64),
    #[error("prime {0} does not fit below 2^32")]
    PrimeTooLarge(u64),
    #[error("constraint {constraint} has no solution modulo {prime}")]
    UnsatisfiableConstraint { prime: u64, constraint: SymbolConstraint },
    #[error("only monic quadratic minimal polynomials are supported, got degree {0}")]
    UnsupportedDegree(usize),
    #[error("multiplicative order must be positive")]
    ZeroOrder,
    #[error("no suitable prime found below 2^32 starting from {0}")]
    PrimeSearchExhausted(u64),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
}

/// A residue in `[0, p)`. The modulus is carried by the surrounding [`PrimeField`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(pub u64);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn residue(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Arithmetic context for `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Build the field of order `p`, checking primality and the size window.
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= MAX_PRIME {
            return Err(FieldError::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn zero(self) -> Fe {
        Fe(0)
    }

    #[inline]
    pub fn one(self) -> Fe {
        Fe(1)
    }

    /// Reduce a signed integer into the field.
    #[inline]
    pub fn from_i64(self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.p as i64) as u64)
    }

    #[inline]
    pub fn from_u64(self, v: u64) -> Fe {
        Fe(v % self.p)
    }

    /// Symmetric lift to `(-p/2, p/2]`, handy for printing small integers.
    pub fn to_signed(self, a: Fe) -> i64 {
        if a.0 > self.p / 2 {
            a.0 as i64 - self.p as i64
        } else {
            a.0 as i64
        }
    }

    #[inline]
    pub fn add(self, a: Fe, b: Fe) -> Fe {
        let s = a.0 + b.0;
        Fe(if s >= self.p { s - self.p } else { s })
    }

    #[inline]
    pub fn sub(self, a: Fe, b: Fe) -> Fe {
        Fe(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.p - b.0 })
    }

    #[inline]
    pub fn neg(self, a: Fe) -> Fe {
        Fe(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    #[inline]
    pub fn mul(self, a: Fe, b: Fe) -> Fe {
        Fe(a.0 * b.0 % self.p)
    }

    pub fn pow(self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe(1 % self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Power with a signed exponent; `None` for negative powers of zero.
    pub fn pow_signed(self, a: Fe, e: i64) -> Option<Fe> {
        if e >= 0 {
            Some(self.pow(a, e as u64))
        } else {
            self.inv(a).map(|ai| self.pow(ai, e.unsigned_abs()))
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return None;
        }
        // extended Euclid on signed values
        let (mut r0, mut r1) = (self.p as i64, a.0 as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(self.from_i64(t0))
    }

    /// Division `a / b`, `None` when `b = 0`.
    pub fn div(self, a: Fe, b: Fe) -> Option<Fe> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// Euler's criterion. Zero counts as a square.
    pub fn is_square(self, a: Fe) -> bool {
        if a.0 == 0 || self.p == 2 {
            return true;
        }
        self.pow(a, (self.p - 1) / 2).0 == 1
    }

    /// A square root by Tonelli–Shanks, or `None` for non-residues.
    pub fn sqrt(self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return Some(a);
        }
        if self.p == 2 {
            return Some(a);
        }
        if !self.is_square(a) {
            return None;
        }
        let p = self.p;
        if p % 4 == 3 {
            return Some(self.pow(a, (p + 1) / 4));
        }
        let mut q = p - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let mut z = Fe(2);
        while self.is_square(z) {
            z = Fe(z.0 + 1);
        }
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, (q + 1) / 2);
        while t.0 != 1 {
            let mut i = 0u32;
            let mut tt = t;
            while tt.0 != 1 {
                tt = self.mul(tt, tt);
                i += 1;
            }
            let b = self.pow(c, 1u64 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }

    /// Uniform random element.
    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> Fe {
        Fe(rng.gen_range(0..self.p))
    }

    /// Uniform random nonzero element.
    pub fn random_nonzero<R: Rng + ?Sized>(self, rng: &mut R) -> Fe {
        Fe(rng.gen_range(1..self.p))
    }

    /// Exact multiplicative order of a nonzero element.
    pub fn order(self, a: Fe) -> Option<u64> {
        if a.0 == 0 {
            return None;
        }
        let mut n = self.p - 1;
        for (q, _) in factorize(self.p - 1) {
            while n % q == 0 && self.pow(a, n / q).0 == 1 {
                n /= q;
            }
        }
        Some(n)
    }
}

/// Constraint that a named symbol must satisfy in `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymbolConstraint {
    /// The symbol is an element of exact multiplicative order `n`.
    Order(u64),
    /// The symbol is a root of the monic polynomial with coefficients
    /// `[c0, c1, ..., 1]` (constant term first).
    MinPoly(Vec<i64>),
}

impl fmt::Display for SymbolConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolConstraint::Order(n) => write!(f, "order {n}"),
            SymbolConstraint::MinPoly(c) => {
                write!(f, "minpoly ")?;
                for (k, coef) in c.iter().enumerate().rev() {
                    write!(f, "{coef:+}x^{k}")?;
                }
                Ok(())
            }
        }
    }
}

impl SymbolConstraint {
    fn validate(&self) -> Result<(), FieldError> {
        match self {
            SymbolConstraint::Order(0) => Err(FieldError::ZeroOrder),
            SymbolConstraint::Order(_) => Ok(()),
            SymbolConstraint::MinPoly(c) => {
                if c.len() != 3 || c[2] != 1 {
                    Err(FieldError::UnsupportedDegree(c.len().saturating_sub(1)))
                } else {
                    Ok(())
                }
            }
        }
    }

    fn satisfiable(&self, field: PrimeField) -> bool {
        match self {
            SymbolConstraint::Order(n) => (field.modulus() - 1) % n == 0,
            SymbolConstraint::MinPoly(c) => {
                let disc = c[1] as i128 * c[1] as i128 - 4 * c[0] as i128;
                let d = Fe((disc.rem_euclid(field.modulus() as i128)) as u64);
                field.is_square(d)
            }
        }
    }
}

/// A declared symbol: a name and the constraint its value must satisfy.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    pub constraint: SymbolConstraint,
}

impl Symbol {
    pub fn order(name: &str, n: u64) -> Self {
        Symbol { name: name.to_string(), constraint: SymbolConstraint::Order(n) }
    }

    pub fn minpoly(name: &str, coeffs: &[i64]) -> Self {
        Symbol { name: name.to_string(), constraint: SymbolConstraint::MinPoly(coeffs.to_vec()) }
    }
}

/// A prime field together with residues for the declared symbols.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub field: PrimeField,
    pub symbols: Vec<Symbol>,
    pub resolved: BTreeMap<String, Fe>,
    pub seed: u64,
}

impl FieldSpec {
    /// Pick the smallest admissible prime `>= min_bound` and resolve every symbol.
    pub fn choose(symbols: &[Symbol], min_bound: u64, seed: u64) -> Result<Self, FieldError> {
        let constraints: Vec<SymbolConstraint> = symbols.iter().map(|s| s.constraint.clone()).collect();
        let p = choose_prime(&constraints, min_bound.max(MIN_FIELD_PRIME))?;
        Self::with_prime(p, symbols, seed)
    }

    /// Resolve the symbols over a caller-supplied prime.
    pub fn with_prime(p: u64, symbols: &[Symbol], seed: u64) -> Result<Self, FieldError> {
        if p < MIN_FIELD_PRIME {
            return Err(FieldError::PrimeTooSmall(p));
        }
        let field = PrimeField::new(p)?;
        let mut resolved = BTreeMap::new();
        for (k, s) in symbols.iter().enumerate() {
            let sub_seed = seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            resolved.insert(s.name.clone(), resolve_symbol(field, &s.constraint, sub_seed)?);
        }
        Ok(FieldSpec { field, symbols: symbols.to_vec(), resolved, seed })
    }

    pub fn prime(&self) -> u64 {
        self.field.modulus()
    }

    pub fn get(&self, name: &str) -> Result<Fe, FieldError> {
        self.resolved.get(name).copied().ok_or_else(|| FieldError::UnknownSymbol(name.to_string()))
    }
}

/// Smallest prime `p >= min_bound` meeting every constraint.
///
/// Order constraints need `n | p - 1`; quadratic constraints need a square
/// discriminant modulo `p`.
pub fn choose_prime(constraints: &[SymbolConstraint], min_bound: u64) -> Result<u64, FieldError> {
    for c in constraints {
        c.validate()?;
    }
    let mut p = min_bound.max(2);
    while p < MAX_PRIME {
        if is_prime(p) {
            if let Ok(field) = PrimeField::new(p) {
                if constraints.iter().all(|c| c.satisfiable(field)) {
                    return Ok(p);
                }
            }
        }
        p += 1;
    }
    Err(FieldError::PrimeSearchExhausted(min_bound))
}

/// Realize a constraint as a residue of `F_p`, deterministically in `seed`.
pub fn resolve_symbol(field: PrimeField, constraint: &SymbolConstraint, seed: u64) -> Result<Fe, FieldError> {
    constraint.validate()?;
    let unsat = || FieldError::UnsatisfiableConstraint { prime: field.modulus(), constraint: constraint.clone() };
    if !constraint.satisfiable(field) {
        return Err(unsat());
    }
    match constraint {
        SymbolConstraint::Order(n) => {
            let n = *n;
            if n == 1 {
                return Ok(field.one());
            }
            let prime_factors: Vec<u64> = factorize(n).into_iter().map(|(q, _)| q).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let cofactor = (field.modulus() - 1) / n;
            // A random base hits a generator with probability phi(p-1)/(p-1); the
            // loop stops as soon as the power has exact order n.
            for _ in 0..10_000 {
                let g = field.random_nonzero(&mut rng);
                let cand = field.pow(g, cofactor);
                if prime_factors.iter().all(|&q| field.pow(cand, n / q).0 != 1) {
                    return Ok(cand);
                }
            }
            Err(unsat())
        }
        SymbolConstraint::MinPoly(c) => {
            let b = field.from_i64(c[1]);
            let cc = field.from_i64(c[0]);
            let disc = field.sub(field.mul(b, b), field.mul(Fe(4 % field.modulus()), cc));
            let s = field.sqrt(disc).ok_or_else(unsat)?;
            let two_inv = field.inv(field.from_u64(2)).ok_or_else(unsat)?;
            let plus = field.mul(field.add(field.neg(b), s), two_inv);
            let minus = field.mul(field.sub(field.neg(b), s), two_inv);
            // the smaller residue of the two roots, so the choice is canonical
            Ok(plus.min(minus))
        }
    }
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Trial-division factorization as `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut q = 2u64;
    while q * q <= n {
        if n % q == 0 {
            let mut e = 0;
            while n % q == 0 {
                n /= q;
                e += 1;
            }
            out.push((q, e));
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sieve(limit: usize) -> Vec<bool> {
        let mut is = vec![true; limit + 1];
        is[0] = false;
        if limit >= 1 {
            is[1] = false;
        }
        let mut i = 2;
        while i * i <= limit {
            if is[i] {
                let mut j = i * i;
                while j <= limit {
                    is[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        is
    }

    #[test]
    fn miller_rabin_matches_sieve() {
        let s = sieve(20_000);
        for (n, &expected) in s.iter().enumerate() {
            assert_eq!(is_prime(n as u64), expected, "n = {n}");
        }
        assert!(is_prime(4_294_967_291));
        assert!(!is_prime(4_294_967_297));
    }

    #[test]
    fn smallest_prime_without_constraints() {
        assert_eq!(choose_prime(&[], 101).unwrap(), 101);
        assert_eq!(choose_prime(&[], 102).unwrap(), 103);
    }

    #[test]
    fn order_three_from_five() {
        assert_eq!(choose_prime(&[SymbolConstraint::Order(3)], 5).unwrap(), 7);
    }

    #[test]
    fn order_four_and_golden_ratio_near_a_million() {
        let cs = [SymbolConstraint::Order(4), SymbolConstraint::MinPoly(vec![-1, -1, 1])];
        let got = choose_prime(&cs, 1_000_000).unwrap();
        // independent oracle: sieve plus Euler's criterion computed by repeated multiplication
        let s = sieve(1_100_000);
        let euler = |a: u64, p: u64| {
            let mut r = 1u64;
            for _ in 0..(p - 1) / 2 {
                r = r * a % p;
            }
            r == 1
        };
        let expected = (1_000_000..1_100_000)
            .find(|&p| s[p] && p % 4 == 1 && euler(5 % p as u64, p as u64))
            .unwrap() as u64;
        assert_eq!(got, expected);
    }

    #[test]
    fn order_three_mod_seven() {
        let f = PrimeField::new(7).unwrap();
        let r = resolve_symbol(f, &SymbolConstraint::Order(3), 0).unwrap();
        assert!(r == Fe(2) || r == Fe(4));
        let orders: Vec<u64> = (1..7).filter(|&a| f.order(Fe(a)) == Some(3)).collect();
        assert_eq!(orders, vec![2, 4]);
    }

    #[test]
    fn sixth_root_mod_thirteen() {
        let f = PrimeField::new(13).unwrap();
        let r = resolve_symbol(f, &SymbolConstraint::MinPoly(vec![1, -1, 1]), 0).unwrap();
        assert_eq!(r, Fe(4));
        assert_eq!((4 * 4 - 4 + 1) % 13, 0);
    }

    #[test]
    fn order_one_is_one() {
        for p in [101u64, 1_000_003, 4_294_967_291] {
            let f = PrimeField::new(p).unwrap();
            assert_eq!(resolve_symbol(f, &SymbolConstraint::Order(1), 9).unwrap(), Fe(1));
        }
    }

    #[test]
    fn unsatisfiable_constraints_are_reported() {
        let f = PrimeField::new(103).unwrap();
        assert!(matches!(
            resolve_symbol(f, &SymbolConstraint::Order(5), 0),
            Err(FieldError::UnsatisfiableConstraint { .. })
        ));
        // 103 = 3 mod 4, so -1 has no square root
        assert!(matches!(
            resolve_symbol(f, &SymbolConstraint::MinPoly(vec![1, 0, 1]), 0),
            Err(FieldError::UnsatisfiableConstraint { .. })
        ));
    }

    #[test]
    fn cubic_minpoly_rejected() {
        assert_eq!(
            choose_prime(&[SymbolConstraint::MinPoly(vec![1, 0, 0, 1])], 101),
            Err(FieldError::UnsupportedDegree(3))
        );
    }

    #[test]
    fn resolved_orders_are_exact() {
        let symbols = [Symbol::order("u", 12), Symbol::order("w", 10), Symbol::minpoly("phi", &[-1, -1, 1])];
        let spec = FieldSpec::choose(&symbols, DEFAULT_MIN_BOUND, 3).unwrap();
        let f = spec.field;
        for (name, n) in [("u", 12u64), ("w", 10)] {
            let u = spec.get(name).unwrap();
            assert_eq!(f.pow(u, n), f.one());
            for k in 1..n {
                assert_ne!(f.pow(u, k), f.one(), "{name}^{k}");
            }
        }
        let phi = spec.get("phi").unwrap();
        assert_eq!(f.mul(phi, phi), f.add(phi, f.one()));
    }

    #[test]
    fn field_spec_is_deterministic() {
        let symbols = [Symbol::order("u", 8), Symbol::minpoly("v", &[-2, 0, 1])];
        let a = FieldSpec::choose(&symbols, DEFAULT_MIN_BOUND, 11).unwrap();
        let b = FieldSpec::choose(&symbols, DEFAULT_MIN_BOUND, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn small_primes_rejected_for_field_specs() {
        assert_eq!(FieldSpec::with_prime(97, &[], 0), Err(FieldError::PrimeTooSmall(97)));
    }

    #[test]
    fn sqrt_round_trip_all_residues() {
        for p in [101u64, 113, 257, 641] {
            let f = PrimeField::new(p).unwrap();
            for a in 0..p {
                let a = Fe(a);
                match f.sqrt(a) {
                    Some(r) => assert_eq!(f.mul(r, r), a),
                    None => assert!(!f.is_square(a)),
                }
            }
        }
    }
}
