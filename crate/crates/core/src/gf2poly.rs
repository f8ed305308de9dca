//! Polynomials over Z2.
//!
//! A [`BinPoly`] keeps its coefficients LSB-first in 64-bit limbs, so bit `i`
//! is the coefficient of `x^i`. Addition is XOR and multiplication is a
//! carry-less shift-and-XOR product. Over Z2 every nonzero polynomial is
//! monic, so there is no normalisation beyond trimming high zero limbs.
//!
//! ```text
//! "101"  -> 1 + x^2
//! "0101" -> x + x^3
//! ```

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use smallvec::{smallvec, SmallVec};
use thiserror::Error;

type Limbs = SmallVec<[u64; 2]>;

const LIMB_BITS: usize = 64;

/// Largest `n` accepted by [`divisors_of_xn_minus_1`].
pub const DEFAULT_DIVISOR_CAP: usize = 24;

/// The trial-division enumerator works on single machine words.
const MAX_DIVISOR_CAP: usize = 62;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("{0} is undefined when its arguments are zero")]
    Undefined(&'static str),
    #[error("{what} needs a positive argument, got {value}")]
    Domain { what: &'static str, value: usize },
    #[error("n = {n} exceeds the divisor enumeration cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: String, modulus: String },
    #[error("invalid polynomial string {0:?}: expected a non-empty string of '0' and '1'")]
    Parse(String),
}

/// Degree of a polynomial. The zero polynomial has no integer degree and
/// sorts strictly below every polynomial that does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Exact(usize),
}

impl Degree {
    pub fn exact(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Exact(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Exact(d) => write!(f, "{d}"),
        }
    }
}

/// A polynomial over Z2.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BinPoly {
    limbs: Limbs,
}

impl BinPoly {
    pub fn zero() -> Self {
        Self { limbs: Limbs::new() }
    }

    pub fn one() -> Self {
        Self::from_u64(1)
    }

    pub fn x() -> Self {
        Self::from_u64(2)
    }

    /// The polynomial whose coefficient bits are the bits of `bits`.
    pub fn from_u64(bits: u64) -> Self {
        let mut p = Self {
            limbs: smallvec![bits],
        };
        p.normalize();
        p
    }

    pub fn from_u128(bits: u128) -> Self {
        let mut p = Self {
            limbs: smallvec![bits as u64, (bits >> 64) as u64],
        };
        p.normalize();
        p
    }

    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut p = Self::zero();
        for &e in exps {
            p.toggle(e);
        }
        p
    }

    pub fn monomial(k: usize) -> Self {
        let mut p = Self::zero();
        p.toggle(k);
        p
    }

    /// `x^n - 1`, which over Z2 is `x^n + 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut p = Self::monomial(n);
        p.toggle(0);
        p
    }

    fn normalize(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.limbs.len() == 1 && self.limbs[0] == 1
    }

    pub fn degree(&self) -> Degree {
        match self.limbs.last() {
            None => Degree::NegInfinity,
            Some(top) => Degree::Exact(
                (self.limbs.len() - 1) * LIMB_BITS + (LIMB_BITS - 1 - top.leading_zeros() as usize),
            ),
        }
    }

    /// Degree as an integer, `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.degree().exact()
    }

    /// Degree with the zero polynomial mapped to 0. Only for places where a
    /// zero generator contributes nothing to a count.
    pub(crate) fn deg_or_zero(&self) -> usize {
        self.deg().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.limbs
            .get(i / LIMB_BITS)
            .is_some_and(|l| (l >> (i % LIMB_BITS)) & 1 == 1)
    }

    pub fn toggle(&mut self, i: usize) {
        let idx = i / LIMB_BITS;
        if self.limbs.len() <= idx {
            self.limbs.resize(idx + 1, 0);
        }
        self.limbs[idx] ^= 1 << (i % LIMB_BITS);
        self.normalize();
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    /// Constant coefficient as a boolean.
    pub fn has_constant_term(&self) -> bool {
        self.coeff(0)
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self.limbs.len() {
            0 => Some(0),
            1 => Some(self.limbs[0]),
            _ => None,
        }
    }

    pub fn to_u128(&self) -> Option<u128> {
        match self.limbs.len() {
            0 => Some(0),
            1 => Some(self.limbs[0] as u128),
            2 => Some(self.limbs[0] as u128 | (self.limbs[1] as u128) << 64),
            _ => None,
        }
    }

    /// Exponents of the nonzero coefficients, ascending.
    pub fn exponents(&self) -> impl Iterator<Item = usize> + '_ {
        self.limbs.iter().enumerate().flat_map(|(li, &limb)| {
            let mut bits = limb;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(li * LIMB_BITS + tz)
            })
        })
    }

    /// `self · x^k`.
    pub fn shl(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = Self::zero();
        out.xor_shifted(self, k);
        out
    }

    /// `self += other · x^shift`.
    fn xor_shifted(&mut self, other: &Self, shift: usize) {
        if other.is_zero() {
            return;
        }
        let limb_shift = shift / LIMB_BITS;
        let bit_shift = shift % LIMB_BITS;
        let needed = other.limbs.len() + limb_shift + 1;
        if self.limbs.len() < needed {
            self.limbs.resize(needed, 0);
        }
        for (i, &l) in other.limbs.iter().enumerate() {
            self.limbs[i + limb_shift] ^= l << bit_shift;
            if bit_shift != 0 {
                self.limbs[i + limb_shift + 1] ^= l >> (LIMB_BITS - bit_shift);
            }
        }
        self.normalize();
    }

    /// Euclidean division: `self = q·b + r` with `r = 0` or `deg r < deg b`.
    pub fn divrem(&self, b: &Self) -> Result<(Self, Self), PolyError> {
        let db = b.deg().ok_or(PolyError::DivisionByZero)?;
        if let (Some(a64), Some(b64)) = (self.to_u64(), b.to_u64()) {
            let (q, r) = divrem_u64(a64, b64);
            return Ok((Self::from_u64(q), Self::from_u64(r)));
        }
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(dr) = rem.deg() {
            if dr < db {
                break;
            }
            quot.toggle(dr - db);
            rem.xor_shifted(b, dr - db);
        }
        Ok((quot, rem))
    }

    pub fn rem(&self, b: &Self) -> Result<Self, PolyError> {
        let db = b.deg().ok_or(PolyError::DivisionByZero)?;
        if let (Some(a64), Some(b64)) = (self.to_u64(), b.to_u64()) {
            return Ok(Self::from_u64(divrem_u64(a64, b64).1));
        }
        let mut rem = self.clone();
        while let Some(dr) = rem.deg() {
            if dr < db {
                break;
            }
            rem.xor_shifted(b, dr - db);
        }
        Ok(rem)
    }

    /// `self / b` when the division is exact, `None` otherwise (or if `b = 0`).
    pub fn div_exact(&self, b: &Self) -> Option<Self> {
        match self.divrem(b) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    /// `self | other`. The zero polynomial divides only zero.
    pub fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic greatest common divisor by Euclid's algorithm.
    pub fn gcd(a: &Self, b: &Self) -> Result<Self, PolyError> {
        if a.is_zero() && b.is_zero() {
            return Err(PolyError::Undefined("gcd"));
        }
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.rem(&y)?;
            x = y;
            y = r;
        }
        Ok(x)
    }

    /// gcd over a list; zeros are ignored. Errors only if every entry is zero.
    pub fn gcd_all<'a>(polys: impl IntoIterator<Item = &'a BinPoly>) -> Result<Self, PolyError> {
        let mut acc = Self::zero();
        for p in polys {
            if p.is_zero() {
                continue;
            }
            acc = if acc.is_zero() {
                p.clone()
            } else {
                Self::gcd(&acc, p)?
            };
        }
        if acc.is_zero() {
            Err(PolyError::Undefined("gcd"))
        } else {
            Ok(acc)
        }
    }

    pub fn lcm(a: &Self, b: &Self) -> Result<Self, PolyError> {
        if a.is_zero() || b.is_zero() {
            return Err(PolyError::Undefined("lcm"));
        }
        let g = Self::gcd(a, b)?;
        let (q, _) = a.divrem(&g)?;
        Ok(&q * b)
    }

    /// Coefficient reversal across the degree, `x^deg f · f(1/x)`.
    /// The reciprocal of zero is zero.
    pub fn reciprocal(&self) -> Self {
        let Some(d) = self.deg() else {
            return Self::zero();
        };
        let mut out = Self::zero();
        for e in self.exponents() {
            out.toggle(d - e);
        }
        out
    }

    /// `f(x^k)`.
    pub fn substitute_power(&self, k: usize) -> Result<Self, PolyError> {
        if k == 0 {
            return Err(PolyError::Domain {
                what: "substitute_power",
                value: k,
            });
        }
        let mut out = Self::zero();
        for e in self.exponents() {
            out.toggle(e * k);
        }
        Ok(out)
    }

    /// Reduction modulo `x^n - 1`: exponent `e` folds onto `e mod n`.
    pub fn reduce_mod_xn_minus_1(&self, n: usize) -> Self {
        assert!(n > 0, "x^0 - 1 is the zero polynomial");
        if self.deg().is_none_or(|d| d < n) {
            return self.clone();
        }
        let mut out = Self::zero();
        for e in self.exponents() {
            out.toggle(e % n);
        }
        out
    }

    /// The inverse of `self` modulo `modulus`, with degree below `deg modulus`.
    pub fn mod_inverse(&self, modulus: &Self) -> Result<Self, PolyError> {
        let reduced = self.rem(modulus)?;
        if modulus.is_one() {
            return Ok(Self::zero());
        }
        let (mut old_r, mut r) = (modulus.clone(), reduced);
        let (mut old_s, mut s) = (Self::zero(), Self::one());
        while !r.is_zero() {
            let (q, rem) = old_r.divrem(&r)?;
            old_r = std::mem::replace(&mut r, rem);
            let next_s = &old_s + &(&q * &s);
            old_s = std::mem::replace(&mut s, next_s);
        }
        if !old_r.is_one() {
            return Err(PolyError::NotInvertible {
                value: self.to_string(),
                modulus: modulus.to_string(),
            });
        }
        old_s.rem(modulus)
    }

    /// LSB-first binary text, `deg + 1` characters (`"0"` for zero).
    pub fn to_binary_string(&self) -> String {
        self.to_binary_string_width(1)
    }

    /// LSB-first binary text padded with zeros to at least `width` characters.
    pub fn to_binary_string_width(&self, width: usize) -> String {
        let len = self.deg().map_or(0, |d| d + 1).max(width).max(1);
        (0..len)
            .map(|i| if self.coeff(i) { '1' } else { '0' })
            .collect()
    }

    pub fn parse_binary(s: &str) -> Result<Self, PolyError> {
        if s.is_empty() {
            return Err(PolyError::Parse(s.to_string()));
        }
        let mut p = Self::zero();
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => p.toggle(i),
                _ => return Err(PolyError::Parse(s.to_string())),
            }
        }
        Ok(p)
    }
}

/// `1 + x + ... + x^{n-1}`.
pub fn theta(n: usize) -> Result<BinPoly, PolyError> {
    if n == 0 {
        return Err(PolyError::Domain {
            what: "theta",
            value: n,
        });
    }
    let mut p = BinPoly::zero();
    let full = n / LIMB_BITS;
    p.limbs.resize(full + 1, 0);
    for l in p.limbs.iter_mut().take(full) {
        *l = u64::MAX;
    }
    if !n.is_multiple_of(LIMB_BITS) {
        p.limbs[full] = (1u64 << (n % LIMB_BITS)) - 1;
    }
    p.normalize();
    Ok(p)
}

/// Every divisor of `x^n - 1`, sorted by degree and then by coefficient bits.
pub fn divisors_of_xn_minus_1(n: usize) -> Result<Vec<BinPoly>, PolyError> {
    divisors_of_xn_minus_1_capped(n, DEFAULT_DIVISOR_CAP)
}

/// As [`divisors_of_xn_minus_1`] with an explicit cap on `n`.
pub fn divisors_of_xn_minus_1_capped(n: usize, cap: usize) -> Result<Vec<BinPoly>, PolyError> {
    if n == 0 {
        return Err(PolyError::Domain {
            what: "divisors_of_xn_minus_1",
            value: n,
        });
    }
    let cap = cap.min(MAX_DIVISOR_CAP);
    if n > cap {
        return Err(PolyError::CapExceeded { n, cap });
    }
    let target = (1u64 << n) | 1;
    // A divisor of x^n - 1 never has x as a factor, so odd candidates suffice.
    // Increasing integer order is exactly (degree, bits) order.
    Ok((1..=target)
        .step_by(2)
        .filter(|&c| divrem_u64(target, c).1 == 0)
        .map(BinPoly::from_u64)
        .collect())
}

fn divrem_u64(mut a: u64, b: u64) -> (u64, u64) {
    debug_assert!(b != 0);
    let db = 63 - b.leading_zeros();
    let mut q = 0u64;
    while a != 0 {
        let da = 63 - a.leading_zeros();
        if da < db {
            break;
        }
        q |= 1 << (da - db);
        a ^= b << (da - db);
    }
    (q, a)
}

/// Carry-less 64×64 → 128 bit product.
fn clmul64(a: u64, b: u64) -> u128 {
    let (small, big) = if a.count_ones() < b.count_ones() {
        (a, b as u128)
    } else {
        (b, a as u128)
    };
    let mut acc = 0u128;
    let mut bits = small;
    while bits != 0 {
        let tz = bits.trailing_zeros();
        acc ^= big << tz;
        bits &= bits - 1;
    }
    acc
}

impl Ord for BinPoly {
    /// Degree first, then coefficient bits read as an integer.
    fn cmp(&self, other: &Self) -> Ordering {
        self.limbs
            .len()
            .cmp(&other.limbs.len())
            .then_with(|| self.limbs.iter().rev().cmp(other.limbs.iter().rev()))
    }
}

impl PartialOrd for BinPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &BinPoly {
    type Output = BinPoly;

    fn add(self, rhs: &BinPoly) -> BinPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for BinPoly {
    type Output = BinPoly;

    fn add(mut self, rhs: BinPoly) -> BinPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&BinPoly> for BinPoly {
    fn add_assign(&mut self, rhs: &BinPoly) {
        if self.limbs.len() < rhs.limbs.len() {
            self.limbs.resize(rhs.limbs.len(), 0);
        }
        for (a, b) in self.limbs.iter_mut().zip(rhs.limbs.iter()) {
            *a ^= b;
        }
        self.normalize();
    }
}

impl Mul for &BinPoly {
    type Output = BinPoly;

    fn mul(self, rhs: &BinPoly) -> BinPoly {
        if self.is_zero() || rhs.is_zero() {
            return BinPoly::zero();
        }
        let mut limbs: Limbs = smallvec![0; self.limbs.len() + rhs.limbs.len()];
        for (i, &a) in self.limbs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.limbs.iter().enumerate() {
                let p = clmul64(a, b);
                limbs[i + j] ^= p as u64;
                limbs[i + j + 1] ^= (p >> 64) as u64;
            }
        }
        let mut out = BinPoly { limbs };
        out.normalize();
        out
    }
}

impl Mul for BinPoly {
    type Output = BinPoly;

    fn mul(self, rhs: BinPoly) -> BinPoly {
        &self * &rhs
    }
}

impl FromStr for BinPoly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_binary(s)
    }
}

impl fmt::Display for BinPoly {
    /// Human-readable form, ascending powers: `1+x+x^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for e in self.exponents() {
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match e {
                0 => f.write_str("1")?,
                1 => f.write_str("x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinPoly({self})")
    }
}
