//! The module `R_{r,s,t} = Z2[x]/(x^r-1) × Z2[x]/(x^s-1) × Z2[x]/(x^t-1)`.
//!
//! Vectors of `Z2^{r+s+t}` are packed into a [`Word`]: coordinate `i` is bit
//! `i`, the first block occupies bits `0..r`, the second `r..r+s` and the
//! third `r+s..r+s+t`. Inside a block the lowest bit is the constant
//! coefficient, so [`psi`] is just a reinterpretation of the bits.

use std::fmt;

use thiserror::Error;

use crate::gf2poly::{theta, BinPoly};
use crate::linalg;

/// Packed words are `u128`.
pub const MAX_LENGTH: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("block lengths must be positive, got ({r},{s},{t})")]
    ZeroBlock { r: usize, s: usize, t: usize },
    #[error("total length {0} exceeds the supported maximum of {MAX_LENGTH}")]
    TooLong(usize),
    #[error("operands live in different contexts: {0} and {1}")]
    ContextMismatch(RingContext, RingContext),
    #[error("expected {expected} bits, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("cannot parse {0:?} as an element of {1}")]
    Parse(String, RingContext),
}

/// Block lengths `(r, s, t)` together with `m = lcm(r, s, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingContext {
    r: usize,
    s: usize,
    t: usize,
    m: usize,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl RingContext {
    pub fn new(r: usize, s: usize, t: usize) -> Result<Self, RingError> {
        if r == 0 || s == 0 || t == 0 {
            return Err(RingError::ZeroBlock { r, s, t });
        }
        if r + s + t > MAX_LENGTH {
            return Err(RingError::TooLong(r + s + t));
        }
        let ctx = Self {
            r,
            s,
            t,
            m: lcm(lcm(r, s), t),
        };
        let xm = BinPoly::x_pow_minus_one(ctx.m);
        for len in ctx.lens() {
            assert_eq!(
                &ctx.theta_power(len) * &BinPoly::x_pow_minus_one(len),
                xm,
                "x^m - 1 must factor through x^{len} - 1"
            );
        }
        Ok(ctx)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// `lcm(r, s, t)`, the period of the shift.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Code length `r + s + t`.
    pub fn n(&self) -> usize {
        self.r + self.s + self.t
    }

    pub fn lens(&self) -> [usize; 3] {
        [self.r, self.s, self.t]
    }

    pub fn offsets(&self) -> [usize; 3] {
        [0, self.r, self.r + self.s]
    }

    /// `x^len - 1` for block `b`.
    pub fn modulus(&self, b: usize) -> BinPoly {
        BinPoly::x_pow_minus_one(self.lens()[b])
    }

    pub fn moduli(&self) -> [BinPoly; 3] {
        [self.modulus(0), self.modulus(1), self.modulus(2)]
    }

    /// `θ_{m/len}(x^len)`.
    pub(crate) fn theta_power(&self, len: usize) -> BinPoly {
        theta(self.m / len)
            .and_then(|t| t.substitute_power(len))
            .expect("len divides m")
    }

    fn block_mask(len: usize) -> u128 {
        if len >= 128 {
            u128::MAX
        } else {
            (1u128 << len) - 1
        }
    }

    /// Mask of the coordinates of block `b` within a word.
    pub fn mask(&self, b: usize) -> u128 {
        Self::block_mask(self.lens()[b]) << self.offsets()[b]
    }

    pub fn full_mask(&self) -> u128 {
        Self::block_mask(self.n())
    }

    /// The bits of block `b`, shifted down to start at bit 0.
    pub fn block(&self, w: Word, b: usize) -> u128 {
        (w.0 >> self.offsets()[b]) & Self::block_mask(self.lens()[b])
    }

    pub fn word_from_blocks(&self, blocks: [u128; 3]) -> Word {
        let mut w = 0u128;
        for b in 0..3 {
            w |= (blocks[b] & Self::block_mask(self.lens()[b])) << self.offsets()[b];
        }
        Word(w)
    }

    /// The cyclic shift `T`: each block rotates one place towards higher
    /// coordinates, the last coordinate wrapping round to the first.
    pub fn shift_word(&self, w: Word) -> Word {
        let mut out = 0u128;
        for b in 0..3 {
            let len = self.lens()[b];
            let v = self.block(w, b);
            let rotated = ((v << 1) | (v >> (len - 1))) & Self::block_mask(len);
            out |= rotated << self.offsets()[b];
        }
        Word(out)
    }

    /// Parses `r+s+t` characters of `0`/`1`, optionally with `|` separators
    /// between the blocks.
    pub fn parse_word(&self, text: &str) -> Result<Word, RingError> {
        let bits: Vec<bool> = text
            .chars()
            .filter(|&c| c != '|')
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(RingError::Parse(text.to_string(), *self)),
            })
            .collect::<Result<_, _>>()?;
        self.word_from_bits(&bits)
    }

    pub fn word_from_bits(&self, bits: &[bool]) -> Result<Word, RingError> {
        if bits.len() != self.n() {
            return Err(RingError::LengthMismatch {
                expected: self.n(),
                got: bits.len(),
            });
        }
        Ok(Word(
            bits.iter()
                .enumerate()
                .fold(0u128, |acc, (i, &b)| acc | (b as u128) << i),
        ))
    }

    pub fn word_to_bits(&self, w: Word) -> Vec<bool> {
        (0..self.n()).map(|i| w.0 >> i & 1 == 1).collect()
    }

    /// `u1|u2|u3`, each block LSB-first with exactly its block length.
    pub fn format_word(&self, w: Word) -> String {
        let mut out = String::with_capacity(self.n() + 2);
        for b in 0..3 {
            if b > 0 {
                out.push('|');
            }
            let v = self.block(w, b);
            for i in 0..self.lens()[b] {
                out.push(if v >> i & 1 == 1 { '1' } else { '0' });
            }
        }
        out
    }

    fn ensure_same(&self, other: &RingContext) -> Result<(), RingError> {
        if self == other {
            Ok(())
        } else {
            Err(RingError::ContextMismatch(*self, *other))
        }
    }
}

impl fmt::Display for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.r, self.s, self.t)
    }
}

/// A vector of `Z2^{r+s+t}` packed into bits; see the module docs for layout.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub u128);

impl Word {
    pub const ZERO: Word = Word(0);

    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    /// Standard inner product over Z2.
    pub fn dot(self, other: Word) -> bool {
        linalg::dot(self.0, other.0)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::ops::BitXor for Word {
    type Output = Word;

    fn bitxor(self, rhs: Word) -> Word {
        Word(self.0 ^ rhs.0)
    }
}

/// An element `(u1 | u2 | u3)` of `R_{r,s,t}`, always stored reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    ctx: RingContext,
    parts: [BinPoly; 3],
}

impl RingElement {
    /// Builds an element, reducing each component modulo its block modulus.
    pub fn new(ctx: RingContext, u1: BinPoly, u2: BinPoly, u3: BinPoly) -> Self {
        let lens = ctx.lens();
        let parts = [
            u1.reduce_mod_xn_minus_1(lens[0]),
            u2.reduce_mod_xn_minus_1(lens[1]),
            u3.reduce_mod_xn_minus_1(lens[2]),
        ];
        Self { ctx, parts }
    }

    pub fn zero(ctx: RingContext) -> Self {
        Self::new(ctx, BinPoly::zero(), BinPoly::zero(), BinPoly::zero())
    }

    pub fn ctx(&self) -> RingContext {
        self.ctx
    }

    pub fn parts(&self) -> &[BinPoly; 3] {
        &self.parts
    }

    pub fn part(&self, b: usize) -> &BinPoly {
        &self.parts[b]
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(BinPoly::is_zero)
    }

    pub fn from_word(ctx: RingContext, w: Word) -> Self {
        let parts = [0, 1, 2].map(|b| BinPoly::from_u128(ctx.block(w, b)));
        Self { ctx, parts }
    }

    pub fn to_word(&self) -> Word {
        let blocks = [0, 1, 2].map(|b| self.parts[b].to_u128().expect("reduced block fits"));
        self.ctx.word_from_blocks(blocks)
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement, RingError> {
        self.ctx.ensure_same(&other.ctx)?;
        Ok(Self {
            ctx: self.ctx,
            parts: [0, 1, 2].map(|b| &self.parts[b] + &other.parts[b]),
        })
    }

    /// `λ * (u1 | u2 | u3) = (λu1 | λu2 | λu3)`.
    pub fn scalar_mul(&self, lambda: &BinPoly) -> RingElement {
        let [a, b, c] = &self.parts;
        Self::new(self.ctx, lambda * a, lambda * b, lambda * c)
    }

    /// The simultaneous cyclic shift, equal to `x * self`.
    pub fn shift(&self) -> RingElement {
        Self::from_word(self.ctx, self.ctx.shift_word(self.to_word()))
    }

    /// `u ∘ v`, a residue modulo `x^m - 1`. A block where `v` is zero
    /// contributes nothing.
    pub fn circ(&self, v: &RingElement) -> Result<BinPoly, RingError> {
        self.ctx.ensure_same(&v.ctx)?;
        let m = self.ctx.m;
        let mut acc = BinPoly::zero();
        for (b, len) in self.ctx.lens().into_iter().enumerate() {
            let (ub, vb) = (&self.parts[b], &v.parts[b]);
            let Some(dv) = vb.deg() else { continue };
            if ub.is_zero() {
                continue;
            }
            let mirrored = vb.reciprocal().shl(m - 1 - dv);
            let term = &(ub * &self.ctx.theta_power(len)).reduce_mod_xn_minus_1(m) * &mirrored;
            acc += &term.reduce_mod_xn_minus_1(m);
        }
        Ok(acc)
    }

    /// Whether `self` is orthogonal to `v` and to each of its `m` shifts.
    pub fn orthogonal_to_all_shifts(&self, v: &RingElement) -> Result<bool, RingError> {
        self.ctx.ensure_same(&v.ctx)?;
        let u = self.to_word();
        let mut w = v.to_word();
        for _ in 0..self.ctx.m {
            if u.dot(w) {
                return Ok(false);
            }
            w = self.ctx.shift_word(w);
        }
        Ok(true)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ctx.format_word(self.to_word()))
    }
}

/// `Ψ`: a bit vector of length `r+s+t` to its polynomial triple.
pub fn psi(ctx: RingContext, bits: &[bool]) -> Result<RingElement, RingError> {
    Ok(RingElement::from_word(ctx, ctx.word_from_bits(bits)?))
}

/// Inverse of [`psi`].
pub fn psi_inverse(e: &RingElement) -> Vec<bool> {
    e.ctx.word_to_bits(e.to_word())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(r: usize, s: usize, t: usize) -> RingContext {
        RingContext::new(r, s, t).unwrap()
    }

    fn p(exps: &[usize]) -> BinPoly {
        BinPoly::from_exponents(exps)
    }

    fn elem(c: RingContext, text: &str) -> RingElement {
        RingElement::from_word(c, c.parse_word(text).unwrap())
    }

    fn random_elem(c: RingContext, rng: &mut impl Rng) -> RingElement {
        RingElement::from_word(c, Word(rng.gen::<u128>() & c.full_mask()))
    }

    /// Σ S_i x^{i-1} mod x^m - 1, with S_i the inner product of u with the
    /// i-th shift of v. Expanding the pairing's formula puts S_i there; the
    /// reflected placement x^{m-1-i} does not match it.
    fn shift_dot_oracle(u: &RingElement, v: &RingElement) -> BinPoly {
        let c = u.ctx();
        let bits_u = psi_inverse(u);
        let mut shifted = psi_inverse(v);
        let mut out = BinPoly::zero();
        for i in 0..c.m() {
            let s = bits_u.iter().zip(&shifted).filter(|(a, b)| **a && **b).count() % 2;
            if s == 1 {
                out.toggle((i + c.m() - 1) % c.m());
            }
            // Rotate every block by one position, straight from the definition of T.
            let mut next = shifted.clone();
            for (off, len) in c.offsets().into_iter().zip(c.lens()) {
                for j in 0..len {
                    next[off + (j + 1) % len] = shifted[off + j];
                }
            }
            shifted = next;
        }
        out
    }

    #[test]
    fn context_basics() {
        let c = ctx(2, 3, 4);
        assert_eq!(c.m(), 12);
        assert_eq!(c.n(), 9);
        assert!(RingContext::new(0, 1, 1).is_err());
        assert!(RingContext::new(60, 60, 9).is_err());
        assert_eq!(ctx(1, 1, 1), ctx(1, 1, 1));
    }

    #[test]
    fn psi_examples() {
        let c = ctx(1, 1, 1);
        let e = psi(c, &[true, false, true]).unwrap();
        assert_eq!(e.parts(), &[BinPoly::one(), BinPoly::zero(), BinPoly::one()]);

        let c = ctx(2, 3, 1);
        let e = elem(c, "010011");
        assert_eq!(e.parts(), &[p(&[1]), p(&[2]), p(&[0])]);
        assert_eq!(e.to_string(), "01|001|1");

        assert_eq!(
            psi(c, &[true; 5]),
            Err(RingError::LengthMismatch { expected: 6, got: 5 })
        );
    }

    #[test]
    fn psi_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let c = ctx(rng.gen_range(1..8), rng.gen_range(1..8), rng.gen_range(1..8));
            let bits: Vec<bool> = (0..c.n()).map(|_| rng.gen()).collect();
            assert_eq!(psi_inverse(&psi(c, &bits).unwrap()), bits);
        }
    }

    #[test]
    fn shift_examples() {
        let c = ctx(3, 2, 2);
        let e = RingElement::new(c, p(&[0]), p(&[0]), p(&[1]));
        assert_eq!(e.shift(), RingElement::new(c, p(&[1]), p(&[1]), p(&[0])));

        let c = ctx(1, 1, 1);
        let e = elem(c, "101");
        assert_eq!(e.shift(), e);
    }

    #[test]
    fn shift_has_period_m_and_equals_x_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let c = ctx(rng.gen_range(1..7), rng.gen_range(1..7), rng.gen_range(1..7));
            let e = random_elem(c, &mut rng);
            assert_eq!(e.shift(), e.scalar_mul(&BinPoly::x()));
            let mut w = e.clone();
            for _ in 0..c.m() {
                w = w.shift();
            }
            assert_eq!(w, e);
        }
    }

    #[test]
    fn scalar_mul_examples() {
        let c = ctx(2, 2, 2);
        let e = RingElement::new(c, p(&[0]), p(&[1]), p(&[0, 1]));
        assert_eq!(e.scalar_mul(&BinPoly::one()), e);
        assert_eq!(
            e.scalar_mul(&BinPoly::x()),
            RingElement::new(c, p(&[1]), p(&[0]), p(&[0, 1]))
        );
        let only_first = RingElement::new(c, p(&[0]), BinPoly::zero(), BinPoly::zero());
        assert!(only_first.scalar_mul(&c.modulus(0)).is_zero());
    }

    #[test]
    fn circ_examples() {
        let c = ctx(1, 1, 1);
        let u = elem(c, "110");
        let v = elem(c, "100");
        assert_eq!(u.circ(&v).unwrap(), BinPoly::one());

        let c = ctx(3, 4, 2);
        let u = RingElement::new(c, p(&[0, 2]), BinPoly::zero(), BinPoly::zero());
        let v = RingElement::new(c, BinPoly::zero(), p(&[1, 3]), BinPoly::zero());
        assert!(u.circ(&v).unwrap().is_zero());

        let c = ctx(2, 3, 1);
        let u = elem(c, "110101");
        let v = elem(c, "011100");
        assert_eq!(u.circ(&v).unwrap(), shift_dot_oracle(&u, &v));
    }

    #[test]
    fn circ_matches_shift_dot_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let c = ctx(rng.gen_range(1..7), rng.gen_range(1..7), rng.gen_range(1..7));
            let u = random_elem(c, &mut rng);
            let v = random_elem(c, &mut rng);
            assert_eq!(u.circ(&v).unwrap(), shift_dot_oracle(&u, &v), "{c} {u} {v}");
        }
    }

    #[test]
    fn mixed_contexts_are_rejected() {
        let a = RingElement::zero(ctx(1, 2, 3));
        let b = RingElement::zero(ctx(3, 2, 1));
        assert!(matches!(a.circ(&b), Err(RingError::ContextMismatch(..))));
        assert!(a.orthogonal_to_all_shifts(&b).is_err());
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn orthogonality_examples() {
        let c = ctx(1, 1, 1);
        let zero = RingElement::zero(c);
        let v = elem(c, "111");
        assert!(zero.orthogonal_to_all_shifts(&v).unwrap());
        let u = elem(c, "110");
        assert!(u.orthogonal_to_all_shifts(&u).unwrap());
    }

    #[test]
    fn circ_is_bilinear() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let c = ctx(rng.gen_range(1..7), rng.gen_range(1..7), rng.gen_range(1..7));
            let a = random_elem(c, &mut rng);
            let b = random_elem(c, &mut rng);
            let v = random_elem(c, &mut rng);
            let lambda = BinPoly::from_u64(rng.gen_range(0..256));
            let lhs = a.add(&b).unwrap().circ(&v).unwrap();
            assert_eq!(lhs, &a.circ(&v).unwrap() + &b.circ(&v).unwrap());
            let scaled = a.scalar_mul(&lambda).circ(&v).unwrap();
            assert_eq!(scaled, (&lambda * &a.circ(&v).unwrap()).reduce_mod_xn_minus_1(c.m()));
        }
    }
}
