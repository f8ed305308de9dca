//! Triple cyclic codes: `Z2[x]`-submodules of `R_{r,s,t}` generated by
//! `(F1|0|0)`, `(0|F2|0)` and `(G1|G2|G3)`.
//!
//! A zero block ideal is represented by its full modulus, so `F1 = x^r - 1`
//! means the code contains no nonzero `(a|0|0)`. This keeps every degree in
//! the dimension formula `d = r + s + t - deg F1 - deg F2 - deg G3` defined.

use std::fmt;

use thiserror::Error;

use crate::gf2poly::{BinPoly, PolyError};
use crate::linalg::EchelonBasis;
use crate::ring::{RingContext, RingElement, RingError, Word};

/// Default limit on the number of codewords any single enumeration may visit.
pub const DEFAULT_ENUM_CAP: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("generator triple is not canonical: {0}")]
    NotCanonical(String),
    #[error("degenerate generating set: {0}")]
    Degenerate(String),
    #[error("2^{dimension} codewords exceed the enumeration cap of {cap}")]
    CapExceeded { dimension: usize, cap: u64 },
    #[error("the zero code has no minimum distance")]
    ZeroCode,
    #[error("the span of the words is not invariant under the cyclic shift")]
    NotShiftClosed,
    #[error(
        "code is triple cyclic but not generated by any (F1|0|0), (0|F2|0), (G1|G2|G3): \
         its third-block kernel has dimension {kernel}, the pure block ideals only {pure}"
    )]
    NotThreeGenerated { kernel: usize, pure: usize },
}

/// A generator triple `{(F1|0|0), (0|F2|0), (G1|G2|G3)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodeSpec {
    ctx: RingContext,
    f1: BinPoly,
    f2: BinPoly,
    g1: BinPoly,
    g2: BinPoly,
    g3: BinPoly,
    canonical: bool,
}

impl CodeSpec {
    /// Arbitrary generators, taken as given.
    pub fn raw(
        ctx: RingContext,
        f1: BinPoly,
        f2: BinPoly,
        g1: BinPoly,
        g2: BinPoly,
        g3: BinPoly,
    ) -> Self {
        Self {
            ctx,
            f1,
            f2,
            g1,
            g2,
            g3,
            canonical: false,
        }
    }

    /// Generators that must already satisfy every canonical-form invariant.
    pub fn canonical(
        ctx: RingContext,
        f1: BinPoly,
        f2: BinPoly,
        g1: BinPoly,
        g2: BinPoly,
        g3: BinPoly,
    ) -> Result<Self, CodeError> {
        let mut spec = Self::raw(ctx, f1, f2, g1, g2, g3);
        if let Some(why) = spec.canonical_violation() {
            return Err(CodeError::NotCanonical(why));
        }
        spec.canonical = true;
        Ok(spec)
    }

    pub fn ctx(&self) -> RingContext {
        self.ctx
    }

    pub fn f1(&self) -> &BinPoly {
        &self.f1
    }

    pub fn f2(&self) -> &BinPoly {
        &self.f2
    }

    pub fn g1(&self) -> &BinPoly {
        &self.g1
    }

    pub fn g2(&self) -> &BinPoly {
        &self.g2
    }

    pub fn g3(&self) -> &BinPoly {
        &self.g3
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// The three generators as ring elements.
    pub fn generators(&self) -> [RingElement; 3] {
        let z = BinPoly::zero;
        [
            RingElement::new(self.ctx, self.f1.clone(), z(), z()),
            RingElement::new(self.ctx, z(), self.f2.clone(), z()),
            RingElement::new(self.ctx, self.g1.clone(), self.g2.clone(), self.g3.clone()),
        ]
    }

    /// `r + s + t - deg F1 - deg F2 - deg G3`. Meaningful for canonical specs.
    pub fn dimension_formula(&self) -> usize {
        self.ctx.n() - self.f1.deg_or_zero() - self.f2.deg_or_zero() - self.g3.deg_or_zero()
    }

    /// The `Z2`-span of every shift of the three generators, i.e. the code
    /// they generate, whatever shape the generators have.
    pub fn generated_span(&self) -> EchelonBasis {
        let mut basis = EchelonBasis::new();
        for g in self.generators() {
            let mut w = g.to_word();
            for _ in 0..self.ctx.m() {
                basis.insert(w.0);
                w = self.ctx.shift_word(w);
            }
        }
        basis
    }

    /// First broken canonical-form invariant, if any.
    fn canonical_violation(&self) -> Option<String> {
        if let Some(why) = self.divisor_violation() {
            return Some(why);
        }
        let [mr, ms, _] = self.ctx.moduli();
        for (name, g, f, m) in [("G1", &self.g1, &self.f1, &mr), ("G2", &self.g2, &self.f2, &ms)] {
            if g.is_zero() {
                continue;
            }
            if g.degree() >= m.degree() {
                return Some(format!("{name} = {g} is not reduced modulo {m}"));
            }
            if g.degree() >= f.degree() {
                return Some(format!("{name} = {g} is not reduced modulo {f}"));
            }
        }
        None
    }

    /// Divisor invariants: `F1`, `F2`, `G3` divide their moduli and
    /// `F_i | ((x^t-1)/G3)·G_i`.
    fn divisor_violation(&self) -> Option<String> {
        let [mr, ms, mt] = self.ctx.moduli();
        for (name, f, m) in [("F1", &self.f1, &mr), ("F2", &self.f2, &ms), ("G3", &self.g3, &mt)] {
            if f.is_zero() || !f.divides(m) {
                return Some(format!("{name} = {f} does not divide {m}"));
            }
        }
        let h = mt.div_exact(&self.g3).expect("G3 divides x^t - 1");
        for (name, g, f) in [("G1", &self.g1, &self.f1), ("G2", &self.g2, &self.f2)] {
            if !f.divides(&(&h * g)) {
                return Some(format!("{f} does not divide ((x^t-1)/G3)·{name}"));
            }
        }
        None
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} <({}|0|0), (0|{}|0), ({}|{}|{})>",
            self.ctx, self.f1, self.f2, self.g1, self.g2, self.g3
        )
    }
}

/// Lowers the degree of `g` to at most `deg f` by cancelling leading terms
/// with shifts of `f`, then drops it entirely when `f | g`.
fn reduce_against(g: &BinPoly, f: &BinPoly) -> BinPoly {
    let mut g = g.clone();
    let Some(df) = f.deg() else { return g };
    while let Some(dg) = g.deg() {
        if dg <= df {
            break;
        }
        g += &f.shl(dg - df);
    }
    if f.divides(&g) {
        BinPoly::zero()
    } else {
        g
    }
}

/// A unit `w` of `Z2[x]/(x^t-1)` with `w·g ≡ gcd(g, x^t-1)`, if one exists.
fn normalizing_unit(g: &BinPoly, mt: &BinPoly) -> Option<(BinPoly, BinPoly)> {
    let d = BinPoly::gcd(g, mt).ok()?;
    let h = mt.div_exact(&d)?;
    let w0 = g.div_exact(&d)?.mod_inverse(&h).ok()?;
    // Any w0 + j·h works modulo x^t-1; look for one coprime to it.
    let tries = 1u64 << d.deg_or_zero().min(16);
    (0..tries)
        .map(|j| &w0 + &(&BinPoly::from_u64(j) * &h))
        .find(|w| BinPoly::gcd(w, mt).is_ok_and(|c| c.is_one()))
        .map(|w| (w, d))
}

/// Rewrites a generator triple into the reduced form without changing the
/// submodule it generates.
///
/// `F1`, `F2` become the divisors `gcd(F, x^len - 1)` generating the same
/// ideals. When `G3` is a unit multiple of a divisor of `x^t - 1` the whole
/// third generator is rescaled by that unit's inverse. Finally `G1` and `G2`
/// are cut down to `deg G_i <= deg F_i`, and to zero when `F_i | G_i`.
///
/// If the triple then satisfies `F_i | ((x^t-1)/G3)·G_i`, `G1` and `G2` are
/// replaced by their remainders mod `F1`, `F2` (which makes the form unique)
/// and the result is flagged canonical. Otherwise the generators do not
/// describe the code's structure; they are returned unflagged and
/// [`structure_recover`] on the generated span is the way forward.
pub fn canonicalize(raw: &CodeSpec) -> CodeSpec {
    let ctx = raw.ctx;
    let [mr, ms, mt] = ctx.moduli();
    let f1 = BinPoly::gcd(&raw.f1, &mr).expect("modulus is nonzero");
    let f2 = BinPoly::gcd(&raw.f2, &ms).expect("modulus is nonzero");
    let mut g1 = raw.g1.reduce_mod_xn_minus_1(ctx.r());
    let mut g2 = raw.g2.reduce_mod_xn_minus_1(ctx.s());
    let mut g3 = raw.g3.reduce_mod_xn_minus_1(ctx.t());
    if g3.is_zero() {
        g3 = mt.clone();
    } else if !g3.divides(&mt) {
        if let Some((w, d)) = normalizing_unit(&g3, &mt) {
            g1 = (&g1 * &w).reduce_mod_xn_minus_1(ctx.r());
            g2 = (&g2 * &w).reduce_mod_xn_minus_1(ctx.s());
            g3 = d;
        }
    }
    let g1 = reduce_against(&g1, &f1);
    let g2 = reduce_against(&g2, &f2);
    let mut spec = CodeSpec::raw(ctx, f1, f2, g1, g2, g3);
    if spec.divisor_violation().is_none() {
        spec.g1 = spec.g1.rem(&spec.f1).expect("F1 is nonzero");
        spec.g2 = spec.g2.rem(&spec.f2).expect("F2 is nonzero");
        spec.canonical = spec.canonical_violation().is_none();
    }
    spec
}

/// A code given by a basis, with the generator triple it came from (if any).
#[derive(Debug, Clone)]
pub struct CodeBody {
    ctx: RingContext,
    spec: Option<CodeSpec>,
    generators: Vec<Word>,
    echelon: EchelonBasis,
}

impl CodeBody {
    /// The code spanned by `words` and all their shifts.
    pub fn from_words(ctx: RingContext, words: impl IntoIterator<Item = Word>) -> Self {
        let mut echelon = EchelonBasis::new();
        for w in words {
            let mut cur = w;
            for _ in 0..ctx.m() {
                if !echelon.insert(cur.0) && cur == w {
                    break;
                }
                cur = ctx.shift_word(cur);
            }
        }
        let generators = echelon.rows().iter().map(|&v| Word(v)).collect();
        Self {
            ctx,
            spec: None,
            generators,
            echelon,
        }
    }

    pub(crate) fn from_basis(ctx: RingContext, echelon: EchelonBasis) -> Self {
        let generators = echelon.rows().iter().map(|&v| Word(v)).collect();
        Self {
            ctx,
            spec: None,
            generators,
            echelon,
        }
    }

    pub fn ctx(&self) -> RingContext {
        self.ctx
    }

    pub fn spec(&self) -> Option<&CodeSpec> {
        self.spec.as_ref()
    }

    /// The generating set: `S1 ∪ S2 ∪ S3` for bodies built from a spec.
    pub fn basis(&self) -> &[Word] {
        &self.generators
    }

    pub fn echelon(&self) -> &EchelonBasis {
        &self.echelon
    }

    pub fn dimension(&self) -> usize {
        self.echelon.rank()
    }

    /// `log2 |C|`; see [`CodeBody::size`].
    pub fn size(&self) -> Option<u128> {
        1u128.checked_shl(self.dimension() as u32)
    }

    pub fn contains_word(&self, w: Word) -> bool {
        self.echelon.contains(w.0)
    }

    pub fn is_shift_closed(&self) -> bool {
        self.echelon
            .rows()
            .iter()
            .all(|&v| self.echelon.contains(self.ctx.shift_word(Word(v)).0))
    }

    fn require_spec(&self) -> Result<&CodeSpec, CodeError> {
        self.spec
            .as_ref()
            .filter(|s| s.canonical)
            .ok_or_else(|| CodeError::NotCanonical("code body has no canonical generator triple".into()))
    }
}

/// `S1 ∪ S2 ∪ S3`: the shifts `x^i * (F1|0|0)` for `i < r - deg F1`, the
/// analogous shifts of `(0|F2|0)` and `x^i * (G1|G2|G3)` for `i < t - deg G3`.
pub fn minimal_generating_set(spec: &CodeSpec) -> Result<CodeBody, CodeError> {
    if !spec.canonical {
        return Err(CodeError::NotCanonical(
            spec.canonical_violation().unwrap_or_else(|| "spec not marked canonical".into()),
        ));
    }
    let ctx = spec.ctx;
    let [e1, e2, e3] = spec.generators();
    let counts = [
        ctx.r() - spec.f1.deg_or_zero(),
        ctx.s() - spec.f2.deg_or_zero(),
        ctx.t() - spec.g3.deg_or_zero(),
    ];
    let mut generators = Vec::with_capacity(counts.iter().sum());
    let mut echelon = EchelonBasis::new();
    for (gen, count) in [e1, e2, e3].iter().zip(counts) {
        let mut w = gen.to_word();
        for i in 0..count {
            if !echelon.insert(w.0) {
                return Err(CodeError::Degenerate(format!(
                    "x^{i} * {gen} depends on the earlier generators"
                )));
            }
            generators.push(w);
            w = ctx.shift_word(w);
        }
    }
    let body = CodeBody {
        ctx,
        spec: Some(spec.clone()),
        generators,
        echelon,
    };
    if !body.is_shift_closed() {
        return Err(CodeError::Degenerate("span is not closed under the shift".into()));
    }
    Ok(body)
}

fn check_cap(dimension: usize, cap: u64) -> Result<(), CodeError> {
    match 1u64.checked_shl(dimension as u32) {
        Some(size) if dimension < 64 && size <= cap => Ok(()),
        _ => Err(CodeError::CapExceeded { dimension, cap }),
    }
}

/// All `2^d` codewords, zero first.
pub fn enumerate(body: &CodeBody, cap: u64) -> Result<impl Iterator<Item = Word> + '_, CodeError> {
    check_cap(body.dimension(), cap)?;
    Ok(body.echelon.span().map(Word))
}

/// Membership of a bit vector of length `r + s + t`.
pub fn contains(body: &CodeBody, bits: &[bool]) -> Result<bool, CodeError> {
    Ok(body.contains_word(body.ctx.word_from_bits(bits)?))
}

/// Generators of `C_r`, `C_s`, `C_t`: `gcd(F1, G1)`, `gcd(F2, G2)` and `G3`.
pub fn projections(body: &CodeBody) -> Result<(BinPoly, BinPoly, BinPoly), CodeError> {
    let spec = body.require_spec()?;
    Ok((
        BinPoly::gcd(&spec.f1, &spec.g1)?,
        BinPoly::gcd(&spec.f2, &spec.g2)?,
        spec.g3.clone(),
    ))
}

/// Generator of the cyclic code formed by block `b` of every codeword,
/// computed from the basis rather than from a generator triple.
pub fn observed_projection(body: &CodeBody, b: usize) -> BinPoly {
    let ctx = body.ctx;
    let modulus = ctx.modulus(b);
    let blocks: Vec<BinPoly> = body
        .echelon
        .rows()
        .iter()
        .map(|&v| BinPoly::from_u128(ctx.block(Word(v), b)))
        .collect();
    BinPoly::gcd_all(std::iter::once(&modulus).chain(&blocks)).expect("modulus is nonzero")
}

/// For a canonical triple, separable exactly when `G1 = G2 = 0`.
pub fn is_separable(body: &CodeBody) -> Result<bool, CodeError> {
    let spec = body.require_spec()?;
    Ok(spec.g1.is_zero() && spec.g2.is_zero())
}

/// Minimum Hamming weight over the nonzero codewords.
pub fn min_distance(body: &CodeBody, cap: u64) -> Result<u32, CodeError> {
    if body.dimension() == 0 {
        return Err(CodeError::ZeroCode);
    }
    Ok(enumerate(body, cap)?
        .skip(1)
        .map(Word::weight)
        .min()
        .expect("nonzero code has a nonzero word"))
}

/// The block ideals of a triple cyclic code, whether or not the code is
/// generated by a single triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockStructure {
    pub ctx: RingContext,
    /// Generator of `{a : (a|0|0) ∈ C}`.
    pub f1: BinPoly,
    /// Generator of `{b : (0|b|0) ∈ C}`.
    pub f2: BinPoly,
    /// Blocks of a codeword whose third block is `g3`, reduced mod `f1`, `f2`.
    pub g1: BinPoly,
    pub g2: BinPoly,
    /// Generator of the third projection.
    pub g3: BinPoly,
    pub dimension: usize,
    /// Dimension of the codewords with zero third block.
    pub kernel_dimension: usize,
    /// Whether `(f1|0|0), (0|f2|0), (g1|g2|g3)` generate the whole code.
    pub three_generated: bool,
}

impl BlockStructure {
    /// The triple as a spec, flagged canonical when its invariants hold.
    pub fn to_spec(&self) -> CodeSpec {
        let mut spec = CodeSpec::raw(
            self.ctx,
            self.f1.clone(),
            self.f2.clone(),
            self.g1.clone(),
            self.g2.clone(),
            self.g3.clone(),
        );
        spec.canonical = self.three_generated && spec.canonical_violation().is_none();
        spec
    }
}

/// Reads off the block ideals of the code spanned by `words`.
pub fn block_structure(
    ctx: RingContext,
    words: impl IntoIterator<Item = Word>,
) -> Result<BlockStructure, CodeError> {
    let echelon: EchelonBasis = words.into_iter().map(|w| w.0).collect();
    block_structure_of(ctx, &echelon)
}

pub(crate) fn block_structure_of(ctx: RingContext, echelon: &EchelonBasis) -> Result<BlockStructure, CodeError> {
    let body = CodeBody::from_basis(ctx, echelon.clone());
    if !body.is_shift_closed() {
        return Err(CodeError::NotShiftClosed);
    }
    let [mr, ms, mt] = ctx.moduli();
    let [r, s, _] = ctx.lens();
    let block_polys = |basis: &EchelonBasis, b: usize| -> Vec<BinPoly> {
        basis
            .rows()
            .iter()
            .map(|&v| BinPoly::from_u128(ctx.block(Word(v), b)))
            .collect()
    };
    let ideal = |modulus: &BinPoly, polys: Vec<BinPoly>| {
        BinPoly::gcd_all(std::iter::once(modulus).chain(&polys)).expect("modulus is nonzero")
    };

    let g3 = ideal(&mt, block_polys(echelon, 2));
    let f1 = ideal(&mr, block_polys(&echelon.restricted_to(ctx.mask(0)), 0));
    let f2 = ideal(&ms, block_polys(&echelon.restricted_to(ctx.mask(1)), 1));
    let kernel_dimension = echelon.rows_below((r + s) as u32).count();
    let pure = (r - f1.deg_or_zero()) + (s - f2.deg_or_zero());

    // A codeword whose third block is exactly g3. Rows with a pivot in the
    // third block are echelon there too, so clearing pivots one by one works.
    let mut preimage = 0u128;
    if g3 != mt {
        let target = ctx.word_from_blocks([0, 0, g3.to_u128().expect("block fits")]).0;
        for &row in echelon.rows() {
            let pivot = 127 - row.leading_zeros();
            if pivot as usize >= r + s && (preimage ^ target) >> pivot & 1 == 1 {
                preimage ^= row;
            }
        }
        debug_assert_eq!(preimage & ctx.mask(2), target);
    }
    let g1 = BinPoly::from_u128(ctx.block(Word(preimage), 0)).rem(&f1)?;
    let g2 = BinPoly::from_u128(ctx.block(Word(preimage), 1)).rem(&f2)?;
    Ok(BlockStructure {
        ctx,
        f1,
        f2,
        g1,
        g2,
        g3,
        dimension: echelon.rank(),
        kernel_dimension,
        three_generated: kernel_dimension == pure,
    })
}

/// Recovers the canonical generator triple of the code spanned by `words`.
///
/// Fails with [`CodeError::NotShiftClosed`] when the span is not a triple
/// cyclic code and with [`CodeError::NotThreeGenerated`] when the code's
/// third-block kernel is not the product of its pure block ideals, in which
/// case no generator triple of this shape describes it.
pub fn structure_recover(
    ctx: RingContext,
    words: impl IntoIterator<Item = Word>,
) -> Result<CodeSpec, CodeError> {
    let bs = block_structure(ctx, words)?;
    if !bs.three_generated {
        return Err(CodeError::NotThreeGenerated {
            kernel: bs.kernel_dimension,
            pure: (ctx.r() - bs.f1.deg_or_zero()) + (ctx.s() - bs.f2.deg_or_zero()),
        });
    }
    let spec = bs.to_spec();
    debug_assert!(spec.canonical, "recovered triple {spec} violates {:?}", spec.canonical_violation());
    Ok(spec)
}

/// Rows of the minimal generating set as a `d × (r+s+t)` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    pub columns: usize,
    pub rows: Vec<Word>,
}

impl GeneratorMatrix {
    pub fn rank(&self) -> usize {
        self.rows.iter().map(|w| w.0).collect::<EchelonBasis>().rank()
    }

    pub fn row_bits(&self, i: usize) -> Vec<bool> {
        (0..self.columns).map(|c| self.rows[i].0 >> c & 1 == 1).collect()
    }
}

pub fn generator_matrix(body: &CodeBody) -> Result<GeneratorMatrix, CodeError> {
    body.require_spec()?;
    Ok(GeneratorMatrix {
        columns: body.ctx.n(),
        rows: body.generators.clone(),
    })
}

/// Everything `analyze` reports about a generator triple.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub input: CodeSpec,
    pub canonical: CodeSpec,
    /// Triple recovered from the generated code; `None` when the code is
    /// not three-generated.
    pub recovered: Option<CodeSpec>,
    pub body: CodeBody,
    pub min_distance: Option<u32>,
    pub projections: [BinPoly; 3],
    pub separable: bool,
}

/// Canonicalizes `raw`, builds the code it generates and measures it.
/// Distances needing more than `cap` codewords are left out.
pub fn analyze(raw: &CodeSpec, cap: u64) -> Result<Analysis, CodeError> {
    let canonical = canonicalize(raw);
    let (recovered, body) = if canonical.canonical {
        (Some(canonical.clone()), minimal_generating_set(&canonical)?)
    } else {
        let span = raw.generated_span();
        let bs = block_structure_of(raw.ctx, &span)?;
        let spec = bs.three_generated.then(|| bs.to_spec());
        let body = match &spec {
            Some(s) => minimal_generating_set(s)?,
            None => CodeBody::from_basis(raw.ctx, span),
        };
        (spec, body)
    };
    let min_distance = match min_distance(&body, cap) {
        Ok(d) => Some(d),
        Err(CodeError::ZeroCode | CodeError::CapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let projections = match projections(&body) {
        Ok((a, b, c)) => [a, b, c],
        Err(_) => [0, 1, 2].map(|b| observed_projection(&body, b)),
    };
    let separable = match is_separable(&body) {
        Ok(sep) => sep,
        Err(_) => {
            let ctx = body.ctx;
            let proj_dim: usize = (0..3).map(|b| ctx.lens()[b] - projections[b].deg_or_zero()).sum();
            proj_dim == body.dimension()
        }
    };
    Ok(Analysis {
        input: raw.clone(),
        canonical,
        recovered,
        body,
        min_distance,
        projections,
        separable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{BTreeSet, HashSet};

    fn ctx(r: usize, s: usize, t: usize) -> RingContext {
        RingContext::new(r, s, t).unwrap()
    }

    fn p(exps: &[usize]) -> BinPoly {
        BinPoly::from_exponents(exps)
    }

    /// Closure of the generators under shift and addition, by plain set
    /// saturation.
    fn closure_oracle(ctx: RingContext, gens: &[Word]) -> HashSet<Word> {
        let mut set: HashSet<Word> = HashSet::from([Word::ZERO]);
        let mut frontier: Vec<Word> = gens.to_vec();
        while let Some(w) = frontier.pop() {
            if set.contains(&w) {
                continue;
            }
            let existing: Vec<Word> = set.iter().copied().collect();
            set.insert(w);
            frontier.push(ctx.shift_word(w));
            for e in existing {
                let sum = e ^ w;
                if !set.contains(&sum) {
                    frontier.push(sum);
                }
            }
        }
        set
    }

    fn spec_words(spec: &CodeSpec) -> Vec<Word> {
        spec.generators().iter().map(RingElement::to_word).collect()
    }

    fn worked_example(r: usize, s: usize, t: usize, g3: BinPoly) -> CodeSpec {
        CodeSpec::raw(
            ctx(r, s, t),
            p(&[0, 2]),
            p(&[1, 5]),
            p(&[3, 4, 5]),
            p(&[2, 6]),
            g3,
        )
    }

    #[test]
    fn worked_example_reduction() {
        let c = canonicalize(&worked_example(6, 6, 1, BinPoly::one()));
        assert_eq!(c.g1(), &p(&[2]));
        assert!(c.g2().is_zero());
        assert_eq!(c.f1(), &p(&[0, 2]));
        assert_eq!(c.f2(), &p(&[0, 2]));
    }

    #[test]
    fn canonicalize_preserves_the_code() {
        for (r, s, t) in [(6, 6, 1), (6, 6, 2), (4, 6, 3), (2, 3, 2)] {
            for g3 in 0..(1u64 << (t + 1)) {
                let raw = worked_example(r, s, t, BinPoly::from_u64(g3));
                let c = canonicalize(&raw);
                let lhs = closure_oracle(raw.ctx(), &spec_words(&raw));
                let rhs = closure_oracle(c.ctx(), &spec_words(&c));
                assert_eq!(lhs, rhs, "{raw} vs {c}");
            }
        }
    }

    #[test]
    fn divisible_g1_is_dropped() {
        let c3 = ctx(3, 3, 3);
        let f = p(&[0, 1]);
        for lambda in 1..16u64 {
            let g1 = &BinPoly::from_u64(lambda) * &f;
            let raw = CodeSpec::raw(c3, f.clone(), f.clone(), g1, BinPoly::zero(), p(&[0, 1, 2]));
            assert!(canonicalize(&raw).g1().is_zero(), "lambda={lambda}");
        }
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let c = ctx(3, 2, 3);
        let spec = CodeSpec::canonical(c, p(&[0, 1]), p(&[0, 2]), p(&[]), p(&[0, 1]), p(&[0, 1, 2])).unwrap();
        assert_eq!(canonicalize(&spec), spec);
        let again = canonicalize(&canonicalize(&worked_example(6, 6, 1, BinPoly::one())));
        assert_eq!(again, canonicalize(&worked_example(6, 6, 1, BinPoly::one())));
    }

    #[test]
    fn running_example_basis() {
        let c = ctx(2, 2, 2);
        let f = p(&[0, 1]);
        let spec = CodeSpec::canonical(c, f.clone(), f.clone(), BinPoly::zero(), BinPoly::zero(), f).unwrap();
        let body = minimal_generating_set(&spec).unwrap();
        assert_eq!(body.dimension(), 3);
        let rows: Vec<String> = body.basis().iter().map(|&w| c.format_word(w)).collect();
        assert_eq!(rows, ["11|00|00", "00|11|00", "00|00|11"]);
        assert_eq!(enumerate(&body, DEFAULT_ENUM_CAP).unwrap().count(), 8);
        assert_eq!(min_distance(&body, DEFAULT_ENUM_CAP).unwrap(), 2);
        let gm = generator_matrix(&body).unwrap();
        assert_eq!(gm.rank(), 3);
        assert_eq!(gm.row_bits(0), vec![true, true, false, false, false, false]);
    }

    #[test]
    fn zero_and_full_codes() {
        let c = ctx(3, 2, 4);
        let [mr, ms, mt] = c.moduli();
        let zero = CodeSpec::canonical(c, mr, ms, BinPoly::zero(), BinPoly::zero(), mt).unwrap();
        let body = minimal_generating_set(&zero).unwrap();
        assert_eq!(body.dimension(), 0);
        assert_eq!(enumerate(&body, 1).unwrap().collect::<Vec<_>>(), vec![Word::ZERO]);
        assert_eq!(min_distance(&body, DEFAULT_ENUM_CAP), Err(CodeError::ZeroCode));
        assert!(generator_matrix(&body).unwrap().rows.is_empty());

        let one = BinPoly::one;
        let full = CodeSpec::canonical(c, one(), one(), BinPoly::zero(), BinPoly::zero(), one()).unwrap();
        let body = minimal_generating_set(&full).unwrap();
        assert_eq!(body.dimension(), 9);
        assert_eq!(min_distance(&body, DEFAULT_ENUM_CAP).unwrap(), 1);
    }

    #[test]
    fn repetition_block_distance() {
        let c = ctx(3, 2, 2);
        let spec = CodeSpec::canonical(c, p(&[0, 1, 2]), c.modulus(1), BinPoly::zero(), BinPoly::zero(), c.modulus(2)).unwrap();
        let body = minimal_generating_set(&spec).unwrap();
        assert_eq!(body.dimension(), 1);
        assert_eq!(min_distance(&body, DEFAULT_ENUM_CAP).unwrap(), 3);
    }

    #[test]
    fn enumeration_cap() {
        let c = ctx(4, 4, 4);
        let one = BinPoly::one;
        let full = CodeSpec::canonical(c, one(), one(), BinPoly::zero(), BinPoly::zero(), one()).unwrap();
        let body = minimal_generating_set(&full).unwrap();
        assert!(matches!(enumerate(&body, 1 << 11), Err(CodeError::CapExceeded { dimension: 12, .. })));
        assert!(matches!(min_distance(&body, 1000), Err(CodeError::CapExceeded { .. })));
    }

    #[test]
    fn membership() {
        let c = ctx(2, 2, 2);
        let f = p(&[0, 1]);
        let spec = CodeSpec::canonical(c, f.clone(), f.clone(), BinPoly::zero(), BinPoly::zero(), f).unwrap();
        let body = minimal_generating_set(&spec).unwrap();
        assert!(contains(&body, &[false; 6]).unwrap());
        for w in body.basis() {
            assert!(body.contains_word(*w));
        }
        assert!(!contains(&body, &[true, false, false, false, false, false]).unwrap());
        assert!(contains(&body, &[true; 5]).is_err());
        let span: HashSet<Word> = closure_oracle(c, body.basis());
        for v in 0..64u128 {
            assert_eq!(body.contains_word(Word(v)), span.contains(&Word(v)));
        }
    }

    #[test]
    fn projections_match_formula_and_observation() {
        let c = ctx(6, 3, 2);
        // F1 = 1+x^2 and (x^2-1)/G3 = 1+x: 1+x^2 | (1+x)·G1 requires 1+x | G1.
        let spec = CodeSpec::canonical(c, p(&[0, 2]), p(&[0, 1]), p(&[0, 1]), p(&[0]), p(&[0, 1])).unwrap();
        let body = minimal_generating_set(&spec).unwrap();
        let (pr, ps, pt) = projections(&body).unwrap();
        assert_eq!(pr, p(&[0, 1]));
        assert_eq!(ps, BinPoly::one());
        assert_eq!(pt, p(&[0, 1]));
        for (b, expected) in [pr, ps, pt].iter().enumerate() {
            assert_eq!(&observed_projection(&body, b), expected);
        }
        assert!(!is_separable(&body).unwrap());
    }

    #[test]
    fn invalid_triples_are_not_canonical() {
        let c = ctx(3, 3, 1);
        // 1+x+x^2 cannot divide ((x-1)/1)·1.
        let err = CodeSpec::canonical(c, p(&[0, 1, 2]), p(&[0, 1, 2]), p(&[0]), BinPoly::zero(), BinPoly::one());
        assert!(matches!(err, Err(CodeError::NotCanonical(_))));
        let err = CodeSpec::canonical(c, p(&[0, 2]), p(&[0, 1]), BinPoly::zero(), BinPoly::zero(), BinPoly::one());
        assert!(matches!(err, Err(CodeError::NotCanonical(_))));
        let raw = CodeSpec::raw(c, p(&[0, 1]), p(&[0, 1]), BinPoly::zero(), BinPoly::zero(), BinPoly::one());
        assert!(matches!(minimal_generating_set(&raw), Err(CodeError::NotCanonical(_))));
    }

    #[test]
    fn recover_trivial_codes() {
        let c = ctx(3, 4, 2);
        let [mr, ms, mt] = c.moduli();
        let zero = structure_recover(c, [Word::ZERO]).unwrap();
        assert_eq!(
            (zero.f1(), zero.f2(), zero.g1(), zero.g2(), zero.g3()),
            (&mr, &ms, &BinPoly::zero(), &BinPoly::zero(), &mt)
        );
        let all = structure_recover(c, (0..c.n()).map(|i| Word(1 << i))).unwrap();
        let one = BinPoly::one();
        assert_eq!(
            (all.f1(), all.f2(), all.g1(), all.g2(), all.g3()),
            (&one, &one, &BinPoly::zero(), &BinPoly::zero(), &one)
        );
    }

    #[test]
    fn recover_rejects_non_cyclic_spans() {
        let c = ctx(3, 1, 1);
        assert_eq!(structure_recover(c, [Word(0b1)]), Err(CodeError::NotShiftClosed));
    }

    #[test]
    fn recover_flags_codes_without_a_generator_triple() {
        // {000, 110, 001, 111} is shift-invariant but its kernel {000, 110}
        // is not a product of block ideals.
        let c = ctx(1, 1, 1);
        let words = [0b000, 0b011, 0b100, 0b111].map(Word);
        assert_eq!(
            structure_recover(c, words),
            Err(CodeError::NotThreeGenerated { kernel: 1, pure: 0 })
        );
        let bs = block_structure(c, words).unwrap();
        assert!(!bs.three_generated);
        assert_eq!(bs.dimension, 2);
    }

    #[test]
    fn recover_round_trips_small_exhaustive() {
        for (r, s, t) in [(1, 1, 1), (2, 1, 2), (3, 2, 1), (2, 3, 3), (4, 2, 2)] {
            let c = ctx(r, s, t);
            let mut seen = BTreeSet::new();
            for f1 in crate::gf2poly::divisors_of_xn_minus_1(r).unwrap() {
                for f2 in crate::gf2poly::divisors_of_xn_minus_1(s).unwrap() {
                    for g3 in crate::gf2poly::divisors_of_xn_minus_1(t).unwrap() {
                        for g1 in 0..(1u64 << r) {
                            for g2 in 0..(1u64 << s) {
                                let Ok(spec) = CodeSpec::canonical(c, f1.clone(), f2.clone(), BinPoly::from_u64(g1), BinPoly::from_u64(g2), g3.clone()) else {
                                    continue;
                                };
                                let body = minimal_generating_set(&spec).unwrap();
                                let oracle = closure_oracle(c, &spec_words(&spec));
                                assert_eq!(oracle.len() as u128, body.size().unwrap(), "{spec}");
                                let words: Vec<Word> = enumerate(&body, DEFAULT_ENUM_CAP).unwrap().collect();
                                assert_eq!(structure_recover(c, words).unwrap(), spec);
                                seen.insert(body.dimension());
                            }
                        }
                    }
                }
            }
            assert!(seen.len() > 1);
        }
    }

    #[test]
    fn analyze_falls_back_to_the_generated_code() {
        let a = analyze(&worked_example(6, 6, 1, BinPoly::one()), DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(a.canonical.g1(), &p(&[2]));
        assert!(!a.canonical.is_canonical());
        let rec = a.recovered.as_ref().unwrap();
        // (x-1)·(G1|G2|1) lands in the kernel and enlarges the first ideal.
        assert_eq!(rec.f1(), &p(&[0, 1]));
        assert_eq!(rec.g1(), &p(&[0]));
        let oracle = closure_oracle(rec.ctx(), &spec_words(&worked_example(6, 6, 1, BinPoly::one())));
        assert_eq!(oracle.len() as u128, a.body.size().unwrap());
    }

    #[test]
    fn analyze_handles_codes_without_a_triple() {
        let c = ctx(1, 1, 1);
        let raw = CodeSpec::raw(c, BinPoly::zero(), BinPoly::zero(), p(&[0]), p(&[0]), BinPoly::zero());
        let a = analyze(&raw, DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(a.body.dimension(), 1);
        assert!(a.recovered.is_none());
        assert_eq!(a.min_distance, Some(2));
        assert!(!a.separable);
    }
}
