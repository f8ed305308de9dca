//! The verification sweep: every legal generator triple over small contexts,
//! each checked against brute-force ground truth.
//!
//! Contexts are visited in `(r, s, t)` order and specs in sorted
//! `(F1, F2, G3, G1, G2)` order. Randomness is drawn from generators seeded
//! by the sweep seed mixed with the identity of the context or spec being
//! checked, so results do not depend on scheduling.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{
    block_structure, canonicalize, enumerate, generator_matrix, is_separable, minimal_generating_set,
    observed_projection, projections, structure_recover, CodeBody, CodeSpec, DEFAULT_ENUM_CAP,
};
use crate::dual::{dual_spec, Check, Verdict};
use crate::gf2poly::{divisors_of_xn_minus_1_capped, BinPoly, DEFAULT_DIVISOR_CAP};
use crate::linalg::EchelonBasis;
use crate::report::{SpecJson, Witness};
use crate::ring::{RingContext, RingElement, Word};

/// Failures recorded per check id; the tallies still count all of them.
pub const WITNESS_LIMIT: usize = 10;
/// Largest code length whose codewords are tracked in a bitset.
const BITSET_MAX_N: usize = 24;
/// Contexts up to this length get every pair checked for the pairing law.
const EXHAUSTIVE_PAIRS_MAX_N: usize = 9;
const RANDOM_PAIRS: usize = 10_000;
const RANDOM_TRIALS: usize = 200;
const RANDOM_CODES: usize = 20;

/// How many `(G1, G2)` pairs to take per `(F1, F2, G3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GSample {
    Count(usize),
    Exhaustive,
}

impl Default for GSample {
    fn default() -> Self {
        GSample::Count(16)
    }
}

impl fmt::Display for GSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GSample::Count(n) => write!(f, "{n}"),
            GSample::Exhaustive => f.write_str("exhaustive"),
        }
    }
}

impl FromStr for GSample {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "exhaustive" {
            return Ok(GSample::Exhaustive);
        }
        s.parse()
            .map(GSample::Count)
            .map_err(|_| format!("expected a count or \"exhaustive\", got {s:?}"))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum GSampleRepr {
    Count(usize),
    Word(String),
}

impl Serialize for GSample {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            GSample::Count(n) => GSampleRepr::Count(*n),
            GSample::Exhaustive => GSampleRepr::Word("exhaustive".into()),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for GSample {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        match GSampleRepr::deserialize(de)? {
            GSampleRepr::Count(n) => Ok(GSample::Count(n)),
            GSampleRepr::Word(w) => w.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub r_max: usize,
    pub s_max: usize,
    pub t_max: usize,
    pub g_sample: GSample,
    pub seed: u64,
    pub enum_cap: u64,
    pub fail_fast: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            r_max: 6,
            s_max: 6,
            t_max: 6,
            g_sample: GSample::default(),
            seed: 0,
            enum_cap: DEFAULT_ENUM_CAP,
            fail_fast: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("{name} must be at least 1")]
    EmptyRange { name: &'static str },
    #[error("{name} = {value} exceeds the divisor enumeration cap of {cap}")]
    CapExceeded { name: &'static str, value: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub holds: u64,
    pub fails: u64,
    #[serde(rename = "n/a")]
    pub not_applicable: u64,
}

impl Tally {
    fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Holds => self.holds += 1,
            Verdict::Fails => self.fails += 1,
            Verdict::NotApplicable => self.not_applicable += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub contexts: u64,
    pub specs: u64,
    /// Set when `fail_fast` cut the sweep short.
    pub stopped_early: bool,
    pub tallies: BTreeMap<String, Tally>,
    /// The first [`WITNESS_LIMIT`] failures of each check, in visit order.
    pub witnesses: Vec<Witness>,
    /// First occurrence of notable events that are not failures.
    pub examples: BTreeMap<String, Witness>,
}

impl SweepReport {
    pub fn failed(&self) -> bool {
        self.tallies.values().any(|t| t.fails > 0)
    }

    pub fn tally(&self, id: &str) -> Tally {
        self.tallies.get(id).copied().unwrap_or_default()
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn mix(seed: u64, parts: impl IntoIterator<Item = u64>) -> u64 {
    parts.into_iter().fold(splitmix(seed), |h, p| splitmix(h ^ splitmix(p)))
}

fn poly_parts(p: &BinPoly) -> [u64; 2] {
    let v = p.to_u128().unwrap_or(u128::MAX);
    [v as u64, (v >> 64) as u64]
}

fn spec_seed(seed: u64, spec: &CodeSpec) -> u64 {
    let ctx = spec.ctx();
    let head = [ctx.r() as u64, ctx.s() as u64, ctx.t() as u64];
    let polys = [spec.f1(), spec.f2(), spec.g3(), spec.g1(), spec.g2()];
    mix(seed, head.into_iter().chain(polys.iter().flat_map(|p| poly_parts(p))))
}

/// Every legal canonical triple over `ctx` with the given divisors, or a
/// seeded sample of `(G1, G2)` per divisor triple.
///
/// For fixed `F1`, `F2`, `G3` the legal `G1` are exactly the multiples
/// `λ·F1/gcd(F1, h)` with `deg λ < deg gcd(F1, h)`, `h = (x^t-1)/G3`, and the
/// same for `G2`.
pub fn sweep_specs(ctx: RingContext, divisors: [&[BinPoly]; 3], g_sample: GSample, seed: u64) -> Vec<CodeSpec> {
    let mt = ctx.modulus(2);
    let mut out = Vec::new();
    for f1 in divisors[0] {
        for f2 in divisors[1] {
            for g3 in divisors[2] {
                let h = mt.div_exact(g3).expect("divisor");
                let a1 = BinPoly::gcd(f1, &h).expect("nonzero");
                let a2 = BinPoly::gcd(f2, &h).expect("nonzero");
                let (k1, k2) = (a1.deg().unwrap_or(0), a2.deg().unwrap_or(0));
                let q1 = f1.div_exact(&a1).expect("gcd divides");
                let q2 = f2.div_exact(&a2).expect("gcd divides");
                let total = 1u64 << (k1 + k2);
                let picks: Vec<u64> = match g_sample {
                    GSample::Count(g) if (g as u64) < total => {
                        let triple = [ctx.r(), ctx.s(), ctx.t()].map(|v| v as u64);
                        let polys = [f1, f2, g3].map(poly_parts);
                        let key = triple.into_iter().chain(polys.into_iter().flatten());
                        let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, key));
                        index::sample(&mut rng, total as usize, g).into_iter().map(|i| i as u64).collect()
                    }
                    _ => (0..total).collect(),
                };
                let mut pairs: Vec<(BinPoly, BinPoly)> = picks
                    .into_iter()
                    .map(|i| {
                        let l1 = BinPoly::from_u64(i & ((1 << k1) - 1));
                        let l2 = BinPoly::from_u64(i >> k1);
                        (&l1 * &q1, &l2 * &q2)
                    })
                    .collect();
                pairs.sort();
                for (g1, g2) in pairs {
                    let spec = CodeSpec::canonical(ctx, f1.clone(), f2.clone(), g1, g2, g3.clone())
                        .expect("legal by construction");
                    out.push(spec);
                }
            }
        }
    }
    out
}

type Records = Vec<(&'static str, Check)>;

/// The outcome of one unit of sweep work.
struct ItemResult {
    spec: Option<CodeSpec>,
    checks: Records,
    examples: Vec<(String, String)>,
}

impl ItemResult {
    fn failed(&self) -> bool {
        self.checks.iter().any(|(_, c)| c.verdict == Verdict::Fails)
    }
}

fn random_word(ctx: RingContext, rng: &mut impl Rng) -> Word {
    Word(rng.gen::<u128>() & ctx.full_mask())
}

fn first_failure(mut cases: impl Iterator<Item = Option<String>>) -> Check {
    match cases.find_map(|c| c) {
        Some(detail) => Check::fails(detail),
        None => Check::holds(),
    }
}

/// Laws of the ring itself, plus the claim that every triple cyclic code
/// is generated by a single triple, tested on random codes.
fn context_checks(ctx: RingContext, seed: u64) -> Records {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, [0xC0, ctx.r() as u64, ctx.s() as u64, ctx.t() as u64]));
    let n = ctx.n();
    let elem = |w: Word| RingElement::from_word(ctx, w);
    let mut out = Records::new();

    let pairing = |u: Word, v: Word| {
        let (eu, ev) = (elem(u), elem(v));
        let circ_zero = eu.circ(&ev).expect("same context").is_zero();
        let orthogonal = eu.orthogonal_to_all_shifts(&ev).expect("same context");
        (circ_zero != orthogonal).then(|| {
            format!(
                "u = {}, v = {}: pairing zero = {circ_zero}, orthogonal to all shifts = {orthogonal}",
                ctx.format_word(u),
                ctx.format_word(v)
            )
        })
    };
    let p6 = if n <= EXHAUSTIVE_PAIRS_MAX_N {
        let all = 1u128 << n;
        first_failure((0..all).flat_map(|u| (0..all).map(move |v| (Word(u), Word(v)))).map(|(u, v)| pairing(u, v)))
    } else {
        let pairs: Vec<(Word, Word)> = (0..RANDOM_PAIRS)
            .map(|_| (random_word(ctx, &mut rng), random_word(ctx, &mut rng)))
            .collect();
        first_failure(pairs.into_iter().map(|(u, v)| pairing(u, v)))
    };
    out.push(("pairing-orthogonality", p6));

    for (id, b) in [("pairing-block-r", 0), ("pairing-block-s", 1), ("pairing-block-t", 2)] {
        let mut cases = Vec::with_capacity(RANDOM_TRIALS);
        for _ in 0..RANDOM_TRIALS {
            let mut u = random_word(ctx, &mut rng).0;
            let mut v = random_word(ctx, &mut rng).0;
            for c in (0..3).filter(|&c| c != b) {
                // Each other block vanishes on at least one side.
                match rng.gen_range(0..3) {
                    0 => u &= !ctx.mask(c),
                    1 => v &= !ctx.mask(c),
                    _ => {
                        u &= !ctx.mask(c);
                        v &= !ctx.mask(c);
                    }
                }
            }
            let (eu, ev) = (elem(Word(u)), elem(Word(v)));
            let circ_zero = eu.circ(&ev).expect("same context").is_zero();
            let block_zero = (eu.part(b) * &ev.part(b).reciprocal())
                .reduce_mod_xn_minus_1(ctx.lens()[b])
                .is_zero();
            cases.push((circ_zero != block_zero).then(|| {
                format!(
                    "u = {}, v = {}: pairing zero = {circ_zero}, block product zero = {block_zero}",
                    ctx.format_word(Word(u)),
                    ctx.format_word(Word(v))
                )
            }));
        }
        out.push((id, first_failure(cases.into_iter())));
    }

    let mut cases = Vec::with_capacity(RANDOM_TRIALS);
    for _ in 0..RANDOM_TRIALS {
        let (a, b, v) = (
            elem(random_word(ctx, &mut rng)),
            elem(random_word(ctx, &mut rng)),
            elem(random_word(ctx, &mut rng)),
        );
        let lambda = BinPoly::from_u64(rng.gen_range(0..1 << 8));
        let additive = a.add(&b).and_then(|s| s.circ(&v)).ok() == Some(&a.circ(&v).unwrap() + &b.circ(&v).unwrap());
        let scaled = a.scalar_mul(&lambda).circ(&v).unwrap()
            == (&lambda * &a.circ(&v).unwrap()).reduce_mod_xn_minus_1(ctx.m());
        cases.push((!(additive && scaled)).then(|| format!("a = {a}, b = {b}, v = {v}, λ = {lambda}")));
    }
    out.push(("bilinearity", first_failure(cases.into_iter())));

    let mut cases = Vec::with_capacity(RANDOM_TRIALS);
    for _ in 0..RANDOM_TRIALS {
        let e = elem(random_word(ctx, &mut rng));
        let mut w = e.clone();
        for _ in 0..ctx.m() {
            w = w.shift();
        }
        let ok = w == e && e.shift() == e.scalar_mul(&BinPoly::x());
        cases.push((!ok).then(|| format!("e = {e}")));
    }
    out.push(("shift-period", first_failure(cases.into_iter())));

    let mut cases = Vec::with_capacity(RANDOM_CODES);
    for _ in 0..RANDOM_CODES {
        let count = rng.gen_range(1..=3);
        let words: Vec<Word> = (0..count)
            .map(|_| {
                let mut w = random_word(ctx, &mut rng).0;
                // Sparse generators give codes with nontrivial kernels.
                for c in 0..3 {
                    if rng.gen_bool(0.3) {
                        w &= !ctx.mask(c);
                    }
                }
                Word(w)
            })
            .collect();
        let code = CodeBody::from_words(ctx, words.iter().copied());
        let bs = block_structure(ctx, code.basis().iter().copied()).expect("shift-closed by construction");
        cases.push((!bs.three_generated).then(|| {
            let gens: Vec<String> = words.iter().map(|&w| ctx.format_word(w)).collect();
            format!(
                "code generated by {{{}}} has third-block kernel of dimension {} but pure block ideals <{}>, <{}> of total dimension {}",
                gens.join(", "),
                bs.kernel_dimension,
                bs.f1,
                bs.f2,
                ctx.r() + ctx.s() - bs.f1.deg().unwrap_or(0) - bs.f2.deg().unwrap_or(0)
            )
        }));
    }
    out.push(("single-triple", first_failure(cases.into_iter())));
    out
}

/// Minimum nonzero weight of the cyclic code `⟨g⟩ ⊆ Z2^len`; `None` for the
/// zero code or when it is too large to scan.
fn cyclic_distance(g: &BinPoly, len: usize) -> Option<Option<u32>> {
    let modulus = BinPoly::x_pow_minus_one(len);
    let g = BinPoly::gcd(g, &modulus).expect("modulus is nonzero");
    let dim = len - g.deg().unwrap_or(0);
    if dim == 0 {
        return Some(None);
    }
    if dim > 24 {
        return None;
    }
    let rows: EchelonBasis = (0..dim)
        .map(|i| g.shl(i).to_u128().expect("fits"))
        .collect();
    Some(rows.span().skip(1).map(u128::count_ones).min())
}

struct Enumerated {
    distinct: u64,
    min_weight: Option<u32>,
    bits: Option<Vec<u64>>,
}

fn enumerate_body(body: &CodeBody, cap: u64) -> Option<Enumerated> {
    let n = body.ctx().n();
    let words = enumerate(body, cap).ok()?;
    let mut bits = (n <= BITSET_MAX_N).then(|| vec![0u64; (1usize << n).div_ceil(64)]);
    let mut distinct = 0u64;
    let mut min_weight: Option<u32> = None;
    for w in words {
        match bits.as_mut() {
            Some(bits) => {
                let i = w.0 as usize;
                if bits[i >> 6] >> (i & 63) & 1 == 0 {
                    bits[i >> 6] |= 1 << (i & 63);
                    distinct += 1;
                }
            }
            None => distinct += 1,
        }
        if !w.is_zero() {
            min_weight = Some(min_weight.map_or(w.weight(), |m| m.min(w.weight())));
        }
    }
    Some(Enumerated {
        distinct,
        min_weight,
        bits,
    })
}

fn same_space(a: &EchelonBasis, b: &EchelonBasis) -> bool {
    a.rank() == b.rank() && a.is_subspace_of(b)
}

fn spec_checks(spec: &CodeSpec, cfg: &SweepConfig) -> ItemResult {
    let mut checks = Records::new();
    let mut examples = Vec::new();
    let ctx = spec.ctx();
    let lens = ctx.lens();
    let mut rng = ChaCha8Rng::seed_from_u64(spec_seed(cfg.seed, spec));
    let done = |checks, examples| ItemResult {
        spec: Some(spec.clone()),
        checks,
        examples,
    };

    let d = spec.dimension_formula();
    let body = match minimal_generating_set(spec) {
        Ok(body) => body,
        Err(e) => {
            checks.push(("generators-independent", Check::fails(e.to_string())));
            return done(checks, examples);
        }
    };
    let rank = generator_matrix(&body).map(|g| g.rank()).unwrap_or(0);
    checks.push((
        "generators-independent",
        Check::from_bool(body.basis().len() == d && rank == d, || {
            format!("{} generators of rank {rank}, formula d = {d}", body.basis().len())
        }),
    ));

    let oracle = spec.generated_span();
    let enumerated = enumerate_body(&body, cfg.enum_cap);
    let size_ok = enumerated.as_ref().is_none_or(|e| e.distinct == 1u64 << d);
    checks.push((
        "cardinality",
        Check::from_bool(size_ok && oracle.rank() == d && same_space(&oracle, body.echelon()), || {
            format!(
                "formula 2^{d}, enumerated {:?}, span of all shifts has dimension {}",
                enumerated.as_ref().map(|e| e.distinct),
                oracle.rank()
            )
        }),
    ));

    let closed = match enumerated.as_ref().and_then(|e| e.bits.as_ref()) {
        Some(bits) => body.echelon().span().all(|w| {
            let i = ctx.shift_word(Word(w)).0 as usize;
            bits[i >> 6] >> (i & 63) & 1 == 1
        }),
        None => body.is_shift_closed(),
    };
    checks.push(("shift-closure", Check::from_bool(closed, || "a shifted codeword left the code".into())));

    let recovered = structure_recover(ctx, body.basis().iter().copied());
    checks.push((
        "round-trip",
        Check::from_bool(recovered.as_ref() == Ok(spec) && &canonicalize(spec) == spec, || {
            format!("recovered {recovered:?}")
        }),
    ));

    // Scramble the generators without changing the module, then canonicalize.
    let lambda = BinPoly::from_u64(rng.gen_range(0..16));
    let mu = BinPoly::from_u64(rng.gen_range(0..16));
    let (a, b, k) = (rng.gen_range(0..lens[0]), rng.gen_range(0..lens[1]), rng.gen_range(0..lens[2]));
    let third = RingElement::new(
        ctx,
        spec.g1() + &(&lambda * spec.f1()),
        spec.g2() + &(&mu * spec.f2()),
        spec.g3().clone(),
    )
    .scalar_mul(&BinPoly::monomial(k));
    let [t1, t2, t3] = third.parts().clone();
    let raw = CodeSpec::raw(
        ctx,
        spec.f1().shl(a).reduce_mod_xn_minus_1(lens[0]),
        spec.f2().shl(b).reduce_mod_xn_minus_1(lens[1]),
        t1,
        t2,
        t3,
    );
    let canon = canonicalize(&raw);
    checks.push((
        "canonicalize-preserves",
        Check::from_bool(&canon == spec && same_space(&raw.generated_span(), body.echelon()), || {
            format!("raw {raw} canonicalized to {canon}")
        }),
    ));

    let h = ctx.modulus(2).div_exact(spec.g3()).expect("divisor");
    let (f1, f2, g1, g2) = (spec.f1(), spec.f2(), spec.g1(), spec.g2());
    checks.push((
        "g-divisibility",
        Check::from_bool(f1.divides(&(&h * g1)) && f2.divides(&(&h * g2)), || "divisibility fails".into()),
    ));
    let f1f2 = f1 * f2;
    let g = BinPoly::gcd_all([f1f2.clone(), f1 * g2, f2 * g1].iter()).expect("F1F2 is nonzero");
    checks.push((
        "joint-divisibility",
        Check::from_bool(f1f2.divides(&(&h * &g)), || format!("{f1f2} does not divide ({h})·({g})")),
    ));

    let formula = projections(&body).expect("canonical body");
    let formula = [formula.0, formula.1, formula.2];
    let observed = [0, 1, 2].map(|b| observed_projection(&body, b));
    checks.push((
        "projection-generators",
        Check::from_bool(formula == observed, || format!("formula {formula:?}, observed {observed:?}")),
    ));
    let proj_dims = [0, 1, 2].map(|b| {
        body.basis()
            .iter()
            .map(|&w| ctx.block(w, b))
            .collect::<EchelonBasis>()
            .rank()
    });
    let want_dims = [0, 1, 2].map(|b| lens[b] - formula[b].deg().unwrap_or(0));
    checks.push((
        "projection-cardinality",
        Check::from_bool(proj_dims == want_dims, || format!("log2 sizes {proj_dims:?}, formula {want_dims:?}")),
    ));

    let product_dim = proj_dims.iter().sum::<usize>() == body.dimension();
    let divides = f1.divides(g1) && f2.divides(g2);
    let generated_by_f = observed[0] == *f1 && observed[1] == *f2;
    let split = CodeSpec::raw(ctx, f1.clone(), f2.clone(), BinPoly::zero(), BinPoly::zero(), spec.g3().clone());
    let split_equal = same_space(&split.generated_span(), body.echelon());
    let flag = is_separable(&body).expect("canonical body");
    let all = [product_dim, divides, generated_by_f, split_equal, flag];
    checks.push((
        "separability-equivalence",
        Check::from_bool(all.iter().all(|&v| v == all[0]), || {
            format!("separable {product_dim}, F|G {divides}, C_r=<F1> and C_s=<F2> {generated_by_f}, product form {split_equal}, flag {flag}")
        }),
    ));

    let distance = match enumerated.as_ref().and_then(|e| e.min_weight) {
        None => Check::not_applicable("zero code or enumeration capped"),
        Some(dc) => {
            let proj: Option<Vec<Option<u32>>> = (0..3).map(|b| cyclic_distance(&formula[b], lens[b])).collect();
            match proj {
                None => Check::not_applicable("projection too large to scan"),
                Some(proj) => {
                    let min = proj.iter().flatten().min().copied().expect("nonzero code has a nonzero projection");
                    Check::from_bool(dc >= min && (!flag || dc == min), || {
                        format!("d(C) = {dc}, projection distances {proj:?}, separable {flag}")
                    })
                }
            }
        }
    };
    checks.push(("distance-bound", distance));

    match dual_spec(&body) {
        Ok(report) => {
            for (b, strict) in report.strict_inclusion.iter().enumerate() {
                if *strict {
                    let name = ["r", "s", "t"][b];
                    examples.push((
                        format!("strict-inclusion.{name}"),
                        format!("(C_{name})^⊥ is a proper subspace of (C^⊥)_{name}"),
                    ));
                }
            }
            checks.extend(report.checks);
        }
        Err(e) => checks.push(("dual-triple-cyclic", Check::fails(e.to_string()))),
    }
    done(checks, examples)
}

enum Item {
    Context,
    Spec(CodeSpec),
}

fn check_caps(cfg: &SweepConfig) -> Result<(), SweepError> {
    for (name, value) in [("r_max", cfg.r_max), ("s_max", cfg.s_max), ("t_max", cfg.t_max)] {
        if value == 0 {
            return Err(SweepError::EmptyRange { name });
        }
        if value > DEFAULT_DIVISOR_CAP {
            return Err(SweepError::CapExceeded {
                name,
                value,
                cap: DEFAULT_DIVISOR_CAP,
            });
        }
    }
    Ok(())
}

/// Runs every check over every context `(r, s, t)` within the configured
/// ranges. The report is a pure function of the configuration.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport, SweepError> {
    check_caps(cfg)?;
    let longest = cfg.r_max.max(cfg.s_max).max(cfg.t_max);
    let divisors: Vec<Vec<BinPoly>> = (1..=longest)
        .map(|n| divisors_of_xn_minus_1_capped(n, DEFAULT_DIVISOR_CAP).expect("within cap"))
        .collect();

    let mut report = SweepReport {
        config: cfg.clone(),
        contexts: 0,
        specs: 0,
        stopped_early: false,
        tallies: BTreeMap::new(),
        witnesses: Vec::new(),
        examples: BTreeMap::new(),
    };
    let mut witness_counts: BTreeMap<&'static str, usize> = BTreeMap::new();

    for r in 1..=cfg.r_max {
        for s in 1..=cfg.s_max {
            for t in 1..=cfg.t_max {
                let ctx = RingContext::new(r, s, t).expect("within length limit");
                let divs = [&divisors[r - 1][..], &divisors[s - 1][..], &divisors[t - 1][..]];
                let items: Vec<Item> = std::iter::once(Item::Context)
                    .chain(sweep_specs(ctx, divs, cfg.g_sample, cfg.seed).into_iter().map(Item::Spec))
                    .collect();
                let results: Vec<ItemResult> = items
                    .par_iter()
                    .map(|item| match item {
                        Item::Context => ItemResult {
                            spec: None,
                            checks: context_checks(ctx, cfg.seed),
                            examples: Vec::new(),
                        },
                        Item::Spec(spec) => spec_checks(spec, cfg),
                    })
                    .collect();

                for res in results {
                    match res.spec {
                        None => report.contexts += 1,
                        Some(_) => report.specs += 1,
                    }
                    let spec_json = res.spec.as_ref().map(SpecJson::from_spec);
                    for (id, check) in &res.checks {
                        report.tallies.entry(id.to_string()).or_default().add(check.verdict);
                        if check.verdict == Verdict::Fails {
                            let seen = witness_counts.entry(id).or_default();
                            if *seen < WITNESS_LIMIT {
                                *seen += 1;
                                report.witnesses.push(Witness {
                                    check: id.to_string(),
                                    context: ctx.to_string(),
                                    spec: spec_json.clone(),
                                    detail: check.detail.clone().unwrap_or_default(),
                                });
                            }
                        }
                    }
                    for (name, detail) in &res.examples {
                        report.examples.entry(name.clone()).or_insert_with(|| Witness {
                            check: name.clone(),
                            context: ctx.to_string(),
                            spec: spec_json.clone(),
                            detail: detail.clone(),
                        });
                    }
                    if cfg.fail_fast && res.failed() {
                        report.stopped_early = true;
                        return Ok(report);
                    }
                }
            }
        }
    }
    Ok(report)
}
