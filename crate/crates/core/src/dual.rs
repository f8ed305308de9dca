//! Duals of triple cyclic codes.
//!
//! The dual is always computed as the null space of the primal generator
//! matrix. Every closed-form description of the dual generators is then
//! evaluated against that null space and reported as a [`Verdict`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::code::{block_structure_of, BlockStructure, CodeBody, CodeError, CodeSpec};
use crate::gf2poly::BinPoly;
use crate::linalg::EchelonBasis;
use crate::ring::{RingContext, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "holds")]
    Holds,
    #[serde(rename = "fails")]
    Fails,
    #[serde(rename = "n/a")]
    NotApplicable,
}

/// A verdict with an explanation for failures and inapplicable checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub verdict: Verdict,
    pub detail: Option<String>,
}

impl Check {
    pub fn holds() -> Self {
        Self {
            verdict: Verdict::Holds,
            detail: None,
        }
    }

    pub fn fails(detail: impl Into<String>) -> Self {
        Self {
            verdict: Verdict::Fails,
            detail: Some(detail.into()),
        }
    }

    pub fn not_applicable(why: impl Into<String>) -> Self {
        Self {
            verdict: Verdict::NotApplicable,
            detail: Some(why.into()),
        }
    }

    pub fn from_bool(ok: bool, detail: impl FnOnce() -> String) -> Self {
        if ok {
            Self::holds()
        } else {
            Self::fails(detail())
        }
    }
}

pub type CheckMap = BTreeMap<&'static str, Check>;

/// The dual code: null space of the primal basis under the standard inner
/// product. Errors if that space is not shift-invariant.
pub fn dual_code(body: &CodeBody) -> Result<CodeBody, CodeError> {
    let ctx = body.ctx();
    let dual = CodeBody::from_basis(ctx, body.echelon().null_space(ctx.n() as u32));
    if !dual.is_shift_closed() {
        return Err(CodeError::NotShiftClosed);
    }
    Ok(dual)
}

/// The cyclic code `⟨p⟩` inside `Z2^len`.
fn ideal_space(p: &BinPoly, len: usize) -> EchelonBasis {
    let mask = if len == 128 { u128::MAX } else { (1u128 << len) - 1 };
    let mut v = p.reduce_mod_xn_minus_1(len).to_u128().expect("block fits");
    let mut out = EchelonBasis::new();
    for _ in 0..len {
        out.insert(v);
        v = ((v << 1) | (v >> (len - 1))) & mask;
    }
    out
}

/// Block `b` of every vector in the span.
fn projection_space(ctx: RingContext, basis: &EchelonBasis, b: usize) -> EchelonBasis {
    basis.rows().iter().map(|&v| ctx.block(Word(v), b)).collect()
}

/// `{a : a placed in block b, zeros elsewhere, lies in the span}`.
fn pure_space(ctx: RingContext, basis: &EchelonBasis, b: usize) -> EchelonBasis {
    basis
        .restricted_to(ctx.mask(b))
        .rows()
        .iter()
        .map(|&v| ctx.block(Word(v), b))
        .collect()
}

fn same_space(a: &EchelonBasis, b: &EchelonBasis) -> bool {
    a.rank() == b.rank() && a.is_subspace_of(b)
}

fn gcd(a: &BinPoly, b: &BinPoly) -> BinPoly {
    BinPoly::gcd(a, b).expect("one operand is nonzero")
}

/// Dual-side spaces attached to one primal code.
struct Spaces {
    /// `(C_b)^⊥`, from the primal projection.
    proj_perp: [EchelonBasis; 3],
    /// `(C^⊥)_b`.
    dual_proj: [EchelonBasis; 3],
    /// `{a : a in block b of C^⊥ with zeros elsewhere}`.
    dual_pure: [EchelonBasis; 3],
}

impl Spaces {
    fn new(primal: &CodeBody, dual: &CodeBody) -> Self {
        let ctx = primal.ctx();
        let lens = ctx.lens();
        Self {
            proj_perp: [0, 1, 2].map(|b| projection_space(ctx, primal.echelon(), b).null_space(lens[b] as u32)),
            dual_proj: [0, 1, 2].map(|b| projection_space(ctx, dual.echelon(), b)),
            dual_pure: [0, 1, 2].map(|b| pure_space(ctx, dual.echelon(), b)),
        }
    }
}

const BLOCK: [&str; 3] = ["r", "s", "t"];

/// Relations between duals of projections and projections of the dual.
#[derive(Debug, Clone)]
pub struct ProjectionLaws {
    pub checks: CheckMap,
    /// Whether `(C_b)^⊥` is a proper subspace of `(C^⊥)_b`, per block.
    pub strict_inclusion: [bool; 3],
}

/// `(C_b)^⊥` against `{a : (a|0|0) ∈ C^⊥}` and `(C^⊥)_b` for each block, and,
/// when the body carries a canonical triple, against the generators
/// `(x^r-1)/gcd(F1*, G1*)`, `(x^s-1)/gcd(F2*, G2*)`, `(x^t-1)/G3*`.
pub fn dual_projection_laws(body: &CodeBody) -> Result<ProjectionLaws, CodeError> {
    let dual = dual_code(body)?;
    Ok(projection_laws(body, &Spaces::new(body, &dual)))
}

fn projection_laws(body: &CodeBody, sp: &Spaces) -> ProjectionLaws {
    let mut checks = CheckMap::new();
    let mut pure_bad = Vec::new();
    for b in 0..3 {
        if !same_space(&sp.proj_perp[b], &sp.dual_pure[b]) {
            pure_bad.push(format!("(C_{})^⊥ differs from the pure block subcode of the dual", BLOCK[b]));
        } else if !sp.proj_perp[b].is_subspace_of(&sp.dual_proj[b]) {
            pure_bad.push(format!("(C_{0})^⊥ is not inside (C^⊥)_{0}", BLOCK[b]));
        }
    }
    checks.insert("pure-dual-projection", Check::from_bool(pure_bad.is_empty(), || pure_bad.join("; ")));

    let strict_inclusion = [0, 1, 2].map(|b| sp.proj_perp[b].rank() < sp.dual_proj[b].rank());

    let check = match body.spec().filter(|s| s.is_canonical()) {
        None => Check::not_applicable("no canonical generator triple"),
        Some(spec) => {
            let ctx = spec.ctx();
            let [mr, ms, mt] = ctx.moduli();
            let gens = [
                mr.div_exact(&gcd(&spec.f1().reciprocal(), &spec.g1().reciprocal())),
                ms.div_exact(&gcd(&spec.f2().reciprocal(), &spec.g2().reciprocal())),
                mt.div_exact(&spec.g3().reciprocal()),
            ];
            let mut bad = Vec::new();
            for b in 0..3 {
                match &gens[b] {
                    Some(g) if same_space(&ideal_space(g, ctx.lens()[b]), &sp.proj_perp[b]) => {}
                    Some(g) => bad.push(format!("(C_{})^⊥ is not generated by {g}", BLOCK[b])),
                    None => bad.push(format!("generator formula for (C_{})^⊥ is not a polynomial", BLOCK[b])),
                }
            }
            Check::from_bool(bad.is_empty(), || bad.join("; "))
        }
    };
    checks.insert("projection-dual-generators", check);
    ProjectionLaws {
        checks,
        strict_inclusion,
    }
}

/// The dual of a canonical code with every closed-form claim evaluated.
#[derive(Debug, Clone)]
pub struct DualReport {
    pub primal: CodeSpec,
    /// Block ideals of the dual, read off the null space.
    pub dual: BlockStructure,
    /// `deg F1 - deg gcd(F1, G1)`.
    pub kappa: usize,
    /// `Ĝ1 / ((x^r-1)/F1*)` when that division is exact.
    pub nu: Option<BinPoly>,
    /// `G1 / gcd(F1, G1)` for nonzero `G1`.
    pub zeta: Option<BinPoly>,
    pub dimension: usize,
    pub dual_dimension: usize,
    pub strict_inclusion: [bool; 3],
    pub checks: CheckMap,
}

impl DualReport {
    /// The dual's generator triple, if the dual has one.
    pub fn dual_spec(&self) -> Option<CodeSpec> {
        self.dual.three_generated.then(|| self.dual.to_spec())
    }

    pub fn failures(&self) -> impl Iterator<Item = (&'static str, &Check)> {
        self.checks
            .iter()
            .filter(|(_, c)| c.verdict == Verdict::Fails)
            .map(|(k, c)| (*k, c))
    }
}

/// Computes the dual of `body` (which must carry a canonical triple), reads
/// off its block structure and evaluates every closed-form relation between
/// the primal triple and the dual generators.
pub fn dual_spec(body: &CodeBody) -> Result<DualReport, CodeError> {
    let spec = body
        .spec()
        .filter(|s| s.is_canonical())
        .ok_or_else(|| CodeError::NotCanonical("dual formulas need a canonical generator triple".into()))?
        .clone();
    let ctx = spec.ctx();
    let [r, s, t] = ctx.lens();
    let m = ctx.m();
    let [mr, ms, mt] = ctx.moduli();
    let dual = dual_code(body)?;
    let sp = Spaces::new(body, &dual);
    let bs = block_structure_of(ctx, dual.echelon())?;

    let (f1, f2, g1, g2, g3) = (spec.f1(), spec.f2(), spec.g1(), spec.g2(), spec.g3());
    let (f1s, f2s, g1s, g2s, g3s) = (
        f1.reciprocal(),
        f2.reciprocal(),
        g1.reciprocal(),
        g2.reciprocal(),
        g3.reciprocal(),
    );
    let deg = |p: &BinPoly| p.deg().unwrap_or(0);
    let gcd1 = gcd(f1, g1);
    let gcd2 = gcd(f2, g2);
    let gcd1s = gcd(&f1s, &g1s);
    let gcd2s = gcd(&f2s, &g2s);
    let kappa = deg(f1) - deg(&gcd1);
    let sep1 = f1.divides(g1);
    let sep2 = f2.divides(g2);

    let mut checks = CheckMap::new();
    let mut put = |id: &'static str, c: Check| {
        checks.insert(id, c);
    };

    put("dual-triple-cyclic", Check::holds());
    put(
        "dual-cardinality",
        Check::from_bool(body.dimension() + dual.dimension() == ctx.n(), || {
            format!("d = {}, dual d = {}, n = {}", body.dimension(), dual.dimension(), ctx.n())
        }),
    );
    let back = dual.echelon().null_space(ctx.n() as u32);
    put(
        "double-dual",
        Check::from_bool(same_space(&back, body.echelon()), || "(C^⊥)^⊥ differs from C".into()),
    );
    put(
        "dual-single-triple",
        Check::from_bool(bs.three_generated, || {
            format!(
                "dual has kernel dimension {} but its pure block ideals <{}>, <{}> give {}",
                bs.kernel_dimension,
                bs.f1,
                bs.f2,
                (r - deg(&bs.f1)) + (s - deg(&bs.f2))
            )
        }),
    );

    // Generators of the pure block ideals of the dual.
    for (id, id_deg, got, modulus, gs, gcd_plain, len) in [
        ("dual-pure-r", "dual-pure-r-degree", &bs.f1, &mr, &gcd1s, &gcd1, r),
        ("dual-pure-s", "dual-pure-s-degree", &bs.f2, &ms, &gcd2s, &gcd2, s),
    ] {
        let want = modulus.div_exact(gs).expect("gcd of divisors divides the modulus");
        put(id, Check::from_bool(got == &want, || format!("dual block ideal {got}, formula {want}")));
        put(
            id_deg,
            Check::from_bool(deg(got) + deg(gcd_plain) == len, || {
                format!("deg {} = {}, expected {} - {}", got, deg(got), len, deg(gcd_plain))
            }),
        );
    }

    for (id, fhat, modulus, fs, gs, g) in [
        ("dual-pure-r-divides", &bs.f1, &mr, &f1s, &g1s, g1),
        ("dual-pure-s-divides", &bs.f2, &ms, &f2s, &g2s, g2),
    ] {
        let check = if g.is_zero() {
            Check::not_applicable("G is zero")
        } else {
            match (modulus * modulus).div_exact(&(fs * gs)) {
                None => Check::not_applicable(format!("({modulus})^2 / ({fs}·{gs}) is not a polynomial")),
                Some(q) => Check::from_bool(fhat.divides(&q), || format!("{fhat} does not divide {q}")),
            }
        };
        put(id, check);
    }

    let t_perp_gen = BinPoly::gcd_all(
        std::iter::once(&mt).chain(&sp.dual_pure[2].rows().iter().map(|&v| BinPoly::from_u128(v)).collect::<Vec<_>>()),
    )
    .expect("modulus is nonzero");
    let mt_over_g3s = mt.div_exact(&g3s).expect("G3* divides x^t - 1");
    put(
        "dual-g3-divides",
        Check::from_bool(bs.g3.divides(&t_perp_gen) && bs.g3.divides(&mt_over_g3s), || {
            format!("Ĝ3 = {} against (C_t)^⊥ = <{}> and (x^t-1)/G3* = {}", bs.g3, t_perp_gen, mt_over_g3s)
        }),
    );
    put(
        "dual-g3-separable",
        if sep1 && sep2 {
            Check::from_bool(bs.g3 == mt_over_g3s && deg(&bs.g3) + deg(g3) == t, || {
                format!("Ĝ3 = {}, expected {}", bs.g3, mt_over_g3s)
            })
        } else {
            Check::not_applicable("F1 ∤ G1 or F2 ∤ G2")
        },
    );

    let mut nu = None;
    for (id, ghat, modulus, fs, f, g_gcd) in [
        ("dual-g1-factor", &bs.g1, &mr, &f1s, f1, &gcd1),
        ("dual-g2-factor", &bs.g2, &ms, &f2s, f2, &gcd2),
    ] {
        let base = modulus.div_exact(fs).expect("F* divides the modulus");
        let bound = deg(f) - deg(g_gcd);
        let check = match ghat.div_exact(&base) {
            None if !ghat.is_zero() => Check::fails(format!("{ghat} is not a multiple of {base}")),
            q => {
                let q = q.unwrap_or_else(BinPoly::zero);
                let ok = q.deg().is_none_or(|d| d <= bound);
                let detail = format!("quotient {q} has degree above {bound}");
                if id == "dual-g1-factor" {
                    nu = Some(q);
                }
                Check::from_bool(ok, || detail)
            }
        };
        put(id, check);
    }

    let g_star = BinPoly::gcd_all([&f1s * &f2s, &f1s * &g2s, &f2s * &g1s].iter()).expect("F1*F2* is nonzero");
    put(
        "dual-g3-factor",
        match (&mt * &g_star).div_exact(&(&(&f1s * &f2s) * &g3s)) {
            None => Check::not_applicable("the divisor expression is not a polynomial"),
            Some(e) => Check::from_bool(e.divides(&bs.g3), || format!("{e} does not divide Ĝ3 = {}", bs.g3)),
        },
    );

    for (id, b, modulus, fs, gs, g) in [
        ("dual-contains-r", 0, &mr, &f1s, &g1s, g1),
        ("dual-contains-s", 1, &ms, &f2s, &g2s, g2),
    ] {
        let check = if g.is_zero() {
            Check::not_applicable("G is zero")
        } else {
            match (modulus * modulus).div_exact(&(fs * gs)) {
                None => Check::not_applicable(format!("({modulus})^2 / ({fs}·{gs}) is not a polynomial")),
                Some(q) => {
                    let mut blocks = [0u128; 3];
                    blocks[b] = q.reduce_mod_xn_minus_1(ctx.lens()[b]).to_u128().expect("fits");
                    let w = ctx.word_from_blocks(blocks);
                    Check::from_bool(dual.contains_word(w), || {
                        format!("{} is not in the dual", ctx.format_word(w))
                    })
                }
            }
        };
        put(id, check);
    }
    let wt = ctx.word_from_blocks([0, 0, mt_over_g3s.reduce_mod_xn_minus_1(t).to_u128().expect("fits")]);
    put(
        "dual-contains-t",
        Check::from_bool(dual.contains_word(wt), || format!("{} is not in the dual", ctx.format_word(wt))),
    );

    let ideal_f1 = ideal_space(&mr.div_exact(&f1s).expect("divides"), r);
    let ideal_f2 = ideal_space(&ms.div_exact(&f2s).expect("divides"), s);
    let ideal_g3 = ideal_space(&mt_over_g3s, t);
    let mut chain = Vec::new();
    for (b, ideal) in [(0, &ideal_f1), (1, &ideal_f2)] {
        if !sp.proj_perp[b].is_subspace_of(&sp.dual_proj[b]) {
            chain.push(format!("(C_{0})^⊥ ⊄ (C^⊥)_{0}", BLOCK[b]));
        }
        if !sp.dual_proj[b].is_subspace_of(ideal) {
            chain.push(format!("(C^⊥)_{0} ⊄ <(x^{0}-1)/F*>", BLOCK[b]));
        }
    }
    put("dual-projection-chain", Check::from_bool(chain.is_empty(), || chain.join("; ")));

    for (id, b, sep, ideal, f) in [("dual-projection-r-separable", 0, sep1, &ideal_f1, f1), ("dual-projection-s-separable", 1, sep2, &ideal_f2, f2)] {
        let check = if !sep {
            Check::not_applicable("F does not divide G")
        } else {
            Check::from_bool(
                same_space(&sp.dual_proj[b], &sp.proj_perp[b])
                    && same_space(&sp.dual_proj[b], ideal)
                    && sp.dual_proj[b].rank() == deg(f),
                || format!("(C^⊥)_{} has dimension {}", BLOCK[b], sp.dual_proj[b].rank()),
            )
        };
        put(id, check);
    }

    put(
        "dual-product-form",
        if sep1 && sep2 {
            let product: EchelonBasis = [(0, &ideal_f1), (1, &ideal_f2), (2, &ideal_g3)]
                .into_iter()
                .flat_map(|(b, ideal)| {
                    ideal.rows().iter().map(move |&v| {
                        let mut blocks = [0u128; 3];
                        blocks[b] = v;
                        blocks
                    })
                })
                .map(|blocks| ctx.word_from_blocks(blocks).0)
                .collect();
            Check::from_bool(
                same_space(&product, dual.echelon())
                    && dual.dimension() == deg(f1) + deg(f2) + deg(g3)
                    && same_space(&sp.dual_proj[2], &sp.proj_perp[2])
                    && same_space(&sp.dual_proj[2], &ideal_g3),
                || "the dual is not the product of the reciprocal ideals".into(),
            )
        } else {
            Check::not_applicable("F1 ∤ G1 or F2 ∤ G2")
        },
    );

    let laws = projection_laws(body, &sp);
    for (id, c) in laws.checks {
        put(id, c);
    }

    let zeta = (!g1.is_zero()).then(|| g1.div_exact(&gcd1).expect("gcd divides"));
    if g2.is_zero() {
        let dims = [0, 1, 2].map(|b| sp.dual_proj[b].rank());
        let want = [deg(f1), deg(f2), deg(g3) + kappa];
        put(
            "g2-zero-cardinalities",
            Check::from_bool(dims == want, || format!("log2 sizes {dims:?}, expected {want:?}")),
        );
        put(
            "g2-zero-g3-degree",
            Check::from_bool(deg(&bs.g3) + deg(g3) + deg(f1) == t + deg(&gcd1), || {
                format!("deg Ĝ3 = {}", deg(&bs.g3))
            }),
        );
        put(
            "g2-zero-g3-closed-form",
            match (&mt * &gcd1s).div_exact(&(&f1s * &g3s)) {
                None => Check::fails("(x^t-1)·gcd(F1*, G1*) / (F1*·G3*) is not a polynomial"),
                Some(want) => Check::from_bool(bs.g3 == want, || format!("Ĝ3 = {}, formula {}", bs.g3, want)),
            },
        );
    } else {
        for id in ["g2-zero-cardinalities", "g2-zero-g3-degree", "g2-zero-g3-closed-form"] {
            put(id, Check::not_applicable("G2 is nonzero"));
        }
    }

    let mut report = DualReport {
        primal: spec,
        dual: bs,
        kappa,
        nu,
        zeta,
        dimension: body.dimension(),
        dual_dimension: dual.dimension(),
        strict_inclusion: laws.strict_inclusion,
        checks,
    };
    let [c1, c2] = verify_nu_congruence(&report, m);
    report.checks.insert("nu-congruence-1", c1);
    report.checks.insert("nu-congruence-2", c2);
    Ok(report)
}

/// The two congruences tying `ν` to `ζ = G1 / gcd(F1, G1)` modulo
/// `F1* / gcd(F1*, G1*)`, for triples with `G2 = 0`, `G1 ≠ 0` and a nonzero
/// third projection.
pub fn verify_nu_congruence(report: &DualReport, m: usize) -> [Check; 2] {
    let spec = &report.primal;
    let na = |why: &str| [Check::not_applicable(why), Check::not_applicable(why)];
    if !spec.g2().is_zero() {
        return na("G2 is nonzero");
    }
    if spec.g1().is_zero() {
        return na("G1 is zero");
    }
    let mt = spec.ctx().modulus(2);
    if spec.g3() == &mt {
        return na("third projection is zero");
    }
    let (Some(nu), Some(zeta)) = (&report.nu, &report.zeta) else {
        return na("ν is undefined");
    };
    let f1s = spec.f1().reciprocal();
    let modulus = f1s
        .div_exact(&gcd(&f1s, &spec.g1().reciprocal()))
        .expect("gcd divides");
    let zeta_s = zeta.reciprocal();
    let Ok(inv) = zeta_s.mod_inverse(&modulus) else {
        return na("ζ* is not invertible");
    };
    let deg_g1 = spec.g1().deg().expect("nonzero");
    let deg_g3 = spec.g3().deg().expect("nonzero");
    let reduce = |p: BinPoly| p.rem(&modulus).expect("modulus is nonzero");

    let lhs = &(&(nu * &BinPoly::monomial(m - deg_g1 - 1)) * &zeta_s) + &BinPoly::monomial(m - deg_g3 - 1);
    let first = reduce(lhs.clone());
    let want = reduce(&BinPoly::monomial(m - deg_g3 + deg_g1) * &inv);
    let second = reduce(nu + &want);
    [
        Check::from_bool(first.is_zero(), || {
            format!("ν·x^(m-deg G1-1)·ζ* + x^(m-deg G3-1) ≡ {first} mod {modulus}")
        }),
        Check::from_bool(second.is_zero(), || {
            format!("ν ≡ {} but x^(m-deg G3+deg G1)·(ζ*)^-1 ≡ {want} mod {modulus}", reduce(nu.clone()))
        }),
    ]
}
