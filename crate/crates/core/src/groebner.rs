//! Gröbner bases of submodules of free modules `R^m`, `R = Q[d1..dn]`.
//!
//! The engine runs Buchberger's algorithm with the Gebauer–Möller pair
//! criteria on primitive integer vectors (fraction-free reduction); rational
//! normalization only happens when a reduced basis is handed out.
//!
//! Syzygies are obtained by carrying a reduction trace: every generator
//! `g_i` is extended to `(g_i, e_i)` in `R^(m+r)` and the basis is computed
//! for an order in which the first `m` components dominate. Basis elements
//! whose leading term falls in the trace block are exactly a Gröbner basis
//! of the syzygy module.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact_poly::{Monomial, MonomialOrder, Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("rank mismatch: expected vectors of length {expected}, got {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("variable count mismatch: expected {expected}, got {found}")]
    NvarsMismatch { expected: usize, found: usize },
}

/// An element of the free module `R^m`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModuleVector {
    nvars: usize,
    components: Vec<Polynomial>,
}

impl ModuleVector {
    pub fn new(nvars: usize, components: Vec<Polynomial>) -> Self {
        assert!(
            components.iter().all(|p| p.nvars() == nvars),
            "module vector components must share the variable count"
        );
        ModuleVector { nvars, components }
    }

    pub fn zero(nvars: usize, rank: usize) -> Self {
        ModuleVector {
            nvars,
            components: vec![Polynomial::zero(nvars); rank],
        }
    }

    /// The `i`-th standard basis vector.
    pub fn unit(nvars: usize, rank: usize, i: usize) -> Self {
        let mut v = Self::zero(nvars, rank);
        v.components[i] = Polynomial::one(nvars);
        v
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn into_components(self) -> Vec<Polynomial> {
        self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    /// Maximal total degree over the components.
    pub fn degree(&self) -> u32 {
        self.components.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    pub fn mul_poly(&self, p: &Polynomial) -> ModuleVector {
        ModuleVector {
            nvars: self.nvars,
            components: self.components.iter().map(|c| c * p).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> ModuleVector {
        ModuleVector {
            nvars: self.nvars,
            components: self.components.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn add(&self, other: &ModuleVector) -> ModuleVector {
        assert_eq!(self.rank(), other.rank());
        ModuleVector {
            nvars: self.nvars,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &ModuleVector) -> ModuleVector {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn negate_vars(&self) -> ModuleVector {
        ModuleVector {
            nvars: self.nvars,
            components: self.components.iter().map(Polynomial::negate_vars).collect(),
        }
    }

    /// Leading `(position, monomial, coefficient)` under `ord`.
    pub fn leading_term(&self, ord: &MonomialOrder) -> Option<(usize, Monomial, Rational)> {
        let mut best: Option<(usize, Monomial, Rational)> = None;
        for (k, p) in self.components.iter().enumerate() {
            for (m, c) in p.terms() {
                let better = match &best {
                    None => true,
                    Some((bk, bm, _)) => ord.cmp_terms((k, m), (*bk, bm)) == Ordering::Greater,
                };
                if better {
                    best = Some((k, *m, c.clone()));
                }
            }
        }
        best
    }

    /// `Σ coeffs[i] · vectors[i]`.
    pub fn combination(nvars: usize, rank: usize, coeffs: &[Polynomial], vectors: &[ModuleVector]) -> ModuleVector {
        assert_eq!(coeffs.len(), vectors.len());
        let mut acc = ModuleVector::zero(nvars, rank);
        for (c, v) in coeffs.iter().zip(vectors) {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&v.mul_poly(c));
        }
        acc
    }
}

impl fmt::Debug for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", c)?;
        }
        f.write_str(")")
    }
}

/// Order on module terms, optionally with an elimination split: positions
/// below `split` always dominate positions at or above it.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TermOrder {
    pub ord: MonomialOrder,
    pub split: Option<usize>,
}

impl TermOrder {
    pub fn plain(ord: MonomialOrder) -> Self {
        TermOrder { ord, split: None }
    }

    #[inline]
    pub fn cmp(&self, a: (u32, &Monomial), b: (u32, &Monomial)) -> Ordering {
        if let Some(s) = self.split {
            let ba = a.0 as usize >= s;
            let bb = b.0 as usize >= s;
            if ba != bb {
                return if ba { Ordering::Less } else { Ordering::Greater };
            }
        }
        self.ord.cmp_terms((a.0 as usize, a.1), (b.0 as usize, b.1))
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Term {
    pub pos: u32,
    pub mono: Monomial,
    pub coeff: BigInt,
}

/// Sparse module element with integer coefficients, terms sorted in
/// strictly decreasing order.
#[derive(Clone, Debug, Default)]
pub(crate) struct IVec {
    pub terms: Vec<Term>,
}

impl IVec {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lead(&self) -> &Term {
        &self.terms[0]
    }

    /// Converts a rational vector, clearing denominators.
    pub fn from_vector(v: &ModuleVector, to: &TermOrder) -> IVec {
        let mut den = BigInt::one();
        for p in v.components() {
            for (_, c) in p.terms() {
                den = den.lcm(c.denom());
            }
        }
        let mut terms: Vec<Term> = Vec::new();
        for (k, p) in v.components().iter().enumerate() {
            for (m, c) in p.terms() {
                let scaled = c.numer() * (&den / c.denom());
                terms.push(Term {
                    pos: k as u32,
                    mono: *m,
                    coeff: scaled,
                });
            }
        }
        terms.sort_by(|a, b| to.cmp((b.pos, &b.mono), (a.pos, &a.mono)));
        let mut v = IVec { terms };
        v.make_primitive();
        v
    }

    pub fn to_vector(&self, nvars: usize, rank: usize, divisor: &Rational) -> ModuleVector {
        let mut comps = vec![Polynomial::zero(nvars); rank];
        for t in &self.terms {
            let c = Rational::from_integer(t.coeff.clone()) / divisor;
            comps[t.pos as usize].add_term(t.mono, c);
        }
        ModuleVector::new(nvars, comps)
    }

    /// Monic rational version (leading coefficient 1).
    pub fn to_monic(&self, nvars: usize, rank: usize) -> ModuleVector {
        if self.is_zero() {
            return ModuleVector::zero(nvars, rank);
        }
        let lc = Rational::from_integer(self.lead().coeff.clone());
        self.to_vector(nvars, rank, &lc)
    }

    fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for t in &self.terms {
            g = g.gcd(&t.coeff);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides by the content and makes the leading coefficient positive.
    /// Returns the factor the vector was divided by (signed).
    fn make_primitive(&mut self) -> BigInt {
        if self.is_zero() {
            return BigInt::one();
        }
        let mut g = self.content();
        if self.lead().coeff.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for t in &mut self.terms {
                t.coeff = &t.coeff / &g;
            }
        }
        g
    }

    /// `ca·self − cb·mono·other`.
    fn combine(&self, ca: &BigInt, cb: &BigInt, mono: &Monomial, other: &IVec, to: &TermOrder) -> IVec {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() || j < b.len() {
            if j == b.len() {
                out.push(Term {
                    pos: a[i].pos,
                    mono: a[i].mono,
                    coeff: &a[i].coeff * ca,
                });
                i += 1;
                continue;
            }
            let bm = b[j].mono.mul(mono);
            if i == a.len() {
                out.push(Term {
                    pos: b[j].pos,
                    mono: bm,
                    coeff: -(&b[j].coeff * cb),
                });
                j += 1;
                continue;
            }
            match to.cmp((a[i].pos, &a[i].mono), (b[j].pos, &bm)) {
                Ordering::Greater => {
                    out.push(Term {
                        pos: a[i].pos,
                        mono: a[i].mono,
                        coeff: &a[i].coeff * ca,
                    });
                    i += 1;
                }
                Ordering::Less => {
                    out.push(Term {
                        pos: b[j].pos,
                        mono: bm,
                        coeff: -(&b[j].coeff * cb),
                    });
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].coeff * ca - &b[j].coeff * cb;
                    if !c.is_zero() {
                        out.push(Term {
                            pos: a[i].pos,
                            mono: a[i].mono,
                            coeff: c,
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        IVec { terms: out }
    }

    fn max_bits(&self) -> u64 {
        self.terms.iter().map(|t| t.coeff.bits()).max().unwrap_or(0)
    }
}

/// Reduces `p` modulo `basis` (fraction-free). With `full`, every term is
/// reduced, otherwise only the leading one. Returns the remainder `r` and
/// the rational `s` with `s·p ≡ r` modulo the module.
fn reduce(p: IVec, basis: &[&IVec], full: bool, to: &TermOrder) -> (IVec, Rational) {
    let mut p = p;
    let mut scale = Rational::one();
    let mut idx = 0usize;
    let mut steps = 0usize;
    while idx < p.terms.len() {
        let (pos, mono) = (p.terms[idx].pos, p.terms[idx].mono);
        let reducer = basis.iter().find(|g| {
            let l = g.lead();
            l.pos == pos && l.mono.divides(&mono)
        });
        match reducer {
            Some(g) => {
                let l = g.lead();
                let t = l.mono.quotient_of(&mono).expect("divides");
                let pc = &p.terms[idx].coeff;
                let gcd = pc.gcd(&l.coeff);
                let ca = &l.coeff / &gcd;
                let cb = pc / &gcd;
                p = p.combine(&ca, &cb, &t, g, to);
                scale *= Rational::from_integer(ca);
                steps += 1;
                if steps.is_multiple_of(16) || p.max_bits() > 256 {
                    let g = p.make_primitive();
                    scale /= Rational::from_integer(g);
                }
            }
            None => {
                if !full {
                    break;
                }
                idx += 1;
            }
        }
    }
    let g = p.make_primitive();
    scale /= Rational::from_integer(g);
    (p, scale)
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    deg: u32,
}

/// Incremental Buchberger engine.
pub(crate) struct Engine {
    to: TermOrder,
    basis: Vec<IVec>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl Engine {
    pub fn new(to: TermOrder) -> Self {
        Engine {
            to,
            basis: Vec::new(),
            active: Vec::new(),
            pairs: Vec::new(),
        }
    }

    /// Adds elements known to form a Gröbner basis already; no pairs are
    /// formed among them.
    pub fn seed(&mut self, gb: &[IVec]) {
        for g in gb {
            if !g.is_zero() {
                self.basis.push(g.clone());
                self.active.push(true);
            }
        }
    }

    fn reducers(&self) -> Vec<&IVec> {
        self.basis
            .iter()
            .zip(&self.active)
            .filter(|(_, &a)| a)
            .map(|(g, _)| g)
            .collect()
    }

    /// Top-reduces `h` by the current basis and inserts the remainder.
    /// Returns false when `h` reduced to zero.
    pub fn add(&mut self, h: IVec) -> bool {
        let (r, _) = reduce(h, &self.reducers(), false, &self.to);
        if r.is_zero() {
            return false;
        }
        self.insert(r);
        true
    }

    fn insert(&mut self, h: IVec) {
        let k = self.basis.len();
        let hl = h.lead().clone();
        // Gebauer–Möller: old pairs made redundant by h (criterion B).
        let basis = &self.basis;
        self.pairs.retain(|p| {
            let pi = basis[p.i].lead();
            if pi.pos != hl.pos || !hl.mono.divides(&p.lcm) {
                return true;
            }
            let lik = pi.mono.lcm(&hl.mono);
            let ljk = basis[p.j].lead().mono.lcm(&hl.mono);
            lik == p.lcm || ljk == p.lcm
        });
        // New pairs, filtered by criterion M.
        let mut cands: Vec<Pair> = Vec::new();
        for (i, g) in self.basis.iter().enumerate() {
            if !self.active[i] || g.lead().pos != hl.pos {
                continue;
            }
            let lcm = g.lead().mono.lcm(&hl.mono);
            cands.push(Pair {
                i,
                j: k,
                lcm,
                deg: lcm.degree(),
            });
        }
        let mut keep: Vec<Pair> = Vec::new();
        for (a, p) in cands.iter().enumerate() {
            let dominated = cands.iter().enumerate().any(|(b, q)| {
                if a == b || !q.lcm.divides(&p.lcm) {
                    return false;
                }
                // Strict divisor, or an equal lcm appearing earlier.
                q.lcm != p.lcm || b < a
            });
            if !dominated {
                keep.push(p.clone());
            }
        }
        self.pairs.extend(keep);
        // Elements whose leading term is a multiple of lt(h) become redundant.
        for i in 0..self.basis.len() {
            if self.active[i] {
                let l = self.basis[i].lead();
                if l.pos == hl.pos && hl.mono.divides(&l.mono) {
                    self.active[i] = false;
                }
            }
        }
        self.basis.push(h);
        self.active.push(true);
    }

    fn spoly(&self, p: &Pair) -> IVec {
        let f = &self.basis[p.i];
        let g = &self.basis[p.j];
        let fl = f.lead();
        let gl = g.lead();
        let tf = fl.mono.quotient_of(&p.lcm).expect("lcm");
        let tg = gl.mono.quotient_of(&p.lcm).expect("lcm");
        let gcd = fl.coeff.gcd(&gl.coeff);
        let ca = &gl.coeff / &gcd;
        let cb = &fl.coeff / &gcd;
        let fs = IVec {
            terms: f
                .terms
                .iter()
                .map(|t| Term {
                    pos: t.pos,
                    mono: t.mono.mul(&tf),
                    coeff: t.coeff.clone(),
                })
                .collect(),
        };
        fs.combine(&ca, &cb, &tg, g, &self.to)
    }

    /// Processes pairs until none remain.
    pub fn run(&mut self) {
        while !self.pairs.is_empty() {
            // Normal strategy: smallest lcm degree, then the order, then indices.
            let to = self.to;
            let basis = &self.basis;
            let best = (0..self.pairs.len())
                .min_by(|&a, &b| {
                    let pa = &self.pairs[a];
                    let pb = &self.pairs[b];
                    pa.deg
                        .cmp(&pb.deg)
                        .then_with(|| {
                            to.cmp(
                                (basis[pa.i].lead().pos, &pa.lcm),
                                (basis[pb.i].lead().pos, &pb.lcm),
                            )
                        })
                        .then_with(|| (pa.i, pa.j).cmp(&(pb.i, pb.j)))
                })
                .expect("nonempty");
            let pair = self.pairs.swap_remove(best);
            let s = self.spoly(&pair);
            if s.is_zero() {
                continue;
            }
            let (r, _) = reduce(s, &self.reducers(), false, &self.to);
            if !r.is_zero() {
                self.insert(r);
            }
        }
    }

    /// Reduced basis as primitive integer vectors sorted by decreasing
    /// leading term.
    pub fn reduced(&self) -> Vec<IVec> {
        let mut minimal: Vec<IVec> = Vec::new();
        let act: Vec<&IVec> = self.reducers();
        for (a, g) in act.iter().enumerate() {
            let gl = g.lead();
            let redundant = act.iter().enumerate().any(|(b, h)| {
                let hl = h.lead();
                b != a && hl.pos == gl.pos && hl.mono.divides(&gl.mono) && (hl.mono != gl.mono || b < a)
            });
            if !redundant {
                minimal.push((*g).clone());
            }
        }
        let mut out: Vec<IVec> = Vec::with_capacity(minimal.len());
        for a in 0..minimal.len() {
            let others: Vec<&IVec> = minimal
                .iter()
                .enumerate()
                .filter(|(b, _)| *b != a)
                .map(|(_, g)| g)
                .collect();
            let (r, _) = reduce(minimal[a].clone(), &others, true, &self.to);
            out.push(r);
        }
        let to = self.to;
        out.sort_by(|x, y| {
            let (xl, yl) = (x.lead(), y.lead());
            to.cmp((yl.pos, &yl.mono), (xl.pos, &xl.mono))
        });
        out
    }
}

/// A reduced Gröbner basis of a submodule of `R^rank`.
#[derive(Clone)]
pub struct GroebnerBasis {
    generators: Vec<ModuleVector>,
    order: MonomialOrder,
    rank: usize,
    nvars: usize,
    ints: Vec<IVec>,
}

impl fmt::Debug for GroebnerBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroebnerBasis")
            .field("rank", &self.rank)
            .field("generators", &self.generators)
            .finish()
    }
}

impl PartialEq for GroebnerBasis {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.order == other.order && self.generators == other.generators
    }
}

fn check_shape(gens: &[ModuleVector], nvars: usize, rank: usize) -> Result<(), GroebnerError> {
    for g in gens {
        if g.rank() != rank {
            return Err(GroebnerError::RankMismatch {
                expected: rank,
                found: g.rank(),
            });
        }
        if g.nvars() != nvars {
            return Err(GroebnerError::NvarsMismatch {
                expected: nvars,
                found: g.nvars(),
            });
        }
    }
    Ok(())
}

impl GroebnerBasis {
    /// Computes the reduced basis of the module generated by `gens` in
    /// `R^rank` over `nvars` symbols.
    pub fn compute(nvars: usize, rank: usize, gens: &[ModuleVector], ord: &MonomialOrder) -> Result<Self, GroebnerError> {
        check_shape(gens, nvars, rank)?;
        let to = TermOrder::plain(*ord);
        let mut engine = Engine::new(to);
        for g in gens {
            engine.add(IVec::from_vector(g, &to));
        }
        engine.run();
        Ok(Self::from_ints(nvars, rank, *ord, engine.reduced()))
    }

    fn from_ints(nvars: usize, rank: usize, order: MonomialOrder, ints: Vec<IVec>) -> Self {
        let generators = ints.iter().map(|g| g.to_monic(nvars, rank)).collect();
        GroebnerBasis {
            generators,
            order,
            rank,
            nvars,
            ints,
        }
    }

    /// Basis of the module generated by `self` and `extra`.
    pub fn extend(&self, extra: &[ModuleVector]) -> Result<Self, GroebnerError> {
        check_shape(extra, self.nvars, self.rank)?;
        let to = TermOrder::plain(self.order);
        let mut engine = Engine::new(to);
        engine.seed(&self.ints);
        for g in extra {
            engine.add(IVec::from_vector(g, &to));
        }
        engine.run();
        Ok(Self::from_ints(self.nvars, self.rank, self.order, engine.reduced()))
    }

    pub fn generators(&self) -> &[ModuleVector] {
        &self.generators
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// True when the module is all of `R^rank`.
    pub fn is_whole_module(&self) -> bool {
        (0..self.rank).all(|k| {
            self.ints
                .iter()
                .any(|g| g.lead().pos as usize == k && g.lead().mono.is_one())
        })
    }

    pub fn normal_form(&self, v: &ModuleVector) -> Result<ModuleVector, GroebnerError> {
        check_shape(std::slice::from_ref(v), self.nvars, self.rank)?;
        let to = TermOrder::plain(self.order);
        let iv = IVec::from_vector(v, &to);
        if iv.is_zero() {
            return Ok(ModuleVector::zero(self.nvars, self.rank));
        }
        // from_vector scaled v by some rational; recover it from one term.
        let factor = {
            let t = &iv.terms[0];
            let orig = v.component(t.pos as usize).coeff(&t.mono);
            Rational::from_integer(t.coeff.clone()) / orig
        };
        let refs: Vec<&IVec> = self.ints.iter().collect();
        let (r, s) = reduce(iv, &refs, true, &to);
        // r = s·factor·v (mod module)
        Ok(r.to_vector(self.nvars, self.rank, &(s * factor)))
    }

    pub fn contains(&self, v: &ModuleVector) -> Result<bool, GroebnerError> {
        check_shape(std::slice::from_ref(v), self.nvars, self.rank)?;
        let to = TermOrder::plain(self.order);
        let iv = IVec::from_vector(v, &to);
        let refs: Vec<&IVec> = self.ints.iter().collect();
        let (r, _) = reduce(iv, &refs, true, &to);
        Ok(r.is_zero())
    }

    pub fn contains_all(&self, vs: &[ModuleVector]) -> Result<bool, GroebnerError> {
        for v in vs {
            if !self.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Generators of the syzygy module of a list of vectors: each row `s`
/// satisfies `Σ s_i·gens_i = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SyzygyMatrix {
    pub rows: Vec<ModuleVector>,
    /// Number of input generators (length of every row).
    pub width: usize,
}

pub fn buchberger(nvars: usize, rank: usize, gens: &[ModuleVector], ord: &MonomialOrder) -> Result<GroebnerBasis, GroebnerError> {
    GroebnerBasis::compute(nvars, rank, gens, ord)
}

pub fn normal_form(v: &ModuleVector, gb: &GroebnerBasis) -> Result<ModuleVector, GroebnerError> {
    gb.normal_form(v)
}

pub fn membership(v: &ModuleVector, gb: &GroebnerBasis) -> Result<bool, GroebnerError> {
    gb.contains(v)
}

/// Equality of the submodules generated by `a` and `b`, decided by
/// comparing reduced bases.
pub fn module_equal(nvars: usize, rank: usize, a: &[ModuleVector], b: &[ModuleVector], ord: &MonomialOrder) -> Result<bool, GroebnerError> {
    let ga = GroebnerBasis::compute(nvars, rank, a, ord)?;
    let gb = GroebnerBasis::compute(nvars, rank, b, ord)?;
    Ok(ga.generators == gb.generators)
}

/// Syzygy module of `gens` (all of rank `rank`), as a reduced Gröbner basis
/// for the order induced on the trace block.
pub fn syzygies(nvars: usize, rank: usize, gens: &[ModuleVector], ord: &MonomialOrder) -> Result<SyzygyMatrix, GroebnerError> {
    check_shape(gens, nvars, rank)?;
    let r = gens.len();
    let to = TermOrder {
        ord: *ord,
        split: Some(rank),
    };
    let mut engine = Engine::new(to);
    for (i, g) in gens.iter().enumerate() {
        let mut comps = g.components().to_vec();
        comps.extend((0..r).map(|k| {
            if k == i {
                Polynomial::one(nvars)
            } else {
                Polynomial::zero(nvars)
            }
        }));
        engine.add(IVec::from_vector(&ModuleVector::new(nvars, comps), &to));
    }
    engine.run();
    let mut rows = Vec::new();
    for g in engine.reduced() {
        if (g.lead().pos as usize) < rank {
            continue;
        }
        let full = g.to_monic(nvars, rank + r);
        let comps = full.into_components().split_off(rank);
        let row = ModuleVector::new(nvars, comps);
        debug_assert!(
            ModuleVector::combination(nvars, rank, row.components(), gens).is_zero(),
            "syzygy exactness"
        );
        rows.push(row);
    }
    Ok(SyzygyMatrix { rows, width: r })
}
