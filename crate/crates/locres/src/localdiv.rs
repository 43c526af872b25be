//! Division with remainder in the localized ring.
//!
//! The engine is Mora's weak normal form: intermediate results join the set
//! of reducers, and among the reducers whose initial term divides the current
//! initial term the one of least ecart is used (lowest index on ties). Every
//! reduction by an intermediate result multiplies the recorded unit, so the
//! output satisfies `unit * f = sum q_i g_i + r` as a polynomial identity.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use crate::coeffring::{Coeff, ModuleOrder, Mono, RingSpec};
use crate::error::{Error, Result};
use crate::poly::{Frac, Poly};

/// Default reduction-step ceiling.
pub const DEFAULT_CEILING: u64 = 1_000_000;

/// Counts reduction steps against a ceiling.
#[derive(Clone, Debug)]
pub struct Budget {
    pub ceiling: u64,
    pub used: u64,
}

impl Budget {
    pub fn new(ceiling: u64) -> Budget {
        Budget { ceiling, used: 0 }
    }

    pub fn step(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.ceiling {
            Err(Error::Ceiling(self.ceiling))
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_CEILING)
    }
}

/// A term `c * m * e_k` of a free-module element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MTerm {
    pub m: Mono,
    pub k: usize,
    pub c: Coeff,
}

/// Sparse free-module element, terms ascending in a [`ModuleOrder`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ModVec {
    pub terms: Vec<MTerm>,
}

impl ModVec {
    pub fn zero() -> ModVec {
        ModVec { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn initial(&self) -> Option<&MTerm> {
        self.terms.first()
    }

    pub fn from_poly(p: &Poly) -> ModVec {
        ModVec {
            terms: p
                .terms()
                .iter()
                .map(|(m, c)| MTerm { m: *m, k: 0, c: c.clone() })
                .collect(),
        }
    }

    /// Builds from dense components.
    pub fn from_dense(v: &[Poly], ord: &ModuleOrder) -> ModVec {
        let mut terms: Vec<MTerm> = v
            .iter()
            .enumerate()
            .flat_map(|(k, p)| p.terms().iter().map(move |(m, c)| MTerm { m: *m, k, c: c.clone() }))
            .collect();
        terms.sort_by(|a, b| ord.cmp_term((&a.m, a.k), (&b.m, b.k)));
        ModVec { terms }
    }

    pub fn to_dense(&self, rank: usize, r: &RingSpec) -> Vec<Poly> {
        let mut parts: Vec<Vec<(Mono, Coeff)>> = vec![Vec::new(); rank];
        for t in &self.terms {
            parts[t.k].push((t.m, t.c.clone()));
        }
        parts.into_iter().map(|p| Poly::from_terms(r, p)).collect()
    }

    pub fn to_poly(&self, r: &RingSpec) -> Poly {
        Poly::from_terms(r, self.terms.iter().map(|t| (t.m, t.c.clone())))
    }

    pub fn neg(&self) -> ModVec {
        ModVec {
            terms: self
                .terms
                .iter()
                .map(|t| MTerm { m: t.m, k: t.k, c: -&t.c })
                .collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> ModVec {
        if c.is_zero() {
            return ModVec::zero();
        }
        ModVec {
            terms: self
                .terms
                .iter()
                .map(|t| MTerm { m: t.m, k: t.k, c: &t.c * c })
                .collect(),
        }
    }

    pub fn mul_term(&self, c: &Coeff, m: &Mono) -> ModVec {
        if c.is_zero() {
            return ModVec::zero();
        }
        ModVec {
            terms: self
                .terms
                .iter()
                .map(|t| MTerm { m: t.m.mul(m), k: t.k, c: &t.c * c })
                .collect(),
        }
    }

    pub fn add(&self, o: &ModVec, ord: &ModuleOrder) -> ModVec {
        merge(&self.terms, &o.terms, ord, None)
    }

    pub fn sub(&self, o: &ModVec, ord: &ModuleOrder) -> ModVec {
        merge(&self.terms, &o.terms, ord, Some(()))
    }

    /// `self - c*m*o` in one pass.
    pub fn sub_term_mul(&self, c: &Coeff, m: &Mono, o: &ModVec, ord: &ModuleOrder) -> ModVec {
        self.sub(&o.mul_term(c, m), ord)
    }

    pub fn mul_poly(&self, p: &Poly, ord: &ModuleOrder) -> ModVec {
        let mut acc = ModVec::zero();
        for (m, c) in p.terms() {
            acc = acc.add(&self.mul_term(c, m), ord);
        }
        acc
    }

    pub fn monic(&self) -> ModVec {
        match self.terms.first() {
            Some(t) if !t.c.is_one() => self.scale(&t.c.inv()),
            _ => self.clone(),
        }
    }

    /// Total degree minus the degree of the initial term.
    pub fn ecart(&self, ord: &ModuleOrder) -> u32 {
        let Some(t0) = self.terms.first() else { return 0 };
        let d0 = ord.term_deg(&t0.m, t0.k);
        self.terms
            .iter()
            .map(|t| ord.term_deg(&t.m, t.k))
            .max()
            .unwrap_or(d0)
            - d0
    }

    /// Minimum over components of `ord_P(entry) + mark`.
    pub fn ord_p(&self, ord: &ModuleOrder) -> Option<u32> {
        self.terms
            .iter()
            .map(|t| ord.ring.ord_p(&t.m) + ord.mark(t.k))
            .min()
    }
}

fn merge(a: &[MTerm], b: &[MTerm], ord: &ModuleOrder, negate_b: Option<()>) -> ModVec {
    let nb = |t: &MTerm| -> MTerm {
        if negate_b.is_some() {
            MTerm { m: t.m, k: t.k, c: -&t.c }
        } else {
            t.clone()
        }
    };
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match ord.cmp_term((&a[i].m, a[i].k), (&b[j].m, b[j].k)) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(nb(&b[j]));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b.is_some() { &a[i].c - &b[j].c } else { &a[i].c + &b[j].c };
                if !c.is_zero() {
                    out.push(MTerm { m: a[i].m, k: a[i].k, c });
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend(b[j..].iter().map(nb));
    ModVec { terms: out }
}

/// Outcome of a vector division: `unit * f = sum quotients[i] * divisors[i] + remainder`.
#[derive(Clone, Debug)]
pub struct VecDivision {
    pub unit: Poly,
    pub quotients: Vec<Poly>,
    pub remainder: ModVec,
    /// True when no remainder term is divisible by an initial term of a divisor.
    pub fully_reduced: bool,
}

struct Reducer {
    elem: ModVec,
    ecart: u32,
    /// `None` for an original divisor; otherwise the representation
    /// `elem = unit * f - sum q_i g_i`.
    rep: Option<(Poly, Vec<Poly>)>,
    index: usize,
}

fn divides_term(g: &MTerm, t: &MTerm) -> bool {
    g.k == t.k && g.m.divides(&t.m)
}

/// `(unit, quotients, remainder)` with `unit*f - sum q_i g_i = remainder`.
pub type WeakNf = (Poly, Vec<Poly>, ModVec);

/// Mora weak normal form of `f`. With `soft = Some(n)` the reduction gives
/// up after `n` steps and returns `None`.
fn weak_nf_capped(
    f: &ModVec,
    divs: &[ModVec],
    ord: &ModuleOrder,
    budget: &mut Budget,
    soft: Option<u64>,
) -> Result<Option<WeakNf>> {
    let r = &ord.ring;
    let mut reducers: Vec<Reducer> = divs
        .iter()
        .enumerate()
        .filter(|(_, g)| !g.is_zero())
        .map(|(i, g)| Reducer {
            elem: g.clone(),
            ecart: g.ecart(ord),
            rep: None,
            index: i,
        })
        .collect();
    let mut h = f.clone();
    let mut unit = Poly::one(r);
    let mut q: Vec<Poly> = vec![Poly::zero(); divs.len()];
    let mut steps = 0u64;
    while let Some(th) = h.initial().cloned() {
        let best = reducers
            .iter()
            .enumerate()
            .filter(|(_, g)| divides_term(g.elem.initial().unwrap(), &th))
            .min_by_key(|(_, g)| (g.ecart, g.index));
        let Some((bi, _)) = best else { break };
        budget.step()?;
        steps += 1;
        if soft.is_some_and(|n| steps > n) {
            return Ok(None);
        }
        let eh = h.ecart(ord);
        let g0 = reducers[bi].elem.initial().unwrap().clone();
        let m = g0.m.quotient_of(&th.m);
        let c = th.c.div(&g0.c);
        if reducers[bi].ecart > eh {
            let idx = divs.len() + reducers.len();
            reducers.push(Reducer {
                elem: h.clone(),
                ecart: eh,
                rep: Some((unit.clone(), q.clone())),
                index: idx,
            });
        }
        let g = &reducers[bi];
        h = h.sub_term_mul(&c, &m, &g.elem, ord);
        match &g.rep {
            None => {
                q[g.index] = q[g.index].add(&Poly::term(c.clone(), m), r);
            }
            Some((u2, q2)) => {
                unit = unit.sub(&u2.mul_term(&c, &m), r);
                for (qi, q2i) in q.iter_mut().zip(q2) {
                    if !q2i.is_zero() {
                        *qi = qi.sub(&q2i.mul_term(&c, &m), r);
                    }
                }
            }
        }
    }
    debug_assert!(unit.constant_term(r).is_one());
    Ok(Some((unit, q, h)))
}

fn weak_nf(f: &ModVec, divs: &[ModVec], ord: &ModuleOrder, budget: &mut Budget) -> Result<WeakNf> {
    Ok(weak_nf_capped(f, divs, ord, budget, None)?.expect("uncapped"))
}

/// Position of the first term at or after `start` divisible by an initial
/// term of a divisor.
fn first_divisible(h: &ModVec, divs: &[ModVec], start: usize) -> Option<usize> {
    let inits: Vec<&MTerm> = divs.iter().filter_map(|g| g.initial()).collect();
    (start..h.terms.len()).find(|&i| inits.iter().any(|g| divides_term(g, &h.terms[i])))
}

/// Divides `f` by `divs` and then reduces the tail of the remainder.
pub fn divide_vec(
    f: &ModVec,
    divs: &[ModVec],
    ord: &ModuleOrder,
    budget: &mut Budget,
) -> Result<VecDivision> {
    let floor = f.initial().cloned();
    let weak = weak_nf_capped(f, divs, ord, budget, Some(SOFT_STEPS))?;
    if let Some((unit, q, h)) = &weak {
        if first_divisible(h, divs, 0).is_none() {
            return Ok(VecDivision {
                unit: unit.clone(),
                quotients: q.clone(),
                remainder: h.clone(),
                fully_reduced: true,
            });
        }
    }
    // A divisible tail or a long Mora run usually means some divisor is a
    // unit multiple of something simpler; the bounded linear search finds
    // such identities directly.
    if let Some((v, p, rem)) = solve_reduced(f, divs, ord, budget, floor.as_ref(), false)? {
        return Ok(VecDivision {
            unit: v,
            quotients: p,
            remainder: rem,
            fully_reduced: true,
        });
    }
    let (unit, q, h) = match weak {
        Some(w) => w,
        None => weak_nf(f, divs, ord, budget)?,
    };
    reduce_tail(unit, q, h, divs, ord, budget, 0)
}

/// Weak normal form division: only the initial term of the remainder is
/// guaranteed to be reduced. `fully_reduced` still reports the whole tail.
pub fn weak_divide_vec(
    f: &ModVec,
    divs: &[ModVec],
    ord: &ModuleOrder,
    budget: &mut Budget,
) -> Result<VecDivision> {
    let done = |(unit, quotients, remainder): WeakNf| {
        let fully_reduced = first_divisible(&remainder, divs, 0).is_none();
        VecDivision {
            unit,
            quotients,
            remainder,
            fully_reduced,
        }
    };
    if let Some(w) = weak_nf_capped(f, divs, ord, budget, Some(SOFT_STEPS))? {
        return Ok(done(w));
    }
    let floor = f.initial().cloned();
    if let Some(w) = solve_reduced(f, divs, ord, budget, floor.as_ref(), false)? {
        return Ok(done(w));
    }
    Ok(done(weak_nf(f, divs, ord, budget)?))
}

/// Reduces the tail of `f` against `divs` (which may contain `f` itself)
/// keeping its initial term: returns `(v, p, r)` with
/// `r = v*f - sum p_j divs_j`, `in(r) = in(f)` with the same coefficient and
/// no tail term of `r` divisible by an initial term. `None` when no such
/// identity was found.
pub fn reduce_element_tail(
    f: &ModVec,
    divs: &[ModVec],
    ord: &ModuleOrder,
    budget: &mut Budget,
) -> Result<Option<WeakNf>> {
    let r = &ord.ring;
    if f.is_zero() || first_divisible(f, divs, 1).is_none() {
        return Ok(Some((Poly::one(r), vec![Poly::zero(); divs.len()], f.clone())));
    }
    let res = reduce_tail(Poly::one(r), vec![Poly::zero(); divs.len()], f.clone(), divs, ord, budget, 1)?;
    if res.fully_reduced {
        // reduce_tail returns unit*f - sum q g = remainder
        let p = res.quotients;
        return Ok(Some((res.unit, p, res.remainder)));
    }
    solve_reduced(f, divs, ord, budget, f.initial(), true)
}

/// Mora steps tried before the linear search is consulted.
const SOFT_STEPS: u64 = 300;

/// Iterated tail passes.
const TAIL_PASSES: usize = 4;
/// Mora steps allowed in one tail pass.
const TAIL_SOFT_STEPS: u64 = 60;
/// Extra degrees searched by the linear fallback.
const SOLVE_EXTRA_DEG: u32 = 40;
/// Largest unknown count the linear fallback will attempt.
const SOLVE_MAX_UNKNOWNS: usize = 4000;

/// Tail reduction of `h = unit*f - sum q g` from position `start` on.
///
/// Iterated weak normal forms of the tail can cycle in the localized ring,
/// since each pass rescales the reduced prefix by a unit, so the number of
/// passes is bounded. The identity always holds; `fully_reduced` reports
/// whether the tail was cleared.
pub(crate) fn reduce_tail(
    unit: Poly,
    q: Vec<Poly>,
    h: ModVec,
    divs: &[ModVec],
    ord: &ModuleOrder,
    budget: &mut Budget,
    start: usize,
) -> Result<VecDivision> {
    let r = &ord.ring;
    let (mut unit, mut q, mut h) = (unit, q, h);
    let mut seen: HashSet<ModVec> = HashSet::new();
    let mut passes = 0;
    while let Some(t) = first_divisible(&h, divs, start) {
        if passes == TAIL_PASSES || !seen.insert(h.clone()) {
            break;
        }
        passes += 1;
        let low = ModVec { terms: h.terms[..t].to_vec() };
        let high = ModVec { terms: h.terms[t..].to_vec() };
        let Some((u2, q2, r2)) = weak_nf_capped(&high, divs, ord, budget, Some(TAIL_SOFT_STEPS))? else {
            break;
        };
        h = low.mul_poly(&u2, ord).add(&r2, ord);
        unit = unit.mul(&u2, r);
        for (qi, q2i) in q.iter_mut().zip(&q2) {
            *qi = qi.mul(&u2, r).add(q2i, r);
        }
    }
    if first_divisible(&h, divs, start).is_none() {
        return Ok(VecDivision {
            unit,
            quotients: q,
            remainder: h,
            fully_reduced: true,
        });
    }
    Ok(VecDivision {
        unit,
        quotients: q,
        remainder: h,
        fully_reduced: false,
    })
}

/// Linear system for one degree bound of [`solve_reduced`]: the unknowns
/// are the coefficients of `v - 1` and of the `p_i`, and the equations ask
/// every term of `v*h - sum p_i g_i` divisible by an initial term to vanish.
struct ReductionSystem {
    vmons: Vec<Mono>,
    pmons: Vec<Vec<Mono>>,
    rows: Vec<crate::linalg::SparseRow>,
    rhs: Vec<Coeff>,
    ncols: usize,
}

fn mod_deg(v: &ModVec) -> u32 {
    v.terms.iter().map(|t| t.m.deg()).max().unwrap_or(0)
}

fn reduction_system(
    h: &ModVec,
    divs: &[ModVec],
    ord: &ModuleOrder,
    floor: Option<&MTerm>,
    keep_initial: bool,
    e: u32,
) -> Option<ReductionSystem> {
    let n = ord.ring.n();
    let dh = mod_deg(h);
    let inits: Vec<&MTerm> = divs.iter().filter_map(|g| g.initial()).collect();
    let vmons: Vec<Mono> = crate::linalg::monomials_upto(n, e.saturating_sub(dh))
        .into_iter()
        .filter(|m| !m.is_one())
        .collect();
    let pmons: Vec<Vec<Mono>> = divs
        .iter()
        .map(|g| {
            let dg = mod_deg(g);
            let Some(gi) = g.initial().filter(|_| dg <= e) else {
                return Vec::new();
            };
            crate::linalg::monomials_upto(n, e - dg)
                .into_iter()
                .filter(|mu| match floor {
                    Some(fl) => {
                        let c = ord.cmp_term((&mu.mul(&gi.m), gi.k), (&fl.m, fl.k));
                        c == Ordering::Greater || (c == Ordering::Equal && !keep_initial)
                    }
                    None => true,
                })
                .collect()
        })
        .collect();
    let ncols = vmons.len() + pmons.iter().map(Vec::len).sum::<usize>();
    if ncols > SOLVE_MAX_UNKNOWNS {
        return None;
    }
    let mut eq_index: HashMap<(Mono, usize), usize> = HashMap::new();
    let mut rows: Vec<crate::linalg::SparseRow> = Vec::new();
    let exempt = if keep_initial { h.initial().map(|t| (t.m, t.k)) } else { None };
    let mut slot = |rows: &mut Vec<crate::linalg::SparseRow>, m: Mono, k: usize| -> Option<usize> {
        if exempt == Some((m, k)) || !inits.iter().any(|g| g.k == k && g.m.divides(&m)) {
            return None;
        }
        let len = eq_index.len();
        let i = *eq_index.entry((m, k)).or_insert(len);
        if i == rows.len() {
            rows.push(Vec::new());
        }
        Some(i)
    };
    let mut col = 0;
    for mu in &vmons {
        for t in &h.terms {
            if let Some(i) = slot(&mut rows, mu.mul(&t.m), t.k) {
                rows[i].push((col, t.c.clone()));
            }
        }
        col += 1;
    }
    for (g, mons) in divs.iter().zip(&pmons) {
        for mu in mons {
            for t in &g.terms {
                if let Some(i) = slot(&mut rows, mu.mul(&t.m), t.k) {
                    rows[i].push((col, -t.c.clone()));
                }
            }
            col += 1;
        }
    }
    let zero = ord.ring.field.zero();
    let mut rhs = vec![zero.clone(); rows.len()];
    for t in &h.terms {
        if let Some(i) = slot(&mut rows, t.m, t.k) {
            if i == rhs.len() {
                rhs.push(zero.clone());
            }
            rhs[i] = -t.c.clone();
        }
    }
    Some(ReductionSystem {
        vmons,
        pmons,
        rows,
        rhs,
        ncols,
    })
}

/// Searches for `v` with `v(0) = 1` and `p_i` such that no term of
/// `r = v*h - sum p_i g_i` is divisible by an initial term. Quotient terms
/// are restricted so that `in(p_i g_i)` is not below `floor`. With
/// `keep_initial` the bound is strict and the initial term of `h` is kept.
///
/// Solvability is monotone in the degree bound, so the bound is located by
/// doubling and bisection with modular consistency tests, and the exact
/// system is solved once.
fn solve_reduced(
    h: &ModVec,
    divs: &[ModVec],
    ord: &ModuleOrder,
    budget: &mut Budget,
    floor: Option<&MTerm>,
    keep_initial: bool,
) -> Result<Option<WeakNf>> {
    let ring = &ord.ring;
    let lo0 = divs.iter().map(mod_deg).max().unwrap_or(0).max(mod_deg(h));
    let mut cap = lo0 + SOLVE_EXTRA_DEG;
    let system = |e: u32, budget: &mut Budget| -> Result<Option<ReductionSystem>> {
        let sys = reduction_system(h, divs, ord, floor, keep_initial, e);
        if let Some(s) = &sys {
            for _ in 0..s.rows.len().max(1) {
                budget.step()?;
            }
        }
        Ok(sys)
    };
    let consistent = |s: &ReductionSystem| crate::linalg::probably_consistent(&s.rows, &s.rhs, s.ncols, ring.field);
    let (mut lo, mut hi) = (lo0, None);
    let (mut e, mut step) = (lo0, 1);
    while e <= cap {
        match system(e, budget)? {
            None => {
                if e == lo {
                    break;
                }
                cap = e - 1;
                e = cap;
            }
            Some(sys) if consistent(&sys) => {
                hi = Some(e);
                break;
            }
            Some(_) => {
                lo = e + 1;
                if e == cap {
                    break;
                }
                e = (e + step).min(cap);
                step *= 2;
            }
        }
    }
    let Some(mut hi) = hi else {
        return Ok(None);
    };
    while lo < hi {
        let mid = (lo + hi) / 2;
        match system(mid, budget)? {
            Some(sys) if consistent(&sys) => hi = mid,
            _ => lo = mid + 1,
        }
    }
    for e in hi..=cap {
        let Some(sys) = system(e, budget)? else {
            return Ok(None);
        };
        let Some(x) = crate::linalg::solve_exact(&sys.rows, &sys.rhs, sys.ncols, ring.field) else {
            continue;
        };
        let mut it = x.into_iter();
        let v = Poly::one(ring).add(
            &Poly::from_terms(ring, sys.vmons.iter().map(|m| (*m, it.next().unwrap()))),
            ring,
        );
        let p: Vec<Poly> = sys
            .pmons
            .iter()
            .map(|mons| Poly::from_terms(ring, mons.iter().map(|m| (*m, it.next().unwrap()))))
            .collect();
        let mut rem = h.mul_poly(&v, ord);
        for (pi, g) in p.iter().zip(divs) {
            if !pi.is_zero() {
                rem = rem.sub(&g.mul_poly(pi, ord), ord);
            }
        }
        debug_assert!(first_divisible(&rem, divs, usize::from(keep_initial)).is_none());
        return Ok(Some((v, p, rem)));
    }
    Ok(None)
}

/// Result of [`mora_divide`]: `unit * f = sum quotients[i] * g_i + remainder`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionResult {
    pub unit: Poly,
    pub quotients: Vec<Poly>,
    pub remainder: Poly,
    pub fully_reduced: bool,
}

impl DivisionResult {
    /// Checks the division identity exactly.
    pub fn identity_holds(&self, f: &Poly, divisors: &[Poly], r: &RingSpec) -> bool {
        let mut rhs = self.remainder.clone();
        for (q, g) in self.quotients.iter().zip(divisors) {
            rhs = rhs.add(&q.mul(g, r), r);
        }
        self.unit.mul(f, r) == rhs
    }

    /// No remainder term is divisible by an initial monomial of a divisor.
    pub fn remainder_reduced(&self, divisors: &[Poly]) -> bool {
        let inits: Vec<Mono> = divisors.iter().filter_map(|g| g.initial().map(|t| t.0)).collect();
        self.remainder
            .terms()
            .iter()
            .all(|(m, _)| !inits.iter().any(|g| g.divides(m)))
    }

    /// The initial remainder term is not divisible by any divisor's initial monomial.
    pub fn remainder_initial_reduced(&self, divisors: &[Poly]) -> bool {
        match self.remainder.initial() {
            None => true,
            Some((m, _)) => !divisors
                .iter()
                .filter_map(|g| g.initial())
                .any(|(g, _)| g.divides(m)),
        }
    }
}

/// Mora division of a polynomial.
pub fn mora_divide(f: &Poly, divisors: &[Poly], spec: &RingSpec) -> Result<DivisionResult> {
    mora_divide_with(f, divisors, spec, &mut Budget::default())
}

pub fn mora_divide_with(
    f: &Poly,
    divisors: &[Poly],
    spec: &RingSpec,
    budget: &mut Budget,
) -> Result<DivisionResult> {
    if divisors.iter().any(|g| g.is_zero()) {
        return Err(Error::Precondition("zero divisor in division list".into()));
    }
    let ord = ModuleOrder::ring(spec);
    let divs: Vec<ModVec> = divisors.iter().map(ModVec::from_poly).collect();
    let d = divide_vec(&ModVec::from_poly(f), &divs, &ord, budget)?;
    Ok(DivisionResult {
        unit: d.unit,
        quotients: d.quotients,
        remainder: d.remainder.to_poly(spec),
        fully_reduced: d.fully_reduced,
    })
}

/// A generator after preprocessing, `poly = sum combo[j] * gens[j]` with
/// local coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalGenerator {
    pub poly: Poly,
    pub combo: Vec<Frac>,
}

impl LocalGenerator {
    /// Checks the recorded combination exactly.
    pub fn combination_holds(&self, gens: &[Poly], r: &RingSpec) -> bool {
        let mut acc = Frac::zero(r);
        for (c, g) in self.combo.iter().zip(gens) {
            acc = acc.add(&c.mul_poly(g, r), r);
        }
        acc.eq_in(&Frac::from_poly(self.poly.clone(), r), r)
    }
}

/// Successive division making the generators a local basis: no initial
/// monomial divides a tail monomial of any generator.
pub fn local_basis_preprocess(gens: &[Poly], spec: &RingSpec) -> Result<Vec<LocalGenerator>> {
    local_basis_preprocess_with(gens, spec, &mut Budget::default())
}

pub fn local_basis_preprocess_with(
    gens: &[Poly],
    spec: &RingSpec,
    budget: &mut Budget,
) -> Result<Vec<LocalGenerator>> {
    if gens.iter().any(|g| g.is_zero()) {
        return Err(Error::Precondition("zero generator".into()));
    }
    let ord = ModuleOrder::ring(spec);
    let m = gens.len();
    let mut cur: Vec<LocalGenerator> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut combo = vec![Frac::zero(spec); m];
            combo[i] = Frac::from_poly(Poly::one(spec), spec);
            LocalGenerator { poly: g.clone(), combo }
        })
        .collect();
    for _round in 0..4 * m {
        let mut changed = false;
        for i in 0..m {
            let divs: Vec<ModVec> = cur.iter().map(|g| ModVec::from_poly(&g.poly)).collect();
            let Some((e, coeffs)) = self_reduce(&cur[i].poly, i, &divs, &ord, budget)? else {
                continue;
            };
            // e = sum coeffs[j] * cur[j]
            let mut combo = vec![Frac::zero(spec); m];
            for (j, cj) in coeffs.iter().enumerate() {
                if cj.is_zero() {
                    continue;
                }
                for (k, ck) in cur[j].combo.iter().enumerate() {
                    combo[k] = combo[k].add(&cj.mul(ck, spec), spec);
                }
            }
            let lc = e.initial().unwrap().1.inv();
            let lcp = Poly::constant(lc.clone());
            cur[i] = LocalGenerator {
                poly: e.scale(&lc),
                combo: combo.iter().map(|c| c.mul_poly(&lcp, spec)).collect(),
            };
            changed = true;
        }
        if !changed {
            break;
        }
    }
    Ok(cur)
}

/// Rewrites generator `i` so its tail is reduced against all generators.
///
/// Returns `(e, c)` with `e = sum c_j g_j`, or `None` when nothing changes.
/// A generator `m * v` with `v` a unit becomes the monomial `m`.
fn self_reduce(
    g: &Poly,
    i: usize,
    divs: &[ModVec],
    ord: &ModuleOrder,
    budget: &mut Budget,
) -> Result<Option<(Poly, Vec<Frac>)>> {
    let r = &ord.ring;
    let h = ModVec::from_poly(g);
    if first_divisible(&h, divs, 1).is_none() {
        return Ok(None);
    }
    let mut coeffs = vec![Frac::zero(r); divs.len()];
    let (m0, c0) = g.initial().unwrap().clone();
    if g.len() > 1 && g.terms().iter().all(|(m, _)| m0.divides(m)) {
        let v = Poly::from_terms(r, g.terms().iter().map(|(m, c)| (m0.quotient_of(m), c.div(&c0))));
        coeffs[i] = Frac::new(Poly::one(r), v, r)?;
        return Ok(Some((Poly::term(c0, m0), coeffs)));
    }
    let res = reduce_tail(Poly::one(r), vec![Poly::zero(); divs.len()], h, divs, ord, budget, 1)?;
    if !res.fully_reduced {
        return Ok(None);
    }
    // unit * g_i = sum q_j g_j + e
    let e = res.remainder.to_poly(r);
    if e == *g {
        return Ok(None);
    }
    for (j, qj) in res.quotients.iter().enumerate() {
        coeffs[j] = Frac::from_poly(qj.neg(), r);
    }
    coeffs[i] = coeffs[i].add(&Frac::from_poly(res.unit.clone(), r), r);
    Ok(Some((e, coeffs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_poly, parse_polys};

    fn ring() -> RingSpec {
        RingSpec::q(&["x", "y"])
    }

    #[test]
    fn monomial_divisors() {
        let r = ring();
        let f = parse_poly("x^3+y^3", &r).unwrap();
        let g = parse_polys(&["x", "y"], &r).unwrap();
        let d = mora_divide(&f, &g, &r).unwrap();
        assert!(d.unit.is_constant() && d.unit.constant_term(&r).is_one());
        assert_eq!(d.quotients, parse_polys(&["x^2", "y^2"], &r).unwrap());
        assert!(d.remainder.is_zero());
    }

    #[test]
    fn unit_from_localization() {
        let r = ring();
        let f = parse_poly("x", &r).unwrap();
        let g = parse_polys(&["x-x^2"], &r).unwrap();
        let d = mora_divide(&f, &g, &r).unwrap();
        assert_eq!(d.unit, parse_poly("1-x", &r).unwrap());
        assert_eq!(d.quotients[0], Poly::one(&r));
        assert!(d.remainder.is_zero());
        assert!(d.identity_holds(&f, &g, &r));
    }

    #[test]
    fn no_divisibility() {
        let r = ring();
        let f = parse_poly("y", &r).unwrap();
        let g = parse_polys(&["x"], &r).unwrap();
        let d = mora_divide(&f, &g, &r).unwrap();
        assert!(d.quotients[0].is_zero());
        assert_eq!(d.remainder, f);
        let z = mora_divide(&Poly::zero(), &g, &r).unwrap();
        assert!(z.remainder.is_zero() && z.unit == Poly::one(&r));
    }

    #[test]
    fn preprocess_examples() {
        let r = ring();
        let out = local_basis_preprocess(&parse_polys(&["x", "y"], &r).unwrap(), &r).unwrap();
        assert_eq!(out[0].poly, parse_poly("x", &r).unwrap());
        let out = local_basis_preprocess(&parse_polys(&["x-x^2", "y"], &r).unwrap(), &r).unwrap();
        assert_eq!(out[0].poly, parse_poly("x", &r).unwrap());
        let out = local_basis_preprocess(&parse_polys(&["x^2+y^3", "y^3"], &r).unwrap(), &r).unwrap();
        assert_eq!(out[0].poly, parse_poly("x^2", &r).unwrap());
        assert_eq!(out[1].poly, parse_poly("y^3", &r).unwrap());
        let gens = parse_polys(&["x^2+y^3", "y^3"], &r).unwrap();
        for g in &out {
            assert!(g.combination_holds(&gens, &r));
        }
    }

    #[test]
    fn tail_needs_a_nontrivial_unit() {
        // tail passes alone cycle between (1-x)y and y-xy here
        let r = ring();
        let f = parse_poly("y+x^2", &r).unwrap();
        let g = parse_polys(&["x-x^2"], &r).unwrap();
        let d = mora_divide(&f, &g, &r).unwrap();
        assert!(d.identity_holds(&f, &g, &r));
        assert!(d.fully_reduced && d.remainder_reduced(&g));
    }

    #[test]
    fn divisor_with_unit_factor() {
        let r = ring();
        let f = parse_poly("x*y^2-2*x^4-2*x*y^4-2*x^3*y^3", &r).unwrap();
        let g = parse_polys(&["y+3*x^3*y^2"], &r).unwrap();
        let d = mora_divide(&f, &g, &r).unwrap();
        assert!(d.identity_holds(&f, &g, &r));
        assert!(d.fully_reduced && d.remainder_reduced(&g));
    }

    #[test]
    fn full_reduction_can_be_impossible() {
        // On the curve y = x - x^2 a remainder r(y) would have to vanish at
        // (1, 0), where f does, while r(0) = v(0) f(0) != 0.
        let r = ring();
        let f = parse_poly("(x-1)^2", &r).unwrap();
        let g = parse_polys(&["x-x^2-y"], &r).unwrap();
        let d = mora_divide(&f, &g, &r).unwrap();
        assert!(d.identity_holds(&f, &g, &r));
        assert!(d.remainder_initial_reduced(&g));
        assert!(!d.fully_reduced && !d.remainder_reduced(&g));
    }
}
