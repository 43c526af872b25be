//! S-polynomials and Buchberger-Mora completion of standard bases for
//! ideals and submodules of free modules over the localized ring.

use std::cmp::Ordering;

use crate::coeffring::{ModuleOrder, RingSpec};
use crate::error::{Error, Result};
use crate::localdiv::{reduce_element_tail, weak_divide_vec, Budget, MTerm, ModVec};
use crate::poly::{leading_form_p, Frac, Poly};

/// A standard basis of a submodule, sorted by initial term ascending.
/// `combos[i][j]` is the local coefficient of input `j` in element `i`.
#[derive(Clone, Debug)]
pub struct StdBasisVec {
    pub order: ModuleOrder,
    pub elements: Vec<ModVec>,
    pub combos: Vec<Vec<Frac>>,
    /// Leading coefficients are one, no initial term divides another, and
    /// every tail is reduced.
    pub reduced: bool,
    /// Number of S-pairs skipped by the chain criterion.
    pub chain_skipped: usize,
}

/// Standard basis of an ideal.
#[derive(Clone, Debug)]
pub struct StandardBasis {
    pub ring: RingSpec,
    pub elements: Vec<Poly>,
    pub combos: Vec<Vec<Frac>>,
    pub reduced: bool,
    pub chain_skipped: usize,
}

impl StandardBasis {
    fn from_vec(b: StdBasisVec) -> StandardBasis {
        let ring = b.order.ring.clone();
        StandardBasis {
            elements: b.elements.iter().map(|e| e.to_poly(&ring)).collect(),
            ring,
            combos: b.combos,
            reduced: b.reduced,
            chain_skipped: b.chain_skipped,
        }
    }

    pub fn as_vec(&self) -> StdBasisVec {
        StdBasisVec {
            order: ModuleOrder::ring(&self.ring),
            elements: self.elements.iter().map(ModVec::from_poly).collect(),
            combos: self.combos.clone(),
            reduced: self.reduced,
            chain_skipped: self.chain_skipped,
        }
    }

    /// Verifies every recorded input combination exactly.
    pub fn combinations_hold(&self, gens: &[Poly]) -> bool {
        let r = &self.ring;
        self.elements.iter().zip(&self.combos).all(|(e, c)| {
            let mut acc = Frac::zero(r);
            for (cj, g) in c.iter().zip(gens) {
                acc = acc.add(&cj.mul_poly(g, r), r);
            }
            acc.eq_in(&Frac::from_poly(e.clone(), r), r)
        })
    }
}

/// S-vector of `f` and `g`: `(S, p_f, p_g)` with `S = p_f f + p_g g`, the
/// `p` being terms that cancel the initial terms. Zero when the initial
/// terms lie in different components.
pub fn s_vec(f: &ModVec, g: &ModVec, ord: &ModuleOrder) -> (ModVec, Poly, Poly) {
    let (Some(a), Some(b)) = (f.initial(), g.initial()) else {
        return (ModVec::zero(), Poly::zero(), Poly::zero());
    };
    if a.k != b.k {
        return (ModVec::zero(), Poly::zero(), Poly::zero());
    }
    let l = a.m.lcm(&b.m);
    let ca = a.c.inv();
    let cb = -b.c.inv();
    let ma = a.m.quotient_of(&l);
    let mb = b.m.quotient_of(&l);
    let s = f.mul_term(&ca, &ma).add(&g.mul_term(&cb, &mb), ord);
    (s, Poly::term(ca, ma), Poly::term(cb, mb))
}

/// S-polynomial: `(S, (p_f, p_g))` with `S = p_f f + p_g g`.
pub fn s_poly(f: &Poly, g: &Poly, spec: &RingSpec) -> (Poly, (Poly, Poly)) {
    let ord = ModuleOrder::ring(spec);
    let (s, pf, pg) = s_vec(&ModVec::from_poly(f), &ModVec::from_poly(g), &ord);
    (s.to_poly(spec), (pf, pg))
}

fn lcm_term(a: &MTerm, b: &MTerm) -> Option<(crate::coeffring::Mono, usize)> {
    (a.k == b.k).then(|| (a.m.lcm(&b.m), a.k))
}

struct Pair {
    i: usize,
    j: usize,
    lcm: (crate::coeffring::Mono, usize),
}

/// Standard basis of an ideal.
pub fn standard_basis(gens: &[Poly], spec: &RingSpec) -> Result<StandardBasis> {
    standard_basis_with(gens, spec, &mut Budget::default())
}

pub fn standard_basis_with(gens: &[Poly], spec: &RingSpec, budget: &mut Budget) -> Result<StandardBasis> {
    let ord = ModuleOrder::ring(spec);
    let v: Vec<ModVec> = gens.iter().map(ModVec::from_poly).collect();
    Ok(StandardBasis::from_vec(standard_basis_vec(&v, &ord, budget)?))
}

/// Buchberger-Mora completion of a submodule, then minimalization and tail
/// reduction.
pub fn standard_basis_vec(gens: &[ModVec], ord: &ModuleOrder, budget: &mut Budget) -> Result<StdBasisVec> {
    let r = &ord.ring;
    if gens.iter().any(|g| g.is_zero()) {
        return Err(Error::Precondition("zero generator".into()));
    }
    let m = gens.len();
    let mut elems: Vec<ModVec> = Vec::new();
    let mut combos: Vec<Vec<Frac>> = Vec::new();
    let mut pending: Vec<Pair> = Vec::new();

    let add = |h: ModVec,
               c: Vec<Frac>,
               elems: &mut Vec<ModVec>,
               combos: &mut Vec<Vec<Frac>>,
               pending: &mut Vec<Pair>| {
        let lc = h.initial().unwrap().c.inv();
        let lcp = Poly::constant(lc.clone());
        let h = h.scale(&lc);
        let c: Vec<Frac> = c.iter().map(|x| x.mul_poly(&lcp, r)).collect();
        let j = elems.len();
        for (i, e) in elems.iter().enumerate() {
            if let Some(l) = lcm_term(e.initial().unwrap(), h.initial().unwrap()) {
                pending.push(Pair { i, j, lcm: l });
            }
        }
        elems.push(h);
        combos.push(c);
    };

    for (i, g) in gens.iter().enumerate() {
        let mut c = vec![Frac::zero(r); m];
        c[i] = Frac::from_poly(Poly::one(r), r);
        add(g.clone(), c, &mut elems, &mut combos, &mut pending);
    }
    let is_pending = |pending: &[Pair], a: usize, b: usize| {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        pending.iter().any(|p| p.i == a && p.j == b)
    };
    let mut chain_skipped = 0;
    while !pending.is_empty() {
        // normal strategy: least lcm first, ties by (j, i)
        let best = (0..pending.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&pending[a], &pending[b]);
                ord.cmp_term((&pa.lcm.0, pa.lcm.1), (&pb.lcm.0, pb.lcm.1))
                    .then((pa.j, pa.i).cmp(&(pb.j, pb.i)))
            })
            .unwrap();
        let pair = pending.swap_remove(best);
        let (i, j) = (pair.i, pair.j);
        let chain = (0..elems.len()).any(|k| {
            if k == i || k == j {
                return false;
            }
            let t = elems[k].initial().unwrap();
            t.k == pair.lcm.1
                && t.m.divides(&pair.lcm.0)
                && !is_pending(&pending, i, k)
                && !is_pending(&pending, j, k)
        });
        if chain {
            chain_skipped += 1;
            continue;
        }
        let (s, pf, pg) = s_vec(&elems[i], &elems[j], ord);
        if s.is_zero() {
            continue;
        }
        let d = weak_divide_vec(&s, &elems, ord, budget)?;
        if d.remainder.is_zero() {
            continue;
        }
        // h = u (pf f_i + pg f_j) - sum q_k f_k
        let mut c: Vec<Frac> = vec![Frac::zero(r); m];
        let upf = d.unit.mul(&pf, r);
        let upg = d.unit.mul(&pg, r);
        for t in 0..m {
            let mut acc = combos[i][t].mul_poly(&upf, r).add(&combos[j][t].mul_poly(&upg, r), r);
            for (k, qk) in d.quotients.iter().enumerate() {
                if !qk.is_zero() && !combos[k][t].is_zero() {
                    acc = acc.sub(&combos[k][t].mul_poly(qk, r), r);
                }
            }
            c[t] = acc;
        }
        add(d.remainder, c, &mut elems, &mut combos, &mut pending);
    }
    let (elements, combos, reduced) = minimal_reduced(elems, combos, ord, budget)?;
    Ok(StdBasisVec {
        order: ord.clone(),
        elements,
        combos,
        reduced,
        chain_skipped,
    })
}

type Reduced = (Vec<ModVec>, Vec<Vec<Frac>>, bool);

/// Drops elements whose initial term is divisible by another initial term,
/// normalizes, reduces tails and sorts ascending.
fn minimal_reduced(
    elems: Vec<ModVec>,
    combos: Vec<Vec<Frac>>,
    ord: &ModuleOrder,
    budget: &mut Budget,
) -> Result<Reduced> {
    let r = &ord.ring;
    let mut idx: Vec<usize> = (0..elems.len()).collect();
    idx.sort_by(|&a, &b| {
        let (ta, tb) = (elems[a].initial().unwrap(), elems[b].initial().unwrap());
        ord.cmp_term((&ta.m, ta.k), (&tb.m, tb.k)).then(a.cmp(&b))
    });
    let mut keep: Vec<usize> = Vec::new();
    for &a in &idx {
        let ta = elems[a].initial().unwrap();
        let redundant = keep.iter().any(|&b| {
            let tb = elems[b].initial().unwrap();
            tb.k == ta.k && tb.m.divides(&ta.m)
        });
        if !redundant {
            keep.push(a);
        }
    }
    let mut out: Vec<ModVec> = keep.iter().map(|&a| elems[a].monic()).collect();
    let mut oc: Vec<Vec<Frac>> = keep
        .iter()
        .map(|&a| {
            let lc = Poly::constant(elems[a].initial().unwrap().c.inv());
            combos[a].iter().map(|c| c.mul_poly(&lc, r)).collect()
        })
        .collect();
    let mut reduced = true;
    for i in 0..out.len() {
        let f = out[i].clone();
        let t0 = f.initial().unwrap().clone();
        // m * w with w a unit becomes the monomial m
        if f.terms.len() > 1 && f.terms.iter().all(|t| t.k == t0.k && t0.m.divides(&t.m)) {
            let w = Poly::from_terms(r, f.terms.iter().map(|t| (t0.m.quotient_of(&t.m), t.c.clone())));
            out[i] = ModVec { terms: vec![MTerm { m: t0.m, k: t0.k, c: t0.c.clone() }] };
            oc[i] = oc[i]
                .iter()
                .map(|c| Frac::new(c.num.clone(), c.den.mul(&w, r), r))
                .collect::<Result<Vec<_>>>()?;
            continue;
        }
        match reduce_element_tail(&f, &out, ord, budget)? {
            Some((v, p, rem)) => {
                let mut c = vec![Frac::zero(r); oc[i].len()];
                for (t, ct) in c.iter_mut().enumerate() {
                    let mut acc = oc[i][t].mul_poly(&v, r);
                    for (k, pk) in p.iter().enumerate() {
                        if !pk.is_zero() && !oc[k][t].is_zero() {
                            acc = acc.sub(&oc[k][t].mul_poly(pk, r), r);
                        }
                    }
                    *ct = acc;
                }
                out[i] = rem;
                oc[i] = c;
            }
            None => reduced = false,
        }
    }
    Ok((out, oc, reduced))
}

/// Every S-vector of same-component pairs has weak normal form zero.
pub fn s_pairs_reduce_to_zero(b: &StdBasisVec, budget: &mut Budget) -> Result<bool> {
    for i in 0..b.elements.len() {
        for j in i + 1..b.elements.len() {
            let (s, _, _) = s_vec(&b.elements[i], &b.elements[j], &b.order);
            if s.is_zero() {
                continue;
            }
            if !weak_divide_vec(&s, &b.elements, &b.order, budget)?.remainder.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Membership in the submodule generated by a standard basis.
pub fn member_vec(f: &ModVec, b: &StdBasisVec, budget: &mut Budget) -> Result<bool> {
    if f.is_zero() {
        return Ok(true);
    }
    Ok(weak_divide_vec(f, &b.elements, &b.order, budget)?.remainder.is_zero())
}

/// Ideal membership: the normal form against the standard basis is zero.
pub fn ideal_member(f: &Poly, basis: &StandardBasis) -> Result<bool> {
    member_vec(&ModVec::from_poly(f), &basis.as_vec(), &mut Budget::default())
}

/// Whether the P-leading forms of `gens` generate the leading ideal.
pub fn is_measure_basis(gens: &[Poly], spec: &RingSpec) -> Result<bool> {
    let std = standard_basis(gens, spec)?;
    let lg: Vec<Poly> = gens
        .iter()
        .map(|g| leading_form_p(g, spec).map(|(l, _)| l))
        .collect::<Result<_>>()?;
    let lstd = standard_basis(&lg, spec)?;
    for e in &std.elements {
        let (l, _) = leading_form_p(e, spec)?;
        if !ideal_member(&l, &lstd)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Compares two bases elementwise.
pub fn same_elements(a: &[Poly], b: &[Poly]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x == y)
}

/// Ascending order check on initial terms.
pub fn sorted_by_initial(b: &StdBasisVec) -> bool {
    b.elements.windows(2).all(|w| {
        let (x, y) = (w[0].initial().unwrap(), w[1].initial().unwrap());
        b.order.cmp_term((&x.m, x.k), (&y.m, y.k)) == Ordering::Less
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_poly, parse_polys};

    fn ring() -> RingSpec {
        RingSpec::q(&["x", "y"])
    }

    #[test]
    fn s_poly_examples() {
        let r = ring();
        let p = |s| parse_poly(s, &r).unwrap();
        let (s, (a, b)) = s_poly(&p("x^2"), &p("x*y"), &r);
        assert!(s.is_zero());
        assert_eq!((a, b), (p("y"), p("-x")));
        let (s, (a, b)) = s_poly(&p("x^2+y^2"), &p("x*y"), &r);
        assert_eq!(s, p("y^3"));
        assert_eq!((a, b), (p("y"), p("-x")));
    }

    #[test]
    fn s_vec_components() {
        let r = ring();
        let ord = ModuleOrder::free(&r, 2);
        let f = ModVec::from_dense(&[parse_poly("x", &r).unwrap(), Poly::zero()], &ord);
        let g = ModVec::from_dense(&[Poly::zero(), parse_poly("y", &r).unwrap()], &ord);
        assert!(s_vec(&f, &g, &ord).0.is_zero());
    }

    #[test]
    fn closure_example() {
        let r = ring();
        let gens = parse_polys(&["x^2+y^2", "x*y"], &r).unwrap();
        let b = standard_basis(&gens, &r).unwrap();
        assert_eq!(b.elements, parse_polys(&["x^2+y^2", "x*y", "y^3"], &r).unwrap());
        assert!(b.reduced);
        assert!(b.combinations_hold(&gens));
        assert!(s_pairs_reduce_to_zero(&b.as_vec(), &mut Budget::default()).unwrap());
        let again = standard_basis(&b.elements, &r).unwrap();
        assert!(same_elements(&again.elements, &b.elements));
    }

    #[test]
    fn second_ideal_and_membership() {
        let r = ring();
        let gens = parse_polys(&["x^2+y^3", "x*y^2", "y^5"], &r).unwrap();
        let b = standard_basis(&gens, &r).unwrap();
        for g in &gens {
            assert!(ideal_member(g, &b).unwrap());
        }
        assert!(b.combinations_hold(&gens));
        let m = standard_basis(&parse_polys(&["x", "y"], &r).unwrap(), &r).unwrap();
        assert_eq!(m.elements, parse_polys(&["x", "y"], &r).unwrap());
        assert!(ideal_member(&parse_poly("x^2+y^2", &r).unwrap(), &m).unwrap());
        assert!(!ideal_member(&Poly::one(&r), &m).unwrap());
        let i = standard_basis(&parse_polys(&["x^2+y^2", "x*y"], &r).unwrap(), &r).unwrap();
        assert!(ideal_member(&parse_poly("y^3", &r).unwrap(), &i).unwrap());
    }

    #[test]
    fn unit_multiple_becomes_monomial() {
        let r = ring();
        let gens = parse_polys(&["x-x^2", "y"], &r).unwrap();
        let b = standard_basis(&gens, &r).unwrap();
        assert_eq!(b.elements, parse_polys(&["x", "y"], &r).unwrap());
        assert!(b.combinations_hold(&gens));
    }

    #[test]
    fn measure_basis_examples() {
        let r = ring();
        assert!(is_measure_basis(&parse_polys(&["x", "y"], &r).unwrap(), &r).unwrap());
        assert!(is_measure_basis(&parse_polys(&["x^2+y^3"], &r).unwrap(), &r).unwrap());
        assert!(is_measure_basis(&parse_polys(&["x+y^2", "y+x^2"], &r).unwrap(), &r).unwrap());
        // L-forms x^2, x^2 miss y^3 in L(I)
        assert!(!is_measure_basis(&parse_polys(&["x^2+y^3", "x^2"], &r).unwrap(), &r).unwrap());
    }
}
