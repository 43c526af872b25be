//! Homotopies on a resolution of `R/I` for elements `w_1, .., w_c` of `I`,
//! block matrix factorizations, and the totalized complexes over
//! `R/(w_1, .., w_c)` for one or two elements.
//!
//! Everything is driven by one system of maps `sigma_v` indexed by
//! `v` in `N^c`, with `sigma_0` the differential and
//! `sum_{u+u'=v} sigma_u sigma_u' = w_j id` when `v = e_j`, zero otherwise.
//! The homotopy `K_i` is `sigma_{e_1}` on `M_{i-1}`, the higher homotopy
//! `K_i^(a)` is `sigma_{(a+1)}` on `M_{i-1}`, and for two elements
//! `L_i = sigma_{e_2}`, `G_i = sigma_{e_1+e_2}`. Here `M_{-1} = R` and
//! `M_i` is the source of `F_i`.

use std::collections::BTreeMap;

use crate::coeffring::{ModuleOrder, RingSpec};
use crate::error::{Error, Result};
use crate::localdiv::{weak_divide_vec, Budget, ModVec};
use crate::oracle::quotient_exactness_at;
use crate::poly::{leading_form_p, ord_p, Frac, FracMatrix, Poly, PolyMatrix};
use crate::resolution::FreeResolution;
use crate::stdbasis::{ideal_member, standard_basis};

/// Key of a stored map: multi-index and source module index.
pub type SigmaKey = (Vec<u32>, i64);

/// A resolution together with a system of higher homotopies.
#[derive(Clone, Debug)]
pub struct HomotopyFamily {
    pub res: FreeResolution,
    pub ws: Vec<Poly>,
    /// `ord_P(w_j)`.
    pub dw: Vec<u32>,
    pub sigma: BTreeMap<SigmaKey, FracMatrix>,
    /// Largest `|v|` solved for.
    pub depth: u32,
    /// True for the P-homogeneous leading family.
    pub leading: bool,
}

fn weight(v: &[u32]) -> u32 {
    v.iter().sum()
}

/// Multi-indices of weight `s` in `c` slots, ordered by the last entry
/// first, then the earlier ones.
fn indices_of_weight(c: usize, s: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, c: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == c {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(i + 1, c, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, c, s, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    out
}

/// All splittings `v = u + u'` with both parts nonzero.
fn splittings(v: &[u32]) -> Vec<(Vec<u32>, Vec<u32>)> {
    let mut out = Vec::new();
    let mut u = vec![0u32; v.len()];
    loop {
        let mut i = 0;
        while i < v.len() {
            if u[i] < v[i] {
                u[i] += 1;
                break;
            }
            u[i] = 0;
            i += 1;
        }
        if i == v.len() {
            break;
        }
        if u != v {
            let up: Vec<u32> = v.iter().zip(&u).map(|(a, b)| a - b).collect();
            out.push((u.clone(), up));
        }
    }
    out
}

impl HomotopyFamily {
    fn ring(&self) -> &RingSpec {
        &self.res.ring
    }

    /// Largest module index `k`.
    pub fn top(&self) -> i64 {
        self.res.steps.len() as i64 - 1
    }

    pub fn rank(&self, j: i64) -> usize {
        if j == -1 {
            1
        } else if j >= 0 && j <= self.top() {
            self.res.steps[j as usize].matrix.cols
        } else {
            0
        }
    }

    /// Marks of `M_j`.
    pub fn marks(&self, j: i64) -> Vec<u32> {
        if j == -1 {
            vec![0]
        } else if j >= 0 && j <= self.top() {
            self.res.steps[j as usize].col_marks.clone()
        } else {
            Vec::new()
        }
    }

    fn zeros(&self, rows: usize, cols: usize) -> FracMatrix {
        FracMatrix::zeros(rows, cols, self.ring())
    }

    /// `F_j : M_j -> M_{j-1}`.
    pub fn d(&self, j: i64) -> FracMatrix {
        if j >= 0 && j <= self.top() {
            let m = &self.res.steps[j as usize].matrix;
            if self.leading {
                return crate::resolution::leading_matrix(&self.res.steps[j as usize], self.ring()).to_frac(self.ring());
            }
            return m.to_frac(self.ring());
        }
        self.zeros(self.rank(j - 1), self.rank(j))
    }

    /// `sigma_v` on `M_j`, zero when not stored.
    pub fn get(&self, v: &[u32], j: i64) -> FracMatrix {
        if weight(v) == 0 {
            return self.d(j);
        }
        let t = j + 2 * weight(v) as i64 - 1;
        match self.sigma.get(&(v.to_vec(), j)) {
            Some(m) => m.clone(),
            None => self.zeros(self.rank(t), self.rank(j)),
        }
    }

    /// `K_i`, a map `M_{i-1} -> M_i`.
    pub fn k(&self, i: i64) -> FracMatrix {
        self.get(&unit(self.ws.len(), 0, 1), i - 1)
    }

    /// `K_i^(a)`, a map `M_{i-1} -> M_{i+2a}`.
    pub fn k_higher(&self, a: u32, i: i64) -> FracMatrix {
        self.get(&unit(self.ws.len(), 0, a + 1), i - 1)
    }

    /// `L_i`, the homotopy of the second element.
    pub fn l(&self, i: i64) -> FracMatrix {
        self.get(&unit(self.ws.len(), 1, 1), i - 1)
    }

    /// `G_i`, the connecting map of degree three.
    pub fn g(&self, i: i64) -> FracMatrix {
        self.get(&[1, 1], i - 1)
    }

    fn w_term(&self, v: &[u32]) -> Option<Poly> {
        let nz: Vec<usize> = (0..v.len()).filter(|&i| v[i] > 0).collect();
        (nz.len() == 1 && v[nz[0]] == 1).then(|| self.ws[nz[0]].clone())
    }

    /// `sum_{u+u'=v, u,u' != 0} sigma_u sigma_u'` on `M_j`.
    fn cross_terms(&self, v: &[u32], j: i64) -> FracMatrix {
        let r = self.ring().clone();
        let t = j + 2 * weight(v) as i64 - 2;
        let mut acc = self.zeros(self.rank(t), self.rank(j));
        for (u, up) in splittings(v) {
            let mid = j + 2 * weight(&up) as i64 - 1;
            if self.rank(mid) == 0 {
                continue;
            }
            acc = acc.add(&self.get(&u, mid).mul(&self.get(&up, j), &r), &r);
        }
        acc
    }

    /// Left side minus right side of the defining identity for `(v, j)`.
    pub fn residual(&self, v: &[u32], j: i64) -> FracMatrix {
        let r = self.ring().clone();
        let t = j + 2 * weight(v) as i64 - 2;
        let mut acc = self.cross_terms(v, j);
        let zero = vec![0u32; v.len()];
        if self.rank(j - 1) > 0 {
            acc = acc.add(&self.get(v, j - 1).mul(&self.get(&zero, j), &r), &r);
        }
        if self.rank(t + 1) > 0 {
            acc = acc.add(&self.get(&zero, t + 1).mul(&self.get(v, j), &r), &r);
        }
        if let Some(w) = self.w_term(v) {
            let n = self.rank(j);
            let ww = if self.leading { leading_form_p(&w, &r).map(|x| x.0).unwrap_or_else(|_| Poly::zero()) } else { w };
            acc = acc.sub(&FracMatrix::identity_scaled(n, &ww, &r), &r);
        }
        acc
    }

    /// Every stored identity, and every identity one weight beyond the
    /// stored support, holds exactly.
    pub fn residuals_vanish(&self) -> bool {
        self.residuals_vanish_upto(self.depth + 1)
    }

    /// Identities for all `|v| <= s_max`.
    pub fn residuals_vanish_upto(&self, s_max: u32) -> bool {
        let c = self.ws.len();
        (1..=s_max).all(|s| {
            indices_of_weight(c, s)
                .iter()
                .all(|v| (-1..=self.top()).all(|j| self.residual(v, j).is_zero()))
        })
    }

    /// Nonzero stored maps.
    pub fn support(&self) -> Vec<SigmaKey> {
        self.sigma
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(k, _)| k.clone())
            .collect()
    }

    /// Columns of `F_t` as divisors in the order of `M_{t-1}`.
    fn frame(&self, t: i64) -> (ModuleOrder, Vec<ModVec>) {
        let r = self.ring();
        let ord = if t == 0 {
            ModuleOrder::ring(r)
        } else {
            self.res.orders[(t - 1) as usize].clone()
        };
        let m = &self.res.steps[t as usize].matrix;
        let cols = (0..m.cols).map(|n| ModVec::from_dense(&m.col(n), &ord)).collect();
        (ord, cols)
    }

    /// Solves `F_t X = rhs` column by column by division; `t` is the
    /// index of the map whose columns form the standard basis.
    fn divide_columns(&self, rhs: &FracMatrix, t: i64, budget: &mut Budget) -> Result<FracMatrix> {
        let r = self.ring().clone();
        let (ord, divs) = self.frame(t);
        let mut out = self.zeros(divs.len(), rhs.cols);
        for n in 0..rhs.cols {
            let col: Vec<Frac> = (0..rhs.rows).map(|m| rhs.get(m, n).clone()).collect();
            if col.iter().all(|f| f.is_zero()) {
                continue;
            }
            let mut dens: Vec<Poly> = Vec::new();
            for f in &col {
                if !f.is_zero() && !f.is_poly() && !dens.contains(&f.den) {
                    dens.push(f.den.clone());
                }
            }
            let mut common = Poly::one(&r);
            for d in &dens {
                common = common.mul(d, &r);
            }
            let nums: Vec<Poly> = col
                .iter()
                .map(|f| {
                    if f.is_zero() {
                        return Poly::zero();
                    }
                    let mut p = f.num.clone();
                    for d in &dens {
                        if *d != f.den {
                            p = p.mul(d, &r);
                        }
                    }
                    p
                })
                .collect();
            let v = ModVec::from_dense(&nums, &ord);
            let div = weak_divide_vec(&v, &divs, &ord, budget)?;
            if !div.remainder.is_zero() {
                return Err(if t == 0 {
                    Error::Precondition("element not in the ideal".into())
                } else {
                    Error::Inconsistent(format!("column {n} not in the image of F_{t}"))
                });
            }
            let den = div.unit.mul(&common, &r);
            for (k, q) in div.quotients.iter().enumerate() {
                if !q.is_zero() {
                    out.set(k, n, Frac::new(q.clone(), den.clone(), &r)?);
                }
            }
        }
        Ok(out)
    }

    /// Solves every `sigma_v` with `|v| = s`.
    fn solve_weight(&mut self, s: u32, budget: &mut Budget) -> Result<()> {
        let r = self.ring().clone();
        let c = self.ws.len();
        let zero = vec![0u32; c];
        for v in indices_of_weight(c, s) {
            for j in -1..=self.top() {
                let t = j + 2 * s as i64 - 1;
                if t > self.top() || self.rank(j) == 0 {
                    continue;
                }
                let mut rhs = self.cross_terms(&v, j).neg();
                if j >= 0 {
                    rhs = rhs.sub(&self.get(&v, j - 1).mul(&self.get(&zero, j), &r), &r);
                }
                if let Some(w) = self.w_term(&v) {
                    rhs = rhs.add(&FracMatrix::identity_scaled(self.rank(j), &w, &r), &r);
                }
                let x = self.divide_columns(&rhs, t, budget)?;
                self.sigma.insert((v.clone(), j), x);
            }
        }
        self.depth = self.depth.max(s);
        Ok(())
    }

    /// Weight beyond which every map has a zero target.
    pub fn weight_bound(&self) -> u32 {
        ((self.top() + 2) / 2) as u32
    }

    fn new(res: &FreeResolution, ws: Vec<Poly>) -> Result<HomotopyFamily> {
        let r = &res.ring;
        if res.minimized || res.orders.len() != res.steps.len() {
            return Err(Error::Precondition("homotopies need the Schreyer resolution with its orders".into()));
        }
        let basis = standard_basis(&res.gens, r)?;
        let mut dw = Vec::new();
        for w in &ws {
            if w.is_zero() {
                return Err(Error::Precondition("w must be nonzero".into()));
            }
            if w.terms().iter().any(|(m, _)| m.deg() <= 1) {
                return Err(Error::Precondition("w must have order at least two at the origin".into()));
            }
            if !ideal_member(w, &basis)? {
                return Err(Error::Precondition("w is not in the ideal".into()));
            }
            dw.push(ord_p(w, r).unwrap_or(0));
        }
        Ok(HomotopyFamily {
            res: res.clone(),
            ws,
            dw,
            sigma: BTreeMap::new(),
            depth: 0,
            leading: false,
        })
    }
}

fn unit(c: usize, i: usize, a: u32) -> Vec<u32> {
    let mut v = vec![0; c];
    v[i] = a;
    v
}

/// `K_0, K_1, ..` with `K_i F_i + F_{i+1} K_{i+1} = w id`.
pub fn homotopy_chain(res: &FreeResolution, w: &Poly, budget: &mut Budget) -> Result<HomotopyFamily> {
    let mut f = HomotopyFamily::new(res, vec![w.clone()])?;
    f.solve_weight(1, budget)?;
    Ok(f)
}

/// Completes the chain with all `K^(a)` up to the vanishing bound.
pub fn higher_homotopies(mut fam: HomotopyFamily, budget: &mut Budget) -> Result<HomotopyFamily> {
    for s in fam.depth + 1..=fam.weight_bound() {
        fam.solve_weight(s, budget)?;
    }
    Ok(fam)
}

/// Krull dimension of `K[x]/(monomials)`.
fn monomial_dimension(n: usize, gens: &[crate::coeffring::Mono]) -> usize {
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let ok = gens.iter().all(|g| (0..n).any(|i| g.0[i] > 0 && mask & (1 << i) == 0));
        if ok {
            best = best.max(mask.count_ones() as usize);
        }
    }
    best
}

/// Dimension of `R/(gens)` read off the initial terms of a standard basis.
pub fn local_dimension(gens: &[Poly], r: &RingSpec) -> Result<usize> {
    let b = standard_basis(gens, r)?;
    let inits: Vec<_> = b.elements.iter().filter_map(|e| e.initial().map(|t| t.0)).collect();
    Ok(monomial_dimension(r.n(), &inits))
}

/// Homotopies for two elements `w1, w2` of `I` forming a regular sequence.
/// `depth_cap = Some(d)` keeps multi-indices of weight at most `d + 1`, so
/// zero gives the two chains alone.
pub fn ci_homotopies(
    res: &FreeResolution,
    w1: &Poly,
    w2: &Poly,
    depth_cap: Option<u32>,
    budget: &mut Budget,
) -> Result<HomotopyFamily> {
    let r = &res.ring;
    let mut f = HomotopyFamily::new(res, vec![w1.clone(), w2.clone()])?;
    if local_dimension(&[w1.clone(), w2.clone()], r)? + 2 != r.n() {
        return Err(Error::Precondition("w1, w2 is not a regular sequence".into()));
    }
    let cap = depth_cap.map_or(u32::MAX, |d| d + 1).min(f.weight_bound()).max(1);
    for s in 1..=cap {
        f.solve_weight(s, budget)?;
    }
    Ok(f)
}

/// P-homogeneous parts of every map: the entry from component `n` of
/// `M_j` to component `m` of the target keeps P-order exactly
/// `a_n + v.d - a'_m`.
pub fn leading_homotopies(fam: &HomotopyFamily) -> HomotopyFamily {
    let r = fam.ring().clone();
    let mut out = fam.clone();
    out.leading = true;
    for ((v, j), m) in out.sigma.iter_mut() {
        let t = *j + 2 * weight(v) as i64 - 1;
        let src = fam.marks(*j);
        let tgt = fam.marks(t);
        let shift: u32 = v.iter().zip(&fam.dw).map(|(a, b)| a * b).sum();
        for row in 0..m.rows {
            for col in 0..m.cols {
                let want = src[col] as i64 + shift as i64 - tgt[row] as i64;
                let e = m.get(row, col).clone();
                let l = if want < 0 { Frac::zero(&r) } else { e.p_part(&r, want as u32) };
                m.set(row, col, l);
            }
        }
    }
    out
}

/// A pair `(A, B)` with `AB = BA = w id`.
#[derive(Clone, Debug)]
pub struct MatrixFactorization {
    pub a: FracMatrix,
    pub b: FracMatrix,
    pub w: Poly,
    /// Marks on the target and source of `A`. With them `A` preserves
    /// degree and `B` raises it by `ord_P(w)`.
    pub a_row_marks: Vec<u32>,
    pub a_col_marks: Vec<u32>,
}

impl MatrixFactorization {
    pub fn identity_holds(&self, r: &RingSpec) -> bool {
        if self.a.rows != self.a.cols || self.b.rows != self.b.cols || self.a.cols != self.b.rows {
            return false;
        }
        let id = FracMatrix::identity_scaled(self.a.rows, &self.w, r);
        self.a.mul(&self.b, r).eq_in(&id, r) && self.b.mul(&self.a, r).eq_in(&id, r)
    }

    pub fn poly_pair(&self) -> Option<(PolyMatrix, PolyMatrix)> {
        Some((self.a.to_poly()?, self.b.to_poly()?))
    }
}

/// Block staircase: `A` maps `M_{-1} + M_1 + .. + M_{2k'+1}` to
/// `M_0 + M_2 + .. + M_{2k'}` and `B` goes back; blocks are `F`, `K` and
/// the higher `K^(a)` below the diagonal.
pub fn assemble_block_mf(fam: &HomotopyFamily, kprime: Option<usize>) -> Result<MatrixFactorization> {
    if fam.ws.len() != 1 {
        return Err(Error::Precondition("block factorization needs a single element".into()));
    }
    let r = fam.ring().clone();
    let k = fam.top();
    let kp = kprime.unwrap_or((k / 2) as usize) as i64;
    if 2 * kp > k {
        return Err(Error::Precondition(format!("2k' = {} exceeds the resolution length {k}", 2 * kp)));
    }
    let odd: Vec<i64> = (0..=kp + 1).map(|j| 2 * j - 1).collect();
    let even: Vec<i64> = (0..=kp).map(|i| 2 * i).collect();
    let block = |src: &[i64], tgt: &[i64]| -> FracMatrix {
        let rows: usize = tgt.iter().map(|&t| fam.rank(t)).sum();
        let cols: usize = src.iter().map(|&s| fam.rank(s)).sum();
        let mut out = FracMatrix::zeros(rows, cols, &r);
        let mut c0 = 0;
        for &s in src {
            let mut r0 = 0;
            for &t in tgt {
                let diff = t - s + 1;
                if diff >= 0 && diff % 2 == 0 && fam.rank(s) > 0 && fam.rank(t) > 0 {
                    let a = (diff / 2) as u32;
                    out.put_block(r0, c0, &fam.get(&[a], s));
                }
                r0 += fam.rank(t);
            }
            c0 += fam.rank(s);
        }
        out
    };
    let d = fam.dw[0];
    let marks = |idx: &[i64], top: i64| -> Vec<u32> {
        idx.iter()
            .enumerate()
            .flat_map(|(p, &j)| {
                let shift = (top - p as i64) as u32 * d;
                fam.marks(j).into_iter().map(move |a| a + shift)
            })
            .collect()
    };
    Ok(MatrixFactorization {
        a: block(&odd, &even),
        b: block(&even, &odd),
        w: fam.ws[0].clone(),
        a_row_marks: marks(&even, kp),
        a_col_marks: marks(&odd, kp + 1),
    })
}

/// One summand `M_{g-1}`, tagged by the multi-index `v`, of a term of a
/// totalized complex.
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub g: usize,
    pub v: Vec<u32>,
    pub rank: usize,
    /// `a^(g-1) + v.d`.
    pub marks: Vec<u32>,
}

/// Totalized complex over `R/(w_1, .., w_c)`: `V_n` is the sum of
/// `M_{n-2|v|-1}` over `v`, and `maps[n-1]` is `V_n -> V_{n-1}`.
#[derive(Clone, Debug)]
pub struct Totalization {
    pub ws: Vec<Poly>,
    pub terms: Vec<Vec<Component>>,
    pub maps: Vec<FracMatrix>,
}

/// Builds `V_0 .. V_length` with all signs `+`.
pub fn totalize(fam: &HomotopyFamily, length: usize) -> Totalization {
    let r = fam.ring().clone();
    let c = fam.ws.len();
    let k = fam.top();
    let mut terms = Vec::new();
    for n in 0..=length as i64 {
        let mut comps = Vec::new();
        for g in 0..=n {
            if g > k + 1 || (n - g) % 2 != 0 {
                continue;
            }
            let s = ((n - g) / 2) as u32;
            let mut vs = indices_of_weight(c, s);
            vs.reverse();
            for v in vs {
                let shift: u32 = v.iter().zip(&fam.dw).map(|(a, b)| a * b).sum();
                comps.push(Component {
                    g: g as usize,
                    rank: fam.rank(g - 1),
                    marks: fam.marks(g - 1).into_iter().map(|a| a + shift).collect(),
                    v,
                });
            }
        }
        terms.push(comps);
    }
    let mut maps = Vec::new();
    for n in 1..=length {
        let (src, tgt) = (&terms[n], &terms[n - 1]);
        let rows: usize = tgt.iter().map(|x| x.rank).sum();
        let cols: usize = src.iter().map(|x| x.rank).sum();
        let mut m = FracMatrix::zeros(rows, cols, &r);
        let mut c0 = 0;
        for s in src {
            let mut r0 = 0;
            for t in tgt {
                let u: Option<Vec<u32>> = s.v.iter().zip(&t.v).map(|(a, b)| a.checked_sub(*b)).collect();
                if let Some(u) = u {
                    if t.g as i64 == s.g as i64 + 2 * weight(&u) as i64 - 1 && s.rank > 0 && t.rank > 0 {
                        m.put_block(r0, c0, &fam.get(&u, s.g as i64 - 1));
                    }
                }
                r0 += t.rank;
            }
            c0 += s.rank;
        }
        maps.push(m);
    }
    Totalization {
        ws: fam.ws.clone(),
        terms,
        maps,
    }
}

fn marks_of(t: &[Component]) -> Vec<u32> {
    t.iter().flat_map(|c| c.marks.clone()).collect()
}

impl Totalization {
    /// Every entry of each composite `V_{n+1} -> V_{n-1}` lies in `(w)`.
    pub fn composites_vanish_mod(&self, r: &RingSpec) -> Result<bool> {
        let j = standard_basis(&self.ws, r)?;
        for w in self.maps.windows(2) {
            let p = w[0].mul(&w[1], r);
            for e in &p.data {
                if !e.is_zero() && !ideal_member(&e.num, &j)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Leading part of `maps[n-1]` with the prescribed degrees; off-P
    /// variables set to zero.
    pub fn leading_map(&self, n: usize, r: &RingSpec) -> PolyMatrix {
        let m = &self.maps[n - 1];
        let src = marks_of(&self.terms[n]);
        let tgt = marks_of(&self.terms[n - 1]);
        let mut out = PolyMatrix::zeros(m.rows, m.cols, r);
        for i in 0..m.rows {
            for j in 0..m.cols {
                if src[j] >= tgt[i] {
                    out.set(i, j, m.get(i, j).num.p_part(r, src[j] - tgt[i]));
                }
            }
        }
        out
    }

    /// `(n, degree, dim ker, dim im)` at `V_n`, `1 <= n < length`, over
    /// `gr R / L(J)`.
    pub fn graded_exactness(&self, r: &RingSpec, cap: u32) -> Result<Vec<(usize, u32, usize, usize)>> {
        let j = standard_basis(&self.ws, r)?;
        let lj: Vec<Poly> = j.elements.iter().map(|e| leading_form_p(e, r).map(|x| x.0)).collect::<Result<_>>()?;
        let mut out = Vec::new();
        for n in 1..self.maps.len() {
            let f = self.leading_map(n, r);
            let g = self.leading_map(n + 1, r);
            let (sa, sb, sc) = (marks_of(&self.terms[n - 1]), marks_of(&self.terms[n]), marks_of(&self.terms[n + 1]));
            for d in 0..=cap {
                let (k, i) = quotient_exactness_at(&f, Some(&g), (&sa, &sb, &sc), &lj, r, d);
                out.push((n, d, k, i));
            }
        }
        Ok(out)
    }
}

/// The periodic resolution of `R/I` over `R/(w)` with twist bookkeeping.
#[derive(Clone, Debug)]
pub struct PeriodicResolutionS {
    pub total: Totalization,
    pub r: i64,
    /// Per term: `(j, multiplicity)` for summands `P^j`, `j = r - mark`.
    pub twists: Vec<Vec<(i64, usize)>>,
    /// First index from which the maps alternate between `A` and `B`.
    pub tail_start: usize,
    pub tail_matches: bool,
}

pub fn standard_resolution_s(fam: &HomotopyFamily, length: usize, r: i64) -> Result<PeriodicResolutionS> {
    if fam.ws.len() != 1 {
        return Err(Error::Precondition("one element expected".into()));
    }
    let k = fam.top();
    let tail_start = (k + 2) as usize;
    if length < tail_start + 1 {
        return Err(Error::Precondition(format!("length {length} below {}", tail_start + 1)));
    }
    let total = totalize(fam, length);
    let mf = assemble_block_mf(fam, None)?;
    let ring = fam.ring();
    let d = fam.dw[0];
    let tail_matches = (tail_start..=length).all(|n| {
        let want = if n % 2 == 0 { &mf.a } else { &mf.b };
        total.maps[n - 1].eq_in(want, ring)
    }) && (tail_start..=length - 2).all(|n| {
        let (a, b) = (marks_of(&total.terms[n]), marks_of(&total.terms[n + 2]));
        a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| x + d == *y)
    });
    let twists = total
        .terms
        .iter()
        .map(|t| {
            let mut m: BTreeMap<i64, usize> = BTreeMap::new();
            for c in t {
                for &a in &c.marks {
                    *m.entry(r - a as i64).or_default() += 1;
                }
            }
            m.into_iter().collect()
        })
        .collect();
    Ok(PeriodicResolutionS {
        total,
        r,
        twists,
        tail_start,
        tail_matches,
    })
}

/// Totalization over `R/(w1, w2)` through the map out of `V_{length+1}`;
/// `maps[0]` is `F_0` and `maps[1]` is `(K_0 L_0 F_1)`.
pub fn ci_totalization(fam: &HomotopyFamily, length: usize) -> Result<Totalization> {
    if fam.ws.len() != 2 {
        return Err(Error::Precondition("two elements expected".into()));
    }
    Ok(totalize(fam, length + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_poly, parse_polys};
    use crate::resolution::free_resolution;

    fn ring() -> RingSpec {
        RingSpec::q(&["x", "y"])
    }

    fn fm(rows: &[&[&str]], r: &RingSpec) -> FracMatrix {
        PolyMatrix::from_rows(rows.iter().map(|row| parse_polys(row, r).unwrap()).collect()).to_frac(r)
    }

    #[test]
    fn koszul_chain_and_factorization() {
        let r = ring();
        let res = free_resolution(&parse_polys(&["x", "y"], &r).unwrap(), &r).unwrap();
        let w = parse_poly("x^2+y^2", &r).unwrap();
        let fam = homotopy_chain(&res, &w, &mut Budget::default()).unwrap();
        assert!(fam.k(0).eq_in(&fm(&[&["x"], &["y"]], &r), &r));
        assert!(fam.k(1).eq_in(&fm(&[&["y", "-x"]], &r), &r));
        let fam = higher_homotopies(fam, &mut Budget::default()).unwrap();
        assert!(fam.residuals_vanish());
        assert!(fam.support().iter().all(|(v, _)| v[0] == 1));
        let mf = assemble_block_mf(&fam, Some(0)).unwrap();
        assert!(mf.identity_holds(&r));
        // flipping the sign of the syzygy basis vector gives the textbook pair
        let dm = fm(&[&["1", "0"], &["0", "-1"]], &r);
        assert!(mf.a.mul(&dm, &r).eq_in(&fm(&[&["x", "-y"], &["y", "x"]], &r), &r));
        assert!(dm.mul(&mf.b, &r).eq_in(&fm(&[&["x", "y"], &["-y", "x"]], &r), &r));
        assert!(assemble_block_mf(&fam, Some(1)).is_err());
    }

    #[test]
    fn cubic_and_three_generator_cases() {
        let r = ring();
        let res = free_resolution(&parse_polys(&["x", "y"], &r).unwrap(), &r).unwrap();
        let w = parse_poly("x^3+y^3", &r).unwrap();
        let fam = higher_homotopies(homotopy_chain(&res, &w, &mut Budget::default()).unwrap(), &mut Budget::default()).unwrap();
        assert!(fam.residuals_vanish());
        assert!(assemble_block_mf(&fam, None).unwrap().identity_holds(&r));

        let res = free_resolution(&parse_polys(&["x^2+y^2", "x*y", "y^3"], &r).unwrap(), &r).unwrap();
        let w = parse_poly("x^2+y^2", &r).unwrap();
        let fam = homotopy_chain(&res, &w, &mut Budget::default()).unwrap();
        assert!(fam.k(0).eq_in(&fm(&[&["1"], &["0"], &["0"]], &r), &r));
        let fam = higher_homotopies(fam, &mut Budget::default()).unwrap();
        assert!(fam.residuals_vanish());
        let second = fam.k(1).mul(&fam.k(0), &r).add(&fam.d(2).mul(&fam.k_higher(1, 0), &r), &r);
        assert!(second.is_zero());
        let mf = assemble_block_mf(&fam, None).unwrap();
        assert_eq!(mf.a.rows, 3);
        assert!(mf.identity_holds(&r));
    }

    #[test]
    fn rejects_bad_elements() {
        let r = ring();
        let res = free_resolution(&parse_polys(&["x^2+y^2", "x*y"], &r).unwrap(), &r).unwrap();
        let mut b = Budget::default();
        assert!(homotopy_chain(&res, &Poly::zero(), &mut b).is_err());
        assert!(homotopy_chain(&res, &parse_poly("x^2", &r).unwrap(), &mut b).is_err());
        let res = free_resolution(&parse_polys(&["x", "y"], &r).unwrap(), &r).unwrap();
        assert!(homotopy_chain(&res, &parse_poly("x", &r).unwrap(), &mut b).is_err());
    }

    #[test]
    fn periodic_tail_and_twists() {
        let r = ring();
        let res = free_resolution(&parse_polys(&["x", "y"], &r).unwrap(), &r).unwrap();
        let w = parse_poly("x^2+y^2", &r).unwrap();
        let fam = higher_homotopies(homotopy_chain(&res, &w, &mut Budget::default()).unwrap(), &mut Budget::default()).unwrap();
        let s0 = standard_resolution_s(&fam, 6, 0).unwrap();
        assert!(s0.tail_matches);
        assert!(s0.total.composites_vanish_mod(&r).unwrap());
        let s2 = standard_resolution_s(&fam, 6, 2).unwrap();
        for (a, b) in s0.twists.iter().zip(&s2.twists) {
            let shifted: Vec<(i64, usize)> = a.iter().map(|(j, m)| (j + 2, *m)).collect();
            assert_eq!(&shifted, b);
        }
        assert!(standard_resolution_s(&fam, 2, 0).is_err());
        let ex = s0.total.graded_exactness(&r, 8).unwrap();
        assert!(ex.iter().all(|(_, _, k, i)| k == i));
    }

    #[test]
    fn complete_intersection_squares() {
        let r = ring();
        let res = free_resolution(&parse_polys(&["x", "y"], &r).unwrap(), &r).unwrap();
        let (w1, w2) = (parse_poly("x^2", &r).unwrap(), parse_poly("y^2", &r).unwrap());
        let fam = ci_homotopies(&res, &w1, &w2, None, &mut Budget::default()).unwrap();
        assert!(fam.k(0).eq_in(&fm(&[&["x"], &["0"]], &r), &r));
        assert!(fam.l(0).eq_in(&fm(&[&["0"], &["y"]], &r), &r));
        let three = fam.k(1).mul(&fam.l(0), &r).add(&fam.l(1).mul(&fam.k(0), &r), &r);
        assert!(three.is_zero());
        assert!(fam.residuals_vanish());
        let t = ci_totalization(&fam, 4).unwrap();
        assert!(t.composites_vanish_mod(&r).unwrap());
        let ex = t.graded_exactness(&r, 8).unwrap();
        assert!(ex.iter().all(|(_, _, k, i)| k == i), "{ex:?}");
        let shallow = ci_homotopies(&res, &w1, &w2, Some(0), &mut Budget::default()).unwrap();
        assert!(shallow.sigma.keys().all(|(v, _)| weight(v) == 1));
        let t1 = ci_totalization(&fam, 1).unwrap();
        assert_eq!(t1.maps.len(), 2);
        assert_eq!(t1.maps[1].cols, 3);
        assert!(t1.composites_vanish_mod(&r).unwrap());
        assert!(ci_homotopies(&res, &w1, &parse_poly("x*y", &r).unwrap(), None, &mut Budget::default()).is_err());
    }

    #[test]
    fn complete_intersection_over_three_generators() {
        let r = ring();
        let res = free_resolution(&parse_polys(&["x^2+y^2", "x*y", "y^3"], &r).unwrap(), &r).unwrap();
        let (w1, w2) = (parse_poly("x^2+y^2", &r).unwrap(), parse_poly("x*y", &r).unwrap());
        let fam = ci_homotopies(&res, &w1, &w2, None, &mut Budget::default()).unwrap();
        assert!(fam.residuals_vanish());
        assert!(!fam.g(0).is_zero() || fam.res.steps.len() < 3);
        let t = ci_totalization(&fam, 4).unwrap();
        assert!(t.composites_vanish_mod(&r).unwrap());
        let ex = t.graded_exactness(&r, 6).unwrap();
        assert!(ex.iter().all(|(_, _, k, i)| k == i), "{ex:?}");
    }

    #[test]
    fn leading_family_identity() {
        let r = ring();
        let res = free_resolution(&parse_polys(&["x", "y"], &r).unwrap(), &r).unwrap();
        let w = parse_poly("x^2+y^3", &r).unwrap();
        let fam = higher_homotopies(homotopy_chain(&res, &w, &mut Budget::default()).unwrap(), &mut Budget::default()).unwrap();
        let lf = leading_homotopies(&fam);
        assert!(lf.residuals_vanish());
        let w = parse_poly("x^2+y^2", &r).unwrap();
        let fam = higher_homotopies(homotopy_chain(&res, &w, &mut Budget::default()).unwrap(), &mut Budget::default()).unwrap();
        let lf = leading_homotopies(&fam);
        assert_eq!(lf.sigma, fam.sigma);
    }
}
