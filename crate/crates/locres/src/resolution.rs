//! Schreyer resolutions with P-order degree marks, their leading complexes
//! and the twisted-complex lifting check.

use std::fmt::Write as _;

use crate::coeffring::{ModuleOrder, Mono, RingSpec};
use crate::error::{Error, Result};
use crate::linalg::{solve, SparseRow};
use crate::localdiv::{weak_divide_vec, Budget, ModVec};
use crate::oracle::{graded_exactness_at, hilbert_from_shifts, hilbert_function, piece_basis, piece_images};
use crate::poly::{ord_p, Poly, PolyMatrix};
use crate::stdbasis::{s_vec, standard_basis_vec, StdBasisVec};

/// One map `F_i` of a resolution. Rows carry the target marks, columns the
/// source marks; a nonzero entry at `(m, n)` has P-order at least
/// `col_marks[n] - row_marks[m]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolutionStep {
    pub matrix: PolyMatrix,
    pub col_marks: Vec<u32>,
    pub row_marks: Vec<u32>,
}

impl ResolutionStep {
    pub fn marks_compatible(&self, r: &RingSpec) -> bool {
        (0..self.matrix.rows).all(|m| {
            (0..self.matrix.cols).all(|n| match ord_p(self.matrix.get(m, n), r) {
                None => true,
                Some(o) => o + self.row_marks[m] >= self.col_marks[n],
            })
        })
    }
}

/// `R <- R^{m_1} <- ... <- R^{m_k} <- 0` built from a standard basis of
/// the input ideal. `ranks[0]` is one.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    pub ring: RingSpec,
    pub gens: Vec<Poly>,
    pub steps: Vec<ResolutionStep>,
    pub ranks: Vec<usize>,
    /// Schreyer order on the source of `steps[i]`; the columns of
    /// `steps[i + 1]` form a standard basis for it.
    pub orders: Vec<ModuleOrder>,
    /// Set after unit rows and columns were split off.
    pub minimized: bool,
}

impl FreeResolution {
    pub fn length(&self) -> usize {
        self.steps.len()
    }

    /// Mark vectors `a^(0), a^(1), ...`.
    pub fn marks(&self) -> Vec<Vec<u32>> {
        self.steps.iter().map(|s| s.col_marks.clone()).collect()
    }

    /// Exact check of `F_i F_{i+1} = 0`.
    pub fn composites_vanish(&self) -> bool {
        self.steps
            .windows(2)
            .all(|w| w[0].matrix.mul(&w[1].matrix, &self.ring).is_zero())
    }

    pub fn marks_compatible(&self) -> bool {
        self.steps.iter().all(|s| s.marks_compatible(&self.ring))
    }

    /// Compares the Hilbert function of `gr(R/I)` with the alternating sum
    /// predicted by the marks, degrees `0..=cap`. Only meaningful when P
    /// is the maximal ideal; `None` otherwise.
    pub fn hilbert_consistent(&self, cap: u32) -> Option<bool> {
        let r = &self.ring;
        if r.c != r.n() {
            return None;
        }
        let mut shifts = vec![vec![0]];
        shifts.extend(self.marks());
        Some((0..=cap).all(|d| hilbert_function(&self.gens, r, d) as i64 == hilbert_from_shifts(&shifts, r.n(), d)))
    }
}

/// Syzygies of a standard basis together with their own basis structure.
#[derive(Clone, Debug)]
pub struct Syzygies {
    pub step: ResolutionStep,
    pub basis: StdBasisVec,
}

/// Mark of each basis element: `ord_P` of the element under the marks of
/// its ambient module.
fn element_marks(b: &StdBasisVec) -> Vec<u32> {
    b.elements.iter().map(|e| e.ord_p(&b.order).unwrap_or(0)).collect()
}

fn target_marks(ord: &ModuleOrder) -> Vec<u32> {
    (0..ord.rank()).map(|k| ord.mark(k)).collect()
}

fn step_of(b: &StdBasisVec) -> ResolutionStep {
    let r = &b.order.ring;
    let rank = b.order.rank();
    let cols: Vec<Vec<Poly>> = b.elements.iter().map(|e| e.to_dense(rank, r)).collect();
    ResolutionStep {
        matrix: PolyMatrix::from_cols(rank, cols),
        col_marks: element_marks(b),
        row_marks: target_marks(&b.order),
    }
}

/// Schreyer syzygies of a standard basis. Each same-component pair gives
/// `u p_i e_i + u p_j e_j - sum q_k e_k` from the division of its
/// S-vector; relations whose initial term is divisible by another one are
/// dropped. Returns the map from the syzygy module into the source of
/// `b`, with the Schreyer order on the new free module.
pub fn schreyer_syzygy(b: &StdBasisVec, budget: &mut Budget) -> Result<Syzygies> {
    let r = &b.order.ring;
    let m = b.elements.len();
    let initials: Vec<(Mono, usize)> = b
        .elements
        .iter()
        .map(|e| {
            let t = e.initial().expect("nonzero basis element");
            (t.m, t.k)
        })
        .collect();
    let src = b.order.induced(&initials);
    let mut syz: Vec<ModVec> = Vec::new();
    for j in 0..m {
        for i in 0..j {
            if initials[i].1 != initials[j].1 {
                continue;
            }
            let (s, pf, pg) = s_vec(&b.elements[i], &b.elements[j], &b.order);
            let mut comps = vec![Poly::zero(); m];
            if s.is_zero() {
                comps[i] = pf;
                comps[j] = pg;
            } else {
                let d = weak_divide_vec(&s, &b.elements, &b.order, budget)?;
                if !d.remainder.is_zero() {
                    return Err(Error::Inconsistent(format!(
                        "S-vector of elements {i} and {j} does not reduce to zero"
                    )));
                }
                for (k, q) in d.quotients.iter().enumerate() {
                    comps[k] = q.neg();
                }
                comps[i] = comps[i].add(&d.unit.mul(&pf, r), r);
                comps[j] = comps[j].add(&d.unit.mul(&pg, r), r);
            }
            let v = ModVec::from_dense(&comps, &src);
            if !v.is_zero() {
                syz.push(v.monic());
            }
        }
    }
    syz.sort_by(|x, y| {
        let (a, b) = (x.initial().unwrap(), y.initial().unwrap());
        src.cmp_term((&a.m, a.k), (&b.m, b.k))
    });
    let total = syz.len();
    let mut keep: Vec<ModVec> = Vec::new();
    for v in syz {
        let t = v.initial().unwrap();
        if !keep.iter().any(|w| {
            let u = w.initial().unwrap();
            u.k == t.k && u.m.divides(&t.m)
        }) {
            keep.push(v);
        }
    }
    let skipped = total - keep.len();
    let basis = StdBasisVec {
        order: src,
        combos: vec![Vec::new(); keep.len()],
        elements: keep,
        reduced: false,
        chain_skipped: skipped,
    };
    Ok(Syzygies {
        step: step_of(&basis),
        basis,
    })
}

/// Free resolution of `R/I` by iterated Schreyer syzygies.
pub fn free_resolution(gens: &[Poly], spec: &RingSpec) -> Result<FreeResolution> {
    free_resolution_with(gens, spec, &mut Budget::default())
}

pub fn free_resolution_with(gens: &[Poly], spec: &RingSpec, budget: &mut Budget) -> Result<FreeResolution> {
    if gens.is_empty() || gens.iter().any(|g| g.is_zero()) {
        return Err(Error::Precondition("generators must be nonzero".into()));
    }
    let v: Vec<ModVec> = gens.iter().map(ModVec::from_poly).collect();
    let mut b = standard_basis_vec(&v, &ModuleOrder::ring(spec), budget)?;
    let mut steps = vec![step_of(&b)];
    let mut orders = Vec::new();
    let mut ranks = vec![1, b.elements.len()];
    loop {
        let s = schreyer_syzygy(&b, budget)?;
        orders.push(s.basis.order.clone());
        if s.basis.elements.is_empty() {
            break;
        }
        if steps.len() > spec.n() {
            return Err(Error::Inconsistent("resolution longer than the number of variables".into()));
        }
        ranks.push(s.basis.elements.len());
        steps.push(s.step);
        b = s.basis;
    }
    Ok(FreeResolution {
        ring: spec.clone(),
        gens: gens.to_vec(),
        steps,
        ranks,
        orders,
        minimized: false,
    })
}

/// Leading matrix: keeps the part of each entry of P-order exactly
/// `col_marks[n] - row_marks[m]`.
pub fn leading_matrix(step: &ResolutionStep, r: &RingSpec) -> PolyMatrix {
    let mut out = PolyMatrix::zeros(step.matrix.rows, step.matrix.cols, r);
    for m in 0..step.matrix.rows {
        for n in 0..step.matrix.cols {
            if step.col_marks[n] < step.row_marks[m] {
                continue;
            }
            let k = step.col_marks[n] - step.row_marks[m];
            out.set(m, n, step.matrix.get(m, n).p_part(r, k));
        }
    }
    out
}

/// Leading complex of a resolution; marks are unchanged.
pub fn leading_complex(res: &FreeResolution) -> Vec<ResolutionStep> {
    res.steps
        .iter()
        .map(|s| ResolutionStep {
            matrix: leading_matrix(s, &res.ring),
            col_marks: s.col_marks.clone(),
            row_marks: s.row_marks.clone(),
        })
        .collect()
}

/// Splits off unit entries by elementary operations until every entry lies
/// in the maximal ideal. Marks of the surviving rows and columns are kept
/// but the degree compatibility is no longer guaranteed.
pub fn minimize(res: &FreeResolution) -> FreeResolution {
    let r = &res.ring;
    let mut steps = res.steps.clone();
    'outer: loop {
        for i in 0..steps.len() {
            let f = &steps[i].matrix;
            let pos = (0..f.rows)
                .flat_map(|m| (0..f.cols).map(move |n| (m, n)))
                .find(|&(m, n)| !f.get(m, n).constant_term(r).is_zero());
            let Some((m, n)) = pos else { continue };
            let u = f.get(m, n).clone();
            let mut g = PolyMatrix::zeros(f.rows - 1, f.cols - 1, r);
            for (a, ra) in (0..f.rows).filter(|&a| a != m).enumerate() {
                for (b, cb) in (0..f.cols).filter(|&b| b != n).enumerate() {
                    let v = u.mul(f.get(ra, cb), r).sub(&f.get(ra, n).mul(f.get(m, cb), r), r);
                    g.set(a, b, v);
                }
            }
            let mut s = steps[i].clone();
            s.matrix = g;
            s.row_marks.remove(m);
            s.col_marks.remove(n);
            steps[i] = s;
            if i > 0 {
                let p = &mut steps[i - 1];
                p.matrix = drop_col(&p.matrix, m, r);
                p.col_marks.remove(m);
            }
            if i + 1 < steps.len() {
                let q = &mut steps[i + 1];
                q.matrix = drop_row(&q.matrix, n, r);
                q.row_marks.remove(n);
            }
            steps.retain(|s| s.matrix.cols > 0);
            continue 'outer;
        }
        break;
    }
    let mut ranks = vec![1];
    ranks.extend(steps.iter().map(|s| s.matrix.cols));
    FreeResolution {
        ring: r.clone(),
        gens: res.gens.clone(),
        steps,
        ranks,
        orders: Vec::new(),
        minimized: true,
    }
}

fn drop_col(a: &PolyMatrix, n: usize, r: &RingSpec) -> PolyMatrix {
    let cols: Vec<Vec<Poly>> = (0..a.cols).filter(|&j| j != n).map(|j| a.col(j)).collect();
    if cols.is_empty() {
        return PolyMatrix::zeros(a.rows, 0, r);
    }
    PolyMatrix::from_cols(a.rows, cols)
}

fn drop_row(a: &PolyMatrix, m: usize, r: &RingSpec) -> PolyMatrix {
    drop_col(&a.transpose(), m, r).transpose()
}

fn apply(mat: &PolyMatrix, v: &[Poly], r: &RingSpec) -> Vec<Poly> {
    (0..mat.rows)
        .map(|m| {
            let mut acc = Poly::zero();
            for (n, vn) in v.iter().enumerate() {
                if !vn.is_zero() {
                    acc = acc.add(&mat.get(m, n).mul(vn, r), r);
                }
            }
            acc
        })
        .collect()
}

/// Smallest twisted degree `min_l ord_P(v_l) + marks_l`; `None` for zero.
fn twisted_degree(v: &[Poly], marks: &[u32], r: &RingSpec) -> Option<i64> {
    v.iter()
        .zip(marks)
        .filter_map(|(p, &a)| ord_p(p, r).map(|o| o as i64 + a as i64))
        .min()
}

fn in_twist(v: &[Poly], marks: &[u32], r: &RingSpec, twist: i64) -> bool {
    twisted_degree(v, marks, r).is_none_or(|d| d >= twist)
}

/// Result of [`twist_lift`].
#[derive(Clone, Debug)]
pub struct LiftOutcome {
    pub lifted: Vec<Poly>,
    pub iterations: usize,
    pub success: bool,
    pub failure: Option<String>,
}

fn ydeg(p: &Poly, r: &RingSpec) -> u32 {
    p.terms()
        .iter()
        .map(|(m, _)| (r.c..r.n()).map(|v| m.0[v] as u32).sum::<u32>())
        .max()
        .unwrap_or(0)
}

/// Solves `lead(s) = target` with `s` P-homogeneous of twisted degree `d`.
fn graded_solve(
    lead: &PolyMatrix,
    src_marks: &[u32],
    target: &[Poly],
    d: u32,
    r: &RingSpec,
) -> Option<Vec<Poly>> {
    let yb = target.iter().map(|p| ydeg(p, r)).max().unwrap_or(0) + if r.c < r.n() { 2 } else { 0 };
    let src = piece_basis(r, src_marks, d, yb);
    let tgt: Vec<(usize, Mono)> = target
        .iter()
        .enumerate()
        .flat_map(|(l, p)| p.terms().iter().map(move |(m, _)| (l, *m)))
        .collect();
    let images = piece_images(lead, &src, &tgt, r);
    let ncols = images.first().map_or(tgt.len(), |row| row.len()).max(tgt.len());
    // equation per target coordinate, unknown per source basis element
    let mut rows: Vec<SparseRow> = vec![Vec::new(); ncols];
    for (j, img) in images.iter().enumerate() {
        for (e, c) in img.iter().enumerate() {
            if !c.is_zero() {
                rows[e].push((j, c.clone()));
            }
        }
    }
    let mut b = vec![r.zero(); ncols];
    for (e, (l, m)) in tgt.iter().enumerate() {
        b[e] = target[*l].coeff_of(m).cloned().unwrap_or_else(|| r.zero());
    }
    let x = solve(&rows, &b, src.len(), &r.zero())?;
    let mut s = vec![Vec::new(); src_marks.len()];
    for ((n, mu), c) in src.iter().zip(x) {
        if !c.is_zero() {
            s[*n].push((*mu, c));
        }
    }
    let s: Vec<Poly> = s.into_iter().map(|t| Poly::from_terms(r, t)).collect();
    (apply(lead, &s, r) == target).then_some(s)
}

/// Lifts `t` in the source of `F_level` to `t'` in the twisted source
/// `⊕ P^{twist - col_marks}` with the same image, by subtracting images of
/// homogeneous solutions in the leading complex one degree at a time.
pub fn twist_lift(res: &FreeResolution, level: usize, t: &[Poly], twist: i64) -> Result<LiftOutcome> {
    let r = &res.ring;
    let step = res
        .steps
        .get(level)
        .ok_or_else(|| Error::Dimension(format!("level {level} outside resolution")))?;
    if t.len() != step.matrix.cols {
        return Err(Error::Dimension(format!("vector of length {} for {} columns", t.len(), step.matrix.cols)));
    }
    let image = apply(&step.matrix, t, r);
    if !in_twist(&image, &step.row_marks, r, twist) {
        return Err(Error::Precondition("image not in the twisted target".into()));
    }
    let next = res.steps.get(level + 1);
    let lead_next = next.map(|s| leading_matrix(s, r));
    let lead_here = leading_matrix(step, r);
    let marks = &step.col_marks;
    let mut cur = t.to_vec();
    let mut iterations = 0;
    let fail = |cur: Vec<Poly>, iterations, why: String| LiftOutcome {
        lifted: cur,
        iterations,
        success: false,
        failure: Some(why),
    };
    loop {
        let Some(d) = twisted_degree(&cur, marks, r) else { break };
        if d >= twist {
            break;
        }
        let d = d as u32;
        let part: Vec<Poly> = cur.iter().zip(marks).map(|(p, &a)| if a <= d { p.p_part(r, d - a) } else { Poly::zero() }).collect();
        if apply(&lead_here, &part, r).iter().any(|p| !p.is_zero()) {
            return Ok(fail(cur, iterations, format!("leading part in degree {d} is not a cycle")));
        }
        let (Some(nx), Some(lead)) = (next, lead_next.as_ref()) else {
            return Ok(fail(cur, iterations, format!("nonzero cycle in degree {d} at the last level")));
        };
        let Some(s) = graded_solve(lead, &nx.col_marks, &part, d, r) else {
            let mut msg = String::new();
            let _ = write!(msg, "no homogeneous preimage in degree {d}");
            return Ok(fail(cur, iterations, msg));
        };
        let img = apply(&nx.matrix, &s, r);
        cur = cur.iter().zip(&img).map(|(a, b)| a.sub(b, r)).collect();
        iterations += 1;
    }
    let same = apply(&step.matrix, &cur, r) == image;
    Ok(LiftOutcome {
        success: same && in_twist(&cur, marks, r, twist),
        failure: (!same).then(|| "image changed".to_string()),
        lifted: cur,
        iterations,
    })
}

/// One tested kernel element `monomial * column` of `F_{level+1}`.
#[derive(Clone, Debug)]
pub struct KernelProbe {
    pub column: usize,
    pub monomial: Mono,
    pub iterations: usize,
    pub success: bool,
}

#[derive(Clone, Debug)]
pub struct PositionReport {
    pub level: usize,
    pub probes: Vec<KernelProbe>,
    /// `(degree, dim ker, dim im)` of the leading complex.
    pub graded: Vec<(u32, usize, usize)>,
}

impl PositionReport {
    pub fn lifts_ok(&self) -> bool {
        self.probes.iter().all(|p| p.success)
    }

    pub fn graded_ok(&self) -> bool {
        self.graded.iter().all(|(_, k, i)| k == i)
    }
}

#[derive(Clone, Debug)]
pub struct TwistReport {
    pub r: i64,
    pub cap: u32,
    pub positions: Vec<PositionReport>,
}

impl TwistReport {
    pub fn success(&self) -> bool {
        self.positions.iter().all(|p| p.lifts_ok() && p.graded_ok())
    }
}

/// Lifts every `mu * column` of `F_{i+1}` with `deg mu + mark <= cap` into
/// the twist, and compares kernel and image dimensions of the leading
/// complex in each P-degree up to `cap`.
pub fn twist_exactness_check(res: &FreeResolution, twist: i64, cap: u32) -> Result<TwistReport> {
    let r = &res.ring;
    let lead = leading_complex(res);
    let mut positions = Vec::new();
    for i in 0..res.steps.len() {
        let mut probes = Vec::new();
        if let Some(next) = res.steps.get(i + 1) {
            for n in 0..next.matrix.cols {
                let mark = next.col_marks[n];
                if mark > cap {
                    continue;
                }
                for e in 0..=cap - mark {
                    for mu in crate::linalg::monomials_of_degree(r.c, e) {
                        let t: Vec<Poly> = next.matrix.col(n).iter().map(|p| p.mul_term(&r.one(), &mu)).collect();
                        let out = twist_lift(res, i, &t, twist)?;
                        probes.push(KernelProbe {
                            column: n,
                            monomial: mu,
                            iterations: out.iterations,
                            success: out.success,
                        });
                    }
                }
            }
        }
        let here = &lead[i];
        let after = lead.get(i + 1);
        let empty: Vec<u32> = Vec::new();
        let sc = after.map_or(&empty, |s| &s.col_marks);
        let graded = (0..=cap)
            .map(|d| {
                let (k, im) = graded_exactness_at(
                    &here.matrix,
                    after.map(|s| &s.matrix),
                    (&here.row_marks, &here.col_marks, sc),
                    r,
                    d,
                );
                (d, k, im)
            })
            .collect();
        positions.push(PositionReport { level: i, probes, graded });
    }
    Ok(TwistReport { r: twist, cap, positions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polys;

    fn ring() -> RingSpec {
        RingSpec::q(&["x", "y"])
    }

    #[test]
    fn koszul_resolution() {
        let r = ring();
        let res = free_resolution(&parse_polys(&["x", "y"], &r).unwrap(), &r).unwrap();
        assert_eq!(res.ranks, vec![1, 2, 1]);
        assert_eq!(res.marks(), vec![vec![1, 1], vec![2]]);
        assert_eq!(res.steps[1].matrix.col(0), parse_polys(&["y", "-x"], &r).unwrap());
        assert!(res.composites_vanish());
        assert_eq!(leading_complex(&res), res.steps);
    }

    #[test]
    fn curve_resolution_shape() {
        let r = ring();
        let res = free_resolution(&parse_polys(&["x^2+y^2", "x*y"], &r).unwrap(), &r).unwrap();
        assert_eq!(res.ranks, vec![1, 3, 2]);
        assert_eq!(res.marks(), vec![vec![2, 2, 3], vec![3, 4]]);
        assert!(res.composites_vanish());
        assert!(res.marks_compatible());
        assert_eq!(res.hilbert_consistent(10), Some(true));
    }

    #[test]
    fn principal_and_dropped_parts() {
        let r = ring();
        let res = free_resolution(&parse_polys(&["x"], &r).unwrap(), &r).unwrap();
        assert_eq!(res.ranks, vec![1, 1]);
        let res = free_resolution(&parse_polys(&["x^2+y^3", "x*y^2", "y^5"], &r).unwrap(), &r).unwrap();
        assert_eq!(res.ranks, vec![1, 3, 2]);
        let lead = leading_complex(&res);
        for w in lead.windows(2) {
            assert!(w[0].matrix.mul(&w[1].matrix, &r).is_zero());
        }
        // the constant entry of the first syzygy has order 0 < 1
        assert!(lead[1].matrix.get(2, 0).is_zero());
        assert!(!res.steps[1].matrix.get(2, 0).is_zero());
    }

    #[test]
    fn lift_one_correction_step() {
        let r = ring();
        let res = free_resolution(&parse_polys(&["x", "y"], &r).unwrap(), &r).unwrap();
        let t = parse_polys(&["y+x^3", "-x"], &r).unwrap();
        let out = twist_lift(&res, 0, &t, 3).unwrap();
        assert!(out.success);
        assert_eq!(out.iterations, 1);
        assert_eq!(out.lifted, parse_polys(&["x^3", "0"], &r).unwrap());
        let inside = parse_polys(&["x^2", "x*y"], &r).unwrap();
        assert_eq!(twist_lift(&res, 0, &inside, 3).unwrap().iterations, 0);
    }

    #[test]
    fn twisted_exactness_small() {
        let r = ring();
        for gens in [vec!["x", "y"], vec!["x^2+y^2", "x*y", "y^3"]] {
            let res = free_resolution(&parse_polys(&gens, &r).unwrap(), &r).unwrap();
            for t in 0..=3 {
                let rep = twist_exactness_check(&res, t, 8).unwrap();
                assert!(rep.success(), "{gens:?} r={t}");
            }
        }
    }

    #[test]
    fn minimize_removes_units() {
        let r = ring();
        let res = free_resolution(&parse_polys(&["x^2+y^3", "x*y^2", "y^5"], &r).unwrap(), &r).unwrap();
        let m = minimize(&res);
        assert_eq!(m.ranks, vec![1, 2, 1]);
        assert!(m.composites_vanish());
    }

    #[test]
    fn leading_forms_resolve_alike() {
        let r = ring();
        for gens in [vec!["x^2+y^2", "x*y", "y^3"], vec!["x^2+y^3", "x*y^2", "y^5"], vec!["x", "y"]] {
            let g = parse_polys(&gens, &r).unwrap();
            let res = free_resolution(&g, &r).unwrap();
            let b = crate::stdbasis::standard_basis(&g, &r).unwrap();
            let l: Vec<Poly> = b.elements.iter().map(|e| crate::poly::leading_form_p(e, &r).unwrap().0).collect();
            let lres = free_resolution(&l, &r).unwrap();
            let lead = leading_complex(&res);
            assert_eq!(lres.ranks, res.ranks);
            assert_eq!(lres.marks(), lead.iter().map(|s| s.col_marks.clone()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn three_variables() {
        let r = RingSpec::q(&["x", "y", "z"]);
        let res = free_resolution(&parse_polys(&["x", "y", "z"], &r).unwrap(), &r).unwrap();
        assert_eq!(res.ranks, vec![1, 3, 3, 1]);
        assert!(res.composites_vanish());
        let res = free_resolution(&parse_polys(&["x^2-y^3", "x*z+y^2", "y*z-z^3"], &r).unwrap(), &r).unwrap();
        assert!(res.composites_vanish());
        assert!(res.marks_compatible());
        assert!(res.length() <= 3);
        assert_eq!(res.hilbert_consistent(8), Some(true));
    }
}
