//! Brute-force graded linear algebra used to cross-check the symbolic
//! algorithms: Hilbert-Samuel functions, graded pieces of P-homogeneous
//! matrices and dense exact ranks.

use std::collections::HashMap;

use crate::coeffring::{binomial, Coeff, Mono, RingSpec};
use crate::linalg::{monomials_of_degree, monomials_upto};
use crate::poly::{Poly, PolyMatrix};

/// Rank of a dense matrix by plain Gaussian elimination.
pub fn dense_rank(mut rows: Vec<Vec<Coeff>>) -> usize {
    let Some(ncols) = rows.first().map(|r| r.len()) else { return 0 };
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].inv();
        for j in col..ncols {
            rows[rank][j] = &rows[rank][j] * &inv;
        }
        for i in 0..rows.len() {
            if i == rank || rows[i][col].is_zero() {
                continue;
            }
            let f = rows[i][col].clone();
            for j in col..ncols {
                let v = &rows[i][j] - &(&f * &rows[rank][j]);
                rows[i][j] = v;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// `dim_K R/(I + m^{d+1})` with `m` the maximal ideal at the origin.
pub fn hilbert_samuel(gens: &[Poly], r: &RingSpec, d: u32) -> usize {
    let basis = monomials_upto(r.n(), d);
    let index: HashMap<Mono, usize> = basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut rows = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        for mu in &basis {
            let mut row = vec![r.zero(); basis.len()];
            let mut any = false;
            for (m, c) in g.terms() {
                let t = m.mul(mu);
                if let Some(&i) = index.get(&t) {
                    row[i] = &row[i] + c;
                    any = true;
                }
            }
            if any {
                rows.push(row);
            }
        }
    }
    basis.len() - dense_rank(rows)
}

/// Hilbert function of the associated graded ring, `HS(d) - HS(d-1)`.
pub fn hilbert_function(gens: &[Poly], r: &RingSpec, d: u32) -> usize {
    let hs = hilbert_samuel(gens, r, d);
    if d == 0 {
        hs
    } else {
        hs - hilbert_samuel(gens, r, d - 1)
    }
}

/// Hilbert function in degree `d` predicted by a graded free resolution
/// of `S/J` in `n` variables whose level `i` has generator degrees
/// `shifts[i]` (level 0 is `S` itself).
pub fn hilbert_from_shifts(shifts: &[Vec<u32>], n: usize, d: u32) -> i64 {
    let mut h = 0i64;
    for (i, level) in shifts.iter().enumerate() {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        for &a in level {
            if a <= d {
                h += sign * binomial((d - a) as u64 + n as u64 - 1, n as u64 - 1) as i64;
            }
        }
    }
    h
}

/// Drops every term involving a variable outside P.
pub fn specialize_off_p(p: &Poly, r: &RingSpec) -> Poly {
    Poly::from_terms(
        r,
        p.terms()
            .iter()
            .filter(|(m, _)| (r.c..r.n()).all(|v| m.0[v] == 0))
            .cloned(),
    )
}

/// Basis `(component, monomial)` of the degree-`d` piece of
/// `⊕ S(-shifts[l])`, `S` graded by P-degree. Monomials have P-degree
/// `d - shifts[l]` and degree at most `ydeg` in the remaining variables.
pub fn piece_basis(r: &RingSpec, shifts: &[u32], d: u32, ydeg: u32) -> Vec<(usize, Mono)> {
    let ys = monomials_upto(r.n() - r.c, ydeg);
    let mut out = Vec::new();
    for (l, &a) in shifts.iter().enumerate() {
        if a > d {
            continue;
        }
        for xm in monomials_of_degree(r.c, d - a) {
            for ym in &ys {
                let mut e = xm.0;
                for v in 0..r.n() - r.c {
                    e[r.c + v] = ym.0[v];
                }
                out.push((l, Mono(e)));
            }
        }
    }
    out
}

/// Images of the source basis under `mat`, as dense rows over the target
/// basis; target monomials outside `tgt` are collected into extra columns
/// so that no information is lost.
pub fn piece_images(
    mat: &PolyMatrix,
    src: &[(usize, Mono)],
    tgt: &[(usize, Mono)],
    r: &RingSpec,
) -> Vec<Vec<Coeff>> {
    let mut index: HashMap<(usize, Mono), usize> = tgt.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let mut sparse: Vec<Vec<(usize, Coeff)>> = Vec::with_capacity(src.len());
    for (n, mu) in src {
        let mut row = Vec::new();
        for m in 0..mat.rows {
            for (t, c) in mat.get(m, *n).terms() {
                let key = (m, t.mul(mu));
                let next = index.len();
                let i = *index.entry(key).or_insert(next);
                row.push((i, c.clone()));
            }
        }
        sparse.push(row);
    }
    let ncols = index.len();
    sparse
        .into_iter()
        .map(|row| {
            let mut dense = vec![r.zero(); ncols];
            for (i, c) in row {
                dense[i] = &dense[i] + &c;
            }
            dense
        })
        .collect()
}

/// Dimensions `(dim ker, dim im)` at the middle of the degree-`d` piece of
/// `A <-f- B <-g- C`, with `f` and `g` P-homogeneous of the degrees implied
/// by the shift vectors. `g = None` means the complex stops at `B`.
pub fn graded_exactness_at(
    f: &PolyMatrix,
    g: Option<&PolyMatrix>,
    shifts: (&[u32], &[u32], &[u32]),
    r: &RingSpec,
    d: u32,
) -> (usize, usize) {
    let (sa, sb, sc) = shifts;
    let b = piece_basis(r, sb, d, 0);
    let a = piece_basis(r, sa, d, 0);
    let fspec = specialize(f, r);
    let ker = b.len() - dense_rank(piece_images(&fspec, &b, &a, r));
    let im = match g {
        Some(g) => {
            let c = piece_basis(r, sc, d, 0);
            dense_rank(piece_images(&specialize(g, r), &c, &b, r))
        }
        None => 0,
    };
    (ker, im)
}

/// Dense rows over a growing column index of `(component, monomial)` keys.
struct PieceIndex {
    map: HashMap<(usize, Mono), usize>,
    rows: Vec<Vec<(usize, Coeff)>>,
}

impl PieceIndex {
    fn new(keys: &[(usize, Mono)]) -> PieceIndex {
        PieceIndex {
            map: keys.iter().enumerate().map(|(i, k)| (*k, i)).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, terms: impl IntoIterator<Item = (usize, Mono, Coeff)>) -> usize {
        let mut row = Vec::new();
        for (l, m, c) in terms {
            let next = self.map.len();
            let i = *self.map.entry((l, m)).or_insert(next);
            row.push((i, c));
        }
        self.rows.push(row);
        self.rows.len() - 1
    }

    fn dense(&self, which: impl IntoIterator<Item = usize>, r: &RingSpec) -> Vec<Vec<Coeff>> {
        let n = self.map.len();
        which
            .into_iter()
            .map(|k| {
                let mut d = vec![r.zero(); n];
                for (i, c) in &self.rows[k] {
                    d[*i] = &d[*i] + c;
                }
                d
            })
            .collect()
    }
}

/// Rows spanning `⊕ J_{d - shifts[l]} e_l` for P-homogeneous generators of `J`.
fn ideal_rows(idx: &mut PieceIndex, shifts: &[u32], d: u32, jgens: &[Poly], r: &RingSpec) -> Vec<usize> {
    let mut out = Vec::new();
    for (l, &a) in shifts.iter().enumerate() {
        for h in jgens {
            let Some(e) = crate::poly::ord_p(h, r) else { continue };
            if a + e > d {
                continue;
            }
            for mu in monomials_of_degree(r.c, d - a - e) {
                out.push(idx.push(h.terms().iter().map(|(m, c)| (l, m.mul(&mu), c.clone()))));
            }
        }
    }
    out
}

fn images_rows(idx: &mut PieceIndex, mat: &PolyMatrix, src: &[(usize, Mono)]) -> Vec<usize> {
    src.iter()
        .map(|(n, mu)| {
            let terms: Vec<(usize, Mono, Coeff)> = (0..mat.rows)
                .flat_map(|m| mat.get(m, *n).terms().iter().map(move |(t, c)| (m, t.mul(mu), c.clone())))
                .collect();
            idx.push(terms)
        })
        .collect()
}

/// Rank of `mat` on the degree-`d` piece, as a map of modules over `S/J`.
fn quotient_rank(
    mat: &PolyMatrix,
    src_shifts: &[u32],
    tgt_shifts: &[u32],
    jgens: &[Poly],
    r: &RingSpec,
    d: u32,
) -> usize {
    let src = piece_basis(r, src_shifts, d, 0);
    let tgt = piece_basis(r, tgt_shifts, d, 0);
    let mut idx = PieceIndex::new(&tgt);
    let j = ideal_rows(&mut idx, tgt_shifts, d, jgens, r);
    let im = images_rows(&mut idx, &specialize(mat, r), &src);
    let all: Vec<usize> = j.iter().chain(&im).copied().collect();
    dense_rank(idx.dense(all, r)) - dense_rank(idx.dense(j, r))
}

/// Dimension of the degree-`d` piece of `⊕ (S/J)(-shifts[l])`.
pub fn quotient_piece_dim(shifts: &[u32], jgens: &[Poly], r: &RingSpec, d: u32) -> usize {
    let basis = piece_basis(r, shifts, d, 0);
    let mut idx = PieceIndex::new(&basis);
    let j = ideal_rows(&mut idx, shifts, d, jgens, r);
    basis.len() - dense_rank(idx.dense(j, r))
}

/// Like [`graded_exactness_at`] for free modules over `S/J`, `J` given by
/// P-homogeneous generators.
pub fn quotient_exactness_at(
    f: &PolyMatrix,
    g: Option<&PolyMatrix>,
    shifts: (&[u32], &[u32], &[u32]),
    jgens: &[Poly],
    r: &RingSpec,
    d: u32,
) -> (usize, usize) {
    let (sa, sb, sc) = shifts;
    let jg: Vec<Poly> = jgens.iter().map(|h| specialize_off_p(h, r)).filter(|h| !h.is_zero()).collect();
    let ker = quotient_piece_dim(sb, &jg, r, d) - quotient_rank(f, sb, sa, &jg, r, d);
    let im = g.map_or(0, |g| quotient_rank(g, sc, sb, &jg, r, d));
    (ker, im)
}

fn specialize(m: &PolyMatrix, r: &RingSpec) -> PolyMatrix {
    PolyMatrix {
        rows: m.rows,
        cols: m.cols,
        data: m.data.iter().map(|p| specialize_off_p(p, r)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polys;

    #[test]
    fn dense_rank_small() {
        let r = RingSpec::q(&["x"]);
        let c = |n| r.field.from_i64(n);
        assert_eq!(dense_rank(vec![vec![c(1), c(2)], vec![c(2), c(4)]]), 1);
        assert_eq!(dense_rank(vec![vec![c(0), c(1)], vec![c(1), c(0)]]), 2);
        assert_eq!(dense_rank(Vec::new()), 0);
    }

    #[test]
    fn hilbert_of_maximal_ideal_and_curve() {
        let r = RingSpec::q(&["x", "y"]);
        let m = parse_polys(&["x", "y"], &r).unwrap();
        assert_eq!(hilbert_samuel(&m, &r, 5), 1);
        // (x^2+y^2, xy): gr has Hilbert function 1, 2, 1, 0, ...
        let i = parse_polys(&["x^2+y^2", "x*y"], &r).unwrap();
        let h: Vec<usize> = (0..6).map(|d| hilbert_function(&i, &r, d)).collect();
        assert_eq!(h, vec![1, 2, 1, 0, 0, 0]);
        let shifts = vec![vec![0], vec![2, 2, 3], vec![3, 4]];
        for d in 0..6 {
            assert_eq!(hilbert_from_shifts(&shifts, 2, d), h[d as usize] as i64);
        }
    }

    #[test]
    fn quotient_pieces() {
        let r = RingSpec::q(&["x", "y"]);
        let j = parse_polys(&["x^2", "y^2"], &r).unwrap();
        let dims: Vec<usize> = (0..4).map(|d| quotient_piece_dim(&[0], &j, &r, d)).collect();
        assert_eq!(dims, vec![1, 2, 1, 0]);
        // multiplication by x on S/(x^2): kernel x*S in each degree
        let jx = parse_polys(&["x^2"], &r).unwrap();
        let x = PolyMatrix::from_rows(vec![vec![parse_polys(&["x"], &r).unwrap()[0].clone()]]);
        for d in 1..6 {
            let (k, i) = quotient_exactness_at(&x, Some(&x), (&[0], &[1], &[2]), &jx, &r, d);
            assert_eq!(k, i);
        }
    }

    #[test]
    fn koszul_pieces_are_exact() {
        let r = RingSpec::q(&["x", "y"]);
        let p = parse_polys(&["x", "y", "y", "-x"], &r).unwrap();
        let f0 = PolyMatrix::from_rows(vec![vec![p[0].clone(), p[1].clone()]]);
        let f1 = PolyMatrix::from_rows(vec![vec![p[2].clone()], vec![p[3].clone()]]);
        for d in 0..6 {
            let (k, i) = graded_exactness_at(&f0, Some(&f1), (&[0], &[1, 1], &[2]), &r, d);
            assert_eq!(k, i, "degree {d}");
            let (k, _) = graded_exactness_at(&f1, None, (&[1, 1], &[2], &[]), &r, d);
            assert_eq!(k, 0);
        }
    }
}
