//! Exact sparse Gaussian elimination over the coefficient field.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::coeffring::{Coeff, Field, Mono};

/// Sparse row: strictly increasing column indices, nonzero values.
pub type SparseRow = Vec<(usize, Coeff)>;

/// Incremental row echelon form. Each stored row is keyed by its leading
/// column and normalized to a leading coefficient of one.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseRow>,
}

fn axpy(row: &SparseRow, c: &Coeff, piv: &SparseRow) -> SparseRow {
    // row - c * piv
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < piv.len() {
        if j >= piv.len() || (i < row.len() && row[i].0 < piv[j].0) {
            out.push(row[i].clone());
            i += 1;
        } else if i >= row.len() || piv[j].0 < row[i].0 {
            out.push((piv[j].0, -(c * &piv[j].1)));
            j += 1;
        } else {
            let v = &row[i].1 - &(c * &piv[j].1);
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` by the stored pivots; returns the reduced row.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let mut start = 0;
        loop {
            let Some(pos) = row[start..].iter().position(|(c, _)| self.pivots.contains_key(c)) else {
                return row;
            };
            let idx = start + pos;
            let (col, val) = row[idx].clone();
            let piv = &self.pivots[&col];
            row = axpy(&row, &val, piv);
            // entries before `col` are untouched and already non-pivot
            start = idx;
        }
    }

    /// Inserts a row; returns true when the rank grows.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(row);
        let Some((lead, lc)) = row.first().cloned() else {
            return false;
        };
        let inv = lc.inv();
        let norm: SparseRow = row.into_iter().map(|(c, v)| (c, &v * &inv)).collect();
        self.pivots.insert(lead, norm);
        true
    }

    /// True when `row` lies in the span.
    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce(row).is_empty()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }
}

/// Rank of a list of sparse rows.
pub fn rank(rows: impl IntoIterator<Item = SparseRow>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Solves `A x = b` where `A` is given by sparse rows over `ncols` columns.
/// Free variables are set to zero. Returns `None` when inconsistent.
pub fn solve(rows: &[SparseRow], b: &[Coeff], ncols: usize, zero: &Coeff) -> Option<Vec<Coeff>> {
    let mut e = Echelon::new();
    for (r, bi) in rows.iter().zip(b) {
        let mut full = r.clone();
        if !bi.is_zero() {
            full.push((ncols, bi.clone()));
        }
        e.insert(full);
    }
    if e.pivots.contains_key(&ncols) {
        return None;
    }
    let mut x = vec![zero.clone(); ncols];
    for (&p, row) in e.pivots.iter().rev() {
        let mut v = zero.clone();
        for (c, a) in row.iter().skip(1) {
            if *c == ncols {
                v = &v + a;
            } else if !x[*c].is_zero() {
                v = &v - &(a * &x[*c]);
            }
        }
        x[p] = v;
    }
    Some(x)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r, mut b, mut e) = (1u128, a as u128 % p as u128, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u128;
        }
        b = b * b % p as u128;
        e >>= 1;
    }
    r as u64
}

/// Solves `A x = b` over F_p with free variables set to zero. Rows are
/// sparse `(column, value)` lists of reduced residues. Returns the pivot
/// columns and the solution, or `None` when inconsistent.
pub fn solve_mod_p(
    rows: &[Vec<(usize, u64)>],
    b: &[u64],
    ncols: usize,
    p: u64,
) -> Option<(Vec<usize>, Vec<u64>)> {
    let mulm = |a: u64, c: u64| (a as u128 * c as u128 % p as u128) as u64;
    let mut pivots: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
    for (row, &bi) in rows.iter().zip(b) {
        let mut r = row.clone();
        if bi != 0 {
            r.push((ncols, bi));
        }
        let mut idx = 0;
        while idx < r.len() {
            let (col, val) = r[idx];
            let Some(piv) = pivots.get(&col) else {
                idx += 1;
                continue;
            };
            // r -= val * piv, where piv has leading entry 1 at `col`
            let mut out = Vec::with_capacity(r.len() + piv.len());
            out.extend_from_slice(&r[..idx]);
            let (mut i, mut j) = (idx, 0);
            while i < r.len() || j < piv.len() {
                if j >= piv.len() || (i < r.len() && r[i].0 < piv[j].0) {
                    out.push(r[i]);
                    i += 1;
                } else {
                    let sub = mulm(val, piv[j].1);
                    if i < r.len() && r[i].0 == piv[j].0 {
                        let v = (r[i].1 + p - sub) % p;
                        if v != 0 {
                            out.push((r[i].0, v));
                        }
                        i += 1;
                    } else {
                        out.push((piv[j].0, (p - sub) % p));
                    }
                    j += 1;
                }
            }
            r = out;
        }
        if let Some(&(lead, lc)) = r.first() {
            if lead == ncols {
                return None;
            }
            let inv = inv_mod(lc, p);
            let norm = r.into_iter().map(|(c, v)| (c, mulm(v, inv))).collect();
            pivots.insert(lead, norm);
        }
    }
    let mut x = vec![0u64; ncols];
    for (&piv, row) in pivots.iter().rev() {
        let mut v = 0u64;
        for &(c, a) in row.iter().skip(1) {
            if c == ncols {
                v = (v + a) % p;
            } else if x[c] != 0 {
                v = (v + p - mulm(a, x[c])) % p;
            }
        }
        x[piv] = v;
    }
    Some((pivots.keys().copied().collect(), x))
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mulm = |a: u64, b: u64| (a as u128 * b as u128 % n as u128) as u64;
    let powm = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulm(r, b);
            }
            b = mulm(b, b);
            e >>= 1;
        }
        r
    };
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powm(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulm(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes below 2^31, descending.
pub fn primes_below_2_31() -> impl Iterator<Item = u64> {
    (1u64..(1 << 31)).rev().filter(|&n| is_prime_u64(n))
}

/// Rational reconstruction of `a mod m`: the fraction `n/d` with
/// `|n|, d <= sqrt(m/2)`, if one exists.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<num_rational::BigRational> {
    use num_traits::{One, Signed, Zero};
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let (q, r2) = r0.div_rem(&r1);
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(num_rational::BigRational::new(r1, t1))
}

fn residue(c: &Coeff, p: u64) -> Option<u64> {
    match to_prime(c, p)? {
        Coeff::Fp { v, .. } => Some(v),
        Coeff::Q(_) => None,
    }
}

fn residue_system(rows: &[SparseRow], b: &[Coeff], p: u64) -> Option<(Vec<Vec<(usize, u64)>>, Vec<u64>)> {
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let mut r = Vec::with_capacity(row.len());
        for (c, v) in row {
            let w = residue(v, p)?;
            if w != 0 {
                r.push((*c, w));
            }
        }
        out.push(r);
    }
    let rb: Option<Vec<u64>> = b.iter().map(|c| residue(c, p)).collect();
    Some((out, rb?))
}

/// Checks `A x = b` exactly.
pub fn satisfies(rows: &[SparseRow], b: &[Coeff], x: &[Coeff]) -> bool {
    rows.iter().zip(b).all(|(row, bi)| {
        let mut acc = bi.clone();
        for (c, a) in row {
            if !x[*c].is_zero() {
                acc = &acc - &(a * &x[*c]);
            }
        }
        acc.is_zero()
    })
}

/// Consistency of `A x = b` over the base field, decided modulo a prime for
/// rational systems (exact for prime fields). A rational system that is
/// solvable stays solvable modulo every prime avoiding its denominators, so
/// only a false "solvable" is possible, and callers solve exactly afterwards.
pub fn probably_consistent(rows: &[SparseRow], b: &[Coeff], ncols: usize, field: Field) -> bool {
    let p = match field {
        Field::Prime(p) => p,
        Field::Rational => 2_147_483_647,
    };
    match residue_system(rows, b, p) {
        Some((r, rb)) => solve_mod_p(&r, &rb, ncols, p).is_some(),
        None => solve(rows, b, ncols, &field.zero()).is_some(),
    }
}

/// Exact solution of `A x = b` (free variables zero where the elimination
/// allows it). Rational systems are solved modulo a sequence of primes,
/// lifted by Chinese remaindering and rational reconstruction, and accepted
/// only after exact verification.
pub fn solve_exact(rows: &[SparseRow], b: &[Coeff], ncols: usize, field: Field) -> Option<Vec<Coeff>> {
    use num_traits::{One, Zero};
    if let Field::Prime(p) = field {
        let (r, rb) = residue_system(rows, b, p)?;
        let (_, x) = solve_mod_p(&r, &rb, ncols, p)?;
        return Some(x.into_iter().map(|v| Coeff::Fp { v, p }).collect());
    }
    let mut modulus = BigInt::one();
    let mut acc: Vec<BigInt> = vec![BigInt::zero(); ncols];
    let mut pivots: Option<Vec<usize>> = None;
    let mut inconsistent = 0;
    let mut used = 0;
    for p in primes_below_2_31() {
        if used >= 64 {
            break;
        }
        let Some((r, rb)) = residue_system(rows, b, p) else {
            continue;
        };
        let Some((piv, x)) = solve_mod_p(&r, &rb, ncols, p) else {
            inconsistent += 1;
            if inconsistent >= 2 && pivots.is_none() {
                return None;
            }
            continue;
        };
        match &pivots {
            None => pivots = Some(piv),
            Some(pv) if *pv != piv => continue,
            _ => {}
        }
        used += 1;
        let pb = BigInt::from(p);
        if used == 1 {
            acc = x.iter().map(|&v| BigInt::from(v)).collect();
            modulus = pb;
        } else {
            // acc + modulus * ((x - acc) * modulus^{-1} mod p)
            let minv = BigInt::from(inv_mod((&modulus % &pb).to_u64().unwrap(), p));
            for (a, &xv) in acc.iter_mut().zip(&x) {
                let diff = (BigInt::from(xv) - &*a).mod_floor(&pb);
                let t = (diff * &minv).mod_floor(&pb);
                *a += &modulus * t;
            }
            modulus *= pb;
        }
        let cand: Option<Vec<Coeff>> = acc
            .iter()
            .map(|a| rational_reconstruct(a, &modulus).map(Coeff::Q))
            .collect();
        if let Some(c) = cand {
            if satisfies(rows, b, &c) {
                return Some(c);
            }
        }
    }
    solve(rows, b, ncols, &field.zero())
}

/// All monomials in `n` variables of total degree exactly `d`.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Mono> {
    fn rec(i: usize, n: usize, left: u32, e: &mut [u16; 8], out: &mut Vec<Mono>) {
        if i + 1 == n {
            e[i] = left as u16;
            out.push(Mono(*e));
            e[i] = 0;
            return;
        }
        for k in (0..=left).rev() {
            e[i] = k as u16;
            rec(i + 1, n, left - k, e, out);
        }
        e[i] = 0;
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Mono::one());
        }
        return out;
    }
    rec(0, n, d, &mut [0u16; 8], &mut out);
    out
}

/// All monomials in `n` variables of total degree at most `d`.
pub fn monomials_upto(n: usize, d: u32) -> Vec<Mono> {
    (0..=d).flat_map(|k| monomials_of_degree(n, k)).collect()
}

/// Image of a coefficient in F_p; `None` when a denominator vanishes mod p.
pub fn to_prime(c: &Coeff, p: u64) -> Option<Coeff> {
    match c {
        Coeff::Fp { .. } => Some(c.clone()),
        Coeff::Q(q) => {
            let pb = BigInt::from(p);
            let red = |x: &BigInt| -> u64 {
                let m = x.mod_floor(&pb);
                m.to_u64().unwrap()
            };
            let d = red(q.denom());
            if d == 0 {
                return None;
            }
            let num = Coeff::Fp { v: red(q.numer()), p };
            Some(num.div(&Coeff::Fp { v: d, p }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::Field;

    #[test]
    fn rank_and_solve() {
        let f = Field::Rational;
        let c = |n| f.from_i64(n);
        let rows = vec![
            vec![(0, c(1)), (1, c(2))],
            vec![(0, c(2)), (1, c(4))],
            vec![(1, c(1)), (2, c(1))],
        ];
        assert_eq!(rank(rows.clone()), 2);
        let x = solve(&rows, &[c(3), c(6), c(1)], 3, &f.zero()).unwrap();
        assert_eq!(&x[0] + &(&c(2) * &x[1]), c(3));
        assert_eq!(&x[1] + &x[2], c(1));
        assert!(solve(&rows, &[c(3), c(7), c(1)], 3, &f.zero()).is_none());
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(3, 4).len(), 15);
        assert_eq!(monomials_upto(2, 3).len(), 10);
        assert_eq!(monomials_upto(1, 5).len(), 6);
    }

    #[test]
    fn exact_solve_matches_elimination() {
        let f = Field::Rational;
        let c = |n| f.from_i64(n);
        let rows = vec![
            vec![(0, c(3)), (1, c(-7)), (2, c(1))],
            vec![(0, c(1)), (2, c(5))],
            vec![(1, c(11)), (2, c(-2))],
        ];
        let b = [c(1), c(-2), c(4)];
        let x = solve_exact(&rows, &b, 3, f).unwrap();
        assert!(satisfies(&rows, &b, &x));
        assert!(probably_consistent(&rows, &b, 3, f));
    }

    #[test]
    fn modular_solve_and_reconstruct() {
        let p = 1_000_003;
        // 2x + 3y = 1, 4x + 5y = 0  =>  x = -5/2, y = 2
        let rows = vec![vec![(0, 2), (1, 3)], vec![(0, 4), (1, 5)]];
        let (piv, x) = solve_mod_p(&rows, &[1, 0], 2, p).unwrap();
        assert_eq!(piv, vec![0, 1]);
        let m = BigInt::from(p);
        let q = rational_reconstruct(&BigInt::from(x[0]), &m).unwrap();
        assert_eq!(q, num_rational::BigRational::new((-5).into(), 2.into()));
        assert_eq!(x[1], 2);
        assert!(solve_mod_p(&[vec![(0, 1)], vec![(0, 2)]], &[1, 1], 1, p).is_none());
        assert!(is_prime_u64(2_147_483_647));
        assert!(!is_prime_u64(2_147_483_649));
    }
}
