//! Sparse polynomials, local fractions and matrices.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::coeffring::{Coeff, Mono, RingSpec};
use crate::error::{Error, Result};

/// Sparse polynomial with terms sorted ascending in the flag order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Mono, Coeff)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn constant(c: Coeff) -> Poly {
        Poly::term(c, Mono::one())
    }

    pub fn one(r: &RingSpec) -> Poly {
        Poly::constant(r.one())
    }

    pub fn term(c: Coeff, m: Mono) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn var(r: &RingSpec, i: usize) -> Poly {
        Poly::term(r.one(), Mono::var(i))
    }

    pub fn from_i64(r: &RingSpec, n: i64) -> Poly {
        Poly::constant(r.field.from_i64(n))
    }

    /// Builds a canonical polynomial from arbitrary terms.
    pub fn from_terms(r: &RingSpec, terms: impl IntoIterator<Item = (Mono, Coeff)>) -> Poly {
        let mut acc: HashMap<Mono, Coeff> = HashMap::new();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(e) => *e = &*e + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<(Mono, Coeff)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| r.cmp_mono(&a.0, &b.0));
        Poly { terms }
    }

    /// Takes already sorted, zero-free, duplicate-free terms.
    pub(crate) fn from_sorted(terms: Vec<(Mono, Coeff)>) -> Poly {
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Mono, Coeff)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Mono, Coeff)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Initial term (the minimum of the support).
    pub fn initial(&self) -> Option<&(Mono, Coeff)> {
        self.terms.first()
    }

    pub fn constant_term(&self, r: &RingSpec) -> Coeff {
        match self.terms.first() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => r.zero(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Total degree of the polynomial, `None` for zero.
    pub fn deg(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.deg()).max()
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    /// Multiplication by a term keeps the order since the order is multiplicative.
    pub fn mul_term(&self, c: &Coeff, m: &Mono) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn add(&self, o: &Poly, r: &RingSpec) -> Poly {
        merge(&self.terms, &o.terms, r, false)
    }

    pub fn sub(&self, o: &Poly, r: &RingSpec) -> Poly {
        merge(&self.terms, &o.terms, r, true)
    }

    pub fn mul(&self, o: &Poly, r: &RingSpec) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if o.terms.len() == 1 {
            return self.mul_term(&o.terms[0].1, &o.terms[0].0);
        }
        if self.terms.len() == 1 {
            return o.mul_term(&self.terms[0].1, &self.terms[0].0);
        }
        let mut acc: HashMap<Mono, Coeff> = HashMap::with_capacity(self.len() * o.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                match acc.get_mut(&m) {
                    Some(e) => *e = &*e + &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<(Mono, Coeff)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| r.cmp_mono(&a.0, &b.0));
        Poly { terms }
    }

    pub fn pow(&self, e: u32, r: &RingSpec) -> Poly {
        let mut acc = Poly::one(r);
        for _ in 0..e {
            acc = acc.mul(self, r);
        }
        acc
    }

    /// Scales so the initial coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.terms.first() {
            Some((_, c)) if !c.is_one() => self.scale(&c.inv()),
            _ => self.clone(),
        }
    }

    /// Terms of total degree at most `d`.
    pub fn truncate_deg(&self, d: u32) -> Poly {
        Poly {
            terms: self.terms.iter().filter(|(m, _)| m.deg() <= d).cloned().collect(),
        }
    }

    /// Terms of P-order exactly `k`.
    pub fn p_part(&self, r: &RingSpec, k: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| r.ord_p(m) == k)
                .cloned()
                .collect(),
        }
    }

    pub fn coeff_of(&self, m: &Mono) -> Option<&Coeff> {
        self.terms.iter().find(|(t, _)| t == m).map(|(_, c)| c)
    }

    /// Canonical string with explicit `*` and `^`.
    pub fn to_string_in(&self, r: &RingSpec) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let body = mono_string(m, r);
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if i > 0 {
                s.push(if neg { '-' } else { '+' });
            } else if neg {
                s.push('-');
            }
            if body.is_empty() {
                let _ = write!(s, "{abs}");
            } else if abs.is_one() {
                s.push_str(&body);
            } else {
                let _ = write!(s, "{abs}*{body}");
            }
        }
        s
    }
}

fn mono_string(m: &Mono, r: &RingSpec) -> String {
    let mut parts = Vec::new();
    for (i, name) in r.names.iter().enumerate() {
        match m.0[i] {
            0 => {}
            1 => parts.push(name.clone()),
            e => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

fn merge(a: &[(Mono, Coeff)], b: &[(Mono, Coeff)], r: &RingSpec, negate_b: bool) -> Poly {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match r.cmp_mono(&a[i].0, &b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for t in &b[j..] {
        let c = if negate_b { -&t.1 } else { t.1.clone() };
        out.push((t.0, c));
    }
    Poly { terms: out }
}

/// P-order of `f`; `None` stands for infinity.
pub fn ord_p(f: &Poly, r: &RingSpec) -> Option<u32> {
    f.terms.iter().map(|(m, _)| r.ord_p(m)).min()
}

/// Splits `f` into its P-leading form and the residue.
pub fn leading_form_p(f: &Poly, r: &RingSpec) -> Result<(Poly, Poly)> {
    let k = ord_p(f, r).ok_or_else(|| Error::Domain("leading form of zero".into()))?;
    let (l, rest): (Vec<_>, Vec<_>) = f.terms.iter().cloned().partition(|(m, _)| r.ord_p(m) == k);
    Ok((Poly::from_sorted(l), Poly::from_sorted(rest)))
}

/// Initial coefficient and monomial.
pub fn initial(f: &Poly) -> Result<(Coeff, Mono)> {
    f.initial()
        .map(|(m, c)| (c.clone(), *m))
        .ok_or_else(|| Error::Domain("initial term of zero".into()))
}

/// Element `num/den` of the localized ring, `den` a unit with constant term one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frac {
    pub num: Poly,
    pub den: Poly,
}

impl Frac {
    pub fn zero(r: &RingSpec) -> Frac {
        Frac {
            num: Poly::zero(),
            den: Poly::one(r),
        }
    }

    pub fn from_poly(p: Poly, r: &RingSpec) -> Frac {
        Frac {
            num: p,
            den: Poly::one(r),
        }
    }

    /// Builds `num/den`; `den` must have a nonzero constant term.
    pub fn new(num: Poly, den: Poly, r: &RingSpec) -> Result<Frac> {
        let c = den.constant_term(r);
        if c.is_zero() {
            return Err(Error::Domain("denominator is not a unit".into()));
        }
        let inv = c.inv();
        Ok(Frac {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.len() == 1 && self.den.terms[0].0.is_one()
    }

    pub fn add(&self, o: &Frac, r: &RingSpec) -> Frac {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        if self.den == o.den {
            return Frac {
                num: self.num.add(&o.num, r),
                den: self.den.clone(),
            };
        }
        Frac {
            num: self.num.mul(&o.den, r).add(&o.num.mul(&self.den, r), r),
            den: self.den.mul(&o.den, r),
        }
    }

    pub fn neg(&self) -> Frac {
        Frac {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Frac, r: &RingSpec) -> Frac {
        self.add(&o.neg(), r)
    }

    pub fn mul(&self, o: &Frac, r: &RingSpec) -> Frac {
        if self.is_zero() || o.is_zero() {
            return Frac::zero(r);
        }
        let den = if self.is_poly() {
            o.den.clone()
        } else if o.is_poly() {
            self.den.clone()
        } else {
            self.den.mul(&o.den, r)
        };
        Frac {
            num: self.num.mul(&o.num, r),
            den,
        }
    }

    pub fn mul_poly(&self, p: &Poly, r: &RingSpec) -> Frac {
        Frac {
            num: self.num.mul(p, r),
            den: self.den.clone(),
        }
    }

    pub fn eq_in(&self, o: &Frac, r: &RingSpec) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        self.num.mul(&o.den, r) == o.num.mul(&self.den, r)
    }

    /// P-order; denominators have P-order zero.
    pub fn ord_p(&self, r: &RingSpec) -> Option<u32> {
        ord_p(&self.num, r)
    }

    /// Part of P-order exactly `k`, with the leading form of the denominator.
    pub fn p_part(&self, r: &RingSpec, k: u32) -> Frac {
        let num = self.num.p_part(r, k);
        if num.is_zero() {
            return Frac::zero(r);
        }
        Frac {
            num,
            den: self.den.p_part(r, 0),
        }
    }

    pub fn to_string_in(&self, r: &RingSpec) -> String {
        if self.is_poly() {
            self.num.to_string_in(r)
        } else {
            format!("({})/({})", self.num.to_string_in(r), self.den.to_string_in(r))
        }
    }
}

/// Operations shared by matrix entry types.
pub trait Entry: Clone + std::fmt::Debug {
    fn zero_in(r: &RingSpec) -> Self;
    fn add_in(&self, o: &Self, r: &RingSpec) -> Self;
    fn mul_in(&self, o: &Self, r: &RingSpec) -> Self;
    fn neg_in(&self) -> Self;
    fn is_zero_entry(&self) -> bool;
    fn to_frac(&self, r: &RingSpec) -> Frac;
}

impl Entry for Poly {
    fn zero_in(_: &RingSpec) -> Self {
        Poly::zero()
    }
    fn add_in(&self, o: &Self, r: &RingSpec) -> Self {
        self.add(o, r)
    }
    fn mul_in(&self, o: &Self, r: &RingSpec) -> Self {
        self.mul(o, r)
    }
    fn neg_in(&self) -> Self {
        self.neg()
    }
    fn is_zero_entry(&self) -> bool {
        self.is_zero()
    }
    fn to_frac(&self, r: &RingSpec) -> Frac {
        Frac::from_poly(self.clone(), r)
    }
}

impl Entry for Frac {
    fn zero_in(r: &RingSpec) -> Self {
        Frac::zero(r)
    }
    fn add_in(&self, o: &Self, r: &RingSpec) -> Self {
        self.add(o, r)
    }
    fn mul_in(&self, o: &Self, r: &RingSpec) -> Self {
        self.mul(o, r)
    }
    fn neg_in(&self) -> Self {
        self.neg()
    }
    fn is_zero_entry(&self) -> bool {
        self.is_zero()
    }
    fn to_frac(&self, _: &RingSpec) -> Frac {
        self.clone()
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

pub type PolyMatrix = Matrix<Poly>;
pub type FracMatrix = Matrix<Frac>;

impl<T: Entry> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize, r: &RingSpec) -> Matrix<T> {
        Matrix {
            rows,
            cols,
            data: vec![T::zero_in(r); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Matrix<T> {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == nc), "ragged matrix");
        Matrix {
            rows: nr,
            cols: nc,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_cols(rows: usize, cols: Vec<Vec<T>>) -> Matrix<T> {
        let nc = cols.len();
        let mut data = Vec::with_capacity(rows * nc);
        for i in 0..rows {
            for c in &cols {
                data.push(c[i].clone());
            }
        }
        Matrix { rows, cols: nc, data }
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, o: &Matrix<T>, r: &RingSpec) -> Matrix<T> {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let mut out: Matrix<T> = Matrix::zeros(self.rows, o.cols, r);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero_entry() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero_entry() {
                        continue;
                    }
                    let v = out.get(i, j).add_in(&a.mul_in(b, r), r);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Matrix<T>, r: &RingSpec) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix sum shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add_in(b, r)).collect(),
        }
    }

    pub fn neg(&self) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.neg_in()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero_entry())
    }

    pub fn transpose(&self) -> Matrix<T> {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn to_frac(&self, r: &RingSpec) -> FracMatrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| e.to_frac(r)).collect(),
        }
    }

    /// Places `b` at block offset `(i0, j0)`.
    pub fn put_block(&mut self, i0: usize, j0: usize, b: &Matrix<T>) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(i0 + i, j0 + j, b.get(i, j).clone());
            }
        }
    }
}

impl PolyMatrix {
    pub fn identity_scaled(n: usize, w: &Poly, r: &RingSpec) -> PolyMatrix {
        let mut m = Matrix::zeros(n, n, r);
        for i in 0..n {
            m.set(i, i, w.clone());
        }
        m
    }

    pub fn to_strings(&self, r: &RingSpec) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string_in(r)).collect())
            .collect()
    }
}

impl FracMatrix {
    pub fn identity_scaled(n: usize, w: &Poly, r: &RingSpec) -> FracMatrix {
        let mut m = Matrix::zeros(n, n, r);
        for i in 0..n {
            m.set(i, i, Frac::from_poly(w.clone(), r));
        }
        m
    }

    /// Entrywise equality in the localized ring.
    pub fn eq_in(&self, o: &FracMatrix, r: &RingSpec) -> bool {
        self.rows == o.rows
            && self.cols == o.cols
            && self.data.iter().zip(&o.data).all(|(a, b)| a.eq_in(b, r))
    }

    pub fn sub(&self, o: &FracMatrix, r: &RingSpec) -> FracMatrix {
        self.add(&o.neg(), r)
    }

    /// Returns the polynomial matrix when every denominator is one.
    pub fn to_poly(&self) -> Option<PolyMatrix> {
        if !self.data.iter().all(|e| e.is_poly() || e.is_zero()) {
            return None;
        }
        Some(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|e| {
                    if e.is_zero() {
                        Poly::zero()
                    } else {
                        e.num.clone()
                    }
                })
                .collect(),
        })
    }

    pub fn to_strings(&self, r: &RingSpec) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string_in(r)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::Field;
    use crate::parse::parse_poly;

    #[test]
    fn valuation_examples() {
        let r = RingSpec::q(&["x", "y"]);
        let r1 = RingSpec::new(&["x", "y"], 1, Field::Rational).unwrap();
        assert_eq!(ord_p(&parse_poly("x^2+y^3", &r).unwrap(), &r), Some(2));
        assert_eq!(ord_p(&parse_poly("x^2*y+x^3", &r1).unwrap(), &r1), Some(2));
        assert_eq!(ord_p(&Poly::zero(), &r), None);
    }

    #[test]
    fn leading_form_examples() {
        let r = RingSpec::q(&["x", "y"]);
        let f = parse_poly("x^2+y^3", &r).unwrap();
        let (l, res) = leading_form_p(&f, &r).unwrap();
        assert_eq!(l, parse_poly("x^2", &r).unwrap());
        assert_eq!(res, parse_poly("y^3", &r).unwrap());
        let r1 = RingSpec::new(&["x", "y", "z"], 1, Field::Rational).unwrap();
        let g = parse_poly("x^2*y+x^2*z+x^3", &r1).unwrap();
        let (l, res) = leading_form_p(&g, &r1).unwrap();
        assert_eq!(l, parse_poly("x^2*y+x^2*z", &r1).unwrap());
        assert_eq!(l.add(&res, &r1), g);
        assert!(leading_form_p(&Poly::zero(), &r).is_err());
    }

    #[test]
    fn initial_examples() {
        let r = RingSpec::q(&["x", "y"]);
        let (c, m) = initial(&parse_poly("x^2+y^2", &r).unwrap()).unwrap();
        assert!(c.is_one());
        assert_eq!(m, Mono::from_exps(&[2, 0]));
        let (c, m) = initial(&parse_poly("3*y", &r).unwrap()).unwrap();
        assert_eq!(c, r.field.from_i64(3));
        assert_eq!(m, Mono::var(1));
        let r1 = RingSpec::new(&["x", "y"], 1, Field::Rational).unwrap();
        let (_, m) = initial(&parse_poly("y^5+x", &r1).unwrap()).unwrap();
        assert_eq!(m, Mono::from_exps(&[0, 5]));
    }

    #[test]
    fn display_round_trip() {
        let r = RingSpec::q(&["x", "y"]);
        for s in ["x^2+y^2", "-x*y+3/2*y^3", "1-x", "0", "-7"] {
            let p = parse_poly(s, &r).unwrap();
            let q = parse_poly(&p.to_string_in(&r), &r).unwrap();
            assert_eq!(p, q);
        }
    }
}
