//! Coefficients, ring declarations, monomials and the flag order.
//!
//! The initial term of a polynomial is the *minimum* of its support. Monomials
//! are compared by P-order first, then lexicographically on the P-variables,
//! then by total degree, then lexicographically on the remaining variables.
//! Within a lexicographic block the monomial with the larger exponent at the
//! first differing variable is the smaller one, so `x^2 < x*y` when `x` is
//! declared before `y`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Maximum number of ring variables.
pub const MAX_VARS: usize = 8;

/// Base field of a ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coeff {
    Q(BigRational),
    Fp { v: u64, p: u64 },
}

// Ratio's own hash recurses through a continued fraction expansion, which
// overflows the stack on large coefficients; rationals are kept reduced, so
// hashing the parts is consistent with equality.
impl std::hash::Hash for Coeff {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match self {
            Coeff::Q(q) => {
                0u8.hash(state);
                q.numer().hash(state);
                q.denom().hash(state);
            }
            Coeff::Fp { v, p } => {
                1u8.hash(state);
                v.hash(state);
                p.hash(state);
            }
        }
    }
}

fn mod_pow(b: u64, mut e: u64, p: u64) -> u64 {
    let p = p as u128;
    let mut r = 1u128;
    let mut bb = b as u128 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * bb % p;
        }
        bb = bb * bb % p;
        e >>= 1;
    }
    r as u64
}

impl Field {
    pub fn zero(self) -> Coeff {
        self.from_i64(0)
    }

    pub fn one(self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Coeff {
        match self {
            Field::Rational => Coeff::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Coeff::Fp {
                v: n.rem_euclid(p as i64) as u64,
                p,
            },
        }
    }

    pub fn from_bigint(self, n: &BigInt) -> Coeff {
        match self {
            Field::Rational => Coeff::Q(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                Coeff::Fp {
                    v: r.to_u64().unwrap_or(0),
                    p,
                }
            }
        }
    }

    /// Checks that `p` is a usable prime.
    pub fn validate(self) -> Result<()> {
        if let Field::Prime(p) = self {
            if p < 2 || p > u32::MAX as u64 {
                return Err(Error::Ring(format!("prime {p} out of range")));
            }
            let mut d = 2;
            while d * d <= p {
                if p % d == 0 {
                    return Err(Error::Ring(format!("{p} is not prime")));
                }
                d += 1;
            }
        }
        Ok(())
    }
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Q(q) => q.is_zero(),
            Coeff::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Q(q) => q.is_one(),
            Coeff::Fp { v, .. } => *v == 1,
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Coeff::Q(_) => Field::Rational,
            Coeff::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Coeff::Q(q) => q.is_negative(),
            Coeff::Fp { .. } => false,
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Coeff {
        match self {
            Coeff::Q(q) => Coeff::Q(q.recip()),
            Coeff::Fp { v, p } => {
                assert!(*v != 0, "inverse of zero");
                Coeff::Fp {
                    v: mod_pow(*v, p - 2, *p),
                    p: *p,
                }
            }
        }
    }

    pub fn div(&self, o: &Coeff) -> Coeff {
        self * &o.inv()
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Q(q) => write!(f, "{q}"),
            Coeff::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $qop:tt, $fp:expr) => {
        impl<'a> $tr<&'a Coeff> for &'a Coeff {
            type Output = Coeff;
            fn $m(self, o: &'a Coeff) -> Coeff {
                match (self, o) {
                    (Coeff::Q(a), Coeff::Q(b)) => Coeff::Q(a $qop b),
                    (Coeff::Fp { v: a, p }, Coeff::Fp { v: b, p: q }) if p == q => {
                        let f: fn(u128, u128, u128) -> u128 = $fp;
                        Coeff::Fp { v: f(*a as u128, *b as u128, *p as u128) as u64, p: *p }
                    }
                    _ => panic!("coefficient field mismatch"),
                }
            }
        }
        impl $tr for Coeff {
            type Output = Coeff;
            fn $m(self, o: Coeff) -> Coeff {
                (&self).$m(&o)
            }
        }
    };
}

binop!(Add, add, +, |a, b, p| (a + b) % p);
binop!(Sub, sub, -, |a, b, p| (a + p - b) % p);
binop!(Mul, mul, *, |a, b, p| a * b % p);

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        match self {
            Coeff::Q(a) => Coeff::Q(-a),
            Coeff::Fp { v, p } => Coeff::Fp {
                v: (p - v) % p,
                p: *p,
            },
        }
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -&self
    }
}

/// Exponent vector. Unused trailing slots are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Mono(pub [u16; MAX_VARS]);

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.0[..])
    }
}

impl Mono {
    pub fn one() -> Mono {
        Mono([0; MAX_VARS])
    }

    pub fn var(i: usize) -> Mono {
        let mut m = Mono::one();
        m.0[i] = 1;
        m
    }

    pub fn from_exps(e: &[u16]) -> Mono {
        let mut m = Mono::one();
        m.0[..e.len()].copy_from_slice(e);
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut r = *self;
        for i in 0..MAX_VARS {
            r.0[i] += o.0[i];
        }
        r
    }

    pub fn divides(&self, o: &Mono) -> bool {
        (0..MAX_VARS).all(|i| self.0[i] <= o.0[i])
    }

    /// `o / self`, assuming divisibility.
    pub fn quotient_of(&self, o: &Mono) -> Mono {
        let mut r = *o;
        for i in 0..MAX_VARS {
            r.0[i] -= self.0[i];
        }
        r
    }

    pub fn lcm(&self, o: &Mono) -> Mono {
        let mut r = *self;
        for i in 0..MAX_VARS {
            r.0[i] = r.0[i].max(o.0[i]);
        }
        r
    }

    pub fn deg(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Degree in the first `c` variables.
    pub fn deg_prefix(&self, c: usize) -> u32 {
        self.0[..c].iter().map(|&e| e as u32).sum()
    }
}

/// A ring declaration: variables, the center `P = <x_1..x_c>` and the field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSpec {
    pub names: Vec<String>,
    pub c: usize,
    pub field: Field,
}

impl RingSpec {
    pub fn new(names: &[&str], c: usize, field: Field) -> Result<RingSpec> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        RingSpec::from_names(names, c, field)
    }

    pub fn from_names(names: Vec<String>, c: usize, field: Field) -> Result<RingSpec> {
        let n = names.len();
        if n == 0 || n > MAX_VARS {
            return Err(Error::Ring(format!("variable count {n} outside 1..={MAX_VARS}")));
        }
        if c < 1 || c > n {
            return Err(Error::Ring(format!("center size {c} outside 1..={n}")));
        }
        for i in 0..n {
            if names[..i].contains(&names[i]) {
                return Err(Error::Ring(format!("duplicate variable {}", names[i])));
            }
        }
        field.validate()?;
        Ok(RingSpec { names, c, field })
    }

    /// Rational ring with all variables in the center.
    pub fn q(names: &[&str]) -> RingSpec {
        RingSpec::new(names, names.len(), Field::Rational).expect("valid ring")
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn ord_p(&self, m: &Mono) -> u32 {
        m.deg_prefix(self.c)
    }

    pub fn zero(&self) -> Coeff {
        self.field.zero()
    }

    pub fn one(&self) -> Coeff {
        self.field.one()
    }

    pub fn cmp_mono(&self, a: &Mono, b: &Mono) -> Ordering {
        let c = self.c;
        let n = self.n();
        a.deg_prefix(c)
            .cmp(&b.deg_prefix(c))
            .then_with(|| lex_block(&a.0[..c], &b.0[..c]))
            .then_with(|| a.deg().cmp(&b.deg()))
            .then_with(|| lex_block(&a.0[c..n], &b.0[c..n]))
    }
}

fn lex_block(a: &[u16], b: &[u16]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

/// Compares two exponent vectors of length `n` under the flag order.
pub fn compare_monomials(m1: &[u16], m2: &[u16], spec: &RingSpec) -> Result<Ordering> {
    if m1.len() != spec.n() || m2.len() != spec.n() {
        return Err(Error::Dimension(format!(
            "monomial lengths {} and {} for a ring with {} variables",
            m1.len(),
            m2.len(),
            spec.n()
        )));
    }
    Ok(spec.cmp_mono(&Mono::from_exps(m1), &Mono::from_exps(m2)))
}

/// Term order on a free module `R^m` induced by images of its basis vectors.
///
/// A term `m*e_k` is keyed by `m * lambda[k]` in the flag order and then by
/// `chain[k]`, the component path of `e_k` read from the bottom of the
/// resolution up. The P-order of `e_k` is the P-order of `lambda[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleOrder {
    pub ring: RingSpec,
    pub lambda: Vec<Mono>,
    pub chain: Vec<Vec<u32>>,
}

impl ModuleOrder {
    /// Order on the ring itself, viewed as a rank one module.
    pub fn ring(ring: &RingSpec) -> ModuleOrder {
        ModuleOrder {
            ring: ring.clone(),
            lambda: vec![Mono::one()],
            chain: vec![vec![0]],
        }
    }

    /// Order on `R^m` with trivial weights; ties go to the lower index.
    pub fn free(ring: &RingSpec, m: usize) -> ModuleOrder {
        ModuleOrder {
            ring: ring.clone(),
            lambda: vec![Mono::one(); m],
            chain: (0..m as u32).map(|k| vec![k]).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.lambda.len()
    }

    pub fn mark(&self, k: usize) -> u32 {
        self.ring.ord_p(&self.lambda[k])
    }

    pub fn cmp_term(&self, a: (&Mono, usize), b: (&Mono, usize)) -> Ordering {
        let ka = a.0.mul(&self.lambda[a.1]);
        let kb = b.0.mul(&self.lambda[b.1]);
        self.ring
            .cmp_mono(&ka, &kb)
            .then_with(|| self.chain[a.1].cmp(&self.chain[b.1]))
    }

    /// Total degree used for the ecart of module elements.
    pub fn term_deg(&self, m: &Mono, k: usize) -> u32 {
        m.deg() + self.lambda[k].deg()
    }

    /// Order on the source of a map whose columns have the given initial
    /// terms `(monomial, component)` in this module.
    pub fn induced(&self, initials: &[(Mono, usize)]) -> ModuleOrder {
        let lambda = initials
            .iter()
            .map(|(m, k)| m.mul(&self.lambda[*k]))
            .collect();
        let chain = initials
            .iter()
            .enumerate()
            .map(|(j, (_, k))| {
                let mut c = self.chain[*k].clone();
                c.push(j as u32);
                c
            })
            .collect();
        ModuleOrder {
            ring: self.ring.clone(),
            lambda,
            chain,
        }
    }
}

/// Position data of a module term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModulePosition {
    /// Zero-based component index.
    pub component: usize,
}

/// Compares module terms `m1*e_i` and `m2*e_j` in the order induced by the
/// initial monomials of the target basis.
pub fn compare_module(
    t1: (&Mono, ModulePosition),
    t2: (&Mono, ModulePosition),
    spec: &RingSpec,
    basis_initials: &[Mono],
) -> Result<Ordering> {
    let m = basis_initials.len();
    for p in [t1.1, t2.1] {
        if p.component >= m {
            return Err(Error::Dimension(format!(
                "component {} outside rank {m}",
                p.component
            )));
        }
    }
    let base = ModuleOrder::ring(spec);
    let order = base.induced(&basis_initials.iter().map(|m| (*m, 0)).collect::<Vec<_>>());
    Ok(order.cmp_term((t1.0, t1.1.component), (t2.0, t2.1.component)))
}

/// Binomial coefficient as `u64`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_order_examples() {
        let r = RingSpec::q(&["x", "y"]);
        assert_eq!(compare_monomials(&[2, 0], &[1, 1], &r).unwrap(), Ordering::Less);
        let r1 = RingSpec::new(&["x", "y"], 1, Field::Rational).unwrap();
        assert_eq!(compare_monomials(&[0, 3], &[1, 0], &r1).unwrap(), Ordering::Less);
        assert_eq!(compare_monomials(&[1, 1], &[1, 1], &r).unwrap(), Ordering::Equal);
        assert!(compare_monomials(&[1], &[1, 1], &r).is_err());
    }

    #[test]
    fn module_order_examples() {
        let r = RingSpec::q(&["x", "y"]);
        let x = Mono::var(0);
        let one = Mono::one();
        let p = |k| ModulePosition { component: k };
        // equal images, lower index first
        let ini = [Mono::var(0), Mono::var(0)];
        assert_eq!(compare_module((&x, p(0)), (&x, p(1)), &r, &ini).unwrap(), Ordering::Less);
        assert_eq!(compare_module((&one, p(0)), (&x, p(0)), &r, &ini).unwrap(), Ordering::Less);
        assert_eq!(compare_module((&x, p(1)), (&x, p(1)), &r, &ini).unwrap(), Ordering::Equal);
        assert!(compare_module((&x, p(2)), (&x, p(1)), &r, &ini).is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::Prime(7);
        let a = f.from_i64(3);
        assert_eq!(&a * &a.inv(), f.one());
        assert_eq!(&a - &f.from_i64(5), f.from_i64(5));
        assert!(Field::Prime(9).validate().is_err());
    }
}
