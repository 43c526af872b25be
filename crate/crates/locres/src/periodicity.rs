//! Asymptotic periodicity of a matrix factorization under the P-order
//! valuation, decided as a system of difference constraints, plus the
//! Knörrer-type transforms and extension sums on certificates.

use crate::coeffring::RingSpec;
use crate::error::{Error, Result};
use crate::poly::{ord_p, Poly, PolyMatrix};

/// A valuation; `None` is infinity (a zero entry).
pub type Val = Option<i64>;

/// Entrywise `ord_P`, infinity for zero entries.
pub fn valuation_matrix(m: &PolyMatrix, r: &RingSpec) -> Vec<Vec<Val>> {
    (0..m.rows)
        .map(|i| (0..m.cols).map(|j| ord_p(m.get(i, j), r).map(i64::from)).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicityInstance {
    pub n: usize,
    pub a_val: Vec<Vec<Val>>,
    pub b_val: Vec<Vec<Val>>,
    pub d: i64,
}

impl PeriodicityInstance {
    pub fn new(a_val: Vec<Vec<Val>>, b_val: Vec<Vec<Val>>, d: i64) -> Result<PeriodicityInstance> {
        let n = a_val.len();
        let square = |m: &Vec<Vec<Val>>| m.len() == n && m.iter().all(|row| row.len() == n);
        if !square(&a_val) || !square(&b_val) {
            return Err(Error::Dimension(format!("valuation matrices must both be {n}x{n}")));
        }
        if d < 1 {
            return Err(Error::Domain(format!("d = {d} must be at least 1")));
        }
        if a_val.iter().chain(&b_val).flatten().any(|v| v.is_some_and(|x| x < 0)) {
            return Err(Error::Domain("valuations must be nonnegative".into()));
        }
        Ok(PeriodicityInstance { n, a_val, b_val, d })
    }

    /// Instance of a pair `(A, B)` with `AB = w id`.
    pub fn from_pair(a: &PolyMatrix, b: &PolyMatrix, w: &Poly, r: &RingSpec) -> Result<PeriodicityInstance> {
        let d = ord_p(w, r).ok_or_else(|| Error::Domain("w is zero".into()))?;
        PeriodicityInstance::new(valuation_matrix(a, r), valuation_matrix(b, r), d as i64)
    }

    /// All difference constraints.
    pub fn constraints(&self) -> Vec<Constraint> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if let Some(v) = self.a_val[i][j] {
                    out.push(Constraint { kind: Kind::AB, i, j, weight: v });
                }
            }
        }
        for i in 0..self.n {
            for j in 0..self.n {
                if let Some(v) = self.b_val[i][j] {
                    out.push(Constraint { kind: Kind::BA, i, j, weight: v - self.d });
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// `b_i - a_j <= aVal[i][j]`.
    AB,
    /// `a_i - b_j <= bVal[i][j] - d`.
    BA,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub kind: Kind,
    pub i: usize,
    pub j: usize,
    pub weight: i64,
}

impl Constraint {
    /// Graph nodes `(from, to)`: variable `a_j` is node `j`, `b_j` is `n + j`.
    fn nodes(&self, n: usize) -> (usize, usize) {
        match self.kind {
            Kind::AB => (self.j, n + self.i),
            Kind::BA => (n + self.j, self.i),
        }
    }

    pub fn describe(&self) -> String {
        let (lhs, rhs) = match self.kind {
            Kind::AB => (format!("b_{}", self.i + 1), format!("a_{}", self.j + 1)),
            Kind::BA => (format!("a_{}", self.i + 1), format!("b_{}", self.j + 1)),
        };
        match self.weight {
            0 => format!("{lhs} <= {rhs}"),
            w if w > 0 => format!("{lhs} <= {rhs}+{w}"),
            w => format!("{lhs} <= {rhs}{w}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PeriodicityCertificate {
    Feasible { a: Vec<i64>, b: Vec<i64> },
    Infeasible { cycle: Vec<Constraint> },
}

impl PeriodicityCertificate {
    pub fn is_feasible(&self) -> bool {
        matches!(self, PeriodicityCertificate::Feasible { .. })
    }

    pub fn windows(&self) -> Option<(&[i64], &[i64])> {
        match self {
            PeriodicityCertificate::Feasible { a, b } => Some((a, b)),
            PeriodicityCertificate::Infeasible { .. } => None,
        }
    }

    /// Substitution check of every min-inequality, or recomputation of the
    /// witness cycle from the instance.
    pub fn verify(&self, inst: &PeriodicityInstance) -> bool {
        match self {
            PeriodicityCertificate::Feasible { a, b } => {
                a.len() == inst.n
                    && b.len() == inst.n
                    && a.iter().chain(b).all(|&x| x > 0)
                    && windows_satisfy(inst, a, b)
            }
            PeriodicityCertificate::Infeasible { cycle } => {
                let all = inst.constraints();
                if cycle.is_empty() || !cycle.iter().all(|c| all.contains(c)) {
                    return false;
                }
                let closed = (0..cycle.len()).all(|k| {
                    let (_, to) = cycle[k].nodes(inst.n);
                    let (from, _) = cycle[(k + 1) % cycle.len()].nodes(inst.n);
                    to == from
                });
                closed && cycle.iter().map(|c| c.weight).sum::<i64>() < 0
            }
        }
    }
}

/// The min-inequalities for windows of any sign.
pub fn windows_satisfy(inst: &PeriodicityInstance, a: &[i64], b: &[i64]) -> bool {
    (0..inst.n).all(|i| {
        (0..inst.n).all(|j| inst.a_val[i][j].is_none_or(|v| v + a[j] >= b[i]))
            && (0..inst.n).all(|j| inst.b_val[i][j].is_none_or(|v| v + b[j] >= a[i] + inst.d))
    })
}

fn shift_positive(a: &mut [i64], b: &mut [i64]) {
    let lo = a.iter().chain(b.iter()).copied().min().unwrap_or(1);
    if lo < 1 {
        for x in a.iter_mut().chain(b.iter_mut()) {
            *x += 1 - lo;
        }
    }
}

/// Bellman-Ford on the constraint graph; every node starts at distance 0,
/// which stands for a virtual source.
pub fn check_asymptotic_periodicity(inst: &PeriodicityInstance) -> PeriodicityCertificate {
    let n = inst.n;
    let cons = inst.constraints();
    let nodes = 2 * n;
    let mut dist = vec![0i64; nodes];
    let mut pred: Vec<Option<usize>> = vec![None; nodes];
    let mut last = None;
    for _ in 0..=nodes {
        last = None;
        for (e, c) in cons.iter().enumerate() {
            let (u, v) = c.nodes(n);
            if dist[u] + c.weight < dist[v] {
                dist[v] = dist[u] + c.weight;
                pred[v] = Some(e);
                last = Some(v);
            }
        }
        if last.is_none() {
            break;
        }
    }
    let Some(mut v) = last else {
        let (mut a, mut b) = (dist[..n].to_vec(), dist[n..].to_vec());
        shift_positive(&mut a, &mut b);
        return PeriodicityCertificate::Feasible { a, b };
    };
    // walking back `nodes` steps lands on the cycle
    for _ in 0..nodes {
        v = cons[pred[v].expect("relaxed node has a predecessor")].nodes(n).0;
    }
    let mut cycle = Vec::new();
    let mut u = v;
    loop {
        let c = &cons[pred[u].expect("cycle node has a predecessor")];
        cycle.push(c.clone());
        u = c.nodes(n).0;
        if u == v {
            break;
        }
    }
    cycle.reverse();
    PeriodicityCertificate::Infeasible { cycle }
}

/// Exhaustive search with `a_1 = 0` (shift invariance) and all other
/// windows in `[-bound, bound]`.
pub fn brute_force_feasible(inst: &PeriodicityInstance, bound: i64) -> bool {
    let n = inst.n;
    let vars = 2 * n - 1;
    let span = (2 * bound + 1) as u64;
    let total = span.pow(vars as u32);
    (0..total).any(|mut code| {
        let mut xs = vec![0i64];
        for _ in 0..vars {
            xs.push((code % span) as i64 - bound);
            code /= span;
        }
        windows_satisfy(inst, &xs[..n], &xs[n..])
    })
}

fn require_feasible(cert: &PeriodicityCertificate, inst: &PeriodicityInstance) -> Result<(Vec<i64>, Vec<i64>)> {
    match cert.windows() {
        Some((a, b)) if cert.verify(inst) => Ok((a.to_vec(), b.to_vec())),
        Some(_) => Err(Error::Inconsistent("certificate does not satisfy the instance".into())),
        None => Err(Error::Unsupported("the input presentation is not asymptotically periodic".into())),
    }
}

fn diag(n: usize, v: i64) -> Vec<Vec<Val>> {
    (0..n).map(|i| (0..n).map(|j| (i == j).then_some(v)).collect()).collect()
}

fn blocks(tl: &[Vec<Val>], tr: &[Vec<Val>], bl: &[Vec<Val>], br: &[Vec<Val>]) -> Vec<Vec<Val>> {
    let top = tl.iter().zip(tr).map(|(x, y)| x.iter().chain(y).copied().collect());
    let bot = bl.iter().zip(br).map(|(x, y)| x.iter().chain(y).copied().collect());
    top.chain(bot).collect()
}

/// Block layout of a transformed factorization, entries as labels.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockShape {
    pub a: Vec<Vec<String>>,
    pub b: Vec<Vec<String>>,
}

#[derive(Clone, Debug)]
pub struct Transformed {
    pub shape: BlockShape,
    pub instance: PeriodicityInstance,
    pub certificate: PeriodicityCertificate,
    pub d_new: i64,
    /// Admissible window shifts from the lemma.
    pub interval: (i64, i64),
    /// Shift used by the construction.
    pub k: i64,
}

fn labels(rows: &[&[&str]]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect()
}

/// `w + u^2 + v^2` with `(A, u+iv; u-iv, -B)`, `(B, u+iv; u-iv, -A)`;
/// `vals` are the valuations of `u+iv` and `u-iv`. Windows are
/// `(a, b + k)` and `(b, a + d' + k)` with `k = beta - d'`.
pub fn knorrer_double(
    inst: &PeriodicityInstance,
    cert: &PeriodicityCertificate,
    vals: (i64, i64),
) -> Result<Transformed> {
    let (a, b) = require_feasible(cert, inst)?;
    let (alpha, beta) = vals;
    if alpha < 1 || beta < 1 {
        return Err(Error::Domain("new valuations must be positive".into()));
    }
    let n = inst.n;
    let dn = inst.d.min(alpha + beta);
    let interval = (-alpha, beta - dn);
    if interval.0 > interval.1 {
        return Err(Error::Inconsistent(format!("empty window interval {interval:?}")));
    }
    let k = interval.1;
    let instance = PeriodicityInstance::new(
        blocks(&inst.a_val, &diag(n, alpha), &diag(n, beta), &inst.b_val),
        blocks(&inst.b_val, &diag(n, alpha), &diag(n, beta), &inst.a_val),
        dn,
    )?;
    let mut an: Vec<i64> = a.iter().copied().chain(b.iter().map(|x| x + k)).collect();
    let mut bn: Vec<i64> = b.iter().copied().chain(a.iter().map(|x| x + dn + k)).collect();
    shift_positive(&mut an, &mut bn);
    let certificate = PeriodicityCertificate::Feasible { a: an, b: bn };
    if !certificate.verify(&instance) {
        return Err(Error::Inconsistent("doubled windows fail the inequalities".into()));
    }
    Ok(Transformed {
        shape: BlockShape {
            a: labels(&[&["A", "(u+iv)I"], &["(u-iv)I", "-B"]]),
            b: labels(&[&["B", "(u+iv)I"], &["(u-iv)I", "-A"]]),
        },
        instance,
        certificate,
        d_new: dn,
        interval,
        k,
    })
}

/// `(u + A, u - A)` for a pair with `B = -A`, factoring `w + u^2`;
/// `val_u` is the valuation of `u`. The lemma's shift interval is
/// `[d' - d - val_u, val_u - d']`.
pub fn knorrer_single(
    a: &PolyMatrix,
    b: &PolyMatrix,
    inst: &PeriodicityInstance,
    cert: &PeriodicityCertificate,
    val_u: i64,
) -> Result<Transformed> {
    if a.rows != b.rows || a.cols != b.cols || !a.data.iter().zip(&b.data).all(|(x, y)| *x == y.neg()) {
        return Err(Error::Precondition("B must equal -A".into()));
    }
    require_feasible(cert, inst)?;
    if val_u < 1 {
        return Err(Error::Domain("valuation of u must be positive".into()));
    }
    let dn = inst.d.min(2 * val_u);
    let (lo, hi) = (dn - inst.d - val_u, val_u - dn);
    if lo > hi {
        return Err(Error::Inconsistent(format!("empty window interval [{lo}, {hi}]")));
    }
    let with_u = |m: &Vec<Vec<Val>>| -> Vec<Vec<Val>> {
        (0..inst.n)
            .map(|i| {
                (0..inst.n)
                    .map(|j| if i == j { Some(m[i][j].map_or(val_u, |v| v.min(val_u))) } else { m[i][j] })
                    .collect()
            })
            .collect()
    };
    let instance = PeriodicityInstance::new(with_u(&inst.a_val), with_u(&inst.b_val), dn)?;
    let certificate = check_asymptotic_periodicity(&instance);
    if !certificate.is_feasible() {
        return Err(Error::Inconsistent("transformed single pair is not periodic".into()));
    }
    Ok(Transformed {
        shape: BlockShape {
            a: labels(&[&["u+A"]]),
            b: labels(&[&["u-A"]]),
        },
        instance,
        certificate,
        d_new: dn,
        interval: (lo, hi),
        k: hi,
    })
}

#[derive(Clone, Debug)]
pub struct ExtensionSum {
    pub instance: PeriodicityInstance,
    pub certificate: PeriodicityCertificate,
    /// Least admissible shift of the second summand; `None` when no mixed
    /// constraint exists and any shift works.
    pub k0: Option<i64>,
}

/// `(A, E; 0, A')`, `(B, F; 0, B')` with windows `(a, a' + k)` and
/// `(b, b' + k)`.
pub fn mf_extension_sum(
    inst1: &PeriodicityInstance,
    cert1: &PeriodicityCertificate,
    inst2: &PeriodicityInstance,
    cert2: &PeriodicityCertificate,
    e_val: &[Vec<Val>],
    f_val: &[Vec<Val>],
) -> Result<ExtensionSum> {
    let (a1, b1) = require_feasible(cert1, inst1).map_err(|e| Error::Precondition(e.to_string()))?;
    let (a2, b2) = require_feasible(cert2, inst2).map_err(|e| Error::Precondition(e.to_string()))?;
    if inst1.d != inst2.d {
        return Err(Error::Precondition("summands factor different valuations".into()));
    }
    let (n1, n2) = (inst1.n, inst2.n);
    let shaped = |m: &[Vec<Val>]| m.len() == n1 && m.iter().all(|r| r.len() == n2);
    if !shaped(e_val) || !shaped(f_val) {
        return Err(Error::Dimension(format!("extension blocks must be {n1}x{n2}")));
    }
    let d = inst1.d;
    let mut lower: Option<i64> = None;
    let mut bump = |x: i64| lower = Some(lower.map_or(x, |l: i64| l.max(x)));
    for i in 0..n1 {
        for j in 0..n2 {
            if let Some(e) = e_val[i][j] {
                bump(b1[i] - e - a2[j]);
            }
            if let Some(f) = f_val[i][j] {
                bump(a1[i] + d - f - b2[j]);
            }
        }
    }
    let k = lower.unwrap_or(0);
    let zeros = vec![vec![None; n1]; n2];
    let instance = PeriodicityInstance::new(
        blocks(&inst1.a_val, e_val, &zeros, &inst2.a_val),
        blocks(&inst1.b_val, f_val, &zeros, &inst2.b_val),
        d,
    )?;
    let mut a: Vec<i64> = a1.iter().copied().chain(a2.iter().map(|x| x + k)).collect();
    let mut b: Vec<i64> = b1.iter().copied().chain(b2.iter().map(|x| x + k)).collect();
    shift_positive(&mut a, &mut b);
    let certificate = PeriodicityCertificate::Feasible { a, b };
    if !certificate.verify(&instance) {
        return Err(Error::Inconsistent("extension windows fail the inequalities".into()));
    }
    Ok(ExtensionSum { instance, certificate, k0: lower })
}

/// `A = (x^(a-1), y^(b-1); y, -x)`, `B = (x, y^(b-1); y, -x^(a-1))` for
/// `w = x^a + y^b` on the first two variables.
pub fn an_pair(a: u32, b: u32, r: &RingSpec) -> Result<(PolyMatrix, PolyMatrix, Poly)> {
    if a < 2 || b < 2 || r.n() < 2 {
        return Err(Error::Domain("need exponents at least 2 and two variables".into()));
    }
    let (x, y) = (Poly::var(r, 0), Poly::var(r, 1));
    let am = PolyMatrix::from_rows(vec![
        vec![x.pow(a - 1, r), y.pow(b - 1, r)],
        vec![y.clone(), x.neg()],
    ]);
    let bm = PolyMatrix::from_rows(vec![
        vec![x.clone(), y.pow(b - 1, r)],
        vec![y.clone(), x.pow(a - 1, r).neg()],
    ]);
    Ok((am, bm, x.pow(a, r).add(&y.pow(b, r), r)))
}

/// The same pair with the perturbation `(x^(a-1)+y, y^(b-1)-x; y, -x)`,
/// `(x, y^(b-1)-x; y, -x^(a-1)-y)`; still `AB = BA = w id`.
pub fn an_perturbed_pair(a: u32, b: u32, r: &RingSpec) -> Result<(PolyMatrix, PolyMatrix, Poly)> {
    let (am, bm, w) = an_pair(a, b, r)?;
    let (x, y) = (Poly::var(r, 0), Poly::var(r, 1));
    let mut pa = am.clone();
    let mut pb = bm.clone();
    pa.set(0, 0, am.get(0, 0).add(&y, r));
    pa.set(0, 1, am.get(0, 1).sub(&x, r));
    pb.set(0, 1, bm.get(0, 1).sub(&x, r));
    pb.set(1, 1, bm.get(1, 1).sub(&y, r));
    Ok((pa, pb, w))
}

/// `M = (0, A; -B, 0)` with `M (-M) = w id`, so a pair of the shape
/// `knorrer_single` accepts; windows `(b, a)` on the source and
/// `(a + d, b)` on the target.
pub fn antisymmetric_embedding(a: &PolyMatrix, b: &PolyMatrix, r: &RingSpec) -> (PolyMatrix, PolyMatrix) {
    let n = a.rows;
    let mut m = PolyMatrix::zeros(2 * n, 2 * n, r);
    m.put_block(0, n, a);
    m.put_block(n, 0, &b.neg());
    let neg = m.neg();
    (m, neg)
}
