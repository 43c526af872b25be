//! Twist bookkeeping on the blow-up side: marks of a resolution read as
//! multiples of the exceptional divisor, the Gorenstein parameter with its
//! list of exceptional pieces, and threshold splits of graded complexes.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::resolution::FreeResolution;

/// Per homological position, `(twist, multiplicity)` for summands
/// `O(twist * E)`, twists ascending. `head` is the twist of the rank-one term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjComplexDescriptor {
    pub head: u32,
    pub positions: Vec<Vec<(u32, usize)>>,
    /// The marks these were read from.
    pub marks: Vec<Vec<u32>>,
}

impl ProjComplexDescriptor {
    /// Twists at a position as a flat sorted list.
    pub fn twists(&self, i: usize) -> Vec<u32> {
        self.positions[i]
            .iter()
            .flat_map(|&(t, m)| std::iter::repeat_n(t, m))
            .collect()
    }
}

fn multiset(xs: &[u32]) -> Vec<(u32, usize)> {
    let mut m: BTreeMap<u32, usize> = BTreeMap::new();
    for &x in xs {
        *m.entry(x).or_default() += 1;
    }
    m.into_iter().collect()
}

pub fn proj_complex(res: &FreeResolution) -> Result<ProjComplexDescriptor> {
    let r = &res.ring;
    let Some(first) = res.steps.first() else {
        return Err(Error::Precondition("empty resolution".into()));
    };
    if first.matrix.data.iter().any(|g| !g.constant_term(r).is_zero()) {
        return Err(Error::Precondition("the unit ideal has no exceptional twists".into()));
    }
    let marks = res.marks();
    Ok(ProjComplexDescriptor {
        head: 0,
        positions: marks.iter().map(|m| multiset(m)).collect(),
        marks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SodReport {
    pub n: u32,
    pub c: u32,
    pub d: u32,
    pub gorenstein_parameter: i64,
    /// Twists `j` of the pieces `O_E(j)`, ascending.
    pub pieces: Vec<i64>,
    pub residue_label: String,
    pub applicable: bool,
}

impl SodReport {
    pub fn piece_labels(&self) -> Vec<String> {
        self.pieces.iter().map(|j| format!("O_E({j})")).collect()
    }
}

/// Pieces `O_E(-(c-d)+1), .., O_E(-1)` when `c - d > 0`.
pub fn sod_report(n: u32, c: u32, d: u32) -> Result<SodReport> {
    if c < 1 || c > n {
        return Err(Error::Domain(format!("need 1 <= c <= n, got c = {c}, n = {n}")));
    }
    if d < 1 {
        return Err(Error::Domain("d must be at least 1".into()));
    }
    let a = c as i64 - d as i64;
    let applicable = a > 0;
    let pieces = if applicable { (-(a - 1)..=-1).collect() } else { Vec::new() };
    Ok(SodReport {
        n,
        c,
        d,
        gorenstein_parameter: a,
        pieces,
        residue_label: "A_{-1}".into(),
        applicable,
    })
}

/// Shifts `a^(j)_i` of `U_j = sum A(a^(j)_i)` per position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComplex {
    pub positions: Vec<Vec<i64>>,
}

impl GradedComplex {
    pub fn from_resolution(res: &FreeResolution) -> GradedComplex {
        let mut positions = vec![vec![0]];
        positions.extend(res.marks().into_iter().map(|m| m.into_iter().map(i64::from).collect()));
        GradedComplex { positions }
    }

    /// Koszul complex on `c` linear forms: shift `j`, `binom(c, j)` times.
    pub fn koszul(c: usize) -> GradedComplex {
        let positions = (0..=c)
            .map(|j| vec![j as i64; crate::coeffring::binomial(c as u64, j as u64) as usize])
            .collect();
        GradedComplex { positions }
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.positions.iter().map(Vec::len).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationSplit {
    pub k: i64,
    /// Shifts `<= k`.
    pub floor: GradedComplex,
    /// Shifts `> k`.
    pub ceiling: GradedComplex,
}

impl TruncationSplit {
    pub fn partitions(&self, gc: &GradedComplex) -> bool {
        gc.positions.len() == self.floor.positions.len()
            && gc.positions.iter().enumerate().all(|(i, p)| {
                let mut joined: Vec<i64> = self.floor.positions[i].iter().chain(&self.ceiling.positions[i]).copied().collect();
                let mut orig = p.clone();
                joined.sort_unstable();
                orig.sort_unstable();
                joined == orig
            })
    }
}

pub fn graded_truncate(gc: &GradedComplex, k: i64) -> TruncationSplit {
    let (floor, ceiling) = gc
        .positions
        .iter()
        .map(|p| p.iter().partition::<Vec<i64>, _>(|&&a| a <= k))
        .unzip();
    TruncationSplit {
        k,
        floor: GradedComplex { positions: floor },
        ceiling: GradedComplex { positions: ceiling },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::RingSpec;
    use crate::parse::parse_polys;
    use crate::resolution::free_resolution;

    #[test]
    fn projective_twists() {
        let r = RingSpec::q(&["x", "y"]);
        let res = free_resolution(&parse_polys(&["x", "y"], &r).unwrap(), &r).unwrap();
        let p = proj_complex(&res).unwrap();
        assert_eq!(p.positions, vec![vec![(1, 2)], vec![(2, 1)]]);
        let res = free_resolution(&parse_polys(&["x^2+y^2", "x*y", "y^3"], &r).unwrap(), &r).unwrap();
        let p = proj_complex(&res).unwrap();
        assert_eq!((p.head, p.twists(0)), (0, vec![2, 2, 3]));
        let res = free_resolution(&parse_polys(&["1+x"], &r).unwrap(), &r).unwrap();
        assert!(proj_complex(&res).is_err());
    }

    #[test]
    fn sod_pieces() {
        let s = sod_report(3, 3, 1).unwrap();
        assert_eq!((s.gorenstein_parameter, s.pieces.clone()), (2, vec![-1]));
        assert_eq!(s.piece_labels(), vec!["O_E(-1)"]);
        assert_eq!(sod_report(4, 4, 1).unwrap().pieces, vec![-2, -1]);
        let s = sod_report(3, 2, 2).unwrap();
        assert!(!s.applicable && s.pieces.is_empty() && s.gorenstein_parameter == 0);
        assert!(sod_report(2, 3, 1).is_err());
        assert!(sod_report(2, 2, 0).is_err());
    }

    #[test]
    fn truncations() {
        let gc = GradedComplex { positions: vec![vec![0, 1, -2]] };
        let t = graded_truncate(&gc, 0);
        assert_eq!(t.floor.positions, vec![vec![0, -2]]);
        assert_eq!(t.ceiling.positions, vec![vec![1]]);
        assert!(graded_truncate(&gc, 5).ceiling.positions[0].is_empty());

        let k = GradedComplex::koszul(3);
        let r = RingSpec::q(&["x", "y", "z"]);
        let res = free_resolution(&parse_polys(&["x", "y", "z"], &r).unwrap(), &r).unwrap();
        assert_eq!(GradedComplex::from_resolution(&res), k);
        let t = graded_truncate(&k, 1);
        assert_eq!(t.floor.ranks(), vec![1, 3, 0, 0]);
        assert_eq!(t.ceiling.ranks(), vec![0, 0, 3, 1]);
        assert!(t.partitions(&k));
    }
}
