//! One PASS/FAIL line per acceptance criterion. Exits nonzero on any FAIL
//! not listed in `KNOWN_RED`.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use locres::hyperfac::{
    assemble_block_mf, ci_homotopies, ci_totalization, higher_homotopies, homotopy_chain, HomotopyFamily,
};
use locres::localdiv::{mora_divide_with, Budget};
use locres::oracle::{hilbert_from_shifts, hilbert_function};
use locres::parse::{parse_poly, parse_polys};
use locres::periodicity::{
    an_pair, an_perturbed_pair, antisymmetric_embedding, brute_force_feasible, check_asymptotic_periodicity,
    knorrer_double, knorrer_single, mf_extension_sum, PeriodicityCertificate, PeriodicityInstance, Val,
};
use locres::poly::{initial, leading_form_p};
use locres::reescalc::sod_report;
use locres::resolution::{free_resolution, leading_complex, twist_exactness_check};
use locres::stdbasis::standard_basis;
use locres::{Field, FracMatrix, Mono, Poly, PolyMatrix, RingSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration) -> Outcome {
    let e = t.elapsed();
    check(e < limit, || format!("took {e:?}, limit {limit:?}"))
}

fn xy() -> RingSpec {
    RingSpec::q(&["x", "y"])
}

fn fm(rows: &[&[&str]], r: &RingSpec) -> FracMatrix {
    let rows = rows
        .iter()
        .map(|row| row.iter().map(|s| parse_poly(s, r).unwrap()).collect())
        .collect();
    PolyMatrix::from_rows(rows).to_frac(r)
}

/// Same element after scaling by a unit constant.
fn same_up_to_unit(f: &Poly, g: &Poly, r: &RingSpec) -> bool {
    match (initial(f), initial(g)) {
        (Ok((cf, _)), Ok((cg, _))) => f.mul(&Poly::constant(cg), r) == g.mul(&Poly::constant(cf), r),
        _ => f.is_zero() && g.is_zero(),
    }
}

fn c1() -> Outcome {
    let t = Instant::now();
    let r = RingSpec::new(&["x", "y"], 2, Field::Rational).unwrap();
    let b = standard_basis(&parse_polys(&["x^2+y^2", "x*y"], &r).unwrap(), &r).map_err(|e| e.to_string())?;
    let want = parse_polys(&["x^2+y^2", "x*y", "y^3"], &r).unwrap();
    let got: Vec<String> = b.elements.iter().map(|e| e.to_string_in(&r)).collect();
    check(
        b.elements.len() == want.len() && want.iter().all(|w| b.elements.iter().any(|e| same_up_to_unit(e, w, &r))),
        || format!("basis {got:?}"),
    )?;
    within(t, Duration::from_secs(1))
}

fn c2() -> Outcome {
    let t = Instant::now();
    let r = xy();
    let gens = parse_polys(&["x^2+y^2", "x*y", "y^3"], &r).unwrap();
    let res = free_resolution(&gens, &r).map_err(|e| e.to_string())?;
    check(res.ranks == [1, 3, 2], || format!("ranks {:?}", res.ranks))?;
    check(res.composites_vanish(), || "F_0 F_1 != 0".into())?;
    check(res.marks_compatible(), || "mark inequality violated".into())?;
    let mut shifts = vec![vec![0]];
    shifts.extend(res.marks());
    for d in 0..=10 {
        let (o, m) = (hilbert_function(&gens, &r, d) as i64, hilbert_from_shifts(&shifts, r.n(), d));
        check(o == m, || format!("degree {d}: oracle {o}, from marks {m}"))?;
    }
    within(t, Duration::from_secs(5))
}

fn c3() -> Outcome {
    let r = xy();
    for gens in [vec!["x^2+y^2", "x*y", "y^3"], vec!["x^2+y^3", "x*y^2", "y^5"], vec!["x", "y"]] {
        let g = parse_polys(&gens, &r).unwrap();
        let res = free_resolution(&g, &r).map_err(|e| e.to_string())?;
        let b = standard_basis(&g, &r).map_err(|e| e.to_string())?;
        let forms: Vec<Poly> = b.elements.iter().map(|e| leading_form_p(e, &r).unwrap().0).collect();
        let lres = free_resolution(&forms, &r).map_err(|e| e.to_string())?;
        let lead: Vec<Vec<u32>> = leading_complex(&res).iter().map(|s| s.col_marks.clone()).collect();
        check(lres.ranks == res.ranks, || format!("{gens:?}: ranks {:?} vs {:?}", res.ranks, lres.ranks))?;
        check(lres.marks() == lead, || format!("{gens:?}: marks {lead:?} vs {:?}", lres.marks()))?;
    }
    Ok(())
}

fn mf_cases() -> Vec<(&'static str, Vec<&'static str>, &'static str)> {
    vec![
        ("Koszul, x^2+y^2", vec!["x", "y"], "x^2+y^2"),
        ("Koszul, x^3+y^3", vec!["x", "y"], "x^3+y^3"),
        ("three generators, x^2+y^2", vec!["x^2+y^2", "x*y", "y^3"], "x^2+y^2"),
    ]
}

fn family(gens: &[&str], w: &str) -> Result<HomotopyFamily, String> {
    let r = xy();
    let res = free_resolution(&parse_polys(gens, &r).unwrap(), &r).map_err(|e| e.to_string())?;
    let w = parse_poly(w, &r).unwrap();
    let mut b = Budget::default();
    let fam = homotopy_chain(&res, &w, &mut b).map_err(|e| e.to_string())?;
    higher_homotopies(fam, &mut b).map_err(|e| e.to_string())
}

fn c4() -> Outcome {
    let r = xy();
    for (label, gens, w) in mf_cases() {
        let fam = family(&gens, w)?;
        let mf = assemble_block_mf(&fam, None).map_err(|e| format!("{label}: {e}"))?;
        check(mf.identity_holds(&r), || format!("{label}: AB != w id or BA != w id"))?;
        if gens == ["x", "y"] && w == "x^2+y^2" {
            check(mf.a.rows == 2 && mf.a.cols == 2, || format!("{label}: A is {}x{}", mf.a.rows, mf.a.cols))?;
            // the Koszul syzygy is (y, -x), so conjugate by diag(1, -1)
            let dm = fm(&[&["1", "0"], &["0", "-1"]], &r);
            check(
                mf.a.mul(&dm, &r).eq_in(&fm(&[&["x", "-y"], &["y", "x"]], &r), &r)
                    && dm.mul(&mf.b, &r).eq_in(&fm(&[&["x", "y"], &["-y", "x"]], &r), &r),
                || format!("{label}: A = {:?}", mf.a.to_strings(&r)),
            )?;
        }
    }
    Ok(())
}

fn c5() -> Outcome {
    for (label, gens, w) in mf_cases() {
        let fam = family(&gens, w)?;
        for (v, j) in fam.sigma.keys() {
            check(fam.residual(v, *j).is_zero(), || format!("{label}: residual at {v:?}, {j} is nonzero"))?;
        }
        check(fam.residuals_vanish(), || format!("{label}: identity past the support fails"))?;
        let bound = fam.weight_bound();
        check(
            fam.support().iter().all(|(v, _)| v.iter().sum::<u32>() <= bound),
            || format!("{label}: homotopy stored beyond weight {bound}"),
        )?;
    }
    Ok(())
}

fn c6() -> Outcome {
    let t = Instant::now();
    let r = xy();
    for gens in [vec!["x", "y"], vec!["x^2+y^2", "x*y", "y^3"]] {
        let res = free_resolution(&parse_polys(&gens, &r).unwrap(), &r).map_err(|e| e.to_string())?;
        for twist in 0..=3 {
            let rep = twist_exactness_check(&res, twist, 10).map_err(|e| e.to_string())?;
            for p in &rep.positions {
                check(p.lifts_ok(), || format!("{gens:?}, r={twist}, level {}: a kernel probe fails to lift", p.level))?;
                check(p.graded_ok(), || format!("{gens:?}, r={twist}, level {}: {:?}", p.level, p.graded))?;
            }
        }
    }
    within(t, Duration::from_secs(30))
}

fn c7() -> Outcome {
    let r = xy();
    for (a, b) in [(3, 4), (3, 5), (4, 5)] {
        let (am, bm, w) = an_pair(a, b, &r).unwrap();
        let inst = PeriodicityInstance::from_pair(&am, &bm, &w, &r).map_err(|e| e.to_string())?;
        let cert = check_asymptotic_periodicity(&inst);
        check(cert.is_feasible() && cert.verify(&inst), || format!("x^{a}+y^{b}: {cert:?}"))?;
        let (am, bm, w) = an_perturbed_pair(a, b, &r).unwrap();
        let inst = PeriodicityInstance::from_pair(&am, &bm, &w, &r).map_err(|e| e.to_string())?;
        let cert = check_asymptotic_periodicity(&inst);
        let PeriodicityCertificate::Infeasible { cycle } = &cert else {
            return Err(format!("perturbed x^{a}+y^{b} reported feasible"));
        };
        let weight: i64 = cycle.iter().map(|c| c.weight).sum();
        check(weight < 0 && cert.verify(&inst), || format!("perturbed x^{a}+y^{b}: cycle weight {weight}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..200 {
        let gen = |rng: &mut ChaCha8Rng| -> Vec<Vec<Val>> {
            (0..2)
                .map(|_| (0..2).map(|_| (rng.gen_range(0..5) != 0).then(|| rng.gen_range(0..=3))).collect())
                .collect()
        };
        let (av, bv) = (gen(&mut rng), gen(&mut rng));
        let inst = PeriodicityInstance::new(av, bv, rng.gen_range(1..=3)).unwrap();
        let cert = check_asymptotic_periodicity(&inst);
        check(cert.verify(&inst), || format!("case {case}: certificate fails substitution"))?;
        check(cert.is_feasible() == brute_force_feasible(&inst, 10), || format!("case {case}: {inst:?}"))?;
    }
    Ok(())
}

fn c8() -> Outcome {
    let r = xy();
    for (a, b) in [(3, 4), (3, 5), (4, 5)] {
        let label = format!("x^{a}+y^{b}");
        let (am, bm, w) = an_pair(a, b, &r).unwrap();
        let inst = PeriodicityInstance::from_pair(&am, &bm, &w, &r).unwrap();
        let cert = check_asymptotic_periodicity(&inst);

        let t = knorrer_double(&inst, &cert, (1, 1)).map_err(|e| format!("{label} double: {e}"))?;
        check(
            t.interval == (-1, 1 - t.d_new) && t.interval.0 <= t.k && t.k <= t.interval.1,
            || format!("{label} double: k = {} with interval {:?}", t.k, t.interval),
        )?;
        check(t.certificate.verify(&t.instance), || format!("{label} double: substitution fails"))?;

        let (m, neg) = antisymmetric_embedding(&am, &bm, &r);
        let si = PeriodicityInstance::from_pair(&m, &neg, &w, &r).unwrap();
        let sc = check_asymptotic_periodicity(&si);
        for val_u in 1..=3 {
            let t = knorrer_single(&m, &neg, &si, &sc, val_u).map_err(|e| format!("{label} single u={val_u}: {e}"))?;
            let want = (t.d_new - si.d - val_u, val_u - t.d_new);
            check(t.interval == want && want.0 <= want.1, || format!("{label} single: interval {:?}", t.interval))?;
            check(t.certificate.verify(&t.instance), || format!("{label} single u={val_u}: substitution fails"))?;
        }

        let zero = vec![vec![Some(0); 2]; 2];
        let none = vec![vec![None; 2]; 2];
        for (e, f) in [(&none, &none), (&zero, &none), (&zero, &zero)] {
            let s = mf_extension_sum(&inst, &cert, &inst, &cert, e, f).map_err(|e| format!("{label} extension: {e}"))?;
            check(s.certificate.verify(&s.instance), || format!("{label} extension: substitution fails"))?;
        }
    }
    Ok(())
}

fn c9() -> Outcome {
    let r = xy();
    let res = free_resolution(&parse_polys(&["x", "y"], &r).unwrap(), &r).map_err(|e| e.to_string())?;
    let (w1, w2) = (parse_poly("x^2", &r).unwrap(), parse_poly("y^2", &r).unwrap());
    let fam = ci_homotopies(&res, &w1, &w2, None, &mut Budget::default()).map_err(|e| e.to_string())?;
    let three = fam
        .k(1)
        .mul(&fam.l(0), &r)
        .add(&fam.l(1).mul(&fam.k(0), &r), &r)
        .add(&fam.d(2).mul(&fam.g(0), &r), &r);
    check(three.is_zero(), || format!("K1L0 + L1K0 + F2G0 = {:?}", three.to_strings(&r)))?;
    check(fam.residuals_vanish(), || "a stored identity fails".into())?;
    let t = ci_totalization(&fam, 4).map_err(|e| e.to_string())?;
    check(t.composites_vanish_mod(&r).map_err(|e| e.to_string())?, || "composites nonzero mod (x^2, y^2)".into())?;
    let ex = t.graded_exactness(&r, 8).map_err(|e| e.to_string())?;
    check(ex.iter().all(|(_, _, k, i)| k == i), || format!("{ex:?}"))
}

fn c10() -> Outcome {
    let s = sod_report(3, 3, 1).map_err(|e| e.to_string())?;
    check(s.piece_labels() == ["O_E(-1)"], || format!("(3,3,1): {:?}", s.piece_labels()))?;
    let s = sod_report(4, 4, 1).map_err(|e| e.to_string())?;
    check(s.piece_labels() == ["O_E(-2)", "O_E(-1)"], || format!("(4,4,1): {:?}", s.piece_labels()))?;
    let s = sod_report(3, 2, 2).map_err(|e| e.to_string())?;
    check(!s.applicable && s.pieces.is_empty(), || "(3,2,2) not flagged".into())?;
    for c in 2..=8u32 {
        for d in 1..c {
            for n in c..=8 {
                let s = sod_report(n, c, d).map_err(|e| e.to_string())?;
                let want = (c as i64 - d as i64 - 1).max(0) as usize;
                check(s.pieces.len() == want, || format!("({n},{c},{d}): {} pieces", s.pieces.len()))?;
            }
        }
    }
    Ok(())
}

fn rand_poly(rng: &mut ChaCha8Rng, r: &RingSpec, maxdeg: u16, nterms: usize, constants: bool) -> Poly {
    let terms: Vec<(Mono, _)> = (0..nterms)
        .map(|_| {
            let mut e = [0u16; 8];
            for _ in 0..rng.gen_range(u16::from(!constants)..=maxdeg) {
                e[rng.gen_range(0..r.n())] += 1;
            }
            (Mono(e), r.field.from_i64(rng.gen_range(-3..=3)))
        })
        .collect();
    Poly::from_terms(r, terms)
}

fn c11() -> Outcome {
    let names = ["x", "y", "z"];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut identity, mut reduced, mut ceilings) = (0, 0, 0);
    let total = 1000;
    for _ in 0..total {
        let n = rng.gen_range(1..=3);
        let r = RingSpec::new(&names[..n], rng.gen_range(1..=n), Field::Rational).unwrap();
        let f = rand_poly(&mut rng, &r, 6, 5, true);
        let k = rng.gen_range(1..=3);
        let mut g = Vec::new();
        while g.len() < k {
            let p = rand_poly(&mut rng, &r, 6, 3, false);
            if !p.is_zero() {
                g.push(p);
            }
        }
        match mora_divide_with(&f, &g, &r, &mut Budget::new(20_000)) {
            Ok(d) => {
                identity += d.identity_holds(&f, &g, &r) as usize;
                reduced += (d.fully_reduced && d.remainder_reduced(&g)) as usize;
            }
            Err(_) => ceilings += 1,
        }
    }
    check(identity == total && reduced == total, || {
        format!("identity {identity}/{total}, fully reduced remainder {reduced}/{total}, ceiling stops {ceilings}")
    })
}

fn corpus() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut jobs: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "job"))
        .collect();
    jobs.sort();
    jobs
}

fn c12() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_locres");
    for job in corpus() {
        let name = job.file_name().unwrap().to_string_lossy().into_owned();
        let run = || Command::new(bin).arg("run").arg(&job).output().unwrap();
        let (first, second) = (run(), run());
        check(first.stdout == second.stdout && first.stderr == second.stderr, || format!("{name}: output differs"))?;
        check(first.status.code() == second.status.code(), || format!("{name}: exit code differs"))?;
        let code = first.status.code();
        let want = match name.as_str() {
            "corrupted.job" => 1,
            "bad_syntax.job" => 2,
            _ => 0,
        };
        check(code == Some(want), || format!("{name}: exit {code:?}, expected {want}"))?;
    }
    Ok(())
}

/// Criteria that cannot hold as stated. They still run and print FAIL.
/// 11: a remainder with no divisible term need not exist; for
/// f = (x-1)^2, g = x - x^2 - y any such remainder is a polynomial in y
/// vanishing at (1, 0), yet its value at the origin is a nonzero multiple
/// of f(0).
const KNOWN_RED: &[usize] = &[11];

fn main() {
    let criteria: [Criterion; 12] = [
        ("standard basis closure of (x^2+y^2, xy)", c1),
        ("resolution shape of (x^2+y^2, xy, y^3)", c2),
        ("leading complex matches the leading-form resolution", c3),
        ("matrix factorization identity", c4),
        ("higher homotopy residuals vanish", c5),
        ("twisted exactness for r = 0..3", c6),
        ("asymptotic periodicity of x^a+y^b pairs", c7),
        ("Knorrer and extension certificates", c8),
        ("complete intersection x^2, y^2", c9),
        ("semiorthogonal pieces", c10),
        ("division soundness on 1000 random cases", c11),
        ("CLI determinism and exit codes", c12),
    ];
    let (mut failed, mut unexpected) = (0, 0);
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = f();
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(()) => println!("PASS {:>2} {name} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                let known = KNOWN_RED.contains(&(i + 1));
                unexpected += usize::from(!known);
                let tag = if known { " [known]" } else { "" };
                println!("FAIL {:>2} {name} ({secs:.2}s){tag}: {why}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if unexpected > 0 {
        std::process::exit(1);
    }
}
