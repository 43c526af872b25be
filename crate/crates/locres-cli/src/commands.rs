use std::path::PathBuf;

use clap::{Args, Subcommand};
use serde_json::{json, Map, Value};

use locres::hyperfac::{
    assemble_block_mf, ci_homotopies, ci_totalization, higher_homotopies, homotopy_chain, leading_homotopies,
    standard_resolution_s, HomotopyFamily,
};
use locres::localdiv::{mora_divide_with, Budget};
use locres::oracle::{hilbert_from_shifts, hilbert_function};
use locres::periodicity::{
    an_pair, an_perturbed_pair, antisymmetric_embedding, check_asymptotic_periodicity, knorrer_double, knorrer_single,
    PeriodicityCertificate, PeriodicityInstance, Val,
};
use locres::poly::leading_form_p;
use locres::reescalc::{proj_complex, sod_report};
use locres::resolution::{free_resolution_with, leading_complex, minimize, twist_exactness_check};
use locres::stdbasis::{s_pairs_reduce_to_zero, standard_basis_with};
use locres::{Error, FracMatrix, FreeResolution, Poly, PolyMatrix, Result, RingSpec};

use crate::job::{parse_job, JobSpec};

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Runs the `run` line of a job file.
    Run { job: PathBuf },
    /// Mora division of an element by the generators of an ideal.
    Divide {
        job: PathBuf,
        #[arg(long)]
        f: String,
        #[arg(long)]
        by: String,
    },
    /// Local standard basis.
    Std(IdealArgs),
    /// Schreyer resolution with marks.
    Resolve {
        #[command(flatten)]
        ideal: IdealArgs,
        #[arg(long)]
        minimize: bool,
    },
    /// Leading complex, compared with the resolution of the leading forms.
    Leading(IdealArgs),
    /// Lifting and graded exactness checks in the twist `r`.
    TwistCheck {
        #[command(flatten)]
        ideal: IdealArgs,
        #[arg(long, allow_hyphen_values = true)]
        r: i64,
        #[arg(long, default_value_t = 10)]
        cap: u32,
    },
    /// Homotopies for `w` in `I` and the block matrix factorization.
    Matfac {
        #[command(flatten)]
        ideal: IdealArgs,
        #[arg(long)]
        w: String,
        #[arg(long)]
        kprime: Option<usize>,
    },
    /// Resolution of `R/I` over `R/(w)` with twist bookkeeping.
    StdResS {
        #[command(flatten)]
        ideal: IdealArgs,
        #[arg(long)]
        w: String,
        #[arg(long, allow_hyphen_values = true)]
        r: i64,
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 6)]
        cap: u32,
    },
    /// Homotopies and totalization for two elements.
    CiMatfac {
        #[command(flatten)]
        ideal: IdealArgs,
        #[arg(long)]
        w1: String,
        #[arg(long)]
        w2: String,
        #[arg(long, default_value_t = 4)]
        length: usize,
        #[arg(long)]
        depth_cap: Option<u32>,
        #[arg(long, default_value_t = 8)]
        cap: u32,
    },
    /// Asymptotic periodicity of a factorization.
    Periodicity(PeriodicityArgs),
    /// Gorenstein parameter and exceptional pieces.
    Sod {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        c: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        table: bool,
    },
    /// Marks of the resolution as exceptional twists.
    Proj {
        #[command(flatten)]
        ideal: IdealArgs,
        #[arg(long)]
        table: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Run { .. } => "run",
            Command::Divide { .. } => "divide",
            Command::Std(_) => "std",
            Command::Resolve { .. } => "resolve",
            Command::Leading(_) => "leading",
            Command::TwistCheck { .. } => "twist-check",
            Command::Matfac { .. } => "matfac",
            Command::StdResS { .. } => "std-res-s",
            Command::CiMatfac { .. } => "ci-matfac",
            Command::Periodicity(_) => "periodicity",
            Command::Sod { .. } => "sod",
            Command::Proj { .. } => "proj",
        }
    }
}

#[derive(Args, Debug)]
pub struct IdealArgs {
    pub job: PathBuf,
    #[arg(long)]
    pub ideal: String,
}

#[derive(Args, Debug)]
pub struct PeriodicityArgs {
    pub job: Option<PathBuf>,
    /// Matrix names in the job file.
    #[arg(long, requires_all = ["b", "w"])]
    pub a: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long)]
    pub w: Option<String>,
    /// The pair for `x^a + y^b`, given as `a,b`.
    #[arg(long, value_name = "A,B")]
    pub an: Option<String>,
    #[arg(long)]
    pub perturbed: bool,
    /// JSON file `{"a": [[..]], "b": [[..]], "d": n}`, `null` for infinity.
    #[arg(long)]
    pub valuations: Option<PathBuf>,
    /// Batch over `a1..a2,b1..b2` for `x^a + y^b`.
    #[arg(long)]
    pub grid: Option<String>,
    /// Valuations of `u+iv, u-iv` for the doubling transform.
    #[arg(long, value_name = "ALPHA,BETA")]
    pub double: Option<String>,
    /// Valuation of `u` for `(u+M, u-M)` on the antisymmetric embedding.
    #[arg(long)]
    pub single: Option<i64>,
}

/// A report under construction.
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub attestations: Vec<(String, bool)>,
    pub warnings: Vec<String>,
    /// Plain text printed instead of JSON.
    pub table: Option<String>,
}

impl Report {
    fn new(command: &str) -> Report {
        Report {
            command: command.into(),
            inputs: Map::new(),
            results: Map::new(),
            attestations: Vec::new(),
            warnings: Vec::new(),
            table: None,
        }
    }

    fn attest(&mut self, name: impl Into<String>, ok: bool) {
        self.attestations.push((name.into(), ok));
    }

    fn result(&mut self, key: &str, v: Value) {
        self.results.insert(key.into(), v);
    }

    fn input(&mut self, key: &str, v: Value) {
        self.inputs.insert(key.into(), v);
    }

    pub fn ok(&self) -> bool {
        self.attestations.iter().all(|(_, ok)| *ok)
    }

    pub fn to_json(&self) -> Value {
        let att: Vec<Value> = self.attestations.iter().map(|(n, ok)| json!({"check": n, "ok": ok})).collect();
        json!({
            "schemaVersion": crate::SCHEMA_VERSION,
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "attestations": att,
            "warnings": self.warnings,
        })
    }
}

pub struct Ctx {
    pub oracle: bool,
    pub ceiling: Option<u64>,
}

impl Ctx {
    fn budget(&self) -> Budget {
        self.ceiling.map_or_else(Budget::default, Budget::new)
    }
}

fn load(path: &PathBuf) -> Result<JobSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Domain(format!("{}: {e}", path.display())))?;
    parse_job(&text)
}

fn polys(ps: &[Poly], r: &RingSpec) -> Value {
    json!(ps.iter().map(|p| p.to_string_in(r)).collect::<Vec<_>>())
}

fn pmat(m: &PolyMatrix, r: &RingSpec) -> Value {
    json!(m.to_strings(r))
}

fn fmat(m: &FracMatrix, r: &RingSpec) -> Value {
    json!(m.to_strings(r))
}

fn ring_json(r: &RingSpec) -> Value {
    json!({"vars": r.names, "center": r.names[..r.c], "field": format!("{:?}", r.field)})
}

fn with_job(rep: &mut Report, job: &JobSpec) {
    rep.warnings.extend(job.warnings.iter().cloned());
    rep.input("ring", ring_json(&job.ring));
}

fn resolve_ideal(rep: &mut Report, job: &JobSpec, name: &str, ctx: &Ctx) -> Result<FreeResolution> {
    let gens = job.ideal(name)?;
    rep.input("ideal", json!({"name": name, "generators": polys(gens, &job.ring)}));
    free_resolution_with(gens, &job.ring, &mut ctx.budget())
}

fn steps_json(res: &FreeResolution) -> Value {
    let r = &res.ring;
    json!(res
        .steps
        .iter()
        .map(|s| json!({"matrix": pmat(&s.matrix, r), "colMarks": s.col_marks, "rowMarks": s.row_marks}))
        .collect::<Vec<_>>())
}

fn oracle_table(rep: &mut Report, res: &FreeResolution, cap: u32) {
    let r = &res.ring;
    if r.c != r.n() {
        rep.warnings.push("graded rank oracle needs all variables in the center; skipped".into());
        return;
    }
    let mut shifts = vec![vec![0]];
    shifts.extend(res.marks());
    let rows: Vec<Value> = (0..=cap)
        .map(|d| {
            let o = hilbert_function(&res.gens, r, d) as i64;
            let m = hilbert_from_shifts(&shifts, r.n(), d);
            json!({"degree": d, "oracle": o, "fromMarks": m, "agree": o == m})
        })
        .collect();
    let agree = rows.iter().all(|v| v["agree"] == json!(true));
    rep.result("oracle", json!(rows));
    rep.attest(format!("graded ranks agree with the oracle up to degree {cap}"), agree);
}

fn family_json(fam: &HomotopyFamily) -> Value {
    let r = &fam.res.ring;
    json!(fam
        .support()
        .iter()
        .map(|(v, j)| {
            let t = j + 2 * v.iter().sum::<u32>() as i64 - 1;
            json!({"index": v, "source": j, "target": t, "matrix": fmat(&fam.get(v, *j), r)})
        })
        .collect::<Vec<_>>())
}

fn certificate_json(c: &PeriodicityCertificate) -> Value {
    match c {
        PeriodicityCertificate::Feasible { a, b } => json!({"feasible": true, "a": a, "b": b}),
        PeriodicityCertificate::Infeasible { cycle } => json!({
            "feasible": false,
            "cycle": cycle.iter().map(|e| e.describe()).collect::<Vec<_>>(),
            "weight": cycle.iter().map(|e| e.weight).sum::<i64>(),
        }),
    }
}

fn vals_json(m: &[Vec<Val>]) -> Value {
    json!(m.iter().map(|r| r.iter().map(|v| json!(v)).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn pair_of(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::Domain(format!("expected two integers 'p,q', got '{s}'"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn range_of(s: &str) -> Result<std::ops::RangeInclusive<u32>> {
    let bad = || Error::Domain(format!("expected a range 'lo..hi', got '{s}'"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    Ok(a.trim().parse().map_err(|_| bad())?..=b.trim().parse().map_err(|_| bad())?)
}

fn periodicity_one(rep: &mut Report, label: &str, inst: &PeriodicityInstance) -> PeriodicityCertificate {
    let cert = check_asymptotic_periodicity(inst);
    let what = if cert.is_feasible() {
        "windows satisfy every inequality"
    } else {
        "witness cycle has negative recomputed weight"
    };
    rep.attest(format!("{label}: {what}"), cert.verify(inst));
    cert
}

fn check_pair(rep: &mut Report, label: &str, a: &PolyMatrix, b: &PolyMatrix, w: &Poly, r: &RingSpec) {
    let ok = a.rows == a.cols
        && a.rows == b.rows
        && b.rows == b.cols
        && a.mul(b, r) == PolyMatrix::identity_scaled(a.rows, w, r)
        && b.mul(a, r) == PolyMatrix::identity_scaled(a.rows, w, r);
    rep.attest(format!("{label}: AB = BA = w id"), ok);
}

fn periodicity(rep: &mut Report, args: &PeriodicityArgs) -> Result<()> {
    let job = args.job.as_ref().map(load).transpose()?;
    let ring = match &job {
        Some(j) => {
            with_job(rep, j);
            j.ring.clone()
        }
        None => RingSpec::q(&["x", "y"]),
    };
    let mut pairs: Vec<(String, PolyMatrix, PolyMatrix, Poly)> = Vec::new();
    if let Some(a) = &args.a {
        let j = job.as_ref().ok_or_else(|| Error::Domain("--a needs a job file".into()))?;
        let (b, w) = (args.b.as_deref().unwrap_or(""), args.w.as_deref().unwrap_or(""));
        pairs.push((format!("{a},{b}"), j.matrix(a)?.clone(), j.matrix(b)?.clone(), j.element(w)?.clone()));
    }
    if let Some(s) = &args.an {
        let (a, b) = pair_of(s)?;
        let (a, b) = (a as u32, b as u32);
        let (am, bm, w) = if args.perturbed { an_perturbed_pair(a, b, &ring)? } else { an_pair(a, b, &ring)? };
        pairs.push((format!("x^{a}+y^{b}"), am, bm, w));
    }
    if let Some(g) = &args.grid {
        let (ra, rb) = g.split_once(',').ok_or_else(|| Error::Domain("grid is 'a1..a2,b1..b2'".into()))?;
        for a in range_of(ra)? {
            for b in range_of(rb)? {
                let (am, bm, w) = an_pair(a, b, &ring)?;
                pairs.push((format!("x^{a}+y^{b}"), am, bm, w));
                let (am, bm, w) = an_perturbed_pair(a, b, &ring)?;
                pairs.push((format!("x^{a}+y^{b} perturbed"), am, bm, w));
            }
        }
    }
    let mut out = Vec::new();
    let mut last: Option<(PeriodicityInstance, PeriodicityCertificate, PolyMatrix, PolyMatrix, Poly)> = None;
    for (label, a, b, w) in &pairs {
        check_pair(rep, label, a, b, w, &ring);
        let inst = PeriodicityInstance::from_pair(a, b, w, &ring)?;
        let cert = periodicity_one(rep, label, &inst);
        out.push(json!({
            "label": label,
            "a": pmat(a, &ring),
            "b": pmat(b, &ring),
            "w": w.to_string_in(&ring),
            "aVal": vals_json(&inst.a_val),
            "bVal": vals_json(&inst.b_val),
            "d": inst.d,
            "certificate": certificate_json(&cert),
        }));
        last = Some((inst, cert, a.clone(), b.clone(), w.clone()));
    }
    if let Some(path) = &args.valuations {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Domain(format!("{}: {e}", path.display())))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
            line: e.line(),
            col: e.column(),
            msg: e.to_string(),
        })?;
        let grab = |k: &str| -> Result<Vec<Vec<Val>>> {
            let rows = v[k].as_array().ok_or_else(|| Error::Domain(format!("missing matrix '{k}'")))?;
            rows.iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| Error::Domain(format!("'{k}' rows must be arrays")))?
                        .iter()
                        .map(|x| match x {
                            Value::Null => Ok(None),
                            x => x.as_i64().map(Some).ok_or_else(|| Error::Domain(format!("bad entry {x} in '{k}'"))),
                        })
                        .collect()
                })
                .collect()
        };
        let d = v["d"].as_i64().ok_or_else(|| Error::Domain("missing integer 'd'".into()))?;
        let inst = PeriodicityInstance::new(grab("a")?, grab("b")?, d)?;
        let label = path.file_name().map_or("valuations".into(), |s| s.to_string_lossy().into_owned());
        let cert = periodicity_one(rep, &label, &inst);
        out.push(json!({"label": label, "aVal": vals_json(&inst.a_val), "bVal": vals_json(&inst.b_val), "d": d, "certificate": certificate_json(&cert)}));
    }
    if out.is_empty() {
        return Err(Error::Domain("give --a/--b/--w, --an, --grid or --valuations".into()));
    }
    rep.result("instances", json!(out));
    if args.double.is_some() || args.single.is_some() {
        let (inst, cert, a, b, w) = last.ok_or_else(|| Error::Domain("transforms need a matrix pair".into()))?;
        if let Some(s) = &args.double {
            let t = knorrer_double(&inst, &cert, pair_of(s)?)?;
            rep.attest("doubled windows satisfy every inequality", t.certificate.verify(&t.instance));
            rep.attest("doubling shift interval is nonempty", t.interval.0 <= t.interval.1);
            rep.result(
                "double",
                json!({"shapeA": t.shape.a, "shapeB": t.shape.b, "d": t.d_new, "interval": [t.interval.0, t.interval.1], "k": t.k, "certificate": certificate_json(&t.certificate)}),
            );
        }
        if let Some(u) = args.single {
            let (m, neg) = antisymmetric_embedding(&a, &b, &ring);
            check_pair(rep, "antisymmetric embedding", &m, &neg, &w, &ring);
            let mi = PeriodicityInstance::from_pair(&m, &neg, &w, &ring)?;
            let mc = check_asymptotic_periodicity(&mi);
            let t = knorrer_single(&m, &neg, &mi, &mc, u)?;
            rep.attest("single transform windows satisfy every inequality", t.certificate.verify(&t.instance));
            rep.attest("single transform shift interval is nonempty", t.interval.0 <= t.interval.1);
            rep.result(
                "single",
                json!({"d": t.d_new, "interval": [t.interval.0, t.interval.1], "certificate": certificate_json(&t.certificate)}),
            );
        }
    }
    Ok(())
}

pub fn dispatch(cmd: &Command, ctx: &Ctx) -> Result<Report> {
    match cmd {
        Command::Run { .. } => unreachable!("run is expanded before dispatch"),
        Command::Divide { job, f, by } => {
            let mut rep = Report::new("divide");
            let job = load(job)?;
            with_job(&mut rep, &job);
            let r = &job.ring;
            let (fp, gs) = (job.element(f)?, job.ideal(by)?);
            rep.input("f", json!(fp.to_string_in(r)));
            rep.input("divisors", polys(gs, r));
            let d = mora_divide_with(fp, gs, r, &mut ctx.budget())?;
            rep.result("unit", json!(d.unit.to_string_in(r)));
            rep.result("quotients", polys(&d.quotients, r));
            rep.result("remainder", json!(d.remainder.to_string_in(r)));
            rep.attest("unit has nonzero constant term", !d.unit.constant_term(r).is_zero());
            rep.attest("unit*f = sum q_i g_i + r", d.identity_holds(fp, gs, r));
            rep.attest("initial term of r is not divisible", d.remainder_initial_reduced(gs));
            rep.attest("no term of r is divisible", d.fully_reduced && d.remainder_reduced(gs));
            Ok(rep)
        }
        Command::Std(a) => {
            let mut rep = Report::new("std");
            let job = load(&a.job)?;
            with_job(&mut rep, &job);
            let r = &job.ring;
            let gens = job.ideal(&a.ideal)?;
            rep.input("ideal", json!({"name": a.ideal, "generators": polys(gens, r)}));
            let mut budget = ctx.budget();
            let b = standard_basis_with(gens, r, &mut budget)?;
            rep.result("basis", polys(&b.elements, r));
            rep.result("chainSkipped", json!(b.chain_skipped));
            rep.attest("every element is a recorded combination of the generators", b.combinations_hold(gens));
            rep.attest("every S-pair reduces to zero", s_pairs_reduce_to_zero(&b.as_vec(), &mut budget)?);
            rep.attest("basis is reduced", b.reduced);
            Ok(rep)
        }
        Command::Resolve { ideal, minimize: min } => {
            let mut rep = Report::new("resolve");
            let job = load(&ideal.job)?;
            with_job(&mut rep, &job);
            let mut res = resolve_ideal(&mut rep, &job, &ideal.ideal, ctx)?;
            if *min {
                res = minimize(&res);
                rep.input("minimize", json!(true));
            }
            rep.result("ranks", json!(res.ranks));
            rep.result("marks", json!(res.marks()));
            rep.result("steps", steps_json(&res));
            rep.attest("F_i F_{i+1} = 0", res.composites_vanish());
            if !*min {
                rep.attest("every entry satisfies the mark inequality", res.marks_compatible());
            }
            if ctx.oracle {
                oracle_table(&mut rep, &res, 10);
            }
            Ok(rep)
        }
        Command::Leading(a) => {
            let mut rep = Report::new("leading");
            let job = load(&a.job)?;
            with_job(&mut rep, &job);
            let r = job.ring.clone();
            let res = resolve_ideal(&mut rep, &job, &a.ideal, ctx)?;
            let lead = leading_complex(&res);
            let b = standard_basis_with(&res.gens, &r, &mut ctx.budget())?;
            let forms = b
                .elements
                .iter()
                .map(|e| leading_form_p(e, &r).map(|x| x.0))
                .collect::<Result<Vec<_>>>()?;
            let lres = free_resolution_with(&forms, &r, &mut ctx.budget())?;
            let vanish = lead.windows(2).all(|w| w[0].matrix.mul(&w[1].matrix, &r).is_zero());
            rep.result("leadingForms", polys(&forms, &r));
            rep.result(
                "leading",
                json!(lead.iter().map(|s| json!({"matrix": pmat(&s.matrix, &r), "colMarks": s.col_marks})).collect::<Vec<_>>()),
            );
            rep.result("ranks", json!(res.ranks));
            rep.attest("L(F_i) L(F_{i+1}) = 0", vanish);
            rep.attest("ranks equal those of the leading-form resolution", lres.ranks == res.ranks);
            rep.attest(
                "marks equal those of the leading-form resolution",
                lres.marks() == lead.iter().map(|s| s.col_marks.clone()).collect::<Vec<_>>(),
            );
            if ctx.oracle {
                oracle_table(&mut rep, &lres, 10);
            }
            Ok(rep)
        }
        Command::TwistCheck { ideal, r, cap } => {
            let mut rep = Report::new("twist-check");
            let job = load(&ideal.job)?;
            with_job(&mut rep, &job);
            let res = resolve_ideal(&mut rep, &job, &ideal.ideal, ctx)?;
            rep.input("r", json!(r));
            rep.input("cap", json!(cap));
            let t = twist_exactness_check(&res, *r, *cap)?;
            let mut pos = Vec::new();
            for p in &t.positions {
                let ok = p.probes.iter().filter(|q| q.success).count();
                pos.push(json!({
                    "level": p.level,
                    "probes": p.probes.len(),
                    "lifted": ok,
                    "graded": p.graded.iter().map(|(d, k, i)| json!({"degree": d, "kernel": k, "image": i})).collect::<Vec<_>>(),
                }));
                rep.attest(format!("level {}: every kernel probe lifts", p.level), p.lifts_ok());
                rep.attest(format!("level {}: graded kernel equals image", p.level), p.graded_ok());
            }
            rep.result("positions", json!(pos));
            Ok(rep)
        }
        Command::Matfac { ideal, w, kprime } => {
            let mut rep = Report::new("matfac");
            let job = load(&ideal.job)?;
            with_job(&mut rep, &job);
            let r = job.ring.clone();
            let res = resolve_ideal(&mut rep, &job, &ideal.ideal, ctx)?;
            let wp = job.element(w)?;
            rep.input("w", json!(wp.to_string_in(&r)));
            let mut budget = ctx.budget();
            let fam = higher_homotopies(homotopy_chain(&res, wp, &mut budget)?, &mut budget)?;
            let mf = assemble_block_mf(&fam, *kprime)?;
            rep.result("ranks", json!(res.ranks));
            rep.result("homotopies", family_json(&fam));
            rep.result("A", fmat(&mf.a, &r));
            rep.result("B", fmat(&mf.b, &r));
            rep.result("aRowMarks", json!(mf.a_row_marks));
            rep.result("aColMarks", json!(mf.a_col_marks));
            rep.attest("K_iF_i + F_{i+1}K_{i+1} = w id", fam.residuals_vanish_upto(1));
            rep.attest("higher homotopy identities hold one weight past the support", fam.residuals_vanish());
            rep.attest("AB = BA = w id", mf.identity_holds(&r));
            rep.attest("leading family satisfies the identities with L(w)", leading_homotopies(&fam).residuals_vanish());
            Ok(rep)
        }
        Command::StdResS { ideal, w, r: twist, length, cap } => {
            let mut rep = Report::new("std-res-s");
            let job = load(&ideal.job)?;
            with_job(&mut rep, &job);
            let r = job.ring.clone();
            let res = resolve_ideal(&mut rep, &job, &ideal.ideal, ctx)?;
            let wp = job.element(w)?;
            rep.input("w", json!(wp.to_string_in(&r)));
            rep.input("r", json!(twist));
            rep.input("length", json!(length));
            let mut budget = ctx.budget();
            let fam = higher_homotopies(homotopy_chain(&res, wp, &mut budget)?, &mut budget)?;
            let s = standard_resolution_s(&fam, *length, *twist)?;
            let terms: Vec<Value> = s
                .twists
                .iter()
                .zip(&s.total.terms)
                .map(|(tw, comps)| {
                    json!({
                        "rank": comps.iter().map(|c| c.rank).sum::<usize>(),
                        "twists": tw.iter().map(|(j, m)| json!({"twist": j, "multiplicity": m})).collect::<Vec<_>>(),
                    })
                })
                .collect();
            rep.result("terms", json!(terms));
            rep.result("tailStart", json!(s.tail_start));
            rep.result("maps", json!(s.total.maps.iter().map(|m| fmat(m, &r)).collect::<Vec<_>>()));
            rep.attest("tail alternates A, B with marks shifted by ord_P(w)", s.tail_matches);
            rep.attest("consecutive composites vanish modulo w", s.total.composites_vanish_mod(&r)?);
            if r.c == r.n() {
                let ex = s.total.graded_exactness(&r, *cap)?;
                rep.attest(format!("graded exactness up to degree {cap}"), ex.iter().all(|(_, _, k, i)| k == i));
            }
            Ok(rep)
        }
        Command::CiMatfac { ideal, w1, w2, length, depth_cap, cap } => {
            let mut rep = Report::new("ci-matfac");
            let job = load(&ideal.job)?;
            with_job(&mut rep, &job);
            let r = job.ring.clone();
            let res = resolve_ideal(&mut rep, &job, &ideal.ideal, ctx)?;
            let (p1, p2) = (job.element(w1)?, job.element(w2)?);
            rep.input("w1", json!(p1.to_string_in(&r)));
            rep.input("w2", json!(p2.to_string_in(&r)));
            rep.input("length", json!(length));
            let fam = ci_homotopies(&res, p1, p2, *depth_cap, &mut ctx.budget())?;
            let t = ci_totalization(&fam, *length)?;
            rep.result("K0", fmat(&fam.k(0), &r));
            rep.result("L0", fmat(&fam.l(0), &r));
            rep.result("G0", fmat(&fam.g(0), &r));
            rep.result("homotopies", family_json(&fam));
            rep.result("maps", json!(t.maps.iter().map(|m| fmat(m, &r)).collect::<Vec<_>>()));
            rep.attest("stored identities hold exactly", fam.residuals_vanish_upto(fam.depth));
            if depth_cap.is_none() {
                rep.attest("identities hold one weight past the support", fam.residuals_vanish());
                rep.attest("consecutive composites vanish modulo (w1, w2)", t.composites_vanish_mod(&r)?);
                if r.c == r.n() {
                    let ex = t.graded_exactness(&r, *cap)?;
                    rep.attest(format!("graded exactness up to degree {cap}"), ex.iter().all(|(_, _, k, i)| k == i));
                }
            }
            Ok(rep)
        }
        Command::Periodicity(args) => {
            let mut rep = Report::new("periodicity");
            periodicity(&mut rep, args)?;
            Ok(rep)
        }
        Command::Sod { n, c, d, table } => {
            let mut rep = Report::new("sod");
            rep.input("n", json!(n));
            rep.input("c", json!(c));
            rep.input("d", json!(d));
            let s = sod_report(*n, *c, *d)?;
            rep.result("gorensteinParameter", json!(s.gorenstein_parameter));
            rep.result("pieces", json!(s.pieces));
            rep.result("pieceLabels", json!(s.piece_labels()));
            rep.result("residueLabel", json!(s.residue_label));
            rep.result("applicable", json!(s.applicable));
            let want = (*c as i64 - *d as i64 - 1).max(0) as usize;
            rep.attest("piece count is max(c-d-1, 0)", s.pieces.len() == want);
            if *table {
                let mut t = format!("n={n} c={c} d={d}  c-d={}\n", s.gorenstein_parameter);
                if s.applicable {
                    for l in s.piece_labels() {
                        t.push_str(&format!("  {l}\n"));
                    }
                    t.push_str(&format!("  {}\n", s.residue_label));
                } else {
                    t.push_str("  not applicable (c - d <= 0)\n");
                }
                rep.table = Some(t);
            }
            Ok(rep)
        }
        Command::Proj { ideal, table } => {
            let mut rep = Report::new("proj");
            let job = load(&ideal.job)?;
            with_job(&mut rep, &job);
            let res = resolve_ideal(&mut rep, &job, &ideal.ideal, ctx)?;
            let p = proj_complex(&res)?;
            let positions: Vec<Value> = p
                .positions
                .iter()
                .map(|ps| json!(ps.iter().map(|(t, m)| json!({"twist": t, "multiplicity": m})).collect::<Vec<_>>()))
                .collect();
            rep.result("head", json!(p.head));
            rep.result("positions", json!(positions));
            let same = (0..p.positions.len()).all(|i| {
                let mut m = p.marks[i].clone();
                m.sort_unstable();
                p.twists(i) == m
            });
            rep.attest("twists at each position are the marks", same);
            if *table {
                let mut t = format!("0: O({})\n", p.head);
                for (i, ps) in p.positions.iter().enumerate() {
                    let parts: Vec<String> = ps.iter().map(|(tw, m)| format!("O({tw}E)^{m}")).collect();
                    t.push_str(&format!("{}: {}\n", i + 1, parts.join(" + ")));
                }
                rep.table = Some(t);
            }
            Ok(rep)
        }
    }
}

/// Expands a job file's `run` line into command-line words.
pub fn run_words(job: &PathBuf) -> Result<Vec<String>> {
    let spec = load(job)?;
    let run = spec
        .run
        .ok_or_else(|| Error::Domain(format!("{} has no run line", job.display())))?;
    let mut words = vec!["locres".to_string(), run.command.clone()];
    if run.command != "sod" {
        words.push(job.display().to_string());
    }
    for (k, v) in run.options {
        let flag = format!("--{k}");
        match v.as_str() {
            "true" => words.push(flag),
            "false" => {}
            _ => {
                words.push(flag);
                words.push(v);
            }
        }
    }
    Ok(words)
}
