//! Multiplier bimonoid data `(A, t1, t2, e)`, the derived comultiplication,
//! both axiom lists, and the verdict comparing them.

use std::fmt;

use crate::error::{Error, Result};
use crate::graded::Shape;
use crate::linmap::LinMap;
use crate::mcat::{MMorphism, Source};
use crate::monoidal::tensor_semigroup;
use crate::report::{Outcome, Report};
use crate::semigroup::Semigroup;

pub const T1: u8 = 1;
pub const T2: u8 = 2;
pub const E: u8 = 4;

/// Powers of one carrier with its multiplication and braidings.
#[derive(Clone, Debug)]
pub struct Kit {
    pub a: Shape,
    pub m: LinMap,
    pub c: LinMap,
    pub ci: LinMap,
}

impl Kit {
    pub fn new(base: &Semigroup) -> Kit {
        let a = base.carrier().clone();
        Kit { m: base.mult().clone(), c: LinMap::braiding(&a, &a), ci: LinMap::braiding_inv(&a, &a), a }
    }

    pub fn p(&self, n: usize) -> Shape {
        self.a.pow(n)
    }

    /// `1^l ⊗ f ⊗ 1^r`.
    pub fn w(&self, f: &LinMap, l: usize, r: usize) -> LinMap {
        f.whisker(&self.p(l), &self.p(r))
    }

    pub fn id(&self, n: usize) -> LinMap {
        LinMap::identity(&self.p(n))
    }
}

fn compare(l: &LinMap, r: &LinMap) -> Result<Outcome> {
    let w = LinMap::first_difference(l, r)?;
    Ok(Outcome::from_witness(w.map(|t| l.dom().format_tuple(&t))))
}

/// `d1 = (m⊗1)(1⊗c)(t1⊗1)(1⊗c⁻¹)` and `d2 = (1⊗m)(c⊗1)(1⊗t2)(c⁻¹⊗1)`.
pub fn derive_comultiplication(k: &Kit, t1: &LinMap, t2: &LinMap) -> Result<(LinMap, LinMap)> {
    let a2 = k.p(2);
    for t in [t1, t2] {
        if t.dom() != &a2 || t.cod() != &a2 {
            return Err(Error::ShapeMismatch(format!("t must map {a2} -> {a2}")));
        }
    }
    let d1 = LinMap::chain(&[&k.w(&k.ci, 1, 0), &k.w(t1, 0, 1), &k.w(&k.c, 1, 0), &k.w(&k.m, 0, 1)])?;
    let d2 = LinMap::chain(&[&k.w(&k.ci, 0, 1), &k.w(t2, 1, 0), &k.w(&k.c, 0, 1), &k.w(&k.m, 1, 0)])?;
    Ok((d1, d2))
}

#[derive(Clone, Debug)]
pub struct BimonoidData {
    pub name: String,
    pub base: Semigroup,
    /// `A⊗A` with the product multiplication.
    pub square: Semigroup,
    pub t1: LinMap,
    pub t2: LinMap,
    pub e: LinMap,
}

impl BimonoidData {
    pub fn new(name: impl Into<String>, base: Semigroup, t1: LinMap, t2: LinMap, e: LinMap) -> Result<BimonoidData> {
        base.require_object()?;
        let square = tensor_semigroup(&base, &base)?;
        BimonoidData { name: name.into(), base, square, t1: t1.clone(), t2: t2.clone(), e: e.clone() }.with_maps(t1, t2, e)
    }

    /// Same base, new structure maps.
    pub fn with_maps(&self, t1: LinMap, t2: LinMap, e: LinMap) -> Result<BimonoidData> {
        let a = self.base.carrier();
        let a2 = a.tensor(a);
        for t in [&t1, &t2] {
            if t.dom() != &a2 || t.cod() != &a2 {
                return Err(Error::ShapeMismatch(format!("t must map {a2} -> {a2}")));
            }
        }
        if e.dom() != a || e.cod().arity() != 0 {
            return Err(Error::ShapeMismatch(format!("e must map {a} -> I")));
        }
        Ok(BimonoidData { name: self.name.clone(), base: self.base.clone(), square: self.square.clone(), t1, t2, e })
    }

    pub fn kit(&self) -> Kit {
        Kit::new(&self.base)
    }

    pub fn comultiplication(&self) -> Result<(LinMap, LinMap)> {
        derive_comultiplication(&self.kit(), &self.t1, &self.t2)
    }

    pub fn derived_comonoid(&self) -> Result<ComonoidData> {
        let (d1, d2) = self.comultiplication()?;
        Ok(ComonoidData { object: self.base.clone(), square: self.square.clone(), d1, d2, e: self.e.clone() })
    }
}

/// A candidate comonoid: `d = (d1, d2): C ↛ C⊗C` and counit `e: C ↛ I`.
#[derive(Clone, Debug)]
pub struct ComonoidData {
    pub object: Semigroup,
    pub square: Semigroup,
    pub d1: LinMap,
    pub d2: LinMap,
    pub e: LinMap,
}

impl ComonoidData {
    /// The comultiplication as a morphism, with every flag computed.
    pub fn comultiplication(&self) -> Result<MMorphism> {
        MMorphism::new(Source::Semigroup(self.object.clone()), self.square.clone(), self.d1.clone(), self.d2.clone())
    }

    pub fn counit(&self) -> Result<MMorphism> {
        MMorphism::to_unit(&self.object, &self.e)
    }
}

/// Which structure maps changed relative to an already evaluated base.
#[derive(Clone, Copy, Debug)]
pub struct Reuse<'a> {
    pub base: &'a Evaluation,
    pub changed: u8,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Options<'a> {
    /// Stop the expensive comonoid checks at the first failure.
    pub short_circuit: bool,
    pub reuse: Option<Reuse<'a>>,
}

struct Ledger<'a> {
    report: Report,
    reuse: Option<Reuse<'a>>,
    side: Side,
}

#[derive(Clone, Copy)]
enum Side {
    Bimonoid,
    Comonoid,
}

impl Ledger<'_> {
    fn run(&mut self, key: &str, deps: u8, f: impl FnOnce() -> Result<Outcome>) -> Result<Outcome> {
        if let Some(r) = self.reuse {
            if r.changed & deps == 0 {
                let old = match self.side {
                    Side::Bimonoid => &r.base.bimonoid,
                    Side::Comonoid => &r.base.comonoid,
                };
                if let Some(o) = old.get(key) {
                    if *o != Outcome::Skip {
                        self.report.push(key, o.clone());
                        return Ok(o.clone());
                    }
                }
            }
        }
        let o = f()?;
        self.report.push(key, o.clone());
        Ok(o)
    }
}

/// Keys of the equations whose conjunction defines a multiplier bimonoid.
pub const BIMONOID_DEFINING: [&str; 8] =
    ["EQ(5.1)", "EQ(5.7)", "EQ(5.9)", "EQ(5.13)", "EQ(5.14)", "Q(e)", "Q(d1)", "Q(d2)"];

pub fn check_bimonoid_axioms(data: &BimonoidData) -> Result<Report> {
    bimonoid_report(data, None)
}

fn bimonoid_report(data: &BimonoidData, reuse: Option<Reuse<'_>>) -> Result<Report> {
    let k = data.kit();
    let (t1, t2, e) = (&data.t1, &data.t2, &data.e);
    let (d1, d2) = derive_comultiplication(&k, t1, t2)?;
    let m = &k.m;
    let id1 = k.id(1);
    let e_l = LinMap::tensor(e, &id1)?;
    let e_r = LinMap::tensor(&id1, e)?;
    let mut led = Ledger { report: Report::new(), reuse, side: Side::Bimonoid };
    led.run("EQ(5.1)", E, || compare(&LinMap::compose(e, m)?, &LinMap::tensor(e, e)?))?;
    led.run("EQ(5.2)", T1 | T2, || {
        compare(&LinMap::chain(&[&k.w(t1, 1, 0), &k.w(m, 0, 1)])?, &LinMap::chain(&[&k.w(t2, 0, 1), &k.w(m, 1, 0)])?)
    })?;
    led.run("EQ(5.3)", T1, || {
        compare(&LinMap::compose(&d1, &k.w(&d1, 1, 0))?, &LinMap::compose(&d1, &k.w(m, 0, 2))?)
    })?;
    led.run("EQ(5.4)", T1, || {
        let l = LinMap::chain(&[&k.w(t1, 1, 0), &k.w(&k.c, 0, 1), &k.w(t1, 1, 0), &k.w(&k.ci, 0, 1), &k.w(m, 0, 1)])?;
        compare(&l, &LinMap::compose(t1, &k.w(m, 0, 1))?)
    })?;
    led.run("EQ(5.5)", T1, || {
        compare(&LinMap::compose(t1, &k.w(m, 1, 0))?, &LinMap::chain(&[&k.w(t1, 0, 1), &k.w(m, 1, 0)])?)
    })?;
    led.run("EQ(5.6)", T1, || {
        compare(&LinMap::compose(&d1, &k.w(m, 2, 0))?, &LinMap::chain(&[&k.w(&d1, 0, 1), &k.w(m, 1, 0)])?)
    })?;
    led.run("EQ(5.7)", T1 | E, || compare(&LinMap::compose(&e_l, t1)?, m))?;
    led.run("EQ(5.8)", T2 | E, || compare(&LinMap::compose(&e_l, t2)?, &e_l))?;
    led.run("EQ(5.9)", T2 | E, || compare(&LinMap::compose(&e_r, t2)?, m))?;
    led.run("EQ(5.10)", T1 | E, || compare(&LinMap::compose(&e_r, t1)?, &e_r))?;
    led.run("EQ(5.13)", T1, || {
        let l = LinMap::chain(&[&k.w(t1, 1, 0), &k.w(&k.ci, 1, 0), &k.w(t1, 0, 1), &k.w(&k.c, 1, 0), &k.w(t1, 0, 1)])?;
        compare(&l, &LinMap::chain(&[&k.w(t1, 0, 1), &k.w(t1, 1, 0)])?)
    })?;
    led.run("EQ(5.14)", T1 | T2, || {
        compare(&LinMap::chain(&[&k.w(t1, 1, 0), &k.w(t2, 0, 1)])?, &LinMap::chain(&[&k.w(t2, 0, 1), &k.w(t1, 1, 0)])?)
    })?;
    led.run("EQ(5.15)", T1, || {
        let l = LinMap::chain(&[&k.w(&d1, 1, 0), &k.w(&k.c, 0, 1), &k.w(t1, 1, 0), &k.w(&k.ci, 0, 1), &k.w(t1, 0, 1)])?;
        compare(&l, &LinMap::chain(&[&k.w(t1, 0, 2), &k.w(&d1, 1, 0)])?)
    })?;
    led.run("Q(e)", E, || Ok(Outcome::from_bool(e.is_surjective())))?;
    led.run("Q(d1)", T1, || Ok(Outcome::from_bool(d1.is_surjective())))?;
    led.run("Q(d2)", T2, || Ok(Outcome::from_bool(d2.is_surjective())))?;
    Ok(led.report)
}

/// Result of the coassociativity analysis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coassociativity {
    pub outcome: Outcome,
    /// Section-solved right vertical of the first square equals the closed form.
    pub closed_form_agrees: Option<bool>,
}

struct Squares {
    top1: LinMap,
    bottom1: LinMap,
    top2: LinMap,
    bottom2: LinMap,
    closed: LinMap,
}

fn squares(k: &Kit, d1: &LinMap, t1: &LinMap) -> Result<Squares> {
    let id1 = k.id(1);
    let m = &k.m;
    let top1 = LinMap::chain(&[&k.w(&k.c, 2, 2), &k.w(&k.c, 3, 1), &LinMap::tensor_all(&[&id1, d1, m])?])?;
    let bottom1 = LinMap::chain(&[&k.w(d1, 0, 3), &k.w(&k.c, 1, 2), &k.w(&k.c, 2, 1), &LinMap::tensor(d1, m)?])?;
    let top2 = LinMap::chain(&[&k.w(&k.c, 2, 2), &LinMap::tensor_all(&[&id1, m, d1])?])?;
    let bottom2 = LinMap::chain(&[&k.w(d1, 0, 3), &k.w(&k.c, 1, 2), &LinMap::tensor(m, d1)?])?;
    let closed = LinMap::chain(&[
        &LinMap::tensor(&k.c, &k.ci)?,
        &k.w(t1, 1, 1),
        &LinMap::tensor(&k.ci, &k.c)?,
        &k.w(d1, 0, 1),
    ])?;
    Ok(Squares { top1, bottom1, top2, bottom2, closed })
}

/// `r` with `r∘top = bottom`, solved along a section of `top` and verified.
fn right_vertical(top: &LinMap, bottom: &LinMap) -> Result<Option<LinMap>> {
    let Some(s) = top.section() else { return Ok(None) };
    let r = LinMap::compose(bottom, &s)?;
    if LinMap::maps_equal(&LinMap::compose(&r, top)?, bottom)? {
        Ok(Some(r))
    } else {
        Ok(None)
    }
}

/// Section-solved right vertical of the first square, skipping its verification.
fn first_vertical_unchecked(sq: &Squares) -> Result<Option<LinMap>> {
    match sq.top1.section() {
        Some(s) => Ok(Some(LinMap::compose(&sq.bottom1, &s)?)),
        None => Ok(None),
    }
}

/// Coassociativity: the right verticals of both squares exist and agree.
/// With `t1` given, also compares against the closed form.
pub fn coassociativity(k: &Kit, d1: &LinMap, t1: Option<&LinMap>) -> Result<Coassociativity> {
    let t1 = t1.cloned().unwrap_or_else(|| LinMap::zero(&k.p(2), &k.p(2)));
    let sq = squares(k, d1, &t1)?;
    let v = right_vertical(&sq.top1, &sq.bottom1)?;
    let w = right_vertical(&sq.top2, &sq.bottom2)?;
    let outcome = match (&v, &w) {
        (Some(v), Some(w)) => compare(v, w)?,
        _ => Outcome::Fail(None),
    };
    let closed_form_agrees = match &v {
        Some(v) => Some(LinMap::maps_equal(v, &sq.closed)?),
        None => None,
    };
    Ok(Coassociativity { outcome, closed_form_agrees })
}

pub fn check_comonoid_in_m(c: &ComonoidData) -> Result<Report> {
    Ok(comonoid_report(c, None, Options::default())?.0)
}

fn comonoid_report(c: &ComonoidData, t1: Option<&LinMap>, opts: Options<'_>) -> Result<(Report, Option<bool>)> {
    let k = Kit::new(&c.object);
    let (d1, d2, e) = (&c.d1, &c.d2, &c.e);
    let m = &k.m;
    let id1 = k.id(1);
    let mut led = Ledger { report: Report::new(), reuse: opts.reuse, side: Side::Comonoid };
    let mut failed = false;
    let mut gate = |led: &mut Ledger, key: &str, deps: u8, cheap: bool, f: &dyn Fn() -> Result<Outcome>| -> Result<()> {
        if failed && opts.short_circuit && !cheap {
            led.report.push(key, Outcome::Skip);
            return Ok(());
        }
        let o = led.run(key, deps, f)?;
        if !o.is_pass() {
            failed = true;
        }
        Ok(())
    };
    gate(&mut led, "E-MORPHISM", E, true, &|| Ok(Outcome::from_bool(c.counit()?.flags().is_morphism())))?;
    gate(&mut led, "D-DENSE", T1 | T2, true, &|| Ok(Outcome::from_bool(d1.is_surjective() && d2.is_surjective())))?;
    gate(&mut led, "COUNIT-L1", T1 | E, true, &|| {
        let l = LinMap::compose(m, &LinMap::tensor_all(&[&id1, e, m])?)?;
        compare(&l, &LinMap::compose(&LinMap::tensor(e, m)?, &k.w(d1, 0, 1))?)
    })?;
    gate(&mut led, "COUNIT-L2", T2 | E, true, &|| {
        let l = LinMap::chain(&[&k.w(&k.c, 0, 2), &LinMap::tensor_all(&[e, m, &id1])?, m])?;
        compare(&l, &LinMap::chain(&[&k.w(d2, 1, 0), &k.w(&k.c, 0, 1), &LinMap::tensor(e, m)?])?)
    })?;
    gate(&mut led, "COUNIT-R1", T2 | E, true, &|| {
        let l = LinMap::compose(m, &LinMap::tensor_all(&[m, e, &id1])?)?;
        compare(&l, &LinMap::compose(&LinMap::tensor(m, e)?, &k.w(d2, 1, 0))?)
    })?;
    gate(&mut led, "COUNIT-R2", T1 | E, true, &|| {
        let l = LinMap::chain(&[&k.w(&k.c, 2, 0), &LinMap::tensor_all(&[&id1, m, e])?, m])?;
        compare(&l, &LinMap::chain(&[&k.w(d1, 0, 1), &k.w(&k.c, 1, 0), &LinMap::tensor(m, e)?])?)
    })?;
    gate(&mut led, "D-MULT-1", T1, false, &|| {
        compare(&LinMap::compose(d1, &k.w(m, 0, 2))?, &LinMap::compose(d1, &k.w(d1, 1, 0))?)
    })?;
    gate(&mut led, "D-MULT-2", T2, false, &|| {
        compare(&LinMap::compose(d2, &k.w(m, 2, 0))?, &LinMap::compose(d2, &k.w(d2, 0, 1))?)
    })?;
    gate(&mut led, "D-COMPAT", T1 | T2, false, &|| {
        let mb = c.square.mult();
        compare(&LinMap::compose(mb, &k.w(d1, 2, 0))?, &LinMap::compose(mb, &k.w(d2, 0, 2))?)
    })?;
    let mut closed = None;
    let coassoc_skipped = failed && opts.short_circuit;
    if coassoc_skipped {
        led.report.push("COASSOC", Outcome::Skip);
    } else {
        let reused = opts.reuse.filter(|r| r.changed & T1 == 0).and_then(|r| {
            r.base.comonoid.get("COASSOC").filter(|o| **o != Outcome::Skip).map(|o| (o.clone(), r.base.closed_form))
        });
        let (o, cf) = match reused {
            Some(x) => x,
            None => {
                let r = coassociativity(&k, d1, t1)?;
                (r.outcome, r.closed_form_agrees)
            }
        };
        closed = cf;
        led.report.push("COASSOC", o);
    }
    if !opts.short_circuit && led.report.passed("D-COMPAT").is_some() {
        // independent recomputation of every flag through the generic morphism code
        let d = c.comultiplication()?;
        let f = d.flags();
        let staged = (
            led.report.passed("D-COMPAT"),
            led.report.passed("D-MULT-1"),
            led.report.passed("D-MULT-2"),
            led.report.passed("D-DENSE"),
        );
        let generic = (Some(f.compatible()), f.multiplicative_left, f.multiplicative_right, Some(f.dense));
        if staged != generic {
            return Err(Error::CertificateFailure(format!("comultiplication flags disagree: {staged:?} vs {generic:?}")));
        }
    }
    Ok((led.report, closed))
}

/// Implication checked on one example: when `premise` holds, `conclusion` must.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Implication {
    pub name: &'static str,
    pub premise: bool,
    pub conclusion: Option<bool>,
}

impl Implication {
    pub fn violated(&self) -> bool {
        self.premise && self.conclusion == Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    AgreePass,
    AgreeFail { bimonoid: Vec<String>, comonoid: Vec<String> },
    Disagree { bimonoid_pass: bool, comonoid_pass: bool },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::AgreePass => write!(f, "AGREE_PASS"),
            Verdict::AgreeFail { .. } => write!(f, "AGREE_FAIL"),
            Verdict::Disagree { .. } => write!(f, "DISAGREE"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Evaluation {
    pub bimonoid: Report,
    pub comonoid: Report,
    pub closed_form: Option<bool>,
    pub implications: Vec<Implication>,
    pub verdict: Verdict,
}

impl Evaluation {
    pub fn violations(&self) -> Vec<&Implication> {
        self.implications.iter().filter(|i| i.violated()).collect()
    }

    pub fn to_report(&self) -> Report {
        let mut r = self.bimonoid.clone();
        r.lines.extend(self.comonoid.lines.iter().cloned());
        for i in &self.implications {
            let o = match (i.premise, i.conclusion) {
                (false, _) | (true, None) => Outcome::Skip,
                (true, Some(c)) => Outcome::from_bool(c),
            };
            r.push(format!("IMPLIES[{}]", i.name), o);
        }
        r
    }
}

pub fn check_equivalence(data: &BimonoidData) -> Result<Evaluation> {
    evaluate(data, Options::default())
}

pub fn evaluate(data: &BimonoidData, opts: Options<'_>) -> Result<Evaluation> {
    let bim = bimonoid_report(data, opts.reuse)?;
    let com_data = data.derived_comonoid()?;
    let (com, closed) = comonoid_report(&com_data, Some(&data.t1), opts)?;
    let p = |k: &str| bim.passed(k) == Some(true);
    let iff = |a: Option<bool>, b: Option<bool>| match (a, b) {
        (Some(x), Some(y)) => Some(x == y),
        _ => None,
    };
    let counit_premise = p("EQ(5.1)") && p("Q(e)");
    let mut implications = vec![
        Implication { name: "5.2=>5.5", premise: p("EQ(5.2)"), conclusion: bim.passed("EQ(5.5)") },
        Implication { name: "5.3+5.5=>5.4", premise: p("EQ(5.3)") && p("EQ(5.5)"), conclusion: bim.passed("EQ(5.4)") },
        Implication {
            name: "5.5=>(5.13<=>5.15)",
            premise: p("EQ(5.5)"),
            conclusion: iff(bim.passed("EQ(5.13)"), bim.passed("EQ(5.15)")),
        },
        Implication { name: "5.5<=>5.6", premise: true, conclusion: iff(bim.passed("EQ(5.5)"), bim.passed("EQ(5.6)")) },
        Implication { name: "5.2<=>D-COMPAT", premise: true, conclusion: iff(bim.passed("EQ(5.2)"), com.passed("D-COMPAT")) },
        Implication { name: "5.3<=>D-MULT-1", premise: true, conclusion: iff(bim.passed("EQ(5.3)"), com.passed("D-MULT-1")) },
    ];
    for (name, eq, diag) in [
        ("COUNIT-L1<=>5.7", "EQ(5.7)", "COUNIT-L1"),
        ("COUNIT-L2<=>5.8", "EQ(5.8)", "COUNIT-L2"),
        ("COUNIT-R1<=>5.9", "EQ(5.9)", "COUNIT-R1"),
        ("COUNIT-R2<=>5.10", "EQ(5.10)", "COUNIT-R2"),
    ] {
        implications.push(Implication { name, premise: counit_premise, conclusion: iff(bim.passed(eq), com.passed(diag)) });
    }
    let closed_premise = p("EQ(5.3)") && p("EQ(5.5)") && p("Q(d1)");
    let closed = match (closed, closed_premise) {
        (None, true) => {
            let reused = opts.reuse.filter(|r| r.changed & T1 == 0).and_then(|r| r.base.closed_form);
            match reused {
                Some(x) => Some(x),
                None => {
                    let k = data.kit();
                    let sq = squares(&k, &com_data.d1, &data.t1)?;
                    match first_vertical_unchecked(&sq)? {
                        Some(v) => Some(LinMap::maps_equal(&v, &sq.closed)?),
                        None => None,
                    }
                }
            }
        }
        (c, _) => c,
    };
    implications.push(Implication { name: "5.3+5.5=>5.11~5.12", premise: closed_premise, conclusion: closed });
    let bp = BIMONOID_DEFINING.iter().all(|k| p(k));
    let cp = com.all_pass();
    let verdict = match (bp, cp) {
        (true, true) => Verdict::AgreePass,
        (false, false) => Verdict::AgreeFail {
            bimonoid: bim.failures().into_iter().map(String::from).collect(),
            comonoid: com.failures().into_iter().map(String::from).collect(),
        },
        (b, c) => Verdict::Disagree { bimonoid_pass: b, comonoid_pass: c },
    };
    Ok(Evaluation { bimonoid: bim, comonoid: com, closed_form: closed, implications, verdict })
}
