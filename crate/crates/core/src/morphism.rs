//! Morphisms of comonoids in the category of semigroups and of multiplier
//! bimonoids, and the criterion for morphisms induced by algebra maps.

use smallvec::smallvec;

use crate::bimonoid::{BimonoidData, ComonoidData};
use crate::error::{Error, Result};
use crate::graded::{Shape, Tuple};
use crate::linmap::LinMap;
use crate::mcat::MMorphism;
use crate::report::{Outcome, Report};
use crate::scalar::{FieldSpec, Scalar};
use crate::zoo;

fn compare(l: &LinMap, r: &LinMap) -> Result<Outcome> {
    let w = LinMap::first_difference(l, r)?;
    Ok(Outcome::from_witness(w.map(|t| l.dom().format_tuple(&t))))
}

fn id(s: &Shape) -> LinMap {
    LinMap::identity(s)
}

fn t(maps: &[&LinMap]) -> Result<LinMap> {
    LinMap::tensor_all(maps)
}

fn chain(maps: &[&LinMap]) -> Result<LinMap> {
    LinMap::chain(maps)
}

fn require(f: &MMorphism, src: &Shape, dst: &Shape) -> Result<()> {
    f.require_morphism("morphism argument")?;
    if f.source().shape() != src || f.target().carrier() != dst {
        return Err(Error::ShapeMismatch(format!(
            "morphism {} -> {} does not match {} -> {}",
            f.source().shape(),
            f.target().carrier(),
            src,
            dst
        )));
    }
    Ok(())
}

/// Counit and `t`-intertwining squares, in both component orders.
pub fn mbm_morphism_report(f: &MMorphism, src: &BimonoidData, dst: &BimonoidData) -> Result<Report> {
    let (a, b) = (src.base.carrier(), dst.base.carrier());
    require(f, a, b)?;
    let (f1, f2) = (f.f1(), f.f2());
    let (ia, ib) = (id(a), id(b));
    let mut r = Report::new();
    r.push("MBM-COUNIT", compare(&LinMap::compose(&dst.e, f2)?, &LinMap::tensor(&dst.e, &src.e)?)?);
    let l = chain(&[&t(&[&ib, f2, &ia])?, &LinMap::tensor(&dst.t2, &ia)?, &LinMap::tensor(&ib, f2)?])?;
    let rr = chain(&[
        &LinMap::tensor(&dst.t2, &src.t1)?,
        &t(&[&ib, &LinMap::braiding(b, a), &ia])?,
        &LinMap::tensor(f2, f2)?,
    ])?;
    r.push("MBM-T", compare(&l, &rr)?);
    r.push("MBM-COUNIT-SYM", compare(&LinMap::compose(&dst.e, f1)?, &LinMap::tensor(&src.e, &dst.e)?)?);
    let l = chain(&[&t(&[&ia, f1, &ib])?, &LinMap::tensor(&ia, &dst.t1)?, &LinMap::tensor(f1, &ib)?])?;
    let rr = chain(&[
        &LinMap::tensor(&src.t2, &dst.t1)?,
        &t(&[&ia, &LinMap::braiding(a, b), &ib])?,
        &LinMap::tensor(f1, f1)?,
    ])?;
    r.push("MBM-T-SYM", compare(&l, &rr)?);
    Ok(r)
}

/// Counit and comultiplication squares, in both component orders.
pub fn comonoid_morphism_report(f: &MMorphism, src: &ComonoidData, dst: &ComonoidData) -> Result<Report> {
    let (c, d) = (src.object.carrier(), dst.object.carrier());
    require(f, c, d)?;
    let (f1, f2) = (f.f1(), f.f2());
    let (ic, id_) = (id(c), id(d));
    let mut r = Report::new();
    r.push("COMORPH-COUNIT", compare(&LinMap::compose(&dst.e, f1)?, &LinMap::tensor(&src.e, &dst.e)?)?);
    let l = chain(&[
        &t(&[&id_, &src.d1, &id_, &id_])?,
        &t(&[&id_, &ic, &LinMap::braiding(c, d), &id_])?,
        &t(&[&id_, f1, f1])?,
        &dst.d1,
    ])?;
    let rr = chain(&[&t(&[&id_, &ic, &ic, &LinMap::braiding(c, d), &id_])?, &t(&[f2, f1, f1])?, &dst.d1])?;
    r.push("COMORPH-D", compare(&l, &rr)?);
    r.push("COMORPH-COUNIT-SYM", compare(&LinMap::compose(&dst.e, f2)?, &LinMap::tensor(&dst.e, &src.e)?)?);
    let l = chain(&[
        &t(&[&id_, &id_, &src.d2, &id_])?,
        &t(&[&id_, &LinMap::braiding(d, c), &ic, &id_])?,
        &t(&[f2, f2, &id_])?,
        &dst.d2,
    ])?;
    let rr = chain(&[&t(&[&id_, &LinMap::braiding(d, c), &ic, &ic, &id_])?, &t(&[f2, f2, f1])?, &dst.d2])?;
    r.push("COMORPH-D-SYM", compare(&l, &rr)?);
    Ok(r)
}

/// Both component orders of a four-line report must reach the same verdict.
fn symmetric_verdict(r: &Report, what: &str) -> Result<bool> {
    let first = r.lines[0].outcome.is_pass() && r.lines[1].outcome.is_pass();
    let second = r.lines[2].outcome.is_pass() && r.lines[3].outcome.is_pass();
    if first != second {
        return Err(Error::CertificateFailure(format!("{what}: symmetric diagrams disagree\n{r}")));
    }
    Ok(first)
}

pub fn check_comonoid_morphism(f: &MMorphism, src: &ComonoidData, dst: &ComonoidData) -> Result<bool> {
    symmetric_verdict(&comonoid_morphism_report(f, src, dst)?, "comonoid morphism")
}

/// Morphism of multiplier bimonoids; also asserts agreement with the
/// comonoid-morphism condition on the derived comonoids.
pub fn check_mbm_morphism(f: &MMorphism, src: &BimonoidData, dst: &BimonoidData) -> Result<bool> {
    let holds = symmetric_verdict(&mbm_morphism_report(f, src, dst)?, "bimonoid morphism")?;
    let comonoid = check_comonoid_morphism(f, &src.derived_comonoid()?, &dst.derived_comonoid()?)?;
    if holds != comonoid {
        return Err(Error::CertificateFailure(format!(
            "bimonoid-morphism verdict {holds} but comonoid-morphism verdict {comonoid}"
        )));
    }
    Ok(holds)
}

/// `e'∘g = e` and `t1'(g⊗g) = (g⊗g)t1`.
pub fn sharp_criterion(g: &LinMap, src: &BimonoidData, dst: &BimonoidData) -> Result<bool> {
    let counit = LinMap::maps_equal(&LinMap::compose(&dst.e, g)?, &src.e)?;
    let gg = LinMap::tensor(g, g)?;
    let fusion = LinMap::maps_equal(&LinMap::compose(&dst.t1, &gg)?, &LinMap::compose(&gg, &src.t1)?)?;
    Ok(counit && fusion)
}

/// Evaluates the criterion and the full morphism check on `g^#`, asserting they agree.
pub fn check_sharp_morphism_criterion(g: &LinMap, src: &BimonoidData, dst: &BimonoidData) -> Result<bool> {
    let f = MMorphism::sharp(g, &src.base, &dst.base)?;
    let direct = sharp_criterion(g, src, dst)?;
    let full = check_mbm_morphism(&f, src, dst)?;
    if direct != full {
        return Err(Error::CertificateFailure(format!("criterion gives {direct}, morphism check gives {full}")));
    }
    Ok(full)
}

/// An algebra map between two examples, with the expected verdict.
#[derive(Clone, Debug)]
pub struct SharpCase {
    pub name: String,
    pub src: BimonoidData,
    pub dst: BimonoidData,
    pub map: LinMap,
    pub expected: bool,
}

fn relabel(src: &BimonoidData, dst: &BimonoidData, image: impl Fn(i64) -> Option<(i64, Scalar)>) -> Result<LinMap> {
    let (a, b) = (src.base.carrier(), dst.base.carrier());
    let entries = a.basis()?.into_iter().filter_map(|t| image(t[0]).map(|(o, c)| (smallvec![o], t, c)));
    LinMap::from_entries(a.clone(), b.clone(), entries.collect::<Vec<(Tuple, Tuple, Scalar)>>())
}

fn permutations(n: i64) -> Vec<Vec<i64>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Pullbacks along maps of groups, sign changes and graded rescalings.
pub fn sharp_cases() -> Result<Vec<SharpCase>> {
    let q = FieldSpec::Rationals;
    let k3 = zoo::function_algebra(3, q)?;
    let k2 = zoo::function_algebra(2, q)?;
    let g2 = zoo::group_algebra(2, q)?;
    let line = zoo::q_line(5, 4)?;
    let mut cases = Vec::new();
    for (data, n) in [(&k3, 3i64), (&k2, 2)] {
        for p in permutations(n) {
            // pullback along p: δ_x ↦ δ_{p⁻¹(x)}
            let inv: Vec<i64> = (0..n).map(|x| p.iter().position(|&y| y == x).expect("permutation") as i64).collect();
            let automorphism = (0..n).all(|x| (0..n).all(|y| p[((x - y).rem_euclid(n)) as usize] == (p[x as usize] - p[y as usize]).rem_euclid(n)));
            let map = relabel(data, data, |x| Some((inv[x as usize], Scalar::one(q))))?;
            cases.push(SharpCase { name: format!("{} pullback {:?}", data.name, p), src: data.clone(), dst: data.clone(), map, expected: automorphism });
        }
    }
    for sign in [1i64, -1] {
        let map = relabel(&g2, &g2, |x| Some((x, Scalar::from_int(q, if x == 1 { sign } else { 1 }))))?;
        cases.push(SharpCase { name: format!("{} g -> {}g", g2.name, sign), src: g2.clone(), dst: g2.clone(), map, expected: sign == 1 });
    }
    let f5 = line.base.carrier().field();
    for a in 1..5i64 {
        let s = Scalar::from_int(f5, a);
        let map = relabel(&line, &line, |i| Some((i, s.pow(i).expect("nonzero"))))?;
        cases.push(SharpCase { name: format!("{} x -> {a}x", line.name), src: line.clone(), dst: line.clone(), map, expected: true });
    }
    // pullback K(Z3) -> K(Z2) along an injection φ: Z2 -> Z3; no injection is a homomorphism
    for u in 0..3i64 {
        for v in 0..3i64 {
            if u == v {
                continue;
            }
            let phi = [u, v];
            let map = relabel(&k3, &k2, |x| phi.iter().position(|&y| y == x).map(|i| (i as i64, Scalar::one(q))))?;
            cases.push(SharpCase { name: format!("pullback K(Z3) -> K(Z2) along {phi:?}"), src: k3.clone(), dst: k2.clone(), map, expected: false });
        }
    }
    Ok(cases)
}
