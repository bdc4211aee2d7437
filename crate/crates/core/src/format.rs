//! Text formats for algebras, bimonoid data, comonoid data and morphisms.
//!
//! ```text
//! algebra kZ2 dim 2 field q grading trivial
//! basis 1 deg 0
//! basis g deg 0
//! mult 1 1 -> 1 : 1
//! t1 (g,g) -> (g,1) : 1
//! e g : 1
//! ```
//!
//! Morphism files start with `morphism source <ref> target <ref>` followed by
//! `f1:` and `f2:` blocks of `out <- in : scalar` lines.

use std::sync::Arc;

use crate::bimonoid::{BimonoidData, ComonoidData};
use crate::error::{Error, Result};
use crate::graded::{GradedObject, GradingGroup, Model, Shape, Tuple};
use crate::linmap::LinMap;
use crate::mcat::{MMorphism, Source};
use crate::monoidal::tensor_semigroup;
use crate::scalar::{FieldSpec, Scalar};
use crate::semigroup::Semigroup;

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn relocate(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { line: 0, msg } => Error::Parse { line, msg },
        Error::Parse { .. } => e,
        other => Error::Parse { line, msg: other.to_string() },
    }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

struct Header {
    name: String,
    dim: usize,
    field: FieldSpec,
    grading: String,
}

fn parse_header(line: usize, s: &str) -> Result<Header> {
    let w: Vec<&str> = s.split_whitespace().collect();
    match w.as_slice() {
        ["algebra", name, "dim", dim, "field", field, "grading", grading] => Ok(Header {
            name: name.to_string(),
            dim: dim.parse().map_err(|_| perr(line, format!("bad dimension `{dim}`")))?,
            field: FieldSpec::parse(field).map_err(|e| relocate(e, line))?,
            grading: grading.to_string(),
        }),
        _ => Err(perr(line, "expected `algebra <name> dim <n> field <spec> grading <spec>`")),
    }
}

/// Split `<lhs> : <scalar>`.
fn split_scalar(line: usize, s: &str, field: FieldSpec) -> Result<(String, Scalar)> {
    // scalars may themselves contain `:` (`fp5:3`), so take the first split that parses
    let mut last_err = None;
    for (i, _) in s.match_indices(':') {
        match Scalar::parse(field, &s[i + 1..]) {
            Ok(c) => return Ok((s[..i].trim().to_string(), c)),
            Err(e) => last_err = Some(e),
        }
    }
    Err(match last_err {
        Some(e) => relocate(e, line),
        None => perr(line, format!("missing `: scalar` in `{s}`")),
    })
}

/// Entry list for one map, with degree checked per line.
struct EntryList {
    dom: Shape,
    cod: Shape,
    entries: Vec<(Tuple, Tuple, Scalar)>,
}

impl EntryList {
    fn new(dom: Shape, cod: Shape) -> EntryList {
        EntryList { dom, cod, entries: Vec::new() }
    }

    fn push(&mut self, line: usize, out: Tuple, inp: Tuple, c: Scalar) -> Result<()> {
        if self.dom.degree(&inp) != self.cod.degree(&out) {
            return Err(perr(
                line,
                format!("entry {} -> {} does not preserve degree", self.dom.format_tuple(&inp), self.cod.format_tuple(&out)),
            ));
        }
        self.entries.push((out, inp, c));
        Ok(())
    }

    fn build(self) -> Result<LinMap> {
        LinMap::from_entries(self.dom, self.cod, self.entries)
    }
}

/// The algebra block of any file: header, basis lines, `mult` lines. Other
/// lines are handed to `extra` once the basis is known.
fn parse_with(text: &str, mut extra: impl FnMut(&Shape, usize, &str) -> Result<bool>) -> Result<Semigroup> {
    let mut lines = content_lines(text);
    let (hl, hs) = lines.next().ok_or_else(|| perr(1, "empty file"))?;
    let h = parse_header(hl, hs)?;
    let grading = GradingGroup::parse(h.field, &h.grading).map_err(|e| relocate(e, hl))?;
    let model = Model::new(h.field, grading).map_err(|e| relocate(e, hl))?;
    let mut labels = Vec::new();
    let mut degrees = Vec::new();
    let mut shape: Option<Shape> = None;
    let mut mult: Option<EntryList> = None;
    for (ln, s) in lines {
        let w: Vec<&str> = s.split_whitespace().collect();
        if w.first() == Some(&"basis") {
            if shape.is_some() {
                return Err(perr(ln, "basis line after structure constants"));
            }
            match w.as_slice() {
                ["basis", label, "deg", g] => {
                    labels.push(label.to_string());
                    degrees.push(g.parse::<i64>().map_err(|_| perr(ln, format!("bad degree `{g}`")))?);
                }
                _ => return Err(perr(ln, "expected `basis <label> deg <g>`")),
            }
            continue;
        }
        if shape.is_none() {
            if labels.len() != h.dim {
                return Err(perr(ln, format!("header declares dim {} but {} basis lines given", h.dim, labels.len())));
            }
            let obj = GradedObject::finite(h.name.clone(), &model, labels.clone(), degrees.clone()).map_err(|e| relocate(e, ln))?;
            let a = Shape::of(&obj);
            mult = Some(EntryList::new(a.tensor(&a), a.clone()));
            shape = Some(a);
        }
        let a = shape.as_ref().expect("set above");
        if w.first() == Some(&"mult") {
            let (lhs, c) = split_scalar(ln, s, h.field)?;
            let parts: Vec<&str> = lhs.split_whitespace().collect();
            let [_, i, j, "->", k] = parts.as_slice() else {
                return Err(perr(ln, "expected `mult <i> <j> -> <k> : <scalar>`"));
            };
            let label = |x: &str| a.factors()[0].label_index(x).ok_or_else(|| perr(ln, format!("unknown basis label `{x}`")));
            let out: Tuple = [label(k)?].into_iter().collect();
            let inp: Tuple = [label(i)?, label(j)?].into_iter().collect();
            mult.as_mut().expect("set with shape").push(ln, out, inp, c)?;
            continue;
        }
        if !extra(a, ln, s)? {
            return Err(perr(ln, format!("unrecognised line `{s}`")));
        }
    }
    let a = match shape {
        Some(a) => a,
        None => {
            if labels.len() != h.dim {
                return Err(perr(hl, format!("header declares dim {} but {} basis lines given", h.dim, labels.len())));
            }
            Shape::of(&GradedObject::finite(h.name.clone(), &model, labels, degrees).map_err(|e| relocate(e, hl))?)
        }
    };
    let m = match mult {
        Some(m) => m.build()?,
        None => LinMap::zero(&a.tensor(&a), &a),
    };
    Semigroup::new(h.name, a, m)
}

pub fn parse_algebra(text: &str) -> Result<Semigroup> {
    parse_with(text, |_, _, _| Ok(false))
}

/// The algebra block of a bimonoid, comonoid or algebra file.
pub fn parse_base_algebra(text: &str) -> Result<Semigroup> {
    parse_with(text, |_, _, _| Ok(true))
}

/// `<key> <tuple> -> <tuple> : s` or `<key> <label> : s`.
fn parse_structure_line(a: &Shape, ln: usize, s: &str, key: &str, arity_in: usize, arity_out: usize) -> Result<Option<(Tuple, Tuple, Scalar)>> {
    let Some(rest) = s.strip_prefix(key).filter(|r| r.starts_with(char::is_whitespace)) else { return Ok(None) };
    let (lhs, c) = split_scalar(ln, rest, a.field())?;
    let dom = a.pow(arity_in);
    let cod = a.pow(arity_out);
    let (inp, out) = if arity_out == 0 {
        let t = if lhs.starts_with('(') { lhs.clone() } else { format!("({lhs})") };
        (dom.parse_tuple(&t).map_err(|e| relocate(e, ln))?, Tuple::new())
    } else {
        let (i, o) = lhs.split_once("->").ok_or_else(|| perr(ln, format!("expected `{key} (..) -> (..) : scalar`")))?;
        (dom.parse_tuple(i).map_err(|e| relocate(e, ln))?, cod.parse_tuple(o).map_err(|e| relocate(e, ln))?)
    };
    Ok(Some((out, inp, c)))
}

fn structure_maps(text: &str, keys: &[(&'static str, usize, usize)]) -> Result<(Semigroup, Vec<LinMap>)> {
    let mut lists: Vec<Option<EntryList>> = keys.iter().map(|_| None).collect();
    let base = parse_with(text, |a, ln, s| {
        for ((key, ai, ao), slot) in keys.iter().zip(lists.iter_mut()) {
            if let Some((out, inp, c)) = parse_structure_line(a, ln, s, key, *ai, *ao)? {
                slot.get_or_insert_with(|| EntryList::new(a.pow(*ai), a.pow(*ao))).push(ln, out, inp, c)?;
                return Ok(true);
            }
        }
        Ok(false)
    })?;
    let a = base.carrier();
    let maps = keys
        .iter()
        .zip(lists)
        .map(|((_, ai, ao), l)| match l {
            Some(l) => l.build(),
            None => Ok(LinMap::zero(&a.pow(*ai), &a.pow(*ao))),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((base, maps))
}

pub fn parse_bimonoid(text: &str) -> Result<BimonoidData> {
    let (base, maps) = structure_maps(text, &[("t1", 2, 2), ("t2", 2, 2), ("e", 1, 0)])?;
    let name = base.name().to_string();
    let [t1, t2, e]: [LinMap; 3] = maps.try_into().expect("three keys");
    BimonoidData::new(name, base, t1, t2, e)
}

/// Comonoid files use `d1 (i,j,k) -> (l,m) : s`, `d2 …` and `e <i> : s`.
pub fn parse_comonoid(text: &str) -> Result<ComonoidData> {
    let (base, maps) = structure_maps(text, &[("d1", 3, 2), ("d2", 3, 2), ("e", 1, 0)])?;
    base.require_object()?;
    let square = tensor_semigroup(&base, &base)?;
    let [d1, d2, e]: [LinMap; 3] = maps.try_into().expect("three keys");
    Ok(ComonoidData { object: base, square, d1, d2, e })
}

/// References named in a morphism header.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismHeader {
    pub source: String,
    pub target: String,
}

pub fn parse_morphism_header(text: &str) -> Result<MorphismHeader> {
    let (ln, s) = content_lines(text).next().ok_or_else(|| perr(1, "empty file"))?;
    let w: Vec<&str> = s.split_whitespace().collect();
    match w.as_slice() {
        ["morphism", "source", a, "target", b] => Ok(MorphismHeader { source: a.to_string(), target: b.to_string() }),
        _ => Err(perr(ln, "expected `morphism source <ref> target <ref>`")),
    }
}

/// Parse the `f1:` / `f2:` blocks against already resolved algebras.
pub fn parse_morphism(text: &str, source: &Semigroup, target: &Semigroup) -> Result<MMorphism> {
    parse_morphism_header(text)?;
    let (a, b) = (source.carrier(), target.carrier());
    let mut blocks: [Option<(usize, String)>; 2] = [None, None];
    let mut current: Option<usize> = None;
    for (ln, s) in content_lines(text).skip(1) {
        match s {
            "f1:" | "f2:" => {
                let k = if s == "f1:" { 0 } else { 1 };
                if blocks[k].is_some() {
                    return Err(perr(ln, format!("duplicate block {s}")));
                }
                blocks[k] = Some((ln + 1, String::new()));
                current = Some(k);
            }
            _ => {
                let k = current.ok_or_else(|| perr(ln, "entry before `f1:` or `f2:`"))?;
                let (start, body) = blocks[k].as_mut().expect("opened");
                // keep line numbers aligned with the file
                while start.saturating_add(body.lines().count()) < ln {
                    body.push('\n');
                }
                body.push_str(s);
                body.push('\n');
            }
        }
    }
    let domains = [a.tensor(b), b.tensor(a)];
    let mut maps = Vec::new();
    for (k, d) in domains.iter().enumerate() {
        let m = match &blocks[k] {
            Some((start, body)) => LinMap::parse_text(d, b, body, *start).map_err(|e| relocate(e, *start))?,
            None => return Err(perr(1, format!("missing block f{}:", k + 1))),
        };
        maps.push(m);
    }
    let f2 = maps.pop().expect("two blocks");
    let f1 = maps.pop().expect("two blocks");
    MMorphism::new(Source::Semigroup(source.clone()), target.clone(), f1, f2)
}

fn header_text(a: &Semigroup) -> Result<String> {
    let s = a.carrier();
    if s.arity() != 1 {
        return Err(Error::ShapeMismatch(format!("can only write single-factor algebras, got {s}")));
    }
    let obj: &Arc<GradedObject> = &s.factors()[0];
    let dim = obj.dim().ok_or_else(|| Error::InfiniteShape(s.to_string()))?;
    let mut out = format!("algebra {} dim {dim} field {} grading {}\n", obj.name, s.field(), s.model().grading);
    for l in 0..dim as i64 {
        out.push_str(&format!("basis {} deg {}\n", obj.label_name(l), obj.degree(l)));
    }
    for (o, i, c) in a.mult().entries() {
        out.push_str(&format!("mult {} {} -> {} : {}\n", obj.label_name(i[0]), obj.label_name(i[1]), obj.label_name(o[0]), c));
    }
    Ok(out)
}

pub fn write_algebra(a: &Semigroup) -> Result<String> {
    header_text(a)
}

fn write_structure(out: &mut String, key: &str, f: &LinMap) {
    for (o, i, c) in f.entries() {
        if f.cod().arity() == 0 {
            out.push_str(&format!("{key} {} : {c}\n", f.dom().factors()[0].label_name(i[0])));
        } else {
            out.push_str(&format!("{key} {} -> {} : {c}\n", f.dom().format_tuple(&i), f.cod().format_tuple(&o)));
        }
    }
}

pub fn write_bimonoid(d: &BimonoidData) -> Result<String> {
    let mut out = header_text(&d.base)?;
    write_structure(&mut out, "t1", &d.t1);
    write_structure(&mut out, "t2", &d.t2);
    write_structure(&mut out, "e", &d.e);
    Ok(out)
}

pub fn write_comonoid(c: &ComonoidData) -> Result<String> {
    let mut out = header_text(&c.object)?;
    write_structure(&mut out, "d1", &c.d1);
    write_structure(&mut out, "d2", &c.d2);
    write_structure(&mut out, "e", &c.e);
    Ok(out)
}

pub fn write_morphism(f: &MMorphism, source: &str, target: &str) -> String {
    format!("morphism source {source} target {target}\nf1:\n{}f2:\n{}", f.f1().to_text(), f.f2().to_text())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    const KZ2: &str = "\
# group algebra of Z/2
algebra kZ2 dim 2 field q grading trivial
basis 1 deg 0
basis g deg 0
mult 1 1 -> 1 : 1
mult 1 g -> g : 1
mult g 1 -> g : 1
mult g g -> 1 : 1
";

    #[test]
    fn algebra_round_trip() {
        let a = parse_algebra(KZ2).unwrap();
        assert!(a.is_object());
        let again = parse_algebra(&write_algebra(&a).unwrap()).unwrap();
        assert!(again.same_as(&a));
    }

    #[test]
    fn malformed_line_reports_its_number() {
        let bad = KZ2.replace("mult g g -> 1 : 1", "mult g g 1 : 1");
        assert!(matches!(parse_algebra(&bad), Err(Error::Parse { line: 8, .. })));
        let bad = KZ2.replace("mult 1 g -> g : 1", "mult 1 h -> g : 1");
        assert!(matches!(parse_algebra(&bad), Err(Error::Parse { line: 6, .. })));
        let bad = KZ2.replace("dim 2", "dim 3");
        assert!(matches!(parse_algebra(&bad), Err(Error::Parse { line: 5, .. })));
        let bad = KZ2.replace("field q", "field fp:4");
        assert!(matches!(parse_algebra(&bad), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn degree_violations_are_rejected() {
        let text = "algebra L dim 2 field fp:5 grading Z:q=2\nbasis x0 deg 0\nbasis x1 deg 1\nmult x1 x1 -> x0 : 1\n";
        assert!(matches!(parse_algebra(text), Err(Error::Parse { line: 4, .. })));
    }

    #[test]
    fn bimonoid_round_trip() {
        for name in ["grpalg:Z2", "fnalg:Z3", "qline:5:4"] {
            let d = zoo::example(name, None).unwrap();
            let text = write_bimonoid(&d).unwrap();
            let back = parse_bimonoid(&text).unwrap();
            assert!(LinMap::maps_equal(&back.t1, &d.t1).unwrap());
            assert!(LinMap::maps_equal(&back.t2, &d.t2).unwrap());
            assert!(LinMap::maps_equal(&back.e, &d.e).unwrap());
            let c = d.derived_comonoid().unwrap();
            let cb = parse_comonoid(&write_comonoid(&c).unwrap()).unwrap();
            assert!(LinMap::maps_equal(&cb.d1, &c.d1).unwrap());
            assert!(LinMap::maps_equal(&cb.d2, &c.d2).unwrap());
        }
    }

    #[test]
    fn morphism_round_trip() {
        let d = zoo::example("fnalg:Z2", None).unwrap();
        let f = MMorphism::identity(&d.base).unwrap();
        let text = write_morphism(&f, "fnalg:Z2", "fnalg:Z2");
        let h = parse_morphism_header(&text).unwrap();
        assert_eq!(h.source, "fnalg:Z2");
        let g = parse_morphism(&text, &d.base, &d.base).unwrap();
        assert!(g.same_components(&f).unwrap());
        let bad = text.replacen("f2:\n", "f2:\n(d0) <- (d0,d7) : 1\n", 1);
        let line = bad.lines().position(|l| l.contains("d7")).unwrap() + 1;
        match parse_morphism(&bad, &d.base, &d.base) {
            Err(Error::Parse { line: l, .. }) => assert_eq!(l, line),
            other => panic!("{other:?}"),
        }
    }
}
