//! Degree-preserving linear maps between tensor shapes.
//!
//! Maps on finite domains are stored as one sparse column per domain basis
//! tuple. Maps on windowed domains are lazy rules evaluated per tuple;
//! composites and tensor products of rules stay lazy.
//!
//! Every map can report a section (right inverse). Finite maps get one by
//! blockwise elimination; lazy maps get one from an explicit hint or from
//! the sections of the pieces they were built from.

use std::fmt;
use std::sync::{Arc, OnceLock};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::graded::{Label, Shape, Tuple};
use crate::linalg::{self, Pivot, SparseRow};
use crate::scalar::Scalar;

/// Image of one basis tuple: `(tuple, coefficient)` sorted by tuple, no zeros.
pub type Column = SmallVec<[(Tuple, Scalar); 2]>;

pub type RuleFn = dyn Fn(&[Label]) -> Column + Send + Sync;

enum Kind {
    Table(Vec<Column>),
    Rule(Arc<RuleFn>),
}

#[derive(Clone)]
enum Origin {
    Atom,
    Compose(LinMap, LinMap),
    Tensor(LinMap, LinMap),
}

struct Inner {
    dom: Shape,
    cod: Shape,
    kind: Kind,
    origin: Origin,
    hint: Option<LinMap>,
    section: OnceLock<Option<LinMap>>,
}

/// A linear map `dom -> cod`. Cheap to clone.
#[derive(Clone)]
pub struct LinMap(Arc<Inner>);

/// Sort, merge equal tuples and drop zeros.
pub fn normalize_column(mut terms: Vec<(Tuple, Scalar)>) -> Column {
    if terms.len() <= 1 {
        return terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    }
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Column = SmallVec::new();
    for (t, c) in terms {
        match out.last_mut() {
            Some((u, acc)) if *u == t => *acc = &*acc + &c,
            _ => out.push((t, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

impl LinMap {
    fn wrap(dom: Shape, cod: Shape, kind: Kind, origin: Origin, hint: Option<LinMap>) -> LinMap {
        LinMap(Arc::new(Inner { dom, cod, kind, origin, hint, section: OnceLock::new() }))
    }

    /// Build from a rule: tabulated on finite domains, lazy otherwise.
    pub fn from_rule<F>(dom: Shape, cod: Shape, rule: F) -> LinMap
    where
        F: Fn(&[Label]) -> Column + Send + Sync + 'static,
    {
        LinMap::from_rule_with_section(dom, cod, rule, None)
    }

    pub fn from_rule_with_section<F>(dom: Shape, cod: Shape, rule: F, section: Option<LinMap>) -> LinMap
    where
        F: Fn(&[Label]) -> Column + Send + Sync + 'static,
    {
        if dom.is_finite() {
            let cols = dom.check_tuples().iter().map(|t| rule(t)).collect();
            LinMap::wrap(dom, cod, Kind::Table(cols), Origin::Atom, section)
        } else {
            LinMap::wrap(dom, cod, Kind::Rule(Arc::new(rule)), Origin::Atom, section)
        }
    }

    /// Attach an explicit section to a copy of this map.
    pub fn with_section(&self, section: LinMap) -> LinMap {
        LinMap::wrap(self.dom().clone(), self.cod().clone(), clone_kind(&self.0.kind), self.0.origin.clone(), Some(section))
    }

    /// Build a finite map from `(out, in, coefficient)` triples, summing repeats.
    pub fn from_entries(dom: Shape, cod: Shape, entries: impl IntoIterator<Item = (Tuple, Tuple, Scalar)>) -> Result<LinMap> {
        let n = dom.dim().ok_or_else(|| Error::InfiniteShape(dom.to_string()))?;
        let mut raw: Vec<Vec<(Tuple, Scalar)>> = vec![Vec::new(); n];
        for (out, inp, c) in entries {
            check_tuple(&dom, &inp)?;
            check_tuple(&cod, &out)?;
            if c.field() != dom.field() {
                return Err(Error::FieldMismatch(c.field().to_string(), dom.field().to_string()));
            }
            if c.is_zero() {
                continue;
            }
            if dom.degree(&inp) != cod.degree(&out) {
                return Err(Error::ShapeMismatch(format!(
                    "entry {} <- {} does not preserve degree",
                    cod.format_tuple(&out),
                    dom.format_tuple(&inp)
                )));
            }
            raw[dom.index_of(&inp)].push((out, c));
        }
        let cols = raw.into_iter().map(normalize_column).collect();
        Ok(LinMap::wrap(dom, cod, Kind::Table(cols), Origin::Atom, None))
    }

    pub fn identity(shape: &Shape) -> LinMap {
        let one = Scalar::one(shape.field());
        let m = LinMap::from_rule(shape.clone(), shape.clone(), move |t| single(Tuple::from_slice(t), one.clone()));
        m.with_section(m.clone())
    }

    pub fn zero(dom: &Shape, cod: &Shape) -> LinMap {
        LinMap::from_rule(dom.clone(), cod.clone(), |_| Column::new())
    }

    /// `c_{X,Y}: X⊗Y -> Y⊗X`, `x⊗y ↦ β(deg x, deg y) y⊗x`.
    pub fn braiding(x: &Shape, y: &Shape) -> LinMap {
        LinMap::braid(x, y, false)
    }

    /// `c_{X,Y}^{-1}: Y⊗X -> X⊗Y`.
    pub fn braiding_inv(x: &Shape, y: &Shape) -> LinMap {
        LinMap::braid(x, y, true)
    }

    fn braid(x: &Shape, y: &Shape, inverse: bool) -> LinMap {
        let (dom, cod) = if inverse { (y.tensor(x), x.tensor(y)) } else { (x.tensor(y), y.tensor(x)) };
        let back = LinMap::from_rule(cod.clone(), dom.clone(), LinMap::braid_raw(x, y, !inverse));
        LinMap::from_rule(dom, cod, LinMap::braid_raw(x, y, inverse)).with_section(back)
    }

    fn braid_raw(x: &Shape, y: &Shape, inverse: bool) -> impl Fn(&[Label]) -> Column + Send + Sync + 'static {
        let (xs, ys) = (x.clone(), y.clone());
        let k = if inverse { y.arity() } else { x.arity() };
        let grading = x.model().grading.clone();
        move |t: &[Label]| {
            let (a, b) = t.split_at(k);
            let (tx, ty) = if inverse { (b, a) } else { (a, b) };
            let mut beta = grading.beta(xs.degree(tx), ys.degree(ty));
            if inverse {
                beta = beta.inverse().expect("bicharacter values are nonzero");
            }
            let mut out: Tuple = Tuple::from_slice(b);
            out.extend_from_slice(a);
            let mut c = Column::new();
            c.push((out, beta));
            c
        }
    }

    pub fn dom(&self) -> &Shape {
        &self.0.dom
    }

    pub fn cod(&self) -> &Shape {
        &self.0.cod
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self.0.kind, Kind::Table(_))
    }

    /// Image of a basis tuple of the domain.
    pub fn apply(&self, t: &[Label]) -> Column {
        match &self.0.kind {
            Kind::Table(cols) => cols[self.0.dom.index_of(t)].clone(),
            Kind::Rule(r) => r(t),
        }
    }

    /// Push `coeff * self(t)` onto `out`.
    pub fn apply_into(&self, t: &[Label], coeff: &Scalar, out: &mut Vec<(Tuple, Scalar)>) {
        match &self.0.kind {
            Kind::Table(cols) => {
                for (u, c) in &cols[self.0.dom.index_of(t)] {
                    out.push((u.clone(), c * coeff));
                }
            }
            Kind::Rule(r) => {
                for (u, c) in r(t) {
                    out.push((u, &c * coeff));
                }
            }
        }
    }

    /// Image of a sparse vector.
    pub fn apply_vec(&self, v: &[(Tuple, Scalar)]) -> Column {
        let mut acc = Vec::new();
        for (t, c) in v {
            self.apply_into(t, c, &mut acc);
        }
        normalize_column(acc)
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &LinMap) -> Result<LinMap> {
        LinMap::compose(self, f)
    }

    /// `g ∘ f`.
    pub fn compose(g: &LinMap, f: &LinMap) -> Result<LinMap> {
        if f.cod() != g.dom() {
            return Err(Error::ShapeMismatch(format!("cannot compose {} -> {} after {} -> {}", g.dom(), g.cod(), f.dom(), f.cod())));
        }
        let dom = f.dom().clone();
        let cod = g.cod().clone();
        let origin = Origin::Compose(g.clone(), f.clone());
        if let Kind::Table(fc) = &f.0.kind {
            let cols = fc
                .iter()
                .map(|col| {
                    let mut acc = Vec::with_capacity(col.len());
                    for (u, a) in col {
                        g.apply_into(u, a, &mut acc);
                    }
                    normalize_column(acc)
                })
                .collect();
            return Ok(LinMap::wrap(dom, cod, Kind::Table(cols), origin, None));
        }
        let (gg, ff) = (g.clone(), f.clone());
        let rule = move |t: &[Label]| {
            let col = ff.apply(t);
            if col.len() == 1 {
                let (u, a) = &col[0];
                let mut out = gg.apply(u);
                if !a.is_one() {
                    for (_, c) in out.iter_mut() {
                        *c = &*c * a;
                    }
                }
                return out;
            }
            let mut acc = Vec::new();
            for (u, a) in &col {
                gg.apply_into(u, a, &mut acc);
            }
            normalize_column(acc)
        };
        Ok(LinMap::wrap(dom, cod, Kind::Rule(Arc::new(rule)), origin, None))
    }

    /// Composite of a chain listed in application order: `maps[0]` first.
    pub fn chain(maps: &[&LinMap]) -> Result<LinMap> {
        let mut acc = maps[0].clone();
        for m in &maps[1..] {
            acc = LinMap::compose(m, &acc)?;
        }
        Ok(acc)
    }

    /// `f ⊗ g`.
    pub fn tensor(f: &LinMap, g: &LinMap) -> Result<LinMap> {
        if f.dom().model() != g.dom().model() {
            return Err(Error::FieldMismatch(f.dom().field().to_string(), g.dom().field().to_string()));
        }
        let dom = f.dom().tensor(g.dom());
        let cod = f.cod().tensor(g.cod());
        let k = f.dom().arity();
        let (ff, gg) = (f.clone(), g.clone());
        let rule = move |t: &[Label]| {
            let (a, b) = t.split_at(k);
            let ca = ff.apply(a);
            if ca.is_empty() {
                return Column::new();
            }
            let cb = gg.apply(b);
            let mut out = Column::with_capacity(ca.len() * cb.len());
            for (u, x) in &ca {
                for (v, y) in &cb {
                    let mut w = u.clone();
                    w.extend_from_slice(v);
                    out.push((w, x * y));
                }
            }
            out
        };
        let origin = Origin::Tensor(f.clone(), g.clone());
        let kind = if dom.is_finite() {
            Kind::Table(dom.check_tuples().iter().map(|t| rule(t)).collect())
        } else {
            Kind::Rule(Arc::new(rule))
        };
        Ok(LinMap::wrap(dom, cod, kind, origin, None))
    }

    /// `1_left ⊗ self ⊗ 1_right`.
    pub fn whisker(&self, left: &Shape, right: &Shape) -> LinMap {
        let mut m = self.clone();
        if left.arity() > 0 {
            m = LinMap::tensor(&LinMap::identity(left), &m).expect("same model");
        }
        if right.arity() > 0 {
            m = LinMap::tensor(&m, &LinMap::identity(right)).expect("same model");
        }
        m
    }

    /// Tensor product of several maps, left to right.
    pub fn tensor_all(maps: &[&LinMap]) -> Result<LinMap> {
        let mut acc = maps[0].clone();
        for m in &maps[1..] {
            acc = LinMap::tensor(&acc, m)?;
        }
        Ok(acc)
    }

    /// Linear combination `a·self + b·other`.
    pub fn combine(&self, a: &Scalar, other: &LinMap, b: &Scalar) -> Result<LinMap> {
        if self.dom() != other.dom() || self.cod() != other.cod() {
            return Err(Error::ShapeMismatch("linear combination of maps with different shapes".into()));
        }
        let (f, g, a, b) = (self.clone(), other.clone(), a.clone(), b.clone());
        Ok(LinMap::from_rule(self.dom().clone(), self.cod().clone(), move |t| {
            let mut acc = Vec::new();
            f.apply_into(t, &a, &mut acc);
            g.apply_into(t, &b, &mut acc);
            normalize_column(acc)
        }))
    }

    /// Copy with `delta · out` added to the image of `inp`.
    pub fn with_added_entry(&self, inp: &Tuple, out: &Tuple, delta: &Scalar) -> LinMap {
        let (f, i, o, d) = (self.clone(), inp.clone(), out.clone(), delta.clone());
        LinMap::from_rule(self.dom().clone(), self.cod().clone(), move |t| {
            let col = f.apply(t);
            if t != i.as_slice() {
                return col;
            }
            let mut acc: Vec<(Tuple, Scalar)> = col.into_vec();
            acc.push((o.clone(), d.clone()));
            normalize_column(acc)
        })
    }

    /// First domain tuple (in check order) where the two maps differ.
    pub fn first_difference(f: &LinMap, g: &LinMap) -> Result<Option<Tuple>> {
        if f.dom() != g.dom() || f.cod() != g.cod() {
            return Err(Error::ShapeMismatch(format!(
                "comparing {} -> {} with {} -> {}",
                f.dom(),
                f.cod(),
                g.dom(),
                g.cod()
            )));
        }
        if let (Kind::Table(a), Kind::Table(b)) = (&f.0.kind, &g.0.kind) {
            if Arc::ptr_eq(&f.0, &g.0) {
                return Ok(None);
            }
            let basis = f.dom().iter_check_tuples();
            for (t, (x, y)) in basis.zip(a.iter().zip(b)) {
                if x != y {
                    return Ok(Some(t));
                }
            }
            return Ok(None);
        }
        Ok(f.dom().iter_check_tuples().find(|t| f.apply(t) != g.apply(t)))
    }

    pub fn maps_equal(f: &LinMap, g: &LinMap) -> Result<bool> {
        Ok(LinMap::first_difference(f, g)?.is_none())
    }

    /// Whether every domain tuple maps to zero (on the check window).
    pub fn is_zero(&self) -> bool {
        self.dom().iter_check_tuples().all(|t| self.apply(&t).is_empty())
    }

    /// Number of nonzero entries over the check window.
    pub fn nnz(&self) -> usize {
        self.dom().iter_check_tuples().map(|t| self.apply(&t).len()).sum()
    }

    /// `(out, in, coefficient)` triples over the check window, in order.
    pub fn entries(&self) -> Vec<(Tuple, Tuple, Scalar)> {
        let mut v = Vec::new();
        for t in self.dom().iter_check_tuples() {
            for (u, c) in self.apply(&t) {
                v.push((u, t.clone(), c));
            }
        }
        v
    }

    /// Degree blocks: rows are codomain tuples, columns domain tuples.
    fn blocks(&self) -> Result<Vec<Block>> {
        let dom_basis = self.dom().basis()?;
        let cod_basis = self.cod().basis()?;
        let mut degrees: Vec<i64> = cod_basis.iter().map(|t| self.cod().degree(t)).collect();
        degrees.sort_unstable();
        degrees.dedup();
        let mut blocks = Vec::new();
        for g in degrees {
            let rows: Vec<Tuple> = cod_basis.iter().filter(|t| self.cod().degree(t) == g).cloned().collect();
            let cols: Vec<Tuple> = dom_basis.iter().filter(|t| self.dom().degree(t) == g).cloned().collect();
            let row_pos = |t: &Tuple| rows.binary_search(t).ok();
            let mut matrix: Vec<SparseRow> = vec![Vec::new(); rows.len()];
            for (j, x) in cols.iter().enumerate() {
                for (y, c) in self.apply(x) {
                    if let Some(i) = row_pos(&y) {
                        matrix[i].push((j, c));
                    }
                }
            }
            blocks.push(Block { rows, cols, matrix });
        }
        Ok(blocks)
    }

    /// Rank; finite shapes only.
    pub fn rank(&self) -> Result<usize> {
        Ok(self.blocks()?.iter().map(|b| linalg::rank(&b.matrix)).sum())
    }

    /// Section computed by elimination with the given pivot rule.
    pub fn eliminated_section(&self, pivot: Pivot) -> Result<Option<LinMap>> {
        let mut entries = Vec::new();
        for b in self.blocks()? {
            let Some(cols) = linalg::right_inverse(&b.matrix, pivot) else { return Ok(None) };
            for (i, col) in cols.into_iter().enumerate() {
                for (j, c) in col {
                    entries.push((b.cols[j].clone(), b.rows[i].clone(), c));
                }
            }
        }
        Ok(Some(LinMap::from_entries(self.cod().clone(), self.dom().clone(), entries)?))
    }

    /// A right inverse `s` with `self ∘ s = 1`, when one is known.
    pub fn section(&self) -> Option<LinMap> {
        self.0.section.get_or_init(|| self.find_section()).clone()
    }

    fn find_section(&self) -> Option<LinMap> {
        if let Some(h) = &self.0.hint {
            return Some(h.clone());
        }
        if self.dom().is_finite() && self.cod().is_finite() {
            return self.eliminated_section(Pivot::First).ok().flatten();
        }
        match &self.0.origin {
            Origin::Atom => None,
            Origin::Compose(g, f) => LinMap::compose(&f.section()?, &g.section()?).ok(),
            Origin::Tensor(a, b) => LinMap::tensor(&a.section()?, &b.section()?).ok(),
        }
    }

    /// Membership in the class of dense maps: surjective. Finite maps use
    /// rank; lazy maps need a section verified on the codomain window.
    pub fn is_surjective(&self) -> bool {
        if self.dom().is_finite() && self.cod().is_finite() {
            return self.section().is_some();
        }
        match self.section() {
            Some(s) => LinMap::compose(self, &s)
                .map(|fs| self.cod().iter_check_tuples().all(|t| {
                    let c = fs.apply(&t);
                    c.len() == 1 && c[0].0 == t && c[0].1.is_one()
                }))
                .unwrap_or(false),
            None => false,
        }
    }

    /// Sparse text form: one `out <- in : scalar` line per entry.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (out, inp, c) in self.entries() {
            s.push_str(&format!("{} <- {} : {}\n", self.cod().format_tuple(&out), self.dom().format_tuple(&inp), c));
        }
        s
    }

    /// Parse lines `out <- in : scalar`; blank lines and `#` comments skipped.
    pub fn parse_text(dom: &Shape, cod: &Shape, text: &str, first_line: usize) -> Result<LinMap> {
        let mut entries = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            entries.push(parse_entry(dom, cod, line).map_err(|e| at_line(e, first_line + k))?);
        }
        LinMap::from_entries(dom.clone(), cod.clone(), entries).map_err(|e| at_line(e, first_line))
    }
}

fn parse_entry(dom: &Shape, cod: &Shape, line: &str) -> Result<(Tuple, Tuple, Scalar)> {
    let bad = || Error::Parse { line: 0, msg: format!("expected `out <- in : scalar`, got `{line}`") };
    let close = line.rfind(')').ok_or_else(bad)?;
    let (lhs, rest) = line.split_at(close + 1);
    let scalar = rest.trim().strip_prefix(':').ok_or_else(bad)?;
    let (out, inp) = lhs.split_once("<-").ok_or_else(bad)?;
    Ok((cod.parse_tuple(out)?, dom.parse_tuple(inp)?, Scalar::parse(dom.field(), scalar.trim())?))
}

pub(crate) fn at_line(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { line: 0, msg } => Error::Parse { line, msg },
        other => other,
    }
}

fn clone_kind(k: &Kind) -> Kind {
    match k {
        Kind::Table(c) => Kind::Table(c.clone()),
        Kind::Rule(r) => Kind::Rule(r.clone()),
    }
}

fn check_tuple(shape: &Shape, t: &Tuple) -> Result<()> {
    let ok = t.len() == shape.arity()
        && shape.factors().iter().zip(t).all(|(f, &l)| match f.dim() {
            Some(d) => (0..d as Label).contains(&l),
            None => true,
        });
    if ok {
        Ok(())
    } else {
        Err(Error::ShapeMismatch(format!("tuple {t:?} does not belong to {shape}")))
    }
}

struct Block {
    rows: Vec<Tuple>,
    cols: Vec<Tuple>,
    matrix: Vec<SparseRow>,
}

impl fmt::Debug for LinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinMap({} -> {})", self.dom(), self.cod())
    }
}

impl PartialEq for LinMap {
    fn eq(&self, other: &LinMap) -> bool {
        LinMap::maps_equal(self, other).unwrap_or(false)
    }
}

/// Monomial column helper.
pub fn single(t: Tuple, c: Scalar) -> Column {
    let mut col = Column::new();
    if !c.is_zero() {
        col.push((t, c));
    }
    col
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{GradedObject, GradingGroup, Model};
    use crate::scalar::FieldSpec;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use smallvec::smallvec;

    fn rationals() -> Arc<Model> {
        Model::ungraded(FieldSpec::Rationals)
    }

    fn graded_f5() -> Arc<Model> {
        let f5 = FieldSpec::Prime(5);
        Model::new(f5, GradingGroup::integers(Scalar::from_int(f5, 2)).unwrap()).unwrap()
    }

    fn random_map(rng: &mut ChaCha8Rng, dom: &Shape, cod: &Shape) -> LinMap {
        let mut entries = Vec::new();
        for x in dom.basis().unwrap() {
            for y in cod.basis().unwrap() {
                if dom.degree(&x) == cod.degree(&y) && rng.gen_bool(0.5) {
                    entries.push((y.clone(), x.clone(), Scalar::from_int(dom.field(), rng.gen_range(-3..=3))));
                }
            }
        }
        LinMap::from_entries(dom.clone(), cod.clone(), entries).unwrap()
    }

    fn dense(f: &LinMap) -> Vec<Vec<Scalar>> {
        let rows = f.cod().basis().unwrap();
        let cols = f.dom().basis().unwrap();
        let z = Scalar::zero(f.dom().field());
        let mut m = vec![vec![z; cols.len()]; rows.len()];
        for (j, x) in cols.iter().enumerate() {
            for (y, c) in f.apply(x) {
                m[f.cod().index_of(&y)][j] = c;
            }
        }
        m
    }

    #[test]
    fn composition_matches_dense_product() {
        let m = rationals();
        let a = Shape::of(&GradedObject::plain("A", &m, 3));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let f = random_map(&mut rng, &a, &a);
            let g = random_map(&mut rng, &a, &a);
            let gf = dense(&LinMap::compose(&g, &f).unwrap());
            let (df, dg) = (dense(&f), dense(&g));
            for i in 0..3 {
                for j in 0..3 {
                    let mut acc = Scalar::zero(FieldSpec::Rationals);
                    for k in 0..3 {
                        acc = &acc + &(&dg[i][k] * &df[k][j]);
                    }
                    assert_eq!(gf[i][j], acc);
                }
            }
        }
    }

    #[test]
    fn identity_and_swap() {
        let m = rationals();
        let a = Shape::of(&GradedObject::plain("A", &m, 3));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_map(&mut rng, &a, &a);
        let id = LinMap::identity(&a);
        assert!(LinMap::maps_equal(&LinMap::compose(&id, &f).unwrap(), &f).unwrap());
        let c = LinMap::braiding(&a, &a);
        let cc = LinMap::compose(&c, &c).unwrap();
        assert!(LinMap::maps_equal(&cc, &LinMap::identity(&a.tensor(&a))).unwrap());
        let one_one = LinMap::tensor(&id, &id).unwrap();
        assert!(LinMap::maps_equal(&one_one, &LinMap::identity(&a.tensor(&a))).unwrap());
    }

    #[test]
    fn graded_braiding_coefficient() {
        let m = graded_f5();
        let a = GradedObject::finite("A", &m, vec!["1".into(), "x".into()], vec![0, 1]).unwrap();
        let s = Shape::of(&a);
        let c = LinMap::braiding(&s, &s);
        let col = c.apply(&[1, 1]);
        assert_eq!(col.as_slice(), &[(smallvec![1, 1], Scalar::from_int(FieldSpec::Prime(5), 2))]);
        let ci = LinMap::braiding_inv(&s, &s);
        assert!(LinMap::maps_equal(&LinMap::compose(&ci, &c).unwrap(), &LinMap::identity(&s.tensor(&s))).unwrap());
    }

    #[test]
    fn witness_for_changed_entry() {
        let m = rationals();
        let a = Shape::of(&GradedObject::plain("A", &m, 3));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_map(&mut rng, &a, &a);
        assert!(LinMap::maps_equal(&f, &f).unwrap());
        let g = f.with_added_entry(&smallvec![2], &smallvec![0], &Scalar::one(FieldSpec::Rationals));
        assert_eq!(LinMap::first_difference(&f, &g).unwrap(), Some(smallvec![2]));
    }

    #[test]
    fn function_algebra_mm_matches_structure_constants() {
        let m = rationals();
        let a = GradedObject::plain("K", &m, 2);
        let sa = Shape::of(&a);
        let one = Scalar::one(FieldSpec::Rationals);
        let mult = LinMap::from_entries(
            sa.tensor(&sa),
            sa.clone(),
            (0..2).map(|g| (smallvec![g], smallvec![g, g], one.clone())),
        )
        .unwrap();
        let mm = LinMap::tensor(&mult, &mult).unwrap();
        for t in mm.dom().basis().unwrap() {
            let expect: Column = if t[0] == t[1] && t[2] == t[3] { single(smallvec![t[0], t[2]], one.clone()) } else { Column::new() };
            assert_eq!(mm.apply(&t), expect);
        }
    }

    #[test]
    fn naturality_and_hexagons() {
        let m = graded_f5();
        let x = GradedObject::finite("X", &m, vec!["a".into(), "b".into()], vec![0, 1]).unwrap();
        let y = GradedObject::finite("Y", &m, vec!["c".into(), "d".into(), "e".into()], vec![1, 2, 1]).unwrap();
        let z = GradedObject::finite("Z", &m, vec!["f".into()], vec![3]).unwrap();
        let (sx, sy, sz) = (Shape::of(&x), Shape::of(&y), Shape::of(&z));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = random_map(&mut rng, &sx, &sx);
        let g = random_map(&mut rng, &sy, &sy);
        let lhs = LinMap::compose(&LinMap::braiding(&sx, &sy), &LinMap::tensor(&f, &g).unwrap()).unwrap();
        let rhs = LinMap::compose(&LinMap::tensor(&g, &f).unwrap(), &LinMap::braiding(&sx, &sy)).unwrap();
        assert!(LinMap::maps_equal(&lhs, &rhs).unwrap());
        // c_{X,Y⊗Z} = (1⊗c_{X,Z})(c_{X,Y}⊗1)
        let big = LinMap::braiding(&sx, &sy.tensor(&sz));
        let steps = LinMap::chain(&[&LinMap::braiding(&sx, &sy).whisker(&Shape::unit(&m), &sz), &LinMap::braiding(&sx, &sz).whisker(&sy, &Shape::unit(&m))]).unwrap();
        assert!(LinMap::maps_equal(&big, &steps).unwrap());
        // c_{X⊗Y,Z} = (c_{X,Z}⊗1)(1⊗c_{Y,Z})
        let big = LinMap::braiding(&sx.tensor(&sy), &sz);
        let steps = LinMap::chain(&[&LinMap::braiding(&sy, &sz).whisker(&sx, &Shape::unit(&m)), &LinMap::braiding(&sx, &sz).whisker(&Shape::unit(&m), &sy)]).unwrap();
        assert!(LinMap::maps_equal(&big, &steps).unwrap());
    }

    #[test]
    fn sections_and_rank() {
        let m = rationals();
        let a = Shape::of(&GradedObject::plain("A", &m, 4));
        let id = LinMap::identity(&a);
        assert_eq!(id.rank().unwrap(), 4);
        assert!(LinMap::maps_equal(&id.eliminated_section(Pivot::First).unwrap().unwrap(), &id).unwrap());
        let one = Shape::of(&GradedObject::plain("k", &m, 1));
        let z = LinMap::zero(&a, &one);
        assert_eq!(z.rank().unwrap(), 0);
        assert!(z.section().is_none());
        assert!(!z.is_surjective());
    }

    #[test]
    fn text_round_trip() {
        let m = graded_f5();
        let a = GradedObject::finite("A", &m, vec!["1".into(), "x".into()], vec![0, 1]).unwrap();
        let s = Shape::of(&a);
        let c = LinMap::braiding(&s, &s);
        let text = c.to_text();
        assert!(text.contains("(x,x) <- (x,x) : fp5:2"));
        let back = LinMap::parse_text(c.dom(), c.cod(), &text, 1).unwrap();
        assert!(LinMap::maps_equal(&back, &c).unwrap());
        assert!(matches!(LinMap::parse_text(&s, &s, "(x) <- (1) : 1", 5), Err(Error::ShapeMismatch(_))));
        assert!(matches!(LinMap::parse_text(&s, &s, "\n(x) <- (q) : 1", 5), Err(Error::Parse { line: 6, .. })));
    }

    #[test]
    fn windowed_rules_and_sections() {
        let m = rationals();
        let k = GradedObject::windowed("K", &m, 8, 3);
        let sk = Shape::of(&k);
        let one = Scalar::one(FieldSpec::Rationals);
        let o = one.clone();
        let shift = LinMap::from_rule(sk.clone(), sk.clone(), move |t| single(smallvec![t[0] + 1], o.clone()));
        let o = one.clone();
        let back = LinMap::from_rule(sk.clone(), sk.clone(), move |t| single(smallvec![t[0] - 1], o.clone()));
        let shift = shift.with_section(back);
        assert!(shift.is_surjective());
        let two = LinMap::tensor(&shift, &LinMap::identity(&sk)).unwrap();
        assert!(!two.is_tabulated());
        assert!(two.is_surjective());
        let sq = LinMap::compose(&two, &two).unwrap();
        assert!(sq.is_surjective());
        assert_eq!(sq.apply(&[4, 0]).as_slice(), &[(smallvec![6, 0], one.clone())]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn interchange_law(seed in any::<u64>()) {
            let m = graded_f5();
            let a = GradedObject::finite("A", &m, vec!["1".into(), "x".into()], vec![0, 1]).unwrap();
            let b = GradedObject::finite("B", &m, vec!["u".into(), "v".into(), "w".into()], vec![1, 0, 1]).unwrap();
            let (sa, sb) = (Shape::of(&a), Shape::of(&b));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (f, f2) = (random_map(&mut rng, &sa, &sa), random_map(&mut rng, &sa, &sa));
            let (g, g2) = (random_map(&mut rng, &sb, &sb), random_map(&mut rng, &sb, &sb));
            let lhs = LinMap::tensor(&LinMap::compose(&f, &f2).unwrap(), &LinMap::compose(&g, &g2).unwrap()).unwrap();
            let rhs = LinMap::compose(&LinMap::tensor(&f, &g).unwrap(), &LinMap::tensor(&f2, &g2).unwrap()).unwrap();
            prop_assert!(LinMap::maps_equal(&lhs, &rhs).unwrap());
            let l2 = LinMap::compose(&f.whisker(&Shape::unit(&m), &sb), &g.whisker(&sa, &Shape::unit(&m))).unwrap();
            let r2 = LinMap::compose(&g.whisker(&sa, &Shape::unit(&m)), &f.whisker(&Shape::unit(&m), &sb)).unwrap();
            prop_assert!(LinMap::maps_equal(&l2, &r2).unwrap());
        }

        #[test]
        fn sections_are_right_inverses(seed in any::<u64>()) {
            let m = graded_f5();
            let a = GradedObject::finite("A", &m, vec!["1".into(), "x".into(), "y".into()], vec![0, 1, 1]).unwrap();
            let sa = Shape::of(&a);
            let sq = sa.tensor(&sa);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_map(&mut rng, &sq, &sa);
            let r = f.rank().unwrap();
            match f.section() {
                Some(s) => {
                    prop_assert_eq!(r, 3);
                    prop_assert!(LinMap::maps_equal(&LinMap::compose(&f, &s).unwrap(), &LinMap::identity(&sa)).unwrap());
                    for x in s.dom().basis().unwrap() {
                        for (y, _) in s.apply(&x) {
                            prop_assert_eq!(s.dom().degree(&x), s.cod().degree(&y));
                        }
                    }
                }
                None => prop_assert!(r < 3),
            }
        }

        #[test]
        fn dense_class_laws(seed in any::<u64>()) {
            let m = rationals();
            let a = Shape::of(&GradedObject::plain("A", &m, 3));
            let b = Shape::of(&GradedObject::plain("B", &m, 2));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = random_map(&mut rng, &a, &b);
            let t = random_map(&mut rng, &b, &b);
            let ts = LinMap::compose(&t, &s).unwrap();
            if s.is_surjective() && t.is_surjective() {
                prop_assert!(ts.is_surjective());
                prop_assert!(LinMap::tensor(&s, &t).unwrap().is_surjective());
            }
            if s.is_surjective() && ts.is_surjective() {
                prop_assert!(t.is_surjective());
            }
        }
    }
}
