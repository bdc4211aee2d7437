//! Graded objects and tensor shapes.
//!
//! A [`Model`] fixes the base field and the grading group together with its
//! bicharacter. Every [`GradedObject`] lives in one model. Tensor products
//! are strict: a [`Shape`] is a flat list of factors, the unit object `I` is
//! the empty shape, and associators/unitors are identities.

use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Scalar};

/// Basis label. Finite objects use `0..dim`; windowed objects use the
/// integer index itself.
pub type Label = i64;
/// A basis tuple of a shape, one label per factor.
pub type Tuple = SmallVec<[Label; 8]>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GradingKind {
    Trivial,
    Cyclic(i64),
    Integers,
}

/// Abelian grading group with bicharacter `beta(g, h) = q^(g h)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingGroup {
    pub kind: GradingKind,
    pub q: Scalar,
}

impl GradingGroup {
    pub fn trivial(field: FieldSpec) -> Self {
        GradingGroup { kind: GradingKind::Trivial, q: Scalar::one(field) }
    }

    /// `Z/n` grading; `q^n` must be one for the bicharacter to be well defined.
    pub fn cyclic(n: i64, q: Scalar) -> Result<Self> {
        if n <= 0 {
            return Err(Error::CertificateFailure(format!("cyclic order {n} must be positive")));
        }
        if !q.pow(n)?.is_one() {
            return Err(Error::CertificateFailure(format!("q = {q} does not satisfy q^{n} = 1")));
        }
        Ok(GradingGroup { kind: GradingKind::Cyclic(n), q })
    }

    pub fn integers(q: Scalar) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(GradingGroup { kind: GradingKind::Integers, q })
    }

    pub fn normalize(&self, g: i64) -> i64 {
        match self.kind {
            GradingKind::Trivial => 0,
            GradingKind::Cyclic(n) => g.rem_euclid(n),
            GradingKind::Integers => g,
        }
    }

    pub fn beta(&self, g: i64, h: i64) -> Scalar {
        match self.kind {
            GradingKind::Trivial => Scalar::one(self.q.field()),
            GradingKind::Cyclic(n) => {
                let e = (self.normalize(g) * self.normalize(h)).rem_euclid(n);
                self.q.pow(e).expect("nonzero q")
            }
            GradingKind::Integers => self.q.pow(g * h).expect("nonzero q"),
        }
    }

    /// Parse `trivial`, `Z/<n>:q=<s>` or `Z:q=<s>`.
    pub fn parse(field: FieldSpec, s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse { line: 0, msg: format!("bad grading spec `{s}`") };
        if s == "trivial" {
            return Ok(GradingGroup::trivial(field));
        }
        let (group, q) = s.split_once(":q=").ok_or_else(bad)?;
        let q = Scalar::parse(field, q)?;
        if group == "Z" {
            GradingGroup::integers(q)
        } else if let Some(n) = group.strip_prefix("Z/") {
            GradingGroup::cyclic(n.parse().map_err(|_| bad())?, q)
        } else {
            Err(bad())
        }
    }
}

impl fmt::Display for GradingGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GradingKind::Trivial => write!(f, "trivial"),
            GradingKind::Cyclic(n) => write!(f, "Z/{n}:q={}", self.q),
            GradingKind::Integers => write!(f, "Z:q={}", self.q),
        }
    }
}

/// Base field plus grading: the braided monoidal category everything lives in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub field: FieldSpec,
    pub grading: GradingGroup,
}

impl Model {
    pub fn new(field: FieldSpec, grading: GradingGroup) -> Result<Arc<Model>> {
        if grading.q.field() != field {
            return Err(Error::FieldMismatch(grading.q.field().to_string(), field.to_string()));
        }
        Ok(Arc::new(Model { field, grading }))
    }

    pub fn ungraded(field: FieldSpec) -> Arc<Model> {
        Arc::new(Model { field, grading: GradingGroup::trivial(field) })
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero(self.field)
    }

    pub fn one(&self) -> Scalar {
        Scalar::one(self.field)
    }

    pub fn int(&self, n: i64) -> Scalar {
        Scalar::from_int(self.field, n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Basis {
    Finite { labels: Vec<String>, degrees: Vec<i64> },
    /// Basis indexed by all of `Z`, degree zero throughout. Checks enumerate
    /// indices in `-radius..=radius`, where `radius = window - margin`.
    Windowed { window: i64, radius: i64 },
}

/// A graded vector space with a chosen basis.
#[derive(Debug, PartialEq, Eq)]
pub struct GradedObject {
    pub name: String,
    pub basis: Basis,
    pub model: Arc<Model>,
}

impl GradedObject {
    pub fn finite(
        name: impl Into<String>,
        model: &Arc<Model>,
        labels: Vec<String>,
        degrees: Vec<i64>,
    ) -> Result<Arc<GradedObject>> {
        let name = name.into();
        if labels.len() != degrees.len() {
            return Err(Error::ShapeMismatch(format!("{name}: labels and degrees differ in length")));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::ShapeMismatch(format!("{name}: duplicate basis label {l}")));
            }
        }
        let degrees = degrees.into_iter().map(|d| model.grading.normalize(d)).collect();
        Ok(Arc::new(GradedObject { name, basis: Basis::Finite { labels, degrees }, model: model.clone() }))
    }

    /// Ungraded object with labels `prefix0, prefix1, ...`.
    pub fn plain(name: impl Into<String>, model: &Arc<Model>, dim: usize) -> Arc<GradedObject> {
        let labels = (0..dim).map(|i| format!("b{i}")).collect();
        GradedObject::finite(name, model, labels, vec![0; dim]).expect("distinct labels")
    }

    pub fn windowed(name: impl Into<String>, model: &Arc<Model>, window: i64, margin: i64) -> Arc<GradedObject> {
        Arc::new(GradedObject {
            name: name.into(),
            basis: Basis::Windowed { window, radius: (window - margin).max(0) },
            model: model.clone(),
        })
    }

    pub fn dim(&self) -> Option<usize> {
        match &self.basis {
            Basis::Finite { labels, .. } => Some(labels.len()),
            Basis::Windowed { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.dim().is_some()
    }

    pub fn degree(&self, l: Label) -> i64 {
        match &self.basis {
            Basis::Finite { degrees, .. } => degrees[l as usize],
            Basis::Windowed { .. } => 0,
        }
    }

    /// Labels enumerated by checks: the full basis, or the check window.
    pub fn check_labels(&self) -> Vec<Label> {
        match &self.basis {
            Basis::Finite { labels, .. } => (0..labels.len() as Label).collect(),
            Basis::Windowed { radius, .. } => (-radius..=*radius).collect(),
        }
    }

    pub fn label_name(&self, l: Label) -> String {
        match &self.basis {
            Basis::Finite { labels, .. } => labels.get(l as usize).cloned().unwrap_or_else(|| format!("?{l}")),
            Basis::Windowed { .. } => l.to_string(),
        }
    }

    pub fn label_index(&self, name: &str) -> Option<Label> {
        match &self.basis {
            Basis::Finite { labels, .. } => labels.iter().position(|l| l == name).map(|i| i as Label),
            Basis::Windowed { .. } => name.parse().ok(),
        }
    }
}

/// Ordered tensor product of graded objects.
#[derive(Clone, Debug)]
pub struct Shape {
    factors: Vec<Arc<GradedObject>>,
    model: Arc<Model>,
}

impl PartialEq for Shape {
    fn eq(&self, o: &Shape) -> bool {
        self.model == o.model
            && self.factors.len() == o.factors.len()
            && self.factors.iter().zip(&o.factors).all(|(a, b)| Arc::ptr_eq(a, b) || a == b)
    }
}

impl Eq for Shape {}

impl Shape {
    /// The monoidal unit.
    pub fn unit(model: &Arc<Model>) -> Shape {
        Shape { factors: Vec::new(), model: model.clone() }
    }

    pub fn of(obj: &Arc<GradedObject>) -> Shape {
        Shape { factors: vec![obj.clone()], model: obj.model.clone() }
    }

    pub fn power(obj: &Arc<GradedObject>, n: usize) -> Shape {
        Shape { factors: vec![obj.clone(); n], model: obj.model.clone() }
    }

    pub fn model(&self) -> &Arc<Model> {
        &self.model
    }

    pub fn field(&self) -> FieldSpec {
        self.model.field
    }

    pub fn factors(&self) -> &[Arc<GradedObject>] {
        &self.factors
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    pub fn tensor(&self, o: &Shape) -> Shape {
        let mut factors = self.factors.clone();
        factors.extend(o.factors.iter().cloned());
        Shape { factors, model: self.model.clone() }
    }

    /// `self^n` as a shape.
    pub fn pow(&self, n: usize) -> Shape {
        (0..n).fold(Shape::unit(&self.model), |acc, _| acc.tensor(self))
    }

    pub fn is_finite(&self) -> bool {
        self.factors.iter().all(|f| f.is_finite())
    }

    pub fn dim(&self) -> Option<usize> {
        self.factors.iter().map(|f| f.dim()).product()
    }

    pub fn degree(&self, t: &[Label]) -> i64 {
        let g = &self.model.grading;
        g.normalize(self.factors.iter().zip(t).map(|(f, &l)| f.degree(l)).sum())
    }

    /// All tuples the checks enumerate, in lexicographic order.
    pub fn check_tuples(&self) -> Vec<Tuple> {
        let per: Vec<Vec<Label>> = self.factors.iter().map(|f| f.check_labels()).collect();
        let mut out = vec![Tuple::new()];
        for labels in &per {
            let mut next = Vec::with_capacity(out.len() * labels.len());
            for t in &out {
                for &l in labels {
                    let mut u = t.clone();
                    u.push(l);
                    next.push(u);
                }
            }
            out = next;
        }
        out
    }

    /// Streaming version of [`Shape::check_tuples`].
    pub fn iter_check_tuples(&self) -> CheckTuples {
        let labels: Vec<Vec<Label>> = self.factors.iter().map(|f| f.check_labels()).collect();
        let done = labels.iter().any(|l| l.is_empty());
        CheckTuples { pos: vec![0; labels.len()], labels, done }
    }

    pub fn check_count(&self) -> usize {
        self.factors.iter().map(|f| f.check_labels().len()).product()
    }

    /// Full basis; only for finite shapes.
    pub fn basis(&self) -> Result<Vec<Tuple>> {
        if !self.is_finite() {
            return Err(Error::InfiniteShape(self.to_string()));
        }
        Ok(self.check_tuples())
    }

    /// Position of a tuple in the lexicographic basis of a finite shape.
    pub fn index_of(&self, t: &[Label]) -> usize {
        let mut idx = 0usize;
        for (f, &l) in self.factors.iter().zip(t) {
            idx = idx * f.dim().unwrap_or(1) + l as usize;
        }
        idx
    }

    pub fn format_tuple(&self, t: &[Label]) -> String {
        let parts: Vec<String> = self.factors.iter().zip(t).map(|(f, &l)| f.label_name(l)).collect();
        format!("({})", parts.join(","))
    }

    pub fn parse_tuple(&self, s: &str) -> Result<Tuple> {
        let bad = |m: String| Error::Parse { line: 0, msg: m };
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| bad(format!("tuple `{s}` must be parenthesised")))?;
        let parts: Vec<&str> = if inner.trim().is_empty() { Vec::new() } else { inner.split(',').collect() };
        if parts.len() != self.arity() {
            return Err(bad(format!("tuple `{s}` has {} entries, shape {self} needs {}", parts.len(), self.arity())));
        }
        parts
            .iter()
            .zip(&self.factors)
            .map(|(p, f)| f.label_index(p.trim()).ok_or_else(|| bad(format!("unknown label `{}` in {}", p.trim(), f.name))))
            .collect()
    }

    /// Split a tuple at factor position `k`.
    pub fn split_at(&self, k: usize) -> (Shape, Shape) {
        (
            Shape { factors: self.factors[..k].to_vec(), model: self.model.clone() },
            Shape { factors: self.factors[k..].to_vec(), model: self.model.clone() },
        )
    }
}

/// Odometer over the check tuples of a shape, in lexicographic order.
pub struct CheckTuples {
    labels: Vec<Vec<Label>>,
    pos: Vec<usize>,
    done: bool,
}

impl Iterator for CheckTuples {
    type Item = Tuple;

    fn next(&mut self) -> Option<Tuple> {
        if self.done {
            return None;
        }
        let t: Tuple = self.pos.iter().zip(&self.labels).map(|(&i, l)| l[i]).collect();
        let mut k = self.pos.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.pos[k] += 1;
            if self.pos[k] < self.labels[k].len() {
                break;
            }
            self.pos[k] = 0;
        }
        Some(t)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "I");
        }
        let names: Vec<&str> = self.factors.iter().map(|o| o.name.as_str()).collect();
        write!(f, "{}", names.join("⊗"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bicharacter_is_bimultiplicative() {
        let f5 = FieldSpec::Prime(5);
        let groups = [
            GradingGroup::trivial(f5),
            GradingGroup::cyclic(4, Scalar::from_int(f5, 2)).unwrap(),
            GradingGroup::integers(Scalar::from_int(f5, 2)).unwrap(),
            GradingGroup::cyclic(2, Scalar::from_int(f5, -1)).unwrap(),
        ];
        for g in &groups {
            for a in -3..4 {
                for b in -3..4 {
                    for h in -3..4 {
                        assert_eq!(g.beta(a + b, h), &g.beta(a, h) * &g.beta(b, h));
                        assert_eq!(g.beta(h, a + b), &g.beta(h, a) * &g.beta(h, b));
                        assert!(!g.beta(a, h).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn cyclic_requires_root() {
        let f5 = FieldSpec::Prime(5);
        assert!(GradingGroup::cyclic(3, Scalar::from_int(f5, 2)).is_err());
    }

    #[test]
    fn unit_shape_has_one_tuple() {
        let m = Model::ungraded(FieldSpec::Rationals);
        let i = Shape::unit(&m);
        assert_eq!(i.dim(), Some(1));
        assert_eq!(i.basis().unwrap(), vec![Tuple::new()]);
        assert_eq!(i.to_string(), "I");
    }

    #[test]
    fn tuples_and_degrees() {
        let f5 = FieldSpec::Prime(5);
        let m = Model::new(f5, GradingGroup::integers(Scalar::from_int(f5, 2)).unwrap()).unwrap();
        let a = GradedObject::finite("A", &m, vec!["1".into(), "x".into()], vec![0, 1]).unwrap();
        let s = Shape::power(&a, 3);
        let b = s.basis().unwrap();
        assert_eq!(b.len(), 8);
        assert_eq!(s.degree(&b[7]), 3);
        assert_eq!(s.index_of(&b[5]), 5);
        assert_eq!(s.format_tuple(&b[3]), "(1,x,x)");
        assert_eq!(s.parse_tuple("(1,x,x)").unwrap(), b[3]);
        assert!(GradedObject::finite("B", &m, vec!["a".into(), "a".into()], vec![0, 0]).is_err());
    }

    #[test]
    fn windowed_enumeration() {
        let m = Model::ungraded(FieldSpec::Rationals);
        let w = GradedObject::windowed("K", &m, 8, 3);
        assert_eq!(w.check_labels().len(), 11);
        let s = Shape::power(&w, 2);
        assert!(!s.is_finite());
        assert!(s.basis().is_err());
        assert_eq!(s.check_tuples().len(), 121);
        assert!(s.iter_check_tuples().eq(s.check_tuples().into_iter()));
        assert_eq!(Shape::unit(&m).iter_check_tuples().count(), 1);
    }
}
