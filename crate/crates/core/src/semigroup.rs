//! Semigroups with cached certificates.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::{Model, Shape, Tuple};
use crate::linalg::{self, SparseRow};
use crate::linmap::LinMap;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificates {
    /// First triple where `m(m⊗1)` and `m(1⊗m)` differ.
    pub associativity_witness: Option<Tuple>,
    pub nondegenerate: bool,
    pub mult_in_q: bool,
}

impl Certificates {
    pub fn associative(&self) -> bool {
        self.associativity_witness.is_none()
    }

    pub fn all(&self) -> bool {
        self.associative() && self.nondegenerate && self.mult_in_q
    }
}

struct Inner {
    name: String,
    carrier: Shape,
    mult: LinMap,
    certs: Certificates,
}

/// A carrier shape with an associative multiplication `A⊗A -> A`.
#[derive(Clone)]
pub struct Semigroup(Arc<Inner>);

impl Semigroup {
    /// Certify and wrap. Fails only on shape errors; certificates carry the rest.
    pub fn new(name: impl Into<String>, carrier: Shape, mult: LinMap) -> Result<Semigroup> {
        if mult.dom() != &carrier.tensor(&carrier) || mult.cod() != &carrier {
            return Err(Error::ShapeMismatch(format!("multiplication must map {0}⊗{0} -> {0}", carrier)));
        }
        let certs = Certificates {
            associativity_witness: check_associative(&carrier, &mult)?,
            nondegenerate: check_nondegenerate(&carrier, &mult),
            mult_in_q: check_in_q(&mult),
        };
        Ok(Semigroup(Arc::new(Inner { name: name.into(), carrier, mult, certs })))
    }

    /// The monoidal unit with its trivial multiplication.
    pub fn unit_object(model: &Arc<Model>) -> Semigroup {
        let i = Shape::unit(model);
        Semigroup::new("I", i.clone(), LinMap::identity(&i)).expect("unit shapes match")
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn carrier(&self) -> &Shape {
        &self.0.carrier
    }

    pub fn mult(&self) -> &LinMap {
        &self.0.mult
    }

    pub fn model(&self) -> &Arc<Model> {
        self.0.carrier.model()
    }

    pub fn certificates(&self) -> &Certificates {
        &self.0.certs
    }

    pub fn is_finite(&self) -> bool {
        self.0.carrier.is_finite()
    }

    /// Objects of the category: associative, non-degenerate, multiplication dense.
    pub fn is_object(&self) -> bool {
        self.0.certs.all()
    }

    pub fn require_object(&self) -> Result<()> {
        let c = &self.0.certs;
        if !c.associative() {
            return Err(Error::CertificateFailure(format!("{} is not associative", self.name())));
        }
        if !c.nondegenerate {
            return Err(Error::CertificateFailure(format!("{} is degenerate", self.name())));
        }
        if !c.mult_in_q {
            return Err(Error::CertificateFailure(format!("multiplication of {} is not surjective", self.name())));
        }
        Ok(())
    }

    pub fn same_as(&self, other: &Semigroup) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.carrier() == other.carrier() && LinMap::maps_equal(self.mult(), other.mult()).unwrap_or(false))
    }

    /// `m ∘ (m⊗1)` and `m ∘ (1⊗m)`, both `A³ -> A`.
    pub fn associativity_sides(&self) -> (LinMap, LinMap) {
        associativity_sides(&self.0.carrier, &self.0.mult)
    }
}

impl fmt::Debug for Semigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Semigroup({} on {})", self.name(), self.carrier())
    }
}

fn associativity_sides(a: &Shape, m: &LinMap) -> (LinMap, LinMap) {
    let i = Shape::unit(a.model());
    let left = LinMap::compose(m, &m.whisker(&i, a)).expect("shapes match");
    let right = LinMap::compose(m, &m.whisker(a, &i)).expect("shapes match");
    (left, right)
}

/// First basis triple where associativity fails, or `None`.
pub fn check_associative(a: &Shape, m: &LinMap) -> Result<Option<Tuple>> {
    let (l, r) = associativity_sides(a, m);
    LinMap::first_difference(&l, &r)
}

/// Dimension of the left and right annihilators `{x : xA = 0}`, `{x : Ax = 0}`
/// over the check basis.
pub fn annihilator_dims(a: &Shape, m: &LinMap) -> (usize, usize) {
    let xs = a.check_tuples();
    let side = |left: bool| {
        let mut index: BTreeMap<(usize, Tuple), usize> = BTreeMap::new();
        let rows: Vec<SparseRow> = xs
            .iter()
            .map(|x| {
                let mut row = Vec::new();
                for (ai, t) in xs.iter().enumerate() {
                    let mut arg = Tuple::new();
                    if left {
                        arg.extend_from_slice(x);
                        arg.extend_from_slice(t);
                    } else {
                        arg.extend_from_slice(t);
                        arg.extend_from_slice(x);
                    }
                    for (b, c) in m.apply(&arg) {
                        let n = index.len();
                        let k = *index.entry((ai, b)).or_insert(n);
                        row.push((k, c));
                    }
                }
                row.sort_by_key(|(k, _)| *k);
                row
            })
            .collect();
        xs.len() - linalg::rank(&rows)
    };
    (side(true), side(false))
}

/// Both annihilators vanish.
pub fn check_nondegenerate(a: &Shape, m: &LinMap) -> bool {
    annihilator_dims(a, m) == (0, 0)
}

/// Membership in the dense class: surjectivity.
pub fn check_in_q(f: &LinMap) -> bool {
    f.is_surjective()
}

/// A two-sided unit `u: I -> A`, if one exists (finite carriers only).
pub fn find_unit(sg: &Semigroup) -> Option<LinMap> {
    let a = sg.carrier();
    let basis = a.basis().ok()?;
    let n = basis.len();
    let field = a.field();
    // Unknowns u_0..u_{n-1} and z; equations u·b = z b and b·u = z b.
    let mut rows = Vec::new();
    for b in &basis {
        for left in [true, false] {
            let mut eqs: BTreeMap<Tuple, SparseRow> = BTreeMap::new();
            for (k, t) in basis.iter().enumerate() {
                let arg: Tuple = if left { t.iter().chain(b.iter()).copied().collect() } else { b.iter().chain(t.iter()).copied().collect() };
                for (out, c) in sg.mult().apply(&arg) {
                    eqs.entry(out).or_default().push((k, c));
                }
            }
            eqs.entry(b.clone()).or_default().push((n, Scalar::from_int(field, -1)));
            rows.extend(eqs.into_values());
        }
    }
    let kernel = linalg::kernel(&rows, n + 1, &Scalar::one(field));
    let v = kernel.iter().find(|v| v.iter().any(|(k, _)| *k == n))?;
    let z = v.iter().find(|(k, _)| *k == n)?.1.inverse().ok()?;
    let i = Shape::unit(a.model());
    let entries = v.iter().filter(|(k, _)| *k < n).map(|(k, c)| (basis[*k].clone(), Tuple::new(), c * &z));
    let u = LinMap::from_entries(i, a.clone(), entries).ok()?;
    MonoidStructure::new(sg.clone(), u.clone()).ok().map(|_| u)
}

/// A semigroup together with a verified two-sided unit.
#[derive(Clone, Debug)]
pub struct MonoidStructure {
    pub semigroup: Semigroup,
    pub unit: LinMap,
}

impl MonoidStructure {
    pub fn new(semigroup: Semigroup, unit: LinMap) -> Result<MonoidStructure> {
        let a = semigroup.carrier().clone();
        let id = LinMap::identity(&a);
        let i = Shape::unit(a.model());
        let left = LinMap::compose(semigroup.mult(), &unit.whisker(&i, &a))?;
        let right = LinMap::compose(semigroup.mult(), &unit.whisker(&a, &i))?;
        if !LinMap::maps_equal(&left, &id)? || !LinMap::maps_equal(&right, &id)? {
            return Err(Error::CertificateFailure(format!("unit law fails for {}", semigroup.name())));
        }
        Ok(MonoidStructure { semigroup, unit })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::GradedObject;
    use crate::scalar::FieldSpec;
    use rand::{Rng, SeedableRng};
    use smallvec::smallvec;

    fn q() -> Arc<Model> {
        Model::ungraded(FieldSpec::Rationals)
    }

    fn algebra(model: &Arc<Model>, dim: usize, table: &[(usize, usize, usize, i64)]) -> Semigroup {
        let a = Shape::of(&GradedObject::plain("A", model, dim));
        let entries = table
            .iter()
            .map(|&(i, j, k, c)| (smallvec![k as i64], smallvec![i as i64, j as i64], Scalar::from_int(model.field, c)));
        let m = LinMap::from_entries(a.tensor(&a), a.clone(), entries).unwrap();
        Semigroup::new("A", a, m).unwrap()
    }

    fn group_algebra_z2() -> Semigroup {
        algebra(&q(), 2, &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1)])
    }

    #[test]
    fn group_algebra_is_object() {
        let a = group_algebra_z2();
        assert!(a.is_object());
        assert!(find_unit(&a).is_some());
    }

    #[test]
    fn zero_multiplication_is_degenerate() {
        let a = algebra(&q(), 1, &[]);
        assert!(a.certificates().associative());
        assert!(!a.certificates().nondegenerate);
        assert!(!a.certificates().mult_in_q);
        assert!(find_unit(&a).is_none());
    }

    #[test]
    fn function_algebra_z3_nondegenerate() {
        let a = algebra(&q(), 3, &[(0, 0, 0, 1), (1, 1, 1, 1), (2, 2, 2, 1)]);
        assert!(a.certificates().nondegenerate);
        assert_eq!(annihilator_dims(a.carrier(), a.mult()), (0, 0));
    }

    #[test]
    fn corrupted_multiplication_has_associativity_witness() {
        let a = algebra(&q(), 2, &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 1, 1, 1)]);
        let w = a.certificates().associativity_witness.clone();
        assert!(w.is_some());
        let (l, r) = a.associativity_sides();
        let w = w.unwrap();
        assert_ne!(l.apply(&w), r.apply(&w));
    }

    #[test]
    fn associativity_matches_triple_product_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let mut c = [[[0i64; 2]; 2]; 2];
            let mut table = Vec::new();
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        c[i][j][k] = if rng.gen_bool(0.5) { rng.gen_range(-1..=1) } else { 0 };
                        table.push((i, j, k, c[i][j][k]));
                    }
                }
            }
            let mut assoc = true;
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        for out in 0..2 {
                            let l: i64 = (0..2).map(|p| c[i][j][p] * c[p][k][out]).sum();
                            let r: i64 = (0..2).map(|p| c[j][k][p] * c[i][p][out]).sum();
                            assoc &= l == r;
                        }
                    }
                }
            }
            assert_eq!(algebra(&q(), 2, &table).certificates().associative(), assoc);
        }
    }

    #[test]
    fn q_membership() {
        let a = group_algebra_z2();
        assert!(check_in_q(&LinMap::identity(a.carrier())));
        assert!(check_in_q(a.mult()));
        let m = q();
        let one = Shape::of(&GradedObject::plain("L", &m, 1));
        let two = Shape::of(&GradedObject::plain("V", &m, 2));
        let inc = LinMap::from_entries(one.clone(), two, [(smallvec![0], smallvec![0], Scalar::one(FieldSpec::Rationals))]).unwrap();
        assert!(!check_in_q(&inc));
    }

    #[test]
    fn unit_object_is_an_object() {
        assert!(Semigroup::unit_object(&q()).is_object());
    }
}
