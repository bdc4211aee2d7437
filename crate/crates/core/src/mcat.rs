//! Morphisms `A ↛ B` given by pairs of components, their composition, and
//! the passage between semigroup maps and such morphisms.

use std::fmt;

use crate::error::{Error, Result};
use crate::graded::{Shape, Tuple};
use crate::linalg::{self, Pivot, SparseRow};
use crate::linmap::LinMap;
use crate::scalar::{FieldSpec, Scalar};
use crate::semigroup::Semigroup;

/// Source of a morphism: a semigroup, or a bare object with no multiplication.
#[derive(Clone, Debug)]
pub enum Source {
    Semigroup(Semigroup),
    Bare(Shape),
}

impl Source {
    pub fn shape(&self) -> &Shape {
        match self {
            Source::Semigroup(s) => s.carrier(),
            Source::Bare(s) => s,
        }
    }

    pub fn semigroup(&self) -> Option<&Semigroup> {
        match self {
            Source::Semigroup(s) => Some(s),
            Source::Bare(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flags {
    /// First tuple of `B⊗A⊗B` where `m(1⊗f1)` and `m(f2⊗1)` differ.
    pub compatibility_witness: Option<Tuple>,
    /// `f1(m⊗1) = f1(1⊗f1)`; absent for bare sources.
    pub multiplicative_left: Option<bool>,
    /// `f2(1⊗m) = f2(f2⊗1)`; absent for bare sources.
    pub multiplicative_right: Option<bool>,
    pub dense: bool,
    /// Module-map squares `f1(1⊗m) = m(f1⊗1)` and `f2(m⊗1) = m(1⊗f2)`.
    pub module_maps: bool,
}

impl Flags {
    pub fn compatible(&self) -> bool {
        self.compatibility_witness.is_none()
    }

    pub fn multiplicative(&self) -> Option<bool> {
        Some(self.multiplicative_left? && self.multiplicative_right?)
    }

    /// Dense, multiplicative and compatible: a morphism of the category.
    pub fn is_morphism(&self) -> bool {
        self.compatible() && self.dense && self.multiplicative() == Some(true)
    }
}

/// `f: A ↛ B` with components `f1: A⊗B -> B` and `f2: B⊗A -> B`.
#[derive(Clone)]
pub struct MMorphism {
    source: Source,
    target: Semigroup,
    f1: LinMap,
    f2: LinMap,
    flags: Flags,
}

impl fmt::Debug for MMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MMorphism({} ↛ {}, {:?})", self.source.shape(), self.target.carrier(), self.flags)
    }
}

impl MMorphism {
    pub fn new(source: Source, target: Semigroup, f1: LinMap, f2: LinMap) -> Result<MMorphism> {
        let a = source.shape();
        let b = target.carrier();
        if f1.dom() != &a.tensor(b) || f1.cod() != b {
            return Err(Error::ShapeMismatch(format!("first component must map {a}⊗{b} -> {b}")));
        }
        if f2.dom() != &b.tensor(a) || f2.cod() != b {
            return Err(Error::ShapeMismatch(format!("second component must map {b}⊗{a} -> {b}")));
        }
        let flags = certify_components(&source, &target, &f1, &f2)?;
        let out = MMorphism { source, target, f1, f2, flags };
        if out.flags.compatible() && out.target.certificates().nondegenerate && !out.flags.module_maps {
            return Err(Error::CertificateFailure("compatible components fail the module-map squares".into()));
        }
        Ok(out)
    }

    pub fn between(source: &Semigroup, target: &Semigroup, f1: LinMap, f2: LinMap) -> Result<MMorphism> {
        MMorphism::new(Source::Semigroup(source.clone()), target.clone(), f1, f2)
    }

    /// Recompute all flags; returns a fresh value.
    pub fn certify(&self) -> Result<MMorphism> {
        MMorphism::new(self.source.clone(), self.target.clone(), self.f1.clone(), self.f2.clone())
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn source_semigroup(&self) -> Option<&Semigroup> {
        self.source.semigroup()
    }

    pub fn target(&self) -> &Semigroup {
        &self.target
    }

    pub fn f1(&self) -> &LinMap {
        &self.f1
    }

    pub fn f2(&self) -> &LinMap {
        &self.f2
    }

    pub fn flags(&self) -> &Flags {
        &self.flags
    }

    pub fn require_morphism(&self, what: &str) -> Result<()> {
        if self.flags.is_morphism() {
            Ok(())
        } else {
            Err(Error::CertificateFailure(format!("{what} is not a dense multiplicative morphism: {:?}", self.flags)))
        }
    }

    /// Components equal on the check window.
    pub fn same_components(&self, other: &MMorphism) -> Result<bool> {
        Ok(LinMap::maps_equal(&self.f1, &other.f1)? && LinMap::maps_equal(&self.f2, &other.f2)?)
    }

    /// The identity on `A`: both components equal to `m`.
    pub fn identity(a: &Semigroup) -> Result<MMorphism> {
        MMorphism::between(a, a, a.mult().clone(), a.mult().clone())
    }

    /// The morphism `I ↛ A` with both components the identity of `A`.
    pub fn initial(a: &Semigroup) -> Result<MMorphism> {
        let i = Semigroup::unit_object(a.model());
        let id = LinMap::identity(a.carrier());
        MMorphism::between(&i, a, id.clone(), id)
    }

    /// A functional `e: A -> I` viewed as `A ↛ I` with both components `e`.
    pub fn to_unit(a: &Semigroup, e: &LinMap) -> Result<MMorphism> {
        let i = Semigroup::unit_object(a.model());
        MMorphism::between(a, &i, e.clone(), e.clone())
    }

    /// `g • f` for `f: A ↛ B`, `g: B ↛ C`, via the cached section of `g1`/`g2`.
    pub fn compose(g: &MMorphism, f: &MMorphism) -> Result<MMorphism> {
        let s1 = g.f1.section().ok_or_else(|| Error::SolveInconsistent("first component has no section".into()))?;
        let s2 = g.f2.section().ok_or_else(|| Error::SolveInconsistent("second component has no section".into()))?;
        MMorphism::compose_along(g, f, &s1, &s2)
    }

    /// `g • f` using sections of `g1`, `g2` from elimination with `pivot`.
    pub fn compose_with_pivot(g: &MMorphism, f: &MMorphism, pivot: Pivot) -> Result<MMorphism> {
        let none = || Error::SolveInconsistent("component is not surjective".into());
        let s1 = g.f1.eliminated_section(pivot)?.ok_or_else(none)?;
        let s2 = g.f2.eliminated_section(pivot)?.ok_or_else(none)?;
        MMorphism::compose_along(g, f, &s1, &s2)
    }

    fn compose_along(g: &MMorphism, f: &MMorphism, s1: &LinMap, s2: &LinMap) -> Result<MMorphism> {
        if !f.target.same_as(g.source_semigroup().ok_or_else(|| Error::ShapeMismatch("composable source".into()))?) {
            return Err(Error::ShapeMismatch(format!("cannot compose {:?} after {:?}", g, f)));
        }
        g.require_morphism("left factor of a composite")?;
        if !g.target.certificates().nondegenerate {
            return Err(Error::CertificateFailure("composite target is degenerate".into()));
        }
        let a = f.source.shape().clone();
        let c = g.target.carrier().clone();
        let i = Shape::unit(a.model());
        let h1 = LinMap::chain(&[&s1.whisker(&a, &i), &f.f1.whisker(&i, &c), &g.f1])?;
        let h2 = LinMap::chain(&[&s2.whisker(&i, &a), &f.f2.whisker(&c, &i), &g.f2])?;
        let h = MMorphism::new(f.source.clone(), g.target.clone(), h1, h2)?;
        if let Some(w) = composite_defect(&h, g, f)? {
            return Err(Error::SolveInconsistent(format!("composite fails its defining square at {w:?}")));
        }
        if f.flags.dense && !h.flags.dense {
            return Err(Error::CertificateFailure("composite of dense morphisms is not dense".into()));
        }
        if f.flags.multiplicative() == Some(true) && h.flags.multiplicative() != Some(true) {
            return Err(Error::CertificateFailure("composite of multiplicative morphisms is not multiplicative".into()));
        }
        Ok(h)
    }

    /// Whether `h` satisfies the defining squares of `g • f`:
    /// `h1(1⊗g1) = g1(f1⊗1)` and `h2(g2⊗1) = g2(1⊗f2)`.
    pub fn is_composite_of(h: &MMorphism, g: &MMorphism, f: &MMorphism) -> Result<bool> {
        Ok(composite_defect(h, g, f)?.is_none())
    }

    /// `f^#` for a multiplicative `f: A -> B`: components `m(f⊗1)`, `m(1⊗f)`.
    pub fn sharp(f: &LinMap, a: &Semigroup, b: &Semigroup) -> Result<MMorphism> {
        if !is_multiplicative_map(f, a, b)? {
            return Err(Error::NotMultiplicative(format!("{} -> {}", a.name(), b.name())));
        }
        let bs = b.carrier();
        let i = Shape::unit(bs.model());
        let f1 = LinMap::compose(b.mult(), &f.whisker(&i, bs))?;
        let f2 = LinMap::compose(b.mult(), &f.whisker(bs, &i))?;
        let out = MMorphism::between(a, b, f1, f2)?;
        if !out.flags.compatible() || out.flags.multiplicative() != Some(true) {
            return Err(Error::CertificateFailure("sharp of a multiplicative map is not a multiplicative pair".into()));
        }
        Ok(out)
    }

    /// `f^♭: A -> B` for an isomorphism `f: A ↛ B` with inverse `g`.
    pub fn flat(f: &MMorphism, g: &MMorphism) -> Result<LinMap> {
        f.require_morphism("flat argument")?;
        g.require_morphism("flat inverse")?;
        let a = f.source_semigroup().ok_or_else(|| Error::ShapeMismatch("flat needs a semigroup source".into()))?;
        let b = f.target();
        let fg = MMorphism::compose(f, g)?;
        let gf = MMorphism::compose(g, f)?;
        if !fg.same_components(&MMorphism::identity(b)?)? || !gf.same_components(&MMorphism::identity(a)?)? {
            return Err(Error::NotInverse(format!("{} and {}", a.name(), b.name())));
        }
        let s = g.f1.section().ok_or_else(|| Error::SolveInconsistent("inverse has no section".into()))?;
        let flat = LinMap::compose(&f.f2, &s)?;
        if !LinMap::maps_equal(&LinMap::compose(&flat, &g.f1)?, &f.f2)? {
            return Err(Error::SolveInconsistent("flat does not satisfy its defining equation".into()));
        }
        let back = MMorphism::sharp(&flat, a, b)?;
        if !back.same_components(f)? {
            return Err(Error::SolveInconsistent("sharp of flat differs from the original".into()));
        }
        Ok(flat)
    }

    /// Recover the second component from the first using non-degeneracy of
    /// the target: `f2(b⊗a)` is the unique `y` with `y·b' = b·f1(a⊗b')`.
    pub fn second_from_first(&self) -> Result<Option<LinMap>> {
        reconstruct(&self.target, self.source.shape(), &self.f1, true)
    }

    /// Recover the first component from the second.
    pub fn first_from_second(&self) -> Result<Option<LinMap>> {
        reconstruct(&self.target, self.source.shape(), &self.f2, false)
    }
}

fn certify_components(source: &Source, target: &Semigroup, f1: &LinMap, f2: &LinMap) -> Result<Flags> {
    let a = source.shape();
    let b = target.carrier();
    let m = target.mult();
    let i = Shape::unit(a.model());
    // m(1⊗f1) vs m(f2⊗1) on B⊗A⊗B
    let lhs = LinMap::compose(m, &f1.whisker(b, &i))?;
    let rhs = LinMap::compose(m, &f2.whisker(&i, b))?;
    let compatibility_witness = LinMap::first_difference(&lhs, &rhs)?;
    let (multiplicative_left, multiplicative_right) = match source {
        Source::Semigroup(sa) => {
            let ma = sa.mult();
            let l1 = LinMap::compose(f1, &ma.whisker(&i, b))?;
            let r1 = LinMap::compose(f1, &f1.whisker(a, &i))?;
            let l2 = LinMap::compose(f2, &ma.whisker(b, &i))?;
            let r2 = LinMap::compose(f2, &f2.whisker(&i, a))?;
            (Some(LinMap::maps_equal(&l1, &r1)?), Some(LinMap::maps_equal(&l2, &r2)?))
        }
        Source::Bare(_) => (None, None),
    };
    let module_maps = {
        let l1 = LinMap::compose(f1, &m.whisker(a, &i))?;
        let r1 = LinMap::compose(m, &f1.whisker(&i, b))?;
        let l2 = LinMap::compose(f2, &m.whisker(&i, a))?;
        let r2 = LinMap::compose(m, &f2.whisker(b, &i))?;
        LinMap::maps_equal(&l1, &r1)? && LinMap::maps_equal(&l2, &r2)?
    };
    let dense = f1.is_surjective() && f2.is_surjective();
    Ok(Flags { compatibility_witness, multiplicative_left, multiplicative_right, dense, module_maps })
}

fn composite_defect(h: &MMorphism, g: &MMorphism, f: &MMorphism) -> Result<Option<Tuple>> {
    let a = f.source.shape();
    let c = g.target.carrier();
    let i = Shape::unit(a.model());
    let l1 = LinMap::compose(&h.f1, &g.f1.whisker(a, &i))?;
    let r1 = LinMap::compose(&g.f1, &f.f1.whisker(&i, c))?;
    if let Some(w) = LinMap::first_difference(&l1, &r1)? {
        return Ok(Some(w));
    }
    let l2 = LinMap::compose(&h.f2, &g.f2.whisker(&i, a))?;
    let r2 = LinMap::compose(&g.f2, &f.f2.whisker(c, &i))?;
    LinMap::first_difference(&l2, &r2)
}

/// `f ∘ m_A = m_B ∘ (f⊗f)`.
pub fn is_multiplicative_map(f: &LinMap, a: &Semigroup, b: &Semigroup) -> Result<bool> {
    if f.dom() != a.carrier() || f.cod() != b.carrier() {
        return Err(Error::ShapeMismatch(format!("map must go {} -> {}", a.carrier(), b.carrier())));
    }
    let lhs = LinMap::compose(f, a.mult())?;
    let rhs = LinMap::compose(b.mult(), &LinMap::tensor(f, f)?)?;
    LinMap::maps_equal(&lhs, &rhs)
}

fn reconstruct(target: &Semigroup, a: &Shape, known: &LinMap, first_known: bool) -> Result<Option<LinMap>> {
    let b = target.carrier();
    let bb = b.basis()?;
    let ab = a.basis()?;
    let m = target.mult();
    let i = Shape::unit(a.model());
    // phi = m(1⊗f1) on B⊗A⊗B, or m(f2⊗1) on B⊗A⊗B
    let phi = if first_known {
        LinMap::compose(m, &known.whisker(b, &i))?
    } else {
        LinMap::compose(m, &known.whisker(&i, b))?
    };
    let n = bb.len();
    let cat = |x: &[i64], y: &[i64]| -> Tuple { x.iter().chain(y).copied().collect() };
    let mut entries = Vec::new();
    for x in &bb {
        for t in &ab {
            // unknown y in B: y·b' = phi(x⊗t⊗b')  (or b'·y = phi(b'⊗x... ) for the other side)
            let mut rows: Vec<SparseRow> = Vec::new();
            let mut rhs: Vec<Scalar> = Vec::new();
            for bp in &bb {
                let mut eq: std::collections::BTreeMap<Tuple, SparseRow> = Default::default();
                for (k, basis_y) in bb.iter().enumerate() {
                    let arg = if first_known { cat(basis_y, bp) } else { cat(bp, basis_y) };
                    for (out, c) in m.apply(&arg) {
                        eq.entry(out).or_default().push((k, c));
                    }
                }
                let target_col = if first_known { phi.apply(&cat(&cat(x, t), bp)) } else { phi.apply(&cat(&cat(bp, t), x)) };
                for (out, _) in &target_col {
                    eq.entry(out.clone()).or_default();
                }
                for (out, row) in eq {
                    let r = target_col.iter().find(|(u, _)| *u == out).map(|(_, c)| c.clone()).unwrap_or_else(|| Scalar::zero(b.field()));
                    rows.push(row);
                    rhs.push(r);
                }
            }
            let Some((y, unique)) = linalg::solve(&rows, &rhs, n) else { return Ok(None) };
            if !unique {
                return Ok(None);
            }
            for (k, c) in y {
                let inp = if first_known { cat(x, t) } else { cat(t, x) };
                entries.push((bb[k].clone(), inp, c));
            }
        }
    }
    let dom = if first_known { b.tensor(a) } else { a.tensor(b) };
    Ok(Some(LinMap::from_entries(dom, b.clone(), entries)?))
}

/// Whether `u: I ↛ A` is the only dense multiplicative morphism out of `I`,
/// by enumerating candidate endomaps with small entries.
pub fn check_initial(a: &Semigroup) -> Result<bool> {
    let u = MMorphism::initial(a)?;
    if !u.flags.is_morphism() {
        return Ok(false);
    }
    let sa = a.carrier();
    let basis = sa.basis()?;
    let n = basis.len();
    if n > 3 {
        return Err(Error::CertificateFailure(format!("enumeration limited to dimension 3, got {n}")));
    }
    let field = sa.field();
    let values: Vec<Scalar> = match field {
        FieldSpec::Prime(p) if p.checked_pow((n * n) as u32).is_some_and(|t| t <= 20_000) => (0..p as i64).map(|v| Scalar::from_int(field, v)).collect(),
        _ => [-1, 0, 1].iter().map(|&v| Scalar::from_int(field, v)).collect(),
    };
    let id = LinMap::identity(sa);
    let cells: Vec<(Tuple, Tuple)> = basis
        .iter()
        .flat_map(|x| basis.iter().filter(|y| sa.degree(y) == sa.degree(x)).map(move |y| (y.clone(), x.clone())))
        .collect();
    let total = values.len().pow(cells.len() as u32);
    let mut candidates = Vec::new();
    for code in 0..total {
        let mut rest = code;
        let entries: Vec<(Tuple, Tuple, Scalar)> = cells
            .iter()
            .map(|(y, x)| {
                let v = values[rest % values.len()].clone();
                rest /= values.len();
                (y.clone(), x.clone(), v)
            })
            .collect();
        let v = LinMap::from_entries(sa.clone(), sa.clone(), entries)?;
        let idem = LinMap::maps_equal(&LinMap::compose(&v, &v)?, &v)?;
        if idem && v.is_surjective() {
            candidates.push(v);
        }
    }
    for v1 in &candidates {
        if !LinMap::maps_equal(v1, &id)? {
            return Ok(false);
        }
    }
    Ok(candidates.len() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{GradedObject, Model};
    use smallvec::smallvec;
    use std::sync::Arc;

    fn q() -> Arc<Model> {
        Model::ungraded(FieldSpec::Rationals)
    }

    fn algebra(model: &Arc<Model>, name: &str, dim: usize, table: &[(usize, usize, usize, i64)]) -> Semigroup {
        let a = Shape::of(&GradedObject::plain(name, model, dim));
        let entries = table
            .iter()
            .map(|&(i, j, k, c)| (smallvec![k as i64], smallvec![i as i64, j as i64], Scalar::from_int(model.field, c)));
        let m = LinMap::from_entries(a.tensor(&a), a.clone(), entries).unwrap();
        Semigroup::new(name, a, m).unwrap()
    }

    fn group_algebra_z2(m: &Arc<Model>) -> Semigroup {
        algebra(m, "kZ2", 2, &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1)])
    }

    fn fn_z3(m: &Arc<Model>) -> Semigroup {
        algebra(m, "KZ3", 3, &[(0, 0, 0, 1), (1, 1, 1, 1), (2, 2, 2, 1)])
    }

    fn perm_map(a: &Semigroup, images: &[i64]) -> LinMap {
        let one = Scalar::one(a.model().field);
        let entries = images.iter().enumerate().map(|(x, &y)| (smallvec![y], smallvec![x as i64], one.clone()));
        LinMap::from_entries(a.carrier().clone(), a.carrier().clone(), entries).unwrap()
    }

    #[test]
    fn identity_flags() {
        let m = q();
        let a = group_algebra_z2(&m);
        let id = MMorphism::identity(&a).unwrap();
        assert!(id.flags().is_morphism());
        assert!(id.flags().module_maps);
    }

    #[test]
    fn mismatched_pair_not_compatible() {
        let m = q();
        let a = fn_z3(&m);
        let other = LinMap::zero(&a.carrier().tensor(a.carrier()), a.carrier());
        let f = MMorphism::between(&a, &a, a.mult().clone(), other).unwrap();
        assert!(f.flags().compatibility_witness.is_some());
    }

    #[test]
    fn functional_multiplicative_iff_character() {
        let m = q();
        let a = fn_z3(&m);
        let i = Shape::unit(&m);
        let one = Scalar::one(FieldSpec::Rationals);
        let eval = LinMap::from_entries(a.carrier().clone(), i.clone(), [(Tuple::new(), smallvec![1], one.clone())]).unwrap();
        assert_eq!(MMorphism::to_unit(&a, &eval).unwrap().flags().multiplicative(), Some(true));
        let sum = LinMap::from_entries(a.carrier().clone(), i, (0..3).map(|k| (Tuple::new(), smallvec![k], one.clone()))).unwrap();
        assert_eq!(MMorphism::to_unit(&a, &sum).unwrap().flags().multiplicative(), Some(false));
    }

    #[test]
    fn unit_laws_and_section_independence() {
        let m = q();
        let a = fn_z3(&m);
        let inv = MMorphism::sharp(&perm_map(&a, &[0, 2, 1]), &a, &a).unwrap();
        let id = MMorphism::identity(&a).unwrap();
        assert!(MMorphism::compose(&inv, &id).unwrap().same_components(&inv).unwrap());
        assert!(MMorphism::compose(&id, &inv).unwrap().same_components(&inv).unwrap());
        let x = MMorphism::compose_with_pivot(&inv, &inv, Pivot::First).unwrap();
        let y = MMorphism::compose_with_pivot(&inv, &inv, Pivot::Last).unwrap();
        assert_eq!(x.f1().to_text(), y.f1().to_text());
        assert!(x.same_components(&id).unwrap());
    }

    #[test]
    fn sharp_of_zero_is_not_dense() {
        let m = q();
        let a = fn_z3(&m);
        let z = LinMap::zero(a.carrier(), a.carrier());
        let f = MMorphism::sharp(&z, &a, &a).unwrap();
        assert!(!f.flags().dense);
    }

    #[test]
    fn flat_recovers_inversion() {
        let m = q();
        let a = fn_z3(&m);
        let g = perm_map(&a, &[0, 2, 1]);
        let f = MMorphism::sharp(&g, &a, &a).unwrap();
        let back = MMorphism::flat(&f, &f).unwrap();
        assert!(LinMap::maps_equal(&back, &g).unwrap());
        let id = MMorphism::identity(&a).unwrap();
        assert!(LinMap::maps_equal(&MMorphism::flat(&id, &id).unwrap(), &LinMap::identity(a.carrier())).unwrap());
        let shift = MMorphism::sharp(&perm_map(&a, &[1, 2, 0]), &a, &a).unwrap();
        assert!(matches!(MMorphism::flat(&shift, &shift), Err(Error::NotInverse(_))));
    }

    #[test]
    fn initiality() {
        let m = q();
        let a = group_algebra_z2(&m);
        assert!(MMorphism::initial(&a).unwrap().flags().is_morphism());
        assert!(check_initial(&a).unwrap());
        // non-identity idempotent: multiplicative but not dense
        let b = fn_z3(&m);
        let one = Scalar::one(FieldSpec::Rationals);
        let p = LinMap::from_entries(b.carrier().clone(), b.carrier().clone(), [(smallvec![0], smallvec![0], one)]).unwrap();
        let i = Semigroup::unit_object(&m);
        let v = MMorphism::between(&i, &b, p.clone(), p).unwrap();
        assert_eq!(v.flags().multiplicative(), Some(true));
        assert!(!v.flags().dense);
    }

    #[test]
    fn components_determine_each_other() {
        let m = q();
        let a = fn_z3(&m);
        let f = MMorphism::sharp(&perm_map(&a, &[0, 2, 1]), &a, &a).unwrap();
        assert!(LinMap::maps_equal(&f.second_from_first().unwrap().unwrap(), f.f2()).unwrap());
        assert!(LinMap::maps_equal(&f.first_from_second().unwrap().unwrap(), f.f1()).unwrap());
    }
}
