//! The multiplier monoid `M(A)`: pairs `(λ, ρ)` of endomaps of `A` with
//! `ρ(a)·b = a·λ(b)`, its monoid structure, and the embedding `i`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use smallvec::smallvec;

use crate::error::{Error, Result};
use crate::graded::{GradedObject, Label, Shape, Tuple};
use crate::linalg::{self, Pivot, SparseRow};
use crate::linmap::{normalize_column, Column, LinMap};
use crate::mcat::{is_multiplicative_map, MMorphism};
use crate::scalar::Scalar;
use crate::semigroup::{MonoidStructure, Semigroup};

/// A pair of endomaps of `A`: `left = λ` and `right = ρ`.
#[derive(Clone, Debug)]
pub struct Multiplier {
    pub left: LinMap,
    pub right: LinMap,
}

impl Multiplier {
    pub fn unit(a: &Semigroup) -> Multiplier {
        let id = LinMap::identity(a.carrier());
        Multiplier { left: id.clone(), right: id }
    }

    /// `i(x) = (x·-, -·x)` for a basis label `x`.
    pub fn of_element(a: &Semigroup, x: Label) -> Multiplier {
        let s = a.carrier().clone();
        let (m1, m2) = (a.mult().clone(), a.mult().clone());
        let left = LinMap::from_rule(s.clone(), s.clone(), move |t| m1.apply(&[x, t[0]]));
        let right = LinMap::from_rule(s.clone(), s, move |t| m2.apply(&[t[0], x]));
        Multiplier { left, right }
    }

    /// First `(a,b)` with `ρ(a)·b ≠ a·λ(b)`.
    pub fn compatibility_witness(&self, a: &Semigroup) -> Result<Option<Tuple>> {
        let s = a.carrier();
        let id = LinMap::identity(s);
        let lhs = LinMap::compose(a.mult(), &LinMap::tensor(&self.right, &id)?)?;
        let rhs = LinMap::compose(a.mult(), &LinMap::tensor(&id, &self.left)?)?;
        LinMap::first_difference(&lhs, &rhs)
    }

    /// `(λ, ρ)(λ', ρ') = (λλ', ρ'ρ)`.
    pub fn product(&self, other: &Multiplier) -> Result<Multiplier> {
        Ok(Multiplier {
            left: LinMap::compose(&self.left, &other.left)?,
            right: LinMap::compose(&other.right, &self.right)?,
        })
    }

    pub fn same_as(&self, other: &Multiplier) -> Result<bool> {
        Ok(LinMap::maps_equal(&self.left, &other.left)? && LinMap::maps_equal(&self.right, &other.right)?)
    }
}

// Unknown (side, input, output): coefficient of `output` in λ(input) or ρ(input).
type Unknown = (u8, Label, Label);

#[derive(Clone, Debug)]
struct Block {
    degree: i64,
    index: HashMap<Unknown, usize>,
    free: Vec<usize>,
    first_element: usize,
}

/// `M(A)` for a finite non-degenerate `A`, with its solved basis.
#[derive(Clone, Debug)]
pub struct MultiplierMonoid {
    base: Semigroup,
    elements: Vec<Multiplier>,
    blocks: Vec<Block>,
    monoid: MonoidStructure,
    e1: LinMap,
    e2: LinMap,
    embed: LinMap,
}

impl MultiplierMonoid {
    pub fn compute(a: &Semigroup) -> Result<MultiplierMonoid> {
        a.require_object()?;
        let s = a.carrier();
        if !s.is_finite() {
            return Err(Error::InfiniteShape(format!("{} needs named multipliers", a.name())));
        }
        let model = a.model().clone();
        let basis = s.basis()?;
        let labels: Vec<Label> = basis.iter().map(|t| t[0]).collect();
        let deg = |l: Label| s.degree(&[l]);
        let grading = &model.grading;
        let shifts: BTreeSet<i64> =
            labels.iter().flat_map(|&j| labels.iter().map(move |&k| grading.normalize(deg(k) - deg(j)))).collect();
        let m = a.mult();
        let mut blocks = Vec::new();
        let mut elements = Vec::new();
        let mut degrees = Vec::new();
        for &d in &shifts {
            let mut unknowns = Vec::new();
            for side in 0..2u8 {
                for &j in &labels {
                    for &k in &labels {
                        if model.grading.normalize(deg(k) - deg(j)) == d {
                            unknowns.push((side, j, k));
                        }
                    }
                }
            }
            let index: HashMap<Unknown, usize> = unknowns.iter().enumerate().map(|(i, u)| (*u, i)).collect();
            // ρ(x)·y - x·λ(y) = 0, one row per (x, y, output label)
            let mut rows: Vec<SparseRow> = Vec::new();
            for &x in &labels {
                for &y in &labels {
                    let mut eq: BTreeMap<(Label, usize), Scalar> = BTreeMap::new();
                    for &k in &labels {
                        if let Some(&u) = index.get(&(1, x, k)) {
                            for (out, c) in m.apply(&[k, y]) {
                                let e = eq.entry((out[0], u)).or_insert_with(|| model.zero());
                                *e = &*e + &c;
                            }
                        }
                        if let Some(&u) = index.get(&(0, y, k)) {
                            for (out, c) in m.apply(&[x, k]) {
                                let e = eq.entry((out[0], u)).or_insert_with(|| model.zero());
                                *e = &*e - &c;
                            }
                        }
                    }
                    let mut by_out: BTreeMap<Label, SparseRow> = BTreeMap::new();
                    for ((out, u), c) in eq {
                        if !c.is_zero() {
                            by_out.entry(out).or_default().push((u, c));
                        }
                    }
                    for (_, mut r) in by_out {
                        r.sort_by_key(|(k, _)| *k);
                        rows.push(r);
                    }
                }
            }
            let kernel = linalg::kernel(&rows, unknowns.len(), &model.one());
            let is_pivot: BTreeSet<usize> = linalg::echelon(&rows, Pivot::First, false).pivots.into_iter().collect();
            let free: Vec<usize> = (0..unknowns.len()).filter(|c| !is_pivot.contains(c)).collect();
            let first_element = elements.len();
            for v in &kernel {
                elements.push(vector_to_multiplier(s, &unknowns, v)?);
                degrees.push(d);
            }
            blocks.push(Block { degree: d, index, free, first_element });
        }
        let names = (0..elements.len()).map(|k| format!("mu{k}")).collect();
        let obj = GradedObject::finite(format!("M({})", a.name()), &model, names, degrees)?;
        let carrier = Shape::of(&obj);
        let mut out = MultiplierMonoid {
            base: a.clone(),
            elements,
            blocks,
            monoid: MonoidStructure::new(Semigroup::unit_object(&model), LinMap::identity(&Shape::unit(&model)))?,
            e1: LinMap::zero(&carrier.tensor(s), s),
            e2: LinMap::zero(&s.tensor(&carrier), s),
            embed: LinMap::zero(s, &carrier),
        };
        let mut mult_entries = Vec::new();
        for (x, mx) in out.elements.iter().enumerate() {
            for (y, my) in out.elements.iter().enumerate() {
                let p = mx.product(my)?;
                let coords = out
                    .coordinates(&p)?
                    .ok_or_else(|| Error::SolveInconsistent("product of multipliers left the solution space".into()))?;
                for (k, c) in coords {
                    mult_entries.push((smallvec![k as Label], smallvec![x as Label, y as Label], c));
                }
            }
        }
        let mult = LinMap::from_entries(carrier.tensor(&carrier), carrier.clone(), mult_entries)?;
        let unit_coords = out
            .coordinates(&Multiplier::unit(a))?
            .ok_or_else(|| Error::SolveInconsistent("identity pair is not a multiplier".into()))?;
        let unit = LinMap::from_entries(
            Shape::unit(&model),
            carrier.clone(),
            unit_coords.into_iter().map(|(k, c)| (smallvec![k as Label], Tuple::new(), c)),
        )?;
        let sg = Semigroup::new(format!("M({})", a.name()), carrier.clone(), mult)?;
        if !sg.certificates().associative() {
            return Err(Error::CertificateFailure("multiplier product is not associative".into()));
        }
        out.monoid = MonoidStructure::new(sg, unit)?;
        let mut e1 = Vec::new();
        let mut e2 = Vec::new();
        for (k, mu) in out.elements.iter().enumerate() {
            for &j in &labels {
                for (o, c) in mu.left.apply(&[j]) {
                    e1.push((o, smallvec![k as Label, j], c));
                }
                for (o, c) in mu.right.apply(&[j]) {
                    e2.push((o, smallvec![j, k as Label], c));
                }
            }
        }
        out.e1 = LinMap::from_entries(carrier.tensor(s), s.clone(), e1)?;
        out.e2 = LinMap::from_entries(s.tensor(&carrier), s.clone(), e2)?;
        let mut emb = Vec::new();
        for &j in &labels {
            let coords = out
                .coordinates(&Multiplier::of_element(a, j))?
                .ok_or_else(|| Error::SolveInconsistent("multiplication is not a multiplier".into()))?;
            for (k, c) in coords {
                emb.push((smallvec![k as Label], smallvec![j], c));
            }
        }
        out.embed = LinMap::from_entries(s.clone(), carrier, emb)?;
        out.verify()?;
        Ok(out)
    }

    pub fn verify(&self) -> Result<()> {
        let s = self.base.carrier();
        let mm = self.monoid.semigroup.mult();
        let c = self.carrier();
        let i = Shape::unit(s.model());
        // e1(m⊗1) = e1(1⊗e1), e2(1⊗m) = e2(e2⊗1)
        let l1 = LinMap::compose(&self.e1, &mm.whisker(&i, s))?;
        let r1 = LinMap::compose(&self.e1, &self.e1.whisker(c, &i))?;
        let l2 = LinMap::compose(&self.e2, &mm.whisker(s, &i))?;
        let r2 = LinMap::compose(&self.e2, &self.e2.whisker(&i, c))?;
        if !LinMap::maps_equal(&l1, &r1)? || !LinMap::maps_equal(&l2, &r2)? {
            return Err(Error::CertificateFailure("evaluation maps are not actions".into()));
        }
        let emb = &self.embed;
        if emb.rank()? != s.dim().unwrap_or(0) {
            return Err(Error::CertificateFailure("i is not injective".into()));
        }
        if !is_multiplicative_map(emb, &self.base, &self.monoid.semigroup)? {
            return Err(Error::CertificateFailure("i is not multiplicative".into()));
        }
        let (a, b) = self.embedding_squares()?;
        if !a || !b {
            return Err(Error::CertificateFailure("i fails to intertwine the evaluation maps".into()));
        }
        Ok(())
    }

    /// `i∘e1 = m∘(1⊗i)` and `i∘e2 = m∘(i⊗1)`.
    pub fn embedding_squares(&self) -> Result<(bool, bool)> {
        let mm = self.monoid.semigroup.mult();
        let c = self.carrier();
        let i = Shape::unit(c.model());
        let l = LinMap::compose(&self.embed, &self.e1)?;
        let r = LinMap::compose(mm, &self.embed.whisker(c, &i))?;
        let l2 = LinMap::compose(&self.embed, &self.e2)?;
        let r2 = LinMap::compose(mm, &self.embed.whisker(&i, c))?;
        Ok((LinMap::maps_equal(&l, &r)?, LinMap::maps_equal(&l2, &r2)?))
    }

    pub fn base(&self) -> &Semigroup {
        &self.base
    }

    pub fn carrier(&self) -> &Shape {
        self.monoid.semigroup.carrier()
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Multiplier] {
        &self.elements
    }

    pub fn degree_of(&self, k: usize) -> i64 {
        self.blocks.iter().rev().find(|b| b.first_element <= k).map(|b| b.degree).unwrap_or(0)
    }

    pub fn monoid(&self) -> &MonoidStructure {
        &self.monoid
    }

    pub fn semigroup(&self) -> &Semigroup {
        &self.monoid.semigroup
    }

    /// `e1: M(A)⊗A -> A`, `μ⊗a ↦ λ(a)`.
    pub fn e1(&self) -> &LinMap {
        &self.e1
    }

    /// `e2: A⊗M(A) -> A`, `a⊗μ ↦ ρ(a)`.
    pub fn e2(&self) -> &LinMap {
        &self.e2
    }

    pub fn embedding(&self) -> &LinMap {
        &self.embed
    }

    /// The evaluation morphism `M(A) ↛ A`.
    pub fn evaluation(&self) -> Result<MMorphism> {
        MMorphism::between(&self.monoid.semigroup, &self.base, self.e1.clone(), self.e2.clone())
    }

    pub fn embedding_is_iso(&self) -> Result<bool> {
        Ok(self.embed.rank()? == self.dim())
    }

    /// Basis elements of `M(A)` spanning a complement of `i(A)`.
    pub fn quotient_witnesses(&self) -> Result<Vec<usize>> {
        let mut rows: Vec<SparseRow> = Vec::new();
        for t in self.base.carrier().basis()? {
            let mut r: SparseRow = self.embed.apply(&t).into_iter().map(|(u, c)| (u[0] as usize, c)).collect();
            r.sort_by_key(|(k, _)| *k);
            rows.push(r);
        }
        let mut rank = linalg::rank(&rows);
        let mut out = Vec::new();
        for k in 0..self.dim() {
            rows.push(vec![(k, self.base.model().one())]);
            let r = linalg::rank(&rows);
            if r > rank {
                rank = r;
                out.push(k);
            } else {
                rows.pop();
            }
        }
        Ok(out)
    }

    /// Coordinates of a pair in the solved basis; `None` if it is not a multiplier.
    pub fn coordinates(&self, mu: &Multiplier) -> Result<Option<Vec<(usize, Scalar)>>> {
        let s = self.base.carrier();
        let mut by_block: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.blocks.len()];
        for (side, map) in [(0u8, &mu.left), (1u8, &mu.right)] {
            for t in s.basis()? {
                for (o, c) in map.apply(&t) {
                    let u = (side, t[0], o[0]);
                    let Some((b, &idx)) = self.blocks.iter().enumerate().find_map(|(b, blk)| blk.index.get(&u).map(|i| (b, i)))
                    else {
                        return Ok(None);
                    };
                    by_block[b].push((idx, c));
                }
            }
        }
        let mut coords = Vec::new();
        for (b, blk) in self.blocks.iter().enumerate() {
            let mut v = std::mem::take(&mut by_block[b]);
            v.sort_by_key(|(k, _)| *k);
            let mut recon: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (pos, &col) in blk.free.iter().enumerate() {
                let Some((_, c)) = v.iter().find(|(k, _)| *k == col) else { continue };
                let elem = blk.first_element + pos;
                coords.push((elem, c.clone()));
                let basis_vec = multiplier_to_vector(&self.elements[elem], blk)?;
                for (k, x) in basis_vec {
                    let e = recon.entry(k).or_insert_with(|| self.base.model().zero());
                    *e = &*e + &(&x * c);
                }
            }
            let recon: SparseRow = recon.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            if recon != v {
                return Ok(None);
            }
        }
        Ok(Some(coords))
    }

    /// The map `X -> M(A)` induced by components `f1: X⊗A -> A`, `f2: A⊗X -> A`.
    pub fn induced_map(&self, x: &Shape, f1: &LinMap, f2: &LinMap) -> Result<Option<LinMap>> {
        let s = self.base.carrier().clone();
        let mut entries = Vec::new();
        for t in x.basis()? {
            let (g1, g2) = (f1.clone(), f2.clone());
            let (ta, tb) = (t.clone(), t.clone());
            let left = LinMap::from_rule(s.clone(), s.clone(), move |a| {
                let mut arg = ta.clone();
                arg.extend_from_slice(a);
                g1.apply(&arg)
            });
            let right = LinMap::from_rule(s.clone(), s.clone(), move |a| {
                let mut arg: Tuple = Tuple::from_slice(a);
                arg.extend_from_slice(&tb);
                g2.apply(&arg)
            });
            let Some(coords) = self.coordinates(&Multiplier { left, right })? else { return Ok(None) };
            for (k, c) in coords {
                entries.push((smallvec![k as Label], t.clone(), c));
            }
        }
        Ok(Some(LinMap::from_entries(x.clone(), self.carrier().clone(), entries)?))
    }

    /// Components `e1(f⊗1)` and `e2(1⊗f)` of a map `f: X -> M(A)`.
    pub fn components_of(&self, f: &LinMap) -> Result<(LinMap, LinMap)> {
        let s = self.base.carrier();
        let i = Shape::unit(s.model());
        Ok((LinMap::compose(&self.e1, &f.whisker(&i, s))?, LinMap::compose(&self.e2, &f.whisker(s, &i))?))
    }
}

fn vector_to_multiplier(s: &Shape, unknowns: &[Unknown], v: &SparseRow) -> Result<Multiplier> {
    // components of a multiplier of nonzero degree shift degrees, so they
    // are built as rules rather than degree-checked tables
    let mut cols: [BTreeMap<Label, Vec<(Tuple, Scalar)>>; 2] = [BTreeMap::new(), BTreeMap::new()];
    for (k, c) in v {
        let (side, j, o) = unknowns[*k];
        cols[side as usize].entry(j).or_default().push((smallvec![o], c.clone()));
    }
    let [left, right] = cols.map(|table| {
        let table: BTreeMap<Label, Column> = table.into_iter().map(|(j, col)| (j, normalize_column(col))).collect();
        LinMap::from_rule(s.clone(), s.clone(), move |t| table.get(&t[0]).cloned().unwrap_or_default())
    });
    Ok(Multiplier { left, right })
}

fn multiplier_to_vector(mu: &Multiplier, blk: &Block) -> Result<SparseRow> {
    let mut v = Vec::new();
    for (side, map) in [(0u8, &mu.left), (1u8, &mu.right)] {
        for (o, j, c) in map.entries() {
            let u = (side, j[0], o[0]);
            let idx = blk.index.get(&u).ok_or_else(|| Error::ShapeMismatch("multiplier outside its block".into()))?;
            v.push((*idx, c));
        }
    }
    v.sort_by_key(|(k, _)| *k);
    Ok(v)
}

/// `g̃: M(A) -> M(B)` for a dense multiplicative `g: A ↛ B`.
pub fn extend(g: &MMorphism, ma: &MultiplierMonoid, mb: &MultiplierMonoid) -> Result<LinMap> {
    let a = ma.base();
    let b = mb.base();
    if !g.target().same_as(b) || !g.source_semigroup().is_some_and(|s| s.same_as(a)) {
        return Err(Error::ShapeMismatch("extension needs g: A ↛ B matching the multiplier monoids".into()));
    }
    let first = extension_components(g, ma, Pivot::First)?;
    let second = extension_components(g, ma, Pivot::Last)?;
    if first.0.to_text() != second.0.to_text() || first.1.to_text() != second.1.to_text() {
        return Err(Error::SolveInconsistent("extension depends on the chosen section".into()));
    }
    if g.flags().multiplicative() != Some(true) || !g.flags().compatible() {
        return Err(Error::SolveInconsistent("g is not a multiplicative morphism".into()));
    }
    let (h1, h2) = first;
    let ext = mb
        .induced_map(ma.carrier(), &h1, &h2)?
        .ok_or_else(|| Error::SolveInconsistent("extended components are not multipliers".into()))?;
    let ghat = mb
        .induced_map(a.carrier(), g.f1(), g.f2())?
        .ok_or_else(|| Error::SolveInconsistent("g does not induce a map into M(B)".into()))?;
    if !LinMap::maps_equal(&LinMap::compose(&ext, ma.embedding())?, &ghat)? {
        return Err(Error::SolveInconsistent("extension does not restrict to g".into()));
    }
    if !is_multiplicative_map(&ext, ma.semigroup(), mb.semigroup())? {
        return Err(Error::SolveInconsistent("extension is not multiplicative".into()));
    }
    if !LinMap::maps_equal(&LinMap::compose(&ext, &ma.monoid().unit)?, &mb.monoid().unit)? {
        return Err(Error::SolveInconsistent("extension is not unital".into()));
    }
    Ok(ext)
}

fn extension_components(g: &MMorphism, ma: &MultiplierMonoid, pivot: Pivot) -> Result<(LinMap, LinMap)> {
    let none = || Error::SolveInconsistent("g is not dense".into());
    let s1 = g.f1().eliminated_section(pivot)?.ok_or_else(none)?;
    let s2 = g.f2().eliminated_section(pivot)?.ok_or_else(none)?;
    let a = ma.base().carrier();
    let b = g.target().carrier();
    let mc = ma.carrier();
    let i = Shape::unit(a.model());
    // g̃1 = g1(e1⊗1)(1⊗s1), g̃2 = g2(1⊗e2)(s2⊗1)
    let h1 = LinMap::chain(&[&s1.whisker(mc, &i), &ma.e1().whisker(&i, b), g.f1()])?;
    let h2 = LinMap::chain(&[&s2.whisker(&i, mc), &ma.e2().whisker(b, &i), g.f2()])?;
    let l1 = LinMap::compose(&h1, &g.f1().whisker(mc, &i))?;
    let r1 = LinMap::compose(g.f1(), &ma.e1().whisker(&i, b))?;
    let l2 = LinMap::compose(&h2, &g.f2().whisker(&i, mc))?;
    let r2 = LinMap::compose(g.f2(), &ma.e2().whisker(b, &i))?;
    if !LinMap::maps_equal(&l1, &r1)? || !LinMap::maps_equal(&l2, &r2)? {
        return Err(Error::SolveInconsistent("extension squares do not commute".into()));
    }
    Ok((h1, h2))
}

/// Multipliers of a windowed semigroup, given by name.
#[derive(Clone, Debug)]
pub struct NamedMultipliers {
    pub base: Semigroup,
    pub named: Vec<(String, Multiplier)>,
}

impl NamedMultipliers {
    /// The unit `(1,1)` and `i(δ_s)` for every check label `s`.
    pub fn standard(a: &Semigroup) -> NamedMultipliers {
        let s = a.carrier();
        let mut named = vec![("unit".to_string(), Multiplier::unit(a))];
        for l in s.factors()[0].check_labels() {
            named.push((format!("i({l})"), Multiplier::of_element(a, l)));
        }
        NamedMultipliers { base: a.clone(), named }
    }

    /// First incompatible multiplier and its witness.
    pub fn compatibility_failure(&self) -> Result<Option<(String, Tuple)>> {
        for (n, mu) in &self.named {
            if let Some(w) = mu.compatibility_witness(&self.base)? {
                return Ok(Some((n.clone(), w)));
            }
        }
        Ok(None)
    }

    /// The unit acts on every probe label, while each `i(δ_s)` with `s` in
    /// the check window kills it; so the unit is no combination of them.
    pub fn unit_outside_image(&self, probes: &[Label]) -> Result<bool> {
        let unit = Multiplier::unit(&self.base);
        for &p in probes {
            let moved = unit.left.apply(&[p]);
            if moved.is_empty() {
                return Ok(false);
            }
            for (n, mu) in &self.named {
                if n != "unit" && !mu.left.apply(&[p]).is_empty() {
                    return Ok(false);
                }
            }
        }
        Ok(!probes.is_empty())
    }

    /// The unit is a two-sided unit for the named multipliers.
    pub fn unit_laws(&self) -> Result<bool> {
        let unit = Multiplier::unit(&self.base);
        for (_, mu) in &self.named {
            if !unit.product(mu)?.same_as(mu)? || !mu.product(&unit)?.same_as(mu)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::Model;
    use crate::scalar::FieldSpec;
    use std::sync::Arc;
    use rand::{Rng, SeedableRng};

    fn algebra(model: &Arc<Model>, name: &str, dim: usize, table: &[(usize, usize, usize, i64)]) -> Semigroup {
        let a = Shape::of(&GradedObject::plain(name, model, dim));
        let entries = table
            .iter()
            .map(|&(i, j, k, c)| (smallvec![k as i64], smallvec![i as i64, j as i64], Scalar::from_int(model.field, c)));
        let m = LinMap::from_entries(a.tensor(&a), a.clone(), entries).unwrap();
        Semigroup::new(name, a, m).unwrap()
    }

    fn kz2(m: &Arc<Model>) -> Semigroup {
        algebra(m, "kZ2", 2, &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1)])
    }

    fn q() -> Arc<Model> {
        Model::ungraded(FieldSpec::Rationals)
    }

    #[test]
    fn unital_algebra_has_iso_embedding() {
        let m = q();
        let a = kz2(&m);
        let mm = MultiplierMonoid::compute(&a).unwrap();
        assert_eq!(mm.dim(), 2);
        assert!(mm.embedding_is_iso().unwrap());
        assert!(mm.quotient_witnesses().unwrap().is_empty());
        let i1 = LinMap::compose(mm.embedding(), &LinMap::from_entries(Shape::unit(&m), a.carrier().clone(), [(smallvec![0], Tuple::new(), m.one())]).unwrap()).unwrap();
        assert!(LinMap::maps_equal(&i1, &mm.monoid().unit).unwrap());
        assert_eq!(mm.embedding_squares().unwrap(), (true, true));
        assert!(mm.evaluation().unwrap().flags().is_morphism());
    }

    #[test]
    fn idempotent_line() {
        let m = q();
        let a = algebra(&m, "x", 1, &[(0, 0, 0, 1)]);
        let mm = MultiplierMonoid::compute(&a).unwrap();
        assert_eq!(mm.dim(), 1);
        let mu = &mm.elements()[0];
        assert_eq!(mu.left.apply(&[0]).len(), 1);
        assert!(LinMap::maps_equal(&mu.left, &mu.right).unwrap());
    }

    #[test]
    fn zero_multiplication_rejected() {
        let a = algebra(&q(), "z", 1, &[]);
        assert!(matches!(MultiplierMonoid::compute(&a), Err(Error::CertificateFailure(_))));
    }

    #[test]
    fn induced_map_round_trip() {
        let m = q();
        let a = algebra(&m, "KZ3", 3, &[(0, 0, 0, 1), (1, 1, 1, 1), (2, 2, 2, 1)]);
        let mm = MultiplierMonoid::compute(&a).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for dim in 1..=3 {
            let x = Shape::of(&GradedObject::plain("X", &m, dim));
            let entries: Vec<_> = (0..dim)
                .flat_map(|i| (0..mm.dim()).map(move |k| (i, k)))
                .map(|(i, k)| (smallvec![k as i64], smallvec![i as i64], m.int(rng.gen_range(-2..=2))))
                .collect();
            let f = LinMap::from_entries(x.clone(), mm.carrier().clone(), entries).unwrap();
            let (f1, f2) = mm.components_of(&f).unwrap();
            let back = mm.induced_map(&x, &f1, &f2).unwrap().unwrap();
            assert!(LinMap::maps_equal(&back, &f).unwrap());
        }
    }

    #[test]
    fn extension_of_identity_and_automorphism() {
        let m = q();
        let a = kz2(&m);
        let mm = MultiplierMonoid::compute(&a).unwrap();
        let id = MMorphism::identity(&a).unwrap();
        let ext = extend(&id, &mm, &mm).unwrap();
        assert!(LinMap::maps_equal(&ext, &LinMap::identity(mm.carrier())).unwrap());

        let s = a.carrier();
        let flip = LinMap::from_entries(s.clone(), s.clone(), [(smallvec![0], smallvec![0], m.one()), (smallvec![1], smallvec![1], m.int(-1))]).unwrap();
        let g = MMorphism::sharp(&flip, &a, &a).unwrap();
        let ext = extend(&g, &mm, &mm).unwrap();
        let lhs = LinMap::compose(&ext, mm.embedding()).unwrap();
        let rhs = LinMap::compose(mm.embedding(), &flip).unwrap();
        assert!(LinMap::maps_equal(&lhs, &rhs).unwrap());

        let bad_f1 = g.f1().with_added_entry(&smallvec![1, 0], &smallvec![0], &m.one());
        let bad = MMorphism::between(&a, &a, bad_f1, g.f2().clone()).unwrap();
        assert!(matches!(extend(&bad, &mm, &mm), Err(Error::SolveInconsistent(_))));
    }

    #[test]
    fn multiplicative_maps_match_multiplicative_morphisms() {
        let m = q();
        let a = kz2(&m);
        let mm = MultiplierMonoid::compute(&a).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut tested = 0;
        let mut positive = 0;
        while tested < 20 {
            let table: Vec<_> = (0..2)
                .flat_map(|i| (0..2).flat_map(move |j| (0..2).map(move |k| (i, j, k))))
                .map(|(i, j, k)| (i, j, k, rng.gen_range(-1..=1)))
                .collect();
            let b = algebra(&m, "B", 2, &table);
            if !b.certificates().associative() {
                continue;
            }
            tested += 1;
            let entries: Vec<_> = (0..2)
                .flat_map(|i| (0..2).map(move |k| (i, k)))
                .filter_map(|(i, k)| {
                    let v = rng.gen_range(-1..=1);
                    (v != 0).then(|| (smallvec![k as i64], smallvec![i as i64], m.int(v)))
                })
                .collect();
            let mut f = LinMap::from_entries(b.carrier().clone(), mm.carrier().clone(), entries).unwrap();
            if tested % 3 == 0 {
                f = LinMap::zero(b.carrier(), mm.carrier());
            }
            let (f1, f2) = mm.components_of(&f).unwrap();
            let morph = MMorphism::between(&b, &a, f1, f2).unwrap();
            let mult_map = is_multiplicative_map(&f, &b, mm.semigroup()).unwrap();
            assert_eq!(Some(mult_map), morph.flags().multiplicative());
            positive += mult_map as usize;
        }
        assert!(positive > 0);
    }
}
