//! Built-in examples.

use std::sync::Arc;

use smallvec::smallvec;

use crate::bimonoid::BimonoidData;
use crate::error::{Error, Result};
use crate::graded::{GradedObject, GradingGroup, Label, Model, Shape, Tuple};
use crate::linmap::{single, Column, LinMap};
use crate::monoidal::product_mult;
use crate::scalar::{find_root_of_unity, FieldSpec, Scalar};
use crate::semigroup::Semigroup;

pub const EXAMPLES: [&str; 5] = ["fnalg:Z2", "fnalg:Z3", "grpalg:Z2", "qline:5:4", "kz:W8"];

/// Check-window margin of windowed carriers: one unit of support growth per
/// composite depth, depth at most three.
pub const KZ_MARGIN: i64 = 3;

fn plain_object(model: &Arc<Model>, name: &str, prefix: &str, n: usize) -> Shape {
    let labels = (0..n).map(|i| format!("{prefix}{i}")).collect();
    Shape::of(&GradedObject::finite(name, model, labels, vec![0; n]).expect("distinct labels"))
}

fn table(dom: &Shape, cod: &Shape, f: impl Fn(&[Label]) -> Vec<(Tuple, Scalar)>) -> Result<LinMap> {
    let mut entries = Vec::new();
    for t in dom.basis()? {
        for (o, c) in f(&t) {
            entries.push((o, t.clone(), c));
        }
    }
    LinMap::from_entries(dom.clone(), cod.clone(), entries)
}

/// Pointwise functions on `Z/n`: `t1(δ_g⊗δ_h) = δ_{g-h}⊗δ_h`, `t2(δ_g⊗δ_h) = δ_g⊗δ_{h-g}`.
pub fn function_algebra(n: usize, field: FieldSpec) -> Result<BimonoidData> {
    if n == 0 || n > 12 {
        return Err(Error::UnknownExample(format!("group order {n} outside 1..=12")));
    }
    let model = Model::ungraded(field);
    let a = plain_object(&model, &format!("K(Z{n})"), "d", n);
    let a2 = a.tensor(&a);
    let i = Shape::unit(&model);
    let one = model.one();
    let nn = n as Label;
    let m = table(&a2, &a, |t| if t[0] == t[1] { vec![(smallvec![t[0]], one.clone())] } else { vec![] })?;
    let t1 = table(&a2, &a2, |t| vec![(smallvec![(t[0] - t[1]).rem_euclid(nn), t[1]], one.clone())])?;
    let t2 = table(&a2, &a2, |t| vec![(smallvec![t[0], (t[1] - t[0]).rem_euclid(nn)], one.clone())])?;
    let e = table(&a, &i, |t| if t[0] == 0 { vec![(Tuple::new(), one.clone())] } else { vec![] })?;
    let base = Semigroup::new(format!("K(Z{n})"), a, m)?;
    BimonoidData::new(format!("fnalg:Z{n}"), base, t1, t2, e)
}

/// Group algebra of `Z/n`: `t1(g⊗h) = g⊗gh`, `t2(g⊗h) = gh⊗h`, `e(g) = 1`.
pub fn group_algebra(n: usize, field: FieldSpec) -> Result<BimonoidData> {
    if n == 0 || n > 12 {
        return Err(Error::UnknownExample(format!("group order {n} outside 1..=12")));
    }
    let model = Model::ungraded(field);
    let a = plain_object(&model, &format!("kZ{n}"), "g", n);
    let a2 = a.tensor(&a);
    let i = Shape::unit(&model);
    let one = model.one();
    let nn = n as Label;
    let m = table(&a2, &a, |t| vec![(smallvec![(t[0] + t[1]) % nn], one.clone())])?;
    let t1 = table(&a2, &a2, |t| vec![(smallvec![t[0], (t[0] + t[1]) % nn], one.clone())])?;
    let t2 = table(&a2, &a2, |t| vec![(smallvec![(t[0] + t[1]) % nn, t[1]], one.clone())])?;
    let e = table(&a, &i, |_| vec![(Tuple::new(), one.clone())])?;
    let base = Semigroup::new(format!("kZ{n}"), a, m)?;
    BimonoidData::new(format!("grpalg:Z{n}"), base, t1, t2, e)
}

/// Gaussian binomial `(n choose k)_q`.
pub fn q_binomial(n: u64, k: u64, q: &Scalar) -> Scalar {
    let f = q.field();
    let mut row = vec![Scalar::one(f)];
    for i in 1..=n as usize {
        let mut next = vec![Scalar::one(f); i + 1];
        for j in 1..i {
            let qj = q.pow(j as i64).expect("nonzero q");
            next[j] = &row[j - 1] + &(&qj * &row[j]);
        }
        row = next;
    }
    row.get(k as usize).cloned().unwrap_or_else(|| Scalar::zero(f))
}

/// `F_p[x]/(x^N)` with `deg x = 1`, braiding `q^{mn}` for `q` of order `N`,
/// and `x` primitive.
pub fn q_line(p: u64, n: u64) -> Result<BimonoidData> {
    let field = FieldSpec::prime(p)?;
    let q = find_root_of_unity(field, n)?.ok_or(Error::NoRootOfUnity { field: field.to_string(), n })?;
    q_line_with(p, n, &q)
}

pub fn q_line_with(p: u64, n: u64, q: &Scalar) -> Result<BimonoidData> {
    let field = FieldSpec::prime(p)?;
    if n < 2 {
        return Err(Error::UnknownExample(format!("q-line needs N >= 2, got {n}")));
    }
    for k in 1..n {
        if !q_binomial(n, k, q).is_zero() {
            return Err(Error::QBinomialNonzero { n, k });
        }
    }
    let model = Model::new(field, GradingGroup::integers(q.clone())?)?;
    let nn = n as Label;
    let labels = (0..n).map(|i| format!("x{i}")).collect();
    let obj = GradedObject::finite(format!("L({p},{n})"), &model, labels, (0..nn).collect())?;
    let a = Shape::of(&obj);
    let a2 = a.tensor(&a);
    let i = Shape::unit(&model);
    let one = model.one();
    let m = table(&a2, &a, |t| if t[0] + t[1] < nn { vec![(smallvec![t[0] + t[1]], one.clone())] } else { vec![] })?;
    let base = Semigroup::new(format!("L({p},{n})"), a.clone(), m.clone())?;
    // Δ(x^k) = Δ(x)^k in the braided product A⊗A
    let m2 = product_mult(&base, &base)?;
    let dx: Vec<(Tuple, Scalar)> = vec![(smallvec![0, 1], one.clone()), (smallvec![1, 0], one.clone())];
    let mut powers: Vec<Vec<(Tuple, Scalar)>> = vec![vec![(smallvec![0, 0], one.clone())]];
    for k in 1..=n as usize {
        let mut acc = Vec::new();
        for (u, a_) in &powers[k - 1] {
            for (v, b_) in &dx {
                let mut t = u.clone();
                t.extend_from_slice(v);
                m2.apply_into(&t, &(a_ * b_), &mut acc);
            }
        }
        powers.push(crate::linmap::normalize_column(acc).into_vec());
    }
    if !powers[n as usize].is_empty() {
        return Err(Error::QBinomialNonzero { n, k: 0 });
    }
    let delta = table(&a, &a2, |t| powers[t[0] as usize].clone())?;
    let id = LinMap::identity(&a);
    let t1 = LinMap::compose(&LinMap::tensor(&id, &m)?, &LinMap::tensor(&delta, &id)?)?;
    let t2 = LinMap::compose(&LinMap::tensor(&m, &id)?, &LinMap::tensor(&id, &delta)?)?;
    let e = table(&a, &i, |t| if t[0] == 0 { vec![(Tuple::new(), one.clone())] } else { vec![] })?;
    BimonoidData::new(format!("qline:{p}:{n}"), base, t1, t2, e)
}

fn monomial(t: Tuple, one: &Scalar) -> Column {
    single(t, one.clone())
}

/// Finitely supported functions on `Z` on a check window of radius `W - 3`.
pub fn windowed_kz(window: i64) -> Result<BimonoidData> {
    let needed = 2 * KZ_MARGIN + 1;
    if window < needed {
        return Err(Error::WindowTooSmall { window, needed });
    }
    let model = Model::ungraded(FieldSpec::Rationals);
    let obj = GradedObject::windowed(format!("K(Z)[W{window}]"), &model, window, KZ_MARGIN);
    let a = Shape::of(&obj);
    let a2 = a.tensor(&a);
    let i = Shape::unit(&model);
    let one = model.one();
    let o = one.clone();
    let diag = {
        let o = one.clone();
        LinMap::from_rule(a.clone(), a2.clone(), move |t| monomial(smallvec![t[0], t[0]], &o))
    };
    let m = LinMap::from_rule_with_section(
        a2.clone(),
        a.clone(),
        move |t| if t[0] == t[1] { monomial(smallvec![t[0]], &o) } else { Column::new() },
        Some(diag),
    );
    let t1 = shear(&a2, &one, false, false);
    let t2 = shear(&a2, &one, true, false);
    let e = counit_kz(&a, &i, 0, &[(0, one.clone())]);
    let base = Semigroup::new(format!("K(Z)[W{window}]"), a, m)?;
    BimonoidData::new(format!("kz:W{window}"), base, t1, t2, e)
}

/// `δ_s⊗δ_t ↦ δ_{s-t}⊗δ_t` (or `δ_s⊗δ_{t-s}` when `right`), with its inverse as section.
fn shear(a2: &Shape, one: &Scalar, right: bool, inverse: bool) -> LinMap {
    let o = one.clone();
    let sign = if inverse { 1 } else { -1 };
    let rule = move |t: &[Label]| {
        if right {
            monomial(smallvec![t[0], t[1] + sign * t[0]], &o)
        } else {
            monomial(smallvec![t[0] + sign * t[1], t[1]], &o)
        }
    };
    if inverse {
        LinMap::from_rule(a2.clone(), a2.clone(), rule)
    } else {
        LinMap::from_rule_with_section(a2.clone(), a2.clone(), rule, Some(shear(a2, one, right, true)))
    }
}

/// A counit-like functional on `K(Z)` with finitely many nonzero values,
/// sectioned through the label `pick`.
pub fn counit_kz(a: &Shape, i: &Shape, pick: Label, values: &[(Label, Scalar)]) -> LinMap {
    let vals: Vec<(Label, Scalar)> = values.iter().filter(|(_, c)| !c.is_zero()).cloned().collect();
    let section = vals.iter().find(|(l, _)| *l == pick).or(vals.first()).map(|(l, c)| {
        let (l, inv) = (*l, c.inverse().expect("nonzero"));
        LinMap::from_rule(i.clone(), a.clone(), move |_| single(smallvec![l], inv.clone()))
    });
    LinMap::from_rule_with_section(
        a.clone(),
        i.clone(),
        move |t| match vals.iter().find(|(l, _)| *l == t[0]) {
            Some((_, c)) => single(Tuple::new(), c.clone()),
            None => Column::new(),
        },
        section,
    )
}

/// Parse `fnalg:Zn`, `grpalg:Zn`, `qline:p:N`, `kz:Wn`.
pub fn example(name: &str, field: Option<FieldSpec>) -> Result<BimonoidData> {
    let field_or_q = field.unwrap_or(FieldSpec::Rationals);
    let bad = || Error::UnknownExample(name.to_string());
    let parts: Vec<&str> = name.split(':').collect();
    match parts.as_slice() {
        ["fnalg", g] => function_algebra(g.strip_prefix('Z').and_then(|n| n.parse().ok()).ok_or_else(bad)?, field_or_q),
        ["grpalg", g] => group_algebra(g.strip_prefix('Z').and_then(|n| n.parse().ok()).ok_or_else(bad)?, field_or_q),
        ["qline", p, n] => q_line(p.parse().map_err(|_| bad())?, n.parse().map_err(|_| bad())?),
        ["kz", w] => windowed_kz(w.strip_prefix('W').and_then(|n| n.parse().ok()).ok_or_else(bad)?),
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn function_algebra_z2_t1() {
        let d = function_algebra(2, FieldSpec::Rationals).unwrap();
        let col = d.t1.apply(&[0, 1]);
        assert_eq!(col.len(), 1);
        assert_eq!(col[0].0.as_slice(), &[1, 1]);
        assert!(d.e.is_surjective());
    }

    #[test]
    fn group_algebra_z2_t1() {
        let d = group_algebra(2, FieldSpec::Rationals).unwrap();
        assert_eq!(d.t1.apply(&[1, 1])[0].0.as_slice(), &[1, 0]);
        assert!(d.base.mult().is_surjective());
    }

    #[test]
    fn q_binomials() {
        let f5 = FieldSpec::Prime(5);
        let q = Scalar::from_int(f5, 2);
        assert_eq!(q_binomial(2, 1, &q), Scalar::from_int(f5, 3));
        assert!(matches!(q_line_with(5, 2, &q), Err(Error::QBinomialNonzero { n: 2, k: 1 })));
        for k in 1..4 {
            assert!(q_binomial(4, k, &q).is_zero());
        }
        assert!(matches!(q_line(5, 3), Err(Error::NoRootOfUnity { .. })));
    }

    #[test]
    fn q_line_braiding() {
        let d = q_line(5, 4).unwrap();
        let a = d.base.carrier();
        let c = LinMap::braiding(a, a);
        assert_eq!(c.apply(&[1, 1])[0].1, Scalar::from_int(FieldSpec::Prime(5), 2));
    }

    #[test]
    fn windowed_builder() {
        assert!(matches!(windowed_kz(4), Err(Error::WindowTooSmall { .. })));
        let d = windowed_kz(8).unwrap();
        assert!(d.base.is_object());
        let s = 9;
        for x in -5..=5 {
            assert!(d.base.mult().apply(&[x, s]).is_empty());
        }
        assert!(d.t1.is_surjective());
    }

    #[test]
    fn parse_names() {
        for n in EXAMPLES {
            if n.starts_with("kz") {
                continue;
            }
            assert_eq!(example(n, None).unwrap().name, n);
        }
        assert!(example("nope", None).is_err());
    }
}
