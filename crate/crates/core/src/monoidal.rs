//! Monoidal products of semigroups and of morphisms `A ↛ B`.

use crate::error::{Error, Result};
use crate::linmap::LinMap;
use crate::mcat::{MMorphism, Source};
use crate::semigroup::Semigroup;

/// `(m⊗m')∘(1⊗c⊗1)` on `A⊗B⊗A⊗B`.
pub fn product_mult(a: &Semigroup, b: &Semigroup) -> Result<LinMap> {
    let (sa, sb) = (a.carrier(), b.carrier());
    let mid = LinMap::braiding(sb, sa).whisker(sa, sb);
    LinMap::compose(&LinMap::tensor(a.mult(), b.mult())?, &mid)
}

/// `A⊗B` with the product multiplication, re-certified.
pub fn tensor_semigroup(a: &Semigroup, b: &Semigroup) -> Result<Semigroup> {
    if a.carrier().arity() == 0 {
        return Ok(b.clone());
    }
    if b.carrier().arity() == 0 {
        return Ok(a.clone());
    }
    let carrier = a.carrier().tensor(b.carrier());
    let out = Semigroup::new(format!("{}⊗{}", a.name(), b.name()), carrier, product_mult(a, b)?)?;
    if a.is_object() && b.is_object() && !out.is_object() {
        return Err(Error::CertificateFailure(format!(
            "product {} lost a certificate: {:?}",
            out.name(),
            out.certificates()
        )));
    }
    Ok(out)
}

/// `f ⊗ f'`: components `(f1⊗f1')(1⊗c⊗1)` and `(f2⊗f2')(1⊗c⊗1)`.
pub fn tensor_mmorphism(f: &MMorphism, g: &MMorphism) -> Result<MMorphism> {
    let (a, a2) = (f.source().shape(), g.source().shape());
    let (b, b2) = (f.target().carrier(), g.target().carrier());
    let c1 = LinMap::braiding(a2, b).whisker(a, b2);
    let c2 = LinMap::braiding(b2, a).whisker(b, a2);
    let h1 = LinMap::compose(&LinMap::tensor(f.f1(), g.f1())?, &c1)?;
    let h2 = LinMap::compose(&LinMap::tensor(f.f2(), g.f2())?, &c2)?;
    let source = match (f.source(), g.source()) {
        (Source::Semigroup(x), Source::Semigroup(y)) => Source::Semigroup(tensor_semigroup(x, y)?),
        _ => Source::Bare(a.tensor(a2)),
    };
    let target = tensor_semigroup(f.target(), g.target())?;
    let out = MMorphism::new(source, target, h1, h2)?;
    let (ff, gf, hf) = (f.flags(), g.flags(), out.flags());
    let lost = (ff.compatible() && gf.compatible() && !hf.compatible())
        || (ff.dense && gf.dense && !hf.dense)
        || (ff.multiplicative() == Some(true) && gf.multiplicative() == Some(true) && hf.multiplicative() != Some(true));
    if lost {
        return Err(Error::CertificateFailure(format!("tensor of morphisms lost a flag: {hf:?}")));
    }
    Ok(out)
}
