//! Seeded single-entry perturbations of `(t1, t2, e)`.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bimonoid::{check_equivalence, evaluate, BimonoidData, Evaluation, Options, Reuse, Verdict, E, T1, T2};
use crate::error::Result;
use crate::graded::{Shape, Tuple};
use crate::linmap::{single, Column, LinMap};
use crate::scalar::{FieldSpec, Scalar};

pub const DEFAULT_MUTATIONS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    T1,
    T2,
    E,
}

impl Target {
    pub fn mask(self) -> u8 {
        match self {
            Target::T1 => T1,
            Target::T2 => T2,
            Target::E => E,
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::T1 => "t1",
            Target::T2 => "t2",
            Target::E => "e",
        })
    }
}

/// Add `delta` to the `(output, input)` entry of one structure map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mutation {
    pub target: Target,
    pub input: Tuple,
    pub output: Tuple,
    pub delta: Scalar,
}

impl Mutation {
    pub fn describe(&self, data: &BimonoidData) -> String {
        let map = self.map_of(data);
        format!(
            "{} {} <- {} : {}",
            self.target,
            map.cod().format_tuple(&self.output),
            map.dom().format_tuple(&self.input),
            DeltaFmt(&self.delta)
        )
    }

    fn map_of<'a>(&self, data: &'a BimonoidData) -> &'a LinMap {
        match self.target {
            Target::T1 => &data.t1,
            Target::T2 => &data.t2,
            Target::E => &data.e,
        }
    }

    pub fn apply(&self, data: &BimonoidData) -> Result<BimonoidData> {
        let changed = perturb(self.map_of(data), &self.input, &self.output, &self.delta);
        let (mut t1, mut t2, mut e) = (data.t1.clone(), data.t2.clone(), data.e.clone());
        match self.target {
            Target::T1 => t1 = changed,
            Target::T2 => t2 = changed,
            Target::E => e = changed,
        }
        data.with_maps(t1, t2, e)
    }
}

struct DeltaFmt<'a>(&'a Scalar);

impl fmt::Display for DeltaFmt<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_negative_rational() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "+{}", self.0)
        }
    }
}

/// `f + delta·(output ⊗ input*)`. Lazy maps keep a section when one can be
/// updated in closed form: rank-one inverse update for invertible endomaps,
/// rescaling for functionals.
pub fn perturb(f: &LinMap, input: &Tuple, output: &Tuple, delta: &Scalar) -> LinMap {
    let g = f.with_added_entry(input, output, delta);
    if g.dom().is_finite() {
        return g;
    }
    let Some(s) = f.section() else { return g };
    let coef = |col: &Column, t: &Tuple| col.iter().find(|(u, _)| u == t).map(|(_, c)| c.clone());
    if g.cod().arity() == 0 {
        // functional: rescale s(1), or fall back to the perturbed basis vector
        let unit = Tuple::new();
        let s1 = s.apply(&unit);
        let one = Scalar::one(g.dom().field());
        let at_s1 = &one + &(delta * &coef(&s1, input).unwrap_or_else(|| Scalar::zero(delta.field())));
        let pick: Option<Column> = if !at_s1.is_zero() {
            let inv = at_s1.inverse().expect("nonzero");
            Some(s1.iter().map(|(t, c)| (t.clone(), c * &inv)).collect())
        } else {
            let v = g.apply(input);
            coef(&v, &unit).map(|c| single(input.clone(), c.inverse().expect("nonzero")))
        };
        return match pick {
            Some(col) => {
                let sec = LinMap::from_rule(g.cod().clone(), g.dom().clone(), move |_| col.clone());
                g.with_section(sec)
            }
            None => g,
        };
    }
    // s is a two-sided inverse P⁻¹; (P + δ e_o e_iᵀ)⁻¹ y = P⁻¹y − δ·(P⁻¹y)_i/(1+δa) · P⁻¹e_o
    let u = s.apply(output);
    let a = coef(&u, input).unwrap_or_else(|| Scalar::zero(delta.field()));
    let denom = &Scalar::one(delta.field()) + &(delta * &a);
    if denom.is_zero() {
        return g;
    }
    let scale = delta * &denom.inverse().expect("nonzero");
    let (inp, s2) = (input.clone(), s.clone());
    let sec = LinMap::from_rule(g.cod().clone(), g.dom().clone(), move |y| {
        let v = s2.apply(y);
        match coef(&v, &inp) {
            None => v,
            Some(c) => {
                let k = &c * &scale;
                let mut acc: Vec<(Tuple, Scalar)> = v.into_vec();
                acc.extend(u.iter().map(|(t, x)| (t.clone(), (x * &k).negate())));
                crate::linmap::normalize_column(acc)
            }
        }
    });
    g.with_section(sec)
}

fn random_delta(rng: &mut ChaCha8Rng, field: FieldSpec) -> Scalar {
    match field {
        FieldSpec::Rationals => {
            let v = [-3i64, -2, -1, 1, 2, 3];
            Scalar::from_int(field, *v.choose(rng).expect("nonempty"))
        }
        FieldSpec::Prime(p) => Scalar::from_int(field, rng.gen_range(1..p) as i64),
    }
}

fn pick_entry(rng: &mut ChaCha8Rng, dom: &Shape, cod: &Shape) -> Option<(Tuple, Tuple)> {
    let inputs = dom.check_tuples();
    let outputs = cod.check_tuples();
    for _ in 0..64 {
        let i = inputs.choose(rng)?;
        let deg = dom.degree(i);
        let same: Vec<&Tuple> = outputs.iter().filter(|o| cod.degree(o) == deg).collect();
        if let Some(o) = same.choose(rng) {
            return Some((i.clone(), (*o).clone()));
        }
    }
    None
}

/// `count` degree-preserving mutations drawn from `seed` on stream `stream`.
pub fn generate(data: &BimonoidData, seed: u64, stream: u64, count: usize) -> Vec<Mutation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let field = data.base.carrier().field();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let target = [Target::T1, Target::T2, Target::E][rng.gen_range(0..3)];
        let map = match target {
            Target::T1 => &data.t1,
            Target::T2 => &data.t2,
            Target::E => &data.e,
        };
        let Some((input, output)) = pick_entry(&mut rng, map.dom(), map.cod()) else { continue };
        out.push(Mutation { target, input, output, delta: random_delta(&mut rng, field) });
    }
    out
}

#[derive(Clone, Debug)]
pub struct MutantResult {
    pub mutation: Mutation,
    pub label: String,
    pub verdict: Verdict,
    pub violations: Vec<&'static str>,
}

#[derive(Clone, Debug)]
pub struct Campaign {
    pub example: String,
    pub base: Evaluation,
    pub mutants: Vec<MutantResult>,
}

impl Campaign {
    pub fn count(&self, f: impl Fn(&Verdict) -> bool) -> usize {
        self.mutants.iter().filter(|m| f(&m.verdict)).count()
    }

    pub fn agree_fail(&self) -> usize {
        self.count(|v| matches!(v, Verdict::AgreeFail { .. }))
    }

    pub fn agree_pass(&self) -> usize {
        self.count(|v| *v == Verdict::AgreePass)
    }

    pub fn disagree(&self) -> usize {
        self.count(|v| matches!(v, Verdict::Disagree { .. }))
    }

    pub fn violations(&self) -> usize {
        self.mutants.iter().map(|m| m.violations.len()).sum::<usize>() + self.base.violations().len()
    }
}

/// Evaluate the example and `count` seeded mutants of it.
pub fn run_campaign(data: &BimonoidData, seed: u64, stream: u64, count: usize) -> Result<Campaign> {
    let base = check_equivalence(data)?;
    let mut mutants = Vec::with_capacity(count);
    for m in generate(data, seed, stream, count) {
        let mutated = m.apply(data)?;
        let opts = Options { short_circuit: true, reuse: Some(Reuse { base: &base, changed: m.target.mask() }) };
        let ev = evaluate(&mutated, opts)?;
        let violations = ev.violations().iter().map(|i| i.name).collect();
        mutants.push(MutantResult { label: m.describe(data), mutation: m, verdict: ev.verdict, violations });
    }
    Ok(Campaign { example: data.name.clone(), base, mutants })
}
