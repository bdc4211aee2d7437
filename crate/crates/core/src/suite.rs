//! The full deterministic suite: built-in examples with mutation campaigns,
//! category and monoidal laws, multiplier monoids, morphisms and the
//! non-degeneracy oracle.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use smallvec::smallvec;

use crate::bimonoid::{check_equivalence, BimonoidData, Verdict};
use crate::error::{Error, Result};
use crate::graded::{GradedObject, Model, Shape, Tuple};
use crate::linalg::Pivot;
use crate::linmap::LinMap;
use crate::mcat::MMorphism;
use crate::monoidal::{tensor_mmorphism, tensor_semigroup};
use crate::morphism::{check_comonoid_morphism, check_mbm_morphism, check_sharp_morphism_criterion, sharp_cases};
use crate::multiplier::{MultiplierMonoid, NamedMultipliers};
use crate::mutation::{run_campaign, Campaign};
use crate::scalar::{FieldSpec, Scalar};
use crate::semigroup::{annihilator_dims, find_unit, Semigroup};
use crate::zoo;

/// Named boolean outcomes plus a text log.
#[derive(Clone, Debug, Default)]
pub struct Section {
    pub title: String,
    pub log: String,
    pub checks: Vec<(String, bool)>,
}

impl Section {
    fn new(title: &str) -> Section {
        Section { title: title.to_string(), ..Section::default() }
    }

    fn check(&mut self, key: impl Into<String>, ok: bool) {
        let key = key.into();
        let _ = writeln!(self.log, "{key} {}", if ok { "PASS" } else { "FAIL" });
        self.checks.push((key, ok));
    }

    fn note(&mut self, line: impl AsRef<str>) {
        self.log.push_str(line.as_ref());
        self.log.push('\n');
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

// ---------------------------------------------------------------------------
// examples and campaigns

pub fn campaign_section(c: &Campaign) -> Section {
    let mut s = Section::new(&format!("example {}", c.example));
    s.log.push_str(&c.base.to_report().to_string());
    s.note(format!("VERDICT {}", c.base.verdict));
    for (k, m) in c.mutants.iter().enumerate() {
        let extra = if m.violations.is_empty() { String::new() } else { format!(" VIOLATES {}", m.violations.join(",")) };
        s.note(format!("mutant {k} {} {}{extra}", m.label, m.verdict));
    }
    s.note(format!(
        "campaign AGREE_FAIL={} AGREE_PASS={} DISAGREE={} IMPLICATION_VIOLATIONS={}",
        c.agree_fail(),
        c.agree_pass(),
        c.disagree(),
        c.violations()
    ));
    s.check(format!("EQUIVALENCE[{}]", c.example), c.base.verdict == Verdict::AgreePass);
    s.check(format!("MUTANTS_AGREE_FAIL[{}]", c.example), c.agree_fail() == c.mutants.len());
    s.check(format!("NO_DISAGREE[{}]", c.example), c.disagree() == 0);
    s.check(format!("IMPLICATIONS[{}]", c.example), c.violations() == 0);
    s
}

pub fn example_names(window: i64) -> Vec<String> {
    zoo::EXAMPLES.iter().map(|n| if n.starts_with("kz:") { format!("kz:W{window}") } else { n.to_string() }).collect()
}

pub fn campaigns(names: &[String], seed: u64, mutations: usize) -> Result<Vec<Campaign>> {
    names
        .par_iter()
        .enumerate()
        .map(|(k, n)| run_campaign(&zoo::example(n, None)?, seed, k as u64, mutations))
        .collect()
}

// ---------------------------------------------------------------------------
// category laws

fn plain(model: &std::sync::Arc<Model>, name: &str, labels: &[&str]) -> Shape {
    let labels = labels.iter().map(|l| l.to_string()).collect::<Vec<_>>();
    let n = labels.len();
    Shape::of(&GradedObject::finite(name, model, labels, vec![0; n]).expect("distinct labels"))
}

/// `Q[x]/(x²)`.
pub fn dual_numbers() -> Result<Semigroup> {
    let model = Model::ungraded(FieldSpec::Rationals);
    let a = plain(&model, "D", &["1", "x"]);
    let one = model.one();
    let entries: Vec<(Tuple, Tuple, Scalar)> = vec![
        (smallvec![0], smallvec![0, 0], one.clone()),
        (smallvec![1], smallvec![0, 1], one.clone()),
        (smallvec![1], smallvec![1, 0], one),
    ];
    Semigroup::new("D", a.clone(), LinMap::from_entries(a.tensor(&a), a, entries)?)
}

/// A pool of algebras with unital algebra maps between them.
pub struct Pool {
    pub algebras: Vec<Semigroup>,
    pub maps: Vec<PoolMap>,
}

pub struct PoolMap {
    pub name: String,
    pub src: usize,
    pub dst: usize,
    pub map: LinMap,
    pub morphism: MMorphism,
}

fn linear(src: &Semigroup, dst: &Semigroup, cols: &[Vec<(i64, Scalar)>]) -> Result<LinMap> {
    let mut entries = Vec::new();
    for (j, col) in cols.iter().enumerate() {
        for (i, c) in col {
            entries.push((smallvec![*i], smallvec![j as i64], c.clone()));
        }
    }
    LinMap::from_entries(src.carrier().clone(), dst.carrier().clone(), entries)
}

impl Pool {
    fn push(&mut self, name: String, src: usize, dst: usize, cols: &[Vec<(i64, Scalar)>]) -> Result<()> {
        let (a, b) = (&self.algebras[src], &self.algebras[dst]);
        let map = linear(a, b, cols)?;
        let morphism = MMorphism::sharp(&map, a, b)?;
        morphism.require_morphism(&name)?;
        self.maps.push(PoolMap { name, src, dst, map, morphism });
        Ok(())
    }

    pub fn from(&self, src: usize) -> Vec<usize> {
        (0..self.maps.len()).filter(|&k| self.maps[k].src == src).collect()
    }
}

/// Rational pool: `K(Z2)`, `K(Z3)`, `kZ2`, dual numbers, with pullbacks,
/// Fourier maps, augmentations and rescalings.
pub fn rational_pool() -> Result<Pool> {
    let q = FieldSpec::Rationals;
    let one = Scalar::one(q);
    let int = |n: i64| Scalar::from_int(q, n);
    let half = Scalar::from_ratio(q, 1, 2)?;
    let k2 = zoo::function_algebra(2, q)?.base;
    let k3 = zoo::function_algebra(3, q)?.base;
    let g2 = zoo::group_algebra(2, q)?.base;
    let d = dual_numbers()?;
    let mut pool = Pool { algebras: vec![k2, k3, g2, d], maps: Vec::new() };
    let sizes = [(0usize, 2i64), (1, 3)];
    for &(s, n) in &sizes {
        for &(t, m) in &sizes {
            // pullback K(Zn) -> K(Zm) along φ: Zm -> Zn, all m^... functions
            let count = n.pow(m as u32);
            for code in 0..count {
                let phi: Vec<i64> = (0..m).map(|y| (code / n.pow(y as u32)) % n).collect();
                let cols: Vec<Vec<(i64, Scalar)>> =
                    (0..n).map(|x| (0..m).filter(|&y| phi[y as usize] == x).map(|y| (y, one.clone())).collect()).collect();
                pool.push(format!("pullback Z{m}->Z{n} {phi:?}"), s, t, &cols)?;
            }
        }
    }
    pool.push("fourier kZ2->K(Z2)".into(), 2, 0, &[vec![(0, int(1)), (1, int(1))], vec![(0, int(1)), (1, int(-1))]])?;
    pool.push(
        "fourier K(Z2)->kZ2".into(),
        0,
        2,
        &[vec![(0, half.clone()), (1, half.clone())], vec![(0, half.clone()), (1, half.negate())]],
    )?;
    for &(s, n) in &sizes {
        pool.push(format!("unit D->K(Z{n})"), 3, s, &[(0..n).map(|y| (y, one.clone())).collect(), vec![]])?;
        for j in 0..n {
            let cols: Vec<Vec<(i64, Scalar)>> = (0..n).map(|x| if x == j { vec![(0, one.clone())] } else { vec![] }).collect();
            pool.push(format!("evaluate K(Z{n})->D at {j}"), s, 3, &cols)?;
        }
    }
    for a in [0i64, 1, 2, -1] {
        pool.push(format!("rescale D x->{a}x"), 3, 3, &[vec![(0, one.clone())], vec![(1, int(a))]])?;
    }
    for sign in [1i64, -1] {
        pool.push(format!("character kZ2->D g->{sign}"), 2, 3, &[vec![(0, one.clone())], vec![(0, int(sign))]])?;
    }
    pool.push("augmentation D->kZ2".into(), 3, 2, &[vec![(0, one.clone())], vec![]])?;
    Ok(pool)
}

/// Graded automorphisms `x ↦ ax` of the `F_5` q-line.
pub fn q_line_pool() -> Result<Pool> {
    let line = zoo::q_line(5, 4)?.base;
    let f = line.carrier().field();
    let mut pool = Pool { algebras: vec![line], maps: Vec::new() };
    for a in 1..5i64 {
        let s = Scalar::from_int(f, a);
        let cols: Vec<Vec<(i64, Scalar)>> = (0..4).map(|i| vec![(i, s.pow(i).expect("nonzero"))]).collect();
        pool.push(format!("qline x->{a}x"), 0, 0, &cols)?;
    }
    Ok(pool)
}

fn same_text(f: &MMorphism, g: &MMorphism) -> bool {
    f.f1().to_text() == g.f1().to_text() && f.f2().to_text() == g.f2().to_text()
}

/// Composite with the section-independence check folded in.
fn compose_checked(g: &MMorphism, f: &MMorphism, independent: &mut bool, count: &mut usize) -> Result<MMorphism> {
    let h = MMorphism::compose(g, f)?;
    let first = MMorphism::compose_with_pivot(g, f, Pivot::First)?;
    let last = MMorphism::compose_with_pivot(g, f, Pivot::Last)?;
    *independent &= same_text(&h, &first) && same_text(&first, &last);
    *count += 1;
    Ok(h)
}

pub fn category_laws(seed: u64, triples: usize) -> Result<Section> {
    let mut s = Section::new("category laws");
    let pool = rational_pool()?;
    let mut independent = true;
    let mut compositions = 0usize;
    let mut units = true;
    for p in &pool.maps {
        let ia = MMorphism::identity(&pool.algebras[p.src])?;
        let ib = MMorphism::identity(&pool.algebras[p.dst])?;
        units &= compose_checked(&ib, &p.morphism, &mut independent, &mut compositions)?.same_components(&p.morphism)?;
        units &= compose_checked(&p.morphism, &ia, &mut independent, &mut compositions)?.same_components(&p.morphism)?;
    }
    s.note(format!("morphisms {}", pool.maps.len()));
    s.check("UNIT_LAWS", units && pool.maps.len() >= 30);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assoc = true;
    let mut functorial = true;
    let mut done = 0;
    let all: Vec<usize> = (0..pool.maps.len()).collect();
    while done < triples {
        let f = *all.choose(&mut rng).expect("nonempty");
        let Some(&g) = pool.from(pool.maps[f].dst).choose(&mut rng) else { continue };
        let Some(&h) = pool.from(pool.maps[g].dst).choose(&mut rng) else { continue };
        let (fm, gm, hm) = (&pool.maps[f], &pool.maps[g], &pool.maps[h]);
        let gf = compose_checked(&gm.morphism, &fm.morphism, &mut independent, &mut compositions)?;
        let hg = compose_checked(&hm.morphism, &gm.morphism, &mut independent, &mut compositions)?;
        let left = compose_checked(&hm.morphism, &gf, &mut independent, &mut compositions)?;
        let right = compose_checked(&hg, &fm.morphism, &mut independent, &mut compositions)?;
        let ok = left.same_components(&right)?;
        if !ok {
            s.note(format!("associativity fails for {} ; {} ; {}", fm.name, gm.name, hm.name));
        }
        assoc &= ok;
        // composites of induced morphisms are induced by composites
        let direct = MMorphism::sharp(&LinMap::compose(&gm.map, &fm.map)?, &pool.algebras[fm.src], &pool.algebras[gm.dst])?;
        functorial &= direct.same_components(&gf)?;
        done += 1;
    }
    s.note(format!("triples {triples} compositions {compositions}"));
    s.check("ASSOCIATIVITY", assoc);
    s.check("SECTION_INDEPENDENCE", independent);
    s.check("SHARP_FUNCTORIAL", functorial);
    Ok(s)
}

// ---------------------------------------------------------------------------
// monoidal structure

pub fn monoidality(seed: u64, quadruples: usize) -> Result<Section> {
    let mut s = Section::new("monoidal structure");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d6f6e6f);
    let pools = [rational_pool()?, q_line_pool()?];
    let mut recert = true;
    for pool in &pools {
        for a in &pool.algebras {
            for b in &pool.algebras {
                recert &= tensor_semigroup(a, b)?.is_object();
            }
        }
    }
    s.check("TENSOR_SEMIGROUPS_CERTIFIED", recert);
    let mut morph = true;
    let mut interchange = true;
    let mut done = 0;
    while done < quadruples {
        // alternate between the symmetric and the braided pool
        let pool = &pools[done % 2];
        let pick = |rng: &mut ChaCha8Rng| -> Option<(usize, usize)> {
            let f = rng.gen_index(pool.maps.len());
            let g = *pool.from(pool.maps[f].dst).choose(rng)?;
            Some((f, g))
        };
        let (Some((f, g)), Some((f2, g2))) = (pick(&mut rng), pick(&mut rng)) else { continue };
        let (f, g, f2, g2) = (&pool.maps[f].morphism, &pool.maps[g].morphism, &pool.maps[f2].morphism, &pool.maps[g2].morphism);
        let ff = tensor_mmorphism(f, f2)?;
        let gg = tensor_mmorphism(g, g2)?;
        morph &= ff.flags().is_morphism() && gg.flags().is_morphism();
        let left = tensor_mmorphism(&MMorphism::compose(g, f)?, &MMorphism::compose(g2, f2)?)?;
        let right = MMorphism::compose(&gg, &ff)?;
        interchange &= left.same_components(&right)?;
        done += 1;
    }
    s.note(format!("quadruples {quadruples}"));
    s.check("TENSOR_MORPHISMS_CERTIFIED", morph);
    s.check("INTERCHANGE", interchange);
    Ok(s)
}

trait GenIndex {
    fn gen_index(&mut self, n: usize) -> usize;
}

impl GenIndex for ChaCha8Rng {
    fn gen_index(&mut self, n: usize) -> usize {
        rand::Rng::gen_range(self, 0..n)
    }
}

// ---------------------------------------------------------------------------
// multiplier monoids

pub fn multiplier_monoids(names: &[String]) -> Result<Section> {
    let mut s = Section::new("multiplier monoids");
    for n in names {
        let d = zoo::example(n, None)?;
        let a = &d.base;
        if a.is_finite() {
            let mm = MultiplierMonoid::compute(a)?;
            let verified = mm.verify().is_ok();
            let unital = find_unit(a).is_some();
            let iso = mm.embedding_is_iso()?;
            let dim = a.carrier().dim().unwrap_or(0);
            let witnesses = mm.quotient_witnesses()?;
            s.note(format!(
                "M({n}) dim {} base dim {dim} unital {unital} iso {iso} quotient witnesses {witnesses:?}",
                mm.dim()
            ));
            s.check(format!("MULTIPLIER_MONOID[{n}]"), verified && (!unital || (iso && mm.dim() == dim)));
        } else {
            let named = NamedMultipliers::standard(a);
            let radius = *a.carrier().factors()[0].check_labels().last().unwrap_or(&0);
            let probes = [radius + 1, -(radius + 1), radius + 7];
            let compatible = named.compatibility_failure()?.is_none();
            let unit_laws = named.unit_laws()?;
            let outside = named.unit_outside_image(&probes)?;
            s.note(format!("M({n}) named multipliers {} probes {probes:?}", named.named.len()));
            s.check(format!("MULTIPLIER_MONOID[{n}]"), compatible && unit_laws);
            s.check(format!("UNIT_OUTSIDE_IMAGE[{n}]"), outside);
        }
    }
    Ok(s)
}

// ---------------------------------------------------------------------------
// morphisms of bimonoids

pub fn morphisms(names: &[String]) -> Result<Section> {
    let mut s = Section::new("morphisms");
    for c in sharp_cases()? {
        let got = check_sharp_morphism_criterion(&c.map, &c.src, &c.dst)?;
        s.note(format!("case {} expected {} got {}", c.name, c.expected, got));
        s.check(format!("SHARP[{}]", c.name), got == c.expected);
    }
    for n in names {
        let d = zoo::example(n, None)?;
        if !d.base.is_finite() {
            continue;
        }
        let id = MMorphism::identity(&d.base)?;
        let c = d.derived_comonoid()?;
        s.check(format!("IDENTITY[{n}]"), check_mbm_morphism(&id, &d, &d)? && check_comonoid_morphism(&id, &c, &c)?);
    }
    Ok(s)
}

// ---------------------------------------------------------------------------
// non-degeneracy oracle

/// Product in `F_2^n` for a table of bitmasks.
fn product(table: &[[u8; 3]; 3], n: usize, u: u8, v: u8) -> u8 {
    let mut r = 0;
    for i in 0..n {
        if u >> i & 1 == 1 {
            for j in 0..n {
                if v >> j & 1 == 1 {
                    r ^= table[i][j];
                }
            }
        }
    }
    r
}

fn associative(table: &[[u8; 3]; 3], n: usize) -> bool {
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (ei, ej, ek) = (1u8 << i, 1u8 << j, 1u8 << k);
                if product(table, n, product(table, n, ei, ej), ek) != product(table, n, ei, product(table, n, ej, ek)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Every nonzero `f: F_2^k -> A` has `m(f⊗1) ≠ 0` (`left`) or `m(1⊗f) ≠ 0`.
fn injective_on_tests(table: &[[u8; 3]; 3], n: usize, left: bool) -> bool {
    for k in 1..=2usize {
        let maps = 1u32 << (n * k);
        for code in 1..maps {
            let images: Vec<u8> = (0..k).map(|y| ((code >> (y * n)) & ((1 << n) - 1)) as u8).collect();
            let zero = images.iter().all(|&x| {
                (0..n).all(|a| if left { product(table, n, x, 1 << a) == 0 } else { product(table, n, 1 << a, x) == 0 })
            });
            if zero {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleSummary {
    pub semigroups: [usize; 3],
    pub nondegenerate: usize,
    pub mismatches: usize,
}

/// Every associative multiplication on `F_2^n`, `n ≤ 3`: annihilators vs
/// injectivity against all test objects of dimension 1 and 2.
pub fn nondegeneracy_oracle() -> Result<OracleSummary> {
    let f2 = FieldSpec::Prime(2);
    let model = Model::ungraded(f2);
    let mut out = OracleSummary::default();
    for n in 1..=3usize {
        let a = Shape::of(&GradedObject::plain(format!("F2^{n}"), &model, n));
        let a2 = a.tensor(&a);
        let total = 1u64 << (n * n * n);
        let mut table = [[0u8; 3]; 3];
        for code in 0..total {
            for i in 0..n {
                for j in 0..n {
                    table[i][j] = ((code >> ((i * n + j) * n)) & ((1 << n) - 1)) as u8;
                }
            }
            if !associative(&table, n) {
                continue;
            }
            out.semigroups[n - 1] += 1;
            let mut entries: Vec<(Tuple, Tuple, Scalar)> = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        if table[i][j] >> k & 1 == 1 {
                            entries.push((smallvec![k as i64], smallvec![i as i64, j as i64], Scalar::one(f2)));
                        }
                    }
                }
            }
            let m = LinMap::from_entries(a2.clone(), a.clone(), entries)?;
            let (l, r) = annihilator_dims(&a, &m);
            let brute = (injective_on_tests(&table, n, true), injective_on_tests(&table, n, false));
            if (l == 0, r == 0) != brute {
                out.mismatches += 1;
            }
            if l == 0 && r == 0 {
                out.nondegenerate += 1;
            }
        }
    }
    Ok(out)
}

pub fn oracle_section() -> Result<Section> {
    let mut s = Section::new("non-degeneracy oracle");
    let o = nondegeneracy_oracle()?;
    s.note(format!(
        "semigroups on F2^1,F2^2,F2^3: {:?} non-degenerate {} mismatches {}",
        o.semigroups, o.nondegenerate, o.mismatches
    ));
    s.check("ANNIHILATORS_MATCH_INJECTIVITY", o.mismatches == 0);
    Ok(s)
}

// ---------------------------------------------------------------------------
// the suite

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub mutations: usize,
    pub window: i64,
    pub jobs: usize,
}

impl Default for SuiteConfig {
    fn default() -> SuiteConfig {
        SuiteConfig { seed: 42, mutations: crate::mutation::DEFAULT_MUTATIONS, window: 8, jobs: 1 }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub sections: Vec<Section>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.sections.iter().all(Section::passed)
    }

    pub fn text(&self, cfg: &SuiteConfig) -> String {
        let mut out = format!("suite seed {} mutations {} window {}\n", cfg.seed, cfg.mutations, cfg.window);
        for s in &self.sections {
            let _ = writeln!(out, "\n[{}]", s.title);
            out.push_str(&s.log);
        }
        let _ = writeln!(out, "\n[summary]");
        for s in &self.sections {
            let failed: Vec<&str> = s.checks.iter().filter(|(_, ok)| !ok).map(|(k, _)| k.as_str()).collect();
            let _ = writeln!(out, "{} {}/{} {}", s.title, s.checks.len() - failed.len(), s.checks.len(), failed.join(" "));
        }
        let _ = writeln!(out, "RESULT {}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;
    pool.install(|| {
        let names = example_names(cfg.window);
        let mut sections: Vec<Section> = campaigns(&names, cfg.seed, cfg.mutations)?.iter().map(campaign_section).collect();
        sections.push(multiplier_monoids(&names)?);
        sections.push(category_laws(cfg.seed, 40)?);
        sections.push(monoidality(cfg.seed, 24)?);
        sections.push(morphisms(&names)?);
        sections.push(oracle_section()?);
        Ok(SuiteResult { sections })
    })
}

/// Evaluate one example by name (used by the `equivalence` command).
pub fn equivalence_text(data: &BimonoidData) -> Result<(String, bool)> {
    let ev = check_equivalence(data)?;
    let mut out = ev.to_report().to_string();
    let _ = writeln!(out, "VERDICT {}", ev.verdict);
    Ok((out, ev.verdict == Verdict::AgreePass && ev.violations().is_empty()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pools_are_large_enough() {
        assert!(rational_pool().unwrap().maps.len() >= 30);
        assert_eq!(q_line_pool().unwrap().maps.len(), 4);
    }

    #[test]
    fn dual_numbers_are_unital() {
        let d = dual_numbers().unwrap();
        assert!(d.is_object());
        assert!(find_unit(&d).is_some());
    }

    #[test]
    fn oracle_brute_force_detects_zero_product() {
        let zero = [[0u8; 3]; 3];
        assert!(!injective_on_tests(&zero, 2, true));
        let mut unit = [[0u8; 3]; 3];
        unit[0][0] = 1;
        assert!(injective_on_tests(&unit, 1, true) && injective_on_tests(&unit, 1, false));
    }
}
