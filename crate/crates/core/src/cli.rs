//! Command-line front end. `run` returns the exit code and the report text
//! so that the binary stays a thin wrapper.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bimonoid::{check_bimonoid_axioms, check_comonoid_in_m, BimonoidData};
use crate::error::{Error, Result};
use crate::format;
use crate::mcat::MMorphism;
use crate::morphism::{comonoid_morphism_report, mbm_morphism_report};
use crate::multiplier::{MultiplierMonoid, NamedMultipliers};
use crate::scalar::FieldSpec;
use crate::semigroup::{find_unit, Semigroup};
use crate::suite::{equivalence_text, run_suite, SuiteConfig};
use crate::zoo;

#[derive(Parser, Debug)]
#[command(name = "mbm", version, about = "Exact checks for multiplier bimonoids and comonoids of non-degenerate semigroups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Field for built-in examples: `q` or `fp:<p>`.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Window for the truncated `kz` example.
    #[arg(long, global = true, default_value_t = 8)]
    pub window: i64,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = crate::mutation::DEFAULT_MUTATIONS)]
    pub mutations: usize,
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Axioms of a multiplier bimonoid.
    CheckBimonoid { input: String },
    /// Comonoid axioms in the category of non-degenerate semigroups.
    CheckComonoid { input: String },
    /// Both sides of the bimonoid/comonoid correspondence.
    Equivalence { input: String },
    /// Composite `g • f` of two morphism files.
    Compose { f: String, g: String },
    /// Is a morphism file a morphism between two bimonoids?
    Morphism { f: String, src: String, dst: String },
    /// The multiplier monoid and the embedding of the algebra.
    MultiplierMonoid { input: String },
    /// Built-in examples, mutation campaigns and law checks.
    Suite,
    /// Names of the built-in examples.
    ListExamples,
}

/// Exit code for an error: 2 for bad input, 1 for failed certificates.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::Io(_)
        | Error::ShapeMismatch(_)
        | Error::UnknownExample(_)
        | Error::FieldMismatch(..)
        | Error::UnsupportedField(_)
        | Error::NotPrime(_)
        | Error::InfiniteShape(_)
        | Error::WindowTooSmall { .. }
        | Error::NoRootOfUnity { .. }
        | Error::QBinomialNonzero { .. } => 2,
        _ => 1,
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn is_example(name: &str) -> bool {
    name == "kz" || ["fnalg:", "grpalg:", "qline:", "kz:"].iter().any(|p| name.starts_with(p))
}

struct Ctx {
    field: Option<FieldSpec>,
    window: i64,
}

impl Ctx {
    fn example(&self, name: &str) -> Result<BimonoidData> {
        let name = if name == "kz" { format!("kz:W{}", self.window) } else { name.to_string() };
        zoo::example(&name, self.field)
    }

    fn bimonoid(&self, input: &str, base: Option<&Path>) -> Result<BimonoidData> {
        if is_example(input) && !Path::new(input).exists() {
            return self.example(input);
        }
        format::parse_bimonoid(&read(&resolve(input, base))?)
    }

    fn algebra(&self, input: &str, base: Option<&Path>) -> Result<Semigroup> {
        if is_example(input) && !Path::new(input).exists() {
            return Ok(self.example(input)?.base);
        }
        format::parse_base_algebra(&read(&resolve(input, base))?)
    }

    /// A morphism file with its references resolved next to it.
    fn morphism(&self, path: &str) -> Result<MMorphism> {
        let text = read(Path::new(path))?;
        let h = format::parse_morphism_header(&text)?;
        let dir = Path::new(path).parent();
        let src = self.algebra(&h.source, dir)?;
        let dst = self.algebra(&h.target, dir)?;
        format::parse_morphism(&text, &src, &dst)
    }
}

fn resolve(input: &str, base: Option<&Path>) -> PathBuf {
    match base {
        Some(dir) if Path::new(input).is_relative() => dir.join(input),
        _ => PathBuf::from(input),
    }
}

fn verdict_line(out: &mut String, ok: bool) -> bool {
    let _ = writeln!(out, "RESULT {}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn execute(cmd: &Command, opts: &Opts) -> Result<(String, bool)> {
    let ctx = Ctx { field: opts.field.as_deref().map(FieldSpec::parse).transpose()?, window: opts.window };
    let mut out = String::new();
    let ok = match cmd {
        Command::ListExamples => {
            for e in zoo::EXAMPLES {
                let _ = writeln!(out, "{e}");
            }
            true
        }
        Command::CheckBimonoid { input } => {
            let r = check_bimonoid_axioms(&ctx.bimonoid(input, None)?)?;
            out.push_str(&r.to_string());
            verdict_line(&mut out, r.all_pass())
        }
        Command::CheckComonoid { input } => {
            let c = format::parse_comonoid(&read(Path::new(input))?)?;
            let r = check_comonoid_in_m(&c)?;
            out.push_str(&r.to_string());
            verdict_line(&mut out, r.all_pass())
        }
        Command::Equivalence { input } => {
            let (text, ok) = equivalence_text(&ctx.bimonoid(input, None)?)?;
            out.push_str(&text);
            ok
        }
        Command::Compose { f, g } => {
            let (fm, gm) = (ctx.morphism(f)?, ctx.morphism(g)?);
            let h = MMorphism::compose(&gm, &fm)?;
            let (fh, gh) = (format::parse_morphism_header(&read(Path::new(f))?)?, format::parse_morphism_header(&read(Path::new(g))?)?);
            out.push_str(&format::write_morphism(&h, &fh.source, &gh.target));
            h.flags().is_morphism()
        }
        Command::Morphism { f, src, dst } => {
            let (a, b) = (ctx.bimonoid(src, None)?, ctx.bimonoid(dst, None)?);
            let text = read(Path::new(f))?;
            let m = format::parse_morphism(&text, &a.base, &b.base)?;
            let r = mbm_morphism_report(&m, &a, &b)?;
            let c = comonoid_morphism_report(&m, &a.derived_comonoid()?, &b.derived_comonoid()?)?;
            out.push_str(&r.to_string());
            out.push_str(&c.to_string());
            if r.all_pass() != c.all_pass() {
                return Err(Error::CertificateFailure("bimonoid and comonoid morphism checks disagree".into()));
            }
            verdict_line(&mut out, r.all_pass())
        }
        Command::MultiplierMonoid { input } => {
            let a = ctx.algebra(input, None)?;
            let ok = if a.is_finite() {
                let mm = MultiplierMonoid::compute(&a)?;
                let iso = mm.embedding_is_iso()?;
                let _ = writeln!(out, "dim M(A) {}", mm.dim());
                let _ = writeln!(out, "dim A {}", a.carrier().dim().unwrap_or(0));
                let _ = writeln!(out, "unital {}", find_unit(&a).is_some());
                let _ = writeln!(out, "embedding iso {iso}");
                out.push_str(&format::write_algebra(mm.semigroup())?);
                mm.verify().is_ok()
            } else {
                let named = NamedMultipliers::standard(&a);
                let radius = *a.carrier().factors()[0].check_labels().last().unwrap_or(&0);
                let probes = [radius + 1, -(radius + 1)];
                let compatible = named.compatibility_failure()?.is_none();
                let unit_laws = named.unit_laws()?;
                let outside = named.unit_outside_image(&probes)?;
                let _ = writeln!(out, "named multipliers {}", named.named.len());
                let _ = writeln!(out, "compatible {compatible}");
                let _ = writeln!(out, "unit laws {unit_laws}");
                let _ = writeln!(out, "unit outside image {outside}");
                compatible && unit_laws
            };
            verdict_line(&mut out, ok)
        }
        Command::Suite => {
            let cfg = SuiteConfig { seed: opts.seed, mutations: opts.mutations, window: opts.window, jobs: opts.jobs };
            let r = run_suite(&cfg)?;
            out.push_str(&r.text(&cfg));
            r.passed()
        }
    };
    Ok((out, ok))
}

/// Parse arguments, run, write the report. Returns the exit code.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    let (text, code) = match execute(&cli.command, &cli.opts) {
        Ok((text, ok)) => (text, if ok { 0 } else { 1 }),
        Err(e) => (format!("error: {e}\n"), exit_code(&e)),
    };
    if let Some(path) = &cli.opts.out {
        if let Err(e) = std::fs::write(path, &text) {
            return (2, format!("error: {}: {e}\n", path.display()));
        }
        return (code, String::new());
    }
    (code, text)
}
