//! Command-line frontend.

use std::ffi::OsString;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::algebra::{TruncatedAlgebra, DEFAULT_CAP};
use crate::catalog::{self, Flags};
use crate::error::{Error, Result};
use crate::gmod::{ExtendedDegree, FreeModule, GradedModule, Summand};
use crate::presentation::QuiverPresentation;
use crate::regularity::{
    asreg, equalize_parameters, ext_table, homogeneity_check, regs_of_module, tor_table, Bounds, CmStrategy, Equalization,
    ExtOptions, RegContext,
};
use crate::report::{algebra_json, envelope, error_json, render};
use crate::scalar::{Field, FieldSpec, Fp, Rationals};
use crate::verify::{run_theorem_suite, random_module, ModuleParams, SuiteConfig, Verdict};

#[derive(Parser, Debug)]
#[command(name = "gradreg", version, about = "Homological regularities of graded modules over quiver algebras")]
pub struct Cli {
    /// Base field: `Q` or a prime.
    #[arg(long, global = true, default_value = "32003")]
    pub field: String,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct AlgebraSource {
    /// Catalog entry, e.g. `poly2` or `qplane(3)`.
    #[arg(long, conflicts_with = "presentation")]
    pub catalog: Option<String>,
    /// Presentation JSON file.
    #[arg(long)]
    pub presentation: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct BoundArgs {
    /// Highest homological degree.
    #[arg(long = "H", default_value_t = 8)]
    pub h: usize,
    /// Highest internal degree.
    #[arg(long = "N", default_value_t = 12)]
    pub n: i64,
    /// Largest `n` in `A/A_{>=n}` for the limit strategy (default `2N`).
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Degree window `lo,hi` for the limit strategy (default `-N,N`).
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Consecutive zero degrees trusted as vanishing.
    #[arg(long)]
    pub margin: Option<i64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List catalog entries or dump one.
    Catalog {
        #[arg(long)]
        dump: Option<String>,
    },
    /// Build a truncated algebra and report its structure.
    Algebra {
        #[command(flatten)]
        source: AlgebraSource,
        #[arg(long = "N", default_value_t = 12)]
        n: usize,
        /// Include per-block Hilbert data.
        #[arg(long)]
        hilbert: bool,
        /// Include the degree-0 structure.
        #[arg(long)]
        a0: bool,
        /// Work with the opposite algebra.
        #[arg(long)]
        opposite: bool,
    },
    /// Minimal resolution, Betti table, minimality and linearity.
    Resolve {
        #[command(flatten)]
        source: AlgebraSource,
        #[command(flatten)]
        bounds: BoundArgs,
        /// trivial | simple:V | regular | projective:V | random:SEED
        #[arg(long, default_value = "trivial")]
        module: String,
    },
    /// All regularities of a module and of the algebra.
    Reg {
        #[command(flatten)]
        source: AlgebraSource,
        #[command(flatten)]
        bounds: BoundArgs,
        #[arg(long, default_value = "trivial")]
        module: String,
        /// limit | duality (default: duality when AS-Gorenstein data is available)
        #[arg(long)]
        cm: Option<String>,
        /// Also run the per-vertex homogeneity check.
        #[arg(long)]
        homogeneity: bool,
    },
    /// Tor table of a right module against a left module.
    Tor {
        #[command(flatten)]
        source: AlgebraSource,
        #[command(flatten)]
        bounds: BoundArgs,
        #[arg(long, default_value = "trivial")]
        module: String,
        /// Right module, given as a module over the opposite algebra.
        #[arg(long, default_value = "trivial")]
        right: String,
    },
    /// Ext table between two left modules.
    Ext {
        #[command(flatten)]
        source: AlgebraSource,
        #[command(flatten)]
        bounds: BoundArgs,
        #[arg(long, default_value = "trivial")]
        module: String,
        #[arg(long, default_value = "regular")]
        target: String,
    },
    /// Endomorphism twist by vertex shifts and parameter equalization.
    Twist {
        #[command(flatten)]
        source: AlgebraSource,
        #[arg(long = "N", default_value_t = 12)]
        n: usize,
        /// Comma-separated shifts, one per vertex.
        #[arg(long, allow_hyphen_values = true)]
        shifts: Option<String>,
        /// Solve for shifts equalizing the Gorenstein parameters.
        #[arg(long)]
        equalize: bool,
        /// Override the parameters `l_i`.
        #[arg(long, allow_hyphen_values = true)]
        ell: Option<String>,
        /// Override the permutation, as 0-based images.
        #[arg(long)]
        sigma: Option<String>,
    },
    /// Run the regularity identities on seeded random modules.
    Verify {
        #[command(flatten)]
        source: AlgebraSource,
        #[command(flatten)]
        bounds: BoundArgs,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        instances: usize,
        /// limit | duality (default: duality when AS-Gorenstein data is available)
        #[arg(long)]
        cm: Option<String>,
        /// Comma-separated check ids, e.g. `1,2,7` (default all).
        #[arg(long)]
        checks: Option<String>,
    },
}

/// Report and exit status of a successful run.
pub struct Outcome {
    pub report: Value,
    pub code: i32,
}

/// Runs the CLI on explicit arguments and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    configure_threads();
    let out = cli.out.clone();
    match run(&cli) {
        Ok(o) => match write_output(out.as_ref(), &render(&o.report)) {
            Ok(()) => o.code,
            Err(e) => {
                eprintln!("cannot write output: {e}");
                3
            }
        },
        Err(e) => {
            eprint!("{}", render(&error_json(&e)));
            e.exit_code()
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("GRADREG_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn write_output(path: Option<&PathBuf>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    }
}

pub fn parse_field(s: &str) -> Result<FieldSpec> {
    if s.eq_ignore_ascii_case("q") {
        return Ok(FieldSpec::Rationals);
    }
    let p = s.parse::<u32>().map_err(|_| Error::BadInput(format!("bad field {s:?}: expected Q or a prime")))?;
    FieldSpec::PrimeField(p).validate()
}

/// Parses and executes a command line without writing anything.
pub fn run(cli: &Cli) -> Result<Outcome> {
    match parse_field(&cli.field)? {
        FieldSpec::Rationals => dispatch(&Rationals, &cli.command),
        FieldSpec::PrimeField(p) => dispatch(&Fp::new(p)?, &cli.command),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse::<T>().map_err(|_| Error::BadInput(format!("bad {what} {t:?}"))))
        .collect()
}

impl BoundArgs {
    pub fn bounds(&self) -> Result<Bounds> {
        if self.n < 0 {
            return Err(Error::BadInput("N must be nonnegative".into()));
        }
        let mut b = Bounds::new(self.h, self.n);
        if let Some(n) = self.n_max {
            b.n_max = n.max(1);
        }
        if let Some(w) = &self.window {
            let v: Vec<i64> = parse_list(w, "window bound")?;
            match v[..] {
                [lo, hi] if lo <= hi => b.window = (lo, hi),
                _ => return Err(Error::BadInput(format!("bad window {w:?}: expected lo,hi"))),
            }
        }
        if let Some(m) = self.margin {
            b.margin = m.max(0);
        }
        Ok(b)
    }
}

/// Algebra name, presentation and asserted data of a source.
struct Loaded {
    name: String,
    presentation: QuiverPresentation,
    flags: Flags,
    gorenstein: Option<catalog::GorensteinAssertion>,
}

fn load(source: &AlgebraSource, field: FieldSpec) -> Result<Loaded> {
    match (&source.catalog, &source.presentation) {
        (Some(name), None) => {
            let e = catalog::entry(name, field)?;
            Ok(Loaded { name: e.name, presentation: e.presentation, flags: e.flags, gorenstein: e.gorenstein })
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::BadInput(format!("{}: {e}", path.display())))?;
            let p = QuiverPresentation::parse(&text)?.with_field(field)?;
            let flags = Flags::unasserted(&p);
            let name = path.file_stem().map_or_else(|| "presentation".into(), |s| s.to_string_lossy().into_owned());
            Ok(Loaded { name, presentation: p, flags, gorenstein: None })
        }
        _ => Err(Error::BadInput("give exactly one of --catalog and --presentation".into())),
    }
}

fn pick_strategy(cm: &Option<String>, l: &Loaded) -> Result<CmStrategy> {
    match cm {
        Some(s) => CmStrategy::parse(s),
        None if l.gorenstein.is_some() => Ok(CmStrategy::Duality),
        None => Ok(CmStrategy::Limit),
    }
}

fn context<F: Field>(field: &F, l: &Loaded, bounds: Bounds, strategy: CmStrategy) -> Result<RegContext<F>> {
    let i_max = l.gorenstein.as_ref().map_or(bounds.h, |g| g.dim as usize);
    let top = bounds.algebra_top(strategy, i_max);
    let alg = Arc::new(TruncatedAlgebra::build(field, &l.presentation, top, DEFAULT_CAP)?);
    RegContext::new(alg, l.flags.clone(), l.gorenstein.as_ref(), bounds)
}

fn vertex<F: Field>(alg: &TruncatedAlgebra<F>, s: &str) -> Result<usize> {
    if let Some(i) = alg.vertex_names().iter().position(|n| n == s) {
        return Ok(i);
    }
    match s.parse::<usize>() {
        Ok(i) if i < alg.num_vertices() => Ok(i),
        _ => Err(Error::UnknownSymbol(format!("vertex {s:?}"))),
    }
}

/// Builds a module from `trivial | simple:V | regular | projective:V | random:SEED`.
pub fn module_from_spec<F: Field>(ctx: &RegContext<F>, spec: &str) -> Result<GradedModule<F>> {
    let alg = ctx.algebra();
    let (kind, arg) = match spec.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (spec, None),
    };
    match (kind, arg) {
        ("trivial" | "simple", None) => ctx.simple(),
        ("simple", Some(v)) => GradedModule::simple(alg, Some(&[vertex(alg, v)?])),
        ("regular", None) => ctx.regular(),
        ("projective", Some(v)) => GradedModule::free(alg, FreeModule::new(vec![Summand { vertex: vertex(alg, v)?, shift: 0 }]), ctx.module_top()),
        ("random", Some(s)) => {
            let seed = s.parse::<u64>().map_err(|_| Error::BadInput(format!("bad seed {s:?}")))?;
            random_module(alg, seed, &ModuleParams::default(), ctx.module_top())
        }
        _ => Err(Error::BadInput(format!("bad module {spec:?}: expected trivial, simple:V, regular, projective:V or random:SEED"))),
    }
}

fn module_json<F: Field>(spec: &str, m: &GradedModule<F>) -> Value {
    let (ideg, sdeg) = m.sdeg_ideg();
    json!({"spec": spec, "dims": m.dims(), "lo": m.lo(), "ideg": ideg.to_json(), "sdeg": sdeg.to_json()})
}

fn dispatch<F: Field>(field: &F, cmd: &Command) -> Result<Outcome> {
    let spec = field.spec();
    let ok = |report| Ok(Outcome { report, code: 0 });
    match cmd {
        Command::Catalog { dump } => {
            let results = match dump {
                Some(name) => json!({"entry": catalog::entry(name, spec)?.to_json()}),
                None => {
                    let entries: Result<Vec<Value>> = catalog::NAMES
                        .iter()
                        .map(|n| {
                            let e = catalog::entry(n, spec)?;
                            Ok(json!({"name": e.name, "flags": e.flags.to_json(), "gorenstein": e.gorenstein.is_some()}))
                        })
                        .collect();
                    json!({"entries": entries?})
                }
            };
            ok(envelope(Value::Null, Value::Null, results, vec![]))
        }
        Command::Algebra { source, n, hilbert, a0, opposite } => {
            let l = load(source, spec)?;
            let mut alg = TruncatedAlgebra::build(field, &l.presentation, *n, DEFAULT_CAP)?;
            if *opposite {
                alg = alg.opposite();
            }
            let mut results = json!({
                "flags": l.flags.to_json(),
                "associative": alg.check_associativity(),
                "opposite": opposite,
            });
            if *hilbert {
                let h = alg.hilbert();
                results["hilbert"] = json!({"total": h.total, "blocks": h.blocks});
            }
            if *a0 {
                let d = alg.a0_structure()?;
                let names: Vec<String> = d.radical.iter().map(|v| vector_name(&alg, v)).collect();
                results["a0"] = json!({
                    "dim": alg.dim(0),
                    "semisimple": d.semisimple,
                    "basic": d.basic,
                    "radical": names,
                    "blockSizes": d.block_sizes,
                });
            }
            ok(envelope(algebra_json(&l.name, &alg), json!({"N": n}), results, vec![]))
        }
        Command::Resolve { source, bounds, module } => {
            let l = load(source, spec)?;
            let ctx = context(field, &l, bounds.bounds()?, CmStrategy::Duality)?;
            let m = Arc::new(module_from_spec(&ctx, module)?);
            let res = ctx.resolve(&m)?;
            let results = json!({"module": module_json(module, &m), "resolution": res.to_json()});
            ok(envelope(algebra_json(&l.name, ctx.algebra()), ctx.bounds().to_json(), results, vec![]))
        }
        Command::Reg { source, bounds, module, cm, homogeneity } => {
            let l = load(source, spec)?;
            let strategy = pick_strategy(cm, &l)?;
            let ctx = context(field, &l, bounds.bounds()?, strategy)?;
            let m = Arc::new(module_from_spec(&ctx, module)?);
            let rm = regs_of_module(&ctx, &m, strategy)?;
            let ra = regs_of_module(&ctx, &Arc::new(ctx.regular()?), strategy)?;
            let mut results = json!({
                "module": module_json(module, &m),
                "report": rm.to_json(),
                "algebraRun": ra.to_json(),
                "asreg": asreg(&ctx, strategy)?.to_json(),
                "context": ctx.to_json(),
            });
            if *homogeneity {
                results["homogeneity"] = homogeneity_check(&ctx, strategy)?.to_json();
            }
            ok(envelope(algebra_json(&l.name, ctx.algebra()), ctx.bounds().to_json(), results, vec![]))
        }
        Command::Tor { source, bounds, module, right } => {
            let l = load(source, spec)?;
            let ctx = context(field, &l, bounds.bounds()?, CmStrategy::Duality)?;
            let x = Arc::new(module_from_spec(&ctx, module)?);
            let opp = ctx.opposite()?;
            let y = module_from_spec(&opp, right)?;
            let t = tor_table(&ctx.resolve(&x)?, &y)?;
            let results = json!({
                "module": module_json(module, &x),
                "right": module_json(right, &y),
                "table": t.to_json(),
                "ideg": ExtendedDegree::from_interval(t.ideg()).to_json(),
                "sdeg": ExtendedDegree::from_interval(t.sdeg()).to_json(),
            });
            ok(envelope(algebra_json(&l.name, ctx.algebra()), ctx.bounds().to_json(), results, vec![]))
        }
        Command::Ext { source, bounds, module, target } => {
            let l = load(source, spec)?;
            let ctx = context(field, &l, bounds.bounds()?, CmStrategy::Duality)?;
            let x = Arc::new(module_from_spec(&ctx, module)?);
            let y = module_from_spec(&ctx, target)?;
            // Into A itself, a verified injective dimension bounds the nonzero rows.
            let injdim = (target == "regular").then(|| ctx.gorenstein().filter(|g| g.is_verified()).map(|g| g.dim)).flatten();
            let opts = ExtOptions { injdim, margin: ctx.bounds().margin, ..Default::default() };
            let t = ext_table(&ctx.resolve(&x)?, &y, &opts)?;
            let results = json!({
                "module": module_json(module, &x),
                "target": module_json(target, &y),
                "table": t.to_json(),
                "ideg": ExtendedDegree::from_interval(t.ideg()).to_json(),
                "sdeg": ExtendedDegree::from_interval(t.sdeg()).to_json(),
            });
            ok(envelope(algebra_json(&l.name, ctx.algebra()), ctx.bounds().to_json(), results, vec![]))
        }
        Command::Twist { source, n, shifts, equalize, ell, sigma } => {
            let l = load(source, spec)?;
            let alg = TruncatedAlgebra::build(field, &l.presentation, *n, DEFAULT_CAP)?;
            let mut results = json!({});
            let mut p: Option<Vec<i64>> = shifts.as_deref().map(|s| parse_list(s, "shift")).transpose()?;
            if *equalize {
                let g = l.gorenstein.as_ref();
                let ell: Vec<i64> = match (ell, g) {
                    (Some(s), _) => parse_list(s, "parameter")?,
                    (None, Some(g)) => g.ell.clone(),
                    (None, None) => return Err(Error::MissingGorensteinData("--equalize needs --ell or catalog data".into())),
                };
                let sigma: Vec<usize> = match (sigma, g) {
                    (Some(s), _) => parse_list(s, "permutation entry")?,
                    (None, Some(g)) => g.sigma.clone(),
                    (None, None) => (0..ell.len()).collect(),
                };
                let m = lowest_degrees(&alg);
                let eq = equalize_parameters(&ell, &sigma, &m)?;
                results["equalize"] = match &eq {
                    Equalization::Shifts { p, ell } => json!({"feasible": true, "p": p, "ell": ell}),
                    Equalization::Infeasible { cycle, reason } => json!({"feasible": false, "cycle": cycle, "reason": reason}),
                };
                results["m"] = json!(m);
                if let (None, Equalization::Shifts { p: q, .. }) = (&p, eq) {
                    p = Some(q);
                }
            }
            if let Some(p) = p {
                let b = alg.endo_twist(&p)?;
                let h = b.hilbert();
                results["twist"] = json!({"shifts": p, "hilbert": {"total": h.total, "blocks": h.blocks}, "associative": b.check_associativity()});
            }
            ok(envelope(algebra_json(&l.name, &alg), json!({"N": n}), results, vec![]))
        }
        Command::Verify { source, bounds, seed, instances, cm, checks } => {
            let l = load(source, spec)?;
            let strategy = pick_strategy(cm, &l)?;
            let b = bounds.bounds()?;
            let ctx = context(field, &l, b, strategy)?;
            let checks: Vec<u8> = match checks {
                Some(s) => parse_list(s, "check id")?,
                None => (1..=13).collect(),
            };
            if let Some(c) = checks.iter().find(|c| !(1..=13).contains(*c)) {
                return Err(Error::BadInput(format!("no check C{c}")));
            }
            let cfg = SuiteConfig { seed: *seed, instances: *instances, bounds: b, strategy, params: ModuleParams::default(), checks };
            let r = run_theorem_suite(&ctx, &l.name, &cfg)?;
            let code = if r.fails() > 0 { 1 } else { 0 };
            let mut body = r.to_json();
            let outcomes = body.as_object_mut().and_then(|o| o.remove("outcomes")).and_then(|v| v.as_array().cloned()).unwrap_or_default();
            body["verdict"] = json!(if code == 0 { Verdict::Holds.name() } else { Verdict::Fails.name() });
            Ok(Outcome { report: envelope(algebra_json(&l.name, ctx.algebra()), b.to_json(), body, outcomes), code })
        }
    }
}

/// `m(i, j)`: lowest degree with `e_i A_d e_j ≠ 0` within the truncation.
pub fn lowest_degrees<F: Field>(alg: &TruncatedAlgebra<F>) -> Vec<Vec<Option<i64>>> {
    let n = alg.num_vertices();
    let h = alg.hilbert();
    let mut m = vec![vec![None; n]; n];
    for (d, block) in h.blocks.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                if block[i][j] > 0 && m[i][j].is_none() {
                    m[i][j] = Some(d as i64);
                }
            }
        }
    }
    m
}

fn vector_name<F: Field>(alg: &TruncatedAlgebra<F>, v: &[F::Elem]) -> String {
    let f = alg.field();
    let terms: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !f.is_zero(c))
        .map(|(i, c)| format!("{}*{}", f.format(c), alg.elem_name(0, i)))
        .collect();
    terms.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Outcome> {
        let cli = Cli::try_parse_from(std::iter::once("gradreg").chain(args.iter().copied())).unwrap();
        run(&cli)
    }

    #[test]
    fn quantum_plane_hilbert() {
        let o = run_args(&["algebra", "--catalog", "qplane", "--hilbert", "--N", "4"]).unwrap();
        assert_eq!(o.report["results"]["hilbert"]["total"], json!([1, 2, 3, 4, 5]));
        crate::report::validate(&o.report).unwrap();
    }

    #[test]
    fn dual_numbers_algebra_run_has_exreg_minus_one() {
        let o = run_args(&["reg", "--catalog", "dualnum", "--module", "trivial", "--H", "6", "--N", "8"]).unwrap();
        assert_eq!(o.report["results"]["algebraRun"]["regularities"]["exreg"]["value"], json!({"kind": "int", "value": -1}));
        crate::report::validate(&o.report).unwrap();
    }

    #[test]
    fn errors_map_to_exit_codes() {
        assert_eq!(run_args(&["reg", "--catalog", "nope"]).err().unwrap().exit_code(), 2);
        assert_eq!(run_args(&["--field", "12", "catalog"]).err().unwrap().exit_code(), 2);
        assert_eq!(run_args(&["reg", "--catalog", "tri2", "--cm", "duality", "--H", "2", "--N", "3"]).err().unwrap().exit_code(), 2);
        assert_eq!(run_args(&["resolve", "--catalog", "poly2", "--module", "projective:9"]).err().unwrap().exit_code(), 2);
        assert_eq!(main_with_args(["gradreg", "reg", "--bogus"]), 2);
    }

    #[test]
    fn twist_reports_equalization() {
        // The arrows of kron2 sit in block (0, 1) in degree 1, so p = (0, 1) breaks positivity.
        let o = run_args(&["twist", "--catalog", "kron2", "--N", "3", "--equalize", "--ell", "1,3", "--sigma", "1,0"]).unwrap();
        assert_eq!(o.report["results"]["equalize"]["feasible"], json!(false));
        let o = run_args(&["twist", "--catalog", "poly2", "--N", "3", "--equalize"]).unwrap();
        assert_eq!(o.report["results"]["equalize"]["p"], json!([0]));
        assert_eq!(o.report["results"]["twist"]["hilbert"]["total"], json!([1, 2, 3, 4]));
        let o = run_args(&["twist", "--catalog", "kron2", "--N", "2", "--shifts", "0,1"]).unwrap();
        assert_eq!(o.report["results"]["twist"]["hilbert"]["total"][0], json!(4));
    }
}
