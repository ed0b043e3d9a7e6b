//! Command-line front end. The binary only parses arguments and calls [`main_with`].

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::automorphism::{aut_a, compute_c, oracle_check, rho};
use crate::catalog::{catalog_dir, read_action, read_hom, read_module, Catalog, MonoidRef};
use crate::cleavage::{canonical_cleavage, enumerate_cleavages, extract_action, reconstruct, transport, CleavageChange};
use crate::cohomology::{h2_bounded, verify_exact_sequences, verify_h2_bijection, SEARCH_LIMIT};
use crate::error::{Error, Result};
use crate::fibration::{analyze, check_closure_lemmas_on};
use crate::generators;
use crate::groth::{groth, groth_projection_report};
use crate::iso::find_isomorphism;
use crate::lax::validate_lax;
use crate::monoid::FiniteMonoid;
use crate::report::{Format, Report};
use crate::suite::{run_suite, SCOPES};
use crate::verdict::Verdict;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SIZE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "schreier", version, about = "Fibrations, Grothendieck constructions and Schreier extensions of finite monoids")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Seed for sampled cleavage checks.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Precartesian and cartesian elements of a homomorphism.
    Analyze {
        #[arg(long)]
        hom: PathBuf,
        /// Also run the closure lemmas.
        #[arg(long)]
        lemmas: bool,
    },
    /// Grothendieck construction of a lax action.
    Groth {
        #[arg(long)]
        action: PathBuf,
        /// Writes the monoid here and its projection and inclusion next to it.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include the cartesian report of the projection.
        #[arg(long)]
        report: bool,
    },
    /// Cleavages of a prefibration and the actions they induce.
    Cleavage {
        #[arg(long)]
        hom: PathBuf,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        extract: bool,
        /// Refuse to enumerate more cleavages than this.
        #[arg(long, default_value_t = 4096)]
        limit: usize,
    },
    /// Lax action commands.
    Lax {
        #[command(subcommand)]
        command: LaxCommand,
    },
    /// Automorphisms of a prefibration that fix the kernel and preserve cartesians.
    Aut {
        #[arg(long)]
        hom: PathBuf,
        /// Cross-check against the brute-force enumeration.
        #[arg(long)]
        oracle: bool,
    },
    /// Second cohomology classes of a module.
    H2 {
        #[arg(long)]
        module: PathBuf,
        /// Only cocycles with invertible values.
        #[arg(long)]
        regular: bool,
        /// Node budget of the cocycle search.
        #[arg(long, default_value_t = SEARCH_LIMIT)]
        limit: u64,
    },
    /// The exact sequences of a regular Schreier extension.
    VerifyExact {
        #[arg(long)]
        hom: PathBuf,
    },
    /// Builds a monoid from a closed-form construction.
    Generate(GenerateArgs),
    /// Runs every property check over the catalog.
    Suite {
        /// `all` or one scope name.
        #[arg(default_value = "all")]
        scope: String,
    },
    /// Writes the builtin catalog.
    WriteCatalog {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum LaxCommand {
    Validate {
        #[arg(long)]
        action: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// cyclic-group, cyclic-monoid, klein4, q8, truncated-add, full-transformation, symmetric
    pub kind: String,
    pub params: Vec<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Exit code for an error: size limits 3, malformed input 2, the rest 1.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SizeLimit { .. } => EXIT_SIZE,
        Error::Io(_) | Error::Json(_) | Error::Catalog(_) | Error::Shape(_) => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

pub fn generate(kind: &str, params: &[usize]) -> Result<FiniteMonoid> {
    let p = |i: usize| {
        params
            .get(i)
            .copied()
            .ok_or_else(|| Error::Shape(format!("{kind} needs {} parameter(s)", i + 1)))
    };
    match kind {
        "cyclic-group" => generators::cyclic_group(p(0)?),
        "cyclic-monoid" => generators::cyclic_monoid(p(0)?, p(1)?),
        "klein4" => Ok(generators::klein4()),
        "q8" => Ok(generators::q8()),
        "truncated-add" => generators::truncated_add(p(0)?),
        "full-transformation" => generators::full_transformation(p(0)?),
        "symmetric" => generators::symmetric(p(0)?),
        _ => Err(Error::Shape(format!("unknown generator {kind:?}"))),
    }
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    fs::write(path, s)?;
    Ok(())
}

fn named_isomorphs(m: &Arc<FiniteMonoid>) -> Vec<String> {
    let cat = Catalog::builtin();
    cat.monoids()
        .filter(|(_, x)| x.order() == m.order() && find_isomorphism(m, x).is_some())
        .map(|(id, _)| id.to_string())
        .collect()
}

fn result_verdict(name: &str, r: Result<()>) -> Verdict {
    match r {
        Ok(()) => Verdict::pass(name),
        Err(e) => Verdict::fail(name, e.to_string()),
    }
}

/// Runs a parsed command; `argv` is echoed into the report.
pub fn execute(cli: &Cli, argv: Vec<String>) -> Result<Report> {
    let mut rep = Report::new(argv);
    match &cli.command {
        Command::Analyze { hom, lemmas } => {
            rep.digest_input(hom)?;
            let h = read_hom(hom)?;
            let r = analyze(&h);
            rep.set("cartesian", r.to_json());
            if *lemmas {
                rep.extend(check_closure_lemmas_on(&r));
            }
        }
        Command::Groth { action, out, report } => {
            rep.digest_input(action)?;
            let a = read_action(action)?;
            let g = groth(&a)?;
            let (r, v) = groth_projection_report(&g);
            rep.set("order", g.underlying.order());
            rep.set("is_group", g.underlying.is_group());
            rep.set("isomorphic_to", named_isomorphs(&g.underlying));
            rep.set("is_fibration", r.is_fibration);
            if *report {
                rep.set("cartesian", r.to_json());
            }
            rep.extend(v);
            if let Some(out) = out {
                let stem = out
                    .file_stem()
                    .ok_or_else(|| Error::Shape("--out needs a file name".into()))?
                    .to_string_lossy()
                    .into_owned();
                write_json(out, &serde_json::to_value(g.underlying.as_ref())?)?;
                let side = |suffix: &str| out.with_file_name(format!("{stem}.{suffix}.json"));
                let id = MonoidRef::Id(stem.clone());
                let inline = |m: &FiniteMonoid| MonoidRef::Inline(m.to_json());
                write_json(
                    &side("projection"),
                    &json!({"source": id, "target": inline(g.projection.target()), "map": g.projection.map()}),
                )?;
                write_json(
                    &side("inclusion"),
                    &json!({"source": inline(g.inclusion.source()), "target": id, "map": g.inclusion.map()}),
                )?;
                rep.set("written", [out.clone(), side("projection"), side("inclusion")]);
            }
        }
        Command::Cleavage { hom, all, extract, limit } => {
            rep.digest_input(hom)?;
            let h = read_hom(hom)?;
            let cls = if *all { enumerate_cleavages(&h, *limit)? } else { vec![canonical_cleavage(&h)?] };
            rep.set("count", cls.len());
            rep.set("cleavages", cls.iter().map(|c| c.to_json()).collect::<Vec<_>>());
            if *extract {
                let act = extract_action(&cls[0]);
                let lax = validate_lax(&act);
                rep.set("action", act.to_json());
                rep.set("is_pseudo", act.is_pseudo());
                rep.extend(lax.verdicts);
                rep.extend([result_verdict("reconstruct-iso-over-base", reconstruct(&cls[0]).map(|_| ()))]);
                for other in &cls[1..] {
                    rep.extend([transport(&CleavageChange::between(&cls[0], other)?).2]);
                }
            }
        }
        Command::Lax {
            command: LaxCommand::Validate { action },
        } => {
            rep.digest_input(action)?;
            let a = read_action(action)?;
            let r = validate_lax(&a);
            rep.set("is_pseudo", r.is_pseudo);
            rep.set("is_strict", a.is_strict());
            rep.extend(r.verdicts);
        }
        Command::Aut { hom, oracle } => {
            rep.digest_input(hom)?;
            let h = read_hom(hom)?;
            let cl = canonical_cleavage(&h)?;
            let auts = aut_a(&cl)?;
            let c = compute_c(&cl)?;
            let table = rho(&auts, &c, &cl);
            rep.set("count", auts.len());
            rep.set("automorphisms", &auts);
            rep.set("c", &c);
            rep.set("rho", &table.images);
            rep.extend(c.audit());
            rep.extend(table.verdicts);
            if *oracle {
                rep.extend([oracle_check(&cl)?]);
            }
        }
        Command::H2 { module, regular, limit } => {
            rep.digest_input(module)?;
            let m = read_module(module)?;
            let h = h2_bounded(&m, *regular, *limit)?;
            rep.set("module", m.to_json());
            rep.set("cocycles", h.cocycles.len());
            rep.set("classes", &h.classes);
            match verify_h2_bijection(&m, *regular) {
                Ok(b) => {
                    rep.set("congruence_classes", b.congruence_classes);
                    rep.set("extensions", b.extensions);
                    rep.extend(b.verdicts);
                }
                Err(e) if e.is_size_limit() => rep.set("congruence_classes", format!("not computed: {e}")),
                Err(e) => return Err(e),
            }
        }
        Command::VerifyExact { hom } => {
            rep.digest_input(hom)?;
            let h = read_hom(hom)?;
            let r = verify_exact_sequences(&canonical_cleavage(&h)?, cli.seed)?;
            rep.set("seed", cli.seed);
            rep.set("counts", &r.counts);
            rep.extend(r.verdicts);
        }
        Command::Generate(g) => {
            let m = generate(&g.kind, &g.params)?;
            rep.set("monoid", &m);
            if let Some(out) = &g.out {
                write_json(out, &serde_json::to_value(&m)?)?;
            }
        }
        Command::Suite { scope } => {
            if scope != "all" && !SCOPES.contains(&scope.as_str()) {
                return Err(Error::Shape(format!("unknown scope {scope:?}; expected all or one of {SCOPES:?}")));
            }
            let dir = catalog_dir();
            let (cat, broken) = Catalog::load(&dir)
                .map_err(|e| Error::Catalog(format!("cannot read catalog {}: {e}", dir.display())))?;
            let r = run_suite(&cat, &broken, Some(scope), cli.seed);
            rep.set("catalog", dir.display().to_string());
            rep.set("checks", r.rows.len());
            rep.extend(r.verdicts());
        }
        Command::WriteCatalog { out } => {
            let dir = out.clone().unwrap_or_else(catalog_dir);
            let cat = Catalog::builtin();
            cat.write(&dir)?;
            rep.set("written", cat.files().len());
            rep.set("directory", dir.display().to_string());
        }
    }
    Ok(rep)
}

/// Parses `args` (program name first), runs, prints and returns the exit code.
pub fn main_with(args: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match execute(&cli, args[1..].to_vec()) {
        Ok(rep) => {
            print!("{}", rep.render(cli.format));
            match rep.first_failure() {
                None => EXIT_PASS,
                Some(v) => {
                    eprintln!("{v}");
                    EXIT_FAIL
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
