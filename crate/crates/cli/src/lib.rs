//! Command-line front end. [`run`] parses arguments, executes one command
//! and returns the exit code: 0 when every checked property holds, 1 when a
//! property fails (with a witness), 2 on usage or input errors.
//!
//! Lines starting with `#?` are the machine-readable part of each report.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use ultraposet::complex::{complex_algebra, givant_check};
use ultraposet::fol::{parse_formula, Assignment, Precondition, ReplayError, Replayer};
use ultraposet::format::{load_structure, print_structure, save_structure};
use ultraposet::gen::{parse_properties, run_campaign, CampaignConfig};
use ultraposet::order::{dm_completion, is_monotone, preservation_verdict, set_label, Preservation};
use ultraposet::product::{
    direct_product, los_check, make_filter, reduced_product, Family, FilterSpec,
};
use ultraposet::structure::Structure;
use ultraposet::{Caps, ElemId};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "ultraposet", version, about = "Sup-preserving operations, products and ultraproducts of finite posets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a structure and classify each operation.
    Check { file: PathBuf },
    /// Direct product of the given structures.
    Product {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Reduced product modulo the filter generated by J (an ultraproduct when |J| = 1).
    Ultraproduct {
        /// Comma-separated generator indices, 0-based.
        #[arg(long)]
        filter: String,
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare a formula in every factor with the reduced product.
    Los {
        #[arg(long)]
        formula: String,
        /// `NAME=LABEL,...` for one factor; repeat once per factor.
        #[arg(long)]
        assign: Vec<String>,
        #[arg(long)]
        filter: String,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Dedekind-MacNeille completion of the order.
    Complete {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Complex algebra of a relational structure.
    Cm {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare the complex algebra of an ultraproduct with the completed
    /// ultraproduct of complex algebras.
    Givant {
        #[arg(long)]
        filter: String,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Replay the supremum-transfer argument for a unary operation.
    Replay {
        #[arg(long)]
        op: String,
        /// Comma-separated element labels (may be empty).
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long)]
        bound: String,
        file: PathBuf,
    },
    /// Randomized property campaign.
    Campaign {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Comma-separated subset of theorem1, lemma1, quasi, los, givant.
        #[arg(long, default_value = "theorem1,lemma1,quasi,los,givant")]
        props: String,
        #[arg(long, default_value_t = 8)]
        max_carrier: usize,
        #[arg(long, default_value_t = 4)]
        max_index: usize,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
    },
}

/// An input or usage problem; reported on stderr with exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> UsageError {
        UsageError(e.to_string())
    }
}

type Outcome = Result<i32, UsageError>;

/// Runs one command line (`args[0]` is the program name).
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    if let Err(e) = install_caps() {
        let _ = writeln!(err, "error: {}", e.0);
        return EXIT_USAGE;
    }
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.0);
            EXIT_USAGE
        }
    }
}

fn install_caps() -> Result<(), UsageError> {
    match std::env::var("ULTRAPOSET_CAPS") {
        Ok(text) if !text.trim().is_empty() => {
            let caps = Caps::parse(&text).map_err(|e| UsageError(format!("ULTRAPOSET_CAPS: {e}")))?;
            // A second install in the same process keeps the first caps.
            let _ = caps.install();
            Ok(())
        }
        _ => Ok(()),
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Check { file } => check(&file, out),
        Command::Product { files, output } => product(&files, output.as_deref(), out),
        Command::Ultraproduct { filter, files, output } => ultraproduct(&filter, &files, output.as_deref(), out),
        Command::Los { formula, assign, filter, files } => los(&formula, &assign, &filter, &files, out),
        Command::Complete { file, output } => complete(&file, output.as_deref(), out),
        Command::Cm { file, output } => cm(&file, output.as_deref(), out),
        Command::Givant { filter, files } => givant(&filter, &files, out),
        Command::Replay { op, set, bound, file } => replay(&op, &set, &bound, &file, out),
        Command::Campaign {
            seed,
            trials,
            props,
            max_carrier,
            max_index,
            max_arity,
        } => {
            let cfg = CampaignConfig {
                master_seed: seed,
                trials,
                max_carrier,
                max_index,
                max_arity,
                properties: parse_properties(&props)?,
            };
            campaign(&cfg, out)
        }
    }
}

fn load_family(files: &[PathBuf]) -> Result<Family, UsageError> {
    let members = files
        .iter()
        .map(|f| load_structure(f))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Family::new(members)?)
}

fn parse_filter(text: &str, fam: &Family) -> Result<FilterSpec, UsageError> {
    let generator = text
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| UsageError(format!("filter index `{t}` is not a number")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(make_filter(fam.index().clone(), &generator)?)
}

fn element(s: &Structure, label: &str) -> Result<ElemId, UsageError> {
    s.index_of(label)
        .ok_or_else(|| UsageError(format!("`{}` has no element `{label}`", s.name())))
}

fn emit(s: &Structure, output: Option<&Path>, out: &mut dyn Write) -> Result<(), UsageError> {
    match output {
        Some(path) => {
            save_structure(s, path)?;
            writeln!(out, "wrote {}", path.display())?;
        }
        None => write!(out, "{}", print_structure(s)?)?,
    }
    Ok(())
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn check(file: &Path, out: &mut dyn Write) -> Outcome {
    let s = load_structure(file)?;
    let p = s.order();
    writeln!(
        out,
        "structure {}: {} elements, {} order pairs",
        s.name(),
        s.len(),
        p.relation_size()
    )?;
    writeln!(out, "poset axioms: ok")?;
    let (lattice, complete) = (p.is_lattice(), p.is_complete_lattice());
    writeln!(out, "lattice: {}, complete lattice: {}", yes(lattice), yes(complete))?;
    writeln!(out, "#? check structure={} poset=ok lattice={lattice} complete={complete}", s.name())?;
    for (name, rel) in s.relations() {
        writeln!(out, "relation {name}/{}: {} tuples", rel.arity(), rel.len())?;
    }
    let mut code = EXIT_OK;
    for (name, op) in s.operations() {
        let monotone = is_monotone(p, op)?;
        let additive = preservation_verdict(p, op, Preservation::Complete)?;
        let quasi = preservation_verdict(p, op, Preservation::Quasi)?;
        writeln!(
            out,
            "op {name}/{}: monotone {}, completely additive {}, quasi-complete {}",
            op.arity(),
            yes(monotone.holds()),
            yes(additive.holds()),
            yes(quasi.holds())
        )?;
        writeln!(
            out,
            "#? op={name} monotone={} additive={} quasi={}",
            monotone.holds(),
            additive.holds(),
            quasi.holds()
        )?;
        if let Some(w) = monotone.witness() {
            let show = |t: &[ElemId]| t.iter().map(|&x| p.label(x)).collect::<Vec<_>>().join(",");
            writeln!(
                out,
                "#? witness op={name} kind=monotone lower=({}) upper=({}) f(lower)={} f(upper)={}",
                show(&w.lower),
                show(&w.upper),
                p.label(w.f_lower),
                p.label(w.f_upper)
            )?;
        }
        if let Some(w) = additive.witness() {
            writeln!(out, "#? witness op={name} kind=additive {}", w.describe(p))?;
        }
        if let Some(w) = quasi.witness() {
            writeln!(out, "#? witness op={name} kind=quasi {}", w.describe(p))?;
        }
        if !additive.holds() {
            code = EXIT_FAILED;
        }
    }
    Ok(code)
}

fn product(files: &[PathBuf], output: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let fam = load_family(files)?;
    let d = direct_product(&fam)?;
    writeln!(out, "#? product factors={} size={}", fam.len(), d.structure.len())?;
    emit(&d.structure, output, out)?;
    Ok(EXIT_OK)
}

fn ultraproduct(filter: &str, files: &[PathBuf], output: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let fam = load_family(files)?;
    let fs = parse_filter(filter, &fam)?;
    let red = reduced_product(&fam, &fs)?;
    let j: Vec<String> = fs.generator().iter().map(|i| i.to_string()).collect();
    writeln!(
        out,
        "#? ultraproduct generator={} ultra={} size={}",
        j.join(","),
        fs.is_ultra(),
        red.structure.len()
    )?;
    emit(&red.structure, output, out)?;
    Ok(EXIT_OK)
}

fn parse_assignment(text: &str, m: &Structure) -> Result<Assignment, UsageError> {
    let mut a = Assignment::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        let (name, label) = part
            .split_once('=')
            .ok_or_else(|| UsageError(format!("assignment `{part}` is not NAME=LABEL")))?;
        a.insert(name.trim(), element(m, label.trim())?);
    }
    Ok(a)
}

fn los(formula: &str, assign: &[String], filter: &str, files: &[PathBuf], out: &mut dyn Write) -> Outcome {
    let fam = load_family(files)?;
    let fs = parse_filter(filter, &fam)?;
    let phi = parse_formula(formula, &fam.signature())?;
    let assignments: Vec<Assignment> = if assign.is_empty() {
        vec![Assignment::new(); fam.len()]
    } else if assign.len() == fam.len() {
        assign
            .iter()
            .zip(fam.members())
            .map(|(text, m)| parse_assignment(text, m))
            .collect::<Result<_, _>>()?
    } else {
        return Err(UsageError(format!(
            "{} --assign options for {} factors",
            assign.len(),
            fam.len()
        )));
    };
    let rep = los_check(&fam, &fs, &phi, &assignments)?;
    let j_true: Vec<String> = rep.j_true.iter().map(|i| i.to_string()).collect();
    writeln!(out, "formula: {phi}")?;
    writeln!(out, "factors satisfying it: {{{}}}", j_true.join(","))?;
    writeln!(out, "in filter: {}, product satisfies: {}", yes(rep.in_filter), yes(rep.product_satisfies))?;
    if !rep.ultra {
        writeln!(out, "filter is not ultra: agreement is informational")?;
    }
    writeln!(
        out,
        "#? los j_true={} in_filter={} product={} agree={} ultra={}",
        j_true.join(","),
        rep.in_filter,
        rep.product_satisfies,
        rep.agree,
        rep.ultra
    )?;
    Ok(if rep.ultra && !rep.agree { EXIT_FAILED } else { EXIT_OK })
}

fn complete(file: &Path, output: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let s = load_structure(file)?;
    let c = dm_completion(s.order())?;
    let added: Vec<&str> = c
        .lattice
        .elements()
        .filter(|&e| c.preimage(e).is_none())
        .map(|e| c.lattice.label(e))
        .collect();
    writeln!(
        out,
        "#? completion size={} added={} identity={}",
        c.lattice.len(),
        added.len(),
        c.is_identity()
    )?;
    if !added.is_empty() {
        writeln!(out, "new elements: {}", added.join(" "))?;
    }
    if !s.operations().is_empty() || !s.relations().is_empty() {
        writeln!(out, "note: only the order is completed; relations and operations are dropped")?;
    }
    emit(&Structure::new(format!("{}_completion", s.name()), c.lattice), output, out)?;
    Ok(EXIT_OK)
}

fn cm(file: &Path, output: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let s = load_structure(file)?;
    let b = complex_algebra(&s)?;
    writeln!(
        out,
        "#? cm atoms={} size={} operators={}",
        b.atom_count(),
        b.len(),
        b.operators().keys().cloned().collect::<Vec<_>>().join(",")
    )?;
    emit(&b.to_structure(&format!("cm_{}", s.name()))?, output, out)?;
    Ok(EXIT_OK)
}

fn givant(filter: &str, files: &[PathBuf], out: &mut dyn Write) -> Outcome {
    let fam = load_family(files)?;
    let fs = parse_filter(filter, &fam)?;
    let rep = givant_check(&fam, &fs)?;
    writeln!(out, "complex algebra of the ultraproduct: {} elements", rep.lhs.len())?;
    writeln!(out, "completed ultraproduct of complex algebras: {} elements", rep.rhs.len())?;
    for (x, &y) in rep.canonical_map.iter().enumerate() {
        writeln!(out, "  {} -> {}", rep.rhs.lattice().label(x), rep.lhs.lattice().label(y))?;
    }
    writeln!(out, "#? givant size={} iso={}", rep.lhs.len(), rep.is_iso)?;
    Ok(if rep.is_iso { EXIT_OK } else { EXIT_FAILED })
}

fn replay(op: &str, set: &str, bound: &str, file: &Path, out: &mut dyn Write) -> Outcome {
    let s = load_structure(file)?;
    let p = s.order();
    let xs: Vec<ElemId> = set
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| element(&s, t.trim()))
        .collect::<Result<_, _>>()?;
    let y = element(&s, bound)?;
    let replayer = match Replayer::new(&s, op) {
        Ok(r) => r,
        Err(ReplayError::Precondition(Precondition::NotAdditive(w))) => {
            writeln!(out, "`{op}` is not completely additive")?;
            writeln!(out, "#? replay op={op} additive=false")?;
            writeln!(out, "#? witness op={op} kind=additive {}", w.describe(p))?;
            return Ok(EXIT_FAILED);
        }
        Err(e) => return Err(e.into()),
    };
    let rep = replayer.replay(&xs, y)?;
    writeln!(out, "X = {}", set_label(xs.iter().map(|&x| p.label(x))))?;
    writeln!(out, "s = sup X = {}, y = {}, f(s) = {}", p.label(rep.s), p.label(rep.y), p.label(rep.f_s))?;
    writeln!(out, "A = {}", set_label(rep.a.iter().map(|&x| p.label(x))))?;
    writeln!(out, "sigma: {}", replayer.formulas().sigma)?;
    writeln!(out, "phi: {}", replayer.formulas().phi)?;
    for (step, holds) in rep.steps() {
        writeln!(out, "  {step}: {}", if holds { "true" } else { "FALSE" })?;
    }
    let flags: Vec<String> = rep
        .steps()
        .iter()
        .enumerate()
        .map(|(i, (_, holds))| format!("step{}={holds}", i + 1))
        .collect();
    writeln!(out, "#? replay op={op} s={} y={} {}", p.label(rep.s), p.label(rep.y), flags.join(" "))?;
    Ok(if rep.all_steps() { EXIT_OK } else { EXIT_FAILED })
}

fn campaign(cfg: &CampaignConfig, out: &mut dyn Write) -> Outcome {
    let rep = run_campaign(cfg)?;
    writeln!(out, "{rep}")?;
    Ok(if rep.all_pass() { EXIT_OK } else { EXIT_FAILED })
}
