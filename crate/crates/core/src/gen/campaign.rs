use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{check_complete_operators, givant_check};
use crate::fol::{formula_corpus, Assignment};
use crate::order::{check_lemma_equivalence, Poset};
use crate::product::{
    make_filter, preservation_check, Family, FilterSpec, IndexSet, LosChecker, Theorem1Report,
};
use crate::order::Preservation;
use crate::structure::Structure;

use super::random::{gen_monotone_op_with, gen_poset_with};
use super::{gen_additive_op, gen_downset_lattice, gen_quasi_op, gen_relational_structure, GenError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    Theorem1,
    Lemma1,
    Quasi,
    Los,
    Givant,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::Theorem1,
        Property::Lemma1,
        Property::Quasi,
        Property::Los,
        Property::Givant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Theorem1 => "theorem1",
            Property::Lemma1 => "lemma1",
            Property::Quasi => "quasi",
            Property::Los => "los",
            Property::Givant => "givant",
        }
    }

    fn stream(self) -> u64 {
        self as u64
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Property, GenError> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s.trim())
            .ok_or_else(|| GenError::ConfigOutOfRange(format!("unknown property `{s}`")))
    }
}

/// Parses a comma-separated property list such as `theorem1,quasi`.
pub fn parse_properties(list: &str) -> Result<Vec<Property>, GenError> {
    let mut out: Vec<Property> = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignConfig {
    pub master_seed: u64,
    /// Trials per property.
    pub trials: usize,
    pub max_carrier: usize,
    pub max_index: usize,
    pub max_arity: usize,
    pub properties: Vec<Property>,
}

impl Default for CampaignConfig {
    fn default() -> CampaignConfig {
        CampaignConfig {
            master_seed: 0,
            trials: 100,
            max_carrier: 8,
            max_index: 4,
            max_arity: 2,
            properties: Property::ALL.to_vec(),
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<(), GenError> {
        let check = |name: &str, v: usize, max: usize| {
            if (1..=max).contains(&v) {
                Ok(())
            } else {
                Err(GenError::ConfigOutOfRange(format!("{name} = {v}, allowed 1..={max}")))
            }
        };
        check("max_carrier", self.max_carrier, 8)?;
        check("max_index", self.max_index, 4)?;
        check("max_arity", self.max_arity, 2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub trial: usize,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub property: Property,
    pub trials: usize,
    pub passes: usize,
    pub failures: Vec<Failure>,
    /// Trials whose outcome is reported but not asserted (Łoś over a filter
    /// that is not ultra).
    pub informational: usize,
}

#[derive(Clone, Debug)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub properties: Vec<PropertyReport>,
    pub wall_time: Duration,
}

impl CampaignReport {
    pub fn all_pass(&self) -> bool {
        self.properties.iter().all(|p| p.failures.is_empty())
    }

    /// The deterministic part of the report, one line each, prefixed `#?`.
    pub fn machine_lines(&self) -> Vec<String> {
        let c = &self.config;
        let props: Vec<&str> = c.properties.iter().map(|p| p.name()).collect();
        let mut out = vec![format!(
            "#? campaign seed={} trials={} max_carrier={} max_index={} max_arity={} props={}",
            c.master_seed,
            c.trials,
            c.max_carrier,
            c.max_index,
            c.max_arity,
            props.join(",")
        )];
        for p in &self.properties {
            out.push(format!(
                "#? property={} trials={} passes={} failures={} informational={}",
                p.property,
                p.trials,
                p.passes,
                p.failures.len(),
                p.informational
            ));
            for f in &p.failures {
                out.push(format!(
                    "#? failure property={} trial={} witness={}",
                    p.property,
                    f.trial,
                    f.witness.replace('\n', " ")
                ));
            }
        }
        out
    }
}

impl fmt::Display for CampaignReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.properties {
            write!(f, "{}: {}/{} passed", p.property, p.passes, p.trials)?;
            if p.informational > 0 {
                write!(f, ", {} informational", p.informational)?;
            }
            writeln!(f)?;
            for fail in &p.failures {
                writeln!(f, "  trial {} failed: {}", fail.trial, fail.witness)?;
            }
        }
        for line in self.machine_lines() {
            writeln!(f, "{line}")?;
        }
        write!(f, "wall time: {:.3}s", self.wall_time.as_secs_f64())
    }
}

enum Outcome {
    Pass,
    Fail(String),
    Informational,
}

/// Runs `trials` independent trials of each selected property. Trial `t` of
/// property `p` draws from ChaCha8 seeded with the master seed on stream
/// `8 t + p`, so results do not depend on scheduling.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport, GenError> {
    cfg.validate()?;
    let start = Instant::now();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(16);
    let mut properties = Vec::new();
    for &prop in &cfg.properties {
        let mut outcomes: Vec<Option<Outcome>> = (0..cfg.trials).map(|_| None).collect();
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    scope.spawn(move || {
                        (w..cfg.trials)
                            .step_by(workers)
                            .map(|t| (t, run_trial(cfg, prop, t)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                for (t, o) in h.join().expect("trial thread panicked") {
                    outcomes[t] = Some(o);
                }
            }
        });
        let mut report = PropertyReport {
            property: prop,
            trials: cfg.trials,
            passes: 0,
            failures: Vec::new(),
            informational: 0,
        };
        for (trial, o) in outcomes.into_iter().enumerate() {
            match o.expect("every trial ran") {
                Outcome::Pass => report.passes += 1,
                Outcome::Informational => report.informational += 1,
                Outcome::Fail(witness) => report.failures.push(Failure { trial, witness }),
            }
        }
        properties.push(report);
    }
    Ok(CampaignReport {
        config: cfg.clone(),
        properties,
        wall_time: start.elapsed(),
    })
}

/// The generator for one trial.
pub fn trial_rng(master_seed: u64, property: Property, trial: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(master_seed);
    r.set_stream(trial as u64 * 8 + property.stream());
    r
}

fn run_trial(cfg: &CampaignConfig, prop: Property, trial: usize) -> Outcome {
    let mut r = trial_rng(cfg.master_seed, prop, trial);
    let result = match prop {
        Property::Theorem1 => preservation_trial(cfg, &mut r, Preservation::Complete),
        Property::Quasi => preservation_trial(cfg, &mut r, Preservation::Quasi),
        Property::Lemma1 => lemma_trial(cfg, &mut r),
        Property::Los => los_trial(cfg, &mut r),
        Property::Givant => givant_trial(cfg, &mut r),
    };
    result.unwrap_or_else(|e| Outcome::Fail(format!("error: {e}")))
}

fn ultrafilter(r: &mut ChaCha8Rng, k: usize) -> Result<FilterSpec, String> {
    let j = r.random_range(0..k);
    make_filter(IndexSet::new(k).map_err(|e| e.to_string())?, &[j]).map_err(|e| e.to_string())
}

/// A down-set lattice with at most `max` elements.
fn small_lattice(r: &mut ChaCha8Rng, max: usize) -> Result<Poset, GenError> {
    for _ in 0..16 {
        let l = gen_downset_lattice(r.next_u64(), r.random_range(1..=4))?;
        if l.len() <= max {
            return Ok(l);
        }
    }
    Ok(Poset::chain(max.min(2)))
}

/// A family of down-set lattices with a unary `f` and, when allowed, a binary
/// `g`, all completely additive (or quasi-complete in quasi mode).
pub fn preservation_family(cfg: &CampaignConfig, r: &mut ChaCha8Rng, mode: Preservation) -> Result<Family, GenError> {
    let k = r.random_range(1..=cfg.max_index);
    let mut members = Vec::new();
    for i in 0..k {
        let l = small_lattice(r, cfg.max_carrier)?;
        let mut m = Structure::new(format!("m{i}"), l.clone());
        for (name, arity) in [("f", 1), ("g", 2)] {
            if arity > cfg.max_arity {
                continue;
            }
            let seed = r.next_u64();
            let op = match mode {
                Preservation::Complete => gen_additive_op(seed, &l, arity)?,
                Preservation::Quasi => gen_quasi_op(seed, &l, arity)?,
            };
            m = m.with_operation(name, op)?;
        }
        members.push(m);
    }
    Family::new(members).map_err(|e| GenError::ConfigOutOfRange(e.to_string()))
}

fn describe_failure(report: &Theorem1Report) -> String {
    let u = &report.ultraproduct.structure;
    if let Some(v) = report.verdicts.iter().find(|v| !v.holds) {
        return format!("operation `{}` in the ultraproduct: {}", v.op, v.witness.clone().unwrap_or_default());
    }
    match report.traces.iter().find(|t| !t.consistent) {
        Some(t) => format!(
            "trace for `{}` at s={}, y={} is inconsistent (sigma {:?}, phi {:?})",
            t.op,
            u.label(t.s),
            u.label(t.y),
            t.sigma_members,
            t.phi_members
        ),
        None => "unknown".into(),
    }
}

fn preservation_trial(cfg: &CampaignConfig, r: &mut ChaCha8Rng, mode: Preservation) -> Result<Outcome, GenError> {
    let fam = preservation_family(cfg, r, mode)?;
    let fs = match ultrafilter(r, fam.len()) {
        Ok(fs) => fs,
        Err(e) => return Ok(Outcome::Fail(e)),
    };
    Ok(match preservation_check(&fam, &fs, mode) {
        Ok(report) if report.pass => Outcome::Pass,
        Ok(report) => Outcome::Fail(describe_failure(&report)),
        Err(e) => Outcome::Fail(e.to_string()),
    })
}

fn lemma_trial(cfg: &CampaignConfig, r: &mut ChaCha8Rng) -> Result<Outcome, GenError> {
    let n = r.random_range(1..=cfg.max_carrier);
    let p = gen_poset_with(r, n)?;
    // The lemma relates an operation to its unary instances, so it needs at
    // least two arguments whatever `max_arity` says.
    let f = gen_monotone_op_with(r, &p, 2)?;
    let report = check_lemma_equivalence(&p, &f)?;
    Ok(if report.agree {
        Outcome::Pass
    } else {
        Outcome::Fail(format!(
            "joint verdict {} disagrees with unary instances on a {n}-element poset, table {:?}",
            report.joint.holds(),
            f.values()
        ))
    })
}

fn los_trial(cfg: &CampaignConfig, r: &mut ChaCha8Rng) -> Result<Outcome, GenError> {
    let k = r.random_range(1..=cfg.max_index);
    let mut members = Vec::new();
    for i in 0..k {
        let n = r.random_range(1..=cfg.max_carrier.min(4));
        let p = gen_poset_with(r, n)?;
        let f = gen_monotone_op_with(r, &p, 1)?;
        members.push(Structure::new(format!("m{i}"), p).with_operation("f", f)?);
    }
    let fam = Family::new(members).map_err(|e| GenError::ConfigOutOfRange(e.to_string()))?;
    let ultra = k == 1 || r.random_range(0..4) != 0;
    let generator: Vec<usize> = if ultra {
        vec![r.random_range(0..k)]
    } else {
        let a = r.random_range(0..k);
        let b = (a + r.random_range(1..k)) % k;
        vec![a, b]
    };
    let fail = |e: &dyn fmt::Display| Ok(Outcome::Fail(e.to_string()));
    let fs = match make_filter(fam.index().clone(), &generator) {
        Ok(fs) => fs,
        Err(e) => return fail(&e),
    };
    let corpus = formula_corpus(&fam.signature(), "f").map_err(|e| GenError::ConfigOutOfRange(e.to_string()))?;
    let phi = &corpus[r.random_range(0..corpus.len())];
    let assignments: Vec<Assignment> = fam
        .members()
        .iter()
        .map(|m| {
            Assignment::new()
                .with("s", r.random_range(0..m.len()))
                .with("y", r.random_range(0..m.len()))
        })
        .collect();
    let checker = match LosChecker::new(&fam, &fs) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    Ok(match checker.check(phi, &assignments) {
        Ok(rep) if !rep.ultra => Outcome::Informational,
        Ok(rep) if rep.agree => Outcome::Pass,
        Ok(rep) => Outcome::Fail(format!(
            "`{phi}`: members {:?} satisfy it, product says {}",
            rep.j_true, rep.product_satisfies
        )),
        Err(e) => Outcome::Fail(e.to_string()),
    })
}

fn givant_trial(cfg: &CampaignConfig, r: &mut ChaCha8Rng) -> Result<Outcome, GenError> {
    let k = r.random_range(1..=cfg.max_index.min(3));
    let mut members = Vec::new();
    for _ in 0..k {
        let n = r.random_range(1..=cfg.max_carrier.min(3));
        members.push(gen_relational_structure(r.next_u64(), n, &[("R", 2)])?);
    }
    let fam = Family::new(members).map_err(|e| GenError::ConfigOutOfRange(e.to_string()))?;
    let fs = match ultrafilter(r, k) {
        Ok(fs) => fs,
        Err(e) => return Ok(Outcome::Fail(e)),
    };
    Ok(match givant_check(&fam, &fs) {
        Ok(rep) if rep.is_iso && check_complete_operators(&rep.lhs) => Outcome::Pass,
        Ok(rep) => Outcome::Fail(format!(
            "canonical map {:?} is not an isomorphism (generator {:?})",
            rep.canonical_map,
            fs.generator()
        )),
        Err(e) => Outcome::Fail(e.to_string()),
    })
}
