//! The bundled verification suite: one verdict per acceptance criterion.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use germlift::fixtures;
use germlift::io::{AugmentCheck, Manifest, ManifestError, Task, TaskArgs, TaskOp};
use serde::Serialize;

use crate::properties::{self, Outcome};
use crate::report::{Report, Verdict};
use crate::runner::{run_task, Options, UsageError};

pub const SUITE_SCHEMA: &str = "germlift-suite/1";

/// Instance values of `k` standing in for statements about every `k`.
pub const SCALE_KS: [u32; 4] = [2, 3, 4, 5];

/// The manifests the suite reads, keyed by bundled file name.
#[derive(Clone, Debug)]
pub struct Fixtures {
    manifests: BTreeMap<&'static str, Manifest>,
}

impl Fixtures {
    pub fn bundled() -> Result<Self, ManifestError> {
        let mut manifests = BTreeMap::new();
        for (name, text) in fixtures::ALL {
            manifests.insert(*name, text.parse()?);
        }
        Ok(Fixtures { manifests })
    }

    /// Files in `dir` named like a bundled fixture replace it.
    pub fn from_dir(dir: &Path) -> Result<Self, ManifestError> {
        if !dir.is_dir() {
            return Err(ManifestError::Io {
                path: dir.display().to_string(),
                source: std::io::Error::new(std::io::ErrorKind::NotFound, "not a directory"),
            });
        }
        let mut fx = Fixtures::bundled()?;
        for (name, _) in fixtures::ALL {
            let path = dir.join(name);
            if path.exists() {
                fx.manifests.insert(*name, Manifest::load(&path)?);
            }
        }
        Ok(fx)
    }

    pub fn get(&self, name: &str) -> Option<&Manifest> {
        self.manifests.get(name)
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    /// Criterion numbers or tags; empty selects everything.
    pub only: Vec<String>,
    pub cases: usize,
    pub seed: u64,
    pub options: Options,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            only: Vec::new(),
            cases: properties::DEFAULT_CASES,
            seed: properties::DEFAULT_SEED,
            options: Options::default(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Criterion {
    pub number: u8,
    pub tags: &'static [&'static str],
    pub title: &'static str,
}

pub const CRITERIA: [Criterion; 8] = [
    Criterion {
        number: 1,
        tags: &["hk", "lift"],
        title: "H_k generators certified liftable, k = 2, 3",
    },
    Criterion {
        number: 2,
        tags: &["hk", "transport"],
        title: "transport by G_k reproduces the F_k table, k = 2, 3",
    },
    Criterion {
        number: 3,
        tags: &["hk", "remark"],
        title: "projected combinations give Lift(H_k) up to scalars, k = 2, 3",
    },
    Criterion {
        number: 4,
        tags: &["hk", "pipeline"],
        title: "unfolding pipeline at k = 2 equals the five-generator module",
    },
    Criterion {
        number: 5,
        tags: &["augment", "swallowtail"],
        title: "swallowtail: discriminant, Derlog(H), Euler field, transformed fields",
    },
    Criterion {
        number: 6,
        tags: &["augment", "pi2"],
        title: "pi2 of Lift(A^k f) equals pi2 of Lift(F), k = 2, 3",
    },
    Criterion {
        number: 7,
        tags: &["properties"],
        title: "randomized property suites",
    },
    Criterion {
        number: 8,
        tags: &["scale"],
        title: "per-k family statements as instance checks, k = 2..5",
    },
];

impl Criterion {
    pub fn selected(&self, only: &[String]) -> bool {
        only.is_empty()
            || only
                .iter()
                .any(|s| s.trim() == self.number.to_string() || self.tags.contains(&s.trim()))
    }
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub criterion: Criterion,
    pub verdict: Verdict,
    pub summary: String,
    /// Failing detail lines, one per failed check or case.
    pub problems: Vec<String>,
    pub reports: Vec<Report>,
    pub properties: Vec<Outcome>,
    pub elapsed: Duration,
}

impl CriterionResult {
    /// The line printed for this criterion.
    pub fn line(&self) -> String {
        format!(
            "criterion {} {:<15} {}: {}",
            self.criterion.number,
            self.verdict.as_str(),
            self.criterion.title,
            self.summary
        )
    }
}

struct Runner<'a> {
    fx: &'a Fixtures,
    config: &'a Config,
    cache: HashMap<(String, String), Report>,
}

impl Runner<'_> {
    fn manifest(&self, file: &str) -> Result<&Manifest, UsageError> {
        self.fx
            .get(file)
            .ok_or_else(|| UsageError(format!("fixture `{file}` is missing")))
    }

    fn task(&mut self, file: &str, task: &Task) -> Result<Report, UsageError> {
        let key = (file.to_string(), task.id.clone());
        if let Some(r) = self.cache.get(&key) {
            return Ok(r.clone());
        }
        let m = self.manifest(file)?;
        let mut r = run_task(m, task, &self.config.options)?;
        if r.verdict == Verdict::Pass {
            if let Err(e) = r.reverify() {
                r.verdict = Verdict::Fail;
                r.checks.push(crate::report::Check {
                    name: "certificates re-verify".into(),
                    verdict: Verdict::Fail,
                    detail: e,
                });
            }
        }
        self.cache.insert(key, r.clone());
        Ok(r)
    }

    fn declared(&mut self, file: &str, id: &str) -> Result<Report, UsageError> {
        let t = self
            .manifest(file)?
            .task(id)
            .cloned()
            .ok_or_else(|| UsageError(format!("fixture `{file}` has no task `{id}`")))?;
        self.task(file, &t)
    }

    fn augment(&mut self, k: u32, check: AugmentCheck) -> Result<Report, UsageError> {
        let t = Task {
            id: format!("{check}_{k}"),
            op: TaskOp::Augment,
            args: TaskArgs {
                augmentation: Some("A".into()),
                k: Some(k),
                check: Some(check),
                ..TaskArgs::default()
            },
        };
        self.task("augment.manifest", &t)
    }

    fn hk(&mut self, k: u32, id: &str) -> Result<Report, UsageError> {
        let file = match k {
            2 => "hk.manifest",
            3 => "hk3.manifest",
            4 => "hk4.manifest",
            5 => "hk5.manifest",
            _ => return Err(UsageError(format!("no fixture for k = {k}"))),
        };
        self.declared(file, id)
    }
}

fn passing_checks(reports: &[Report], prefix: &str) -> (usize, usize) {
    let mut pass = 0;
    let mut all = 0;
    for r in reports {
        for c in r.checks.iter().filter(|c| c.name.contains(prefix)) {
            all += 1;
            if c.verdict == Verdict::Pass {
                pass += 1;
            }
        }
    }
    (pass, all)
}

fn problems(reports: &[Report]) -> Vec<String> {
    let mut out = Vec::new();
    for r in reports {
        for c in r.checks.iter().filter(|c| c.verdict != Verdict::Pass) {
            let mut line = format!("{} {}: {}", c.verdict, r.task, c.name);
            if !c.detail.is_empty() {
                let _ = write!(line, " ({})", c.detail);
            }
            out.push(line);
        }
    }
    out
}

fn worst(reports: &[Report]) -> Verdict {
    reports.iter().map(|r| r.verdict).max().unwrap_or(Verdict::Fail)
}

fn from_reports(c: Criterion, reports: Vec<Report>, summary: String, start: Instant) -> CriterionResult {
    CriterionResult {
        criterion: c,
        verdict: worst(&reports),
        summary,
        problems: problems(&reports),
        reports,
        properties: Vec::new(),
        elapsed: start.elapsed(),
    }
}

fn criterion(r: &mut Runner<'_>, c: Criterion) -> Result<CriterionResult, UsageError> {
    let start = Instant::now();
    Ok(match c.number {
        1 => {
            let reps = vec![r.hk(2, "lift_H")?, r.hk(3, "lift_H")?];
            let (p, n) = passing_checks(&reps, "lifts");
            from_reports(c, reps, format!("{p}/{n} generators certified with exact witnesses"), start)
        }
        2 => {
            let reps = vec![r.hk(2, "transport")?, r.hk(3, "transport")?];
            let (p, n) = passing_checks(&reps, "transports to");
            from_reports(c, reps, format!("{p}/{n} transported generators match term for term"), start)
        }
        3 => {
            let reps = vec![r.hk(2, "remark")?, r.hk(3, "remark")?];
            let (p, n) = passing_checks(&reps, "projects to");
            from_reports(c, reps, format!("{p}/{n} combinations match with the stated scalars"), start)
        }
        4 => {
            let reps = vec![r.hk(2, "pipeline")?];
            let gens = reps[0].outputs.get("lift").map_or(0, Vec::len);
            let summary = format!("{gens} computed generators, equality by two-sided membership");
            from_reports(c, reps, summary, start)
        }
        5 => {
            let file = "augment.manifest";
            let reps = vec![
                r.declared(file, "discriminant")?,
                r.declared(file, "derlog_H")?,
                r.declared(file, "euler")?,
                r.augment(2, AugmentCheck::Tilde)?,
                r.augment(3, AugmentCheck::Tilde)?,
            ];
            let (p, n) = passing_checks(&reps[3..], "logarithmic along h");
            let summary = format!("elimination, Derlog(H), e(H) = 12 H; {p}/{n} transformed fields logarithmic with quotients");
            from_reports(c, reps, summary, start)
        }
        6 => {
            let reps = vec![r.augment(2, AugmentCheck::Pi2)?, r.augment(3, AugmentCheck::Pi2)?];
            let same = reps.iter().filter(|x| x.verdict == Verdict::Pass).count();
            from_reports(c, reps, format!("ideals equal to <X, Y> at {same}/2 values of k"), start)
        }
        7 => {
            let outcomes = properties::run_all(r.config.seed, r.config.cases);
            let ok = outcomes.iter().filter(|o| o.passed()).count();
            let mut problems = Vec::new();
            for o in &outcomes {
                for f in o.failures.iter().take(3) {
                    problems.push(format!("FAIL {}: {f}", o.property.name()));
                }
            }
            let summary = format!(
                "{ok}/{} suites clean, {} cases each, seed {:#x}",
                outcomes.len(),
                r.config.cases,
                r.config.seed
            );
            CriterionResult {
                criterion: c,
                verdict: Verdict::of(ok == outcomes.len() && r.config.cases >= properties::DEFAULT_CASES),
                summary,
                problems,
                reports: Vec::new(),
                properties: outcomes,
                elapsed: start.elapsed(),
            }
        }
        8 => {
            let mut reps = Vec::new();
            for k in SCALE_KS {
                reps.push(r.hk(k, "lift_H")?);
                reps.push(r.hk(k, "transport")?);
                reps.push(r.hk(k, "remark")?);
                reps.push(r.augment(k, AugmentCheck::Tilde)?);
                reps.push(r.augment(k, AugmentCheck::Pi2)?);
                reps.push(r.augment(k, AugmentCheck::Descend)?);
            }
            let ok = reps.iter().filter(|x| x.verdict == Verdict::Pass).count();
            let summary = format!(
                "symbolic k replaced by instances k = 2, 3, 4, 5; {ok}/{} instance tasks pass",
                reps.len()
            );
            from_reports(c, reps, summary, start)
        }
        _ => unreachable!("eight criteria"),
    })
}

/// Runs the selected criteria in order.
pub fn run(fx: &Fixtures, config: &Config) -> Result<Vec<CriterionResult>, UsageError> {
    let chosen: Vec<_> = CRITERIA.iter().filter(|c| c.selected(&config.only)).copied().collect();
    if chosen.is_empty() {
        return Err(UsageError(format!("`--only {}` selects no criterion", config.only.join(","))));
    }
    let mut r = Runner {
        fx,
        config,
        cache: HashMap::new(),
    };
    chosen.into_iter().map(|c| criterion(&mut r, c)).collect()
}

pub fn overall(results: &[CriterionResult]) -> Verdict {
    results.iter().map(|r| r.verdict).max().unwrap_or(Verdict::Fail)
}

pub fn render(results: &[CriterionResult], verbose: bool) -> String {
    let mut s = String::new();
    for r in results {
        let _ = writeln!(s, "{}  ({:.2} s)", r.line(), r.elapsed.as_secs_f64());
        for p in &r.problems {
            let _ = writeln!(s, "    {p}");
        }
        if verbose {
            for rep in &r.reports {
                for l in rep.render(true).lines() {
                    let _ = writeln!(s, "    {l}");
                }
            }
        }
    }
    let _ = writeln!(s, "suite: {}", overall(results));
    s
}

#[derive(Serialize)]
struct JsonTask<'a> {
    task: &'a str,
    op: &'a str,
    verdict: Verdict,
    summary: &'a str,
}

#[derive(Serialize)]
struct JsonProperty<'a> {
    name: &'static str,
    cases: usize,
    failures: usize,
    tally: &'a BTreeMap<&'static str, usize>,
}

#[derive(Serialize)]
struct JsonCriterion<'a> {
    number: u8,
    tags: &'a [&'a str],
    title: &'a str,
    verdict: Verdict,
    summary: &'a str,
    #[serde(skip_serializing_if = "<[String]>::is_empty")]
    problems: &'a [String],
    #[serde(skip_serializing_if = "Vec::is_empty")]
    tasks: Vec<JsonTask<'a>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    properties: Vec<JsonProperty<'a>>,
    #[serde(rename = "timing_ms", skip_serializing_if = "Option::is_none")]
    timing: Option<u128>,
}

#[derive(Serialize)]
struct JsonSuite<'a> {
    schema: &'static str,
    verdict: Verdict,
    criteria: Vec<JsonCriterion<'a>>,
}

/// Machine-readable summary; deterministic unless `timing` is set.
pub fn to_json(results: &[CriterionResult], timing: bool) -> String {
    let criteria = results
        .iter()
        .map(|r| JsonCriterion {
            number: r.criterion.number,
            tags: r.criterion.tags,
            title: r.criterion.title,
            verdict: r.verdict,
            summary: &r.summary,
            problems: &r.problems,
            tasks: r
                .reports
                .iter()
                .map(|x| JsonTask {
                    task: &x.task,
                    op: &x.op,
                    verdict: x.verdict,
                    summary: &x.summary,
                })
                .collect(),
            properties: r
                .properties
                .iter()
                .map(|o| JsonProperty {
                    name: o.property.name(),
                    cases: o.cases,
                    failures: o.failures.len(),
                    tally: &o.tally,
                })
                .collect(),
            timing: timing.then_some(r.elapsed.as_millis()),
        })
        .collect();
    let suite = JsonSuite {
        schema: SUITE_SCHEMA,
        verdict: overall(results),
        criteria,
    };
    let mut s = serde_json::to_string_pretty(&suite).expect("suite serializes");
    s.push('\n');
    s
}
