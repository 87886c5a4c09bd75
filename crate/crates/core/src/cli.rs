//! Command layer behind the `regvar` binary.
//!
//! Every run is described by a serializable [`RunConfig`]; [`run`] executes
//! it, writes any output files and returns what goes to stdout together with
//! the exit code.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::certify::{classify, ScanOptions, Verdict};
use crate::curves::{curves_csv, curves_svg, trace_curves, TraceOptions};
use crate::error::{invalid, Error, Result};
use crate::measures::{build_noise_law, CounterexampleSpec, Distribution, FilterKind, FilterModel, Kernel, Weights};
use crate::simulate::{
    verify_integral, verify_product, verify_slow_variation_sum, verify_weighted_sum, LevyModel, SimOptions, TailReport,
};

/// The shipped scenario catalog.
pub const SCENARIOS_JSON: &str = include_str!("../data/scenarios.json");
/// JSON schema for verdicts printed by `check`.
pub const VERDICT_SCHEMA_JSON: &str = include_str!("../data/verdict.schema.json");

/// Exit code when a verification run completes but a check fails.
pub const EXIT_CHECK_FAILED: i32 = 4;
/// Exit code for invalid input.
pub const EXIT_INVALID: i32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub version: u32,
    pub scenarios: Vec<Scenario>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    #[serde(rename = "ref")]
    pub reference: String,
    pub description: String,
    pub model: ScenarioModel,
    pub alpha: f64,
    pub n: usize,
    pub seed: u64,
    #[serde(default)]
    pub probes: Vec<f64>,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

/// Descriptors are in the string forms accepted by [`Distribution`],
/// [`Kernel`] and [`Weights::parse`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScenarioModel {
    WeightedSum { weights: String, noise: String },
    Product { factor: String, noise: String },
    Integral {
        kernel: String,
        jump: String,
        intensity: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        horizon: Option<f64>,
    },
    SlowvarSum { q: usize, noise: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum CheckSpec {
    RatioSe { x: f64, sigmas: f64 },
    RatioRange { x: f64, lo: f64, hi: f64 },
    ExactRatioRange { x: f64, lo: f64, hi: f64 },
    LevyRatioRange { x: f64, lo: f64, hi: f64 },
    Index { target: f64, tol: f64 },
    Oscillation { min: f64 },
    ExactAgreement { sigmas: f64 },
}

impl CheckSpec {
    pub fn apply(&self, r: &mut TailReport) -> bool {
        match *self {
            CheckSpec::RatioSe { x, sigmas } => r.check_ratio_se(x, sigmas),
            CheckSpec::RatioRange { x, lo, hi } => r.check_ratio_range(x, lo, hi),
            CheckSpec::ExactRatioRange { x, lo, hi } => r.check_exact_ratio_range(x, lo, hi),
            CheckSpec::LevyRatioRange { x, lo, hi } => r.check_levy_ratio_range(x, lo, hi),
            CheckSpec::Index { target, tol } => r.check_index(target, tol),
            CheckSpec::Oscillation { min } => r.check_oscillation(min),
            CheckSpec::ExactAgreement { sigmas } => r.check_exact_agreement(sigmas),
        }
    }
}

pub fn catalog() -> Catalog {
    serde_json::from_str(SCENARIOS_JSON).expect("shipped scenario catalog parses")
}

pub fn scenario(name: &str) -> Result<Scenario> {
    catalog()
        .scenarios
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownScenario(name.to_string()))
}

impl Scenario {
    /// Runs the scenario and applies its checks. `n` and `seed` override the
    /// catalog defaults.
    pub fn run(&self, n: Option<usize>, seed: Option<u64>) -> Result<TailReport> {
        let opts = SimOptions::new(n.unwrap_or(self.n), seed.unwrap_or(self.seed), &self.probes);
        let mut r = match &self.model {
            ScenarioModel::WeightedSum { weights, noise } => {
                verify_weighted_sum(&Weights::parse(weights)?, &noise.parse()?, self.alpha, &opts)?
            }
            ScenarioModel::Product { factor, noise } => {
                verify_product(&factor.parse()?, &noise.parse()?, self.alpha, &opts)?
            }
            ScenarioModel::Integral { kernel, jump, intensity, horizon } => {
                let kernel: Kernel = kernel.parse()?;
                let levy = LevyModel::new(jump.parse()?, *intensity)?;
                verify_integral(&kernel, &levy, self.alpha, *horizon, &opts)?
            }
            ScenarioModel::SlowvarSum { q, noise } => verify_slow_variation_sum(*q, &noise.parse()?, &opts)?,
        };
        r.scenario = self.name.clone();
        for c in &self.checks {
            c.apply(&mut r);
        }
        Ok(r)
    }
}

/// What `check` classifies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckTarget {
    Weights(String),
    Dist(String),
    Kernel(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    Check {
        target: CheckTarget,
        alpha: f64,
        #[serde(default)]
        delta: Option<f64>,
        #[serde(default)]
        theta_max: Option<f64>,
        #[serde(default)]
        tol: Option<f64>,
    },
    Counterexample {
        alpha: f64,
        #[serde(default)]
        theta0: Option<f64>,
        #[serde(default)]
        weights: Option<String>,
        a: f64,
        b: f64,
        #[serde(default)]
        trunc: Option<f64>,
        n: usize,
        seed: u64,
    },
    Curves {
        branches: i64,
        #[serde(default)]
        theta_max: Option<f64>,
    },
    Verify {
        scenario: String,
        #[serde(default)]
        n: Option<usize>,
        #[serde(default)]
        seed: Option<u64>,
    },
    Catalog,
}

/// A complete, reproducible invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    /// File (curves) or directory (counterexample, verify) for outputs.
    #[serde(default)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
    pub files: Vec<PathBuf>,
}

/// Classifies weights, a random factor or a kernel at exponent `alpha`.
pub fn cmd_check(
    target: &CheckTarget,
    alpha: f64,
    delta: Option<f64>,
    theta_max: Option<f64>,
    tol: Option<f64>,
) -> Result<Verdict> {
    let kind = match target {
        CheckTarget::Weights(s) => FilterKind::WeightedSum { weights: Weights::parse(s)? },
        CheckTarget::Dist(s) => FilterKind::Product { factor: s.parse()? },
        CheckTarget::Kernel(s) => FilterKind::KernelIntegral { kernel: s.parse()? },
    };
    if let Some(t) = theta_max {
        if !(t > 0.0 && t.is_finite()) {
            return Err(invalid(format!("theta-max must be positive, got {t}")));
        }
    }
    let mut opts = ScanOptions::default();
    if let Some(t) = tol {
        if !(t > 0.0) {
            return Err(invalid(format!("tol must be positive, got {t}")));
        }
        opts.tol = t;
    }
    let model = FilterModel::new(kind, alpha, delta)?;
    classify(&model, theta_max, &opts)
}

/// Filter used to exhibit a counterexample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "filter", rename_all = "snake_case")]
pub enum CounterexampleFilter {
    WeightedSum { weights: String },
    /// `Y` on `{1, e^{pi/theta0}}` with masses balanced so that
    /// `E[Y^{alpha + i theta0}] = 0`.
    Product { factor: Distribution },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleArtifact {
    pub spec: CounterexampleSpec,
    pub noise: String,
    pub theta0_derived: bool,
    pub filter: CounterexampleFilter,
    /// `sup - inf` of `x^alpha P(Z > x)` in closed form.
    pub amplitude: f64,
}

/// Builds the log-periodic noise law, its exact tail table and a Monte Carlo
/// report on the filtered output.
pub fn cmd_counterexample(
    alpha: f64,
    theta0: Option<f64>,
    weights: Option<&str>,
    a: f64,
    b: f64,
    trunc: Option<f64>,
    sim: &SimOptions,
) -> Result<(CounterexampleArtifact, String, TailReport)> {
    if a == 0.0 && b == 0.0 {
        return Err(invalid("a = b = 0 gives the power law itself: trivial example"));
    }
    if a * a + b * b > 1.0 {
        return Err(invalid(format!("a^2 + b^2 = {} exceeds 1: the density factor would go negative", a * a + b * b)));
    }
    let parsed = weights.map(Weights::parse).transpose()?;
    let (theta0, derived) = match (theta0, &parsed) {
        (Some(t), _) => (t, false),
        (None, Some(w)) => {
            let model = FilterModel::new(FilterKind::WeightedSum { weights: w.clone() }, alpha, None)?;
            match classify(&model, None, &ScanOptions::default())? {
                Verdict::NotDetermining { theta0, .. } => (theta0, true),
                v => {
                    return Err(invalid(format!(
                        "weights are {} at alpha = {alpha}; no theta0 to build a counterexample from",
                        v.kind_name()
                    )))
                }
            }
        }
        (None, None) => return Err(invalid("theta0 is required unless weights with a real zero are given")),
    };
    let mut spec = CounterexampleSpec::new(alpha, theta0, a, b)?;
    if let Some(t) = trunc {
        spec = spec.with_trunc(t)?;
    }
    let law = build_noise_law(&spec)?;
    let noise = law.to_noise();

    let mut table = String::from("x,nu_tail,mu_tail,z_tail,scaled_z_tail\n");
    let x0 = 2.0 * spec.trunc.max(1.0);
    let per = 200;
    for k in 0..=(3 * per) {
        let x = x0 * spec.period_ratio().powf(k as f64 / per as f64);
        let z = law.z_tail(x);
        let _ = writeln!(
            table,
            "{x:.12e},{:.12e},{:.12e},{z:.12e},{:.12e}",
            spec.nu_tail(x),
            law.mu_tail(x),
            x.powf(alpha) * z
        );
    }

    let (filter, mut report) = match &parsed {
        Some(w) => (
            CounterexampleFilter::WeightedSum { weights: weights.unwrap_or_default().to_string() },
            verify_weighted_sum(w, &noise, alpha, sim)?,
        ),
        None => {
            let r = (PI / theta0).exp();
            let top = r.powf(alpha);
            let factor = Distribution::Discrete { atoms: vec![(1.0, top / (1.0 + top)), (r, 1.0 / (1.0 + top))] };
            let report = verify_product(&factor, &noise, alpha, sim)?;
            (CounterexampleFilter::Product { factor }, report)
        }
    };
    report.scenario = "counterexample".into();
    report.check_index(alpha, 0.1);
    report.check_oscillation(0.1f64.min(0.5 * spec.amplitude()));
    let artifact = CounterexampleArtifact {
        spec,
        noise: noise.to_string(),
        theta0_derived: derived,
        filter,
        amplitude: spec.amplitude(),
    };
    Ok((artifact, table, report))
}

fn write(path: PathBuf, contents: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(&path, contents)?;
    files.push(path);
    Ok(())
}

fn pretty<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn write_report(dir: &Path, stem: &str, r: &TailReport, files: &mut Vec<PathBuf>) -> Result<()> {
    write(dir.join(format!("{stem}.csv")), &r.to_csv(), files)?;
    write(dir.join(format!("{stem}.json")), &pretty(&r.summary_json())?, files)
}

/// Executes a run.
pub fn run(config: &RunConfig) -> Result<Outcome> {
    let mut files = Vec::new();
    let dir = config.out.clone().unwrap_or_else(|| PathBuf::from("."));
    match &config.command {
        Command::Check { target, alpha, delta, theta_max, tol } => {
            let v = cmd_check(target, *alpha, *delta, *theta_max, *tol)?;
            let json = pretty(&v)?;
            if let Some(p) = &config.out {
                write(p.clone(), &json, &mut files)?;
            }
            Ok(Outcome { stdout: json, exit_code: v.exit_code(), files })
        }
        Command::Counterexample { alpha, theta0, weights, a, b, trunc, n, seed } => {
            let sim = SimOptions::new(*n, *seed, &[]);
            let (art, table, report) = cmd_counterexample(*alpha, *theta0, weights.as_deref(), *a, *b, *trunc, &sim)?;
            write(dir.join("counterexample_noise.json"), &pretty(&art)?, &mut files)?;
            write(dir.join("counterexample_tail.csv"), &table, &mut files)?;
            write_report(&dir, "counterexample_report", &report, &mut files)?;
            write(dir.join("run_config.json"), &pretty(config)?, &mut files)?;
            let summary = serde_json::json!({
                "theta0": art.spec.theta0,
                "theta0_derived": art.theta0_derived,
                "noise": art.noise,
                "report": report.summary_json(),
            });
            let code = if report.passed() { 0 } else { EXIT_CHECK_FAILED };
            Ok(Outcome { stdout: pretty(&summary)?, exit_code: code, files })
        }
        Command::Curves { branches, theta_max } => {
            let mut opts = TraceOptions { branches: *branches, ..Default::default() };
            if let Some(t) = theta_max {
                opts.theta_max = *t;
            }
            let curves = trace_curves(&opts)?;
            let csv_path = match &config.out {
                Some(p) if p.extension().is_some_and(|e| e == "csv") => p.clone(),
                Some(p) => p.join("failure_curves.csv"),
                None => PathBuf::from("failure_curves.csv"),
            };
            write(csv_path.clone(), &curves_csv(&curves), &mut files)?;
            write(csv_path.with_extension("svg"), &curves_svg(&curves), &mut files)?;
            let max_residual = curves.iter().flat_map(|b| &b.points).map(|p| p.residual).fold(0.0, f64::max);
            let summary = serde_json::json!({
                "branches": curves.len(),
                "points": curves.iter().map(|b| b.points.len()).sum::<usize>(),
                "max_residual": max_residual,
                "anchors": curves.iter().map(|b| [b.anchor.psi1, b.anchor.psi2]).collect::<Vec<_>>(),
                "files": files,
            });
            Ok(Outcome { stdout: pretty(&summary)?, exit_code: 0, files })
        }
        Command::Verify { scenario: name, n, seed } => {
            let sc = scenario(name)?;
            let report = sc.run(*n, *seed)?;
            write_report(&dir, name, &report, &mut files)?;
            let code = if report.passed() { 0 } else { EXIT_CHECK_FAILED };
            Ok(Outcome { stdout: pretty(&report.summary_json())?, exit_code: code, files })
        }
        Command::Catalog => {
            let list: Vec<_> = catalog()
                .scenarios
                .iter()
                .map(|s| serde_json::json!({ "name": s.name, "ref": s.reference, "description": s.description }))
                .collect();
            Ok(Outcome { stdout: pretty(&list)?, exit_code: 0, files })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_parses_and_names_are_unique() {
        let c = catalog();
        let mut names: Vec<_> = c.scenarios.iter().map(|s| s.name.as_str()).collect();
        for want in ["breiman-uniform", "ou-kernel", "counterexample-sum", "slowvar-sum"] {
            assert!(names.contains(&want), "{want}");
        }
        names.sort();
        names.dedup();
        assert_eq!(names.len(), c.scenarios.len());
        for s in &c.scenarios {
            assert!(!s.reference.is_empty());
        }
        assert!(matches!(scenario("nope"), Err(Error::UnknownScenario(_))));
    }

    #[test]
    fn check_examples() {
        let v = cmd_check(&CheckTarget::Weights("0.5,0.5,1".into()), 1.0, None, None, None).unwrap();
        assert!((v.theta0().unwrap() - PI / 2f64.ln()).abs() < 1e-9);
        assert_eq!(v.exit_code(), 2);
        let v = cmd_check(&CheckTarget::Weights("1,0.4,0.3".into()), 1.0, None, None, None).unwrap();
        assert_eq!(v.exit_code(), 0);
        let v = cmd_check(&CheckTarget::Dist("gamma:2,1".into()), 1.0, None, None, None).unwrap();
        assert!(v.is_determining());
        assert!(cmd_check(&CheckTarget::Weights("1,-2".into()), 1.0, None, None, None).is_err());
    }

    #[test]
    fn counterexample_guards() {
        let sim = SimOptions::new(1000, 1, &[]);
        let e = cmd_counterexample(1.0, Some(4.0), None, 0.0, 0.0, None, &sim).unwrap_err();
        assert!(e.to_string().contains("trivial example"));
        assert!(cmd_counterexample(1.0, Some(4.0), None, 0.9, 0.5, None, &sim).is_err());
        assert!(cmd_counterexample(1.0, None, None, 0.9, 0.0, None, &sim).is_err());
        assert!(cmd_counterexample(1.0, None, Some("1,0.4,0.3"), 0.9, 0.0, None, &sim).is_err());
    }

    #[test]
    fn counterexample_derives_theta0() {
        let sim = SimOptions::new(20_000, 1, &[]);
        let (art, table, _) = cmd_counterexample(1.0, None, Some("0.5,0.5,1"), 0.9, 0.0, None, &sim).unwrap();
        assert!(art.theta0_derived);
        assert!((art.spec.theta0 - PI / 2f64.ln()).abs() < 1e-9);
        assert!(table.lines().count() > 600);
    }

    #[test]
    fn product_counterexample_factor_has_a_zero() {
        let sim = SimOptions::new(20_000, 1, &[]);
        let (art, _, _) = cmd_counterexample(1.5, Some(3.0), None, 0.5, 0.5, None, &sim).unwrap();
        let CounterexampleFilter::Product { factor } = art.filter else { panic!() };
        let v = cmd_check(&CheckTarget::Dist(factor.to_string()), 1.5, None, None, None).unwrap();
        assert!((v.theta0().unwrap() - 3.0).abs() < 1e-9, "{v:?}");
    }

    #[test]
    fn run_config_round_trips() {
        let c = RunConfig {
            command: Command::Verify { scenario: "ou-kernel".into(), n: Some(1000), seed: None },
            out: Some("out".into()),
        };
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&s).unwrap(), c);
    }
}
