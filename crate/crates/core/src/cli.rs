//! The `gframe` command line.
//!
//! [`run`] does all the work and hands back the exit code together with what
//! should go to standard output and standard error, so tests can drive the
//! binary's logic in-process.
//!
//! Exit codes: `0` when every check passed, `1` when a check failed or a
//! construction's hypothesis did not hold, `2` for usage, I/O and parse
//! errors.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::Deserialize;

use crate::analysis::{canonical_dual, duality_defect, frame_bounds, is_dual_pair, parseval_normalize};
use crate::construct::{
    direct_sum_duals, disjoint_sum_family, lift_continuous_frame, pseudo_dual, strongly_disjoint_sum,
    ContinuousFrameSpec, OperatorPair,
};
use crate::disjoint::{classify, delta_family, gamma_family};
use crate::document::FrameDocument;
use crate::error::Error;
use crate::linalg::null_space;
use crate::model::{analysis_matrix, CMatrix, GFrameFamily, TolerancePolicy, C64};
use crate::random::{random_gframe, random_strongly_disjoint_parseval_pair, seeded, FamilyShape};
use crate::report::{Check, RunReport};
use crate::riesz::riesz_check;
use crate::verify::run_suite;

#[derive(Debug, Parser)]
#[command(
    name = "gframe",
    version,
    about = "Analyze and construct continuous g-frames on finite atomic measure spaces"
)]
struct Cli {
    /// Relative tolerance for every approximate comparison.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Frame bounds, tightness and Riesz-type status of one family.
    Analyze { file: PathBuf, family: String },

    /// Disjointness relations between two families.
    Disjoint { file: PathBuf, first: String, second: String },

    /// Build a new family (or several) from the named inputs.
    Construct {
        file: PathBuf,
        #[arg(value_enum)]
        recipe: Recipe,
        families: Vec<String>,
        /// First operator: a scalar (`2`, `[0, 1]`) or a matrix of rows.
        #[arg(long)]
        l1: Option<String>,
        /// Second operator, same syntax as `--l1`.
        #[arg(long)]
        l2: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },

    /// Run the randomized property suite.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },

    /// Draw a random family or strongly disjoint pair.
    Generate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        atoms: usize,
        #[arg(long, default_value_t = 2)]
        block_dim: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Domain dimension of the second family of a pair (defaults to `--dim`).
        #[arg(long)]
        dim_k: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Recipe {
    Gamma,
    Delta,
    SumDisjoint,
    SumStrong,
    PseudoDual,
    CanonicalDual,
    Parseval,
    LiftExample,
}

impl Recipe {
    fn arity(self) -> usize {
        match self {
            Recipe::CanonicalDual | Recipe::Parseval => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Frame,
    StronglyDisjointPair,
}

/// What the process should print and return.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::UnknownFamily(_)
            | Error::Shape(_)
            | Error::Tolerance(_)
            | Error::Generation(_) => 2,
            Error::Invalid(_) | Error::Singular(_) | Error::Precondition(_) | Error::Numeric(_) => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let echo: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let format = cli.format;
    match execute(cli, echo.clone()) {
        Ok(report) => {
            let stdout = match format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json() + "\n",
            };
            Outcome { code: if report.passed { 0 } else { 1 }, stdout, stderr: String::new() }
        }
        Err(f) => match format {
            Format::Text => Outcome { code: f.code, stdout: String::new(), stderr: format!("error: {}\n", f.message) },
            Format::Json => {
                let body = serde_json::json!({ "command": echo, "error": f.message, "exit_code": f.code });
                Outcome { code: f.code, stdout: format!("{body:#}\n"), stderr: String::new() }
            }
        },
    }
}

fn execute(cli: Cli, echo: Vec<String>) -> Result<RunReport, Failure> {
    let tol = TolerancePolicy::new(cli.tol, TolerancePolicy::default().rank_eps_factor)?;
    let mut report = RunReport::new(echo, tol);
    match cli.command {
        Command::Analyze { file, family } => {
            let fam = load(&file)?.family(&family)?;
            analyze(&mut report, &fam, &tol)?;
        }
        Command::Disjoint { file, first, second } => {
            let doc = load(&file)?;
            disjoint(&mut report, &doc.family(&first)?, &doc.family(&second)?, &tol)?;
        }
        Command::Construct { file, recipe, families, l1, l2, output } => {
            if families.len() != recipe.arity() {
                return Err(usage(format!(
                    "recipe {} takes {} families, got {}",
                    recipe.to_possible_value().expect("recipes have names").get_name(),
                    recipe.arity(),
                    families.len()
                )));
            }
            let doc = load(&file)?;
            let inputs = families.iter().map(|n| doc.family(n)).collect::<Result<Vec<_>, _>>()?;
            let d = inputs[0].domain_dim();
            let pair =
                OperatorPair::new(operator_arg("--l1", l1.as_deref(), d)?, operator_arg("--l2", l2.as_deref(), d)?)?;
            let built = construct(&mut report, recipe, &inputs, &pair, &tol)?;
            let refs: Vec<(&str, &GFrameFamily)> = built.iter().map(|(n, f)| (*n, f)).collect();
            emit(&mut report, FrameDocument::from_families(refs)?, output.as_deref())?;
        }
        Command::Verify { seed, cases } => {
            report.seed = Some(seed);
            let checks = run_suite(seed, cases, &tol);
            report.section("suite", serde_json::json!({ "cases": cases, "invariants": checks.len() }));
            for c in checks {
                report.check(c);
            }
        }
        Command::Generate { kind, seed, atoms, block_dim, dim, dim_k, output } => {
            if atoms == 0 || block_dim == 0 || dim == 0 || dim_k == Some(0) {
                return Err(usage("--atoms, --block-dim and dimensions must be positive"));
            }
            report.seed = Some(seed);
            let mut rng = seeded(seed);
            let weights: Vec<f64> = (0..atoms).map(|_| rng.gen_range(0.5..2.0)).collect();
            let block_dims = vec![block_dim; atoms];
            let draw_seed = rng.gen::<u64>();
            let doc = match kind {
                Kind::Frame => {
                    let shape = FamilyShape { weights, block_dims, domain_dim: dim };
                    let generated = random_gframe(draw_seed, &shape, &tol)?;
                    let bounds = frame_bounds(&generated.family, &tol)?;
                    report.section("lambda", &bounds);
                    report.check(
                        Check::new("is_frame", generated.is_frame)
                            .metric("lower_bound", bounds.lower_bound)
                            .metric("frame_threshold", bounds.frame_threshold)
                            .metric("attempts", generated.attempts as f64),
                    );
                    FrameDocument::from_families([("lambda", &generated.family)])?
                }
                Kind::StronglyDisjointPair => {
                    let (lambda, theta) = random_strongly_disjoint_parseval_pair(
                        draw_seed,
                        &weights,
                        &block_dims,
                        dim,
                        dim_k.unwrap_or(dim),
                    )?;
                    let r = classify(&lambda, &theta, &tol)?;
                    for (name, fam) in [("lambda", &lambda), ("theta", &theta)] {
                        let b = frame_bounds(fam, &tol)?;
                        report.check(
                            Check::new(format!("{name}_is_parseval"), b.is_parseval)
                                .metric("lower_bound", b.lower_bound)
                                .metric("upper_bound", b.upper_bound),
                        );
                    }
                    report.check(
                        Check::new("strongly_disjoint", r.strongly_disjoint)
                            .metric("cross_operator_norm", r.cross_operator_norm)
                            .metric("orthogonality_threshold", r.orthogonality_threshold),
                    );
                    report.section("disjointness", &r);
                    FrameDocument::from_families([("lambda", &lambda), ("theta", &theta)])?
                }
            };
            emit(&mut report, doc, output.as_deref())?;
        }
    }
    Ok(report)
}

fn load(path: &Path) -> Result<FrameDocument, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(FrameDocument::parse(&text)?)
}

fn emit(report: &mut RunReport, doc: FrameDocument, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => {
            fs::write(path, doc.to_json() + "\n")
                .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            report.output = Some(path.display().to_string());
        }
        None => report.section("document", &doc),
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl From<&Entry> for C64 {
    fn from(e: &Entry) -> Self {
        match *e {
            Entry::Real(re) => C64::new(re, 0.0),
            Entry::Complex([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OperatorArg {
    Scalar(Entry),
    Matrix(Vec<Vec<Entry>>),
}

/// A missing operator means the identity; a scalar `c` means `c·I` on the
/// input families' domain.
fn operator_arg(flag: &str, text: Option<&str>, d: usize) -> Result<CMatrix, Failure> {
    let Some(text) = text else {
        return Ok(CMatrix::identity(d, d));
    };
    let parse_err = |message: String| Failure::from(Error::Parse { path: flag.to_owned(), message });
    let arg: OperatorArg = serde_json::from_str(text)
        .map_err(|_| parse_err(format!("expected a scalar or an array of rows, got {text:?}")))?;
    match arg {
        OperatorArg::Scalar(c) => Ok(CMatrix::identity(d, d) * C64::from(&c)),
        OperatorArg::Matrix(rows) => {
            let cols = rows.first().map_or(0, Vec::len);
            if cols == 0 || rows.iter().any(|r| r.len() != cols) {
                return Err(parse_err("rows must be non-empty and of equal length".into()));
            }
            Ok(CMatrix::from_fn(rows.len(), cols, |i, j| C64::from(&rows[i][j])))
        }
    }
}

fn analyze(report: &mut RunReport, fam: &GFrameFamily, tol: &TolerancePolicy) -> Result<(), Failure> {
    report.section(
        "family",
        serde_json::json!({
            "atoms": fam.atom_count(),
            "domain_dim": fam.domain_dim(),
            "khat_dim": fam.khat_dim(),
        }),
    );
    let frame = frame_bounds(fam, tol)?;
    report.section("frame", &frame);
    report.check(
        Check::new("is_frame", frame.is_frame)
            .metric("lower_bound", frame.lower_bound)
            .metric("frame_threshold", frame.frame_threshold),
    );
    if frame.is_frame {
        let riesz = riesz_check(fam, tol)?;
        report.check(
            Check::new("riesz_criteria_agree", riesz.criteria_agree())
                .metric("analysis_rank", riesz.analysis_rank as f64)
                .metric("khat_dim", riesz.khat_dim as f64)
                .metric("synthesis_lower_bound", riesz.synthesis_lower_bound)
                .metric("synthesis_threshold", riesz.synthesis_threshold),
        );
        report.section("riesz", &riesz);
    }
    Ok(())
}

fn disjoint(
    report: &mut RunReport,
    lambda: &GFrameFamily,
    theta: &GFrameFamily,
    tol: &TolerancePolicy,
) -> Result<(), Failure> {
    let r = classify(lambda, theta, tol)?;
    let gamma = gamma_family(lambda, theta)?;
    let g = frame_bounds(&gamma, tol)?;
    let gamma_riesz = if g.is_frame { Some(riesz_check(&gamma, tol)?) } else { None };
    let gamma_is_riesz = gamma_riesz.as_ref().is_some_and(|x| x.is_riesz_type);
    let kernel_dim = null_space(&analysis_matrix(&gamma), tol)?.ncols();

    report.check(
        Check::new("disjoint_iff_gamma_frame", r.disjoint == g.is_frame)
            .metric("range_intersection_dim", r.range_intersection_dim as f64)
            .metric("gamma_lower_bound", g.lower_bound)
            .metric("gamma_frame_threshold", g.frame_threshold),
    );
    report.check(
        Check::new("complementary_iff_gamma_riesz", r.complementary_pair == gamma_is_riesz)
            .metric("range_sum_dim", r.range_sum_dim as f64)
            .metric("khat_dim", r.khat_dim as f64)
            .metric("gamma_analysis_rank", gamma_riesz.as_ref().map_or(f64::NAN, |x| x.analysis_rank as f64)),
    );
    report.check(
        Check::new(
            "strongly_complementary_iff_strongly_disjoint_and_gamma_riesz",
            r.strongly_complementary_pair == (r.strongly_disjoint && gamma_is_riesz),
        )
        .metric("cross_operator_norm", r.cross_operator_norm)
        .metric("orthogonality_threshold", r.orthogonality_threshold),
    );
    report.check(
        Check::new("weakly_disjoint_iff_trivial_gamma_kernel", r.weakly_disjoint == (kernel_dim == 0))
            .metric("gamma_kernel_dim", kernel_dim as f64),
    );
    report.check(
        Check::new("hierarchy", (!r.strongly_disjoint || r.disjoint) && (!r.disjoint || r.weakly_disjoint))
            .metric("range_intersection_dim", r.range_intersection_dim as f64)
            .metric("cross_operator_norm", r.cross_operator_norm),
    );
    if r.strongly_disjoint {
        let delta = frame_bounds(&delta_family(lambda, theta, tol)?, tol)?;
        report.check(
            Check::new("delta_is_parseval", delta.is_parseval)
                .metric("lower_bound", delta.lower_bound)
                .metric("upper_bound", delta.upper_bound),
        );
        report.section("delta", &delta);
    }
    report.section("disjointness", &r);
    report.section("gamma", &g);
    Ok(())
}

fn frame_checks(
    report: &mut RunReport,
    name: &str,
    fam: &GFrameFamily,
    tol: &TolerancePolicy,
    parseval: bool,
) -> Result<(), Failure> {
    let b = frame_bounds(fam, tol)?;
    let (label, ok) = if parseval { ("is_parseval", b.is_parseval) } else { ("is_frame", b.is_frame) };
    report.check(
        Check::new(format!("{name}_{label}"), ok)
            .metric("lower_bound", b.lower_bound)
            .metric("upper_bound", b.upper_bound)
            .metric("frame_threshold", b.frame_threshold),
    );
    report.section(name, &b);
    Ok(())
}

fn dual_check(
    report: &mut RunReport,
    name: &str,
    theta: &GFrameFamily,
    lambda: &GFrameFamily,
    tol: &TolerancePolicy,
) -> Result<(), Failure> {
    report.check(
        Check::new(name, is_dual_pair(theta, lambda, tol)?).metric("duality_defect", duality_defect(theta, lambda)?),
    );
    Ok(())
}

fn construct(
    report: &mut RunReport,
    recipe: Recipe,
    inputs: &[GFrameFamily],
    pair: &OperatorPair,
    tol: &TolerancePolicy,
) -> Result<Vec<(&'static str, GFrameFamily)>, Failure> {
    let first = &inputs[0];
    let out = match recipe {
        Recipe::Gamma => {
            let gamma = gamma_family(first, &inputs[1])?;
            frame_checks(report, "gamma", &gamma, tol, false)?;
            vec![("gamma", gamma)]
        }
        Recipe::Delta => {
            let delta = delta_family(first, &inputs[1], tol)?;
            let strongly = classify(first, &inputs[1], tol)?.strongly_disjoint;
            frame_checks(report, "delta", &delta, tol, strongly)?;
            vec![("delta", delta)]
        }
        Recipe::SumDisjoint => {
            let s = disjoint_sum_family(first, &inputs[1], pair, tol)?;
            report.check(
                Check::new("certificate_sandwich", s.certificate_holds)
                    .metric("lower_bound", s.report.lower_bound)
                    .metric("lower_guarantee", s.lower_guarantee)
                    .metric("upper_bound", s.report.upper_bound)
                    .metric("upper_guarantee", s.upper_guarantee),
            );
            report.section("sum", &s);
            vec![("sum", s.family)]
        }
        Recipe::SumStrong => {
            let s = strongly_disjoint_sum(first, &inputs[1], pair, tol)?;
            report.check(
                Check::new("bounds", s.bounds_hold)
                    .metric("lower_bound", s.report.lower_bound)
                    .metric("lower_guarantee", s.lower_guarantee)
                    .metric("upper_bound", s.report.upper_bound)
                    .metric("upper_guarantee", s.upper_guarantee),
            );
            if let Some(tight) = s.tight_with_scalar {
                report.check(
                    Check::new("tight_with_scalar", tight)
                        .metric("scalar", s.scalar)
                        .metric("lower_bound", s.report.lower_bound)
                        .metric("upper_bound", s.report.upper_bound),
                );
            }
            report.section("sum", &s);
            vec![("sum", s.family)]
        }
        Recipe::PseudoDual => {
            let p = pseudo_dual(first, &inputs[1], pair, tol)?;
            report.check(Check::new("dual_of_single", p.dual_of_single).metric("duality_defect", p.single_defect));
            report.check(Check::new("dual_of_sum", p.dual_of_sum).metric("duality_defect", p.sum_defect));
            vec![("dual", p.dual), ("single", p.single), ("sum", p.sum)]
        }
        Recipe::CanonicalDual => {
            let dual = canonical_dual(first, tol)?;
            dual_check(report, "dual_pair", &dual, first, tol)?;
            vec![("dual", dual)]
        }
        Recipe::Parseval => {
            let p = parseval_normalize(first, tol)?;
            frame_checks(report, "parseval", &p, tol, true)?;
            vec![("parseval", p)]
        }
        Recipe::LiftExample => {
            let f = ContinuousFrameSpec::from_family(first)?;
            let g = ContinuousFrameSpec::from_family(&inputs[1])?;
            let l = lift_continuous_frame(&f, &g, tol)?;
            dual_check(report, "theta_dual_of_lambda", &l.theta, &l.lambda, tol)?;
            dual_check(report, "phi_dual_of_psi", &l.phi, &l.psi, tol)?;
            for (name, a, b) in
                [("lambda_phi_strongly_disjoint", &l.lambda, &l.phi), ("theta_psi_strongly_disjoint", &l.theta, &l.psi)]
            {
                let r = classify(a, b, tol)?;
                report.check(
                    Check::new(name, r.strongly_disjoint)
                        .metric("cross_operator_norm", r.cross_operator_norm)
                        .metric("orthogonality_threshold", r.orthogonality_threshold),
                );
            }
            let sums = direct_sum_duals(&l.lambda, &l.theta, &l.psi, &l.phi, tol)?;
            report.check(
                Check::new("gamma_delta_dual", sums.dual_verified).metric("duality_defect", sums.duality_defect),
            );
            vec![
                ("lambda", l.lambda),
                ("theta", l.theta),
                ("phi", l.phi),
                ("psi", l.psi),
                ("gamma", sums.gamma),
                ("delta", sums.delta),
            ]
        }
    };
    Ok(out)
}
