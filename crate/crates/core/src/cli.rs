//! Batch front end. Every subcommand reads a flat `key=value` config merged
//! with command-line overrides, emits tables, and maps failures to exit codes.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use num_rational::BigRational;

use crate::acceptance::{determinism_result, results_table, run_criterion, CriterionResult};
use crate::error::{Error, Result};
use crate::forms::{
    analyticity_check, ccr_eps_pair, ccr_residual_scaled, ccr_table, continuum_sweep, divergence_probe, form_table,
    k_matrix_element, l_matrix_element, t_ab_form, t_eps_form, t_hat_form, FormKind, FormValue,
};
use crate::gauss::{EpsParam, GaussVector};
use crate::povm::{commutator_check, contrast_sweep, norm_bound_check, tg_form, tg_matrix};
use crate::scalar::{parse_rational, EvalOptions, ExactScalar};
use crate::symrep::SymParity;
use crate::table::{fmt_f64, Format, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "osctime", version, about = "Harmonic-oscillator time operators: forms, identities and sweeps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Evaluate a form over a parameter grid.
    FormEval,
    /// Canonical-commutation residuals over a grid.
    Ccr,
    /// K_ab / L_ab matrix elements, or the T_G matrix export.
    Matrix,
    /// The ε → 0 sweep towards the continuum form.
    Continuum,
    /// Growth of the arctan series at the boundary α = 1.
    Diverge,
    /// Analytically continued matrix elements and contour checks.
    Continue,
    /// Commutator identity and norm bound of T_G.
    Povm,
    /// Unbounded versus bounded form along α → 1.
    Contrast,
    /// Run the acceptance criteria.
    Acceptance,
}

#[derive(clap::Args, Debug, Default, Clone)]
pub struct Flags {
    /// Flat key=value config file; command-line flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// csv or json.
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Significant digits for log-term evaluation.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Comma-separated ε values (rationals or 2^-k).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub eps: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Comma-separated power pairs a:b.
    #[arg(long, global = true)]
    pub powers: Option<String>,
    /// Comma-separated complex samples such as 0.3+0.7i.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Truncation order N.
    #[arg(long = "bigN", global = true)]
    pub big_n: Option<String>,
    /// Comma-separated series lengths M.
    #[arg(long = "M-list", global = true)]
    pub m_list: Option<String>,
    /// t_eps, t_ab, t_hat or t_g.
    #[arg(long, global = true)]
    pub form: Option<String>,
    #[arg(long, global = true)]
    pub tolerance: Option<String>,
    /// Power index for diverge (x^{2m}) and contrast (x^{2k}).
    #[arg(long, global = true)]
    pub m: Option<String>,
    #[arg(long, global = true)]
    pub k: Option<String>,
    /// matrix kind: k, l or tg.
    #[arg(long, global = true)]
    pub kind: Option<String>,
    /// Comma-separated acceptance criteria to run.
    #[arg(long, global = true)]
    pub criteria: Option<String>,
    /// even or odd, for diverge.
    #[arg(long, global = true)]
    pub parity: Option<String>,
    /// Multiply the angle operator by this factor (mutation hook for ccr).
    #[arg(long, global = true, hide = true)]
    pub perturb: Option<String>,
}

const KEYS: [&str; 19] = [
    "out",
    "format",
    "precision",
    "seed",
    "eps",
    "alpha",
    "beta",
    "powers",
    "z",
    "bigN",
    "M-list",
    "form",
    "tolerance",
    "m",
    "k",
    "kind",
    "criteria",
    "perturb",
    "parity",
];

/// Merged configuration: config file first, then flags.
#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: expected key=value", n + 1)))?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(Error::Parse(format!("config line {}: unknown key {k:?}", n + 1)));
            }
            values.insert(k.to_string(), v.trim().to_string());
        }
        Ok(RunConfig { values })
    }

    pub fn from_flags(flags: &Flags) -> Result<Self> {
        let mut cfg = match &flags.config {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::Parse(format!("cannot read config {}: {e}", p.display())))?;
                RunConfig::parse_text(&text)?
            }
            None => RunConfig::default(),
        };
        let overrides = [
            ("out", flags.out.as_ref().map(|p| p.display().to_string())),
            ("format", flags.format.clone()),
            ("precision", flags.precision.map(|p| p.to_string())),
            ("seed", flags.seed.map(|s| s.to_string())),
            ("eps", flags.eps.clone()),
            ("alpha", flags.alpha.clone()),
            ("beta", flags.beta.clone()),
            ("powers", flags.powers.clone()),
            ("z", flags.z.clone()),
            ("bigN", flags.big_n.clone()),
            ("M-list", flags.m_list.clone()),
            ("form", flags.form.clone()),
            ("tolerance", flags.tolerance.clone()),
            ("m", flags.m.clone()),
            ("k", flags.k.clone()),
            ("kind", flags.kind.clone()),
            ("criteria", flags.criteria.clone()),
            ("perturb", flags.perturb.clone()),
            ("parity", flags.parity.clone()),
        ];
        for (k, v) in overrides {
            if let Some(v) = v {
                cfg.values.insert(k.to_string(), v);
            }
        }
        Ok(cfg)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    fn list<T>(&self, key: &str, default: &str, parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
        let raw = self.get(key).unwrap_or(default);
        raw.split(',').map(str::trim).filter(|s| !s.is_empty()).map(parse).collect()
    }

    fn number<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.get(key) {
            Some(s) => s.trim().parse().map_err(|_| Error::Parse(format!("{key}: cannot parse {s:?}"))),
            None => Ok(default),
        }
    }

    pub fn format(&self) -> Result<Format> {
        self.get("format").unwrap_or("csv").parse()
    }

    pub fn seed(&self) -> Result<u64> {
        self.number("seed", 0)
    }

    pub fn eval_options(&self) -> Result<EvalOptions> {
        Ok(EvalOptions { precision: self.number("precision", 16)?, ..EvalOptions::default() })
    }

    pub fn eps_list(&self, default: &str) -> Result<Vec<EpsParam>> {
        self.list("eps", default, |s| s.parse())
    }

    pub fn rationals(&self, key: &str, default: &str) -> Result<Vec<BigRational>> {
        self.list(key, default, parse_rational)
    }

    pub fn powers(&self, default: &str) -> Result<Vec<(u32, u32)>> {
        self.list("powers", default, |s| {
            let (a, b) = s.split_once(':').ok_or_else(|| Error::Parse(format!("power pair {s:?} must be a:b")))?;
            let p = |t: &str| t.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad power in {s:?}")));
            Ok((p(a)?, p(b)?))
        })
    }

    pub fn z_list(&self, default: &str) -> Result<Vec<ExactScalar>> {
        self.list("z", default, |s| s.parse())
    }

    pub fn m_list(&self, default: &str) -> Result<Vec<u64>> {
        self.list("M-list", default, |s| {
            let v: f64 = s.parse().map_err(|_| Error::Parse(format!("bad M value {s:?}")))?;
            if v < 0.0 || v.fract() != 0.0 || v > 1e15 {
                return Err(Error::Parse(format!("M value {s:?} must be a non-negative integer")));
            }
            Ok(v as u64)
        })
    }
}

/// What a subcommand produced.
pub struct Report {
    pub body: String,
    pub code: i32,
    /// Lines for the terminal, beside the table output.
    pub notes: Vec<String>,
}

fn render(tables: &[Table], format: Format) -> String {
    match format {
        Format::Csv => tables.iter().map(|t| t.to_csv()).collect::<Vec<_>>().join("\n"),
        Format::Json => {
            let v: Vec<serde_json::Value> =
                tables.iter().map(|t| serde_json::from_str(&t.to_json()).expect("tables render valid JSON")).collect();
            serde_json::to_string_pretty(&v).expect("plain JSON") + "\n"
        }
    }
}

fn verdict(rows: &[(&str, String)]) -> Table {
    let mut t = Table::new("verdict", &["key", "value"]);
    for (k, v) in rows {
        t.push(vec![k.to_string(), v.clone()]);
    }
    t
}

fn tables_report(tables: Vec<Table>, cfg: &RunConfig, pass: bool) -> Result<Report> {
    Ok(Report {
        body: render(&tables, cfg.format()?),
        code: if pass { EXIT_OK } else { EXIT_TOLERANCE },
        notes: Vec::new(),
    })
}

fn unit_vector(power: u32, alpha: &BigRational) -> Result<GaussVector<ExactScalar>> {
    GaussVector::monomial(ExactScalar::one(), power, ExactScalar::imag(alpha.clone()))
}

fn form_name(cfg: &RunConfig) -> &str {
    cfg.get("form").unwrap_or("t_eps")
}

pub fn cmd_form_eval(cfg: &RunConfig) -> Result<Report> {
    let powers = cfg.powers("2:0")?;
    let alphas = cfg.rationals("alpha", "1/4")?;
    let betas = cfg.rationals("beta", "1/2")?;
    let mut values: Vec<FormValue> = Vec::new();
    match form_name(cfg) {
        "t_eps" => {
            for eps in cfg.eps_list("1")? {
                for al in &alphas {
                    for be in &betas {
                        for &(a, b) in &powers {
                            let psi = GaussVector::xi_alpha(al, &eps)?.shift_power(a);
                            let phi = GaussVector::xi_alpha(be, &eps)?.shift_power(b);
                            values.push(tagged(t_eps_form(&psi, &phi, &eps)?, a, b, al, be));
                        }
                    }
                }
            }
        }
        "t_ab" => {
            for al in &alphas {
                for be in &betas {
                    for &(a, b) in &powers {
                        let v = t_ab_form(&unit_vector(a, al)?, &unit_vector(b, be)?)?;
                        values.push(tagged(v, a, b, al, be));
                    }
                }
            }
        }
        "t_hat" => {
            let opts = cfg.eval_options()?;
            for z in cfg.z_list("3/10+7/10i")? {
                for &(a, b) in &powers {
                    values.push(t_hat_form(a, b, z.to_c64(), &opts)?);
                }
            }
        }
        "t_g" => {
            let n: usize = cfg.number("bigN", 100)?;
            for al in &alphas {
                for be in &betas {
                    for &(a, b) in &powers {
                        let v = tg_form(&unit_vector(a, al)?.to_c64(), &unit_vector(b, be)?.to_c64(), n)?;
                        values.push(tagged(v, a, b, al, be));
                    }
                }
            }
        }
        other => return Err(Error::Parse(format!("unknown form {other:?}; expected t_eps, t_ab, t_hat or t_g"))),
    }
    tables_report(vec![form_table("form_eval", &values)], cfg, true)
}

fn tagged(v: FormValue, a: u32, b: u32, al: &BigRational, be: &BigRational) -> FormValue {
    v.with_param("a", a).with_param("b", b).with_param("alpha", al).with_param("beta", be)
}

fn default_pairs(max: u32) -> String {
    let mut out = Vec::new();
    for a in 0..=max {
        for b in (a % 2..=max).step_by(2) {
            out.push(format!("{a}:{b}"));
        }
    }
    out.join(",")
}

const Z_SAMPLES: &str = "1/5+2/5i,-3/10+4/5i,1/2i";

pub fn cmd_ccr(cfg: &RunConfig) -> Result<Report> {
    let tol: f64 = cfg.number("tolerance", 1e-10)?;
    let scale = match cfg.get("perturb") {
        Some(s) => parse_rational(s)?,
        None => BigRational::from_integer(1.into()),
    };
    let powers = cfg.powers(&default_pairs(4))?;
    let mut reports = Vec::new();
    match form_name(cfg) {
        "t_eps" | "t_ab" => {
            let alphas = cfg.rationals("alpha", "1/10,1/2,9/10")?;
            let betas = cfg.rationals("beta", "1/10,1/2,9/10")?;
            let eps_list = if form_name(cfg) == "t_eps" { cfg.eps_list("1,1/4,1/100")? } else { vec![EpsParam::one()] };
            for eps in &eps_list {
                let kind = if form_name(cfg) == "t_eps" { FormKind::TEps(eps.clone()) } else { FormKind::TAb };
                for al in &alphas {
                    for be in &betas {
                        for &(a, b) in &powers {
                            reports.push(match kind {
                                FormKind::TAb => {
                                    ccr_residual_scaled(&kind, &unit_vector(a, al)?, &unit_vector(b, be)?, tol, &scale)?
                                }
                                _ => ccr_eps_pair(eps, (a, b), al, be, tol, &scale)?,
                            });
                        }
                    }
                }
            }
        }
        "t_hat" => {
            for z in cfg.z_list(Z_SAMPLES)? {
                for &(a, b) in &powers {
                    let phi = GaussVector::monomial(ExactScalar::one(), a, z.clone())?;
                    let psi = GaussVector::monomial(ExactScalar::one(), b, z.clone())?;
                    reports.push(ccr_residual_scaled(&FormKind::THat, &phi, &psi, tol, &scale)?);
                }
            }
        }
        other => return Err(Error::Parse(format!("ccr form {other:?}; expected t_eps, t_ab or t_hat"))),
    }
    let failures = reports.iter().filter(|r| !r.pass).count();
    let worst = reports.iter().map(|r| r.residual.norm() / (1.0 + r.inner.norm())).fold(0.0, f64::max);
    let v = verdict(&[
        ("pairs", reports.len().to_string()),
        ("failures", failures.to_string()),
        ("max_scaled_residual", fmt_f64(worst)),
        ("pass", (failures == 0).to_string()),
    ]);
    tables_report(vec![ccr_table(&reports), v], cfg, failures == 0)
}

pub fn cmd_matrix(cfg: &RunConfig) -> Result<Report> {
    let kind = cfg.get("kind").unwrap_or("k");
    if kind == "tg" {
        let n: usize = cfg.number("bigN", 8)?;
        return Ok(Report { body: tg_matrix(n).to_text(), code: EXIT_OK, notes: Vec::new() });
    }
    let powers = cfg.powers(&default_pairs(4))?;
    let alphas = cfg.rationals("alpha", "1/4")?;
    let betas = cfg.rationals("beta", "1/2")?;
    let mut values = Vec::new();
    for eps in cfg.eps_list("1")? {
        for al in &alphas {
            for be in &betas {
                for &(a, b) in &powers {
                    values.push(match kind {
                        "k" => k_matrix_element(a, b, al, be, &eps)?,
                        "l" => l_matrix_element(a, b, al, be, &eps)?,
                        other => return Err(Error::Parse(format!("matrix kind {other:?}; expected k, l or tg"))),
                    });
                }
            }
        }
    }
    tables_report(vec![form_table("matrix", &values)], cfg, true)
}

pub fn cmd_continuum(cfg: &RunConfig) -> Result<Report> {
    let eps = cfg.eps_list("2^-2,2^-3,2^-4,2^-5,2^-6,2^-7,2^-8,2^-9,2^-10")?;
    let (a, b) = *cfg.powers("2:0")?.first().ok_or_else(|| Error::Parse("continuum needs one power pair".into()))?;
    let al = first(cfg.rationals("alpha", "1/4")?, "alpha")?;
    let be = first(cfg.rationals("beta", "1/2")?, "beta")?;
    let rep = continuum_sweep(&unit_vector(a, &al)?, &unit_vector(b, &be)?, &eps)?;
    let pass = rep.slope.map(|s| (0.9..=1.1).contains(&s)).unwrap_or(true);
    let v = verdict(&[
        ("slope", rep.slope.map(fmt_f64).unwrap_or_default()),
        ("fit_residual", rep.fit_residual.map(fmt_f64).unwrap_or_default()),
        ("pass", pass.to_string()),
    ]);
    tables_report(vec![rep.to_table(), v], cfg, pass)
}

fn first<T>(v: Vec<T>, key: &str) -> Result<T> {
    v.into_iter().next().ok_or_else(|| Error::Parse(format!("{key} must not be empty")))
}

pub fn cmd_diverge(cfg: &RunConfig) -> Result<Report> {
    let m: u32 = cfg.number("m", 2)?;
    let eps = first(cfg.eps_list("1")?, "eps")?;
    let parity = match cfg.get("parity").unwrap_or("even") {
        "even" => SymParity::Even,
        "odd" => SymParity::Odd,
        other => return Err(Error::Parse(format!("parity {other:?}; expected even or odd"))),
    };
    let ms = cfg.m_list("1000,10000,100000,1000000")?;
    let rep = divergence_probe(m, &eps, &ms, parity)?;
    let pass = rep.fit_rel_error.map(|e| e <= 0.05).unwrap_or(true);
    let v = verdict(&[
        ("c", rep.fit_c.map(fmt_f64).unwrap_or_default()),
        ("d", rep.fit_d.map(fmt_f64).unwrap_or_default()),
        ("fit_rel_error", rep.fit_rel_error.map(fmt_f64).unwrap_or_default()),
        ("pass", pass.to_string()),
    ]);
    tables_report(vec![rep.to_table(), v], cfg, pass)
}

pub fn cmd_continue(cfg: &RunConfig) -> Result<Report> {
    let opts = cfg.eval_options()?;
    let powers = cfg.powers("0:0,2:0,0:2,1:3,2:4")?;
    let mut values = Vec::new();
    for z in cfg.z_list(Z_SAMPLES)? {
        for &(a, b) in &powers {
            values.push(t_hat_form(a, b, z.to_c64(), &opts)?);
        }
    }
    let square = |c: Complex64, side: f64| -> Vec<Complex64> {
        let h = side / 2.0;
        [(-h, -h), (h, -h), (h, h), (-h, h)].iter().map(|&(x, y)| c + Complex64::new(x, y)).collect()
    };
    let loops = [
        square(Complex64::new(0.5, 0.5), 0.2),
        square(Complex64::new(0.0, 0.5), 0.4),
        square(Complex64::new(-0.6, 1.5), 0.5),
    ];
    let mut worst: f64 = 0.0;
    for l in &loops {
        for &(a, b) in &powers {
            worst = worst.max(analyticity_check(a, b, l, 24, &opts)?.norm());
        }
    }
    let pass = worst <= 1e-8;
    let v = verdict(&[("max_loop_integral", fmt_f64(worst)), ("pass", pass.to_string())]);
    tables_report(vec![form_table("continue", &values), v], cfg, pass)
}

pub fn cmd_povm(cfg: &RunConfig) -> Result<Report> {
    let n: usize = cfg.number("bigN", 100)?;
    let comm = commutator_check(n, n.min(30));
    let norm = norm_bound_check(n);
    let mut t = Table::new("povm", &["check", "value", "pass"]);
    t.push(vec!["commutator_mismatches".into(), comm.mismatches.to_string(), (comm.mismatches == 0).to_string()]);
    t.push(vec![
        "restriction_failures".into(),
        format!("{}/{}", comm.restriction_failures, comm.restriction_pairs),
        (comm.restriction_failures == 0).to_string(),
    ]);
    t.push(vec!["norm_estimate".into(), fmt_f64(norm.estimate), norm.pass.to_string()]);
    t.push(vec!["second_eigenvalue".into(), norm.second.map(fmt_f64).unwrap_or_default(), "true".into()]);
    t.push(vec!["power_iterations".into(), norm.iterations.to_string(), norm.converged.to_string()]);
    let pass = comm.pass && norm.pass && norm.converged;
    let v = verdict(&[("bound", fmt_f64(norm.bound)), ("pass", pass.to_string())]);
    tables_report(vec![t, v], cfg, pass)
}

pub fn cmd_contrast(cfg: &RunConfig) -> Result<Report> {
    let k: u32 = cfg.number("k", 0)?;
    let n: usize = cfg.number("bigN", 200)?;
    let alphas = cfg.rationals("alpha", "1/4,1/2,3/4,31/32,1023/1024")?;
    let rep = contrast_sweep(k, &alphas, n)?;
    let exceeds = rep.rows.last().map(|r| r.t_exceeds_bound).unwrap_or(false);
    let bounded = rep.rows.iter().all(|r| r.tg_within_bound);
    let v = verdict(&[
        ("t_exceeds_2pi_at_last_alpha", exceeds.to_string()),
        ("t_g_within_2pi", bounded.to_string()),
        ("pass", (exceeds && bounded).to_string()),
    ]);
    tables_report(vec![rep.to_table(), v], cfg, exceeds && bounded)
}

pub fn cmd_acceptance(cfg: &RunConfig) -> Result<Report> {
    let seed = cfg.seed()?;
    let ids: Vec<u8> = cfg.list("criteria", "1,2,3,4,5,6,7,8,9,10", |s| {
        s.parse::<u8>().ok().filter(|i| (1..=10).contains(i)).ok_or_else(|| Error::Parse(format!("criterion {s:?}")))
    })?;
    let core: Vec<u8> = ids.iter().copied().filter(|&i| i != 10).collect();
    let run = || -> Vec<CriterionResult> { core.iter().map(|&i| run_criterion(i, seed)).collect() };
    let mut results = run();
    let format = cfg.format()?;
    if ids.contains(&10) {
        let first = render(&[results_table(&results)], format);
        let second = render(&[results_table(&run())], format);
        results.push(determinism_result(&first, &second));
    }
    let pass = results.iter().all(|r| r.pass);
    let notes = results.iter().map(|r| r.to_string()).collect();
    Ok(Report {
        body: render(&[results_table(&results)], format),
        code: if pass { EXIT_OK } else { EXIT_TOLERANCE },
        notes,
    })
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::InvalidArgument(_) => EXIT_USAGE,
        _ => EXIT_DOMAIN,
    }
}

pub fn dispatch(command: Command, cfg: &RunConfig) -> Result<Report> {
    match command {
        Command::FormEval => cmd_form_eval(cfg),
        Command::Ccr => cmd_ccr(cfg),
        Command::Matrix => cmd_matrix(cfg),
        Command::Continuum => cmd_continuum(cfg),
        Command::Diverge => cmd_diverge(cfg),
        Command::Continue => cmd_continue(cfg),
        Command::Povm => cmd_povm(cfg),
        Command::Contrast => cmd_contrast(cfg),
        Command::Acceptance => cmd_acceptance(cfg),
    }
}

/// Parses `args`, runs the subcommand, writes output, and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(stderr, "{}", e.render()) } else { write!(stdout, "{}", e.render()) };
            return code;
        }
    };
    let outcome = RunConfig::from_flags(&cli.flags).and_then(|cfg| Ok((dispatch(cli.command, &cfg)?, cfg)));
    match outcome {
        Ok((report, cfg)) => {
            for n in &report.notes {
                let _ = writeln!(stderr, "{n}");
            }
            match cfg.get("out") {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &report.body) {
                        let _ = writeln!(stderr, "error: cannot write {path}: {e}");
                        return EXIT_USAGE;
                    }
                }
                None => {
                    let _ = stdout.write_all(report.body.as_bytes());
                }
            }
            report.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}
