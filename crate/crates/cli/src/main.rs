//! Command-line interface: cusp tables, field bounds, corpus building,
//! numerical expansion at cusps and cyclotomic verification.
//!
//! Exit codes: 0 success, 2 precondition violated, 3 tolerance
//! unachievable, 4 verification failed, 1 other errors.

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::json;

use cuspbound::cuspcore::{self, IntegerMatrix2x2};
use cuspbound::hilbertbound::{self, FieldMatrix2x2, HilbertLevel};
use cuspbound::recognize;
use cuspbound::{etaforms, fields, Error};

#[derive(Parser)]
#[command(
    name = "cuspbound",
    version,
    about = "Cyclotomic field bounds for Fourier coefficients of newforms at cusps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed recorded in the config echo (sampling grids are deterministic).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Working precision in bits (default: auto; env CUSPBOUND_PRECISION).
    #[arg(long, global = true)]
    precision: Option<usize>,
    /// Emit JSON, optionally to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH", num_args = 0..=1, default_missing_value = "-")]
    json: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Cusp table of Γ₀(N): representatives, widths, scaling matrices, N′.
    Cusps {
        #[arg(long)]
        level: i64,
    },
    /// Classical field bound N′ = N/gcd(cd, N) for a scaling matrix.
    Bound {
        #[arg(long)]
        level: i64,
        /// Matrix entries "a,b,c,d".
        #[arg(long)]
        sigma: String,
    },
    /// Hilbert field bound N₀ and support ideal over a totally real field.
    Hbound {
        /// Built-in field name (Q, Qsqrt2, Qsqrt3, Qsqrt5) or a JSON path.
        #[arg(long)]
        field: String,
        /// Level ideal generators, e.g. "2,0" or "2,0; 0,1".
        #[arg(long)]
        ideal: String,
        /// Narrow-class representative ideal (default: unit ideal).
        #[arg(long)]
        tmu: Option<String>,
        /// Four field elements "a; b; c; d", coordinates over the integral
        /// basis, e.g. "1,0; 0,0; -1,2; 1,0" for (1, 0; √5, 1) over ℚ(√5).
        #[arg(long)]
        sigma: String,
        /// Optional α to run the conjugation check.
        #[arg(long)]
        alpha: Option<String>,
        /// Rational primes whose local data (e, f, n_v, d_v, t_v) to display.
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
    },
    /// Corpus operations on the built-in eta-quotient newforms.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Numerically expand a form at a cusp.
    Expand {
        /// Corpus label (1a, 11a, 20a, 27a, 32a, 36a) or corpus JSON path.
        #[arg(long)]
        form: String,
        /// Cusp "a/L" (or "inf").
        #[arg(long)]
        cusp: String,
        #[arg(long, default_value_t = 30)]
        nmax: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Sample at period_multiple × width to expose the support lattice.
        #[arg(long, default_value_t = 1)]
        period_multiple: u64,
    },
    /// Expand and certify coefficients in ℚ(ζ_M); exit 0 iff all recognised.
    Verify {
        #[arg(long)]
        form: String,
        #[arg(long)]
        cusp: String,
        /// "auto" (classical bound N′) or an explicit modulus.
        #[arg(long, default_value = "auto")]
        modulus: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 30)]
        nmax: usize,
        /// Denominator bound for recognition (default w^k·N^{k/2}, clamped).
        #[arg(long)]
        denom_bound: Option<u64>,
    },
    /// Verify every corpus form at every cusp of its level.
    Sweep {
        /// Comma-separated corpus labels (default: all built-ins).
        #[arg(long)]
        forms: Option<String>,
        /// Restrict to forms of these levels.
        #[arg(long, value_delimiter = ',')]
        levels: Vec<u64>,
        #[arg(long, default_value_t = 20)]
        nmax: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Expand a form to a coefficient cache file.
    Build {
        #[arg(long)]
        label: String,
        #[arg(long, default_value_t = 2000)]
        trunc: usize,
        /// Output path (default "<label>.json").
        #[arg(long)]
        out: Option<String>,
    },
    /// List the built-in forms.
    List,
}

fn parse_cusp(s: &str) -> Result<(i64, i64), Error> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("inf") || s == "oo" || s.eq_ignore_ascii_case("infinity") {
        return Ok((1, 0));
    }
    let (a, l) = s
        .split_once('/')
        .ok_or_else(|| Error::Parse(format!("cusp must be a/L or inf, got {s:?}")))?;
    let a: i64 = a
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad cusp numerator {a:?}")))?;
    let l: i64 = l
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad cusp denominator {l:?}")))?;
    Ok((a, l))
}

fn parse_sigma_int(s: &str) -> Result<IntegerMatrix2x2, Error> {
    let parts: Vec<&str> = s.split(',').map(|p| p.trim()).collect();
    if parts.len() != 4 {
        return Err(Error::Parse("sigma needs four entries a,b,c,d".into()));
    }
    let vals: Result<Vec<i64>, _> = parts.iter().map(|p| p.parse::<i64>()).collect();
    let v = vals.map_err(|_| Error::Parse(format!("bad sigma entries {s:?}")))?;
    Ok(IntegerMatrix2x2::new(v[0], v[1], v[2], v[3]))
}

fn resolved_precision(cli: &Cli) -> Option<usize> {
    cli.precision.or_else(|| {
        std::env::var("CUSPBOUND_PRECISION")
            .ok()
            .and_then(|v| v.parse().ok())
    })
}

/// Deliver output: JSON (stdout or file) or human text.
struct Emitter {
    json_target: Option<String>,
}

impl Emitter {
    fn emit(&self, human: String, value: serde_json::Value) -> Result<(), Error> {
        match &self.json_target {
            None => {
                println!("{human}");
                Ok(())
            }
            Some(target) if target == "-" => {
                println!("{}", serde_json::to_string_pretty(&value)?);
                Ok(())
            }
            Some(path) => {
                let mut f = std::fs::File::create(path)?;
                writeln!(f, "{}", serde_json::to_string_pretty(&value)?)?;
                eprintln!("wrote {path}");
                Ok(())
            }
        }
    }
}

fn run(cli: &Cli) -> Result<bool, Error> {
    let emitter = Emitter {
        json_target: cli.json.clone(),
    };
    let precision = resolved_precision(cli);
    match &cli.command {
        Command::Cusps { level } => {
            if *level < 1 {
                return Err(Error::Precondition("level must be ≥ 1".into()));
            }
            let cusps = cuspcore::enumerate_cusps(*level);
            let config = json!({"command": "cusps", "level": level, "seed": cli.seed});
            let mut table = format!(
                "# config {config}\n{:>6} {:>6} {:>7} {:>22} {:>8}\n",
                "a", "L", "width", "sigma", "N'"
            );
            for c in &cusps {
                table.push_str(&format!(
                    "{:>6} {:>6} {:>7} {:>22} {:>8}\n",
                    c.a,
                    c.l,
                    c.width,
                    format!("{:?}", c.sigma),
                    c.field_bound
                ));
            }
            table.push_str(&format!("# {} cusps", cusps.len()));
            let value = json!({"config": config, "N": level, "cusps": cusps});
            emitter.emit(table, value)?;
            Ok(true)
        }
        Command::Bound { level, sigma } => {
            let m = parse_sigma_int(sigma)?;
            let np = cuspcore::classical_field_bound(*level, &m)?;
            let width = cuspcore::width(*level, m.c);
            let config =
                json!({"command": "bound", "level": level, "sigma": m.entries(), "seed": cli.seed});
            let human = format!("# config {config}\nN' = {np}\nwidth = {width}");
            emitter.emit(
                human,
                json!({"config": config, "N_prime": np, "width": width}),
            )?;
            Ok(true)
        }
        Command::Hbound {
            field,
            ideal,
            tmu,
            sigma,
            alpha,
            primes,
        } => {
            let data = fields::load(field)?;
            let level_ideal = fields::parse_ideal(&data.field, ideal)?;
            let t_mu = match tmu {
                Some(t) => fields::parse_ideal(&data.field, t)?,
                None => cuspbound::numberfield::FractionalIdeal::one(data.field.clone()),
            };
            let lvl = HilbertLevel::new(data.field.clone(), level_ideal, t_mu)?;
            let parts: Vec<&str> = sigma.split(';').collect();
            if parts.len() != 4 {
                return Err(Error::Parse(
                    "sigma needs four ';'-separated elements".into(),
                ));
            }
            let elems: Result<Vec<_>, Error> = parts
                .iter()
                .map(|p| fields::parse_element(&data.field, p))
                .collect();
            let e = elems?;
            let m = FieldMatrix2x2::new(
                &data.field,
                e[0].clone(),
                e[1].clone(),
                e[2].clone(),
                e[3].clone(),
            );
            let report = hilbertbound::hbound_report(&m, &lvl)?;
            let alpha_check = match alpha {
                Some(a) => {
                    let alpha_elem = fields::parse_element(&data.field, a)?;
                    Some(hilbertbound::conjugation_check_hilbert(
                        &m,
                        &lvl,
                        &alpha_elem,
                    )?)
                }
                None => None,
            };
            // local symbols at the requested primes: n_v, d_v, t_v are the
            // valuations of 𝔫, 𝔇 and t_μ at each prime above p
            let mut local_data = Vec::new();
            for &p in primes {
                for factor in cuspbound::numberfield::split_rational_prime(&data.field, p)? {
                    local_data.push(json!({
                        "p": p,
                        "e": factor.ramification,
                        "f": factor.residue_degree,
                        "n_v": lvl.level().valuation(&factor.ideal)?,
                        "d_v": lvl.different().valuation(&factor.ideal)?,
                        "t_v": lvl.t_mu().valuation(&factor.ideal)?,
                    }));
                }
            }
            let config = json!({
                "command": "hbound", "field": field, "ideal": ideal,
                "tmu": tmu, "sigma": sigma, "alpha": alpha, "primes": primes,
                "seed": cli.seed
            });
            let mut human = format!(
                "# config {config}\ngamma_member = {}\nN0 = {:?}\nalpha_check = {:?}",
                report.gamma_member, report.n0, alpha_check
            );
            for row in &local_data {
                human.push_str(&format!("\nlocal {row}"));
            }
            let value = json!({
                "config": config,
                "report": report,
                "alpha_check": alpha_check,
                "local_data": local_data,
            });
            emitter.emit(human, value)?;
            Ok(true)
        }
        Command::Corpus { action } => match action {
            CorpusAction::List => {
                let mut rows = Vec::new();
                let mut human = String::from("label  N   k  eta\n");
                for label in etaforms::corpus_labels() {
                    let eq = etaforms::corpus_form(label)?;
                    human.push_str(&format!(
                        "{:<6} {:<3} {:<2} {:?}\n",
                        eq.label, eq.level, eq.weight, eq.eta
                    ));
                    rows.push(eq);
                }
                let config = json!({"command": "corpus list", "seed": cli.seed});
                emitter.emit(human, json!({"config": config, "forms": rows}))?;
                Ok(true)
            }
            CorpusAction::Build { label, trunc, out } => {
                let eq = etaforms::corpus_form(label)?;
                let record = eq.expand(*trunc)?;
                record.check_multiplicativity(200.min(*trunc))?;
                let file = etaforms::CorpusFile::from_record(&eq, &record);
                let path = out.clone().unwrap_or_else(|| format!("{label}.json"));
                let mut f = std::fs::File::create(&path)?;
                writeln!(f, "{}", serde_json::to_string_pretty(&file)?)?;
                let config = json!({"command": "corpus build", "label": label, "trunc": trunc, "seed": cli.seed});
                emitter.emit(
                    format!("# config {config}\nwrote {path} with {trunc} coefficients"),
                    json!({"config": config, "path": path, "coefficients": trunc}),
                )?;
                Ok(true)
            }
        },
        Command::Expand {
            form,
            cusp,
            nmax,
            tol,
            period_multiple,
        } => {
            let file = etaforms::load_form(form)?;
            let (a, l) = parse_cusp(cusp)?;
            let sigma = cuspcore::sigma_for_cusp(a, l)?;
            let probe = file.to_record(32)?;
            let plan = cuspbound::cuspexpand::choose_plan(
                &probe,
                &sigma,
                *nmax,
                (*tol) * 1e-2,
                *period_multiple,
                precision,
            )?;
            let record = file.to_record(plan.truncation)?;
            let exp = cuspbound::cuspexpand::expand_at_cusp(&record, &sigma, &plan)?;
            let config = json!({
                "command": "expand", "form": form, "cusp": cusp, "nmax": nmax,
                "tol": tol, "period_multiple": period_multiple,
                "precision": plan.precision, "seed": cli.seed
            });
            let mut human = format!(
                "# config {config}\nwidth = {}, N' = {}, period = {}\n{:>4} {:>24} {:>24} {:>12}\n",
                exp.width, exp.n_prime, exp.period, "n", "re", "im", "err"
            );
            for c in &exp.coefficients {
                let (re, im) = c.value.to_f64_pair();
                human.push_str(&format!(
                    "{:>4} {:>24.16e} {:>24.16e} {:>12.3e}\n",
                    c.n,
                    re,
                    im,
                    c.err_f64()
                ));
            }
            let value = json!({"config": config, "report": exp.report_json()});
            emitter.emit(human, value)?;
            Ok(true)
        }
        Command::Verify {
            form,
            cusp,
            modulus,
            tol,
            nmax,
            denom_bound,
        } => {
            let file = etaforms::load_form(form)?;
            let (a, l) = parse_cusp(cusp)?;
            let sigma = cuspcore::sigma_for_cusp(a, l)?;
            let modulus_opt = if modulus.eq_ignore_ascii_case("auto") {
                None
            } else {
                Some(modulus.parse::<u64>().map_err(|_| {
                    Error::Parse(format!(
                        "modulus must be 'auto' or an integer, got {modulus:?}"
                    ))
                })?)
            };
            let (exp, report) = recognize::verify_at_cusp(
                &file,
                &sigma,
                *nmax,
                *tol,
                modulus_opt,
                denom_bound.map(BigInt::from),
                precision,
                1,
            )?;
            let config = json!({
                "command": "verify", "form": form, "cusp": cusp, "modulus": modulus,
                "tol": tol, "nmax": nmax, "denom_bound": denom_bound, "seed": cli.seed
            });
            let mut human = format!(
                "# config {config}\nmodulus = {}, width = {}, N' = {}, all_recognized = {}, max_residual = {:.3e}\n",
                report.modulus, exp.width, exp.n_prime, report.all_recognized, report.max_residual
            );
            for e in &report.entries {
                match &e.outcome {
                    recognize::Recognition::Recognized {
                        value,
                        residual,
                        denominator,
                    } => {
                        human.push_str(&format!(
                            "{:>4} recognized  den={denominator:<8} residual={residual:.3e} coords={:?}\n",
                            e.n,
                            value.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>()
                        ));
                    }
                    recognize::Recognition::Failed { best_residual } => {
                        human.push_str(&format!(
                            "{:>4} FAILED      best_residual={best_residual:.3e}\n",
                            e.n
                        ));
                    }
                }
            }
            let value = json!({"config": config, "expansion": exp.report_json(), "report": report});
            emitter.emit(human, value)?;
            Ok(report.all_recognized)
        }
        Command::Sweep {
            forms,
            levels,
            nmax,
            tol,
        } => {
            let labels: Vec<String> = match forms {
                Some(f) => f
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect(),
                None => etaforms::corpus_labels()
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
            };
            let files: Result<Vec<_>, Error> =
                labels.iter().map(|l| etaforms::load_form(l)).collect();
            let mut files = files?;
            if !levels.is_empty() {
                files.retain(|f| levels.contains(&f.eta.level));
            }
            let rows = recognize::sweep(&files, *nmax, *tol, precision);
            let config = json!({
                "command": "sweep", "forms": labels, "levels": levels,
                "nmax": nmax, "tol": tol, "seed": cli.seed
            });
            let mut human = format!(
                "# config {config}\n{:<6} {:>4} {:>8} {:>7} {:>5} {:>12} {:>14} {}\n",
                "form", "N", "cusp", "width", "N'", "recognized", "max_residual", "note"
            );
            let mut ok = true;
            for r in &rows {
                ok &= r.all_recognized && r.error.is_none();
                human.push_str(&format!(
                    "{:<6} {:>4} {:>8} {:>7} {:>5} {:>12} {:>14.3e} {}\n",
                    r.form,
                    r.level,
                    format!("{}/{}", r.cusp_a, r.cusp_l),
                    r.width,
                    r.n_prime,
                    r.all_recognized,
                    r.max_residual,
                    r.error.clone().unwrap_or_default()
                ));
            }
            let value = json!({"config": config, "rows": rows});
            emitter.emit(human, value)?;
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(4),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Precondition(_) => ExitCode::from(2),
                Error::ToleranceUnachievable(_) => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
    }
}
