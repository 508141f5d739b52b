//! `eutactic`: scripted verification of eutactic stars.
//!
//! Exit status is 0 when the tested property holds, 1 when it fails and 2 on
//! any input error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use eutactic::qseries::{check_holomorphic, heat_apply, theta_block, FourierSeries, DEFAULT_ORDER};
use eutactic::rational;
use eutactic::rootsys::{build_p_lattice, build_star, catalog_label, recognize};
use eutactic::search::{enumerate_stars, theorem_corpus, verify_theorem, SearchOptions};
use eutactic::{certify_extremal, EutacticStar, Lattice};

#[derive(Parser, Debug)]
#[command(name = "eutactic", version, about = "Exact verification of eutactic stars on integral lattices")]
struct Cli {
    /// Worker threads for parallel minimization (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Test whether a star is eutactic.
    Check {
        /// Star file (`-` for stdin).
        star: PathBuf,
    },
    /// Certify whether a eutactic star is extremal.
    Extremal(StarSource),
    /// Expand the theta block of a star.
    Expand {
        #[command(flatten)]
        source: StarSource,
        /// Truncation: keep exponents n = n24/24 with n24 ≤ ORDER.
        #[arg(long, env = "EUTACTIC_ORDER", default_value_t = DEFAULT_ORDER,
              value_parser = clap::value_parser!(i64).range(0..))]
        order: i64,
        /// Power of eta in the denominator (default: the rank).
        #[arg(long, allow_negative_numbers = true)]
        eta: Option<i64>,
        /// Report terms with 2n < (l, l).
        #[arg(long)]
        check_holomorphic: bool,
        /// Report terms with 2n != (l, l).
        #[arg(long)]
        check_singular: bool,
        /// Apply the heat operator and report the nonzero terms.
        #[arg(long)]
        heat: bool,
    },
    /// Emit the star or weight lattice of a catalogued root system.
    Catalog {
        /// Root system label such as A2, B3, E8.
        #[arg(long = "type", value_name = "T")]
        cartan_type: String,
        /// Emit the star file (default).
        #[arg(long, conflicts_with = "lattice")]
        star: bool,
        /// Emit the lattice file.
        #[arg(long)]
        lattice: bool,
    },
    /// Enumerate the stars of a lattice and check the classification.
    Search {
        /// Lattice file (`-` for stdin).
        lattice: PathBuf,
        /// Only count stars, one per orbit unless --all is given.
        #[arg(long)]
        count: bool,
        /// With --count, count every ordering and sign choice separately.
        #[arg(long, requires = "count")]
        all: bool,
    },
    /// Decide whether the support of a star is a root system.
    Recognize {
        /// Star file (`-` for stdin).
        star: PathBuf,
    },
    /// Check the classification on the given lattices, or on the built-in corpus.
    VerifyTheorem {
        /// Lattice files; none means the built-in corpus.
        lattices: Vec<PathBuf>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct StarSource {
    /// Star file (`-` for stdin).
    star: Option<PathBuf>,
    /// Use the star of a catalogued root system instead of a file.
    #[arg(long = "type", value_name = "T")]
    cartan_type: Option<String>,
}

/// Outcome of a command other than an input error.
enum Verdict {
    Holds,
    Fails,
}

type CliResult = Result<Verdict, String>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let mut out = String::new();
    let result = run(cli.command, &mut out);
    // A closed pipe is not worth a panic.
    let _ = io::stdout().lock().write_all(out.as_bytes());
    match result {
        Ok(Verdict::Holds) => ExitCode::SUCCESS,
        Ok(Verdict::Fails) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, out: &mut String) -> CliResult {
    match command {
        Command::Check { star } => {
            let star = read_star(&star)?;
            let ok = star.is_eutactic();
            out.push_str(&format!("eutactic: {ok}\n"));
            Ok(verdict(ok))
        }
        Command::Extremal(source) => {
            let star = source.load()?;
            if !star.is_eutactic() {
                return Err("star is not eutactic".into());
            }
            let cert = certify_extremal(&star).map_err(|e| e.to_string())?;
            push_json(out, &cert.to_json_value());
            Ok(verdict(cert.is_extremal))
        }
        Command::Expand { source, order, eta, check_holomorphic, check_singular, heat } => {
            let star = source.load()?;
            let eta = eta.unwrap_or(star.lattice().rank() as i64);
            let series = theta_block(&star, eta, order);
            if !(check_holomorphic || check_singular || heat) {
                out.push_str(&series.dump());
                return Ok(Verdict::Holds);
            }
            let mut ok = true;
            if check_holomorphic {
                ok &= report_holomorphic(&series, out);
            }
            if check_singular {
                ok &= report_singular(&series, out);
            }
            if heat {
                let image = heat_apply(&series);
                out.push_str(&format!("heat: {}\n", if image.is_zero() { "zero" } else { "nonzero" }));
                out.push_str(&image.dump());
                ok &= image.is_zero();
            }
            Ok(verdict(ok))
        }
        Command::Catalog { cartan_type, star: _, lattice } => {
            let d = catalog_label(&cartan_type).map_err(|e| e.to_string())?;
            let text = if lattice {
                build_p_lattice(&d).map_err(|e| e.to_string())?.lattice.to_json()
            } else {
                build_star(&d).map_err(|e| e.to_string())?.to_json()
            };
            out.push_str(&text);
            out.push('\n');
            Ok(Verdict::Holds)
        }
        Command::Search { lattice, count, all } => {
            let lattice = read_lattice(&lattice)?;
            if count {
                let options = SearchOptions { canonical_dedup: !all, ..SearchOptions::default() };
                let stars = enumerate_stars(&lattice, &options).map_err(|e| e.to_string())?;
                push_json(out, &json!({ "gram": lattice.gram(), "stars": stars.len() }));
                return Ok(Verdict::Holds);
            }
            let value = theorem_value(&lattice)?;
            let ok = value["counterexamples"].as_array().is_some_and(Vec::is_empty);
            push_json(out, &value);
            Ok(verdict(ok))
        }
        Command::Recognize { star } => {
            let star = read_star(&star)?;
            let support = star.support_set();
            if support.has_duplicates() {
                let (i, j) = support.duplicates[0];
                out.push_str(&format!("not a root system: members {i} and {j} coincide up to sign\n"));
                return Ok(Verdict::Fails);
            }
            let r = recognize(&support.vectors, star.lattice()).map_err(|e| e.to_string())?;
            out.push_str(&r.label());
            out.push('\n');
            Ok(verdict(r.is_root_system()))
        }
        Command::VerifyTheorem { lattices } => {
            let lattices = if lattices.is_empty() {
                theorem_corpus()
            } else {
                lattices.iter().map(|p| read_lattice(p)).collect::<Result<Vec<_>, _>>()?
            };
            let reports = lattices.iter().map(theorem_value).collect::<Result<Vec<_>, _>>()?;
            let ok = reports
                .iter()
                .all(|r| r["counterexamples"].as_array().is_some_and(Vec::is_empty));
            push_json(out, &Value::Array(reports));
            Ok(verdict(ok))
        }
    }
}

impl StarSource {
    fn load(&self) -> Result<EutacticStar, String> {
        match (&self.star, &self.cartan_type) {
            (Some(path), None) => read_star(path),
            (None, Some(label)) => {
                let d = catalog_label(label).map_err(|e| e.to_string())?;
                build_star(&d).map_err(|e| e.to_string())
            }
            _ => Err("give either a star file or --type".into()),
        }
    }
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Holds
    } else {
        Verdict::Fails
    }
}

fn push_json(out: &mut String, value: &Value) {
    out.push_str(&serde_json::to_string_pretty(value).expect("serializable"));
    out.push('\n');
}

fn read_input(path: &Path) -> Result<String, String> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).map_err(|e| format!("stdin: {e}"))?;
        return Ok(text);
    }
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_star(path: &Path) -> Result<EutacticStar, String> {
    let text = read_input(path)?;
    EutacticStar::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_lattice(path: &Path) -> Result<Lattice, String> {
    let text = read_input(path)?;
    Lattice::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn theorem_value(lattice: &Lattice) -> Result<Value, String> {
    let report = verify_theorem(lattice).map_err(|e| e.to_string())?;
    let mut value = report.to_json_value();
    value["gram"] = json!(lattice.gram());
    Ok(value)
}

fn term_line(series: &FourierSeries, e: &eutactic::qseries::Exponent, coef: &impl std::fmt::Display) -> String {
    let w: Vec<String> = e.w.iter().map(i64::to_string).collect();
    format!("{} {}/{} {}", e.n24, w.join(","), series.z_den(), coef)
}

fn report_holomorphic(series: &FourierSeries, out: &mut String) -> bool {
    let violations = check_holomorphic(series);
    out.push_str(&format!("holomorphic: {}\n", violations.is_empty()));
    for v in &violations {
        out.push_str(&format!(
            "{} deficit {}\n",
            term_line(series, &v.exponent, &v.coefficient),
            rational::format(&v.deficit)
        ));
    }
    violations.is_empty()
}

fn report_singular(series: &FourierSeries, out: &mut String) -> bool {
    let off: Vec<_> = series
        .terms()
        .iter()
        .filter(|(e, _)| !num_is_zero(&series.hyperbolic_norm(e)))
        .collect();
    out.push_str(&format!("singular: {}\n", off.is_empty()));
    for (e, c) in &off {
        out.push_str(&format!(
            "{} norm {}\n",
            term_line(series, e, c),
            rational::format(&series.hyperbolic_norm(e))
        ));
    }
    off.is_empty()
}

fn num_is_zero(x: &rational::Rational) -> bool {
    *x == rational::int(0)
}
