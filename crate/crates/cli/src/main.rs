//! Command-line surface: Stokes and central connection matrices for
//! projective spaces and Grassmannians, verification suites, and braid
//! actions on serialized monodromy data.

use std::io::Read;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use qcmono::bigfloat::{consts, ApproxComplex, BigFloat};
use qcmono::braid::BraidWord;
use qcmono::io as qio;
use qcmono::matrix::{sign_conjugate_witness, IntMatrix};
use qcmono::monodromy::{braid_act, validate, CMatrix, MonodromyData};
use qcmono::projective::{
    canonical_data, chamber0_data, chamber0_stokes, chamber_data_any, chamber_index,
    chamber_stokes_any, quasi_periodicity_check, stokes_walk, Backend,
};
use qcmono::{grassmannian, monodromy};

#[derive(Parser)]
#[command(name = "qcmono", version, about = "Quantum cohomology monodromy data engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "UPPER")]
enum Space {
    #[value(alias = "p")]
    P,
    #[value(alias = "g")]
    G,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Symbolic,
    Numeric,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Latex,
}

#[derive(Args)]
struct PointArgs {
    /// complex coordinate on the small quantum locus, as "a+bi"
    #[arg(long, default_value = "0")]
    t: String,
    /// slope of the oriented line; defaults to the midpoint of chamber 0
    #[arg(long)]
    phi: Option<String>,
    /// chamber index (overrides --t/--phi when given)
    #[arg(long, allow_negative_numbers = true)]
    chamber: Option<i64>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact integer Stokes matrix of a chamber
    Stokes {
        #[arg(long, value_enum)]
        space: Space,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: Option<usize>,
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the central connection matrix of a chamber
    Connection {
        #[arg(long, value_enum)]
        space: Space,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: Option<usize>,
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_enum, default_value = "symbolic")]
        backend: BackendArg,
        /// working precision in bits (env QMONO_PRECISION overrides default)
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run a verification suite; exit code 0 iff everything passes
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// largest k for the per-space loops
        #[arg(long, default_value_t = 5)]
        kmax: usize,
        /// bound for the Markov-equation enumeration
        #[arg(long, default_value_t = 300)]
        max_entry: i64,
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Apply a braid word (grammar: "b2 b1 B3", capitals invert) to data
    Braid {
        /// path to a serialized monodromy record, or "-" for stdin
        data: String,
        /// whitespace-separated word, leftmost letter first
        word: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

fn default_precision(flag: Option<u32>) -> Result<u32> {
    let bits = match flag {
        Some(b) => b,
        None => match std::env::var("QMONO_PRECISION") {
            Ok(v) => v.parse().context("QMONO_PRECISION must be an integer")?,
            Err(_) => 256,
        },
    };
    if bits < 64 {
        bail!("precision must be at least 64 bits");
    }
    Ok(bits)
}

fn parse_complex(s: &str, bits: u32) -> Result<ApproxComplex> {
    // forms: "a", "bi", "a+bi", "a-bi"
    let s = s.trim().replace(' ', "");
    let parse_re = |x: &str| -> Result<BigFloat> {
        if x.is_empty() || x == "+" {
            return Ok(BigFloat::one(bits));
        }
        if x == "-" {
            return Ok(-BigFloat::one(bits));
        }
        BigFloat::parse_decimal(x, bits).ok_or_else(|| anyhow!("bad number: {x}"))
    };
    if let Some(body) = s.strip_suffix('i') {
        // split into real and imaginary at the last +/- not at position 0
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            if bytes[idx] == b'+' || bytes[idx] == b'-' {
                split = Some(idx);
                break;
            }
        }
        match split {
            Some(idx) => Ok(ApproxComplex::new(
                parse_re(&body[..idx])?,
                parse_re(&body[idx..])?,
            )),
            None => Ok(ApproxComplex::new(BigFloat::zero(bits), parse_re(body)?)),
        }
    } else {
        Ok(ApproxComplex::new(parse_re(&s)?, BigFloat::zero(bits)))
    }
}

fn resolve_chamber(k: usize, point: &PointArgs) -> Result<i64> {
    if let Some(m) = point.chamber {
        return Ok(m);
    }
    let bits = 192;
    let t = parse_complex(&point.t, bits)?;
    let phi = match &point.phi {
        Some(p) => BigFloat::parse_decimal(p, bits).ok_or_else(|| anyhow!("bad phi"))?,
        None => &consts::pi(bits) / &BigFloat::from_i64(2 * k as i64, bits),
    };
    Ok(chamber_index(k, &t, &phi))
}

fn check_rk(space: Space, k: usize, r: Option<usize>) -> Result<usize> {
    if k < 2 {
        bail!("need k >= 2");
    }
    match space {
        Space::P => {
            if let Some(r) = r {
                if r != 1 {
                    bail!("--r only applies to Grassmannians");
                }
            }
            Ok(1)
        }
        Space::G => {
            let r = r.ok_or_else(|| anyhow!("--r is required for Grassmannians"))?;
            if r == 0 || r >= k {
                bail!("need 0 < r < k");
            }
            Ok(r)
        }
    }
}

fn print_int_matrix(m: &IntMatrix, format: Format) {
    match format {
        Format::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(&qio::int_matrix_to_json(m)).unwrap()
            );
        }
        Format::Text => {
            let strings: Vec<Vec<String>> = (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| m.at(i, j).to_string()).collect())
                .collect();
            let width = strings
                .iter()
                .flat_map(|r| r.iter().map(|s| s.len()))
                .max()
                .unwrap_or(1);
            for row in strings {
                let cells: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
                println!("[ {} ]", cells.join(" "));
            }
        }
        Format::Latex => {
            println!("\\begin{{pmatrix}}");
            for i in 0..m.rows() {
                let cells: Vec<String> = (0..m.cols()).map(|j| m.at(i, j).to_string()).collect();
                println!("{} \\\\", cells.join(" & "));
            }
            println!("\\end{{pmatrix}}");
        }
    }
}

fn data_for(space: Space, r: usize, k: usize, chamber: i64, backend: Backend) -> Result<MonodromyData> {
    match space {
        Space::P => Ok(chamber_data_any(k, chamber, backend)?),
        Space::G => {
            let m = usize::try_from(chamber)
                .map_err(|_| anyhow!("Grassmannian chambers are indexed from 0"))?;
            Ok(grassmannian::grass_monodromy(r, k, m, backend)?)
        }
    }
}

fn cmd_stokes(space: Space, k: usize, r: Option<usize>, point: &PointArgs, format: Format) -> Result<()> {
    let r = check_rk(space, k, r)?;
    let chamber = resolve_chamber(k, point)?;
    let s = match space {
        Space::P => chamber_stokes_any(k, chamber)?,
        Space::G => {
            let m = usize::try_from(chamber)
                .map_err(|_| anyhow!("Grassmannian chambers are indexed from 0"))?;
            grassmannian::grass_stokes(r, k, m)?
        }
    };
    print_int_matrix(&s, format);
    Ok(())
}

fn render_scalar_matrix(d: &MonodromyData, format: Format) -> Result<()> {
    match format {
        Format::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(&qio::monodromy_to_json(d)).unwrap()
            );
        }
        Format::Text => match &d.c_mat {
            CMatrix::Symbolic(m) => {
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        println!("C[{i}][{j}] = {}", m.at(i, j));
                    }
                }
            }
            CMatrix::Numeric(m) => {
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        let z = m.at(i, j);
                        println!(
                            "C[{i}][{j}] = {} + {} i",
                            z.re.to_decimal_string(40),
                            z.im.to_decimal_string(40)
                        );
                    }
                }
            }
        },
        Format::Latex => match &d.c_mat {
            CMatrix::Symbolic(m) => {
                println!("\\begin{{pmatrix}}");
                for i in 0..m.rows() {
                    let cells: Vec<String> =
                        (0..m.cols()).map(|j| format!("{}", m.at(i, j))).collect();
                    println!("{} \\\\", cells.join(" & "));
                }
                println!("\\end{{pmatrix}}");
            }
            CMatrix::Numeric(_) => bail!("latex output expects the symbolic backend"),
        },
    }
    Ok(())
}

fn cmd_connection(
    space: Space,
    k: usize,
    r: Option<usize>,
    point: &PointArgs,
    backend: BackendArg,
    precision: Option<u32>,
    format: Format,
) -> Result<()> {
    let r = check_rk(space, k, r)?;
    let chamber = resolve_chamber(k, point)?;
    let backend = match backend {
        BackendArg::Symbolic => Backend::Symbolic,
        BackendArg::Numeric => Backend::Numeric(default_precision(precision)?),
    };
    let d = data_for(space, r, k, chamber, backend)?;
    render_scalar_matrix(&d, format)
}

struct SuiteReport {
    lines: Vec<(String, bool)>,
}

impl SuiteReport {
    fn new() -> Self {
        SuiteReport { lines: Vec::new() }
    }

    fn push(&mut self, name: impl Into<String>, pass: bool) {
        self.lines.push((name.into(), pass));
    }

    fn emit(&self, format: Format) -> bool {
        let all = self.lines.iter().all(|(_, p)| *p);
        match format {
            Format::Json => {
                let rows: Vec<serde_json::Value> = self
                    .lines
                    .iter()
                    .map(|(n, p)| serde_json::json!({"check": n, "pass": p}))
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({
                        "checks": rows,
                        "pass": all
                    }))
                    .unwrap()
                );
            }
            _ => {
                for (n, p) in &self.lines {
                    println!("{} {}", if *p { "PASS" } else { "FAIL" }, n);
                }
                println!("{}", if all { "PASS" } else { "FAIL" });
            }
        }
        all
    }
}

fn suite_constraints(kmax: usize, bits: u32, rep: &mut SuiteReport) -> Result<()> {
    let tol = {
        let mut t = BigFloat::one(bits);
        for _ in 0..40 {
            t = &t / &BigFloat::from_i64(10, bits);
        }
        t
    };
    for k in 2..=kmax {
        let backend = if k <= 6 { Backend::Symbolic } else { Backend::Numeric(bits) };
        let d = canonical_data(k, backend);
        let v = validate(&d, &tol)?;
        rep.push(format!("constraints canonical P({k})"), v.all_pass());
        if k <= 5 {
            let (d0, _) = chamber0_data(k, Backend::Symbolic)?;
            let v = validate(&d0, &tol)?;
            rep.push(format!("constraints chamber-0 P({k})"), v.all_pass());
        }
    }
    for k in 3..=kmax.min(5) {
        for r in 2..k {
            let backend =
                if k <= 4 { Backend::Symbolic } else { Backend::Numeric(bits) };
            let d = grassmannian::grass_monodromy(r, k, 0, backend)?;
            let v = validate(&d, &tol)?;
            rep.push(format!("constraints chamber-0 G({r},{k})"), v.all_pass());
        }
    }
    Ok(())
}

fn suite_quasi(kmax: usize, rep: &mut SuiteReport) -> Result<()> {
    for k in 2..=kmax.min(7) {
        let q = quasi_periodicity_check(k)?;
        rep.push(
            format!("quasi-periodicity P({k})"),
            q.rotation_sign_equivalent && q.superdiagonal_stable && q.superdiagonal_binomial,
        );
    }
    for k in 3..=kmax.min(5) {
        for r in 2..k {
            let q = grassmannian::grass_quasi_periodicity(r, k)?;
            rep.push(
                format!("quasi-periodicity G({r},{k})"),
                q.rotation_sign_equivalent
                    && q.superdiagonal_stable
                    && q.superdiagonal_in_binomial_set,
            );
        }
    }
    Ok(())
}

fn suite_markov(max_entry: i64, rep: &mut SuiteReport) -> Result<()> {
    let mut all = true;
    let mut count = 0usize;
    for a in 1..=max_entry {
        for b in a..=max_entry {
            let disc = a * a * b * b - 4 * (a * a + b * b);
            if disc < 0 {
                continue;
            }
            let sq = (disc as f64).sqrt() as i64;
            for s in [sq - 1, sq, sq + 1] {
                if s < 0 || s * s != disc {
                    continue;
                }
                for c in [(a * b - s) / 2, (a * b + s) / 2] {
                    if c >= b && c <= max_entry && a * a + b * b + c * c == a * b * c {
                        count += 1;
                        let ok = match monodromy::markov_descend(a, b, c) {
                            Ok(path) => path.is_empty() || path.last() == Some(&[3, 3, 3]),
                            Err(_) => false,
                        };
                        all &= ok;
                    }
                }
            }
        }
    }
    rep.push(format!("markov descent ({count} solutions up to {max_entry})"), all && count > 0);
    Ok(())
}

fn suite_tables(kmax: usize, rep: &mut SuiteReport) -> Result<()> {
    let mut walks = std::collections::HashMap::new();
    for k in 2..=kmax.min(5) {
        let s0 = chamber0_stokes(k)?;
        walks.insert(k, stokes_walk(k, &s0, 2 * k + 4)?);
    }
    let mut all = true;
    let mut n = 0usize;
    for row in qio::bundled_stokes_tables() {
        if row.k > kmax {
            continue;
        }
        n += 1;
        let walk = &walks[&row.k];
        let computed = match row.space.as_str() {
            "P" => walk[row.chamber].clone(),
            _ => walk[row.chamber + row.r - 1].compound(row.r)?,
        };
        all &= sign_conjugate_witness(&computed, &row.matrix()).is_some();
    }
    rep.push(format!("table fixtures ({n} rows)"), all && n > 0);
    Ok(())
}

fn cmd_verify(
    suite: &str,
    kmax: usize,
    max_entry: i64,
    precision: Option<u32>,
    format: Format,
) -> Result<bool> {
    let bits = default_precision(precision)?;
    let mut rep = SuiteReport::new();
    match suite {
        "constraints" => suite_constraints(kmax, bits, &mut rep)?,
        "quasi" => suite_quasi(kmax, &mut rep)?,
        "markov" => suite_markov(max_entry, &mut rep)?,
        "tables" => suite_tables(kmax, &mut rep)?,
        "all" => {
            suite_constraints(kmax, bits, &mut rep)?;
            suite_quasi(kmax, &mut rep)?;
            suite_markov(max_entry, &mut rep)?;
            suite_tables(kmax, &mut rep)?;
        }
        other => bail!("unknown suite {other} (constraints|quasi|markov|tables|all)"),
    }
    Ok(rep.emit(format))
}

fn cmd_braid(data: &str, word: &str, format: Format) -> Result<()> {
    let raw = if data == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        std::fs::read_to_string(data).with_context(|| format!("reading {data}"))?
    };
    let parsed: qio::MonodromyJson = serde_json::from_str(&raw).context("parsing data file")?;
    let d = qio::monodromy_from_json(&parsed).map_err(|e| anyhow!("{e}"))?;
    let out = if word.trim().is_empty() {
        d
    } else {
        let w = BraidWord::parse(d.size(), word).map_err(|e| anyhow!("{e}"))?;
        braid_act(&d, &w).map_err(|e| anyhow!("{e}"))?
    };
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&qio::monodromy_to_json(&out)).unwrap()
        ),
        _ => {
            print_int_matrix(&out.stokes, format);
        }
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Stokes { space, k, r, point, format } => {
            cmd_stokes(space, k, r, &point, format).map(|_| true)
        }
        Command::Connection { space, k, r, point, backend, precision, format } => {
            cmd_connection(space, k, r, &point, backend, precision, format).map(|_| true)
        }
        Command::Verify { suite, kmax, max_entry, precision, format } => {
            cmd_verify(&suite, kmax, max_entry, precision, format)
        }
        Command::Braid { data, word, format } => cmd_braid(&data, &word, format).map(|_| true),
    };
    match outcome {
        Ok(true) => {}
        Ok(false) => std::process::exit(1),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
