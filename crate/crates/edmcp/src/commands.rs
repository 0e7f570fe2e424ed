//! Subcommands and their exit-code contract:
//! 0 ok, 1 verification failure, 2 invalid input, 3 resource limit, 4 construction error.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use edmcp_core::arith::{kernel_basis, rational, rational_to_f64};
use edmcp_core::construct::{
    build_qn, build_rn, dd_factorize, inductive_factorize, lrl_factorize, optimal_factorize,
};
use edmcp_core::edm::{
    build_an, build_bn, build_edm, f_min, f_min_u128, g_diag, g_jordan, jordan_totient2,
};
use edmcp_core::factor::{dnn_check, to_numeric, verify, DnnVerdict};
use edmcp_core::integer::{
    build_ei, jordan_sum_factorize, smalln_certificate, Compression, SearchConfig, SearchStatus,
    DEFAULT_NODE_LIMIT,
};
use edmcp_core::{CpFactorization, Error as CoreError, Scalar, SymMatrix};

use crate::error::CliError;
use crate::json::{
    from_json, parse_rational, parse_scalar_arg, to_json, FactorizationFile, JsonScalar, LrlFile,
    MatrixFile, NumericFile, ReportFile, SearchMiss,
};
use crate::search::parallel_search;

type CmdResult = Result<(), CliError>;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "edmcp",
    version,
    about = "Exact completely positive factorizations of translated distance matrices"
)]
pub struct Cli {
    /// Write the run manifest here instead of stderr.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Write a matrix as JSON.
    Gen(GenArgs),
    /// Build a factorization with one of the constructions.
    Factorize(FactorizeArgs),
    /// Check a factorization against a matrix exactly.
    Verify(VerifyArgs),
    /// Exhaustive search for an integer factorization.
    Search(SearchArgs),
    /// Table of the shift bounds f, sqrt(7/5) f, g_J and g_D.
    Bounds(BoundsArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GenKind {
    /// `A_n`, squared differences of 1..n.
    An,
    /// Distance matrix of `--points`.
    Edm,
    /// `B_n = A_n + f(n) I`.
    Bn,
    /// Arrow matrix `R_n` with hub shifts `q f(k)`.
    Rn,
    /// Double arrow matrix `Q_n` with hub shifts `q f(k)`.
    Qn,
    /// 0/1 residue pattern `E_i`.
    Ei,
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub i: Option<usize>,
    /// Shift multiplier for rn and qn, e.g. `7/5` or `{"rad":35,"coef":"1/5"}`.
    #[arg(long)]
    pub q: Option<String>,
    /// Comma-separated rational points for edm.
    #[arg(long)]
    pub points: Option<String>,
    /// Added to every diagonal entry.
    #[arg(long)]
    pub shift: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// `A_n = L R L^T` with `L >= 0`.
    Lrl,
    /// Factorization of `B_n`.
    Optimal,
    /// Factorization of `A_n + q f(n) I`, `q >= 1`.
    Inductive,
    /// Integer factorization: `A_n + g_J(n) I` from `--n`, small-n certificates with `--smalln`, or search on `--in`.
    Integer,
    /// Diagonally dominant input from `--in`, or `A_n + g_D(n) I` from `--n`.
    Dd,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompressionArg {
    #[default]
    FourSquares,
    Repetition,
}

#[derive(Debug, Args, Serialize)]
pub struct FactorizeArgs {
    #[arg(value_enum)]
    pub method: Method,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub q: Option<String>,
    /// Run the exact verifier; exit 1 unless every check passes.
    #[arg(long)]
    pub verify: bool,
    /// Also emit a floating-point factor rounded to this many digits.
    #[arg(long)]
    pub numeric: Option<u32>,
    /// Hard-coded integer certificate for `B_2..B_5` and `B_6 + I`.
    #[arg(long)]
    pub smalln: bool,
    #[arg(long, value_enum, default_value_t)]
    pub compression: CompressionArg,
    #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
    pub node_limit: u64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelMode {
    #[default]
    Auto,
    None,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long)]
    pub factorization: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub kernel: KernelMode,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SearchArgs {
    /// Matrix JSON; stdin when absent.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
    pub node_limit: u64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value_t)]
    pub kernel: KernelMode,
    /// Upper bound on column entries; defaults to `floor(sqrt(max diagonal))`.
    #[arg(long)]
    pub max_entry: Option<i64>,
    #[arg(long)]
    pub no_psd_pruning: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n_max: usize,
    #[arg(long, value_enum, default_value_t)]
    pub format: TableFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    parameters: Value,
    version: &'a str,
    elapsed_ms: f64,
    result: Value,
}

pub fn run(cli: &Cli) -> CmdResult {
    let start = Instant::now();
    let (name, params, outcome) = match &cli.command {
        Command::Gen(a) => return gen(a),
        Command::Verify(a) => return verify_cmd(a),
        Command::Bounds(a) => return bounds(a),
        Command::Factorize(a) => ("factorize", serde_json::to_value(a), factorize(a)),
        Command::Search(a) => ("search", serde_json::to_value(a), search_cmd(a)),
    };
    let result = match &outcome {
        Ok(v) => v.clone(),
        Err(e) => json!({ "error": e.to_string(), "exit_code": e.code() }),
    };
    let manifest = Manifest {
        command: name,
        parameters: params.unwrap_or(Value::Null),
        version: env!("CARGO_PKG_VERSION"),
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        result,
    };
    let text = serde_json::to_string(&manifest).expect("serializable manifest");
    match &cli.manifest {
        Some(p) => write_file(p, &format!("{text}\n"))?,
        None => eprintln!("{text}"),
    }
    outcome.map(|_| ())
}

fn write_file(path: &Path, text: &str) -> CmdResult {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit(out: &Option<PathBuf>, text: &str) -> CmdResult {
    match out {
        Some(p) => write_file(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "stdout".into(),
                    source,
                })
        }
    }
}

fn read_input(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) if p != Path::new("-") => {
            std::fs::read_to_string(p).map_err(|source| CliError::Io {
                path: p.display().to_string(),
                source,
            })
        }
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|source| CliError::Io {
                    path: "stdin".into(),
                    source,
                })?;
            Ok(s)
        }
    }
}

fn read_matrix(path: Option<&Path>) -> Result<SymMatrix, CliError> {
    let file: MatrixFile = from_json(&read_input(path)?, "matrix")?;
    file.to_matrix()
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::input(format!("--{flag} is required")))
}

fn need_n(n: Option<usize>, min: usize) -> Result<usize, CliError> {
    let n = need(n, "n")?;
    if n < min {
        return Err(CliError::input(format!(
            "--n must be at least {min}, got {n}"
        )));
    }
    Ok(n)
}

/// Parameter errors map to exit 2, everything else a construction raises to exit 4.
fn built<T>(r: edmcp_core::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| match e {
        CoreError::InvalidArgument(_) | CoreError::MixedRadicands(..) => CliError::input_core(e),
        e => CliError::construction(e),
    })
}

fn q_arg(q: &Option<String>) -> Result<Scalar, CliError> {
    parse_scalar_arg(
        q.as_deref()
            .ok_or_else(|| CliError::input("--q is required"))?,
    )
}

fn gen(a: &GenArgs) -> CmdResult {
    let m = match a.kind {
        GenKind::An => built(build_an(need_n(a.n, 1)?))?,
        GenKind::Bn => built(build_bn(need_n(a.n, 1)?))?,
        GenKind::Edm => {
            let pts = a
                .points
                .as_deref()
                .ok_or_else(|| CliError::input("--points is required"))?
                .split(',')
                .map(parse_rational)
                .collect::<Result<Vec<_>, _>>()?;
            built(build_edm(&pts))?
        }
        GenKind::Rn | GenKind::Qn => {
            let q = q_arg(&a.q)?;
            let g = |k: usize| &q * &Scalar::from(f_min(k));
            let n = need(a.n, "n")?;
            match a.kind {
                GenKind::Rn => built(build_rn(n, g))?,
                _ => built(build_qn(n, g))?,
            }
        }
        GenKind::Ei => built(build_ei(need_n(a.n, 1)?, need(a.i, "i")?))?,
    };
    let m = match &a.shift {
        Some(s) => m.add_diagonal(&parse_scalar_arg(s)?),
        None => m,
    };
    built(m.radicand())?;
    emit(&a.out, &to_json(&MatrixFile::from_matrix(&m)))
}

fn exact_kernel(a: &SymMatrix, mode: KernelMode) -> Vec<Vec<Scalar>> {
    match mode {
        KernelMode::Auto => kernel_basis(a),
        KernelMode::None => Vec::new(),
    }
}

fn check(a: &SymMatrix, f: &CpFactorization) -> Result<ReportFile, CliError> {
    let kernel = exact_kernel(a, KernelMode::Auto);
    let report = verify(a, f, &kernel).map_err(CliError::input_core)?;
    Ok(ReportFile::new(&report, kernel.len()))
}

fn factorize(a: &FactorizeArgs) -> Result<Value, CliError> {
    if let Method::Lrl = a.method {
        let n = need_n(a.n, 3)?;
        let pair = built(lrl_factorize(n))?;
        emit(&a.out, &to_json(&LrlFile::from(&pair)))?;
        let mut summary = json!({ "method": "lrl", "n": n });
        if a.verify {
            let an = built(build_an(n))?;
            let ok = pair.check_inverse()
                && pair.l.iter().flatten().all(|&v| v >= 0)
                && pair.reconstruct() == an;
            summary["verified"] = json!(ok);
            if !ok {
                return Err(CliError::Verify(format!("L R L^T != A_{n}")));
            }
        }
        return Ok(summary);
    }
    let (target, f, extra) = match a.method {
        Method::Lrl => unreachable!(),
        Method::Optimal => {
            let n = need_n(a.n, 2)?;
            (built(build_bn(n))?, built(optimal_factorize(n))?, None)
        }
        Method::Inductive => {
            let n = need_n(a.n, 2)?;
            let q = q_arg(&a.q)?;
            if (&q - &Scalar::from_int(1)).is_negative() {
                return Err(CliError::Construction(format!(
                    "q = {q} is below 1, the minimal shift multiplier"
                )));
            }
            let target = built(build_an(n))?.add_diagonal(&(&q * &Scalar::from(f_min(n))));
            let f = inductive_factorize(n, &q).map_err(CliError::construction)?;
            (target, f, None)
        }
        Method::Integer => integer_method(a)?,
        Method::Dd => {
            let target = match (&a.input, a.n) {
                (Some(p), _) => read_matrix(Some(p))?,
                (None, Some(_)) => {
                    let n = need_n(a.n, 2)?;
                    built(build_an(n))?.add_diagonal(&Scalar::from(g_diag(n)))
                }
                (None, None) => return Err(CliError::input("dd needs --in or --n")),
            };
            let f = built(dd_factorize(&target))?;
            (target, f, None)
        }
    };
    let mut file = FactorizationFile::from_factorization(&f);
    if let Some(d) = a.numeric {
        file.numeric = Some(NumericFile::from(to_numeric(&f, d)));
    }
    if let Some((status, nodes)) = extra {
        file.status = Some(status);
        file.nodes = Some(nodes);
    }
    emit(&a.out, &to_json(&file))?;
    let mut summary = json!({
        "method": a.method,
        "dim": f.dim(),
        "atoms": f.len(),
        "integral": f.is_integral(),
        "radicand": file.field.rad,
    });
    if a.verify {
        let report = check(&target, &f)?;
        summary["verification"] = serde_json::to_value(&report).expect("report");
        if !report.passed {
            return Err(CliError::Verify(format!("{report:?}")));
        }
    }
    Ok(summary)
}

type Built = (SymMatrix, CpFactorization, Option<(String, u64)>);

fn integer_method(a: &FactorizeArgs) -> Result<Built, CliError> {
    if a.smalln {
        let cert = built(smalln_certificate(need_n(a.n, 2)?))?;
        return Ok((cert.matrix, cert.integral, None));
    }
    if let Some(p) = &a.input {
        let target = read_matrix(Some(p))?;
        let cfg = SearchConfig {
            kernel: kernel_basis(&target),
            node_limit: a.node_limit,
            ..SearchConfig::default()
        };
        let out = parallel_search(&target, &cfg, a.jobs).map_err(CliError::input_core)?;
        return match (out.status, out.certificate) {
            (SearchStatus::Found, Some(f)) => {
                Ok((target, f, Some(("found".into(), out.nodes_visited))))
            }
            (SearchStatus::Limit, _) => Err(CliError::Limit(format!(
                "search stopped after {} nodes",
                out.nodes_visited
            ))),
            _ => Err(CliError::Construction(format!(
                "no integer factorization exists (search exhausted after {} nodes)",
                out.nodes_visited
            ))),
        };
    }
    let n = need_n(a.n, 2)?;
    let mode = match a.compression {
        CompressionArg::FourSquares => Compression::FourSquares,
        CompressionArg::Repetition => Compression::Repetition,
    };
    let target = built(build_an(n))?.add_diagonal(&Scalar::from(g_jordan(n)));
    Ok((target, built(jordan_sum_factorize(n, mode))?, None))
}

fn verify_cmd(a: &VerifyArgs) -> CmdResult {
    let m = read_matrix(Some(&a.matrix))?;
    let file: FactorizationFile = from_json(&read_input(Some(&a.factorization))?, "factorization")?;
    let f = file.to_factorization()?;
    let kernel = exact_kernel(&m, a.kernel);
    let report = verify(&m, &f, &kernel).map_err(CliError::input_core)?;
    let out = ReportFile::new(&report, kernel.len());
    emit(&a.out, &to_json(&out))?;
    if out.passed {
        Ok(())
    } else {
        Err(CliError::Verify(describe(&out)))
    }
}

fn describe(r: &ReportFile) -> String {
    if let Some(d) = &r.first_discrepancy {
        let exp = serde_json::to_string(&d.expected).unwrap_or_default();
        let got = serde_json::to_string(&d.got).unwrap_or_default();
        return format!("entry ({}, {}) is {got}, expected {exp}", d.row, d.col);
    }
    if let Some([atom, k]) = r.first_kernel_violation {
        return format!("atom {atom} is not orthogonal to kernel vector {k}");
    }
    if !r.columns_nonneg {
        return "some atom has a negative weight or entry".into();
    }
    "factorization is flagged integral but has a non-integer atom".into()
}

fn search_cmd(a: &SearchArgs) -> Result<Value, CliError> {
    let m = read_matrix(a.input.as_deref())?;
    if !m.is_integer() {
        return Err(CliError::input("search needs an integer matrix"));
    }
    match dnn_check(&m) {
        DnnVerdict::Dnn => {}
        DnnVerdict::NotNonneg(i, j) => {
            let body = json!({
                "status": "invalid",
                "reason": "negative entry",
                "entry": [i + 1, j + 1],
            });
            emit(&a.out, &to_json(&body))?;
            return Err(CliError::input(format!(
                "not doubly nonnegative: entry ({}, {}) is negative",
                i + 1,
                j + 1
            )));
        }
        DnnVerdict::NotPsd { witness, value } => {
            let body = json!({
                "status": "invalid",
                "reason": "not positive semidefinite",
                "witness": witness.iter().cloned().map(JsonScalar).collect::<Vec<_>>(),
                "value": JsonScalar(value.clone()),
            });
            emit(&a.out, &to_json(&body))?;
            return Err(CliError::input(format!(
                "not doubly nonnegative: v^T A v = {value} < 0"
            )));
        }
    }
    let cfg = SearchConfig {
        max_column_entry: a.max_entry,
        node_limit: a.node_limit,
        kernel: exact_kernel(&m, a.kernel),
        psd_pruning: !a.no_psd_pruning,
    };
    let out = parallel_search(&m, &cfg, a.jobs.max(1)).map_err(CliError::input_core)?;
    let status = out.status.as_str();
    let summary = json!({ "status": status, "nodes": out.nodes_visited, "dim": m.dim() });
    match &out.certificate {
        Some(f) => {
            let report = verify(&m, f, &cfg.kernel).map_err(CliError::input_core)?;
            if !report.passed() {
                return Err(CliError::Construction(
                    "search certificate failed verification".into(),
                ));
            }
            let mut file = FactorizationFile::from_factorization(f);
            file.status = Some(status.into());
            file.nodes = Some(out.nodes_visited);
            emit(&a.out, &to_json(&file))?;
        }
        None => emit(
            &a.out,
            &to_json(&SearchMiss {
                dim: m.dim(),
                status: status.into(),
                nodes: out.nodes_visited,
            }),
        )?,
    }
    if out.status == SearchStatus::Limit {
        return Err(CliError::Limit(format!(
            "node limit {} reached",
            a.node_limit
        )));
    }
    Ok(summary)
}

/// `2 / zeta(3)`.
const JORDAN_RATIO_LIMIT: f64 = 2.0 / 1.202_056_903_159_594_2;

#[derive(Serialize)]
struct BoundsRow {
    n: usize,
    f: u128,
    sqrt_7_5_f: f64,
    g_j: u128,
    g_d: u128,
    g_j_over_f: f64,
}

fn bounds(a: &BoundsArgs) -> CmdResult {
    if a.n_max < 2 {
        return Err(CliError::input(format!(
            "--n-max must be at least 2, got {}",
            a.n_max
        )));
    }
    let sqrt_7_5 = rational_to_f64(&rational(7, 5)).sqrt();
    let mut g_j: u128 = 0;
    let mut rows = Vec::with_capacity(a.n_max - 1);
    for n in 2..=a.n_max {
        g_j += jordan_totient2(n as u64 - 1) as u128;
        let nn = n as u128;
        let f = f_min_u128(n as u64);
        rows.push(BoundsRow {
            n,
            f,
            sqrt_7_5_f: sqrt_7_5 * f as f64,
            g_j,
            g_d: nn * (nn - 1) * (2 * nn - 1) / 6,
            g_j_over_f: g_j as f64 / f as f64,
        });
    }
    let text = match a.format {
        TableFormat::Csv => {
            let mut s = String::from("n,f,sqrt_7_5_f,g_J,g_D,g_J_over_f\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{:.6},{},{},{:.6}\n",
                    r.n, r.f, r.sqrt_7_5_f, r.g_j, r.g_d, r.g_j_over_f
                ));
            }
            s.push_str(&format!(
                "# g_J/f -> 2/zeta(3) = {JORDAN_RATIO_LIMIT:.5} as n -> infinity\n"
            ));
            s
        }
        TableFormat::Json => to_json(&json!({
            "rows": rows,
            "g_j_over_f_limit": { "expression": "2/zeta(3)", "value": JORDAN_RATIO_LIMIT },
        })),
    };
    emit(&a.out, &text)
}
