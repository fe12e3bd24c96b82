use std::fs;
use std::path::Path;

use pk_core::atto::{atto_kernel, build_symbol, compression_kernel, model_space_coordinates, AttoSpec};
use pk_core::kernels::{
    decompose, kernel_plus, kernel_plus_via, minimal_kernel_containing, KernelBasis, RouteRegistry, Side,
};
use pk_core::oracle::{max_principal_angle, verify_basis, OracleConfig};
use pk_core::report::{atto_report, decompose_report, kernel_report, minimal_report, to_canonical_string};
use pk_core::symbols::{BlaschkeProduct, BoundarySymbol, PairExpr, SymbolExpr, SymbolPair};
use pk_core::Error;
use serde_json::{json, Value};

use crate::{Cli, Command};

pub struct Outcome {
    pub report: Value,
    /// Set when the oracle disagrees with the result.
    pub mismatch: Option<String>,
}

#[derive(Debug)]
pub struct CliError {
    error: Error,
    code: u8,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        self.code
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.error.fmt(f)
    }
}

impl From<Error> for CliError {
    fn from(error: Error) -> Self {
        let code = match &error {
            Error::Schema(_) | Error::InvalidConfig(_) | Error::UnknownRoute(_) => 1,
            Error::RouteMismatch(_) | Error::NotInKernel(_) => 3,
            _ => 2,
        };
        Self { error, code }
    }
}

type CmdResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CmdResult<String> {
    fs::read_to_string(path).map_err(|e| Error::Schema(format!("{}: {e}", path.display())).into())
}

fn with_file<T>(path: &Path, r: pk_core::Result<T>) -> CmdResult<T> {
    r.map_err(|e| match e {
        Error::Schema(msg) => Error::Schema(format!("{}: {msg}", path.display())).into(),
        other => other.into(),
    })
}

fn load_pair(path: &Path) -> CmdResult<SymbolPair> {
    let text = read(path)?;
    let expr = with_file(path, PairExpr::parse(&text))?;
    Ok(expr.to_pair()?)
}

fn load_symbol(path: &Path) -> CmdResult<SymbolExpr> {
    let text = read(path)?;
    with_file(path, SymbolExpr::parse(&text))
}

pub fn emit(cli: &Cli, report: &Value) -> CmdResult<()> {
    let text = to_canonical_string(report)?;
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Schema(format!("{}: {e}", path.display())).into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn engine_kernel(cli: &Cli, pair: &SymbolPair) -> CmdResult<KernelBasis> {
    Ok(match &cli.route {
        None => kernel_plus(pair)?,
        Some(route) => kernel_plus_via(pair, &RouteRegistry::default(), route)?,
    })
}

fn mismatch(v: &pk_core::oracle::Verification, dim: usize) -> Option<String> {
    let show = |x: Option<String>| x.unwrap_or_else(|| "n/a".into());
    (!v.agrees).then(|| {
        format!(
            "engine dim {dim}, oracle dim {}, max angle {}, residual {:e}",
            show(v.oracle_dim.map(|d| d.to_string())),
            show(v.max_angle.map(|a| format!("{a:e}"))),
            v.residual
        )
    })
}

pub fn run(cli: &Cli) -> CmdResult<Outcome> {
    match &cli.command {
        Command::Kernel { pair, oracle } => {
            let pair = load_pair(pair)?;
            let k = engine_kernel(cli, &pair)?;
            let v = verify_basis(&pair, &k, &oracle.config(), oracle.tol)?;
            let mut report = kernel_report(&k, Some(&v));
            report["route"] = json!(cli.route.as_deref().unwrap_or("normalize"));
            Ok(Outcome { mismatch: mismatch(&v, k.span_dim), report })
        }
        Command::Verify { pair, claim, oracle } => {
            let pair = load_pair(pair)?;
            let (source, k) = match claim {
                None => ("engine", engine_kernel(cli, &pair)?),
                Some(path) => ("claim", load_claim(path)?),
            };
            let v = verify_basis(&pair, &k, &oracle.config(), oracle.tol)?;
            let report = json!({
                "agrees": v.agrees,
                "config": oracle.config(),
                "dim": k.span_dim,
                "source": source,
                "tol": oracle.tol,
                "verified": v,
            });
            Ok(Outcome { mismatch: mismatch(&v, k.span_dim), report })
        }
        Command::Minimal { a, b, oracle } => {
            let a = load_symbol(a)?.to_symbol()?;
            let b_expr = load_symbol(b)?;
            let b = b_expr.to_rational().map_err(|_| Error::NotInHardySpace("b must be rational".into()))?;
            let m = minimal_kernel_containing(&b, &a)?;
            let mut mismatch_msg = None;
            let verified = match &m.basis {
                Some(k) => {
                    let pair = SymbolPair::new(m.symbol.clone(), BoundarySymbol::one())?;
                    let v = verify_basis(&pair, k, &oracle.config(), oracle.tol)?;
                    mismatch_msg = mismatch(&v, k.span_dim);
                    Some(v)
                }
                None => None,
            };
            Ok(Outcome { report: minimal_report(&m, verified.as_ref()), mismatch: mismatch_msg })
        }
        Command::Atto { spec, alpha_check, second_alpha, oracle } => {
            let text = read(spec)?;
            let spec = with_file(spec, AttoSpec::parse(&text))?;
            run_atto(&spec, *alpha_check, second_alpha.as_deref(), &oracle.config(), oracle.tol)
        }
        Command::Decompose { pair, k } => {
            let pair = load_pair(pair)?;
            let d = decompose(&pair, *k)?;
            Ok(Outcome { report: decompose_report(&d), mismatch: None })
        }
    }
}

/// A kernel report, or any object with `"dim"` and a rational `"factor"`.
fn load_claim(path: &Path) -> CmdResult<KernelBasis> {
    let text = read(path)?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| Error::Schema(format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column())))?;
    let dim =
        v["dim"].as_u64().ok_or_else(|| Error::Schema(format!("{}: missing integer field \"dim\"", path.display())))?;
    let factor: SymbolExpr = serde_json::from_value(v["factor"].clone())
        .map_err(|e| Error::Schema(format!("{}: field \"factor\": {e}", path.display())))?;
    let factor = with_file(path, factor.to_rational())?;
    Ok(KernelBasis { factor, span_dim: dim as usize, side: Side::Plus, trace: vec![] })
}

fn run_atto(
    spec: &AttoSpec,
    alpha_check: bool,
    second_alpha: Option<&Path>,
    cfg: &OracleConfig,
    tol: f64,
) -> CmdResult<Outcome> {
    let parts = build_symbol(spec)?;
    let k = atto_kernel(spec)?;
    let analytic = model_space_coordinates(&k, &spec.theta, cfg.grid_n)?;
    let mut problems = Vec::new();

    let mut compare = |alpha: &BlaschkeProduct| -> CmdResult<(Value, pk_core::atto::CompressionKernel)> {
        let nk = compression_kernel(&spec.with_alpha(alpha.clone()), cfg)?;
        let angle = max_principal_angle(&analytic, &nk.coords)?;
        let residual = nk.residual(&analytic);
        if nk.dim != k.span_dim || angle > tol || residual > tol {
            problems.push(format!("alpha of degree {}: oracle dim {}, angle {angle:e}", alpha.degree(), nk.dim));
        }
        let v = json!({
            "alpha_degree": alpha.degree(),
            "max_angle": angle,
            "oracle_dim": nk.dim,
            "residual": residual,
        });
        Ok((v, nk))
    };
    let (verified, first) = compare(&spec.alpha)?;
    let check = if alpha_check {
        let alpha2 = match second_alpha {
            Some(path) => with_file(path, load_symbol(path)?.to_blaschke())?,
            None => BlaschkeProduct::z_power(spec.alpha.degree() + 3),
        };
        let (v2, second) = compare(&alpha2)?;
        let between = max_principal_angle(&first.coords, &second.coords)?;
        if between > tol {
            problems.push(format!("compression kernels differ by angle {between:e}"));
        }
        Some(json!({"between": between, "second": v2}))
    } else {
        None
    };
    let mut report = atto_report(&k, &parts, check);
    report["verified"] = verified;
    Ok(Outcome { report, mismatch: (!problems.is_empty()).then(|| problems.join("; ")) })
}
