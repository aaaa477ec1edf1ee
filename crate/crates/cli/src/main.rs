use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use endomat::action::{enumerate_actions, GroupAction, SdProduct};
use endomat::catalog::{self, CatalogEntry};
use endomat::det::{self, Method};
use endomat::factor::factor_abcd;
use endomat::io::{self, MatrixJson};
use endomat::matrix::{enumerate_m, enumerate_m_exhaustive, EndoMatrix, EXHAUSTIVE_FACTOR_LIMIT};
use endomat::oracle::{enumerate_end_direct, invert_endo_direct};
use endomat::verify::{parse_selection, run_verification, VerifyOptions, VerifyReport};
use endomat::DEFAULT_BOUND;

#[derive(Parser)]
#[command(
    name = "endomat",
    version,
    about = "Endomorphism matrices of finite semidirect products"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Largest |G| accepted.
    #[arg(long, global = true, default_value_t = DEFAULT_BOUND)]
    bound: usize,
    /// Worker threads for multi-instance runs (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CatalogChoice {
    Default,
    Extended,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InvertMethod {
    Auto,
    DetK,
    DetH,
    Combined,
    Direct,
}

#[derive(Args, Clone)]
struct Source {
    /// Catalog instance such as `dihedral:4` or `sdp:3,4,2`.
    #[arg(long, conflicts_with_all = ["group_h", "group_k", "action"])]
    instance: Option<String>,
    #[arg(long)]
    group_h: Option<PathBuf>,
    #[arg(long)]
    group_k: Option<PathBuf>,
    /// Action file; without it `--group-h` and `--group-k` give the direct product.
    #[arg(long)]
    action: Option<PathBuf>,
}

impl Source {
    fn given(&self) -> bool {
        self.instance.is_some() || self.group_h.is_some() || self.group_k.is_some() || self.action.is_some()
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// List all endomorphism matrices.
    Enumerate {
        #[command(flatten)]
        source: Source,
        /// Also scan every quadruple of maps and compare.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Both determinants of a matrix and its inverse.
    Det {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Inverse of an automorphism matrix.
    Invert {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = InvertMethod::Auto)]
        method: InvertMethod,
    },
    /// Factor an automorphism matrix as a·b·c·d.
    Factor {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Run the verification checks on one instance or a catalog.
    Verify {
        #[command(flatten)]
        source: Source,
        /// `all` or a comma-separated list of check names.
        #[arg(long, default_value = "all")]
        theorems: String,
        #[arg(long, value_enum, default_value_t = CatalogChoice::Default)]
        catalog: CatalogChoice,
        /// Include wall-clock time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Oracle counts of End(G) and Aut(G) next to the matrix counts.
    Census {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = CatalogChoice::Default)]
        catalog: CatalogChoice,
    },
}

/// Exit status 1: a check or theorem failed.
const CHECK_FAILED: u8 = 1;
/// Exit status 2: invalid input.
const INVALID: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(INVALID)
        }
    }
}

fn load(source: &Source) -> Result<Arc<SdProduct>> {
    if let Some(name) = &source.instance {
        return Ok(Arc::new(catalog::instance(name)?));
    }
    let read = |p: &Option<PathBuf>| -> Result<Option<endomat::FiniteGroup>> {
        p.as_deref().map(io::read_group).transpose().map_err(Into::into)
    };
    let (h, k) = (read(&source.group_h)?, read(&source.group_k)?);
    if let Some(action) = &source.action {
        return Ok(Arc::new(io::read_action(action, h, k)?));
    }
    match (h, k) {
        (Some(h), Some(k)) => {
            let name = format!("{} x {}", h.name(), k.name());
            Ok(Arc::new(SdProduct::named(
                name,
                GroupAction::trivial(Arc::new(h), Arc::new(k)),
            )?))
        }
        _ => bail!("give --instance, or --group-h and --group-k (optionally with --action)"),
    }
}

fn catalog_entries(choice: CatalogChoice) -> Vec<CatalogEntry> {
    match choice {
        CatalogChoice::Default => catalog::default_catalog(),
        CatalogChoice::Extended => catalog::extended_catalog(),
        CatalogChoice::All => catalog::default_catalog()
            .into_iter()
            .chain(catalog::extended_catalog())
            .collect(),
    }
}

fn contexts(source: &Source, choice: CatalogChoice) -> Result<Vec<Arc<SdProduct>>> {
    if source.given() {
        Ok(vec![load(source)?])
    } else {
        Ok(catalog_entries(choice).iter().map(|e| Arc::new(e.build())).collect())
    }
}

fn check_bound(ctx: &SdProduct, bound: usize) -> Result<()> {
    let order = ctx.group().order();
    if order > bound {
        bail!("|G| = {order} exceeds the bound {bound}");
    }
    Ok(())
}

fn read_valid_matrix(path: &Path, ctx: &Arc<SdProduct>) -> Result<EndoMatrix> {
    let m = io::read_matrix(path, ctx)?;
    m.check_conditions()
        .into_result()
        .with_context(|| format!("{} is not an endomorphism matrix", path.display()))?;
    Ok(m)
}

fn emit(format: Format, value: &Value, text: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("serializable")),
        Format::Text => print!("{}", text()),
    }
}

fn show(m: &EndoMatrix) -> String {
    format!(
        "alpha {:?}  beta {:?}  gamma {:?}  delta {:?}",
        m.alpha().image(),
        m.beta().image(),
        m.gamma().image(),
        m.delta().image()
    )
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        b = b.num_threads(n);
    }
    Ok(b.build()?)
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.cmd {
        Cmd::Enumerate { source, exhaustive } => enumerate(cli, source, *exhaustive),
        Cmd::Det { source, matrix } => det_cmd(cli, source, matrix),
        Cmd::Invert { source, matrix, method } => invert(cli, source, matrix, *method),
        Cmd::Factor { source, matrix } => factor(cli, source, matrix),
        Cmd::Verify {
            source,
            theorems,
            catalog,
            timing,
        } => verify(cli, source, theorems, *catalog, *timing),
        Cmd::Census { source, catalog } => census(cli, source, *catalog),
    }
}

#[derive(Serialize)]
struct Listed {
    #[serde(flatten)]
    matrix: MatrixJson,
    automorphism: bool,
}

fn enumerate(cli: &Cli, source: &Source, exhaustive: bool) -> Result<u8> {
    let ctx = load(source)?;
    let ms = enumerate_m(&ctx, cli.bound)?;
    let mut agrees = None;
    if exhaustive {
        let (h, k) = (ctx.h().order(), ctx.k().order());
        if h.max(k) > EXHAUSTIVE_FACTOR_LIMIT {
            bail!("--exhaustive needs |H|, |K| <= {EXHAUSTIVE_FACTOR_LIMIT}");
        }
        agrees = Some(enumerate_m_exhaustive(&ctx)? == ms);
    }
    let listed: Vec<Listed> = ms
        .iter()
        .map(|m| {
            Ok(Listed {
                matrix: MatrixJson::of(m),
                automorphism: m.is_automorphism()?,
            })
        })
        .collect::<Result<_>>()?;
    let autos = listed.iter().filter(|l| l.automorphism).count();
    let mut value = json!({
        "instance": ctx.name(),
        "count": ms.len(),
        "automorphisms": autos,
        "matrices": listed,
    });
    if let Some(a) = agrees {
        value["exhaustive_agrees"] = json!(a);
    }
    emit(cli.format, &value, || {
        let mut s = format!("{}: {} endomorphisms, {} automorphisms\n", ctx.name(), ms.len(), autos);
        for (m, l) in ms.iter().zip(&listed) {
            s += &format!("  {}{}\n", show(m), if l.automorphism { "  (aut)" } else { "" });
        }
        if let Some(a) = agrees {
            s += &format!("exhaustive scan agrees: {a}\n");
        }
        s
    });
    Ok(if agrees == Some(false) { CHECK_FAILED } else { 0 })
}

fn auto_inverse(m: &EndoMatrix) -> Result<Option<(EndoMatrix, Method)>> {
    let inv = det::is_invertible(m);
    if !inv.invertible {
        return Ok(None);
    }
    let out = match inv.method {
        Method::DetK => det::invert_via_det_k(m)?,
        Method::DetH => det::invert_via_det_h(m)?,
        Method::Direct => direct_inverse(m)?,
    };
    Ok(Some((out, inv.method)))
}

fn direct_inverse(m: &EndoMatrix) -> Result<EndoMatrix> {
    let e = invert_endo_direct(&m.to_endo()?)?;
    Ok(EndoMatrix::from_endo(m.ctx(), &e)?)
}

fn det_cmd(cli: &Cli, source: &Source, path: &Path) -> Result<u8> {
    let ctx = load(source)?;
    check_bound(&ctx, cli.bound)?;
    let m = read_valid_matrix(path, &ctx)?;
    let dh = det::det_h(&m).ok();
    let dk = det::det_k(&m).ok();
    let inverse = auto_inverse(&m)?;
    let decided = det::is_invertible(&m);
    let value = json!({
        "det_H": dh.as_ref().map(|d| d.value.image().to_vec()),
        "det_K": dk.as_ref().map(|d| d.value.image().to_vec()),
        "invertible": decided.invertible,
        "method": decided.method.to_string(),
        "is_hom_H": dh.as_ref().is_some_and(|d| d.is_hom),
        "is_hom_K": dk.as_ref().is_some_and(|d| d.is_hom),
        "inverse": inverse.as_ref().map(|(i, _)| MatrixJson::of(i)),
    });
    emit(cli.format, &value, || {
        let line = |d: &Option<det::DetResult>| match d {
            Some(d) => format!("{:?} (bijective {}, hom {})", d.value.image(), d.invertible, d.is_hom),
            None => "undefined".into(),
        };
        let mut s = format!("det_H {}\ndet_K {}\n", line(&dh), line(&dk));
        s += &format!("invertible {} (decided by {})\n", decided.invertible, decided.method);
        if let Some((i, _)) = &inverse {
            s += &format!("inverse {}\n", show(i));
        }
        s
    });
    Ok(0)
}

fn invert(cli: &Cli, source: &Source, path: &Path, method: InvertMethod) -> Result<u8> {
    let ctx = load(source)?;
    check_bound(&ctx, cli.bound)?;
    let m = read_valid_matrix(path, &ctx)?;
    let (inv, used) = match method {
        InvertMethod::Auto => {
            let (i, how) = auto_inverse(&m)?.ok_or_else(|| anyhow!("matrix is not invertible"))?;
            (i, how.to_string())
        }
        InvertMethod::DetK => (det::invert_via_det_k(&m)?, "detK".into()),
        InvertMethod::DetH => (det::invert_via_det_h(&m)?, "detH".into()),
        InvertMethod::Combined => (det::invert_combined(&m)?, "combined".into()),
        InvertMethod::Direct => {
            if !m.is_automorphism()? {
                bail!("matrix is not invertible");
            }
            (direct_inverse(&m)?, "direct".into())
        }
    };
    let ok = m.mul(&inv)?.is_identity() && inv.mul(&m)?.is_identity();
    let mut value = serde_json::to_value(MatrixJson::of(&inv))?;
    value["method"] = json!(used);
    value["verified"] = json!(ok);
    emit(cli.format, &value, || {
        format!("{}\nmethod {used}, verified {ok}\n", show(&inv))
    });
    Ok(if ok { 0 } else { CHECK_FAILED })
}

fn factor(cli: &Cli, source: &Source, path: &Path) -> Result<u8> {
    let ctx = load(source)?;
    check_bound(&ctx, cli.bound)?;
    let m = read_valid_matrix(path, &ctx)?;
    let f = factor_abcd(&m)?;
    let verified = f.check(&m).verified();
    let value = json!({
        "a": MatrixJson::of(&f.a),
        "b": MatrixJson::of(&f.b),
        "c": MatrixJson::of(&f.c),
        "d": MatrixJson::of(&f.d),
        "verified": verified,
    });
    emit(cli.format, &value, || {
        format!(
            "a {}\nb {}\nc {}\nd {}\nverified {verified}\n",
            show(&f.a),
            show(&f.b),
            show(&f.c),
            show(&f.d)
        )
    });
    Ok(if verified { 0 } else { CHECK_FAILED })
}

fn verify(cli: &Cli, source: &Source, theorems: &str, choice: CatalogChoice, timing: bool) -> Result<u8> {
    let checks = parse_selection(theorems)?;
    let ctxs = contexts(source, choice)?;
    let opts = VerifyOptions {
        bound: cli.bound,
        checks,
        timing,
    };
    let reports: Vec<VerifyReport> = pool(cli.jobs)?.install(|| {
        ctxs.par_iter()
            .map(|c| run_verification(c, &opts))
            .collect::<Result<_, _>>()
    })?;
    let all_pass = reports.iter().all(VerifyReport::all_pass);
    let value = json!({ "all_pass": all_pass, "reports": reports });
    emit(cli.format, &value, || {
        let mut s: String = reports.iter().map(VerifyReport::to_text).collect();
        s += &format!("{}\n", if all_pass { "all checks pass" } else { "FAILURES" });
        s
    });
    Ok(if all_pass { 0 } else { CHECK_FAILED })
}

#[derive(Serialize)]
struct CensusRow {
    instance: String,
    order: usize,
    end: usize,
    aut: usize,
    matrices: usize,
    automorphism_matrices: usize,
    non_bijective_diagonal: usize,
    agrees: bool,
}

fn census_row(ctx: &Arc<SdProduct>, bound: usize) -> Result<CensusRow> {
    let oracle = enumerate_end_direct(ctx.group(), bound)?;
    let ms = enumerate_m(ctx, bound)?;
    let mut autos = 0;
    let mut odd = 0;
    for m in &ms {
        if m.is_automorphism()? {
            autos += 1;
            if !m.alpha().is_bijective() || !m.delta().is_bijective() {
                odd += 1;
            }
        }
    }
    Ok(CensusRow {
        instance: ctx.name().to_string(),
        order: ctx.group().order(),
        end: oracle.end_count(),
        aut: oracle.aut_count(),
        matrices: ms.len(),
        automorphism_matrices: autos,
        non_bijective_diagonal: odd,
        agrees: oracle.end_count() == ms.len() && oracle.aut_count() == autos,
    })
}

fn census(cli: &Cli, source: &Source, choice: CatalogChoice) -> Result<u8> {
    let ctxs = match (&source.group_h, &source.group_k, &source.action) {
        // both groups but no action: every action of K on H
        (Some(h), Some(k), None) if source.instance.is_none() => {
            let h = Arc::new(io::read_group(h)?);
            let k = Arc::new(io::read_group(k)?);
            enumerate_actions(&h, &k)
                .into_iter()
                .enumerate()
                .map(|(i, a)| {
                    Ok(Arc::new(SdProduct::named(
                        format!("{} x| {} #{i}", h.name(), k.name()),
                        a,
                    )?))
                })
                .collect::<Result<Vec<_>>>()?
        }
        _ => contexts(source, choice)?,
    };
    let rows: Vec<CensusRow> =
        pool(cli.jobs)?.install(|| ctxs.par_iter().map(|c| census_row(c, cli.bound)).collect::<Result<_>>())?;
    let agrees = rows.iter().all(|r| r.agrees);
    let value = json!({ "agrees": agrees, "instances": rows });
    emit(cli.format, &value, || {
        let mut s = String::from("instance              |G|  |End|  |Aut|  |M|  aut-matrices  non-bijective-diag\n");
        for r in &rows {
            s += &format!(
                "{:<20} {:>4} {:>6} {:>6} {:>4} {:>13} {:>19}\n",
                r.instance, r.order, r.end, r.aut, r.matrices, r.automorphism_matrices, r.non_bijective_diagonal
            );
        }
        s
    });
    Ok(if agrees { 0 } else { CHECK_FAILED })
}
