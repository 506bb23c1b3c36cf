//! Command-line front end behind the `mtv` binary.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;

use crate::arith::{BigReal, PrecisionContext};
use crate::closed_form as cf;
use crate::error::{Error, Result};
use crate::hypergeom::{check_4f3_identity, check_generating_series, GsKind};
use crate::index::{bl, bl_inv, Index, SignedIndex};
use crate::nested::{half, Evaluator, MtvRoute};
use crate::verify::{verify_suite_with, SuiteOptions, VerificationReport, Verifier, MAX_WEIGHT_CAP};

pub const PREC_ENV: &str = "MTV_PREC";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "mtv", version, about = "Block decomposition, multiple zeta/t-values and identity checks")]
pub struct CliConfig {
    /// Target decimal digits.
    #[arg(long, global = true, env = PREC_ENV, default_value_t = 30)]
    pub prec: u32,
    /// Tolerance override for verification reports.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Block decomposition of an index.
    Bl {
        index: String,
        /// Apply the inverse map instead.
        #[arg(long)]
        inv: bool,
    },
    /// Evaluate one value.
    Eval {
        #[arg(value_enum)]
        family: Family,
        index: String,
        /// Interpolation parameter `p/q` for `interp`.
        #[arg(long)]
        r: Option<String>,
        /// `2^{depth} ζ^{1/2}` for `zhalf`, `2^{weight} t` for `t`.
        #[arg(long)]
        rescaled: bool,
    },
    /// Run one identity check, or the whole suite.
    Verify {
        #[arg(value_enum)]
        identity: Identity,
        index: Option<String>,
        /// Argument `p/q` of the hypergeometric checks.
        #[arg(long)]
        x: Option<String>,
        /// Weight cap for `all` (at most 16).
        #[arg(long, default_value_t = 9)]
        weight: u32,
        /// Target digits for suite indices of weight 14 and above.
        #[arg(long, default_value_t = 15)]
        high_weight_prec: u32,
    },
    /// Print a table of worked values.
    Table {
        #[arg(value_enum)]
        name: TableName,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Mzv,
    Amzv,
    T,
    Interp,
    Zstar,
    Zhalf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Identity {
    Convolution,
    Descent,
    Matrix,
    Antipode,
    TwoOne,
    T12,
    #[value(name = "4f3")]
    FourF3,
    Gs,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableName {
    Examples,
    Prop21,
    Prop22,
    Prop23,
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Divergent(_) => 3,
        Error::InvalidIndex(_)
        | Error::NotAdmissible(_)
        | Error::MalformedWord(_)
        | Error::Parse(_)
        | Error::Parameter(_)
        | Error::Context(_) => 2,
        Error::Domain(_) | Error::MaxTermsExceeded(_) => 1,
    }
}

/// Parses `args` (program name first), writes results to `out` and
/// diagnostics to `err`, returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    match execute(&cfg, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Domain(format!("write failed: {e}"))
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let q = if t.contains('/') {
        t.parse::<BigRational>().ok()
    } else {
        t.parse::<num_bigint::BigInt>().ok().map(BigRational::from_integer)
    };
    q.ok_or_else(|| Error::Parse(format!("expected a rational p/q, got {s:?}")))
}

fn parse_index(s: &str) -> Result<Index> {
    let sidx: SignedIndex = s.parse()?;
    if !sidx.is_unsigned() {
        return Err(Error::InvalidIndex(format!("bars are not allowed here: {s}")));
    }
    Ok(sidx.unsigned())
}

fn execute(cfg: &CliConfig, out: &mut dyn Write) -> Result<i32> {
    let ctx = PrecisionContext::digits(cfg.prec)?;
    match &cfg.command {
        Command::Bl { index, inv } => {
            let idx = parse_index(index)?;
            let image = if *inv {
                bl_inv(&idx)?
            } else {
                idx.require_admissible()?;
                bl(&idx)?
            };
            match cfg.format {
                Format::Text => writeln!(out, "{image}"),
                Format::Json => writeln!(
                    out,
                    "{}",
                    serde_json::json!({"index": idx.to_string(), "inverse": inv, "image": image.to_string()})
                ),
                Format::Csv => writeln!(out, "index,image\n\"{idx}\",\"{image}\""),
            }
            .map_err(io)?;
            Ok(0)
        }
        Command::Eval {
            family,
            index,
            r,
            rescaled,
        } => {
            let value = eval(*family, index, r.as_deref(), *rescaled, &ctx)?;
            let row = EvalRow {
                family: format!("{family:?}").to_lowercase(),
                index: index.clone(),
                value: value.to_decimal(cfg.prec as usize),
                error_bound: value.error(),
            };
            match cfg.format {
                Format::Text => writeln!(out, "{} ± {:.1e}", row.value, row.error_bound).map_err(io)?,
                Format::Json => {
                    writeln!(out, "{}", serde_json::to_string(&row).expect("plain struct")).map_err(io)?
                }
                Format::Csv => write_csv(out, std::iter::once(&row))?,
            }
            Ok(0)
        }
        Command::Verify {
            identity,
            index,
            x,
            weight,
            high_weight_prec,
        } => {
            let suite = (*weight, *high_weight_prec);
            let mut reports = verify(cfg, *identity, index.as_deref(), x.as_deref(), suite, &ctx)?;
            if let Some(t) = cfg.tol {
                reports = reports.into_iter().map(|r| r.with_tolerance(t)).collect();
            }
            emit_reports(cfg.format, &reports, out)?;
            Ok(if reports.iter().all(|r| r.pass) { 0 } else { 1 })
        }
        Command::Table { name } => {
            let t = table(*name, &ctx)?;
            t.emit(cfg.format, out)?;
            Ok(0)
        }
    }
}

#[derive(Serialize)]
struct EvalRow {
    family: String,
    index: String,
    value: String,
    error_bound: f64,
}

fn eval(family: Family, index: &str, r: Option<&str>, rescaled: bool, ctx: &PrecisionContext) -> Result<BigReal> {
    let ev = Evaluator::new(*ctx);
    let sidx: SignedIndex = index.parse()?;
    let unsigned = || -> Result<Index> {
        if sidx.is_unsigned() {
            Ok(sidx.unsigned())
        } else {
            Err(Error::InvalidIndex(format!("bars are not allowed for this family: {index}")))
        }
    };
    if sidx.is_empty() {
        return Err(Error::InvalidIndex("empty index".into()));
    }
    match family {
        Family::Mzv | Family::Amzv => ev.amzv(&sidx),
        Family::T => {
            let idx = unsigned()?;
            if rescaled {
                ev.t_tilde(&idx)
            } else {
                ev.mtv(&idx, MtvRoute::Direct)
            }
        }
        Family::Interp => {
            let r = parse_rational(r.ok_or_else(|| Error::Parameter("interp needs --r p/q".into()))?)?;
            ev.interpolated_signed(&sidx, &r)
        }
        Family::Zstar => ev.zstar(&unsigned()?),
        Family::Zhalf => {
            if rescaled {
                ev.zhalf_tilde_signed(&sidx)
            } else {
                ev.interpolated_signed(&sidx, &half())
            }
        }
    }
}

fn verify(
    cfg: &CliConfig,
    identity: Identity,
    index: Option<&str>,
    x: Option<&str>,
    (weight, high_weight_prec): (u32, u32),
    ctx: &PrecisionContext,
) -> Result<Vec<VerificationReport>> {
    let need_index = || -> Result<Index> {
        parse_index(index.ok_or_else(|| Error::Parse("this identity needs an index argument".into()))?)
    };
    let xs = |defaults: &[(i64, i64)]| -> Result<Vec<BigReal>> {
        match x {
            Some(s) => Ok(vec![BigReal::from_rational(&parse_rational(s)?, ctx.bits())]),
            None => Ok(defaults
                .iter()
                .map(|&(n, d)| BigReal::from_ratio(n, d, ctx.bits()))
                .collect()),
        }
    };
    let v = || Verifier::new(*ctx);
    Ok(match identity {
        Identity::Convolution => vec![v().convolution(&need_index()?)],
        Identity::Descent => vec![v().descent(&need_index()?)],
        Identity::Matrix => vec![v().matrix(&need_index()?)],
        Identity::Antipode => vec![v().antipode(&need_index()?)],
        Identity::TwoOne => vec![v().two_one(&need_index()?)],
        Identity::T12 => vec![v().t12()],
        Identity::FourF3 => xs(&[(1, 10), (1, 5), (3, 10)])?
            .iter()
            .map(|x| check_4f3_identity(x, ctx))
            .collect(),
        Identity::Gs => {
            let mut out = Vec::new();
            for x in xs(&[(1, 10), (1, 5)])? {
                for kind in GsKind::ALL {
                    out.push(check_generating_series(kind, &x, ctx));
                }
            }
            out
        }
        Identity::All => {
            if weight > MAX_WEIGHT_CAP {
                return Err(Error::Parameter(format!("--weight must be at most {MAX_WEIGHT_CAP}")));
            }
            let mut opts = SuiteOptions::new(weight, *ctx);
            opts.jobs = cfg.jobs;
            opts.high_weight_digits = high_weight_prec;
            verify_suite_with(&opts)
        }
    })
}

fn write_csv<'a, T: Serialize + 'a>(out: &mut dyn Write, rows: impl IntoIterator<Item = &'a T>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Domain(format!("csv: {e}")))?;
    }
    w.flush().map_err(io)
}

#[derive(Serialize)]
struct CsvReport<'a> {
    identity_id: &'a str,
    index: &'a str,
    residual: f64,
    pass: bool,
}

fn emit_reports(format: Format, reports: &[VerificationReport], out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Text => {
            for r in reports {
                writeln!(out, "{r}").map_err(io)?;
            }
            let pass = reports.iter().filter(|r| r.pass).count();
            writeln!(out, "{pass}/{} passed", reports.len()).map_err(io)?;
        }
        Format::Json => {
            for r in reports {
                writeln!(out, "{}", serde_json::to_string(r).expect("plain struct")).map_err(io)?;
            }
        }
        Format::Csv => {
            let rows: Vec<_> = reports
                .iter()
                .map(|r| CsvReport {
                    identity_id: &r.identity_id,
                    index: &r.inputs,
                    residual: r.residual,
                    pass: r.pass,
                })
                .collect();
            write_csv(out, &rows)?;
        }
    }
    Ok(())
}

/// Rows of strings under named columns.
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn emit(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Text => {
                let widths: Vec<usize> = (0..self.headers.len())
                    .map(|c| {
                        self.rows
                            .iter()
                            .map(|r| r[c].chars().count())
                            .chain(std::iter::once(self.headers[c].len()))
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                let line = |cells: Vec<&str>| {
                    cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                        .collect::<Vec<_>>()
                        .join("  ")
                        .trim_end()
                        .to_string()
                };
                writeln!(out, "{}", line(self.headers.clone())).map_err(io)?;
                for r in &self.rows {
                    writeln!(out, "{}", line(r.iter().map(String::as_str).collect())).map_err(io)?;
                }
            }
            Format::Json => {
                for r in &self.rows {
                    let obj: serde_json::Map<String, serde_json::Value> = self
                        .headers
                        .iter()
                        .zip(r)
                        .map(|(h, v)| (h.to_string(), serde_json::Value::String(v.clone())))
                        .collect();
                    writeln!(out, "{}", serde_json::Value::Object(obj)).map_err(io)?;
                }
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                let err = |e: csv::Error| Error::Domain(format!("csv: {e}"));
                w.write_record(&self.headers).map_err(err)?;
                for r in &self.rows {
                    w.write_record(r).map_err(err)?;
                }
                w.flush().map_err(io)?;
            }
        }
        Ok(())
    }
}

fn show(x: &BigReal) -> String {
    x.to_decimal(20)
}

fn agree(a: &BigReal, b: &BigReal, ctx: &PrecisionContext) -> String {
    let ok = a.distance(b) <= ctx.default_tolerance();
    if ok { "match" } else { "MISMATCH" }.to_string()
}

fn label(x: &BigReal, k: u32) -> Result<String> {
    Ok(cf::zeta_multiple_label(x, k)?.unwrap_or_else(|| "-".into()))
}

pub fn table(name: TableName, ctx: &PrecisionContext) -> Result<Table> {
    let ev = Evaluator::new(*ctx);
    let p = ctx.bits();
    match name {
        TableName::Examples => {
            let mut rows = Vec::new();
            let k = Index::new(vec![2, 3, 4, 5])?;
            let b = bl(&k)?;
            rows.push(vec![
                "bl(2,3,4,5)".into(),
                b.to_string(),
                "3,3,1,3,1,1,2".into(),
                if b.to_string() == "3,3,1,3,1,1,2" { "match" } else { "MISMATCH" }.into(),
            ]);
            let conv = Verifier::new(*ctx).convolution(&k);
            let lhs = -ev.zhalf_tilde(&b)?;
            rows.push(vec![
                "convolution (2,3,4,5)".into(),
                show(&lhs),
                "-25.79239988".into(),
                if conv.pass && show(&lhs).starts_with("-25.79239988") {
                    "match"
                } else {
                    "MISMATCH"
                }
                .into(),
            ]);
            let t2 = ev.mtv(&Index::new(vec![2])?, MtvRoute::Direct)?;
            let z2 = ev.mzv(&Index::new(vec![2])?)?;
            let want = z2.mul_i64(3).div_i64(4);
            rows.push(vec!["t(2)".into(), show(&t2), "3/4·ζ(2)".into(), agree(&t2, &want, ctx)]);
            let t12 = ev.t_tilde(&Index::new(vec![1, 2])?)?;
            let z3 = ev.mzv(&Index::new(vec![3])?)?;
            let want = &z3.mul_i64(-7).mul_pow2(-1) + &(&BigReal::pi(p).sqr() * &BigReal::ln2(p));
            rows.push(vec![
                "ť(1,2)".into(),
                show(&t12),
                "-7/2·ζ(3) + π²·log 2".into(),
                agree(&t12, &want, ctx),
            ]);
            for bb in 1..=3 {
                let v = cf::prop21_coeff(6, bb, ctx)?;
                let idx = cf::prop21_index(6, bb)?;
                let want = ["31/16·ζ(6)", "40247/353792·ζ(12)", "1595681/224599040·ζ(18)"][bb as usize - 1];
                let got = label(&v, 6 * bb)?;
                rows.push(vec![
                    format!("ζ^½({idx})"),
                    show(&v),
                    want.into(),
                    if got == want { "match" } else { "MISMATCH" }.into(),
                ]);
            }
            let signed = crate::index::bar_evens(&b);
            let two_one = ev.zhalf_tilde_signed(&signed)?;
            let zs = ev.zstar(&k)?;
            rows.push(vec![
                format!("ž^½({signed})"),
                show(&two_one),
                format!("-ζ*(2,3,4,5) = {}", show(&-&zs)),
                agree(&two_one, &-zs, ctx),
            ]);
            Ok(Table {
                headers: vec!["quantity", "value", "expected", "status"],
                rows,
            })
        }
        TableName::Prop21 => {
            let mut rows = Vec::new();
            for a in 3..=6 {
                for b in 1..=3 {
                    let v = cf::prop21_coeff(a, b, ctx)?;
                    rows.push(vec![
                        a.to_string(),
                        b.to_string(),
                        cf::prop21_index(a, b)?.to_string(),
                        show(&v),
                        label(&v, a * b)?,
                    ]);
                }
            }
            Ok(Table {
                headers: vec!["a", "b", "index", "zeta_half", "closed_form"],
                rows,
            })
        }
        TableName::Prop22 => {
            let mut rows = Vec::new();
            for n in 0..=5 {
                let a = cf::prop22_z114(n, ctx)?;
                let a_ev = ev.zhalf(&cf::z114_index(n))?;
                rows.push(vec![
                    n.to_string(),
                    cf::z114_index(n).to_string(),
                    show(&a),
                    format!("{:.1e}", a.distance(&a_ev)),
                ]);
                if n >= 1 {
                    let idx = cf::z3112_index(n)?;
                    let b = cf::prop22_z3112(n, ctx)?;
                    let b_ev = ev.zhalf(&idx)?;
                    rows.push(vec![
                        n.to_string(),
                        idx.to_string(),
                        show(&b),
                        format!("{:.1e}", b.distance(&b_ev)),
                    ]);
                }
            }
            Ok(Table {
                headers: vec!["n", "index", "zeta_half", "residual"],
                rows,
            })
        }
        TableName::Prop23 => {
            let mut rows = Vec::new();
            for s in (0..=4).step_by(2) {
                for i in 0..=s {
                    let j = s - i;
                    let idx = cf::z113112_index(i, j);
                    let v = cf::prop23(i, j, ctx)?;
                    let e = ev.zhalf(&idx)?;
                    rows.push(vec![
                        i.to_string(),
                        j.to_string(),
                        idx.to_string(),
                        show(&v),
                        format!("{:.1e}", v.distance(&e)),
                    ]);
                }
            }
            Ok(Table {
                headers: vec!["i", "j", "index", "zeta_half", "residual"],
                rows,
            })
        }
    }
}
