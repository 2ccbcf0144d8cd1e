//! Command-line front end: parses JSON inputs, runs the engine and prints
//! text or JSON.
//!
//! Exit status is 0 on success, 2 when a verification report fails, and 1
//! for usage, input and budget errors.

pub mod cache;

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use equichar_core::burnside::BurnsideRing;
use equichar_core::cellspace::{make_cellspace, CellSpace, CellSpaceDescriptor};
use equichar_core::euler::{chi, chi_k, chi_k_equivariant};
use equichar_core::group::{
    conjugacy_classes, make_group, FiniteGroup, GroupDescriptor,
};
use equichar_core::gset::{make_biset, BiSetDescriptor};
use equichar_core::motivic::{
    make_datum, make_lext, orbifold_class_from_datum, parse_rational, zeta_l, LExtDescriptor, LExtRing,
    OrbifoldDatumDescriptor, Rational,
};
use equichar_core::powerstruct::{power, Integers, Ring, TruncatedSeries};
use equichar_core::verify::{
    verify_axioms, verify_lemma1, verify_props12, verify_theorem1, AxiomRing, VerificationReport, VerifyBudget,
};
use equichar_core::Int;

use cache::MarksCache;

#[derive(Parser, Debug)]
#[command(name = "equichar", version, about = "Equivariant Euler characteristics and power structures")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Directory for cached tables of marks.
    #[arg(long, env = "EQUICHAR_CACHE", global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Omit wall-clock times so reports are reproducible.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Inspect a group given as JSON.
    Group {
        #[arg(value_enum)]
        what: GroupView,
        #[arg(long)]
        input: PathBuf,
    },
    /// Euler characteristic of a set or cell space.
    Chi {
        #[arg(long)]
        input: PathBuf,
    },
    /// Orbifold Euler characteristic.
    ChiOrb {
        #[arg(long)]
        input: PathBuf,
    },
    /// Order-k Euler characteristic.
    ChiK {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        input: PathBuf,
    },
    /// Order-k equivariant Euler characteristic in the Burnside ring of gB.
    ChiKEq {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        input: PathBuf,
    },
    /// (A(t))^m for a series and exponent given as JSON.
    Power {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "N")]
        n: Option<usize>,
    },
    /// The zeta series of a basis class, optionally twisted by L^q.
    Zeta {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "N")]
        n: usize,
    },
    Verify {
        #[command(subcommand)]
        which: VerifyCommand,
    },
    /// Class of an order-k generalized Euler characteristic from strata data.
    ///
    /// Variety classes are never computed: every class in the datum is
    /// taken as given.
    OrbifoldClass {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupView {
    Show,
    Classes,
    Subgroups,
    Marks,
}

#[derive(Subcommand, Debug)]
pub enum VerifyCommand {
    /// Brute-force LHS against the power-structure RHS.
    Theorem1 {
        #[arg(long)]
        k: usize,
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 50_000)]
        max_wreath_k2: u128,
        #[arg(long, default_value_t = 400_000)]
        max_wreath_k1: u128,
        #[arg(long, default_value_t = 1_000_000)]
        max_points: u128,
    },
    /// Symmetric powers of a gB-set against (1 - t)^(-[X]).
    Lemma1 {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        input: PathBuf,
    },
    /// Randomized power-structure axioms.
    Axioms {
        #[arg(long, value_enum, default_value_t = RingChoice::Z)]
        ring: RingChoice,
        /// Group file for the Burnside and L-extended rings.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        denominator: i64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long = "N", default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Randomized checks of the L-substitution and specialization laws.
    Props12 {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long = "N", default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingChoice {
    Z,
    Burnside,
    Lext,
}

/// Parses `argv` (including the program name), runs the command and
/// returns the exit status.
pub fn cli_main<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 1;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match run(&cli, out) {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    cache: Option<MarksCache>,
}

impl Ctx<'_> {
    fn ring(&self, group: &Arc<FiniteGroup>) -> Result<Arc<BurnsideRing>> {
        match &self.cache {
            Some(c) => c.ring(group),
            None => Ok(BurnsideRing::new(group)?),
        }
    }

    fn emit(&self, out: &mut dyn Write, text: String, value: Value) -> Result<()> {
        match self.cli.format {
            Format::Text => writeln!(out, "{text}")?,
            Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?,
        }
        Ok(())
    }

    fn report(&self, out: &mut dyn Write, r: VerificationReport) -> Result<i32> {
        let r = if self.cli.no_timing { r.without_timing() } else { r };
        let text = r.render_text();
        let text = text.trim_end().to_string();
        let pass = r.pass;
        self.emit(out, text, serde_json::to_value(&r)?)?;
        Ok(if pass { 0 } else { 2 })
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &PathBuf) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let at = e.path().to_string();
        anyhow!("{}: at `{at}`: {}", path.display(), e.inner())
    })
}

fn load_space(path: &PathBuf) -> Result<CellSpace> {
    let v: Value = read_json(path)?;
    if v.get("cells").is_some() {
        let d: CellSpaceDescriptor = read_json(path)?;
        Ok(make_cellspace(&d)?)
    } else {
        let d: BiSetDescriptor = read_json(path)?;
        Ok(CellSpace::from_biset(&make_biset(&d).with_context(|| path.display().to_string())?))
    }
}

fn load_biset(path: &PathBuf) -> Result<equichar_core::gset::BiSet> {
    let d: BiSetDescriptor = read_json(path)?;
    make_biset(&d).with_context(|| path.display().to_string())
}

fn load_group(path: &PathBuf) -> Result<Arc<FiniteGroup>> {
    let d: GroupDescriptor = read_json(path)?;
    Ok(make_group(&d)?)
}

fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let ctx = Ctx {
        cli,
        cache: cli.cache_dir.as_ref().map(MarksCache::new),
    };
    match &cli.command {
        Command::Group { what, input } => group_cmd(&ctx, out, *what, input)?,
        Command::Chi { input } => {
            let x = load_space(input)?;
            let v = chi(&x);
            ctx.emit(out, v.to_string(), json!(v.to_string()))?;
        }
        Command::ChiOrb { input } => {
            let x = load_space(input)?;
            let v = chi_k(&x, 1)?;
            ctx.emit(out, v.to_string(), json!(v.to_string()))?;
        }
        Command::ChiK { k, input } => {
            let x = load_space(input)?;
            let v = chi_k(&x, *k)?;
            ctx.emit(out, v.to_string(), json!(v.to_string()))?;
        }
        Command::ChiKEq { k, input } => {
            let x = load_space(input)?;
            let ring = ctx.ring(x.g_b())?;
            let v = chi_k_equivariant(&ring, &x, *k)?;
            ctx.emit(
                out,
                v.to_string(),
                json!({"basis": ring.basis_json(), "coeffs": v.to_json()}),
            )?;
        }
        Command::Power { input, n } => power_cmd(&ctx, out, input, *n)?,
        Command::Zeta { input, n } => zeta_cmd(&ctx, out, input, *n)?,
        Command::Verify { which } => return verify_cmd(&ctx, out, which),
        Command::OrbifoldClass { input } => orbifold_cmd(&ctx, out, input)?,
    }
    Ok(0)
}

fn group_cmd(ctx: &Ctx, out: &mut dyn Write, what: GroupView, input: &PathBuf) -> Result<()> {
    let g = load_group(input)?;
    match what {
        GroupView::Show => {
            let gens: Vec<String> = g.generators().iter().map(|&x| g.element_label(x)).collect();
            ctx.emit(
                out,
                format!("{} of order {}, generators {}", g.label(), g.order(), gens.join(", ")),
                json!({"label": g.label(), "order": g.order(), "generators": gens}),
            )?;
        }
        GroupView::Classes => {
            let classes = conjugacy_classes(&g);
            let mut text = format!("{} conjugacy classes", classes.len());
            for c in &classes {
                text += &format!("\n  {} (size {})", g.element_label(c[0]), c.len());
            }
            let v: Vec<Value> = classes
                .iter()
                .map(|c| json!({"rep": c[0], "label": g.element_label(c[0]), "size": c.len()}))
                .collect();
            ctx.emit(out, text, json!({"count": classes.len(), "classes": v}))?;
        }
        GroupView::Subgroups => {
            let ring = ctx.ring(&g)?;
            let mut text = format!("{} conjugacy classes of subgroups", ring.rank());
            for i in 0..ring.rank() {
                let h = ring.class_rep(i);
                let gens: Vec<String> = h.generators().iter().map(|&x| g.element_label(x)).collect();
                text += &format!(
                    "\n  {}: order {}, {} conjugate(s), generated by {}",
                    ring.basis_label(i),
                    h.order(),
                    ring.lattice().classes()[i].size,
                    if gens.is_empty() { "()".to_string() } else { gens.join(", ") }
                );
            }
            ctx.emit(out, text, json!({"basis": ring.basis_json()}))?;
        }
        GroupView::Marks => {
            let ring = ctx.ring(&g)?;
            let marks = ring.table_of_marks();
            let width = marks
                .iter()
                .flatten()
                .map(|m| m.to_string().len())
                .max()
                .unwrap_or(1);
            let mut text = String::new();
            for (i, row) in marks.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|m| format!("{m:>width$}")).collect();
                text += &format!("[G/{}]\t{}\n", ring.basis_label(i), cells.join(" "));
            }
            let rows: Vec<Vec<String>> = marks.iter().map(|r| r.iter().map(|m| m.to_string()).collect()).collect();
            ctx.emit(
                out,
                text.trim_end().to_string(),
                json!({"basis": ring.basis_json(), "marks": rows}),
            )?;
        }
    }
    Ok(())
}

/// `{"group": …?, "lext": false, "series": [...], "exponent": …}`; without
/// a group the coefficients are integers.
#[derive(Deserialize)]
struct PowerInput {
    #[serde(default)]
    group: Option<GroupDescriptor>,
    #[serde(default)]
    lext: bool,
    series: Vec<Value>,
    exponent: Value,
}

fn power_cmd(ctx: &Ctx, out: &mut dyn Write, input: &PathBuf, n: Option<usize>) -> Result<()> {
    let p: PowerInput = read_json(input)?;
    if p.series.is_empty() {
        bail!("series must have at least its constant term");
    }
    let n = n.unwrap_or(p.series.len() - 1);
    match (&p.group, p.lext) {
        (None, false) => {
            let z = Integers::new();
            let coeffs = p.series.iter().map(parse_int).collect::<Result<Vec<_>>>()?;
            let a = TruncatedSeries::new(&z, coeffs, n);
            let m = parse_int(&p.exponent)?;
            emit_series(ctx, out, &power(&a, &m)?)
        }
        (Some(g), false) => {
            let ring = ctx.ring(&make_group(g)?)?;
            let coeffs = p
                .series
                .iter()
                .map(|v| burnside_elem(&ring, v))
                .collect::<Result<Vec<_>>>()?;
            let a = TruncatedSeries::new(&ring, coeffs, n);
            let m = burnside_elem(&ring, &p.exponent)?;
            emit_series(ctx, out, &power(&a, &m)?)
        }
        (g, true) => {
            let g = g.clone().unwrap_or(GroupDescriptor::Trivial);
            let l = LExtRing::new(&ctx.ring(&make_group(&g)?)?);
            let coeffs = p
                .series
                .iter()
                .map(|v| lext_elem(&l, v))
                .collect::<Result<Vec<_>>>()?;
            let a = TruncatedSeries::new(&l, coeffs, n);
            let m = lext_elem(&l, &p.exponent)?;
            emit_series(ctx, out, &power(&a, &m)?)
        }
    }
}

fn parse_int(v: &Value) -> Result<Int> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(Int::from)
            .ok_or_else(|| anyhow!("not an integer: {n}")),
        Value::String(s) => s.trim().parse().map_err(|_| anyhow!("not an integer: {s:?}")),
        _ => bail!("expected an integer, got {v}"),
    }
}

fn burnside_elem(ring: &Arc<BurnsideRing>, v: &Value) -> Result<equichar_core::burnside::BurnsideElement> {
    match v {
        Value::Array(xs) => {
            let c = xs.iter().map(parse_int).collect::<Result<Vec<_>>>()?;
            Ok(ring.from_coeffs(c)?)
        }
        _ => Ok(ring.from_int(parse_int(v)?)),
    }
}

fn lext_elem(l: &LExtRing, v: &Value) -> Result<equichar_core::motivic::LExtElement> {
    if v.is_number() || v.is_string() {
        return Ok(l.from_int(parse_int(v)?));
    }
    let d: LExtDescriptor = serde_json::from_value(v.clone())?;
    Ok(make_lext(l, &d)?)
}

fn emit_series<R: Ring>(ctx: &Ctx, out: &mut dyn Write, s: &TruncatedSeries<R>) -> Result<()> {
    ctx.emit(out, s.to_string(), s.to_json())
}

/// `{"group": …, "class": i, "exp": "1/2"}`
#[derive(Deserialize)]
struct ZetaInput {
    group: GroupDescriptor,
    class: usize,
    #[serde(default)]
    exp: Option<String>,
}

fn zeta_cmd(ctx: &Ctx, out: &mut dyn Write, input: &PathBuf, n: usize) -> Result<()> {
    let z: ZetaInput = read_json(input)?;
    let ring = ctx.ring(&make_group(&z.group)?)?;
    if z.class >= ring.rank() {
        bail!("class {} out of range: the group has {} subgroup classes", z.class, ring.rank());
    }
    match &z.exp {
        None => {
            let c = ring.zeta_basis(z.class, n)?;
            emit_series(ctx, out, &TruncatedSeries::new(&ring, c, n))
        }
        Some(q) => {
            let l = LExtRing::new(&ring);
            emit_series(ctx, out, &zeta_l(&l, parse_rational(q)?, z.class, n)?)
        }
    }
}

fn verify_cmd(ctx: &Ctx, out: &mut dyn Write, which: &VerifyCommand) -> Result<i32> {
    let report = match which {
        VerifyCommand::Theorem1 {
            k,
            n,
            input,
            max_wreath_k2,
            max_wreath_k1,
            max_points,
        } => {
            let x = load_biset(input)?;
            let ring = ctx.ring(x.g_b())?;
            let budget = VerifyBudget {
                wreath_order_k2: *max_wreath_k2,
                wreath_order_k1: *max_wreath_k1,
                points: *max_points,
            };
            verify_theorem1(&ring, &x, *k, *n, &budget)?
        }
        VerifyCommand::Lemma1 { n, input } => {
            let x = load_biset(input)?;
            let ring = ctx.ring(x.g_b())?;
            verify_lemma1(&ring, &x, *n)?
        }
        VerifyCommand::Axioms {
            ring,
            input,
            denominator,
            trials,
            n,
            seed,
        } => {
            let choice = match ring {
                RingChoice::Z => AxiomRing::Integers,
                RingChoice::Burnside | RingChoice::Lext => {
                    let path = input
                        .as_ref()
                        .ok_or_else(|| anyhow!("--input <group.json> is required for this ring"))?;
                    let b = ctx.ring(&load_group(path)?)?;
                    if *ring == RingChoice::Burnside {
                        AxiomRing::Burnside(b)
                    } else {
                        if *denominator <= 0 {
                            bail!("--denominator must be positive");
                        }
                        AxiomRing::LExt(b, *denominator)
                    }
                }
            };
            verify_axioms(&choice, *trials, *n, *seed)?
        }
        VerifyCommand::Props12 { input, trials, n, seed } => {
            let b = ctx.ring(&load_group(input)?)?;
            verify_props12(&b, *trials, *n, *seed)?
        }
    };
    ctx.report(out, report)
}

/// `{"gO": …, "gB": …, "datum": {…}}`
#[derive(Deserialize)]
struct OrbifoldInput {
    #[serde(rename = "gO")]
    g_o: GroupDescriptor,
    #[serde(rename = "gB", default = "trivial_descriptor")]
    g_b: GroupDescriptor,
    datum: OrbifoldDatumDescriptor,
}

fn trivial_descriptor() -> GroupDescriptor {
    GroupDescriptor::Trivial
}

fn orbifold_cmd(ctx: &Ctx, out: &mut dyn Write, input: &PathBuf) -> Result<()> {
    let o: OrbifoldInput = read_json(input)?;
    let g_o = make_group(&o.g_o)?;
    let l = LExtRing::new(&ctx.ring(&make_group(&o.g_b)?)?);
    let datum = make_datum(&l, &o.datum)?;
    let c = orbifold_class_from_datum(&l, &g_o, &datum)?;
    let weights: Vec<String> = datum.weights.iter().map(Rational::to_string).collect();
    ctx.emit(
        out,
        c.to_string(),
        json!({"k": datum.k, "weights": weights, "class": l.to_json(&c)}),
    )
}
