//! Command-line front end. Every command prints one JSON object; `catalog` and `scan`
//! print JSON lines. Exit status: 0 success, 2 invalid input, 1 internal failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde_json::{json, Value};

use hkwall::brill_noether::{
    bn_dims, curve_class, curve_square, dual_divisor, exists_pencil, exists_pencil_via_rho,
    is_parametric_equality_case, mbm_square_bound, BnParams,
};
use hkwall::catalog::{generate_catalog, seed_lattice, CatalogEntry, CatalogRange};
use hkwall::coisotropic::{
    euler_characteristic, lagrangian_plane_params, projective_bundle_bound_holds, projective_bundle_descriptor,
    severi_family_enumerate, symmetric_product_enumerate, SubvarietyDescriptor,
};
use hkwall::exact::{format_rational, parse_rational, Rat};
use hkwall::lattice::IntMatrix;
use hkwall::wall::oracle::box_witnesses;
use hkwall::wall::{enumerate_witnesses, mbm_bound_check, wall_test, WallInput, WallVerdict};
use hkwall::{CurveClass, DivisorClass, Surface, SurfaceContext};

/// Directory against which relative `--output` paths are resolved.
pub const OUTPUT_DIR_VAR: &str = "HKWALL_OUTPUT_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Internal(String),
    /// Downstream reader went away (`| head`); not an error.
    #[error("broken pipe")]
    BrokenPipe,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Internal(_) => 1,
            CliError::BrokenPipe => 0,
        }
    }
}

impl From<hkwall::Error> for CliError {
    fn from(e: hkwall::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            CliError::BrokenPipe
        } else {
            CliError::Internal(format!("i/o: {e}"))
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "hkwall", version, about = "Wall divisors and rational curves on Hilbert schemes of K3 and abelian surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a class is a wall divisor and print a witness.
    WallTest(WallTestArgs),
    /// Curve class R_{p,δ,k}, its dual divisor and divisibility.
    Class(PointArgs),
    /// Existence of δ-nodal curves carrying a g¹_{k+ε}.
    Exists(PointArgs),
    /// q(R_{p,δ,k}) in both closed forms.
    Square(PointArgs),
    /// Lattices reachable from the seed, one JSON line per isometry class.
    Catalog(CatalogArgs),
    /// Coisotropic subvariety descriptors.
    Coisotropic(CoisotropicArgs),
    /// The Lagrangian k-plane parameters.
    Lagrangian(LagrangianArgs),
    /// Stream consistency checks over a parameter grid.
    Scan(ScanArgs),
}

#[derive(Args, Debug)]
struct SurfaceArgs {
    /// 0 for K3, 1 for abelian
    #[arg(long, allow_hyphen_values = true)]
    epsilon: i64,
    #[arg(long, allow_hyphen_values = true)]
    k: i64,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write to a file instead of stdout (relative to $HKWALL_OUTPUT_DIR when set).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PointArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    #[arg(long, allow_hyphen_values = true)]
    p: i64,
    #[arg(long, allow_hyphen_values = true)]
    delta: i64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct WallTestArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    #[arg(long, allow_hyphen_values = true)]
    p: i64,
    /// Test R_{p,δ,k}
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["curve", "divisor"])]
    delta: Option<i64>,
    /// Curve class "a,b" meaning a·L + b·r_k
    #[arg(long, allow_hyphen_values = true, conflicts_with = "divisor")]
    curve: Option<String>,
    /// Divisor class "a,b" meaning a·L + b·e_k (rationals allowed)
    #[arg(long, allow_hyphen_values = true)]
    divisor: Option<String>,
    /// Cross-check the witness set against brute-force box enumeration
    #[arg(long)]
    oracle: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    /// Genus range "a..b" (default 2..2k−2+5ε)
    #[arg(long)]
    p: Option<String>,
    /// Largest δ (default: top of the genus range)
    #[arg(long)]
    delta_max: Option<i64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Bundle,
    Severi,
    Symmetric,
    All,
}

#[derive(Args, Debug)]
struct CoisotropicArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    #[arg(long, allow_hyphen_values = true)]
    p: i64,
    /// Required for the bundle family
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<i64>,
    #[arg(long, value_enum, default_value = "all")]
    family: Family,
    /// Restrict the Severi and symmetric families to codimensions in "a..b"
    #[arg(long)]
    r: Option<String>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct LagrangianArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    /// wall test positive ⇔ q(R) < 0
    #[value(alias = "thm51")]
    Equivalence,
    /// pencil bound ⇔ Brill–Noether family
    Bound,
    /// square formula ⇔ ρ/β rewrite, β ∈ (−(k−1+2ε), k−1+2ε]
    Square,
    /// walls satisfy q(R) ≥ −(k+3−2ε)/2 with equality exactly in the parametric case
    Mbm,
    /// line solver ⇔ box enumeration
    Oracle,
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// ε or range "0..1"
    #[arg(long, default_value = "0..1")]
    epsilon: String,
    /// k range "a..b"
    #[arg(long)]
    k: String,
    /// p range "a..b"
    #[arg(long)]
    p: String,
    /// δ range (default 0..p−2ε)
    #[arg(long)]
    delta: Option<String>,
    #[arg(long, value_enum, default_value = "equivalence")]
    check: Check,
    #[command(flatten)]
    out: OutputArgs,
}

/// Parses `argv`, runs the command, and returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) | Err(CliError::BrokenPipe) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CliResult<()> {
    match cmd {
        Command::WallTest(a) => cmd_wall_test(a, out),
        Command::Class(a) => emit(&a.out, out, cmd_class(&a)?),
        Command::Exists(a) => emit(&a.out, out, cmd_exists(&a)?),
        Command::Square(a) => emit(&a.out, out, cmd_square(&a)?),
        Command::Catalog(a) => cmd_catalog(a, out),
        Command::Coisotropic(a) => emit(&a.out, out, cmd_coisotropic(&a)?),
        Command::Lagrangian(a) => emit(&a.out, out, cmd_lagrangian(&a)?),
        Command::Scan(a) => cmd_scan(a, out),
    }
}

/// Resolves an output path, honoring `$HKWALL_OUTPUT_DIR` for relative paths.
pub fn resolve_output(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os(OUTPUT_DIR_VAR) {
        Some(dir) if !dir.is_empty() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn with_sink<F>(args: &OutputArgs, stdout: &mut dyn Write, f: F) -> CliResult<()>
where
    F: FnOnce(&mut dyn Write) -> CliResult<()>,
{
    match &args.output {
        None => f(stdout),
        Some(p) => {
            let path = resolve_output(p);
            let file = File::create(&path)
                .map_err(|e| CliError::Internal(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush()?;
            Ok(())
        }
    }
}

fn emit(args: &OutputArgs, stdout: &mut dyn Write, value: Value) -> CliResult<()> {
    with_sink(args, stdout, |w| {
        writeln!(w, "{value}")?;
        Ok(())
    })
}

fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn rat_json(q: &Rat) -> Value {
    json!(format_rational(q))
}

fn surface(eps: i64) -> CliResult<Surface> {
    Surface::from_epsilon(eps).map_err(|_| CliError::Validation(format!("ε ∈ {{0, 1}} violated: ε = {eps}")))
}

fn context(s: &SurfaceArgs, p: i64) -> CliResult<SurfaceContext> {
    Ok(SurfaceContext::new(surface(s.epsilon)?, p, s.k)?)
}

fn params(a: &PointArgs) -> CliResult<BnParams> {
    Ok(BnParams::new(context(&a.surface, a.p)?, a.delta)?)
}

fn header(ctx: &SurfaceContext) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("epsilon".into(), json!(ctx.epsilon()));
    m.insert("k".into(), json!(ctx.k()));
    m.insert("p".into(), json!(ctx.p()));
    m
}

fn gram_json(g: &IntMatrix) -> Value {
    json!([int_json(&g[(0, 0)]), int_json(&g[(0, 1)]), int_json(&g[(1, 0)]), int_json(&g[(1, 1)])])
}

fn triple_json(t: &[BigInt; 3]) -> Value {
    json!([int_json(&t[0]), int_json(&t[1]), int_json(&t[2])])
}

fn parse_pair(s: &str, what: &str) -> CliResult<(Rat, Rat)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(CliError::Validation(format!("{what} must be given as \"a,b\", got {s:?}")));
    }
    let a = parse_rational(parts[0]).map_err(|e| CliError::Validation(format!("{what}: {e}")))?;
    let b = parse_rational(parts[1]).map_err(|e| CliError::Validation(format!("{what}: {e}")))?;
    Ok((a, b))
}

fn verdict_json(v: &WallVerdict) -> Value {
    let witness = v.witness.as_ref().map(|w| {
        json!({
            "coords": [int_json(&w.lattice.coords[0]), int_json(&w.lattice.coords[1])],
            "mukai": triple_json(&w.ambient),
            "branch": w.lattice.branch.tag(),
            "b_sv": int_json(&w.lattice.pairing),
            "q_s": int_json(&w.lattice.square),
        })
    });
    json!({
        "is_wall": v.is_wall,
        "branch": v.branch_tag(),
        "t_gram": v.lattice.as_ref().map(|t| gram_json(&t.gram)),
        "t_basis": v.lattice.as_ref().map(|t| json!([triple_json(&t.basis[0]), triple_json(&t.basis[1])])),
        "saturation_index": v.lattice.as_ref().map(|t| int_json(&t.index)),
        "witness": witness,
        "witness_count": v.witness_count,
        "primitive_divisor": [int_json(&v.primitive.l), int_json(&v.primitive.e)],
        "divisor_div": int_json(&v.primitive.divisibility),
        "q_D": rat_json(&v.divisor_square),
    })
}

fn cmd_wall_test(a: WallTestArgs, out: &mut dyn Write) -> CliResult<()> {
    let ctx = context(&a.surface, a.p)?;
    let (input, curve) = match (&a.delta, &a.curve, &a.divisor) {
        (Some(delta), None, None) => {
            let b = BnParams::new(ctx, *delta)?;
            let r = curve_class(&b);
            (WallInput::Curve(r.clone()), Some(r))
        }
        (None, Some(c), None) => {
            let (x, y) = parse_pair(c, "--curve")?;
            if !x.is_integer() || !y.is_integer() {
                return Err(CliError::Validation("--curve needs integer coefficients".into()));
            }
            let r = CurveClass::new(x.to_integer(), y.to_integer());
            (WallInput::Curve(r.clone()), Some(r))
        }
        (None, None, Some(d)) => {
            let (x, y) = parse_pair(d, "--divisor")?;
            (WallInput::Divisor(DivisorClass::new(x, y)), None)
        }
        _ => return Err(CliError::Validation("exactly one of --delta, --curve, --divisor is required".into())),
    };
    let verdict = wall_test(&input, &ctx)?;
    let mut rec = header(&ctx);
    if let Some(d) = a.delta {
        rec.insert("delta".into(), json!(d));
    }
    if let Some(r) = &curve {
        rec.insert("curve".into(), json!([int_json(&r.l), int_json(&r.r)]));
        rec.insert("q_R".into(), rat_json(&r.square(&ctx)));
        rec.insert("mbm_bound_ok".into(), json!(mbm_bound_check(r, &ctx)));
    }
    if let Value::Object(m) = verdict_json(&verdict) {
        rec.extend(m);
    }
    let mut agrees = true;
    if a.oracle {
        let oracle = match &verdict.lattice {
            Some(t) => {
                let fast = enumerate_witnesses(&t.gram, &t.v_coords, ctx.surface())?;
                let slow = box_witnesses(&t.gram, &t.v_coords, ctx.surface())?;
                agrees = fast == slow;
                json!({ "agrees": agrees, "solver_count": fast.len(), "box_count": slow.len() })
            }
            None => json!({ "agrees": true, "solver_count": 0, "box_count": 0 }),
        };
        rec.insert("oracle".into(), oracle);
    }
    emit(&a.out, out, Value::Object(rec))?;
    if agrees {
        Ok(())
    } else {
        Err(CliError::Internal("line solver and box enumeration disagree".into()))
    }
}

fn cmd_class(a: &PointArgs) -> CliResult<Value> {
    let b = params(a)?;
    let ctx = b.ctx();
    let r = curve_class(&b);
    let d = dual_divisor(&b);
    let prim = hkwall::wall::primitive_dual_divisor(&r, ctx)?;
    let mut rec = header(ctx);
    rec.insert("delta".into(), json!(b.delta()));
    rec.insert("curve".into(), json!([int_json(&r.l), int_json(&r.r)]));
    rec.insert("divisor".into(), json!([rat_json(&d.l), rat_json(&d.e)]));
    rec.insert("primitive_divisor".into(), json!([int_json(&prim.l), int_json(&prim.e)]));
    rec.insert("divisor_div".into(), int_json(&prim.divisibility));
    rec.insert("q_R".into(), rat_json(&r.square(ctx)));
    rec.insert("q_D".into(), rat_json(&prim.divisor.square(ctx)));
    rec.insert("alpha".into(), json!(b.alpha()));
    rec.insert("beta".into(), json!(b.beta()));
    Ok(Value::Object(rec))
}

fn cmd_exists(a: &PointArgs) -> CliResult<Value> {
    let b = params(a)?;
    let exists = exists_pencil(&b);
    let mut rec = header(b.ctx());
    rec.insert("delta".into(), json!(b.delta()));
    rec.insert("exists".into(), json!(exists));
    rec.insert("via_rho".into(), json!(exists_pencil_via_rho(&b, None)?));
    rec.insert("alpha".into(), json!(b.alpha()));
    rec.insert("beta".into(), json!(b.beta()));
    let dims = bn_dims(&b).ok().map(|(x, y)| json!({ "locus": x, "pencils": y }));
    rec.insert("dims".into(), json!(dims));
    Ok(Value::Object(rec))
}

fn cmd_square(a: &PointArgs) -> CliResult<Value> {
    let b = params(a)?;
    let ctx = b.ctx();
    let s = curve_square(&b);
    let mut rec = header(ctx);
    rec.insert("delta".into(), json!(b.delta()));
    rec.insert("q_R".into(), rat_json(&s.value));
    rec.insert("alternate".into(), rat_json(&s.alternate));
    rec.insert("alpha".into(), json!(s.alpha));
    rec.insert("beta".into(), json!(s.beta));
    rec.insert("rho".into(), json!(s.rho.to_string().parse::<i64>().ok()));
    rec.insert("bound".into(), rat_json(&mbm_square_bound(ctx)));
    rec.insert("minimal".into(), json!(s.minimal));
    rec.insert("equality_case".into(), json!(is_parametric_equality_case(&b)));
    let by_square = exists_pencil(&b).then(|| s.value.is_negative());
    rec.insert("is_wall_by_square".into(), json!(by_square));
    Ok(Value::Object(rec))
}

/// One JSON line of the catalog export.
pub fn catalog_record(e: &CatalogEntry) -> Value {
    json!({
        "epsilon": e.state.epsilon(),
        "k": e.state.k,
        "p": e.state.p,
        "delta": e.state.delta,
        "gram": gram_json(&e.state.gram),
        "q_R": rat_json(&e.curve_square),
        "is_wall": e.is_wall,
        "witness": e.witness.as_ref().map(triple_json),
        "isometry_class_id": e.class_id,
    })
}

fn cmd_catalog(a: CatalogArgs, out: &mut dyn Write) -> CliResult<()> {
    let s = surface(a.surface.epsilon)?;
    let seed = seed_lattice(a.surface.k, s)?;
    let (p_min, p_max) = match &a.p {
        Some(r) => parse_range(r, "--p")?,
        None => (2, seed.p),
    };
    let delta_max = a.delta_max.unwrap_or(p_max);
    let range = CatalogRange { p_min, p_max, delta_max };
    let entries = generate_catalog(a.surface.k, s, range)?;
    with_sink(&a.out, out, |w| {
        for e in &entries {
            writeln!(w, "{}", catalog_record(e))?;
        }
        Ok(())
    })
}

fn descriptor_json(d: &SubvarietyDescriptor) -> Value {
    json!({
        "source": d.source.tag(),
        "codim": d.codim,
        "total_dim": d.total_dim,
        "fiber_dim": d.fiber_dim,
        "base_dim": d.base_dim,
        "line_class": [int_json(&d.line_class.l), int_json(&d.line_class.r)],
        "line_square": rat_json(&d.line_square),
        "delta": d.params.delta,
        "k_prime": d.params.k_prime,
    })
}

fn cmd_coisotropic(a: &CoisotropicArgs) -> CliResult<Value> {
    let ctx = context(&a.surface, a.p)?;
    let s = ctx.surface();
    let mut rec = header(&ctx);
    let want = |f: Family| a.family == f || a.family == Family::All;
    let r_range = a.r.as_deref().map(|r| parse_range(r, "--r")).transpose()?;
    let keep = |r: i64| r_range.is_none_or(|(lo, hi)| lo <= r && r <= hi);
    if want(Family::Bundle) {
        match a.delta {
            Some(delta) => {
                let d = projective_bundle_descriptor(a.p, delta, a.surface.k, s)?;
                rec.insert("delta".into(), json!(delta));
                rec.insert("chi".into(), json!(euler_characteristic(a.p, delta, a.surface.k, s)));
                rec.insert("bundle".into(), json!(d.as_ref().map(descriptor_json)));
            }
            None if a.family == Family::Bundle => {
                return Err(CliError::Validation("--family bundle needs --delta".into()));
            }
            None => {}
        }
    }
    if want(Family::Severi) {
        let list: Vec<Value> = severi_family_enumerate(a.p, a.surface.k, s)?
            .iter()
            .filter(|(r, _, _)| keep(*r))
            .map(|(_, _, d)| descriptor_json(d))
            .collect();
        rec.insert("severi".into(), json!(list));
    }
    if want(Family::Symmetric) {
        let list: Vec<Value> = symmetric_product_enumerate(a.p, a.surface.k, s)?
            .iter()
            .filter(|(r, _, _)| keep(*r))
            .map(|(_, _, d)| descriptor_json(d))
            .collect();
        rec.insert("symmetric".into(), json!(list));
    }
    Ok(Value::Object(rec))
}

fn cmd_lagrangian(a: &LagrangianArgs) -> CliResult<Value> {
    let s = surface(a.surface.epsilon)?;
    let k = a.surface.k;
    let l = lagrangian_plane_params(k, s)?;
    let ctx = SurfaceContext::new(s, l.p, k)?;
    let mut rec = header(&ctx);
    rec.insert("delta".into(), json!(l.delta));
    rec.insert("chi".into(), json!(euler_characteristic(l.p, l.delta, k, s)));
    rec.insert("bound_holds".into(), json!(projective_bundle_bound_holds(l.p, l.delta, k, s)));
    rec.insert("moduli_dim".into(), json!(l.moduli_dim));
    rec.insert("q_R".into(), rat_json(&l.descriptor.line_square));
    rec.insert("minimal_square".into(), rat_json(&mbm_square_bound(&ctx)));
    rec.insert("descriptor".into(), descriptor_json(&l.descriptor));
    Ok(Value::Object(rec))
}

/// `"a..b"` (inclusive) or a single integer.
pub fn parse_range(s: &str, what: &str) -> CliResult<(i64, i64)> {
    let bad = || CliError::Validation(format!("{what}: malformed range {s:?}, expected \"a..b\" or \"a\""));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
        }
        None => {
            let v: i64 = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(CliError::Validation(format!("{what}: empty range {lo}..{hi}")));
    }
    Ok((lo, hi))
}

fn scan_point(b: &BnParams, check: Check) -> CliResult<Option<Value>> {
    let ctx = b.ctx();
    let pencil = exists_pencil(b);
    let mut rec = header(ctx);
    rec.insert("delta".into(), json!(b.delta()));
    rec.insert("check".into(), json!(format!("{check:?}").to_lowercase()));
    let consistent = match check {
        Check::Bound => {
            let rho = exists_pencil_via_rho(b, None)?;
            rec.insert("exists".into(), json!(pencil));
            rec.insert("via_rho".into(), json!(rho));
            pencil == rho
        }
        Check::Square => {
            let s = curve_square(b);
            let t = ctx.t();
            rec.insert("q_R".into(), rat_json(&s.value));
            rec.insert("beta".into(), json!(s.beta));
            s.value == s.alternate && -t < s.beta && s.beta <= t
        }
        _ if !pencil => return Ok(None),
        Check::Equivalence => {
            let r = curve_class(b);
            let q = r.square(ctx);
            let v = wall_test(&WallInput::Curve(r), ctx)?;
            rec.insert("q_R".into(), rat_json(&q));
            rec.insert("is_wall".into(), json!(v.is_wall));
            v.is_wall == q.is_negative()
        }
        Check::Mbm => {
            let r = curve_class(b);
            let q = r.square(ctx);
            let v = wall_test(&WallInput::Curve(r), ctx)?;
            let bound = mbm_square_bound(ctx);
            rec.insert("q_R".into(), rat_json(&q));
            rec.insert("is_wall".into(), json!(v.is_wall));
            !v.is_wall || (q >= bound && (q == bound) == is_parametric_equality_case(b))
        }
        Check::Oracle => {
            let r = curve_class(b);
            let v = wall_test(&WallInput::Curve(r), ctx)?;
            match &v.lattice {
                Some(t) => {
                    let slow = box_witnesses(&t.gram, &t.v_coords, ctx.surface())?;
                    let fast = enumerate_witnesses(&t.gram, &t.v_coords, ctx.surface())?;
                    rec.insert("witness_count".into(), json!(fast.len()));
                    fast == slow
                }
                None => true,
            }
        }
    };
    rec.insert("consistent".into(), json!(consistent));
    Ok(Some(Value::Object(rec)))
}

fn cmd_scan(a: ScanArgs, out: &mut dyn Write) -> CliResult<()> {
    let (e_lo, e_hi) = parse_range(&a.epsilon, "--epsilon")?;
    let (k_lo, k_hi) = parse_range(&a.k, "--k")?;
    let (p_lo, p_hi) = parse_range(&a.p, "--p")?;
    let delta_range = a.delta.as_deref().map(|d| parse_range(d, "--delta")).transpose()?;
    for eps in e_lo..=e_hi {
        surface(eps)?;
    }
    if k_lo < 2 {
        return Err(CliError::Validation(format!("k ≥ 2 violated: k = {k_lo}")));
    }
    if p_lo < 2 {
        return Err(CliError::Validation(format!("p ≥ 2 violated: p = {p_lo}")));
    }
    let check = a.check;
    with_sink(&a.out, out, |w| {
        for eps in e_lo..=e_hi {
            let s = surface(eps)?;
            for k in k_lo..=k_hi {
                for p in p_lo..=p_hi {
                    let top = p - 2 * eps;
                    let (d_lo, d_hi) = match delta_range {
                        Some((lo, hi)) => (lo.max(0), hi.min(top)),
                        None => (0, top),
                    };
                    let ctx = SurfaceContext::new(s, p, k)?;
                    // One genus row at a time: computed in parallel, written in δ order.
                    let row: Vec<CliResult<Option<Value>>> = (d_lo..=d_hi)
                        .into_par_iter()
                        .map(|delta| scan_point(&BnParams::new(ctx, delta)?, check))
                        .collect();
                    for rec in row {
                        if let Some(v) = rec? {
                            writeln!(w, "{v}")?;
                        }
                    }
                }
            }
        }
        Ok(())
    })
}
