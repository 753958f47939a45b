//! The five subcommands: resolve and validate the config, compute, write one document.

use crate::config::{
    merge, BerezinArgs, BerezinMode, CurveArgs, Ensemble, ExpansionArgs, Format, GridArgs, KernelArgs, Layout,
    VerifyArgs,
};
use crate::error::CliError;
use crate::output::{csv_header, emit, json_document};
use archipelago::format::fmt17;
use archipelago::geometry::{outside_s1, outside_sa, trace_curve, Curve, EnsembleParams};
use archipelago::kernels::{
    asym_kernel_thm11, asym_kernel_thm13, berezin, edge_kernel_limit, grid, kernel_fullq_exact, kernel_hat_exact,
    kernel_tilde_exact, BerezinField, KernelField, KernelMode, LemniscateKernel, LemniscateSource, R1Mode,
    TypoReading,
};
use archipelago::numerics::{reg_inc_gamma_q, LogComplex, LogSum, Summed};
use archipelago::orthopoly::{
    asym_h, asym_h_combos, asym_psi, asym_psi_diff, asym_q, quad_polysystem, ratio_p_at_a, PolySystem, QuadSpec,
};
use archipelago::verify::{exact_system, rel, render_text, run_suites, SuiteId, VerifyConfig};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::path::PathBuf;

/// Global options after merging flags over the params file.
#[derive(Clone, Debug, Serialize)]
pub struct Common {
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub format: Format,
    #[serde(skip)]
    pub explicit_format: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u32>,
    pub threads: usize,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn params(e: &Ensemble) -> Result<EnsembleParams, CliError> {
    Ok(EnsembleParams::new(e.n.unwrap_or(20), e.c.unwrap_or(1.0), e.a.unwrap_or(2.0), e.d.unwrap_or(1))?)
}

/// Exact route for integer `c`, quadrature otherwise.
fn induced_system(p: &EnsembleParams, max_degree: usize, bits: Option<u32>) -> archipelago::Result<PolySystem> {
    if p.integer_c().is_some() {
        exact_system(p, max_degree, bits)
    } else {
        quad_polysystem(p, max_degree, &QuadSpec::default())
    }
}

fn json_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("value serializes")
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn finish<C: Serialize>(common: &Common, command: &str, config: &C, csv_body: Vec<u8>, data: Value) -> Result<(), CliError> {
    let bytes = match common.format {
        Format::Csv => {
            let mut out = csv_header(command, &json!({ "common": common, "command": config })).into_bytes();
            out.extend(csv_body);
            out
        }
        Format::Json => json_document(command, &json!({ "common": common, "command": config }), data),
    };
    Ok(emit(common.out.as_deref(), &bytes)?)
}

#[derive(Serialize)]
struct CurveConfig {
    params: EnsembleParams,
    which: Curve,
    step: f64,
}

pub fn curve(common: &Common, file: &Map<String, Value>, args: &CurveArgs) -> Result<u8, CliError> {
    let args = merge(file, args)?;
    let p = params(&args.ensemble)?;
    let which = args.which.ok_or_else(|| usage("curve needs --which (S1, Sa, Sa_d or droplet)"))?;
    let step = args.step.unwrap_or(0.01);
    if !(step > 0.0 && step.is_finite()) {
        return Err(usage(format!("--step must be positive, got {step}")));
    }
    match which {
        Curve::Sa => p.require_a_above_one("S_a")?,
        Curve::SaD => p.require_a_above_one("S_a^d")?,
        Curve::S1 | Curve::DropletBoundary => {}
    }
    let cfg = CurveConfig { params: p, which, step };
    let sample = trace_curve(&p, which, step)?;
    let mut body = Vec::new();
    sample.write_csv(&mut body)?;
    let data = json!({
        "components": sample.component_count(),
        "closed": sample.closed(),
        "max_residual": sample.max_residual(),
        "curve": json_value(&sample),
    });
    finish(common, "curve", &cfg, body, data)?;
    Ok(0)
}

fn resolve_grid(g: &GridArgs, radius: f64, points: usize) -> Result<(Complex64, Complex64, usize), CliError> {
    let lo = g.lo.unwrap_or(cx(-radius, -radius));
    let hi = g.hi.unwrap_or(cx(radius, radius));
    let n = g.grid.unwrap_or(points);
    if n == 0 {
        return Err(usage("--grid must be at least 1"));
    }
    if !(lo.re.is_finite() && lo.im.is_finite() && hi.re.is_finite() && hi.im.is_finite()) {
        return Err(usage("grid corners must be finite"));
    }
    Ok((lo, hi, n))
}

#[derive(Serialize)]
struct KernelConfig {
    params: EnsembleParams,
    mode: KernelMode,
    layout: Layout,
    lo: Complex64,
    hi: Complex64,
    grid: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    w: Option<Complex64>,
    typo: TypoReading,
    source: LemniscateSource,
}

fn check_mode(mode: KernelMode, p: &EnsembleParams) -> Result<(), CliError> {
    match mode {
        KernelMode::ExactTilde | KernelMode::ExactHat | KernelMode::ExactFullQ => {
            if p.d != 1 {
                return Err(usage(format!("{} is the induced kernel and needs d = 1", mode.id())));
            }
        }
        KernelMode::AsymThm11 => {
            if p.d != 1 {
                return Err(usage("asym_thm11 needs d = 1"));
            }
            p.require_a_above_one("asym_thm11")?;
            if p.c == 0.0 {
                return Err(usage("asym_thm11 needs c != 0"));
            }
        }
        KernelMode::AsymThm13 => {
            if p.d < 2 {
                return Err(usage("asym_thm13 needs d >= 2"));
            }
            p.require_a_above_one("asym_thm13")?;
        }
        KernelMode::ExactLemniscate | KernelMode::LimitEdge => {}
    }
    Ok(())
}

pub fn kernel(common: &Common, file: &Map<String, Value>, args: &KernelArgs) -> Result<u8, CliError> {
    let args = merge(file, args)?;
    let p = params(&args.ensemble)?;
    let mode = args.mode.unwrap_or(KernelMode::ExactFullQ);
    check_mode(mode, &p)?;
    let layout = args.layout.unwrap_or_default();
    let (lo, hi, n) = resolve_grid(&args.grid, 2.0, 11)?;
    let w = match layout {
        Layout::Row => Some(args.w.unwrap_or(cx(1.0, 0.0))),
        _ => None,
    };
    let cfg = KernelConfig {
        params: p,
        mode,
        layout,
        lo,
        hi,
        grid: n,
        w,
        typo: args.typo.unwrap_or_default(),
        source: args.source.unwrap_or(LemniscateSource::GramLemniscate),
    };
    let pts = grid(lo, hi, n);
    let pairs: Vec<(Complex64, Complex64)> = match layout {
        Layout::Product => pts.iter().flat_map(|&z| pts.iter().map(move |&w| (z, w))).collect(),
        Layout::Diagonal => pts.iter().map(|&z| (z, z)).collect(),
        Layout::Row => pts.iter().map(|&z| (z, w.unwrap())).collect(),
    };
    let plain = |v: archipelago::Result<LogComplex>| v.map(|value| Summed { value, cancelled: false });
    let bits = common.precision_bits;
    let field = match mode {
        KernelMode::ExactTilde | KernelMode::ExactHat | KernelMode::ExactFullQ => {
            let sys = induced_system(&p, p.n, bits)?;
            let f: fn(Complex64, Complex64, &PolySystem) -> archipelago::Result<Summed> = match mode {
                KernelMode::ExactTilde => kernel_tilde_exact,
                KernelMode::ExactHat => kernel_hat_exact,
                _ => kernel_fullq_exact,
            };
            KernelField::sample(p, mode, &pairs, |z, w| f(z, w, &sys))?
        }
        KernelMode::ExactLemniscate => {
            let k = LemniscateKernel::with_options(&p, cfg.source, &QuadSpec::default(), bits)?;
            KernelField::sample(p, mode, &pairs, |z, w| k.eval(z, w))?
        }
        KernelMode::AsymThm11 => KernelField::sample(p, mode, &pairs, |z, w| plain(asym_kernel_thm11(z, w, &p)))?,
        KernelMode::AsymThm13 => {
            KernelField::sample(p, mode, &pairs, |z, w| plain(asym_kernel_thm13(z, w, &p, cfg.typo)))?
        }
        KernelMode::LimitEdge => KernelField::sample(p, mode, &pairs, |z, w| {
            Ok(Summed { value: LogComplex::from_complex(edge_kernel_limit(z, w)), cancelled: false })
        })?,
    };
    let mut body = Vec::new();
    field.write_csv(&mut body)?;
    let samples: Vec<Value> = field
        .samples
        .iter()
        .map(|s| {
            json!({
                "z": complex_json(s.z),
                "w": complex_json(s.w),
                "log10_mod": s.value.map(|v| v.log10_mod()),
                "phase": s.value.map(|v| if v.is_zero() { 0.0 } else { v.phase }),
                "cancelled": s.cancelled,
            })
        })
        .collect();
    let data = json!({ "mode": mode.id(), "masked": field.masked(), "samples": samples });
    finish(common, "kernel", &cfg, body, data)?;
    Ok(0)
}

#[derive(Serialize)]
struct BerezinConfig {
    params: EnsembleParams,
    mode: BerezinMode,
    z: Complex64,
    r1: R1Mode,
    lo: Complex64,
    hi: Complex64,
    grid: usize,
    source: LemniscateSource,
}

pub fn berezin_field(common: &Common, file: &Map<String, Value>, args: &BerezinArgs) -> Result<u8, CliError> {
    let args = merge(file, args)?;
    let p = params(&args.ensemble)?;
    let mode = args.mode.unwrap_or_default();
    let d = p.d as f64;
    let z = match args.z {
        Some(z) => z,
        None if p.a >= 1.0 => cx((p.a - 1.0).powf(1.0 / d), 0.0),
        None => return Err(usage(format!("the default z = (a - 1)^(1/d) needs a >= 1, got a = {}; pass --z", p.a))),
    };
    let r1 = match (mode, args.r1) {
        (BerezinMode::Asymptotic, Some(R1Mode::Exact)) => {
            return Err(usage("the asymptotic kernel has no diagonal value; use --r1 density"));
        }
        (_, Some(r)) => r,
        (BerezinMode::Exact, None) => R1Mode::Exact,
        (BerezinMode::Asymptotic, None) => R1Mode::DensityApprox,
    };
    if mode == BerezinMode::Asymptotic {
        check_mode(if p.d == 1 { KernelMode::AsymThm11 } else { KernelMode::AsymThm13 }, &p)?;
    }
    let radius = (p.a + 1.0).powf(1.0 / d) + 0.25;
    let (lo, hi, n) = resolve_grid(&args.grid, radius, 41)?;
    let cfg = BerezinConfig {
        params: p,
        mode,
        z,
        r1,
        lo,
        hi,
        grid: n,
        source: args.source.unwrap_or(LemniscateSource::GramLemniscate),
    };
    let ws = grid(lo, hi, n);
    let bits = common.precision_bits;
    let field = match (mode, p.d) {
        (BerezinMode::Exact, 1) => {
            let sys = induced_system(&p, p.n, bits)?;
            let k = |x, y| kernel_fullq_exact(x, y, &sys).map(|s| s.value);
            BerezinField::sample(p, z, &ws, |w| berezin(z, w, k, r1, &p))?
        }
        (BerezinMode::Exact, _) => {
            let lem = LemniscateKernel::with_options(&p, cfg.source, &QuadSpec::default(), bits)?;
            let k = |x, y| lem.eval(x, y).map(|s| s.value);
            BerezinField::sample(p, z, &ws, |w| berezin(z, w, k, r1, &p))?
        }
        (BerezinMode::Asymptotic, 1) => {
            BerezinField::sample(p, z, &ws, |w| berezin(z, w, |x, y| asym_kernel_thm11(x, y, &p), r1, &p))?
        }
        (BerezinMode::Asymptotic, _) => BerezinField::sample(p, z, &ws, |w| {
            berezin(z, w, |x, y| asym_kernel_thm13(x, y, &p, TypoReading::Corrected), r1, &p)
        })?,
    };
    let mut body = Vec::new();
    field.write_csv(&mut body)?;
    let samples: Vec<Value> = field.samples.iter().map(|(w, v)| json!({ "w": complex_json(*w), "value": v })).collect();
    let data = json!({
        "z": complex_json(z),
        "masked": field.samples.iter().filter(|s| s.1.is_none()).count(),
        "samples": samples,
    });
    finish(common, "berezin", &cfg, body, data)?;
    Ok(0)
}

#[derive(Serialize)]
struct ExpansionConfig {
    params: EnsembleParams,
    z: Complex64,
    zeta: Complex64,
}

struct Row {
    quantity: &'static str,
    offset: i32,
    exact: Option<LogComplex>,
    asym: Option<LogComplex>,
    rel: Option<f64>,
}

impl Row {
    fn new(quantity: &'static str, offset: i32, exact: archipelago::Result<LogComplex>, asym: archipelago::Result<LogComplex>) -> Result<Row, CliError> {
        let keep = |r: archipelago::Result<LogComplex>| match r {
            Ok(v) => Ok(Some(v)),
            Err(e) if e.is_numerical() => Err(CliError::Core(e)),
            Err(_) => Ok(None),
        };
        let (exact, asym) = (keep(exact)?, keep(asym)?);
        let rel = match (exact, asym) {
            (Some(x), Some(y)) => Some(rel(x, y)),
            _ => None,
        };
        Ok(Row { quantity, offset, exact, asym, rel })
    }
}

fn log_cells(v: Option<LogComplex>) -> (String, String) {
    match v {
        Some(v) if v.is_zero() => (fmt17(f64::NEG_INFINITY), fmt17(0.0)),
        Some(v) => (fmt17(v.log10_mod()), fmt17(v.phase)),
        None => (String::new(), String::new()),
    }
}

fn sub(x: LogComplex, z: Complex64, y: LogComplex) -> LogComplex {
    let mut acc = LogSum::new();
    acc.add(x);
    acc.add(-(LogComplex::from_complex(z) * y));
    acc.value().value
}

pub fn expansions(common: &Common, file: &Map<String, Value>, args: &ExpansionArgs) -> Result<u8, CliError> {
    let args = merge(file, args)?;
    let p = params(&args.ensemble)?;
    if p.d != 1 {
        return Err(usage("the expansions are for the induced ensemble, d = 1"));
    }
    p.require_a_above_one("the expansions")?;
    if p.n < 2 {
        return Err(usage("the expansions need N >= 2"));
    }
    let z = args.z.unwrap_or(cx(2.0, 1.0));
    let zeta = args.zeta.unwrap_or(cx(2.0, 0.0));
    if !outside_sa(z, p.a) {
        return Err(usage(format!("z = {z} must lie outside S_a for a = {}", p.a)));
    }
    if !outside_s1(zeta) {
        return Err(usage(format!("zeta = {zeta} must lie outside S_1")));
    }
    let cfg = ExpansionConfig { params: p, z, zeta };
    let n = p.n;
    let nf = p.nf();
    let sys = induced_system(&p, n + 1, common.precision_bits)?;
    let h = |j: usize| LogComplex::new(sys.log_norm(j), 0.0);
    let psi = sys.psi_upto(z, n + 1)?.values;
    let at = |off: i32| (n as i32 + off) as usize;

    let mut rows = Vec::new();
    for off in [-1, 0, 1] {
        rows.push(Row::new("h", off, Ok(h(at(off))), asym_h(off, &p))?);
    }
    for off in [-1, 0, 1] {
        rows.push(Row::new("psi", off, Ok(psi[at(off)]), asym_psi(off, z, &p))?);
    }
    for off in [0, 1] {
        let exact = sub(psi[at(off)], z, psi[at(off - 1)]);
        let mut row = Row::new("psi_minus_z_psi_prev", off, Ok(exact), asym_psi_diff(off, z, &p))?;
        if row.asym.is_some_and(|a| a.is_zero()) && exact.modulus() <= 1e-13 * psi[n].modulus() {
            row.rel = Some(0.0);
        }
        rows.push(row);
    }
    let combos = asym_h_combos(&p);
    let den1 = LogComplex::from_real((nf + p.c) / nf * (sys.log_norm(n - 1) - sys.log_norm(n)).exp() - 1.0) * h(n);
    let den2 =
        LogComplex::from_real((nf + p.c + 1.0) / nf * (sys.log_norm(n) - sys.log_norm(n + 1)).exp() - 1.0) * h(n + 1);
    let second = LogComplex::new(sys.log_norm(n) - sys.log_norm(n - 1), 0.0).scale(nf) / den2;
    rows.push(Row::new("h_combo", 1, Ok(den1.recip()), combos.clone().map(|c| c.0))?);
    rows.push(Row::new("h_combo", 2, Ok(second), combos.map(|c| c.1))?);
    let ratio = sys.p_at_a(n + 1).and_then(|x| Ok(x / sys.p_at_a(n)?));
    rows.push(Row::new("p_ratio_at_a", 1, ratio, ratio_p_at_a(&p).map(LogComplex::from_real))?);
    for off in [0, 1, 2] {
        rows.push(Row::new("q", off, Ok(reg_inc_gamma_q(at(off) as u32, zeta * nf)), asym_q(off, n, zeta))?);
    }

    let mut body = String::from("quantity,offset,N,exact_log10_mod,exact_phase,asym_log10_mod,asym_phase,rel_error\n");
    for r in &rows {
        let (em, ep) = log_cells(r.exact);
        let (am, ap) = log_cells(r.asym);
        let re = r.rel.map(fmt17).unwrap_or_default();
        body.push_str(&format!("{},{},{},{em},{ep},{am},{ap},{re}\n", r.quantity, r.offset, n));
    }
    let lc = |v: Option<LogComplex>| v.map(|v| json!({ "log10_mod": v.log10_mod(), "phase": v.phase }));
    let data: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "quantity": r.quantity,
                "offset": r.offset,
                "N": n,
                "exact": lc(r.exact),
                "asymptotic": lc(r.asym),
                "rel_error": r.rel,
            })
        })
        .collect();
    finish(common, "expansions", &cfg, body.into_bytes(), Value::Array(data))?;
    Ok(0)
}

#[derive(Serialize)]
struct VerifyRun<'a> {
    suites: Vec<&'static str>,
    suite_config: &'a VerifyConfig,
}

pub fn verify(common: &Common, file: &Map<String, Value>, args: &VerifyArgs) -> Result<u8, CliError> {
    let args = merge(file, args)?;
    let mut ids = Vec::new();
    for name in &args.suite {
        let id = SuiteId::parse(name).ok_or_else(|| {
            let known: Vec<_> = SuiteId::ALL.iter().map(|s| s.id()).collect();
            usage(format!("unknown suite '{name}'; known suites: {}", known.join(", ")))
        })?;
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    if args.all {
        ids = SuiteId::ALL.to_vec();
    }
    if ids.is_empty() {
        return Err(usage("verify needs --suite NAME or --all"));
    }
    let mut cfg = match &args.suite_config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read suite config {}: {e}", path.display())))?;
            serde_json::from_str::<VerifyConfig>(&text)
                .map_err(|e| usage(format!("bad suite config {}: {e}", path.display())))?
        }
        None => VerifyConfig::default(),
    };
    if let Some(c) = args.c {
        cfg.c = c;
    }
    if let Some(a) = args.a {
        cfg.a = a;
    }
    if common.precision_bits.is_some() {
        cfg.precision_bits = common.precision_bits;
    }
    if args.randomize {
        cfg.seed = Some(args.seed.or(cfg.seed).unwrap_or(0));
        cfg.extra_points = args.extra_points.unwrap_or(if cfg.extra_points == 0 { 4 } else { cfg.extra_points });
    }
    cfg.quick |= args.quick;
    let cfg = cfg.reduced();
    cfg.validate()?;

    let reports = run_suites(&ids, &cfg)?;
    let failed = reports.iter().any(|s| s.failed());
    let run = VerifyRun { suites: ids.iter().map(|s| s.id()).collect(), suite_config: &cfg };
    let text = render_text(&reports);
    let mut body = String::from("suite,check,index,size,error,fitted_slope,expected_slope,ceiling,verdict\n");
    for s in &reports {
        for r in &s.reports {
            let opt = |x: Option<f64>| x.map(fmt17).unwrap_or_default();
            let tail = format!(
                "{},{},{},{}",
                opt(r.fitted_slope),
                opt(r.expected_slope),
                opt(r.error_ceiling),
                r.verdict.id()
            );
            if r.errors.is_empty() {
                body.push_str(&format!("{},{},{},,,{tail}\n", s.suite, r.check, r.index));
            }
            for (n, e) in &r.errors {
                body.push_str(&format!("{},{},{},{n},{},{tail}\n", s.suite, r.check, r.index, fmt17(*e)));
            }
        }
    }
    let data = json!({ "verdict": if failed { "fail" } else { "pass" }, "suites": json_value(&reports) });
    if common.out.is_some() || !common.explicit_format {
        emit(None, text.as_bytes())?;
    }
    if common.out.is_some() || common.explicit_format {
        let doc = Common { format: if common.explicit_format { common.format } else { Format::Json }, ..common.clone() };
        finish(&doc, "verify", &run, body.into_bytes(), data)?;
    }
    Ok(if failed { 1 } else { 0 })
}

impl Common {
    pub fn resolve(out: Option<PathBuf>, format: Option<Format>, precision_bits: Option<u32>, threads: Option<usize>) -> Self {
        Common { out, format: format.unwrap_or_default(), explicit_format: format.is_some(), precision_bits, threads: threads.unwrap_or(0) }
    }
}
