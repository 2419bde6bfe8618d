//! The subcommands. Each writes its human-readable output to `out`,
//! warnings to `err`, and returns the process exit code.

use crate::config::{FormKind, RunConfig};
use crate::{plot, report};
use eiszero::divisor_poly::{conjugation_identity_check, from_zeros, rescale_identity_check};
use eiszero::group_registry::{conjugate_group, get_group, list_groups, GroupDescriptor};
use eiszero::modular_forms::{build_eisenstein, build_hauptmodul, conjugate_hauptmodul};
use eiszero::zero_locator::{csv_digits, sweep_reports, write_csv, ZeroReport};
use eiszero::{Error, Result};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Coefficient tolerance for the polynomial-level identities.
pub const POLY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Zeros,
    Verify,
    ConjugateCheck,
    IdentityCheck,
    Qexp,
    Divpoly,
    Groups,
}

impl Command {
    /// Weights assumed when none are configured.
    pub fn default_weights(self) -> Option<&'static str> {
        match self {
            Command::ConjugateCheck | Command::IdentityCheck => Some("4..12"),
            _ => None,
        }
    }
}

pub fn run(cmd: Command, cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Zeros => zeros(cfg, out),
        Command::Verify => verify(cfg, out, err),
        Command::ConjugateCheck => conjugate_check(cfg, out),
        Command::IdentityCheck => identity_check(cfg, out),
        Command::Qexp => qexp(cfg, out),
        Command::Divpoly => divpoly(cfg, out),
        Command::Groups => groups(out),
    }
}

fn with_pool<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("jobs: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn locate(g: &GroupDescriptor, cfg: &RunConfig) -> Result<Vec<ZeroReport>> {
    let opts = cfg.locate_options();
    with_pool(cfg.jobs, || sweep_reports(g, &cfg.weights, &opts))?
}

/// File-name stem for a group name.
pub fn stem(name: &str) -> String {
    name.replace('*', "star").replace('+', "plus").replace(['(', ')'], "_")
}

fn out_dir(cfg: &RunConfig) -> Result<Option<PathBuf>> {
    match &cfg.out {
        None => Ok(None),
        Some(p) => {
            std::fs::create_dir_all(p)?;
            Ok(Some(p.clone()))
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn zeros(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    cfg.require_groups(None)?;
    cfg.require_weights()?;
    let dir = out_dir(cfg)?;
    if dir.is_none() && (cfg.formats.svg || cfg.formats.json) {
        return Err(Error::Config("svg and json output need --out".into()));
    }
    for name in &cfg.groups {
        let g = get_group(name)?;
        let reports = locate(&g, cfg)?;
        let refs: Vec<&ZeroReport> = reports.iter().collect();
        match &dir {
            None => {
                if cfg.formats.csv {
                    write_csv(&refs, &mut &mut *out)?;
                }
            }
            Some(d) => {
                let s = stem(&g.name);
                if cfg.formats.csv {
                    for r in &reports {
                        let mut buf = Vec::new();
                        write_csv(&[r], &mut buf)?;
                        write_file(&d.join(format!("{s}_w{}.csv", r.weight)), &buf)?;
                    }
                }
                if cfg.formats.svg {
                    write_file(&d.join(format!("{s}.svg")), plot::render(&g, &refs)?.as_bytes())?;
                }
                if cfg.formats.json {
                    let doc = report::document("zeros", &refs);
                    let text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))?;
                    write_file(&d.join(format!("{s}.json")), text.as_bytes())?;
                }
                writeln!(out, "{:<14} {:>6} {:>6} {:>8} {:>12} {:>10}", "group", "weight", "zeros", "off_arc", "max_dist", "valence")?;
                for r in &reports {
                    writeln!(
                        out,
                        "{:<14} {:>6} {:>6} {:>8} {:>12.3e} {:>10}",
                        r.group,
                        r.weight,
                        r.total_multiplicity(),
                        r.off_arc_count(),
                        r.max_off_arc_distance(),
                        r.valence_found
                    )?;
                }
            }
        }
    }
    Ok(0)
}

fn verify(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    cfg.require_groups(None)?;
    cfg.require_weights()?;
    let dir = out_dir(cfg)?;
    let mut code = 0;
    writeln!(
        out,
        "{:<14} {:>6} {:>5} {:>4} {:>5} {:>8} {:>8} {:>9} {:>9} {:>9}  mode",
        "group", "weight", "deg_P", "m", "c-s1", "off_half", "off_int", "[a0,inf)", "[a0,a1]", "(-inf,a1]"
    )?;
    for name in &cfg.groups {
        let g = get_group(name)?;
        if !g.acceptable {
            writeln!(err, "warning: {} has no acceptable fundamental domain; verdicts are advisory", g.name)?;
        }
        let reports = locate(&g, cfg)?;
        for r in &reports {
            let mode = if r.asserted() { "asserted" } else { "advisory" };
            match &r.verdicts {
                Some(v) => writeln!(
                    out,
                    "{:<14} {:>6} {:>5} {:>4} {:>5} {:>8} {:>8} {:>9} {:>9} {:>9}  {mode}",
                    r.group,
                    r.weight,
                    v.deg_p,
                    v.m_halfline,
                    v.bound_halfline,
                    v.off_halfline_count,
                    v.off_interval_count,
                    pass(v.verdict_11prime),
                    pass(v.verdict_12),
                    pass(v.verdict_31)
                )?,
                None => writeln!(out, "{:<14} {:>6}  c(Gamma,F) unavailable  {mode}", r.group, r.weight)?,
            }
            if r.asserted() && !r.all_verdicts_pass() {
                code = 1;
            }
        }
        if let (Some(d), true) = (&dir, cfg.formats.json) {
            let refs: Vec<&ZeroReport> = reports.iter().collect();
            let doc = report::document("verify", &refs);
            let text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))?;
            write_file(&d.join(format!("{}_verify.json", stem(&g.name))), text.as_bytes())?;
        }
    }
    Ok(code)
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

fn two_groups(cfg: &RunConfig) -> Result<(GroupDescriptor, GroupDescriptor)> {
    cfg.require_groups(Some(2))?;
    cfg.require_weights()?;
    Ok((get_group(&cfg.groups[0])?, get_group(&cfg.groups[1])?))
}

fn conjugate_check(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let (a, b) = two_groups(cfg)?;
    let (g, gc) = if conjugate_group(&a).name == b.name {
        (a, b)
    } else if conjugate_group(&b).name == a.name {
        (b, a)
    } else {
        return Err(Error::UnrelatedGroups(a.name, b.name));
    };
    let order = cfg.trunc;
    let mut ok = true;
    writeln!(out, "# conjugate pair {} -> {} (z -> z + h/2), order {order}", g.name, gc.name)?;
    for &w in &cfg.weights {
        let e = build_eisenstein(&g, w, order)?;
        let ec = build_eisenstein(&gc, w, order)?;
        let good = ec.qexp.agrees_to(&e.qexp.half_period_shift(), order as i64 + 1);
        ok &= good;
        writeln!(out, "series weight {w}: {}", pass(good))?;
    }
    let j = build_hauptmodul(&g, order)?;
    let jc = build_hauptmodul(&gc, order)?;
    let good = jc.qexp.agrees_to(&conjugate_hauptmodul(&j, &gc).qexp, order as i64 + 1);
    ok &= good;
    writeln!(out, "hauptmodul a_n -> (-1)^(n-1) a_n: {}", pass(good))?;
    let r = locate(&g, cfg)?;
    let rc = locate(&gc, cfg)?;
    for (x, y) in r.iter().zip(&rc) {
        let p = from_zeros(x, cfg.convention);
        let pc = from_zeros(y, cfg.convention);
        let line = match conjugation_identity_check(&p, &pc, POLY_TOL) {
            Ok(good) => {
                ok &= good;
                format!("{} (degree {})", pass(good), p.degree())
            }
            Err(e) => {
                ok = false;
                format!("FAIL ({e})")
            }
        };
        writeln!(out, "polynomial weight {} [{}]: {line}", x.weight, cfg.convention)?;
    }
    Ok(if ok { 0 } else { 1 })
}

fn identity_check(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let (a, b) = two_groups(cfg)?;
    let related = |big: &GroupDescriptor, small: &GroupDescriptor| {
        big.rescale_of.as_ref().filter(|r| r.base == small.name).map(|r| r.factor)
    };
    let (big, small, m) = if let Some(m) = related(&a, &b) {
        (a, b, m)
    } else if let Some(m) = related(&b, &a) {
        (b, a, m)
    } else {
        return Err(Error::UnrelatedGroups(a.name, b.name));
    };
    let order = cfg.trunc;
    let mut ok = true;
    writeln!(out, "# rescaling {} (z) = {} ({m} z), order {order}", big.name, small.name)?;
    for &w in &cfg.weights {
        let eb = build_eisenstein(&big, w, order)?;
        let es = build_eisenstein(&small, w, order)?;
        let good = eb.qexp.agrees_to(&es.qexp.rescale(m), order as i64 + 1);
        ok &= good;
        writeln!(out, "series weight {w}: {}", pass(good))?;
    }
    let rb = locate(&big, cfg)?;
    let rs = locate(&small, cfg)?;
    for (x, y) in rb.iter().zip(&rs) {
        let line = match rescale_identity_check(x, y, m, POLY_TOL) {
            Ok(good) => {
                ok &= good;
                pass(good).to_string()
            }
            Err(e) => {
                ok = false;
                format!("FAIL ({e})")
            }
        };
        writeln!(out, "zeros weight {}: {line}; off-arc in {}: {}", x.weight, big.name, x.off_arc_count())?;
    }
    Ok(if ok { 0 } else { 1 })
}

fn qexp(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    cfg.require_groups(Some(1))?;
    let g = get_group(&cfg.groups[0])?;
    let text = match cfg.form {
        FormKind::Hauptmodul => build_hauptmodul(&g, cfg.trunc)?.qexp.to_text(),
        FormKind::Eisenstein => {
            if cfg.weights.len() != 1 {
                return Err(Error::Config("qexp needs exactly one weight".into()));
            }
            build_eisenstein(&g, cfg.weights[0], cfg.trunc)?.qexp.to_text()
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(0)
}

fn divpoly(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    cfg.require_groups(Some(1))?;
    if cfg.weights.len() != 1 {
        return Err(Error::Config("divpoly needs exactly one weight".into()));
    }
    let g = get_group(&cfg.groups[0])?;
    let r = locate(&g, cfg)?.remove(0);
    let p = from_zeros(&r, cfg.convention);
    let d = csv_digits(r.precision);
    writeln!(
        out,
        "# group={} weight={} degree={} convention: {} ; coefficients highest degree first, columns re im",
        g.name,
        r.weight,
        p.degree(),
        p.convention
    )?;
    for c in p.descending() {
        writeln!(out, "{}\t{}", c.re.to_sci(d), c.im.to_sci(d))?;
    }
    Ok(0)
}

fn groups(out: &mut dyn Write) -> Result<i32> {
    writeln!(out, "{:<14} {:>5} {:>5} {:>5} {:>10} {:>5}  relation", "name", "level", "index", "width", "acceptable", "c-s1")?;
    for name in list_groups() {
        let g = get_group(&name)?;
        let rel = match (&g.conjugate_of, &g.rescale_of) {
            (Some(c), _) => format!("conjugate of {c}"),
            (_, Some(r)) => format!("{} at {}z", r.base, r.factor),
            _ => String::new(),
        };
        let cs = g.c_minus_s_expected.map_or("-".to_string(), |v| v.to_string());
        writeln!(
            out,
            "{:<14} {:>5} {:>5} {:>5} {:>10} {:>5}  {rel}",
            g.name, g.level, g.index, g.width.to_string(), g.acceptable, cs
        )?;
    }
    Ok(0)
}
