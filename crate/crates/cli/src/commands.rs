use std::path::PathBuf;
use std::str::FromStr;

use anyhow::bail;
use num_complex::Complex64;
use polylog_hodge::cocycle::{sample_points, verify_cocycle, SampleRegion};
use polylog_hodge::derham::verify_dimension_formula;
use polylog_hodge::specfun::{
    d_bwr, fe_check as run_fe_check, l_big, li_traced, ComplexPoint, CutSide, EvalConfig, FeReport,
};
use polylog_hodge::specialization::verify_corollary;
use serde::Serialize;

use crate::output::{csv, emit, json};
use crate::{Format, Function, Outcome, Relation, RunConfig, Side};

fn parse_point(s: &str) -> anyhow::Result<Complex64> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let z = Complex64::from_str(&cleaned).map_err(|_| anyhow::anyhow!("cannot parse {s:?} as a complex number"))?;
    anyhow::ensure!(z.re.is_finite() && z.im.is_finite(), "non-finite point {s:?}");
    Ok(z)
}

/// `re±imi` with the shortest round-trip form of each part.
fn fmt_complex(z: Complex64) -> String {
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{:?}{sign}{:?}i", z.re, z.im.abs())
}

fn finish<T: Serialize>(
    config: &RunConfig,
    pass: bool,
    report: &T,
    table: impl FnOnce() -> anyhow::Result<Vec<u8>>,
) -> anyhow::Result<Outcome> {
    let bytes = match config.format {
        Format::Json => json(config, pass, report)?,
        Format::Csv => table()?,
    };
    emit(&bytes, config.out.as_deref())?;
    Ok(pass.into())
}

#[derive(Serialize)]
struct EvalReport {
    function: Function,
    order: u32,
    t: ComplexPoint,
    re: f64,
    im: f64,
    /// Regime of the highest-order `Li` evaluation involved.
    regime: String,
}

pub fn eval(
    function: Function,
    order: u32,
    t: &str,
    cut_side: Option<Side>,
    format: Option<Format>,
    out: Option<PathBuf>,
) -> anyhow::Result<Outcome> {
    let config = RunConfig {
        command: "eval",
        function: Some(function),
        t: Some(t.to_string()),
        cut_side,
        m: Some(order),
        format: format.unwrap_or(Format::Csv),
        out,
        ..RunConfig::default()
    };
    let z = parse_point(t)?;
    let cfg = EvalConfig {
        cut_side: cut_side.map(|s| match s {
            Side::Above => CutSide::Above,
            Side::Below => CutSide::Below,
        }),
        ..EvalConfig::default()
    };
    let (value, regime) = match function {
        Function::Li => li_traced(order, z, &cfg)?,
        Function::L => {
            anyhow::ensure!(order >= 1, "L_m needs m >= 1");
            let v = l_big(order - 1, z, &cfg)?;
            (v, li_traced(order, z, &cfg)?.1)
        }
        Function::D => {
            anyhow::ensure!(order >= 1, "D_m needs m >= 1");
            let v = d_bwr(order, z, &cfg)?;
            let mut c = cfg;
            c.cut_side.get_or_insert(CutSide::Above);
            (Complex64::new(v, 0.0), li_traced(order, z, &c)?.1)
        }
    };
    let report = EvalReport {
        function,
        order,
        t: z.into(),
        re: value.re,
        im: value.im,
        regime: regime.to_string(),
    };
    #[derive(Serialize)]
    struct Row<'a> {
        function: Function,
        order: u32,
        t: String,
        value: String,
        regime: &'a str,
    }
    let row = Row {
        function,
        order,
        t: fmt_complex(z),
        value: fmt_complex(value),
        regime: &report.regime,
    };
    finish(&config, true, &report, || csv([row]))
}

pub fn fe_check(
    m_max: u32,
    points: usize,
    seed: u64,
    tol: f64,
    relation: Relation,
    format: Option<Format>,
    out: Option<PathBuf>,
) -> anyhow::Result<Outcome> {
    let config = RunConfig {
        command: "fe-check",
        m: Some(m_max),
        points: Some(points),
        seed: Some(seed),
        tol: Some(tol),
        relation: Some(relation),
        format: format.unwrap_or(Format::Json),
        out,
        ..RunConfig::default()
    };
    config.validate()?;
    let report: FeReport = run_fe_check(m_max, points, seed, tol, &EvalConfig::default())?;
    let pass = match relation {
        Relation::Stated => report.pass,
        Relation::Inversion => report.inversion_pass,
    };
    #[derive(Serialize)]
    struct Row {
        m: u32,
        max_residual: f64,
        worst_t: String,
        max_inversion_residual: f64,
        pass: bool,
    }
    let rows = report.rows.iter().map(|r| Row {
        m: r.m,
        max_residual: r.max_residual,
        worst_t: fmt_complex(r.worst_t.to_complex()),
        max_inversion_residual: r.max_inversion_residual,
        pass: r.pass,
    });
    finish(&config, pass, &report, || csv(rows))
}

pub fn cohomology(g: usize, n: u32, format: Option<Format>, out: Option<PathBuf>) -> anyhow::Result<Outcome> {
    let config = RunConfig {
        command: "cohomology",
        g: Some(g),
        n: Some(n),
        format: format.unwrap_or(Format::Csv),
        out,
        ..RunConfig::default()
    };
    config.validate()?;
    let report = verify_dimension_formula(g, n)?;
    finish(&config, report.pass(), &report, || csv(&report.rows))
}

#[allow(clippy::too_many_arguments)]
pub fn cocycle_verify(
    g: usize,
    n: u32,
    points: Option<usize>,
    tol: Option<f64>,
    fd_step: f64,
    seed: u64,
    format: Option<Format>,
    out: Option<PathBuf>,
) -> anyhow::Result<Outcome> {
    let points = points.unwrap_or(if g == 1 { 100 } else { 50 });
    let tol = tol.unwrap_or(if g == 1 { 1e-6 } else { 1e-5 });
    let config = RunConfig {
        command: "cocycle-verify",
        g: Some(g),
        n: Some(n),
        points: Some(points),
        tol: Some(tol),
        h: Some(fd_step),
        seed: Some(seed),
        format: format.unwrap_or(Format::Json),
        out,
        ..RunConfig::default()
    };
    config.validate()?;
    if fd_step >= 0.5 {
        bail!("finite-difference step {fd_step} must be below 0.5");
    }
    let pts = sample_points(g, points, seed, SampleRegion::default_for(g))?;
    let report = verify_cocycle(g, n, &pts, tol, fd_step, &EvalConfig::default())?;
    #[derive(Serialize)]
    struct Row {
        point: usize,
        t: String,
        alpha: f64,
        eta: f64,
        xi: f64,
        max: f64,
        pass: bool,
    }
    let rows = report.per_point.iter().enumerate().map(|(i, r)| Row {
        point: i,
        t: r.t.iter().map(|z| fmt_complex(*z)).collect::<Vec<_>>().join(" "),
        alpha: r.alpha,
        eta: r.eta,
        xi: r.xi,
        max: r.max,
        pass: r.max <= tol,
    });
    finish(&config, report.pass, &report, || csv(rows))
}

pub fn specialize(
    d: u32,
    kmax: u32,
    tol: f64,
    format: Option<Format>,
    out: Option<PathBuf>,
) -> anyhow::Result<Outcome> {
    let config = RunConfig {
        command: "specialize",
        d: Some(d),
        kmax: Some(kmax),
        tol: Some(tol),
        format: format.unwrap_or(Format::Csv),
        out,
        ..RunConfig::default()
    };
    config.validate()?;
    let report = verify_corollary(d, kmax, tol, &EvalConfig::default())?;
    #[derive(Serialize)]
    struct Row {
        d: u32,
        zeta: String,
        k: u32,
        #[serde(rename = "D_value")]
        d_value: f64,
        li_value: String,
        class_residual: f64,
        pass: bool,
    }
    let rows = report.rows.iter().map(|r| Row {
        d: r.d,
        zeta: fmt_complex(r.zeta),
        k: r.k,
        d_value: r.d_value,
        li_value: fmt_complex(r.li_value),
        class_residual: r.class_residual,
        pass: r.pass,
    });
    finish(&config, report.pass, &report, || csv(rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_parse() {
        assert_eq!(parse_point("0.5").unwrap(), Complex64::new(0.5, 0.0));
        assert_eq!(parse_point("0.3+0.4i").unwrap(), Complex64::new(0.3, 0.4));
        assert_eq!(parse_point("-2").unwrap(), Complex64::new(-2.0, 0.0));
        assert_eq!(parse_point("2i").unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(parse_point(" 1 - 3i ").unwrap(), Complex64::new(1.0, -3.0));
        assert!(parse_point("abc").is_err());
        assert!(parse_point("inf").is_err());
    }
}
