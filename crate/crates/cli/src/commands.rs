use std::collections::BTreeMap;

use cdna_core::coverage::{
    coverage_bounds, expected_coverage, expected_coverage_closed_w2, expected_coverage_partial,
    expected_coverage_series, random_access_expectation, CoverageParams,
};
use cdna_core::combinatorics::rational_to_f64;
use cdna_core::mld::binary::{construct_binary4, optimize_binary4_grid};
use cdna_core::mld::construct::{beta_weight_exact, qplus1_figures};
use cdna_core::mld::exact::evaluate_code_exact;
use cdna_core::mld::{evaluate_code, CompositeCode, Decoder, TableDecoder};
use cdna_core::model::{enumerate_omega, ObservedDistribution};
use cdna_core::sim::{run_simulation, SimConfig, SimMode};
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::CliError;
use crate::output::{OutputRecord, Provenance};
use crate::range::parse_range;
use crate::spec::{build_family, load_spec, parse_code, parse_parts, render_code, render_symbol, Family};
use crate::{CodeEvalArgs, CoverageArgs, DesignArgs, FamilyArg, ModeArg, PartialArgs, RaArgs, SimArgs};

type Records = Vec<OutputRecord>;

pub fn coverage(a: &CoverageArgs) -> Result<Records, CliError> {
    let ells = match (&a.range, a.ell) {
        (Some(r), _) => parse_range(r)?,
        (None, Some(l)) => vec![l],
        (None, None) => return Err(CliError::Usage("give --ell or --range".into())),
    };
    ells.into_iter()
        .map(|ell| {
            let s = expected_coverage_series(ell, a.omega, a.tol)?;
            let mut rec = OutputRecord::new("coverage", Provenance::Formula)
                .param("ell", ell)
                .param("omega", a.omega)
                .param("tol", a.tol)
                .value("E", s.value)
                .value("tail_bound", s.tail_bound);
            if a.bounds {
                let b = coverage_bounds(ell, a.omega)?;
                rec = rec.value("lower", b.lower).value("upper", b.upper);
            }
            if a.closed {
                if a.omega != 2 {
                    return Err(CliError::Usage("--closed applies to --omega 2".into()));
                }
                rec = rec.value("E_closed", expected_coverage_closed_w2(ell)?);
            }
            Ok(rec)
        })
        .collect()
}

pub fn partial(a: &PartialArgs) -> Result<Records, CliError> {
    let e = expected_coverage_partial(a.ell, a.omega, a.r, a.tol)?;
    let reference = expected_coverage(a.r, a.omega, a.tol)?;
    Ok(vec![OutputRecord::new("partial", Provenance::Formula)
        .param("ell", a.ell)
        .param("omega", a.omega)
        .param("r", a.r)
        .param("tol", a.tol)
        .value("E_partial", e)
        .value("E_r", reference)])
}

pub fn ra(a: &RaArgs) -> Result<Records, CliError> {
    Ok(vec![OutputRecord::new("ra", Provenance::Formula)
        .param("ell", a.ell)
        .param("omega", a.omega)
        .param("k", a.k)
        .param("tol", a.tol)
        .value("RA", random_access_expectation(a.ell, a.omega, a.k, a.tol)?)])
}

pub fn sim(a: &SimArgs) -> Result<(Records, Option<CliError>), CliError> {
    let mut params = CoverageParams::new(a.ell, a.omega)?;
    let (mode, name) = match a.mode {
        ModeArg::Recovery => (SimMode::Full, "recovery"),
        ModeArg::Partial => (SimMode::Partial, "partial"),
        ModeArg::Ra => (SimMode::RandomAccess, "ra"),
    };
    match (a.mode, a.r, a.k) {
        (ModeArg::Recovery, None, None) => {}
        (ModeArg::Partial, Some(r), None) => params = params.with_r(r)?,
        (ModeArg::Ra, None, Some(k)) => params = params.with_k(k)?,
        (ModeArg::Partial, None, _) => return Err(CliError::Usage("--mode partial needs --r".into())),
        (ModeArg::Ra, _, None) => return Err(CliError::Usage("--mode ra needs --k".into())),
        _ => return Err(CliError::Usage(format!("--mode {name} takes neither --r nor --k beyond its own"))),
    }
    let mut config = SimConfig::new(params, mode, a.trials, a.seed);
    config.max_transmissions = a.max_transmissions;
    let report = run_simulation(&config)?;
    let rec = OutputRecord::new("sim", Provenance::Simulation)
        .param("mode", name)
        .param("ell", a.ell)
        .param("omega", a.omega)
        .param("r", a.r)
        .param("k", a.k)
        .param("trials", a.trials)
        .param("seed", a.seed)
        .param("max_transmissions", a.max_transmissions)
        .value("mean", report.mean)
        .value("std_error", report.std_error)
        .value("ci_low", report.ci95.map(|c| c.0))
        .value("ci_high", report.ci95.map(|c| c.1))
        .value("truncated_trials", report.truncated_trials);
    let deferred = (a.strict && report.truncated_trials > 0)
        .then_some(CliError::Truncated(report.truncated_trials));
    Ok((vec![rec], deferred))
}

/// A JSON object mapping count strings such as `"0,10"` to 1-based
/// codeword indices.
fn load_table(path: &str, code: &CompositeCode, n: u32) -> Result<TableDecoder, CliError> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse { pos: e.column(), msg: format!("{path}: {e}") })?;
    let obj = value
        .as_object()
        .ok_or_else(|| CliError::Usage(format!("{path}: expected a JSON object")))?;
    let mut table = BTreeMap::new();
    for (key, v) in obj {
        let counts = key
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| CliError::Usage(format!("{path}: bad count vector '{key}'")))?;
        let idx = v
            .as_u64()
            .filter(|&i| i >= 1)
            .ok_or_else(|| CliError::Usage(format!("{path}: '{key}' needs a codeword index ≥ 1")))?;
        table.insert(ObservedDistribution::new(counts)?, idx as usize - 1);
    }
    Ok(TableDecoder::new(code, n, table)?)
}

pub fn code_eval(a: &CodeEvalArgs) -> Result<Records, CliError> {
    let spec = load_spec(&a.code)?;
    let parsed = parse_code(&spec)?;
    let code = &parsed.code;
    let decoder = match a.decoder.as_str() {
        "mld" => Decoder::Mld,
        other => match other.strip_prefix("table:") {
            Some(path) => Decoder::Table(load_table(path, code, a.n)?),
            None => return Err(CliError::Usage(format!("unknown decoder '{other}'"))),
        },
    };
    let base = |i: usize| {
        OutputRecord::new("code-eval", Provenance::Formula)
            .param("code", spec.as_str())
            .param("n", a.n)
            .param("decoder", a.decoder.as_str())
            .param("exact", if a.exact { "yes" } else { "no" })
            .param("index", i + 1)
            .param("symbol", render_symbol(code.symbol(i)))
    };
    if a.exact {
        let exact = parsed
            .exact
            .as_ref()
            .ok_or_else(|| CliError::Usage("--exact needs a code with rational entries".into()))?;
        let eval = evaluate_code_exact(exact, &decoder, a.n)?;
        let (f_min, f_avg) = (eval.f_min_f64(), eval.f_avg_f64());
        return Ok(eval
            .per_symbol_success
            .iter()
            .enumerate()
            .map(|(i, p)| {
                base(i)
                    .value("p_success", rational_to_f64(p))
                    .value("f_min", f_min)
                    .value("f_avg", f_avg)
                    .value("p_success_exact", p.to_string())
            })
            .collect());
    }
    let eval = evaluate_code(code, &decoder, a.n)?;
    Ok(eval
        .success()
        .into_iter()
        .enumerate()
        .map(|(i, p)| base(i).value("p_success", p).value("f_min", eval.f_min).value("f_avg", eval.f_avg))
        .collect())
}

fn reject_extra(a: &DesignArgs, allowed: &[&str]) -> Result<(), CliError> {
    let given = [
        ("q", a.q.is_some()),
        ("n", a.n.is_some()),
        ("parts", a.parts.is_some()),
        ("verify-grid", a.verify_grid.is_some()),
    ];
    for (name, present) in given {
        if present && !allowed.contains(&name) {
            return Err(CliError::Usage(format!("--{name} does not apply to this family")));
        }
    }
    Ok(())
}

fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("this family needs --{name}")))
}

pub fn design(a: &DesignArgs) -> Result<Records, CliError> {
    match a.family {
        FamilyArg::Binary4 => {
            reject_extra(a, &["n", "verify-grid"])?;
            let n = need(a.n, "n")?;
            let d = construct_binary4(n)?;
            let eval = evaluate_code(&d.code, &Decoder::Mld, n)?;
            let prov = if a.verify_grid.is_some() { Provenance::Oracle } else { Provenance::Formula };
            let mut rec = OutputRecord::new("design", prov)
                .param("family", "binary4")
                .param("n", n)
                .param("verify_grid", a.verify_grid)
                .value("code", render_code(&d.code))
                .value("alpha", d.alpha)
                .value("beta", d.beta)
                .value("f_min", eval.f_min)
                .value("f_avg", eval.f_avg);
            if let Some(step) = a.verify_grid {
                let g = optimize_binary4_grid(n, step)?;
                let agrees = (g.x_star - d.alpha).abs() <= step
                    || (d.alpha >= g.plateau.0 - step && d.alpha <= g.plateau.1 + step);
                rec = rec
                    .value("grid_x_star", g.x_star)
                    .value("grid_f_min", g.f_min_star)
                    .value("plateau_lo", g.plateau.0)
                    .value("plateau_hi", g.plateau.1)
                    .value("agrees", if agrees { "yes" } else { "no" });
            }
            Ok(vec![rec])
        }
        FamilyArg::Qplus1 => {
            reject_extra(a, &["q", "n"])?;
            let q = need(a.q, "q")?;
            let parsed = build_family(Family::Qplus1 { q })?;
            let mut rec = OutputRecord::new("design", Provenance::Formula)
                .param("family", "qplus1")
                .param("q", q)
                .param("n", a.n)
                .value("code", render_code(&parsed.code))
                .value("size", parsed.code.len());
            if let Some(n) = a.n {
                let (f_min, f_avg) = qplus1_figures(q, n)?;
                rec = rec.value("f_min", rational_to_f64(&f_min)).value("f_avg", rational_to_f64(&f_avg));
            }
            Ok(vec![rec])
        }
        FamilyArg::Omega => {
            reject_extra(a, &["q", "n"])?;
            let (n, q) = (need(a.n, "n")?, need(a.q, "q")?);
            let parsed = build_family(Family::Omega { n, q })?;
            let betas: Vec<BigRational> =
                enumerate_omega(n, q)?.iter().map(beta_weight_exact).collect();
            let min = betas.iter().min().cloned().unwrap_or_else(BigRational::zero);
            let sum: BigRational = betas.iter().sum();
            let mean = sum / BigRational::from_integer(betas.len().into());
            Ok(vec![OutputRecord::new("design", Provenance::Formula)
                .param("family", "omega")
                .param("n", n)
                .param("q", q)
                .value("code", render_code(&parsed.code))
                .value("size", parsed.code.len())
                .value("f_min", rational_to_f64(&min))
                .value("f_avg", rational_to_f64(&mean))])
        }
        FamilyArg::Distinct => {
            reject_extra(a, &["q", "parts"])?;
            let q = need(a.q, "q")?;
            let parts_spec = a
                .parts
                .clone()
                .ok_or_else(|| CliError::Usage("this family needs --parts".into()))?;
            let parts = parse_parts(&parts_spec, 0)?;
            let parsed = build_family(Family::Distinct { q, parts })?;
            Ok(vec![OutputRecord::new("design", Provenance::Formula)
                .param("family", "distinct")
                .param("q", q)
                .param("parts", parts_spec.as_str())
                .value("code", render_code(&parsed.code))
                .value("size", parsed.code.len())
                .value("f_min", 1.0)
                .value("f_avg", 1.0)])
        }
    }
}

