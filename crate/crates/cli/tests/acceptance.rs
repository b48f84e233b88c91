//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process fails if any criterion fails.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use cdna_core::coverage::*;
use cdna_core::mld::binary::{construct_binary4, optimize_binary4_grid, symmetric_reflect};
use cdna_core::mld::construct::{
    beta_weight, beta_weight_exact, construct_omega_code, construct_qplus1_exact, qplus1_figures,
};
use cdna_core::mld::exact::evaluate_code_exact;
use cdna_core::mld::likelihood::{log_likelihood, mld_decode_index};
use cdna_core::mld::*;
use cdna_core::model::{base_symbol, enumerate_omega, CompositeSymbol, ObservedDistribution};
use cdna_core::sim::{run_simulation, SimConfig, SimMode, SimReport};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

const SEED: u64 = 20240;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s as f64, || {
        format!("took {:.2}s, limit {limit_s}s", elapsed.as_secs_f64())
    })
}

fn simulate(params: CoverageParams, mode: SimMode, trials: u64) -> SimReport {
    run_simulation(&SimConfig::new(params, mode, trials, SEED)).expect("valid simulation")
}

/// `|mean - want| ≤ 4 SE`, with a rounding floor for zero-variance cases.
fn agrees(report: &SimReport, want: f64) -> bool {
    let se = report.std_error.unwrap_or(0.0);
    (report.mean - want).abs() <= (4.0 * se).max(1e-9)
}

fn c1() -> Check {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for ell in 1..=20 {
        let closed = expected_coverage_closed_w2(ell).map_err(|e| e.to_string())?;
        let series = expected_coverage(ell, 2, 1e-13).map_err(|e| e.to_string())?;
        worst = worst.max((closed - series).abs());
    }
    ensure(worst <= 1e-9, || format!("max |closed - series| = {worst:e}"))?;
    within_time(start.elapsed(), 1)?;
    Ok(format!("max |closed - series| = {worst:.2e} over ℓ = 1..20"))
}

fn c2() -> Check {
    let start = Instant::now();
    let mut offsets = Vec::new();
    let mut ell = 64;
    while ell <= 4096 {
        let e = expected_coverage(ell, 2, 1e-12).map_err(|e| e.to_string())?;
        offsets.push(e - (ell as f64).log2());
        ell *= 2;
    }
    let worst = offsets.iter().map(|o| (o - 2.333).abs()).fold(0.0, f64::max);
    ensure(worst <= 0.05, || format!("offsets {offsets:?}"))?;
    within_time(start.elapsed(), 10)?;
    Ok(format!(
        "E(ℓ,2) - log2 ℓ in [{:.4}, {:.4}] for ℓ = 64..4096",
        offsets.iter().copied().fold(f64::INFINITY, f64::min),
        offsets.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    ))
}

fn c3() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for omega in 2..=4 {
        for p in 0..=10 {
            let ell = 1u64 << p;
            let e = expected_coverage(ell, omega, 1e-12).map_err(|e| e.to_string())?;
            let b = coverage_bounds(ell, omega).map_err(|e| e.to_string())?;
            ensure(b.contains(e), || format!("ℓ={ell} ω={omega}: {e} outside {b:?}"))?;
            if omega == 2 {
                let gap = b.upper - (ell as f64).log2();
                ensure((gap - 3.443).abs() < 5e-4, || format!("upper - log2 ℓ = {gap}"))?;
            }
            count += 1;
        }
    }
    within_time(start.elapsed(), 10)?;
    Ok(format!("{count} (ℓ, ω) points inside bounds; ω=2 upper = log2 ℓ + 3.4427"))
}

fn c4() -> Check {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for ell in 1..=8 {
        for omega in 2..=4 {
            let e = expected_coverage(ell, omega, 1e-12).map_err(|e| e.to_string())?;
            let report = simulate(CoverageParams::new(ell, omega).unwrap(), SimMode::Full, 100_000);
            let z = (report.mean - e).abs() / report.std_error.unwrap();
            worst = worst.max(z);
            ensure(agrees(&report, e), || format!("ℓ={ell} ω={omega}: {} vs {e}", report.mean))?;
        }
    }
    within_time(start.elapsed(), 60)?;
    Ok(format!("24 grid points, 1e5 trials each, max |z| = {worst:.2}"))
}

fn c5() -> Check {
    let start = Instant::now();
    let e = expected_coverage_partial(2, 2, 1, 1e-12).map_err(|e| e.to_string())?;
    // the first read shows one symbol per index; the faster of two
    // Geometric(1/2) waits for the second symbol takes 4/3 reads on average
    ensure((e - 7.0 / 3.0).abs() <= 1e-6, || format!("E(2,2;1) = {e}"))?;
    let mut sims = 0;
    for ell in 1..=5 {
        for omega in 1..=3 {
            let full = expected_coverage(ell, omega, 1e-12).map_err(|e| e.to_string())?;
            for r in 1..=ell {
                let part = expected_coverage_partial(ell, omega, r, 1e-12).map_err(|e| e.to_string())?;
                if r == ell {
                    ensure((part - full).abs() <= 1e-6, || format!("ℓ={ell} ω={omega}: {part} vs {full}"))?;
                }
                let params = CoverageParams::new(ell, omega).unwrap().with_r(r).unwrap();
                let report = simulate(params, SimMode::Partial, 100_000);
                ensure(agrees(&report, part), || {
                    format!("ℓ={ell} ω={omega} r={r}: simulated {} vs {part}", report.mean)
                })?;
                sims += 1;
            }
        }
    }
    within_time(start.elapsed(), 60)?;
    Ok(format!("E(2,2;1) = {e:.9}; E(ℓ,ω;ℓ) = E(ℓ,ω); {sims} simulations agree"))
}

fn c6() -> Check {
    let start = Instant::now();
    for ell in [1, 2, 7, 100] {
        for omega in 1..=4 {
            let e = expected_coverage(ell, omega, 1e-12).map_err(|e| e.to_string())?;
            for k in 1..=5 {
                let ra = random_access_expectation(ell, omega, k, 1e-12).map_err(|e| e.to_string())?;
                ensure(ra == k as f64 * e, || format!("RA({ell},{omega},{k}) = {ra}"))?;
            }
        }
    }
    let mut means = Vec::new();
    for k in 1..=3 {
        let params = CoverageParams::new(1, 2).unwrap().with_k(k).unwrap();
        let report = simulate(params, SimMode::RandomAccess, 100_000);
        ensure(agrees(&report, 3.0 * k as f64), || format!("k={k}: {}", report.mean))?;
        means.push(report.mean);
    }
    within_time(start.elapsed(), 30)?;
    Ok(format!("RA = k·E exactly; simulated k=1..3: {means:.3?}"))
}

fn c7() -> Check {
    let start = Instant::now();
    let code = CompositeCode::from_binary(&[0.4, 0.5, 0.6]).unwrap();
    let mld = evaluate_code(&code, &Decoder::Mld, 10).map_err(|e| e.to_string())?;
    let s = mld.success();
    for (got, want) in s.iter().zip([0.633, 0.246, 0.633]) {
        ensure((got - want).abs() <= 5e-4, || format!("MLD per-symbol {s:?}"))?;
    }
    let mut table = BTreeMap::new();
    table.insert(ObservedDistribution::new(vec![0, 10]).unwrap(), code.symbol(1).clone());
    let dprime = custom_decoder_from_table(&code, 10, &table).map_err(|e| e.to_string())?;
    let alt = evaluate_code(&code, &dprime, 10).map_err(|e| e.to_string())?;
    ensure((alt.f_min - 0.247).abs() <= 5e-4, || format!("D' f_min = {}", alt.f_min))?;
    ensure(alt.f_min > mld.f_min, || "D' does not beat MLD".into())?;
    within_time(start.elapsed(), 1)?;
    Ok(format!(
        "MLD ({:.4}, {:.4}, {:.4}); table decoder f_min {:.4} > {:.4}",
        s[0], s[1], s[2], alt.f_min, mld.f_min
    ))
}

fn c8() -> Check {
    let start = Instant::now();
    for q in 2..=3 {
        let code = construct_qplus1_exact(q).map_err(|e| e.to_string())?;
        for n in 1..=8 {
            let eval = evaluate_code_exact(&code, &Decoder::Mld, n).map_err(|e| e.to_string())?;
            let (f_min, f_avg) = qplus1_figures(q, n).map_err(|e| e.to_string())?;
            ensure(eval.f_min == f_min && eval.f_avg == f_avg, || {
                format!("q={q} n={n}: ({}, {}) vs ({f_min}, {f_avg})", eval.f_min, eval.f_avg)
            })?;
        }
    }
    let cases = [(1u32, 4usize), (2, 2), (6, 2), (40, 2), (400, 2), (3, 3), (12, 3), (40, 3), (5, 4), (15, 4), (6, 5)];
    for (n, q) in cases {
        let omega = enumerate_omega(n, q).map_err(|e| e.to_string())?;
        if omega.len() > 10_000 {
            return Err(format!("case n={n} q={q} too large"));
        }
        let betas: Vec<f64> = omega
            .iter()
            .map(|t| cdna_core::combinatorics::rational_to_f64(&beta_weight_exact(t)))
            .collect();
        let min = betas.iter().copied().fold(f64::INFINITY, f64::min);
        let mean = betas.iter().sum::<f64>() / betas.len() as f64;
        let code = construct_omega_code(n, q).map_err(|e| e.to_string())?;
        let eval = evaluate_code(&code, &Decoder::Mld, n).map_err(|e| e.to_string())?;
        ensure((eval.f_min - min).abs() < 1e-12 && (eval.f_avg - mean).abs() < 1e-12, || {
            format!("n={n} q={q}: ({}, {}) vs ({min}, {mean})", eval.f_min, eval.f_avg)
        })?;
    }
    for (q, n) in [(2usize, 2u32), (2, 4), (2, 6), (2, 8), (3, 3), (3, 6)] {
        let omega = enumerate_omega(n, q).unwrap();
        let r = n / q as u32;
        let balanced = omega.iter().find(|t| t.counts().iter().all(|&c| c == r)).unwrap();
        let b_bal = beta_weight_exact(balanced);
        ensure(omega.iter().all(|t| beta_weight_exact(t) >= b_bal), || {
            format!("q={q} n={n}: balanced point is not the minimum")
        })?;
        let mut closed = num_rational::BigRational::from_integer(
            cdna_core::combinatorics::multinomial(balanced.counts()).into(),
        );
        closed /= num_rational::BigRational::from_integer(num_bigint::BigInt::from(q).pow(n));
        ensure(b_bal == closed, || format!("q={q} n={n}: {b_bal} vs {closed}"))?;
    }
    within_time(start.elapsed(), 30)?;
    Ok(format!(
        "q+1 code exact for q=2,3, n=1..8; {} Ω-codes match min/mean β; balanced minimum in 6 cases",
        cases.len()
    ))
}

fn c9() -> Check {
    let start = Instant::now();
    let mut report = Vec::new();
    for n in [2u32, 3, 4, 5, 10] {
        let alpha = construct_binary4(n).map_err(|e| e.to_string())?.alpha;
        let g = optimize_binary4_grid(n, 1e-4).map_err(|e| e.to_string())?;
        // a flat objective makes every point of the plateau a maximizer
        let (lo, hi) = g.plateau;
        ensure(alpha >= lo - 2e-4 && alpha <= hi + 2e-4, || {
            format!("n={n}: α={alpha}, grid maximizers {lo}..{hi}")
        })?;
        report.push(format!("n={n}: α={alpha:.4} x*={:.4}", g.x_star));
    }
    let alphas: Vec<f64> = (2..=200).map(|n| construct_binary4(n).unwrap().alpha).collect();
    // α(n) sits at index n - 2
    for n in 3..=198usize {
        let (a, b) = (alphas[n - 2], alphas[n]);
        ensure(b < a, || format!("α({}) = {b} ≥ α({n}) = {a}", n + 2))?;
    }
    let last = alphas[198];
    ensure((last - 0.2).abs() <= 0.01, || format!("α(200) = {last}"))?;
    within_time(start.elapsed(), 120)?;
    Ok(format!("{}; α decreases along each parity, α(200) = {last:.4}", report.join(", ")))
}

fn random_symbol(rng: &mut ChaCha8Rng, q: usize) -> CompositeSymbol {
    loop {
        let w: Vec<u32> = (0..q).map(|_| rng.random_range(0..=12)).collect();
        let total: u32 = w.iter().sum();
        if total > 0 {
            return CompositeSymbol::new(w.iter().map(|&x| f64::from(x) / f64::from(total)).collect())
                .unwrap();
        }
    }
}

fn random_code(rng: &mut ChaCha8Rng, m: usize, q: usize) -> CompositeCode {
    let m = if q == 1 { 1 } else { m };
    let mut symbols: Vec<CompositeSymbol> = Vec::new();
    while symbols.len() < m {
        let s = random_symbol(rng, q);
        if !symbols.contains(&s) {
            symbols.push(s);
        }
    }
    CompositeCode::new(symbols).unwrap()
}

fn random_binary(rng: &mut ChaCha8Rng, m: usize) -> CompositeCode {
    let mut values: Vec<u32> = Vec::new();
    while values.len() < m {
        let v = rng.random_range(0..=1000);
        if !values.contains(&v) {
            values.push(v);
        }
    }
    let floats: Vec<f64> = values.iter().map(|&v| f64::from(v) / 1000.0).collect();
    CompositeCode::from_binary(&floats).unwrap()
}

fn region_partition(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..100 {
        let (q, m, n) = (rng.random_range(1..=4), rng.random_range(1..=5), rng.random_range(1..=8));
        let code = random_code(rng, m, q);
        let mut all: Vec<_> = decoding_regions(&code, &Decoder::Mld, n).unwrap().into_iter().flatten().collect();
        all.sort();
        ensure(all == enumerate_omega(n, q).unwrap(), || format!("{code} n={n}"))?;
    }
    Ok(())
}

fn n_independence(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..100 {
        let q = rng.random_range(2..=3);
        let m = rng.random_range(1..=5);
        let code = random_code(rng, m, q);
        let n1 = rng.random_range(1..=12u32);
        for k in 2..=24 / n1 {
            for t in enumerate_omega(n1, q).unwrap() {
                let a = mld_decode_index(&code, &t).unwrap();
                let b = mld_decode_index(&code, &t.scaled(k)).unwrap();
                ensure(a == b, || format!("{code}: {t} at n={n1} vs ×{k}"))?;
            }
        }
    }
    Ok(())
}

fn self_decoding(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..100 {
        let (q, n) = (rng.random_range(2..=3), rng.random_range(1..=8));
        let omega = enumerate_omega(n, q).unwrap();
        let symbols: Vec<CompositeSymbol> =
            omega.iter().filter(|_| rng.random_bool(0.5)).map(|t| t.to_symbol()).collect();
        if symbols.is_empty() {
            continue;
        }
        let code = CompositeCode::new(symbols).unwrap();
        for t in &omega {
            if let Some(i) = code.index_of(&t.to_symbol()) {
                ensure(mld_decode_index(&code, t).unwrap() == i, || format!("{code}: {t}"))?;
            }
        }
    }
    Ok(())
}

fn average_dominance(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..200 {
        let (q, m, n) = (rng.random_range(1..=3), rng.random_range(1..=5), rng.random_range(1..=6));
        let code = random_code(rng, m, q);
        let best = evaluate_code(&code, &Decoder::Mld, n).unwrap().f_avg;
        let omega = enumerate_omega(n, q).unwrap();
        for _ in 0..20 {
            let table = omega.iter().map(|t| (t.clone(), rng.random_range(0..code.len()))).collect();
            let d = Decoder::Table(TableDecoder::new(&code, n, table).unwrap());
            let other = evaluate_code(&code, &d, n).unwrap().f_avg;
            ensure(best >= other - 1e-12, || format!("{code} n={n}: {best} < {other}"))?;
        }
    }
    Ok(())
}

fn base_perfection(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..100 {
        let (q, n) = (rng.random_range(2..=4), rng.random_range(1..=8));
        let e = base_symbol(q, rng.random_range(1..=q)).unwrap();
        let m = rng.random_range(1..=4);
        let mut symbols = random_code(rng, m, q).symbols().to_vec();
        if !symbols.contains(&e) {
            symbols.push(e.clone());
        }
        let code = CompositeCode::new(symbols).unwrap();
        let p = evaluate_code(&code, &Decoder::Mld, n).unwrap().success()[code.index_of(&e).unwrap()];
        ensure((p - 1.0).abs() < 1e-12, || format!("{code} n={n}: {p}"))?;
    }
    Ok(())
}

fn near_tie(code: &CompositeCode, t: &ObservedDistribution) -> bool {
    let mut s: Vec<f64> = code.symbols().iter().map(|c| log_likelihood(c, t).unwrap()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s.len() > 1 && s[0].is_finite() && s[0] - s[1] < 1e-9
}

fn reflect(t: &ObservedDistribution) -> ObservedDistribution {
    let mut c = t.counts().to_vec();
    c.reverse();
    ObservedDistribution::new(c).unwrap()
}

fn reflection_equivariance(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let mut checked = 0;
    while checked < 100 {
        let m = rng.random_range(1..=6);
        let code = random_binary(rng, m);
        if code.is_symmetric() {
            continue;
        }
        let mirror = symmetric_reflect(&code).unwrap();
        let n = rng.random_range(1..=12);
        let regions = decoding_regions(&code, &Decoder::Mld, n).unwrap();
        let mirrored = decoding_regions(&mirror, &Decoder::Mld, n).unwrap();
        for (i, region) in regions.iter().enumerate() {
            let mut want: Vec<_> = region.iter().filter(|t| !near_tie(&code, t)).map(reflect).collect();
            want.sort();
            let got: Vec<_> =
                mirrored[m - 1 - i].iter().filter(|t| !near_tie(&mirror, t)).cloned().collect();
            ensure(got == want, || format!("{code} n={n}, codeword {}", i + 1))?;
        }
        checked += 1;
    }
    Ok(())
}

fn symmetric_lower_half(rng: &mut ChaCha8Rng, half: usize) -> Vec<f64> {
    let mut lower: Vec<u32> = Vec::new();
    while lower.len() < half {
        let v = rng.random_range(0..500);
        if !lower.contains(&v) {
            lower.push(v);
        }
    }
    lower.iter().map(|&v| f64::from(v) / 1000.0).collect()
}

fn mirrored_code(lower: &[f64], with_mid: bool) -> CompositeCode {
    let mut symbols = Vec::new();
    for &x in lower {
        let s = CompositeSymbol::binary(x).unwrap();
        symbols.push(s.reflected());
        symbols.push(s);
    }
    if with_mid {
        symbols.push(CompositeSymbol::binary(0.5).unwrap());
    }
    CompositeCode::new(symbols).unwrap()
}

fn symmetric_pairing(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..150 {
        let half = rng.random_range(1..=3);
        let with_mid = rng.random_bool(0.5);
        let code = mirrored_code(&symmetric_lower_half(rng, half), with_mid);
        // without 1/2 in the code, an even n has an exact tie at θ = 1/2
        let n = if with_mid { rng.random_range(1..=12) } else { 2 * rng.random_range(0..6) + 1 };
        let s = evaluate_code(&code, &Decoder::Mld, n).unwrap().success();
        for i in 0..s.len() {
            ensure((s[i] - s[s.len() - 1 - i]).abs() < 1e-12, || format!("{code} n={n}: {s:?}"))?;
        }
    }
    Ok(())
}

fn symmetrization(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let mut checked = 0;
    while checked < 150 {
        let m = rng.random_range(1..=3);
        let code = random_binary(rng, 2 * m);
        let v = code.binary_values().unwrap();
        if v[m - 1] >= 0.5 || 1.0 - v[m - 1] < v[m] {
            continue;
        }
        let sym = mirrored_code(&v[..m], false);
        let n = 2 * rng.random_range(0..7) + 1;
        let before = evaluate_code(&code, &Decoder::Mld, n).unwrap().f_min;
        let after = evaluate_code(&sym, &Decoder::Mld, n).unwrap().f_min;
        ensure(after >= before - 1e-12, || format!("{code} → {sym} n={n}: {after} < {before}"))?;
        checked += 1;
    }
    Ok(())
}

fn neighbour_regions(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..150 {
        let m = rng.random_range(1..=6);
        let code = random_binary(rng, m);
        let c = code.binary_values().unwrap();
        let n = rng.random_range(1..=16);
        for t in enumerate_omega(n, 2).unwrap() {
            let x = t.theta()[0];
            let d = mld_decode_index(&code, &t).unwrap();
            let ok = if x <= c[0] {
                d == 0
            } else if x >= c[m - 1] {
                d == m - 1
            } else {
                (0..m - 1).filter(|&i| c[i] <= x && x <= c[i + 1]).all(|i| d == i || d == i + 1)
            };
            ensure(ok, || format!("{code} n={n}: θ={x} decoded to {}", c[d]))?;
        }
    }
    Ok(())
}

fn set_cover_counts(m: u32, r: u32) -> Vec<u64> {
    let family: Vec<u32> = (0u32..1 << m).filter(|s| s.count_ones() == r).collect();
    let full = (1u32 << m) - 1;
    let mut counts = vec![0u64; family.len() + 1];
    for pick in 0u64..1 << family.len() {
        let union = family
            .iter()
            .enumerate()
            .filter(|(i, _)| pick >> i & 1 == 1)
            .fold(0, |u, (_, s)| u | s);
        if union == full {
            counts[pick.count_ones() as usize] += 1;
        }
    }
    counts
}

fn alpha_oracle() -> Result<(), String> {
    for m in 1..=6u32 {
        for r in 1..=m {
            for (j, &want) in set_cover_counts(m, r).iter().enumerate().skip(1) {
                let got = alpha_count(6, r as u64, m as u64, j as u64).map_err(|e| e.to_string())?;
                ensure(got == BigUint::from(want), || format!("α(m={m}, r={r}, j={j}) = {got}, brute force {want}"))?;
            }
        }
    }
    Ok(())
}

fn c10() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let suites: [(&str, fn(&mut ChaCha8Rng) -> Result<(), String>); 9] = [
        ("partition", region_partition),
        ("n-independence", n_independence),
        ("self-decoding", self_decoding),
        ("f_avg dominance", average_dominance),
        ("base perfection", base_perfection),
        ("reflection", reflection_equivariance),
        ("symmetric pairing", symmetric_pairing),
        ("symmetrization", symmetrization),
        ("neighbour regions", neighbour_regions),
    ];
    for (name, suite) in suites {
        suite(&mut rng).map_err(|e| format!("{name}: {e}"))?;
    }
    alpha_oracle().map_err(|e| format!("alpha oracle: {e}"))?;
    // one sanity value on self weights
    let half = CompositeSymbol::binary(0.5).unwrap();
    ensure((beta_weight(&half, 2).unwrap() - 0.5).abs() < 1e-15, || "β".into())?;
    within_time(start.elapsed(), 120)?;
    Ok("9 decoding suites and the set-cover oracle hold".into())
}

fn cdna(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_cdna"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(out.stdout)
}

fn c11() -> Check {
    let base = ["sim", "--ell", "64", "--omega", "3", "--trials", "20000", "--seed", "7"];
    let mut runs = 0;
    for extra in [
        &["--mode", "recovery"][..],
        &["--mode", "partial", "--r", "10"][..],
        &["--mode", "ra", "--k", "3"][..],
    ] {
        for format in ["csv", "json"] {
            let mut reference: Option<Vec<u8>> = None;
            for threads in [None, Some("1"), Some("2"), Some("4"), None] {
                let mut args: Vec<&str> = base.to_vec();
                args.extend(extra);
                args.extend(["--format", format]);
                if let Some(t) = threads {
                    args.extend(["--threads", t]);
                }
                let out = cdna(&args)?;
                match &reference {
                    None => reference = Some(out),
                    Some(r) => ensure(*r == out, || format!("{args:?} differs"))?,
                }
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} invocations byte-identical across runs and thread counts"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("closed form vs series", c1),
        ("log-offset reproduction", c2),
        ("bound sandwich", c3),
        ("Monte Carlo agreement", c4),
        ("partial recovery", c5),
        ("random access", c6),
        ("decoder counterexample", c7),
        ("closed-form constructions", c8),
        ("binary size-4 optimum", c9),
        ("property suites", c10),
        ("determinism", c11),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.2}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
