//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::FRAC_PI_2;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rug::Float;

use neumann_sto::cli::{cmd_table, mantissa, table_rows, ReferenceRow, RunOptions};
use neumann_sto::hp_oracle::{
    oracle_basic, oracle_l, oracle_neumann_sum, oracle_omega_remainder, oracle_w, BasicIntegral, NeumannOracleRequest, OracleConfig,
};
use neumann_sto::lmu_engine::{l_base_table, raise_p_and_sigma};
use neumann_sto::neumann_driver::{eta_integral, eta_integral_seq, k_integral, neumann_sum, GenericIntegralRequest, DEFAULT_MU_SWITCH};
use neumann_sto::special_fn::{bessel_i_seq, bessel_k_seq};
use neumann_sto::wmu_engine::{
    kotani_inputs, omega_remainder_bound, raise_sigma_w, w_direct, w_general, w_sigma_large_order, BasicIntegralCache, WParams, WTable,
};
use neumann_sto::ExpansionSettings;

const TABLE_DIGITS: f64 = 13.0;
const TERM_SLACK: usize = 4;
const TERM_CAP: usize = 200;
const TABLE1_SECONDS: f64 = 1.0;
const TABLE23_SECONDS: f64 = 5.0;
const HALVING_TOL: f64 = 1e-30;
const WRONSKIAN_TOL: f64 = 1e-12;
const ODE_TOL: f64 = 1e-10;
const RECURSION_TOL: f64 = 1e-10;
const SEAM_TOL: f64 = 1e-11;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn digits(rel_err: f64) -> f64 {
    if rel_err == 0.0 {
        17.0
    } else {
        -rel_err.log10()
    }
}

fn label(r: &ReferenceRow) -> String {
    match r.alpha2 {
        Some(a2) => format!("({},{},{})", r.alpha1, a2, r.mu),
        None => format!("({},{})", r.alpha1, r.mu),
    }
}

fn oracle_cfg() -> OracleConfig {
    OracleConfig::default()
}

fn oracle_for(r: &ReferenceRow) -> Result<f64, String> {
    let cfg = oracle_cfg();
    let v = match r.alpha2 {
        None => oracle_l(r.mu, 0, r.p, r.alpha1, &cfg),
        Some(a2) => oracle_w(&WParams::new(r.p, 0, 0, r.alpha1, a2, r.mu).map_err(|e| e.to_string())?, &cfg),
    };
    v.map(|v| v.to_f64()).map_err(|e| e.to_string())
}

/// Criteria 1 to 3.
fn table_criterion(which: u8, check_terms: bool, seconds: f64) -> Outcome {
    let refs = table_rows(which).map_err(|e| e.to_string())?;
    let opts = RunOptions { settings: ExpansionSettings { max_terms: TERM_CAP, ..ExpansionSettings::default() }, ..RunOptions::default() };
    let start = Instant::now();
    let run = cmd_table(which, &opts).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();
    let mut problems = Vec::new();
    let (mut convergent, mut matched, mut divergent, mut flagged) = (0, 0, 0, 0);
    for (r, row) in refs.iter().zip(&run.report.rows) {
        let Some(x) = row.fast_value else {
            problems.push(format!("{} raised: {}", label(r), row.note));
            continue;
        };
        if r.published_divergent() {
            divergent += 1;
            if row.converged {
                problems.push(format!("{} converged but is published divergent", label(r)));
            } else {
                flagged += 1;
            }
            continue;
        }
        convergent += 1;
        if !row.converged {
            problems.push(format!("{} flagged divergent after {} terms, published {:?} terms", label(r), row.terms_used, r.terms));
            continue;
        }
        let d = digits(r.rel_deviation(x));
        if d < TABLE_DIGITS {
            let o = oracle_for(r).map(|o| format!("{:.1}", digits(rel(x, o)))).unwrap_or_else(|e| e);
            problems.push(format!("{} {:.1} digits vs published (computed value agrees with oracle to {o} digits)", label(r), d));
            continue;
        }
        if check_terms {
            if let Some(t) = r.terms {
                if row.terms_used.abs_diff(t) > TERM_SLACK {
                    problems.push(format!("{} used {} terms, published {t}", label(r), row.terms_used));
                    continue;
                }
            }
        }
        matched += 1;
    }
    if elapsed >= seconds {
        problems.push(format!("runtime {elapsed:.2} s exceeds {seconds} s"));
    }
    let summary = format!("{matched}/{convergent} convergent rows matched, {flagged}/{divergent} divergent rows flagged, {elapsed:.3} s");
    if problems.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; {}", problems.join("; ")))
    }
}

/// Half a unit in the 15th significant digit, on the mantissa.
fn printed_digits_match(value: f64, printed: f64) -> bool {
    (mantissa(value) - mantissa(printed)).abs() <= 5e-15 + 4.0 * f64::EPSILON * mantissa(printed).abs()
}

fn criterion_4() -> Outcome {
    let cfg = oracle_cfg();
    let halved = cfg.halved();
    let mut rows = Vec::new();
    for t in 1..=3 {
        rows.extend(table_rows(t).map_err(|e| e.to_string())?);
    }
    let start = Instant::now();
    let mut misses = Vec::new();
    let mut worst_halving: f64 = 0.0;
    for r in &rows {
        let (a, b) = match r.alpha2 {
            None => (oracle_l(r.mu, 0, r.p, r.alpha1, &cfg), oracle_l(r.mu, 0, r.p, r.alpha1, &halved)),
            Some(a2) => {
                let w = WParams::new(r.p, 0, 0, r.alpha1, a2, r.mu).map_err(|e| e.to_string())?;
                (oracle_w(&w, &cfg), oracle_w(&w, &halved))
            }
        };
        let (a, b) = (a.map_err(|e| e.to_string())?, b.map_err(|e| e.to_string())?);
        worst_halving = worst_halving.max(a.rel_diff_mp(&b));
        let v = a.to_f64();
        let same_exponent = r.suspect_exponent || (v.abs().log10().floor() == r.exact.abs().log10().floor());
        if !(same_exponent && printed_digits_match(v, r.exact)) {
            let units = (mantissa(v) - mantissa(r.exact)).abs() * 1e14;
            let gap = if !same_exponent {
                "exponent differs".to_string()
            } else if units < 100.0 {
                format!("{units:.0} units in the 15th digit")
            } else {
                format!("relative {:.1e}", rel(v, r.exact))
            };
            misses.push(format!("T{} {} oracle {v:.14e} printed {:.14e} ({gap})", r.table, label(r), r.exact));
        }
    }
    let summary = format!(
        "{}/{} printed values reproduced, worst halving change {worst_halving:.1e}, {:.1} s",
        rows.len() - misses.len(),
        rows.len(),
        start.elapsed().as_secs_f64()
    );
    if worst_halving >= HALVING_TOL {
        misses.push(format!("halving change {worst_halving:.1e} exceeds {HALVING_TOL:e}"));
    }
    if misses.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; {}", misses.join("; ")))
    }
}

fn criterion_5() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for &alpha in &[0.1, 1.0, 5.0, 10.0, 30.0, 50.0] {
        let i = bessel_i_seq(81, alpha).map_err(|e| e.to_string())?;
        let k = bessel_k_seq(81, alpha).map_err(|e| e.to_string())?;
        let target = FRAC_PI_2 / (alpha * alpha);
        for mu in 1..=80 {
            let m = mu as f64;
            let di = i[mu + 1] + m / alpha * i[mu];
            let dk = -k[mu + 1] + m / alpha * k[mu];
            let w = i[mu] * dk - di * k[mu];
            worst = worst.max((w + target).abs() / target);
            count += 1;
        }
    }
    let summary = format!("{count} (mu, alpha) pairs, worst relative defect {worst:.1e}");
    if worst <= WRONSKIAN_TOL {
        Ok(summary)
    } else {
        Err(summary)
    }
}

/// `a²F'' + 2aF' - [μ(μ+1)+a²]F + g`, relative to `g`.
fn ode_defect(f: [Float; 3], a: f64, mu: usize, g: &Float) -> f64 {
    let bits = f[0].prec();
    let af = Float::with_val(bits, a);
    let a2 = Float::with_val(bits, &af * &af);
    let c = Float::with_val(bits, &a2 + (mu * (mu + 1)) as u64);
    let r = a2 * &f[2] + Float::with_val(bits, &af * 2u32) * &f[1] - c * &f[0] + g;
    (r / g).to_f64().abs()
}

fn criterion_6() -> Outcome {
    let cfg = oracle_cfg();
    let err = |e: neumann_sto::Error| e.to_string();
    let mut worst_l: f64 = 0.0;
    let l_grid = [(0, 0.5), (1, 1.0), (5, 2.0), (10, 0.1), (20, 5.0), (30, 1.0), (30, 30.0), (40, 10.0), (50, 20.0), (60, 1.0)];
    for (mu, a) in l_grid {
        let f = [0, 1, 2].map(|p| oracle_l(mu, 0, p, a, &cfg).map(|v| v.value));
        let [f0, f1, f2] = f;
        let (f0, f1, f2) = (f0.map_err(err)?, f1.map_err(err)?, f2.map_err(err)?);
        // raising p by one is -d/dα
        let f1 = -f1;
        let g = Float::with_val(f0.prec(), -a).exp();
        worst_l = worst_l.max(ode_defect([f0, f1, f2], a, mu, &g));
    }
    let mut worst_w: f64 = 0.0;
    let w_grid = [
        (0, 1.0, 1.0, 5),
        (0, 1.0, 2.0, 10),
        (1, 2.0, 0.5, 15),
        (2, 1.0, 5.0, 20),
        (3, 0.5, 3.0, 25),
        (0, 5.0, 10.0, 30),
        (8, 5.0, 10.0, 30),
        (4, 2.0, 8.0, 40),
        (0, 1.0, 1.0, 50),
        (8, 10.0, 10.0, 60),
    ];
    for (p, a1, a2, mu) in w_grid {
        let w = |p2| WParams::new(p, p2, 0, a1, a2, mu).and_then(|w| oracle_w(&w, &cfg)).map(|v| v.value);
        let (f0, f1, f2) = (w(0).map_err(err)?, -w(1).map_err(err)?, w(2).map_err(err)?);
        let g = oracle_basic(&BasicIntegral::En { n: -(p as i64), z: a1 + a2 }, &cfg).map_err(err)?.value;
        worst_w = worst_w.max(ode_defect([f0, f1, f2], a2, mu, &g));
    }
    let summary = format!("worst L defect {worst_l:.1e}, worst W defect {worst_w:.1e} on 10 points each");
    if worst_l <= ODE_TOL && worst_w <= ODE_TOL {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn criterion_7() -> Outcome {
    let cfg = oracle_cfg();
    let mut rng = StdRng::seed_from_u64(0x5eed_0007);
    let mut within = 0;
    let mut worst: f64 = 0.0;
    let mut problems = Vec::new();
    for _ in 0..50 {
        let n = rng.gen_range(20..=80);
        let p = rng.gen_range(0..=8);
        let a1: f64 = rng.gen_range(0.2..20.0);
        let a2: f64 = rng.gen_range(0.2..20.0);
        let terms = rng.gen_range(0..=8);
        let r = oracle_omega_remainder(n, p, terms, a1, a2, &cfg).map_err(|e| e.to_string())?.to_f64();
        let bound = omega_remainder_bound(n, p, terms, a1, a2);
        worst = worst.max(r.abs() / bound);
        if r.abs() <= bound {
            within += 1;
        } else {
            problems.push(format!("n={n} p={p} N={terms} a1={a1:.3} a2={a2:.3}: {r:e} > {bound:e}"));
        }
    }
    let summary = format!("{within}/50 samples within the bound, largest remainder/bound {worst:.3}");
    if problems.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; {}", problems.join("; ")))
    }
}

fn criterion_8() -> Outcome {
    let cfg = oracle_cfg();
    let settings = ExpansionSettings::default();
    let err = |e: neumann_sto::Error| e.to_string();
    let mut report = Vec::new();
    let mut failed = Vec::new();
    let mut record = |name: &str, pairs: Vec<(f64, f64)>| {
        let worst = pairs.iter().map(|&(x, o)| rel(x, o)).fold(0.0, f64::max);
        let line = format!("{name} {:.1e} over {}", worst, pairs.len());
        if worst > RECURSION_TOL || pairs.len() < 5 {
            failed.push(line.clone());
        }
        report.push(line);
    };

    let mut pairs = Vec::new();
    for &alpha in &[0.5, 2.0, 10.0] {
        let base = l_base_table(40, alpha, &settings, DEFAULT_MU_SWITCH).map_err(err)?;
        let table = raise_p_and_sigma(&base, 30, 3, 3).map_err(err)?;
        for (mu, p, sigma) in [(5, 1, 0), (12, 2, 1), (30, 3, 3)] {
            let o = oracle_l(mu, sigma, p, alpha, &cfg).map_err(err)?.to_f64();
            pairs.push((table.get(mu, p, sigma).ok_or("missing table entry")?, o));
        }
    }
    record("raise_p_and_sigma", pairs);

    let mut pairs = Vec::new();
    for &(a1, a2) in &[(1.0, 2.0), (3.0, 1.5)] {
        let sigma1: Vec<(usize, usize, usize)> = vec![(8, 0, 0), (10, 1, 0), (12, 0, 2)];
        let sigma2: Vec<(usize, usize, usize)> = vec![(9, 0, 0), (11, 1, 1)];
        let mid = {
            let mut t = sigma1.clone();
            t.extend(kotani_inputs(&sigma2, 1));
            t.sort_unstable();
            t.dedup();
            t
        };
        let mut level0 = WTable::new(0);
        for (mu, p1, p2) in kotani_inputs(&mid, 0) {
            level0.insert(mu, p1, p2, w_direct(&WParams::new(p1, p2, 0, a1, a2, mu).map_err(err)?).map_err(err)?);
        }
        let level1 = raise_sigma_w(&level0, &mid).map_err(err)?;
        let level2 = raise_sigma_w(&level1, &sigma2).map_err(err)?;
        for (level, targets, sigma) in [(&level1, &sigma1, 1), (&level2, &sigma2, 2)] {
            for &(mu, p1, p2) in targets {
                let o = oracle_w(&WParams::new(p1, p2, sigma, a1, a2, mu).map_err(err)?, &cfg).map_err(err)?.to_f64();
                pairs.push((level.get(mu, p1, p2).ok_or("missing table entry")?, o));
            }
        }
    }
    record("raise_sigma_w", pairs);

    let mut pairs = Vec::new();
    for (p1, p2, a1, a2, mu) in [(0, 0, 1.0, 1.0, 30), (0, 1, 1.0, 1.0, 30), (2, 2, 1.0, 5.0, 40), (8, 0, 5.0, 10.0, 60), (3, 1, 2.0, 0.5, 35), (1, 4, 0.5, 3.0, 50)] {
        let x = w_general(p1, p2, a1, a2, mu, &settings).map_err(err)?.value;
        let o = oracle_w(&WParams::new(p1, p2, 0, a1, a2, mu).map_err(err)?, &cfg).map_err(err)?.to_f64();
        pairs.push((x, o));
    }
    record("w_general", pairs);

    let mut pairs = Vec::new();
    for (mu, sigma, q, beta) in [(10, 0, 0, 2.5), (4, 1, 2, -1.5), (20, 3, 1, 6.0), (7, 2, 3, 0.4), (15, 0, 2, -8.0)] {
        let o = oracle_basic(&BasicIntegral::Eta { mu, sigma, q, beta }, &cfg).map_err(err)?.to_f64();
        pairs.push((eta_integral(mu, sigma, q, beta).map_err(err)?, o));
    }
    record("eta_integral", pairs);

    let mut pairs = Vec::new();
    for (mu, sigma, p, alpha) in [(12, 0, 3, 2.0), (5, 2, 1, 1.0), (20, 1, 0, 6.0), (30, 4, 2, 0.5), (8, 8, 0, 3.0)] {
        let o = oracle_basic(&BasicIntegral::K { mu, sigma, p, alpha }, &cfg).map_err(err)?.to_f64();
        pairs.push((k_integral(mu, sigma, p, alpha).map_err(err)?, o));
    }
    record("k_integral", pairs);

    let summary = report.join(", ");
    if failed.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; over tolerance: {}", failed.join(", ")))
    }
}

fn criterion_9() -> Outcome {
    let settings = ExpansionSettings::default();
    let cfg = oracle_cfg();
    let mut report = Vec::new();
    for q1 in [0usize, 2] {
        let req = GenericIntegralRequest { p1: 1, q1, p2: 0, q2: 1, sigma: 0, alpha1: 2.0, alpha2: 3.0, beta1: 0.0, beta2: 1.5, r: 1.4 };
        let eta = eta_integral_seq(q1 + 40, 0, q1, 0.0).map_err(|e| e.to_string())?;
        if eta[q1] == 0.0 || eta[q1 + 1..].iter().any(|&v| v != 0.0) {
            return Err(format!("q1={q1}: eta factors beyond mu={q1} are not identically zero"));
        }
        let out = neumann_sum(&req, DEFAULT_MU_SWITCH, &settings).map_err(|e| e.to_string())?;
        if out.terms_used != q1 + 1 {
            return Err(format!("q1={q1}: summed {} terms, expected {}", out.terms_used, q1 + 1));
        }
        let o = NeumannOracleRequest {
            p1: req.p1,
            q1,
            p2: req.p2,
            q2: req.q2,
            sigma: 0,
            alpha1: req.alpha1,
            alpha2: req.alpha2,
            beta1: 0.0,
            beta2: req.beta2,
            r: req.r,
        };
        let o = oracle_neumann_sum(&o, 1e-25, TERM_CAP, &cfg).map_err(|e| e.to_string())?.to_f64();
        report.push(format!("q1={q1}: last term mu={q1}, {} terms, {:.1} digits vs oracle", out.terms_used, digits(rel(out.value, o))));
    }
    Ok(report.join(", "))
}

fn criterion_10() -> Outcome {
    let settings = ExpansionSettings::default();
    let err = |e: neumann_sto::Error| e.to_string();
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    let mut problems = Vec::new();
    for &(a1, a2) in &[(1.0, 1.0), (1.0, 5.0), (2.0, 4.0), (5.0, 10.0), (0.5, 2.0)] {
        let mut cache = BasicIntegralCache::new(a1, a2).map_err(err)?;
        for p in [0, 3, 8] {
            for sigma in [0, 1] {
                for mu in [DEFAULT_MU_SWITCH - 2, DEFAULT_MU_SWITCH + 2] {
                    let w = WParams::new(p, 0, sigma, a1, a2, mu).map_err(err)?;
                    let lo = w_sigma_large_order(&w, &mut cache, &settings).map_err(err)?;
                    if !lo.converged {
                        problems.push(format!("({p},{a1},{a2},{mu},s{sigma}) large-order path did not converge"));
                        continue;
                    }
                    let d = w_direct(&w).map_err(err)?;
                    let r = rel(lo.value, d);
                    worst = worst.max(r);
                    compared += 1;
                    if r > SEAM_TOL {
                        problems.push(format!("({p},{a1},{a2},{mu},s{sigma}) differ by {r:.1e}"));
                    }
                }
            }
        }
    }
    let summary = format!("{compared} points at mu_switch +/- 2, worst relative difference {worst:.1e}");
    if problems.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; {}", problems.join("; ")))
    }
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("table 1 reproduction", || table_criterion(1, true, TABLE1_SECONDS)),
        ("table 2 reproduction", || table_criterion(2, false, TABLE23_SECONDS)),
        ("table 3 reproduction", || table_criterion(3, false, TABLE23_SECONDS)),
        ("oracle certification", criterion_4),
        ("Bessel Wronskian", criterion_5),
        ("ODE residuals", criterion_6),
        ("omega remainder bound", criterion_7),
        ("recursion vs oracle", criterion_8),
        ("Neumann termination", criterion_9),
        ("path-switch seam", criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(reason) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {reason}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
