use crate::args::{BenchArgs, CoeffsArgs, EnsembleArg, PlanArgs, ProtocolArg, RegimeArg, SimulateArgs, Sweep};
use crate::output::{Report, Table};
use crate::util::{coefficient_options, config_json, ensembles, method, num, parse_range, CliError, CliResult};
use dipe_core::moments::{family_coefficients, shadow_coefficients, CoefficientOptions, MomentCoefficients};
use dipe_core::planner::{scaling_table, sufficient_copies, PlanRequest, Regime};
use dipe_core::protocol::{run_pauli_shadow, run_shared_lrm, shadow_variance_check, z_score, EnsembleKind, RunConfig, SampleMoments};
use dipe_core::states::StateFamily;
use dipe_core::Ensemble;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::time::Instant;

fn parse_family(s: &str) -> CliResult<StateFamily> {
    Ok(s.parse::<StateFamily>()?)
}

pub fn coeffs(a: &CoeffsArgs) -> CliResult<Report> {
    let opts = coefficient_options(&a.mc);
    let mut pairs = Vec::new();
    for spec in &a.family {
        let rho = parse_family(spec)?;
        let sigma = a.sigma.as_deref().map(parse_family).transpose()?.unwrap_or_else(|| rho.clone());
        match &a.n {
            Some(r) => {
                for n in parse_range(r)? {
                    pairs.push((rho.with_n(n)?, sigma.with_n(n)?));
                }
            }
            None => pairs.push((rho, sigma)),
        }
    }
    let results: Vec<_> = pairs.par_iter().map(|(r, s)| family_coefficients(r, s, &opts)).collect();
    let shown = ensembles(a.ensemble);
    let mut t = Table::new(&[
        "n", "family", "sigma", "overlap", "A", "C", "B_cl", "B_haar", "method_A", "method_C", "method_B_cl", "method_B_haar",
        "status", "reason",
    ]);
    for ((rho, sigma), res) in pairs.iter().zip(results) {
        let head = [json!(rho.n()), json!(rho.to_string()), json!(sigma.to_string())];
        match res {
            Ok(c) => {
                let b = |e: Ensemble| if shown.contains(&e) { num(c.b(e).value) } else { Value::Null };
                let bm = |e: Ensemble| if shown.contains(&e) { method(c.b(e)) } else { Value::Null };
                let mut row = head.to_vec();
                row.extend([
                    num(c.overlap.value),
                    num(c.a.value),
                    num(c.c.value),
                    b(Ensemble::Clifford),
                    b(Ensemble::Haar),
                    method(&c.a),
                    method(&c.c),
                    bm(Ensemble::Clifford),
                    bm(Ensemble::Haar),
                    json!("ok"),
                    Value::Null,
                ]);
                t.push(row);
            }
            Err(e) => {
                let mut row = head.to_vec();
                row.extend(std::iter::repeat_n(Value::Null, 9));
                row.extend([json!("skipped"), json!(e.to_string())]);
                t.push(row);
            }
        }
    }
    Ok(Report::new("coeffs", config_json(a), t))
}

fn with_noise(f: &StateFamily, noise: Option<f64>) -> StateFamily {
    match noise {
        Some(p) if p > 0.0 => StateFamily::Depolarized { base: Box::new(f.clone()), p },
        _ => f.clone(),
    }
}

pub fn simulate(a: &SimulateArgs) -> CliResult<Report> {
    let rho_f = parse_family(&a.rho)?;
    let sigma_f = a.sigma.as_deref().map(parse_family).transpose()?.unwrap_or_else(|| rho_f.clone());
    let (rho, sigma) = (rho_f.build()?, sigma_f.build()?);
    let n = rho.n();
    if sigma.n() != n {
        return Err(CliError::Usage(format!("rho has {n} qubits, sigma {}", sigma.n())));
    }
    let config = config_json(a);
    let mut t = Table::new(&["quantity", "exact", "empirical", "se", "z"]);
    let start = Instant::now();

    if a.ensemble == ProtocolArg::Shadow {
        if a.noise.is_some() {
            return Err(CliError::Usage("--noise applies to the shared-unitary protocol only".into()));
        }
        let copies = a.nu * a.nm;
        let coeffs = shadow_coefficients(&rho.to_density(), &sigma.to_density())?;
        let mut report = if a.reps > 1 {
            let r = shadow_variance_check(&rho, &sigma, copies, a.reps, a.seed)?;
            t.push(vec![json!("estimate"), num(r.coefficients.overlap), num(r.empirical.mean), num(r.empirical.se_mean), num(r.z_mean)]);
            t.push(vec![json!("variance"), num(r.exact_variance), num(r.empirical.variance), num(r.empirical.se_variance), num(r.z_variance)]);
            let mut rep = Report::new("simulate", config, t);
            rep.extra.insert("shadow".into(), serde_json::to_value(&r).expect("serializable"));
            rep
        } else {
            let r = run_pauli_shadow(&rho, &sigma, copies, a.seed)?;
            let v = coeffs.variance(copies);
            t.push(vec![json!("estimate"), num(coeffs.overlap), num(r.estimate), num(v.sqrt()), num(z_score(r.estimate, coeffs.overlap, v.sqrt()))]);
            t.push(vec![json!("variance"), num(v), Value::Null, Value::Null, Value::Null]);
            let mut rep = Report::new("simulate", config, t);
            rep.extra.insert("record".into(), json!({"estimate": num(r.estimate), "copies": r.copies, "seed": r.seed}));
            rep
        };
        report.extra.insert("coefficients".into(), serde_json::to_value(coeffs).expect("serializable"));
        report.wall_time_s = Some(start.elapsed().as_secs_f64());
        return Ok(report);
    }

    let ensemble = if a.ensemble == ProtocolArg::Clifford { Ensemble::Clifford } else { Ensemble::Haar };
    let run = RunConfig { n, nu: a.nu, nm: a.nm, seed: a.seed, ensemble: EnsembleKind::from(ensemble), noise: a.noise };
    let record = run_shared_lrm(&rho, &sigma, &run)?;
    let opts = coefficient_options(&a.mc);
    let coeffs: MomentCoefficients = family_coefficients(&with_noise(&rho_f, a.noise), &with_noise(&sigma_f, a.noise), &opts)?;
    let terms = coeffs.variance(ensemble, a.nm);
    let exact_var = terms.total();
    let overlap = coeffs.overlap.value;
    t.push(vec![json!("estimate"), num(overlap), num(record.estimate), num(record.stderr), num(z_score(record.estimate, overlap, record.stderr))]);
    for (name, v) in [("V1", terms.v1), ("V2", terms.v2), ("V3", terms.v3), ("V4", terms.v4)] {
        t.push(vec![json!(name), num(v), Value::Null, Value::Null, Value::Null]);
    }
    if record.block_values.len() >= 2 {
        let m = SampleMoments::from_samples(&record.block_values)?;
        t.push(vec![json!("var_X_M"), num(exact_var), num(m.variance), num(m.se_variance), num(z_score(m.variance, exact_var, m.se_variance))]);
    } else {
        t.push(vec![json!("var_X_M"), num(exact_var), Value::Null, Value::Null, Value::Null]);
    }
    t.push(vec![json!("var_estimate"), num(exact_var / a.nu as f64), num(record.stderr * record.stderr), Value::Null, Value::Null]);
    let mut report = Report::new("simulate", config, t);
    let mut rec = json!({"estimate": num(record.estimate), "stderr": num(record.stderr), "config": record.config});
    if a.emit_blocks {
        rec["block_values"] = json!(record.block_values);
    }
    report.extra.insert("record".into(), rec);
    report.extra.insert("coefficients".into(), serde_json::to_value(&coeffs).expect("serializable"));
    report.extra.insert("variance_terms".into(), serde_json::to_value(terms).expect("serializable"));
    report.wall_time_s = Some(record.wall_time_s);
    Ok(report)
}

pub fn plan(a: &PlanArgs) -> CliResult<Report> {
    let config = config_json(a);
    if a.table {
        let ns = parse_range(&a.ns)?;
        let rows = scaling_table(&ns, a.eps, a.delta)?;
        let mut t = Table::new(&["protocol", "scaling", "extremal", "n", "copies", "nm"]);
        for r in rows {
            t.push(vec![json!(r.protocol), json!(r.scaling), json!(r.extremal), json!(r.n), json!(r.copies), json!(r.nm)]);
        }
        return Ok(Report::new("plan", config, t));
    }
    let (n, regime) = match a.regime {
        RegimeArg::Clifford => (a.n, Regime::CliffordWorstCase),
        RegimeArg::Haar => (a.n, Regime::HaarComparison),
        RegimeArg::Conjectured => (a.n, Regime::HaarConjectured),
        RegimeArg::Shadow => (a.n, Regime::PauliShadow),
        RegimeArg::State => match &a.family {
            Some(spec) => {
                let f = parse_family(spec)?;
                let c = family_coefficients(&f, &f, &CoefficientOptions::default())?;
                let e = match a.ensemble {
                    EnsembleArg::Clifford => Ensemble::Clifford,
                    EnsembleArg::Haar => Ensemble::Haar,
                    EnsembleArg::Both => return Err(CliError::Usage("--ensemble must be clifford or haar for plans".into())),
                };
                (f.n(), Regime::StateSpecific { a: c.a.value, b: c.b(e).value, c: Some(c.c.value) })
            }
            None => {
                let (Some(av), Some(bv)) = (a.a, a.b) else {
                    return Err(CliError::Usage("state regime needs --family or both --a and --b".into()));
                };
                (a.n, Regime::StateSpecific { a: av, b: bv, c: a.c })
            }
        },
    };
    let r = sufficient_copies(&PlanRequest::new(n, a.eps, a.delta, regime))?;
    let mut t = Table::new(&["field", "value"]);
    t.push(vec![json!("regime"), json!(r.regime)]);
    t.push(vec![json!("n"), json!(r.n)]);
    t.push(vec![json!("epsilon"), num(r.epsilon)]);
    t.push(vec![json!("delta"), num(r.delta)]);
    t.push(vec![json!("nm_star"), json!(r.nm_star)]);
    t.push(vec![json!("nm_continuous"), r.nm_continuous.map_or(Value::Null, num)]);
    t.push(vec![json!("n_star"), json!(r.n_star)]);
    t.push(vec![json!("nu"), json!(r.nu)]);
    t.push(vec![json!("bound"), num(r.bound)]);
    t.push(vec![json!("bound_continuous"), r.bound_continuous.map_or(Value::Null, num)]);
    for term in &r.terms {
        t.push(vec![json!(format!("term_{}", term.name)), num(term.value)]);
    }
    t.push(vec![json!("scaling"), json!(r.scaling)]);
    t.push(vec![json!("binding"), json!(r.binding)]);
    if let Regime::StateSpecific { a, b, c } = regime {
        t.push(vec![json!("A"), num(a)]);
        t.push(vec![json!("B"), num(b)]);
        t.push(vec![json!("C"), c.map_or(Value::Null, num)]);
    }
    let mut report = Report::new("plan", config, t);
    report.extra.insert("plan".into(), serde_json::to_value(&r).expect("serializable"));
    Ok(report)
}

const TEMPLATES: [&str; 9] = ["plusprod", "plus", "product", "ghz", "w", "belldimer", "bell", "chain", "haar"];

fn template(name: &str, n: usize, seed: u64) -> CliResult<StateFamily> {
    let f = match name {
        "plusprod" | "plus" | "product" => StateFamily::ProductPlus { n },
        "ghz" => StateFamily::Ghz { n },
        "w" => StateFamily::W { n },
        "belldimer" | "bell" => StateFamily::BellDimer { n },
        "chain" => StateFamily::ChainGraph { n, m: n.saturating_sub(1) },
        "haar" => StateFamily::HaarRandomPure { n, seed },
        spec if spec.contains(':') => return Ok(parse_family(spec)?.with_n(n)?),
        other => return Err(CliError::Usage(format!("unknown family template {other:?}"))),
    };
    f.validate()?;
    Ok(f)
}

struct Point {
    label: String,
    n: usize,
    param: Value,
    family: Result<StateFamily, String>,
}

pub fn bench(a: &BenchArgs) -> CliResult<Report> {
    let ens: Vec<Ensemble> = a.ensembles.iter().map(|s| s.parse::<Ensemble>()).collect::<Result<_, _>>()?;
    let ns = parse_range(&a.n)?;
    let mut points = Vec::new();
    match a.sweep {
        Sweep::Families => {
            for name in &a.families {
                if !TEMPLATES.contains(&name.as_str()) && !name.contains(':') {
                    return Err(CliError::Usage(format!("unknown family template {name:?}")));
                }
                for &n in &ns {
                    let family = template(name, n, a.seed).map_err(|e| e.to_string());
                    points.push(Point { label: name.clone(), n, param: Value::Null, family });
                }
            }
        }
        Sweep::Purity => {
            let base = parse_family(&a.family)?;
            if a.p_steps < 2 {
                return Err(CliError::Usage("--p-steps must be at least 2".into()));
            }
            for k in 0..a.p_steps {
                let p = k as f64 / (a.p_steps - 1) as f64;
                let f = StateFamily::Depolarized { base: Box::new(base.clone()), p };
                points.push(Point { label: f.to_string(), n: base.n(), param: num(p), family: Ok(f) });
            }
        }
        Sweep::Chain => {
            for &n in &ns {
                for m in 0..n {
                    let f = StateFamily::ChainGraph { n, m };
                    points.push(Point { label: f.to_string(), n, param: json!(m), family: Ok(f) });
                }
            }
        }
    }
    let opts = coefficient_options(&a.mc);
    let results: Vec<Result<MomentCoefficients, String>> = points
        .par_iter()
        .map(|p| match &p.family {
            Ok(f) => family_coefficients(f, f, &opts).map_err(|e| e.to_string()),
            Err(e) => Err(e.clone()),
        })
        .collect();
    let mut t = Table::new(&[
        "family", "n", "param", "ensemble", "A", "C", "B", "log10B", "method", "method_A", "method_C", "status", "reason",
    ]);
    for (p, res) in points.iter().zip(&results) {
        for &e in &ens {
            let mut row = vec![json!(p.label), json!(p.n), p.param.clone(), json!(e.label())];
            match res {
                Ok(c) => {
                    let b = c.b(e);
                    row.extend([
                        num(c.a.value),
                        num(c.c.value),
                        num(b.value),
                        num(b.value.log10()),
                        method(b),
                        method(&c.a),
                        method(&c.c),
                        json!("ok"),
                        Value::Null,
                    ]);
                }
                Err(reason) => {
                    row.extend(std::iter::repeat_n(Value::Null, 7));
                    row.extend([json!("skipped"), json!(reason)]);
                }
            }
            t.push(row);
        }
    }
    Ok(Report::new("bench", config_json(a), t))
}
