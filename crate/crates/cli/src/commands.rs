use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use dbrane_core::deform::{
    apply_square_zero, conifold_probe, scan_events, search_off_conifold, PathEvent, PathSpec, ProbePoint, ScanOptions,
};
use dbrane_core::linalg::ExactMatrix;
use dbrane_core::morphism::{
    decompose, image_ideal, is_cyclic, make_morphism, matrices_for, AnalysisOptions, Cyclicity, MorphismSpec,
    SupportPoint,
};
use dbrane_core::poly::{nc_normal_form_degree4, parse_free, parse_univariate, xi_generators, IdealPresentation};
use dbrane_core::spectral::{
    classical_limit_check, quantum_operator_auto, quantum_spectral_operator, spectral_curve, verify_containment,
    SpectralPairSpec,
};
use dbrane_core::targets::{builtin_target, pi_xi, validate_algebra_map, AlgebraMap, MapReport, TargetSpec, Verdict};
use dbrane_core::GaussianRational;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::report::{parse_json, CliError, CliResult, Options, Outcome};

pub fn analysis(o: &Options) -> AnalysisOptions {
    AnalysisOptions { tolerance: o.tolerance, degree_cap: o.degree_cap, seed: o.seed }
}

fn vector_text(v: &[GaussianRational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn approx_text(c: &[f64; 2]) -> String {
    if c[1].abs() <= 1e-12 * c[0].abs().max(1.0) {
        format!("{:.10}", c[0])
    } else {
        format!("{:.10}{:+.10}*i", c[0], c[1])
    }
}

fn point_text(p: &SupportPoint) -> String {
    match &p.exact {
        Some(e) => vector_text(e),
        None => {
            let parts: Vec<String> = p.coordinates.iter().map(approx_text).collect();
            format!("({}) approx", parts.join(", "))
        }
    }
}

fn ideal_json(ideal: &IdealPresentation) -> Value {
    json!({
        "presentation": ideal,
        "text": ideal.factored_text(),
        "expanded": ideal.to_string(),
        "quotient_dimension": ideal.quotient_dimension(),
    })
}

fn ideal_text(ideal: &IdealPresentation) -> String {
    let monos: Vec<String> = ideal
        .standard_monomials()
        .iter()
        .map(|m| {
            let t = m.render(ideal.variables());
            if t.is_empty() {
                "1".to_string()
            } else {
                t
            }
        })
        .collect();
    format!(
        "image ideal: {}\ngenerators: {}\nstandard monomials: {}\nquotient dimension: {}\n",
        ideal.factored_text(),
        ideal.generators().iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
        monos.join(", "),
        ideal.quotient_dimension()
    )
}

pub fn image(path: &Path, bytes: &[u8], o: &Options) -> CliResult<Outcome> {
    let spec: MorphismSpec = parse_json(path, bytes)?;
    let phi = spec.build()?;
    let ideal = image_ideal(&phi, &analysis(o))?;
    Ok(Outcome::new(
        json!({ "rank": phi.rank(), "target": phi.target().name(), "ideal": ideal_json(&ideal) }),
        ideal_text(&ideal),
    ))
}

fn cyclicity_text(c: &Cyclicity) -> String {
    match c {
        Cyclicity::Cyclic { vector } => format!("cyclic vector: {}", vector_text(vector)),
        Cyclicity::NotCyclic { quotient_dimension } => {
            format!("not cyclic: image ring has dimension {quotient_dimension}")
        }
        Cyclicity::Inconclusive { probes } => format!("cyclicity inconclusive after {probes} probes"),
    }
}

pub fn decompose_cmd(path: &Path, bytes: &[u8], o: &Options) -> CliResult<Outcome> {
    let spec: MorphismSpec = parse_json(path, bytes)?;
    let phi = spec.build()?;
    let opts = analysis(o);
    let d = decompose(&phi, &opts)?;
    let cyc = is_cyclic(&phi, &opts)?;
    let mut text = ideal_text(&d.image_ideal);
    for (k, p) in d.points.iter().enumerate() {
        let _ = writeln!(
            text,
            "point {}: {}, module length {}, image length {}",
            k + 1,
            point_text(p),
            p.module_length,
            p.image_length
        );
    }
    let _ = writeln!(text, "total module length: {}", d.total_module_length);
    let _ = writeln!(text, "total image length: {}", d.total_image_length());
    if d.points.len() == 1 {
        let _ = writeln!(text, "punctual: yes");
    }
    let _ = writeln!(text, "{}", cyclicity_text(&cyc));
    if d.degraded {
        let _ = writeln!(text, "warning: numerically close clusters were merged");
    }
    let outputs = json!({
        "rank": phi.rank(),
        "target": phi.target().name(),
        "ideal": ideal_json(&d.image_ideal),
        "points": d.points,
        "partition": d.partition(),
        "total_module_length": d.total_module_length,
        "total_image_length": d.total_image_length(),
        "punctual": d.points.len() == 1,
        "cyclicity": cyc,
        "degraded": d.degraded,
    });
    Ok(Outcome { degraded: d.degraded, ..Outcome::new(outputs, text) })
}

fn partition_text(p: &[(usize, usize)]) -> String {
    let parts: Vec<String> = p.iter().map(|(m, i)| format!("({m},{i})")).collect();
    format!("[{}]", parts.join(", "))
}

fn event_text(k: usize, e: &PathEvent) -> String {
    let kind = serde_json::to_value(e.kind).expect("kind serializes");
    let t = match &e.t_exact {
        Some(t) => format!("{t} (exact)"),
        None => format!("{:.7}", e.t),
    };
    let mut s =
        format!("event {}: {} at t = {t}; before {}", k + 1, kind.as_str().unwrap_or("?"), partition_text(&e.before));
    if let Some(at) = &e.at {
        let _ = write!(s, ", at {}", partition_text(at));
    }
    let _ = write!(s, ", after {}", partition_text(&e.after));
    s
}

/// Path report; writes the sample CSV to `csv` when given.
pub fn deform(path: &Path, bytes: &[u8], o: &Options, samples: usize, csv: Option<&Path>) -> CliResult<Outcome> {
    let spec: PathSpec = parse_json(path, bytes)?;
    let p = spec.build()?;
    let report = scan_events(&p, &ScanOptions { samples, analysis: analysis(o) })?;
    let (header, rows) = report.csv_rows(p.target().generators());
    if let Some(csv_path) = csv {
        let io_err = |e: csv::Error| CliError::Usage(format!("{}: {e}", csv_path.display()));
        let mut w = csv::Writer::from_path(csv_path).map_err(io_err)?;
        w.write_record(&header).map_err(io_err)?;
        for r in &rows {
            w.write_record(r).map_err(io_err)?;
        }
        w.flush().map_err(|e| CliError::Usage(format!("{}: {e}", csv_path.display())))?;
    }
    let degraded = report.samples.iter().any(|s| s.degraded);
    let (lo, hi) = p.window();
    let mut text = format!("samples: {} on [{lo}, {hi}]\n", report.samples.len());
    if report.events.is_empty() {
        text.push_str("no events\n");
    }
    for (k, e) in report.events.iter().enumerate() {
        let _ = writeln!(text, "{}", event_text(k, e));
    }
    if csv.is_some() {
        let _ = writeln!(text, "csv rows: {}", rows.len());
    }
    let sample_summary: Vec<Value> = report
        .samples
        .iter()
        .map(|s| {
            let mut part: Vec<(usize, usize)> = s.points.iter().map(|q| (q.module_length, q.image_length)).collect();
            part.sort_unstable_by(|a, b| b.cmp(a));
            json!({ "t": s.t, "partition": part, "degraded": s.degraded })
        })
        .collect();
    let outputs = json!({
        "rank": p.rank(),
        "target": p.target().name(),
        "window": [lo, hi],
        "events": report.events,
        "samples": sample_summary,
        "csv_rows": rows.len(),
    });
    Ok(Outcome { degraded, ..Outcome::new(outputs, text) })
}

pub fn spectral(path: &Path, bytes: &[u8], _o: &Options) -> CliResult<Outcome> {
    let spec: SpectralPairSpec = parse_json(path, bytes)?;
    let pair = spec.build()?;
    let curve = spectral_curve(&pair);
    let cert = verify_containment(&pair)?;
    let text = format!(
        "spectral curve: {curve}\ndegree in lambda: {}\nCayley-Hamilton residual: {}\n",
        curve.degree_in_lambda(),
        if cert.holds() { "zero" } else { "nonzero" }
    );
    let outputs = json!({
        "rank": pair.rank(),
        "spectral_curve": curve.to_string(),
        "degree_in_lambda": curve.degree_in_lambda(),
        "containment": cert.holds(),
    });
    Ok(Outcome::new(outputs, text))
}

pub fn quantum(
    path: &Path,
    bytes: &[u8],
    o: &Options,
    vector: Option<&str>,
    max_order: Option<usize>,
) -> CliResult<Outcome> {
    let spec: SpectralPairSpec = parse_json(path, bytes)?;
    let pair = spec.build()?;
    let op = match vector {
        Some(v) => {
            let seed = v.split(',').map(|s| parse_univariate(s, "x")).collect::<Result<Vec<_>, _>>()?;
            quantum_spectral_operator(&pair, &seed, max_order.unwrap_or(pair.rank()))?
        }
        None => quantum_operator_auto(&pair, o.seed)?,
    };
    let limit = classical_limit_check(&pair, &op);
    let comparison = serde_json::to_value(limit.comparison).expect("comparison serializes");
    let mut text = format!("seed: ({})\nquantum operator: {}\n", op.seed_text().join(", "), op.text());
    match &limit.limit {
        Some(l) => {
            let _ = writeln!(text, "classical limit: {l}");
        }
        None => text.push_str("classical limit: undefined\n"),
    }
    let _ = writeln!(text, "spectral curve: {}", limit.spectral_curve);
    let _ = writeln!(text, "comparison: {}", comparison.as_str().unwrap_or("?"));
    let outputs = json!({
        "seed": op.seed_text(),
        "order": op.order(),
        "operator": op.text(),
        "classical_limit": limit,
    });
    Ok(Outcome::new(outputs, text))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NamedMap {
    map: String,
    source: TargetSpec,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitMap {
    source: TargetSpec,
    destination: TargetSpec,
    images: BTreeMap<String, String>,
}

fn map_text(r: &MapReport) -> String {
    let mut text = format!("map: {} -> {}\n", r.source, r.destination);
    for c in &r.checks {
        let verdict = serde_json::to_value(c.verdict).expect("verdict serializes");
        let _ = writeln!(
            text,
            "{} maps to {} with normal form {}: {}",
            c.relation,
            c.image,
            c.normal_form,
            verdict.as_str().unwrap_or("?")
        );
    }
    let overall = serde_json::to_value(r.well_defined).expect("verdict serializes");
    let _ = writeln!(text, "well defined: {}", overall.as_str().unwrap_or("?"));
    text
}

pub fn check(path: &Path, bytes: &[u8], _o: &Options) -> CliResult<Outcome> {
    let raw: Value = parse_json(path, bytes)?;
    let map = if raw.get("map").is_some() {
        let NamedMap { map, source } = parse_json(path, bytes)?;
        match map.as_str() {
            "pi_xi" => pi_xi(source.resolve()?)?,
            other => return Err(CliError::Usage(format!("unknown map `{other}` (known: pi_xi)"))),
        }
    } else {
        let ExplicitMap { source, destination, images } = parse_json(path, bytes)?;
        let source = source.resolve()?;
        let destination = destination.resolve()?;
        let parsed = images
            .iter()
            .map(|(k, v)| Ok((k.clone(), destination.parse_element(v)?)))
            .collect::<Result<BTreeMap<_, _>, dbrane_core::Error>>()?;
        let ordered = matrices_for(&source, &parsed)?;
        AlgebraMap::new(source, destination, ordered)?
    };
    let report = validate_algebra_map(&map)?;
    let text = map_text(&report);
    let rejected = report.well_defined == Verdict::Fails;
    Ok(Outcome { rejected, ..Outcome::new(serde_json::to_value(&report).expect("report serializes"), text) })
}

fn probe_point_text(p: &ProbePoint) -> String {
    let coords = match &p.exact {
        Some(e) => vector_text(e),
        None => {
            let parts: Vec<String> = p.coordinates.iter().map(approx_text).collect();
            format!("({}) approx", parts.join(", "))
        }
    };
    let value = match &p.conifold_value_exact {
        Some(v) => v.to_string(),
        None => approx_text(&p.conifold_value),
    };
    format!(
        "{coords}, module length {}, z1*z2 - z3*z4 = {value}, {}",
        p.module_length,
        if p.on_conifold { "on Y" } else { "off Y" }
    )
}

pub fn conifold_demo(o: &Options, max_rank: usize, trials: usize) -> CliResult<Outcome> {
    let opts = analysis(o);
    let free_source = dbrane_core::targets::free_z_space();
    let map_report = validate_algebra_map(&pi_xi(free_source)?)?;

    let gens = xi_generators();
    let witness = parse_free("xi1*xi3*xi2*xi4 - xi1*xi4*xi2*xi3", &gens, 4)?;
    let nf = nc_normal_form_degree4(&witness)?;

    let r_xi = builtin_target("r_xi")?;
    let base = make_morphism(2, r_xi, vec![ExactMatrix::zeros(2, 2); 4])?;
    let eps = vec![
        ExactMatrix::unit(2, 0, 1),
        ExactMatrix::zeros(2, 2),
        ExactMatrix::unit(2, 1, 0),
        ExactMatrix::zeros(2, 2),
    ];
    let sz = apply_square_zero(&base, &eps)?;
    let probe = match &sz.deformed {
        Some(phi) => Some(conifold_probe(phi, &opts)?),
        None => None,
    };
    let search = search_off_conifold(o.seed, max_rank, trials, &opts)?;

    let mut text = String::from("pi_xi from the polynomial ring in z1..z4:\n");
    for line in map_text(&map_report).lines().skip(1) {
        let _ = writeln!(text, "  {line}");
    }
    let _ = writeln!(text, "normal form of {witness}: {nf}");
    let _ = writeln!(
        text,
        "square-zero deformation (E12, 0, E21, 0) of the zero representation: {}",
        if sz.valid { "valid" } else { "invalid" }
    );
    if let Some(p) = &probe {
        for (k, pt) in p.points.iter().enumerate() {
            let _ = writeln!(text, "  support point {}: {}", k + 1, probe_point_text(pt));
        }
    }
    let _ = writeln!(text, "off-Y search (seed {}, ranks 2..{max_rank}, {trials} trials per rank):", o.seed);
    for line in &search.log {
        let _ = writeln!(text, "  {line}");
    }
    match &search.found {
        Some(f) => {
            let units: Vec<String> = f
                .units
                .iter()
                .map(|u| match u {
                    Some((a, b)) => format!("E{}{}", a + 1, b + 1),
                    None => "0".to_string(),
                })
                .collect();
            let _ = writeln!(text, "  example at rank {}: ({})", f.rank, units.join(", "));
            let _ = writeln!(text, "  point {}", probe_point_text(&f.point));
        }
        None => text.push_str("  no off-Y example found\n"),
    }
    let residuals: Vec<Value> = sz.residuals.iter().map(|(r, m)| json!({ "relation": r, "value": m })).collect();
    let outputs = json!({
        "pi_xi": map_report,
        "normal_form": { "element": witness.to_string(), "normal_form": nf.to_string(), "nonzero": !nf.is_zero() },
        "square_zero": { "valid": sz.valid, "residuals": residuals },
        "probe": probe,
        "search": search,
    });
    Ok(Outcome::new(outputs, text))
}
