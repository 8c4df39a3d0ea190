use gkzkit::arith::{fmt_rat, Int};
use gkzkit::fan::{canonical_triangulation, check_regular, check_semipositive, primitive_relations, sr_ideal};
use gkzkit::formcalc::{beta_term, exact_gkz_operator, Beta, FermatFamily, Form, LieTower};
use gkzkit::gkz::{
    box_operator, c1_filter, extract_components, family_rank, gamma_series, mirror_map, theta_form, verify_annihilation,
    ModuliChart, ThetaOperator,
};
use gkzkit::intlat::lattice_equal;
use gkzkit::nilring::{build_quotient, DivisorRing};
use gkzkit::residue::{abel_jacobi_inhomogeneous, CurveConfig};
use serde_json::{json, Value};

use crate::input::{int_vec, InputError, Model};
use crate::report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error at {0}")]
    Input(#[from] InputError),
    #[error("{0}")]
    Failed(String),
}

pub struct Flags {
    pub order: Option<u32>,
    pub chart: Option<String>,
    pub t_exp: Option<u32>,
    pub rel: Option<usize>,
}

fn show(v: &[Int]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn ring_of(model: &Model) -> Result<DivisorRing, CliError> {
    build_quotient(&model.polytope, &sr_ideal(&model.fan)).map_err(|e| InputError::new("/fan", e.to_string()).into())
}

pub fn relations(model: &Model, flags: &Flags) -> Result<Report, CliError> {
    let mut r = Report::new("relations", model);
    let lattice = model.polytope.relation_lattice();
    r.line(format!("points: {}   relation lattice rank: {}", model.polytope.len(), lattice.rank()));
    for b in lattice.basis() {
        r.line(format!("  {}", show(b)));
    }
    let mut spans = Value::Null;
    if model.input.chart.is_some() || flags.chart.is_some() {
        let chart = model.chart(flags.chart.as_deref())?;
        let ok = lattice_equal(chart.basis(), lattice.basis());
        r.line(format!("chart basis spans the lattice: {}", if ok { "yes" } else { "no" }));
        r.passed &= ok;
        spans = Value::Bool(ok);
    }
    r.results = json!({
        "rank": lattice.rank(),
        "basis": lattice.basis().iter().map(|b| int_vec(b)).collect::<Vec<_>>(),
        "chart_spans": spans,
    });
    Ok(r)
}

pub fn enhance(model: &Model) -> Result<Report, CliError> {
    let Some(brane) = &model.brane else {
        return Err(InputError::new("/brane", "enhance needs a brane vector").into());
    };
    let mut r = Report::new("enhance", model);
    let w0 = brane.w0(&model.base);
    let w1 = brane.w1(&model.base);
    r.line(format!("w0 = {}   w1 = {}", show(&w0), show(&w1)));
    let lattice = model.polytope.relation_lattice();
    r.line(format!("enhanced relation lattice (rank {}):", lattice.rank()));
    for b in lattice.basis() {
        r.line(format!("  {}", show(b)));
    }
    r.line(format!(
        "base fan: {} maximal cones   enhanced fan: {} maximal cones",
        model.base_fan.max_cones().len(),
        model.fan.max_cones().len()
    ));
    let cones: Vec<Vec<usize>> = model.fan.max_cones().iter().map(|c| c.iter().map(|i| i + 1).collect()).collect();
    for c in &cones {
        r.line(format!("  {c:?}"));
    }
    if !model.fan.is_complete() {
        r.line("note: the enhanced fan is not complete".to_string());
    }
    r.results = json!({
        "w0": int_vec(&w0),
        "w1": int_vec(&w1),
        "lattice": lattice.basis().iter().map(|b| int_vec(b)).collect::<Vec<_>>(),
        "max_cones": cones,
        "complete": model.fan.is_complete(),
    });
    Ok(r)
}

pub fn triangulate(model: &Model) -> Result<Report, CliError> {
    let mut r = Report::new("triangulate", model);
    let tri = canonical_triangulation(&model.fan, &model.polytope).map_err(|e| InputError::new("/fan", e.to_string()))?;
    let vols = tri.volumes(&model.polytope);
    r.line(format!("{} simplices, total normalized volume {}", tri.len(), tri.total_volume(&model.polytope)));
    for (s, v) in tri.simplices().iter().zip(&vols) {
        r.line(format!("  {s:?} volume {v}"));
    }
    let rels = primitive_relations(&model.fan, &model.polytope).map_err(|e| InputError::new("/fan", e.to_string()))?;
    r.line("primitive relations:".to_string());
    for p in &rels {
        let l = p.relation.as_ref().map(|l| show(l)).unwrap_or_else(|| "none".into());
        r.line(format!("  D{:?}: {}", p.divisor_indices(), l));
    }
    let semi = check_semipositive(&rels);
    let reg = check_regular(&rels, &model.polytope.relation_lattice());
    for w in semi.warnings.iter().chain(&reg.warnings) {
        r.line(format!("warning: {w}"));
    }
    r.line(format!("semi-positivity: {}", if semi.passed { "pass" } else { "FAIL" }));
    if let Some(w) = &semi.witness {
        r.line(format!("  witness D{:?}", w.divisor_indices()));
    }
    r.line(format!("regularity: {}", if reg.passed { "pass" } else { "FAIL" }));
    for g in &reg.generators {
        r.line(format!("  C(T)^∨ generator {}", show(g)));
    }
    let ring = ring_of(model)?;
    let chow = ring.length() == model.fan.max_cones().len();
    r.line(format!("Chow ring length {} vs {} maximal cones: {}", ring.length(), model.fan.max_cones().len(), if chow { "pass" } else { "FAIL" }));
    r.passed = semi.passed && reg.passed && chow;
    r.results = json!({
        "simplices": tri.simplices(),
        "volumes": int_vec(&vols),
        "semipositive": semi.passed,
        "regular": reg.passed,
        "cone_generators": reg.generators.iter().map(|g| int_vec(g)).collect::<Vec<_>>(),
        "chow_length": ring.length(),
    });
    Ok(r)
}

pub fn sr(model: &Model) -> Result<Report, CliError> {
    let mut r = Report::new("sr", model);
    let ideal = sr_ideal(&model.fan);
    let ring = ring_of(model)?;
    r.line(format!("SR ideal ({} generators):", ideal.generators().len()));
    for g in ideal.display() {
        r.line(format!("  {g}"));
    }
    r.line("quotient ring relations:".to_string());
    for g in ring.groebner_basis() {
        r.line(format!("  {}", g.display()));
    }
    r.line(format!("length {}", ring.length()));
    r.line(format!("basis {}", ring.basis_names().join(", ")));
    r.results = json!({
        "generators": ideal.display(),
        "relations": ring.groebner_basis().iter().map(|g| g.display()).collect::<Vec<_>>(),
        "length": ring.length(),
        "basis": ring.basis_names(),
    });
    Ok(r)
}

fn series_setup(model: &Model, flags: &Flags) -> Result<(ModuliChart, DivisorRing, u32), CliError> {
    let chart = model.chart(flags.chart.as_deref())?;
    let ring = ring_of(model)?;
    Ok((chart, ring, model.order(flags.order)))
}

pub fn solve(model: &Model, flags: &Flags) -> Result<Report, CliError> {
    let mut r = Report::new("solve", model);
    let (chart, ring, order) = series_setup(model, flags)?;
    let s = gamma_series(&model.polytope, &chart, &ring, order).map_err(|e| CliError::Failed(e.to_string()))?;
    let comps = extract_components(&s);
    let names = ring.basis_names();
    let shown = order.min(3);
    let mut out = Vec::new();
    r.line(format!("components of the deformed series to order {order}:"));
    for (name, c) in names.iter().zip(&comps) {
        let text = c.pretty(chart.names(), shown);
        r.line(format!("  [{name}] log degree {}: {text}", c.log_degree()));
        out.push(json!({"basis": name, "log_degree": c.log_degree(), "leading": text}));
    }
    let filtered = extract_components(&c1_filter(&s));
    let rank = family_rank(&filtered);
    r.line(format!("c1-filtered family rank {rank}"));
    r.results = json!({"order": order, "components": out, "c1_rank": rank});
    Ok(r)
}

/// Relations to check: the chart basis and, in rank > 1, also the sum of it.
fn relations_to_check(chart: &ModuliChart, rel: Option<usize>) -> Result<Vec<Vec<Int>>, CliError> {
    let mut out: Vec<Vec<Int>> = chart.basis().to_vec();
    if out.len() > 1 {
        let mut sum = vec![Int::from(0); out[0].len()];
        for b in chart.basis() {
            for (s, x) in sum.iter_mut().zip(b) {
                *s += x;
            }
        }
        out.push(sum);
    }
    match rel {
        None => Ok(out),
        Some(k) if k >= 1 && k <= out.len() => Ok(vec![out[k - 1].clone()]),
        Some(k) => Err(InputError::new("--rel", format!("relation {k} out of range 1..{}", out.len())).into()),
    }
}

pub fn verify(model: &Model, flags: &Flags) -> Result<Report, CliError> {
    let mut r = Report::new("verify", model);
    let (chart, ring, order) = series_setup(model, flags)?;
    let s = gamma_series(&model.polytope, &chart, &ring, order).map_err(|e| CliError::Failed(e.to_string()))?;
    let lattice = model.polytope.relation_lattice();
    let mut out = Vec::new();
    for l in relations_to_check(&chart, flags.rel)? {
        let op = box_operator(&l, &lattice).map_err(|e| InputError::new("--rel", e.to_string()))?;
        let theta: ThetaOperator = theta_form(&op, &chart).map_err(|e| CliError::Failed(e.to_string()))?;
        let rep = verify_annihilation(&s, &theta, order);
        r.line(format!("l = {}", show(&l)));
        r.line(format!("  {}", theta.pretty(chart.names())));
        let status = if rep.passed { "pass".to_string() } else { "FAIL".to_string() };
        r.line(format!("  {status} ({} coefficients checked to order {order})", rep.checked));
        if let Some((m, e)) = &rep.failure {
            r.line(format!("  first failure at {m:?}: {}", e.display()));
        }
        r.passed &= rep.passed;
        out.push(json!({"relation": int_vec(&l), "operator": theta.pretty(chart.names()), "passed": rep.passed, "checked": rep.checked}));
    }
    r.results = json!({"order": order, "operators": out});
    Ok(r)
}

pub fn mirrormap(model: &Model, flags: &Flags) -> Result<Report, CliError> {
    let mut r = Report::new("mirrormap", model);
    let (chart, ring, order) = series_setup(model, flags)?;
    let s = gamma_series(&model.polytope, &chart, &ring, order).map_err(|e| CliError::Failed(e.to_string()))?;
    let comps = extract_components(&s);
    let names = ring.basis_names();
    let mut out = Vec::new();
    for (i, c) in comps.iter().enumerate().skip(1) {
        if c.log_degree() != 1 {
            continue;
        }
        let t = mirror_map(c, &comps[0], order).map_err(|e| CliError::Failed(e.to_string()))?;
        let text = t.pretty(chart.names(), order.min(4));
        r.line(format!("t[{}] = {}", names[i], text));
        out.push(json!({"basis": names[i], "series": text}));
    }
    r.results = json!({"order": order, "mirror_map": out});
    Ok(r)
}

fn zero_line(r: &mut Report, label: &str, form: &Form) -> bool {
    let ok = form.is_zero();
    r.line(format!("{label}: {}", if ok { "0 (pass)" } else { "nonzero (FAIL)" }));
    r.passed &= ok;
    ok
}

pub fn beta(model: &Model, flags: &Flags) -> Result<Report, CliError> {
    let mut r = Report::new("beta", model);
    let mut checks = serde_json::Map::new();
    match model.input.name.as_str() {
        "quintic" => {
            let t_exp = flags.t_exp.unwrap_or(5);
            let fam = FermatFamily::quintic(t_exp).map_err(|e| InputError::new("--t-exp", e.to_string()))?;
            let chart = ModuliChart::standard(gkzkit::fixtures::quintic_lattice(), vec!["x".into()])
                .map_err(|e| CliError::Failed(e.to_string()))?;
            let l = chart.basis()[0].clone();
            let op = exact_gkz_operator(&l, &chart, &[1; 5]).map_err(|e| CliError::Failed(e.to_string()))?;
            let x = vec!["x".to_string()];
            r.line(format!("exact operator: {}", op.pretty(&x)));
            let mut tower = LieTower::new(fam.pi_tilde());
            let ok = zero_line(&mut r, "operator applied to the form", &op.apply(&fam, &mut tower));
            checks.insert("operator".into(), ok.into());
            let slice = (0..5).fold(Form::zero(fam.nz(), fam.nvars()), |acc, i| {
                let mut b = vec![0u32; 5];
                b[i] = 1;
                acc.add(&tower.get(&b))
            });
            let ok = zero_line(&mut r, "sum of single Lie-derivative terms", &slice);
            checks.insert("single_lie_slice".into(), ok.into());
            let d = op.theta_part().apply(&fam, &mut tower);
            let generic = beta_term(&op, &[0, 1, 2, 3, 4]).map_err(|e| CliError::Failed(e.to_string()))?;
            let ok = zero_line(&mut r, "dβ + D̃Π̃ for the generated β", &generic.evaluate(&fam, &mut tower).d().add(&d));
            checks.insert("generated_beta".into(), ok.into());
            let printed = Beta::quintic_choice();
            r.line(format!("reference β ({} terms):", printed.terms.len()));
            for line in printed.pretty(&x) {
                r.line(format!("  {line}"));
            }
            let ok = zero_line(&mut r, "dβ + D̃Π̃ for the reference β", &printed.evaluate(&fam, &mut tower).d().add(&d));
            checks.insert("reference_beta".into(), ok.into());
        }
        "p22211" => {
            let fam = FermatFamily::p22211();
            let chart = model.chart(flags.chart.as_deref())?;
            let mut tower = LieTower::new(fam.pi_tilde());
            for (k, l) in chart.basis().iter().enumerate() {
                let op = exact_gkz_operator(l, &chart, fam.weights()).map_err(|e| CliError::Failed(e.to_string()))?;
                r.line(format!("exact operator for {}: {}", show(l), op.pretty(chart.names())));
                let ok = zero_line(&mut r, "  applied to the form", &op.apply(&fam, &mut tower));
                checks.insert(format!("operator_{}", k + 1), ok.into());
            }
        }
        other => {
            return Err(InputError::new("/name", format!("no form-level family for '{other}' (use quintic or p22211)")).into());
        }
    }
    r.results = Value::Object(checks);
    Ok(r)
}

pub fn aj(model: &Model, flags: &Flags) -> Result<Report, CliError> {
    if model.input.name != "quintic" {
        return Err(InputError::new("/name", "the curve configuration is only available for the quintic").into());
    }
    if let Some(t) = flags.t_exp.or(model.input.options.t_exp) {
        if t != 10 {
            return Err(InputError::new("--t-exp", "the curve pair needs x = t^10").into());
        }
    }
    let mut r = Report::new("aj", model);
    let cfg = CurveConfig::quintic();
    cfg.validate().map_err(|e| CliError::Failed(e.to_string()))?;
    let names = |c: &gkzkit::residue::AffineChart| -> Vec<String> {
        c.names().iter().cloned().chain(std::iter::once("t".to_string())).collect()
    };
    for sp in &cfg.points {
        let p = sp.surface.map_poly(cfg.family.poly());
        r.line(format!("{}: P on the chart ({}) = {}", sp.name, sp.surface.names().join(","), p.display_with(&names(&sp.surface))));
        let both = sp.surface.then(&sp.curve_chart);
        let q = both.map_poly(cfg.family.poly());
        r.line(format!("    on Y1∩Y2 ({}) = {}", sp.curve_chart.names().join(","), q.display_with(&names(&sp.curve_chart))));
    }
    let report = abel_jacobi_inhomogeneous(&cfg, &Beta::quintic_choice()).map_err(|e| CliError::Failed(e.to_string()))?;
    let mut details = Vec::new();
    for (a, d) in &report.details {
        r.line(format!(
            "Θ^{a} block at {}: pole order {}, Res(C+) = {}, Res(C-) = {}",
            d.point,
            d.pole_order,
            d.plus.display("t"),
            d.minus.display("t")
        ));
        details.push(json!({"theta": a, "point": d.point, "pole_order": d.pole_order, "plus": d.plus.display("t"), "minus": d.minus.display("t")}));
    }
    let root = cfg.root();
    let mut blocks = serde_json::Map::new();
    for (a, f) in &report.blocks {
        if !f.is_zero() {
            r.line(format!("Θ^{a} block: {}", root.describe(f)));
        }
        blocks.insert(a.to_string(), Value::from(f.display("t")));
    }
    let single = report.blocks.iter().filter(|(_, f)| !f.is_zero()).collect::<Vec<_>>();
    let mut line = format!("inhomogeneous term: {}", report.total.display("t"));
    if let [(1, f)] = single.as_slice() {
        if let Some(x) = root.in_x(f) {
            line += &format!(" = Θ_x {x}");
        }
    }
    r.line(line);
    let mut walcher = Value::Null;
    if let Some((c, _)) = report.walcher_multiplier() {
        r.line(format!("Walcher normalization: multiplier {} π^-2", fmt_rat(&c)));
        walcher = Value::from(fmt_rat(&c));
    }
    r.results = json!({
        "residues": details,
        "blocks": blocks,
        "total": report.total.display("t"),
        "walcher_multiplier": walcher,
    });
    Ok(r)
}
