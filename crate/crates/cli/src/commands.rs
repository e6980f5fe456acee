use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use ihara::covers::{
    abelian_tower, derived_cover, homology_tower, Tower, VoltageAssignment, VoltageGroup,
    DEFAULT_SIZE_CAP,
};
use ihara::l2::{abelian_l2_zeta, empirical_cdf, torus_cdf, torus_symbol, L2Zeta};
use ihara::lab::{tower_convergence, DeitmarCheck, GridSpec};
use ihara::zeta::{euler_log_coeffs, functional_equation_check, RegionOmega, ZetaFunction};
use ihara::{GraphFile, MultiGraph};

use crate::args::*;
use crate::run::{CliError, CliResult, Run};

pub const SIZE_CAP_VAR: &str = "ZETA_SIZE_CAP";

pub fn dispatch(command: Command, manifest: Option<PathBuf>) -> CliResult<String> {
    match command {
        Command::Zeta(ZetaCommand::Compute(a)) => zeta_compute(a, manifest),
        Command::Zeta(ZetaCommand::Zeros(a)) => zeta_zeros(a, manifest),
        Command::Zeta(ZetaCommand::EulerCheck(a)) => euler_check(a, manifest),
        Command::Zeta(ZetaCommand::FunctionalCheck(a)) => functional_check(a, manifest),
        Command::Cover(CoverCommand::Build(a)) => cover_build(a, manifest),
        Command::Tower(TowerCommand::Build(a)) => tower_build(a, manifest),
        Command::Tower(TowerCommand::Run(a)) => tower_run(a, manifest),
        Command::L2(L2Command::Torus(a)) => l2_torus(a, manifest),
        Command::L2(L2Command::Cdf(a)) => l2_cdf(a, manifest),
        Command::Deitmar(DeitmarCommand::Check(a)) => deitmar_check(a, manifest),
    }
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn parse_complex(text: &str) -> CliResult<Complex64> {
    Complex64::from_str(text.trim()).map_err(|_| input(format!("cannot parse complex number {text:?}")))
}

fn load_graph(run: &mut Run, path: &Path) -> CliResult<MultiGraph> {
    run.arg("graph", path.display().to_string());
    let text = run.read_input(path)?;
    Ok(MultiGraph::from_json(&text)?)
}

fn load_voltages(run: &mut Run, key: &str, path: &Path) -> CliResult<VoltageAssignment> {
    run.arg(key, path.display().to_string());
    let text = run.read_input(path)?;
    let raw: VoltageAssignment =
        serde_json::from_str(&text).map_err(|e| input(format!("bad voltage file {}: {e}", path.display())))?;
    Ok(VoltageAssignment::new(raw.group, raw.voltages)?)
}

fn free_voltages(volt: &VoltageAssignment) -> CliResult<Vec<Vec<i64>>> {
    match volt.group {
        VoltageGroup::Free(_) => Ok(volt.voltages.clone()),
        VoltageGroup::Finite(_) => Err(input("expected voltages in a free group {\"free\": k}")),
    }
}

fn size_cap(spec_value: Option<usize>) -> CliResult<usize> {
    match std::env::var(SIZE_CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| input(format!("{SIZE_CAP_VAR}={v:?} is not a vertex count"))),
        Err(_) => Ok(spec_value.unwrap_or(DEFAULT_SIZE_CAP)),
    }
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn graph_facts(g: &MultiGraph) -> Map<String, Value> {
    let reg = g.regularity();
    let mut m = Map::new();
    m.insert("graph".into(), json!(g.name()));
    m.insert("vertices".into(), json!(g.vertex_count()));
    m.insert("edges".into(), json!(g.edge_count()));
    m.insert("chi".into(), json!(g.euler_characteristic()));
    m.insert("q".into(), json!(reg.q));
    m
}

fn zeta_compute(a: ComputeArgs, manifest: Option<PathBuf>) -> CliResult<String> {
    let mut run = Run::new("zeta compute", manifest);
    let g = load_graph(&mut run, &a.graph.graph)?;
    run.arg("eval", &a.eval);
    let points = a.eval.iter().map(|s| parse_complex(s)).collect::<CliResult<Vec<_>>>()?;
    let z = ZetaFunction::of(&g)?;
    let mut values = Vec::new();
    for u in points {
        values.push(json!({ "u": complex_json(u), "zeta": complex_json(z.eval(u)?) }));
    }
    if let Some(path) = &a.emit {
        run.arg("emit", path.display().to_string());
        run.write_output(path, &(z.det_poly.to_json() + "\n"))?;
    }
    let mut summary = graph_facts(&g);
    summary.insert("det_poly_degree".into(), json!(z.det_poly.degree()));
    summary.insert("values".into(), Value::Array(values));
    run.finish(summary)
}

fn zeta_zeros(a: ZerosArgs, manifest: Option<PathBuf>) -> CliResult<String> {
    let mut run = Run::new("zeta zeros", manifest);
    let g = load_graph(&mut run, &a.graph.graph)?;
    run.arg("check_C", a.check_c);
    run.setting("tol", a.tol);
    let report = ZetaFunction::of(&g)?.zeros()?;
    if let Some(path) = &a.out {
        run.arg("out", path.display().to_string());
        run.write_output(path, &report.to_csv())?;
    }
    if let Some(path) = &a.overlay {
        run.arg("overlay", path.display().to_string());
        run.write_output(path, &overlay_csv(report.q, 256)?)?;
    }
    let on_c = report.all_on_c(a.tol);
    if a.check_c && !on_c {
        return Err(CliError::Failure(format!(
            "a zero lies {:e} from C, above the tolerance {:e}",
            report.max_dist_to_c, a.tol
        )));
    }
    let mut summary = graph_facts(&g);
    summary.insert("zeros".into(), json!(report.zeros.len()));
    summary.insert("total_multiplicity".into(), json!(report.total_multiplicity()));
    summary.insert("max_dist_to_C".into(), json!(report.max_dist_to_c));
    summary.insert("all_on_C".into(), json!(on_c));
    run.finish(summary)
}

fn overlay_csv(q: i64, samples: usize) -> CliResult<String> {
    let mut out = String::from("piece,re,im\n");
    for (piece, x, y) in RegionOmega::new(q)?.c_polyline(samples) {
        out.push_str(&format!("{piece},{x:.17e},{y:.17e}\n"));
    }
    Ok(out)
}

fn euler_check(a: EulerCheckArgs, manifest: Option<PathBuf>) -> CliResult<String> {
    let mut run = Run::new("zeta euler-check", manifest);
    let g = load_graph(&mut run, &a.graph.graph)?;
    run.arg("terms", a.terms);
    let rational = ZetaFunction::of(&g)?.log_coeffs(a.terms)?;
    let euler = euler_log_coeffs(&g, a.terms)?;
    if let Some(m) = rational.iter().zip(&euler).position(|(x, y)| x != y) {
        return Err(CliError::Failure(format!(
            "coefficient of u^{} differs: {} from the determinant, {} from closed walks",
            m + 1,
            rational[m],
            euler[m]
        )));
    }
    let mut summary = graph_facts(&g);
    summary.insert("terms".into(), json!(a.terms));
    summary.insert("agree".into(), json!(true));
    summary.insert(
        "log_coefficients".into(),
        json!(euler.iter().map(ToString::to_string).collect::<Vec<_>>()),
    );
    run.finish(summary)
}

fn functional_check(a: FunctionalCheckArgs, manifest: Option<PathBuf>) -> CliResult<String> {
    let mut run = Run::new("zeta functional-check", manifest);
    let g = load_graph(&mut run, &a.graph.graph)?;
    run.arg("at", &a.at);
    run.arg("random", a.random);
    run.arg("seed", a.seed);
    run.setting("tol", a.tol);
    if a.at.is_empty() && a.random == 0 {
        return Err(input("give points with --at or a count with --random"));
    }
    let z = ZetaFunction::of(&g)?;
    let (v, e) = (g.vertex_count(), g.edge_count());
    let mut worst: f64 = 0.0;
    for text in &a.at {
        worst = worst.max(functional_equation_check(&z, v, e, parse_complex(text)?)?.relative());
    }
    // random points landing on a pole or zero of a side are redrawn
    let mut rng = StdRng::seed_from_u64(a.seed);
    let mut accepted = 0;
    let mut attempts = 0;
    while accepted < a.random {
        attempts += 1;
        if attempts > 100 * a.random {
            return Err(CliError::Failure("too many random points rejected".into()));
        }
        let u = Complex64::new(rng.random_range(-1.2..1.2), rng.random_range(-1.2..1.2));
        if let Ok(chk) = functional_equation_check(&z, v, e, u) {
            worst = worst.max(chk.relative());
            accepted += 1;
        }
    }
    if !(worst <= a.tol) {
        return Err(CliError::Failure(format!("relative residual {worst:e} exceeds {:e}", a.tol)));
    }
    let mut summary = graph_facts(&g);
    summary.insert("points".into(), json!(a.at.len() + a.random));
    summary.insert("max_relative_residual".into(), json!(worst));
    run.finish(summary)
}

fn check_cap(vertices: u64, cap: usize, what: &str) -> CliResult<()> {
    if vertices > cap as u64 {
        return Err(CliError::Failure(format!(
            "{what} would have {vertices} vertices, above the size cap of {cap} (set {SIZE_CAP_VAR} to raise it)"
        )));
    }
    Ok(())
}

fn write_graph(run: &mut Run, path: &Path, g: &MultiGraph) -> CliResult<()> {
    let text = serde_json::to_string(&g.to_file()).expect("graph serialises") + "\n";
    run.write_output(path, &text)
}

fn cover_build(a: CoverBuildArgs, manifest: Option<PathBuf>) -> CliResult<String> {
    let mut run = Run::new("cover build", manifest);
    let base = load_graph(&mut run, &a.graph.graph)?;
    let volt = load_voltages(&mut run, "voltages", &a.voltages)?;
    run.arg("out", a.out.display().to_string());
    let cap = size_cap(None)?;
    run.setting("size_cap", cap);
    let order = volt.group.order().ok_or_else(|| input("covers need a finite voltage group"))?;
    check_cap(order.saturating_mul(base.vertex_count() as u64), cap, "the cover")?;
    let cover = derived_cover(&base, &volt)?;
    write_graph(&mut run, &a.out, &cover.graph)?;
    let mut summary = graph_facts(&cover.graph);
    summary.insert("fiber_size".into(), json!(cover.fiber_size));
    summary.insert("components".into(), json!(cover.components));
    summary.insert("connected".into(), json!(cover.components == 1));
    run.finish(summary)
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum BaseRef {
    Inline(GraphFile),
    Path(PathBuf),
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum TowerKind {
    Cyclic,
    Homology,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Voltage {
    Scalar(i64),
    Vector(Vec<i64>),
}

/// Tower spec file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TowerSpec {
    base: BaseRef,
    kind: TowerKind,
    #[serde(default)]
    voltages: Vec<Voltage>,
    #[serde(default)]
    orders: Vec<u64>,
    p: Option<u64>,
    depth: Option<usize>,
    size_cap: Option<usize>,
}

fn load_tower(run: &mut Run, path: &Path) -> CliResult<Tower> {
    run.arg("spec", path.display().to_string());
    let text = run.read_input(path)?;
    let spec: TowerSpec =
        serde_json::from_str(&text).map_err(|e| input(format!("bad tower spec {}: {e}", path.display())))?;
    let base = match &spec.base {
        BaseRef::Inline(file) => MultiGraph::from_file(file)?,
        BaseRef::Path(p) => {
            // relative paths are resolved against the spec's directory
            let full = path.parent().map_or_else(|| p.clone(), |d| d.join(p));
            MultiGraph::from_json(&run.read_input(&full)?)?
        }
    };
    let cap = size_cap(spec.size_cap)?;
    run.setting("size_cap", cap);
    match spec.kind {
        TowerKind::Cyclic => {
            let voltages: Vec<Vec<i64>> = spec
                .voltages
                .iter()
                .map(|v| match v {
                    Voltage::Scalar(s) => vec![*s],
                    Voltage::Vector(v) => v.clone(),
                })
                .collect();
            let rank = voltages.first().map_or(1, Vec::len) as u32;
            let top = spec.orders.last().copied().unwrap_or(1);
            let vertices = top
                .checked_pow(rank)
                .and_then(|n| n.checked_mul(base.vertex_count() as u64))
                .unwrap_or(u64::MAX);
            check_cap(vertices, cap, "the top level")?;
            Ok(abelian_tower(&base, &voltages, &spec.orders)?)
        }
        TowerKind::Homology => {
            let p = spec.p.ok_or_else(|| input("homology towers need \"p\""))?;
            let depth = spec.depth.ok_or_else(|| input("homology towers need \"depth\""))?;
            Ok(homology_tower(&base, p, depth, cap)?)
        }
    }
}

fn tower_summary(tower: &Tower) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("provenance".into(), json!(tower.provenance));
    m.insert("limit".into(), json!(tower.limit));
    m.insert("indices".into(), json!(tower.indices()));
    m.insert("vertex_counts".into(), json!(tower.vertex_counts()));
    m
}

fn tower_build(a: TowerBuildArgs, manifest: Option<PathBuf>) -> CliResult<String> {
    let mut run = Run::new("tower build", manifest);
    let tower = load_tower(&mut run, &a.spec)?;
    run.arg("out", a.out.display().to_string());
    run.manifest_in(&a.out);
    let mut levels = Vec::new();
    for (i, level) in tower.levels.iter().enumerate() {
        let name = format!("level_{}.json", i + 1);
        write_graph(&mut run, &a.out.join(&name), &level.graph)?;
        levels.push(json!({
            "level": i + 1,
            "index": level.index,
            "vertices": level.graph.vertex_count(),
            "edges": level.graph.edge_count(),
            "components": level.components,
            "file": name,
        }));
    }
    let mut summary = tower_summary(&tower);
    let mut listing = summary.clone();
    listing.insert("levels".into(), Value::Array(levels));
    let text = serde_json::to_string_pretty(&listing).expect("listing serialises") + "\n";
    run.write_output(&a.out.join("tower.json"), &text)?;
    summary.insert("levels".into(), json!(tower.levels.len()));
    run.finish(summary)
}

fn parse_target(run: &mut Run, text: &str, tower: &Tower, q: i64) -> CliResult<L2Zeta> {
    run.arg("target", text);
    let chi = tower.base.euler_characteristic();
    if let Some(v) = text.strip_prefix("constant:") {
        return Ok(L2Zeta::constant(q, chi, parse_complex(v)?));
    }
    if let Some(path) = text.strip_prefix("torus:") {
        let volt = load_voltages(run, "target_voltages", Path::new(path))?;
        return Ok(abelian_l2_zeta(&tower.base, &free_voltages(&volt)?)?);
    }
    Err(input(format!("target {text:?} is neither constant:<value> nor torus:<voltage-file>")))
}

fn parse_grid(run: &mut Run, text: &str, q: i64) -> CliResult<GridSpec> {
    run.arg("grid", text);
    let grid = GridSpec::parse(text, q)?;
    run.setting("grid", grid.describe());
    Ok(grid)
}

fn tower_run(a: TowerRunArgs, manifest: Option<PathBuf>) -> CliResult<String> {
    let mut run = Run::new("tower run", manifest);
    let tower = load_tower(&mut run, &a.spec)?;
    let q = tower.base.regularity().require_q("convergence runs")?;
    let target = parse_target(&mut run, &a.target, &tower, q)?;
    let grid = parse_grid(&mut run, &a.grid, q)?;
    run.arg("out", a.out.display().to_string());
    run.arg("overlay_samples", a.overlay_samples);
    run.manifest_in(&a.out);
    let report = tower_convergence(&tower, &target, &grid)?;
    let text = serde_json::to_string_pretty(&report).expect("report serialises") + "\n";
    run.write_output(&a.out.join("report.json"), &text)?;
    run.write_output(&a.out.join("error_field.csv"), &report.error_field_csv())?;
    run.write_output(&a.out.join("c_overlay.csv"), &overlay_csv(q, a.overlay_samples)?)?;
    let mut summary = tower_summary(&tower);
    summary.insert("grid_points".into(), json!(report.grid_points));
    summary.insert("sup_errors".into(), json!(report.sup_errors()));
    summary.insert("strictly_decreasing".into(), json!(report.strictly_decreasing()));
    summary.insert("limit_verified".into(), json!(report.limit_verified));
    run.finish(summary)
}

fn l2_torus(a: L2TorusArgs, manifest: Option<PathBuf>) -> CliResult<String> {
    let mut run = Run::new("l2 torus", manifest);
    let base = load_graph(&mut run, &a.graph.graph)?;
    let volt = load_voltages(&mut run, "voltages", &a.voltages)?;
    let q = base.regularity().require_q("L2-zeta evaluation")?;
    let grid = parse_grid(&mut run, &a.grid, q)?;
    run.arg("out", a.out.display().to_string());
    let zeta = abelian_l2_zeta(&base, &free_voltages(&volt)?)?;
    let points = grid.points();
    let values = points.par_iter().map(|&u| zeta.eval(u)).collect::<ihara::Result<Vec<_>>>()?;
    let mut csv = String::from("re,im,value_re,value_im\n");
    for (u, z) in points.iter().zip(&values) {
        csv.push_str(&format!("{:.17e},{:.17e},{:.17e},{:.17e}\n", u.re, u.im, z.re, z.im));
    }
    run.write_output(&a.out, &csv)?;
    let mut summary = graph_facts(&base);
    summary.insert("points".into(), json!(points.len()));
    summary.insert("target".into(), json!(zeta.description));
    run.finish(summary)
}

fn l2_cdf(a: L2CdfArgs, manifest: Option<PathBuf>) -> CliResult<String> {
    let mut run = Run::new("l2 cdf", manifest);
    let base = load_graph(&mut run, &a.graph.graph)?;
    run.arg("out", a.out.display().to_string());
    let cdf = match &a.voltages {
        Some(path) => {
            let volt = load_voltages(&mut run, "voltages", path)?;
            run.arg("points", a.points);
            torus_cdf(&torus_symbol(&base, &volt)?, a.points)?
        }
        None => empirical_cdf(base.spectrum()?, 1),
    };
    run.write_output(&a.out, &cdf.to_csv())?;
    let mut summary = graph_facts(&base);
    summary.insert("jumps".into(), json!(cdf.jump_points().len()));
    summary.insert("mass".into(), json!(cdf.mass()));
    run.finish(summary)
}

fn deitmar_check(a: DeitmarArgs, manifest: Option<PathBuf>) -> CliResult<String> {
    let mut run = Run::new("deitmar check", manifest);
    let g = load_graph(&mut run, &a.graph.graph)?;
    run.setting("tol", a.tol);
    let q = g.regularity().require_q("the tree determinant identity")?;
    let grid = parse_grid(&mut run, &a.grid, q)?;
    let check = DeitmarCheck::new(&g)?;
    let points = grid.points();
    let residuals = points.par_iter().map(|&u| check.residual(u)).collect::<ihara::Result<Vec<f64>>>()?;
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    if !(worst <= a.tol) {
        return Err(CliError::Failure(format!("residual {worst:e} exceeds {:e}", a.tol)));
    }
    let mut summary = graph_facts(&g);
    summary.insert("points".into(), json!(points.len()));
    summary.insert("max_residual".into(), json!(worst));
    run.finish(summary)
}
