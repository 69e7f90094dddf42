use std::collections::BTreeMap;
use std::path::Path;

use mckay_core::chambers::{arrangement_cells, chamber_scan, Profile};
use mckay_core::check::{check_zeta, sweep, CheckReport, SweepReport};
use mckay_core::flow::{quiver_ref, FlowJson};
use mckay_core::lattice::{check_exactness, ExactnessReport};
use mckay_core::oracle::{project_and_hull, Hull, HullJson};
use mckay_core::scalar::rat_string;
use mckay_core::toric::{
    build_fan, classify_cone, crepancy_check, extreme_points, tangent_cone, ConeClass, ConeJson,
    ConeReport, CrepancyReport, ExtremePoint, FanJson,
};
use mckay_core::trees::{admissible_cone, enumerate_ic_trees};
use mckay_core::{Configuration, Quiver, ZetaVector};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::output::{emit, emit_text, to_json, write_atomic};
use crate::{input, off, ActionArgs, CliError, CliResult, OutputArgs, QuiverFormat, ZetaArgs};

type Rat = BigRational;

fn strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(rat_string).collect()
}

pub fn quiver(action: &ActionArgs, format: QuiverFormat, out: &OutputArgs) -> CliResult<()> {
    let q = input::quiver(action)?;
    match format {
        QuiverFormat::Json => emit(out, &q.to_json()),
        QuiverFormat::Dot => emit_text(out, &q.to_dot()),
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct IcTreeJson {
    tree_arrows: Vec<usize>,
    closure_arrows: Vec<usize>,
    admissible_cone_forms: Vec<String>,
    tangent_cone_generators: Vec<Vec<i64>>,
    orbit_size: usize,
    class: ConeClass,
}

pub fn ic_trees(
    action: &ActionArgs,
    reduce: bool,
    singular_only: bool,
    out: &OutputArgs,
) -> CliResult<()> {
    let q = input::quiver(action)?;
    let catalog = enumerate_ic_trees(&q, reduce)?;
    let mut entries = Vec::new();
    for t in &catalog.trees {
        let cone = tangent_cone(&q, &t.tree);
        let report = classify_cone(&cone);
        if singular_only && report.smooth {
            continue;
        }
        let forms = admissible_cone(&q, &t.tree)?;
        entries.push(IcTreeJson {
            tree_arrows: t.tree.arrows().to_vec(),
            closure_arrows: t.closure.arrows().to_vec(),
            admissible_cone_forms: forms.forms.iter().map(ToString::to_string).collect(),
            tangent_cone_generators: cone.to_json().rays,
            orbit_size: t.orbit_size,
            class: report.class,
        });
    }
    eprintln!(
        "{}: {} spanning trees, {} IC-trees, {} listed{}",
        quiver_ref(&q),
        catalog.spanning_trees,
        catalog.unreduced_count,
        entries.len(),
        if reduce { " up to translation" } else { "" }
    );
    emit(out, &entries)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct VertexJson {
    point: Vec<String>,
    tree: Option<Configuration>,
    support: Configuration,
    flow: FlowJson,
    tangent_cone: ConeJson,
    cone: ConeReport,
}

fn vertex_json(q: &Quiver, p: &ExtremePoint) -> VertexJson {
    VertexJson {
        point: strings(&p.point),
        tree: p.tree.clone(),
        support: p.support.clone(),
        flow: p.flow.to_json(q),
        tangent_cone: p.cone.to_json(),
        cone: classify_cone(&p.cone),
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct PolytopeJson {
    action: String,
    zeta: Vec<String>,
    generic: bool,
    vertices: Vec<VertexJson>,
    hull: HullJson,
}

/// `C_ζ = conv(vertices) + ℝⁿ₊` in type coordinates.
fn hull_of(q: &Quiver, points: &[ExtremePoint]) -> Hull {
    let n = q.type_count();
    let unit = |i: usize| {
        (0..n)
            .map(|j| if i == j { Rat::one() } else { Rat::zero() })
            .collect::<Vec<_>>()
    };
    let identity: Vec<Vec<Rat>> = (0..n).map(unit).collect();
    let vertices: Vec<Vec<Rat>> = points.iter().map(|p| p.point.clone()).collect();
    project_and_hull(&vertices, &identity, &identity)
}

fn polytope_data(q: &Quiver, zeta: &ZetaVector) -> CliResult<(PolytopeJson, Hull)> {
    let points = extreme_points(q, zeta)?;
    let hull = hull_of(q, &points);
    let json = PolytopeJson {
        action: quiver_ref(q),
        zeta: zeta.to_strings(),
        generic: zeta.is_generic(),
        vertices: points.iter().map(|p| vertex_json(q, p)).collect(),
        hull: hull.to_json(),
    };
    Ok((json, hull))
}

fn off_text(q: &Quiver, hull: &Hull) -> CliResult<String> {
    if q.type_count() != 3 {
        return Err(CliError::Input(format!(
            "OFF export needs three arrow types, this action has {}",
            q.type_count()
        )));
    }
    Ok(off::render(hull))
}

pub fn polytope(
    action: &ActionArgs,
    zeta: &ZetaArgs,
    off_path: Option<&Path>,
    out: &OutputArgs,
) -> CliResult<()> {
    let q = input::quiver(action)?;
    let zeta = input::zeta(&q, zeta)?;
    let (json, hull) = polytope_data(&q, &zeta)?;
    if let Some(path) = off_path {
        write_atomic(path, &off_text(&q, &hull)?)?;
    }
    emit(out, &json)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct FanOutput {
    action: String,
    zeta: Vec<String>,
    fan: FanJson,
}

fn fan_data(q: &Quiver, zeta: &ZetaVector) -> CliResult<FanOutput> {
    Ok(FanOutput {
        action: quiver_ref(q),
        zeta: zeta.to_strings(),
        fan: build_fan(q, zeta)?.to_json(),
    })
}

pub fn fan(action: &ActionArgs, zeta: &ZetaArgs, out: &OutputArgs) -> CliResult<()> {
    let q = input::quiver(action)?;
    let zeta = input::zeta(&q, zeta)?;
    emit(out, &fan_data(&q, &zeta)?)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ClassifiedVertex {
    point: Vec<String>,
    tree: Option<Configuration>,
    cone: ConeReport,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ClassifyOutput {
    action: String,
    zeta: Vec<String>,
    euler_number: usize,
    counts: BTreeMap<&'static str, usize>,
    vertices: Vec<ClassifiedVertex>,
}

fn classify_data(q: &Quiver, zeta: &ZetaVector) -> CliResult<ClassifyOutput> {
    let points = extreme_points(q, zeta)?;
    let mut counts = BTreeMap::new();
    let vertices: Vec<ClassifiedVertex> = points
        .iter()
        .map(|p| {
            let cone = classify_cone(&p.cone);
            *counts.entry(cone.class.kind()).or_insert(0) += 1;
            ClassifiedVertex {
                point: strings(&p.point),
                tree: p.tree.clone(),
                cone,
            }
        })
        .collect();
    Ok(ClassifyOutput {
        action: quiver_ref(q),
        zeta: zeta.to_strings(),
        euler_number: vertices.len(),
        counts,
        vertices,
    })
}

pub fn classify(action: &ActionArgs, zeta: &ZetaArgs, out: &OutputArgs) -> CliResult<()> {
    let q = input::quiver(action)?;
    let zeta = input::zeta(&q, zeta)?;
    emit(out, &classify_data(&q, &zeta)?)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CrepancyOutput {
    action: String,
    zeta: Vec<String>,
    euler_number: usize,
    #[serde(flatten)]
    report: CrepancyReport,
}

fn crepancy_data(q: &Quiver, zeta: &ZetaVector) -> CliResult<CrepancyOutput> {
    let fan = build_fan(q, zeta)?;
    Ok(CrepancyOutput {
        action: quiver_ref(q),
        zeta: zeta.to_strings(),
        euler_number: fan.maximal.len(),
        report: crepancy_check(&fan),
    })
}

pub fn crepancy(action: &ActionArgs, zeta: &ZetaArgs, out: &OutputArgs) -> CliResult<()> {
    let q = input::quiver(action)?;
    let zeta = input::zeta(&q, zeta)?;
    let data = crepancy_data(&q, &zeta)?;
    eprintln!("crepant: {}", data.report.crepant);
    emit(out, &data)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ChamberJson {
    vertices: usize,
    smooth: bool,
    kinds: BTreeMap<String, usize>,
    singular: Vec<ConeClass>,
    supports: Vec<Configuration>,
    samples: Vec<Vec<String>>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ChambersOutput {
    action: String,
    samples: usize,
    cells: Option<usize>,
    chambers: Vec<ChamberJson>,
    non_generic: Vec<Vec<String>>,
}

fn chamber_json(profile: &Profile, samples: Vec<Vec<String>>) -> ChamberJson {
    ChamberJson {
        vertices: profile.vertices,
        smooth: profile.is_smooth(),
        kinds: profile.kinds.clone(),
        singular: profile.singular.clone(),
        supports: profile.key.clone(),
        samples,
    }
}

pub fn chambers(
    action: &ActionArgs,
    zeta: &ZetaArgs,
    cells: bool,
    out: &OutputArgs,
) -> CliResult<()> {
    let q = input::quiver(action)?;
    let mut samples = input::zetas(&q, zeta)?;
    let cell_count = if cells {
        let found = arrangement_cells(&q)?;
        let n = found.len();
        samples.extend(found.into_iter().map(|c| c.sample));
        Some(n)
    } else {
        None
    };
    if samples.is_empty() {
        return Err(CliError::Input(
            "no samples: give --zeta, --zeta-file or --cells".into(),
        ));
    }
    let report = chamber_scan(&q, &samples)?;
    let chambers: Vec<ChamberJson> = report
        .chambers
        .iter()
        .map(|c| {
            chamber_json(
                &c.profile,
                c.samples.iter().map(|&i| samples[i].to_strings()).collect(),
            )
        })
        .collect();
    eprintln!(
        "{} samples, {} chambers, {} smooth",
        samples.len(),
        chambers.len(),
        chambers.iter().filter(|c| c.smooth).count()
    );
    emit(
        out,
        &ChambersOutput {
            action: quiver_ref(&q),
            samples: samples.len(),
            cells: cell_count,
            chambers,
            non_generic: report
                .non_generic
                .iter()
                .map(|&i| samples[i].to_strings())
                .collect(),
        },
    )
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CheckOutput {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    zeta: Vec<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep: Option<SweepReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exactness: Option<ExactnessReport>,
    passed: bool,
}

pub fn check(
    action: &ActionArgs,
    zeta: &ZetaArgs,
    all_zeta: Option<&str>,
    basic_stride: usize,
    exactness: bool,
    out: &OutputArgs,
) -> CliResult<()> {
    let q = input::quiver(action)?;
    let range = all_zeta.map(input::range).transpose()?;
    let zetas = input::zetas(&q, zeta)?;
    if zetas.is_empty() && range.is_none() && !exactness {
        return Err(CliError::Input(
            "nothing to check: give --zeta, --zeta-file, --all-zeta or --exactness".into(),
        ));
    }
    let reports = zetas
        .iter()
        .map(|z| check_zeta(&q, z))
        .collect::<Result<Vec<_>, _>>()?;
    let sweep = range
        .map(|(lo, hi)| sweep(&q, lo, hi, basic_stride.max(1)))
        .transpose()?;
    let exactness = exactness.then(|| check_exactness(&q));
    let passed = reports.iter().all(|r| r.passed)
        && sweep.as_ref().is_none_or(|s| s.passed)
        && exactness.as_ref().is_none_or(|e| e.passed);
    for r in &reports {
        for c in r.comparisons.iter().filter(|c| !c.ok) {
            eprintln!(
                "FAIL {} at zeta ({}): {}",
                c.name,
                r.zeta.join(","),
                c.detail
            );
        }
    }
    if let Some(s) = &sweep {
        eprintln!(
            "sweep {}..{}: {} points, {} failures",
            s.range.0,
            s.range.1,
            s.grid_points,
            s.failures.len()
        );
    }
    emit(
        out,
        &CheckOutput {
            zeta: reports,
            sweep,
            exactness,
            passed,
        },
    )?;
    if passed {
        Ok(())
    } else {
        Err(CliError::CheckFailed)
    }
}

pub fn export(action: &ActionArgs, zeta: &ZetaArgs, dir: &Path) -> CliResult<()> {
    let q = input::quiver(action)?;
    let zeta = input::zeta(&q, zeta)?;
    std::fs::create_dir_all(dir).map_err(|source| CliError::Write {
        path: dir.display().to_string(),
        source,
    })?;
    let (poly, hull) = polytope_data(&q, &zeta)?;
    let mut files: Vec<(&str, String)> = vec![
        ("quiver.json", to_json(&q.to_json())),
        ("quiver.dot", q.to_dot()),
        ("polytope.json", to_json(&poly)),
        ("fan.json", to_json(&fan_data(&q, &zeta)?)),
        ("classify.json", to_json(&classify_data(&q, &zeta)?)),
        ("crepancy.json", to_json(&crepancy_data(&q, &zeta)?)),
    ];
    if q.type_count() == 3 {
        files.push(("polytope.off", off_text(&q, &hull)?));
    }
    for (name, text) in &files {
        write_atomic(&dir.join(name), text)?;
    }
    eprintln!("wrote {} files to {}", files.len(), dir.display());
    Ok(())
}
