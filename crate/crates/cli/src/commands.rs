use std::path::Path;
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use finshape::census::{random_cover, random_poset};
use finshape::covers::{canonical_projection_closed, leq_c as find_projection};
use finshape::homology::{homology, weak_invariants};
use finshape::homotopy::{beat_points, core, homotopy_equivalent, BeatDirection};
use finshape::io::{complex_to_json, cover_to_json, read_cover, read_cover_of, read_space, space_to_json};
use finshape::prosystem::{
    build_m, sw_compare as compare, verify_coherence, verify_rudimentary, Evidence, SwOptions, SystemKind, Verdict,
};
use finshape::simplicial::{finite_subdivision, order_complex};
use finshape::{Cover, Error, FiniteSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::output::Report;
use crate::{Failure, Format, RunConfig};

fn with_path(path: &Path, e: Error) -> Failure {
    match Failure::from(e) {
        Failure::Input(m) => Failure::Input(format!("{}: {m}", path.display())),
        guard => guard,
    }
}

pub fn load_space(path: &Path) -> Result<Arc<FiniteSpace>, Failure> {
    read_space(path).map(Arc::new).map_err(|e| with_path(path, e))
}

pub fn load_cover(path: &Path) -> Result<Cover, Failure> {
    read_cover(path).map_err(|e| with_path(path, e))
}

fn load_cover_pair(fine: &Path, coarse: &Path) -> Result<(Cover, Cover), Failure> {
    let f = load_cover(fine)?;
    let c = read_cover_of(coarse, f.space()).map_err(|e| with_path(coarse, e))?;
    Ok((f, c))
}

fn labels(cover: &Cover) -> String {
    cover.member_labels().join(" ")
}

pub fn info(path: &Path, config: &RunConfig) -> Result<Report, Failure> {
    let g = config.guards();
    let x = load_space(path)?;
    let components = x.connected_components().len();
    let opens = x.all_opens(g.opens)?.len();
    let beats: Vec<String> = beat_points(&x)
        .into_iter()
        .map(|(p, d)| {
            let dir = match d {
                BeatDirection::Down => "down",
                BeatDirection::Up => "up",
            };
            format!("{}({dir})", x.label(p))
        })
        .collect();
    let c = core(&x);
    let h = weak_invariants(&x, g.faces)?;
    let json = json!({
        "elements": x.labels(),
        "components": components,
        "opens": opens,
        "beat_points": beats,
        "core": c.len(),
        "core_elements": c.space().labels(),
        "contractible": c.len() == 1,
        "homology": h.to_json(),
    });
    Ok(Report::new(true, json)
        .row("elements", x.len())
        .row("components", components)
        .row("opens", opens)
        .row("beat points", if beats.is_empty() { "none".into() } else { beats.join(" ") })
        .row("core", c.len())
        .row("contractible", c.len() == 1)
        .row("H", h))
}

pub fn basis_like(path: &Path, _config: &RunConfig) -> Result<Report, Failure> {
    let u = load_cover(path)?;
    let ok = u.is_basis_like();
    Ok(Report::new(ok, json!({ "cover": cover_to_json(&u), "basis_like": ok }))
        .row("cover", labels(&u))
        .row("basis-like", ok))
}

pub fn refines(fine: &Path, coarse: &Path, _config: &RunConfig) -> Result<Report, Failure> {
    let (f, c) = load_cover_pair(fine, coarse)?;
    let ok = f.refines(&c)?;
    Ok(Report::new(ok, json!({ "refines": ok })).row("fine", labels(&f)).row("coarse", labels(&c)).row("refines", ok))
}

pub fn leq_c(fine: &Path, coarse: &Path, _config: &RunConfig) -> Result<Report, Failure> {
    let (f, c) = load_cover_pair(fine, coarse)?;
    let found = find_projection(&f, &c)?;
    let fl = f.member_labels();
    let cl = c.member_labels();
    let report = Report::new(found.is_some(), json!(null)).row("fine", labels(&f)).row("coarse", labels(&c));
    Ok(match found {
        None => {
            let mut r = report.row("projection", "None");
            r.json = json!({ "projection": null });
            r
        }
        Some(p) => {
            let pairs: Vec<(&str, &str)> =
                p.assignment().iter().enumerate().map(|(i, &j)| (fl[i].as_str(), cl[j].as_str())).collect();
            let mut r = report;
            for (a, b) in &pairs {
                r = r.row(format!("  {a}"), format!("-> {b}"));
            }
            r.json = json!({ "projection": pairs });
            r
        }
    })
}

pub fn rudimentary(path: &Path, config: &RunConfig) -> Result<Report, Failure> {
    let x = load_space(path)?;
    let r = verify_rudimentary(&x, &config.guards())?;
    let json = json!({
        "covers_checked": r.covers_checked,
        "above_basis": r.above_basis,
        "failures": r.failures,
        "passed": r.passed(),
    });
    let mut report = Report::new(r.passed(), json)
        .row("basis-like covers", r.covers_checked)
        .row("above the basis", r.above_basis.len())
        .row("failures", r.failures.len());
    for f in &r.failures {
        report = report.row("", format!("  {f}"));
    }
    Ok(report)
}

pub fn coherence(path: &Path, config: &RunConfig) -> Result<Report, Failure> {
    let g = config.guards();
    let x = load_space(path)?;
    let system = build_m(&x, SystemKind::Full, &g)?;
    let r = verify_coherence(&system, &g, config.parallel);
    let failures: Vec<String> =
        r.failures.iter().map(|f| format!("{} <= {} <= {}: {}", f.fine, f.middle, f.coarse, f.reason)).collect();
    let json = json!({
        "index_size": r.index_size,
        "relation_edges": r.relation_edges,
        "directed": r.directed,
        "triples_checked": r.triples_checked,
        "failures": failures,
        "passed": r.passed(),
    });
    let mut report = Report::new(r.passed(), json)
        .row("index size", r.index_size)
        .row("relation edges", r.relation_edges)
        .row("directed", r.directed)
        .row("triples checked", r.triples_checked)
        .row("failures", failures.len());
    for f in &failures {
        report = report.row("", format!("  {f}"));
    }
    Ok(report)
}

pub fn sw_compare(left: &Path, right: &Path, config: &RunConfig) -> Result<Report, Failure> {
    let x = load_space(left)?;
    let y = load_space(right)?;
    let options = SwOptions { guards: config.guards(), ..SwOptions::default() };
    let v = compare(&x, &y, &options);
    let verdict = match v.verdict {
        Verdict::Distinct => "Distinct",
        Verdict::Equivalent => "Equivalent",
        Verdict::Unknown => "Unknown",
    };
    let mut report = Report::new(v.verdict == Verdict::Equivalent, v.to_json()).row("verdict", verdict);
    report = match &v.evidence {
        Evidence::Invariants { left, right } => report.row("left H", left).row("right H", right),
        Evidence::Certificate(c) => report
            .row("subdivisions", format!("{} / {}", c.left_subdivisions, c.right_subdivisions))
            .row("removals", format!("{} / {}", c.left_removals.len(), c.right_removals.len()))
            .row("core size", c.isomorphism.len()),
        Evidence::Inconclusive { reason, .. } => report.row("reason", reason),
    };
    Ok(report)
}

pub fn export_hasse(path: &Path, _config: &RunConfig) -> Result<Report, Failure> {
    let x = load_space(path)?;
    let mut report = Report::new(true, space_to_json(&x)).with_default(Format::Dot).with_dot(x.hasse_dot());
    for (a, b) in x.covering_pairs() {
        report = report.row(x.label(a), format!("< {}", x.label(b)));
    }
    Ok(report)
}

pub fn export_order_complex(path: &Path, config: &RunConfig) -> Result<Report, Failure> {
    let x = load_space(path)?;
    let k = order_complex(&x, config.guards().faces)?;
    let mut report = Report::new(true, complex_to_json(&k)).with_default(Format::Json);
    report = report.row("f-vector", format!("{:?}", k.f_vector()));
    for f in k.facets() {
        report = report.row("facet", k.format_face(&f));
    }
    Ok(report)
}

pub fn export_nerve(path: &Path, config: &RunConfig) -> Result<Report, Failure> {
    let u = load_cover(path)?;
    let n = u.nerve(config.guards().faces)?;
    let mut report = Report::new(true, complex_to_json(&n)).with_default(Format::Json);
    report = report.row("f-vector", format!("{:?}", n.f_vector()));
    for f in n.facets() {
        report = report.row("facet", n.format_face(&f));
    }
    Ok(report)
}

pub fn export_homology(path: &Path, config: &RunConfig) -> Result<Report, Failure> {
    let x = load_space(path)?;
    let h = weak_invariants(&x, config.guards().faces)?;
    Ok(Report::new(true, h.to_json()).with_default(Format::Json).row("H", &h))
}

/// Seeded random checks of the invariants the library promises.
pub fn sweep(count: usize, max_elements: usize, config: &RunConfig) -> Result<Report, Failure> {
    let g = config.guards();
    let seed = config
        .seed
        .unwrap_or_else(|| SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_nanos() as u64).unwrap_or(0));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures: Vec<String> = Vec::new();
    let mut skipped = 0usize;
    let mut checks = 0usize;
    for i in 0..count {
        let n = rng.gen_range(1..=max_elements);
        let density = rng.gen_range(0.2..0.7);
        let x = Arc::new(random_poset(n, density, &mut rng));
        let mut fail = |what: &str| failures.push(format!("space {i} ({n} elements): {what}"));
        let outcome = (|| -> finshape::Result<Vec<(&'static str, bool)>> {
            let h = weak_invariants(&x, g.faces)?.trimmed();
            let sd = finite_subdivision(&x, g.faces)?;
            let subdivision = weak_invariants(&sd, g.faces)?.trimmed() == h;
            let c = core(&x);
            let core_ok = homotopy_equivalent(&x, c.space(), &g)?;
            let u = random_cover(&x, &mut rng, g.opens)?.intersection_closure();
            let basis = Cover::minimal_basis(x.clone());
            let closure_ok = u.is_basis_like() && canonical_projection_closed(&basis, &u)?.is_valid();
            let nerve_ok =
                homology(&u.nerve(g.faces)?)?.trimmed() == homology(&order_complex(&u.to_poset(), g.faces)?)?.trimmed();
            Ok(vec![
                ("subdivision changes the homology", subdivision),
                ("core is not homotopy equivalent", core_ok),
                ("closure projection", closure_ok),
                ("nerve and cover poset disagree", nerve_ok),
            ])
        })();
        match outcome {
            Ok(results) => {
                for (what, ok) in results {
                    checks += 1;
                    if !ok {
                        fail(what);
                    }
                }
            }
            Err(Error::SizeGuardExceeded { .. }) => skipped += 1,
            Err(e) => fail(&e.to_string()),
        }
    }
    let passed = failures.is_empty();
    let json = json!({
        "seed": seed,
        "spaces": count,
        "checks": checks,
        "skipped": skipped,
        "failures": failures,
        "passed": passed,
    });
    let mut report = Report::new(passed, json)
        .row("seed", seed)
        .row("spaces", count)
        .row("checks", checks)
        .row("skipped", skipped)
        .row("failures", failures.len());
    for f in &failures {
        report = report.row("", format!("  {f}"));
    }
    Ok(report)
}
