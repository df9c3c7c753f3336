//! The worked examples, replayed against the versioned fixtures.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use finshape::covers::{enumerate_covers, leq_c};
use finshape::homology::homology;
use finshape::homotopy::{beat_points, core, is_contractible};
use finshape::io::{parse_space, CoverFile, SpaceRef};
use finshape::simplicial::{face_poset, order_complex};
use finshape::{Collapsibility, Cover, CoverFilter, FiniteSpace};
use serde_json::json;

use crate::output::Report;
use crate::{Failure, RunConfig};

const BUNDLED: &[(&str, &str)] = &[
    ("circle_topology.json", include_str!("../fixtures/v1/circle_topology.json")),
    ("circle_hasse.json", include_str!("../fixtures/v1/circle_hasse.json")),
    ("circle_cover.json", include_str!("../fixtures/v1/circle_cover.json")),
    ("wedge.json", include_str!("../fixtures/v1/wedge.json")),
    ("wedge_pair.json", include_str!("../fixtures/v1/wedge_pair.json")),
    ("wedge_closure.json", include_str!("../fixtures/v1/wedge_closure.json")),
];

struct Fixtures {
    dir: Option<PathBuf>,
}

impl Fixtures {
    fn text(&self, name: &str) -> Result<String, String> {
        match &self.dir {
            Some(d) => std::fs::read_to_string(d.join(name)).map_err(|e| format!("{name}: {e}")),
            None => BUNDLED
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, t)| t.to_string())
                .ok_or_else(|| format!("no bundled fixture {name}")),
        }
    }

    fn space(&self, name: &str) -> Result<Arc<FiniteSpace>, String> {
        parse_space(&self.text(name)?).map(Arc::new).map_err(|e| format!("{name}: {e}"))
    }

    fn cover(&self, name: &str) -> Result<Cover, String> {
        let file: CoverFile = serde_json::from_str(&self.text(name)?).map_err(|e| format!("{name}: {e}"))?;
        let space = match &file.space {
            SpaceRef::Path(p) => self.space(&p.to_string_lossy())?,
            SpaceRef::Inline(s) => Arc::new(s.build().map_err(|e| format!("{name}: {e}"))?),
        };
        Cover::from_labels(space, &file.members).map_err(|e| format!("{name}: {e}"))
    }
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn circle_model(fx: &Fixtures, config: &RunConfig) -> Outcome {
    let g = config.guards();
    let x = fx.space("circle_topology.json")?;
    let hasse = fx.space("circle_hasse.json")?;
    ensure(*x == *hasse, || "topology and Hasse fixtures give different orders".into())?;
    let mut strict = Vec::new();
    for p in 0..x.len() {
        for q in 0..x.len() {
            if x.lt(p, q) {
                strict.push(format!("{}<{}", x.label(p), x.label(q)));
            }
        }
    }
    ensure(strict == ["a<c", "a<d", "b<c", "b<d"], || format!("order {}", strict.join(" ")))?;
    let bp = Cover::minimal_basis(x.clone()).to_poset();
    let iso = bp.is_homeomorphic(&x, g.elements).map_err(|e| e.to_string())?;
    ensure(iso.is_some(), || "basis poset is not isomorphic to the space".into())?;
    let k = order_complex(&bp, g.faces).map_err(|e| e.to_string())?;
    let h = homology(&k).map_err(|e| e.to_string())?;
    ensure(h.to_string() == "(Z; Z)", || format!("homology {h}"))?;
    ensure(beat_points(&x).is_empty() && !is_contractible(&x), || "the circle model has beat points".into())?;
    Ok("a,b < c,d; basis poset isomorphic; H = (Z; Z); no beat points".into())
}

fn nerve_sweep(fx: &Fixtures, config: &RunConfig) -> Outcome {
    let g = config.guards();
    let x = fx.space("circle_topology.json")?;
    let mut total = 0;
    for u in enumerate_covers(&x, CoverFilter::All, &g).map_err(|e| e.to_string())? {
        total += 1;
        let n = u.nerve(g.faces).map_err(|e| e.to_string())?;
        let certified = n.is_cone().is_some()
            || n.collapsible(g.collapse_steps) == Collapsibility::Collapsible
            || core(&face_poset(&n)).len() == 1;
        ensure(certified, || format!("nerve of {} is not certified contractible", u.member_labels().join(" ")))?;
    }
    ensure(total == 40, || format!("{total} covers instead of 40"))?;
    Ok(format!("{total} open covers, every nerve contractible"))
}

fn closure_pair(fx: &Fixtures, _config: &RunConfig) -> Outcome {
    let pair = fx.cover("wedge_pair.json")?;
    let closed = fx.cover("wedge_closure.json")?;
    ensure(closed == pair.intersection_closure(), || "closure fixture is not the intersection closure".into())?;
    ensure(closed.refines(&pair).map_err(|e| e.to_string())?, || "closure does not refine".into())?;
    let p = leq_c(&closed, &pair).map_err(|e| e.to_string())?;
    ensure(p.is_none(), || "found a projection from the closure onto the pair".into())?;
    Ok("closure refines the pair but has no projection onto it".into())
}

fn basis_versus_cover(fx: &Fixtures, _config: &RunConfig) -> Outcome {
    let u = fx.cover("circle_cover.json")?;
    let b = Cover::minimal_basis(u.space().clone());
    let p = leq_c(&b, &u).map_err(|e| e.to_string())?.ok_or("no projection from the basis")?;
    let labels = u.member_labels();
    let images: Vec<&str> = p.assignment().iter().map(|&i| labels[i].as_str()).collect();
    ensure(images == ["{a,b}", "{a,b}", "{a,b,c}", "{a,b,d}"], || format!("images {}", images.join(" ")))?;
    ensure(leq_c(&u, &b).map_err(|e| e.to_string())?.is_none(), || "cover has a projection onto the basis".into())?;
    ensure(is_contractible(&u.to_poset()), || "cover poset is not contractible".into())?;
    ensure(!is_contractible(&b.to_poset()), || "basis poset is contractible".into())?;
    Ok("basis projects onto U, U does not project onto the basis".into())
}

pub fn run(dir: Option<&Path>, config: &RunConfig) -> Result<Report, Failure> {
    let fx = Fixtures { dir: dir.map(Path::to_path_buf) };
    type Scenario = fn(&Fixtures, &RunConfig) -> Outcome;
    let scenarios: [(&str, Scenario); 4] = [
        ("circle-model", circle_model),
        ("nerve-sweep", nerve_sweep),
        ("closure-pair", closure_pair),
        ("basis-versus-cover", basis_versus_cover),
    ];
    let mut passed = true;
    let mut rows = Vec::new();
    let mut results = Vec::new();
    for (name, f) in scenarios {
        let outcome = f(&fx, config);
        passed &= outcome.is_ok();
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(e) => ("FAIL", e.clone()),
        };
        rows.push((name.to_string(), format!("{status}  {detail}")));
        results.push(json!({ "name": name, "passed": outcome.is_ok(), "detail": detail }));
    }
    let mut report = Report::new(passed, json!({ "scenarios": results, "passed": passed }));
    report.rows = rows;
    Ok(report)
}
