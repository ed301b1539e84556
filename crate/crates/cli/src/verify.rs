//! The `verify` suites. Each suite is a list of named checks; the run fails
//! if any check fails.

use rayon::prelude::*;
use serde::Serialize;

use qmckay::fusion::FusionRing;
use qmckay::meshquiver::MeshSigns;
use qmckay::oq::{build_oq, build_oq_compositional, verify_triangle, TriangleCase};
use qmckay::quiverrep::{commuting_diagram_check, tilting_endo_check, transport_table};
use qmckay::sheafcat::{SerreReport, SheafCategory};
use qmckay::{DynkinGraph, Error, HeightFunction, QuantumSubgroup, Sign};

use crate::config::{Config, Format, Suite};
use crate::render::json;
use crate::{CliError, Output};

/// Graphs with at most this many height functions are checked at every
/// height; larger ones at the bipartite height only.
const ALL_HEIGHTS_LIMIT: usize = 64;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(name: &str, passed: bool, detail: Option<String>) -> Self {
        Check {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<String>,
    pub h: usize,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

struct Context {
    h: usize,
    graph: Option<DynkinGraph>,
    sheaf: std::result::Result<SheafCategory, String>,
    cap: usize,
}

pub fn verify(config: &Config) -> Result<Output, CliError> {
    let report = run(config)?;
    let text = match config.format.unwrap_or(Format::Json) {
        Format::Json => json(&report)?,
        Format::Text => {
            let mut t = String::new();
            for s in &report.suites {
                for c in &s.checks {
                    let status = if c.passed { "PASS" } else { "FAIL" };
                    let detail = c
                        .detail
                        .as_deref()
                        .map(|d| format!("  ({d})"))
                        .unwrap_or_default();
                    t.push_str(&format!("{status} {}/{}{detail}\n", s.suite, c.name));
                }
            }
            t.push_str(if report.passed {
                "all checks passed\n"
            } else {
                "some checks failed\n"
            });
            t
        }
        f => {
            return Err(CliError::Config(
                format!("verify cannot be written as {f:?}").to_lowercase(),
            ))
        }
    };
    Ok(Output {
        text,
        failed: !report.passed,
    })
}

pub fn run(config: &Config) -> Result<VerifyReport, CliError> {
    let graph = config.graph()?;
    let h = config.coxeter_number()?;
    let suites = config.suites();
    let needs_graph = suites
        .iter()
        .any(|s| !matches!(s, Suite::Fusion | Suite::OqTriangles));
    if needs_graph && graph.is_none() {
        return Err(CliError::Config("the selected suites need a graph".into()));
    }
    let sheaf = match &graph {
        Some(g) => QuantumSubgroup::build(g)
            .map(|q| SheafCategory::new(&q))
            .map_err(|e| e.to_string()),
        None => Err("no graph given".to_string()),
    };
    let ctx = Context {
        h,
        cap: config.cap(h)?,
        graph,
        sheaf,
    };
    let jobs = config.jobs.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {jobs} workers: {e}")))?;
    let reports: Vec<SuiteReport> = pool.install(|| {
        suites
            .par_iter()
            .map(|&s| run_suite(&ctx, s))
            .collect::<Result<Vec<_>, Error>>()
    })?;
    Ok(VerifyReport {
        graph: ctx.graph.as_ref().map(DynkinGraph::name),
        h,
        passed: reports.iter().all(|r| r.passed),
        suites: reports,
    })
}

fn run_suite(ctx: &Context, suite: Suite) -> Result<SuiteReport, Error> {
    let checks = match suite {
        Suite::Fusion => fusion_checks(ctx.h)?,
        Suite::Subgroup => subgroup_checks(ctx),
        Suite::OqTriangles => triangle_checks(ctx.h)?,
        other => match &ctx.sheaf {
            Err(reason) => vec![Check::new("admissible", false, Some(reason.clone()))],
            Ok(s) => match other {
                Suite::Kgroup => kgroup_checks(s)?,
                Suite::Serre => serre_checks(s),
                Suite::PropHom => prop_hom_checks(s),
                Suite::MeshVsRep => mesh_checks(s, ctx.cap)?,
                Suite::BgpDiagram => bgp_checks(s)?,
                _ => unreachable!("handled above"),
            },
        },
    };
    Ok(SuiteReport {
        suite: suite.name().to_string(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn fusion_checks(h: usize) -> Result<Vec<Check>, Error> {
    let ring = FusionRing::new(h)?;
    let witness = ring.associativity_witness();
    let defect = ring.qdim_defect();
    Ok(vec![
        Check::new(
            "associativity",
            witness.is_none(),
            witness.map(|(a, b, c, k)| format!("fails at V{a}, V{b}, V{c}, coefficient of V{k}")),
        ),
        Check::new(
            "qdim-multiplicative",
            defect < 1e-9,
            Some(format!("max defect {defect:.3e}")),
        ),
    ])
}

fn subgroup_checks(ctx: &Context) -> Vec<Check> {
    let g = ctx.graph.as_ref().expect("graph suites have a graph");
    match QuantumSubgroup::build(g) {
        Ok(q) => {
            let defect = q.spectral_defect();
            vec![
                Check::new(
                    "admissible",
                    true,
                    Some(format!(
                        "base vertex {}, M_h-2 an involutive permutation",
                        q.base_vertex() + 1
                    )),
                ),
                Check::new(
                    "spectrum",
                    defect < 1e-9,
                    Some(format!("max defect {defect:.3e}")),
                ),
            ]
        }
        Err(e) => vec![Check::new("admissible", false, Some(e.to_string()))],
    }
}

fn triangle_checks(h: usize) -> Result<Vec<Check>, Error> {
    let forms = build_oq(h)? == build_oq_compositional(h)?;
    let mut failing = Vec::new();
    let mut cases = std::collections::BTreeSet::new();
    for n in 0..2 * h {
        let r = verify_triangle(h, n)?;
        cases.extend(r.degrees.iter().map(|d| d.case as usize));
        if !r.passed() {
            failing.push(n.to_string());
        }
    }
    let mut checks = vec![
        Check::new("closed-form", forms, None),
        Check::new(
            "triangles",
            failing.is_empty(),
            (!failing.is_empty()).then(|| format!("twists failing: {}", failing.join(","))),
        ),
    ];
    if h >= 4 {
        checks.push(Check::new(
            "cases-exercised",
            cases.len() == TriangleCase::ALL.len(),
            Some(format!("{} of {}", cases.len(), TriangleCase::ALL.len())),
        ));
    }
    Ok(checks)
}

fn kgroup_checks(s: &SheafCategory) -> Result<Vec<Check>, Error> {
    let g = s.graph();
    let n = g.rank();
    let k = s.k_group()?;
    let c = s.coxeter_action()?;
    Ok(vec![
        Check::new(
            "indecomposables",
            s.len() == n * g.h(),
            Some(format!("{} objects", s.len())),
        ),
        Check::new(
            "free-of-rank",
            k.free_of_rank(n),
            Some(format!("rank {}", k.rank)),
        ),
        Check::new("relations-in-kernel", k.relations_in_kernel, None),
        Check::new("projection-unimodular", k.projection_unimodular, None),
        Check::new("root-bijection", k.root_bijection, None),
        Check::new("euler-cartan", k.euler_matches_cartan, None),
        Check::new("euler-descends", k.euler_descends, None),
        Check::new("twist-well-defined", c.well_defined, None),
        Check::new(
            "twist-order",
            c.order == Some(g.h()),
            Some(format!(
                "order {}",
                c.order.map_or("> 4h".to_string(), |o| o.to_string())
            )),
        ),
        Check::new("twist-charpoly", c.charpoly == c.expected_charpoly, None),
    ])
}

fn serre_detail(r: &SerreReport) -> Option<String> {
    let first = r.examples.first()?;
    Some(format!(
        "{} of {} pairs differ, e.g. X={} Y={}: hom {} ext {}",
        r.violations, r.pairs, first.x, first.y, first.hom, first.ext
    ))
}

fn serre_checks(s: &SheafCategory) -> Vec<Check> {
    let literal = s.serre_check();
    let ar = s.serre_check_ar();
    vec![
        Check::new(
            "hom(X,Y)=ext(Y,X(2))",
            literal.passed(),
            serre_detail(&literal),
        ),
        Check::new("hom(X,Y)=ext(Y,X(-2))", ar.passed(), serre_detail(&ar)),
    ]
}

fn prop_hom_checks(s: &SheafCategory) -> Vec<Check> {
    let r = s.prop_hom_checklist(true);
    vec![
        Check::new("self-hom", r.self_hom_is_one, None),
        Check::new("self-ext", r.self_ext_vanishes, None),
        Check::new("neighbour-homs", r.neighbor_homs, None),
        Check::new(
            "slice-ext",
            r.slice_ext_vanishes.unwrap_or(true),
            Some(format!("{} heights", r.heights_checked)),
        ),
        Check::new("slice-reverse-paths", r.slice_paths_reverse_vanish, None),
    ]
}

fn heights(g: &DynkinGraph) -> Vec<HeightFunction> {
    if g.h() << (g.rank() - 1) <= ALL_HEIGHTS_LIMIT {
        g.enumerate_heights()
    } else {
        vec![g.bipartite_height()]
    }
}

fn mesh_checks(s: &SheafCategory, cap: usize) -> Result<Vec<Check>, Error> {
    let g = s.graph();
    let signs = MeshSigns::canonical(g);
    let mesh = s.quiver().mesh_hom_table(cap, &signs)?;
    let stable = s.quiver().mesh_hom_table(cap + 2 * s.h(), &signs)? == mesh;
    let closed = s.hom_table();
    let hs = heights(g);
    let bad: Vec<String> = hs
        .par_iter()
        .map(|ht| Ok((ht, transport_table(s, ht)?)))
        .collect::<Result<Vec<_>, Error>>()?
        .into_iter()
        .filter(|(_, t)| t.hom != mesh || t.ext != closed.ext)
        .map(|(ht, _)| ht.to_string())
        .collect();
    Ok(vec![
        Check::new(
            "mesh-vs-closed-form",
            mesh == closed.hom,
            Some(format!("cap {cap}")),
        ),
        Check::new(
            "cap-stable",
            stable,
            Some(format!("cap {}", cap + 2 * s.h())),
        ),
        Check::new(
            "transport",
            bad.is_empty(),
            Some(if bad.is_empty() {
                format!("{} heights", hs.len())
            } else {
                format!("differs at {}", bad.join(" "))
            }),
        ),
    ])
}

fn bgp_checks(s: &SheafCategory) -> Result<Vec<Check>, Error> {
    let g = s.graph();
    let hs = heights(g);
    let mut flips = Vec::new();
    for ht in &hs {
        let omega = ht.orientation(g);
        flips.extend(omega.sources().into_iter().map(|i| (ht, i, Sign::Plus)));
        flips.extend(omega.sinks().into_iter().map(|i| (ht, i, Sign::Minus)));
    }
    let reports = flips
        .par_iter()
        .map(|&(ht, i, sign)| commuting_diagram_check(s, ht, i, sign))
        .collect::<Result<Vec<_>, Error>>()?;
    let failing: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{}{}", r.sign, r.vertex))
        .collect();
    let tilting_bad = hs
        .iter()
        .filter(|ht| !tilting_endo_check(s, ht).mismatches.is_empty())
        .count();
    Ok(vec![
        Check::new(
            "commuting-diagram",
            failing.is_empty(),
            Some(if failing.is_empty() {
                format!("{} flips over {} heights", reports.len(), hs.len())
            } else {
                format!("mismatches at {}", failing.join(" "))
            }),
        ),
        Check::new(
            "tilting",
            tilting_bad == 0,
            Some(format!("{} of {} heights differ", tilting_bad, hs.len())),
        ),
    ])
}
