use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;

use qmckay::fusion::{FusionRing, TensorReport};
use qmckay::meshquiver::TranslationQuiver;
use qmckay::oq::{build_oq, triangle_table};
use qmckay::quiverrep::{
    commuting_diagram_check, rho_class, tilting_endo_check, RepCatalog, TiltingReport,
};
use qmckay::sheafcat::{CoxeterAction, GrothendieckGroup, SheafCategory};
use qmckay::subgroup::admissible_graphs;
use qmckay::{DynkinGraph, Error, QuantumSubgroup, Sign};

use crate::config::{Config, Format};
use crate::render::{csv, grid, json, sig12};
use crate::{CliError, Output};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShowWhat {
    Graph,
    Fusion,
    Oq,
    ArQuiver,
    Homtable,
    Kgroup,
}

fn unsupported(what: &str, format: Format) -> CliError {
    CliError::Config(format!("{what} cannot be written as {format:?}").to_lowercase())
}

pub fn sheaf_category(g: &DynkinGraph) -> Result<SheafCategory, CliError> {
    Ok(SheafCategory::new(&QuantumSubgroup::build(g)?))
}

pub fn show(config: &Config, what: ShowWhat, ext: bool) -> Result<Output, CliError> {
    let text = match what {
        ShowWhat::Graph => show_graph(config)?,
        ShowWhat::Fusion => show_fusion(config)?,
        ShowWhat::Oq => show_oq(config)?,
        ShowWhat::ArQuiver => show_ar_quiver(config)?,
        ShowWhat::Homtable => show_homtable(config, ext)?,
        ShowWhat::Kgroup => show_kgroup(config)?,
    };
    Ok(Output::ok(text))
}

fn show_graph(config: &Config) -> Result<String, CliError> {
    let g = config.require_graph()?;
    match config.format.unwrap_or(Format::Text) {
        Format::Json => json(&g.export()),
        Format::Csv => csv(g
            .cartan()
            .to_rows()
            .iter()
            .map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>())),
        Format::Dot => {
            let mut s = format!("graph \"{}\" {{\n", g.name());
            for i in 0..g.rank() {
                let _ = writeln!(s, "  {} [label=\"{}\"];", i + 1, i + 1);
            }
            for &(a, b) in g.edges() {
                let _ = writeln!(s, "  {} -- {};", a + 1, b + 1);
            }
            s.push_str("}\n");
            Ok(s)
        }
        Format::Text => {
            let edges: Vec<String> = g
                .edges()
                .iter()
                .map(|&(a, b)| format!("{}-{}", a + 1, b + 1))
                .collect();
            let parity: Vec<String> = g.parities().iter().map(u8::to_string).collect();
            Ok(format!(
                "graph {}\nrank {}\nh {}\nroots {}\nedges {}\nparity {}\n",
                g.name(),
                g.rank(),
                g.h(),
                g.roots().len(),
                edges.join(" "),
                parity.join(" ")
            ))
        }
    }
}

#[derive(Serialize)]
struct FusionExport {
    h: usize,
    products: Vec<TensorReport>,
    qdim: Vec<f64>,
}

fn show_fusion(config: &Config) -> Result<String, CliError> {
    let ring = FusionRing::new(config.coxeter_number()?)?;
    let h = ring.h();
    let n = ring.size();
    match config.format.unwrap_or(Format::Text) {
        Format::Json => {
            let mut products = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    products.push(TensorReport {
                        h,
                        tensor: [a, b],
                        result: ring.tensor(a, b)?,
                    });
                }
            }
            let qdim = (0..n)
                .map(|k| ring.qdim(k).map(sig12))
                .collect::<Result<_, Error>>()?;
            json(&FusionExport { h, products, qdim })
        }
        Format::Csv => {
            let mut rows = vec![std::iter::once("k".to_string())
                .chain(std::iter::once("row".to_string()))
                .chain((0..n).map(|b| format!("V{b}")))
                .collect::<Vec<_>>()];
            for k in 0..n {
                let m = ring.fusion_matrix(k)?;
                for a in 0..n {
                    let mut row = vec![k.to_string(), format!("V{a}")];
                    row.extend(m.row(a).iter().map(i64::to_string));
                    rows.push(row);
                }
            }
            csv(rows)
        }
        Format::Text => {
            let mut s = format!("fusion ring h = {h}\n");
            for a in 0..n {
                for b in a..n {
                    let _ = writeln!(s, "V{a} (x) V{b} = {}", ring.tensor(a, b)?);
                }
            }
            for k in 0..n {
                let _ = writeln!(s, "qdim V{k} = {}", sig12(ring.qdim(k)?));
            }
            Ok(s)
        }
        f => Err(unsupported("fusion", f)),
    }
}

#[derive(Serialize)]
struct OqRow {
    degree: usize,
    oq: [String; 2],
    twisted_tensor: [String; 2],
    twist_2: [String; 2],
    shift: [String; 2],
}

fn show_oq(config: &Config) -> Result<String, CliError> {
    let h = config.coxeter_number()?;
    let table = triangle_table(h)?;
    let headers = ["O_q", "O_q(1) (x) V1", "O_q(2)", "O_q[1]"];
    match config.format.unwrap_or(Format::Text) {
        Format::Json => {
            let rows: Vec<OqRow> = table
                .into_iter()
                .enumerate()
                .map(|(degree, [oq, twisted_tensor, twist_2, shift])| OqRow {
                    degree,
                    oq,
                    twisted_tensor,
                    twist_2,
                    shift,
                })
                .collect();
            #[derive(Serialize)]
            struct Export {
                h: usize,
                oq: std::collections::BTreeMap<String, qmckay::ObjectClass>,
                rows: Vec<OqRow>,
            }
            json(&Export {
                h,
                oq: build_oq(h)?.components(),
                rows,
            })
        }
        Format::Csv => {
            let mut rows = vec![vec!["degree".to_string()]];
            for name in headers {
                rows[0].push(format!("{name} deg0"));
                rows[0].push(format!("{name} deg1"));
            }
            for (k, row) in table.iter().enumerate() {
                let mut r = vec![k.to_string()];
                for col in row {
                    r.extend(col.iter().cloned());
                }
                rows.push(r);
            }
            csv(rows)
        }
        Format::Text => {
            let mut rows = vec![std::iter::once(String::new())
                .chain(headers.iter().flat_map(|h| [h.to_string(), String::new()]))
                .collect::<Vec<_>>()];
            for (k, row) in table.iter().enumerate() {
                let mut r = vec![k.to_string()];
                for col in row {
                    r.extend(col.iter().cloned());
                }
                rows.push(r);
            }
            Ok(format!(
                "O_q -> O_q(1) (x) V1 -> O_q(2) -> O_q[1], h = {h}\n\
                 rows: homogeneous degree; column pairs: homological degree 0, 1\n{}",
                grid(&rows)
            ))
        }
        f => Err(unsupported("oq", f)),
    }
}

#[derive(Serialize)]
struct QuiverExport {
    graph: String,
    h: usize,
    vertices: Vec<String>,
    arrows: Vec<[String; 2]>,
    tau: Vec<[String; 2]>,
}

fn show_ar_quiver(config: &Config) -> Result<String, CliError> {
    let g = config.require_graph()?;
    let q = TranslationQuiver::build(&g);
    match config.format.unwrap_or(Format::Dot) {
        Format::Dot => Ok(q.ar_quiver_dot()),
        Format::Json => json(&QuiverExport {
            graph: g.name(),
            h: g.h(),
            vertices: (0..q.vertex_count()).map(|v| q.label(v)).collect(),
            arrows: q
                .arrows()
                .iter()
                .map(|a| [q.label(a.source), q.label(a.target)])
                .collect(),
            tau: (0..q.vertex_count())
                .map(|v| [q.label(v), q.label(q.tau(v))])
                .collect(),
        }),
        Format::Csv => {
            csv(
                std::iter::once(vec!["source".to_string(), "target".into(), "kind".into()])
                    .chain(
                        q.arrows()
                            .iter()
                            .map(|a| vec![q.label(a.source), q.label(a.target), "arrow".into()]),
                    )
                    .chain(
                        (0..q.vertex_count())
                            .map(|v| vec![q.label(v), q.label(q.tau(v)), "tau".into()]),
                    ),
            )
        }
        Format::Text => {
            let mut s = format!(
                "translation quiver of {}: {} vertices, {} arrows\n",
                g.name(),
                q.vertex_count(),
                q.arrows().len()
            );
            for a in q.arrows() {
                let _ = writeln!(s, "{} -> {}", q.label(a.source), q.label(a.target));
            }
            Ok(s)
        }
    }
}

fn show_homtable(config: &Config, ext: bool) -> Result<String, CliError> {
    let g = config.require_graph()?;
    let table = sheaf_category(&g)?.hom_table();
    let values = if ext { &table.ext } else { &table.hom };
    let mut rows = vec![std::iter::once(if ext { "ext" } else { "hom" }.to_string())
        .chain(table.labels.iter().cloned())
        .collect::<Vec<_>>()];
    for (label, row) in table.labels.iter().zip(values) {
        rows.push(
            std::iter::once(label.clone())
                .chain(row.iter().map(usize::to_string))
                .collect(),
        );
    }
    match config.format.unwrap_or(Format::Csv) {
        Format::Csv => csv(rows),
        Format::Json => json(&table),
        Format::Text => Ok(grid(&rows)),
        f => Err(unsupported("homtable", f)),
    }
}

#[derive(Serialize)]
struct KGroupExport {
    graph: String,
    indecomposables: usize,
    #[serde(flatten)]
    k_group: GrothendieckGroup,
    coxeter: CoxeterAction,
}

fn show_kgroup(config: &Config) -> Result<String, CliError> {
    let g = config.require_graph()?;
    let s = sheaf_category(&g)?;
    let report = KGroupExport {
        graph: g.name(),
        indecomposables: s.len(),
        k_group: s.k_group()?,
        coxeter: s.coxeter_action()?,
    };
    match config.format.unwrap_or(Format::Json) {
        Format::Json => json(&report),
        Format::Text => Ok(format!(
            "K_0 of {}: Z^{} ({} indecomposables)\nroot bijection {}\nsymmetrized Euler form = Cartan form {}\n\
             twist by 2 has order {} (h = {})\n",
            report.graph,
            report.k_group.rank,
            report.indecomposables,
            report.k_group.root_bijection,
            report.k_group.euler_matches_cartan,
            report.coxeter.order.map_or("> 4h".to_string(), |o| o.to_string()),
            g.h()
        )),
        f => Err(unsupported("kgroup", f)),
    }
}

#[derive(Serialize)]
struct RestrictRow {
    object: String,
    shift: u8,
    dims: Vec<i64>,
}

#[derive(Serialize)]
struct RestrictExport {
    graph: String,
    height: Vec<usize>,
    rows: Vec<RestrictRow>,
    tilting: TiltingReport,
}

pub fn restrict(config: &Config) -> Result<Output, CliError> {
    let g = config.require_graph()?;
    let s = sheaf_category(&g)?;
    let ht = config.height(&g)?;
    let catalog = RepCatalog::for_height(&g, &ht)?;
    let mut rows = Vec::with_capacity(s.len());
    for v in 0..s.len() {
        let class = rho_class(&s, &catalog, &ht, s.vertex(v))?;
        rows.push(RestrictRow {
            object: s.label(v),
            shift: class.shift,
            dims: class.rep.dim_vector(),
        });
    }
    let tilting = tilting_endo_check(&s, &ht);
    let failed = !tilting.mismatches.is_empty();
    let text = match config.format.unwrap_or(Format::Csv) {
        Format::Json => json(&RestrictExport {
            graph: g.name(),
            height: ht.values().to_vec(),
            rows,
            tilting,
        })?,
        f @ (Format::Csv | Format::Text) => {
            let mut table = vec![["object", "shift"]
                .iter()
                .map(|s| s.to_string())
                .chain((1..=g.rank()).map(|i| format!("d{i}")))
                .collect::<Vec<_>>()];
            for r in rows {
                table.push(
                    [r.object, r.shift.to_string()]
                        .into_iter()
                        .chain(r.dims.iter().map(i64::to_string))
                        .collect(),
                );
            }
            if f == Format::Csv {
                csv(table)?
            } else {
                format!("rho_h for {} at height {}\n{}", g.name(), ht, grid(&table))
            }
        }
        f => return Err(unsupported("restrict", f)),
    };
    Ok(Output { text, failed })
}

pub fn reflect(config: &Config, vertex: usize, sign: &str) -> Result<Output, CliError> {
    let g = config.require_graph()?;
    let s = sheaf_category(&g)?;
    let ht = config.height(&g)?;
    let sign: Sign = sign.parse()?;
    if vertex == 0 || vertex > g.rank() {
        return Err(Error::VertexOutOfRange(vertex).into());
    }
    let report = commuting_diagram_check(&s, &ht, vertex - 1, sign)?;
    let failed = !report.passed();
    let text = match config.format.unwrap_or(Format::Json) {
        Format::Json => json(&report)?,
        Format::Text => {
            let mut t = format!(
                "flip {}{} at height {}: {} indecomposables, {} mismatches\n",
                report.sign,
                report.vertex,
                ht,
                report.checked,
                report.mismatches.len()
            );
            for m in &report.mismatches {
                let _ = writeln!(t, "  {m}");
            }
            t
        }
        f => return Err(unsupported("reflect", f)),
    };
    Ok(Output { text, failed })
}

#[derive(Serialize)]
struct SubgroupListing {
    graph: String,
    h: usize,
    base_vertex: usize,
    involution: Vec<usize>,
}

#[derive(Serialize)]
struct SubgroupExport {
    graph: String,
    h: usize,
    admissible: bool,
    violation: Option<String>,
    base_vertex: Option<usize>,
    matrices: Vec<qmckay::linalg::IntMatrix>,
}

pub fn subgroup(config: &Config, list: bool) -> Result<Output, CliError> {
    let graph = config.graph()?;
    if list || graph.is_none() {
        let h = config.coxeter_number()?;
        let listing: Vec<SubgroupListing> = admissible_graphs(h)?
            .iter()
            .map(|g| {
                let q = QuantumSubgroup::build(g)?;
                Ok(SubgroupListing {
                    graph: g.name(),
                    h,
                    base_vertex: q.base_vertex() + 1,
                    involution: q.involution().iter().map(|&v| v + 1).collect(),
                })
            })
            .collect::<Result<_, Error>>()?;
        let text = match config.format.unwrap_or(Format::Text) {
            Format::Json => json(&listing)?,
            Format::Text => {
                let mut t = format!("quantum subgroup graphs at h = {h}\n");
                for l in &listing {
                    let inv: Vec<String> = l.involution.iter().map(usize::to_string).collect();
                    let _ = writeln!(
                        t,
                        "{}  base vertex {}  M_h-2 = ({})",
                        l.graph,
                        l.base_vertex,
                        inv.join(" ")
                    );
                }
                t
            }
            Format::Csv => csv(std::iter::once(vec![
                "graph".to_string(),
                "base_vertex".into(),
                "involution".into(),
            ])
            .chain(listing.iter().map(|l| {
                let inv: Vec<String> = l.involution.iter().map(usize::to_string).collect();
                vec![l.graph.clone(), l.base_vertex.to_string(), inv.join(" ")]
            })))?,
            f => return Err(unsupported("subgroup listing", f)),
        };
        return Ok(Output::ok(text));
    }
    let g = graph.expect("checked above");
    let (export, failed) = match QuantumSubgroup::build(&g) {
        Ok(q) => (
            SubgroupExport {
                graph: g.name(),
                h: g.h(),
                admissible: true,
                violation: None,
                base_vertex: Some(q.base_vertex() + 1),
                matrices: q.action_matrices().to_vec(),
            },
            false,
        ),
        Err(Error::NotAdmissible { violation, .. }) => (
            SubgroupExport {
                graph: g.name(),
                h: g.h(),
                admissible: false,
                violation: Some(violation.to_string()),
                base_vertex: None,
                matrices: Vec::new(),
            },
            true,
        ),
        Err(e) => return Err(e.into()),
    };
    let text = match config.format.unwrap_or(Format::Json) {
        Format::Json => json(&export)?,
        Format::Text => match &export.violation {
            Some(v) => format!("{} is not admissible: {v}\n", export.graph),
            None => {
                let mut t = format!(
                    "{} admissible, base vertex {}\n",
                    export.graph,
                    export.base_vertex.unwrap_or(0)
                );
                for (k, m) in export.matrices.iter().enumerate() {
                    let _ = writeln!(t, "M_{k}");
                    let rows: Vec<Vec<String>> = m
                        .to_rows()
                        .iter()
                        .map(|r| r.iter().map(i64::to_string).collect())
                        .collect();
                    t.push_str(&grid(&rows));
                }
                t
            }
        },
        Format::Csv => {
            let mut rows = vec![std::iter::once("k".to_string())
                .chain(std::iter::once("row".to_string()))
                .chain((1..=g.rank()).map(|c| c.to_string()))
                .collect::<Vec<_>>()];
            for (k, m) in export.matrices.iter().enumerate() {
                for (r, row) in m.to_rows().iter().enumerate() {
                    rows.push(
                        [k.to_string(), (r + 1).to_string()]
                            .into_iter()
                            .chain(row.iter().map(i64::to_string))
                            .collect(),
                    );
                }
            }
            csv(rows)?
        }
        f => return Err(unsupported("subgroup", f)),
    };
    Ok(Output { text, failed })
}
