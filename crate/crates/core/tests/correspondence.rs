use std::collections::BTreeSet;

use qmckay::meshquiver::MeshSigns;
use qmckay::quiverrep::{
    commuting_diagram_check, indecomposables, rho_class, tilting_endo_check, transport_table,
    RepCatalog,
};
use qmckay::sheafcat::SheafCategory;
use qmckay::{DynkinGraph, HeightFunction, QuantumSubgroup, Sign};

fn graph(label: &str) -> DynkinGraph {
    DynkinGraph::from_label(label).unwrap()
}

fn sheaf(label: &str) -> SheafCategory {
    SheafCategory::new(&QuantumSubgroup::build(&graph(label)).unwrap())
}

fn distinct_orientations(g: &DynkinGraph) -> Vec<qmckay::Orientation> {
    let mut seen = Vec::new();
    for ht in g.enumerate_heights() {
        let o = ht.orientation(g);
        if !seen.contains(&o) {
            seen.push(o);
        }
    }
    seen
}

#[test]
fn gabriel_every_orientation() {
    for label in ["A2", "A3", "D4"] {
        let g = graph(label);
        let positive: BTreeSet<Vec<i64>> = g.positive_roots().into_iter().collect();
        let orientations = distinct_orientations(&g);
        assert_eq!(orientations.len(), 1 << g.edges().len());
        for o in orientations {
            let reps = indecomposables(&g, &o).unwrap();
            assert_eq!(reps.len(), g.rank() * g.h() / 2);
            let dims: BTreeSet<Vec<i64>> = reps.iter().map(|r| r.dim_vector()).collect();
            assert_eq!(dims, positive);
        }
    }
    for label in ["A5", "D5", "D6", "E6", "E7", "E8"] {
        let g = graph(label);
        let o = g.bipartite_height().orientation(&g);
        let reps = indecomposables(&g, &o).unwrap();
        assert_eq!(reps.len(), g.rank() * g.h() / 2, "{label}");
    }
}

fn rho_bijective(s: &SheafCategory, ht: &HeightFunction) {
    let cat = RepCatalog::for_height(s.graph(), ht).unwrap();
    let keys: BTreeSet<(Vec<i64>, u8)> = (0..s.len())
        .map(|v| rho_class(s, &cat, ht, s.vertex(v)).unwrap().key())
        .collect();
    assert_eq!(keys.len(), s.len());
    let positive = s.graph().positive_roots();
    for shift in 0..2 {
        for r in &positive {
            assert!(keys.contains(&(r.clone(), shift)));
        }
    }
}

#[test]
fn rho_hits_each_class_once() {
    for label in ["A2", "A3", "D4"] {
        let s = sheaf(label);
        for ht in s.graph().enumerate_heights() {
            rho_bijective(&s, &ht);
        }
    }
    for label in ["D6", "E6"] {
        let s = sheaf(label);
        rho_bijective(&s, &s.graph().bipartite_height());
    }
}

#[test]
fn transport_agrees_with_sheaf_homs() {
    for label in ["A2", "A3", "A4", "D4"] {
        let s = sheaf(label);
        let table = s.hom_table();
        for ht in s.graph().enumerate_heights() {
            let t = transport_table(&s, &ht).unwrap();
            assert_eq!(t.hom, table.hom, "{label} at {ht}");
            assert_eq!(t.ext, table.ext, "{label} at {ht}");
        }
    }
    let s = sheaf("E6");
    let t = transport_table(&s, &s.graph().bipartite_height()).unwrap();
    assert_eq!(t.hom, s.hom_table().hom);
}

#[test]
fn diagrams_commute_and_slices_tilt() {
    for label in ["A2", "A3", "D4"] {
        let s = sheaf(label);
        let g = s.graph();
        for ht in g.enumerate_heights() {
            assert!(tilting_endo_check(&s, &ht).mismatches.is_empty());
            let omega = ht.orientation(g);
            for i in omega.sources() {
                assert!(commuting_diagram_check(&s, &ht, i, Sign::Plus)
                    .unwrap()
                    .passed());
            }
            for i in omega.sinks() {
                assert!(commuting_diagram_check(&s, &ht, i, Sign::Minus)
                    .unwrap()
                    .passed());
            }
        }
    }
}

#[test]
fn d4_central_sink_example() {
    let s = sheaf("D4");
    let g = s.graph();
    let ht = g.bipartite_height();
    let centre = 1;
    assert!(ht.orientation(g).is_sink(centre));
    let r = commuting_diagram_check(&s, &ht, centre, Sign::Minus).unwrap();
    assert_eq!(r.checked, 24);
    assert!(r.passed());
    assert!(commuting_diagram_check(&s, &ht, centre, Sign::Plus).is_err());
}

#[test]
fn mesh_quotient_independent_of_signs_and_cap() {
    for label in ["A3", "D4", "D6", "E6"] {
        let s = sheaf(label);
        let g = s.graph();
        let q = s.quiver();
        let h = q.h();
        let base = q.mesh_hom_table(4 * h, &MeshSigns::canonical(g)).unwrap();
        assert_eq!(base, s.hom_table().hom, "{label}");
        assert_eq!(
            q.mesh_hom_table(6 * h, &MeshSigns::canonical(g)).unwrap(),
            base
        );
        assert_eq!(
            q.mesh_hom_table(4 * h, &MeshSigns::flipped(g)).unwrap(),
            base
        );
        let alternating: Vec<i8> = (0..g.edges().len())
            .map(|k| if k % 2 == 0 { 1 } else { -1 })
            .collect();
        assert_eq!(
            q.mesh_hom_table(4 * h, &MeshSigns::from_edge_signs(alternating))
                .unwrap(),
            base
        );
    }
}

#[test]
fn cap_below_two_h_rejected() {
    let s = sheaf("A3");
    let h = s.h();
    assert!(s.quiver().mesh_hom_dim(0, 0, 2 * h - 1).is_err());
    assert_eq!(s.quiver().mesh_hom_dim(0, 0, 2 * h).unwrap(), 1);
}
