use proptest::prelude::*;

use qmckay::fusion::FusionRing;
use qmckay::oq::{build_oq, build_oq_compositional, multiply_slots, verify_triangle};
use qmckay::quiverrep::{
    euler_form, ext_dim_rep, hom_space, Reflection, ReflectionKind, RepCatalog,
};
use qmckay::sheafcat::SheafCategory;
use qmckay::{DynkinGraph, QuantumSubgroup, Sign};

const LABELS: &[&str] = &[
    "A1", "A2", "A3", "A4", "A5", "D4", "D5", "D6", "E6", "E7", "E8",
];
const ADMISSIBLE: &[&str] = &["A2", "A3", "A4", "A6", "D4", "D6", "E6"];

fn graph(label: &str) -> DynkinGraph {
    DynkinGraph::from_label(label).unwrap()
}

fn sheaf(label: &str) -> SheafCategory {
    SheafCategory::new(&QuantumSubgroup::build(&graph(label)).unwrap())
}

fn label() -> impl Strategy<Value = &'static str> {
    prop::sample::select(LABELS)
}

fn admissible() -> impl Strategy<Value = &'static str> {
    prop::sample::select(ADMISSIBLE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fusion_commutative_and_associative(h in 2usize..20, a in 0usize..18, b in 0usize..18, c in 0usize..18) {
        let r = FusionRing::new(h).unwrap();
        let top = h - 2;
        let (a, b, c) = (a.min(top), b.min(top), c.min(top));
        prop_assert_eq!(r.tensor(a, b).unwrap(), r.tensor(b, a).unwrap());
        let left = r.tensor_class(c, &r.tensor(a, b).unwrap()).unwrap();
        let right = r.tensor_class(a, &r.tensor(b, c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn fusion_qdims_multiply(h in 2usize..40) {
        prop_assert!(FusionRing::new(h).unwrap().qdim_defect() < 1e-9);
    }

    #[test]
    fn triangles_exact(h in 2usize..31, n in 0usize..60) {
        let report = verify_triangle(h, n % (2 * h)).unwrap();
        prop_assert!(report.passed(), "{:?}", report);
    }

    #[test]
    fn oq_forms_agree(h in 2usize..31) {
        prop_assert_eq!(build_oq(h).unwrap(), build_oq_compositional(h).unwrap());
    }

    #[test]
    fn slot_products_are_graded(h in 3usize..20, a in 0usize..40, b in 0usize..40) {
        let oq = build_oq(h).unwrap();
        let slot = |x: usize| if x < h - 1 { (0, x) } else { (1, h + (x - (h - 1)) % (h - 1)) };
        let (sa, sb) = (slot(a % (2 * h - 2)), slot(b % (2 * h - 2)));
        let p = multiply_slots(h, sa, sb).unwrap();
        prop_assert_eq!(p.target, ((sa.0 + sb.0) % 2, (sa.1 + sb.1) % (2 * h)));
        if p.nonzero {
            prop_assert!(!oq.get(p.target.0, p.target.1).is_zero());
        }
    }

    #[test]
    fn heights_flip_round_trip(l in label(), pick in 0usize..10_000) {
        let g = graph(l);
        let heights = g.enumerate_heights();
        prop_assert_eq!(heights.len(), g.h() << (g.rank() - 1));
        let ht = &heights[pick % heights.len()];
        let omega = ht.orientation(&g);
        for i in omega.sources() {
            let up = g.flip_height(ht, i, Sign::Plus).unwrap();
            prop_assert!(up.orientation(&g).is_sink(i));
            prop_assert_eq!(&g.flip_height(&up, i, Sign::Minus).unwrap(), ht);
        }
        for i in omega.sinks() {
            prop_assert!(g.flip_height(ht, i, Sign::Plus).is_err() || omega.is_source(i));
        }
    }

    #[test]
    fn coxeter_order_any_orientation(l in label(), pick in 0usize..10_000) {
        let g = graph(l);
        let heights = g.enumerate_heights();
        let omega = heights[pick % heights.len()].orientation(&g);
        let c = g.coxeter_element(&omega);
        prop_assert_eq!(c.multiplicative_order(4 * g.h()), Some(g.h()));
    }

    #[test]
    fn reflections_preserve_form(l in label(), i in 0usize..8, a in 0usize..300, b in 0usize..300) {
        let g = graph(l);
        let roots = g.roots();
        let i = i % g.rank();
        let (x, y) = (&roots[a % roots.len()], &roots[b % roots.len()]);
        let (sx, sy) = (g.reflect(i, x), g.reflect(i, y));
        prop_assert_eq!(g.form(&sx, &sy), g.form(x, y));
        prop_assert!(roots.contains(&sx));
    }

    #[test]
    fn rep_euler_identity(l in admissible(), pick in 0usize..10_000, a in 0usize..100, b in 0usize..100) {
        let g = graph(l);
        let heights = g.enumerate_heights();
        let omega = heights[pick % heights.len()].orientation(&g);
        let cat = RepCatalog::build(&g, &omega).unwrap();
        let reps = cat.reps();
        let (m, n) = (&reps[a % reps.len()], &reps[b % reps.len()]);
        let hom = hom_space(m, n).unwrap() as i64;
        let ext = ext_dim_rep(m, n).unwrap() as i64;
        prop_assert_eq!(hom - ext, euler_form(&omega, &m.dim_vector(), &n.dim_vector()));
        prop_assert_eq!(hom_space(m, m).unwrap(), 1);
        prop_assert_eq!(ext_dim_rep(m, m).unwrap(), 0);
    }

    #[test]
    fn reflect_twice_returns(l in admissible(), pick in 0usize..10_000, a in 0usize..100) {
        let g = graph(l);
        let heights = g.enumerate_heights();
        let omega = heights[pick % heights.len()].orientation(&g);
        let cat = RepCatalog::build(&g, &omega).unwrap();
        let m = &cat.reps()[a % cat.reps().len()];
        for i in omega.sinks() {
            if m.is_simple_at(i) {
                continue;
            }
            let r = m.bgp_reflect(Reflection { vertex: i, kind: ReflectionKind::AtSink }).unwrap();
            prop_assert_eq!(r.dim_vector(), g.reflect(i, &m.dim_vector()));
            prop_assert_eq!(hom_space(&r, &r).unwrap(), 1);
            let back = r.bgp_reflect(Reflection { vertex: i, kind: ReflectionKind::AtSource }).unwrap();
            prop_assert_eq!(back.orientation(), &omega);
            prop_assert_eq!(back.dim_vector(), m.dim_vector());
            prop_assert_eq!(hom_space(&back, m).unwrap(), 1);
        }
    }

    #[test]
    fn sheaf_homs_twist_and_shift_invariant(l in admissible(), v in 0usize..200, w in 0usize..200, k in 0i64..40) {
        let s = sheaf(l);
        let (x, y) = (s.vertex(v % s.len()), s.vertex(w % s.len()));
        let (xk, yk) = (s.twist(x, 2 * k), s.twist(y, 2 * k));
        prop_assert_eq!(s.hom_dim(xk, yk), s.hom_dim(x, y));
        prop_assert_eq!(s.ext_dim(x, y), s.hom_dim(x, s.shift(y)));
        prop_assert_eq!(s.shift(s.shift(x)), x);
        prop_assert_eq!(s.hom_dim(s.shift(x), s.shift(y)), s.hom_dim(x, y));
    }

    #[test]
    fn sheaf_objects_decompose(l in admissible(), v in 0usize..200, w in 0usize..200) {
        let s = sheaf(l);
        let a = s.free_object(s.vertex(v % s.len())).unwrap();
        let b = s.free_object(s.vertex(w % s.len())).unwrap();
        let sum = a.add(&b);
        let d = s.object_decompose(&sum).unwrap();
        prop_assert_eq!(d.reassemble(), sum);
    }
}
