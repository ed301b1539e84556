//! Representations of Dynkin quivers over `Q`, BGP reflections, the
//! 2-periodic orbit category and the restriction functor `rho_h`.
//!
//! `rho_h(X)` at vertex `i` is `Hom(X_i(h(i)), X)` (or `Ext^1` in odd
//! degree), so arrows of the slice act contravariantly: representations
//! live on the opposite orientation `Omega_h^op`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::dynkin::{DynkinGraph, HeightFunction, Orientation, Sign};
use crate::error::{Error, Result};
use crate::linalg::{QMatrix, Q};
use crate::sheafcat::SheafCategory;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverRep {
    orientation: Orientation,
    dims: Vec<usize>,
    /// One matrix per arrow, shaped `dims[head] x dims[tail]`.
    maps: Vec<QMatrix>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReflectionKind {
    /// Kernel construction at a sink.
    AtSink,
    /// Cokernel construction at a source.
    AtSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reflection {
    pub vertex: usize,
    pub kind: ReflectionKind,
}

impl Reflection {
    /// The reflection matching a height flip: raising `h(i)` at a source of
    /// `Omega_h` reflects at a sink of `Omega_h^op`, and vice versa.
    pub fn for_flip(vertex: usize, sign: Sign) -> Self {
        let kind = match sign {
            Sign::Plus => ReflectionKind::AtSink,
            Sign::Minus => ReflectionKind::AtSource,
        };
        Reflection { vertex, kind }
    }
}

impl QuiverRep {
    pub fn new(orientation: Orientation, dims: Vec<usize>, maps: Vec<QMatrix>) -> Result<Self> {
        if dims.len() != orientation.vertex_count() || maps.len() != orientation.arrows().len() {
            return Err(Error::QuiverMismatch);
        }
        for (m, &(s, t)) in maps.iter().zip(orientation.arrows()) {
            if m.rows() != dims[t] || m.cols() != dims[s] {
                return Err(Error::Consistency(format!(
                    "map on arrow {} -> {} has shape {}x{}, expected {}x{}",
                    s + 1,
                    t + 1,
                    m.rows(),
                    m.cols(),
                    dims[t],
                    dims[s]
                )));
            }
        }
        Ok(QuiverRep {
            orientation,
            dims,
            maps,
        })
    }

    pub fn simple(orientation: &Orientation, i: usize) -> Self {
        let mut dims = vec![0; orientation.vertex_count()];
        dims[i] = 1;
        Self::zero_maps(orientation.clone(), dims)
    }

    fn zero_maps(orientation: Orientation, dims: Vec<usize>) -> Self {
        let maps = orientation
            .arrows()
            .iter()
            .map(|&(s, t)| QMatrix::zeros(dims[t], dims[s]))
            .collect();
        QuiverRep {
            orientation,
            dims,
            maps,
        }
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_vector(&self) -> Vec<i64> {
        self.dims.iter().map(|&d| d as i64).collect()
    }

    pub fn maps(&self) -> &[QMatrix] {
        &self.maps
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn is_simple_at(&self, i: usize) -> bool {
        self.dims
            .iter()
            .enumerate()
            .all(|(v, &d)| d == usize::from(v == i))
    }

    pub fn bgp_reflect(&self, r: Reflection) -> Result<QuiverRep> {
        let i = r.vertex;
        if i >= self.dims.len() {
            return Err(Error::VertexOutOfRange(i + 1));
        }
        let arrows = self.orientation.arrows();
        let touching: Vec<usize> = (0..arrows.len())
            .filter(|&a| arrows[a].0 == i || arrows[a].1 == i)
            .collect();
        let mut dims = self.dims.clone();
        let mut maps = self.maps.clone();
        match r.kind {
            ReflectionKind::AtSink => {
                if !self.orientation.is_sink(i) {
                    return Err(Error::NotSourceOrSink {
                        vertex: i + 1,
                        required: "sink",
                    });
                }
                // sum map  (+)_j M_j -> M_i
                let blocks: Vec<&QMatrix> = touching.iter().map(|&a| &self.maps[a]).collect();
                let sum = QMatrix::hstack(self.dims[i], &blocks);
                let kernel = sum.kernel();
                dims[i] = kernel.cols();
                let mut offset = 0;
                for &a in &touching {
                    let j = arrows[a].0;
                    maps[a] = kernel.row_block(offset, self.dims[j]);
                    offset += self.dims[j];
                }
            }
            ReflectionKind::AtSource => {
                if !self.orientation.is_source(i) {
                    return Err(Error::NotSourceOrSink {
                        vertex: i + 1,
                        required: "source",
                    });
                }
                let blocks: Vec<&QMatrix> = touching.iter().map(|&a| &self.maps[a]).collect();
                let stacked = QMatrix::vstack(self.dims[i], &blocks);
                let proj = stacked.cokernel_projection();
                dims[i] = proj.rows();
                let mut offset = 0;
                for &a in &touching {
                    let j = arrows[a].1;
                    maps[a] = proj.column_block(offset, self.dims[j]);
                    offset += self.dims[j];
                }
            }
        }
        Ok(QuiverRep {
            orientation: self.orientation.reverse_at(i),
            dims,
            maps,
        })
    }
}

/// `<a, b> = sum a_i b_i - sum_{arrows i -> j} a_i b_j`
pub fn euler_form(orientation: &Orientation, a: &[i64], b: &[i64]) -> i64 {
    let diag: i64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let off: i64 = orientation.arrows().iter().map(|&(s, t)| a[s] * b[t]).sum();
    diag - off
}

/// Dimension of the space of intertwiners `M -> N`.
pub fn hom_space(m: &QuiverRep, n: &QuiverRep) -> Result<usize> {
    if m.orientation != n.orientation {
        return Err(Error::QuiverMismatch);
    }
    let verts = m.dims.len();
    let mut offset = vec![0; verts + 1];
    for v in 0..verts {
        offset[v + 1] = offset[v] + n.dims[v] * m.dims[v];
    }
    let unknowns = offset[verts];
    if unknowns == 0 {
        return Ok(0);
    }
    let rows: usize = m
        .orientation
        .arrows()
        .iter()
        .map(|&(s, t)| n.dims[t] * m.dims[s])
        .sum();
    let mut eq = QMatrix::zeros(rows, unknowns);
    let mut row = 0;
    for (a, &(s, t)) in m.orientation.arrows().iter().enumerate() {
        let (ma, na) = (&m.maps[a], &n.maps[a]);
        for r in 0..n.dims[t] {
            for c in 0..m.dims[s] {
                // (N_a f_s)[r][c]
                for k in 0..n.dims[s] {
                    let coef = na.get(r, k);
                    if *coef != Q::from_integer(0) {
                        let col = offset[s] + k * m.dims[s] + c;
                        let cur = eq.get(row, col) + coef;
                        eq.set(row, col, cur);
                    }
                }
                // - (f_t M_a)[r][c]
                for k in 0..m.dims[t] {
                    let coef = ma.get(k, c);
                    if *coef != Q::from_integer(0) {
                        let col = offset[t] + r * m.dims[t] + k;
                        let cur = eq.get(row, col) - coef;
                        eq.set(row, col, cur);
                    }
                }
                row += 1;
            }
        }
    }
    Ok(unknowns - eq.rank())
}

/// `dim Ext^1(M, N) = dim Hom(M, N) - <d_M, d_N>`.
pub fn ext_dim_rep(m: &QuiverRep, n: &QuiverRep) -> Result<usize> {
    let hom = hom_space(m, n)? as i64;
    let ext = hom - euler_form(&m.orientation, &m.dim_vector(), &n.dim_vector());
    usize::try_from(ext).map_err(|_| {
        Error::Consistency(format!(
            "negative Ext dimension {ext} between {:?} and {:?}",
            m.dims, n.dims
        ))
    })
}

/// An indecomposable of the 2-periodic derived category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedClass {
    pub rep: QuiverRep,
    pub shift: u8,
}

impl DerivedClass {
    pub fn key(&self) -> (Vec<i64>, u8) {
        (self.rep.dim_vector(), self.shift)
    }
}

/// `Hom((M,s), (N,t))` in `D^b / T^2`: Hom for equal shifts, Ext^1 otherwise.
pub fn orbit_hom(x: &DerivedClass, y: &DerivedClass) -> Result<usize> {
    if x.shift == y.shift {
        hom_space(&x.rep, &y.rep)
    } else {
        ext_dim_rep(&x.rep, &y.rep)
    }
}

/// Indecomposables of `(g, omega)`, one per positive root, obtained by
/// cokernel reflections applied to simples along a repeated sink sequence.
pub fn indecomposables(g: &DynkinGraph, omega: &Orientation) -> Result<Vec<QuiverRep>> {
    let target = g.rank() * g.h() / 2;
    let mut word: Vec<usize> = omega.admissible_order();
    word.reverse();
    let pass = word.clone();
    let mut orientations = vec![omega.clone()];
    let mut found: HashMap<Vec<i64>, QuiverRep> = HashMap::new();
    let limit = g.rank() * g.h() + g.rank();
    let mut k = 0;
    while found.len() < target {
        if k >= limit {
            return Err(Error::Consistency(format!(
                "only {} of {target} indecomposables found",
                found.len()
            )));
        }
        if k >= word.len() {
            word.extend_from_slice(&pass);
        }
        let i = word[k];
        let before = orientations[k].clone();
        orientations.push(before.reverse_at(i));
        let mut rep = QuiverRep::simple(&before, i);
        for t in (0..k).rev() {
            if rep.is_zero() {
                break;
            }
            rep = rep.bgp_reflect(Reflection {
                vertex: word[t],
                kind: ReflectionKind::AtSource,
            })?;
        }
        if !rep.is_zero() {
            debug_assert_eq!(rep.orientation, *omega);
            found.entry(rep.dim_vector()).or_insert(rep);
        }
        k += 1;
    }
    let mut reps: Vec<QuiverRep> = found.into_values().collect();
    reps.sort_by_key(QuiverRep::dim_vector);
    Ok(reps)
}

/// Indecomposables of one orientation, looked up by dimension vector.
#[derive(Debug, Clone)]
pub struct RepCatalog {
    orientation: Orientation,
    reps: Vec<QuiverRep>,
    by_dim: HashMap<Vec<i64>, usize>,
}

impl RepCatalog {
    pub fn build(g: &DynkinGraph, omega: &Orientation) -> Result<Self> {
        let reps = indecomposables(g, omega)?;
        let by_dim = reps
            .iter()
            .enumerate()
            .map(|(k, r)| (r.dim_vector(), k))
            .collect();
        Ok(RepCatalog {
            orientation: omega.clone(),
            reps,
            by_dim,
        })
    }

    /// Catalog for `Omega_h^op`, where `rho_h` lands.
    pub fn for_height(g: &DynkinGraph, height: &HeightFunction) -> Result<Self> {
        Self::build(g, &height.orientation(g).opposite())
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    pub fn reps(&self) -> &[QuiverRep] {
        &self.reps
    }

    pub fn get(&self, dims: &[i64]) -> Option<&QuiverRep> {
        self.by_dim.get(dims).map(|&k| &self.reps[k])
    }
}

/// `rho_h(X_j(m))` as an indecomposable of `D^b(Gamma, Omega_h^op) / T^2`.
pub fn rho_class(
    sheaf: &SheafCategory,
    catalog: &RepCatalog,
    height: &HeightFunction,
    x: (usize, usize),
) -> Result<DerivedClass> {
    if catalog.orientation != height.orientation(sheaf.graph()).opposite() {
        return Err(Error::QuiverMismatch);
    }
    sheaf.quiver().try_index(x)?;
    let (dims, shift) = sheaf.rho_dimension(height, x)?;
    let rep = catalog
        .get(&dims)
        .ok_or_else(|| Error::Consistency(format!("{dims:?} is not a positive root")))?
        .clone();
    Ok(DerivedClass { rep, shift })
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagramReport {
    pub vertex: usize,
    pub sign: char,
    pub height: Vec<usize>,
    pub checked: usize,
    pub mismatches: Vec<String>,
}

impl DiagramReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// `S_i o rho_h = rho_{s_i h}` on every indecomposable, compared by
/// (dimension vector, shift). The simple at `i` changes shift.
pub fn commuting_diagram_check(
    sheaf: &SheafCategory,
    height: &HeightFunction,
    i: usize,
    sign: Sign,
) -> Result<DiagramReport> {
    let g = sheaf.graph();
    let flipped = g.flip_height(height, i, sign)?;
    let before = RepCatalog::for_height(g, height)?;
    let after = RepCatalog::for_height(g, &flipped)?;
    let reflection = Reflection::for_flip(i, sign);
    let mut mismatches = Vec::new();
    for v in 0..sheaf.len() {
        let x = sheaf.vertex(v);
        let class = rho_class(sheaf, &before, height, x)?;
        let moved = if class.rep.is_simple_at(i) {
            (class.rep.dim_vector(), 1 - class.shift)
        } else {
            let rep = class.rep.bgp_reflect(reflection)?;
            if rep.orientation() != after.orientation() {
                return Err(Error::QuiverMismatch);
            }
            (rep.dim_vector(), class.shift)
        };
        let direct = rho_class(sheaf, &after, &flipped, x)?.key();
        if moved != direct {
            mismatches.push(format!(
                "{}: reflected {:?}[{}], restricted {:?}[{}]",
                sheaf.label(v),
                moved.0,
                moved.1,
                direct.0,
                direct.1
            ));
        }
    }
    Ok(DiagramReport {
        vertex: i + 1,
        sign: if sign == Sign::Plus { '+' } else { '-' },
        height: height.values().to_vec(),
        checked: sheaf.len(),
        mismatches,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TiltingReport {
    pub height: Vec<usize>,
    pub mismatches: Vec<(usize, usize, usize, usize)>,
}

/// `dim Hom(X_i(h(i)), X_j(h(j)))` against the number of paths `i -> j` in `Omega_h`.
pub fn tilting_endo_check(sheaf: &SheafCategory, height: &HeightFunction) -> TiltingReport {
    let g = sheaf.graph();
    let omega = height.orientation(g);
    let mut mismatches = Vec::new();
    for i in 0..g.rank() {
        for j in 0..g.rank() {
            let hom = sheaf.hom_dim((i, height.get(i)), (j, height.get(j)));
            let paths = omega.path_count(i, j);
            if hom != paths {
                mismatches.push((i + 1, j + 1, hom, paths));
            }
        }
    }
    TiltingReport {
        height: height.values().to_vec(),
        mismatches,
    }
}

/// Orbit-category Hom and Ext^1 between the images of all indecomposables.
#[derive(Debug, Clone, Serialize)]
pub struct TransportTable {
    pub hom: Vec<Vec<usize>>,
    pub ext: Vec<Vec<usize>>,
}

pub fn transport_table(sheaf: &SheafCategory, height: &HeightFunction) -> Result<TransportTable> {
    let catalog = RepCatalog::for_height(sheaf.graph(), height)?;
    let classes: Vec<DerivedClass> = (0..sheaf.len())
        .map(|v| rho_class(sheaf, &catalog, height, sheaf.vertex(v)))
        .collect::<Result<_>>()?;
    let rows: Vec<(Vec<usize>, Vec<usize>)> = classes
        .par_iter()
        .map(|x| {
            let mut hom = Vec::with_capacity(classes.len());
            let mut ext = Vec::with_capacity(classes.len());
            for y in &classes {
                hom.push(orbit_hom(x, y)?);
                let shifted = DerivedClass {
                    rep: y.rep.clone(),
                    shift: 1 - y.shift,
                };
                ext.push(orbit_hom(x, &shifted)?);
            }
            Ok((hom, ext))
        })
        .collect::<Result<_>>()?;
    let (hom, ext) = rows.into_iter().unzip();
    Ok(TransportTable { hom, ext })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroup::QuantumSubgroup;

    fn graph(label: &str) -> DynkinGraph {
        DynkinGraph::from_label(label).unwrap()
    }

    fn a2_line() -> Orientation {
        Orientation::new(2, vec![(0, 1)])
    }

    fn rep(dims: &[usize]) -> QuiverRep {
        let o = a2_line();
        let m = QMatrix::from_fn(dims[1], dims[0], |r, c| Q::from_integer((r == c) as i128));
        QuiverRep::new(o, dims.to_vec(), vec![m]).unwrap()
    }

    #[test]
    fn a2_indecomposables() {
        let reps = indecomposables(&graph("A2"), &a2_line()).unwrap();
        let dims: Vec<_> = reps.iter().map(QuiverRep::dim_vector).collect();
        assert_eq!(dims, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        for r in &reps {
            assert_eq!(hom_space(r, r).unwrap(), 1);
        }
        assert_eq!(
            indecomposables(&graph("A1"), &Orientation::new(1, vec![]))
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn d4_count() {
        let g = graph("D4");
        let omega = g.bipartite_height().orientation(&g);
        assert_eq!(indecomposables(&g, &omega).unwrap().len(), 12);
    }

    #[test]
    fn small_homs() {
        assert_eq!(hom_space(&rep(&[1, 1]), &rep(&[0, 1])).unwrap(), 0);
        assert_eq!(hom_space(&rep(&[0, 1]), &rep(&[1, 1])).unwrap(), 1);
        assert_eq!(hom_space(&rep(&[1, 1]), &rep(&[1, 0])).unwrap(), 1);
        assert_eq!(hom_space(&rep(&[1, 0]), &rep(&[1, 1])).unwrap(), 0);
        assert_eq!(ext_dim_rep(&rep(&[1, 0]), &rep(&[0, 1])).unwrap(), 1);
        assert_eq!(ext_dim_rep(&rep(&[0, 1]), &rep(&[1, 0])).unwrap(), 0);
        assert_eq!(ext_dim_rep(&rep(&[1, 1]), &rep(&[1, 1])).unwrap(), 0);
    }

    #[test]
    fn reflections() {
        let m = rep(&[1, 1]);
        let r = m
            .bgp_reflect(Reflection {
                vertex: 1,
                kind: ReflectionKind::AtSink,
            })
            .unwrap();
        assert_eq!(r.dims(), &[1, 0]);
        assert!(m
            .bgp_reflect(Reflection {
                vertex: 0,
                kind: ReflectionKind::AtSink
            })
            .is_err());
        let back = r
            .bgp_reflect(Reflection {
                vertex: 1,
                kind: ReflectionKind::AtSource,
            })
            .unwrap();
        assert_eq!(back.dims(), &[1, 1]);

        // zigzag 1 -> 2 <- 3 with identity maps, cokernel at the middle after
        // turning it into a source
        let o = Orientation::new(3, vec![(1, 0), (1, 2)]);
        let one = QMatrix::identity(1);
        let m = QuiverRep::new(o, vec![1, 1, 1], vec![one.clone(), one]).unwrap();
        let r = m
            .bgp_reflect(Reflection {
                vertex: 1,
                kind: ReflectionKind::AtSource,
            })
            .unwrap();
        assert_eq!(r.dims(), &[1, 1, 1]);
    }

    #[test]
    fn rho_examples_a2() {
        let g = graph("A2");
        let s = SheafCategory::new(&QuantumSubgroup::build(&g).unwrap());
        let ht = g.height(&[0, 1]).unwrap();
        let cat = RepCatalog::for_height(&g, &ht).unwrap();
        assert_eq!(
            rho_class(&s, &cat, &ht, (0, 0)).unwrap().key(),
            (vec![1, 0], 0)
        );
        assert_eq!(
            rho_class(&s, &cat, &ht, (1, 1)).unwrap().key(),
            (vec![1, 1], 0)
        );
        let other = RepCatalog::for_height(&g, &g.height(&[2, 1]).unwrap()).unwrap();
        assert!(matches!(
            rho_class(&s, &other, &ht, (0, 0)),
            Err(Error::QuiverMismatch)
        ));
    }

    #[test]
    fn a2_diagram_and_tilting() {
        let g = graph("A2");
        let s = SheafCategory::new(&QuantumSubgroup::build(&g).unwrap());
        let ht = g.height(&[0, 1]).unwrap();
        let report = commuting_diagram_check(&s, &ht, 0, Sign::Plus).unwrap();
        assert_eq!(report.checked, 6);
        assert!(report.passed(), "{report:?}");
        assert!(tilting_endo_check(&s, &ht).mismatches.is_empty());
        let a1 = graph("A1");
        let s1 = SheafCategory::new(&QuantumSubgroup::build(&a1).unwrap());
        let r = commuting_diagram_check(&s1, &a1.bipartite_height(), 0, Sign::Plus).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn transport_matches_sheaf_tables_a3() {
        let g = graph("A3");
        let s = SheafCategory::new(&QuantumSubgroup::build(&g).unwrap());
        let table = s.hom_table();
        for ht in g.enumerate_heights().iter().step_by(5) {
            let t = transport_table(&s, ht).unwrap();
            assert_eq!(t.hom, table.hom);
            assert_eq!(t.ext, table.ext);
        }
    }
}
