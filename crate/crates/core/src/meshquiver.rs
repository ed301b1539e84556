//! The cyclic translation quiver on `Gamma x Z/2h`, its slices, and the
//! graded dimensions of the mesh category.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::dynkin::{DynkinGraph, HeightFunction, Orientation};
use crate::error::{Error, Result};
use crate::linalg::{QMatrix, Q};

/// A vertex `(i, n)` of the quiver, `i` 0-based, `n` in `0..2h`.
pub type Vertex = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
}

/// Signs on arrows with `eps(bar e) = -eps(e)`. Such a choice is one sign
/// per edge of the base graph, multiplied by the parity sign of the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeshSigns {
    per_edge: Vec<i8>,
}

impl MeshSigns {
    /// `eps(e) = +1` when the source vertex has parity 0.
    pub fn canonical(g: &DynkinGraph) -> Self {
        MeshSigns {
            per_edge: vec![1; g.edges().len()],
        }
    }

    pub fn flipped(g: &DynkinGraph) -> Self {
        MeshSigns {
            per_edge: vec![-1; g.edges().len()],
        }
    }

    pub fn from_edge_signs(per_edge: Vec<i8>) -> Self {
        assert!(per_edge.iter().all(|s| s.abs() == 1));
        MeshSigns { per_edge }
    }
}

#[derive(Debug, Clone)]
pub struct TranslationQuiver {
    graph: DynkinGraph,
    h: usize,
    vertices: Vec<Vertex>,
    arrows: Vec<Arrow>,
    incoming: Vec<Vec<usize>>,
    outgoing: Vec<Vec<usize>>,
}

impl TranslationQuiver {
    pub fn build(graph: &DynkinGraph) -> Self {
        let h = graph.h();
        let mut vertices = Vec::with_capacity(graph.rank() * h);
        for i in 0..graph.rank() {
            for n in (graph.parity(i) as usize..2 * h).step_by(2) {
                vertices.push((i, n));
            }
        }
        let mut tq = TranslationQuiver {
            graph: graph.clone(),
            h,
            vertices,
            arrows: Vec::new(),
            incoming: Vec::new(),
            outgoing: Vec::new(),
        };
        let mut arrows = Vec::new();
        for (s, &(i, n)) in tq.vertices.iter().enumerate() {
            for &j in graph.neighbors(i) {
                arrows.push(Arrow {
                    source: s,
                    target: tq.index((j, (n + 1) % (2 * h))),
                });
            }
        }
        let mut incoming = vec![Vec::new(); tq.vertices.len()];
        let mut outgoing = vec![Vec::new(); tq.vertices.len()];
        for (k, a) in arrows.iter().enumerate() {
            outgoing[a.source].push(k);
            incoming[a.target].push(k);
        }
        tq.arrows = arrows;
        tq.incoming = incoming;
        tq.outgoing = outgoing;
        tq
    }

    pub fn graph(&self) -> &DynkinGraph {
        &self.graph
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex(&self, v: usize) -> Vertex {
        self.vertices[v]
    }

    /// Index of `(i, n)`; `n` is reduced mod `2h`. Panics off the component.
    pub fn index(&self, (i, n): Vertex) -> usize {
        let n = n % (2 * self.h);
        let p = self.graph.parity(i) as usize;
        assert!(
            (n + p).is_multiple_of(2),
            "({}, {n}) is not on the even component",
            i + 1
        );
        i * self.h + (n - p) / 2
    }

    pub fn try_index(&self, (i, n): Vertex) -> Result<usize> {
        self.graph.check_vertex(i)?;
        let n = n % (2 * self.h);
        if !(n + self.graph.parity(i) as usize).is_multiple_of(2) {
            return Err(Error::InvalidHeight(format!(
                "({}, {n}) has p(i) + n odd",
                i + 1
            )));
        }
        Ok(self.index((i, n)))
    }

    /// `tau(i, n) = (i, n + 2)`
    pub fn tau(&self, v: usize) -> usize {
        let (i, n) = self.vertices[v];
        self.index((i, n + 2))
    }

    pub fn tau_inverse(&self, v: usize) -> usize {
        let (i, n) = self.vertices[v];
        self.index((i, n + 2 * self.h - 2))
    }

    /// The mesh partner `bar e : (j, n+1) -> (i, n+2)` of `e : (i, n) -> (j, n+1)`.
    pub fn mesh_partner(&self, e: usize) -> usize {
        let a = self.arrows[e];
        let target = self.tau(a.source);
        self.outgoing[a.target]
            .iter()
            .copied()
            .find(|&k| self.arrows[k].target == target)
            .expect("every arrow has a mesh partner")
    }

    pub fn sign(&self, signs: &MeshSigns, e: usize) -> i64 {
        let a = self.arrows[e];
        let (i, _) = self.vertices[a.source];
        let (j, _) = self.vertices[a.target];
        let edge = self
            .graph
            .edges()
            .iter()
            .position(|&(x, y)| (x, y) == (i, j) || (x, y) == (j, i))
            .unwrap();
        let base = if self.graph.parity(i) == 0 { 1 } else { -1 };
        base * signs.per_edge[edge] as i64
    }

    /// The mesh relation at `v` as `(e, bar e, eps(e))` terms.
    pub fn mesh_relation(&self, signs: &MeshSigns, v: usize) -> Vec<(usize, usize, i64)> {
        self.outgoing[v]
            .iter()
            .map(|&e| (e, self.mesh_partner(e), self.sign(signs, e)))
            .collect()
    }

    pub fn slice(&self, height: &HeightFunction) -> Result<Slice> {
        if height.modulus() != 2 * self.h || height.values().len() != self.graph.rank() {
            return Err(Error::InvalidHeight(
                "height belongs to a different graph".into(),
            ));
        }
        let checked = self.graph.height(
            &height
                .values()
                .iter()
                .map(|&v| v as i64)
                .collect::<Vec<_>>(),
        )?;
        let vertices: Vec<usize> = (0..self.graph.rank())
            .map(|i| self.index((i, checked.get(i))))
            .collect();
        let mut arrows = Vec::new();
        for a in &self.arrows {
            if let (Some(s), Some(t)) = (
                vertices.iter().position(|&v| v == a.source),
                vertices.iter().position(|&v| v == a.target),
            ) {
                arrows.push((s, t));
            }
        }
        let orientation = Orientation::new(self.graph.rank(), arrows);
        let expected = checked.orientation(&self.graph);
        let mut got: Vec<_> = orientation.arrows().to_vec();
        let mut want: Vec<_> = expected.arrows().to_vec();
        got.sort_unstable();
        want.sort_unstable();
        if got != want {
            return Err(Error::Consistency(
                "slice orientation differs from the height orientation".into(),
            ));
        }
        Ok(Slice {
            height: checked,
            vertices,
            orientation: expected,
        })
    }

    /// `dim Hom(v, w)` in the mesh category, summed over path lengths `<= cap`.
    pub fn mesh_hom_dim(&self, v: usize, w: usize, cap: usize) -> Result<usize> {
        Ok(self.mesh_hom_row(v, cap, &MeshSigns::canonical(&self.graph))?[w])
    }

    /// `dim Hom(v, -)` for every target. Lengths past `cap` are still
    /// examined up to `cap + 2h`; anything surviving there is an error.
    pub fn mesh_hom_row(&self, v: usize, cap: usize, signs: &MeshSigns) -> Result<Vec<usize>> {
        let graded = self.graded_row(v, cap, signs)?;
        let mut total = vec![0; self.vertex_count()];
        for level in graded.iter().take(cap + 1) {
            for (t, d) in total.iter_mut().zip(level) {
                *t += d;
            }
        }
        if graded.len() > cap + 1 {
            return Err(Error::Consistency(format!(
                "mesh quotient from {} is nonzero beyond length {cap}",
                self.label(v)
            )));
        }
        Ok(total)
    }

    /// Graded dimensions `dim Q_l(v, u)` for `l = 0, 1, ...` until a level
    /// vanishes (and so do all later ones) or `cap + 2h` is passed.
    pub fn graded_row(&self, v: usize, cap: usize, signs: &MeshSigns) -> Result<Vec<Vec<usize>>> {
        let min = 2 * self.h;
        if cap < min {
            return Err(Error::CapTooSmall { cap, min });
        }
        let nv = self.vertex_count();
        let limit = cap + 2 * self.h;
        let relations: Vec<_> = (0..nv).map(|x| self.mesh_relation(signs, x)).collect();
        let mut dims: Vec<Vec<usize>> = Vec::new();
        // arrow_maps[e] : Q_l(v, s(e)) -> Q_{l+1}(v, t(e)) for the latest l
        let mut prev_arrow_maps: Vec<QMatrix> = Vec::new();
        let mut level = vec![0usize; nv];
        level[v] = 1;
        let mut prev_level = vec![0usize; nv];
        loop {
            dims.push(level.clone());
            if level.iter().all(|&d| d == 0) {
                dims.pop();
                return Ok(dims);
            }
            if dims.len() > limit {
                return Ok(dims);
            }
            let mut arrow_maps = vec![QMatrix::zeros(0, 0); self.arrows.len()];
            let mut next = vec![0usize; nv];
            for u in 0..nv {
                let inc = &self.incoming[u];
                let total: usize = inc.iter().map(|&a| level[self.arrows[a].source]).sum();
                if total == 0 {
                    for &a in inc {
                        arrow_maps[a] = QMatrix::zeros(0, level[self.arrows[a].source]);
                    }
                    continue;
                }
                let x = self.tau_inverse(u);
                let rel_dim = prev_level[x];
                let mut r = QMatrix::zeros(total, rel_dim);
                if rel_dim > 0 {
                    for &(e, ebar, eps) in &relations[x] {
                        let offset = self.block_offset(inc, ebar, &level);
                        let m = &prev_arrow_maps[e];
                        for row in 0..m.rows() {
                            for col in 0..m.cols() {
                                let val = m.get(row, col) * Q::from_integer(eps as i128);
                                let cur = r.get(offset + row, col) + val;
                                r.set(offset + row, col, cur);
                            }
                        }
                    }
                }
                let p = r.cokernel_projection();
                next[u] = p.rows();
                for &a in inc {
                    let offset = self.block_offset(inc, a, &level);
                    arrow_maps[a] = p.column_block(offset, level[self.arrows[a].source]);
                }
            }
            prev_arrow_maps = arrow_maps;
            prev_level = std::mem::replace(&mut level, next);
        }
    }

    fn block_offset(&self, incoming: &[usize], arrow: usize, level: &[usize]) -> usize {
        incoming
            .iter()
            .take_while(|&&a| a != arrow)
            .map(|&a| level[self.arrows[a].source])
            .sum()
    }

    /// Full `nh x nh` table of mesh-category hom dimensions.
    pub fn mesh_hom_table(&self, cap: usize, signs: &MeshSigns) -> Result<Vec<Vec<usize>>> {
        (0..self.vertex_count())
            .into_par_iter()
            .map(|v| self.mesh_hom_row(v, cap, signs))
            .collect()
    }

    /// `(i,n)` with `i` 1-based.
    pub fn label(&self, v: usize) -> String {
        let (i, n) = self.vertices[v];
        format!("({},{})", i + 1, n)
    }

    pub fn ar_quiver_dot(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{}\" {{", self.graph.name());
        for v in 0..self.vertex_count() {
            let _ = writeln!(s, "  v{v} [label=\"{}\"];", self.label(v));
        }
        for a in &self.arrows {
            let _ = writeln!(s, "  v{} -> v{};", a.source, a.target);
        }
        for v in 0..self.vertex_count() {
            let _ = writeln!(s, "  v{v} -> v{} [style=dashed];", self.tau(v));
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Debug, Clone)]
pub struct Slice {
    pub height: HeightFunction,
    /// Quiver index of `(i, height(i))`, indexed by `i`.
    pub vertices: Vec<usize>,
    pub orientation: Orientation,
}
