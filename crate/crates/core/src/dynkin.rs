//! Simply laced Dynkin diagrams: Cartan data, roots, Coxeter elements,
//! height functions on `Z/2h` and their orientations.
//!
//! Vertices are 0-based internally and 1-based in every text format.
//! Numbering: A is the path `1 - 2 - ... - n`; D is the path `1 - ... - (n-1)`
//! with `n` attached to `n-2`; E follows Bourbaki (`2` hangs off `4`).

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AdeType {
    A,
    D,
    E,
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            AdeType::A => "A",
            AdeType::D => "D",
            AdeType::E => "E",
        };
        f.write_str(c)
    }
}

impl FromStr for AdeType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(AdeType::A),
            "D" | "d" => Ok(AdeType::D),
            "E" | "e" => Ok(AdeType::E),
            other => Err(Error::InvalidAde {
                label: other.to_string(),
                rank: 0,
                reason: "type must be one of A, D, E",
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            _ => Err(Error::InvalidHeight(format!("unknown flip sign {s:?}"))),
        }
    }
}

const E_EDGES: [(usize, usize); 7] = [(0, 2), (2, 3), (3, 4), (1, 3), (4, 5), (5, 6), (6, 7)];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynkinGraph {
    ty: AdeType,
    rank: usize,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
    parity: Vec<u8>,
    roots: Vec<Vec<i64>>,
    h: usize,
}

impl DynkinGraph {
    pub fn build_ade(ty: AdeType, rank: usize) -> Result<Self> {
        let invalid = |reason| Error::InvalidAde {
            label: ty.to_string(),
            rank,
            reason,
        };
        let edges: Vec<(usize, usize)> = match ty {
            AdeType::A if rank >= 1 => (1..rank).map(|i| (i - 1, i)).collect(),
            AdeType::A => return Err(invalid("A_n needs n >= 1")),
            AdeType::D if rank >= 4 => {
                let mut e: Vec<_> = (1..rank - 1).map(|i| (i - 1, i)).collect();
                e.push((rank - 3, rank - 1));
                e
            }
            AdeType::D => return Err(invalid("D_n needs n >= 4")),
            AdeType::E if (6..=8).contains(&rank) => E_EDGES[..rank - 1].to_vec(),
            AdeType::E => return Err(invalid("E_n needs n in {6, 7, 8}")),
        };
        Ok(Self::from_edges(ty, rank, edges))
    }

    /// Parses labels like `D5` or `e8`.
    pub fn from_label(label: &str) -> Result<Self> {
        let label = label.trim();
        let bad = || Error::InvalidAde {
            label: label.to_string(),
            rank: 0,
            reason: "expected a label such as A4, D5 or E8",
        };
        let (head, tail) =
            label.split_at(label.char_indices().nth(1).map_or(label.len(), |(i, _)| i));
        let ty: AdeType = head.parse().map_err(|_| bad())?;
        let rank: usize = tail.parse().map_err(|_| bad())?;
        Self::build_ade(ty, rank)
    }

    fn from_edges(ty: AdeType, rank: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut neighbors = vec![Vec::new(); rank];
        for &(a, b) in &edges {
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
        for nb in &mut neighbors {
            nb.sort_unstable();
        }
        let mut parity = vec![u8::MAX; rank];
        parity[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for &w in &neighbors[v] {
                if parity[w] == u8::MAX {
                    parity[w] = 1 - parity[v];
                    queue.push_back(w);
                }
            }
        }
        let mut g = DynkinGraph {
            ty,
            rank,
            edges,
            neighbors,
            parity,
            roots: Vec::new(),
            h: 0,
        };
        g.roots = g.reflection_closure();
        g.h = g.roots.len() / rank;
        g
    }

    pub fn ade_type(&self) -> AdeType {
        self.ty
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.ty, self.rank)
    }

    /// Coxeter number, computed as `#roots / rank`.
    pub fn h(&self) -> usize {
        self.h
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn is_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors[i].contains(&j)
    }

    pub fn parity(&self, i: usize) -> u8 {
        self.parity[i]
    }

    pub fn parities(&self) -> &[u8] {
        &self.parity
    }

    pub fn check_vertex(&self, i: usize) -> Result<()> {
        if i < self.rank {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange(i + 1))
        }
    }

    pub fn adjacency(&self) -> IntMatrix {
        let mut a = IntMatrix::zeros(self.rank, self.rank);
        for &(i, j) in &self.edges {
            a[(i, j)] = 1;
            a[(j, i)] = 1;
        }
        a
    }

    pub fn cartan(&self) -> IntMatrix {
        let mut c = IntMatrix::identity(self.rank);
        for i in 0..self.rank {
            c[(i, i)] = 2;
        }
        c.sub(&self.adjacency())
    }

    /// `(a, b) = a^T C b`
    pub fn form(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            s += 2 * a[i] * b[i];
            for &j in &self.neighbors[i] {
                s -= a[i] * b[j];
            }
        }
        s
    }

    /// `s_i(a) = a - (a, e_i) e_i`
    pub fn reflect(&self, i: usize, a: &[i64]) -> Vec<i64> {
        let mut out = a.to_vec();
        let pairing = 2 * a[i] - self.neighbors[i].iter().map(|&j| a[j]).sum::<i64>();
        out[i] -= pairing;
        out
    }

    fn reflection_closure(&self) -> Vec<Vec<i64>> {
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        for i in 0..self.rank {
            let mut e = vec![0; self.rank];
            e[i] = 1;
            if seen.insert(e.clone()) {
                queue.push_back(e);
            }
        }
        while let Some(a) = queue.pop_front() {
            for i in 0..self.rank {
                let b = self.reflect(i, &a);
                if seen.insert(b.clone()) {
                    queue.push_back(b);
                }
            }
        }
        let mut roots: Vec<_> = seen.into_iter().collect();
        roots.sort();
        roots
    }

    /// All roots, sorted lexicographically.
    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn positive_roots(&self) -> Vec<Vec<i64>> {
        self.roots
            .iter()
            .filter(|r| r.iter().all(|&x| x >= 0))
            .cloned()
            .collect()
    }

    pub fn simple_reflection(&self, i: usize) -> IntMatrix {
        let mut s = IntMatrix::identity(self.rank);
        s[(i, i)] = -1;
        for &j in &self.neighbors[i] {
            s[(i, j)] = 1;
        }
        s
    }

    /// Product of simple reflections along an admissible order of `omega`,
    /// the first vertex reflected first (rightmost factor).
    pub fn coxeter_element(&self, omega: &Orientation) -> IntMatrix {
        self.coxeter_element_for_order(&omega.admissible_order())
    }

    pub fn coxeter_element_for_order(&self, order: &[usize]) -> IntMatrix {
        order.iter().fold(IntMatrix::identity(self.rank), |c, &i| {
            self.simple_reflection(i).mul(&c)
        })
    }

    pub fn bipartite_height(&self) -> HeightFunction {
        HeightFunction {
            values: self.parity.iter().map(|&p| p as usize).collect(),
            modulus: 2 * self.h,
        }
    }

    /// Every height function `Gamma -> Z/2h`, sorted by value vector.
    pub fn enumerate_heights(&self) -> Vec<HeightFunction> {
        let modulus = 2 * self.h;
        let order = self.bfs_tree_order();
        let mut out = Vec::new();
        for start in (0..modulus).step_by(2) {
            let mut values = vec![0; self.rank];
            values[0] = start;
            self.extend_heights(&order, 1, &mut values, modulus, &mut out);
        }
        out.sort_by(|a, b| a.values.cmp(&b.values));
        out
    }

    // (vertex, parent) pairs in BFS order from vertex 0
    fn bfs_tree_order(&self) -> Vec<(usize, usize)> {
        let mut order = vec![(0, 0)];
        let mut seen = vec![false; self.rank];
        seen[0] = true;
        let mut k = 0;
        while k < order.len() {
            let v = order[k].0;
            for &w in &self.neighbors[v] {
                if !seen[w] {
                    seen[w] = true;
                    order.push((w, v));
                }
            }
            k += 1;
        }
        order
    }

    fn extend_heights(
        &self,
        order: &[(usize, usize)],
        k: usize,
        values: &mut Vec<usize>,
        modulus: usize,
        out: &mut Vec<HeightFunction>,
    ) {
        if k == order.len() {
            out.push(HeightFunction {
                values: values.clone(),
                modulus,
            });
            return;
        }
        let (v, parent) = order[k];
        for step in [1, modulus - 1] {
            values[v] = (values[parent] + step) % modulus;
            self.extend_heights(order, k + 1, values, modulus, out);
        }
    }

    /// Validates raw values against both height constraints.
    pub fn height(&self, values: &[i64]) -> Result<HeightFunction> {
        if values.len() != self.rank {
            return Err(Error::InvalidHeight(format!(
                "expected {} values, got {}",
                self.rank,
                values.len()
            )));
        }
        let modulus = 2 * self.h;
        let values: Vec<usize> = values
            .iter()
            .map(|&v| v.rem_euclid(modulus as i64) as usize)
            .collect();
        for i in 0..self.rank {
            if !(values[i] + self.parity[i] as usize).is_multiple_of(2) {
                return Err(Error::InvalidHeight(format!(
                    "h({}) + p({}) is odd",
                    i + 1,
                    i + 1
                )));
            }
        }
        for &(i, j) in &self.edges {
            let d = (values[j] + modulus - values[i]) % modulus;
            if d != 1 && d != modulus - 1 {
                return Err(Error::InvalidHeight(format!(
                    "h({}) and h({}) differ by more than 1",
                    i + 1,
                    j + 1
                )));
            }
        }
        Ok(HeightFunction { values, modulus })
    }

    /// `s_i^+` raises `h(i)` by 2 at a source, `s_i^-` lowers it at a sink.
    pub fn flip_height(
        &self,
        height: &HeightFunction,
        i: usize,
        sign: Sign,
    ) -> Result<HeightFunction> {
        self.check_vertex(i)?;
        let omega = height.orientation(self);
        let (ok, required, step) = match sign {
            Sign::Plus => (omega.is_source(i), "source", 2),
            Sign::Minus => (omega.is_sink(i), "sink", height.modulus - 2),
        };
        if !ok {
            return Err(Error::NotSourceOrSink {
                vertex: i + 1,
                required,
            });
        }
        let mut values = height.values.clone();
        values[i] = (values[i] + step) % height.modulus;
        Ok(HeightFunction {
            values,
            modulus: height.modulus,
        })
    }

    /// The line-based graph format: `type=D rank=5` followed by `edge=i,j` lines.
    pub fn to_graph_file(&self) -> String {
        let mut s = format!("type={} rank={}\n", self.ty, self.rank);
        for &(a, b) in &self.edges {
            s.push_str(&format!("edge={},{}\n", a + 1, b + 1));
        }
        s
    }

    /// Parses the graph format. Edge lines are optional but must reproduce
    /// the canonical numbering when present.
    pub fn parse_graph_file(text: &str) -> Result<Self> {
        let mut ty = None;
        let mut rank = None;
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: lineno + 1,
                message,
            };
            for token in line.split_whitespace() {
                let (key, value) = token
                    .split_once('=')
                    .ok_or_else(|| parse_err(format!("expected key=value, got {token:?}")))?;
                match key {
                    "type" => {
                        ty = Some(
                            value
                                .parse::<AdeType>()
                                .map_err(|e| parse_err(e.to_string()))?,
                        )
                    }
                    "rank" => {
                        rank = Some(
                            value
                                .parse::<usize>()
                                .map_err(|_| parse_err(format!("bad rank {value:?}")))?,
                        )
                    }
                    "edge" => {
                        let (a, b) = value
                            .split_once(',')
                            .ok_or_else(|| parse_err(format!("bad edge {value:?}")))?;
                        let a: usize = a
                            .trim()
                            .parse()
                            .map_err(|_| parse_err(format!("bad edge {value:?}")))?;
                        let b: usize = b
                            .trim()
                            .parse()
                            .map_err(|_| parse_err(format!("bad edge {value:?}")))?;
                        if a == 0 || b == 0 {
                            return Err(parse_err("vertices are numbered from 1".into()));
                        }
                        edges.push((a.min(b) - 1, a.max(b) - 1));
                    }
                    other => return Err(parse_err(format!("unknown key {other:?}"))),
                }
            }
        }
        let missing = |what: &str| Error::Parse {
            line: 0,
            message: format!("missing {what}"),
        };
        let g = Self::build_ade(
            ty.ok_or_else(|| missing("type"))?,
            rank.ok_or_else(|| missing("rank"))?,
        )?;
        if !edges.is_empty() {
            let mut canonical: Vec<_> =
                g.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
            canonical.sort_unstable();
            edges.sort_unstable();
            if edges != canonical {
                return Err(Error::InvalidAde {
                    label: g.ty.to_string(),
                    rank: g.rank,
                    reason: "edge list does not match the canonical vertex numbering",
                });
            }
        }
        Ok(g)
    }

    pub fn export(&self) -> GraphExport {
        GraphExport {
            label: self.name(),
            rank: self.rank,
            h: self.h,
            parity: self.parity.clone(),
            edges: self.edges.iter().map(|&(a, b)| [a + 1, b + 1]).collect(),
            cartan: self.cartan(),
            roots: self.roots.clone(),
        }
    }
}

impl fmt::Display for DynkinGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// JSON view of a graph. Vertex labels are 1-based.
#[derive(Debug, Clone, Serialize)]
pub struct GraphExport {
    pub label: String,
    pub rank: usize,
    pub h: usize,
    pub parity: Vec<u8>,
    pub edges: Vec<[usize; 2]>,
    pub cartan: IntMatrix,
    pub roots: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeightFunction {
    values: Vec<usize>,
    modulus: usize,
}

impl HeightFunction {
    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn get(&self, i: usize) -> usize {
        self.values[i]
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn orientation(&self, g: &DynkinGraph) -> Orientation {
        let arrows = g
            .edges()
            .iter()
            .map(|&(a, b)| {
                if (self.values[a] + 1) % self.modulus == self.values[b] {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        Orientation::new(g.rank(), arrows)
    }
}

impl fmt::Display for HeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// One direction per edge, stored as `(tail, head)` pairs in edge order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Orientation {
    n: usize,
    arrows: Vec<(usize, usize)>,
}

impl Orientation {
    pub fn new(n: usize, arrows: Vec<(usize, usize)>) -> Self {
        Orientation { n, arrows }
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn is_source(&self, i: usize) -> bool {
        self.arrows.iter().all(|&(_, t)| t != i)
    }

    pub fn is_sink(&self, i: usize) -> bool {
        self.arrows.iter().all(|&(s, _)| s != i)
    }

    pub fn sources(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.is_source(i)).collect()
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.is_sink(i)).collect()
    }

    pub fn opposite(&self) -> Orientation {
        Orientation::new(self.n, self.arrows.iter().map(|&(s, t)| (t, s)).collect())
    }

    /// Reverses every arrow touching `i`.
    pub fn reverse_at(&self, i: usize) -> Orientation {
        let arrows = self
            .arrows
            .iter()
            .map(|&(s, t)| if s == i || t == i { (t, s) } else { (s, t) })
            .collect();
        Orientation::new(self.n, arrows)
    }

    /// Topological order: each vertex appears after all its predecessors.
    /// Ties are broken by the smallest index.
    pub fn admissible_order(&self) -> Vec<usize> {
        let mut indeg = vec![0usize; self.n];
        for &(_, t) in &self.arrows {
            indeg[t] += 1;
        }
        let mut order = Vec::with_capacity(self.n);
        let mut done = vec![false; self.n];
        while order.len() < self.n {
            let v = (0..self.n)
                .find(|&v| !done[v] && indeg[v] == 0)
                .expect("orientation of a tree is acyclic");
            done[v] = true;
            order.push(v);
            for &(s, t) in &self.arrows {
                if s == v {
                    indeg[t] -= 1;
                }
            }
        }
        order
    }

    /// Number of directed paths from `i` to `j` (the trivial path included).
    pub fn path_count(&self, i: usize, j: usize) -> usize {
        let order = self.admissible_order();
        let mut count = vec![0usize; self.n];
        count[i] = 1;
        for &v in &order {
            if count[v] == 0 {
                continue;
            }
            for &(s, t) in &self.arrows {
                if s == v {
                    count[t] += count[v];
                }
            }
        }
        count[j]
    }
}
