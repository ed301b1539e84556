//! Module-category graphs of the fusion ring: the action of `V_k` on the
//! simples `X_i` of a Dynkin graph, built by the Chebyshev recursion and
//! checked constructively.

use std::fmt;

use crate::dynkin::{AdeType, DynkinGraph};
use crate::error::{Error, Result};
use crate::fusion::ObjectClass;
use crate::linalg::IntMatrix;

/// The first obstruction met while building the action matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `M_k` has a negative entry.
    NegativeEntry {
        k: usize,
        row: usize,
        col: usize,
        value: i64,
    },
    /// `M_{h-2}` is not a permutation matrix.
    NotPermutation { k: usize },
    /// `M_{h-2}` is a permutation but not an involution.
    NotInvolution { k: usize },
    /// No vertex carries an algebra with trivial twist. The witness is the
    /// first `V_k` with `theta_k != 1` in the algebra at vertex 1:
    /// `theta_k = exp(2 pi i num / den)`.
    NontrivialTwist {
        vertex: usize,
        label: usize,
        num: usize,
        den: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::NegativeEntry { k, row, col, value } => write!(
                f,
                "M_{k} has negative entry {value} at ({}, {})",
                row + 1,
                col + 1
            ),
            Violation::NotPermutation { k } => write!(f, "M_{k} is not a permutation matrix"),
            Violation::NotInvolution { k } => write!(f, "M_{k} squared is not the identity"),
            Violation::NontrivialTwist {
                vertex,
                label,
                num,
                den,
            } => write!(
                f,
                "every vertex algebra has a nontrivial twist; at vertex {} it contains V_{label} \
                 with theta = exp(2 pi i {num}/{den})",
                vertex + 1
            ),
        }
    }
}

#[derive(Debug, Clone)]
pub struct QuantumSubgroup {
    graph: DynkinGraph,
    action: Vec<IntMatrix>,
    base_vertex: usize,
}

/// `M_0 = I`, `M_1 = A`, `M_{k+1} = M_1 M_k - M_{k-1}` up to `M_{last}`.
pub fn chebyshev_matrices(graph: &DynkinGraph, last: usize) -> Vec<IntMatrix> {
    let a = graph.adjacency();
    let mut ms = vec![IntMatrix::identity(graph.rank())];
    if last >= 1 {
        ms.push(a.clone());
    }
    for k in 1..last {
        let next = a.mul(&ms[k]).sub(&ms[k - 1]);
        ms.push(next);
    }
    ms
}

/// `theta_k = exp(i pi k (k+2) / 2h)` as a reduced fraction of a full turn.
fn twist_phase(h: usize, k: usize) -> (usize, usize) {
    let den = 4 * h;
    let num = (k * (k + 2)) % den;
    let g = gcd(num, den);
    (num / g, den / g)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl QuantumSubgroup {
    pub fn build(graph: &DynkinGraph) -> Result<Self> {
        let h = graph.h();
        let reject = |violation| Error::NotAdmissible {
            graph: graph.name(),
            violation,
        };
        let action = chebyshev_matrices(graph, h - 2);
        for (k, m) in action.iter().enumerate() {
            if let Some((row, col, value)) = m.min_entry().filter(|&(_, _, v)| v < 0) {
                return Err(reject(Violation::NegativeEntry { k, row, col, value }));
            }
        }
        let top = &action[h - 2];
        if !top.is_permutation() {
            return Err(reject(Violation::NotPermutation { k: h - 2 }));
        }
        if !top.mul(top).is_identity() {
            return Err(reject(Violation::NotInvolution { k: h - 2 }));
        }
        let twisted_label =
            |x: usize| (0..=h - 2).find(|&k| action[k][(x, x)] != 0 && twist_phase(h, k).0 != 0);
        let base_vertex = match (0..graph.rank()).find(|&x| twisted_label(x).is_none()) {
            Some(x) => x,
            None => {
                let label = twisted_label(0).expect("vertex 1 is twisted");
                let (num, den) = twist_phase(h, label);
                return Err(reject(Violation::NontrivialTwist {
                    vertex: 0,
                    label,
                    num,
                    den,
                }));
            }
        };
        Ok(QuantumSubgroup {
            graph: graph.clone(),
            action,
            base_vertex,
        })
    }

    pub fn graph(&self) -> &DynkinGraph {
        &self.graph
    }

    pub fn h(&self) -> usize {
        self.graph.h()
    }

    pub fn rank(&self) -> usize {
        self.graph.rank()
    }

    /// `M_0..M_{h-2}`.
    pub fn action_matrices(&self) -> &[IntMatrix] {
        &self.action
    }

    pub fn action_matrix(&self, k: usize) -> Result<&IntMatrix> {
        self.action.get(k).ok_or(Error::LabelOutOfRange {
            label: k,
            h: self.h(),
        })
    }

    /// `M_{h-2}` read as the involution `i -> sigma(i)`.
    pub fn involution(&self) -> Vec<usize> {
        let top = &self.action[self.h() - 2];
        (0..self.rank())
            .map(|i| (0..self.rank()).find(|&j| top[(j, i)] == 1).unwrap())
            .collect()
    }

    /// A vertex whose algebra `A = sum_k (M_k)_{xx} V_k` has trivial twist.
    pub fn base_vertex(&self) -> usize {
        self.base_vertex
    }

    /// The algebra object at the base vertex as a class in the fusion ring.
    pub fn algebra(&self) -> ObjectClass {
        let x = self.base_vertex;
        ObjectClass::from_multiplicities(self.action.iter().map(|m| m[(x, x)] as u64).collect())
    }

    /// `V_k (x) X_x = sum_j (M_k)_{jx} X_j`, as a multiset of vertices.
    pub fn act(&self, k: usize, x: usize) -> Result<Vec<usize>> {
        let m = self.action_matrix(k)?;
        self.graph.check_vertex(x)?;
        let mut out = Vec::new();
        for j in 0..self.rank() {
            for _ in 0..m[(j, x)] {
                out.push(j);
            }
        }
        Ok(out)
    }

    /// `V_k (x) sum_x c_x X_x` on multiplicity vectors.
    pub fn act_vector(&self, k: usize, v: &[i64]) -> Result<Vec<i64>> {
        Ok(self.action_matrix(k)?.mul_vec(v))
    }

    /// Largest coefficient gap between the characteristic polynomial of
    /// `M_1` and `prod_m (x - 2 cos(m pi / h))` over the exponents.
    pub fn spectral_defect(&self) -> f64 {
        spectral_defect(&self.graph)
    }
}

pub fn exponents(graph: &DynkinGraph) -> Vec<usize> {
    let n = graph.rank();
    match graph.ade_type() {
        AdeType::A => (1..=n).collect(),
        AdeType::D => {
            let mut e: Vec<usize> = (0..n - 1).map(|k| 2 * k + 1).collect();
            e.push(n - 1);
            e.sort_unstable();
            e
        }
        AdeType::E => match n {
            6 => vec![1, 4, 5, 7, 8, 11],
            7 => vec![1, 5, 7, 9, 11, 13, 17],
            _ => vec![1, 7, 11, 13, 17, 19, 23, 29],
        },
    }
}

pub fn spectral_defect(graph: &DynkinGraph) -> f64 {
    let exact = graph
        .adjacency()
        .charpoly()
        .expect("small adjacency matrices");
    let h = graph.h() as f64;
    let mut expected = vec![1.0f64];
    for m in exponents(graph) {
        let root = 2.0 * (m as f64 * std::f64::consts::PI / h).cos();
        let mut next = vec![0.0; expected.len() + 1];
        for (d, c) in expected.iter().enumerate() {
            next[d + 1] += c;
            next[d] -= root * c;
        }
        expected = next;
    }
    exact
        .iter()
        .zip(&expected)
        .map(|(&a, b)| (a as f64 - b).abs())
        .fold(0.0, f64::max)
}

/// Graphs `A_{h-1}`, `D_{2n}` with `4n - 2 = h`, `E6` at 12 and `E8` at 30.
pub fn admissible_graphs(h: usize) -> Result<Vec<DynkinGraph>> {
    if h < 2 {
        return Err(Error::InvalidCoxeterNumber(h));
    }
    let mut out = vec![DynkinGraph::build_ade(AdeType::A, h - 1)?];
    if (h + 2).is_multiple_of(4) && h >= 6 {
        out.push(DynkinGraph::build_ade(AdeType::D, (h + 2) / 2)?);
    }
    if h == 12 {
        out.push(DynkinGraph::build_ade(AdeType::E, 6)?);
    }
    if h == 30 {
        out.push(DynkinGraph::build_ade(AdeType::E, 8)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::FusionRing;

    fn g(label: &str) -> DynkinGraph {
        DynkinGraph::from_label(label).unwrap()
    }

    fn names(h: usize) -> Vec<String> {
        admissible_graphs(h)
            .unwrap()
            .iter()
            .map(DynkinGraph::name)
            .collect()
    }

    #[test]
    fn admissible_lists() {
        assert_eq!(names(10), ["A9", "D6"]);
        assert_eq!(names(3), ["A2"]);
        assert_eq!(names(12), ["A11", "E6"]);
        assert_eq!(names(30), ["A29", "D16", "E8"]);
        assert_eq!(names(6), ["A5", "D4"]);
        assert_eq!(names(2), ["A1"]);
    }

    #[test]
    fn a4_matches_fusion() {
        let s = QuantumSubgroup::build(&g("A4")).unwrap();
        let ring = FusionRing::new(5).unwrap();
        for k in 0..4 {
            assert_eq!(s.action_matrices()[k], ring.fusion_matrix(k).unwrap());
        }
        assert_eq!(s.act(3, 0).unwrap(), vec![3]);
        assert_eq!(s.act(0, 2).unwrap(), vec![2]);
    }

    #[test]
    fn d6_fork_neighbors() {
        let s = QuantumSubgroup::build(&g("D6")).unwrap();
        assert_eq!(s.act(1, 3).unwrap(), vec![2, 4, 5]);
    }

    #[test]
    fn base_vertices() {
        assert_eq!(QuantumSubgroup::build(&g("E6")).unwrap().base_vertex(), 0);
        assert_eq!(QuantumSubgroup::build(&g("E8")).unwrap().base_vertex(), 7);
        assert_eq!(QuantumSubgroup::build(&g("D4")).unwrap().base_vertex(), 0);
    }

    #[test]
    fn e6_algebra_is_v0_plus_v6() {
        let s = QuantumSubgroup::build(&g("E6")).unwrap();
        let a = s.algebra();
        assert_eq!(a.support().collect::<Vec<_>>(), vec![(0, 1), (6, 1)]);
    }

    #[test]
    fn odd_d_and_e7_are_rejected_with_witness() {
        for label in ["D5", "D7", "E7"] {
            match QuantumSubgroup::build(&g(label)) {
                Err(Error::NotAdmissible {
                    violation: Violation::NontrivialTwist { num, .. },
                    ..
                }) => assert_ne!(num, 0),
                other => panic!("{label}: {other:?}"),
            }
        }
    }

    #[test]
    fn spectral_check_holds() {
        for label in ["A1", "A5", "D4", "D5", "D8", "E6", "E7", "E8"] {
            assert!(spectral_defect(&g(label)) < 1e-9, "{label}");
        }
    }

    #[test]
    fn out_of_range_queries() {
        let s = QuantumSubgroup::build(&g("A4")).unwrap();
        assert!(s.act(4, 0).is_err());
        assert!(s.act(0, 4).is_err());
    }
}
