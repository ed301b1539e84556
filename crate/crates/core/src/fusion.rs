//! The truncated fusion ring of `U_q(sl2)` at `q = exp(i pi / h)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign};

use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// Multiplicities of the simples `V_0..V_{h-2}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ObjectClass {
    mult: Vec<u64>,
}

impl ObjectClass {
    pub fn zero(h: usize) -> Self {
        ObjectClass {
            mult: vec![0; h - 1],
        }
    }

    /// `V_k`, or the zero object when `h-1 <= k` (the truncated labels).
    pub fn simple(h: usize, k: usize) -> Self {
        let mut c = Self::zero(h);
        if k + 1 < h {
            c.mult[k] = 1;
        }
        c
    }

    pub fn from_multiplicities(mult: Vec<u64>) -> Self {
        ObjectClass { mult }
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.mult
    }

    pub fn get(&self, k: usize) -> u64 {
        self.mult.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.mult.iter().all(|&m| m == 0)
    }

    pub fn total(&self) -> u64 {
        self.mult.iter().sum()
    }

    /// Labels with nonzero multiplicity.
    pub fn support(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.mult
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(k, &m)| (k, m))
    }

    /// `self - other` when `other` is a subobject.
    pub fn checked_sub(&self, other: &ObjectClass) -> Option<ObjectClass> {
        let mult = self
            .mult
            .iter()
            .zip(&other.mult)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()?;
        Some(ObjectClass { mult })
    }
}

impl Add for &ObjectClass {
    type Output = ObjectClass;

    fn add(self, rhs: &ObjectClass) -> ObjectClass {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&ObjectClass> for ObjectClass {
    fn add_assign(&mut self, rhs: &ObjectClass) {
        assert_eq!(
            self.mult.len(),
            rhs.mult.len(),
            "classes of different rings"
        );
        for (a, b) in self.mult.iter_mut().zip(&rhs.mult) {
            *a += b;
        }
    }
}

impl fmt::Display for ObjectClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .support()
            .map(|(k, m)| {
                if m == 1 {
                    format!("V{k}")
                } else {
                    format!("{m}V{k}")
                }
            })
            .collect();
        f.write_str(&parts.join("+"))
    }
}

/// Serialized as `{"label": multiplicity}` over the support.
impl Serialize for ObjectClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        for (k, m) in self.support() {
            map.serialize_entry(&k.to_string(), &m)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FusionRing {
    h: usize,
}

impl FusionRing {
    pub fn new(h: usize) -> Result<Self> {
        if h < 2 {
            return Err(Error::InvalidCoxeterNumber(h));
        }
        Ok(FusionRing { h })
    }

    pub fn h(&self) -> usize {
        self.h
    }

    /// Number of simples, `h - 1`.
    pub fn size(&self) -> usize {
        self.h - 1
    }

    pub fn check_label(&self, k: usize) -> Result<()> {
        if k + 1 < self.h {
            Ok(())
        } else {
            Err(Error::LabelOutOfRange {
                label: k,
                h: self.h,
            })
        }
    }

    /// `N^k_{n,m}`, zero outside the label range.
    pub fn coefficient(&self, n: usize, m: usize, k: usize) -> u64 {
        let top = self.h - 2;
        if n > top || m > top || k > top {
            return 0;
        }
        let lo = n.abs_diff(m);
        let hi = (n + m).min(2 * top - (n + m));
        u64::from(lo <= k && k <= hi && (k + n + m).is_multiple_of(2))
    }

    pub fn tensor(&self, n: usize, m: usize) -> Result<ObjectClass> {
        self.check_label(n)?;
        self.check_label(m)?;
        let mult = (0..self.size())
            .map(|k| self.coefficient(n, m, k))
            .collect();
        Ok(ObjectClass { mult })
    }

    /// `V_k (x) X`, extended additively. Labels `k >= h - 1` act as zero.
    pub fn tensor_class(&self, k: usize, x: &ObjectClass) -> Result<ObjectClass> {
        let mut out = ObjectClass::zero(self.h);
        for (m, mult) in x.support() {
            for t in 0..self.size() {
                out.mult[t] += mult * self.coefficient(k, m, t);
            }
        }
        Ok(out)
    }

    /// `(N_k)_{a,b} = N^a_{k,b}`
    pub fn fusion_matrix(&self, k: usize) -> Result<IntMatrix> {
        self.check_label(k)?;
        let n = self.size();
        let mut m = IntMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                m[(a, b)] = self.coefficient(k, b, a) as i64;
            }
        }
        Ok(m)
    }

    pub fn qdim(&self, n: usize) -> Result<f64> {
        self.check_label(n)?;
        let h = self.h as f64;
        Ok(((n + 1) as f64 * PI / h).sin() / (PI / h).sin())
    }

    /// First `(a, b, c, k)` violating associativity, if any.
    pub fn associativity_witness(&self) -> Option<(usize, usize, usize, usize)> {
        let n = self.size();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for k in 0..n {
                        let left: u64 = (0..n)
                            .map(|t| self.coefficient(a, b, t) * self.coefficient(t, c, k))
                            .sum();
                        let right: u64 = (0..n)
                            .map(|t| self.coefficient(b, c, t) * self.coefficient(a, t, k))
                            .sum();
                        if left != right {
                            return Some((a, b, c, k));
                        }
                    }
                }
            }
        }
        None
    }

    /// Largest deviation of `qdim(n) qdim(m) - sum_k N^k_{n,m} qdim(k)` over all pairs.
    pub fn qdim_defect(&self) -> f64 {
        let n = self.size();
        let dims: Vec<f64> = (0..n).map(|k| self.qdim(k).unwrap()).collect();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let rhs: f64 = (0..n)
                    .map(|k| self.coefficient(a, b, k) as f64 * dims[k])
                    .sum();
                worst = worst.max((dims[a] * dims[b] - rhs).abs());
            }
        }
        worst
    }
}

/// JSON shape of a single product: `{"h":5,"tensor":[3,1],"result":{"2":1}}`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TensorReport {
    pub h: usize,
    pub tensor: [usize; 2],
    pub result: ObjectClass,
}

/// All products `V_n (x) V_m` keyed by `"n,m"`.
pub fn fusion_table(ring: &FusionRing) -> BTreeMap<(usize, usize), ObjectClass> {
    let n = ring.size();
    let mut table = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            table.insert((a, b), ring.tensor(a, b).unwrap());
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(h: usize) -> FusionRing {
        FusionRing::new(h).unwrap()
    }

    #[test]
    fn small_products() {
        let r = ring(5);
        assert_eq!(r.tensor(3, 1).unwrap(), ObjectClass::simple(5, 2));
        assert_eq!(
            r.tensor(2, 2).unwrap(),
            &ObjectClass::simple(5, 0) + &ObjectClass::simple(5, 2)
        );
        for m in 0..4 {
            assert_eq!(r.tensor(0, m).unwrap(), ObjectClass::simple(5, m));
        }
        assert!(matches!(
            r.tensor(4, 0),
            Err(Error::LabelOutOfRange { label: 4, h: 5 })
        ));
    }

    #[test]
    fn truncated_labels_are_zero() {
        for k in 4..10 {
            assert!(ObjectClass::simple(5, k).is_zero());
        }
    }

    #[test]
    fn fusion_matrices_h5() {
        let r = ring(5);
        let n: Vec<IntMatrix> = (0..4).map(|k| r.fusion_matrix(k).unwrap()).collect();
        assert!(n[0].is_identity());
        assert_eq!(n[1].mul(&n[1]), n[0].add(&n[2]));
        let reversal = IntMatrix::from_rows(&[
            vec![0, 0, 0, 1],
            vec![0, 0, 1, 0],
            vec![0, 1, 0, 0],
            vec![1, 0, 0, 0],
        ]);
        assert_eq!(n[3], reversal);
    }

    #[test]
    fn quantum_dimensions() {
        let r = ring(5);
        assert!((r.qdim(0).unwrap() - 1.0).abs() < 1e-12);
        assert!((r.qdim(3).unwrap() - 1.0).abs() < 1e-12);
        assert!((r.qdim(1).unwrap() - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn json_shape() {
        let report = TensorReport {
            h: 5,
            tensor: [3, 1],
            result: ring(5).tensor(3, 1).unwrap(),
        };
        assert_eq!(
            serde_json::to_string(&report).unwrap(),
            r#"{"h":5,"tensor":[3,1],"result":{"2":1}}"#
        );
    }

    #[test]
    fn h2_is_trivial() {
        let r = ring(2);
        assert_eq!(r.size(), 1);
        assert_eq!(r.tensor(0, 0).unwrap(), ObjectClass::simple(2, 0));
        assert!(FusionRing::new(1).is_err());
    }
}
