//! Bigraded objects over the fusion ring, the algebras `S_q` and `O_q`, and
//! the degree-wise check of the triangle `O(n) -> O(n+1) (x) V_1 -> O(n+2) -> O(n)[1]`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion::{FusionRing, ObjectClass};

/// Classes indexed by (homological degree in `Z/2`, homogeneous degree in `Z/2h`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigradedObject {
    h: usize,
    slots: [Vec<ObjectClass>; 2],
}

impl BigradedObject {
    pub fn zero(h: usize) -> Self {
        let row = vec![ObjectClass::zero(h); 2 * h];
        BigradedObject {
            h,
            slots: [row.clone(), row],
        }
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn get(&self, i: usize, j: usize) -> &ObjectClass {
        &self.slots[i % 2][j % (2 * self.h)]
    }

    pub fn set(&mut self, i: usize, j: usize, c: ObjectClass) {
        let m = 2 * self.h;
        self.slots[i % 2][j % m] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.slots.iter().flatten().all(ObjectClass::is_zero)
    }

    /// `x(n)`: slot `(i, k)` of the result is slot `(i, n + k)` of `x`.
    pub fn twist(&self, n: usize) -> Self {
        let m = 2 * self.h;
        let mut out = Self::zero(self.h);
        for i in 0..2 {
            for k in 0..m {
                out.slots[i][k] = self.slots[i][(k + n) % m].clone();
            }
        }
        out
    }

    /// `x[1]`, exchanging homological degrees.
    pub fn shift(&self) -> Self {
        BigradedObject {
            h: self.h,
            slots: [self.slots[1].clone(), self.slots[0].clone()],
        }
    }

    /// `x (x) V_k`, slot by slot.
    pub fn tensor_simple(&self, ring: &FusionRing, k: usize) -> Result<Self> {
        let mut out = Self::zero(self.h);
        for i in 0..2 {
            for j in 0..2 * self.h {
                out.slots[i][j] = ring.tensor_class(k, &self.slots[i][j])?;
            }
        }
        Ok(out)
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for i in 0..2 {
            for j in 0..2 * self.h {
                out.slots[i][j] += &other.slots[i][j];
            }
        }
        out
    }

    /// Nonzero components keyed `"i,j"`.
    pub fn components(&self) -> BTreeMap<String, ObjectClass> {
        let mut map = BTreeMap::new();
        for i in 0..2 {
            for j in 0..2 * self.h {
                if !self.slots[i][j].is_zero() {
                    map.insert(format!("{i},{j}"), self.slots[i][j].clone());
                }
            }
        }
        map
    }
}

impl Serialize for BigradedObject {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.components().serialize(s)
    }
}

/// `S_q`: `V_k` in slot `(0, k)`, with `V_k = 0` for `k >= h - 1`.
pub fn build_sq(h: usize) -> Result<BigradedObject> {
    FusionRing::new(h)?;
    let mut s = BigradedObject::zero(h);
    for k in 0..2 * h {
        s.set(0, k, ObjectClass::simple(h, k));
    }
    Ok(s)
}

/// `O_q` in closed form: `V_k` at `(0, k)` for `k <= h-2`, `V_{2h-2-k}` at
/// `(1, k)` for `h <= k <= 2h-2`.
pub fn build_oq(h: usize) -> Result<BigradedObject> {
    FusionRing::new(h)?;
    let mut o = BigradedObject::zero(h);
    for k in 0..=h - 2 {
        o.set(0, k, ObjectClass::simple(h, k));
    }
    for k in h..=2 * h - 2 {
        o.set(1, k, ObjectClass::simple(h, 2 * h - 2 - k));
    }
    Ok(o)
}

/// `S_q (+) (S_q(h) (x) V_{h-2})[1]`
pub fn build_oq_compositional(h: usize) -> Result<BigradedObject> {
    let ring = FusionRing::new(h)?;
    let sq = build_sq(h)?;
    let tail = sq.twist(h).tensor_simple(&ring, h - 2)?.shift();
    Ok(sq.sum(&tail))
}

/// The proof's case split of a degree `d = k + n` of the triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TriangleCase {
    /// `0 <= d <= h-4`
    GenericLow,
    /// `d = h-3`
    LowEdge,
    /// `d = h-2`, where the third term needs homological degree 1.
    CrossingUp,
    /// `d = h-1`
    FirstOdd,
    /// `h <= d <= 2h-4`
    GenericHigh,
    /// `d = 2h-3`
    HighEdge,
    /// `d = 2h-2`
    CrossingDown,
    /// `d = 2h-1`
    FirstEven,
}

impl TriangleCase {
    pub const ALL: [TriangleCase; 8] = [
        TriangleCase::GenericLow,
        TriangleCase::LowEdge,
        TriangleCase::CrossingUp,
        TriangleCase::FirstOdd,
        TriangleCase::GenericHigh,
        TriangleCase::HighEdge,
        TriangleCase::CrossingDown,
        TriangleCase::FirstEven,
    ];

    /// At `h = 2` the ranges overlap; the earlier case in `ALL` wins.
    pub fn classify(h: usize, d: usize) -> TriangleCase {
        let (h, d) = (h as i64, d as i64);
        match d {
            d if d <= h - 4 => TriangleCase::GenericLow,
            d if d == h - 3 => TriangleCase::LowEdge,
            d if d == h - 2 => TriangleCase::CrossingUp,
            d if d == h - 1 => TriangleCase::FirstOdd,
            d if d <= 2 * h - 4 => TriangleCase::GenericHigh,
            d if d == 2 * h - 3 => TriangleCase::HighEdge,
            d if d == 2 * h - 2 => TriangleCase::CrossingDown,
            _ => TriangleCase::FirstEven,
        }
    }
}

impl fmt::Display for TriangleCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TriangleCase::GenericLow => "0<=d<=h-4",
            TriangleCase::LowEdge => "d=h-3",
            TriangleCase::CrossingUp => "d=h-2",
            TriangleCase::FirstOdd => "d=h-1",
            TriangleCase::GenericHigh => "h<=d<=2h-4",
            TriangleCase::HighEdge => "d=2h-3",
            TriangleCase::CrossingDown => "d=2h-2",
            TriangleCase::FirstEven => "d=2h-1",
        };
        f.write_str(s)
    }
}

/// The three terms of the triangle in one homogeneous degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeTerms {
    pub a: [ObjectClass; 2],
    pub b: [ObjectClass; 2],
    pub c: [ObjectClass; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeCheck {
    pub degree: usize,
    pub case: TriangleCase,
    pub terms: DegreeTerms,
    pub pass: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TriangleReport {
    pub h: usize,
    pub twist: usize,
    pub degrees: Vec<DegreeCheck>,
}

impl TriangleReport {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(|d| d.pass)
    }
}

/// Every homogeneous degree of the twisted triangle, checked against the
/// case pattern and against exactness of the 6-term periodic sequence.
pub fn verify_triangle(h: usize, n: usize) -> Result<TriangleReport> {
    let ring = FusionRing::new(h)?;
    let o = build_oq(h)?;
    let m = 2 * h;
    let a_obj = o.twist(n);
    let b_obj = o.twist(n + 1).tensor_simple(&ring, 1)?;
    let c_obj = o.twist(n + 2);
    let mut degrees = Vec::with_capacity(m);
    for k in 0..m {
        let terms = DegreeTerms {
            a: [a_obj.get(0, k).clone(), a_obj.get(1, k).clone()],
            b: [b_obj.get(0, k).clone(), b_obj.get(1, k).clone()],
            c: [c_obj.get(0, k).clone(), c_obj.get(1, k).clone()],
        };
        let d = (k + n) % m;
        let case = TriangleCase::classify(h, d);
        let detail = check_case(h, d, case, &terms)
            .err()
            .or_else(|| hexagon_exact(&terms).err());
        degrees.push(DegreeCheck {
            degree: k,
            case,
            terms,
            pass: detail.is_none(),
            detail,
        });
    }
    Ok(TriangleReport {
        h,
        twist: n % m,
        degrees,
    })
}

fn check_case(
    h: usize,
    d: usize,
    case: TriangleCase,
    t: &DegreeTerms,
) -> std::result::Result<(), String> {
    // V_k with negative labels read as zero
    let v = |k: usize| ObjectClass::simple(h, k);
    let v_below = |k: usize| {
        if h >= k {
            v(h - k)
        } else {
            ObjectClass::zero(h)
        }
    };
    let zero = ObjectClass::zero(h);
    let sum = |x: &ObjectClass, y: &ObjectClass| x + y;
    // expected (a, b, c) in homological degrees [0, 1]
    let expected: [[ObjectClass; 2]; 3] = match case {
        TriangleCase::GenericLow => [
            [v(d), zero.clone()],
            [sum(&v(d), &v(d + 2)), zero.clone()],
            [v(d + 2), zero.clone()],
        ],
        TriangleCase::LowEdge => [
            [v_below(3), zero.clone()],
            [v_below(3), zero.clone()],
            [zero.clone(), zero.clone()],
        ],
        TriangleCase::CrossingUp => [
            [v(h - 2), zero.clone()],
            [zero.clone(), zero.clone()],
            [zero.clone(), v(h - 2)],
        ],
        TriangleCase::FirstOdd => [
            [zero.clone(), zero.clone()],
            [zero.clone(), v_below(3)],
            [zero.clone(), v_below(3)],
        ],
        TriangleCase::GenericHigh => {
            let top = 2 * h - 2 - d;
            [
                [zero.clone(), v(top)],
                [zero.clone(), sum(&v(top), &v(top - 2))],
                [zero.clone(), v(top - 2)],
            ]
        }
        TriangleCase::HighEdge => [
            [zero.clone(), v(1)],
            [zero.clone(), v(1)],
            [zero.clone(), zero.clone()],
        ],
        TriangleCase::CrossingDown => [
            [zero.clone(), v(0)],
            [zero.clone(), zero.clone()],
            [v(0), zero.clone()],
        ],
        TriangleCase::FirstEven => [
            [zero.clone(), zero.clone()],
            [v(1), zero.clone()],
            [v(1), zero.clone()],
        ],
    };
    let got = [&t.a, &t.b, &t.c];
    for (name, (want, have)) in ["first", "middle", "third"]
        .iter()
        .zip(expected.iter().zip(got))
    {
        if want != have {
            return Err(format!(
                "{name} term: expected [{}, {}], got [{}, {}]",
                want[0], want[1], have[0], have[1]
            ));
        }
    }
    Ok(())
}

/// Multiplicity-level exactness of `A0 -> B0 -> C0 -> A1 -> B1 -> C1 -> A0`:
/// for each simple there must be image ranks `r1..r6` with every term equal
/// to the sum of its incoming and outgoing images.
pub fn hexagon_exact(t: &DegreeTerms) -> std::result::Result<(), String> {
    let labels = t.a[0].multiplicities().len();
    for s in 0..labels {
        let seq = [
            t.a[0].get(s),
            t.b[0].get(s),
            t.c[0].get(s),
            t.a[1].get(s),
            t.b[1].get(s),
            t.c[1].get(s),
        ];
        let feasible = (0..=seq[0]).any(|r1| {
            let mut r = r1;
            for &term in &seq[1..] {
                match term.checked_sub(r) {
                    Some(next) => r = next,
                    None => return false,
                }
            }
            r + r1 == seq[0]
        });
        if !feasible {
            return Err(format!("periodic sequence is not exact at V{s}"));
        }
    }
    Ok(())
}

/// `V^k_n (x) V^l_m -> V^{k+l}_{n+m}` on slots of `O_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SlotProduct {
    pub target: (usize, usize),
    pub nonzero: bool,
}

pub fn multiply_slots(h: usize, a: (usize, usize), b: (usize, usize)) -> Result<SlotProduct> {
    let o = build_oq(h)?;
    let m = 2 * h;
    let label = |(i, j): (usize, usize)| -> Result<usize> {
        if o.get(i, j).is_zero() {
            return Err(Error::ZeroSlot(i % 2, j % m));
        }
        Ok(if i % 2 == 0 { j % m } else { j % m - h })
    };
    let s = label(a)? + label(b)?;
    Ok(SlotProduct {
        target: ((a.0 + b.0) % 2, (a.1 + b.1) % m),
        nonzero: s + 2 <= h,
    })
}

/// Rows of the worked display: `O_q`, `O_q(1) (x) V_1` (symbolic), `O_q(2)`, `O_q[1]`.
pub fn triangle_table(h: usize) -> Result<Vec<[[String; 2]; 4]>> {
    let o = build_oq(h)?;
    let columns = [o.clone(), o.twist(1), o.twist(2), o.shift()];
    let name = |c: &ObjectClass| {
        if c.is_zero() {
            "0".to_string()
        } else if c.get(0) == 1 && c.total() == 1 {
            "1".to_string()
        } else {
            c.to_string()
        }
    };
    let mut rows = Vec::with_capacity(2 * h);
    for k in 0..2 * h {
        let row = std::array::from_fn(|col| {
            std::array::from_fn(|i| {
                let c = columns[col].get(i, k);
                if col == 1 && !c.is_zero() {
                    format!("{} (x) V1", name(c))
                } else {
                    name(c)
                }
            })
        });
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_h5() {
        let o = build_oq(5).unwrap();
        for k in 0..=3 {
            assert_eq!(o.get(0, k), &ObjectClass::simple(5, k));
        }
        for k in 5..=8 {
            assert_eq!(o.get(1, k), &ObjectClass::simple(5, 8 - k));
        }
        assert_eq!(o.components().len(), 8);
        assert_eq!(o, build_oq_compositional(5).unwrap());
    }

    #[test]
    fn closed_form_h2() {
        let o = build_oq(2).unwrap();
        let keys: Vec<_> = o.components().into_keys().collect();
        assert_eq!(keys, ["0,0", "1,2"]);
    }

    #[test]
    fn twist_periodicity() {
        let o = build_oq(7).unwrap();
        assert_eq!(o.twist(0), o);
        assert_eq!(o.twist(14), o);
        assert_eq!(o.twist(3).twist(5), o.twist(8));
        assert_eq!(o.shift().shift(), o);
    }

    #[test]
    fn triangle_h5_all_degrees() {
        let report = verify_triangle(5, 0).unwrap();
        assert_eq!(report.degrees.len(), 10);
        assert!(report.passed(), "{report:?}");
        let cases: Vec<_> = report.degrees.iter().map(|d| d.case).collect();
        assert_eq!(cases[3], TriangleCase::CrossingUp);
        let d3 = &report.degrees[3].terms;
        assert!(d3.b[0].is_zero() && d3.b[1].is_zero());
    }

    #[test]
    fn case_table_h2_overlap() {
        assert_eq!(TriangleCase::classify(2, 0), TriangleCase::CrossingUp);
        assert_eq!(TriangleCase::classify(2, 1), TriangleCase::FirstOdd);
        assert_eq!(TriangleCase::classify(2, 2), TriangleCase::CrossingDown);
        assert_eq!(TriangleCase::classify(2, 3), TriangleCase::FirstEven);
        assert!(verify_triangle(2, 1).unwrap().passed());
    }

    #[test]
    fn broken_terms_are_reported() {
        let h = 5;
        let mut terms = verify_triangle(h, 0).unwrap().degrees[0].terms.clone();
        terms.b[0] = ObjectClass::simple(h, 1);
        assert!(hexagon_exact(&terms).is_err());
        assert!(check_case(h, 0, TriangleCase::GenericLow, &terms).is_err());
    }

    #[test]
    fn slot_products() {
        let p = multiply_slots(5, (0, 1), (0, 2)).unwrap();
        assert_eq!(
            p,
            SlotProduct {
                target: (0, 3),
                nonzero: true
            }
        );
        assert!(!multiply_slots(5, (0, 2), (0, 2)).unwrap().nonzero);
        assert_eq!(multiply_slots(5, (0, 0), (1, 6)).unwrap().target, (1, 6));
        let odd = multiply_slots(5, (1, 5), (1, 6)).unwrap();
        assert_eq!(
            odd,
            SlotProduct {
                target: (0, 1),
                nonzero: true
            }
        );
        assert!(matches!(
            multiply_slots(5, (0, 4), (0, 0)),
            Err(Error::ZeroSlot(0, 4))
        ));
    }

    #[test]
    fn display_rows_h5() {
        let rows = triangle_table(5).unwrap();
        assert_eq!(rows[0][0], ["1".to_string(), "0".to_string()]);
        assert_eq!(rows[0][1][0], "V1 (x) V1");
        assert_eq!(rows[9][1][0], "1 (x) V1");
        assert_eq!(rows[5][3][0], "V3");
        assert_eq!(rows[8][2][0], "1");
    }
}
