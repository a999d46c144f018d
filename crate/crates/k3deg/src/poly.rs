//! Homogeneous degree-4 polynomials in four variables over the rationals,
//! with exact evaluation, gradients, and Hessians, plus projective points
//! in a normalized chart.

use crate::linalg::QMat;
use crate::rat::{parse_rat, Rat};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

/// Exponent tuple `(d0, d1, d2, d3)` with `d0+d1+d2+d3 = 4`.
pub type Exp4 = [u8; 4];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("exponent tuple {0:?} does not have total degree 4")]
    BadExponent(Exp4),
    #[error("invalid exponent key {0:?}: expected \"d0 d1 d2 d3\"")]
    BadExponentKey(String),
    #[error("invalid coefficient {0:?}")]
    BadCoefficient(String),
    #[error("projective point must have a nonzero coordinate")]
    ZeroPoint,
}

/// All 35 degree-4 exponent tuples in ascending lexicographic order.
pub fn monomials_deg4() -> Vec<Exp4> {
    let mut out = Vec::with_capacity(35);
    for d0 in 0..=4u8 {
        for d1 in 0..=4 - d0 {
            for d2 in 0..=4 - d0 - d1 {
                out.push([d0, d1, d2, 4 - d0 - d1 - d2]);
            }
        }
    }
    out
}

/// A homogeneous quartic: sparse map from exponent tuples to nonzero
/// rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HomPoly4 {
    coeffs: BTreeMap<Exp4, Rat>,
}

impl HomPoly4 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_coeffs(entries: impl IntoIterator<Item = (Exp4, Rat)>) -> Result<Self, PolyError> {
        let mut coeffs = BTreeMap::new();
        for (e, c) in entries {
            if e.iter().map(|&d| d as u32).sum::<u32>() != 4 {
                return Err(PolyError::BadExponent(e));
            }
            if c.is_zero() {
                continue;
            }
            let slot = coeffs.entry(e).or_insert_with(Rat::zero);
            *slot += c;
            if slot.is_zero() {
                coeffs.remove(&e);
            }
        }
        Ok(HomPoly4 { coeffs })
    }

    /// Single monomial `c * x^e`.
    pub fn monomial(e: Exp4, c: Rat) -> Result<Self, PolyError> {
        Self::from_coeffs([(e, c)])
    }

    pub fn coeffs(&self) -> &BTreeMap<Exp4, Rat> {
        &self.coeffs
    }

    pub fn coeff(&self, e: &Exp4) -> Rat {
        self.coeffs.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &HomPoly4) -> HomPoly4 {
        let mut coeffs = self.coeffs.clone();
        for (e, c) in &other.coeffs {
            let slot = coeffs.entry(*e).or_insert_with(Rat::zero);
            *slot += c;
            if slot.is_zero() {
                coeffs.remove(e);
            }
        }
        HomPoly4 { coeffs }
    }

    pub fn scale(&self, s: &Rat) -> HomPoly4 {
        if s.is_zero() {
            return HomPoly4::zero();
        }
        HomPoly4 {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c * s)).collect(),
        }
    }

    /// Exact evaluation at a coordinate 4-tuple.
    pub fn eval(&self, x: &[Rat; 4]) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in &self.coeffs {
            acc += c * &monomial_value(e, x);
        }
        acc
    }

    /// Exact value and gradient in one call. Satisfies the Euler identity
    /// `sum_j x_j grad_j = 4 * value`.
    pub fn eval_and_gradient(&self, x: &[Rat; 4]) -> (Rat, [Rat; 4]) {
        (self.eval(x), self.gradient(x))
    }

    /// Exact gradient `(d/dx_j p)(x)` for `j = 0..4`.
    pub fn gradient(&self, x: &[Rat; 4]) -> [Rat; 4] {
        let mut out = [Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()];
        for (e, c) in &self.coeffs {
            for j in 0..4 {
                if e[j] == 0 {
                    continue;
                }
                let mut de = *e;
                de[j] -= 1;
                out[j] += c * Rat::from_integer(e[j].into()) * monomial_value(&de, x);
            }
        }
        out
    }

    /// Exact 4x4 Hessian of second partials at `x`.
    pub fn hessian(&self, x: &[Rat; 4]) -> QMat {
        let mut h = QMat::zeros(4, 4);
        for (e, c) in &self.coeffs {
            for j in 0..4 {
                if e[j] == 0 {
                    continue;
                }
                for l in 0..4 {
                    let factor_l = if l == j { e[j] - 1 } else { e[l] };
                    if factor_l == 0 {
                        continue;
                    }
                    let mut de = *e;
                    de[j] -= 1;
                    de[l] -= 1;
                    let v = h.get(j, l).clone()
                        + c * Rat::from_integer(e[j].into())
                            * Rat::from_integer(factor_l.into())
                            * monomial_value(&de, x);
                    h.set(j, l, v);
                }
            }
        }
        h
    }

    /// The 3x3 Hessian minor obtained by deleting the chart row and column.
    /// The projective Hessian always degenerates along the Euler direction,
    /// so nodes are detected on the affine chart.
    pub fn affine_hessian_minor(&self, p: &ProjPoint) -> QMat {
        let h = self.hessian(p.coords());
        let skip = p.chart();
        let idx: Vec<usize> = (0..4).filter(|&i| i != skip).collect();
        QMat::from_fn(3, 3, |r, c| h.get(idx[r], idx[c]).clone())
    }

    /// Rank of the affine Hessian minor; 3 exactly at an A1 node.
    pub fn affine_hessian_rank(&self, p: &ProjPoint) -> usize {
        self.affine_hessian_minor(p).rank()
    }

    /// Serializes to the on-disk map `{"d0 d1 d2 d3": "p/q", ...}`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (e, c) in &self.coeffs {
            map.insert(
                format!("{} {} {} {}", e[0], e[1], e[2], e[3]),
                serde_json::Value::String(c.to_string()),
            );
        }
        serde_json::Value::Object(map)
    }

    /// Parses the on-disk map format.
    pub fn from_json(v: &serde_json::Value) -> Result<Self, PolyError> {
        let obj = v
            .as_object()
            .ok_or_else(|| PolyError::BadExponentKey(v.to_string()))?;
        let mut entries = Vec::with_capacity(obj.len());
        for (k, val) in obj {
            let parts: Vec<&str> = k.split_whitespace().collect();
            if parts.len() != 4 {
                return Err(PolyError::BadExponentKey(k.clone()));
            }
            let mut e = [0u8; 4];
            for (i, p) in parts.iter().enumerate() {
                e[i] = p
                    .parse::<u8>()
                    .map_err(|_| PolyError::BadExponentKey(k.clone()))?;
            }
            let cs = val
                .as_str()
                .ok_or_else(|| PolyError::BadCoefficient(val.to_string()))?;
            let c = parse_rat(cs).map_err(|_| PolyError::BadCoefficient(cs.to_string()))?;
            entries.push((e, c));
        }
        Self::from_coeffs(entries)
    }
}

fn monomial_value(e: &Exp4, x: &[Rat; 4]) -> Rat {
    let mut acc = Rat::one();
    for (xi, &d) in x.iter().zip(e) {
        for _ in 0..d {
            acc *= xi;
        }
    }
    acc
}

/// Euler identity check: `sum_j x_j (d/dx_j p)(x) = 4 p(x)` for every
/// homogeneous quartic. Used as a self-test of the evaluation code.
pub fn euler_identity_holds(p: &HomPoly4, x: &[Rat; 4]) -> bool {
    let grad = p.gradient(x);
    let lhs: Rat = x
        .iter()
        .zip(grad.iter())
        .fold(Rat::zero(), |acc, (xi, gi)| acc + xi * gi);
    lhs == Rat::from_integer(4.into()) * p.eval(x)
}

/// A point of projective 3-space stored in the normalized chart: the last
/// nonzero coordinate is scaled to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjPoint {
    coords: [Rat; 4],
    chart: usize,
}

impl ProjPoint {
    pub fn new(raw: [Rat; 4]) -> Result<Self, PolyError> {
        let chart = raw
            .iter()
            .rposition(|c| !c.is_zero())
            .ok_or(PolyError::ZeroPoint)?;
        let scale = raw[chart].clone();
        let mut coords = raw;
        for c in coords.iter_mut() {
            *c /= &scale;
        }
        Ok(ProjPoint { coords, chart })
    }

    pub fn from_ints(raw: [i64; 4]) -> Result<Self, PolyError> {
        Self::new(raw.map(|v| Rat::from_integer(v.into())))
    }

    pub fn coords(&self) -> &[Rat; 4] {
        &self.coords
    }

    /// Index of the coordinate normalized to one.
    pub fn chart(&self) -> usize {
        self.chart
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coords
                .iter()
                .map(|c| serde_json::Value::String(c.to_string()))
                .collect(),
        )
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, PolyError> {
        let arr = v
            .as_array()
            .filter(|a| a.len() == 4)
            .ok_or(PolyError::ZeroPoint)?;
        let mut coords = [Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero()];
        for (i, x) in arr.iter().enumerate() {
            let s = x
                .as_str()
                .ok_or_else(|| PolyError::BadCoefficient(x.to_string()))?;
            coords[i] = parse_rat(s).map_err(|_| PolyError::BadCoefficient(s.to_string()))?;
        }
        Self::new(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_i;

    fn rv(v: i64) -> Rat {
        rat_i(v)
    }

    #[test]
    fn thirty_five_monomials() {
        let m = monomials_deg4();
        assert_eq!(m.len(), 35);
        assert!(m.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn pure_power_eval_and_gradient() {
        let p = HomPoly4::monomial([4, 0, 0, 0], rv(1)).unwrap();
        let x = [rv(1), rv(0), rv(0), rv(1)];
        let (value, grad) = p.eval_and_gradient(&x);
        assert_eq!(value, rv(1));
        assert_eq!(grad, [rv(4), rv(0), rv(0), rv(0)]);
    }

    #[test]
    fn mixed_square_eval_and_gradient() {
        let p = HomPoly4::monomial([2, 2, 0, 0], rv(1)).unwrap();
        let x = [rv(1), rv(1), rv(0), rv(1)];
        let (value, grad) = p.eval_and_gradient(&x);
        assert_eq!(value, rv(1));
        assert_eq!(grad, [rv(2), rv(2), rv(0), rv(0)]);
    }

    #[test]
    fn rejects_wrong_degree() {
        assert_eq!(
            HomPoly4::monomial([3, 0, 0, 0], rv(1)),
            Err(PolyError::BadExponent([3, 0, 0, 0]))
        );
    }

    #[test]
    fn hessian_is_symmetric() {
        let p = HomPoly4::from_coeffs([
            ([2, 1, 1, 0], rv(3)),
            ([1, 1, 1, 1], rv(-2)),
            ([0, 0, 2, 2], rv(5)),
        ])
        .unwrap();
        let x = [rv(1), rv(2), rv(-1), rv(3)];
        let h = p.hessian(&x);
        assert!(h.is_symmetric());
    }

    #[test]
    fn fermat_quartic_affine_hessian_rank() {
        // x0^4 + x1^4 + x2^4 + x3^4 at (1,1,1,1): affine Hessian diag(12,12,12).
        let f = HomPoly4::from_coeffs([
            ([4, 0, 0, 0], rv(1)),
            ([0, 4, 0, 0], rv(1)),
            ([0, 0, 4, 0], rv(1)),
            ([0, 0, 0, 4], rv(1)),
        ])
        .unwrap();
        let p = ProjPoint::from_ints([1, 1, 1, 1]).unwrap();
        assert_eq!(f.affine_hessian_rank(&p), 3);
    }

    #[test]
    fn point_normalization_uses_last_nonzero() {
        let p = ProjPoint::from_ints([2, 4, 6, 0]).unwrap();
        assert_eq!(p.chart(), 2);
        assert_eq!(p.coords()[2], rv(1));
        assert_eq!(p.coords()[0], crate::rat::rat(1, 3));
        assert!(ProjPoint::from_ints([0, 0, 0, 0]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = HomPoly4::from_coeffs([
            ([2, 1, 1, 0], crate::rat::rat(-7, 3)),
            ([0, 0, 0, 4], rv(2)),
        ])
        .unwrap();
        let j = p.to_json();
        assert_eq!(HomPoly4::from_json(&j).unwrap(), p);
    }

    #[test]
    fn euler_identity_spot_checks() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let monos = monomials_deg4();
        for _ in 0..100 {
            let entries: Vec<(Exp4, Rat)> = (0..6)
                .map(|_| {
                    let e = monos[rng.gen_range(0..monos.len())];
                    (e, rv(rng.gen_range(-9..=9)))
                })
                .collect();
            let p = HomPoly4::from_coeffs(entries).unwrap();
            let x = [
                rv(rng.gen_range(-5..=5)),
                rv(rng.gen_range(-5..=5)),
                rv(rng.gen_range(-5..=5)),
                rv(rng.gen_range(-5..=5)),
            ];
            assert!(euler_identity_holds(&p, &x));
        }
    }
}
