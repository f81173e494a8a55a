//! Recovering the cycle length `h` of a cusp from the similarity class of its
//! flat section `X = R³/Γ`.
//!
//! Pick `v₁, v₂` in the translation lattice, orthogonal and of equal length
//! `l`, such that `h = 2·Vol(X)/l³` is an integer, and shortest with these
//! properties. Since `h ≥ 1` forces `l³ ≤ 2·Vol(X)`, only lattice vectors in
//! the ball of radius `(2·Vol(X))^{1/3}` matter, and there are finitely many.
//! All arithmetic is exact; the coefficient box covering the ball is found
//! with floats and a safety margin, then every candidate is checked exactly.

use std::collections::BTreeMap;

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Q = Ratio<i64>;
pub type Vec3 = [Q; 3];

/// Generators of a rank-3 lattice `𝒯 ⊂ R³`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    pub vectors: [Vec3; 3],
    /// `[Γ : 𝒯]`; 1 when the section is a 3-torus.
    pub index: u32,
}

fn q(x: i64) -> Q {
    Q::from_integer(x)
}

pub fn dot(a: &Vec3, b: &Vec3) -> Q {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn det3(m: &[Vec3; 3]) -> Q {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

impl LatticeBasis {
    pub fn new(vectors: [Vec3; 3]) -> Result<LatticeBasis> {
        let basis = LatticeBasis { vectors, index: 1 };
        if det3(&basis.vectors) == q(0) {
            return Err(Error::Invalid("lattice generators are linearly dependent".into()));
        }
        Ok(basis)
    }

    pub fn from_integers(vectors: [[i64; 3]; 3]) -> Result<LatticeBasis> {
        LatticeBasis::new(vectors.map(|v| v.map(q)))
    }

    pub fn with_index(mut self, index: u32) -> LatticeBasis {
        self.index = index.max(1);
        self
    }

    /// Volume of `R³/𝒯`.
    pub fn covolume(&self) -> Q {
        let d = det3(&self.vectors);
        if d < q(0) {
            -d
        } else {
            d
        }
    }

    /// Volume of `R³/Γ`.
    pub fn section_volume(&self) -> Q {
        self.covolume() / q(i64::from(self.index))
    }

    pub fn scaled(&self, factor: Q) -> LatticeBasis {
        LatticeBasis { vectors: self.vectors.map(|v| v.map(|x| x * factor)), index: self.index }
    }

    pub fn combine(&self, c: [i64; 3]) -> Vec3 {
        std::array::from_fn(|k| (0..3).map(|i| q(c[i]) * self.vectors[i][k]).sum())
    }

    /// Per-coefficient bounds on `c` with `|Σ cᵢ bᵢ|² ≤ radius_sq`.
    pub fn coefficient_bounds(&self, radius_sq: Q) -> [i64; 3] {
        let m = self.vectors.map(|v| v.map(to_f64));
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        // cᵢ = ⟨v, dᵢ⟩ with dᵢ the dual basis, so |cᵢ| ≤ |v|·|dᵢ|
        let cross = |a: [f64; 3], b: [f64; 3]| [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
        let duals = [cross(m[1], m[2]), cross(m[2], m[0]), cross(m[0], m[1])];
        let r = to_f64(radius_sq).sqrt();
        duals.map(|d| {
            let norm = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt() / det.abs();
            (r * norm * (1.0 + 1e-9)).floor() as i64 + 1
        })
    }
}

fn to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Integer square root of a rational that is a perfect integer square.
fn exact_integer_sqrt(x: Q) -> Option<u64> {
    if !x.is_integer() || x < q(0) {
        return None;
    }
    let n = x.to_integer() as u64;
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

/// The recovered integer with the witnessing pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recovery {
    pub h: u64,
    /// `l²`.
    pub length_sq: Q,
    pub v1: Vec3,
    pub v2: Vec3,
}

/// `h` with `h² = 4·vol²/l⁶` an integer square, if it is one.
pub fn h_for_length_sq(vol: Q, length_sq: Q) -> Option<u64> {
    exact_integer_sqrt(q(4) * vol * vol / (length_sq * length_sq * length_sq)).filter(|&h| h > 0)
}

pub fn recover_h(basis: &LatticeBasis, vol: Q) -> Result<u64> {
    recover(basis, vol).map(|r| r.h)
}

pub fn recover(basis: &LatticeBasis, vol: Q) -> Result<Recovery> {
    if vol <= q(0) {
        return Err(Error::Invalid("volume must be positive".into()));
    }
    // l³ ≤ 2·vol  ⇔  (l²)³ ≤ 4·vol²
    let cap = q(4) * vol * vol;
    let radius_sq = q(to_f64(cap).cbrt().ceil() as i64 + 1);
    let bounds = basis.coefficient_bounds(radius_sq);

    let mut shells: BTreeMap<Q, Vec<Vec3>> = BTreeMap::new();
    for a in -bounds[0]..=bounds[0] {
        for b in -bounds[1]..=bounds[1] {
            for c in -bounds[2]..=bounds[2] {
                if (a, b, c) == (0, 0, 0) {
                    continue;
                }
                let v = basis.combine([a, b, c]);
                let len = dot(&v, &v);
                if len * len * len <= cap {
                    shells.entry(len).or_default().push(v);
                }
            }
        }
    }
    for (length_sq, vectors) in shells {
        let Some(h) = h_for_length_sq(vol, length_sq) else {
            continue;
        };
        for (i, v1) in vectors.iter().enumerate() {
            if let Some(v2) = vectors[i + 1..].iter().find(|v2| dot(v1, v2) == q(0)) {
                return Ok(Recovery { h, length_sq, v1: *v1, v2: *v2 });
            }
        }
    }
    Err(Error::NotFound("no orthogonal equal-length pair gives an integer h".into()))
}
