//! Exact combinatorics of the hypercube `H = [-1,1]^4`.
//!
//! A facet is the cube `x_a = s`, a square 2-face is `x_a = s_a, x_b = s_b`.
//! Gluing isometries between facets are signed permutations of the three
//! *intrinsic* coordinates of a facet: the ambient axes other than the normal
//! axis, listed in increasing order.
//!
//! Composition convention: `p.then(&q)` (and [`compose`]) applies `p` first.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::error::Error;

/// `+1` or `-1`.
pub type Sign = i8;

/// An ambient coordinate direction of `R^4`, `1..=4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Axis(u8);

impl Axis {
    pub const ALL: [Axis; 4] = [Axis(1), Axis(2), Axis(3), Axis(4)];

    pub fn new(index: u8) -> Result<Self, Error> {
        if (1..=4).contains(&index) {
            Ok(Axis(index))
        } else {
            Err(Error::Invalid(format!("axis {index} is not in 1..=4")))
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    fn zero_based(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn check_sign(sign: Sign) -> Result<Sign, Error> {
    match sign {
        1 | -1 => Ok(sign),
        _ => Err(Error::Invalid(format!("sign {sign} is not ±1"))),
    }
}

/// A cubic facet `x_axis = sign` of hypercube `cube`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet {
    pub cube: usize,
    pub axis: Axis,
    pub sign: Sign,
}

impl Facet {
    pub fn new(cube: usize, axis: u8, sign: Sign) -> Result<Self, Error> {
        Ok(Facet { cube, axis: Axis::new(axis)?, sign: check_sign(sign)? })
    }

    /// All eight facets of one hypercube, in local-index order.
    pub fn all_of(cube: usize) -> impl Iterator<Item = Facet> {
        (0..8).map(move |i| Facet::from_local(cube, i))
    }

    /// Index `0..8` inside its hypercube: `2*(axis-1) + (sign > 0)`.
    pub fn local(self) -> usize {
        2 * self.axis.zero_based() + usize::from(self.sign > 0)
    }

    pub fn from_local(cube: usize, local: usize) -> Facet {
        debug_assert!(local < 8);
        Facet { cube, axis: Axis(local as u8 / 2 + 1), sign: if local % 2 == 1 { 1 } else { -1 } }
    }

    pub fn opposite(self) -> Facet {
        Facet { sign: -self.sign, ..self }
    }

    /// Ambient axes spanning the facet, increasing. Position `k` is intrinsic axis `k+1`.
    pub fn intrinsic_axes(self) -> [Axis; 3] {
        intrinsic_axes(self.axis)
    }

    /// `ε(a, s) = s·(-1)^a`.
    pub fn orientation_sign(self) -> Sign {
        facet_orientation_sign(self)
    }

    pub fn squares(self) -> [SquareFace; 6] {
        squares_of_facet(self)
    }
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign > 0 { '+' } else { '-' };
        write!(f, "{}.{}{}", self.cube, s, self.axis)
    }
}

impl FromStr for Facet {
    type Err = Error;

    /// Parses `<cube>.<±axis>`, e.g. `0.+1`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Invalid(format!("malformed facet `{s}` (expected <cube>.<±axis>)"));
        let (cube, rest) = s.split_once('.').ok_or_else(bad)?;
        let cube: usize = cube.parse().map_err(|_| bad())?;
        let mut chars = rest.chars();
        let sign = match chars.next() {
            Some('+') => 1,
            Some('-') => -1,
            _ => return Err(bad()),
        };
        let axis: u8 = chars.as_str().parse().map_err(|_| bad())?;
        Facet::new(cube, axis, sign)
    }
}

fn intrinsic_axes(normal: Axis) -> [Axis; 3] {
    let mut out = [Axis(0); 3];
    let mut k = 0;
    for a in Axis::ALL {
        if a != normal {
            out[k] = a;
            k += 1;
        }
    }
    out
}

pub fn facet_orientation_sign(f: Facet) -> Sign {
    if f.axis.index().is_multiple_of(2) {
        f.sign
    } else {
        -f.sign
    }
}

/// The square 2-face `x_a = s_a, x_b = s_b` with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareFace {
    pub cube: usize,
    pub axes: (Axis, Axis),
    pub signs: (Sign, Sign),
}

const AXIS_PAIRS: [(u8, u8); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

impl SquareFace {
    /// Builds a square from an unordered axis pair; the pair is sorted.
    pub fn new(cube: usize, a: (u8, Sign), b: (u8, Sign)) -> Result<Self, Error> {
        let (a, b) = if a.0 < b.0 { (a, b) } else { (b, a) };
        if a.0 == b.0 {
            return Err(Error::Invalid(format!("square needs two distinct axes, got {} twice", a.0)));
        }
        Ok(SquareFace {
            cube,
            axes: (Axis::new(a.0)?, Axis::new(b.0)?),
            signs: (check_sign(a.1)?, check_sign(b.1)?),
        })
    }

    pub fn all_of(cube: usize) -> impl Iterator<Item = SquareFace> {
        (0..24).map(move |i| SquareFace::from_local(cube, i))
    }

    /// Index `0..24` inside its hypercube: `4*pair + 2*(s_a > 0) + (s_b > 0)`.
    pub fn local(self) -> usize {
        let pair = AXIS_PAIRS
            .iter()
            .position(|&(a, b)| a == self.axes.0.index() && b == self.axes.1.index())
            .expect("axes are sorted and distinct");
        4 * pair + 2 * usize::from(self.signs.0 > 0) + usize::from(self.signs.1 > 0)
    }

    pub fn from_local(cube: usize, local: usize) -> SquareFace {
        let (a, b) = AXIS_PAIRS[local / 4];
        let sa = if local & 2 != 0 { 1 } else { -1 };
        let sb = if local & 1 != 0 { 1 } else { -1 };
        SquareFace { cube, axes: (Axis(a), Axis(b)), signs: (sa, sb) }
    }

    /// The two facets containing the square, smaller first.
    pub fn facets(self) -> [Facet; 2] {
        [
            Facet { cube: self.cube, axis: self.axes.0, sign: self.signs.0 },
            Facet { cube: self.cube, axis: self.axes.1, sign: self.signs.1 },
        ]
    }

    pub fn contains_in(self, f: Facet) -> bool {
        self.facets().contains(&f)
    }

    /// The two ambient axes spanning the square (complement of the fixed pair), increasing.
    pub fn tangent_axes(self) -> (Axis, Axis) {
        let mut it = Axis::ALL.into_iter().filter(|&a| a != self.axes.0 && a != self.axes.1);
        (it.next().unwrap(), it.next().unwrap())
    }

    /// Opposite square within facet `f` (the other fixed coordinate negated).
    pub fn opposite_in(self, f: Facet) -> Result<SquareFace, Error> {
        let other = other_facet(self, f)?;
        Ok(self.with_sign(other.axis, -other.sign))
    }

    fn with_sign(mut self, axis: Axis, sign: Sign) -> SquareFace {
        if self.axes.0 == axis {
            self.signs.0 = sign;
        } else {
            debug_assert_eq!(self.axes.1, axis);
            self.signs.1 = sign;
        }
        self
    }
}

impl fmt::Display for SquareFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |s: Sign| if s > 0 { '+' } else { '-' };
        write!(
            f,
            "{}.{{{},{}}}({},{})",
            self.cube,
            self.axes.0,
            self.axes.1,
            c(self.signs.0),
            c(self.signs.1)
        )
    }
}

pub fn squares_of_facet(f: Facet) -> [SquareFace; 6] {
    let mut out = [SquareFace::from_local(f.cube, 0); 6];
    let mut k = 0;
    for b in f.intrinsic_axes() {
        for s in [-1, 1] {
            out[k] = SquareFace::new(f.cube, (f.axis.index(), f.sign), (b.index(), s)).unwrap();
            k += 1;
        }
    }
    out
}

pub fn other_facet(q: SquareFace, f: Facet) -> Result<Facet, Error> {
    let [f1, f2] = q.facets();
    if f == f1 {
        Ok(f2)
    } else if f == f2 {
        Ok(f1)
    } else {
        Err(Error::Invalid(format!("facet {f} does not contain square {q}")))
    }
}

/// An element of the hyperoctahedral group `B_N`: intrinsic axis `k` is sent
/// to `sign(image[k]) · e_{|image[k]|}`. Indices are 1-based, as in the text form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPerm<const N: usize> {
    image: [i8; N],
}

/// Isometry of the 3-cube (order 48).
pub type SignedPerm3 = SignedPerm<3>;
/// Isometry of the 4-cube (order 384).
pub type SignedPerm4 = SignedPerm<4>;
/// Isometry of the square (order 8); monodromies live here.
pub type SignedPerm2 = SignedPerm<2>;

impl<const N: usize> SignedPerm<N> {
    pub fn new(image: [i8; N]) -> Result<Self, Error> {
        let mut seen = [false; N];
        for &m in &image {
            let a = m.unsigned_abs() as usize;
            if a == 0 || a > N || seen[a - 1] {
                return Err(Error::Invalid(format!(
                    "{image:?} is not a signed permutation of 1..={N}"
                )));
            }
            seen[a - 1] = true;
        }
        Ok(SignedPerm { image })
    }

    pub fn identity() -> Self {
        let mut image = [0i8; N];
        for (k, m) in image.iter_mut().enumerate() {
            *m = k as i8 + 1;
        }
        SignedPerm { image }
    }

    pub fn image(&self) -> [i8; N] {
        self.image
    }

    /// Target of axis `k` (1-based) as `(axis, sign)`.
    pub fn apply_axis(&self, k: usize) -> (usize, Sign) {
        let m = self.image[k - 1];
        (m.unsigned_abs() as usize, m.signum())
    }

    /// `self` first, then `next`.
    pub fn then(&self, next: &Self) -> Self {
        let mut image = [0i8; N];
        for (k, r) in image.iter_mut().enumerate() {
            let m = self.image[k];
            *r = m.signum() * next.image[m.unsigned_abs() as usize - 1];
        }
        SignedPerm { image }
    }

    pub fn inverse(&self) -> Self {
        let mut image = [0i8; N];
        for (k, &m) in self.image.iter().enumerate() {
            image[m.unsigned_abs() as usize - 1] = m.signum() * (k as i8 + 1);
        }
        SignedPerm { image }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Determinant of the associated signed permutation matrix.
    pub fn det(&self) -> Sign {
        let mut sign: Sign = 1;
        let mut perm = [0usize; N];
        for (k, &m) in self.image.iter().enumerate() {
            sign *= m.signum();
            perm[k] = m.unsigned_abs() as usize - 1;
        }
        // parity from cycle decomposition
        let mut seen = [false; N];
        for start in 0..N {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    /// Applies the linear map to a vector of signed unit axes or coordinates.
    pub fn apply_vector(&self, v: [i64; N]) -> [i64; N] {
        let mut out = [0i64; N];
        for k in 0..N {
            let (t, s) = self.apply_axis(k + 1);
            out[t - 1] = i64::from(s) * v[k];
        }
        out
    }

    /// The whole group, permutations in lexicographic order, each followed
    /// by its `2^N` sign patterns.
    pub fn all() -> Vec<Self> {
        let mut out = Vec::with_capacity((1..=N).product::<usize>() << N);
        for perm in (1..=N as i8).permutations(N) {
            for mask in 0..(1u32 << N) {
                let mut image = [0i8; N];
                for k in 0..N {
                    image[k] = if mask & (1 << k) != 0 { -perm[k] } else { perm[k] };
                }
                out.push(SignedPerm { image });
            }
        }
        out
    }
}

impl<const N: usize> fmt::Display for SignedPerm<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, m) in self.image.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl<const N: usize> FromStr for SignedPerm<N> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != N {
            return Err(Error::Invalid(format!("expected {N} signed integers, got `{s}`")));
        }
        let mut image = [0i8; N];
        for (m, p) in image.iter_mut().zip(parts) {
            *m = p
                .parse()
                .map_err(|_| Error::Invalid(format!("`{p}` is not a signed integer")))?;
        }
        SignedPerm::new(image)
    }
}

pub fn compose<const N: usize>(p: &SignedPerm<N>, q: &SignedPerm<N>) -> SignedPerm<N> {
    p.then(q)
}

pub fn invert<const N: usize>(p: &SignedPerm<N>) -> SignedPerm<N> {
    p.inverse()
}

/// The ambient 4-cube isometry realizing the gluing of `source` onto `target`
/// by the intrinsic map `map`.
///
/// Its linear part sends the outward normal of `source` to the inward normal
/// of `target`; the affine gluing is `x ↦ Φx + 2·n_target`.
pub fn gluing_map(source: Facet, target: Facet, map: &SignedPerm3) -> SignedPerm4 {
    let mut image = [0i8; 4];
    let normal = -source.sign * target.sign;
    image[source.axis.zero_based()] = normal * target.axis.index() as i8;
    let from = source.intrinsic_axes();
    let to = target.intrinsic_axes();
    for k in 0..3 {
        let (t, s) = map.apply_axis(k + 1);
        image[from[k].zero_based()] = s * to[t - 1].index() as i8;
    }
    SignedPerm { image }
}

/// The facet that the ambient gluing map `phi` glues `source` onto.
pub fn gluing_target(source: Facet, phi: &SignedPerm4, cube: usize) -> Facet {
    let (t, s) = phi.apply_axis(source.axis.index() as usize);
    Facet { cube, axis: Axis(t as u8), sign: -(s * source.sign) }
}

/// Inverse of [`gluing_map`]: the intrinsic map read off an ambient gluing.
pub fn intrinsic_map(source: Facet, target: Facet, phi: &SignedPerm4) -> SignedPerm3 {
    let from = source.intrinsic_axes();
    let to = target.intrinsic_axes();
    let mut image = [0i8; 3];
    for k in 0..3 {
        let (t, s) = phi.apply_axis(from[k].index() as usize);
        let pos = to.iter().position(|a| a.index() as usize == t).expect("phi maps facet onto target");
        image[k] = s * (pos as i8 + 1);
    }
    SignedPerm { image }
}

/// Image of a facet (as a half-space direction) under a linear isometry.
pub fn act_on_facet(g: &SignedPerm4, f: Facet, cube: usize) -> Facet {
    let (t, s) = g.apply_axis(f.axis.index() as usize);
    Facet { cube, axis: Axis(t as u8), sign: s * f.sign }
}

/// Image of a square under a linear isometry.
pub fn act_on_square(g: &SignedPerm4, q: SquareFace, cube: usize) -> SquareFace {
    let (a, sa) = g.apply_axis(q.axes.0.index() as usize);
    let (b, sb) = g.apply_axis(q.axes.1.index() as usize);
    SquareFace::new(cube, (a as u8, sa * q.signs.0), (b as u8, sb * q.signs.1)).unwrap()
}

/// A signed ambient axis `±1..=±4`.
pub type SignedAxis = i8;

/// An ordered pair of signed ambient axes spanning a square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SquareFrame {
    pub square: SquareFace,
    pub tangent1: SignedAxis,
    pub tangent2: SignedAxis,
}

impl SquareFrame {
    pub fn new(square: SquareFace, tangent1: SignedAxis, tangent2: SignedAxis) -> Result<Self, Error> {
        let (c, d) = square.tangent_axes();
        let (u, v) = (tangent1.unsigned_abs(), tangent2.unsigned_abs());
        let ok = (u == c.index() && v == d.index()) || (u == d.index() && v == c.index());
        if !ok {
            return Err(Error::Invalid(format!(
                "frame ({tangent1},{tangent2}) does not span square {square}"
            )));
        }
        Ok(SquareFrame { square, tangent1, tangent2 })
    }

    /// The positively ordered frame `(+e_c, +e_d)`, `c < d` the spanning axes.
    pub fn standard(square: SquareFace) -> Self {
        let (c, d) = square.tangent_axes();
        SquareFrame { square, tangent1: c.index() as i8, tangent2: d.index() as i8 }
    }
}

fn map_signed_axis(g: &SignedPerm4, t: SignedAxis) -> SignedAxis {
    let (a, s) = g.apply_axis(t.unsigned_abs() as usize);
    t.signum() * s * a as i8
}

/// Carries a square of `source` and a frame on it through the gluing onto `target`.
pub fn map_square(
    pairing: (Facet, Facet, &SignedPerm3),
    q: SquareFace,
    frame: SquareFrame,
) -> Result<(SquareFace, SquareFrame), Error> {
    let (source, target, map) = pairing;
    if !q.contains_in(source) {
        return Err(Error::Invalid(format!("square {q} is not in facet {source}")));
    }
    if frame.square != q {
        return Err(Error::Invalid(format!("frame is on {}, not {q}", frame.square)));
    }
    let phi = gluing_map(source, target, map);
    let moved = act_on_square(&phi, q, target.cube);
    // the linear image lies on the facet opposite to `target`; the translation fixes that
    let image = moved.with_sign(target.axis, target.sign);
    let frame = SquareFrame {
        square: image,
        tangent1: map_signed_axis(&phi, frame.tangent1),
        tangent2: map_signed_axis(&phi, frame.tangent2),
    };
    Ok((image, frame))
}
