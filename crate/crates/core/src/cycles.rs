//! Cycles of square 2-faces, their monodromies, and the invariants of the
//! cusped manifold read off from them.
//!
//! Walking a cycle: leave square `q` through facet `f`, follow the pairing of
//! `f` to the image square `q'` on the glued facet `f'`, then leave `q'`
//! through its other facet. The linear parts of the gluings met along the way
//! multiply to an isometry `A` of the starting hypercube; on a closed cycle
//! `A` preserves the tangent plane of the starting square and its restriction
//! there is the monodromy.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_rational::Ratio;

use crate::cubulation::{Cubulation, GlueTable};
use crate::error::{Error, Result};
use crate::hypercube::{Facet, SignedPerm2, SquareFace};
use crate::tables::{tables, ORDER};

/// Conjugacy classes of the order-8 symmetry group of a square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MonodromyClass {
    Identity,
    MinusIdentity,
    /// The two rotations by a quarter turn.
    Rotation4,
    AxisReflection,
    DiagonalReflection,
}

impl MonodromyClass {
    pub const ALL: [MonodromyClass; 5] = [
        MonodromyClass::Identity,
        MonodromyClass::MinusIdentity,
        MonodromyClass::Rotation4,
        MonodromyClass::AxisReflection,
        MonodromyClass::DiagonalReflection,
    ];

    pub fn label(self) -> &'static str {
        match self {
            MonodromyClass::Identity => "I",
            MonodromyClass::MinusIdentity => "-I",
            MonodromyClass::Rotation4 => "R4",
            MonodromyClass::AxisReflection => "refl-axis",
            MonodromyClass::DiagonalReflection => "refl-diag",
        }
    }

    pub fn is_orientation_preserving(self) -> bool {
        matches!(self, MonodromyClass::Identity | MonodromyClass::MinusIdentity | MonodromyClass::Rotation4)
    }
}

impl fmt::Display for MonodromyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for MonodromyClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MonodromyClass::ALL
            .into_iter()
            .find(|c| c.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Invalid(format!("unknown monodromy class `{s}` (I, -I, R4, refl-axis, refl-diag)")))
    }
}

/// A symmetry of the square, as a signed permutation of its two tangent axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monodromy(pub SignedPerm2);

impl Monodromy {
    /// Matrix with columns the images of the basis vectors.
    pub fn matrix(&self) -> [[i8; 2]; 2] {
        let mut m = [[0i8; 2]; 2];
        for col in 0..2 {
            let (row, s) = self.0.apply_axis(col + 1);
            m[row - 1][col] = s;
        }
        m
    }

    pub fn from_matrix(m: [[i8; 2]; 2]) -> Result<Monodromy> {
        let mut image = [0i8; 2];
        for (col, img) in image.iter_mut().enumerate() {
            for row in 0..2 {
                if m[row][col] != 0 {
                    *img = m[row][col] * (row as i8 + 1);
                }
            }
        }
        SignedPerm2::new(image)
            .map(Monodromy)
            .map_err(|_| Error::Invalid(format!("{m:?} is not a signed permutation matrix")))
    }

    pub fn det(&self) -> i8 {
        self.0.det()
    }

    pub fn inverse(&self) -> Monodromy {
        Monodromy(self.0.inverse())
    }

    pub fn class(&self) -> MonodromyClass {
        monodromy_class(self)
    }
}

pub fn monodromy_class(m: &Monodromy) -> MonodromyClass {
    match m.0.image() {
        [1, 2] => MonodromyClass::Identity,
        [-1, -2] => MonodromyClass::MinusIdentity,
        [2, -1] | [-2, 1] => MonodromyClass::Rotation4,
        [1, -2] | [-1, 2] => MonodromyClass::AxisReflection,
        _ => MonodromyClass::DiagonalReflection,
    }
}

/// A cycle of squares, or an open chain in a partial cubulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceCycle {
    /// Each square with the facet the walk leaves it through.
    pub squares: Vec<(SquareFace, Facet)>,
    /// `None` on open chains.
    pub monodromy: Option<Monodromy>,
    pub closed: bool,
}

impl FaceCycle {
    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    pub fn class(&self) -> Option<MonodromyClass> {
        self.monodromy.map(|m| m.class())
    }

    /// Endpoint squares of an open chain, start first.
    pub fn endpoints(&self) -> Option<(SquareFace, SquareFace)> {
        (!self.closed).then(|| (self.squares[0].0, self.squares[self.len() - 1].0))
    }

    /// Facets an open chain enters and leaves through.
    pub fn end_facets(&self) -> Option<(Facet, Facet)> {
        if self.closed {
            return None;
        }
        let (q, exit) = self.squares[0];
        let [a, b] = q.facets();
        let entry = if a == exit { b } else { a };
        Some((entry, self.squares[self.len() - 1].1))
    }
}

/// Result of one walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Walk {
    /// Returned to the start; `a` is the accumulated isometry code.
    Closed { len: usize, a: u16 },
    /// Left through an open facet.
    Open { len: usize },
}

/// Walks from `(cube, square)` leaving through local facet `exit`.
///
/// `slot(cube, facet)` returns the glued cube and gluing code, or `None` if
/// the facet is open. `visit` sees every square of the walk, the start first.
#[inline]
pub(crate) fn walk<S, V>(slot: S, cube: usize, square: usize, exit: usize, mut visit: V) -> Walk
where
    S: Fn(usize, usize) -> Option<(usize, u16)>,
    V: FnMut(usize, usize, usize),
{
    let t = tables();
    let (mut c, mut q, mut f, mut a) = (cube, square, exit, 0u16);
    let mut len = 1;
    visit(c, q, f);
    loop {
        let Some((c2, phi)) = slot(c, f) else {
            return Walk::Open { len };
        };
        let f2 = t.glue_facet(phi, f);
        let q2 = t.glue_square(phi, f, q);
        a = t.mul(a, phi);
        if c2 == cube && q2 == square {
            return Walk::Closed { len, a };
        }
        let e = t.other_facet(q2, f2);
        len += 1;
        visit(c2, q2, e);
        c = c2;
        q = q2;
        f = e;
    }
}

/// `class_table()[square * ORDER + a]`: class of `a` restricted to the square's tangent plane.
fn class_table() -> &'static [MonodromyClass] {
    static TABLE: OnceLock<Vec<MonodromyClass>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = Vec::with_capacity(24 * ORDER);
        for q in 0..24 {
            for a in 0..ORDER as u16 {
                out.push(restrict(q, a).map_or(MonodromyClass::DiagonalReflection, |m| m.class()));
            }
        }
        out
    })
}

#[inline]
pub(crate) fn class_of(square: usize, a: u16) -> MonodromyClass {
    class_table()[square * ORDER + a as usize]
}

/// Restriction of `a` to the tangent plane of local square `q`, if it preserves it.
pub(crate) fn restrict(q: usize, a: u16) -> Option<Monodromy> {
    let (t1, t2) = SquareFace::from_local(0, q).tangent_axes();
    let g = tables().elem(a);
    let axes = [t1.index() as usize, t2.index() as usize];
    let mut image = [0i8; 2];
    for k in 0..2 {
        let (target, s) = g.apply_axis(axes[k]);
        let pos = axes.iter().position(|&x| x == target)?;
        image[k] = s * (pos as i8 + 1);
    }
    Some(Monodromy(SignedPerm2::new(image).expect("restriction is a signed permutation")))
}

fn slot_fn(table: &GlueTable) -> impl Fn(usize, usize) -> Option<(usize, u16)> + '_ {
    move |c, f| table.get(c, f).map(|s| (s.cube as usize, s.phi))
}

fn record(table: &GlueTable, cube: usize, square: usize, exit: usize, visited: &mut [bool]) -> FaceCycle {
    let mut squares = Vec::new();
    let end = walk(slot_fn(table), cube, square, exit, |c, q, f| {
        visited[c * 24 + q] = true;
        squares.push((SquareFace::from_local(c, q), Facet::from_local(c, f)));
    });
    match end {
        Walk::Closed { a, .. } => FaceCycle { squares, monodromy: restrict(square, a), closed: true },
        Walk::Open { .. } => FaceCycle { squares, monodromy: None, closed: false },
    }
}

/// All cycles of squares; open chains of a partial cubulation come first.
///
/// Chains start from the squares of open facets in facet order; closed cycles
/// start at their lexicographically first square, leaving through its smaller
/// facet.
pub fn trace_cycles(c: &Cubulation) -> Vec<FaceCycle> {
    let table = c.glue_table();
    let t = tables();
    let mut visited = vec![false; 24 * c.n()];
    let mut out = Vec::new();
    for &open in c.open_facets() {
        for q in open.squares() {
            let local = q.local();
            if !visited[open.cube * 24 + local] {
                let exit = t.other_facet(local, open.local());
                out.push(record(&table, open.cube, local, exit, &mut visited));
            }
        }
    }
    for cube in 0..c.n() {
        for q in 0..24 {
            if !visited[cube * 24 + q] {
                out.push(record(&table, cube, q, t.square_facets(q)[0], &mut visited));
            }
        }
    }
    out
}

/// The cycle through `square`, walked leaving through `exit`.
pub fn trace_from(c: &Cubulation, square: SquareFace, exit: Facet) -> Result<FaceCycle> {
    if square.cube >= c.n() || !square.contains_in(exit) {
        return Err(Error::Invalid(format!("square {square} with exit {exit} is not a valid start")));
    }
    let table = c.glue_table();
    let mut visited = vec![false; 24 * c.n()];
    Ok(record(&table, square.cube, square.local(), exit.local(), &mut visited))
}

/// `(h, class)` per closed cycle in [`trace_cycles`] order, without recording squares.
pub fn cusp_profile(c: &Cubulation) -> Vec<(usize, MonodromyClass)> {
    let table = c.glue_table();
    profile_of(&table)
}

pub(crate) fn profile_of(table: &GlueTable) -> Vec<(usize, MonodromyClass)> {
    let t = tables();
    let mut visited = vec![false; 24 * table.n];
    let mut out = Vec::new();
    for cube in 0..table.n {
        for q in 0..24 {
            if visited[cube * 24 + q] {
                continue;
            }
            let end = walk(slot_fn(table), cube, q, t.square_facets(q)[0], |c, s, _| visited[c * 24 + s] = true);
            if let Walk::Closed { len, a } = end {
                out.push((len, class_of(q, a)));
            }
        }
    }
    out
}

/// Flat shape of a cusp section of an orientable cubulation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CuspShape {
    /// The box `2 × 2 × h` with opposite faces identified by translations.
    ThreeTorus { h: usize },
    /// `T × [0,h] / ψ` with `ψ = −I` or a quarter turn.
    TorusBundle { h: usize, monodromy: MonodromyClass },
}

impl CuspShape {
    pub fn sides(&self) -> Option<(usize, usize, usize)> {
        match *self {
            CuspShape::ThreeTorus { h } => Some((2, 2, h)),
            CuspShape::TorusBundle { .. } => None,
        }
    }
}

impl fmt::Display for CuspShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CuspShape::ThreeTorus { h } => write!(f, "3-torus(2,2,{h})"),
            CuspShape::TorusBundle { h, monodromy } => write!(f, "bundle({monodromy},h={h})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspReport {
    pub cycle: FaceCycle,
    pub h: usize,
    pub monodromy_class: MonodromyClass,
    /// Only for orientable cubulations.
    pub shape: Option<CuspShape>,
    /// Volume of the flat section, `4h`.
    pub section_volume: usize,
}

pub fn classify_cusp(cycle: &FaceCycle, orientable: bool) -> Result<CuspReport> {
    let class = match (cycle.closed, cycle.monodromy) {
        (true, Some(m)) => m.class(),
        _ => return Err(Error::Precondition("cusps come from closed cycles only".into())),
    };
    let h = cycle.len();
    let shape = match class {
        _ if !orientable => None,
        MonodromyClass::Identity => Some(CuspShape::ThreeTorus { h }),
        MonodromyClass::MinusIdentity | MonodromyClass::Rotation4 => {
            Some(CuspShape::TorusBundle { h, monodromy: class })
        }
        // cannot happen on orientable inputs
        _ => None,
    };
    Ok(CuspReport { cycle: cycle.clone(), h, monodromy_class: class, shape, section_volume: 4 * h })
}

/// A rational multiple of `π²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PiSquared(pub Ratio<i64>);

impl PiSquared {
    pub fn to_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64 * std::f64::consts::PI.powi(2)
    }
}

impl fmt::Display for PiSquared {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.0.denom() == 1 {
            write!(f, "{}*pi^2", self.0.numer())
        } else {
            write!(f, "{}/{}*pi^2", self.0.numer(), self.0.denom())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub n: usize,
    /// Number of cusps.
    pub k: usize,
    pub chi: i64,
    pub volume: PiSquared,
    pub total_section_volume: usize,
    pub orientable: bool,
    pub cusps: Vec<CuspReport>,
}

impl InvariantReport {
    pub fn profile(&self) -> Vec<(usize, MonodromyClass)> {
        self.cusps.iter().map(|c| (c.h, c.monodromy_class)).collect()
    }
}

/// `χ = 4n`.
pub fn euler_characteristic(n: usize) -> i64 {
    4 * n as i64
}

/// `Vol = (4π²/3)·χ`.
pub fn volume(n: usize) -> PiSquared {
    PiSquared(Ratio::new(4, 3) * Ratio::from_integer(euler_characteristic(n)))
}

pub fn invariant_report(c: &Cubulation) -> Result<InvariantReport> {
    c.require_complete()?;
    let orientable = c.is_orientable();
    let cusps = trace_cycles(c)
        .iter()
        .map(|cy| classify_cusp(cy, orientable))
        .collect::<Result<Vec<_>>>()?;
    Ok(InvariantReport {
        n: c.n(),
        k: cusps.len(),
        chi: euler_characteristic(c.n()),
        volume: volume(c.n()),
        total_section_volume: cusps.iter().map(|r| r.section_volume).sum(),
        orientable,
        cusps,
    })
}
