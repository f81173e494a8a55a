//! The cubulation data model: hypercubes plus a matching of their facets
//! with a cube isometry per matched pair.
//!
//! File format, one record per line, `#` starts a comment:
//!
//! ```text
//! cubes <n>
//! pair <i>.<±a> <j>.<±b> <m1> <m2> <m3>
//! open <i>.<±a>
//! ```
//!
//! The serialized form is canonical: pairs are stored with the smaller facet
//! first and sorted, open facets sorted after them, single spaces, LF endings.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::hypercube::{
    act_on_facet, facet_orientation_sign, gluing_map, intrinsic_map, Facet, Sign, SignedPerm3,
    SignedPerm4,
};
use crate::tables::{code_of, tables};

/// A glued facet pair. The reverse gluing `(target, source, map⁻¹)` is implied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pairing {
    pub source: Facet,
    pub target: Facet,
    pub map: SignedPerm3,
}

impl Pairing {
    /// Builds a pairing, flipping it so that the smaller facet is the source.
    pub fn new(source: Facet, target: Facet, map: SignedPerm3) -> Pairing {
        if target < source {
            Pairing { source: target, target: source, map: map.inverse() }
        } else {
            Pairing { source, target, map }
        }
    }

    /// The 4-cube isometry carrying `source` onto `target`.
    pub fn gluing(&self) -> SignedPerm4 {
        gluing_map(self.source, self.target, &self.map)
    }

    /// `det(map)·ε(source)·ε(target) = −1`.
    pub fn is_orientation_reversing(&self) -> bool {
        self.orientation_product() == -1
    }

    fn orientation_product(&self) -> Sign {
        self.map.det() * facet_orientation_sign(self.source) * facet_orientation_sign(self.target)
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pair {} {} {}", self.source, self.target, self.map)
    }
}

/// One side of a glued facet, as seen from the facet itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Slot {
    pub cube: u32,
    pub facet: u8,
    /// Code of the gluing map leaving this facet.
    pub phi: u16,
    pub pairing: u32,
    /// True when this facet is the pairing's source.
    pub forward: bool,
}

/// Flat gluing table, `slots[cube * 8 + local_facet]`; `None` for open facets.
#[derive(Clone, Debug)]
pub(crate) struct GlueTable {
    pub n: usize,
    pub slots: Vec<Option<Slot>>,
}

impl GlueTable {
    pub fn get(&self, cube: usize, facet: usize) -> Option<Slot> {
        self.slots[cube * 8 + facet]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cubulation {
    n: usize,
    pairings: Vec<Pairing>,
    open: Vec<Facet>,
}

/// A structural defect found by [`Cubulation::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    NoCubes,
    OutOfRange(Facet),
    SelfPaired(Facet),
    Duplicate(Facet),
    Unmatched(Facet),
    Disconnected { components: usize },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::NoCubes => write!(f, "no hypercubes"),
            Diagnostic::OutOfRange(x) => write!(f, "facet out of range: {x}"),
            Diagnostic::SelfPaired(x) => write!(f, "facet paired with itself: {x}"),
            Diagnostic::Duplicate(x) => write!(f, "duplicate facet: {x}"),
            Diagnostic::Unmatched(x) => write!(f, "unmatched facet: {x}"),
            Diagnostic::Disconnected { components } => {
                write!(f, "disconnected: {components} components")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Accept inputs whose incidence graph has several components.
    pub allow_disconnected: bool,
    /// Defer all structural checks to [`Cubulation::validate`].
    pub lenient: bool,
}

/// Per-hypercube isometries plus a permutation of the hypercubes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabeling {
    /// `perm[old] = new` index.
    pub perm: Vec<usize>,
    /// Isometry applied to each old hypercube.
    pub frames: Vec<SignedPerm4>,
}

impl Relabeling {
    pub fn identity(n: usize) -> Relabeling {
        Relabeling { perm: (0..n).collect(), frames: vec![SignedPerm4::identity(); n] }
    }
}

/// Incidence multigraph: one vertex per hypercube, one edge per pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceGraph {
    pub vertices: usize,
    /// `(source cube, target cube)` per pairing, in pairing order.
    pub edges: Vec<(usize, usize)>,
}

impl IncidenceGraph {
    /// Facet slots incident to `v`; loops count twice.
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|&(a, b)| usize::from(a == v) + usize::from(b == v)).sum()
    }

    pub fn loops(&self) -> usize {
        self.edges.iter().filter(|(a, b)| a == b).count()
    }
}

impl Cubulation {
    /// Assembles a cubulation without checking it; see [`Cubulation::validate`].
    pub fn new(n: usize, pairings: impl IntoIterator<Item = Pairing>, open: impl IntoIterator<Item = Facet>) -> Cubulation {
        let mut pairings: Vec<Pairing> =
            pairings.into_iter().map(|p| Pairing::new(p.source, p.target, p.map)).collect();
        pairings.sort();
        let mut open: Vec<Facet> = open.into_iter().collect();
        open.sort();
        Cubulation { n, pairings, open }
    }

    /// Like [`Cubulation::new`] but rejects anything [`Cubulation::validate`] flags.
    pub fn checked(n: usize, pairings: impl IntoIterator<Item = Pairing>, open: impl IntoIterator<Item = Facet>) -> Result<Cubulation> {
        let c = Cubulation::new(n, pairings, open);
        match c.validate().into_iter().next() {
            None => Ok(c),
            Some(Diagnostic::Disconnected { components }) => Err(Error::Disconnected { components }),
            Some(d) => Err(Error::Invalid(d.to_string())),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairings(&self) -> &[Pairing] {
        &self.pairings
    }

    pub fn open_facets(&self) -> &[Facet] {
        &self.open
    }

    pub fn is_complete(&self) -> bool {
        self.open.is_empty() && self.pairings.len() == 4 * self.n
    }

    pub(crate) fn require_complete(&self) -> Result<()> {
        if self.is_complete() {
            Ok(())
        } else {
            Err(Error::Partial { open: 8 * self.n - 2 * self.pairings.len() })
        }
    }

    pub fn parse(text: &str) -> Result<Cubulation> {
        Cubulation::parse_with(text, ParseOptions::default())
    }

    pub fn parse_with(text: &str, opts: ParseOptions) -> Result<Cubulation> {
        let mut n: Option<usize> = None;
        let mut pairings = Vec::new();
        let mut open = Vec::new();
        let mut used: BTreeMap<Facet, usize> = BTreeMap::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let syntax = |message: String| Error::Syntax { line, message };
            let words: Vec<&str> = content.split_whitespace().collect();
            match words[0] {
                "cubes" => {
                    if n.is_some() {
                        return Err(syntax("repeated `cubes` line".into()));
                    }
                    if words.len() != 2 {
                        return Err(syntax("expected `cubes <n>`".into()));
                    }
                    let count: usize =
                        words[1].parse().map_err(|_| syntax(format!("bad cube count `{}`", words[1])))?;
                    if count == 0 {
                        return Err(syntax("a cubulation needs at least one hypercube".into()));
                    }
                    n = Some(count);
                }
                "pair" | "open" => {
                    let count = n.ok_or_else(|| syntax("`cubes` must come first".into()))?;
                    let facet = |w: &str| -> Result<Facet> {
                        let f: Facet = w.parse().map_err(|e: Error| syntax(e.to_string()))?;
                        if f.cube >= count && !opts.lenient {
                            return Err(syntax(format!("facet out of range: {f}")));
                        }
                        Ok(f)
                    };
                    let mut claim = |f: Facet| -> Result<()> {
                        if let Some(prev) = used.insert(f, line) {
                            if !opts.lenient {
                                return Err(syntax(format!("duplicate facet {f} (first used on line {prev})")));
                            }
                        }
                        Ok(())
                    };
                    if words[0] == "pair" {
                        if words.len() != 6 {
                            return Err(syntax("expected `pair <i>.<±a> <j>.<±b> <m1> <m2> <m3>`".into()));
                        }
                        let source = facet(words[1])?;
                        let target = facet(words[2])?;
                        if source == target && !opts.lenient {
                            return Err(syntax(format!("facet {source} paired with itself")));
                        }
                        let map: SignedPerm3 =
                            words[3..].join(" ").parse().map_err(|e: Error| syntax(e.to_string()))?;
                        claim(source)?;
                        if source != target {
                            claim(target)?;
                        }
                        pairings.push(Pairing::new(source, target, map));
                    } else {
                        if words.len() != 2 {
                            return Err(syntax("expected `open <i>.<±a>`".into()));
                        }
                        let f = facet(words[1])?;
                        claim(f)?;
                        open.push(f);
                    }
                }
                other => return Err(syntax(format!("unknown record `{other}`"))),
            }
        }

        let n = n.ok_or(Error::Syntax { line: text.lines().count().max(1), message: "missing `cubes` line".into() })?;
        let c = Cubulation::new(n, pairings, open);
        if opts.lenient {
            return Ok(c);
        }
        for d in c.validate() {
            match d {
                Diagnostic::Disconnected { components } if !opts.allow_disconnected => {
                    return Err(Error::Disconnected { components });
                }
                Diagnostic::Disconnected { .. } => {}
                other => return Err(Error::Invalid(other.to_string())),
            }
        }
        Ok(c)
    }

    /// Canonical text form.
    pub fn serialize(&self) -> String {
        self.to_string()
    }

    /// Structural diagnostics; empty iff the facet partition is sound and the
    /// incidence graph connected. Manifoldness is never checked.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.n == 0 {
            out.push(Diagnostic::NoCubes);
            return out;
        }
        let mut count = vec![0usize; 8 * self.n];
        let mut touch = |f: Facet, out: &mut Vec<Diagnostic>| {
            if f.cube >= self.n {
                out.push(Diagnostic::OutOfRange(f));
            } else {
                count[f.cube * 8 + f.local()] += 1;
            }
        };
        for p in &self.pairings {
            if p.source == p.target {
                out.push(Diagnostic::SelfPaired(p.source));
            }
            touch(p.source, &mut out);
            if p.source != p.target {
                touch(p.target, &mut out);
            }
        }
        for &f in &self.open {
            touch(f, &mut out);
        }
        for (slot, &c) in count.iter().enumerate() {
            let f = Facet::from_local(slot / 8, slot % 8);
            if c == 0 {
                out.push(Diagnostic::Unmatched(f));
            } else if c > 1 {
                out.push(Diagnostic::Duplicate(f));
            }
        }
        let components = self.components().len();
        if components > 1 {
            out.push(Diagnostic::Disconnected { components });
        }
        out
    }

    /// Hypercube sets of the incidence graph's connected components, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for p in &self.pairings {
            let (a, b) = (p.source.cube, p.target.cube);
            if a < self.n && b < self.n {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..self.n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }

    /// Splits into connected components, renumbering hypercubes within each.
    pub fn split_components(&self) -> Vec<Cubulation> {
        self.components()
            .into_iter()
            .map(|cubes| {
                let index: BTreeMap<usize, usize> = cubes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
                let re = |f: Facet| Facet { cube: index[&f.cube], ..f };
                Cubulation::new(
                    cubes.len(),
                    self.pairings
                        .iter()
                        .filter(|p| index.contains_key(&p.source.cube))
                        .map(|p| Pairing::new(re(p.source), re(p.target), p.map)),
                    self.open.iter().filter(|f| index.contains_key(&f.cube)).map(|&f| re(f)),
                )
            })
            .collect()
    }

    /// Places `other` after `self` as a disjoint union.
    pub fn disjoint_union(&self, other: &Cubulation) -> Cubulation {
        let shift = |f: Facet| Facet { cube: f.cube + self.n, ..f };
        Cubulation::new(
            self.n + other.n,
            self.pairings
                .iter()
                .copied()
                .chain(other.pairings.iter().map(|p| Pairing::new(shift(p.source), shift(p.target), p.map))),
            self.open.iter().copied().chain(other.open.iter().map(|&f| shift(f))),
        )
    }

    pub(crate) fn glue_table(&self) -> GlueTable {
        let mut slots = vec![None; 8 * self.n];
        let t = tables();
        for (idx, p) in self.pairings.iter().enumerate() {
            let phi = code_of(&p.gluing());
            slots[p.source.cube * 8 + p.source.local()] = Some(Slot {
                cube: p.target.cube as u32,
                facet: p.target.local() as u8,
                phi,
                pairing: idx as u32,
                forward: true,
            });
            slots[p.target.cube * 8 + p.target.local()] = Some(Slot {
                cube: p.source.cube as u32,
                facet: p.source.local() as u8,
                phi: t.inv(phi),
                pairing: idx as u32,
                forward: false,
            });
        }
        GlueTable { n: self.n, slots }
    }

    pub fn incidence_graph(&self) -> IncidenceGraph {
        IncidenceGraph {
            vertices: self.n,
            edges: self.pairings.iter().map(|p| (p.source.cube, p.target.cube)).collect(),
        }
    }

    /// Orientation signs per hypercube making every pairing orientation
    /// reversing, if such a choice exists. Cube 0 of each component gets `+1`.
    pub fn orientation_coloring(&self) -> Option<Vec<Sign>> {
        let mut color: Vec<Sign> = vec![0; self.n];
        let mut adj: Vec<Vec<(usize, Sign)>> = vec![Vec::new(); self.n];
        for p in &self.pairings {
            // o_source · o_target must equal −(det·ε·ε)
            let need = -p.orientation_product();
            if p.source.cube == p.target.cube {
                if need != 1 {
                    return None;
                }
                continue;
            }
            adj[p.source.cube].push((p.target.cube, need));
            adj[p.target.cube].push((p.source.cube, need));
        }
        for start in 0..self.n {
            if color[start] != 0 {
                continue;
            }
            color[start] = 1;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &(w, need) in &adj[v] {
                    let want = color[v] * need;
                    if color[w] == 0 {
                        color[w] = want;
                        queue.push_back(w);
                    } else if color[w] != want {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }

    /// True when the hypercubes can be oriented so that every pairing is
    /// orientation reversing. Invariant under every relabeling.
    pub fn is_orientable(&self) -> bool {
        self.orientation_coloring().is_some()
    }

    /// True when every pairing is orientation reversing for the standard
    /// orientation of each hypercube as labeled.
    pub fn is_consistently_oriented(&self) -> bool {
        self.pairings.iter().all(Pairing::is_orientation_reversing)
    }

    /// Relabels orientation-negative hypercubes by the reflection `x_1 ↦ −x_1`
    /// so that the result is consistently oriented. `None` if not orientable.
    pub fn oriented(&self) -> Option<Cubulation> {
        let color = self.orientation_coloring()?;
        let flip = SignedPerm4::new([-1, 2, 3, 4]).unwrap();
        let frames = color.iter().map(|&o| if o > 0 { SignedPerm4::identity() } else { flip }).collect();
        Some(self.relabel(&Relabeling { perm: (0..self.n).collect(), frames }))
    }

    /// Applies per-hypercube isometries and renumbers the hypercubes.
    pub fn relabel(&self, g: &Relabeling) -> Cubulation {
        let move_facet = |f: Facet| act_on_facet(&g.frames[f.cube], f, g.perm[f.cube]);
        let pairings = self.pairings.iter().map(|p| {
            let source = move_facet(p.source);
            let target = move_facet(p.target);
            let phi = g.frames[p.source.cube].inverse().then(&p.gluing()).then(&g.frames[p.target.cube]);
            Pairing::new(source, target, intrinsic_map(source, target, &phi))
        });
        Cubulation::new(self.n, pairings, self.open.iter().map(|&f| move_facet(f)))
    }

    /// Graphviz rendering of the incidence graph, edges labeled with their pairing.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph cubulation {\n  node [shape=circle];\n");
        for v in 0..self.n {
            let _ = writeln!(s, "  {v};");
        }
        for p in &self.pairings {
            let _ = writeln!(
                s,
                "  {} -- {} [label=\"{} {} [{}]\"];",
                p.source.cube, p.target.cube, p.source, p.target, p.map
            );
        }
        for f in &self.open {
            let _ = writeln!(s, "  open_{} [shape=point];\n  {} -- open_{} [style=dashed, label=\"{f}\"];",
                f.to_string().replace(['.', '+', '-'], "_"), f.cube, f.to_string().replace(['.', '+', '-'], "_"));
        }
        s.push_str("}\n");
        s
    }
}

impl fmt::Display for Cubulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "cubes {}", self.n)?;
        for p in &self.pairings {
            writeln!(f, "{p}")?;
        }
        for o in &self.open {
            writeln!(f, "open {o}")?;
        }
        Ok(())
    }
}
