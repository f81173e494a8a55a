//! Surgeries on cubulations: flower insertion merges two cusps, splitter
//! insertion creates new ones, cyclic unrolling builds covers.
//!
//! Both insertions cut one facet pairing `F₁ → F₂` and splice in fresh
//! hypercubes whose two free facets are an opposite pair `O₁, O₂`: `F₁` is
//! glued to `O₁` of the first new hypercube and `O₂` of the last one to `F₂`.

use std::sync::OnceLock;

use serde::Serialize;

use crate::cubulation::{Cubulation, Pairing};
use crate::cycles::{cusp_profile, trace_cycles, FaceCycle};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fixtures;
use crate::hypercube::{intrinsic_map, Facet, SquareFace};
use crate::tables::{code_of, tables, ORDER};

/// A one-hypercube partial cubulation whose open facets are an opposite pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    pub body: Cubulation,
    /// `(O₁, O₂)`, smaller first.
    pub open: (Facet, Facet),
    pub chains: Vec<FaceCycle>,
    /// Closed cycles lying entirely inside the gadget.
    pub inner_cycles: Vec<FaceCycle>,
}

/// How the open chains of a gadget connect its two free facets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainProfile {
    pub chains: usize,
    /// Chains running from one free facet to the other.
    pub cross: usize,
    /// Chains returning to the facet they started from.
    pub same_facet: usize,
    /// Same-facet chains whose end squares are not opposite in that facet.
    pub same_facet_non_opposite: usize,
    pub inner_cycles: usize,
}

impl Gadget {
    pub fn new(body: Cubulation) -> Result<Gadget> {
        let open = match body.open_facets() {
            &[a, b] if body.n() == 1 && a.opposite() == b => (a, b),
            _ => return Err(Error::Invalid("a gadget is one hypercube with one opposite pair of open facets".into())),
        };
        let (chains, inner_cycles) = trace_cycles(&body).into_iter().partition(|c| !c.closed);
        Ok(Gadget { body, open, chains, inner_cycles })
    }

    pub fn profile(&self) -> ChainProfile {
        let mut p = ChainProfile {
            chains: self.chains.len(),
            cross: 0,
            same_facet: 0,
            same_facet_non_opposite: 0,
            inner_cycles: self.inner_cycles.len(),
        };
        for chain in &self.chains {
            let (entry, exit) = chain.end_facets().expect("open chain");
            if entry == exit {
                p.same_facet += 1;
                let (a, b) = chain.endpoints().expect("open chain");
                if a.opposite_in(entry).ok() != Some(b) {
                    p.same_facet_non_opposite += 1;
                }
            } else {
                p.cross += 1;
            }
        }
        p
    }

    /// Same-facet chains, one end square pair per chain, with their facet.
    pub fn u_turns(&self) -> Vec<(Facet, SquareFace, SquareFace)> {
        self.chains
            .iter()
            .filter_map(|c| {
                let (entry, exit) = c.end_facets()?;
                let (a, b) = c.endpoints()?;
                (entry == exit).then_some((entry, a, b))
            })
            .collect()
    }
}

/// Four cross chains and two non-opposite U-turns, one at each free facet.
pub const MERGER_PROFILE: ChainProfile =
    ChainProfile { chains: 6, cross: 4, same_facet: 2, same_facet_non_opposite: 2, inner_cycles: 0 };

fn gadget_body(open_axis: u8, codes: [u16; 3]) -> Cubulation {
    let t = tables();
    let axes: Vec<u8> = (1..=4).filter(|&a| a != open_axis).collect();
    let pairings = axes.iter().zip(codes).map(|(&a, code)| {
        let s = Facet::new(0, a, -1).unwrap();
        let d = s.opposite();
        Pairing::new(s, d, intrinsic_map(s, d, t.elem(code)))
    });
    let o = Facet::new(0, open_axis, -1).unwrap();
    Cubulation::new(1, pairings, [o, o.opposite()])
}

/// Orientation-preserving gluings of local facet `a` onto `b`, ascending.
fn oriented_codes(a: usize, b: usize) -> Vec<u16> {
    let t = tables();
    (0..ORDER as u16).filter(|&g| t.glue_facet(g, a) == b && t.det(g) == 1).collect()
}

fn merger_candidates(open_axis: u8) -> Vec<[u16; 3]> {
    let axes: Vec<u8> = (1..=4).filter(|&a| a != open_axis).collect();
    let choices: Vec<Vec<u16>> = axes.iter().map(|&a| oriented_codes(2 * (a as usize - 1), 2 * (a as usize - 1) + 1)).collect();
    let mut out = Vec::with_capacity(24 * 24 * 24);
    for &x in &choices[0] {
        for &y in &choices[1] {
            for &z in &choices[2] {
                out.push([x, y, z]);
            }
        }
    }
    out
}

fn qualifies(g: &Gadget) -> bool {
    g.profile() == MERGER_PROFILE && insert_flower_with(&fixtures::example1(), Some(0), g).is_ok()
}

/// Every orientable merger gadget with the given open axis, in code order.
pub fn all_merger_gadgets(open_axis: u8, exec: Exec) -> Vec<Gadget> {
    let candidates = merger_candidates(open_axis);
    exec.map(&candidates, |&codes| {
        let g = Gadget::new(gadget_body(open_axis, codes)).expect("valid gadget");
        (g.profile() == MERGER_PROFILE).then_some(g)
    })
    .into_iter()
    .flatten()
    .filter(qualifies)
    .collect()
}

/// The first merger gadget in search order: open axes `1..4`, then
/// gluing codes of the three glued pairs ascending. Cached.
pub fn find_merger_gadget() -> Result<Gadget> {
    static CACHE: OnceLock<Option<Gadget>> = OnceLock::new();
    CACHE
        .get_or_init(|| {
            (1..=4u8).find_map(|axis| {
                let candidates = merger_candidates(axis);
                Exec::Parallel.find_map_first(&candidates, |&codes| {
                    let g = Gadget::new(gadget_body(axis, codes)).expect("valid gadget");
                    qualifies(&g).then_some(g)
                })
            })
        })
        .clone()
        .ok_or_else(|| Error::NotFound("no merger gadget with four cross chains and two U-turns".into()))
}

/// Example 1 with the axis-4 pair left open.
pub fn splitter_gadget() -> Gadget {
    let e1 = fixtures::example1();
    let body = Cubulation::new(1, e1.pairings()[..3].iter().copied(), [e1.pairings()[3].source, e1.pairings()[3].target]);
    Gadget::new(body).expect("valid gadget")
}

/// One step of a surgery, for the move log.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Move {
    pub op: &'static str,
    pub edge: usize,
    pub count: usize,
    pub n_before: usize,
    pub n_after: usize,
    pub cusps_before: usize,
    pub cusps_after: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergerCertificate {
    /// Index of the replaced pairing in the input.
    pub edge: usize,
    pub pairing: Pairing,
    /// Squares of the edge's source facet whose cycles were merged.
    pub merged: (SquareFace, SquareFace),
    /// New pairings `F₁ → O₁` and `O₂ → F₂`.
    pub alpha: Pairing,
    pub beta: Pairing,
    pub cusps_before: usize,
    pub cusps_after: usize,
}

impl MergerCertificate {
    pub fn to_move(&self, n_before: usize) -> Move {
        Move {
            op: "flower",
            edge: self.edge,
            count: 1,
            n_before,
            n_after: n_before + 1,
            cusps_before: self.cusps_before,
            cusps_after: self.cusps_after,
        }
    }
}

/// Replaces pairing `edge` by a chain of gadget copies.
///
/// `alpha` glues the edge's source onto `O₁` of the first copy, consecutive
/// copies are joined `O₂ → O₁` by translations, and `beta` glues `O₂` of the
/// last copy onto the edge's target.
fn splice(c: &Cubulation, edge: usize, gadget: &Gadget, copies: usize, alpha: u16, beta: u16) -> Cubulation {
    let t = tables();
    let p = c.pairings()[edge];
    let n = c.n();
    let (o1, o2) = gadget.open;
    let at = |k: usize, f: Facet| Facet { cube: n + k, ..f };
    let glue = |s: Facet, d: Facet, code: u16| Pairing::new(s, d, intrinsic_map(s, d, t.elem(code)));
    let mut pairings: Vec<Pairing> =
        c.pairings().iter().enumerate().filter(|&(i, _)| i != edge).map(|(_, &q)| q).collect();
    for k in 0..copies {
        pairings.extend(
            gadget.body.pairings().iter().map(|q| Pairing::new(at(k, q.source), at(k, q.target), q.map)),
        );
        if k + 1 < copies {
            pairings.push(glue(at(k, o2), at(k + 1, o1), 0));
        }
    }
    pairings.push(glue(p.source, at(0, o1), alpha));
    pairings.push(glue(at(copies - 1, o2), p.target, beta));
    Cubulation::new(n + copies, pairings, [])
}

fn require_surgery_input(c: &Cubulation) -> Result<()> {
    c.require_complete()?;
    if !c.is_orientable() {
        return Err(Error::Precondition("surgery needs an orientable cubulation".into()));
    }
    Ok(())
}

fn check_edge(c: &Cubulation, edge: usize) -> Result<()> {
    if edge >= c.pairings().len() {
        return Err(Error::Invalid(format!("edge {edge} out of range (cubulation has {} pairings)", c.pairings().len())));
    }
    Ok(())
}

/// Cycle index of every square, `ids[24·cube + local]`.
fn cycle_ids(c: &Cubulation) -> (Vec<usize>, Vec<FaceCycle>) {
    let cycles = trace_cycles(c);
    let mut ids = vec![usize::MAX; 24 * c.n()];
    for (i, cy) in cycles.iter().enumerate() {
        for (q, _) in &cy.squares {
            ids[24 * q.cube + q.local()] = i;
        }
    }
    (ids, cycles)
}

/// Edges whose source facet has two non-opposite squares on different cycles.
pub fn flower_edges(c: &Cubulation) -> Vec<usize> {
    let (ids, _) = cycle_ids(c);
    c.pairings()
        .iter()
        .enumerate()
        .filter(|(_, p)| {
            let sq = p.source.squares();
            sq.iter().any(|&a| {
                sq.iter().any(|&b| {
                    a.opposite_in(p.source).ok() != Some(b)
                        && a != b
                        && ids[24 * a.cube + a.local()] != ids[24 * b.cube + b.local()]
                })
            })
        })
        .map(|(i, _)| i)
        .collect()
}

/// If `after` merges exactly two cycles of `before` and keeps every other
/// cycle whole and apart, the two merged cycle indices.
fn clean_merge(before: &[usize], k_before: usize, after: &[usize], k_after: usize) -> Option<(usize, usize)> {
    if k_after + 1 != k_before {
        return None;
    }
    let mut image = vec![usize::MAX; k_before];
    for (sq, &old) in before.iter().enumerate() {
        let new = after[sq];
        if image[old] == usize::MAX {
            image[old] = new;
        } else if image[old] != new {
            return None;
        }
    }
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); k_after];
    for (old, &new) in image.iter().enumerate() {
        owners[new].push(old);
    }
    let merged: Vec<&Vec<usize>> = owners.iter().filter(|o| o.len() != 1).collect();
    match merged[..] {
        [pair] if pair.len() == 2 => Some((pair[0], pair[1])),
        _ => None,
    }
}

/// Inserts a merger gadget at `edge` (or the first edge that works),
/// reducing the cusp count by one.
pub fn insert_flower(c: &Cubulation, edge: Option<usize>) -> Result<(Cubulation, MergerCertificate)> {
    let gadget = find_merger_gadget()?;
    insert_flower_with(c, edge, &gadget)
}

pub fn insert_flower_with(c: &Cubulation, edge: Option<usize>, gadget: &Gadget) -> Result<(Cubulation, MergerCertificate)> {
    require_surgery_input(c)?;
    let k = cusp_profile(c).len();
    if k < 2 {
        return Err(Error::Precondition("a flower needs at least two cusps to merge".into()));
    }
    let edges = match edge {
        Some(e) => {
            check_edge(c, e)?;
            vec![e]
        }
        None => flower_edges(c),
    };
    let (before, _) = cycle_ids(c);
    let t = tables();
    let (o1, o2) = (gadget.open.0.local(), gadget.open.1.local());
    for &e in &edges {
        let p = c.pairings()[e];
        let (f1, f2) = (p.source.local(), p.target.local());
        let phi = code_of(&p.gluing());
        for alpha in (0..ORDER as u16).filter(|&a| t.glue_facet(a, f1) == o1) {
            for beta in (0..ORDER as u16).filter(|&b| t.glue_facet(b, o2) == f2) {
                if t.det(alpha) * t.det(beta) != t.det(phi) {
                    continue;
                }
                let out = splice(c, e, gadget, 1, alpha, beta);
                if cusp_profile(&out).len() != k - 1 {
                    continue;
                }
                let (after, cycles) = cycle_ids(&out);
                let Some((x, y)) = clean_merge(&before, k, &after[..before.len()], cycles.len()) else {
                    continue;
                };
                let pick = |cycle: usize| {
                    p.source.squares().into_iter().find(|q| before[24 * q.cube + q.local()] == cycle)
                };
                let merged = match (pick(x), pick(y)) {
                    (Some(a), Some(b)) => (a, b),
                    _ => continue,
                };
                let n = c.n();
                let o1f = Facet { cube: n, ..gadget.open.0 };
                let o2f = Facet { cube: n, ..gadget.open.1 };
                let cert = MergerCertificate {
                    edge: e,
                    pairing: p,
                    merged,
                    alpha: Pairing { source: p.source, target: o1f, map: intrinsic_map(p.source, o1f, t.elem(alpha)) },
                    beta: Pairing { source: o2f, target: p.target, map: intrinsic_map(o2f, p.target, t.elem(beta)) },
                    cusps_before: k,
                    cusps_after: k - 1,
                };
                return Ok((out, cert));
            }
        }
    }
    Err(Error::NotFound(format!(
        "no edge among {edges:?} admits a merging flower; this contradicts the flower construction"
    )))
}

/// Inserts `count` splitter gadgets in series at pairing `edge`.
pub fn insert_splitter(c: &Cubulation, edge: usize, count: usize) -> Result<Cubulation> {
    check_edge(c, edge)?;
    let f1 = c.pairings()[edge].source.local();
    let o1 = splitter_gadget().open.0.local();
    let t = tables();
    let alpha = (0..ORDER as u16)
        .find(|&a| t.glue_facet(a, f1) == o1 && t.det(a) == 1)
        .expect("some isometry glues any facet to any facet");
    insert_splitter_aligned(c, edge, count, alpha)
}

/// [`insert_splitter`] with an explicit gluing code for `F₁ → O₁`.
pub fn insert_splitter_aligned(c: &Cubulation, edge: usize, count: usize, alpha: u16) -> Result<Cubulation> {
    require_surgery_input(c)?;
    check_edge(c, edge)?;
    if count == 0 {
        return Ok(c.clone());
    }
    let gadget = splitter_gadget();
    let t = tables();
    let p = c.pairings()[edge];
    if alpha as usize >= ORDER || t.glue_facet(alpha, p.source.local()) != gadget.open.0.local() {
        return Err(Error::Invalid(format!("code {alpha} does not glue {} onto the splitter", p.source)));
    }
    // the gadgets are crossed by translations, so α then β must be the old gluing
    let beta = t.mul(t.inv(alpha), code_of(&p.gluing()));
    Ok(splice(c, edge, &gadget, count, alpha, beta))
}

/// Splitters until at least `k` cusps, then flowers down to exactly `k`.
pub fn reduce_to_k(c: &Cubulation, k: usize) -> Result<(Cubulation, Vec<Move>)> {
    require_surgery_input(c)?;
    if k == 0 {
        return Err(Error::Invalid("the target cusp count must be positive".into()));
    }
    let mut log = Vec::new();
    let mut current = c.clone();
    let mut cusps = cusp_profile(c).len();
    if cusps < k {
        const MAX_SPLITTERS: usize = 256;
        let (split, count, after) = (1..=MAX_SPLITTERS)
            .find_map(|m| {
                let s = insert_splitter(c, 0, m).ok()?;
                let after = cusp_profile(&s).len();
                (after >= k).then_some((s, m, after))
            })
            .ok_or_else(|| Error::NotFound(format!("{MAX_SPLITTERS} splitters do not reach {k} cusps")))?;
        log.push(Move {
            op: "split",
            edge: 0,
            count,
            n_before: c.n(),
            n_after: split.n(),
            cusps_before: cusps,
            cusps_after: after,
        });
        current = split;
        cusps = after;
    }
    while cusps > k {
        let (next, cert) = insert_flower(&current, None)?;
        log.push(cert.to_move(current.n()));
        current = next;
        cusps -= 1;
    }
    Ok((current, log))
}

/// Net number of forward minus backward crossings of pairing `edge` by `cycle`.
pub fn winding(c: &Cubulation, cycle: &FaceCycle, edge: usize) -> i64 {
    let p = c.pairings()[edge];
    cycle
        .squares
        .iter()
        .map(|&(_, exit)| i64::from(exit == p.source) - i64::from(exit == p.target))
        .sum()
}

/// First pairing that every cycle crosses equally often in both directions.
pub fn balanced_edge(c: &Cubulation) -> Option<usize> {
    let cycles = trace_cycles(c);
    (0..c.pairings().len()).find(|&e| cycles.iter().all(|cy| winding(c, cy, e) == 0))
}

/// The `copies`-fold cyclic cover: `copies` copies of `c`, with pairing
/// `edge` rethreaded from copy `t` to copy `t+1` mod `copies`.
pub fn cyclic_unroll(c: &Cubulation, edge: usize, copies: usize) -> Result<Cubulation> {
    c.require_complete()?;
    check_edge(c, edge)?;
    if copies == 0 {
        return Err(Error::Invalid("the number of copies must be positive".into()));
    }
    let n = c.n();
    let shift = |f: Facet, t: usize| Facet { cube: f.cube + t * n, ..f };
    let mut pairings = Vec::with_capacity(copies * c.pairings().len());
    for t in 0..copies {
        for (i, p) in c.pairings().iter().enumerate() {
            let next = if i == edge { (t + 1) % copies } else { t };
            pairings.push(Pairing::new(shift(p.source, t), shift(p.target, next), p.map));
        }
    }
    Ok(Cubulation::new(n * copies, pairings, []))
}
