//! Exhaustive search over small cubulations.
//!
//! Candidates are a perfect matching of the `8n` facets plus one gluing per
//! matched pair. Maps are assigned pair by pair in ascending code order, and
//! after each assignment the cycles already closed are checked against the
//! cusp filters: closed cycles never change later, so a branch with too many
//! of them, or with a forbidden monodromy, is cut.
//!
//! For one hypercube the relabeling group is the 384-element group of the
//! hypercube itself. Matchings are then taken up to that group, and a leaf is
//! kept only if no symmetry of its matching carries it to a smaller leaf, so
//! every class is produced exactly once. Larger `n` fall back to dedup by
//! canonical form.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs;
use std::path::Path;

use crate::canon::{canonical_tokens, encode, CanonicalForm};
use crate::cubulation::{Cubulation, GlueTable, Pairing, Slot};
use crate::cycles::{class_of, walk, MonodromyClass, Walk};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hypercube::{intrinsic_map, Facet};
use crate::tables::{tables, ORDER};

pub const CENSUS_HEADER: &str = "#cubekit-census v1";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MatchingPattern {
    #[default]
    Any,
    /// Every facet glued to its opposite in the same hypercube.
    OppositeFacets,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub n: usize,
    pub orientable_only: bool,
    pub pattern: MatchingPattern,
    pub cusps: Option<usize>,
    /// Required multiset of cusp classes. A single class together with
    /// `cusps = k` means all `k` cusps have that class.
    pub monodromy: Option<Vec<MonodromyClass>>,
    pub limit: Option<usize>,
}

impl SearchSpec {
    pub fn new(n: usize) -> SearchSpec {
        SearchSpec { n, orientable_only: false, pattern: MatchingPattern::Any, cusps: None, monodromy: None, limit: None }
    }

    pub fn orientable(mut self) -> Self {
        self.orientable_only = true;
        self
    }

    pub fn with_cusps(mut self, k: usize) -> Self {
        self.cusps = Some(k);
        self
    }

    pub fn with_monodromy(mut self, classes: Vec<MonodromyClass>) -> Self {
        self.monodromy = Some(classes);
        self
    }

    pub fn with_pattern(mut self, pattern: MatchingPattern) -> Self {
        self.pattern = pattern;
        self
    }

    /// Resolved `(cusp count, sorted class multiset)` filters.
    fn filters(&self) -> Result<(Option<usize>, Option<Vec<MonodromyClass>>)> {
        let mut profile = self.monodromy.clone();
        if let (Some(k), Some(p)) = (self.cusps, profile.as_mut()) {
            if p.len() == 1 && k > 1 {
                *p = vec![p[0]; k];
            } else if p.len() != k {
                return Err(Error::Invalid(format!("{} monodromy classes given for {k} cusps", p.len())));
            }
        }
        if let Some(p) = profile.as_mut() {
            p.sort();
        }
        Ok((self.cusps.or(profile.as_ref().map(Vec::len)), profile))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Largest raw candidate count (matchings × maps) the search may take on.
    pub budget: u128,
    pub exec: Exec,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: 100_000_000, exec: Exec::Parallel }
    }
}

/// One equivalence class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusEntry {
    pub form: CanonicalForm,
    pub n: usize,
    pub orientable: bool,
    /// `(h, class)` sorted.
    pub profile: Vec<(usize, MonodromyClass)>,
}

impl CensusEntry {
    pub fn cubulation(&self) -> Cubulation {
        self.form.decode().expect("census entries hold valid forms")
    }

    pub fn profile_string(&self) -> String {
        self.profile.iter().map(|(h, c)| format!("{h}:{c}")).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for CensusEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}\t{}", self.form, self.n, self.orientable, self.profile_string())
    }
}

/// A matching as sorted pairs of global facet indices `8·cube + local`.
pub type Matching = Vec<(usize, usize)>;

/// Leaf callback of the search; returning `false` stops it.
type Emit<'a> = &'a mut dyn FnMut(&State, Vec<(usize, MonodromyClass)>) -> bool;

/// All perfect matchings of `0..2m`, in lexicographic order.
pub fn perfect_matchings(points: usize) -> Vec<Matching> {
    fn rec(free: &mut Vec<usize>, current: &mut Matching, out: &mut Vec<Matching>) {
        if free.is_empty() {
            out.push(current.clone());
            return;
        }
        let a = free.remove(0);
        for i in 0..free.len() {
            let b = free.remove(i);
            current.push((a, b));
            rec(free, current, out);
            current.pop();
            free.insert(i, b);
        }
        free.insert(0, a);
    }
    let mut out = Vec::new();
    rec(&mut (0..points).collect(), &mut Vec::new(), &mut out);
    out
}

/// `(2m−1)!!`, saturating.
pub fn matching_count(points: usize) -> u128 {
    (1..points as u128).step_by(2).fold(1u128, |acc, k| acc.saturating_mul(k))
}

fn image_of_matching(g: u16, m: &Matching) -> Matching {
    let t = tables();
    let mut out: Matching = m
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (t.facet(g, a), t.facet(g, b));
            (x.min(y), x.max(y))
        })
        .collect();
    out.sort();
    out
}

/// Representatives of the one-hypercube matchings up to symmetry: the
/// lexicographically smallest matching of each orbit, in increasing order.
pub fn matching_orbit_representatives() -> Vec<Matching> {
    let mut reps: Vec<Matching> = perfect_matchings(8)
        .into_iter()
        .map(|m| (0..ORDER as u16).map(|g| image_of_matching(g, &m)).min().unwrap())
        .collect();
    reps.sort();
    reps.dedup();
    reps
}

fn is_opposite_matching(m: &Matching) -> bool {
    m.iter().all(|&(a, b)| b == a + 1 && a % 2 == 0)
}

fn matching_is_connected(n: usize, m: &Matching) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for &(a, b) in m {
        let (ra, rb) = (find(&mut parent, a / 8), find(&mut parent, b / 8));
        parent[ra] = rb;
    }
    (0..n).all(|v| find(&mut parent, v) == find(&mut parent, 0))
}

/// Gluing codes taking local facet `a` onto local facet `b`, ascending.
fn codes_between(a: usize, b: usize, orientable: bool) -> Vec<u16> {
    let t = tables();
    (0..ORDER as u16)
        .filter(|&g| t.glue_facet(g, a) == b && (!orientable || t.det(g) == 1))
        .collect()
}

/// Symmetry of a one-hypercube matching, acting on its pair list.
struct PairAction {
    g: u16,
    g_inv: u16,
    /// `target[i]`: position of the image of pair `i`.
    target: [usize; 4],
    /// Image pair runs the other way.
    reversed: [bool; 4],
}

fn stabilizer(m: &Matching) -> Vec<PairAction> {
    let t = tables();
    (1..ORDER as u16)
        .filter(|&g| image_of_matching(g, m) == *m)
        .map(|g| {
            let mut target = [0; 4];
            let mut reversed = [false; 4];
            for (i, &(a, b)) in m.iter().enumerate() {
                let (x, y) = (t.facet(g, a), t.facet(g, b));
                target[i] = m.iter().position(|&p| p == (x.min(y), x.max(y))).unwrap();
                reversed[i] = x > y;
            }
            PairAction { g, g_inv: t.inv(g), target, reversed }
        })
        .collect()
}

/// Whether no symmetry maps the assignment to a lexicographically smaller one.
fn is_orbit_minimal(codes: &[u16], stab: &[PairAction]) -> bool {
    let t = tables();
    stab.iter().all(|s| {
        let mut image = [0u16; 4];
        for i in 0..4 {
            let conj = t.mul(t.mul(s.g_inv, codes[i]), s.g);
            image[s.target[i]] = if s.reversed[i] { t.inv(conj) } else { conj };
        }
        image.as_slice() >= codes
    })
}

/// The search over one matching.
struct Job<'a> {
    n: usize,
    matching: &'a Matching,
    choices: Vec<Vec<u16>>,
    cusps: Option<usize>,
    profile: Option<&'a [MonodromyClass]>,
    stab: Option<&'a [PairAction]>,
}

struct State {
    slots: Vec<Option<(usize, u16)>>,
    codes: Vec<u16>,
    visited: Vec<bool>,
}

impl<'a> Job<'a> {
    fn state(&self) -> State {
        State {
            slots: vec![None; 8 * self.n],
            codes: vec![0; self.matching.len()],
            visited: vec![false; 24 * self.n],
        }
    }

    fn assign(&self, st: &mut State, i: usize, code: u16) {
        let (a, b) = self.matching[i];
        st.slots[a] = Some((b / 8, code));
        st.slots[b] = Some((a / 8, tables().inv(code)));
        st.codes[i] = code;
    }

    fn unassign(&self, st: &mut State, i: usize) {
        let (a, b) = self.matching[i];
        st.slots[a] = None;
        st.slots[b] = None;
    }

    /// Closed cycles so far, or `None` if the branch cannot meet the filters.
    fn closed_cycles(&self, st: &mut State, complete: bool) -> Option<Vec<(usize, MonodromyClass)>> {
        let t = tables();
        st.visited.iter_mut().for_each(|v| *v = false);
        let slots = &st.slots;
        let slot = |c: usize, f: usize| slots[8 * c + f];
        let mut closed = Vec::new();
        let mut covered = 0;
        for cube in 0..self.n {
            for q in 0..24 {
                if st.visited[24 * cube + q] {
                    continue;
                }
                let visited = &mut st.visited;
                let end = walk(slot, cube, q, t.square_facets(q)[0], |c, s, _| visited[24 * c + s] = true);
                if let Walk::Closed { len, a } = end {
                    covered += len;
                    closed.push((len, class_of(q, a)));
                    if let Some(k) = self.cusps {
                        if closed.len() > k {
                            return None;
                        }
                    }
                }
            }
        }
        if let Some(k) = self.cusps {
            if closed.len() == k && covered < 24 * self.n {
                return None;
            }
            if complete && closed.len() != k {
                return None;
            }
        }
        if let Some(want) = self.profile {
            let mut have: Vec<MonodromyClass> = closed.iter().map(|&(_, c)| c).collect();
            have.sort();
            if !is_sub_multiset(&have, want) || (complete && have != want) {
                return None;
            }
        }
        Some(closed)
    }

    /// Depth-first over pairs `i..`; `emit` returns `true` to stop.
    fn dfs(&self, st: &mut State, i: usize, emit: Emit<'_>) -> bool {
        let complete = i == self.matching.len();
        let Some(closed) = self.closed_cycles(st, complete) else {
            return false;
        };
        if complete {
            if let Some(stab) = self.stab {
                if !is_orbit_minimal(&st.codes, stab) {
                    return false;
                }
            }
            return emit(st, closed);
        }
        for k in 0..self.choices[i].len() {
            let code = self.choices[i][k];
            self.assign(st, i, code);
            let stop = self.dfs(st, i + 1, emit);
            self.unassign(st, i);
            if stop {
                return true;
            }
        }
        false
    }
}

fn is_sub_multiset(have: &[MonodromyClass], want: &[MonodromyClass]) -> bool {
    let mut j = 0;
    for &c in have {
        while j < want.len() && want[j] < c {
            j += 1;
        }
        if j == want.len() || want[j] != c {
            return false;
        }
        j += 1;
    }
    true
}

fn cubulation_of(n: usize, matching: &Matching, codes: &[u16]) -> Cubulation {
    let t = tables();
    let pairings = matching.iter().zip(codes).map(|(&(a, b), &code)| {
        let (s, d) = (Facet::from_local(a / 8, a % 8), Facet::from_local(b / 8, b % 8));
        Pairing::new(s, d, intrinsic_map(s, d, t.elem(code)))
    });
    Cubulation::new(n, pairings, [])
}

fn table_of(n: usize, st: &State, matching: &Matching) -> GlueTable {
    let mut slots = vec![None; 8 * n];
    for (idx, &(a, b)) in matching.iter().enumerate() {
        let code = st.codes[idx];
        slots[a] = Some(Slot { cube: (b / 8) as u32, facet: (b % 8) as u8, phi: code, pairing: idx as u32, forward: true });
        slots[b] = Some(Slot {
            cube: (a / 8) as u32,
            facet: (a % 8) as u8,
            phi: tables().inv(code),
            pairing: idx as u32,
            forward: false,
        });
    }
    GlueTable { n, slots }
}

/// Matchings to search with their symmetry groups, when used.
struct Plan {
    matchings: Vec<Matching>,
    stabilizers: Vec<Option<Vec<PairAction>>>,
    orientable: bool,
}

fn plan(spec: &SearchSpec, opts: &SearchOptions, reduce: bool) -> Result<Plan> {
    if spec.n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    let per_pair: u128 = if spec.orientable_only { 24 } else { 48 };
    let maps = per_pair.saturating_pow(4 * spec.n as u32);
    let matchings = match spec.pattern {
        MatchingPattern::Any => matching_count(8 * spec.n),
        MatchingPattern::OppositeFacets => 1,
    };
    let raw = matchings.saturating_mul(maps);
    if raw > opts.budget {
        return Err(Error::Budget { needed: raw, budget: opts.budget });
    }
    let opposite: Matching = (0..4 * spec.n).map(|i| (2 * i, 2 * i + 1)).collect();
    let (matchings, stabilizers) = if spec.n == 1 && reduce {
        let reps: Vec<Matching> = match spec.pattern {
            MatchingPattern::Any => matching_orbit_representatives(),
            MatchingPattern::OppositeFacets => vec![opposite],
        };
        let stabs = reps.iter().map(|m| Some(stabilizer(m))).collect();
        (reps, stabs)
    } else {
        let all: Vec<Matching> = match spec.pattern {
            MatchingPattern::Any => perfect_matchings(8 * spec.n)
                .into_iter()
                .filter(|m| spec.n == 1 || matching_is_connected(spec.n, m))
                .collect(),
            // one component per hypercube unless n = 1
            MatchingPattern::OppositeFacets if spec.n == 1 => vec![opposite],
            MatchingPattern::OppositeFacets => Vec::new(),
        };
        let stabs = all.iter().map(|_| None).collect();
        (all, stabs)
    };
    debug_assert!(spec.pattern != MatchingPattern::OppositeFacets || matchings.iter().all(is_opposite_matching));
    Ok(Plan { matchings, stabilizers, orientable: spec.orientable_only })
}

fn job<'a>(
    spec: &SearchSpec,
    plan: &'a Plan,
    index: usize,
    profile: Option<&'a [MonodromyClass]>,
    cusps: Option<usize>,
) -> Job<'a> {
    let matching = &plan.matchings[index];
    Job {
        n: spec.n,
        matching,
        choices: matching.iter().map(|&(a, b)| codes_between(a % 8, b % 8, plan.orientable)).collect(),
        cusps,
        profile,
        stab: plan.stabilizers[index].as_deref(),
    }
}

/// Every equivalence class meeting `spec`, sorted by canonical form.
pub fn enumerate(spec: &SearchSpec, opts: &SearchOptions) -> Result<Vec<CensusEntry>> {
    let (cusps, profile) = spec.filters()?;
    let plan = plan(spec, opts, true)?;
    // work items: (matching, code of its first pair)
    let mut items = Vec::new();
    for m in 0..plan.matchings.len() {
        let first = &plan.matchings[m][0];
        for code in codes_between(first.0 % 8, first.1 % 8, plan.orientable) {
            items.push((m, code));
        }
    }
    let found: Vec<Vec<CensusEntry>> = opts.exec.map(&items, |&(m, code)| {
        let job = job(spec, &plan, m, profile.as_deref(), cusps);
        let mut st = job.state();
        let mut out = Vec::new();
        job.assign(&mut st, 0, code);
        job.dfs(&mut st, 1, &mut |st, closed| {
            let table = table_of(spec.n, st, job.matching);
            let mut profile = closed;
            profile.sort();
            out.push(CensusEntry {
                form: encode(spec.n, &canonical_tokens(&table)),
                n: spec.n,
                orientable: plan.orientable || cubulation_of(spec.n, job.matching, &st.codes).is_orientable(),
                profile,
            });
            false
        });
        out
    });
    let mut merged: BTreeMap<CanonicalForm, CensusEntry> = BTreeMap::new();
    for entry in found.into_iter().flatten() {
        merged.entry(entry.form.clone()).or_insert(entry);
    }
    let mut entries: Vec<CensusEntry> = merged.into_values().collect();
    if let Some(limit) = spec.limit {
        entries.truncate(limit);
    }
    Ok(entries)
}

/// The first candidate meeting `spec`, matchings and maps in lexicographic order.
pub fn first_match(spec: &SearchSpec, opts: &SearchOptions) -> Result<Option<Cubulation>> {
    let (cusps, profile) = spec.filters()?;
    let plan = plan(spec, opts, false)?;
    let mut items = Vec::new();
    for m in 0..plan.matchings.len() {
        let first = &plan.matchings[m][0];
        for code in codes_between(first.0 % 8, first.1 % 8, plan.orientable) {
            items.push((m, code));
        }
    }
    Ok(opts.exec.find_map_first(&items, |&(m, code)| {
        let job = job(spec, &plan, m, profile.as_deref(), cusps);
        let mut st = job.state();
        let mut hit = None;
        job.assign(&mut st, 0, code);
        job.dfs(&mut st, 1, &mut |st, _| {
            hit = Some(cubulation_of(spec.n, job.matching, &st.codes));
            true
        });
        hit
    }))
}

/// The first orientable one-hypercube cubulation with a single cusp of class `I`.
pub fn find_one_cusp_seed(opts: &SearchOptions) -> Result<Cubulation> {
    let spec = SearchSpec::new(1).orientable().with_cusps(1).with_monodromy(vec![MonodromyClass::Identity]);
    first_match(&spec, opts)?.ok_or_else(|| Error::NotFound("no one-cusp cubulation with one hypercube".into()))
}

/// Orientable one-hypercube cubulations with two cusps of class `R4`, and
/// with two cusps of class `−I`, in that order.
pub fn find_two_cusp_examples(opts: &SearchOptions) -> Result<(Cubulation, Cubulation)> {
    let find = |class: MonodromyClass| {
        let spec = SearchSpec::new(1).orientable().with_cusps(2).with_monodromy(vec![class; 2]);
        first_match(&spec, opts)?
            .ok_or_else(|| Error::NotFound(format!("no two-cusp cubulation with monodromy {class}")))
    };
    Ok((find(MonodromyClass::Rotation4)?, find(MonodromyClass::MinusIdentity)?))
}

pub fn census_to_string(entries: &[CensusEntry]) -> Result<String> {
    let mut sorted: Vec<&CensusEntry> = entries.iter().collect();
    sorted.sort_by(|a, b| a.form.cmp(&b.form));
    let mut seen = HashSet::new();
    let mut out = format!("{CENSUS_HEADER}\n");
    for e in sorted {
        if !seen.insert(&e.form) {
            return Err(Error::Census(format!("duplicate canonical form {}", e.form)));
        }
        out.push_str(&e.to_string());
        out.push('\n');
    }
    Ok(out)
}

pub fn census_from_str(text: &str) -> Result<Vec<CensusEntry>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(CENSUS_HEADER) => {}
        Some(h) if h.starts_with("#cubekit-census") => {
            return Err(Error::Census(format!("unsupported format version `{h}`")));
        }
        _ => return Err(Error::Census("missing `#cubekit-census v1` header".into())),
    }
    let mut entries: Vec<CensusEntry> = Vec::new();
    for (i, line) in lines.enumerate() {
        let bad = |why: &str| Error::Census(format!("line {}: {why}", i + 2));
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        let [form, n, orientable, profile] = cols[..] else {
            return Err(bad("expected 4 tab-separated columns"));
        };
        let form = CanonicalForm::from_hex(form).map_err(|_| bad("bad canonical form"))?;
        let n: usize = n.parse().map_err(|_| bad("bad n"))?;
        if n != form.n() {
            return Err(bad("n disagrees with the canonical form"));
        }
        let orientable = match orientable {
            "true" => true,
            "false" => false,
            _ => return Err(bad("orientable must be true or false")),
        };
        let profile = profile
            .split(',')
            .filter(|p| !p.is_empty())
            .map(|p| {
                let (h, c) = p.split_once(':').ok_or_else(|| bad("cusp must be h:class"))?;
                Ok((h.parse().map_err(|_| bad("bad h"))?, c.parse().map_err(|_| bad("bad class"))?))
            })
            .collect::<Result<Vec<_>>>()?;
        if entries.last().is_some_and(|prev| prev.form >= form) {
            return Err(bad("entries must be sorted and distinct"));
        }
        entries.push(CensusEntry { form, n, orientable, profile });
    }
    Ok(entries)
}

pub fn census_write(entries: &[CensusEntry], path: &Path) -> Result<()> {
    fs::write(path, census_to_string(entries)?)?;
    Ok(())
}

pub fn census_read(path: &Path) -> Result<Vec<CensusEntry>> {
    census_from_str(&fs::read_to_string(path)?)
}
