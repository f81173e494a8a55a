//! Canonical forms of cubulations up to relabeling.
//!
//! Two cubulations are equivalent when one is obtained from the other by
//! renumbering the hypercubes and applying an isometry to each. A relabeling
//! of a connected cubulation is pinned down by a root hypercube and the
//! isometry applied to it: a breadth-first walk from the root numbers the
//! other hypercubes in discovery order and chooses each new frame so that the
//! gluing it was discovered through becomes a plain translation. Running this
//! from every root and every root frame (`384·n` trials) and keeping the
//! smallest token sequence gives an exact canonical form for every `n`.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::cubulation::{Cubulation, GlueTable, Pairing, Relabeling};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hypercube::{intrinsic_map, Facet};
use crate::tables::{tables, ORDER};

const OPEN: u16 = u16::MAX;

/// Byte string identifying an equivalence class; compares like its hex form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Result<CanonicalForm> {
        let bad = || Error::Invalid(format!("`{s}` is not a canonical form"));
        if !s.len().is_multiple_of(2) || s.len() < 4 {
            return Err(bad());
        }
        let bytes = (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(s.get(i..i + 2).ok_or_else(bad)?, 16).map_err(|_| bad()))
            .collect::<Result<Vec<u8>>>()?;
        let form = CanonicalForm(bytes);
        form.decode().map_err(|_| bad())?;
        Ok(form)
    }

    pub fn n(&self) -> usize {
        u16::from_be_bytes([self.0[0], self.0[1]]) as usize
    }

    /// The canonically labeled representative.
    pub fn decode(&self) -> Result<Cubulation> {
        let bad = |why: &str| Error::Invalid(format!("corrupt canonical form: {why}"));
        let n = self.n();
        if n == 0 || self.0.len() != 2 + 32 * n {
            return Err(bad("length"));
        }
        let t = tables();
        let word = |i: usize| u16::from_be_bytes([self.0[i], self.0[i + 1]]);
        let mut pairings = Vec::new();
        let mut open = Vec::new();
        for cube in 0..n {
            for f in 0..8 {
                let at = 2 + 32 * cube + 4 * f;
                let (partner, code) = (word(at), word(at + 2));
                let source = Facet::from_local(cube, f);
                if partner == OPEN {
                    open.push(source);
                    continue;
                }
                if partner as usize >= n || code as usize >= ORDER {
                    return Err(bad("token out of range"));
                }
                let target = Facet::from_local(partner as usize, t.glue_facet(code, f));
                if source < target {
                    pairings.push(Pairing::new(source, target, intrinsic_map(source, target, t.elem(code))));
                }
            }
        }
        let c = Cubulation::new(n, pairings, open);
        if !c.validate().is_empty() {
            return Err(bad("not a cubulation"));
        }
        Ok(c)
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl FromStr for CanonicalForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CanonicalForm::from_hex(s)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CanonOptions {
    /// Maximum number of `(root, frame)` trials.
    pub budget: u64,
    pub exec: Exec,
}

impl Default for CanonOptions {
    fn default() -> Self {
        CanonOptions { budget: 10_000_000, exec: Exec::Sequential }
    }
}

pub fn canonical_form(c: &Cubulation) -> Result<CanonicalForm> {
    canonical_form_with(c, &CanonOptions::default())
}

pub fn canonical_form_with(c: &Cubulation, opts: &CanonOptions) -> Result<CanonicalForm> {
    canonical_relabeling(c, opts).map(|(form, _)| form)
}

pub fn are_equivalent(a: &Cubulation, b: &Cubulation) -> Result<bool> {
    if a.n() != b.n() {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

/// The canonical form together with a relabeling realizing it.
pub fn canonical_relabeling(c: &Cubulation, opts: &CanonOptions) -> Result<(CanonicalForm, Relabeling)> {
    let components = c.components().len();
    if components != 1 {
        return Err(Error::Disconnected { components });
    }
    let trials = ORDER as u64 * c.n() as u64;
    if trials > opts.budget {
        return Err(Error::Budget { needed: trials.into(), budget: opts.budget.into() });
    }
    let table = c.glue_table();
    let roots: Vec<usize> = (0..c.n()).collect();
    let per_root = opts.exec.map(&roots, |&root| {
        let mut best: Option<Trial> = None;
        for frame in 0..ORDER as u16 {
            run_trial(&table, root, frame, &mut best);
        }
        best.expect("at least one trial")
    });
    let best = per_root.into_iter().min_by(|a, b| a.tokens.cmp(&b.tokens)).expect("n >= 1");
    Ok((encode(c.n(), &best.tokens), best.relabeling()))
}

/// Canonical token sequence of a connected single-component table; used by the census.
pub(crate) fn canonical_tokens(table: &GlueTable) -> Vec<(u16, u16)> {
    let mut best: Option<Trial> = None;
    for root in 0..table.n {
        for frame in 0..ORDER as u16 {
            run_trial(table, root, frame, &mut best);
        }
    }
    best.expect("n >= 1").tokens
}

pub(crate) fn encode(n: usize, tokens: &[(u16, u16)]) -> CanonicalForm {
    let mut bytes = Vec::with_capacity(2 + 4 * tokens.len());
    bytes.extend_from_slice(&(n as u16).to_be_bytes());
    for &(partner, code) in tokens {
        bytes.extend_from_slice(&partner.to_be_bytes());
        bytes.extend_from_slice(&code.to_be_bytes());
    }
    CanonicalForm(bytes)
}

struct Trial {
    tokens: Vec<(u16, u16)>,
    /// Old hypercube index per new index.
    order: Vec<usize>,
    /// Frame code per old hypercube.
    frames: Vec<u16>,
}

impl Trial {
    fn relabeling(&self) -> Relabeling {
        let t = tables();
        let mut perm = vec![0; self.order.len()];
        for (new, &old) in self.order.iter().enumerate() {
            perm[old] = new;
        }
        Relabeling { perm, frames: self.frames.iter().map(|&g| *t.elem(g)).collect() }
    }
}

/// Runs one trial, replacing `best` if it comes out smaller.
fn run_trial(table: &GlueTable, root: usize, frame: u16, best: &mut Option<Trial>) {
    const UNSEEN: u16 = u16::MAX;
    let t = tables();
    let n = table.n;
    let mut frames = vec![UNSEEN; n];
    let mut new_index = vec![UNSEEN; n];
    let mut order = Vec::with_capacity(n);
    let mut tokens = Vec::with_capacity(8 * n);
    // while `tied`, tokens equal the prefix of the best so far
    let mut tied = best.is_some();

    frames[root] = frame;
    new_index[root] = 0;
    order.push(root);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let g = frames[u];
        let g_inv = t.inv(g);
        for new_f in 0..8 {
            let f = t.facet(g_inv, new_f);
            let token = match table.get(u, f) {
                None => (OPEN, 0),
                Some(slot) => {
                    let v = slot.cube as usize;
                    if frames[v] == UNSEEN {
                        frames[v] = t.mul(t.inv(slot.phi), g);
                        new_index[v] = order.len() as u16;
                        order.push(v);
                        queue.push_back(v);
                    }
                    (new_index[v], t.mul(t.mul(g_inv, slot.phi), frames[v]))
                }
            };
            if tied {
                let reference = best.as_ref().unwrap().tokens[tokens.len()];
                match token.cmp(&reference) {
                    std::cmp::Ordering::Greater => return,
                    std::cmp::Ordering::Less => tied = false,
                    std::cmp::Ordering::Equal => {}
                }
            }
            tokens.push(token);
        }
    }
    debug_assert_eq!(order.len(), n, "caller guarantees connectivity");
    if best.is_none() || !tied {
        *best = Some(Trial { tokens, order, frames });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::hypercube::SignedPerm4;

    #[test]
    fn decode_round_trip() {
        for c in [fixtures::example1(), fixtures::example2()] {
            let (form, g) = canonical_relabeling(&c, &CanonOptions::default()).unwrap();
            let decoded = form.decode().unwrap();
            assert_eq!(decoded, c.relabel(&g));
            assert_eq!(canonical_form(&decoded).unwrap(), form);
            assert_eq!(CanonicalForm::from_hex(&form.to_hex()).unwrap(), form);
        }
    }

    #[test]
    fn example1_is_already_canonical() {
        // translations everywhere give the all-zero code, the smallest possible
        let form = canonical_form(&fixtures::example1()).unwrap();
        assert_eq!(form.decode().unwrap(), fixtures::example1());
        assert_eq!(form.to_hex(), format!("0001{}", "00000000".repeat(8)));
    }

    #[test]
    fn examples_differ() {
        assert!(!are_equivalent(&fixtures::example1(), &fixtures::example2()).unwrap());
    }

    #[test]
    fn relabeled_copies_agree() {
        let c = fixtures::example2();
        let g = Relabeling {
            perm: vec![1, 0],
            frames: vec![SignedPerm4::new([3, -1, 4, 2]).unwrap(), SignedPerm4::new([-2, 1, -4, -3]).unwrap()],
        };
        assert!(are_equivalent(&c, &c.relabel(&g)).unwrap());
    }

    #[test]
    fn budget_and_connectivity_errors() {
        let opts = CanonOptions { budget: 100, ..Default::default() };
        assert!(matches!(canonical_form_with(&fixtures::example1(), &opts), Err(Error::Budget { .. })));
        let two = fixtures::example1().disjoint_union(&fixtures::example1());
        assert!(matches!(canonical_form(&two), Err(Error::Disconnected { components: 2 })));
    }

    #[test]
    fn malformed_hex_is_rejected() {
        assert!(CanonicalForm::from_hex("zz").is_err());
        assert!(CanonicalForm::from_hex("0001").is_err());
    }
}
