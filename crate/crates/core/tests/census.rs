//! Census regression for one hypercube, checked by orbit counting: summing
//! `384/|Aut|` over the classes must give the number of labeled cubulations,
//! which is counted here by brute force with a separate square tracer.

use std::collections::HashMap;
use std::thread;

use cubekit::census::{self, enumerate, perfect_matchings, SearchOptions, SearchSpec};
use cubekit::cycles::{cusp_profile, MonodromyClass};
use cubekit::tables::{code_of, tables, ORDER};
use cubekit::{canonical_form, Cubulation, Facet, Pairing, Relabeling, SignedPerm3, SignedPerm4};

const ONE_CUSP_CLASSES: usize = 15334;
const ORIENTABLE_CLASSES: usize = 96476;

/// Square centres: two coordinates `±1`, two zero.
fn squares() -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in a + 1..4 {
            for sa in [-1, 1] {
                for sb in [-1, 1] {
                    let mut v = [0; 4];
                    v[a] = sa;
                    v[b] = sb;
                    out.push(v);
                }
            }
        }
    }
    out
}

/// Image square and exit facet for each square of one facet.
type Transfer = [(u8, u8); 24];

/// A facet pair with its admissible (forward, backward) transfers.
type PairOptions = (usize, usize, Vec<(Transfer, Transfer)>);

fn facet_id(axis: usize, sign: i64) -> usize {
    2 * axis + usize::from(sign > 0)
}

/// For each square of `from`, the image square and the facet it leaves by.
fn transfer(from: Facet, to: Facet, m: &SignedPerm3, index: &HashMap<[i64; 4], usize>) -> Transfer {
    let sq = squares();
    let (a, b) = (from.axis.index() as usize - 1, to.axis.index() as usize - 1);
    let mut out = [(u8::MAX, u8::MAX); 24];
    for (i, x) in sq.iter().enumerate() {
        if x[a] != i64::from(from.sign) {
            continue;
        }
        let intrinsic: Vec<i64> = (0..4).filter(|&k| k != a).map(|k| x[k]).collect();
        let y = m.apply_vector([intrinsic[0], intrinsic[1], intrinsic[2]]);
        let mut z = [0i64; 4];
        let mut it = y.iter();
        for (k, slot) in z.iter_mut().enumerate() {
            *slot = if k == b { i64::from(to.sign) } else { *it.next().unwrap() };
        }
        let j = index[&z];
        let other = (0..4).find(|&k| k != b && z[k] != 0).unwrap();
        out[i] = (j as u8, facet_id(other, z[other]) as u8);
    }
    out
}

/// Number of orientable one-hypercube labelings whose squares form one cycle.
fn brute_force_one_cusp() -> u64 {
    let sq = squares();
    let index: HashMap<[i64; 4], usize> = sq.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let start_exit = {
        let x = sq[0];
        let k = (0..4).find(|&k| x[k] != 0).unwrap();
        facet_id(k, x[k])
    };
    let maps = SignedPerm3::all();
    let matchings = perfect_matchings(8);
    thread::scope(|s| {
        let handles: Vec<_> = matchings
            .iter()
            .map(|matching| {
                let index = &index;
                let maps = &maps;
                s.spawn(move || {
                    // per pair: the orientable maps as (forward, backward) transfers
                    let options: Vec<PairOptions> = matching
                        .iter()
                        .map(|&(f, g)| {
                            let (ff, gg) = (Facet::from_local(0, f), Facet::from_local(0, g));
                            let tr = maps
                                .iter()
                                .filter(|m| Pairing::new(ff, gg, **m).is_orientation_reversing())
                                .map(|m| (transfer(ff, gg, m, index), transfer(gg, ff, &m.inverse(), index)))
                                .collect::<Vec<_>>();
                            assert_eq!(tr.len(), 24);
                            (f, g, tr)
                        })
                        .collect();
                    let mut count = 0u64;
                    let mut table = [[(0u8, 0u8); 24]; 8];
                    let mut choice = [0usize; 4];
                    loop {
                        for (k, (f, g, tr)) in options.iter().enumerate() {
                            table[*f] = tr[choice[k]].0;
                            table[*g] = tr[choice[k]].1;
                        }
                        let (mut q, mut e, mut len) = (0usize, start_exit, 0);
                        loop {
                            let (q2, e2) = table[e][q];
                            len += 1;
                            if q2 == 0 {
                                break;
                            }
                            q = q2 as usize;
                            e = e2 as usize;
                        }
                        count += u64::from(len == 24);
                        let mut k = 0;
                        while k < 4 {
                            choice[k] += 1;
                            if choice[k] < 24 {
                                break;
                            }
                            choice[k] = 0;
                            k += 1;
                        }
                        if k == 4 {
                            return count;
                        }
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).sum()
    })
}

/// `(partner, code)` per local facet of a one-hypercube cubulation.
fn slots(c: &Cubulation) -> [(usize, u16); 8] {
    let t = tables();
    let mut out = [(0, 0); 8];
    for p in c.pairings() {
        let phi = code_of(&p.gluing());
        out[p.source.local()] = (p.target.local(), phi);
        out[p.target.local()] = (p.source.local(), t.inv(phi));
    }
    out
}

/// Isometries of the hypercube carrying `c` to itself.
fn automorphisms(c: &Cubulation) -> usize {
    let t = tables();
    let s = slots(c);
    (0..ORDER as u16)
        .filter(|&g| {
            let gi = t.inv(g);
            (0..8).all(|f| {
                let (partner, phi) = s[f];
                s[t.facet(g, f)] == (t.facet(g, partner), t.mul(t.mul(gi, phi), g))
            })
        })
        .count()
}

fn slow_automorphisms(c: &Cubulation) -> usize {
    SignedPerm4::all()
        .into_iter()
        .filter(|g| c.relabel(&Relabeling { perm: vec![0], frames: vec![*g] }) == *c)
        .count()
}

fn orbit_sum(entries: &[census::CensusEntry]) -> u64 {
    let chunks: Vec<&[census::CensusEntry]> = entries.chunks(entries.len().div_ceil(16).max(1)).collect();
    thread::scope(|s| {
        let hs: Vec<_> = chunks
            .into_iter()
            .map(|chunk| {
                s.spawn(move || chunk.iter().map(|e| (ORDER / automorphisms(&e.cubulation())) as u64).sum::<u64>())
            })
            .collect();
        hs.into_iter().map(|h| h.join().unwrap()).sum()
    })
}

#[test]
fn one_cusp_census() {
    let spec = SearchSpec::new(1).orientable().with_cusps(1);
    let entries = enumerate(&spec, &SearchOptions::default()).unwrap();
    assert_eq!(entries.len(), ONE_CUSP_CLASSES);

    // sorted, distinct, and each row is what it claims
    assert!(entries.windows(2).all(|w| w[0].form < w[1].form));
    for (i, e) in entries.iter().enumerate() {
        let c = e.cubulation();
        assert!(c.is_orientable());
        assert_eq!(cusp_profile(&c), vec![(24, MonodromyClass::Identity)]);
        assert_eq!(e.profile, vec![(24, MonodromyClass::Identity)]);
        if i % 97 == 0 {
            assert_eq!(canonical_form(&c).unwrap(), e.form);
            assert_eq!(automorphisms(&c), slow_automorphisms(&c));
        }
    }

    assert_eq!(orbit_sum(&entries), brute_force_one_cusp());
}

#[test]
fn orientable_census_covers_every_labeling() {
    let entries = enumerate(&SearchSpec::new(1).orientable(), &SearchOptions::default()).unwrap();
    assert_eq!(entries.len(), ORIENTABLE_CLASSES);
    // 105 matchings, 24 orientable maps per pair
    assert_eq!(orbit_sum(&entries), 105 * 24u64.pow(4));
    assert!(entries
        .iter()
        .all(|e| e.orientable && e.profile.iter().all(|(_, c)| c.is_orientation_preserving())));
    let mut by_cusps: HashMap<usize, usize> = HashMap::new();
    for e in &entries {
        *by_cusps.entry(e.profile.len()).or_default() += 1;
        assert_eq!(e.profile.iter().map(|(h, _)| h).sum::<usize>(), 24);
    }
    assert_eq!(by_cusps[&1], ONE_CUSP_CLASSES);
    assert_eq!(by_cusps.keys().max(), Some(&13));
}

#[test]
fn census_file_round_trip() {
    let spec = SearchSpec::new(1).orientable().with_cusps(2).with_monodromy(vec![MonodromyClass::MinusIdentity]);
    let entries = enumerate(&spec, &SearchOptions::default()).unwrap();
    assert!(!entries.is_empty());
    let dir = std::env::temp_dir().join(format!("cubekit-census-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("two.tsv");
    census::census_write(&entries, &path).unwrap();
    assert_eq!(census::census_read(&path).unwrap(), entries);
    std::fs::remove_dir_all(&dir).unwrap();
}
