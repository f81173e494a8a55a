//! Precomputed action tables for the 384-element group of the 4-cube.
//!
//! Elements are addressed by their position in [`SignedPerm4::all`], so the
//! hot loops of tracing, canonicalization and census search work on `u16`
//! codes instead of arrays.

use std::sync::OnceLock;

use crate::hypercube::{act_on_facet, act_on_square, Facet, SignedPerm4, SquareFace};

pub const ORDER: usize = 384;

pub struct Tables {
    pub elems: Vec<SignedPerm4>,
    /// `mul[a * ORDER + b]` is `a` followed by `b`.
    mul: Vec<u16>,
    inv: Vec<u16>,
    det: Vec<i8>,
    /// Linear action on local facets.
    facet: Vec<[u8; 8]>,
    /// Linear action on local squares.
    square: Vec<[u8; 24]>,
    /// `other[q][f]`: the other facet of square `q`, or `NONE` when `q ⊄ f`.
    other: [[u8; 8]; 24],
    /// Facets containing each square, smaller first.
    square_facets: [[u8; 2]; 24],
    /// Square with its sign on `axis` forced: `set_sign[q][2*(axis-1)+(s>0)]`.
    set_sign: [[u8; 8]; 24],
}

pub const NONE: u8 = u8::MAX;

static TABLES: OnceLock<Tables> = OnceLock::new();

pub fn tables() -> &'static Tables {
    TABLES.get_or_init(Tables::build)
}

/// Position of an element in [`SignedPerm4::all`].
pub fn code_of(g: &SignedPerm4) -> u16 {
    let image = g.image();
    let perm: [usize; 4] = std::array::from_fn(|k| image[k].unsigned_abs() as usize - 1);
    // lexicographic rank via Lehmer code
    let mut rank = 0usize;
    for i in 0..4 {
        let smaller = (i + 1..4).filter(|&j| perm[j] < perm[i]).count();
        rank = rank * (4 - i) + smaller;
    }
    let mask = (0..4).filter(|&k| image[k] < 0).fold(0usize, |m, k| m | (1 << k));
    (rank * 16 + mask) as u16
}

impl Tables {
    fn build() -> Tables {
        let elems = SignedPerm4::all();
        debug_assert!(elems.iter().enumerate().all(|(i, g)| code_of(g) as usize == i));
        let mut mul = vec![0u16; ORDER * ORDER];
        for (a, ga) in elems.iter().enumerate() {
            for (b, gb) in elems.iter().enumerate() {
                mul[a * ORDER + b] = code_of(&ga.then(gb));
            }
        }
        let inv = elems.iter().map(|g| code_of(&g.inverse())).collect();
        let det = elems.iter().map(|g| g.det()).collect();
        let facet = elems
            .iter()
            .map(|g| std::array::from_fn(|f| act_on_facet(g, Facet::from_local(0, f), 0).local() as u8))
            .collect();
        let square = elems
            .iter()
            .map(|g| std::array::from_fn(|q| act_on_square(g, SquareFace::from_local(0, q), 0).local() as u8))
            .collect();
        let mut other = [[NONE; 8]; 24];
        let mut square_facets = [[0u8; 2]; 24];
        let mut set_sign = [[0u8; 8]; 24];
        for q in 0..24 {
            let sq = SquareFace::from_local(0, q);
            let [f1, f2] = sq.facets();
            square_facets[q] = [f1.local() as u8, f2.local() as u8];
            other[q][f1.local()] = f2.local() as u8;
            other[q][f2.local()] = f1.local() as u8;
            for f in 0..8 {
                let target = Facet::from_local(0, f);
                let mut s = sq;
                if s.axes.0 == target.axis {
                    s.signs.0 = target.sign;
                } else if s.axes.1 == target.axis {
                    s.signs.1 = target.sign;
                }
                set_sign[q][f] = s.local() as u8;
            }
        }
        Tables { elems, mul, inv, det, facet, square, other, square_facets, set_sign }
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * ORDER + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        self.inv[a as usize]
    }

    #[inline]
    pub fn det(&self, a: u16) -> i8 {
        self.det[a as usize]
    }

    #[inline]
    pub fn facet(&self, g: u16, f: usize) -> usize {
        self.facet[g as usize][f] as usize
    }

    /// Local facet that gluing map `phi` glues local facet `f` onto.
    #[inline]
    pub fn glue_facet(&self, phi: u16, f: usize) -> usize {
        (self.facet[phi as usize][f] ^ 1) as usize
    }

    #[inline]
    pub fn square(&self, g: u16, q: usize) -> usize {
        self.square[g as usize][q] as usize
    }

    /// Square reached by gluing square `q` (lying in `f`) through `phi`.
    #[inline]
    pub fn glue_square(&self, phi: u16, f: usize, q: usize) -> usize {
        let target = self.glue_facet(phi, f);
        self.set_sign[self.square(phi, q)][target] as usize
    }

    #[inline]
    pub fn other_facet(&self, q: usize, f: usize) -> usize {
        let o = self.other[q][f];
        debug_assert!(o != NONE, "square {q} not in facet {f}");
        o as usize
    }

    #[inline]
    pub fn square_facets(&self, q: usize) -> [usize; 2] {
        let [a, b] = self.square_facets[q];
        [a as usize, b as usize]
    }

    pub fn elem(&self, code: u16) -> &SignedPerm4 {
        &self.elems[code as usize]
    }
}
