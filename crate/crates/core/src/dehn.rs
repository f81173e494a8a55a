//! Dehn filling of 3-torus cusps.
//!
//! A slope on the cusp of a cycle of `h` squares is a coprime triple
//! `(p, q, r)` in the basis given by the sides of the `2 × 2 × h` box; its
//! length is `ℓ = √((2p)² + (2q)² + (hr)²)`. Filling every cusp along slopes
//! with `ℓ ≥ 2π` yields a manifold with a non-positively curved metric.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::cubulation::Cubulation;
use crate::cycles::{invariant_report, MonodromyClass};
use crate::error::{Error, Result};

/// Volume of the regular ideal hyperbolic 4-simplex.
pub const V4_DEFAULT: f64 = 0.107_08;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FillingSlope {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    /// Length of the cusp's third side.
    pub h: u64,
}

impl FillingSlope {
    pub fn new(p: i64, q: i64, r: i64, h: u64) -> Result<FillingSlope> {
        let g = p.gcd(&q).gcd(&r);
        if g != 1 {
            return Err(Error::Invalid(format!("slope ({p},{q},{r}) is not primitive (gcd {g})")));
        }
        if h == 0 {
            return Err(Error::Invalid("cusp length must be positive".into()));
        }
        Ok(FillingSlope { p, q, r, h })
    }

    /// `ℓ² = 4p² + 4q² + h²r²`.
    pub fn length_sq(&self) -> u128 {
        let sq = |x: i128| (x * x) as u128;
        4 * sq(self.p.into()) + 4 * sq(self.q.into()) + sq(i128::from(self.h) * i128::from(self.r))
    }

    pub fn length(&self) -> f64 {
        (self.length_sq() as f64).sqrt()
    }

    pub fn passes(&self, threshold: Threshold) -> bool {
        // ℓ² is an integer and 4π² is irrational, so both tests agree
        let bound = 4.0 * PI * PI;
        let l2 = self.length_sq() as f64;
        match threshold {
            Threshold::Weak => l2 >= bound,
            Threshold::Strict => l2 > bound,
        }
    }
}

/// `p,q,r`
impl FromStr for FillingSlope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<i64> = s
            .split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Invalid(format!("`{s}` is not an integer triple p,q,r")))?;
        match parts[..] {
            // h is attached once the cusp is known
            [p, q, r] => FillingSlope::new(p, q, r, 1),
            _ => Err(Error::Invalid(format!("`{s}` is not an integer triple p,q,r"))),
        }
    }
}

/// `ℓ ≥ 2π` or `ℓ > 2π`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Threshold {
    #[default]
    Weak,
    Strict,
}

impl FromStr for Threshold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weak" => Ok(Threshold::Weak),
            "strict" => Ok(Threshold::Strict),
            _ => Err(Error::Invalid(format!("threshold must be `weak` or `strict`, got `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FilledInvariants {
    pub chi: i64,
    pub signature: i64,
    /// `Vol(M)/v₄`, an upper bound for the simplicial volume after filling.
    pub norm_bound: f64,
    pub v4: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SlopeCheck {
    pub slope: FillingSlope,
    pub length_sq: u128,
    pub length: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FilledReport {
    pub slopes: Vec<SlopeCheck>,
    pub all_pass_2pi: bool,
    pub threshold: Threshold,
    pub invariants: FilledInvariants,
}

impl fmt::Display for FilledReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.slopes {
            writeln!(
                f,
                "{}\t{},{},{}\t{}\t{:.6}\t{}",
                s.slope.h,
                s.slope.p,
                s.slope.q,
                s.slope.r,
                s.length_sq,
                s.length,
                if s.pass { "pass" } else { "fail" }
            )?;
        }
        let i = &self.invariants;
        writeln!(
            f,
            "{}\t{}\t{}\t{:.6}\t{}",
            if self.all_pass_2pi { "all-pass" } else { "not-all-pass" },
            i.chi,
            i.signature,
            i.norm_bound,
            i.v4
        )
    }
}

/// `χ = 4n`, `σ = 0`, `‖M‖ ≤ 16nπ²/(3v₄)`.
pub fn filled_invariants_for(n: usize, v4: f64) -> FilledInvariants {
    FilledInvariants {
        chi: 4 * n as i64,
        signature: 0,
        norm_bound: 16.0 * n as f64 * PI * PI / (3.0 * v4),
        v4,
    }
}

fn torus_lengths(c: &Cubulation) -> Result<Vec<u64>> {
    let report = invariant_report(c)?;
    report
        .cusps
        .iter()
        .enumerate()
        .map(|(i, cusp)| {
            if cusp.monodromy_class == MonodromyClass::Identity {
                Ok(cusp.h as u64)
            } else {
                Err(Error::Precondition(format!(
                    "cusp {i} has monodromy {} and is not a 3-torus",
                    cusp.monodromy_class
                )))
            }
        })
        .collect()
}

pub fn filled_invariants(c: &Cubulation, v4: f64) -> Result<FilledInvariants> {
    torus_lengths(c)?;
    Ok(filled_invariants_for(c.n(), v4))
}

/// Checks one slope per cusp of `c`; `(p,q,r)` are taken in cusp order.
pub fn check_2pi(c: &Cubulation, slopes: &[(i64, i64, i64)], threshold: Threshold, v4: f64) -> Result<FilledReport> {
    let lengths = torus_lengths(c)?;
    if slopes.len() != lengths.len() {
        return Err(Error::Precondition(format!(
            "{} slopes given for {} cusps",
            slopes.len(),
            lengths.len()
        )));
    }
    let slopes = slopes
        .iter()
        .zip(&lengths)
        .map(|(&(p, q, r), &h)| FillingSlope::new(p, q, r, h))
        .collect::<Result<Vec<_>>>()?;
    Ok(check_slopes(&slopes, c.n(), threshold, v4))
}

/// Slope checks for explicitly given cusps of a cubulation with `n` hypercubes.
pub fn check_slopes(slopes: &[FillingSlope], n: usize, threshold: Threshold, v4: f64) -> FilledReport {
    let slopes: Vec<SlopeCheck> = slopes
        .iter()
        .map(|&s| SlopeCheck { slope: s, length_sq: s.length_sq(), length: s.length(), pass: s.passes(threshold) })
        .collect();
    FilledReport {
        all_pass_2pi: slopes.iter().all(|s| s.pass),
        slopes,
        threshold,
        invariants: filled_invariants_for(n, v4),
    }
}

pub fn parse_slopes(s: &str) -> Result<Vec<(i64, i64, i64)>> {
    s.split(';')
        .filter(|part| !part.trim().is_empty())
        .map(|part| part.parse::<FillingSlope>().map(|f| (f.p, f.q, f.r)))
        .collect()
}
