//! Fixed cubulations used throughout the crate, its tests and the CLI.

use crate::cubulation::Cubulation;

/// One hypercube, opposite facets glued by translations.
pub const EXAMPLE1: &str = "\
# one hypercube, each facet glued to its opposite by a translation
cubes 1
pair 0.-1 0.+1 1 2 3
pair 0.-2 0.+2 1 2 3
pair 0.-3 0.+3 1 2 3
pair 0.-4 0.+4 1 2 3
";

pub const EXAMPLE1_CANONICAL: &str = "\
cubes 1
pair 0.-1 0.+1 1 2 3
pair 0.-2 0.+2 1 2 3
pair 0.-3 0.+3 1 2 3
pair 0.-4 0.+4 1 2 3
";

/// Two hypercubes, every facet of one glued to the same facet of the other.
pub const EXAMPLE2: &str = "\
# the double of a hypercube along its boundary
cubes 2
pair 0.-1 1.-1 1 2 3
pair 0.+1 1.+1 1 2 3
pair 0.-2 1.-2 1 2 3
pair 0.+2 1.+2 1 2 3
pair 0.-3 1.-3 1 2 3
pair 0.+3 1.+3 1 2 3
pair 0.-4 1.-4 1 2 3
pair 0.+4 1.+4 1 2 3
";

fn parse(text: &str) -> Cubulation {
    Cubulation::parse(text).expect("fixture parses")
}

pub fn example1() -> Cubulation {
    parse(EXAMPLE1)
}

pub fn example2() -> Cubulation {
    parse(EXAMPLE2)
}

/// The first orientable one-hypercube cubulation with a single cusp, a
/// 3-torus crossed by all 24 squares.
pub const SEED: &str = "\
cubes 1
pair 0.-1 0.+1 1 2 3
pair 0.-2 0.+2 2 1 -3
pair 0.-3 0.+3 2 3 1
pair 0.-4 0.+4 2 3 1
";

/// Two cusps, both with quarter-turn monodromy.
pub const TWO_CUSPS_R4: &str = "\
cubes 1
pair 0.-1 0.+1 1 2 3
pair 0.-2 0.+2 -2 1 3
pair 0.-3 0.+3 2 3 1
pair 0.-4 0.+4 2 3 1
";

/// Two cusps, both with monodromy `-I`.
pub const TWO_CUSPS_MINUS_I: &str = "\
cubes 1
pair 0.-1 0.+1 -1 3 2
pair 0.-2 0.+2 2 3 1
pair 0.-3 0.+3 -2 1 3
pair 0.-4 0.+4 -2 3 -1
";

pub fn seed() -> Cubulation {
    parse(SEED)
}

pub fn two_cusps_r4() -> Cubulation {
    parse(TWO_CUSPS_R4)
}

pub fn two_cusps_minus_i() -> Cubulation {
    parse(TWO_CUSPS_MINUS_I)
}
