//! The eight Lagrangian immersions of the classification, as DSL source.
//!
//! `u = exp(x𝐢 + y𝐣 + z𝐤)` is the chart on S³ used for `f1`–`f7`. The last
//! one is written as products of one-parameter subgroups.

use alloc::string::ToString;

use super::{parse, ImmersionDescriptor};
use crate::Error;

const SOURCES: [(&str, &str); 8] = [
    (
        "f1",
        "immersion f1\nvars x y z\nlet u = exp(x, y, z)\nleft = const(1, 0, 0, 0)\nright = u\n",
    ),
    (
        "f2",
        "immersion f2\nvars x y z\nlet u = exp(x, y, z)\nleft = u\nright = const(1, 0, 0, 0)\n",
    ),
    (
        "f3",
        "immersion f3\nvars x y z\nlet u = exp(x, y, z)\nleft = u\nright = u\n",
    ),
    (
        "f4",
        "immersion f4\nvars x y z\nlet u = exp(x, y, z)\nleft = u\nright = u * const(0, 1, 0, 0)\n",
    ),
    (
        "f5",
        "immersion f5\nvars x y z\nlet u = exp(x, y, z)\nleft = u * const(0, 1, 0, 0) * inv(u)\nright = inv(u)\n",
    ),
    (
        "f6",
        "immersion f6\nvars x y z\nlet u = exp(x, y, z)\nleft = inv(u)\nright = u * const(0, 1, 0, 0) * inv(u)\n",
    ),
    (
        "f7",
        "immersion f7\nvars x y z\nlet u = exp(x, y, z)\n\
         left = u * const(0, 1, 0, 0) * inv(u)\nright = u * const(0, 0, 1, 0) * inv(u)\n",
    ),
    (
        "f8",
        "immersion f8\nvars x y z\n\
         left = exp(sqrt3/2*z, 0, 0) * exp(0, sqrt3/2*x, 0)\n\
         right = exp(sqrt3/2*y, 0, 0) * exp(0, sqrt3/2*x - pi/4, 0)\n",
    ),
];

pub fn catalog_names() -> impl Iterator<Item = &'static str> {
    SOURCES.iter().map(|(n, _)| *n)
}

pub fn catalog_source(name: &str) -> Option<&'static str> {
    SOURCES
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, s)| *s)
}

pub fn catalog(name: &str) -> Result<ImmersionDescriptor, Error> {
    let src = catalog_source(name).ok_or_else(|| Error::UnknownImmersion(name.to_string()))?;
    parse(src)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::print;

    #[test]
    fn every_entry_parses_and_round_trips() {
        for n in catalog_names() {
            let d = catalog(n).unwrap();
            let again = parse(&print(&d)).unwrap();
            assert_eq!(d, again, "{n}");
        }
        assert!(matches!(catalog("f9"), Err(Error::UnknownImmersion(_))));
    }
}
