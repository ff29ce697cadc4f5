//! Bundled example manifolds.

use crate::input::{parse_input, ToricData};

const FILES: &[(&str, &str)] = &[
    ("p2.json", include_str!("../fixtures/p2.json")),
    ("p1xp1.json", include_str!("../fixtures/p1xp1.json")),
    ("p1xp1xp1.json", include_str!("../fixtures/p1xp1xp1.json")),
    ("f2.json", include_str!("../fixtures/f2.json")),
    ("f3.json", include_str!("../fixtures/f3.json")),
    ("kp2-blowup.json", include_str!("../fixtures/kp2-blowup.json")),
    (
        "kp2-compactified.json",
        include_str!("../fixtures/kp2-compactified.json"),
    ),
    ("f2-blowup.json", include_str!("../fixtures/f2-blowup.json")),
    ("a2-chain.json", include_str!("../fixtures/a2-chain.json")),
];

/// File names of all bundled fixtures.
pub fn names() -> impl Iterator<Item = &'static str> {
    FILES.iter().map(|(n, _)| *n)
}

/// Raw JSON text of a bundled fixture.
pub fn source(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Parsed bundled fixture.
pub fn load(name: &str) -> Option<ToricData> {
    source(name).map(|s| parse_input(s).unwrap_or_else(|e| panic!("fixture {name}: {e}")))
}

/// All bundled fixtures, parsed.
pub fn all() -> Vec<(&'static str, ToricData)> {
    names().map(|n| (n, load(n).unwrap())).collect()
}

/// The semi-Fano fixtures (everything except F3).
pub fn semi_fano() -> Vec<(&'static str, ToricData)> {
    all().into_iter().filter(|(n, _)| *n != "f3.json").collect()
}

macro_rules! fixture_fn {
    ($($f:ident => $file:literal),* $(,)?) => {
        $(
            pub fn $f() -> ToricData {
                load($file).unwrap()
            }
        )*
    };
}

fixture_fn! {
    p2 => "p2.json",
    p1xp1 => "p1xp1.json",
    p1xp1xp1 => "p1xp1xp1.json",
    f2 => "f2.json",
    f3 => "f3.json",
    kp2_blowup => "kp2-blowup.json",
    kp2_compactified => "kp2-compactified.json",
    f2_blowup => "f2-blowup.json",
    a2_chain => "a2-chain.json",
}
