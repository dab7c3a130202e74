//! Bundled example diagrams.
//!
//! Small, hand-checked PD codes used by tests, certification sweeps, and
//! the command-line `.pd` corpus.  Several knots appear in more than one
//! presentation (extra kinks, mirrors, a reducible R2 pair) so invariance
//! across presentations is exercised, and split unions are included for
//! the side-by-side embedding rules.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::diagram::{parse_pd, parse_pd_oriented, trefoil_pd, LinkDiagram};

/// The positive (2,n) torus link as a round closed 2-braid, n >= 2.
/// Segment k carries inner edge 2k-1 and outer edge 2k; crossing k swaps
/// them, the inner strand passing under.
pub fn torus_2n(n: usize) -> LinkDiagram {
    assert!(n >= 2);
    let wrap = |x: usize| (((x - 1) % (2 * n)) + 1) as u32;
    let crossings: Vec<[u32; 4]> = (1..=n)
        .map(|k| [wrap(2 * k - 1), wrap(2 * k + 1), wrap(2 * k + 2), wrap(2 * k)])
        .collect();
    LinkDiagram::from_crossings(crossings, 0, None).expect("torus codes are valid")
}

/// Named corpus, all at most 9 crossings.
pub fn bundled() -> Vec<(&'static str, LinkDiagram)> {
    let parse = |s: &str| parse_pd(s).expect("bundled diagram is valid");
    vec![
        ("unknot", parse("U")),
        ("unlink2", parse("U;U")),
        ("kink-pos", parse("X[1,1,2,2]")),
        ("kink-neg", parse("X[1,2,2,1]")),
        ("r2-unknot", parse("X[1,1,2,4];X[2,3,3,4]")),
        ("hopf", parse("X[1,4,2,3];X[3,2,4,1]")),
        ("trefoil", trefoil_pd()),
        ("trefoil-mirror", parse("X[1,5,2,4];X[3,1,4,6];X[5,3,6,2]")),
        // trefoil with a positive kink spliced into edge 6
        ("trefoil-kink", parse("X[1,4,2,5];X[3,8,4,1];X[5,2,6,3];X[7,7,8,6]")),
        ("fig8", parse("X[4,2,5,1];X[8,6,1,5];X[6,3,7,4];X[2,7,3,8]")),
        ("fig8-mirror", parse("X[4,1,5,2];X[8,5,1,6];X[6,4,7,3];X[2,8,3,7]")),
        ("t2-4", torus_2n(4)),
        ("t2-5", torus_2n(5)),
        ("t2-6", torus_2n(6)),
        ("t2-7", torus_2n(7)),
        ("k5-2", parse("X[1,4,2,5];X[3,8,4,9];X[5,10,6,1];X[9,6,10,7];X[7,2,8,3]")),
        ("trefoil+unknot", parse("X[1,4,2,5];X[3,6,4,1];X[5,2,6,3];U")),
        (
            "unlink-clasp",
            parse_pd_oriented("X[1,3,2,4];X[2,3,1,4]", Some(&[true]))
                .expect("clasp with explicit orientation is valid"),
        ),
    ]
}

/// Looks a bundled diagram up by name.
pub fn by_name(name: &str) -> Option<LinkDiagram> {
    bundled()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, d)| d)
}

/// A small battery for relation checking: enough two-crossing faces to see
/// merges, splits, nested and unnested pairs, aligned and reversed ladder
/// reconnections, and (through the clasp) the interleaved split pair.
pub fn relation_battery() -> Vec<LinkDiagram> {
    ["r2-unknot", "hopf", "trefoil", "trefoil-mirror", "fig8", "t2-4", "unlink-clasp"]
        .iter()
        .map(|n| by_name(n).unwrap())
        .collect()
}

/// Canonical PD strings of the bundled corpus (for writing `.pd` files).
pub fn bundled_pd_strings() -> Vec<(&'static str, String)> {
    bundled().into_iter().map(|(n, d)| (n, d.pd_string())).collect()
}
