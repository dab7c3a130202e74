//! Acceptance sweep: the ten headline guarantees of the workbench, one
//! test (and one pass/fail line) per criterion, exercised over the full
//! bundled corpus wherever runtime permits.
//!
//! Every check here recomputes its claim from scratch through the public
//! API or the compiled binary; nothing is read from cached fixtures.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::Command;

use cubecat_core::complex::{
    assemble_complex, audit_faces, build_hypercube, face_cocycle, solve_sign_assignment,
    three_cube_parities, CubeComplex, FaceClass,
};
use cubecat_core::corpus::{bundled, by_name, relation_battery};
use cubecat_core::diagram::LinkDiagram;
use cubecat_core::equivalence::{
    certify_sign_system, compare_mod2, enumerate_sign_systems, verify_outer_face_invariance,
    verify_theorem1,
};
use cubecat_core::frobenius::{
    builtin_system, check_relations, parametrized_system, FaceRelation, Theory,
};
use cubecat_core::homology::{
    euler_from_homology, graded_euler_characteristic, homology_table, kauffman_bracket_oracle,
    Coeff, HomologyEntry,
};

const THEORIES: [Theory; 3] = [Theory::Khovanov, Theory::Nested, Theory::Odd];

fn complex_for(diagram: &LinkDiagram, theory: Theory) -> CubeComplex {
    let cube = build_hypercube(diagram);
    let system = builtin_system(theory);
    let eps = solve_sign_assignment(&system, &cube).expect("sign assignment must exist");
    assemble_complex(diagram, &system, &cube, &eps)
}

fn z_table(diagram: &LinkDiagram, theory: Theory) -> Vec<HomologyEntry> {
    homology_table(&complex_for(diagram, theory), Coeff::Z)
}

/// Criterion 1 (exactness): every differential composes to zero in every bidegree,
/// for all three theories, on every corpus diagram.
#[test]
fn c01_differentials_square_to_zero() {
    for (name, diagram) in bundled() {
        for theory in THEORIES {
            let cx = complex_for(&diagram, theory);
            assert!(cx.d_squared_is_zero(), "{name} / {theory:?}: d^2 != 0");
        }
    }
    println!("PASS c01: d^2 = 0 in every bidegree, all theories, all corpus diagrams");
}

/// Criterion 2 (relation audit): the plain even tables commute on every face, the
/// nesting-aware tables anticommute exactly on the interleaved-split
/// (torus) faces, and the exterior tables reproduce the graded sign
/// pattern, commutation relations included.
#[test]
fn c02_face_relations_match_each_theory() {
    let battery = relation_battery();
    for theory in THEORIES {
        let system = builtin_system(theory);
        // dual route 1: the raw relation checker finds no face whose two
        // composites fail to be proportional
        assert!(
            check_relations(&system, &battery).is_empty(),
            "{theory:?}: non-proportional face composites"
        );
    }
    // dual route 2: per-face sign audit against the class-level pattern
    let mut interleaved_seen = 0usize;
    let mut odd_negated_disjoint_splits = 0usize;
    for diagram in &battery {
        let cube = build_hypercube(diagram);
        for theory in THEORIES {
            let system = builtin_system(theory);
            for audit in audit_faces(&system, theory, &cube) {
                assert!(
                    audit.ok(),
                    "{theory:?}: face {:?}/{:?} of class {:?} measured {:?}, expected {:?}",
                    audit.word,
                    audit.crossings,
                    audit.class,
                    audit.measured,
                    audit.expected
                );
                match theory {
                    Theory::Khovanov => {
                        assert_eq!(audit.expected, FaceRelation::Equal);
                    }
                    Theory::Nested => {
                        let negated = audit.expected == FaceRelation::Negated;
                        assert_eq!(negated, audit.class == FaceClass::Interleaved);
                        if negated {
                            interleaved_seen += 1;
                        }
                    }
                    Theory::Odd => {
                        if audit.class == FaceClass::DisjointSplits {
                            assert_eq!(audit.expected, FaceRelation::Negated);
                            odd_negated_disjoint_splits += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(interleaved_seen > 0, "battery never exercised the torus face");
    assert!(
        odd_negated_disjoint_splits > 0,
        "battery never exercised an anticommuting disjoint-split face"
    );
    println!("PASS c02: face signs match every theory's relation pattern on the battery");
}

/// Criterion 3 (face parity): the nesting-aware structure anticommutes exactly on
/// interleaved faces, every 3-dimensional subcube carries an even number
/// of anticommutative faces, and a global sign assignment is solved for
/// every corpus diagram in all three theories.
#[test]
fn c03_face_parity_and_sign_solvability() {
    for (name, diagram) in bundled() {
        let cube = build_hypercube(&diagram);
        let nested = builtin_system(Theory::Nested);
        for (word, i, j) in cube.faces() {
            let anti = face_cocycle(&nested, &cube, word, i, j)
                .unwrap_or_else(|e| panic!("{name}: {e}"))
                == Some(false);
            let interleaved =
                cubecat_core::complex::classify_face(&cube, word, i, j) == FaceClass::Interleaved;
            assert_eq!(
                anti, interleaved,
                "{name}: face {word:?}/({i},{j}) anticommutes iff interleaved"
            );
        }
        for theory in THEORIES {
            let system = builtin_system(theory);
            let parities =
                three_cube_parities(&system, &cube).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(
                parities.iter().all(|p| p % 2 == 0),
                "{name} / {theory:?}: odd anticommutative count on a 3-subcube"
            );
            assert!(
                solve_sign_assignment(&system, &cube).is_ok(),
                "{name} / {theory:?}: no global sign assignment"
            );
        }
    }
    println!("PASS c03: anticommutativity sits exactly on interleaved faces, 3-cube parity even, signs solvable");
}

/// Criterion 4 (chain isomorphism): the nesting-aware complex is certified isomorphic to the plain one
/// on every corpus diagram: the depth-parity map intertwines every signed
/// edge, commutes with the assembled differentials, and the homology
/// tables agree over Z, Q and F2.
#[test]
fn c04_depth_parity_isomorphism_certificates() {
    for (name, diagram) in bundled() {
        let report = verify_theorem1(&diagram).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(report.all_ok(), "{name}: {report:?}");
    }
    println!("PASS c04: nesting-aware = plain certified on all corpus diagrams (edges, complex, homology)");
}

/// Criterion 5 (sign-parameter classification): of the 1024 parameter tuples exactly
/// 32 satisfy all face relations, the survivor set matches the closed-form
/// constraints, and every survivor's homology is certified equal to the
/// plain theory's on the small corpus diagrams.
#[test]
fn c05_thirty_two_valid_sign_tuples_all_equivalent() {
    let verdicts = enumerate_sign_systems(&relation_battery());
    assert_eq!(verdicts.len(), 1024);
    let valid: Vec<_> = verdicts.iter().filter(|v| v.valid()).collect();
    assert_eq!(valid.len(), 32, "expected exactly 32 valid tuples");
    for v in &verdicts {
        assert_eq!(
            v.valid(),
            v.params.is_valid(),
            "closed-form validity mismatch at tuple {}",
            v.params.to_index()
        );
        assert_eq!(
            v.relations_ok, v.complexes_ok,
            "relation check and cube assembly disagree at tuple {}",
            v.params.to_index()
        );
    }

    let small: Vec<_> =
        bundled().into_iter().filter(|(_, d)| d.n_crossings() <= 4).collect();
    assert!(small.len() >= 10);
    for (name, diagram) in &small {
        for v in &valid {
            let cert = certify_sign_system(diagram, v.params)
                .unwrap_or_else(|e| panic!("{name} tuple {}: {e}", v.params.to_index()));
            assert!(
                cert.report.all_ok(),
                "{name} tuple {}: {:?}",
                v.params.to_index(),
                cert.report
            );
        }
    }

    // dual route for the homology claim: assemble each survivor directly
    // and compare integral tables against the plain builtin
    for name in ["trefoil", "unlink-clasp"] {
        let diagram = by_name(name).unwrap();
        let reference = z_table(&diagram, Theory::Khovanov);
        let cube = build_hypercube(&diagram);
        for v in &valid {
            let system = parametrized_system(v.params);
            let eps = solve_sign_assignment(&system, &cube)
                .unwrap_or_else(|e| panic!("{name} tuple {}: {e}", v.params.to_index()));
            let cx = assemble_complex(&diagram, &system, &cube, &eps);
            assert_eq!(
                homology_table(&cx, Coeff::Z),
                reference,
                "{name} tuple {}: integral homology differs from the plain theory",
                v.params.to_index()
            );
        }
    }
    println!("PASS c05: exactly 32/1024 tuples valid, every survivor certified equal to the plain theory");
}

/// Criterion 6 (mod-2 collapse): on every corpus diagram the three theories have
/// literally congruent differentials mod 2 and identical F2 homology.
#[test]
fn c06_theories_agree_mod_two() {
    for (name, diagram) in bundled() {
        let complexes: Vec<CubeComplex> =
            THEORIES.iter().map(|&t| complex_for(&diagram, t)).collect();
        for pair in complexes.windows(2) {
            assert!(
                compare_mod2(&pair[0], &pair[1]),
                "{name}: differentials differ mod 2"
            );
        }
        let tables: Vec<_> =
            complexes.iter().map(|cx| homology_table(cx, Coeff::F2)).collect();
        for pair in tables.windows(2) {
            assert_eq!(pair[0], pair[1], "{name}: F2 homology tables differ");
        }
    }
    println!("PASS c06: all theories congruent mod 2 with equal F2 homology on the corpus");
}

/// Criterion 7 (Euler oracle): the graded Euler characteristic of every complex
/// equals the Kauffman bracket state sum exactly, both at chain level and
/// recomputed from the integral homology table.
#[test]
fn c07_euler_characteristic_matches_the_state_sum() {
    for (name, diagram) in bundled() {
        let oracle = kauffman_bracket_oracle(&diagram);
        for theory in THEORIES {
            let cx = complex_for(&diagram, theory);
            assert_eq!(
                graded_euler_characteristic(&cx),
                oracle,
                "{name} / {theory:?}: chain-level Euler characteristic"
            );
            assert_eq!(
                euler_from_homology(&homology_table(&cx, Coeff::Z)),
                oracle,
                "{name} / {theory:?}: homology-level Euler characteristic"
            );
        }
    }
    println!("PASS c07: graded Euler characteristic equals the bracket state sum, chain and homology level");
}

/// Criterion 8 (sign-assignment equivalence): 100 seeded random coboundary pairs per
/// corpus diagram, each re-certified isomorphic through the binary's
/// from-scratch verifier.
#[test]
fn c08_random_sign_pairs_certified_isomorphic() {
    let out = Command::new(env!("CARGO_BIN_EXE_cubecat"))
        .args(["verify", "--theorem", "signs", "--pairs", "100", "--seed", "0"])
        .output()
        .expect("running the binary");
    assert!(out.status.success(), "exit: {:?}", out.status);
    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("verifier output is JSON");
    assert_eq!(report["ok"], serde_json::Value::Bool(true));
    let certs = report["certificates"].as_array().expect("certificates array");
    assert_eq!(certs.len(), bundled().len());
    for cert in certs {
        assert_eq!(cert["pairs"], 100, "{cert}");
        assert_eq!(cert["pairs_intertwined"], 100, "{cert}");
        assert_eq!(cert["ok"], serde_json::Value::Bool(true), "{cert}");
    }
    println!("PASS c08: 100 seeded sign-assignment pairs per diagram certified isomorphic");
}

/// Criterion 9 (invariance spot checks): different presentations of the same knot
/// give identical tables in all three theories, and the choice of
/// outermost region never changes the nesting-aware table.
#[test]
fn c09_presentation_and_outer_face_invariance() {
    let same_knot = [("trefoil", "trefoil-kink"), ("fig8", "fig8-mirror")];
    for (a, b) in same_knot {
        let da = by_name(a).unwrap();
        let db = by_name(b).unwrap();
        for theory in THEORIES {
            assert_eq!(
                z_table(&da, theory),
                z_table(&db, theory),
                "{a} vs {b} / {theory:?}: integral tables differ"
            );
        }
    }
    for name in ["hopf", "trefoil", "unlink-clasp", "r2-unknot"] {
        let diagram = by_name(name).unwrap();
        let report = verify_outer_face_invariance(&diagram, Theory::Nested)
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(report.tables_match, "{name}: outer-face choice changed the table");
        assert!(report.faces_checked >= 1);
    }
    println!("PASS c09: presentations of one knot agree in all theories; outer-face choice invisible");
}

/// Criterion 10 (determinism): repeated runs with a fixed seed produce byte-identical
/// JSON, and the worker count never reorders or alters output.
#[test]
fn c10_fixed_seed_output_is_byte_identical() {
    let run = |args: &[&str]| -> Vec<u8> {
        let out = Command::new(env!("CARGO_BIN_EXE_cubecat"))
            .args(args)
            .output()
            .expect("running the binary");
        assert!(out.status.success(), "exit {:?} for {args:?}", out.status);
        out.stdout
    };
    let fig8 = "X[4,2,5,1];X[8,6,1,5];X[6,3,7,4];X[2,7,3,8]";
    let signs_args =
        ["verify", "--theorem", "signs", "--pairs", "25", "--seed", "42", "--pd", fig8];
    assert_eq!(run(&signs_args), run(&signs_args), "seeded verifier output drifted");

    let compute_args = ["compute", "--pd", fig8, "--theory", "odd", "--coeff", "Z"];
    assert_eq!(run(&compute_args), run(&compute_args), "compute output drifted");

    let euler_one = run(&["euler", "--jobs", "1"]);
    let euler_three = run(&["euler", "--jobs", "3"]);
    assert_eq!(euler_one, euler_three, "worker count changed euler output");
    println!("PASS c10: byte-identical output across repeated seeded runs and worker counts");
}

/// The shipped `corpus/` directory must describe exactly the builtin
/// diagrams: same names, same canonical PD codes, same oracle rows.
#[test]
fn corpus_directory_matches_the_builtins() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let run = |args: &[&str]| -> serde_json::Value {
        let out = Command::new(env!("CARGO_BIN_EXE_cubecat"))
            .args(args)
            .output()
            .expect("running the binary");
        assert!(out.status.success(), "exit {:?} for {args:?}", out.status);
        serde_json::from_slice(&out.stdout).expect("euler output is JSON")
    };
    let key_rows = |v: &serde_json::Value| -> BTreeMap<(String, String), serde_json::Value> {
        v["results"]
            .as_array()
            .expect("results array")
            .iter()
            .map(|row| {
                let name = row["name"].as_str().unwrap().to_owned();
                let theory = row["theory"].as_str().unwrap().to_owned();
                ((name, theory), row.clone())
            })
            .collect()
    };
    let builtin = key_rows(&run(&["euler"]));
    let files = key_rows(&run(&["euler", "--file", dir.to_str().unwrap()]));
    let builtin_names: BTreeSet<_> = builtin.keys().map(|(n, _)| n.clone()).collect();
    let file_names: BTreeSet<_> = files.keys().map(|(n, _)| n.clone()).collect();
    assert_eq!(builtin_names, file_names, "corpus file set differs from builtins");
    assert_eq!(builtin, files, "corpus file rows differ from builtin rows");
}
