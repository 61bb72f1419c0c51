use walkforge_core::distinctness::{build_ed, ed_spectrum, project_full_graph};
use walkforge_core::io::{matrix_to_json, parse_matrix_csv, parse_matrix_json, parse_tree_json};
use walkforge_core::lazy::{simulate_by_limit, steps_for_accuracy};
use walkforge_core::linalg::{basis_vector, exact_propagator, operator_norm};
use walkforge_core::phase::{simulate_phase_channel, steps_for_fidelity};
use walkforge_core::product::{simulate_tree, split_tree, Order, WeightedTree};
use walkforge_core::WalkError;

const PATH3: &str = r#"{"dim": 3, "entries": [[0,0],[1,0],[0,0], [1,0],[0,0],[1,0], [0,0],[1,0],[0,0]]}"#;

#[test]
fn json_round_trip_then_limit_and_phase_simulation() {
    let h = parse_matrix_json(PATH3).unwrap();
    let again = parse_matrix_json(&matrix_to_json(&h)).unwrap();
    assert_eq!(h, again);

    let t = 1.5;
    let psi = basis_vector(3, 0);
    let exact = exact_propagator(&h, t).unwrap() * &psi;

    let tau = steps_for_accuracy(&h, t, 0.01).unwrap();
    let (out, report) = simulate_by_limit(&h, &psi, t, tau).unwrap();
    assert!(report.ratio <= 1.0);
    assert!((out - &exact).norm() <= 0.01);

    let m = steps_for_fidelity(&h, t, 0.01).unwrap();
    let (_, channel) = simulate_phase_channel(&h, &psi, t, m).unwrap();
    assert!(channel.fidelity >= 0.99);
}

#[test]
fn malformed_inputs_report_positions() {
    match parse_matrix_csv("0,0,1,0\n1,0,x,0\n") {
        Err(WalkError::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
        other => panic!("unexpected {other:?}"),
    }
    assert!(parse_matrix_json("{\"dim\": 2").is_err());
    assert!(matches!(parse_matrix_csv("0,0,1,0\n2,0,0,0\n"), Err(WalkError::NotHermitian { .. })));
}

#[test]
fn tree_file_to_star_forest_simulation() {
    let text = r#"{"n": 4, "root": 0, "parent": [-1, 0, 0, 1], "weights": [[0,0],[1,0],[0,1],[0.5,0]]}"#;
    let tree = WeightedTree::from_file(&parse_tree_json(text).unwrap()).unwrap();
    let split = split_tree(&tree).unwrap();
    assert_eq!(split.forest1.len() + split.forest2.len(), 2);
    let exact = exact_propagator(&tree.hamiltonian(), 1.0).unwrap();
    let err = |n| operator_norm(&(simulate_tree(&tree, 1.0, n, Order::Second).unwrap() - &exact));
    assert!(err(64) < err(16) / 8.0);
}

#[test]
fn reduced_model_agrees_with_full_graph() {
    for n in [8, 10] {
        let full = project_full_graph(n, (0, 3)).unwrap();
        let reduced = build_ed(n).unwrap().hamiltonian();
        for r in 0..4 {
            for c in 0..4 {
                assert!((full.projected[r][c] - reduced[(r, c)].re).abs() < 1e-10);
            }
        }
        let s = ed_spectrum(&build_ed(n).unwrap()).unwrap();
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }
}
