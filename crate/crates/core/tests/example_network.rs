//! The 7-vertex example network with its width-2 decomposition, 0-based
//! (source 0, target 6).

use netrel::graph::{Multigraph, VertexId};
use netrel::oracle::exhaustive;
use netrel::reliability::{solve, PlainInstance, Probability, SolveOptions};
use netrel::treedec::TreeDecomposition;

fn vs(xs: &[u32]) -> Vec<VertexId> {
    xs.iter().map(|&x| VertexId(x)).collect()
}

fn example(p: f64) -> PlainInstance {
    let edges = [
        (0, 1),
        (0, 2),
        (1, 2),
        (2, 3),
        (2, 4),
        (1, 4),
        (3, 4),
        (1, 5),
        (1, 6),
        (5, 6),
    ];
    let g = Multigraph::from_edges(7, edges).unwrap();
    let probs = vec![Probability::new(p).unwrap(); edges.len()];
    PlainInstance::new(g, probs, VertexId(0), vs(&[6])).unwrap()
}

fn example_td() -> TreeDecomposition {
    TreeDecomposition::new(
        7,
        vec![
            vs(&[0, 1, 2]),
            vs(&[1, 2, 4]),
            vs(&[2, 3, 4]),
            vs(&[1, 5, 6]),
        ],
        vec![(0, 1), (1, 2), (1, 3)],
    )
}

// exact rational enumeration over all 1024 subgraphs
const EXPECTED: [(f64, f64); 9] = [
    (0.1, 0.0119772361),
    (0.2, 0.0552018944),
    (0.3, 0.1375800129),
    (0.4, 0.2601865216),
    (0.5, 0.4150390625),
    (0.6, 0.5854196736),
    (0.7, 0.7490467369),
    (0.8, 0.8832303104),
    (0.9, 0.9701561241),
];

#[test]
fn given_decomposition_is_valid_width_two() {
    let td = example_td();
    assert!(td.validate(example(0.5).graph()).is_empty());
    assert_eq!(td.width(), 2);
}

#[test]
fn solver_matches_exact_values() {
    for (p, expect) in EXPECTED {
        let inst = example(p);
        let sol = solve(
            &inst,
            example_td(),
            SolveOptions {
                debug_invariants: true,
            },
        )
        .unwrap();
        assert!(
            (sol.reliability - expect).abs() <= 1e-9,
            "p={p}: {}",
            sol.reliability
        );
        assert!((exhaustive(&inst).unwrap() - expect).abs() <= 1e-12);
    }
}

#[test]
fn certain_edges_give_certain_connection() {
    assert_eq!(exhaustive(&example(1.0)).unwrap(), 1.0);
    let sol = solve(&example(1.0), example_td(), SolveOptions::default()).unwrap();
    assert!((sol.reliability - 1.0).abs() <= 1e-12);
    let sol = solve(&example(0.0), example_td(), SolveOptions::default()).unwrap();
    assert_eq!(sol.reliability, 0.0);
}
