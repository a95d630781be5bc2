mod common;

use std::path::PathBuf;

use common::*;
use proptest::prelude::*;
use tvi_core::io::{game_to_json, parse_game, parse_problem, parse_vector, problem_to_json};
use tvi_core::{DenseTensor, Error, FeasibleSet, GameSpec, Halfspace, SquareTensor, TviProblem};

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn pointer_of(e: Error) -> String {
    match e {
        Error::Parse { pointer, .. } => pointer,
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn fixtures_load() {
    let p = parse_problem(&fixture("ex41_qneg.json")).unwrap();
    assert_eq!(p.tensor(), &diag_quartic());
    assert!(p.tensor().is_symmetric(0.0));
    assert_eq!(p.set(), &FeasibleSet::nonnegative_orthant(2));
    let p = parse_problem(&fixture("ex42_orthant.json")).unwrap();
    assert_eq!(p.tensor(), &twisted_quartic());
    let p = parse_problem(&fixture("ex44.json")).unwrap();
    assert_eq!(p.set(), &FeasibleSet::boxed(vec![1.0, 1.0], vec![f64::INFINITY, 1.0]).unwrap());
    let p = parse_problem(&fixture("ex45.json")).unwrap();
    assert_eq!(p.set(), &FeasibleSet::boxed(vec![f64::NEG_INFINITY, 1.0], vec![f64::INFINITY, 1.0]).unwrap());
    for name in ["ex41_qpos.json", "ex41_unit_box.json", "ex42_plane.json"] {
        parse_problem(&fixture(name)).unwrap();
    }
    let g = parse_game(&fixture("matching_pennies_game.json")).unwrap();
    assert_eq!(g.payoff(0).entries(), &[1.0, -1.0, -1.0, 1.0]);
    assert_eq!(g.payoff(1).entries(), &[-1.0, 1.0, 1.0, -1.0]);
}

#[test]
fn errors_carry_json_pointers() {
    let base = fixture("ex41_qneg.json");
    let cases = [
        (base.replace("\"q\": [-1.0, -1.0]", "\"q\": [-1.0]"), "/q"),
        (base.replace("\"val\": 1.0}, {\"idx\": [1, 1, 1, 1]", "\"val\": 1.0}, {\"idx\": [1, 1, 1, 7]"), "/tensor/sparse/1/idx/3"),
        (base.replace("[1, 1, 1, 1]", "[0, 0, 0, 0]"), "/tensor/sparse/1/idx"),
        (base.replace("\"tvi-problem/1\"", "\"tvi-problem/9\""), "/version"),
        (base.replace("\"lower\": [0.0, 0.0]", "\"lower\": [0.0, \"nope\"]"), "/set/lower/1"),
        (base.replace("\"type\": \"box\"", "\"type\": \"cone\""), "/set/type"),
        (
            base.replace(
                "{\"type\": \"box\", \"lower\": [0.0, 0.0], \"upper\": [\"inf\", \"inf\"]}",
                "{\"type\": \"product\", \"factors\": [{\"type\": \"simplex\", \"dim\": 1}, {\"type\": \"ball\", \"center\": [0.0], \"radius\": \"big\"}]}",
            ),
            "/set/factors/1/radius",
        ),
    ];
    for (text, expected) in cases {
        let e = parse_problem(&text).unwrap_err();
        assert_eq!(pointer_of(e), expected, "{text}");
    }
    assert!(parse_problem("{").is_err());
    assert!(parse_vector("1,x").is_err());
    assert_eq!(parse_vector("1.5, -2").unwrap(), vec![1.5, -2.0]);
}

fn set_strategy(n: usize) -> impl Strategy<Value = FeasibleSet> {
    prop_oneof![
        Just(FeasibleSet::whole_space(n)),
        Just(FeasibleSet::nonnegative_orthant(n)),
        Just(FeasibleSet::simplex(n)),
        prop::collection::vec(-2.0f64..2.0, n).prop_map(|c| FeasibleSet::ball(c, 1.5).unwrap()),
        prop::collection::vec(-2.0f64..0.0, n).prop_map(move |l| {
            let mut u = vec![f64::INFINITY; n];
            u[0] = 3.0;
            FeasibleSet::boxed(l, u).unwrap()
        }),
        prop::collection::vec(-1.0f64..1.0, n).prop_map(move |a| {
            FeasibleSet::polyhedron(n, vec![Halfspace::new(a, 0.5)]).unwrap()
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn problems_roundtrip(
        (m, n, entries, q, set) in (2usize..=4, 1usize..=3).prop_flat_map(|(m, n)| (
            Just(m),
            Just(n),
            prop::collection::vec(prop_oneof![Just(0.0), -10.0f64..10.0], n.pow(m as u32)),
            prop::collection::vec(-1e6f64..1e6, n),
            set_strategy(n),
        ))
    ) {
        let a = SquareTensor::new(DenseTensor::new(vec![n; m], entries).unwrap()).unwrap();
        let p = TviProblem::new(a, q, set).unwrap();
        let text = problem_to_json(&p);
        let back = parse_problem(&text).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(problem_to_json(&back), text);
    }

    #[test]
    fn games_roundtrip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let dims = vec![2, 3, 1];
        let payoffs = (0..3).map(|_| DenseTensor::new(dims.clone(), uniform_vec(&mut r, 6, -5.0, 5.0)).unwrap()).collect();
        let sets = vec![
            FeasibleSet::simplex(2),
            FeasibleSet::product(vec![FeasibleSet::unit_box(1), FeasibleSet::simplex(2)]).unwrap(),
            FeasibleSet::ball(vec![0.0], 1.0).unwrap(),
        ];
        let g = GameSpec::new(payoffs, sets).unwrap();
        let back = parse_game(&game_to_json(&g)).unwrap();
        prop_assert_eq!(back, g);
    }
}

#[test]
fn game_errors_carry_json_pointers() {
    let base = fixture("matching_pennies_game.json");
    let bad_dim = base.replacen("{\"type\": \"simplex\", \"dim\": 2}", "{\"type\": \"simplex\", \"dim\": 3}", 1);
    assert_eq!(pointer_of(parse_game(&bad_dim).unwrap_err()), "/players/0/set");
    let bad_field = base.replacen("\"dim\": 2}}\n  ]", "\"dims\": 2}}\n  ]", 1);
    assert_eq!(pointer_of(parse_game(&bad_field).unwrap_err()), "/players/1/set/dims");
    let bad_payoff = base.replacen("[[-1.0, 1.0], [1.0, -1.0]]", "[[-1.0, 1.0], [1.0]]", 1);
    assert!(pointer_of(parse_game(&bad_payoff).unwrap_err()).starts_with("/players/1/payoff"));
}
