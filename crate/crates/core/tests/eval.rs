use std::collections::HashSet;
use std::io::Write;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spring_lp::baselines::{common_neighbors, AdamicAdarWeight};
use spring_lp::eval::{
    auc, auc_brute_force, evaluate_split, make_split, read_split, run_trials, split_edges, write_split, ConstantScorer,
    EvalError, ExternalScorer, LocalIndex, LocalIndexScorer, OracleScorer, Regime, TiePolicy, TrialConfig, TrialStats,
};
use spring_lp::graph::{is_connected, GraphKind};
use spring_lp::{Graph, NodePair, Side};

fn connected_graph(rng: &mut ChaCha8Rng, kind: GraphKind, n: usize, extra: usize) -> Graph {
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    for _ in 0..extra {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            edges.push((a, b));
        }
    }
    if kind == GraphKind::Directed {
        for e in edges.iter_mut() {
            if rng.gen_bool(0.5) {
                *e = (e.1, e.0);
            }
        }
    }
    Graph::unlabeled(kind, n, &edges, None).unwrap()
}

fn connected_bipartite(rng: &mut ChaCha8Rng, left: usize, right: usize, extra: usize) -> Graph {
    let n = left + right;
    let partition: Vec<Side> = (0..n).map(|i| if i < left { Side::Left } else { Side::Right }).collect();
    // Every node joins the growing tree through a node of the other side.
    let mut edges = Vec::new();
    let mut seen_l = vec![0usize];
    let mut seen_r = vec![left];
    edges.push((0, left));
    let mut order: Vec<usize> = (1..left).chain(left + 1..n).collect();
    order.shuffle(rng);
    for u in order {
        if u < left {
            edges.push((u, seen_r[rng.gen_range(0..seen_r.len())]));
            seen_l.push(u);
        } else {
            edges.push((seen_l[rng.gen_range(0..seen_l.len())], u));
            seen_r.push(u);
        }
    }
    for _ in 0..extra {
        edges.push((rng.gen_range(0..left), left + rng.gen_range(0..right)));
    }
    Graph::unlabeled(GraphKind::Bipartite, n, &edges, Some(partition)).unwrap()
}

fn audit(g: &Graph, regime: Regime, fraction: f64, seed: u64) {
    let config = TrialConfig { fraction, regime, ..Default::default() };
    let split = make_split(g, &config, seed).unwrap();
    let train = split.train_graph(g).unwrap();
    assert!(is_connected(&train), "train graph must stay connected");
    assert_eq!(split.negatives.len(), split.positives.len());
    let train_pairs: HashSet<NodePair> = train.edge_pairs().collect();
    let pos: HashSet<NodePair> = split.positives.iter().copied().collect();
    let neg: HashSet<NodePair> = split.negatives.iter().copied().collect();
    assert_eq!(pos.len(), split.positives.len());
    assert_eq!(neg.len(), split.negatives.len());
    assert!(pos.is_disjoint(&train_pairs) && neg.is_disjoint(&train_pairs) && pos.is_disjoint(&neg));
    let all: HashSet<NodePair> = g.edge_pairs().collect();
    assert_eq!(pos.union(&train_pairs).copied().collect::<HashSet<_>>(), all);
    assert!(neg.iter().all(|&p| !g.contains_pair(p)), "negatives are never edges of the original graph");
    if g.kind() == GraphKind::Bipartite {
        assert!(neg.iter().all(|p| g.side(p.u) != g.side(p.v)));
    }
    let expected = spring_lp::eval::hide_target(fraction, g.edge_count()).min(g.edge_count() + 1 - g.node_count());
    assert_eq!(split.positives.len(), expected);
    assert_eq!(split.shortfall, expected < spring_lp::eval::hide_target(fraction, g.edge_count()));
}

#[test]
fn split_audit_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for i in 0..50u64 {
        let n = rng.gen_range(5..80);
        let extra = rng.gen_range(0..3 * n);
        let fraction = rng.gen_range(0.05..0.5);
        match i % 3 {
            0 => audit(&connected_graph(&mut rng, GraphKind::Undirected, n, extra), Regime::Uniform, fraction, i),
            1 => {
                audit(&connected_graph(&mut rng, GraphKind::Directed, n, extra), Regime::DirectedDifficult, fraction, i)
            }
            _ => audit(
                &connected_bipartite(&mut rng, n / 2 + 1, n / 2 + 2, extra),
                Regime::BipartiteWeighted,
                fraction,
                i,
            ),
        }
    }
}

#[test]
fn oracle_and_constant_scorers() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = connected_graph(&mut rng, GraphKind::Undirected, 60, 100);
    let config = TrialConfig { fraction: 0.3, trials: 4, ..Default::default() };
    let oracle = run_trials(&g, &OracleScorer::new(g.clone()), &config).unwrap();
    assert_eq!(oracle.auc_values, vec![1.0; 4]);
    assert_eq!((oracle.mean, oracle.std), (1.0, 0.0));
    let constant = run_trials(&g, &ConstantScorer(0.5), &config).unwrap();
    assert_eq!(constant.auc_values, vec![0.0; 4]);
    let half = run_trials(&g, &ConstantScorer(0.5), &TrialConfig { tie_policy: TiePolicy::Half, ..config }).unwrap();
    assert_eq!(half.mean, 0.5);
}

#[test]
fn trials_are_reproducible_across_thread_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let g = connected_graph(&mut rng, GraphKind::Undirected, 80, 160);
    let scorer = LocalIndexScorer::new(LocalIndex::AdamicAdar(AdamicAdarWeight::Inverse));
    let config = TrialConfig { fraction: 0.2, trials: 6, base_seed: 40, ..Default::default() };
    let reference = run_trials(&g, &scorer, &config).unwrap();
    for threads in [1, 4] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        assert_eq!(pool.install(|| run_trials(&g, &scorer, &config)).unwrap(), reference);
    }
    // Trial i equals a standalone evaluation with seed base_seed + i.
    let split = make_split(&g, &config, 43).unwrap();
    assert_eq!(evaluate_split(&g, &split, &scorer, TiePolicy::Strict).unwrap(), reference.auc_values[3]);
}

#[test]
fn external_scores_round_trip_through_split_files() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = connected_graph(&mut rng, GraphKind::Undirected, 50, 90);
    let config = TrialConfig { fraction: 0.3, trials: 3, base_seed: 10, ..Default::default() };
    let dir = tempfile::tempdir().unwrap();
    for i in 0..3 {
        let seed = 10 + i;
        let split = make_split(&g, &config, seed).unwrap();
        let split_dir = dir.path().join(format!("split-{seed}"));
        write_split(&split_dir, &g, &split).unwrap();
        let back = read_split(&split_dir, &g).unwrap();
        assert_eq!(back, split);
        // An "external" tool computes CN on the exported training graph.
        let train = back.train_graph(&g).unwrap();
        let mut f = std::fs::File::create(dir.path().join(format!("scores-{seed}.txt"))).unwrap();
        for p in back.positives.iter().chain(&back.negatives) {
            writeln!(f, "{} {} {}", g.label(p.u), g.label(p.v), common_neighbors(&train, p.u, p.v)).unwrap();
        }
    }
    let external = ExternalScorer::new(dir.path().join("scores-{seed}.txt"));
    let from_files = run_trials(&g, &external, &config).unwrap();
    let direct = run_trials(&g, &LocalIndexScorer::new(LocalIndex::CommonNeighbors), &config).unwrap();
    assert_eq!(from_files, direct);
}

#[test]
fn missing_external_scores_are_listed() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let g = connected_graph(&mut rng, GraphKind::Undirected, 30, 40);
    let config = TrialConfig { fraction: 0.3, trials: 1, ..Default::default() };
    let split = make_split(&g, &config, 0).unwrap();
    let file = tempfile::NamedTempFile::new().unwrap();
    let p = split.positives[0];
    writeln!(file.as_file(), "{} {} 1.0", g.label(p.u), g.label(p.v)).unwrap();
    let err = evaluate_split(&g, &split, &ExternalScorer::new(file.path()), TiePolicy::Strict).unwrap_err();
    match err {
        EvalError::MissingScores { count, examples } => {
            assert_eq!(count, 2 * split.positives.len() - 1);
            assert!(!examples.is_empty() && examples.len() <= 10);
        }
        other => panic!("unexpected {other}"),
    }
}

#[test]
fn tree_split_reports_shortfall() {
    let g = Graph::unlabeled(GraphKind::Undirected, 5, &[(0, 1), (1, 2), (2, 3), (3, 4)], None).unwrap();
    let split = split_edges(&g, 0.4, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
    assert!(split.positives.is_empty() && split.shortfall);
    let err = run_trials(&g, &ConstantScorer(0.0), &TrialConfig { fraction: 0.4, trials: 1, ..Default::default() });
    assert!(matches!(err, Err(EvalError::EmptyScores)));
}

proptest! {
    #[test]
    fn fast_auc_equals_brute_force(pos in prop::collection::vec(-20i32..20, 1..200), neg in prop::collection::vec(-20i32..20, 1..200)) {
        let pos: Vec<f64> = pos.into_iter().map(f64::from).collect();
        let neg: Vec<f64> = neg.into_iter().map(f64::from).collect();
        for policy in [TiePolicy::Strict, TiePolicy::Half] {
            prop_assert_eq!(auc(&pos, &neg, policy).unwrap(), auc_brute_force(&pos, &neg, policy).unwrap());
        }
    }

    #[test]
    fn fast_auc_equals_brute_force_on_reals(pos in prop::collection::vec(-1.0f64..1.0, 1..200), neg in prop::collection::vec(-1.0f64..1.0, 1..200)) {
        for policy in [TiePolicy::Strict, TiePolicy::Half] {
            prop_assert_eq!(auc(&pos, &neg, policy).unwrap(), auc_brute_force(&pos, &neg, policy).unwrap());
        }
    }

    #[test]
    fn auc_is_invariant_under_increasing_maps(pos in prop::collection::vec(-50i64..50, 1..100), neg in prop::collection::vec(-50i64..50, 1..100)) {
        // x^3 + 3x + 7 is strictly increasing and exact on these integers.
        let f = |x: i64| (x * x * x + 3 * x + 7) as f64;
        let (p0, n0): (Vec<f64>, Vec<f64>) = (pos.iter().map(|&x| x as f64).collect(), neg.iter().map(|&x| x as f64).collect());
        let (p1, n1): (Vec<f64>, Vec<f64>) = (pos.iter().map(|&x| f(x)).collect(), neg.iter().map(|&x| f(x)).collect());
        for policy in [TiePolicy::Strict, TiePolicy::Half] {
            prop_assert_eq!(auc(&p0, &n0, policy).unwrap(), auc(&p1, &n1, policy).unwrap());
        }
    }

    #[test]
    fn trial_stats_match_recomputation(values in prop::collection::vec(0.0f64..=1.0, 1..30)) {
        let s = TrialStats::from_values(values.clone());
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = if values.len() > 1 { values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0) } else { 0.0 };
        prop_assert!((s.mean - mean).abs() <= 1e-12);
        prop_assert!((s.std - var.sqrt()).abs() <= 1e-12);
        prop_assert!((s.ci95_halfwidth - 1.96 * var.sqrt() / n.sqrt()).abs() <= 1e-12);
        prop_assert!(s.auc_values.iter().all(|a| (0.0..=1.0).contains(a)));
    }
}
