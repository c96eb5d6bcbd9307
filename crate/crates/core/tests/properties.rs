use gupb_core::canon::are_isomorphic;
use gupb_core::catalog;
use gupb_core::io::{parse_graph6, to_graph6};
use gupb_core::propagate::{propagate_equalities, Proof};
use gupb_core::repr::{rank_of_subset, verify_representation, FloatTolerance, Mode, Representation};
use gupb_core::scenario::{count_degree_sequences, decomposition_edge_feasible, gupb_lower_bound};
use gupb_core::span::{check_pair_spanning, tuple_size};
use gupb_core::{canonical_form, find_induced_embedding, Graph};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
    let mut g = Graph::empty(n);
    let mut t = 0;
    for i in 0..n {
        for j in i + 1..n {
            if bits[t] {
                g.add_edge(i, j);
            }
            t += 1;
        }
    }
    g
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |b| graph_from_bits(n, &b)))
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let bits: Vec<bool> = (0..n * (n - 1) / 2).map(|_| rng.gen_bool(p)).collect();
    graph_from_bits(n, &bits)
}

// plain enumeration of injective maps, extended one pattern vertex at a time
fn brute_embeds(p: &Graph, h: &Graph) -> bool {
    fn go(p: &Graph, h: &Graph, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let a = map.len();
        if a == p.n() {
            return true;
        }
        for x in 0..h.n() {
            if used[x] {
                continue;
            }
            if (0..a).all(|b| p.has_edge(a, b) == h.has_edge(x, map[b])) {
                used[x] = true;
                map.push(x);
                if go(p, h, map, used) {
                    return true;
                }
                map.pop();
                used[x] = false;
            }
        }
        false
    }
    p.n() <= h.n() && go(p, h, &mut Vec::new(), &mut vec![false; h.n()])
}

fn small_catalog() -> Vec<(&'static str, Graph)> {
    catalog::all().iter().filter(|e| e.graph.n() <= 8).map(|e| (e.name.as_str(), e.graph.clone())).collect()
}

#[test]
fn embedding_matches_brute_force_on_catalog_and_random_hosts() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut hosts: Vec<Graph> = small_catalog().into_iter().map(|(_, g)| g).collect();
    for i in 0..200 {
        let n = 5 + i % 5;
        let p = [0.3, 0.5, 0.7][i % 3];
        hosts.push(random_graph(&mut rng, n, p));
    }
    let mut patterns = small_catalog();
    patterns.retain(|(_, g)| g.n() <= 7);
    let mut agree = 0;
    for (name, p) in &patterns {
        for h in &hosts {
            let fast = find_induced_embedding(p, h);
            assert_eq!(fast.is_some(), brute_embeds(p, h), "{name} in {}", to_graph6(h));
            if let Some(e) = fast {
                assert!(e.is_induced(p, h));
            }
            agree += 1;
        }
    }
    assert!(agree > 1000);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn embedding_matches_brute_force(p in arb_graph(5), h in arb_graph(9)) {
        let fast = find_induced_embedding(&p, &h);
        prop_assert_eq!(fast.is_some(), brute_embeds(&p, &h));
        if let Some(e) = fast {
            prop_assert!(e.is_induced(&p, &h));
        }
    }

    #[test]
    fn canonical_form_ignores_labels(g in arb_graph(12), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..g.n()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let h = g.relabel(&perm);
        prop_assert_eq!(canonical_form(&g), canonical_form(&h));
        prop_assert!(are_isomorphic(&canonical_form(&g).to_graph(), &g));
    }

    #[test]
    fn complement_is_an_involution(g in arb_graph(16)) {
        prop_assert_eq!(g.complement().complement(), g.clone());
        prop_assert_eq!(g.complement().edge_count() + g.edge_count(), g.n() * (g.n() - 1) / 2);
    }

    #[test]
    fn graph6_roundtrip(g in arb_graph(20)) {
        prop_assert_eq!(parse_graph6(&to_graph6(&g), 0).unwrap(), g);
    }

    #[test]
    fn impossibility_proofs_replay(g in arb_graph(8), d in 2usize..=4) {
        let p = propagate_equalities(&g, d);
        if let Some(proof) = p.proof() {
            let external = matches!(proof, Proof::External { .. });
            prop_assert!(!external);
            prop_assert!(proof.replay(&g, d));
        }
    }

    #[test]
    fn pair_spanning_matches_direct_rank(
        a in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 2), 5),
        b in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 2), 5),
    ) {
        prop_assume!(a.iter().chain(&b).all(|v| v.iter().any(|&x| x != 0)));
        let ra = Representation::from_ints(2, &a).unwrap();
        let rb = Representation::from_ints(2, &b).unwrap();
        let report = check_pair_spanning(&ra, &rb, None).unwrap();
        // kronecker products and every 4-subset, ranked by elimination over f64
        let prods: Vec<Vec<f64>> = a
            .iter()
            .zip(&b)
            .map(|(x, y)| x.iter().flat_map(|p| y.iter().map(move |q| (p * q) as f64)).collect())
            .collect();
        let mut all_full = true;
        for s in subsets(5, 4) {
            let rows: Vec<Vec<f64>> = s.iter().map(|&i| prods[i].clone()).collect();
            if real_rank(rows) < 4 {
                all_full = false;
            }
        }
        prop_assert_eq!(report.satisfied, all_full);
        prop_assert_eq!(report.tuple_size, 4);
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

fn real_rank(mut rows: Vec<Vec<f64>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).max_by(|&i, &j| rows[i][c].abs().total_cmp(&rows[j][c].abs())) else { break };
        if rows[p][c].abs() < 1e-9 {
            continue;
        }
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank {
                let f = rows[i][c] / rows[rank][c];
                for j in 0..cols {
                    rows[i][j] -= f * rows[rank][j];
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn exact_and_float_ranks_agree_on_fixtures() {
    let mut checked = 0;
    for f in catalog::all_fixtures() {
        if f.rep.mode() == Mode::Float {
            continue;
        }
        let float = f.rep.as_float();
        let k = f.rep.len();
        let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
        let mut sets: Vec<Vec<usize>> = (0..k).flat_map(|i| (i + 1..k).map(move |j| vec![i, j])).collect();
        for _ in 0..300 {
            let size = rng.gen_range(1..=k.min(f.d + 2));
            let mut s: Vec<usize> = (0..k).collect();
            for i in (1..k).rev() {
                s.swap(i, rng.gen_range(0..=i));
            }
            s.truncate(size);
            sets.push(s);
        }
        for s in &sets {
            assert_eq!(rank_of_subset(&f.rep, s).unwrap(), rank_of_subset(&float, s).unwrap(), "{} {:?}", f.name, s);
            checked += 1;
        }
    }
    assert!(checked > 1000);
}

#[test]
fn float_verification_agrees_with_exact_on_fixtures() {
    for f in catalog::all_fixtures() {
        let Some(name) = &f.graph else { continue };
        let g = catalog::get_graph(name).unwrap();
        let exact = verify_representation(&g, &f.rep, FloatTolerance::default()).unwrap();
        let float = verify_representation(&g, &f.rep.as_float(), FloatTolerance::default()).unwrap();
        assert!(exact.pass, "{}", f.name);
        assert_eq!(exact.pass, float.pass, "{}", f.name);
    }
}

#[test]
fn forced_classes_are_parallel_in_fixtures() {
    for f in catalog::all_fixtures() {
        let Some(name) = &f.graph else { continue };
        let g = catalog::get_graph(name).unwrap();
        let p = propagate_equalities(&g, f.d);
        assert!(!p.is_impossible(), "{name} has a FOR({}) yet propagation refutes it", f.d);
        for class in &p.forced {
            assert_eq!(rank_of_subset(&f.rep, class).unwrap(), 1, "{name} class {class:?}");
        }
    }
}

#[test]
fn bounds_match_arithmetic() {
    for d in 2..=5usize {
        for n in 2..=5usize {
            let b = gupb_lower_bound(d, n).unwrap();
            let p = d.pow(n as u32 - 1) as u64;
            let (num, den) = (n as u64 * p - 1, n as u64 - 1);
            let k = b.minimal_size;
            assert!(k * den >= num && (k - 1) * den < num, "d={d} N={n}");
            assert_eq!(b.saturated, num % den == 0);
            assert_eq!(b.numerator * den, num * b.denominator);
            let g = gcd(b.numerator, b.denominator);
            assert_eq!(g, 1);
            assert_eq!(tuple_size(k as usize, d, n).unwrap() as u64, k - p + 1);
            if b.saturated {
                assert_eq!(b.required_log_regularity.degrees(), vec![(k - p) as usize]);
            }
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

#[test]
fn edge_feasibility_matches_counting() {
    for n in 1..=16usize {
        for r1 in 0..n {
            for r2 in 0..n {
                for r3 in 0..n {
                    let rs = [r1, r2, r3];
                    let res = decomposition_edge_feasible(n, &rs);
                    if rs.iter().any(|r| r * n % 2 == 1) {
                        assert!(res.is_err());
                        continue;
                    }
                    let f = res.unwrap();
                    // every vertex needs n - 1 incident edges in total
                    assert_eq!(f.feasible, r1 + r2 + r3 == n - 1, "n={n} {rs:?}");
                }
            }
        }
    }
}

#[test]
fn degree_sequences_match_enumeration() {
    for n in 0..=8usize {
        for m in 1..=4usize {
            let allowed: Vec<usize> = (3..3 + m).collect();
            // non-decreasing sequences of length n over m values
            fn count(n: usize, m: usize) -> u128 {
                if m == 1 || n == 0 {
                    return 1;
                }
                (0..=n).map(|first| count(n - first, m - 1)).sum()
            }
            assert_eq!(count_degree_sequences(n, &allowed), count(n, m), "n={n} m={m}");
        }
    }
}

#[test]
fn complex_pair_spanning_on_unit_vectors() {
    let s = 1.0 / 2f64.sqrt();
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let a = Representation::float(2, vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(0.0, s)]]).unwrap();
    // products u (x) u stay in the symmetric subspace
    let r = check_pair_spanning(&a, &a, None).unwrap();
    assert!(!r.satisfied);
    assert_eq!(r.rank_bound, Some(3));
    let dup = Representation::float(2, vec![vec![c(1.0, 0.0), c(0.0, 0.0)]; 4]).unwrap();
    let r = check_pair_spanning(&dup, &a, None).unwrap();
    assert!(!r.satisfied);
}
