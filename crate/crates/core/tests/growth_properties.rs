use endogrow::endo::Endomorphism;
use endogrow::growth::{evaluate, gr_exact_abelian, gr_nilpotent, km_table, KmOptions};
use endogrow::group::HeisenbergGenerators;
use endogrow::laws::{default_catalog, DEFAULT_SEED};
use endogrow::oracle::BfsOptions;
use endogrow::par::Execution;
use endogrow::products::direct_product;
use endogrow::spec::{parse_instance, parse_suite, to_json, SuiteSpec};
use endogrow::{Group, IntMatrix, LengthMode, Word};
use num_bigint::BigInt;
use proptest::prelude::*;

fn letter() -> impl Strategy<Value = char> {
    prop::sample::select(vec!['a', 'b', 'A', 'B'])
}

fn image() -> impl Strategy<Value = String> {
    prop::collection::vec(letter(), 1..=4).prop_map(|v| v.into_iter().collect())
}

/// Free reduction by a stack, written independently of the library.
fn reduce(s: &str) -> String {
    let mut out: Vec<char> = Vec::new();
    for c in s.chars() {
        let inverse = if c.is_ascii_lowercase() { c.to_ascii_uppercase() } else { c.to_ascii_lowercase() };
        if out.last() == Some(&inverse) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out.into_iter().collect()
}

fn invert(s: &str) -> String {
    s.chars()
        .rev()
        .map(|c| if c.is_ascii_lowercase() { c.to_ascii_uppercase() } else { c.to_ascii_lowercase() })
        .collect()
}

/// `|α^m(a)|, |α^m(b)|` by repeated textual substitution.
fn orbit_oracle(images: &[String; 2], max_m: usize) -> Vec<u64> {
    let subst = |w: &str| -> String {
        let mut s = String::new();
        for c in w.chars() {
            match c {
                'a' => s.push_str(&images[0]),
                'b' => s.push_str(&images[1]),
                'A' => s.push_str(&invert(&images[0])),
                _ => s.push_str(&invert(&images[1])),
            }
        }
        reduce(&s)
    };
    let (mut x, mut y) = ("a".to_string(), "b".to_string());
    let mut k = Vec::new();
    for _ in 0..max_m {
        x = subst(&x);
        y = subst(&y);
        k.push(x.len().max(y.len()) as u64);
    }
    k
}

fn words(images: &[String; 2]) -> Endomorphism {
    Endomorphism::words(&[&images[0], &images[1]], 2).unwrap()
}

fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    (2usize..=3).prop_flat_map(|n| {
        prop::collection::vec(-3i64..=3, n * n).prop_map(move |v| {
            IntMatrix::from_rows(&v.chunks(n).map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn km_table_matches_orbit_oracle(a in image(), b in image()) {
        let images = [a, b];
        let t = km_table(&words(&images), &Group::free(2), 7, KmOptions::default()).unwrap();
        let want: Vec<BigInt> = orbit_oracle(&images, 7).into_iter().map(BigInt::from).collect();
        prop_assert_eq!(t.k, want);
    }

    #[test]
    fn k_is_submultiplicative(a in image(), b in image()) {
        let t = km_table(&words(&[a, b]), &Group::free(2), 8, KmOptions::default()).unwrap();
        let k = &t.k;
        for i in 0..k.len() {
            for j in 0..k.len() - i - 1 {
                prop_assert!(k[i + j + 1] <= &k[i] * &k[j], "K_{} > K_{} K_{}", i + j + 2, i + 1, j + 1);
            }
            prop_assert!(k[i] <= k[0].pow(i as u32 + 1));
        }
    }

    #[test]
    fn roots_bound_the_exact_rate(a in small_matrix()) {
        let g = Group::free_abelian(a.rows());
        let alpha = Endomorphism::Matrix(a);
        let exact = gr_exact_abelian(&alpha, &g).unwrap();
        let t = km_table(&alpha, &g, 40, KmOptions::default()).unwrap();
        for r in &t.roots {
            prop_assert!(*r >= exact - 1e-9, "root {} below {}", r, exact);
        }
        prop_assert!(t.inf_bound >= exact - 1e-9);
    }

    #[test]
    fn ratio_estimate_approaches_the_spectral_radius(a in small_matrix()) {
        let g = Group::free_abelian(a.rows());
        let alpha = Endomorphism::Matrix(a);
        let exact = gr_exact_abelian(&alpha, &g).unwrap();
        let t = km_table(&alpha, &g, 300, KmOptions::default()).unwrap();
        prop_assert!((t.ratio_estimate - exact).abs() <= 0.05 * exact.max(1.0), "{} vs {}", t.ratio_estimate, exact);
    }

    #[test]
    fn heisenberg_layers(lambda in -4i64..=4, gamma in -4i64..=4) {
        prop_assume!(lambda != 0 && gamma != 0);
        let g = Group::heisenberg(HeisenbergGenerators::Standard);
        let r = gr_nilpotent(&Endomorphism::heisenberg(lambda, gamma), &g).unwrap();
        let (l, c) = (lambda.abs() as f64, gamma.abs() as f64);
        prop_assert!((r.layers[0] - l.max(c)).abs() < 1e-9);
        prop_assert!((r.layers[1] - l * c).abs() < 1e-9);
        prop_assert!((r.combined - l.max(c)).abs() < 1e-9);
        prop_assert!((r.without_exponents - (l * c).max(l.max(c))).abs() < 1e-9);
    }
}

#[test]
fn heisenberg_estimates_follow_the_first_layer() {
    let g = Group::heisenberg(HeisenbergGenerators::Standard).with_length_mode(LengthMode::Quasi);
    for (l, c) in [(2, 2), (1, 3), (3, 2), (2, 1)] {
        let alpha = Endomorphism::heisenberg(l, c);
        let t = km_table(&alpha, &g, 16, KmOptions::default()).unwrap();
        let want = gr_nilpotent(&alpha, &g).unwrap().combined;
        assert!((t.ratio_estimate - want).abs() < 0.1, "({l},{c}): {} vs {want}", t.ratio_estimate);
    }
}

#[test]
fn bfs_lengths_agree_with_exact_until_truncation() {
    let alpha = Endomorphism::words(&["ab", "a"], 2).unwrap();
    let exact = km_table(&alpha, &Group::free(2), 6, KmOptions::default()).unwrap();
    let g = Group::free(2).with_length_mode(LengthMode::BfsOracle { radius: 9 });
    let bfs = km_table(&alpha, &g, 6, KmOptions::default()).unwrap();
    // K = 2, 3, 5, 8, 13: the ball of radius 9 covers m ≤ 4
    assert_eq!(bfs.max_m(), 4);
    assert_eq!(bfs.k, exact.k[..4]);
}

#[test]
fn execution_modes_agree() {
    let alpha = Endomorphism::words(&["abA", "bab"], 2).unwrap();
    let g = Group::free(2);
    let seq = KmOptions { execution: Execution::Sequential, bfs: None };
    let par = KmOptions { execution: Execution::Parallel, bfs: Some(BfsOptions::default()) };
    assert_eq!(km_table(&alpha, &g, 9, seq).unwrap(), km_table(&alpha, &g, 9, par).unwrap());
}

#[test]
fn direct_product_takes_the_maximum() {
    let g = direct_product(Group::free(2), Group::free_abelian(1));
    let alpha = Endomorphism::Product(
        Box::new(Endomorphism::words(&["ab", "a"], 2).unwrap()),
        Box::new(Endomorphism::matrix(&[vec![-2]]).unwrap()),
    );
    let t = km_table(&alpha, &g, 24, KmOptions::default()).unwrap();
    assert!((t.ratio_estimate - 2.0).abs() < 0.01, "{}", t.ratio_estimate);
    let ev = evaluate(&Endomorphism::matrix(&[vec![2, 0], vec![0, 3]]).unwrap(), &Group::free_abelian(2), 10, KmOptions::default()).unwrap();
    assert!((ev.value - 3.0).abs() < 1e-12);
}

#[test]
fn word_substitution_matches_textual_oracle() {
    let images = ["abA".to_string(), "bba".to_string()];
    let w = Word::parse("aBab", 2).unwrap();
    let subs = [Word::parse(&images[0], 2).unwrap(), Word::parse(&images[1], 2).unwrap()];
    let mut text = String::new();
    for c in "aBab".chars() {
        match c {
            'a' => text.push_str(&images[0]),
            'b' => text.push_str(&images[1]),
            'A' => text.push_str(&invert(&images[0])),
            _ => text.push_str(&invert(&images[1])),
        }
    }
    assert_eq!(w.substitute(&subs).to_string(), reduce(&text));
}

#[test]
fn catalog_instances_round_trip() {
    let catalog = default_catalog(DEFAULT_SEED);
    for check in &catalog {
        let text = to_json(&check.instance);
        let back = parse_instance(&text).unwrap();
        assert_eq!(back, check.instance, "{text}");
        assert_eq!(back.build().unwrap().group, check.instance.build().unwrap().group);
    }
    let suite = SuiteSpec { seed: Some(3), checks: catalog };
    assert_eq!(parse_suite(&to_json(&suite)).unwrap(), suite);
}
