use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::group::Word;
use crate::matrix::{IntMatrix, DEFAULT_TOLERANCE};
use crate::spec::{
    matrix_spec, small_matrix, CheckSpec, EndoSpec, GroupSpec, InstanceSpec, LengthModeSpec, OptionsSpec,
    SubgroupSpec,
};

pub const DEFAULT_SEED: u64 = 20_240_917;

fn check(law: &str, instance: InstanceSpec) -> CheckSpec {
    CheckSpec { law: law.to_string(), instance }
}

fn za(rank: usize) -> GroupSpec {
    GroupSpec::FreeAbelian { rank }
}

fn mat(rows: &[Vec<i64>]) -> EndoSpec {
    EndoSpec::Matrix { rows: small_matrix(rows) }
}

fn heis(lambda: i64, gamma: i64) -> InstanceSpec {
    InstanceSpec::new(
        GroupSpec::Heisenberg { generators: Default::default() },
        EndoSpec::Heisenberg { lambda: lambda.into(), gamma: gamma.into() },
    )
    .with_options(OptionsSpec { length_mode: Some(LengthModeSpec::Quasi), ..Default::default() })
}

fn opts(max_m: Option<usize>, power: Option<u32>) -> OptionsSpec {
    OptionsSpec { max_m, power, ..Default::default() }
}

/// A random square matrix with entries in `[-3, 3]` and spectral radius at least 1.
pub(crate) fn random_matrix<R: Rng>(rng: &mut R, n: usize) -> IntMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let a = IntMatrix::from_rows(&rows).expect("square");
        if a.spectral_radius(DEFAULT_TOLERANCE).map(|r| r >= 1.0 - 1e-9).unwrap_or(false) {
            return a;
        }
    }
}

/// Images of length at most 4 over `a, b, A, B`, freely reduced.
pub(crate) fn random_free_endo<R: Rng>(rng: &mut R) -> Vec<String> {
    (0..2)
        .map(|_| {
            let len = rng.gen_range(1..=4);
            let letters: Vec<i32> = (0..len).map(|_| [1, 2, -1, -2][rng.gen_range(0..4)]).collect();
            Word::from_letters(letters).to_string()
        })
        .collect()
}

fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> IntMatrix {
    let mut p = IntMatrix::identity(n);
    for _ in 0..3 {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let mut e = IntMatrix::identity(n).to_rows();
        e[i][j] = rng.gen_range(-2..=2i64).into();
        p = p.mul(&IntMatrix::from_rows(&e).expect("square")).expect("square");
    }
    p
}

/// An abelian instance with an invariant sublattice.
///
/// `A = P·M·P⁻¹` with `M` block upper triangular, and `H` spanned by `d`
/// times the first `k` columns of `P`. When `complemented`, `P = I` and
/// `d = 1`, so `H` is spanned by standard generators.
pub(crate) fn random_invariant_instance<R: Rng>(rng: &mut R, complemented: bool) -> InstanceSpec {
    let n = rng.gen_range(2..=3usize);
    let k = rng.gen_range(1..n);
    let mut m = vec![vec![0i64; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            if !(i >= k && j < k) {
                *x = rng.gen_range(-3..=3);
            }
        }
    }
    let m = IntMatrix::from_rows(&m).expect("square");
    let (p, d) = if complemented { (IntMatrix::identity(n), 1) } else { (random_unimodular(rng, n), rng.gen_range(1..=3i64)) };
    let a = p.mul(&m).and_then(|x| x.mul(&p.inverse_unimodular()?)).expect("unimodular");
    let cols: Vec<usize> = (0..k).collect();
    let rows: Vec<usize> = (0..n).collect();
    let basis = p.select(&rows, &cols).scale(&d.into());
    let label = format!(
        "Z^{n}, alpha = {a}, H = span of columns of {basis}{}",
        if complemented { " (complemented)" } else { "" }
    );
    InstanceSpec::new(za(n), EndoSpec::Matrix { rows: matrix_spec(&a) })
        .with_subgroup(SubgroupSpec::Sublattice { basis: matrix_spec(&basis) })
        .labeled(label)
}

/// The built-in instance catalog; random instances are drawn from `seed`.
pub fn default_catalog(seed: u64) -> Vec<CheckSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let example = InstanceSpec::new(za(2), mat(&[vec![0, 2], vec![1, 0]]));
    let fib = InstanceSpec::new(GroupSpec::Free { rank: 2 }, EndoSpec::Words { images: vec!["ab".into(), "a".into()] });
    let diag23 = InstanceSpec::new(za(2), mat(&[vec![2, 0], vec![0, 3]]));

    // Fekete and the generator bound on random free-group endomorphisms
    for i in 0..50 {
        let images = random_free_endo(&mut rng);
        let spec = InstanceSpec::new(GroupSpec::Free { rank: 2 }, EndoSpec::Words { images: images.clone() })
            .labeled(format!("F2 #{i}, a -> {}, b -> {}", images[0], images[1]))
            .with_options(opts(Some(8), None));
        out.push(check("thm2.2.1-fekete", spec.clone()));
        out.push(check("thm2.2.2-generator-bound", spec));
    }
    for base in [&example, &fib, &diag23] {
        out.push(check("thm2.2.1-fekete", base.clone().with_options(opts(Some(16), None))));
        out.push(check("thm2.2.2-generator-bound", base.clone().with_options(opts(Some(16), None))));
    }

    // power law and the abelian formula on random matrices
    let mut random = Vec::new();
    for i in 0..20 {
        let a = random_matrix(&mut rng, 2 + i % 2);
        random.push(a);
    }
    for (i, a) in random.iter().enumerate() {
        let base = InstanceSpec::new(za(a.rows()), EndoSpec::Matrix { rows: matrix_spec(a) })
            .labeled(format!("random #{i}, Z^{}, alpha = {a}", a.rows()));
        for n in [2, 3] {
            out.push(check("thm2.2.3-power", base.clone().with_options(opts(Some(300), Some(n)))));
        }
        out.push(check("thm4.1-abelian", base.clone().with_options(opts(Some(300), None))));
    }
    out.push(check("thm2.2.3-power", example.clone().with_options(opts(Some(40), Some(2)))));
    out.push(check(
        "thm2.2.3-power",
        InstanceSpec::new(GroupSpec::Free { rank: 2 }, EndoSpec::Identity).with_options(opts(Some(8), Some(3))),
    ));
    out.push(check("thm2.2.3-power", fib.clone().with_options(opts(Some(16), Some(2)))));

    // H_r chain
    out.push(check("lemma2.5-hr-subgroup", diag23.clone()));
    out.push(check(
        "lemma2.5-hr-subgroup",
        InstanceSpec::new(za(3), mat(&[vec![2, 1, 0], vec![0, 2, 0], vec![0, 0, 5]]))
            .with_options(OptionsSpec { r: Some(3.0), ..Default::default() }),
    ));
    out.push(check(
        "lemma2.5-hr-subgroup",
        InstanceSpec::new(za(2), mat(&[vec![1, 1], vec![0, 1]]))
            .with_options(OptionsSpec { r: Some(1.2), ..Default::default() }),
    ));

    // finite index
    let h21 = SubgroupSpec::Sublattice { basis: small_matrix(&[vec![2, 0], vec![0, 1]]) };
    out.push(check("thm3.1-finite-index", diag23.clone().with_subgroup(h21.clone())));
    for a in random.iter().take(6) {
        let n = a.rows();
        let basis = IntMatrix::identity(n).scale(&2.into());
        out.push(check(
            "thm3.1-finite-index",
            InstanceSpec::new(za(n), EndoSpec::Matrix { rows: matrix_spec(a) })
                .with_subgroup(SubgroupSpec::Sublattice { basis: matrix_spec(&basis) }),
        ));
    }
    out.push(check(
        "thm3.1-finite-index",
        InstanceSpec::new(za(2), mat(&[vec![1, 1], vec![0, 2]]))
            .with_subgroup(SubgroupSpec::Sublattice { basis: small_matrix(&[vec![1, 1], vec![0, 2]]) }),
    ));

    // quotient, extension and complement on invariant sublattices
    for i in 0..20 {
        let spec = random_invariant_instance(&mut rng, i % 2 == 0);
        out.push(check("lemma3.2-quotient", spec.clone()));
        out.push(check("thm3.3-extension", spec.clone()));
        if i % 2 == 0 {
            out.push(check("cor3.4-complement", spec));
        }
    }
    out.push(check("lemma3.2-quotient", diag23.clone().with_subgroup(h21.clone())));
    out.push(check("thm3.3-extension", diag23.clone().with_subgroup(h21)));
    let heis22 = heis(2, 2).with_subgroup(SubgroupSpec::LowerCentral { j: 2 });
    out.push(check("lemma3.2-quotient", heis22.clone()));
    out.push(check("thm3.3-extension", heis22));
    let z_times_z = GroupSpec::DirectProduct { left: Box::new(za(1)), right: Box::new(za(1)) };
    let mult = |m: i64| EndoSpec::Matrix { rows: small_matrix(&[vec![m]]) };
    let prod23 = InstanceSpec::new(
        z_times_z.clone(),
        EndoSpec::Product { left: Box::new(mult(2)), right: Box::new(mult(3)) },
    );
    out.push(check("cor3.4-complement", prod23.clone().with_subgroup(SubgroupSpec::Factor { index: 1 })));
    let flip = GroupSpec::Semidirect { base_rank: 2, action: vec![small_matrix(&[vec![-1, 0], vec![0, -1]])] };
    let flip_endo = EndoSpec::Semidirect { base: small_matrix(&[vec![2, 1], vec![1, 1]]), quotient: small_matrix(&[vec![1]]) };
    out.push(check(
        "cor3.4-complement",
        InstanceSpec::new(flip.clone(), flip_endo.clone()).with_subgroup(SubgroupSpec::SemidirectBase),
    ));

    // abelian formula
    out.push(check("thm4.1-abelian", example.clone().with_options(opts(Some(20), None))));
    out.push(check("thm4.1-abelian", InstanceSpec::new(za(1), mult(3)).with_options(opts(Some(20), None))));
    out.push(check("thm4.1-abelian", diag23.clone()));
    out.push(check(
        "thm4.1-abelian",
        InstanceSpec::new(
            GroupSpec::AbelianQuotient { relations: small_matrix(&[vec![4], vec![0], vec![0]]) },
            mat(&[vec![2, 1, 0], vec![1, 1, 0], vec![0, 0, 3]]),
        ),
    ));

    // nilpotent layers
    for (l, g) in [(2, 2), (1, 3), (3, 5), (2, 1), (1, 1)] {
        out.push(check("lemma4.3-lcs", heis(l, g)));
        out.push(check("thm4.4-nilpotent", heis(l, g)));
    }
    for (l, g) in [(2, 2), (3, 3), (2, 5)] {
        out.push(check("thm4.4-counterexample", heis(l, g)));
    }

    // products
    out.push(check("lemma5.1-direct", prod23.clone()));
    out.push(check(
        "lemma5.1-direct",
        InstanceSpec::new(
            GroupSpec::DirectProduct { left: Box::new(GroupSpec::Free { rank: 2 }), right: Box::new(za(2)) },
            EndoSpec::Product {
                left: Box::new(EndoSpec::Words { images: vec!["ab".into(), "a".into()] }),
                right: Box::new(mat(&[vec![0, 2], vec![1, 0]])),
            },
        ),
    ));
    out.push(check(
        "lemma5.1-direct",
        InstanceSpec::new(
            GroupSpec::DirectProduct {
                left: Box::new(GroupSpec::Heisenberg { generators: Default::default() }),
                right: Box::new(za(1)),
            },
            EndoSpec::Product {
                left: Box::new(EndoSpec::Heisenberg { lambda: 2.into(), gamma: 2.into() }),
                right: Box::new(mult(3)),
            },
        )
        .with_options(OptionsSpec { length_mode: Some(LengthModeSpec::Quasi), ..Default::default() }),
    ));
    let z_star_z = GroupSpec::FreeProduct { left: Box::new(za(1)), right: Box::new(za(1)) };
    out.push(check(
        "lemma5.2-free",
        InstanceSpec::new(z_star_z, EndoSpec::Product { left: Box::new(mult(2)), right: Box::new(mult(3)) }),
    ));
    out.push(check(
        "lemma5.2-free",
        InstanceSpec::new(
            GroupSpec::FreeProduct { left: Box::new(GroupSpec::Free { rank: 2 }), right: Box::new(za(1)) },
            EndoSpec::Product {
                left: Box::new(EndoSpec::Words { images: vec!["ab".into(), "a".into()] }),
                right: Box::new(mult(2)),
            },
        ),
    ));

    // semidirect and polycyclic
    let cyclic = |sign: i64| GroupSpec::Semidirect { base_rank: 1, action: vec![small_matrix(&[vec![sign]])] };
    let cbc = |sign: i64, b: i64, c: i64| {
        InstanceSpec::new(
            cyclic(sign),
            EndoSpec::Semidirect { base: small_matrix(&[vec![b]]), quotient: small_matrix(&[vec![c]]) },
        )
    };
    out.push(check("thm5.4-semidirect", InstanceSpec::new(flip.clone(), flip_endo)));
    out.push(check(
        "thm5.4-semidirect",
        InstanceSpec::new(
            GroupSpec::Semidirect { base_rank: 2, action: vec![small_matrix(&[vec![0, 1], vec![1, 0]])] },
            EndoSpec::Semidirect { base: small_matrix(&[vec![2, 1], vec![1, 2]]), quotient: small_matrix(&[vec![3]]) },
        ),
    ));
    out.push(check("thm5.4-semidirect", cbc(-1, 2, 3)));
    out.push(check("thm5.4-semidirect", cbc(1, 5, -2)));
    out.push(check("lemma5.6-polycyclic", cbc(-1, 2, 3).labeled("Z x| Z with action -1, base multiplier 2, quotient multiplier 3")));
    out.push(check("lemma5.6-polycyclic", cbc(-1, -2, 1)));
    out.push(check("lemma5.6-polycyclic", cbc(1, 4, 0)));
    out.push(check("lemma5.6-polycyclic", InstanceSpec::new(za(2), mat(&[vec![2, 5], vec![0, 3]]))));
    out.push(check(
        "lemma5.6-polycyclic",
        InstanceSpec::new(za(3), mat(&[vec![1, 2, -1], vec![0, -4, 3], vec![0, 0, 2]])),
    ));

    // distortion
    let cat = GroupSpec::Semidirect { base_rank: 2, action: vec![small_matrix(&[vec![2, 1], vec![1, 1]])] };
    out.push(check(
        "lemma5.8-distortion",
        InstanceSpec::new(cat, EndoSpec::Identity).with_options(OptionsSpec {
            radius: Some(12),
            max_m: Some(30),
            ..Default::default()
        }),
    ));
    out.push(check(
        "lemma5.8-distortion",
        InstanceSpec::new(flip, EndoSpec::Identity).with_options(OptionsSpec { radius: Some(9), ..Default::default() }),
    ));
    out.push(check(
        "lemma5.8-distortion",
        InstanceSpec::new(
            GroupSpec::Semidirect { base_rank: 2, action: vec![small_matrix(&[vec![1, 0], vec![0, 1]])] },
            EndoSpec::Identity,
        )
        .with_options(OptionsSpec { radius: Some(8), ..Default::default() }),
    ));
    out
}
