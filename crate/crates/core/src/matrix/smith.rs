use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Smith normal form `U·A·V = D` with `U`, `V` unimodular.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

struct Work {
    d: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap(a, b);
        self.u.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for row in self.d.iter_mut().chain(self.v.iter_mut()) {
            row.swap(a, b);
        }
    }

    // row[target] += k · row[source]
    fn add_row(&mut self, target: usize, source: usize, k: &BigInt) {
        for m in [&mut self.d, &mut self.u] {
            let src = m[source].clone();
            for (x, s) in m[target].iter_mut().zip(&src) {
                *x += k * s;
            }
        }
    }

    // col[target] += k · col[source]
    fn add_col(&mut self, target: usize, source: usize, k: &BigInt) {
        for m in [&mut self.d, &mut self.v] {
            for row in m.iter_mut() {
                let s = row[source].clone();
                row[target] += k * s;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for m in [&mut self.d, &mut self.u] {
            for x in m[r].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
    }

    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in self.d.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

fn to_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    m.to_rows()
}

fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> IntMatrix {
    let r = rows.len();
    IntMatrix::new(r, cols, rows.into_iter().flatten().collect()).expect("rectangular by construction")
}

impl SmithForm {
    /// Reduces `a` by unimodular row and column operations.
    pub fn compute(a: &IntMatrix) -> SmithForm {
        let (m, n) = (a.rows(), a.cols());
        let mut w = Work {
            d: to_rows(a),
            u: to_rows(&IntMatrix::identity(m)),
            v: to_rows(&IntMatrix::identity(n)),
        };
        for t in 0..m.min(n) {
            loop {
                let Some((pi, pj)) = w.min_pivot(t) else {
                    return w.finish(m, n);
                };
                w.swap_rows(t, pi);
                w.swap_cols(t, pj);
                let pivot = w.d[t][t].clone();
                let mut clean = true;
                for i in t + 1..m {
                    let q = w.d[i][t].div_floor(&pivot);
                    if !q.is_zero() {
                        w.add_row(i, t, &-q);
                    }
                    clean &= w.d[i][t].is_zero();
                }
                for j in t + 1..n {
                    let q = w.d[t][j].div_floor(&pivot);
                    if !q.is_zero() {
                        w.add_col(j, t, &-q);
                    }
                    clean &= w.d[t][j].is_zero();
                }
                if !clean {
                    continue;
                }
                // pivot must divide the rest; otherwise fold an offending row in
                let offending = (t + 1..m).find(|&i| (t + 1..n).any(|j| !w.d[i][j].is_multiple_of(&pivot)));
                match offending {
                    Some(i) => w.add_row(t, i, &BigInt::from(1)),
                    None => {
                        if pivot.is_negative() {
                            w.negate_row(t);
                        }
                        break;
                    }
                }
            }
        }
        w.finish(m, n)
    }

    /// Diagonal entries `d₁ | d₂ | …`, including trailing zeros.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.invariant_factors().iter().filter(|x| !x.is_zero()).count()
    }
}

impl Work {
    fn finish(self, m: usize, n: usize) -> SmithForm {
        SmithForm { d: from_rows(self.d, n), u: from_rows(self.u, m), v: from_rows(self.v, n) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn check(a: &IntMatrix) -> SmithForm {
        let s = a.smith_normal_form();
        assert_eq!(s.u.mul(a).unwrap().mul(&s.v).unwrap(), s.d);
        assert!(s.u.determinant().unwrap().abs().is_one());
        assert!(s.v.determinant().unwrap().abs().is_one());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        s
    }

    #[test]
    fn small_cases() {
        let s = check(&IntMatrix::diagonal(&[2, 3]));
        assert_eq!(s.d, IntMatrix::diagonal(&[1, 6]));
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
        let s = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 0]]).unwrap());
        assert_eq!(s.d, IntMatrix::diagonal(&[2, 0]));
        let s = check(&IntMatrix::from_rows(&[vec![2], vec![0]]).unwrap());
        assert_eq!(s.invariant_factors(), vec![BigInt::from(2)]);
        check(&IntMatrix::zeros(2, 3));
        check(&IntMatrix::zeros(0, 0));
    }

    proptest! {
        #[test]
        fn invariants_hold(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-9i64..=9, 16)) {
            let data: Vec<BigInt> = seed.iter().take(rows * cols).map(|&x| BigInt::from(x)).collect();
            let a = IntMatrix::new(rows, cols, data).unwrap();
            let s = check(&a);
            if rows == cols {
                let prod: BigInt = s.invariant_factors().iter().product();
                prop_assert_eq!(prod.abs(), a.determinant().unwrap().abs());
            }
        }
    }
}
