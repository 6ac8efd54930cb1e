//! Exact linear algebra over the coefficient field plus a Smith normal form
//! over the integers.

use crate::scalars::Fe;

pub type Matrix = Vec<Vec<Fe>>;

/// Row echelon form by fraction-free (Bareiss) elimination.
///
/// Pivots are the first nonzero entry in the fixed row order. Returns the
/// echelon rows and the pivot columns.
pub fn echelon(m: &[Vec<Fe>], ncols: usize) -> (Matrix, Vec<usize>) {
    let mut a: Matrix = m.to_vec();
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut prev = Fe::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..nrows {
            if a[i][c].is_zero() {
                // a[i][j]·pivot/prev keeps the Bareiss invariant
                let f = &a[r][c] / &prev;
                for j in c..ncols {
                    if !a[i][j].is_zero() {
                        a[i][j] = &a[i][j] * &f;
                    }
                }
                continue;
            }
            for j in c + 1..ncols {
                let v = &(&a[r][c] * &a[i][j]) - &(&a[i][c] * &a[r][j]);
                a[i][j] = &v / &prev;
            }
            a[i][c] = Fe::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank(m: &[Vec<Fe>], ncols: usize) -> usize {
    echelon(m, ncols).1.len()
}

/// Basis of {x : m·x = 0}, one vector per free column, each with a 1 in
/// its free column.
pub fn kernel(m: &[Vec<Fe>], ncols: usize) -> Matrix {
    let (e, pivots) = echelon(m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::with_capacity(free.len());
    for &f in &free {
        let mut x = vec![Fe::zero(); ncols];
        x[f] = Fe::one();
        for (r, &pc) in pivots.iter().enumerate().rev() {
            let mut acc = Fe::zero();
            for j in pc + 1..ncols {
                if !e[r][j].is_zero() && !x[j].is_zero() {
                    acc = &acc + &(&e[r][j] * &x[j]);
                }
            }
            x[pc] = -(&acc / &e[r][pc]);
        }
        out.push(x);
    }
    out
}

/// A solution of m·x = b, if one exists.
pub fn solve(m: &[Vec<Fe>], ncols: usize, b: &[Fe]) -> Option<Vec<Fe>> {
    let aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (e, pivots) = echelon(&aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Fe::zero(); ncols];
    for (r, &pc) in pivots.iter().enumerate().rev() {
        let mut acc = e[r][ncols].clone();
        for j in pc + 1..ncols {
            if !e[r][j].is_zero() && !x[j].is_zero() {
                acc = &acc - &(&e[r][j] * &x[j]);
            }
        }
        x[pc] = &acc / &e[r][pc];
    }
    Some(x)
}

pub fn mat_vec(m: &[Vec<Fe>], v: &[Fe]) -> Vec<Fe> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .fold(Fe::zero(), |acc, (a, b)| &acc + &(a * b))
        })
        .collect()
}

pub fn mat_mul(a: &[Vec<Fe>], b: &[Vec<Fe>]) -> Matrix {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .enumerate()
                        .filter(|(k, x)| !x.is_zero() && !b[*k][j].is_zero())
                        .fold(Fe::zero(), |acc, (k, x)| &acc + &(x * &b[k][j]))
                })
                .collect()
        })
        .collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Fe::one() } else { Fe::zero() }).collect())
        .collect()
}

/// Integer matrix product.
pub fn imul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().enumerate().map(|(k, x)| x * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn iidentity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// Smith normal form: unimodular U, V and the diagonal entries d with
/// U·C·V = diag(d) (padded with zeros), d_i dividing d_{i+1}.
pub fn smith_normal_form(c: &[Vec<i64>]) -> (Vec<Vec<i64>>, Vec<i64>, Vec<Vec<i64>>) {
    let m = c.len();
    let n = c.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<i64>> = c.to_vec();
    let mut u = iidentity(m);
    let mut v = iidentity(n);
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry in the remaining block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..m {
            let f = a[i][t] / a[t][t];
            if f != 0 {
                for j in 0..n {
                    a[i][j] -= f * a[t][j];
                }
                for j in 0..m {
                    u[i][j] -= f * u[t][j];
                }
            }
            clean &= a[i][t] == 0;
        }
        for j in t + 1..n {
            let f = a[t][j] / a[t][t];
            if f != 0 {
                for i in 0..m {
                    a[i][j] -= f * a[i][t];
                }
                for row in v.iter_mut() {
                    row[j] -= f * row[t];
                }
            }
            clean &= a[t][j] == 0;
        }
        if !clean {
            continue;
        }
        // the pivot must divide the rest of the block
        let bad = (t + 1..m)
            .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| a[i][j] % a[t][t] != 0);
        if let Some((i, _)) = bad {
            for j in 0..n {
                a[t][j] += a[i][j];
            }
            for j in 0..m {
                u[t][j] += u[i][j];
            }
            continue;
        }
        if a[t][t] < 0 {
            for j in 0..n {
                a[t][j] = -a[t][j];
            }
            for j in 0..m {
                u[t][j] = -u[t][j];
            }
        }
        t += 1;
    }
    let d = (0..m.min(n)).map(|i| a[i][i]).collect();
    (u, d, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fm(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| Fe::int(x)).collect())
            .collect()
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = fm(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(&m, 3);
        assert_eq!(k.len(), 2);
        for x in &k {
            assert!(mat_vec(&m, x).iter().all(Fe::is_zero));
        }
    }

    #[test]
    fn solve_square() {
        let m = fm(&[&[2, 1], &[1, 3]]);
        let x = solve(&m, 2, &[Fe::int(3), Fe::int(5)]).unwrap();
        assert_eq!(x, vec![Fe::ratio(4, 5), Fe::ratio(7, 5)]);
        assert!(solve(&fm(&[&[1, 1], &[1, 1]]), 2, &[Fe::int(1), Fe::int(2)]).is_none());
    }

    #[test]
    fn smith_recovers_product() {
        let c = vec![vec![2, -2], vec![-4, 2]];
        let (u, d, v) = smith_normal_form(&c);
        let prod = imul(&imul(&u, &c), &v);
        assert_eq!(prod, vec![vec![d[0], 0], vec![0, d[1]]]);
        assert_eq!(d, vec![2, 2]);
        let c = vec![vec![2, 4, 4], vec![-6, 6, 12]];
        let (u, d, v) = smith_normal_form(&c);
        let prod = imul(&imul(&u, &c), &v);
        assert_eq!(prod[0][0], d[0]);
        assert_eq!(prod[1][1], d[1]);
        assert_eq!(d[1] % d[0], 0);
        assert_eq!(prod[0][1], 0);
        assert_eq!(prod[1][2], 0);
    }
}
