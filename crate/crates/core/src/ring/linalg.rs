//! Linear algebra over F_p and small matrices over commutative rings.

use super::{inv_mod_p, mul_mod_p, Ring, RingElement};

/// Row-reduce in place; returns the pivot columns.
fn row_reduce(m: &mut [Vec<u32>], p: u32) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = inv_mod_p(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = mul_mod_p(*x, inv, p);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for k in 0..cols {
                    let sub = mul_mod_p(f, m[r][k], p);
                    m[i][k] = (m[i][k] + p - sub) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_mod_p(mut m: Vec<Vec<u32>>, p: u32) -> usize {
    row_reduce(&mut m, p).len()
}

/// A solution of `m y = rhs`, if one exists.
pub fn solve_mod_p(m: Vec<Vec<u32>>, rhs: Vec<u32>, p: u32) -> Option<Vec<u32>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<u32>> = m
        .into_iter()
        .zip(rhs)
        .map(|(mut row, b)| {
            row.push(b % p);
            row
        })
        .collect();
    let pivots = row_reduce(&mut aug, p);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut y = vec![0; cols];
    for (r, &c) in pivots.iter().enumerate() {
        y[c] = aug[r][cols];
    }
    Some(y)
}

/// Determinant by cofactor expansion along the first row.
pub fn determinant(m: &[Vec<RingElement>], ring: &Ring) -> RingElement {
    match m.len() {
        0 => ring.one(),
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0])),
        n => {
            let mut acc = ring.zero();
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let term = m[0][c].mul(&determinant(&minor(m, 0, c), ring));
                acc = if c % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

fn minor(m: &[Vec<RingElement>], row: usize, col: usize) -> Vec<Vec<RingElement>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Inverse via the adjugate, if the determinant is a unit.
pub fn inverse(m: &[Vec<RingElement>], ring: &Ring) -> Option<Vec<Vec<RingElement>>> {
    let n = m.len();
    let det_inv = determinant(m, ring).inverse()?;
    if n == 1 {
        return Some(vec![vec![det_inv]]);
    }
    let mut out = vec![vec![ring.zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let cof = determinant(&minor(m, j, i), ring);
            let cof = if (i + j) % 2 == 0 { cof } else { cof.neg() };
            out[i][j] = cof.mul(&det_inv);
        }
    }
    Some(out)
}

pub fn mat_mul(a: &[Vec<RingElement>], b: &[Vec<RingElement>], ring: &Ring) -> Vec<Vec<RingElement>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(ring.zero(), |acc, k| acc.add(&row[k].mul(&b[k][j])))
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_and_rank() {
        let m = vec![vec![1, 1], vec![0, 1]];
        assert_eq!(rank_mod_p(m.clone(), 2), 2);
        assert_eq!(solve_mod_p(m, vec![1, 1], 2), Some(vec![0, 1]));
        assert_eq!(rank_mod_p(vec![vec![1, 2], vec![2, 4]], 3), 1);
        assert_eq!(solve_mod_p(vec![vec![1, 2], vec![2, 4]], vec![0, 1], 3), None);
    }

    #[test]
    fn inverse_of_matrices_over_dual_numbers() {
        let r = Ring::parse_spec("mq 3 vars=e bounds=2").unwrap();
        let elems: Vec<_> = r.elements().unwrap().collect();
        // all 2x2 matrices with entries in a spanning subset
        let picks = [&elems[0], &elems[1], &elems[3], &elems[5]];
        for a in picks {
            for b in picks {
                for c in picks {
                    for d in picks {
                        let m = vec![vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]];
                        let det = determinant(&m, &r);
                        match inverse(&m, &r) {
                            Some(inv) => {
                                let prod = mat_mul(&m, &inv, &r);
                                for (i, row) in prod.iter().enumerate() {
                                    for (j, x) in row.iter().enumerate() {
                                        assert_eq!(x.is_one(), i == j);
                                        assert!(i == j || x.is_zero());
                                    }
                                }
                            }
                            None => assert!(!det.is_unit()),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn three_by_three_determinant() {
        let r = Ring::prime_field(5).unwrap();
        let m: Vec<Vec<RingElement>> = [[2, 0, 1], [1, 3, 2], [1, 1, 1]]
            .iter()
            .map(|row| row.iter().map(|&c| r.from_int(c)).collect())
            .collect();
        // 2*(3-2) - 0 + 1*(1-3) = 0
        assert!(determinant(&m, &r).is_zero());
    }
}
