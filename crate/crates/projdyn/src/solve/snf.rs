//! Small integer matrix utilities for monomial maps: determinants and a
//! 2x2 Smith normal form used to solve x^B = c on the torus.

/// Determinant of a small integer matrix (Bareiss-free cofactor expansion;
/// dimensions here are at most 4).
pub fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => {
            let mut acc = 0i128;
            for j in 0..n {
                let minor: Vec<Vec<i128>> = (1..n)
                    .map(|i| {
                        (0..n)
                            .filter(|&k| k != j)
                            .map(|k| m[i][k])
                            .collect()
                    })
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                acc += s * m[0][j] * det_i128(&minor);
            }
            acc
        }
    }
}

fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = egcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

type Mat2 = [[i64; 2]; 2];

fn mat2_mul(a: Mat2, b: Mat2) -> Mat2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

const ID2: Mat2 = [[1, 0], [0, 1]];

/// Diagonalize: returns (L, D, R) with D = L * B * R diagonal and L, R
/// unimodular. (Divisibility of the diagonal is not needed here.)
pub fn diagonalize_2x2(b: Mat2) -> (Mat2, Mat2, Mat2) {
    let mut d = b;
    let mut l = ID2;
    let mut r = ID2;
    for _ in 0..64 {
        if d[1][0] == 0 && d[0][1] == 0 {
            break;
        }
        if d[1][0] != 0 {
            let (g, s, t) = egcd(d[0][0], d[1][0]);
            let row_op: Mat2 = [[s, t], [-d[1][0] / g, d[0][0] / g]];
            d = mat2_mul(row_op, d);
            l = mat2_mul(row_op, l);
        }
        if d[0][1] != 0 {
            let (g, s, t) = egcd(d[0][0], d[0][1]);
            let col_op: Mat2 = [[s, -d[0][1] / g], [t, d[0][0] / g]];
            d = mat2_mul(d, col_op);
            r = mat2_mul(r, col_op);
        }
    }
    debug_assert_eq!(d[1][0], 0);
    debug_assert_eq!(d[0][1], 0);
    (l, d, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_reconstructs() {
        let cases: [Mat2; 4] = [[[2, 0], [0, 3]], [[-1, 0], [0, -1]], [[2, 1], [1, 2]], [[3, 5], [2, 7]]];
        for b in cases {
            let (l, d, r) = diagonalize_2x2(b);
            // det L, det R = ±1 and L B R = D.
            let det = |m: Mat2| m[0][0] * m[1][1] - m[0][1] * m[1][0];
            assert_eq!(det(l).abs(), 1);
            assert_eq!(det(r).abs(), 1);
            assert_eq!(mat2_mul(mat2_mul(l, b), r), d);
            assert_eq!((d[0][0] * d[1][1]).abs(), det(b).abs());
        }
    }
}
