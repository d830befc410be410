//! Small dense helpers for the d ≤ 4 systems that show up in facet enumeration.

/// Solves `a · x = b` for a square row-major `a` by Gaussian elimination with
/// partial pivoting. Returns `None` when a pivot falls below `eps`.
pub(crate) fn solve(a: &[Vec<f64>], b: &[f64], eps: f64) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < eps {
            return None;
        }
        m.swap(col, piv);
        let (head, tail) = m.split_at_mut(col + 1);
        let pivot_row = &head[col];
        for row in tail.iter_mut() {
            let factor = row[col] / pivot_row[col];
            if factor != 0.0 {
                for (v, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *v -= factor * p;
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = m[row][n];
        for k in row + 1..n {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

/// Numerical rank of a set of row vectors (row echelon with relative threshold).
pub(crate) fn rank(rows: &[Vec<f64>], eps: f64) -> usize {
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let Some(cols) = m.first().map(Vec::len) else {
        return 0;
    };
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0_f64, |acc, v| acc.max(v.abs()))
        .max(1.0);
    let mut r = 0;
    for col in 0..cols {
        if r == m.len() {
            break;
        }
        let piv = (r..m.len())
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[piv][col].abs() <= eps * scale {
            continue;
        }
        m.swap(r, piv);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            let factor = row[col] / pivot_row[col];
            for (v, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *v -= factor * p;
            }
        }
        r += 1;
    }
    r
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let x = solve(&a, &[3.0, 5.0], 1e-12).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-12 && (x[1] - 1.4).abs() < 1e-12);
    }

    #[test]
    fn singular_system_is_rejected() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(solve(&a, &[1.0, 1.0], 1e-12).is_none());
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![vec![1.0, 0.0, 1.0], vec![2.0, 0.0, 2.0], vec![0.0, 1.0, 0.0]];
        assert_eq!(rank(&rows, 1e-10), 2);
        assert_eq!(rank(&[], 1e-10), 0);
    }
}
