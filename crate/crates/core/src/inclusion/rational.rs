use num_rational::Ratio;

pub(crate) type Q = Ratio<i128>;

/// Reduced row echelon form of an augmented system `[A | B]`, pivoting only
/// inside the first `n_vars` columns.
#[derive(Debug, Clone)]
pub(crate) struct Rref {
    pub rows: Vec<Vec<Q>>,
    /// Pivot column of each leading row, in order.
    pub pivots: Vec<usize>,
    pub n_vars: usize,
}

impl Rref {
    pub fn new(mut rows: Vec<Vec<Q>>, n_vars: usize) -> Rref {
        let zero = Q::from_integer(0);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n_vars {
            let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != zero) else {
                continue;
            };
            rows.swap(r, p);
            let inv = rows[r][c].recip();
            for x in rows[r].iter_mut() {
                *x *= inv;
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row[c] != zero {
                    let f = row[c];
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        *x -= f * y;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        Rref { rows, pivots, n_vars }
    }

    /// Right-hand side columns that admit no solution.
    pub fn inconsistent(&self) -> Vec<usize> {
        let zero = Q::from_integer(0);
        let width = self.rows.first().map_or(self.n_vars, Vec::len);
        (self.n_vars..width)
            .filter(|&j| self.rows[self.pivots.len()..].iter().any(|row| row[j] != zero))
            .map(|j| j - self.n_vars)
            .collect()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.n_vars).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// The solution for right-hand side `rhs` with the free variables set to `free`.
    pub fn solve(&self, rhs: usize, free: &[(usize, Q)]) -> Vec<Q> {
        let mut x = vec![Q::from_integer(0); self.n_vars];
        for &(c, v) in free {
            x[c] = v;
        }
        for (i, &p) in self.pivots.iter().enumerate() {
            let row = &self.rows[i];
            let mut v = row[self.n_vars + rhs];
            for &(c, f) in free {
                v -= row[c] * f;
            }
            x[p] = v;
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i128]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&x| Q::from_integer(x)).collect()).collect()
    }

    #[test]
    fn unique_solution() {
        let r = Rref::new(q(&[&[2, 1, 5], &[1, -1, 1]]), 2);
        assert!(r.free_columns().is_empty());
        assert!(r.inconsistent().is_empty());
        assert_eq!(r.solve(0, &[]), vec![Q::from_integer(2), Q::from_integer(1)]);
    }

    #[test]
    fn free_and_inconsistent() {
        let r = Rref::new(q(&[&[1, 1, 2, 1], &[2, 2, 4, 3]]), 2);
        assert_eq!(r.free_columns(), vec![1]);
        assert_eq!(r.inconsistent(), vec![1]);
        let x = r.solve(0, &[(1, Q::from_integer(3))]);
        assert_eq!(x, vec![Q::from_integer(-1), Q::from_integer(3)]);
    }
}
